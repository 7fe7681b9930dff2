//! Outside-in vanishing argument for eigenfunctions, run on a patch.
//!
//! Start from `u = 0` off the interior of `B_{kmax+1}(f0)`. For each layer
//! `k = kmax, ..., 0` the unknowns on `∂B_k` are forced to zero one at a
//! time: whenever `u(x) = 0` and all neighbours of `x` but one, `y`, are
//! known zero, the equation at `x` reads `a(x,y) u(y) = 0`, so `u(y) = 0`.
//! Vertices of exterior degree above one are tried first from outside the
//! ball; the rest are swept along the boundary cycle from consecutive zeros.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;

use super::operator::EllipticOperator;
use super::SpectralError;
use crate::metric::{distance_ball, layers_with_margin};
use crate::patch::{FaceId, TessellationPatch, VertexId};
use crate::rational::{format_rational, Rational};

#[derive(Clone, Debug)]
pub enum UcInput {
    /// One unknown per vertex; the trace only uses the nonzero pattern.
    Symbolic,
    /// A given function and eigenvalue, evaluated at every step.
    Concrete { u: BTreeMap<VertexId, Rational>, lambda: Rational },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Equation at an exterior vertex whose only unknown neighbour is the
    /// boundary vertex.
    Exterior,
    /// Equation at a boundary vertex already known zero.
    Boundary,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Exterior => "exterior",
            Rule::Boundary => "boundary",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub vertex: VertexId,
    /// Vertex whose eigenfunction equation forces the zero.
    pub equation_at: VertexId,
    /// `a(equation_at, vertex)`, nonzero.
    pub coefficient: Rational,
    pub rule: Rule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerTrace {
    pub k: usize,
    pub boundary: Vec<VertexId>,
    pub eliminations: Vec<Elimination>,
    pub stalled: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationTrace {
    pub f0: FaceId,
    pub kmax: usize,
    pub layers: Vec<LayerTrace>,
    pub success: bool,
    pub failure: Option<String>,
}

/// Vertices all of whose faces lie in `faces`.
fn interior(patch: &TessellationPatch, faces: &BTreeSet<FaceId>) -> BTreeSet<VertexId> {
    faces
        .iter()
        .flat_map(|&f| patch.cycle(f).unwrap_or(&[]).iter().copied())
        .filter(|&v| patch.is_vertex_complete(v) && patch.faces_at(v).iter().all(|f| faces.contains(f)))
        .collect()
}

struct State<'a, 'p> {
    op: &'a EllipticOperator<'p>,
    input: &'a UcInput,
    unknown: BTreeSet<VertexId>,
}

impl State<'_, '_> {
    /// The single unknown neighbour of a known-zero complete vertex.
    fn lone_unknown(&self, x: VertexId) -> Option<VertexId> {
        let patch = self.op.patch();
        if self.unknown.contains(&x) || !patch.is_vertex_complete(x) {
            return None;
        }
        let mut it = patch.neighbors(x).iter().filter(|w| self.unknown.contains(w));
        match (it.next(), it.next()) {
            (Some(&y), None) => Some(y),
            _ => None,
        }
    }

    fn eliminate(&mut self, y: VertexId, x: VertexId, rule: Rule) -> Result<Elimination, String> {
        let coefficient = self.op.get(x, y);
        if coefficient.is_zero() {
            return Err(format!("a({x},{y}) = 0 on an edge"));
        }
        if let UcInput::Concrete { u, lambda } = self.input {
            let at = |v: VertexId| u.get(&v).cloned().unwrap_or_else(Rational::zero);
            let residual = self.op.apply(u, x).map_err(|e| e.to_string())? - lambda * at(x);
            if !residual.is_zero() {
                return Err(format!("eigenfunction equation fails at {x} (residual {})", format_rational(&residual)));
            }
            if !at(y).is_zero() {
                return Err(format!("u({y}) = {} but is forced to vanish", format_rational(&at(y))));
            }
        }
        self.unknown.remove(&y);
        Ok(Elimination { vertex: y, equation_at: x, coefficient, rule })
    }
}

pub fn unique_continuation_trace(
    op: &EllipticOperator<'_>,
    f0: FaceId,
    input: &UcInput,
    kmax: usize,
) -> Result<PropagationTrace, SpectralError> {
    let patch = op.patch();
    let layers = layers_with_margin(patch, &[f0], kmax + 2, kmax + 2)?;
    for v in patch.vertices() {
        for &w in patch.neighbors(v) {
            if patch.is_vertex_complete(v) && patch.is_vertex_complete(w) && op.get(v, w).is_zero() {
                return Err(SpectralError::NotElliptic(v, w));
            }
        }
    }

    let mut trace = PropagationTrace { f0, kmax, layers: Vec::new(), success: false, failure: None };
    let mut state = State { op, input, unknown: interior(patch, &layers.ball(kmax + 1)) };
    if let UcInput::Concrete { u, .. } = input {
        if let Some((v, _)) = u.iter().find(|(v, x)| !x.is_zero() && !state.unknown.contains(v)) {
            trace.failure = Some(format!("u({v}) is nonzero outside the interior of B_{}", kmax + 1));
            return Ok(trace);
        }
    }

    for k in (0..=kmax).rev() {
        let ball = distance_ball(patch, f0, k)?;
        let inner = interior(patch, ball.faces());
        let targets: BTreeSet<VertexId> = state.unknown.difference(&inner).copied().collect();
        let on_boundary: BTreeSet<VertexId> = ball.boundary().iter().copied().collect();
        let mut layer =
            LayerTrace { k, boundary: ball.boundary().to_vec(), eliminations: Vec::new(), stalled: Vec::new() };

        let step = |state: &mut State<'_, '_>, layer: &mut LayerTrace, y: VertexId, x: VertexId, rule: Rule| {
            state.eliminate(y, x, rule).map(|e| layer.eliminations.push(e))
        };
        let mut result = Ok(());

        // Boundary vertices with several exterior faces, from outside.
        for &v in ball.boundary() {
            if !state.unknown.contains(&v) || ball.exterior_degree(v)? <= 1 {
                continue;
            }
            let witness = patch
                .neighbors(v)
                .iter()
                .copied()
                .find(|&x| !on_boundary.contains(&x) && !inner.contains(&x) && state.lone_unknown(x) == Some(v));
            if let Some(x) = witness {
                result = result.and_then(|_| step(&mut state, &mut layer, v, x, Rule::Exterior));
            }
        }

        // Sweep: boundary equations first, then any other known-zero vertex.
        let mut progress = true;
        while result.is_ok() && progress && targets.iter().any(|t| state.unknown.contains(t)) {
            progress = false;
            let others: Vec<VertexId> = targets
                .iter()
                .flat_map(|&t| patch.neighbors(t).iter().copied())
                .filter(|x| !on_boundary.contains(x))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            for &x in ball.boundary().iter().chain(&others) {
                let Some(y) = state.lone_unknown(x) else { continue };
                if !targets.contains(&y) {
                    continue;
                }
                let rule = if on_boundary.contains(&x) { Rule::Boundary } else { Rule::Exterior };
                result = step(&mut state, &mut layer, y, x, rule);
                if result.is_err() {
                    break;
                }
                progress = true;
            }
        }

        layer.stalled = targets.iter().copied().filter(|t| state.unknown.contains(t)).collect();
        let stalled = !layer.stalled.is_empty();
        trace.layers.push(layer);
        if let Err(msg) = result {
            trace.failure = Some(format!("layer {k}: {msg}"));
            return Ok(trace);
        }
        if stalled {
            trace.failure = Some(format!(
                "propagation stalls at layer {k}: {} vertices of the boundary stay undetermined",
                trace.layers.last().unwrap().stalled.len()
            ));
            return Ok(trace);
        }
    }
    if !state.unknown.is_empty() {
        trace.failure = Some(format!("{} interior vertices stay undetermined", state.unknown.len()));
        return Ok(trace);
    }
    trace.success = true;
    Ok(trace)
}
