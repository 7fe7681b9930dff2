//! SVG drawing of disc patches. The boundary cycle goes on the unit circle
//! and every other vertex sits at the average of its neighbours (Tutte's
//! barycentric embedding), found with a sparse Cholesky solve.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use nalgebra::DMatrix;
use nalgebra_sparse::factorization::CscCholesky;
use nalgebra_sparse::{CooMatrix, CscMatrix};
use num_traits::Signed;
use tess_core::curvature::partial_face_chi;
use tess_core::{TessellationPatch, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RenderError {
    Empty,
    NotDisc(String),
}

impl std::fmt::Display for RenderError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RenderError::Empty => f.write_str("patch has no faces"),
            RenderError::NotDisc(why) => write!(f, "patch is not a disc: {why}"),
        }
    }
}

const NEGATIVE: &str = "#5b84c4";
const ZERO: &str = "#d8d8d8";
const POSITIVE: &str = "#d8673f";
const UNKNOWN: &str = "#ffffff";

/// Outer boundary as a single vertex cycle, oriented like the faces.
fn boundary_cycle(patch: &TessellationPatch) -> Result<Vec<VertexId>, RenderError> {
    let directed: BTreeSet<(VertexId, VertexId)> =
        patch.face_ids().flat_map(|f| patch.face_edges(f).collect::<Vec<_>>()).collect();
    let mut next = BTreeMap::new();
    for &(a, b) in &directed {
        if !directed.contains(&(b, a)) && next.insert(a, b).is_some() {
            return Err(RenderError::NotDisc(format!("boundary is pinched at vertex {a}")));
        }
    }
    let Some((&start, _)) = next.iter().next() else {
        return Err(RenderError::NotDisc("no boundary".into()));
    };
    let mut cycle = vec![start];
    let mut v = next[&start];
    while v != start {
        cycle.push(v);
        v = *next.get(&v).ok_or_else(|| RenderError::NotDisc(format!("boundary stops at vertex {v}")))?;
        if cycle.len() > next.len() {
            return Err(RenderError::NotDisc("boundary does not close".into()));
        }
    }
    if cycle.len() != next.len() {
        return Err(RenderError::NotDisc("more than one boundary cycle".into()));
    }
    let undirected = directed.iter().filter(|(a, b)| a < b || !directed.contains(&(*b, *a))).count();
    let euler = patch.vertex_count() as i64 - undirected as i64 + patch.face_count() as i64;
    if euler != 1 {
        return Err(RenderError::NotDisc(format!("Euler characteristic {euler}")));
    }
    Ok(cycle)
}

fn layout(patch: &TessellationPatch, boundary: &[VertexId]) -> Result<BTreeMap<VertexId, (f64, f64)>, RenderError> {
    let n = boundary.len() as f64;
    let mut pos: BTreeMap<VertexId, (f64, f64)> = boundary
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let a = std::f64::consts::TAU * i as f64 / n;
            (v, (a.cos(), a.sin()))
        })
        .collect();
    let inner: Vec<VertexId> = patch.vertices().filter(|v| !pos.contains_key(v)).collect();
    if inner.is_empty() {
        return Ok(pos);
    }
    let index: BTreeMap<VertexId, usize> = inner.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut coo = CooMatrix::new(inner.len(), inner.len());
    let mut rhs = DMatrix::<f64>::zeros(inner.len(), 2);
    for (i, &v) in inner.iter().enumerate() {
        let nb = patch.neighbors(v);
        coo.push(i, i, nb.len() as f64);
        for w in nb {
            match index.get(w) {
                Some(&j) => coo.push(i, j, -1.0),
                None => {
                    let (x, y) = pos[w];
                    rhs[(i, 0)] += x;
                    rhs[(i, 1)] += y;
                }
            }
        }
    }
    let chol = CscCholesky::factor(&CscMatrix::from(&coo))
        .map_err(|_| RenderError::NotDisc("interior vertices are not connected to the boundary".into()))?;
    let sol = chol.solve(&rhs);
    for (i, &v) in inner.iter().enumerate() {
        pos.insert(v, (sol[(i, 0)], sol[(i, 1)]));
    }
    Ok(pos)
}

pub fn render_svg(patch: &TessellationPatch) -> Result<String, RenderError> {
    if patch.is_empty() {
        return Err(RenderError::Empty);
    }
    let boundary = boundary_cycle(patch)?;
    let pos = layout(patch, &boundary)?;

    let mut svg = String::from(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.05 -1.05 2.1 2.1\" width=\"800\" height=\"800\">\n",
    );
    svg.push_str("<g stroke=\"#222222\" stroke-width=\"0.002\" stroke-linejoin=\"round\">\n");
    for (f, cycle) in patch.faces() {
        let has_complete = cycle.iter().any(|v| patch.is_vertex_complete(*v));
        let (class, fill) = match partial_face_chi(patch, f) {
            Ok(chi) if has_complete && chi.is_negative() => ("chi-neg", NEGATIVE),
            Ok(chi) if has_complete && chi.is_positive() => ("chi-pos", POSITIVE),
            Ok(_) if has_complete => ("chi-zero", ZERO),
            _ => ("chi-unknown", UNKNOWN),
        };
        let points: Vec<String> = cycle
            .iter()
            .map(|v| {
                let (x, y) = pos[v];
                format!("{:.6},{:.6}", x, -y)
            })
            .collect();
        let _ = writeln!(
            svg,
            "<polygon data-face=\"{f}\" class=\"{class}\" fill=\"{fill}\" points=\"{}\"/>",
            points.join(" ")
        );
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}
