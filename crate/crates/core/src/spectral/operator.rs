use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SpectralError;
use crate::patch::{FaceId, PatchError, TessellationPatch, VertexId};
use crate::rational::{format_rational, int, parse_rational, rat, Rational};

/// Vertex operator with nonzero coefficients on every edge between complete
/// vertices and arbitrary diagonal. Missing entries read as zero.
#[derive(Clone, Debug)]
pub struct EllipticOperator<'p> {
    patch: &'p TessellationPatch,
    entries: BTreeMap<(VertexId, VertexId), Rational>,
}

impl<'p> EllipticOperator<'p> {
    /// Checks the sparsity pattern and ellipticity.
    pub fn new(
        patch: &'p TessellationPatch,
        entries: BTreeMap<(VertexId, VertexId), Rational>,
    ) -> Result<Self, SpectralError> {
        for &(v, w) in entries.keys() {
            for x in [v, w] {
                if !patch.contains_vertex(x) {
                    return Err(PatchError::UnknownVertex(x).into());
                }
            }
            if v != w && !patch.adjacent(v, w) {
                return Err(SpectralError::Pattern(v, w));
            }
        }
        let op = Self { patch, entries };
        for v in patch.vertices() {
            for &w in patch.neighbors(v) {
                if patch.is_vertex_complete(v) && patch.is_vertex_complete(w) && op.get(v, w).is_zero() {
                    return Err(SpectralError::NotElliptic(v, w));
                }
            }
        }
        Ok(op)
    }

    fn build(patch: &'p TessellationPatch, mut entry: impl FnMut(VertexId, Option<VertexId>) -> Rational) -> Self {
        let mut entries = BTreeMap::new();
        for v in patch.vertices() {
            let d = entry(v, None);
            if !d.is_zero() {
                entries.insert((v, v), d);
            }
            for &w in patch.neighbors(v) {
                entries.insert((v, w), entry(v, Some(w)));
            }
        }
        Self { patch, entries }
    }

    /// Seeded random operator: off-diagonal entries `±n/d` and diagonal
    /// entries `n/d` with `|n| <= magnitude`, `1 <= d <= magnitude`. Entries
    /// are drawn vertex by vertex in ascending id order, diagonal first.
    pub fn random(patch: &'p TessellationPatch, seed: u64, magnitude: u32) -> Result<Self, SpectralError> {
        if magnitude < 1 {
            return Err(SpectralError::InvalidArgument("magnitude must be at least 1".into()));
        }
        let m = magnitude as i64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(Self::build(patch, |_, w| match w {
            None => {
                let n = rng.random_range(-m..=m);
                let d = rng.random_range(1..=m);
                rat(n, d)
            }
            Some(_) => {
                let n = rng.random_range(1..=m);
                let d = rng.random_range(1..=m);
                let s = if rng.random_bool(0.5) { 1 } else { -1 };
                rat(s * n, d)
            }
        }))
    }

    /// `a(v,w) = 1` on edges, zero diagonal.
    pub fn adjacency(patch: &'p TessellationPatch) -> Self {
        Self::build(patch, |_, w| if w.is_some() { Rational::one() } else { Rational::zero() })
    }

    /// `a(v,v) = |v|`, `a(v,w) = 1` on edges.
    pub fn laplacian(patch: &'p TessellationPatch) -> Self {
        Self::build(patch, |v, w| match w {
            None => int(patch.neighbors(v).len() as i64),
            Some(_) => Rational::one(),
        })
    }

    pub fn patch(&self) -> &'p TessellationPatch {
        self.patch
    }

    pub fn get(&self, v: VertexId, w: VertexId) -> Rational {
        self.entries.get(&(v, w)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> &BTreeMap<(VertexId, VertexId), Rational> {
        &self.entries
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self {
            patch: self.patch,
            entries: self.entries.iter().map(|(k, a)| (*k, a * c)).filter(|(_, a)| !a.is_zero()).collect(),
        }
    }

    /// `(Lu)(v) = a(v,v) u(v) + sum over neighbours w of a(v,w) u(w)`.
    pub fn apply(&self, u: &BTreeMap<VertexId, Rational>, v: VertexId) -> Result<Rational, SpectralError> {
        if !self.patch.is_vertex_complete(v) {
            return Err(PatchError::IncompleteVertex(v).into());
        }
        let at = |x: VertexId| u.get(&x).cloned().unwrap_or_else(Rational::zero);
        let mut acc = self.get(v, v) * at(v);
        for &w in self.patch.neighbors(v) {
            acc += self.get(v, w) * at(w);
        }
        Ok(acc)
    }

    /// `op 1` header and one `entry v w num/den` line per stored entry.
    pub fn to_text(&self) -> String {
        let mut out = String::from("op 1\n");
        for ((v, w), a) in &self.entries {
            let _ = writeln!(out, "entry {v} {w} {}", format_rational(a));
        }
        out
    }

    pub fn from_text(patch: &'p TessellationPatch, text: &str) -> Result<Self, SpectralError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let bad = |line: usize, msg: String| SpectralError::Parse { line, message: msg };
        match lines.next() {
            Some((_, "op 1")) => {}
            Some((n, l)) => return Err(bad(n, format!("expected header \"op 1\", found {l:?}"))),
            None => return Err(bad(1, "empty operator file".into())),
        }
        let mut entries = BTreeMap::new();
        for (n, l) in lines {
            let parts: Vec<&str> = l.split_whitespace().collect();
            let [kw, v, w, a] = parts[..] else {
                return Err(bad(n, format!("expected \"entry <v> <w> <num>/<den>\", found {l:?}")));
            };
            if kw != "entry" {
                return Err(bad(n, format!("unrecognised line {l:?}")));
            }
            let id = |s: &str| s.parse::<u32>().map(VertexId).map_err(|_| bad(n, format!("bad vertex id {s:?}")));
            let (v, w) = (id(v)?, id(w)?);
            let a = parse_rational(a).ok_or_else(|| bad(n, format!("bad rational {a:?}")))?;
            if entries.insert((v, w), a).is_some() {
                return Err(bad(n, format!("duplicate entry {v} {w}")));
            }
        }
        Self::new(patch, entries)
    }
}

/// Finite support `S` with its outer ring `∂⁺S = N(S) \ S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSet {
    vertices: Vec<VertexId>,
    outer: Vec<VertexId>,
}

impl SupportSet {
    /// Requires every vertex of `S ∪ ∂⁺S` to be complete, so that all
    /// equations touching `S` are known.
    pub fn new(patch: &TessellationPatch, vertices: impl IntoIterator<Item = VertexId>) -> Result<Self, SpectralError> {
        let set: BTreeSet<VertexId> = vertices.into_iter().collect();
        let mut outer = BTreeSet::new();
        for &v in &set {
            if !patch.contains_vertex(v) {
                return Err(PatchError::UnknownVertex(v).into());
            }
            if !patch.is_vertex_complete(v) {
                return Err(SpectralError::Margin(v));
            }
            outer.extend(patch.neighbors(v).iter().filter(|w| !set.contains(w)));
        }
        if let Some(&w) = outer.iter().find(|&&w| !patch.is_vertex_complete(w)) {
            return Err(SpectralError::Margin(w));
        }
        Ok(Self { vertices: set.into_iter().collect(), outer: outer.into_iter().collect() })
    }

    /// Vertices within graph distance `r` of `center`.
    pub fn ball(patch: &TessellationPatch, center: VertexId, r: usize) -> Result<Self, SpectralError> {
        if !patch.contains_vertex(center) {
            return Err(PatchError::UnknownVertex(center).into());
        }
        let mut dist = BTreeMap::from([(center, 0usize)]);
        let mut queue = VecDeque::from([center]);
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            if d == r {
                continue;
            }
            for &w in patch.neighbors(v) {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(d + 1);
                    queue.push_back(w);
                }
            }
        }
        Self::new(patch, dist.into_keys())
    }

    /// The vertices of one face.
    pub fn face(patch: &TessellationPatch, f: FaceId) -> Result<Self, SpectralError> {
        let cycle = patch.cycle(f).ok_or(PatchError::UnknownFace(f))?;
        Self::new(patch, cycle.iter().copied())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn outer(&self) -> &[VertexId] {
        &self.outer
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate_kagome, generate_regular};

    #[test]
    fn random_operator_is_deterministic_and_elliptic() {
        let (patch, _) = generate_regular(4, 4, 2).unwrap();
        let a = EllipticOperator::random(&patch, 7, 4).unwrap();
        let b = EllipticOperator::random(&patch, 7, 4).unwrap();
        assert_eq!(a.entries(), b.entries());
        assert_ne!(a.entries(), EllipticOperator::random(&patch, 8, 4).unwrap().entries());
        for v in patch.vertices() {
            for &w in patch.neighbors(v) {
                assert!(!a.get(v, w).is_zero());
            }
        }
        assert!(EllipticOperator::new(&patch, a.entries().clone()).is_ok());
    }

    #[test]
    fn laplacian_on_indicator() {
        let (patch, _) = generate_regular(4, 4, 2).unwrap();
        let op = EllipticOperator::laplacian(&patch);
        let v = *patch.complete_vertices().iter().next().unwrap();
        let u = BTreeMap::from([(v, int(1))]);
        assert_eq!(op.apply(&u, v).unwrap(), int(4));
        assert_eq!(op.apply(&BTreeMap::new(), v).unwrap(), int(0));
    }

    #[test]
    fn text_round_trip_and_pattern_errors() {
        let (patch, _) = generate_regular(3, 7, 1).unwrap();
        let op = EllipticOperator::random(&patch, 3, 4).unwrap();
        let back = EllipticOperator::from_text(&patch, &op.to_text()).unwrap();
        assert_eq!(back.entries(), op.entries());

        let v = *patch.complete_vertices().iter().next().unwrap();
        let w = patch.neighbors(v)[0];
        let mut entries = op.entries().clone();
        entries.insert((v, w), int(0));
        assert!(matches!(EllipticOperator::new(&patch, entries), Err(SpectralError::NotElliptic(..))));
    }

    #[test]
    fn kagome_hexagon_support() {
        let (patch, base) = generate_kagome(3).unwrap();
        let s = SupportSet::face(&patch, base).unwrap();
        assert_eq!(s.len(), 6);
        // One triangle apex per hexagon edge.
        assert_eq!(s.outer().len(), 6);
        assert!(SupportSet::ball(&patch, VertexId(0), 40).is_err());
    }
}
