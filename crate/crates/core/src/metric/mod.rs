//! Face-distance geometry: distance balls and spheres, polygons and their
//! boundary labels, cut locus, sphere enumeration, and growth statistics.
//!
//! Every operation that looks at a ball of radius `k` first checks that the
//! faces out to a stated margin are closed (complete, with all vertices
//! complete), so that finite-window edge effects surface as
//! [`MetricError::Margin`] rather than as spurious results.

mod polygon;
mod sphere;

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::curvature::face_chi;
use crate::patch::{FaceId, PatchError, TessellationPatch, VertexId};
use crate::rational::{int, Rational};

pub use polygon::{edge_run, BelabelViolation, Label, Polygon, TubeViolation};
pub use sphere::{
    check_forbidden_alternation, check_lemma28, enumerate_sphere, sphere_faces_touch_boundary, SphereEnumeration,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error(transparent)]
    Patch(#[from] PatchError),
    #[error("faces {0} and {1} are not connected through complete faces")]
    Disconnected(FaceId, FaceId),
    #[error(
        "insufficient patch radius: need {needed} closed layers, face {face} at distance {distance} is not closed"
    )]
    Margin { needed: usize, face: FaceId, distance: usize },
    #[error("not a polygon: {0}")]
    NotAPolygon(String),
    #[error("vertex {0} is not on the polygon boundary")]
    NotOnBoundary(VertexId),
    #[error("boundary vertex {0} has exterior degree 0")]
    NoExterior(VertexId),
    #[error("enumeration inconsistent: {0}")]
    EnumerationInconsistent(String),
    #[error("no face of A_{k} satisfies either alternative of the sphere lemma")]
    NoSphereWitness { k: usize },
    #[error("{0}")]
    InvalidArgument(String),
}

/// Breadth-first layers of faces around a source set. Faces within each
/// layer are sorted by id.
#[derive(Clone, Debug)]
pub struct FaceLayers {
    pub dist: HashMap<FaceId, usize>,
    pub layers: Vec<Vec<FaceId>>,
}

impl FaceLayers {
    pub fn distance(&self, f: FaceId) -> Option<usize> {
        self.dist.get(&f).copied()
    }

    /// Faces at distance at most `k`.
    pub fn ball(&self, k: usize) -> BTreeSet<FaceId> {
        self.layers.iter().take(k + 1).flatten().copied().collect()
    }

    pub fn sphere(&self, k: usize) -> BTreeSet<FaceId> {
        self.layers.get(k).map(|l| l.iter().copied().collect()).unwrap_or_default()
    }
}

/// Plain BFS over edge-adjacent faces up to `max_depth` (unbounded if
/// `None`), with no completeness checks.
pub fn face_bfs(patch: &TessellationPatch, sources: &[FaceId], max_depth: Option<usize>) -> FaceLayers {
    let mut dist = HashMap::new();
    let mut first: Vec<FaceId> = sources.iter().copied().filter(|f| patch.contains_face(*f)).collect();
    first.sort_unstable();
    first.dedup();
    for &f in &first {
        dist.insert(f, 0);
    }
    let mut layers = vec![first];
    loop {
        let d = layers.len();
        if max_depth.is_some_and(|m| d > m) {
            break;
        }
        let mut next = Vec::new();
        for &f in layers.last().unwrap() {
            for g in patch.face_neighbors(f) {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(g) {
                    e.insert(d);
                    next.push(g);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        layers.push(next);
    }
    FaceLayers { dist, layers }
}

/// BFS layers out to `depth`, after checking that every face within
/// `margin` of the sources is closed. Layers up to `margin + 1` are exact
/// distances in the underlying tessellation.
pub fn layers_with_margin(
    patch: &TessellationPatch,
    sources: &[FaceId],
    depth: usize,
    margin: usize,
) -> Result<FaceLayers, MetricError> {
    for &f in sources {
        if !patch.contains_face(f) {
            return Err(PatchError::UnknownFace(f).into());
        }
    }
    let layers = face_bfs(patch, sources, Some(depth.max(margin)));
    for (d, layer) in layers.layers.iter().enumerate().take(margin + 1) {
        if let Some(&face) = layer.iter().find(|&&f| !patch.is_face_closed(f)) {
            return Err(MetricError::Margin { needed: margin, face, distance: d });
        }
    }
    Ok(layers)
}

/// Length of the shortest edge-neighbour path between two faces, through
/// complete faces only.
pub fn face_distance(patch: &TessellationPatch, f: FaceId, g: FaceId) -> Result<usize, MetricError> {
    for x in [f, g] {
        if !patch.contains_face(x) {
            return Err(PatchError::UnknownFace(x).into());
        }
        if !patch.is_face_complete(x) {
            return Err(PatchError::IncompleteFace(x).into());
        }
    }
    let mut dist = HashMap::from([(f, 0usize)]);
    let mut queue = VecDeque::from([f]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if x == g {
            return Ok(d);
        }
        for y in patch.face_neighbors(x) {
            if patch.is_face_complete(y) && !dist.contains_key(&y) {
                dist.insert(y, d + 1);
                queue.push_back(y);
            }
        }
    }
    Err(MetricError::Disconnected(f, g))
}

/// `B_k(f0)` as a polygon. Needs `B_{k+1}(f0)` closed.
pub fn distance_ball(patch: &TessellationPatch, f0: FaceId, k: usize) -> Result<Polygon<'_>, MetricError> {
    let layers = layers_with_margin(patch, &[f0], k + 1, k + 1)?;
    Polygon::new(patch, layers.ball(k))
}

/// `A_k(f0)`. Needs `B_{k+1}(f0)` closed.
pub fn distance_sphere(patch: &TessellationPatch, f0: FaceId, k: usize) -> Result<BTreeSet<FaceId>, MetricError> {
    let layers = layers_with_margin(patch, &[f0], k + 1, k + 1)?;
    Ok(layers.sphere(k))
}

/// `B_k(P)`, the faces within distance `k` of the polygon. Needs
/// `B_{k+1}(P)` closed.
pub fn k_neighborhood<'p>(polygon: &Polygon<'p>, k: usize) -> Result<Polygon<'p>, MetricError> {
    let patch = polygon.patch();
    let sources: Vec<FaceId> = polygon.faces().iter().copied().collect();
    let layers = layers_with_margin(patch, &sources, k + 1, k + 1)?;
    Polygon::new(patch, layers.ball(k))
}

/// Faces within `radius` of `f0` at which the distance to `f0` has a local
/// maximum. Needs `B_{radius+1}(f0)` closed.
pub fn cut_locus(patch: &TessellationPatch, f0: FaceId, radius: usize) -> Result<BTreeSet<FaceId>, MetricError> {
    let layers = layers_with_margin(patch, &[f0], radius + 2, radius + 1)?;
    let mut out = BTreeSet::new();
    for layer in layers.layers.iter().take(radius + 1) {
        for &g in layer {
            let dg = layers.dist[&g];
            let is_max = patch.face_neighbors(g).iter().all(|h| layers.distance(*h).is_some_and(|dh| dh <= dg));
            if is_max {
                out.insert(g);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthRow {
    pub k: usize,
    pub ball: usize,
    pub sphere: usize,
    /// Average of `face_chi` over `B_k`.
    pub mean_chi: Rational,
    /// `|B_{k+1}|`, for the growth ratio.
    pub next_ball: usize,
}

impl GrowthRow {
    pub fn ratio(&self) -> Rational {
        crate::rational::rat(self.next_ball as i64, self.ball as i64)
    }
}

/// Ball and sphere sizes with exact mean face Euler characteristic for
/// `k = 0..=kmax`. Needs `B_{kmax+1}(f0)` closed.
pub fn growth_report(patch: &TessellationPatch, f0: FaceId, kmax: usize) -> Result<Vec<GrowthRow>, MetricError> {
    let layers = layers_with_margin(patch, &[f0], kmax + 1, kmax + 1)?;
    let mut rows = Vec::with_capacity(kmax + 1);
    let mut ball = 0usize;
    let mut chi_sum = int(0);
    for k in 0..=kmax {
        let layer = &layers.layers[k];
        ball += layer.len();
        for &f in layer {
            chi_sum += face_chi(patch, f)?;
        }
        let next_ball = ball + layers.layers.get(k + 1).map_or(0, Vec::len);
        rows.push(GrowthRow { k, ball, sphere: layer.len(), mean_chi: &chi_sum / int(ball as i64), next_ball });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::generate_regular;

    #[test]
    fn margin_is_enforced() {
        let (patch, base) = generate_regular(4, 4, 2).unwrap();
        assert!(distance_ball(&patch, base, 1).is_ok());
        let err = distance_ball(&patch, base, 2).unwrap_err();
        assert!(matches!(err, MetricError::Margin { needed: 3, .. }), "{err}");
        assert!(matches!(cut_locus(&patch, base, 2), Err(MetricError::Margin { .. })));
    }

    #[test]
    fn diagonal_squares_are_two_apart() {
        let (patch, base) = generate_regular(4, 4, 3).unwrap();
        let layers = face_bfs(&patch, &[base], Some(2));
        // Faces sharing only a vertex with the base are exactly the depth-2
        // faces touching a base vertex.
        let base_vertices: BTreeSet<VertexId> = patch.cycle(base).unwrap().iter().copied().collect();
        let diagonal: Vec<FaceId> = patch
            .face_ids()
            .filter(|&f| f != base && !patch.face_neighbors(base).contains(&f))
            .filter(|&f| patch.cycle(f).unwrap().iter().any(|v| base_vertices.contains(v)))
            .collect();
        assert_eq!(diagonal.len(), 4);
        for f in diagonal {
            assert_eq!(face_distance(&patch, base, f), Ok(2));
            assert_eq!(layers.distance(f), Some(2));
        }
        let nb = patch.face_neighbors(base)[0];
        assert_eq!(face_distance(&patch, base, nb), Ok(1));
        assert_eq!(face_distance(&patch, base, base), Ok(0));
    }

    #[test]
    fn disconnected_faces_error() {
        let p = TessellationPatch::new(
            [
                (FaceId(0), vec![VertexId(0), VertexId(1), VertexId(2)]),
                (FaceId(1), vec![VertexId(3), VertexId(4), VertexId(5)]),
            ],
            [],
            [FaceId(0), FaceId(1)],
        )
        .unwrap();
        assert_eq!(face_distance(&p, FaceId(0), FaceId(1)), Err(MetricError::Disconnected(FaceId(0), FaceId(1))));
    }
}
