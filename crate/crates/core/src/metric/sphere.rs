use std::collections::{BTreeSet, HashSet};

use crate::patch::{FaceId, TessellationPatch, VertexId};

use super::polygon::Label;
use super::{layers_with_margin, MetricError, Polygon};

/// Faces of the distance sphere `A_k` in the cyclic order induced by walking
/// `∂B_{k−1}`. Only cyclically subsequent faces intersect, and each such
/// intersection contains a vertex of `∂B_{k−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereEnumeration {
    pub k: usize,
    pub faces: Vec<FaceId>,
}

impl SphereEnumeration {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Cyclic predecessor and successor of position `j`.
    pub fn around(&self, j: usize) -> (FaceId, FaceId) {
        let n = self.faces.len();
        (self.faces[(j + n - 1) % n], self.faces[(j + 1) % n])
    }
}

fn inconsistent(msg: String) -> MetricError {
    MetricError::EnumerationInconsistent(msg)
}

fn undirected(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    (a.min(b), a.max(b))
}

/// Exterior faces at boundary vertex `v` (boundary path `u -> v -> w`),
/// counterclockwise from the face across `uv` to the face across `vw`.
fn exterior_fan(patch: &TessellationPatch, u: VertexId, v: VertexId, w: VertexId) -> Result<Vec<FaceId>, MetricError> {
    let missing = || inconsistent(format!("open fan at boundary vertex {v}"));
    let end = patch.face_of_directed(w, v).ok_or_else(missing)?;
    let mut f = patch.face_of_directed(v, u).ok_or_else(missing)?;
    let mut out = vec![f];
    while f != end {
        let p = patch.prev_in_face(f, v).ok_or_else(missing)?;
        f = patch.face_of_directed(v, p).ok_or_else(missing)?;
        out.push(f);
        if out.len() > patch.faces_at(v).len() {
            return Err(missing());
        }
    }
    Ok(out)
}

pub fn enumerate_sphere(patch: &TessellationPatch, f0: FaceId, k: usize) -> Result<SphereEnumeration, MetricError> {
    let layers = layers_with_margin(patch, &[f0], k + 1, k + 1)?;
    if k == 0 {
        return Ok(SphereEnumeration { k, faces: vec![f0] });
    }
    let sphere = layers.sphere(k);
    let inner = Polygon::new(patch, layers.ball(k - 1))?;
    let boundary = inner.boundary();
    let n = boundary.len();

    let mut order: Vec<FaceId> = Vec::new();
    for i in 0..n {
        let (u, v, w) = (boundary[(i + n - 1) % n], boundary[i], boundary[(i + 1) % n]);
        for f in exterior_fan(patch, u, v, w)? {
            if sphere.contains(&f) && order.last() != Some(&f) {
                order.push(f);
            }
        }
    }
    if order.len() > 1 && order.first() == order.last() {
        order.pop();
    }

    let mut seen = HashSet::new();
    if let Some(f) = order.iter().find(|f| !seen.insert(**f)) {
        return Err(inconsistent(format!("face {f} recurs along the sphere walk")));
    }
    if let Some(f) = sphere.iter().find(|f| !seen.contains(*f)) {
        return Err(inconsistent(format!("face {f} of A_{k} is not met by the sphere walk")));
    }

    let on_inner: HashSet<VertexId> = boundary.iter().copied().collect();
    let vsets: Vec<HashSet<VertexId>> =
        order.iter().map(|&f| patch.cycle(f).unwrap_or(&[]).iter().copied().collect()).collect();
    let m = order.len();
    for i in 0..m {
        for j in i + 1..m {
            let common: Vec<VertexId> = vsets[i].intersection(&vsets[j]).copied().collect();
            let subsequent = j == i + 1 || (i == 0 && j == m - 1);
            if !subsequent && !common.is_empty() {
                return Err(inconsistent(format!(
                    "faces {} and {} are not subsequent but meet at vertex {}",
                    order[i], order[j], common[0]
                )));
            }
            if subsequent && !common.is_empty() && !common.iter().any(|v| on_inner.contains(v)) {
                return Err(inconsistent(format!(
                    "faces {} and {} meet away from the inner boundary",
                    order[i], order[j]
                )));
            }
        }
    }
    Ok(SphereEnumeration { k, faces: order })
}

fn shares_edge(patch: &TessellationPatch, f: FaceId, g: FaceId) -> bool {
    patch.face_edges(f).any(|(a, b)| patch.face_of_directed(b, a) == Some(g))
}

/// A face of the enumeration that meets `∂B_{k−1}` in exactly one edge, or
/// that shares an edge with at most one of its two cyclic neighbours.
pub fn check_lemma28(
    en: &SphereEnumeration,
    patch: &TessellationPatch,
    f0: FaceId,
    k: usize,
) -> Result<FaceId, MetricError> {
    if en.k != k {
        return Err(MetricError::InvalidArgument(format!("enumeration is for A_{}, not A_{k}", en.k)));
    }
    let inner_edges = if k == 0 {
        BTreeSet::new()
    } else {
        let layers = layers_with_margin(patch, &[f0], k, k)?;
        Polygon::new(patch, layers.ball(k - 1))?.boundary_edges()
    };
    for (j, &f) in en.faces.iter().enumerate() {
        let on_inner = patch.face_edges(f).filter(|&(a, b)| inner_edges.contains(&undirected(a, b))).count();
        if on_inner == 1 {
            return Ok(f);
        }
        let (prev, next) = en.around(j);
        let nbrs: BTreeSet<FaceId> = [prev, next].into_iter().filter(|&g| g != f).collect();
        if nbrs.iter().filter(|&&g| shares_edge(patch, f, g)).count() <= 1 {
            return Ok(f);
        }
    }
    Err(MetricError::NoSphereWitness { k })
}

/// Whether `∂B_k` reads `a+, b, a+, b, ...` with every `b` vertex of
/// exterior degree one.
pub fn check_forbidden_alternation(patch: &TessellationPatch, f0: FaceId, k: usize) -> Result<bool, MetricError> {
    let ball = super::distance_ball(patch, f0, k)?;
    let labels = ball.label_sequence()?;
    let n = labels.len();
    if n % 2 != 0 {
        return Ok(false);
    }
    let alternating = (0..n).all(|i| matches!(labels[i], Label::APlus | Label::B) && labels[i] != labels[(i + 1) % n]);
    if !alternating {
        return Ok(false);
    }
    for (i, &v) in ball.boundary().iter().enumerate() {
        if labels[i] == Label::B && ball.exterior_degree(v)? != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Faces of `A_k` without an edge on `∂B_k`; empty when every sphere face
/// reaches the boundary.
pub fn sphere_faces_touch_boundary(
    patch: &TessellationPatch,
    f0: FaceId,
    k: usize,
) -> Result<Vec<FaceId>, MetricError> {
    let layers = layers_with_margin(patch, &[f0], k + 1, k + 1)?;
    let outer = Polygon::new(patch, layers.ball(k))?.boundary_edges();
    Ok(layers
        .sphere(k)
        .into_iter()
        .filter(|&f| !patch.face_edges(f).any(|(a, b)| outer.contains(&undirected(a, b))))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::generate_regular;
    use crate::metric::distance_ball;

    #[test]
    fn square_sphere_of_radius_one() {
        let (patch, base) = generate_regular(4, 4, 3).unwrap();
        let en = enumerate_sphere(&patch, base, 1).unwrap();
        assert_eq!(en.len(), 4);
        for j in 0..4 {
            let (_, next) = en.around(j);
            assert!(!shares_edge(&patch, en.faces[j], next));
        }
        let w = check_lemma28(&en, &patch, base, 1).unwrap();
        assert!(en.faces.contains(&w));
        assert_eq!(check_forbidden_alternation(&patch, base, 1), Ok(false));
        assert_eq!(check_forbidden_alternation(&patch, base, 0), Ok(false));
    }

    #[test]
    fn hexagon_petals_share_edges() {
        let (patch, base) = generate_regular(6, 3, 3).unwrap();
        let en = enumerate_sphere(&patch, base, 1).unwrap();
        assert_eq!(en.len(), 6);
        for j in 0..6 {
            let (_, next) = en.around(j);
            assert!(shares_edge(&patch, en.faces[j], next));
        }
        assert!(check_lemma28(&en, &patch, base, 1).is_ok());
        let ball = distance_ball(&patch, base, 1).unwrap();
        assert_eq!(ball.boundary().len(), 18);
    }

    #[test]
    fn sphere_zero_is_the_base() {
        let (patch, base) = generate_regular(3, 7, 2).unwrap();
        let en = enumerate_sphere(&patch, base, 0).unwrap();
        assert_eq!(en.faces, vec![base]);
        assert!(sphere_faces_touch_boundary(&patch, base, 0).unwrap().is_empty());
    }
}
