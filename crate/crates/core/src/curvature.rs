//! Corner curvature `1/|v| + 1/|f| - 1/2` and face Euler characteristic.

use num_traits::Signed;

use crate::patch::{Corner, FaceId, PatchError, TessellationPatch, VertexId};
use crate::rational::{rat, Rational};

pub fn vertex_degree(patch: &TessellationPatch, v: VertexId) -> Result<usize, PatchError> {
    if !patch.contains_vertex(v) {
        return Err(PatchError::UnknownVertex(v));
    }
    if !patch.is_vertex_complete(v) {
        return Err(PatchError::IncompleteVertex(v));
    }
    Ok(patch.neighbors(v).len())
}

pub fn face_size(patch: &TessellationPatch, f: FaceId) -> Result<usize, PatchError> {
    let cycle = patch.cycle(f).ok_or(PatchError::UnknownFace(f))?;
    if !patch.is_face_complete(f) {
        return Err(PatchError::IncompleteFace(f));
    }
    Ok(cycle.len())
}

/// Smallest face size at `v`; every face at `v` must be known.
pub fn min_face_size(patch: &TessellationPatch, v: VertexId) -> Result<usize, PatchError> {
    vertex_degree(patch, v)?;
    patch.faces_at(v).iter().map(|&f| face_size(patch, f)).try_fold(usize::MAX, |m, s| s.map(|s| m.min(s)))
}

pub fn curvature(patch: &TessellationPatch, corner: Corner) -> Result<Rational, PatchError> {
    let Corner { vertex, face } = corner;
    let cycle = patch.cycle(face).ok_or(PatchError::UnknownFace(face))?;
    if !cycle.contains(&vertex) {
        return Err(PatchError::NotACorner { vertex, face });
    }
    let deg = vertex_degree(patch, vertex)?;
    let size = face_size(patch, face)?;
    Ok(rat(1, deg as i64) + rat(1, size as i64) - rat(1, 2))
}

/// Sum of the curvature over the corners of `f`.
pub fn face_chi(patch: &TessellationPatch, f: FaceId) -> Result<Rational, PatchError> {
    let cycle = patch.cycle(f).ok_or(PatchError::UnknownFace(f))?;
    cycle.iter().map(|&vertex| curvature(patch, Corner { vertex, face: f })).sum()
}

/// Sum of the curvature over the corners of `f` whose vertex is complete.
/// Used for colouring rim faces, where some corners are undetermined.
pub fn partial_face_chi(patch: &TessellationPatch, f: FaceId) -> Result<Rational, PatchError> {
    let cycle = patch.cycle(f).ok_or(PatchError::UnknownFace(f))?;
    cycle
        .iter()
        .filter(|v| patch.is_vertex_complete(**v))
        .map(|&vertex| curvature(patch, Corner { vertex, face: f }))
        .sum()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CurvatureScan {
    pub checked: usize,
    /// Corners with an incomplete vertex or face.
    pub skipped: usize,
    pub positive: Vec<Corner>,
}

impl CurvatureScan {
    pub fn nonpositive(&self) -> bool {
        self.positive.is_empty()
    }
}

pub fn curvature_scan(patch: &TessellationPatch) -> CurvatureScan {
    let mut scan = CurvatureScan::default();
    for (face, cycle) in patch.faces() {
        for &vertex in cycle {
            let corner = Corner { vertex, face };
            match curvature(patch, corner) {
                Ok(k) => {
                    scan.checked += 1;
                    if k.is_positive() {
                        scan.positive.push(corner);
                    }
                }
                Err(_) => scan.skipped += 1,
            }
        }
    }
    scan
}

pub fn is_nonpositively_curved(patch: &TessellationPatch) -> bool {
    curvature_scan(patch).nonpositive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn square() -> TessellationPatch {
        TessellationPatch::new([(FaceId(0), vec![VertexId(0), VertexId(1), VertexId(2), VertexId(3)])], [], [FaceId(0)])
            .unwrap()
    }

    #[test]
    fn incomplete_vertex_has_no_degree() {
        let p = square();
        assert_eq!(vertex_degree(&p, VertexId(0)), Err(PatchError::IncompleteVertex(VertexId(0))));
        assert_eq!(face_size(&p, FaceId(0)), Ok(4));
        let scan = curvature_scan(&p);
        assert_eq!(scan.checked, 0);
        assert_eq!(scan.skipped, 4);
        assert!(scan.nonpositive());
    }

    #[test]
    fn corner_must_lie_on_face() {
        let p = square();
        let e = curvature(&p, Corner { vertex: VertexId(7), face: FaceId(0) }).unwrap_err();
        assert!(matches!(e, PatchError::NotACorner { .. }));
        assert_eq!(partial_face_chi(&p, FaceId(0)), Ok(int(0)));
    }
}
