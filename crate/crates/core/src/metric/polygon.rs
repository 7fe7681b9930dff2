use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::curvature::{min_face_size, vertex_degree};
use crate::patch::{FaceId, PatchError, TessellationPatch, VertexId};

use super::MetricError;

/// Convexity tag of a polygon boundary vertex.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    /// Exactly one polygon face meets the vertex.
    APlus,
    A,
    B,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::APlus => "a+",
            Label::A => "a",
            Label::B => "b",
        })
    }
}

/// A finite face set whose closure is a disc, with its boundary cycle.
///
/// The boundary runs in the orientation of the face cycles (interior on the
/// left) and starts at its smallest vertex id.
#[derive(Clone, Debug)]
pub struct Polygon<'p> {
    patch: &'p TessellationPatch,
    faces: BTreeSet<FaceId>,
    boundary: Vec<VertexId>,
}

impl<'p> Polygon<'p> {
    pub fn new(patch: &'p TessellationPatch, faces: BTreeSet<FaceId>) -> Result<Self, MetricError> {
        let Some(&first) = faces.iter().next() else {
            return Err(MetricError::NotAPolygon("empty face set".into()));
        };
        for &f in &faces {
            if !patch.contains_face(f) {
                return Err(PatchError::UnknownFace(f).into());
            }
        }

        let mut seen = HashSet::from([first]);
        let mut queue = VecDeque::from([first]);
        while let Some(f) = queue.pop_front() {
            for g in patch.face_neighbors(f) {
                if faces.contains(&g) && seen.insert(g) {
                    queue.push_back(g);
                }
            }
        }
        if seen.len() != faces.len() {
            return Err(MetricError::NotAPolygon("faces are not edge-connected".into()));
        }

        let mut vertices = HashSet::new();
        let mut edges = HashSet::new();
        let mut succ: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        for &f in &faces {
            for (a, b) in patch.face_edges(f) {
                vertices.insert(a);
                edges.insert((a.min(b), a.max(b)));
                let inside = patch.face_of_directed(b, a).is_some_and(|g| faces.contains(&g));
                if !inside && succ.insert(a, b).is_some() {
                    return Err(MetricError::NotAPolygon(format!("boundary passes vertex {a} twice")));
                }
            }
        }
        let euler = vertices.len() as i64 - edges.len() as i64 + faces.len() as i64;
        if euler != 1 {
            return Err(MetricError::NotAPolygon(format!("Euler characteristic {euler}, expected 1")));
        }

        let (&start, _) = succ.iter().next().ok_or_else(|| MetricError::NotAPolygon("no boundary".into()))?;
        let mut boundary = vec![start];
        let mut cur = succ[&start];
        while cur != start {
            boundary.push(cur);
            cur =
                *succ.get(&cur).ok_or_else(|| MetricError::NotAPolygon(format!("boundary breaks at vertex {cur}")))?;
            if boundary.len() > succ.len() {
                return Err(MetricError::NotAPolygon("boundary does not close".into()));
            }
        }
        if boundary.len() != succ.len() {
            return Err(MetricError::NotAPolygon("boundary has more than one cycle".into()));
        }
        Ok(Self { patch, faces, boundary })
    }

    pub fn patch(&self) -> &'p TessellationPatch {
        self.patch
    }

    pub fn faces(&self) -> &BTreeSet<FaceId> {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn contains(&self, f: FaceId) -> bool {
        self.faces.contains(&f)
    }

    pub fn boundary(&self) -> &[VertexId] {
        &self.boundary
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.boundary.iter().position(|&x| x == v)
    }

    pub fn on_boundary(&self, v: VertexId) -> bool {
        self.position(v).is_some()
    }

    /// Undirected boundary edges as `(min, max)` pairs.
    pub fn boundary_edges(&self) -> BTreeSet<(VertexId, VertexId)> {
        let n = self.boundary.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.boundary[i], self.boundary[(i + 1) % n]);
                (a.min(b), a.max(b))
            })
            .collect()
    }

    /// Boundary neighbours `(previous, next)` of a boundary vertex.
    pub fn boundary_neighbors(&self, v: VertexId) -> Result<(VertexId, VertexId), MetricError> {
        let i = self.position(v).ok_or(MetricError::NotOnBoundary(v))?;
        let n = self.boundary.len();
        Ok((self.boundary[(i + n - 1) % n], self.boundary[(i + 1) % n]))
    }

    /// Number of polygon faces meeting the boundary vertex `v`.
    pub fn inner_degree(&self, v: VertexId) -> Result<usize, MetricError> {
        if !self.on_boundary(v) {
            return Err(MetricError::NotOnBoundary(v));
        }
        if !self.patch.is_vertex_complete(v) {
            return Err(PatchError::IncompleteVertex(v).into());
        }
        Ok(self.patch.faces_at(v).iter().filter(|f| self.faces.contains(f)).count())
    }

    /// Degree of `v` minus its inner degree; zero is reported as an error
    /// since a boundary vertex of a disc always has an outside face.
    pub fn exterior_degree(&self, v: VertexId) -> Result<usize, MetricError> {
        let inner = self.inner_degree(v)?;
        let deg = vertex_degree(self.patch, v)?;
        match deg.checked_sub(inner) {
            Some(0) | None => Err(MetricError::NoExterior(v)),
            Some(e) => Ok(e),
        }
    }

    /// `a+` if one polygon face meets `v`; `a` if additionally the smallest
    /// face at `v` is a triangle and at most three polygon faces meet it;
    /// otherwise `b`.
    pub fn label(&self, v: VertexId) -> Result<Label, MetricError> {
        let inner = self.inner_degree(v)?;
        let smallest = min_face_size(self.patch, v)?;
        Ok(if inner == 1 {
            Label::APlus
        } else if smallest == 3 && inner <= 3 {
            Label::A
        } else {
            Label::B
        })
    }

    /// Labels along the boundary cycle.
    pub fn label_sequence(&self) -> Result<Vec<Label>, MetricError> {
        self.boundary.iter().map(|&v| self.label(v)).collect()
    }

    /// Every `b` vertex is flanked on the boundary by two `a+` vertices.
    pub fn is_admissible(&self) -> Result<bool, MetricError> {
        let labels = self.label_sequence()?;
        Ok(labels_admissible(&labels))
    }

    /// Checks of the one-step neighbourhood `B_1(P)` of an admissible
    /// polygon: every new face meets `∂P` in a connected run of 1 or 2
    /// edges and `∂B_1(P)` in a connected run of at least one edge.
    pub fn tube_violations(&self, tube: &Polygon<'_>) -> Vec<TubeViolation> {
        let inner = self.boundary_edges();
        let outer = tube.boundary_edges();
        let mut out = Vec::new();
        for &f in tube.faces.difference(&self.faces) {
            let cycle = self.patch.cycle(f).unwrap_or(&[]);
            match edge_run(cycle, &inner) {
                Some(n) if (1..=2).contains(&n) => {}
                run => out.push(TubeViolation::Inner { face: f, run }),
            }
            match edge_run(cycle, &outer) {
                Some(n) if n >= 1 => {}
                run => out.push(TubeViolation::Outer { face: f, run }),
            }
        }
        out
    }

    /// Boundary vertices of exterior degree one must carry label `b` and
    /// have no edge on `∂B_1(P)`.
    pub fn belabel_violations(&self, tube: &Polygon<'_>) -> Result<Vec<BelabelViolation>, MetricError> {
        let outer = tube.boundary_edges();
        let mut out = Vec::new();
        for &v in &self.boundary {
            if self.exterior_degree(v)? != 1 {
                continue;
            }
            let label = self.label(v)?;
            if label != Label::B {
                out.push(BelabelViolation::Label { vertex: v, label });
            }
            if let Some(&w) = self.patch.neighbors(v).iter().find(|&&w| outer.contains(&(v.min(w), v.max(w)))) {
                out.push(BelabelViolation::OuterEdge { vertex: v, to: w });
            }
        }
        Ok(out)
    }
}

pub(crate) fn labels_admissible(labels: &[Label]) -> bool {
    let n = labels.len();
    (0..n).all(|i| {
        labels[i] != Label::B || (labels[(i + n - 1) % n] == Label::APlus && labels[(i + 1) % n] == Label::APlus)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TubeViolation {
    /// `∂f ∩ ∂P` is not a connected run of 1 or 2 edges (`None`: not connected).
    Inner { face: FaceId, run: Option<usize> },
    /// `∂f ∩ ∂B_1(P)` is not a connected run of at least one edge.
    Outer { face: FaceId, run: Option<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BelabelViolation {
    Label { vertex: VertexId, label: Label },
    OuterEdge { vertex: VertexId, to: VertexId },
}

/// Number of edges of the face cycle lying in `edges`, if they form a
/// single cyclically contiguous run (`Some(0)` when there are none).
pub fn edge_run(cycle: &[VertexId], edges: &BTreeSet<(VertexId, VertexId)>) -> Option<usize> {
    let n = cycle.len();
    let hit: Vec<bool> = (0..n)
        .map(|i| {
            let (a, b) = (cycle[i], cycle[(i + 1) % n]);
            edges.contains(&(a.min(b), a.max(b)))
        })
        .collect();
    let count = hit.iter().filter(|&&h| h).count();
    if count == 0 || count == n {
        return Some(count);
    }
    let starts = (0..n).filter(|&i| hit[i] && !hit[(i + n - 1) % n]).count();
    (starts == 1).then_some(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::generate_regular;
    use crate::metric::distance_ball;

    fn vs(ids: &[u32]) -> Vec<VertexId> {
        ids.iter().map(|&i| VertexId(i)).collect()
    }

    #[test]
    fn single_face_is_all_a_plus() {
        let (patch, base) = generate_regular(4, 4, 2).unwrap();
        let p = distance_ball(&patch, base, 0).unwrap();
        assert_eq!(p.boundary().len(), 4);
        assert_eq!(p.label_sequence().unwrap(), vec![Label::APlus; 4]);
        assert_eq!(p.is_admissible(), Ok(true));
        for &v in p.boundary() {
            assert_eq!(p.inner_degree(v), Ok(1));
            assert_eq!(p.exterior_degree(v), Ok(3));
        }
    }

    #[test]
    fn annulus_and_pinch_are_not_polygons() {
        let (patch, base) = generate_regular(4, 4, 3).unwrap();
        let ring: BTreeSet<FaceId> = crate::metric::face_bfs(&patch, &[base], Some(2))
            .layers
            .iter()
            .skip(1)
            .take(2)
            .flatten()
            .copied()
            .collect();
        assert!(matches!(Polygon::new(&patch, ring), Err(MetricError::NotAPolygon(_))));

        // Two triangles meeting at one vertex only.
        let bow = TessellationPatch::new(
            [(FaceId(0), vs(&[0, 1, 2])), (FaceId(1), vs(&[0, 3, 4]))],
            [],
            [FaceId(0), FaceId(1)],
        )
        .unwrap();
        assert!(Polygon::new(&bow, [FaceId(0), FaceId(1)].into()).is_err());
    }

    #[test]
    fn edge_run_detects_gaps() {
        let cycle = vs(&[0, 1, 2, 3]);
        let e = |a: u32, b: u32| (VertexId(a.min(b)), VertexId(a.max(b)));
        assert_eq!(edge_run(&cycle, &[e(0, 1), e(1, 2)].into()), Some(2));
        assert_eq!(edge_run(&cycle, &[e(3, 0), e(0, 1)].into()), Some(2));
        assert_eq!(edge_run(&cycle, &[e(0, 1), e(2, 3)].into()), None);
        assert_eq!(edge_run(&cycle, &BTreeSet::new()), Some(0));
    }

    #[test]
    fn adjacent_b_vertices_are_not_admissible() {
        use Label::*;
        assert!(labels_admissible(&[APlus, B, APlus, APlus]));
        assert!(!labels_admissible(&[APlus, B, B, APlus]));
        assert!(!labels_admissible(&[APlus, B, A, APlus]));
    }
}
