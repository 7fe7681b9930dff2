//! Tessellation axioms checked on the complete portion of a patch.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::patch::{FaceId, TessellationPatch, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The same directed edge occurs in more than one face cycle.
    Orientation {
        from: VertexId,
        to: VertexId,
        faces: Vec<FaceId>,
    },
    /// An edge at a complete vertex is not the side of exactly two faces.
    EdgeSides {
        edge: (VertexId, VertexId),
        faces: Vec<FaceId>,
    },
    /// Two complete faces meet in something other than nothing, one vertex
    /// or one side.
    FaceIntersection {
        faces: (FaceId, FaceId),
        shared_vertices: usize,
        shared_edges: usize,
    },
    /// The faces at a complete vertex do not close up into a single fan.
    OpenFan {
        vertex: VertexId,
    },
    LowDegree {
        vertex: VertexId,
        degree: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Orientation { from, to, faces } => {
                write!(f, "orientation: directed edge {from}->{to} in faces {faces:?}")
            }
            Violation::EdgeSides { edge, faces } => {
                write!(f, "edge sides: edge {}-{} is a side of {} face(s) {:?}", edge.0, edge.1, faces.len(), faces)
            }
            Violation::FaceIntersection { faces, shared_vertices, shared_edges } => write!(
                f,
                "face intersection: faces {} and {} share {} vertices and {} edges",
                faces.0, faces.1, shared_vertices, shared_edges
            ),
            Violation::OpenFan { vertex } => {
                write!(f, "closed fan: faces at vertex {vertex} do not form a closed fan")
            }
            Violation::LowDegree { vertex, degree } => {
                write!(f, "vertex degree: complete vertex {vertex} has degree {degree} < 3")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn validate_patch(patch: &TessellationPatch) -> ValidationReport {
    let mut violations = Vec::new();

    let mut directed: BTreeMap<(VertexId, VertexId), Vec<FaceId>> = BTreeMap::new();
    for (f, _) in patch.faces() {
        for e in patch.face_edges(f) {
            directed.entry(e).or_default().push(f);
        }
    }
    for (&(from, to), faces) in &directed {
        if faces.len() > 1 {
            violations.push(Violation::Orientation { from, to, faces: faces.clone() });
        }
    }

    for (a, b) in patch.edges() {
        if !(patch.is_vertex_complete(a) || patch.is_vertex_complete(b)) {
            continue;
        }
        let mut faces: Vec<FaceId> =
            directed.get(&(a, b)).into_iter().chain(directed.get(&(b, a))).flatten().copied().collect();
        faces.sort_unstable();
        let ok = faces.len() == 2
            && faces[0] != faces[1]
            && directed.get(&(a, b)).map_or(0, Vec::len) == 1
            && directed.get(&(b, a)).map_or(0, Vec::len) == 1;
        if !ok {
            violations.push(Violation::EdgeSides { edge: (a, b), faces });
        }
    }

    let mut pairs = BTreeSet::new();
    for v in patch.vertices() {
        let fs: Vec<FaceId> = patch.faces_at(v).iter().copied().filter(|f| patch.is_face_complete(*f)).collect();
        for (i, &f) in fs.iter().enumerate() {
            for &g in &fs[i + 1..] {
                pairs.insert((f.min(g), f.max(g)));
            }
        }
    }
    for (f, g) in pairs {
        let cf = patch.cycle(f).unwrap_or(&[]);
        let cg = patch.cycle(g).unwrap_or(&[]);
        let shared_vertices = cf.iter().filter(|v| cg.contains(v)).count();
        let edges_g: BTreeSet<(VertexId, VertexId)> = patch.face_edges(g).map(|(a, b)| (a.min(b), a.max(b))).collect();
        let shared_edges = patch.face_edges(f).filter(|&(a, b)| edges_g.contains(&(a.min(b), a.max(b)))).count();
        let fine = shared_vertices <= 1 || (shared_vertices == 2 && shared_edges == 1);
        if !fine {
            violations.push(Violation::FaceIntersection { faces: (f, g), shared_vertices, shared_edges });
        }
    }

    for &v in patch.complete_vertices() {
        let degree = patch.neighbors(v).len();
        if degree < 3 {
            violations.push(Violation::LowDegree { vertex: v, degree });
        }
        let faces = patch.faces_at(v);
        let closed = match patch.faces_around(v) {
            Ok(ring) => {
                ring.len() == faces.len()
                    && ring.len() == degree
                    && patch.turn_around(v, *ring.last().unwrap()) == Some(ring[0])
            }
            Err(_) => false,
        };
        if !closed {
            violations.push(Violation::OpenFan { vertex: v });
        }
    }

    ValidationReport { violations }
}
