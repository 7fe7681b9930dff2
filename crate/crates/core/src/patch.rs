//! Finite combinatorial windows of plane tessellations.
//!
//! A patch stores its faces as counterclockwise vertex cycles plus two
//! completeness sets. Everything else (edges, incidences, rotation around a
//! vertex) is derived once at construction time.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A vertex-face incidence `(v, f)` with `v` on the boundary cycle of `f`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    pub vertex: VertexId,
    pub face: FaceId,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatchError {
    #[error("face {0} has {1} vertices, a face needs at least 3")]
    ShortCycle(FaceId, usize),
    #[error("face {0} is not a simple cycle (vertex {1} repeats)")]
    NonSimpleCycle(FaceId, VertexId),
    #[error("duplicate face id {0}")]
    DuplicateFace(FaceId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown face {0}")]
    UnknownFace(FaceId),
    #[error("degree undefined on boundary: vertex {0} is not complete")]
    IncompleteVertex(VertexId),
    #[error("face {0} is not complete")]
    IncompleteFace(FaceId),
    #[error("vertex {vertex} does not lie on face {face}")]
    NotACorner { vertex: VertexId, face: FaceId },
}

#[derive(Clone, Debug)]
pub struct TessellationPatch {
    faces: BTreeMap<FaceId, Vec<VertexId>>,
    complete_vertices: BTreeSet<VertexId>,
    complete_faces: BTreeSet<FaceId>,
    vertices: BTreeSet<VertexId>,
    // First face seen for each directed edge; duplicates are an axiom
    // violation reported by `validate_patch`.
    directed: HashMap<(VertexId, VertexId), FaceId>,
    vertex_faces: HashMap<VertexId, Vec<FaceId>>,
    neighbors: HashMap<VertexId, Vec<VertexId>>,
}

impl TessellationPatch {
    pub fn new<F, V, C>(faces: F, complete_vertices: V, complete_faces: C) -> Result<Self, PatchError>
    where
        F: IntoIterator<Item = (FaceId, Vec<VertexId>)>,
        V: IntoIterator<Item = VertexId>,
        C: IntoIterator<Item = FaceId>,
    {
        let mut map = BTreeMap::new();
        for (id, cycle) in faces {
            if cycle.len() < 3 {
                return Err(PatchError::ShortCycle(id, cycle.len()));
            }
            let mut seen = BTreeSet::new();
            for &v in &cycle {
                if !seen.insert(v) {
                    return Err(PatchError::NonSimpleCycle(id, v));
                }
            }
            if map.insert(id, cycle).is_some() {
                return Err(PatchError::DuplicateFace(id));
            }
        }

        let mut vertices = BTreeSet::new();
        let mut directed = HashMap::new();
        let mut vertex_faces: HashMap<VertexId, Vec<FaceId>> = HashMap::new();
        let mut nb: HashMap<VertexId, BTreeSet<VertexId>> = HashMap::new();
        for (&id, cycle) in &map {
            let n = cycle.len();
            for i in 0..n {
                let a = cycle[i];
                let b = cycle[(i + 1) % n];
                vertices.insert(a);
                directed.entry((a, b)).or_insert(id);
                vertex_faces.entry(a).or_default().push(id);
                nb.entry(a).or_default().insert(b);
                nb.entry(b).or_default().insert(a);
            }
        }
        let neighbors = nb.into_iter().map(|(v, s)| (v, s.into_iter().collect())).collect();

        let complete_vertices: BTreeSet<VertexId> = complete_vertices.into_iter().collect();
        if let Some(&v) = complete_vertices.iter().find(|v| !vertices.contains(v)) {
            return Err(PatchError::UnknownVertex(v));
        }
        let complete_faces: BTreeSet<FaceId> = complete_faces.into_iter().collect();
        if let Some(&f) = complete_faces.iter().find(|f| !map.contains_key(f)) {
            return Err(PatchError::UnknownFace(f));
        }

        Ok(Self { faces: map, complete_vertices, complete_faces, vertices, directed, vertex_faces, neighbors })
    }

    /// Patch in which every vertex and face is marked complete.
    pub fn closed<F>(faces: F) -> Result<Self, PatchError>
    where
        F: IntoIterator<Item = (FaceId, Vec<VertexId>)>,
    {
        let faces: Vec<_> = faces.into_iter().collect();
        let fids: Vec<FaceId> = faces.iter().map(|(f, _)| *f).collect();
        let vids: BTreeSet<VertexId> = faces.iter().flat_map(|(_, c)| c.iter().copied()).collect();
        Self::new(faces, vids, fids)
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn faces(&self) -> impl Iterator<Item = (FaceId, &[VertexId])> {
        self.faces.iter().map(|(&f, c)| (f, c.as_slice()))
    }

    pub fn face_ids(&self) -> impl Iterator<Item = FaceId> + '_ {
        self.faces.keys().copied()
    }

    pub fn cycle(&self, f: FaceId) -> Option<&[VertexId]> {
        self.faces.get(&f).map(Vec::as_slice)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_face(&self, f: FaceId) -> bool {
        self.faces.contains_key(&f)
    }

    pub fn complete_vertices(&self) -> &BTreeSet<VertexId> {
        &self.complete_vertices
    }

    pub fn complete_faces(&self) -> &BTreeSet<FaceId> {
        &self.complete_faces
    }

    pub fn is_vertex_complete(&self, v: VertexId) -> bool {
        self.complete_vertices.contains(&v)
    }

    pub fn is_face_complete(&self, f: FaceId) -> bool {
        self.complete_faces.contains(&f)
    }

    /// Complete face whose vertices are all complete.
    pub fn is_face_closed(&self, f: FaceId) -> bool {
        self.is_face_complete(f) && self.faces[&f].iter().all(|v| self.complete_vertices.contains(v))
    }

    /// Faces containing `v`, ascending by id.
    pub fn faces_at(&self, v: VertexId) -> &[FaceId] {
        self.vertex_faces.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Vertices adjacent to `v`, ascending by id.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        self.neighbors.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn adjacent(&self, v: VertexId, w: VertexId) -> bool {
        self.neighbors(v).binary_search(&w).is_ok()
    }

    /// The face traversing the directed edge `a -> b`, if present.
    pub fn face_of_directed(&self, a: VertexId, b: VertexId) -> Option<FaceId> {
        self.directed.get(&(a, b)).copied()
    }

    /// Undirected edges as `(min, max)` pairs.
    pub fn edges(&self) -> BTreeSet<(VertexId, VertexId)> {
        self.directed.keys().map(|&(a, b)| if a < b { (a, b) } else { (b, a) }).collect()
    }

    pub fn face_edges(&self, f: FaceId) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let c = &self.faces[&f];
        let n = c.len();
        (0..n).map(move |i| (c[i], c[(i + 1) % n]))
    }

    /// Edge-neighbours of `f` in the patch, ascending by id.
    pub fn face_neighbors(&self, f: FaceId) -> Vec<FaceId> {
        let mut out: Vec<FaceId> =
            self.face_edges(f).filter_map(|(a, b)| self.face_of_directed(b, a)).filter(|&g| g != f).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Successor of `v` along the cycle of `f`.
    pub fn next_in_face(&self, f: FaceId, v: VertexId) -> Option<VertexId> {
        let c = self.faces.get(&f)?;
        let i = c.iter().position(|&x| x == v)?;
        Some(c[(i + 1) % c.len()])
    }

    /// Predecessor of `v` along the cycle of `f`.
    pub fn prev_in_face(&self, f: FaceId, v: VertexId) -> Option<VertexId> {
        let c = self.faces.get(&f)?;
        let i = c.iter().position(|&x| x == v)?;
        Some(c[(i + c.len() - 1) % c.len()])
    }

    /// The face after `f` when turning around `v`: if `f` runs `v -> x`, the
    /// next face is the one running `x -> v`.
    pub fn turn_around(&self, v: VertexId, f: FaceId) -> Option<FaceId> {
        let x = self.next_in_face(f, v)?;
        self.face_of_directed(x, v)
    }

    /// Faces around a complete vertex in rotational order, starting at the
    /// smallest face id.
    pub fn faces_around(&self, v: VertexId) -> Result<Vec<FaceId>, PatchError> {
        if !self.is_vertex_complete(v) {
            return Err(PatchError::IncompleteVertex(v));
        }
        let start = *self.faces_at(v).first().ok_or(PatchError::UnknownVertex(v))?;
        let mut out = vec![start];
        let mut cur = start;
        loop {
            match self.turn_around(v, cur) {
                Some(next) if next == start => break,
                Some(next) if out.len() <= self.faces_at(v).len() => {
                    out.push(next);
                    cur = next;
                }
                _ => break,
            }
        }
        Ok(out)
    }

    /// Copy of the patch with vertex ids mapped through `map` (identity for
    /// ids not in the map).
    pub fn relabel_vertices(&self, map: &HashMap<VertexId, VertexId>) -> Result<Self, PatchError> {
        let m = |v: &VertexId| *map.get(v).unwrap_or(v);
        Self::new(
            self.faces.iter().map(|(&f, c)| (f, c.iter().map(m).collect())),
            self.complete_vertices.iter().map(m),
            self.complete_faces.iter().copied(),
        )
    }

    /// Structural equality up to rotation of each face cycle.
    pub fn same_structure(&self, other: &Self) -> bool {
        fn canon(c: &[VertexId]) -> Vec<VertexId> {
            let i = c.iter().enumerate().min_by_key(|(_, v)| **v).map(|(i, _)| i).unwrap_or(0);
            c[i..].iter().chain(c[..i].iter()).copied().collect()
        }
        self.complete_vertices == other.complete_vertices
            && self.complete_faces == other.complete_faces
            && self.faces.len() == other.faces.len()
            && self.faces.iter().all(|(f, c)| other.faces.get(f).is_some_and(|d| canon(c) == canon(d)))
    }
}
