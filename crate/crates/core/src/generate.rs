//! Patch generators for regular `(p, q)` tilings and the trihexagonal
//! (Kagome) tiling.
//!
//! Growth works by vertex completion: the current disc is kept with its
//! counterclockwise boundary cycle, and each boundary vertex is in turn
//! surrounded by new faces, one at a time, until it reaches its degree. A
//! new face glued next to a boundary vertex that is one face short of full
//! also absorbs that vertex's other boundary edge, which is what closes the
//! fans.
//! Whole boundary rings are processed at a time, until the face ball of the
//! requested radius around the base face only touches completed vertices.
//!
//! The trihexagonal patch is the medial complex of a hexagonal patch.

use std::collections::{HashMap, HashSet, VecDeque};
use std::path::PathBuf;

use thiserror::Error;

use crate::io::{load_patch, ParseError};
use crate::patch::{FaceId, TessellationPatch, VertexId};

/// Default upper bound on the number of generated faces.
pub const DEFAULT_MAX_FACES: usize = 2_000_000;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("({p},{q}) is spherical: 1/{p} + 1/{q} > 1/2")]
    Spherical { p: usize, q: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("patch would exceed {limit} faces")]
    TooLarge { limit: usize },
    #[error("generator inconsistency: {0}")]
    Inconsistent(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TilingKind {
    Regular { p: usize, q: usize },
    Kagome,
    FromFile(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub kind: TilingKind,
    pub radius: usize,
}

impl GenSpec {
    pub fn regular(p: usize, q: usize, radius: usize) -> Self {
        Self { kind: TilingKind::Regular { p, q }, radius }
    }

    pub fn kagome(radius: usize) -> Self {
        Self { kind: TilingKind::Kagome, radius }
    }

    /// Builds the patch and returns it with its base face. For files the
    /// base face is the smallest face id.
    pub fn build(&self) -> Result<(TessellationPatch, FaceId), GenError> {
        match &self.kind {
            TilingKind::Regular { p, q } => generate_regular(*p, *q, self.radius),
            TilingKind::Kagome => generate_kagome(self.radius),
            TilingKind::FromFile(path) => {
                let text =
                    std::fs::read_to_string(path).map_err(|source| GenError::Io { path: path.clone(), source })?;
                let patch = load_patch(&text)?;
                let base = patch
                    .face_ids()
                    .next()
                    .ok_or_else(|| GenError::InvalidParameters("patch file has no faces".into()))?;
                Ok((patch, base))
            }
        }
    }
}

pub fn check_regular_params(p: usize, q: usize) -> Result<(), GenError> {
    if p < 3 || q < 3 {
        return Err(GenError::InvalidParameters(format!("need p, q >= 3, got ({p},{q})")));
    }
    // 1/p + 1/q <= 1/2  <=>  2(p + q) <= pq
    if 2 * (p + q) > p * q {
        return Err(GenError::Spherical { p, q });
    }
    Ok(())
}

pub fn generate_regular(p: usize, q: usize, radius: usize) -> Result<(TessellationPatch, FaceId), GenError> {
    generate_regular_bounded(p, q, radius, DEFAULT_MAX_FACES)
}

pub fn generate_regular_bounded(
    p: usize,
    q: usize,
    radius: usize,
    max_faces: usize,
) -> Result<(TessellationPatch, FaceId), GenError> {
    check_regular_params(p, q)?;
    Builder::new(p, q, max_faces).grow(radius)
}

/// Trihexagonal tiling: every vertex has faces 3, 6, 3, 6 in cyclic order.
/// The base face is a hexagon.
pub fn generate_kagome(radius: usize) -> Result<(TessellationPatch, FaceId), GenError> {
    generate_kagome_bounded(radius, DEFAULT_MAX_FACES)
}

pub fn generate_kagome_bounded(radius: usize, max_faces: usize) -> Result<(TessellationPatch, FaceId), GenError> {
    if radius < 1 {
        return Err(GenError::InvalidParameters("kagome radius must be at least 1".into()));
    }
    let mut base_radius = radius / 2 + 1;
    loop {
        let (hex, _) = Builder::new(6, 3, max_faces).grow(base_radius)?;
        let patch = medial(&hex)?;
        if patch.face_count() > max_faces {
            return Err(GenError::TooLarge { limit: max_faces });
        }
        let ball = crate::metric::face_bfs(&patch, &[FaceId(0)], Some(radius));
        if ball.ball(radius).iter().all(|&f| patch.is_face_closed(f)) {
            return Ok((patch, FaceId(0)));
        }
        base_radius += 1;
    }
}

/// Medial patch: one vertex per edge, one face per face (same order, so
/// ids are kept) and one face per complete vertex.
fn medial(patch: &TessellationPatch) -> Result<TessellationPatch, GenError> {
    let mut ids: HashMap<(VertexId, VertexId), VertexId> = HashMap::new();
    let mut id = |a: VertexId, b: VertexId| {
        let n = ids.len() as u32;
        *ids.entry((a.min(b), a.max(b))).or_insert(VertexId(n))
    };
    let mut faces: Vec<Vec<VertexId>> = Vec::new();
    for (_, cycle) in patch.faces() {
        let n = cycle.len();
        faces.push((0..n).map(|i| id(cycle[i], cycle[(i + 1) % n])).collect());
    }
    let mut complete = Vec::new();
    for &v in patch.complete_vertices() {
        // faces_around turns clockwise; the outgoing edges in reverse give
        // the counterclockwise face cycle.
        let around = patch.faces_around(v).map_err(|e| GenError::Inconsistent(e.to_string()))?;
        let mut cycle = Vec::with_capacity(around.len());
        for &f in around.iter().rev() {
            let x = patch
                .next_in_face(f, v)
                .ok_or_else(|| GenError::Inconsistent(format!("vertex {v} not on face {f}")))?;
            cycle.push(id(v, x));
        }
        faces.push(cycle);
    }
    for (&(a, b), &m) in &ids {
        if patch.is_vertex_complete(a) && patch.is_vertex_complete(b) {
            complete.push(m);
        }
    }
    complete.sort_unstable();
    let nfaces = faces.len() as u32;
    TessellationPatch::new(
        faces.into_iter().enumerate().map(|(i, c)| (FaceId(i as u32), c)),
        complete,
        (0..nfaces).map(FaceId),
    )
    .map_err(|e| GenError::Inconsistent(e.to_string()))
}

const NONE: u32 = u32::MAX;

struct Builder {
    size: usize,
    degree: usize,
    max_faces: usize,
    faces: Vec<Vec<u32>>,
    face_count_at: Vec<usize>,
    next: Vec<u32>,
    prev: Vec<u32>,
    on_boundary: Vec<bool>,
    edge_face: HashMap<(u32, u32), u32>,
}

impl Builder {
    fn new(size: usize, degree: usize, max_faces: usize) -> Self {
        Self {
            size,
            degree,
            max_faces,
            faces: Vec::new(),
            face_count_at: Vec::new(),
            next: Vec::new(),
            prev: Vec::new(),
            on_boundary: Vec::new(),
            edge_face: HashMap::new(),
        }
    }

    fn new_vertex(&mut self) -> u32 {
        let id = self.face_count_at.len() as u32;
        self.face_count_at.push(0);
        self.next.push(NONE);
        self.prev.push(NONE);
        self.on_boundary.push(true);
        id
    }

    fn add_face(&mut self, cycle: Vec<u32>) -> Result<u32, GenError> {
        if self.faces.len() >= self.max_faces {
            return Err(GenError::TooLarge { limit: self.max_faces });
        }
        let id = self.faces.len() as u32;
        let n = cycle.len();
        for i in 0..n {
            let e = (cycle[i], cycle[(i + 1) % n]);
            if self.edge_face.insert(e, id).is_some() {
                return Err(GenError::Inconsistent(format!("directed edge {}->{} used twice", e.0, e.1)));
            }
            self.face_count_at[cycle[i] as usize] += 1;
        }
        self.faces.push(cycle);
        Ok(id)
    }

    fn grow(mut self, radius: usize) -> Result<(TessellationPatch, FaceId), GenError> {
        let n = self.size;
        let base: Vec<u32> = (0..n).map(|_| self.new_vertex()).collect();
        for i in 0..n {
            self.next[base[i] as usize] = base[(i + 1) % n];
            self.prev[base[i] as usize] = base[(i + n - 1) % n];
        }
        self.add_face(base)?;

        while !self.ball_is_closed(radius) {
            self.complete_ring()?;
        }
        self.finish()
    }

    /// Completes every vertex of the current boundary ring, walking it from
    /// its smallest vertex id.
    fn complete_ring(&mut self) -> Result<(), GenError> {
        let start = (0..self.on_boundary.len() as u32)
            .find(|&v| self.on_boundary[v as usize])
            .ok_or_else(|| GenError::Inconsistent("boundary vanished".into()))?;
        let mut ring = vec![start];
        let mut cur = self.next[start as usize];
        while cur != start {
            ring.push(cur);
            cur = self.next[cur as usize];
            if ring.len() > self.on_boundary.len() {
                return Err(GenError::Inconsistent("boundary is not a cycle".into()));
            }
        }
        for v in ring {
            if self.on_boundary[v as usize] {
                self.complete_vertex(v)?;
            }
        }
        Ok(())
    }

    fn closes(&self, v: u32) -> bool {
        self.face_count_at[v as usize] + 1 == self.degree
    }

    fn complete_vertex(&mut self, v: u32) -> Result<(), GenError> {
        while self.on_boundary[v as usize] {
            self.attach_face(v)?;
        }
        Ok(())
    }

    /// Attaches one face outside the boundary edge `v -> next`. If `v` is one
    /// face short of its degree the face also runs along `prev -> v`,
    /// closing the fan at `v`.
    fn attach_face(&mut self, v: u32) -> Result<(), GenError> {
        let have = self.face_count_at[v as usize];
        if have >= self.degree {
            return Err(GenError::Inconsistent(format!("boundary vertex {v} already has {have} faces")));
        }
        let closing = have + 1 == self.degree;
        let prev = self.prev[v as usize];
        let next = self.next[v as usize];

        let size = self.size;

        // Boundary vertices absorbed on either side; the last entry of each
        // chain stays on the boundary.
        let mut fwd = vec![next];
        while self.closes(*fwd.last().unwrap()) {
            let c = self.next[*fwd.last().unwrap() as usize];
            if c == v || c == prev || fwd.contains(&c) {
                return Err(GenError::Inconsistent("forward chain wraps the boundary".into()));
            }
            fwd.push(c);
        }
        let mut bwd = vec![];
        if closing {
            bwd.push(prev);
            while self.closes(*bwd.last().unwrap()) {
                let d = self.prev[*bwd.last().unwrap() as usize];
                if d == v || bwd.contains(&d) {
                    return Err(GenError::Inconsistent("backward chain wraps the boundary".into()));
                }
                bwd.push(d);
            }
            if bwd.iter().any(|d| fwd.contains(d)) {
                return Err(GenError::Inconsistent(format!("closing vertex {v} would close the disc")));
            }
        }

        let used = 1 + bwd.len() + fwd.len();
        let slots = size
            .checked_sub(used)
            .ok_or_else(|| GenError::Inconsistent(format!("face at vertex {v} needs {used} > {size} vertices")))?;
        let fresh: Vec<u32> = (0..slots).map(|_| self.new_vertex()).collect();

        // Cycle: v, backward chain, fresh vertices, forward chain reversed.
        let mut cycle = vec![v];
        cycle.extend(&bwd);
        cycle.extend(&fresh);
        cycle.extend(fwd.iter().rev());
        self.add_face(cycle)?;

        // New boundary path from the start anchor to the end anchor.
        let from = if closing { *bwd.last().unwrap() } else { v };
        let to = *fwd.last().unwrap();
        let mut path = vec![from];
        path.extend(&fresh);
        path.push(to);
        for &x in bwd.iter().take(bwd.len().saturating_sub(1)).chain(&fwd[..fwd.len() - 1]) {
            self.on_boundary[x as usize] = false;
        }
        if closing {
            self.on_boundary[v as usize] = false;
        }
        for w in path.windows(2) {
            self.next[w[0] as usize] = w[1];
            self.prev[w[1] as usize] = w[0];
        }
        Ok(())
    }

    /// True once every face within `radius` of the base face has all its
    /// vertices completed.
    fn ball_is_closed(&self, radius: usize) -> bool {
        let mut dist: HashMap<u32, usize> = HashMap::from([(0, 0)]);
        let mut queue = VecDeque::from([0u32]);
        while let Some(f) = queue.pop_front() {
            let d = dist[&f];
            let cycle = &self.faces[f as usize];
            if cycle.iter().any(|&v| self.on_boundary[v as usize]) {
                return false;
            }
            if d == radius {
                continue;
            }
            let n = cycle.len();
            for i in 0..n {
                if let Some(&g) = self.edge_face.get(&(cycle[(i + 1) % n], cycle[i])) {
                    if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(g) {
                        e.insert(d + 1);
                        queue.push_back(g);
                    }
                }
            }
        }
        true
    }

    fn finish(self) -> Result<(TessellationPatch, FaceId), GenError> {
        let complete: HashSet<u32> =
            (0..self.on_boundary.len() as u32).filter(|&v| !self.on_boundary[v as usize]).collect();
        let mut complete: Vec<VertexId> = complete.into_iter().map(VertexId).collect();
        complete.sort_unstable();
        let nfaces = self.faces.len() as u32;
        let patch = TessellationPatch::new(
            self.faces.into_iter().enumerate().map(|(i, c)| (FaceId(i as u32), c.into_iter().map(VertexId).collect())),
            complete,
            (0..nfaces).map(FaceId),
        )
        .map_err(|e| GenError::Inconsistent(e.to_string()))?;
        Ok((patch, FaceId(0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{face_size, vertex_degree};
    use crate::validate::validate_patch;

    #[test]
    fn spherical_and_degenerate_parameters_are_rejected() {
        assert!(matches!(generate_regular(3, 5, 2), Err(GenError::Spherical { p: 3, q: 5 })));
        assert!(matches!(generate_regular(5, 3, 1), Err(GenError::Spherical { .. })));
        assert!(matches!(generate_regular(2, 8, 1), Err(GenError::InvalidParameters(_))));
        assert!(matches!(generate_kagome(0), Err(GenError::InvalidParameters(_))));
    }

    #[test]
    fn size_guard_trips() {
        assert!(matches!(generate_regular_bounded(3, 7, 8, 500), Err(GenError::TooLarge { limit: 500 })));
    }

    #[test]
    fn small_regular_patches_are_valid() {
        for (p, q) in [(4, 4), (3, 6), (6, 3), (3, 7), (7, 3), (4, 5), (5, 4), (5, 5), (8, 3), (3, 8)] {
            for r in 0..3 {
                let (patch, base) = generate_regular(p, q, r).unwrap();
                let report = validate_patch(&patch);
                assert!(report.is_empty(), "({p},{q}) r={r}:\n{report}");
                assert_eq!(face_size(&patch, base), Ok(p));
                for &v in patch.complete_vertices() {
                    assert_eq!(vertex_degree(&patch, v), Ok(q), "({p},{q}) vertex {v}");
                }
                for (f, c) in patch.faces() {
                    assert_eq!(c.len(), p, "({p},{q}) face {f}");
                }
            }
        }
    }

    #[test]
    fn kagome_has_triangles_and_hexagons() {
        let (patch, base) = generate_kagome(2).unwrap();
        assert!(validate_patch(&patch).is_empty());
        assert_eq!(face_size(&patch, base), Ok(6));
        for &v in patch.complete_vertices() {
            assert_eq!(vertex_degree(&patch, v), Ok(4));
        }
    }
}
