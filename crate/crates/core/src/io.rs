//! Line-oriented patch text format.
//!
//! ```text
//! tess 1
//! face <fid>: <v0> <v1> ... <vk-1>
//! complete_vertices: <id> <id> ... | all
//! complete_faces: <id> <id> ... | all
//! ```
//!
//! Lines starting with `#` and blank lines are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::patch::{FaceId, PatchError, TessellationPatch, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Patch(#[from] PatchError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

enum IdList {
    All,
    Ids(Vec<u32>),
}

fn parse_ids(line: usize, s: &str) -> Result<IdList, ParseError> {
    if s.trim() == "all" {
        return Ok(IdList::All);
    }
    s.split_whitespace()
        .map(|t| t.parse::<u32>().map_err(|_| syntax(line, format!("bad id {t:?}"))))
        .collect::<Result<Vec<_>, _>>()
        .map(IdList::Ids)
}

pub fn load_patch(text: &str) -> Result<TessellationPatch, ParseError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    match lines.next() {
        Some((_, "tess 1")) => {}
        Some((n, l)) => return Err(syntax(n, format!("expected header \"tess 1\", found {l:?}"))),
        None => return Err(syntax(1, "empty input, expected header \"tess 1\"")),
    }

    let mut faces: BTreeMap<FaceId, Vec<VertexId>> = BTreeMap::new();
    let mut cv: Option<IdList> = None;
    let mut cf: Option<IdList> = None;

    for (n, l) in lines {
        if let Some(rest) = l.strip_prefix("face ") {
            let (id, cycle) = rest.split_once(':').ok_or_else(|| syntax(n, "expected \"face <fid>: ...\""))?;
            let id = FaceId(id.trim().parse().map_err(|_| syntax(n, format!("bad face id {id:?}")))?);
            let cycle = match parse_ids(n, cycle)? {
                IdList::Ids(v) => v.into_iter().map(VertexId).collect::<Vec<_>>(),
                IdList::All => return Err(syntax(n, "\"all\" is not a face cycle")),
            };
            if cycle.len() < 3 {
                return Err(syntax(n, format!("face {id} has {} vertices, need at least 3", cycle.len())));
            }
            let mut seen = BTreeSet::new();
            if let Some(v) = cycle.iter().find(|v| !seen.insert(**v)) {
                return Err(syntax(n, format!("face {id} is not a simple cycle (vertex {v} repeats)")));
            }
            if faces.insert(id, cycle).is_some() {
                return Err(syntax(n, format!("duplicate face id {id}")));
            }
        } else if let Some(rest) = l.strip_prefix("complete_vertices:") {
            if cv.replace(parse_ids(n, rest)?).is_some() {
                return Err(syntax(n, "complete_vertices given twice"));
            }
        } else if let Some(rest) = l.strip_prefix("complete_faces:") {
            if cf.replace(parse_ids(n, rest)?).is_some() {
                return Err(syntax(n, "complete_faces given twice"));
            }
        } else {
            return Err(syntax(n, format!("unrecognised line {l:?}")));
        }
    }

    let all_vertices: BTreeSet<VertexId> = faces.values().flatten().copied().collect();
    let complete_vertices: Vec<VertexId> = match cv {
        Some(IdList::All) => all_vertices.into_iter().collect(),
        Some(IdList::Ids(v)) => v.into_iter().map(VertexId).collect(),
        None => Vec::new(),
    };
    let complete_faces: Vec<FaceId> = match cf {
        Some(IdList::All) => faces.keys().copied().collect(),
        Some(IdList::Ids(v)) => v.into_iter().map(FaceId).collect(),
        None => Vec::new(),
    };
    Ok(TessellationPatch::new(faces, complete_vertices, complete_faces)?)
}

pub fn save_patch(patch: &TessellationPatch) -> String {
    let mut out = String::from("tess 1\n");
    for (f, cycle) in patch.faces() {
        let _ = write!(out, "face {f}:");
        for v in cycle {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out.push_str("complete_vertices:");
    if !patch.complete_vertices().is_empty() && patch.complete_vertices().len() == patch.vertex_count() {
        out.push_str(" all");
    } else {
        for v in patch.complete_vertices() {
            let _ = write!(out, " {v}");
        }
    }
    out.push_str("\ncomplete_faces:");
    if !patch.complete_faces().is_empty() && patch.complete_faces().len() == patch.face_count() {
        out.push_str(" all");
    } else {
        for f in patch.complete_faces() {
            let _ = write!(out, " {f}");
        }
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_face_id_with_line_number() {
        let text = "tess 1\n# two faces\nface 0: 1 2 3\nface 0: 3 2 4\n";
        assert_eq!(
            load_patch(text).unwrap_err(),
            ParseError::Syntax { line: 4, message: "duplicate face id 0".into() }
        );
    }

    #[test]
    fn rejects_non_simple_cycle() {
        let err = load_patch("tess 1\nface 0: 1 2 1 3\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }), "{err}");
    }

    #[test]
    fn rejects_missing_header_and_garbage() {
        assert!(matches!(load_patch("face 0: 1 2 3\n"), Err(ParseError::Syntax { line: 1, .. })));
        assert!(matches!(load_patch("tess 1\nvertex 3\n"), Err(ParseError::Syntax { line: 2, .. })));
    }

    #[test]
    fn unknown_completeness_id_is_a_patch_error() {
        let err = load_patch("tess 1\nface 0: 1 2 3\ncomplete_vertices: 9\n").unwrap_err();
        assert_eq!(err, ParseError::Patch(PatchError::UnknownVertex(VertexId(9))));
    }

    #[test]
    fn all_keyword_expands() {
        let p = load_patch("tess 1\nface 3: 1 2 3\ncomplete_vertices: all\ncomplete_faces: all\n").unwrap();
        assert_eq!(p.complete_vertices().len(), 3);
        assert!(p.is_face_complete(FaceId(3)));
        assert_eq!(save_patch(&p), "tess 1\nface 3: 1 2 3\ncomplete_vertices: all\ncomplete_faces: all\n");
    }
}
