//! Plane tessellation patches, combinatorial curvature, face-distance
//! geometry of distance balls, and exact certification of compactly
//! supported eigenfunctions of elliptic operators.

pub mod curvature;
pub mod generate;
pub mod io;
pub mod metric;
pub mod patch;
pub mod rational;
pub mod spectral;
pub mod validate;

pub use curvature::{curvature, face_chi, face_size, is_nonpositively_curved, vertex_degree};
pub use generate::{generate_kagome, generate_regular, GenError, GenSpec, TilingKind};
pub use io::{load_patch, save_patch, ParseError};
pub use patch::{Corner, FaceId, PatchError, TessellationPatch, VertexId};
pub use rational::Rational;
pub use validate::{validate_patch, ValidationReport, Violation};
