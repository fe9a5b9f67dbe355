//! Exact homology of links in thickened genus-zero surfaces.
//!
//! A link diagram lives in a sphere with marked punctures. Each vertex of the
//! cube of resolutions is a collection of circles, and every circle either
//! bounds a disk avoiding the punctures or separates them. The chain complex
//! built from these circles is reduced over the integers, the rationals and
//! the two-element field.

mod error;
mod uf;

pub mod complex;
pub mod detect;
pub mod diagram;
pub mod fuzz;
pub mod linalg;
pub mod report;
pub mod resolution;
pub mod surface;

pub use diagram::{
    is_isomorphic, parse_diagram, Diagram, DiagramDocument, DiagramParts, KinkSide, MoveKind, MoveSite, VertexKind,
};
pub use error::{Error, Result};
pub use surface::{Face, MapViolation, PlanarSurface, PlaneMap};

/// Largest number of punctures a surface may carry. Puncture sets are stored
/// as bit masks.
pub const MAX_PUNCTURES: usize = 64;

/// Runs `f` on a pool of `threads` workers. Every parallel step reduces in a
/// fixed order, so the result does not depend on `threads`.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool")
        .install(f)
}
