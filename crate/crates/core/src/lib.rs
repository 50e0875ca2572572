//! Discrete exterior calculus on two-dimensional grid complexes.
//!
//! The crate covers the periodic `n x m` combinatorial torus and bounded plane
//! windows with a ghost ring: chains and the boundary operator
//! ([`grid_complex`]), discrete forms with `d`, the cup product, the Hodge star
//! and the codifferential ([`calculus`]), integer operator matrices
//! ([`operators`]), Hodge decomposition and the Hodge–Dirac solve ([`hodge`]),
//! exact cohomology ([`cohomology`]), JSON/CSV documents ([`io`]) and
//! randomized identity checks ([`checks`]).

pub mod calculus;
pub mod checks;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod exact;
pub mod grid_complex;
pub mod hodge;
pub mod io;
pub mod operators;

pub use calculus::{Form, InhomogeneousForm};
pub use error::{DecError, Result};
pub use grid_complex::{CellId, CellKind, Chain, GridShape, Topology};
