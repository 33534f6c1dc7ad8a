//! Finite precubical sets as models of concurrent systems.
//!
//! The crate covers four layers:
//!
//! * [`complex`]: the data model, validation, the opposite and transpose
//!   dualities, regularity, extremal vertices, subcomplexes and
//!   isomorphism testing.
//! * [`reduce`]: three local reductions (edge collapse, square elimination
//!   with one free face, square elimination with two free faces) that
//!   preserve directed homotopy type relative to the extremal vertices,
//!   each checked against its side conditions and reported in a
//!   [`reduce::ReductionCertificate`].
//! * [`fbg`]: brute-force fundamental bipartite graphs, counting classes of
//!   directed edge paths between minimal and maximal vertices modulo
//!   square exchanges. This is the oracle used to check the reductions.
//! * [`io`]: the `pcsv1` text format, grid and fixture generators, and DOT
//!   export.

pub mod complex;
pub mod fbg;
pub mod io;
pub mod reduce;

pub use complex::{
    are_isomorphic, cube_morphism, euler_characteristic, extremal, is_regular, is_subcomplex,
    maximal_vertices, minimal_vertices, opposite, standard_cube, transpose, validate, CellRecord,
    CellRef, CellTable, Complex, ComplexBuilder, ComplexError, CubeMorphismImage, ValidationReport,
    Violation,
};
