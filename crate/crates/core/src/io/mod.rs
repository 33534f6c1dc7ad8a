//! Reading, writing and generating complexes.

mod dot;
mod fixtures;
mod format;
mod recipe;

use thiserror::Error;

use crate::complex::ValidationReport;

pub use dot::export_dot;
pub use fixtures::{
    fixture_grid, grid_with_holes, linewise_recipe, named_fixture, square_id, vertex_id, GridSpec,
    FIXTURE_NAMES,
};
pub use format::{parse, serialize, HEADER};
pub use recipe::{parse_recipe, write_recipe};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("document describes an invalid complex:\n{0}")]
    ValidationFailed(ValidationReport),
    #[error("hole ({i},{j}) outside a {m}x{n} grid")]
    OutOfRange {
        i: usize,
        j: usize,
        m: usize,
        n: usize,
    },
    #[error("grid dimensions must be positive, got {m}x{n}")]
    EmptyGrid { m: usize, n: usize },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("DOT export needs dimension <= 2, complex has dimension {0}")]
    DimensionUnsupported(usize),
}
