//! Generators: grids with holes and the named example complexes.

use std::collections::BTreeSet;

use super::IoError;
use crate::complex::{CellRef, Complex};
use crate::reduce::{ReduceError, Step};

pub const FIXTURE_NAMES: [&str; 10] = [
    "interval",
    "circle",
    "double_edge",
    "path2",
    "square",
    "square_plus_tail",
    "shared_memory",
    "holes_example",
    "ordered_holes_example",
    "swiss_flag",
];

/// Parameters of a grid: `m` columns and `n` rows of squares, minus the
/// squares at `holes`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub m: usize,
    pub n: usize,
    pub holes: BTreeSet<(usize, usize)>,
}

impl GridSpec {
    pub fn new(m: usize, n: usize, holes: impl IntoIterator<Item = (usize, usize)>) -> Self {
        GridSpec {
            m,
            n,
            holes: holes.into_iter().collect(),
        }
    }

    pub fn build(&self) -> Result<Complex, IoError> {
        grid_with_holes(self.m, self.n, &self.holes)
    }

    /// Squares in reading order: top row first, left to right.
    pub fn linewise_squares(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .rev()
            .flat_map(|j| (0..self.m).map(move |i| (i, j)))
            .filter(|c| !self.holes.contains(c))
            .collect()
    }

    /// True iff a hole lies to the left of `(i, j)` in the same row.
    pub fn right_of_hole(&self, (i, j): (usize, usize)) -> bool {
        self.holes.iter().any(|&(hi, hj)| hj == j && hi < i)
    }

    /// True iff a hole lies above `(i, j)` in the same column.
    pub fn below_hole(&self, (i, j): (usize, usize)) -> bool {
        self.holes.iter().any(|&(hi, hj)| hi == i && hj > j)
    }
}

pub fn vertex_id(i: usize, j: usize) -> String {
    format!("({i},{j})")
}

pub fn square_id(i: usize, j: usize) -> String {
    format!("s({i},{j})")
}

/// Grid of `m x n` squares with vertices `(i,j)`, horizontal edges
/// `h(i,j): (i,j) -> (i+1,j)`, vertical edges `v(i,j): (i,j) -> (i,j+1)`
/// and squares `s(i,j)` with left `v(i,j)`, right `v(i+1,j)`, bottom
/// `h(i,j)` and top `h(i,j+1)`. Holes remove squares only.
pub fn grid_with_holes(
    m: usize,
    n: usize,
    holes: &BTreeSet<(usize, usize)>,
) -> Result<Complex, IoError> {
    if m == 0 || n == 0 {
        return Err(IoError::EmptyGrid { m, n });
    }
    if let Some(&(i, j)) = holes.iter().find(|&&(i, j)| i >= m || j >= n) {
        return Err(IoError::OutOfRange { i, j, m, n });
    }
    let mut b = Complex::builder();
    for i in 0..=m {
        for j in 0..=n {
            let v = vertex_id(i, j);
            b = b
                .vertex(v.clone())
                .position(CellRef::vertex(v), (i as i64, j as i64));
        }
    }
    for i in 0..=m {
        for j in 0..=n {
            if i < m {
                b = b.edge(
                    format!("h({i},{j})"),
                    &vertex_id(i, j),
                    &vertex_id(i + 1, j),
                );
            }
            if j < n {
                b = b.edge(
                    format!("v({i},{j})"),
                    &vertex_id(i, j),
                    &vertex_id(i, j + 1),
                );
            }
        }
    }
    for i in 0..m {
        for j in 0..n {
            if holes.contains(&(i, j)) {
                continue;
            }
            b = b.square(
                square_id(i, j),
                [
                    &format!("v({i},{j})"),
                    &format!("v({},{j})", i + 1),
                    &format!("h({i},{j})"),
                    &format!("h({i},{})", j + 1),
                ],
            );
        }
    }
    Ok(b.build().expect("grids satisfy the precubical identities"))
}

/// Grid parameters of the grid-shaped fixtures.
pub fn fixture_grid(name: &str) -> Option<GridSpec> {
    match name {
        "shared_memory" => Some(GridSpec::new(3, 3, [(1, 1)])),
        // Two holes, each with squares to its right and below.
        "holes_example" => Some(GridSpec::new(5, 5, [(1, 3), (3, 1)])),
        // Two holes stacked in one column.
        "ordered_holes_example" => Some(GridSpec::new(4, 3, [(2, 2), (2, 0)])),
        "swiss_flag" => Some(GridSpec::new(
            5,
            5,
            [(2, 1), (1, 2), (2, 2), (3, 2), (2, 3)],
        )),
        _ => None,
    }
}

fn laid_out(b: crate::complex::ComplexBuilder, at: &[(&str, (i64, i64))]) -> Complex {
    let b = at
        .iter()
        .fold(b, |b, (v, pos)| b.position(CellRef::vertex(*v), *pos));
    b.build().expect("fixtures are valid")
}

pub fn named_fixture(name: &str) -> Result<Complex, IoError> {
    if let Some(spec) = fixture_grid(name) {
        return spec.build();
    }
    let p = match name {
        "interval" => laid_out(
            Complex::builder()
                .vertices(["a0", "a1"])
                .edge("e", "a0", "a1"),
            &[("a0", (0, 0)), ("a1", (1, 0))],
        ),
        "circle" => laid_out(
            Complex::builder().vertex("v").edge("e", "v", "v"),
            &[("v", (0, 0))],
        ),
        "double_edge" => laid_out(
            Complex::builder()
                .vertices(["u", "w"])
                .edge("p", "u", "w")
                .edge("q", "u", "w"),
            &[("u", (0, 0)), ("w", (1, 0))],
        ),
        "path2" => laid_out(
            Complex::builder()
                .vertices(["v0", "v1", "v2"])
                .edge("e1", "v0", "v1")
                .edge("e2", "v1", "v2"),
            &[("v0", (0, 0)), ("v1", (1, 0)), ("v2", (2, 0))],
        ),
        "square" => laid_out(square_builder(), &SQUARE_LAYOUT),
        "square_plus_tail" => laid_out(
            square_builder().vertex("t").edge("g", "t", "w10"),
            &[SQUARE_LAYOUT.as_slice(), &[("t", (1, -1))]].concat(),
        ),
        other => return Err(IoError::UnknownFixture(other.to_string())),
    };
    Ok(p)
}

const SQUARE_LAYOUT: [(&str, (i64, i64)); 4] = [
    ("w00", (0, 0)),
    ("w01", (0, 1)),
    ("w10", (1, 0)),
    ("w11", (1, 1)),
];

fn square_builder() -> crate::complex::ComplexBuilder {
    Complex::builder()
        .vertices(["w00", "w01", "w10", "w11"])
        .edge("eL", "w00", "w01")
        .edge("eR", "w10", "w11")
        .edge("eB", "w00", "w10")
        .edge("eT", "w01", "w11")
        .square("s", ["eL", "eR", "eB", "eT"])
}

/// Builds a reduction recipe for a grid in the style of the worked
/// examples:
///
/// 1. squares in reading order from the top left, each removed by the
///    first of `square-one-free b=1`, `square-two-free a=2 b=0`,
///    `square-two-free a=1 b=1` that applies;
/// 2. squares left over, swept upwards from the bottom right with
///    `square-one-free b=0` first, repeated while progress is made;
/// 3. edge collapses with `b=0` until none applies, then with `b=1`.
///
/// Only steps whose conditions hold and whose guarantee is kept are
/// recorded, so replaying the recipe never needs an override.
pub fn linewise_recipe(spec: &GridSpec) -> Result<Vec<Step>, ReduceError> {
    let mut p = spec.build().expect("grid parameters in range");
    let mut steps = Vec::new();
    let try_steps = |p: &mut Complex, candidates: Vec<Step>, steps: &mut Vec<Step>| {
        for step in candidates {
            if let Ok((Some(q), _)) = step.run(p, crate::reduce::Mode::APPLY) {
                *p = q;
                steps.push(step);
                return true;
            }
        }
        false
    };

    let mut deferred = Vec::new();
    for (i, j) in spec.linewise_squares() {
        let id = square_id(i, j);
        let first = vec![
            Step::square_one_free(id.clone(), 1),
            Step::square_two_free(id.clone(), 2, 0),
            Step::square_two_free(id.clone(), 1, 1),
        ];
        if !try_steps(&mut p, first, &mut steps) {
            deferred.push((i, j));
        }
    }

    deferred.sort_by_key(|&(i, j)| (j, std::cmp::Reverse(i)));
    loop {
        let before = deferred.len();
        deferred.retain(|&(i, j)| {
            let id = square_id(i, j);
            let candidates = vec![
                Step::square_one_free(id.clone(), 0),
                Step::square_one_free(id.clone(), 1),
                Step::square_two_free(id.clone(), 2, 0),
                Step::square_two_free(id.clone(), 1, 1),
                Step::square_two_free(id.clone(), 1, 0),
                Step::square_two_free(id, 2, 1),
            ];
            !try_steps(&mut p, candidates, &mut steps)
        });
        if deferred.is_empty() || deferred.len() == before {
            break;
        }
    }

    for b in [0, 1] {
        'edges: loop {
            let edges: Vec<String> = p.edges().map(str::to_string).collect();
            for e in edges {
                if try_steps(&mut p, vec![Step::edge_collapse(e, b)], &mut steps) {
                    continue 'edges;
                }
            }
            break;
        }
    }
    Ok(steps)
}
