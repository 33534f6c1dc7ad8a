//! Random instances and the reduction sweep shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use precubical::io::{grid_with_holes, vertex_id};
use precubical::reduce::{Mode, ReductionCertificate, Step};
use precubical::{CellRef, Complex};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A grid with `m, n <= 4`, each square a hole with probability 1/4, and
/// up to three pendant edges `g<k>` to or from fresh vertices `t<k>`.
pub fn random_instance(rng: &mut impl Rng) -> Complex {
    let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let holes: BTreeSet<(usize, usize)> = (0..m)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|_| rng.gen_bool(0.25))
        .collect();
    let grid = grid_with_holes(m, n, &holes).unwrap();
    let mut table = grid.to_table();
    for k in 0..rng.gen_range(0..=3) {
        let v = vertex_id(rng.gen_range(0..=m), rng.gen_range(0..=n));
        let t = format!("t{k}");
        let faces = if rng.gen_bool(0.5) {
            [t.clone(), v]
        } else {
            [v, t.clone()]
        };
        table.push(0, t, vec![]);
        table.push(1, format!("g{k}"), vec![faces]);
    }
    Complex::from_table(table).unwrap()
}

/// Every parameter choice of every reduction on every cell of `p`.
pub fn all_steps(p: &Complex) -> Vec<Step> {
    let mut steps = Vec::new();
    for s in p.squares() {
        for b in 0..2 {
            steps.push(Step::square_one_free(s, b));
        }
        for a in 1..=2 {
            for b in 0..2 {
                steps.push(Step::square_two_free(s, a, b));
            }
        }
    }
    for e in p.edges() {
        for b in 0..2 {
            steps.push(Step::edge_collapse(e, b));
        }
    }
    steps
}

/// Runs `step` in apply mode, returning the result only when it went
/// through with the guarantee intact.
pub fn apply(p: &Complex, step: &Step) -> Option<(Complex, ReductionCertificate)> {
    match step.run(p, Mode::APPLY) {
        Ok((Some(q), cert)) => Some((q, cert)),
        _ => None,
    }
}

pub fn cells(p: &Complex) -> BTreeSet<CellRef> {
    p.cells().collect()
}
