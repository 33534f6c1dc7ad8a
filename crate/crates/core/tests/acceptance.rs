//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use precubical::fbg::{enumerate_dipaths, fbg_equal, fundamental_bipartite_graph};
use precubical::io::{fixture_grid, grid_with_holes, linewise_recipe, named_fixture};
use precubical::reduce::{
    auto_reduce, edge_collapse, square_one_free, square_two_free, Mode, Policy, ReduceError,
    ReductionKind,
};
use precubical::{
    are_isomorphic, euler_characteristic, extremal, is_subcomplex, opposite, transpose, validate,
    CellRef, Complex,
};

const SWEEP_INSTANCES: u64 = 200;
const DUALITY_INSTANCES: u64 = 100;
const SWEEP_SEED: u64 = 0x5eed_0003;
const DUALITY_SEED: u64 = 0x5eed_0005;

const LIMIT_SHARED_MEMORY: Duration = Duration::from_secs(1);
const LIMIT_GREEDY: Duration = Duration::from_secs(1);
const LIMIT_SWEEP: Duration = Duration::from_secs(60);
const LIMIT_RECIPES: Duration = Duration::from_secs(10);

type Outcome = Result<String, String>;

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let took = start.elapsed();
    if took <= limit {
        Ok(format!("{detail}; {took:.2?} (limit {limit:?})"))
    } else {
        Err(format!("{detail}; took {took:.2?}, limit {limit:?}"))
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

fn shared_memory_classes() -> Outcome {
    let start = Instant::now();
    let p = named_fixture("shared_memory").map_err(|e| e.to_string())?;
    let table = fundamental_bipartite_graph(&p).map_err(|e| e.to_string())?;
    let classes = table.count("(0,0)", "(3,3)");
    let paths = enumerate_dipaths(&p, "(0,0)", "(3,3)")
        .map_err(|e| e.to_string())?
        .len();
    let lattice = binomial(6, 3) as usize;
    if classes != Some(2) || paths != 20 || lattice != 20 || table.classes.len() != 1 {
        return Err(format!(
            "classes {classes:?}, paths {paths}, C(6,3) = {lattice}, pairs {}",
            table.classes.len()
        ));
    }
    within(LIMIT_SHARED_MEMORY, start, "2 classes over 20 paths".into())
}

fn greedy_reaches_double_edge() -> Outcome {
    let start = Instant::now();
    let p = named_fixture("shared_memory").map_err(|e| e.to_string())?;
    let (q, trail) = auto_reduce(&p, &Policy::Greedy).map_err(|e| e.to_string())?;
    let target = named_fixture("double_edge").map_err(|e| e.to_string())?;
    if are_isomorphic(&q, &target).is_none() {
        return Err(format!(
            "result has {} vertices, {} edges, {} squares",
            q.num_cells(0),
            q.num_cells(1),
            q.num_cells(2)
        ));
    }
    within(
        LIMIT_GREEDY,
        start,
        format!("isomorphic to double_edge after {} steps", trail.len()),
    )
}

#[derive(Default)]
struct Sweep {
    instances: usize,
    applied: usize,
    fbg_violations: Vec<String>,
    structure_violations: Vec<String>,
    took: Duration,
}

fn sweep() -> Sweep {
    let start = Instant::now();
    let mut out = Sweep::default();
    let mut rng = common::rng(SWEEP_SEED);
    for n in 0..SWEEP_INSTANCES {
        let p = common::random_instance(&mut rng);
        out.instances += 1;
        let fbg_p = fundamental_bipartite_graph(&p).expect("grids are acyclic");
        let ext_p = extremal(&p);
        let euler_p = euler_characteristic(&p);
        for step in common::all_steps(&p) {
            let Some((q, cert)) = common::apply(&p, &step) else {
                continue;
            };
            out.applied += 1;
            let tag = format!("instance {n}, `{step}`");
            if !cert.fbg_guaranteed || !cert.conditions_hold() {
                out.fbg_violations
                    .push(format!("{tag}: applied without guarantee"));
            }
            match fundamental_bipartite_graph(&q) {
                Ok(fbg_q) if fbg_equal(&fbg_p, &fbg_q) => {}
                Ok(_) => out.fbg_violations.push(format!("{tag}: FBG changed")),
                Err(e) => out.fbg_violations.push(format!("{tag}: {e}")),
            }
            if extremal(&q) != ext_p {
                out.fbg_violations
                    .push(format!("{tag}: extremal set changed"));
            }

            if !validate(&q.to_table()).is_valid() {
                out.structure_violations
                    .push(format!("{tag}: invalid output"));
            }
            if euler_characteristic(&q) != euler_p {
                out.structure_violations
                    .push(format!("{tag}: Euler characteristic changed"));
            }
            let clause = match cert.kind {
                ReductionKind::SquareOneFree | ReductionKind::SquareTwoFree => {
                    is_subcomplex(&p, &q.to_table())
                }
                ReductionKind::EdgeCollapse => {
                    let y = cert.y.clone().unwrap_or_default();
                    let q_rest: BTreeSet<CellRef> =
                        common::cells(&q).difference(&y).cloned().collect();
                    let p_rest: BTreeSet<CellRef> = common::cells(&p)
                        .into_iter()
                        .filter(|c| !y.contains(c) && !cert.removed.contains(c))
                        .collect();
                    q_rest == p_rest
                        && q.restrict(&q_rest).records == p.restrict(&p_rest).records
                        && q.is_face_closed(&q_rest)
                        && p.is_face_closed(&p_rest)
                }
            };
            if !clause {
                out.structure_violations
                    .push(format!("{tag}: subcomplex clause fails"));
            }
        }
    }
    out.took = start.elapsed();
    out
}

fn report(violations: &[String]) -> String {
    let shown: Vec<&str> = violations.iter().take(5).map(String::as_str).collect();
    format!("{} violations: {}", violations.len(), shown.join("; "))
}

fn fbg_preservation(s: &Sweep) -> Outcome {
    let detail = format!(
        "{} instances, {} reductions applied",
        s.instances, s.applied
    );
    if !s.fbg_violations.is_empty() {
        return Err(format!("{detail}; {}", report(&s.fbg_violations)));
    }
    if s.applied == 0 {
        return Err("no reduction was applicable".into());
    }
    if s.took > LIMIT_SWEEP {
        return Err(format!(
            "{detail}; took {:.2?}, limit {LIMIT_SWEEP:?}",
            s.took
        ));
    }
    Ok(format!("{detail}; {:.2?} (limit {LIMIT_SWEEP:?})", s.took))
}

fn structural_conservation(s: &Sweep) -> Outcome {
    if s.structure_violations.is_empty() {
        Ok(format!("{} reductions checked", s.applied))
    } else {
        Err(report(&s.structure_violations))
    }
}

/// Compares `direct` with the dual computation, mapping the result of the
/// latter back through `back`.
fn dual_agrees(
    direct: Result<(Option<Complex>, precubical::reduce::ReductionCertificate), ReduceError>,
    dual: Result<(Option<Complex>, precubical::reduce::ReductionCertificate), ReduceError>,
    back: fn(&Complex) -> Complex,
) -> Option<bool> {
    match (direct, dual) {
        (Ok((Some(q), _)), Ok((Some(r), _))) => Some(q.same_cells(&back(&r))),
        (Err(_), Err(_)) => None,
        _ => Some(false),
    }
}

fn duality_commutation() -> Outcome {
    let mut rng = common::rng(DUALITY_SEED);
    let mode = Mode::Apply {
        allow_empty_y: true,
    };
    let (mut compared, mut violations) = (0usize, Vec::new());
    for n in 0..DUALITY_INSTANCES {
        let p = common::random_instance(&mut rng);
        let (op, tr) = (opposite(&p), transpose(&p));
        let mut check = |label: String, agrees: Option<bool>| match agrees {
            Some(true) => compared += 1,
            Some(false) => violations.push(format!("instance {n}: {label}")),
            None => {}
        };
        for x in p.edges() {
            check(
                format!("edge-collapse {x} 1"),
                dual_agrees(
                    edge_collapse(&p, x, 1, mode),
                    edge_collapse(&op, x, 0, mode),
                    opposite,
                ),
            );
        }
        for x in p.squares() {
            for b in 0..2 {
                check(
                    format!("square-two-free {x} 2 {b}"),
                    dual_agrees(
                        square_two_free(&p, x, 2, b, mode),
                        square_two_free(&tr, x, 1, b, mode),
                        transpose,
                    ),
                );
            }
            check(
                format!("square-two-free {x} 1 1"),
                dual_agrees(
                    square_two_free(&p, x, 1, 1, mode),
                    square_two_free(&op, x, 1, 0, mode),
                    opposite,
                ),
            );
        }
    }
    if !violations.is_empty() {
        return Err(report(&violations));
    }
    if compared == 0 {
        return Err("no applicable cell was found".into());
    }
    Ok(format!(
        "{compared} applicable reductions agree with their duals"
    ))
}

fn failed_condition(
    result: Result<(Option<Complex>, precubical::reduce::ReductionCertificate), ReduceError>,
    label: &str,
    witness: CellRef,
) -> Result<(), String> {
    let cert = match result {
        Err(ReduceError::ConditionsFailed(cert)) => cert,
        other => return Err(format!("expected ConditionsFailed, got {other:?}")),
    };
    let failed: Vec<&str> = cert.failed().map(|c| c.label).collect();
    let witnesses = cert.condition(label).map(|c| c.witnesses.clone());
    if failed != [label] || witnesses != Some(vec![witness.clone()]) {
        return Err(format!(
            "failed {failed:?}, witnesses of ({label}) {witnesses:?}, expected [{witness}]"
        ));
    }
    Ok(())
}

fn refusals() -> Outcome {
    let de = named_fixture("double_edge").map_err(|e| e.to_string())?;
    for b in 0..2 {
        failed_condition(
            edge_collapse(&de, "p", b, Mode::APPLY),
            "i",
            CellRef::edge("q"),
        )
        .map_err(|e| format!("double_edge, b={b}: {e}"))?;
    }
    let tail = named_fixture("square_plus_tail").map_err(|e| e.to_string())?;
    failed_condition(
        square_one_free(&tail, "s", 0, Mode::APPLY),
        "ii",
        CellRef::edge("g"),
    )
    .map_err(|e| format!("square_plus_tail: {e}"))?;
    Ok("double_edge refused on (i) with witness q for b=0,1; square_plus_tail refused on (ii) with witness g".into())
}

fn recipes() -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    for name in ["holes_example", "ordered_holes_example", "swiss_flag"] {
        let spec = fixture_grid(name).expect("grid fixture");
        let p = spec.build().map_err(|e| e.to_string())?;
        let steps = linewise_recipe(&spec).map_err(|e| format!("{name}: {e}"))?;
        let policy = Policy::Recipe {
            steps: steps.clone(),
            allow_empty_y: false,
        };
        let (q, trail) = auto_reduce(&p, &policy).map_err(|e| format!("{name}: {e}"))?;
        if trail.len() != steps.len() || !trail.iter().all(|c| c.is_applicable()) {
            return Err(format!(
                "{name}: a step went through without its conditions"
            ));
        }
        let before = fundamental_bipartite_graph(&p).map_err(|e| e.to_string())?;
        let after = fundamental_bipartite_graph(&q).map_err(|e| e.to_string())?;
        if !fbg_equal(&before, &after) {
            return Err(format!("{name}: FBG changed along the recipe"));
        }
        let count = before.count("(0,0)", &format!("({},{})", spec.m, spec.n));
        details.push(format!(
            "{name}: {} steps to {}v/{}e/{}s, {} classes",
            steps.len(),
            q.num_cells(0),
            q.num_cells(1),
            q.num_cells(2),
            count.unwrap_or(0)
        ));
    }
    within(LIMIT_RECIPES, start, details.join("; "))
}

fn oracle_sanity() -> Outcome {
    let mut checked = 0;
    for m in 1..=3 {
        for n in 1..=3 {
            let corner = format!("({m},{n})");
            let mut cases = vec![(BTreeSet::new(), 1)];
            for i in 0..m {
                for j in 0..n {
                    cases.push((BTreeSet::from([(i, j)]), 2));
                }
            }
            for (holes, want) in cases {
                let p = grid_with_holes(m, n, &holes).map_err(|e| e.to_string())?;
                let got = fundamental_bipartite_graph(&p)
                    .map_err(|e| e.to_string())?
                    .count("(0,0)", &corner);
                if got != Some(want) {
                    return Err(format!(
                        "grid({m},{n},{holes:?}): {got:?} classes, expected {want}"
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} grids"))
}

fn main() -> ExitCode {
    let sweep = sweep();
    let results: [(&str, Outcome); 8] = [
        ("shared-memory class count", shared_memory_classes()),
        (
            "greedy reduction to the double edge",
            greedy_reaches_double_edge(),
        ),
        ("FBG preservation", fbg_preservation(&sweep)),
        ("structural conservation", structural_conservation(&sweep)),
        ("duality commutation", duality_commutation()),
        ("refusal correctness", refusals()),
        ("grid recipes", recipes()),
        ("oracle sanity", oracle_sanity()),
    ];
    let mut failures = 0;
    for (n, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", n + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {}: FAIL {name}: {detail}", n + 1)
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} of {} criteria failed", results.len());
        ExitCode::FAILURE
    }
}
