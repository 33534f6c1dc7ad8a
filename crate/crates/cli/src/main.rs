//! `pcs`: validate, generate, reduce and compare precubical sets stored as
//! `pcsv1` documents.
//!
//! Exit status: 0 on success, 1 when the answer is negative (conditions
//! failed, complex invalid or cyclic, not isomorphic, tables differ), 2 on
//! usage, I/O and parse errors.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use precubical::fbg::{
    fbg_equal, fbg_profile_equal, fundamental_bipartite_graph_capped, one_skeleton_is_acyclic,
    FbgError, FbgTable, DEFAULT_MAX_PATHS,
};
use precubical::io::{self as pio, GridSpec, IoError};
use precubical::reduce::{
    auto_reduce, Mode, Policy, ReduceError, ReductionCertificate, ReductionKind, Step,
};
use precubical::{
    are_isomorphic, euler_characteristic, is_regular, maximal_vertices, minimal_vertices, Complex,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "pcs",
    version,
    about = "Precubical sets: validation, reduction and fundamental bipartite graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a document and report every violated identity.
    Validate { input: PathBuf },
    /// Cell counts, extremal vertices and other summary data.
    Info {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Write a named fixture or a grid with holes.
    Gen(GenArgs),
    /// Check, and if possible apply, one reduction.
    Reduce(ReduceArgs),
    /// Apply reductions greedily or from a recipe file.
    AutoReduce(AutoReduceArgs),
    /// Class counts between minimal and maximal vertices.
    Fbg {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_PATHS)]
        max_paths: usize,
        /// Also print the least path of every class.
        #[arg(long)]
        representatives: bool,
        #[arg(long)]
        json: bool,
    },
    /// Compare the class tables of two complexes.
    CompareFbg {
        left: PathBuf,
        right: PathBuf,
        /// Compare count matrices up to renaming the extremal vertices.
        #[arg(long)]
        profile: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_PATHS)]
        max_paths: usize,
        #[arg(long)]
        json: bool,
    },
    /// Test two complexes for isomorphism.
    Iso {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Graphviz rendering of a complex of dimension at most 2.
    ExportDot {
        input: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, conflicts_with_all = ["grid", "hole"], required_unless_present = "grid")]
    fixture: Option<String>,
    /// Grid size as `<m>x<n>`.
    #[arg(long, value_parser = parse_size)]
    grid: Option<(usize, usize)>,
    /// A missing square `<i>,<j>`; repeatable.
    #[arg(long, value_parser = parse_hole)]
    hole: Vec<(usize, usize)>,
    /// Also write the linewise reduction recipe for the grid.
    #[arg(long)]
    plan: Option<PathBuf>,
    #[arg(short)]
    o: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    EdgeCollapse,
    SquareOneFree,
    SquareTwoFree,
}

impl From<Op> for ReductionKind {
    fn from(op: Op) -> Self {
        match op {
            Op::EdgeCollapse => ReductionKind::EdgeCollapse,
            Op::SquareOneFree => ReductionKind::SquareOneFree,
            Op::SquareTwoFree => ReductionKind::SquareTwoFree,
        }
    }
}

#[derive(Args)]
struct ReduceArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    op: Op,
    #[arg(long)]
    cell: String,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    a: Option<u8>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    b: u8,
    /// Apply even when Y is empty.
    #[arg(long)]
    allow_empty_y: bool,
    /// Only evaluate the conditions.
    #[arg(long)]
    check: bool,
    #[arg(short)]
    o: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyName {
    Greedy,
    Recipe,
}

#[derive(Args)]
struct AutoReduceArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    policy: Option<PolicyName>,
    /// Step list, one `kind cell [a] b` per line.
    #[arg(long)]
    recipe: Option<PathBuf>,
    #[arg(long)]
    allow_empty_y: bool,
    #[arg(short)]
    o: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (m, n) = s
        .split_once('x')
        .ok_or_else(|| format!("expected <m>x<n>, got `{s}`"))?;
    let num = |t: &str| t.parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(m)?, num(n)?))
}

fn parse_hole(s: &str) -> Result<(usize, usize), String> {
    let (i, j) = s
        .split_once(',')
        .ok_or_else(|| format!("expected <i>,<j>, got `{s}`"))?;
    let num = |t: &str| t.parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(i)?, num(j)?))
}

/// A negative answer: reported, then exit status 1.
#[derive(Debug)]
struct Negative;

impl std::fmt::Display for Negative {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("negative result")
    }
}

impl std::error::Error for Negative {}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        return Ok(text);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> Result<Complex> {
    let text = read_text(path)?;
    pio::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(o: Option<&Path>, text: &str) -> Result<()> {
    match o {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn save(o: Option<&Path>, p: &Complex) -> Result<()> {
    emit(o, &pio::serialize(p))
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn joined(set: &BTreeSet<String>) -> String {
    set.iter().cloned().collect::<Vec<_>>().join(" ")
}

fn validate_cmd(input: &Path) -> Result<()> {
    let text = read_text(input)?;
    match pio::parse(&text) {
        Ok(p) => {
            println!(
                "valid: {} vertices, {} edges, {} squares, {} cells in total",
                p.num_cells(0),
                p.num_cells(1),
                p.num_cells(2),
                p.total_cells()
            );
            Ok(())
        }
        Err(IoError::ValidationFailed(report)) => {
            println!("invalid: {} violations", report.violations.len());
            print!("{report}");
            Err(Negative.into())
        }
        Err(e) => Err(anyhow!(e).context(format!("parsing {}", input.display()))),
    }
}

fn info_cmd(input: &Path, json: bool) -> Result<()> {
    let p = load(input)?;
    let counts: Vec<usize> = (0..=p.dimension().unwrap_or(0))
        .map(|d| p.num_cells(d))
        .collect();
    let irregular: Vec<String> = p
        .cells()
        .filter(|c| !is_regular(&p, c).expect("cell exists"))
        .map(|c| c.to_string())
        .collect();
    let (minimal, maximal) = (minimal_vertices(&p), maximal_vertices(&p));
    let acyclic = one_skeleton_is_acyclic(&p);
    if json {
        return print_json(&json!({
            "dimension": p.dimension(),
            "cells": counts,
            "euler_characteristic": euler_characteristic(&p),
            "minimal": minimal,
            "maximal": maximal,
            "acyclic": acyclic,
            "irregular": irregular,
        }));
    }
    match p.dimension() {
        Some(d) => println!("dimension: {d}"),
        None => println!("dimension: empty"),
    }
    for (d, n) in counts.iter().enumerate() {
        println!("cells of degree {d}: {n}");
    }
    println!("euler characteristic: {}", euler_characteristic(&p));
    println!("minimal: {}", joined(&minimal));
    println!("maximal: {}", joined(&maximal));
    println!("acyclic 1-skeleton: {}", if acyclic { "yes" } else { "no" });
    if irregular.is_empty() {
        println!("irregular cells: none");
    } else {
        println!("irregular cells: {}", irregular.join(" "));
    }
    Ok(())
}

fn gen_cmd(args: &GenArgs) -> Result<()> {
    let spec = match (&args.fixture, args.grid) {
        (Some(name), _) => pio::fixture_grid(name),
        (None, Some((m, n))) => Some(GridSpec::new(m, n, args.hole.iter().copied())),
        (None, None) => bail!("one of --fixture or --grid is required"),
    };
    let p = match (&args.fixture, &spec) {
        (Some(name), _) => pio::named_fixture(name)?,
        (None, Some(spec)) => spec.build()?,
        (None, None) => unreachable!(),
    };
    if let Some(path) = &args.plan {
        let spec = spec.ok_or_else(|| anyhow!("--plan needs a grid-shaped complex"))?;
        let steps = pio::linewise_recipe(&spec)?;
        emit(Some(path), &pio::write_recipe(&steps))?;
    }
    save(args.o.as_deref(), &p)
}

fn reduce_cmd(args: &ReduceArgs) -> Result<()> {
    let p = load(&args.input)?;
    let kind = ReductionKind::from(args.op);
    let a = match (kind, args.a) {
        (ReductionKind::SquareTwoFree, Some(a)) => Some(a as usize),
        (ReductionKind::SquareTwoFree, None) => bail!("square-two-free needs --a"),
        (_, Some(_)) => bail!("--a only applies to square-two-free"),
        (_, None) => None,
    };
    let step = Step {
        kind,
        cell: args.cell.clone(),
        a,
        b: args.b as usize,
    };
    let mode = if args.check {
        Mode::Check
    } else {
        Mode::Apply {
            allow_empty_y: args.allow_empty_y,
        }
    };
    let (q, cert) = match step.run(&p, mode) {
        Ok(done) => done,
        Err(e) => match e.certificate() {
            Some(cert) => {
                show_certificate(cert, args.json)?;
                if !args.json {
                    println!("refused: {}", refusal(&e));
                }
                return Err(Negative.into());
            }
            None => return Err(e.into()),
        },
    };
    show_certificate(&cert, args.json)?;
    match q {
        Some(q) => {
            if let Some(o) = &args.o {
                save(Some(o), &q)?;
            }
            Ok(())
        }
        None if cert.is_applicable() || (args.allow_empty_y && cert.conditions_hold()) => Ok(()),
        None => Err(Negative.into()),
    }
}

fn refusal(e: &ReduceError) -> &'static str {
    match e {
        ReduceError::GuaranteeLost(_) => "Y is empty (pass --allow-empty-y to apply anyway)",
        _ => "conditions failed",
    }
}

fn show_certificate(cert: &ReductionCertificate, json: bool) -> Result<()> {
    if json {
        print_json(cert)
    } else {
        println!("{cert}");
        Ok(())
    }
}

fn auto_reduce_cmd(args: &AutoReduceArgs) -> Result<()> {
    let p = load(&args.input)?;
    let policy = match (args.policy, &args.recipe) {
        (Some(PolicyName::Greedy), Some(_)) => bail!("--recipe conflicts with --policy greedy"),
        (Some(PolicyName::Recipe), None) => bail!("--policy recipe needs --recipe <path>"),
        (_, Some(path)) => Policy::Recipe {
            steps: pio::parse_recipe(&read_text(path)?)
                .with_context(|| format!("parsing {}", path.display()))?,
            allow_empty_y: args.allow_empty_y,
        },
        (_, None) => Policy::Greedy,
    };
    let (q, trail) = match auto_reduce(&p, &policy) {
        Ok(done) => done,
        Err(e @ ReduceError::RecipeStepFailed { .. }) => {
            println!("{e}");
            return Err(Negative.into());
        }
        Err(e) => return Err(e.into()),
    };
    if args.json {
        print_json(&json!({ "trail": trail, "final": counts(&q) }))?;
    } else {
        for (n, cert) in trail.iter().enumerate() {
            println!("{:>4}. {}", n + 1, cert.step());
        }
        println!(
            "{} steps: {} -> {}",
            trail.len(),
            summary(&counts(&p)),
            summary(&counts(&q))
        );
    }
    if let Some(o) = &args.o {
        save(Some(o), &q)?;
    }
    Ok(())
}

fn counts(p: &Complex) -> [usize; 3] {
    [p.num_cells(0), p.num_cells(1), p.num_cells(2)]
}

fn summary(c: &[usize; 3]) -> String {
    format!("{} vertices, {} edges, {} squares", c[0], c[1], c[2])
}

fn fbg_of(p: &Complex, max_paths: usize) -> Result<FbgTable> {
    match fundamental_bipartite_graph_capped(p, max_paths) {
        Ok(t) => Ok(t),
        Err(e @ (FbgError::NotAcyclic | FbgError::PathExplosion { .. })) => {
            println!("{e}");
            Err(Negative.into())
        }
        Err(e) => Err(e.into()),
    }
}

fn plural(n: usize) -> &'static str {
    if n == 1 {
        "class"
    } else {
        "classes"
    }
}

fn fbg_cmd(input: &Path, max_paths: usize, representatives: bool, json: bool) -> Result<()> {
    let p = load(input)?;
    let table = fbg_of(&p, max_paths)?;
    if json {
        return print_json(&table);
    }
    for ((m, mx), entry) in &table.classes {
        println!("{m} -> {mx}: {} {}", entry.count, plural(entry.count));
        if representatives {
            for path in &entry.representatives {
                println!("    {}", path.edges.join(" "));
            }
        }
    }
    Ok(())
}

fn compare_cmd(
    left: &Path,
    right: &Path,
    profile: bool,
    max_paths: usize,
    json: bool,
) -> Result<()> {
    let a = fbg_of(&load(left)?, max_paths)?;
    let b = fbg_of(&load(right)?, max_paths)?;
    let equal = if profile {
        fbg_profile_equal(&a, &b)
    } else {
        fbg_equal(&a, &b)
    };
    let pairs: BTreeSet<&(String, String)> = a.classes.keys().chain(b.classes.keys()).collect();
    let count = |t: &FbgTable, (m, mx): &(String, String)| t.count(m, mx);
    if json {
        let rows: Vec<_> = pairs
            .iter()
            .map(|k| json!({"minimal": k.0, "maximal": k.1, "left": count(&a, k), "right": count(&b, k)}))
            .collect();
        print_json(&json!({ "equal": equal, "profile": profile, "pairs": rows }))?;
    } else {
        let show = |c: Option<usize>| c.map_or("-".to_string(), |c| c.to_string());
        for k in pairs {
            println!(
                "{} -> {}: {} vs {}",
                k.0,
                k.1,
                show(count(&a, k)),
                show(count(&b, k))
            );
        }
        println!("{}", if equal { "equal" } else { "different" });
    }
    if equal {
        Ok(())
    } else {
        Err(Negative.into())
    }
}

fn iso_cmd(left: &Path, right: &Path, json: bool) -> Result<()> {
    let (p, q) = (load(left)?, load(right)?);
    let found = are_isomorphic(&p, &q);
    if json {
        let mapping = found.as_ref().map(|iso| {
            iso.iter()
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .collect::<std::collections::BTreeMap<_, _>>()
        });
        print_json(&json!({ "isomorphic": found.is_some(), "mapping": mapping }))?;
    } else {
        match &found {
            Some(iso) => {
                println!("isomorphic");
                for (x, y) in iso {
                    println!("  {x} -> {y}");
                }
            }
            None => println!("not isomorphic"),
        }
    }
    found.map(|_| ()).ok_or_else(|| Negative.into())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Validate { input } => validate_cmd(&input),
        Command::Info { input, json } => info_cmd(&input, json),
        Command::Gen(args) => gen_cmd(&args),
        Command::Reduce(args) => reduce_cmd(&args),
        Command::AutoReduce(args) => auto_reduce_cmd(&args),
        Command::Fbg {
            input,
            max_paths,
            representatives,
            json,
        } => fbg_cmd(&input, max_paths, representatives, json),
        Command::CompareFbg {
            left,
            right,
            profile,
            max_paths,
            json,
        } => compare_cmd(&left, &right, profile, max_paths, json),
        Command::Iso { left, right, json } => iso_cmd(&left, &right, json),
        Command::ExportDot { input, o } => {
            let p = load(&input)?;
            emit(o.as_deref(), &pio::export_dot(&p)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Negative>() => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
