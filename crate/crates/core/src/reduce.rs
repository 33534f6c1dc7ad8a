//! Local reductions of 2-dimensional precubical sets.
//!
//! Each reduction takes a cell `x` and side parameters, evaluates its side
//! conditions, and either reports them ([`Mode::Check`]) or produces the
//! reduced complex ([`Mode::Apply`]). The outcome is always described by a
//! [`ReductionCertificate`].
//!
//! | kind              | removes                                   | faces changed |
//! |-------------------|-------------------------------------------|---------------|
//! | `edge-collapse`   | `x`, `d_1^{1-b} x`                        | `D_1^b y = d_1^b x` for `y ∈ Y` |
//! | `square-one-free` | `x`, `d_1^{1-b} x`, `d_2^b x`, `d_1^{1-b} d_2^b x` | none |
//! | `square-two-free` | `x`, `d_{3-a}^b x`                        | none |
//!
//! When the set `Y` of an edge collapse or a two-free elimination is empty
//! the extremal vertices may change, so applying such a reduction is
//! refused unless explicitly allowed.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::complex::{is_regular, CellRef, Complex, ComplexError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionKind {
    EdgeCollapse,
    SquareOneFree,
    SquareTwoFree,
}

impl ReductionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ReductionKind::EdgeCollapse => "edge-collapse",
            ReductionKind::SquareOneFree => "square-one-free",
            ReductionKind::SquareTwoFree => "square-two-free",
        }
    }

    /// Degree of the cell the reduction is centred on.
    pub fn cell_degree(self) -> usize {
        match self {
            ReductionKind::EdgeCollapse => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ReductionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edge-collapse" => Ok(ReductionKind::EdgeCollapse),
            "square-one-free" => Ok(ReductionKind::SquareOneFree),
            "square-two-free" => Ok(ReductionKind::SquareTwoFree),
            other => Err(format!("unknown reduction kind `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Check,
    /// Apply when every condition holds. `allow_empty_y` lifts the refusal
    /// when `Y` is empty.
    Apply {
        allow_empty_y: bool,
    },
}

impl Mode {
    pub const APPLY: Mode = Mode::Apply {
        allow_empty_y: false,
    };
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub label: &'static str,
    pub description: &'static str,
    pub holds: bool,
    /// Cells violating the condition; empty when it holds.
    pub witnesses: Vec<CellRef>,
}

impl Condition {
    fn new(label: &'static str, description: &'static str, witnesses: Vec<CellRef>) -> Self {
        Condition {
            label,
            description,
            holds: witnesses.is_empty(),
            witnesses,
        }
    }
}

/// One boundary-operator slot `d_i^k` of a cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FaceSlot {
    pub cell: CellRef,
    pub i: usize,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionCertificate {
    pub kind: ReductionKind,
    pub cell: CellRef,
    pub a: Option<usize>,
    pub b: usize,
    pub conditions: Vec<Condition>,
    pub removed: BTreeSet<CellRef>,
    #[serde(serialize_with = "redirects_as_list")]
    pub redirected: BTreeMap<FaceSlot, String>,
    #[serde(rename = "Y")]
    pub y: Option<BTreeSet<CellRef>>,
    #[serde(rename = "R")]
    pub r: Option<BTreeSet<CellRef>>,
    pub fbg_guaranteed: bool,
}

fn redirects_as_list<S: Serializer>(
    map: &BTreeMap<FaceSlot, String>,
    ser: S,
) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        cell: &'a CellRef,
        i: usize,
        k: usize,
        to: &'a str,
    }
    ser.collect_seq(map.iter().map(|(slot, to)| Entry {
        cell: &slot.cell,
        i: slot.i,
        k: slot.k,
        to,
    }))
}

impl ReductionCertificate {
    pub fn conditions_hold(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }

    /// True iff the reduction may be applied without losing the
    /// fundamental bipartite graph.
    pub fn is_applicable(&self) -> bool {
        self.conditions_hold() && self.fbg_guaranteed
    }

    pub fn failed(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.holds)
    }

    pub fn condition(&self, label: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.label == label)
    }

    pub fn step(&self) -> Step {
        Step {
            kind: self.kind,
            cell: self.cell.id.clone(),
            a: self.a,
            b: self.b,
        }
    }
}

fn join(cells: impl IntoIterator<Item = impl fmt::Display>) -> String {
    let parts: Vec<String> = cells.into_iter().map(|c| c.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

impl fmt::Display for ReductionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "reduction: {} on {} (b={}", self.kind, self.cell, self.b)?;
        if let Some(a) = self.a {
            write!(f, ", a={a}")?;
        }
        writeln!(f, ")")?;
        writeln!(f, "conditions:")?;
        for c in &self.conditions {
            let mark = if c.holds { "ok  " } else { "FAIL" };
            write!(f, "  [{mark}] ({}) {}", c.label, c.description)?;
            if !c.holds {
                write!(f, "; witnesses {}", join(&c.witnesses))?;
            }
            writeln!(f)?;
        }
        writeln!(f, "removed: {}", join(&self.removed))?;
        if !self.redirected.is_empty() {
            writeln!(f, "redirected:")?;
            for (slot, to) in &self.redirected {
                writeln!(f, "  d{}_{} {} -> {}", slot.i, slot.k, slot.cell, to)?;
            }
        }
        if let Some(y) = &self.y {
            writeln!(f, "Y: {}", join(y))?;
        }
        if let Some(r) = &self.r {
            writeln!(f, "R: {}", join(r))?;
        }
        write!(f, "fbg_guaranteed: {}", self.fbg_guaranteed)
    }
}

/// One line of a reduction recipe: `kind cell [a] b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub kind: ReductionKind,
    pub cell: String,
    pub a: Option<usize>,
    pub b: usize,
}

impl Step {
    pub fn edge_collapse(cell: impl Into<String>, b: usize) -> Self {
        Step {
            kind: ReductionKind::EdgeCollapse,
            cell: cell.into(),
            a: None,
            b,
        }
    }

    pub fn square_one_free(cell: impl Into<String>, b: usize) -> Self {
        Step {
            kind: ReductionKind::SquareOneFree,
            cell: cell.into(),
            a: None,
            b,
        }
    }

    pub fn square_two_free(cell: impl Into<String>, a: usize, b: usize) -> Self {
        Step {
            kind: ReductionKind::SquareTwoFree,
            cell: cell.into(),
            a: Some(a),
            b,
        }
    }

    pub fn run(
        &self,
        p: &Complex,
        mode: Mode,
    ) -> Result<(Option<Complex>, ReductionCertificate), ReduceError> {
        match self.kind {
            ReductionKind::EdgeCollapse => edge_collapse(p, &self.cell, self.b, mode),
            ReductionKind::SquareOneFree => square_one_free(p, &self.cell, self.b, mode),
            ReductionKind::SquareTwoFree => {
                let a = self.a.ok_or(ReduceError::InvalidParameter {
                    name: "a",
                    value: 0,
                })?;
                square_two_free(p, &self.cell, a, self.b, mode)
            }
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind, self.cell)?;
        if let Some(a) = self.a {
            write!(f, " {a}")?;
        }
        write!(f, " {}", self.b)
    }
}

impl FromStr for Step {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let kind: ReductionKind = tokens.first().ok_or("empty step")?.parse()?;
        let num = |t: &str, name: &str| -> Result<usize, String> {
            t.parse::<usize>()
                .map_err(|_| format!("{name} must be an integer, got `{t}`"))
        };
        match (kind, tokens.as_slice()) {
            (ReductionKind::SquareTwoFree, [_, cell, a, b]) => Ok(Step {
                kind,
                cell: cell.to_string(),
                a: Some(num(a, "a")?),
                b: num(b, "b")?,
            }),
            (ReductionKind::SquareTwoFree, _) => {
                Err("expected `square-two-free <cell> <a> <b>`".to_string())
            }
            (_, [_, cell, b]) => Ok(Step {
                kind,
                cell: cell.to_string(),
                a: None,
                b: num(b, "b")?,
            }),
            _ => Err(format!("expected `{kind} <cell> <b>`")),
        }
    }
}

#[derive(Debug, Error)]
pub enum ReduceError {
    #[error("unknown cell {0}")]
    UnknownCell(CellRef),
    #[error("cell {id} has degree {found}, expected {expected}")]
    WrongDegree {
        id: String,
        expected: usize,
        found: usize,
    },
    #[error("reductions need dimension <= 2, complex has dimension {0}")]
    DimensionUnsupported(usize),
    #[error("parameter {name} out of range: {value}")]
    InvalidParameter { name: &'static str, value: usize },
    #[error("conditions failed:\n{0}")]
    ConditionsFailed(Box<ReductionCertificate>),
    #[error("Y is empty, so the fundamental bipartite graph is not guaranteed:\n{0}")]
    GuaranteeLost(Box<ReductionCertificate>),
    #[error("recipe step {index} (`{step}`) failed: {source}")]
    RecipeStepFailed {
        index: usize,
        step: Step,
        #[source]
        source: Box<ReduceError>,
    },
}

impl ReduceError {
    /// The certificate carried by this error, if any.
    pub fn certificate(&self) -> Option<&ReductionCertificate> {
        match self {
            ReduceError::ConditionsFailed(c) | ReduceError::GuaranteeLost(c) => Some(c),
            ReduceError::RecipeStepFailed { source, .. } => source.certificate(),
            _ => None,
        }
    }
}

impl From<ComplexError> for ReduceError {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::UnknownCell(c) => ReduceError::UnknownCell(c),
            ComplexError::WrongDegree {
                cell,
                expected,
                found,
            } => ReduceError::WrongDegree {
                id: cell.id,
                expected,
                found,
            },
            ComplexError::Invalid(_) => unreachable!("reductions start from a valid complex"),
        }
    }
}

pub type Reduced = (Option<Complex>, ReductionCertificate);

fn locate(p: &Complex, id: &str, degree: usize) -> Result<CellRef, ReduceError> {
    if let Some(dim) = p.dimension() {
        if dim > 2 {
            return Err(ReduceError::DimensionUnsupported(dim));
        }
    }
    if p.has(degree, id) {
        return Ok(CellRef::new(degree, id));
    }
    let found = (0..=p.dimension().unwrap_or(0)).find(|&d| p.has(d, id));
    match found {
        Some(found) => Err(ReduceError::WrongDegree {
            id: id.to_string(),
            expected: degree,
            found,
        }),
        None => Err(ReduceError::UnknownCell(CellRef::new(degree, id))),
    }
}

fn check_side(
    name: &'static str,
    value: usize,
    allowed: std::ops::RangeInclusive<usize>,
) -> Result<(), ReduceError> {
    if allowed.contains(&value) {
        Ok(())
    } else {
        Err(ReduceError::InvalidParameter { name, value })
    }
}

/// Squares having `edge` in their boundary.
fn squares_on(p: &Complex) -> HashMap<&str, Vec<&str>> {
    let mut map: HashMap<&str, Vec<&str>> = HashMap::new();
    for s in p.squares() {
        let faces = p.faces(2, s).expect("square exists");
        let mut seen = BTreeSet::new();
        for e in faces.iter().flatten() {
            if seen.insert(e.as_str()) {
                map.entry(e.as_str()).or_default().push(s);
            }
        }
    }
    map
}

fn face(p: &Complex, degree: usize, id: &str, i: usize, k: usize) -> String {
    p.face(degree, id, i, k)
        .expect("faces of a valid complex resolve")
        .to_string()
}

fn finish(
    cert: ReductionCertificate,
    mode: Mode,
    build: impl FnOnce() -> Complex,
) -> Result<Reduced, ReduceError> {
    match mode {
        Mode::Check => Ok((None, cert)),
        Mode::Apply { allow_empty_y } => {
            if !cert.conditions_hold() {
                Err(ReduceError::ConditionsFailed(Box::new(cert)))
            } else if !cert.fbg_guaranteed && !allow_empty_y {
                Err(ReduceError::GuaranteeLost(Box::new(cert)))
            } else {
                Ok((Some(build()), cert))
            }
        }
    }
}

/// Copies `p` without the cells in `removed`.
fn without(p: &Complex, removed: &BTreeSet<CellRef>) -> Vec<BTreeMap<String, Vec<[String; 2]>>> {
    p.levels()
        .iter()
        .enumerate()
        .map(|(d, level)| {
            level
                .iter()
                .filter(|(id, _)| !removed.contains(&CellRef::new(d, (*id).clone())))
                .map(|(id, f)| (id.clone(), f.clone()))
                .collect()
        })
        .collect()
}

fn regularity(p: &Complex, x: &CellRef) -> Result<Condition, ReduceError> {
    let regular = is_regular(p, x)?;
    Ok(Condition::new(
        "reg",
        "x is regular",
        if regular { vec![] } else { vec![x.clone()] },
    ))
}

/// Collapses the edge `x` onto its endpoint `d_1^b x`, deleting
/// `d_1^{1-b} x` and redirecting every edge of `Y` to start (for `b = 0`)
/// or end (for `b = 1`) at `d_1^b x`.
pub fn edge_collapse(p: &Complex, x: &str, b: usize, mode: Mode) -> Result<Reduced, ReduceError> {
    check_side("b", b, 0..=1)?;
    let xr = locate(p, x, 1)?;
    let gone = face(p, 1, x, 1, 1 - b);
    let kept = face(p, 1, x, 1, b);
    let on_square = squares_on(p);

    let reg = regularity(p, &xr)?;
    let cond_i: Vec<CellRef> = p
        .edges()
        .filter(|&y| y != x && p.endpoint(y, 1 - b) == Some(gone.as_str()))
        .map(CellRef::edge)
        .collect();
    let cond_ii: Vec<CellRef> = p
        .edges()
        .filter(|&y| {
            (p.endpoint(y, 0) == Some(gone.as_str()) || p.endpoint(y, 1) == Some(gone.as_str()))
                && on_square.contains_key(y)
        })
        .map(CellRef::edge)
        .collect();
    let y: BTreeSet<CellRef> = p
        .edges()
        .filter(|&y| p.endpoint(y, b) == Some(gone.as_str()))
        .map(CellRef::edge)
        .collect();

    let removed: BTreeSet<CellRef> = [xr.clone(), CellRef::vertex(gone.clone())].into();
    let redirected: BTreeMap<FaceSlot, String> = y
        .iter()
        .map(|c| {
            (
                FaceSlot {
                    cell: c.clone(),
                    i: 1,
                    k: b,
                },
                kept.clone(),
            )
        })
        .collect();
    let cert = ReductionCertificate {
        kind: ReductionKind::EdgeCollapse,
        cell: xr,
        a: None,
        b,
        conditions: vec![
            reg,
            Condition::new(
                "i",
                "no other edge shares the collapsed endpoint d_1^{1-b} x on the same side",
                cond_i,
            ),
            Condition::new(
                "ii",
                "no edge incident to d_1^{1-b} x lies in the boundary of a square",
                cond_ii,
            ),
        ],
        fbg_guaranteed: !y.is_empty(),
        removed,
        redirected,
        y: Some(y),
        r: None,
    };

    finish(cert.clone(), mode, || {
        let mut levels = without(p, &cert.removed);
        for (slot, to) in &cert.redirected {
            if let Some(faces) = levels[1].get_mut(&slot.cell.id) {
                faces[slot.i - 1][slot.k] = to.clone();
            }
        }
        Complex::from_levels(levels, p.layout().clone())
    })
}

/// Removes the square `x` together with its free faces `d_1^{1-b} x` and
/// `d_2^b x` and their common vertex.
pub fn square_one_free(p: &Complex, x: &str, b: usize, mode: Mode) -> Result<Reduced, ReduceError> {
    check_side("b", b, 0..=1)?;
    let xr = locate(p, x, 2)?;
    let e1 = face(p, 2, x, 1, 1 - b);
    let e2 = face(p, 2, x, 2, b);
    let corner = face(p, 1, &e2, 1, 1 - b);
    let on_square = squares_on(p);

    let reg = regularity(p, &xr)?;
    let cond_i = other_squares_on(&on_square, x, [&e1, &e2]);
    let cond_ii: Vec<CellRef> = p
        .edges()
        .filter(|&y| {
            y != e1
                && y != e2
                && (p.endpoint(y, 0) == Some(corner.as_str())
                    || p.endpoint(y, 1) == Some(corner.as_str()))
        })
        .map(CellRef::edge)
        .collect();

    let removed: BTreeSet<CellRef> = [
        xr.clone(),
        CellRef::edge(e1),
        CellRef::edge(e2),
        CellRef::vertex(corner),
    ]
    .into();
    let cert = ReductionCertificate {
        kind: ReductionKind::SquareOneFree,
        cell: xr,
        a: None,
        b,
        conditions: vec![
            reg,
            Condition::new(
                "i",
                "no other square has d_1^{1-b} x or d_2^b x in its boundary",
                cond_i,
            ),
            Condition::new(
                "ii",
                "only d_1^{1-b} x and d_2^b x have the vertex d_1^{1-b} d_2^b x in their boundary",
                cond_ii,
            ),
        ],
        removed,
        redirected: BTreeMap::new(),
        y: None,
        r: None,
        fbg_guaranteed: true,
    };

    finish(cert.clone(), mode, || {
        Complex::from_levels(without(p, &cert.removed), p.layout().clone())
    })
}

fn other_squares_on(
    on_square: &HashMap<&str, Vec<&str>>,
    x: &str,
    edges: [&str; 2],
) -> Vec<CellRef> {
    let hits: BTreeSet<&str> = edges
        .iter()
        .flat_map(|e| on_square.get(e).into_iter().flatten())
        .copied()
        .filter(|&s| s != x)
        .collect();
    hits.into_iter().map(CellRef::square).collect()
}

/// Removes the square `x` and its face `d_{3-a}^b x`, keeping every vertex.
/// The free faces are `d_a^{1-b} x` and `d_{3-a}^b x`.
pub fn square_two_free(
    p: &Complex,
    x: &str,
    a: usize,
    b: usize,
    mode: Mode,
) -> Result<Reduced, ReduceError> {
    check_side("a", a, 1..=2)?;
    check_side("b", b, 0..=1)?;
    let xr = locate(p, x, 2)?;
    let free = face(p, 2, x, a, 1 - b);
    let gone = face(p, 2, x, 3 - a, b);
    let corner = face(p, 1, &gone, 1, 1 - b);
    let anchor = face(p, 1, &free, 1, b);
    let on_square = squares_on(p);

    let reg = regularity(p, &xr)?;
    let cond_i = other_squares_on(&on_square, x, [&free, &gone]);
    let cond_ii: Vec<CellRef> = p
        .edges()
        .filter(|&y| y != free && p.endpoint(y, b) == Some(anchor.as_str()))
        .map(CellRef::edge)
        .collect();
    let y: BTreeSet<CellRef> = p
        .edges()
        .filter(|&y| y != gone && p.endpoint(y, 1 - b) == Some(corner.as_str()))
        .map(CellRef::edge)
        .collect();
    let cond_iii: Vec<CellRef> = y
        .iter()
        .filter(|c| on_square.contains_key(c.id.as_str()))
        .cloned()
        .collect();

    let removed: BTreeSet<CellRef> = [xr.clone(), CellRef::edge(gone)].into();
    let mut r: BTreeSet<CellRef> = p.cells().filter(|c| !removed.contains(c)).collect();
    r.remove(&CellRef::vertex(corner));
    r.remove(&CellRef::edge(free));
    for c in &y {
        r.remove(c);
    }

    let cert = ReductionCertificate {
        kind: ReductionKind::SquareTwoFree,
        cell: xr,
        a: Some(a),
        b,
        conditions: vec![
            reg,
            Condition::new(
                "i",
                "no other square has d_a^{1-b} x or d_{3-a}^b x in its boundary",
                cond_i,
            ),
            Condition::new(
                "ii",
                "no edge other than d_a^{1-b} x shares its endpoint d_1^b d_a^{1-b} x on the same side",
                cond_ii,
            ),
            Condition::new(
                "iii",
                "no edge of Y lies in the boundary of a square",
                cond_iii,
            ),
        ],
        removed,
        redirected: BTreeMap::new(),
        fbg_guaranteed: !y.is_empty(),
        y: Some(y),
        r: Some(r),
    };

    finish(cert.clone(), mode, || {
        Complex::from_levels(without(p, &cert.removed), p.layout().clone())
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Policy {
    /// Apply the steps in order; stop at the first one that cannot be applied.
    Recipe {
        steps: Vec<Step>,
        allow_empty_y: bool,
    },
    /// Apply the first applicable reduction in scan order until none is left.
    Greedy,
}

/// Candidate reductions for a cell, in the order the greedy policy tries them.
fn greedy_candidates(cell: &CellRef) -> Vec<Step> {
    let id = cell.id.clone();
    match cell.degree {
        2 => vec![
            Step::square_one_free(id.clone(), 1),
            Step::square_one_free(id.clone(), 0),
            Step::square_two_free(id.clone(), 2, 0),
            Step::square_two_free(id.clone(), 1, 1),
            Step::square_two_free(id.clone(), 1, 0),
            Step::square_two_free(id, 2, 1),
        ],
        1 => vec![
            Step::edge_collapse(id.clone(), 0),
            Step::edge_collapse(id, 1),
        ],
        _ => vec![],
    }
}

/// Runs a sequence of reductions and returns the final complex with the
/// ordered trail of certificates.
pub fn auto_reduce(
    p: &Complex,
    policy: &Policy,
) -> Result<(Complex, Vec<ReductionCertificate>), ReduceError> {
    if let Some(dim) = p.dimension() {
        if dim > 2 {
            return Err(ReduceError::DimensionUnsupported(dim));
        }
    }
    let mut current = p.clone();
    let mut trail = Vec::new();
    match policy {
        Policy::Recipe {
            steps,
            allow_empty_y,
        } => {
            let mode = Mode::Apply {
                allow_empty_y: *allow_empty_y,
            };
            for (index, step) in steps.iter().enumerate() {
                match step.run(&current, mode) {
                    Ok((Some(q), cert)) => {
                        current = q;
                        trail.push(cert);
                    }
                    Ok((None, _)) => unreachable!("apply mode yields a complex"),
                    Err(e) => {
                        return Err(ReduceError::RecipeStepFailed {
                            index,
                            step: step.clone(),
                            source: Box::new(e),
                        })
                    }
                }
            }
        }
        Policy::Greedy => 'scan: loop {
            for cell in current.canonical_order() {
                for step in greedy_candidates(&cell) {
                    if let Ok((Some(q), cert)) = step.run(&current, Mode::APPLY) {
                        current = q;
                        trail.push(cert);
                        continue 'scan;
                    }
                }
            }
            break;
        },
    }
    Ok((current, trail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::*;
    use crate::complex::{
        are_isomorphic, euler_characteristic, extremal, is_subcomplex, opposite, standard_cube,
        transpose, validate,
    };

    fn path2() -> Complex {
        Complex::builder()
            .vertices(["v0", "v1", "v2"])
            .edge("e1", "v0", "v1")
            .edge("e2", "v1", "v2")
            .build()
            .unwrap()
    }

    fn square_plus_tail() -> Complex {
        square_builder()
            .vertex("t")
            .edge("g", "t", "w10")
            .build()
            .unwrap()
    }

    fn edges(ids: &[&str]) -> BTreeSet<CellRef> {
        ids.iter().map(|&e| CellRef::edge(e)).collect()
    }

    #[test]
    fn collapse_path_forward() {
        let p = path2();
        let (q, cert) = edge_collapse(&p, "e1", 0, Mode::APPLY).unwrap();
        let q = q.unwrap();
        assert!(cert.conditions_hold());
        assert_eq!(cert.y, Some(edges(&["e2"])));
        assert_eq!(q.endpoint("e2", 0), Some("v0"));
        assert_eq!(q.endpoint("e2", 1), Some("v2"));
        assert_eq!(q.vertices().collect::<Vec<_>>(), ["v0", "v2"]);
        assert!(are_isomorphic(&q, &interval()).is_some());
        assert_eq!(extremal(&q), extremal(&p));
        assert_eq!(
            cert.redirected,
            BTreeMap::from([(
                FaceSlot {
                    cell: CellRef::edge("e2"),
                    i: 1,
                    k: 0
                },
                "v0".to_string()
            )])
        );
    }

    #[test]
    fn collapse_path_backward_is_dual() {
        let p = path2();
        let (q, cert) = edge_collapse(&p, "e2", 1, Mode::APPLY).unwrap();
        let q = q.unwrap();
        assert_eq!(cert.y, Some(edges(&["e1"])));
        assert_eq!(
            cert.removed,
            BTreeSet::from([CellRef::edge("e2"), CellRef::vertex("v1")])
        );
        assert_eq!(q.endpoint("e1", 1), Some("v2"));
        assert!(are_isomorphic(&q, &interval()).is_some());

        let (dual, _) = edge_collapse(&opposite(&p), "e2", 0, Mode::APPLY).unwrap();
        assert_eq!(opposite(&dual.unwrap()), q);
    }

    #[test]
    fn collapse_refused_on_double_edge() {
        for b in 0..2 {
            let err = edge_collapse(&double_edge(), "p", b, Mode::APPLY).unwrap_err();
            let ReduceError::ConditionsFailed(cert) = err else {
                panic!("expected ConditionsFailed");
            };
            let failed: Vec<_> = cert.failed().map(|c| c.label).collect();
            assert_eq!(failed, ["i"]);
            assert_eq!(cert.condition("i").unwrap().witnesses, [CellRef::edge("q")]);
        }
    }

    #[test]
    fn collapse_check_mode_and_errors() {
        let (q, cert) = edge_collapse(&double_edge(), "p", 0, Mode::Check).unwrap();
        assert!(q.is_none());
        assert!(!cert.conditions_hold());

        let (_, cert) = edge_collapse(&circle(), "e", 0, Mode::Check).unwrap();
        assert!(!cert.condition("reg").unwrap().holds);

        assert!(matches!(
            edge_collapse(&square(), "s", 0, Mode::Check),
            Err(ReduceError::WrongDegree {
                expected: 1,
                found: 2,
                ..
            })
        ));
        assert!(matches!(
            edge_collapse(&square(), "nope", 0, Mode::Check),
            Err(ReduceError::UnknownCell(_))
        ));
        assert!(matches!(
            edge_collapse(&square(), "eB", 2, Mode::Check),
            Err(ReduceError::InvalidParameter {
                name: "b",
                value: 2
            })
        ));
        assert!(matches!(
            edge_collapse(&standard_cube(3), "0*0", 0, Mode::Check),
            Err(ReduceError::DimensionUnsupported(3))
        ));
        // interval: conditions hold but Y is empty
        assert!(matches!(
            edge_collapse(&interval(), "e", 0, Mode::APPLY),
            Err(ReduceError::GuaranteeLost(_))
        ));
        let (q, cert) = edge_collapse(
            &interval(),
            "e",
            0,
            Mode::Apply {
                allow_empty_y: true,
            },
        )
        .unwrap();
        assert!(!cert.fbg_guaranteed);
        assert_eq!(q.unwrap().total_cells(), 1);
    }

    #[test]
    fn collapse_condition_ii_sees_squares() {
        let (_, cert) = edge_collapse(&square(), "eB", 0, Mode::Check).unwrap();
        let ii = cert.condition("ii").unwrap();
        assert!(!ii.holds);
        assert_eq!(ii.witnesses, vec![CellRef::edge("eB"), CellRef::edge("eR")]);
    }

    #[test]
    fn one_free_on_square() {
        let (q, cert) = square_one_free(&square(), "s", 0, Mode::APPLY).unwrap();
        let q = q.unwrap();
        assert_eq!(
            cert.removed,
            BTreeSet::from([
                CellRef::vertex("w10"),
                CellRef::edge("eB"),
                CellRef::edge("eR"),
                CellRef::square("s")
            ])
        );
        assert_eq!(q.vertices().collect::<Vec<_>>(), ["w00", "w01", "w11"]);
        assert_eq!(q.edges().collect::<Vec<_>>(), ["eL", "eT"]);
        assert!(cert.fbg_guaranteed);
        assert!(cert.y.is_none());
        assert!(is_subcomplex(&square(), &q.to_table()));
        assert_eq!(extremal(&q), extremal(&square()));

        let (q, cert) = square_one_free(&square(), "s", 1, Mode::APPLY).unwrap();
        assert!(cert.removed.contains(&CellRef::vertex("w01")));
        assert_eq!(q.unwrap().edges().collect::<Vec<_>>(), ["eB", "eR"]);
    }

    #[test]
    fn one_free_blocked_by_tail() {
        let err = square_one_free(&square_plus_tail(), "s", 0, Mode::APPLY).unwrap_err();
        let cert = err.certificate().unwrap();
        let failed: Vec<_> = cert.failed().map(|c| c.label).collect();
        assert_eq!(failed, ["ii"]);
        assert_eq!(
            cert.condition("ii").unwrap().witnesses,
            [CellRef::edge("g")]
        );
    }

    #[test]
    fn two_free_with_tail() {
        let p = square_plus_tail();
        let (q, cert) = square_two_free(&p, "s", 1, 0, Mode::APPLY).unwrap();
        let q = q.unwrap();
        assert_eq!(
            cert.removed,
            BTreeSet::from([CellRef::edge("eB"), CellRef::square("s")])
        );
        assert_eq!(cert.y, Some(edges(&["g"])));
        let r = cert.r.as_ref().unwrap();
        for gone in [
            CellRef::vertex("w10"),
            CellRef::edge("eR"),
            CellRef::edge("g"),
        ] {
            assert!(!r.contains(&gone));
        }
        assert!(q.is_face_closed(r));
        assert_eq!((q.num_cells(0), q.num_cells(1), q.num_cells(2)), (5, 4, 0));
        assert!(is_subcomplex(&p, &q.to_table()));
        assert_eq!(extremal(&q), extremal(&p));
        assert!(extremal(&q)
            .iter()
            .all(|v| r.contains(&CellRef::vertex(v.clone()))));
    }

    #[test]
    fn two_free_guarantee_lost_on_bare_square() {
        let err = square_two_free(&square(), "s", 1, 0, Mode::APPLY).unwrap_err();
        assert!(matches!(err, ReduceError::GuaranteeLost(_)));
        assert!(err.certificate().unwrap().conditions_hold());
        let (q, _) = square_two_free(
            &square(),
            "s",
            1,
            0,
            Mode::Apply {
                allow_empty_y: true,
            },
        )
        .unwrap();
        let expected = square()
            .to_table()
            .without(&[CellRef::edge("eB"), CellRef::square("s")]);
        assert_eq!(q.unwrap().to_table(), expected);
    }

    #[test]
    fn two_free_blocked_by_neighbour() {
        let p = Complex::builder()
            .vertices(["a0", "a1", "a2", "b0", "b1", "b2"])
            .edge("h0", "a0", "a1")
            .edge("h1", "a1", "a2")
            .edge("t0", "b0", "b1")
            .edge("t1", "b1", "b2")
            .edge("v0", "a0", "b0")
            .edge("v1", "a1", "b1")
            .edge("v2", "a2", "b2")
            .square("L", ["v0", "v1", "h0", "t0"])
            .square("R", ["v1", "v2", "h1", "t1"])
            .build()
            .unwrap();
        let err = square_two_free(&p, "L", 1, 0, Mode::APPLY).unwrap_err();
        let cert = err.certificate().unwrap();
        assert!(!cert.condition("i").unwrap().holds);
        assert_eq!(
            cert.condition("i").unwrap().witnesses,
            [CellRef::square("R")]
        );
    }

    #[test]
    fn reductions_conserve_structure() {
        let (q, _) = square_one_free(&square(), "s", 0, Mode::APPLY).unwrap();
        let q = q.unwrap();
        assert!(validate(&q.to_table()).is_valid());
        assert_eq!(euler_characteristic(&q), euler_characteristic(&square()));
    }

    #[test]
    fn transpose_duality_two_free() {
        let p = transpose(&square_plus_tail());
        let (direct, _) = square_two_free(&p, "s", 2, 0, Mode::APPLY).unwrap();
        let (via, _) = square_two_free(&transpose(&p), "s", 1, 0, Mode::APPLY).unwrap();
        assert_eq!(direct.unwrap(), transpose(&via.unwrap()));
    }

    #[test]
    fn certificates_replay() {
        let p = square_plus_tail();
        let a = square_two_free(&p, "s", 1, 0, Mode::Check).unwrap().1;
        let b = square_two_free(&p, "s", 1, 0, Mode::Check).unwrap().1;
        assert_eq!(a, b);
    }

    #[test]
    fn greedy_square_to_interval() {
        let (q, trail) = auto_reduce(&square(), &Policy::Greedy).unwrap();
        assert!(are_isomorphic(&q, &interval()).is_some());
        let kinds: Vec<_> = trail.iter().map(|c| c.kind).collect();
        assert_eq!(
            kinds,
            [ReductionKind::SquareOneFree, ReductionKind::EdgeCollapse]
        );
    }

    #[test]
    fn greedy_leaves_interval_alone() {
        let (q, trail) = auto_reduce(&interval(), &Policy::Greedy).unwrap();
        assert_eq!(q, interval());
        assert!(trail.is_empty());
    }

    #[test]
    fn recipe_reports_failing_step() {
        let steps = vec![Step::square_one_free("s", 0), Step::square_one_free("s", 0)];
        let err = auto_reduce(
            &square(),
            &Policy::Recipe {
                steps,
                allow_empty_y: false,
            },
        )
        .unwrap_err();
        match err {
            ReduceError::RecipeStepFailed { index, source, .. } => {
                assert_eq!(index, 1);
                assert!(matches!(*source, ReduceError::UnknownCell(_)));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn step_text_round_trip() {
        for s in [
            "square-two-free s(1,2) 2 0",
            "edge-collapse h(0,0) 1",
            "square-one-free x 0",
        ] {
            let step: Step = s.parse().unwrap();
            assert_eq!(step.to_string(), s);
        }
        assert!("square-two-free s 0".parse::<Step>().is_err());
        assert!("edge-collapse e".parse::<Step>().is_err());
        assert!("flip e 0".parse::<Step>().is_err());
    }
}
