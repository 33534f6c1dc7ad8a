//! Finite precubical sets.
//!
//! A [`Complex`] is a graded set of cells with boundary operators `d_i^k`
//! (`1 <= i <= degree`, `k ∈ {0, 1}`) satisfying the precubical identities
//! `d_i^k d_j^l = d_{j-1}^l d_i^k` for `i < j`. Cells are named by
//! `(degree, id)` pairs. A complex is immutable once built; every operation
//! here returns a fresh value.
//!
//! Raw, possibly malformed, tables are represented by [`CellTable`] and
//! checked with [`validate`], which reports every problem instead of
//! stopping at the first.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// One cell of a complex: its degree and its id within that degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CellRef {
    pub degree: usize,
    pub id: String,
}

impl CellRef {
    pub fn new(degree: usize, id: impl Into<String>) -> Self {
        CellRef {
            degree,
            id: id.into(),
        }
    }

    pub fn vertex(id: impl Into<String>) -> Self {
        Self::new(0, id)
    }

    pub fn edge(id: impl Into<String>) -> Self {
        Self::new(1, id)
    }

    pub fn square(id: impl Into<String>) -> Self {
        Self::new(2, id)
    }
}

impl fmt::Display for CellRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.degree, self.id)
    }
}

/// Face table of a single cell: entry `i - 1` holds `[d_i^0, d_i^1]`.
pub type Faces = Vec<[String; 2]>;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("unknown cell {0}")]
    UnknownCell(CellRef),
    #[error("cell {cell} has degree {found}, expected {expected}")]
    WrongDegree {
        cell: CellRef,
        expected: usize,
        found: usize,
    },
    #[error("invalid complex:\n{0}")]
    Invalid(ValidationReport),
}

/// One record of a raw cell table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellRecord {
    pub dim: usize,
    pub id: String,
    pub faces: Faces,
}

/// Unchecked cell tables, as read from a file or assembled by hand.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellTable {
    pub records: Vec<CellRecord>,
    pub layout: BTreeMap<CellRef, (i64, i64)>,
}

impl CellTable {
    pub fn push(&mut self, dim: usize, id: impl Into<String>, faces: Faces) {
        self.records.push(CellRecord {
            dim,
            id: id.into(),
            faces,
        });
    }

    /// Mutable access to the face `d_i^k` of the first record named `(dim, id)`.
    pub fn face_mut(&mut self, dim: usize, id: &str, i: usize, k: usize) -> Option<&mut String> {
        self.records
            .iter_mut()
            .find(|r| r.dim == dim && r.id == id)
            .and_then(|r| r.faces.get_mut(i.checked_sub(1)?))
            .map(|pair| &mut pair[k])
    }

    /// Drops every record named by `cells`.
    pub fn without(mut self, cells: &[CellRef]) -> Self {
        self.records
            .retain(|r| !cells.iter().any(|c| c.degree == r.dim && c.id == r.id));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    EmptyId {
        dim: usize,
    },
    /// The id contains whitespace, `=` or `#`, which the document format cannot carry.
    IllegalId {
        cell: CellRef,
    },
    DuplicateId {
        cell: CellRef,
    },
    FaceCount {
        cell: CellRef,
        expected: usize,
        found: usize,
    },
    /// `d_i^k cell` names no cell at all.
    DanglingFace {
        cell: CellRef,
        i: usize,
        k: usize,
        target: String,
    },
    /// `d_i^k cell` names a cell that exists, but not in degree `cell.degree - 1`.
    DegreeMismatch {
        cell: CellRef,
        i: usize,
        k: usize,
        target: String,
        found: Vec<usize>,
    },
    /// `d_i^k d_j^l cell != d_{j-1}^l d_i^k cell` for `i < j`.
    Identity {
        cell: CellRef,
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        lhs: String,
        rhs: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyId { dim } => write!(f, "empty id in degree {dim}"),
            Violation::IllegalId { cell } => write!(f, "{cell}: id contains whitespace, '=' or '#'"),
            Violation::DuplicateId { cell } => write!(f, "{cell}: duplicate id"),
            Violation::FaceCount {
                cell,
                expected,
                found,
            } => write!(f, "{cell}: expected {expected} face pairs, found {found}"),
            Violation::DanglingFace { cell, i, k, target } => {
                write!(f, "{cell}: d{i}_{k} = {target} does not exist")
            }
            Violation::DegreeMismatch {
                cell,
                i,
                k,
                target,
                found,
            } => write!(
                f,
                "{cell}: d{i}_{k} = {target} exists only in degree(s) {found:?}, expected {}",
                cell.degree - 1
            ),
            Violation::Identity {
                cell,
                i,
                j,
                k,
                l,
                lhs,
                rhs,
            } => write!(
                f,
                "{cell}: d{i}_{k} d{j}_{l} = {lhs} but d{}_{l} d{i}_{k} = {rhs} (i={i}, j={j}, k={k}, l={l})",
                j - 1
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

pub(crate) fn id_is_legal(id: &str) -> bool {
    !id.chars()
        .any(|c| c.is_whitespace() || c == '=' || c == '#')
}

/// Checks a raw table against the definition of a precubical set.
///
/// Never fails: malformed input yields a nonempty report listing every
/// duplicate, dangling reference, degree mismatch and broken identity.
pub fn validate(table: &CellTable) -> ValidationReport {
    let mut violations = Vec::new();

    let mut degrees_of: HashMap<&str, BTreeSet<usize>> = HashMap::new();
    let mut seen: BTreeSet<(usize, &str)> = BTreeSet::new();
    let mut first: HashMap<(usize, &str), &CellRecord> = HashMap::new();
    for rec in &table.records {
        let cell = CellRef::new(rec.dim, rec.id.clone());
        if rec.id.is_empty() {
            violations.push(Violation::EmptyId { dim: rec.dim });
        } else if !id_is_legal(&rec.id) {
            violations.push(Violation::IllegalId { cell: cell.clone() });
        }
        if !seen.insert((rec.dim, rec.id.as_str())) {
            violations.push(Violation::DuplicateId { cell });
            continue;
        }
        degrees_of
            .entry(rec.id.as_str())
            .or_default()
            .insert(rec.dim);
        first.insert((rec.dim, rec.id.as_str()), rec);
    }

    // Face references.
    let mut resolvable: HashMap<(usize, &str), bool> = HashMap::new();
    for rec in &table.records {
        if first
            .get(&(rec.dim, rec.id.as_str()))
            .map(|r| std::ptr::eq(*r, rec))
            != Some(true)
        {
            continue;
        }
        let cell = CellRef::new(rec.dim, rec.id.clone());
        let mut ok = true;
        if rec.faces.len() != rec.dim {
            violations.push(Violation::FaceCount {
                cell: cell.clone(),
                expected: rec.dim,
                found: rec.faces.len(),
            });
            ok = false;
        }
        if rec.dim > 0 {
            for (idx, pair) in rec.faces.iter().enumerate() {
                for (k, target) in pair.iter().enumerate() {
                    if seen.contains(&(rec.dim - 1, target.as_str())) {
                        continue;
                    }
                    ok = false;
                    match degrees_of.get(target.as_str()) {
                        Some(found) => violations.push(Violation::DegreeMismatch {
                            cell: cell.clone(),
                            i: idx + 1,
                            k,
                            target: target.clone(),
                            found: found.iter().copied().collect(),
                        }),
                        None => violations.push(Violation::DanglingFace {
                            cell: cell.clone(),
                            i: idx + 1,
                            k,
                            target: target.clone(),
                        }),
                    }
                }
            }
        }
        resolvable.insert((rec.dim, rec.id.as_str()), ok);
    }

    // Precubical identities, wherever both sides resolve.
    let face = |dim: usize, id: &str, i: usize, k: usize| -> Option<&str> {
        if !resolvable.get(&(dim, id)).copied().unwrap_or(false) {
            return None;
        }
        first
            .get(&(dim, id))
            .and_then(|r| r.faces.get(i - 1))
            .map(|p| p[k].as_str())
    };
    for rec in &table.records {
        if rec.dim < 2
            || !resolvable
                .get(&(rec.dim, rec.id.as_str()))
                .copied()
                .unwrap_or(false)
        {
            continue;
        }
        if first
            .get(&(rec.dim, rec.id.as_str()))
            .map(|r| std::ptr::eq(*r, rec))
            != Some(true)
        {
            continue;
        }
        let n = rec.dim;
        for j in 2..=n {
            for i in 1..j {
                for k in 0..2 {
                    for l in 0..2 {
                        let lhs = face(n, &rec.id, j, l).and_then(|f| face(n - 1, f, i, k));
                        let rhs = face(n, &rec.id, i, k).and_then(|f| face(n - 1, f, j - 1, l));
                        if let (Some(lhs), Some(rhs)) = (lhs, rhs) {
                            if lhs != rhs {
                                violations.push(Violation::Identity {
                                    cell: CellRef::new(n, rec.id.clone()),
                                    i,
                                    j,
                                    k,
                                    l,
                                    lhs: lhs.to_string(),
                                    rhs: rhs.to_string(),
                                });
                            }
                        }
                    }
                }
            }
        }
    }

    ValidationReport { violations }
}

/// A validated finite precubical set.
///
/// `layout` holds optional integer positions used only for drawing; no
/// algorithm reads it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Complex {
    levels: Vec<BTreeMap<String, Faces>>,
    layout: BTreeMap<CellRef, (i64, i64)>,
}

impl Complex {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn builder() -> ComplexBuilder {
        ComplexBuilder::default()
    }

    /// Validates `table` and builds a complex from it.
    pub fn from_table(table: CellTable) -> Result<Self, ComplexError> {
        let report = validate(&table);
        if !report.is_valid() {
            return Err(ComplexError::Invalid(report));
        }
        let mut levels: Vec<BTreeMap<String, Faces>> = Vec::new();
        for rec in table.records {
            if levels.len() <= rec.dim {
                levels.resize_with(rec.dim + 1, BTreeMap::new);
            }
            levels[rec.dim].insert(rec.id, rec.faces);
        }
        let mut out = Complex {
            levels,
            layout: BTreeMap::new(),
        };
        out.trim();
        out.layout = table
            .layout
            .into_iter()
            .filter(|(c, _)| out.contains(c))
            .collect();
        Ok(out)
    }

    /// Builds from levels already known to be valid; used by operations that
    /// preserve validity by construction.
    pub(crate) fn from_levels(
        levels: Vec<BTreeMap<String, Faces>>,
        layout: BTreeMap<CellRef, (i64, i64)>,
    ) -> Self {
        let mut out = Complex { levels, layout };
        out.trim();
        let keep: BTreeMap<_, _> = std::mem::take(&mut out.layout)
            .into_iter()
            .filter(|(c, _)| out.contains(c))
            .collect();
        out.layout = keep;
        out
    }

    fn trim(&mut self) {
        while self.levels.last().is_some_and(|l| l.is_empty()) {
            self.levels.pop();
        }
    }

    pub fn to_table(&self) -> CellTable {
        let mut table = CellTable {
            records: Vec::new(),
            layout: self.layout.clone(),
        };
        for (dim, level) in self.levels.iter().enumerate() {
            for (id, faces) in level {
                table.push(dim, id.clone(), faces.clone());
            }
        }
        table
    }

    /// Highest degree with a cell; `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.levels.len().checked_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn num_cells(&self, degree: usize) -> usize {
        self.levels.get(degree).map_or(0, BTreeMap::len)
    }

    pub fn total_cells(&self) -> usize {
        self.levels.iter().map(BTreeMap::len).sum()
    }

    /// Ids of the cells of `degree`, ascending.
    pub fn ids(&self, degree: usize) -> impl Iterator<Item = &str> + '_ {
        self.levels
            .get(degree)
            .into_iter()
            .flat_map(|l| l.keys().map(String::as_str))
    }

    pub fn vertices(&self) -> impl Iterator<Item = &str> + '_ {
        self.ids(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = &str> + '_ {
        self.ids(1)
    }

    pub fn squares(&self) -> impl Iterator<Item = &str> + '_ {
        self.ids(2)
    }

    /// Every cell, ordered by `(degree, id)` ascending.
    pub fn cells(&self) -> impl Iterator<Item = CellRef> + '_ {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(d, l)| l.keys().map(move |id| CellRef::new(d, id.clone())))
    }

    /// Every cell, ordered by degree descending, then id ascending.
    pub fn canonical_order(&self) -> Vec<CellRef> {
        let mut out = Vec::with_capacity(self.total_cells());
        for (d, l) in self.levels.iter().enumerate().rev() {
            out.extend(l.keys().map(|id| CellRef::new(d, id.clone())));
        }
        out
    }

    pub fn contains(&self, cell: &CellRef) -> bool {
        self.has(cell.degree, &cell.id)
    }

    pub fn has(&self, degree: usize, id: &str) -> bool {
        self.levels.get(degree).is_some_and(|l| l.contains_key(id))
    }

    pub fn faces(&self, degree: usize, id: &str) -> Option<&Faces> {
        self.levels.get(degree)?.get(id)
    }

    /// `d_i^k` of the cell `(degree, id)`.
    pub fn face(&self, degree: usize, id: &str, i: usize, k: usize) -> Option<&str> {
        self.faces(degree, id)?
            .get(i.checked_sub(1)?)
            .map(|p| p[k].as_str())
    }

    /// `d_1^k` of an edge: its source for `k = 0`, its target for `k = 1`.
    pub fn endpoint(&self, edge: &str, k: usize) -> Option<&str> {
        self.face(1, edge, 1, k)
    }

    pub fn layout(&self) -> &BTreeMap<CellRef, (i64, i64)> {
        &self.layout
    }

    pub fn with_layout(mut self, layout: BTreeMap<CellRef, (i64, i64)>) -> Self {
        self.layout = layout
            .into_iter()
            .filter(|(c, _)| self.contains(c))
            .collect();
        self
    }

    /// Equality of cells and face tables, ignoring layout.
    pub fn same_cells(&self, other: &Complex) -> bool {
        self.levels == other.levels
    }

    pub(crate) fn levels(&self) -> &[BTreeMap<String, Faces>] {
        &self.levels
    }

    pub(crate) fn require(&self, cell: &CellRef) -> Result<&Faces, ComplexError> {
        self.faces(cell.degree, &cell.id)
            .ok_or_else(|| ComplexError::UnknownCell(cell.clone()))
    }

    /// The sub-table on `keep`, with faces copied from `self`.
    pub fn restrict(&self, keep: &BTreeSet<CellRef>) -> CellTable {
        let mut table = CellTable::default();
        for c in keep {
            if let Some(f) = self.faces(c.degree, &c.id) {
                table.push(c.degree, c.id.clone(), f.clone());
            }
        }
        table.layout = self
            .layout
            .iter()
            .filter(|(c, _)| keep.contains(*c))
            .map(|(c, p)| (c.clone(), *p))
            .collect();
        table
    }

    /// True iff every face of every cell in `set` is again in `set`.
    pub fn is_face_closed(&self, set: &BTreeSet<CellRef>) -> bool {
        set.iter().all(|c| match self.faces(c.degree, &c.id) {
            Some(faces) => faces
                .iter()
                .flatten()
                .all(|f| set.contains(&CellRef::new(c.degree - 1, f.clone()))),
            None => false,
        })
    }
}

/// Incremental construction of a [`Complex`]; `build` validates.
#[derive(Clone, Debug, Default)]
pub struct ComplexBuilder {
    table: CellTable,
}

impl ComplexBuilder {
    pub fn vertex(mut self, id: impl Into<String>) -> Self {
        self.table.push(0, id, Vec::new());
        self
    }

    pub fn vertices<I, S>(mut self, ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        for id in ids {
            self.table.push(0, id, Vec::new());
        }
        self
    }

    /// Adds an edge `source -> target`.
    pub fn edge(mut self, id: impl Into<String>, source: &str, target: &str) -> Self {
        self.table
            .push(1, id, vec![[source.to_string(), target.to_string()]]);
        self
    }

    /// Adds a square with faces `[d_1^0, d_1^1, d_2^0, d_2^1]`, i.e.
    /// left, right, bottom, top.
    pub fn square(mut self, id: impl Into<String>, faces: [&str; 4]) -> Self {
        let [l, r, b, t] = faces.map(str::to_string);
        self.table.push(2, id, vec![[l, r], [b, t]]);
        self
    }

    pub fn cell(mut self, dim: usize, id: impl Into<String>, faces: Faces) -> Self {
        self.table.push(dim, id, faces);
        self
    }

    pub fn position(mut self, cell: CellRef, at: (i64, i64)) -> Self {
        self.table.layout.insert(cell, at);
        self
    }

    pub fn table(self) -> CellTable {
        self.table
    }

    pub fn build(self) -> Result<Complex, ComplexError> {
        Complex::from_table(self.table)
    }
}

/// Standard `n`-cube: cells are words over `{0, 1, *}` of length `n`, the
/// degree being the number of stars; `d_i^k` replaces the `i`-th star by `k`.
///
/// For `n = 0` the single vertex is the empty word.
pub fn standard_cube(n: usize) -> Complex {
    let mut levels: Vec<BTreeMap<String, Faces>> = vec![BTreeMap::new(); n + 1];
    let total = 3usize.pow(n as u32);
    for mut code in 0..total {
        let mut word = Vec::with_capacity(n);
        for _ in 0..n {
            word.push(b"01*"[code % 3]);
            code /= 3;
        }
        let stars: Vec<usize> = (0..n).filter(|&p| word[p] == b'*').collect();
        let faces = stars
            .iter()
            .map(|&p| {
                (*b"01").map(|digit| {
                    let mut w = word.clone();
                    w[p] = digit;
                    String::from_utf8(w).expect("ascii")
                })
            })
            .collect();
        levels[stars.len()].insert(String::from_utf8(word).expect("ascii"), faces);
    }
    Complex::from_levels(levels, BTreeMap::new())
}

/// The morphism from the standard cube of dimension `|x|` sending the top
/// cell to `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeMorphismImage {
    pub source_dimension: usize,
    /// Standard-cube word to image cell.
    pub assignment: BTreeMap<String, CellRef>,
}

impl CubeMorphismImage {
    /// True iff distinct cube cells have distinct images.
    pub fn is_injective(&self) -> bool {
        let image: BTreeSet<&CellRef> = self.assignment.values().collect();
        image.len() == self.assignment.len()
    }

    pub fn image(&self) -> BTreeSet<CellRef> {
        self.assignment.values().cloned().collect()
    }
}

pub fn cube_morphism(p: &Complex, x: &CellRef) -> Result<CubeMorphismImage, ComplexError> {
    p.require(x)?;
    let n = x.degree;
    let cube = standard_cube(n);
    let mut assignment: BTreeMap<String, CellRef> = BTreeMap::new();
    assignment.insert("*".repeat(n), x.clone());
    // Walk degrees downwards; a word's parent restores its leftmost fixed
    // coordinate to a star.
    for degree in (0..n).rev() {
        for word in cube.ids(degree) {
            let bytes = word.as_bytes();
            let pos = bytes
                .iter()
                .position(|&c| c != b'*')
                .expect("word has a fixed coordinate");
            let k = (bytes[pos] - b'0') as usize;
            let mut parent = bytes.to_vec();
            parent[pos] = b'*';
            let i = 1 + bytes[..pos].iter().filter(|&&c| c == b'*').count();
            let parent = String::from_utf8(parent).expect("ascii");
            let up = &assignment[&parent];
            let id = p
                .face(up.degree, &up.id, i, k)
                .expect("faces of a valid complex resolve")
                .to_string();
            assignment.insert(word.to_string(), CellRef::new(degree, id));
        }
    }
    Ok(CubeMorphismImage {
        source_dimension: n,
        assignment,
    })
}

pub fn is_regular(p: &Complex, x: &CellRef) -> Result<bool, ComplexError> {
    Ok(cube_morphism(p, x)?.is_injective())
}

/// Reverses direction: `d_i^k` becomes `d_i^{1-k}`.
pub fn opposite(p: &Complex) -> Complex {
    let levels = p
        .levels
        .iter()
        .map(|l| {
            l.iter()
                .map(|(id, faces)| {
                    let swapped = faces
                        .iter()
                        .map(|[lo, hi]| [hi.clone(), lo.clone()])
                        .collect();
                    (id.clone(), swapped)
                })
                .collect()
        })
        .collect();
    Complex::from_levels(levels, p.layout.clone())
}

/// Reverses coordinate order: for a degree-`r` cell, `d_i^k` becomes `d_{r+1-i}^k`.
pub fn transpose(p: &Complex) -> Complex {
    let levels = p
        .levels
        .iter()
        .map(|l| {
            l.iter()
                .map(|(id, faces)| (id.clone(), faces.iter().rev().cloned().collect()))
                .collect()
        })
        .collect();
    Complex::from_levels(levels, p.layout.clone())
}

fn vertices_not_hit(p: &Complex, k: usize) -> BTreeSet<String> {
    let hit: BTreeSet<&str> = p.edges().filter_map(|e| p.endpoint(e, k)).collect();
    p.vertices()
        .filter(|v| !hit.contains(v))
        .map(str::to_string)
        .collect()
}

/// Vertices that are the target of no edge.
pub fn minimal_vertices(p: &Complex) -> BTreeSet<String> {
    vertices_not_hit(p, 1)
}

/// Vertices that are the source of no edge.
pub fn maximal_vertices(p: &Complex) -> BTreeSet<String> {
    vertices_not_hit(p, 0)
}

pub fn extremal(p: &Complex) -> BTreeSet<String> {
    let mut out = minimal_vertices(p);
    out.extend(maximal_vertices(p));
    out
}

/// True iff `q` is face-closed and every cell of `q` is a cell of `p` with
/// the same faces.
pub fn is_subcomplex(p: &Complex, q: &CellTable) -> bool {
    let mut cells = BTreeSet::new();
    for rec in &q.records {
        match p.faces(rec.dim, &rec.id) {
            Some(f) if *f == rec.faces => {}
            _ => return false,
        }
        if !cells.insert(CellRef::new(rec.dim, rec.id.clone())) {
            return false;
        }
    }
    p.is_face_closed(&cells)
}

pub fn euler_characteristic(p: &Complex) -> i64 {
    p.levels
        .iter()
        .enumerate()
        .map(|(d, l)| {
            if d % 2 == 0 {
                l.len() as i64
            } else {
                -(l.len() as i64)
            }
        })
        .sum()
}

/// A degree-preserving bijection commuting with all boundary operators.
pub type Isomorphism = BTreeMap<CellRef, CellRef>;

/// Searches for an isomorphism `p -> q` by backtracking over cells of `p`
/// in canonical order (degree descending, id ascending); faces of an
/// assigned cell are forced, which prunes most of the search.
pub fn are_isomorphic(p: &Complex, q: &Complex) -> Option<Isomorphism> {
    if p.levels.len() != q.levels.len()
        || p.levels
            .iter()
            .zip(&q.levels)
            .any(|(a, b)| a.len() != b.len())
    {
        return None;
    }
    let order = p.canonical_order();
    let mut search = IsoSearch {
        p,
        q,
        forward: HashMap::new(),
        backward: HashMap::new(),
    };
    if search.extend(&order, 0) {
        Some(search.forward.into_iter().collect())
    } else {
        None
    }
}

struct IsoSearch<'a> {
    p: &'a Complex,
    q: &'a Complex,
    forward: HashMap<CellRef, CellRef>,
    backward: HashMap<CellRef, CellRef>,
}

impl IsoSearch<'_> {
    fn extend(&mut self, order: &[CellRef], at: usize) -> bool {
        let Some(cell) = order.get(at) else {
            return true;
        };
        if self.forward.contains_key(cell) {
            return self.extend(order, at + 1);
        }
        let candidates: Vec<String> = self
            .q
            .ids(cell.degree)
            .filter(|id| !self.backward.contains_key(&CellRef::new(cell.degree, *id)))
            .map(str::to_string)
            .collect();
        for cand in candidates {
            let target = CellRef::new(cell.degree, cand);
            let mut trail = Vec::new();
            if self.assign(cell.clone(), target, &mut trail) && self.extend(order, at + 1) {
                return true;
            }
            for c in trail.into_iter().rev() {
                if let Some(t) = self.forward.remove(&c) {
                    self.backward.remove(&t);
                }
            }
        }
        false
    }

    /// Assigns `a -> b` and forces the faces; records new assignments in
    /// `trail` so the caller can undo them.
    fn assign(&mut self, a: CellRef, b: CellRef, trail: &mut Vec<CellRef>) -> bool {
        match (self.forward.get(&a), self.backward.get(&b)) {
            (Some(x), _) => return *x == b,
            (None, Some(_)) => return false,
            (None, None) => {}
        }
        self.forward.insert(a.clone(), b.clone());
        self.backward.insert(b.clone(), a.clone());
        trail.push(a.clone());
        if a.degree == 0 {
            return true;
        }
        let fa = self.p.faces(a.degree, &a.id).expect("cell of p").clone();
        let fb = self.q.faces(b.degree, &b.id).expect("cell of q").clone();
        for (pa, pb) in fa.iter().zip(&fb) {
            for k in 0..2 {
                let sa = CellRef::new(a.degree - 1, pa[k].clone());
                let sb = CellRef::new(b.degree - 1, pb[k].clone());
                if !self.assign(sa, sb, trail) {
                    return false;
                }
            }
        }
        true
    }
}
