//! Fundamental bipartite graphs by brute force.
//!
//! Directed paths are sequences of composable edges. Two paths are
//! elementarily related when one is obtained from the other by replacing a
//! consecutive pair `[d_2^0 s, d_1^1 s]` by `[d_1^0 s, d_2^1 s]` for some
//! square `s`; dihomotopy classes are the classes of the generated
//! equivalence. All paths between two vertices are enumerated, so the
//! 1-skeleton must be acyclic.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use petgraph::graph::DiGraph;
use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{maximal_vertices, minimal_vertices, CellRef, Complex};

pub const DEFAULT_MAX_PATHS: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FbgError {
    #[error("the 1-skeleton has a directed cycle")]
    NotAcyclic,
    #[error("unknown vertex {0}")]
    UnknownCell(CellRef),
    #[error("more than {limit} paths between {from} and {to}")]
    PathExplosion {
        from: String,
        to: String,
        limit: usize,
    },
}

/// A directed edge path. An empty path sits at `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgePath {
    pub start: String,
    pub edges: Vec<String>,
}

impl EdgePath {
    pub fn end<'a>(&'a self, p: &'a Complex) -> &'a str {
        match self.edges.last() {
            Some(e) => p.endpoint(e, 1).expect("path edges exist"),
            None => &self.start,
        }
    }

    pub fn is_composable(&self, p: &Complex) -> bool {
        let mut at = self.start.as_str();
        for e in &self.edges {
            match (p.endpoint(e, 0), p.endpoint(e, 1)) {
                (Some(src), Some(dst)) if src == at => at = dst,
                _ => return false,
            }
        }
        true
    }

    /// The same edges traversed in `opposite(p)`, where every edge is reversed.
    pub fn reversed(&self, p: &Complex) -> EdgePath {
        EdgePath {
            start: self.end(p).to_string(),
            edges: self.edges.iter().rev().cloned().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassEntry {
    pub count: usize,
    /// Lexicographically least path of each class.
    pub representatives: Vec<EdgePath>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FbgTable {
    pub minimals: Vec<String>,
    pub maximals: Vec<String>,
    #[serde(serialize_with = "pairs_as_list")]
    pub classes: BTreeMap<(String, String), ClassEntry>,
}

fn pairs_as_list<S: serde::Serializer>(
    map: &BTreeMap<(String, String), ClassEntry>,
    ser: S,
) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        minimal: &'a str,
        maximal: &'a str,
        count: usize,
        representatives: &'a [EdgePath],
    }
    ser.collect_seq(map.iter().map(|((m, mx), e)| Entry {
        minimal: m,
        maximal: mx,
        count: e.count,
        representatives: &e.representatives,
    }))
}

impl FbgTable {
    pub fn count(&self, minimal: &str, maximal: &str) -> Option<usize> {
        self.classes
            .get(&(minimal.to_string(), maximal.to_string()))
            .map(|e| e.count)
    }
}

pub fn one_skeleton_is_acyclic(p: &Complex) -> bool {
    let mut graph = DiGraph::<(), ()>::new();
    let nodes: HashMap<&str, _> = p.vertices().map(|v| (v, graph.add_node(()))).collect();
    for e in p.edges() {
        let (Some(src), Some(dst)) = (p.endpoint(e, 0), p.endpoint(e, 1)) else {
            continue;
        };
        graph.add_edge(nodes[src], nodes[dst], ());
    }
    petgraph::algo::toposort(&graph, None).is_ok()
}

/// Index form of the 1-skeleton with outgoing edges sorted by id.
struct Skeleton<'a> {
    vertex_ids: Vec<&'a str>,
    vertex_index: HashMap<&'a str, usize>,
    edge_ids: Vec<&'a str>,
    edge_index: HashMap<&'a str, usize>,
    /// `(edge, target)` per source vertex, by ascending edge id.
    out: Vec<Vec<(usize, usize)>>,
    into: Vec<Vec<usize>>,
}

impl<'a> Skeleton<'a> {
    fn new(p: &'a Complex) -> Self {
        let vertex_ids: Vec<&str> = p.vertices().collect();
        let vertex_index: HashMap<&str, usize> = vertex_ids
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, i))
            .collect();
        let edge_ids: Vec<&str> = p.edges().collect();
        let edge_index: HashMap<&str, usize> =
            edge_ids.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let mut out = vec![Vec::new(); vertex_ids.len()];
        let mut into = vec![Vec::new(); vertex_ids.len()];
        for (ei, e) in edge_ids.iter().enumerate() {
            let src = vertex_index[p.endpoint(e, 0).expect("edge source")];
            let dst = vertex_index[p.endpoint(e, 1).expect("edge target")];
            out[src].push((ei, dst));
            into[dst].push(src);
        }
        Skeleton {
            vertex_ids,
            vertex_index,
            edge_ids,
            edge_index,
            out,
            into,
        }
    }

    fn vertex(&self, id: &str) -> Result<usize, FbgError> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| FbgError::UnknownCell(CellRef::vertex(id)))
    }

    /// All paths `from -> to` as edge-index sequences, in lexicographic
    /// order of edge ids.
    fn paths(&self, from: usize, to: usize, limit: usize) -> Result<Vec<Vec<usize>>, FbgError> {
        let mut reaches = vec![false; self.vertex_ids.len()];
        reaches[to] = true;
        let mut queue = VecDeque::from([to]);
        while let Some(v) = queue.pop_front() {
            for &u in &self.into[v] {
                if !reaches[u] {
                    reaches[u] = true;
                    queue.push_back(u);
                }
            }
        }
        let mut found = Vec::new();
        if !reaches[from] {
            return Ok(found);
        }
        let mut prefix = Vec::new();
        self.walk(from, to, &reaches, &mut prefix, &mut found, limit)?;
        Ok(found)
    }

    fn walk(
        &self,
        at: usize,
        to: usize,
        reaches: &[bool],
        prefix: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> Result<(), FbgError> {
        if at == to {
            if found.len() == limit {
                return Err(FbgError::PathExplosion {
                    from: String::new(),
                    to: String::new(),
                    limit,
                });
            }
            found.push(prefix.clone());
            return Ok(());
        }
        for &(e, next) in &self.out[at] {
            if reaches[next] {
                prefix.push(e);
                self.walk(next, to, reaches, prefix, found, limit)?;
                prefix.pop();
            }
        }
        Ok(())
    }

    fn to_path(&self, from: usize, edges: &[usize]) -> EdgePath {
        EdgePath {
            start: self.vertex_ids[from].to_string(),
            edges: edges
                .iter()
                .map(|&e| self.edge_ids[e].to_string())
                .collect(),
        }
    }
}

fn prepare<'a>(
    p: &'a Complex,
    from: &str,
    to: &str,
) -> Result<(Skeleton<'a>, usize, usize), FbgError> {
    if !one_skeleton_is_acyclic(p) {
        return Err(FbgError::NotAcyclic);
    }
    let sk = Skeleton::new(p);
    let f = sk.vertex(from)?;
    let t = sk.vertex(to)?;
    Ok((sk, f, t))
}

fn with_endpoints(err: FbgError, from: &str, to: &str) -> FbgError {
    match err {
        FbgError::PathExplosion { limit, .. } => FbgError::PathExplosion {
            from: from.to_string(),
            to: to.to_string(),
            limit,
        },
        other => other,
    }
}

/// Every directed edge path from `from` to `to`, lexicographically ordered.
pub fn enumerate_dipaths(p: &Complex, from: &str, to: &str) -> Result<Vec<EdgePath>, FbgError> {
    enumerate_dipaths_capped(p, from, to, DEFAULT_MAX_PATHS)
}

pub fn enumerate_dipaths_capped(
    p: &Complex,
    from: &str,
    to: &str,
    max_paths: usize,
) -> Result<Vec<EdgePath>, FbgError> {
    let (sk, f, t) = prepare(p, from, to)?;
    let paths = sk
        .paths(f, t, max_paths)
        .map_err(|e| with_endpoints(e, from, to))?;
    Ok(paths.iter().map(|es| sk.to_path(f, es)).collect())
}

/// Partition of the paths `from -> to` into square-exchange classes.
/// Classes are ordered by their least path; each class is sorted.
pub fn dihomotopy_classes(
    p: &Complex,
    from: &str,
    to: &str,
) -> Result<Vec<Vec<EdgePath>>, FbgError> {
    dihomotopy_classes_capped(p, from, to, DEFAULT_MAX_PATHS)
}

pub fn dihomotopy_classes_capped(
    p: &Complex,
    from: &str,
    to: &str,
    max_paths: usize,
) -> Result<Vec<Vec<EdgePath>>, FbgError> {
    let (sk, f, t) = prepare(p, from, to)?;
    let exchanges = exchange_table(p, &sk);
    let classes =
        classes_of(&sk, &exchanges, f, t, max_paths).map_err(|e| with_endpoints(e, from, to))?;
    Ok(classes
        .into_iter()
        .map(|class| class.iter().map(|es| sk.to_path(f, es)).collect())
        .collect())
}

/// Lower corner path `[d_2^0 s, d_1^1 s]` of each square mapped to the
/// upper corner paths `[d_1^0 s, d_2^1 s]` it may be exchanged for.
fn exchange_table(p: &Complex, sk: &Skeleton) -> HashMap<(usize, usize), Vec<(usize, usize)>> {
    let mut table: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    for s in p.squares() {
        let f = |i, k| sk.edge_index[p.face(2, s, i, k).expect("square faces")];
        let lower = (f(2, 0), f(1, 1));
        let upper = (f(1, 0), f(2, 1));
        if lower != upper {
            table.entry(lower).or_default().push(upper);
        }
    }
    table
}

fn classes_of(
    sk: &Skeleton,
    exchanges: &HashMap<(usize, usize), Vec<(usize, usize)>>,
    from: usize,
    to: usize,
    limit: usize,
) -> Result<Vec<Vec<Vec<usize>>>, FbgError> {
    let paths = sk.paths(from, to, limit)?;
    let index: HashMap<&[usize], usize> = paths
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let mut uf = UnionFind::<usize>::new(paths.len());
    let mut scratch = Vec::new();
    for (pi, path) in paths.iter().enumerate() {
        for t in 1..path.len() {
            let Some(alts) = exchanges.get(&(path[t - 1], path[t])) else {
                continue;
            };
            for &(x, y) in alts {
                scratch.clear();
                scratch.extend_from_slice(path);
                scratch[t - 1] = x;
                scratch[t] = y;
                if let Some(&other) = index.get(scratch.as_slice()) {
                    uf.union(pi, other);
                }
            }
        }
    }
    // Paths are in lexicographic order, so first-seen order of roots orders
    // classes by their least member.
    let mut slot: HashMap<usize, usize> = HashMap::new();
    let mut classes: Vec<Vec<Vec<usize>>> = Vec::new();
    for (pi, path) in paths.into_iter().enumerate() {
        let root = uf.find(pi);
        let at = *slot.entry(root).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[at].push(path);
    }
    Ok(classes)
}

pub fn fundamental_bipartite_graph(p: &Complex) -> Result<FbgTable, FbgError> {
    fundamental_bipartite_graph_capped(p, DEFAULT_MAX_PATHS)
}

pub fn fundamental_bipartite_graph_capped(
    p: &Complex,
    max_paths: usize,
) -> Result<FbgTable, FbgError> {
    if !one_skeleton_is_acyclic(p) {
        return Err(FbgError::NotAcyclic);
    }
    let sk = Skeleton::new(p);
    let exchanges = exchange_table(p, &sk);
    let minimals: Vec<String> = minimal_vertices(p).into_iter().collect();
    let maximals: Vec<String> = maximal_vertices(p).into_iter().collect();
    let mut classes = BTreeMap::new();
    for m in &minimals {
        for mx in &maximals {
            let (f, t) = (sk.vertex_index[m.as_str()], sk.vertex_index[mx.as_str()]);
            let found = classes_of(&sk, &exchanges, f, t, max_paths)
                .map_err(|e| with_endpoints(e, m, mx))?;
            let representatives: Vec<EdgePath> =
                found.iter().map(|c| sk.to_path(f, &c[0])).collect();
            classes.insert(
                (m.clone(), mx.clone()),
                ClassEntry {
                    count: representatives.len(),
                    representatives,
                },
            );
        }
    }
    Ok(FbgTable {
        minimals,
        maximals,
        classes,
    })
}

/// Same minimal and maximal vertex ids, and equal class counts on every
/// pair. Representatives are ignored.
pub fn fbg_equal(a: &FbgTable, b: &FbgTable) -> bool {
    let set = |v: &[String]| v.iter().cloned().collect::<BTreeSet<_>>();
    set(&a.minimals) == set(&b.minimals)
        && set(&a.maximals) == set(&b.maximals)
        && a.classes.len() == b.classes.len()
        && a.classes
            .iter()
            .all(|(k, e)| b.classes.get(k).map(|f| f.count) == Some(e.count))
}

/// Equality of count matrices up to renaming the minimal and the maximal
/// vertices, i.e. isomorphism of the bipartite graphs with class counts
/// as edge multiplicities.
pub fn fbg_profile_equal(a: &FbgTable, b: &FbgTable) -> bool {
    if a.minimals.len() != b.minimals.len() || a.maximals.len() != b.maximals.len() {
        return false;
    }
    let matrix = |t: &FbgTable| -> Vec<Vec<usize>> {
        t.minimals
            .iter()
            .map(|m| {
                t.maximals
                    .iter()
                    .map(|mx| t.count(m, mx).unwrap_or(0))
                    .collect()
            })
            .collect()
    };
    let (ma, mb) = (matrix(a), matrix(b));
    let mut used = vec![false; mb.len()];
    let mut rows = Vec::with_capacity(ma.len());
    match_rows(&ma, &mb, &mut used, &mut rows)
}

fn sorted(row: &[usize]) -> Vec<usize> {
    let mut r = row.to_vec();
    r.sort_unstable();
    r
}

fn match_rows(
    ma: &[Vec<usize>],
    mb: &[Vec<usize>],
    used: &mut [bool],
    rows: &mut Vec<usize>,
) -> bool {
    let at = rows.len();
    if at == ma.len() {
        // Rows fixed; the columns must agree as a multiset of column vectors.
        let cols = ma.first().map_or(0, Vec::len);
        let column = |m: &[Vec<usize>], order: &[usize], c: usize| -> Vec<usize> {
            order.iter().map(|&r| m[r][c]).collect()
        };
        let identity: Vec<usize> = (0..ma.len()).collect();
        let mut ca: Vec<Vec<usize>> = (0..cols).map(|c| column(ma, &identity, c)).collect();
        let mut cb: Vec<Vec<usize>> = (0..cols).map(|c| column(mb, rows, c)).collect();
        ca.sort();
        cb.sort();
        return ca == cb;
    }
    let want = sorted(&ma[at]);
    for r in 0..mb.len() {
        if used[r] || sorted(&mb[r]) != want {
            continue;
        }
        used[r] = true;
        rows.push(r);
        if match_rows(ma, mb, used, rows) {
            return true;
        }
        rows.pop();
        used[r] = false;
    }
    false
}
