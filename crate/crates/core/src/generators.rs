//! Level-k generators and r-reticulation generators: enumeration up to
//! isomorphism, sides, side reachability and canonical forms.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::GeneratorError;
use crate::network::Adj;

/// Largest parameter enumerated unless the caller raises the limit.
pub const DEFAULT_PARAMETER_LIMIT: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    /// Biconnected skeleton with `k` reticulations and a root of outdegree 2.
    Level,
    /// Skeleton with `r` reticulations below a fake root of outdegree 1.
    Reticulation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SideKind {
    /// The `parallel`-th copy of edge `(tail, head)`.
    Edge { tail: usize, head: usize, parallel: usize },
    /// A node of indegree 2 and outdegree 0.
    Node(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Side {
    pub id: usize,
    pub kind: SideKind,
}

impl Side {
    pub fn is_node(&self) -> bool {
        matches!(self.kind, SideKind::Node(_))
    }
}

/// A directed acyclic multigraph skeleton with identified sides.
///
/// Nodes are numbered in canonical order, so isomorphic generators are
/// structurally equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    kind: GeneratorKind,
    parameter: usize,
    node_count: usize,
    /// Sorted; a parallel pair appears twice.
    edges: Vec<(usize, usize)>,
    root: usize,
    canonical: String,
    sides: Vec<Side>,
    /// `reach[u]` has bit `v` set iff there is a directed path from `u` to `v`
    /// (including `u` itself).
    reach: Vec<u64>,
    /// For each side, the id of the other side of its parallel pair.
    partner: Vec<Option<usize>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
struct GeneratorRecord {
    kind: GeneratorKind,
    parameter: usize,
    nodes: usize,
    edges: Vec<[usize; 2]>,
    root: usize,
}

impl Generator {
    /// Builds a generator from an edge list, relabelling nodes canonically.
    pub fn new(kind: GeneratorKind, parameter: usize, node_count: usize, edges: &[(usize, usize)]) -> Self {
        let root = (0..node_count)
            .find(|&v| !edges.iter().any(|&(_, h)| h == v))
            .expect("generator has an indegree-0 node");
        let (code, position) = canonical_labelling(node_count, edges, root);
        let mut relabelled: Vec<(usize, usize)> =
            edges.iter().map(|&(u, v)| (position[u], position[v])).collect();
        relabelled.sort_unstable();
        let canonical = format!(
            "{}{}:{}",
            match kind {
                GeneratorKind::Level => "L",
                GeneratorKind::Reticulation => "R",
            },
            parameter,
            code
        );
        let root = position[root];
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); node_count];
        let mut indeg = vec![0usize; node_count];
        for &(u, v) in &relabelled {
            children[u].push(v);
            indeg[v] += 1;
        }
        let mut reach = vec![0u64; node_count];
        // Nodes sorted so that children come first: repeat until stable (tiny graphs).
        for v in 0..node_count {
            reach[v] = 1 << v;
        }
        loop {
            let mut changed = false;
            for u in 0..node_count {
                let mut r = reach[u];
                for &c in &children[u] {
                    r |= reach[c];
                }
                if r != reach[u] {
                    reach[u] = r;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut sides = Vec::new();
        let mut partner = Vec::new();
        let mut i = 0;
        while i < relabelled.len() {
            let (u, v) = relabelled[i];
            let copies = relabelled[i..].iter().take_while(|&&e| e == (u, v)).count();
            let first = sides.len();
            for p in 0..copies {
                sides.push(Side {
                    id: sides.len(),
                    kind: SideKind::Edge { tail: u, head: v, parallel: p },
                });
                partner.push(if copies == 2 { Some(first + 1 - p) } else { None });
            }
            i += copies;
        }
        for v in 0..node_count {
            if indeg[v] == 2 && children[v].is_empty() {
                sides.push(Side {
                    id: sides.len(),
                    kind: SideKind::Node(v),
                });
                partner.push(None);
            }
        }
        Generator {
            kind,
            parameter,
            node_count,
            edges: relabelled,
            root,
            canonical,
            sides,
            reach,
            partner,
        }
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn parameter(&self) -> usize {
        self.parameter
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// The indegree-0 node; the fake root for reticulation generators.
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn fake_root(&self) -> Option<usize> {
        (self.kind == GeneratorKind::Reticulation).then_some(self.root)
    }

    pub fn indegree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(_, h)| h == v).count()
    }

    pub fn outdegree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(t, _)| t == v).count()
    }

    pub fn reticulation_count(&self) -> usize {
        (0..self.node_count).filter(|&v| self.indegree(v) == 2).count()
    }

    pub fn canonical_form(&self) -> &str {
        &self.canonical
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn side(&self, id: usize) -> Side {
        self.sides[id]
    }

    /// The other copy of a doubled edge.
    pub fn parallel_partner(&self, side: usize) -> Option<usize> {
        self.partner[side]
    }

    pub fn reaches(&self, u: usize, v: usize) -> bool {
        self.reach[u] >> v & 1 == 1
    }

    /// A directed path from the head of `s` to the tail of `t` (or to the
    /// node itself when `t` is a node side). Node sides reach nothing.
    pub fn side_reachable(&self, s: usize, t: usize) -> bool {
        debug_assert_ne!(s, t);
        let head = match self.sides[s].kind {
            SideKind::Node(_) => return false,
            SideKind::Edge { head, .. } => head,
        };
        let target = match self.sides[t].kind {
            SideKind::Node(v) => v,
            SideKind::Edge { tail, .. } => tail,
        };
        self.reaches(head, target)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph generator {\n");
        for v in 0..self.node_count {
            let shape = if v == self.root {
                "box"
            } else if self.indegree(v) == 2 {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(out, "  g{v} [shape={shape}];");
        }
        for s in &self.sides {
            match s.kind {
                SideKind::Edge { tail, head, .. } => {
                    let _ = writeln!(out, "  g{tail} -> g{head} [label=\"s{}\"];", s.id);
                }
                SideKind::Node(v) => {
                    let _ = writeln!(out, "  g{v} [xlabel=\"s{}\"];", s.id);
                }
            }
        }
        out.push_str("}\n");
        out
    }

    fn record(&self) -> GeneratorRecord {
        GeneratorRecord {
            kind: self.kind,
            parameter: self.parameter,
            nodes: self.node_count,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
            root: self.root,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.record()).expect("plain data serializes")
    }
}

/// Canonical code and node positions: colour refinement by
/// (indegree, outdegree, is-root), then individualization over the first
/// non-singleton cell, keeping the smallest adjacency encoding.
fn canonical_labelling(n: usize, edges: &[(usize, usize)], root: usize) -> (String, Vec<usize>) {
    let mut mult = vec![vec![0u8; n]; n];
    for &(u, v) in edges {
        mult[u][v] += 1;
    }
    let indeg: Vec<usize> = (0..n).map(|v| (0..n).map(|u| mult[u][v] as usize).sum()).collect();
    let outdeg: Vec<usize> = (0..n).map(|u| mult[u].iter().map(|&m| m as usize).sum()).collect();
    let initial: Vec<(usize, usize, bool)> = (0..n).map(|v| (indeg[v], outdeg[v], v == root)).collect();
    let colors = rank(&initial);
    let colors = refine(&mult, colors);
    let mut best: Option<(Vec<u8>, Vec<usize>)> = None;
    search(&mult, colors, &mut best);
    let (code, position) = best.expect("search visits at least one leaf");
    let text: String = code.iter().map(|d| char::from(b'0' + d)).collect();
    (text, position)
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("key present"))
        .collect()
}

fn refine(mult: &[Vec<u8>], mut colors: Vec<usize>) -> Vec<usize> {
    let n = colors.len();
    loop {
        let classes = colors.iter().max().map_or(0, |m| m + 1);
        let sig: Vec<(usize, Vec<(usize, u8)>, Vec<(usize, u8)>)> = (0..n)
            .map(|v| {
                let mut out: Vec<(usize, u8)> = (0..n)
                    .filter(|&w| mult[v][w] > 0)
                    .map(|w| (colors[w], mult[v][w]))
                    .collect();
                out.sort_unstable();
                let mut inn: Vec<(usize, u8)> = (0..n)
                    .filter(|&w| mult[w][v] > 0)
                    .map(|w| (colors[w], mult[w][v]))
                    .collect();
                inn.sort_unstable();
                (colors[v], out, inn)
            })
            .collect();
        let next = rank(&sig);
        let next_classes = next.iter().max().map_or(0, |m| m + 1);
        colors = next;
        if next_classes == classes {
            return colors;
        }
    }
}

fn search(mult: &[Vec<u8>], colors: Vec<usize>, best: &mut Option<(Vec<u8>, Vec<usize>)>) {
    let n = colors.len();
    let mut count = vec![0usize; n];
    for &c in &colors {
        count[c] += 1;
    }
    match (0..n).find(|&c| count[c] > 1) {
        None => {
            let position = colors;
            let mut at = vec![0usize; n];
            for v in 0..n {
                at[position[v]] = v;
            }
            let code: Vec<u8> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| mult[at[i]][at[j]])
                .collect();
            if best.as_ref().map_or(true, |(b, _)| code < *b) {
                *best = Some((code, position));
            }
        }
        Some(cell) => {
            for v in (0..n).filter(|&v| colors[v] == cell) {
                let split: Vec<usize> = (0..n)
                    .map(|u| 2 * colors[u] + usize::from(colors[u] == cell && u != v))
                    .collect();
                let split = rank(&split);
                search(mult, refine(mult, split), best);
            }
        }
    }
}

pub fn enumerate_level_generators(k: usize) -> Result<Vec<Generator>, GeneratorError> {
    enumerate(GeneratorKind::Level, k, DEFAULT_PARAMETER_LIMIT)
}

pub fn enumerate_reticulation_generators(r: usize) -> Result<Vec<Generator>, GeneratorError> {
    enumerate(GeneratorKind::Reticulation, r, DEFAULT_PARAMETER_LIMIT)
}

#[derive(Clone, Copy)]
enum Slot {
    Root,
    Tree(usize),
    Ret(usize, usize),
}

/// All generators of the given kind and parameter, sorted by canonical form.
///
/// Nodes are added in a topological order. A tree node takes one open
/// out-stub and opens two; a reticulation takes two and opens zero or one.
/// Each new node's parent positions, as `(latest, earlier)`, never decrease
/// along the sequence; every graph has such an order, so only
/// duplicate orders are pruned. Remaining duplicates are removed by
/// canonical form.
pub fn enumerate(kind: GeneratorKind, parameter: usize, limit: usize) -> Result<Vec<Generator>, GeneratorError> {
    if parameter == 0 {
        return Err(GeneratorError::ZeroParameter);
    }
    if parameter > limit {
        return Err(GeneratorError::LimitExceeded {
            requested: parameter,
            limit,
        });
    }
    let root_stubs = match kind {
        GeneratorKind::Level => 2,
        GeneratorKind::Reticulation => 1,
    };
    let mut found: BTreeMap<String, Generator> = BTreeMap::new();
    let mut slots = vec![Slot::Root];
    let mut open = vec![root_stubs];
    extend(kind, parameter, &mut slots, &mut open, 0, (0, -1), &mut found);
    Ok(found.into_values().collect())
}

fn extend(
    kind: GeneratorKind,
    k: usize,
    slots: &mut Vec<Slot>,
    open: &mut Vec<usize>,
    rets: usize,
    last_key: (usize, isize),
    found: &mut BTreeMap<String, Generator>,
) {
    let total: usize = open.iter().sum();
    if total == 0 {
        if rets == k {
            let edges: Vec<(usize, usize)> = slots
                .iter()
                .enumerate()
                .flat_map(|(v, s)| match *s {
                    Slot::Root => vec![],
                    Slot::Tree(p) => vec![(p, v)],
                    Slot::Ret(p, q) => vec![(q, v), (p, v)],
                })
                .collect();
            if kind == GeneratorKind::Level && !is_biconnected(slots.len(), &edges) {
                return;
            }
            let g = Generator::new(kind, k, slots.len(), &edges);
            found.entry(g.canonical.clone()).or_insert(g);
        }
        return;
    }
    if rets == k || total > 2 * (k - rets) {
        return;
    }
    let m = slots.len();
    // Tree node.
    for p in 0..m {
        let key = (p, -1);
        if open[p] == 0 || key < last_key {
            continue;
        }
        open[p] -= 1;
        slots.push(Slot::Tree(p));
        open.push(2);
        extend(kind, k, slots, open, rets, key, found);
        open.pop();
        slots.pop();
        open[p] += 1;
    }
    // Reticulation with parents q <= p.
    for p in 0..m {
        for q in 0..=p {
            let key = (p, q as isize);
            if key < last_key {
                continue;
            }
            let need_p = if p == q { 2 } else { 1 };
            if open[p] < need_p || open[q] == 0 {
                continue;
            }
            open[p] -= 1;
            open[q] -= 1;
            for out in 0..=1 {
                slots.push(Slot::Ret(p, q));
                open.push(out);
                extend(kind, k, slots, open, rets + 1, key, found);
                open.pop();
                slots.pop();
            }
            open[p] += 1;
            open[q] += 1;
        }
    }
}

fn is_biconnected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut children: Vec<Adj> = vec![Adj::new(); n];
    let mut parents: Vec<Adj> = vec![Adj::new(); n];
    for &(u, v) in edges {
        children[u].push(v);
        parents[v].push(u);
    }
    let comps = crate::network::biconnected_edge_components(&children, &parents);
    comps.len() == 1 && comps[0].len() == edges.len()
}

static GLOBAL_CACHE: OnceLock<GeneratorCache> = OnceLock::new();

/// Process-wide memo of enumerated generators, optionally backed by a JSON
/// file keyed by kind and parameter.
pub struct GeneratorCache {
    memory: Mutex<HashMap<(GeneratorKind, usize), Arc<Vec<Arc<Generator>>>>>,
    file: Option<PathBuf>,
}

impl GeneratorCache {
    pub fn new(file: Option<PathBuf>) -> Self {
        GeneratorCache {
            memory: Mutex::new(HashMap::new()),
            file,
        }
    }

    /// The process-wide cache, in memory only unless [`Self::init_global`]
    /// ran first.
    pub fn global() -> &'static GeneratorCache {
        GLOBAL_CACHE.get_or_init(|| GeneratorCache::new(None))
    }

    /// Backs the global cache with `file`. False if it was already in use.
    pub fn init_global(file: Option<PathBuf>) -> bool {
        GLOBAL_CACHE.set(GeneratorCache::new(file)).is_ok()
    }

    pub fn get(&self, kind: GeneratorKind, parameter: usize, limit: usize) -> Result<Arc<Vec<Arc<Generator>>>, GeneratorError> {
        if let Some(v) = self.memory.lock().expect("cache lock").get(&(kind, parameter)) {
            return Ok(v.clone());
        }
        let list = match self.file.as_deref().and_then(|f| load_cached(f, kind, parameter)) {
            Some(list) => list,
            None => {
                let list = enumerate(kind, parameter, limit)?;
                if let Some(f) = &self.file {
                    store_cached(f, kind, parameter, &list)?;
                }
                list
            }
        };
        let list = Arc::new(list.into_iter().map(Arc::new).collect::<Vec<_>>());
        self.memory
            .lock()
            .expect("cache lock")
            .insert((kind, parameter), list.clone());
        Ok(list)
    }
}

#[derive(Serialize, Deserialize, Default)]
struct CacheFile {
    entries: Vec<CacheEntry>,
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    kind: GeneratorKind,
    parameter: usize,
    generators: Vec<GeneratorRecord>,
}

fn load_cached(path: &Path, kind: GeneratorKind, parameter: usize) -> Option<Vec<Generator>> {
    let text = std::fs::read_to_string(path).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    let entry = file
        .entries
        .into_iter()
        .find(|e| e.kind == kind && e.parameter == parameter)?;
    Some(
        entry
            .generators
            .iter()
            .map(|r| {
                let edges: Vec<(usize, usize)> = r.edges.iter().map(|e| (e[0], e[1])).collect();
                Generator::new(r.kind, r.parameter, r.nodes, &edges)
            })
            .collect(),
    )
}

fn store_cached(path: &Path, kind: GeneratorKind, parameter: usize, list: &[Generator]) -> Result<(), GeneratorError> {
    let mut file: CacheFile = std::fs::read_to_string(path)
        .ok()
        .and_then(|t| serde_json::from_str(&t).ok())
        .unwrap_or_default();
    file.entries.retain(|e| !(e.kind == kind && e.parameter == parameter));
    file.entries.push(CacheEntry {
        kind,
        parameter,
        generators: list.iter().map(Generator::record).collect(),
    });
    file.entries.sort_by_key(|e| (e.kind, e.parameter));
    let text = serde_json::to_string_pretty(&file).map_err(|e| GeneratorError::Cache(e.to_string()))?;
    std::fs::write(path, text).map_err(|e| GeneratorError::Cache(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_level_generators(1).unwrap().len(), 1);
        assert_eq!(enumerate_level_generators(2).unwrap().len(), 4);
        assert_eq!(enumerate_reticulation_generators(1).unwrap().len(), 1);
        assert_eq!(enumerate_reticulation_generators(2).unwrap().len(), 7);
    }

    #[test]
    fn larger_counts() {
        // Known counts for levels 3 and 4; the reticulation count is pinned.
        assert_eq!(enumerate_level_generators(3).unwrap().len(), 65);
        assert_eq!(enumerate_level_generators(4).unwrap().len(), 1993);
        assert_eq!(enumerate_reticulation_generators(3).unwrap().len(), 111);
    }

    #[test]
    fn cache_file_round_trip() {
        let path = std::env::temp_dir().join(format!("softnet-cache-{}.json", std::process::id()));
        let _ = std::fs::remove_file(&path);
        let first = GeneratorCache::new(Some(path.clone()));
        let a = first.get(GeneratorKind::Reticulation, 2, DEFAULT_PARAMETER_LIMIT).unwrap();
        assert!(path.exists());
        let second = GeneratorCache::new(Some(path.clone()));
        let b = second.get(GeneratorKind::Reticulation, 2, DEFAULT_PARAMETER_LIMIT).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.canonical_form(), y.canonical_form());
            assert_eq!(x.sides().len(), y.sides().len());
        }
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn level_one_sides() {
        let g = &enumerate_level_generators(1).unwrap()[0];
        assert_eq!(g.sides().len(), 3);
        assert_eq!(g.sides().iter().filter(|s| s.is_node()).count(), 1);
        assert_eq!(g.parallel_partner(0), Some(1));
        let node = g.sides().iter().find(|s| s.is_node()).unwrap().id;
        assert!(g.side_reachable(0, node));
        assert!(g.side_reachable(1, node));
        assert!(!g.side_reachable(node, 0));
        assert!(!g.side_reachable(0, 1));
    }

    #[test]
    fn canonical_form_ignores_labels() {
        let a = Generator::new(GeneratorKind::Level, 1, 2, &[(0, 1), (0, 1)]);
        let b = Generator::new(GeneratorKind::Level, 1, 2, &[(1, 0), (1, 0)]);
        assert_eq!(a, b);
        // Level-2 shape with a doubled edge, given in two numberings.
        let e1 = [(0, 1), (0, 3), (1, 2), (1, 2), (2, 3)];
        let e2 = [(3, 0), (3, 2), (0, 1), (0, 1), (1, 2)];
        assert_eq!(
            Generator::new(GeneratorKind::Level, 2, 4, &e1).canonical_form(),
            Generator::new(GeneratorKind::Level, 2, 4, &e2).canonical_form()
        );
    }

    #[test]
    fn limits() {
        assert_eq!(
            enumerate(GeneratorKind::Level, 5, 4).unwrap_err(),
            GeneratorError::LimitExceeded { requested: 5, limit: 4 }
        );
        assert_eq!(enumerate(GeneratorKind::Level, 0, 4).unwrap_err(), GeneratorError::ZeroParameter);
    }
}
