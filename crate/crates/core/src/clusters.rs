//! Cluster sets over a taxon universe: compatibility, the incompatibility
//! graph, the `→_C` relation and the ST-set reductions.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::ClusterError;
use crate::network::{tree_from_hierarchy, Network};
use crate::taxa::{Taxon, TaxonSet, TaxonUniverse};

/// Two clusters are compatible when they are disjoint or nested.
pub fn compatible(a: &TaxonSet, b: &TaxonSet) -> bool {
    a.is_disjoint(b) || a.is_subset(b) || b.is_subset(a)
}

/// A deduplicated set of clusters over a shared universe.
///
/// Clusters are kept sorted. Sets built through [`ClusterSet::new`] or
/// [`ClusterSet::parse`] are validated: every cluster is a nonempty proper
/// subset and every taxon is covered. Derived sets (`restrict`, collapses)
/// skip the coverage requirement.
#[derive(Clone, PartialEq, Eq)]
pub struct ClusterSet {
    universe: Arc<TaxonUniverse>,
    clusters: Vec<TaxonSet>,
}

impl fmt::Debug for ClusterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.clusters.iter().map(|c| self.universe.format_set(c)))
            .finish()
    }
}

impl ClusterSet {
    pub fn new(universe: Arc<TaxonUniverse>, clusters: Vec<TaxonSet>) -> Result<Self, ClusterError> {
        let n = universe.len();
        let all = universe.all();
        let mut covered = TaxonSet::new();
        for c in &clusters {
            if c.is_empty() {
                return Err(ClusterError::EmptyCluster);
            }
            if !c.is_subset(&all) {
                let bad = c.difference(&all).first().unwrap_or(n);
                return Err(ClusterError::UnknownTaxon(format!("#{bad}")));
            }
            if c.len() == n {
                return Err(ClusterError::FullCluster(universe.format_set(c)));
            }
            covered.union_with(c);
        }
        if let Some(t) = all.difference(&covered).first() {
            return Err(ClusterError::UncoveredTaxon(universe.name(t).to_string()));
        }
        Ok(Self::from_parts(universe, clusters))
    }

    /// Builds a set without validation. Empty and full sets are dropped.
    pub(crate) fn from_parts(universe: Arc<TaxonUniverse>, mut clusters: Vec<TaxonSet>) -> Self {
        let n = universe.len();
        clusters.retain(|c| !c.is_empty() && c.len() < n);
        clusters.sort();
        clusters.dedup();
        ClusterSet { universe, clusters }
    }

    /// Convenience constructor from label lists; the universe is the labels
    /// in order of first appearance.
    pub fn from_labels<S: AsRef<str>>(lists: &[Vec<S>]) -> Result<Self, ClusterError> {
        let mut names: Vec<String> = Vec::new();
        let mut seen: HashMap<String, usize> = HashMap::new();
        for list in lists {
            for l in list {
                let l = l.as_ref();
                if !seen.contains_key(l) {
                    seen.insert(l.to_string(), names.len());
                    names.push(l.to_string());
                }
            }
        }
        let universe = Arc::new(TaxonUniverse::new(names)?);
        let clusters = lists
            .iter()
            .map(|list| universe.set_of(list.iter().map(|s| s.as_ref())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(universe, clusters)
    }

    /// Parses the line-oriented cluster format: one cluster per line, taxa
    /// separated by commas, `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ClusterError> {
        let mut names: Vec<String> = Vec::new();
        let mut ids: HashMap<String, Taxon> = HashMap::new();
        let mut raw: Vec<(usize, TaxonSet)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut set = TaxonSet::new();
            for label in body.split(',') {
                let label = label.trim();
                if label.is_empty() {
                    return Err(ClusterError::Parse {
                        line: line_no,
                        reason: "empty taxon label".into(),
                    });
                }
                if label.contains(|c: char| c.is_whitespace() || "(){};:".contains(c)) {
                    return Err(ClusterError::Parse {
                        line: line_no,
                        reason: format!("invalid taxon label `{label}`"),
                    });
                }
                let id = *ids.entry(label.to_string()).or_insert_with(|| {
                    names.push(label.to_string());
                    names.len() - 1
                });
                set.insert(id);
            }
            raw.push((line_no, set));
        }
        if names.is_empty() {
            return Err(ClusterError::EmptyUniverse);
        }
        let n = names.len();
        if let Some((line, _)) = raw.iter().find(|(_, c)| c.len() == n) {
            return Err(ClusterError::Parse {
                line: *line,
                reason: "cluster contains every taxon; clusters must be proper subsets".into(),
            });
        }
        let universe = Arc::new(TaxonUniverse::new(names)?);
        Self::new(universe, raw.into_iter().map(|(_, c)| c).collect())
    }

    /// Canonical text form, one cluster per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.clusters {
            out.push_str(&self.universe.labels_of(c).join(","));
            out.push('\n');
        }
        out
    }

    pub fn universe(&self) -> &Arc<TaxonUniverse> {
        &self.universe
    }

    pub fn clusters(&self) -> &[TaxonSet] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Number of taxa.
    pub fn n(&self) -> usize {
        self.universe.len()
    }

    pub fn contains(&self, c: &TaxonSet) -> bool {
        self.clusters.binary_search(c).is_ok()
    }

    pub fn format(&self, c: &TaxonSet) -> String {
        self.universe.format_set(c)
    }

    pub fn set_compatible_with(&self, s: &TaxonSet) -> bool {
        self.clusters.iter().all(|c| compatible(c, s))
    }

    pub fn is_pairwise_compatible(&self) -> bool {
        self.clusters
            .iter()
            .enumerate()
            .all(|(i, a)| self.clusters[i + 1..].iter().all(|b| compatible(a, b)))
    }

    pub fn incompatibility_graph(&self) -> IncompatibilityGraph {
        let m = self.clusters.len();
        let mut edges = Vec::new();
        let mut dsu: Vec<usize> = (0..m).collect();
        fn find(d: &mut [usize], mut x: usize) -> usize {
            while d[x] != x {
                d[x] = d[d[x]];
                x = d[x];
            }
            x
        }
        for i in 0..m {
            for j in i + 1..m {
                if !compatible(&self.clusters[i], &self.clusters[j]) {
                    edges.push((i, j));
                    let (a, b) = (find(&mut dsu, i), find(&mut dsu, j));
                    dsu[a.max(b)] = a.min(b);
                }
            }
        }
        let mut by_root: HashMap<usize, usize> = HashMap::new();
        let mut components: Vec<Vec<usize>> = Vec::new();
        for i in 0..m {
            let r = find(&mut dsu, i);
            let slot = *by_root.entry(r).or_insert_with(|| {
                components.push(Vec::new());
                components.len() - 1
            });
            components[slot].push(i);
        }
        IncompatibilityGraph {
            node_count: m,
            edges,
            components,
        }
    }

    /// Union of taxa of each incompatibility component, deduplicated.
    pub fn backbone_clusters(&self) -> Vec<TaxonSet> {
        let g = self.incompatibility_graph();
        let mut out: Vec<TaxonSet> = g
            .components
            .iter()
            .map(|comp| {
                comp.iter().fold(TaxonSet::new(), |mut acc, &i| {
                    acc.union_with(&self.clusters[i]);
                    acc
                })
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// `C|S` as a cluster set over the sub-universe `S` (ids re-indexed in
    /// the order of `S`). Empty and full restrictions are dropped, so taxa
    /// of `S` may be left uncovered.
    pub fn restrict(&self, s: &TaxonSet) -> ClusterSet {
        let names: Vec<String> = s.iter().map(|t| self.universe.name(t).to_string()).collect();
        let remap: HashMap<Taxon, Taxon> = s.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let clusters = self
            .clusters
            .iter()
            .map(|c| c.intersection(s).iter().map(|t| remap[&t]).collect())
            .collect();
        let universe = match TaxonUniverse::new(names) {
            Ok(u) => Arc::new(u),
            Err(_) => {
                return ClusterSet {
                    universe: Arc::new(TaxonUniverse::empty()),
                    clusters: Vec::new(),
                }
            }
        };
        ClusterSet::from_parts(universe, clusters)
    }

    /// The clusters with the given indices, over the sub-universe of their union.
    pub fn component_set(&self, indices: &[usize]) -> ClusterSet {
        let span = indices.iter().fold(TaxonSet::new(), |mut acc, &i| {
            acc.union_with(&self.clusters[i]);
            acc
        });
        let only = ClusterSet {
            universe: self.universe.clone(),
            clusters: indices.iter().map(|&i| self.clusters[i].clone()).collect(),
        };
        only.restrict(&span)
    }

    /// For every taxon `x`, the set of `y` with `x →_C y` (plus `x` itself).
    pub fn implies_table(&self) -> Vec<TaxonSet> {
        implies_table(&self.clusters, &self.universe.all(), self.n())
    }

    /// `x →_C y`: every non-singleton cluster containing `x` contains `y`.
    pub fn implies(&self, x: Taxon, y: Taxon) -> bool {
        self.clusters
            .iter()
            .filter(|c| c.len() > 1 && c.contains(x))
            .all(|c| c.contains(y))
    }

    /// Smallest superset of `s` compatible with every cluster.
    pub fn compatible_closure(&self, s: &TaxonSet) -> TaxonSet {
        compatible_closure(&self.clusters, s)
    }

    /// True iff no proper subset of size at least two is compatible with the set.
    pub fn is_separating(&self) -> bool {
        let n = self.n();
        for x in 0..n {
            for y in x + 1..n {
                let pair: TaxonSet = [x, y].into_iter().collect();
                if self.compatible_closure(&pair).len() < n {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_st_set(&self, s: &TaxonSet) -> bool {
        StChecker::new(&self.clusters).is_st(s)
    }

    /// The partition of the universe into maximal ST-sets. A
    /// pairwise-compatible set yields the single block `X`.
    pub fn maximal_st_sets(&self) -> StPartition {
        let n = self.n();
        let all = self.universe.all();
        if self.is_pairwise_compatible() {
            return StPartition { blocks: vec![all] };
        }
        let checker = StChecker::new(&self.clusters);
        let mut blocks: Vec<TaxonSet> = (0..n).map(TaxonSet::singleton).collect();
        'outer: loop {
            for i in 0..blocks.len() {
                for j in i + 1..blocks.len() {
                    let u = blocks[i].union(&blocks[j]);
                    if u.len() < n && checker.is_st(&u) {
                        blocks[i] = u;
                        blocks.remove(j);
                        continue 'outer;
                    }
                }
            }
            break;
        }
        blocks.sort();
        StPartition { blocks }
    }

    pub fn is_st_collapsed(&self) -> bool {
        self.maximal_st_sets().blocks.iter().all(|b| b.len() == 1)
    }

    /// Replaces every maximal ST-set with at least two taxa by one meta-taxon.
    pub fn st_collapse(&self) -> (ClusterSet, Expansion) {
        let partition = self.maximal_st_sets();
        self.collapse_blocks(&partition.blocks)
    }

    /// Collapses the given disjoint blocks (covering the universe). Each block
    /// of size at least two becomes a meta-taxon whose expansion tree is the
    /// hierarchy of `C|B`.
    pub(crate) fn collapse_blocks(&self, blocks: &[TaxonSet]) -> (ClusterSet, Expansion) {
        let mut blocks = blocks.to_vec();
        blocks.sort_by_key(|b| b.first());
        if blocks.iter().all(|b| b.len() == 1) {
            return (self.clone(), Expansion::default());
        }
        let mut owner = vec![0usize; self.n()];
        let mut names = Vec::with_capacity(blocks.len());
        let mut expansion = Expansion::default();
        for (i, b) in blocks.iter().enumerate() {
            for t in b {
                owner[t] = i;
            }
            if b.len() == 1 {
                names.push(self.block_label(b));
            } else {
                let label = self.block_label(b);
                let restricted = self.restrict(b);
                let tree = tree_from_hierarchy(&restricted)
                    .expect("ST-set restriction is pairwise compatible");
                expansion.blocks.push(ExpansionBlock {
                    label: label.clone(),
                    members: b.clone(),
                    tree,
                });
                names.push(label);
            }
        }
        let universe = Arc::new(TaxonUniverse::new(names).expect("block labels are distinct"));
        let clusters = self
            .clusters
            .iter()
            .map(|c| c.iter().map(|t| owner[t]).collect())
            .collect();
        (ClusterSet::from_parts(universe, clusters), expansion)
    }

    /// Collapses a single-component cluster set until it is separating.
    ///
    /// Only components containing an incompatible pair are counted. The
    /// expansion maps each meta-taxon to the hierarchy of its block in the
    /// original taxa.
    pub fn make_separating(&self) -> Result<(ClusterSet, Expansion), ClusterError> {
        let nontrivial = self
            .incompatibility_graph()
            .components
            .iter()
            .filter(|comp| comp.len() > 1)
            .count();
        if nontrivial > 1 {
            return Err(ClusterError::MultipleComponents(nontrivial));
        }
        let mut current = self.clone();
        // Block of original taxa behind each taxon of `current`.
        let mut origin: Vec<TaxonSet> = (0..self.n()).map(TaxonSet::singleton).collect();
        while !current.is_separating() {
            let partition = maximal_compatible_blocks(&current);
            if partition.iter().all(|b| b.len() == 1) {
                break;
            }
            let mut owner = vec![0usize; current.n()];
            let mut next_origin = Vec::with_capacity(partition.len());
            for (i, b) in partition.iter().enumerate() {
                let mut flat = TaxonSet::new();
                for t in b {
                    owner[t] = i;
                    flat.union_with(&origin[t]);
                }
                next_origin.push(flat);
            }
            let names: Vec<String> = next_origin.iter().map(|b| self.block_label(b)).collect();
            let universe = Arc::new(TaxonUniverse::new(names).expect("distinct block labels"));
            let clusters = current
                .clusters
                .iter()
                .map(|c| c.iter().map(|t| owner[t]).collect())
                .collect();
            current = ClusterSet::from_parts(universe, clusters);
            origin = next_origin;
        }
        let mut expansion = Expansion::default();
        for b in origin.iter().filter(|b| b.len() > 1) {
            let tree = tree_from_hierarchy(&self.restrict(b))?;
            expansion.blocks.push(ExpansionBlock {
                label: self.block_label(b),
                members: b.clone(),
                tree,
            });
        }
        Ok((current, expansion))
    }

    fn block_label(&self, b: &TaxonSet) -> String {
        if b.len() == 1 {
            self.universe.name(b.first().unwrap()).to_string()
        } else {
            format!("{{{}}}", self.universe.labels_of(b).join(","))
        }
    }
}

/// Maximal proper subsets compatible with the set, as a partition sorted by
/// smallest member. On a single-component input these are the maximal ST-sets.
fn maximal_compatible_blocks(cs: &ClusterSet) -> Vec<TaxonSet> {
    let n = cs.n();
    let mut blocks: Vec<TaxonSet> = (0..n).map(TaxonSet::singleton).collect();
    'outer: loop {
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                let u = cs.compatible_closure(&blocks[i].union(&blocks[j]));
                if u.len() < n {
                    blocks.retain(|b| !b.is_subset(&u));
                    blocks.push(u);
                    continue 'outer;
                }
            }
        }
        break;
    }
    blocks.sort_by_key(|b| b.first());
    blocks
}

pub(crate) fn implies_table(clusters: &[TaxonSet], universe: &TaxonSet, size: usize) -> Vec<TaxonSet> {
    let mut table: Vec<Option<TaxonSet>> = vec![None; size];
    for c in clusters.iter().filter(|c| c.len() > 1) {
        for x in c {
            match &mut table[x] {
                Some(acc) => acc.intersect_with(c),
                slot @ None => *slot = Some(c.clone()),
            }
        }
    }
    table
        .into_iter()
        .map(|e| e.unwrap_or_else(|| universe.clone()))
        .collect()
}

pub(crate) fn compatible_closure(clusters: &[TaxonSet], s: &TaxonSet) -> TaxonSet {
    let mut cur = s.clone();
    loop {
        let mut grown = false;
        for c in clusters {
            if c.intersects(&cur) && !c.is_subset(&cur) && !cur.is_subset(c) {
                cur.union_with(c);
                grown = true;
            }
        }
        if !grown {
            return cur;
        }
    }
}

/// ST-set test with the cluster incompatibility relation precomputed.
pub(crate) struct StChecker<'a> {
    clusters: &'a [TaxonSet],
    incompatible: Vec<TaxonSet>,
}

impl<'a> StChecker<'a> {
    pub(crate) fn new(clusters: &'a [TaxonSet]) -> Self {
        let m = clusters.len();
        let mut incompatible = vec![TaxonSet::new(); m];
        for i in 0..m {
            for j in i + 1..m {
                if !compatible(&clusters[i], &clusters[j]) {
                    incompatible[i].insert(j);
                    incompatible[j].insert(i);
                }
            }
        }
        StChecker {
            clusters,
            incompatible,
        }
    }

    pub(crate) fn is_st(&self, s: &TaxonSet) -> bool {
        let mut inside = TaxonSet::new();
        for (i, c) in self.clusters.iter().enumerate() {
            if c.is_disjoint(s) || s.is_subset(c) {
                continue;
            }
            if !c.is_subset(s) {
                return false;
            }
            inside.insert(i);
        }
        inside.iter().all(|i| self.incompatible[i].is_disjoint(&inside))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncompatibilityGraph {
    pub node_count: usize,
    /// Pairs `(i, j)` with `i < j` of incompatible cluster indices.
    pub edges: Vec<(usize, usize)>,
    /// Connected components, each sorted, ordered by smallest member.
    pub components: Vec<Vec<usize>>,
}

impl IncompatibilityGraph {
    pub fn nontrivial_components(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.components.iter().filter(|c| c.len() > 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StPartition {
    /// Disjoint blocks covering the universe, sorted.
    pub blocks: Vec<TaxonSet>,
}

/// Meta-taxa created by a collapse, with the tree each one stands for.
#[derive(Clone, Debug, Default)]
pub struct Expansion {
    pub blocks: Vec<ExpansionBlock>,
}

#[derive(Clone, Debug)]
pub struct ExpansionBlock {
    /// Label of the meta-taxon in the collapsed universe.
    pub label: String,
    /// Taxa of the source universe it replaces.
    pub members: TaxonSet,
    /// Hierarchy tree over the member labels.
    pub tree: Network,
}

impl Expansion {
    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Replaces every meta-taxon leaf of `net` by its tree. The result is
    /// expressed over `universe`.
    pub fn expand(&self, net: &Network, universe: &Arc<TaxonUniverse>) -> Network {
        let subs: HashMap<&str, &Network> = self
            .blocks
            .iter()
            .map(|b| (b.label.as_str(), &b.tree))
            .collect();
        net.substitute_leaves(&subs, universe)
            .expect("expansion trees cover the collapsed taxa exactly")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(lists: &[&str]) -> ClusterSet {
        let lists: Vec<Vec<&str>> = lists.iter().map(|l| l.split(',').collect()).collect();
        ClusterSet::from_labels(&lists).unwrap()
    }

    fn set(c: &ClusterSet, labels: &str) -> TaxonSet {
        c.universe().set_of(labels.split(',')).unwrap()
    }

    #[test]
    fn compatibility_cases() {
        let c = cs(&["a,b", "c,d", "a,b,c", "b,c,f,i", "a,b,f,i"]);
        assert!(compatible(&set(&c, "a,b"), &set(&c, "c,d")));
        assert!(compatible(&set(&c, "a,b"), &set(&c, "a,b,c")));
        assert!(!compatible(&set(&c, "a,b,f,i"), &set(&c, "b,c,f,i")));
    }

    #[test]
    fn set_compatibility() {
        let c = cs(&["a,b", "b,c", "a,b,c,d", "d,e"]);
        assert!(c.set_compatible_with(&set(&c, "a,b,c")));
        assert!(c.set_compatible_with(&set(&c, "e")));
        let c = cs(&["a,b", "b,c"]);
        assert!(!c.set_compatible_with(&set(&c, "a,b")));
    }

    #[test]
    fn parse_rejects_full_cluster_and_reports_line() {
        let err = ClusterSet::parse("a,b\n# note\n\na,b,c\nb,c\n").unwrap_err();
        assert_eq!(
            err,
            ClusterError::Parse {
                line: 4,
                reason: "cluster contains every taxon; clusters must be proper subsets".into()
            }
        );
        assert!(matches!(
            ClusterSet::parse("a,,b\n"),
            Err(ClusterError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn parse_round_trip_and_dedup() {
        let c = ClusterSet::parse("b, c # comment\na,b\nc,b\na\n").unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(ClusterSet::parse(&c.to_text()).unwrap().to_text(), c.to_text());
    }

    #[test]
    fn graph_and_backbone() {
        let c = cs(&["a,b", "b,c", "d,e"]);
        let g = c.incompatibility_graph();
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.nontrivial_components().count(), 1);
        let bb: Vec<String> = c.backbone_clusters().iter().map(|b| c.format(b)).collect();
        assert_eq!(bb, vec!["{a,b,c}", "{d,e}"]);
    }

    #[test]
    fn restrict_drops_full_and_empty() {
        let c = cs(&["a,b", "b,c"]);
        let r = c.restrict(&set(&c, "a,b"));
        assert_eq!(r.len(), 1);
        assert_eq!(r.format(&r.clusters()[0]), "{b}");
        assert!(c.restrict(&TaxonSet::new()).is_empty());
        assert_eq!(c.restrict(&c.universe().all()), c);
    }

    #[test]
    fn st_examples() {
        let c = cs(&["a,b", "b,c", "a,b,c,d", "d,e"]);
        assert!(c.maximal_st_sets().blocks.iter().all(|b| b.len() == 1));
        assert!(c.is_st_collapsed());
        assert!(!c.is_separating());

        let c = cs(&["a,b", "b,c", "d,e"]);
        let blocks: Vec<String> = c.maximal_st_sets().blocks.iter().map(|b| c.format(b)).collect();
        assert_eq!(blocks, vec!["{a}", "{b}", "{c}", "{d,e}"]);
        let (collapsed, exp) = c.st_collapse();
        assert_eq!(collapsed.to_text(), "a,b\nb,c\n{d,e}\n");
        assert_eq!(exp.blocks.len(), 1);
        assert_eq!(exp.blocks[0].label, "{d,e}");
        assert_eq!(exp.blocks[0].tree.to_enewick(), "(d,e);");
    }

    #[test]
    fn separating_examples() {
        assert!(cs(&["a,b", "b,c"]).is_separating());
        // Two incompatibility components: {a,b},{b,c} and {a,b,c,d},{d,e}.
        let c = cs(&["a,b", "b,c", "a,b,c,d", "d,e"]);
        assert_eq!(c.make_separating().unwrap_err(), ClusterError::MultipleComponents(2));
        for comp in c.incompatibility_graph().nontrivial_components() {
            let (sep, _) = c.component_set(comp).make_separating().unwrap();
            assert!(sep.is_separating());
        }
    }

    #[test]
    fn make_separating_collapses_within_component() {
        // One component over {a,b,c,d,e}; {d,e} hangs inside.
        let c = cs(&["a,b,c", "c,d,e", "d,e", "a,b"]);
        let (sep, exp) = c.make_separating().unwrap();
        assert!(sep.is_separating());
        assert_eq!(sep.n(), 3);
        let labels: Vec<&str> = exp.blocks.iter().map(|b| b.label.as_str()).collect();
        assert_eq!(labels, vec!["{a,b}", "{d,e}"]);
        let two = cs(&["a,b", "b,c", "d,e", "e,f"]);
        assert_eq!(two.make_separating().unwrap_err(), ClusterError::MultipleComponents(2));
    }

    #[test]
    fn implies_examples() {
        let c = nine_taxa();
        let id = |l: &str| c.universe().id(l).unwrap();
        assert!(c.implies(id("g"), id("a")));
        assert!(!c.implies(id("a"), id("g")));
        let table = c.implies_table();
        assert!(table[id("g")].contains(id("a")));
        let lone = cs(&["a,b", "c"]);
        assert!(lone.implies(lone.universe().id("c").unwrap(), 0));
    }

    pub(crate) fn nine_taxa() -> ClusterSet {
        cs(&[
            "a,b,f,g,i", "a,b,c,f,g,i", "a,b,f,i", "b,c,f,i", "c,d,e,h", "d,e,h",
            "b,c,f,h,i", "b,c,d,f,h,i", "b,c,i", "a,g", "b,i", "c,i", "d,h",
        ])
    }
}
