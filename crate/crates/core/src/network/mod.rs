//! Rooted phylogenetic networks: construction, structural measures,
//! switchings and softwired clusters, and text formats.

mod raw;
mod serial;
mod softwired;
mod structure;

use std::collections::HashMap;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::clusters::{compatible, ClusterSet};
use crate::error::{ClusterError, NetworkError};
use crate::taxa::{Taxon, TaxonSet, TaxonUniverse};

pub(crate) use raw::RawDag;
pub(crate) use structure::biconnected_components as biconnected_edge_components;
pub use serial::{parse_enewick_all, parse_enewick_shared, Format};
pub use softwired::{softwired_bound, DisplayedTree, Switching};
pub(crate) use softwired::{ClusterTargets, SwitchingEngine};

pub(crate) type Adj = SmallVec<[usize; 2]>;

/// A rooted directed acyclic graph whose leaves are bijectively labelled by
/// the taxa of a universe.
///
/// Construction validates: acyclic, a single indegree-0 node, no node with
/// indegree 1 and outdegree 1, no parallel edges, and exactly the leaves
/// carry taxon labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    universe: Arc<TaxonUniverse>,
    children: Vec<Adj>,
    parents: Vec<Adj>,
    root: usize,
    taxon: Vec<Option<Taxon>>,
    leaf_of: Vec<usize>,
}

impl Network {
    /// Validating constructor from child lists and leaf labels.
    pub fn from_parts(
        universe: Arc<TaxonUniverse>,
        children: Vec<Vec<usize>>,
        taxon: Vec<Option<Taxon>>,
    ) -> Result<Self, NetworkError> {
        Self::from_adj(
            universe,
            children.into_iter().map(Adj::from_vec).collect(),
            taxon,
        )
    }

    pub(crate) fn from_adj(
        universe: Arc<TaxonUniverse>,
        children: Vec<Adj>,
        taxon: Vec<Option<Taxon>>,
    ) -> Result<Self, NetworkError> {
        let m = children.len();
        if m == 0 {
            return Err(NetworkError::Empty);
        }
        let mut parents: Vec<Adj> = vec![Adj::new(); m];
        for (u, cs) in children.iter().enumerate() {
            for &v in cs {
                if v >= m {
                    return Err(NetworkError::MissingNode(v));
                }
                parents[v].push(u);
            }
            for (i, &v) in cs.iter().enumerate() {
                if cs[..i].contains(&v) {
                    return Err(NetworkError::MultiEdge(u, v));
                }
            }
        }
        let roots: Vec<usize> = (0..m).filter(|&v| parents[v].is_empty()).collect();
        if roots.len() != 1 {
            return Err(if roots.is_empty() {
                NetworkError::Cycle
            } else {
                NetworkError::RootCount(roots.len())
            });
        }
        let root = roots[0];
        if structure::topological_order(&children, &parents).is_none() {
            return Err(NetworkError::Cycle);
        }
        let mut leaf_of = vec![usize::MAX; universe.len()];
        for v in 0..m {
            let (ind, outd) = (parents[v].len(), children[v].len());
            if ind == 1 && outd == 1 {
                return Err(NetworkError::DegreeTwoNode(v));
            }
            match (outd, taxon.get(v).copied().flatten()) {
                (0, None) => return Err(NetworkError::UnlabeledLeaf(v)),
                (0, Some(t)) => {
                    if t >= universe.len() {
                        return Err(NetworkError::UnknownTaxon(format!("#{t}")));
                    }
                    if leaf_of[t] != usize::MAX {
                        return Err(NetworkError::DuplicateLabel(universe.name(t).to_string()));
                    }
                    leaf_of[t] = v;
                }
                (_, Some(_)) => return Err(NetworkError::LabeledInternal(v)),
                _ => {}
            }
        }
        if let Some(t) = leaf_of.iter().position(|&v| v == usize::MAX) {
            return Err(NetworkError::MissingTaxon(universe.name(t).to_string()));
        }
        let mut taxon = taxon;
        taxon.resize(m, None);
        Ok(Network {
            universe,
            children,
            parents,
            root,
            taxon,
            leaf_of,
        })
    }

    pub fn universe(&self) -> &Arc<TaxonUniverse> {
        &self.universe
    }

    pub fn node_count(&self) -> usize {
        self.children.len()
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(|c| c.len()).sum()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn taxon(&self, v: usize) -> Option<Taxon> {
        self.taxon[v]
    }

    pub fn leaf(&self, t: Taxon) -> usize {
        self.leaf_of[t]
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.taxon[v].map(|t| self.universe.name(t))
    }

    /// All edges as `(tail, head)` pairs in node order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.children
            .iter()
            .enumerate()
            .flat_map(|(u, cs)| cs.iter().map(move |&v| (u, v)))
            .collect()
    }

    pub fn reticulations(&self) -> Vec<usize> {
        (0..self.node_count()).filter(|&v| self.parents[v].len() > 1).collect()
    }

    /// `|E| - |V| + 1`, which equals the sum of `indegree - 1` over non-root nodes.
    pub fn reticulation_number(&self) -> usize {
        let r = self.edge_count() + 1 - self.node_count();
        debug_assert_eq!(
            r,
            self.parents
                .iter()
                .filter(|p| !p.is_empty())
                .map(|p| p.len() - 1)
                .sum::<usize>()
        );
        r
    }

    /// Reticulations have indegree 2 and outdegree 1, other internal nodes
    /// have outdegree 2 (the root may be a lone leaf).
    pub fn is_binary(&self) -> bool {
        (0..self.node_count()).all(|v| {
            let (i, o) = (self.parents[v].len(), self.children[v].len());
            match (i, o) {
                (_, 0) => i <= 1,
                (0, 2) | (1, 2) | (2, 1) => true,
                _ => false,
            }
        })
    }

    pub fn is_tree(&self) -> bool {
        self.reticulation_number() == 0
    }

    /// Edge partition into biconnected components of the underlying
    /// undirected graph.
    pub fn biconnected_components(&self) -> Vec<Vec<(usize, usize)>> {
        structure::biconnected_components(&self.children, &self.parents)
    }

    /// Largest reticulation number `|E_B| - |V_B| + 1` of a biconnected component.
    pub fn level(&self) -> usize {
        self.biconnected_components()
            .iter()
            .map(|comp| {
                let mut nodes: Vec<usize> = comp.iter().flat_map(|&(u, v)| [u, v]).collect();
                nodes.sort_unstable();
                nodes.dedup();
                comp.len() + 1 - nodes.len()
            })
            .max()
            .unwrap_or(0)
    }

    /// Removing any cut-node or cut-edge leaves at most one component with
    /// more than one node.
    pub fn is_simple(&self) -> bool {
        structure::is_simple(&self.children, &self.parents)
    }

    /// Leaf descendants of every node over all edges.
    pub(crate) fn descendants(&self) -> Vec<TaxonSet> {
        let order = structure::topological_order(&self.children, &self.parents)
            .expect("network is acyclic");
        let mut desc = vec![TaxonSet::new(); self.node_count()];
        for &v in order.iter().rev() {
            let mut d = TaxonSet::new();
            if let Some(t) = self.taxon[v] {
                d.insert(t);
            }
            for &c in &self.children[v] {
                d.union_with(&desc[c]);
            }
            desc[v] = d;
        }
        desc
    }

    /// Clusters of tree edges in the hardwired sense.
    #[cfg(test)]
    pub(crate) fn hardwired_clusters(&self) -> ClusterSet {
        let desc = self.descendants();
        let clusters = (0..self.node_count())
            .filter(|&v| self.parents[v].len() == 1)
            .map(|v| desc[v].clone())
            .collect();
        ClusterSet::from_parts(self.universe.clone(), clusters)
    }

    /// The same network with taxa re-indexed into another universe holding
    /// the same labels.
    pub fn with_universe(&self, universe: &Arc<TaxonUniverse>) -> Result<Network, NetworkError> {
        if Arc::ptr_eq(universe, &self.universe) || **universe == *self.universe {
            return Ok(Network {
                universe: universe.clone(),
                ..self.clone()
            });
        }
        if universe.len() != self.universe.len() {
            let missing = universe
                .names()
                .iter()
                .find(|n| self.universe.id(n).is_none())
                .or_else(|| self.universe.names().iter().find(|n| universe.id(n).is_none()))
                .cloned()
                .unwrap_or_default();
            return Err(NetworkError::MissingTaxon(missing));
        }
        let taxon = self
            .taxon
            .iter()
            .map(|t| match t {
                None => Ok(None),
                Some(t) => {
                    let name = self.universe.name(*t);
                    universe
                        .id(name)
                        .map(Some)
                        .ok_or_else(|| NetworkError::UnknownTaxon(name.to_string()))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Network::from_adj(universe.clone(), self.children.clone(), taxon)
    }

    /// Replaces each leaf whose label is a key of `subs` by a copy of the
    /// given network (its root takes the leaf's place). Remaining labels
    /// and the substituted networks' labels are resolved in `universe`.
    pub fn substitute_leaves(
        &self,
        subs: &HashMap<&str, &Network>,
        universe: &Arc<TaxonUniverse>,
    ) -> Result<Network, NetworkError> {
        let mut children: Vec<Adj> = Vec::new();
        let mut taxon: Vec<Option<Taxon>> = Vec::new();
        let lookup = |name: &str| {
            universe
                .id(name)
                .ok_or_else(|| NetworkError::UnknownTaxon(name.to_string()))
        };
        // New id of each node of `self`.
        let mut map = vec![usize::MAX; self.node_count()];
        for v in 0..self.node_count() {
            map[v] = children.len();
            children.push(Adj::new());
            taxon.push(None);
        }
        for v in 0..self.node_count() {
            let label = self.label(v);
            match label.and_then(|l| subs.get(l)) {
                Some(sub) => {
                    let base = children.len();
                    for w in 0..sub.node_count() {
                        children.push(sub.children[w].iter().map(|&c| c + base).collect());
                        taxon.push(sub.label(w).map(lookup).transpose()?);
                    }
                    // Edges into the leaf are redirected to the copied root.
                    map[v] = base + sub.root;
                }
                None => {
                    taxon[map[v]] = label.map(lookup).transpose()?;
                }
            }
        }
        for v in 0..self.node_count() {
            let cs: Adj = self.children[v].iter().map(|&c| map[c]).collect();
            if map[v] < self.node_count() {
                children[map[v]] = cs;
            }
        }
        // Drop the placeholders left behind by substituted leaves.
        let keep: Vec<bool> = (0..children.len())
            .map(|v| v >= self.node_count() || map[v] == v)
            .collect();
        let mut new_id = vec![usize::MAX; children.len()];
        let mut next = 0;
        for v in 0..children.len() {
            if keep[v] {
                new_id[v] = next;
                next += 1;
            }
        }
        let children: Vec<Adj> = (0..children.len())
            .filter(|&v| keep[v])
            .map(|v| children[v].iter().map(|&c| new_id[c]).collect())
            .collect();
        let taxon: Vec<Option<Taxon>> = (0..taxon.len()).filter(|&v| keep[v]).map(|v| taxon[v]).collect();
        Network::from_adj(universe.clone(), children, taxon)
    }
}

/// Incremental builder addressing nodes by index and leaves by label.
#[derive(Clone, Debug, Default)]
pub struct NetworkBuilder {
    children: Vec<Vec<usize>>,
    labels: Vec<Option<String>>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self) -> usize {
        self.children.push(Vec::new());
        self.labels.push(None);
        self.children.len() - 1
    }

    pub fn add_leaf(&mut self, label: impl Into<String>) -> usize {
        let v = self.add_node();
        self.labels[v] = Some(label.into());
        v
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> &mut Self {
        self.children[u].push(v);
        self
    }

    pub fn set_label(&mut self, v: usize, label: impl Into<String>) -> &mut Self {
        self.labels[v] = Some(label.into());
        self
    }

    /// Builds with a universe made of the labels in node order.
    pub fn build(self) -> Result<Network, NetworkError> {
        let names: Vec<String> = self.labels.iter().flatten().cloned().collect();
        let universe = Arc::new(TaxonUniverse::new(names).map_err(|e| match e {
            ClusterError::DuplicateLabel(l) => NetworkError::DuplicateLabel(l),
            other => NetworkError::Cluster(other),
        })?);
        self.build_over(&universe)
    }

    pub fn build_over(self, universe: &Arc<TaxonUniverse>) -> Result<Network, NetworkError> {
        let taxon = self
            .labels
            .iter()
            .map(|l| match l {
                None => Ok(None),
                Some(name) => universe
                    .id(name)
                    .map(Some)
                    .ok_or_else(|| NetworkError::UnknownTaxon(name.clone())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Network::from_parts(universe.clone(), self.children, taxon)
    }
}

/// The tree of a pairwise-compatible cluster set. Polytomies are resolved
/// into caterpillars, pairing children left to right by smallest taxon id.
pub fn tree_from_hierarchy(cs: &ClusterSet) -> Result<Network, ClusterError> {
    tree_from_hierarchy_flagged(cs).map(|(net, _)| net)
}

/// Like [`tree_from_hierarchy`], also returning the nodes added to make the
/// tree binary. Their clusters are not part of the input.
pub fn tree_from_hierarchy_flagged(cs: &ClusterSet) -> Result<(Network, Vec<usize>), ClusterError> {
    let clusters = cs.clusters();
    for (i, a) in clusters.iter().enumerate() {
        for b in &clusters[i + 1..] {
            if !compatible(a, b) {
                return Err(ClusterError::Incompatible(cs.format(a), cs.format(b)));
            }
        }
    }
    let n = cs.n();
    if n == 0 {
        return Err(ClusterError::EmptyUniverse);
    }
    let universe = cs.universe().clone();
    if n == 1 {
        let net = Network::from_parts(universe, vec![vec![]], vec![Some(0)])
            .expect("single leaf is valid");
        return Ok((net, Vec::new()));
    }
    let mut sets: Vec<TaxonSet> = clusters.iter().filter(|c| c.len() > 1).cloned().collect();
    sets.push(universe.all());
    // Largest first so parents precede children.
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    let mut hierarchy: Vec<Vec<Item>> = vec![Vec::new(); sets.len()];
    let smallest_container = |s: &TaxonSet, upto: usize| -> usize {
        (0..upto)
            .filter(|&j| s.is_subset(&sets[j]) && sets[j] != *s)
            .min_by_key(|&j| sets[j].len())
            .unwrap_or(0)
    };
    for i in 1..sets.len() {
        let p = smallest_container(&sets[i], i);
        hierarchy[p].push(Item::Set(i));
    }
    for t in 0..n {
        let p = (0..sets.len())
            .filter(|&j| sets[j].contains(t))
            .min_by_key(|&j| sets[j].len())
            .unwrap_or(0);
        hierarchy[p].push(Item::Leaf(t));
    }
    let mut children: Vec<Vec<usize>> = Vec::new();
    let mut taxon: Vec<Option<Taxon>> = Vec::new();
    let mut refinement = Vec::new();
    fn emit(
        item: Item,
        sets: &[TaxonSet],
        hierarchy: &[Vec<Item>],
        children: &mut Vec<Vec<usize>>,
        taxon: &mut Vec<Option<Taxon>>,
        refinement: &mut Vec<usize>,
    ) -> usize {
        let v = children.len();
        children.push(Vec::new());
        match item {
            Item::Leaf(t) => {
                taxon.push(Some(t));
                v
            }
            Item::Set(i) => {
                taxon.push(None);
                let mut items = hierarchy[i].clone();
                items.sort_by_key(|it| match it {
                    Item::Leaf(t) => *t,
                    Item::Set(j) => sets[*j].first().unwrap_or(usize::MAX),
                });
                let subs: Vec<usize> = items
                    .into_iter()
                    .map(|it| emit(it, sets, hierarchy, children, taxon, refinement))
                    .collect();
                // Left-to-right pairing: ((s0,s1),s2),...
                let mut acc = subs[0];
                for (k, &s) in subs.iter().enumerate().skip(1) {
                    if k == subs.len() - 1 {
                        children[v] = vec![acc, s];
                    } else {
                        let w = children.len();
                        children.push(vec![acc, s]);
                        taxon.push(None);
                        refinement.push(w);
                        acc = w;
                    }
                }
                v
            }
        }
    }
    emit(Item::Set(0), &sets, &hierarchy, &mut children, &mut taxon, &mut refinement);
    let net = Network::from_parts(universe, children, taxon).expect("hierarchy tree is valid");
    Ok((net, refinement))
}

#[derive(Clone, Copy, Debug)]
enum Item {
    Leaf(Taxon),
    Set(usize),
}

#[cfg(test)]
mod tests;
