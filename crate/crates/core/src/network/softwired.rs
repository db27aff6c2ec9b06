use std::collections::{BTreeMap, HashMap};

use super::raw::RawDag;
use super::structure::topological_order;
use super::{Adj, Network};
use crate::clusters::ClusterSet;
use crate::taxa::{Taxon, TaxonSet};

const NONE: usize = usize::MAX;

/// For every reticulation, the parent whose edge is kept.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Switching {
    /// `(reticulation, kept parent)` pairs in node order.
    pub kept: Vec<(usize, usize)>,
}

/// A tree displayed by a network, with each tree edge mapped to the network
/// edge entering the same head node.
#[derive(Clone, Debug)]
pub struct DisplayedTree {
    pub tree: Network,
    pub edge_origin: BTreeMap<(usize, usize), (usize, usize)>,
}

/// Walks all switchings of a DAG, computing the leaf set below every node.
pub(crate) struct SwitchingEngine {
    children: Vec<Adj>,
    taxon: Vec<Option<Taxon>>,
    root: usize,
    /// Children before parents.
    order: Vec<usize>,
    rets: Vec<usize>,
    ret_parents: Vec<Adj>,
    ret_of: Vec<usize>,
}

impl SwitchingEngine {
    pub fn new(children: &[Adj], taxon: &[Option<Taxon>], root: usize) -> Self {
        let m = children.len();
        let mut parents: Vec<Adj> = vec![Adj::new(); m];
        for (u, cs) in children.iter().enumerate() {
            for &v in cs {
                parents[v].push(u);
            }
        }
        let mut order = topological_order(children, &parents).expect("acyclic");
        order.reverse();
        let rets: Vec<usize> = (0..m).filter(|&v| parents[v].len() > 1).collect();
        let mut ret_of = vec![NONE; m];
        for (i, &r) in rets.iter().enumerate() {
            ret_of[r] = i;
        }
        let ret_parents = rets.iter().map(|&r| parents[r].clone()).collect();
        SwitchingEngine {
            children: children.to_vec(),
            taxon: taxon.to_vec(),
            root,
            order,
            rets,
            ret_parents,
            ret_of,
        }
    }

    pub fn from_raw(dag: &RawDag) -> Self {
        Self::new(&dag.children, &dag.taxon, dag.root)
    }

    pub fn from_network(net: &Network) -> Self {
        Self::new(&net.children, &net.taxon, net.root)
    }

    /// Calls `f(switching index digits, node, leaf set)` for every non-root
    /// node with a nonempty leaf set, switching by switching. Stops as soon
    /// as `f` returns true and reports whether it did.
    pub fn scan<F>(&self, mut f: F) -> bool
    where
        F: FnMut(&[usize], usize, &TaxonSet) -> bool,
    {
        let m = self.children.len();
        let mut desc = vec![TaxonSet::new(); m];
        let mut digits = vec![0usize; self.rets.len()];
        loop {
            for &v in &self.order {
                let mut d = TaxonSet::new();
                if let Some(t) = self.taxon[v] {
                    d.insert(t);
                }
                for &c in &self.children[v] {
                    let r = self.ret_of[c];
                    if r == NONE || self.ret_parents[r][digits[r]] == v {
                        d.union_with(&desc[c]);
                    }
                }
                desc[v] = d;
            }
            for &v in &self.order {
                if v != self.root && !desc[v].is_empty() && f(&digits, v, &desc[v]) {
                    return true;
                }
            }
            // Mixed-radix increment.
            let mut i = 0;
            loop {
                if i == digits.len() {
                    return false;
                }
                digits[i] += 1;
                if digits[i] < self.ret_parents[i].len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    fn switching(&self, digits: &[usize]) -> Switching {
        Switching {
            kept: self
                .rets
                .iter()
                .zip(digits)
                .enumerate()
                .map(|(i, (&r, &d))| (r, self.ret_parents[i][d]))
                .collect(),
        }
    }
}

/// A fixed list of clusters to look for among softwired clusters.
pub(crate) struct ClusterTargets {
    index: HashMap<TaxonSet, usize>,
    sets: Vec<TaxonSet>,
}

impl ClusterTargets {
    pub fn new<'a, I: IntoIterator<Item = &'a TaxonSet>>(sets: I) -> Self {
        let mut index = HashMap::new();
        let mut list = Vec::new();
        for s in sets {
            if !index.contains_key(s) {
                index.insert(s.clone(), list.len());
                list.push(s.clone());
            }
        }
        ClusterTargets { index, sets: list }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    /// True iff every target appears as a leaf set below some non-root node
    /// in some switching.
    pub fn all_hit(&self, engine: &SwitchingEngine) -> bool {
        if self.sets.is_empty() {
            return true;
        }
        let mut found = vec![false; self.sets.len()];
        let mut left = self.sets.len();
        engine.scan(|_, _, d| {
            if let Some(&i) = self.index.get(d) {
                if !found[i] {
                    found[i] = true;
                    left -= 1;
                }
            }
            left == 0
        })
    }

    pub fn missing(&self, engine: &SwitchingEngine) -> Vec<TaxonSet> {
        let mut found = vec![false; self.sets.len()];
        engine.scan(|_, _, d| {
            if let Some(&i) = self.index.get(d) {
                found[i] = true;
            }
            false
        });
        self.sets
            .iter()
            .zip(found)
            .filter(|(_, f)| !f)
            .map(|(s, _)| s.clone())
            .collect()
    }
}

/// Upper bound `2^(r+1) (n-1)` on the softwired clusters of a binary network.
pub fn softwired_bound(r: usize, n: usize) -> u128 {
    if r >= 120 {
        return u128::MAX;
    }
    (1u128 << (r + 1)) * (n.saturating_sub(1) as u128)
}

impl Network {
    pub fn switchings(&self) -> Vec<Switching> {
        let engine = SwitchingEngine::from_network(self);
        let mut out = Vec::new();
        let mut last: Option<Vec<usize>> = None;
        engine.scan(|digits, _, _| {
            if last.as_deref() != Some(digits) {
                last = Some(digits.to_vec());
                out.push(engine.switching(digits));
            }
            false
        });
        if out.is_empty() {
            out.push(Switching { kept: Vec::new() });
        }
        out
    }

    /// One tree per switching, duplicates included.
    pub fn displayed_trees(&self) -> Vec<DisplayedTree> {
        self.switchings()
            .iter()
            .map(|s| self.displayed_tree(s))
            .collect()
    }

    pub fn displayed_tree(&self, switching: &Switching) -> DisplayedTree {
        let kept: HashMap<usize, usize> = switching.kept.iter().copied().collect();
        let mut dag = RawDag::with_capacity(self.node_count());
        for v in 0..self.node_count() {
            dag.add_node(self.taxon[v]);
        }
        dag.root = self.root;
        for u in 0..self.node_count() {
            for &v in &self.children[u] {
                if self.parents[v].len() < 2 || kept.get(&v) == Some(&u) {
                    dag.add_edge(u, v);
                }
            }
        }
        let (norm, old) = dag.normalize();
        let mut edge_origin = BTreeMap::new();
        for (a, cs) in norm.children.iter().enumerate() {
            for &b in cs {
                let head = old[b];
                let tail = if self.parents[head].len() > 1 {
                    kept[&head]
                } else {
                    self.parents[head][0]
                };
                edge_origin.insert((a, b), (tail, head));
            }
        }
        let tree = norm
            .into_network(&self.universe)
            .expect("displayed tree is a valid tree");
        DisplayedTree { tree, edge_origin }
    }

    /// Union over switchings of the leaf sets below non-root nodes, without `X`.
    pub fn softwired_clusters(&self) -> ClusterSet {
        let engine = SwitchingEngine::from_network(self);
        let mut seen: std::collections::HashSet<TaxonSet> = std::collections::HashSet::new();
        engine.scan(|_, _, d| {
            if !seen.contains(d) {
                seen.insert(d.clone());
            }
            false
        });
        ClusterSet::from_parts(self.universe.clone(), seen.into_iter().collect())
    }

    /// True iff every cluster of `cs` is a softwired cluster of the network.
    /// Cluster labels are matched by name.
    pub fn represents(&self, cs: &ClusterSet) -> bool {
        let Some(targets) = self.targets_for(cs) else {
            return false;
        };
        if self.is_binary()
            && targets.len() as u128 > softwired_bound(self.reticulation_number(), self.universe.len())
        {
            return false;
        }
        targets.all_hit(&SwitchingEngine::from_network(self))
    }

    /// Clusters of `cs` that are not softwired clusters of the network, in
    /// the order of `cs`. Clusters naming unknown taxa are reported too.
    pub fn unrepresented(&self, cs: &ClusterSet) -> Vec<TaxonSet> {
        let translated: Vec<Option<TaxonSet>> =
            cs.clusters().iter().map(|c| self.translate(cs, c)).collect();
        let targets = ClusterTargets::new(translated.iter().flatten());
        let missing = targets.missing(&SwitchingEngine::from_network(self));
        cs.clusters()
            .iter()
            .zip(&translated)
            .filter(|(_, t)| t.as_ref().map_or(true, |t| missing.contains(t)))
            .map(|(c, _)| c.clone())
            .collect()
    }

    fn translate(&self, cs: &ClusterSet, c: &TaxonSet) -> Option<TaxonSet> {
        if **cs.universe() == *self.universe {
            return Some(c.clone());
        }
        c.iter()
            .map(|t| self.universe.id(cs.universe().name(t)))
            .collect::<Option<TaxonSet>>()
    }

    fn targets_for(&self, cs: &ClusterSet) -> Option<ClusterTargets> {
        let translated = cs
            .clusters()
            .iter()
            .map(|c| self.translate(cs, c))
            .collect::<Option<Vec<_>>>()?;
        Some(ClusterTargets::new(translated.iter()))
    }
}
