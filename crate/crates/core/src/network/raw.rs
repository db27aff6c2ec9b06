use std::sync::Arc;

use super::{Adj, Network};
use crate::error::NetworkError;
use crate::taxa::{Taxon, TaxonUniverse};

/// Unvalidated rooted DAG used while assembling networks. May contain
/// unlabelled sinks, parallel edges and unary nodes until normalized.
#[derive(Clone, Debug, Default)]
pub(crate) struct RawDag {
    pub children: Vec<Adj>,
    pub taxon: Vec<Option<Taxon>>,
    pub root: usize,
}

impl RawDag {
    pub fn with_capacity(n: usize) -> Self {
        RawDag {
            children: Vec::with_capacity(n),
            taxon: Vec::with_capacity(n),
            root: 0,
        }
    }

    pub fn add_node(&mut self, taxon: Option<Taxon>) -> usize {
        self.children.push(Adj::new());
        self.taxon.push(taxon);
        self.children.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.children[u].push(v);
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    /// Removes unlabelled sinks, merges parallel edges, suppresses nodes with
    /// indegree 1 and outdegree 1, and drops a root of outdegree 1, until none
    /// applies. Returns the compacted DAG and, per new node, its old id.
    pub fn normalize(&self) -> (RawDag, Vec<usize>) {
        let m = self.len();
        let mut children: Vec<Adj> = self.children.clone();
        let mut parents: Vec<Adj> = vec![Adj::new(); m];
        for (u, cs) in children.iter().enumerate() {
            for &v in cs {
                parents[v].push(u);
            }
        }
        let mut alive = vec![true; m];
        let mut root = self.root;
        loop {
            let mut changed = false;
            for v in 0..m {
                if !alive[v] {
                    continue;
                }
                if children[v].is_empty() && self.taxon[v].is_none() && v != root {
                    for p in std::mem::take(&mut parents[v]) {
                        children[p].retain(|c| *c != v);
                    }
                    alive[v] = false;
                    changed = true;
                    continue;
                }
                let cs = &mut children[v];
                let before = cs.len();
                let mut seen = Adj::new();
                cs.retain(|c| {
                    if seen.contains(c) {
                        false
                    } else {
                        seen.push(*c);
                        true
                    }
                });
                if cs.len() != before {
                    for &c in cs.iter() {
                        let ps = &mut parents[c];
                        let mut kept = false;
                        ps.retain(|p| {
                            if *p != v {
                                true
                            } else if !kept {
                                kept = true;
                                true
                            } else {
                                false
                            }
                        });
                    }
                    changed = true;
                }
                if v != root && parents[v].len() == 1 && children[v].len() == 1 && self.taxon[v].is_none() {
                    let (p, c) = (parents[v][0], children[v][0]);
                    for x in children[p].iter_mut() {
                        if *x == v {
                            *x = c;
                        }
                    }
                    for x in parents[c].iter_mut() {
                        if *x == v {
                            *x = p;
                        }
                    }
                    children[v].clear();
                    parents[v].clear();
                    alive[v] = false;
                    changed = true;
                    continue;
                }
            }
            if children[root].len() == 1 && self.taxon[root].is_none() {
                let c = children[root][0];
                parents[c].retain(|p| *p != root);
                children[root].clear();
                alive[root] = false;
                root = c;
                changed = true;
            }
            if !changed {
                break;
            }
        }
        let mut new_id = vec![usize::MAX; m];
        let mut old = Vec::new();
        for v in 0..m {
            if alive[v] {
                new_id[v] = old.len();
                old.push(v);
            }
        }
        let out = RawDag {
            children: old
                .iter()
                .map(|&v| children[v].iter().map(|&c| new_id[c]).collect())
                .collect(),
            taxon: old.iter().map(|&v| self.taxon[v]).collect(),
            root: new_id[root],
        };
        (out, old)
    }

    pub fn into_network(self, universe: &Arc<TaxonUniverse>) -> Result<Network, NetworkError> {
        Network::from_adj(universe.clone(), self.children, self.taxon)
    }
}
