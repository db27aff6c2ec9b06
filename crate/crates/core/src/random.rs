//! Seeded random binary networks of bounded level, for test corpora.

use std::sync::Arc;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clusters::ClusterSet;
use crate::error::RandomError;
use crate::generators::{Generator, GeneratorCache, GeneratorKind, SideKind, DEFAULT_PARAMETER_LIMIT};
use crate::network::{Network, RawDag};
use crate::taxa::{Taxon, TaxonUniverse};

pub const MAX_RANDOM_TAXA: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomParams {
    pub taxa: usize,
    /// Level of every blob is at most this.
    pub max_level: usize,
    /// Total reticulations over all blobs.
    pub max_reticulations: usize,
    /// Chance of growing a blob wherever one fits.
    pub blob_chance: f64,
}

impl RandomParams {
    pub fn new(taxa: usize, max_level: usize) -> Self {
        RandomParams {
            taxa,
            max_level,
            max_reticulations: max_level,
            blob_chance: 0.6,
        }
    }
}

/// Taxon names `a`..`z`, then `t26`, `t27`, ...
pub fn taxon_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("t{i}")
            }
        })
        .collect()
}

/// A binary network on `params.taxa` taxa built by hanging random subtrees
/// and random level generators below each other. Same seed, same network.
pub fn random_network(params: &RandomParams, seed: u64) -> Result<Network, RandomError> {
    if params.taxa == 0 {
        return Err(RandomError::NoTaxa);
    }
    if params.taxa > MAX_RANDOM_TAXA {
        return Err(RandomError::TooManyTaxa(params.taxa, MAX_RANDOM_TAXA));
    }
    let universe = Arc::new(TaxonUniverse::new(taxon_names(params.taxa)).expect("generated names are distinct"));
    let mut b = Builder {
        rng: ChaCha8Rng::seed_from_u64(seed),
        dag: RawDag::with_capacity(4 * params.taxa),
        budget: params.max_reticulations,
        params: *params,
    };
    let mut taxa: Vec<Taxon> = (0..params.taxa).collect();
    taxa.shuffle(&mut b.rng);
    let root = b.build(&taxa)?;
    let mut dag = b.dag;
    dag.root = root;
    let (dag, _) = dag.normalize();
    let net = dag.into_network(&universe).expect("random construction is a valid network");
    debug_assert!(net.is_binary());
    debug_assert!(net.level() <= params.max_level);
    Ok(net)
}

/// A random network together with the clusters it represents.
pub fn random_instance(params: &RandomParams, seed: u64) -> Result<(Network, ClusterSet), RandomError> {
    let net = random_network(params, seed)?;
    let cs = net.softwired_clusters();
    Ok((net, cs))
}

struct Builder {
    rng: ChaCha8Rng,
    dag: RawDag,
    budget: usize,
    params: RandomParams,
}

impl Builder {
    fn build(&mut self, taxa: &[Taxon]) -> Result<usize, RandomError> {
        if taxa.len() == 1 {
            return Ok(self.dag.add_node(Some(taxa[0])));
        }
        let cap = self.params.max_level.min(self.budget).min(DEFAULT_PARAMETER_LIMIT);
        if cap >= 1 && self.rng.gen_bool(self.params.blob_chance) {
            let j = self.rng.gen_range(1..=cap);
            let generators = GeneratorCache::global().get(GeneratorKind::Level, j, DEFAULT_PARAMETER_LIMIT)?;
            let g = generators[self.rng.gen_range(0..generators.len())].clone();
            if required_groups(&g).len() <= taxa.len() {
                self.budget -= j;
                return self.blob(&g, taxa);
            }
        }
        let cut = self.rng.gen_range(1..taxa.len());
        let left = self.build(&taxa[..cut])?;
        let right = self.build(&taxa[cut..])?;
        let v = self.dag.add_node(None);
        self.dag.add_edge(v, left);
        self.dag.add_edge(v, right);
        Ok(v)
    }

    fn blob(&mut self, g: &Generator, taxa: &[Taxon]) -> Result<usize, RandomError> {
        let required = required_groups(g);
        let groups = self.rng.gen_range(required.len()..=taxa.len());
        let mut cuts: Vec<usize> = index::sample(&mut self.rng, taxa.len() - 1, groups - 1)
            .into_iter()
            .map(|c| c + 1)
            .collect();
        cuts.sort_unstable();
        cuts.push(taxa.len());
        let edge_sides: Vec<usize> = g.sides().iter().filter(|s| !s.is_node()).map(|s| s.id).collect();
        let mut on_side: Vec<Vec<&[Taxon]>> = vec![Vec::new(); g.sides().len()];
        let mut start = 0;
        for (i, &end) in cuts.iter().enumerate() {
            let side = match required.get(i) {
                Some(&s) => s,
                None => edge_sides[self.rng.gen_range(0..edge_sides.len())],
            };
            on_side[side].push(&taxa[start..end]);
            start = end;
        }
        let base = self.dag.len();
        for _ in 0..g.node_count() {
            self.dag.add_node(None);
        }
        for side in g.sides() {
            let mut hung = std::mem::take(&mut on_side[side.id]);
            hung.shuffle(&mut self.rng);
            match side.kind {
                SideKind::Edge { tail, head, .. } => {
                    let mut prev = base + tail;
                    for group in hung {
                        let sub = self.build(group)?;
                        let w = self.dag.add_node(None);
                        self.dag.add_edge(prev, w);
                        self.dag.add_edge(w, sub);
                        prev = w;
                    }
                    self.dag.add_edge(prev, base + head);
                }
                SideKind::Node(v) => {
                    let sub = self.build(hung[0])?;
                    self.dag.add_edge(base + v, sub);
                }
            }
        }
        Ok(base + g.root())
    }
}

/// Sides that must receive a subtree: every node side and one copy of each
/// parallel pair.
fn required_groups(g: &Generator) -> Vec<usize> {
    g.sides()
        .iter()
        .filter(|s| s.is_node() || g.parallel_partner(s.id).is_some_and(|p| p > s.id))
        .map(|s| s.id)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_network() {
        let params = RandomParams::new(8, 2);
        for seed in 0..20 {
            let a = random_network(&params, seed).unwrap();
            let b = random_network(&params, seed).unwrap();
            assert_eq!(a.to_enewick(), b.to_enewick());
        }
    }

    #[test]
    fn respects_bounds() {
        let mut levels = [0usize; 3];
        for seed in 0..200 {
            let params = RandomParams::new(1 + (seed as usize % 8), 2);
            let (net, cs) = random_instance(&params, seed).unwrap();
            assert!(net.is_binary());
            assert!(net.level() <= 2);
            assert!(net.reticulation_number() <= 2);
            assert_eq!(net.universe().len(), params.taxa);
            assert!(net.represents(&cs));
            levels[net.level()] += 1;
        }
        assert!(levels.iter().all(|&c| c > 10), "{levels:?}");
    }

    #[test]
    fn rejects_bad_sizes() {
        assert_eq!(random_network(&RandomParams::new(0, 1), 1).unwrap_err(), RandomError::NoTaxa);
        assert!(random_network(&RandomParams::new(65, 1), 1).is_err());
    }
}
