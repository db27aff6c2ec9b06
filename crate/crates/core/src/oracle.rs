//! Exhaustive ground truth for small instances: every completion of every
//! generator up to a bound is built and checked. Independent of the solver.

use std::sync::Arc;

use serde::Serialize;

use crate::clusters::ClusterSet;
use crate::error::OracleError;
use crate::generators::{Generator, GeneratorCache, GeneratorKind, SideKind, DEFAULT_PARAMETER_LIMIT};
use crate::network::{softwired_bound, ClusterTargets, Network, RawDag, SwitchingEngine};
use crate::taxa::{Taxon, TaxonSet, TaxonUniverse};

#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Largest input handled by the full pipelines.
    pub max_taxa: usize,
    /// Largest single instance handed to completion enumeration.
    pub max_component_taxa: usize,
    /// Keep enumerating at the minimum to count every witness.
    pub count_witnesses: bool,
    pub parameter_limit: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_taxa: 6,
            max_component_taxa: 9,
            count_witnesses: false,
            parameter_limit: DEFAULT_PARAMETER_LIMIT,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    /// `None` when nothing up to the bound works.
    pub minimum: Option<usize>,
    /// Completions representing the input at the minimum (1 unless counting).
    pub witnesses_found: u64,
    /// Completions built and checked, all parameters included.
    pub enumerated: u64,
}

/// Calls `f` with the per-side taxon sequences (top to bottom) of every
/// completion of `g` on taxa `0..n`. Stops early when `f` returns true.
pub fn for_each_completion<F>(g: &Generator, n: usize, mut f: F) -> bool
where
    F: FnMut(&[Vec<Taxon>]) -> bool,
{
    let mut seqs = vec![Vec::new(); g.sides().len()];
    place(g, n, 0, &mut seqs, &mut f)
}

fn place<F>(g: &Generator, n: usize, t: Taxon, seqs: &mut Vec<Vec<Taxon>>, f: &mut F) -> bool
where
    F: FnMut(&[Vec<Taxon>]) -> bool,
{
    if t == n {
        for side in g.sides() {
            let len = seqs[side.id].len();
            if side.is_node() && len != 1 {
                return false;
            }
            if let Some(p) = g.parallel_partner(side.id) {
                if len == 0 && seqs[p].is_empty() {
                    return false;
                }
            }
        }
        return f(seqs);
    }
    // Node sides still waiting for their taxon must be fillable.
    let waiting = g
        .sides()
        .iter()
        .filter(|s| s.is_node() && seqs[s.id].is_empty())
        .count();
    if waiting > n - t {
        return false;
    }
    for side in g.sides() {
        let len = seqs[side.id].len();
        let slots = if side.is_node() {
            if len == 0 {
                1
            } else {
                0
            }
        } else {
            len + 1
        };
        for pos in 0..slots {
            seqs[side.id].insert(pos, t);
            let stop = place(g, n, t + 1, seqs, f);
            seqs[side.id].remove(pos);
            if stop {
                return true;
            }
        }
    }
    false
}

/// Number of completions of `g` on `n` taxa.
pub fn count_completions(g: &Generator, n: usize) -> u64 {
    let mut count = 0;
    for_each_completion(g, n, |_| {
        count += 1;
        false
    });
    count
}

/// The leaf-hung DAG; the fake root, if any, is still present.
fn hang(g: &Generator, seqs: &[Vec<Taxon>]) -> RawDag {
    let mut dag = RawDag::with_capacity(g.node_count() + 2 * seqs.iter().map(Vec::len).sum::<usize>());
    for _ in 0..g.node_count() {
        dag.add_node(None);
    }
    dag.root = g.root();
    for side in g.sides() {
        match side.kind {
            SideKind::Edge { tail, head, .. } => {
                let mut prev = tail;
                for &t in &seqs[side.id] {
                    let w = dag.add_node(None);
                    dag.add_edge(prev, w);
                    let leaf = dag.add_node(Some(t));
                    dag.add_edge(w, leaf);
                    prev = w;
                }
                dag.add_edge(prev, head);
            }
            SideKind::Node(v) => {
                let leaf = dag.add_node(Some(seqs[side.id][0]));
                dag.add_edge(v, leaf);
            }
        }
    }
    dag
}

/// Every completion of `g` on the taxa of `universe`, as validated networks.
pub fn enumerate_completions(g: &Generator, universe: &Arc<TaxonUniverse>) -> Vec<Network> {
    let mut out = Vec::new();
    for_each_completion(g, universe.len(), |seqs| {
        let (dag, _) = hang(g, seqs).normalize();
        let net = dag.into_network(universe).expect("completions are valid networks");
        debug_assert!(net.is_binary());
        debug_assert!(g.kind() != GeneratorKind::Level || net.is_simple());
        out.push(net);
        false
    });
    out
}

/// Counts completions of generators of `kind` with parameter `k` that
/// represent `cs`: `(witnesses, enumerated, first witness)`.
fn scan_parameter(
    cs: &ClusterSet,
    kind: GeneratorKind,
    k: usize,
    config: &OracleConfig,
) -> Result<(u64, u64, Option<Network>), OracleError> {
    let n = cs.n();
    if cs.len() as u128 > softwired_bound(k, n) {
        return Ok((0, 0, None));
    }
    let generators = GeneratorCache::global().get(kind, k, config.parameter_limit)?;
    let targets = ClusterTargets::new(cs.clusters().iter().filter(|c| c.len() >= 2));
    let (mut hits, mut seen) = (0u64, 0u64);
    let mut first = None;
    for g in generators.iter() {
        let stop = for_each_completion(g, n, |seqs| {
            seen += 1;
            let dag = hang(g, seqs);
            if targets.all_hit(&SwitchingEngine::from_raw(&dag)) {
                hits += 1;
                if first.is_none() {
                    let (norm, _) = dag.normalize();
                    first = Some(norm.into_network(cs.universe()).expect("valid completion"));
                }
                return !config.count_witnesses;
            }
            false
        });
        if stop {
            break;
        }
    }
    Ok((hits, seen, first))
}

fn check_size(n: usize, cap: usize) -> Result<(), OracleError> {
    if n > cap {
        Err(OracleError::TooLarge { n, cap })
    } else {
        Ok(())
    }
}

/// Smallest `k ≤ kmax` such that a simple level-`k` network (a tree when
/// `k = 0`) represents the whole set.
pub fn oracle_simple_level(cs: &ClusterSet, kmax: usize, config: &OracleConfig) -> Result<OracleResult, OracleError> {
    check_size(cs.n(), config.max_component_taxa)?;
    simple_minimum(cs, GeneratorKind::Level, kmax, config).map(|(r, _)| r)
}

/// Smallest `r ≤ rmax` such that a completion of an `r`-reticulation
/// generator (a tree when `r = 0`) represents the whole set.
pub fn oracle_simple_reticulation(
    cs: &ClusterSet,
    rmax: usize,
    config: &OracleConfig,
) -> Result<OracleResult, OracleError> {
    check_size(cs.n(), config.max_component_taxa)?;
    simple_minimum(cs, GeneratorKind::Reticulation, rmax, config).map(|(r, _)| r)
}

fn simple_minimum(
    cs: &ClusterSet,
    kind: GeneratorKind,
    kmax: usize,
    config: &OracleConfig,
) -> Result<(OracleResult, Option<Network>), OracleError> {
    let mut result = OracleResult::default();
    if cs.is_pairwise_compatible() {
        result.minimum = Some(0);
        result.witnesses_found = 1;
        return Ok((result, None));
    }
    for k in 1..=kmax {
        let (hits, seen, witness) = scan_parameter(cs, kind, k, config)?;
        result.enumerated += seen;
        if hits > 0 {
            result.minimum = Some(k);
            result.witnesses_found = hits;
            return Ok((result, witness));
        }
    }
    Ok((result, None))
}

/// Minimum level of any network representing `cs`, taken component by
/// component of the incompatibility graph after making each separating.
pub fn oracle_min_level(cs: &ClusterSet, kmax: usize, config: &OracleConfig) -> Result<OracleResult, OracleError> {
    check_size(cs.n(), config.max_taxa)?;
    let mut result = OracleResult {
        minimum: Some(0),
        witnesses_found: 1,
        enumerated: 0,
    };
    let graph = cs.incompatibility_graph();
    for comp in graph.nontrivial_components() {
        let (sep, _) = cs.component_set(comp).make_separating()?;
        let local = oracle_simple_level(&sep, kmax, config)?;
        result.enumerated += local.enumerated;
        match (result.minimum, local.minimum) {
            (Some(a), Some(b)) if b > a => {
                result.minimum = Some(b);
                result.witnesses_found = local.witnesses_found;
            }
            (Some(a), Some(b)) if b == a && b > 0 => {
                result.witnesses_found = result.witnesses_found.min(local.witnesses_found);
            }
            (_, None) => result.minimum = None,
            _ => {}
        }
        if result.minimum.is_none() {
            result.witnesses_found = 0;
            break;
        }
    }
    Ok(result)
}

/// Minimum reticulation number of any network representing `cs`.
///
/// Every such network is a completion of a reticulation generator whose
/// leaves carry tree-shaped pendant subnetworks, and the leaf sets of those
/// subnetworks are ST-sets. So each partition of `X` into ST-sets is
/// collapsed and its completions searched; the maximal ST-set partition is
/// not assumed to be optimal.
pub fn oracle_min_reticulation(
    cs: &ClusterSet,
    rmax: usize,
    config: &OracleConfig,
) -> Result<OracleResult, OracleError> {
    check_size(cs.n(), config.max_taxa)?;
    let mut result = OracleResult::default();
    if cs.is_pairwise_compatible() {
        result.minimum = Some(0);
        result.witnesses_found = 1;
        return Ok(result);
    }
    let mut partitions = st_partitions(cs);
    // Coarse partitions are small to enumerate and usually hold a witness.
    partitions.sort_by_key(Vec::len);
    let collapsed: Vec<ClusterSet> = partitions
        .iter()
        .map(|p| cs.collapse_blocks(p).0)
        .filter(|c| c.n() <= config.max_component_taxa)
        .collect();
    for r in 1..=rmax {
        let mut hits = 0;
        for c in &collapsed {
            let (h, seen, _) = scan_parameter(c, GeneratorKind::Reticulation, r, config)?;
            result.enumerated += seen;
            hits += h;
            if h > 0 && !config.count_witnesses {
                break;
            }
        }
        if hits > 0 {
            result.minimum = Some(r);
            result.witnesses_found = hits;
            return Ok(result);
        }
    }
    Ok(result)
}

/// All partitions of the universe into ST-sets.
fn st_partitions(cs: &ClusterSet) -> Vec<Vec<TaxonSet>> {
    let n = cs.n();
    let mut out = Vec::new();
    let mut blocks: Vec<TaxonSet> = Vec::new();
    partition_rec(cs, n, 0, &mut blocks, &mut out);
    out
}

fn partition_rec(cs: &ClusterSet, n: usize, t: Taxon, blocks: &mut Vec<TaxonSet>, out: &mut Vec<Vec<TaxonSet>>) {
    if t == n {
        // Subsets of ST-sets need not be ST-sets, so blocks are only
        // checked once complete.
        if blocks.iter().all(|b| b.len() == 1 || (b.len() < n && cs.is_st_set(b))) {
            out.push(blocks.clone());
        }
        return;
    }
    for i in 0..blocks.len() {
        blocks[i].insert(t);
        partition_rec(cs, n, t + 1, blocks, out);
        blocks[i].remove(t);
    }
    blocks.push(TaxonSet::singleton(t));
    partition_rec(cs, n, t + 1, blocks, out);
    blocks.pop();
}
