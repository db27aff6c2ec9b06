//! Top-level minimization. Level queries are split by incompatibility
//! component and the local simple networks merged back; reticulation
//! queries run on the whole ST-collapsed set.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::clusters::{ClusterSet, Expansion};
use crate::error::AssemblyError;
use crate::network::{softwired_bound, tree_from_hierarchy, Network, RawDag};
use crate::solver::{solve_simple_level, solve_simple_reticulation, SolveStats, SolveStatus, SolverConfig};
use crate::taxa::{Taxon, TaxonSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Level,
    Reticulation,
}

/// `2^(k+3) (n-1)^2`, the most clusters a decomposable level-`k` network shows.
pub fn level_bound(k: usize, n: usize) -> u128 {
    if k >= 100 {
        return u128::MAX;
    }
    let m = n.saturating_sub(1) as u128;
    (1u128 << (k + 3)).saturating_mul(m * m)
}

/// False when `cs` has more clusters than any network with parameter `k`
/// can represent.
pub fn prefilter(cs: &ClusterSet, k: usize, mode: Mode) -> bool {
    let bound = match mode {
        Mode::Level => level_bound(k, cs.n()),
        Mode::Reticulation => softwired_bound(k, cs.n()),
    };
    cs.len() as u128 <= bound
}

/// One nontrivial incompatibility component.
#[derive(Clone, Debug)]
pub struct ComponentPlan {
    /// Indices into the input clusters.
    pub clusters: Vec<usize>,
    pub span: TaxonSet,
    /// The component made separating, over meta-taxa.
    pub separating: ClusterSet,
    pub expansion: Expansion,
}

#[derive(Clone, Debug)]
pub struct DecompositionPlan {
    pub components: Vec<ComponentPlan>,
    /// Tree of the backbone clusters (component spans and compatible clusters).
    pub backbone: Network,
    /// Compatible clusters of size at least two.
    pub free: Vec<TaxonSet>,
}

impl DecompositionPlan {
    pub fn new(cs: &ClusterSet) -> Result<Self, AssemblyError> {
        let graph = cs.incompatibility_graph();
        let mut components = Vec::new();
        let mut free = Vec::new();
        for comp in &graph.components {
            if comp.len() == 1 {
                let c = &cs.clusters()[comp[0]];
                if c.len() >= 2 {
                    free.push(c.clone());
                }
                continue;
            }
            let local = cs.component_set(comp);
            let (separating, expansion) = local.make_separating()?;
            let span = comp.iter().fold(TaxonSet::new(), |mut acc, &i| {
                acc.union_with(&cs.clusters()[i]);
                acc
            });
            components.push(ComponentPlan {
                clusters: comp.clone(),
                span,
                separating,
                expansion,
            });
        }
        let n = cs.n();
        let all = cs.universe().all();
        let mut backbone: Vec<TaxonSet> = cs
            .backbone_clusters()
            .into_iter()
            .filter(|b| b.len() < n)
            .collect();
        backbone.extend((0..n).map(TaxonSet::singleton));
        backbone.sort();
        backbone.dedup();
        debug_assert!(backbone.iter().all(|b| b.is_subset(&all)));
        let backbone = tree_from_hierarchy(&ClusterSet::new(cs.universe().clone(), backbone)?)?;
        Ok(DecompositionPlan {
            components,
            backbone,
            free,
        })
    }
}

/// Joins one simple network per component into a network over the input
/// taxa. Every meta-taxon leaf is replaced by a subtree for its block,
/// which may itself contain nested components.
pub fn merge_local_networks(
    cs: &ClusterSet,
    plan: &DecompositionPlan,
    locals: &[Network],
) -> Result<Network, AssemblyError> {
    assert_eq!(plan.components.len(), locals.len(), "one local network per component");
    let mut merger = Merger {
        cs,
        plan,
        locals,
        dag: RawDag::with_capacity(4 * cs.n()),
    };
    let root = merger.build(&cs.universe().all());
    let mut dag = merger.dag;
    dag.root = root;
    let (dag, _) = dag.normalize();
    let net = dag.into_network(cs.universe())?;
    let missing = net.unrepresented(cs).len();
    if missing > 0 {
        return Err(AssemblyError::MergeFailed(missing));
    }
    Ok(net)
}

struct Merger<'a> {
    cs: &'a ClusterSet,
    plan: &'a DecompositionPlan,
    locals: &'a [Network],
    dag: RawDag,
}

impl Merger<'_> {
    fn build(&mut self, s: &TaxonSet) -> usize {
        if s.len() == 1 {
            return self.dag.add_node(s.first());
        }
        if let Some(i) = self.plan.components.iter().position(|c| &c.span == s) {
            return self.embed(i);
        }
        // Spans and free clusters form a laminar family; take the maximal
        // members strictly inside `s`.
        let inside: Vec<&TaxonSet> = self
            .plan
            .components
            .iter()
            .map(|c| &c.span)
            .chain(self.plan.free.iter())
            .filter(|t| t.len() < s.len() && t.is_subset(s))
            .collect();
        let mut tops: Vec<TaxonSet> = inside
            .iter()
            .filter(|t| !inside.iter().any(|u| u.len() > t.len() && t.is_subset(u)))
            .map(|t| (*t).clone())
            .collect();
        tops.sort();
        tops.dedup();
        let covered = tops.iter().fold(TaxonSet::new(), |mut acc, t| {
            acc.union_with(t);
            acc
        });
        tops.extend(s.difference(&covered).iter().map(TaxonSet::singleton));
        let children: Vec<usize> = tops.iter().map(|t| self.build(t)).collect();
        self.caterpillar(&children)
    }

    fn caterpillar(&mut self, children: &[usize]) -> usize {
        let mut acc = children[0];
        for &c in &children[1..] {
            let v = self.dag.add_node(None);
            self.dag.add_edge(v, acc);
            self.dag.add_edge(v, c);
            acc = v;
        }
        acc
    }

    fn embed(&mut self, i: usize) -> usize {
        let comp = &self.plan.components[i];
        let local = &self.locals[i];
        let blocks: HashMap<&str, &TaxonSet> = comp
            .expansion
            .blocks
            .iter()
            .map(|b| (b.label.as_str(), &b.members))
            .collect();
        let mut id = vec![usize::MAX; local.node_count()];
        for v in 0..local.node_count() {
            id[v] = match local.taxon(v) {
                Some(t) => {
                    let name = local.universe().name(t);
                    match blocks.get(name) {
                        Some(members) => {
                            let members = self.block_in_input(comp, members);
                            self.build(&members)
                        }
                        None => {
                            let x = self.input_taxon(name);
                            self.dag.add_node(Some(x))
                        }
                    }
                }
                None => self.dag.add_node(None),
            };
        }
        for v in 0..local.node_count() {
            for &w in local.children(v) {
                self.dag.add_edge(id[v], id[w]);
            }
        }
        id[local.root()]
    }

    fn input_taxon(&self, name: &str) -> Taxon {
        self.cs.universe().id(name).expect("local taxa come from the input")
    }

    /// Block members are ids of the component's sub-universe.
    fn block_in_input(&self, comp: &ComponentPlan, members: &TaxonSet) -> TaxonSet {
        let sub: Vec<Taxon> = comp.span.to_vec();
        members.iter().map(|t| sub[t]).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinimizeStatus {
    Found,
    /// Every parameter up to the limit was refuted exhaustively.
    RefutedUpToLimit,
    /// Some query below the limit ran out of budget.
    Inconclusive,
}

/// How the query for one parameter value ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ParameterOutcome {
    pub parameter: usize,
    pub status: SolveStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimizeReport {
    pub mode: Mode,
    /// The smallest parameter with a witness.
    pub parameter: Option<usize>,
    pub status: MinimizeStatus,
    #[serde(skip)]
    pub witness: Option<Network>,
    /// One entry per parameter value queried, in order.
    pub outcomes: Vec<ParameterOutcome>,
    pub witness_level: Option<usize>,
    pub witness_reticulation: Option<usize>,
    pub components: usize,
    pub stats: SolveStats,
}

impl MinimizeReport {
    /// True when every parameter below the answer was refuted exhaustively.
    pub fn is_exact(&self) -> bool {
        self.status == MinimizeStatus::Found
            && self
                .outcomes
                .iter()
                .filter(|o| Some(o.parameter) < self.parameter)
                .all(|o| o.status == SolveStatus::Refuted)
    }

    fn finish(mode: Mode, outcomes: Vec<ParameterOutcome>, witness: Option<Network>, components: usize, stats: SolveStats) -> Self {
        let parameter = outcomes.iter().find(|o| o.status == SolveStatus::Found).map(|o| o.parameter);
        let status = if witness.is_some() {
            MinimizeStatus::Found
        } else if outcomes.iter().all(|o| o.status == SolveStatus::Refuted) {
            MinimizeStatus::RefutedUpToLimit
        } else {
            MinimizeStatus::Inconclusive
        };
        MinimizeReport {
            mode,
            parameter,
            status,
            witness_level: witness.as_ref().map(Network::level),
            witness_reticulation: witness.as_ref().map(Network::reticulation_number),
            witness,
            outcomes,
            components,
            stats,
        }
    }
}

pub fn minimize(cs: &ClusterSet, mode: Mode, config: &SolverConfig) -> Result<MinimizeReport, AssemblyError> {
    match mode {
        Mode::Level => minimize_level(cs, config),
        Mode::Reticulation => minimize_reticulation(cs, config),
    }
}

fn tree_report(cs: &ClusterSet, mode: Mode) -> Result<MinimizeReport, AssemblyError> {
    let tree = tree_from_hierarchy(cs)?;
    let outcomes = vec![ParameterOutcome {
        parameter: 0,
        status: SolveStatus::Found,
    }];
    Ok(MinimizeReport::finish(mode, outcomes, Some(tree), 0, SolveStats::default()))
}

/// Smallest `k` such that a level-`k` network represents `cs`, with a witness.
///
/// Each component is minimized on its own and the answer is the largest
/// local minimum; the global query for `k` succeeds exactly when every
/// component succeeds at some value up to `k`.
pub fn minimize_level(cs: &ClusterSet, config: &SolverConfig) -> Result<MinimizeReport, AssemblyError> {
    if cs.is_pairwise_compatible() {
        return tree_report(cs, Mode::Level);
    }
    let plan = DecompositionPlan::new(cs)?;
    let limit = config.parameter_limit;
    let solved: Vec<ComponentOutcome> = if config.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            plan.components
                .par_iter()
                .map(|c| solve_component(cs, c, config))
                .collect::<Result<_, _>>()
        })?
    } else {
        plan.components
            .iter()
            .map(|c| solve_component(cs, c, config))
            .collect::<Result<_, _>>()?
    };
    let mut stats = SolveStats::default();
    // Per parameter: did some component refute it exhaustively, or only by budget?
    let mut refuted = vec![false; limit + 1];
    let mut inconclusive = vec![false; limit + 1];
    let mut locals = Vec::with_capacity(solved.len());
    let mut unsolved = false;
    for outcome in solved {
        stats.absorb(&outcome.stats);
        for o in &outcome.outcomes {
            match o.status {
                SolveStatus::Refuted => refuted[o.parameter] = true,
                SolveStatus::Inconclusive => inconclusive[o.parameter] = true,
                SolveStatus::Found => {}
            }
        }
        match outcome.witness {
            Some(w) => locals.push(w),
            None => unsolved = true,
        }
    }
    let answer = locals.iter().map(Network::level).max();
    let mut outcomes = vec![ParameterOutcome {
        parameter: 0,
        status: SolveStatus::Refuted,
    }];
    let top = if unsolved { limit } else { answer.unwrap_or(0) };
    for k in 1..=top {
        let status = if !unsolved && k == top {
            SolveStatus::Found
        } else if refuted[k] {
            SolveStatus::Refuted
        } else if inconclusive[k] {
            SolveStatus::Inconclusive
        } else {
            // Every component found a witness at a larger value after an
            // exhaustive refutation here, so some component refuted it.
            SolveStatus::Refuted
        };
        outcomes.push(ParameterOutcome { parameter: k, status });
    }
    let witness = if unsolved {
        None
    } else {
        Some(merge_local_networks(cs, &plan, &locals)?)
    };
    Ok(MinimizeReport::finish(Mode::Level, outcomes, witness, plan.components.len(), stats))
}

struct ComponentOutcome {
    witness: Option<Network>,
    outcomes: Vec<ParameterOutcome>,
    stats: SolveStats,
}

fn solve_component(cs: &ClusterSet, comp: &ComponentPlan, config: &SolverConfig) -> Result<ComponentOutcome, AssemblyError> {
    let mut out = ComponentOutcome {
        witness: None,
        outcomes: Vec::new(),
        stats: SolveStats::default(),
    };
    for k in 1..=config.parameter_limit {
        let status = if !prefilter(cs, k, Mode::Level) {
            SolveStatus::Refuted
        } else {
            let report = solve_simple_level(&comp.separating, k, config)?;
            out.stats.absorb(&report.stats);
            out.witness = report.witness;
            report.status
        };
        out.outcomes.push(ParameterOutcome { parameter: k, status });
        if out.witness.is_some() {
            break;
        }
    }
    Ok(out)
}

/// Smallest `r` such that a network with `r` reticulations represents `cs`.
pub fn minimize_reticulation(cs: &ClusterSet, config: &SolverConfig) -> Result<MinimizeReport, AssemblyError> {
    if cs.is_pairwise_compatible() {
        return tree_report(cs, Mode::Reticulation);
    }
    let (collapsed, expansion) = cs.st_collapse();
    let mut stats = SolveStats::default();
    let mut outcomes = vec![ParameterOutcome {
        parameter: 0,
        status: SolveStatus::Refuted,
    }];
    let mut witness = None;
    for r in 1..=config.parameter_limit {
        if !prefilter(&collapsed, r, Mode::Reticulation) {
            outcomes.push(ParameterOutcome {
                parameter: r,
                status: SolveStatus::Refuted,
            });
            continue;
        }
        let report = solve_simple_reticulation(&collapsed, r, config)?;
        stats.absorb(&report.stats);
        outcomes.push(ParameterOutcome {
            parameter: r,
            status: report.status,
        });
        if let Some(w) = report.witness {
            let full = expansion.expand(&w, cs.universe());
            let missing = full.unrepresented(cs).len();
            if missing > 0 {
                return Err(AssemblyError::MergeFailed(missing));
            }
            witness = Some(full);
            break;
        }
    }
    Ok(MinimizeReport::finish(Mode::Reticulation, outcomes, witness, 1, stats))
}
