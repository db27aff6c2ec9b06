//! The leaf-hanging search: incomplete networks over a generator, side
//! guesses, the add-on-side step, side completion and the driver that
//! answers "is there a simple network with parameter k?".

use std::collections::HashSet;
use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;

use crate::clusters::{implies_table, ClusterSet};
use crate::error::SolverError;
use crate::generators::{Generator, GeneratorCache, GeneratorKind, SideKind, DEFAULT_PARAMETER_LIMIT};
use crate::network::{softwired_bound, ClusterTargets, Network, RawDag, SwitchingEngine};
use crate::taxa::{Taxon, TaxonSet};

/// Default cap on search branches before a query is declared inconclusive.
pub const DEFAULT_BRANCH_CAP: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SideClass {
    Empty,
    Short,
    Long,
}

/// One class per side of a generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SideGuess {
    classes: Vec<SideClass>,
}

impl SideGuess {
    pub fn new(classes: Vec<SideClass>) -> Self {
        SideGuess { classes }
    }

    pub fn classes(&self) -> &[SideClass] {
        &self.classes
    }

    pub fn class(&self, side: usize) -> SideClass {
        self.classes[side]
    }

    pub fn long_count(&self) -> usize {
        self.classes.iter().filter(|&&c| c == SideClass::Long).count()
    }

    pub fn short_count(&self) -> usize {
        self.classes.iter().filter(|&&c| c == SideClass::Short).count()
    }

    /// Node sides short, parallel pairs not both empty, and room for `n` taxa.
    pub fn is_valid_for(&self, g: &Generator, n: usize) -> bool {
        for side in g.sides() {
            let c = self.classes[side.id];
            if side.is_node() && c != SideClass::Short {
                return false;
            }
            if let Some(p) = g.parallel_partner(side.id) {
                if c == SideClass::Empty && self.classes[p] == SideClass::Empty {
                    return false;
                }
            }
        }
        let (long, short) = (self.long_count(), self.short_count());
        if long == 0 {
            short == n
        } else {
            short + 2 * long <= n
        }
    }
}

/// All valid guesses for placing `n` taxa on `g`, by number of long sides,
/// then short sides, then lexicographically (empty < short < long).
///
/// The two copies of a doubled edge are interchangeable, so only guesses
/// giving the lower-numbered copy the larger class are kept.
pub fn iterate_guesses(g: &Generator, n: usize) -> Vec<SideGuess> {
    let mut out = Vec::new();
    for (long, short) in guess_shapes(n) {
        for_each_guess(g, n, long, short, |guess| {
            out.push(guess);
            false
        });
    }
    out
}

/// `(long, short)` counts a guess on `n` taxa can have, in search order.
fn guess_shapes(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=n / 2).flat_map(move |long| {
        let shorts = if long == 0 { n..=n } else { 0..=n - 2 * long };
        shorts.map(move |short| (long, short))
    })
}

/// Calls `f` on the valid guesses with exactly `long` long and `short`
/// short sides, in lexicographic order, until it returns true.
fn for_each_guess<F: FnMut(SideGuess) -> bool>(g: &Generator, n: usize, long: usize, short: usize, mut f: F) -> bool {
    let mut classes = vec![SideClass::Empty; g.sides().len()];
    fill_guesses(g, n, 0, (long, short), &mut classes, &mut f)
}

fn fill_guesses<F: FnMut(SideGuess) -> bool>(
    g: &Generator,
    n: usize,
    i: usize,
    left: (usize, usize),
    classes: &mut Vec<SideClass>,
    f: &mut F,
) -> bool {
    if i == classes.len() {
        if left != (0, 0) {
            return false;
        }
        let guess = SideGuess::new(classes.clone());
        return guess.is_valid_for(g, n) && f(guess);
    }
    if left.0 + left.1 > classes.len() - i {
        return false;
    }
    let options: &[SideClass] = if g.side(i).is_node() {
        &[SideClass::Short]
    } else {
        &[SideClass::Empty, SideClass::Short, SideClass::Long]
    };
    for &c in options {
        if let Some(p) = g.parallel_partner(i) {
            if p < i && classes[p] < c {
                continue;
            }
        }
        let next = match c {
            SideClass::Empty => left,
            SideClass::Short if left.1 > 0 => (left.0, left.1 - 1),
            SideClass::Long if left.0 > 0 => (left.0 - 1, left.1),
            _ => continue,
        };
        classes[i] = c;
        if fill_guesses(g, n, i + 1, next, classes, f) {
            return true;
        }
    }
    classes[i] = SideClass::Empty;
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SideStatus {
    /// Non-empty guess, nothing placed yet.
    Future,
    /// Long side being filled from the bottom up.
    Active,
    Finished,
}

/// A finished long side replaced by one meta-taxon.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CollapseRecord {
    pub side: usize,
    pub meta: Taxon,
    /// Taxa of the side, top to bottom.
    pub taxa: Vec<Taxon>,
}

/// The cluster set as seen by the search, over extended ids: input taxa
/// `0..n`, meta-taxa `n + side`, and dummies after those.
#[derive(Debug)]
struct Working {
    clusters: Vec<TaxonSet>,
    implies: Vec<TaxonSet>,
}

impl Working {
    fn new(clusters: Vec<TaxonSet>, alive: &TaxonSet, size: usize) -> Self {
        let implies = implies_table(&clusters, alive, size);
        Working { clusters, implies }
    }
}

/// A generator with a side guess and the taxa placed so far.
#[derive(Clone, Debug)]
pub struct IncompleteNetwork {
    generator: Arc<Generator>,
    guess: SideGuess,
    n: usize,
    /// Per side, top to bottom.
    seqs: Vec<Vec<Taxon>>,
    status: Vec<SideStatus>,
    /// Taxa on sides, meta-taxa included.
    placed: TaxonSet,
    /// Input taxa neither placed nor collapsed.
    unplaced: TaxonSet,
    working: Arc<Working>,
    collapsed: Vec<CollapseRecord>,
}

impl IncompleteNetwork {
    /// Nothing placed; empty sides start finished.
    pub fn new(generator: Arc<Generator>, guess: SideGuess, clusters: &ClusterSet) -> Self {
        let n = clusters.n();
        let m = generator.sides().len();
        let status = (0..m)
            .map(|s| {
                if guess.class(s) == SideClass::Empty {
                    SideStatus::Finished
                } else {
                    SideStatus::Future
                }
            })
            .collect();
        let all = TaxonSet::full(n);
        let working = Working::new(clusters.clusters().to_vec(), &all, n + 2 * m);
        IncompleteNetwork {
            generator,
            guess,
            n,
            seqs: vec![Vec::new(); m],
            status,
            placed: TaxonSet::new(),
            unplaced: all,
            working: Arc::new(working),
            collapsed: Vec::new(),
        }
    }

    pub fn generator(&self) -> &Arc<Generator> {
        &self.generator
    }

    pub fn guess(&self) -> &SideGuess {
        &self.guess
    }

    pub fn placements(&self, side: usize) -> &[Taxon] {
        &self.seqs[side]
    }

    pub fn status(&self, side: usize) -> SideStatus {
        self.status[side]
    }

    pub fn active_side(&self) -> Option<usize> {
        self.status.iter().position(|&s| s == SideStatus::Active)
    }

    pub fn placed(&self) -> &TaxonSet {
        &self.placed
    }

    pub fn unplaced(&self) -> &TaxonSet {
        &self.unplaced
    }

    pub fn collapsed(&self) -> &[CollapseRecord] {
        &self.collapsed
    }

    /// Current clusters, meta-taxa substituted for collapsed sides.
    pub fn working_clusters(&self) -> &[TaxonSet] {
        &self.working.clusters
    }

    fn side_count(&self) -> usize {
        self.seqs.len()
    }

    fn meta_id(&self, side: usize) -> Taxon {
        self.n + side
    }

    fn dummy_id(&self, i: usize) -> Taxon {
        self.n + self.side_count() + i
    }

    fn implies(&self, x: Taxon, y: Taxon) -> bool {
        self.working.implies[x].contains(y)
    }

    /// `N(l,s)`: `l` becomes the only taxon of a short side, or the new top
    /// taxon of a long side.
    pub fn hang_taxon(&self, l: Taxon, s: usize) -> Result<Self, SolverError> {
        if !self.unplaced.contains(l) {
            return Err(SolverError::AlreadyPlaced(l));
        }
        if self.status[s] == SideStatus::Finished {
            return Err(match self.guess.class(s) {
                SideClass::Short => SolverError::ShortSideOccupied(s),
                _ => SolverError::SideClosed(s),
            });
        }
        let mut next = self.clone();
        next.unplaced.remove(l);
        next.placed.insert(l);
        next.seqs[s].insert(0, l);
        next.status[s] = match self.guess.class(s) {
            SideClass::Short => SideStatus::Finished,
            _ => SideStatus::Active,
        };
        Ok(next)
    }

    fn hang(&self, l: Taxon, s: usize) -> Self {
        self.hang_taxon(l, s).expect("hang on an open side")
    }

    fn finish(&self, s: usize) -> Self {
        let mut next = self.clone();
        next.status[s] = SideStatus::Finished;
        next
    }

    /// Open sides other than `s` reachable from `s`.
    fn open_below(&self, s: usize) -> Vec<usize> {
        (0..self.side_count())
            .filter(|&t| t != s && self.status[t] != SideStatus::Finished)
            .filter(|&t| self.generator.side_reachable(s, t))
            .collect()
    }

    /// Unfinished long sides that reach no other unfinished long side.
    pub fn lowest_sides(&self) -> Vec<usize> {
        let open: Vec<usize> = (0..self.side_count())
            .filter(|&s| self.guess.class(s) == SideClass::Long && self.status[s] != SideStatus::Finished)
            .collect();
        open.iter()
            .copied()
            .filter(|&s| !open.iter().any(|&t| t != s && self.generator.side_reachable(s, t)))
            .collect()
    }

    /// Skeleton plus placed taxa, plus `extra` single taxa on sides. Sides
    /// without taxa stay bare edges; unfilled node sides become sinks.
    fn materialize(&self, extra: &[(usize, Taxon)]) -> RawDag {
        let g = &self.generator;
        let mut dag = RawDag::with_capacity(g.node_count() + 2 * (self.placed.len() + extra.len()));
        for _ in 0..g.node_count() {
            dag.add_node(None);
        }
        dag.root = g.root();
        for side in g.sides() {
            let mut seq: Vec<Taxon> = self.seqs[side.id].clone();
            for &(s, t) in extra {
                if s == side.id {
                    seq.insert(0, t);
                }
            }
            match side.kind {
                SideKind::Edge { tail, head, .. } => {
                    let mut prev = tail;
                    for &t in &seq {
                        let w = dag.add_node(None);
                        dag.add_edge(prev, w);
                        let leaf = dag.add_node(Some(t));
                        dag.add_edge(w, leaf);
                        prev = w;
                    }
                    dag.add_edge(prev, head);
                }
                SideKind::Node(v) => {
                    for &t in &seq {
                        let leaf = dag.add_node(Some(t));
                        dag.add_edge(v, leaf);
                    }
                }
            }
        }
        dag
    }

    /// Does the materialized network, with `extra` taxa added, represent
    /// every cluster restricted to its leaves?
    fn represents_restricted(&self, extra: &[(usize, Taxon)], stats: &mut SolveStats) -> bool {
        let mut leaves = self.placed.clone();
        for &(_, t) in extra {
            leaves.insert(t);
        }
        let restricted: Vec<TaxonSet> = self
            .working
            .clusters
            .iter()
            .map(|c| c.intersection(&leaves))
            .filter(|c| c.len() >= 2 && c.len() < leaves.len())
            .collect();
        self.represents_sets(extra, &restricted, stats)
    }

    fn represents_sets(&self, extra: &[(usize, Taxon)], sets: &[TaxonSet], stats: &mut SolveStats) -> bool {
        let sets: Vec<&TaxonSet> = sets.iter().filter(|c| c.len() >= 2).collect();
        if sets.is_empty() {
            return true;
        }
        stats.representation_checks += 1;
        let dag = self.materialize(extra);
        ClusterTargets::new(sets).all_hit(&SwitchingEngine::from_raw(&dag))
    }

    /// Every injective placement of `taxa` on the sides `onto`, each of which
    /// must be an open short side.
    fn allocations(&self, taxa: &[Taxon], onto: &[usize]) -> Vec<IncompleteNetwork> {
        if taxa.len() > onto.len() {
            return Vec::new();
        }
        onto.iter()
            .copied()
            .permutations(taxa.len())
            .map(|sides| {
                let mut net = self.clone();
                for (&t, &s) in taxa.iter().zip(&sides) {
                    debug_assert_eq!(self.guess.class(s), SideClass::Short);
                    net = net.hang(t, s);
                }
                net
            })
            .collect()
    }

    fn state_key(&self) -> (Vec<Vec<Taxon>>, Vec<SideStatus>) {
        (self.seqs.clone(), self.status.clone())
    }

    /// All input taxa placed, every short side filled, every long side holding
    /// at least two taxa (meta-taxa expanded).
    fn is_complete(&self) -> bool {
        self.unplaced.is_empty()
            && (0..self.side_count()).all(|s| match self.guess.class(s) {
                SideClass::Empty => self.seqs[s].is_empty(),
                SideClass::Short => self.seqs[s].len() == 1,
                SideClass::Long => self.expanded(s).len() >= 2,
            })
    }

    fn expanded(&self, s: usize) -> Vec<Taxon> {
        let mut out = Vec::new();
        for &t in &self.seqs[s] {
            match self.collapsed.iter().find(|r| r.meta == t) {
                Some(r) => out.extend(&r.taxa),
                None => out.push(t),
            }
        }
        out
    }

    /// Undoes every collapse.
    pub fn decollapse(&self) -> IncompleteNetwork {
        let mut next = self.clone();
        for s in 0..self.side_count() {
            next.seqs[s] = self.expanded(s);
        }
        next.placed = next.seqs.iter().flatten().copied().collect();
        next.collapsed.clear();
        next
    }

    /// The network over the input universe; the fake root of a reticulation
    /// generator is dropped. Needs a complete placement.
    pub fn to_network(&self, clusters: &ClusterSet) -> Result<Network, SolverError> {
        let full = self.decollapse();
        debug_assert!(full.is_complete());
        let (dag, _) = full.materialize(&[]).normalize();
        Ok(dag.into_network(clusters.universe())?)
    }
}

/// Counters reported with every query.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub generators_tried: u64,
    pub guesses_tried: u64,
    pub branches: u64,
    pub representation_checks: u64,
    pub completions_checked: u64,
    /// Clusters holding part of a finished side together with taxa off it.
    pub straddling_clusters: u64,
}

impl SolveStats {
    pub fn absorb(&mut self, other: &SolveStats) {
        self.generators_tried += other.generators_tried;
        self.guesses_tried += other.guesses_tried;
        self.branches += other.branches;
        self.representation_checks += other.representation_checks;
        self.completions_checked += other.completions_checked;
        self.straddling_clusters += other.straddling_clusters;
    }
}

/// `addOnSide(N, s)`: decide whether to stop the active side `s` or add a
/// taxon above its top, possibly putting taxa on open short sides below.
pub fn add_on_side(net: &IncompleteNetwork, s: usize, stats: &mut SolveStats) -> Vec<IncompleteNetwork> {
    assert_eq!(net.status(s), SideStatus::Active, "side {s} is not active");
    debug_assert!(
        (0..net.side_count()).all(|t| t == s
            || net.guess.class(t) != SideClass::Long
            || net.status[t] == SideStatus::Finished
            || !net.generator.side_reachable(s, t)),
        "a long side below the active side is unfinished"
    );
    let xi = net.seqs[s][0];
    let free = net.unplaced.to_vec();
    let l_all: Vec<Taxon> = free.iter().copied().filter(|&l| net.implies(l, xi)).collect();
    let l_min: Vec<Taxon> = l_all
        .iter()
        .copied()
        .filter(|&l| !l_all.iter().any(|&o| o != l && net.implies(l, o)))
        .collect();
    debug_assert!(l_all.is_empty() || !l_min.is_empty());
    let u = net.open_below(s);
    let before = u.len();
    let b_of = |l: Taxon| -> TaxonSet {
        let mut span = TaxonSet::new();
        for c in net.working.clusters.iter().filter(|c| c.contains(xi) && !c.contains(l)) {
            span.union_with(c);
        }
        span.intersection(&net.unplaced)
    };
    let finished = || net.finish(s);
    let out = if u.is_empty() {
        if l_min.len() != 1 {
            vec![finished()]
        } else {
            let l = l_min[0];
            if !b_of(l).is_empty() || !net.represents_restricted(&[(s, l)], stats) {
                vec![finished()]
            } else {
                vec![net.hang(l, s)]
            }
        }
    } else if l_min.is_empty() {
        vec![finished()]
    } else if l_min.len() >= 2 {
        let mut out = vec![finished()];
        out.extend(net.allocations(&l_min, &u));
        if l_min.len() - 1 <= u.len() {
            for &l in &l_min {
                let rest: Vec<Taxon> = l_min.iter().copied().filter(|&o| o != l).collect();
                out.extend(net.hang(l, s).allocations(&rest, &u));
            }
        }
        out
    } else {
        let l = l_min[0];
        let b = b_of(l);
        let stop_or_move = || {
            let mut out = vec![finished()];
            out.extend(u.iter().map(|&t| net.hang(l, t)));
            out
        };
        if !b.is_empty() {
            let mut out = stop_or_move();
            out.extend(net.hang(l, s).allocations(&b.to_vec(), &u));
            out
        } else if !net.represents_restricted(&[(s, l)], stats) {
            stop_or_move()
        } else {
            let mut extra = vec![(s, l)];
            for (i, &t) in u.iter().enumerate() {
                extra.push((t, net.dummy_id(i)));
            }
            let star: Vec<TaxonSet> = net
                .working
                .clusters
                .iter()
                .filter(|c| c.contains(xi) && !c.contains(l) && c.is_subset(&net.placed))
                .cloned()
                .collect();
            if !net.represents_sets(&extra, &star, stats) {
                stop_or_move()
            } else {
                vec![net.hang(l, s)]
            }
        }
    };
    if u.is_empty() {
        debug_assert_eq!(out.len(), 1);
    }
    if out.len() > 1 {
        debug_assert!(out
            .iter()
            .all(|m| m.status[s] == SideStatus::Finished || m.open_below(s).len() < before));
    }
    out
}

/// `completeSide(N, s)`: applies [`add_on_side`] until `s` is finished in
/// every resulting network. Duplicate states are dropped.
pub fn complete_side(
    net: &IncompleteNetwork,
    s: usize,
    cap: u64,
    stats: &mut SolveStats,
) -> Result<Vec<IncompleteNetwork>, SolverError> {
    debug_assert_eq!(net.seqs[s].len(), 1);
    let mut done = Vec::new();
    let mut seen = HashSet::new();
    let mut stack = vec![net.clone()];
    while let Some(cur) = stack.pop() {
        if cur.status[s] == SideStatus::Finished {
            done.push(cur);
            continue;
        }
        for next in add_on_side(&cur, s, stats) {
            stats.branches += 1;
            if stats.branches > cap {
                return Err(SolverError::BudgetExhausted(cap));
            }
            if seen.insert(next.state_key()) {
                stack.push(next);
            }
        }
    }
    Ok(done)
}

/// Unplaced taxa lying in some non-singleton cluster small enough to fit on
/// the bottom of `s` and the non-empty sides below it.
pub fn candidate_first_taxa(net: &IncompleteNetwork, s: usize) -> TaxonSet {
    let below = (0..net.side_count())
        .filter(|&t| t != s && net.guess.class(t) != SideClass::Empty)
        .filter(|&t| net.generator.side_reachable(s, t))
        .count();
    let cap = 1 + below;
    let mut out = TaxonSet::new();
    for c in net.working.clusters.iter().filter(|c| c.len() >= 2 && c.len() <= cap) {
        out.union_with(&c.intersection(&net.unplaced));
    }
    out
}

/// Replaces the taxa of finished long side `s` by one meta-taxon, in the
/// placement and in every cluster.
pub fn collapse_finished_side(
    net: &IncompleteNetwork,
    s: usize,
    stats: &mut SolveStats,
) -> (IncompleteNetwork, CollapseRecord) {
    assert_eq!(net.status[s], SideStatus::Finished);
    assert_eq!(net.guess.class(s), SideClass::Long);
    let meta = net.meta_id(s);
    let side: TaxonSet = net.seqs[s].iter().copied().collect();
    let mut clusters: Vec<TaxonSet> = Vec::with_capacity(net.working.clusters.len());
    for c in &net.working.clusters {
        if c.intersects(&side) {
            let mut d = c.difference(&side);
            if !d.is_empty() && !side.is_subset(c) {
                stats.straddling_clusters += 1;
            }
            d.insert(meta);
            clusters.push(d);
        } else {
            clusters.push(c.clone());
        }
    }
    clusters.sort();
    clusters.dedup();
    let mut next = net.clone();
    next.placed.difference_with(&side);
    next.placed.insert(meta);
    let mut alive = next.placed.union(&next.unplaced);
    alive.difference_with(&side);
    let size = net.working.implies.len();
    next.working = Arc::new(Working::new(clusters, &alive, size));
    let record = CollapseRecord {
        side: s,
        meta,
        taxa: net.seqs[s].clone(),
    };
    next.seqs[s] = vec![meta];
    next.collapsed.push(record.clone());
    (next, record)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Found,
    /// The whole search space was explored without a witness.
    Refuted,
    /// The branch cap was hit first.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub parameter: usize,
    pub status: SolveStatus,
    pub witness: Option<Network>,
    pub stats: SolveStats,
}

impl SolveReport {
    pub fn found(&self) -> bool {
        self.status == SolveStatus::Found
    }
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub branch_cap: u64,
    pub parameter_limit: usize,
    /// Worker threads for independent components; 1 keeps everything on
    /// the calling thread.
    pub jobs: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            branch_cap: DEFAULT_BRANCH_CAP,
            parameter_limit: DEFAULT_PARAMETER_LIMIT,
            jobs: 1,
        }
    }
}

/// Is there a simple level-`k` network representing the separating set?
pub fn solve_simple_level(cs: &ClusterSet, k: usize, config: &SolverConfig) -> Result<SolveReport, SolverError> {
    if !cs.is_separating() {
        return Err(SolverError::NotSeparating);
    }
    solve_simple(cs, GeneratorKind::Level, k, config)
}

/// Is there a network with `r` reticulations representing the ST-collapsed
/// set?
pub fn solve_simple_reticulation(
    cs: &ClusterSet,
    r: usize,
    config: &SolverConfig,
) -> Result<SolveReport, SolverError> {
    if !cs.is_st_collapsed() {
        return Err(SolverError::NotStCollapsed);
    }
    solve_simple(cs, GeneratorKind::Reticulation, r, config)
}

fn solve_simple(
    cs: &ClusterSet,
    kind: GeneratorKind,
    k: usize,
    config: &SolverConfig,
) -> Result<SolveReport, SolverError> {
    if k == 0 {
        return Err(SolverError::ZeroParameter);
    }
    let mut stats = SolveStats::default();
    let report = |status, witness, stats| SolveReport {
        parameter: k,
        status,
        witness,
        stats,
    };
    let n = cs.n();
    if cs.len() as u128 > softwired_bound(k, n) {
        return Ok(report(SolveStatus::Refuted, None, stats));
    }
    let generators = GeneratorCache::global().get(kind, k, config.parameter_limit)?;
    let mut order: Vec<usize> = (0..generators.len()).collect();
    order.sort_by_key(|&gi| (generators[gi].sides().len(), gi));
    let mut tried = vec![false; generators.len()];
    let mut outcome: Result<Option<Network>, SolverError> = Ok(None);
    'shapes: for (long, short) in guess_shapes(n) {
        for &gi in &order {
            let stop = for_each_guess(&generators[gi], n, long, short, |guess| {
                if !tried[gi] {
                    tried[gi] = true;
                    stats.generators_tried += 1;
                }
                stats.guesses_tried += 1;
                let start = IncompleteNetwork::new(generators[gi].clone(), guess, cs);
                let mut search = Search {
                    clusters: cs,
                    cap: config.branch_cap,
                    stats: &mut stats,
                    seen: HashSet::new(),
                };
                outcome = search.tick().and_then(|_| search.run(start));
                !matches!(outcome, Ok(None))
            });
            if stop {
                break 'shapes;
            }
        }
    }
    match outcome {
        Ok(Some(witness)) => return Ok(report(SolveStatus::Found, Some(witness), stats)),
        Ok(None) => {}
        Err(SolverError::BudgetExhausted(_)) => return Ok(report(SolveStatus::Inconclusive, None, stats)),
        Err(e) => return Err(e),
    }
    Ok(report(SolveStatus::Refuted, None, stats))
}

/// Depth-first run of the main loop for one (generator, guess) pair.
struct Search<'a> {
    clusters: &'a ClusterSet,
    cap: u64,
    stats: &'a mut SolveStats,
    seen: HashSet<(Vec<Vec<Taxon>>, Vec<SideStatus>)>,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), SolverError> {
        self.stats.branches += 1;
        if self.stats.branches > self.cap {
            Err(SolverError::BudgetExhausted(self.cap))
        } else {
            Ok(())
        }
    }

    fn run(&mut self, net: IncompleteNetwork) -> Result<Option<Network>, SolverError> {
        if !self.seen.insert(net.state_key()) {
            return Ok(None);
        }
        let Some(&s) = net.lowest_sides().first() else {
            return self.finalize(&net);
        };
        for first in candidate_first_taxa(&net, s).iter() {
            self.tick()?;
            let started = net.hang(first, s);
            for done in complete_side(&started, s, self.cap, self.stats)? {
                if done.seqs[s].len() < 2 {
                    continue;
                }
                let (collapsed, _) = collapse_finished_side(&done, s, self.stats);
                if let Some(w) = self.run(collapsed)? {
                    return Ok(Some(w));
                }
            }
        }
        Ok(None)
    }

    /// Puts the leftover taxa on the open short sides in every order and
    /// checks the expanded network against the input clusters.
    fn finalize(&mut self, net: &IncompleteNetwork) -> Result<Option<Network>, SolverError> {
        let open: Vec<usize> = (0..net.side_count())
            .filter(|&t| net.status[t] == SideStatus::Future)
            .collect();
        debug_assert!(open.iter().all(|&t| net.guess.class(t) == SideClass::Short));
        let rest = net.unplaced.to_vec();
        if rest.len() != open.len() {
            return Ok(None);
        }
        let base = net.decollapse();
        let targets = ClusterTargets::new(self.clusters.clusters().iter().filter(|c| c.len() >= 2));
        for order in rest.iter().copied().permutations(rest.len()) {
            self.tick()?;
            let mut full = base.clone();
            for (&t, &side) in order.iter().zip(&open) {
                full = full.hang(t, side);
            }
            if !full.is_complete() {
                continue;
            }
            self.stats.completions_checked += 1;
            let dag = full.materialize(&[]);
            if targets.all_hit(&SwitchingEngine::from_raw(&dag)) {
                return Ok(Some(full.to_network(self.clusters)?));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
pub(crate) mod tests;
