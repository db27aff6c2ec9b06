use std::sync::Arc;

use proptest::prelude::*;

use softnet::assembly::{minimize_level, minimize_reticulation};
use softnet::network::softwired_bound;
use softnet::oracle::{oracle_min_level, oracle_min_reticulation, OracleConfig};
use softnet::random::{random_instance, RandomParams};
use softnet::solver::SolverConfig;
use softnet::{compatible, tree_from_hierarchy, ClusterSet, Network, TaxonSet, TaxonUniverse};

fn instance(n: usize, seed: u64) -> (Network, ClusterSet) {
    random_instance(&RandomParams::new(n, 2), seed).unwrap()
}

/// The same clusters with the taxa listed in another order.
fn relabel(cs: &ClusterSet, perm: &[usize]) -> ClusterSet {
    let names: Vec<String> = perm.iter().map(|&t| cs.universe().name(t).to_string()).collect();
    let universe = Arc::new(TaxonUniverse::new(names).unwrap());
    let mut position = vec![0; perm.len()];
    for (i, &t) in perm.iter().enumerate() {
        position[t] = i;
    }
    let clusters = cs
        .clusters()
        .iter()
        .map(|c| c.iter().map(|t| position[t]).collect())
        .collect();
    ClusterSet::new(universe, clusters).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn enewick_round_trip_keeps_clusters(n in 1usize..=9, seed in any::<u64>()) {
        let (net, cs) = instance(n, seed);
        let back = Network::from_enewick(&net.to_enewick()).unwrap();
        let back = back.with_universe(net.universe()).unwrap();
        prop_assert_eq!(back.softwired_clusters(), cs.clone());
        prop_assert!(cs.len() as u128 <= softwired_bound(net.reticulation_number(), n));
        prop_assert!(net.represents(&cs));
    }

    #[test]
    fn st_blocks_partition_the_taxa(n in 2usize..=8, seed in any::<u64>()) {
        let (_, cs) = instance(n, seed);
        let blocks = cs.maximal_st_sets().blocks;
        let mut seen = TaxonSet::new();
        for b in &blocks {
            prop_assert!(b.is_disjoint(&seen));
            seen.union_with(b);
            if b.len() > 1 && b.len() < n {
                prop_assert!(cs.is_st_set(b));
            }
        }
        prop_assert_eq!(seen, cs.universe().all());
        let (collapsed, expansion) = cs.st_collapse();
        prop_assert!(collapsed.is_st_collapsed() || collapsed.n() == 1);
        prop_assert_eq!(expansion.blocks.iter().map(|b| b.members.len()).sum::<usize>() + collapsed.n() - expansion.blocks.len(), n);
    }

    #[test]
    fn components_become_separating(n in 3usize..=8, seed in any::<u64>()) {
        let (_, cs) = instance(n, seed);
        let graph = cs.incompatibility_graph();
        for comp in graph.nontrivial_components() {
            let (sep, expansion) = cs.component_set(comp).make_separating().unwrap();
            prop_assert!(sep.is_separating());
            for b in &expansion.blocks {
                prop_assert!(b.tree.is_tree());
            }
        }
    }

    #[test]
    fn hierarchies_give_trees(n in 2usize..=9, seed in any::<u64>()) {
        let (net, _) = random_instance(&RandomParams::new(n, 0), seed).unwrap();
        let cs = net.softwired_clusters();
        for a in cs.clusters() {
            for b in cs.clusters() {
                prop_assert_eq!(compatible(a, b), compatible(b, a));
            }
        }
        prop_assert!(cs.is_pairwise_compatible());
        let tree = tree_from_hierarchy(&cs).unwrap();
        prop_assert!(tree.represents(&cs));
        prop_assert!(tree.is_tree());
    }

    #[test]
    fn witnesses_are_feasible(n in 3usize..=7, seed in any::<u64>()) {
        let (net, cs) = instance(n, seed);
        let config = SolverConfig::default();
        let l = minimize_level(&cs, &config).unwrap();
        let r = minimize_reticulation(&cs, &config).unwrap();
        let lw = l.witness.unwrap();
        let rw = r.witness.unwrap();
        prop_assert!(lw.represents(&cs) && rw.represents(&cs));
        prop_assert_eq!(Some(lw.level()), l.parameter);
        prop_assert_eq!(Some(rw.reticulation_number()), r.parameter);
        prop_assert!(l.parameter.unwrap() <= net.level());
        prop_assert!(r.parameter.unwrap() <= net.reticulation_number());
        prop_assert!(l.parameter <= r.parameter);
    }

    #[test]
    fn answers_ignore_taxon_order(n in 3usize..=5, seed in any::<u64>(), shuffle in any::<u64>()) {
        let (_, cs) = instance(n, seed);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut x = shuffle;
        for i in (1..n).rev() {
            perm.swap(i, (x % (i as u64 + 1)) as usize);
            x /= i as u64 + 1;
        }
        let other = relabel(&cs, &perm);
        let config = SolverConfig::default();
        let oracle = OracleConfig::default();
        prop_assert_eq!(
            oracle_min_level(&cs, 2, &oracle).unwrap().minimum,
            oracle_min_level(&other, 2, &oracle).unwrap().minimum
        );
        prop_assert_eq!(
            oracle_min_reticulation(&cs, 2, &oracle).unwrap().minimum,
            oracle_min_reticulation(&other, 2, &oracle).unwrap().minimum
        );
        prop_assert_eq!(
            minimize_level(&cs, &config).unwrap().parameter,
            minimize_level(&other, &config).unwrap().parameter
        );
        prop_assert_eq!(
            minimize_reticulation(&cs, &config).unwrap().parameter,
            minimize_reticulation(&other, &config).unwrap().parameter
        );
    }
}
