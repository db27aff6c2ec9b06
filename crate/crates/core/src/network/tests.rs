use std::collections::BTreeSet;

use super::*;

pub(crate) const BLOB2: &str = "(((b,((c,(d)#H2))#H1),#H2),(a,#H1));";

/// Two level-2 blobs and one level-1 blob below a tree backbone.
pub(crate) const FIVE_RETICULATIONS: &str = "((((b1,((c1,(d1)#H2))#H1),#H2),(a1,#H1)),\
((((b2,((c2,(d2)#H4))#H3),#H4),(a2,#H3)),((e,#H5),(f,(g)#H5))));";

pub(crate) fn label_sets(cs: &ClusterSet) -> BTreeSet<Vec<String>> {
    cs.clusters()
        .iter()
        .map(|c| {
            let mut l: Vec<String> = cs.universe().labels_of(c).iter().map(|s| s.to_string()).collect();
            l.sort();
            l
        })
        .collect()
}

fn parse(s: &str) -> Network {
    Network::from_enewick(s).unwrap()
}

#[test]
fn tree_parses_to_five_nodes() {
    let t = parse("(a,(b,c));");
    assert_eq!(t.node_count(), 5);
    assert_eq!(t.reticulation_number(), 0);
    assert_eq!(t.level(), 0);
    assert!(t.is_binary());
    assert_eq!(t.biconnected_components().len(), 4);
    assert!(t.biconnected_components().iter().all(|c| c.len() == 1));
}

#[test]
fn one_tag_gives_one_reticulation() {
    let n = parse("((a,(c)#H1),(b,#H1));");
    assert_eq!(n.reticulation_number(), 1);
    assert_eq!(n.level(), 1);
    assert!(n.is_binary());
    assert!(n.is_simple());
    assert_eq!(n.displayed_trees().len(), 2);
}

#[test]
fn measures_on_composite_network() {
    let n = parse(FIVE_RETICULATIONS);
    assert_eq!(n.reticulation_number(), 5);
    assert_eq!(n.level(), 2);
    assert!(!n.is_simple());
    assert!(n.is_binary());
    let blob = parse(BLOB2);
    assert_eq!(blob.level(), 2);
    assert!(blob.is_simple());
    let nontrivial = n
        .biconnected_components()
        .into_iter()
        .filter(|c| c.len() > 1)
        .count();
    assert_eq!(nontrivial, 3);
}

#[test]
fn trees_with_three_leaves_are_not_simple() {
    assert!(!parse("((a,b),c);").is_simple());
    assert!(parse("(a,b);").is_simple());
}

#[test]
fn enewick_round_trip() {
    for s in [BLOB2, FIVE_RETICULATIONS, "(a,(b,c));", "((a,(c)#H1),(b,#H1));"] {
        let once = parse(s).to_enewick();
        let twice = parse(&once).to_enewick();
        assert_eq!(once, twice);
        let n = parse(&once);
        assert_eq!(label_sets(&n.softwired_clusters()), label_sets(&parse(s).softwired_clusters()));
    }
}

#[test]
fn enewick_ignores_lengths_and_internal_labels() {
    let n = parse("((a:1.5,b:2)x:0.1,c)root;");
    assert_eq!(n.to_enewick(), "((a,b),c);");
    let q = parse("('x y',b);");
    assert_eq!(q.to_enewick(), "(b,'x y');");
}

#[test]
fn parse_errors_have_positions() {
    match Network::from_enewick("(a,b") {
        Err(NetworkError::Parse { line, column, .. }) => assert_eq!((line, column), (1, 5)),
        other => panic!("{other:?}"),
    }
    match Network::from_enewick("(a,\n(b,c)\n;x") {
        Err(NetworkError::Parse { line, column, .. }) => assert_eq!((line, column), (3, 1)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        Network::from_enewick("((a),b);"),
        Err(NetworkError::DegreeTwoNode(_))
    ));
    assert!(matches!(
        Network::from_enewick("(a,a);"),
        Err(NetworkError::DuplicateLabel(_))
    ));
}

#[test]
fn json_and_dot() {
    let n = parse(BLOB2);
    let j = n.to_json();
    let back = Network::from_json(&j).unwrap();
    assert_eq!(back.to_json(), j);
    assert_eq!(back.to_enewick(), n.to_enewick());
    let dot = n.to_dot();
    assert_eq!(dot.matches("doublecircle").count(), 2);
    assert!(dot.contains("label=\"d\""));
}

fn brute_softwired(n: &Network) -> BTreeSet<TaxonSet> {
    let mut out = BTreeSet::new();
    for t in n.displayed_trees() {
        assert_eq!(t.tree.reticulation_number(), 0);
        assert_eq!(t.tree.universe().len(), n.universe().len());
        let hw = t.tree.hardwired_clusters();
        // A displayed tree's clusters form a hierarchy.
        assert!(hw.is_pairwise_compatible());
        out.extend(hw.clusters().iter().cloned());
    }
    out
}

#[test]
fn softwired_matches_displayed_tree_union() {
    for s in [BLOB2, FIVE_RETICULATIONS, "((a,(c)#H1),(b,#H1));"] {
        let n = parse(s);
        let fast: BTreeSet<TaxonSet> = n.softwired_clusters().clusters().iter().cloned().collect();
        assert_eq!(fast, brute_softwired(&n));
        assert!(n.represents(&n.softwired_clusters()));
        let bound = softwired_bound(n.reticulation_number(), n.universe().len());
        assert!(fast.len() as u128 <= bound);
    }
}

#[test]
fn displayed_tree_edges_map_to_network_edges() {
    let n = parse(BLOB2);
    let edges: BTreeSet<(usize, usize)> = n.edges().into_iter().collect();
    for t in n.displayed_trees() {
        for (&(a, b), origin) in &t.edge_origin {
            assert!(edges.contains(origin));
            assert_eq!(t.tree.label(b), n.label(origin.1));
            let _ = a;
        }
    }
}

#[test]
fn represents_fails_for_tree_and_incompatible_pair() {
    let t = parse("((a,b),c);");
    let cs = ClusterSet::parse("a,b\nb,c\n").unwrap();
    assert!(!t.represents(&cs));
    let missing = t.unrepresented(&cs);
    assert_eq!(missing.len(), 1);
    assert_eq!(cs.format(&missing[0]), "{b,c}");
    let level1 = parse("((a,(b)#H1),(c,#H1));");
    assert!(level1.represents(&cs));
}

#[test]
fn hierarchy_trees() {
    let cs = ClusterSet::parse("a,b\nc\n").unwrap();
    assert_eq!(tree_from_hierarchy(&cs).unwrap().to_enewick(), "((a,b),c);");
    let star = ClusterSet::parse("a\nb\nc\n").unwrap();
    let (t, refined) = tree_from_hierarchy_flagged(&star).unwrap();
    assert_eq!(t.to_enewick(), "((a,b),c);");
    assert_eq!(refined.len(), 1);
    let nested = ClusterSet::parse("a,b\na,b,c\nd\n").unwrap();
    let t = tree_from_hierarchy(&nested).unwrap();
    assert_eq!(t.to_enewick(), "(((a,b),c),d);");
    let sw = t.softwired_clusters();
    assert!(nested.clusters().iter().all(|c| sw.contains(c)));
    let bad = ClusterSet::parse("a,b\nb,c\n").unwrap();
    assert!(matches!(tree_from_hierarchy(&bad), Err(ClusterError::Incompatible(_, _))));
}

#[test]
fn resolved_hierarchy_is_recovered_exactly() {
    let cs = ClusterSet::parse("a,b\nc,d\na,b,c,d\ne\nf\na\nb\nc\nd\ne,f\n").unwrap();
    let t = tree_from_hierarchy(&cs).unwrap();
    assert_eq!(t.softwired_clusters(), cs);
}

#[test]
fn substitute_leaves_grafts_trees() {
    let outer = parse("((x,m),y);");
    let inner = parse("(p,q);");
    let universe = Arc::new(TaxonUniverse::new(["x", "y", "p", "q"]).unwrap());
    let subs: HashMap<&str, &Network> = [("m", &inner)].into_iter().collect();
    let g = outer.substitute_leaves(&subs, &universe).unwrap();
    assert_eq!(g.to_enewick(), "(((p,q),x),y);");
}

#[test]
fn switchings_enumerate_all_choices() {
    let n = parse(FIVE_RETICULATIONS);
    assert_eq!(n.switchings().len(), 32);
}
