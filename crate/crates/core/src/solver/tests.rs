use super::*;
use crate::generators::enumerate_level_generators;

pub(crate) const NINE_TAXA: &str = "a,b,f,g,i\na,b,c,f,g,i\na,b,f,i\nb,c,f,i\nc,d,e,h\nd,e,h\n\
b,c,f,h,i\nb,c,d,f,h,i\nb,c,i\na,g\nb,i\nc,i\nd,h\n";

fn level1() -> Arc<Generator> {
    Arc::new(enumerate_level_generators(1).unwrap().remove(0))
}

fn abc() -> ClusterSet {
    ClusterSet::parse("a,b\nb,c\n").unwrap()
}

#[test]
fn guesses_for_level_one() {
    let g = level1();
    let guesses = iterate_guesses(&g, 3);
    assert!(!guesses.is_empty());
    assert_eq!(guesses[0].long_count(), 0);
    assert!(guesses.len() <= 3usize.pow(g.sides().len() as u32));
    for w in guesses.windows(2) {
        assert!((w[0].long_count(), w[0].short_count()) <= (w[1].long_count(), w[1].short_count()));
    }
    for guess in &guesses {
        for side in g.sides().iter().filter(|s| s.is_node()) {
            assert_eq!(guess.class(side.id), SideClass::Short);
        }
    }
    // Three taxa, one node side and a doubled edge: short/short/short only,
    // or one long copy with the other empty.
    let shapes: Vec<(usize, usize)> = guesses.iter().map(|g| (g.long_count(), g.short_count())).collect();
    assert_eq!(shapes, vec![(0, 3), (1, 1)]);
}

#[test]
fn hanging_taxa_on_sides() {
    let g = level1();
    let cs = ClusterSet::parse("a,b\nb,c\nc,d\n").unwrap();
    let long = g.sides().iter().find(|s| !s.is_node()).unwrap().id;
    let node = g.sides().iter().find(|s| s.is_node()).unwrap().id;
    let mut classes = vec![SideClass::Empty; g.sides().len()];
    classes[long] = SideClass::Long;
    classes[node] = SideClass::Short;
    let partner = g.parallel_partner(long).unwrap();
    classes[partner] = SideClass::Short;
    let net = IncompleteNetwork::new(g.clone(), SideGuess::new(classes), &cs);
    let one = net.hang_taxon(1, long).unwrap();
    assert_eq!(one.placements(long), &[1]);
    assert_eq!(one.status(long), SideStatus::Active);
    let two = one.hang_taxon(0, long).unwrap();
    assert_eq!(two.placements(long), &[0, 1]);
    let three = two.hang_taxon(2, node).unwrap();
    assert_eq!(three.placements(node), &[2]);
    assert_eq!(three.hang_taxon(3, node).unwrap_err(), SolverError::ShortSideOccupied(node));
    assert_eq!(three.hang_taxon(0, partner).unwrap_err(), SolverError::AlreadyPlaced(0));
}

#[test]
fn add_on_side_finishes_when_nothing_implies_the_top() {
    let g = level1();
    let cs = abc();
    let long = g.sides().iter().find(|s| !s.is_node()).unwrap().id;
    let node = g.sides().iter().find(|s| s.is_node()).unwrap().id;
    let partner = g.parallel_partner(long).unwrap();
    let mut classes = vec![SideClass::Empty; g.sides().len()];
    classes[long] = SideClass::Long;
    classes[node] = SideClass::Short;
    classes[partner] = SideClass::Empty;
    let mut net = IncompleteNetwork::new(g, SideGuess::new(classes), &cs);
    net = net.hang_taxon(2, node).unwrap();
    net = net.hang_taxon(1, long).unwrap();
    // a implies b but the node side is full, so U is empty; c is placed.
    let mut stats = SolveStats::default();
    let out = add_on_side(&net, long, &mut stats);
    assert_eq!(out.len(), 1);
}

#[test]
fn two_overlapping_clusters_need_one_reticulation() {
    let cs = abc();
    let report = solve_simple_level(&cs, 1, &SolverConfig::default()).unwrap();
    assert!(report.found());
    let w = report.witness.unwrap();
    assert!(w.represents(&cs));
    assert_eq!(w.level(), 1);
    assert!(w.is_binary());
    let ret = w.reticulations()[0];
    let b = w.children(ret)[0];
    assert_eq!(w.label(b), Some("b"));
    let report = solve_simple_reticulation(&cs, 1, &SolverConfig::default()).unwrap();
    assert!(report.found());
    assert_eq!(report.witness.unwrap().reticulation_number(), 1);
}

#[test]
fn nine_taxa_need_level_two() {
    let cs = ClusterSet::parse(NINE_TAXA).unwrap();
    assert!(cs.is_separating());
    let config = SolverConfig::default();
    let one = solve_simple_level(&cs, 1, &config).unwrap();
    assert_eq!(one.status, SolveStatus::Refuted);
    let two = solve_simple_level(&cs, 2, &config).unwrap();
    assert!(two.found(), "{:?}", two.stats);
    let w = two.witness.unwrap();
    assert!(w.represents(&cs));
    assert!(w.is_simple());
    assert!(w.is_binary());
    assert_eq!(w.level(), 2);
}

#[test]
fn rejects_unsuitable_input() {
    let cs = ClusterSet::parse("a,b\nc\n").unwrap();
    assert_eq!(
        solve_simple_level(&cs, 1, &SolverConfig::default()).unwrap_err(),
        SolverError::NotSeparating
    );
    assert_eq!(
        solve_simple_level(&abc(), 0, &SolverConfig::default()).unwrap_err(),
        SolverError::ZeroParameter
    );
}

#[test]
fn collapse_round_trip() {
    let g = level1();
    let cs = ClusterSet::parse("a,b,c,d\nb,c\nc,d\ne\n").unwrap();
    let long = g.sides().iter().find(|s| !s.is_node()).unwrap().id;
    let node = g.sides().iter().find(|s| s.is_node()).unwrap().id;
    let partner = g.parallel_partner(long).unwrap();
    let mut classes = vec![SideClass::Empty; g.sides().len()];
    classes[long] = SideClass::Long;
    classes[node] = SideClass::Short;
    classes[partner] = SideClass::Short;
    let mut net = IncompleteNetwork::new(g, SideGuess::new(classes), &cs);
    for t in [2, 1, 0] {
        net = net.hang_taxon(t, long).unwrap();
    }
    let net = net.finish(long);
    let mut stats = SolveStats::default();
    let (collapsed, record) = collapse_finished_side(&net, long, &mut stats);
    assert_eq!(record.taxa, vec![0, 1, 2]);
    let meta = record.meta;
    // {a,b,c,d} becomes {S,d}.
    let expected: TaxonSet = [meta, 3].into_iter().collect();
    assert!(collapsed.working_clusters().contains(&expected));
    // {c,d} straddles the side.
    assert_eq!(stats.straddling_clusters, 1);
    let back = collapsed.decollapse();
    assert_eq!(back.placements(long), net.placements(long));
    assert_eq!(back.placed(), net.placed());
}
