use softnet::assembly::{minimize_level, minimize_reticulation};
use softnet::oracle::{oracle_min_level, oracle_min_reticulation, OracleConfig};
use softnet::random::{random_instance, RandomParams};
use softnet::solver::SolverConfig;
use softnet::ClusterSet;

fn agree(cs: &ClusterSet) -> Result<(), String> {
    let config = SolverConfig::default();
    let oracle = OracleConfig::default();
    let l = minimize_level(cs, &config).unwrap();
    let r = minimize_reticulation(cs, &config).unwrap();
    let ol = oracle_min_level(cs, 2, &oracle).unwrap();
    let or = oracle_min_reticulation(cs, 2, &oracle).unwrap();
    if l.parameter == ol.minimum && r.parameter == or.minimum && ol.minimum <= or.minimum {
        Ok(())
    } else {
        Err(format!(
            "{cs:?}: level {:?} vs {:?}, reticulation {:?} vs {:?}",
            l.parameter, ol.minimum, r.parameter, or.minimum
        ))
    }
}

#[test]
fn random_instances_with_wider_blobs() {
    // Sparser blobs than the acceptance corpus, so more taxa sit on sides.
    let mut bad = Vec::new();
    for seed in 0..120u64 {
        let mut params = RandomParams::new(4 + (seed as usize % 3), 2);
        params.blob_chance = 0.9;
        let (_, cs) = random_instance(&params, 50_000 + seed).unwrap();
        if let Err(e) = agree(&cs) {
            bad.push(e);
        }
    }
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn hand_picked_instances() {
    for text in [
        "a,b\nb,c\n",
        "a,b\nb,c\nd,e\ne,f\n",
        // {b,d,f} is an ST-set although {b,d} is not.
        "a\na,b,c,d,f\na,b,d,f\na,c\nb\nb,d,e,f\nb,d,f\nc\nd\nd,f\ne\nf\n",
        "a,b\nb,c\nc,d\nd,a\n",
        "a,b\nb,c\na,b,c,d\nd,e\n",
    ] {
        agree(&ClusterSet::parse(text).unwrap()).unwrap();
    }
}
