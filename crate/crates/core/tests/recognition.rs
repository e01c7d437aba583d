mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{mixed_profile, random_ranking, ClassLists};
use spgraph::flow::flow_tree_recognize;
use spgraph::lp::{lp_path_recognize, lp_tree_recognize};
use spgraph::profile::{is_compatible, Profile};
use spgraph::recognition::{
    recognize_cycle, recognize_path, recognize_pseudotree, recognize_pseudotree_with, recognize_tree, Structure,
    RecognitionResult,
};
use spgraph::registry::{recognize_auto, Registry};

fn check_witness(r: &RecognitionResult, p: &Profile) {
    if let Some(w) = &r.witness {
        assert!(r.structure.admits(w), "{:?} witness {w} has the wrong shape", r.structure);
        assert!(is_compatible(w, p).unwrap(), "witness {w} is not compatible");
    }
}

#[test]
fn verdicts_match_exhaustive_search() {
    let lists: Vec<ClassLists> = (0..=5).map(ClassLists::new).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..400 {
        let m = rng.gen_range(1..=5);
        let n = rng.gen_range(1..=6);
        let p = mixed_profile(m, n, &mut rng);
        let l = &lists[m];
        let path = recognize_path(&p);
        let tree = recognize_tree(&p);
        let pseudo = recognize_pseudotree(&p);
        assert_eq!(path.is_compatible(), ClassLists::any_compatible(&l.paths, &p), "{p:?}");
        assert_eq!(tree.is_compatible(), ClassLists::any_compatible(&l.trees, &p), "{p:?}");
        assert_eq!(pseudo.is_compatible(), ClassLists::any_compatible(&l.pseudotrees, &p), "{p:?}");
        for r in [&path, &tree, &pseudo] {
            check_witness(r, &p);
        }
        if m >= 3 {
            let cycle = recognize_cycle(&p).unwrap();
            assert_eq!(cycle.is_compatible(), ClassLists::any_compatible(&l.cycles, &p), "{p:?}");
            check_witness(&cycle, &p);
        } else {
            assert!(recognize_cycle(&p).is_err());
        }
    }
}

#[test]
fn alternative_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..200 {
        let m = rng.gen_range(1..=9);
        let n = rng.gen_range(1..=8);
        let p = mixed_profile(m, n, &mut rng);
        let tree = recognize_tree(&p).is_compatible();
        let lp = lp_tree_recognize(&p).unwrap();
        let flow = flow_tree_recognize(&p);
        assert_eq!(lp.is_compatible(), tree);
        assert_eq!(flow.is_compatible(), tree);
        check_witness(&lp, &p);
        check_witness(&flow, &p);
        let path = lp_path_recognize(&p).unwrap();
        assert_eq!(path.is_compatible(), recognize_path(&p).is_compatible());
        check_witness(&path, &p);
    }
}

#[test]
fn pseudotree_verdict_ignores_detach_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..300 {
        let m = rng.gen_range(3..=8);
        let n = rng.gen_range(1..=6);
        let p = mixed_profile(m, n, &mut rng);
        let base = recognize_pseudotree(&p);
        let mut pick = ChaCha8Rng::seed_from_u64(rng.gen());
        for _ in 0..4 {
            let other = recognize_pseudotree_with(&p, |ids| pick.gen_range(0..ids.len()));
            assert_eq!(other.verdict, base.verdict, "{p:?}");
            check_witness(&other, &p);
        }
    }
}

#[test]
fn class_inclusions() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..300 {
        let m = rng.gen_range(3..=8);
        let p = mixed_profile(m, rng.gen_range(1..=6), &mut rng);
        let path = recognize_path(&p).is_compatible();
        let tree = recognize_tree(&p).is_compatible();
        let cycle = recognize_cycle(&p).unwrap().is_compatible();
        let pseudo = recognize_pseudotree(&p).is_compatible();
        assert!(!path || tree);
        assert!(!tree || pseudo);
        assert!(!cycle || pseudo);
    }
}

#[test]
fn registry_strategies_run_on_random_profiles() {
    let reg = Registry::builtin();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for _ in 0..50 {
        let m = rng.gen_range(3..=7);
        let p = mixed_profile(m, 4, &mut rng);
        for name in reg.recognizer_names() {
            let r = reg.recognizer(name).unwrap().recognize(&p).unwrap();
            assert_eq!(r.structure, reg.recognizer(name).unwrap().structure());
            check_witness(&r, &p);
        }
        let auto = recognize_auto(&p);
        match auto.first {
            Some(r) => check_witness(&r, &p),
            None => assert!(!recognize_pseudotree(&p).is_compatible()),
        }
    }
}

#[test]
fn single_voter_is_always_an_axis() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for m in 1..=12 {
        let p = Profile::from_rankings(m, [random_ranking(m, &mut rng)]).unwrap();
        let r = recognize_path(&p);
        assert!(r.is_compatible());
        assert_eq!(r.structure, Structure::Axis);
        check_witness(&r, &p);
    }
}

proptest! {
    #[test]
    fn traversal_witnesses_are_recognised(seed in any::<u64>(), m in 3usize..10, n in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = spgraph::generators::random_tree(m, &mut rng);
        let p = spgraph::generators::traversal_profile_with(&g, n, &mut rng).unwrap();
        prop_assert!(is_compatible(&g, &p).unwrap());
        let r = recognize_tree(&p);
        prop_assert!(r.is_compatible());
        prop_assert!(recognize_pseudotree(&p).is_compatible());
    }
}
