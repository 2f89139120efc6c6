//! Method agreement: the generalized-pairs pipeline, the degeneralized
//! Rabin pipeline, and the brute-force strategy-enumeration oracle must
//! produce the same probabilities; plus MEC laws against brute force.

mod common;

use common::{is_end_component, oracle_product_value};
use fgltl_core::automata::{build_dgrw, degeneralize};
use fgltl_core::bench::gen_random_mdp;
use fgltl_core::ltl::parse_any_atoms;
use fgltl_core::mdp::{
    mec_decomposition, product, product_rabin, solve_product, McValue, ReachMode,
};
use fgltl_core::util::BitSet;

const FORMULAS: [&str; 6] = [
    "F a | G b",
    "G F a & G F !a",
    "F G a | G F b",
    "G F a",
    "F (a & b) | G !b",
    "(G F a | F G b) & F a",
];

#[test]
fn pipelines_and_oracle_agree_exactly() {
    let mut oracle_hits = 0;
    for text in FORMULAS {
        let f = parse_any_atoms(text).unwrap();
        let a = build_dgrw(&f).unwrap();
        let r = degeneralize(&a).unwrap();
        for seed in 0..10u64 {
            let m = gen_random_mdp(seed, 5, 2, 2).unwrap();
            let p_gr = product(&m, &a);
            let p_r = product_rabin(&m, &r);
            let gr = solve_product(&p_gr, ReachMode::Exact);
            let rr = solve_product(&p_r, ReachMode::Exact);
            let (McValue::Exact(gv), McValue::Exact(rv)) = (&gr.value, &rr.value) else {
                unreachable!()
            };
            assert_eq!(gv, rv, "GR vs R on {text}, seed {seed}");
            if let Some(oracle) = oracle_product_value(&p_gr, 4096) {
                assert_eq!(gv, &oracle, "oracle on {text}, seed {seed}");
                oracle_hits += 1;
            }
            // iterative mode stays within tolerance of the exact value
            let it = solve_product(&p_gr, ReachMode::Iterative { epsilon: 1e-9 });
            let McValue::Approx(apx) = it.value else { unreachable!() };
            let exact_f = fgltl_core::mdp::rational_to_f64(gv);
            assert!((apx - exact_f).abs() <= 1e-6, "{text} seed {seed}");
        }
    }
    assert!(oracle_hits >= 30, "oracle exercised on enough instances, got {oracle_hits}");
}

#[test]
fn infinitary_product_size_law() {
    for text in ["G F a & G F !a", "F G a | G F b", "(G F a | F G b) & G F b"] {
        let f = parse_any_atoms(text).unwrap();
        assert!(f.is_infinitary());
        let a = build_dgrw(&f).unwrap();
        for seed in 20..30u64 {
            let m = gen_random_mdp(seed, 7, 2, 3).unwrap();
            let p = product(&m, &a);
            // generated models have every vertex reachable
            assert_eq!(p.mdp.vertex_count(), m.vertex_count(), "{text} seed {seed}");
        }
    }
}

#[test]
fn mec_laws_against_brute_force() {
    for seed in 0..30u64 {
        let m = gen_random_mdp(seed, 8, 1, 3).unwrap();
        let mecs = mec_decomposition(&m);
        // pairwise disjoint
        for i in 0..mecs.len() {
            for j in 0..i {
                assert!(!mecs[i].intersects(&mecs[j]));
            }
        }
        // each is an end component
        for mec in &mecs {
            assert!(is_end_component(&m, mec), "seed {seed}");
        }
        // no strict superset is an end component (checked by adding single
        // vertices and by unioning pairs of components)
        for mec in &mecs {
            for v in 0..m.vertex_count() {
                if mec.contains(v) {
                    continue;
                }
                let mut bigger = mec.clone();
                bigger.insert(v);
                assert!(!is_end_component(&m, &bigger), "seed {seed} vertex {v}");
            }
        }
        // every end component found by brute force over small subsets is
        // inside some MEC
        let n = m.vertex_count();
        if n <= 12 {
            for mask in 1u32..(1 << n) {
                let set = BitSet::from_iter(n, (0..n).filter(|&v| mask >> v & 1 == 1));
                if is_end_component(&m, &set) {
                    assert!(
                        mecs.iter().any(|mec| set.is_subset(mec)),
                        "EC {set:?} not below any MEC, seed {seed}"
                    );
                }
            }
        }
    }
}
