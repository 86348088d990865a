use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use supertree::enumerate::enumerate_supertrees;
use supertree::hypergraph::{Hypergraph, Supertree};
use supertree::spectral::{matrix_oracle_q, oracle_rayleigh_max, spectral_radius, SolverOptions, Tensor};

fn q(g: &Hypergraph) -> f64 {
    spectral_radius(g, Tensor::Signless, &SolverOptions::default()).unwrap().value
}

#[test]
fn single_edge_is_two() {
    for k in 2..=6 {
        let e = Hypergraph::new(k, k, [(0..k).collect::<Vec<_>>()]).unwrap();
        assert!((q(&e) - 2.0).abs() < 1e-8, "k = {k}");
    }
}

#[test]
fn trees_agree_with_matrix_eigenvalues() {
    for m in 1..=7 {
        for t in enumerate_supertrees(m, 2).unwrap() {
            let tensor = q(&t);
            let matrix = matrix_oracle_q(&t).unwrap();
            assert!((tensor - matrix).abs() <= 1e-6, "{t:?}: {tensor} vs {matrix}");
        }
    }
}

#[test]
fn small_tree_values() {
    let claw = Hypergraph::new(2, 4, [[0, 1], [0, 2], [0, 3]]).unwrap();
    assert!((q(&claw) - 4.0).abs() < 1e-9);
    let p3 = Hypergraph::new(2, 3, [[0, 1], [1, 2]]).unwrap();
    assert!((q(&p3) - 3.0).abs() < 1e-9);
}

#[test]
fn rayleigh_oracle_never_exceeds_the_bracket() {
    let opts = SolverOptions::default();
    for m in 1..=5 {
        for t in enumerate_supertrees(m, 3).unwrap() {
            let r = spectral_radius(&t, Tensor::Signless, &opts).unwrap();
            let best = oracle_rayleigh_max(&t, 4, 3000);
            assert!(best <= r.upper + 1e-6, "{t:?}: {best} > {}", r.upper);
            assert!(best >= r.lower - 1e-4, "{t:?}: oracle stalled at {best}");
            assert!(r.residual <= 1e-8);
            let uniform = 2.0 * t.k() as f64 * t.m() as f64 / t.n() as f64;
            assert!(r.value >= uniform - 1e-12);
        }
    }
}

fn tree_and_perm() -> impl Strategy<Value = (Supertree, Vec<usize>)> {
    let pool: Vec<Supertree> = (2..=5)
        .flat_map(|m| enumerate_supertrees(m, 3).unwrap())
        .chain(enumerate_supertrees(6, 2).unwrap())
        .collect();
    (0..pool.len(), any::<u64>()).prop_map(move |(i, seed)| {
        let t = pool[i].clone();
        let mut perm: Vec<usize> = (0..t.n()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        (t, perm)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn relabeling_preserves_invariants((t, perm) in tree_and_perm()) {
        let r = t.relabel(&perm);
        prop_assert_eq!(r.canonical_code(), t.canonical_code());
        prop_assert_eq!(r.diameter(), t.diameter());
        prop_assert_eq!(r.pendent_counts(), t.pendent_counts());
        prop_assert_eq!(r.degree_sequence(), t.degree_sequence());
        prop_assert!((q(&r) - q(&t)).abs() < 1e-9);
    }
}
