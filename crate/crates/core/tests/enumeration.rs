mod common;

use std::collections::HashSet;

use supertree::enumerate::{enumerate_supertrees, filter_class, rank_by_q, SupertreeClass};
use supertree::families::{hyperstar, loose_path, s1, s3, s4};
use supertree::hypergraph::Supertree;
use supertree::spectral::SolverOptions;

#[test]
fn tree_counts_match_pruefer_brute_force() {
    for m in 1..=6 {
        let brute = common::classes(common::labeled_trees(m + 1)).len();
        let ours = enumerate_supertrees(m, 2).unwrap().len();
        assert_eq!(ours, brute, "m = {m}");
    }
    let counts: Vec<usize> = (1..=6)
        .map(|m| common::classes(common::labeled_trees(m + 1)).len())
        .collect();
    assert_eq!(counts, vec![1, 1, 2, 3, 6, 11]);
}

#[test]
fn uniform_counts_match_unpruned_growth() {
    for k in 3..=4 {
        for m in 1..=5 {
            let brute = common::brute_force_supertrees(m, k).len();
            assert_eq!(enumerate_supertrees(m, k).unwrap().len(), brute, "k = {k}, m = {m}");
        }
    }
}

#[test]
fn three_edges_three_uniform() {
    let trees = enumerate_supertrees(3, 3).unwrap();
    assert_eq!(trees.len(), 2);
    let codes: HashSet<_> = trees.iter().map(Supertree::canonical_code).collect();
    assert!(codes.contains(&loose_path(3, 3).unwrap().canonical_code()));
    assert!(codes.contains(&hyperstar(3, 3).unwrap().canonical_code()));
}

#[test]
fn codes_separate_exactly_the_isomorphism_classes() {
    for (m, k) in [(5, 2), (6, 2), (4, 3), (5, 3), (4, 4)] {
        let trees = enumerate_supertrees(m, k).unwrap();
        for (i, a) in trees.iter().enumerate() {
            for b in &trees[i + 1..] {
                assert!(!common::isomorphic(a, b), "duplicate class at m = {m}, k = {k}");
            }
        }
    }
}

#[test]
fn every_output_is_a_valid_supertree() {
    for t in enumerate_supertrees(6, 3).unwrap() {
        assert!(Supertree::new(t.graph().clone()).is_ok());
    }
}

#[test]
fn deterministic() {
    let a: Vec<_> = enumerate_supertrees(6, 3).unwrap().iter().map(Supertree::canonical_code).collect();
    let b: Vec<_> = enumerate_supertrees(6, 3).unwrap().iter().map(Supertree::canonical_code).collect();
    assert_eq!(a, b);
    let mut sorted = a.clone();
    sorted.sort();
    assert_eq!(a, sorted);
}

#[test]
fn diameter_classes_partition() {
    for (m, k) in [(5, 3), (6, 3), (5, 4)] {
        let all = enumerate_supertrees(m, k).unwrap();
        let total: usize = (1..=m)
            .map(|d| filter_class(all.clone(), &SupertreeClass::Diameter(d)).len())
            .sum();
        assert_eq!(total, all.len());
    }
}

#[test]
fn extreme_diameters() {
    let all = enumerate_supertrees(4, 3).unwrap();
    let d2 = filter_class(all.clone(), &SupertreeClass::Diameter(2));
    assert_eq!(d2.len(), 1);
    assert_eq!(d2[0].canonical_code(), hyperstar(4, 3).unwrap().canonical_code());
    let d4 = filter_class(all, &SupertreeClass::Diameter(4));
    assert_eq!(d4.len(), 1);
    assert_eq!(d4[0].canonical_code(), loose_path(4, 3).unwrap().canonical_code());
}

#[test]
fn diameter_three_members() {
    let class = filter_class(enumerate_supertrees(5, 3).unwrap(), &SupertreeClass::Diameter(3));
    let codes: Vec<_> = class.iter().map(Supertree::canonical_code).collect();
    let s1 = s1(5, 3, 3).unwrap().canonical_code();
    assert_eq!(codes.iter().filter(|c| **c == s1).count(), 1);
    assert!(codes.contains(&s3(5, 3, 3).unwrap().canonical_code()));
    assert!(codes.contains(&s4(5, 3).unwrap().canonical_code()));
}

#[test]
fn ranking_over_diameter_three() {
    let class = filter_class(enumerate_supertrees(5, 3).unwrap(), &SupertreeClass::Diameter(3));
    let ranking = rank_by_q(&class, &SolverOptions::default()).unwrap();
    assert_eq!(ranking.entries[0].code, s1(5, 3, 3).unwrap().canonical_code());
    assert_eq!(ranking.entries[1].code, s4(5, 3).unwrap().canonical_code());
    assert!(ranking.separated(0) && ranking.separated(1));
    for w in ranking.entries.windows(2) {
        assert!(w[0].value() >= w[1].value());
    }
}

#[test]
fn ranking_a_single_graph() {
    let t = s1(5, 3, 3).unwrap();
    let ranking = rank_by_q(std::slice::from_ref(&t), &SolverOptions::default()).unwrap();
    assert_eq!(ranking.unique_argmax().unwrap().code, t.canonical_code());
}
