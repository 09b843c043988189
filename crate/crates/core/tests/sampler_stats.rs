mod common;

use std::sync::Arc;

use braidforge::sampler::{
    chi_square, convergence_statistics, delta_count_statistics, exact_first_factor_law, exact_output_distribution,
    exact_walk_distribution, frequencies, ratio_to_f64, rng_for, sample_infinite_prefix, sample_uniform,
    sample_uniform_batch, sample_walk, Cell, RNG_ALGORITHM,
};
use braidforge::{chain_at_infinity, MonoidSpec, SimpleTable, SuffixTable};
use common::{artin, dual, index};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

fn suffix(spec: MonoidSpec, k: usize) -> SuffixTable {
    SuffixTable::build(Arc::new(SimpleTable::new(spec)), k).unwrap()
}

#[test]
fn sampler_law_is_exactly_uniform() {
    for spec in [artin(3), dual(3), artin(4), dual(4)] {
        let st = suffix(spec, 6);
        for k in 0..=4 {
            let law = exact_output_distribution(&st, k).unwrap();
            let lambda = st.lambda(k).clone();
            assert_eq!(law.len(), lambda.to_usize().unwrap(), "{spec} k={k}");
            let uniform = BigRational::new(BigInt::from(1), BigInt::from(lambda));
            assert!(law.values().all(|p| *p == uniform), "{spec} k={k}");
        }
    }
}

#[test]
fn length_one_draws_a_generator() {
    let st = suffix(dual(5), 2);
    let law = exact_output_distribution(&st, 1).unwrap();
    assert_eq!(law.len(), dual(5).generator_count());
    let mut rng = rng_for(3, 0);
    for _ in 0..50 {
        let b = sample_uniform(&st, 1, &mut rng).unwrap();
        assert_eq!(b.length(), 1);
        assert_eq!(b.height(), 1);
    }
}

#[test]
fn sampler_respects_the_horizon() {
    let st = suffix(artin(3), 5);
    let mut rng = rng_for(1, 0);
    assert!(sample_uniform(&st, 6, &mut rng).is_err());
    assert_eq!(sample_uniform(&st, 0, &mut rng).unwrap().to_string(), "[e]");
    assert!(exact_first_factor_law(&st, 0).is_err());
}

#[test]
fn random_words_are_not_uniform_braids() {
    let spec = artin(3);
    let law = exact_walk_distribution(spec, 3).unwrap();
    assert_eq!(law.len(), 7);
    let delta = braidforge::Braid::delta_power(spec, 1);
    assert_eq!(law[&delta], BigRational::new(2.into(), 8.into()));
    let others: Vec<_> = law.iter().filter(|(b, _)| **b != delta).collect();
    assert!(others.iter().all(|(_, p)| **p == BigRational::new(1.into(), 8.into())));
    assert!(exact_walk_distribution(dual(6), 10).is_err());

    let mut rng = rng_for(5, 0);
    let b = sample_walk(spec, 12, &mut rng);
    assert_eq!(b.length(), 12);
    assert!(b.is_normal());
}

#[test]
fn chi_square_against_uniform_over_seven() {
    let spec = artin(3);
    let st = suffix(spec, 3);
    let sample = sample_uniform_batch(&st, 3, 70_000, 20240601, 1).unwrap();
    let freq = frequencies(&sample);
    assert_eq!(freq.len(), 7);
    let cells: Vec<Cell> = freq
        .iter()
        .map(|(b, &c)| Cell { label: b.to_string(), observed: c, expected: 10_000.0 })
        .collect();
    let (merged, chi2, dof, pvalue) = chi_square(&cells);
    assert_eq!(merged.len(), 7);
    assert_eq!(dof, 6);
    assert!(pvalue > 0.001, "chi2 = {chi2}, p = {pvalue}");
}

#[test]
fn chi_square_merges_sparse_tail() {
    let cells = vec![
        Cell { label: "0".into(), observed: 90, expected: 90.0 },
        Cell { label: "1".into(), observed: 8, expected: 7.0 },
        Cell { label: "2".into(), observed: 2, expected: 3.0 },
    ];
    let (merged, _, dof, pvalue) = chi_square(&cells);
    assert_eq!(merged.len(), 2);
    assert_eq!(merged[1].label, "1+2");
    assert_eq!(dof, 1);
    assert!((pvalue - 1.0).abs() < 1e-12);
}

#[test]
fn batches_are_reproducible() {
    let st = suffix(dual(5), 20);
    let a = sample_uniform_batch(&st, 20, 200, 99, 4).unwrap();
    let b = sample_uniform_batch(&st, 20, 200, 99, 4).unwrap();
    assert_eq!(a, b);
    let c = sample_uniform_batch(&st, 20, 200, 100, 4).unwrap();
    assert_ne!(a, c);
    // a single worker is exactly stream 0
    let single = sample_uniform_batch(&st, 20, 50, 99, 1).unwrap();
    let mut rng = rng_for(99, 0);
    let manual: Vec<_> = (0..50).map(|_| sample_uniform(&st, 20, &mut rng).unwrap()).collect();
    assert_eq!(single, manual);
    assert!(a.iter().all(|x| x.length() == 20 && x.is_normal()));
    assert!(RNG_ALGORITHM.contains("chacha8"));
}

#[test]
fn first_factor_law_tends_to_initial_law() {
    for spec in [artin(3), artin(4), dual(4)] {
        let st = suffix(spec, 80);
        let chain = chain_at_infinity(spec).unwrap();
        let law = exact_first_factor_law(&st, 80).unwrap();
        let total: BigRational = law.iter().map(|(_, p)| p.clone()).sum();
        assert_eq!(total, BigRational::from_integer(1.into()));
        for (x, p) in law {
            let pos = chain.state_position(x).unwrap();
            assert!((ratio_to_f64(&p) - chain.initial()[pos]).abs() < 1e-8, "{spec}");
        }
    }
}

#[test]
fn infinite_prefixes_are_normal_sequences() {
    for spec in [artin(4), dual(5)] {
        let chain = chain_at_infinity(spec).unwrap();
        let t = chain.table().clone();
        let mut rng = rng_for(11, 0);
        for _ in 0..200 {
            let path = sample_infinite_prefix(&chain, 12, &mut rng).unwrap();
            assert_eq!(path.len(), 12);
            assert!(path.iter().all(|&x| x != t.unit_index()));
            assert!(path.windows(2).all(|w| t.arrow(w[0], w[1])));
            let factors = path.iter().map(|&x| t.simple(x).clone()).collect();
            assert!(braidforge::Braid::from_factors(spec, factors).is_ok());
        }
        assert!(sample_infinite_prefix(&chain, 0, &mut rng).is_err());
    }
}

#[test]
fn infinite_prefix_first_factor_frequencies() {
    let spec = dual(3);
    let chain = chain_at_infinity(spec).unwrap();
    let t = chain.table().clone();
    let mut rng = rng_for(7, 0);
    let n = 40_000;
    let mut hits = 0;
    for _ in 0..n {
        let path = sample_infinite_prefix(&chain, 1, &mut rng).unwrap();
        if path[0] == index(&t, "(13)") {
            hits += 1;
        }
    }
    let freq = hits as f64 / n as f64;
    // each of the four states has mass 1/4; 5 standard deviations
    assert!((freq - 0.25).abs() < 5.0 * (0.25f64 * 0.75 / n as f64).sqrt());
}

#[test]
fn prefix_laws_converge_with_length() {
    let spec = artin(3);
    let chain = chain_at_infinity(spec).unwrap();
    let stats = convergence_statistics(chain.table().clone(), &chain, &[4, 8, 16, 32], 2, 20_000, 42).unwrap();
    assert_eq!(stats.tv.len(), 4);
    assert!(stats.decreasing, "{:?}", stats.tv);
    assert!(stats.tv[3] < stats.tv[0]);
    assert!(convergence_statistics(chain.table().clone(), &chain, &[], 2, 10, 1).is_err());
}

#[test]
fn delta_statistics_track_geometric_law() {
    let st = suffix(dual(3), 40);
    let stats = delta_count_statistics(&st, 40, 20_000, 8).unwrap();
    assert_eq!(stats.rng, RNG_ALGORITHM);
    assert!((stats.parameter - 0.25).abs() < 1e-15);
    assert!((stats.empirical_mean - stats.expected_mean).abs() < 0.03);
    assert!((stats.empirical_at_least_one - stats.expected_at_least_one).abs() < 0.03);
    assert!(stats.pvalue > 1e-4, "{stats:?}");
    assert!(stats.tv < 0.03);
}
