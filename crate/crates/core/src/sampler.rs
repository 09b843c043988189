//! Exact uniform sampling of braids of a given length, the random-walk
//! sampler, prefixes of the uniform measure at infinity, and empirical
//! statistics against the theoretical laws.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`), seeded with
//! `seed_from_u64(seed)`; worker `w` of a parallel batch uses stream `w`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::counting::right_classes;
use crate::error::{BraidError, Result};
use crate::measures::{delta_count_law, ChainSpec};
use crate::monoid::{GeneratorSet, MonoidSpec, SimpleTable};
use crate::normal_form::{normalize, Braid, GeneratorWord};

/// Label of the random generator, recorded in reports.
pub const RNG_ALGORITHM: &str = "chacha8/seed_from_u64/stream=worker";

/// Upper bound on the arithmetic work of one suffix-table build.
const SUFFIX_WORK_LIMIT: u128 = 200_000_000;

/// The generator used by every sampler: ChaCha8 seeded from `seed`, on stream `worker`.
pub fn rng_for(seed: u64, worker: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker);
    rng
}

/// Counts `f(x, m)` of normal continuations of total length `m` after a
/// last factor `x`, for `m ≤ k`.
///
/// `f` depends on `x` only through `R(x)`, so values are stored per right set.
/// The class of `Δ` (right set `Σ`) doubles as the start state: its counts are `λ(m)`.
#[derive(Debug, Clone)]
pub struct SuffixTable {
    table: Arc<SimpleTable>,
    k: usize,
    class_of: Vec<usize>,
    classes: Vec<GeneratorSet>,
    counts: Vec<Vec<BigUint>>,
    start_class: usize,
}

impl SuffixTable {
    /// Whether a table for `(spec, k)` stays within the work guard.
    pub fn fits(spec: MonoidSpec, k: usize) -> bool {
        let simples = spec.simple_count() as u128;
        let classes = match spec.flavor() {
            crate::monoid::Flavor::Artin => 1u128 << (spec.n() - 1),
            crate::monoid::Flavor::Dual => simples,
        };
        let per_class = simples.min(classes * spec.delta_length() as u128);
        let work = classes * simples + classes * per_class * (k as u128 + 1);
        work <= SUFFIX_WORK_LIMIT
    }

    pub fn build(table: Arc<SimpleTable>, k: usize) -> Result<Self> {
        let spec = table.spec();
        if !Self::fits(spec, k) {
            return Err(BraidError::GuardExceeded(format!(
                "suffix table for {spec} up to k = {k} exceeds the work limit"
            )));
        }
        let (classes, class_of) = right_classes(&table);
        // transitions[c]: (target class, factor length, multiplicity)
        let mut transitions: Vec<Vec<(usize, usize, BigUint)>> = Vec::with_capacity(classes.len());
        for &r in &classes {
            let mut grouped: HashMap<(usize, usize), u64> = HashMap::new();
            for y in 1..table.len() {
                if table.left(y).is_subset(r) {
                    *grouped.entry((class_of[y], table.length(y))).or_default() += 1;
                }
            }
            let mut entries: Vec<(usize, usize, BigUint)> =
                grouped.into_iter().map(|((c, l), m)| (c, l, BigUint::from(m))).collect();
            entries.sort_by_key(|e| (e.0, e.1));
            transitions.push(entries);
        }
        let mut counts: Vec<Vec<BigUint>> = vec![Vec::with_capacity(k + 1); classes.len()];
        for c in counts.iter_mut() {
            c.push(BigUint::one());
        }
        for m in 1..=k {
            for c in 0..classes.len() {
                let mut acc = BigUint::zero();
                for (target, len, mult) in &transitions[c] {
                    if *len <= m {
                        acc += mult * &counts[*target][m - len];
                    }
                }
                counts[c].push(acc);
            }
        }
        let start_class = class_of[table.delta_index()];
        Ok(SuffixTable { table, k, class_of, classes, counts, start_class })
    }

    pub fn simple_table(&self) -> &Arc<SimpleTable> {
        &self.table
    }

    pub fn spec(&self) -> MonoidSpec {
        self.table.spec()
    }

    pub fn horizon(&self) -> usize {
        self.k
    }

    /// `f(x, m)` for the simple with table index `x`.
    pub fn count(&self, x: usize, m: usize) -> &BigUint {
        &self.counts[self.class_of[x]][m]
    }

    /// `λ(m)`, the number of braids of length `m`.
    pub fn lambda(&self, m: usize) -> &BigUint {
        &self.counts[self.start_class][m]
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Candidates for the next factor after a factor with right set `r`,
    /// with `m` letters left to place, and their weights.
    fn successors(&self, r: GeneratorSet, m: usize) -> impl Iterator<Item = (usize, &BigUint)> + '_ {
        let t = &self.table;
        (1..t.len())
            .filter(move |&y| t.length(y) <= m && t.left(y).is_subset(r))
            .map(move |y| (y, self.count(y, m - t.length(y))))
    }

    fn check_horizon(&self, k: usize) -> Result<()> {
        if k > self.k {
            Err(BraidError::InvalidParameter(format!(
                "length {k} exceeds the suffix table horizon {}",
                self.k
            )))
        } else {
            Ok(())
        }
    }
}

/// A braid drawn uniformly among the `λ(k)` braids of length `k`.
pub fn sample_uniform<R: Rng + ?Sized>(st: &SuffixTable, k: usize, rng: &mut R) -> Result<Braid> {
    st.check_horizon(k)?;
    let t = st.simple_table();
    let spec = st.spec();
    if k == 0 {
        return Ok(Braid::unit(spec));
    }
    let mut factors = Vec::new();
    let mut right = spec.all_generators();
    let mut m = k;
    while m > 0 {
        let total: BigUint = st.successors(right, m).map(|(_, w)| w).sum();
        let mut ticket = rng.gen_biguint_below(&total);
        let mut chosen = None;
        for (y, w) in st.successors(right, m) {
            if ticket < *w {
                chosen = Some(y);
                break;
            }
            ticket -= w;
        }
        let y = chosen.expect("ticket below the total weight");
        factors.push(t.simple(y).clone());
        right = t.right(y);
        m -= t.length(y);
    }
    Braid::from_factors(spec, factors)
}

/// The normal form of a uniformly random word of length `k`.
pub fn sample_walk<R: Rng + ?Sized>(spec: MonoidSpec, k: usize, rng: &mut R) -> Braid {
    let count = spec.generator_count();
    let letters: Vec<usize> = (0..k).map(|_| rng.gen_range(0..count)).collect();
    normalize(&GeneratorWord::from_indices(spec, &letters))
}

/// The first `j` factors of a braid under the chain's law, as table indices.
pub fn sample_infinite_prefix<R: Rng + ?Sized>(chain: &ChainSpec<f64>, j: usize, rng: &mut R) -> Result<Vec<usize>> {
    if j == 0 {
        return Err(BraidError::InvalidParameter("prefix length must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(j);
    let mut state = draw_index(chain.initial(), rng);
    out.push(chain.states()[state]);
    for _ in 1..j {
        state = draw_index(&chain.transition()[state], rng);
        out.push(chain.states()[state]);
    }
    Ok(out)
}

fn draw_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            last_positive = i;
            acc += w;
            if u < acc {
                return i;
            }
        }
    }
    last_positive
}

/// Runs `count` independent draws split across `workers` threads.
///
/// Worker `w` makes its share of the draws from stream `w`; results are
/// concatenated in worker order, so the output depends only on `(seed, workers)`.
pub fn parallel_batch<T, F>(count: usize, seed: u64, workers: usize, draw: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> Result<T> + Sync,
{
    let workers = workers.max(1);
    let share = |w: usize| count / workers + usize::from(w < count % workers);
    if workers == 1 {
        let mut rng = rng_for(seed, 0);
        return (0..count).map(|_| draw(&mut rng)).collect();
    }
    let draw = &draw;
    let parts: Vec<Result<Vec<T>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    let mut rng = rng_for(seed, w as u64);
                    (0..share(w)).map(|_| draw(&mut rng)).collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sampler worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(count);
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// `count` uniform braids of length `k`, split across `workers` threads as in [`parallel_batch`].
pub fn sample_uniform_batch(st: &SuffixTable, k: usize, count: usize, seed: u64, workers: usize) -> Result<Vec<Braid>> {
    st.check_horizon(k)?;
    parallel_batch(count, seed, workers, |rng| sample_uniform(st, k, rng))
}

/// Exact law of `sample_uniform` at length `k`, obtained by following every
/// branch of the sampler with its rational probability.
pub fn exact_output_distribution(st: &SuffixTable, k: usize) -> Result<HashMap<Vec<usize>, BigRational>> {
    st.check_horizon(k)?;
    if st.lambda(k) > &BigUint::from(100_000u32) {
        return Err(BraidError::GuardExceeded(format!(
            "exact output law over {} braids",
            st.lambda(k)
        )));
    }
    let mut out = HashMap::new();
    let spec = st.spec();
    let one = BigRational::one();
    if k == 0 {
        out.insert(vec![st.simple_table().unit_index()], one);
        return Ok(out);
    }

    fn walk(
        st: &SuffixTable,
        path: &mut Vec<usize>,
        right: GeneratorSet,
        m: usize,
        prob: BigRational,
        out: &mut HashMap<Vec<usize>, BigRational>,
    ) {
        if m == 0 {
            *out.entry(path.clone()).or_insert_with(BigRational::zero) += prob;
            return;
        }
        let total: BigUint = st.successors(right, m).map(|(_, w)| w).sum();
        let options: Vec<(usize, BigUint)> = st.successors(right, m).map(|(y, w)| (y, w.clone())).collect();
        for (y, w) in options {
            if w.is_zero() {
                continue;
            }
            let step = BigRational::new(BigInt::from(w), BigInt::from(total.clone()));
            path.push(y);
            let t = st.simple_table();
            walk(st, path, t.right(y), m - t.length(y), &prob * step, out);
            path.pop();
        }
    }
    walk(st, &mut Vec::new(), spec.all_generators(), k, one, &mut out);
    Ok(out)
}

/// Exact law of the normal form of a uniformly random word of length `k`.
pub fn exact_walk_distribution(spec: MonoidSpec, k: usize) -> Result<HashMap<Braid, BigRational>> {
    let base = spec.generator_count();
    let total = (base as u128).checked_pow(k as u32).filter(|&t| t <= 2_000_000).ok_or_else(|| {
        BraidError::GuardExceeded(format!("{base}^{k} words is too many to enumerate"))
    })? as usize;
    let mut out: HashMap<Braid, BigRational> = HashMap::new();
    let weight = BigRational::new(BigInt::one(), BigInt::from(total));
    let mut letters = vec![0usize; k];
    for code in 0..total {
        let mut c = code;
        for slot in letters.iter_mut().rev() {
            *slot = c % base;
            c /= base;
        }
        let b = normalize(&GeneratorWord::from_indices(spec, &letters));
        *out.entry(b).or_insert_with(BigRational::zero) += &weight;
    }
    Ok(out)
}

/// Exact law of the first factor under the uniform law on length `k`:
/// `f(x, k - |x|) / λ(k)` for each non-unit simple `x` with `|x| ≤ k`.
pub fn exact_first_factor_law(st: &SuffixTable, k: usize) -> Result<Vec<(usize, BigRational)>> {
    st.check_horizon(k)?;
    if k == 0 {
        return Err(BraidError::InvalidParameter("the unit braid has no first factor".into()));
    }
    let total = BigInt::from(st.lambda(k).clone());
    let t = st.simple_table();
    Ok((1..t.len())
        .filter(|&x| t.length(x) <= k)
        .map(|x| (x, BigRational::new(BigInt::from(st.count(x, k - t.length(x)).clone()), total.clone())))
        .collect())
}

/// One cell of a chi-square comparison.
#[derive(Debug, Clone, Serialize)]
pub struct Cell {
    pub label: String,
    pub observed: u64,
    pub expected: f64,
}

/// Pearson statistic and upper-tail p-value after merging cells, from the
/// last one backwards, until each expected count is at least 5.
pub fn chi_square(cells: &[Cell]) -> (Vec<Cell>, f64, usize, f64) {
    let mut merged: Vec<Cell> = cells.to_vec();
    while merged.len() > 1 && merged.last().is_some_and(|c| c.expected < 5.0) {
        let tail = merged.pop().expect("non-empty");
        let prev = merged.last_mut().expect("at least one cell left");
        prev.label = format!("{}+{}", prev.label, tail.label);
        prev.observed += tail.observed;
        prev.expected += tail.expected;
    }
    let chi2: f64 = merged
        .iter()
        .map(|c| (c.observed as f64 - c.expected).powi(2) / c.expected)
        .sum();
    let dof = merged.len().saturating_sub(1);
    let pvalue = if dof == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
        1.0 - dist.cdf(chi2)
    };
    (merged, chi2, dof, pvalue)
}

/// Leading-`Δ` statistics of uniform braids against the geometric limit law.
#[derive(Debug, Clone, Serialize)]
pub struct DeltaStats {
    pub k: usize,
    #[serde(rename = "N")]
    pub n_samples: usize,
    pub seed: u64,
    pub rng: &'static str,
    /// Geometric parameter `a = q^{|Δ|}`: `P(T ≥ t) = a^t` in the limit.
    pub parameter: f64,
    pub cells: Vec<Cell>,
    pub chi2: f64,
    pub dof: usize,
    pub pvalue: f64,
    /// Total variation between the empirical and limit laws of `T` on the cells.
    pub tv: f64,
    pub empirical_mean: f64,
    /// `a / (1 - a)`.
    pub expected_mean: f64,
    pub empirical_at_least_one: f64,
    pub expected_at_least_one: f64,
}

/// Samples `count` uniform braids of length `k` and tabulates the number `T`
/// of leading `Δ` factors in cells `{0, 1, ≥2}`.
pub fn delta_count_statistics(st: &SuffixTable, k: usize, count: usize, seed: u64) -> Result<DeltaStats> {
    let law = delta_count_law(st.spec())?;
    let a = law.parameter;
    let t = st.simple_table();
    let delta = t.simple(t.delta_index()).clone();
    let mut rng = rng_for(seed, 0);
    let mut observed = [0u64; 3];
    let mut total_t = 0u64;
    for _ in 0..count {
        let b = sample_uniform(st, k, &mut rng)?;
        let leading = b.factors().iter().take_while(|x| **x == delta).count();
        total_t += leading as u64;
        observed[leading.min(2)] += 1;
    }
    let probs = [1.0 - a, (1.0 - a) * a, a * a];
    let labels = ["0", "1", ">=2"];
    let cells: Vec<Cell> = (0..3)
        .map(|i| Cell { label: labels[i].into(), observed: observed[i], expected: probs[i] * count as f64 })
        .collect();
    let tv = 0.5
        * (0..3)
            .map(|i| (observed[i] as f64 / count as f64 - probs[i]).abs())
            .sum::<f64>();
    let (cells, chi2, dof, pvalue) = chi_square(&cells);
    Ok(DeltaStats {
        k,
        n_samples: count,
        seed,
        rng: RNG_ALGORITHM,
        parameter: a,
        cells,
        chi2,
        dof,
        pvalue,
        tv,
        empirical_mean: total_t as f64 / count as f64,
        expected_mean: law.mean,
        empirical_at_least_one: (count as u64 - observed[0]) as f64 / count as f64,
        expected_at_least_one: law.prob_at_least_one,
    })
}

/// Total variation between the empirical law of the first `j` factors of
/// uniform braids of length `k` and the chain's law, for each `k`.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceStats {
    pub distance: &'static str,
    pub j: usize,
    #[serde(rename = "N")]
    pub n_samples: usize,
    pub seed: u64,
    pub ks: Vec<usize>,
    pub tv: Vec<f64>,
    /// `3·sqrt(support / N) / 2`, a coarse bound on the sampling noise of one TV estimate.
    pub noise_allowance: f64,
    /// Whether the TV at the largest `k` is below the TV at the smallest `k` plus the allowance.
    pub decreasing: bool,
}

pub fn convergence_statistics(
    table: Arc<SimpleTable>,
    chain: &ChainSpec<f64>,
    ks: &[usize],
    j: usize,
    count: usize,
    seed: u64,
) -> Result<ConvergenceStats> {
    if j == 0 || ks.is_empty() || count == 0 {
        return Err(BraidError::InvalidParameter("need j >= 1, a non-empty k list and N >= 1".into()));
    }
    let k_max = *ks.iter().max().expect("non-empty");
    let st = SuffixTable::build(table.clone(), k_max)?;
    let unit = table.unit_index();
    let mut tvs = Vec::with_capacity(ks.len());
    let mut support = 0usize;
    for (slot, &k) in ks.iter().enumerate() {
        let mut rng = rng_for(seed, slot as u64);
        let mut freq: HashMap<Vec<usize>, u64> = HashMap::new();
        for _ in 0..count {
            let b = sample_uniform(&st, k, &mut rng)?;
            let mut prefix: Vec<usize> = b.factors().iter().take(j).map(|x| table.index_of(x)).collect();
            prefix.resize(j, unit);
            *freq.entry(prefix).or_default() += 1;
        }
        support = support.max(freq.len());
        let mut covered = 0.0;
        let mut diff = 0.0;
        for (prefix, &c) in &freq {
            let p = chain.path_probability(prefix);
            covered += p;
            diff += (c as f64 / count as f64 - p).abs();
        }
        tvs.push(0.5 * (diff + (1.0 - covered).max(0.0)));
    }
    let noise_allowance = 1.5 * (support as f64 / count as f64).sqrt();
    let decreasing = tvs[tvs.len() - 1] <= tvs[0] + noise_allowance;
    Ok(ConvergenceStats {
        distance: "total variation on the joint law of the first j factors",
        j,
        n_samples: count,
        seed,
        ks: ks.to_vec(),
        tv: tvs,
        noise_allowance,
        decreasing,
    })
}

/// Empirical frequencies of a sample of braids, keyed by normal form.
pub fn frequencies(sample: &[Braid]) -> HashMap<Braid, u64> {
    let mut out = HashMap::new();
    for b in sample {
        *out.entry(b.clone()).or_default() += 1;
    }
    out
}

/// Converts an exact probability to `f64`.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(spec: MonoidSpec, k: usize) -> SuffixTable {
        SuffixTable::build(Arc::new(SimpleTable::new(spec)), k).unwrap()
    }

    #[test]
    fn suffix_counts_start_at_one() {
        let st = table(MonoidSpec::artin(3).unwrap(), 4);
        for x in 1..6 {
            assert_eq!(st.count(x, 0), &BigUint::one());
        }
        assert_eq!(st.lambda(3), &BigUint::from(7u32));
    }

    #[test]
    fn uniform_sample_has_requested_length_and_is_normal() {
        let st = table(MonoidSpec::dual(4).unwrap(), 12);
        let mut rng = rng_for(7, 0);
        for k in 0..=12 {
            let b = sample_uniform(&st, k, &mut rng).unwrap();
            assert_eq!(b.length(), k);
            assert!(b.is_normal());
        }
        assert!(sample_uniform(&st, 13, &mut rng).is_err());
    }

    #[test]
    fn same_seed_same_sequence() {
        let st = table(MonoidSpec::artin(4).unwrap(), 10);
        let a = sample_uniform_batch(&st, 10, 50, 42, 1).unwrap();
        let b = sample_uniform_batch(&st, 10, 50, 42, 1).unwrap();
        assert_eq!(a, b);
        let c = sample_uniform_batch(&st, 10, 50, 42, 3).unwrap();
        let d = sample_uniform_batch(&st, 10, 50, 42, 3).unwrap();
        assert_eq!(c, d);
        assert_eq!(c.len(), 50);
    }

    #[test]
    fn chi_square_merges_small_tail_cells() {
        let cells = vec![
            Cell { label: "0".into(), observed: 90, expected: 90.0 },
            Cell { label: "1".into(), observed: 8, expected: 8.0 },
            Cell { label: ">=2".into(), observed: 2, expected: 2.0 },
        ];
        let (merged, chi2, dof, p) = chi_square(&cells);
        assert_eq!(merged.len(), 2);
        assert_eq!(merged[1].label, "1+>=2");
        assert_eq!(chi2, 0.0);
        assert_eq!(dof, 1);
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn walk_law_at_length_three() {
        let spec = MonoidSpec::artin(3).unwrap();
        let law = exact_walk_distribution(spec, 3).unwrap();
        assert_eq!(law.len(), 7);
        let delta = Braid::from_simple(spec, spec.delta());
        assert_eq!(law[&delta], BigRational::new(2.into(), 8.into()));
        let total: BigRational = law.values().sum();
        assert!(total.is_one());
    }
}
