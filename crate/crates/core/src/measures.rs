//! Möbius transforms on simple braids, the uniform measures and the Markov
//! chain realizing the uniform measure at infinity.

use std::collections::{HashMap, VecDeque};
use std::fmt::Debug;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};
use serde::Serialize;

use crate::counting::{critical_root, mobius_polynomial, IntPolynomial};
use crate::error::{BraidError, Result};
use crate::monoid::{Flavor, Generator, MonoidSpec, SimpleTable};
use crate::normal_form::Braid;

/// Upper bound on `Σ_x 2^{|Σ∖R(x)|}`, the number of subset terms in a transform plan.
const MOBIUS_TERM_LIMIT: u128 = 50_000_000;
/// Largest state space for which chains are built as dense matrices.
pub const CHAIN_STATE_LIMIT: usize = 2000;

/// Values that can be summed with integer coefficients.
pub trait TransformValue: Clone {
    fn zero_value() -> Self;
    fn add_scaled(&mut self, other: &Self, c: i64);
}

impl TransformValue for f64 {
    fn zero_value() -> Self {
        0.0
    }

    fn add_scaled(&mut self, other: &Self, c: i64) {
        *self += c as f64 * other;
    }
}

impl TransformValue for BigRational {
    fn zero_value() -> Self {
        num_traits::Zero::zero()
    }

    fn add_scaled(&mut self, other: &Self, c: i64) {
        *self += other * BigRational::from_integer(BigInt::from(c));
    }
}

impl TransformValue for IntPolynomial {
    fn zero_value() -> Self {
        IntPolynomial::zero()
    }

    fn add_scaled(&mut self, other: &Self, c: i64) {
        let scaled = other * &IntPolynomial::from_i64(&[c]);
        *self = &*self + &scaled;
    }
}

/// Scalars usable as probabilities: `f64`, or `BigRational` for exact work.
pub trait Weight:
    TransformValue + Num + Signed + PartialOrd + ToPrimitive + FromPrimitive + Debug
{
}

impl<T> Weight for T where
    T: TransformValue + Num + Signed + PartialOrd + ToPrimitive + FromPrimitive + Debug
{
}

fn power<T: Weight>(p: &T, e: usize) -> T {
    num_traits::pow(p.clone(), e)
}

/// The integer coefficients of the transform `h(x) = Σ_{X} (-1)^{|X|} f(x·Δ_X)`,
/// where `X` ranges over subsets of `Σ∖R(x)` (the only ones with `x·Δ_X` simple).
#[derive(Debug, Clone)]
pub struct MobiusPlan {
    table: Arc<SimpleTable>,
    terms: Vec<Vec<(usize, i64)>>,
}

impl MobiusPlan {
    pub fn new(table: Arc<SimpleTable>) -> Result<Self> {
        let spec = table.spec();
        let count = spec.generator_count();
        let work: u128 = (0..table.len()).map(|x| 1u128 << (count - table.right(x).len())).sum();
        if work > MOBIUS_TERM_LIMIT {
            return Err(BraidError::GuardExceeded(format!(
                "Möbius transform of {spec} needs {work} subset terms"
            )));
        }
        let mut terms = Vec::with_capacity(table.len());
        for x in 0..table.len() {
            let base = table.simple(x);
            let free = spec.all_generators().difference(table.right(x));
            // x·Δ_X is the join of the simples x·σ for σ ∈ X.
            let steps: Vec<_> = free
                .iter()
                .map(|i| spec.simple_product(base, spec.generator(i)).expect("σ outside R(x)"))
                .collect();
            let mut acc: HashMap<usize, i64> = HashMap::new();
            let mut stack = vec![(0usize, base.clone(), false)];
            while let Some((start, current, odd)) = stack.pop() {
                *acc.entry(table.index_of(&current)).or_default() += if odd { -1 } else { 1 };
                for (k, step) in steps.iter().enumerate().skip(start) {
                    stack.push((k + 1, spec.join(&current, step), !odd));
                }
            }
            let mut row: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
            row.sort_unstable();
            terms.push(row);
        }
        Ok(MobiusPlan { table, terms })
    }

    pub fn table(&self) -> &Arc<SimpleTable> {
        &self.table
    }

    /// `(target, coefficient)` pairs of the transform at simple `x`.
    pub fn terms(&self, x: usize) -> &[(usize, i64)] {
        &self.terms[x]
    }

    pub fn transform<T: TransformValue>(&self, f: &[T]) -> Vec<T> {
        self.terms
            .iter()
            .map(|row| {
                let mut acc = T::zero_value();
                for &(y, c) in row {
                    acc.add_scaled(&f[y], c);
                }
                acc
            })
            .collect()
    }

    /// `f(x) = Σ_{y ≥_l x} h(y)`, the inverse of [`MobiusPlan::transform`].
    pub fn inverse<T: TransformValue>(&self, h: &[T]) -> Vec<T> {
        (0..self.table.len())
            .map(|x| {
                let mut acc = T::zero_value();
                for y in upper_set(&self.table, x) {
                    acc.add_scaled(&h[y], 1);
                }
                acc
            })
            .collect()
    }

    /// `h` for `f(x) = p^{|x|}`.
    pub fn power_law<T: Weight>(&self, p: &T) -> Vec<T> {
        let f: Vec<T> = (0..self.table.len()).map(|x| power(p, self.table.length(x))).collect();
        self.transform(&f)
    }

    /// `h` for `f(x) = p^{|x|}` as polynomials in `p`.
    pub fn power_law_symbolic(&self) -> Vec<IntPolynomial> {
        let f: Vec<IntPolynomial> = (0..self.table.len())
            .map(|x| IntPolynomial::monomial(1.into(), self.table.length(x)))
            .collect();
        self.transform(&f)
    }
}

/// All simples `y` with `x ≤_l y`, by breadth-first right multiplication.
pub fn upper_set(table: &SimpleTable, x: usize) -> Vec<usize> {
    let spec = table.spec();
    let mut seen = vec![false; table.len()];
    let mut queue = VecDeque::from([x]);
    seen[x] = true;
    let mut out = Vec::new();
    while let Some(y) = queue.pop_front() {
        out.push(y);
        for i in spec.all_generators().difference(table.right(y)).iter() {
            let z = spec.simple_product(table.simple(y), spec.generator(i)).expect("σ outside R(y)");
            let zi = table.index_of(&z);
            if !seen[zi] {
                seen[zi] = true;
                queue.push_back(zi);
            }
        }
    }
    out
}

/// `p^{|x_1| + … + |x_{k-1}|} · h(x_k)`: the graded transform of `p^{|·|}` at `x`,
/// given `h` for `p^{|·|}` on simples.
pub fn graded_mobius_transform<T: Weight>(table: &SimpleTable, h: &[T], p: &T, x: &Braid) -> T {
    let factors = x.factors();
    let head: usize = factors[..factors.len() - 1].iter().map(|f| f.length()).sum();
    let last = table.index_of(&factors[factors.len() - 1]);
    power(p, head) * h[last].clone()
}

/// `ν_p({x}) = H(p)·p^{|x|}` for `0 < p < q`.
pub fn uniform_finite_weight(h: &IntPolynomial, q: f64, p: f64, x: &Braid) -> Result<f64> {
    if !(p > 0.0 && p < q) {
        return Err(BraidError::InvalidParameter(format!(
            "point masses need 0 < p < q = {q}, got p = {p}"
        )));
    }
    Ok(h.eval_f64(p) * full_visual_weight(p, x))
}

/// `ν_p(⇑x) = p^{|x|}`.
pub fn full_visual_weight(p: f64, x: &Braid) -> f64 {
    p.powi(x.length() as i32)
}

/// The Markov chain on simples with `P_{x,x'} = 1{x→x'} p^{|x|} h(x')/h(x)`.
#[derive(Debug, Clone)]
pub struct ChainSpec<T> {
    table: Arc<SimpleTable>,
    p: T,
    h: Vec<T>,
    states: Vec<usize>,
    position: Vec<Option<usize>>,
    initial: Vec<T>,
    transition: Vec<Vec<T>>,
    max_row_error: f64,
}

impl<T: Weight> ChainSpec<T> {
    /// Builds the chain for parameter `p`; `exclude_unit` drops `e` from the
    /// states, as required at `p = q` where `h(e) = 0`.
    pub fn new(plan: &MobiusPlan, p: T, exclude_unit: bool) -> Result<Self> {
        let table = plan.table().clone();
        if table.len() > CHAIN_STATE_LIMIT {
            return Err(BraidError::GuardExceeded(format!(
                "dense chain over {} states (limit {CHAIN_STATE_LIMIT})",
                table.len()
            )));
        }
        let h = plan.power_law(&p);
        let states: Vec<usize> = (0..table.len()).filter(|&x| !(exclude_unit && x == table.unit_index())).collect();
        let mut position = vec![None; table.len()];
        for (i, &x) in states.iter().enumerate() {
            position[x] = Some(i);
        }
        let initial: Vec<T> = states.iter().map(|&x| h[x].clone()).collect();
        let mut transition = Vec::with_capacity(states.len());
        let mut max_row_error: f64 = 0.0;
        for &x in &states {
            if h[x].is_zero() {
                return Err(BraidError::Inconsistent(format!(
                    "h({}) vanishes; the chain is undefined there",
                    table.name(x)
                )));
            }
            let scale = power(&p, table.length(x)) / h[x].clone();
            let row: Vec<T> = states
                .iter()
                .map(|&y| if table.arrow(x, y) { scale.clone() * h[y].clone() } else { T::zero() })
                .collect();
            let sum = row.iter().cloned().fold(T::zero(), |a, b| a + b);
            let err = (sum - T::one()).abs().to_f64().unwrap_or(f64::INFINITY);
            max_row_error = max_row_error.max(err);
            transition.push(row);
        }
        if max_row_error > 1e-8 {
            return Err(BraidError::Inconsistent(format!(
                "transition rows deviate from 1 by {max_row_error:e}"
            )));
        }
        Ok(ChainSpec { table, p, h, states, position, initial, transition, max_row_error })
    }

    pub fn table(&self) -> &Arc<SimpleTable> {
        &self.table
    }

    pub fn p(&self) -> &T {
        &self.p
    }

    /// `h` on every simple, in table order.
    pub fn h(&self) -> &[T] {
        &self.h
    }

    /// State list as table indices.
    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn state_position(&self, x: usize) -> Option<usize> {
        self.position[x]
    }

    pub fn initial(&self) -> &[T] {
        &self.initial
    }

    pub fn transition(&self) -> &[Vec<T>] {
        &self.transition
    }

    pub fn max_row_error(&self) -> f64 {
        self.max_row_error
    }

    /// `P_{x,y}` for table indices `x`, `y`.
    pub fn entry(&self, x: usize, y: usize) -> T {
        match (self.position[x], self.position[y]) {
            (Some(i), Some(j)) => self.transition[i][j].clone(),
            _ => T::zero(),
        }
    }

    /// Probability that the chain starts with the factors `path` (table indices).
    pub fn path_probability(&self, path: &[usize]) -> T {
        let Some((&first, rest)) = path.split_first() else {
            return T::one();
        };
        let Some(i) = self.position[first] else {
            return T::zero();
        };
        let mut prob = self.initial[i].clone();
        let mut prev = first;
        for &x in rest {
            prob = prob * self.entry(prev, x);
            prev = x;
        }
        prob
    }

    pub fn to_json(&self) -> serde_json::Value {
        let f = |v: &T| v.to_f64().unwrap_or(f64::NAN);
        serde_json::json!({
            "monoid": self.table.spec().flavor(),
            "n": self.table.spec().n(),
            "p": f(&self.p),
            "states": self.states.iter().map(|&x| self.table.name(x)).collect::<Vec<_>>(),
            "encodings": self.states.iter().map(|&x| self.table.simple(x).code().to_vec()).collect::<Vec<_>>(),
            "initial": self.initial.iter().map(f).collect::<Vec<_>>(),
            "transition": self.transition.iter().map(|r| r.iter().map(f).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Width of the root bracket used by the floating-point chains.
const ROOT_TOL: f64 = 1e-15;

/// The chain at `p = q`, on the simples other than `e`.
pub fn chain_at_infinity(spec: MonoidSpec) -> Result<ChainSpec<f64>> {
    let h = mobius_polynomial(spec)?;
    let root = critical_root(spec, ROOT_TOL)?;
    let residual = h.eval_f64(root.q).abs();
    if residual > 1e-12 {
        return Err(BraidError::Inconsistent(format!("|H(q)| = {residual:e} is not negligible")));
    }
    let plan = MobiusPlan::new(Arc::new(SimpleTable::new(spec)))?;
    ChainSpec::new(&plan, root.q, true)
}

/// The chain at `p = q` in exact arithmetic, available when `q` is rational.
pub fn chain_at_infinity_exact(spec: MonoidSpec) -> Result<Option<ChainSpec<BigRational>>> {
    let root = critical_root(spec, ROOT_TOL)?;
    let Some(q) = root.exact else {
        return Ok(None);
    };
    let plan = MobiusPlan::new(Arc::new(SimpleTable::new(spec)))?;
    ChainSpec::new(&plan, q, true).map(Some)
}

/// The chain of the finite uniform measure `ν_p`, for `0 < p < q`.
pub fn chain_at(spec: MonoidSpec, p: f64) -> Result<ChainSpec<f64>> {
    let root = critical_root(spec, ROOT_TOL)?;
    if !(p > 0.0 && p < root.lo.to_f64().unwrap_or(0.0)) {
        return Err(BraidError::InvalidParameter(format!(
            "p must lie in (0, q) with q = {}; got {p}",
            root.q
        )));
    }
    let plan = MobiusPlan::new(Arc::new(SimpleTable::new(spec)))?;
    ChainSpec::new(&plan, p, false)
}

/// Dominant eigenpair of `B_{x,x'} = 1{x→x'} q^{|x'|}` on the simples other than `e`, `Δ`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub rho_lower: f64,
    pub rho_upper: f64,
    pub iterations: usize,
    /// Largest relative gap between the Perron vector and `g(x) = Σ_{x→y} h(y)`, both max-normalized.
    pub perron_vs_g: f64,
    /// `max |h(x) - q^{|x|} g(x)|`.
    pub h_vs_qg: f64,
    pub g_positive: bool,
}

/// Power iteration with Collatz–Wielandt bounds on the chain's `B` matrix.
pub fn spectral_check(chain: &ChainSpec<f64>) -> Result<SpectralReport> {
    let table = chain.table();
    let q = *chain.p();
    let h = chain.h();
    let v: Vec<usize> = (1..table.len() - 1).collect();
    let m = v.len();
    if m == 0 {
        return Err(BraidError::InvalidParameter("no simples besides e and Δ".into()));
    }
    let b = DMatrix::from_fn(m, m, |i, j| {
        if table.arrow(v[i], v[j]) {
            q.powi(table.length(v[j]) as i32)
        } else {
            0.0
        }
    });
    let mut x = DVector::from_element(m, 1.0);
    let (mut lower, mut upper) = (0.0, f64::INFINITY);
    let mut iterations = 0;
    for it in 1..=200_000 {
        let y = &b * &x;
        lower = (0..m).map(|i| y[i] / x[i]).fold(f64::INFINITY, f64::min);
        upper = (0..m).map(|i| y[i] / x[i]).fold(0.0, f64::max);
        x = &y / y.max();
        iterations = it;
        if upper - lower < 1e-13 {
            break;
        }
    }
    if upper - lower >= 1e-9 {
        return Err(BraidError::Inconsistent(format!(
            "power iteration did not converge: bounds [{lower}, {upper}]"
        )));
    }
    let g: Vec<f64> = v
        .iter()
        .map(|&a| (0..table.len()).filter(|&y| table.arrow(a, y)).map(|y| h[y]).sum())
        .collect();
    let g_positive = g.iter().all(|&t| t > 0.0);
    let g_max = g.iter().cloned().fold(0.0, f64::max);
    let perron_vs_g = (0..m).map(|i| (g[i] / g_max - x[i]).abs() / x[i]).fold(0.0, f64::max);
    let h_vs_qg = (0..m)
        .map(|i| (h[v[i]] - q.powi(table.length(v[i]) as i32) * g[i]).abs())
        .fold(0.0, f64::max);
    Ok(SpectralReport { rho_lower: lower, rho_upper: upper, iterations, perron_vs_g, h_vs_qg, g_positive })
}

/// Limit law of the number `T` of leading `Δ` factors: `P(T ≥ t) = a^t` with `a = q^{|Δ|}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DeltaLaw {
    /// `a = q^{|Δ|}`.
    pub parameter: f64,
    /// `E[T] = a / (1 - a)`.
    pub mean: f64,
    /// `P(T ≥ 1) = a`.
    pub prob_at_least_one: f64,
}

pub fn delta_count_law(spec: MonoidSpec) -> Result<DeltaLaw> {
    let root = critical_root(spec, ROOT_TOL)?;
    let a = root.q.powi(spec.delta_length() as i32);
    Ok(DeltaLaw { parameter: a, mean: a / (1.0 - a), prob_at_least_one: a })
}

/// The laws `λ_{i*}` of the factor following the last leading `Δ`, over the
/// simples other than `e` and `Δ`.
#[derive(Debug, Clone, Serialize)]
pub struct LambdaStarReport {
    pub states: Vec<String>,
    pub laws: Vec<Vec<f64>>,
    pub stationary: Vec<f64>,
    /// Total variation between `λ_{i*}` and the stationary law, for `i = 1, 2, …`.
    pub tv_gaps: Vec<f64>,
    pub monotone: bool,
}

/// `λ_{1*}(s) = h(s)/(1 - q^{|Δ|})`, then `λ_{i+1*} = λ_{i*} P` on the simples other than `e`, `Δ`.
pub fn lambda_star(chain: &ChainSpec<f64>, i_max: usize) -> Result<LambdaStarReport> {
    let table = chain.table();
    let v: Vec<usize> = (1..table.len() - 1).collect();
    let m = v.len();
    if m == 0 || i_max == 0 {
        return Err(BraidError::InvalidParameter("need at least one state and one step".into()));
    }
    let a = chain.h()[table.delta_index()];
    let p = DMatrix::from_fn(m, m, |i, j| chain.entry(v[i], v[j]));
    let mut law = DVector::from_iterator(m, v.iter().map(|&s| chain.h()[s] / (1.0 - a)));
    // stationary law: π (P - I) = 0 with Σ π = 1
    let mut system = p.transpose() - DMatrix::identity(m, m);
    for j in 0..m {
        system[(m - 1, j)] = 1.0;
    }
    let mut rhs = DVector::zeros(m);
    rhs[m - 1] = 1.0;
    let stationary = system
        .lu()
        .solve(&rhs)
        .ok_or_else(|| BraidError::Inconsistent("singular stationary system".into()))?;
    let mut laws = Vec::with_capacity(i_max);
    let mut tv_gaps = Vec::with_capacity(i_max);
    for _ in 0..i_max {
        tv_gaps.push(0.5 * (&law - &stationary).abs().sum());
        laws.push(law.iter().cloned().collect());
        law = (law.transpose() * &p).transpose();
    }
    let monotone = tv_gaps.windows(2).all(|w| w[1] <= w[0] + 1e-15);
    Ok(LambdaStarReport {
        states: v.iter().map(|&s| table.name(s)).collect(),
        laws,
        stationary: stationary.iter().cloned().collect(),
        tv_gaps,
        monotone,
    })
}

/// The sums `Σ_{x ∉ {e,Δ}, x→y} q^{|x|}` for two simples with nested left sets.
#[derive(Debug, Clone, Serialize)]
pub struct StationarityWitness {
    pub y: String,
    pub y_prime: String,
    pub sum_y: f64,
    pub sum_y_prime: f64,
    pub differ: bool,
}

/// Evaluates the witness sums for `y = σ_1` and `y' = σ_1σ_2σ_1` (Artin), or
/// `y = σ_{1,2}` and `y'` the block `{1, 2, 3}` (dual).
///
/// With `require_claim`, only Artin monoids with `n ≥ 4` are accepted and the
/// two sums must differ.
pub fn stationarity_witness(chain: &ChainSpec<f64>, require_claim: bool) -> Result<StationarityWitness> {
    let table = chain.table();
    let spec = table.spec();
    if require_claim && (spec.flavor() != Flavor::Artin || spec.n() < 4) {
        return Err(BraidError::InvalidParameter(format!(
            "the witness claim concerns Artin monoids with n >= 4, not {spec}"
        )));
    }
    let q = *chain.p();
    let word: Vec<Generator> = match spec.flavor() {
        Flavor::Artin => vec![Generator::artin(1), Generator::artin(2), Generator::artin(1)],
        Flavor::Dual => vec![Generator::dual(1, 2), Generator::dual(2, 3)],
    };
    let y = table.index_of(&spec.simple_of_generator(word[0]));
    let y_prime_simple = word.iter().fold(spec.unit(), |acc, &g| {
        spec.simple_product(&acc, g).expect("witness word is simple")
    });
    let y_prime = table.index_of(&y_prime_simple);
    let sum = |target: usize| -> f64 {
        (1..table.len() - 1)
            .filter(|&x| table.arrow(x, target))
            .map(|x| q.powi(table.length(x) as i32))
            .sum()
    };
    let (sum_y, sum_y_prime) = (sum(y), sum(y_prime));
    let differ = (sum_y - sum_y_prime).abs() > 1e-6;
    if require_claim && !differ {
        return Err(BraidError::Inconsistent(format!(
            "witness sums coincide: {sum_y} vs {sum_y_prime}"
        )));
    }
    Ok(StationarityWitness { y: table.name(y), y_prime: table.name(y_prime), sum_y, sum_y_prime, differ })
}
