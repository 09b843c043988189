//! Möbius polynomials, growth coefficients, the critical root, the Charney
//! graph and a brute-force word-class oracle.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{BraidError, Result};
use crate::monoid::{Flavor, GeneratorSet, MonoidSpec, SimpleBraid, SimpleTable};
use crate::sampler::SuffixTable;

/// Largest alphabet for which Möbius polynomials are also computed by
/// inclusion–exclusion over all subsets.
pub const INCLUSION_EXCLUSION_MAX_GENERATORS: usize = 24;

/// Polynomial with exact integer coefficients, ascending degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    pub fn monomial(c: BigInt, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> BigInt {
        self.coeffs.get(degree).cloned().unwrap_or_default()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(d, c)| c * BigInt::from(d))
                .collect(),
        )
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// Coefficients as JSON numbers when they fit in `i64`, strings otherwise.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|c| match c.to_i64() {
                    Some(v) => serde_json::Value::from(v),
                    None => serde_json::Value::from(c.to_string()),
                })
                .collect(),
        )
    }

    /// Human-readable form in the indeterminate `var`, e.g. `1 - 2p + p^3`.
    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let unit_coeff = mag.is_one() && d > 0;
            if !unit_coeff {
                out.push_str(&mag.to_string());
            }
            match d {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{d}")),
            }
        }
        out
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("t"))
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..len).map(|d| self.coeff(d) + rhs.coeff(d)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..len).map(|d| self.coeff(d) - rhs.coeff(d)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;

            fn $method(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

/// `H(t) = Σ_{X ⊆ Σ} (-1)^{|X|} t^{|Δ_X|}` by direct enumeration of subsets.
pub fn mobius_by_inclusion_exclusion(spec: MonoidSpec) -> Result<IntPolynomial> {
    let count = spec.generator_count();
    if count > INCLUSION_EXCLUSION_MAX_GENERATORS {
        return Err(BraidError::GuardExceeded(format!(
            "inclusion-exclusion over 2^{count} subsets (limit 2^{INCLUSION_EXCLUSION_MAX_GENERATORS})"
        )));
    }
    let generators: Vec<SimpleBraid> =
        spec.generators().into_iter().map(|g| spec.simple_of_generator(g)).collect();
    let mut acc = vec![0i64; spec.delta_length() + 1];

    fn dfs(
        spec: &MonoidSpec,
        generators: &[SimpleBraid],
        start: usize,
        current: &SimpleBraid,
        odd: bool,
        acc: &mut [i64],
    ) {
        acc[current.length()] += if odd { -1 } else { 1 };
        for k in start..generators.len() {
            let next = spec.join(current, &generators[k]);
            dfs(spec, generators, k + 1, &next, !odd, acc);
        }
    }
    dfs(&spec, &generators, 0, &spec.unit(), false, &mut acc);
    Ok(IntPolynomial::new(acc.into_iter().map(BigInt::from).collect()))
}

/// `H_n` from the closed formulas: the Artin recursion
/// `H_n = Σ_{k=1}^{n} (-1)^{k+1} t^{k(k-1)/2} H_{n-k}`, or the dual sum
/// `Σ_k (-1)^k (n-1+k)! / ((n-1-k)! k! (k+1)!) t^k`.
pub fn mobius_by_formula(spec: MonoidSpec) -> IntPolynomial {
    let n = spec.n();
    match spec.flavor() {
        Flavor::Artin => {
            let mut h: Vec<IntPolynomial> = vec![IntPolynomial::one(), IntPolynomial::one()];
            for m in 2..=n {
                let mut acc = IntPolynomial::zero();
                for k in 1..=m {
                    let sign = if k % 2 == 1 { 1 } else { -1 };
                    let term = IntPolynomial::monomial(BigInt::from(sign), k * (k - 1) / 2);
                    acc = &acc + &(&term * &h[m - k]);
                }
                h.push(acc);
            }
            h.swap_remove(n)
        }
        Flavor::Dual => {
            let fact = |m: usize| -> BigInt { (1..=m).map(BigInt::from).product() };
            let coeffs = (0..n)
                .map(|k| {
                    let mag = fact(n - 1 + k) / (fact(n - 1 - k) * fact(k) * fact(k + 1));
                    if k % 2 == 0 {
                        mag
                    } else {
                        -mag
                    }
                })
                .collect();
            IntPolynomial::new(coeffs)
        }
    }
}

/// The Möbius polynomial, computed by every applicable method and checked for agreement.
pub fn mobius_polynomial(spec: MonoidSpec) -> Result<IntPolynomial> {
    let formula = mobius_by_formula(spec);
    if spec.generator_count() <= INCLUSION_EXCLUSION_MAX_GENERATORS {
        let direct = mobius_by_inclusion_exclusion(spec)?;
        if direct != formula {
            return Err(BraidError::Inconsistent(format!(
                "Möbius polynomial of {spec}: subsets give {direct}, formula gives {formula}"
            )));
        }
    }
    Ok(formula)
}

/// `λ(k)`, the number of braids of length `k`, for `k = 0..=k_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    spec: MonoidSpec,
    values: Vec<BigUint>,
    cross_checked: bool,
}

impl CountTable {
    pub fn spec(&self) -> MonoidSpec {
        self.spec
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn get(&self, k: usize) -> &BigUint {
        &self.values[k]
    }

    pub fn k_max(&self) -> usize {
        self.values.len() - 1
    }

    /// Whether the values were confirmed by the suffix-count dynamic program.
    pub fn cross_checked(&self) -> bool {
        self.cross_checked
    }
}

/// Series coefficients of `1/H(t)` up to `t^k_max`.
pub fn growth_by_recurrence(h: &IntPolynomial, k_max: usize) -> Vec<BigInt> {
    let mut g: Vec<BigInt> = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut acc = if k == 0 { BigInt::one() } else { BigInt::zero() };
        for d in 1..=k.min(h.degree().unwrap_or(0)) {
            acc -= h.coeff(d) * &g[k - d];
        }
        g.push(acc);
    }
    g
}

/// Growth coefficients from the recurrence `H·G = 1`, confirmed by the
/// suffix-count dynamic program whenever that fits its size guard.
pub fn growth_coefficients(spec: MonoidSpec, k_max: usize) -> Result<CountTable> {
    let h = mobius_polynomial(spec)?;
    let series = growth_by_recurrence(&h, k_max);
    let mut values = Vec::with_capacity(series.len());
    for (k, v) in series.into_iter().enumerate() {
        values.push(v.to_biguint().filter(|v| !v.is_zero()).ok_or_else(|| {
            BraidError::Inconsistent(format!("non-positive growth coefficient at k = {k}"))
        })?);
    }
    let mut cross_checked = false;
    if SuffixTable::fits(spec, k_max) {
        let table = SuffixTable::build(std::sync::Arc::new(SimpleTable::new(spec)), k_max)?;
        for (k, v) in values.iter().enumerate() {
            if table.lambda(k) != v {
                return Err(BraidError::Inconsistent(format!(
                    "λ({k}) of {spec}: recurrence gives {v}, transfer counts give {}",
                    table.lambda(k)
                )));
            }
        }
        cross_checked = true;
    }
    Ok(CountTable { spec, values, cross_checked })
}

/// Smallest positive root of the Möbius polynomial with an exact bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalRoot {
    pub q: f64,
    pub lo: BigRational,
    pub hi: BigRational,
    pub tol: f64,
    /// The root itself when bisection landed on it exactly.
    pub exact: Option<BigRational>,
    /// `H'(q)`, nonzero for a simple root.
    pub derivative: f64,
    /// Advisory messages from the companion-matrix pass.
    pub warnings: Vec<String>,
}

impl CriticalRoot {
    /// Midpoint of the certified bracket (the root itself when exact).
    pub fn midpoint(&self) -> BigRational {
        match &self.exact {
            Some(q) => q.clone(),
            None => (&self.lo + &self.hi) / BigRational::from_integer(2.into()),
        }
    }

    pub fn width(&self) -> f64 {
        (&self.hi - &self.lo).to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "q": self.q,
            "interval": [self.lo.to_string(), self.hi.to_string()],
            "interval_f64": [self.lo.to_f64(), self.hi.to_f64()],
            "width": self.width(),
            "tol": self.tol,
            "exact": self.exact.as_ref().map(|q| q.to_string()),
            "derivative": self.derivative,
            "warnings": self.warnings,
        })
    }
}

/// Certified smallest positive root of `H`, bracketed to width at most `tol`.
pub fn critical_root(spec: MonoidSpec, tol: f64) -> Result<CriticalRoot> {
    let h = mobius_polynomial(spec)?;
    critical_root_of(&h, spec.generator_count(), tol)
}

/// Root isolation for a Möbius polynomial on an alphabet of `alphabet` letters.
///
/// Growth is at most `alphabet^k`, so the root is at least `1/alphabet` and
/// the grid scan starts there.
pub fn critical_root_of(h: &IntPolynomial, alphabet: usize, tol: f64) -> Result<CriticalRoot> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(BraidError::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let sign = |t: &BigRational| h.eval_rational(t).signum();
    let grid = 1024i64;
    let rat = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    let first = (grid / alphabet.max(1) as i64).max(1) - 1;
    let mut bracket = None;
    for i in first.max(0)..grid {
        let (a, b) = (rat(i, grid), rat(i + 1, grid));
        if sign(&a).is_positive() && !sign(&b).is_positive() {
            bracket = Some((a, b));
            break;
        }
    }
    let (mut lo, mut hi) = bracket.ok_or_else(|| {
        BraidError::Inconsistent(format!("no sign change of {h} found on (0, 1)"))
    })?;
    let tol_q = BigRational::from_float(tol).expect("finite tolerance");
    let two = BigRational::from_integer(2.into());
    let mut exact = if sign(&hi).is_zero() { Some(hi.clone()) } else { None };
    while exact.is_none() && &hi - &lo > tol_q {
        let mid = (&lo + &hi) / &two;
        match sign(&mid) {
            s if s.is_positive() => lo = mid,
            s if s.is_negative() => hi = mid,
            _ => exact = Some(mid),
        }
    }
    if let Some(root) = &exact {
        // A strict sign change around the exact root, inside the requested width.
        let mut w = &tol_q / &two;
        loop {
            lo = root - &w;
            hi = root + &w;
            if sign(&lo).is_positive() && sign(&hi).is_negative() {
                break;
            }
            w = &w / &two;
        }
    }
    let q = match &exact {
        Some(root) => root.to_f64(),
        None => ((&lo + &hi) / &two).to_f64(),
    }
    .unwrap_or(f64::NAN);
    let derivative = h.derivative().eval_f64(q);
    let mut warnings = Vec::new();
    if derivative.abs() < 1e-12 {
        warnings.push(format!("H'(q) = {derivative:e} is numerically zero"));
    }
    warnings.extend(companion_root_warnings(h, q));
    Ok(CriticalRoot { q, lo, hi, tol, exact, derivative, warnings })
}

/// Checks numerically that `q` is the unique root of smallest modulus.
fn companion_root_warnings(h: &IntPolynomial, q: f64) -> Vec<String> {
    let Some(deg) = h.degree().filter(|&d| d >= 1) else {
        return vec!["polynomial has no roots".into()];
    };
    let lead = h.coeff(deg).to_f64().unwrap_or(f64::NAN);
    let mut m = DMatrix::<f64>::zeros(deg, deg);
    for r in 1..deg {
        m[(r, r - 1)] = 1.0;
    }
    for r in 0..deg {
        m[(r, deg - 1)] = -h.coeff(r).to_f64().unwrap_or(f64::NAN) / lead;
    }
    let roots = m.complex_eigenvalues();
    let mut warnings = Vec::new();
    let closest = roots
        .iter()
        .map(|z| ((z.re - q).powi(2) + z.im.powi(2)).sqrt())
        .fold(f64::INFINITY, f64::min);
    if closest > 1e-6 {
        warnings.push(format!("companion matrix has no eigenvalue near q = {q}"));
    }
    let near = roots.iter().filter(|z| z.norm() <= q + 1e-8).count();
    if near != 1 {
        warnings.push(format!("{near} roots have modulus within 1e-8 of q = {q}"));
    }
    warnings
}

/// Tail diagnostics of `λ(k+1)/λ(k)` against `1/q`.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthDiagnostics {
    pub ks: Vec<usize>,
    /// `λ(k+1)/λ(k) - 1/q`.
    pub ratio_deviation: Vec<f64>,
    /// `λ(k)·q^k`.
    pub constant_estimate: Vec<f64>,
    /// Whether `|ratio_deviation|` is non-increasing along the tail.
    pub monotone_tail: bool,
}

/// Requires `k_max ≥ 30`; reports on the last ten `k`.
pub fn growth_ratio_diagnostics(table: &CountTable, root: &CriticalRoot) -> Result<GrowthDiagnostics> {
    let k_max = table.k_max();
    if k_max < 30 {
        return Err(BraidError::InvalidParameter(format!(
            "growth diagnostics need k_max >= 30, got {k_max}"
        )));
    }
    let q = root.midpoint();
    let inv_q = q.recip();
    let ks: Vec<usize> = (k_max - 10..k_max).collect();
    let lam = |k: usize| BigRational::from_integer(BigInt::from(table.get(k).clone()));
    let mut ratio_deviation = Vec::new();
    let mut constant_estimate = Vec::new();
    for &k in &ks {
        let dev = lam(k + 1) / lam(k) - &inv_q;
        ratio_deviation.push(dev.to_f64().unwrap_or(f64::NAN));
        let c = lam(k) * num_traits::pow(q.clone(), k);
        constant_estimate.push(c.to_f64().unwrap_or(f64::NAN));
    }
    let monotone_tail = ratio_deviation.windows(2).all(|w| w[1].abs() <= w[0].abs());
    Ok(GrowthDiagnostics { ks, ratio_deviation, constant_estimate, monotone_tail })
}

/// The arrow digraph on the simples other than `e` and `Δ`.
#[derive(Debug, Clone)]
pub struct CharneyGraph<'a> {
    table: &'a SimpleTable,
    vertices: Vec<usize>,
}

impl<'a> CharneyGraph<'a> {
    pub fn new(table: &'a SimpleTable) -> Result<Self> {
        if table.spec().n() < 3 {
            return Err(BraidError::InvalidParameter(
                "the Charney graph needs at least 3 strands".into(),
            ));
        }
        let vertices = (1..table.len() - 1).collect();
        Ok(CharneyGraph { table, vertices })
    }

    /// Vertex list as indices into the simple table.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.table.arrow(from, to)
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.table.arrow(v, v)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &a in &self.vertices {
            for &b in &self.vertices {
                if self.has_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Every vertex reachable from the first one, along arrows and against them.
    pub fn is_strongly_connected(&self) -> bool {
        self.reaches_all(true) && self.reaches_all(false)
    }

    fn reaches_all(&self, forward: bool) -> bool {
        let count = self.vertices.len();
        if count == 0 {
            return true;
        }
        let mut seen = vec![false; count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(a) = queue.pop_front() {
            for b in 0..count {
                if seen[b] {
                    continue;
                }
                let (x, y) = (self.vertices[a], self.vertices[b]);
                let edge = if forward { self.has_edge(x, y) } else { self.has_edge(y, x) };
                if edge {
                    seen[b] = true;
                    reached += 1;
                    queue.push_back(b);
                }
            }
        }
        reached == count
    }

    /// Vertices carrying a self-loop.
    pub fn loops(&self) -> Vec<usize> {
        self.vertices.iter().copied().filter(|&v| self.has_loop(v)).collect()
    }

    /// Whether each generator, as a vertex, has a self-loop.
    pub fn generators_have_loops(&self) -> bool {
        let spec = self.table.spec();
        spec.generators().into_iter().all(|g| {
            let v = self.table.index_of(&spec.simple_of_generator(g));
            self.has_loop(v)
        })
    }
}

/// Equivalence classes of all words of one length under the defining relations.
#[derive(Debug, Clone)]
pub struct WordClasses {
    pub spec: MonoidSpec,
    pub k: usize,
    /// Class id of every word, indexed by the base-`|Σ|` encoding of its letters.
    pub class_of: Vec<u32>,
    /// Least word (as alphabet indices) of each class.
    pub representatives: Vec<Vec<usize>>,
}

impl WordClasses {
    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn encode(&self, letters: &[usize]) -> usize {
        let base = self.spec.generator_count();
        letters.iter().fold(0, |acc, &l| acc * base + l)
    }

    pub fn decode(&self, mut code: usize) -> Vec<usize> {
        let base = self.spec.generator_count();
        let mut letters = vec![0; self.k];
        for slot in letters.iter_mut().rev() {
            *slot = code % base;
            code /= base;
        }
        letters
    }
}

/// The defining relations as pairs of equal-length words over alphabet indices.
pub fn presentation_relations(spec: MonoidSpec) -> Vec<(Vec<usize>, Vec<usize>)> {
    let idx = |g| spec.generator_index(g).expect("generator of this monoid");
    let mut rel = Vec::new();
    match spec.flavor() {
        Flavor::Artin => {
            let m = spec.n() - 1;
            for i in 0..m {
                for j in 0..m {
                    if i.abs_diff(j) >= 2 && i < j {
                        rel.push((vec![i, j], vec![j, i]));
                    } else if j == i + 1 {
                        rel.push((vec![i, j, i], vec![j, i, j]));
                    }
                }
            }
        }
        Flavor::Dual => {
            use crate::monoid::Generator as G;
            let n = spec.n();
            for i in 1..=n {
                for j in i + 1..=n {
                    for k in j + 1..=n {
                        let a = vec![idx(G::dual(i, j)), idx(G::dual(j, k))];
                        let b = vec![idx(G::dual(j, k)), idx(G::dual(k, i))];
                        let c = vec![idx(G::dual(k, i)), idx(G::dual(i, j))];
                        rel.push((a.clone(), b.clone()));
                        rel.push((b, c.clone()));
                        rel.push((a, c));
                        for l in k + 1..=n {
                            // (i,j)(k,l) disjoint and (i,l)(j,k) nested commute
                            rel.push((
                                vec![idx(G::dual(i, j)), idx(G::dual(k, l))],
                                vec![idx(G::dual(k, l)), idx(G::dual(i, j))],
                            ));
                            rel.push((
                                vec![idx(G::dual(i, l)), idx(G::dual(j, k))],
                                vec![idx(G::dual(j, k)), idx(G::dual(i, l))],
                            ));
                        }
                    }
                }
            }
        }
    }
    rel
}

/// Partitions all words of length `k` into classes by closing under single
/// relation applications. Guarded to `n ≤ 4`, `k ≤ 8`.
pub fn enumerate_braids_bruteforce(spec: MonoidSpec, k: usize) -> Result<WordClasses> {
    if spec.n() > 4 || k > 8 {
        return Err(BraidError::GuardExceeded(format!(
            "brute-force word classes need n <= 4 and k <= 8 (got n = {}, k = {k})",
            spec.n()
        )));
    }
    let base = spec.generator_count();
    let total = base.pow(k as u32);
    let mut rewrites: HashMap<Vec<usize>, Vec<Vec<usize>>> = HashMap::new();
    for (a, b) in presentation_relations(spec) {
        rewrites.entry(a.clone()).or_default().push(b.clone());
        rewrites.entry(b).or_default().push(a);
    }
    let mut parent: Vec<u32> = (0..total as u32).collect();
    fn root(parent: &mut [u32], mut a: u32) -> u32 {
        while parent[a as usize] != a {
            parent[a as usize] = parent[parent[a as usize] as usize];
            a = parent[a as usize];
        }
        a
    }
    let mut letters = vec![0usize; k];
    for code in 0..total {
        let mut c = code;
        for slot in letters.iter_mut().rev() {
            *slot = c % base;
            c /= base;
        }
        for (lhs, rhss) in &rewrites {
            let len = lhs.len();
            if len > k {
                continue;
            }
            for pos in 0..=k - len {
                if letters[pos..pos + len] != lhs[..] {
                    continue;
                }
                for rhs in rhss {
                    let mut other = letters.clone();
                    other[pos..pos + len].copy_from_slice(rhs);
                    let other_code = other.iter().fold(0, |acc, &l| acc * base + l);
                    let (ra, rb) = (root(&mut parent, code as u32), root(&mut parent, other_code as u32));
                    if ra != rb {
                        parent[ra.max(rb) as usize] = ra.min(rb);
                    }
                }
            }
        }
    }
    let mut class_id: HashMap<u32, u32> = HashMap::new();
    let mut class_of = Vec::with_capacity(total);
    let mut representatives = Vec::new();
    let mut classes = WordClasses { spec, k, class_of: Vec::new(), representatives: Vec::new() };
    for code in 0..total {
        let r = root(&mut parent, code as u32);
        let id = *class_id.entry(r).or_insert_with(|| {
            representatives.push(classes.decode(code));
            representatives.len() as u32 - 1
        });
        class_of.push(id);
    }
    classes.class_of = class_of;
    classes.representatives = representatives;
    Ok(classes)
}

/// The generator set indexed by `R`-classes, shared by the transfer counts.
pub(crate) fn right_classes(table: &SimpleTable) -> (Vec<GeneratorSet>, Vec<usize>) {
    let mut classes: Vec<GeneratorSet> = Vec::new();
    let mut slot: HashMap<GeneratorSet, usize> = HashMap::new();
    let mut class_of = Vec::with_capacity(table.len());
    for idx in 0..table.len() {
        let r = table.right(idx);
        let c = *slot.entry(r).or_insert_with(|| {
            classes.push(r);
            classes.len() - 1
        });
        class_of.push(c);
    }
    (classes, class_of)
}
