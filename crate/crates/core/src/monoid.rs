//! The two braid monoids, their generator alphabets and the lattice of
//! simple braids.
//!
//! Simple braids of the Artin monoid are stored as permutations in one-line
//! form. Appending a generator `σ_i` on the right swaps the entries at
//! positions `i` and `i + 1`, so a word `a_1 … a_k` maps to the composite
//! `s_{a_1} ∘ … ∘ s_{a_k}`. Under this convention the right set of a simple
//! braid is its set of right descents (position pairs out of order) and its
//! left set is the set of left descents (value `i + 1` placed before `i`).
//!
//! Simple braids of the dual monoid are non-crossing partitions of
//! `{1, …, n}`, stored as the array assigning to each point the minimum of
//! its block.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{BraidError, Result};

/// Largest strand count accepted for the Artin monoid (8! = 40320 simples).
pub const ARTIN_MAX_STRANDS: usize = 8;
/// Largest strand count accepted for the dual monoid (Catalan(12) = 208012 simples).
pub const DUAL_MAX_STRANDS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Artin,
    Dual,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::Artin => f.write_str("artin"),
            Flavor::Dual => f.write_str("dual"),
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "artin" => Ok(Flavor::Artin),
            "dual" => Ok(Flavor::Dual),
            other => Err(format!("unknown monoid flavor {other:?} (expected artin or dual)")),
        }
    }
}

/// A generator, identified by the pair of strands it crosses.
///
/// For the Artin monoid `σ_i` is the pair `(i, i + 1)`; for the dual monoid
/// `σ_{i,j}` is the pair `(i, j)` with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub i: u8,
    pub j: u8,
}

impl Generator {
    pub fn artin(i: usize) -> Self {
        Generator { i: i as u8, j: i as u8 + 1 }
    }

    /// The dual generator on the unordered pair `{a, b}`.
    pub fn dual(a: usize, b: usize) -> Self {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        Generator { i: i as u8, j: j as u8 }
    }
}

/// A set of generators, as a bitmask over the alphabet order of a [`MonoidSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GeneratorSet(pub u128);

impl GeneratorSet {
    pub const EMPTY: GeneratorSet = GeneratorSet(0);

    pub fn full(count: usize) -> Self {
        if count == 128 {
            GeneratorSet(u128::MAX)
        } else {
            GeneratorSet((1u128 << count) - 1)
        }
    }

    pub fn singleton(index: usize) -> Self {
        GeneratorSet(1u128 << index)
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    pub fn insert(&mut self, index: usize) {
        self.0 |= 1u128 << index;
    }

    pub fn is_subset(self, other: GeneratorSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: GeneratorSet) -> Self {
        GeneratorSet(self.0 | other.0)
    }

    pub fn intersection(self, other: GeneratorSet) -> Self {
        GeneratorSet(self.0 & other.0)
    }

    pub fn difference(self, other: GeneratorSet) -> Self {
        GeneratorSet(self.0 & !other.0)
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

/// A simple braid: a left divisor of the Garside element.
///
/// Ordering is by `(length, code)`, which puts the unit first and the Garside
/// element last in any sorted list of simples.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleBraid {
    length: u32,
    code: Box<[u8]>,
}

impl SimpleBraid {
    pub fn length(&self) -> usize {
        self.length as usize
    }

    /// One-line permutation (Artin) or block-minimum array (dual), 1-based values.
    pub fn code(&self) -> &[u8] {
        &self.code
    }

    pub fn is_unit(&self) -> bool {
        self.length == 0
    }

    fn new(code: Vec<u8>, length: usize) -> Self {
        SimpleBraid { length: length as u32, code: code.into_boxed_slice() }
    }
}

/// Identifies one of the two monoids on `n` strands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonoidSpec {
    n: usize,
    flavor: Flavor,
}

impl fmt::Display for MonoidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={}", self.flavor, self.n)
    }
}

impl MonoidSpec {
    pub fn new(flavor: Flavor, n: usize) -> Result<Self> {
        let max = match flavor {
            Flavor::Artin => ARTIN_MAX_STRANDS,
            Flavor::Dual => DUAL_MAX_STRANDS,
        };
        if !(2..=max).contains(&n) {
            return Err(BraidError::UnsupportedSize { flavor, n, max });
        }
        Ok(MonoidSpec { n, flavor })
    }

    pub fn artin(n: usize) -> Result<Self> {
        Self::new(Flavor::Artin, n)
    }

    pub fn dual(n: usize) -> Result<Self> {
        Self::new(Flavor::Dual, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn generator_count(&self) -> usize {
        match self.flavor {
            Flavor::Artin => self.n - 1,
            Flavor::Dual => self.n * (self.n - 1) / 2,
        }
    }

    /// The alphabet: `σ_1, …, σ_{n-1}` or `σ_{1,2}, σ_{1,3}, …, σ_{n-1,n}`.
    pub fn generators(&self) -> Vec<Generator> {
        match self.flavor {
            Flavor::Artin => (1..self.n).map(Generator::artin).collect(),
            Flavor::Dual => (1..self.n)
                .flat_map(|i| (i + 1..=self.n).map(move |j| Generator::dual(i, j)))
                .collect(),
        }
    }

    pub fn generator(&self, index: usize) -> Generator {
        match self.flavor {
            Flavor::Artin => Generator::artin(index + 1),
            Flavor::Dual => {
                let mut rest = index;
                for i in 1..self.n {
                    let row = self.n - i;
                    if rest < row {
                        return Generator::dual(i, i + 1 + rest);
                    }
                    rest -= row;
                }
                panic!("generator index {index} out of range for {self}")
            }
        }
    }

    /// Position of `g` in the alphabet, or `None` if `g` is not a generator of this monoid.
    pub fn generator_index(&self, g: Generator) -> Option<usize> {
        let (i, j) = (g.i as usize, g.j as usize);
        if i < 1 || j > self.n || i >= j {
            return None;
        }
        match self.flavor {
            Flavor::Artin => (j == i + 1).then_some(i - 1),
            Flavor::Dual => Some((i - 1) * self.n - (i - 1) * i / 2 + (j - i - 1)),
        }
    }

    pub fn generator_name(&self, g: Generator) -> String {
        match self.flavor {
            Flavor::Artin => format!("s{}", g.i),
            Flavor::Dual if self.n < 10 => format!("({}{})", g.i, g.j),
            Flavor::Dual => format!("({},{})", g.i, g.j),
        }
    }

    pub fn all_generators(&self) -> GeneratorSet {
        GeneratorSet::full(self.generator_count())
    }

    /// Length of the Garside element: `n(n-1)/2` (Artin) or `n - 1` (dual).
    pub fn delta_length(&self) -> usize {
        match self.flavor {
            Flavor::Artin => self.n * (self.n - 1) / 2,
            Flavor::Dual => self.n - 1,
        }
    }

    pub fn unit(&self) -> SimpleBraid {
        SimpleBraid::new((1..=self.n as u8).collect(), 0)
    }

    pub fn delta(&self) -> SimpleBraid {
        match self.flavor {
            Flavor::Artin => SimpleBraid::new((1..=self.n as u8).rev().collect(), self.delta_length()),
            Flavor::Dual => SimpleBraid::new(vec![1; self.n], self.n - 1),
        }
    }

    pub fn is_delta(&self, x: &SimpleBraid) -> bool {
        x.length() == self.delta_length()
    }

    pub fn simple_of_generator(&self, g: Generator) -> SimpleBraid {
        self.simple_product(&self.unit(), g)
            .expect("a generator is always simple")
    }

    /// Number of simple braids: `n!` or the Catalan number `C_n`.
    pub fn simple_count(&self) -> u64 {
        let n = self.n as u64;
        match self.flavor {
            Flavor::Artin => (1..=n).product(),
            Flavor::Dual => {
                // C_n = binom(2n, n) / (n + 1), built incrementally to stay in u64
                let mut c: u64 = 1;
                for k in 0..n {
                    c = c * 2 * (2 * k + 1) / (k + 2);
                }
                c
            }
        }
    }

    /// All simple braids, unit first, Garside element last, otherwise sorted
    /// by `(length, code)`.
    pub fn enumerate_simples(&self) -> Vec<SimpleBraid> {
        let mut out = match self.flavor {
            Flavor::Artin => enumerate_permutations(self.n),
            Flavor::Dual => enumerate_noncrossing(self.n),
        };
        out.sort();
        out
    }

    /// `L(x)`: the generators that left-divide `x`.
    pub fn left_set(&self, x: &SimpleBraid) -> GeneratorSet {
        let mut set = GeneratorSet::EMPTY;
        match self.flavor {
            Flavor::Artin => {
                let pos = inverse_positions(&x.code);
                for i in 1..self.n {
                    if pos[i + 1] < pos[i] {
                        set.insert(i - 1);
                    }
                }
            }
            Flavor::Dual => {
                let c = &x.code;
                for (idx, g) in self.generators().into_iter().enumerate() {
                    if c[g.i as usize - 1] == c[g.j as usize - 1] {
                        set.insert(idx);
                    }
                }
            }
        }
        set
    }

    /// `R(x)`: the generators `σ` such that `x·σ` is not simple.
    pub fn right_set(&self, x: &SimpleBraid) -> GeneratorSet {
        let mut set = GeneratorSet::EMPTY;
        match self.flavor {
            Flavor::Artin => {
                for i in 1..self.n {
                    if x.code[i - 1] > x.code[i] {
                        set.insert(i - 1);
                    }
                }
            }
            Flavor::Dual => {
                for (idx, g) in self.generators().into_iter().enumerate() {
                    if dual_straddles(&x.code, g.i as usize, g.j as usize) {
                        set.insert(idx);
                    }
                }
            }
        }
        set
    }

    /// `x → y`, i.e. `R(x) ⊇ L(y)`.
    pub fn arrow(&self, x: &SimpleBraid, y: &SimpleBraid) -> bool {
        self.left_set(y).is_subset(self.right_set(x))
    }

    /// `x·σ` if it is simple, `None` otherwise.
    pub fn simple_product(&self, x: &SimpleBraid, g: Generator) -> Option<SimpleBraid> {
        let (u, v) = (g.i as usize, g.j as usize);
        match self.flavor {
            Flavor::Artin => {
                if x.code[u - 1] > x.code[v - 1] {
                    return None;
                }
                let mut code = x.code.to_vec();
                code.swap(u - 1, v - 1);
                Some(SimpleBraid::new(code, x.length() + 1))
            }
            Flavor::Dual => {
                self.generator_index(g)?;
                if dual_straddles(&x.code, u, v) {
                    return None;
                }
                let (a, b) = (x.code[u - 1], x.code[v - 1]);
                let (keep, drop) = (a.min(b), a.max(b));
                let code = x.code.iter().map(|&c| if c == drop { keep } else { c }).collect();
                Some(SimpleBraid::new(code, x.length() + 1))
            }
        }
    }

    /// The simple `z` with `σ·z = x`.
    pub fn left_quotient(&self, g: Generator, x: &SimpleBraid) -> Result<SimpleBraid> {
        let (u, v) = (g.i as usize, g.j as usize);
        let not_divisor = || BraidError::NotLeftDivisor { generator: self.generator_name(g) };
        match self.flavor {
            Flavor::Artin => {
                let pos = inverse_positions(&x.code);
                if v != u + 1 || pos[v] > pos[u] {
                    return Err(not_divisor());
                }
                let code = x
                    .code
                    .iter()
                    .map(|&c| match c as usize {
                        c if c == u => v as u8,
                        c if c == v => u as u8,
                        c => c as u8,
                    })
                    .collect();
                Ok(SimpleBraid::new(code, x.length() - 1))
            }
            Flavor::Dual => {
                if u == 0 || v > self.n || u >= v || x.code[u - 1] != x.code[v - 1] {
                    return Err(not_divisor());
                }
                // The block of u and v splits into its points in [u, v) and the rest.
                let block = x.code[u - 1];
                let mut code: Vec<u8> = x.code.to_vec();
                for t in u..v {
                    if code[t - 1] == block {
                        code[t - 1] = 0;
                    }
                }
                Ok(SimpleBraid::new(relabel_by_minimum(&code), x.length() - 1))
            }
        }
    }

    /// Least upper bound in `(S_n, ≤_l)`.
    pub fn join(&self, x: &SimpleBraid, y: &SimpleBraid) -> SimpleBraid {
        match self.flavor {
            Flavor::Artin => {
                let n = self.n;
                let mut rel = before_relation(&x.code);
                let other = before_relation(&y.code);
                for (r, o) in rel.iter_mut().zip(&other) {
                    *r |= *o;
                }
                transitive_closure(&mut rel, n);
                permutation_from_inversions(&rel, n)
            }
            Flavor::Dual => {
                let mut parent: Vec<usize> = (0..=self.n).collect();
                for code in [&x.code, &y.code] {
                    for (t, &m) in code.iter().enumerate() {
                        union(&mut parent, t + 1, m as usize);
                    }
                }
                // Merge crossing blocks until the partition is non-crossing.
                loop {
                    let code: Vec<u8> = (1..=self.n).map(|t| find(&mut parent, t) as u8).collect();
                    let code = relabel_by_minimum(&code);
                    match find_crossing(&code) {
                        Some((a, b)) => union(&mut parent, a, b),
                        None => {
                            let length = self.n - count_blocks(&code);
                            return SimpleBraid::new(code, length);
                        }
                    }
                }
            }
        }
    }

    /// Greatest lower bound in `(S_n, ≤_l)`.
    pub fn meet(&self, x: &SimpleBraid, y: &SimpleBraid) -> SimpleBraid {
        match self.flavor {
            Flavor::Artin => {
                let n = self.n;
                // Non-inversions of the meet are the closure of both non-inversion sets.
                let mut rel = complement_relation(&before_relation(&x.code), n);
                let other = complement_relation(&before_relation(&y.code), n);
                for (r, o) in rel.iter_mut().zip(&other) {
                    *r |= *o;
                }
                transitive_closure_ascending(&mut rel, n);
                permutation_from_inversions(&complement_relation(&rel, n), n)
            }
            Flavor::Dual => {
                let mut first_seen: HashMap<(u8, u8), u8> = HashMap::new();
                let code: Vec<u8> = (0..self.n)
                    .map(|t| *first_seen.entry((x.code[t], y.code[t])).or_insert(t as u8 + 1))
                    .collect();
                let length = self.n - count_blocks(&code);
                SimpleBraid::new(code, length)
            }
        }
    }

    /// `x ≤_l y` inside the lattice of simples.
    pub fn simple_left_divides(&self, x: &SimpleBraid, y: &SimpleBraid) -> bool {
        x.length() <= y.length() && self.meet(x, y) == *x
    }

    /// `Δ_X`, the join of the generators in `X`.
    pub fn delta_of_subset(&self, set: GeneratorSet) -> SimpleBraid {
        set.iter().fold(self.unit(), |acc, idx| {
            let g = self.simple_of_generator(self.generator(idx));
            self.join(&acc, &g)
        })
    }

    /// Lexicographically smallest word (in alphabet order) representing `x`.
    pub fn word_of(&self, x: &SimpleBraid) -> Vec<Generator> {
        let mut word = Vec::with_capacity(x.length());
        let mut rest = x.clone();
        while let Some(idx) = self.left_set(&rest).first() {
            let g = self.generator(idx);
            rest = self.left_quotient(g, &rest).expect("generator taken from the left set");
            word.push(g);
        }
        word
    }

    /// Short human-readable label: `e`, `D`, index digits (`121`) or block
    /// products (`(12)(23)`).
    pub fn simple_name(&self, x: &SimpleBraid) -> String {
        if x.is_unit() {
            return "e".into();
        }
        if self.is_delta(x) {
            return "D".into();
        }
        match self.flavor {
            Flavor::Artin => self.word_of(x).iter().map(|g| g.i.to_string()).collect(),
            Flavor::Dual => blocks_of(&x.code)
                .iter()
                .flat_map(|b| b.windows(2).map(|w| Generator::dual(w[0], w[1])))
                .map(|g| self.generator_name(g))
                .collect(),
        }
    }

    /// Image of a dual simple in the symmetric group: each block
    /// `t_1 < … < t_k` is the cycle `t_1 → t_2 → … → t_k → t_1`.
    pub fn dual_permutation(&self, x: &SimpleBraid) -> Vec<u8> {
        let mut perm: Vec<u8> = (1..=self.n as u8).collect();
        for block in blocks_of(&x.code) {
            for (k, &t) in block.iter().enumerate() {
                perm[t - 1] = block[(k + 1) % block.len()] as u8;
            }
        }
        perm
    }

    /// The mirror image `x*` of an Artin simple (reversal of any word).
    ///
    /// Word reversal is not compatible with the dual relations, so dual
    /// simples are rejected.
    pub fn mirror(&self, x: &SimpleBraid) -> Result<SimpleBraid> {
        if self.flavor != Flavor::Artin {
            return Err(BraidError::InvalidParameter(
                "word reversal does not induce a mirror map on the dual monoid".into(),
            ));
        }
        let mut word = self.word_of(x);
        word.reverse();
        Ok(word.into_iter().fold(self.unit(), |acc, g| {
            self.simple_product(&acc, g).expect("reversed word of an Artin simple is simple")
        }))
    }
}

/// `σ_{u,v} ∈ R(x)` for a dual simple: some block meets both `{u+1, …, v}`
/// and its complement.
fn dual_straddles(code: &[u8], u: usize, v: usize) -> bool {
    (u + 1..=v).any(|t| {
        let m = code[t - 1];
        code.iter()
            .enumerate()
            .any(|(s, &c)| c == m && (s + 1 <= u || s + 1 > v))
    })
}

/// Blocks of a block-minimum code, each sorted, ordered by minimum.
pub(crate) fn blocks_of(code: &[u8]) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<u8, usize> = HashMap::new();
    for (t, &m) in code.iter().enumerate() {
        let k = *slot.entry(m).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[k].push(t + 1);
    }
    blocks
}

fn count_blocks(code: &[u8]) -> usize {
    code.iter().enumerate().filter(|&(t, &m)| m as usize == t + 1).count()
}

/// Rewrites arbitrary block labels as block minima.
fn relabel_by_minimum(labels: &[u8]) -> Vec<u8> {
    let mut first_seen: HashMap<u8, u8> = HashMap::new();
    labels
        .iter()
        .enumerate()
        .map(|(t, &l)| *first_seen.entry(l).or_insert(t as u8 + 1))
        .collect()
}

/// Two points from distinct crossing blocks, if the partition is crossing.
fn find_crossing(code: &[u8]) -> Option<(usize, usize)> {
    let n = code.len();
    for a in 0..n {
        for b in a + 1..n {
            if code[b] == code[a] {
                continue;
            }
            for c in b + 1..n {
                if code[c] != code[a] {
                    continue;
                }
                for d in c + 1..n {
                    if code[d] == code[b] {
                        return Some((a + 1, b + 1));
                    }
                }
            }
        }
    }
    None
}

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        parent[hi] = lo;
    }
}

/// `pos[v]` is the position of value `v` in a one-line permutation.
fn inverse_positions(code: &[u8]) -> Vec<usize> {
    let mut pos = vec![0; code.len() + 1];
    for (p, &v) in code.iter().enumerate() {
        pos[v as usize] = p;
    }
    pos
}

/// `rel[a * n + b]` (for values `a < b`, 0-based) holds when `b` precedes `a`,
/// i.e. the value pair is an inversion.
fn before_relation(code: &[u8]) -> Vec<bool> {
    let n = code.len();
    let pos = inverse_positions(code);
    let mut rel = vec![false; n * n];
    for a in 1..=n {
        for b in a + 1..=n {
            rel[(a - 1) * n + (b - 1)] = pos[b] < pos[a];
        }
    }
    rel
}

fn complement_relation(rel: &[bool], n: usize) -> Vec<bool> {
    let mut out = vec![false; n * n];
    for a in 0..n {
        for b in a + 1..n {
            out[a * n + b] = !rel[a * n + b];
        }
    }
    out
}

/// Closure of an inversion relation: `(a, b)` and `(b, c)` with `a < b < c`
/// force `(a, c)`.
fn transitive_closure(rel: &mut [bool], n: usize) {
    transitive_closure_ascending(rel, n)
}

fn transitive_closure_ascending(rel: &mut [bool], n: usize) {
    // Chains a < b < c only ever compose through the middle value.
    let mut changed = true;
    while changed {
        changed = false;
        for a in 0..n {
            for b in a + 1..n {
                if !rel[a * n + b] {
                    continue;
                }
                for c in b + 1..n {
                    if rel[b * n + c] && !rel[a * n + c] {
                        rel[a * n + c] = true;
                        changed = true;
                    }
                }
            }
        }
    }
}

fn permutation_from_inversions(rel: &[bool], n: usize) -> SimpleBraid {
    let mut values: Vec<u8> = (1..=n as u8).collect();
    values.sort_by(|&x, &y| {
        let (a, b) = (x.min(y) as usize - 1, x.max(y) as usize - 1);
        if a == b {
            return std::cmp::Ordering::Equal;
        }
        // larger value first exactly when the pair is an inversion
        let larger_first = rel[a * n + b];
        let x_first = (x > y) == larger_first;
        if x_first {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    let length = rel.iter().filter(|&&r| r).count();
    SimpleBraid::new(values, length)
}

fn inversion_count(code: &[u8]) -> usize {
    let mut count = 0;
    for a in 0..code.len() {
        for b in a + 1..code.len() {
            if code[a] > code[b] {
                count += 1;
            }
        }
    }
    count
}

fn enumerate_permutations(n: usize) -> Vec<SimpleBraid> {
    fn rec(prefix: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<SimpleBraid>) {
        let n = used.len();
        if prefix.len() == n {
            let len = inversion_count(prefix);
            out.push(SimpleBraid::new(prefix.clone(), len));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v as u8 + 1);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

fn enumerate_noncrossing(n: usize) -> Vec<SimpleBraid> {
    // Points are placed left to right; point t joins an open block only if no
    // block touching the gap since that block's last point reaches back past it.
    fn rec(code: &mut Vec<u8>, last: &mut Vec<usize>, n: usize, out: &mut Vec<SimpleBraid>) {
        let t = code.len() + 1;
        if t > n {
            let len = n - count_blocks(code);
            out.push(SimpleBraid::new(code.clone(), len));
            return;
        }
        // new block
        code.push(t as u8);
        last.push(t);
        rec(code, last, n, out);
        last.pop();
        code.pop();

        let minima: Vec<u8> = {
            let mut m: Vec<u8> = code.clone();
            m.sort();
            m.dedup();
            m
        };
        for m in minima {
            let l = last[m as usize - 1];
            // any point strictly between l and t must belong to a block with minimum > l
            let ok = (l + 1..t).all(|s| code[s - 1] as usize > l);
            if !ok {
                continue;
            }
            code.push(m);
            let saved = last[m as usize - 1];
            last[m as usize - 1] = t;
            last.push(t);
            rec(code, last, n, out);
            last.pop();
            last[m as usize - 1] = saved;
            code.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut Vec::with_capacity(n), n, &mut out);
    out
}

/// The simples of a monoid with their left and right sets, indexed in
/// [`MonoidSpec::enumerate_simples`] order.
#[derive(Debug, Clone)]
pub struct SimpleTable {
    spec: MonoidSpec,
    simples: Vec<SimpleBraid>,
    left: Vec<GeneratorSet>,
    right: Vec<GeneratorSet>,
    index: HashMap<SimpleBraid, usize>,
}

impl SimpleTable {
    pub fn new(spec: MonoidSpec) -> Self {
        let simples = spec.enumerate_simples();
        let left = simples.iter().map(|x| spec.left_set(x)).collect();
        let right = simples.iter().map(|x| spec.right_set(x)).collect();
        let index = simples.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        SimpleTable { spec, simples, left, right, index }
    }

    pub fn spec(&self) -> MonoidSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.simples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simples.is_empty()
    }

    pub fn simples(&self) -> &[SimpleBraid] {
        &self.simples
    }

    pub fn simple(&self, idx: usize) -> &SimpleBraid {
        &self.simples[idx]
    }

    pub fn index_of(&self, x: &SimpleBraid) -> usize {
        self.index[x]
    }

    pub fn unit_index(&self) -> usize {
        0
    }

    pub fn delta_index(&self) -> usize {
        self.simples.len() - 1
    }

    pub fn left(&self, idx: usize) -> GeneratorSet {
        self.left[idx]
    }

    pub fn right(&self, idx: usize) -> GeneratorSet {
        self.right[idx]
    }

    pub fn length(&self, idx: usize) -> usize {
        self.simples[idx].length()
    }

    pub fn arrow(&self, from: usize, to: usize) -> bool {
        self.left[to].is_subset(self.right[from])
    }

    pub fn name(&self, idx: usize) -> String {
        self.spec.simple_name(&self.simples[idx])
    }

    /// Index of the simple called `name` (as produced by [`MonoidSpec::simple_name`]).
    pub fn find_by_name(&self, name: &str) -> Option<usize> {
        (0..self.len()).find(|&i| self.name(i) == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(spec: &MonoidSpec, letters: &[Generator]) -> SimpleBraid {
        letters
            .iter()
            .fold(spec.unit(), |acc, &g| spec.simple_product(&acc, g).expect("simple word"))
    }

    fn set(spec: &MonoidSpec, gens: &[Generator]) -> GeneratorSet {
        let mut s = GeneratorSet::EMPTY;
        for &g in gens {
            s.insert(spec.generator_index(g).unwrap());
        }
        s
    }

    #[test]
    fn simple_counts() {
        assert_eq!(MonoidSpec::artin(3).unwrap().enumerate_simples().len(), 6);
        assert_eq!(MonoidSpec::dual(3).unwrap().enumerate_simples().len(), 5);
        assert_eq!(MonoidSpec::dual(4).unwrap().enumerate_simples().len(), 14);
        for n in 2..=7 {
            let a = MonoidSpec::artin(n).unwrap();
            assert_eq!(a.enumerate_simples().len() as u64, a.simple_count());
        }
        for n in 2..=9 {
            let d = MonoidSpec::dual(n).unwrap();
            assert_eq!(d.enumerate_simples().len() as u64, d.simple_count());
        }
    }

    #[test]
    fn rejects_unsupported_sizes() {
        assert!(MonoidSpec::artin(1).is_err());
        assert!(MonoidSpec::artin(9).is_err());
        assert!(MonoidSpec::dual(13).is_err());
    }

    #[test]
    fn enumeration_order_puts_unit_first_and_delta_last() {
        let d = MonoidSpec::dual(3).unwrap();
        let s = d.enumerate_simples();
        assert!(s[0].is_unit());
        assert_eq!(s[4], d.delta());
        let names: Vec<String> = s.iter().map(|x| d.simple_name(x)).collect();
        assert_eq!(names, ["e", "(12)", "(13)", "(23)", "D"]);
    }

    #[test]
    fn artin_three_left_right_sets() {
        let a = MonoidSpec::artin(3).unwrap();
        let (s1, s2) = (Generator::artin(1), Generator::artin(2));
        let x = word(&a, &[s1, s2]);
        assert_eq!(a.left_set(&x), set(&a, &[s1]));
        assert_eq!(a.right_set(&x), set(&a, &[s2]));
        assert!(a.left_set(&a.unit()).is_empty());
        assert_eq!(a.right_set(&a.delta()), a.all_generators());
    }

    #[test]
    fn dual_three_sets_and_quotient() {
        let d = MonoidSpec::dual(3).unwrap();
        let s12 = d.simple_of_generator(Generator::dual(1, 2));
        assert_eq!(
            d.right_set(&s12),
            set(&d, &[Generator::dual(1, 2), Generator::dual(1, 3)])
        );
        assert_eq!(d.left_set(&d.delta()), d.all_generators());
        let z = d.left_quotient(Generator::dual(2, 3), &d.delta()).unwrap();
        assert_eq!(z, d.simple_of_generator(Generator::dual(1, 3)));
    }

    #[test]
    fn quotient_errors_when_not_divisor() {
        let a = MonoidSpec::artin(3).unwrap();
        let s1 = a.simple_of_generator(Generator::artin(1));
        assert!(a.left_quotient(Generator::artin(2), &s1).is_err());
        assert!(a.left_quotient(Generator::artin(1), &s1).unwrap().is_unit());
    }

    #[test]
    fn delta_of_subsets() {
        let a = MonoidSpec::artin(3).unwrap();
        assert_eq!(a.delta_of_subset(a.all_generators()), a.delta());
        assert!(a.delta_of_subset(GeneratorSet::EMPTY).is_unit());
        let d = MonoidSpec::dual(3).unwrap();
        let x = set(&d, &[Generator::dual(1, 2), Generator::dual(2, 3)]);
        assert_eq!(d.delta_of_subset(x), d.delta());
    }

    #[test]
    fn dual_join_of_six_point_partitions() {
        let d = MonoidSpec::dual(6).unwrap();
        let g = |i, j| Generator::dual(i, j);
        let x = word(&d, &[g(2, 3), g(4, 5), g(5, 6)]);
        let y = word(&d, &[g(1, 5), g(5, 6)]);
        let expected = word(&d, &[g(2, 3), g(1, 4), g(4, 5), g(5, 6)]);
        assert_eq!(d.join(&x, &y), expected);
        assert_eq!(d.simple_name(&expected), "(14)(45)(56)(23)");
    }

    #[test]
    fn names() {
        let a = MonoidSpec::artin(4).unwrap();
        let s = |i| Generator::artin(i);
        assert_eq!(a.simple_name(&word(&a, &[s(3), s(1)])), "13");
        assert_eq!(a.simple_name(&word(&a, &[s(2), s(1), s(2)])), "121");
        assert_eq!(a.simple_name(&a.delta()), "D");
    }

    #[test]
    fn generator_indexing_round_trips() {
        for spec in [MonoidSpec::artin(6).unwrap(), MonoidSpec::dual(7).unwrap()] {
            for (idx, g) in spec.generators().into_iter().enumerate() {
                assert_eq!(spec.generator(idx), g);
                assert_eq!(spec.generator_index(g), Some(idx));
            }
        }
    }
}
