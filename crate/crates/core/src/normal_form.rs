//! Words over the generator alphabet, their textual syntax, and the Garside
//! normal form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{BraidError, Result};
use crate::monoid::{Flavor, Generator, MonoidSpec, SimpleBraid};

/// A finite word over the alphabet of `spec`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorWord {
    spec: MonoidSpec,
    letters: Vec<Generator>,
}

impl GeneratorWord {
    pub fn new(spec: MonoidSpec, letters: Vec<Generator>) -> Result<Self> {
        for (k, &g) in letters.iter().enumerate() {
            if spec.generator_index(g).is_none() {
                return Err(BraidError::IndexOutOfRange {
                    position: k + 1,
                    detail: format!("({}, {}) is not a generator of {spec}", g.i, g.j),
                });
            }
        }
        Ok(GeneratorWord { spec, letters })
    }

    /// Word from alphabet indices (0-based, in [`MonoidSpec::generators`] order).
    pub fn from_indices(spec: MonoidSpec, indices: &[usize]) -> Self {
        let letters = indices.iter().map(|&i| spec.generator(i)).collect();
        GeneratorWord { spec, letters }
    }

    pub fn empty(spec: MonoidSpec) -> Self {
        GeneratorWord { spec, letters: Vec::new() }
    }

    pub fn spec(&self) -> MonoidSpec {
        self.spec
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &GeneratorWord) -> Result<GeneratorWord> {
        check_same(self.spec, other.spec)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(GeneratorWord { spec: self.spec, letters })
    }

    pub fn reversed(&self) -> GeneratorWord {
        let mut letters = self.letters.clone();
        letters.reverse();
        GeneratorWord { spec: self.spec, letters }
    }

    /// Image under `σ_i ↦ σ_{i,i+1}` of an Artin word in the dual monoid.
    pub fn to_dual(&self) -> Result<GeneratorWord> {
        if self.spec.flavor() != Flavor::Artin {
            return Err(BraidError::InvalidParameter("word is already a dual word".into()));
        }
        let spec = MonoidSpec::dual(self.spec.n())?;
        Ok(GeneratorWord { spec, letters: self.letters.clone() })
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<String> = self.letters.iter().map(|&g| self.spec.generator_name(g)).collect();
        let sep = match self.spec.flavor() {
            Flavor::Artin => " ",
            Flavor::Dual => "",
        };
        f.write_str(&tokens.join(sep))
    }
}

fn check_same(a: MonoidSpec, b: MonoidSpec) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(BraidError::SpecMismatch { left: a.to_string(), right: b.to_string() })
    }
}

/// The defining word of the Garside element: the lexicographically least
/// word of `Δ_n`, or `σ_{1,2}σ_{2,3}⋯σ_{n-1,n}` for `δ_n`.
pub fn delta_word(spec: MonoidSpec) -> Vec<Generator> {
    match spec.flavor() {
        Flavor::Artin => spec.word_of(&spec.delta()),
        Flavor::Dual => (1..spec.n()).map(|i| Generator::dual(i, i + 1)).collect(),
    }
}

/// Parses whitespace-separated tokens `s<i>`, `(<i>,<j>)`, `(<ij>)` and `D`.
///
/// Tokens may also be written without separators, as in `(12)(23)(34)`.
/// In the dual monoid `s<i>` stands for `σ_{i,i+1}`. Error positions are
/// 1-based character offsets.
pub fn parse_word(text: &str, spec: MonoidSpec) -> Result<GeneratorWord> {
    let chars: Vec<char> = text.chars().collect();
    let n = spec.n();
    let mut letters = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let position = k + 1;
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        match c {
            'D' => {
                letters.extend(delta_word(spec));
                k += 1;
            }
            's' | 'σ' => {
                let start = k + 1;
                let mut end = start;
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                if end == start {
                    return Err(unknown_token(&chars, k));
                }
                let digits: String = chars[start..end].iter().collect();
                let i: usize = digits.parse().map_err(|_| unknown_token(&chars, k))?;
                if i < 1 || i >= n {
                    return Err(BraidError::IndexOutOfRange {
                        position,
                        detail: format!("s{i} needs 1 <= i <= {}", n - 1),
                    });
                }
                letters.push(match spec.flavor() {
                    Flavor::Artin => Generator::artin(i),
                    Flavor::Dual => Generator::dual(i, i + 1),
                });
                k = end;
            }
            '(' => {
                let close = chars[k..]
                    .iter()
                    .position(|&c| c == ')')
                    .map(|off| k + off)
                    .ok_or_else(|| BraidError::MalformedPair {
                        position,
                        detail: "missing closing parenthesis".into(),
                    })?;
                let inner: String = chars[k + 1..close].iter().filter(|c| !c.is_whitespace()).collect();
                let (i, j) = parse_pair(&inner, position)?;
                if i < 1 || j < 1 || i > n || j > n {
                    return Err(BraidError::IndexOutOfRange {
                        position,
                        detail: format!("({i},{j}) needs indices in 1..={n}"),
                    });
                }
                if i == j {
                    return Err(BraidError::MalformedPair {
                        position,
                        detail: format!("({i},{j}) repeats a strand"),
                    });
                }
                let g = match spec.flavor() {
                    Flavor::Dual => Generator::dual(i, j),
                    Flavor::Artin if i.abs_diff(j) == 1 => Generator::artin(i.min(j)),
                    Flavor::Artin => {
                        return Err(BraidError::MalformedPair {
                            position,
                            detail: format!("({i},{j}) is not an Artin generator"),
                        })
                    }
                };
                letters.push(g);
                k = close + 1;
            }
            _ => return Err(unknown_token(&chars, k)),
        }
    }
    GeneratorWord::new(spec, letters)
}

fn parse_pair(inner: &str, position: usize) -> Result<(usize, usize)> {
    let malformed = |detail: String| BraidError::MalformedPair { position, detail };
    let parts: Vec<&str> = inner.split(',').collect();
    let (a, b) = match parts.as_slice() {
        [a, b] => (a.to_string(), b.to_string()),
        [ab] if ab.len() == 2 && ab.chars().all(|c| c.is_ascii_digit()) => {
            (ab[..1].to_string(), ab[1..].to_string())
        }
        _ => return Err(malformed(format!("expected (i,j) or (ij), found ({inner})"))),
    };
    let i = a.parse().map_err(|_| malformed(format!("bad index {a:?}")))?;
    let j = b.parse().map_err(|_| malformed(format!("bad index {b:?}")))?;
    Ok((i, j))
}

fn unknown_token(chars: &[char], k: usize) -> BraidError {
    let token: String = chars[k..].iter().take_while(|c| !c.is_whitespace()).collect();
    BraidError::UnknownToken { position: k + 1, token }
}

/// A braid as its Garside normal form.
///
/// The unit is the one-factor sequence `[e]`; every other braid carries only
/// non-unit factors, each pair linked by the arrow relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Braid {
    spec: MonoidSpec,
    factors: Vec<SimpleBraid>,
}

impl Braid {
    pub fn unit(spec: MonoidSpec) -> Self {
        Braid { spec, factors: vec![spec.unit()] }
    }

    pub fn from_simple(spec: MonoidSpec, x: SimpleBraid) -> Self {
        Braid { spec, factors: vec![x] }
    }

    /// `Δ^k`.
    pub fn delta_power(spec: MonoidSpec, k: usize) -> Self {
        if k == 0 {
            return Braid::unit(spec);
        }
        Braid { spec, factors: vec![spec.delta(); k] }
    }

    /// Wraps a sequence that is already normal, rejecting anything else.
    pub fn from_factors(spec: MonoidSpec, factors: Vec<SimpleBraid>) -> Result<Self> {
        let braid = Braid { spec, factors };
        if braid.is_normal() {
            Ok(braid)
        } else {
            Err(BraidError::InvalidParameter("factor sequence is not in normal form".into()))
        }
    }

    pub fn spec(&self) -> MonoidSpec {
        self.spec
    }

    pub fn factors(&self) -> &[SimpleBraid] {
        &self.factors
    }

    pub fn length(&self) -> usize {
        self.factors.iter().map(SimpleBraid::length).sum()
    }

    /// `τ(x)`, the number of factors (1 for the unit).
    pub fn height(&self) -> usize {
        self.factors.len()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].is_unit()
    }

    /// Checks the normality certificate: non-unit factors linked by arrows,
    /// or the single unit factor.
    pub fn is_normal(&self) -> bool {
        if self.factors.is_empty() {
            return false;
        }
        if self.is_unit() {
            return true;
        }
        self.factors.iter().all(|x| !x.is_unit())
            && self.factors.windows(2).all(|w| self.spec.arrow(&w[0], &w[1]))
    }

    /// A word representing the braid: concatenated lex-least factor words.
    pub fn to_word(&self) -> GeneratorWord {
        let letters = self.factors.iter().flat_map(|x| self.spec.word_of(x)).collect();
        GeneratorWord { spec: self.spec, letters }
    }

    pub fn factor_names(&self) -> Vec<String> {
        self.factors.iter().map(|x| self.spec.simple_name(x)).collect()
    }

    /// The braid formed by the first `j` factors, `x ∧ Δ^j`.
    pub fn head_prefix(&self, j: usize) -> Result<Braid> {
        if j < 1 || j > self.height() {
            return Err(BraidError::OutOfRange { index: j, max: self.height() });
        }
        Ok(Braid { spec: self.spec, factors: self.factors[..j].to_vec() })
    }

    /// The last factor `x_k` as a braid of height one.
    pub fn last_factor(&self) -> Braid {
        Braid::from_simple(self.spec, self.factors[self.factors.len() - 1].clone())
    }

    /// Right-multiplies by a single generator in place.
    pub fn push_generator(&mut self, g: Generator) {
        let spec = self.spec;
        if self.is_unit() {
            self.factors.clear();
        }
        self.factors.push(spec.simple_of_generator(g));
        let mut j = self.factors.len() - 1;
        while j > 0 {
            let changed = normalize_pair(spec, &mut self.factors, j - 1);
            if !changed {
                break;
            }
            j -= 1;
        }
        // Only the appended slot can have been emptied.
        if self.factors.last().is_some_and(SimpleBraid::is_unit) {
            self.factors.pop();
        }
        if self.factors.is_empty() {
            self.factors.push(spec.unit());
        }
        debug_assert!(self.is_normal());
    }
}

/// Moves generators from `f[j + 1]` into `f[j]` until the pair is normal.
/// Returns whether anything moved.
fn normalize_pair(spec: MonoidSpec, f: &mut [SimpleBraid], j: usize) -> bool {
    let mut changed = false;
    loop {
        let movable = spec.left_set(&f[j + 1]).difference(spec.right_set(&f[j]));
        let Some(idx) = movable.first() else {
            return changed;
        };
        let g = spec.generator(idx);
        f[j] = spec.simple_product(&f[j], g).expect("generator outside the right set");
        f[j + 1] = spec.left_quotient(g, &f[j + 1]).expect("generator inside the left set");
        changed = true;
    }
}

impl fmt::Display for Braid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for name in self.factor_names() {
            write!(f, "[{name}]")?;
        }
        Ok(())
    }
}

/// Garside normal form by left-to-right letter insertion.
pub fn normalize(w: &GeneratorWord) -> Braid {
    let mut braid = Braid::unit(w.spec);
    for &g in &w.letters {
        braid.push_generator(g);
    }
    braid
}

pub fn multiply(x: &Braid, y: &Braid) -> Result<Braid> {
    check_same(x.spec, y.spec)?;
    let mut out = x.clone();
    for g in y.to_word().letters {
        out.push_generator(g);
    }
    Ok(out)
}

/// Word problem: do `w1` and `w2` represent the same braid?
pub fn equal_words(w1: &GeneratorWord, w2: &GeneratorWord) -> Result<bool> {
    check_same(w1.spec, w2.spec)?;
    Ok(normalize(w1) == normalize(w2))
}

/// `x ≤_l y`, by cancelling the letters of `x` from the left of `y` one at a time.
pub fn left_divides(x: &Braid, y: &Braid) -> Result<bool> {
    check_same(x.spec, y.spec)?;
    let spec = x.spec;
    if x.length() > y.length() {
        return Ok(false);
    }
    let mut rest = y.clone();
    for g in x.to_word().letters {
        let Some(q) = left_quotient_braid(spec, g, &rest) else {
            return Ok(false);
        };
        rest = q;
    }
    Ok(true)
}

/// `σ \ y` if `σ ≤_l y`. A generator left-divides a braid exactly when it
/// left-divides the first factor of its normal form.
pub fn left_quotient_braid(spec: MonoidSpec, g: Generator, y: &Braid) -> Option<Braid> {
    let idx = spec.generator_index(g)?;
    if !spec.left_set(&y.factors[0]).contains(idx) {
        return None;
    }
    let mut letters = spec.word_of(&spec.left_quotient(g, &y.factors[0]).ok()?);
    for x in &y.factors[1..] {
        letters.extend(spec.word_of(x));
    }
    Some(normalize(&GeneratorWord { spec, letters }))
}

/// Whether `y ∈ B[x]`, i.e. `τ(x·y) = τ(x)`.
pub fn membership_graded_set(x: &Braid, y: &Braid) -> Result<bool> {
    Ok(multiply(x, y)?.height() == x.height())
}
