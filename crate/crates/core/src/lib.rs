//! Garside normal forms, growth series, uniform measures and exact random
//! generation for positive braid monoids and dual braid monoids.

pub mod counting;
pub mod error;
pub mod measures;
pub mod monoid;
pub mod normal_form;
pub mod sampler;

pub use counting::{critical_root, growth_coefficients, mobius_polynomial, CountTable, CriticalRoot, IntPolynomial};
pub use error::{BraidError, Result};
pub use measures::{chain_at, chain_at_infinity, ChainSpec, MobiusPlan};
pub use monoid::{Flavor, Generator, GeneratorSet, MonoidSpec, SimpleBraid, SimpleTable};
pub use normal_form::{
    equal_words, left_divides, membership_graded_set, multiply, normalize, parse_word, Braid,
    GeneratorWord,
};
pub use sampler::SuffixTable;
