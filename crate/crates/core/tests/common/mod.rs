#![allow(dead_code)]

use braidforge::{normalize, parse_word, IntPolynomial, MonoidSpec, SimpleBraid, SimpleTable};

pub fn artin(n: usize) -> MonoidSpec {
    MonoidSpec::artin(n).unwrap()
}

pub fn dual(n: usize) -> MonoidSpec {
    MonoidSpec::dual(n).unwrap()
}

/// Parses `1-3p+p^2+2p^3-p^6` style polynomials in `p`.
pub fn poly(text: &str) -> IntPolynomial {
    let mut coeffs: Vec<i64> = Vec::new();
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms: Vec<String> = Vec::new();
    let mut current = String::new();
    for c in cleaned.chars() {
        if (c == '+' || c == '-') && !current.is_empty() {
            terms.push(std::mem::take(&mut current));
        }
        current.push(c);
    }
    terms.push(current);
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(rest) => (-1, rest.to_string()),
            None => (1, term.trim_start_matches('+').to_string()),
        };
        let (coeff, degree) = match body.find('p') {
            None => (body.parse::<i64>().unwrap(), 0),
            Some(at) => {
                let c = if at == 0 { 1 } else { body[..at].parse::<i64>().unwrap() };
                let d = match body[at + 1..].strip_prefix('^') {
                    Some(e) => e.parse::<usize>().unwrap(),
                    None => 1,
                };
                (c, d)
            }
        };
        if coeffs.len() <= degree {
            coeffs.resize(degree + 1, 0);
        }
        coeffs[degree] += sign * coeff;
    }
    IntPolynomial::from_i64(&coeffs)
}

/// The simple written as in the tables: digits `121` for Artin words,
/// `(12)(23)` products for dual words, `e` and `D` for the extremes.
pub fn simple(spec: MonoidSpec, name: &str) -> SimpleBraid {
    match name {
        "e" => return spec.unit(),
        "D" => return spec.delta(),
        _ => {}
    }
    let text = match spec.flavor() {
        braidforge::Flavor::Artin => name.chars().map(|c| format!("s{c} ")).collect::<String>(),
        braidforge::Flavor::Dual => name.to_string(),
    };
    let b = normalize(&parse_word(&text, spec).unwrap());
    assert_eq!(b.height(), 1, "{name} is not simple");
    b.factors()[0].clone()
}

pub fn index(table: &SimpleTable, name: &str) -> usize {
    table.index_of(&simple(table.spec(), name))
}

pub fn sqrt5() -> f64 {
    5f64.sqrt()
}
pub mod tables;
