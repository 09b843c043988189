//! Published fixtures as check functions, shared by the fixture tests and
//! the acceptance harness. Each check returns a description of the first
//! mismatch it finds.

use std::sync::Arc;

use braidforge::{
    chain_at_infinity, normalize, parse_word, ChainSpec, GeneratorSet, IntPolynomial, MobiusPlan, MonoidSpec,
    SimpleBraid, SimpleTable,
};

use super::{artin, dual, index, poly, simple, sqrt5};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn symbolic(spec: MonoidSpec) -> (Arc<SimpleTable>, Vec<IntPolynomial>) {
    let plan = MobiusPlan::new(Arc::new(SimpleTable::new(spec))).expect("small monoid");
    let h = plan.power_law_symbolic();
    (plan.table().clone(), h)
}

fn successors(table: &SimpleTable, x: usize) -> Vec<usize> {
    (0..table.len()).filter(|&y| y != table.unit_index() && table.arrow(x, y)).collect()
}

fn indices(table: &SimpleTable, names: &[&str]) -> Vec<usize> {
    let mut out: Vec<usize> = names.iter().map(|n| index(table, n)).collect();
    out.sort_unstable();
    out
}

fn digit_set(digits: &str) -> GeneratorSet {
    let mut s = GeneratorSet::EMPTY;
    for d in digits.chars() {
        s.insert(d.to_digit(10).expect("digit") as usize - 1);
    }
    s
}

pub const THREE_STRANDS: &[(&str, &str)] =
    &[("e", "1-2p+p^3"), ("1", "p-p^2"), ("2", "p-p^2"), ("12", "p^2-p^3"), ("21", "p^2-p^3"), ("D", "p^3")];

pub const DUAL_THREE: &[(&str, &str)] =
    &[("e", "1-3p+2p^2"), ("(12)", "p-p^2"), ("(23)", "p-p^2"), ("(13)", "p-p^2"), ("D", "p^2")];

pub fn check_three_strand_transforms() -> Check {
    for (spec, rows) in [(artin(3), THREE_STRANDS), (dual(3), DUAL_THREE)] {
        let (t, h) = symbolic(spec);
        ensure!(t.len() == rows.len(), "{spec}: {} simples", t.len());
        for &(name, expected) in rows {
            let got = &h[index(&t, name)];
            ensure!(*got == poly(expected), "{spec} h({name}) = {}, want {expected}", got.to_string_in("p"));
        }
    }
    Ok(())
}

const LIST_1: &[&str] = &["1", "12", "123"];
const LIST_2: &[&str] = &["2", "21", "23", "213", "2132"];
const LIST_3: &[&str] = &["3", "32", "321"];
const LIST_13: &[&str] = &["1", "3", "12", "13", "32", "123", "132", "321", "1232", "1321", "12321"];
const LIST_121: &[&str] = &["1", "2", "12", "21", "23", "121", "123", "213", "1213", "2132", "21323"];
const LIST_232: &[&str] = &["2", "3", "21", "23", "32", "213", "232", "321", "2132", "2321", "21321"];

/// Rows `(L, x, R, successors other than e, h)` for four Artin strands.
pub const FOUR_STRANDS: &[(&str, &str, &str, &[&str], &str)] = &[
    ("", "e", "", &[], "1-3p+p^2+2p^3-p^6"),
    ("1", "1", "1", LIST_1, "p-2p^2+p^4"),
    ("2", "2", "2", LIST_2, "p-2p^2+p^3"),
    ("3", "3", "3", LIST_3, "p-2p^2+p^4"),
    ("1", "12", "2", LIST_2, "p^2-2p^3+p^4"),
    ("31", "13", "13", LIST_13, "p^2-p^3"),
    ("2", "21", "1", LIST_1, "p^2-2p^3+p^5"),
    ("2", "23", "3", LIST_3, "p^2-2p^3+p^5"),
    ("3", "32", "2", LIST_2, "p^2-2p^3+p^4"),
    ("21", "121", "12", LIST_121, "p^3-p^4"),
    ("1", "123", "3", LIST_3, "p^3-2p^4+p^6"),
    ("31", "132", "2", LIST_2, "p^3-2p^4+p^5"),
    ("2", "213", "13", LIST_13, "p^3-p^4"),
    ("32", "232", "23", LIST_232, "p^3-p^4"),
    ("3", "321", "1", LIST_1, "p^3-2p^4+p^6"),
    ("21", "1213", "13", LIST_13, "p^4-p^5"),
    ("31", "1232", "23", LIST_232, "p^4-p^5"),
    ("31", "1321", "12", LIST_121, "p^4-p^5"),
    ("2", "2132", "2", LIST_2, "p^4-2p^5+p^6"),
    ("32", "2321", "13", LIST_13, "p^4-p^5"),
    ("31", "12321", "13", LIST_13, "p^5-p^6"),
    ("32", "21321", "12", LIST_121, "p^5-p^6"),
    ("21", "21323", "23", LIST_232, "p^5-p^6"),
    ("321", "D", "123", &[], "p^6"),
];

pub fn check_four_strand_table() -> Check {
    let (t, h) = symbolic(artin(4));
    ensure!(t.len() == FOUR_STRANDS.len(), "{} simples", t.len());
    for &(l, name, r, next, expected) in FOUR_STRANDS {
        let x = index(&t, name);
        ensure!(h[x] == poly(expected), "h({name}) = {}, want {expected}", h[x].to_string_in("p"));
        ensure!(t.left(x) == digit_set(l), "L({name})");
        ensure!(t.right(x) == digit_set(r), "R({name})");
        let want = match name {
            "e" => vec![],
            "D" => (1..t.len()).collect(),
            _ => indices(&t, next),
        };
        ensure!(successors(&t, x) == want, "successors of {name}");
    }
    Ok(())
}

/// Rows `(x, successors other than e, h)`; a leading `!` lists the
/// complement in `S_4 ∖ {e}` instead.
pub const DUAL_FOUR: &[(&str, &[&str], &str)] = &[
    ("e", &[], "1-6p+10p^2-5p^3"),
    ("D", &["!"], "p^3"),
    ("(12)", &["(12)", "(13)", "(14)"], "p-3p^2+2p^3"),
    ("(13)", &["(13)", "(14)", "(23)", "(24)", "(14)(23)"], "p-2p^2+p^3"),
    ("(14)", &["(14)", "(24)", "(34)"], "p-3p^2+2p^3"),
    ("(23)", &["(12)", "(23)", "(24)"], "p-3p^2+2p^3"),
    ("(24)", &["(12)", "(13)", "(24)", "(34)", "(12)(34)"], "p-2p^2+p^3"),
    ("(34)", &["(13)", "(23)", "(34)"], "p-3p^2+2p^3"),
    ("(12)(23)", &["!", "D", "(34)", "(23)(34)", "(13)(34)", "(12)(34)"], "p^2-p^3"),
    ("(12)(24)", &["!", "D", "(23)", "(12)(23)", "(23)(34)", "(14)(23)"], "p^2-p^3"),
    ("(23)(34)", &["!", "D", "(14)", "(12)(24)", "(13)(34)", "(14)(23)"], "p^2-p^3"),
    ("(13)(34)", &["!", "D", "(12)", "(12)(23)", "(12)(24)", "(12)(34)"], "p^2-p^3"),
    ("(14)(23)", &["!", "D", "(13)", "(12)(23)", "(13)(34)"], "p^2-p^3"),
    ("(12)(34)", &["!", "D", "(24)", "(12)(24)", "(23)(34)"], "p^2-p^3"),
];

pub fn check_dual_four_table() -> Check {
    let (t, h) = symbolic(dual(4));
    ensure!(t.len() == DUAL_FOUR.len(), "{} simples", t.len());
    let everything: Vec<usize> = (1..t.len()).collect();
    for &(name, next, expected) in DUAL_FOUR {
        let x = index(&t, name);
        ensure!(h[x] == poly(expected), "h({name}) = {}, want {expected}", h[x].to_string_in("p"));
        let want: Vec<usize> = match next.first() {
            Some(&"!") => {
                let drop = indices(&t, &next[1..]);
                everything.iter().copied().filter(|y| !drop.contains(y)).collect()
            }
            _ => indices(&t, next),
        };
        ensure!(successors(&t, x) == want, "successors of {name}");
    }
    Ok(())
}

/// `ρ(x) = h(x)` at the critical root, for the dual monoid on four strands.
pub fn dual_four_rho(name: &str) -> f64 {
    let s = sqrt5();
    match name {
        "e" => 0.0,
        "D" => 0.2 - 2.0 * s / 25.0,
        "(12)" | "(14)" | "(23)" | "(34)" => s / 25.0,
        "(13)" | "(24)" => 0.1 + s / 50.0,
        _ => 0.1 - s / 50.0,
    }
}

pub fn check_dual_four_initial_law(chain: &ChainSpec<f64>) -> Check {
    let t = chain.table();
    for &(name, _, _) in &DUAL_FOUR[1..] {
        let pos = chain.state_position(index(t, name)).ok_or(format!("{name} is not a state"))?;
        let got = chain.initial()[pos];
        ensure!((got - dual_four_rho(name)).abs() < 1e-10, "ρ({name}) = {got}, want {}", dual_four_rho(name));
    }
    ensure!(chain.h()[t.unit_index()].abs() < 1e-14, "h(e) = {} at q", chain.h()[t.unit_index()]);
    Ok(())
}

fn check_matrix(chain: &ChainSpec<f64>, order: &[&str], expected: &[Vec<f64>]) -> Check {
    let t = chain.table();
    for (r, name) in order.iter().enumerate() {
        for (c, other) in order.iter().enumerate() {
            let got = chain.entry(index(t, name), index(t, other));
            ensure!(
                (got - expected[r][c]).abs() < 1e-10,
                "P[{name}, {other}] = {got}, want {}",
                expected[r][c]
            );
        }
    }
    Ok(())
}

/// Rows summing to one within `1e-12`, initial law included.
pub fn check_stochastic(chain: &ChainSpec<f64>) -> Check {
    for (i, row) in chain.transition().iter().enumerate() {
        let s: f64 = row.iter().sum();
        ensure!((s - 1.0).abs() < 1e-12, "row {i} sums to {s}");
    }
    let s: f64 = chain.initial().iter().sum();
    ensure!((s - 1.0).abs() < 1e-12, "initial law sums to {s}");
    Ok(())
}

pub fn check_three_strand_chains() -> Check {
    let s = sqrt5();
    let (a, b, c, d, z) = (s - 2.0, (7.0 - 3.0 * s) / 2.0, (s - 1.0) / 2.0, (3.0 - s) / 2.0, 0.0);
    let chain = chain_at_infinity(artin(3)).map_err(|e| e.to_string())?;
    let order = ["D", "1", "2", "12", "21"];
    let expected = vec![
        vec![a, a, a, b, b],
        vec![z, c, z, d, z],
        vec![z, z, c, z, d],
        vec![z, z, c, z, d],
        vec![z, c, z, d, z],
    ];
    check_matrix(&chain, &order, &expected)?;
    check_stochastic(&chain)?;
    for (k, name) in order.iter().enumerate() {
        let pos = chain.state_position(index(chain.table(), name)).ok_or("missing state")?;
        ensure!((chain.initial()[pos] - expected[0][k]).abs() < 1e-10, "initial law at {name}");
    }

    let chain = chain_at_infinity(dual(3)).map_err(|e| e.to_string())?;
    let order = ["D", "(12)", "(23)", "(13)"];
    let expected =
        vec![vec![0.25; 4], vec![z, 0.5, z, 0.5], vec![z, 0.5, 0.5, z], vec![z, z, 0.5, 0.5]];
    check_matrix(&chain, &order, &expected)?;
    check_stochastic(&chain)
}

pub const DUAL_FOUR_ORDER: [&str; 12] = [
    "(12)", "(13)", "(14)", "(23)", "(24)", "(34)", "(12)(23)", "(12)(24)", "(23)(34)", "(13)(34)", "(14)(23)",
    "(12)(34)",
];

pub fn check_dual_four_chain(chain: &ChainSpec<f64>) -> Check {
    let th = sqrt5() / 10.0;
    let (a, b, c, d, e, f) = (0.5 - th, 2.0 * th, -0.5 + 3.0 * th, 1.0 - 4.0 * th, -0.1 + th, 0.3 - th);
    let (z, v) = (0.0, 0.2);
    let expected = vec![
        vec![a, b, a, z, z, z, z, z, z, z, z, z],
        vec![z, a, c, c, a, z, z, z, z, z, d, z],
        vec![z, z, a, z, b, a, z, z, z, z, z, z],
        vec![a, z, z, a, b, z, z, z, z, z, z, z],
        vec![c, a, z, z, a, c, z, z, z, z, z, d],
        vec![z, b, z, a, z, a, z, z, z, z, z, z],
        vec![e, v, e, e, v, z, f, f, z, z, f, z],
        vec![e, v, e, z, v, e, z, f, z, f, z, f],
        vec![e, v, z, e, v, e, f, z, f, z, z, f],
        vec![z, v, e, e, v, e, z, z, f, f, f, z],
        vec![e, z, e, e, v, e, z, f, f, z, f, f],
        vec![e, v, e, e, z, e, f, z, z, f, f, f],
    ];
    check_matrix(chain, &DUAL_FOUR_ORDER, &expected)?;
    check_stochastic(chain)
}

/// Rows `(x, L, R, successors)` with generator names as written in the input syntax.
pub type SetRow = (&'static str, &'static [&'static str], &'static [&'static str], &'static [&'static str]);

pub const FIG_ARTIN_THREE: &[SetRow] = &[
    ("e", &[], &[], &["e"]),
    ("1", &["s1"], &["s1"], &["e", "1", "12"]),
    ("2", &["s2"], &["s2"], &["e", "2", "21"]),
    ("12", &["s1"], &["s2"], &["e", "2", "21"]),
    ("21", &["s2"], &["s1"], &["e", "1", "12"]),
    ("D", &["s1", "s2"], &["s1", "s2"], &["e", "1", "2", "12", "21", "D"]),
];

pub const FIG_DUAL_THREE: &[SetRow] = &[
    ("e", &[], &[], &["e"]),
    ("(12)", &["(12)"], &["(12)", "(13)"], &["e", "(12)", "(13)"]),
    ("(23)", &["(23)"], &["(23)", "(12)"], &["e", "(23)", "(12)"]),
    ("(13)", &["(13)"], &["(13)", "(23)"], &["e", "(13)", "(23)"]),
    ("D", &["(12)", "(13)", "(23)"], &["(12)", "(13)", "(23)"], &["e", "(12)", "(13)", "(23)", "D"]),
];

fn generator_set(spec: MonoidSpec, names: &[&str]) -> GeneratorSet {
    let mut s = GeneratorSet::EMPTY;
    for name in names {
        let w = parse_word(name, spec).expect("generator name");
        s.insert(spec.generator_index(w.letters()[0]).expect("generator"));
    }
    s
}

pub fn check_set_table(spec: MonoidSpec, rows: &[SetRow]) -> Check {
    let simples = spec.enumerate_simples();
    ensure!(simples.len() == rows.len(), "{spec}: {} simples", simples.len());
    for &(name, l, r, next) in rows {
        let x = simple(spec, name);
        ensure!(spec.left_set(&x) == generator_set(spec, l), "{spec} L({name})");
        ensure!(spec.right_set(&x) == generator_set(spec, r), "{spec} R({name})");
        let mut got: Vec<SimpleBraid> = simples.iter().filter(|y| spec.arrow(&x, y)).cloned().collect();
        let mut want: Vec<SimpleBraid> = next.iter().map(|y| simple(spec, y)).collect();
        got.sort();
        want.sort();
        ensure!(got == want, "{spec} successors of {name}");
    }
    Ok(())
}

pub fn check_dual_six_join() -> Check {
    let spec = dual(6);
    let j = spec.join(&simple(spec, "(23)(45)(56)"), &simple(spec, "(15)(56)"));
    let want = simple(spec, "(23)(14)(45)(56)");
    ensure!(j == want, "join is {}, want {}", spec.simple_name(&j), spec.simple_name(&want));
    Ok(())
}

pub fn check_isotopic_words() -> Check {
    let spec = artin(4);
    let a = parse_word("s1 s2 s3 s2", spec).map_err(|e| e.to_string())?;
    let b = parse_word("s3 s1 s2 s3", spec).map_err(|e| e.to_string())?;
    ensure!(normalize(&a) == normalize(&b), "{} vs {}", normalize(&a), normalize(&b));
    Ok(())
}

pub const SAMPLE_WORD: &str = "3 3 2 1 1 2 2 2 2 2 1 3 3 2 2 1 3 3 2";
pub const SAMPLE_NORMAL_FORM: &str = "[3][321][12][2][2][2][213][32][213][32]";

pub fn check_sample_normal_form() -> Check {
    let spec = artin(4);
    let text: String = SAMPLE_WORD.split(' ').map(|d| format!("s{d} ")).collect();
    let b = normalize(&parse_word(&text, spec).map_err(|e| e.to_string())?);
    ensure!(b.to_string() == SAMPLE_NORMAL_FORM, "got {b}");
    Ok(())
}
