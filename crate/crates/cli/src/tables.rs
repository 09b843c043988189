//! Reference tables: Möbius transforms, limit chains and Δ laws on three and four strands.

use std::sync::Arc;

use braidforge::measures::delta_count_law;
use braidforge::{chain_at_infinity, ChainSpec, GeneratorSet, MobiusPlan, MonoidSpec, SimpleTable};
use serde_json::{json, Value};

use crate::output::{align, csv_text, pretty, write_stdout, CliError, Format};

pub struct Section {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Section {
    fn to_json(&self) -> Value {
        json!({ "title": self.title, "header": self.header, "rows": self.rows })
    }
}

/// Ten decimals, without a sign on values that round to zero.
pub fn fixed(x: f64) -> String {
    let s = format!("{x:.10}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        format!("{:.10}", 0.0)
    } else {
        s
    }
}

fn spec(flavor: &str, n: usize) -> MonoidSpec {
    match flavor {
        "artin" => MonoidSpec::artin(n),
        _ => MonoidSpec::dual(n),
    }
    .expect("small monoid")
}

fn symbolic(spec: MonoidSpec) -> Result<(Arc<SimpleTable>, Vec<String>), CliError> {
    let plan = MobiusPlan::new(Arc::new(SimpleTable::new(spec)))?;
    let h = plan.power_law_symbolic().iter().map(|p| p.to_string_in("p")).collect();
    Ok((plan.table().clone(), h))
}

/// Simples by length, then name.
fn listing(t: &SimpleTable) -> Vec<usize> {
    let mut order: Vec<usize> = (0..t.len()).collect();
    order.sort_by_key(|&x| (t.length(x), t.name(x)));
    order
}

fn digits(set: GeneratorSet) -> String {
    let d: Vec<String> = set.iter().map(|i| (i + 1).to_string()).collect();
    if d.is_empty() {
        "-".into()
    } else {
        d.join(",")
    }
}

/// Successors of `x` other than `e`: `e` for the unit, `S` for everything,
/// `S \ {…}` when the complement is the shorter list.
fn successors(t: &SimpleTable, x: usize) -> String {
    if x == t.unit_index() {
        return "e".into();
    }
    let others: Vec<usize> = listing(t).into_iter().filter(|&y| y != t.unit_index()).collect();
    let (into, out): (Vec<usize>, Vec<usize>) = others.iter().partition(|&&y| t.arrow(x, y));
    let names = |v: &[usize]| v.iter().map(|&y| t.name(y)).collect::<Vec<_>>().join(",");
    if out.is_empty() {
        "S".into()
    } else if into.len() > out.len() {
        format!("S \\ {{{}}}", names(&out))
    } else {
        names(&into)
    }
}

fn transform_section(spec: MonoidSpec) -> Result<Section, CliError> {
    let (t, h) = symbolic(spec)?;
    Ok(Section {
        title: format!("Möbius transform h(x) of p^|x|, {} n = {}", spec.flavor(), spec.n()),
        header: vec!["x".into(), "h(x)".into()],
        rows: listing(&t).into_iter().map(|x| vec![t.name(x), h[x].clone()]).collect(),
    })
}

fn artin_four_section() -> Result<Section, CliError> {
    let (t, h) = symbolic(spec("artin", 4))?;
    let rows = listing(&t)
        .into_iter()
        .map(|x| vec![digits(t.left(x)), t.name(x), digits(t.right(x)), successors(&t, x), h[x].clone()])
        .collect();
    Ok(Section {
        title: "Characteristic elements, artin n = 4".into(),
        header: ["L(x)", "x", "R(x)", "x -> y", "h(x)"].map(String::from).to_vec(),
        rows,
    })
}

fn dual_four_section() -> Result<Section, CliError> {
    let spec = spec("dual", 4);
    let (t, h) = symbolic(spec)?;
    let chain = chain_at_infinity(spec)?;
    let rho = |x: usize| chain.state_position(x).map_or(0.0, |pos| chain.initial()[pos]);
    // Δ directly after e, as in the usual listing
    let (e, d) = (t.unit_index(), t.delta_index());
    let mut order: Vec<usize> = vec![e, d];
    order.extend(listing(&t).into_iter().filter(|&x| x != e && x != d));
    let rows = order
        .into_iter()
        .map(|x| vec![t.name(x), successors(&t, x), h[x].clone(), fixed(rho(x))])
        .collect();
    Ok(Section {
        title: "Characteristic elements, dual n = 4".into(),
        header: ["x", "x -> y", "h(x)", "rho(x)"].map(String::from).to_vec(),
        rows,
    })
}

/// Header and rows of a chain: the initial law first, then the transition matrix.
pub fn chain_rows(chain: &ChainSpec<f64>) -> (Vec<String>, Vec<Vec<String>>) {
    let t = chain.table();
    let names: Vec<String> = chain.states().iter().map(|&x| t.name(x)).collect();
    let mut header = vec!["x".to_string()];
    header.extend(names.iter().cloned());
    let mut rows = vec![std::iter::once("initial".to_string()).chain(chain.initial().iter().map(|&v| fixed(v))).collect()];
    for (name, row) in names.iter().zip(chain.transition()) {
        rows.push(std::iter::once(name.clone()).chain(row.iter().map(|&v| fixed(v))).collect());
    }
    (header, rows)
}

/// The transition matrix with Δ listed first.
fn matrix_section(spec: MonoidSpec) -> Result<Section, CliError> {
    let chain = chain_at_infinity(spec)?;
    let t = chain.table().clone();
    let mut order = vec![t.delta_index()];
    order.extend(listing(&t).into_iter().filter(|&x| x != t.delta_index() && chain.state_position(x).is_some()));
    let mut header = vec![String::new()];
    header.extend(order.iter().map(|&x| t.name(x)));
    let rows = order
        .iter()
        .map(|&x| std::iter::once(t.name(x)).chain(order.iter().map(|&y| fixed(chain.entry(x, y)))).collect())
        .collect();
    Ok(Section {
        title: format!("Transition matrix at infinity, {} n = {} (first row: initial law)", spec.flavor(), spec.n()),
        header,
        rows,
    })
}

fn delta_section() -> Result<Section, CliError> {
    let mut rows = Vec::new();
    for n in [3, 4] {
        for flavor in ["artin", "dual"] {
            let law = delta_count_law(spec(flavor, n))?;
            rows.push(vec![n.to_string(), flavor.to_string(), fixed(law.parameter), fixed(law.mean)]);
        }
    }
    Ok(Section {
        title: "Leading Δ count at infinity: geometric with parameter a = q^|Δ|, mean a/(1-a)".into(),
        header: ["n", "monoid", "a", "a/(1-a)"].map(String::from).to_vec(),
        rows,
    })
}

pub fn build(which: u8) -> Result<Vec<Section>, CliError> {
    Ok(match which {
        2 => vec![transform_section(spec("artin", 3))?, transform_section(spec("dual", 3))?],
        3 => vec![artin_four_section()?],
        4 => vec![matrix_section(spec("artin", 3))?, matrix_section(spec("dual", 3))?],
        5 => vec![delta_section()?],
        6 => vec![dual_four_section()?],
        7 => vec![matrix_section(spec("dual", 4))?],
        _ => return Err(CliError::Usage(format!("no table {which}; choose 2 to 7"))),
    })
}

pub fn emit(which: u8, format: Format) -> Result<(), CliError> {
    let sections = build(which)?;
    match format {
        Format::Text => {
            let blocks: Vec<String> = sections
                .iter()
                .map(|s| {
                    let header: Vec<&str> = s.header.iter().map(String::as_str).collect();
                    format!("{}\n\n{}", s.title, align(&header, &s.rows))
                })
                .collect();
            write_stdout(&blocks.join("\n"))
        }
        Format::Json => write_stdout(&pretty(&json!({
            "format": "json",
            "metadata": { "tool": "braidforge", "version": env!("CARGO_PKG_VERSION"), "table": which },
            "payload": sections.iter().map(Section::to_json).collect::<Vec<_>>(),
        }))),
        Format::Csv => {
            let mut records: Vec<Vec<&str>> = Vec::new();
            for s in &sections {
                records.push(std::iter::once("section").chain(s.header.iter().map(String::as_str)).collect());
                for row in &s.rows {
                    records.push(std::iter::once(s.title.as_str()).chain(row.iter().map(String::as_str)).collect());
                }
            }
            write_stdout(&csv_text(records))
        }
    }
}
