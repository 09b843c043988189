//! `braidforge`: normal forms, counting, uniform measures and sampling for
//! positive and dual braid monoids.
//!
//! Exit codes: 0 success (and "equal" for `eq`), 1 "different" for `eq` or an
//! internal failure, 2 usage or input errors, 3 computational guards.

mod output;
mod render;
mod tables;

use std::process::ExitCode;
use std::sync::Arc;

use braidforge::measures::delta_count_law;
use braidforge::sampler::{
    convergence_statistics, delta_count_statistics, parallel_batch, sample_infinite_prefix, sample_uniform_batch,
    sample_walk, RNG_ALGORITHM,
};
use braidforge::{
    chain_at, chain_at_infinity, critical_root, equal_words, growth_coefficients, mobius_polynomial, normalize,
    parse_word, Braid, Flavor, MonoidSpec, SimpleTable, SuffixTable,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use output::{CliError, Format, Printer};

#[derive(Parser)]
#[command(name = "braidforge", version, about = "Uniform measures on positive and dual braid monoids")]
struct Cli {
    /// Output format.
    #[arg(long, short = 'o', value_enum, default_value_t = Format::Text, global = true)]
    output: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct MonoidArgs {
    /// Monoid flavor.
    #[arg(long, value_enum, default_value_t = FlavorArg::Artin)]
    monoid: FlavorArg,

    /// Number of strands.
    #[arg(long, short = 'n')]
    n: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Artin,
    Dual,
}

impl MonoidArgs {
    fn spec(self) -> Result<MonoidSpec, CliError> {
        let flavor = match self.monoid {
            FlavorArg::Artin => Flavor::Artin,
            FlavorArg::Dual => Flavor::Dual,
        };
        Ok(MonoidSpec::new(flavor, self.n)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Garside normal form of a word.
    Nf {
        #[command(flatten)]
        monoid: MonoidArgs,
        /// Word such as "s1 s2 s1", "(12)(23)" or "D".
        word: String,
    },
    /// Decide whether two words represent the same braid (exit 0 if equal, 1 if not).
    Eq {
        #[command(flatten)]
        monoid: MonoidArgs,
        first: String,
        second: String,
    },
    /// Number of braids of each length up to K.
    Count {
        #[command(flatten)]
        monoid: MonoidArgs,
        #[arg(long, short = 'k', default_value_t = 10)]
        k: usize,
    },
    /// Möbius polynomial H_n.
    Mobius {
        #[command(flatten)]
        monoid: MonoidArgs,
    },
    /// Certified smallest positive root of H_n.
    Qn {
        #[command(flatten)]
        monoid: MonoidArgs,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Markov chain of the uniform measure (at infinity by default, or at 0 < p < q).
    Chain {
        #[command(flatten)]
        monoid: MonoidArgs,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Random braids as JSON lines.
    Sample(SampleArgs),
    /// Statistical reports.
    Stats {
        #[command(subcommand)]
        which: StatsCommand,
    },
    /// Reproduce one of the reference tables (2 to 7).
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=7))]
        which: u8,
    },
    /// Strand diagram (Artin) or partition diagram (dual) of a word.
    Render {
        #[command(flatten)]
        monoid: MonoidArgs,
        #[arg(long, value_enum, default_value_t = render::Style::Ascii)]
        format: render::Style,
        /// Draw the normal form factor by factor instead of the word as given.
        #[arg(long)]
        normal: bool,
        word: String,
    },
}

#[derive(Args)]
struct SampleArgs {
    #[arg(value_enum)]
    kind: SampleKind,
    #[command(flatten)]
    monoid: MonoidArgs,
    /// Length of each braid (uniform, walk).
    #[arg(long, short = 'k')]
    k: Option<usize>,
    /// Number of leading factors (infinite).
    #[arg(long, short = 'j')]
    j: Option<usize>,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Seed; falls back to BRAIDFORGE_SEED, then 0.
    #[arg(long, env = "BRAIDFORGE_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads; worker w draws from stream w of the seed.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SampleKind {
    /// Uniform among braids of length k.
    Uniform,
    /// Uniformly random word of length k.
    Walk,
    /// First j factors under the uniform measure at infinity.
    Infinite,
}

#[derive(Subcommand)]
enum StatsCommand {
    /// Number of leading Δ factors in uniform braids of length k against the geometric law.
    Delta {
        #[command(flatten)]
        monoid: MonoidArgs,
        #[arg(long, short = 'k', default_value_t = 60)]
        k: usize,
        #[arg(long, default_value_t = 100_000)]
        count: usize,
        #[arg(long, env = "BRAIDFORGE_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Distance between the first j factors at length k and the limit chain.
    Convergence {
        #[command(flatten)]
        monoid: MonoidArgs,
        /// Comma-separated lengths.
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
        ks: Vec<usize>,
        #[arg(long, short = 'j', default_value_t = 2)]
        j: usize,
        #[arg(long, default_value_t = 20_000)]
        count: usize,
        #[arg(long, env = "BRAIDFORGE_SEED", default_value_t = 0)]
        seed: u64,
    },
}

fn braid_json(b: &Braid) -> Value {
    json!({
        "normal_form": b.to_string(),
        "factors": b.factor_names(),
        "length": b.length(),
        "height": b.height(),
    })
}

fn spec_json(spec: MonoidSpec) -> Value {
    json!({ "monoid": spec.flavor(), "n": spec.n() })
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let out = Printer::new(cli.output);
    match cli.command {
        Command::Nf { monoid, word } => {
            let spec = monoid.spec()?;
            let b = normalize(&parse_word(&word, spec)?);
            out.emit(spec_json(spec), braid_json(&b), || {
                format!("{b}\nlength: {}\nheight: {}", b.length(), b.height())
            })?;
        }
        Command::Eq { monoid, first, second } => {
            let spec = monoid.spec()?;
            let (a, b) = (parse_word(&first, spec)?, parse_word(&second, spec)?);
            let equal = equal_words(&a, &b)?;
            let payload = json!({
                "equal": equal,
                "normal_forms": [normalize(&a).to_string(), normalize(&b).to_string()],
            });
            out.emit(spec_json(spec), payload, || if equal { "equal" } else { "different" }.to_string())?;
            return Ok(if equal { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Command::Count { monoid, k } => {
            let spec = monoid.spec()?;
            let table = growth_coefficients(spec, k)?;
            let values: Vec<String> = table.values().iter().map(|v| v.to_string()).collect();
            let rows: Vec<Vec<String>> =
                values.iter().enumerate().map(|(k, v)| vec![k.to_string(), v.clone()]).collect();
            out.emit_table(spec_json(spec), json!({ "lambda": values }), &["k", "lambda"], &rows)?;
        }
        Command::Mobius { monoid } => {
            let spec = monoid.spec()?;
            let h = mobius_polynomial(spec)?;
            out.emit(spec_json(spec), json!({ "coefficients": h.to_json() }), || h.to_string_in("t"))?;
        }
        Command::Qn { monoid, tol } => {
            let spec = monoid.spec()?;
            let root = critical_root(spec, tol)?;
            let mut meta = spec_json(spec);
            meta["tol"] = json!(tol);
            out.emit(meta, root.to_json(), || {
                let mut text = format!("q = {:.15}", root.q);
                if let Some(q) = &root.exact {
                    text.push_str(&format!(" (exact {q})"));
                }
                text.push_str(&format!("\ninterval: [{}, {}]\nwidth: {:e}", root.lo, root.hi, root.width()));
                for w in &root.warnings {
                    text.push_str(&format!("\nwarning: {w}"));
                }
                text
            })?;
        }
        Command::Chain { monoid, p } => {
            let spec = monoid.spec()?;
            let chain = match p {
                None => chain_at_infinity(spec)?,
                Some(p) => chain_at(spec, p)?,
            };
            let (header, rows) = tables::chain_rows(&chain);
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            out.emit_table(spec_json(spec), chain.to_json(), &header, &rows)?;
        }
        Command::Sample(args) => sample(args)?,
        Command::Stats { which } => stats(which, &out)?,
        Command::Tables { which } => tables::emit(which, cli.output)?,
        Command::Render { monoid, format, normal, word } => {
            let spec = monoid.spec()?;
            let w = parse_word(&word, spec)?;
            output::write_stdout(&render::render(&w, format, normal))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn sample(args: SampleArgs) -> Result<(), CliError> {
    let spec = args.monoid.spec()?;
    let header = json!({
        "metadata": {
            "tool": "braidforge",
            "version": env!("CARGO_PKG_VERSION"),
            "monoid": spec.flavor(),
            "n": spec.n(),
            "kind": match args.kind {
                SampleKind::Uniform => "uniform",
                SampleKind::Walk => "walk",
                SampleKind::Infinite => "infinite",
            },
            "k": args.k,
            "j": args.j,
            "count": args.count,
            "seed": args.seed,
            "workers": args.parallel.max(1),
            "rng": RNG_ALGORITHM,
        }
    });
    let lines: Vec<Value> = match args.kind {
        SampleKind::Uniform => {
            let k = args.k.ok_or_else(|| CliError::Usage("sample uniform needs --k".into()))?;
            let st = SuffixTable::build(Arc::new(SimpleTable::new(spec)), k)?;
            sample_uniform_batch(&st, k, args.count, args.seed, args.parallel)?.iter().map(braid_json).collect()
        }
        SampleKind::Walk => {
            let k = args.k.ok_or_else(|| CliError::Usage("sample walk needs --k".into()))?;
            parallel_batch(args.count, args.seed, args.parallel, |rng| Ok(sample_walk(spec, k, rng)))?
                .iter()
                .map(braid_json)
                .collect()
        }
        SampleKind::Infinite => {
            let j = args.j.ok_or_else(|| CliError::Usage("sample infinite needs --j".into()))?;
            let chain = chain_at_infinity(spec)?;
            let t = chain.table().clone();
            parallel_batch(args.count, args.seed, args.parallel, |rng| sample_infinite_prefix(&chain, j, rng))?
                .into_iter()
                .map(|path| json!({ "factors": path.iter().map(|&x| t.name(x)).collect::<Vec<_>>() }))
                .collect()
        }
    };
    output::print_json_lines(&header, &lines)
}

fn stats(which: StatsCommand, out: &Printer) -> Result<(), CliError> {
    match which {
        StatsCommand::Delta { monoid, k, count, seed } => {
            let spec = monoid.spec()?;
            let st = SuffixTable::build(Arc::new(SimpleTable::new(spec)), k)?;
            let stats = delta_count_statistics(&st, k, count, seed)?;
            let law = delta_count_law(spec)?;
            let mut meta = spec_json(spec);
            meta["seed"] = json!(seed);
            let payload = serde_json::to_value(&stats).expect("serializable");
            out.emit(meta, payload, || {
                format!(
                    "parameter a: {:.10}\nmean leading Δ count: {:.6} (expected a/(1-a) = {:.6})\n\
                     P(at least one): {:.6} (expected a = {:.6})\nchi2 = {:.3} on {} dof, p = {:.4}\nTV = {:.5}",
                    law.parameter,
                    stats.empirical_mean,
                    stats.expected_mean,
                    stats.empirical_at_least_one,
                    stats.expected_at_least_one,
                    stats.chi2,
                    stats.dof,
                    stats.pvalue,
                    stats.tv
                )
            })
        }
        StatsCommand::Convergence { monoid, ks, j, count, seed } => {
            let spec = monoid.spec()?;
            let chain = chain_at_infinity(spec)?;
            let stats = convergence_statistics(chain.table().clone(), &chain, &ks, j, count, seed)?;
            let mut meta = spec_json(spec);
            meta["seed"] = json!(seed);
            let payload = serde_json::to_value(&stats).expect("serializable");
            out.emit(meta, payload, || {
                let mut text: String = stats.ks.iter().zip(&stats.tv).map(|(k, tv)| format!("k = {k}: TV = {tv:.5}\n")).collect();
                text.push_str(&format!("noise allowance: {:.5}\ndecreasing: {}", stats.noise_allowance, stats.decreasing));
                text
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
