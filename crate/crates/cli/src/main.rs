mod cache;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};

use real_chrom::grading::{Bidegree, Monomial};
use real_chrom::rings::{group_at_mode, normal_form, Mode, TheoryId, TheoryKind};
use real_chrom::ss::{compare_to_closed_form, run_to_einfty, ComparisonStatus, Height, SsKind, Window};
use real_chrom::table::{self, Format, GroupRecord};
use real_chrom::verify::{run_suite, Suite};

use cache::Cache;

/// Exact RO(Z/2)-graded coefficients of BPR<n> and its Tate diagram.
///
/// A bidegree (k, l) stands for dimension k + l*alpha. Monomials are written
/// like "v0 v1^2 s^-4 a^3" with s for sigma.
#[derive(Parser)]
#[command(name = "real-chrom", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Output format.
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Results cache directory.
    #[arg(long, global = true, env = "REAL_CHROM_CACHE")]
    cache_dir: Option<PathBuf>,
    /// Label (k, l) as dimension k of the twist-l fixed points.
    #[arg(long, global = true)]
    twisted_fixed_points: bool,
}

#[derive(Args, Clone)]
struct TheoryArgs {
    /// bpr, bprn, tate, borelcoh, borelhom or geometric.
    #[arg(long)]
    theory: TheoryKind,
    /// Height; required for every theory except bpr.
    #[arg(long)]
    n: Option<u32>,
    /// Placement of the BPR<n> extra classes.
    #[arg(long, default_value = "theorem")]
    mode: Mode,
}

#[derive(Subcommand)]
enum Command {
    /// The group and generators at one bidegree.
    Group {
        #[command(flatten)]
        theory: TheoryArgs,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, allow_negative_numbers = true)]
        l: i64,
    },
    /// Group table over a window, or over one twist line with --l.
    Table {
        #[command(flatten)]
        theory: TheoryArgs,
        /// K[,L]: |k| <= K and |l| <= L (L defaults to K).
        #[arg(long, value_parser = parse_window, default_value = "16")]
        window: (i64, i64),
        /// Restrict to one twist.
        #[arg(long, allow_negative_numbers = true)]
        l: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        kmin: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        kmax: Option<i64>,
    },
    /// Run a verification suite.
    Verify {
        /// tate-closed-form, borel-closed-form, geometric, les, ko,
        /// corollary-diff or gap.
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, value_parser = parse_window, default_value = "40")]
        window: (i64, i64),
    },
    /// Dump the E-infinity page of a spectral sequence: tate, borelcoh or
    /// geometric (bpr runs the Tate spectral sequence with every generator).
    Ss {
        #[arg(long)]
        theory: TheoryKind,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, value_parser = parse_window, default_value = "16")]
        window: (i64, i64),
        /// Print the comparison with the closed form instead of the page.
        #[arg(long)]
        compare: bool,
    },
    /// Reduce a monomial to a multiple of a basis class.
    NormalForm {
        #[command(flatten)]
        theory: TheoryArgs,
        #[arg(long, allow_hyphen_values = true)]
        monomial: String,
    },
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let parse = |x: &str| -> Result<i64, String> {
        let v: i64 = x.trim().parse().map_err(|_| format!("bad window bound {x:?}"))?;
        if v < 1 {
            return Err(format!("window bounds must be at least 1, got {v}"));
        }
        Ok(v)
    };
    match s.split_once(',') {
        Some((k, l)) => Ok((parse(k)?, parse(l)?)),
        None => {
            let k = parse(s)?;
            Ok((k, k))
        }
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ArgumentConflict, msg).exit()
}

fn theory_id(kind: TheoryKind, n: Option<u32>) -> TheoryId {
    TheoryId::new(kind, n).unwrap_or_else(|e| usage_error(e))
}

fn label(b: Bidegree, twisted: bool) -> String {
    if twisted {
        format!("dim {} of twist {}", b.k, b.l)
    } else {
        format!("({}, {})", b.k, b.l)
    }
}

struct Outcome {
    output: String,
    exit: u8,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, exit: 0 }
    }
}

fn render_table(records: &[GroupRecord], common: &Common) -> String {
    if common.format == Format::Text && common.twisted_fixed_points {
        let mut s = String::new();
        for r in records {
            let g = real_chrom::rings::GroupSummary {
                free_rank: r.free_rank,
                z2_count: r.z2_count,
                generators: Vec::new(),
            };
            let gens = if r.generators.is_empty() { String::new() } else { format!(" {{{}}}", r.generators.join(", ")) };
            writeln!(s, "{}  {}{}", label(Bidegree::new(r.k, r.l), true), g.type_string(), gens).unwrap();
        }
        return s;
    }
    table::render(records, common.format).expect("in-memory tables render")
}

fn cmd_group(t: &TheoryArgs, k: i64, l: i64, common: &Common) -> Outcome {
    let theory = theory_id(t.theory, t.n);
    let b = Bidegree::new(k, l);
    let g = group_at_mode(theory, b, t.mode);
    let output = match common.format {
        Format::Text if common.twisted_fixed_points => format!("{}: {g}\n", label(b, true)),
        Format::Text => format!("{g}\n"),
        _ => render_table(&[GroupRecord::new(theory, b, &g)], common),
    };
    Outcome::ok(output)
}

fn cmd_table(t: &TheoryArgs, window: (i64, i64), l: Option<i64>, kmin: Option<i64>, kmax: Option<i64>, common: &Common) -> Outcome {
    let theory = theory_id(t.theory, t.n);
    let ks = (kmin.unwrap_or(-window.0), kmax.unwrap_or(window.0));
    let ls = l.map_or((-window.1, window.1), |l| (l, l));
    Outcome::ok(render_table(&table::group_table(theory, t.mode, ks, ls), common))
}

fn cmd_verify(suite: Suite, n: u32, window: (i64, i64), common: &Common) -> Outcome {
    let report = run_suite(suite, n, window.0, window.1).unwrap_or_else(|e| usage_error(e));
    let exit = if report.passed { 0 } else { 1 };
    let output = match common.format {
        Format::Json => serde_json::to_string_pretty(&report).unwrap() + "\n",
        _ => {
            let mut s = format!("suite {} n={n} window {},{}\n", suite.name(), window.0, window.1);
            for line in &report.lines {
                writeln!(s, "{line}").unwrap();
            }
            if !report.passed {
                writeln!(s, "FAILED: {} unexpected disagreements; first 20:", report.failures.len()).unwrap();
                for f in report.failures.iter().take(20) {
                    writeln!(s, "  {f}").unwrap();
                }
            } else {
                writeln!(s, "ok").unwrap();
            }
            s
        }
    };
    Outcome { output, exit }
}

fn cmd_ss(kind: TheoryKind, n: Option<u32>, window: (i64, i64), compare: bool, common: &Common) -> Outcome {
    let (ss, height, theory) = match (kind, n) {
        (TheoryKind::Bpr, None) => (SsKind::Tate, Height::Infinite, None),
        (TheoryKind::Tate, Some(n)) => (SsKind::Tate, Height::Finite(n), Some(TheoryId::tate(n))),
        (TheoryKind::BorelCoh, Some(n)) => (SsKind::Borel, Height::Finite(n), Some(TheoryId::borel_coh(n))),
        (TheoryKind::Geometric, Some(n)) => (SsKind::Geometric, Height::Finite(n), Some(TheoryId::geometric(n))),
        _ => usage_error("ss needs --theory tate, borelcoh or geometric with --n, or bpr without --n"),
    };
    let pw = match run_to_einfty(ss, height, Window::new(height, window.0, window.1)) {
        Ok(pw) => pw,
        Err(e) => usage_error(e),
    };
    let twisted = common.twisted_fixed_points;
    if compare {
        let Some(theory) = theory else { usage_error("--compare needs a height") };
        let report = compare_to_closed_form(&pw, theory);
        let exit = if report.is_clean() { 0 } else { 1 };
        let output = match common.format {
            Format::Json => serde_json::to_string_pretty(&report).unwrap() + "\n",
            Format::Csv => {
                let mut s = "k,l,status,detail\n".to_string();
                for e in &report.entries {
                    writeln!(s, "{},{},{},\"{}\"", e.k, e.l, e.status.name(), e.detail).unwrap();
                }
                s
            }
            Format::Text => {
                let mut s = String::new();
                for e in report.entries.iter().filter(|e| e.status != ComparisonStatus::Agree || !e.engine.is_empty()) {
                    writeln!(s, "{}  {}  {}", label(Bidegree::new(e.k, e.l), twisted), e.status.name(), e.detail).unwrap();
                }
                s
            }
        };
        return Outcome { output, exit };
    }
    let records = pw.dump(true);
    let output = match common.format {
        Format::Json => serde_json::to_string_pretty(&records).unwrap() + "\n",
        Format::Csv => {
            let mut s = "page,k,l,filtration,order,monomial\n".to_string();
            for r in &records {
                writeln!(s, "{},{},{},{},{},{}", r.page, r.k, r.l, r.filtration, r.order.name(), r.monomial).unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &records {
                let b = label(Bidegree::new(r.k, r.l), twisted);
                writeln!(s, "E{} {b}  filtration {}  {}  {}", r.page, r.filtration, r.order.name(), r.monomial).unwrap();
            }
            s
        }
    };
    Outcome::ok(output)
}

fn cmd_normal_form(t: &TheoryArgs, monomial: &str, common: &Common) -> Outcome {
    let theory = theory_id(t.theory, t.n);
    let m: Monomial = monomial.parse().unwrap_or_else(|e| usage_error(e));
    let r = normal_form(&m, theory).unwrap_or_else(|e| usage_error(e));
    let output = match common.format {
        Format::Json => serde_json::to_string_pretty(&r).unwrap() + "\n",
        _ => match (r.coefficient_valuation, &r.basis) {
            (Some(0), Some(b)) => format!("{b}\n"),
            (Some(1), Some(b)) => format!("2 * {b}\n"),
            (Some(v), Some(b)) => format!("2^{v} * {b}\n"),
            _ => "0\n".to_string(),
        },
    };
    Outcome::ok(output)
}

fn request(cli: &Cli) -> Option<String> {
    let c = &cli.common;
    let tail = format!("format={:?} twisted={}", c.format, c.twisted_fixed_points);
    match &cli.command {
        Command::Verify { suite, n, window } => {
            Some(format!("verify suite={} n={n} window={},{} {tail}", suite.name(), window.0, window.1))
        }
        Command::Ss { theory, n, window, compare } => {
            Some(format!("ss theory={theory} n={n:?} window={},{} compare={compare} {tail}", window.0, window.1))
        }
        Command::Table { theory, window, l, kmin, kmax } => Some(format!(
            "table theory={} n={:?} mode={:?} window={},{} l={l:?} kmin={kmin:?} kmax={kmax:?} {tail}",
            theory.theory, theory.n, theory.mode, window.0, window.1
        )),
        _ => None,
    }
}

fn run(cli: &Cli) -> Outcome {
    let c = &cli.common;
    match &cli.command {
        Command::Group { theory, k, l } => cmd_group(theory, *k, *l, c),
        Command::Table { theory, window, l, kmin, kmax } => cmd_table(theory, *window, *l, *kmin, *kmax, c),
        Command::Verify { suite, n, window } => cmd_verify(*suite, *n, *window, c),
        Command::Ss { theory, n, window, compare } => cmd_ss(*theory, *n, *window, *compare, c),
        Command::NormalForm { theory, monomial } => cmd_normal_form(theory, monomial, c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let text = e.render().to_string();
            eprint!("{text}");
            if !text.contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return ExitCode::from(2);
        }
        Err(e) => e.exit(),
    };
    let cache = cli.common.cache_dir.as_deref().map(Cache::new);
    let key = request(&cli);
    let cached = match (&cache, &key) {
        (Some(cache), Some(key)) => cache.get(key),
        _ => None,
    };
    let outcome = match cached {
        Some((output, exit)) => Outcome { output, exit: exit as u8 },
        None => {
            let o = run(&cli);
            if let (Some(cache), Some(key)) = (&cache, &key) {
                cache.put(key, &o.output, o.exit as i32);
            }
            o
        }
    };
    match &cli.common.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.output) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(3);
            }
        }
        None => print!("{}", outcome.output),
    }
    ExitCode::from(outcome.exit)
}
