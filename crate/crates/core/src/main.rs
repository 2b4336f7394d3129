use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use skewbrace::enumerate::{EnumError, Strategy};
use skewbrace::families::ParamChoice;
use skewbrace::groups::GroupLabel;
use skewbrace::report::export::{render, Format};
use skewbrace::report::expected::{conjecture, verify_tables};
use skewbrace::report::{classify, orbit_brace, verify_catalog, Budget, ClassificationReport, ClassifyOptions, ReportError};
use skewbrace::ybe::{check_nondegenerate, check_ybe, export_text, solution_from_brace};

/// Skew braces of order p^2 q, from regular subgroups of holomorphs.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// dfs, stratified or both (both fails on any disagreement)
    #[arg(long, global = true)]
    strategy: Option<Strategy>,
    /// Worker threads
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Directory for cached orbit representatives
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Largest holomorph to build: `small`, `large` or a number
    #[arg(long, global = true, default_value = "small")]
    budget: Budget,
    /// Pick another admissible parameter, e.g. `r=1` for the second
    /// smallest r. Names: t, g, r, h, xi.
    #[arg(long = "param-choice", global = true, value_name = "NAME=INDEX")]
    param_choice: Vec<String>,
}

#[derive(Args)]
struct Primes {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the skew braces of order p^2 q
    Enumerate {
        #[command(flatten)]
        primes: Primes,
        /// Only this additive group (token such as Zp2q, G2, Zq:Zp2)
        #[arg(long)]
        additive: Option<String>,
        #[arg(long, default_value = "md")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare class counts with the bundled tables
    VerifyTables {
        #[command(flatten)]
        primes: Primes,
    },
    /// Compare totals with the closed-form counts
    Conjecture {
        #[command(flatten)]
        primes: Primes,
    },
    /// Write the Yang-Baxter solution of one class as a text matrix
    Solutions {
        #[command(flatten)]
        primes: Primes,
        #[arg(long)]
        additive: String,
        /// Index into the classes of the additive group, as listed by `enumerate`
        #[arg(long)]
        orbit: usize,
        /// Check the braided relation and non-degeneracy
        #[arg(long)]
        check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the witness catalog against the enumeration
    Catalog {
        #[command(flatten)]
        primes: Primes,
        #[arg(long)]
        lemma: Option<String>,
    },
}

fn param_choice(specs: &[String]) -> Result<ParamChoice, String> {
    let mut c = ParamChoice::default();
    for s in specs {
        let (name, idx) = s.split_once('=').ok_or_else(|| format!("expected NAME=INDEX, got `{s}`"))?;
        let idx: usize = idx.parse().map_err(|_| format!("bad index in `{s}`"))?;
        match name {
            "t" => c.t = idx,
            "g" => c.g = idx,
            "r" => c.r = idx,
            "h" => c.h = idx,
            "xi" => c.xi = idx,
            _ => return Err(format!("unknown parameter `{name}`")),
        }
    }
    Ok(c)
}

fn exit_code(e: &ReportError) -> u8 {
    match e {
        ReportError::Enumerate(EnumError::StrategyMismatch { .. }) | ReportError::Cache(_) => 1,
        _ => 2,
    }
}

fn write_out(out: Option<&PathBuf>, text: &str) -> Result<(), ReportError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn complete(p: u64, q: u64, opts: &ClassifyOptions) -> Result<ClassificationReport, (u8, String)> {
    let r = classify(p, q, opts).map_err(|e| (exit_code(&e), e.to_string()))?;
    if !r.is_complete() {
        let names: Vec<String> = r.skipped.iter().map(|s| format!("{} ({})", s.additive, s.holomorph_order)).collect();
        return Err((2, format!("over the budget, not computed: {}; raise --budget", names.join(", "))));
    }
    Ok(r)
}

fn run(cli: Cli) -> Result<u8, (u8, String)> {
    let c = &cli.common;
    let mut opts = ClassifyOptions {
        strategy: c.strategy,
        choice: param_choice(&c.param_choice).map_err(|e| (2, e))?,
        additive: None,
        budget: c.budget,
        jobs: c.jobs,
        cache_dir: c.cache.clone(),
    };
    let err = |e: ReportError| (exit_code(&e), e.to_string());
    let label = |s: &str, q: u64| GroupLabel::parse(s, q).map_err(|e| (2, e));
    match cli.cmd {
        Cmd::Enumerate { primes: Primes { p, q }, additive, format, out } => {
            opts.additive = additive.map(|a| label(&a, q)).transpose()?;
            let r = classify(p, q, &opts).map_err(err)?;
            write_out(out.as_ref(), &render(&r, format).map_err(err)?).map_err(err)?;
            for s in &r.skipped {
                eprintln!("not computed: {} (holomorph of order {})", s.additive, s.holomorph_order);
            }
            Ok(if r.skipped.is_empty() { 0 } else { 2 })
        }
        Cmd::VerifyTables { primes: Primes { p, q } } => {
            let r = complete(p, q, &opts)?;
            let check = verify_tables(&r).map_err(|e| (2, e.to_string()))?;
            if check.tables.is_empty() {
                println!("no tables cover p = {p}, q = {q}");
                return Ok(0);
            }
            for d in &check.diffs {
                let ker = d.kernel.map_or(String::new(), |k| format!(" |ker| {k}"));
                println!("DIFF {}: {} / {}{ker}: expected {}, got {}", d.anchor, d.additive, d.mul, d.expected, d.got);
            }
            println!(
                "{} tables, {} cells, {} differences",
                check.tables.len(),
                check.cells_checked,
                check.diffs.len()
            );
            Ok(if check.passed() { 0 } else { 1 })
        }
        Cmd::Conjecture { primes: Primes { p, q } } => {
            let r = complete(p, q, &opts)?;
            let c = conjecture(&r).map_err(|e| (2, e.to_string()))?;
            let t = c.computed;
            println!("computed: abelian {}, non-abelian {}, total {}", t.abelian, t.nonabelian, t.total);
            match (c.formula, c.matches()) {
                (Some(f), Some(ok)) => {
                    println!("formula:  abelian {}, non-abelian {}, total {}", f.abelian, f.nonabelian, f.total);
                    println!("{}", if ok { "match" } else { "MISMATCH" });
                    Ok(if ok { 0 } else { 1 })
                }
                _ => {
                    println!("no closed form covers p = {p}, q = {q}");
                    Ok(0)
                }
            }
        }
        Cmd::Solutions { primes: Primes { p, q }, additive, orbit, check, out } => {
            let b = orbit_brace(p, q, label(&additive, q)?, orbit, &opts).map_err(err)?;
            let sol = solution_from_brace(&b);
            write_out(out.as_ref(), &export_text(&sol)).map_err(err)?;
            if check {
                let ybe = check_ybe(&sol);
                let nd = check_nondegenerate(&sol);
                match &ybe {
                    Ok(()) => eprintln!("braided relation: ok"),
                    Err((a, b, c)) => eprintln!("braided relation fails at ({a}, {b}, {c})"),
                }
                match &nd {
                    Ok(()) => eprintln!("non-degenerate: ok"),
                    Err(e) => eprintln!("degenerate: {e:?}"),
                }
                if ybe.is_err() || nd.is_err() {
                    return Ok(1);
                }
            }
            Ok(0)
        }
        Cmd::Catalog { primes: Primes { p, q }, lemma } => {
            let check = verify_catalog(p, q, &opts, lemma.as_deref()).map_err(err)?;
            for r in &check.lemmas {
                let count = match (r.expected_count, r.enumerated) {
                    (Some(e), Some(g)) => format!("{e} expected, {g} enumerated"),
                    (None, Some(g)) => format!("{g} enumerated"),
                    _ => String::new(),
                };
                println!("{:<32} {:<22} {:<9?} {count}", r.id, r.family, r.status);
                for d in &r.discrepancies {
                    println!("    {d}");
                }
            }
            for s in &check.skipped {
                println!("not checked: {} (holomorph of order {})", s.additive, s.holomorph_order);
            }
            Ok(if check.failed() > 0 {
                1
            } else if !check.skipped.is_empty() {
                2
            } else {
                0
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
