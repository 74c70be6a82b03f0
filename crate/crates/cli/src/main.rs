use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ekp_core::poly::{format_point, print_poly_file};
use ekp_core::report::{analyze_input, verify_input, AnalysisReport, Input, Options, Section, Suite};
use ekp_core::{builtin_catalog, catalog_entry, parse_poly_file, CubicForm, Error, Status};

#[derive(Parser)]
#[command(name = "ekp", version, about = "Exact analysis of cubic forms and their Legendre transforms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a polynomial file or catalog entry.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Include per-stage timings in the report.
        #[arg(long)]
        timings: bool,
    },
    /// List the built-in catalog or export one entry.
    Catalog {
        #[arg(long)]
        json: bool,
        /// Print the named entry in the text polynomial format.
        #[arg(long, value_name = "NAME")]
        export: Option<String>,
    },
    /// Run invariant suites; exits 1 on the first failed check.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
        /// poly, legendre, jordan, severi or all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Polynomial file (`-` for stdin) or catalog entry name.
    input: Option<String>,
    #[arg(long, value_name = "NAME", conflicts_with = "input")]
    catalog: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = ekp_core::report::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = ekp_core::report::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, value_name = "Q", default_value_t = ekp_core::legendre::DEFAULT_DENOMINATOR_BOUND)]
    denominator_bound: u32,
    #[arg(long, default_value_t = ekp_core::severi::DEFAULT_SAMPLES)]
    samples: usize,
}

impl RunArgs {
    fn options(&self, timings: bool) -> Options {
        Options {
            seed: self.seed,
            trials: self.trials,
            denominator_bound: self.denominator_bound,
            samples: self.samples,
            timings,
        }
    }
}

enum Failure {
    Usage(String),
    Finding,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load_input(args: &InputArgs) -> Result<Input, Failure> {
    if let Some(name) = &args.catalog {
        return Ok(Input::from_entry(&catalog_entry(name)?));
    }
    let Some(src) = &args.input else {
        return Err(Failure::Usage("an input file or --catalog NAME is required".into()));
    };
    let text = if src == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::Usage(e.to_string()))?
    } else {
        let path = PathBuf::from(src);
        if !path.exists() {
            if let Ok(entry) = catalog_entry(src) {
                return Ok(Input::from_entry(&entry));
            }
        }
        std::fs::read_to_string(&path).map_err(|e| Failure::Usage(format!("{src}: {e}")))?
    };
    let poly = parse_poly_file(&text)?;
    Ok(Input::from_form(CubicForm::new(poly)?))
}

fn render_analysis(r: &AnalysisReport) -> String {
    let mut s = String::new();
    if let Some(name) = &r.input.name {
        let _ = writeln!(s, "input: {name} ({} variables)", r.input.vars);
    } else {
        let _ = writeln!(s, "input: {} variables", r.input.vars);
    }
    let _ = writeln!(s, "f = {}", r.input.form.poly());
    match &r.verdict.status {
        Status::Ekp { fstar } => {
            let _ = writeln!(s, "verdict: EKP");
            let _ = writeln!(s, "f* = {}", fstar.poly());
        }
        Status::NotEkp { reason } => {
            let _ = writeln!(s, "verdict: NotEKP ({reason})");
        }
        Status::Degenerate {
            reason,
            cone_direction,
        } => {
            let _ = writeln!(s, "verdict: Degenerate ({reason})");
            if let Some(v) = cone_direction {
                let _ = writeln!(s, "cone direction: {}", format_point(v));
            }
        }
    }
    let c = &r.verdict.certificates;
    let _ = writeln!(
        s,
        "certificates: value {:?}, gradient {:?}, biduality {:?}, irreducibility {}",
        c.value, c.gradient, c.biduality, c.irreducibility
    );
    if let Some(info) = &r.verdict.interpolation {
        let _ = writeln!(
            s,
            "interpolation: {} unknowns, {} samples, rank {}, {}",
            info.unknowns, info.samples, info.rank, info.method
        );
    }
    match &r.rational_fit {
        Section::Ran(search) => match &search.fit {
            Some(fit) => {
                let _ = writeln!(s, "rational transform (denominator degree {}):", fit.denominator_degree);
                let _ = writeln!(s, "  P = {}", fit.numerator);
                let _ = writeln!(s, "  Q = {}", fit.denominator);
            }
            None => {
                let _ = writeln!(s, "rational transform: none with denominator degree <= {}", search.denominator_bound);
            }
        },
        Section::Error { message } => {
            let _ = writeln!(s, "rational transform: error: {message}");
        }
        Section::Skipped { .. } => {}
    }
    match &r.jordan {
        Section::Ran(j) => {
            let rep = &j.report;
            let _ = writeln!(
                s,
                "jordan: checks {}, simple {}, f(I) = {}",
                if rep.passed() { "pass" } else { "FAIL" },
                j.simple,
                ekp_core::poly::format_rational(&rep.unit_norm)
            );
        }
        Section::Error { message } => {
            let _ = writeln!(s, "jordan: error: {message}");
        }
        Section::Skipped { .. } => {}
    }
    match &r.severi {
        Section::Ran(v) => {
            let dim = v.singular_dim.map_or("not constant".to_string(), |d| d.to_string());
            let _ = writeln!(s, "severi: singular locus dimension {dim}");
            for (name, c) in v.checks() {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(s, "  {mark} {name}: {}", c.detail);
            }
        }
        Section::Skipped { reason } => {
            if r.verdict.is_ekp() {
                let _ = writeln!(s, "severi: skipped ({reason})");
            }
        }
        Section::Error { message } => {
            let _ = writeln!(s, "severi: error: {message}");
        }
    }
    if let Some(t) = &r.timings {
        for (stage, ms) in t {
            let _ = writeln!(s, "time {stage}: {ms:.1} ms");
        }
    }
    let _ = writeln!(s, "seed: {}", r.seed);
    s
}

fn analysis_failed(r: &AnalysisReport) -> bool {
    let jordan = matches!(&r.jordan, Section::Ran(j) if !j.report.passed()) || matches!(r.jordan, Section::Error { .. });
    let severi = matches!(&r.severi, Section::Ran(v) if !v.passed()) || matches!(r.severi, Section::Error { .. });
    jordan || severi
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { input, run, timings } => {
            let input = load_input(&input)?;
            let report = analyze_input(&input, &run.options(timings));
            if run.json {
                println!("{}", to_json(&report)?);
            } else {
                print!("{}", render_analysis(&report));
            }
            if analysis_failed(&report) {
                return Err(Failure::Finding);
            }
        }
        Command::Catalog { json, export } => {
            if let Some(name) = export {
                let e = catalog_entry(&name)?;
                print!("{}", print_poly_file(e.form.poly()));
                return Ok(());
            }
            let cat = builtin_catalog();
            if json {
                let rows: Vec<serde_json::Value> = cat
                    .iter()
                    .map(|e| {
                        serde_json::json!({
                            "name": e.name,
                            "vars": e.n,
                            "polynomial": e.form.poly().to_string(),
                            "expected": e.expected,
                        })
                    })
                    .collect();
                println!("{}", to_json(&rows)?);
            } else {
                println!("{:<22} {:>4}  {:<6} {:<10} {:<8}", "name", "vars", "EKP", "homaloidal", "sing.dim");
                for e in &cat {
                    let x = &e.expected;
                    let dim = x.singular_dim.map_or("-".to_string(), |d| d.to_string());
                    println!("{:<22} {:>4}  {:<6} {:<10} {:<8}", e.name, e.n, x.is_ekp, x.homaloidal, dim);
                }
            }
        }
        Command::Verify { input, run, suite } => {
            let suite: Suite = suite.parse()?;
            let input = load_input(&input)?;
            let report = verify_input(&input, suite, &run.options(false));
            if run.json {
                println!("{}", to_json(&report)?);
            } else {
                print!("{report}");
            }
            if !report.passed() {
                if let Some(first) = report.checks.iter().find(|c| !c.passed) {
                    eprintln!("first failure: {}::{} {}", first.suite, first.check, first.detail);
                }
                return Err(Failure::Finding);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Finding) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
