//! End-to-end analysis of a single cubic form and the verification suites
//! behind the command-line tool.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::Zero;
use serde::Serialize;

use crate::catalog::{CatalogEntry, Expected};
use crate::error::{Error, Result};
use crate::jordan::{jordan_product, jordan_verify, simplicity_witness, JordanReport, JordanStructure};
use crate::legendre::{analyze, fit_rational_legendre, LegendreVerdict, RationalFit, Status};
use crate::legendre::DEFAULT_DENOMINATOR_BOUND;
use crate::poly::{format_point, serde_text, CubicForm, Point, Rational};
use crate::sampling::{derive_seed, sample_off_hypersurface};
use crate::severi::{find_singular_seeds, severi_battery, SeveriReport, DEFAULT_SAMPLES};
use crate::tau::{phi_derivative_check, tau_inverse_check};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 20;

const STREAM_UNIT: u64 = 51;
const STREAM_TAU: u64 = 52;

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub trials: usize,
    pub denominator_bound: u32,
    pub samples: usize,
    pub timings: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            denominator_bound: DEFAULT_DENOMINATOR_BOUND,
            samples: DEFAULT_SAMPLES,
            timings: false,
        }
    }
}

/// A form to analyze, with whatever is known about it in advance.
#[derive(Clone, Debug)]
pub struct Input {
    pub name: Option<String>,
    pub form: CubicForm,
    pub expected: Option<Expected>,
    pub unit: Option<Point>,
    pub singular_seeds: Vec<Point>,
}

impl Input {
    pub fn from_entry(e: &CatalogEntry) -> Self {
        Input {
            name: Some(e.name.to_string()),
            form: e.form.clone(),
            expected: Some(e.expected.clone()),
            unit: e.unit.clone(),
            singular_seeds: e.singular_seeds.clone(),
        }
    }

    pub fn from_form(form: CubicForm) -> Self {
        Input {
            name: None,
            form,
            expected: None,
            unit: None,
            singular_seeds: Vec::new(),
        }
    }

    /// The given base point, else the all-ones point, else a sampled point
    /// off the hypersurface.
    pub fn base_point(&self, seed: u64) -> Result<Point> {
        if let Some(u) = &self.unit {
            return Ok(u.clone());
        }
        let ones = vec![Rational::from_integer(1.into()); self.form.n()];
        if !self.form.eval(&ones)?.is_zero() {
            return Ok(ones);
        }
        Ok(sample_off_hypersurface(&self.form, 1, derive_seed(seed, STREAM_UNIT))?.remove(0))
    }

    pub fn seeds(&self) -> Result<Vec<Point>> {
        if self.singular_seeds.is_empty() {
            find_singular_seeds(&self.form)
        } else {
            Ok(self.singular_seeds.clone())
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputInfo {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vars: usize,
    #[serde(serialize_with = "serde_text::form")]
    pub form: CubicForm,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Section<T> {
    Ran(T),
    Skipped { reason: String },
    Error { message: String },
}

impl<T> Section<T> {
    fn from_result(r: Result<T>) -> Self {
        match r {
            Ok(t) => Section::Ran(t),
            Err(e) => Section::Error {
                message: e.to_string(),
            },
        }
    }

    fn skipped(reason: impl Into<String>) -> Self {
        Section::Skipped {
            reason: reason.into(),
        }
    }

    pub fn ran(&self) -> Option<&T> {
        match self {
            Section::Ran(t) => Some(t),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RationalSearch {
    pub denominator_bound: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<RationalFit>,
}

#[derive(Clone, Debug, Serialize)]
pub struct JordanSection {
    pub report: JordanReport,
    pub simple: bool,
    #[serde(serialize_with = "serde_text::opt_point", skip_serializing_if = "Option::is_none")]
    pub proper_ideal_generator: Option<Point>,
    pub structure: JordanStructure,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub input: InputInfo,
    pub verdict: LegendreVerdict,
    pub rational_fit: Section<RationalSearch>,
    pub jordan: Section<JordanSection>,
    pub severi: Section<SeveriReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    /// Per-stage wall-clock milliseconds; only when requested.
    pub timings: Option<BTreeMap<String, f64>>,
    pub seed: u64,
}

struct Clock {
    enabled: bool,
    laps: BTreeMap<String, f64>,
}

impl Clock {
    fn time<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.laps.insert(label.to_string(), start.elapsed().as_secs_f64() * 1000.0);
        }
        out
    }
}

pub fn jordan_section(input: &Input, opts: &Options) -> Result<JordanSection> {
    let unit = input.base_point(opts.seed)?;
    let structure = jordan_product(&input.form, &unit)?;
    let report = jordan_verify(&structure, opts.trials, opts.seed)?;
    let witness = simplicity_witness(&structure, opts.trials.min(5), opts.seed)?;
    Ok(JordanSection {
        report,
        simple: witness.is_none(),
        proper_ideal_generator: witness.map(|(p, _)| p),
        structure,
    })
}

pub fn severi_section(input: &Input, fstar: &CubicForm, opts: &Options) -> Section<SeveriReport> {
    let seeds = match input.seeds() {
        Ok(s) if s.is_empty() => return Section::skipped("no rational singular seed known"),
        Ok(s) => s,
        Err(e) => return Section::from_result(Err(e)),
    };
    let expected = input.expected.as_ref().and_then(|e| e.singular_dim);
    Section::from_result(severi_battery(&input.form, fstar, &seeds, expected, opts.samples, opts.seed))
}

pub fn analyze_input(input: &Input, opts: &Options) -> AnalysisReport {
    let mut clock = Clock {
        enabled: opts.timings,
        laps: BTreeMap::new(),
    };
    let verdict = clock.time("legendre", || analyze(&input.form, opts.seed));

    let rational_fit = match &verdict.status {
        Status::Ekp { .. } => Section::skipped("polynomial transform found"),
        Status::Degenerate { .. } => Section::skipped("degenerate form"),
        Status::NotEkp { .. } => clock.time("rational_fit", || {
            Section::from_result(
                fit_rational_legendre(&input.form, opts.denominator_bound, opts.seed).map(|fit| {
                    RationalSearch {
                        denominator_bound: opts.denominator_bound,
                        fit,
                    }
                }),
            )
        }),
    };

    let (jordan, severi) = match verdict.fstar() {
        Some(fstar) => {
            let j = clock.time("jordan", || Section::from_result(jordan_section(input, opts)));
            let s = clock.time("severi", || severi_section(input, fstar, opts));
            (j, s)
        }
        None => (
            Section::skipped("form is not EKP"),
            Section::skipped("form is not EKP"),
        ),
    };

    AnalysisReport {
        input: InputInfo {
            name: input.name.clone(),
            vars: input.form.n(),
            form: input.form.clone(),
        },
        verdict,
        rational_fit,
        jordan,
        severi,
        timings: opts.timings.then_some(clock.laps),
        seed: opts.seed,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Poly,
    Legendre,
    Jordan,
    Severi,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "poly" => Ok(Suite::Poly),
            "legendre" => Ok(Suite::Legendre),
            "jordan" => Ok(Suite::Jordan),
            "severi" => Ok(Suite::Severi),
            "all" => Ok(Suite::All),
            other => Err(Error::Unknown {
                kind: "suite",
                name: other.to_string(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub suite: &'static str,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckLine>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, suite: &'static str, check: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckLine {
            suite,
            check: check.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    fn push_result(&mut self, suite: &'static str, check: &str, r: Result<bool>) {
        match r {
            Ok(p) => self.push(suite, check, p, ""),
            Err(e) => self.push(suite, check, false, e.to_string()),
        }
    }
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "{mark} {}::{}", c.suite, c.check)?;
            if !c.detail.is_empty() {
                write!(f, " ({})", c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn verify_poly(input: &Input, out: &mut VerifyReport) {
    let f = &input.form;
    out.push("poly", "euler_identity", f.euler_identity_holds(), "");
    out.push_result("poly", "gradient_polarization", f.gradient_polarization_identity_holds());
    out.push_result("poly", "hessian_polarization", f.hessian_polarization_identity_holds());
}

fn verify_legendre(input: &Input, opts: &Options, out: &mut VerifyReport) -> Option<CubicForm> {
    let f = &input.form;
    let verdict = analyze(f, opts.seed);
    let status = match &verdict.status {
        Status::Ekp { .. } => "EKP".to_string(),
        Status::NotEkp { reason } => format!("NotEKP: {reason}"),
        Status::Degenerate { reason, .. } => format!("Degenerate: {reason}"),
    };
    if let Some(exp) = &input.expected {
        out.push("legendre", "verdict_matches_expectation", verdict.is_ekp() == exp.is_ekp, status.clone());
        let is_cone = f.cone_direction().is_some();
        out.push("legendre", "cone_matches_expectation", is_cone == exp.cone, "");
        if exp.homaloidal && !exp.is_ekp {
            let fit = fit_rational_legendre(f, opts.denominator_bound, opts.seed);
            match fit {
                Ok(Some(fit)) => out.push(
                    "legendre",
                    "rational_transform",
                    true,
                    format!("denominator degree {}", fit.denominator_degree),
                ),
                Ok(None) => out.push("legendre", "rational_transform", false, "none within bound"),
                Err(e) => out.push("legendre", "rational_transform", false, e.to_string()),
            }
        }
    } else {
        out.push("legendre", "verdict", true, status);
    }
    let fstar = verdict.fstar()?.clone();
    out.push("legendre", "certificates_exact", verdict.certificates.all_exact(), "");
    let tau_ok = sample_off_hypersurface(f, 3, derive_seed(opts.seed, STREAM_TAU)).and_then(|pts| {
        for a in &pts {
            if !tau_inverse_check(f, &fstar, a)? {
                return Ok(false);
            }
        }
        Ok(true)
    });
    out.push_result("legendre", "tau_inverse", tau_ok);
    if let Ok(unit) = input.base_point(opts.seed) {
        out.push_result("legendre", "phi_derivative", phi_derivative_check(f, &unit));
    }
    Some(fstar)
}

fn verify_jordan(input: &Input, opts: &Options, out: &mut VerifyReport) {
    match jordan_section(input, opts) {
        Ok(s) => {
            let r = &s.report;
            for (name, c) in [
                ("commutativity", &r.commutativity),
                ("unit", &r.unit),
                ("jordan_identity", &r.jordan_identity),
                ("composition", &r.composition),
                ("invertibility", &r.invertibility),
                ("inverse_law", &r.inverse_law),
            ] {
                let detail = c.witness.clone().unwrap_or_else(|| format!("{} trials", c.trials));
                out.push("jordan", name, c.passed, detail);
            }
            let detail = match &s.proper_ideal_generator {
                Some(p) => format!("simple = false; {} generates a proper ideal", format_point(p)),
                None => "simple = true".to_string(),
            };
            let expected = input.expected.as_ref().and_then(|e| e.simple);
            out.push("jordan", "simplicity", expected.is_none_or(|e| e == s.simple), detail);
        }
        Err(e) => out.push("jordan", "structure", false, e.to_string()),
    }
}

fn verify_severi(input: &Input, fstar: &CubicForm, opts: &Options, out: &mut VerifyReport) {
    match severi_section(input, fstar, opts) {
        Section::Ran(rep) => {
            for (name, c) in rep.checks() {
                out.push("severi", name, c.passed, c.detail.clone());
            }
        }
        Section::Skipped { reason } => out.push("severi", "battery", true, format!("skipped: {reason}")),
        Section::Error { message } => out.push("severi", "battery", false, message),
    }
}

pub fn verify_input(input: &Input, suite: Suite, opts: &Options) -> VerifyReport {
    let mut out = VerifyReport::default();
    let want = |s: Suite| suite == s || suite == Suite::All;
    if want(Suite::Poly) {
        verify_poly(input, &mut out);
    }
    let expect_ekp = input.expected.as_ref().map(|e| e.is_ekp);
    let needs_verdict =
        want(Suite::Legendre) || want(Suite::Severi) || (want(Suite::Jordan) && expect_ekp.is_none());
    let fstar = if needs_verdict {
        let mut scratch = VerifyReport::default();
        let fstar = verify_legendre(input, opts, &mut scratch);
        if want(Suite::Legendre) {
            out.checks.extend(scratch.checks);
        }
        fstar
    } else {
        None
    };
    let not_applicable = |out: &mut VerifyReport, suite: &'static str| {
        out.push(
            suite,
            "applicable",
            expect_ekp != Some(true),
            format!("skipped: the {suite} suite needs an EKP form"),
        )
    };
    if want(Suite::Jordan) {
        if fstar.is_some() || expect_ekp == Some(true) {
            verify_jordan(input, opts, &mut out);
        } else {
            not_applicable(&mut out, "jordan");
        }
    }
    if want(Suite::Severi) {
        match &fstar {
            Some(fs) => verify_severi(input, fs, opts, &mut out),
            None => not_applicable(&mut out, "severi"),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_entry;

    #[test]
    fn triple_product_analysis_json_is_deterministic() {
        let input = Input::from_entry(&catalog_entry("triple_product").unwrap());
        let opts = Options::default();
        let a = serde_json::to_string(&analyze_input(&input, &opts)).unwrap();
        let b = serde_json::to_string(&analyze_input(&input, &opts)).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"status\":\"EKP\""));
        assert!(!a.contains("timings"));
    }

    #[test]
    fn verify_catalog_small_entries() {
        let opts = Options {
            trials: 5,
            ..Options::default()
        };
        for name in ["triple_product", "fermat", "cone", "conic_tangent", "herm3_R"] {
            let input = Input::from_entry(&catalog_entry(name).unwrap());
            let rep = verify_input(&input, Suite::All, &opts);
            assert!(rep.passed(), "{name}\n{rep}");
        }
    }

    #[test]
    fn suites_parse() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("bogus".parse::<Suite>().is_err());
    }
}
