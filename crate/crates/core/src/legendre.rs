//! Polar maps and the multiplicative Legendre transform of cubic forms.
//!
//! The transform `g` of a cubic `f` is pinned by the integral identity
//! `g(f'(x)) = f(x)^2`. It is recovered by interpolation over sample points
//! off the hypersurface, then certified by exact symbolic substitution:
//!
//! - value: `g(f'(x)) = f(x)^2`,
//! - gradient: `g'(f'(x)) = f(x) x`,
//! - biduality: interpolating the transform of `g` returns `f`.
//!
//! A verdict is never emitted from interpolation alone.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::modular::{rational_mod, solve_mod, CrtAccumulator, ModOutcome, PRIMES};
use crate::linalg::{solve_linear, LinearSolution, Matrix};
use crate::poly::serde_text;
use crate::poly::{CubicForm, Monomial, Point, Poly, Rational};
use crate::sampling::{derive_seed, rng, sample_off_hypersurface};

/// Interpolation systems with at most this many unknowns are solved by
/// fraction-free elimination; larger ones go through the modular solver.
pub const EXACT_UNKNOWN_LIMIT: usize = 120;
pub const OVERSAMPLING: usize = 2;
pub const HOLDOUT_SAMPLES: usize = 25;
pub const DEFAULT_DENOMINATOR_BOUND: u32 = 6;

const HOLDOUT_STREAM: u64 = 1;
const BIDUAL_STREAM: u64 = 2;
const LOG_HESSIAN_STREAM: u64 = 3;
const RATIONAL_STREAM: u64 = 4;

/// The polar map `x -> f'(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarMap {
    components: Vec<Poly>,
}

impl PolarMap {
    pub fn of(f: &CubicForm) -> Self {
        PolarMap {
            components: f.gradient().to_vec(),
        }
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn apply(&self, x: &[Rational]) -> Result<Point> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    Exact,
    Failed,
    NotRun,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificates {
    pub value: Certificate,
    pub gradient: Certificate,
    pub biduality: Certificate,
    /// Irreducibility of the transform is not decided (no factorization).
    pub irreducibility: &'static str,
}

impl Default for Certificates {
    fn default() -> Self {
        Certificates {
            value: Certificate::NotRun,
            gradient: Certificate::NotRun,
            biduality: Certificate::NotRun,
            irreducibility: "not checked",
        }
    }
}

impl Certificates {
    pub fn all_exact(&self) -> bool {
        [self.value, self.gradient, self.biduality]
            .iter()
            .all(|c| *c == Certificate::Exact)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum Status {
    #[serde(rename = "EKP")]
    Ekp {
        #[serde(serialize_with = "serde_text::form")]
        fstar: CubicForm,
    },
    #[serde(rename = "NotEKP")]
    NotEkp { reason: String },
    Degenerate {
        reason: String,
        #[serde(
            serialize_with = "serde_text::opt_point",
            skip_serializing_if = "Option::is_none"
        )]
        cone_direction: Option<Point>,
    },
}

/// How the interpolation system was solved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterpolationInfo {
    pub unknowns: usize,
    pub samples: usize,
    pub rank: usize,
    pub method: String,
    pub holdout: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LegendreVerdict {
    #[serde(flatten)]
    pub status: Status,
    pub certificates: Certificates,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interpolation: Option<InterpolationInfo>,
    pub seed: u64,
}

impl LegendreVerdict {
    pub fn fstar(&self) -> Option<&CubicForm> {
        match &self.status {
            Status::Ekp { fstar } => Some(fstar),
            _ => None,
        }
    }

    pub fn is_ekp(&self) -> bool {
        matches!(self.status, Status::Ekp { .. })
    }

    fn degenerate(reason: impl Into<String>, cone: Option<Point>, seed: u64) -> Self {
        LegendreVerdict {
            status: Status::Degenerate {
                reason: reason.into(),
                cone_direction: cone,
            },
            certificates: Certificates::default(),
            interpolation: None,
            seed,
        }
    }

    fn not_ekp(reason: impl Into<String>, info: Option<InterpolationInfo>, seed: u64) -> Self {
        LegendreVerdict {
            status: Status::NotEkp {
                reason: reason.into(),
            },
            certificates: Certificates::default(),
            interpolation: info,
            seed,
        }
    }
}

/// `P(f'(x)) = f(x)^2 Q(f'(x))` with `deg P = deg Q + 3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalFit {
    #[serde(serialize_with = "serde_text::poly")]
    pub numerator: Poly,
    #[serde(serialize_with = "serde_text::poly")]
    pub denominator: Poly,
    pub denominator_degree: u32,
}

/// `det(f Hess f - f' f'^T)` is not identically zero; that matrix is
/// `f^2 Hess(ln f)`.
///
/// A nonzero value at any point proves the claim. When the determinant
/// vanishes at 8 random points from a box of width 2001 the answer is
/// `false`; by Schwartz-Zippel a nonzero determinant (degree at most `4n`)
/// survives that with probability below `(4n/2001)^8`.
pub fn log_hessian_nondegenerate(f: &CubicForm) -> bool {
    log_hessian_witness(f).is_some()
}

/// A point where the log-Hessian determinant is nonzero, if one is found.
pub fn log_hessian_witness(f: &CubicForm) -> Option<Point> {
    use rand::Rng;
    let n = f.n();
    let mut candidates = vec![vec![Rational::one(); n]];
    let mut r = rng(derive_seed(0, LOG_HESSIAN_STREAM));
    for _ in 0..8 {
        candidates.push(
            (0..n)
                .map(|_| Rational::from_integer(r.gen_range(-1000i64..=1000).into()))
                .collect(),
        );
    }
    candidates
        .into_iter()
        .find(|x| log_hessian_matrix(f, x).and_then(|m| m.det()).is_ok_and(|d| !d.is_zero()))
}

/// `f(x) Hess f(x) - f'(x) f'(x)^T`.
pub fn log_hessian_matrix(f: &CubicForm, x: &[Rational]) -> Result<Matrix> {
    let fx = f.eval(x)?;
    let g = f.gradient_at(x)?;
    let h = f.hessian_at(x)?;
    let n = f.n();
    let mut m = h.scale(&fx);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] -= &g[i] * &g[j];
        }
    }
    Ok(m)
}

/// Solution of the interpolation system `g(f'(x_j)) = f(x_j)^2`.
#[derive(Clone, Debug)]
enum Interpolation {
    Inconsistent(InterpolationInfo),
    NonUnique(InterpolationInfo),
    Solved(Poly, InterpolationInfo),
}

struct Samples {
    duals: Vec<Point>,
    rhs: Vec<Rational>,
}

fn collect_samples(f: &CubicForm, count: usize, seed: u64) -> Result<Samples> {
    let xs = sample_off_hypersurface(f, count, seed)?;
    let polar = PolarMap::of(f);
    let mut duals = Vec::with_capacity(count);
    let mut rhs = Vec::with_capacity(count);
    for x in &xs {
        let fx = f.eval(x)?;
        rhs.push(&fx * &fx);
        duals.push(polar.apply(x)?);
    }
    Ok(Samples { duals, rhs })
}

/// Variables of each monomial with multiplicity, for fast modular rows.
fn monomial_factors(monos: &[Monomial]) -> Vec<Vec<usize>> {
    monos
        .iter()
        .map(|m| {
            m.exponents()
                .iter()
                .enumerate()
                .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
                .collect()
        })
        .collect()
}

fn poly_from_coefficients(n: usize, monos: &[Monomial], coeffs: &[Rational]) -> Poly {
    let mut g = Poly::zero(n);
    for (m, c) in monos.iter().zip(coeffs) {
        g.add_term(m.clone(), c.clone());
    }
    g
}

fn interpolate(f: &CubicForm, seed: u64) -> Result<Interpolation> {
    let n = f.n();
    let monos = CubicForm::cubic_monomials(n);
    let unknowns = monos.len();
    let count = OVERSAMPLING * unknowns;
    let samples = collect_samples(f, count, seed)?;
    let info = |rank: usize, method: String| InterpolationInfo {
        unknowns,
        samples: count,
        rank,
        method,
        holdout: HOLDOUT_SAMPLES,
    };

    if unknowns <= EXACT_UNKNOWN_LIMIT {
        let rows: Vec<Vec<Rational>> = samples
            .duals
            .iter()
            .map(|u| monos.iter().map(|m| m.eval(u)).collect())
            .collect();
        let m = Matrix::from_rows(rows)?;
        return Ok(match solve_linear(&m, &samples.rhs)? {
            LinearSolution::Inconsistent { rank } => {
                Interpolation::Inconsistent(info(rank, "bareiss".into()))
            }
            LinearSolution::Affine { rank, .. } => {
                Interpolation::NonUnique(info(rank, "bareiss".into()))
            }
            LinearSolution::Unique { solution } => Interpolation::Solved(
                poly_from_coefficients(n, &monos, &solution),
                info(unknowns, "bareiss".into()),
            ),
        });
    }

    // Modular route: eliminate a square-ish block of rows, lift, and check
    // every sample exactly.
    let factors = monomial_factors(&monos);
    let block = (unknowns + 16).min(count);
    let rows_mod = |p: u64, upto: usize| -> Option<Vec<Vec<u32>>> {
        let mut out = Vec::with_capacity(upto);
        for (u, v) in samples.duals.iter().zip(&samples.rhs).take(upto) {
            let um: Vec<u64> = u
                .iter()
                .map(|c| rational_mod(c, p).map(u64::from))
                .collect::<Option<_>>()?;
            let mut row: Vec<u32> = factors
                .iter()
                .map(|fs| fs.iter().fold(1u64, |acc, &i| acc * um[i] % p) as u32)
                .collect();
            row.push(rational_mod(v, p)?);
            out.push(row);
        }
        Some(out)
    };
    let mut acc = CrtAccumulator::new();
    let mut inconsistent_primes = 0;
    let mut last_rank = 0;
    for (idx, &p) in PRIMES.iter().enumerate() {
        let Some(rows) = rows_mod(p, block) else {
            continue;
        };
        let mut outcome = solve_mod(rows, unknowns, idx);
        if matches!(outcome, ModOutcome::Underdetermined { .. }) && block < count {
            let Some(all) = rows_mod(p, count) else {
                continue;
            };
            outcome = solve_mod(all, unknowns, idx);
        }
        match outcome {
            ModOutcome::Underdetermined { rank } => {
                // rank mod p only bounds the rational rank from below
                last_rank = rank;
                continue;
            }
            ModOutcome::Inconsistent { rank } => {
                last_rank = rank;
                inconsistent_primes += 1;
                if inconsistent_primes == 2 {
                    return Ok(Interpolation::Inconsistent(info(
                        rank,
                        "modular (2 primes)".into(),
                    )));
                }
            }
            ModOutcome::Unique(res) => {
                acc.push(&res, p);
                if let Some(coeffs) = acc.reconstruct() {
                    let g = poly_from_coefficients(n, &monos, &coeffs);
                    let fits = samples
                        .duals
                        .iter()
                        .zip(&samples.rhs)
                        .all(|(u, v)| g.eval(u).is_ok_and(|gu| gu == *v));
                    if fits {
                        // full column rank mod p implies full rank over Q, so
                        // this exact solution is the unique one
                        return Ok(Interpolation::Solved(
                            g,
                            info(
                                unknowns,
                                format!("modular ({} primes) + exact check", acc.primes_used()),
                            ),
                        ));
                    }
                }
            }
        }
    }
    if acc.primes_used() == 0 && inconsistent_primes == 0 {
        return Ok(Interpolation::NonUnique(info(last_rank, "modular".into())));
    }
    Ok(Interpolation::Inconsistent(info(
        last_rank,
        "modular: no lifted solution fits the samples".into(),
    )))
}

/// `g(f'(x)) = f(x)^2` as a polynomial identity.
pub fn value_certificate(f: &CubicForm, g: &Poly) -> Result<bool> {
    let lhs = g.substitute(f.gradient())?;
    Ok(lhs == f.poly().pow(2))
}

/// `(dg/du_i)(f'(x)) = f(x) x_i` for every `i`, as polynomial identities.
pub fn gradient_certificate(f: &CubicForm, g: &Poly) -> Result<bool> {
    let n = f.n();
    for i in 0..n {
        let lhs = g.derivative(i).substitute(f.gradient())?;
        if lhs != f.poly() * &Poly::var(n, i) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn holdout_consistent(f: &CubicForm, g: &Poly, seed: u64) -> Result<bool> {
    let s = collect_samples(f, HOLDOUT_SAMPLES, derive_seed(seed, HOLDOUT_STREAM))?;
    for (u, v) in s.duals.iter().zip(&s.rhs) {
        if g.eval(u)? != *v {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_fit_preconditions(f: &CubicForm) -> Result<()> {
    if f.cone_direction().is_some() {
        return Err(Error::Precondition("the form defines a cone".into()));
    }
    if !log_hessian_nondegenerate(f) {
        return Err(Error::Precondition(
            "the log-Hessian determinant vanishes identically".into(),
        ));
    }
    Ok(())
}

/// Interpolates a cubic transform and certifies it. Callers are expected to
/// have excluded cones and degenerate log-Hessians.
pub fn fit_polynomial_legendre(f: &CubicForm, seed: u64) -> Result<LegendreVerdict> {
    check_fit_preconditions(f)?;
    fit_unchecked(f, seed)
}

fn fit_unchecked(f: &CubicForm, seed: u64) -> Result<LegendreVerdict> {
    let (g, info) = match interpolate(f, seed)? {
        Interpolation::Inconsistent(info) => {
            return Ok(LegendreVerdict::not_ekp(
                "interpolation inconsistent",
                Some(info),
                seed,
            ))
        }
        Interpolation::NonUnique(info) => {
            return Ok(LegendreVerdict::degenerate(
                format!(
                    "interpolation solution not unique (rank {} < {})",
                    info.rank, info.unknowns
                ),
                None,
                seed,
            ))
        }
        Interpolation::Solved(g, info) => (g, info),
    };
    if !holdout_consistent(f, &g, seed)? {
        return Ok(LegendreVerdict::not_ekp(
            "interpolation inconsistent on holdout samples",
            Some(info),
            seed,
        ));
    }
    let mut certs = Certificates::default();
    let fail = |certs: Certificates, what: &str| LegendreVerdict {
        status: Status::NotEkp {
            reason: format!("{what} certificate failed"),
        },
        certificates: certs,
        interpolation: Some(info.clone()),
        seed,
    };

    certs.value = if value_certificate(f, &g)? {
        Certificate::Exact
    } else {
        Certificate::Failed
    };
    if certs.value != Certificate::Exact {
        return Ok(fail(certs, "value"));
    }
    certs.gradient = if gradient_certificate(f, &g)? {
        Certificate::Exact
    } else {
        Certificate::Failed
    };
    if certs.gradient != Certificate::Exact {
        return Ok(fail(certs, "gradient"));
    }

    let gform = match CubicForm::new(g) {
        Ok(c) => c,
        Err(_) => {
            certs.biduality = Certificate::Failed;
            return Ok(fail(certs, "biduality"));
        }
    };
    certs.biduality = match interpolate(&gform, derive_seed(seed, BIDUAL_STREAM))? {
        Interpolation::Solved(h, _) if &h == f.poly() => Certificate::Exact,
        _ => Certificate::Failed,
    };
    if certs.biduality != Certificate::Exact {
        return Ok(fail(certs, "biduality"));
    }
    Ok(LegendreVerdict {
        status: Status::Ekp { fstar: gform },
        certificates: certs,
        interpolation: Some(info),
        seed,
    })
}

/// Full pipeline: cone test, log-Hessian test, interpolation, certificates.
pub fn analyze(f: &CubicForm, seed: u64) -> LegendreVerdict {
    if let Some(v) = f.cone_direction() {
        return LegendreVerdict::degenerate("cone: a cone is never homaloidal", Some(v), seed);
    }
    if !log_hessian_nondegenerate(f) {
        return LegendreVerdict::degenerate(
            "log-Hessian determinant vanishes identically",
            None,
            seed,
        );
    }
    match fit_unchecked(f, seed) {
        Ok(v) => v,
        Err(e) => LegendreVerdict::degenerate(e.to_string(), None, seed),
    }
}

/// Searches for a transform `P / Q` with `deg Q = q` for `q = 0..=bound`;
/// `q = 0` is the polynomial case. Returns the first symbolically certified
/// fit.
pub fn fit_rational_legendre(
    f: &CubicForm,
    max_denominator_degree: u32,
    seed: u64,
) -> Result<Option<RationalFit>> {
    if !log_hessian_nondegenerate(f) {
        return Err(Error::Precondition(
            "the log-Hessian determinant vanishes identically".into(),
        ));
    }
    let n = f.n();
    for q in 0..=max_denominator_degree {
        let num_monos = Monomial::all_of_degree(n, q as u16 + 3);
        let den_monos = Monomial::all_of_degree(n, q as u16);
        let unknowns = num_monos.len() + den_monos.len();
        let samples = collect_samples(
            f,
            OVERSAMPLING * unknowns,
            derive_seed(seed, RATIONAL_STREAM + q as u64),
        )?;
        let rows: Vec<Vec<Rational>> = samples
            .duals
            .iter()
            .zip(&samples.rhs)
            .map(|(u, v)| {
                num_monos
                    .iter()
                    .map(|m| m.eval(u))
                    .chain(den_monos.iter().map(|m| -(v * m.eval(u))))
                    .collect()
            })
            .collect();

        // Full column rank modulo a prime means only the trivial solution.
        let p = PRIMES[0];
        let modular_rows: Option<Vec<Vec<u32>>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| rational_mod(c, p))
                    .chain(std::iter::once(Some(0)))
                    .collect()
            })
            .collect();
        if let Some(mr) = modular_rows {
            if matches!(solve_mod(mr, unknowns, 0), ModOutcome::Unique(_)) {
                continue;
            }
        }

        let m = Matrix::from_rows(rows)?;
        for v in m.kernel() {
            let (pc, qc) = v.split_at(num_monos.len());
            let num = poly_from_coefficients(n, &num_monos, pc);
            let den = poly_from_coefficients(n, &den_monos, qc);
            if den.is_zero() || samples.duals.iter().all(|u| den.eval(u).is_ok_and(|d| d.is_zero())) {
                continue;
            }
            let lhs = den.substitute(f.gradient())? * f.poly().pow(2);
            let rhs = num.substitute(f.gradient())?;
            if lhs == rhs {
                return Ok(Some(RationalFit {
                    numerator: num,
                    denominator: den,
                    denominator_degree: q,
                }));
            }
        }
    }
    Ok(None)
}
