//! Sampled geometry of the singular locus `X = {f' = 0}` of an EKP cubic and
//! of its dual hypersurface: orbit sampling, tangent dimensions, the
//! Terracini count, secant and dual-variety inclusions, and the linearity of
//! the Gauss map fibres.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::catalog::CatalogEntry;
use crate::error::{check_dim, Error, Result};
use crate::linalg::Matrix;
use crate::poly::{dot, format_point, is_zero_vector, serde_text, CubicForm, Point, Rational};
use crate::sampling::{derive_seed, random_point, rng, sample_off_hypersurface};
use crate::tau::{orbit_image, proportional, tau_geometric_check};

pub const DEFAULT_SAMPLES: usize = 10;

const STREAM_ORBIT: u64 = 41;
const STREAM_SMOOTH: u64 = 42;
const STREAM_FIBER: u64 = 43;

/// `f'(z) = 0`, cross-checked against `Q(z, z, .) = 0`.
pub fn is_singular(f: &CubicForm, z: &[Rational]) -> Result<bool> {
    let by_gradient = is_zero_vector(&f.gradient_at(z)?);
    let by_polarization = is_zero_vector(&f.polarize_covector(z, z)?);
    if by_gradient != by_polarization {
        return Err(Error::Finding(format!(
            "gradient and polarization disagree at {}",
            format_point(z)
        )));
    }
    Ok(by_gradient)
}

/// Affine dimension of the tangent space to the cone over `X` at `z`, the
/// kernel dimension of the Hessian.
pub fn tangent_space(f: &CubicForm, z: &[Rational]) -> Result<Vec<Point>> {
    Ok(f.hessian_at(z)?.kernel())
}

pub fn tangent_dimension(f: &CubicForm, z: &[Rational]) -> Result<usize> {
    Ok(tangent_space(f, z)?.len())
}

/// Rescales to a primitive integer vector with positive leading entry.
pub fn primitive(v: &[Rational]) -> Point {
    let mut l = num_bigint::BigInt::one();
    for c in v {
        l = l.lcm(c.denom());
    }
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|c| (c * &l).to_integer()).collect();
    let mut g = num_bigint::BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        g = -g;
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

/// Images `tau_{A2}^{-1} tau_{A1} z` of a singular seed under random orbit
/// maps, rescaled to primitive integer vectors. Pairwise independent
/// samples are preferred; a degenerate orbit yields repeats.
pub fn singular_samples(f: &CubicForm, seed_z: &[Rational], count: usize, seed: u64) -> Result<Vec<Point>> {
    check_dim(f.n(), seed_z.len())?;
    if !is_singular(f, seed_z)? || is_zero_vector(seed_z) {
        return Err(Error::Precondition("seed is not a nonzero singular point".into()));
    }
    let attempts = 3 * count;
    let bases = sample_off_hypersurface(f, 2 * attempts, seed)?;
    let mut fresh: Vec<Point> = Vec::new();
    let mut repeats: Vec<Point> = Vec::new();
    for pair in bases.chunks(2) {
        if fresh.len() == count {
            break;
        }
        let z = primitive(&orbit_image(f, &pair[0], &pair[1], seed_z)?);
        if !is_singular(f, &z)? {
            return Err(Error::Finding(format!(
                "orbit map tau_A2^-1 tau_A1 with A1 = {}, A2 = {} moves {} off the singular locus",
                format_point(&pair[0]),
                format_point(&pair[1]),
                format_point(seed_z)
            )));
        }
        if fresh.iter().any(|w| proportional(w, &z)) {
            repeats.push(z);
        } else {
            fresh.push(z);
        }
    }
    let missing = count - fresh.len();
    fresh.extend(repeats.into_iter().take(missing));
    Ok(fresh)
}

fn independent(z1: &[Rational], z2: &[Rational]) -> bool {
    !is_zero_vector(z1) && !is_zero_vector(z2) && !proportional(z1, z2)
}

/// Dimension of the span of the tangent spaces at two independent singular
/// points.
pub fn terracini_rank(f: &CubicForm, z1: &[Rational], z2: &[Rational]) -> Result<usize> {
    if !is_singular(f, z1)? || !is_singular(f, z2)? {
        return Err(Error::Precondition("points must be singular".into()));
    }
    if !independent(z1, z2) {
        return Err(Error::Precondition("points must be linearly independent".into()));
    }
    let mut rows = tangent_space(f, z1)?;
    rows.extend(tangent_space(f, z2)?);
    Ok(Matrix::from_rows(rows)?.rank())
}

/// Whether `z1 + z2` lies on the hypersurface, via
/// `f(z1 + z2) = f'(z1)(z2) + f'(z2)(z1)` and directly.
pub fn secant_membership(f: &CubicForm, z1: &[Rational], z2: &[Rational]) -> Result<bool> {
    check_dim(f.n(), z1.len())?;
    check_dim(f.n(), z2.len())?;
    let sum: Point = z1.iter().zip(z2).map(|(a, b)| a + b).collect();
    let direct = f.eval(&sum)?;
    let expanded = f.eval(z1)?
        + f.eval(z2)?
        + dot(&f.gradient_at(z1)?, z2)
        + dot(&f.gradient_at(z2)?, z1);
    if direct != expanded {
        return Err(Error::Finding("cubic expansion of f(z1 + z2) fails".into()));
    }
    Ok(direct.is_zero())
}

/// For a smooth point `x` of the hypersurface, whether `f'(x)` is a singular
/// point of the transform `f*`.
pub fn dual_inclusion_check(f: &CubicForm, fstar: &CubicForm, x: &[Rational]) -> Result<bool> {
    check_dim(f.n(), fstar.n())?;
    if !f.eval(x)?.is_zero() {
        return Err(Error::Precondition("x is not on the hypersurface".into()));
    }
    let g = f.gradient_at(x)?;
    if is_zero_vector(&g) {
        return Err(Error::Precondition("x is a singular point".into()));
    }
    Ok(is_zero_vector(&fstar.gradient_at(&g)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaussFiber {
    pub kernel_dim: usize,
    pub directions_checked: usize,
    pub linear: bool,
}

/// Samples the fibre of the Gauss map `x -> [f'(x)]` through a smooth point
/// `x` along `ker Hess f(x)`: each `x + t v` must stay on the hypersurface
/// with a proportional gradient.
pub fn gauss_fiber_check(f: &CubicForm, x: &[Rational], trials: usize, seed: u64) -> Result<GaussFiber> {
    if !f.eval(x)?.is_zero() {
        return Err(Error::Precondition("x is not on the hypersurface".into()));
    }
    let gx = f.gradient_at(x)?;
    if is_zero_vector(&gx) {
        return Err(Error::Precondition("x is a singular point".into()));
    }
    let kernel = tangent_space(f, x)?;
    let mut directions = kernel.clone();
    if !kernel.is_empty() {
        let mut r = rng(seed);
        for _ in 0..trials {
            let c = random_point(&mut r, kernel.len());
            let mut v = vec![Rational::zero(); f.n()];
            for (ci, k) in c.iter().zip(&kernel) {
                for (vi, ki) in v.iter_mut().zip(k) {
                    *vi += ci * ki;
                }
            }
            if !is_zero_vector(&v) {
                directions.push(v);
            }
        }
    }
    let ts: Vec<Rational> = [1i64, -1, 2, -2].iter().map(|&t| Rational::from_integer(t.into())).collect();
    let mut linear = true;
    'outer: for v in &directions {
        for t in &ts {
            let y: Point = x.iter().zip(v).map(|(a, b)| a + t * b).collect();
            if !f.eval(&y)?.is_zero() || !proportional(&f.gradient_at(&y)?, &gx) {
                linear = false;
                break 'outer;
            }
        }
    }
    Ok(GaussFiber {
        kernel_dim: kernel.len(),
        directions_checked: directions.len(),
        linear,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeveriCheck {
    pub passed: bool,
    pub detail: String,
}

impl SeveriCheck {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        SeveriCheck {
            passed,
            detail: detail.into(),
        }
    }

    fn skipped(detail: impl Into<String>) -> Self {
        SeveriCheck::new(true, format!("skipped: {}", detail.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeveriReport {
    pub ambient_dim: usize,
    /// Projective dimension of `X` at the samples, when constant.
    pub singular_dim: Option<usize>,
    pub expected_singular_dim: Option<u32>,
    pub tangent_dims: Vec<usize>,
    pub terracini_rank: Option<usize>,
    #[serde(serialize_with = "serde_text::points")]
    pub samples: Vec<Point>,
    pub gauss_kernel_dims: Vec<usize>,
    pub orbit_closure: SeveriCheck,
    pub smoothness: SeveriCheck,
    pub dimension: SeveriCheck,
    pub terracini: SeveriCheck,
    pub secant: SeveriCheck,
    pub dual_inclusion: SeveriCheck,
    pub gauss_fibers: SeveriCheck,
}

impl SeveriReport {
    pub fn checks(&self) -> [(&'static str, &SeveriCheck); 7] {
        [
            ("orbit_closure", &self.orbit_closure),
            ("smoothness", &self.smoothness),
            ("dimension", &self.dimension),
            ("terracini", &self.terracini),
            ("secant", &self.secant),
            ("dual_inclusion", &self.dual_inclusion),
            ("gauss_fibers", &self.gauss_fibers),
        ]
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.passed)
    }
}

/// Singular seeds found among the coordinate vectors.
pub fn find_singular_seeds(f: &CubicForm) -> Result<Vec<Point>> {
    let n = f.n();
    let mut out = Vec::new();
    for i in 0..n {
        let e = crate::poly::unit_vector(n, i);
        if is_singular(f, &e)? {
            out.push(e);
        }
    }
    Ok(out)
}

pub fn severi_report(entry: &CatalogEntry, fstar: &CubicForm, seed: u64) -> Result<SeveriReport> {
    severi_battery(
        &entry.form,
        fstar,
        &entry.singular_seeds,
        entry.expected.singular_dim,
        DEFAULT_SAMPLES,
        seed,
    )
}

/// The full battery for a form with its transform `fstar`, starting from
/// the given singular seeds.
pub fn severi_battery(
    f: &CubicForm,
    fstar: &CubicForm,
    seeds: &[Point],
    expected_singular_dim: Option<u32>,
    samples: usize,
    seed: u64,
) -> Result<SeveriReport> {
    let n = f.n();
    if seeds.is_empty() {
        return Err(Error::Precondition("no singular seed available".into()));
    }
    let per_seed = samples.div_ceil(seeds.len()).max(1);
    let mut pts = Vec::new();
    let mut orbit_closure = SeveriCheck::new(true, "");
    for (s, z) in seeds.iter().enumerate() {
        match singular_samples(f, z, per_seed, derive_seed(seed, STREAM_ORBIT + 100 * s as u64)) {
            Ok(v) => pts.extend(v),
            Err(Error::Finding(m)) => {
                orbit_closure = SeveriCheck::new(false, m);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if orbit_closure.passed {
        orbit_closure.detail = format!("{} orbit images singular", pts.len());
    }

    let tangent_dims: Vec<usize> = pts
        .iter()
        .map(|z| tangent_dimension(f, z))
        .collect::<Result<_>>()?;
    let constant = tangent_dims.windows(2).all(|w| w[0] == w[1]);
    let smoothness = SeveriCheck::new(
        constant,
        format!("tangent dimensions {tangent_dims:?}"),
    );
    let singular_dim = if constant {
        tangent_dims.first().map(|d| d - 1)
    } else {
        None
    };
    let dimension = match (expected_singular_dim, singular_dim) {
        (Some(e), Some(d)) => SeveriCheck::new(e as usize == d, format!("measured {d}, expected {e}")),
        (None, Some(d)) => SeveriCheck::skipped(format!("measured {d}, no expectation")),
        _ => SeveriCheck::new(false, "tangent dimension not constant"),
    };

    let mut terracini_rank_value = None;
    let mut terracini = SeveriCheck::skipped("no independent pair of samples");
    let mut secant = SeveriCheck::new(true, "");
    let mut secant_pairs = 0;
    for (i, z1) in pts.iter().enumerate() {
        for z2 in &pts[i + 1..] {
            if !independent(z1, z2) {
                continue;
            }
            secant_pairs += 1;
            if !secant_membership(f, z1, z2)? {
                secant = SeveriCheck::new(
                    false,
                    format!("f(z1 + z2) != 0 for z1 = {}, z2 = {}", format_point(z1), format_point(z2)),
                );
            }
            if terracini_rank_value.is_none() {
                let r = terracini_rank(f, z1, z2)?;
                terracini_rank_value = Some(r);
                terracini = SeveriCheck::new(r == n - 1, format!("rank {r}, expected {}", n - 1));
            }
        }
    }
    if secant.passed {
        secant.detail = if secant_pairs == 0 {
            "skipped: no independent pair of samples".into()
        } else {
            format!("{secant_pairs} pairs on the hypersurface")
        };
    }

    let base = sample_off_hypersurface(f, pts.len().max(1), derive_seed(seed, STREAM_SMOOTH))?;
    let mut smooth_points = Vec::new();
    for (a, z) in base.iter().zip(&pts) {
        match tau_geometric_check(f, a, z) {
            Ok(g) if g.smooth && g.on_hypersurface => smooth_points.push(g.z_prime),
            Ok(_) => {}
            Err(Error::Precondition(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let dual_inclusion = if smooth_points.is_empty() {
        SeveriCheck::new(false, "no smooth point reached")
    } else {
        let mut ok = SeveriCheck::new(true, format!("{} smooth points", smooth_points.len()));
        for x in &smooth_points {
            if !dual_inclusion_check(f, fstar, x)? {
                ok = SeveriCheck::new(false, format!("f*' != 0 at f'({})", format_point(x)));
                break;
            }
        }
        ok
    };

    let mut gauss_kernel_dims = Vec::new();
    let mut gauss_fibers = SeveriCheck::new(!smooth_points.is_empty(), "sampled");
    for (i, x) in smooth_points.iter().enumerate() {
        let g = gauss_fiber_check(f, x, 2, derive_seed(seed, STREAM_FIBER + 100 * i as u64))?;
        gauss_kernel_dims.push(g.kernel_dim);
        if !g.linear {
            gauss_fibers = SeveriCheck::new(false, format!("fibre not linear at {}", format_point(x)));
        }
    }
    if gauss_fibers.passed {
        if let (Some(d), Some(_)) = (singular_dim, expected_singular_dim) {
            let expect = (n - 2).saturating_sub(d);
            if gauss_kernel_dims.iter().any(|&k| k != expect) {
                gauss_fibers = SeveriCheck::new(
                    false,
                    format!("kernel dimensions {gauss_kernel_dims:?}, expected {expect}"),
                );
            } else {
                gauss_fibers.detail = format!("sampled; kernel dimension {expect} at every point");
            }
        }
    }

    Ok(SeveriReport {
        ambient_dim: n - 1,
        singular_dim,
        expected_singular_dim,
        tangent_dims,
        terracini_rank: terracini_rank_value,
        samples: pts,
        gauss_kernel_dims,
        orbit_closure,
        smoothness,
        dimension,
        terracini,
        secant,
        dual_inclusion,
        gauss_fibers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_entry, herm3_norm};
    use crate::poly::{point, unit_vector};

    #[test]
    fn primitive_vectors() {
        let v = vec![Rational::new((-2).into(), 3.into()), Rational::from_integer(4.into())];
        assert_eq!(primitive(&v), point(&[1, -6]));
    }

    #[test]
    fn herm3_real_samples() {
        let e = herm3_norm(0).unwrap();
        let s = singular_samples(&e.form, &unit_vector(6, 0), 6, 2).unwrap();
        assert_eq!(s.len(), 6);
        for (i, z) in s.iter().enumerate() {
            assert!(is_singular(&e.form, z).unwrap());
            assert_eq!(tangent_dimension(&e.form, z).unwrap(), 3);
            for w in &s[..i] {
                assert!(independent(z, w));
            }
        }
        assert_eq!(terracini_rank(&e.form, &s[0], &s[1]).unwrap(), 5);
        assert!(secant_membership(&e.form, &s[0], &s[1]).unwrap());
    }

    #[test]
    fn triple_product_battery() {
        let e = catalog_entry("triple_product").unwrap();
        let rep = severi_report(&e, &e.form, 4).unwrap();
        assert!(rep.passed(), "{rep:#?}");
        assert_eq!(rep.singular_dim, Some(0));
        assert_eq!(rep.terracini_rank, Some(2));
    }

    #[test]
    fn preconditions() {
        let e = catalog_entry("triple_product").unwrap();
        assert!(terracini_rank(&e.form, &point(&[1, 0, 0]), &point(&[2, 0, 0])).is_err());
        assert!(dual_inclusion_check(&e.form, &e.form, &point(&[1, 1, 1])).is_err());
        assert!(gauss_fiber_check(&e.form, &point(&[1, 0, 0]), 1, 0).is_err());
        assert!(singular_samples(&e.form, &point(&[1, 1, 0]), 2, 0).is_err());
    }
}
