//! The commutative algebra attached to a cubic form and a base point `I`:
//! `L_A = -1/2 tau_{f,I}^{-1} D tau_{f,I}[A]`, so that
//! `tau_{f,I}(A o B, C) = -1/2 D^3 ln f(I)[A, B, C]`.

use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{solve_linear, LinearSolution, Matrix};
use crate::poly::{format_point, format_rational, is_zero_vector, serde_text, unit_vector};
use crate::poly::{CubicForm, Point, Rational};
use crate::sampling::{derive_seed, random_nonzero_point, rng, sample_off_hypersurface};
use crate::tau::{log_third_derivatives, tau, tau_with_derivative};

#[derive(Clone, Debug)]
pub struct JordanStructure {
    n: usize,
    unit: Point,
    unit_norm: Rational,
    norm: CubicForm,
    /// `e_i o e_j = sum_k c[(i n + j) n + k] e_k`.
    constants: Vec<Rational>,
    nonzero: Vec<(usize, usize, usize, Rational)>,
}

impl PartialEq for JordanStructure {
    fn eq(&self, other: &Self) -> bool {
        self.unit == other.unit && self.constants == other.constants
    }
}

/// Structure constants from the exact derivative of `tau` along each basis
/// direction.
pub fn jordan_product(f: &CubicForm, unit: &[Rational]) -> Result<JordanStructure> {
    check_dim(f.n(), unit.len())?;
    let n = f.n();
    let ti_inv = tau(f, unit)?.entries.inverse()?;
    let half = Rational::new((-1).into(), 2.into());
    let mut constants = vec![Rational::zero(); n * n * n];
    for i in 0..n {
        let (_, d) = tau_with_derivative(f, unit, &unit_vector(n, i))?;
        let l = ti_inv.mul(&d)?.scale(&half);
        for j in 0..n {
            for k in 0..n {
                constants[(i * n + j) * n + k] = l[(k, j)].clone();
            }
        }
    }
    JordanStructure::build(f, unit, constants)
}

/// Same constants, from the closed-form third logarithmic derivatives.
pub fn jordan_product_polarized(f: &CubicForm, unit: &[Rational]) -> Result<JordanStructure> {
    check_dim(f.n(), unit.len())?;
    let n = f.n();
    let ti_inv = tau(f, unit)?.entries.inverse()?;
    let t3 = log_third_derivatives(f, unit)?;
    let half = Rational::new((-1).into(), 2.into());
    let mut constants = vec![Rational::zero(); n * n * n];
    for i in 0..n {
        let slice: Vec<Vec<Rational>> = (0..n)
            .map(|j| t3[(i * n + j) * n..(i * n + j + 1) * n].to_vec())
            .collect();
        let l = ti_inv.mul(&Matrix::from_rows(slice)?)?.scale(&half);
        for j in 0..n {
            for k in 0..n {
                constants[(i * n + j) * n + k] = l[(k, j)].clone();
            }
        }
    }
    JordanStructure::build(f, unit, constants)
}

impl JordanStructure {
    fn build(f: &CubicForm, unit: &[Rational], constants: Vec<Rational>) -> Result<Self> {
        let n = f.n();
        let mut nonzero = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = &constants[(i * n + j) * n + k];
                    if !c.is_zero() {
                        nonzero.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        let js = JordanStructure {
            n,
            unit: unit.to_vec(),
            unit_norm: f.eval(unit)?,
            norm: f.clone(),
            constants,
            nonzero,
        };
        if !js.left_mul_matrix(unit)?.is_identity() {
            return Err(Error::Finding("I o A = A fails for the derived product".into()));
        }
        Ok(js)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn unit(&self) -> &[Rational] {
        &self.unit
    }

    /// `f(I)`; the norm identities carry this factor when it is not 1.
    pub fn unit_norm(&self) -> &Rational {
        &self.unit_norm
    }

    pub fn norm(&self) -> &CubicForm {
        &self.norm
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.constants[(i * self.n + j) * self.n + k]
    }

    pub fn constants(&self) -> &[Rational] {
        &self.constants
    }

    pub fn mul(&self, a: &[Rational], b: &[Rational]) -> Result<Point> {
        check_dim(self.n, a.len())?;
        check_dim(self.n, b.len())?;
        let mut out = vec![Rational::zero(); self.n];
        for (i, j, k, c) in &self.nonzero {
            if a[*i].is_zero() || b[*j].is_zero() {
                continue;
            }
            out[*k] += &a[*i] * &b[*j] * c;
        }
        Ok(out)
    }

    pub fn square(&self, a: &[Rational]) -> Result<Point> {
        self.mul(a, a)
    }

    pub fn left_mul_matrix(&self, a: &[Rational]) -> Result<Matrix> {
        check_dim(self.n, a.len())?;
        let mut m = Matrix::zeros(self.n, self.n);
        for (i, j, k, c) in &self.nonzero {
            if !a[*i].is_zero() {
                m[(*k, *j)] += &a[*i] * c;
            }
        }
        Ok(m)
    }

    /// `P(A) = 2 L_A^2 - L_{A^2}`.
    pub fn quadratic_rep(&self, a: &[Rational]) -> Result<Matrix> {
        let l = self.left_mul_matrix(a)?;
        let l2 = l.mul(&l)?;
        let la2 = self.left_mul_matrix(&self.square(a)?)?;
        l2.scale(&Rational::from_integer(2.into())).sub(&la2)
    }

    /// `L_A^2 - L_{A^2}`, kept for comparison with `P(A)`.
    pub fn quadratic_rep_literal(&self, a: &[Rational]) -> Result<Matrix> {
        let l = self.left_mul_matrix(a)?;
        let la2 = self.left_mul_matrix(&self.square(a)?)?;
        l.mul(&l)?.sub(&la2)
    }

    /// `A^{-1} = P(A)^{-1} A`.
    pub fn inverse(&self, a: &[Rational]) -> Result<Point> {
        match solve_linear(&self.quadratic_rep(a)?, a)? {
            LinearSolution::Unique { solution } => Ok(solution),
            _ => Err(Error::SingularMatrix),
        }
    }
}

impl Serialize for JordanStructure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("JordanStructure", 4)?;
        st.serialize_field("dimension", &self.n)?;
        st.serialize_field("unit", &format_point(&self.unit))?;
        st.serialize_field("unit_norm", &format_rational(&self.unit_norm))?;
        let flat: Vec<String> = self.constants.iter().map(format_rational).collect();
        st.serialize_field("structure_constants", &flat)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckOutcome {
    fn run<I, F>(inputs: I, mut check: F) -> Result<Self>
    where
        I: IntoIterator,
        F: FnMut(&I::Item) -> Result<bool>,
        I::Item: std::fmt::Debug,
    {
        let mut trials = 0;
        for x in inputs {
            trials += 1;
            if !check(&x)? {
                return Ok(CheckOutcome {
                    passed: false,
                    trials,
                    witness: Some(witness_text(&x)),
                });
            }
        }
        Ok(CheckOutcome {
            passed: true,
            trials,
            witness: None,
        })
    }
}

fn witness_text<T: std::fmt::Debug>(x: &T) -> String {
    format!("{x:?}")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JordanReport {
    #[serde(serialize_with = "serde_text::rational")]
    pub unit_norm: Rational,
    pub commutativity: CheckOutcome,
    pub unit: CheckOutcome,
    pub jordan_identity: CheckOutcome,
    /// `f(P(A) B) f(I)^2 = f(A)^2 f(B)`.
    pub composition: CheckOutcome,
    /// The same identity for `L_A^2 - L_{A^2}`; informational.
    pub literal_composition: CheckOutcome,
    pub invertibility: CheckOutcome,
    pub inverse_law: CheckOutcome,
}

impl JordanReport {
    pub fn passed(&self) -> bool {
        self.commutativity.passed
            && self.unit.passed
            && self.jordan_identity.passed
            && self.composition.passed
            && self.invertibility.passed
            && self.inverse_law.passed
    }
}

const STREAM_POINTS: u64 = 31;
const STREAM_PROBE: u64 = 32;

struct Pt(Point);

impl std::fmt::Debug for Pt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_point(&self.0))
    }
}

pub fn jordan_verify(j: &JordanStructure, trials: usize, seed: u64) -> Result<JordanReport> {
    let f = &j.norm;
    let n = j.n;
    let pts = sample_off_hypersurface(f, 3 * trials.max(1), derive_seed(seed, STREAM_POINTS))?;
    let triples: Vec<(Pt, Pt, Pt)> = pts
        .chunks(3)
        .map(|c| (Pt(c[0].clone()), Pt(c[1].clone()), Pt(c[2].clone())))
        .collect();
    let c2 = &j.unit_norm * &j.unit_norm;

    let symmetric = (0..n).all(|a| {
        (0..n).all(|b| (0..n).all(|k| j.constant(a, b, k) == j.constant(b, a, k)))
    });
    let mut commutativity = CheckOutcome::run(&triples, |(a, b, _)| {
        Ok(j.mul(&a.0, &b.0)? == j.mul(&b.0, &a.0)?)
    })?;
    if !symmetric {
        commutativity.passed = false;
        commutativity.witness.get_or_insert_with(|| "structure constants".into());
    }

    let unit = CheckOutcome::run(&triples, |(a, _, _)| Ok(j.mul(&j.unit, &a.0)? == a.0))?;

    let jordan_identity = CheckOutcome::run(&triples, |(a, b, _)| {
        let a2 = j.square(&a.0)?;
        Ok(j.mul(&j.mul(&a2, &b.0)?, &a.0)? == j.mul(&a2, &j.mul(&b.0, &a.0)?)?)
    })?;

    let composition_with = |rep: &dyn Fn(&[Rational]) -> Result<Matrix>, a: &Pt, b: &Pt| {
        let pb = rep(&a.0)?.mul_vec(&b.0)?;
        let fa = f.eval(&a.0)?;
        Ok::<bool, Error>(f.eval(&pb)? * &c2 == &fa * &fa * f.eval(&b.0)?)
    };
    let composition = CheckOutcome::run(&triples, |(a, b, _)| {
        composition_with(&|x| j.quadratic_rep(x), a, b)
    })?;
    let literal_composition = CheckOutcome::run(&triples, |(a, b, _)| {
        composition_with(&|x| j.quadratic_rep_literal(x), a, b)
    })?;

    let zero_norm: Vec<Pt> = (0..n)
        .map(|i| unit_vector(n, i))
        .filter(|e| f.eval(e).map(|v| v.is_zero()).unwrap_or(false))
        .map(Pt)
        .collect();
    let mut invertibility = CheckOutcome::run(&triples, |(a, _, _)| {
        Ok(!j.quadratic_rep(&a.0)?.det()?.is_zero())
    })?;
    if invertibility.passed {
        let singular = CheckOutcome::run(&zero_norm, |z| Ok(j.quadratic_rep(&z.0)?.det()?.is_zero()))?;
        invertibility = CheckOutcome {
            passed: singular.passed,
            trials: invertibility.trials + singular.trials,
            witness: singular.witness,
        };
    }

    let inverse_law = CheckOutcome::run(&triples, |(a, _, _)| {
        let inv = match j.inverse(&a.0) {
            Ok(inv) => inv,
            Err(Error::SingularMatrix) => return Ok(false),
            Err(e) => return Err(e),
        };
        Ok(j.quadratic_rep(&a.0)?.mul_vec(&inv)? == a.0 && j.mul(&a.0, &inv)? == j.unit)
    })?;

    Ok(JordanReport {
        unit_norm: j.unit_norm.clone(),
        commutativity,
        unit,
        jordan_identity,
        composition,
        literal_composition,
        invertibility,
        inverse_law,
    })
}

/// Row-echelon span over the rationals, grown one vector at a time.
struct Span {
    rows: Vec<(usize, Point)>,
}

impl Span {
    fn new() -> Self {
        Span { rows: Vec::new() }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of the span so far.
    fn insert(&mut self, v: &[Rational]) -> bool {
        let mut v = v.to_vec();
        for (p, r) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, y) in v.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = v[p].clone();
        if !lead.is_one() {
            for x in v.iter_mut() {
                *x /= &lead;
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// Dimension of the two-sided ideal generated by `a`.
pub fn ideal_closure_dim(j: &JordanStructure, a: &[Rational]) -> Result<usize> {
    check_dim(j.n, a.len())?;
    let basis: Vec<Point> = (0..j.n).map(|i| unit_vector(j.n, i)).collect();
    let mut span = Span::new();
    let mut queue = Vec::new();
    if span.insert(a) {
        queue.push(a.to_vec());
    }
    while let Some(v) = queue.pop() {
        for e in &basis {
            let w = j.mul(e, &v)?;
            if span.insert(&w) {
                queue.push(w);
            }
            if span.dim() == j.n {
                return Ok(j.n);
            }
        }
    }
    Ok(span.dim())
}

/// Whether every probed nonzero element generates the whole algebra as an
/// ideal. Basis vectors are probed first, then `trials` random elements.
pub fn simplicity_probe(j: &JordanStructure, trials: usize, seed: u64) -> Result<bool> {
    Ok(simplicity_witness(j, trials, seed)?.is_none())
}

/// A nonzero element generating a proper ideal, with that ideal's dimension.
pub fn simplicity_witness(
    j: &JordanStructure,
    trials: usize,
    seed: u64,
) -> Result<Option<(Point, usize)>> {
    let mut r = rng(derive_seed(seed, STREAM_PROBE));
    let probes = (0..j.n)
        .map(|i| unit_vector(j.n, i))
        .chain((0..trials).map(|_| random_nonzero_point(&mut r, j.n)));
    for p in probes {
        debug_assert!(!is_zero_vector(&p));
        let d = ideal_closure_dim(j, &p)?;
        if d < j.n {
            return Ok(Some((p, d)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_entry, herm3_norm};
    use crate::poly::{point, rat};

    #[test]
    fn triple_product_is_coordinatewise() {
        let e = catalog_entry("triple_product").unwrap();
        let j = jordan_product(&e.form, e.unit.as_ref().unwrap()).unwrap();
        assert_eq!(j.mul(&point(&[2, 3, -1]), &point(&[5, 7, 4])).unwrap(), point(&[10, 21, -4]));
        assert_eq!(
            j.quadratic_rep(&point(&[2, 3, -1])).unwrap().mul_vec(&point(&[1, 1, 1])).unwrap(),
            point(&[4, 9, 1])
        );
        assert!(!simplicity_probe(&j, 4, 1).unwrap());
        assert_eq!(ideal_closure_dim(&j, &unit_vector(3, 0)).unwrap(), 1);
        assert_eq!(ideal_closure_dim(&j, &point(&[1, 2, 3])).unwrap(), 3);
    }

    #[test]
    fn routes_agree() {
        for e in [herm3_norm(0).unwrap(), herm3_norm(1).unwrap(), catalog_entry("linear_times_quadric").unwrap()] {
            let u = e.unit.as_ref().unwrap();
            assert_eq!(jordan_product(&e.form, u).unwrap(), jordan_product_polarized(&e.form, u).unwrap());
        }
    }

    #[test]
    fn herm3_real_report() {
        let e = herm3_norm(0).unwrap();
        let j = jordan_product(&e.form, e.unit.as_ref().unwrap()).unwrap();
        let rep = jordan_verify(&j, 10, 3).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(!rep.literal_composition.passed);
        assert!(simplicity_probe(&j, 3, 3).unwrap());
    }

    #[test]
    fn non_unit_base_point_scales_identities() {
        let e = catalog_entry("triple_product").unwrap();
        let j = jordan_product(&e.form, &point(&[2, 1, 1])).unwrap();
        assert_eq!(j.unit_norm(), &rat(2));
        let rep = jordan_verify(&j, 5, 9).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let inv = j.inverse(&point(&[2, 1, 1])).unwrap();
        assert_eq!(j.mul(&point(&[2, 1, 1]), &inv).unwrap(), point(&[2, 1, 1]));
        assert_eq!(inv[0], rat(2));
    }

    #[test]
    fn vanishing_base_point() {
        let e = catalog_entry("triple_product").unwrap();
        assert!(matches!(jordan_product(&e.form, &point(&[0, 1, 1])), Err(Error::VanishesAtBasePoint)));
    }
}
