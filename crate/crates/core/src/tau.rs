//! The second logarithmic differential `tau_{f,A} = d_A(f'/f)`, a symmetric
//! map `V -> V*`, and the identities built on it.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::formal::Jet;
use crate::linalg::{solve_linear, LinearSolution, Matrix};
use crate::poly::{is_zero_vector, serde_text, unit_vector, CubicForm, Point, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauMatrix {
    /// `(f(A) Hess f(A) - f'(A)^T f'(A)) / f(A)^2`, mapping `V -> V*`.
    pub entries: Matrix,
    pub base_point: Point,
}

impl TauMatrix {
    pub fn apply(&self, z: &[Rational]) -> Result<Point> {
        self.entries.mul_vec(z)
    }
}

fn nonzero_value(f: &CubicForm, a: &[Rational]) -> Result<Rational> {
    let v = f.eval(a)?;
    if v.is_zero() {
        Err(Error::VanishesAtBasePoint)
    } else {
        Ok(v)
    }
}

pub fn tau(f: &CubicForm, a: &[Rational]) -> Result<TauMatrix> {
    let fa = nonzero_value(f, a)?;
    let g = f.gradient_at(a)?;
    let h = f.hessian_at(a)?;
    let n = f.n();
    let f2 = &fa * &fa;
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = (&fa * &h[(i, j)] - &g[i] * &g[j]) / &f2;
        }
    }
    Ok(TauMatrix {
        entries: m,
        base_point: a.to_vec(),
    })
}

/// `tau_{f,A}` together with its derivative in direction `b`, both exact,
/// by evaluating along `A + t b` in first-order jets.
pub fn tau_with_derivative(f: &CubicForm, a: &[Rational], b: &[Rational]) -> Result<(Matrix, Matrix)> {
    check_dim(f.n(), b.len())?;
    nonzero_value(f, a)?;
    let n = f.n();
    let line = Jet::line(a, b);
    let one = Jet::one();
    let fj = f.poly().eval_in(&line, &one)?;
    let gj: Vec<Jet> = f
        .gradient()
        .iter()
        .map(|g| g.eval_in(&line, &one))
        .collect::<Result<_>>()?;
    let f2 = &fj * &fj;
    let mut value = Matrix::zeros(n, n);
    let mut slope = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let hij = f.hessian()[i][j].eval_in(&line, &one)?;
            let e = (&(&fj * &hij) - &(&gj[i] * &gj[j])).div(&f2)?;
            value[(i, j)] = e.value.clone();
            value[(j, i)] = e.value;
            slope[(i, j)] = e.slope.clone();
            slope[(j, i)] = e.slope;
        }
    }
    Ok((value, slope))
}

/// Third derivatives of `ln f` at `A`, from the polarization:
/// `f_ijk/f - (f_ij f_k + f_ik f_j + f_jk f_i)/f^2 + 2 f_i f_j f_k/f^3`
/// with `f_ijk = 6 Q(e_i, e_j, e_k)`. Flat `(i, j, k)` indexing.
pub fn log_third_derivatives(f: &CubicForm, a: &[Rational]) -> Result<Vec<Rational>> {
    let fa = nonzero_value(f, a)?;
    let n = f.n();
    let g = f.gradient_at(a)?;
    let h = f.hessian_at(a)?;
    let f2 = &fa * &fa;
    let f3 = &f2 * &fa;
    let six = Rational::from_integer(6.into());
    let two = Rational::from_integer(2.into());
    let e: Vec<Point> = (0..n).map(|i| unit_vector(n, i)).collect();
    let mut t = vec![Rational::zero(); n * n * n];
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let fijk = &six * f.polarize(&e[i], &e[j], &e[k])?;
                let v = fijk / &fa
                    - (&h[(i, j)] * &g[k] + &h[(i, k)] * &g[j] + &h[(j, k)] * &g[i]) / &f2
                    + &two * &g[i] * &g[j] * &g[k] / &f3;
                for (p, q, r) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                    t[(p * n + q) * n + r] = v.clone();
                }
            }
        }
    }
    Ok(t)
}

/// Whether `tau_{f*,A*} tau_{f,A} = Id` with `A* = f'(A)/f(A)`.
pub fn tau_inverse_check(f: &CubicForm, fstar: &CubicForm, a: &[Rational]) -> Result<bool> {
    let fa = nonzero_value(f, a)?;
    check_dim(f.n(), fstar.n())?;
    let a_star: Point = f.gradient_at(a)?.into_iter().map(|c| c / &fa).collect();
    let t = tau(f, a)?;
    let ts = match tau(fstar, &a_star) {
        Ok(ts) => ts,
        Err(Error::VanishesAtBasePoint) => return Ok(false),
        Err(e) => return Err(e),
    };
    Ok(ts.entries.mul(&t.entries)?.is_identity())
}

/// Two vectors span at most a line (all 2x2 minors vanish).
pub fn proportional(u: &[Rational], v: &[Rational]) -> bool {
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            if &u[i] * &v[j] != &u[j] * &v[i] {
                return false;
            }
        }
    }
    true
}

/// Outcome of the tangent-hyperplane interpretation of `tau_{f,A}(z)` for a
/// singular point `z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometricCheck {
    /// `z' = A - (f(A) / f'(A)(z)) z`, the residual point of the line `Az`.
    #[serde(serialize_with = "serde_text::point")]
    pub z_prime: Point,
    pub on_hypersurface: bool,
    pub smooth: bool,
    pub proportional: bool,
    pub explicit_formula: bool,
}

impl GeometricCheck {
    pub fn passed(&self) -> bool {
        self.on_hypersurface && self.smooth && self.proportional && self.explicit_formula
    }
}

pub fn tau_geometric_check(f: &CubicForm, a: &[Rational], z: &[Rational]) -> Result<GeometricCheck> {
    let fa = nonzero_value(f, a)?;
    check_dim(f.n(), z.len())?;
    if is_zero_vector(z) {
        return Err(Error::ZeroVector);
    }
    if !is_zero_vector(&f.gradient_at(z)?) {
        return Err(Error::Precondition(
            "f'(z) != 0: z is not on the singular locus".into(),
        ));
    }
    let ga = f.gradient_at(a)?;
    let s: Rational = ga.iter().zip(z).map(|(x, y)| x * y).sum();
    if s.is_zero() {
        return Err(Error::Precondition(
            "f'(A)(z) = 0: z lies outside the open set U_A".into(),
        ));
    }
    let lambda = &fa / &s;
    let z_prime: Point = a.iter().zip(z).map(|(ai, zi)| ai - &lambda * zi).collect();
    let on_hypersurface = f.eval(&z_prime)?.is_zero();
    let gz = f.gradient_at(&z_prime)?;
    let smooth = !is_zero_vector(&gz);
    let tz = tau(f, a)?.apply(z)?;
    let proportional = proportional(&tz, &gz);

    let q_za = f.polarize_covector(z, a)?;
    let q_aa = f.polarize_covector(a, a)?;
    let three = Rational::from_integer(3.into());
    let two_fa = Rational::from_integer(2.into()) * &fa;
    let f2 = &fa * &fa;
    let explicit: Point = q_za
        .iter()
        .zip(&q_aa)
        .map(|(x, y)| &three * (&two_fa * x - &s * y) / &f2)
        .collect();
    Ok(GeometricCheck {
        z_prime,
        on_hypersurface,
        smooth,
        proportional,
        explicit_formula: explicit == tz,
    })
}

/// `tau_{f,A2}^{-1} tau_{f,A1}`; maps the cone over the singular locus into
/// itself.
pub fn singular_orbit_map(f: &CubicForm, a1: &[Rational], a2: &[Rational]) -> Result<Matrix> {
    let t1 = tau(f, a1)?;
    let t2 = tau(f, a2)?;
    t2.entries.inverse()?.mul(&t1.entries)
}

/// `tau_{f,A2}^{-1} tau_{f,A1} z` by a single linear solve.
pub fn orbit_image(f: &CubicForm, a1: &[Rational], a2: &[Rational], z: &[Rational]) -> Result<Point> {
    let rhs = tau(f, a1)?.apply(z)?;
    match solve_linear(&tau(f, a2)?.entries, &rhs)? {
        LinearSolution::Unique { solution } => Ok(solution),
        _ => Err(Error::SingularMatrix),
    }
}

/// `H_A = tau_{f,I}^{-1} tau_{f,A}`, defined by
/// `tau_{f,A}(B, C) = tau_{f,I}(H_A B, C)`.
pub fn h_map(f: &CubicForm, unit: &[Rational], a: &[Rational]) -> Result<Matrix> {
    let ti = tau(f, unit)?;
    let ta = tau(f, a)?;
    ti.entries.inverse()?.mul(&ta.entries)
}

/// The common ratio `f(H_A B) / f(B)` over the given `B`s, if it is the same
/// for all of them.
pub fn h_scalar(f: &CubicForm, h: &Matrix, bs: &[Point]) -> Result<Option<Rational>> {
    let mut ratio: Option<Rational> = None;
    for b in bs {
        let fb = f.eval(b)?;
        if fb.is_zero() {
            continue;
        }
        let r = f.eval(&h.mul_vec(b)?)? / fb;
        match &ratio {
            None => ratio = Some(r),
            Some(prev) if *prev != r => return Ok(None),
            _ => {}
        }
    }
    Ok(ratio)
}

/// Derivative at `I` of `A -> tau_{f,I}^{-1}(tau_{f,A}(I))`, as a matrix.
pub fn phi_derivative(f: &CubicForm, unit: &[Rational]) -> Result<Matrix> {
    let n = f.n();
    let ti_inv = tau(f, unit)?.entries.inverse()?;
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let (_, slope) = tau_with_derivative(f, unit, &unit_vector(n, i))?;
        cols.push(ti_inv.mul_vec(&slope.mul_vec(unit)?)?);
    }
    Matrix::from_columns(&cols)
}

/// Whether that derivative is exactly `-2 Id`.
pub fn phi_derivative_check(f: &CubicForm, unit: &[Rational]) -> Result<bool> {
    let d = phi_derivative(f, unit)?;
    Ok(d == Matrix::identity(f.n()).scale(&Rational::from_integer((-2).into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::herm3_norm;
    use crate::poly::{parse_poly, point, rat, ratio};
    use crate::sampling::{rng, sample_off_hypersurface};

    fn triple() -> CubicForm {
        CubicForm::new(parse_poly("x0*x1*x2", None).unwrap()).unwrap()
    }

    #[test]
    fn tau_of_separable_log() {
        let t = tau(&triple(), &point(&[1, 1, 1])).unwrap();
        assert_eq!(t.entries, Matrix::identity(3).scale(&rat(-1)));
        let t2 = tau(&triple(), &point(&[1, 2, -1])).unwrap();
        let mut expect = Matrix::zeros(3, 3);
        expect[(0, 0)] = rat(-1);
        expect[(1, 1)] = ratio(-1, 4);
        expect[(2, 2)] = rat(-1);
        assert_eq!(t2.entries, expect);
        assert_eq!(tau(&triple(), &point(&[0, 1, 1])), Err(Error::VanishesAtBasePoint));
    }

    #[test]
    fn tau_symmetric_and_degree_minus_two() {
        let f = herm3_norm(0).unwrap().form;
        for a in sample_off_hypersurface(&f, 10, 3).unwrap() {
            let t = tau(&f, &a).unwrap().entries;
            assert!(t.is_symmetric());
            let a2: Point = a.iter().map(|c| c * rat(2)).collect();
            assert_eq!(tau(&f, &a2).unwrap().entries, t.scale(&ratio(1, 4)));
        }
    }

    #[test]
    fn jet_and_polarization_derivatives_agree() {
        let f = herm3_norm(0).unwrap().form;
        let mut r = rng(11);
        for a in sample_off_hypersurface(&f, 3, 5).unwrap() {
            let t3 = log_third_derivatives(&f, &a).unwrap();
            let b = crate::sampling::random_point(&mut r, 6);
            let (_, slope) = tau_with_derivative(&f, &a, &b).unwrap();
            for j in 0..6 {
                for k in 0..6 {
                    let v: Rational = (0..6).map(|i| &b[i] * &t3[(i * 6 + j) * 6 + k]).sum();
                    assert_eq!(slope[(j, k)], v);
                }
            }
        }
    }

    #[test]
    fn inverse_check_triple_product() {
        let f = triple();
        assert!(tau_inverse_check(&f, &f, &point(&[1, 1, 1])).unwrap());
        assert!(tau_inverse_check(&f, &f, &point(&[2, -3, 5])).unwrap());
        let wrong = CubicForm::new(parse_poly("x0^3 + x1^3 + x2^3", None).unwrap()).unwrap();
        assert!(!tau_inverse_check(&f, &wrong, &point(&[2, -3, 5])).unwrap());
    }

    #[test]
    fn geometric_check_examples() {
        let f = triple();
        let g = tau_geometric_check(&f, &point(&[1, 1, 1]), &point(&[1, 0, 0])).unwrap();
        assert_eq!(g.z_prime, point(&[0, 1, 1]));
        assert!(g.passed());

        let h = herm3_norm(0).unwrap();
        let a = h.unit.clone().unwrap();
        let z = unit_vector(6, 0);
        let g = tau_geometric_check(&h.form, &a, &z).unwrap();
        assert_eq!(g.z_prime, point(&[0, 1, 1, 0, 0, 0]));
        assert!(g.passed());

        let err = tau_geometric_check(&f, &point(&[1, 0, 1]), &point(&[1, 0, 0]));
        assert!(matches!(err, Err(Error::VanishesAtBasePoint)));
        let err = tau_geometric_check(&f, &point(&[1, 1, 1]), &point(&[1, 1, 0]));
        assert!(matches!(err, Err(Error::Precondition(m)) if m.contains("singular")));
        let err = tau_geometric_check(&h.form, &point(&[1, 1, 1, 1, 1, 0]), &z);
        assert!(matches!(err, Err(Error::Precondition(m)) if m.contains("U_A")));
    }

    #[test]
    fn orbit_maps() {
        let f = herm3_norm(0).unwrap().form;
        let pts = sample_off_hypersurface(&f, 4, 8).unwrap();
        assert!(singular_orbit_map(&f, &pts[0], &pts[0]).unwrap().is_identity());
        let g12 = singular_orbit_map(&f, &pts[0], &pts[1]).unwrap();
        let g21 = singular_orbit_map(&f, &pts[1], &pts[0]).unwrap();
        assert!(g12.mul(&g21).unwrap().is_identity());
        let z = unit_vector(6, 0);
        let gz = g12.mul_vec(&z).unwrap();
        assert!(is_zero_vector(&f.gradient_at(&gz).unwrap()));
        assert_eq!(orbit_image(&f, &pts[0], &pts[1], &z).unwrap(), gz);
    }

    #[test]
    fn h_map_relations() {
        let e = herm3_norm(0).unwrap();
        let (f, unit) = (&e.form, e.unit.as_ref().unwrap());
        assert!(h_map(f, unit, unit).unwrap().is_identity());
        let pts = sample_off_hypersurface(f, 8, 21).unwrap();
        let a = &pts[0];
        let h = h_map(f, unit, a).unwrap();
        let ta = tau(f, a).unwrap().entries;
        let ti = tau(f, unit).unwrap().entries;
        for w in pts[1..].windows(2) {
            let (b, c) = (&w[0], &w[1]);
            assert_eq!(ta.bilinear(b, c).unwrap(), ti.bilinear(&h.mul_vec(b).unwrap(), c).unwrap());
        }
        let ratio = h_scalar(f, &h, &pts[1..6]).unwrap().expect("constant ratio");
        // H_A B = A^{-1} B A^{-1}, so the ratio is det(A)^{-2}
        let fa = f.eval(a).unwrap();
        assert_eq!(ratio, rat(1) / (&fa * &fa));
    }

    #[test]
    fn phi_derivative_examples() {
        assert!(phi_derivative_check(&triple(), &point(&[1, 1, 1])).unwrap());
        let e = herm3_norm(1).unwrap();
        assert!(phi_derivative_check(&e.form, e.unit.as_ref().unwrap()).unwrap());
    }
}
