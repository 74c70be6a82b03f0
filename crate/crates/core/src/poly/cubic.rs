use num_traits::{One, Zero};

use super::{rat, unit_vector, EvalRing, Monomial, Point, Poly, Rational};
use crate::error::{check_dim, Error, Result};
use crate::linalg::Matrix;

/// A homogeneous cubic form in at least two variables, with its gradient
/// and Hessian expanded once at construction.
#[derive(Clone, Debug)]
pub struct CubicForm {
    poly: Poly,
    gradient: Vec<Poly>,
    hessian: Vec<Vec<Poly>>,
}

impl PartialEq for CubicForm {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}

impl Eq for CubicForm {}

impl CubicForm {
    pub fn new(poly: Poly) -> Result<Self> {
        if poly.n() < 2 {
            return Err(Error::NotCubic(format!(
                "need at least two variables, got {}",
                poly.n()
            )));
        }
        if poly.is_zero() {
            return Err(Error::NotCubic("zero polynomial".into()));
        }
        if !poly.is_homogeneous() || poly.degree() != Some(3) {
            return Err(Error::NotCubic(format!(
                "expected a homogeneous polynomial of degree 3, got {}{}",
                if poly.is_homogeneous() { "" } else { "a non-homogeneous polynomial of degree " },
                poly.degree().unwrap_or(0)
            )));
        }
        let gradient: Vec<Poly> = (0..poly.n()).map(|i| poly.derivative(i)).collect();
        let hessian = gradient
            .iter()
            .map(|g| (0..poly.n()).map(|j| g.derivative(j)).collect())
            .collect();
        Ok(CubicForm {
            poly,
            gradient,
            hessian,
        })
    }

    pub fn n(&self) -> usize {
        self.poly.n()
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn gradient(&self) -> &[Poly] {
        &self.gradient
    }

    pub fn hessian(&self) -> &[Vec<Poly>] {
        &self.hessian
    }

    pub fn scaled(&self, c: &Rational) -> Result<CubicForm> {
        CubicForm::new(self.poly.scaled(c))
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        self.poly.eval(x)
    }

    /// The covector `f'(x)`.
    pub fn gradient_at(&self, x: &[Rational]) -> Result<Point> {
        check_dim(self.n(), x.len())?;
        self.gradient.iter().map(|g| g.eval(x)).collect()
    }

    pub fn hessian_at(&self, x: &[Rational]) -> Result<Matrix> {
        check_dim(self.n(), x.len())?;
        let n = self.n();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = self.hessian[i][j].eval(x)?;
                m[(j, i)] = v.clone();
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    /// The symmetric trilinear form with `Q(x, x, x) = f(x)`, by the
    /// seven-term inclusion-exclusion formula.
    pub fn polarize(&self, a: &[Rational], b: &[Rational], c: &[Rational]) -> Result<Rational> {
        check_dim(self.n(), a.len())?;
        check_dim(self.n(), b.len())?;
        check_dim(self.n(), c.len())?;
        self.polarize_in(a, b, c, &Rational::one())
    }

    /// Polarization evaluated in any ring; with polynomial arguments this
    /// yields `Q` as a polynomial identity.
    pub fn polarize_in<T>(&self, a: &[T], b: &[T], c: &[T], one: &T) -> Result<T>
    where
        T: EvalRing,
    {
        let add = |x: &[T], y: &[T]| -> Vec<T> {
            x.iter()
                .zip(y)
                .map(|(p, q)| {
                    let mut s = p.clone();
                    s.add_assign_ref(q);
                    s
                })
                .collect()
        };
        let ab = add(a, b);
        let ac = add(a, c);
        let bc = add(b, c);
        let abc = add(&ab, c);
        let f = |x: &[T]| self.poly.eval_in(x, one);
        let neg = -Rational::one();
        let mut acc = f(&abc)?;
        for v in [&ab, &ac, &bc] {
            acc.add_assign_ref(&f(v)?.scale(&neg));
        }
        for v in [a, b, c] {
            acc.add_assign_ref(&f(v)?);
        }
        Ok(acc.scale(&Rational::new(1.into(), 6.into())))
    }

    /// The covector `Q(a, b, -)`.
    pub fn polarize_covector(&self, a: &[Rational], b: &[Rational]) -> Result<Point> {
        // Hess f(a) is linear in a, so Hess f(a) b = 6 Q(a, b, -).
        let h = self.hessian_at(a)?;
        let sixth = Rational::new(1.into(), 6.into());
        Ok(h.mul_vec(b)?.into_iter().map(|v| v * &sixth).collect())
    }

    /// Third derivatives `T[i][j][k] = 6 Q(e_i, e_j, e_k)`, read off the
    /// linear Hessian entries.
    pub fn third_derivatives(&self) -> Vec<Rational> {
        let n = self.n();
        let mut t = vec![Rational::zero(); n * n * n];
        for j in 0..n {
            for k in 0..n {
                for (m, c) in self.hessian[j][k].terms() {
                    let i = m
                        .exponents()
                        .iter()
                        .position(|&e| e == 1)
                        .expect("Hessian entries of a cubic are linear");
                    t[(i * n + j) * n + k] = c.clone();
                }
            }
        }
        t
    }

    /// A nonzero `v` with `Q(v, -, -) = 0`, if any. Such a direction makes
    /// the hypersurface a cone with vertex `v`.
    pub fn cone_direction(&self) -> Option<Point> {
        let n = self.n();
        let t = self.third_derivatives();
        // rows indexed by (j, k), columns by i
        let mut m = Matrix::zeros(n * n, n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    m[(j * n + k, i)] = t[(i * n + j) * n + k].clone();
                }
            }
        }
        m.kernel().into_iter().next()
    }

    /// Euler identity `sum_i x_i df/dx_i = 3 f`, checked symbolically.
    pub fn euler_identity_holds(&self) -> bool {
        let n = self.n();
        let mut lhs = Poly::zero(n);
        for (i, g) in self.gradient.iter().enumerate() {
            lhs.add_in_place(&(&Poly::var(n, i) * g), &Rational::one());
        }
        lhs == self.poly.scaled(&rat(3))
    }

    /// `3 Q(x, x, e_i) = df/dx_i` for every `i`, as polynomial identities.
    pub fn gradient_polarization_identity_holds(&self) -> Result<bool> {
        let n = self.n();
        let xs: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
        let one = Poly::constant(n, Rational::one());
        for i in 0..n {
            let e: Vec<Poly> = unit_vector(n, i)
                .into_iter()
                .map(|c| Poly::constant(n, c))
                .collect();
            let q = self.polarize_in(&xs, &xs, &e, &one)?;
            if q.scaled(&rat(3)) != self.gradient[i] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `d^2 f/dx_i dx_j = 6 Q(e_i, e_j, x)` for every pair, as polynomial
    /// identities.
    pub fn hessian_polarization_identity_holds(&self) -> Result<bool> {
        let n = self.n();
        let xs: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
        let one = Poly::constant(n, Rational::one());
        let basis: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                unit_vector(n, i)
                    .into_iter()
                    .map(|c| Poly::constant(n, c))
                    .collect()
            })
            .collect();
        for i in 0..n {
            for j in i..n {
                let q = self.polarize_in(&basis[i], &basis[j], &xs, &one)?;
                if q.scaled(&rat(6)) != self.hessian[i][j] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Monomials of degree 3 in the same number of variables, in the order
    /// used for interpolation unknowns.
    pub fn cubic_monomials(n: usize) -> Vec<Monomial> {
        Monomial::all_of_degree(n, 3)
    }
}

impl std::fmt::Display for CubicForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.poly.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, point, ratio};

    fn cubic(s: &str, n: usize) -> CubicForm {
        CubicForm::new(parse_poly(s, Some(n)).unwrap()).unwrap()
    }

    #[test]
    fn rejects_non_cubics() {
        assert!(CubicForm::new(parse_poly("x0^2*x1 + x1", None).unwrap()).is_err());
        assert!(CubicForm::new(parse_poly("x0^2*x1^2", None).unwrap()).is_err());
        assert!(CubicForm::new(parse_poly("x0^3", Some(1)).unwrap()).is_err());
        assert!(CubicForm::new(Poly::zero(3)).is_err());
    }

    #[test]
    fn gradient_and_hessian_examples() {
        let f = cubic("x0^3", 2);
        assert_eq!(f.gradient()[0], parse_poly("3*x0^2", Some(2)).unwrap());
        assert!(f.gradient()[1].is_zero());
        assert_eq!(f.hessian()[0][0], parse_poly("6*x0", Some(2)).unwrap());

        let g = cubic("x0*x1*x2", 3);
        assert_eq!(g.gradient()[0], parse_poly("x1*x2", None).unwrap());
        assert_eq!(g.gradient()[2], parse_poly("x0*x1", Some(3)).unwrap());
        assert_eq!(g.hessian()[0][1], parse_poly("x2", None).unwrap());
    }

    #[test]
    fn polarization_of_triple_product() {
        let f = cubic("x0*x1*x2", 3);
        let e = |i| unit_vector(3, i);
        assert_eq!(f.polarize(&e(0), &e(1), &e(2)).unwrap(), ratio(1, 6));
        assert_eq!(f.polarize(&e(0), &e(0), &e(2)).unwrap(), rat(0));
        let a = point(&[2, -3, 5]);
        assert_eq!(f.polarize(&a, &a, &a).unwrap(), f.eval(&a).unwrap());
        assert!(f.polarize(&a, &a, &point(&[1, 2])).is_err());
    }

    #[test]
    fn polarize_covector_matches_trilinear_form() {
        let f = cubic("x0^2*x1 - 2*x1*x2^2 + 1/3*x0*x1*x2 + x2^3", 3);
        let a = point(&[1, -2, 3]);
        let b = point(&[4, 0, -1]);
        let cov = f.polarize_covector(&a, &b).unwrap();
        for (i, c) in cov.iter().enumerate() {
            assert_eq!(c, &f.polarize(&a, &b, &unit_vector(3, i)).unwrap());
        }
    }

    #[test]
    fn cone_examples() {
        let v = cubic("x0^3", 3).cone_direction().expect("cone");
        assert!(v[0].is_zero() && !(v[1].is_zero() && v[2].is_zero()));
        assert!(cubic("x0*x1*x2", 3).cone_direction().is_none());
        // x0^2 x1 + x1^3 does not involve x2
        let w = cubic("x0^2*x1 + x1^3", 3).cone_direction().expect("cone");
        assert_eq!(w, point(&[0, 0, 1]));
    }

    #[test]
    fn identities_on_a_random_cubic() {
        let f = cubic("x0^2*x1 - 2*x1*x2^2 + 1/3*x0*x1*x2 + x2^3 - 5*x0^3", 3);
        assert!(f.euler_identity_holds());
        assert!(f.gradient_polarization_identity_holds().unwrap());
        assert!(f.hessian_polarization_identity_holds().unwrap());
    }
}
