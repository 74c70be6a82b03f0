//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors ordered graded
//! lexicographically, so iteration, printing and equality are canonical.

mod cubic;
pub mod serde_text;
mod text;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Result};

pub use cubic::CubicForm;
pub use text::{parse_poly, parse_poly_file, print_poly_file};

pub type Rational = BigRational;

/// A point of `V` (or of `V*` when used as a covector), one rational per
/// coordinate.
pub type Point = Vec<Rational>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn point(coords: &[i64]) -> Point {
    coords.iter().map(|&c| rat(c)).collect()
}

pub fn unit_vector(n: usize, i: usize) -> Point {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Exponent vector of a monomial.
///
/// Ordering is graded lexicographic: total degree first, then the exponent
/// of `x0`, then `x1`, and so on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u16]>);

impl Monomial {
    pub fn new(exponents: Vec<u16>) -> Self {
        Monomial(exponents.into_boxed_slice())
    }

    pub fn one(n: usize) -> Self {
        Monomial::new(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial::new(e)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// All monomials of total degree `d` in `n` variables, in descending
    /// graded-lex order.
    pub fn all_of_degree(n: usize, d: u16) -> Vec<Monomial> {
        fn rec(n: usize, i: usize, left: u16, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
            if i + 1 == n {
                cur[i] = left;
                out.push(Monomial::new(cur.clone()));
                cur[i] = 0;
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(n, i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        let mut out = Vec::new();
        if n == 0 {
            if d == 0 {
                out.push(Monomial::new(Vec::new()));
            }
            return out;
        }
        rec(n, 0, d, &mut vec![0; n], &mut out);
        out
    }

    /// Value at a point; powers are taken by repeated multiplication.
    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::one();
        for (xi, &e) in x.iter().zip(self.0.iter()) {
            for _ in 0..e {
                acc *= xi;
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Something a polynomial can be evaluated in: the rationals, first-order
/// jets, or polynomials themselves (which gives substitution).
pub trait EvalRing: Clone {
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn add_assign_ref(&mut self, rhs: &Self);
    fn scale(&self, c: &Rational) -> Self;
}

impl EvalRing for Rational {
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
}

impl EvalRing for Poly {
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        self.add_in_place(rhs, &Rational::one());
    }
    fn scale(&self, c: &Rational) -> Self {
        self.scaled(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Poly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut p = Poly::zero(n);
        p.add_term(Monomial::one(n), c);
        p
    }

    pub fn var(n: usize, i: usize) -> Self {
        assert!(i < n, "variable x{i} out of range for {n} variables");
        let mut p = Poly::zero(n);
        p.terms.insert(Monomial::var(n, i), Rational::one());
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, merging
    /// repeated monomials.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Vec<u16>)>,
    {
        let mut p = Poly::zero(n);
        for (c, e) in terms {
            check_dim(n, e.len())?;
            p.add_term(Monomial::new(e), c);
        }
        Ok(p)
    }

    /// The linear form `sum_i c_i x_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Poly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.n(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += scale * other`.
    pub fn add_in_place(&mut self, other: &Poly, scale: &Rational) {
        assert_eq!(self.n, other.n, "variable count mismatch");
        if scale.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * scale);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n);
        }
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] -= 1;
            out.terms.insert(Monomial::new(exps), c * rat(e as i64));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::constant(self.n, Rational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        check_dim(self.n, x.len())?;
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += c * m.eval(x);
        }
        Ok(acc)
    }

    /// Evaluates in any [`EvalRing`]; `one` is the unit of that ring.
    pub fn eval_in<T: EvalRing>(&self, x: &[T], one: &T) -> Result<T> {
        check_dim(self.n, x.len())?;
        let mut max_exp = vec![0u16; self.n];
        for m in self.terms.keys() {
            for (slot, &e) in max_exp.iter_mut().zip(m.exponents()) {
                *slot = (*slot).max(e);
            }
        }
        // powers[i][e - 1] = x_i^e
        let powers: Vec<Vec<T>> = x
            .iter()
            .zip(&max_exp)
            .map(|(xi, &top)| {
                let mut ps: Vec<T> = Vec::with_capacity(top as usize);
                for e in 0..top {
                    let next = if e == 0 {
                        xi.clone()
                    } else {
                        ps[e as usize - 1].mul_ref(xi)
                    };
                    ps.push(next);
                }
                ps
            })
            .collect();
        let mut acc = one.scale(&Rational::zero());
        for (m, c) in &self.terms {
            let mut term: Option<T> = None;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = &powers[i][e as usize - 1];
                term = Some(match term {
                    None => p.scale(c),
                    Some(t) => t.mul_ref(p),
                });
            }
            acc.add_assign_ref(&term.unwrap_or_else(|| one.scale(c)));
        }
        Ok(acc)
    }

    /// Replaces `x_i` by `images[i]` and expands.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        check_dim(self.n, images.len())?;
        let m = match images.first() {
            Some(p) => p.n,
            None => 0,
        };
        for img in images {
            check_dim(m, img.n)?;
        }
        self.eval_in(images, &Poly::constant(m, Rational::one()))
    }

    /// Largest absolute coefficient denominator, used to turn rows integral.
    pub fn coefficient_lcm_denominator(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, c| {
            num_integer::Integer::lcm(&acc, c.denom())
        })
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_in_place(rhs, &Rational::one());
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_in_place(rhs, &-Rational::one());
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.n, rhs.n, "variable count mismatch");
        let mut out = Poly::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scaled(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::print_poly(self))
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn format_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn eval_examples() {
        let p = &(&x(3, 0) * &x(3, 1)) * &x(3, 2);
        assert_eq!(p.eval(&point(&[1, 1, 1])).unwrap(), rat(1));
        assert_eq!(p.eval(&point(&[2, 3, 5])).unwrap(), rat(30));
        assert_eq!(Poly::zero(3).eval(&point(&[4, 5, 6])).unwrap(), rat(0));
        assert!(p.eval(&point(&[1, 1])).is_err());
    }

    #[test]
    fn substitute_binomial() {
        let p = x(2, 0).pow(2);
        let img = [&x(2, 0) + &x(2, 1), x(2, 1)];
        let expect = parse_poly("x0^2 + 2*x0*x1 + x1^2", Some(2)).unwrap();
        assert_eq!(p.substitute(&img).unwrap(), expect);
    }

    #[test]
    fn substitute_identity_and_degree() {
        let p = parse_poly("3*x0^2*x1 - 1/2*x2^3 + x0*x1*x2", None).unwrap();
        let id: Vec<Poly> = (0..3).map(|i| x(3, i)).collect();
        assert_eq!(p.substitute(&id).unwrap(), p);
        let quad: Vec<Poly> = (0..3)
            .map(|i| &x(3, i) * &(&x(3, (i + 1) % 3) + &x(3, i)))
            .collect();
        let s = p.substitute(&quad).unwrap();
        assert_eq!(s.degree(), Some(6));
        assert!(s.is_homogeneous());
    }

    #[test]
    fn substitute_rejects_mismatch() {
        let p = x(3, 0);
        assert!(p.substitute(&[x(2, 0), x(2, 1)]).is_err());
        assert!(p.substitute(&[x(2, 0), x(2, 1), x(3, 0)]).is_err());
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::new(vec![2, 0, 0]);
        let b = Monomial::new(vec![1, 1, 0]);
        let c = Monomial::new(vec![0, 0, 2]);
        let d = Monomial::new(vec![1, 0, 0]);
        assert!(a > b && b > c && c > d);
        assert!(Monomial::new(vec![0, 0, 3]) > a);
        let all = Monomial::all_of_degree(3, 3);
        assert_eq!(all.len(), 10);
        assert!(all.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = &x(2, 0) - &x(2, 0);
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
        assert_eq!(p.degree(), None);
    }
}
