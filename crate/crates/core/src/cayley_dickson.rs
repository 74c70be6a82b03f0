//! Cayley-Dickson doubling over the rationals (levels 0..=3 give the reals,
//! complexes, quaternions and octonions) and 3x3 Hermitian matrices over
//! them.
//!
//! Elements are generic over the coordinate type so the same code expands
//! the Hermitian cubic norm symbolically, with polynomial coordinates.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Poly, Rational};

/// Coordinate ring for Cayley-Dickson elements.
pub trait CdScalar: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn is_zero_value(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl CdScalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl CdScalar for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero(self.n())
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CdElem<T = Rational> {
    level: u32,
    coords: Vec<T>,
}

impl<T: CdScalar> CdElem<T> {
    pub fn new(level: u32, coords: Vec<T>) -> Result<Self> {
        if level > 3 {
            return Err(Error::UnsupportedLevel(level));
        }
        let dim = 1usize << level;
        if coords.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: coords.len(),
            });
        }
        Ok(CdElem { level, coords })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn conj(&self) -> Self {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| if i == 0 { c.clone() } else { c.neg() })
            .collect();
        CdElem {
            level: self.level,
            coords,
        }
    }

    pub fn re(&self) -> T {
        self.coords[0].clone()
    }

    /// `a * conj(a)`, the sum of squared coordinates.
    pub fn norm(&self) -> T {
        let mut acc = self.coords[0].zero_like();
        for c in &self.coords {
            acc = acc.add(&c.mul(c));
        }
        acc
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_level(rhs)?;
        Ok(self.zip(rhs, T::add))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.same_level(rhs)?;
        Ok(self.zip(rhs, T::sub))
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.same_level(rhs)?;
        Ok(CdElem {
            level: self.level,
            coords: mul_coords(&self.coords, &rhs.coords),
        })
    }

    fn same_level(&self, rhs: &Self) -> Result<()> {
        if self.level == rhs.level {
            Ok(())
        } else {
            Err(Error::LevelMismatch {
                left: self.level,
                right: rhs.level,
            })
        }
    }

    fn zip(&self, rhs: &Self, op: fn(&T, &T) -> T) -> Self {
        CdElem {
            level: self.level,
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| op(a, b)).collect(),
        }
    }
}

fn conj_coords<T: CdScalar>(x: &[T]) -> Vec<T> {
    x.iter()
        .enumerate()
        .map(|(i, c)| if i == 0 { c.clone() } else { c.neg() })
        .collect()
}

fn add_coords<T: CdScalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn sub_coords<T: CdScalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

/// `(p, q)(r, s) = (p r - conj(s) q, s p + q conj(r))`.
fn mul_coords<T: CdScalar>(x: &[T], y: &[T]) -> Vec<T> {
    if x.len() == 1 {
        return vec![x[0].mul(&y[0])];
    }
    let h = x.len() / 2;
    let (p, q) = x.split_at(h);
    let (r, s) = y.split_at(h);
    let first = sub_coords(&mul_coords(p, r), &mul_coords(&conj_coords(s), q));
    let second = add_coords(&mul_coords(s, p), &mul_coords(q, &conj_coords(r)));
    let mut out = first;
    out.extend(second);
    out
}

/// The Hermitian matrix `[[α, c, conj b], [conj c, β, a], [b, conj a, γ]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermMatrix<T = Rational> {
    pub diag: [T; 3],
    pub off: [CdElem<T>; 3],
}

impl<T: CdScalar> HermMatrix<T> {
    pub fn new(diag: [T; 3], off: [CdElem<T>; 3]) -> Result<Self> {
        let l = off[0].level;
        for o in &off[1..] {
            if o.level != l {
                return Err(Error::LevelMismatch {
                    left: l,
                    right: o.level,
                });
            }
        }
        Ok(HermMatrix { diag, off })
    }

    pub fn level(&self) -> u32 {
        self.off[0].level
    }

    /// `αβγ - α n(a) - β n(b) - γ n(c) + 2 re((a b) c)`.
    pub fn norm(&self) -> T {
        let [al, be, ga] = &self.diag;
        let [a, b, c] = &self.off;
        let ab = a.mul(b).expect("levels checked at construction");
        let abc = ab.mul(c).expect("levels checked at construction");
        let cross = abc.re();
        al.mul(be)
            .mul(ga)
            .sub(&al.mul(&a.norm()))
            .sub(&be.mul(&b.norm()))
            .sub(&ga.mul(&c.norm()))
            .add(&cross)
            .add(&cross)
    }

    /// Coordinates in catalog order: α, β, γ, then a, b, c.
    pub fn to_coords(&self) -> Vec<T> {
        let mut v: Vec<T> = self.diag.to_vec();
        for o in &self.off {
            v.extend(o.coords.iter().cloned());
        }
        v
    }

    pub fn from_coords(level: u32, coords: &[T]) -> Result<Self> {
        if level > 3 {
            return Err(Error::UnsupportedLevel(level));
        }
        let d = 1usize << level;
        if coords.len() != 3 + 3 * d {
            return Err(Error::DimensionMismatch {
                expected: 3 + 3 * d,
                found: coords.len(),
            });
        }
        let off = |k: usize| CdElem::new(level, coords[3 + k * d..3 + (k + 1) * d].to_vec());
        HermMatrix::new(
            [coords[0].clone(), coords[1].clone(), coords[2].clone()],
            [off(0)?, off(1)?, off(2)?],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, Point};
    use crate::sampling::{random_point, rng};

    fn basis(level: u32, i: usize) -> CdElem {
        let mut v = vec![rat(0); 1 << level];
        v[i] = rat(1);
        CdElem::new(level, v).unwrap()
    }

    fn elem(level: u32, p: Point) -> CdElem {
        CdElem::new(level, p).unwrap()
    }

    #[test]
    fn complex_unit_squares_to_minus_one() {
        let i = basis(1, 1);
        assert_eq!(i.mul(&i).unwrap(), elem(1, vec![rat(-1), rat(0)]));
    }

    #[test]
    fn quaternions_do_not_commute() {
        let e1 = basis(2, 1);
        let e2 = basis(2, 2);
        let e3 = basis(2, 3);
        assert_eq!(e1.mul(&e2).unwrap(), e3);
        assert_eq!(e2.mul(&e1).unwrap(), elem(2, vec![rat(0), rat(0), rat(0), rat(-1)]));
    }

    #[test]
    fn octonions_do_not_associate() {
        let (e1, e2, e4) = (basis(3, 1), basis(3, 2), basis(3, 4));
        let left = e1.mul(&e2).unwrap().mul(&e4).unwrap();
        let right = e1.mul(&e2.mul(&e4).unwrap()).unwrap();
        assert_ne!(left, right);
        assert_eq!(left, right.scale_neg());
    }

    impl CdElem {
        fn scale_neg(&self) -> Self {
            CdElem::new(self.level, self.coords.iter().map(|c| -c).collect()).unwrap()
        }
    }

    #[test]
    fn norm_conj_re() {
        let a = elem(1, vec![rat(3), rat(4)]);
        assert_eq!(a.norm(), rat(25));
        assert_eq!(a.conj().conj(), a);
        assert_eq!(a.re(), rat(3));
        let prod = a.mul(&a.conj()).unwrap();
        assert_eq!(prod, elem(1, vec![rat(25), rat(0)]));
    }

    #[test]
    fn level_errors() {
        assert!(matches!(
            basis(1, 0).mul(&basis(2, 0)),
            Err(Error::LevelMismatch { left: 1, right: 2 })
        ));
        assert!(CdElem::new(4, vec![rat(0); 16]).is_err());
        assert!(CdElem::new(2, vec![rat(0); 3]).is_err());
    }

    #[test]
    fn composition_and_alternative_laws() {
        let mut r = rng(5);
        for level in 0..=3u32 {
            let d = 1 << level;
            for _ in 0..50 {
                let a = elem(level, random_point(&mut r, d));
                let b = elem(level, random_point(&mut r, d));
                let c = elem(level, random_point(&mut r, d));
                let ab = a.mul(&b).unwrap();
                assert_eq!(ab.norm(), a.norm() * b.norm());
                let lhs = ab.mul(&c).unwrap();
                let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
                if level <= 2 {
                    assert_eq!(lhs, rhs);
                } else {
                    assert_eq!(lhs.re(), rhs.re());
                    let aa = a.mul(&a).unwrap();
                    assert_eq!(aa.mul(&b).unwrap(), a.mul(&ab).unwrap());
                    let bb = b.mul(&b).unwrap();
                    assert_eq!(ab.mul(&b).unwrap(), a.mul(&bb).unwrap());
                }
            }
        }
    }

    #[test]
    fn herm_coords_round_trip() {
        let coords: Vec<_> = (0..15).map(rat).collect();
        let h = HermMatrix::from_coords(2, &coords).unwrap();
        assert_eq!(h.to_coords(), coords);
        assert!(HermMatrix::from_coords(2, &coords[..14]).is_err());
    }
}
