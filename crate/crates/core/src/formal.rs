//! First-order jets `a + b t` with `t^2 = 0`: exact directional derivatives
//! of rational expressions without finite differences.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{EvalRing, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet {
    pub value: Rational,
    pub slope: Rational,
}

impl Jet {
    pub fn constant(value: Rational) -> Self {
        Jet {
            value,
            slope: Rational::zero(),
        }
    }

    pub fn new(value: Rational, slope: Rational) -> Self {
        Jet { value, slope }
    }

    pub fn one() -> Self {
        Jet::constant(Rational::one())
    }

    /// The point `base + t * direction` as a vector of jets.
    pub fn line(base: &[Rational], direction: &[Rational]) -> Vec<Jet> {
        base.iter()
            .zip(direction)
            .map(|(a, b)| Jet::new(a.clone(), b.clone()))
            .collect()
    }

    pub fn div(&self, rhs: &Jet) -> Result<Jet> {
        if rhs.value.is_zero() {
            return Err(Error::Precondition(
                "division by a jet with zero constant term".into(),
            ));
        }
        let c = &rhs.value;
        Ok(Jet {
            value: &self.value / c,
            slope: (&self.slope * c - &self.value * &rhs.slope) / (c * c),
        })
    }
}

impl EvalRing for Jet {
    fn mul_ref(&self, rhs: &Self) -> Self {
        Jet {
            value: &self.value * &rhs.value,
            slope: &self.value * &rhs.slope + &self.slope * &rhs.value,
        }
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        self.value += &rhs.value;
        self.slope += &rhs.slope;
    }

    fn scale(&self, c: &Rational) -> Self {
        Jet {
            value: &self.value * c,
            slope: &self.slope * c,
        }
    }
}

impl Add<&Jet> for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        Jet::new(&self.value + &rhs.value, &self.slope + &rhs.slope)
    }
}

impl Sub<&Jet> for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        Jet::new(&self.value - &rhs.value, &self.slope - &rhs.slope)
    }
}

impl Mul<&Jet> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.mul_ref(rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-&self.value, -&self.slope)
    }
}
