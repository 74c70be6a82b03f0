//! Gaussian elimination modulo word-size primes, CRT lifting and rational
//! reconstruction.
//!
//! Used for interpolation systems too large for fraction-free elimination.
//! A full column rank modulo any prime proves full rank over the rationals,
//! and reconstructed candidates are always re-checked exactly by the
//! caller, so the modular route never decides a result on its own.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::Rational;

/// Primes just below 2^31; products of two residues fit in a `u64`.
pub const PRIMES: [u64; 6] = [
    2_147_483_647,
    2_147_483_629,
    2_147_483_587,
    2_147_483_579,
    2_147_483_563,
    2_147_483_549,
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModOutcome {
    Inconsistent { rank: usize },
    Unique(Vec<u32>),
    Underdetermined { rank: usize },
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Image of a rational in `Z/p`, `None` when `p` divides the denominator.
pub fn rational_mod(r: &Rational, p: u64) -> Option<u32> {
    let pb = BigInt::from(p);
    let reduce = |x: &BigInt| -> u64 { x.mod_floor(&pb).to_u64().expect("residue fits") };
    let d = reduce(r.denom());
    if d == 0 {
        return None;
    }
    Some((reduce(r.numer()) * inv_mod(d, p) % p) as u32)
}

fn eliminate<const P: u64>(mut rows: Vec<Vec<u32>>, cols: usize) -> ModOutcome {
    let m = rows.len();
    let width = cols + 1;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(p, r);
        let inv = inv_mod(rows[r][c] as u64, P);
        for v in rows[r][c..].iter_mut() {
            *v = (*v as u64 * inv % P) as u32;
        }
        let (head, tail) = rows.split_at_mut(r + 1);
        let piv = &head[r][c..];
        for row in tail.iter_mut() {
            let lead = row[c] as u64;
            if lead == 0 {
                continue;
            }
            let neg = P - lead;
            for (a, &b) in row[c..].iter_mut().zip(piv) {
                *a = ((*a as u64 + neg * b as u64) % P) as u32;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.last() == Some(&cols) {
        return ModOutcome::Inconsistent {
            rank: pivots.len() - 1,
        };
    }
    let rank = pivots.len();
    if rank < cols {
        return ModOutcome::Underdetermined { rank };
    }
    let mut x = vec![0u32; cols];
    for i in (0..cols).rev() {
        let row = &rows[i];
        let mut acc = row[cols] as u64;
        for j in i + 1..cols {
            acc = (acc + (P - row[j] as u64) * x[j] as u64) % P;
        }
        x[i] = acc as u32;
    }
    ModOutcome::Unique(x)
}

/// Solves the augmented system `rows` (each of length `cols + 1`) modulo
/// `PRIMES[prime_index]`.
pub fn solve_mod(rows: Vec<Vec<u32>>, cols: usize, prime_index: usize) -> ModOutcome {
    debug_assert!(rows.iter().all(|r| r.len() == cols + 1));
    match prime_index {
        0 => eliminate::<{ PRIMES[0] }>(rows, cols),
        1 => eliminate::<{ PRIMES[1] }>(rows, cols),
        2 => eliminate::<{ PRIMES[2] }>(rows, cols),
        3 => eliminate::<{ PRIMES[3] }>(rows, cols),
        4 => eliminate::<{ PRIMES[4] }>(rows, cols),
        5 => eliminate::<{ PRIMES[5] }>(rows, cols),
        _ => panic!("prime index {prime_index} out of range"),
    }
}

/// Smallest-height rational congruent to `a` modulo `m`, if one exists with
/// numerator and denominator below `sqrt(m / 2)`.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    if t1.sign() == Sign::Minus {
        r1 = -r1;
        t1 = -t1;
    }
    Some(Rational::new(r1, t1))
}

/// Residues of one unknown vector accumulated across primes.
#[derive(Clone, Debug, Default)]
pub struct CrtAccumulator {
    modulus: BigInt,
    values: Vec<BigInt>,
    primes: usize,
}

impl CrtAccumulator {
    pub fn new() -> Self {
        CrtAccumulator {
            modulus: BigInt::one(),
            values: Vec::new(),
            primes: 0,
        }
    }

    pub fn primes_used(&self) -> usize {
        self.primes
    }

    pub fn push(&mut self, residues: &[u32], p: u64) {
        let pb = BigInt::from(p);
        self.primes += 1;
        if self.values.is_empty() {
            self.values = residues.iter().map(|&r| BigInt::from(r)).collect();
            self.modulus = pb;
            return;
        }
        let m_mod_p = (&self.modulus % &pb).to_u64().expect("fits");
        let inv = BigInt::from(inv_mod(m_mod_p, p));
        for (v, &r) in self.values.iter_mut().zip(residues) {
            let diff = (BigInt::from(r) - &*v).mod_floor(&pb);
            let k = (diff * &inv).mod_floor(&pb);
            *v += &self.modulus * k;
        }
        self.modulus *= pb;
    }

    pub fn reconstruct(&self) -> Option<Vec<Rational>> {
        self.values
            .iter()
            .map(|v| rational_reconstruct(v, &self.modulus))
            .collect()
    }
}
