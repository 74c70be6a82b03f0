//! Seeded integer sampling. Every random choice in the crate flows from a
//! `ChaCha8Rng` seeded here, so equal seeds give identical results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::{rat, CubicForm, Point};

/// Coordinates are drawn from `[-SAMPLE_BOUND, SAMPLE_BOUND]`.
pub const SAMPLE_BOUND: i64 = 7;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for a named sub-task.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17)
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Point {
    (0..n)
        .map(|_| rat(rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND)))
        .collect()
}

pub fn random_nonzero_point(rng: &mut ChaCha8Rng, n: usize) -> Point {
    loop {
        let p = random_point(rng, n);
        if !crate::poly::is_zero_vector(&p) {
            return p;
        }
    }
}

/// Integer points with `f(x) != 0`, by rejection.
pub fn sample_off_hypersurface(f: &CubicForm, count: usize, seed: u64) -> Result<Vec<Point>> {
    let mut rng = rng(seed);
    let budget = 1000 + 100 * count;
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        if attempts == budget {
            return Err(Error::SamplingExhausted { attempts });
        }
        attempts += 1;
        let x = random_point(&mut rng, f.n());
        if !num_traits::Zero::is_zero(&f.eval(&x)?) {
            out.push(x);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use num_traits::Zero;

    fn triple() -> CubicForm {
        CubicForm::new(parse_poly("x0*x1*x2", None).unwrap()).unwrap()
    }

    #[test]
    fn samples_avoid_the_hypersurface() {
        let pts = sample_off_hypersurface(&triple(), 50, 7).unwrap();
        assert_eq!(pts.len(), 50);
        assert!(pts.iter().flatten().all(|c| !c.is_zero()));
        assert!(pts
            .iter()
            .flatten()
            .all(|c| c.numer().magnitude() <= &num_bigint::BigUint::from(7u32)));
    }

    #[test]
    fn empty_and_reproducible() {
        assert!(sample_off_hypersurface(&triple(), 0, 1).unwrap().is_empty());
        assert_eq!(
            sample_off_hypersurface(&triple(), 20, 99).unwrap(),
            sample_off_hypersurface(&triple(), 20, 99).unwrap()
        );
        assert_ne!(
            sample_off_hypersurface(&triple(), 20, 99).unwrap(),
            sample_off_hypersurface(&triple(), 20, 100).unwrap()
        );
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(42, 1), derive_seed(42, 2));
        assert_ne!(derive_seed(42, 1), 42);
    }
}
