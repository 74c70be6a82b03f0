//! Built-in cubic forms: the four Hermitian cubic norms and a handful of
//! boundary cases, each with the verdicts it is expected to produce.

use serde::Serialize;

use crate::cayley_dickson::{CdElem, HermMatrix};
use crate::error::{Error, Result};
use crate::poly::{parse_poly, point, unit_vector, CubicForm, Point, Poly, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub is_ekp: bool,
    pub cone: bool,
    /// Whether the polar map is birational, i.e. a rational transform exists.
    pub homaloidal: bool,
    /// Projective dimension of the singular locus, when known.
    pub singular_dim: Option<u32>,
    /// Whether the Jordan algebra at the unit is simple, when known.
    pub simple: Option<bool>,
    pub notes: String,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub form: CubicForm,
    pub n: usize,
    pub expected: Expected,
    /// Base point `I` with `f(I) = 1` used for the Jordan structure.
    pub unit: Option<Point>,
    /// Known rational points of the singular locus.
    pub singular_seeds: Vec<Point>,
}

const HERM_NAMES: [&str; 4] = ["herm3_R", "herm3_C", "herm3_H", "herm3_O"];

/// The cubic norm on 3x3 Hermitian matrices over the level-`k`
/// Cayley-Dickson algebra, in `3 + 3 * 2^k` variables.
pub fn herm3_norm(level: u32) -> Result<CatalogEntry> {
    if level > 3 {
        return Err(Error::UnsupportedLevel(level));
    }
    let d = 1usize << level;
    let n = 3 + 3 * d;
    let x = |i: usize| Poly::var(n, i);
    let off = |k: usize| CdElem::new(level, (0..d).map(|j| x(3 + k * d + j)).collect());
    let h = HermMatrix::new([x(0), x(1), x(2)], [off(0)?, off(1)?, off(2)?])?;
    let form = CubicForm::new(h.norm())?;
    let mut unit = vec![Rational::from_integer(0.into()); n];
    for u in unit.iter_mut().take(3) {
        *u = Rational::from_integer(1.into());
    }
    Ok(CatalogEntry {
        name: HERM_NAMES[level as usize],
        form,
        n,
        expected: Expected {
            is_ekp: true,
            cone: false,
            homaloidal: true,
            singular_dim: Some(2 * d as u32),
            simple: Some(true),
            notes: "cubic norm of a simple Jordan algebra; singular locus is a Severi variety"
                .into(),
        },
        unit: Some(unit),
        singular_seeds: vec![unit_vector(n, 0)],
    })
}

fn simple(
    name: &'static str,
    text: &str,
    n: usize,
    expected: Expected,
    unit: Option<Point>,
    singular_seeds: Vec<Point>,
) -> CatalogEntry {
    let form = CubicForm::new(parse_poly(text, Some(n)).expect("catalog text parses"))
        .expect("catalog entries are cubic forms");
    CatalogEntry {
        name,
        form,
        n,
        expected,
        unit,
        singular_seeds,
    }
}

pub fn builtin_catalog() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = (0..=3)
        .map(|k| herm3_norm(k).expect("levels 0..=3 are supported"))
        .collect();
    out.push(simple(
        "triple_product",
        "x0*x1*x2",
        3,
        Expected {
            is_ekp: true,
            cone: false,
            homaloidal: true,
            singular_dim: Some(0),
            simple: Some(false),
            notes: "reducible; the Jordan algebra is the direct sum of three copies of the rationals"
                .into(),
        },
        Some(point(&[1, 1, 1])),
        (0..3).map(|i| unit_vector(3, i)).collect(),
    ));
    out.push(simple(
        "linear_times_quadric",
        "x0*x1^2 + x0*x2^2 + x0*x3^2",
        4,
        Expected {
            is_ekp: true,
            cone: false,
            homaloidal: true,
            singular_dim: None,
            simple: Some(false),
            notes: "reducible over C; the conic {x0 = 0, q = 0} of the singular locus has no \
                    rational points, only the isolated point e0 is sampled"
                .into(),
        },
        Some(point(&[1, 1, 0, 0])),
        vec![unit_vector(4, 0)],
    ));
    out.push(simple(
        "fermat",
        "x0^3 + x1^3 + x2^3",
        3,
        Expected {
            is_ekp: false,
            cone: false,
            homaloidal: false,
            singular_dim: None,
            simple: None,
            notes: "smooth plane cubic; the polar map has degree 4".into(),
        },
        None,
        Vec::new(),
    ));
    out.push(simple(
        "cone",
        "x0^3",
        3,
        Expected {
            is_ekp: false,
            cone: true,
            homaloidal: false,
            singular_dim: None,
            simple: None,
            notes: "a cone is never homaloidal".into(),
        },
        None,
        Vec::new(),
    ));
    out.push(simple(
        "conic_tangent",
        "x0^2*x2 - x0*x1^2",
        3,
        Expected {
            is_ekp: false,
            cone: false,
            homaloidal: true,
            singular_dim: None,
            simple: None,
            notes: "conic plus a tangent line: homaloidal with a rational, non-polynomial transform"
                .into(),
        },
        None,
        Vec::new(),
    ));
    out
}

pub fn catalog_entry(name: &str) -> Result<CatalogEntry> {
    builtin_catalog()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::Unknown {
            kind: "catalog entry",
            name: name.to_string(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    #[test]
    fn catalog_shape() {
        let cat = builtin_catalog();
        assert_eq!(cat.len(), 9);
        let mut names: Vec<_> = cat.iter().map(|e| e.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), 9);
        for (k, e) in cat.iter().take(4).enumerate() {
            assert_eq!(e.n, 3 + 3 * (1 << k));
            assert_eq!(e.form.n(), e.n);
            assert_eq!(e.expected.singular_dim, Some(2 << k));
        }
        assert!(catalog_entry("triple_product").unwrap().expected.is_ekp);
        assert!(!catalog_entry("fermat").unwrap().expected.is_ekp);
        assert!(catalog_entry("nope").is_err());
    }

    #[test]
    fn herm_norm_at_identity_is_one() {
        for k in 0..=3 {
            let e = herm3_norm(k).unwrap();
            assert_eq!(e.form.eval(e.unit.as_ref().unwrap()).unwrap(), rat(1));
        }
        assert!(herm3_norm(4).is_err());
    }

    #[test]
    fn rank_one_complex_hermitian_has_zero_norm() {
        // v = (1, 2 + i, -1 + 3i); X = v v^dagger
        let v = [(1i64, 0i64), (2, 1), (-1, 3)];
        let entry = |i: usize, j: usize| {
            let (a, b) = v[i];
            let (c, d) = v[j];
            // v_i * conj(v_j)
            (a * c + b * d, b * c - a * d)
        };
        let mut coords = vec![
            rat(entry(0, 0).0),
            rat(entry(1, 1).0),
            rat(entry(2, 2).0),
        ];
        // a = X[1][2], b = X[2][0], c = X[0][1]
        for (i, j) in [(1, 2), (2, 0), (0, 1)] {
            let (re, im) = entry(i, j);
            coords.push(rat(re));
            coords.push(rat(im));
        }
        let f = herm3_norm(1).unwrap().form;
        assert_eq!(f.eval(&coords).unwrap(), rat(0));
        let mut perturbed = coords.clone();
        perturbed[0] += ratio(1, 2);
        perturbed[1] += ratio(1, 2);
        assert_ne!(f.eval(&perturbed).unwrap(), rat(0));
    }
}
