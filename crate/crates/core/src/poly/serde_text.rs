//! Serializers that render exact values in their canonical text form.

use serde::ser::SerializeSeq;
use serde::Serializer;

use super::{format_rational, CubicForm, Poly, Rational};

pub fn rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub fn point<S: Serializer>(p: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(p.len()))?;
    for c in p {
        seq.serialize_element(&format_rational(c))?;
    }
    seq.end()
}

pub fn opt_point<S: Serializer>(p: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
    match p {
        Some(v) => point(v, s),
        None => s.serialize_none(),
    }
}

pub fn points<S: Serializer>(ps: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(ps.len()))?;
    for p in ps {
        let v: Vec<String> = p.iter().map(format_rational).collect();
        seq.serialize_element(&v)?;
    }
    seq.end()
}

pub fn poly<S: Serializer>(p: &Poly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

pub fn form<S: Serializer>(f: &CubicForm, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&f.poly().to_string())
}
