//! Rational helpers shared by every exact stage.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// A point in the plane with exact coordinates.
pub type Point = (Rational, Rational);

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn point(x: i64, y: i64) -> Point {
    (int(x), int(y))
}

/// Parses `"p/q"`, `"p"` or a JSON-style integer into a rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    let parse_int = |s: &str| -> Option<BigInt> {
        let s = s.trim();
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse::<BigInt>().ok()
    };
    match text.split_once('/') {
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                return None;
            }
            Some(Rational::new(num, den))
        }
        None => parse_int(text).map(Rational::from_integer),
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let num = q.numer().to_f64().unwrap_or(f64::NAN);
        let den = q.denom().to_f64().unwrap_or(f64::NAN);
        num / den
    })
}

pub fn sign(q: &Rational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

pub fn dot(a: &Point, b: &Point) -> Rational {
    &a.0 * &b.0 + &a.1 * &b.1
}

pub fn sub(a: &Point, b: &Point) -> Point {
    (&a.0 - &b.0, &a.1 - &b.1)
}

pub fn cross(a: &Point, b: &Point) -> Rational {
    &a.0 * &b.1 - &a.1 * &b.0
}

pub fn scale(a: &Point, s: &Rational) -> Point {
    (&a.0 * s, &a.1 * s)
}

pub fn from_ints(v: (i64, i64)) -> Point {
    (int(v.0), int(v.1))
}

/// Writes a nonzero rational vector as `length * eta` with `eta` primitive.
///
/// Returns `None` for the zero vector.
pub fn primitive(v: &Point) -> Option<((i64, i64), Rational)> {
    if v.0.is_zero() && v.1.is_zero() {
        return None;
    }
    let den = v.0.denom().lcm(v.1.denom());
    let a = (&v.0 * Rational::from_integer(den.clone())).to_integer();
    let b = (&v.1 * Rational::from_integer(den.clone())).to_integer();
    let g = a.gcd(&b);
    let eta = ((&a / &g).to_i64()?, (&b / &g).to_i64()?);
    Some((eta, Rational::new(g, den)))
}

/// Primitive direction of an integer vector together with its lattice length.
pub fn primitive_int(v: (i64, i64)) -> ((i64, i64), i64) {
    let g = v.0.gcd(&v.1);
    if g == 0 {
        return ((0, 0), 0);
    }
    ((v.0 / g, v.1 / g), g)
}

/// Orders integer directions counterclockwise starting from `start`.
///
/// Directions parallel to `start` come first; the angle is measured in `[0, 2π)`.
pub fn ccw_cmp(start: (i64, i64), a: (i64, i64), b: (i64, i64)) -> Ordering {
    let half = |d: (i64, i64)| -> u8 {
        let c = start.0 * d.1 - start.1 * d.0;
        let dt = start.0 * d.0 + start.1 * d.1;
        if c > 0 || (c == 0 && dt > 0) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let c = a.0 * b.1 - a.1 * b.0;
        0.cmp(&c)
    })
}

pub fn min_rational(values: impl IntoIterator<Item = Rational>) -> Option<Rational> {
    values.into_iter().min()
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}
