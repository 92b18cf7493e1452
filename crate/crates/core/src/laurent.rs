//! Two-variable Laurent polynomials in `z` and `w` with rational coefficients.

use crate::rational::{format_rational, Rational};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Finitely supported map `(a, b) -> c` standing for `sum c z^a w^b`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<(i64, i64), Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0, 0)
    }

    pub fn monomial(coefficient: Rational, a: i64, b: i64) -> Self {
        let mut p = LaurentPoly::default();
        p.add_term(coefficient, a, b);
        p
    }

    pub fn add_term(&mut self, coefficient: Rational, a: i64, b: i64) {
        if coefficient.is_zero() {
            return;
        }
        let slot = self.terms.entry((a, b)).or_insert_with(Rational::zero);
        *slot += coefficient;
        if slot.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, a: i64, b: i64) -> Rational {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single term `(coefficient, (a, b))` if the polynomial is a monomial.
    pub fn as_monomial(&self) -> Option<(Rational, (i64, i64))> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&exp, c) = self.terms.iter().next()?;
        Some((c.clone(), exp))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = LaurentPoly::default();
        for (&(a, b), c) in &self.terms {
            out.add_term(c * s, a, b);
        }
        out
    }

    /// Multiplies by `z^a w^b`.
    pub fn shift(&self, a: i64, b: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(&(x, y), c)| ((x + a, y + b), c.clone())).collect() }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(c.clone(), a, b);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::default();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term(c1 * c2, a1 + a2, b1 + b2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&(a, b), c) in &self.terms {
            let negative = c < &Rational::zero();
            let magnitude = if negative { -c.clone() } else { c.clone() };
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            let mut factors = Vec::new();
            if !magnitude.is_one() || (a == 0 && b == 0) {
                factors.push(format_rational(&magnitude));
            }
            match a {
                0 => {}
                1 => factors.push("z".into()),
                _ => factors.push(format!("z^{a}")),
            }
            match b {
                0 => {}
                1 => factors.push("w".into()),
                _ => factors.push(format!("w^{b}")),
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn poly(terms: &[(i64, i64, i64)]) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for &(c, a, b) in terms {
            p.add_term(int(c), a, b);
        }
        p
    }

    #[test]
    fn cancellation_is_canonical() {
        let p = poly(&[(1, 1, 0), (-1, 1, 0)]);
        assert!(p.is_zero());
        assert_eq!(p, LaurentPoly::zero());
    }

    #[test]
    fn display() {
        assert_eq!(poly(&[(1, -1, 0)]).to_string(), "z^-1");
        assert_eq!(poly(&[(-1, 0, 1)]).to_string(), "-w");
        assert_eq!(poly(&[(1, 0, 0), (1, -1, 0), (1, -1, 1), (-1, 0, 1)]).to_string(), "z^-1 + z^-1*w + 1 - w");
        assert_eq!(LaurentPoly::monomial(frac(3, 2), 2, 0).to_string(), "3/2*z^2");
    }

    #[test]
    fn inverse_of_monomial() {
        let p = poly(&[(-1, 0, 1)]);
        let q = LaurentPoly::monomial(int(-1), 0, -1);
        assert_eq!(&p * &q, LaurentPoly::one());
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-4i64..=4, -2i64..=2, -2i64..=2), 0..5).prop_map(|t| poly(&t))
    }

    proptest! {
        #[test]
        fn ring_axioms(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(&p + &q, &q + &p);
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert!((&p - &p).is_zero());
        }
    }
}
