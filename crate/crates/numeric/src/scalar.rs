//! Working-precision reals and complex numbers, and dense elimination over them.

use rug::float::Constant;
use rug::Float;
use tropaz_core::Rational;

pub const DEFAULT_PRECISION: u32 = 256;

pub fn from_rational(prec: u32, q: &Rational) -> Float {
    let numer = Float::with_val(prec, Float::parse(q.numer().to_string()).expect("integer literal"));
    let denom = Float::with_val(prec, Float::parse(q.denom().to_string()).expect("integer literal"));
    numer / &denom
}

pub fn from_f64(prec: u32, x: f64) -> Float {
    Float::with_val(prec, x)
}

/// `e^{beta * q}`.
pub fn exp_scaled(prec: u32, beta: &Float, q: &Rational) -> Float {
    (from_rational(prec, q) * beta).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn zero(prec: u32) -> Self {
        Complex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Complex { re, im }
    }

    /// `e^{2 pi i t / m}`.
    pub fn root_of_unity(prec: u32, t: usize, m: usize) -> Self {
        let angle = Float::with_val(prec, Constant::Pi) * 2u32 * (t as u64) / (m as u64);
        let (im, re) = angle.sin_cos(Float::new(prec));
        Complex { re, im }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn add(&self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }

    pub fn sub(&self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        Complex { re, im }
    }

    pub fn scale(&self, s: &Float) -> Complex {
        let p = self.prec();
        Complex { re: Float::with_val(p, &self.re * s), im: Float::with_val(p, &self.im * s) }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn div(&self, o: &Complex) -> Complex {
        let p = self.prec();
        let d = o.norm_sqr();
        let re = Float::with_val(p, &self.re * &o.re) + Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.im * &o.re) - Float::with_val(p, &self.re * &o.im);
        Complex { re: re / &d, im: im / &d }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

/// Field operations needed by dense elimination.
pub trait Scalar: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn over(&self, o: &Self) -> Self;
    /// Size used for pivot selection.
    fn size(&self) -> Float;
    fn vanishes(&self) -> bool;
}

impl Scalar for Float {
    fn zero_like(&self) -> Self {
        Float::new(self.prec())
    }
    fn one_like(&self) -> Self {
        Float::with_val(self.prec(), 1)
    }
    fn plus(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self + o)
    }
    fn minus(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self - o)
    }
    fn times(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self * o)
    }
    fn over(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self / o)
    }
    fn size(&self) -> Float {
        Float::with_val(self.prec(), self.abs_ref())
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for Complex {
    fn zero_like(&self) -> Self {
        Complex::zero(self.prec())
    }
    fn one_like(&self) -> Self {
        Complex::from_real(Float::with_val(self.prec(), 1))
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn over(&self, o: &Self) -> Self {
        self.div(o)
    }
    fn size(&self) -> Float {
        self.norm_sqr()
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}

/// Gauss-Jordan inverse with partial pivoting; `None` if a pivot vanishes.
pub fn invert<T: Scalar>(m: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let zero = m[0][0].zero_like();
    let one = m[0][0].one_like();
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut inv: Vec<Vec<T>> = (0..n).map(|i| (0..n).map(|j| if i == j { one.clone() } else { zero.clone() }).collect()).collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].size().partial_cmp(&a[y][col].size()).expect("finite"))?;
        if a[pivot][col].vanishes() {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = a[col][j].over(&p);
            inv[col][j] = inv[col][j].over(&p);
        }
        for row in 0..n {
            if row == col || a[row][col].vanishes() {
                continue;
            }
            let f = a[row][col].clone();
            for j in 0..n {
                if !a[col][j].vanishes() {
                    a[row][j] = a[row][j].minus(&f.times(&a[col][j]));
                }
                if !inv[col][j].vanishes() {
                    inv[row][j] = inv[row][j].minus(&f.times(&inv[col][j]));
                }
            }
        }
    }
    Some(inv)
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant<T: Scalar>(m: &[Vec<T>]) -> Option<T> {
    let n = m.len();
    if n == 0 {
        return None;
    }
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut det = m[0][0].one_like();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].size().partial_cmp(&a[y][col].size()).expect("finite"))?;
        if a[pivot][col].vanishes() {
            return Some(m[0][0].zero_like());
        }
        if pivot != col {
            a.swap(col, pivot);
            det = det.zero_like().minus(&det);
        }
        det = det.times(&a[col][col]);
        for row in col + 1..n {
            if a[row][col].vanishes() {
                continue;
            }
            let f = a[row][col].over(&a[col][col]);
            for j in col..n {
                a[row][j] = a[row][j].minus(&f.times(&a[col][j]));
            }
        }
    }
    Some(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tropaz_core::rational::frac;

    fn f(x: f64) -> Float {
        Float::with_val(128, x)
    }

    #[test]
    fn rational_conversion() {
        let x = from_rational(128, &frac(-7, 4));
        assert_eq!(x, -1.75);
    }

    #[test]
    fn roots_of_unity() {
        let i = Complex::root_of_unity(128, 1, 4);
        let minus_one = i.mul(&i);
        assert!((minus_one.re.to_f64() + 1.0).abs() < 1e-30);
        assert!(minus_one.im.to_f64().abs() < 1e-30);
    }

    #[test]
    fn real_inverse_and_determinant() {
        let m = vec![vec![f(0.0), f(2.0)], vec![f(4.0), f(1.0)]];
        let inv = invert(&m).unwrap();
        assert_eq!(inv[0][0], -0.125);
        assert_eq!(inv[0][1], 0.25);
        assert_eq!(inv[1][0], 0.5);
        assert_eq!(inv[1][1], 0.0);
        assert_eq!(determinant(&m).unwrap(), -8.0);
        assert!(invert(&[vec![f(1.0), f(2.0)], vec![f(2.0), f(4.0)]]).is_none());
    }

    #[test]
    fn complex_division() {
        let a = Complex { re: f(1.0), im: f(2.0) };
        let b = Complex { re: f(3.0), im: f(-1.0) };
        let q = a.mul(&b).div(&b);
        assert!((q.re.to_f64() - 1.0).abs() < 1e-30 && (q.im.to_f64() - 2.0).abs() < 1e-30);
    }
}
