// SPDX-License-Identifier: Apache-2.0

//! Exact arithmetic in Q(zeta_m), used for character values and character
//! sums of integer data.

use std::sync::{Mutex, OnceLock};
use std::collections::HashMap;

use num_integer::Integer;
use rug::{Complex, Float};

/// An element sum_j c_j zeta_m^j / den, stored unreduced modulo x^m - 1.
#[derive(Clone, Debug)]
pub struct Cyclo {
    m: usize,
    c: Vec<i64>,
    den: i64,
}

fn poly_divexact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // both listed from the constant term upward; den monic
    let mut r = num.to_vec();
    let dl = den.len();
    let mut q = vec![0; num.len() + 1 - dl];
    for i in (0..q.len()).rev() {
        let coef = r[i + dl - 1];
        q[i] = coef;
        for (j, &d) in den.iter().enumerate() {
            r[i + j] -= coef * d;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Coefficients of the m-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_poly(m: usize) -> Vec<i64> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    let mut p = vec![0i64; m + 1];
    p[0] = -1;
    p[m] = 1;
    for d in 1..m {
        if m % d == 0 {
            p = poly_divexact(&p, &cyclotomic_poly(d));
        }
    }
    cache.lock().unwrap().insert(m, p.clone());
    p
}

impl Cyclo {
    pub fn zero(m: usize) -> Self {
        Self { m, c: vec![0; m], den: 1 }
    }

    pub fn from_int(m: usize, n: i64) -> Self {
        let mut z = Self::zero(m);
        z.c[0] = n;
        z
    }

    /// zeta_m^k.
    pub fn root(m: usize, k: i64) -> Self {
        let mut z = Self::zero(m);
        z.c[k.rem_euclid(m as i64) as usize] = 1;
        z
    }

    pub fn modulus(&self) -> usize {
        self.m
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    /// Raw coefficients of zeta^j (over the denominator), unreduced.
    pub fn coeffs(&self) -> &[i64] {
        &self.c
    }

    fn rescale(&self, den: i64) -> Vec<i64> {
        let f = den / self.den;
        self.c.iter().map(|x| x * f).collect()
    }

    fn normalize(mut self) -> Self {
        let g = self.c.iter().fold(self.den, |g, &x| g.gcd(&x));
        if g > 1 {
            self.den /= g;
            self.c.iter_mut().for_each(|x| *x /= g);
        }
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.m, o.m);
        let den = self.den.lcm(&o.den);
        let (a, b) = (self.rescale(den), o.rescale(den));
        Self { m: self.m, c: a.iter().zip(&b).map(|(x, y)| x + y).collect(), den }.normalize()
    }

    pub fn neg(&self) -> Self {
        Self { m: self.m, c: self.c.iter().map(|x| -x).collect(), den: self.den }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.m, o.m);
        let m = self.m;
        let mut c = vec![0i64; m];
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in o.c.iter().enumerate() {
                c[(i + j) % m] += x * y;
            }
        }
        Self { m, c, den: self.den * o.den }.normalize()
    }

    pub fn scale(&self, n: i64) -> Self {
        Self { m: self.m, c: self.c.iter().map(|x| x * n).collect(), den: self.den }.normalize()
    }

    pub fn div_int(&self, n: i64) -> Self {
        assert!(n != 0);
        let s = if n < 0 { self.neg() } else { self.clone() };
        Self { m: s.m, c: s.c, den: s.den * n.abs() }.normalize()
    }

    /// The same element viewed in Q(zeta_m') for a multiple m' of m.
    pub fn lift(&self, m: usize) -> Self {
        assert_eq!(m % self.m, 0, "modulus {m} is not a multiple of {}", self.m);
        let f = m / self.m;
        let mut c = vec![0; m];
        for (j, &x) in self.c.iter().enumerate() {
            c[j * f] = x;
        }
        Self { m, c, den: self.den }
    }

    /// Complex conjugate: zeta^j -> zeta^{-j}.
    pub fn conj(&self) -> Self {
        let m = self.m;
        let mut c = vec![0; m];
        for (j, &x) in self.c.iter().enumerate() {
            c[(m - j) % m] = x;
        }
        Self { m, c, den: self.den }
    }

    /// Canonical numerator: remainder modulo the cyclotomic polynomial.
    pub fn reduced(&self) -> Vec<i64> {
        let phi = cyclotomic_poly(self.m);
        let deg = phi.len() - 1;
        let mut r = self.c.clone();
        for i in (deg..r.len()).rev() {
            let coef = r[i];
            if coef != 0 {
                for (j, &p) in phi.iter().enumerate() {
                    r[i - deg + j] -= coef * p;
                }
            }
        }
        r.truncate(deg);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|&x| x == 0)
    }

    pub fn eq_exact(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    /// Rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<(i64, i64)> {
        let r = self.reduced();
        if r.iter().skip(1).all(|&x| x == 0) {
            let n = r.first().copied().unwrap_or(0);
            let g = n.gcd(&self.den).max(1);
            Some((n / g, self.den / g))
        } else {
            None
        }
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        let mut acc = Complex::new(prec);
        for (j, &x) in self.c.iter().enumerate() {
            if x != 0 {
                acc += root_of_unity(prec, j as i64, self.m as i64) * x;
            }
        }
        acc / self.den
    }
}

/// exp(2 pi i k / m) at the given precision.
pub fn root_of_unity(prec: u32, k: i64, m: i64) -> Complex {
    let k = k.rem_euclid(m);
    // exact values at the real and imaginary axes keep zero tests clean
    if 4 * k % m == 0 {
        let q = 4 * k / m;
        return match q {
            0 => Complex::with_val(prec, (1, 0)),
            1 => Complex::with_val(prec, (0, 1)),
            2 => Complex::with_val(prec, (-1, 0)),
            _ => Complex::with_val(prec, (0, -1)),
        };
    }
    let mut angle: Float = Float::with_val(prec, rug::float::Constant::Pi) * 2 * k;
    angle /= m;
    let (s, c) = angle.sin_cos(Float::new(prec));
    Complex::with_val(prec, (c, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn root_sums_vanish() {
        for m in 2..13 {
            let mut s = Cyclo::zero(m);
            for k in 0..m as i64 {
                s = s.add(&Cyclo::root(m, k));
            }
            assert!(s.is_zero(), "m = {m}");
            assert!(!Cyclo::root(m, 1).is_zero());
        }
        let z = Cyclo::root(5, 2);
        assert!(z.mul(&z.conj()).eq_exact(&Cyclo::from_int(5, 1)));
        let half = Cyclo::from_int(3, 3).div_int(2);
        assert_eq!(half.as_rational(), Some((3, 2)));
    }

    #[test]
    fn complex_values() {
        let z = Cyclo::root(8, 1).add(&Cyclo::root(8, 7));
        let v = z.to_complex(128);
        assert!((v.real().to_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert!(v.imag().to_f64().abs() < 1e-30);
    }
}
