// SPDX-License-Identifier: Apache-2.0

//! Scalar theta series of ideal classes, their character combinations and
//! the genus Eisenstein series, as exact q-expansions.

use num_integer::Integer;
use rug::{Complex, Float};
use serde_json::{json, Value};

use crate::classgroup::{ClassCharacter, ClassGroup};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::ideallat::enumerate_integral_form;
use crate::numerics::{abs_c, e_of_complex};

/// sum_n coeffs[n] e(n tau / N), with exact cyclotomic coefficients.
#[derive(Clone, Debug)]
pub struct QExpansion {
    pub n_denom: i64,
    pub coeffs: Vec<Cyclo>,
    /// weight as a fraction (num, den)
    pub weight: (i64, i64),
    pub disc: i64,
    pub label: String,
}

#[derive(Clone, Debug)]
pub struct Evaluated {
    pub value: Complex,
    pub tail_bound: f64,
    pub flagged: bool,
}

impl QExpansion {
    pub fn n_max(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn modulus(&self) -> usize {
        self.coeffs.first().map_or(1, |c| c.modulus())
    }

    pub fn coeff(&self, n: usize) -> Option<&Cyclo> {
        self.coeffs.get(n)
    }

    /// Integer coefficient, when the coefficient is an integer.
    pub fn int_coeff(&self, n: usize) -> Option<i64> {
        match self.coeffs.get(n)?.as_rational()? {
            (p, 1) => Some(p),
            _ => None,
        }
    }

    fn relabel(&self, n_denom: i64, m: usize) -> Vec<Cyclo> {
        let f = (n_denom / self.n_denom) as usize;
        let len = self.n_max() * f + 1;
        let mut out = vec![Cyclo::zero(m); len];
        for (n, c) in self.coeffs.iter().enumerate() {
            out[n * f] = c.lift(m);
        }
        out
    }

    /// Sum, merging exponent denominators by lcm and truncating to the
    /// shorter range.
    pub fn add(&self, o: &Self) -> Self {
        let n = self.n_denom.lcm(&o.n_denom);
        let m = self.modulus().lcm(&o.modulus());
        let (a, b) = (self.relabel(n, m), o.relabel(n, m));
        let coeffs = a.iter().zip(&b).map(|(x, y)| x.add(y)).collect();
        Self { n_denom: n, coeffs, weight: self.weight, disc: self.disc, label: format!("({}) + ({})", self.label, o.label) }
    }

    pub fn scale(&self, c: &Cyclo) -> Self {
        let m = self.modulus().lcm(&c.modulus());
        let cl = c.lift(m);
        Self {
            coeffs: self.coeffs.iter().map(|x| x.lift(m).mul(&cl)).collect(),
            label: format!("c * ({})", self.label),
            ..self.clone()
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Cyclo::from_int(1, -1)))
    }

    pub fn conj(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c.conj()).collect(), ..self.clone() }
    }

    pub fn exact_eq(&self, o: &Self) -> bool {
        self.n_denom == o.n_denom
            && self.coeffs.len() == o.coeffs.len()
            && self.coeffs.iter().zip(&o.coeffs).all(|(x, y)| {
                let m = x.modulus().lcm(&y.modulus());
                x.lift(m).eq_exact(&y.lift(m))
            })
    }

    pub fn complex_coeffs(&self, prec: u32) -> Vec<Complex> {
        self.coeffs.iter().map(|c| c.to_complex(prec)).collect()
    }

    /// Truncated sum at tau with a tail estimate from the bound |a(n)| <= C n.
    pub fn evaluate(&self, tau: &Complex, prec: u32) -> Result<Evaluated> {
        self.numeric(prec).evaluate(tau)
    }

    pub fn numeric(&self, prec: u32) -> NumericSeries {
        NumericSeries::new(self.n_denom, self.complex_coeffs(prec))
    }

    pub fn to_json(&self, prec: u32) -> Value {
        let coeffs: Vec<Value> = self
            .complex_coeffs(prec)
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| json!([n, fmt_float(c.real()), fmt_float(c.imag())]))
            .collect();
        let w = if self.weight.1 == 1 { self.weight.0.to_string() } else { format!("{}/{}", self.weight.0, self.weight.1) };
        json!({ "N": self.n_denom, "coeffs": coeffs, "weight": w, "disc": self.disc, "label": self.label })
    }
}

/// A q-expansion with floating-point coefficients, prepared for repeated
/// evaluation.
#[derive(Clone, Debug)]
pub struct NumericSeries {
    pub n_denom: i64,
    pub coeffs: Vec<Complex>,
    /// max |a(n)| / n, for the tail estimate
    growth: f64,
}

impl NumericSeries {
    pub fn new(n_denom: i64, coeffs: Vec<Complex>) -> Self {
        let growth = coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| abs_c(c).to_f64() / n.max(1) as f64)
            .fold(0.0f64, f64::max);
        Self { n_denom, coeffs, growth }
    }

    pub fn evaluate(&self, tau: &Complex) -> Result<Evaluated> {
        let v = tau.imag().to_f64();
        if v <= 0.0 {
            return Err(Error::Domain("Im(tau) must be positive".into()));
        }
        let prec = tau.prec().0;
        let tol = 2f64.powf(-(prec as f64) * 0.3);
        let rate = 2.0 * std::f64::consts::PI * v / self.n_denom as f64;
        // stop once C K e^{-rate K} drops below 2^-bits
        let len = self.coeffs.len();
        let need = ((self.growth + 1.0).ln() + (len as f64).ln() + prec as f64 * std::f64::consts::LN_2) / rate;
        let k = if need.is_finite() && need < len as f64 { (need.ceil() as usize + 1).min(len) } else { len };
        let q = e_of_complex(&Complex::with_val(prec, tau / self.n_denom));
        // Horner from the top
        let mut acc = Complex::new(prec);
        for c in self.coeffs[..k].iter().rev() {
            acc *= &q;
            acc += c;
        }
        // sum_{n >= K} C n r^n <= C r^K (K/(1-r) + r/(1-r)^2)
        let r = (-rate).exp();
        let k1 = k as f64;
        let tail = self.growth * r.powf(k1) * (k1 / (1.0 - r) + r / (1.0 - r).powi(2));
        Ok(Evaluated { value: acc, tail_bound: tail, flagged: tail > tol })
    }
}

/// Decimal string with about the significant digits carried by the float.
pub fn fmt_float(x: &Float) -> String {
    let digits = (x.prec() as f64 * 0.30103).floor() as usize;
    x.to_string_radix(10, Some(digits.max(2)))
}

/// theta_a with rho(n, a) = #{(x, y) : Q(x, y) = n} for the reduced form.
pub fn theta_ideal(cg: &ClassGroup, cls: usize, n_max: usize) -> Result<QExpansion> {
    cg.check_class(cls)?;
    let f = cg.classes[cls];
    let mut rho = vec![0i64; n_max + 1];
    for (_, _, v) in enumerate_integral_form(f.a, f.b, f.c, n_max as i64) {
        rho[v as usize] += 1;
    }
    Ok(QExpansion {
        n_denom: 1,
        coeffs: rho.into_iter().map(|r| Cyclo::from_int(1, r)).collect(),
        weight: (1, 1),
        disc: cg.d(),
        label: format!("theta{}", f),
    })
}

/// theta_psi = (1/w) sum_a psi(a) theta_a.
pub fn theta_psi(cg: &ClassGroup, psi: &ClassCharacter, n_max: usize) -> Result<QExpansion> {
    if psi.labels.len() != cg.h {
        return Err(Error::Invariant("character does not belong to this class group".into()));
    }
    let m = psi.m as usize;
    let mut acc = vec![Cyclo::zero(m); n_max + 1];
    for cls in 0..cg.h {
        let th = theta_ideal(cg, cls, n_max)?;
        let w = psi.value(cls);
        for (a, c) in acc.iter_mut().zip(&th.coeffs) {
            if let Some((r, _)) = c.as_rational() {
                if r != 0 {
                    *a = a.add(&w.scale(r));
                }
            }
        }
    }
    let wk = cg.units();
    Ok(QExpansion {
        n_denom: 1,
        coeffs: acc.into_iter().map(|c| c.div_int(wk)).collect(),
        weight: (1, 1),
        disc: cg.d(),
        label: format!("theta_psi{:?}", psi.exponents),
    })
}

/// E_A = (1/h) sum_b theta_{a b^2}.
pub fn genus_eisenstein(cg: &ClassGroup, cls: usize, n_max: usize) -> Result<QExpansion> {
    cg.check_class(cls)?;
    let mut acc = vec![Cyclo::from_int(1, 0); n_max + 1];
    for b in 0..cg.h {
        let th = theta_ideal(cg, cg.class_action(b, cls), n_max)?;
        for (a, c) in acc.iter_mut().zip(&th.coeffs) {
            *a = a.add(c);
        }
    }
    Ok(QExpansion {
        n_denom: 1,
        coeffs: acc.into_iter().map(|c| c.div_int(cg.h as i64)).collect(),
        weight: (1, 1),
        disc: cg.d(),
        label: format!("E_genus({})", cg.classes[cls]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::kronecker;
    use crate::classgroup::QuadForm;
    use proptest::prelude::*;

    const DISCS: [i64; 12] = [-3, -7, -11, -15, -23, -31, -35, -39, -47, -55, -71, -87];

    fn brute(a: i64, b: i64, c: i64, n: i64) -> i64 {
        let mut k = 0;
        for x in -20..=20 {
            for y in -20..=20 {
                if a * x * x + b * x * y + c * y * y == n {
                    k += 1;
                }
            }
        }
        k
    }

    #[test]
    fn representation_numbers() {
        let cg = ClassGroup::new(-7).unwrap();
        let t = theta_ideal(&cg, 0, 30).unwrap();
        assert_eq!(t.int_coeff(0), Some(1));
        assert_eq!(t.int_coeff(1), Some(2));
        for n in 0..=30 {
            assert_eq!(t.int_coeff(n), Some(brute(1, 1, 2, n as i64)), "n = {n}");
        }
        let cg = ClassGroup::new(-23).unwrap();
        let i = cg.class_of(&QuadForm::new(2, 1, 3)).unwrap();
        let t = theta_ideal(&cg, i, 40).unwrap();
        assert_eq!(t.int_coeff(2), Some(2));
        for n in 0..=40 {
            assert_eq!(t.int_coeff(n), Some(brute(2, 1, 3, n as i64)));
        }
    }

    #[test]
    fn theta_psi_constant_terms() {
        let cg = ClassGroup::new(-23).unwrap();
        let chars = cg.characters();
        let t = theta_psi(&cg, &chars[0], 10).unwrap();
        assert_eq!(t.coeffs[0].as_rational(), Some((3, 2)));
        for psi in &chars[1..] {
            assert!(theta_psi(&cg, psi, 10).unwrap().coeffs[0].is_zero());
        }
    }

    fn check_inversion(d: i64, n_max: usize) {
        let cg = ClassGroup::new(d).unwrap();
        let chars = cg.characters();
        let thetas: Vec<_> = chars.iter().map(|c| theta_psi(&cg, c, n_max).unwrap()).collect();
        let (w, h) = (cg.units(), cg.h as i64);
        for a in 0..cg.h {
            let mut acc: Option<QExpansion> = None;
            for (chi, th) in chars.iter().zip(&thetas) {
                let term = th.scale(&chi.value(a).conj());
                acc = Some(match acc {
                    None => term,
                    Some(x) => x.add(&term),
                });
            }
            let rec = acc.unwrap().scale(&Cyclo::from_int(1, w).div_int(h));
            assert!(rec.exact_eq(&theta_ideal(&cg, a, n_max).unwrap()), "D = {d}, class {a}");
        }
    }

    #[test]
    fn inversion_identity() {
        for d in [-23, -39, -47, -55, -3] {
            check_inversion(d, 30);
        }
    }

    #[test]
    fn genus_eisenstein_d23() {
        let cg = ClassGroup::new(-23).unwrap();
        let e = genus_eisenstein(&cg, 0, 50).unwrap();
        let t0 = theta_ideal(&cg, cg.class_of(&QuadForm::new(1, 1, 6)).unwrap(), 50).unwrap();
        let t1 = theta_ideal(&cg, cg.class_of(&QuadForm::new(2, 1, 3)).unwrap(), 50).unwrap();
        let want = t0.add(&t1.scale(&Cyclo::from_int(1, 2))).scale(&Cyclo::from_int(1, 1).div_int(3));
        assert!(e.exact_eq(&want));
        assert_eq!(e.coeffs[0].as_rational(), Some((1, 1)));
    }

    #[test]
    fn cuspidal_part_vanishes_off_genus() {
        for d in [-23, -15, -35, -39, -55, -87] {
            let cg = ClassGroup::new(d).unwrap();
            let pstars = cg.genus_discriminants();
            for a in 0..cg.h {
                let eps: Vec<i64> = (0..pstars.len()).map(|i| cg.genus_character(i, a).unwrap()).collect();
                let e = genus_eisenstein(&cg, a, 50).unwrap();
                for b in 0..cg.h {
                    let g = theta_ideal(&cg, cg.class_action(b, a), 50).unwrap().sub(&e);
                    for n in 1..=50usize {
                        if pstars.iter().zip(&eps).any(|(&p, &ei)| kronecker(p, n as i64) == -ei) {
                            assert!(g.coeffs[n].is_zero(), "D = {d}, n = {n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn evaluate_examples() {
        let p = 128;
        let cg = ClassGroup::new(-7).unwrap();
        let t = theta_ideal(&cg, 0, 40).unwrap();
        let tau = Complex::with_val(p, (0, 1));
        let ev = t.evaluate(&tau, p).unwrap();
        assert!(!ev.flagged);
        let mut direct = Float::new(p);
        let two_pi = crate::numerics::pi(p) * 2u32;
        for (_, _, v) in enumerate_integral_form(1, 1, 2, 40) {
            direct += Float::with_val(p, -Float::with_val(p, &two_pi * v)).exp();
        }
        assert!(Float::with_val(p, ev.value.real() - &direct).abs().to_f64() < 1e-30);
        let c = QExpansion { coeffs: vec![Cyclo::from_int(1, 5)], ..t.clone() };
        let ev = c.evaluate(&Complex::with_val(p, (0.3, 2)), p).unwrap();
        assert_eq!(ev.value, Complex::with_val(p, (5, 0)));
        assert!(t.evaluate(&Complex::with_val(p, (0.1, 0.001)), p).unwrap().flagged);
        assert!(t.evaluate(&Complex::with_val(p, (0.1, -1)), p).is_err());
    }

    #[test]
    fn extraction_recovers_theta() {
        let ctx = crate::numerics::PrecisionContext::default();
        let cg = ClassGroup::new(-7).unwrap();
        let t = theta_ideal(&cg, 0, 80).unwrap();
        let f = |tau: &Complex| t.evaluate(tau, ctx.bits).unwrap().value;
        let ex = crate::numerics::extract_coefficients(&f, 1, 20, 0.25, &ctx);
        for n in 0..=20 {
            let want = t.int_coeff(n).unwrap() as f64;
            assert!((ex.coeffs[n].real().to_f64() - want).abs() < 1e-10, "n = {n}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn conjugate_classes_share_theta(di in 0usize..DISCS.len(), seed in 0usize..64) {
            let cg = ClassGroup::new(DISCS[di]).unwrap();
            let a = seed % cg.h;
            let t = theta_ideal(&cg, a, 40).unwrap();
            let tb = theta_ideal(&cg, cg.inv(a), 40).unwrap();
            prop_assert!(t.exact_eq(&tb));
        }

        #[test]
        fn conjugate_character_conjugates_theta(di in 0usize..DISCS.len(), seed in 0usize..64) {
            let cg = ClassGroup::new(DISCS[di]).unwrap();
            let chars = cg.characters();
            let i = seed % cg.h;
            let t = theta_psi(&cg, &chars[i], 30).unwrap();
            let tc = theta_psi(&cg, &chars[cg.conj_character_index(i)], 30).unwrap();
            prop_assert!(t.conj().exact_eq(&tc));
        }

        #[test]
        fn evaluate_is_linear(x in -0.5f64..0.5, y in 0.3f64..2.0) {
            let p = 128;
            let cg = ClassGroup::new(-23).unwrap();
            let t0 = theta_ideal(&cg, 0, 60).unwrap();
            let t1 = theta_ideal(&cg, 1, 60).unwrap();
            let tau = Complex::with_val(p, (x, y));
            let sum = t0.add(&t1.scale(&Cyclo::from_int(1, 3))).evaluate(&tau, p).unwrap().value;
            let sep = t0.evaluate(&tau, p).unwrap().value + t1.evaluate(&tau, p).unwrap().value * 3u32;
            prop_assert!(abs_c(&Complex::with_val(p, &sum - &sep)).to_f64() < 1e-25);
        }
    }
}
