// SPDX-License-Identifier: Apache-2.0

//! Multiprecision helpers: e(x), the Dedekind eta function, Gauss-Legendre
//! rules, coefficient extraction and quadrature over the modular domain.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::arith::reduce_to_fundamental_domain;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionContext {
    /// working precision in bits
    pub bits: u32,
    /// number of factors in the eta product; derived from `bits` when absent
    pub eta_terms: Option<usize>,
    pub quad_nodes_u: usize,
    pub quad_nodes_v: usize,
    /// height separating numerical quadrature from the exact strip integral
    pub height_t: f64,
    /// truncation tolerance for the scalar Gamma0(N) quadrature
    pub tail_tol: f64,
    /// nodes per direction on each panel of the Gamma0(N) quadrature
    pub gamma0_nodes: usize,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            bits: 128,
            eta_terms: None,
            quad_nodes_u: 64,
            quad_nodes_v: 64,
            height_t: 12.0,
            tail_tol: 1e-14,
            gamma0_nodes: 16,
        }
    }
}

impl PrecisionContext {
    pub fn with_bits(bits: u32) -> Self {
        Self { bits, ..Self::default() }
    }

    pub fn with_nodes(mut self, nu: usize, nv: usize) -> Self {
        self.quad_nodes_u = nu;
        self.quad_nodes_v = nv;
        self
    }

    /// 2^-bits as a double.
    pub fn epsilon(&self) -> f64 {
        2f64.powi(-(self.bits as i32))
    }
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// Euler-Mascheroni constant gamma = -Gamma'(1).
pub fn euler_gamma(prec: u32) -> Float {
    Float::with_val(prec, Constant::Euler)
}

/// e(x) = exp(2 pi i x) for real x.
pub fn e_of(x: &Float) -> Complex {
    let prec = x.prec();
    let angle = pi(prec) * Float::with_val(prec, x * 2u32);
    let (s, c) = angle.sin_cos(Float::new(prec));
    Complex::with_val(prec, (c, s))
}

/// e(z) = exp(2 pi i z) for complex z.
pub fn e_of_complex(z: &Complex) -> Complex {
    let prec = z.prec().0;
    let two_pi_i = Complex::with_val(prec, (0, pi(prec) * 2u32));
    Complex::with_val(prec, z * two_pi_i).exp()
}

pub fn abs_c(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

pub fn to_f64c(z: &Complex) -> (f64, f64) {
    (z.real().to_f64(), z.imag().to_f64())
}

#[derive(Clone, Debug)]
pub struct EtaValue {
    /// log |eta(tau)|
    pub log_abs: Float,
    /// eta(tau) itself (only for Im tau >= 1/2, where it is computed directly)
    pub value: Option<Complex>,
    /// bound on the relative truncation error of the product
    pub tail_bound: f64,
}

fn eta_terms_for(v: f64, ctx: &PrecisionContext) -> usize {
    ctx.eta_terms.unwrap_or_else(|| {
        let bits = ctx.bits as f64 * std::f64::consts::LN_2;
        (bits / (2.0 * std::f64::consts::PI * v)).ceil() as usize + 2
    })
}

/// eta(tau) = e(tau/24) prod_{n >= 1} (1 - e(n tau)) for Im tau >= 1/2.
pub fn dedekind_eta(tau: &Complex, ctx: &PrecisionContext) -> Result<EtaValue> {
    let prec = ctx.bits;
    let v = tau.imag().to_f64();
    if v < 0.5 {
        return Err(Error::Domain(format!("eta needs Im(tau) >= 1/2, got {v}")));
    }
    let terms = eta_terms_for(v, ctx);
    let tau = Complex::with_val(prec, tau);
    let q = e_of_complex(&tau);
    let mut qn = q.clone();
    let mut prod = Complex::with_val(prec, (1, 0));
    for _ in 0..terms {
        prod *= Complex::with_val(prec, 1 - &qn);
        qn *= &q;
    }
    let value = e_of_complex(&Complex::with_val(prec, &tau / 24u32)) * prod;
    let aq = (-2.0 * std::f64::consts::PI * v).exp();
    // |log prod_{n > K} (1 - q^n)| <= 2 sum_{n > K} |q|^n
    let tail_bound = 2.0 * aq.powi(terms as i32 + 1) / (1.0 - aq);
    let log_abs = abs_c(&value).ln();
    Ok(EtaValue { log_abs, value: Some(value), tail_bound })
}

/// log |eta(tau)| for any tau in the upper half plane, using
/// |eta(gamma tau)| = |c tau + d|^{1/2} |eta(tau)| after reduction.
pub fn log_abs_eta(tau: &Complex, ctx: &PrecisionContext) -> Result<EtaValue> {
    let tau = Complex::with_val(ctx.bits, tau);
    let (z, g) = reduce_to_fundamental_domain(&tau)?;
    let mut ev = dedekind_eta(&z, ctx)?;
    // tau = g^{-1} z, so |eta(tau)| = |eta(z)| / |c tau + d|^{1/2}
    let j = abs_c(&g.j(&tau)).ln();
    ev.log_abs -= j / 2u32;
    if g != crate::arith::ModularMatrix::IDENTITY {
        ev.value = None;
    }
    Ok(ev)
}

type Rule = Arc<(Vec<Float>, Vec<Float>)>;

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize, prec: u32) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().unwrap().get(&(n, prec)) {
        return r.clone();
    }
    let wp = prec + 32;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = Float::with_val(wp, guess);
        let mut dp = Float::new(wp);
        for it in 0..200 {
            let (p, d) = legendre_pd(n, &x);
            let dx = Float::with_val(wp, &p / &d);
            x -= &dx;
            dp = d;
            if it > 3 && (dx.is_zero() || dx.get_exp().unwrap_or(0) < -(wp as i32) + 4) {
                let (_, d) = legendre_pd(n, &x);
                dp = d;
                break;
            }
        }
        let one_minus = Float::with_val(wp, 1 - Float::with_val(wp, x.square_ref()));
        let w = Float::with_val(wp, 2u32) / (one_minus * Float::with_val(wp, dp.square_ref()));
        nodes.push(Float::with_val(prec, &x));
        weights.push(Float::with_val(prec, &w));
    }
    let rule = Arc::new((nodes, weights));
    cache.lock().unwrap().insert((n, prec), rule.clone());
    rule
}

fn legendre_pd(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let k = k as u32;
        let t = Float::with_val(prec, x * &p1) * (2 * k - 1);
        let p2 = (t - Float::with_val(prec, &p0 * (k - 1))) / k;
        p0 = p1;
        p1 = p2;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let num = (Float::with_val(prec, x * &p1) - &p0) * n as u32;
    let den = Float::with_val(prec, x.square_ref()) - 1u32;
    (p1, num / den)
}

/// Result of discrete Fourier inversion along a horizontal line.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub coeffs: Vec<Complex>,
    /// estimated contamination from terms beyond n_max
    pub aliasing: f64,
    pub flagged: bool,
}

/// Sample height at which coefficients up to exponent m_max (in units of the
/// period) keep about half of the working precision after rescaling.
pub fn extraction_height(m_max: usize, ctx: &PrecisionContext) -> f64 {
    let m = m_max.max(1) as f64;
    ctx.bits as f64 * std::f64::consts::LN_2 / (2.0 * 2.0 * std::f64::consts::PI * m)
}

/// Recovers a(n), n <= n_max, of F(tau) = sum_n a(n) e(n tau / N) from
/// M = 4 (n_max + 1) samples of F on Im tau = v0 across one period N.
pub fn extract_coefficients(
    f: &dyn Fn(&Complex) -> Complex,
    n: i64,
    n_max: usize,
    v0: f64,
    ctx: &PrecisionContext,
) -> Extraction {
    let prec = ctx.bits;
    let m = 4 * (n_max + 1);
    let vv = Float::with_val(prec, v0);
    let samples: Vec<Complex> = (0..m)
        .map(|s| {
            let x = Float::with_val(prec, n * s as i64) / m as u32;
            f(&Complex::with_val(prec, (x, &vv)))
        })
        .collect();
    let coeffs = invert_samples(&samples, n_max, &(vv * 2u32 * pi(prec) / n as u32), prec);
    let (aliasing, flagged) = aliasing_estimate(&coeffs, n_max, v0 / n as f64, m, ctx);
    Extraction { coeffs, aliasing, flagged }
}

/// a(j) = (1/M) sum_s F_s e(-j s / M) e^{j * growth}, j <= j_max.
pub(crate) fn invert_samples(samples: &[Complex], j_max: usize, growth: &Float, prec: u32) -> Vec<Complex> {
    let m = samples.len();
    let roots: Vec<Complex> = (0..m)
        .map(|k| crate::cyclo::root_of_unity(prec, -(k as i64), m as i64))
        .collect();
    (0..=j_max)
        .map(|j| {
            let mut acc = Complex::new(prec);
            for (s, val) in samples.iter().enumerate() {
                acc += Complex::with_val(prec, val * &roots[(j * s) % m]);
            }
            let scale = Float::with_val(prec, growth * j as u32).exp() / m as u32;
            acc * scale
        })
        .collect()
}

/// Aliasing from exponents beyond n_max: extrapolate the geometric decay of
/// the last computed coefficients and damp by the sample height.
pub(crate) fn aliasing_estimate(
    coeffs: &[Complex],
    n_max: usize,
    v_per_unit: f64,
    m: usize,
    ctx: &PrecisionContext,
) -> (f64, bool) {
    let tail = coeffs
        .iter()
        .skip(n_max / 2)
        .map(|c| abs_c(c).to_f64())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let gap = (m - n_max) as f64;
    let est = tail * (n_max as f64 + 1.0).powi(2) * (-2.0 * std::f64::consts::PI * gap * v_per_unit).exp();
    (est, est > ctx.epsilon().sqrt())
}

/// int_T^infty e^{-c v} v^{k-2} dv for integer weight k >= 1 and c > 0.
pub fn strip_integral(k: i32, c: &Float, t: &Float) -> Float {
    let prec = c.prec();
    let ct = Float::with_val(prec, c * t);
    match k {
        1 => {
            // E1(cT) = -Ei(-cT)
            -Float::with_val(prec, -&ct).eint()
        }
        _ => {
            // Gamma(k-1, cT) / c^{k-1} with Gamma(s+1, x) = s Gamma(s, x) + x^s e^{-x}
            let s = k - 1;
            let emx = Float::with_val(prec, -&ct).exp();
            let mut g = emx.clone(); // Gamma(1, x)
            let mut xp = Float::with_val(prec, 1);
            for j in 1..s {
                xp *= &ct;
                g = g * j as u32 + Float::with_val(prec, &xp * &emx);
            }
            g / Float::with_val(prec, c.pow(s as u32))
        }
    }
}

/// Gauss-Legendre product rule over the truncated fundamental domain
/// u in [-1/2, 1/2], v in [sqrt(1 - u^2), T], plus a tail bound above T from
/// the decay constant. Returns (value, error estimate).
pub fn petersson_quadrature(
    integrand: &dyn Fn(&Float, &Float) -> Float,
    decay: f64,
    ctx: &PrecisionContext,
) -> Result<(Float, f64)> {
    if decay.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::NotCuspidal);
    }
    let prec = ctx.bits;
    let t = ctx.height_t.max(1.0);
    let full = domain_rule(integrand, ctx.quad_nodes_u, ctx.quad_nodes_v, t, prec);
    let half = domain_rule(integrand, (ctx.quad_nodes_u / 2).max(2), (ctx.quad_nodes_v / 2).max(2), t, prec);
    let mut top = 0.0f64;
    for i in 0..=8 {
        let u = Float::with_val(prec, -0.5 + i as f64 / 8.0);
        top = top.max(integrand(&u, &Float::with_val(prec, t)).to_f64().abs());
    }
    // integrand <= top e^{-decay (v - T)} above T
    let tail = top / decay;
    let err = Float::with_val(prec, &full - &half).to_f64().abs() + tail;
    Ok((full, err))
}

fn domain_rule(integrand: &dyn Fn(&Float, &Float) -> Float, nu: usize, nv: usize, t: f64, prec: u32) -> Float {
    let ru = gauss_legendre(nu, prec);
    let rv = gauss_legendre(nv, prec);
    let tt = Float::with_val(prec, t);
    let mut total = Float::new(prec);
    for (xu, wu) in ru.0.iter().zip(&ru.1) {
        let u = Float::with_val(prec, xu / 2u32);
        let lo = (1u32 - Float::with_val(prec, u.square_ref())).sqrt();
        let half = Float::with_val(prec, &tt - &lo) / 2u32;
        let mid = Float::with_val(prec, &tt + &lo) / 2u32;
        let mut inner = Float::new(prec);
        for (xv, wv) in rv.0.iter().zip(&rv.1) {
            let v = Float::with_val(prec, xv * &half) + &mid;
            inner += integrand(&u, &v) * wv;
        }
        total += inner * &half * wu / 2u32;
    }
    total
}
