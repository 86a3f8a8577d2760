// SPDX-License-Identifier: Apache-2.0

//! Petersson inner products: quadrature for vector-valued forms over
//! SL2(Z)\H and for scalar forms over Gamma0(N)\H, and the closed forms in
//! terms of CM values of the Dedekind eta function.

use rug::ops::Pow;
use rug::{Complex, Float};
use serde_json::{json, Value};

use crate::arith::{best_coset_rep, is_squarefree, p1_points};
use crate::classgroup::{ClassCharacter, ClassGroup};
use crate::error::{Error, Result};
use crate::numerics::{abs_c, dedekind_eta, euler_gamma, gauss_legendre, pi, strip_integral, PrecisionContext};
use crate::scalartheta::{fmt_float, NumericSeries};
use crate::weilrep::NumericVvForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Quadrature,
    ClosedForm,
    Gamma0Quadrature,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Quadrature => "quadrature",
            Method::ClosedForm => "closed_form",
            Method::Gamma0Quadrature => "gamma0_quadrature",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PeterssonValue {
    pub value: Complex,
    pub error: f64,
    pub method: Method,
}

impl PeterssonValue {
    pub fn re(&self) -> f64 {
        self.value.real().to_f64()
    }

    pub fn im(&self) -> f64 {
        self.value.imag().to_f64()
    }

    pub fn abs(&self) -> f64 {
        abs_c(&self.value).to_f64()
    }

    pub fn to_json(&self, pair: (&str, &str)) -> Value {
        json!({
            "pair": [pair.0, pair.1],
            "method": self.method.name(),
            "value": [fmt_float(self.value.real()), fmt_float(self.value.imag())],
            "error": format!("{:e}", self.error),
        })
    }
}

fn is_cuspidal(f: &NumericVvForm) -> bool {
    f.components.iter().all(|c| c.first().map_or(true, |x| abs_c(x).to_f64() < 1e-20))
}

/// (F, G) = int_{SL2(Z)\H} sum_mu F_mu conj(G_mu) v^k du dv / v^2.
pub fn petersson_vv(f: &NumericVvForm, g: &NumericVvForm, k: i32, ctx: &PrecisionContext) -> Result<PeterssonValue> {
    let m = petersson_gram(&[f.clone(), g.clone()], &[(0, 1)], k, ctx)?;
    Ok(m.into_iter().next().expect("one pair"))
}

/// Petersson products of the listed pairs, evaluating each form once per
/// node. The domain is split at v = 1: below by Gauss-Legendre, above
/// exactly, since the strip integral of e((n - m) u / N) picks n = m.
pub fn petersson_gram(
    forms: &[NumericVvForm],
    pairs: &[(usize, usize)],
    k: i32,
    ctx: &PrecisionContext,
) -> Result<Vec<PeterssonValue>> {
    let prec = ctx.bits;
    let n = forms.first().ok_or_else(|| Error::Invariant("no forms".into()))?.df.n;
    if forms.iter().any(|f| f.df.n != n) {
        return Err(Error::Invariant("forms live on different discriminant forms".into()));
    }
    let cusp: Vec<bool> = forms.iter().map(is_cuspidal).collect();
    if pairs.iter().any(|&(i, j)| !cusp[i] && !cusp[j]) {
        return Err(Error::NotCuspidal);
    }
    let full = compact_part(forms, pairs, k, ctx.quad_nodes_u, ctx.quad_nodes_v, prec)?;
    let half = compact_part(forms, pairs, k, (ctx.quad_nodes_u / 2).max(2), (ctx.quad_nodes_v / 2).max(2), prec)?;
    let one = Float::with_val(prec, 1);
    let four_pi_over_n = pi(prec) * 4u32 / n as u32;
    let mut out = Vec::with_capacity(pairs.len());
    for (p, &(i, j)) in pairs.iter().enumerate() {
        let (f, g) = (&forms[i], &forms[j]);
        let mut strip = Complex::new(prec);
        let mut coeff_max = 0.0f64;
        let len = f.n_max().min(g.n_max());
        for (cf, cg) in f.components.iter().zip(&g.components) {
            for idx in 1..=len {
                if cf[idx].is_zero() || cg[idx].is_zero() {
                    continue;
                }
                let c = Float::with_val(prec, &four_pi_over_n * idx as u32);
                let w = strip_integral(k, &c, &one);
                strip += Complex::with_val(prec, &cf[idx] * Complex::with_val(prec, cg[idx].conj_ref())) * w;
                coeff_max = coeff_max.max(abs_c(&cf[idx]).to_f64() * abs_c(&cg[idx]).to_f64());
            }
        }
        // omitted strip terms, n > len
        let rate = 4.0 * std::f64::consts::PI / n as f64;
        let strip_tail = coeff_max * (len as f64 + 1.0).powi(2) * (-rate * (len as f64 + 1.0)).exp() / rate;
        let diff = abs_c(&Complex::with_val(prec, &full[p] - &half[p])).to_f64();
        let value = Complex::with_val(prec, &full[p] + &strip);
        out.push(PeterssonValue { value, error: diff + strip_tail + f.error + g.error, method: Method::Quadrature });
    }
    Ok(out)
}

fn compact_part(
    forms: &[NumericVvForm],
    pairs: &[(usize, usize)],
    k: i32,
    nu: usize,
    nv: usize,
    prec: u32,
) -> Result<Vec<Complex>> {
    let ru = gauss_legendre(nu, prec);
    let rv = gauss_legendre(nv, prec);
    let mut acc = vec![Complex::new(prec); pairs.len()];
    for (xu, wu) in ru.0.iter().zip(&ru.1) {
        let u = Float::with_val(prec, xu / 2u32);
        let lo = (1u32 - Float::with_val(prec, u.square_ref())).sqrt();
        let half = Float::with_val(prec, 1u32 - &lo) / 2u32;
        let mid = Float::with_val(prec, 1u32 + &lo) / 2u32;
        for (xv, wv) in rv.0.iter().zip(&rv.1) {
            let v = Float::with_val(prec, xv * &half) + &mid;
            let tau = Complex::with_val(prec, (&u, &v));
            let vals: Vec<Vec<Complex>> = forms.iter().map(|f| f.evaluate(&tau)).collect::<Result<_>>()?;
            // weight v^{k-2} and the rule weights, u-interval of length 1
            let w = Float::with_val(prec, (&v).pow(k - 2)) * wu * wv * &half / 2u32;
            for (slot, &(i, j)) in acc.iter_mut().zip(pairs) {
                let mut s = Complex::new(prec);
                for (a, b) in vals[i].iter().zip(&vals[j]) {
                    s += Complex::with_val(prec, a * Complex::with_val(prec, b.conj_ref()));
                }
                *slot += s * &w;
            }
        }
    }
    Ok(acc)
}

/// (f, g) = int_{Gamma0(N)\H} f conj(g) v^k du dv / v^2, unfolded as the sum
/// over cosets of integrals over the standard fundamental domain. Each
/// coset uses the representative maximizing Im(gamma tau) at the node.
pub fn petersson_scalar_gamma0(
    f: &NumericSeries,
    g: &NumericSeries,
    level: i64,
    k: i32,
    ctx: &PrecisionContext,
) -> Result<PeterssonValue> {
    if !is_squarefree(level) {
        return Err(Error::NotSquarefree(level));
    }
    let zero_const = |s: &NumericSeries| s.coeffs.first().map_or(true, |c| abs_c(c).to_f64() < 1e-20);
    if !zero_const(f) && !zero_const(g) {
        return Err(Error::NotCuspidal);
    }
    let prec = ctx.bits;
    // the slowest cusp has width N: integrand ~ e^{-4 pi v / N}
    let top = level as f64 * (1.0 / ctx.tail_tol).ln() / (4.0 * std::f64::consts::PI);
    let mut panels: Vec<(Option<f64>, f64)> = vec![(None, 1.0)];
    let mut lo = 1.0;
    while lo < top {
        let hi = (2.0 * lo).min(top);
        panels.push((Some(lo), hi));
        lo = hi;
    }
    let points = p1_points(level)?;
    let nodes = ctx.gamma0_nodes.max(4);
    let full = gamma0_rule(f, g, level, k, &points, &panels, nodes, prec)?;
    let half = gamma0_rule(f, g, level, k, &points, &panels, nodes / 2, prec)?;
    let diff = abs_c(&Complex::with_val(prec, &full - &half)).to_f64();
    let tail = abs_c(&full).to_f64().max(1.0) * ctx.tail_tol;
    Ok(PeterssonValue { value: full, error: diff + tail, method: Method::Gamma0Quadrature })
}

#[allow(clippy::too_many_arguments)]
fn gamma0_rule(
    f: &NumericSeries,
    g: &NumericSeries,
    level: i64,
    k: i32,
    points: &[(i64, i64)],
    panels: &[(Option<f64>, f64)],
    nodes: usize,
    prec: u32,
) -> Result<Complex> {
    let r = gauss_legendre(nodes, prec);
    let mut total = Complex::new(prec);
    for &(lo0, hi) in panels {
        let hi = Float::with_val(prec, hi);
        for (xu, wu) in r.0.iter().zip(&r.1) {
            let u = Float::with_val(prec, xu / 2u32);
            let lo = match lo0 {
                None => (1u32 - Float::with_val(prec, u.square_ref())).sqrt(),
                Some(l) => Float::with_val(prec, l),
            };
            let half = Float::with_val(prec, &hi - &lo) / 2u32;
            let mid = Float::with_val(prec, &hi + &lo) / 2u32;
            for (xv, wv) in r.0.iter().zip(&r.1) {
                let v = Float::with_val(prec, xv * &half) + &mid;
                let tau = Complex::with_val(prec, (&u, &v));
                let (x, y) = (u.to_f64(), v.to_f64());
                let mut s = Complex::new(prec);
                for &(c0, d0) in points {
                    let gm = best_coset_rep(c0, d0, level, x, y);
                    let w = gm.act(&tau);
                    let fv = f.evaluate(&w)?;
                    let gv = g.evaluate(&w)?;
                    if fv.flagged || gv.flagged {
                        return Err(Error::Truncation(format!(
                            "scalar form needs more coefficients at Im = {:.4}",
                            w.imag().to_f64()
                        )));
                    }
                    let im = Float::with_val(prec, w.imag().pow(k));
                    s += fv.value * gv.value.conj() * im;
                }
                let wt = Float::with_val(prec, v.square_ref()).recip() * wu * wv * &half / 2u32;
                total += s * wt;
            }
        }
    }
    Ok(total)
}

/// log v(b) + 4 log |eta(tau(b))| for every class b, with the summed
/// truncation bound.
pub fn eta_logs(cg: &ClassGroup, ctx: &PrecisionContext) -> Result<(Vec<Float>, f64)> {
    let mut out = Vec::with_capacity(cg.h);
    let mut err = 0.0;
    for b in 0..cg.h {
        let cm = cg.cm_point(b, ctx.bits);
        let ev = dedekind_eta(&cm.tau, ctx)?;
        err += 4.0 * ev.tail_bound;
        out.push(Float::with_val(ctx.bits, cm.v.ln_ref()) + ev.log_abs * 4u32);
    }
    Ok((out, err))
}

/// sum_b psi(b) (log v(b) + 4 log |eta(tau(b))|).
fn character_eta_sum(psi: &ClassCharacter, logs: &[Float], prec: u32) -> Complex {
    let mut s = Complex::new(prec);
    for (b, l) in logs.iter().enumerate() {
        s += psi.value_complex(b, prec) * l;
    }
    s
}

/// (Theta_P(psi), Theta_P(chi)) from the eta values at CM points. The class
/// a is in the form labelling of `IdealLattice::from_form`; the prefactor of
/// the conjugate pairing is conj(psi(a)) in that labelling.
pub fn closed_form_vv(
    cg: &ClassGroup,
    psi_idx: usize,
    chi_idx: usize,
    a_class: usize,
    ctx: &PrecisionContext,
) -> Result<PeterssonValue> {
    let chars = cg.characters();
    let count = chars.len();
    for &i in &[psi_idx, chi_idx] {
        if i >= count {
            return Err(Error::BadCharacter { index: i, count });
        }
    }
    cg.check_class(a_class)?;
    let (psi, chi) = (&chars[psi_idx], &chars[chi_idx]);
    if psi.is_trivial() && chi.is_trivial() {
        return Err(Error::BothTrivial);
    }
    let prec = ctx.bits;
    let same = psi_idx == chi_idx;
    let conj = cg.conj_character_index(psi_idx) == chi_idx;
    if !same && !conj {
        return Ok(PeterssonValue { value: Complex::new(prec), error: 0.0, method: Method::ClosedForm });
    }
    let (logs, eta_err) = eta_logs(cg, ctx)?;
    let h = cg.h as u32;
    let base = -(character_eta_sum(psi, &logs, prec) * h);
    let mut value = Complex::new(prec);
    if conj {
        value += Complex::with_val(prec, &base * psi.value_complex(a_class, prec).conj());
    }
    if same {
        value += &base;
    }
    Ok(PeterssonValue { value, error: 2.0 * h as f64 * eta_err, method: Method::ClosedForm })
}

/// -4 log |(v1 v2)^{1/4} eta(tau1) eta(tau2)| - log(2 pi) - Gamma'(1) with
/// tau1 the CM point of (hg)^{-1} a and tau2 that of g h^{-1}. The ideal
/// attached to a reduced form lies in the inverse class of its form
/// label, so a enters as its inverse here.
pub fn phi_value(cg: &ClassGroup, a_class: usize, g_class: usize, h_class: usize, ctx: &PrecisionContext) -> Result<Float> {
    for c in [a_class, g_class, h_class] {
        cg.check_class(c)?;
    }
    let prec = ctx.bits;
    let a_ideal = cg.inv(a_class);
    let c1 = cg.mul(cg.inv(cg.mul(h_class, g_class)), a_ideal);
    let c2 = cg.mul(g_class, cg.inv(h_class));
    let mut total = Float::new(prec);
    for c in [c1, c2] {
        let cm = cg.cm_point(c, prec);
        let ev = dedekind_eta(&cm.tau, ctx)?;
        // -4 log |v^{1/4} eta| = -log v - 4 log |eta|
        total -= Float::with_val(prec, cm.v.ln_ref()) + ev.log_abs * 4u32;
    }
    total -= (pi(prec) * 2u32).ln();
    total += euler_gamma(prec);
    Ok(total)
}

/// (theta_chi, theta_chi) = -(4h/w^2) sum_a chi^2(a) log |v(a)^{1/2} eta^2(tau(a))|
/// for prime |D| and chi != 1.
pub fn closed_form_scalar(cg: &ClassGroup, chi_idx: usize, ctx: &PrecisionContext) -> Result<PeterssonValue> {
    let n = -cg.d();
    if cg.disc.prime_factors.len() != 1 {
        return Err(Error::NotPrimeDiscriminant(cg.d()));
    }
    let chars = cg.characters();
    let chi = chars.get(chi_idx).ok_or(Error::BadCharacter { index: chi_idx, count: chars.len() })?;
    if chi.is_trivial() {
        return Err(Error::NotCuspidal);
    }
    debug_assert!(n > 2);
    let prec = ctx.bits;
    let (logs, eta_err) = eta_logs(cg, ctx)?;
    let mut s = Complex::new(prec);
    for (a, l) in logs.iter().enumerate() {
        let c2 = chi.value_complex(a, prec);
        // log |v^{1/2} eta^2| = (log v + 4 log |eta|) / 2
        s += Complex::with_val(prec, c2.square_ref()) * Float::with_val(prec, l / 2u32);
    }
    let w = cg.units();
    let factor = Float::with_val(prec, -4 * cg.h as i64) / (w * w) as u32;
    Ok(PeterssonValue {
        value: s * factor,
        error: 4.0 * cg.h as f64 * eta_err,
        method: Method::ClosedForm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalartheta::theta_psi;
    use crate::vvtheta::vv_theta_psi;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default().with_nodes(24, 24)
    }

    fn theta_forms(d: i64, a: usize, n_mult: usize) -> (ClassGroup, Vec<NumericVvForm>) {
        let cg = ClassGroup::new(d).unwrap();
        let chars = cg.characters();
        let forms = chars
            .iter()
            .map(|c| vv_theta_psi(&cg, a, c, n_mult * -d as usize).unwrap().to_numeric(128))
            .collect();
        (cg, forms)
    }

    #[test]
    fn closed_form_cases() {
        let c = ctx();
        let cg = ClassGroup::new(-23).unwrap();
        assert_eq!(closed_form_vv(&cg, 0, 0, 0, &c).unwrap_err(), Error::BothTrivial);
        assert!(closed_form_vv(&cg, 1, 0, 0, &c).unwrap().abs() == 0.0);
        // pairing of psi with its conjugate at principal a: -3 sum psi(b) L(b)
        let v = closed_form_vv(&cg, 1, 2, 0, &c).unwrap();
        assert!(v.re() > 0.0 && v.im().abs() < 1e-30);
        let w = closed_form_vv(&cg, 2, 1, 0, &c).unwrap();
        assert!((v.re() - w.re()).abs() < 1e-30);
        let (logs, err) = eta_logs(&cg, &c).unwrap();
        assert!(err < 1e-30);
        // D = -23 CM points (-1 + i sqrt 23)/2, (+-1 + i sqrt 23)/4
        let vs: Vec<f64> = (0..3).map(|b| cg.cm_point(b, 128).v.to_f64()).collect();
        assert!((vs[0] - 23f64.sqrt() / 2.0).abs() < 1e-12 && (vs[1] - 23f64.sqrt() / 4.0).abs() < 1e-12);
        let psi = &cg.characters()[1];
        let manual = character_eta_sum(psi, &logs, 128) * -3i32;
        assert!(abs_c(&Complex::with_val(128, &manual - &v.value)).to_f64() < 1e-30);
    }

    #[test]
    fn phi_sums_reproduce_closed_form() {
        let c = ctx();
        for (d, a) in [(-23, 1), (-47, 2), (-39, 3)] {
            let cg = ClassGroup::new(d).unwrap();
            let chars = cg.characters();
            let phis: Vec<Vec<f64>> =
                (0..cg.h).map(|g| (0..cg.h).map(|h| phi_value(&cg, a, g, h, &c).unwrap().to_f64()).collect()).collect();
            for (i, psi) in chars.iter().enumerate() {
                for (j, chi) in chars.iter().enumerate() {
                    if psi.is_trivial() && chi.is_trivial() {
                        continue;
                    }
                    let mut s = Complex::new(128);
                    for g in 0..cg.h {
                        for h in 0..cg.h {
                            s += psi.value_complex(g, 128) * chi.value_complex(h, 128).conj() * phis[g][h];
                        }
                    }
                    let cf = closed_form_vv(&cg, i, j, a, &c).unwrap();
                    let diff = abs_c(&Complex::with_val(128, &s - &cf.value)).to_f64();
                    assert!(diff < 1e-8, "D = {d}, ({i}, {j}): {diff}");
                }
            }
        }
    }

    #[test]
    fn phi_principal_substitution() {
        let c = ctx();
        let cg = ClassGroup::new(-23).unwrap();
        let v = phi_value(&cg, 0, 0, 0, &c).unwrap().to_f64();
        let cm = cg.cm_point(0, 128);
        let ev = dedekind_eta(&cm.tau, &c).unwrap();
        let l = cm.v.to_f64().ln() / 2.0 + 2.0 * ev.log_abs.to_f64();
        let want = -4.0 * l - (2.0 * std::f64::consts::PI).ln() + 0.5772156649015329;
        assert!((v - want).abs() < 1e-12);
    }

    #[test]
    fn quadrature_matches_closed_form_d23() {
        let c = ctx();
        let (cg, forms) = theta_forms(-23, 0, 18);
        let pairs = [(1, 1), (1, 2), (2, 1), (1, 0)];
        let vals = petersson_gram(&forms, &pairs, 1, &c).unwrap();
        for (v, &(i, j)) in vals.iter().zip(&pairs) {
            let cf = closed_form_vv(&cg, i, j, 0, &c).unwrap();
            let diff = abs_c(&Complex::with_val(128, &v.value - &cf.value)).to_f64();
            assert!(diff < 1e-8 * cf.abs().max(1.0), "({i}, {j}): {} vs {}", v.value, cf.value);
            assert!(v.error < 1e-8);
        }
        // Hermitian symmetry
        let d = Complex::with_val(128, &vals[1].value - Complex::with_val(128, vals[2].value.conj_ref()));
        assert!(abs_c(&d).to_f64() < 1e-20);
        assert_eq!(petersson_vv(&forms[0], &forms[0], 1, &c).unwrap_err(), Error::NotCuspidal);
    }

    #[test]
    fn gamma0_norm_matches_closed_form() {
        let c = PrecisionContext { gamma0_nodes: 12, ..ctx() };
        let cg = ClassGroup::new(-23).unwrap();
        let chars = cg.characters();
        let f = theta_psi(&cg, &chars[1], 400).unwrap().numeric(128);
        let q = petersson_scalar_gamma0(&f, &f, 23, 1, &c).unwrap();
        let cf = closed_form_scalar(&cg, 1, &c).unwrap();
        assert!(cf.re() > 0.0 && cf.im().abs() < 1e-30);
        assert!((q.re() - cf.re()).abs() < 1e-6 * cf.re(), "{} vs {}", q.re(), cf.re());
        assert!(q.im().abs() < 1e-10);
        let zero = NumericSeries::new(1, vec![Complex::new(128); 4]);
        assert!(petersson_scalar_gamma0(&zero, &zero, 23, 1, &c).unwrap().abs() == 0.0);
        assert!(closed_form_scalar(&ClassGroup::new(-15).unwrap(), 1, &c).is_err());
    }
}
