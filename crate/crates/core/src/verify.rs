// SPDX-License-Identifier: Apache-2.0

//! End-to-end checks of the theta constructions, the lift and the Petersson
//! formulas. Each check reports the observed deviation next to its
//! tolerance; the acceptance test and `btheta verify` both run these.

use rug::{Complex, Float};
use serde::Serialize;

use crate::arith::ModularMatrix;
use crate::classgroup::{enumerate_reduced, ClassGroup};
use crate::error::{Error, Result};
use crate::numerics::{abs_c, dedekind_eta, e_of, PrecisionContext};
use crate::petersson::{closed_form_scalar, closed_form_vv, petersson_gram, petersson_scalar_gamma0};
use crate::scalartheta::{genus_eisenstein, theta_ideal, theta_psi, NumericSeries, QExpansion};
use crate::vvtheta::{base_lattice, theta_space, vv_theta, vv_theta_psi, vv_theta_sym};
use crate::weilrep::{lift_coefficients, lift_eval, nu, symmetrize, CMat, Generator, NumericVvForm, WeilRep};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// largest deviation seen (0 for exact checks)
    pub observed: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn new(name: &str) -> Self {
        Self { name: name.into(), passed: true, observed: 0.0, tolerance: 0.0, detail: String::new() }
    }

    /// Record one comparison: passes if `dev <= tol`. The reported
    /// observation is the one closest to (or furthest past) its tolerance.
    fn record(&mut self, dev: f64, tol: f64, what: impl FnOnce() -> String) {
        if self.tolerance == 0.0 || dev / tol >= self.observed / self.tolerance {
            self.observed = dev;
            self.tolerance = tol;
        }
        if dev > tol || dev.is_nan() {
            self.require(false, what);
        }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            if self.passed {
                self.detail.clear();
            }
            self.passed = false;
            self.note(what());
        }
    }

    fn note(&mut self, s: String) {
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(&s);
    }

    fn fail_with(mut self, e: Error) -> Self {
        self.passed = false;
        self.note(format!("error: {e}"));
        self
    }

    /// Merge per-discriminant results of the same check.
    pub fn merge(name: &str, parts: Vec<Check>) -> Check {
        let mut out = Check::new(name);
        for p in parts {
            out.passed &= p.passed;
            if p.observed / p.tolerance.max(f64::MIN_POSITIVE) >= out.observed / out.tolerance.max(f64::MIN_POSITIVE) {
                out.observed = p.observed;
                out.tolerance = p.tolerance;
            }
            if !p.detail.is_empty() {
                out.note(format!("[{}] {}", p.name, p.detail));
            }
        }
        out
    }

    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!("{status} {}: observed {:.3e}, tolerance {:.1e}", self.name, self.observed, self.tolerance);
        if !self.detail.is_empty() {
            s.push_str(" -- ");
            s.push_str(&self.detail);
        }
        s
    }
}

fn diff(a: &Complex, b: &Complex) -> f64 {
    abs_c(&Complex::with_val(a.prec().0.max(b.prec().0), a - b)).to_f64()
}

/// Deterministic pseudo-random stream (64-bit LCG).
struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    fn unit(&mut self) -> f64 {
        self.next() as f64 / (1u64 << 31) as f64
    }

    fn sl2(&mut self) -> ModularMatrix {
        let mut g = ModularMatrix::IDENTITY;
        for _ in 0..4 {
            let k = (self.next() % 7) as i64 - 3;
            g = g.mul(&ModularMatrix::t(k)).mul(&ModularMatrix::S);
        }
        g
    }
}

/// Numerator bound of a vector-valued theta so that its expansion is
/// accurate to the working precision on the fundamental domain.
pub fn vv_nmax(n: i64, bits: u32) -> usize {
    let m = (bits as f64 * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI * 0.85)).ceil() as usize + 2;
    m * n as usize
}

/// Run `f` with 512, 1024, ... coefficients until it stops reporting
/// truncation.
fn retry<T>(start: usize, f: impl Fn(usize) -> Result<T>) -> Result<T> {
    let mut n = start;
    loop {
        match f(n) {
            Err(Error::Truncation(_)) if n < 1 << 16 => n *= 2,
            other => return other,
        }
    }
}

/// A scalar expansion as a numeric series, with as many coefficients as
/// `run` needs.
fn with_enough_terms<T>(
    start: usize,
    build: impl Fn(usize) -> Result<QExpansion>,
    prec: u32,
    run: impl Fn(&NumericSeries) -> Result<T>,
) -> Result<T> {
    retry(start, |n| run(&build(n)?.numeric(prec)))
}

/// Class numbers from reduced forms against the analytic class number
/// formula and the expected values.
pub fn class_group_oracle(cases: &[(i64, usize)]) -> Check {
    let mut c = Check::new("class group oracle");
    for &(d, h) in cases {
        let forms = enumerate_reduced(d).len();
        let formula = ClassGroup::class_number_formula(d);
        c.require(forms == h && formula == h as i64, || format!("D = {d}: {forms} forms, formula {formula}, expected {h}"));
    }
    c
}

/// Rank of {Theta_P(., h)} for P = O_D equals (h + 2^{t-1}) / 2 and is
/// stable under halving n_max. Ranks for the other classes are reported;
/// outside the principal genus they can be smaller.
pub fn dimension_formula(d: i64, expected: usize, n_max: usize) -> Check {
    let c = Check::new(&format!("dimension D={d}"));
    let run = |mut c: Check| -> Result<Check> {
        let cg = ClassGroup::new(d)?;
        let sp = theta_space(&cg, cg.identity(), n_max)?;
        c.require(sp.rank == expected && sp.dim_formula == expected && sp.stable(), || {
            format!("rank {} (n/2: {}), formula {}", sp.rank, sp.rank_half, sp.dim_formula)
        });
        let others: Vec<String> = (0..cg.h)
            .filter(|&a| a != cg.identity())
            .map(|a| theta_space(&cg, a, n_max).map_or_else(|e| format!("a = {a}: {e}"), |s| format!("a = {a}: rank {}", s.rank)))
            .collect();
        if c.passed && !others.is_empty() {
            c.note(format!("other classes: {}", others.join(", ")));
        }
        Ok(c)
    };
    run(c.clone()).unwrap_or_else(|e| c.fail_with(e))
}

/// Every constant term of Theta_P(., psi), psi != 1, is exactly zero.
pub fn cuspidality(d: i64) -> Check {
    let c = Check::new(&format!("cuspidality D={d}"));
    let run = |mut c: Check| -> Result<Check> {
        let cg = ClassGroup::new(d)?;
        for a in 0..cg.h {
            for (i, psi) in cg.characters().iter().enumerate().skip(1) {
                let f = vv_theta_psi(&cg, a, psi, 2 * -d as usize)?;
                let bad = f.components.iter().filter(|x| !x[0].is_zero()).count();
                c.require(bad == 0, || format!("a = {a}, psi {i}: {bad} nonzero constant terms"));
            }
        }
        Ok(c)
    };
    run(c.clone()).unwrap_or_else(|e| c.fail_with(e))
}

/// Numeric theta forms Theta_P(., psi) for every character.
fn numeric_thetas(cg: &ClassGroup, a: usize, ctx: &PrecisionContext) -> Result<Vec<NumericVvForm>> {
    let n_max = vv_nmax(-cg.d(), ctx.bits);
    cg.characters().iter().map(|psi| Ok(vv_theta_psi(cg, a, psi, n_max)?.to_numeric(ctx.bits))).collect()
}

/// |(Theta(psi), Theta(chi))| below tol for basis pairs with chi not in
/// {psi, conj psi}.
pub fn orthogonality(d: i64, tol: f64, ctx: &PrecisionContext) -> Check {
    let c = Check::new(&format!("orthogonality D={d}"));
    let run = |mut c: Check| -> Result<Check> {
        let cg = ClassGroup::new(d)?;
        let basis = cg.conjugation_reps();
        for a in [0, cg.h - 1] {
            let forms = numeric_thetas(&cg, a, ctx)?;
            let mut pairs = vec![];
            for &i in &basis {
                for &j in &basis {
                    if i != j && cg.conj_character_index(i) != j {
                        pairs.push((i, j));
                    }
                }
            }
            let vals = petersson_gram(&forms, &pairs, 1, ctx)?;
            for (v, &(i, j)) in vals.iter().zip(&pairs) {
                c.record(v.abs(), tol, || format!("a = {a}, ({i}, {j}): |value| = {:.3e}", v.abs()));
            }
        }
        Ok(c)
    };
    run(c.clone()).unwrap_or_else(|e| c.fail_with(e))
}

/// closed_form_vv against quadrature for every pair of characters (not both
/// trivial), for every class a.
pub fn closed_form_agreement(d: i64, rel: f64, ctx: &PrecisionContext) -> Check {
    let c = Check::new(&format!("closed form D={d}"));
    let run = |mut c: Check| -> Result<Check> {
        let cg = ClassGroup::new(d)?;
        let nch = cg.h;
        let mut cases = [0usize; 4];
        for a in 0..cg.h {
            let forms = numeric_thetas(&cg, a, ctx)?;
            let pairs: Vec<(usize, usize)> =
                (0..nch).flat_map(|i| (0..nch).map(move |j| (i, j))).filter(|&(i, j)| i != 0 || j != 0).collect();
            let vals = petersson_gram(&forms, &pairs, 1, ctx)?;
            for (q, &(i, j)) in vals.iter().zip(&pairs) {
                let cf = closed_form_vv(&cg, i, j, a, ctx)?;
                let conj = cg.conj_character_index(i) == j;
                let case = match (i == j, conj) {
                    (true, true) => 3,
                    (true, false) => 2,
                    (false, true) => 1,
                    _ => 0,
                };
                cases[case] += 1;
                let dev = diff(&q.value, &cf.value);
                let tol = rel * cf.abs().max(1.0) + q.error + cf.error;
                c.record(dev, tol, || {
                    format!("a = {a}, ({i}, {j}): quadrature {} vs closed form {}", fmt_c(&q.value), fmt_c(&cf.value))
                });
            }
        }
        c.note(format!("pairs per case (i)-(iv): {cases:?}"));
        Ok(c)
    };
    run(c.clone()).unwrap_or_else(|e| c.fail_with(e))
}

fn fmt_c(z: &Complex) -> String {
    format!("{:.10}{:+.10}i", z.real().to_f64(), z.imag().to_f64())
}

/// S_P(theta_{a h^2}) = Theta^sym_P(., h), pointwise at pseudo-random tau
/// and coefficientwise up to n_coeff (in units of e(m tau)).
pub fn lift_of_theta(d: i64, points: usize, n_coeff: usize, tol: f64, ctx: &PrecisionContext) -> Check {
    let c = Check::new(&format!("lift of theta D={d}"));
    let run = |mut c: Check| -> Result<Check> {
        let cg = ClassGroup::new(d)?;
        let n = -d;
        let prec = ctx.bits;
        let mut rng = Lcg(0x5eed ^ d.unsigned_abs());
        let taus: Vec<Complex> = (0..points)
            .map(|_| {
                let x = rng.unit() - 0.5;
                let y = 0.6 + 1.4 * rng.unit();
                Complex::with_val(prec, (x, y))
            })
            .collect();
        for a in 0..cg.h {
            let (_, df) = base_lattice(&cg, a)?;
            let weil = WeilRep::new(df, prec);
            for h in 0..cg.h {
                let acted = cg.class_action(h, a);
                let sym = vv_theta_sym(&cg, a, h, vv_nmax(n, prec))?.to_numeric(prec);
                let nm = n_coeff * n as usize;
                let (pointwise, lifted) = with_enough_terms(2048, |m| theta_ideal(&cg, acted, m), prec, |f| {
                    let vals: Vec<Vec<Complex>> = taus.iter().map(|t| lift_eval(f, &weil, t)).collect::<Result<_>>()?;
                    Ok((vals, lift_coefficients(f, &weil, nm, ctx)?))
                })?;
                for (tau, got) in taus.iter().zip(&pointwise) {
                    let want = sym.evaluate(tau)?;
                    let dev = want.iter().zip(got).map(|(x, y)| diff(x, y)).fold(0.0, f64::max);
                    c.record(dev, tol, || format!("a = {a}, h = {h}, tau = {}: {dev:.3e}", fmt_c(tau)));
                }
                let exact = symmetrize(&vv_theta(&cg, a, h, nm)?.form).to_numeric(prec);
                let dev = max_coeff_dev(&lifted, &exact);
                c.record(dev, tol, || format!("a = {a}, h = {h}: coefficient deviation {dev:.3e}"));
            }
        }
        Ok(c)
    };
    run(c.clone()).unwrap_or_else(|e| c.fail_with(e))
}

fn max_coeff_dev(x: &NumericVvForm, y: &NumericVvForm) -> f64 {
    x.components
        .iter()
        .zip(&y.components)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(p, q)| diff(p, q)))
        .fold(0.0, f64::max)
}

/// Component 0 of S_L(g) equals nu g for the cusp form g = theta_{a h^2} - E_A,
/// coefficients e(m tau) with m <= m_max.
pub fn lift_component_zero(d: i64, m_max: usize, tol: f64, ctx: &PrecisionContext) -> Check {
    let c = Check::new(&format!("lift component zero D={d}"));
    let run = |mut c: Check| -> Result<Check> {
        let cg = ClassGroup::new(d)?;
        let n = -d;
        let prec = ctx.bits;
        for a in 0..cg.h {
            let (_, df) = base_lattice(&cg, a)?;
            let weil = WeilRep::new(df, prec);
            let count = nu(&df, 1);
            for h in 0..cg.h {
                let acted = cg.class_action(h, a);
                let g = |m: usize| -> Result<QExpansion> {
                    Ok(theta_ideal(&cg, acted, m)?.sub(&genus_eisenstein(&cg, a, m)?))
                };
                let lifted =
                    with_enough_terms(4096, g, prec, |f| lift_coefficients(f, &weil, m_max * n as usize, ctx))?;
                let exact = g(m_max)?.complex_coeffs(prec);
                let mut dev = 0.0f64;
                for (m, want) in exact.iter().enumerate() {
                    let want = Complex::with_val(prec, want * count as u32);
                    dev = dev.max(diff(&lifted.components[0][m * n as usize], &want));
                }
                c.record(dev, tol, || format!("a = {a}, h = {h}: deviation {dev:.3e}"));
            }
            c.note(format!("nu = {count} for a = {a}"));
        }
        c.detail = dedup_notes(&c.detail);
        Ok(c)
    };
    run(c.clone()).unwrap_or_else(|e| c.fail_with(e))
}

fn dedup_notes(s: &str) -> String {
    let mut seen: Vec<&str> = vec![];
    for part in s.split("; ") {
        if !seen.contains(&part) {
            seen.push(part);
        }
    }
    seen.join("; ")
}

/// Scalar form e(m tau) coefficients of component 0 of a vector-valued form.
fn component_zero_series(f: &crate::weilrep::VectorValuedForm, d: i64) -> QExpansion {
    let n = f.df.n as usize;
    QExpansion {
        n_denom: 1,
        coeffs: f.components[0].iter().step_by(n).cloned().collect(),
        weight: (1, 1),
        disc: d,
        label: "component 0".into(),
    }
}

/// (S_L(f), F) = (f, F_0) for f = w theta_chi and F = Theta_P(., psi).
pub fn adjointness(d: i64, rel: f64, ctx: &PrecisionContext) -> Check {
    let c = Check::new(&format!("adjointness D={d}"));
    let run = |mut c: Check| -> Result<Check> {
        let cg = ClassGroup::new(d)?;
        let n = -d;
        let prec = ctx.bits;
        let chars = cg.characters();
        let w = crate::cyclo::Cyclo::from_int(1, cg.units());
        let a = 0;
        let (_, df) = base_lattice(&cg, a)?;
        let weil = WeilRep::new(df, prec);
        for (ci, chi) in chars.iter().enumerate().filter(|(_, x)| !x.is_trivial()) {
            let f = |m: usize| -> Result<QExpansion> { Ok(theta_psi(&cg, chi, m)?.scale(&w)) };
            let lifted = with_enough_terms(2048, f, prec, |s| lift_coefficients(s, &weil, 12 * n as usize, ctx))?;
            for (pi, psi) in chars.iter().enumerate().filter(|(_, x)| !x.is_trivial()) {
                let big = vv_theta_psi(&cg, a, psi, vv_nmax(n, prec))?;
                let lhs = petersson_gram(&[lifted.clone(), big.to_numeric(prec)], &[(0, 1)], 1, ctx)?.remove(0);
                let rhs = retry(512, |m| {
                    let big0 = component_zero_series(&vv_theta_psi(&cg, a, psi, m * n as usize)?, d).numeric(prec);
                    petersson_scalar_gamma0(&f(m)?.numeric(prec), &big0, n, 1, ctx)
                })?;
                let dev = diff(&lhs.value, &rhs.value);
                let tol = rel * lhs.abs().max(rhs.abs()).max(1.0) + lhs.error + rhs.error;
                c.record(dev, tol, || {
                    format!("chi {ci}, psi {pi}: {} vs {}", fmt_c(&lhs.value), fmt_c(&rhs.value))
                });
                c.note(format!("chi {ci}, psi {pi}: (S f, F) = {}", fmt_c(&lhs.value)));
            }
        }
        Ok(c)
    };
    run(c.clone()).unwrap_or_else(|e| c.fail_with(e))
}

/// (theta_chi, theta_chi) three ways: the eta closed form, Gamma0(N)
/// quadrature, and the symmetrized vector-valued norm divided by
/// w^2 sum_{chi'^2 = psi} (1 + conj chi'^2(a)), a principal.
pub fn scalar_norm_chain(d: i64, rel: f64, ctx: &PrecisionContext) -> Check {
    let c = Check::new(&format!("scalar norm chain D={d}"));
    let run = |mut c: Check| -> Result<Check> {
        let cg = ClassGroup::new(d)?;
        let n = -d;
        let prec = ctx.bits;
        let chars = cg.characters();
        let a = cg.identity();
        let w = cg.units() as f64;
        for (ci, chi) in chars.iter().enumerate().filter(|(_, x)| !x.is_trivial()) {
            let cf = closed_form_scalar(&cg, ci, ctx)?;
            let quad = with_enough_terms(512, |m| theta_psi(&cg, chi, m), prec, |f| {
                petersson_scalar_gamma0(f, f, n, 1, ctx)
            })?;
            // psi = chi^2 and the characters with the same square
            let sq = |x: &crate::classgroup::ClassCharacter| -> Vec<i64> {
                x.labels.iter().map(|l| (2 * l).rem_euclid(x.m)).collect()
            };
            let target = sq(chi);
            let psi = chars.iter().position(|x| x.labels == target).expect("squares are characters");
            let mut weight = Complex::new(prec);
            for x in chars.iter().filter(|x| sq(x) == target) {
                let v = x.value_complex(a, prec);
                weight += Complex::with_val(prec, v.square_ref()).conj() + 1u32;
            }
            let sym = symmetrize(&vv_theta_psi(&cg, a, &chars[psi], vv_nmax(n, prec))?).to_numeric(prec);
            let vv = petersson_gram(&[sym], &[(0, 0)], 1, ctx)?.remove(0);
            let via = Complex::with_val(prec, &vv.value / (weight * (w * w)));
            let values = [("closed form", &cf.value), ("gamma0 quadrature", &quad.value), ("vv norm", &via)];
            let scale = cf.abs().max(1e-300);
            for i in 0..3 {
                for j in i + 1..3 {
                    let dev = diff(values[i].1, values[j].1) / scale;
                    c.record(dev, rel, || format!("chi {ci}: {} {} vs {} {}", values[i].0, fmt_c(values[i].1), values[j].0, fmt_c(values[j].1)));
                }
            }
            c.note(format!("chi {ci}: (theta_chi, theta_chi) = {:.12}", cf.re()));
        }
        c.detail = dedup_notes(&c.detail);
        Ok(c)
    };
    run(c.clone()).unwrap_or_else(|e| c.fail_with(e))
}

/// Relations of the Weil representation, unitarity and the homomorphism
/// property on random pairs.
pub fn weil_integrity(d: i64, pairs: usize, tol: f64, prec: u32) -> Check {
    let c = Check::new(&format!("Weil representation D={d}"));
    let run = |mut c: Check| -> Result<Check> {
        let cg = ClassGroup::new(d)?;
        let mut rng = Lcg(0xc0ffee ^ d.unsigned_abs());
        for a in 0..cg.h {
            let (_, df) = base_lattice(&cg, a)?;
            let w = WeilRep::new(df, prec);
            let id = CMat::identity(w.dim(), prec);
            let s = w.rho_generator(Generator::S);
            let t = w.rho_generator(Generator::T);
            let s2 = s.mul(&s);
            let st = s.mul(&t);
            c.record(s2.mul(&s2).dist(&id), tol, || format!("a = {a}: S^4 != I"));
            c.record(st.mul(&st).mul(&st).dist(&s2), tol, || format!("a = {a}: (ST)^3 != S^2"));
            for _ in 0..pairs {
                let (g1, g2) = (rng.sl2(), rng.sl2());
                let r1 = w.rho(&g1);
                c.record(r1.mul(&r1.adjoint()).dist(&id), tol, || format!("a = {a}: rho({g1}) not unitary"));
                let dev = w.rho(&g1.mul(&g2)).dist(&r1.mul(&w.rho(&g2)));
                c.record(dev, tol, || format!("a = {a}: rho({g1} {g2}) != rho({g1}) rho({g2})"));
            }
        }
        Ok(c)
    };
    run(c.clone()).unwrap_or_else(|e| c.fail_with(e))
}

/// |eta(2i)| = |eta(i/2)| / sqrt 2, eta(tau + 1) = e(1/24) eta(tau), and the
/// truncation bounds at every CM point of the given discriminants.
pub fn eta_consistency(discs: &[i64], tol: f64, ctx: &PrecisionContext) -> Check {
    let c = Check::new("eta self-consistency");
    let run = |mut c: Check| -> Result<Check> {
        let prec = ctx.bits;
        let e2 = dedekind_eta(&Complex::with_val(prec, (0, 2)), ctx)?;
        let eh = dedekind_eta(&Complex::with_val(prec, (0, Float::with_val(prec, 0.5))), ctx)?;
        let lhs = e2.log_abs.clone().exp();
        let rhs = eh.log_abs.clone().exp() / Float::with_val(prec, 2).sqrt();
        let dev = Float::with_val(prec, &lhs - &rhs).abs().to_f64();
        c.record(dev, tol, || format!("|eta(2i)| - |eta(i/2)|/sqrt 2 = {dev:.3e}"));
        for (x, y) in [(0.3, 0.9), (-0.45, 0.55), (0.1, 1.7)] {
            let tau = Complex::with_val(prec, (x, y));
            let t1 = Complex::with_val(prec, &tau + 1u32);
            let a = dedekind_eta(&tau, ctx)?.value.expect("direct evaluation");
            let b = dedekind_eta(&t1, ctx)?.value.expect("direct evaluation");
            let phase = e_of(&(Float::with_val(prec, 1) / 24u32));
            let dev = diff(&b, &Complex::with_val(prec, &a * &phase));
            c.record(dev, tol, || format!("periodicity at {x}+{y}i: {dev:.3e}"));
        }
        for &d in discs {
            let cg = ClassGroup::new(d)?;
            for b in 0..cg.h {
                let ev = dedekind_eta(&cg.cm_point(b, prec).tau, ctx)?;
                c.record(ev.tail_bound, tol, || format!("D = {d}, class {b}: tail bound {:.3e}", ev.tail_bound));
            }
        }
        Ok(c)
    };
    run(c.clone()).unwrap_or_else(|e| c.fail_with(e))
}

/// Component 0 of Theta_P(., h) is the scalar theta of [h]^2 [a], exactly.
pub fn exactness(d: i64, n_max: usize) -> Check {
    let c = Check::new(&format!("exactness D={d}"));
    let run = |mut c: Check| -> Result<Check> {
        let cg = ClassGroup::new(d)?;
        for a in 0..cg.h {
            for h in 0..cg.h {
                let vt = vv_theta(&cg, a, h, n_max * -d as usize)?;
                let comp = vt.component_zero_scalar();
                let th = theta_ideal(&cg, vt.acted_class, n_max)?;
                let want: Vec<i64> = (0..=n_max).map(|m| th.int_coeff(m).unwrap_or(i64::MIN)).collect();
                c.require(comp == want, || format!("a = {a}, h = {h}"));
            }
        }
        Ok(c)
    };
    run(c.clone()).unwrap_or_else(|e| c.fail_with(e))
}

/// Every check that applies to a single discriminant, at the acceptance
/// tolerances.
pub fn verify_discriminant(d: i64, ctx: &PrecisionContext) -> Result<Vec<Check>> {
    let cg = ClassGroup::new(d)?;
    let mut out = vec![class_group_oracle(&[(d, cg.h)])];
    let t = cg.disc.prime_factors.len() as u32;
    out.push(dimension_formula(d, (cg.h + (1usize << (t - 1))) / 2, 50));
    out.push(cuspidality(d));
    out.push(orthogonality(d, 1e-6, ctx));
    out.push(closed_form_agreement(d, 1e-5, ctx));
    out.push(lift_of_theta(d, 10, 30, 1e-8, ctx));
    out.push(lift_component_zero(d, 50, 1e-8, ctx));
    out.push(adjointness(d, 1e-5, ctx));
    if t == 1 {
        out.push(scalar_norm_chain(d, 1e-5, ctx));
    }
    out.push(weil_integrity(d, 20, 1e-20, ctx.bits));
    out.push(eta_consistency(&[d], 1e-30, ctx));
    out.push(exactness(d, 50));
    Ok(out)
}
