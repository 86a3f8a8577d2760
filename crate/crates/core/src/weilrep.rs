// SPDX-License-Identifier: Apache-2.0

//! The cyclic discriminant form Z/|D| with Q(r) = A r^2 / |D|, its Weil
//! representation, orthogonal group and the lift of scalar forms on
//! Gamma0(|D|) to vector-valued forms.

use num_integer::Integer;
use num_rational::Ratio;
use rug::{Complex, Float};
use serde_json::{json, Map, Value};

use crate::arith::{
    best_coset_rep, coset_reps_gamma0, kronecker, legendre, p1_points, prime_factors, st_decompose, Gen,
    ModularMatrix,
};
use crate::cyclo::{root_of_unity, Cyclo};
use crate::error::{Error, Result};
use crate::ideallat::IdealLattice;
use crate::numerics::{
    abs_c, aliasing_estimate, e_of_complex, extraction_height, invert_samples, pi, PrecisionContext,
};
use crate::scalartheta::{fmt_float, NumericSeries, QExpansion};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiscriminantForm {
    pub d: i64,
    /// order |D| of the group
    pub n: i64,
    pub a: i64,
}

pub fn build_discform(d: i64, a: i64) -> Result<DiscriminantForm> {
    if d >= 0 || d % 2 == 0 {
        return Err(Error::NotFundamental(d));
    }
    let n = -d;
    if a <= 0 || a.gcd(&n) != 1 {
        return Err(Error::NotCoprime { a, d });
    }
    Ok(DiscriminantForm { d, n, a })
}

impl DiscriminantForm {
    /// N Q(r) mod N, i.e. A r^2 mod N.
    pub fn nq(&self, r: i64) -> i64 {
        (self.a * (r * r % self.n)).rem_euclid(self.n)
    }

    /// Q(r) mod 1 as a fraction with denominator N.
    pub fn q(&self, r: i64) -> (i64, i64) {
        (self.nq(r), self.n)
    }

    /// N (r, s) mod N, i.e. 2 A r s mod N.
    pub fn bilinear_num(&self, r: i64, s: i64) -> i64 {
        (2 * self.a % self.n * (r.rem_euclid(self.n) * s.rem_euclid(self.n) % self.n)).rem_euclid(self.n)
    }

    pub fn neg(&self, r: i64) -> i64 {
        (-r).rem_euclid(self.n)
    }

    /// Compares the multiset of N Q values with the quotient L'/L of the
    /// lattice attached to a form with leading coefficient A.
    pub fn check_against_lattice(&self, l: &IdealLattice) -> Result<()> {
        let dual = l.dual();
        if dual.index(l) != Ratio::from_integer(self.n as i128) {
            return Err(Error::Invariant("dual quotient has the wrong order".into()));
        }
        let [f1, f2] = dual.basis();
        let mut reps: Vec<crate::ideallat::FieldElement> = Vec::new();
        let mut lat_vals = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let v = f1.scale(Ratio::from_integer(i as i128)).add(&f2.scale(Ratio::from_integer(j as i128)));
                if reps.iter().any(|w| l.contains(&v.sub(w))) {
                    continue;
                }
                let nq = l.qform(&v) * (self.n as i128);
                if !nq.is_integer() {
                    return Err(Error::Invariant("N Q is not integral on the dual".into()));
                }
                lat_vals.push(nq.to_integer().rem_euclid(self.n as i128) as i64);
                reps.push(v);
            }
        }
        let mut ours: Vec<i64> = (0..self.n).map(|r| self.nq(r)).collect();
        ours.sort_unstable();
        lat_vals.sort_unstable();
        if ours != lat_vals {
            return Err(Error::Invariant(format!("Q multisets differ: {ours:?} vs {lat_vals:?}")));
        }
        Ok(())
    }
}

/// Dense complex square matrix, row major.
#[derive(Clone, Debug)]
pub struct CMat {
    pub n: usize,
    pub data: Vec<Complex>,
}

impl CMat {
    pub fn zeros(n: usize, prec: u32) -> Self {
        Self { n, data: vec![Complex::new(prec); n * n] }
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        let mut m = Self::zeros(n, prec);
        for i in 0..n {
            m.data[i * n + i] = Complex::with_val(prec, (1, 0));
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Complex {
        &self.data[i * self.n + j]
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let prec = self.data[0].prec().0;
        let mut out = Self::zeros(n, prec);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += Complex::with_val(prec, a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex]) -> Vec<Complex> {
        let prec = v[0].prec().0;
        (0..self.n)
            .map(|i| {
                let mut acc = Complex::new(prec);
                for (j, x) in v.iter().enumerate() {
                    acc += Complex::with_val(prec, self.get(i, j) * x);
                }
                acc
            })
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.get(i, j).clone().conj();
            }
        }
        out
    }

    /// Largest entrywise absolute difference.
    pub fn dist(&self, o: &Self) -> f64 {
        self.data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| abs_c(&Complex::with_val(a.prec(), a - b)).to_f64())
            .fold(0.0, f64::max)
    }
}

/// The Weil representation of SL2(Z) on C[Z/N] attached to a discriminant form.
#[derive(Clone, Debug)]
pub struct WeilRep {
    pub df: DiscriminantForm,
    pub prec: u32,
    s: CMat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    S,
    T,
}

impl WeilRep {
    pub fn new(df: DiscriminantForm, prec: u32) -> Self {
        let n = df.n as usize;
        let mut s = CMat::zeros(n, prec);
        // e(-(b+ - b-)/8) = -i for signature (2, 0)
        let phase = Complex::with_val(prec, (0, -1)) / Float::with_val(prec, df.n).sqrt();
        for mu in 0..n {
            for nu in 0..n {
                let e = root_of_unity(prec, -df.bilinear_num(mu as i64, nu as i64), df.n);
                s.data[nu * n + mu] = Complex::with_val(prec, &e * &phase);
            }
        }
        Self { df, prec, s }
    }

    pub fn dim(&self) -> usize {
        self.df.n as usize
    }

    /// e(k Q(r)).
    fn t_entry(&self, r: usize, k: i64) -> Complex {
        root_of_unity(self.prec, k * self.df.nq(r as i64) % self.df.n, self.df.n)
    }

    pub fn rho_generator(&self, which: Generator) -> CMat {
        match which {
            Generator::S => self.s.clone(),
            Generator::T => {
                let mut m = CMat::zeros(self.dim(), self.prec);
                for r in 0..self.dim() {
                    m.data[r * self.dim() + r] = self.t_entry(r, 1);
                }
                m
            }
        }
    }

    /// rho(gamma) as the product along an S, T word.
    pub fn rho(&self, g: &ModularMatrix) -> CMat {
        let n = self.dim();
        let mut m = CMat::identity(n, self.prec);
        for gen in st_decompose(g).0 {
            m = match gen {
                Gen::S => m.mul(&self.s),
                Gen::T(k) => {
                    let mut out = m.clone();
                    for j in 0..n {
                        let e = self.t_entry(j, k);
                        for i in 0..n {
                            out.data[i * n + j] *= &e;
                        }
                    }
                    out
                }
            };
        }
        m
    }

    /// rho(gamma) v without forming the matrix.
    pub fn apply(&self, g: &ModularMatrix, v: &[Complex]) -> Vec<Complex> {
        let mut out = v.to_vec();
        for gen in st_decompose(g).0.iter().rev() {
            out = match *gen {
                Gen::S => self.s.mul_vec(&out),
                Gen::T(k) => out.iter().enumerate().map(|(r, x)| Complex::with_val(self.prec, x * self.t_entry(r, k))).collect(),
            };
        }
        out
    }

    pub fn basis_vector(&self, r: usize) -> Vec<Complex> {
        let mut v = vec![Complex::new(self.prec); self.dim()];
        v[r] = Complex::with_val(self.prec, (1, 0));
        v
    }
}

/// chi_L(gamma) = (D | d) for gamma in Gamma0(|D|).
pub fn chi_l(g: &ModularMatrix, df: &DiscriminantForm) -> Result<i64> {
    if !g.in_gamma0(df.n) {
        return Err(Error::NotInGamma0(df.n));
    }
    Ok(kronecker(df.d, g.d))
}

/// Units u mod N with u^2 = 1, acting by r -> u r.
pub fn orthogonal_group(df: &DiscriminantForm) -> Vec<i64> {
    (1..=df.n).map(|u| u % df.n).filter(|&u| u.gcd(&df.n) == 1 && u * u % df.n == 1 % df.n).collect()
}

/// For each p | N, +1 if N Q on the p-part takes square values mod p, else -1.
pub fn epsilon_signs(df: &DiscriminantForm) -> Vec<i64> {
    prime_factors(df.n)
        .into_iter()
        .map(|p| {
            let mu = df.n / p;
            legendre(df.nq(mu) % p, p)
        })
        .collect()
}

/// #{mu : N Q(mu) = m mod N}.
pub fn nu(df: &DiscriminantForm, m: i64) -> usize {
    (0..df.n).filter(|&r| df.nq(r) == m.rem_euclid(df.n)).count()
}

/// Vector-valued q-expansion with exact coefficients: components[r][n] is
/// the coefficient of e(n tau / N) e_r.
#[derive(Clone, Debug)]
pub struct VectorValuedForm {
    pub df: DiscriminantForm,
    pub weight: (i64, i64),
    pub components: Vec<Vec<Cyclo>>,
}

impl VectorValuedForm {
    pub fn zero(df: DiscriminantForm, n_max: usize) -> Self {
        Self { df, weight: (1, 1), components: vec![vec![Cyclo::zero(1); n_max + 1]; df.n as usize] }
    }

    pub fn n_max(&self) -> usize {
        self.components[0].len() - 1
    }

    pub fn add(&self, o: &Self) -> Self {
        let components = self
            .components
            .iter()
            .zip(&o.components)
            .map(|(x, y)| x.iter().zip(y).map(|(a, b)| cyc_add(a, b)).collect())
            .collect();
        Self { components, ..self.clone() }
    }

    pub fn scale(&self, c: &Cyclo) -> Self {
        let components = self.components.iter().map(|x| x.iter().map(|a| cyc_mul(a, c)).collect()).collect();
        Self { components, ..self.clone() }
    }

    pub fn exact_eq(&self, o: &Self) -> bool {
        self.components.len() == o.components.len()
            && self.components.iter().zip(&o.components).all(|(x, y)| {
                x.len() == y.len() && x.iter().zip(y).all(|(a, b)| cyc_add(a, &b.neg()).is_zero())
            })
    }

    /// Every nonzero coefficient of component r sits at n = N Q(r) mod N.
    pub fn support_ok(&self) -> bool {
        self.components.iter().enumerate().all(|(r, c)| {
            c.iter().enumerate().all(|(n, x)| x.is_zero() || n as i64 % self.df.n == self.df.nq(r as i64))
        })
    }

    pub fn to_numeric(&self, prec: u32) -> NumericVvForm {
        NumericVvForm {
            df: self.df,
            components: self.components.iter().map(|c| c.iter().map(|x| x.to_complex(prec)).collect()).collect(),
            error: 0.0,
            flagged: false,
        }
    }

    /// Component r as a scalar expansion in e(n tau / N).
    pub fn component(&self, r: usize) -> QExpansion {
        QExpansion {
            n_denom: self.df.n,
            coeffs: self.components[r].clone(),
            weight: self.weight,
            disc: self.df.d,
            label: format!("component {r}"),
        }
    }

    pub fn to_json(&self, prec: u32) -> Value {
        self.to_numeric(prec).to_json()
    }
}

fn cyc_add(a: &Cyclo, b: &Cyclo) -> Cyclo {
    let m = a.modulus().lcm(&b.modulus());
    a.lift(m).add(&b.lift(m))
}

fn cyc_mul(a: &Cyclo, b: &Cyclo) -> Cyclo {
    let m = a.modulus().lcm(&b.modulus());
    a.lift(m).mul(&b.lift(m))
}

/// Vector-valued q-expansion with floating-point coefficients (lift output).
#[derive(Clone, Debug)]
pub struct NumericVvForm {
    pub df: DiscriminantForm,
    pub components: Vec<Vec<Complex>>,
    /// estimated coefficient error
    pub error: f64,
    pub flagged: bool,
}

impl NumericVvForm {
    pub fn n_max(&self) -> usize {
        self.components[0].len() - 1
    }

    /// Evaluation of every component at tau. Component r is
    /// e(NQ(r) tau / N) sum_m c_{NQ(r) + N m} e(m tau).
    pub fn evaluate(&self, tau: &Complex) -> Result<Vec<Complex>> {
        let v = tau.imag().to_f64();
        if v <= 0.0 {
            return Err(Error::Domain("Im(tau) must be positive".into()));
        }
        let prec = tau.prec().0;
        let n = self.df.n as usize;
        let q = e_of_complex(tau);
        let q_frac = e_of_complex(&Complex::with_val(prec, tau / self.df.n));
        let mut frac_pows = Vec::with_capacity(n);
        let mut p = Complex::with_val(prec, (1, 0));
        for _ in 0..n {
            frac_pows.push(p.clone());
            p *= &q_frac;
        }
        let mut growth = 0.0f64;
        let mut out = Vec::with_capacity(n);
        for (r, c) in self.components.iter().enumerate() {
            let off = self.df.nq(r as i64) as usize;
            let mut acc = Complex::new(prec);
            for idx in (off..c.len()).step_by(n).rev() {
                acc *= &q;
                acc += &c[idx];
                growth = growth.max(abs_c(&c[idx]).to_f64() / (idx / n).max(1) as f64);
            }
            out.push(acc * &frac_pows[off]);
        }
        // terms with m > M, M = n_max / N, bounded by C m e^{-2 pi m v}
        let rr = (-2.0 * std::f64::consts::PI * v).exp();
        let k1 = (self.n_max() / n + 1) as f64;
        let tail = growth * rr.powf(k1) * (k1 / (1.0 - rr) + rr / (1.0 - rr).powi(2));
        if tail > 2f64.powf(-(prec as f64) * 0.3) {
            return Err(Error::Truncation(format!("tail {tail:.2e} at Im tau = {v:.4}")));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let mut comps = Map::new();
        for (r, c) in self.components.iter().enumerate() {
            let list: Vec<Value> = c
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(n, x)| json!([n, fmt_float(x.real()), fmt_float(x.imag())]))
                .collect();
            if !list.is_empty() {
                comps.insert(r.to_string(), Value::Array(list));
            }
        }
        json!({ "disc": self.df.d, "A": self.df.a, "weight": "1", "components": comps, "error": self.error })
    }
}

/// sum over sigma in O(A) of F^sigma, (F^sigma)_r = F_{u r}.
pub fn symmetrize(f: &VectorValuedForm) -> VectorValuedForm {
    let n = f.df.n;
    let mut out = VectorValuedForm { components: vec![], ..f.clone() };
    for r in 0..n {
        let mut acc: Vec<Cyclo> = vec![Cyclo::zero(1); f.n_max() + 1];
        for u in orthogonal_group(&f.df) {
            let src = &f.components[(u * r % n) as usize];
            acc = acc.iter().zip(src).map(|(a, b)| cyc_add(a, b)).collect();
        }
        out.components.push(acc);
    }
    out
}

/// S_L(f)(tau) = sum_gamma j(gamma, tau)^{-k} f(gamma tau) rho(gamma^{-1}) e_0
/// over the given right coset representatives of Gamma0(N).
pub fn lift_eval_with_reps(
    f: &NumericSeries,
    weil: &WeilRep,
    reps: &[ModularMatrix],
    tau: &Complex,
) -> Result<Vec<Complex>> {
    let prec = weil.prec;
    let e0 = weil.basis_vector(0);
    let mut acc = vec![Complex::new(prec); weil.dim()];
    for g in reps {
        let gt = g.act(tau);
        let ev = f.evaluate(&gt)?;
        if ev.flagged {
            return Err(Error::Truncation(format!(
                "scalar form needs more coefficients at Im = {:.4}",
                gt.imag().to_f64()
            )));
        }
        let scal = ev.value / g.j(tau);
        let v = weil.apply(&g.inverse(), &e0);
        for (a, x) in acc.iter_mut().zip(v) {
            *a += Complex::with_val(prec, &scal * x);
        }
    }
    Ok(acc)
}

/// The lift at tau, using for each coset the representative that maximizes
/// Im(gamma tau).
pub fn lift_eval(f: &NumericSeries, weil: &WeilRep, tau: &Complex) -> Result<Vec<Complex>> {
    let n = weil.df.n;
    let (x, y) = (tau.real().to_f64(), tau.imag().to_f64());
    let reps: Vec<ModularMatrix> = p1_points(n)?.into_iter().map(|(c, d)| best_coset_rep(c, d, n, x, y)).collect();
    lift_eval_with_reps(f, weil, &reps, tau)
}

/// Canonical coset representatives, re-exported for callers that need a
/// fixed system.
pub fn canonical_reps(n: i64) -> Result<Vec<ModularMatrix>> {
    coset_reps_gamma0(n)
}

/// Coefficients of every component of S_L(f) up to exponent n_max / N,
/// extracted from samples along one horizontal line.
pub fn lift_coefficients(f: &NumericSeries, weil: &WeilRep, n_max: usize, ctx: &PrecisionContext) -> Result<NumericVvForm> {
    let df = weil.df;
    let n = df.n;
    let prec = weil.prec;
    // component r = e(Q(r) tau) * (1-periodic series in e(m tau)), n = N m + NQ(r)
    let m_max = n_max / n as usize + 1;
    let samples = 4 * (m_max + 1);
    let v0 = extraction_height(m_max, ctx);
    let vv = Float::with_val(prec, v0);
    let mut values: Vec<Vec<Complex>> = vec![Vec::with_capacity(samples); n as usize];
    for s in 0..samples {
        let x = Float::with_val(prec, s as u32) / samples as u32;
        let tau = Complex::with_val(prec, (&x, &vv));
        let lifted = lift_eval(f, weil, &tau)?;
        for (r, val) in lifted.into_iter().enumerate() {
            // multiply by e(-Q(r) tau)
            let qr = Float::with_val(prec, df.nq(r as i64)) / n as u32;
            let arg = Complex::with_val(prec, &tau * -qr);
            values[r].push(val * e_of_complex(&arg));
        }
    }
    let growth = vv * 2u32 * pi(prec);
    let mut components = vec![vec![Complex::new(prec); n_max + 1]; n as usize];
    let mut error = 0.0f64;
    let mut flagged = false;
    for (r, samp) in values.iter().enumerate() {
        let coeffs = invert_samples(samp, m_max, &growth, prec);
        let (est, fl) = aliasing_estimate(&coeffs, m_max, v0, samples, ctx);
        error = error.max(est);
        flagged |= fl;
        for (m, c) in coeffs.into_iter().enumerate() {
            let idx = n as usize * m + df.nq(r as i64) as usize;
            if idx <= n_max {
                components[r][idx] = c;
            }
        }
    }
    // half the working precision survives the e^{2 pi m v0} rescaling
    error = error.max(2f64.powf(-(ctx.bits as f64) / 2.0 + 8.0));
    Ok(NumericVvForm { df, components, error, flagged })
}
