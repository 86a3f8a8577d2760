// SPDX-License-Identifier: Apache-2.0

//! Fractional ideals of k = Q(sqrt D) as exact rank-2 lattices in the basis
//! (1, omega), omega = (1 + sqrt D)/2, with the quadratic form N(x)/N(a).

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

use crate::classgroup::QuadForm;
use crate::error::{Error, Result};

pub type Q = Ratio<i128>;

fn q(n: i128) -> Q {
    Q::from_integer(n)
}

/// x + y*omega.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub x: Q,
    pub y: Q,
}

impl FieldElement {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    pub fn int(x: i128, y: i128) -> Self {
        Self { x: q(x), y: q(y) }
    }

    pub fn zero() -> Self {
        Self::int(0, 0)
    }

    /// sqrt(D) = 2 omega - 1.
    pub fn sqrt_d() -> Self {
        Self::int(-1, 2)
    }

    /// 1/sqrt(D) = (2 omega - 1)/D.
    pub fn inv_sqrt_d(d: i64) -> Self {
        let d = d as i128;
        Self { x: Q::new(-1, d), y: Q::new(2, d) }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { x: self.x + o.x, y: self.y + o.y }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { x: self.x - o.x, y: self.y - o.y }
    }

    pub fn neg(&self) -> Self {
        Self { x: -self.x, y: -self.y }
    }

    pub fn scale(&self, c: Q) -> Self {
        Self { x: self.x * c, y: self.y * c }
    }

    pub fn mul(&self, o: &Self, d: i64) -> Self {
        // omega^2 = omega + (D - 1)/4
        let e = Q::new((d as i128 - 1) / 4, 1);
        let yy = self.y * o.y;
        Self { x: self.x * o.x + yy * e, y: self.x * o.y + self.y * o.x + yy }
    }

    pub fn conj(&self) -> Self {
        Self { x: self.x + self.y, y: -self.y }
    }

    pub fn norm(&self, d: i64) -> Q {
        self.x * self.x + self.x * self.y + self.y * self.y * Q::new((1 - d as i128) / 4, 1)
    }

    pub fn trace(&self) -> Q {
        self.x * 2 + self.y
    }

    /// Tr(x conj(y)) = N(x+y) - N(x) - N(y).
    pub fn trace_pairing(&self, o: &Self, d: i64) -> Q {
        self.add(o).norm(d) - self.norm(d) - o.norm(d)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Floating approximation (re, im) of the complex number.
    pub fn to_f64(&self, d: i64) -> (f64, f64) {
        let x = *self.x.numer() as f64 / *self.x.denom() as f64;
        let y = *self.y.numer() as f64 / *self.y.denom() as f64;
        (x + y / 2.0, y * (-d as f64).sqrt() / 2.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}w", self.x, self.y)
    }
}

/// A full-rank lattice {(p,0), (q,r)}/den in omega-coordinates, in Hermite
/// normal form with gcd(den, p, q, r) = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IdealLattice {
    pub d: i64,
    pub den: i128,
    pub p: i128,
    pub q: i128,
    pub r: i128,
}

fn hnf(gens: &[(i128, i128)]) -> (i128, i128, i128) {
    let (mut p, mut qq, mut r) = (0i128, 0i128, 0i128);
    for &(x, y) in gens {
        if y == 0 {
            p = p.gcd(&x);
        } else if r == 0 {
            qq = x;
            r = y;
        } else {
            let e = r.extended_gcd(&y);
            let g = e.gcd;
            let nq = e.x * qq + e.y * x;
            let z = (y / g) * qq - (r / g) * x;
            p = p.gcd(&z);
            qq = nq;
            r = g;
        }
        if r < 0 {
            qq = -qq;
            r = -r;
        }
    }
    if p > 0 {
        qq = qq.rem_euclid(p);
    }
    (p, qq, r)
}

impl IdealLattice {
    /// The Z-span of the given elements; must have rank 2.
    pub fn from_generators(d: i64, gens: &[FieldElement]) -> Result<Self> {
        let den = gens.iter().fold(1i128, |l, g| l.lcm(g.x.denom()).lcm(g.y.denom()));
        let ints: Vec<(i128, i128)> = gens
            .iter()
            .map(|g| ((g.x * den).to_integer(), (g.y * den).to_integer()))
            .collect();
        let (p, qq, r) = hnf(&ints);
        if p == 0 || r == 0 {
            return Err(Error::Invariant("generators do not span a full lattice".into()));
        }
        let g = den.gcd(&p).gcd(&qq).gcd(&r);
        Ok(Self { d, den: den / g, p: p / g, q: qq / g, r: r / g })
    }

    pub fn unit(d: i64) -> Self {
        Self { d, den: 1, p: 1, q: 0, r: 1 }
    }

    pub fn basis(&self) -> [FieldElement; 2] {
        [
            FieldElement::new(Q::new(self.p, self.den), q(0)),
            FieldElement::new(Q::new(self.q, self.den), Q::new(self.r, self.den)),
        ]
    }

    /// Covolume relative to O_D; equals N(a) for fractional ideals.
    pub fn covolume(&self) -> Q {
        Q::new(self.p * self.r, self.den * self.den)
    }

    pub fn norm(&self) -> Q {
        self.covolume()
    }

    /// Coordinates of v on the basis, if integral.
    pub fn coords(&self, v: &FieldElement) -> (Q, Q) {
        let yv = v.y * self.den;
        let t = yv / q(self.r);
        let s = (v.x * self.den - t * self.q) / q(self.p);
        (s, t)
    }

    pub fn contains(&self, v: &FieldElement) -> bool {
        let (s, t) = self.coords(v);
        s.is_integer() && t.is_integer()
    }

    pub fn contains_lattice(&self, o: &Self) -> bool {
        o.basis().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, o: &Self) -> Self {
        let mut g = self.basis().to_vec();
        g.extend(o.basis());
        Self::from_generators(self.d, &g).expect("sum of full lattices")
    }

    pub fn multiply(&self, o: &Self) -> Self {
        let mut g = Vec::new();
        for x in self.basis() {
            for y in o.basis() {
                g.push(x.mul(&y, self.d));
            }
        }
        Self::from_generators(self.d, &g).expect("product of full lattices")
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let g: Vec<_> = self.basis().iter().map(|x| x.mul(c, self.d)).collect();
        Self::from_generators(self.d, &g).expect("nonzero scalar")
    }

    pub fn scale_q(&self, c: Q) -> Self {
        self.scale(&FieldElement::new(c, q(0)))
    }

    pub fn conj(&self) -> Self {
        let g: Vec<_> = self.basis().iter().map(|x| x.conj()).collect();
        Self::from_generators(self.d, &g).expect("conjugate lattice")
    }

    /// Dual with respect to the standard pairing of omega-coordinates.
    fn dual_std(&self) -> Self {
        let [e1, e2] = self.basis();
        // rows of B^{-T} for B with columns e1, e2
        let det = e1.x * e2.y - e2.x * e1.y;
        let f1 = FieldElement::new(e2.y / det, -e2.x / det);
        let f2 = FieldElement::new(-e1.y / det, e1.x / det);
        Self::from_generators(self.d, &[f1, f2]).expect("dual lattice")
    }

    pub fn intersect(&self, o: &Self) -> Self {
        self.dual_std().sum(&o.dual_std()).dual_std()
    }

    /// [self : sub] for sub contained in self.
    pub fn index(&self, sub: &Self) -> Q {
        sub.covolume() / self.covolume()
    }

    pub fn is_o_module(&self) -> bool {
        let w = FieldElement::int(0, 1);
        self.basis().iter().all(|x| self.contains(&x.mul(&w, self.d)))
    }

    /// Gram matrix of the bilinear form Tr(x conj y)/N(a) on the basis.
    pub fn gram(&self) -> [[Q; 2]; 2] {
        let b = self.basis();
        let n = self.norm();
        let mut g = [[q(0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                g[i][j] = b[i].trace_pairing(&b[j], self.d) / n;
            }
        }
        g
    }

    /// Q(x) = N(x)/N(a).
    pub fn qform(&self, x: &FieldElement) -> Q {
        x.norm(self.d) / self.norm()
    }

    /// Dual lattice for the trace form Tr(x conj y)/N(a).
    pub fn dual(&self) -> Self {
        let g = self.gram();
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        let inv = [[g[1][1] / det, -g[0][1] / det], [-g[1][0] / det, g[0][0] / det]];
        let b = self.basis();
        let f: Vec<_> = (0..2).map(|i| b[0].scale(inv[i][0]).add(&b[1].scale(inv[i][1]))).collect();
        Self::from_generators(self.d, &f).expect("dual lattice")
    }

    /// The lattice Z a + Z (-b + sqrt D)/2 attached to a form [a, b, c].
    pub fn from_form(f: &QuadForm) -> Self {
        let d = f.disc();
        let gens = [FieldElement::int(f.a as i128, 0), FieldElement::int((-f.b as i128 - 1) / 2, 1)];
        Self::from_generators(d, &gens).expect("form lattice")
    }

    /// Inverse of `from_form` on classes: [Q(e1), -B(e1, e2), Q(e2)] on the HNF basis.
    pub fn to_form(&self) -> QuadForm {
        let g = self.gram();
        let half = |x: Q| -> i64 { (x / 2).to_integer() as i64 };
        QuadForm::new(half(g[0][0]), -g[0][1].to_integer() as i64, half(g[1][1]))
    }
}

impl fmt::Display for IdealLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<({}, 0), ({}, {})>/{}", self.p, self.q, self.r, self.den)
    }
}

/// (1/sqrt D) O_D, the inverse different.
pub fn inverse_different(d: i64) -> IdealLattice {
    IdealLattice::unit(d).scale(&FieldElement::inv_sqrt_d(d))
}

/// All points of a positive definite integral binary form with value at most
/// `bound`, as (x, y, value), ordered by (value, x, y).
pub fn enumerate_integral_form(a: i64, b: i64, c: i64, bound: i64) -> Vec<(i64, i64, i64)> {
    let det = 4 * a * c - b * b;
    assert!(a > 0 && det > 0, "form must be positive definite");
    let mut out = Vec::new();
    if bound < 0 {
        return out;
    }
    // 4a f = (2a x + b y)^2 + det y^2
    let ymax = ((4 * a * bound) as f64 / det as f64).sqrt().floor() as i64 + 1;
    for y in -ymax..=ymax {
        let rest = 4 * a * bound - det * y * y;
        if rest < 0 {
            continue;
        }
        let s = (rest as f64).sqrt() + 1.0;
        let lo = ((-s - (b * y) as f64) / (2 * a) as f64).floor() as i64;
        let hi = ((s - (b * y) as f64) / (2 * a) as f64).ceil() as i64;
        for x in lo..=hi {
            let v = a * x * x + b * x * y + c * y * y;
            if v <= bound {
                out.push((x, y, v));
            }
        }
    }
    out.sort_by_key(|&(x, y, v)| (v, x, y));
    out
}

/// All lambda in offset + L with Q(lambda) <= bound, Q = N(.)/N(L), sorted by
/// (Q, x, y) where lambda = x + y omega.
pub fn enumerate_by_norm(l: &IdealLattice, offset: &FieldElement, bound: Q) -> Vec<FieldElement> {
    let g = l.gram();
    let (o1, o2) = l.coords(offset);
    let gf = |x: Q| *x.numer() as f64 / *x.denom() as f64;
    let (g11, g12, g22) = (gf(g[0][0]), gf(g[0][1]), gf(g[1][1]));
    let det = g11 * g22 - g12 * g12;
    let bnd = gf(bound) * 2.0;
    // Y = t + o2 with (1/2) v^T G v <= bound
    let ymax = (bnd * g11 / det).sqrt() + 1e-9;
    let (o1f, o2f) = (gf(o1), gf(o2));
    let mut out = Vec::new();
    let [e1, e2] = l.basis();
    let tlo = (-ymax - o2f).floor() as i128 - 1;
    let thi = (ymax - o2f).ceil() as i128 + 1;
    for t in tlo..=thi {
        let yv = t as f64 + o2f;
        let rest = bnd - det / g11 * yv * yv;
        if rest < -1e-9 {
            continue;
        }
        let xc = -g12 / g11 * yv;
        let xr = (rest.max(0.0) / g11).sqrt() + 1e-9;
        let slo = (xc - xr - o1f).floor() as i128 - 1;
        let shi = (xc + xr - o1f).ceil() as i128 + 1;
        for s in slo..=shi {
            let v = offset.add(&e1.scale(q(s))).add(&e2.scale(q(t)));
            if l.qform(&v) <= bound {
                out.push(v);
            }
        }
    }
    out.sort_by(|a, b| {
        l.qform(a).cmp(&l.qform(b)).then(a.x.cmp(&b.x)).then(a.y.cmp(&b.y))
    });
    out.dedup();
    out
}

/// The coset of the transported discriminant-group element: all lambda in
/// `ambient` with lambda - offset in `sub`.
#[derive(Clone, Debug)]
pub struct CosetSpec {
    pub ambient: IdealLattice,
    pub sub: IdealLattice,
    pub offset: FieldElement,
}

impl CosetSpec {
    pub fn contains(&self, v: &FieldElement) -> bool {
        self.ambient.contains(v) && self.sub.contains(&v.sub(&self.offset))
    }
}

/// Transport of beta + a_src to the dual of a_dst, where a_dst = c a_src and
/// c = b conj(b)^{-1} with b coprime to D. Locally at p | D the two dual
/// quotients coincide; away from D there is no condition. Membership is
/// lambda - beta in Lambda_M = (a_src cap a_dst) + M (a_src + a_dst), which
/// equals a_src + a_dst whenever M is coprime to the index of the
/// intersection in the sum.
pub fn coset_transport(a_src: &IdealLattice, a_dst: &IdealLattice, beta: &FieldElement) -> Result<CosetSpec> {
    coset_transport_with(a_src, a_dst, beta, 1)
}

pub fn coset_transport_with(
    a_src: &IdealLattice,
    a_dst: &IdealLattice,
    beta: &FieldElement,
    m: i128,
) -> Result<CosetSpec> {
    let d = a_src.d;
    let sum = a_src.sum(a_dst);
    let cap = a_src.intersect(a_dst);
    let idx = sum.index(&cap);
    if !idx.is_integer() {
        return Err(Error::Invariant("intersection index is not integral".into()));
    }
    let idx = idx.to_integer();
    if idx.gcd(&(-d as i128)) != 1 {
        return Err(Error::Invariant(format!(
            "index {idx} of a_src cap a_dst in a_src + a_dst is not coprime to {}",
            -d
        )));
    }
    if idx.gcd(&m) != 1 {
        return Err(Error::Invariant(format!("multiplier {m} is not coprime to the index {idx}")));
    }
    let sub = cap.sum(&sum.scale_q(q(m)));
    let inv_diff = inverse_different(d);
    if !a_src.multiply(&inv_diff).contains(beta) {
        return Err(Error::Invariant("offset is not in the dual lattice".into()));
    }
    Ok(CosetSpec { ambient: a_dst.multiply(&inv_diff), sub, offset: *beta })
}

impl PartialOrd for IdealLattice {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IdealLattice {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.d, self.den, self.p, self.q, self.r).cmp(&(o.d, o.den, o.p, o.q, o.r))
    }
}
