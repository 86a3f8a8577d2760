// SPDX-License-Identifier: Apache-2.0

//! Positive definite binary quadratic forms, Gauss composition and the
//! structure of the class group Cl_k with its characters.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::arith::{kronecker, FundamentalDiscriminant};
use crate::cyclo::{root_of_unity, Cyclo};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// The form composed with (x y; z w), i.e. (X, Y) -> f(xX + yY, zX + wY).
    pub fn transform(&self, x: i64, y: i64, z: i64, w: i64) -> Self {
        let a = self.eval(x, z);
        let b = 2 * self.a * x * y + self.b * (x * w + y * z) + 2 * self.c * z * w;
        let c = self.eval(y, w);
        Self { a, b, c }
    }

    pub fn inverse(&self) -> Self {
        reduce(&Self { a: self.a, b: -self.b, c: self.c })
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

pub fn principal_form(d: i64) -> QuadForm {
    QuadForm { a: 1, b: 1, c: (1 - d) / 4 }
}

/// Gauss reduction to the unique reduced representative.
pub fn reduce(f: &QuadForm) -> QuadForm {
    let d = f.disc();
    let (mut a, mut b) = (f.a, f.b);
    let mut c;
    assert!(a > 0 && d < 0, "form must be positive definite");
    loop {
        // b into (-a, a]
        let k = (a - b).div_floor(&(2 * a));
        b += 2 * a * k;
        c = (b * b - d) / (4 * a);
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return QuadForm { a, b, c };
    }
}

/// All reduced forms of discriminant D, ordered by (a, |b|, b descending).
pub fn enumerate_reduced(d: i64) -> Vec<QuadForm> {
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            if (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * a);
            let f = QuadForm { a, b, c };
            if c >= a && f.is_reduced() && a.gcd(&b).gcd(&c) == 1 {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort_by_key(|f| (f.a, f.b.abs(), -f.b));
    out
}

/// Composition of primitive forms of equal discriminant (Dirichlet/Shanks).
pub fn compose(f: &QuadForm, g: &QuadForm) -> QuadForm {
    let d = f.disc() as i128;
    assert_eq!(f.disc(), g.disc(), "discriminants differ");
    let (a1, b1) = (f.a as i128, f.b as i128);
    let (a2, b2) = (g.a as i128, g.b as i128);
    let s = (b1 + b2) / 2;
    let e1 = a1.extended_gcd(&a2);
    let e2 = e1.gcd.extended_gcd(&s);
    let e = e2.gcd;
    let (m1, m2, m3) = (e2.x * e1.x, e2.x * e1.y, e2.y);
    let a3 = a1 * a2 / (e * e);
    let num = m1 * a1 * b2 + m2 * a2 * b1 + m3 * (b1 * b2 + d) / 2;
    let b3 = (num / e).rem_euclid(2 * a3);
    let c3 = (b3 * b3 - d) / (4 * a3);
    reduce(&QuadForm { a: a3 as i64, b: b3 as i64, c: c3 as i64 })
}

/// Complex multiplication point attached to a form.
#[derive(Clone, Debug)]
pub struct CmPoint {
    pub tau: Complex,
    pub u: Float,
    pub v: Float,
    pub form: QuadForm,
}

/// The root of a tau^2 + b tau + c in the upper half plane.
pub fn cm_point(f: &QuadForm, prec: u32) -> CmPoint {
    let d = f.disc();
    let u = Float::with_val(prec, -f.b) / (2 * f.a);
    let v = Float::with_val(prec, -d).sqrt() / (2 * f.a);
    CmPoint { tau: Complex::with_val(prec, (&u, &v)), u, v, form: *f }
}

/// A character of the class group, given by exponents on the invariant
/// factor generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCharacter {
    pub exponents: Vec<i64>,
    /// values are zeta_m^{labels[class]} with m the group exponent
    pub m: i64,
    pub labels: Vec<i64>,
}

impl ClassCharacter {
    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Order of the character as an element of the dual group.
    pub fn order(&self) -> i64 {
        let g = self.labels.iter().fold(self.m, |g, &l| g.gcd(&l));
        self.m / g
    }

    pub fn value(&self, class: usize) -> Cyclo {
        Cyclo::root(self.m as usize, self.labels[class])
    }

    pub fn value_complex(&self, class: usize, prec: u32) -> Complex {
        root_of_unity(prec, self.labels[class], self.m)
    }
}

#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub disc: FundamentalDiscriminant,
    pub classes: Vec<QuadForm>,
    pub h: usize,
    pub cyclic_orders: Vec<i64>,
    /// class indices of the invariant-factor generators
    pub generators: Vec<usize>,
    /// exponents of each class on the generators
    pub coords: Vec<Vec<i64>>,
    table: Vec<Vec<usize>>,
    index: HashMap<QuadForm, usize>,
    inverse: Vec<usize>,
}

impl ClassGroup {
    pub fn new(d: i64) -> Result<Self> {
        let disc = FundamentalDiscriminant::new(d)?;
        let classes = enumerate_reduced(d);
        let h = classes.len();
        let index: HashMap<QuadForm, usize> = classes.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let table: Vec<Vec<usize>> = classes
            .iter()
            .map(|f| classes.iter().map(|g| index[&compose(f, g)]).collect())
            .collect();
        let inverse = classes.iter().map(|f| index[&f.inverse()]).collect();
        let mut g = Self {
            disc,
            classes,
            h,
            cyclic_orders: vec![],
            generators: vec![],
            coords: vec![],
            table,
            index,
            inverse,
        };
        let (gens, orders) = group_structure(&g.table);
        g.coords = discrete_logs(&g.table, &gens, &orders);
        g.generators = gens;
        g.cyclic_orders = orders;
        Ok(g)
    }

    pub fn d(&self) -> i64 {
        self.disc.d
    }

    /// Number of units w_k of the ring of integers.
    pub fn units(&self) -> i64 {
        if self.d() == -3 {
            6
        } else {
            2
        }
    }

    pub fn check_class(&self, i: usize) -> Result<()> {
        if i < self.h {
            Ok(())
        } else {
            Err(Error::BadClass { index: i, h: self.h })
        }
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn pow(&self, x: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(x) } else { x };
        (0..e.abs()).fold(0, |acc, _| self.mul(acc, base))
    }

    pub fn class_of(&self, f: &QuadForm) -> Result<usize> {
        if f.disc() != self.d() {
            return Err(Error::Invariant(format!("form {f} has discriminant {}", f.disc())));
        }
        Ok(self.index[&reduce(f)])
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Exponent of the group (largest invariant factor).
    pub fn exponent(&self) -> i64 {
        self.cyclic_orders.last().copied().unwrap_or(1)
    }

    /// [h]^2 [a].
    pub fn class_action(&self, h: usize, a: usize) -> usize {
        self.mul(self.mul(h, h), a)
    }

    /// All characters, trivial first, then lexicographic in the exponents.
    pub fn characters(&self) -> Vec<ClassCharacter> {
        let m = self.exponent();
        let mut out = Vec::with_capacity(self.h);
        let mut e = vec![0i64; self.cyclic_orders.len()];
        loop {
            let labels = self
                .coords
                .iter()
                .map(|x| {
                    x.iter()
                        .zip(&e)
                        .zip(&self.cyclic_orders)
                        .map(|((xi, ei), di)| xi * ei * (m / di))
                        .sum::<i64>()
                        .rem_euclid(m)
                })
                .collect();
            out.push(ClassCharacter { exponents: e.clone(), m, labels });
            // odometer, last coordinate fastest
            let mut i = e.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                e[i] += 1;
                if e[i] < self.cyclic_orders[i] {
                    break;
                }
                e[i] = 0;
            }
        }
    }

    /// Index of the conjugate character in `characters()`.
    pub fn conj_character_index(&self, idx: usize) -> usize {
        let chars = self.characters();
        let target: Vec<i64> = chars[idx]
            .exponents
            .iter()
            .zip(&self.cyclic_orders)
            .map(|(e, d)| (-e).rem_euclid(*d))
            .collect();
        chars.iter().position(|c| c.exponents == target).expect("closed under conjugation")
    }

    /// Indices of a system of representatives of characters modulo
    /// conjugation (the lexicographically smaller of each pair).
    pub fn conjugation_reps(&self) -> Vec<usize> {
        (0..self.h).filter(|&i| self.conj_character_index(i) >= i).collect()
    }

    pub fn squares(&self) -> Vec<usize> {
        let mut s: Vec<usize> = (0..self.h).map(|x| self.mul(x, x)).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn ambiguous_classes(&self) -> Vec<usize> {
        (0..self.h).filter(|&x| self.inv(x) == x).collect()
    }

    /// Genus of a: the coset a Cl^2.
    pub fn genus_of(&self, a: usize) -> Vec<usize> {
        let mut s: Vec<usize> = self.squares().into_iter().map(|q| self.mul(q, a)).collect();
        s.sort_unstable();
        s
    }

    /// The discriminants p* = (-1|p) p of the genus characters.
    pub fn genus_discriminants(&self) -> Vec<i64> {
        self.disc.prime_factors.iter().map(|&p| if p % 4 == 1 { p } else { -p }).collect()
    }

    /// Value of the genus character attached to the i-th prime on a class.
    pub fn genus_character(&self, i: usize, class: usize) -> Result<i64> {
        let pstar = self.genus_discriminants()[i];
        let f = self.coprime_representative(class, pstar.abs())?;
        Ok(kronecker(pstar, f.a))
    }

    /// A form in the class whose leading coefficient is coprime to M: the
    /// smallest such value represented primitively, reached by an explicit
    /// change of variables.
    pub fn coprime_representative(&self, class: usize, m: i64) -> Result<QuadForm> {
        self.check_class(class)?;
        let f = self.classes[class];
        let bound = 60i64;
        let mut best: Option<(i64, i64, i64)> = None;
        for x in -bound..=bound {
            for y in 0..=bound {
                if (y == 0 && x <= 0) || x.gcd(&y) != 1 {
                    continue;
                }
                let n = f.eval(x, y);
                if n.gcd(&m) != 1 {
                    continue;
                }
                let key = (n, x, y);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
        }
        let (_, x, y) = best.ok_or_else(|| Error::SearchExhausted(format!("no value of {f} coprime to {m}")))?;
        // (x s; y t) with x t - s y = 1
        let e = x.extended_gcd(&y);
        let (t, s) = (e.x * e.gcd, -e.y * e.gcd);
        debug_assert_eq!(x * t - s * y, 1);
        let mut g = f.transform(x, s, y, t);
        // normalize b into (-a, a]
        let k = (g.a - g.b).div_floor(&(2 * g.a));
        g = g.transform(1, k, 0, 1);
        debug_assert_eq!(self.class_of(&g)?, class);
        Ok(g)
    }

    pub fn cm_point(&self, class: usize, prec: u32) -> CmPoint {
        cm_point(&self.classes[class], prec)
    }

    /// Class number from the analytic formula -(w/(2|D|)) sum chi_D(n) n.
    pub fn class_number_formula(d: i64) -> i64 {
        let w = if d == -3 { 6 } else { 2 };
        let s: i64 = (1..-d).map(|n| kronecker(d, n) * n).sum();
        -w * s / (2 * -d)
    }
}

/// Invariant factor decomposition of a finite abelian group given by its
/// multiplication table (identity at index 0). Returns generators and orders
/// d1 | d2 | ... with all di > 1.
pub fn group_structure(table: &[Vec<usize>]) -> (Vec<usize>, Vec<i64>) {
    let h = table.len();
    if h == 1 {
        return (vec![], vec![]);
    }
    // greedy generators with a triangular relation matrix
    let mut repr: HashMap<usize, Vec<i64>> = HashMap::new();
    repr.insert(0, vec![]);
    let mut gens: Vec<usize> = Vec::new();
    let mut rels: Vec<Vec<i64>> = Vec::new();
    for x in 0..h {
        if repr.contains_key(&x) {
            continue;
        }
        let r = gens.len();
        // smallest k with x^k in the current subgroup
        let mut k = 1;
        let mut p = x;
        while !repr.contains_key(&p) {
            p = table[p][x];
            k += 1;
        }
        let mut rel = repr[&p].iter().map(|e| -e).collect::<Vec<_>>();
        rel.resize(r, 0);
        rel.push(k);
        gens.push(x);
        for row in rels.iter_mut() {
            row.push(0);
        }
        rels.push(rel);
        // extend the subgroup by powers of x
        let old: Vec<(usize, Vec<i64>)> = repr.iter().map(|(a, b)| (*a, b.clone())).collect();
        let mut pw = 0usize;
        for j in 0..k {
            for (elt, v) in &old {
                let mut v = v.clone();
                v.resize(r + 1, 0);
                v[r] = j;
                repr.entry(table[*elt][pw]).or_insert(v);
            }
            pw = table[pw][x];
        }
    }
    for v in repr.values_mut() {
        v.resize(gens.len(), 0);
    }
    let (diag, vinv) = smith_normal_form(&rels);
    let mut out_gens = Vec::new();
    let mut orders = Vec::new();
    for (j, &dj) in diag.iter().enumerate() {
        if dj == 1 {
            continue;
        }
        // new generator = prod g_i^{Vinv[j][i]}
        let mut elt = 0usize;
        for (i, &e) in vinv[j].iter().enumerate() {
            let base = gens[i];
            let e = e.rem_euclid(h as i64);
            for _ in 0..e {
                elt = table[elt][base];
            }
        }
        out_gens.push(elt);
        orders.push(dj);
    }
    (out_gens, orders)
}

/// Smith normal form of a square integer matrix. Returns the diagonal
/// (d1 | d2 | ..., all positive) and V^{-1}, where U R V = diag.
fn smith_normal_form(r: &[Vec<i64>]) -> (Vec<i64>, Vec<Vec<i64>>) {
    let n = r.len();
    let mut a: Vec<Vec<i64>> = r.to_vec();
    let mut vinv: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    // column op col_j += k col_i on A; Vinv gets row_i -= k row_j
    let col_add = |a: &mut Vec<Vec<i64>>, vinv: &mut Vec<Vec<i64>>, j: usize, i: usize, k: i64| {
        for row in a.iter_mut() {
            row[j] += k * row[i];
        }
        for c in 0..n {
            let t = vinv[j][c];
            vinv[i][c] -= k * t;
        }
    };
    let col_swap = |a: &mut Vec<Vec<i64>>, vinv: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        vinv.swap(i, j);
    };
    for t in 0..n {
        loop {
            // pivot: smallest nonzero |entry| in the trailing block
            let mut piv = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j] != 0 && piv.map_or(true, |(_, _, v): (usize, usize, i64)| a[i][j].abs() < v) {
                        piv = Some((i, j, a[i][j].abs()));
                    }
                }
            }
            let Some((pi, pj, _)) = piv else { break };
            a.swap(t, pi);
            col_swap(&mut a, &mut vinv, t, pj);
            let mut done = true;
            for i in t + 1..n {
                let q = a[i][t].div_floor(&a[t][t]);
                if q != 0 {
                    let row_t = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(&row_t) {
                        *x -= q * y;
                    }
                }
                if a[i][t] != 0 {
                    done = false;
                }
            }
            for j in t + 1..n {
                let q = a[t][j].div_floor(&a[t][t]);
                if q != 0 {
                    col_add(&mut a, &mut vinv, j, t, -q);
                }
                if a[t][j] != 0 {
                    done = false;
                }
            }
            if done {
                // divisibility of the remaining block
                let p = a[t][t];
                let bad = (t + 1..n).flat_map(|i| (t + 1..n).map(move |j| (i, j))).find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    Some((i, _)) => {
                        let row_i = a[i].clone();
                        for (x, y) in a[t].iter_mut().zip(&row_i) {
                            *x += y;
                        }
                    }
                    None => break,
                }
            }
        }
        if a[t][t] < 0 {
            for row in a.iter_mut() {
                row[t] = -row[t];
            }
            for c in 0..n {
                vinv[t][c] = -vinv[t][c];
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), vinv)
}

fn discrete_logs(table: &[Vec<usize>], gens: &[usize], orders: &[i64]) -> Vec<Vec<i64>> {
    let h = table.len();
    let mut coords = vec![Vec::new(); h];
    let r = gens.len();
    let mut e = vec![0i64; r];
    loop {
        let mut x = 0usize;
        for (g, &k) in gens.iter().zip(&e) {
            for _ in 0..k {
                x = table[x][*g];
            }
        }
        coords[x] = e.clone();
        let mut i = r;
        loop {
            if i == 0 {
                return coords;
            }
            i -= 1;
            e[i] += 1;
            if e[i] < orders[i] {
                break;
            }
            e[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_and_reduction() {
        assert_eq!(principal_form(-23), QuadForm::new(1, 1, 6));
        assert_eq!(principal_form(-7), QuadForm::new(1, 1, 2));
        assert_eq!(principal_form(-15), QuadForm::new(1, 1, 4));
        assert_eq!(reduce(&QuadForm::new(1, 1, 6)), QuadForm::new(1, 1, 6));
        assert_eq!(reduce(&QuadForm::new(2, 3, 4)), QuadForm::new(2, -1, 3));
        assert_eq!(reduce(&QuadForm::new(6, -1, 1)), QuadForm::new(1, 1, 6));
    }

    #[test]
    fn enumeration() {
        assert_eq!(enumerate_reduced(-7), vec![QuadForm::new(1, 1, 2)]);
        assert_eq!(
            enumerate_reduced(-23),
            vec![QuadForm::new(1, 1, 6), QuadForm::new(2, 1, 3), QuadForm::new(2, -1, 3)]
        );
        assert_eq!(enumerate_reduced(-15), vec![QuadForm::new(1, 1, 4), QuadForm::new(2, 1, 2)]);
    }

    #[test]
    fn composition_examples() {
        let f = QuadForm::new(2, 1, 3);
        assert_eq!(compose(&f, &QuadForm::new(2, -1, 3)), QuadForm::new(1, 1, 6));
        assert_eq!(compose(&f, &f), QuadForm::new(2, -1, 3));
        assert_eq!(compose(&principal_form(-23), &QuadForm::new(3, 5, 4)), reduce(&QuadForm::new(3, 5, 4)));
    }

    #[test]
    fn structures() {
        for (d, orders) in [(-23, vec![3]), (-15, vec![2]), (-47, vec![5]), (-7, vec![]), (-71, vec![7])] {
            let g = ClassGroup::new(d).unwrap();
            assert_eq!(g.cyclic_orders, orders, "D = {d}");
        }
        // a non-cyclic group: D = -4*... odd examples with Cl = (Z/2)^2 x ...
        let g = ClassGroup::new(-195).unwrap();
        assert_eq!(g.cyclic_orders, vec![2, 2]);
        let g = ClassGroup::new(-231).unwrap();
        assert_eq!(g.cyclic_orders, vec![2, 6]);
    }

    #[test]
    fn coords_are_consistent() {
        for d in [-23, -47, -195, -231, -255] {
            let g = ClassGroup::new(d).unwrap();
            for x in 0..g.h {
                let mut y = 0;
                for (gen, e) in g.generators.iter().zip(&g.coords[x]) {
                    y = g.mul(y, g.pow(*gen, *e));
                }
                assert_eq!(y, x);
            }
            let prod: i64 = g.cyclic_orders.iter().product();
            assert_eq!(prod as usize, g.h);
            for w in g.cyclic_orders.windows(2) {
                assert_eq!(w[1] % w[0], 0);
            }
        }
    }

    #[test]
    fn characters_examples() {
        let g = ClassGroup::new(-23).unwrap();
        let chars = g.characters();
        assert_eq!(chars.len(), 3);
        assert!(chars[0].is_trivial());
        assert_eq!(g.conjugation_reps().len(), 2);
        assert_eq!(ClassGroup::new(-7).unwrap().characters().len(), 1);
        for c in &chars[1..] {
            let mut s = Cyclo::zero(3);
            for x in 0..g.h {
                s = s.add(&c.value(x));
            }
            assert!(s.is_zero());
        }
    }

    #[test]
    fn class_action_examples() {
        let g = ClassGroup::new(-23).unwrap();
        assert_eq!(g.class_action(0, 1), 1);
        assert_eq!(g.class_action(1, 0), 2);
        assert_eq!(g.genus_of(0).len(), 3);
    }

    #[test]
    fn genus_examples() {
        let g = ClassGroup::new(-23).unwrap();
        assert_eq!(g.squares().len(), 3);
        assert_eq!(g.ambiguous_classes().len(), 1);
        let g = ClassGroup::new(-15).unwrap();
        assert_eq!(g.squares(), vec![0]);
        assert_eq!(g.ambiguous_classes().len(), 2);
        assert_eq!(g.genus_discriminants(), vec![-3, 5]);
    }

    #[test]
    fn coprime_representatives() {
        let g = ClassGroup::new(-15).unwrap();
        assert_eq!(g.coprime_representative(0, 15).unwrap(), QuadForm::new(1, 1, 4));
        let f = g.coprime_representative(1, 15).unwrap();
        assert_eq!(f.a.gcd(&15), 1);
        assert_eq!(g.class_of(&f).unwrap(), 1);
        let g = ClassGroup::new(-39).unwrap();
        for c in 0..g.h {
            let f = g.coprime_representative(c, 39).unwrap();
            assert_eq!(f.a.gcd(&39), 1);
            assert_eq!(g.class_of(&f).unwrap(), c);
        }
    }

    #[test]
    fn cm_points() {
        let p = cm_point(&QuadForm::new(1, 1, 6), 128);
        assert_eq!(p.u.to_f64(), -0.5);
        assert!((p.v.to_f64() - 23f64.sqrt() / 2.0).abs() < 1e-15);
        let lhs: Complex = Complex::with_val(128, p.tau.square_ref()) + &p.tau + 6;
        assert!(Float::with_val(128, lhs.abs_ref()).to_f64() < 1e-35);
    }
}
