// SPDX-License-Identifier: Apache-2.0

//! Vector-valued theta functions Theta_P(tau, h) of the lattices P = a with
//! Q(x) = N(x)/N(a), their character sums and the span they generate.

use num_rational::Ratio;
use num_traits::Zero;
use serde::Serialize;

use crate::classgroup::{ClassCharacter, ClassGroup, QuadForm};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::ideallat::{coset_transport, enumerate_integral_form, inverse_different, FieldElement, IdealLattice};
use crate::weilrep::{build_discform, symmetrize, DiscriminantForm, VectorValuedForm};

#[derive(Clone, Debug)]
pub struct VvTheta {
    pub a_class: usize,
    pub h_class: usize,
    /// integral representative of h, coprime to D
    pub b_form: QuadForm,
    /// [h]^2 [a], the class of component 0
    pub acted_class: usize,
    pub form: VectorValuedForm,
}

impl VvTheta {
    /// Component 0 rewritten in e(m tau), m = n / N (its support is N Z).
    pub fn component_zero_scalar(&self) -> Vec<i64> {
        let n = self.form.df.n as usize;
        self.form.components[0].iter().step_by(n).map(|x| x.as_rational().map_or(0, |(p, _)| p)).collect()
    }
}

/// The lattice P attached to a class: the ideal of its coprime-to-D
/// representative, together with the discriminant form it induces.
pub fn base_lattice(cg: &ClassGroup, a_class: usize) -> Result<(IdealLattice, DiscriminantForm)> {
    let n = -cg.d();
    let f = cg.coprime_representative(a_class, n)?;
    Ok((IdealLattice::from_form(&f), build_discform(cg.d(), f.a)?))
}

/// Theta_P(tau, h) = sum_beta sum_{lambda in h(P + beta)} e(Q(lambda) tau) e_beta.
pub fn vv_theta(cg: &ClassGroup, a_class: usize, h_class: usize, n_max: usize) -> Result<VvTheta> {
    cg.check_class(h_class)?;
    let d = cg.d();
    let n = -d;
    let (a, df) = base_lattice(cg, a_class)?;
    let fb = cg.coprime_representative(h_class, n)?;
    let b = IdealLattice::from_form(&fb);
    // c = b^2 a / N(b), in the class [h]^2 [a]; N(c) = N(a)
    let c = b.multiply(&b).multiply(&a).scale_q(Ratio::new(1, fb.a as i128));
    let g = FieldElement::inv_sqrt_d(d).scale(Ratio::from_integer(df.a as i128));
    let spec = coset_transport(&a, &c, &g)?;
    let cdual = c.multiply(&inverse_different(d));
    let basis = cdual.basis();
    // label of each basis vector: the r with e - r g in a + c
    let mut labels = [0i64; 2];
    for (slot, e) in labels.iter_mut().zip(&basis) {
        *slot = (0..n)
            .find(|&r| spec.sub.contains(&e.sub(&g.scale(Ratio::from_integer(r as i128)))))
            .ok_or_else(|| Error::Invariant(format!("no discriminant label for basis vector {e}")))?;
    }
    // N Q on the basis of c / sqrt D
    let nq = |x: &FieldElement| a.qform(x) * (n as i128);
    let qa = nq(&basis[0]);
    let qc = nq(&basis[1]);
    let qb = nq(&basis[0].add(&basis[1])) - qa - qc;
    if !(qa.is_integer() && qb.is_integer() && qc.is_integer()) {
        return Err(Error::Invariant("N Q is not integral on the transported dual".into()));
    }
    let (qa, qb, qc) = (qa.to_integer() as i64, qb.to_integer() as i64, qc.to_integer() as i64);
    let mut form = VectorValuedForm::zero(df, n_max);
    for (x, y, v) in enumerate_integral_form(qa, qb, qc, n_max as i64) {
        let r = (x * labels[0] + y * labels[1]).rem_euclid(n) as usize;
        let slot = &mut form.components[r][v as usize];
        *slot = slot.add(&Cyclo::from_int(1, 1));
    }
    if !form.support_ok() {
        return Err(Error::Invariant("theta coefficients violate the support rule".into()));
    }
    Ok(VvTheta { a_class, h_class, b_form: fb, acted_class: cg.class_action(h_class, a_class), form })
}

/// Theta_P(tau, psi) = sum_h psi(h) Theta_P(tau, h).
pub fn vv_theta_psi(cg: &ClassGroup, a_class: usize, psi: &ClassCharacter, n_max: usize) -> Result<VectorValuedForm> {
    let (_, df) = base_lattice(cg, a_class)?;
    let mut acc = VectorValuedForm::zero(df, n_max);
    for h in 0..cg.h {
        let th = vv_theta(cg, a_class, h, n_max)?;
        acc = acc.add(&th.form.scale(&psi.value(h)));
    }
    Ok(acc)
}

pub fn vv_theta_sym(cg: &ClassGroup, a_class: usize, h_class: usize, n_max: usize) -> Result<VectorValuedForm> {
    Ok(symmetrize(&vv_theta(cg, a_class, h_class, n_max)?.form))
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaSpace {
    pub disc: i64,
    pub a_class: usize,
    pub n_max: usize,
    pub rank: usize,
    pub rank_half: usize,
    /// (h + 2^{t-1}) / 2
    pub dim_formula: usize,
    /// indices of the characters psi in C (one per conjugate pair)
    pub basis: Vec<usize>,
}

impl ThetaSpace {
    pub fn stable(&self) -> bool {
        self.rank == self.rank_half
    }
}

/// Rank of the coefficient matrix of {Theta_P(., h)}, at n_max and n_max / 2.
pub fn theta_space(cg: &ClassGroup, a_class: usize, n_max: usize) -> Result<ThetaSpace> {
    let thetas: Vec<VvTheta> = (0..cg.h).map(|h| vv_theta(cg, a_class, h, n_max)).collect::<Result<_>>()?;
    let rows = |cut: usize| -> Vec<Vec<i64>> {
        thetas
            .iter()
            .map(|t| {
                t.form
                    .components
                    .iter()
                    .flat_map(|c| c.iter().take(cut + 1).map(|x| x.as_rational().map_or(0, |(p, _)| p)))
                    .collect()
            })
            .collect()
    };
    let rank = rational_rank(&rows(n_max));
    let rank_half = rational_rank(&rows(n_max / 2));
    let t = cg.disc.prime_factors.len() as u32;
    let dim_formula = (cg.h + (1usize << (t - 1))) / 2;
    if rank != rank_half {
        return Err(Error::Truncation(format!("rank {rank_half} at n_max/2 but {rank} at n_max; increase n_max")));
    }
    Ok(ThetaSpace { disc: cg.d(), a_class, n_max, rank, rank_half, dim_formula, basis: cg.conjugation_reps() })
}

/// Rank over Q by Gaussian elimination with exact fractions.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Ratio<i128>>> =
        rows.iter().map(|r| r.iter().map(|&x| Ratio::from_integer(x as i128)).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, piv);
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col] / m[rank][col];
                for j in col..cols {
                    let sub = f * m[rank][j];
                    m[i][j] -= sub;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalartheta::theta_ideal;
    use crate::weilrep::orthogonal_group;

    #[test]
    fn identity_action_gives_theta_a() {
        for d in [-15, -23, -47] {
            let cg = ClassGroup::new(d).unwrap();
            for a in 0..cg.h {
                let t = vv_theta(&cg, a, 0, 40 * -d as usize).unwrap();
                assert_eq!(t.acted_class, a);
                let want = theta_ideal(&cg, a, 40).unwrap();
                let got = t.component_zero_scalar();
                for (m, x) in got.iter().enumerate() {
                    assert_eq!(Some(*x), want.int_coeff(m), "D = {d}");
                }
            }
        }
    }

    #[test]
    fn component_zero_is_acted_theta() {
        for d in [-7, -15, -23, -39, -47] {
            let cg = ClassGroup::new(d).unwrap();
            for a in 0..cg.h {
                for h in 0..cg.h {
                    let t = vv_theta(&cg, a, h, 30 * -d as usize).unwrap();
                    let want = theta_ideal(&cg, cg.class_action(h, a), 30).unwrap();
                    let got = t.component_zero_scalar();
                    assert_eq!(got.len(), 31);
                    for (m, x) in got.iter().enumerate() {
                        assert_eq!(Some(*x), want.int_coeff(m));
                    }
                    // constant terms and the symmetry beta -> -beta
                    assert_eq!(t.form.components[0][0].as_rational(), Some((1, 1)));
                    for r in 1..-d as usize {
                        assert!(t.form.components[r][0].is_zero());
                        let s = t.form.df.neg(r as i64) as usize;
                        assert!(t.form.components[r].iter().zip(&t.form.components[s]).all(|(x, y)| x.eq_exact(y)));
                    }
                }
            }
        }
    }

    #[test]
    fn character_sums() {
        let cg = ClassGroup::new(-23).unwrap();
        let chars = cg.characters();
        let e = vv_theta_psi(&cg, 0, &chars[0], 20).unwrap();
        assert_eq!(e.components[0][0].as_rational(), Some((3, 1)));
        for psi in &chars[1..] {
            let t = vv_theta_psi(&cg, 0, psi, 20).unwrap();
            assert!(t.components.iter().all(|c| c[0].is_zero()));
        }
        // Theta(psi-bar) = psi(a) Theta(psi) in the form labelling
        for a in 0..cg.h {
            for (i, psi) in chars.iter().enumerate() {
                let j = cg.conj_character_index(i);
                let t = vv_theta_psi(&cg, a, psi, 30).unwrap();
                let tb = vv_theta_psi(&cg, a, &chars[j], 30).unwrap();
                assert!(tb.exact_eq(&t.scale(&psi.value(a))), "a = {a}, psi = {i}");
            }
        }
    }

    #[test]
    fn dimensions() {
        for (d, want) in [(-23, 2), (-15, 2), (-47, 3)] {
            let cg = ClassGroup::new(d).unwrap();
            let s = theta_space(&cg, 0, 50).unwrap();
            assert_eq!(s.rank, want, "D = {d}");
            assert_eq!(s.dim_formula, want);
            assert_eq!(s.basis.len(), want);
        }
    }

    #[test]
    fn symmetrization() {
        let cg = ClassGroup::new(-23).unwrap();
        for h in 0..cg.h {
            let t = vv_theta(&cg, 0, h, 30).unwrap();
            let s = vv_theta_sym(&cg, 0, h, 30).unwrap();
            assert!(s.exact_eq(&t.form.scale(&Cyclo::from_int(1, 2))));
        }
        let cg = ClassGroup::new(-15).unwrap();
        let s = vv_theta_sym(&cg, 1, 1, 30).unwrap();
        let n = 15;
        for u in orthogonal_group(&s.df) {
            for r in 0..n {
                assert!(s.components[r as usize].iter().zip(&s.components[(u * r % n) as usize]).all(|(x, y)| x.eq_exact(y)));
            }
        }
    }

    #[test]
    fn rank_helper() {
        assert_eq!(rational_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rational_rank(&[vec![1, 2, 3], vec![0, 1, 1], vec![1, 3, 4]]), 2);
        assert_eq!(rational_rank(&[vec![0, 0]]), 0);
    }
}
