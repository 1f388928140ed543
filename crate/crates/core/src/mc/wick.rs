//! Exact Gaussian expectations by Wick pairing.
//!
//! A word is a product of traces; every factor is an independent GUE matrix
//! carrying a label. Factor `p` on its cycle reads `H_{i_p, i_next(p)}`, and a
//! pairing of `p` with `q` (same label only) contributes
//! `E[H_{i_p i_p'} H_{i_q i_q'}] = v δ_{i_p i_q'} δ_{i_p' i_q}`. Summing the
//! free indices leaves `N^{#classes}` per pairing.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::samplers::VarianceConvention;
use crate::characters::character_int;
use crate::error::{Error, Result};
use crate::exact::pow_signed;
use crate::partition::{enumerate_partitions, Partition};

/// Upper bound on the number of pairings enumerated by one call.
pub const DEFAULT_PAIRING_CAP: u128 = 1_000_000;

/// Trace cycles of labelled Gaussian factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianWord {
    cycles: Vec<Vec<usize>>,
}

impl GaussianWord {
    pub fn new(cycles: Vec<Vec<usize>>) -> Self {
        GaussianWord { cycles: cycles.into_iter().filter(|c| !c.is_empty()).collect() }
    }

    /// `∏_i tr(H_0 H_1 ⋯ H_{n-1})^{μ_i}`.
    pub fn product_power(mu: &Partition, factors: usize) -> Self {
        let cycles = mu.parts().iter().map(|&m| (0..m * factors).map(|p| p % factors).collect()).collect();
        Self::new(cycles)
    }

    pub fn factor_count(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    /// Number of pairings that respect the labels.
    pub fn pairing_count(&self) -> u128 {
        let mut per_label: BTreeMap<usize, usize> = BTreeMap::new();
        for &l in self.cycles.iter().flatten() {
            *per_label.entry(l).or_default() += 1;
        }
        per_label.values().fold(1u128, |acc, &c| {
            if c % 2 == 1 {
                return 0;
            }
            (1..c).step_by(2).fold(acc, |a, j| a.saturating_mul(j as u128))
        })
    }
}

/// `E = v^{F/2} Σ_c counts[c] N^c` where `F` is the factor count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WickPolynomial {
    pub factors: usize,
    pub counts: BTreeMap<usize, u64>,
}

impl WickPolynomial {
    pub fn evaluate(&self, n: usize, convention: VarianceConvention) -> BigRational {
        let sum = self
            .counts
            .iter()
            .fold(BigInt::zero(), |acc, (&c, &k)| acc + BigInt::from(k) * BigInt::from(n).pow(c as u32));
        let scale = match convention {
            VarianceConvention::InverseN => pow_signed(n as i64, -((self.factors / 2) as i64)),
            VarianceConvention::Unit => BigRational::from_integer(1.into()),
        };
        BigRational::from_integer(sum) * scale
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// Enumerates all label-respecting pairings and tallies index classes.
pub fn pairing_polynomial(word: &GaussianWord, cap: u128) -> Result<WickPolynomial> {
    let f = word.factor_count();
    let pairings = word.pairing_count();
    if pairings > cap {
        return Err(Error::PairingCapExceeded { pairings, cap });
    }
    let mut counts = BTreeMap::new();
    if pairings == 0 {
        return Ok(WickPolynomial { factors: f, counts });
    }
    let mut labels = Vec::with_capacity(f);
    let mut next = Vec::with_capacity(f);
    for cycle in &word.cycles {
        let start = labels.len();
        for (j, &l) in cycle.iter().enumerate() {
            labels.push(l);
            next.push(start + (j + 1) % cycle.len());
        }
    }
    let mut partner = vec![usize::MAX; f];
    enumerate(&labels, &next, &mut partner, &mut counts);
    Ok(WickPolynomial { factors: f, counts })
}

fn enumerate(labels: &[usize], next: &[usize], partner: &mut [usize], counts: &mut BTreeMap<usize, u64>) {
    let Some(p) = partner.iter().position(|&x| x == usize::MAX) else {
        let f = labels.len();
        let mut uf = UnionFind((0..f).collect());
        let mut classes = f;
        for p in 0..f {
            let q = partner[p];
            if p < q {
                classes -= uf.union(p, next[q]) as usize;
                classes -= uf.union(q, next[p]) as usize;
            }
        }
        *counts.entry(classes).or_default() += 1;
        return;
    };
    for q in p + 1..labels.len() {
        if partner[q] == usize::MAX && labels[q] == labels[p] {
            partner[p] = q;
            partner[q] = p;
            enumerate(labels, next, partner, counts);
            partner[p] = usize::MAX;
            partner[q] = usize::MAX;
        }
    }
}

/// `E[∏_i tr H^{μ_i}]` over GUE with `E|H_ij|² = 1/N`. Odd weight gives zero.
pub fn wick_expectation(mu: &Partition, n: usize) -> Result<BigRational> {
    wick_product_moment(mu, 1, n)
}

/// `E[∏_i tr (H_1⋯H_k)^{μ_i}]` for `k = factors` independent GUE matrices.
pub fn wick_product_moment(mu: &Partition, factors: usize, n: usize) -> Result<BigRational> {
    if factors == 0 {
        return Err(Error::InvalidArgument("at least one Gaussian factor required".into()));
    }
    let word = GaussianWord::product_power(mu, factors);
    Ok(pairing_polynomial(&word, DEFAULT_PAIRING_CAP)?.evaluate(n, VarianceConvention::InverseN))
}

/// `⟨s_λ(H)⟩ = Σ_μ χ_λ(μ) E[p_μ(H)] / z_μ`.
pub fn gaussian_schur_average(lambda: &Partition, n: usize) -> Result<BigRational> {
    let d = lambda.weight();
    if d % 2 == 1 {
        return Ok(BigRational::zero());
    }
    let mut acc = BigRational::zero();
    for mu in enumerate_partitions(d) {
        let chi = character_int(lambda, &mu)?;
        if chi == 0 {
            continue;
        }
        acc += wick_expectation(&mu, n)? * BigRational::new(chi.into(), mu.z());
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{integer, rational};
    use crate::scalar::Scalar;
    use crate::schur::brick_specialization;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn low_moments() {
        for n in 1..=6 {
            assert_eq!(wick_expectation(&p(&[2]), n).unwrap(), integer(n as i64));
            assert_eq!(wick_expectation(&p(&[1, 1]), n).unwrap(), integer(1));
            assert_eq!(wick_expectation(&p(&[1]), n).unwrap(), integer(0));
            assert_eq!(wick_expectation(&p(&[3]), n).unwrap(), integer(0));
            // E tr H⁴ = 2N + 1/N: two planar pairings give N³, one crossing gives N.
            let n_q = integer(n as i64);
            assert_eq!(wick_expectation(&p(&[4]), n).unwrap(), integer(2 * n as i64) + n_q.recip());
        }
        assert_eq!(wick_expectation(&Partition::empty(), 3).unwrap(), integer(1));
    }

    #[test]
    fn catalan_leading_term() {
        // Planar pairings of tr H^{2m} are counted by Catalan numbers.
        let catalan = [1u64, 1, 2, 5, 14];
        for (m, &planar) in catalan.iter().enumerate().skip(1) {
            let poly = pairing_polynomial(&GaussianWord::product_power(&p(&[2 * m]), 1), DEFAULT_PAIRING_CAP).unwrap();
            assert_eq!(poly.counts[&(m + 1)], planar);
            assert_eq!(poly.counts.values().sum::<u64>(), (1..2 * m as u64).step_by(2).product::<u64>());
        }
    }

    #[test]
    fn two_matrix_moments() {
        for n in 2..=5 {
            let nn = n as i64;
            assert_eq!(wick_product_moment(&p(&[2]), 2, n).unwrap(), rational(1, nn));
            // Σ_{abcd} δ_ad δ_bc δ_bc δ_ad / N² = 1.
            assert_eq!(wick_product_moment(&p(&[1, 1]), 2, n).unwrap(), integer(1));
            assert_eq!(wick_product_moment(&p(&[1]), 2, n).unwrap(), integer(0));
        }
    }

    #[test]
    fn schur_averages_match_brick_closed_form() {
        for d in 0..=6 {
            for lambda in enumerate_partitions(d) {
                for n in 2..=6 {
                    let lhs = gaussian_schur_average(&lambda, n).unwrap();
                    let c = rational(1, n as i64);
                    let rhs = brick_specialization(&lambda, &c).scale(&integer(lambda.content_product(n as i64)));
                    assert_eq!(lhs, rhs, "λ={lambda} N={n}");
                }
            }
        }
        assert_eq!(gaussian_schur_average(&p(&[2]), 5).unwrap(), integer(3));
        assert_eq!(gaussian_schur_average(&p(&[1, 1]), 5).unwrap(), integer(-2));
        assert_eq!(gaussian_schur_average(&p(&[2, 1]), 5).unwrap(), integer(0));
    }

    #[test]
    fn cap_is_enforced() {
        let err = pairing_polynomial(&GaussianWord::product_power(&p(&[20]), 1), DEFAULT_PAIRING_CAP).unwrap_err();
        assert!(matches!(err, Error::PairingCapExceeded { .. }));
        assert_eq!(GaussianWord::product_power(&p(&[3, 1]), 1).pairing_count(), 3);
        assert_eq!(GaussianWord::new(vec![vec![0, 1, 0]]).pairing_count(), 0);
    }

    #[test]
    fn unit_convention_counts_pairings() {
        let poly = pairing_polynomial(&GaussianWord::product_power(&p(&[2]), 1), DEFAULT_PAIRING_CAP).unwrap();
        assert_eq!(poly.evaluate(4, VarianceConvention::Unit), integer(16));
    }
}
