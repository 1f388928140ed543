//! Hurwitz numbers from the Frobenius formula
//! `H(μ¹,…,μⁿ) = Σ_λ (dim λ / d!)^E ∏ φ_λ(μⁱ)`.
//!
//! The counts are of possibly disconnected covers, matching the formula as
//! written; no connected/log transform is applied.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::normalized_character;
use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions, factorial, Partition};

/// Ramification profiles over the branch points of a closed surface with
/// Euler characteristic `euler`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchProfile {
    profiles: Vec<Partition>,
    euler: i64,
}

impl BranchProfile {
    pub fn new(profiles: Vec<Partition>, euler: i64) -> Result<Self> {
        let Some(first) = profiles.first() else {
            return Err(Error::InvalidArgument("profile list must be non-empty".into()));
        };
        let d = first.weight();
        if let Some(bad) = profiles.iter().find(|p| p.weight() != d) {
            return Err(Error::IncompatibleWeights { left: d, right: bad.weight() });
        }
        Ok(BranchProfile { profiles, euler })
    }

    /// Profiles on the sphere (`E = 2`).
    pub fn sphere(profiles: Vec<Partition>) -> Result<Self> {
        Self::new(profiles, 2)
    }

    pub fn profiles(&self) -> &[Partition] {
        &self.profiles
    }

    pub fn euler(&self) -> i64 {
        self.euler
    }

    pub fn degree(&self) -> usize {
        self.profiles[0].weight()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HurwitzValue {
    #[serde(serialize_with = "crate::serde_rational")]
    pub value: BigRational,
    pub degree: usize,
    /// Number of irreducible representations with a non-zero contribution.
    pub terms: usize,
}

fn weight_power(lambda: &Partition, d: usize, euler: i64) -> BigRational {
    let base = BigRational::new(lambda.dimension(), factorial(d));
    let mut acc = BigRational::one();
    let factor = if euler >= 0 { base } else { base.recip() };
    for _ in 0..euler.unsigned_abs() {
        acc *= &factor;
    }
    acc
}

/// Frobenius sum with term count. Degree 0 returns 1 by convention.
pub fn hurwitz_number_detailed(profile: &BranchProfile) -> Result<HurwitzValue> {
    let d = profile.degree();
    if d == 0 {
        return Ok(HurwitzValue { value: BigRational::one(), degree: 0, terms: 1 });
    }
    let terms: Vec<BigRational> = enumerate_partitions(d)
        .par_iter()
        .map(|lambda| {
            let mut acc = weight_power(lambda, d, profile.euler);
            for mu in &profile.profiles {
                if acc.is_zero() {
                    break;
                }
                acc *= normalized_character(lambda, mu)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let nonzero = terms.iter().filter(|t| !t.is_zero()).count();
    let value = terms.into_iter().fold(BigRational::zero(), |a, b| a + b);
    Ok(HurwitzValue { value, degree: d, terms: nonzero })
}

pub fn hurwitz_number(profile: &BranchProfile) -> Result<BigRational> {
    hurwitz_number_detailed(profile).map(|h| h.value)
}

/// `H_{S²}(κ, μ, (2^k), …, (2^k))` with `bricks` copies of `(2^k)`, `|κ| = |μ| = 2k`.
pub fn brickwork_hurwitz(kappa: &Partition, mu: &Partition, bricks: usize) -> Result<BigRational> {
    if kappa.weight() != mu.weight() {
        return Err(Error::IncompatibleWeights { left: kappa.weight(), right: mu.weight() });
    }
    let d = kappa.weight();
    if d % 2 == 1 {
        return Err(Error::OddDegree(d));
    }
    let mut profiles = vec![kappa.clone(), mu.clone()];
    profiles.extend(std::iter::repeat_n(Partition::rectangle(2, d / 2), bricks));
    hurwitz_number(&BranchProfile::sphere(profiles)?)
}

/// Denominator check helper: `H · d!` as an integer when it is one.
pub fn times_factorial(value: &BigRational, d: usize) -> Option<BigInt> {
    let scaled = value * BigRational::from_integer(factorial(d));
    scaled.is_integer().then(|| scaled.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn sphere(ps: &[&[usize]]) -> BigRational {
        hurwitz_number(&BranchProfile::sphere(ps.iter().map(|x| p(x)).collect()).unwrap()).unwrap()
    }

    #[test]
    fn small_sphere_values() {
        assert_eq!(sphere(&[&[2], &[1, 1], &[2]]), rational(1, 2));
        assert_eq!(sphere(&[&[2], &[2], &[2]]), rational(0, 1));
        assert_eq!(sphere(&[&[1, 1], &[1, 1], &[2], &[2]]), rational(1, 2));
        assert_eq!(sphere(&[&[3], &[3], &[3]]), rational(1, 3));
    }

    #[test]
    fn brickwork_values() {
        assert_eq!(brickwork_hurwitz(&p(&[2]), &p(&[1, 1]), 1).unwrap(), rational(1, 2));
        assert_eq!(brickwork_hurwitz(&p(&[2]), &p(&[2]), 2).unwrap(), rational(1, 2));
        assert_eq!(brickwork_hurwitz(&p(&[1, 1]), &p(&[2]), 2).unwrap(), rational(0, 1));
        let err = brickwork_hurwitz(&p(&[2, 1]), &p(&[3]), 1).unwrap_err();
        assert!(err.to_string().contains("brickwork requires even degree"));
        assert!(brickwork_hurwitz(&p(&[2]), &p(&[3, 1]), 1).is_err());
    }

    #[test]
    fn validation() {
        assert!(BranchProfile::sphere(vec![]).is_err());
        assert!(matches!(
            BranchProfile::sphere(vec![p(&[2]), p(&[1])]),
            Err(Error::IncompatibleWeights { left: 2, right: 1 })
        ));
        let empty = BranchProfile::sphere(vec![Partition::empty(), Partition::empty()]).unwrap();
        assert_eq!(hurwitz_number(&empty).unwrap(), BigRational::one());
    }

    #[test]
    fn unramified_covers() {
        // With only trivial profiles the sum is Σ_λ (dim λ/d!)^2 = 1/d!.
        for d in 1..=6 {
            let h = hurwitz_number(&BranchProfile::sphere(vec![Partition::identity_class(d)]).unwrap()).unwrap();
            assert_eq!(h, BigRational::new(1.into(), factorial(d)));
        }
        // Torus (E = 0): Σ_λ 1 = number of partitions.
        let torus = BranchProfile::new(vec![Partition::identity_class(4)], 0).unwrap();
        assert_eq!(hurwitz_number(&torus).unwrap(), rational(5, 1));
    }

    #[test]
    fn genus_two_counts_commuting_pairs() {
        // E = −2 with no ramification: Σ_λ (d!/dim λ)^2 = #{(a,b,c,d): [a,b][c,d] = id}/d!.
        let genus2 = BranchProfile::new(vec![Partition::identity_class(3)], -2).unwrap();
        let v = hurwitz_number(&genus2).unwrap();
        assert_eq!(v, rational(36 + 36 + 9, 1));
    }

    #[test]
    fn symmetric_and_integral_after_scaling() {
        let list = vec![p(&[3, 1, 1]), p(&[2, 2, 1]), p(&[5]), p(&[4, 1])];
        let base = hurwitz_number(&BranchProfile::sphere(list.clone()).unwrap()).unwrap();
        let mut rev = list.clone();
        rev.reverse();
        assert_eq!(hurwitz_number(&BranchProfile::sphere(rev).unwrap()).unwrap(), base);
        assert!(times_factorial(&base, 5).is_some());
        let detailed = hurwitz_number_detailed(&BranchProfile::sphere(list).unwrap()).unwrap();
        assert!(detailed.terms <= 7);
    }
}
