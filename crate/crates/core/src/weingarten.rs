//! Exact Weingarten calculus for Haar-unitary monomial integrals.

use std::collections::HashMap;
use std::sync::LazyLock;

use num_rational::BigRational;
use num_traits::Zero;
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::characters::character_int;
use crate::error::{Error, Result};
use crate::oracle::{Perm, HARD_CAP};
use crate::partition::{enumerate_partitions, factorial, Partition};

static WG_CACHE: LazyLock<RwLock<HashMap<(Partition, usize), BigRational>>> = LazyLock::new(Default::default);

/// `Wg_N(μ) = Σ_{λ⊢|μ|, ℓ(λ)≤N} (dim λ/|λ|!) χ_λ(μ) / (N)_λ`, defined for `N ≥ |μ|`.
pub fn weingarten_value(mu: &Partition, n: usize) -> Result<BigRational> {
    let d = mu.weight();
    if n < d {
        return Err(Error::WeingartenBelowDegree { n, degree: d });
    }
    let key = (mu.clone(), n);
    if let Some(v) = WG_CACHE.read().get(&key) {
        return Ok(v.clone());
    }
    let d_fact = factorial(d);
    let mut acc = BigRational::zero();
    for lambda in enumerate_partitions(d).into_iter().filter(|l| l.length() <= n) {
        let chi = character_int(&lambda, mu)?;
        if chi == 0 {
            continue;
        }
        acc += BigRational::new(lambda.dimension() * chi, &d_fact * lambda.content_product(n as i64));
    }
    WG_CACHE.write().insert(key, acc.clone());
    Ok(acc)
}

/// `U_{a_1 b_1} ⋯ U_{a_d b_d} (U†)_{b'_1 a'_1} ⋯ (U†)_{b'_{d'} a'_{d'}}` on `U(N)`.
/// Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialSpec {
    pub n: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub a_prime: Vec<usize>,
    pub b_prime: Vec<usize>,
}

impl MonomialSpec {
    pub fn new(n: usize, a: Vec<usize>, b: Vec<usize>, a_prime: Vec<usize>, b_prime: Vec<usize>) -> Result<Self> {
        if a.len() != b.len() || a_prime.len() != b_prime.len() {
            return Err(Error::InvalidArgument("index lists of unequal length".into()));
        }
        if let Some(&bad) = a.iter().chain(&b).chain(&a_prime).chain(&b_prime).find(|&&i| i == 0 || i > n) {
            return Err(Error::InvalidArgument(format!("index {bad} outside 1..={n}")));
        }
        Ok(MonomialSpec { n, a, b, a_prime, b_prime })
    }

    /// `∫ U_{11}⋯U_{dd} (U†)_{σ(1),1}⋯(U†)_{σ(d),d} = Wg_N(σ)`, with `σ` acting on 0-based points.
    pub fn weingarten_monomial(sigma: &Perm, n: usize) -> Result<Self> {
        let d = sigma.degree();
        let id: Vec<usize> = (1..=d).collect();
        let b_prime = (0..d).map(|k| sigma.apply(k) + 1).collect();
        Self::new(n, id.clone(), id.clone(), id, b_prime)
    }

    /// `|U_{ij}|^2`.
    pub fn modulus_squared(n: usize, i: usize, j: usize) -> Result<Self> {
        Self::new(n, vec![i], vec![j], vec![i], vec![j])
    }

    pub fn degree(&self) -> usize {
        self.a.len()
    }

    pub fn conjugate_degree(&self) -> usize {
        self.a_prime.len()
    }
}

/// The balance numbers `(Σ a − Σ a', Σ b − Σ b')`.
pub fn balance_numbers(m: &MonomialSpec) -> (i64, i64) {
    let sum = |v: &[usize]| v.iter().map(|&x| x as i64).sum::<i64>();
    (sum(&m.a) - sum(&m.a_prime), sum(&m.b) - sum(&m.b_prime))
}

fn same_multiset(x: &[usize], y: &[usize]) -> bool {
    let mut x = x.to_vec();
    let mut y = y.to_vec();
    x.sort_unstable();
    y.sort_unstable();
    x == y
}

/// Permutations `σ` of `0..d` with `from[k] = to[σ(k)]` for every `k`.
fn matching_perms(from: &[usize], to: &[usize]) -> Vec<Perm> {
    fn go(k: usize, from: &[usize], to: &[usize], used: &mut [bool], image: &mut Vec<usize>, out: &mut Vec<Perm>) {
        if k == from.len() {
            out.push(Perm::from_images(image).expect("bijection"));
            return;
        }
        for j in 0..to.len() {
            if !used[j] && to[j] == from[k] {
                used[j] = true;
                image.push(j);
                go(k + 1, from, to, used, image, out);
                image.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(0, from, to, &mut vec![false; to.len()], &mut Vec::new(), &mut out);
    out
}

/// `∫ U_N(a, a', b, b') d*U = δ_{d,d'} Σ_{σ,τ∈S_d} Wg_N(τσ⁻¹) ∏_k δ_{a_k a'_{σ(k)}} δ_{b_k b'_{τ(k)}}`.
///
/// Returns zero without touching the Weingarten table when `d ≠ d'`, when
/// a balance number is non-zero, or when the index multisets differ (no
/// term of the double sum survives in any of those cases).
pub fn monomial_integral(m: &MonomialSpec) -> Result<BigRational> {
    let d = m.degree();
    if m.n < d {
        return Err(Error::WeingartenBelowDegree { n: m.n, degree: d });
    }
    if d != m.conjugate_degree() || balance_numbers(m) != (0, 0) {
        return Ok(BigRational::zero());
    }
    if !same_multiset(&m.a, &m.a_prime) || !same_multiset(&m.b, &m.b_prime) {
        return Ok(BigRational::zero());
    }
    if d > HARD_CAP {
        return Err(Error::DegreeTooLarge { degree: d, cap: HARD_CAP });
    }
    let sigmas = matching_perms(&m.a, &m.a_prime);
    let taus = matching_perms(&m.b, &m.b_prime);
    let mut by_type: HashMap<Partition, usize> = HashMap::new();
    for sigma in &sigmas {
        let sigma_inv = sigma.inverse();
        for tau in &taus {
            // (τσ⁻¹)(x) = τ(σ⁻¹(x))
            *by_type.entry(sigma_inv.then(tau).cycle_type()).or_default() += 1;
        }
    }
    let mut acc = BigRational::zero();
    for (mu, count) in by_type {
        acc += weingarten_value(&mu, m.n)? * BigRational::from_integer(count.into());
    }
    Ok(acc)
}
