//! Schur functions evaluated through the character map
//! `s_λ(p) = Σ_{μ⊢|λ|} χ_λ(μ) p_μ / z_μ`.
//!
//! All arguments arrive as power sums (directly, or as traces of matrix
//! powers), so a single evaluation path serves exact and floating inputs.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex;
use num_rational::BigRational;

use crate::characters::character_int;
use crate::error::{Error, Result};
use crate::exact::parse_rational;
use crate::partition::{enumerate_partitions, Partition};
use crate::scalar::Scalar;

/// A point `p = (p_1, p_2, …)` stored sparsely; absent keys are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSumSpec<T> {
    values: BTreeMap<usize, T>,
}

impl<T: Scalar> Default for PowerSumSpec<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> PowerSumSpec<T> {
    pub fn new() -> Self {
        PowerSumSpec { values: BTreeMap::new() }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, T)>) -> Result<Self> {
        let mut spec = Self::new();
        for (m, v) in pairs {
            spec.set(m, v)?;
        }
        Ok(spec)
    }

    /// `p_m = value` for `m = 1..=up_to`, e.g. `p(I_N)` truncated.
    pub fn constant(value: T, up_to: usize) -> Self {
        PowerSumSpec { values: (1..=up_to).map(|m| (m, value.clone())).collect() }
    }

    /// `p_∞ = (1, 0, 0, …)`.
    pub fn p_infinity() -> Self {
        PowerSumSpec { values: BTreeMap::from([(1, T::one())]) }
    }

    /// The brick point `(0, c, 0, …)`.
    pub fn brick(c: T) -> Self {
        PowerSumSpec { values: BTreeMap::from([(2, c)]) }
    }

    pub fn set(&mut self, m: usize, value: T) -> Result<()> {
        if m == 0 {
            return Err(Error::InvalidArgument("power-sum index must be positive".into()));
        }
        if value.is_zero() {
            self.values.remove(&m);
        } else {
            self.values.insert(m, value);
        }
        Ok(())
    }

    pub fn get(&self, m: usize) -> T {
        self.values.get(&m).cloned().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &T)> {
        self.values.iter().map(|(&m, v)| (m, v))
    }

    /// `p_μ = ∏ p_{μ_i}`; exactly zero as soon as one factor is absent.
    pub fn monomial(&self, mu: &Partition) -> T {
        let mut acc = T::one();
        for &m in mu.parts() {
            match self.values.get(&m) {
                Some(v) => acc = acc * v.clone(),
                None => return T::zero(),
            }
        }
        acc
    }

    /// `(c p_1, c p_2, …)`, e.g. the rescaled point `N p`.
    pub fn times(&self, c: &T) -> Self {
        PowerSumSpec { values: self.values.iter().map(|(&m, v)| (m, c.clone() * v.clone())).collect() }
    }

    /// `(c p_1, c² p_2, …)`.
    pub fn graded(&self, c: &T) -> Self {
        PowerSumSpec { values: self.values.iter().map(|(&m, v)| (m, c.powu(m) * v.clone())).collect() }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> PowerSumSpec<U> {
        PowerSumSpec { values: self.values.iter().map(|(&m, v)| (m, f(v))).collect() }
    }
}

/// Scalars that have a textual form in power-sum specifications.
pub trait ParseScalar: Scalar {
    fn parse_scalar(s: &str) -> Result<Self>;
}

impl ParseScalar for BigRational {
    fn parse_scalar(s: &str) -> Result<Self> {
        parse_rational(s)
    }
}

impl ParseScalar for f64 {
    fn parse_scalar(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
            let d: f64 = d.trim().parse().map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
            return Ok(n / d);
        }
        s.parse().map_err(|e| Error::Parse(format!("{s:?}: {e}")))
    }
}

impl ParseScalar for Complex<f64> {
    fn parse_scalar(s: &str) -> Result<Self> {
        // Real rationals first, then num-complex's `a+bi` syntax.
        f64::parse_scalar(s)
            .map(|re| Complex::new(re, 0.0))
            .or_else(|_| s.trim().parse().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
    }
}

impl<T: ParseScalar> PowerSumSpec<T> {
    /// Parses `"1:1,2:0.5"` (or `"2:1/2"` for exact values).
    pub fn parse(s: &str) -> Result<Self> {
        let mut spec = Self::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (m, v) = item.split_once(':').ok_or_else(|| Error::Parse(format!("expected m:value, got {item:?}")))?;
            let m: usize = m.trim().parse().map_err(|e| Error::Parse(format!("{m:?}: {e}")))?;
            spec.set(m, T::parse_scalar(v)?)?;
        }
        Ok(spec)
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for PowerSumSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.values.iter().map(|(m, v)| format!("{m}:{v}")).collect();
        f.write_str(&items.join(","))
    }
}

/// `s_λ(p) = Σ_{μ⊢|λ|} χ_λ(μ) p_μ / z_μ`.
pub fn schur_from_power_sums<T: Scalar>(lambda: &Partition, p: &PowerSumSpec<T>) -> T {
    let mut acc = T::zero();
    for mu in enumerate_partitions(lambda.weight()) {
        let pm = p.monomial(&mu);
        if pm.is_zero() {
            continue;
        }
        let chi = character_int(lambda, &mu).expect("equal weights");
        if chi == 0 {
            continue;
        }
        acc = acc + pm.scale(&BigRational::new(chi.into(), mu.z()));
    }
    acc
}

/// `s_λ(I_N) = (N)_λ / H(λ)`; zero whenever `ℓ(λ) > N`.
pub fn principal_specialization(lambda: &Partition, n: usize) -> BigRational {
    BigRational::new(lambda.content_product(n as i64), lambda.hook_product())
}

/// `s_λ(0, c, 0, …) = χ_λ((2^k)) c^k / (2^k k!)` for `|λ| = 2k`, zero for odd weight.
pub fn brick_specialization<T: Scalar>(lambda: &Partition, c: &T) -> T {
    let d = lambda.weight();
    if d % 2 == 1 {
        return T::zero();
    }
    let k = d / 2;
    let bricks = Partition::rectangle(2, k);
    let chi = character_int(lambda, &bricks).expect("equal weights");
    c.powu(k).scale(&BigRational::new(chi.into(), bricks.z()))
}

fn check_square<T>(x: &DMatrix<T>) -> Result<()> {
    if x.nrows() != x.ncols() {
        return Err(Error::NonSquare { rows: x.nrows(), cols: x.ncols() });
    }
    Ok(())
}

pub(crate) fn matmul<T: Scalar + nalgebra::Scalar>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    let (n, k, m) = (a.nrows(), a.ncols(), b.ncols());
    DMatrix::from_fn(n, m, |i, j| {
        let mut acc = T::zero();
        for l in 0..k {
            acc = acc + a[(i, l)].clone() * b[(l, j)].clone();
        }
        acc
    })
}

fn trace<T: Scalar + nalgebra::Scalar>(x: &DMatrix<T>) -> T {
    (0..x.nrows()).fold(T::zero(), |acc, i| acc + x[(i, i)].clone())
}

/// `p_m = tr X^m` for `m = 1..=d`.
pub fn power_sums_of_matrix<T: Scalar + nalgebra::Scalar>(x: &DMatrix<T>, d: usize) -> Result<PowerSumSpec<T>> {
    check_square(x)?;
    let mut spec = PowerSumSpec::new();
    if d == 0 {
        return Ok(spec);
    }
    let mut power = x.clone();
    spec.set(1, trace(&power))?;
    for m in 2..=d {
        power = matmul(&power, x);
        spec.set(m, trace(&power))?;
    }
    Ok(spec)
}

/// `s_λ(X)`, the Schur polynomial in the eigenvalues of `X`.
pub fn schur_of_matrix<T: Scalar + nalgebra::Scalar>(lambda: &Partition, x: &DMatrix<T>) -> Result<T> {
    let p = power_sums_of_matrix(x, lambda.weight())?;
    Ok(schur_from_power_sums(lambda, &p))
}

/// Evaluates every λ in `lambdas` at one matrix, sharing the trace computation.
pub fn schur_of_matrix_many<T: Scalar + nalgebra::Scalar>(lambdas: &[Partition], x: &DMatrix<T>) -> Result<Vec<T>> {
    let d = lambdas.iter().map(Partition::weight).max().unwrap_or(0);
    let p = power_sums_of_matrix(x, d)?;
    Ok(lambdas.iter().map(|l| schur_from_power_sums(l, &p)).collect())
}
