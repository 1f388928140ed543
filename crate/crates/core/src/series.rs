//! Exact perturbation-series coefficients of the product models.
//!
//! Three representations of the coefficient of `p_μ` in
//! `J_N(p) = ⟨exp(N Σ_m p_m tr(H₁⋯H_n)^m / m)⟩` are computed independently:
//!
//! * `moment`: `N^{ℓ(μ)} E[∏ tr W^{μ_i}] / z_μ` by Wick pairing;
//! * `schur`: the λ-sum `Σ s_λ(I_N) s_λ(Np) (⟨s_λ⟩/s_λ(I_N))^n`;
//! * `hurwitz`: `Σ_κ N^{ℓ(κ)+α} 𝓗(κ, μ, (2^k)^n)` with an exponent rule `α`.
//!
//! The exponent rule is measured by [`calibrate_normalization`] rather than
//! copied from any printed normalization.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characters::character_int;
use crate::error::{Error, Result};
use crate::exact::{format_rational, pow_signed, signed_log};
use crate::hurwitz::{brickwork_hurwitz, hurwitz_number, BranchProfile};
use crate::mc::wick::{gaussian_schur_average, wick_product_moment};
use crate::partition::{enumerate_partitions, factorial, Partition};
use crate::schur::principal_specialization;

/// Largest term degree `2k` any representation will enumerate.
pub const SERIES_DEGREE_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    HermitianProduct,
    NormalProduct,
}

/// Spectrum of `C = C_n⋯C_1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Identity,
    Spectrum(Vec<Complex64>),
}

impl Source {
    /// Eigenvalues of the product `C_n⋯C_1` of the given matrices.
    pub fn from_matrices(cs: &[DMatrix<Complex64>]) -> Result<Self> {
        let Some(first) = cs.first() else {
            return Ok(Source::Identity);
        };
        let n = first.nrows();
        let mut prod = DMatrix::<Complex64>::identity(n, n);
        for c in cs {
            if c.nrows() != n || c.ncols() != n {
                return Err(Error::NonSquare { rows: c.nrows(), cols: c.ncols() });
            }
            prod = c * prod;
        }
        let (_, t) = prod.schur().unpack();
        Ok(Source::Spectrum(t.diagonal().iter().copied().collect()))
    }

    /// `p_κ(C) = ∏_i tr C^{κ_i}`.
    pub fn power_sum(&self, kappa: &Partition, n: usize) -> Complex64 {
        match self {
            Source::Identity => Complex64::new((n as f64).powi(kappa.length() as i32), 0.0),
            Source::Spectrum(z) => {
                kappa.parts().iter().map(|&m| z.iter().map(|x| x.powu(m as u32)).sum::<Complex64>()).product()
            }
        }
    }
}

/// `α(μ) = length_weight·ℓ(μ) + per_degree·k` for `|μ| = 2k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentRule {
    pub length_weight: i64,
    pub per_degree: i64,
}

impl ExponentRule {
    /// The rule that reconciles the Hurwitz sum with the Wick moments:
    /// `α = ℓ(μ) − n k`.
    pub fn resolved(factors: usize) -> Self {
        ExponentRule { length_weight: 1, per_degree: -(factors as i64) }
    }

    /// The μ-independent guess `α = −(n−1)k`.
    pub fn hypothesis(factors: usize) -> Self {
        ExponentRule { length_weight: 0, per_degree: 1 - factors as i64 }
    }

    pub fn alpha(&self, mu: &Partition) -> i64 {
        self.length_weight * mu.length() as i64 + self.per_degree * (mu.weight() / 2) as i64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelSpec {
    /// Matrix size `N`.
    pub n: usize,
    /// Number of random factors.
    pub factors: usize,
    pub source: Source,
    pub kind: ModelKind,
    pub rule: ExponentRule,
}

impl ModelSpec {
    pub fn hermitian(n: usize, factors: usize) -> Result<Self> {
        Self::new(n, factors, ModelKind::HermitianProduct)
    }

    pub fn normal(n: usize, factors: usize) -> Result<Self> {
        Self::new(n, factors, ModelKind::NormalProduct)
    }

    fn new(n: usize, factors: usize, kind: ModelKind) -> Result<Self> {
        if n == 0 || factors == 0 {
            return Err(Error::InvalidArgument(format!("need N ≥ 1 and n ≥ 1, got N = {n}, n = {factors}")));
        }
        Ok(ModelSpec { n, factors, source: Source::Identity, kind, rule: ExponentRule::resolved(factors) })
    }

    pub fn with_source(mut self, source: Source) -> Result<Self> {
        if let Source::Spectrum(z) = &source {
            if z.len() != self.n {
                return Err(Error::InvalidArgument(format!(
                    "spectrum has {} values, expected N = {}",
                    z.len(),
                    self.n
                )));
            }
        }
        self.source = source;
        Ok(self)
    }

    pub fn with_rule(mut self, rule: ExponentRule) -> Self {
        self.rule = rule;
        self
    }

    fn require_identity(&self, what: &str) -> Result<()> {
        match self.source {
            Source::Identity => Ok(()),
            Source::Spectrum(_) => Err(Error::InvalidArgument(format!("{what} is defined for C = I only"))),
        }
    }

    fn require_kind(&self, kind: ModelKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::InvalidArgument(format!("operation needs a {kind:?} model")));
        }
        Ok(())
    }
}

fn check_degree(d: usize) -> Result<()> {
    if d > SERIES_DEGREE_CAP {
        return Err(Error::DegreeTooLarge { degree: d, cap: SERIES_DEGREE_CAP });
    }
    Ok(())
}

fn check_window(d: usize, n: usize, ignore_window: bool) -> Result<()> {
    if d > n && !ignore_window {
        return Err(Error::OutsideValidityWindow { degree: d, n });
    }
    Ok(())
}

fn n_pow(n: usize, e: i64) -> BigRational {
    pow_signed(n as i64, e)
}

fn ratio_pow(x: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

/// Coefficient of `p_μ` from the Schur-sum representation.
pub fn schur_sum_coefficient(model: &ModelSpec, mu: &Partition) -> Result<BigRational> {
    model.require_kind(ModelKind::HermitianProduct)?;
    model.require_identity("the Schur sum")?;
    let d = mu.weight();
    if d % 2 == 1 {
        return Ok(BigRational::zero());
    }
    check_degree(d)?;
    let n = model.n;
    let prefactor = n_pow(n, mu.length() as i64) / BigRational::from_integer(mu.z());
    let terms = enumerate_partitions(d)
        .into_par_iter()
        .filter(|l| l.length() <= n)
        .map(|lambda| {
            let chi = character_int(&lambda, mu)?;
            if chi == 0 {
                return Ok(BigRational::zero());
            }
            let dim = principal_specialization(&lambda, n);
            let avg = gaussian_schur_average(&lambda, n)?;
            Ok(&dim * BigRational::from_integer(chi.into()) * ratio_pow(&(avg / &dim), model.factors))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(prefactor * terms.into_iter().fold(BigRational::zero(), |a, b| a + b))
}

/// Ground truth `N^{ℓ(μ)} E[∏ tr W^{μ_i}] / z_μ` from the Wick oracle.
pub fn moment_coefficient(model: &ModelSpec, mu: &Partition) -> Result<BigRational> {
    model.require_kind(ModelKind::HermitianProduct)?;
    model.require_identity("the moment coefficient")?;
    let n = model.n;
    let e = wick_product_moment(mu, model.factors, n)?;
    Ok(e * n_pow(n, mu.length() as i64) / BigRational::from_integer(mu.z()))
}

fn brick_table(mu: &Partition, factors: usize) -> Result<Vec<(Partition, BigRational)>> {
    enumerate_partitions(mu.weight())
        .into_par_iter()
        .map(|kappa| {
            let h = brickwork_hurwitz(&kappa, mu, factors)?;
            Ok((kappa, h))
        })
        .collect()
}

/// `Σ_κ N^{ℓ(κ)} 𝓗(κ, μ, (2^k)^n)` with no exponent correction.
fn raw_hurwitz_sum(n: usize, factors: usize, mu: &Partition) -> Result<BigRational> {
    let d = mu.weight();
    if d % 2 == 1 {
        return Ok(BigRational::zero());
    }
    check_degree(d)?;
    Ok(brick_table(mu, factors)?
        .into_iter()
        .fold(BigRational::zero(), |acc, (kappa, h)| acc + h * n_pow(n, kappa.length() as i64)))
}

/// `Σ_κ N^{ℓ(κ)+α} 𝓗(κ, μ, (2^k)^n)` under the model's exponent rule.
pub fn hurwitz_sum_coefficient(model: &ModelSpec, mu: &Partition, ignore_window: bool) -> Result<BigRational> {
    model.require_kind(ModelKind::HermitianProduct)?;
    model.require_identity("the Hurwitz sum")?;
    check_window(mu.weight(), model.n, ignore_window)?;
    Ok(raw_hurwitz_sum(model.n, model.factors, mu)? * n_pow(model.n, model.rule.alpha(mu)))
}

/// Coefficient of `p_κ(C) p_μ`: `N^α 𝓗(κ, μ, (2^k)^n)`.
pub fn source_coefficient(
    model: &ModelSpec,
    kappa: &Partition,
    mu: &Partition,
    ignore_window: bool,
) -> Result<BigRational> {
    model.require_kind(ModelKind::HermitianProduct)?;
    if kappa.weight() != mu.weight() {
        return Err(Error::IncompatibleWeights { left: kappa.weight(), right: mu.weight() });
    }
    check_degree(mu.weight())?;
    check_window(mu.weight(), model.n, ignore_window)?;
    Ok(brickwork_hurwitz(kappa, mu, model.factors)? * n_pow(model.n, model.rule.alpha(mu)))
}

/// `Σ_κ p_κ(C) · source_coefficient(κ, μ)` evaluated at the model's spectrum.
pub fn source_contracted(model: &ModelSpec, mu: &Partition, ignore_window: bool) -> Result<Complex64> {
    let mut acc = Complex64::zero();
    for kappa in enumerate_partitions(mu.weight()) {
        let c = source_coefficient(model, &kappa, mu, ignore_window)?;
        if c.is_zero() {
            continue;
        }
        acc += model.source.power_sum(&kappa, model.n) * to_f64(&c);
    }
    Ok(acc)
}

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

/// The two forms of a normal-model coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalCoefficient {
    /// `𝓗(κ, μ, μ⁽¹⁾,…,μ⁽ⁿ⁾, (2^k)^n)`.
    #[serde(serialize_with = "crate::serde_rational")]
    pub frobenius: BigRational,
    /// Character-map extraction from the λ-sum with `(s_λ(1,0,…))^{1−n}`.
    #[serde(serialize_with = "crate::serde_rational")]
    pub lambda_sum: BigRational,
}

/// Coefficient of `p_κ(C) p_μ ∏_i t⁽ⁱ⁾_{μ⁽ⁱ⁾}` in the normal-matrix model.
pub fn normal_model_coefficient(
    model: &ModelSpec,
    kappa: &Partition,
    mu: &Partition,
    ts: &[Partition],
) -> Result<NormalCoefficient> {
    model.require_kind(ModelKind::NormalProduct)?;
    if ts.len() != model.factors {
        return Err(Error::InvalidArgument(format!("expected {} t-profiles, got {}", model.factors, ts.len())));
    }
    let d = kappa.weight();
    for p in std::iter::once(mu).chain(ts) {
        if p.weight() != d {
            return Err(Error::IncompatibleWeights { left: d, right: p.weight() });
        }
    }
    if d % 2 == 1 {
        return Err(Error::OddDegree(d));
    }
    check_degree(d)?;
    let k = d / 2;
    let mut profiles = vec![kappa.clone(), mu.clone()];
    profiles.extend(ts.iter().cloned());
    profiles.extend(std::iter::repeat_n(Partition::rectangle(2, k), model.factors));
    let frobenius = hurwitz_number(&BranchProfile::sphere(profiles)?)?;

    let d_fact = factorial(d);
    let exponent = 1 - model.factors as i64;
    let mut lambda_sum = BigRational::zero();
    for lambda in enumerate_partitions(d).into_iter().filter(|l| l.length() <= model.n) {
        let base = BigRational::new(lambda.dimension(), d_fact.clone());
        let mut term = if exponent >= 0 {
            ratio_pow(&base, exponent as usize)
        } else {
            ratio_pow(&base.recip(), exponent.unsigned_abs() as usize)
        };
        for nu in std::iter::once(kappa).chain(std::iter::once(mu)).chain(ts) {
            let chi = character_int(&lambda, nu)?;
            term *= BigRational::new(chi.into(), nu.z());
            if term.is_zero() {
                break;
            }
        }
        lambda_sum += term;
    }
    Ok(NormalCoefficient { frobenius, lambda_sum })
}

/// Every `(κ, μ, μ⁽¹⁾,…,μ⁽ⁿ⁾)` of weight `2k`.
pub fn normal_profile_tuples(k: usize, factors: usize) -> Vec<Vec<Partition>> {
    let parts = enumerate_partitions(2 * k);
    let mut tuples = vec![Vec::new()];
    for _ in 0..factors + 2 {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                parts.iter().map(move |p| {
                    let mut t = t.clone();
                    t.push(p.clone());
                    t
                })
            })
            .collect();
    }
    tuples
}

/// Single constant `c_k` with `frobenius = c_k · lambda_sum` for every
/// profile tuple of degree `2k`, or the table of conflicting ratios.
pub fn normal_proportionality(model: &ModelSpec, k: usize) -> Result<BigRational> {
    let mut constant: Option<BigRational> = None;
    let mut table = String::new();
    let mut consistent = true;
    for tuple in normal_profile_tuples(k, model.factors) {
        let c = normal_model_coefficient(model, &tuple[0], &tuple[1], &tuple[2..])?;
        let label = tuple.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(";");
        let ratio = match (c.frobenius.is_zero(), c.lambda_sum.is_zero()) {
            (true, true) => continue,
            (false, false) => Some(&c.frobenius / &c.lambda_sum),
            _ => None,
        };
        let _ = writeln!(
            table,
            "{label}: frobenius {} lambda-sum {} ratio {}",
            format_rational(&c.frobenius),
            format_rational(&c.lambda_sum),
            ratio.as_ref().map_or("undefined".into(), format_rational)
        );
        match (&constant, ratio) {
            (_, None) => consistent = false,
            (None, Some(r)) => constant = Some(r),
            (Some(c0), Some(r)) if *c0 != r => consistent = false,
            _ => {}
        }
    }
    if !consistent {
        return Err(Error::NoConsistentCalibration(format!(
            "normal model, n = {}, k = {k}: no single constant relates the two forms\n{table}",
            model.factors
        )));
    }
    Ok(constant.unwrap_or_else(BigRational::one))
}

/// One `(k, μ, N)` measurement taken during calibration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CalibrationRow {
    pub k: usize,
    pub mu: Partition,
    pub n: usize,
    #[serde(serialize_with = "crate::serde_rational")]
    pub moment: BigRational,
    /// Hurwitz sum with `α = 0`.
    #[serde(serialize_with = "crate::serde_rational")]
    pub hurwitz_raw: BigRational,
    /// `e` with `moment = N^e · hurwitz_raw`, when such an integer exists.
    pub exponent: Option<i64>,
}

/// Outcome of testing one candidate `length_weight`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CalibrationAttempt {
    pub length_weight: i64,
    /// Offset per `k`; `None` when the rows for that `k` disagree.
    pub offsets: BTreeMap<usize, Option<i64>>,
    pub rule: Option<ExponentRule>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CalibrationReport {
    pub factors: usize,
    pub max_k: usize,
    pub sizes: Vec<usize>,
    pub rule: ExponentRule,
    pub hypothesis: ExponentRule,
    pub hypothesis_holds: bool,
    pub attempts: Vec<CalibrationAttempt>,
    pub rows: Vec<CalibrationRow>,
}

/// Candidate length weights, tried in order; `0` is the μ-independent form.
const LENGTH_WEIGHTS: [i64; 2] = [0, 1];

/// Measures the exponent rule that makes the Hurwitz sum equal the Wick
/// moments for every `μ ⊢ 2k`, `k ≤ max_k`, at each matrix size in `sizes`.
pub fn calibrate_normalization(factors: usize, max_k: usize, sizes: &[usize]) -> Result<CalibrationReport> {
    if factors == 0 || max_k == 0 {
        return Err(Error::InvalidArgument("calibration needs n ≥ 1 and max_k ≥ 1".into()));
    }
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 3 || sizes[0] < 2 {
        return Err(Error::InvalidArgument("calibration needs at least three distinct N ≥ 2".into()));
    }
    check_degree(2 * max_k)?;
    let mut rows = Vec::new();
    for k in 1..=max_k {
        for mu in enumerate_partitions(2 * k) {
            for &n in &sizes {
                let model = ModelSpec::hermitian(n, factors)?;
                let moment = moment_coefficient(&model, &mu)?;
                let hurwitz_raw = raw_hurwitz_sum(n, factors, &mu)?;
                let exponent = if moment.is_zero() || hurwitz_raw.is_zero() {
                    None
                } else {
                    match signed_log(&(&moment / &hurwitz_raw), n as u64) {
                        Some((1, e)) => Some(e),
                        _ => None,
                    }
                };
                rows.push(CalibrationRow { k, mu: mu.clone(), n, moment, hurwitz_raw, exponent });
            }
        }
    }

    let attempts: Vec<CalibrationAttempt> = LENGTH_WEIGHTS.iter().map(|&lw| attempt(lw, max_k, &rows)).collect();
    let hypothesis = ExponentRule::hypothesis(factors);
    let hypothesis_holds = attempts
        .iter()
        .any(|a| a.length_weight == 0 && (1..=max_k).all(|k| a.offsets[&k] == Some(hypothesis.per_degree * k as i64)));
    let Some(rule) = attempts.iter().find_map(|a| a.rule) else {
        return Err(Error::NoConsistentCalibration(discrepancy_table(factors, &attempts, &rows)));
    };
    Ok(CalibrationReport { factors, max_k, sizes, rule, hypothesis, hypothesis_holds, attempts, rows })
}

fn attempt(length_weight: i64, max_k: usize, rows: &[CalibrationRow]) -> CalibrationAttempt {
    let mut offsets = BTreeMap::new();
    for k in 1..=max_k {
        let mut offset: Option<i64> = None;
        let mut ok = true;
        for row in rows.iter().filter(|r| r.k == k) {
            let both_zero = row.moment.is_zero() && row.hurwitz_raw.is_zero();
            if both_zero {
                continue;
            }
            match row.exponent {
                None => ok = false,
                Some(e) => {
                    let o = e - length_weight * row.mu.length() as i64;
                    match offset {
                        None => offset = Some(o),
                        Some(prev) if prev != o => ok = false,
                        _ => {}
                    }
                }
            }
        }
        offsets.insert(k, if ok { Some(offset.unwrap_or(0)) } else { None });
    }
    let per_degree = offsets.get(&1).copied().flatten();
    let linear = per_degree.filter(|&s| offsets.iter().all(|(&k, o)| *o == Some(s * k as i64)));
    CalibrationAttempt {
        length_weight,
        offsets,
        rule: linear.map(|per_degree| ExponentRule { length_weight, per_degree }),
    }
}

fn discrepancy_table(factors: usize, attempts: &[CalibrationAttempt], rows: &[CalibrationRow]) -> String {
    let mut out = format!("n = {factors}\n");
    for a in attempts {
        let _ = writeln!(out, "length weight {}: offsets {:?}", a.length_weight, a.offsets);
    }
    for r in rows {
        let _ = writeln!(
            out,
            "k={} mu={} N={} moment={} hurwitz={} exponent={:?}",
            r.k,
            r.mu,
            r.n,
            format_rational(&r.moment),
            format_rational(&r.hurwitz_raw),
            r.exponent
        );
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Repr {
    Moment,
    Schur,
    Hurwitz,
    Source,
    Frobenius,
}

impl Repr {
    pub fn name(self) -> &'static str {
        match self {
            Repr::Moment => "moment",
            Repr::Schur => "schur",
            Repr::Hurwitz => "hurwitz",
            Repr::Source => "source",
            Repr::Frobenius => "frobenius",
        }
    }
}

/// One row of a coefficient table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesCoefficient {
    pub degree: usize,
    pub mu: Partition,
    pub kappa: Option<Partition>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub profiles: Vec<Partition>,
    #[serde(serialize_with = "crate::serde_rational")]
    pub value: BigRational,
    pub repr: &'static str,
}

/// Rows for every even degree up to `max_degree`, in the order degree,
/// then reverse-lexicographic keys, then representation.
pub fn coefficient_table(
    model: &ModelSpec,
    max_degree: usize,
    reprs: &[Repr],
    ignore_window: bool,
) -> Result<Vec<SeriesCoefficient>> {
    let mut reprs = reprs.to_vec();
    reprs.sort_unstable();
    reprs.dedup();
    let mut out = Vec::new();
    for d in (2..=max_degree).step_by(2) {
        check_degree(d)?;
        if model.kind == ModelKind::NormalProduct {
            for tuple in normal_profile_tuples(d / 2, model.factors) {
                let c = normal_model_coefficient(model, &tuple[0], &tuple[1], &tuple[2..])?;
                out.push(SeriesCoefficient {
                    degree: d,
                    mu: tuple[1].clone(),
                    kappa: Some(tuple[0].clone()),
                    profiles: tuple[2..].to_vec(),
                    value: c.frobenius,
                    repr: Repr::Frobenius.name(),
                });
            }
            continue;
        }
        for mu in enumerate_partitions(d) {
            for &r in &reprs {
                let row = |kappa, value| SeriesCoefficient {
                    degree: d,
                    mu: mu.clone(),
                    kappa,
                    profiles: Vec::new(),
                    value,
                    repr: r.name(),
                };
                match r {
                    Repr::Moment => out.push(row(None, moment_coefficient(model, &mu)?)),
                    Repr::Schur => out.push(row(None, schur_sum_coefficient(model, &mu)?)),
                    Repr::Hurwitz => out.push(row(None, hurwitz_sum_coefficient(model, &mu, ignore_window)?)),
                    Repr::Source => {
                        for kappa in enumerate_partitions(d) {
                            let v = source_coefficient(model, &kappa, &mu, ignore_window)?;
                            out.push(row(Some(kappa), v));
                        }
                    }
                    Repr::Frobenius => {
                        return Err(Error::InvalidArgument("frobenius rows belong to the normal model".into()))
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `N^e` as an exact rational.
pub fn power_of_size(n: usize, e: i64) -> BigRational {
    n_pow(n, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{integer, rational};
    use crate::oracle::Oracle;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn anchor_values() {
        for n in 3..=6 {
            let nn = n as i64;
            let one = ModelSpec::hermitian(n, 1).unwrap();
            let two = ModelSpec::hermitian(n, 2).unwrap();
            assert_eq!(moment_coefficient(&one, &p(&[2])).unwrap(), rational(nn * nn, 2));
            assert_eq!(schur_sum_coefficient(&one, &p(&[2])).unwrap(), rational(nn * nn, 2));
            assert_eq!(moment_coefficient(&two, &p(&[2])).unwrap(), rational(1, 2));
            assert_eq!(schur_sum_coefficient(&two, &p(&[2])).unwrap(), rational(1, 2));
            assert_eq!(moment_coefficient(&one, &p(&[1, 1])).unwrap(), rational(nn * nn, 2));
            assert_eq!(hurwitz_sum_coefficient(&one, &p(&[1, 1]), false).unwrap(), rational(nn * nn, 2));
            assert_eq!(hurwitz_sum_coefficient(&two, &p(&[2]), false).unwrap(), rational(1, 2));
        }
    }

    #[test]
    fn unrestricted_hurwitz_sum_before_correction() {
        assert_eq!(raw_hurwitz_sum(3, 1, &p(&[1, 1])).unwrap(), rational(3, 2));
        assert_eq!(raw_hurwitz_sum(3, 1, &p(&[2])).unwrap(), rational(9, 2));
    }

    #[test]
    fn triple_agreement() {
        for factors in 1..=2 {
            for n in 3..=5 {
                let model = ModelSpec::hermitian(n, factors).unwrap();
                for k in 1..=2 {
                    for mu in enumerate_partitions(2 * k) {
                        let m = moment_coefficient(&model, &mu).unwrap();
                        assert_eq!(schur_sum_coefficient(&model, &mu).unwrap(), m, "schur n={factors} N={n} μ={mu}");
                        assert_eq!(
                            hurwitz_sum_coefficient(&model, &mu, true).unwrap(),
                            m,
                            "hurwitz n={factors} N={n} μ={mu}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn calibration_finds_length_dependent_rule() {
        for factors in 1..=3 {
            let report = calibrate_normalization(factors, 2, &[3, 4, 5]).unwrap();
            assert_eq!(report.rule, ExponentRule::resolved(factors));
            assert!(!report.hypothesis_holds);
            assert!(report.attempts[0].rule.is_none());
        }
        assert!(calibrate_normalization(1, 2, &[3, 4]).is_err());
    }

    #[test]
    fn window_is_enforced() {
        let model = ModelSpec::hermitian(3, 1).unwrap();
        let err = hurwitz_sum_coefficient(&model, &p(&[2, 2]), false).unwrap_err();
        assert!(err.to_string().contains("outside validity window"));
        assert_eq!(
            hurwitz_sum_coefficient(&model, &p(&[2, 2]), true).unwrap(),
            moment_coefficient(&model, &p(&[2, 2])).unwrap()
        );
    }

    #[test]
    fn source_collapse_and_values() {
        for factors in 1..=2 {
            let model = ModelSpec::hermitian(5, factors).unwrap();
            for k in 1..=2 {
                for mu in enumerate_partitions(2 * k) {
                    let total = enumerate_partitions(2 * k).iter().fold(BigRational::zero(), |acc, kappa| {
                        acc + source_coefficient(&model, kappa, &mu, false).unwrap()
                            * power_of_size(5, kappa.length() as i64)
                    });
                    assert_eq!(total, hurwitz_sum_coefficient(&model, &mu, false).unwrap());
                }
            }
        }
        let one = ModelSpec::hermitian(3, 1).unwrap();
        let alpha = one.rule.alpha(&p(&[1, 1]));
        assert_eq!(
            source_coefficient(&one, &p(&[2]), &p(&[1, 1]), false).unwrap(),
            rational(1, 2) * power_of_size(3, alpha)
        );
        assert_eq!(source_coefficient(&one, &p(&[2]), &p(&[2]), false).unwrap(), integer(0));
        assert!(source_coefficient(&one, &p(&[2]), &p(&[1]), false).is_err());
    }

    #[test]
    fn gauge_freedom() {
        let spectrum = vec![Complex64::new(1.0, 0.5), Complex64::new(-0.3, 0.2), Complex64::new(0.7, -1.1)];
        let mut shuffled = spectrum.clone();
        shuffled.rotate_left(1);
        let base = ModelSpec::hermitian(3, 2).unwrap();
        let a = base.clone().with_source(Source::Spectrum(spectrum.clone())).unwrap();
        let b = base.clone().with_source(Source::Spectrum(shuffled)).unwrap();
        // The same spectrum reached through a unitarily conjugated product.
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(spectrum));
        let (q, _) = DMatrix::<Complex64>::from_fn(3, 3, |i, j| {
            Complex64::new((i * 3 + j) as f64 * 0.37 % 1.0, (i + 2 * j) as f64 * 0.11)
        })
        .qr()
        .unpack();
        let c = Source::from_matrices(&[&q * d * q.adjoint()]).unwrap();
        let m = base.with_source(c).unwrap();
        for mu in enumerate_partitions(2) {
            let va = source_contracted(&a, &mu, false).unwrap();
            assert!((va - source_contracted(&b, &mu, false).unwrap()).norm() < 1e-12);
            assert!((va - source_contracted(&m, &mu, false).unwrap()).norm() < 1e-9);
        }
        assert!(moment_coefficient(&a, &p(&[2])).is_err());
    }

    #[test]
    fn normal_model_frobenius_matches_oracle() {
        let oracle = Oracle::default();
        for factors in 1..=2 {
            let model = ModelSpec::normal(4, factors).unwrap();
            for tuple in normal_profile_tuples(1, factors) {
                let c = normal_model_coefficient(&model, &tuple[0], &tuple[1], &tuple[2..]).unwrap();
                let mut profiles = tuple.clone();
                profiles.extend(std::iter::repeat_n(p(&[2]), factors));
                assert_eq!(c.frobenius, oracle.count_factorizations(&profiles).unwrap().over_factorial());
            }
        }
        let model = ModelSpec::normal(4, 1).unwrap();
        let c = normal_model_coefficient(&model, &p(&[2]), &p(&[2]), &[p(&[1, 1])]).unwrap();
        assert_eq!(c.frobenius, integer(0));
        assert!(ModelSpec::normal(4, 0).is_err());
        assert!(normal_model_coefficient(&model, &p(&[2]), &p(&[2]), &[]).is_err());
    }

    #[test]
    fn normal_model_proportionality_depends_on_parity() {
        let even = ModelSpec::normal(4, 2).unwrap();
        assert_eq!(normal_proportionality(&even, 1).unwrap(), integer(2));
        let odd = ModelSpec::normal(4, 1).unwrap();
        assert!(matches!(normal_proportionality(&odd, 1), Err(Error::NoConsistentCalibration(_))));
    }

    #[test]
    fn table_is_sorted_and_complete() {
        let model = ModelSpec::hermitian(4, 2).unwrap();
        let rows = coefficient_table(&model, 4, &[Repr::Hurwitz, Repr::Moment, Repr::Schur], false).unwrap();
        assert_eq!(rows.len(), 3 * (2 + 5));
        assert_eq!(rows[0].mu, p(&[2]));
        assert_eq!(rows[0].repr, "moment");
        for chunk in rows.chunks(3) {
            assert!(chunk.iter().all(|r| r.value == chunk[0].value));
        }
    }
}
