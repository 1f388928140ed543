//! Monte Carlo estimators and the parallel driver.
//!
//! Samples are split into contiguous per-worker chunks; worker `w` draws
//! from substream `w`. Partial moments are merged in worker order, so a
//! fixed `(seed, workers)` pair always produces the same bits.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::samplers::{EnsembleConfig, EnsembleKind, Sampler};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::schur::{power_sums_of_matrix, principal_specialization, schur_from_power_sums, schur_of_matrix};
use crate::weingarten::MonomialSpec;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: Complex64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl MCEstimate {
    /// `|mean − exact|` in units of the standard error.
    pub fn z_score(&self, exact: Complex64) -> f64 {
        let diff = (self.mean - exact).norm();
        if self.std_error > 0.0 {
            diff / self.std_error
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    /// Agreement within `sigmas` standard errors. When every sample is
    /// identical the standard error is zero and a relative `1e-9` slack
    /// absorbs floating rounding instead.
    pub fn within(&self, exact: Complex64, sigmas: f64) -> bool {
        let diff = (self.mean - exact).norm();
        diff <= (sigmas * self.std_error).max(1e-9 * (1.0 + exact.norm()))
    }
}

/// Streaming mean and `Σ|x − mean|²`.
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    count: u64,
    mean: Complex64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: Complex64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += (delta.conj() * (x - self.mean)).re;
    }

    fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        let total = self.count + other.count;
        let delta = other.mean - self.mean;
        self.m2 += other.m2 + delta.norm_sqr() * (self.count as f64 * other.count as f64 / total as f64);
        self.mean += delta * (other.count as f64 / total as f64);
        self.count = total;
    }

    fn finish(&self, seed: u64) -> MCEstimate {
        let se = if self.count > 1 {
            (self.m2 / (self.count - 1) as f64).sqrt() / (self.count as f64).sqrt()
        } else {
            f64::INFINITY
        };
        MCEstimate { mean: self.mean, std_error: se, samples: self.count, seed }
    }
}

/// Worker count from the machine when not given.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn chunk(samples: u64, workers: usize, w: usize) -> u64 {
    let q = samples / workers as u64;
    let r = samples % workers as u64;
    q + u64::from((w as u64) < r)
}

/// Estimates `width` observables at once; `f` fills one sample's values.
pub fn estimate_many<F>(config: &EnsembleConfig, samples: u64, workers: usize, width: usize, f: F) -> Vec<MCEstimate>
where
    F: Fn(&mut Sampler, &mut [Complex64]) + Sync,
{
    let workers = workers.max(1);
    let run = |w: usize| {
        let mut sampler = Sampler::new(config, w as u64);
        let mut acc = vec![Moments::default(); width];
        let mut buf = vec![Complex64::zero(); width];
        for _ in 0..chunk(samples, workers, w) {
            f(&mut sampler, &mut buf);
            for (m, &x) in acc.iter_mut().zip(&buf) {
                m.push(x);
            }
        }
        acc
    };
    let parts: Vec<Vec<Moments>> = if workers == 1 {
        vec![run(0)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers).map(|w| s.spawn(move || run(w))).collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    let mut total = vec![Moments::default(); width];
    for part in &parts {
        for (t, m) in total.iter_mut().zip(part) {
            t.merge(m);
        }
    }
    total.iter().map(|m| m.finish(config.seed)).collect()
}

/// Single-observable form of [`estimate_many`].
pub fn estimate<F>(config: &EnsembleConfig, samples: u64, workers: usize, f: F) -> MCEstimate
where
    F: Fn(&mut Sampler) -> Complex64 + Sync,
{
    estimate_many(config, samples, workers, 1, |s, out| out[0] = f(s)).remove(0)
}

/// `W = H₁C₁⋯H_nC_n`; a slot without a matrix means `C_i = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceWord {
    n: usize,
    sources: Vec<Option<DMatrix<Complex64>>>,
}

impl TraceWord {
    pub fn identity(n: usize, factors: usize) -> Self {
        TraceWord { n, sources: vec![None; factors] }
    }

    pub fn with_sources(n: usize, sources: Vec<Option<DMatrix<Complex64>>>) -> Result<Self> {
        for c in sources.iter().flatten() {
            if c.nrows() != n || c.ncols() != n {
                return Err(Error::InvalidArgument(format!(
                    "source matrix is {}x{}, expected {n}x{n}",
                    c.nrows(),
                    c.ncols()
                )));
            }
        }
        if sources.is_empty() {
            return Err(Error::InvalidArgument("a trace word needs at least one slot".into()));
        }
        Ok(TraceWord { n, sources })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> usize {
        self.sources.len()
    }

    /// Draws fresh `H_i` from GUE and multiplies out the word.
    pub fn sample(&self, sampler: &mut Sampler) -> DMatrix<Complex64> {
        let mut w = DMatrix::<Complex64>::identity(self.n, self.n);
        for c in &self.sources {
            w *= sampler.gue();
            if let Some(c) = c {
                w *= c;
            }
        }
        w
    }
}

fn check_size(config: &EnsembleConfig, n: usize) -> Result<()> {
    if config.n != n {
        return Err(Error::InvalidArgument(format!("matrix size {n} does not match configured N = {}", config.n)));
    }
    Ok(())
}

/// `E[∏_i tr W^{μ_i}]` with independent GUE draws per slot.
pub fn mc_moment(
    word: &TraceWord,
    mu: &Partition,
    samples: u64,
    config: &EnsembleConfig,
    workers: usize,
) -> Result<MCEstimate> {
    check_size(config, word.size())?;
    let top = mu.parts().first().copied().unwrap_or(0);
    Ok(estimate(config, samples, workers, |s| {
        let w = word.sample(s);
        let p = power_sums_of_matrix(&w, top).expect("square");
        p.monomial(mu)
    }))
}

/// Left side of `∫ s_λ(UAU†B) d*U = s_λ(A) s_λ(B) / s_λ(I_N)` by sampling,
/// right side exactly from the matrices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitEstimate {
    pub lhs: MCEstimate,
    pub rhs: Complex64,
}

pub fn mc_schur_split(
    lambda: &Partition,
    a: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
    samples: u64,
    config: &EnsembleConfig,
    workers: usize,
) -> Result<SplitEstimate> {
    let n = a.nrows();
    for m in [a, b] {
        if m.nrows() != m.ncols() {
            return Err(Error::NonSquare { rows: m.nrows(), cols: m.ncols() });
        }
    }
    if b.nrows() != n {
        return Err(Error::InvalidArgument("A and B must have the same size".into()));
    }
    check_size(config, n)?;
    if lambda.length() > n {
        return Err(Error::LengthExceedsSize { length: lambda.length(), n });
    }
    let dim = principal_specialization(lambda, n).to_f64().expect("finite");
    let rhs = schur_of_matrix(lambda, a)? * schur_of_matrix(lambda, b)? / dim;
    let haar = config.with_kind(EnsembleKind::HaarUnitary);
    let lhs = estimate(&haar, samples, workers, |s| {
        let u = s.haar_unitary();
        let x = &u * a * u.adjoint() * b;
        schur_of_matrix(lambda, &x).expect("square")
    });
    Ok(SplitEstimate { lhs, rhs })
}

/// Haar average of `U_{a_1 b_1}⋯ conj(U_{a'_1 b'_1})⋯`.
pub fn mc_weingarten_monomial(
    m: &MonomialSpec,
    samples: u64,
    config: &EnsembleConfig,
    workers: usize,
) -> Result<MCEstimate> {
    check_size(config, m.n)?;
    let haar = config.with_kind(EnsembleKind::HaarUnitary);
    Ok(estimate(&haar, samples, workers, |s| {
        let u = s.haar_unitary();
        let mut x = Complex64::new(1.0, 0.0);
        for (&i, &j) in m.a.iter().zip(&m.b) {
            x *= u[(i - 1, j - 1)];
        }
        for (&i, &j) in m.a_prime.iter().zip(&m.b_prime) {
            x *= u[(i - 1, j - 1)].conj();
        }
        x
    }))
}

/// `E[s_λ(H)]` over GUE for each λ, from shared draws.
pub fn mc_gaussian_schur(
    lambdas: &[Partition],
    samples: u64,
    config: &EnsembleConfig,
    workers: usize,
) -> Vec<MCEstimate> {
    let top = lambdas.iter().map(Partition::weight).max().unwrap_or(0);
    let gue = config.with_kind(EnsembleKind::Gue);
    estimate_many(&gue, samples, workers, lambdas.len(), |s, out| {
        let h = s.gue();
        let p = power_sums_of_matrix(&h, top).expect("square");
        for (o, l) in out.iter_mut().zip(lambdas) {
            *o = schur_from_power_sums(l, &p);
        }
    })
}

/// `E[tr M M†]` over the normal-matrix ensemble.
pub fn mc_normal_second_moment(samples: u64, config: &EnsembleConfig, workers: usize) -> MCEstimate {
    let normal = config.with_kind(EnsembleKind::Normal);
    estimate(&normal, samples, workers, |s| {
        let m = s.normal_matrix();
        Complex64::new(m.iter().map(|x| x.norm_sqr()).sum(), 0.0)
    })
}
