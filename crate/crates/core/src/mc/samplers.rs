//! Matrix samplers for the four ensembles.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::rng::GaussianStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    Gue,
    HaarUnitary,
    Ginibre,
    Normal,
}

/// Which Gaussian normalization the samplers and the Wick oracle use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarianceConvention {
    /// `dμ(H) ∝ e^{−(N/2) tr H²}`, i.e. `E[H_ij H_kl] = δ_il δ_jk / N`.
    #[default]
    InverseN,
    /// `E[H_ij H_kl] = δ_il δ_jk`.
    Unit,
}

impl VarianceConvention {
    /// The covariance `E|H_ij|²` at matrix size `n`.
    pub fn covariance(self, n: usize) -> f64 {
        match self {
            VarianceConvention::InverseN => 1.0 / n as f64,
            VarianceConvention::Unit => 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n: usize,
    pub kind: EnsembleKind,
    pub seed: u64,
    pub variance: VarianceConvention,
}

impl EnsembleConfig {
    pub fn new(n: usize, kind: EnsembleKind, seed: u64) -> Self {
        assert!(n >= 1, "matrix size must be positive");
        EnsembleConfig { n, kind, seed, variance: VarianceConvention::InverseN }
    }

    pub fn with_kind(&self, kind: EnsembleKind) -> Self {
        EnsembleConfig { kind, ..self.clone() }
    }
}

/// One worker's sampler: a random stream plus the ensemble parameters.
#[derive(Clone, Debug)]
pub struct Sampler {
    n: usize,
    covariance: f64,
    kind: EnsembleKind,
    stream: GaussianStream,
}

impl Sampler {
    pub fn new(config: &EnsembleConfig, worker: u64) -> Self {
        Sampler {
            n: config.n,
            covariance: config.variance.covariance(config.n),
            kind: config.kind,
            stream: GaussianStream::new(config.seed, worker),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn stream(&mut self) -> &mut GaussianStream {
        &mut self.stream
    }

    /// Draws from the configured ensemble.
    pub fn sample(&mut self) -> DMatrix<Complex64> {
        match self.kind {
            EnsembleKind::Gue => self.gue(),
            EnsembleKind::HaarUnitary => self.haar_unitary(),
            EnsembleKind::Ginibre => self.ginibre(2.0 * self.covariance),
            EnsembleKind::Normal => self.normal_matrix(),
        }
    }

    /// Hermitian with real diagonal `N(0, v)` and off-diagonal real and
    /// imaginary parts `N(0, v/2)`, `v` the configured covariance.
    pub fn gue(&mut self) -> DMatrix<Complex64> {
        let n = self.n;
        let v = self.covariance;
        let mut h = DMatrix::zeros(n, n);
        for i in 0..n {
            h[(i, i)] = Complex64::new(self.stream.normal_with_variance(v), 0.0);
            for j in i + 1..n {
                let re = self.stream.normal_with_variance(v / 2.0);
                let im = self.stream.normal_with_variance(v / 2.0);
                h[(i, j)] = Complex64::new(re, im);
                h[(j, i)] = Complex64::new(re, -im);
            }
        }
        h
    }

    /// Complex Ginibre with `E|G_ij|² = entry_variance`.
    pub fn ginibre(&mut self, entry_variance: f64) -> DMatrix<Complex64> {
        let n = self.n;
        let half = entry_variance / 2.0;
        DMatrix::from_fn(n, n, |_, _| {
            let re = self.stream.normal_with_variance(half);
            let im = self.stream.normal_with_variance(half);
            Complex64::new(re, im)
        })
    }

    /// Haar unitary: QR of a Ginibre draw with the phases of `diag(R)`
    /// moved into `Q`, so that `R` has a positive real diagonal.
    pub fn haar_unitary(&mut self) -> DMatrix<Complex64> {
        let z = self.ginibre(1.0);
        let qr = z.qr();
        let (mut q, r) = (qr.q(), qr.r());
        for j in 0..self.n {
            let d = r[(j, j)];
            let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
            for i in 0..self.n {
                q[(i, j)] *= phase;
            }
        }
        q
    }

    /// Eigenvalues of an independent Ginibre matrix with entry variance
    /// `2v`, whose joint density is `∏|z_i − z_j|² ∏ e^{−|z_i|²/(2v)}`.
    pub fn normal_eigenvalues(&mut self) -> DVector<Complex64> {
        let g = self.ginibre(2.0 * self.covariance);
        let (_, t) = g.schur().unpack();
        t.diagonal()
    }

    /// `U diag(z) U†` with `U` Haar and `z` from [`Self::normal_eigenvalues`].
    pub fn normal_matrix(&mut self) -> DMatrix<Complex64> {
        let z = self.normal_eigenvalues();
        let u = self.haar_unitary();
        &u * DMatrix::from_diagonal(&z) * u.adjoint()
    }
}

/// `max |(U†U − I)_ij|`.
pub fn unitarity_residual(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    let prod = u.adjoint() * u - DMatrix::<Complex64>::identity(n, n);
    prod.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// `max |(MM† − M†M)_ij|`.
pub fn normality_residual(m: &DMatrix<Complex64>) -> f64 {
    let comm = m * m.adjoint() - m.adjoint() * m;
    comm.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gue_is_hermitian() {
        let mut s = Sampler::new(&EnsembleConfig::new(4, EnsembleKind::Gue, 1), 0);
        let h = s.sample();
        assert!((h.clone() - h.adjoint()).iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn haar_samples_are_unitary() {
        for n in 1..=6 {
            let mut s = Sampler::new(&EnsembleConfig::new(n, EnsembleKind::HaarUnitary, 3), 0);
            for _ in 0..50 {
                assert!(unitarity_residual(&s.sample()) < 1e-10);
            }
        }
    }

    #[test]
    fn normal_samples_commute_with_adjoint() {
        let mut s = Sampler::new(&EnsembleConfig::new(5, EnsembleKind::Normal, 9), 0);
        for _ in 0..50 {
            assert!(normality_residual(&s.sample()) < 1e-8);
        }
    }

    #[test]
    fn ginibre_eigenvalues_match_trace() {
        let mut s = Sampler::new(&EnsembleConfig::new(4, EnsembleKind::Ginibre, 5), 0);
        let mut t = s.clone();
        let z = s.normal_eigenvalues();
        let g = t.ginibre(2.0 * 0.25);
        let sum: Complex64 = z.iter().sum();
        assert!((sum - g.trace()).norm() < 1e-10);
    }

    #[test]
    fn unit_convention() {
        assert_eq!(VarianceConvention::Unit.covariance(5), 1.0);
        assert_eq!(VarianceConvention::InverseN.covariance(4), 0.25);
    }
}
