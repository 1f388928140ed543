//! Numeric moments of the normal-matrix eigenvalue density
//! `∏|z_i − z_j|² ∏ e^{−a|z_i|²}`, `a = 1/(2v)`.
//!
//! The one-point density is `Σ_{j<N} |z|^{2j} e^{−a|z|²} a^{j+1} / (π j!)`,
//! so radial moments reduce to one-dimensional integrals.

/// `ln j!` by direct summation; `j` stays small here.
fn ln_factorial(j: usize) -> f64 {
    (2..=j).map(|i| (i as f64).ln()).sum()
}

/// Composite Simpson rule on `[lo, hi]` with `intervals` (rounded up to even).
pub fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, intervals: usize) -> f64 {
    let m = intervals.max(2).next_multiple_of(2);
    let h = (hi - lo) / m as f64;
    let mut acc = f(lo) + f(hi);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(lo + i as f64 * h);
    }
    acc * h / 3.0
}

/// One-point density at radius `r`.
pub fn one_point_density(r: f64, n: usize, a: f64) -> f64 {
    if r == 0.0 {
        return a / std::f64::consts::PI;
    }
    (0..n).map(|j| (2.0 * j as f64 * r.ln() - a * r * r + (j + 1) as f64 * a.ln() - ln_factorial(j)).exp()).sum::<f64>()
        / std::f64::consts::PI
}

/// `E[Σ_i |z_i|^{2m}]` by quadrature, with `v` the GUE covariance.
pub fn normal_radial_moment(n: usize, v: f64, m: u32) -> f64 {
    let a = 1.0 / (2.0 * v);
    let cutoff = ((4.0 * n as f64 + 8.0 * m as f64 + 60.0) / a).sqrt();
    simpson(|r| 2.0 * std::f64::consts::PI * r * r.powi(2 * m as i32) * one_point_density(r, n, a), 0.0, cutoff, 20_000)
}

/// `E[tr M M†] = E[Σ|z_i|²]` numerically.
pub fn normal_second_moment_quadrature(n: usize, v: f64) -> f64 {
    normal_radial_moment(n, v, 1)
}

/// Closed form `Σ_{j<N} (j+1)/a = N(N+1) v`.
pub fn normal_second_moment_exact(n: usize, v: f64) -> f64 {
    (n * (n + 1)) as f64 * v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_integrates_to_n() {
        for n in 1..=6 {
            let v = 1.0 / n as f64;
            let total = normal_radial_moment(n, v, 0);
            assert!((total - n as f64).abs() < 1e-9, "{total}");
        }
    }

    #[test]
    fn second_moment_matches_closed_form() {
        for n in 1..=8 {
            let v = 1.0 / n as f64;
            let q = normal_second_moment_quadrature(n, v);
            assert!((q - normal_second_moment_exact(n, v)).abs() < 1e-9, "N={n}: {q}");
        }
    }

    #[test]
    fn two_point_radial_integral() {
        // For N = 2 the angular average of |z1 − z2|² is r1² + r2², leaving a
        // two-dimensional radial integral independent of the one-point kernel.
        let v: f64 = 0.5;
        let a = 1.0 / (2.0 * v);
        let cutoff = (60.0 / a).sqrt();
        let weight = |r1: f64, r2: f64| (r1 * r1 + r2 * r2) * (-a * (r1 * r1 + r2 * r2)).exp() * r1 * r2;
        let inner = |g: &dyn Fn(f64, f64) -> f64, r1: f64| simpson(|r2| g(r1, r2), 0.0, cutoff, 400);
        let z = simpson(|r1| inner(&weight, r1), 0.0, cutoff, 400);
        let num = simpson(|r1| inner(&|x, y| (x * x + y * y) * weight(x, y), r1), 0.0, cutoff, 400);
        let direct = num / z;
        assert!((direct - normal_second_moment_quadrature(2, v)).abs() < 1e-8, "{direct}");
    }
}
