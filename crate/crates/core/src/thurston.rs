//! Thurston probability measures on the circle of projective measured
//! foliations.
//!
//! For a base point `τ`, the cone construction normalizes the Thurston
//! measure to a probability measure on the unit extremal-length sphere; in
//! the slope chart it is the Cauchy law
//!
//! `dμ̂^τ(u) = (1/π) · Im τ / |u - τ|^2 du`.
//!
//! Basepoint change multiplies densities by the extremal-length ratio, the
//! complexity-one conformal-density cocycle. Sampling is exact via the
//! Cauchy quantile.

use crate::foliation::{mcg_apply_point, mcg_apply_slope, MappingClass, Slope};
use crate::quadrature::{integrate_boundary_real, uniform_open01, SeedStream};
use crate::teich::{extremal_length_slope, TorusPoint};
use crate::{CoreError, Result};
use std::f64::consts::PI;

/// The Thurston probability measure `μ̂^x` on the boundary circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryMeasure {
    base: TorusPoint,
}

impl BoundaryMeasure {
    pub fn new(base: TorusPoint) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &TorusPoint {
        &self.base
    }

    /// Density in the `u` chart: `(1/π) Im τ / |u - τ|^2`. The single point
    /// at infinity is null; its density value in this chart is 0.
    pub fn density(&self, u: &Slope) -> f64 {
        if u.is_infinite() {
            return 0.0;
        }
        let du = u.value() - self.base.re();
        let im = self.base.im();
        im / (PI * (du * du + im * im))
    }

    /// Cumulative distribution of the slope law.
    pub fn cdf(&self, u: f64) -> f64 {
        0.5 + ((u - self.base.re()) / self.base.im()).atan() / PI
    }

    /// Quantile (inverse CDF) on `(0, 1)`.
    pub fn quantile(&self, v: f64) -> f64 {
        self.base.re() + self.base.im() * (PI * (v - 0.5)).tan()
    }

    /// `n` i.i.d. draws, deterministic for a fixed seed.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<Slope> {
        self.sample_stream(n, &SeedStream::new(seed, 0))
    }

    /// Stream-addressed variant of [`BoundaryMeasure::sample`].
    pub fn sample_stream(&self, n: usize, stream: &SeedStream) -> Vec<Slope> {
        let mut rng = stream.rng();
        (0..n)
            .map(|_| Slope::new(self.quantile(uniform_open01(&mut rng))))
            .collect()
    }
}

/// Basepoint-change density `(Ext_x(F_u) / Ext_y(F_u))^ξ` at complexity one.
///
/// Scale-invariant in the representative, multiplicative in `(x, y)`, and it
/// transports densities exactly: `ρ_y(u) = rebase_density(x, y, u) · ρ_x(u)`.
pub fn rebase_density(x: &TorusPoint, y: &TorusPoint, u: &Slope) -> f64 {
    extremal_length_slope(x, u) / extremal_length_slope(y, u)
}

/// Two-sample free Kolmogorov-Smirnov statistic of mapped draws from `μ̂^x`
/// against the analytic law of `μ̂^{γ·x}`; small values certify the
/// pushforward identity `γ_* μ̂^x = μ̂^{γ·x}`.
pub fn mcg_pushforward_check(gamma: &MappingClass, x: &TorusPoint, n: usize, seed: u64) -> f64 {
    assert!(n >= 1000, "pushforward check needs n >= 1000");
    let mu = BoundaryMeasure::new(*x);
    let target = BoundaryMeasure::new(mcg_apply_point(gamma, x));
    let mapped: Vec<Slope> = mu
        .sample(n, seed)
        .iter()
        .map(|u| mcg_apply_slope(gamma, u))
        .collect();
    ks_statistic(&mapped, |u| target.cdf(u))
}

/// One-sample Kolmogorov-Smirnov distance between an empirical sample of
/// slopes and a continuous CDF. Slopes at infinity sit at the top of the
/// order, where the reference CDF is 1.
pub fn ks_statistic(samples: &[Slope], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut finite: Vec<f64> = samples
        .iter()
        .filter(|s| !s.is_infinite())
        .map(|s| s.value())
        .collect();
    finite.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, u) in finite.iter().enumerate() {
        let f = cdf(*u);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    // Any samples at infinity contribute the gap between the empirical mass
    // of the finite part and 1.
    d.max(1.0 - finite.len() as f64 / n)
}

/// Asymptotic Kolmogorov-Smirnov acceptance coefficient at significance
/// 0.01: statistics above `KS_COEFF / sqrt(n)` reject.
pub const KS_COEFF: f64 = 1.63;

/// `∫ rebase_density(x0, x, u) dμ̂^{x0}(u)` by adaptive quadrature.
///
/// Constancy of the Hubbard-Masur function makes this integral exactly 1
/// for every pair of base points.
pub fn hm_volume_check(x0: &TorusPoint, x: &TorusPoint, tol: f64) -> Result<f64> {
    let res = integrate_boundary_real(|u| rebase_density(x0, x, &Slope::new(u)), x0, tol);
    if !res.converged {
        return Err(CoreError::QuadratureNoConvergence {
            estimate: res.value,
            error_estimate: res.error_estimate,
            tol,
            evaluations: res.evaluations,
        });
    }
    Ok(res.real())
}

/// Lebesgue measure of an axis rectangle in the `[a, b]` plane; the planar
/// model of the Thurston measure on measured foliations at complexity one,
/// where scaling a set by `t` scales the measure by `t^2`.
pub fn mf_rect_measure(a_lo: f64, a_hi: f64, b_lo: f64, b_hi: f64) -> f64 {
    (a_hi - a_lo).max(0.0) * (b_hi - b_lo).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau(re: f64, im: f64) -> TorusPoint {
        TorusPoint::new(re, im).unwrap()
    }

    #[test]
    fn density_examples() {
        let m = BoundaryMeasure::new(tau(0.0, 1.0));
        assert!((m.density(&Slope::new(0.0)) - 1.0 / PI).abs() < 1e-16);
        assert!((m.density(&Slope::new(1.0)) - 0.5 / PI).abs() < 1e-16);
        assert_eq!(m.density(&Slope::infinity()), 0.0);
    }

    #[test]
    fn density_normalizes() {
        // ∫ ρ_m(u) du over the line, written as ∫ (ρ_m / ρ_other) dμ̂^other
        // so the quadrature chart belongs to a different base point.
        let other = tau(0.7, 2.0);
        let chart = BoundaryMeasure::new(other);
        for base in [tau(0.0, 1.0), tau(2.0, 0.3), tau(-1.4, 5.0)] {
            let m = BoundaryMeasure::new(base);
            let total = integrate_boundary_real(
                |u| m.density(&Slope::new(u)) / chart.density(&Slope::new(u)),
                &other,
                1e-10,
            );
            assert!(total.converged);
            assert!((total.real() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rebase_density_examples() {
        let x = tau(0.4, 1.3);
        assert_eq!(rebase_density(&x, &x, &Slope::new(2.0)), 1.0);
        let v = rebase_density(&tau(0.0, 1.0), &tau(0.0, 2.0), &Slope::new(0.0));
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rebase_transports_densities_exactly() {
        let mut state = 1u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100_000 {
            let x = tau(next() * 6.0 - 3.0, next() * 4.0 + 0.2);
            let y = tau(next() * 6.0 - 3.0, next() * 4.0 + 0.2);
            let u = Slope::new((PI * (next() - 0.5)).tan());
            let lhs = BoundaryMeasure::new(y).density(&u);
            let rhs = rebase_density(&x, &y, &u) * BoundaryMeasure::new(x).density(&u);
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1e-300));
        }
    }

    #[test]
    fn rebase_cocycle_telescopes() {
        let x = tau(0.0, 1.0);
        let y = tau(1.0, 0.5);
        let z = tau(-0.7, 2.2);
        let u = Slope::new(0.37);
        let lhs = rebase_density(&x, &z, &u);
        let rhs = rebase_density(&x, &y, &u) * rebase_density(&y, &z, &u);
        assert!((lhs - rhs).abs() <= 1e-14 * lhs);
    }

    #[test]
    fn sampling_is_deterministic_and_median_centered() {
        let m = BoundaryMeasure::new(tau(1.5, 0.8));
        let a = m.sample(1_000_000, 9);
        let b = m.sample(1_000_000, 9);
        assert_eq!(a.len(), b.len());
        assert!(a.iter().zip(&b).all(|(p, q)| p == q));

        let mut vals: Vec<f64> = a.iter().map(|s| s.value()).collect();
        vals.sort_by(f64::total_cmp);
        let median = vals[vals.len() / 2];
        // Median of the Cauchy law is the center; IQR is 2 Im τ.
        let iqr = vals[3 * vals.len() / 4] - vals[vals.len() / 4];
        let band = 3.0 * iqr / (vals.len() as f64).sqrt();
        assert!((median - 1.5).abs() <= band, "median {median} band {band}");
    }

    #[test]
    fn empirical_cdf_matches_analytic() {
        let m = BoundaryMeasure::new(tau(0.0, 1.0));
        let n = 100_000;
        let sample = m.sample(n, 4);
        let d = ks_statistic(&sample, |u| m.cdf(u));
        assert!(d < KS_COEFF / (n as f64).sqrt(), "KS {d}");
    }

    #[test]
    fn pushforward_by_twist_and_rotation() {
        let n = 100_000;
        let bound = KS_COEFF / (n as f64).sqrt();
        let d1 = mcg_pushforward_check(&MappingClass::T, &tau(0.0, 1.0), n, 11);
        assert!(d1 < bound, "twist KS {d1}");
        let d2 = mcg_pushforward_check(&MappingClass::S, &tau(0.0, 2.0), n, 12);
        assert!(d2 < bound, "rotation KS {d2}");
        let d3 = mcg_pushforward_check(&MappingClass::IDENTITY, &tau(0.3, 0.9), n, 13);
        assert!(d3 < bound, "identity KS {d3}");
    }

    #[test]
    fn hm_volume_examples() {
        let one = hm_volume_check(&tau(0.0, 1.0), &tau(0.0, 1.0), 1e-12).unwrap();
        assert!((one - 1.0).abs() < 1e-12);
        let v = hm_volume_check(&tau(0.0, 1.0), &tau(0.0, 2.0), 1e-11).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        let w = hm_volume_check(&tau(0.0, 1.0), &tau(3.0, 0.5), 1e-11).unwrap();
        assert!((w - 1.0).abs() < 1e-10);
    }

    #[test]
    fn planar_homogeneity_is_exact_on_rectangles() {
        let m1 = mf_rect_measure(0.25, 1.5, -2.0, 0.5);
        for t in [0.5f64, 2.0, 3.0] {
            let mt = mf_rect_measure(0.25 * t, 1.5 * t, -2.0 * t, 0.5 * t);
            assert_eq!(mt, t * t * m1);
        }
    }
}
