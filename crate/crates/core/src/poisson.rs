//! The Poisson kernel for pluriharmonic functions, the Busemann cocycle,
//! the Poisson integral operator and its boundary diagnostics.
//!
//! At complexity one the kernel is the extremal-length ratio
//!
//! `P(x0, x, u) = Ext_{x0}(F_u) / Ext_x(F_u)`,
//!
//! which transports the Thurston measures exactly:
//! `P(x0, x, u) ρ_{x0}(u) = ρ_x(u)` pointwise. With the Busemann cocycle
//! `β(x0, x, u) = (1/2)(log Ext_{x0}(F_u) - log Ext_x(F_u))` the kernel is
//! the conformal density `P = exp((6g - 6 + 2m) β)`.
//!
//! The Green-formula residual splits a subharmonic test function into its
//! boundary average minus a bulk term weighted by the Green function; the
//! normalization constant of the bulk term is calibrated once on the
//! `|cayley|^2` reference and frozen, turning the `d dc` convention into a
//! falsifiable test.

use num_complex::Complex64;
use std::sync::{Arc, OnceLock};

use crate::foliation::Slope;
use crate::quadrature::{integrate_boundary, integrate_disk, QuadratureResult};
use crate::teich::{extremal_length_slope, unit_hubbard_masur, SurfaceType, TorusPoint};
use crate::testfns::TestFunction;
use crate::{CoreError, Result};

/// A bounded measurable function on the boundary circle: an evaluation map
/// on finite slopes, a value at infinity, and continuity metadata.
#[derive(Clone)]
pub struct BoundaryFunction {
    eval: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    at_infinity: Complex64,
    discontinuities: Vec<f64>,
}

impl BoundaryFunction {
    pub fn new(
        eval: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        at_infinity: Complex64,
        discontinuities: Vec<f64>,
    ) -> Self {
        Self {
            eval: Arc::new(eval),
            at_infinity,
            discontinuities,
        }
    }

    pub fn from_real(f: impl Fn(f64) -> f64 + Send + Sync + 'static, at_infinity: f64) -> Self {
        Self::new(
            move |u| Complex64::new(f(u), 0.0),
            Complex64::new(at_infinity, 0.0),
            Vec::new(),
        )
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(move |_| c, c, Vec::new())
    }

    pub fn eval(&self, u: &Slope) -> Complex64 {
        if u.is_infinite() {
            self.at_infinity
        } else {
            (self.eval)(u.value())
        }
    }

    pub fn eval_at(&self, u: f64) -> Complex64 {
        (self.eval)(u)
    }

    pub fn is_continuous_at(&self, u: &Slope) -> bool {
        if u.is_infinite() {
            return true;
        }
        !self.discontinuities.iter().any(|d| *d == u.value())
    }
}

impl std::fmt::Debug for BoundaryFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BoundaryFunction")
            .field("at_infinity", &self.at_infinity)
            .field("discontinuities", &self.discontinuities)
            .finish()
    }
}

/// A strictly positive Poisson-kernel value; `exp(2ξ β)` for the matching
/// cocycle value `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue(pub f64);

impl KernelValue {
    pub fn value(&self) -> f64 {
        self.0
    }
}

impl From<KernelValue> for f64 {
    fn from(k: KernelValue) -> f64 {
        k.0
    }
}

/// Poisson kernel `P(x0, x, u) = (Ext_{x0}(F_u) / Ext_x(F_u))^ξ` at `ξ = 1`.
pub fn poisson_kernel(x0: &TorusPoint, x: &TorusPoint, u: &Slope) -> KernelValue {
    KernelValue(extremal_length_slope(x0, u) / extremal_length_slope(x, u))
}

/// Busemann cocycle
/// `β(x0, x, u) = (1/2)(log Ext_{x0}(F_u) - log Ext_x(F_u))`,
/// oriented so that `poisson_kernel = exp((6g - 6 + 2m) · busemann)`.
pub fn busemann(x0: &TorusPoint, x: &TorusPoint, u: &Slope) -> f64 {
    0.5 * (extremal_length_slope(x0, u) / extremal_length_slope(x, u)).ln()
}

fn quadrature_or_error(res: QuadratureResult, tol: f64) -> Result<QuadratureResult> {
    if res.converged {
        Ok(res)
    } else {
        Err(CoreError::QuadratureNoConvergence {
            estimate: res.value,
            error_estimate: res.error_estimate,
            tol,
            evaluations: res.evaluations,
        })
    }
}

/// Poisson integral `P[V](x) = ∫ V(u) P(x0, x, u) dμ̂^{x0}(u)`.
///
/// Basepoint independent up to quadrature tolerance: the kernel transports
/// `μ̂^{x0}` to `μ̂^x` whatever the chart point.
pub fn poisson_integral(
    v: &BoundaryFunction,
    x0: &TorusPoint,
    x: &TorusPoint,
    tol: f64,
) -> Result<Complex64> {
    let res = integrate_boundary(
        |u| v.eval_at(u) * poisson_kernel(x0, x, &Slope::new(u)).value(),
        x0,
        tol,
    );
    Ok(quadrature_or_error(res, tol)?.value)
}

/// Real-part convenience wrapper over [`poisson_integral`].
pub fn poisson_integral_real(
    v: &BoundaryFunction,
    x0: &TorusPoint,
    x: &TorusPoint,
    tol: f64,
) -> Result<f64> {
    Ok(poisson_integral(v, x0, x, tol)?.re)
}

/// Schwarz-limit probe: evaluates `P[V]` at `u0 + i h` for each height.
/// When `V` is continuous at the finite slope `u0` the values converge to
/// `V(u0)` as the heights decrease to 0.
pub fn schwarz_probe(
    v: &BoundaryFunction,
    x0: &TorusPoint,
    u0: f64,
    heights: &[f64],
    tol: f64,
) -> Result<Vec<f64>> {
    if heights.is_empty() {
        return Err(CoreError::EmptyScan("schwarz heights"));
    }
    heights
        .iter()
        .map(|h| {
            let x = TorusPoint::new(u0, *h)?;
            poisson_integral_real(v, x0, &x, tol)
        })
        .collect()
}

/// Default truncation radius for bulk integrals. The discarded annulus
/// carries at most `sup|f| · 2 (1 - cut)^2` of weighted mass, which this
/// cut keeps below every tolerance in use.
pub const BULK_RADIUS_CUT: f64 = 0.999_999;

static FROZEN_KAPPA: OnceLock<f64> = OnceLock::new();

/// Calibrates the bulk normalization on the `|cayley|^2` reference: the
/// constant `κ` for which `κ · ∫ Δ|c_x|^2 |g_x| dA = 1`.
pub fn calibrate_kappa(tol: f64) -> Result<f64> {
    let center = TorusPoint::square();
    let reference = TestFunction::PshPower { n: 1, center };
    let res = integrate_disk(
        |zeta| reference.laplacian(zeta).expect("registered Laplacian"),
        &center,
        BULK_RADIUS_CUT,
        tol,
    );
    let res = quadrature_or_error(res, tol)?;
    Ok(1.0 / res.real())
}

/// The frozen bulk normalization; calibrated once per process.
pub fn frozen_kappa() -> f64 {
    *FROZEN_KAPPA.get_or_init(|| calibrate_kappa(1e-9).expect("reference calibration converges"))
}

/// The three terms of the Green formula at a point.
#[derive(Debug, Clone, Copy)]
pub struct GreenFormulaParts {
    /// Analytic value `V(x)`.
    pub value_at_x: f64,
    /// `∫ V(u) P(x0, x, u) dμ̂^{x0}(u)`.
    pub boundary_term: f64,
    /// `κ ∫ ΔV(ζ) |g_x(ζ)| dA(ζ)` with the frozen `κ`.
    pub bulk_term: f64,
}

impl GreenFormulaParts {
    /// `boundary - bulk - V(x)`; zero for every registered test function.
    pub fn residual(&self) -> f64 {
        self.boundary_term - self.bulk_term - self.value_at_x
    }
}

/// Evaluates both sides of the Green formula
/// `V(x) = ∫ V P(x0, x, ·) dμ̂^{x0} - κ ∫ ΔV |g_x| dA`
/// for a registered test function.
pub fn green_formula_residual(
    v: &TestFunction,
    x: &TorusPoint,
    x0: &TorusPoint,
    tol: f64,
) -> Result<GreenFormulaParts> {
    let value_at_x = v
        .value(x.to_complex())
        .ok_or(CoreError::NotRegistered("test function", "interior value"))?;
    if v.laplacian(Complex64::new(0.0, 1.0)).is_none() {
        return Err(CoreError::NotRegistered("test function", "Laplacian"));
    }
    let boundary_tol = (tol * 0.05).min(1e-9);
    let boundary_term = poisson_integral_real(&v.boundary_fn(), x0, x, boundary_tol)?;
    let bulk_term = if v.is_harmonic() {
        // The Laplacian vanishes identically; no quadrature needed.
        0.0
    } else {
        let bulk_tol = tol * 0.5;
        let res = integrate_disk(
            |zeta| v.laplacian(zeta).expect("registered Laplacian"),
            x,
            BULK_RADIUS_CUT,
            bulk_tol,
        );
        frozen_kappa() * quadrature_or_error(res, bulk_tol)?.real()
    };
    Ok(GreenFormulaParts {
        value_at_x,
        boundary_term,
        bulk_term,
    })
}

/// Derivative averaging: the coefficient of `dz^2` in
/// `ξ ∫ V(u) (q_{F_u,x} / ||q_{F_u,x}||) dμ̂^x(u)`.
///
/// For `V` the boundary trace of a holomorphic function `f` continuous up
/// to the boundary, the integrand collapses to `(-1/π) V(u) (u - x)^{-2}`
/// and the average equals `-2i f'(x)` by the residue theorem.
pub fn derivative_average(v: &BoundaryFunction, x: &TorusPoint, tol: f64) -> Result<Complex64> {
    let xi = SurfaceType::ONCE_PUNCTURED_TORUS.xi() as f64;
    let res = integrate_boundary(
        |u| v.eval_at(u) * unit_hubbard_masur(x, &Slope::new(u)),
        x,
        tol,
    );
    Ok(quadrature_or_error(res, tol)?.value * xi)
}

/// The conjugate-kernel average
/// `ξ ∫ V(u) conj(q_{F_u,x}) / ||q_{F_u,x}|| dμ̂^x(u)`,
/// i.e. the `dconj(z)^2` pairing. Vanishes exactly on boundary traces of
/// holomorphic functions: the homogeneous tangential Cauchy-Riemann
/// condition.
pub fn antiholomorphic_average(
    v: &BoundaryFunction,
    x: &TorusPoint,
    tol: f64,
) -> Result<Complex64> {
    let xi = SurfaceType::ONCE_PUNCTURED_TORUS.xi() as f64;
    let res = integrate_boundary(
        |u| v.eval_at(u) * unit_hubbard_masur(x, &Slope::new(u)).conj(),
        x,
        tol,
    );
    Ok(quadrature_or_error(res, tol)?.value * xi)
}

/// Max modulus of the tangential Cauchy-Riemann defect over a grid of
/// interior points. Holomorphic boundary traces give (numerical) zero; a
/// generic non-CR function is flagged by a value far above tolerance.
pub fn cr_check(v: &BoundaryFunction, grid: &[TorusPoint], tol: f64) -> Result<f64> {
    let mut max = 0.0f64;
    for x in grid {
        max = max.max(antiholomorphic_average(v, x, tol)?.norm());
    }
    Ok(max)
}

/// Default evaluation grid for [`cr_check`].
pub fn default_cr_grid() -> Vec<TorusPoint> {
    let mut grid = Vec::new();
    for re in [-1.0, 0.0, 1.0] {
        for im in [0.5, 1.0, 2.0] {
            grid.push(TorusPoint::new(re, im).expect("interior grid point"));
        }
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfns::{antiholomorphic_trace, holomorphic_trace, holomorphic_trace_deriv};

    fn tau(re: f64, im: f64) -> TorusPoint {
        TorusPoint::new(re, im).unwrap()
    }

    #[test]
    fn kernel_examples() {
        let x = tau(0.7, 0.4);
        assert_eq!(poisson_kernel(&x, &x, &Slope::new(1.2)).value(), 1.0);
        let k = poisson_kernel(&tau(0.0, 1.0), &tau(0.0, 2.0), &Slope::new(0.0));
        assert!((k.value() - 0.5).abs() < 1e-15);
        let k = poisson_kernel(&tau(0.0, 1.0), &tau(0.0, 2.0), &Slope::infinity());
        assert!((k.value() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn busemann_cocycle_and_kernel_relation() {
        let x = tau(0.2, 0.9);
        let y = tau(-1.0, 2.0);
        let z = tau(0.5, 0.3);
        let u = Slope::new(0.8);
        assert_eq!(busemann(&x, &x, &u), 0.0);
        let lhs = busemann(&x, &y, &u) + busemann(&y, &z, &u);
        let rhs = busemann(&x, &z, &u);
        assert!((lhs - rhs).abs() < 1e-14);
        // P = exp(2ξ β) with 2ξ = 6g - 6 + 2m = 2.
        let p = poisson_kernel(&x, &y, &u).value();
        assert!((p - (2.0 * busemann(&x, &y, &u)).exp()).abs() < 1e-14 * p);
    }

    #[test]
    fn kernel_is_reciprocal() {
        let x = tau(0.3, 1.7);
        let y = tau(-0.9, 0.6);
        let u = Slope::new(-2.4);
        let prod = poisson_kernel(&x, &y, &u).value() * poisson_kernel(&y, &x, &u).value();
        assert!((prod - 1.0).abs() < 1e-14);
    }

    #[test]
    fn constant_reproduces() {
        let one = BoundaryFunction::constant(Complex64::new(1.0, 0.0));
        let v = poisson_integral_real(&one, &tau(0.0, 1.0), &tau(1.4, 0.3), 1e-10).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn harmonic_reproduction_examples() {
        let f = TestFunction::HarmonicRe {
            n: 1,
            center: tau(0.0, 1.0),
        };
        let v = f.boundary_fn();
        let x0 = tau(0.0, 1.0);
        let at_i = poisson_integral_real(&v, &x0, &tau(0.0, 1.0), 1e-9).unwrap();
        assert!(at_i.abs() < 1e-8);
        let at_2i = poisson_integral_real(&v, &x0, &tau(0.0, 2.0), 1e-9).unwrap();
        assert!((at_2i - 1.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn indicator_harmonic_measure_example() {
        let v = TestFunction::Indicator { lo: 0.0, hi: 1.0 }.boundary_fn();
        let at_i = poisson_integral_real(&v, &tau(0.0, 1.0), &tau(0.0, 1.0), 1e-9).unwrap();
        assert!((at_i - 0.25).abs() < 1e-8);
    }

    #[test]
    fn basepoint_independence() {
        let f = TestFunction::HarmonicIm {
            n: 2,
            center: tau(0.3, 1.0),
        };
        let v = f.boundary_fn();
        let x = tau(-0.8, 1.7);
        let tol = 1e-9;
        let a = poisson_integral_real(&v, &tau(0.0, 1.0), &x, tol).unwrap();
        let b = poisson_integral_real(&v, &tau(2.0, 0.4), &x, tol).unwrap();
        assert!((a - b).abs() <= 2.0 * tol);
    }

    #[test]
    fn schwarz_constant_is_constant() {
        let c = BoundaryFunction::constant(Complex64::new(0.75, 0.0));
        let vals = schwarz_probe(&c, &tau(0.0, 1.0), 0.0, &[1.0, 0.1, 0.01], 1e-10).unwrap();
        for v in vals {
            assert!((v - 0.75).abs() < 1e-9);
        }
    }

    #[test]
    fn kappa_calibrates_to_riesz_constant() {
        // With the (2π)^{-1} Green normalization already in the weight, the
        // reference forces κ = 1.
        let kappa = calibrate_kappa(1e-9).unwrap();
        assert!((kappa - 1.0).abs() < 1e-8, "kappa {kappa}");
    }

    #[test]
    fn green_formula_on_reference_pair() {
        let x = tau(0.0, 1.0);
        let x0 = tau(0.0, 1.0);
        let parts =
            green_formula_residual(&TestFunction::PshPower { n: 1, center: x }, &x, &x0, 1e-6)
                .unwrap();
        assert!((parts.boundary_term - 1.0).abs() < 1e-8);
        assert_eq!(parts.value_at_x, 0.0);
        assert!((parts.bulk_term - 1.0).abs() < 1e-6);
        assert!(parts.residual().abs() < 1e-6);
    }

    #[test]
    fn green_formula_quartic_bulk_is_one() {
        // |c|^4 at the pole: boundary 1, value 0, bulk 1 by the radial
        // integral (1/2π) ∫ 16 |z|^2 log(1/|z|) dA = 1.
        let x = tau(0.0, 1.0);
        let parts =
            green_formula_residual(&TestFunction::PshPower { n: 2, center: x }, &x, &x, 1e-5)
                .unwrap();
        assert!(
            (parts.bulk_term - 1.0).abs() < 1e-5,
            "bulk {}",
            parts.bulk_term
        );
        assert!(parts.residual().abs() < 1e-5);
    }

    #[test]
    fn green_formula_harmonic_has_no_bulk() {
        let x = tau(0.4, 1.2);
        let parts = green_formula_residual(
            &TestFunction::HarmonicRe {
                n: 3,
                center: tau(0.0, 1.0),
            },
            &x,
            &tau(0.0, 1.0),
            1e-7,
        )
        .unwrap();
        assert_eq!(parts.bulk_term, 0.0);
        assert!(parts.residual().abs() < 1e-7);
    }

    #[test]
    fn derivative_average_examples() {
        let x = tau(0.0, 1.0);
        // V ≡ 1 integrates a mean-zero rotation: zero.
        let one = BoundaryFunction::constant(Complex64::new(1.0, 0.0));
        let d = derivative_average(&one, &x, 1e-10).unwrap();
        assert!(d.norm() < 1e-10);

        // Cayley trace at the center: -2i f'(i) = -1.
        let v = holomorphic_trace(&x, 1);
        let d = derivative_average(&v, &x, 1e-10).unwrap();
        assert!((d - Complex64::new(-1.0, 0.0)).norm() < 1e-9, "got {d}");
    }

    #[test]
    fn derivative_average_matches_residue_oracle_off_center() {
        let w = tau(0.0, 1.0);
        let x = tau(0.6, 1.8);
        for n in [1u32, 2, 3] {
            let v = holomorphic_trace(&w, n);
            let d = derivative_average(&v, &x, 1e-10).unwrap();
            let expect = Complex64::new(0.0, -2.0) * holomorphic_trace_deriv(&w, n, x.to_complex());
            assert!((d - expect).norm() < 1e-8, "n={n}: {d} vs {expect}");
        }
    }

    #[test]
    fn cr_check_flags_the_right_functions() {
        let grid = default_cr_grid();
        let holo = cr_check(&holomorphic_trace(&tau(0.0, 1.0), 2), &grid, 1e-10).unwrap();
        assert!(holo < 1e-8, "holomorphic defect {holo}");
        let anti = cr_check(&antiholomorphic_trace(&tau(0.0, 1.0), 2), &grid, 1e-10).unwrap();
        assert!(anti > 1e-2, "antiholomorphic defect {anti}");
        let constant = cr_check(
            &BoundaryFunction::constant(Complex64::new(3.0, 0.0)),
            &grid,
            1e-10,
        )
        .unwrap();
        assert!(constant < 1e-9);
    }
}
