//! Registered boundary/interior test functions for the verification suites.
//!
//! Each family is registered with an analytic boundary trace, an analytic
//! interior value where one exists, and an analytic Laplacian, so every
//! quadrature result can be checked against a closed form:
//!
//! * `HarmonicRe`/`HarmonicIm`: real and imaginary parts of `c_w(τ)^n`,
//!   where `c_w` is the Moebius map of the half-plane onto the disk sending
//!   `w` to 0. Harmonic, with unimodular boundary trace `c_w(u)^n`.
//! * `PshPower`: `|c_w(τ)|^{2n}`, subharmonic with boundary trace 1 and
//!   Laplacian `4 n^2 |c_w|^{2n-2} |c_w'|^2`.
//! * `Indicator`: the indicator of a boundary interval; its harmonic
//!   extension is the angle-subtended harmonic measure.
//! * `GaussBump`: a smooth rapidly decaying trace used by the Schwarz-limit
//!   probes; no closed-form extension is registered.

use num_complex::Complex64;

use crate::poisson::BoundaryFunction;
use crate::teich::TorusPoint;

/// `c_w(τ) = (τ - w)/(τ - conj w)`: the Moebius chart at `w`.
pub fn cayley(w: &TorusPoint, z: Complex64) -> Complex64 {
    (z - w.to_complex()) / (z - w.to_complex().conj())
}

/// Derivative `c_w'(τ) = 2i Im w / (τ - conj w)^2`.
pub fn cayley_deriv(w: &TorusPoint, z: Complex64) -> Complex64 {
    let d = z - w.to_complex().conj();
    Complex64::new(0.0, 2.0 * w.im()) / (d * d)
}

/// A test function with registered analytic data.
#[derive(Debug, Clone, Copy)]
pub enum TestFunction {
    Constant { c: f64 },
    HarmonicRe { n: u32, center: TorusPoint },
    HarmonicIm { n: u32, center: TorusPoint },
    PshPower { n: u32, center: TorusPoint },
    Indicator { lo: f64, hi: f64 },
    GaussBump { scale: f64 },
}

impl TestFunction {
    pub fn name(&self) -> String {
        match self {
            TestFunction::Constant { c } => format!("const[{c}]"),
            TestFunction::HarmonicRe { n, center } => format!("re-cayley^{n}@{center}"),
            TestFunction::HarmonicIm { n, center } => format!("im-cayley^{n}@{center}"),
            TestFunction::PshPower { n, center } => format!("|cayley|^{}@{center}", 2 * n),
            TestFunction::Indicator { lo, hi } => format!("indicator({lo},{hi})"),
            TestFunction::GaussBump { scale } => format!("gauss[{scale}]"),
        }
    }

    /// Boundary trace at a finite slope.
    pub fn trace(&self, u: f64) -> f64 {
        match self {
            TestFunction::Constant { c } => *c,
            TestFunction::HarmonicRe { n, center } => {
                cayley(center, Complex64::new(u, 0.0)).powu(*n).re
            }
            TestFunction::HarmonicIm { n, center } => {
                cayley(center, Complex64::new(u, 0.0)).powu(*n).im
            }
            TestFunction::PshPower { .. } => 1.0,
            TestFunction::Indicator { lo, hi } => {
                if u > *lo && u < *hi {
                    1.0
                } else {
                    0.0
                }
            }
            TestFunction::GaussBump { scale } => (-(u / scale) * (u / scale)).exp(),
        }
    }

    /// Boundary trace at the point at infinity (`c_w(∞) = 1`).
    pub fn trace_at_infinity(&self) -> f64 {
        match self {
            TestFunction::Constant { c } => *c,
            TestFunction::HarmonicRe { .. } => 1.0,
            TestFunction::HarmonicIm { .. } => 0.0,
            TestFunction::PshPower { .. } => 1.0,
            TestFunction::Indicator { .. } => 0.0,
            TestFunction::GaussBump { .. } => 0.0,
        }
    }

    /// Analytic interior value, when registered.
    pub fn value(&self, z: Complex64) -> Option<f64> {
        match self {
            TestFunction::Constant { c } => Some(*c),
            TestFunction::HarmonicRe { n, center } => Some(cayley(center, z).powu(*n).re),
            TestFunction::HarmonicIm { n, center } => Some(cayley(center, z).powu(*n).im),
            TestFunction::PshPower { n, center } => {
                Some(cayley(center, z).norm_sqr().powi(*n as i32))
            }
            TestFunction::Indicator { lo, hi } => {
                // Harmonic measure of (lo, hi) seen from z.
                let w = ((hi - z.re) / z.im).atan() - ((lo - z.re) / z.im).atan();
                Some(w / std::f64::consts::PI)
            }
            TestFunction::GaussBump { .. } => None,
        }
    }

    /// Analytic Laplacian on the half-plane, when registered.
    pub fn laplacian(&self, z: Complex64) -> Option<f64> {
        match self {
            TestFunction::Constant { .. }
            | TestFunction::HarmonicRe { .. }
            | TestFunction::HarmonicIm { .. }
            | TestFunction::Indicator { .. } => Some(0.0),
            TestFunction::PshPower { n, center } => {
                let c = cayley(center, z);
                let cp = cayley_deriv(center, z);
                let nn = *n as f64;
                Some(4.0 * nn * nn * c.norm_sqr().powi(*n as i32 - 1) * cp.norm_sqr())
            }
            TestFunction::GaussBump { .. } => None,
        }
    }

    pub fn is_harmonic(&self) -> bool {
        matches!(
            self,
            TestFunction::Constant { .. }
                | TestFunction::HarmonicRe { .. }
                | TestFunction::HarmonicIm { .. }
                | TestFunction::Indicator { .. }
        )
    }

    /// The boundary trace packaged for the Poisson operator, with
    /// discontinuities flagged.
    pub fn boundary_fn(&self) -> BoundaryFunction {
        let this = *self;
        let disc = match self {
            TestFunction::Indicator { lo, hi } => vec![*lo, *hi],
            _ => Vec::new(),
        };
        BoundaryFunction::new(
            move |u| Complex64::new(this.trace(u), 0.0),
            Complex64::new(self.trace_at_infinity(), 0.0),
            disc,
        )
    }
}

/// The harmonic reproduction family: `Re` and `Im` of `c_{x0}^n` for
/// `1 <= n <= max_n`.
pub fn harmonic_family(center: &TorusPoint, max_n: u32) -> Vec<TestFunction> {
    let mut fam = Vec::new();
    for n in 1..=max_n {
        fam.push(TestFunction::HarmonicRe { n, center: *center });
        fam.push(TestFunction::HarmonicIm { n, center: *center });
    }
    fam
}

/// The plurisubharmonic family `|c_{center}|^{2n}` for `1 <= n <= max_n`.
pub fn psh_family(center: &TorusPoint, max_n: u32) -> Vec<TestFunction> {
    (1..=max_n)
        .map(|n| TestFunction::PshPower { n, center: *center })
        .collect()
}

/// A holomorphic boundary trace `c_w(u)^n` as a complex boundary function,
/// used by the residue and tangential Cauchy-Riemann checks.
pub fn holomorphic_trace(center: &TorusPoint, n: u32) -> BoundaryFunction {
    let w = *center;
    BoundaryFunction::new(
        move |u| cayley(&w, Complex64::new(u, 0.0)).powu(n),
        Complex64::new(1.0, 0.0),
        Vec::new(),
    )
}

/// The conjugate (antiholomorphic) trace of [`holomorphic_trace`]; the
/// canonical counterexample the tangential Cauchy-Riemann check must flag.
pub fn antiholomorphic_trace(center: &TorusPoint, n: u32) -> BoundaryFunction {
    let w = *center;
    BoundaryFunction::new(
        move |u| cayley(&w, Complex64::new(u, 0.0)).powu(n).conj(),
        Complex64::new(1.0, 0.0),
        Vec::new(),
    )
}

/// Derivative of `c_w^n` at an interior point; the residue-side oracle for
/// the derivative averaging identity.
pub fn holomorphic_trace_deriv(center: &TorusPoint, n: u32, z: Complex64) -> Complex64 {
    cayley(center, z).powu(n - 1) * cayley_deriv(center, z) * n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau(re: f64, im: f64) -> TorusPoint {
        TorusPoint::new(re, im).unwrap()
    }

    #[test]
    fn cayley_centers_at_zero() {
        let w = tau(0.7, 1.9);
        assert!(cayley(&w, w.to_complex()).norm() < 1e-16);
        // Unimodular on the boundary.
        for u in [-5.0, -0.3, 0.0, 2.0, 100.0] {
            assert!((cayley(&w, Complex64::new(u, 0.0)).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn harmonic_trace_matches_rational_form() {
        // Re c_i(u) = (u^2 - 1)/(u^2 + 1) on the boundary.
        let f = TestFunction::HarmonicRe {
            n: 1,
            center: tau(0.0, 1.0),
        };
        for u in [-3.0, -1.0, 0.0, 0.5, 7.0] {
            let expect = (u * u - 1.0) / (u * u + 1.0);
            assert!((f.trace(u) - expect).abs() < 1e-14);
        }
        assert_eq!(f.value(Complex64::new(0.0, 1.0)).unwrap(), 0.0);
        let third = f.value(Complex64::new(0.0, 2.0)).unwrap();
        assert!((third - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn indicator_harmonic_measure() {
        let f = TestFunction::Indicator { lo: 0.0, hi: 1.0 };
        let v = f.value(Complex64::new(0.0, 1.0)).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
    }

    #[test]
    fn psh_laplacian_is_finite_difference_consistent() {
        let f = TestFunction::PshPower {
            n: 2,
            center: tau(0.5, 1.5),
        };
        let z = Complex64::new(-0.3, 0.9);
        let h = 1e-4;
        let v = |z: Complex64| f.value(z).unwrap();
        let fd =
            (v(z + h) + v(z - h) + v(z + Complex64::new(0.0, h)) + v(z - Complex64::new(0.0, h))
                - 4.0 * v(z))
                / (h * h);
        assert!((fd - f.laplacian(z).unwrap()).abs() < 1e-5);
    }

    #[test]
    fn deriv_oracle_value() {
        // d/dτ c_i(τ) at τ = i is -i/2.
        let d = holomorphic_trace_deriv(&tau(0.0, 1.0), 1, Complex64::new(0.0, 1.0));
        assert!((d - Complex64::new(0.0, -0.5)).norm() < 1e-15);
    }
}
