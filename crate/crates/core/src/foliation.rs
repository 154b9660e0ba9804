//! Measured foliations on the once-punctured torus and the action of the
//! mapping class group.
//!
//! A measured foliation is a class `[a, b]` in `R^2 / ±`; the line field of
//! slope `b/a` with its transverse Lebesgue measure. Intersection numbers are
//! given by the determinant pairing `i([a,b], [q,p]) = |a p - b q|`, and the
//! `p/q` simple closed curve corresponds to the class `[q, p]`. The mapping
//! class group is `SL(2, Z)` acting on the torus marking.

use crate::teich::TorusPoint;
use crate::{CoreError, Result};

/// The class `[a, b]` of a measured foliation, stored with the canonical
/// representative `a > 0`, or `a = 0` and `b > 0`. The zero foliation is a
/// distinct sentinel excluded from projectivization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasuredFoliation {
    a: f64,
    b: f64,
}

impl MeasuredFoliation {
    /// Canonicalizes `[a, b]` under the sign action.
    pub fn new(a: f64, b: f64) -> Self {
        if a == 0.0 && b == 0.0 {
            return Self { a: 0.0, b: 0.0 };
        }
        // Flip so that a > 0, or a = 0 and b > 0. Negative zero is scrubbed.
        let flip = a < 0.0 || (a == 0.0 && b < 0.0);
        let (a, b) = if flip { (-a, -b) } else { (a, b) };
        Self {
            a: a + 0.0,
            b: b + 0.0,
        }
    }

    /// The zero foliation sentinel.
    pub fn zero() -> Self {
        Self { a: 0.0, b: 0.0 }
    }

    /// The weighted foliation of the `p/q` simple closed curve, i.e. `[q, p]`.
    pub fn from_curve(p: i64, q: i64) -> Self {
        Self::new(q as f64, p as f64)
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0.0 && self.b == 0.0
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Scales the transverse measure by `t >= 0`.
    pub fn scale(&self, t: f64) -> Self {
        Self::new(self.a * t, self.b * t)
    }

    /// Projective class (slope `u = b/a`, infinity when `a = 0`).
    pub fn slope(&self) -> Result<Slope> {
        if self.is_zero() {
            return Err(CoreError::ZeroFoliation);
        }
        Ok(if self.a == 0.0 {
            Slope::infinity()
        } else {
            Slope::new(self.b / self.a)
        })
    }
}

/// Geometric intersection number `i([a,b], [q,p]) = |a p - b q|`.
///
/// Symmetric, bilinear under scaling, and zero against the zero foliation.
pub fn intersection(f: &MeasuredFoliation, g: &MeasuredFoliation) -> f64 {
    (f.a * g.b - f.b * g.a).abs()
}

/// A point of the circle of projective measured foliations: a slope in
/// `R ∪ {∞}`. Rational slopes (weighted simple closed curves) may carry their
/// reduced fraction as metadata; irrational slopes are uniquely ergodic on
/// the torus.
#[derive(Debug, Clone, Copy)]
pub struct Slope {
    value: f64,
    rational: Option<(i64, i64)>,
}

impl Slope {
    /// A slope from a raw value. Any infinity normalizes to the single point
    /// at infinity; `-0.0` normalizes to `0.0`.
    pub fn new(value: f64) -> Self {
        assert!(!value.is_nan(), "slope must not be NaN");
        if value.is_infinite() {
            Self::infinity()
        } else {
            Self {
                value: value + 0.0,
                rational: None,
            }
        }
    }

    /// The point at infinity (the class of `[0, 1]`).
    pub fn infinity() -> Self {
        Self {
            value: f64::INFINITY,
            rational: Some((1, 0)),
        }
    }

    /// The rational slope `p/q`, flagged as a weighted simple closed curve.
    pub fn from_rational(p: i64, q: i64) -> Self {
        if q == 0 {
            return Self::infinity();
        }
        let g = gcd(p.unsigned_abs(), q.unsigned_abs()) as i64;
        let sign = if q < 0 { -1 } else { 1 };
        Self {
            value: p as f64 / q as f64 + 0.0,
            rational: Some((sign * p / g, sign * q / g)),
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }

    /// The reduced fraction `(p, q)` when the slope is known rational.
    pub fn known_rational(&self) -> Option<(i64, i64)> {
        self.rational
    }

    /// A representative foliation of this class: `[1, u]`, or `[0, 1]` at
    /// infinity.
    pub fn representative(&self) -> MeasuredFoliation {
        if self.is_infinite() {
            MeasuredFoliation::new(0.0, 1.0)
        } else {
            MeasuredFoliation::new(1.0, self.value)
        }
    }
}

impl PartialEq for Slope {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// An element of the mapping class group of the once-punctured torus,
/// realized as an integer matrix `(p q; r s)` of determinant 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MappingClass {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub s: i64,
}

impl MappingClass {
    pub const IDENTITY: MappingClass = MappingClass {
        p: 1,
        q: 0,
        r: 0,
        s: 1,
    };

    /// Order-four rotation `(0 -1; 1 0)`.
    pub const S: MappingClass = MappingClass {
        p: 0,
        q: -1,
        r: 1,
        s: 0,
    };

    /// Dehn twist `(1 1; 0 1)`.
    pub const T: MappingClass = MappingClass {
        p: 1,
        q: 1,
        r: 0,
        s: 1,
    };

    pub fn new(p: i64, q: i64, r: i64, s: i64) -> Result<Self> {
        let det = p * s - q * r;
        if det != 1 {
            return Err(CoreError::NotUnimodular { det });
        }
        Ok(Self { p, q, r, s })
    }

    /// Matrix product; the composition of mapping classes.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            p: self.p * other.p + self.q * other.r,
            q: self.p * other.q + self.q * other.s,
            r: self.r * other.p + self.s * other.r,
            s: self.r * other.q + self.s * other.s,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            p: self.s,
            q: -self.q,
            r: -self.r,
            s: self.p,
        }
    }

    pub fn max_entry(&self) -> i64 {
        self.p
            .abs()
            .max(self.q.abs())
            .max(self.r.abs())
            .max(self.s.abs())
    }
}

/// Action on measured foliations: `(p q; r s) · [a, b] = [s a + r b, q a + p b]`.
///
/// This is the unique convention (up to a global sign, which the class
/// quotient absorbs) for which the extremal length is equivariant:
/// `Ext_{γτ}(γF) = Ext_τ(F)` exactly.
pub fn mcg_apply(gamma: &MappingClass, f: &MeasuredFoliation) -> MeasuredFoliation {
    MeasuredFoliation::new(
        gamma.s as f64 * f.a + gamma.r as f64 * f.b,
        gamma.q as f64 * f.a + gamma.p as f64 * f.b,
    )
}

/// Action on the Teichmueller space: the Moebius map `τ ↦ (pτ + q)/(rτ + s)`.
pub fn mcg_apply_point(gamma: &MappingClass, tau: &TorusPoint) -> TorusPoint {
    let z = tau.to_complex();
    let num = z * gamma.p as f64 + gamma.q as f64;
    let den = z * gamma.r as f64 + gamma.s as f64;
    let w = num / den;
    // Determinant 1 keeps the image in the upper half-plane.
    TorusPoint::new(w.re, w.im).expect("Moebius image of an interior point")
}

/// Projectivized action on slopes: `u ↦ (p u + q)/(r u + s)`.
pub fn mcg_apply_slope(gamma: &MappingClass, u: &Slope) -> Slope {
    if let Some((p0, q0)) = u.known_rational() {
        // Exact path for flagged rational slopes, infinity included.
        return Slope::from_rational(gamma.p * p0 + gamma.q * q0, gamma.r * p0 + gamma.s * q0);
    }
    let v = u.value();
    let den = gamma.r as f64 * v + gamma.s as f64;
    if den == 0.0 {
        return Slope::infinity();
    }
    Slope::new((gamma.p as f64 * v + gamma.q as f64) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn intersection_of_axes_is_one() {
        let f = MeasuredFoliation::new(1.0, 0.0);
        let g = MeasuredFoliation::new(0.0, 1.0);
        assert_eq!(intersection(&f, &g), 1.0);
    }

    #[test]
    fn self_intersection_vanishes() {
        let f = MeasuredFoliation::new(1.0, 0.0);
        assert_eq!(intersection(&f, &f), 0.0);
    }

    #[test]
    fn hand_oracle_2311() {
        // |2*1 - 3*1| = 1
        let f = MeasuredFoliation::new(2.0, 3.0);
        let g = MeasuredFoliation::new(1.0, 1.0);
        assert_eq!(intersection(&f, &g), 1.0);
    }

    #[test]
    fn zero_foliation_meets_everything_trivially() {
        let z = MeasuredFoliation::zero();
        let g = MeasuredFoliation::new(3.0, -1.5);
        assert_eq!(intersection(&z, &g), 0.0);
        assert!(z.slope().is_err());
    }

    #[test]
    fn canonical_representative() {
        assert_eq!(
            MeasuredFoliation::new(-1.0, 2.0),
            MeasuredFoliation::new(1.0, -2.0)
        );
        assert_eq!(
            MeasuredFoliation::new(0.0, -3.0),
            MeasuredFoliation::new(0.0, 3.0)
        );
        let f = MeasuredFoliation::new(-0.0, 5.0);
        assert!(f.a().is_sign_positive());
    }

    #[test]
    fn identity_acts_trivially() {
        let f = MeasuredFoliation::new(0.7, -2.3);
        assert_eq!(mcg_apply(&MappingClass::IDENTITY, &f), f);
        let tau = TorusPoint::new(0.3, 1.7).unwrap();
        let img = mcg_apply_point(&MappingClass::IDENTITY, &tau);
        assert_eq!((img.re(), img.im()), (0.3, 1.7));
        assert_eq!(
            mcg_apply_slope(&MappingClass::IDENTITY, &Slope::new(0.25)),
            Slope::new(0.25)
        );
    }

    #[test]
    fn rotation_sends_horizontal_to_vertical() {
        let f = MeasuredFoliation::new(1.0, 0.0);
        assert_eq!(
            mcg_apply(&MappingClass::S, &f),
            MeasuredFoliation::new(0.0, 1.0)
        );
        let i = TorusPoint::new(0.0, 1.0).unwrap();
        let img = mcg_apply_point(&MappingClass::S, &i);
        assert!((img.re()).abs() < 1e-15 && (img.im() - 1.0).abs() < 1e-15);
        assert!(mcg_apply_slope(&MappingClass::S, &Slope::new(0.0)).is_infinite());
    }

    #[test]
    fn twist_action() {
        let f = MeasuredFoliation::new(2.0, 5.0);
        assert_eq!(
            mcg_apply(&MappingClass::T, &f),
            MeasuredFoliation::new(2.0, 7.0)
        );
        let i = TorusPoint::new(0.0, 1.0).unwrap();
        let img = mcg_apply_point(&MappingClass::T, &i);
        assert!((img.re() - 1.0).abs() < 1e-15 && (img.im() - 1.0).abs() < 1e-15);
        let u = mcg_apply_slope(&MappingClass::T, &Slope::new(0.5));
        assert!((u.value() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn group_action_composes() {
        let g1 = MappingClass::new(2, 1, 1, 1).unwrap();
        let g2 = MappingClass::new(1, -1, 0, 1).unwrap();
        let f = MeasuredFoliation::new(1.0, 3.0);
        let lhs = mcg_apply(&g1.compose(&g2), &f);
        let rhs = mcg_apply(&g1, &mcg_apply(&g2, &f));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn determinant_is_checked() {
        assert!(MappingClass::new(1, 0, 0, -1).is_err());
        assert!(MappingClass::new(2, 0, 0, 2).is_err());
    }

    #[test]
    fn curve_slope_convention() {
        // The p/q curve is [q, p]; its projective class is the slope p/q.
        let c = MeasuredFoliation::from_curve(3, 2);
        assert_eq!((c.a(), c.b()), (2.0, 3.0));
        assert_eq!(c.slope().unwrap(), Slope::from_rational(3, 2));
    }

    proptest! {
        #[test]
        fn intersection_symmetric_and_nonneg(
            a in -10.0f64..10.0, b in -10.0f64..10.0,
            c in -10.0f64..10.0, d in -10.0f64..10.0,
        ) {
            let f = MeasuredFoliation::new(a, b);
            let g = MeasuredFoliation::new(c, d);
            prop_assert_eq!(intersection(&f, &g), intersection(&g, &f));
            prop_assert!(intersection(&f, &g) >= 0.0);
        }

        #[test]
        fn intersection_scales_linearly(
            a in -4.0f64..4.0, b in -4.0f64..4.0,
            c in -4.0f64..4.0, d in -4.0f64..4.0,
            t in 0.01f64..8.0,
        ) {
            let f = MeasuredFoliation::new(a, b);
            let g = MeasuredFoliation::new(c, d);
            let lhs = intersection(&f.scale(t), &g);
            let rhs = t * intersection(&f, &g);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
        }

        #[test]
        fn det_one_preserves_intersection(
            a in -4.0f64..4.0, b in -4.0f64..4.0,
            c in -4.0f64..4.0, d in -4.0f64..4.0,
            k in -3i64..=3, l in -3i64..=3,
        ) {
            // T^k then lower twist^l generates enough of SL(2, Z) to exercise the claim.
            let tw = MappingClass::new(1, k, 0, 1).unwrap();
            let lo = MappingClass::new(1, 0, l, 1).unwrap();
            let gamma = tw.compose(&lo);
            let f = MeasuredFoliation::new(a, b);
            let g = MeasuredFoliation::new(c, d);
            let lhs = intersection(&mcg_apply(&gamma, &f), &mcg_apply(&gamma, &g));
            let rhs = intersection(&f, &g);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0));
        }
    }
}
