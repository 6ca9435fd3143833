//! Quaternion arithmetic, polar decomposition, and the local
//! parallel/perpendicular displacement splitting.
//!
//! Conventions fixed once for the whole crate:
//!
//! * Hamilton (right-handed) multiplication: `ij = k`, `jk = i`, `ki = j`,
//!   `i^2 = j^2 = k^2 = -1`. Any consistent sign convention satisfies the
//!   identities implemented here; this one is asserted by a table test.
//! * Basis order `(1, i, j, k)`; components are stored as `f64`.
//! * JSON form is the array `[w, x, y, z]`.
//!
//! A quaternion `x` with nonzero vector part factors as `x = x0 + r*u` with
//! `r > 0` and `u` a unit pure imaginary (`u^2 = -1`). Relative to that `u`,
//! any displacement `delta` splits into a part that commutes with `x` and a
//! part that commutes with `x` through the conjugate:
//!
//! ```text
//! delta_par  = (delta - u*delta*u) / 2      delta_par * x = x * delta_par
//! delta_perp = (delta + u*delta*u) / 2      delta_perp * x = conj(x) * delta_perp
//! ```

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Norm floor below which a quaternion is treated as a zero divisor.
/// Chosen to avoid overflow in `1/norm^2` rather than IEEE-propagate.
const ZERO_DIVISOR_FLOOR: f64 = 1e-300;

/// A quaternion `w + x*i + y*j + z*k` over `f64`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    /// Scalar (real) part.
    pub w: f64,
    /// Coefficient of `i`.
    pub x: f64,
    /// Coefficient of `j`.
    pub y: f64,
    /// Coefficient of `k`.
    pub z: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    /// A real quaternion `w + 0i + 0j + 0k`.
    #[inline]
    pub const fn from_real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    /// Squared Euclidean norm `w^2 + x^2 + y^2 + z^2 = q * conj(q)`.
    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// Euclidean norm.
    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Length of the vector (imaginary) part.
    #[inline]
    pub fn vector_norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Largest component magnitude.
    #[inline]
    pub fn max_norm(self) -> f64 {
        self.w
            .abs()
            .max(self.x.abs())
            .max(self.y.abs())
            .max(self.z.abs())
    }

    /// Conjugation: scalar part unchanged, all imaginaries negated.
    #[inline]
    pub fn conjugate(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Multiplicative inverse `conj(q) / norm(q)^2`.
    ///
    /// Returns [`Error::ZeroDivisor`] when the norm is below the floor.
    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sq();
        let n = n2.sqrt();
        if n.is_nan() || n <= ZERO_DIVISOR_FLOOR {
            return Err(Error::ZeroDivisor);
        }
        Ok(self.conjugate() / n2)
    }

    /// Uniform scaling of all four components.
    #[inline]
    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// True when the vector part (numerically) vanishes for this magnitude.
    #[inline]
    pub fn is_near_real(self) -> bool {
        self.vector_norm() < r_min(self.w)
    }

    /// Polar decomposition `q = x0 + r*u` with `r > 0` and `u^2 = -1`.
    ///
    /// Fails with [`Error::NearRealAxis`] when the vector part is below
    /// `r_min`; there is no meaningful direction `u` there and callers must
    /// use their real-limit branch instead.
    pub fn polar_decompose(self) -> Result<PolarForm> {
        let r = self.vector_norm();
        if r < r_min(self.w) {
            return Err(Error::NearRealAxis);
        }
        Ok(PolarForm {
            x0: self.w,
            r,
            u: Self::new(0.0, self.x / r, self.y / r, self.z / r),
        })
    }

    /// Commutator `[self, other] = self*other - other*self`.
    #[inline]
    pub fn commutator(self, other: Self) -> Self {
        self * other - other * self
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Threshold below which a vector part is considered numerically zero:
/// `1e-12 * max(1, |x0|)`. Below it the unit imaginary is meaningless and
/// the formulas' finite r -> 0 limits apply.
#[inline]
pub fn r_min(x0: f64) -> f64 {
    1e-12 * x0.abs().max(1.0)
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.w + rhs.w,
            self.x + rhs.x,
            self.y + rhs.y,
            self.z + rhs.z,
        )
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.w - rhs.w,
            self.x - rhs.x,
            self.y - rhs.y,
            self.z - rhs.z,
        )
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// `w + xi + yj + zk` with folded signs, e.g. `1 - 2i + 0.5j + 0k`.
impl std::fmt::Display for Quaternion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.w)?;
        for (v, unit) in [(self.x, "i"), (self.y, "j"), (self.z, "k")] {
            if v.is_sign_negative() {
                write!(f, " - {}{unit}", -v)?;
            } else {
                write!(f, " + {v}{unit}")?;
            }
        }
        Ok(())
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, r: Self) -> Self {
        Self::new(
            self.w * r.w - self.x * r.x - self.y * r.y - self.z * r.z,
            self.w * r.x + self.x * r.w + self.y * r.z - self.z * r.y,
            self.w * r.y - self.x * r.z + self.y * r.w + self.z * r.x,
            self.w * r.z + self.x * r.y - self.y * r.x + self.z * r.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

/// The decomposition `x = x0 + r*u` into real part, imaginary magnitude and
/// unit imaginary direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarForm {
    /// Real part.
    pub x0: f64,
    /// Imaginary magnitude, `> 0` for any value produced by
    /// [`Quaternion::polar_decompose`].
    pub r: f64,
    /// Unit pure imaginary direction, `u^2 = -1`.
    pub u: Quaternion,
}

impl PolarForm {
    /// Rebuild `x0 + r*u`.
    pub fn recompose(self) -> Quaternion {
        Quaternion::from_real(self.x0) + self.u.scale(self.r)
    }
}

/// A displacement split against a reference direction `u`:
/// `parallel` commutes with `x0 + r*u`, `perp` anticommutes through the
/// conjugate (`perp * x = conj(x) * perp`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSplit {
    /// The part lying in `span{1, u}`.
    pub parallel: Quaternion,
    /// The complement, in the imaginary plane orthogonal to `u`.
    pub perp: Quaternion,
    /// The unit imaginary the split was taken against.
    pub reference_u: Quaternion,
}

/// How far `u` may deviate from a unit pure imaginary before
/// [`split_delta`] rejects it.
const UNIT_IMAGINARY_TOL: f64 = 1e-12;

/// Split `delta` into its parallel and perpendicular parts relative to the
/// unit imaginary `u`.
///
/// `parallel = (delta - u*delta*u) / 2`; `perp` is stored as the exact
/// complement `delta - parallel` so the two parts always recombine to
/// `delta` up to one floating-point addition.
pub fn split_delta(delta: Quaternion, u: Quaternion) -> Result<DeltaSplit> {
    let u_sq = u * u;
    // u^2 = -1 iff u is pure imaginary with unit norm.
    if (u_sq.w + 1.0).abs() > UNIT_IMAGINARY_TOL
        || u_sq.x.abs() > UNIT_IMAGINARY_TOL
        || u_sq.y.abs() > UNIT_IMAGINARY_TOL
        || u_sq.z.abs() > UNIT_IMAGINARY_TOL
    {
        return Err(Error::InvalidUnitImaginary);
    }
    let sandwich = u * delta * u;
    let parallel = (delta - sandwich).scale(0.5);
    Ok(DeltaSplit {
        parallel,
        perp: delta - parallel,
        reference_u: u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EPS: f64 = f64::EPSILON;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    #[test]
    fn hamilton_multiplication_table() {
        use Quaternion as Q;
        let table = [
            (Q::I, Q::J, Q::K),
            (Q::J, Q::K, Q::I),
            (Q::K, Q::I, Q::J),
        ];
        for (a, b, ab) in table {
            assert_eq!(a * b, ab);
            assert_eq!(b * a, -ab);
        }
        assert_eq!(Q::I * Q::I, -Q::ONE);
        assert_eq!(Q::J * Q::J, -Q::ONE);
        assert_eq!(Q::K * Q::K, -Q::ONE);
    }

    #[test]
    fn one_plus_i_squared() {
        let v = q(1.0, 1.0, 0.0, 0.0);
        assert_eq!(v * v, q(0.0, 2.0, 0.0, 0.0));
    }

    #[test]
    fn perp_displacement_commutes_through_conjugate() {
        // j * (1+2i) = j - 2k and (1-2i) * j = j - 2k.
        let x = q(1.0, 2.0, 0.0, 0.0);
        let expected = q(0.0, 0.0, 1.0, -2.0);
        assert_eq!(Quaternion::J * x, expected);
        assert_eq!(x.conjugate() * Quaternion::J, expected);
    }

    #[test]
    fn conjugate_examples() {
        let v = q(1.0, 1.0, 1.0, 1.0);
        assert_eq!(v.conjugate(), q(1.0, -1.0, -1.0, -1.0));
        assert_eq!(v.conjugate().conjugate(), v);
        assert_eq!(Quaternion::from_real(5.0).conjugate(), Quaternion::from_real(5.0));

        // q * conj(q) is the real quaternion norm^2.
        let p = q(0.3, -1.2, 0.7, 2.5);
        let prod = p * p.conjugate();
        assert!((prod.w - p.norm_sq()).abs() <= 4.0 * EPS * p.norm_sq());
        assert_eq!(prod.x, 0.0);
        assert_eq!(prod.y, 0.0);
        assert_eq!(prod.z, 0.0);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Quaternion::I.inverse().unwrap(), -Quaternion::I);

        let v = q(1.0, 2.0, 0.0, 0.0);
        let inv = v.inverse().unwrap();
        let expected = q(0.2, -0.4, 0.0, 0.0);
        assert!((inv - expected).max_norm() <= 1e-15);

        assert_eq!(Quaternion::ZERO.inverse(), Err(Error::ZeroDivisor));
    }

    #[test]
    fn polar_decompose_examples() {
        let v = q(1.0, 1.0, 1.0, 1.0);
        let p = v.polar_decompose().unwrap();
        assert_eq!(p.x0, 1.0);
        assert!((p.r - 3f64.sqrt()).abs() <= 4.0 * EPS);
        let s = 1.0 / 3f64.sqrt();
        assert!((p.u - q(0.0, s, s, s)).max_norm() <= 4.0 * EPS);

        let p = q(0.0, 3.0, 0.0, 0.0).polar_decompose().unwrap();
        assert_eq!((p.x0, p.r), (0.0, 3.0));
        assert_eq!(p.u, Quaternion::I);

        assert_eq!(
            Quaternion::from_real(7.0).polar_decompose(),
            Err(Error::NearRealAxis)
        );
    }

    #[test]
    fn split_delta_examples() {
        let s = split_delta(Quaternion::J, Quaternion::I).unwrap();
        assert_eq!(s.parallel, Quaternion::ZERO);
        assert_eq!(s.perp, Quaternion::J);

        let s = split_delta(Quaternion::ONE, Quaternion::I).unwrap();
        assert_eq!(s.parallel, Quaternion::ONE);
        assert_eq!(s.perp, Quaternion::ZERO);

        // delta = 2 + 3i + 4j + 5k against u = i: evaluating (delta -+ i*delta*i)/2
        // by the multiplication table gives parallel = 2 + 3i, perp = 4j + 5k.
        let delta = q(2.0, 3.0, 4.0, 5.0);
        let s = split_delta(delta, Quaternion::I).unwrap();
        assert_eq!(s.parallel, q(2.0, 3.0, 0.0, 0.0));
        assert_eq!(s.perp, q(0.0, 0.0, 4.0, 5.0));
    }

    #[test]
    fn split_delta_rejects_bad_direction() {
        assert_eq!(
            split_delta(Quaternion::J, q(0.1, 1.0, 0.0, 0.0)),
            Err(Error::InvalidUnitImaginary)
        );
        assert_eq!(
            split_delta(Quaternion::J, Quaternion::I.scale(0.5)),
            Err(Error::InvalidUnitImaginary)
        );
    }

    #[test]
    fn serde_round_trip_is_flat_array() {
        let v = q(1.0, -2.0, 3.5, 0.25);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[1.0,-2.0,3.5,0.25]");
        let back: Quaternion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn display_folds_signs() {
        assert_eq!(q(1.0, -2.0, 3.5, 0.0).to_string(), "1 - 2i + 3.5j + 0k");
        assert_eq!(q(-0.5, 0.25, -1.0, 4.0).to_string(), "-0.5 + 0.25i - 1j + 4k");
    }

    fn arb_quat(limit: f64) -> impl Strategy<Value = Quaternion> {
        [
            -limit..limit,
            -limit..limit,
            -limit..limit,
            -limit..limit,
        ]
        .prop_map(|[w, x, y, z]| Quaternion::new(w, x, y, z))
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(a in arb_quat(10.0), b in arb_quat(10.0)) {
            let lhs = (a * b).norm();
            let rhs = a.norm() * b.norm();
            prop_assert!((lhs - rhs).abs() <= 8.0 * EPS * rhs.max(1e-300));
        }

        #[test]
        fn inverse_round_trip(a in arb_quat(10.0).prop_filter("nonzero", |q| q.norm() > 1e-6)) {
            let inv = a.inverse().unwrap();
            prop_assert!(((a * inv) - Quaternion::ONE).norm() <= 1e-14);
            prop_assert!(((inv * a) - Quaternion::ONE).norm() <= 1e-14);
        }

        #[test]
        fn polar_round_trip(a in arb_quat(10.0)) {
            if let Ok(p) = a.polar_decompose() {
                let back = p.recompose();
                prop_assert!((back - a).max_norm() <= 4.0 * EPS * a.max_norm());
                // u is a unit pure imaginary.
                prop_assert_eq!(p.u.w, 0.0);
                prop_assert!((p.u.norm() - 1.0).abs() <= 4.0 * EPS);
                prop_assert!(((p.u * p.u) + Quaternion::ONE).max_norm() <= 8.0 * EPS);
            }
        }

        #[test]
        fn split_is_complementary_and_idempotent(
            delta in arb_quat(10.0),
            x in arb_quat(10.0),
        ) {
            let Ok(p) = x.polar_decompose() else { return Ok(()) };
            let s = split_delta(delta, p.u).unwrap();
            let scale = delta.norm().max(1e-300);

            // Complementarity (perp is the exact complement by construction).
            prop_assert!(((s.parallel + s.perp) - delta).max_norm() <= 2.0 * EPS * scale);

            // Idempotence: re-splitting each part changes nothing.
            let again = split_delta(s.parallel, p.u).unwrap();
            prop_assert!((again.parallel - s.parallel).max_norm() <= 1e-13 * scale);
            prop_assert!(again.perp.max_norm() <= 1e-13 * scale);
            let again = split_delta(s.perp, p.u).unwrap();
            prop_assert!(again.parallel.max_norm() <= 1e-13 * scale);
            prop_assert!((again.perp - s.perp).max_norm() <= 1e-13 * scale);
        }

        #[test]
        fn split_commutation_relations(
            delta in arb_quat(2.0),
            x in arb_quat(2.0),
        ) {
            let Ok(p) = x.polar_decompose() else { return Ok(()) };
            if p.r <= 1e-6 { return Ok(()) }
            let s = split_delta(delta, p.u).unwrap();
            let scale = x.norm() * delta.norm() + 1e-300;
            prop_assert!((s.parallel * x - x * s.parallel).norm() <= 1e-13 * scale);
            prop_assert!((s.perp * x - x.conjugate() * s.perp).norm() <= 1e-13 * scale);
        }
    }
}
