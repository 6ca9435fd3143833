//! The same first-order calculus on variables built over the SU(2) Lie
//! algebra, realized as 2x2 complex matrices.
//!
//! The generators are fixed as `J_k = -(i/2) sigma_k` (Pauli matrices), so
//!
//! ```text
//! [J1, J2] = J3,   [J2, J3] = J1,   [J3, J1] = J2
//! ```
//!
//! hold exactly. A variable is `x = x0 I + x1 J1 + x2 J2 + x3 J3` with
//! `r^2 = x1^2 + x2^2 + x3^2`. The displacement splits against `x` through
//! nested commutators,
//!
//! ```text
//! perp = -(1/r^2) [x, [x, delta]],    parallel = delta - perp,
//! ```
//!
//! and the first-order increment of a real-coefficient series is
//!
//! ```text
//! F'(x) d_par + {F(x+ir) - F(x-ir)} (1/2ir) d_perp
//!             + {F(x+ir) + F(x-ir) - 2F(x)} (1/2r) (1/r)[x, delta]
//! ```
//!
//! where `F(x +- ir)` is the series at the complex-shifted matrix
//! `x +- ir I`. No diagonalizing rotation is ever performed; the
//! commutator forms are basis-free.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use crate::series::PowerSeries;

/// Distance from the scalar axis below which the splitting direction is
/// meaningless.
fn r_min(x0: f64) -> f64 {
    1e-10 * x0.abs().max(1.0)
}

/// A 2x2 complex matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix2 {
    pub entries: [[Complex64; 2]; 2],
}

impl ComplexMatrix2 {
    pub const fn new(entries: [[Complex64; 2]; 2]) -> Self {
        Self { entries }
    }

    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self::new([[z, z], [z, z]])
    }

    pub fn identity() -> Self {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        Self::new([[one, z], [z, one]])
    }

    pub fn scale(self, s: f64) -> Self {
        self.scale_complex(Complex64::new(s, 0.0))
    }

    pub fn scale_complex(self, s: Complex64) -> Self {
        let e = self.entries;
        Self::new([
            [e[0][0] * s, e[0][1] * s],
            [e[1][0] * s, e[1][1] * s],
        ])
    }

    pub fn commutator(self, other: Self) -> Self {
        self * other - other * self
    }

    /// Largest entry magnitude.
    pub fn max_norm(self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

impl Add for ComplexMatrix2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = (self.entries, rhs.entries);
        Self::new([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for ComplexMatrix2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let (a, b) = (self.entries, rhs.entries);
        Self::new([
            [a[0][0] - b[0][0], a[0][1] - b[0][1]],
            [a[1][0] - b[1][0], a[1][1] - b[1][1]],
        ])
    }
}

impl Neg for ComplexMatrix2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self.entries, rhs.entries);
        Self::new([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

/// Matrix exponential by scaling and squaring around a truncated Taylor
/// series; oracle-grade accuracy for the norms used here.
pub fn expm(m: ComplexMatrix2) -> ComplexMatrix2 {
    let norm = m.max_norm();
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m.scale(0.5f64.powi(squarings as i32));
    let mut acc = ComplexMatrix2::identity();
    for k in (1..=16u32).rev() {
        acc = acc * scaled.scale(1.0 / k as f64) + ComplexMatrix2::identity();
    }
    let mut result = acc;
    for _ in 0..squarings {
        result = result * result;
    }
    result
}

/// The fixed generator realization `J_k = -(i/2) sigma_k`.
pub fn make_generators() -> (ComplexMatrix2, ComplexMatrix2, ComplexMatrix2) {
    let z = Complex64::new(0.0, 0.0);
    let mih = Complex64::new(0.0, -0.5);
    let pih = Complex64::new(0.0, 0.5);
    let mh = Complex64::new(-0.5, 0.0);
    let ph = Complex64::new(0.5, 0.0);
    let j1 = ComplexMatrix2::new([[z, mih], [mih, z]]);
    let j2 = ComplexMatrix2::new([[z, mh], [ph, z]]);
    let j3 = ComplexMatrix2::new([[mih, z], [z, pih]]);
    debug_assert_eq!(j1.commutator(j2), j3);
    debug_assert_eq!(j2.commutator(j3), j1);
    debug_assert_eq!(j3.commutator(j1), j2);
    (j1, j2, j3)
}

/// `x = x0 I + x1 J1 + x2 J2 + x3 J3` with the matrix realization cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Element {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    matrix: ComplexMatrix2,
}

impl Su2Element {
    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        let matrix = ComplexMatrix2::new([
            [
                Complex64::new(x0, -0.5 * x3),
                Complex64::new(-0.5 * x2, -0.5 * x1),
            ],
            [
                Complex64::new(0.5 * x2, -0.5 * x1),
                Complex64::new(x0, 0.5 * x3),
            ],
        ]);
        Self { x0, x1, x2, x3, matrix }
    }

    /// Projection of `m` onto the real span of `{I, J1, J2, J3}`; exact
    /// when `m` already lies in that span.
    pub fn from_matrix(m: ComplexMatrix2) -> Self {
        let e = m.entries;
        Self::new(
            0.5 * (e[0][0].re + e[1][1].re),
            -(e[0][1].im + e[1][0].im),
            e[1][0].re - e[0][1].re,
            e[1][1].im - e[0][0].im,
        )
    }

    /// Embedding of a quaternion under `(1, i, j, k) -> (I, 2J1, 2J2, 2J3)`.
    ///
    /// The doubled generators square to `-I`, so this is an algebra map;
    /// note it doubles the imaginary radius: `r_su2 = 2 r_quat`.
    pub fn from_quaternion(q: Quaternion) -> Self {
        Self::new(q.w, 2.0 * q.x, 2.0 * q.y, 2.0 * q.z)
    }

    pub fn matrix(&self) -> ComplexMatrix2 {
        self.matrix
    }

    /// Imaginary radius `sqrt(x1^2 + x2^2 + x3^2)`.
    pub fn r(&self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

impl Add for Su2Element {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.x0 + rhs.x0,
            self.x1 + rhs.x1,
            self.x2 + rhs.x2,
            self.x3 + rhs.x3,
        )
    }
}

impl Sub for Su2Element {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.x0 - rhs.x0,
            self.x1 - rhs.x1,
            self.x2 - rhs.x2,
            self.x3 - rhs.x3,
        )
    }
}

/// The commuting and rotating channels of a displacement at `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2DeltaSplit {
    pub parallel: Su2Element,
    pub perp: Su2Element,
}

/// Splits `delta` against `x` through the nested-commutator projector.
///
/// `[J_a, J_b] = eps_abc J_c` makes the commutator of generator parts the
/// coordinate cross product, so the projector is evaluated exactly in
/// coordinates; the scalar component of `delta` belongs entirely to the
/// parallel channel.
pub fn split_delta_su2(x: Su2Element, delta: Su2Element) -> Result<Su2DeltaSplit> {
    let r = x.r();
    if r < r_min(x.x0) {
        return Err(Error::NearScalar);
    }
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let xv = [x.x1, x.x2, x.x3];
    let inner = cross(xv, [delta.x1, delta.x2, delta.x3]);
    let outer = cross(xv, inner);
    let s = -1.0 / (r * r);
    let perp = Su2Element::new(0.0, s * outer[0], s * outer[1], s * outer[2]);
    let parallel = delta - perp;
    Ok(Su2DeltaSplit { parallel, perp })
}

/// Max-norm residual of the conjugation identities
/// `e^{t J3} J1 e^{-t J3} = J1 cos t + J2 sin t` and its `J2` partner.
pub fn rotation_identity_check(theta: f64) -> f64 {
    let (j1, j2, j3) = make_generators();
    let fwd = expm(j3.scale(theta));
    let bwd = expm(j3.scale(-theta));
    let r1 = fwd * j1 * bwd - (j1.scale(theta.cos()) + j2.scale(theta.sin()));
    let r2 = fwd * j2 * bwd - (j2.scale(theta.cos()) - j1.scale(theta.sin()));
    r1.max_norm().max(r2.max_norm())
}

/// Horner evaluation of a real-coefficient series in matrix arithmetic.
pub fn matrix_series_eval(f: &PowerSeries, m: ComplexMatrix2) -> Result<ComplexMatrix2> {
    if !f.has_real_coeffs() {
        return Err(Error::NonRealCoefficients);
    }
    let mut acc = ComplexMatrix2::zero();
    for c in f.coeffs().iter().rev() {
        acc = acc * m + ComplexMatrix2::identity().scale(c.w);
    }
    Ok(acc)
}

/// First-order increment of `F(x + delta)` for a real-coefficient series:
///
/// ```text
/// F'(x) d_par + {F(x+ir) - F(x-ir)} (1/2ir) d_perp
///             + {F(x+ir) + F(x-ir) - 2F(x)} (1/2r^2) [x, delta]
/// ```
pub fn su2_first_order(
    f: &PowerSeries,
    x: Su2Element,
    delta: Su2Element,
) -> Result<ComplexMatrix2> {
    let split = split_delta_su2(x, delta)?;
    let r = x.r();
    let m = x.matrix();
    let shift = ComplexMatrix2::identity().scale_complex(Complex64::new(0.0, r));
    let f_plus = matrix_series_eval(f, m + shift)?;
    let f_minus = matrix_series_eval(f, m - shift)?;
    let f_center = matrix_series_eval(f, m)?;
    let f_prime = matrix_series_eval(&f.derivative(), m)?;

    let term1 = f_prime * split.parallel.matrix();
    // 1/(2ir) = -i/(2r).
    let quotient = (f_plus - f_minus).scale_complex(Complex64::new(0.0, -0.5 / r));
    let term2 = quotient * split.perp.matrix();
    let comm = m.commutator(delta.matrix());
    let term3 = (f_plus + f_minus - f_center.scale(2.0))
        .scale(0.5 / (r * r))
        * comm;
    Ok(term1 + term2 + term3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::general_first_order;
    use rand_core::{RngCore, SeedableRng};
    use std::f64::consts::PI;

    const EPS: f64 = f64::EPSILON;

    fn unit_f64(rng: &mut rand_chacha::ChaCha8Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn sym(rng: &mut rand_chacha::ChaCha8Rng) -> f64 {
        2.0 * unit_f64(rng) - 1.0
    }

    fn rand_element(rng: &mut rand_chacha::ChaCha8Rng) -> Su2Element {
        Su2Element::new(sym(rng), sym(rng), sym(rng), sym(rng))
    }

    fn rand_real_series(rng: &mut rand_chacha::ChaCha8Rng, degree: usize) -> PowerSeries {
        let coeffs: Vec<f64> = (0..=degree).map(|_| sym(rng)).collect();
        PowerSeries::from_real_coeffs(&coeffs).unwrap()
    }

    fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
        let n = xs.len() as f64;
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        for (&x, &y) in xs.iter().zip(ys) {
            let (lx, ly) = (x.ln(), y.ln());
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }

    #[test]
    fn generators_satisfy_lie_algebra_exactly() {
        let (j1, j2, j3) = make_generators();
        assert_eq!(j1.commutator(j2), j3);
        assert_eq!(j2.commutator(j3), j1);
        assert_eq!(j3.commutator(j1), j2);
        // Spin-1/2: each generator squares to -I/4, exactly in this
        // realization.
        let quarter = ComplexMatrix2::identity().scale(-0.25);
        assert_eq!(j1 * j1, quarter);
        assert_eq!(j2 * j2, quarter);
        assert_eq!(j3 * j3, quarter);
    }

    #[test]
    fn double_cover_exponential() {
        let (_, _, j3) = make_generators();
        let minus_i = ComplexMatrix2::identity().scale(-1.0);
        assert!((expm(j3.scale(2.0 * PI)) - minus_i).max_norm() <= 1e-13);

        let f = PowerSeries::exp_series(41).unwrap();
        let via_series = matrix_series_eval(&f, j3.scale(2.0 * PI)).unwrap();
        assert!((via_series - minus_i).max_norm() <= 1e-10);
    }

    #[test]
    fn rotation_identities() {
        assert_eq!(rotation_identity_check(0.0), 0.0);
        assert!(rotation_identity_check(PI / 2.0) <= 1e-14);
        assert!(rotation_identity_check(PI) <= 1e-13);
        for k in -10..=10 {
            assert!(rotation_identity_check(k as f64) <= 1e-13, "theta {k}");
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let x = rand_element(&mut rng);
            let back = Su2Element::from_matrix(x.matrix());
            assert!((back.x0 - x.x0).abs() <= 4.0 * EPS * x.x0.abs().max(1.0));
            assert!((back.x1 - x.x1).abs() <= 4.0 * EPS * x.x1.abs().max(1.0));
            assert!((back.x2 - x.x2).abs() <= 4.0 * EPS * x.x2.abs().max(1.0));
            assert!((back.x3 - x.x3).abs() <= 4.0 * EPS * x.x3.abs().max(1.0));
        }
    }

    #[test]
    fn split_aligned_cases() {
        let x = Su2Element::new(0.7, 0.0, 0.0, 2.0);

        // Transverse displacement: everything lands in perp.
        let d = Su2Element::new(0.0, 0.3, -0.4, 0.0);
        let split = split_delta_su2(x, d).unwrap();
        assert_eq!(split.parallel, Su2Element::new(0.0, 0.0, 0.0, 0.0));
        assert_eq!(split.perp, d);

        // Commuting displacement: everything lands in parallel.
        let d = Su2Element::new(0.5, 0.0, 0.0, -0.8);
        let split = split_delta_su2(x, d).unwrap();
        assert_eq!(split.parallel, d);
        assert_eq!(split.perp, Su2Element::new(0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn split_rejects_near_scalar() {
        let x = Su2Element::new(3.0, 0.0, 1e-11, 0.0);
        let d = Su2Element::new(0.1, 0.2, 0.3, 0.4);
        assert_eq!(split_delta_su2(x, d), Err(Error::NearScalar));
    }

    #[test]
    fn split_invariants_against_matrix_commutators() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(32);
        let mut kept = 0;
        while kept < 1000 {
            let x = rand_element(&mut rng);
            if !(0.1..=3.0).contains(&x.r()) {
                continue;
            }
            kept += 1;
            let d = rand_element(&mut rng);
            let split = split_delta_su2(x, d).unwrap();
            let scale = 1.0 + d.matrix().max_norm();

            // Reconstruction is an exact coordinate complement.
            let sum = split.parallel + split.perp;
            assert!((sum.matrix() - d.matrix()).max_norm() <= 2.0 * EPS * scale);

            // B10 checked in matrix arithmetic, independent of the
            // coordinate cross products used by the implementation.
            let m = x.matrix();
            let nested = m.commutator(m.commutator(d.matrix()));
            let perp_matrix = nested.scale(-1.0 / (x.r() * x.r()));
            assert!((perp_matrix - split.perp.matrix()).max_norm() <= 1e-13 * scale);

            // The parallel channel commutes with x.
            let comm = m.commutator(split.parallel.matrix());
            assert!(comm.max_norm() <= 1e-13 * scale);

            // Projector idempotence.
            let again = split_delta_su2(x, split.perp).unwrap();
            assert!((again.perp.matrix() - split.perp.matrix()).max_norm() <= 1e-13 * scale);
            assert!(again.parallel.matrix().max_norm() <= 1e-13 * scale);
        }
    }

    #[test]
    fn series_eval_fixed_points() {
        let one = PowerSeries::from_real_coeffs(&[1.0]).unwrap();
        let m = rand_element(&mut rand_chacha::ChaCha8Rng::seed_from_u64(33)).matrix();
        assert_eq!(matrix_series_eval(&one, m).unwrap(), ComplexMatrix2::identity());

        let square = PowerSeries::from_real_coeffs(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(matrix_series_eval(&square, m).unwrap(), m * m);

        let nonreal = PowerSeries::new(vec![Quaternion::K]).unwrap();
        assert_eq!(matrix_series_eval(&nonreal, m), Err(Error::NonRealCoefficients));
    }

    #[test]
    fn first_order_commuting_delta() {
        let x = Su2Element::new(0.4, 0.6, -0.9, 0.3);
        // delta in span{I, vec(x)} commutes with x.
        let d = Su2Element::new(0.2, 0.6 * 0.5, -0.9 * 0.5, 0.3 * 0.5).scale(1e-3);
        let f = PowerSeries::from_real_coeffs(&[0.5, -1.0, 2.0, 1.0, 0.25]).unwrap();
        let got = su2_first_order(&f, x, d).unwrap();
        let f_prime = matrix_series_eval(&f.derivative(), x.matrix()).unwrap();
        let want = f_prime * d.matrix();
        assert!((got - want).max_norm() <= 1e-14);
    }

    #[test]
    fn first_order_square_is_exact() {
        let f = PowerSeries::from_real_coeffs(&[0.0, 0.0, 1.0]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(34);
        for _ in 0..100 {
            let x = rand_element(&mut rng);
            if x.r() < 0.1 {
                continue;
            }
            let d = rand_element(&mut rng);
            let got = su2_first_order(&f, x, d).unwrap();
            let (xm, dm) = (x.matrix(), d.matrix());
            let want = xm * dm + dm * xm;
            let scale = 1.0 + want.max_norm();
            assert!((got - want).max_norm() <= 1e-13 * scale);
        }
    }

    #[test]
    fn first_order_residual_slope_two() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(35);
        let f = rand_real_series(&mut rng, 8);
        let x = Su2Element::new(0.3, 0.8, -0.5, 1.1);
        let dir = rand_element(&mut rng);
        let dir = dir.scale(1.0 / dir.matrix().max_norm());
        let f_center = matrix_series_eval(&f, x.matrix()).unwrap();
        let scales = [1e-1, 1e-2, 1e-3, 1e-4];
        let errs: Vec<f64> = scales
            .iter()
            .map(|s| {
                let d = dir.scale(*s);
                let truth = matrix_series_eval(&f, (x + d).matrix()).unwrap() - f_center;
                (truth - su2_first_order(&f, x, d).unwrap()).max_norm()
            })
            .collect();
        let slope = fit_slope(&scales, &errs);
        assert!((slope - 2.0).abs() <= 0.05, "slope {slope}");
    }

    #[test]
    fn first_order_rejects_near_scalar_and_non_real() {
        let f = PowerSeries::from_real_coeffs(&[0.0, 1.0]).unwrap();
        let x = Su2Element::new(1.0, 0.0, 0.0, 0.0);
        let d = Su2Element::new(0.0, 0.1, 0.0, 0.0);
        assert_eq!(su2_first_order(&f, x, d), Err(Error::NearScalar));

        let g = PowerSeries::new(vec![Quaternion::ZERO, Quaternion::I]).unwrap();
        let x = Su2Element::new(1.0, 0.0, 0.0, 1.0);
        assert_eq!(su2_first_order(&g, x, d), Err(Error::NonRealCoefficients));
    }

    #[test]
    fn quaternion_embedding_is_multiplicative() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(36);
        for _ in 0..100 {
            let p = Quaternion::new(sym(&mut rng), sym(&mut rng), sym(&mut rng), sym(&mut rng));
            let q = Quaternion::new(sym(&mut rng), sym(&mut rng), sym(&mut rng), sym(&mut rng));
            let lhs = Su2Element::from_quaternion(p * q).matrix();
            let rhs = Su2Element::from_quaternion(p).matrix() * Su2Element::from_quaternion(q).matrix();
            assert!((lhs - rhs).max_norm() <= 8.0 * EPS * (1.0 + lhs.max_norm()));
        }
    }

    #[test]
    fn first_order_agrees_with_quaternion_module() {
        // Same function, same displacement, two calculi: the su2 increment
        // at the embedded point must be the embedding of the quaternion
        // increment. The embedding doubles the imaginary radius, which
        // both sides absorb through their own formulas.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        let mut kept = 0;
        while kept < 200 {
            let x = Quaternion::new(sym(&mut rng), sym(&mut rng), sym(&mut rng), sym(&mut rng));
            if !(0.05..=3.0).contains(&x.vector_norm()) {
                continue;
            }
            kept += 1;
            let f = rand_real_series(&mut rng, 1 + kept % 8);
            let delta = Quaternion::new(sym(&mut rng), sym(&mut rng), sym(&mut rng), sym(&mut rng))
                .scale(1e-3);
            let quat_side = Su2Element::from_quaternion(general_first_order(&f, x, delta));
            let su2_side = su2_first_order(
                &f,
                Su2Element::from_quaternion(x),
                Su2Element::from_quaternion(delta),
            )
            .unwrap();
            let scale = 1.0 + quat_side.matrix().max_norm();
            assert!(
                (su2_side - quat_side.matrix()).max_norm() <= 1e-12 * scale,
                "trial {kept}"
            );
        }
    }
}
