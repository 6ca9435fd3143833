//! Quaternionic exponential and logarithm: closed forms, first-order
//! expansions, and the two independent expansion oracles.
//!
//! For `x = x0 + r*u` the closed forms are
//!
//! ```text
//! exp(x) = e^x0 * (cos r + u sin r)
//! log(y) = ln|y| + u * atan2(|vec y|, re y)          (principal branch)
//! ```
//!
//! The first-order expansions carry three real coefficients each:
//!
//! ```text
//! exp(x+d) = exp(x) + exp(x)*(a*d + b*[u,d] + c*u*d*u) + O(d^2)
//! log(y+D) = log(y) + A*m + B*[u,m] + C*u*m*u + O(D^2),   m = y^-1 * D
//! ```
//!
//! with `a`, `b`, `c` functions of `r` built from `sin(2r)/(2r)` and
//! `(cos(2r)-1)/(2r)`, and `A`, `B`, `C` built from `r*cot(r)`. In the log
//! expansion `u` and `r` come from `x = log(y)`, not from `y` itself (the
//! two share the direction but not the magnitude).
//!
//! Two oracles validate the expansion independently of those coefficients:
//! the limit definition `(1 + x/n)^n` and panel-wise Gauss-Legendre
//! quadrature of `exp(x) * [1 + integral_0^1 exp(-s x) d exp(s x) ds]`.

use crate::error::{Error, Result};
use crate::quaternion::{r_min, Quaternion};

/// Real exponent above which `exp` would overflow f64.
const EXP_OVERFLOW_LIMIT: f64 = 700.0;

/// Below this `r`, coefficient formulas switch to their Taylor expansions;
/// `b`, `c` and `C` are differences of near-equal quantities there.
const COEFF_TAYLOR_CUTOFF: f64 = 1e-4;

/// `sin(t)/t` with the small-argument series.
fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-8 {
        1.0 - t * t / 6.0
    } else {
        t.sin() / t
    }
}

/// Closed-form exponential without the overflow guard; shared by the
/// expansion routines.
pub(crate) fn exp_closed(x: Quaternion) -> Quaternion {
    let r = x.vector_norm();
    let scale = x.w.exp();
    // sin(r)/r stays finite through r = 0, so no polar branch is needed.
    let vec_scale = scale * sinc(r);
    Quaternion::new(
        scale * r.cos(),
        vec_scale * x.x,
        vec_scale * x.y,
        vec_scale * x.z,
    )
}

/// Closed-form exponential `e^x0 (cos r + u sin r)`.
pub fn exp(x: Quaternion) -> Result<Quaternion> {
    if x.w > EXP_OVERFLOW_LIMIT {
        return Err(Error::Overflow);
    }
    Ok(exp_closed(x))
}

/// The limit definition `(1 + x/n)^n`, evaluated by binary exponentiation.
/// Converges to `exp(x)` with error `O(1/n)`.
pub fn exp_limit_oracle(x: Quaternion, n: u64) -> Quaternion {
    let mut base = Quaternion::ONE + x / (n as f64);
    let mut exponent = n;
    let mut acc = Quaternion::ONE;
    while exponent > 0 {
        if exponent & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        exponent >>= 1;
    }
    acc
}

/// The real coefficient triple of the first-order exponential expansion,
/// evaluated at imaginary magnitude `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpExpansionCoeffs {
    /// Coefficient of `delta`.
    pub a: f64,
    /// Coefficient of the commutator `[u, delta]`.
    pub b: f64,
    /// Coefficient of the sandwich `u delta u`.
    pub c: f64,
    /// The `r` the triple was evaluated at.
    pub r: f64,
}

impl ExpExpansionCoeffs {
    /// `a = (1 + sin(2r)/(2r))/2`, `b = ((cos 2r - 1)/(2r))/2`,
    /// `c = (-1 + sin(2r)/(2r))/2`, with Taylor fallbacks below the cutoff.
    pub fn at(r: f64) -> Self {
        let t = 2.0 * r;
        let (sinc2r, coshalf) = if r < COEFF_TAYLOR_CUTOFF {
            let t2 = t * t;
            (
                1.0 - t2 / 6.0 + t2 * t2 / 120.0 - t2 * t2 * t2 / 5040.0,
                -t / 2.0 + t * t2 / 24.0 - t * t2 * t2 / 720.0,
            )
        } else {
            (t.sin() / t, (t.cos() - 1.0) / t)
        };
        Self {
            a: 0.5 * (1.0 + sinc2r),
            b: 0.5 * coshalf,
            c: 0.5 * (-1.0 + sinc2r),
            r,
        }
    }
}

/// First-order prediction `exp(x) + exp(x)*(a d + b [u,d] + c u d u)`.
///
/// Below `r_min` the analytic limit `exp(x) * (1 + delta)` is returned
/// instead of fabricating a direction `u`.
pub fn exp_first_order(x: Quaternion, delta: Quaternion) -> Quaternion {
    let ex = exp_closed(x);
    match x.polar_decompose() {
        Err(_) => ex + ex * delta,
        Ok(p) => {
            let k = ExpExpansionCoeffs::at(p.r);
            let u = p.u;
            let correction =
                delta * k.a + (u * delta - delta * u) * k.b + (u * delta * u) * k.c;
            ex + ex * correction
        }
    }
}

// 4-point Gauss-Legendre nodes and weights on [-1, 1].
const GL_NODES: [f64; 4] = [
    -0.8611363115940526,
    -0.33998104358485626,
    0.33998104358485626,
    0.8611363115940526,
];
const GL_WEIGHTS: [f64; 4] = [
    0.34785484513745385,
    0.6521451548625461,
    0.6521451548625461,
    0.34785484513745385,
];

/// Quadrature oracle for the first-order correction:
/// `exp(x) * [1 + integral_0^1 exp(-s x) delta exp(s x) ds]`,
/// integrated with a 4-point Gauss-Legendre rule on each of `panels`
/// equal subintervals (order-8 convergence in the panel width).
///
/// Panel counts below 8 are permitted so convergence studies can resolve
/// the pre-asymptotic range.
pub fn exp_integral_oracle(x: Quaternion, delta: Quaternion, panels: usize) -> Quaternion {
    let panels = panels.max(1);
    let h = 1.0 / panels as f64;
    let mut integral = Quaternion::ZERO;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for (node, weight) in GL_NODES.iter().zip(GL_WEIGHTS) {
            let s = mid + 0.5 * h * node;
            let g = exp_closed(x.scale(-s)) * delta * exp_closed(x.scale(s));
            integral = integral + g.scale(weight * 0.5 * h);
        }
    }
    let ex = exp_closed(x);
    ex + ex * integral
}

/// Principal-branch logarithm: the result's imaginary magnitude lies in
/// `[0, pi]`.
///
/// Negative reals are rejected ([`Error::BranchPoint`]) because no
/// principal direction `u` exists there.
pub fn log(y: Quaternion) -> Result<Quaternion> {
    let n = y.norm();
    if n.is_nan() || n <= 1e-300 {
        return Err(Error::ZeroArgument);
    }
    let rho = y.vector_norm();
    if rho < r_min(y.w) {
        if y.w < 0.0 {
            return Err(Error::BranchPoint);
        }
        // Analytic limit of atan2(rho, y0)/rho as rho -> 0.
        let vec_scale = 1.0 / y.w;
        return Ok(Quaternion::new(
            n.ln(),
            y.x * vec_scale,
            y.y * vec_scale,
            y.z * vec_scale,
        ));
    }
    let theta = rho.atan2(y.w);
    let vec_scale = theta / rho;
    Ok(Quaternion::new(
        n.ln(),
        y.x * vec_scale,
        y.y * vec_scale,
        y.z * vec_scale,
    ))
}

/// The real coefficient triple of the first-order logarithm expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogExpansionCoeffs {
    /// Coefficient of `m = y^-1 Delta`.
    pub a: f64,
    /// Coefficient of `[u, m]`; equals `r/2` exactly.
    pub b: f64,
    /// Coefficient of `u m u`.
    pub c: f64,
    /// The `r` (imaginary magnitude of `log y`) the triple was evaluated at.
    pub r: f64,
}

impl LogExpansionCoeffs {
    /// `A = (r cot r + 1)/2`, `B = r/2`, `C = (r cot r - 1)/2`.
    ///
    /// `r cot r` has a genuine pole at `r = pi`; that is a singularity of
    /// the expansion formula, not of the logarithm itself.
    pub fn at(r: f64) -> Self {
        let rcot = if r < COEFF_TAYLOR_CUTOFF {
            let r2 = r * r;
            1.0 - r2 / 3.0 - r2 * r2 / 45.0 - 2.0 * r2 * r2 * r2 / 945.0
        } else {
            r * r.cos() / r.sin()
        };
        Self {
            a: 0.5 * (rcot + 1.0),
            b: 0.5 * r,
            c: 0.5 * (rcot - 1.0),
            r,
        }
    }
}

/// Margin around `r = pi` inside which the log expansion is rejected.
const LOG_POLE_MARGIN: f64 = 1e-8;

/// First-order prediction
/// `log(y) + A m + B [u, m] + C u m u` with `m = y^-1 Delta` and `u`, `r`
/// taken from `x = log(y)`.
pub fn log_first_order(y: Quaternion, delta: Quaternion) -> Result<Quaternion> {
    let x = log(y)?;
    let m = y.inverse()? * delta;
    let r = x.vector_norm();
    if r < r_min(x.w) {
        // A -> 1, B, C -> 0: the correction collapses to y^-1 Delta.
        return Ok(x + m);
    }
    if r > std::f64::consts::PI - LOG_POLE_MARGIN {
        return Err(Error::BranchPoint);
    }
    let u = Quaternion::new(0.0, x.x / r, x.y / r, x.z / r);
    let k = LogExpansionCoeffs::at(r);
    Ok(x + m * k.a + (u * m - m * u) * k.b + (u * m * u) * k.c)
}
