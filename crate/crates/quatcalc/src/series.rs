//! Power series with left-quaternion coefficients and the expansion
//! operators built on them.
//!
//! A series `F(x) = sum c_n x^n` is evaluated through the complex
//! embedding: with `x = x0 + r*u` and `z = x0 + i r`,
//!
//! ```text
//! x^n = Re(z^n) + Im(z^n) u
//! ```
//!
//! so one Horner pass per coefficient component yields `F(x)`, `F(x*)`,
//! `F'(x)` and `F''(x)` together, where `F'` is the derivative taken as if
//! the argument were real. The coefficients may be arbitrary quaternions
//! multiplying from the left; everything downstream keeps them there.
//!
//! The first-order increment of `F(x + delta)` splits `delta` against `u`:
//!
//! ```text
//! DF = F'(x) d1 + (F(x) - F(x*)) (x - x*)^-1 d2
//! ```
//!
//! with `d1` the commuting and `d2` the conjugating channel. An equivalent
//! commutator form, the second-order term, the Leibnitz rule and expansion
//! about a shifted center are provided alongside.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::{r_min, split_delta, Quaternion};

/// Largest representable truncation order.
pub const MAX_DEGREE: usize = 64;

/// A truncated power series `sum_{n=0}^{N} c_n x^n` with quaternion
/// coefficients multiplying from the left, `N <= MAX_DEGREE`.
///
/// Serialized as `{"coeffs": [[w, x, y, z], ...]}` in degree order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct PowerSeries {
    coeffs: Vec<Quaternion>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    coeffs: Vec<Quaternion>,
}

impl TryFrom<SeriesRepr> for PowerSeries {
    type Error = Error;
    fn try_from(repr: SeriesRepr) -> Result<Self> {
        PowerSeries::new(repr.coeffs)
    }
}

impl From<PowerSeries> for SeriesRepr {
    fn from(series: PowerSeries) -> Self {
        SeriesRepr { coeffs: series.coeffs }
    }
}

/// The values a single embedding pass produces at `x`.
///
/// `difference_quotient` is `(F(x) - F(x*)) (x - x*)^-1`, which is
/// `Im f(z)/r` pulled back from the embedding; below `r_min` it is defined
/// as its analytic limit `F'(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddedValues {
    pub value: Quaternion,
    pub conjugate_value: Quaternion,
    pub derivative: Quaternion,
    pub second_derivative: Quaternion,
    pub difference_quotient: Quaternion,
}

/// Outcome of a Leibnitz-rule comparison: the max-norm difference between
/// the operator applied to the product series and the product-rule form,
/// plus a magnitude scale for normalizing tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeibnitzCheck {
    /// `max_norm(D(FG) - product rule form)`.
    pub residual: f64,
    /// `1 + max(|lhs|, |rhs|)`; residuals should be compared against
    /// `tolerance * scale`.
    pub scale: f64,
}

/// Real and imaginary quaternion parts of `f(z)`, `f'(z)`, `f''(z)` at the
/// embedded point; the public values are recomposed against `u`.
struct RawEmbed {
    s_re: Quaternion,
    s_im: Quaternion,
    d_re: Quaternion,
    d_im: Quaternion,
    dd_re: Quaternion,
    dd_im: Quaternion,
}

impl PowerSeries {
    /// Builds a series from coefficients in degree order, trimming trailing
    /// zero coefficients. Degrees above [`MAX_DEGREE`] are rejected.
    pub fn new(mut coeffs: Vec<Quaternion>) -> Result<Self> {
        while coeffs.last() == Some(&Quaternion::ZERO) {
            coeffs.pop();
        }
        if coeffs.len() > MAX_DEGREE + 1 {
            return Err(Error::DegreeCap(coeffs.len() - 1));
        }
        Ok(Self { coeffs })
    }

    /// Series with real coefficients.
    pub fn from_real_coeffs(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Quaternion::from_real(c)).collect())
    }

    /// The single term `coeff * x^degree`.
    pub fn monomial(coeff: Quaternion, degree: usize) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeCap(degree));
        }
        let mut coeffs = vec![Quaternion::ZERO; degree + 1];
        coeffs[degree] = coeff;
        Self::new(coeffs)
    }

    /// Truncated exponential series `sum_{n<terms} x^n / n!`.
    pub fn exp_series(terms: usize) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(terms);
        let mut c = 1.0;
        for n in 0..terms {
            if n > 0 {
                c /= n as f64;
            }
            coeffs.push(Quaternion::from_real(c));
        }
        Self::new(coeffs)
    }

    /// Truncated series of `log(1 + x)`: `sum_{n=1}^{terms-1} (-1)^(n+1) x^n / n`.
    pub fn log1p_series(terms: usize) -> Result<Self> {
        let mut coeffs = vec![Quaternion::ZERO];
        for n in 1..terms {
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            coeffs.push(Quaternion::from_real(sign / n as f64));
        }
        Self::new(coeffs)
    }

    /// Truncation order N (0 for the zero series).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficient of `x^n`; zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Quaternion {
        self.coeffs.get(n).copied().unwrap_or(Quaternion::ZERO)
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    /// True when every coefficient has an exactly zero vector part.
    pub fn has_real_coeffs(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.x == 0.0 && c.y == 0.0 && c.z == 0.0)
    }

    /// Derivative series, taken as if the variable were real:
    /// `sum n c_n x^(n-1)`.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &c)| c.scale(n as f64))
            .collect();
        Self::new(coeffs).expect("derivative never raises the degree")
    }

    /// Product `F * G` by coefficient convolution.
    ///
    /// The right factor must have real coefficients; only then do its
    /// coefficients commute past powers of `x`, making the convolution the
    /// actual pointwise product.
    pub fn multiply(&self, g: &Self) -> Result<Self> {
        if !g.has_real_coeffs() {
            return Err(Error::NonRealG);
        }
        if self.coeffs.is_empty() || g.coeffs.is_empty() {
            return Self::new(Vec::new());
        }
        let deg = self.degree() + g.degree();
        if deg > MAX_DEGREE {
            return Err(Error::DegreeCap(deg));
        }
        let mut coeffs = vec![Quaternion::ZERO; deg + 1];
        for (i, &ci) in self.coeffs.iter().enumerate() {
            for (j, gj) in g.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j] + ci.scale(gj.w);
            }
        }
        Self::new(coeffs)
    }

    /// Four simultaneous complex Horner passes, one per coefficient
    /// component, carrying value, first and second derivative.
    fn raw_embed(&self, z: Complex64) -> RawEmbed {
        let zero = Complex64::new(0.0, 0.0);
        let mut p = [zero; 4];
        let mut dp = [zero; 4];
        let mut ddp = [zero; 4];
        for c in self.coeffs.iter().rev() {
            let comps = [c.w, c.x, c.y, c.z];
            for k in 0..4 {
                ddp[k] = ddp[k] * z + 2.0 * dp[k];
                dp[k] = dp[k] * z + p[k];
                p[k] = p[k] * z + comps[k];
            }
        }
        let assemble = |v: &[Complex64; 4], im: bool| {
            let pick = |c: Complex64| if im { c.im } else { c.re };
            Quaternion::new(pick(v[0]), pick(v[1]), pick(v[2]), pick(v[3]))
        };
        RawEmbed {
            s_re: assemble(&p, false),
            s_im: assemble(&p, true),
            d_re: assemble(&dp, false),
            d_im: assemble(&dp, true),
            dd_re: assemble(&ddp, false),
            dd_im: assemble(&ddp, true),
        }
    }

    /// Imaginary magnitude and unit direction of `x`, or `None` when `x`
    /// is within `r_min` of the real axis.
    fn direction(x: Quaternion) -> Option<(f64, Quaternion)> {
        let r = x.vector_norm();
        if r < r_min(x.w) {
            None
        } else {
            Some((r, Quaternion::new(0.0, x.x / r, x.y / r, x.z / r)))
        }
    }

    /// Evaluates `F`, `F(x*)`, `F'`, `F''` and the difference quotient in
    /// one pass. Near the real axis the embedding degenerates to plain
    /// real Horner and the difference quotient takes its limit `F'(x)`.
    pub fn eval_embedded(&self, x: Quaternion) -> EmbeddedValues {
        match Self::direction(x) {
            None => {
                let raw = self.raw_embed(Complex64::new(x.w, 0.0));
                EmbeddedValues {
                    value: raw.s_re,
                    conjugate_value: raw.s_re,
                    derivative: raw.d_re,
                    second_derivative: raw.dd_re,
                    difference_quotient: raw.d_re,
                }
            }
            Some((r, u)) => {
                let raw = self.raw_embed(Complex64::new(x.w, r));
                EmbeddedValues {
                    value: raw.s_re + raw.s_im * u,
                    conjugate_value: raw.s_re - raw.s_im * u,
                    derivative: raw.d_re + raw.d_im * u,
                    second_derivative: raw.dd_re + raw.dd_im * u,
                    difference_quotient: raw.s_im / r,
                }
            }
        }
    }

    /// `F(x)` alone.
    pub fn eval(&self, x: Quaternion) -> Quaternion {
        self.eval_embedded(x).value
    }
}

/// First-order increment of `F(x + delta)`:
///
/// ```text
/// DF = F'(x) d1 + (F(x) - F(x*)) (x - x*)^-1 d2
/// ```
///
/// where `delta = d1 + d2` is split against the direction of `x`. Near the
/// real axis both channels collapse to `F'(x) delta`.
pub fn general_first_order(f: &PowerSeries, x: Quaternion, delta: Quaternion) -> Quaternion {
    let e = f.eval_embedded(x);
    match PowerSeries::direction(x) {
        None => e.derivative * delta,
        Some((_, u)) => {
            let split = split_delta(delta, u).expect("direction is unit by construction");
            e.derivative * split.parallel + e.difference_quotient * split.perp
        }
    }
}

/// The same increment in commutator form:
///
/// ```text
/// DF = F'(x) delta + (1/4r) (F(x*) - F(x)) [u, delta] + (1/4) F'(x) [u, [u, delta]]
/// ```
///
/// Algebraically identical to [`general_first_order`]; kept as a separate
/// entry point so the identity can be checked numerically. The explicit
/// `1/r` forces a [`Error::NearRealAxis`] guard.
pub fn general_first_order_commutator_form(
    f: &PowerSeries,
    x: Quaternion,
    delta: Quaternion,
) -> Result<Quaternion> {
    let p = x.polar_decompose()?;
    let (r, u) = (p.r, p.u);
    let e = f.eval_embedded(x);
    let single = (e.conjugate_value - e.value) * u.commutator(delta);
    let double = e.derivative * u.commutator(u.commutator(delta));
    Ok(e.derivative * delta + single.scale(1.0 / (4.0 * r)) + double.scale(0.25))
}

/// Second-order increment:
///
/// ```text
/// (1/2) F''(x) d1^2
///   + (F(x) - F(x*)) (x - x*)^-2 (d2 d1 - delta d2)
///   + F'(x) (x - x*)^-1 delta d2
///   + F'(x*) (x* - x)^-1 d2 d1
/// ```
///
/// with `(x - x*)^-1 = -u/(2r)` and `(x - x*)^-2 = -1/(4r^2)`. Together
/// with the first-order term this leaves an `O(delta^3)` residual, and it
/// is exact for series of degree at most 2.
pub fn second_order(f: &PowerSeries, x: Quaternion, delta: Quaternion) -> Result<Quaternion> {
    let p = x.polar_decompose()?;
    let (r, u) = (p.r, p.u);
    let raw = f.raw_embed(Complex64::new(x.w, r));
    let split = split_delta(delta, u).expect("direction is unit by construction");
    let (d1, d2) = (split.parallel, split.perp);

    let fprime = raw.d_re + raw.d_im * u;
    let fprime_star = raw.d_re - raw.d_im * u;
    let fsecond = raw.dd_re + raw.dd_im * u;
    // F(x) - F(x*) = 2 S_im u.
    let fdiff = (raw.s_im * u).scale(2.0);

    let t1 = (fsecond * (d1 * d1)).scale(0.5);
    let t2 = (fdiff * (d2 * d1 - delta * d2)).scale(-1.0 / (4.0 * r * r));
    let t3 = fprime * u.scale(-1.0 / (2.0 * r)) * delta * d2;
    let t4 = fprime_star * u.scale(1.0 / (2.0 * r)) * d2 * d1;
    Ok(t1 + t2 + t3 + t4)
}

/// Compares the two sides of the Leibnitz rule for `D(FG)`:
/// the operator applied to the product series against
///
/// ```text
/// (F G' + F' G)(x) d1 + [F(x)G(x) - F(x*)G(x*)] (x - x*)^-1 d2
/// ```
///
/// `G` must have real coefficients; that is what lets its values commute
/// through the split channels (and makes the convolution product valid).
pub fn leibnitz_check(
    f: &PowerSeries,
    g: &PowerSeries,
    x: Quaternion,
    delta: Quaternion,
) -> Result<LeibnitzCheck> {
    if !g.has_real_coeffs() {
        return Err(Error::NonRealG);
    }
    let product = f.multiply(g)?;
    let lhs = general_first_order(&product, x, delta);

    let ef = f.eval_embedded(x);
    let eg = g.eval_embedded(x);
    // Real-coefficient G commutes with powers of x, so (FG')(x) and
    // (F'G)(x) factor into pointwise products.
    let sum_rule = ef.value * eg.derivative + ef.derivative * eg.value;
    let rhs = match PowerSeries::direction(x) {
        None => sum_rule * delta,
        Some((r, u)) => {
            let split = split_delta(delta, u).expect("direction is unit by construction");
            let bracket = ef.value * eg.value - ef.conjugate_value * eg.conjugate_value;
            sum_rule * split.parallel + bracket * u.scale(-1.0 / (2.0 * r)) * split.perp
        }
    };

    Ok(LeibnitzCheck {
        residual: (lhs - rhs).max_norm(),
        scale: 1.0 + lhs.norm().max(rhs.norm()),
    })
}

/// First-order increment of a series in the shifted variable
/// `y = x - x_f`, split against the direction of `y` rather than of `x`.
///
/// The center must leave `y` usefully off the real axis; a near-real `y`
/// is rejected rather than silently splitting against a noise direction.
pub fn recenter(
    f: &PowerSeries,
    x_f: Quaternion,
    x: Quaternion,
    delta: Quaternion,
) -> Result<Quaternion> {
    let y = x - x_f;
    if y.vector_norm() < r_min(y.w) {
        return Err(Error::NearRealAxis);
    }
    Ok(general_first_order(f, y, delta))
}
