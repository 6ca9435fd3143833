//! Closed-form and oracle solvers for the quaternionic linear equation
//! `a*x + x*b = c`.
//!
//! Two closed forms are implemented:
//!
//! * left form: `x = d^-1 * (a*c + c*conj(b))` with
//!   `d = a^2 + a*(b + conj(b)) + conj(b)*b`, which commutes with `a`;
//! * right form: `x = (conj(a)*c + c*b) * h^-1` with
//!   `h = b^2 + (a + conj(a))*b + conj(a)*a`, the mirror of `d` under the
//!   left/right exchange. `h` commutes with `b`.
//!
//! The ground truth is [`solve_embedding`]: the map `x -> a*x + x*b` is a
//! real-linear operator on R^4 in the basis `(1, i, j, k)`; it is assembled
//! as the sum of the left- and right-multiplication matrices and solved by
//! Gaussian elimination with partial pivoting. Both closed forms are gated
//! behind this oracle in the test suite.
//!
//! The determinant of the embedded operator equals `norm(d)^2` (and
//! `norm(h)^2`), so the closed-form denominators and the embedding become
//! singular together.

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;

/// The data of one equation `a*x + x*b = c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SylvesterProblem {
    pub a: Quaternion,
    pub b: Quaternion,
    pub c: Quaternion,
}

/// The two closed-form denominators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SylvesterDenominators {
    /// `d = a^2 + a*(b + conj(b)) + conj(b)*b`; `[a, d] = 0`.
    pub d: Quaternion,
    /// `h = b^2 + (a + conj(a))*b + conj(a)*a`; `[b, h] = 0`.
    pub h: Quaternion,
}

impl SylvesterProblem {
    pub fn new(a: Quaternion, b: Quaternion, c: Quaternion) -> Self {
        Self { a, b, c }
    }

    pub fn denominators(&self) -> SylvesterDenominators {
        let (a, b) = (self.a, self.b);
        SylvesterDenominators {
            d: a * a + a * (b + b.conjugate()) + b.conjugate() * b,
            h: b * b + (a + a.conjugate()) * b + a.conjugate() * a,
        }
    }

    /// Scale-relative floor under which the denominators (equivalently the
    /// embedding determinant) are treated as singular.
    pub fn singularity_threshold(&self) -> f64 {
        1e-10 * (self.a.norm_sq() + self.b.norm_sq() + 1.0)
    }

    /// `norm(a*x + x*b - c)` for a candidate solution.
    pub fn residual(&self, x: Quaternion) -> f64 {
        (self.a * x + x * self.b - self.c).norm()
    }
}

/// Solve via `x = d^-1 * (a*c + c*conj(b))`.
pub fn solve_left_form(p: &SylvesterProblem) -> Result<Quaternion> {
    let d = p.denominators().d;
    if d.norm() <= p.singularity_threshold() {
        return Err(Error::SingularOperator);
    }
    let numerator = p.a * p.c + p.c * p.b.conjugate();
    Ok(d.inverse()? * numerator)
}

/// Solve via `x = (conj(a)*c + c*b) * h^-1`.
pub fn solve_right_form(p: &SylvesterProblem) -> Result<Quaternion> {
    let h = p.denominators().h;
    if h.norm() <= p.singularity_threshold() {
        return Err(Error::SingularOperator);
    }
    let numerator = p.a.conjugate() * p.c + p.c * p.b;
    Ok(numerator * h.inverse()?)
}

/// 4x4 matrix of left multiplication by `a` in the basis `(1, i, j, k)`.
pub fn left_mul_matrix(a: Quaternion) -> [[f64; 4]; 4] {
    [
        [a.w, -a.x, -a.y, -a.z],
        [a.x, a.w, -a.z, a.y],
        [a.y, a.z, a.w, -a.x],
        [a.z, -a.y, a.x, a.w],
    ]
}

/// 4x4 matrix of right multiplication by `b` in the basis `(1, i, j, k)`.
pub fn right_mul_matrix(b: Quaternion) -> [[f64; 4]; 4] {
    [
        [b.w, -b.x, -b.y, -b.z],
        [b.x, b.w, b.z, -b.y],
        [b.y, -b.z, b.w, b.x],
        [b.z, b.y, -b.x, b.w],
    ]
}

/// Determinant of the embedded operator `L(a) + R(b)`, computed from the
/// elimination pivots. Equals `norm(d)^2` up to rounding.
pub fn embedding_determinant(p: &SylvesterProblem) -> f64 {
    let m = operator_matrix(p);
    match eliminate(m, [0.0; 4]) {
        Ok((_, det)) | Err((_, det)) => det,
    }
}

fn operator_matrix(p: &SylvesterProblem) -> [[f64; 4]; 4] {
    let l = left_mul_matrix(p.a);
    let r = right_mul_matrix(p.b);
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = l[i][j] + r[i][j];
        }
    }
    m
}

/// Gaussian elimination with partial pivoting on the 4x4 system.
/// Returns (solution, determinant); the `Err` carries the determinant so
/// near-singular detection can still report it.
#[allow(clippy::needless_range_loop)]
fn eliminate(
    mut m: [[f64; 4]; 4],
    mut rhs: [f64; 4],
) -> std::result::Result<([f64; 4], f64), ((), f64)> {
    let mut det = 1.0;
    let mut max_pivot: f64 = 0.0;
    for col in 0..4 {
        let pivot_row = (col..4)
            .max_by(|&p, &q| m[p][col].abs().total_cmp(&m[q][col].abs()))
            .unwrap();
        if pivot_row != col {
            m.swap(col, pivot_row);
            rhs.swap(col, pivot_row);
            det = -det;
        }
        let pivot = m[col][col];
        det *= pivot;
        max_pivot = max_pivot.max(pivot.abs());
        // Pivot collapse: relative to the largest pivot seen so far.
        if pivot.abs() <= 1e-13 * max_pivot.max(1e-300) {
            return Err(((), 0.0));
        }
        for row in col + 1..4 {
            let factor = m[row][col] / pivot;
            m[row][col] = 0.0;
            for j in col + 1..4 {
                m[row][j] -= factor * m[col][j];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let mut acc = rhs[row];
        for j in row + 1..4 {
            acc -= m[row][j] * x[j];
        }
        x[row] = acc / m[row][row];
    }
    Ok((x, det))
}

/// Solve by embedding into the 4x4 real linear system; this is the
/// ground-truth oracle for both closed forms.
pub fn solve_embedding(p: &SylvesterProblem) -> Result<Quaternion> {
    let m = operator_matrix(p);
    let rhs = [p.c.w, p.c.x, p.c.y, p.c.z];
    match eliminate(m, rhs) {
        Ok((x, det)) => {
            // Match the closed forms' scale-relative singularity policy:
            // det = norm(d)^2.
            if det.abs() <= p.singularity_threshold().powi(2) {
                return Err(Error::SingularOperator);
            }
            Ok(Quaternion::new(x[0], x[1], x[2], x[3]))
        }
        Err(_) => Err(Error::SingularOperator),
    }
}
