//! Shared numerical kernel: small dense vector helpers, fixed-step RK4,
//! tolerance-aware modified Gram–Schmidt and 4th-order finite differences
//! on uniform grids.
//!
//! Everything here is a pure function of its inputs; nothing allocates
//! global state, so concurrent use is safe.

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Small dense vector/matrix helpers
// ---------------------------------------------------------------------------

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// y += alpha * x
pub fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    debug_assert_eq!(y.len(), x.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scaled(a: &[f64], alpha: f64) -> Vec<f64> {
    a.iter().map(|x| alpha * x).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// m[row][col] · v
pub fn matvec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn all_finite(a: &[f64]) -> bool {
    a.iter().all(|x| x.is_finite())
}

/// Solve a small dense system a·x = b by Gaussian elimination with partial
/// pivoting. `a` is row-major and consumed.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) || b.len() != n {
        return Err(Error::DimensionMismatch {
            what: "solve_dense".into(),
            expected: n,
            got: b.len(),
        });
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col].abs() < 1e-14 {
            return Err(Error::EvalDomain {
                message: "singular matrix in solve_dense".into(),
            });
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Ok(x)
}

// ---------------------------------------------------------------------------
// Sampled functions on uniform grids
// ---------------------------------------------------------------------------

/// A function sampled on a uniform arc-length grid s0, s0+step, …
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled<T> {
    pub s0: f64,
    pub step: f64,
    pub values: Vec<T>,
}

impl<T> Sampled<T> {
    pub fn new(s0: f64, step: f64, values: Vec<T>) -> Self {
        assert!(step > 0.0, "grid step must be positive");
        Sampled { s0, step, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn s_at(&self, i: usize) -> f64 {
        self.s0 + self.step * i as f64
    }

    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.s_at(i))
    }
}

impl Sampled<f64> {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }
}

// ---------------------------------------------------------------------------
// Classical fixed-step RK4
// ---------------------------------------------------------------------------

/// Number of uniform steps covering `span` at (approximately) `step`, and
/// the adjusted step that makes both endpoints exact grid nodes.
pub fn grid_steps(span: (f64, f64), step: f64) -> Result<(usize, f64)> {
    if step.is_nan() || step <= 0.0 {
        return Err(Error::InvalidInput("grid step must be positive".into()));
    }
    let length = span.1 - span.0;
    if length.is_nan() || length <= 0.0 {
        return Err(Error::InvalidInput("span must have positive length".into()));
    }
    let ratio = length / step;
    let n = if (ratio - ratio.round()).abs() < 1e-9 * ratio.max(1.0) {
        ratio.round() as usize
    } else {
        ratio.ceil() as usize
    };
    let n = n.max(1);
    Ok((n, length / n as f64))
}

/// Integrate `state' = rhs(s, state)` from `span.0` to `span.1` with the
/// classical 4th-order Runge–Kutta scheme at fixed step. The step is
/// adjusted (never enlarged) so the grid hits both endpoints exactly; the
/// returned trajectory contains every grid node.
pub fn rk4_integrate<F>(
    mut rhs: F,
    state0: &[f64],
    span: (f64, f64),
    step: f64,
) -> Result<Sampled<Vec<f64>>>
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>>,
{
    let (s_start, _) = span;
    let (n_steps, step) = grid_steps(span, step)?;

    let mut values = Vec::with_capacity(n_steps + 1);
    let mut y = state0.to_vec();
    values.push(y.clone());

    for i in 0..n_steps {
        let s = s_start + step * i as f64;
        let k1 = rhs(s, &y)?;
        let mut y2 = y.clone();
        axpy(&mut y2, 0.5 * step, &k1);
        let k2 = rhs(s + 0.5 * step, &y2)?;
        let mut y3 = y.clone();
        axpy(&mut y3, 0.5 * step, &k2);
        let k3 = rhs(s + 0.5 * step, &y3)?;
        let mut y4 = y.clone();
        axpy(&mut y4, step, &k3);
        let k4 = rhs(s + step, &y4)?;

        for j in 0..y.len() {
            y[j] += step / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        if !all_finite(&y) {
            return Err(Error::IntegrationDiverged { s: s + step });
        }
        values.push(y.clone());
    }
    Ok(Sampled::new(s_start, step, values))
}

// ---------------------------------------------------------------------------
// Modified Gram–Schmidt with rank detection
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct GramSchmidt {
    /// Orthonormal vectors, one per input vector up to `rank`.
    pub basis: Vec<Vec<f64>>,
    /// `coefficients[k][j]` for j < k is the projection of input k on basis j;
    /// `coefficients[k][k]` is the residual norm before normalization, so the
    /// k-th input is reconstructed as Σ_j coefficients[k][j]·basis[j].
    pub coefficients: Vec<Vec<f64>>,
    pub rank: usize,
}

/// Orthonormalize `vectors` under the inner product `inner`. Uses the
/// modified scheme with one re-orthogonalization pass. A vector whose
/// residual norm falls below `tol` (relative to the first vector's norm)
/// terminates the rank; later vectors are not processed.
pub fn gram_schmidt<F>(vectors: &[Vec<f64>], inner: F, tol: f64) -> GramSchmidt
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut coefficients: Vec<Vec<f64>> = Vec::new();
    let mut threshold = tol;

    for (k, v) in vectors.iter().enumerate() {
        let mut resid = v.clone();
        let mut coeff = vec![0.0; k + 1];
        // Two projection passes keep orthogonality near machine precision.
        for _pass in 0..2 {
            for (j, u) in basis.iter().enumerate() {
                let c = inner(&resid, u);
                axpy(&mut resid, -c, u);
                coeff[j] += c;
            }
        }
        let r = inner(&resid, &resid).max(0.0).sqrt();
        coeff[k] = r;
        if k == 0 {
            threshold = tol * r.max(1.0);
        }
        coefficients.push(coeff);
        if r < threshold {
            // Rank deficiency: stop here, report what we have.
            break;
        }
        basis.push(scaled(&resid, 1.0 / r));
    }

    let rank = basis.len();
    GramSchmidt {
        basis,
        coefficients,
        rank,
    }
}

// ---------------------------------------------------------------------------
// 4th-order finite differences on uniform grids
// ---------------------------------------------------------------------------

// Stencil coefficients (Fornberg tables), all divided by 12.
const D1_CENTRAL: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0]; // offsets -2..2
const D1_FWD0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0]; // offsets 0..4
const D1_FWD1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0]; // offsets -1..3
const D2_CENTRAL: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0]; // offsets -2..2
const D2_FWD0: [f64; 6] = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0]; // offsets 0..5
const D2_FWD1: [f64; 6] = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0]; // offsets -1..4

fn stencil_apply(values: &[f64], start: usize, coeffs: &[f64], scale: f64) -> f64 {
    let mut acc = 0.0;
    for (o, c) in coeffs.iter().enumerate() {
        acc += c * values[start + o];
    }
    acc * scale / 12.0
}

/// First or second derivative of uniformly sampled scalar data. Interior
/// nodes use 4th-order central stencils; the first/last two nodes use
/// one-sided 4th-order stencils so the output covers the full grid.
pub fn central_diff(f: &Sampled<f64>, order: u8) -> Result<Sampled<f64>> {
    let n = f.len();
    let needed = match order {
        1 => 5,
        2 => 6,
        _ => {
            return Err(Error::InvalidInput(format!(
                "derivative order must be 1 or 2, got {order}"
            )))
        }
    };
    if n < needed {
        return Err(Error::TooFewSamples {
            what: "central_diff",
            needed,
            got: n,
        });
    }
    let h = f.step;
    let v = &f.values;
    let mut out = vec![0.0; n];
    match order {
        1 => {
            let s = 1.0 / h;
            out[0] = stencil_apply(v, 0, &D1_FWD0, s);
            out[1] = stencil_apply(v, 0, &D1_FWD1, s);
            for i in 2..n - 2 {
                out[i] = stencil_apply(v, i - 2, &D1_CENTRAL, s);
            }
            // Mirrored backward stencils: negate and reverse the forward ones.
            let rev1: Vec<f64> = D1_FWD1.iter().rev().map(|c| -c).collect();
            let rev0: Vec<f64> = D1_FWD0.iter().rev().map(|c| -c).collect();
            out[n - 2] = stencil_apply(v, n - 5, &rev1, s);
            out[n - 1] = stencil_apply(v, n - 5, &rev0, s);
        }
        2 => {
            let s = 1.0 / (h * h);
            out[0] = stencil_apply(v, 0, &D2_FWD0, s);
            out[1] = stencil_apply(v, 0, &D2_FWD1, s);
            for i in 2..n - 2 {
                out[i] = stencil_apply(v, i - 2, &D2_CENTRAL, s);
            }
            let rev1: Vec<f64> = D2_FWD1.iter().rev().copied().collect();
            let rev0: Vec<f64> = D2_FWD0.iter().rev().copied().collect();
            out[n - 2] = stencil_apply(v, n - 6, &rev1, s);
            out[n - 1] = stencil_apply(v, n - 6, &rev0, s);
        }
        _ => unreachable!(),
    }
    Ok(Sampled::new(f.s0, f.step, out))
}

/// Componentwise first derivative of vector-valued samples on a uniform grid.
pub fn derivative_rows(values: &[Vec<f64>], step: f64) -> Result<Vec<Vec<f64>>> {
    let n = values.len();
    if n < 5 {
        return Err(Error::TooFewSamples {
            what: "derivative_rows",
            needed: 5,
            got: n,
        });
    }
    let m = values[0].len();
    let mut out = vec![vec![0.0; m]; n];
    let mut comp = Vec::with_capacity(n);
    for c in 0..m {
        comp.clear();
        comp.extend(values.iter().map(|v| v[c]));
        let d = central_diff(&Sampled::new(0.0, step, comp.clone()), 1)?;
        for (i, dv) in d.values.iter().enumerate() {
            out[i][c] = *dv;
        }
    }
    Ok(out)
}

/// Pointwise 4th-order central first derivative of a closure, used where no
/// sampled grid exists (frame-field bracket checks).
pub fn derivative_at<F>(f: F, x: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    Ok((-f(x + 2.0 * h)? + 8.0 * f(x + h)? - 8.0 * f(x - h)? + f(x - 2.0 * h)?) / (12.0 * h))
}
