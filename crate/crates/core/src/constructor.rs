//! Curve construction: joint RK4 integration of the Frenet system with
//! prescribed curvature functions, exact generators for the reference
//! curves on the two builtin models, and classification sweeps over the
//! homogeneous curve families.
//!
//! The Frenet system evolves coordinates by dx/ds = Σ Tʲ E_j(x) (skipped in
//! homogeneous mode) and each frame vector by
//!
//!   (υ_a^k)' = (-k_{a-1} υ_{a-1} + k_a υ_{a+1})^k - Σ_{i,j} T^i υ_a^j ω^k_{ij},
//!
//! the connection term converting the covariant Frenet right-hand side into
//! plain component derivatives. Orthonormality is monitored, not repaired:
//! drift beyond 1e-6 aborts with an error, since it indicates a step too
//! large or an inconsistent connection table.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;

use crate::classifier::{classify_apparatus, ClassificationReport, ConditionKind};
use crate::curve::{frenet, Curve, FrenetApparatus, ManifoldRef, DEFAULT_RANK_TOL};
use crate::error::{Error, Result};
use crate::exprdsl::Expr;
use crate::manifold::{builtin_e2, builtin_rkmn, FrameManifold};
use crate::numerics::{dot, grid_steps, matvec, rk4_integrate};

const FRAME0_ORTHONORMAL_TOL: f64 = 1e-12;
const DRIFT_ABORT_TOL: f64 = 1e-6;

/// Initial data for a prescribed-curvature Frenet integration.
#[derive(Debug, Clone)]
pub struct FrenetInitialData {
    pub manifold: Arc<FrameManifold>,
    /// Starting coordinates; required iff the manifold has a chart.
    pub start_coords: Option<Vec<f64>>,
    /// Initial orthonormal frame (T₀, υ₂₀, …); length r ≥ 1.
    pub frame0: Vec<Vec<f64>>,
    /// Prescribed curvature functions k₁…k_{r-1} as expressions in `s`.
    pub curvatures: Vec<Expr>,
    pub span: (f64, f64),
    pub step: f64,
}

/// Integrate the Frenet system. Returns the curve together with an
/// apparatus echoing the prescription (curvatures evaluated on the grid)
/// and the integrated frames.
pub fn integrate_frenet_curve(data: &FrenetInitialData) -> Result<(Curve, FrenetApparatus)> {
    let mani = &data.manifold;
    let m = mani.dim;
    let r = data.frame0.len();
    if r == 0 || r > m {
        return Err(Error::InvalidInput(format!(
            "initial frame must contain 1..={m} vectors, got {r}"
        )));
    }
    if data.curvatures.len() + 1 != r {
        return Err(Error::InvalidInput(format!(
            "expected {} curvature prescriptions for {r} frame vectors, got {}",
            r - 1,
            data.curvatures.len()
        )));
    }
    for (a, v) in data.frame0.iter().enumerate() {
        if v.len() != m {
            return Err(Error::DimensionMismatch {
                what: format!("frame0[{a}]"),
                expected: m,
                got: v.len(),
            });
        }
        for (b, w) in data.frame0.iter().enumerate().take(a + 1) {
            let want = if a == b { 1.0 } else { 0.0 };
            if (dot(v, w) - want).abs() > FRAME0_ORTHONORMAL_TOL {
                return Err(Error::InvalidInput(format!(
                    "initial frame is not orthonormal: <υ{},υ{}> = {}",
                    a + 1,
                    b + 1,
                    dot(v, w)
                )));
            }
        }
    }

    let homogeneous = mani.coords.is_empty();
    let nc = mani.coords.len();
    match (&data.start_coords, homogeneous) {
        (Some(p), false) if p.len() == nc => {}
        (None, true) => {}
        (Some(_), true) => {
            return Err(Error::InvalidInput(
                "homogeneous manifolds take no starting coordinates".into(),
            ))
        }
        _ => {
            return Err(Error::InvalidInput(
                "manifold chart requires starting coordinates".into(),
            ))
        }
    }

    let (n_steps, step) = grid_steps(data.span, data.step)?;
    let n = n_steps + 1;
    let s0 = data.span.0;

    // Positivity of the prescribed curvatures on the whole grid.
    let mut curvature_samples: Vec<Vec<f64>> = vec![Vec::with_capacity(n); r - 1];
    for i in 0..n {
        let s = s0 + step * i as f64;
        for (a, k) in data.curvatures.iter().enumerate() {
            let v = k.eval(&[s])?;
            if v <= 0.0 {
                return Err(Error::HypothesisViolation(format!(
                    "prescribed k{} must stay positive; got {v} at s = {s}",
                    a + 1
                )));
            }
            curvature_samples[a].push(v);
        }
    }

    let constant_tables = if homogeneous {
        Some(mani.structure_at(&[])?)
    } else {
        None
    };

    // State layout: [coords | υ₁ | υ₂ | … | υ_r].
    let mut state0 = Vec::with_capacity(nc + r * m);
    if let Some(p) = &data.start_coords {
        state0.extend_from_slice(p);
    }
    for v in &data.frame0 {
        state0.extend_from_slice(v);
    }

    let rhs = |s: f64, y: &[f64]| -> Result<Vec<f64>> {
        let point = &y[..nc];
        let tables_local;
        let tables = match &constant_tables {
            Some(t) => t,
            None => {
                tables_local = mani.structure_at(point)?;
                &tables_local
            }
        };
        let frame_at = |a: usize| &y[nc + a * m..nc + (a + 1) * m];
        let tangent = frame_at(0);

        let mut out = vec![0.0; y.len()];
        if nc > 0 {
            let fm = mani.frame_matrix_at(point)?;
            out[..nc].copy_from_slice(&matvec(&fm, tangent));
        }
        let mut ks = Vec::with_capacity(r - 1);
        for k in &data.curvatures {
            ks.push(k.eval(&[s])?);
        }
        for a in 0..r {
            let ua = frame_at(a);
            // Frenet right-hand side in covariant form, then the connection
            // correction, written into this frame vector's slot.
            let mut slot = vec![0.0; m];
            if a > 0 {
                let prev = frame_at(a - 1);
                for k in 0..m {
                    slot[k] -= ks[a - 1] * prev[k];
                }
            }
            if a + 1 < r {
                let next = frame_at(a + 1);
                for k in 0..m {
                    slot[k] += ks[a] * next[k];
                }
            }
            for i in 0..m {
                if tangent[i] == 0.0 {
                    continue;
                }
                for j in 0..m {
                    let c = tangent[i] * ua[j];
                    if c == 0.0 {
                        continue;
                    }
                    for k in 0..m {
                        slot[k] -= c * tables.omega[i][j][k];
                    }
                }
            }
            out[nc + a * m..nc + (a + 1) * m].copy_from_slice(&slot);
        }
        Ok(out)
    };

    let traj = rk4_integrate(rhs, &state0, data.span, step)?;

    // Unpack and monitor orthonormality at every node.
    let mut coords = if nc > 0 {
        Some(Vec::with_capacity(n))
    } else {
        None
    };
    let mut frames: Vec<Vec<Vec<f64>>> = vec![Vec::with_capacity(n); r];
    for (i, y) in traj.values.iter().enumerate() {
        let s = traj.s_at(i);
        if let Some(cs) = coords.as_mut() {
            cs.push(y[..nc].to_vec());
        }
        for a in 0..r {
            let ua = y[nc + a * m..nc + (a + 1) * m].to_vec();
            for fb in frames.iter().take(a) {
                let drift = dot(&ua, &fb[i]).abs();
                if drift > DRIFT_ABORT_TOL {
                    return Err(Error::OrthonormalityDrift { s, drift });
                }
            }
            let drift = (dot(&ua, &ua).sqrt() - 1.0).abs();
            if drift > DRIFT_ABORT_TOL {
                return Err(Error::OrthonormalityDrift { s, drift });
            }
            frames[a].push(ua);
        }
    }

    let curve = Curve::new(mani.clone(), s0, step, coords, frames[0].clone())?;
    let apparatus =
        FrenetApparatus::from_parts(m, mani.xi_index, s0, step, curvature_samples, frames)?;
    Ok((curve, apparatus))
}

// ---------------------------------------------------------------------------
// Reference curve builders
// ---------------------------------------------------------------------------

/// The explicit curve on the rkmn model: coordinates (ln 2, 0, √2/2·s) with
/// constant tangent components T = -√2/2 X + √2/2 φX.
pub fn build_example_1(span: (f64, f64), step: f64) -> Result<Curve> {
    let (n_steps, step) = grid_steps(span, step)?;
    let n = n_steps + 1;
    let sq2 = std::f64::consts::FRAC_1_SQRT_2;
    let mani = builtin_rkmn();
    let coords: Vec<Vec<f64>> = (0..n)
        .map(|i| vec![2.0f64.ln(), 0.0, sq2 * (span.0 + step * i as f64)])
        .collect();
    let tangent = vec![vec![0.0, -sq2, sq2]; n];
    Ok(Curve::new(mani, span.0, step, Some(coords), tangent)?.with_ref(ManifoldRef::Rkmn))
}

fn check_theta(theta: f64) -> Result<()> {
    let product = theta.sin() * theta.cos();
    if product.is_nan() || product >= 0.0 {
        return Err(Error::HypothesisViolation(format!(
            "curve family requires sinθ·cosθ < 0, got θ = {theta}"
        )));
    }
    Ok(())
}

fn e2_constant_curve(c2: f64, tx: f64, tphix: f64, span: (f64, f64), step: f64) -> Result<Curve> {
    let (n_steps, step) = grid_steps(span, step)?;
    let n = n_steps + 1;
    let mani = builtin_e2(c2)?;
    let tangent = vec![vec![tx, tphix, 0.0]; n];
    Ok(Curve::new(mani, span.0, step, None, tangent)?.with_ref(ManifoldRef::E2 { c2 }))
}

/// Legendre curve family on the e2 model with T = -cosθ X - sinθ φX.
pub fn build_e2_circle(c2: f64, theta: f64, span: (f64, f64), step: f64) -> Result<Curve> {
    check_theta(theta)?;
    e2_constant_curve(c2, -theta.cos(), -theta.sin(), span, step)
}

/// Legendre curve family on the e2 model with T = cosθ X + sinθ φX.
pub fn build_e2_helix(c2: f64, theta: f64, span: (f64, f64), step: f64) -> Result<Curve> {
    check_theta(theta)?;
    e2_constant_curve(c2, theta.cos(), theta.sin(), span, step)
}

// ---------------------------------------------------------------------------
// Parameter sweeps
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFamily {
    Circle,
    Helix,
}

impl fmt::Display for CurveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveFamily::Circle => write!(f, "circle"),
            CurveFamily::Helix => write!(f, "helix"),
        }
    }
}

impl FromStr for CurveFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<CurveFamily> {
        match s.trim().to_lowercase().as_str() {
            "circle" => Ok(CurveFamily::Circle),
            "helix" => Ok(CurveFamily::Helix),
            other => Err(Error::InvalidInput(format!(
                "unknown curve family `{other}` (expected circle or helix)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub span: (f64, f64),
    pub step: f64,
    pub tol: f64,
    pub lambda_floor: f64,
    pub rank_tol: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            span: (0.0, 2.0),
            step: 1e-3,
            tol: crate::classifier::DEFAULT_CLASSIFY_TOL,
            lambda_floor: crate::classifier::DEFAULT_LAMBDA_FLOOR,
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

#[derive(Debug)]
pub struct SweepCell {
    pub family: CurveFamily,
    pub c2: f64,
    pub theta: f64,
    pub kind: ConditionKind,
    pub outcome: std::result::Result<ClassificationReport, String>,
}

/// Classify every (c₂, θ, kind) combination of a curve family. Rows are
/// ordered c₂ outer, θ inner, kind innermost; per-cell errors are recorded
/// in the cell instead of aborting the sweep.
pub fn sweep(
    family: CurveFamily,
    c2_grid: &[f64],
    theta_grid: &[f64],
    kinds: &[ConditionKind],
    opts: &SweepOptions,
) -> Vec<SweepCell> {
    let mut cells = Vec::with_capacity(c2_grid.len() * theta_grid.len() * kinds.len());
    for &c2 in c2_grid {
        for &theta in theta_grid {
            if kinds.is_empty() {
                continue;
            }
            let prepared = (|| -> Result<FrenetApparatus> {
                let curve = match family {
                    CurveFamily::Circle => build_e2_circle(c2, theta, opts.span, opts.step)?,
                    CurveFamily::Helix => build_e2_helix(c2, theta, opts.span, opts.step)?,
                };
                frenet(&curve, opts.rank_tol)
            })();
            for &kind in kinds {
                let outcome = match &prepared {
                    Ok(app) => classify_apparatus(app, kind, opts.tol, opts.lambda_floor)
                        .map_err(|e| e.to_string()),
                    Err(e) => Err(e.to_string()),
                };
                cells.push(SweepCell {
                    family,
                    c2,
                    theta,
                    kind,
                    outcome,
                });
            }
        }
    }
    cells
}

/// CSV schema: `family,c2,theta,kind,verdict,lambda_min,lambda_max,max_residual`.
/// Error cells carry verdict `error` and empty numeric fields.
pub fn write_sweep_csv<W: Write>(cells: &[SweepCell], out: &mut W) -> Result<()> {
    writeln!(
        out,
        "family,c2,theta,kind,verdict,lambda_min,lambda_max,max_residual"
    )?;
    for cell in cells {
        match &cell.outcome {
            Ok(rep) => {
                let lmin = rep
                    .lambda
                    .values
                    .iter()
                    .copied()
                    .fold(f64::INFINITY, f64::min);
                let lmax = rep
                    .lambda
                    .values
                    .iter()
                    .copied()
                    .fold(f64::NEG_INFINITY, f64::max);
                writeln!(
                    out,
                    "{},{:.16e},{:.16e},{},{},{:.16e},{:.16e},{:.16e}",
                    cell.family,
                    cell.c2,
                    cell.theta,
                    cell.kind,
                    rep.verdict,
                    lmin,
                    lmax,
                    rep.max_residual
                )?;
            }
            Err(msg) => {
                writeln!(
                    out,
                    "{},{:.16e},{:.16e},{},error,,,\"{}\"",
                    cell.family,
                    cell.c2,
                    cell.theta,
                    cell.kind,
                    msg.replace('"', "'")
                )?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{verify_theorem, TheoremId, TheoremVerdict, Verdict};
    use crate::curve::{frenet_default, legendre_scalar};
    use crate::exprdsl::parse;
    use crate::meancurvature::{mean_vectors_direct, mean_vectors_formula};
    use crate::numerics::norm;

    const SQ2: f64 = std::f64::consts::FRAC_1_SQRT_2;
    const PI: f64 = std::f64::consts::PI;

    fn k_expr(text: &str) -> Expr {
        parse(text, &["s"]).unwrap()
    }

    #[test]
    fn geodesic_integration_keeps_tangent_constant() {
        let mani = builtin_e2(2.0).unwrap();
        let data = FrenetInitialData {
            manifold: mani,
            start_coords: None,
            frame0: vec![vec![0.0, 0.0, 1.0]], // T = ξ
            curvatures: vec![],
            span: (0.0, 2.0),
            step: 1e-3,
        };
        let (curve, app) = integrate_frenet_curve(&data).unwrap();
        assert_eq!(app.order, 1);
        for t in &curve.tangent {
            assert!((t[2] - 1.0).abs() < 1e-12);
        }
        let detected = frenet_default(&curve).unwrap();
        assert_eq!(detected.order, 1);
    }

    #[test]
    fn example_one_prescription_reproduces_coordinates() {
        // Start at (ln 2, 0, 0) with the curve's exact frame and k₁ = k₂ = 1.
        let mani = builtin_rkmn();
        let data = FrenetInitialData {
            manifold: mani,
            start_coords: Some(vec![2.0f64.ln(), 0.0, 0.0]),
            frame0: vec![
                vec![0.0, -SQ2, SQ2],  // T
                vec![-1.0, 0.0, 0.0],  // υ₂ = -ξ
                vec![0.0, -SQ2, -SQ2], // υ₃
            ],
            curvatures: vec![k_expr("1"), k_expr("1")],
            span: (0.0, 1.0),
            step: 1e-3,
        };
        let (curve, _) = integrate_frenet_curve(&data).unwrap();
        let coords = curve.coords.as_ref().unwrap();
        for (i, p) in coords.iter().enumerate() {
            let s = curve.s_at(i);
            assert!((p[0] - 2.0f64.ln()).abs() < 1e-6, "x at {s}");
            assert!(p[1].abs() < 1e-6, "y at {s}");
            assert!((p[2] - SQ2 * s).abs() < 1e-6, "z at {s}");
        }
        // And it matches the analytic builder.
        let reference = build_example_1((0.0, 1.0), 1e-3).unwrap();
        for i in 0..curve.len() {
            assert!(
                norm(&crate::numerics::sub(
                    &curve.tangent[i],
                    &reference.tangent[i]
                )) < 1e-6
            );
        }
    }

    #[test]
    fn helix_prescription_is_a_fixed_point_of_frenet() {
        let theta = 3.0 * PI / 4.0;
        let mani = builtin_e2(2.0).unwrap();
        let data = FrenetInitialData {
            manifold: mani,
            start_coords: None,
            frame0: vec![
                vec![theta.cos(), theta.sin(), 0.0],
                vec![0.0, 0.0, 1.0],                  // υ₂ = ξ
                vec![theta.sin(), -theta.cos(), 0.0], // υ₃
            ],
            curvatures: vec![k_expr("1"), k_expr("1")],
            span: (0.0, 10.0),
            step: 1e-3,
        };
        let (curve, app) = integrate_frenet_curve(&data).unwrap();
        // Constant-component solution: nothing moves.
        for i in 0..curve.len() {
            assert!((curve.tangent[i][0] - theta.cos()).abs() < 1e-9);
            assert!((curve.tangent[i][1] - theta.sin()).abs() < 1e-9);
        }
        // Orthonormality preserved well under the abort threshold.
        for i in 0..app.len() {
            for a in 0..3 {
                for b in 0..a {
                    assert!(dot(&app.frames[a][i], &app.frames[b][i]).abs() < 1e-7);
                }
            }
        }
        let detected = frenet_default(&curve).unwrap();
        assert_eq!(detected.order, 3);
        assert!((detected.curvatures[0].max_abs() - 1.0).abs() < 1e-7);
        assert!((detected.curvatures[1].max_abs() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn order_two_prescription_precesses_but_keeps_its_curvature() {
        // Frenet data (T, υ₂ = ξ) with k₁ ≡ 1 on e2(c₂ = 2) does not keep
        // constant components (the order-2 chain does not close there), but
        // the integrated curve is a genuine order-2 circle: frenet recovers
        // r = 2 and k₁ ≡ 1.
        let mani = builtin_e2(2.0).unwrap();
        let data = FrenetInitialData {
            manifold: mani,
            start_coords: None,
            frame0: vec![vec![SQ2, -SQ2, 0.0], vec![0.0, 0.0, 1.0]],
            curvatures: vec![k_expr("1")],
            span: (0.0, 2.0),
            step: 1e-3,
        };
        let (curve, _) = integrate_frenet_curve(&data).unwrap();
        let drift = curve
            .tangent
            .iter()
            .map(|t| norm(&crate::numerics::sub(t, &curve.tangent[0])))
            .fold(0.0f64, f64::max);
        assert!(drift > 0.1, "tangent components precess, drift = {drift}");

        let app = frenet_default(&curve).unwrap();
        assert_eq!(app.order, 2);
        for v in &app.curvatures[0].values {
            assert!((v - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn affine_curvature_order_two_curve_is_degenerate_for_t3_2() {
        let mani = builtin_e2(2.0).unwrap();
        let data = FrenetInitialData {
            manifold: mani,
            start_coords: None,
            frame0: vec![vec![SQ2, -SQ2, 0.0], vec![0.0, 0.0, 1.0]],
            curvatures: vec![k_expr("1 + 0.2*s")],
            span: (0.0, 2.0),
            step: 1e-3,
        };
        let (curve, _) = integrate_frenet_curve(&data).unwrap();
        let app = frenet_default(&curve).unwrap();
        assert_eq!(app.order, 2);

        // Δ⊥H = -k₁″υ₂ vanishes for affine k₁, on both routes.
        let f = mean_vectors_formula(&app).unwrap();
        let d = mean_vectors_direct(&curve).unwrap();
        for i in app.interior() {
            assert!(norm(&f.delta_perp_h[i]) < 1e-4);
            assert!(norm(&d.delta_perp_h[i]) < 1e-3);
        }

        let rep = verify_theorem(&curve, TheoremId::T3_2, 1e-3).unwrap();
        assert_eq!(rep.verdict, TheoremVerdict::Degenerate);
        assert_eq!(rep.branch.as_deref(), Some("affine-k1"));
    }

    #[test]
    fn rejects_non_orthonormal_initial_frame() {
        let mani = builtin_e2(2.0).unwrap();
        let data = FrenetInitialData {
            manifold: mani,
            start_coords: None,
            frame0: vec![vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]],
            curvatures: vec![k_expr("1")],
            span: (0.0, 1.0),
            step: 1e-3,
        };
        assert!(matches!(
            integrate_frenet_curve(&data),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn rejects_nonpositive_curvature_prescription() {
        let mani = builtin_e2(2.0).unwrap();
        let data = FrenetInitialData {
            manifold: mani,
            start_coords: None,
            frame0: vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]],
            curvatures: vec![k_expr("s - 0.5")],
            span: (0.0, 1.0),
            step: 1e-3,
        };
        assert!(matches!(
            integrate_frenet_curve(&data),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn example_one_builder_matches_expectations() {
        let c = build_example_1((0.0, 1.0), 1e-3).unwrap();
        for t in &c.tangent {
            assert!((norm(t) - 1.0).abs() < 1e-15);
        }
        let app = frenet_default(&c).unwrap();
        assert_eq!(app.order, 3);
        assert!((app.curvatures[0].max_abs() - 1.0).abs() < 1e-7);
        assert!((app.curvatures[1].max_abs() - 1.0).abs() < 1e-7);
        let g = legendre_scalar(&c);
        assert!(g.values.iter().all(|v| (v + 1.0).abs() < 1e-12));
    }

    #[test]
    fn example_one_is_a_fixed_point_of_rebuilding() {
        // frenet on the analytic curve, then re-integrating from the same
        // initial frame with the detected curvatures, reproduces the tangent.
        let c = build_example_1((0.0, 1.0), 1e-3).unwrap();
        let app = frenet_default(&c).unwrap();
        let k1 = app.curvatures[0].values[app.len() / 2];
        let k2 = app.curvatures[1].values[app.len() / 2];
        let data = FrenetInitialData {
            manifold: c.manifold.clone(),
            start_coords: Some(c.coords.as_ref().unwrap()[0].clone()),
            frame0: vec![
                app.frames[0][0].clone(),
                app.frames[1][0].clone(),
                app.frames[2][0].clone(),
            ],
            curvatures: vec![Expr::num(k1), Expr::num(k2)],
            span: (0.0, 1.0),
            step: 1e-3,
        };
        let (rebuilt, _) = integrate_frenet_curve(&data).unwrap();
        for i in 0..c.len() {
            assert!(
                norm(&crate::numerics::sub(&rebuilt.tangent[i], &c.tangent[i])) < 1e-6,
                "sample {i}"
            );
        }
    }

    #[test]
    fn family_builders_enforce_the_angle_hypothesis() {
        assert!(matches!(
            build_e2_circle(2.0, PI / 4.0, (0.0, 1.0), 1e-3),
            Err(Error::HypothesisViolation(_))
        ));
        assert!(matches!(
            build_e2_helix(2.0, 0.3, (0.0, 1.0), 1e-3),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn family_curvatures_match_the_closed_forms() {
        // k₁ = -sinθ cosθ c₂ and k₂ = |1 - c₂ cos2θ / 2| for both families.
        for (c2, theta) in [
            (2.0, 3.0 * PI / 4.0),
            (1.0, 2.0 * PI / 3.0),
            (5.0, 0.55 * PI),
        ] {
            let k1_want = -theta.sin() * theta.cos() * c2;
            let k2_want = (1.0 - 0.5 * c2 * (2.0 * theta).cos()).abs();
            for curve in [
                build_e2_circle(c2, theta, (0.0, 1.0), 1e-3).unwrap(),
                build_e2_helix(c2, theta, (0.0, 1.0), 1e-3).unwrap(),
            ] {
                let app = frenet_default(&curve).unwrap();
                assert!((app.curvatures[0].values[0] - k1_want).abs() < 1e-9);
                if k2_want > 1e-9 {
                    assert_eq!(app.order, 3);
                    assert!((app.curvatures[1].values[0] - k2_want).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn families_are_legendre_everywhere() {
        for theta in [0.55 * PI, 2.0 * PI / 3.0, 3.0 * PI / 4.0, 5.0 * PI / 6.0] {
            for c2 in [0.5, 2.0] {
                let c = build_e2_circle(c2, theta, (0.0, 1.0), 1e-2).unwrap();
                assert!(c.tangent.iter().all(|t| t[2] == 0.0));
                let h = build_e2_helix(c2, theta, (0.0, 1.0), 1e-2).unwrap();
                assert!(h.tangent.iter().all(|t| t[2] == 0.0));
            }
        }
    }

    #[test]
    fn sweep_proper_tangent_holds_with_helix_lambda() {
        // Constant curvatures make ΔH = k₁(k₁² + k₂²)υ₂ with υ₂ = ξ, so the
        // tangent-proper condition holds with λ = k₁(k₁² + k₂²).
        let opts = SweepOptions {
            span: (0.0, 1.0),
            ..SweepOptions::default()
        };
        let cells = sweep(
            CurveFamily::Circle,
            &[1.0, 2.0],
            &[2.0 * PI / 3.0, 3.0 * PI / 4.0],
            &[ConditionKind::CProperTangent],
            &opts,
        );
        assert_eq!(cells.len(), 4);
        for cell in &cells {
            let rep = cell.outcome.as_ref().unwrap();
            assert_eq!(
                rep.verdict,
                Verdict::Holds,
                "cell {:?}",
                (cell.c2, cell.theta)
            );
            let k1 = -cell.theta.sin() * cell.theta.cos() * cell.c2;
            let k2 = (1.0 - 0.5 * cell.c2 * (2.0 * cell.theta).cos()).abs();
            let lambda_want = k1 * (k1 * k1 + k2 * k2);
            for v in &rep.lambda.values {
                assert!(
                    (v - lambda_want).abs() < 1e-5,
                    "λ = {v}, want {lambda_want}"
                );
            }
        }
    }

    #[test]
    fn sweep_parallel_tangent_always_fails_with_k1_squared_margin() {
        let opts = SweepOptions {
            span: (0.0, 1.0),
            ..SweepOptions::default()
        };
        for family in [CurveFamily::Circle, CurveFamily::Helix] {
            let cells = sweep(
                family,
                &[0.5, 1.0, 2.0, 5.0],
                &[0.55 * PI, 0.65 * PI, 0.75 * PI, 0.85 * PI],
                &[ConditionKind::CParallelTangent],
                &opts,
            );
            for cell in &cells {
                let rep = cell.outcome.as_ref().unwrap();
                assert_eq!(rep.verdict, Verdict::Fails);
                let k1 = -cell.theta.sin() * cell.theta.cos() * cell.c2;
                assert!(rep.max_residual >= k1 * k1 - 1e-4);
            }
        }
    }

    #[test]
    fn sweep_records_cell_errors_without_aborting() {
        let opts = SweepOptions {
            span: (0.0, 1.0),
            ..SweepOptions::default()
        };
        // θ = π/4 violates the angle hypothesis: cell errors, sweep returns.
        let cells = sweep(
            CurveFamily::Circle,
            &[2.0],
            &[PI / 4.0, 3.0 * PI / 4.0],
            &[ConditionKind::CProperTangent],
            &opts,
        );
        assert_eq!(cells.len(), 2);
        assert!(cells[0].outcome.is_err());
        assert!(cells[1].outcome.is_ok());
    }

    #[test]
    fn sweep_with_no_kinds_is_empty() {
        let cells = sweep(
            CurveFamily::Helix,
            &[1.0],
            &[3.0 * PI / 4.0],
            &[],
            &SweepOptions::default(),
        );
        assert!(cells.is_empty());
    }

    #[test]
    fn sweep_csv_is_deterministic() {
        let opts = SweepOptions {
            span: (0.0, 0.5),
            step: 1e-2,
            ..SweepOptions::default()
        };
        let run = || {
            let cells = sweep(
                CurveFamily::Helix,
                &[1.0, 2.0],
                &[3.0 * PI / 4.0],
                &[ConditionKind::CProperTangent, ConditionKind::CProperNormal],
                &opts,
            );
            let mut buf = Vec::new();
            write_sweep_csv(&cells, &mut buf).unwrap();
            buf
        };
        let a = run();
        assert_eq!(a, run());
        let text = String::from_utf8(a).unwrap();
        assert!(
            text.starts_with("family,c2,theta,kind,verdict,lambda_min,lambda_max,max_residual\n")
        );
        assert_eq!(text.lines().count(), 5);
    }
}
