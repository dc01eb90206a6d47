//! The four mean-curvature derivative vectors of a non-geodesic curve:
//! ∇_T H, ΔH, ∇⊥_T H and Δ⊥H, with H = ∇_T T = k₁υ₂.
//!
//! Two independent routes compute them. `mean_vectors_formula` assembles the
//! closed forms in the curvature functions and Frenet frame:
//!
//!   ∇_T H  = -k₁² υ₁ + k₁′ υ₂ + k₁k₂ υ₃
//!   ΔH     = 3k₁k₁′ υ₁ + (k₁³ + k₁k₂² - k₁″) υ₂ - (2k₁′k₂ + k₁k₂′) υ₃ - k₁k₂k₃ υ₄
//!   ∇⊥_T H = k₁′ υ₂ + k₁k₂ υ₃
//!   Δ⊥H    = (k₁k₂² - k₁″) υ₂ - (2k₁′k₂ + k₁k₂′) υ₃ - k₁k₂k₃ υ₄
//!
//! with ΔH = -∇_T∇_T∇_T T and the normal-bundle Laplacian defined through
//! ∇⊥. `mean_vectors_direct` instead differentiates covariantly along the
//! curve (projecting out the tangential component after each step for the
//! normal-bundle versions) and serves as the validation oracle; the
//! classifier consumes only the formula route.

use crate::curve::{covariant_derivative, Curve, FrenetApparatus};
use crate::error::{Error, Result};
use crate::numerics::{axpy, central_diff, dot, Sampled};

/// Per-sample frame components of the four derivative vectors.
#[derive(Debug, Clone)]
pub struct MeanVectors {
    pub nabla_t_h: Vec<Vec<f64>>,
    pub delta_h: Vec<Vec<f64>>,
    pub nabla_perp_h: Vec<Vec<f64>>,
    pub delta_perp_h: Vec<Vec<f64>>,
}

fn zeros_like(app: &FrenetApparatus) -> Vec<f64> {
    vec![0.0; app.len()]
}

/// Closed-form assembly from a Frenet apparatus. Frame vectors and curvature
/// terms beyond the osculating order are treated as zero.
pub fn mean_vectors_formula(app: &FrenetApparatus) -> Result<MeanVectors> {
    if app.order < 2 {
        return Err(Error::GeodesicInput);
    }
    let n = app.len();
    let m = app.dim;

    let k1 = app.curvatures[0].clone();
    let k2 = app
        .curvatures
        .get(1)
        .cloned()
        .unwrap_or_else(|| Sampled::new(app.s0, app.step, zeros_like(app)));
    let k3 = app
        .curvatures
        .get(2)
        .cloned()
        .unwrap_or_else(|| Sampled::new(app.s0, app.step, zeros_like(app)));

    let k1p = central_diff(&k1, 1)?.values;
    let k1pp = central_diff(&k1, 2)?.values;
    let k2p = if app.order > 2 {
        central_diff(&k2, 1)?.values
    } else {
        zeros_like(app)
    };

    let zero_frame = vec![vec![0.0; m]; n];
    let u1 = &app.frames[0];
    let u2 = &app.frames[1];
    let u3 = app.frames.get(2).unwrap_or(&zero_frame);
    let u4 = app.frames.get(3).unwrap_or(&zero_frame);

    let mut out = MeanVectors {
        nabla_t_h: vec![vec![0.0; m]; n],
        delta_h: vec![vec![0.0; m]; n],
        nabla_perp_h: vec![vec![0.0; m]; n],
        delta_perp_h: vec![vec![0.0; m]; n],
    };

    for i in 0..n {
        let (k1, k2, k3) = (k1.values[i], k2.values[i], k3.values[i]);
        let (k1p, k1pp, k2p) = (k1p[i], k1pp[i], k2p[i]);

        let v = &mut out.nabla_t_h[i];
        axpy(v, -k1 * k1, &u1[i]);
        axpy(v, k1p, &u2[i]);
        axpy(v, k1 * k2, &u3[i]);

        let v = &mut out.delta_h[i];
        axpy(v, 3.0 * k1 * k1p, &u1[i]);
        axpy(v, k1.powi(3) + k1 * k2 * k2 - k1pp, &u2[i]);
        axpy(v, -(2.0 * k1p * k2 + k1 * k2p), &u3[i]);
        axpy(v, -k1 * k2 * k3, &u4[i]);

        let v = &mut out.nabla_perp_h[i];
        axpy(v, k1p, &u2[i]);
        axpy(v, k1 * k2, &u3[i]);

        let v = &mut out.delta_perp_h[i];
        axpy(v, k1 * k2 * k2 - k1pp, &u2[i]);
        axpy(v, -(2.0 * k1p * k2 + k1 * k2p), &u3[i]);
        axpy(v, -k1 * k2 * k3, &u4[i]);
    }
    Ok(out)
}

fn project_off_tangent(curve: &Curve, v: &mut [Vec<f64>]) {
    for (row, t) in v.iter_mut().zip(&curve.tangent) {
        let c = dot(row, t);
        axpy(row, -c, t);
    }
}

/// Direct route by repeated covariant differentiation of T along the curve.
/// Rejects geodesics (max ‖∇_T T‖ below 1e-8).
pub fn mean_vectors_direct(curve: &Curve) -> Result<MeanVectors> {
    let h = covariant_derivative(curve, &curve.tangent)?;
    let h_max = h
        .iter()
        .map(|r| crate::numerics::norm(r))
        .fold(0.0, f64::max);
    if h_max < 1e-8 {
        return Err(Error::GeodesicInput);
    }

    let nabla_t_h = covariant_derivative(curve, &h)?;
    let d3 = covariant_derivative(curve, &nabla_t_h)?;
    let delta_h: Vec<Vec<f64>> = d3.iter().map(|r| r.iter().map(|v| -v).collect()).collect();

    // Normal-bundle route: project out the T-component after each step.
    let mut p1 = h.clone();
    project_off_tangent(curve, &mut p1);
    let mut p2 = covariant_derivative(curve, &p1)?;
    project_off_tangent(curve, &mut p2);
    let mut p3 = covariant_derivative(curve, &p2)?;
    project_off_tangent(curve, &mut p3);

    Ok(MeanVectors {
        nabla_t_h,
        delta_h,
        nabla_perp_h: p2,
        delta_perp_h: p3.iter().map(|r| r.iter().map(|v| -v).collect()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{frenet_default, Curve};
    use crate::manifold::{builtin_e2, builtin_rkmn};
    use crate::numerics::{norm, sub};

    const SQ2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn rkmn_line(span: f64, step: f64) -> Curve {
        let mani = builtin_rkmn();
        let n = (span / step).round() as usize + 1;
        let coords: Vec<Vec<f64>> = (0..n)
            .map(|i| vec![2.0f64.ln(), 0.0, SQ2 * step * i as f64])
            .collect();
        Curve::new(mani, 0.0, step, Some(coords), vec![vec![0.0, -SQ2, SQ2]; n]).unwrap()
    }

    fn e2_helix(span: f64, step: f64) -> Curve {
        let theta: f64 = 3.0 * std::f64::consts::PI / 4.0;
        let mani = builtin_e2(2.0).unwrap();
        let n = (span / step).round() as usize + 1;
        let tangent = vec![vec![theta.cos(), theta.sin(), 0.0]; n];
        Curve::new(mani, 0.0, step, None, tangent).unwrap()
    }

    #[test]
    fn formula_delta_perp_on_rkmn_line_is_minus_xi() {
        // k₁ = k₂ = 1 constants, υ₂ = -ξ: Δ⊥H = k₁k₂² υ₂ = -ξ.
        let c = rkmn_line(1.0, 1e-3);
        let app = frenet_default(&c).unwrap();
        let mv = mean_vectors_formula(&app).unwrap();
        for i in app.interior() {
            assert!((mv.delta_perp_h[i][0] + 1.0).abs() < 1e-6);
            assert!(mv.delta_perp_h[i][1].abs() < 1e-6);
            assert!(mv.delta_perp_h[i][2].abs() < 1e-6);
        }
    }

    #[test]
    fn formula_delta_h_on_helix_is_k1_sum_of_squares() {
        // Constant k₁ = k₂ = 1 with υ₂ = ξ: ΔH = k₁(k₁² + k₂²) ξ = 2ξ.
        let c = e2_helix(2.0, 1e-3);
        let app = frenet_default(&c).unwrap();
        let mv = mean_vectors_formula(&app).unwrap();
        for i in app.interior() {
            assert!((mv.delta_h[i][2] - 2.0).abs() < 1e-6, "{:?}", mv.delta_h[i]);
            assert!(mv.delta_h[i][0].abs() < 1e-6);
            assert!(mv.delta_h[i][1].abs() < 1e-6);
        }
    }

    #[test]
    fn direct_matches_formula_on_reference_curves() {
        for c in [rkmn_line(1.0, 1e-3), e2_helix(2.0, 1e-3)] {
            let app = frenet_default(&c).unwrap();
            let f = mean_vectors_formula(&app).unwrap();
            let d = mean_vectors_direct(&c).unwrap();
            for i in app.interior() {
                assert!(norm(&sub(&f.nabla_t_h[i], &d.nabla_t_h[i])) < 1e-4);
                assert!(norm(&sub(&f.nabla_perp_h[i], &d.nabla_perp_h[i])) < 1e-4);
                assert!(norm(&sub(&f.delta_h[i], &d.delta_h[i])) < 1e-3);
                assert!(norm(&sub(&f.delta_perp_h[i], &d.delta_perp_h[i])) < 1e-3);
            }
        }
    }

    #[test]
    fn direct_delta_h_has_no_tangential_part_for_constant_k1() {
        // 3k₁k₁′ = 0 for the helix, so ΔH ⟂ T.
        let c = e2_helix(2.0, 1e-3);
        let d = mean_vectors_direct(&c).unwrap();
        for i in c.interior() {
            let t_comp = dot(&d.delta_h[i], &c.tangent[i]);
            assert!(t_comp.abs() < 1e-6, "sample {i}: {t_comp:e}");
        }
    }

    #[test]
    fn normal_vectors_are_orthogonal_to_tangent() {
        for c in [rkmn_line(1.0, 1e-3), e2_helix(2.0, 1e-3)] {
            let app = frenet_default(&c).unwrap();
            let f = mean_vectors_formula(&app).unwrap();
            let d = mean_vectors_direct(&c).unwrap();
            for i in 0..c.len() {
                assert!(dot(&f.nabla_perp_h[i], &c.tangent[i]).abs() < 1e-6);
                assert!(dot(&f.delta_perp_h[i], &c.tangent[i]).abs() < 1e-6);
                assert!(dot(&d.nabla_perp_h[i], &c.tangent[i]).abs() < 1e-10);
                assert!(dot(&d.delta_perp_h[i], &c.tangent[i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn geodesic_input_is_rejected() {
        let mani = builtin_e2(2.0).unwrap();
        let c = Curve::new(mani, 0.0, 1e-2, None, vec![vec![0.0, 0.0, 1.0]; 100]).unwrap();
        assert!(matches!(mean_vectors_direct(&c), Err(Error::GeodesicInput)));
        let app = frenet_default(&c).unwrap();
        assert!(matches!(
            mean_vectors_formula(&app),
            Err(Error::GeodesicInput)
        ));
    }

    #[test]
    fn order_two_curve_with_constant_k1_has_parallel_normal_h() {
        // True order-2 circle (c₂ cos2θ = 2): ∇⊥H = k₁′υ₂ = 0.
        let theta = 5.0 * std::f64::consts::PI / 6.0;
        let mani = builtin_e2(4.0).unwrap();
        let n = 2001;
        let tangent = vec![vec![-theta.cos(), -theta.sin(), 0.0]; n];
        let c = Curve::new(mani, 0.0, 1e-3, None, tangent).unwrap();
        let app = frenet_default(&c).unwrap();
        assert_eq!(app.order, 2);
        let f = mean_vectors_formula(&app).unwrap();
        let d = mean_vectors_direct(&c).unwrap();
        for i in app.interior() {
            assert!(norm(&f.nabla_perp_h[i]) < 1e-8);
            assert!(norm(&d.nabla_perp_h[i]) < 1e-8);
        }
    }
}
