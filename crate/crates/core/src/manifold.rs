//! Contact metric manifolds described by an orthonormal moving frame.
//!
//! A [`FrameManifold`] stores, in a fixed orthonormal frame `E_0 … E_{m-1}`:
//! the frame fields as coordinate expressions (when a chart is declared),
//! the connection coefficients `omega[i][j][k]` of `∇_{E_i} E_j = Σ_k
//! omega[i][j][k] E_k`, the constant matrix of φ, the index of the Reeb
//! direction ξ, and the tensor h as expressions. The metric is the identity
//! in the frame, so all inner products reduce to dot products of frame
//! components.
//!
//! Homogeneous models (constant omega and h, no chart) omit coordinates
//! entirely; curves on them are tracked purely through frame components.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exprdsl::{parse, Expr};
use crate::numerics::{self, derivative_at, matvec, solve_dense};

/// Tolerance for the exact constant-matrix identities checked at load time.
const PHI_IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct FrameManifold {
    pub name: String,
    pub dim: usize,
    /// Coordinate names; empty in homogeneous mode.
    pub coords: Vec<String>,
    /// `frame[mu][j]`: coordinate component μ of frame field E_j.
    /// Present exactly when `coords` is nonempty.
    pub frame: Option<Vec<Vec<Expr>>>,
    /// `omega[i][j][k]`: coefficient of E_k in ∇_{E_i} E_j.
    pub omega: Vec<Vec<Vec<Expr>>>,
    /// Constant matrix of φ in the frame: φ(E_j) = Σ_i phi[i][j] E_i.
    pub phi: Vec<Vec<f64>>,
    /// Frame index of the Reeb field ξ; η(u) is the component u[xi_index].
    pub xi_index: usize,
    /// `h[i][j]`: component i of h(E_j).
    pub h: Vec<Vec<Expr>>,
    /// True when omega and h contain no coordinate variables.
    pub homogeneous: bool,
    /// Free-form descriptors (e.g. curvature functions of the model); never
    /// used in computations.
    pub metadata: BTreeMap<String, String>,
}

/// Numeric structure tables at a point: evaluated omega and h.
#[derive(Debug, Clone)]
pub struct StructureTables {
    pub omega: Vec<Vec<Vec<f64>>>,
    pub h: Vec<Vec<f64>>,
}

/// A tangent vector given by frame components, optionally anchored at a
/// coordinate point.
#[derive(Debug, Clone)]
pub struct TangentVector {
    pub base: Option<Vec<f64>>,
    pub comp: Vec<f64>,
}

impl FrameManifold {
    /// Validate the constant-matrix identities and assemble the manifold.
    /// Pointwise identities (h, compatibility, torsion) are left to
    /// [`FrameManifold::verify_structure`].
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: String,
        dim: usize,
        coords: Vec<String>,
        frame: Option<Vec<Vec<Expr>>>,
        omega: Vec<Vec<Vec<Expr>>>,
        phi: Vec<Vec<f64>>,
        xi_index: usize,
        h: Vec<Vec<Expr>>,
        metadata: BTreeMap<String, String>,
    ) -> Result<Self> {
        if dim == 0 || dim.is_multiple_of(2) {
            return Err(Error::EvenDimension { dim });
        }
        if xi_index >= dim {
            return Err(Error::Validation(format!(
                "xi_index {xi_index} out of range for dimension {dim}"
            )));
        }
        let square = |rows: usize, what: &str, ok: bool| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::DimensionMismatch {
                    what: what.into(),
                    expected: dim,
                    got: rows,
                })
            }
        };
        square(
            phi.len(),
            "phi",
            phi.len() == dim && phi.iter().all(|r| r.len() == dim),
        )?;
        square(
            h.len(),
            "h",
            h.len() == dim && h.iter().all(|r| r.len() == dim),
        )?;
        square(
            omega.len(),
            "omega",
            omega.len() == dim
                && omega
                    .iter()
                    .all(|a| a.len() == dim && a.iter().all(|b| b.len() == dim)),
        )?;
        match (&frame, coords.is_empty()) {
            (Some(fr), false) => square(
                fr.len(),
                "frame",
                fr.len() == dim && fr.iter().all(|r| r.len() == dim) && coords.len() == dim,
            )?,
            (None, true) => {}
            (Some(_), true) => {
                return Err(Error::Validation(
                    "frame given but no coordinates declared".into(),
                ))
            }
            (None, false) => {
                return Err(Error::Validation(
                    "coordinates declared but no frame expressions given".into(),
                ))
            }
        }

        // φ ξ = 0 and φ² = -I + e_ξ e_ξᵀ, exact on the constant matrix.
        for i in 0..dim {
            if phi[i][xi_index].abs() > PHI_IDENTITY_TOL {
                return Err(Error::Validation(format!(
                    "phi applied to the Reeb direction must vanish; component {i} is {}",
                    phi[i][xi_index]
                )));
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let mut sq = 0.0;
                for k in 0..dim {
                    sq += phi[i][k] * phi[k][j];
                }
                let mut want = if i == j { -1.0 } else { 0.0 };
                if i == xi_index && j == xi_index {
                    want += 1.0;
                }
                if (sq - want).abs() > PHI_IDENTITY_TOL {
                    return Err(Error::Validation(format!(
                        "phi² ≠ -I + η⊗ξ at entry ({i},{j}): got {sq}, want {want}"
                    )));
                }
            }
        }

        let homogeneous = !omega
            .iter()
            .flatten()
            .flatten()
            .chain(h.iter().flatten())
            .any(Expr::references_vars);

        Ok(FrameManifold {
            name,
            dim,
            coords,
            frame,
            omega,
            phi,
            xi_index,
            h,
            homogeneous,
            metadata,
        })
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    /// η(u) = g(u, ξ) is the ξ-component of the frame components.
    pub fn eta(&self, comp: &[f64]) -> f64 {
        comp[self.xi_index]
    }

    /// Frame components of ξ itself.
    pub fn xi_components(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        v[self.xi_index] = 1.0;
        v
    }

    pub fn phi_apply(&self, comp: &[f64]) -> Vec<f64> {
        matvec(&self.phi, comp)
    }

    /// Evaluate omega and h at a point (`p` ignored in homogeneous mode).
    pub fn structure_at(&self, p: &[f64]) -> Result<StructureTables> {
        if !self.coords.is_empty() && p.len() != self.coords.len() {
            return Err(Error::DimensionMismatch {
                what: "point".into(),
                expected: self.coords.len(),
                got: p.len(),
            });
        }
        let m = self.dim;
        let mut omega = vec![vec![vec![0.0; m]; m]; m];
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    omega[i][j][k] = self.omega[i][j][k].eval(p)?;
                }
            }
        }
        let mut h = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..m {
                h[i][j] = self.h[i][j].eval(p)?;
            }
        }
        Ok(StructureTables { omega, h })
    }

    /// Coordinate components of the frame fields at `p`: rows are coordinate
    /// directions, column j is E_j.
    pub fn frame_matrix_at(&self, p: &[f64]) -> Result<Vec<Vec<f64>>> {
        let frame = self
            .frame
            .as_ref()
            .ok_or_else(|| Error::Validation("manifold has no coordinate chart".into()))?;
        let m = self.dim;
        let mut out = vec![vec![0.0; m]; m];
        for mu in 0..m {
            for j in 0..m {
                out[mu][j] = frame[mu][j].eval(p)?;
            }
        }
        Ok(out)
    }

    /// Directional covariant derivative of ξ from the connection table:
    /// (∇_u ξ)^k = Σ_i u^i omega[i][ξ][k].
    pub fn grad_xi(&self, tables: &StructureTables, u: &[f64]) -> Vec<f64> {
        let m = self.dim;
        let mut out = vec![0.0; m];
        for i in 0..m {
            if u[i] == 0.0 {
                continue;
            }
            for k in 0..m {
                out[k] += u[i] * tables.omega[i][self.xi_index][k];
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Builtin models
// ---------------------------------------------------------------------------

fn parse_table(
    entries: &[(usize, usize, usize, &str)],
    m: usize,
    vars: &[&str],
) -> Vec<Vec<Vec<Expr>>> {
    let mut omega = vec![vec![vec![Expr::num(0.0); m]; m]; m];
    for (i, j, k, text) in entries {
        omega[*i][*j][*k] = parse(text, vars).expect("builtin table entry must parse");
    }
    omega
}

/// The 3-dimensional model on ℝ³ with chart (x, y, z), frame order
/// (ξ, X, φX), exponentially varying h and the nine-entry connection table.
pub fn builtin_rkmn() -> Arc<FrameManifold> {
    let vars = &["x", "y", "z"];
    let p = |t: &str| parse(t, vars).expect("builtin expression must parse");

    // Frame fields in coordinates: ξ = ∂x, X = ∂y,
    // φX = 2y ∂x + (e^{2x}/4 - y²) ∂y + ∂z.
    let frame = vec![
        vec![p("1"), p("0"), p("2*y")],
        vec![p("0"), p("1"), p("(1/4)*exp(2*x) - y^2")],
        vec![p("0"), p("0"), p("1")],
    ];

    // Frame indices: 0 = ξ, 1 = X, 2 = φX.
    let omega = parse_table(
        &[
            (0, 1, 2, "-(exp(2*x)/4 + 1)"), // ∇_ξ X
            (0, 2, 1, "1 + exp(2*x)/4"),    // ∇_ξ φX
            (1, 0, 2, "-(exp(2*x)/4 + 1)"), // ∇_X ξ
            (1, 1, 2, "2*y"),               // ∇_X X
            (1, 2, 0, "exp(2*x)/4 + 1"),    // ∇_X φX (ξ part)
            (1, 2, 1, "-2*y"),              // ∇_X φX (X part)
            (2, 0, 1, "1 - exp(2*x)/4"),    // ∇_φX ξ
            (2, 1, 0, "exp(2*x)/4 - 1"),    // ∇_φX X
        ],
        3,
        vars,
    );

    let phi = vec![
        vec![0.0, 0.0, 0.0],
        vec![0.0, 0.0, -1.0],
        vec![0.0, 1.0, 0.0],
    ];

    let h = vec![
        vec![p("0"), p("0"), p("0")],
        vec![p("0"), p("exp(2*x)/4"), p("0")],
        vec![p("0"), p("0"), p("-exp(2*x)/4")],
    ];

    let mut metadata = BTreeMap::new();
    metadata.insert("kappa".into(), "1 - exp(4*x)/16".into());
    metadata.insert("mu".into(), "2*(1 + exp(2*x)/4)".into());
    metadata.insert("nu".into(), "2".into());

    Arc::new(
        FrameManifold::new(
            "rkmn".into(),
            3,
            vec!["x".into(), "y".into(), "z".into()],
            Some(frame),
            omega,
            phi,
            0,
            h,
            metadata,
        )
        .expect("builtin rkmn must validate"),
    )
}

/// The homogeneous model on the rigid-motion group of the plane, with frame
/// order (X, φX, ξ), structure constant `c2 > 0` and constant tables.
pub fn builtin_e2(c2: f64) -> Result<Arc<FrameManifold>> {
    if !c2.is_finite() || c2 <= 0.0 {
        return Err(Error::HypothesisViolation(format!(
            "structure constant c2 must be positive, got {c2}"
        )));
    }
    let m = 3;
    let n = Expr::num;
    let mut omega = vec![vec![vec![n(0.0); m]; m]; m];
    // Frame indices: 0 = X, 1 = φX, 2 = ξ.
    omega[0][1][2] = n((-c2 + 2.0) / 2.0);
    omega[0][2][1] = n(-(-c2 + 2.0) / 2.0);
    omega[1][0][2] = n(-(c2 + 2.0) / 2.0);
    omega[1][2][0] = n((c2 + 2.0) / 2.0);
    omega[2][0][1] = n((c2 - 2.0) / 2.0);
    omega[2][1][0] = n(-(c2 - 2.0) / 2.0);

    let phi = vec![
        vec![0.0, -1.0, 0.0],
        vec![1.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0],
    ];

    let mut h = vec![vec![n(0.0); m]; m];
    h[0][0] = n(-c2 / 2.0);
    h[1][1] = n(c2 / 2.0);

    Ok(Arc::new(FrameManifold::new(
        format!("e2(c2={c2})"),
        3,
        Vec::new(),
        None,
        omega,
        phi,
        2,
        h,
        BTreeMap::new(),
    )?))
}

// ---------------------------------------------------------------------------
// Manifold spec files
// ---------------------------------------------------------------------------

/// On-disk JSON schema for a manifold definition. All tensor entries are
/// expression strings over the declared coordinates and parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifoldSpec {
    pub name: String,
    pub dim: usize,
    pub coords: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<Vec<Vec<String>>>,
    pub omega: Vec<Vec<Vec<String>>>,
    pub phi: Vec<Vec<f64>>,
    pub xi_index: usize,
    pub h: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
    /// Substitutable named constants with their default values.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
}

/// Load a manifold from a spec document, overriding declared parameters.
/// Unknown override names are rejected.
pub fn load_manifold(doc: &str, overrides: &[(String, f64)]) -> Result<Arc<FrameManifold>> {
    let spec: ManifoldSpec = serde_json::from_str(doc)?;
    let mut params = spec.params.clone();
    for (name, value) in overrides {
        if !params.contains_key(name) {
            return Err(Error::SpecField {
                path: format!("params.{name}"),
                message: "parameter is not declared by the spec".into(),
            });
        }
        params.insert(name.clone(), *value);
    }

    let coord_names: Vec<&str> = spec.coords.iter().map(String::as_str).collect();
    let param_names: Vec<&str> = params.keys().map(String::as_str).collect();
    let param_values: Vec<f64> = params.values().copied().collect();
    let mut all_vars = coord_names.clone();
    all_vars.extend(&param_names);
    let n_coords = coord_names.len();

    let parse_at = |text: &str, path: String| -> Result<Expr> {
        let e = parse(text, &all_vars).map_err(|err| Error::SpecField {
            path,
            message: err.to_string(),
        })?;
        Ok(e.bind_trailing(n_coords, &param_values))
    };

    let m = spec.dim;
    let shape_err = |path: &str| Error::SpecField {
        path: path.into(),
        message: format!("expected a {m}×… array matching dim"),
    };

    if spec.omega.len() != m
        || spec
            .omega
            .iter()
            .any(|a| a.len() != m || a.iter().any(|b| b.len() != m))
    {
        return Err(shape_err("omega"));
    }
    if spec.h.len() != m || spec.h.iter().any(|r| r.len() != m) {
        return Err(shape_err("h"));
    }

    let mut omega = vec![vec![vec![Expr::num(0.0); m]; m]; m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                omega[i][j][k] = parse_at(&spec.omega[i][j][k], format!("omega[{i}][{j}][{k}]"))?;
            }
        }
    }
    let mut h = vec![vec![Expr::num(0.0); m]; m];
    for i in 0..m {
        for j in 0..m {
            h[i][j] = parse_at(&spec.h[i][j], format!("h[{i}][{j}]"))?;
        }
    }
    let frame = match &spec.frame {
        Some(rows) => {
            if rows.len() != m || rows.iter().any(|r| r.len() != m) {
                return Err(shape_err("frame"));
            }
            let mut out = vec![vec![Expr::num(0.0); m]; m];
            for mu in 0..m {
                for j in 0..m {
                    out[mu][j] = parse_at(&rows[mu][j], format!("frame[{mu}][{j}]"))?;
                }
            }
            Some(out)
        }
        None => None,
    };

    Ok(Arc::new(FrameManifold::new(
        spec.name,
        spec.dim,
        spec.coords,
        frame,
        omega,
        spec.phi,
        spec.xi_index,
        h,
        spec.metadata,
    )?))
}

impl FrameManifold {
    /// Serialize back to the spec-file schema (parameters already bound).
    pub fn to_spec(&self) -> ManifoldSpec {
        let expr_str = |e: &Expr| e.to_string();
        ManifoldSpec {
            name: self.name.clone(),
            dim: self.dim,
            coords: self.coords.clone(),
            frame: self.frame.as_ref().map(|rows| {
                rows.iter()
                    .map(|r| r.iter().map(expr_str).collect())
                    .collect()
            }),
            omega: self
                .omega
                .iter()
                .map(|a| a.iter().map(|b| b.iter().map(expr_str).collect()).collect())
                .collect(),
            phi: self.phi.clone(),
            xi_index: self.xi_index,
            h: self
                .h
                .iter()
                .map(|r| r.iter().map(expr_str).collect())
                .collect(),
            metadata: self.metadata.clone(),
            params: BTreeMap::new(),
        }
    }
}

// ---------------------------------------------------------------------------
// Structure verification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct StructureCheck {
    pub name: String,
    pub max_violation: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointResult {
    pub point: Vec<f64>,
    pub max_violation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub manifold: String,
    pub points_checked: usize,
    pub checks: Vec<StructureCheck>,
    pub per_point: Vec<PointResult>,
    /// min over points of max |h entry|: positive means h ≠ 0 everywhere,
    /// which certifies the model is not Sasakian.
    pub h_min_max_abs: f64,
    pub h_nonzero: bool,
    pub all_pass: bool,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.all_pass
    }
}

impl FrameManifold {
    /// Check every pointwise invariant of the structure tensors at the given
    /// points: h symmetric, hξ = 0, hφ = -φh, metric compatibility of omega,
    /// and (when a chart is present) torsion-freeness against a
    /// finite-difference Lie bracket of the frame fields with step
    /// `bracket_step`.
    pub fn verify_structure(
        &self,
        points: &[Vec<f64>],
        tol: f64,
        bracket_step: f64,
    ) -> Result<StructureReport> {
        let m = self.dim;
        let mut max_viol: BTreeMap<&'static str, f64> = BTreeMap::new();
        let bump = |map: &mut BTreeMap<&'static str, f64>, key: &'static str, v: f64| {
            let e = map.entry(key).or_insert(0.0);
            if v > *e {
                *e = v;
            }
        };

        let mut per_point = Vec::with_capacity(points.len());
        let mut h_min_max_abs = f64::INFINITY;

        for p in points {
            let tables = self.structure_at(p)?;
            let mut point_worst = 0.0f64;
            let mut track = |map: &mut BTreeMap<&'static str, f64>, key, v: f64| {
                if v > point_worst {
                    point_worst = v;
                }
                bump(map, key, v);
            };

            let mut h_max = 0.0f64;
            for i in 0..m {
                for j in 0..m {
                    h_max = h_max.max(tables.h[i][j].abs());
                    track(
                        &mut max_viol,
                        "h_symmetric",
                        (tables.h[i][j] - tables.h[j][i]).abs(),
                    );
                }
            }
            h_min_max_abs = h_min_max_abs.min(h_max);

            // h ξ = 0
            for i in 0..m {
                track(&mut max_viol, "h_xi", tables.h[i][self.xi_index].abs());
            }

            // hφ + φh = 0
            for i in 0..m {
                for j in 0..m {
                    let mut hphi = 0.0;
                    let mut phih = 0.0;
                    for k in 0..m {
                        hphi += tables.h[i][k] * self.phi[k][j];
                        phih += self.phi[i][k] * tables.h[k][j];
                    }
                    track(&mut max_viol, "h_phi_anticommute", (hphi + phih).abs());
                }
            }

            // Metric compatibility: omega[i][j][k] = -omega[i][k][j].
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        track(
                            &mut max_viol,
                            "metric_compatibility",
                            (tables.omega[i][j][k] + tables.omega[i][k][j]).abs(),
                        );
                    }
                }
            }

            // Torsion-freeness against the finite-difference bracket.
            if self.frame.is_some() {
                let fm = self.frame_matrix_at(p)?;
                for i in 0..m {
                    for j in (i + 1)..m {
                        let bracket = self.bracket_fd(p, i, j, bracket_step)?;
                        let comp = solve_dense(fm.clone(), bracket)?;
                        for k in 0..m {
                            let torsion = tables.omega[i][j][k] - tables.omega[j][i][k] - comp[k];
                            track(&mut max_viol, "torsion_bracket", torsion.abs());
                        }
                    }
                }
            }

            per_point.push(PointResult {
                point: p.clone(),
                max_violation: point_worst,
                pass: point_worst < tol,
            });
        }

        // φ identities are point-independent; reuse the load-time bound so
        // the report lists them alongside the rest.
        let mut phi_sq_viol = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                let mut sq = 0.0;
                for k in 0..m {
                    sq += self.phi[i][k] * self.phi[k][j];
                }
                let mut want = if i == j { -1.0 } else { 0.0 };
                if i == self.xi_index && j == self.xi_index {
                    want += 1.0;
                }
                phi_sq_viol = phi_sq_viol.max((sq - want).abs());
            }
        }
        let phi_xi_viol = (0..m).fold(0.0f64, |a, i| a.max(self.phi[i][self.xi_index].abs()));

        let mut checks = vec![
            StructureCheck {
                name: "phi_squared".into(),
                max_violation: phi_sq_viol,
                tol: PHI_IDENTITY_TOL,
                pass: phi_sq_viol < PHI_IDENTITY_TOL,
            },
            StructureCheck {
                name: "phi_xi".into(),
                max_violation: phi_xi_viol,
                tol: PHI_IDENTITY_TOL,
                pass: phi_xi_viol < PHI_IDENTITY_TOL,
            },
        ];
        for (name, viol) in &max_viol {
            checks.push(StructureCheck {
                name: (*name).into(),
                max_violation: *viol,
                tol,
                pass: *viol < tol,
            });
        }

        let h_nonzero = h_min_max_abs > 1e-10;
        let all_pass = checks.iter().all(|c| c.pass);
        Ok(StructureReport {
            manifold: self.name.clone(),
            points_checked: points.len(),
            checks,
            per_point,
            h_min_max_abs,
            h_nonzero,
            all_pass,
        })
    }

    /// Coordinate components of [E_i, E_j] at p by 4th-order differencing of
    /// the frame-field expressions.
    fn bracket_fd(&self, p: &[f64], i: usize, j: usize, step: f64) -> Result<Vec<f64>> {
        let frame = self.frame.as_ref().expect("bracket needs a chart");
        let m = self.dim;
        let fm = self.frame_matrix_at(p)?;
        let mut out = vec![0.0; m];
        for mu in 0..m {
            let mut acc = 0.0;
            for nu in 0..m {
                // ∂_ν E_j^μ and ∂_ν E_i^μ at p.
                let d_ej = derivative_at(
                    |t| {
                        let mut q = p.to_vec();
                        q[nu] = t;
                        frame[mu][j].eval(&q)
                    },
                    p[nu],
                    step,
                )?;
                let d_ei = derivative_at(
                    |t| {
                        let mut q = p.to_vec();
                        q[nu] = t;
                        frame[mu][i].eval(&q)
                    },
                    p[nu],
                    step,
                )?;
                acc += fm[nu][i] * d_ej - fm[nu][j] * d_ei;
            }
            out[mu] = acc;
        }
        Ok(out)
    }

    /// Check ∇_u ξ = -φu - φhu at each sample within `tol`.
    pub fn verify_grad_xi(&self, samples: &[TangentVector], tol: f64) -> Result<StructureCheck> {
        let mut worst = 0.0f64;
        for tv in samples {
            let p = tv.base.clone().unwrap_or_default();
            let tables = self.structure_at(&p)?;
            let lhs = self.grad_xi(&tables, &tv.comp);
            let hu = matvec(&tables.h, &tv.comp);
            let mut rhs = self.phi_apply(&tv.comp);
            let phihu = self.phi_apply(&hu);
            for k in 0..self.dim {
                rhs[k] = -rhs[k] - phihu[k];
            }
            let dev = numerics::norm(&numerics::sub(&lhs, &rhs));
            worst = worst.max(dev);
        }
        Ok(StructureCheck {
            name: "grad_xi_identity".into(),
            max_violation: worst,
            tol,
            pass: worst < tol,
        })
    }
}

/// Deterministic sample points in `[lo, hi]^n_coords` for structure checks.
/// Homogeneous manifolds get a single empty point regardless of `count`.
pub fn sample_points(
    manifold: &FrameManifold,
    count: usize,
    seed: u64,
    lo: f64,
    hi: f64,
) -> Vec<Vec<f64>> {
    if manifold.coords.is_empty() {
        return vec![Vec::new()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..manifold.coords.len())
                .map(|_| rng.random_range(lo..hi))
                .collect()
        })
        .collect()
}

/// Deterministic unit tangent directions (frame components) at the given
/// points, for the ∇ξ identity check.
pub fn sample_directions(
    manifold: &FrameManifold,
    points: &[Vec<f64>],
    per_point: usize,
    seed: u64,
) -> Vec<TangentVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for p in points {
        for _ in 0..per_point {
            let mut comp: Vec<f64> = (0..manifold.dim)
                .map(|_| rng.random_range(-1.0..1.0))
                .collect();
            let n = numerics::norm(&comp);
            if n < 1e-6 {
                comp[0] = 1.0;
            } else {
                for c in comp.iter_mut() {
                    *c /= n;
                }
            }
            out.push(TangentVector {
                base: if manifold.coords.is_empty() {
                    None
                } else {
                    Some(p.clone())
                },
                comp,
            });
        }
    }
    out
}
