//! Python bindings for the contact-curves workbench.
//!
//! The module exposes the two builtin manifolds, spec-file loading, the
//! reference curve builders, CSV round-tripping, Frenet extraction, the
//! mean-curvature condition classifier, the theorem verifiers and parameter
//! sweeps. Reports are returned as JSON strings so Python can consume them
//! with `json.loads`.

use std::io::BufReader;
use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::json;

use contact_curves::classifier::{
    classify_apparatus, verify_theorem_apparatus, ConditionKind, TheoremId, DEFAULT_CLASSIFY_TOL,
    DEFAULT_LAMBDA_FLOOR,
};
use contact_curves::constructor::{
    build_e2_circle, build_e2_helix, build_example_1, integrate_frenet_curve, sweep,
    write_sweep_csv, CurveFamily, FrenetInitialData, SweepOptions,
};
use contact_curves::curve::{
    contact_angle, contact_scalars, frenet, is_legendre, legendre_scalar, read_csv, write_csv,
    ManifoldRef, DEFAULT_RANK_TOL,
};
use contact_curves::exprdsl::parse as parse_expr;
use contact_curves::manifold::{
    builtin_e2, builtin_rkmn, load_manifold, sample_directions, sample_points, FrameManifold,
};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn range_json(values: &[f64]) -> serde_json::Value {
    json!({
        "min": values.iter().copied().fold(f64::INFINITY, f64::min),
        "max": values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// A contact metric manifold described by an orthonormal moving frame.
#[pyclass(frozen)]
struct Manifold {
    inner: Arc<FrameManifold>,
    mref: Option<ManifoldRef>,
}

#[pymethods]
impl Manifold {
    /// The 3-dimensional chart model with exponentially varying h.
    #[staticmethod]
    fn rkmn() -> Manifold {
        Manifold {
            inner: builtin_rkmn(),
            mref: Some(ManifoldRef::Rkmn),
        }
    }

    /// The homogeneous rigid-motion-group model with structure constant c2.
    #[staticmethod]
    fn e2(c2: f64) -> PyResult<Manifold> {
        Ok(Manifold {
            inner: builtin_e2(c2).map_err(err)?,
            mref: Some(ManifoldRef::E2 { c2 }),
        })
    }

    /// Load a manifold from a spec JSON document with parameter overrides.
    #[staticmethod]
    #[pyo3(signature = (doc, params=None))]
    fn from_spec(doc: &str, params: Option<Vec<(String, f64)>>) -> PyResult<Manifold> {
        Ok(Manifold {
            inner: load_manifold(doc, &params.unwrap_or_default()).map_err(err)?,
            mref: None,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim
    }

    #[getter]
    fn homogeneous(&self) -> bool {
        self.inner.is_homogeneous()
    }

    /// Run the structure self-checks; returns a JSON report. `points` seeded
    /// random sample points are used on chart manifolds.
    #[pyo3(signature = (points=100, seed=0, tol=1e-6, bracket_step=1e-4))]
    fn structure_check_json(
        &self,
        points: usize,
        seed: u64,
        tol: f64,
        bracket_step: f64,
    ) -> PyResult<String> {
        let pts = sample_points(&self.inner, points, seed, -1.0, 1.0);
        let report = self
            .inner
            .verify_structure(&pts, tol, bracket_step)
            .map_err(err)?;
        let dirs = sample_directions(
            &self.inner,
            &pts,
            if self.inner.coords.is_empty() { 20 } else { 1 },
            seed.wrapping_add(1),
        );
        let grad_xi = self.inner.verify_grad_xi(&dirs, 1e-8).map_err(err)?;
        let pass = report.all_pass && report.h_nonzero && grad_xi.pass;
        let doc = json!({
            "structure": serde_json::to_value(&report).map_err(err)?,
            "grad_xi": serde_json::to_value(&grad_xi).map_err(err)?,
            "pass": pass,
        });
        serde_json::to_string_pretty(&doc).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Manifold(name={:?}, dim={}, homogeneous={})",
            self.inner.name,
            self.inner.dim,
            self.inner.is_homogeneous()
        )
    }
}

/// A sampled unit-speed curve on a manifold.
#[pyclass(frozen)]
struct Curve {
    inner: contact_curves::curve::Curve,
}

#[pymethods]
impl Curve {
    /// The explicit reference curve on the rkmn model.
    #[staticmethod]
    #[pyo3(signature = (span=(0.0, 1.0), step=1e-3))]
    fn example1(span: (f64, f64), step: f64) -> PyResult<Curve> {
        Ok(Curve {
            inner: build_example_1(span, step).map_err(err)?,
        })
    }

    /// Legendre circle family on e2: T = -cosθ X - sinθ φX.
    #[staticmethod]
    #[pyo3(signature = (c2, theta, span=(0.0, 2.0), step=1e-3))]
    fn e2_circle(c2: f64, theta: f64, span: (f64, f64), step: f64) -> PyResult<Curve> {
        Ok(Curve {
            inner: build_e2_circle(c2, theta, span, step).map_err(err)?,
        })
    }

    /// Legendre helix family on e2: T = cosθ X + sinθ φX.
    #[staticmethod]
    #[pyo3(signature = (c2, theta, span=(0.0, 2.0), step=1e-3))]
    fn e2_helix(c2: f64, theta: f64, span: (f64, f64), step: f64) -> PyResult<Curve> {
        Ok(Curve {
            inner: build_e2_helix(c2, theta, span, step).map_err(err)?,
        })
    }

    /// Integrate the Frenet system with prescribed curvature expressions in
    /// `s` from an initial orthonormal frame.
    #[staticmethod]
    #[pyo3(signature = (manifold, frame0, curvatures, span, step=1e-3, start_coords=None))]
    fn integrate(
        manifold: &Manifold,
        frame0: Vec<Vec<f64>>,
        curvatures: Vec<String>,
        span: (f64, f64),
        step: f64,
        start_coords: Option<Vec<f64>>,
    ) -> PyResult<Curve> {
        let exprs = curvatures
            .iter()
            .map(|t| parse_expr(t, &["s"]))
            .collect::<contact_curves::Result<Vec<_>>>()
            .map_err(err)?;
        let data = FrenetInitialData {
            manifold: manifold.inner.clone(),
            start_coords,
            frame0,
            curvatures: exprs,
            span,
            step,
        };
        let (curve, _) = integrate_frenet_curve(&data).map_err(err)?;
        let curve = match &manifold.mref {
            Some(r) => curve.with_ref(r.clone()),
            None => curve,
        };
        Ok(Curve { inner: curve })
    }

    /// Read a curve CSV file; `manifold_ref` (e.g. "rkmn", "e2 c2=2",
    /// "spec path.json") overrides the file's embedded reference.
    #[staticmethod]
    #[pyo3(signature = (path, manifold_ref=None))]
    fn from_csv(path: &str, manifold_ref: Option<&str>) -> PyResult<Curve> {
        let file = std::fs::File::open(path).map_err(err)?;
        let mref = match manifold_ref {
            Some(text) => Some(text.parse::<ManifoldRef>().map_err(err)?),
            None => None,
        };
        Ok(Curve {
            inner: read_csv(BufReader::new(file), mref.as_ref()).map_err(err)?,
        })
    }

    fn to_csv(&self, path: &str) -> PyResult<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path).map_err(err)?);
        write_csv(&self.inner, &mut out).map_err(err)?;
        Ok(())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn manifold_name(&self) -> String {
        self.inner.manifold.name.clone()
    }

    #[getter]
    fn legendre(&self) -> bool {
        is_legendre(&self.inner)
    }

    /// Frenet apparatus summary as JSON: order, curvature and η ranges,
    /// contact angle and g(T,φhT) ranges.
    #[pyo3(signature = (rank_tol=DEFAULT_RANK_TOL))]
    fn frenet_json(&self, rank_tol: f64) -> PyResult<String> {
        let app = frenet(&self.inner, rank_tol).map_err(err)?;
        let alpha = contact_angle(&self.inner);
        let scalar = legendre_scalar(&self.inner);
        let doc = json!({
            "manifold": self.inner.manifold.name,
            "samples": self.inner.len(),
            "order": app.order,
            "legendre": is_legendre(&self.inner),
            "contact_angle": range_json(&alpha.values),
            "curvatures": app.curvatures.iter().map(|k| range_json(&k.values)).collect::<Vec<_>>(),
            "eta": app.eta.iter().map(|e| range_json(e)).collect::<Vec<_>>(),
            "legendre_scalar": range_json(&scalar.values),
        });
        serde_json::to_string_pretty(&doc).map_err(err)
    }

    /// Classify one mean-curvature condition; returns the report as JSON.
    #[pyo3(signature = (kind, tol=DEFAULT_CLASSIFY_TOL, lambda_floor=DEFAULT_LAMBDA_FLOOR, samples=false))]
    fn classify_json(
        &self,
        kind: &str,
        tol: f64,
        lambda_floor: f64,
        samples: bool,
    ) -> PyResult<String> {
        let kind: ConditionKind = kind.parse().map_err(err)?;
        let app = frenet(&self.inner, DEFAULT_RANK_TOL).map_err(err)?;
        let report = classify_apparatus(&app, kind, tol, lambda_floor).map_err(err)?;
        serde_json::to_string_pretty(&report.to_report(samples)).map_err(err)
    }

    /// Verify one curvature characterization (T2.1…T3.6) as JSON.
    #[pyo3(signature = (theorem, tol=DEFAULT_CLASSIFY_TOL))]
    fn verify_theorem_json(&self, theorem: &str, tol: f64) -> PyResult<String> {
        let id: TheoremId = theorem.parse().map_err(err)?;
        let app = frenet(&self.inner, DEFAULT_RANK_TOL).map_err(err)?;
        let scalars = contact_scalars(&self.inner);
        let report =
            verify_theorem_apparatus(&app, &scalars, id, tol, DEFAULT_LAMBDA_FLOOR).map_err(err)?;
        serde_json::to_string_pretty(&report.to_report()).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Curve(manifold={:?}, samples={}, s0={}, step={})",
            self.inner.manifold.name,
            self.inner.len(),
            self.inner.s0,
            self.inner.step
        )
    }
}

/// Classify a (c2, θ) grid of a homogeneous curve family and write the CSV
/// table; returns the number of cells written.
#[pyfunction]
#[pyo3(signature = (family, c2_values, theta_values, kinds, out_path, span=(0.0, 2.0), step=1e-3))]
fn sweep_to_csv(
    family: &str,
    c2_values: Vec<f64>,
    theta_values: Vec<f64>,
    kinds: Vec<String>,
    out_path: &str,
    span: (f64, f64),
    step: f64,
) -> PyResult<usize> {
    let family: CurveFamily = family.parse().map_err(err)?;
    let kinds = kinds
        .iter()
        .map(|k| k.parse::<ConditionKind>())
        .collect::<contact_curves::Result<Vec<_>>>()
        .map_err(err)?;
    let opts = SweepOptions {
        span,
        step,
        ..SweepOptions::default()
    };
    let cells = sweep(family, &c2_values, &theta_values, &kinds, &opts);
    let mut out = std::io::BufWriter::new(std::fs::File::create(out_path).map_err(err)?);
    write_sweep_csv(&cells, &mut out).map_err(err)?;
    Ok(cells.len())
}

#[pymodule]
fn contactcurves(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Manifold>()?;
    m.add_class::<Curve>()?;
    m.add_function(wrap_pyfunction!(sweep_to_csv, m)?)?;
    Ok(())
}
