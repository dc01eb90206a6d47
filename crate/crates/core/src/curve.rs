//! Sampled unit-speed curves on a frame manifold: covariant differentiation
//! along the curve, Frenet apparatus extraction with rank detection, contact
//! angle and the Legendre scalar g(T, φhT).
//!
//! Curves are stored fully sampled on a uniform arc-length grid. Structure
//! tables (omega, h) are evaluated once per sample at construction so the
//! differential operators stay cheap and deterministic.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::manifold::{self, FrameManifold, StructureTables};
use crate::numerics::{self, derivative_rows, dot, gram_schmidt, matvec, Sampled};

const UNIT_SPEED_TOL: f64 = 1e-8;
const COORD_CONSISTENCY_TOL: f64 = 1e-6;
const LEGENDRE_TOL: f64 = 1e-6;

/// Default relative rank tolerance for osculating-order detection.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

enum StructureCache {
    Constant(StructureTables),
    PerSample(Vec<StructureTables>),
}

/// A unit-speed curve sampled on a uniform grid. `coords` is absent on
/// homogeneous manifolds; `tangent[i]` holds the frame components of T at
/// sample i.
pub struct Curve {
    pub manifold: Arc<FrameManifold>,
    pub s0: f64,
    pub step: f64,
    pub coords: Option<Vec<Vec<f64>>>,
    pub tangent: Vec<Vec<f64>>,
    /// How this curve's manifold can be reconstructed when round-tripping
    /// through a CSV file; `None` for ad-hoc manifolds.
    pub manifold_ref: Option<ManifoldRef>,
    cache: StructureCache,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Curve")
            .field("manifold", &self.manifold.name)
            .field("s0", &self.s0)
            .field("step", &self.step)
            .field("samples", &self.tangent.len())
            .finish()
    }
}

impl Curve {
    /// Build and validate a curve: unit speed everywhere, and (when a chart
    /// is present) consistency of the coordinate velocity with Σ Tʲ E_j.
    pub fn new(
        manifold: Arc<FrameManifold>,
        s0: f64,
        step: f64,
        coords: Option<Vec<Vec<f64>>>,
        tangent: Vec<Vec<f64>>,
    ) -> Result<Curve> {
        let n = tangent.len();
        if n < 6 {
            return Err(Error::TooFewSamples {
                what: "curve",
                needed: 6,
                got: n,
            });
        }
        let m = manifold.dim;
        if tangent.iter().any(|t| t.len() != m) {
            return Err(Error::DimensionMismatch {
                what: "tangent components".into(),
                expected: m,
                got: tangent.iter().map(Vec::len).find(|&l| l != m).unwrap_or(0),
            });
        }

        let mut max_dev = 0.0f64;
        for t in &tangent {
            max_dev = max_dev.max((numerics::norm(t) - 1.0).abs());
        }
        if max_dev > UNIT_SPEED_TOL {
            return Err(Error::NonUnitSpeed { max_dev });
        }

        match (&coords, manifold.coords.is_empty()) {
            (None, true) => {}
            (Some(xs), false) => {
                if xs.len() != n {
                    return Err(Error::GridMismatch(
                        "coordinate samples do not match the tangent grid".into(),
                    ));
                }
                let nc = manifold.coords.len();
                if xs.iter().any(|x| x.len() != nc) {
                    return Err(Error::DimensionMismatch {
                        what: "coordinate samples".into(),
                        expected: nc,
                        got: xs.iter().map(Vec::len).find(|&l| l != nc).unwrap_or(0),
                    });
                }
                let dx = derivative_rows(xs, step)?;
                let mut worst = 0.0f64;
                for i in 0..n {
                    let fm = manifold.frame_matrix_at(&xs[i])?;
                    let expect = matvec(&fm, &tangent[i]);
                    worst = worst.max(numerics::norm(&numerics::sub(&dx[i], &expect)));
                }
                if worst > COORD_CONSISTENCY_TOL {
                    return Err(Error::CurveInvariant(format!(
                        "coordinate velocity deviates from Σ Tʲ E_j by {worst:.3e}"
                    )));
                }
            }
            (None, false) => {
                return Err(Error::CurveInvariant(
                    "manifold has a chart but the curve carries no coordinates".into(),
                ))
            }
            (Some(_), true) => {
                return Err(Error::CurveInvariant(
                    "homogeneous manifold curves must not carry coordinates".into(),
                ))
            }
        }

        let cache = if manifold.is_homogeneous() {
            StructureCache::Constant(manifold.structure_at(&[])?)
        } else {
            let xs = coords.as_ref().expect("chart implies coordinates");
            let mut tables = Vec::with_capacity(n);
            for x in xs {
                tables.push(manifold.structure_at(x)?);
            }
            StructureCache::PerSample(tables)
        };

        Ok(Curve {
            manifold,
            s0,
            step,
            coords,
            tangent,
            manifold_ref: None,
            cache,
        })
    }

    pub fn with_ref(mut self, r: ManifoldRef) -> Curve {
        self.manifold_ref = Some(r);
        self
    }

    pub fn len(&self) -> usize {
        self.tangent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tangent.is_empty()
    }

    pub fn s_at(&self, i: usize) -> f64 {
        self.s0 + self.step * i as f64
    }

    pub fn tables(&self, i: usize) -> &StructureTables {
        match &self.cache {
            StructureCache::Constant(t) => t,
            StructureCache::PerSample(ts) => &ts[i],
        }
    }

    /// Interior sample range: one-sided stencils cover the first/last two
    /// nodes, which are excluded from identity assertions.
    pub fn interior(&self) -> std::ops::Range<usize> {
        2..self.len().saturating_sub(2)
    }
}

// ---------------------------------------------------------------------------
// Covariant differentiation along the curve
// ---------------------------------------------------------------------------

/// Covariant derivative of a vector field `v` (frame components per sample)
/// along the curve: (∇_T V)^k = dV^k/ds + Σ_{i,j} T^i V^j omega[i][j][k].
pub fn covariant_derivative(curve: &Curve, v: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = curve.len();
    let m = curve.manifold.dim;
    if v.len() != n {
        return Err(Error::GridMismatch(format!(
            "field has {} samples, curve has {n}",
            v.len()
        )));
    }
    if let Some(bad) = v.iter().find(|row| row.len() != m) {
        return Err(Error::DimensionMismatch {
            what: "field components".into(),
            expected: m,
            got: bad.len(),
        });
    }
    let mut out = derivative_rows(v, curve.step)?;
    for t in 0..n {
        let omega = &curve.tables(t).omega;
        let tan = &curve.tangent[t];
        for i in 0..m {
            if tan[i] == 0.0 {
                continue;
            }
            for j in 0..m {
                let c = tan[i] * v[t][j];
                if c == 0.0 {
                    continue;
                }
                for k in 0..m {
                    out[t][k] += c * omega[i][j][k];
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Frenet apparatus
// ---------------------------------------------------------------------------

/// Frenet data of a curve: osculating order, curvature functions and the
/// orthonormal frame vectors with their η-components.
#[derive(Debug, Clone)]
pub struct FrenetApparatus {
    pub dim: usize,
    pub xi_index: usize,
    pub s0: f64,
    pub step: f64,
    /// Osculating order r; 1 means geodesic.
    pub order: usize,
    /// k_1 … k_{r-1}.
    pub curvatures: Vec<Sampled<f64>>,
    /// `frames[a][i]`: frame components of υ_{a+1} at sample i (a = 0 is T).
    pub frames: Vec<Vec<Vec<f64>>>,
    /// `eta[a][i]` = η(υ_{a+1}) at sample i.
    pub eta: Vec<Vec<f64>>,
}

impl FrenetApparatus {
    pub fn len(&self) -> usize {
        self.frames[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty() || self.frames[0].is_empty()
    }

    pub fn interior(&self) -> std::ops::Range<usize> {
        2..self.len().saturating_sub(2)
    }

    /// Assemble an apparatus from explicit data (synthetic fixtures, or the
    /// echo of a prescribed integration). Frames must be orthonormal within
    /// 1e-8 at each sample and curvatures positive.
    pub fn from_parts(
        dim: usize,
        xi_index: usize,
        s0: f64,
        step: f64,
        curvatures: Vec<Vec<f64>>,
        frames: Vec<Vec<Vec<f64>>>,
    ) -> Result<FrenetApparatus> {
        let order = frames.len();
        if order == 0 {
            return Err(Error::InvalidInput("apparatus needs at least T".into()));
        }
        if curvatures.len() + 1 != order {
            return Err(Error::InvalidInput(format!(
                "expected {} curvature functions for order {order}, got {}",
                order - 1,
                curvatures.len()
            )));
        }
        let n = frames[0].len();
        if frames.iter().any(|f| f.len() != n) || curvatures.iter().any(|k| k.len() != n) {
            return Err(Error::GridMismatch(
                "apparatus samples have inconsistent lengths".into(),
            ));
        }
        for i in 0..n {
            for a in 0..order {
                if frames[a][i].len() != dim {
                    return Err(Error::DimensionMismatch {
                        what: "frame vector".into(),
                        expected: dim,
                        got: frames[a][i].len(),
                    });
                }
                for b in 0..=a {
                    let want = if a == b { 1.0 } else { 0.0 };
                    let got = dot(&frames[a][i], &frames[b][i]);
                    if (got - want).abs() > 1e-8 {
                        return Err(Error::CurveInvariant(format!(
                            "frames not orthonormal at sample {i}: <υ{},υ{}> = {got}",
                            a + 1,
                            b + 1
                        )));
                    }
                }
            }
        }
        for (a, k) in curvatures.iter().enumerate() {
            if k.iter().any(|&v| v.is_nan() || v <= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "curvature k{} must be positive on the whole grid",
                    a + 1
                )));
            }
        }
        let eta = frames
            .iter()
            .map(|fa| fa.iter().map(|v| v[xi_index]).collect())
            .collect();
        Ok(FrenetApparatus {
            dim,
            xi_index,
            s0,
            step,
            order,
            curvatures: curvatures
                .into_iter()
                .map(|k| Sampled::new(s0, step, k))
                .collect(),
            frames,
            eta,
        })
    }
}

/// Extract the Frenet apparatus of `curve`. Each level computes ∇_T υ_a,
/// removes the components along the frame built so far, and reads the
/// curvature as the residual norm. The residual must stay uniformly above or
/// below the rank tolerance; crossing it raises an ambiguous-order error.
/// The uniformity decision uses interior samples: the one-sided stencils at
/// the first/last two nodes amplify noise and must not decide the order.
///
/// `rank_tol` is absolute for the geodesic test (level 1) and relative to
/// max k₁ afterwards.
pub fn frenet(curve: &Curve, rank_tol: f64) -> Result<FrenetApparatus> {
    let n = curve.len();
    let m = curve.manifold.dim;
    let mut frames: Vec<Vec<Vec<f64>>> = vec![curve.tangent.clone()];
    let mut curvatures: Vec<Vec<f64>> = Vec::new();
    let interior = curve.interior();

    loop {
        let level = frames.len(); // computing k_level and υ_{level+1}
        let w = covariant_derivative(curve, frames.last().unwrap())?;

        let mut k = vec![0.0; n];
        let mut next = vec![Vec::new(); n];
        for i in 0..n {
            let mut vs: Vec<Vec<f64>> = (0..level).map(|a| frames[a][i].clone()).collect();
            vs.push(w[i].clone());
            let gs = gram_schmidt(&vs, dot, f64::MIN_POSITIVE);
            k[i] = gs.coefficients[level][level];
            if gs.basis.len() > level {
                next[i] = gs.basis[level].clone();
            }
        }

        let threshold = if level == 1 {
            rank_tol
        } else {
            rank_tol * curvatures[0].iter().fold(0.0f64, |a, &b| a.max(b))
        };
        let below: Vec<usize> = interior.clone().filter(|&i| k[i] < threshold).collect();

        if below.len() == interior.len() || level == m {
            return finish_apparatus(curve, frames, curvatures);
        }
        if !below.is_empty() {
            return Err(Error::AmbiguousOrder {
                level,
                s_lo: curve.s_at(*below.first().unwrap()),
                s_hi: curve.s_at(*below.last().unwrap()),
            });
        }
        // Boundary samples may sit below threshold from stencil noise when
        // the level terminates one step later; keep their residual direction
        // only if it exists, otherwise copy the nearest interior direction.
        for i in 0..n {
            if next[i].is_empty() {
                let j = i.clamp(interior.start, interior.end.saturating_sub(1));
                next[i] = if next[j].is_empty() {
                    vec![0.0; m]
                } else {
                    next[j].clone()
                };
            }
        }
        curvatures.push(k);
        frames.push(next);
    }
}

fn finish_apparatus(
    curve: &Curve,
    frames: Vec<Vec<Vec<f64>>>,
    curvatures: Vec<Vec<f64>>,
) -> Result<FrenetApparatus> {
    let xi_index = curve.manifold.xi_index;
    let eta = frames
        .iter()
        .map(|fa| fa.iter().map(|v| v[xi_index]).collect())
        .collect();
    Ok(FrenetApparatus {
        dim: curve.manifold.dim,
        xi_index,
        s0: curve.s0,
        step: curve.step,
        order: frames.len(),
        curvatures: curvatures
            .into_iter()
            .map(|k| Sampled::new(curve.s0, curve.step, k))
            .collect(),
        frames,
        eta,
    })
}

/// Frenet extraction with the default rank tolerance.
pub fn frenet_default(curve: &Curve) -> Result<FrenetApparatus> {
    frenet(curve, DEFAULT_RANK_TOL)
}

// ---------------------------------------------------------------------------
// Contact invariants
// ---------------------------------------------------------------------------

/// Contact angle α(s) = arccos g(T, ξ).
pub fn contact_angle(curve: &Curve) -> Sampled<f64> {
    let xi = curve.manifold.xi_index;
    let vals = curve
        .tangent
        .iter()
        .map(|t| t[xi].clamp(-1.0, 1.0).acos())
        .collect();
    Sampled::new(curve.s0, curve.step, vals)
}

/// A curve is Legendre when g(T, ξ) vanishes along it.
pub fn is_legendre(curve: &Curve) -> bool {
    let xi = curve.manifold.xi_index;
    curve.tangent.iter().all(|t| t[xi].abs() < LEGENDRE_TOL)
}

/// The scalar g(T, φhT) sampled along the curve.
pub fn legendre_scalar(curve: &Curve) -> Sampled<f64> {
    let vals = (0..curve.len())
        .map(|i| {
            let t = &curve.tangent[i];
            let ht = matvec(&curve.tables(i).h, t);
            let phiht = curve.manifold.phi_apply(&ht);
            dot(t, &phiht)
        })
        .collect();
    Sampled::new(curve.s0, curve.step, vals)
}

/// Per-sample contact scalars consumed by the theorem verifiers.
#[derive(Debug, Clone)]
pub struct CurveScalars {
    /// g(T, φhT)
    pub t_phi_h_t: Vec<f64>,
    /// g(T, hT)
    pub t_h_t: Vec<f64>,
    /// g(hT, hT)
    pub h_t_h_t: Vec<f64>,
}

pub fn contact_scalars(curve: &Curve) -> CurveScalars {
    let n = curve.len();
    let mut t_phi_h_t = Vec::with_capacity(n);
    let mut t_h_t = Vec::with_capacity(n);
    let mut h_t_h_t = Vec::with_capacity(n);
    for i in 0..n {
        let t = &curve.tangent[i];
        let ht = matvec(&curve.tables(i).h, t);
        let phiht = curve.manifold.phi_apply(&ht);
        t_phi_h_t.push(dot(t, &phiht));
        t_h_t.push(dot(t, &ht));
        h_t_h_t.push(dot(&ht, &ht));
    }
    CurveScalars {
        t_phi_h_t,
        t_h_t,
        h_t_h_t,
    }
}

// ---------------------------------------------------------------------------
// Curve CSV files
// ---------------------------------------------------------------------------

/// Reference to a manifold that can be embedded in a curve file and
/// reconstructed later.
#[derive(Debug, Clone, PartialEq)]
pub enum ManifoldRef {
    Rkmn,
    E2 { c2: f64 },
    Spec { path: String },
}

impl fmt::Display for ManifoldRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManifoldRef::Rkmn => write!(f, "rkmn"),
            ManifoldRef::E2 { c2 } => write!(f, "e2 c2={c2:?}"),
            ManifoldRef::Spec { path } => write!(f, "spec {path}"),
        }
    }
}

impl FromStr for ManifoldRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<ManifoldRef> {
        let s = s.trim();
        if s == "rkmn" {
            return Ok(ManifoldRef::Rkmn);
        }
        if let Some(rest) = s.strip_prefix("e2") {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("c2=") {
                let c2 = v
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("bad c2 value `{v}`")))?;
                return Ok(ManifoldRef::E2 { c2 });
            }
            return Err(Error::InvalidInput(format!(
                "bad e2 reference `{s}` (expected `e2 c2=V`)"
            )));
        }
        if let Some(path) = s.strip_prefix("spec ") {
            return Ok(ManifoldRef::Spec {
                path: path.trim().to_string(),
            });
        }
        Err(Error::InvalidInput(format!(
            "unknown manifold reference `{s}` (expected `rkmn`, `e2 c2=V`, or `spec PATH`)"
        )))
    }
}

impl ManifoldRef {
    pub fn resolve(&self) -> Result<Arc<FrameManifold>> {
        match self {
            ManifoldRef::Rkmn => Ok(manifold::builtin_rkmn()),
            ManifoldRef::E2 { c2 } => manifold::builtin_e2(*c2),
            ManifoldRef::Spec { path } => {
                let doc = std::fs::read_to_string(path)?;
                manifold::load_manifold(&doc, &[])
            }
        }
    }
}

/// Write the curve in CSV form: header `s,<coords…>,T1..Tm`, values with 17
/// significant digits so reading the file back is bit-stable. The manifold
/// reference, when known, is embedded as a leading `#` comment.
pub fn write_csv<W: Write>(curve: &Curve, out: &mut W) -> Result<()> {
    if let Some(r) = &curve.manifold_ref {
        writeln!(out, "# manifold: {r}")?;
    }
    let m = curve.manifold.dim;
    let mut header = String::from("s");
    for c in &curve.manifold.coords {
        header.push(',');
        header.push_str(c);
    }
    for k in 1..=m {
        header.push_str(&format!(",T{k}"));
    }
    writeln!(out, "{header}")?;
    for i in 0..curve.len() {
        let mut row = format!("{:.16e}", curve.s_at(i));
        if let Some(xs) = &curve.coords {
            for v in &xs[i] {
                row.push_str(&format!(",{v:.16e}"));
            }
        }
        for v in &curve.tangent[i] {
            row.push_str(&format!(",{v:.16e}"));
        }
        writeln!(out, "{row}")?;
    }
    Ok(())
}

/// Read a curve CSV. The manifold is taken from `manifold_override` when
/// given, otherwise from the file's `# manifold:` comment.
pub fn read_csv<R: BufRead>(input: R, manifold_override: Option<&ManifoldRef>) -> Result<Curve> {
    let mut lines = input.lines().enumerate();
    let mut embedded: Option<ManifoldRef> = None;
    let mut header: Option<(usize, String)> = None;

    for (idx, line) in lines.by_ref() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(mref) = rest.strip_prefix("manifold:") {
                embedded = Some(mref.trim().parse()?);
            }
            continue;
        }
        header = Some((idx, trimmed.to_string()));
        break;
    }

    let (header_line, header) = header.ok_or_else(|| Error::CurveFile {
        line: 0,
        message: "missing header row".into(),
    })?;

    let mref = manifold_override
        .cloned()
        .or(embedded)
        .ok_or_else(|| Error::CurveFile {
            line: header_line + 1,
            message: "no manifold reference: pass one explicitly or embed `# manifold: …`".into(),
        })?;
    let mani = mref.resolve()?;
    let m = mani.dim;
    let nc = mani.coords.len();

    let mut expected = String::from("s");
    for c in &mani.coords {
        expected.push(',');
        expected.push_str(c);
    }
    for k in 1..=m {
        expected.push_str(&format!(",T{k}"));
    }
    if header != expected {
        return Err(Error::CurveFile {
            line: header_line + 1,
            message: format!("header `{header}` does not match expected `{expected}`"),
        });
    }

    let mut s_vals = Vec::new();
    let mut coords: Vec<Vec<f64>> = Vec::new();
    let mut tangent: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 1 + nc + m {
            return Err(Error::CurveFile {
                line: idx + 1,
                message: format!("expected {} fields, got {}", 1 + nc + m, fields.len()),
            });
        }
        let parse_f = |s: &str| -> Result<f64> {
            s.trim().parse::<f64>().map_err(|_| Error::CurveFile {
                line: idx + 1,
                message: format!("bad number `{s}`"),
            })
        };
        s_vals.push(parse_f(fields[0])?);
        if nc > 0 {
            coords.push(
                fields[1..1 + nc]
                    .iter()
                    .map(|f| parse_f(f))
                    .collect::<Result<_>>()?,
            );
        }
        tangent.push(
            fields[1 + nc..]
                .iter()
                .map(|f| parse_f(f))
                .collect::<Result<_>>()?,
        );
    }

    if s_vals.len() < 6 {
        return Err(Error::TooFewSamples {
            what: "curve file",
            needed: 6,
            got: s_vals.len(),
        });
    }
    let s0 = s_vals[0];
    let step = (s_vals[s_vals.len() - 1] - s0) / (s_vals.len() - 1) as f64;
    if step.is_nan() || step <= 0.0 {
        return Err(Error::CurveFile {
            line: header_line + 2,
            message: "arc-length column must be increasing".into(),
        });
    }
    for (i, s) in s_vals.iter().enumerate() {
        if (s - (s0 + step * i as f64)).abs() > 1e-9 * step.max(1.0) {
            return Err(Error::CurveFile {
                line: header_line + 2 + i,
                message: "arc-length grid is not uniform".into(),
            });
        }
    }

    let curve = Curve::new(
        mani,
        s0,
        step,
        if nc > 0 { Some(coords) } else { None },
        tangent,
    )?;
    Ok(curve.with_ref(mref))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{builtin_e2, builtin_rkmn};
    use crate::numerics::central_diff;

    const SQ2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    /// The explicit curve on the rkmn model: coords (ln 2, 0, s/√2) with
    /// T = -√2/2 X + √2/2 φX in frame order (ξ, X, φX).
    fn rkmn_line(span: f64, step: f64) -> Curve {
        let mani = builtin_rkmn();
        let n = (span / step).round() as usize + 1;
        let coords: Vec<Vec<f64>> = (0..n)
            .map(|i| vec![2.0f64.ln(), 0.0, SQ2 * step * i as f64])
            .collect();
        let tangent = vec![vec![0.0, -SQ2, SQ2]; n];
        Curve::new(mani, 0.0, step, Some(coords), tangent).unwrap()
    }

    /// Constant-component Legendre curve on the e2 model, frame order
    /// (X, φX, ξ).
    fn e2_constant(c2: f64, tx: f64, tphix: f64, span: f64, step: f64) -> Curve {
        let mani = builtin_e2(c2).unwrap();
        let n = (span / step).round() as usize + 1;
        let tangent = vec![vec![tx, tphix, 0.0]; n];
        Curve::new(mani, 0.0, step, None, tangent).unwrap()
    }

    #[test]
    fn covariant_derivative_of_tangent_is_minus_xi_on_rkmn_line() {
        let c = rkmn_line(1.0, 1e-3);
        let dt = covariant_derivative(&c, &c.tangent).unwrap();
        for row in &dt {
            assert!((row[0] + 1.0).abs() < 1e-6, "ξ component {}", row[0]);
            assert!(row[1].abs() < 1e-6 && row[2].abs() < 1e-6);
        }
    }

    #[test]
    fn covariant_derivative_of_xi_matches_structure_identity() {
        let c = rkmn_line(1.0, 1e-3);
        let n = c.len();
        let xi = vec![c.manifold.xi_components(); n];
        let dxi = covariant_derivative(&c, &xi).unwrap();
        for i in 0..n {
            let t = &c.tangent[i];
            let ht = matvec(&c.tables(i).h, t);
            let mut rhs = c.manifold.phi_apply(t);
            let phiht = c.manifold.phi_apply(&ht);
            for k in 0..3 {
                rhs[k] = -rhs[k] - phiht[k];
            }
            let dev = numerics::norm(&numerics::sub(&dxi[i], &rhs));
            assert!(dev < 1e-6, "sample {i}: dev {dev:e}");
        }
    }

    #[test]
    fn covariant_derivative_of_zero_is_zero() {
        let c = e2_constant(2.0, SQ2, -SQ2, 1.0, 1e-3);
        let zero = vec![vec![0.0; 3]; c.len()];
        let dz = covariant_derivative(&c, &zero).unwrap();
        assert!(dz.iter().all(|r| r.iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn frenet_on_rkmn_line_gives_unit_curvatures() {
        let c = rkmn_line(1.0, 1e-3);
        let app = frenet_default(&c).unwrap();
        assert_eq!(app.order, 3);
        for i in 0..app.len() {
            assert!((app.curvatures[0].values[i] - 1.0).abs() < 1e-6);
            assert!((app.curvatures[1].values[i] - 1.0).abs() < 1e-6);
            // υ₂ = -ξ
            assert!((app.frames[1][i][0] + 1.0).abs() < 1e-6);
            // υ₃ = -√2/2 (X + φX)
            assert!((app.frames[2][i][1] + SQ2).abs() < 1e-6);
            assert!((app.frames[2][i][2] + SQ2).abs() < 1e-6);
        }
    }

    #[test]
    fn frenet_equations_hold_on_rkmn_line() {
        let c = rkmn_line(1.0, 1e-3);
        let app = frenet_default(&c).unwrap();
        // ∇_T υ_a = -k_{a-1} υ_{a-1} + k_a υ_{a+1} with k_0 = k_r = 0.
        for a in 0..app.order {
            let d = covariant_derivative(&c, &app.frames[a]).unwrap();
            for i in app.interior() {
                let mut expect = vec![0.0; 3];
                if a > 0 {
                    numerics::axpy(
                        &mut expect,
                        -app.curvatures[a - 1].values[i],
                        &app.frames[a - 1][i],
                    );
                }
                if a + 1 < app.order {
                    numerics::axpy(
                        &mut expect,
                        app.curvatures[a].values[i],
                        &app.frames[a + 1][i],
                    );
                }
                let dev = numerics::norm(&numerics::sub(&d[i], &expect));
                assert!(dev < 1e-5, "a = {a}, sample {i}: {dev:e}");
            }
        }
    }

    #[test]
    fn frenet_frames_are_orthonormal() {
        for curve in [rkmn_line(1.0, 1e-3), e2_constant(2.0, SQ2, -SQ2, 1.0, 1e-3)] {
            let app = frenet_default(&curve).unwrap();
            for i in 0..app.len() {
                for a in 0..app.order {
                    for b in 0..=a {
                        let want = if a == b { 1.0 } else { 0.0 };
                        let got = dot(&app.frames[a][i], &app.frames[b][i]);
                        assert!((got - want).abs() < 1e-8, "sample {i} <υ{a},υ{b}>");
                    }
                }
            }
        }
    }

    #[test]
    fn frenet_detects_geodesic_along_xi() {
        let mani = builtin_e2(2.0).unwrap();
        let n = 1001;
        let tangent = vec![vec![0.0, 0.0, 1.0]; n];
        let c = Curve::new(mani, 0.0, 1e-3, None, tangent).unwrap();
        let app = frenet_default(&c).unwrap();
        assert_eq!(app.order, 1);
        assert!(app.curvatures.is_empty());
    }

    #[test]
    fn e2_constant_tangent_curves_are_order_three_helices() {
        // Both constant-component families on e2 share (k₁, k₂) =
        // (-T₁T₂c₂, |1 - c₂ cos2θ / 2|); at θ = 3π/4, c₂ = 2 both equal 1.
        for (tx, tphix) in [(SQ2, -SQ2), (-SQ2, SQ2)] {
            let c = e2_constant(2.0, tx, tphix, 2.0, 1e-3);
            let app = frenet_default(&c).unwrap();
            assert_eq!(app.order, 3);
            for i in 0..app.len() {
                assert!((app.curvatures[0].values[i] - 1.0).abs() < 1e-7);
                assert!((app.curvatures[1].values[i] - 1.0).abs() < 1e-7);
                // υ₂ = ξ for both orientations here.
                assert!((app.eta[1][i] - 1.0).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn true_order_two_circle_exists_when_c2_cos2theta_is_two() {
        // c₂ cos 2θ = 2 closes the Frenet chain at order 2: c₂ = 4,
        // θ = 5π/6 gives k₁ = √3 with υ₂ = ξ.
        let theta = 5.0 * std::f64::consts::PI / 6.0;
        let c = e2_constant(4.0, -theta.cos(), -theta.sin(), 2.0, 1e-3);
        let app = frenet_default(&c).unwrap();
        assert_eq!(app.order, 2);
        for i in 0..app.len() {
            assert!((app.curvatures[0].values[i] - 3.0f64.sqrt()).abs() < 1e-9);
            assert!((app.eta[1][i] - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn ambiguous_order_reports_interval() {
        // Tangent (cos s²/2, sin s²/2, 0) has k₁(0) = 0 and k₁ > 0 elsewhere.
        let mani = builtin_e2(2.0).unwrap();
        let step = 1e-2;
        let n = 201;
        let tangent: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let s = -1.0 + step * i as f64;
                let f = s * s / 2.0;
                vec![f.cos(), f.sin(), 0.0]
            })
            .collect();
        let c = Curve::new(mani, -1.0, step, None, tangent).unwrap();
        match frenet(&c, 1e-4) {
            Err(Error::AmbiguousOrder { level, s_lo, s_hi }) => {
                assert_eq!(level, 1);
                assert!(s_lo <= 0.0 && s_hi >= 0.0, "interval [{s_lo}, {s_hi}]");
            }
            other => panic!("expected ambiguous order, got {other:?}"),
        }
    }

    #[test]
    fn curve_rejects_non_unit_speed() {
        let mani = builtin_e2(2.0).unwrap();
        let tangent = vec![vec![1.0, 1.0, 0.0]; 100];
        assert!(matches!(
            Curve::new(mani, 0.0, 1e-2, None, tangent),
            Err(Error::NonUnitSpeed { .. })
        ));
    }

    #[test]
    fn contact_angle_and_legendre_flags() {
        let c = rkmn_line(1.0, 1e-3);
        let alpha = contact_angle(&c);
        for v in &alpha.values {
            assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        }
        assert!(is_legendre(&c));

        let mani = builtin_e2(2.0).unwrap();
        let along_xi = Curve::new(mani, 0.0, 1e-2, None, vec![vec![0.0, 0.0, 1.0]; 100]).unwrap();
        let alpha = contact_angle(&along_xi);
        assert!(alpha.values.iter().all(|&v| v.abs() < 1e-12));
        assert!(!is_legendre(&along_xi));
    }

    #[test]
    fn legendre_scalar_values_on_reference_curves() {
        // rkmn line: g(T, φhT) = -1 at x = ln 2.
        let c = rkmn_line(1.0, 1e-3);
        let g = legendre_scalar(&c);
        assert!(g.values.iter().all(|v| (v + 1.0).abs() < 1e-12));

        // e2 family: g(T, φhT) = -sinθ cosθ c₂.
        let theta: f64 = 3.0 * std::f64::consts::PI / 4.0;
        let c = e2_constant(2.0, -theta.cos(), -theta.sin(), 1.0, 1e-3);
        let g = legendre_scalar(&c);
        let want = -theta.sin() * theta.cos() * 2.0;
        assert!(g.values.iter().all(|v| (v - want).abs() < 1e-12));

        // Along ξ the scalar vanishes because hξ = 0.
        let mani = builtin_e2(2.0).unwrap();
        let along_xi = Curve::new(mani, 0.0, 1e-2, None, vec![vec![0.0, 0.0, 1.0]; 100]).unwrap();
        let g = legendre_scalar(&along_xi);
        assert!(g.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn legendre_identity_k1_eta2_equals_scalar() {
        let theta23 = 2.0 / 3.0 * std::f64::consts::PI;
        for curve in [
            rkmn_line(1.0, 1e-3),
            e2_constant(2.0, SQ2, -SQ2, 1.0, 1e-3),
            e2_constant(1.0, -theta23.cos(), -theta23.sin(), 1.0, 1e-3),
        ] {
            let app = frenet_default(&curve).unwrap();
            let g = legendre_scalar(&curve);
            for i in app.interior() {
                let lhs = app.curvatures[0].values[i] * app.eta[1][i];
                assert!((lhs - g.values[i]).abs() < 1e-5, "sample {i}");
            }
        }
    }

    #[test]
    fn covariant_derivative_is_metric_compatible() {
        let c = rkmn_line(1.0, 1e-3);
        let n = c.len();
        // Two smooth fields with non-constant components.
        let v: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let s = c.s_at(i);
                vec![s.sin(), s.cos(), 0.3 * s]
            })
            .collect();
        let w: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let s = c.s_at(i);
                vec![1.0, 0.5 * (2.0 * s).sin(), s * s]
            })
            .collect();
        let dv = covariant_derivative(&c, &v).unwrap();
        let dw = covariant_derivative(&c, &w).unwrap();
        let g: Vec<f64> = (0..n).map(|i| dot(&v[i], &w[i])).collect();
        let dg = central_diff(&Sampled::new(c.s0, c.step, g), 1).unwrap();
        for i in c.interior() {
            let lhs = dg.values[i];
            let rhs = dot(&dv[i], &w[i]) + dot(&v[i], &dw[i]);
            assert!((lhs - rhs).abs() < 1e-5, "sample {i}: {:e}", lhs - rhs);
        }
    }

    #[test]
    fn frenet_is_step_stable_on_reference_curves() {
        let coarse = frenet_default(&rkmn_line(1.0, 1e-3)).unwrap();
        let fine = frenet_default(&rkmn_line(1.0, 5e-4)).unwrap();
        assert_eq!(coarse.order, fine.order);
        for (a, k) in coarse.curvatures.iter().enumerate() {
            let max_c = k.max_abs();
            let max_f = fine.curvatures[a].max_abs();
            assert!((max_c - max_f).abs() < 1e-7);
        }
    }

    #[test]
    fn csv_round_trip_is_bit_stable() {
        let c = rkmn_line(0.05, 1e-3).with_ref(ManifoldRef::Rkmn);
        let mut buf = Vec::new();
        write_csv(&c, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# manifold: rkmn\ns,x,y,z,T1,T2,T3\n"));
        let back = read_csv(std::io::Cursor::new(&buf), None).unwrap();
        assert_eq!(back.tangent, c.tangent);
        assert_eq!(back.coords, c.coords);
        assert_eq!(back.manifold_ref, Some(ManifoldRef::Rkmn));

        let mut buf2 = Vec::new();
        write_csv(&back, &mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn csv_requires_manifold_reference() {
        let c = e2_constant(2.0, SQ2, -SQ2, 0.05, 1e-3);
        let mut buf = Vec::new();
        write_csv(&c, &mut buf).unwrap(); // no manifold_ref → no comment
        let err = read_csv(std::io::Cursor::new(&buf), None);
        assert!(matches!(err, Err(Error::CurveFile { .. })));
        let back = read_csv(
            std::io::Cursor::new(&buf),
            Some(&ManifoldRef::E2 { c2: 2.0 }),
        )
        .unwrap();
        assert_eq!(back.tangent, c.tangent);
    }

    #[test]
    fn apparatus_from_parts_validates_orthonormality() {
        let bad = FrenetApparatus::from_parts(
            3,
            0,
            0.0,
            0.1,
            vec![vec![1.0; 10]],
            vec![vec![vec![1.0, 0.0, 0.0]; 10], vec![vec![1.0, 0.0, 0.0]; 10]],
        );
        assert!(matches!(bad, Err(Error::CurveInvariant(_))));
    }
}
