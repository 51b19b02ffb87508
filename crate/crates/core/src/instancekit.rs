//! Problem instances, their on-disk JSON format, and seeded generators.
//!
//! Documents use the `pickwell-1` format: complex numbers are `[re, im]`
//! pairs, matrices are row-major arrays of rows. Serialization is
//! deterministic (fixed field order, shortest round-trip float encoding),
//! so serialize ∘ deserialize is the identity on every document this
//! module produces, and digests over document bytes are stable.
//!
//! Generators are pure functions of their seed via a counter-based stream
//! cipher RNG (`ChaCha8`), chosen because its output is specified
//! independently of platform word size; rerunning any generator with the
//! same arguments reproduces the same instance bit for bit.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::cpmap::OperatorPoint;
use crate::error::{Error, Result};
use crate::funcalc::RationalForm;
use crate::kernel::{self, c, CMatrix, ToleranceConfig};
use crate::pickclassic::{toeplitz_from_jet, SchurFn};

pub const FORMAT_VERSION: &str = "pickwell-1";

/// An interpolation problem: `n` operator points with their `k`×`k`
/// targets, plus the tolerances and provenance needed to reproduce and
/// audit any verdict about it.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub d: usize,
    pub k: usize,
    pub n: usize,
    pub points: Vec<OperatorPoint>,
    pub targets: Vec<CMatrix>,
    pub tolerances: ToleranceConfig,
    pub seed: u64,
    pub note: String,
}

impl ProblemInstance {
    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        if self.d == 0 || self.k == 0 {
            return Err(Error::ShapeMismatch(format!(
                "degenerate shape d = {}, k = {}",
                self.d, self.k
            )));
        }
        if self.n == 0 || self.points.is_empty() {
            return Err(Error::Parse("instance needs at least one point".into()));
        }
        if self.points.len() != self.n || self.targets.len() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "n = {} but {} points and {} targets",
                self.n,
                self.points.len(),
                self.targets.len()
            )));
        }
        for (i, p) in self.points.iter().enumerate() {
            if p.d() != self.d || p.k() != self.k {
                return Err(Error::ShapeMismatch(format!(
                    "point {i} has (d, k) = ({}, {}), expected ({}, {})",
                    p.d(),
                    p.k(),
                    self.d,
                    self.k
                )));
            }
        }
        for (i, w) in self.targets.iter().enumerate() {
            if w.nrows() != self.k || w.ncols() != self.k {
                return Err(Error::ShapeMismatch(format!(
                    "target {i} is {}x{}, expected {}x{}",
                    w.nrows(),
                    w.ncols(),
                    self.k,
                    self.k
                )));
            }
            if !kernel::all_finite(w) {
                return Err(Error::NonFinite);
            }
        }
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.points[i] == self.points[j] {
                    return Err(Error::DuplicatePoints { i, j });
                }
            }
        }
        Ok(())
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn unpair(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn matrix_rows(a: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| pair(a[(i, j)])).collect())
        .collect()
}

fn rows_matrix(rows: &[Vec<[f64; 2]>], context: &str) -> Result<CMatrix> {
    if rows.is_empty() {
        return Err(Error::ShapeMismatch(format!("{context}: empty matrix")));
    }
    let cols = rows[0].len();
    if cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(Error::ShapeMismatch(format!("{context}: ragged or empty rows")));
    }
    let m = CMatrix::from_fn(rows.len(), cols, |i, j| unpair(rows[i][j]));
    if !kernel::all_finite(&m) {
        return Err(Error::NonFinite);
    }
    Ok(m)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    version: String,
    d: usize,
    k: usize,
    n: usize,
    points: Vec<Vec<Vec<Vec<[f64; 2]>>>>,
    targets: Vec<Vec<Vec<[f64; 2]>>>,
    tolerances: ToleranceConfig,
    seed: u64,
    note: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionDoc {
    version: String,
    parameters: Vec<[f64; 2]>,
    anchors: Vec<[f64; 2]>,
    terminal: [f64; 2],
    numerator: Vec<[f64; 2]>,
    denominator: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    version: String,
    matrix: Vec<Vec<[f64; 2]>>,
}

fn check_version(version: &str) -> Result<()> {
    if version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported document version {version:?}, expected {FORMAT_VERSION:?}"
        )));
    }
    Ok(())
}

fn render<T: Serialize>(doc: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn serialize_instance(instance: &ProblemInstance) -> Result<String> {
    instance.validate()?;
    let doc = InstanceDoc {
        version: FORMAT_VERSION.into(),
        d: instance.d,
        k: instance.k,
        n: instance.n,
        points: instance
            .points
            .iter()
            .map(|p| p.blocks().iter().map(matrix_rows).collect())
            .collect(),
        targets: instance.targets.iter().map(matrix_rows).collect(),
        tolerances: instance.tolerances,
        seed: instance.seed,
        note: instance.note.clone(),
    };
    render(&doc)
}

pub fn deserialize_instance(text: &str) -> Result<ProblemInstance> {
    let doc: InstanceDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    check_version(&doc.version)?;
    if doc.n == 0 || doc.points.is_empty() || doc.targets.is_empty() {
        return Err(Error::Parse("instance needs at least one point".into()));
    }
    let mut points = Vec::with_capacity(doc.points.len());
    for (i, blocks) in doc.points.iter().enumerate() {
        if blocks.len() != doc.d {
            return Err(Error::ShapeMismatch(format!(
                "point {i} has {} blocks, expected d = {}",
                blocks.len(),
                doc.d
            )));
        }
        let mats = blocks
            .iter()
            .enumerate()
            .map(|(t, b)| rows_matrix(b, &format!("point {i} block {t}")))
            .collect::<Result<Vec<_>>>()?;
        points.push(OperatorPoint::new(mats)?);
    }
    let targets = doc
        .targets
        .iter()
        .enumerate()
        .map(|(i, t)| rows_matrix(t, &format!("target {i}")))
        .collect::<Result<Vec<_>>>()?;
    let instance = ProblemInstance {
        d: doc.d,
        k: doc.k,
        n: doc.n,
        points,
        targets,
        tolerances: doc.tolerances,
        seed: doc.seed,
        note: doc.note,
    };
    instance.validate()?;
    Ok(instance)
}

pub fn serialize_function(f: &SchurFn) -> Result<String> {
    let doc = FunctionDoc {
        version: FORMAT_VERSION.into(),
        parameters: f.parameters().iter().map(|&g| pair(g)).collect(),
        anchors: f.anchors().iter().map(|&a| pair(a)).collect(),
        terminal: pair(f.terminal()),
        numerator: f.rational().numerator().iter().map(|&p| pair(p)).collect(),
        denominator: f.rational().denominator().iter().map(|&q| pair(q)).collect(),
    };
    render(&doc)
}

/// Parses a function document by rebuilding the cascade, then insists the
/// stored rational form matches the rebuilt one; a document whose parts
/// disagree is rejected rather than trusted.
pub fn deserialize_function(text: &str) -> Result<SchurFn> {
    let doc: FunctionDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    check_version(&doc.version)?;
    let parameters: Vec<Complex64> = doc.parameters.iter().map(|&p| unpair(p)).collect();
    let anchors: Vec<Complex64> = doc.anchors.iter().map(|&p| unpair(p)).collect();
    let f = SchurFn::from_cascade(parameters, anchors, unpair(doc.terminal))?;
    let stored_num: Vec<Complex64> = doc.numerator.iter().map(|&p| unpair(p)).collect();
    let stored_den: Vec<Complex64> = doc.denominator.iter().map(|&p| unpair(p)).collect();
    let stored = RationalForm::new(stored_num, stored_den)?;
    let same = |a: &[Complex64], b: &[Complex64]| {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= 1e-12)
    };
    if !same(stored.numerator(), f.rational().numerator())
        || !same(stored.denominator(), f.rational().denominator())
    {
        return Err(Error::Parse(
            "function document rational form does not match its cascade".into(),
        ));
    }
    Ok(f)
}

pub fn serialize_matrix(a: &CMatrix) -> Result<String> {
    if !kernel::all_finite(a) {
        return Err(Error::NonFinite);
    }
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(Error::ShapeMismatch("matrix document: empty matrix".into()));
    }
    render(&MatrixDoc { version: FORMAT_VERSION.into(), matrix: matrix_rows(a) })
}

pub fn deserialize_matrix(text: &str) -> Result<CMatrix> {
    let doc: MatrixDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    check_version(&doc.version)?;
    rows_matrix(&doc.matrix, "matrix document")
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

fn disc_sample(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = 2.0 * std::f64::consts::PI * rng.random::<f64>();
    Complex64::from_polar(r, theta)
}

/// A random k×k matrix rescaled to the requested operator norm in (0, 1).
pub fn gen_strict_contraction(seed: u64, k: usize, radius: f64) -> Result<CMatrix> {
    if k == 0 {
        return Err(Error::ShapeMismatch("k must be positive".into()));
    }
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "contraction radius must lie in (0, 1), got {radius}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let g = gaussian_matrix(&mut rng, k, k);
        let norm = kernel::operator_norm(&g)?;
        if norm > 0.0 {
            return Ok(g * c(radius / norm, 0.0));
        }
    }
}

/// A jointly nilpotent d-tuple: strictly upper-triangular random blocks
/// rescaled so the block row has operator norm 1. For k = 1 the only
/// nilpotent point is zero, and that degenerate point is what is returned.
pub fn gen_nilpotent_point(seed: u64, k: usize, d: usize) -> Result<OperatorPoint> {
    if k == 0 || d == 0 {
        return Err(Error::ShapeMismatch("k and d must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if k == 1 {
        return OperatorPoint::new(vec![CMatrix::zeros(1, 1); d]);
    }
    loop {
        let blocks: Vec<CMatrix> = (0..d)
            .map(|_| {
                let g = gaussian_matrix(&mut rng, k, k);
                CMatrix::from_fn(k, k, |i, j| if j > i { g[(i, j)] } else { c(0.0, 0.0) })
            })
            .collect();
        let point = OperatorPoint::new(blocks)?;
        let norm = point.row_norm();
        if norm == 0.0 {
            continue;
        }
        let scaled: Vec<CMatrix> =
            point.blocks().iter().map(|b| b * c(1.0 / norm, 0.0)).collect();
        return OperatorPoint::new(scaled);
    }
}

/// A Blaschke product of the given degree (at most 4): zeros uniform in
/// the disc of radius 0.9, a uniform unimodular front factor, and all
/// cascade parameters zero.
pub fn gen_blaschke(seed: u64, degree: usize) -> Result<SchurFn> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen_blaschke_with(&mut rng, degree)
}

fn gen_blaschke_with(rng: &mut ChaCha8Rng, degree: usize) -> Result<SchurFn> {
    if degree > 4 {
        return Err(Error::InvalidParameter(format!(
            "Blaschke generator caps degree at 4, got {degree}"
        )));
    }
    let zeros: Vec<Complex64> = (0..degree).map(|_| disc_sample(rng, 0.9)).collect();
    let terminal = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * rng.random::<f64>());
    SchurFn::from_cascade(vec![c(0.0, 0.0); degree], zeros, terminal)
}

/// Point style for feasible-instance generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibleMode {
    /// Strict contractions with row norm in [0.3, 0.9].
    Interior,
    /// Jointly nilpotent points with row norm 1 (boundary-type data).
    Nilpotent,
    /// A random blend of the two styles per point.
    Mixed,
}

impl FeasibleMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            FeasibleMode::Interior => "interior",
            FeasibleMode::Nilpotent => "nilpotent",
            FeasibleMode::Mixed => "mixed",
        }
    }
}

fn interior_point(rng: &mut ChaCha8Rng, k: usize) -> Result<OperatorPoint> {
    let radius = 0.3 + 0.6 * rng.random::<f64>();
    loop {
        let g = gaussian_matrix(rng, k, k);
        let norm = kernel::operator_norm(&g)?;
        if norm > 0.0 {
            return OperatorPoint::new(vec![g * c(radius / norm, 0.0)]);
        }
    }
}

fn nilpotent_point_with(rng: &mut ChaCha8Rng, k: usize) -> Result<OperatorPoint> {
    // k = 1 admits no nonzero nilpotent and the zero point can only be
    // used once per instance, so fall back to interior draws there.
    if k == 1 {
        return interior_point(rng, 1);
    }
    loop {
        let g = gaussian_matrix(rng, k, k);
        let strict = CMatrix::from_fn(k, k, |i, j| if j > i { g[(i, j)] } else { c(0.0, 0.0) });
        let point = OperatorPoint::new(vec![strict])?;
        let norm = point.row_norm();
        if norm == 0.0 {
            continue;
        }
        return OperatorPoint::new(vec![point.block(0) * c(1.0 / norm, 0.0)]);
    }
}

/// A feasible instance made by evaluating a random Blaschke product at
/// random points: `W_i = f(Z_i)` always admits the interpolant `f`, so
/// domination holds by construction. Returns the instance together with
/// the function that witnesses feasibility.
pub fn gen_feasible_instance(
    seed: u64,
    n: usize,
    k: usize,
    mode: FeasibleMode,
) -> Result<(ProblemInstance, SchurFn)> {
    if n == 0 || k == 0 {
        return Err(Error::ShapeMismatch("n and k must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let degree = rng.random_range(1..=4);
    let f = gen_blaschke_with(&mut rng, degree)?;
    let mut points: Vec<OperatorPoint> = Vec::with_capacity(n);
    while points.len() < n {
        let nilpotent = match mode {
            FeasibleMode::Interior => false,
            FeasibleMode::Nilpotent => true,
            FeasibleMode::Mixed => rng.random::<bool>(),
        };
        let cand = if nilpotent {
            nilpotent_point_with(&mut rng, k)?
        } else {
            interior_point(&mut rng, k)?
        };
        if !points.contains(&cand) {
            points.push(cand);
        }
    }
    let targets = points
        .iter()
        .map(|p| f.eval_operator(p.block(0)))
        .collect::<Result<Vec<_>>>()?;
    let instance = ProblemInstance {
        d: 1,
        k,
        n,
        points,
        targets,
        tolerances: ToleranceConfig::default(),
        seed,
        note: format!("feasible({}, degree {degree})", mode.as_str()),
    };
    instance.validate()?;
    Ok((instance, f))
}

/// A scalar instance: distinct nodes in the 0.9-disc, targets in the
/// 1.2-disc (so both feasible and infeasible data occur).
pub fn gen_scalar_instance(seed: u64, max_n: usize) -> Result<ProblemInstance> {
    if max_n == 0 {
        return Err(Error::InvalidParameter("max_n must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_n);
    let mut zs: Vec<Complex64> = Vec::with_capacity(n);
    while zs.len() < n {
        let cand = disc_sample(&mut rng, 0.9);
        if !zs.contains(&cand) {
            zs.push(cand);
        }
    }
    let points = zs.iter().map(|&z| OperatorPoint::scalar(z)).collect();
    let targets = (0..n)
        .map(|_| CMatrix::from_element(1, 1, disc_sample(&mut rng, 1.2)))
        .collect();
    let instance = ProblemInstance {
        d: 1,
        k: 1,
        n,
        points,
        targets,
        tolerances: ToleranceConfig::default(),
        seed,
        note: format!("scalar(n={n})"),
    };
    instance.validate()?;
    Ok(instance)
}

/// An operator-valued instance with strict row contractions (row norms in
/// [0.3, 0.9]) and targets of operator norm in [0.3, 1.25].
pub fn gen_operator_instance(seed: u64, d: usize, k: usize, n: usize) -> Result<ProblemInstance> {
    if d == 0 || k == 0 || n == 0 {
        return Err(Error::ShapeMismatch("d, k and n must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<OperatorPoint> = Vec::with_capacity(n);
    while points.len() < n {
        let radius = 0.3 + 0.6 * rng.random::<f64>();
        let blocks: Vec<CMatrix> = (0..d).map(|_| gaussian_matrix(&mut rng, k, k)).collect();
        let raw = OperatorPoint::new(blocks)?;
        let norm = raw.row_norm();
        if norm == 0.0 {
            continue;
        }
        let scaled = OperatorPoint::new(
            raw.blocks().iter().map(|b| b * c(radius / norm, 0.0)).collect(),
        )?;
        if !points.contains(&scaled) {
            points.push(scaled);
        }
    }
    let mut targets = Vec::with_capacity(n);
    while targets.len() < n {
        let norm_target = 0.3 + 0.95 * rng.random::<f64>();
        let g = gaussian_matrix(&mut rng, k, k);
        let norm = kernel::operator_norm(&g)?;
        if norm == 0.0 {
            continue;
        }
        targets.push(g * c(norm_target / norm, 0.0));
    }
    let instance = ProblemInstance {
        d,
        k,
        n,
        points,
        targets,
        tolerances: ToleranceConfig::default(),
        seed,
        note: format!("operator(d={d}, k={k}, n={n})"),
    };
    instance.validate()?;
    Ok(instance)
}

/// A jet whose Toeplitz norm is uniform in [0.3, 1.7] but kept at least
/// 1e-4 away from the feasibility knife edge at norm 1.
pub fn gen_jet(seed: u64, max_len: usize) -> Result<Vec<Complex64>> {
    if max_len == 0 {
        return Err(Error::InvalidParameter("max_len must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.random_range(1..=max_len);
    loop {
        let jet: Vec<Complex64> = (0..len)
            .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = kernel::operator_norm(&toeplitz_from_jet(&jet))?;
        if norm == 0.0 {
            continue;
        }
        let target = 0.3 + 1.4 * rng.random::<f64>();
        if (target - 1.0).abs() <= 1e-4 {
            continue;
        }
        return Ok(jet.into_iter().map(|x| x * c(target / norm, 0.0)).collect());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::cr;
    use crate::lyapunov::{domination_exact, DominationStatus};

    #[test]
    fn instance_round_trip_is_byte_identical() {
        let instance = gen_operator_instance(17, 2, 2, 3).unwrap();
        let text = serialize_instance(&instance).unwrap();
        let back = deserialize_instance(&text).unwrap();
        assert_eq!(back, instance);
        assert_eq!(serialize_instance(&back).unwrap(), text);
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = deserialize_instance("{ \"version\": ").unwrap_err();
        match err {
            Error::Parse(msg) => assert!(msg.contains("line"), "{msg}"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn version_is_checked() {
        let instance = gen_scalar_instance(3, 2).unwrap();
        let text = serialize_instance(&instance).unwrap();
        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["version"] = "pickwell-0".into();
        let err = deserialize_instance(&value.to_string()).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let instance = gen_scalar_instance(4, 2).unwrap();
        let text = serialize_instance(&instance).unwrap();
        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["comment"] = "extra".into();
        assert!(matches!(
            deserialize_instance(&value.to_string()),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn ragged_targets_are_rejected() {
        let instance = gen_scalar_instance(5, 2).unwrap();
        let text = serialize_instance(&instance).unwrap();
        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["targets"][0][0] = serde_json::json!([[0.1, 0.0], [0.2, 0.0]]);
        assert!(matches!(
            deserialize_instance(&value.to_string()),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn duplicate_points_are_rejected() {
        let instance = gen_scalar_instance(6, 3).unwrap();
        if instance.n < 2 {
            return;
        }
        let text = serialize_instance(&instance).unwrap();
        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["points"][1] = value["points"][0].clone();
        assert!(matches!(
            deserialize_instance(&value.to_string()),
            Err(Error::DuplicatePoints { .. })
        ));
    }

    #[test]
    fn generators_are_deterministic() {
        let a = serialize_instance(&gen_operator_instance(9, 2, 3, 2).unwrap()).unwrap();
        let b = serialize_instance(&gen_operator_instance(9, 2, 3, 2).unwrap()).unwrap();
        let c = serialize_instance(&gen_operator_instance(10, 2, 3, 2).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn contraction_norm_is_exact() {
        let a = gen_strict_contraction(21, 3, 0.7).unwrap();
        let norm = kernel::operator_norm(&a).unwrap();
        assert!((norm - 0.7).abs() <= 1e-12);
        assert!(gen_strict_contraction(21, 3, 1.0).is_err());
    }

    #[test]
    fn nilpotent_point_sits_on_the_boundary() {
        let p = gen_nilpotent_point(22, 3, 2).unwrap();
        assert!(p.is_jointly_nilpotent());
        assert!((p.row_norm() - 1.0).abs() <= 1e-12);
        let z = gen_nilpotent_point(23, 1, 2).unwrap();
        assert_eq!(z.row_norm(), 0.0);
    }

    #[test]
    fn blaschke_products_are_inner() {
        for seed in [1u64, 2, 3] {
            let f = gen_blaschke(seed, 3).unwrap();
            assert!((f.boundary_sup_norm() - 1.0).abs() <= 1e-9);
            assert_eq!(f.degree(), 3);
        }
        assert!(gen_blaschke(1, 5).is_err());
    }

    #[test]
    fn feasible_instances_dominate() {
        for (seed, mode) in [
            (31, FeasibleMode::Interior),
            (32, FeasibleMode::Nilpotent),
            (33, FeasibleMode::Mixed),
        ] {
            let (instance, f) = gen_feasible_instance(seed, 2, 2, mode).unwrap();
            for (p, w) in instance.points.iter().zip(instance.targets.iter()) {
                let expect = f.eval_operator(p.block(0)).unwrap();
                assert!(kernel::fro_norm(&(&expect - w)) <= 1e-12);
            }
            let verdict =
                domination_exact(&instance.points, &instance.targets, &instance.tolerances)
                    .unwrap();
            assert_eq!(verdict.status, DominationStatus::Dominates, "{mode:?}");
        }
    }

    #[test]
    fn scalar_instances_respect_bounds() {
        for seed in 0..10u64 {
            let instance = gen_scalar_instance(seed, 5).unwrap();
            assert!(instance.n >= 1 && instance.n <= 5);
            for p in &instance.points {
                assert!(p.block(0)[(0, 0)].norm() <= 0.9 + 1e-12);
            }
            for w in &instance.targets {
                assert!(w[(0, 0)].norm() <= 1.2 + 1e-12);
            }
        }
    }

    #[test]
    fn jets_avoid_the_knife_edge() {
        for seed in 0..10u64 {
            let jet = gen_jet(seed, 6).unwrap();
            assert!(!jet.is_empty() && jet.len() <= 6);
            let norm = kernel::operator_norm(&toeplitz_from_jet(&jet)).unwrap();
            assert!(norm >= 0.3 - 1e-9 && norm <= 1.7 + 1e-9);
            assert!((norm - 1.0).abs() > 9e-5);
        }
    }

    #[test]
    fn function_documents_round_trip() {
        let out = crate::pickclassic::schur_interpolate(
            &[cr(0.0), cr(0.3)],
            &[cr(0.2), cr(-0.1)],
            &ToleranceConfig::default(),
        )
        .unwrap();
        let f = out.function().unwrap().clone();
        let text = serialize_function(&f).unwrap();
        let back = deserialize_function(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(serialize_function(&back).unwrap(), text);
    }

    #[test]
    fn tampered_function_documents_are_rejected() {
        let f = gen_blaschke(40, 2).unwrap();
        let text = serialize_function(&f).unwrap();
        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["numerator"][0] = serde_json::json!([0.25, 0.0]);
        assert!(matches!(
            deserialize_function(&value.to_string()),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn matrix_documents_round_trip() {
        let a = gen_strict_contraction(50, 2, 0.5).unwrap();
        let text = serialize_matrix(&a).unwrap();
        let back = deserialize_matrix(&text).unwrap();
        assert_eq!(back, a);
        assert_eq!(serialize_matrix(&back).unwrap(), text);
    }
}
