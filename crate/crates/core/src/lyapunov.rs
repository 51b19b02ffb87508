//! Lyapunov domination between completely positive maps, decided through
//! the Pick operator `P = (I − Φ_W)(I − Φ_Z)⁻¹`.
//!
//! Two decision routes are provided and kept deliberately independent:
//!
//! * [`domination_exact`] tests complete positivity of `P` through its Choi
//!   matrix when the point map is a strict contraction in spectral radius.
//!   A violation is certified by a pure superharmonic witness, the Choi
//!   matrix of the resolvent `(I − Φ_Z)⁻¹`.
//! * [`domination_randomized`] samples finite Gramian inequalities
//!   `(W_{l(i)} G_ij W_{l(j)}*) ≤ (G_ij)` over random labels and seed
//!   factors. It can refute domination at any spectral radius (nilpotent
//!   points included) but never certifies it.
//!
//! [`verify_witness`] rechecks either witness kind along routes that share
//! no linear-algebra plumbing with the code that produced it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::cpmap::{matrix_unit, CpMap, OperatorPoint, Superoperator};
use crate::error::{Error, Result};
use crate::kernel::{self, CMatrix, PsdVerdict, ToleranceConfig};
use crate::superharmonic::{cross_gramian, cross_gramian_words, neumann_series, BlockHermitian, GramianFactor};

/// Spectral-radius margin below 1 required before the resolvent route is
/// attempted.
const RESOLVENT_GAP: f64 = 1e-12;

/// Largest block count drawn per randomized Gramian sample.
const MAX_SAMPLE_BLOCKS: usize = 4;

/// Truncation tolerance for Gramian factors built inside the sampler.
const SAMPLE_GRAMIAN_TOL: f64 = 1e-12;

fn validate_problem(points: &[OperatorPoint], targets: &[CMatrix]) -> Result<(usize, usize)> {
    if points.is_empty() {
        return Err(Error::ShapeMismatch("need at least one point".into()));
    }
    if targets.len() != points.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} points against {} targets",
            points.len(),
            targets.len()
        )));
    }
    let d = points[0].d();
    let k = points[0].k();
    for (i, p) in points.iter().enumerate() {
        if p.d() != d || p.k() != k {
            return Err(Error::ShapeMismatch(format!(
                "point {i} has shape (d, k) = ({}, {}), expected ({d}, {k})",
                p.d(),
                p.k()
            )));
        }
    }
    for (i, w) in targets.iter().enumerate() {
        if w.nrows() != k || w.ncols() != k {
            return Err(Error::ShapeMismatch(format!(
                "target {i} is {}x{}, expected {k}x{k}",
                w.nrows(),
                w.ncols()
            )));
        }
        if !kernel::all_finite(w) {
            return Err(Error::NonFinite);
        }
    }
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i] == points[j] {
                return Err(Error::DuplicatePoints { i, j });
            }
        }
    }
    Ok((d, k))
}

/// The Pick operator of an interpolation problem, with the resolvent of the
/// point map cached for witness extraction.
#[derive(Debug, Clone)]
pub struct PickOperator {
    points: Vec<OperatorPoint>,
    targets: Vec<CMatrix>,
    phi_z: CpMap,
    phi_w: CpMap,
    radius: f64,
    resolvent: CMatrix,
    operator: Superoperator,
}

/// Builds `P = (I − Φ_W)(I − Φ_Z)⁻¹` on the n·k dimensional carrier.
///
/// Requires the spectral radius of Φ_Z to sit strictly below 1 so the
/// resolvent exists as a convergent series; otherwise fails with
/// [`Error::SteinSingular`]. The assembled operator is checked against the
/// defining identity `P(I − Φ_Z) = I − Φ_W` before being returned.
pub fn pick_operator(points: &[OperatorPoint], targets: &[CMatrix]) -> Result<PickOperator> {
    validate_problem(points, targets)?;
    let phi_z = CpMap::phi_from_points(points)?;
    let phi_w = CpMap::phi_from_targets(targets)?;
    let s_z = phi_z.superoperator();
    let s_w = phi_w.superoperator();
    let radius = kernel::spectral_radius(s_z.matrix())?;
    if radius >= 1.0 - RESOLVENT_GAP {
        return Err(Error::SteinSingular { radius });
    }
    let dim = phi_z.dim();
    let eye = CMatrix::identity(dim * dim, dim * dim);
    let a = &eye - s_z.matrix();
    let resolvent = kernel::solve_linear(&a, &eye)?;
    let lhs = &eye - s_w.matrix();
    let p = &lhs * &resolvent;
    let defect = kernel::fro_norm(&(&p * &a - &lhs));
    if defect > 1e-10 * kernel::fro_norm(&lhs).max(1.0) {
        return Err(Error::VerificationFailed(format!(
            "Pick operator identity residual {defect:.3e}"
        )));
    }
    let operator = Superoperator::new(dim, p)?;
    Ok(PickOperator {
        points: points.to_vec(),
        targets: targets.to_vec(),
        phi_z,
        phi_w,
        radius,
        resolvent,
        operator,
    })
}

impl PickOperator {
    pub fn points(&self) -> &[OperatorPoint] {
        &self.points
    }

    pub fn targets(&self) -> &[CMatrix] {
        &self.targets
    }

    pub fn phi_z(&self) -> &CpMap {
        &self.phi_z
    }

    pub fn phi_w(&self) -> &CpMap {
        &self.phi_w
    }

    /// Spectral radius of the point map Φ_Z.
    pub fn spectral_radius(&self) -> f64 {
        self.radius
    }

    /// Carrier dimension n·k.
    pub fn dim(&self) -> usize {
        self.phi_z.dim()
    }

    pub fn superoperator(&self) -> &Superoperator {
        &self.operator
    }

    pub fn apply(&self, a: &CMatrix) -> Result<CMatrix> {
        self.operator.apply(a)
    }

    /// Choi matrix of P.
    pub fn choi(&self) -> CMatrix {
        self.operator.choi()
    }

    /// Choi matrix of the resolvent `(I − Φ_Z)⁻¹`: positive, and pure
    /// superharmonic for the promoted point map. This is the violation
    /// witness when the Choi matrix of P fails to be positive.
    pub fn resolvent_choi(&self) -> CMatrix {
        let dim = self.dim();
        let mut out = CMatrix::zeros(dim * dim, dim * dim);
        for q in 0..dim {
            for p in 0..dim {
                let col = self.resolvent.column(q * dim + p);
                for r in 0..dim {
                    for s in 0..dim {
                        out[(p * dim + r, q * dim + s)] = col[s * dim + r];
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominationStatus {
    Dominates,
    Violated,
    Undecided,
}

impl DominationStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            DominationStatus::Dominates => "dominates",
            DominationStatus::Violated => "violated",
            DominationStatus::Undecided => "undecided",
        }
    }
}

/// Certificate attached to a `Violated` verdict.
#[derive(Debug, Clone)]
pub enum DominationWitness {
    /// A pure superharmonic element at promotion level `level` whose
    /// Φ_W-decrement has a negative eigenvalue of size `margin`.
    PureSuperharmonic { level: usize, q: BlockHermitian, margin: f64 },
    /// A finite Gramian inequality violated by the sampled labels and seed
    /// factors.
    Gramian { labels: Vec<usize>, factors: Vec<GramianFactor>, margin: f64 },
}

impl DominationWitness {
    pub fn margin(&self) -> f64 {
        match self {
            DominationWitness::PureSuperharmonic { margin, .. } => *margin,
            DominationWitness::Gramian { margin, .. } => *margin,
        }
    }
}

/// Numbers backing a verdict, common to both routes.
#[derive(Debug, Clone)]
pub struct DominationCertificates {
    /// Smallest Choi eigenvalue of P when the exact route ran.
    pub choi_min_eigenvalue: Option<f64>,
    /// Spectral radius of the point map.
    pub spectral_radius: f64,
    /// Randomized samples examined.
    pub samples_run: usize,
    /// Smallest sampled inequality margin, when sampling ran.
    pub min_sample_margin: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct DominationVerdict {
    pub status: DominationStatus,
    pub witness: Option<DominationWitness>,
    pub certificates: DominationCertificates,
}

/// Decides domination through the Choi matrix of the Pick operator.
///
/// Positive semidefiniteness of the Choi matrix is equivalent to complete
/// positivity of P, hence to Lyapunov domination. On violation the
/// resolvent Choi matrix is returned as a pure superharmonic witness at
/// promotion level n·k with the Choi floor as margin.
pub fn domination_exact(
    points: &[OperatorPoint],
    targets: &[CMatrix],
    tol: &ToleranceConfig,
) -> Result<DominationVerdict> {
    let op = pick_operator(points, targets)?;
    let choi = op.choi();
    let verdict = kernel::psd_verdict(&choi, tol)?;
    let min = verdict.min_eigenvalue();
    let certificates = DominationCertificates {
        choi_min_eigenvalue: Some(min),
        spectral_radius: op.spectral_radius(),
        samples_run: 0,
        min_sample_margin: None,
    };
    if verdict.is_psd() {
        return Ok(DominationVerdict {
            status: DominationStatus::Dominates,
            witness: None,
            certificates,
        });
    }
    let dim = op.dim();
    let q = BlockHermitian::new(dim, dim, op.resolvent_choi())?;
    Ok(DominationVerdict {
        status: DominationStatus::Violated,
        witness: Some(DominationWitness::PureSuperharmonic { level: dim, q, margin: min }),
        certificates,
    })
}

/// Applies a map blockwise to an r×r block matrix, realising the promotion
/// `id_r ⊗ Φ` without materialising promoted Kraus or superoperator data.
fn apply_blockwise(phi: &CpMap, x: &CMatrix, blocks: usize) -> Result<CMatrix> {
    let n = phi.dim();
    let mut out = CMatrix::zeros(blocks * n, blocks * n);
    for u in 0..blocks {
        for v in 0..blocks {
            let b = x.view((u * n, v * n), (n, n)).into_owned();
            out.view_mut((u * n, v * n), (n, n)).copy_from(&phi.apply(&b)?);
        }
    }
    Ok(out)
}

/// Tests one finite Gramian inequality: assembles the block matrix with
/// entries `G_ij − W_{l(i)} G_ij W_{l(j)}*` over the labelled factors and
/// reports its positivity. Domination forces positivity for every choice
/// of labels and seeds; a single negative eigenvalue refutes it.
pub fn corollary_inequality(
    points: &[OperatorPoint],
    targets: &[CMatrix],
    labels: &[usize],
    factors: &[GramianFactor],
    tol: &ToleranceConfig,
) -> Result<PsdVerdict> {
    let (_, k) = validate_problem(points, targets)?;
    if labels.is_empty() || labels.len() != factors.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} labels against {} factors",
            labels.len(),
            factors.len()
        )));
    }
    let width = factors[0].seed().ncols();
    for (i, (&l, f)) in labels.iter().zip(factors.iter()).enumerate() {
        if l >= points.len() {
            return Err(Error::InvalidParameter(format!(
                "label {i} points at {l}, but only {} points exist",
                points.len()
            )));
        }
        if f.point() != &points[l] {
            return Err(Error::InvalidParameter(format!(
                "factor {i} was built at a different point than label {l}"
            )));
        }
        if f.seed().ncols() != width {
            return Err(Error::ShapeMismatch(format!(
                "factor {i} has seed width {}, expected {width}",
                f.seed().ncols()
            )));
        }
    }
    let m = labels.len();
    let mut diff = CMatrix::zeros(m * k, m * k);
    for i in 0..m {
        for j in i..m {
            let g = cross_gramian(&factors[i], &factors[j])?;
            let block = &g - &targets[labels[i]] * &g * targets[labels[j]].adjoint();
            diff.view_mut((i * k, j * k), (k, k)).copy_from(&block);
            if j > i {
                diff.view_mut((j * k, i * k), (k, k)).copy_from(&block.adjoint());
            }
        }
    }
    kernel::psd_verdict(&diff, tol)
}

/// Splits one user seed into independent per-sample streams so results do
/// not depend on evaluation order or thread count.
fn sample_seed(seed: u64, index: u64) -> u64 {
    let mut x = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

struct SampleOutcome {
    margin: f64,
    violated: bool,
    labels: Vec<usize>,
    factors: Vec<GramianFactor>,
}

fn run_sample(
    points: &[OperatorPoint],
    targets: &[CMatrix],
    k: usize,
    seed: u64,
    index: usize,
    tol: &ToleranceConfig,
) -> Result<SampleOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed, index as u64));
    let m = rng.random_range(1..=MAX_SAMPLE_BLOCKS);
    let labels: Vec<usize> = (0..m).map(|_| rng.random_range(0..points.len())).collect();
    let width = rng.random_range(1..=k);
    let mut factors = Vec::with_capacity(m);
    for &l in &labels {
        let seed_mat = CMatrix::from_fn(k, width, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        factors.push(GramianFactor::with_tolerance(
            points[l].clone(),
            seed_mat,
            SAMPLE_GRAMIAN_TOL,
        )?);
    }
    let verdict = corollary_inequality(points, targets, &labels, &factors, tol)?;
    Ok(SampleOutcome {
        margin: verdict.min_eigenvalue(),
        violated: !verdict.is_psd(),
        labels,
        factors,
    })
}

/// Randomized refutation by sampled Gramian inequalities, single-threaded.
///
/// Runs up to `samples` draws; stops at the first violated inequality and
/// returns it as a witness. Otherwise the verdict is `Undecided`: sampling
/// gathers evidence but cannot certify domination. Works at any spectral
/// radius for which Gramians exist (strict contractions and jointly
/// nilpotent points).
pub fn domination_randomized(
    points: &[OperatorPoint],
    targets: &[CMatrix],
    samples: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<DominationVerdict> {
    domination_randomized_jobs(points, targets, samples, seed, tol, 1)
}

/// [`domination_randomized`] with `jobs` worker threads. Per-sample seeds
/// are derived from the sample index, and outcomes are folded in index
/// order, so the verdict is identical for every job count.
pub fn domination_randomized_jobs(
    points: &[OperatorPoint],
    targets: &[CMatrix],
    samples: usize,
    seed: u64,
    tol: &ToleranceConfig,
    jobs: usize,
) -> Result<DominationVerdict> {
    let (_, k) = validate_problem(points, targets)?;
    let phi_z = CpMap::phi_from_points(points)?;
    let radius = kernel::spectral_radius(phi_z.superoperator().matrix())?;

    let mut min_margin: Option<f64> = None;
    let mut fold = |index: usize,
                    outcome: Result<SampleOutcome>|
     -> Result<Option<DominationVerdict>> {
        let s = outcome?;
        min_margin = Some(min_margin.map_or(s.margin, |m: f64| m.min(s.margin)));
        if s.violated {
            return Ok(Some(DominationVerdict {
                status: DominationStatus::Violated,
                witness: Some(DominationWitness::Gramian {
                    labels: s.labels,
                    factors: s.factors,
                    margin: s.margin,
                }),
                certificates: DominationCertificates {
                    choi_min_eigenvalue: None,
                    spectral_radius: radius,
                    samples_run: index + 1,
                    min_sample_margin: min_margin,
                },
            }));
        }
        Ok(None)
    };

    if jobs <= 1 || samples <= 1 {
        for index in 0..samples {
            let outcome = run_sample(points, targets, k, seed, index, tol);
            if let Some(verdict) = fold(index, outcome)? {
                return Ok(verdict);
            }
        }
    } else {
        let mut results: Vec<Option<Result<SampleOutcome>>> =
            (0..samples).map(|_| None).collect();
        let chunk = samples.div_ceil(jobs).max(1);
        std::thread::scope(|scope| {
            for (t, slice) in results.chunks_mut(chunk).enumerate() {
                let base = t * chunk;
                scope.spawn(move || {
                    for (off, slot) in slice.iter_mut().enumerate() {
                        *slot = Some(run_sample(points, targets, k, seed, base + off, tol));
                    }
                });
            }
        });
        for (index, slot) in results.into_iter().enumerate() {
            let outcome = slot.expect("every sample slot is filled");
            if let Some(verdict) = fold(index, outcome)? {
                return Ok(verdict);
            }
        }
    }

    Ok(DominationVerdict {
        status: DominationStatus::Undecided,
        witness: None,
        certificates: DominationCertificates {
            choi_min_eigenvalue: None,
            spectral_radius: radius,
            samples_run: samples,
            min_sample_margin: min_margin,
        },
    })
}

/// Recomputes a violation witness along independent routes and returns the
/// reverified margin.
///
/// Pure superharmonic witnesses are rebuilt entrywise from Neumann series
/// of Kraus applications (no LU factorisation involved), checked for
/// positivity, superharmonicity under the promoted point map, and purity,
/// then re-measured against the promoted target map. Gramian witnesses are
/// rebuilt through truncated word sums instead of Stein solves. In both
/// cases the stored margin must match the recomputed one.
pub fn verify_witness(
    points: &[OperatorPoint],
    targets: &[CMatrix],
    witness: &DominationWitness,
    tol: &ToleranceConfig,
) -> Result<f64> {
    let (_, k) = validate_problem(points, targets)?;
    match witness {
        DominationWitness::PureSuperharmonic { level, q, margin } => {
            let phi_z = CpMap::phi_from_points(points)?;
            let phi_w = CpMap::phi_from_targets(targets)?;
            let dim = phi_z.dim();
            if *level != dim || q.block_count() != dim || q.block_size() != dim {
                return Err(Error::InvalidParameter(format!(
                    "witness level {level} with {}x{} blocks does not match carrier dimension {dim}",
                    q.block_count(),
                    q.block_size()
                )));
            }
            let stored = q.data();

            let mut rebuilt = CMatrix::zeros(dim * dim, dim * dim);
            for p in 0..dim {
                for col in 0..dim {
                    let unit = matrix_unit(dim, p, col);
                    let series = neumann_series(&phi_z, &unit, 1e-12)?;
                    rebuilt.view_mut((p * dim, col * dim), (dim, dim)).copy_from(&series);
                }
            }
            let scale = kernel::fro_norm(stored).max(1.0);
            let drift = kernel::fro_norm(&(&rebuilt - stored));
            if drift > 1e-8 * scale {
                return Err(Error::VerificationFailed(format!(
                    "witness differs from independently rebuilt resolvent by {drift:.3e}"
                )));
            }

            let positivity = kernel::psd_verdict(stored, tol)?;
            if !positivity.is_psd() {
                return Err(Error::VerificationFailed(format!(
                    "witness is not positive (floor {:.3e})",
                    positivity.min_eigenvalue()
                )));
            }
            let decrement = stored - apply_blockwise(&phi_z, stored, dim)?;
            let superharmonic = kernel::psd_verdict(&decrement, tol)?;
            if !superharmonic.is_psd() {
                return Err(Error::VerificationFailed(format!(
                    "witness is not superharmonic (floor {:.3e})",
                    superharmonic.min_eigenvalue()
                )));
            }
            let radius = kernel::spectral_radius(phi_z.superoperator().matrix())?;
            if radius >= 1.0 {
                return Err(Error::VerificationFailed(format!(
                    "purity not certified at spectral radius {radius:.6}"
                )));
            }

            let dominated = stored - apply_blockwise(&phi_w, stored, dim)?;
            let eig = kernel::hermitian_eig(&dominated, tol)?;
            let recomputed = eig.values[0];
            if (recomputed - margin).abs() > 1e-8 * margin.abs().max(1.0) {
                return Err(Error::VerificationFailed(format!(
                    "stored margin {margin:.6e} disagrees with recomputed {recomputed:.6e}"
                )));
            }
            Ok(recomputed)
        }
        DominationWitness::Gramian { labels, factors, margin } => {
            if labels.is_empty() || labels.len() != factors.len() {
                return Err(Error::ShapeMismatch(format!(
                    "{} labels against {} factors",
                    labels.len(),
                    factors.len()
                )));
            }
            for (i, (&l, f)) in labels.iter().zip(factors.iter()).enumerate() {
                if l >= points.len() {
                    return Err(Error::InvalidParameter(format!(
                        "label {i} points at {l}, but only {} points exist",
                        points.len()
                    )));
                }
                if f.point() != &points[l] {
                    return Err(Error::InvalidParameter(format!(
                        "factor {i} was built at a different point than label {l}"
                    )));
                }
            }
            let m = labels.len();
            let mut diff = CMatrix::zeros(m * k, m * k);
            for i in 0..m {
                for j in i..m {
                    let g = cross_gramian_words(&factors[i], &factors[j], 1e-12)?;
                    let block = &g - &targets[labels[i]] * &g * targets[labels[j]].adjoint();
                    diff.view_mut((i * k, j * k), (k, k)).copy_from(&block);
                    if j > i {
                        diff.view_mut((j * k, i * k), (k, k)).copy_from(&block.adjoint());
                    }
                }
            }
            let eig = kernel::hermitian_eig(&diff, tol)?;
            let recomputed = eig.values[0];
            if (recomputed - margin).abs() > 1e-6 * margin.abs().max(1.0) {
                return Err(Error::VerificationFailed(format!(
                    "stored margin {margin:.6e} disagrees with recomputed {recomputed:.6e}"
                )));
            }
            Ok(recomputed)
        }
    }
}
