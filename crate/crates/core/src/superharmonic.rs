//! Superharmonic elements for CP maps: Stein-equation solving, Neumann
//! series, intertwiner Gramians, and purity verdicts.
//!
//! An element `a ≥ 0` with `Φ(a) ≤ a` is superharmonic for Φ, and pure when
//! `Φⁿ(a) → 0`. When the Neumann series of Φ converges, the pure
//! superharmonic elements are exactly the solutions of the Stein equation
//! `Q − Φ(Q) = R` with PSD right-hand side, and the Gramians
//! `Q = Σ_w Z_w B B* Z_w*` realize their factorized form. The two
//! constructions are deliberately independent algorithms (dense linear
//! solve vs. word-sum iteration) so each can serve as the other's oracle.

use crate::cpmap::{CpMap, OperatorPoint};
use crate::error::{Error, Result};
use crate::kernel::{
    self, all_finite, fro_norm, hermitize, psd_verdict, unvec_cm, vec_cm, CMatrix, PsdVerdict,
    ToleranceConfig,
};

/// Iteration cap for series summation; generous for the spectral radii the
/// generators produce, and an honest `IterationLimit` beyond it.
const MAX_SERIES_TERMS: usize = 50_000;

/// Word-length cap for truncated Gramians.
const MAX_WORD_LENGTH: usize = 20_000;

/// Carrier dimension up to which purity tests afford a full superoperator
/// spectral radius; above it only the iterative decay certificate is used.
const RADIUS_CERTIFICATE_DIM_CAP: usize = 16;

/// A Hermitian element of M_m(M_k), the ambient algebra of the CP maps.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockHermitian {
    m: usize,
    k: usize,
    data: CMatrix,
}

impl BlockHermitian {
    /// Wraps a Hermitian (mk)×(mk) matrix; the input must be Hermitian
    /// within `1e-10·max(1,‖A‖)` and is exactly Hermitized for storage.
    pub fn new(m: usize, k: usize, data: CMatrix) -> Result<Self> {
        let dim = m * k;
        if data.nrows() != dim || data.ncols() != dim {
            return Err(Error::ShapeMismatch(format!(
                "BlockHermitian: expected {dim}x{dim}, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        if !all_finite(&data) {
            return Err(Error::NonFinite);
        }
        let defect = kernel::hermitian_defect(&data);
        let gate = 1e-10 * fro_norm(&data).max(1.0);
        if defect > gate {
            return Err(Error::NotHermitian { deviation: defect, tol: gate });
        }
        Ok(Self { m, k, data: hermitize(&data) })
    }

    pub fn identity(m: usize, k: usize) -> Self {
        let dim = m * k;
        Self { m, k, data: CMatrix::identity(dim, dim) }
    }

    pub fn zero(m: usize, k: usize) -> Self {
        let dim = m * k;
        Self { m, k, data: CMatrix::zeros(dim, dim) }
    }

    pub fn block_count(&self) -> usize {
        self.m
    }

    pub fn block_size(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.m * self.k
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn block(&self, i: usize, j: usize) -> CMatrix {
        self.data.view((i * self.k, j * self.k), (self.k, self.k)).into_owned()
    }
}

fn check_map_element(phi: &CpMap, dim: usize, what: &str) -> Result<()> {
    if phi.dim() != dim {
        return Err(Error::ShapeMismatch(format!(
            "{what}: map acts on dimension {}, element has dimension {dim}",
            phi.dim()
        )));
    }
    Ok(())
}

/// Solves the Stein equation `Q − Φ(Q) = R` by a dense solve of the
/// vectorized system `(I − S) q = r`.
///
/// Requires 1 not to be an eigenvalue of the superoperator S (checked); the
/// spectral radius is reported either way. When additionally the radius is
/// below one and R is PSD, the solution is PSD and pure superharmonic.
pub fn stein_solve(phi: &CpMap, r: &BlockHermitian) -> Result<BlockHermitian> {
    check_map_element(phi, r.dim(), "stein_solve")?;
    let s = phi.superoperator();
    let eigs = kernel::eigenvalues(s.matrix())?;
    let radius = eigs.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    let unit_gap = eigs
        .iter()
        .map(|z| (z - num_complex::Complex64::new(1.0, 0.0)).norm())
        .fold(f64::INFINITY, f64::min);
    if unit_gap <= 1e-10 {
        return Err(Error::SteinSingular { radius });
    }
    let dim = r.dim();
    let a = CMatrix::identity(dim * dim, dim * dim) - s.matrix();
    let rhs = CMatrix::from_column_slice(dim * dim, 1, vec_cm(r.data()).as_slice());
    let q_vec = kernel::solve_linear(&a, &rhs)?;
    let q = hermitize(&unvec_cm(&q_vec.column(0).into_owned(), dim, dim));

    // Residual certified through the Kraus route, independent of the solve.
    let residual = fro_norm(&(&q - phi.apply(&q)? - r.data()));
    if residual > 1e-10 * fro_norm(&q).max(1.0) {
        return Err(Error::VerificationFailed(format!(
            "Stein residual {residual:.3e} exceeds tolerance"
        )));
    }
    BlockHermitian::new(r.block_count(), r.block_size(), q)
}

/// Partial sums of `Σ_n Φⁿ(R)` for a general (not necessarily Hermitian)
/// right-hand side. Stops once the geometric tail bound `ρᴺ‖R‖/(1−ρ)` and
/// the current term norm both fall below `tol`.
pub fn neumann_series(phi: &CpMap, r: &CMatrix, tol: f64) -> Result<CMatrix> {
    let dim = phi.dim();
    if r.nrows() != dim || r.ncols() != dim {
        return Err(Error::ShapeMismatch(format!(
            "neumann_series: input is {}x{}, map acts on {dim}x{dim}",
            r.nrows(),
            r.ncols()
        )));
    }
    let radius = kernel::spectral_radius(phi.superoperator().matrix())?;
    if radius >= 1.0 - 1e-12 {
        return Err(Error::NotConvergent { radius });
    }
    let r_norm = fro_norm(r);
    let mut acc = r.clone();
    let mut term = r.clone();
    let mut rho_pow = radius;
    for _ in 1..=MAX_SERIES_TERMS {
        let tail_bound = rho_pow * r_norm / (1.0 - radius);
        if tail_bound <= tol && fro_norm(&term) <= tol {
            return Ok(acc);
        }
        term = phi.apply(&term)?;
        acc += &term;
        rho_pow *= radius;
    }
    Err(Error::IterationLimit { iterations: MAX_SERIES_TERMS })
}

/// Hermitian wrapper around [`neumann_series`]; the independent cross-check
/// for [`stein_solve`].
pub fn neumann_sum(phi: &CpMap, r: &BlockHermitian, tol: f64) -> Result<BlockHermitian> {
    check_map_element(phi, r.dim(), "neumann_sum")?;
    let q = neumann_series(phi, r.data(), tol)?;
    BlockHermitian::new(r.block_count(), r.block_size(), hermitize(&q))
}

/// Truncation policy for Gramian word sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Finite sum, valid only for jointly nilpotent points where words die
    /// by length k; the Stein identity then holds exactly.
    Exact,
    /// Sum over words of length < N with the geometric tail bound.
    Words(usize),
}

/// A factored pure superharmonic element: the intertwiner c determined by a
/// point and a k×r seed B, with Gramian `Q = cc* = Σ_w Z_w B B* Z_w*`.
#[derive(Debug, Clone)]
pub struct GramianFactor {
    point: OperatorPoint,
    seed: CMatrix,
    truncation: Truncation,
}

impl GramianFactor {
    pub fn new(point: OperatorPoint, seed: CMatrix, truncation: Truncation) -> Result<Self> {
        if seed.nrows() != point.k() || seed.ncols() == 0 {
            return Err(Error::ShapeMismatch(format!(
                "seed is {}x{}, expected {} rows and at least one column",
                seed.nrows(),
                seed.ncols(),
                point.k()
            )));
        }
        if !all_finite(&seed) {
            return Err(Error::NonFinite);
        }
        match truncation {
            Truncation::Exact => {
                if !point.is_jointly_nilpotent() {
                    let k = point.k();
                    let mut x = CMatrix::identity(k, k);
                    for _ in 0..k {
                        x = point.theta_apply(&x);
                    }
                    return Err(Error::NotNilpotent { norm: fro_norm(&x) });
                }
            }
            Truncation::Words(n) => {
                if n == 0 {
                    return Err(Error::InvalidParameter("word bound must be positive".into()));
                }
                if point.row_norm() >= 1.0 && !point.is_jointly_nilpotent() {
                    return Err(Error::GramianUnavailable(format!(
                        "row norm {:.6} is not below one and the point is not nilpotent",
                        point.row_norm()
                    )));
                }
            }
        }
        Ok(Self { point, seed, truncation })
    }

    /// Chooses the truncation automatically: exact for nilpotent points,
    /// otherwise a word bound N with geometric tail
    /// `ρ^{2N}·‖BB*‖/(1−ρ²) ≤ tol` for row norm ρ < 1.
    pub fn with_tolerance(point: OperatorPoint, seed: CMatrix, tol: f64) -> Result<Self> {
        if point.is_jointly_nilpotent() {
            return Self::new(point, seed, Truncation::Exact);
        }
        let rho = point.row_norm();
        if rho >= 1.0 {
            return Err(Error::GramianUnavailable(format!(
                "row norm {rho:.6} is not below one and the point is not nilpotent"
            )));
        }
        let rho2 = rho * rho;
        let bb_norm = kernel::operator_norm(&(&seed * seed.adjoint()))?;
        let n = if bb_norm == 0.0 || rho2 == 0.0 {
            1
        } else {
            let need = (tol * (1.0 - rho2) / bb_norm).ln() / rho2.ln();
            if !need.is_finite() || need > MAX_WORD_LENGTH as f64 {
                return Err(Error::GramianUnavailable(format!(
                    "row norm {rho:.6} too close to one for a truncated word sum"
                )));
            }
            need.ceil().max(1.0) as usize
        };
        Self::new(point, seed, Truncation::Words(n))
    }

    pub fn point(&self) -> &OperatorPoint {
        &self.point
    }

    pub fn seed(&self) -> &CMatrix {
        &self.seed
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }
}

/// The Gramian `Q = Σ_w Z_w B B* Z_w*`, summed by iterating Θ on `BB*`
/// (the sum over words of length j is exactly `Θʲ(BB*)`, so no word
/// enumeration happens).
///
/// Solves `Q − Θ(Q) = BB*` up to the truncation tail; exactly, for
/// nilpotent points.
pub fn gramian(f: &GramianFactor) -> Result<BlockHermitian> {
    let k = f.point.k();
    let bb = hermitize(&(&f.seed * f.seed.adjoint()));
    let terms = match f.truncation {
        Truncation::Exact => f.point.k(),
        Truncation::Words(n) => n,
    };
    let mut acc = bb.clone();
    let mut x = bb;
    for _ in 1..terms {
        x = f.point.theta_apply(&x);
        if fro_norm(&x) == 0.0 {
            break;
        }
        acc += &x;
    }
    BlockHermitian::new(1, k, hermitize(&acc))
}

fn cross_word_sum(fi: &GramianFactor, fj: &GramianFactor, terms: usize) -> CMatrix {
    let mut x = &fi.seed * fj.seed.adjoint();
    let mut acc = x.clone();
    let k = fi.point.k();
    for _ in 1..terms {
        let mut next = CMatrix::zeros(k, k);
        for t in 0..fi.point.d() {
            next += fi.point.block(t) * &x * fj.point.block(t).adjoint();
        }
        x = next;
        if fro_norm(&x) == 0.0 {
            break;
        }
        acc += &x;
    }
    acc
}

fn cross_checks(fi: &GramianFactor, fj: &GramianFactor) -> Result<()> {
    if fi.point.d() != fj.point.d() || fi.point.k() != fj.point.k() {
        return Err(Error::ShapeMismatch(
            "cross Gramian needs factors over points of equal (d, k)".into(),
        ));
    }
    if fi.seed.ncols() != fj.seed.ncols() {
        return Err(Error::ShapeMismatch(
            "cross Gramian needs seeds of equal width".into(),
        ));
    }
    Ok(())
}

/// The cross block `c_i c_j* = Σ_w Z_{i,w} B_i B_j* Z_{j,w}*` of a Gramian
/// matrix. Finite sum when either point is nilpotent; otherwise solved from
/// the k²-dimensional two-sided Stein system, valid whenever the product of
/// the two row norms is below one.
pub fn cross_gramian(fi: &GramianFactor, fj: &GramianFactor) -> Result<CMatrix> {
    cross_checks(fi, fj)?;
    let k = fi.point.k();
    if fi.point.is_jointly_nilpotent() || fj.point.is_jointly_nilpotent() {
        return Ok(cross_word_sum(fi, fj, k.max(1)));
    }
    let product = fi.point.row_norm() * fj.point.row_norm();
    if product >= 1.0 {
        return Err(Error::GramianUnavailable(format!(
            "row-norm product {product:.6} is not below one and neither point is nilpotent"
        )));
    }
    let mut a = CMatrix::identity(k * k, k * k);
    for t in 0..fi.point.d() {
        a -= fj.point.block(t).conjugate().kronecker(fi.point.block(t));
    }
    let rhs_mat = &fi.seed * fj.seed.adjoint();
    let rhs = CMatrix::from_column_slice(k * k, 1, vec_cm(&rhs_mat).as_slice());
    let x = kernel::solve_linear(&a, &rhs)?;
    Ok(unvec_cm(&x.column(0).into_owned(), k, k))
}

/// Word-sum route for the cross block, independent of the linear solve in
/// [`cross_gramian`]; used to re-verify extracted witnesses.
pub fn cross_gramian_words(fi: &GramianFactor, fj: &GramianFactor, tol: f64) -> Result<CMatrix> {
    cross_checks(fi, fj)?;
    let k = fi.point.k();
    if fi.point.is_jointly_nilpotent() || fj.point.is_jointly_nilpotent() {
        return Ok(cross_word_sum(fi, fj, k.max(1)));
    }
    let product = fi.point.row_norm() * fj.point.row_norm();
    if product >= 1.0 {
        return Err(Error::GramianUnavailable(format!(
            "row-norm product {product:.6} is not below one and neither point is nilpotent"
        )));
    }
    // Words of length j contribute at most (rho_i rho_j)^j ||B_i B_j*||,
    // so the tail after N terms is bounded by the geometric remainder in
    // the row-norm product itself (not its square; the product already
    // carries both sides).
    let bb_norm = kernel::operator_norm(&(&fi.seed * fj.seed.adjoint()))?;
    let terms = if bb_norm == 0.0 {
        1
    } else {
        let need = (tol * (1.0 - product) / bb_norm).ln() / product.ln();
        if !need.is_finite() || need > MAX_WORD_LENGTH as f64 {
            return Err(Error::GramianUnavailable(format!(
                "row-norm product {product:.6} too close to one for a truncated word sum"
            )));
        }
        need.ceil().max(1.0) as usize
    };
    Ok(cross_word_sum(fi, fj, terms))
}

/// Both halves of the superharmonicity test: `Q ≥ 0` and `Q − Φ(Q) ≥ 0`.
#[derive(Debug, Clone)]
pub struct SuperharmonicVerdict {
    pub positivity: PsdVerdict,
    pub decrease: PsdVerdict,
}

impl SuperharmonicVerdict {
    pub fn holds(&self) -> bool {
        self.positivity.is_psd() && self.decrease.is_psd()
    }
}

pub fn is_superharmonic(
    phi: &CpMap,
    q: &BlockHermitian,
    tol: &ToleranceConfig,
) -> Result<SuperharmonicVerdict> {
    check_map_element(phi, q.dim(), "is_superharmonic")?;
    let positivity = psd_verdict(q.data(), tol)?;
    let decrease = psd_verdict(&(q.data() - phi.apply(q.data())?), tol)?;
    Ok(SuperharmonicVerdict { positivity, decrease })
}

/// How purity was certified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PurityCertificate {
    /// Superoperator spectral radius below one: `Φⁿ → 0` regardless of Q.
    SpectralRadius { radius: f64 },
    /// Iterates observed to decay under `tol` within the cap.
    Decay { iterations: usize, final_norm: f64 },
}

/// Purity verdict for a superharmonic element.
///
/// `Φⁿ(a) ↘ 0` is not finitely decidable in general, so the outcome
/// distinguishes a certified Pure from an honest Undecided; it never
/// guesses at radius one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PurityVerdict {
    Pure { certificate: PurityCertificate },
    Undecided { iterations: usize, last_norm: f64 },
}

impl PurityVerdict {
    pub fn is_pure(&self) -> bool {
        matches!(self, PurityVerdict::Pure { .. })
    }
}

/// Decides purity of a superharmonic element Q for Φ.
///
/// The spectral-radius certificate is used when the carrier is small enough
/// to afford the superoperator eigenproblem; otherwise (and whenever the
/// radius is not below one) `Φⁿ(Q)` is iterated up to `64·dim` steps.
pub fn is_pure_superharmonic(phi: &CpMap, q: &BlockHermitian, tol: f64) -> Result<PurityVerdict> {
    check_map_element(phi, q.dim(), "is_pure_superharmonic")?;
    if phi.dim() <= RADIUS_CERTIFICATE_DIM_CAP {
        let radius = kernel::spectral_radius(phi.superoperator().matrix())?;
        if radius < 1.0 {
            return Ok(PurityVerdict::Pure {
                certificate: PurityCertificate::SpectralRadius { radius },
            });
        }
    }
    let cap = 64 * phi.dim();
    let mut x = q.data().clone();
    for n in 1..=cap {
        x = phi.apply(&x)?;
        let norm = fro_norm(&x);
        if norm <= tol {
            return Ok(PurityVerdict::Pure {
                certificate: PurityCertificate::Decay { iterations: n, final_norm: norm },
            });
        }
    }
    Ok(PurityVerdict::Undecided { iterations: cap, last_norm: fro_norm(&x) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{c, cr};
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        let b = random_matrix(rng, n);
        &b * b.adjoint()
    }

    fn jordan2_point() -> OperatorPoint {
        OperatorPoint::from_matrix(CMatrix::from_row_slice(
            2,
            2,
            &[cr(0.0), cr(1.0), cr(0.0), cr(0.0)],
        ))
        .unwrap()
    }

    fn contraction_point(rng: &mut ChaCha8Rng, k: usize, norm: f64) -> OperatorPoint {
        let a = random_matrix(rng, k);
        let s = kernel::operator_norm(&a).unwrap();
        OperatorPoint::from_matrix(a.scale(norm / s)).unwrap()
    }

    #[test]
    fn stein_zero_map_returns_rhs() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let r = BlockHermitian::new(1, 3, random_psd(&mut rng, 3)).unwrap();
        let q = stein_solve(&CpMap::zero(1, 3), &r).unwrap();
        assert!(fro_norm(&(q.data() - r.data())) <= 1e-12);
    }

    #[test]
    fn stein_jordan_block() {
        let phi = CpMap::theta_from_point(&jordan2_point());
        let q = stein_solve(&phi, &BlockHermitian::identity(1, 2)).unwrap();
        // Q = I + ZZ* = diag(2, 1).
        assert_relative_eq!(q.data()[(0, 0)].re, 2.0, epsilon = 1e-12);
        assert_relative_eq!(q.data()[(1, 1)].re, 1.0, epsilon = 1e-12);
        assert!(q.data()[(0, 1)].norm() <= 1e-12);
    }

    #[test]
    fn stein_scalar_geometric() {
        let z = c(0.3, 0.4);
        let phi = CpMap::theta_from_point(&OperatorPoint::scalar(z));
        let q = stein_solve(&phi, &BlockHermitian::identity(1, 1)).unwrap();
        assert_relative_eq!(q.data()[(0, 0)].re, 1.0 / (1.0 - 0.25), epsilon = 1e-12);
    }

    #[test]
    fn stein_rejects_unit_spectrum() {
        let phi = CpMap::theta_from_point(&OperatorPoint::scalar(cr(1.0)));
        let r = BlockHermitian::identity(1, 1);
        assert!(matches!(stein_solve(&phi, &r), Err(Error::SteinSingular { .. })));
    }

    #[test]
    fn stein_residual_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5 {
            let p = contraction_point(&mut rng, 3, 0.8);
            let phi = CpMap::theta_from_point(&p);
            let r = BlockHermitian::new(1, 3, random_psd(&mut rng, 3)).unwrap();
            let q = stein_solve(&phi, &r).unwrap();
            let res = fro_norm(&(q.data() - phi.apply(q.data()).unwrap() - r.data()));
            assert!(res <= 1e-10 * fro_norm(q.data()).max(1.0));
        }
    }

    #[test]
    fn neumann_agrees_with_stein() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let p = contraction_point(&mut rng, 2, 0.75);
        let phi = CpMap::theta_from_point(&p);
        let r = BlockHermitian::identity(1, 2);
        let via_series = neumann_sum(&phi, &r, 1e-12).unwrap();
        let via_solve = stein_solve(&phi, &r).unwrap();
        assert!(fro_norm(&(via_series.data() - via_solve.data())) <= 1e-8);
    }

    #[test]
    fn neumann_zero_map_is_identity_on_rhs() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let r = BlockHermitian::new(1, 2, random_psd(&mut rng, 2)).unwrap();
        let q = neumann_sum(&CpMap::zero(1, 2), &r, 1e-12).unwrap();
        assert!(fro_norm(&(q.data() - r.data())) <= 1e-14);
    }

    #[test]
    fn neumann_exact_for_nilpotent() {
        let phi = CpMap::theta_from_point(&jordan2_point());
        let r = BlockHermitian::identity(1, 2);
        let via_series = neumann_sum(&phi, &r, 1e-14).unwrap();
        let via_solve = stein_solve(&phi, &r).unwrap();
        assert!(fro_norm(&(via_series.data() - via_solve.data())) <= 1e-13);
    }

    #[test]
    fn neumann_rejects_radius_one() {
        let phi = CpMap::theta_from_point(&OperatorPoint::scalar(cr(1.0)));
        let r = BlockHermitian::identity(1, 1);
        assert!(matches!(neumann_sum(&phi, &r, 1e-10), Err(Error::NotConvergent { .. })));
    }

    #[test]
    fn gramian_zero_point() {
        let p = OperatorPoint::from_matrix(CMatrix::zeros(2, 2)).unwrap();
        let f = GramianFactor::new(p, CMatrix::identity(2, 2), Truncation::Exact).unwrap();
        let q = gramian(&f).unwrap();
        assert!(fro_norm(&(q.data() - CMatrix::identity(2, 2))) <= 1e-14);
    }

    #[test]
    fn gramian_jordan_block() {
        let f = GramianFactor::new(jordan2_point(), CMatrix::identity(2, 2), Truncation::Exact)
            .unwrap();
        let q = gramian(&f).unwrap();
        assert_relative_eq!(q.data()[(0, 0)].re, 2.0, epsilon = 1e-13);
        assert_relative_eq!(q.data()[(1, 1)].re, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn gramian_exact_requires_nilpotency() {
        let p = OperatorPoint::scalar(c(0.5, 0.0));
        let res = GramianFactor::new(p, CMatrix::identity(1, 1), Truncation::Exact);
        assert!(matches!(res, Err(Error::NotNilpotent { .. })));
    }

    #[test]
    fn gramian_matches_stein_for_nilpotent_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        // A jointly nilpotent d=2 tuple: both letters strictly upper triangular.
        let mut z1 = CMatrix::zeros(3, 3);
        let mut z2 = CMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in (i + 1)..3 {
                z1[(i, j)] = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                z2[(i, j)] = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            }
        }
        let p = OperatorPoint::new(vec![z1, z2]).unwrap();
        assert!(p.is_jointly_nilpotent());
        let b = random_matrix(&mut rng, 3);
        let f = GramianFactor::new(p.clone(), b.clone(), Truncation::Exact).unwrap();
        let q = gramian(&f).unwrap();

        let phi = CpMap::theta_from_point(&p);
        let bb = BlockHermitian::new(1, 3, &b * b.adjoint()).unwrap();
        let via_stein = stein_solve(&phi, &bb).unwrap();
        assert!(fro_norm(&(q.data() - via_stein.data())) <= 1e-9);
    }

    #[test]
    fn gramian_truncated_matches_stein() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let p = contraction_point(&mut rng, 2, 0.8);
        let b = random_matrix(&mut rng, 2);
        let f = GramianFactor::with_tolerance(p.clone(), b.clone(), 1e-12).unwrap();
        assert!(matches!(f.truncation(), Truncation::Words(_)));
        let q = gramian(&f).unwrap();
        let phi = CpMap::theta_from_point(&p);
        let bb = BlockHermitian::new(1, 2, &b * b.adjoint()).unwrap();
        let via_stein = stein_solve(&phi, &bb).unwrap();
        assert!(fro_norm(&(q.data() - via_stein.data())) <= 1e-9);
    }

    #[test]
    fn gramian_refuses_boundary_non_nilpotent() {
        let p = OperatorPoint::from_matrix(CMatrix::identity(2, 2)).unwrap();
        let res = GramianFactor::with_tolerance(p, CMatrix::identity(2, 2), 1e-12);
        assert!(matches!(res, Err(Error::GramianUnavailable(_))));
    }

    #[test]
    fn cross_gramian_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let pi = contraction_point(&mut rng, 2, 0.7);
        let pj = contraction_point(&mut rng, 2, 0.85);
        let bi = random_matrix(&mut rng, 2);
        let bj = random_matrix(&mut rng, 2);
        let fi = GramianFactor::with_tolerance(pi, bi, 1e-12).unwrap();
        let fj = GramianFactor::with_tolerance(pj, bj, 1e-12).unwrap();
        let via_solve = cross_gramian(&fi, &fj).unwrap();
        let via_words = cross_gramian_words(&fi, &fj, 1e-13).unwrap();
        assert!(fro_norm(&(via_solve - via_words)) <= 1e-9);
    }

    #[test]
    fn cross_gramian_diagonal_matches_gramian() {
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        let p = contraction_point(&mut rng, 2, 0.8);
        let b = random_matrix(&mut rng, 2);
        let f = GramianFactor::with_tolerance(p, b, 1e-12).unwrap();
        let diag = cross_gramian(&f, &f).unwrap();
        let q = gramian(&f).unwrap();
        assert!(fro_norm(&(diag - q.data())) <= 1e-9);
    }

    #[test]
    fn zero_is_superharmonic_for_everything() {
        let mut rng = ChaCha8Rng::seed_from_u64(28);
        let p = contraction_point(&mut rng, 2, 1.4);
        let phi = CpMap::theta_from_point(&p);
        let v = is_superharmonic(&phi, &BlockHermitian::zero(1, 2), &tol()).unwrap();
        assert!(v.holds());
    }

    #[test]
    fn stein_solutions_are_pure_superharmonic() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let p = contraction_point(&mut rng, 3, 0.8);
        let phi = CpMap::theta_from_point(&p);
        let r = BlockHermitian::new(1, 3, random_psd(&mut rng, 3)).unwrap();
        let q = stein_solve(&phi, &r).unwrap();
        assert!(is_superharmonic(&phi, &q, &tol()).unwrap().holds());
        let purity = is_pure_superharmonic(&phi, &q, 1e-12).unwrap();
        assert!(matches!(
            purity,
            PurityVerdict::Pure { certificate: PurityCertificate::SpectralRadius { .. } }
        ));
    }

    #[test]
    fn expansion_is_not_superharmonic() {
        let z = CMatrix::identity(2, 2).scale(1.5);
        let phi = CpMap::theta_from_point(&OperatorPoint::from_matrix(z).unwrap());
        let v = is_superharmonic(&phi, &BlockHermitian::identity(1, 2), &tol()).unwrap();
        assert!(v.positivity.is_psd());
        assert!(!v.decrease.is_psd());
    }

    #[test]
    fn fixed_point_at_radius_one_is_undecided() {
        let phi = CpMap::theta_from_point(&OperatorPoint::scalar(cr(1.0)));
        let q = BlockHermitian::identity(1, 1);
        let verdict = is_pure_superharmonic(&phi, &q, 1e-12).unwrap();
        match verdict {
            PurityVerdict::Undecided { last_norm, .. } => {
                assert_relative_eq!(last_norm, 1.0, epsilon = 1e-12)
            }
            other => panic!("expected Undecided, got {other:?}"),
        }
    }

    #[test]
    fn purity_decay_path_on_large_carrier() {
        // Promote a nilpotent map past the radius-certificate cap so the
        // iterative route must run; iterates hit exact zero.
        let phi = CpMap::theta_from_point(&jordan2_point()).promote(9);
        assert!(phi.dim() > 16);
        let q = BlockHermitian::identity(9, 2);
        let verdict = is_pure_superharmonic(&phi, &q, 1e-12).unwrap();
        assert!(matches!(
            verdict,
            PurityVerdict::Pure { certificate: PurityCertificate::Decay { iterations: 2, .. } }
        ));
    }

    #[test]
    fn convex_combinations_stay_superharmonic() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let p = contraction_point(&mut rng, 2, 0.8);
        let phi = CpMap::theta_from_point(&p);
        let q1 = stein_solve(&phi, &BlockHermitian::new(1, 2, random_psd(&mut rng, 2)).unwrap())
            .unwrap();
        let q2 = stein_solve(&phi, &BlockHermitian::new(1, 2, random_psd(&mut rng, 2)).unwrap())
            .unwrap();
        let t = 0.37;
        let mix = q1.data().scale(t) + q2.data().scale(1.0 - t);
        let mix = BlockHermitian::new(1, 2, mix).unwrap();
        assert!(is_superharmonic(&phi, &mix, &tol()).unwrap().holds());
    }

    #[test]
    fn block_hermitian_rejects_asymmetric() {
        let a = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(0.0), cr(0.0)]);
        assert!(matches!(BlockHermitian::new(1, 2, a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn scalar_stein_weighted_rhs() {
        // Scalar Stein with a weighted right-hand side: Q = R/(1 - |z|^2).
        let z = c(0.6, -0.3);
        let phi = CpMap::theta_from_point(&OperatorPoint::scalar(z));
        let r_val = 2.5;
        let r = BlockHermitian::new(1, 1, CMatrix::from_element(1, 1, Complex64::new(r_val, 0.0)))
            .unwrap();
        let q = stein_solve(&phi, &r).unwrap();
        assert_relative_eq!(q.data()[(0, 0)].re, r_val / (1.0 - z.norm_sqr()), epsilon = 1e-12);
    }
}
