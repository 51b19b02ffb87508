//! Dense complex-matrix kernel: Hermitian eigendecomposition, PSD verdicts,
//! norms, spectral radius, and linear solves.
//!
//! Everything here is desk-scale (dimensions up to a few hundred) and backed
//! by `nalgebra` dense factorizations. Verdicts are scale-free: tolerances
//! are taken relative to the magnitude of the input with an absolute floor.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, the carrier for every operator in the library.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = DVector<Complex64>;

/// Residual tolerance used by solver post-checks.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Tolerances for verdicts and boundary detection.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ToleranceConfig {
    /// Relative PSD tolerance: `min_eig >= -psd_tol * max(1, max_eig)`.
    pub psd_tol: f64,
    /// Relative residual tolerance for solves and symmetry checks.
    pub residual_tol: f64,
    /// Detection window for unimodular Schur parameters (`| |g| - 1 | <= boundary_tol`).
    pub boundary_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            psd_tol: 1e-9,
            residual_tol: 1e-10,
            boundary_tol: 1e-9,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.psd_tol >= 0.0 && self.residual_tol >= 0.0 && self.boundary_tol >= 0.0;
        if !(ok && self.psd_tol.is_finite() && self.residual_tol.is_finite() && self.boundary_tol.is_finite()) {
            return Err(Error::InvalidParameter(
                "tolerances must be finite and nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// Complex scalar from real/imag parts.
#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Real scalar promoted to a complex entry.
#[inline]
pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn all_finite(a: &CMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Frobenius norm; used for all residual checks.
pub fn fro_norm(a: &CMatrix) -> f64 {
    a.norm()
}

/// `||A - A*||_F`, the deviation from Hermitian symmetry.
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    (a - a.adjoint()).norm()
}

/// Exact Hermitization `(A + A*) / 2`.
pub fn hermitize(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

fn check_square(a: &CMatrix, what: &str) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "{what}: expected square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(a.nrows())
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are real and reported in ascending order; `vectors` holds the
/// matching orthonormal eigenvectors as columns, so `A = V diag(values) V*`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Hermitian eigendecomposition with a symmetry gate.
///
/// The input must satisfy `||A - A*|| <= residual_tol * max(1, ||A||)`; it is
/// then exactly Hermitized before factorization so the output is a
/// deterministic function of the input.
pub fn hermitian_eig(a: &CMatrix, tol: &ToleranceConfig) -> Result<HermitianEigen> {
    let n = check_square(a, "hermitian_eig")?;
    if !all_finite(a) {
        return Err(Error::NonFinite);
    }
    let defect = hermitian_defect(a);
    let gate = tol.residual_tol * fro_norm(a).max(1.0);
    if defect > gate {
        return Err(Error::NotHermitian {
            deviation: defect,
            tol: gate,
        });
    }
    let eig = hermitize(a)
        .try_symmetric_eigen(f64::EPSILON, 200 * n + 200)
        .ok_or(Error::EigFailed)?;

    // Sort ascending, permuting eigenvectors alongside.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(HermitianEigen { values, vectors })
}

/// Outcome of a positive-semidefiniteness test.
///
/// `NotPsd` carries the offending eigenpair so callers can surface a witness.
#[derive(Debug, Clone)]
pub enum PsdVerdict {
    Psd { min_eigenvalue: f64 },
    NotPsd { min_eigenvalue: f64, witness: CVector },
}

impl PsdVerdict {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdVerdict::Psd { .. })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        match self {
            PsdVerdict::Psd { min_eigenvalue } | PsdVerdict::NotPsd { min_eigenvalue, .. } => {
                *min_eigenvalue
            }
        }
    }

    pub fn witness(&self) -> Option<&CVector> {
        match self {
            PsdVerdict::Psd { .. } => None,
            PsdVerdict::NotPsd { witness, .. } => Some(witness),
        }
    }
}

/// PSD test with a scale-free threshold: PSD iff
/// `min_eig >= -psd_tol * max(1, max_eig)`.
pub fn psd_verdict(a: &CMatrix, tol: &ToleranceConfig) -> Result<PsdVerdict> {
    let eig = hermitian_eig(a, tol)?;
    let n = eig.values.len();
    if n == 0 {
        return Ok(PsdVerdict::Psd { min_eigenvalue: 0.0 });
    }
    let min_eig = eig.values[0];
    let max_eig = eig.values[n - 1];
    let threshold = -tol.psd_tol * max_eig.max(1.0);
    if min_eig >= threshold {
        Ok(PsdVerdict::Psd { min_eigenvalue: min_eig })
    } else {
        Ok(PsdVerdict::NotPsd {
            min_eigenvalue: min_eig,
            witness: eig.vectors.column(0).into_owned(),
        })
    }
}

/// Largest singular value.
pub fn operator_norm(a: &CMatrix) -> Result<f64> {
    if !all_finite(a) {
        return Err(Error::NonFinite);
    }
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(0.0);
    }
    let svd = a
        .clone()
        .try_svd(false, false, f64::EPSILON, 20_000)
        .ok_or(Error::EigFailed)?;
    Ok(svd.singular_values.iter().copied().fold(0.0_f64, f64::max))
}

/// All eigenvalues of a general square complex matrix, via the Schur form.
///
/// The spectrum is shifted away from zero before the QR iteration and
/// shifted back afterwards. On nilpotent inputs, which this crate meets
/// constantly, the unshifted iteration stalls: its deflation test is
/// relative to diagonal magnitudes that collapse to zero. After the shift
/// every eigenvalue has modulus at least 1, so deflation has a scale and
/// the iteration terminates.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    let n = check_square(a, "eigenvalues")?;
    if !all_finite(a) {
        return Err(Error::NonFinite);
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let sigma = Complex64::new(1.0 + fro_norm(a), 0.0);
    let mut shifted = a.clone();
    for i in 0..n {
        shifted[(i, i)] -= sigma;
    }
    let schur = shifted
        .try_schur(f64::EPSILON, 200 * n + 200)
        .ok_or(Error::EigFailed)?;
    let ev = schur.eigenvalues().ok_or(Error::EigFailed)?;
    Ok(ev.iter().map(|l| l + sigma).collect())
}

/// Spectral radius `max |lambda|` from a full eigenvalue computation.
pub fn spectral_radius(a: &CMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?
        .into_iter()
        .map(|z| z.norm())
        .fold(0.0_f64, f64::max))
}

fn condition_estimate(a: &CMatrix) -> f64 {
    let Some(svd) = a.clone().try_svd(false, false, f64::EPSILON, 20_000) else {
        return f64::INFINITY;
    };
    let smax = svd.singular_values.iter().copied().fold(0.0_f64, f64::max);
    let smin = svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
    if smin <= 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

/// Solve `A X = B` by LU with one step of iterative refinement.
///
/// The result is accepted only if `||A X - B|| <= RESIDUAL_TOL * max(1, ||A|| ||X||)`.
pub fn solve_linear(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let n = check_square(a, "solve_linear")?;
    if b.nrows() != n {
        return Err(Error::ShapeMismatch(format!(
            "solve_linear: A is {n}x{n} but B has {} rows",
            b.nrows()
        )));
    }
    if !all_finite(a) || !all_finite(b) {
        return Err(Error::NonFinite);
    }
    let lu = a.clone().lu();
    let mut x = lu.solve(b).ok_or_else(|| Error::Singular {
        cond: condition_estimate(a),
    })?;

    let residual_ok = |x: &CMatrix| -> bool {
        let res = fro_norm(&(a * x - b));
        res <= RESIDUAL_TOL * (fro_norm(a) * fro_norm(x)).max(1.0)
    };
    if !residual_ok(&x) {
        if let Some(dx) = lu.solve(&(b - a * &x)) {
            x += dx;
        }
        if !residual_ok(&x) {
            return Err(Error::Singular {
                cond: condition_estimate(a),
            });
        }
    }
    Ok(x)
}

/// Column-major vectorization (stacks columns, matching nalgebra storage).
pub fn vec_cm(a: &CMatrix) -> CVector {
    CVector::from_column_slice(a.as_slice())
}

/// Inverse of [`vec_cm`].
pub fn unvec_cm(v: &CVector, rows: usize, cols: usize) -> CMatrix {
    assert_eq!(v.len(), rows * cols, "unvec_cm: length mismatch");
    CMatrix::from_column_slice(rows, cols, v.as_slice())
}
