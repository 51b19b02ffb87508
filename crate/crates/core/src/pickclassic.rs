//! Classical constructive interpolation on the unit disc: Pick matrices,
//! the Schur recursion for Nevanlinna–Pick data, and the coefficient-level
//! Schur recursion for jet (Carathéodory–Fejér) data.
//!
//! Everything returned is a [`SchurFn`]: a cascade of Möbius sections
//! encoded by its Schur parameters, anchors, and terminal value, together
//! with the rational form obtained by exact polynomial arithmetic from the
//! cascade. The terminal parameter is fixed to 0 (the central solution) so
//! results are reproducible; forced-constant boundary cases carry their
//! unimodular constant in the terminal slot instead.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::funcalc::{self, poly, RationalForm};
use crate::kernel::{self, CMatrix, PsdVerdict, ToleranceConfig};

/// Residual tolerance for interpolation post-checks (`|f(z_i) − w_i|` and
/// jet coefficient agreement).
pub const INTERP_TOL: f64 = 1e-8;

/// Boundary sample count for sup-norm certification.
const SUP_NORM_SAMPLES: usize = 512;

/// Sup-norm slack admitted at construction time.
const SUP_NORM_SLACK: f64 = 1e-9;

fn is_finite_c(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// A Schur-class rational function presented as a Möbius cascade.
///
/// With sections `f_j = (γ_j + b_j·f_{j+1}) / (1 + γ̄_j·b_j·f_{j+1})` and
/// Blaschke factors `b_j(ζ) = (ζ − z_j)/(1 − z̄_j ζ)` over the anchors, the
/// function is `f_0` with `f_N ≡ terminal`. Parameters satisfy |γ_j| ≤ 1
/// and the rational form is certified contractive on boundary samples at
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurFn {
    parameters: Vec<Complex64>,
    anchors: Vec<Complex64>,
    terminal: Complex64,
    rational: RationalForm,
}

impl SchurFn {
    /// Builds the cascade and its rational form, then certifies Schur-class
    /// membership: parameter moduli, 512-point boundary sampling, and (when
    /// all parameters are strictly inside the disc) denominator roots
    /// outside the closed disc.
    pub fn from_cascade(
        parameters: Vec<Complex64>,
        anchors: Vec<Complex64>,
        terminal: Complex64,
    ) -> Result<Self> {
        if parameters.len() != anchors.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} parameters against {} anchors",
                parameters.len(),
                anchors.len()
            )));
        }
        if !parameters.iter().chain(anchors.iter()).all(|&c| is_finite_c(c))
            || !is_finite_c(terminal)
        {
            return Err(Error::NonFinite);
        }
        for (j, g) in parameters.iter().enumerate() {
            if g.norm() > 1.0 + 1e-12 {
                return Err(Error::NotSchur(format!(
                    "parameter {j} has modulus {:.6}",
                    g.norm()
                )));
            }
        }
        if terminal.norm() > 1.0 + 1e-12 {
            return Err(Error::NotSchur(format!(
                "terminal value has modulus {:.6}",
                terminal.norm()
            )));
        }
        for (j, a) in anchors.iter().enumerate() {
            if a.norm() >= 1.0 {
                return Err(Error::PointOnBoundary { index: j, modulus: a.norm() });
            }
        }

        let (p, q) = cascade_polynomials(&parameters, &anchors, terminal);
        let rational = RationalForm::new(p, q)?;
        let f = Self { parameters, anchors, terminal, rational };

        let sup = f.boundary_sup_norm();
        if !(sup <= 1.0 + SUP_NORM_SLACK) {
            return Err(Error::NotSchur(format!("boundary sample norm {sup:.9}")));
        }
        if f.parameters.iter().all(|g| g.norm() < 1.0) {
            for root in denominator_roots(&f.rational)? {
                if root.norm() <= 1.0 - 1e-8 {
                    return Err(Error::NotSchur(format!(
                        "denominator root at modulus {:.9} inside the disc",
                        root.norm()
                    )));
                }
            }
        }
        Ok(f)
    }

    /// The constant function ζ ↦ c.
    pub fn constant(c: Complex64) -> Result<Self> {
        Self::from_cascade(Vec::new(), Vec::new(), c)
    }

    pub fn parameters(&self) -> &[Complex64] {
        &self.parameters
    }

    pub fn anchors(&self) -> &[Complex64] {
        &self.anchors
    }

    pub fn terminal(&self) -> Complex64 {
        self.terminal
    }

    pub fn rational(&self) -> &RationalForm {
        &self.rational
    }

    pub fn degree(&self) -> usize {
        self.rational.degree()
    }

    pub fn eval_scalar(&self, z: Complex64) -> Result<Complex64> {
        funcalc::eval_scalar(&self.rational, z)
    }

    pub fn eval_operator(&self, z: &CMatrix) -> Result<CMatrix> {
        funcalc::eval_operator(&self.rational, z)
    }

    pub fn taylor_jet(&self, n: usize) -> Result<Vec<Complex64>> {
        funcalc::taylor_jet(&self.rational, n)
    }

    /// Maximum modulus over 512 uniform boundary samples; rational functions
    /// of desk-scale degree with poles off the closed disc cannot hide
    /// meaningful peaks between samples.
    pub fn boundary_sup_norm(&self) -> f64 {
        let mut sup: f64 = 0.0;
        for t in 0..SUP_NORM_SAMPLES {
            let theta = 2.0 * std::f64::consts::PI * (t as f64) / (SUP_NORM_SAMPLES as f64);
            let z = Complex64::from_polar(1.0, theta);
            match funcalc::eval_scalar(&self.rational, z) {
                Ok(v) => sup = sup.max(v.norm()),
                Err(_) => return f64::INFINITY,
            }
        }
        sup
    }
}

/// Rational form of the cascade by exact polynomial arithmetic, working
/// upward from the terminal constant:
/// `p ← γ_j·(q·d_j) + n_j·p`, `q ← q·d_j + γ̄_j·(n_j·p)`.
///
/// A structurally zero tail is special-cased to keep the representation
/// gcd-reduced: through `f_{j+1} ≡ 0` the section collapses to the constant
/// γ_j, so the common factor `q·d_j` is dropped exactly rather than left
/// for a numerical gcd.
fn cascade_polynomials(
    parameters: &[Complex64],
    anchors: &[Complex64],
    terminal: Complex64,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let one = Complex64::new(1.0, 0.0);
    let mut tail_is_zero = terminal.norm() == 0.0;
    let mut p = vec![terminal];
    let mut q = vec![one];
    for j in (0..parameters.len()).rev() {
        let gamma = parameters[j];
        let z_j = anchors[j];
        if tail_is_zero {
            p = vec![gamma];
            q = vec![one];
            tail_is_zero = gamma.norm() == 0.0;
            continue;
        }
        let numer = vec![-z_j, one]; // ζ − z_j
        let denom = vec![one, -z_j.conj()]; // 1 − z̄_j ζ
        let qd = poly::mul(&q, &denom);
        let np = poly::mul(&numer, &p);
        p = poly::add(&poly::scale(&qd, gamma), &np);
        q = poly::add(&qd, &poly::scale(&np, gamma.conj()));
        tail_is_zero = false;
    }
    (p, q)
}

/// Denominator roots via the companion matrix.
fn denominator_roots(f: &RationalForm) -> Result<Vec<Complex64>> {
    let q = f.denominator();
    let d = poly::degree(q);
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = q[d];
    let mut companion = CMatrix::zeros(d, d);
    for i in 1..d {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        companion[(i, d - 1)] = -q[i] / lead;
    }
    kernel::eigenvalues(&companion)
}

/// The Pick matrix `((1 − w_i w̄_j)/(1 − z_i z̄_j))` with its verdict.
#[derive(Debug, Clone)]
pub struct PickMatrixResult {
    pub matrix: CMatrix,
    pub min_eigenvalue: f64,
    pub verdict: PsdVerdict,
}

impl PickMatrixResult {
    pub fn is_psd(&self) -> bool {
        self.verdict.is_psd()
    }
}

fn validate_nodes(z: &[Complex64]) -> Result<()> {
    if z.is_empty() {
        return Err(Error::ShapeMismatch("need at least one node".into()));
    }
    for (i, zi) in z.iter().enumerate() {
        if !is_finite_c(*zi) {
            return Err(Error::NonFinite);
        }
        if zi.norm() >= 1.0 {
            return Err(Error::PointOnBoundary { index: i, modulus: zi.norm() });
        }
    }
    for i in 0..z.len() {
        for j in (i + 1)..z.len() {
            if z[i] == z[j] {
                return Err(Error::DuplicatePoints { i, j });
            }
        }
    }
    Ok(())
}

pub fn pick_matrix(z: &[Complex64], w: &[Complex64], tol: &ToleranceConfig) -> Result<PickMatrixResult> {
    validate_nodes(z)?;
    if w.len() != z.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} nodes against {} targets",
            z.len(),
            w.len()
        )));
    }
    if !w.iter().all(|&c| is_finite_c(c)) {
        return Err(Error::NonFinite);
    }
    let n = z.len();
    let matrix = CMatrix::from_fn(n, n, |i, j| {
        (Complex64::new(1.0, 0.0) - w[i] * w[j].conj())
            / (Complex64::new(1.0, 0.0) - z[i] * z[j].conj())
    });
    let verdict = kernel::psd_verdict(&matrix, tol)?;
    Ok(PickMatrixResult { min_eigenvalue: verdict.min_eigenvalue(), matrix, verdict })
}

/// Outcome of a constructive interpolation attempt. Infeasibility carries
/// the 1-indexed recursion step and the offending modulus.
#[derive(Debug, Clone)]
pub enum SchurOutcome {
    Feasible(SchurFn),
    Infeasible { step: usize, modulus: f64 },
}

impl SchurOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SchurOutcome::Feasible(_))
    }

    pub fn function(&self) -> Option<&SchurFn> {
        match self {
            SchurOutcome::Feasible(f) => Some(f),
            SchurOutcome::Infeasible { .. } => None,
        }
    }
}

/// Nevanlinna–Pick interpolation by the Schur recursion.
///
/// At each step the leading target becomes a Schur parameter γ; the rest
/// are transformed by `((w − γ)/(1 − γ̄w)) / b_{z₁}` and the recursion
/// continues on one fewer point. `|γ| > 1` certifies infeasibility; a
/// unimodular γ forces a constant tail, feasible only when the remaining
/// transformed targets already equal it. The terminal parameter is 0.
pub fn schur_interpolate(
    z: &[Complex64],
    w: &[Complex64],
    tol: &ToleranceConfig,
) -> Result<SchurOutcome> {
    validate_nodes(z)?;
    if w.len() != z.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} nodes against {} targets",
            z.len(),
            w.len()
        )));
    }
    if !w.iter().all(|&c| is_finite_c(c)) {
        return Err(Error::NonFinite);
    }

    let n = z.len();
    let mut zs = z.to_vec();
    let mut ws = w.to_vec();
    let mut parameters = Vec::with_capacity(n);
    let mut anchors = Vec::with_capacity(n);

    for step in 1..=n {
        let gamma = ws[0];
        if !is_finite_c(gamma) {
            return Ok(SchurOutcome::Infeasible { step, modulus: f64::INFINITY });
        }
        let modulus = gamma.norm();
        if modulus > 1.0 + tol.boundary_tol {
            return Ok(SchurOutcome::Infeasible { step, modulus });
        }
        if modulus >= 1.0 - tol.boundary_tol {
            // Unimodular pivot: the tail is forced constant. Feasible only
            // if every remaining transformed target is already that constant.
            if ws[1..].iter().all(|wi| (wi - gamma).norm() <= INTERP_TOL) {
                let f = SchurFn::from_cascade(parameters, anchors, gamma)?;
                verify_interpolation(&f, z, w)?;
                return Ok(SchurOutcome::Feasible(f));
            }
            return Ok(SchurOutcome::Infeasible { step, modulus });
        }
        if step == n {
            parameters.push(gamma);
            anchors.push(zs[0]);
            let f = SchurFn::from_cascade(parameters, anchors, Complex64::new(0.0, 0.0))?;
            verify_interpolation(&f, z, w)?;
            return Ok(SchurOutcome::Feasible(f));
        }
        let z0 = zs[0];
        let mut next = Vec::with_capacity(ws.len() - 1);
        for i in 1..ws.len() {
            let b = (zs[i] - z0) / (Complex64::new(1.0, 0.0) - z0.conj() * zs[i]);
            let moved = (ws[i] - gamma) / (Complex64::new(1.0, 0.0) - gamma.conj() * ws[i]);
            next.push(moved / b);
        }
        parameters.push(gamma);
        anchors.push(z0);
        zs.remove(0);
        ws = next;
    }
    unreachable!("recursion returns within n steps");
}

fn verify_interpolation(f: &SchurFn, z: &[Complex64], w: &[Complex64]) -> Result<()> {
    for (zi, wi) in z.iter().zip(w.iter()) {
        let got = f.eval_scalar(*zi)?;
        let err = (got - wi).norm();
        if err > INTERP_TOL {
            return Err(Error::VerificationFailed(format!(
                "interpolation residual {err:.3e} at node {zi}"
            )));
        }
    }
    Ok(())
}

/// Carathéodory–Fejér interpolation: prescribes the first N Taylor
/// coefficients by the coefficient-level Schur recursion. Each step peels
/// γ = c₀ and replaces the series by `(f − γ)/(ζ·(1 − γ̄f))` via truncated
/// division and a shift.
pub fn caratheodory_fejer(jet: &[Complex64], tol: &ToleranceConfig) -> Result<SchurOutcome> {
    if jet.is_empty() {
        return Err(Error::InvalidParameter("jet must have at least one coefficient".into()));
    }
    if !jet.iter().all(|&c| is_finite_c(c)) {
        return Err(Error::NonFinite);
    }
    let n = jet.len();
    let mut series = jet.to_vec();
    let mut parameters = Vec::with_capacity(n);

    for step in 1..=n {
        let gamma = series[0];
        if !is_finite_c(gamma) {
            return Ok(SchurOutcome::Infeasible { step, modulus: f64::INFINITY });
        }
        let modulus = gamma.norm();
        if modulus > 1.0 + tol.boundary_tol {
            return Ok(SchurOutcome::Infeasible { step, modulus });
        }
        if modulus >= 1.0 - tol.boundary_tol {
            if series[1..].iter().all(|c| c.norm() <= INTERP_TOL) {
                let anchors = vec![Complex64::new(0.0, 0.0); parameters.len()];
                let f = SchurFn::from_cascade(parameters, anchors, gamma)?;
                verify_jet(&f, jet)?;
                return Ok(SchurOutcome::Feasible(f));
            }
            return Ok(SchurOutcome::Infeasible { step, modulus });
        }
        if step == n {
            parameters.push(gamma);
            let anchors = vec![Complex64::new(0.0, 0.0); parameters.len()];
            let f = SchurFn::from_cascade(parameters, anchors, Complex64::new(0.0, 0.0))?;
            verify_jet(&f, jet)?;
            return Ok(SchurOutcome::Feasible(f));
        }
        // g = (f − γ) / (ζ·(1 − γ̄f)) on truncated series: numerator has an
        // exact zero constant term, so the ζ-shift is a plain index shift.
        let mut numer = series.clone();
        numer[0] = Complex64::new(0.0, 0.0);
        let denom: Vec<Complex64> = series
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let base = if i == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                base - gamma.conj() * c
            })
            .collect();
        let quotient = poly::series_div(&numer, &denom, series.len());
        series = quotient[1..].to_vec();
        parameters.push(gamma);
    }
    unreachable!("recursion returns within n steps");
}

fn verify_jet(f: &SchurFn, jet: &[Complex64]) -> Result<()> {
    let back = f.taylor_jet(jet.len())?;
    for (i, (got, want)) in back.iter().zip(jet.iter()).enumerate() {
        let err = (got - want).norm();
        if err > INTERP_TOL {
            return Err(Error::VerificationFailed(format!(
                "jet coefficient {i} residual {err:.3e}"
            )));
        }
    }
    Ok(())
}

/// Lower-triangular Toeplitz matrix of a jet: entry (i,j) = c_{i−j}.
///
/// This is `f(J_N)` for the nilpotent Jordan block with ones on the
/// subdiagonal, the operator target corresponding to jet data.
pub fn toeplitz_from_jet(jet: &[Complex64]) -> CMatrix {
    let n = jet.len();
    CMatrix::from_fn(n, n, |i, j| {
        if i >= j {
            jet[i - j]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// The N×N nilpotent Jordan block with ones on the subdiagonal, oriented to
/// match [`toeplitz_from_jet`]: `f(jordan_block(N)) = toeplitz_from_jet(jet)`.
pub fn jordan_block(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}
