//! Completely positive maps on block matrix algebras.
//!
//! The objects here are the data of the interpolation problem: operator
//! points (row-contractive d-tuples of k×k matrices), the CP maps they
//! induce on M_m(M_k), and the three standard representations used to
//! decide things about those maps:
//!
//! * Kraus form `Φ(A) = Σ_s K_s A K_s*`, the construction-time format;
//! * the superoperator matrix acting on column-vectorized inputs, used
//!   whenever `I − Φ` has to be inverted;
//! * the Choi matrix `Σ_pq E_pq ⊗ Φ(E_pq)`, whose positivity decides
//!   complete positivity.
//!
//! Conventions are bit-fixed: vectorization is column-major and the Choi
//! matrix carries the domain index in the first tensor factor.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{
    self, all_finite, fro_norm, psd_verdict, vec_cm, unvec_cm, CMatrix, PsdVerdict,
    ToleranceConfig,
};

/// Threshold for the structural nilpotency test; word products of strictly
/// triangular blocks are exact zeros in floating point, so this only has to
/// absorb dust from similarity-transformed inputs.
const NILPOTENCY_TOL: f64 = 1e-12;

/// A point of the noncommutative disc: a d-tuple of k×k matrices
/// `(Z^(1), …, Z^(d))` acting as one row operator `[Z^(1) … Z^(d)]`.
///
/// The row norm is recorded at construction; `row_norm() < 1` is the open
/// disc, `row_norm() == 1` the boundary. Jointly nilpotent boundary tuples
/// are the exactly-decidable boundary case, detected structurally.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPoint {
    blocks: Vec<CMatrix>,
    row_norm: f64,
}

impl OperatorPoint {
    pub fn new(blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::ShapeMismatch("point needs at least one block".into()));
        }
        let k = blocks[0].nrows();
        for (t, b) in blocks.iter().enumerate() {
            if b.nrows() != k || b.ncols() != k {
                return Err(Error::ShapeMismatch(format!(
                    "block {t} is {}x{}, expected {k}x{k}",
                    b.nrows(),
                    b.ncols()
                )));
            }
            if !all_finite(b) {
                return Err(Error::NonFinite);
            }
        }
        // Norm of the 1×d block row equals the square root of ‖Σ Z_t Z_t*‖.
        let mut row = CMatrix::zeros(k, k * blocks.len());
        for (t, b) in blocks.iter().enumerate() {
            row.view_mut((0, t * k), (k, k)).copy_from(b);
        }
        let row_norm = kernel::operator_norm(&row)?;
        Ok(Self { blocks, row_norm })
    }

    /// Single-matrix point (d = 1), the classical case.
    pub fn from_matrix(z: CMatrix) -> Result<Self> {
        Self::new(vec![z])
    }

    /// Scalar point (d = 1, k = 1).
    pub fn scalar(z: Complex64) -> Self {
        Self::new(vec![CMatrix::from_element(1, 1, z)]).expect("scalar point is well-formed")
    }

    pub fn d(&self) -> usize {
        self.blocks.len()
    }

    pub fn k(&self) -> usize {
        self.blocks[0].nrows()
    }

    pub fn block(&self, t: usize) -> &CMatrix {
        &self.blocks[t]
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    /// Operator norm of the block row `[Z^(1) … Z^(d)]`, cached.
    pub fn row_norm(&self) -> f64 {
        self.row_norm
    }

    /// One application of the point's CP map `Θ(X) = Σ_t Z^(t) X Z^(t)*`.
    pub fn theta_apply(&self, x: &CMatrix) -> CMatrix {
        let k = self.k();
        let mut acc = CMatrix::zeros(k, k);
        for b in &self.blocks {
            acc += b * x * b.adjoint();
        }
        acc
    }

    /// Least N ≤ k with all words of length N vanishing, if one exists.
    ///
    /// `Θ^N(I) = Σ_{|w|=N} Z_w Z_w*` is zero exactly when every length-N
    /// word does, and a jointly nilpotent k×k tuple vanishes by length k,
    /// so checking k iterates decides the question.
    pub fn nilpotency_order(&self) -> Option<usize> {
        let k = self.k();
        let mut x = CMatrix::identity(k, k);
        for n in 1..=k {
            x = self.theta_apply(&x);
            if fro_norm(&x) <= NILPOTENCY_TOL {
                return Some(n);
            }
        }
        None
    }

    pub fn is_jointly_nilpotent(&self) -> bool {
        self.nilpotency_order().is_some()
    }
}

fn block_diag(blocks: &[CMatrix]) -> CMatrix {
    let k = blocks[0].nrows();
    let mut out = CMatrix::zeros(k * blocks.len(), k * blocks.len());
    for (i, b) in blocks.iter().enumerate() {
        out.view_mut((i * k, i * k), (k, k)).copy_from(b);
    }
    out
}

/// The n×n matrix unit E_pq.
pub fn matrix_unit(n: usize, p: usize, q: usize) -> CMatrix {
    let mut e = CMatrix::zeros(n, n);
    e[(p, q)] = Complex64::new(1.0, 0.0);
    e
}

/// A completely positive map on M_m(M_k) ≅ M_{mk}, stored in Kraus form.
///
/// The label is advisory metadata describing how the map was built; every
/// verdict is computed from the Kraus data alone.
#[derive(Debug, Clone)]
pub struct CpMap {
    m: usize,
    k: usize,
    kraus: Vec<CMatrix>,
    label: Option<String>,
}

impl CpMap {
    pub fn from_kraus(m: usize, k: usize, kraus: Vec<CMatrix>) -> Result<Self> {
        let dim = m * k;
        if dim == 0 {
            return Err(Error::ShapeMismatch("zero-dimensional carrier".into()));
        }
        for (s, ks) in kraus.iter().enumerate() {
            if ks.nrows() != dim || ks.ncols() != dim {
                return Err(Error::ShapeMismatch(format!(
                    "Kraus operator {s} is {}x{}, expected {dim}x{dim}",
                    ks.nrows(),
                    ks.ncols()
                )));
            }
            if !all_finite(ks) {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self { m, k, kraus, label: None })
    }

    pub fn identity(m: usize, k: usize) -> Self {
        let dim = m * k;
        Self {
            m,
            k,
            kraus: vec![CMatrix::identity(dim, dim)],
            label: Some("identity".into()),
        }
    }

    /// The zero map, represented by an empty Kraus family.
    pub fn zero(m: usize, k: usize) -> Self {
        Self { m, k, kraus: Vec::new(), label: Some("zero".into()) }
    }

    /// `Φ_𝔷((a_ij)) = (Σ_t Z_i^(t) a_ij Z_j^(t)*)` for points 𝔷_1…𝔷_m.
    ///
    /// One Kraus operator per letter: K_t = diag(Z_1^(t), …, Z_m^(t)).
    pub fn phi_from_points(points: &[OperatorPoint]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::ShapeMismatch("phi_from_points needs at least one point".into()));
        }
        let d = points[0].d();
        let k = points[0].k();
        for (i, p) in points.iter().enumerate() {
            if p.d() != d || p.k() != k {
                return Err(Error::ShapeMismatch(format!(
                    "point {i} has (d,k) = ({},{}), expected ({d},{k})",
                    p.d(),
                    p.k()
                )));
            }
        }
        let kraus = (0..d)
            .map(|t| {
                let blocks: Vec<CMatrix> = points.iter().map(|p| p.block(t).clone()).collect();
                block_diag(&blocks)
            })
            .collect();
        Ok(Self {
            m: points.len(),
            k,
            kraus,
            label: Some(format!("phi_points(m={}, d={d}, k={k})", points.len())),
        })
    }

    /// `Φ_W((a_ij)) = (W_i a_ij W_j*)`: a single Kraus operator diag(W_1,…,W_m).
    pub fn phi_from_targets(targets: &[CMatrix]) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::ShapeMismatch("phi_from_targets needs at least one target".into()));
        }
        let k = targets[0].nrows();
        for (i, w) in targets.iter().enumerate() {
            if w.nrows() != k || w.ncols() != k {
                return Err(Error::ShapeMismatch(format!(
                    "target {i} is {}x{}, expected {k}x{k}",
                    w.nrows(),
                    w.ncols()
                )));
            }
            if !all_finite(w) {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self {
            m: targets.len(),
            k,
            kraus: vec![block_diag(targets)],
            label: Some(format!("phi_targets(m={}, k={k})", targets.len())),
        })
    }

    /// The single-point map `Θ_𝔷(a) = Σ_t Z^(t) a Z^(t)*` on M_k.
    pub fn theta_from_point(point: &OperatorPoint) -> Self {
        Self::phi_from_points(std::slice::from_ref(point)).expect("single point is consistent")
    }

    pub fn block_count(&self) -> usize {
        self.m
    }

    pub fn block_size(&self) -> usize {
        self.k
    }

    /// Dimension of the carrier algebra M_{mk}.
    pub fn dim(&self) -> usize {
        self.m * self.k
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn apply(&self, a: &CMatrix) -> Result<CMatrix> {
        let dim = self.dim();
        if a.nrows() != dim || a.ncols() != dim {
            return Err(Error::ShapeMismatch(format!(
                "apply: input is {}x{}, map acts on {dim}x{dim}",
                a.nrows(),
                a.ncols()
            )));
        }
        let mut acc = CMatrix::zeros(dim, dim);
        for ks in &self.kraus {
            acc += ks * a * ks.adjoint();
        }
        Ok(acc)
    }

    /// Composition `self ∘ inner`; Kraus family of all products, with exact
    /// zero products pruned (keeps nilpotent iterates from accumulating
    /// empty weight).
    pub fn compose(&self, inner: &CpMap) -> Result<CpMap> {
        if self.dim() != inner.dim() {
            return Err(Error::ShapeMismatch(format!(
                "compose: dimensions {} and {} differ",
                self.dim(),
                inner.dim()
            )));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * inner.kraus.len());
        for a in &self.kraus {
            for b in &inner.kraus {
                let prod = a * b;
                if prod.iter().any(|z| z.re != 0.0 || z.im != 0.0) {
                    kraus.push(prod);
                }
            }
        }
        Ok(CpMap { m: self.m, k: self.k, kraus, label: None })
    }

    /// Promotion to M_r(M_{mk}): blocks transform entrywise, `(A_uv) ↦ (Φ(A_uv))`.
    ///
    /// With the outer index first, the promoted Kraus operators are
    /// `I_r ⊗ K_s`.
    pub fn promote(&self, r: usize) -> CpMap {
        if r == 1 {
            return self.clone();
        }
        let eye = CMatrix::identity(r, r);
        let kraus = self.kraus.iter().map(|ks| eye.kronecker(ks)).collect();
        CpMap { m: r * self.m, k: self.k, kraus, label: None }
    }

    /// Superoperator matrix: `vec(Φ(A)) = S vec(A)` with `S = Σ_s conj(K_s) ⊗ K_s`.
    pub fn superoperator(&self) -> Superoperator {
        let dim = self.dim();
        let mut s = CMatrix::zeros(dim * dim, dim * dim);
        for ks in &self.kraus {
            s += ks.conjugate().kronecker(ks);
        }
        Superoperator { n: dim, matrix: s }
    }

    /// Choi matrix by the Kraus route: `Σ_s vec(K_s) vec(K_s)*`.
    ///
    /// Equals `Σ_pq E_pq ⊗ Φ(E_pq)` in the fixed conventions; the
    /// matrix-unit route lives on [`Superoperator::choi`] as the
    /// independent cross-check.
    pub fn choi(&self) -> CMatrix {
        let dim = self.dim();
        let mut c = CMatrix::zeros(dim * dim, dim * dim);
        for ks in &self.kraus {
            let v = vec_cm(ks);
            c += &v * v.adjoint();
        }
        c
    }
}

/// A general linear map on M_n in matrix form (n² × n², column-major
/// vectorization). Unlike [`CpMap`] this carries no positivity structure:
/// it is the representation in which `I − Φ` is inverted and the Pick
/// operator lives.
#[derive(Debug, Clone)]
pub struct Superoperator {
    n: usize,
    matrix: CMatrix,
}

impl Superoperator {
    pub fn new(n: usize, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != n * n || matrix.ncols() != n * n {
            return Err(Error::ShapeMismatch(format!(
                "superoperator on M_{n} must be {}x{}, got {}x{}",
                n * n,
                n * n,
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if !all_finite(&matrix) {
            return Err(Error::NonFinite);
        }
        Ok(Self { n, matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self { n, matrix: CMatrix::identity(n * n, n * n) }
    }

    /// Carrier dimension n (the map acts on M_n).
    pub fn carrier_dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, a: &CMatrix) -> Result<CMatrix> {
        if a.nrows() != self.n || a.ncols() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "superoperator apply: input is {}x{}, expected {}x{}",
                a.nrows(),
                a.ncols(),
                self.n,
                self.n
            )));
        }
        Ok(unvec_cm(&(&self.matrix * vec_cm(a)), self.n, self.n))
    }

    /// Choi matrix by the matrix-unit route: block (p,q) is `L(E_pq)`,
    /// read off as column q·n+p of the superoperator matrix.
    pub fn choi(&self) -> CMatrix {
        let n = self.n;
        let mut c = CMatrix::zeros(n * n, n * n);
        for q in 0..n {
            for p in 0..n {
                let col = self.matrix.column(q * n + p);
                let image = unvec_cm(&col.into_owned(), n, n);
                c.view_mut((p * n, q * n), (n, n)).copy_from(&image);
            }
        }
        c
    }

    /// `‖Choi(L) − Choi(L)*‖`, zero exactly when L maps Hermitian to Hermitian.
    pub fn hermiticity_defect(&self) -> f64 {
        kernel::hermitian_defect(&self.choi())
    }
}

/// Complete-positivity verdict for a linear map in superoperator form:
/// psd_verdict of the Choi matrix (Choi's criterion). NotPsd carries the
/// negative eigenpair, the raw material for violation witnesses.
///
/// Errors with `NotHermiticityPreserving` when `L(E_pq)* ≠ L(E_qp)` beyond
/// tolerance, which is exactly a non-Hermitian Choi matrix.
pub fn is_completely_positive(l: &Superoperator, tol: &ToleranceConfig) -> Result<PsdVerdict> {
    let choi = l.choi();
    let defect = kernel::hermitian_defect(&choi);
    let gate = tol.residual_tol * fro_norm(&choi).max(1.0);
    if defect > gate {
        return Err(Error::NotHermiticityPreserving { deviation: defect });
    }
    psd_verdict(&choi, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{c, cr, operator_norm};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        let a = random_matrix(rng, n, n);
        (&a + a.adjoint()).scale(0.5)
    }

    fn jordan2() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(0.0), cr(0.0)])
    }

    #[test]
    fn point_row_norm_and_nilpotency() {
        let p = OperatorPoint::from_matrix(jordan2()).unwrap();
        assert_relative_eq!(p.row_norm(), 1.0, epsilon = 1e-12);
        assert_eq!(p.nilpotency_order(), Some(2));

        let q = OperatorPoint::scalar(c(0.3, 0.4));
        assert_relative_eq!(q.row_norm(), 0.5, epsilon = 1e-12);
        assert!(!q.is_jointly_nilpotent());

        // d = 2 row norm: [I/2, I/2] has row norm sqrt(1/2).
        let half = CMatrix::identity(2, 2).scale(0.5);
        let r = OperatorPoint::new(vec![half.clone(), half]).unwrap();
        assert_relative_eq!(r.row_norm(), (0.5f64).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn point_rejects_mixed_shapes() {
        let res = OperatorPoint::new(vec![jordan2(), CMatrix::zeros(3, 3)]);
        assert!(matches!(res, Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn zero_point_gives_zero_map() {
        let p = OperatorPoint::from_matrix(CMatrix::zeros(2, 2)).unwrap();
        let phi = CpMap::phi_from_points(&[p]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_hermitian(&mut rng, 2);
        assert_eq!(fro_norm(&phi.apply(&a).unwrap()), 0.0);
    }

    #[test]
    fn scalar_points_act_entrywise() {
        let z1 = c(0.3, 0.1);
        let z2 = c(-0.2, 0.4);
        let phi = CpMap::phi_from_points(&[OperatorPoint::scalar(z1), OperatorPoint::scalar(z2)])
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_matrix(&mut rng, 2, 2);
        let out = phi.apply(&a).unwrap();
        let zs = [z1, z2];
        for i in 0..2 {
            for j in 0..2 {
                let expect = zs[i] * a[(i, j)] * zs[j].conj();
                assert!((out[(i, j)] - expect).norm() <= 1e-14);
            }
        }
    }

    #[test]
    fn scalar_superoperator_is_schur_multiplier() {
        let zs = [c(0.5, 0.2), c(-0.1, 0.6), c(0.0, -0.4)];
        let points: Vec<OperatorPoint> = zs.iter().map(|&z| OperatorPoint::scalar(z)).collect();
        let s = CpMap::phi_from_points(&points).unwrap().superoperator();
        let m = s.matrix();
        for i in 0..3 {
            for j in 0..3 {
                let idx = j * 3 + i;
                for col in 0..9 {
                    let expect = if col == idx { zs[i] * zs[j].conj() } else { cr(0.0) };
                    assert!((m[(idx, col)] - expect).norm() <= 1e-15);
                }
            }
        }
    }

    #[test]
    fn two_letter_point_matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_matrix(&mut rng, 2, 2);
        let b = random_matrix(&mut rng, 2, 2);
        let p = OperatorPoint::new(vec![a.clone(), b.clone()]).unwrap();
        let phi = CpMap::phi_from_points(std::slice::from_ref(&p)).unwrap();
        let x = random_hermitian(&mut rng, 2);
        let direct = &a * &x * a.adjoint() + &b * &x * b.adjoint();
        assert!(fro_norm(&(phi.apply(&x).unwrap() - direct)) <= 1e-13);
    }

    #[test]
    fn targets_identity_and_zero() {
        let eye = CMatrix::identity(2, 2);
        let phi = CpMap::phi_from_targets(&[eye.clone(), eye]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_hermitian(&mut rng, 4);
        assert!(fro_norm(&(phi.apply(&a).unwrap() - &a)) <= 1e-13);

        let zero = CMatrix::zeros(2, 2);
        let psi = CpMap::phi_from_targets(&[zero.clone(), zero]).unwrap();
        assert_eq!(fro_norm(&psi.apply(&a).unwrap()), 0.0);
    }

    #[test]
    fn targets_act_blockwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w1 = random_matrix(&mut rng, 2, 2);
        let w2 = random_matrix(&mut rng, 2, 2);
        let phi = CpMap::phi_from_targets(&[w1.clone(), w2.clone()]).unwrap();
        let a = random_hermitian(&mut rng, 4);
        let out = phi.apply(&a).unwrap();
        let ws = [w1, w2];
        for i in 0..2 {
            for j in 0..2 {
                let block = a.view((2 * i, 2 * j), (2, 2)).into_owned();
                let expect = &ws[i] * block * ws[j].adjoint();
                let got = out.view((2 * i, 2 * j), (2, 2)).into_owned();
                assert!(fro_norm(&(got - expect)) <= 1e-13);
            }
        }
    }

    #[test]
    fn apply_preserves_hermiticity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let p1 = OperatorPoint::from_matrix(random_matrix(&mut rng, 2, 2)).unwrap();
        let p2 = OperatorPoint::from_matrix(random_matrix(&mut rng, 2, 2)).unwrap();
        let phi = CpMap::phi_from_points(&[p1, p2]).unwrap();
        let a = random_hermitian(&mut rng, 4);
        let out = phi.apply(&a).unwrap();
        assert!(kernel::hermitian_defect(&out) <= 1e-12);
    }

    #[test]
    fn phi_of_identity_is_zz_star() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let z = random_matrix(&mut rng, 3, 3).scale(0.3);
        let p = OperatorPoint::from_matrix(z.clone()).unwrap();
        let phi = CpMap::theta_from_point(&p);
        let out = phi.apply(&CMatrix::identity(3, 3)).unwrap();
        assert!(fro_norm(&(&out - &z * z.adjoint())) <= 1e-13);
        assert!(operator_norm(&out).unwrap() < 1.0);
    }

    #[test]
    fn compose_matches_sequential_apply() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = OperatorPoint::from_matrix(random_matrix(&mut rng, 2, 2)).unwrap();
        let phi = CpMap::theta_from_point(&p);
        let ident = CpMap::identity(1, 2);
        let a = random_hermitian(&mut rng, 2);

        let with_id = phi.compose(&ident).unwrap();
        assert!(fro_norm(&(with_id.apply(&a).unwrap() - phi.apply(&a).unwrap())) <= 1e-13);

        let squared = phi.compose(&phi).unwrap();
        let sequential = phi.apply(&phi.apply(&a).unwrap()).unwrap();
        assert!(fro_norm(&(squared.apply(&a).unwrap() - sequential)) <= 1e-12);
    }

    #[test]
    fn nilpotent_composition_vanishes() {
        let p = OperatorPoint::from_matrix(jordan2()).unwrap();
        let phi = CpMap::theta_from_point(&p);
        let twice = phi.compose(&phi).unwrap();
        // All Kraus products are exactly zero and pruned.
        assert!(twice.kraus().is_empty());
    }

    #[test]
    fn promote_acts_blockwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = OperatorPoint::from_matrix(random_matrix(&mut rng, 2, 2)).unwrap();
        let phi = CpMap::theta_from_point(&p);
        assert_eq!(phi.promote(1).dim(), phi.dim());

        let promoted = phi.promote(2);
        assert_eq!(promoted.dim(), 4);
        let a = random_hermitian(&mut rng, 4);
        let out = promoted.apply(&a).unwrap();
        for u in 0..2 {
            for v in 0..2 {
                let block = a.view((2 * u, 2 * v), (2, 2)).into_owned();
                let expect = phi.apply(&block).unwrap();
                let got = out.view((2 * u, 2 * v), (2, 2)).into_owned();
                assert!(fro_norm(&(got - expect)) <= 1e-12);
            }
        }
    }

    #[test]
    fn superoperator_agrees_with_kraus() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let p1 = OperatorPoint::new(vec![
            random_matrix(&mut rng, 2, 2),
            random_matrix(&mut rng, 2, 2),
        ])
        .unwrap();
        let p2 = OperatorPoint::new(vec![
            random_matrix(&mut rng, 2, 2),
            random_matrix(&mut rng, 2, 2),
        ])
        .unwrap();
        let phi = CpMap::phi_from_points(&[p1, p2]).unwrap();
        let s = phi.superoperator();
        let a = random_matrix(&mut rng, 4, 4);
        assert!(fro_norm(&(s.apply(&a).unwrap() - phi.apply(&a).unwrap())) <= 1e-10);
    }

    #[test]
    fn choi_of_identity_map() {
        // Choi(id on M_2) = Σ E_pq ⊗ E_pq: rank one, eigenvalues (2,0,0,0).
        let choi = CpMap::identity(1, 2).choi();
        let eig = kernel::hermitian_eig(&choi, &tol()).unwrap();
        let expect = [0.0, 0.0, 0.0, 2.0];
        for (got, want) in eig.values.iter().zip(expect.iter()) {
            assert_relative_eq!(*got, *want, epsilon = 1e-12);
        }
    }

    #[test]
    fn choi_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p1 = OperatorPoint::from_matrix(random_matrix(&mut rng, 2, 2)).unwrap();
        let p2 = OperatorPoint::from_matrix(random_matrix(&mut rng, 2, 2)).unwrap();
        let phi = CpMap::phi_from_points(&[p1, p2]).unwrap();
        let via_kraus = phi.choi();
        let via_units = phi.superoperator().choi();
        assert!(fro_norm(&(via_kraus - via_units)) <= 1e-12);
    }

    #[test]
    fn choi_of_zero_map_is_zero() {
        assert_eq!(fro_norm(&CpMap::zero(2, 1).choi()), 0.0);
    }

    #[test]
    fn kraus_maps_are_cp() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..5 {
            let p = OperatorPoint::from_matrix(random_matrix(&mut rng, 3, 3)).unwrap();
            let phi = CpMap::theta_from_point(&p);
            let verdict = is_completely_positive(&phi.superoperator(), &tol()).unwrap();
            assert!(verdict.is_psd());
        }
    }

    #[test]
    fn identity_superoperator_is_cp() {
        let verdict = is_completely_positive(&Superoperator::identity(2), &tol()).unwrap();
        assert!(verdict.is_psd());
    }

    #[test]
    fn transpose_map_is_not_cp() {
        // vec(Xᵀ) permutes vec(X): entry (i,j) at position j·n+i moves to i·n+j.
        let n = 2;
        let mut s = CMatrix::zeros(4, 4);
        for i in 0..n {
            for j in 0..n {
                s[(i * n + j, j * n + i)] = cr(1.0);
            }
        }
        let t = Superoperator::new(2, s).unwrap();
        let verdict = is_completely_positive(&t, &tol()).unwrap();
        assert!(!verdict.is_psd());
        assert_relative_eq!(verdict.min_eigenvalue(), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn one_sided_multiplication_is_not_hermiticity_preserving() {
        // L(X) = J X with J the Jordan block: L(E_01)* ≠ L(E_10).
        let s = CMatrix::identity(2, 2).kronecker(&jordan2());
        let l = Superoperator::new(2, s).unwrap();
        assert!(matches!(
            is_completely_positive(&l, &tol()),
            Err(Error::NotHermiticityPreserving { .. })
        ));
    }

    #[test]
    fn cp_maps_preserve_psd_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let p1 = OperatorPoint::from_matrix(random_matrix(&mut rng, 2, 2)).unwrap();
            let p2 = OperatorPoint::from_matrix(random_matrix(&mut rng, 2, 2)).unwrap();
            let phi = CpMap::phi_from_points(&[p1, p2]).unwrap();
            let b = random_matrix(&mut rng, 4, 4);
            let psd_in = &b * b.adjoint();
            let out = phi.apply(&psd_in).unwrap();
            assert!(psd_verdict(&out, &tol()).unwrap().is_psd());
        }
    }
}
