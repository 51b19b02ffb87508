//! Rational functional calculus: evaluation of p/q at scalars and matrices,
//! and Taylor jets by power-series division.
//!
//! For rational functions whose poles avoid the closed unit disc and
//! arguments with spectral radius at most one (the only combinations
//! produced here), `p(Z)·q(Z)⁻¹` coincides with the holomorphic functional
//! calculus, and the algebraic route is exactly testable: the residual
//! `‖q(Z)·f(Z) − p(Z)‖` certifies every evaluation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{self, fro_norm, CMatrix};

/// Rational forms keep degrees at desk scale; the cascade construction
/// never exceeds this.
pub const MAX_DEGREE: usize = 16;

/// Polynomial helpers over `Vec<Complex64>` with ascending coefficients.
/// Zero is the one-element vector `[0]`; trailing exact zeros are trimmed.
pub mod poly {
    use super::*;

    pub type Poly = Vec<Complex64>;

    pub fn trim(mut p: Poly) -> Poly {
        while p.len() > 1 && p.last().map_or(false, |c| c.re == 0.0 && c.im == 0.0) {
            p.pop();
        }
        if p.is_empty() {
            p.push(Complex64::new(0.0, 0.0));
        }
        p
    }

    pub fn degree(p: &[Complex64]) -> usize {
        let mut d = p.len().saturating_sub(1);
        while d > 0 && p[d].re == 0.0 && p[d].im == 0.0 {
            d -= 1;
        }
        d
    }

    pub fn add(a: &[Complex64], b: &[Complex64]) -> Poly {
        let mut out = vec![Complex64::new(0.0, 0.0); a.len().max(b.len())];
        for (i, c) in a.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in b.iter().enumerate() {
            out[i] += c;
        }
        trim(out)
    }

    pub fn scale(a: &[Complex64], s: Complex64) -> Poly {
        trim(a.iter().map(|c| c * s).collect())
    }

    pub fn mul(a: &[Complex64], b: &[Complex64]) -> Poly {
        let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    /// Horner evaluation at a scalar.
    pub fn eval(p: &[Complex64], z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in p.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(p: &[Complex64], z: &CMatrix) -> CMatrix {
        let n = z.nrows();
        let eye = CMatrix::identity(n, n);
        let mut acc = CMatrix::zeros(n, n);
        for c in p.iter().rev() {
            acc = &acc * z + eye.scale_raw(c);
        }
        acc
    }

    /// First `len` coefficients of the power series `a/b`; requires b(0) ≠ 0.
    pub fn series_div(a: &[Complex64], b: &[Complex64], len: usize) -> Poly {
        let b0 = b[0];
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let mut c = a.get(i).copied().unwrap_or_else(|| Complex64::new(0.0, 0.0));
            for j in 1..=i.min(b.len() - 1) {
                c -= b[j] * out[i - j];
            }
            out.push(c / b0);
        }
        out
    }
}

trait ScaleRaw {
    fn scale_raw(&self, c: &Complex64) -> CMatrix;
}

impl ScaleRaw for CMatrix {
    fn scale_raw(&self, c: &Complex64) -> CMatrix {
        self.map(|x| x * c)
    }
}

/// A rational function p/q with the denominator normalized to q(0) = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalForm {
    numerator: Vec<Complex64>,
    denominator: Vec<Complex64>,
}

impl RationalForm {
    pub fn new(numerator: Vec<Complex64>, denominator: Vec<Complex64>) -> Result<Self> {
        let numerator = poly::trim(numerator);
        let denominator = poly::trim(denominator);
        if numerator.iter().chain(denominator.iter()).any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let den_scale = denominator.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
        if den_scale == 0.0 {
            return Err(Error::InvalidParameter("denominator is the zero polynomial".into()));
        }
        let q0 = denominator[0];
        if q0.norm() <= 1e-14 * den_scale {
            return Err(Error::PoleAtOrigin);
        }
        if poly::degree(&numerator).max(poly::degree(&denominator)) > MAX_DEGREE {
            return Err(Error::InvalidParameter(format!(
                "rational degree exceeds the supported bound {MAX_DEGREE}"
            )));
        }
        Ok(Self {
            numerator: poly::scale(&numerator, q0.inv()),
            denominator: poly::scale(&denominator, q0.inv()),
        })
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c], vec![Complex64::new(1.0, 0.0)]).expect("constant is well-formed")
    }

    pub fn numerator(&self) -> &[Complex64] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[Complex64] {
        &self.denominator
    }

    pub fn degree(&self) -> usize {
        poly::degree(&self.numerator).max(poly::degree(&self.denominator))
    }

    /// Rational product (pf·pg)/(qf·qg); fails if the degree bound is hit.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new(
            poly::mul(&self.numerator, &other.numerator),
            poly::mul(&self.denominator, &other.denominator),
        )
    }

    /// Rational sum over the common denominator; fails if the degree bound is hit.
    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::new(
            poly::add(
                &poly::mul(&self.numerator, &other.denominator),
                &poly::mul(&other.numerator, &self.denominator),
            ),
            poly::mul(&self.denominator, &other.denominator),
        )
    }
}

/// `f(ζ) = p(ζ)/q(ζ)`; errors with `PoleAtPoint` when the denominator
/// vanishes at the argument.
pub fn eval_scalar(f: &RationalForm, z: Complex64) -> Result<Complex64> {
    let q = poly::eval(f.denominator(), z);
    if q.norm() <= 1e-14 {
        return Err(Error::PoleAtPoint);
    }
    Ok(poly::eval(f.numerator(), z) / q)
}

/// `f(Z) = p(Z)·q(Z)⁻¹` with p(Z), q(Z) commuting polynomials in Z.
///
/// The result is certified by the residual `‖q(Z)·f(Z) − p(Z)‖ ≤
/// 1e-9·max(1, ‖p(Z)‖)`.
pub fn eval_operator(f: &RationalForm, z: &CMatrix) -> Result<CMatrix> {
    if z.nrows() != z.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "eval_operator: argument is {}x{}",
            z.nrows(),
            z.ncols()
        )));
    }
    let p_z = poly::eval_matrix(f.numerator(), z);
    let q_z = poly::eval_matrix(f.denominator(), z);
    let x = kernel::solve_linear(&q_z, &p_z).map_err(|e| match e {
        Error::Singular { .. } => Error::SingularDenominator,
        other => other,
    })?;
    let residual = fro_norm(&(&q_z * &x - &p_z));
    if residual > 1e-9 * fro_norm(&p_z).max(1.0) {
        return Err(Error::VerificationFailed(format!(
            "functional calculus residual {residual:.3e} exceeds tolerance"
        )));
    }
    Ok(x)
}

/// First `n` Taylor coefficients of p/q at the origin, by series division.
pub fn taylor_jet(f: &RationalForm, n: usize) -> Result<Vec<Complex64>> {
    if f.denominator()[0].norm() <= 1e-14 {
        return Err(Error::PoleAtOrigin);
    }
    Ok(poly::series_div(f.numerator(), f.denominator(), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{c, cr};
    use approx::assert_relative_eq;

    /// The running example f(ζ) = (0.5 − ζ)/(1 − 0.5ζ).
    fn half_blaschke() -> RationalForm {
        RationalForm::new(vec![cr(0.5), cr(-1.0)], vec![cr(1.0), cr(-0.5)]).unwrap()
    }

    fn jordan(n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |i, j| if j == i + 1 { cr(1.0) } else { cr(0.0) })
    }

    #[test]
    fn constant_evaluates_everywhere() {
        let f = RationalForm::constant(c(0.3, -0.2));
        assert_eq!(eval_scalar(&f, c(5.0, 1.0)).unwrap(), c(0.3, -0.2));
        let out = eval_operator(&f, &jordan(3)).unwrap();
        assert!(fro_norm(&(out - CMatrix::identity(3, 3).map(|x| x * c(0.3, -0.2)))) <= 1e-14);
        let jet = taylor_jet(&f, 3).unwrap();
        assert_eq!(jet, vec![c(0.3, -0.2), cr(0.0), cr(0.0)]);
    }

    #[test]
    fn identity_function() {
        let f = RationalForm::new(vec![cr(0.0), cr(1.0)], vec![cr(1.0)]).unwrap();
        assert_eq!(eval_scalar(&f, c(0.0, 1.0)).unwrap(), c(0.0, 1.0));
        let z = jordan(2);
        assert!(fro_norm(&(eval_operator(&f, &z).unwrap() - &z)) <= 1e-14);
        assert_eq!(taylor_jet(&f, 2).unwrap(), vec![cr(0.0), cr(1.0)]);
    }

    #[test]
    fn half_blaschke_values() {
        let f = half_blaschke();
        assert!(eval_scalar(&f, cr(0.5)).unwrap().norm() <= 1e-15);
        assert_relative_eq!(eval_scalar(&f, cr(0.0)).unwrap().re, 0.5, epsilon = 1e-15);

        // At the 2x2 Jordan block: (0.5I − Z)(I + 0.5Z) = 0.5I − 0.75Z.
        let z = jordan(2);
        let out = eval_operator(&f, &z).unwrap();
        let expect = CMatrix::identity(2, 2).scale(0.5) - z.scale(0.75);
        assert!(fro_norm(&(out - expect)) <= 1e-12);

        let jet = taylor_jet(&f, 2).unwrap();
        assert!((jet[0] - cr(0.5)).norm() <= 1e-15);
        assert!((jet[1] - cr(-0.75)).norm() <= 1e-15);
    }

    #[test]
    fn jet_matches_jordan_evaluation() {
        let f = half_blaschke();
        let n = 4;
        let jet = taylor_jet(&f, n).unwrap();
        let out = eval_operator(&f, &jordan(n)).unwrap();
        // f(J_n) is upper-triangular Toeplitz with the jet on its diagonals.
        for i in 0..n {
            for j in 0..n {
                let expect = if j >= i { jet[j - i] } else { cr(0.0) };
                assert!((out[(i, j)] - expect).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn normalization_fixes_denominator_at_one() {
        let f = RationalForm::new(vec![cr(2.0)], vec![cr(4.0), cr(1.0)]).unwrap();
        assert_eq!(f.denominator()[0], cr(1.0));
        assert_relative_eq!(eval_scalar(&f, cr(0.0)).unwrap().re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn homomorphism_product_and_sum() {
        let f = half_blaschke();
        let g = RationalForm::new(vec![cr(0.2), c(0.0, 0.3)], vec![cr(1.0), cr(0.4)]).unwrap();
        let z = CMatrix::from_row_slice(2, 2, &[cr(0.2), cr(0.5), cr(0.0), cr(-0.3)]);

        let prod = eval_operator(&f.mul(&g).unwrap(), &z).unwrap();
        let sep = eval_operator(&f, &z).unwrap() * eval_operator(&g, &z).unwrap();
        assert!(fro_norm(&(prod - sep)) <= 1e-8);

        let sum = eval_operator(&f.add(&g).unwrap(), &z).unwrap();
        let sep = eval_operator(&f, &z).unwrap() + eval_operator(&g, &z).unwrap();
        assert!(fro_norm(&(sum - sep)) <= 1e-8);
    }

    #[test]
    fn spectral_mapping_on_diagonal() {
        let f = half_blaschke();
        let z = CMatrix::from_row_slice(2, 2, &[cr(0.3), cr(0.0), cr(0.0), cr(-0.5)]);
        let out = eval_operator(&f, &z).unwrap();
        for (idx, lam) in [cr(0.3), cr(-0.5)].iter().enumerate() {
            let expect = eval_scalar(&f, *lam).unwrap();
            assert!((out[(idx, idx)] - expect).norm() <= 1e-12);
        }
    }

    #[test]
    fn pole_errors() {
        let f = RationalForm::new(vec![cr(1.0)], vec![cr(1.0), cr(-2.0)]).unwrap();
        assert!(matches!(eval_scalar(&f, cr(0.5)), Err(Error::PoleAtPoint)));

        let z = CMatrix::from_row_slice(2, 2, &[cr(0.5), cr(0.0), cr(0.0), cr(0.0)]);
        assert!(matches!(eval_operator(&f, &z), Err(Error::SingularDenominator)));

        assert!(matches!(
            RationalForm::new(vec![cr(1.0)], vec![cr(0.0), cr(1.0)]),
            Err(Error::PoleAtOrigin)
        ));
    }

    #[test]
    fn degree_bound_enforced() {
        let mut num = vec![cr(0.0); 18];
        num[17] = cr(1.0);
        assert!(matches!(
            RationalForm::new(num, vec![cr(1.0)]),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn series_division_reproduces_geometric() {
        // 1/(1 − ζ) = 1 + ζ + ζ² + …
        let out = poly::series_div(&[cr(1.0)], &[cr(1.0), cr(-1.0)], 5);
        for c in out {
            assert!((c - cr(1.0)).norm() <= 1e-15);
        }
    }
}
