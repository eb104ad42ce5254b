//! Floating-point spectra of symmetric matrices.
//!
//! Eigenvalues come from a cyclic Jacobi rotation scheme. The least
//! positive eigenvalue `λ₊` and the largest negative eigenvalue `λ₋` of a
//! symmetric `M` satisfy `λ₊ = 1 / λmax(M†)` and `λ₋ = 1 / λmin(M†)`, and
//! in Löwner-order form
//!
//! ```text
//! λ₊(M) = max { μ >= 0 : μ M† ⪯ I },   λ₋(M) = -max { η >= 0 : -η M† ⪯ I }
//! ```
//!
//! which [`lambda_plus_by_bisection`] and [`lambda_minus_by_bisection`]
//! realize by bisection over a PSD test.

use serde::Serialize;

use crate::blockops::BlockSystem;
use crate::error::{Error, Result};
use crate::ratmath::{MathError, RatMatrix};

/// Dense square `f64` matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatMatrix {
    n: usize,
    data: Vec<f64>,
}

impl FloatMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(MathError::Shape(format!("{} entries for a {n}x{n} matrix", data.len())).into());
        }
        Ok(FloatMatrix { n, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        FloatMatrix { n, data }
    }

    pub fn from_rat(a: &RatMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(MathError::Shape(format!("{}x{} matrix is not square", a.rows(), a.cols())).into());
        }
        Ok(FloatMatrix {
            n: a.rows(),
            data: a.to_f64(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: f64, other: &FloatMatrix) -> FloatMatrix {
        assert_eq!(self.n, other.n);
        FloatMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + factor * b).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let scale = self.frobenius_norm().max(1.0);
        (0..self.n).all(|i| (i + 1..self.n).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol * scale))
    }
}

const JACOBI_REL_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi
/// rotations. Sweeps stop once the off-diagonal Frobenius norm falls below
/// `1e-12 ‖A‖_F`.
pub fn jacobi_eigenvalues(m: &FloatMatrix) -> Result<Vec<f64>> {
    if !m.is_symmetric(1e-12) {
        return Err(MathError::Shape("matrix is not symmetric".into()).into());
    }
    let n = m.n;
    let mut a = m.data.clone();
    let norm = m.frobenius_norm();
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off(&a) <= JACOBI_REL_TOL * norm {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

pub fn sym_eigenvalues(a: &RatMatrix) -> Result<Vec<f64>> {
    if !a.is_symmetric() {
        return Err(MathError::Shape("matrix is not symmetric".into()).into());
    }
    jacobi_eigenvalues(&FloatMatrix::from_rat(a)?)
}

/// Eigenvalues with the exact number of zero eigenvalues (from the exact
/// rank) clamped to `0.0`: the `n - rank` smallest in magnitude.
pub fn clamped_eigenvalues(a: &RatMatrix) -> Result<Vec<f64>> {
    let mut eig = sym_eigenvalues(a)?;
    let zeros = a.rows() - a.rank();
    let mut by_magnitude: Vec<usize> = (0..eig.len()).collect();
    by_magnitude.sort_by(|&i, &j| eig[i].abs().total_cmp(&eig[j].abs()));
    for &i in &by_magnitude[..zeros] {
        eig[i] = 0.0;
    }
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Spectrum plus HOMO-LUMO quantities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<f64>,
    pub lambda_plus: Option<f64>,
    pub lambda_minus: Option<f64>,
    pub gap: Option<f64>,
    pub index: Option<f64>,
    /// `λ₊ = 1/λmax(M†)` and `λ₋ = 1/λmin(M†)` agree within `1e-8`
    /// wherever both sides exist.
    pub reciprocal_check: bool,
}

const ZERO_REL_TOL: f64 = 1e-9;
const RECIPROCAL_TOL: f64 = 1e-8;

fn extremes(eig: &[f64]) -> (Option<f64>, Option<f64>) {
    let radius = eig.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let cut = ZERO_REL_TOL * radius;
    let plus = eig.iter().copied().filter(|&x| x > cut).reduce(f64::min);
    let minus = eig.iter().copied().filter(|&x| x < -cut).reduce(f64::max);
    (plus, minus)
}

pub fn spectral_summary(a: &RatMatrix) -> Result<SpectralSummary> {
    let eigenvalues = clamped_eigenvalues(a)?;
    let (lambda_plus, lambda_minus) = extremes(&eigenvalues);
    let gap = lambda_plus.zip(lambda_minus).map(|(p, m)| p - m);
    let index = lambda_plus.zip(lambda_minus).map(|(p, m)| p.abs().max(m.abs()));

    let pinv_eig = clamped_eigenvalues(&a.pinv())?;
    let close = |x: f64, y: f64| (x - y).abs() <= RECIPROCAL_TOL * x.abs().max(1.0);
    let pinv_max = pinv_eig.last().copied().filter(|&x| x > 0.0);
    let pinv_min = pinv_eig.first().copied().filter(|&x| x < 0.0);
    let plus_ok = match (lambda_plus, pinv_max) {
        (Some(l), Some(p)) => close(l, 1.0 / p),
        (None, None) => true,
        _ => false,
    };
    let minus_ok = match (lambda_minus, pinv_min) {
        (Some(l), Some(p)) => close(l, 1.0 / p),
        (None, None) => true,
        _ => false,
    };
    Ok(SpectralSummary {
        eigenvalues,
        lambda_plus,
        lambda_minus,
        gap,
        index,
        reciprocal_check: plus_ok && minus_ok,
    })
}

/// Minimum eigenvalue `>= -tol`.
pub fn is_psd(m: &FloatMatrix, tol: f64) -> Result<bool> {
    let eig = jacobi_eigenvalues(m)?;
    Ok(eig.first().is_none_or(|&x| x >= -tol))
}

/// Which Löwner inequality: `μ M† ⪯ I` (`Plus`) or `-η M† ⪯ I` (`Minus`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Plus => -1.0,
            Side::Minus => 1.0,
        }
    }
}

pub const LMI_TOL: f64 = 1e-8;

/// `I - μ M† ⪰ 0` (`Plus`) or `I + μ M† ⪰ 0` (`Minus`) at tolerance `1e-8`.
pub fn direct_lmi_check(pinv: &RatMatrix, mu: f64, side: Side) -> Result<bool> {
    let p = FloatMatrix::from_rat(pinv)?;
    is_psd(&FloatMatrix::identity(p.dim()).add_scaled(side.sign() * mu, &p), LMI_TOL)
}

const BISECTION_WIDTH: f64 = 1e-10;
const BISECTION_MAX_ITERS: usize = 200;

fn bisect_feasible(pinv: &FloatMatrix, side: Side, smallest_nonzero: f64) -> Result<f64> {
    let id = FloatMatrix::identity(pinv.dim());
    let feasible = |mu: f64| is_psd(&id.add_scaled(side.sign() * mu, pinv), 0.0);
    let mut lo = 0.0;
    let mut hi = 2.0 / smallest_nonzero.abs();
    let mut iters = 0;
    while feasible(hi)? {
        lo = hi;
        hi *= 2.0;
        iters += 1;
        if iters > BISECTION_MAX_ITERS {
            return Err(Error::PreconditionFailed("bisection bracket did not close".into()));
        }
    }
    for _ in 0..BISECTION_MAX_ITERS {
        if hi - lo < BISECTION_WIDTH {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn smallest_nonzero_magnitude(eig: &[f64]) -> Option<f64> {
    eig.iter().copied().filter(|&x| x != 0.0).map(f64::abs).reduce(f64::min)
}

/// `λ₊(M) = max { μ : μ M† ⪯ I }`, by bisection on `μ`.
pub fn lambda_plus_by_bisection(m: &RatMatrix) -> Result<f64> {
    let eig = clamped_eigenvalues(m)?;
    if extremes(&eig).0.is_none() {
        return Err(Error::NoPositiveEigenvalue);
    }
    let est = smallest_nonzero_magnitude(&eig).expect("a positive eigenvalue exists");
    bisect_feasible(&FloatMatrix::from_rat(&m.pinv())?, Side::Plus, est)
}

/// `λ₋(M) = -max { η : -η M† ⪯ I }`, by bisection on `η`.
pub fn lambda_minus_by_bisection(m: &RatMatrix) -> Result<f64> {
    let eig = clamped_eigenvalues(m)?;
    if extremes(&eig).1.is_none() {
        return Err(Error::NoNegativeEigenvalue);
    }
    let est = smallest_nonzero_magnitude(&eig).expect("a negative eigenvalue exists");
    Ok(-bisect_feasible(&FloatMatrix::from_rat(&m.pinv())?, Side::Minus, est)?)
}

/// The block form of `μ M† ⪯ I` (or `-μ M† ⪯ I`) for `M = ((A, K), (Kᵀ, B))`
/// with `K` (A,B)-compatible: PSD-ness of
///
/// ```text
/// ( I ∓ μ S_A†     K B†               )
/// ( B† Kᵀ          I ∓ μ B† + B† Kᵀ K B† )
/// ```
///
/// at tolerance `1e-8`.
pub fn block_lmi_check(sys: &BlockSystem, mu: f64, side: Side) -> Result<bool> {
    if mu < 0.0 {
        return Err(Error::PreconditionFailed("μ must be nonnegative".into()));
    }
    let compat = sys.compatibility();
    if !compat.k_is_compatible() {
        return Err(Error::IncompatibleBlocks(
            "K(I - B†B) = 0 and (I - S_A S_A†)K = 0 are required".into(),
        ));
    }
    let parts = sys.schur_parts();
    let kbp = sys.k().matmul(&parts.b_pinv)?;
    let bottom = kbp.transpose().matmul(&kbp)?;
    let (n, m) = (sys.n(), sys.m());
    let s = side.sign() * mu;
    let sa = FloatMatrix::from_rat(&parts.s_a_pinv)?;
    let bp = FloatMatrix::from_rat(&parts.b_pinv)?;
    let bt = FloatMatrix::from_rat(&bottom)?;
    let kbp_f = kbp.to_f64();
    let size = n + m;
    let mut data = vec![0.0; size * size];
    for i in 0..n {
        for j in 0..n {
            data[i * size + j] = f64::from(u8::from(i == j)) + s * sa.get(i, j);
        }
        for j in 0..m {
            data[i * size + n + j] = kbp_f[i * m + j];
            data[(n + j) * size + i] = kbp_f[i * m + j];
        }
    }
    for i in 0..m {
        for j in 0..m {
            data[(n + i) * size + n + j] = f64::from(u8::from(i == j)) + s * bp.get(i, j) + bt.get(i, j);
        }
    }
    is_psd(&FloatMatrix::new(size, data)?, LMI_TOL)
}
