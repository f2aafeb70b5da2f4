//! Dense complex Hermitian linear algebra.
//!
//! Everything here is `f64`: the eigen-solver is nalgebra's Hermitian QR
//! iteration on `Complex64` entries. Matrix functions act on the support
//! only, with the convention `logn 0 = 0` and `0^t = 0`.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

/// Relative support threshold: eigenvalues `<= EPS_SUPP * λ_max` count as zero.
pub const EPS_SUPP: f64 = 1e-12;
/// Relative tolerance for negative eigenvalues of a nominally PSD operator.
pub const PSD_TOL: f64 = 1e-10;
/// Default Hermiticity tolerance at construction.
pub const HERM_TOL: f64 = 1e-10;
/// Default dimension cap for tensor powers.
pub const DIM_CAP: usize = 4096;

/// Spectral decomposition with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct Eig {
    pub values: DVector<f64>,
    pub vectors: CMat,
}

/// Dense Hermitian matrix; hermitized at construction, eigen-decomposition cached.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    m: CMat,
    herm_tol: f64,
    eig: OnceLock<Eig>,
}

impl PartialEq for HermitianOperator {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

impl HermitianOperator {
    /// Builds from a square complex matrix, replacing it by `(M + M†)/2` after
    /// checking `‖M − M†‖_max ≤ herm_tol·‖M‖_max`.
    pub fn with_tol(m: CMat, herm_tol: f64) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimMismatch {
                left: m.nrows(),
                right: m.ncols(),
            });
        }
        let adj = m.adjoint();
        let dev = (&m - &adj).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if dev > herm_tol * scale.max(f64::MIN_POSITIVE) && dev > 0.0 {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol: herm_tol,
            });
        }
        let h = (&m + &adj) * C64::new(0.5, 0.0);
        Ok(Self::raw(h, herm_tol))
    }

    pub fn new(m: CMat) -> Result<Self> {
        Self::with_tol(m, HERM_TOL)
    }

    fn raw(m: CMat, herm_tol: f64) -> Self {
        Self {
            m,
            herm_tol,
            eig: OnceLock::new(),
        }
    }

    /// Internal constructor for results that are Hermitian up to rounding.
    pub(crate) fn hermitize(m: CMat) -> Self {
        let adj = m.adjoint();
        Self::raw((&m + &adj) * C64::new(0.5, 0.0), HERM_TOL)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::ShapeMismatch("matrix rows of unequal length".into()));
        }
        Self::new(CMat::from_fn(d, d, |i, j| C64::new(rows[i][j], 0.0)))
    }

    /// From separate real and imaginary parts (row-major).
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let d = re.len();
        if im.len() != d || re.iter().chain(im.iter()).any(|r| r.len() != d) {
            return Err(Error::ShapeMismatch("re/im blocks must be d×d".into()));
        }
        Self::new(CMat::from_fn(d, d, |i, j| C64::new(re[i][j], im[i][j])))
    }

    pub fn diag(d: &[f64]) -> Self {
        let n = d.len();
        Self::raw(
            CMat::from_fn(n, n, |i, j| if i == j { C64::new(d[i], 0.0) } else { C64::new(0.0, 0.0) }),
            HERM_TOL,
        )
    }

    pub fn identity(d: usize) -> Self {
        Self::raw(CMat::identity(d, d), HERM_TOL)
    }

    pub fn zeros(d: usize) -> Self {
        Self::raw(CMat::zeros(d, d), HERM_TOL)
    }

    /// Rank-one `|ψ⟩⟨ψ|` (no normalization applied).
    pub fn outer(psi: &DVector<C64>) -> Self {
        Self::raw(psi * psi.adjoint(), HERM_TOL)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn herm_tol(&self) -> f64 {
        self.herm_tol
    }

    /// Cached spectral decomposition.
    pub fn eig(&self) -> Result<&Eig> {
        if let Some(e) = self.eig.get() {
            return Ok(e);
        }
        let e = compute_eig(&self.m)?;
        Ok(self.eig.get_or_init(|| e))
    }

    pub fn trace(&self) -> f64 {
        self.m.diagonal().iter().map(|z| z.re).sum()
    }

    /// Re Tr(AB).
    pub fn trace_product(&self, other: &Self) -> f64 {
        let d = self.dim();
        let mut acc = 0.0;
        for i in 0..d {
            for k in 0..d {
                acc += (self.m[(i, k)] * other.m[(k, i)]).re;
            }
        }
        acc
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::raw(&self.m * C64::new(s, 0.0), self.herm_tol)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::raw(&self.m + &other.m, self.herm_tol)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::raw(&self.m - &other.m, self.herm_tol)
    }

    /// `X A X†`.
    pub fn congruence(&self, x: &CMat) -> Self {
        Self::hermitize(x * &self.m * x.adjoint())
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(blocks: &[&HermitianOperator]) -> Self {
        let n: usize = blocks.iter().map(|b| b.dim()).sum();
        let mut m = CMat::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            let d = b.dim();
            m.view_mut((off, off), (d, d)).copy_from(&b.m);
            off += d;
        }
        Self::raw(m, HERM_TOL)
    }

    /// Frobenius norm of the commutator `[A, B]`.
    pub fn commutator_norm(&self, other: &Self) -> f64 {
        (&self.m * &other.m - &other.m * &self.m).norm()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-entry distance to another operator.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.m - &other.m).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Checks PSD within `PSD_TOL` relative to the spectral radius.
    pub fn check_psd(&self) -> Result<()> {
        let e = self.eig()?;
        let lmin = e.values[0];
        let lmax = e.values[e.values.len() - 1];
        let scale = lmax.abs().max(lmin.abs());
        if lmin < -PSD_TOL * scale.max(1e-300) && lmin < -1e-300 {
            return Err(Error::NotPsd { min_eig: lmin });
        }
        Ok(())
    }

    /// Whether the diagonal holds all the mass (commutes with the computational basis).
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.m[(i, j)].norm() <= tol))
    }

    /// Real diagonal.
    pub fn diagonal_real(&self) -> Vec<f64> {
        self.m.diagonal().iter().map(|z| z.re).collect()
    }
}

fn compute_eig(m: &CMat) -> Result<Eig> {
    let d = m.nrows();
    if d == 0 {
        return Ok(Eig {
            values: DVector::zeros(0),
            vectors: CMat::zeros(0, 0),
        });
    }
    let se = nalgebra::linalg::SymmetricEigen::try_new(m.clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::EigenNonConvergence(format!("dim {d}")))?;
    let mut idx: Vec<usize> = (0..d).collect();
    idx.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values = DVector::from_iterator(d, idx.iter().map(|&i| se.eigenvalues[i]));
    let mut vectors = CMat::zeros(d, d);
    for (k, &i) in idx.iter().enumerate() {
        vectors.set_column(k, &se.eigenvectors.column(i));
    }
    Ok(Eig { values, vectors })
}

/// Eigenvalues (ascending) and unitary eigenvectors.
pub fn eig_herm(h: &HermitianOperator) -> Result<(DVector<f64>, CMat)> {
    let e = h.eig()?;
    Ok((e.values.clone(), e.vectors.clone()))
}

/// `V diag(f(λ)) V†`.
pub fn spectral_apply(h: &HermitianOperator, f: impl Fn(f64) -> f64) -> Result<HermitianOperator> {
    let e = h.eig()?;
    Ok(rebuild(e, |l| f(l)))
}

fn rebuild(e: &Eig, f: impl Fn(f64) -> f64) -> HermitianOperator {
    let d = e.values.len();
    let mut scaled = e.vectors.clone();
    for k in 0..d {
        let fk = C64::new(f(e.values[k]), 0.0);
        for i in 0..d {
            scaled[(i, k)] *= fk;
        }
    }
    HermitianOperator::hermitize(&scaled * e.vectors.adjoint())
}

/// Threshold separating support from kernel: `eps_supp · λ_max` (zero for the zero operator).
pub fn support_threshold(e: &Eig, eps_supp: f64) -> f64 {
    let lmax = e.values.iter().copied().fold(0.0, f64::max);
    eps_supp * lmax
}

/// Orthonormal basis of a PSD operator's support.
#[derive(Debug, Clone)]
pub struct SupportProjector {
    pub dim: usize,
    pub rank: usize,
    pub basis: CMat,
}

impl SupportProjector {
    pub fn projector(&self) -> HermitianOperator {
        HermitianOperator::hermitize(&self.basis * self.basis.adjoint())
    }
}

/// Support projection `A⁰`: span of eigenvectors with `λ > eps_supp·λ_max`.
pub fn support_projection(a: &HermitianOperator, eps_supp: f64) -> Result<SupportProjector> {
    a.check_psd()?;
    let e = a.eig()?;
    let thr = support_threshold(e, eps_supp);
    let cols: Vec<usize> = (0..a.dim()).filter(|&k| e.values[k] > thr).collect();
    let mut basis = CMat::zeros(a.dim(), cols.len());
    for (j, &k) in cols.iter().enumerate() {
        basis.set_column(j, &e.vectors.column(k));
    }
    Ok(SupportProjector {
        dim: a.dim(),
        rank: cols.len(),
        basis,
    })
}

/// Function applied on the support of a PSD operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatFn {
    /// `logn`: log on the support, 0 on the kernel.
    Log,
    /// `t`-th power on the support, 0 on the kernel (any real `t`).
    Pow(f64),
}

/// Applies `f` to the nonzero eigenvalues and maps the kernel to 0.
pub fn mat_fn_on_support(a: &HermitianOperator, f: MatFn, eps_supp: f64) -> Result<HermitianOperator> {
    a.check_psd()?;
    let e = a.eig()?;
    let thr = support_threshold(e, eps_supp);
    Ok(rebuild(e, |l| {
        if l <= thr {
            0.0
        } else {
            match f {
                MatFn::Log => l.ln(),
                MatFn::Pow(t) => l.powf(t),
            }
        }
    }))
}

pub fn logn(a: &HermitianOperator) -> Result<HermitianOperator> {
    mat_fn_on_support(a, MatFn::Log, EPS_SUPP)
}

pub fn pow_supp(a: &HermitianOperator, t: f64) -> Result<HermitianOperator> {
    mat_fn_on_support(a, MatFn::Pow(t), EPS_SUPP)
}

/// Matrix exponential of a Hermitian operator.
pub fn expm(a: &HermitianOperator) -> Result<HermitianOperator> {
    spectral_apply(a, f64::exp)
}

/// Whether all eigenvalues exceed the support threshold.
pub fn is_definite(a: &HermitianOperator, eps_supp: f64) -> Result<bool> {
    let e = a.eig()?;
    let thr = support_threshold(e, eps_supp);
    Ok(e.values.len() > 0 && e.values[0] > thr)
}

/// Kubo–Ando weighted geometric mean `B^{1/2}(B^{-1/2} A B^{-1/2})^α B^{1/2}`
/// (that is, `B #_α A`; `α = 1/2` is symmetric in the arguments).
///
/// Positive definite `B` is used directly; positive definite `A` goes through
/// `A #_{1-α} B`. If both are singular their supports must coincide, and the
/// mean is computed on the common support and re-embedded.
pub fn geometric_mean(a: &HermitianOperator, b: &HermitianOperator, alpha: f64) -> Result<HermitianOperator> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::OutOfRange {
            what: "alpha",
            value: alpha,
        });
    }
    a.check_psd()?;
    b.check_psd()?;
    if is_definite(b, EPS_SUPP)? {
        return mean_definite_base(a, b, alpha);
    }
    if is_definite(a, EPS_SUPP)? {
        return mean_definite_base(b, a, 1.0 - alpha);
    }
    let pa = support_projection(a, EPS_SUPP)?;
    let pb = support_projection(b, EPS_SUPP)?;
    if pa.rank != pb.rank || pa.projector().max_abs_diff(&pb.projector()) > 1e-9 {
        return Err(Error::SupportMismatch);
    }
    if pa.rank == 0 {
        return Ok(HermitianOperator::zeros(a.dim()));
    }
    let v = &pa.basis;
    let vh = v.adjoint();
    let ar = HermitianOperator::hermitize(&vh * a.matrix() * v);
    let br = HermitianOperator::hermitize(&vh * b.matrix() * v);
    let g = mean_definite_base(&ar, &br, alpha)?;
    Ok(HermitianOperator::hermitize(v * g.matrix() * &vh))
}

/// `B^{1/2}(B^{-1/2} A B^{-1/2})^α B^{1/2}` for positive definite `B`.
fn mean_definite_base(a: &HermitianOperator, b: &HermitianOperator, alpha: f64) -> Result<HermitianOperator> {
    if alpha == 0.0 {
        return Ok(b.clone());
    }
    let bh = spectral_apply(b, f64::sqrt)?;
    let bih = spectral_apply(b, |l| 1.0 / l.sqrt())?;
    let inner = a.congruence(bih.matrix());
    let inner_pow = if alpha == 1.0 {
        inner
    } else {
        mat_fn_on_support(&inner, MatFn::Pow(alpha), EPS_SUPP).or_else(|err| match err {
            // rounding can push a zero eigenvalue of the congruence slightly negative
            Error::NotPsd { min_eig } if min_eig > -1e-8 => {
                spectral_apply(&inner, |l| if l > 0.0 { l.powf(alpha) } else { 0.0 })
            }
            e => Err(e),
        })?
    };
    Ok(inner_pow.congruence(bh.matrix()))
}

/// Kronecker product.
pub fn kron(a: &HermitianOperator, b: &HermitianOperator) -> HermitianOperator {
    HermitianOperator::raw(a.matrix().kronecker(b.matrix()), HERM_TOL)
}

/// `A^{⊗n}`; fails when `dimⁿ > dim_cap`.
pub fn kron_power(a: &HermitianOperator, n: usize, dim_cap: usize) -> Result<HermitianOperator> {
    let mut required: usize = 1;
    for _ in 0..n {
        required = required.checked_mul(a.dim()).unwrap_or(usize::MAX);
    }
    if required > dim_cap {
        return Err(Error::CapExceeded {
            required,
            cap: dim_cap,
        });
    }
    let mut acc = HermitianOperator::identity(1);
    for _ in 0..n {
        acc = kron(&acc, a);
    }
    Ok(acc)
}

/// `Σ |λᵢ(A)|`.
pub fn trace_norm(a: &HermitianOperator) -> Result<f64> {
    Ok(a.eig()?.values.iter().map(|l| l.abs()).sum())
}

/// `Tr((ρ^{1/2} σ ρ^{1/2})^{1/2})`.
pub fn fidelity(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<f64> {
    rho.check_psd()?;
    sigma.check_psd()?;
    let rh = pow_supp(rho, 0.5)?;
    let inner = sigma.congruence(rh.matrix());
    Ok(inner.eig()?.values.iter().map(|&l| l.max(0.0).sqrt()).sum())
}

/// `(λ_max, smallest eigenvalue above the support threshold)`.
pub fn lambda_extremes(a: &HermitianOperator) -> Result<(f64, f64)> {
    let e = a.eig()?;
    let d = e.values.len();
    if d == 0 {
        return Err(Error::ZeroOperator);
    }
    let lmax = e.values[d - 1];
    let thr = support_threshold(e, EPS_SUPP);
    let lmin_nz = e
        .values
        .iter()
        .copied()
        .find(|&l| l > thr && l > 0.0)
        .ok_or(Error::ZeroOperator)?;
    Ok((lmax, lmin_nz))
}

/// A density operator: PSD with unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    pub op: HermitianOperator,
    pub trace_tol: f64,
}

impl DensityOperator {
    pub fn new(op: HermitianOperator, trace_tol: f64) -> Result<Self> {
        op.check_psd()?;
        let e = op.eig()?;
        if e.values[0] < -trace_tol {
            return Err(Error::NotPsd { min_eig: e.values[0] });
        }
        let t = op.trace();
        if (t - 1.0).abs() > trace_tol {
            return Err(Error::NotNormalized { trace: t });
        }
        Ok(Self { op, trace_tol })
    }
}

/// Matrix JSON format `{"dim": d, "re": [[...]], "im": [[...]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_op(a: &HermitianOperator) -> Self {
        let d = a.dim();
        let m = a.matrix();
        Self {
            dim: d,
            re: (0..d).map(|i| (0..d).map(|j| m[(i, j)].re).collect()).collect(),
            im: Some((0..d).map(|i| (0..d).map(|j| m[(i, j)].im).collect()).collect()),
        }
    }

    pub fn to_op(&self) -> Result<HermitianOperator> {
        if self.re.len() != self.dim {
            return Err(Error::Parse(format!(
                "\"re\" has {} rows, dim is {}",
                self.re.len(),
                self.dim
            )));
        }
        let zeros = vec![vec![0.0; self.dim]; self.dim];
        HermitianOperator::from_parts(&self.re, self.im.as_ref().unwrap_or(&zeros))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn eig_examples() {
        let (v, _) = eig_herm(&HermitianOperator::identity(3)).unwrap();
        assert!(v.iter().all(|&l| (l - 1.0).abs() < 1e-14));
        let (v, _) = eig_herm(&HermitianOperator::diag(&[0.75, 0.25])).unwrap();
        assert!((v[0] - 0.25).abs() < 1e-15 && (v[1] - 0.75).abs() < 1e-15);
        let x = HermitianOperator::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let (v, vecs) = eig_herm(&x).unwrap();
        assert!((v[0] + 1.0).abs() < 1e-14 && (v[1] - 1.0).abs() < 1e-14);
        let recon = &vecs * CMat::from_diagonal(&v.map(c)) * vecs.adjoint();
        assert!((recon - x.matrix()).norm() < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMat::from_row_slice(2, 2, &[c(1.0), c(2.0), c(0.0), c(1.0)]);
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn support_examples() {
        let p = support_projection(&HermitianOperator::diag(&[1.0, 0.0]), EPS_SUPP).unwrap();
        assert_eq!(p.rank, 1);
        assert!((p.projector().matrix()[(0, 0)].re - 1.0).abs() < 1e-14);
        let p = support_projection(&HermitianOperator::diag(&[0.5, 0.5]), EPS_SUPP).unwrap();
        assert_eq!(p.rank, 2);
        let p = support_projection(&HermitianOperator::diag(&[1.0, 1e-16]), 1e-12).unwrap();
        assert_eq!(p.rank, 1);
        assert!(matches!(
            support_projection(&HermitianOperator::diag(&[1.0, -0.1]), EPS_SUPP),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn matrix_function_examples() {
        let e = std::f64::consts::E;
        let l = logn(&HermitianOperator::diag(&[1.0, e])).unwrap();
        assert!(l.max_abs_diff(&HermitianOperator::diag(&[0.0, 1.0])) < 1e-14);
        let l = logn(&HermitianOperator::diag(&[1.0, 0.0])).unwrap();
        assert!(l.max_abs() < 1e-15);
        let s = pow_supp(&HermitianOperator::diag(&[4.0, 9.0]), 0.5).unwrap();
        assert!(s.max_abs_diff(&HermitianOperator::diag(&[2.0, 3.0])) < 1e-14);
    }

    #[test]
    fn geometric_mean_commuting_and_singular() {
        let a = HermitianOperator::diag(&[0.2, 0.8, 0.0]);
        let b = HermitianOperator::diag(&[0.5, 0.2, 0.0]);
        let g = geometric_mean(&a, &b, 0.5).unwrap();
        let want = HermitianOperator::diag(&[(0.1f64).sqrt(), (0.16f64).sqrt(), 0.0]);
        assert!(g.max_abs_diff(&want) < 1e-14);
        let c = HermitianOperator::diag(&[0.5, 0.0, 0.5]);
        assert!(matches!(geometric_mean(&a, &c, 0.5), Err(Error::SupportMismatch)));
    }

    #[test]
    fn kron_examples() {
        let i4 = kron(&HermitianOperator::identity(2), &HermitianOperator::identity(2));
        assert!(i4.max_abs_diff(&HermitianOperator::identity(4)) < 1e-15);
        let p = 0.3;
        let k = kron_power(&HermitianOperator::diag(&[p, 1.0 - p]), 2, DIM_CAP).unwrap();
        let want = HermitianOperator::diag(&[p * p, p * (1.0 - p), (1.0 - p) * p, (1.0 - p) * (1.0 - p)]);
        assert!(k.max_abs_diff(&want) < 1e-15);
        assert!(matches!(
            kron_power(&HermitianOperator::identity(2), 13, DIM_CAP),
            Err(Error::CapExceeded { required: 8192, cap: 4096 })
        ));
    }

    #[test]
    fn norm_fidelity_extremes() {
        assert!((trace_norm(&HermitianOperator::diag(&[1.0, -1.0])).unwrap() - 2.0).abs() < 1e-15);
        let r = HermitianOperator::diag(&[0.3, 0.7]);
        assert!((fidelity(&r, &r).unwrap() - 1.0).abs() < 1e-12);
        let (mx, mn) = lambda_extremes(&HermitianOperator::diag(&[0.0, 0.2, 0.8])).unwrap();
        assert!((mx - 0.8).abs() < 1e-15 && (mn - 0.2).abs() < 1e-15);
        assert!(matches!(
            lambda_extremes(&HermitianOperator::zeros(2)),
            Err(Error::ZeroOperator)
        ));
    }

    #[test]
    fn matrix_json_roundtrip() {
        let a = HermitianOperator::from_parts(
            &[vec![1.0, 0.5], vec![0.5, 2.0]],
            &[vec![0.0, 0.25], vec![-0.25, 0.0]],
        )
        .unwrap();
        let js = serde_json::to_string(&MatrixJson::from_op(&a)).unwrap();
        let back: MatrixJson = serde_json::from_str(&js).unwrap();
        assert!(back.to_op().unwrap().max_abs_diff(&a) < 1e-15);
    }
}
