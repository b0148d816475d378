//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Everything in this crate lives in dimension at most a few dozen, so the
//! eigensolver is a cyclic Jacobi iteration on the real embedding of a
//! Hermitian matrix: robust, dependency-free, and exact enough that the
//! 1e-10 reconstruction tolerances hold with a wide margin.

use num_complex::Complex64;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};

/// Absolute entrywise tolerance for matrix equality comparisons.
pub const MAT_TOL: f64 = 1e-12;

/// Hermiticity tolerance accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues below this threshold are clamped to zero in
/// positive-semidefinite functional calculus (matrix square roots).
pub const PSD_CLAMP: f64 = 1e-12;

/// Most negative eigenvalue tolerated before a state is rejected as
/// non-positive.
pub const PSD_FLOOR: f64 = -1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix in row-major storage.
///
/// States and observables in this crate are 2x2 or 4x4; intermediate
/// objects (the mode-doubling embedding, process matrices in tests) are
/// larger, so the dimension is not restricted here. [`DensityMatrix`]
/// imposes the physical constraints.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Build a matrix from a function of the index pair.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Diagonal matrix with the given real entries.
    pub fn diag_real(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    /// Matrix dimension (the matrix is `dim x dim`).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// Trace.
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise absolute difference from another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "comparing matrices of unequal dimension");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise equality within the crate-wide tolerance [`MAT_TOL`].
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= MAT_TOL
    }

    /// Largest absolute deviation from Hermiticity, `max |H - H^dag|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(H + H^dag) / 2`, the Hermitian part.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Scale by a complex factor.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.dim && j < self.dim);
        i * self.dim + j
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[self.idx(i, j)]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        let k = self.idx(i, j);
        &mut self.data[k]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "adding matrices of unequal dimension");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "subtracting matrices of unequal dimension");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "multiplying matrices of unequal dimension");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += aik * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scaled(Complex64::new(rhs, 0.0))
    }
}

/// Pauli x matrix.
pub fn pauli_x() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 1)] = ONE;
    m[(1, 0)] = ONE;
    m
}

/// Pauli y matrix.
pub fn pauli_y() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 1)] = Complex64::new(0.0, -1.0);
    m[(1, 0)] = Complex64::new(0.0, 1.0);
    m
}

/// Pauli z matrix.
pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[1.0, -1.0])
}

/// The Pauli vector `[x, y, z]`.
pub fn pauli_vector() -> [ComplexMatrix; 3] {
    [pauli_x(), pauli_y(), pauli_z()]
}

/// `n . sigma` for a real 3-direction `n`.
pub fn bloch_observable(n: [f64; 3]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 0)] = Complex64::new(n[2], 0.0);
    m[(1, 1)] = Complex64::new(-n[2], 0.0);
    m[(0, 1)] = Complex64::new(n[0], -n[1]);
    m[(1, 0)] = Complex64::new(n[0], n[1]);
    m
}

/// Tensor product with the left factor on the slow index, so that basis
/// order is `|00>, |01>, |10>, |11>` for two qubits.
pub fn kron(x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    let (dx, dy) = (x.dim(), y.dim());
    ComplexMatrix::from_fn(dx * dy, |i, j| {
        x[(i / dy, j / dy)] * y[(i % dy, j % dy)]
    })
}

/// Which tensor factor of a two-qubit state to trace out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    /// The left factor (first qubit).
    A,
    /// The right factor (second qubit).
    B,
}

/// Trace out the rightmost factor of dimension `right_dim`.
pub(crate) fn trace_out_right(m: &ComplexMatrix, right_dim: usize) -> ComplexMatrix {
    let dim = m.dim();
    assert_eq!(dim % right_dim, 0, "right factor must divide the dimension");
    let left = dim / right_dim;
    ComplexMatrix::from_fn(left, |i, j| {
        (0..right_dim).map(|k| m[(right_dim * i + k, right_dim * j + k)]).sum()
    })
}

/// Trace out the leftmost factor of dimension `left_dim`.
pub(crate) fn trace_out_left(m: &ComplexMatrix, left_dim: usize) -> ComplexMatrix {
    let dim = m.dim();
    assert_eq!(dim % left_dim, 0, "left factor must divide the dimension");
    let right = dim / left_dim;
    ComplexMatrix::from_fn(right, |i, j| {
        (0..left_dim).map(|k| m[(right * k + i, right * k + j)]).sum()
    })
}

/// Hermitian, positive-semidefinite, unit-trace matrix of dimension 2 or 4.
///
/// Construction validates all three invariants: Hermiticity within 1e-12,
/// unit trace within 1e-12, and smallest eigenvalue at least -1e-10.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate and wrap a matrix as a quantum state.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let dim = m.dim();
        if dim != 2 && dim != 4 {
            return Err(Error::NotAState {
                reason: format!("dimension {dim} is not 2 or 4"),
            });
        }
        let herm = m.hermitian_deviation();
        if herm > MAT_TOL {
            return Err(Error::NotAState {
                reason: format!("Hermiticity deviation {herm:.3e} exceeds 1e-12"),
            });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > MAT_TOL || tr.im.abs() > MAT_TOL {
            return Err(Error::NotAState {
                reason: format!("trace {tr} differs from 1 beyond 1e-12"),
            });
        }
        let eig = eig_hermitian(&m)?;
        let min = eig.eigenvalues[0];
        if min < PSD_FLOOR {
            return Err(Error::NotAState {
                reason: format!("smallest eigenvalue {min:.3e} below -1e-10"),
            });
        }
        Ok(Self { m })
    }

    /// Rank-one state `|psi><psi|` of a normalized vector.
    pub fn from_pure(psi: &[Complex64]) -> Result<Self> {
        let dim = psi.len();
        let m = ComplexMatrix::from_fn(dim, |i, j| psi[i] * psi[j].conj());
        Self::new(m)
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.m.dim()
    }
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors of a
/// Hermitian matrix.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Real eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors; `eigenvectors[k]` belongs to
    /// `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<Complex64>>,
}

/// Cyclic Jacobi eigensolver for a real symmetric matrix.
///
/// `a` is row-major `n x n` and is consumed as scratch. Returns ascending
/// eigenvalues and the matching orthonormal eigenvectors as rows of the
/// second element.
fn jacobi_symmetric(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a.iter().fold(0.0_f64, |acc, x| acc.max(x.abs())).max(1.0);
    let stop = (MAT_TOL * 1e-3 * scale).powi(2) * (n * n) as f64;

    for _sweep in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q] * a[p * n + q])
            .sum();
        if off <= stop {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta.abs() > 1e12 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                let app = a[p * n + p];
                let aqq = a[q * n + q];
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp - s * (akq + tau * akp);
                    a[p * n + k] = a[k * n + p];
                    a[k * n + q] = akq + s * (akp - tau * akq);
                    a[q * n + k] = a[k * n + q];
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp - s * (vkq + tau * vkp);
                    v[k * n + q] = vkq + s * (vkp - tau * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).unwrap());
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row * n + col]).collect())
        .collect();
    (values, vectors)
}

/// Eigendecomposition of a real symmetric 3x3 matrix: ascending eigenvalues
/// and matching orthonormal eigenvectors.
pub(crate) fn eig_symmetric3(m: &[[f64; 3]; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
    let flat = vec![
        m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2],
    ];
    let (vals, vecs) = jacobi_symmetric(flat, 3);
    (
        [vals[0], vals[1], vals[2]],
        [
            [vecs[0][0], vecs[0][1], vecs[0][2]],
            [vecs[1][0], vecs[1][1], vecs[1][2]],
            [vecs[2][0], vecs[2][1], vecs[2][2]],
        ],
    )
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The matrix `H = A + iB` is embedded as the real symmetric matrix
/// `[[A, -B], [B, A]]` of doubled dimension, whose spectrum duplicates that
/// of `H`; each real eigenvector `(u; v)` maps to the complex eigenvector
/// `u + iv`. Duplicates are removed with a Gram-Schmidt pass: the partner
/// copy of an already-accepted eigenvector projects to (numerically)
/// nothing, while every new complex direction keeps most of its norm.
///
/// Errors with [`Error::NonHermitianInput`] when the Hermiticity deviation
/// exceeds 1e-10. The computation itself runs on the Hermitian part, which
/// discards only floating-point noise for accepted inputs.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    let deviation = h.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NonHermitianInput { deviation });
    }
    let h = h.hermitian_part();
    let n = h.dim();
    let m = 2 * n;
    let mut embed = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            embed[i * m + j] = z.re;
            embed[i * m + (j + n)] = -z.im;
            embed[(i + n) * m + j] = z.im;
            embed[(i + n) * m + (j + n)] = z.re;
        }
    }
    let (vals, vecs) = jacobi_symmetric(embed, m);

    let mut accepted: Vec<(f64, Vec<Complex64>)> = Vec::with_capacity(n);
    let mut leftovers: Vec<(f64, Vec<Complex64>)> = Vec::new();
    for (val, w) in vals.iter().zip(&vecs) {
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| Complex64::new(w[k], w[k + n]))
            .collect();
        for (_, basis) in &accepted {
            let overlap: Complex64 = basis.iter().zip(&z).map(|(b, x)| b.conj() * x).sum();
            for (x, b) in z.iter_mut().zip(basis) {
                *x -= overlap * b;
            }
        }
        let norm2: f64 = z.iter().map(|x| x.norm_sqr()).sum();
        if norm2 > 0.5 {
            let norm = norm2.sqrt();
            for x in &mut z {
                *x /= norm;
            }
            accepted.push((*val, z));
            if accepted.len() == n {
                break;
            }
        } else {
            leftovers.push((*val, z));
        }
    }
    // The threshold pass can in principle leave slots unfilled when residual
    // norm spreads across a degenerate cluster; greedily take the largest
    // remaining residuals in that case.
    while accepted.len() < n {
        let (best, _) = leftovers
            .iter()
            .enumerate()
            .map(|(k, (_, z))| (k, z.iter().map(|x| x.norm_sqr()).sum::<f64>()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .expect("real embedding spans the complex space");
        let (val, mut z) = leftovers.swap_remove(best);
        for (_, basis) in &accepted {
            let overlap: Complex64 = basis.iter().zip(&z).map(|(b, x)| b.conj() * x).sum();
            for (x, b) in z.iter_mut().zip(basis) {
                *x -= overlap * b;
            }
        }
        let norm = z.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-8, "degenerate cluster extraction failed");
        for x in &mut z {
            *x /= norm;
        }
        accepted.push((val, z));
    }

    accepted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(EigenDecomposition {
        eigenvalues: accepted.iter().map(|(v, _)| *v).collect(),
        eigenvectors: accepted.into_iter().map(|(_, z)| z).collect(),
    })
}

impl EigenDecomposition {
    /// Rebuild `sum_k f(lambda_k) |v_k><v_k|`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvectors.len();
        let dim = self.eigenvectors[0].len();
        let mut out = ComplexMatrix::zeros(dim);
        for k in 0..n {
            let w = f(self.eigenvalues[k]);
            if w == 0.0 {
                continue;
            }
            let v = &self.eigenvectors[k];
            for i in 0..dim {
                for j in 0..dim {
                    out[(i, j)] += v[i] * v[j].conj() * w;
                }
            }
        }
        out
    }
}

/// Positive-semidefinite square root of a state.
///
/// Eigenvalues below [`PSD_CLAMP`] are clamped to zero before the square
/// root, so exact or nearly exact null directions never produce NaN.
pub fn sqrt_psd(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(rho.matrix())?;
    if let Some(&min) = eig.eigenvalues.first() {
        if min < PSD_FLOOR {
            return Err(Error::NegativeEigenvalue { value: min });
        }
    }
    Ok(eig.apply(|x| if x < PSD_CLAMP { 0.0 } else { x.sqrt() }))
}

/// Partial trace of a two-qubit state over the named subsystem.
///
/// Basis order is `|a> (x) |b>` with subsystem A on the left, consistent
/// with [`kron`].
pub fn partial_trace(rho: &DensityMatrix, subsystem: Subsystem) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    let reduced = match subsystem {
        Subsystem::A => trace_out_left(rho.matrix(), 2),
        Subsystem::B => trace_out_right(rho.matrix(), 2),
    };
    DensityMatrix::new(reduced.hermitian_part())
}
