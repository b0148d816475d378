//! Two-qubit state descriptions: the probe's initial pure state, the Pauli
//! (Bloch) decomposition, X-structured states, quantum steering, and basis
//! coherence.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    bloch_observable, eig_hermitian, kron, pauli_vector, trace_out_left, ComplexMatrix,
    DensityMatrix, MAT_TOL,
};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Probe state `cos(theta/2)|11> + sin(theta/2) e^{-i phi}|00>` written so
/// that the `|00>` amplitude is `sin(theta/2)` and the relative phase sits
/// on `|11>`: `sin(theta/2)|00> + cos(theta/2) e^{i phi}|11>`.
///
/// `theta` must lie in `[0, pi]` and `phi` in `[0, 2 pi]`.
pub fn initial_state(theta: f64, phi: f64) -> Result<DensityMatrix> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::ParamOutOfRange {
            name: "theta",
            value: theta,
            range: "[0, pi]",
        });
    }
    if !(0.0..=2.0 * std::f64::consts::PI).contains(&phi) {
        return Err(Error::ParamOutOfRange {
            name: "phi",
            value: phi,
            range: "[0, 2*pi]",
        });
    }
    let half = 0.5 * theta;
    let psi = [
        Complex64::new(half.sin(), 0.0),
        ZERO,
        ZERO,
        Complex64::from_polar(half.cos(), phi),
    ];
    DensityMatrix::from_pure(&psi)
}

/// Bloch-basis coefficients of a two-qubit state:
/// `rho = (I (x) I + a.sigma (x) I + I (x) b.sigma + sum_ij T_ij sigma_i (x) sigma_j) / 4`.
#[derive(Clone, Debug)]
pub struct PauliDecomposition {
    /// Bloch vector of the first qubit.
    pub a: [f64; 3],
    /// Bloch vector of the second qubit.
    pub b: [f64; 3],
    /// Correlation matrix `T_ij = tr[rho (sigma_i (x) sigma_j)]`.
    pub t: [[f64; 3]; 3],
}

impl PauliDecomposition {
    /// Rebuild the density matrix from the coefficients.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let id = ComplexMatrix::identity(2);
        let sigma = pauli_vector();
        let mut m = ComplexMatrix::identity(4);
        for i in 0..3 {
            m = &m + &kron(&sigma[i], &id).scaled(Complex64::new(self.a[i], 0.0));
            m = &m + &kron(&id, &sigma[i]).scaled(Complex64::new(self.b[i], 0.0));
            for j in 0..3 {
                if self.t[i][j] != 0.0 {
                    m = &m + &kron(&sigma[i], &sigma[j]).scaled(Complex64::new(self.t[i][j], 0.0));
                }
            }
        }
        m.scaled(Complex64::new(0.25, 0.0))
    }
}

/// Pauli (Bloch) decomposition of a two-qubit state.
pub fn pauli_decomposition(rho: &DensityMatrix) -> Result<PauliDecomposition> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    let id = ComplexMatrix::identity(2);
    let sigma = pauli_vector();
    let expect = |op: &ComplexMatrix| (&op.adjoint() * rho.matrix()).trace().re;
    let mut out = PauliDecomposition {
        a: [0.0; 3],
        b: [0.0; 3],
        t: [[0.0; 3]; 3],
    };
    for i in 0..3 {
        out.a[i] = expect(&kron(&sigma[i], &id));
        out.b[i] = expect(&kron(&id, &sigma[i]));
        for j in 0..3 {
            out.t[i][j] = expect(&kron(&sigma[i], &sigma[j]));
        }
    }
    Ok(out)
}

/// An ellipsoid in the Bloch ball: the set of Bloch vectors of all states
/// the second qubit can be steered to by measurements on the first.
#[derive(Clone, Debug)]
pub struct Ellipsoid {
    /// Center in the second qubit's Bloch ball.
    pub center: [f64; 3],
    /// Semiaxis lengths in descending order.
    pub semiaxes: [f64; 3],
    /// Unit axis directions matching `semiaxes`.
    pub axes: [[f64; 3]; 3],
}

impl Ellipsoid {
    /// Whether a Bloch vector lies inside the ellipsoid, within `tol` in
    /// the normalized quadratic form.
    pub fn contains(&self, point: [f64; 3], tol: f64) -> bool {
        let d = [
            point[0] - self.center[0],
            point[1] - self.center[1],
            point[2] - self.center[2],
        ];
        let mut q = 0.0;
        for k in 0..3 {
            let proj = d[0] * self.axes[k][0] + d[1] * self.axes[k][1] + d[2] * self.axes[k][2];
            let s = self.semiaxes[k];
            if s <= 1e-12 {
                if proj.abs() > tol.sqrt().max(1e-9) {
                    return false;
                }
            } else {
                q += (proj / s) * (proj / s);
            }
        }
        q <= 1.0 + tol
    }
}

fn dot3(x: [f64; 3], y: [f64; 3]) -> f64 {
    x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
}

fn mat3_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn mat3_transpose(a: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

/// Steering ellipsoid of the second qubit under measurements on the first.
///
/// With the Pauli decomposition `(a, b, T)`, the center is
/// `c = (b - T^t a) / (1 - |a|^2)` and the shape matrix is
/// `Q = (T^t - b a^t)(I + a a^t / (1 - |a|^2))(T - a b^t) / (1 - |a|^2)`,
/// whose eigenvalues are the squared semiaxes.
///
/// Fails with [`Error::SingularMarginal`] when the first qubit's marginal
/// is (numerically) pure, `|a| >= 1 - 1e-9`.
pub fn steering_ellipsoid(rho: &DensityMatrix) -> Result<Ellipsoid> {
    let dec = pauli_decomposition(rho)?;
    let a = dec.a;
    let b = dec.b;
    let a2 = dot3(a, a);
    if a2.sqrt() >= 1.0 - 1e-9 {
        return Err(Error::SingularMarginal);
    }
    let gamma = 1.0 / (1.0 - a2);

    let t = dec.t;
    let tt = mat3_transpose(&t);
    // left = T^t - b a^t ; right = T - a b^t
    let mut left = [[0.0; 3]; 3];
    let mut right = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            left[i][j] = tt[i][j] - b[i] * a[j];
            right[i][j] = t[i][j] - a[i] * b[j];
        }
    }
    // mid = I + a a^t / (1 - |a|^2)
    let mut mid = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            mid[i][j] = if i == j { 1.0 } else { 0.0 } + gamma * a[i] * a[j];
        }
    }
    let mut q = mat3_mul(&left, &mat3_mul(&mid, &right));
    for row in q.iter_mut() {
        for x in row.iter_mut() {
            *x *= gamma;
        }
    }
    // Symmetrize against round-off before the eigensolve.
    for i in 0..3 {
        for j in (i + 1)..3 {
            let s = 0.5 * (q[i][j] + q[j][i]);
            q[i][j] = s;
            q[j][i] = s;
        }
    }
    let (vals, vecs) = crate::linalg::eig_symmetric3(&q);

    let center_raw = [
        b[0] - (tt[0][0] * a[0] + tt[0][1] * a[1] + tt[0][2] * a[2]),
        b[1] - (tt[1][0] * a[0] + tt[1][1] * a[1] + tt[1][2] * a[2]),
        b[2] - (tt[2][0] * a[0] + tt[2][1] * a[1] + tt[2][2] * a[2]),
    ];
    let center = [
        gamma * center_raw[0],
        gamma * center_raw[1],
        gamma * center_raw[2],
    ];

    // eig_symmetric3 returns ascending; report semiaxes descending.
    let order = [2usize, 1, 0];
    let mut semiaxes = [0.0; 3];
    let mut axes = [[0.0; 3]; 3];
    for (slot, &k) in order.iter().enumerate() {
        semiaxes[slot] = vals[k].max(0.0).sqrt();
        axes[slot] = vecs[k];
    }
    Ok(Ellipsoid {
        center,
        semiaxes,
        axes,
    })
}

/// Validate a single-qubit measurement effect: Hermitian with eigenvalues
/// in `[0, 1]` (within 1e-10).
fn validate_effect(effect: &ComplexMatrix) -> Result<()> {
    if effect.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: effect.dim(),
        });
    }
    let dev = effect.hermitian_deviation();
    if dev > 1e-10 {
        return Err(Error::NonHermitianObservable { deviation: dev });
    }
    let eig = eig_hermitian(effect)?;
    let (lo, hi) = (eig.eigenvalues[0], eig.eigenvalues[1]);
    if lo < -1e-10 || hi > 1.0 + 1e-10 {
        return Err(Error::ParamOutOfRange {
            name: "effect eigenvalues",
            value: if lo < -1e-10 { lo } else { hi },
            range: "[0, 1]",
        });
    }
    Ok(())
}

/// Post-measurement (steered) state of the second qubit after the effect
/// `E` is observed on the first, together with the outcome probability.
///
/// Returns `(sigma, probability)` where
/// `sigma = tr_A[(E (x) I) rho] / p` and `p = tr[(E (x) I) rho]`.
/// Fails with [`Error::ZeroProbability`] when `p < 1e-12`.
pub fn steered_state(rho: &DensityMatrix, effect: &ComplexMatrix) -> Result<(DensityMatrix, f64)> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    validate_effect(effect)?;
    let id = ComplexMatrix::identity(2);
    let weighted = &kron(effect, &id) * rho.matrix();
    let p = weighted.trace().re;
    if p < 1e-12 {
        return Err(Error::ZeroProbability { value: p });
    }
    let reduced = trace_out_left(&weighted, 2);
    let sigma = reduced.hermitian_part().scaled(Complex64::new(1.0 / p, 0.0));
    Ok((DensityMatrix::new(sigma)?, p))
}

/// Steer the second qubit with the rank-one projector onto the `+1`
/// eigenstate of `n.sigma` measured on the first qubit.
pub fn steered_state_along(
    rho: &DensityMatrix,
    direction: [f64; 3],
) -> Result<(DensityMatrix, f64)> {
    let norm = dot3(direction, direction).sqrt();
    if norm <= 1e-14 {
        return Err(Error::ParamOutOfRange {
            name: "direction",
            value: norm,
            range: "nonzero vector",
        });
    }
    let n = [
        direction[0] / norm,
        direction[1] / norm,
        direction[2] / norm,
    ];
    let projector = &(&ComplexMatrix::identity(2) + &bloch_observable(n)) * 0.5;
    steered_state(rho, &projector)
}

/// Off-diagonal coherence of a qubit state in an orthonormal basis
/// `{xi_0, xi_1}`: `2 |<xi_0| rho |xi_1>|`.
///
/// Fails with [`Error::NonOrthonormalBasis`] when the basis is not
/// orthonormal within 1e-10.
pub fn coherence(rho: &DensityMatrix, basis: &[Vec<Complex64>; 2]) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: rho.dim(),
        });
    }
    let mut dev: f64 = 0.0;
    for (i, u) in basis.iter().enumerate() {
        if u.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: u.len(),
            });
        }
        for (j, v) in basis.iter().enumerate() {
            let dot: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((dot - Complex64::new(want, 0.0)).norm());
        }
    }
    if dev > 1e-10 {
        return Err(Error::NonOrthonormalBasis { deviation: dev });
    }
    let mut amp = ZERO;
    for i in 0..2 {
        for j in 0..2 {
            amp += basis[0][i].conj() * rho.matrix()[(i, j)] * basis[1][j];
        }
    }
    Ok(2.0 * amp.norm())
}

/// Two-qubit X-structured state: nonzero entries only on the diagonal and
/// the two anti-diagonal corners `(rho_14, rho_23)`.
#[derive(Clone, Debug)]
pub struct XState {
    /// Diagonal `(rho_11, rho_22, rho_33, rho_44)`.
    pub diag: [f64; 4],
    /// Outer anti-diagonal entry `rho_14 = <00|rho|11>`.
    pub rho14: Complex64,
    /// Inner anti-diagonal entry `rho_23 = <01|rho|10>`.
    pub rho23: Complex64,
}

impl XState {
    /// Validate and construct an X-structured state.
    ///
    /// Requires nonnegative diagonal summing to 1 (within 1e-12) and
    /// positivity of both 2x2 blocks:
    /// `|rho_14|^2 <= rho_11 rho_44 + 1e-12` and
    /// `|rho_23|^2 <= rho_22 rho_33 + 1e-12`.
    pub fn new(diag: [f64; 4], rho14: Complex64, rho23: Complex64) -> Result<Self> {
        for (k, &d) in diag.iter().enumerate() {
            if d < -1e-12 {
                return Err(Error::NotAState {
                    reason: format!("diagonal entry {} is negative: {d:.3e}", k + 1),
                });
            }
        }
        let sum: f64 = diag.iter().sum();
        if (sum - 1.0).abs() > MAT_TOL {
            return Err(Error::NotAState {
                reason: format!("diagonal sums to {sum}, not 1"),
            });
        }
        if rho14.norm_sqr() > diag[0] * diag[3] + 1e-12 {
            return Err(Error::NotAState {
                reason: "outer block violates positivity: |rho_14|^2 > rho_11 rho_44".into(),
            });
        }
        if rho23.norm_sqr() > diag[1] * diag[2] + 1e-12 {
            return Err(Error::NotAState {
                reason: "inner block violates positivity: |rho_23|^2 > rho_22 rho_33".into(),
            });
        }
        Ok(Self { diag, rho14, rho23 })
    }

    /// Extract the X-structure from a density matrix, verifying that every
    /// other off-diagonal entry vanishes within 1e-12.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        if rho.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                got: rho.dim(),
            });
        }
        let m = rho.matrix();
        for i in 0..4 {
            for j in 0..4 {
                let on_x = i == j || i + j == 3;
                if !on_x && m[(i, j)].norm() > MAT_TOL {
                    return Err(Error::NotAState {
                        reason: format!("entry ({},{}) breaks the X structure", i + 1, j + 1),
                    });
                }
            }
        }
        Self::new(
            [m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re, m[(3, 3)].re],
            m[(0, 3)],
            m[(1, 2)],
        )
    }

    /// Expand back to a full density matrix.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let mut m = ComplexMatrix::zeros(4);
        for k in 0..4 {
            m[(k, k)] = Complex64::new(self.diag[k].max(0.0), 0.0);
        }
        m[(0, 3)] = self.rho14;
        m[(3, 0)] = self.rho14.conj();
        m[(1, 2)] = self.rho23;
        m[(2, 1)] = self.rho23.conj();
        DensityMatrix::new(m)
    }
}
