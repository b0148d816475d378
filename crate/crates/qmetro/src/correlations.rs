//! Discord-like correlation measures of the pipeline state: local quantum
//! uncertainty (LQU) via skew information, and maximal steered coherence
//! (MSC) via quantum steering.

use crate::channels::ModelParams;
use crate::error::{Error, Result};
use crate::linalg::{
    eig_symmetric3, kron, pauli_vector, sqrt_psd, ComplexMatrix, DensityMatrix, MAT_TOL,
};
use crate::states::{pauli_decomposition, steered_state_along, XState};

/// Wigner-Yanase skew information `I(rho, O) = tr(rho O^2) - tr(sr O sr O)`
/// with `sr` the positive square root of the state.
///
/// Measures how much the observable fails to commute with the state. The
/// observable must be Hermitian within 1e-10
/// ([`Error::NonHermitianObservable`] otherwise) and match the state's
/// dimension. The result is clamped to be nonnegative.
pub fn skew_information(rho: &DensityMatrix, observable: &ComplexMatrix) -> Result<f64> {
    if observable.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: observable.dim(),
        });
    }
    let deviation = observable.hermitian_deviation();
    if deviation > 1e-10 {
        return Err(Error::NonHermitianObservable { deviation });
    }
    let sr = sqrt_psd(rho)?;
    let first = (&(rho.matrix() * observable) * observable).trace().re;
    let second = (&(&(&sr * observable) * &sr) * observable).trace().re;
    Ok((first - second).max(0.0))
}

/// The 3x3 correlation kernel behind the local quantum uncertainty:
/// `W_ij = Re tr[sr (sigma_i (x) I) sr (sigma_j (x) I)]`.
#[derive(Clone, Copy, Debug)]
pub struct WMatrix {
    /// Symmetric kernel entries.
    pub entries: [[f64; 3]; 3],
}

impl WMatrix {
    /// Largest eigenvalue of the kernel.
    pub fn max_eigenvalue(&self) -> f64 {
        let (vals, _) = eig_symmetric3(&self.entries);
        vals[2]
    }

    /// All three eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let (vals, _) = eig_symmetric3(&self.entries);
        vals
    }
}

/// Compute the LQU kernel of a two-qubit state, symmetrized against
/// round-off.
pub fn w_matrix(rho: &DensityMatrix) -> Result<WMatrix> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    let sr = sqrt_psd(rho)?;
    let id = ComplexMatrix::identity(2);
    let sigma = pauli_vector();
    let local: Vec<ComplexMatrix> = sigma.iter().map(|s| kron(s, &id)).collect();
    let mut w = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let val = (&(&(&sr * &local[i]) * &sr) * &local[j]).trace().re;
            w[i][j] = val;
            w[j][i] = val;
        }
    }
    Ok(WMatrix { entries: w })
}

/// Local quantum uncertainty of the first qubit:
/// `U = 1 - lambda_max(W)`, clamped into `[0, 1]`.
///
/// This is the minimum skew information over sharp single-qubit
/// observables on the first subsystem, a discord-like correlation measure
/// that vanishes exactly on zero-discord (classical-quantum) states.
pub fn lqu_numeric(rho: &DensityMatrix) -> Result<f64> {
    let w = w_matrix(rho)?;
    Ok((1.0 - w.max_eigenvalue()).clamp(0.0, 1.0))
}

/// Minimum skew information over a direction grid of sharp first-qubit
/// observables `n.sigma (x) I` - a direct, slower cross-check of
/// [`lqu_numeric`] that never undershoots it by more than grid error.
pub fn lqu_direction_scan(rho: &DensityMatrix, n_dirs: usize) -> Result<f64> {
    if n_dirs < 32 {
        return Err(Error::ParamOutOfRange {
            name: "n_dirs",
            value: n_dirs as f64,
            range: "[32, inf)",
        });
    }
    let id = ComplexMatrix::identity(2);
    let mut best = f64::INFINITY;
    for n in fibonacci_sphere(n_dirs) {
        let obs = kron(&crate::linalg::bloch_observable(n), &id);
        best = best.min(skew_information(rho, &obs)?);
    }
    Ok(best)
}

/// Closed-form local quantum uncertainty of the pipeline state.
///
/// Evaluates the literal kernel eigenvalues: the doubly degenerate
/// transverse value `W1` and the longitudinal value `W2`, then
/// `U = 1 - max(W1, W2)`. Independent of the initial phase. Fails with
/// [`Error::ZeroNormalization`] when the postselection probability is
/// below 1e-12.
pub fn lqu_closed(params: &ModelParams) -> Result<f64> {
    let theta = params.theta();
    let (p, q, r) = (params.p(), params.q(), params.r());
    let (pb, qb) = (1.0 - p, 1.0 - q);
    let half = 0.5 * theta;
    let (s, c) = (half.sin(), half.cos());
    let (s2, c2) = (s * s, c * c);
    let ct = theta.cos();
    let t2 = (s / c) * (s / c);
    let c2r = r.cos() * r.cos();
    let s2r = r.sin() * r.sin();
    let x = (2.0 * r).cos();

    let n = s2 * pb * c2r + s2 * pb * qb * s2r + c2 * qb;
    if n <= 1e-12 {
        return Err(Error::ZeroNormalization);
    }
    let g = pb * c2r * t2 + qb;

    let w1_rad = pb * qb.powi(3) * (-ct * (pb * x + pb - 2.0 * qb) + pb * x + pb + 2.0 * qb);
    let w1 = r.sin() * s * w1_rad.max(0.0).sqrt() / (n * g);

    let d = qb - pb * c2r * t2;
    let l1 = qb * qb * (pb + 2.0 * qb) - pb * x * (ct - 1.0) * d * d;
    let l2 = -(pb - 2.0 * qb) * ct * d * d
        + pb * (pb + 2.0 * qb) * c2r * t2 * (pb * c2r * t2 - 2.0 * qb);
    let l3 = 4.0 * pb * qb * s2r * s2 * g * g;
    let w2 = (l1 + l2 + l3) / (4.0 * n * g * g);

    Ok(1.0 - w1.max(w2))
}

/// Evenly spread unit directions by the Fibonacci (golden-angle) spiral.
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let radius = (1.0 - z * z).max(0.0).sqrt();
            let az = golden * i as f64;
            [radius * az.cos(), radius * az.sin(), z]
        })
        .collect()
}

/// Maximal steered coherence of an X-structured state, in closed form:
/// `(|rho_23| + |rho_14|) / sqrt((rho_11 + rho_22)(rho_33 + rho_44))`.
///
/// Fails with [`Error::DegenerateMarginal`] when the denominator's square
/// vanishes (a first-qubit marginal concentrated on one level).
pub fn msc_xstate(x: &XState) -> Result<f64> {
    let den2 = (x.diag[0] + x.diag[1]) * (x.diag[2] + x.diag[3]);
    if den2 <= 1e-14 {
        return Err(Error::DegenerateMarginal);
    }
    Ok((x.rho23.norm() + x.rho14.norm()) / den2.sqrt())
}

/// Maximal steered coherence of the pipeline state, which collapses to a
/// two-parameter expression: `1 / sqrt(q + (1 - q) / cos^2 r)`.
///
/// Notably independent of the initial angles and of the weak-measurement
/// strength.
pub fn msc_model_closed(q: f64, r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::ParamOutOfRange {
            name: "q",
            value: q,
            range: "[0, 1)",
        });
    }
    if !(0.0..=std::f64::consts::FRAC_PI_4).contains(&r) {
        return Err(Error::ParamOutOfRange {
            name: "r",
            value: r,
            range: "[0, pi/4]",
        });
    }
    let cr = r.cos();
    Ok(1.0 / (q + (1.0 - q) / (cr * cr)).sqrt())
}

fn bloch_of(rho2: &ComplexMatrix) -> [f64; 3] {
    [
        2.0 * rho2[(0, 1)].re,
        -2.0 * rho2[(0, 1)].im,
        (rho2[(0, 0)] - rho2[(1, 1)]).re,
    ]
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Coherence of the Bloch vector `w` with respect to the basis along `m`:
/// the length of the component of `w` perpendicular to `m`.
fn perp(w: [f64; 3], m: [f64; 3]) -> f64 {
    let w2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
    let proj = w[0] * m[0] + w[1] * m[1] + w[2] * m[2];
    (w2 - proj * proj).max(0.0).sqrt()
}

fn is_x_structured(m: &ComplexMatrix) -> bool {
    for i in 0..4 {
        for j in 0..4 {
            let on_x = i == j || i + j == 3;
            if !on_x && m[(i, j)].norm() > MAT_TOL {
                return false;
            }
        }
    }
    true
}

/// Maximal steered coherence over an explicit grid of steering directions.
///
/// For each direction the first qubit is projected along it and the
/// second qubit's steered Bloch vector is scored by its coherence in the
/// second marginal's eigenbasis. When that marginal is degenerate the
/// eigenbasis is free, and the basis direction is searched as well: over
/// two great circles through the poles for X-structured states (where the
/// optimum provably lies on one), or over the same grid otherwise.
///
/// Exposed with an explicit grid so callers can verify refinement
/// monotonicity; [`msc_bruteforce`] supplies the standard grid.
pub fn msc_bruteforce_with_dirs(rho: &DensityMatrix, dirs: &[[f64; 3]]) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    let dec = pauli_decomposition(rho)?;
    if norm3(dec.a) >= 1.0 - 1e-9 {
        return Err(Error::SingularMarginal);
    }

    let steered: Vec<[f64; 3]> = dirs
        .iter()
        .map(|&n| {
            let (sigma, _) = steered_state_along(rho, n)?;
            Ok(bloch_of(sigma.matrix()))
        })
        .collect::<Result<_>>()?;

    let b_len = norm3(dec.b);
    if b_len > 1e-9 {
        // Unique eigenbasis of the second marginal, along its Bloch vector.
        let m = [dec.b[0] / b_len, dec.b[1] / b_len, dec.b[2] / b_len];
        return Ok(steered
            .iter()
            .map(|&w| perp(w, m))
            .fold(0.0, f64::max));
    }

    // Degenerate second marginal: every basis is an eigenbasis, so
    // maximize over basis directions too.
    let basis_dirs: Vec<[f64; 3]> = if is_x_structured(rho.matrix()) {
        let steps = dirs.len().max(64);
        let mut out = Vec::with_capacity(2 * steps);
        for k in 0..steps {
            let t = std::f64::consts::PI * k as f64 / steps as f64;
            out.push([t.sin(), 0.0, t.cos()]);
            out.push([0.0, t.sin(), t.cos()]);
        }
        out
    } else {
        dirs.to_vec()
    };
    let mut best = 0.0_f64;
    for m in &basis_dirs {
        for &w in &steered {
            best = best.max(perp(w, *m));
        }
    }
    Ok(best)
}

/// Maximal steered coherence by brute-force grid search over at least 32
/// Fibonacci-spread steering directions.
///
/// Fails with [`Error::SingularMarginal`] when the first qubit's marginal
/// is pure (no steering freedom remains).
pub fn msc_bruteforce(rho: &DensityMatrix, n_dirs: usize) -> Result<f64> {
    if n_dirs < 32 {
        return Err(Error::ParamOutOfRange {
            name: "n_dirs",
            value: n_dirs as f64,
            range: "[32, inf)",
        });
    }
    msc_bruteforce_with_dirs(rho, &fibonacci_sphere(n_dirs))
}
