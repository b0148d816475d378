//! The probe preparation pipeline: a weak pre-measurement on the second
//! qubit, acceleration-induced decoherence of that qubit, and a reversal
//! measurement, followed by postselection on success.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{kron, trace_out_right, ComplexMatrix, DensityMatrix};
use crate::states::{initial_state, XState};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Validated parameter set for the probe pipeline.
///
/// * `theta` in `[0, pi]`, `phi` in `[0, 2 pi]`: initial-state angles.
/// * `p` in `[0, 1)`: weak-measurement strength.
/// * `q` in `[0, 1)`: reversal-measurement strength.
/// * `r` in `[0, pi/4]`: effective acceleration angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    theta: f64,
    phi: f64,
    p: f64,
    q: f64,
    r: f64,
}

impl ModelParams {
    /// Validate the full parameter set.
    pub fn new(theta: f64, phi: f64, p: f64, q: f64, r: f64) -> Result<Self> {
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
        if !(0.0..1.0).contains(&p) {
            return Err(Error::ParamOutOfRange {
                name: "p",
                value: p,
                range: "[0, 1)",
            });
        }
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
        Ok(Self { theta, phi, p, q, r })
    }

    /// Initial-state polar angle.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Initial-state relative phase.
    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Weak-measurement strength.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Reversal-measurement strength.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Acceleration angle.
    pub fn r(&self) -> f64 {
        self.r
    }
}

/// Output of the pipeline: the postselected state and the probability of
/// the postselection succeeding.
#[derive(Clone, Debug)]
pub struct ModelState {
    /// Normalized two-qubit state conditioned on success.
    pub rho: DensityMatrix,
    /// Probability that both measurements report the success outcome.
    pub success_probability: f64,
}

impl ModelState {
    /// View the state through its X structure.
    pub fn as_xstate(&self) -> Result<XState> {
        XState::from_density(&self.rho)
    }
}

/// Single-qubit Kraus operator of the successful weak-measurement outcome:
/// `diag(sqrt(1-p), 1)`, which suppresses `|0>` by `sqrt(1-p)`.
///
/// Unlike the pipeline parameter, full strength `p = 1` is a valid
/// operator (a projector), so the accepted range here is `[0, 1]`.
pub fn weak_measurement_op(p: f64) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParamOutOfRange {
            name: "p",
            value: p,
            range: "[0, 1]",
        });
    }
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 0)] = Complex64::new((1.0 - p).sqrt(), 0.0);
    m[(1, 1)] = ONE;
    Ok(m)
}

/// Single-qubit Kraus operator of the successful reversal outcome:
/// `diag(1, sqrt(1-q))`, the bit-flipped partner of the weak measurement.
pub fn reversal_op(q: f64) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::ParamOutOfRange {
            name: "q",
            value: q,
            range: "[0, 1]",
        });
    }
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 0)] = ONE;
    m[(1, 1)] = Complex64::new((1.0 - q).sqrt(), 0.0);
    Ok(m)
}

/// Raw decoherence map on an (unnormalized) two-qubit matrix.
///
/// The second qubit is pushed through the mode-doubling isometry
/// `|0> -> cos r |0>|0> + sin r |1>|1>`, `|1> -> |1>|0>` into an explicit
/// two-mode space, and the auxiliary mode is traced out. Trace-preserving
/// and completely positive by construction.
pub(crate) fn unruh_map(m: &ComplexMatrix, r: f64) -> ComplexMatrix {
    debug_assert_eq!(m.dim(), 4);
    let (cr, sr) = (r.cos(), r.sin());
    // Isometry columns indexed by the original basis state of the second
    // qubit; rows by the joint (kept mode, auxiliary mode) index 2i + ii.
    let mut v = [[ZERO; 2]; 4];
    v[0][0] = Complex64::new(cr, 0.0);
    v[3][0] = Complex64::new(sr, 0.0);
    v[2][1] = ONE;

    let mut big = ComplexMatrix::zeros(8);
    for a in 0..2 {
        for ap in 0..2 {
            for b in 0..2 {
                for bp in 0..2 {
                    let x = m[(2 * a + b, 2 * ap + bp)];
                    if x == ZERO {
                        continue;
                    }
                    for (vi, vrow) in v.iter().enumerate() {
                        if vrow[b] == ZERO {
                            continue;
                        }
                        for (vj, vcol) in v.iter().enumerate() {
                            if vcol[bp] == ZERO {
                                continue;
                            }
                            big[(4 * a + vi, 4 * ap + vj)] += vrow[b] * x * vcol[bp].conj();
                        }
                    }
                }
            }
        }
    }
    trace_out_right(&big, 2)
}

/// Decoherence channel on the second qubit of a two-qubit state at
/// acceleration angle `r` in `[0, pi/4]`.
pub fn apply_unruh(rho: &DensityMatrix, r: f64) -> Result<DensityMatrix> {
    if !(0.0..=std::f64::consts::FRAC_PI_4).contains(&r) {
        return Err(Error::ParamOutOfRange {
            name: "r",
            value: r,
            range: "[0, pi/4]",
        });
    }
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    DensityMatrix::new(unruh_map(rho.matrix(), r).hermitian_part())
}

/// Acceleration angle from a mode frequency `omega` and proper
/// acceleration `a` (both in natural units):
/// `r = arccos[(1 + e^{-2 pi omega / a})^{-1/2}]`.
///
/// Monotone in `a`, with `r -> 0` as `a -> 0` and `r -> pi/4` as
/// `a -> infinity`. Both inputs must be strictly positive.
pub fn acceleration_to_r(omega: f64, accel: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::NonPositiveInput { value: omega });
    }
    if !(accel > 0.0) {
        return Err(Error::NonPositiveInput { value: accel });
    }
    let boltz = (-2.0 * std::f64::consts::PI * omega / accel).exp();
    Ok((1.0 / (1.0 + boltz).sqrt()).acos())
}

/// Unnormalized closed-form pipeline output and its trace.
fn model_matrix(params: &ModelParams) -> (ComplexMatrix, f64) {
    let half = 0.5 * params.theta;
    let (s, c) = (half.sin(), half.cos());
    let (pb, qb) = (1.0 - params.p, 1.0 - params.q);
    let (cr, sr) = (params.r.cos(), params.r.sin());

    let m11 = s * s * pb * cr * cr;
    let m22 = s * s * pb * qb * sr * sr;
    let m44 = c * c * qb;
    let m14 = Complex64::from_polar(s * c * (pb * qb).sqrt() * cr, -params.phi);

    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = Complex64::new(m11, 0.0);
    m[(1, 1)] = Complex64::new(m22, 0.0);
    m[(3, 3)] = Complex64::new(m44, 0.0);
    m[(0, 3)] = m14;
    m[(3, 0)] = m14.conj();
    (m, m11 + m22 + m44)
}

/// Postselected pipeline state in closed form.
///
/// The output is X-structured with an identically zero third row and
/// column. Fails with [`Error::ZeroProbability`] when the success
/// probability drops below 1e-12 (only possible in the simultaneous limit
/// of the two angles' endpoints).
pub fn model_state(params: &ModelParams) -> Result<ModelState> {
    let (m, n) = model_matrix(params);
    if n < 1e-12 {
        return Err(Error::ZeroProbability { value: n });
    }
    let rho = DensityMatrix::new(m.scaled(Complex64::new(1.0 / n, 0.0)))?;
    Ok(ModelState {
        rho,
        success_probability: n,
    })
}

/// Postselected pipeline state computed by running the pipeline itself:
/// initial state, weak-measurement Kraus operator, decoherence map,
/// reversal Kraus operator, then normalization.
///
/// This shares no algebra with [`model_state`]; the two routes agreeing is
/// a correctness check on both.
pub fn model_state_pipeline(params: &ModelParams) -> Result<ModelState> {
    let rho0 = initial_state(params.theta, params.phi)?;
    let id = ComplexMatrix::identity(2);

    let weak = kron(&id, &weak_measurement_op(params.p)?);
    let after_weak = &(&weak * rho0.matrix()) * &weak.adjoint();

    let after_unruh = unruh_map(&after_weak, params.r);

    let rev = kron(&id, &reversal_op(params.q)?);
    let after_rev = &(&rev * &after_unruh) * &rev.adjoint();

    let n = after_rev.trace().re;
    if n < 1e-12 {
        return Err(Error::ZeroProbability { value: n });
    }
    let rho = DensityMatrix::new(
        after_rev
            .hermitian_part()
            .scaled(Complex64::new(1.0 / n, 0.0)),
    )?;
    Ok(ModelState {
        rho,
        success_probability: n,
    })
}
