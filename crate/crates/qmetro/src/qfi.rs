//! Quantum Fisher information of the pipeline state, by three independent
//! routes, plus the closed-form optimal working points.
//!
//! * a numeric spectral double sum over the state's eigendecomposition,
//! * a symmetric-logarithmic-derivative construction exploiting the
//!   X block structure,
//! * literal closed-form expressions for the two estimated angles.

use num_complex::Complex64;

use crate::channels::{model_state, ModelParams};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, DensityMatrix};

/// Default half-step for central finite differences over a state family.
pub const DEFAULT_FD_HALF_STEP: f64 = 1e-5;

/// Eigenvalue-pair support cutoff for the spectral double sum.
pub const SUPPORT_EPS: f64 = 1e-10;

/// Determinant cutoff below which a block is treated as singular and its
/// inverse-dependent term dropped.
const BLOCK_DET_EPS: f64 = 1e-14;

/// Trace cutoff below which a block carries no weight and its logarithmic
/// derivative is set to zero.
const BLOCK_TRACE_EPS: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A one-parameter family of states `x -> rho(x)` with an attached
/// finite-difference half-step.
pub struct StateFamily {
    f: Box<dyn Fn(f64) -> Result<DensityMatrix> + Send + Sync>,
    step: f64,
}

impl StateFamily {
    /// Wrap a state-valued function with the default derivative step.
    pub fn new(f: impl Fn(f64) -> Result<DensityMatrix> + Send + Sync + 'static) -> Self {
        Self {
            f: Box::new(f),
            step: DEFAULT_FD_HALF_STEP,
        }
    }

    /// Wrap a state-valued function with an explicit derivative half-step,
    /// which must be positive and finite.
    pub fn with_step(
        f: impl Fn(f64) -> Result<DensityMatrix> + Send + Sync + 'static,
        step: f64,
    ) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::ParamOutOfRange {
                name: "step",
                value: step,
                range: "(0, inf)",
            });
        }
        Ok(Self {
            f: Box::new(f),
            step,
        })
    }

    /// The state at parameter value `x`.
    pub fn evaluate(&self, x: f64) -> Result<DensityMatrix> {
        (self.f)(x)
    }

    /// The finite-difference half-step used by [`StateFamily::derivative`].
    pub fn derivative_step(&self) -> f64 {
        self.step
    }

    /// Central-difference derivative `(rho(x+h) - rho(x-h)) / (2h)`.
    pub fn derivative(&self, x: f64) -> Result<ComplexMatrix> {
        let h = self.step;
        let plus = self.evaluate(x + h)?;
        let minus = self.evaluate(x - h)?;
        Ok((plus.matrix() - minus.matrix()).scaled(Complex64::new(0.5 / h, 0.0)))
    }
}

/// Pipeline states as a family over the initial polar angle, at fixed
/// phase and measurement parameters.
pub fn weight_family(phi: f64, p: f64, q: f64, r: f64) -> StateFamily {
    StateFamily::new(move |theta| {
        let params = ModelParams::new(theta, phi, p, q, r)?;
        Ok(model_state(&params)?.rho)
    })
}

/// Pipeline states as a family over the initial phase, at fixed polar
/// angle and measurement parameters.
///
/// The state is `2 pi`-periodic in the phase, so the family wraps its
/// argument into `[0, 2 pi)`; finite differences across the endpoints are
/// exact.
pub fn phase_family(theta: f64, p: f64, q: f64, r: f64) -> StateFamily {
    StateFamily::new(move |phi| {
        let wrapped = phi.rem_euclid(2.0 * std::f64::consts::PI);
        let params = ModelParams::new(theta, wrapped, p, q, r)?;
        Ok(model_state(&params)?.rho)
    })
}

/// How a Fisher-information value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QfiMethod {
    /// Spectral double sum over the eigendecomposition.
    SpectralDoubleSum,
    /// Blockwise symmetric logarithmic derivative.
    BlockSld,
    /// Literal closed-form expression.
    ClosedForm,
}

/// A Fisher-information value with its provenance.
#[derive(Clone, Copy, Debug)]
pub struct QfiResult {
    /// The Fisher information (clamped to be nonnegative).
    pub value: f64,
    /// Which route produced it.
    pub method: QfiMethod,
    /// Number of eigenvalues of the state above [`SUPPORT_EPS`].
    pub support_dim: usize,
}

/// Quantum Fisher information by the spectral double sum
/// `F = sum_{ij} 2 |<v_i| d_rho |v_j>|^2 / (lambda_i + lambda_j)`,
/// restricted to pairs with `lambda_i + lambda_j > 1e-10`.
///
/// The derivative is taken by central differences with the family's step.
/// Fails with [`Error::DegenerateSupport`] when no eigenvalue pair clears
/// the cutoff.
pub fn qfi_numeric(family: &StateFamily, x: f64) -> Result<QfiResult> {
    let rho = family.evaluate(x)?;
    let drho = family.derivative(x)?;
    let eig = eig_hermitian(rho.matrix())?;
    let n = rho.dim();

    let support_dim = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l > SUPPORT_EPS)
        .count();

    let mut sum = 0.0;
    let mut any_pair = false;
    for i in 0..n {
        for j in 0..n {
            let denom = eig.eigenvalues[i] + eig.eigenvalues[j];
            if denom <= SUPPORT_EPS {
                continue;
            }
            any_pair = true;
            let vi = &eig.eigenvectors[i];
            let vj = &eig.eigenvectors[j];
            let mut amp = ZERO;
            for a in 0..n {
                for b in 0..n {
                    let d = drho[(a, b)];
                    if d != ZERO {
                        amp += vi[a].conj() * d * vj[b];
                    }
                }
            }
            sum += 2.0 * amp.norm_sqr() / denom;
        }
    }
    if !any_pair {
        return Err(Error::DegenerateSupport);
    }
    Ok(QfiResult {
        value: sum.max(0.0),
        method: QfiMethod::SpectralDoubleSum,
        support_dim,
    })
}

/// Indices of the X blocks: the outer corner block and the two inner
/// levels, which the pipeline state never couples.
const X_BLOCKS: [&[usize]; 3] = [&[0, 3], &[1], &[2]];

fn extract_block(m: &ComplexMatrix, idx: &[usize]) -> Vec<Complex64> {
    let k = idx.len();
    let mut out = vec![ZERO; k * k];
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            out[a * k + b] = m[(i, j)];
        }
    }
    out
}

/// Logarithmic-derivative block for one X block.
///
/// With `mu = tr(rho_b)/2`, `P = tr(rho_b^2)` and their parameter
/// derivatives, the block of the symmetric logarithmic derivative is
/// `L_b = (d_rho_b + xi rho_b^{-1} - d_mu I) / mu` with
/// `xi = 2 mu d_mu - d_P / 4`. A block with vanishing trace contributes
/// `L_b = 0`; a block with vanishing determinant drops the inverse term
/// (its `xi` is zero there).
fn sld_block(rho_b: &[Complex64], drho_b: &[Complex64], k: usize) -> Result<Vec<Complex64>> {
    let tr: f64 = (0..k).map(|a| rho_b[a * k + a].re).sum();
    let mu = 0.5 * tr;
    if mu.abs() <= BLOCK_TRACE_EPS {
        return Ok(vec![ZERO; k * k]);
    }
    let dtr: f64 = (0..k).map(|a| drho_b[a * k + a].re).sum();
    let dmu = 0.5 * dtr;

    // d tr(rho^2) = 2 Re tr(rho d_rho)
    let mut tr_rho_drho = ZERO;
    for a in 0..k {
        for b in 0..k {
            tr_rho_drho += rho_b[a * k + b] * drho_b[b * k + a];
        }
    }
    let dp = 2.0 * tr_rho_drho.re;

    let det = match k {
        1 => rho_b[0].re,
        2 => (rho_b[0] * rho_b[3] - rho_b[1] * rho_b[2]).re,
        _ => unreachable!("X blocks are 1x1 or 2x2"),
    };

    let mut l = vec![ZERO; k * k];
    let xi = if det <= BLOCK_DET_EPS {
        0.0
    } else {
        2.0 * mu * dmu - 0.25 * dp
    };
    if xi != 0.0 {
        // Inverse via the adjugate; only reached when det is safely away
        // from zero.
        let inv: Vec<Complex64> = match k {
            1 => vec![Complex64::new(1.0 / det, 0.0)],
            2 => {
                let d = Complex64::new(det, 0.0);
                vec![rho_b[3] / d, -rho_b[1] / d, -rho_b[2] / d, rho_b[0] / d]
            }
            _ => unreachable!(),
        };
        if inv.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::SingularBlock);
        }
        for (dst, src) in l.iter_mut().zip(&inv) {
            *dst = src * xi;
        }
    }
    for a in 0..k {
        for b in 0..k {
            l[a * k + b] += drho_b[a * k + b];
            if a == b {
                l[a * k + b] -= Complex64::new(dmu, 0.0);
            }
        }
    }
    for z in &mut l {
        *z /= mu;
    }
    if l.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SingularBlock);
    }
    Ok(l)
}

/// Symmetric logarithmic derivative of an X-structured state, assembled
/// from per-block solutions.
///
/// Both the state and its derivative must respect the X structure (all
/// entries off the diagonal and anti-diagonal below 1e-10).
pub fn block_sld(rho: &DensityMatrix, drho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.dim() != 4 || drho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: if rho.dim() != 4 { rho.dim() } else { drho.dim() },
        });
    }
    for m in [rho.matrix(), drho] {
        for i in 0..4 {
            for j in 0..4 {
                let on_x = i == j || i + j == 3;
                if !on_x && m[(i, j)].norm() > 1e-10 {
                    return Err(Error::NotAState {
                        reason: format!("entry ({},{}) breaks the X structure", i + 1, j + 1),
                    });
                }
            }
        }
    }
    let mut l = ComplexMatrix::zeros(4);
    for idx in X_BLOCKS {
        let k = idx.len();
        let lb = sld_block(
            &extract_block(rho.matrix(), idx),
            &extract_block(drho, idx),
            k,
        )?;
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                l[(i, j)] = lb[a * k + b];
            }
        }
    }
    Ok(l)
}

/// Quantum Fisher information `F = Re tr(rho L^2)` through the blockwise
/// symmetric logarithmic derivative, with the derivative taken by central
/// differences over the family.
pub fn block_sld_qfi(family: &StateFamily, x: f64) -> Result<QfiResult> {
    let rho = family.evaluate(x)?;
    let drho = family.derivative(x)?;
    let l = block_sld(&rho, &drho)?;
    let value = (&(rho.matrix() * &l) * &l).trace().re;
    let eig = eig_hermitian(rho.matrix())?;
    let support_dim = eig
        .eigenvalues
        .iter()
        .filter(|&&v| v > SUPPORT_EPS)
        .count();
    Ok(QfiResult {
        value: value.max(0.0),
        method: QfiMethod::BlockSld,
        support_dim,
    })
}

/// Closed-form Fisher information for the initial polar angle.
///
/// With `pb = 1-p`, `qb = 1-q`:
/// `F = -8 qb pb (-qb + (qb-1) cos 2r - 1) / D^2` where
/// `D = -(2 qb - 2) pb cos 2r sin^2(theta/2) + pb + qb pb + 2 qb
///      - (qb pb + pb - 2 qb) cos theta`.
///
/// At `q = 0` the `cos 2r` coefficient vanishes identically and the
/// expression collapses to `(4 - 4p) / (p cos theta - p + 2)^2`,
/// independent of the acceleration.
pub fn qfi_weight_closed(params: &ModelParams) -> f64 {
    let (pb, qb) = (1.0 - params.p(), 1.0 - params.q());
    let c2r = (2.0 * params.r()).cos();
    let half = 0.5 * params.theta();
    let s2 = half.sin() * half.sin();
    let ct = params.theta().cos();

    let num = -8.0 * qb * pb * (-qb + (qb - 1.0) * c2r - 1.0);
    let den = -(2.0 * qb - 2.0) * pb * c2r * s2 + pb + qb * pb + 2.0 * qb
        - (qb * pb + pb - 2.0 * qb) * ct;
    num / (den * den)
}

/// Closed-form Fisher information for the initial phase.
///
/// Diverging tangent/cotangent factors make the expression singular at the
/// poles; inputs within 1e-12 of `theta = 0` or `theta = pi` are rejected
/// with [`Error::SingularTheta`].
pub fn qfi_phase_closed(params: &ModelParams) -> Result<f64> {
    let theta = params.theta();
    if theta.abs() <= 1e-12 || (theta - std::f64::consts::PI).abs() <= 1e-12 {
        return Err(Error::SingularTheta);
    }
    let (pb, qb) = (1.0 - params.p(), 1.0 - params.q());
    let r = params.r();
    let (cr2, sr2) = (r.cos() * r.cos(), r.sin() * r.sin());
    let c2r = (2.0 * r).cos();
    let ct = theta.cos();
    let half = 0.5 * theta;
    let s2 = half.sin() * half.sin();
    let t2 = half.tan() * half.tan();

    let num = -2.0
        * pb
        * qb
        * cr2
        * (c2r * (ct - 1.0) * pb - pb - 2.0 * qb + (pb - 2.0 * qb) * ct)
        * t2;
    let den = (2.0 * pb * cr2 * s2 + 2.0 * pb * qb * sr2 * s2 + qb + qb * ct)
        * (pb * cr2 * t2 + qb)
        * (pb * cr2 * t2 + qb);
    Ok(num / den)
}

/// Optimal weak-measurement strength without reversal (`q = 0`), and the
/// Fisher information it attains.
///
/// The optimum `p = 2 cos theta / (cos theta - 1)` lies in `[0, 1)` only
/// for `theta in [pi/2, pi)`; elsewhere the maximum sits on the boundary
/// and [`Error::NoOptimum`] is returned. The attained value is
/// `1 / sin^2 theta`, independent of the acceleration.
pub fn optimal_p_q0(theta: f64) -> Result<(f64, f64)> {
    let ct = theta.cos();
    let p = 2.0 * ct / (ct - 1.0);
    // Right at the quarter-turn boundary the cosine is rounding noise and
    // the optimum sits at exactly zero strength; snap it there.
    let p = if (-1e-12..0.0).contains(&p) { 0.0 } else { p };
    if !(0.0..1.0).contains(&p) {
        return Err(Error::NoOptimum);
    }
    let st = theta.sin();
    Ok((p, 1.0 / (st * st)))
}

/// Interior stationary acceleration angle of the polar-angle Fisher
/// information, if one exists in `(0, pi/4]`.
///
/// `r = arccos(arg) / 2` with
/// `arg = [((q-2)p - 3q + 4) cos^2(theta/2) - (q-2)(p-1)]
///        / [q (1-p) sin^2(theta/2)]`;
/// the result is returned only when `arg` lands in `[-1, 1]` and the
/// angle respects the physical cap `r <= pi/4`. Without reversal
/// (`q = 0`) the argument degenerates and there is no interior optimum.
pub fn optimal_r(theta: f64, p: f64, q: f64) -> Option<f64> {
    let half = 0.5 * theta;
    let c2 = half.cos() * half.cos();
    let s2 = half.sin() * half.sin();
    let arg = (((q - 2.0) * p - 3.0 * q + 4.0) * c2 - (q - 2.0) * (p - 1.0))
        / (q * (1.0 - p) * s2);
    if !(-1.0..=1.0).contains(&arg) {
        return None;
    }
    let r = 0.5 * arg.acos();
    (r <= std::f64::consts::FRAC_PI_4).then_some(r)
}

/// Interior stationary weak-measurement strength of the polar-angle
/// Fisher information, if one exists in `[0, 1)`.
///
/// Only polar angles beyond `pi/2` admit an interior maximum; below that
/// the information decreases monotonically in `p`.
pub fn optimal_p(theta: f64, q: f64, r: f64) -> Option<f64> {
    if theta <= std::f64::consts::FRAC_PI_2 {
        return None;
    }
    let c2r = (2.0 * r).cos();
    let half = 0.5 * theta;
    let s2 = half.sin() * half.sin();
    let csc2 = 1.0 / s2;
    let p = (q * c2r + 2.0 * (q - 1.0) * csc2 - 3.0 * q + 4.0) / (q * c2r - q + 2.0);
    (0.0..1.0).contains(&p).then_some(p)
}

/// Interior stationary reversal strength of the polar-angle Fisher
/// information, if one exists in `[0, 1)`.
///
/// Only polar angles below `pi/2` admit an interior maximum in `q`.
pub fn optimal_q(theta: f64, p: f64, r: f64) -> Option<f64> {
    if theta >= std::f64::consts::FRAC_PI_2 {
        return None;
    }
    let ct = theta.cos();
    let c2r = (2.0 * r).cos();
    let half = 0.5 * theta;
    let s2 = half.sin() * half.sin();
    let q = (2.0 * (p - 2.0) * ct - 2.0 * p)
        / (2.0 * (p - 1.0) * c2r * s2 + (p - 3.0) * ct - p - 1.0);
    (0.0..1.0).contains(&q).then_some(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn params(theta: f64, phi: f64, p: f64, q: f64, r: f64) -> ModelParams {
        ModelParams::new(theta, phi, p, q, r).unwrap()
    }

    #[test]
    fn weight_closed_matches_frozen_point() {
        let f = qfi_weight_closed(&params(1.9, 0.0, 0.3, 0.6, 0.5));
        close(f, 0.8445389534372737, 1e-15);
    }

    #[test]
    fn phase_closed_matches_frozen_point() {
        let f = qfi_phase_closed(&params(1.9, 0.0, 0.3, 0.6, 0.5)).unwrap();
        close(f, 0.7340859451840237, 1e-15);
    }

    #[test]
    fn weight_closed_without_reversal_ignores_acceleration() {
        // At q = 0 the closed form is bitwise independent of r and equals
        // the reduced two-parameter expression.
        let want = 1.0896420940984441;
        for r in [0.0, 0.3, FRAC_PI_4] {
            let f = qfi_weight_closed(&params(1.9, 0.0, 0.3, 0.0, r));
            assert_eq!(f, want);
        }
        let (theta, p) = (1.9_f64, 0.3_f64);
        let reduced = (4.0 - 4.0 * p) / (theta.cos() * p - p + 2.0).powi(2);
        assert_eq!(reduced, want);
    }

    #[test]
    fn pristine_probe_has_unit_information() {
        for theta in [0.4, 1.0, FRAC_PI_2, 2.5] {
            for r in [0.0, 0.5, FRAC_PI_4] {
                let f = qfi_weight_closed(&params(theta, 0.0, 0.0, 0.0, r));
                assert_eq!(f, 1.0);
            }
        }
    }

    #[test]
    fn phase_closed_rejects_poles() {
        assert!(matches!(
            qfi_phase_closed(&params(PI, 0.0, 0.1, 0.1, 0.1)),
            Err(Error::SingularTheta)
        ));
        assert!(matches!(
            qfi_phase_closed(&params(0.0, 0.0, 0.1, 0.1, 0.1)),
            Err(Error::SingularTheta)
        ));
    }

    #[test]
    fn numeric_matches_closed_for_weight() {
        let family = weight_family(0.8, 0.3, 0.6, 0.5);
        let got = qfi_numeric(&family, 1.9).unwrap();
        close(got.value, 0.8445389534372737, 1e-7);
        assert_eq!(got.method, QfiMethod::SpectralDoubleSum);
        assert_eq!(got.support_dim, 2);
    }

    #[test]
    fn numeric_matches_closed_for_phase() {
        let family = phase_family(1.9, 0.3, 0.6, 0.5);
        let got = qfi_numeric(&family, 0.8).unwrap();
        close(got.value, 0.7340859451840237, 1e-7);
    }

    #[test]
    fn phase_family_wraps_across_zero() {
        let family = phase_family(1.3, 0.2, 0.1, 0.4);
        // Differentiating at phi = 0 requires evaluating at negative phase.
        let at_zero = qfi_numeric(&family, 0.0).unwrap();
        let at_period = qfi_numeric(&family, 2.0 * PI).unwrap();
        close(at_zero.value, at_period.value, 1e-10);
    }

    #[test]
    fn block_route_matches_closed_tightly() {
        let wf = weight_family(0.8, 0.3, 0.6, 0.5);
        let got = block_sld_qfi(&wf, 1.9).unwrap();
        close(got.value, 0.8445389534372737, 1e-8);
        assert_eq!(got.method, QfiMethod::BlockSld);

        let pf = phase_family(1.9, 0.3, 0.6, 0.5);
        let got = block_sld_qfi(&pf, 0.8).unwrap();
        close(got.value, 0.7340859451840237, 1e-8);
    }

    #[test]
    fn block_route_handles_full_rank_blocks() {
        // Mix the pipeline state with the maximally mixed state so every
        // block becomes invertible and the inverse branch is exercised.
        let family = StateFamily::new(|theta| {
            let params = ModelParams::new(theta, 0.8, 0.3, 0.6, 0.5)?;
            let rho = model_state(&params)?.rho;
            let mixed = &rho.matrix().scaled(Complex64::new(0.7, 0.0))
                + &ComplexMatrix::identity(4).scaled(Complex64::new(0.075, 0.0));
            DensityMatrix::new(mixed)
        });
        let sld = block_sld_qfi(&family, 1.9).unwrap();
        let spectral = qfi_numeric(&family, 1.9).unwrap();
        close(sld.value, spectral.value, 1e-7);
        assert_eq!(spectral.support_dim, 4);
    }

    #[test]
    fn block_sld_rejects_non_x_input() {
        let mut m = ComplexMatrix::diag_real(&[0.25; 4]);
        m[(0, 1)] = Complex64::new(0.05, 0.0);
        m[(1, 0)] = Complex64::new(0.05, 0.0);
        let rho = DensityMatrix::new(m).unwrap();
        let drho = ComplexMatrix::zeros(4);
        assert!(matches!(
            block_sld(&rho, &drho),
            Err(Error::NotAState { .. })
        ));
    }

    #[test]
    fn spectral_sum_tracks_rank() {
        // An untouched probe stays pure: one eigenvalue in the support and
        // unit information for the polar angle.
        let family = weight_family(0.0, 0.0, 0.0, 0.0);
        let got = qfi_numeric(&family, 1.0).unwrap();
        assert_eq!(got.support_dim, 1);
        close(got.value, 1.0, 1e-8);
        // Switching on the acceleration populates a second level.
        let family = weight_family(0.0, 0.0, 0.0, 0.4);
        assert_eq!(qfi_numeric(&family, 1.0).unwrap().support_dim, 2);
    }

    #[test]
    fn optimal_weight_strength_without_reversal() {
        let (p, f) = optimal_p_q0(2.0 * PI / 3.0).unwrap();
        close(p, 0.66666666666666652, 1e-16);
        close(f, 4.0 / 3.0, 1e-15);

        let (p, f) = optimal_p_q0(FRAC_PI_2).unwrap();
        assert_eq!(p, 0.0);
        close(f, 1.0, 1e-15);

        assert!(matches!(optimal_p_q0(0.5), Err(Error::NoOptimum)));
        assert!(matches!(optimal_p_q0(PI), Err(Error::NoOptimum)));
    }

    #[test]
    fn optimal_acceleration_angle_frozen_point() {
        let r = optimal_r(1.65, 0.5, 0.5).unwrap();
        close(r, 0.57228270133156878, 1e-15);
        let f = qfi_weight_closed(&params(1.65, 0.0, 0.5, 0.5, r));
        close(f, 1.0062995509593082, 1e-13);
        let st = 1.65_f64.sin();
        close(f, 1.0 / (st * st), 1e-9);
    }

    #[test]
    fn optimal_acceleration_angle_needs_reversal() {
        assert!(optimal_r(1.65, 0.5, 0.0).is_none());
        assert!(optimal_r(0.3, 0.1, 0.2).is_none());
    }

    #[test]
    fn optimal_measurement_strengths_frozen_points() {
        let p = optimal_p(2.0, 0.4, 0.5).unwrap();
        close(p, 0.72758448689339394, 1e-15);
        assert!(optimal_p(1.2, 0.4, 0.5).is_none());

        let q = optimal_q(1.0, 0.4, 0.5).unwrap();
        close(q, 0.85617089612209152, 1e-15);
        assert!(optimal_q(2.0, 0.4, 0.5).is_none());
    }

    #[test]
    fn custom_step_rejects_bad_values() {
        assert!(StateFamily::with_step(|_| Ok(DensityMatrix::new(
            ComplexMatrix::diag_real(&[0.5, 0.5])
        )?), 0.0)
        .is_err());
        let family = StateFamily::with_step(
            |theta| {
                let params = ModelParams::new(theta, 0.0, 0.2, 0.1, 0.3)?;
                Ok(model_state(&params)?.rho)
            },
            1e-6,
        )
        .unwrap();
        assert_eq!(family.derivative_step(), 1e-6);
        let got = qfi_numeric(&family, 1.4).unwrap();
        let closed = qfi_weight_closed(&params(1.4, 0.0, 0.2, 0.1, 0.3));
        close(got.value, closed, 1e-6);
    }
}
