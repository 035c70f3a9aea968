//! Thermal-state source and entangling-cloner channel model.
//!
//! Alice prepares displaced thermal modes `X_A = X_S + X_0` with signal
//! variance `V_S` and shot-noise (purity) `V_0 = 1 + beta >= 1`, so the
//! total variance is `V = V_S + V_0`. The channel is an entangling cloner:
//! a beam splitter of transmission `T` whose idle port is fed with one arm
//! of Eve's EPR state of variance `W`, giving the Heisenberg relations
//!
//! ```text
//! X_B  =  sqrt(T) X_A + sqrt(1-T) E
//! E'   = -sqrt(1-T) X_A + sqrt(T) E
//! ```
//!
//! All second moments used by the rate functionals are built here.

use crate::error::{Error, Result};
use crate::gaussian::{CorrelationBlock, CovarianceMatrix};
use nalgebra::DMatrix;

/// Alice's preparation: signal modulation variance and shot-noise/purity,
/// both in shot-noise units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceParams {
    v_s: f64,
    v_0: f64,
}

impl SourceParams {
    pub fn new(v_s: f64, v_0: f64) -> Result<Self> {
        if !v_s.is_finite() || v_s < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "signal variance must be >= 0, got {v_s}"
            )));
        }
        if !v_0.is_finite() || v_0 < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "shot-noise variance must be >= 1, got {v_0}"
            )));
        }
        Ok(Self { v_s, v_0 })
    }

    /// Signal modulation variance V_S.
    pub fn signal_variance(&self) -> f64 {
        self.v_s
    }

    /// Shot-noise/purity V_0 = 1 + beta.
    pub fn shot_noise(&self) -> f64 {
        self.v_0
    }

    /// Total prepared variance V = V_S + V_0.
    pub fn total_variance(&self) -> f64 {
        self.v_s + self.v_0
    }
}

/// Entangling-cloner channel: beam-splitter transmission and EPR noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    t: f64,
    w: f64,
}

/// Equivalent channel noise referred to the input, split into the
/// loss-induced part `(1-T)/T` and the excess part `eps = (W-1)(1-T)/T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseDecomposition {
    pub loss: f64,
    pub excess: f64,
}

impl NoiseDecomposition {
    /// Total equivalent noise chi = loss + excess = W (1-T) / T.
    pub fn total(&self) -> f64 {
        self.loss + self.excess
    }
}

impl ChannelParams {
    pub fn new(t: f64, w: f64) -> Result<Self> {
        if !t.is_finite() || !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidArgument(format!(
                "transmission must lie in [0, 1], got {t}"
            )));
        }
        if !w.is_finite() || w < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "EPR noise variance must be >= 1, got {w}"
            )));
        }
        Ok(Self { t, w })
    }

    /// Recover W = chi T / (1 - T) from an equivalent-noise description.
    pub fn from_equivalent_noise(t: f64, chi: f64) -> Result<Self> {
        if !(0.0 < t && t < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "equivalent-noise conversion needs T in (0, 1), got {t}"
            )));
        }
        Self::new(t, chi * t / (1.0 - t))
    }

    pub fn transmission(&self) -> f64 {
        self.t
    }

    pub fn epr_noise(&self) -> f64 {
        self.w
    }

    /// Equivalent noise chi = (1-T)/T + eps = W (1-T) / T. Errors at T = 0
    /// where the referred-to-input noise diverges.
    pub fn equivalent_noise(&self) -> Result<NoiseDecomposition> {
        if self.t == 0.0 {
            return Err(Error::InvalidArgument(
                "equivalent noise is undefined at zero transmission".into(),
            ));
        }
        let loss = (1.0 - self.t) / self.t;
        Ok(NoiseDecomposition {
            loss,
            excess: (self.w - 1.0) * loss,
        })
    }
}

/// Second moments of the modes leaving the beam splitter, together with
/// their conditional counterparts given Alice's classical data:
///
/// ```text
/// b_V = (1-T) W + T V      e_V = (1-T) V   + T W
/// b_1 = (1-T) W + T V_0    e_1 = (1-T) V_0 + T W
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputVariances {
    /// Bob's quadrature variance.
    pub b_v: f64,
    /// Eve's transmitted-mode (E') variance.
    pub e_v: f64,
    /// Bob's variance conditioned on Alice's data.
    pub b_1: f64,
    /// E' variance conditioned on Alice's data.
    pub e_1: f64,
}

pub fn output_variances(src: &SourceParams, ch: &ChannelParams) -> OutputVariances {
    let v = src.total_variance();
    let (t, w) = (ch.transmission(), ch.epr_noise());
    OutputVariances {
        b_v: (1.0 - t) * w + t * v,
        e_v: (1.0 - t) * v + t * w,
        b_1: (1.0 - t) * w + t * src.shot_noise(),
        e_1: (1.0 - t) * src.shot_noise() + t * w,
    }
}

/// Which prepared variance feeds Eve's transmitted-mode block on a given
/// quadrature of `V_E(., .)`: the total `V` for an unconditioned quadrature,
/// the shot-noise `V_0` for a quadrature conditioned on Alice's data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EveInput {
    /// Total prepared variance V = V_S + V_0.
    Total,
    /// Shot-noise floor V_0 (Alice's modulation removed).
    ShotNoise,
}

impl EveInput {
    fn variance(self, src: &SourceParams) -> f64 {
        match self {
            EveInput::Total => src.total_variance(),
            EveInput::ShotNoise => src.shot_noise(),
        }
    }
}

/// Eve's two-mode covariance matrix V_E(x, y) over (E', E''):
///
/// ```text
/// [ diag((1-T)x + TW, (1-T)y + TW)    phi Z ]
/// [ phi Z                             W I   ]
/// ```
///
/// with phi = sqrt(T (W^2 - 1)). `V_E(Total, Total)` is the unconditional
/// state; `(ShotNoise, Total)` and `(ShotNoise, ShotNoise)` are the states
/// conditioned on Alice's Q data and on both of Alice's quadratures.
pub fn eve_cm(
    src: &SourceParams,
    ch: &ChannelParams,
    q_input: EveInput,
    p_input: EveInput,
) -> Result<CovarianceMatrix> {
    let (t, w) = (ch.transmission(), ch.epr_noise());
    let phi = (t * (w * w - 1.0)).sqrt();
    let qq = (1.0 - t) * q_input.variance(src) + t * w;
    let pp = (1.0 - t) * p_input.variance(src) + t * w;
    let m = DMatrix::from_row_slice(
        4,
        4,
        &[
            qq, 0.0, phi, 0.0, //
            0.0, pp, 0.0, -phi, //
            phi, 0.0, w, 0.0, //
            0.0, -phi, 0.0, w,
        ],
    );
    CovarianceMatrix::from_matrix(m)
}

/// Correlation coefficients between Eve's stored modes and Bob's output:
///
/// ```text
/// xi  = -sqrt(T (1-T)) (V_S + V_0 - W)
/// phi =  sqrt(1-T) sqrt(W^2 - 1)
/// ```
pub fn correlation_block(src: &SourceParams, ch: &ChannelParams) -> CorrelationBlock {
    let (t, w) = (ch.transmission(), ch.epr_noise());
    let xi = -(t * (1.0 - t)).sqrt() * (src.total_variance() - w);
    let phi_corr = (1.0 - t).sqrt() * (w * w - 1.0).sqrt();
    CorrelationBlock::new(xi, phi_corr)
}
