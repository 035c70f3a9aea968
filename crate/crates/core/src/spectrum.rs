//! Security across the electromagnetic spectrum.
//!
//! At frequency f and temperature tau the environment loads every mode with
//! the Bose-Einstein mean photon number `n = 1/(exp(hf/k_B tau) - 1)`, i.e.
//! a thermal quadrature variance `V = 2n + 1`. Alice's preparation purity
//! and (by default) Eve's EPR noise are both set to this environmental
//! variance, and the direct-reconciliation/homodyne rate decides security
//! cell by cell over a (frequency, transmission) grid. Independently, the
//! channel becomes entanglement breaking once its equivalent noise reaches
//! one shot-noise unit, which bounds the usable transmission from below by
//! `T_EB = W / (1 + W)` and the usable frequency by
//! `f > -(k_B tau / h) ln(2T - 1)`.

use crate::channel::{ChannelParams, SourceParams};
use crate::error::{Error, Result};
use crate::par::parallel_map;
use crate::rates::{key_rate, Protocol};

/// Planck constant, J s (exact SI definition).
pub const PLANCK_CONSTANT: f64 = 6.626_070_15e-34;

/// Boltzmann constant, J/K (exact SI definition).
pub const BOLTZMANN_CONSTANT: f64 = 1.380_649e-23;

/// A single-mode thermal environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalEnvironment {
    temperature: f64,
    frequency: f64,
}

impl ThermalEnvironment {
    pub fn new(temperature: f64, frequency: f64) -> Result<Self> {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "temperature must be positive, got {temperature} K"
            )));
        }
        if !(frequency.is_finite() && frequency > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "frequency must be positive, got {frequency} Hz"
            )));
        }
        Ok(Self {
            temperature,
            frequency,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }
}

/// Bose-Einstein occupancy `1 / (exp(hf / k_B tau) - 1)`.
///
/// For `hf / k_B tau > 700` the exponential overflows f64; the occupancy is
/// indistinguishable from zero there and is returned as exactly 0.
pub fn mean_photon_number(env: &ThermalEnvironment) -> f64 {
    let x = PLANCK_CONSTANT * env.frequency() / (BOLTZMANN_CONSTANT * env.temperature());
    if x > 700.0 {
        return 0.0;
    }
    1.0 / x.exp_m1()
}

/// Thermal quadrature variance `V = 2 n + 1` in shot-noise units.
pub fn variance_from_frequency(env: &ThermalEnvironment) -> f64 {
    2.0 * mean_photon_number(env) + 1.0
}

/// Transmission below which a channel of EPR noise `w` is entanglement
/// breaking: `T_EB = w / (1 + w)`. An intercept-resend attack forbids any
/// secret key for `T <= T_EB`.
pub fn eb_transmission_bound(w: f64) -> Result<f64> {
    if !(w.is_finite() && w >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "EPR noise must be >= 1, got {w}"
        )));
    }
    Ok(w / (1.0 + w))
}

/// Minimum frequency keeping the channel out of the entanglement-breaking
/// regime at transmission `t`: `f_min = -(k_B tau / h) ln(2t - 1)`.
///
/// Returns `None` for `t <= 1/2`, where the channel is entanglement
/// breaking at every frequency.
pub fn eb_frequency_bound(t: f64, temperature: f64) -> Result<Option<f64>> {
    if !(t.is_finite() && 0.0 < t && t <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "transmission must lie in (0, 1], got {t}"
        )));
    }
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "temperature must be positive, got {temperature} K"
        )));
    }
    if t <= 0.5 {
        return Ok(None);
    }
    let alpha = BOLTZMANN_CONSTANT * temperature / PLANCK_CONSTANT;
    Ok(Some(-alpha * (2.0 * t - 1.0).ln()))
}

/// Security classification of one (frequency, transmission) cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecurityClass {
    /// Positive key rate.
    Secure,
    /// Entanglement-breaking channel: no protocol can distil a key.
    InsecureEntanglementBreaking,
    /// Not entanglement breaking, but this protocol's rate is non-positive.
    InsecureRate,
}

/// One evaluated cell of the security map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecurityMapCell {
    pub frequency: f64,
    pub transmission: f64,
    /// Secret key rate of the protocol at this cell, bits.
    pub rate: f64,
    /// Entanglement-breaking transmission bound at this cell's frequency.
    pub eb_bound: f64,
    pub classification: SecurityClass,
}

/// An inclusive linear grid over one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl GridRange {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidArgument(format!(
                "grid range needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        if steps < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 2 steps, got {steps}"
            )));
        }
        Ok(Self { lo, hi, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        let span = self.hi - self.lo;
        (0..self.steps)
            .map(|i| self.lo + span * i as f64 / (self.steps - 1) as f64)
            .collect()
    }

    /// Logarithmically spaced values; requires lo > 0.
    pub fn log_values(&self) -> Result<Vec<f64>> {
        if self.lo <= 0.0 {
            return Err(Error::InvalidArgument(
                "logarithmic grid needs a positive lower bound".into(),
            ));
        }
        let (lo, hi) = (self.lo.ln(), self.hi.ln());
        Ok((0..self.steps)
            .map(|i| (lo + (hi - lo) * i as f64 / (self.steps - 1) as f64).exp())
            .collect())
    }
}

/// Wavelength-dependent security map over a (frequency, transmission) grid.
///
/// Restricted to direct reconciliation with homodyne detection, the variant
/// robust enough against preparation noise to operate away from the optical
/// band. At each frequency the environmental variance sets Alice's purity
/// and, unless `epr_override` is given, Eve's EPR noise as well (Eve
/// matches the environmental noise to stay hidden). Bob's homodyne detector
/// is taken as ideal and thermal-noise-free.
///
/// Cells are ordered by (frequency, transmission). Frequencies are spaced
/// logarithmically, transmissions linearly.
pub fn security_map(
    protocol: Protocol,
    temperature: f64,
    v_s: f64,
    f_range: &GridRange,
    t_range: &GridRange,
    epr_override: Option<f64>,
) -> Result<Vec<SecurityMapCell>> {
    if protocol != Protocol::DR_HOM {
        return Err(Error::InvalidArgument(format!(
            "security map is defined for dr-hom, got {protocol}"
        )));
    }
    if !(0.0..=1.0).contains(&t_range.lo) || !(0.0..=1.0).contains(&t_range.hi) {
        return Err(Error::InvalidArgument(format!(
            "transmission range [{}, {}] leaves [0, 1]",
            t_range.lo, t_range.hi
        )));
    }
    let frequencies = f_range.log_values()?;
    let transmissions = t_range.values();

    let mut points = Vec::with_capacity(frequencies.len() * transmissions.len());
    for &f in &frequencies {
        for &t in &transmissions {
            points.push((f, t));
        }
    }
    let cells = parallel_map(&points, |&(f, t)| -> Result<SecurityMapCell> {
        let env = ThermalEnvironment::new(temperature, f)?;
        let v_env = variance_from_frequency(&env);
        let w = epr_override.unwrap_or(v_env);
        let src = SourceParams::new(v_s, v_env)?;
        let ch = ChannelParams::new(t, w)?;
        let rate = key_rate(protocol, &src, &ch)?.rate;
        let eb_bound = eb_transmission_bound(w)?;
        let classification = if t <= eb_bound {
            SecurityClass::InsecureEntanglementBreaking
        } else if rate <= 0.0 {
            SecurityClass::InsecureRate
        } else {
            SecurityClass::Secure
        };
        Ok(SecurityMapCell {
            frequency: f,
            transmission: t,
            rate,
            eb_bound,
            classification,
        })
    });
    cells.into_iter().collect()
}
