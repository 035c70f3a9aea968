//! Threshold and crossover searches, parameter sweeps, and the
//! infinite-preparation-noise (classical) limit.

use crate::channel::{ChannelParams, SourceParams};
use crate::error::{Error, Result};
use crate::par::parallel_map;
use crate::rates::{key_rate, KeyRateResult, Protocol};
use crate::spectrum::{variance_from_frequency, ThermalEnvironment};

/// Bisection width at which a threshold search stops.
pub const THRESHOLD_TOL: f64 = 1e-9;

/// Interior points of the default coarse bracketing grid.
pub const DEFAULT_GRID_STEPS: usize = 200;

/// A protocol with everything fixed except the channel transmission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolSetup {
    pub protocol: Protocol,
    pub source: SourceParams,
    pub epr_noise: f64,
}

impl ProtocolSetup {
    pub fn new(protocol: Protocol, source: SourceParams, epr_noise: f64) -> Result<Self> {
        // Validate the noise once up front; rate_at builds per-T channels.
        ChannelParams::new(0.5, epr_noise)?;
        Ok(Self {
            protocol,
            source,
            epr_noise,
        })
    }

    /// Secret key rate at transmission `t`.
    pub fn rate_at(&self, t: f64) -> Result<f64> {
        let ch = ChannelParams::new(t, self.epr_noise)?;
        Ok(key_rate(self.protocol, &self.source, &ch)?.rate)
    }
}

/// Outcome of a security-threshold search over T in (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdOutcome {
    /// The rate crosses zero at this transmission and is positive above it.
    Threshold(f64),
    /// Positive rate on the entire sampled interval.
    SecureEverywhere,
    /// Non-positive rate on the entire sampled interval.
    InsecureEverywhere,
}

impl ThresholdOutcome {
    pub fn threshold(&self) -> Option<f64> {
        match self {
            ThresholdOutcome::Threshold(t) => Some(*t),
            _ => None,
        }
    }
}

/// Coarse grid on (0, 1): uniform interior points plus geometric refinement
/// toward both endpoints, where thresholds can sit within 1e-5 of T = 1
/// (strongly thermal channels). Points closer to the endpoints than 1e-9
/// are avoided: rate magnitudes fall below f64 roundoff there and sign
/// information degenerates into noise.
fn bracketing_grid(steps: usize) -> Vec<f64> {
    let mut ts: Vec<f64> = (1..steps).map(|k| k as f64 / steps as f64).collect();
    ts.extend_from_slice(&[1e-4, 3e-4, 1e-3, 3e-3]);
    for k in 3..=9 {
        ts.push(1.0 - 10f64.powi(-k));
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

/// Find the security threshold T* of `setup` on the open interval (0, 1):
/// the zero of the rate curve, bracketed on a coarse grid and then bisected.
///
/// No sign change is a first-class outcome, not an error: reverse
/// reconciliation over a pure-loss channel is secure on all of (0, 1).
pub fn threshold_find(setup: &ProtocolSetup) -> Result<ThresholdOutcome> {
    threshold_find_with_grid(setup, DEFAULT_GRID_STEPS)
}

/// [`threshold_find`] with an explicit coarse-grid resolution.
pub fn threshold_find_with_grid(setup: &ProtocolSetup, steps: usize) -> Result<ThresholdOutcome> {
    if steps < 2 {
        return Err(Error::InvalidArgument(format!(
            "bracketing grid needs at least 2 steps, got {steps}"
        )));
    }
    find_root(&bracketing_grid(steps), |t| setup.rate_at(t))
}

fn find_root<F>(grid: &[f64], f: F) -> Result<ThresholdOutcome>
where
    F: Fn(f64) -> Result<f64>,
{
    let values: Vec<f64> = grid.iter().map(|&t| f(t)).collect::<Result<_>>()?;
    let positive = |v: f64| v > 0.0;
    if values.iter().all(|&v| positive(v)) {
        return Ok(ThresholdOutcome::SecureEverywhere);
    }
    if values.iter().all(|&v| !positive(v)) {
        return Ok(ThresholdOutcome::InsecureEverywhere);
    }
    // Take the last non-positive -> positive transition so the rate is
    // positive on (T*, 1) even if roundoff wiggles produce spurious early
    // brackets.
    let mut bracket = None;
    for i in 0..values.len() - 1 {
        if !positive(values[i]) && positive(values[i + 1]) {
            bracket = Some(i);
        }
    }
    let Some(i) = bracket else {
        // Sign changes exist but only downward: positive region touches 0.
        return Ok(ThresholdOutcome::InsecureEverywhere);
    };
    let (mut lo, mut hi) = (grid[i], grid[i + 1]);
    while hi - lo > THRESHOLD_TOL {
        let mid = 0.5 * (lo + hi);
        if positive(f(mid)?) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ThresholdOutcome::Threshold(0.5 * (lo + hi)))
}

/// Transmission at which the rates of two protocol setups cross.
///
/// Returns `None` when the rate difference never changes sign on (0, 1),
/// including the degenerate case of identical setups.
pub fn crossover_find(a: &ProtocolSetup, b: &ProtocolSetup) -> Result<Option<f64>> {
    let grid = bracketing_grid(DEFAULT_GRID_STEPS);
    let diff = |t: f64| Ok(a.rate_at(t)? - b.rate_at(t)?);
    let values: Vec<f64> = grid.iter().map(|&t| diff(t)).collect::<Result<_>>()?;
    if values.iter().all(|&v| v.abs() < 1e-15) {
        return Ok(None);
    }
    let mut bracket = None;
    for i in 0..values.len() - 1 {
        if values[i] == 0.0 {
            return Ok(Some(grid[i]));
        }
        if values[i] * values[i + 1] < 0.0 {
            bracket = Some(i);
            break;
        }
    }
    let Some(i) = bracket else {
        return Ok(None);
    };
    let (mut lo, mut hi) = (grid[i], grid[i + 1]);
    let sign_lo = values[i] > 0.0;
    while hi - lo > THRESHOLD_TOL {
        let mid = 0.5 * (lo + hi);
        if (diff(mid)? > 0.0) == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Default finite stand-in for the diverging preparation noise when the
/// classical limit is evaluated or cross-checked numerically.
pub const DEFAULT_V0_PROBE: f64 = 1e6;

/// Parameters of the classical limit: preparation noise grows without bound
/// at a fixed modulation-to-noise ratio phi = V_S / V_0, with the channel
/// noise staying far below the preparation noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalLimitParams {
    pub phi_ratio: f64,
    pub t: f64,
    pub w: f64,
    /// Finite proxy for V_0 used to evaluate the limit expressions.
    pub v_0_probe: f64,
}

impl ClassicalLimitParams {
    pub fn new(phi_ratio: f64, t: f64, w: f64, v_0_probe: f64) -> Result<Self> {
        if !(phi_ratio.is_finite() && phi_ratio > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "phi = V_S/V_0 must be positive, got {phi_ratio}"
            )));
        }
        if !(t.is_finite() && 0.0 < t && t < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "transmission must lie in (0, 1), got {t}"
            )));
        }
        if !(w.is_finite() && w >= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "channel noise must be >= 1, got {w}"
            )));
        }
        if !(v_0_probe.is_finite() && v_0_probe > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "V_0 probe must exceed 1, got {v_0_probe}"
            )));
        }
        Ok(Self {
            phi_ratio,
            t,
            w,
            v_0_probe,
        })
    }
}

/// The asymptotic spectra entering the classical-limit rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalLimitRate {
    /// `I(A:B) = (1/2) log2(1 + phi)`, the Shannon capacity of the
    /// equivalent additive-noise channel.
    pub mi_ab: f64,
    /// Asymptotic Holevo term, clamped at zero (it decays below zero only
    /// where the large-eigenvalue expansion has left its regime, near T=1).
    pub holevo: f64,
    pub rate: f64,
    /// Asymptotic unconditional spectrum {(1-T) V, W}.
    pub eve_spectrum: [f64; 2],
    /// Asymptotic conditional spectrum given Alice's data.
    pub conditional_spectrum: [f64; 2],
}

/// Secret key rate of direct reconciliation with homodyne detection in the
/// classical limit, evaluated at the finite probe `V_0 = v_0_probe`,
/// `V_S = phi V_0`:
///
/// ```text
/// R = log2[ sqrt(1 + phi) nu_c+ nu_c- / (nu_e+ nu_e-) ]
/// nu_e+ = (1-T) V              nu_e- = W
/// nu_c+ = sqrt(1+phi) (1-T) V_0
/// nu_c- = sqrt[(T + VW - TVW)(T + V_0 W - T V_0 W) / (V V_0)] / (1-T)
/// ```
///
/// which simplifies to
/// `(1/2) log2[(T + VW(1-T))(T + V_0 W(1-T)) / (V V_0 W^2 (1-T)^2)]`.
pub fn classical_limit_rate(p: &ClassicalLimitParams) -> ClassicalLimitRate {
    let v_0 = p.v_0_probe;
    let v = (1.0 + p.phi_ratio) * v_0;
    let (t, w) = (p.t, p.w);
    let one_minus_t = 1.0 - t;

    let eve_plus = one_minus_t * v;
    let eve_minus = w;
    let cond_plus = (1.0 + p.phi_ratio).sqrt() * one_minus_t * v_0;
    let det_cond = (t + v * w * one_minus_t) * (t + v_0 * w * one_minus_t);
    let cond_minus = (det_cond / (v * v_0)).sqrt() / one_minus_t;

    let mi_ab = 0.5 * (1.0 + p.phi_ratio).log2();
    let holevo = ((eve_plus * eve_minus) / (cond_plus * cond_minus)).log2().max(0.0);
    ClassicalLimitRate {
        mi_ab,
        holevo,
        rate: mi_ab - holevo,
        eve_spectrum: [eve_plus, eve_minus],
        conditional_spectrum: [cond_plus, cond_minus],
    }
}

/// Positivity margin of the classical-limit inequality
///
/// ```text
/// (T + V W (1-T)) (T + V_0 W (1-T)) / (V V_0 W^2 (1-T)^2)  >  1,
/// ```
///
/// returned as (left-hand side - 1), evaluated directly from the unexpanded
/// products. Positive margin means a positive asymptotic key rate.
pub fn classical_limit_inequality_margin(p: &ClassicalLimitParams) -> f64 {
    let v_0 = p.v_0_probe;
    let v = (1.0 + p.phi_ratio) * v_0;
    let (t, w) = (p.t, p.w);
    let lhs = (t + v * w * (1.0 - t)) * (t + v_0 * w * (1.0 - t))
        / (v * v_0 * w * w * (1.0 - t) * (1.0 - t));
    lhs - 1.0
}

/// Axis over which [`run_sweep`] varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Channel transmission T.
    Transmission,
    /// Channel EPR noise W.
    EprNoise,
    /// Preparation shot-noise V_0.
    ShotNoise,
    /// Signal modulation variance V_S.
    SignalVariance,
    /// Mode frequency; sets V_0 = W to the environmental thermal variance.
    Frequency,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Transmission => "t",
            SweepAxis::EprNoise => "w",
            SweepAxis::ShotNoise => "v0",
            SweepAxis::SignalVariance => "vs",
            SweepAxis::Frequency => "f",
        }
    }
}

/// Parameters held fixed during a sweep. The swept axis overrides the
/// corresponding entry (frequency sweeps override both `v_0` and `w`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedParams {
    pub t: f64,
    pub w: f64,
    pub v_0: f64,
    pub v_s: f64,
    /// Environment temperature in kelvin, used by frequency sweeps.
    pub temperature: f64,
}

/// A one-axis sweep specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub protocol: Protocol,
    pub axis: SweepAxis,
    pub lo: f64,
    pub hi: f64,
    /// Number of sampled points including both endpoints.
    pub steps: usize,
    pub fixed: FixedParams,
}

/// One sweep row: the axis value and the full rate result there.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub result: KeyRateResult,
}

/// Evaluate a deterministic row-per-step table of key rates. Rows are
/// ordered by axis value and independent of evaluation order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if !(spec.lo.is_finite() && spec.hi.is_finite() && spec.lo < spec.hi) {
        return Err(Error::InvalidArgument(format!(
            "sweep range needs lo < hi, got [{}, {}]",
            spec.lo, spec.hi
        )));
    }
    if spec.steps < 2 {
        return Err(Error::InvalidArgument(format!(
            "sweep needs at least 2 steps, got {}",
            spec.steps
        )));
    }
    let domain_ok = match spec.axis {
        SweepAxis::Transmission => spec.lo >= 0.0 && spec.hi <= 1.0,
        SweepAxis::EprNoise => spec.lo >= 1.0,
        SweepAxis::ShotNoise => spec.lo >= 1.0,
        SweepAxis::SignalVariance => spec.lo >= 0.0,
        SweepAxis::Frequency => spec.lo > 0.0,
    };
    if !domain_ok {
        return Err(Error::InvalidArgument(format!(
            "sweep range [{}, {}] leaves the domain of axis '{}'",
            spec.lo,
            spec.hi,
            spec.axis.name()
        )));
    }
    let span = spec.hi - spec.lo;
    let values: Vec<f64> = (0..spec.steps)
        .map(|i| spec.lo + span * i as f64 / (spec.steps - 1) as f64)
        .collect();
    let rows = parallel_map(&values, |&value| -> Result<SweepRow> {
        let fixed = spec.fixed;
        let (t, w, v_0, v_s) = match spec.axis {
            SweepAxis::Transmission => (value, fixed.w, fixed.v_0, fixed.v_s),
            SweepAxis::EprNoise => (fixed.t, value, fixed.v_0, fixed.v_s),
            SweepAxis::ShotNoise => (fixed.t, fixed.w, value, fixed.v_s),
            SweepAxis::SignalVariance => (fixed.t, fixed.w, fixed.v_0, value),
            SweepAxis::Frequency => {
                let env = ThermalEnvironment::new(fixed.temperature, value)?;
                let v_env = variance_from_frequency(&env);
                (fixed.t, v_env, v_env, fixed.v_s)
            }
        };
        let src = SourceParams::new(v_s, v_0)?;
        let ch = ChannelParams::new(t, w)?;
        Ok(SweepRow {
            value,
            result: key_rate(spec.protocol, &src, &ch)?,
        })
    });
    rows.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn setup(protocol: Protocol, v_s: f64, v_0: f64, w: f64) -> ProtocolSetup {
        ProtocolSetup::new(protocol, SourceParams::new(v_s, v_0).unwrap(), w).unwrap()
    }

    #[test]
    fn dr_homodyne_pure_loss_threshold_is_one_half() {
        let t_star = threshold_find(&setup(Protocol::DR_HOM, 1e5, 1.0, 1.0))
            .unwrap()
            .threshold()
            .unwrap();
        assert!((t_star - 0.5).abs() < 1e-3, "T* = {t_star}");
    }

    #[test]
    fn rr_homodyne_pure_source_has_no_threshold() {
        let outcome = threshold_find(&setup(Protocol::RR_HOM, 1e3, 1.0, 1.0)).unwrap();
        assert_eq!(outcome, ThresholdOutcome::SecureEverywhere);
    }

    #[test]
    fn dr_heterodyne_pure_source_threshold() {
        let t_star = threshold_find(&setup(Protocol::DR_HET, 1e3, 1.0, 1.0))
            .unwrap()
            .threshold()
            .unwrap();
        assert!((t_star - 0.73).abs() < 0.01, "T* = {t_star}");
    }

    #[test]
    fn threshold_positive_above_root() {
        let s = setup(Protocol::DR_HET, 1e3, 5.0, 1.0);
        let t_star = threshold_find(&s).unwrap().threshold().unwrap();
        for k in 1..=8 {
            let t = t_star + (1.0 - t_star) * k as f64 / 9.0;
            assert!(s.rate_at(t).unwrap() > 0.0);
        }
        assert!(s.rate_at(t_star - 0.01).unwrap() < 0.0);
    }

    #[test]
    fn threshold_is_grid_stable() {
        let s = setup(Protocol::DR_HET, 1e3, 3.0, 1.0);
        let a = threshold_find_with_grid(&s, DEFAULT_GRID_STEPS)
            .unwrap()
            .threshold()
            .unwrap();
        let b = threshold_find_with_grid(&s, 2 * DEFAULT_GRID_STEPS)
            .unwrap()
            .threshold()
            .unwrap();
        assert!((a - b).abs() < 1e-6);
    }

    #[test]
    fn crossover_of_identical_setups_is_none() {
        let s = setup(Protocol::RR_HOM, 1e3, 1.0, 1.0);
        assert_eq!(crossover_find(&s, &s).unwrap(), None);
    }

    #[test]
    fn heterodyne_with_noisy_source_overtakes_pure_homodyne() {
        let het = setup(Protocol::RR_HET, 1e3, 1.5, 1.0);
        let hom = setup(Protocol::RR_HOM, 1e3, 1.0, 1.0);
        let t_x = crossover_find(&het, &hom).unwrap().unwrap();
        // Regression anchor for the crossover of these two rate curves.
        assert!((t_x - 0.7736).abs() < 1e-3, "T_x = {t_x}");
        // Above the crossover the noisy heterodyne protocol wins.
        assert!(het.rate_at(0.9).unwrap() > hom.rate_at(0.9).unwrap());
        assert!(het.rate_at(0.7).unwrap() < hom.rate_at(0.7).unwrap());
        assert!(het.rate_at(t_x - 1e-4).unwrap() < hom.rate_at(t_x - 1e-4).unwrap());
        assert!(het.rate_at(t_x + 1e-4).unwrap() > hom.rate_at(t_x + 1e-4).unwrap());
    }

    #[test]
    fn classical_limit_approaches_shannon_capacity_at_full_transmission() {
        let p = ClassicalLimitParams::new(10.0, 1.0 - 1e-9, 1.5, 1e6).unwrap();
        let r = classical_limit_rate(&p);
        assert_relative_eq!(r.rate, 0.5 * 11.0_f64.log2(), epsilon = 1e-6);
        assert_eq!(r.holevo, 0.0);
    }

    #[test]
    fn classical_limit_matches_finite_rate() {
        let phi = 10.0;
        let v_0 = 1e6;
        let p = ClassicalLimitParams::new(phi, 0.8, 1.5, v_0).unwrap();
        let asymptotic = classical_limit_rate(&p).rate;
        let src = SourceParams::new(phi * v_0, v_0).unwrap();
        let ch = ChannelParams::new(0.8, 1.5).unwrap();
        let finite = key_rate(Protocol::DR_HOM, &src, &ch).unwrap().rate;
        assert!(
            (asymptotic - finite).abs() < 1e-3,
            "asymptotic {asymptotic} vs finite {finite}"
        );
    }

    #[test]
    fn classical_limit_inequality_positive_on_sample() {
        for &t in &[0.55, 0.7, 0.9, 0.99] {
            for &w in &[1.001, 2.0, 10.0] {
                for &phi in &[0.1, 1.0, 100.0] {
                    let p = ClassicalLimitParams::new(phi, t, w, 1e6).unwrap();
                    assert!(classical_limit_inequality_margin(&p) > 0.0);
                }
            }
        }
    }

    #[test]
    fn sweep_returns_endpoints_for_two_steps() {
        let spec = SweepSpec {
            protocol: Protocol::DR_HOM,
            axis: SweepAxis::Transmission,
            lo: 0.2,
            hi: 0.8,
            steps: 2,
            fixed: FixedParams {
                t: 0.0,
                w: 1.0,
                v_0: 1.0,
                v_s: 1e3,
                temperature: 300.0,
            },
        };
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].value, 0.2);
        assert_eq!(rows[1].value, 0.8);
    }

    #[test]
    fn sweep_rejects_out_of_domain_ranges() {
        let spec = SweepSpec {
            protocol: Protocol::DR_HOM,
            axis: SweepAxis::Transmission,
            lo: 0.5,
            hi: 1.5,
            steps: 3,
            fixed: FixedParams {
                t: 0.0,
                w: 1.0,
                v_0: 1.0,
                v_s: 1e3,
                temperature: 300.0,
            },
        };
        assert!(matches!(
            run_sweep(&spec),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn frequency_sweep_loads_thermal_variance() {
        let spec = SweepSpec {
            protocol: Protocol::DR_HOM,
            axis: SweepAxis::Frequency,
            lo: 100e9,
            hi: 400e9,
            steps: 4,
            fixed: FixedParams {
                t: 0.995,
                w: 1.0,
                v_0: 1.0,
                v_s: 1e8,
                temperature: 300.0,
            },
        };
        let rows = run_sweep(&spec).unwrap();
        // Hotter (lower-frequency) modes carry more noise and less key.
        for pair in rows.windows(2) {
            assert!(pair[0].result.rate < pair[1].result.rate);
        }
    }
}
