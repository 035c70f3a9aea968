//! Secret-key-rate functionals for the four protocol variants.
//!
//! The rate is `R = I(A:B) - chi_E` in bits per channel use, where `I(A:B)`
//! is Alice and Bob's Shannon mutual information and `chi_E` is the Holevo
//! bound on Eve's information about the reconciliation reference (Bob's data
//! for reverse reconciliation, Alice's for direct). Reconciliation is ideal;
//! negative rates are reported as-is so threshold searches can bracket the
//! sign change.

use crate::channel::{self, ChannelParams, EveInput, OutputVariances, SourceParams};
use crate::error::{Error, Result};
use crate::gaussian::{
    condition_on_homodyne, symplectic_spectrum_invariants, symplectic_spectrum_two_mode,
    von_neumann_entropy, SymplecticSpectrum,
};

/// Direction of the error-correction flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reconciliation {
    /// Bob corrects toward Alice's data.
    Direct,
    /// Alice corrects toward Bob's data.
    Reverse,
}

/// Bob's measurement: one quadrature or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detection {
    Homodyne,
    Heterodyne,
}

/// One of the four protocol variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Protocol {
    pub reconciliation: Reconciliation,
    pub detection: Detection,
}

impl Protocol {
    pub const DR_HOM: Self = Self {
        reconciliation: Reconciliation::Direct,
        detection: Detection::Homodyne,
    };
    pub const DR_HET: Self = Self {
        reconciliation: Reconciliation::Direct,
        detection: Detection::Heterodyne,
    };
    pub const RR_HOM: Self = Self {
        reconciliation: Reconciliation::Reverse,
        detection: Detection::Homodyne,
    };
    pub const RR_HET: Self = Self {
        reconciliation: Reconciliation::Reverse,
        detection: Detection::Heterodyne,
    };

    pub const ALL: [Self; 4] = [Self::DR_HOM, Self::DR_HET, Self::RR_HOM, Self::RR_HET];
}

impl std::fmt::Display for Protocol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rec = match self.reconciliation {
            Reconciliation::Direct => "dr",
            Reconciliation::Reverse => "rr",
        };
        let det = match self.detection {
            Detection::Homodyne => "hom",
            Detection::Heterodyne => "het",
        };
        write!(f, "{rec}-{det}")
    }
}

impl std::str::FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dr-hom" => Ok(Self::DR_HOM),
            "dr-het" => Ok(Self::DR_HET),
            "rr-hom" => Ok(Self::RR_HOM),
            "rr-het" => Ok(Self::RR_HET),
            other => Err(Error::InvalidArgument(format!(
                "unknown protocol '{other}' (expected dr-hom, dr-het, rr-hom or rr-het)"
            ))),
        }
    }
}

/// A computed key rate with the intermediate quantities that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyRateResult {
    pub protocol: Protocol,
    /// Alice-Bob mutual information, bits.
    pub mi_ab: f64,
    /// Holevo bound on Eve's information about the reference, bits.
    pub holevo: f64,
    /// Secret key rate `mi_ab - holevo`, bits; may be negative.
    pub rate: f64,
    pub diagnostics: RateDiagnostics,
}

/// Intermediate quantities of a rate evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct RateDiagnostics {
    pub output: OutputVariances,
    /// Spectrum of Eve's unconditional state.
    pub eve_spectrum: SymplecticSpectrum,
    /// Spectrum of Eve's state conditioned on the reference data.
    pub conditional_spectrum: SymplecticSpectrum,
}

/// `I(A:B)` for homodyne detection:
/// `(1/2) log2[((1-T)W + T V_S + T V_0) / ((1-T)W + T V_0)]`.
pub fn mi_ab_homodyne(src: &SourceParams, ch: &ChannelParams) -> f64 {
    let ov = channel::output_variances(src, ch);
    0.5 * (ov.b_v / ov.b_1).log2()
}

/// `I(A:B)` for heterodyne detection: both quadratures contribute, each
/// diluted by the extra vacuum unit of the detection beam splitter:
/// `log2[((1-T)W + T V_S + T V_0 + 1) / ((1-T)W + T V_0 + 1)]`.
pub fn mi_ab_heterodyne(src: &SourceParams, ch: &ChannelParams) -> f64 {
    let ov = channel::output_variances(src, ch);
    ((ov.b_v + 1.0) / (ov.b_1 + 1.0)).log2()
}

/// Closed-form symplectic spectrum of Eve's unconditional two-mode state:
/// `nu_± = (sqrt((e_V + W)^2 - 4T(W^2-1)) ± (e_V - W)) / 2`.
pub fn eve_spectrum(src: &SourceParams, ch: &ChannelParams) -> Result<SymplecticSpectrum> {
    let ov = channel::output_variances(src, ch);
    let w = ch.epr_noise();
    symplectic_spectrum_two_mode(ov.e_v, w, (w * w - 1.0).sqrt(), ch.transmission())
}

fn holevo_parts_rr_homodyne(
    src: &SourceParams,
    ch: &ChannelParams,
) -> Result<(f64, SymplecticSpectrum, SymplecticSpectrum)> {
    let ov = channel::output_variances(src, ch);
    let eve = eve_spectrum(src, ch)?;
    let cm_e = channel::eve_cm(src, ch, EveInput::Total, EveInput::Total)?;
    let d = channel::correlation_block(src, ch);
    let conditional = condition_on_homodyne(&cm_e, &d, ov.b_v)?;
    let (delta, det) = conditional.two_mode_invariants()?;
    let cond_spec = symplectic_spectrum_invariants(det, delta)?;
    let holevo = von_neumann_entropy(&eve)? - von_neumann_entropy(&cond_spec)?;
    Ok((holevo, eve, cond_spec))
}

fn holevo_parts_rr_heterodyne(
    src: &SourceParams,
    ch: &ChannelParams,
) -> Result<(f64, SymplecticSpectrum, SymplecticSpectrum)> {
    let eve = eve_spectrum(src, ch)?;
    let v = src.total_variance();
    let (t, w) = (ch.transmission(), ch.epr_noise());
    // Conditional state after Bob's heterodyne measurement, in the
    // [[a I, sqrt(T) c Z], [sqrt(T) c Z, b I]] shape.
    let denom = 1.0 + t * v + (1.0 - t) * w;
    let a = ((1.0 - t) * v + (t + v) * w) / denom;
    let b = (1.0 - t + (1.0 + t * v) * w) / denom;
    let c = (w * w - 1.0).sqrt() * (1.0 + v) / denom;
    let cond_spec = symplectic_spectrum_two_mode(a, b, c, t)?;
    let holevo = von_neumann_entropy(&eve)? - von_neumann_entropy(&cond_spec)?;
    Ok((holevo, eve, cond_spec))
}

fn holevo_parts_dr_homodyne(
    src: &SourceParams,
    ch: &ChannelParams,
) -> Result<(f64, SymplecticSpectrum, SymplecticSpectrum)> {
    let eve = eve_spectrum(src, ch)?;
    // Eve conditioned on Alice's Q data: V_E(V_0, V).
    let conditional = channel::eve_cm(src, ch, EveInput::ShotNoise, EveInput::Total)?;
    let (delta, det) = conditional.two_mode_invariants()?;
    let cond_spec = symplectic_spectrum_invariants(det, delta)?;
    let holevo = von_neumann_entropy(&eve)? - von_neumann_entropy(&cond_spec)?;
    Ok((holevo, eve, cond_spec))
}

fn holevo_parts_dr_heterodyne(
    src: &SourceParams,
    ch: &ChannelParams,
) -> Result<(f64, SymplecticSpectrum, SymplecticSpectrum)> {
    let eve = eve_spectrum(src, ch)?;
    // Eve conditioned on both of Alice's quadratures: V_E(V_0, V_0), whose
    // spectrum is nu_± = (sqrt((e_1 + W)^2 - 4T(W^2-1)) ± (e_1 - W)) / 2.
    let ov = channel::output_variances(src, ch);
    let w = ch.epr_noise();
    let cond_spec =
        symplectic_spectrum_two_mode(ov.e_1, w, (w * w - 1.0).sqrt(), ch.transmission())?;
    let holevo = von_neumann_entropy(&eve)? - von_neumann_entropy(&cond_spec)?;
    Ok((holevo, eve, cond_spec))
}

/// Holevo bound `S(E) - S(E|X_B)` for reverse reconciliation, homodyne.
pub fn holevo_rr_homodyne(src: &SourceParams, ch: &ChannelParams) -> Result<f64> {
    holevo_parts_rr_homodyne(src, ch).map(|(h, _, _)| h)
}

/// Holevo bound `S(E) - S(E|Q_B, P_B)` for reverse reconciliation, heterodyne.
pub fn holevo_rr_heterodyne(src: &SourceParams, ch: &ChannelParams) -> Result<f64> {
    holevo_parts_rr_heterodyne(src, ch).map(|(h, _, _)| h)
}

/// Holevo bound `S(E) - S(E|X_A)` for direct reconciliation, homodyne.
pub fn holevo_dr_homodyne(src: &SourceParams, ch: &ChannelParams) -> Result<f64> {
    holevo_parts_dr_homodyne(src, ch).map(|(h, _, _)| h)
}

/// Holevo bound `S(E) - S(E|Q_A, P_A)` for direct reconciliation, heterodyne.
pub fn holevo_dr_heterodyne(src: &SourceParams, ch: &ChannelParams) -> Result<f64> {
    holevo_parts_dr_heterodyne(src, ch).map(|(h, _, _)| h)
}

/// Secret key rate for the requested protocol variant.
pub fn key_rate(
    protocol: Protocol,
    src: &SourceParams,
    ch: &ChannelParams,
) -> Result<KeyRateResult> {
    let mi_ab = match protocol.detection {
        Detection::Homodyne => mi_ab_homodyne(src, ch),
        Detection::Heterodyne => mi_ab_heterodyne(src, ch),
    };
    let (holevo, eve_spectrum, conditional_spectrum) =
        match (protocol.reconciliation, protocol.detection) {
            (Reconciliation::Reverse, Detection::Homodyne) => holevo_parts_rr_homodyne(src, ch)?,
            (Reconciliation::Reverse, Detection::Heterodyne) => {
                holevo_parts_rr_heterodyne(src, ch)?
            }
            (Reconciliation::Direct, Detection::Homodyne) => holevo_parts_dr_homodyne(src, ch)?,
            (Reconciliation::Direct, Detection::Heterodyne) => holevo_parts_dr_heterodyne(src, ch)?,
        };
    Ok(KeyRateResult {
        protocol,
        mi_ab,
        holevo,
        rate: mi_ab - holevo,
        diagnostics: RateDiagnostics {
            output: channel::output_variances(src, ch),
            eve_spectrum,
            conditional_spectrum,
        },
    })
}
