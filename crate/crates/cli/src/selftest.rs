//! Built-in diagnostic: dual-path spectrum checks, a reduced Monte-Carlo
//! mutual-information check, and a regression table of numeric anchors.
//! Exits non-zero if any check fails, printing one line per check.

use cvqkd_core::analysis::{
    classical_limit_rate, crossover_find, threshold_find, ClassicalLimitParams, ProtocolSetup,
};
use cvqkd_core::channel::{output_variances, ChannelParams, SourceParams};
use cvqkd_core::gaussian::{
    symplectic_spectrum_generic, symplectic_spectrum_invariants, symplectic_spectrum_two_mode,
    CovarianceMatrix,
};
use cvqkd_core::mc_oracle::{estimate_mi, estimate_variance, sample_protocol, Column};
use cvqkd_core::rates::{key_rate, mi_ab_homodyne, Protocol};
use cvqkd_core::spectrum::{eb_transmission_bound, variance_from_frequency, ThermalEnvironment};

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

fn setup(protocol: Protocol, v_s: f64, v_0: f64, w: f64) -> ProtocolSetup {
    ProtocolSetup::new(protocol, SourceParams::new(v_s, v_0).unwrap(), w).unwrap()
}

/// Deterministic low-discrepancy scan of the valid two-mode family.
fn dual_path_worst_deviation(draws: usize) -> f64 {
    let mut worst: f64 = 0.0;
    let golden = 0.618_033_988_749_895_f64;
    for i in 0..draws {
        let u1 = (i as f64 * golden).fract();
        let u2 = (i as f64 * golden * golden).fract();
        let u3 = (0.37 + i as f64 * 0.754_877_666).fract();
        let u4 = (0.11 + i as f64 * 0.569_840_290).fract();
        let a = 1.0 + 99.0 * u1;
        let b = 1.0 + 99.0 * u2;
        let t = u3;
        let cap = ((a.min(b) - 1.0) * (a.max(b) + 1.0) / t.max(1e-9))
            .sqrt()
            .min((a * b - 1.0).sqrt());
        let c = u4 * cap;
        let closed = symplectic_spectrum_two_mode(a, b, c, t).unwrap();
        let cm = CovarianceMatrix::two_mode_correlated(a, b, c, t).unwrap();
        let generic = symplectic_spectrum_generic(&cm).unwrap();
        let (delta, det) = cm.two_mode_invariants().unwrap();
        let invariant = symplectic_spectrum_invariants(det, delta).unwrap();
        for k in 0..2 {
            worst = worst
                .max((closed.values()[k] - generic.values()[k]).abs())
                .max((invariant.values()[k] - generic.values()[k]).abs());
        }
    }
    worst
}

pub fn run(seed: u64, samples: usize) -> Vec<Check> {
    let mut checks = Vec::new();

    let worst = dual_path_worst_deviation(300);
    checks.push(check(
        "dual-path symplectic spectra",
        worst < 1e-9,
        format!("worst deviation {worst:.3e} over 300 draws"),
    ));

    // Monte-Carlo Shannon layer at reduced n.
    let src = SourceParams::new(1e3, 1.0).unwrap();
    let ch = ChannelParams::new(0.6, 2.0).unwrap();
    let batch = sample_protocol(&src, &ch, samples, seed).unwrap();
    let mi = estimate_mi(&batch, Column::Signal, Column::BobMode).unwrap();
    let expected = mi_ab_homodyne(&src, &ch);
    let mi_err = (mi - expected).abs() / expected;
    checks.push(check(
        "monte-carlo mutual information",
        mi_err < 0.03,
        format!("empirical {mi:.4} vs analytic {expected:.4} ({samples} samples)"),
    ));
    let ov = output_variances(&src, &ch);
    let v_b = estimate_variance(batch.column(Column::BobMode));
    let se = ov.b_v * (2.0 / samples as f64).sqrt();
    checks.push(check(
        "monte-carlo output variance",
        (v_b - ov.b_v).abs() < 5.0 * se,
        format!("V(X_B) = {v_b:.2} vs {:.2} (5se = {:.2})", ov.b_v, 5.0 * se),
    ));

    // Numeric anchor table.
    let anchors: Vec<(&'static str, f64, f64, f64)> = vec![
        (
            "EB transmission bound at W=41.66",
            eb_transmission_bound(41.66).unwrap(),
            0.9766,
            1e-4,
        ),
        (
            "thermal variance at 300 GHz, 300 K",
            variance_from_frequency(&ThermalEnvironment::new(300.0, 300e9).unwrap()),
            41.66,
            0.084,
        ),
        (
            "thermal variance at 1 GHz, 300 K",
            variance_from_frequency(&ThermalEnvironment::new(300.0, 1e9).unwrap()),
            1.25e4,
            125.0,
        ),
        (
            "dr-het threshold, pure source",
            threshold_find(&setup(Protocol::DR_HET, 1e3, 1.0, 1.0))
                .unwrap()
                .threshold()
                .unwrap_or(f64::NAN),
            0.73,
            0.01,
        ),
        (
            "dr-het threshold, v0=5",
            threshold_find(&setup(Protocol::DR_HET, 1e3, 5.0, 1.0))
                .unwrap()
                .threshold()
                .unwrap_or(f64::NAN),
            0.68,
            0.01,
        ),
        (
            "dr-hom threshold, v0=100",
            threshold_find(&setup(Protocol::DR_HOM, 1e5, 100.0, 1.0))
                .unwrap()
                .threshold()
                .unwrap_or(f64::NAN),
            0.5,
            1e-3,
        ),
        (
            "dr-hom threshold, v0=41.66, w=5",
            threshold_find(&setup(Protocol::DR_HOM, 1e3, 41.66, 5.0))
                .unwrap()
                .threshold()
                .unwrap_or(f64::NAN),
            0.86,
            0.01,
        ),
        (
            "microwave threshold at 300 GHz",
            threshold_find(&setup(Protocol::DR_HOM, 1e8, 41.66, 41.66))
                .unwrap()
                .threshold()
                .unwrap_or(f64::NAN),
            0.981,
            0.002,
        ),
        (
            "rr het/hom crossover (regression)",
            crossover_find(
                &setup(Protocol::RR_HET, 1e3, 1.5, 1.0),
                &setup(Protocol::RR_HOM, 1e3, 1.0, 1.0),
            )
            .unwrap()
            .unwrap_or(f64::NAN),
            0.77363,
            1e-3,
        ),
    ];
    for (name, got, expected, tol) in anchors {
        checks.push(check(
            name,
            (got - expected).abs() < tol,
            format!("{got:.6} vs {expected} (tol {tol})"),
        ));
    }

    // Classical limit against the finite-noise rate.
    let p = ClassicalLimitParams::new(10.0, 0.8, 1.5, 1e6).unwrap();
    let asymptotic = classical_limit_rate(&p).rate;
    let finite = key_rate(
        Protocol::DR_HOM,
        &SourceParams::new(1e7, 1e6).unwrap(),
        &ChannelParams::new(0.8, 1.5).unwrap(),
    )
    .unwrap()
    .rate;
    checks.push(check(
        "classical limit vs finite noise",
        (asymptotic - finite).abs() < 1e-3,
        format!("asymptotic {asymptotic:.3e} vs finite {finite:.3e}"),
    ));

    checks
}
