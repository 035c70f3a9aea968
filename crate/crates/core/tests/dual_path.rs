//! Cross-validation of independent formula paths.
//!
//! The conditioning operators are matrix-algebra implementations; the
//! closed-form block entries they must reproduce are evaluated here as a
//! second, independent route. Likewise the closed-form Eve spectrum is
//! checked against the generic eigensolver.

use cvqkd_core::channel::{
    correlation_block, eve_cm, output_variances, ChannelParams, EveInput, SourceParams,
};
use cvqkd_core::gaussian::{
    condition_on_heterodyne, condition_on_homodyne, symplectic_spectrum_generic,
    CovarianceMatrix,
};
use cvqkd_core::rates::eve_spectrum;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};

/// Closed-form blocks of Eve's state after Bob's homodyne measurement:
/// diagonal A, B, C entries as functions of (V, V_0, W, T).
fn homodyne_conditional_expected(src: &SourceParams, ch: &ChannelParams) -> DMatrix<f64> {
    let v = src.total_variance();
    let (t, w) = (ch.transmission(), ch.epr_noise());
    let b_v = t * v + w - t * w;
    let a11 = v * w / (t * (v - w) + w);
    let a22 = (1.0 - t) * v + t * w;
    let b11 = (1.0 - t + t * w * v) / b_v;
    let b22 = w;
    let c11 = (t * (w * w - 1.0)).sqrt() * v / b_v;
    let c22 = -(t * (w * w - 1.0)).sqrt();
    DMatrix::from_row_slice(
        4,
        4,
        &[
            a11, 0.0, c11, 0.0, //
            0.0, a22, 0.0, c22, //
            c11, 0.0, b11, 0.0, //
            0.0, c22, 0.0, b22,
        ],
    )
}

/// Closed-form (a, b, c) entries of Eve's state after Bob's heterodyne
/// measurement.
fn heterodyne_conditional_expected(src: &SourceParams, ch: &ChannelParams) -> (f64, f64, f64) {
    let v = src.total_variance();
    let (t, w) = (ch.transmission(), ch.epr_noise());
    let denom = 1.0 + t * v + (1.0 - t) * w;
    let a = ((1.0 - t) * v + (t + v) * w) / denom;
    let b = (1.0 - t + (1.0 + t * v) * w) / denom;
    let c = (w * w - 1.0).sqrt() * (1.0 + v) / denom;
    (a, b, c)
}

fn conditional_from_matrix_route(src: &SourceParams, ch: &ChannelParams) -> CovarianceMatrix {
    let cm_e = eve_cm(src, ch, EveInput::Total, EveInput::Total).unwrap();
    let d = correlation_block(src, ch);
    let ov = output_variances(src, ch);
    condition_on_homodyne(&cm_e, &d, ov.b_v).unwrap()
}

#[test]
fn homodyne_conditioning_matches_closed_form_blocks_at_anchor() {
    let src = SourceParams::new(1e3, 1.0).unwrap();
    let ch = ChannelParams::new(0.6, 1.0).unwrap();
    let got = conditional_from_matrix_route(&src, &ch);
    let expected = homodyne_conditional_expected(&src, &ch);
    for i in 0..4 {
        for j in 0..4 {
            assert!(
                (got.matrix()[(i, j)] - expected[(i, j)]).abs() < 1e-9,
                "entry ({i},{j}): {} vs {}",
                got.matrix()[(i, j)],
                expected[(i, j)]
            );
        }
    }
}

#[test]
fn homodyne_conditioning_matches_closed_form_blocks_randomized() {
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(2024);
    for _ in 0..500 {
        let src = SourceParams::new(rng.random_range(0.0..2e3), rng.random_range(1.0..20.0))
            .unwrap();
        let ch = ChannelParams::new(rng.random_range(0.01..0.999), rng.random_range(1.0..20.0))
            .unwrap();
        let got = conditional_from_matrix_route(&src, &ch);
        let expected = homodyne_conditional_expected(&src, &ch);
        let scale = src.total_variance().max(ch.epr_noise());
        for i in 0..4 {
            for j in 0..4 {
                assert!(
                    (got.matrix()[(i, j)] - expected[(i, j)]).abs() < 1e-9 * scale,
                    "entry ({i},{j}) for src={src:?} ch={ch:?}"
                );
            }
        }
    }
}

#[test]
fn homodyne_conditioning_at_full_transmission_leaves_vacuum() {
    // T = 1 with a pure-loss channel: Eve holds two vacua.
    let src = SourceParams::new(1e3, 1.0).unwrap();
    let ch = ChannelParams::new(1.0, 1.0).unwrap();
    let got = conditional_from_matrix_route(&src, &ch);
    let identity = DMatrix::<f64>::identity(4, 4);
    assert!((got.matrix() - identity).norm() < 1e-12);
}

#[test]
fn heterodyne_conditioning_matches_closed_form_entries_at_anchor() {
    let src = SourceParams::new(1e3, 1.0).unwrap();
    let ch = ChannelParams::new(0.7, 1.5).unwrap();
    let cm_e = eve_cm(&src, &ch, EveInput::Total, EveInput::Total).unwrap();
    let d = correlation_block(&src, &ch);
    let ov = output_variances(&src, &ch);
    let vb = CovarianceMatrix::from_matrix(DMatrix::identity(2, 2) * ov.b_v).unwrap();
    let got = condition_on_heterodyne(&cm_e, &d, &vb).unwrap();
    let (a, b, c) = heterodyne_conditional_expected(&src, &ch);
    let ct = ch.transmission().sqrt() * c;
    let m = got.matrix();
    assert!((m[(0, 0)] - a).abs() < 1e-9, "a: {} vs {a}", m[(0, 0)]);
    assert!((m[(1, 1)] - a).abs() < 1e-9);
    assert!((m[(2, 2)] - b).abs() < 1e-9, "b: {} vs {b}", m[(2, 2)]);
    assert!((m[(3, 3)] - b).abs() < 1e-9);
    assert!((m[(0, 2)] - ct).abs() < 1e-9, "c: {} vs {ct}", m[(0, 2)]);
    assert!((m[(1, 3)] + ct).abs() < 1e-9);
}

#[test]
fn heterodyne_conditioning_matches_closed_form_entries_randomized() {
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(4096);
    for _ in 0..500 {
        let src = SourceParams::new(rng.random_range(0.0..2e3), rng.random_range(1.0..20.0))
            .unwrap();
        let ch = ChannelParams::new(rng.random_range(0.0..1.0), rng.random_range(1.0..20.0))
            .unwrap();
        let cm_e = eve_cm(&src, &ch, EveInput::Total, EveInput::Total).unwrap();
        let d = correlation_block(&src, &ch);
        let ov = output_variances(&src, &ch);
        let vb = CovarianceMatrix::from_matrix(DMatrix::identity(2, 2) * ov.b_v).unwrap();
        let got = condition_on_heterodyne(&cm_e, &d, &vb).unwrap();
        let (a, b, c) = heterodyne_conditional_expected(&src, &ch);
        let ct = ch.transmission().sqrt() * c;
        let scale = src.total_variance().max(ch.epr_noise());
        let m = got.matrix();
        assert!((m[(0, 0)] - a).abs() < 1e-9 * scale);
        assert!((m[(2, 2)] - b).abs() < 1e-9 * scale);
        assert!((m[(0, 2)] - ct).abs() < 1e-9 * scale);
    }
}

#[test]
fn heterodyne_conditional_is_diagonal_without_epr_correlations() {
    let src = SourceParams::new(1e3, 1.0).unwrap();
    let ch = ChannelParams::new(0.7, 1.0).unwrap();
    let (_, _, c) = heterodyne_conditional_expected(&src, &ch);
    assert_eq!(c, 0.0);
}

#[test]
fn closed_form_eve_spectrum_matches_generic_eigensolver() {
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(31337);
    for _ in 0..500 {
        let src = SourceParams::new(rng.random_range(0.0..100.0), rng.random_range(1.0..10.0))
            .unwrap();
        let ch = ChannelParams::new(rng.random_range(0.0..1.0), rng.random_range(1.0..10.0))
            .unwrap();
        let closed = eve_spectrum(&src, &ch).unwrap();
        let cm = eve_cm(&src, &ch, EveInput::Total, EveInput::Total).unwrap();
        let generic = symplectic_spectrum_generic(&cm).unwrap();
        for k in 0..2 {
            assert!(
                (closed.values()[k] - generic.values()[k]).abs() < 1e-9,
                "src={src:?} ch={ch:?}"
            );
        }
    }
}

#[test]
fn dr_conditional_spectrum_matches_generic_eigensolver() {
    // V_E(V_0, V) at the pure-loss anchor parameters.
    let src = SourceParams::new(1e3, 1.0).unwrap();
    let ch = ChannelParams::new(0.6, 1.0).unwrap();
    let cm = eve_cm(&src, &ch, EveInput::ShotNoise, EveInput::Total).unwrap();
    let generic = symplectic_spectrum_generic(&cm).unwrap();
    let (delta, det) = cm.two_mode_invariants().unwrap();
    let invariant = cvqkd_core::gaussian::symplectic_spectrum_invariants(det, delta).unwrap();
    for k in 0..2 {
        assert!((generic.values()[k] - invariant.values()[k]).abs() < 1e-9);
    }
}
