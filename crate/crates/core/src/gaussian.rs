//! Symplectic linear algebra and entropy functionals for n-mode Gaussian
//! states.
//!
//! A Gaussian state is described here by its covariance matrix in shot-noise
//! units (vacuum variance = 1) with quadrature ordering (Q1, P1, ..., Qn, Pn).
//! Its symplectic spectrum {nu_k} consists of the moduli of the eigenvalues
//! of i*Omega*V, each of which appears twice among the 2n ordinary
//! eigenvalues; a state is physical iff every nu_k >= 1. The von Neumann
//! entropy is `S = sum_k g(nu_k)` with
//!
//! ```text
//! g(nu) = ((nu+1)/2) log2((nu+1)/2) - ((nu-1)/2) log2((nu-1)/2)
//! ```
//!
//! Three routes to the spectrum of a two-mode state are implemented and
//! cross-validated against each other:
//!
//! 1. the generic eigensolver on Omega*V (any n),
//! 2. the closed form for matrices of the shape `[[a I, sqrt(t) c Z], [sqrt(t) c Z, b I]]`,
//! 3. the global-invariant form using Delta = det A + det B + 2 det C and det V.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Symplectic eigenvalues this far below 1 are treated as roundoff near a
/// pure state and clamped to 1; anything lower is a genuine violation.
pub const EIGENVALUE_CLAMP_TOL: f64 = 1e-9;

/// Relative tolerance for the symmetry check on covariance matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Eigensolver roundoff grows with the matrix norm; the physical-validity
/// check widens its absolute floor accordingly (1e-12 per unit of the
/// largest entry, e.g. 1e-4 at V ~ 1e8).
const VALIDATION_RELATIVE_TOL: f64 = 1e-12;

/// The symplectic form Omega: the direct sum of n copies of [[0, 1], [-1, 0]].
pub fn symplectic_form(n_modes: usize) -> Result<DMatrix<f64>> {
    if n_modes == 0 {
        return Err(Error::InvalidArgument(
            "symplectic form needs at least one mode".into(),
        ));
    }
    let dim = 2 * n_modes;
    let mut omega = DMatrix::zeros(dim, dim);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    Ok(omega)
}

/// Covariance matrix of an n-mode Gaussian state, in shot-noise units.
///
/// Construction validates symmetry (to [`SYMMETRY_TOL`], relative) and the
/// uncertainty principle (every symplectic eigenvalue >= 1 within
/// [`EIGENVALUE_CLAMP_TOL`]); the stored matrix is exactly symmetrized.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    modes: usize,
    entries: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Validate and wrap a 2n x 2n matrix.
    pub fn from_matrix(entries: DMatrix<f64>) -> Result<Self> {
        let dim = entries.nrows();
        if dim == 0 || !dim.is_multiple_of(2) || entries.ncols() != dim {
            return Err(Error::InvalidArgument(format!(
                "covariance matrix must be square with even dimension, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let scale = entries.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        for i in 0..dim {
            for j in (i + 1)..dim {
                if (entries[(i, j)] - entries[(j, i)]).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::InvalidArgument(format!(
                        "covariance matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let symmetrized = (&entries + entries.transpose()) * 0.5;
        let cm = Self {
            modes: dim / 2,
            entries: symmetrized,
        };
        let spectrum = spectrum_of_matrix(&cm.entries)?;
        let tol = EIGENVALUE_CLAMP_TOL.max(VALIDATION_RELATIVE_TOL * scale);
        if let Some(&nu) = spectrum.last() {
            if nu < 1.0 - tol {
                return Err(Error::InvalidState(format!(
                    "uncertainty principle violated: symplectic eigenvalue {nu} < 1"
                )));
            }
        }
        Ok(cm)
    }

    /// The n-mode vacuum state (identity covariance).
    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            modes: n_modes,
            entries: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    /// The two-mode family `[[a I, sqrt(t) c Z], [sqrt(t) c Z, b I]]`
    /// whose spectrum [`symplectic_spectrum_two_mode`] gives in closed form.
    pub fn two_mode_correlated(a: f64, b: f64, c: f64, t: f64) -> Result<Self> {
        let ct = t.sqrt() * c;
        Self::from_matrix(DMatrix::from_row_slice(
            4,
            4,
            &[
                a, 0.0, ct, 0.0, //
                0.0, a, 0.0, -ct, //
                ct, 0.0, b, 0.0, //
                0.0, -ct, 0.0, b,
            ],
        ))
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Global symplectic invariants (Delta, det V) of a two-mode state,
    /// with Delta = det A + det B + 2 det C for the block form
    /// `[[A, C], [C^T, B]]`.
    pub fn two_mode_invariants(&self) -> Result<(f64, f64)> {
        if self.modes != 2 {
            return Err(Error::InvalidArgument(format!(
                "symplectic invariants defined for two modes, got {}",
                self.modes
            )));
        }
        let m = &self.entries;
        let det_a = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        let det_b = m[(2, 2)] * m[(3, 3)] - m[(2, 3)] * m[(3, 2)];
        let det_c = m[(0, 2)] * m[(1, 3)] - m[(0, 3)] * m[(1, 2)];
        let delta = det_a + det_b + 2.0 * det_c;
        // All states built here have no Q-P cross terms; in that case the
        // determinant factors over the two quadrature subspaces, which
        // loses far less precision than cofactor expansion of the 4x4.
        let decoupled = m[(0, 1)] == 0.0 && m[(0, 3)] == 0.0 && m[(1, 2)] == 0.0 && m[(2, 3)] == 0.0;
        let det = if decoupled {
            (m[(0, 0)] * m[(2, 2)] - m[(0, 2)] * m[(0, 2)])
                * (m[(1, 1)] * m[(3, 3)] - m[(1, 3)] * m[(1, 3)])
        } else {
            m.determinant()
        };
        Ok((delta, det))
    }
}

/// Ordered symplectic spectrum {nu_1 >= nu_2 >= ...} of a Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSpectrum {
    values: Vec<f64>,
}

impl SymplecticSpectrum {
    /// Sorts the values descending. Values must be positive and finite;
    /// physical-state validity (nu >= 1) is checked where entropy is taken.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty symplectic spectrum".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::NumericFailure(format!(
                "non-positive or non-finite symplectic eigenvalue in {values:?}"
            )));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest eigenvalue.
    pub fn max(&self) -> f64 {
        self.values[0]
    }

    /// Smallest eigenvalue.
    pub fn min(&self) -> f64 {
        *self.values.last().expect("spectrum is non-empty")
    }
}

/// Maximum QR iterations for the real Schur decomposition.
const SCHUR_MAX_ITER: usize = 10_000;

fn spectrum_of_matrix(entries: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n_modes = entries.nrows() / 2;
    let omega = symplectic_form(n_modes)?;
    let product = omega * entries;
    let schur = nalgebra::linalg::Schur::try_new(product, f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::NumericFailure("Schur iteration did not converge".into()))?;
    let eigenvalues = schur.complex_eigenvalues();
    // The eigenvalues of Omega*V come in conjugate pairs +-i*nu; take the
    // modulus of each and collapse the pairs by averaging neighbours.
    let mut moduli: Vec<f64> = eigenvalues.iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| b.total_cmp(a));
    let values = moduli
        .chunks_exact(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect();
    Ok(values)
}

/// Symplectic spectrum via the eigenvalues of i*Omega*V, for any mode count.
///
/// This is the reference route: a real Schur decomposition of Omega*V whose
/// (purely imaginary) eigenvalues are read off in conjugate pairs.
pub fn symplectic_spectrum_generic(cm: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    SymplecticSpectrum::new(spectrum_of_matrix(cm.matrix())?)
}

/// Closed-form spectrum of a two-mode state of the shape
/// `[[a I, sqrt(t) c Z], [sqrt(t) c Z, b I]]`:
///
/// ```text
/// nu_± = (sqrt(y) ± (a - b)) / 2,    y = (a + b)^2 - 4 c^2 t >= 4.
/// ```
pub fn symplectic_spectrum_two_mode(a: f64, b: f64, c: f64, t: f64) -> Result<SymplecticSpectrum> {
    if c < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "correlation amplitude must be non-negative, got {c}"
        )));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "transmission must lie in [0, 1], got {t}"
        )));
    }
    let y = (a + b).powi(2) - 4.0 * c * c * t;
    if y < 4.0 - EIGENVALUE_CLAMP_TOL {
        return Err(Error::InvalidState(format!(
            "two-mode spectrum condition y >= 4 violated (y = {y})"
        )));
    }
    let root = y.max(4.0).sqrt();
    let larger = 0.5 * (root + (a - b).abs());
    let mut smaller = 0.5 * (root - (a - b).abs());
    // The subtraction loses absolute precision proportional to the operand
    // scale; snap sub-unit roundoff at that scale back to the pure-state
    // eigenvalue.
    let snap = EIGENVALUE_CLAMP_TOL + 64.0 * f64::EPSILON * (a.abs() + b.abs() + 2.0);
    if smaller < 1.0 && smaller >= 1.0 - snap {
        smaller = 1.0;
    }
    SymplecticSpectrum::new(vec![larger.max(smaller), smaller])
}

/// Two-mode spectrum from the global invariants Delta and det V:
///
/// ```text
/// nu_±^2 = (Delta ± sqrt(Delta^2 - 4 det V)) / 2,
/// ```
///
/// so that det V = nu_+^2 nu_-^2 and Delta = nu_+^2 + nu_-^2.
pub fn symplectic_spectrum_invariants(det_v: f64, delta: f64) -> Result<SymplecticSpectrum> {
    let discriminant = delta * delta - 4.0 * det_v;
    if discriminant < -1e-6 {
        return Err(Error::NumericFailure(format!(
            "inconsistent symplectic invariants: Delta^2 - 4 det V = {discriminant}"
        )));
    }
    let root = discriminant.max(0.0).sqrt();
    let plus_sq = 0.5 * (delta + root);
    if plus_sq <= 0.0 || det_v <= 0.0 {
        return Err(Error::NumericFailure(format!(
            "invariants produce non-positive squared eigenvalues (Delta = {delta}, det = {det_v})"
        )));
    }
    // nu_-^2 = det V / nu_+^2 avoids the cancellation in (Delta - root)/2
    // when the spectrum is strongly split.
    let mut minus_sq = det_v / plus_sq;
    // Physicality is decided in invariant space without the square-root
    // amplification that hits nu_- near degenerate (pure) spectra:
    // (nu_+^2 - 1)(nu_-^2 - 1) = 1 + det V - Delta, so a state with
    // 1 + det V >= Delta and Delta >= 2 has both eigenvalues >= 1, and a
    // computed nu_- below 1 is roundoff to be snapped.
    let tol = 1e-9 * (1.0 + det_v.abs() + delta.abs());
    if minus_sq < 1.0 && 1.0 + det_v - delta >= -tol && delta >= 2.0 - tol {
        minus_sq = 1.0;
    }
    SymplecticSpectrum::new(vec![plus_sq.sqrt().max(minus_sq.sqrt()), minus_sq.sqrt()])
}

/// The entropy kernel g(nu) in bits.
///
/// g(1) = 0 by the 0*log(0) := 0 convention, and g is strictly increasing.
/// Evaluated in the cancellation-free form
/// `g(nu) = log2((nu+1)/2) + ((nu-1)/2) log2((nu+1)/(nu-1))`.
pub fn g_function(nu: f64) -> Result<f64> {
    if nu < 1.0 - EIGENVALUE_CLAMP_TOL {
        return Err(Error::InvalidArgument(format!(
            "g is defined for nu >= 1, got {nu}"
        )));
    }
    let nu = nu.max(1.0);
    if nu == 1.0 {
        return Ok(0.0);
    }
    let a = 0.5 * (nu + 1.0);
    let b = 0.5 * (nu - 1.0);
    // b * log2(a/b) = b * ln(1 + 1/b) / ln 2
    Ok(a.log2() + b * (1.0 / b).ln_1p() / std::f64::consts::LN_2)
}

/// Large-argument form g'(nu) = log2(e nu / 2), accurate to O(1/nu).
pub fn g_asymptotic(nu: f64) -> Result<f64> {
    if nu <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "asymptotic g needs nu > 0, got {nu}"
        )));
    }
    Ok((std::f64::consts::E * nu / 2.0).log2())
}

/// Von Neumann entropy S = sum_k g(nu_k) in bits.
pub fn von_neumann_entropy(spectrum: &SymplecticSpectrum) -> Result<f64> {
    spectrum.values().iter().try_fold(0.0, |acc, &nu| {
        g_function(nu).map(|g| acc + g)
    })
}

/// Correlations between Eve's two stored modes and Bob's output mode,
/// i.e. the 4 x 2 matrix D = [xi I ; phi Z] of <E' X_B> and <E'' X_B>
/// coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationBlock {
    /// <E' X_B> coefficient.
    pub xi: f64,
    /// <E'' X_B> coefficient (phi in the Z-ordered block).
    pub phi_corr: f64,
}

impl CorrelationBlock {
    pub fn new(xi: f64, phi_corr: f64) -> Self {
        Self { xi, phi_corr }
    }

    /// The explicit 4 x 2 matrix [xi I ; phi Z].
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(
            4,
            2,
            &[
                self.xi, 0.0, //
                0.0, self.xi, //
                self.phi_corr, 0.0, //
                0.0, -self.phi_corr,
            ],
        )
    }
}

/// Conditional covariance matrix after one mode correlated through `d` is
/// measured by homodyne detection (Q quadrature) with outcome variance `b_v`:
///
/// ```text
/// V' = V_E - (1/b_v) D Pi D^T,    Pi = diag(1, 0).
/// ```
pub fn condition_on_homodyne(
    cm_e: &CovarianceMatrix,
    d: &CorrelationBlock,
    b_v: f64,
) -> Result<CovarianceMatrix> {
    if b_v <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "homodyne outcome variance must be positive, got {b_v}"
        )));
    }
    if cm_e.modes() != 2 {
        return Err(Error::InvalidArgument(
            "homodyne conditioning expects a two-mode covariance matrix".into(),
        ));
    }
    let d_mat = d.matrix();
    let pi = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let update = (&d_mat * pi * d_mat.transpose()) / b_v;
    CovarianceMatrix::from_matrix(cm_e.matrix() - update)
}

/// Conditional covariance matrix after the correlated mode is measured by
/// heterodyne detection. `cm_b` is the measured mode's covariance, required
/// to be b_V * I:
///
/// ```text
/// V' = V_E - (1/theta) D (Omega V_B Omega^T + I) D^T,
/// theta = det V_B + Tr V_B + 1.
/// ```
pub fn condition_on_heterodyne(
    cm_e: &CovarianceMatrix,
    d: &CorrelationBlock,
    cm_b: &CovarianceMatrix,
) -> Result<CovarianceMatrix> {
    if cm_e.modes() != 2 {
        return Err(Error::InvalidArgument(
            "heterodyne conditioning expects a two-mode covariance matrix".into(),
        ));
    }
    if cm_b.modes() != 1 {
        return Err(Error::InvalidArgument(
            "measured mode must be single-mode".into(),
        ));
    }
    let vb = cm_b.matrix();
    let b_v = vb[(0, 0)];
    if (vb[(1, 1)] - b_v).abs() > SYMMETRY_TOL * b_v.abs().max(1.0) || vb[(0, 1)].abs() > SYMMETRY_TOL * b_v.abs().max(1.0) {
        return Err(Error::InvalidArgument(
            "heterodyne conditioning expects V_B proportional to the identity".into(),
        ));
    }
    let theta = vb.determinant() + vb.trace() + 1.0;
    if theta <= 0.0 {
        return Err(Error::NumericFailure(format!(
            "non-positive heterodyne normalization theta = {theta}"
        )));
    }
    let omega = symplectic_form(1)?;
    let middle = &omega * vb * omega.transpose() + DMatrix::<f64>::identity(2, 2);
    let d_mat = d.matrix();
    let update = (&d_mat * middle * d_mat.transpose()) / theta;
    CovarianceMatrix::from_matrix(cm_e.matrix() - update)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const TOL: f64 = 1e-12;

    #[test]
    fn symplectic_form_single_mode() {
        let omega = symplectic_form(1).unwrap();
        assert_eq!(omega, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
    }

    #[test]
    fn symplectic_form_two_modes_is_block_diagonal() {
        let omega = symplectic_form(2).unwrap();
        let expected = DMatrix::from_row_slice(
            4,
            4,
            &[
                0.0, 1.0, 0.0, 0.0, //
                -1.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 1.0, //
                0.0, 0.0, -1.0, 0.0,
            ],
        );
        assert_eq!(omega, expected);
    }

    #[test]
    fn symplectic_form_is_orthogonal() {
        let omega = symplectic_form(3).unwrap();
        let product = &omega * omega.transpose();
        assert_relative_eq!(product, DMatrix::identity(6, 6), epsilon = TOL);
    }

    #[test]
    fn symplectic_form_rejects_zero_modes() {
        assert!(matches!(
            symplectic_form(0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn generic_spectrum_of_vacuum() {
        let cm = CovarianceMatrix::vacuum(1);
        let spec = symplectic_spectrum_generic(&cm).unwrap();
        assert_relative_eq!(spec.values()[0], 1.0, epsilon = TOL);
    }

    #[test]
    fn generic_spectrum_of_uncorrelated_product_state() {
        let (a, b) = (3.5, 1.25);
        let cm = CovarianceMatrix::from_matrix(DMatrix::from_diagonal(
            &nalgebra::DVector::from_vec(vec![a, a, b, b]),
        ))
        .unwrap();
        let spec = symplectic_spectrum_generic(&cm).unwrap();
        assert_relative_eq!(spec.values()[0], a, epsilon = 1e-10);
        assert_relative_eq!(spec.values()[1], b, epsilon = 1e-10);
    }

    #[test]
    fn generic_spectrum_rejects_asymmetric_input() {
        let mut m = DMatrix::identity(2, 2);
        m[(0, 1)] = 0.5;
        assert!(matches!(
            CovarianceMatrix::from_matrix(m),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn two_mode_spectrum_of_double_vacuum() {
        let spec = symplectic_spectrum_two_mode(1.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(spec.values(), &[1.0, 1.0]);
    }

    #[test]
    fn two_mode_spectrum_of_pure_epr_state() {
        let w = 2.0;
        let c = (w * w - 1.0_f64).sqrt();
        let spec = symplectic_spectrum_two_mode(w, w, c, 1.0).unwrap();
        assert_relative_eq!(spec.values()[0], 1.0, epsilon = TOL);
        assert_relative_eq!(spec.values()[1], 1.0, epsilon = TOL);
    }

    #[test]
    fn two_mode_spectrum_rejects_unphysical_y() {
        // a = b = 1 with strong correlations drives y below 4.
        assert!(matches!(
            symplectic_spectrum_two_mode(1.0, 1.0, 2.0, 1.0),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn invariant_spectrum_of_double_vacuum() {
        let spec = symplectic_spectrum_invariants(1.0, 2.0).unwrap();
        assert_eq!(spec.values(), &[1.0, 1.0]);
    }

    #[test]
    fn invariant_spectrum_round_trip() {
        let (plus, minus) = (3.0, 2.0);
        let det = plus * plus * minus * minus;
        let delta = plus * plus + minus * minus;
        let spec = symplectic_spectrum_invariants(det, delta).unwrap();
        assert_relative_eq!(spec.values()[0], plus, epsilon = 1e-12);
        assert_relative_eq!(spec.values()[1], minus, epsilon = 1e-12);
    }

    #[test]
    fn invariant_spectrum_rejects_inconsistent_invariants() {
        assert!(matches!(
            symplectic_spectrum_invariants(10.0, 1.0),
            Err(Error::NumericFailure(_))
        ));
    }

    #[test]
    fn g_of_one_is_zero() {
        assert_eq!(g_function(1.0).unwrap(), 0.0);
        assert_eq!(g_function(1.0 - 0.5e-9).unwrap(), 0.0);
    }

    #[test]
    fn g_of_three_is_two() {
        assert_relative_eq!(g_function(3.0).unwrap(), 2.0, epsilon = TOL);
    }

    #[test]
    fn g_rejects_sub_unit_argument() {
        assert!(matches!(g_function(0.9), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn g_approaches_asymptotic_form() {
        let nu = 1e6;
        let g = g_function(nu).unwrap();
        let g_prime = g_asymptotic(nu).unwrap();
        assert!((g - g_prime).abs() / g < 1e-5);
        // The gap closes like 1/nu.
        let mut last_gap = f64::INFINITY;
        for nu in [1e3, 1e5, 1e7] {
            let gap = (g_function(nu).unwrap() - g_asymptotic(nu).unwrap()).abs();
            assert!(gap < last_gap);
            last_gap = gap;
        }
        assert!(last_gap < 1e-6);
    }

    #[test]
    fn g_asymptotic_anchors() {
        assert_relative_eq!(
            g_asymptotic(2.0 / std::f64::consts::E).unwrap(),
            0.0,
            epsilon = TOL
        );
        assert_relative_eq!(
            g_asymptotic(2.0).unwrap(),
            std::f64::consts::E.log2(),
            epsilon = TOL
        );
        assert!(g_asymptotic(0.0).is_err());
    }

    #[test]
    fn entropy_is_additive_over_modes() {
        let spec = SymplecticSpectrum::new(vec![3.0, 2.0]).unwrap();
        let total = von_neumann_entropy(&spec).unwrap();
        let parts = g_function(3.0).unwrap() + g_function(2.0).unwrap();
        assert_relative_eq!(total, parts, epsilon = TOL);

        let pure = SymplecticSpectrum::new(vec![1.0, 1.0]).unwrap();
        assert_eq!(von_neumann_entropy(&pure).unwrap(), 0.0);
        let single = SymplecticSpectrum::new(vec![3.0]).unwrap();
        assert_relative_eq!(von_neumann_entropy(&single).unwrap(), 2.0, epsilon = TOL);
    }

    #[test]
    fn homodyne_conditioning_with_no_correlations_is_identity_map() {
        let cm = CovarianceMatrix::from_matrix(DMatrix::from_diagonal(
            &nalgebra::DVector::from_vec(vec![2.0, 2.0, 1.5, 1.5]),
        ))
        .unwrap();
        let d = CorrelationBlock::new(0.0, 0.0);
        let cond = condition_on_homodyne(&cm, &d, 5.0).unwrap();
        assert_relative_eq!(cond.matrix(), cm.matrix(), epsilon = TOL);
    }

    #[test]
    fn homodyne_conditioning_rejects_non_positive_variance() {
        let cm = CovarianceMatrix::vacuum(2);
        let d = CorrelationBlock::new(0.0, 0.0);
        assert!(matches!(
            condition_on_homodyne(&cm, &d, 0.0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn heterodyne_conditioning_with_no_correlations_is_identity_map() {
        let cm = CovarianceMatrix::from_matrix(DMatrix::from_diagonal(
            &nalgebra::DVector::from_vec(vec![2.0, 2.0, 1.5, 1.5]),
        ))
        .unwrap();
        let d = CorrelationBlock::new(0.0, 0.0);
        let vb = CovarianceMatrix::from_matrix(DMatrix::identity(2, 2) * 4.0).unwrap();
        let cond = condition_on_heterodyne(&cm, &d, &vb).unwrap();
        assert_relative_eq!(cond.matrix(), cm.matrix(), epsilon = TOL);
    }

    #[test]
    fn heterodyne_conditioning_rejects_anisotropic_measured_mode() {
        let cm = CovarianceMatrix::vacuum(2);
        let d = CorrelationBlock::new(0.0, 0.0);
        let vb = CovarianceMatrix::from_matrix(DMatrix::from_diagonal(
            &nalgebra::DVector::from_vec(vec![2.0, 3.0]),
        ))
        .unwrap();
        assert!(matches!(
            condition_on_heterodyne(&cm, &d, &vb),
            Err(Error::InvalidArgument(_))
        ));
    }
}
