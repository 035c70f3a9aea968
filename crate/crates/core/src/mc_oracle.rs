//! Monte-Carlo verification oracle for the Shannon layer.
//!
//! Samples the prepare-and-measure model at the quadrature level,
//!
//! ```text
//! X_A  = X_S + X_0                      X_S ~ N(0, V_S), X_0 ~ N(0, V_0)
//! X_B  =  sqrt(T) X_A + sqrt(1-T) E     E   ~ N(0, W)
//! E'   = -sqrt(1-T) X_A + sqrt(T) E
//! H_B  = (X_B + X_vac) / sqrt(2)        X_vac ~ N(0, 1)
//! ```
//!
//! and estimates variances, conditional variances and mutual informations
//! empirically, independently of the covariance-matrix machinery. Only the
//! Shannon layer has a sampling analog; the Holevo layer is verified by the
//! dual-route symplectic checks instead.
//!
//! Sampling uses ChaCha12 with a hand-rolled Box-Muller transform, so a
//! seed pins the batch bit-for-bit across platforms and releases.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::channel::{ChannelParams, SourceParams};
use crate::error::{Error, Result};

/// Minimum batch size accepted by the estimators.
pub const MIN_ESTIMATION_SAMPLES: usize = 10_000;

/// Variances below this are treated as degenerate by the estimators.
pub const DEGENERATE_VARIANCE: f64 = 1e-12;

/// A column of the sampled record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    /// Alice's classical signal X_S.
    Signal,
    /// Alice's prepared mode X_A = X_S + X_0.
    AliceMode,
    /// Eve's injected EPR arm E.
    EveInput,
    /// Bob's received quadrature X_B.
    BobMode,
    /// Eve's retained beam-splitter output E'.
    EveOutput,
    /// Bob's heterodyne outcome for one quadrature, (X_B + vacuum)/sqrt(2).
    BobHeterodyne,
}

impl Column {
    pub const ALL: [Self; 6] = [
        Self::Signal,
        Self::AliceMode,
        Self::EveInput,
        Self::BobMode,
        Self::EveOutput,
        Self::BobHeterodyne,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Column::Signal => "x_s",
            Column::AliceMode => "x_a",
            Column::EveInput => "e",
            Column::BobMode => "x_b",
            Column::EveOutput => "e_prime",
            Column::BobHeterodyne => "h_b",
        }
    }
}

/// A seeded batch of per-sample quadrature records.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    seed: u64,
    signal: Vec<f64>,
    alice: Vec<f64>,
    eve_input: Vec<f64>,
    bob: Vec<f64>,
    eve_output: Vec<f64>,
    bob_het: Vec<f64>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.signal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signal.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn column(&self, column: Column) -> &[f64] {
        match column {
            Column::Signal => &self.signal,
            Column::AliceMode => &self.alice,
            Column::EveInput => &self.eve_input,
            Column::BobMode => &self.bob,
            Column::EveOutput => &self.eve_output,
            Column::BobHeterodyne => &self.bob_het,
        }
    }

    /// Dump the batch as CSV (header row, then one record per line).
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        let names: Vec<&str> = Column::ALL.iter().map(|c| c.name()).collect();
        writeln!(out, "{}", names.join(","))?;
        for i in 0..self.len() {
            let row: Vec<String> = Column::ALL
                .iter()
                .map(|&c| format!("{:.14e}", self.column(c)[i]))
                .collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// One standard normal via Box-Muller on two uniform draws. The cosine
/// branch alone is used so the draw count per sample stays fixed.
fn standard_normal(rng: &mut ChaCha12Rng) -> f64 {
    // u1 in (0, 1] keeps the log finite.
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Draw `n` samples of the full protocol record under the given parameters.
///
/// The same (parameters, n, seed) triple reproduces the batch exactly.
pub fn sample_protocol(
    src: &SourceParams,
    ch: &ChannelParams,
    n: usize,
    seed: u64,
) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot sample an empty batch".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let s_sig = src.signal_variance().sqrt();
    let s_shot = src.shot_noise().sqrt();
    let s_epr = ch.epr_noise().sqrt();
    let t_root = ch.transmission().sqrt();
    let r_root = (1.0 - ch.transmission()).sqrt();

    let mut batch = SampleBatch {
        seed,
        signal: Vec::with_capacity(n),
        alice: Vec::with_capacity(n),
        eve_input: Vec::with_capacity(n),
        bob: Vec::with_capacity(n),
        eve_output: Vec::with_capacity(n),
        bob_het: Vec::with_capacity(n),
    };
    for _ in 0..n {
        let x_s = s_sig * standard_normal(&mut rng);
        let x_0 = s_shot * standard_normal(&mut rng);
        let e = s_epr * standard_normal(&mut rng);
        let vac = standard_normal(&mut rng);
        let x_a = x_s + x_0;
        let x_b = t_root * x_a + r_root * e;
        let e_prime = -r_root * x_a + t_root * e;
        batch.signal.push(x_s);
        batch.alice.push(x_a);
        batch.eve_input.push(e);
        batch.bob.push(x_b);
        batch.eve_output.push(e_prime);
        batch.bob_het.push((x_b + vac) / std::f64::consts::SQRT_2);
    }
    Ok(batch)
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn estimate_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Unbiased sample covariance.
pub fn estimate_covariance(xs: &[f64], ys: &[f64]) -> f64 {
    let (mx, my) = (mean(xs), mean(ys));
    xs.iter()
        .zip(ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / (xs.len() - 1) as f64
}

/// Empirical conditional variance `V(y|x) = V(y) - cov(x, y)^2 / V(x)`.
pub fn conditional_variance(ys: &[f64], xs: &[f64]) -> Result<f64> {
    let vx = estimate_variance(xs);
    if vx < DEGENERATE_VARIANCE {
        return Err(Error::NumericFailure(format!(
            "conditioning variable is degenerate (variance {vx})"
        )));
    }
    let cov = estimate_covariance(xs, ys);
    Ok(estimate_variance(ys) - cov * cov / vx)
}

/// Plug-in Gaussian mutual information estimate in bits:
/// `(1/2) log2(V(y) / V(y|x))` from empirical moments.
pub fn estimate_mi(batch: &SampleBatch, x: Column, y: Column) -> Result<f64> {
    if batch.len() < MIN_ESTIMATION_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "mutual-information estimation needs >= {MIN_ESTIMATION_SAMPLES} samples, got {}",
            batch.len()
        )));
    }
    let ys = batch.column(y);
    let vy = estimate_variance(ys);
    if vy < DEGENERATE_VARIANCE {
        return Err(Error::NumericFailure(format!(
            "target variable is degenerate (variance {vy})"
        )));
    }
    let vy_cond = conditional_variance(ys, batch.column(x))?;
    if vy_cond < DEGENERATE_VARIANCE {
        return Err(Error::NumericFailure(format!(
            "conditional variance is degenerate ({vy_cond}); variables are deterministic copies"
        )));
    }
    Ok(0.5 * (vy / vy_cond).log2())
}

/// Heterodyne mutual information estimate: both quadratures contribute
/// equally, so the single-quadrature estimate is doubled.
pub fn estimate_mi_heterodyne(batch: &SampleBatch) -> Result<f64> {
    Ok(2.0 * estimate_mi(batch, Column::Signal, Column::BobHeterodyne)?)
}
