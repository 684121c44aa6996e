//! Sequential growth of the weighted recursive graph.
//!
//! Vertex j+1 arrives carrying m half-edges; each half-edge attaches to an
//! existing vertex i <= j with probability W_i / S_j. All weights are drawn
//! up front (they are i.i.d. and independent of the graph), which makes the
//! conditional mean in-degrees m W_i (H_n - H_i) exactly computable from the
//! snapshot without replaying growth.
//!
//! Draw order is fixed (n weight uniforms, then m(n-1) attachment uniforms),
//! so a (config, seed) pair reproduces a snapshot bit for bit.

use crate::error::{Error, Result};
use crate::fenwick::{FenwickSampler, Kahan, LinearCdfSampler};
use crate::weights::WeightFamily;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

pub const DEFAULT_RANDOM_OUT_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    FixedOutDegree,
    RandomOutDegree,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WrgConfig {
    pub n: usize,
    pub m: u32,
    pub family: WeightFamily,
    pub variant: Variant,
    pub seed: u64,
    /// Hard cap for the Theta(n^2) random-out-degree variant.
    #[serde(default = "default_cap")]
    pub random_out_cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_RANDOM_OUT_CAP
}

impl WrgConfig {
    pub fn new(n: usize, m: u32, family: WeightFamily, seed: u64) -> Self {
        WrgConfig {
            n,
            m,
            family,
            variant: Variant::FixedOutDegree,
            seed,
            random_out_cap: DEFAULT_RANDOM_OUT_CAP,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Parameter("n must be >= 1".into()));
        }
        if self.m < 1 {
            return Err(Error::Parameter("m must be >= 1".into()));
        }
        if self.variant == Variant::RandomOutDegree {
            if self.m != 1 {
                return Err(Error::Parameter(
                    "the random-out-degree variant is defined for m = 1".into(),
                ));
            }
            if self.n > self.random_out_cap {
                return Err(Error::Resource(format!(
                    "random-out-degree growth is Theta(n^2); n = {} exceeds the cap {} \
                     (raise random_out_cap to override)",
                    self.n, self.random_out_cap
                )));
            }
        }
        Ok(())
    }
}

/// State of one grown graph: weights, in-degrees and the harmonic prefix
/// sums H_i = sum_{l < i} 1/S_l (index i is 1-based via `harmonic[i-1]`).
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthSnapshot {
    pub n: usize,
    pub m: u32,
    pub seed: u64,
    pub weights: Vec<f64>,
    pub in_degrees: Vec<u64>,
    pub harmonic: Vec<f64>,
}

impl GrowthSnapshot {
    /// H_n = sum_{j=1}^{n-1} 1/S_j.
    pub fn harmonic_total(&self) -> f64 {
        *self.harmonic.last().expect("n >= 1")
    }

    /// Rebuild the harmonic prefix from weights (used on import).
    pub fn from_parts(weights: Vec<f64>, in_degrees: Vec<u64>, m: u32, seed: u64) -> Self {
        let n = weights.len();
        let mut harmonic = Vec::with_capacity(n);
        let mut s = Kahan::default();
        let mut h = Kahan::default();
        harmonic.push(0.0);
        for (j, &w) in weights.iter().enumerate() {
            s.add(w);
            if j + 1 < n {
                h.add(1.0 / s.value());
                harmonic.push(h.value());
            }
        }
        GrowthSnapshot { n, m, seed, weights, in_degrees, harmonic }
    }
}

/// Grow a WRG per the configured variant.
pub fn grow(config: &WrgConfig) -> Result<GrowthSnapshot> {
    config.validate()?;
    match config.variant {
        Variant::FixedOutDegree => grow_fixed(config),
        Variant::RandomOutDegree => grow_random_outdegree(config),
    }
}

fn draw_weights(config: &WrgConfig, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..config.n).map(|_| config.family.sample(rng)).collect()
}

fn grow_fixed(config: &WrgConfig) -> Result<GrowthSnapshot> {
    let n = config.n;
    let m = config.m as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let weights = draw_weights(config, &mut rng);

    let mut degrees = vec![0u64; n];
    let mut tree = FenwickSampler::with_capacity(n);
    tree.push(weights[0]);
    let mut s = Kahan::default();
    s.add(weights[0]);
    let mut h = Kahan::default();
    let mut harmonic = Vec::with_capacity(n);
    harmonic.push(0.0);

    for j in 1..n {
        let total = tree.total();
        for _ in 0..m {
            let u: f64 = rng.gen();
            let idx = tree.search(u * total);
            degrees[idx] += 1;
        }
        tree.push(weights[j]);
        h.add(1.0 / s.value());
        harmonic.push(h.value());
        s.add(weights[j]);
    }
    debug_assert_eq!(degrees.iter().sum::<u64>(), (m as u64) * (n as u64 - u64::from(n > 0)));
    Ok(GrowthSnapshot { n, m: config.m, seed: config.seed, weights, in_degrees: degrees, harmonic })
}

/// Remark-2.2(ii) variant: vertex j+1 connects to every i <= j independently
/// with probability W_i / S_j.
pub fn grow_random_outdegree(config: &WrgConfig) -> Result<GrowthSnapshot> {
    let mut cfg = config.clone();
    cfg.variant = Variant::RandomOutDegree;
    cfg.validate()?;
    let n = cfg.n;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let weights = draw_weights(&cfg, &mut rng);

    let mut degrees = vec![0u64; n];
    let mut s = Kahan::default();
    s.add(weights[0]);
    let mut h = Kahan::default();
    let mut harmonic = Vec::with_capacity(n);
    harmonic.push(0.0);

    for j in 1..n {
        let total = s.value();
        for (i, &w) in weights.iter().enumerate().take(j) {
            let u: f64 = rng.gen();
            if u * total < w {
                degrees[i] += 1;
            }
        }
        h.add(1.0 / total);
        harmonic.push(h.value());
        s.add(weights[j]);
    }
    Ok(GrowthSnapshot { n, m: cfg.m, seed: cfg.seed, weights, in_degrees: degrees, harmonic })
}

/// Exact conditional mean in-degrees m W_i (H_n - H_i), O(n) total.
pub fn cond_mean_degrees(snapshot: &GrowthSnapshot) -> Vec<f64> {
    let hn = snapshot.harmonic_total();
    let m = snapshot.m as f64;
    snapshot
        .weights
        .iter()
        .zip(snapshot.harmonic.iter())
        .map(|(&w, &hi)| m * w * (hn - hi))
        .collect()
}

/// Maximum and the smallest index attaining it (1-based; ties resolve to
/// the earliest vertex).
pub fn max_degree_stats<T: PartialOrd + Copy>(values: &[T]) -> Result<(T, usize)> {
    if values.is_empty() {
        return Err(Error::Domain("max_degree_stats on empty input".into()));
    }
    let mut best = values[0];
    let mut arg = 0usize;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > best {
            best = v;
            arg = i;
        }
    }
    Ok((best, arg + 1))
}

/// Y_n = H_n - log n, the a.s.-convergent harmonic residual.
pub fn harmonic_residual(snapshot: &GrowthSnapshot) -> Result<f64> {
    if snapshot.n < 2 {
        return Err(Error::Domain("harmonic residual needs n >= 2".into()));
    }
    Ok(snapshot.harmonic_total() - (snapshot.n as f64).ln())
}

/// First divergence between the Fenwick sampler and the linear-scan oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleMismatch {
    pub draw: usize,
    pub u: f64,
    pub fenwick_index: usize,
    pub linear_index: usize,
}

/// Feed the identical uniform stream to the Fenwick sampler and the
/// linear-scan inverse-CDF oracle; Ok(()) iff the index sequences match.
pub fn sampler_oracle_check<R: Rng + ?Sized>(
    weights: &[f64],
    draws: usize,
    rng: &mut R,
) -> std::result::Result<(), OracleMismatch> {
    let fenwick = FenwickSampler::from_weights(weights);
    let linear = LinearCdfSampler::from_weights(weights);
    for draw in 0..draws {
        let u: f64 = rng.gen();
        let fi = fenwick.search(u * fenwick.total());
        let li = linear.search(u * linear.total());
        if fi != li {
            return Err(OracleMismatch {
                draw,
                u,
                fenwick_index: fi + 1,
                linear_index: li + 1,
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub config: WrgConfig,
}

/// Columnar export: `i,weight,in_degree,cond_mean` with weights printed at
/// 17 significant digits (round-trips f64 exactly).
pub fn write_snapshot_csv<W: Write>(snapshot: &GrowthSnapshot, out: &mut W) -> Result<()> {
    let cond = cond_mean_degrees(snapshot);
    writeln!(out, "i,weight,in_degree,cond_mean")?;
    for i in 0..snapshot.n {
        writeln!(
            out,
            "{},{:.16e},{},{:.16e}",
            i + 1,
            snapshot.weights[i],
            snapshot.in_degrees[i],
            cond[i]
        )?;
    }
    Ok(())
}

pub fn write_snapshot_header<W: Write>(config: &WrgConfig, out: &mut W) -> Result<()> {
    let header = SnapshotHeader { config: config.clone() };
    serde_json::to_writer_pretty(&mut *out, &header)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Reimport a snapshot CSV; degrees are bit-exact, weights round-trip
/// through their 17-digit decimal form.
pub fn read_snapshot_csv<R: BufRead>(input: R, m: u32, seed: u64) -> Result<GrowthSnapshot> {
    let mut weights = Vec::new();
    let mut degrees = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        if lineno == 0 {
            if line.trim() != "i,weight,in_degree,cond_mean" {
                return Err(Error::Parse(format!("unexpected snapshot CSV header: {line}")));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!("bad snapshot row {}: {line}", lineno + 1)));
        }
        let w: f64 = fields[1]
            .parse()
            .map_err(|e| Error::Parse(format!("row {}: bad weight: {e}", lineno + 1)))?;
        let d: u64 = fields[2]
            .parse()
            .map_err(|e| Error::Parse(format!("row {}: bad degree: {e}", lineno + 1)))?;
        weights.push(w);
        degrees.push(d);
    }
    Ok(GrowthSnapshot::from_parts(weights, degrees, m, seed))
}
