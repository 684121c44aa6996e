//! Replicated Monte Carlo experiments tying growth to the limit theory:
//! estimators, goodness-of-fit statistics and serialized reports.
//!
//! Replica r always runs on the stream seeded by `replica_seed(base_seed, r)`,
//! so reports are reproducible from the plan alone and per-replica values do
//! not depend on execution order.

pub use crate::stats::{ks_statistic, tv_distance};

use crate::error::{Error, Result};
use crate::growth::{self, GrowthSnapshot, Variant, WrgConfig};
use crate::ppp;
use crate::stats::{ls_slope, median, Summary};
use crate::theory::{self, Regime};
use crate::weights::{MdaClass, WeightFamily};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    DegreeDist,
    MaxDegreeFirstOrder,
    MaxDegreeSecondOrder,
    WindowGumbel,
    FrechetLimit,
    Concentration,
    ZeroDegreeFraction,
    LocationScaling,
}

/// Which statistic drives window/second-order/concentration comparisons:
/// raw degrees (slow convergence, needs growth) or the exact conditional
/// means given the weights (fast convergence, weights only).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatisticMode {
    Degrees,
    CondMeans,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowScale {
    /// C_n = [s ell(n) n^gamma, t ell(n) n^gamma]
    PowerGamma,
    /// C_n = [s t_n n, t t_n n]
    TnScale,
}

/// The window profile function ell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LadderFn {
    One,
    /// ell(n) = exp(sqrt(zeta0 log n)), so log(ell(n))^2 / log n -> zeta0.
    ExpSqrt { zeta0: f64 },
}

impl LadderFn {
    pub fn eval(&self, n: f64) -> f64 {
        match self {
            LadderFn::One => 1.0,
            LadderFn::ExpSqrt { zeta0 } => (zeta0 * n.ln()).sqrt().exp(),
        }
    }

    pub fn zeta0(&self) -> f64 {
        match self {
            LadderFn::One => 0.0,
            LadderFn::ExpSqrt { zeta0 } => *zeta0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub scale: WindowScale,
    pub s: f64,
    pub t: f64,
    pub ell: LadderFn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub kind: ExperimentKind,
    pub config: WrgConfig,
    pub replicas: usize,
    #[serde(default)]
    pub window: Option<WindowSpec>,
    pub base_seed: u64,
    /// Degree cutoff for degree-distribution experiments.
    #[serde(default = "default_kmax")]
    pub kmax: u64,
    #[serde(default = "default_mode")]
    pub mode: StatisticMode,
    /// Sizes for trend experiments (concentration, zero-degree, second
    /// order); empty means the single size config.n.
    #[serde(default)]
    pub ladder: Vec<usize>,
}

fn default_kmax() -> u64 {
    30
}

fn default_mode() -> StatisticMode {
    StatisticMode::Degrees
}

impl ExperimentPlan {
    pub fn new(kind: ExperimentKind, config: WrgConfig, replicas: usize, base_seed: u64) -> Self {
        ExperimentPlan {
            kind,
            config,
            replicas,
            window: None,
            base_seed,
            kmax: default_kmax(),
            mode: default_mode(),
            ladder: Vec::new(),
        }
    }

    fn sizes(&self) -> Vec<usize> {
        if self.ladder.is_empty() {
            vec![self.config.n]
        } else {
            self.ladder.clone()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.replicas < 1 {
            return Err(Error::Parameter("replicas must be >= 1".into()));
        }
        Ok(())
    }
}

/// SplitMix64 finalizer used to derive per-replica seeds.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic stream seed of replica r under a base seed.
pub fn replica_seed(base_seed: u64, replica: u64) -> u64 {
    splitmix64(base_seed ^ replica.wrapping_mul(0xA076_1D64_78BD_642F))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observable {
    pub name: String,
    pub values: Vec<f64>,
    pub summary: Summary,
}

impl Observable {
    fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let summary = Summary::from_samples(&values)?;
        Ok(Observable { name: name.into(), values, summary })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedStatistic {
    pub name: String,
    pub kind: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub plan: ExperimentPlan,
    pub observables: Vec<Observable>,
    pub statistics: Vec<NamedStatistic>,
    /// The theory prediction actually used, with its regime tag.
    pub prediction: serde_json::Value,
    pub seeds: Vec<u64>,
    pub wall_clock_ms: u64,
}

impl ExperimentReport {
    pub fn observable(&self, name: &str) -> Option<&Observable> {
        self.observables.iter().find(|o| o.name == name)
    }

    pub fn statistic(&self, name: &str) -> Option<f64> {
        self.statistics.iter().find(|s| s.name == name).map(|s| s.value)
    }

    /// File stem embedding the plan hash and base seed.
    pub fn file_stem(&self) -> String {
        let plan_json = serde_json::to_string(&self.plan).expect("plan serializes");
        format!("{:?}_{:016x}_s{}", self.plan.kind, fnv1a(plan_json.as_bytes()), self.plan.base_seed)
            .to_lowercase()
    }

    /// Persist as JSON (full report) plus CSV (per-replica observables).
    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let stem = self.file_stem();
        let json_path = dir.join(format!("{stem}.json"));
        let mut f = std::fs::File::create(&json_path)?;
        serde_json::to_writer_pretty(&mut f, self)?;
        f.write_all(b"\n")?;
        let csv_path = dir.join(format!("{stem}.csv"));
        let mut f = std::fs::File::create(&csv_path)?;
        self.write_replica_csv(&mut f)?;
        Ok(json_path)
    }

    pub fn write_replica_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        write!(out, "replica")?;
        for o in &self.observables {
            write!(out, ",{}", o.name)?;
        }
        writeln!(out)?;
        let rows = self.observables.iter().map(|o| o.values.len()).max().unwrap_or(0);
        for r in 0..rows {
            write!(out, "{r}")?;
            for o in &self.observables {
                match o.values.get(r) {
                    Some(v) => write!(out, ",{v:.16e}")?,
                    None => write!(out, ",")?,
                }
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// Weights and harmonic prefix of one replica without growing the graph
/// (identical to the grow() stream: same seed, same weight draws).
fn sampled_profile(family: &WeightFamily, n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..n).map(|_| family.sample(&mut rng)).collect();
    let mut harmonic = Vec::with_capacity(n);
    harmonic.push(0.0);
    let mut s = crate::fenwick::Kahan::default();
    let mut h = crate::fenwick::Kahan::default();
    s.add(weights[0]);
    for w in weights.iter().take(n).skip(1) {
        h.add(1.0 / s.value());
        harmonic.push(h.value());
        s.add(*w);
    }
    (weights, harmonic)
}

fn grow_replica(plan: &ExperimentPlan, n: usize, replica: u64) -> Result<GrowthSnapshot> {
    let mut cfg = plan.config.clone();
    cfg.n = n;
    cfg.seed = replica_seed(plan.base_seed, replica);
    let snap = growth::grow(&cfg)?;
    if cfg.variant == Variant::FixedOutDegree {
        let total: u64 = snap.in_degrees.iter().sum();
        let expect = cfg.m as u64 * (n as u64 - 1);
        if total != expect {
            return Err(Error::Numeric(format!(
                "degree-sum invariant violated: {total} != {expect}"
            )));
        }
    }
    Ok(snap)
}

/// Dispatch a plan by kind.
pub fn run(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    plan.validate()?;
    match plan.kind {
        ExperimentKind::DegreeDist => run_degree_dist(plan),
        ExperimentKind::MaxDegreeFirstOrder
        | ExperimentKind::FrechetLimit
        | ExperimentKind::LocationScaling => run_max_first_order(plan),
        ExperimentKind::WindowGumbel => run_window_gumbel(plan),
        ExperimentKind::MaxDegreeSecondOrder => run_second_order(plan),
        ExperimentKind::Concentration => run_concentration(plan),
        ExperimentKind::ZeroDegreeFraction => run_zero_degree_fraction(plan),
    }
}

/// Pooled empirical degree distribution vs the p(k) limit, plus interval
/// masses of the joint weight/degree limit.
pub fn run_degree_dist(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    plan.validate()?;
    let start = Instant::now();
    let cfg = &plan.config;
    let kmax = plan.kmax;
    let pk: Vec<f64> =
        (0..=kmax).map(|k| theory::pk_limit(&cfg.family, cfg.m, k)).collect::<Result<_>>()?;

    // weight intervals: quartile cells of the weight law
    let qcuts = [
        0.0,
        cfg.family.quantile_tail(0.75),
        cfg.family.quantile_tail(0.5),
        cfg.family.quantile_tail(0.25),
        f64::INFINITY,
    ];
    let kcells = 3u64.min(kmax);

    let mut pooled = vec![0u64; kmax as usize + 1];
    let mut pooled_total = 0u64;
    let mut cell_counts = vec![0u64; 4 * (kcells as usize + 1)];
    let mut tv_per_rep = Vec::with_capacity(plan.replicas);
    let mut p0_per_rep = Vec::with_capacity(plan.replicas);
    let mut seeds = Vec::with_capacity(plan.replicas);

    for r in 0..plan.replicas {
        let snap = grow_replica(plan, cfg.n, r as u64)?;
        seeds.push(snap.seed);
        let mut counts = vec![0u64; kmax as usize + 1];
        for (&z, &w) in snap.in_degrees.iter().zip(snap.weights.iter()) {
            if z <= kmax {
                counts[z as usize] += 1;
                if z <= kcells {
                    let cell = qcuts.windows(2).position(|c| w > c[0] && w <= c[1]).unwrap_or(3);
                    cell_counts[z as usize * 4 + cell] += 1;
                }
            }
        }
        let nf = snap.n as f64;
        let phat: Vec<f64> = counts.iter().map(|&c| c as f64 / nf).collect();
        tv_per_rep.push(tv_distance(&phat, &pk));
        p0_per_rep.push(phat[0]);
        for (p, c) in pooled.iter_mut().zip(counts.iter()) {
            *p += c;
        }
        pooled_total += snap.n as u64;
    }

    let pooled_phat: Vec<f64> =
        pooled.iter().map(|&c| c as f64 / pooled_total as f64).collect();
    let tv_pooled = tv_distance(&pooled_phat, &pk);

    // joint-law check: empirical Gamma^{(k)} interval masses vs quadrature
    let mut gamma_err: f64 = 0.0;
    for k in 0..=kcells {
        for (cell, c) in qcuts.windows(2).enumerate() {
            let emp = cell_counts[k as usize * 4 + cell] as f64 / pooled_total as f64;
            let th = theory::gamma_k_mass(&cfg.family, cfg.m, k, c[0], c[1])?;
            gamma_err = gamma_err.max((emp - th).abs());
        }
    }

    let prediction = serde_json::json!({
        "regime": format!("{:?}", cfg.family.classify()),
        "pk": pk,
        "kmax": kmax,
    });
    Ok(ExperimentReport {
        plan: plan.clone(),
        observables: vec![
            Observable::new("tv_to_pk_limit", tv_per_rep)?,
            Observable::new("p0_hat", p0_per_rep)?,
        ],
        statistics: vec![
            NamedStatistic { name: "tv_pooled".into(), kind: "tv".into(), value: tv_pooled },
            NamedStatistic {
                name: "gamma_k_max_abs_err".into(),
                kind: "sup".into(),
                value: gamma_err,
            },
        ],
        prediction,
        seeds,
        wall_clock_ms: start.elapsed().as_millis() as u64,
    })
}

/// First-order maximum degree: raw-degree and conditional-mean ratios to the
/// predicted scale, plus location exponents; Frechet families additionally
/// get KS tests against the limiting laws.
pub fn run_max_first_order(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    plan.validate()?;
    let start = Instant::now();
    let cfg = &plan.config;
    let pred = theory::max_degree_prediction(&cfg.family, cfg.m, cfg.n as u64)?;
    let scale = pred.first_order;

    let mut ratio = Vec::with_capacity(plan.replicas);
    let mut cond_ratio = Vec::with_capacity(plan.replicas);
    let mut loc_exp = Vec::with_capacity(plan.replicas);
    let mut cond_loc_exp = Vec::with_capacity(plan.replicas);
    let mut loc_frac = Vec::with_capacity(plan.replicas);
    let mut seeds = Vec::with_capacity(plan.replicas);
    let ln_n = (cfg.n as f64).ln();

    for r in 0..plan.replicas {
        let snap = grow_replica(plan, cfg.n, r as u64)?;
        seeds.push(snap.seed);
        let (zmax, i_n) = growth::max_degree_stats(&snap.in_degrees)?;
        let cond = growth::cond_mean_degrees(&snap);
        let (cmax, ci_n) = growth::max_degree_stats(&cond)?;
        ratio.push(zmax as f64 / scale);
        cond_ratio.push(cmax / scale);
        loc_exp.push((i_n as f64).ln() / ln_n);
        cond_loc_exp.push((ci_n as f64).ln() / ln_n);
        loc_frac.push(i_n as f64 / cfg.n as f64);
    }

    let mut statistics = vec![NamedStatistic {
        name: "median_ratio".into(),
        kind: "median".into(),
        value: median(&ratio)?,
    }];
    let mut prediction = serde_json::json!({
        "regime": format!("{:?}", pred.regime),
        "first_order": pred.first_order,
        "second_order_addend": pred.second_order_addend,
        "scale_is_random": pred.scale_is_random,
        "location": format!("{:?}", theory::location_prediction(&cfg.family, cfg.m)?),
    });

    if pred.regime == Regime::FrechetModerate {
        let alpha = frechet_alpha(&cfg.family)?;
        let ks_max = ks_statistic(&ratio, |x| {
            if x <= 0.0 {
                0.0
            } else {
                ppp::frechet_max_cdf(alpha, cfg.m, x).unwrap_or(0.0)
            }
        })?;
        let ks_loc = ks_statistic(&loc_frac, |x| {
            if x <= 0.0 {
                0.0
            } else if x >= 1.0 {
                1.0
            } else {
                ppp::location_i_alpha_cdf(alpha, x).unwrap_or(0.0)
            }
        })?;
        statistics.push(NamedStatistic {
            name: "ks_max_vs_frechet".into(),
            kind: "ks".into(),
            value: ks_max,
        });
        statistics.push(NamedStatistic {
            name: "ks_location_vs_i_alpha".into(),
            kind: "ks".into(),
            value: ks_loc,
        });
        prediction["limit_median"] =
            serde_json::json!(frechet_limit_median(alpha, cfg.m)?);
    }

    Ok(ExperimentReport {
        plan: plan.clone(),
        observables: vec![
            Observable::new("max_degree_over_scale", ratio)?,
            Observable::new("cond_mean_max_over_scale", cond_ratio)?,
            Observable::new("location_log_exponent", loc_exp)?,
            Observable::new("cond_location_log_exponent", cond_loc_exp)?,
            Observable::new("location_over_n", loc_frac)?,
        ],
        statistics,
        prediction,
        seeds,
        wall_clock_ms: start.elapsed().as_millis() as u64,
    })
}

fn frechet_alpha(family: &WeightFamily) -> Result<f64> {
    family
        .frechet_params()
        .map(|(alpha, _)| alpha)
        .ok_or_else(|| Error::Domain("not a Frechet family".into()))
}

/// Median of the limit law exp{-Gamma(alpha) (x/m)^{-(alpha-1)}}.
fn frechet_limit_median(alpha: f64, m: u32) -> Result<f64> {
    let g = crate::special::gamma(alpha);
    Ok(m as f64 * (g / 2.0f64.ln()).powf(1.0 / (alpha - 1.0)))
}

/// Window first/second-order statistic and its Gumbel / exp(U) limits.
pub fn run_window_gumbel(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    plan.validate()?;
    let start = Instant::now();
    let window = plan
        .window
        .ok_or_else(|| Error::Domain("WindowGumbel requires a window spec".into()))?;
    if !(window.s > 0.0 && window.s < window.t) {
        return Err(Error::Domain("window needs 0 < s < t".into()));
    }
    let cfg = &plan.config;
    let n = cfg.n;
    let nf = n as f64;
    let mf = cfg.m as f64;

    // regime-matched centering, scaling and window range
    let (lo, hi, center_scale, loc_norm, gumbel_loc) = match (cfg.family.classify(), window.scale)
    {
        (MdaClass::GumbelRv, WindowScale::PowerGamma) => {
            let (tau, _, _, _) = rv_params(&cfg.family)?;
            if plan.mode == StatisticMode::Degrees && tau >= 1.0 {
                return Err(Error::Domain(
                    "the degree-window limit is proved for tau in (0,1)".into(),
                ));
            }
            let g = theory::gamma_exponent(tau);
            let base = window.ell.eval(nf) * nf.powf(g);
            let (ag, bg) = cfg.family.rv_norming_at(nf.powf(g)).expect("rv");
            let first = mf * (1.0 - g) * bg * nf.ln();
            let scale = mf * (1.0 - g) * ag * nf.ln();
            let zeta0 = window.ell.zeta0();
            let loc = (window.t / window.s).ln().ln() - zeta0 * (tau + 1.0).powi(2) / (2.0 * tau);
            (
                (window.s * base).ceil() as usize,
                (window.t * base).floor() as usize,
                (first, scale),
                base,
                loc,
            )
        }
        (MdaClass::GumbelRav, WindowScale::TnScale) => {
            let seqs = cfg.family.norm_seqs(n as u64, cfg.m)?;
            let t_n = seqs.t_n.expect("rav t_n");
            let base = t_n * nf;
            let (at, bt) = theory::rav_norming_checked(&cfg.family, base)?;
            let ln_inv = -t_n.ln();
            (
                (window.s * base).ceil() as usize,
                (window.t * base).floor() as usize,
                (mf * bt * ln_inv, mf * at * ln_inv),
                base,
                (window.t / window.s).ln().ln(),
            )
        }
        (class, scale) => {
            return Err(Error::Domain(format!(
                "window statistic undefined for {class:?} with {scale:?} scaling"
            )))
        }
    };
    let lo = lo.max(1);
    if lo > hi || hi > n {
        return Err(Error::Domain(format!(
            "window [{lo}, {hi}] empty or out of range at n = {n}"
        )));
    }
    let (first, scale) = center_scale;

    let mut stat = Vec::with_capacity(plan.replicas);
    let mut loc = Vec::with_capacity(plan.replicas);
    let mut seeds = Vec::with_capacity(plan.replicas);
    for r in 0..plan.replicas {
        let seed = replica_seed(plan.base_seed, r as u64);
        seeds.push(seed);
        let values: Vec<f64> = match plan.mode {
            StatisticMode::CondMeans => {
                let (weights, harmonic) = sampled_profile(&cfg.family, n, seed);
                let hn = harmonic[n - 1];
                (lo..=hi)
                    .map(|i| mf * weights[i - 1] * (hn - harmonic[i - 1]))
                    .collect()
            }
            StatisticMode::Degrees => {
                let snap = grow_replica(plan, n, r as u64)?;
                (lo..=hi).map(|i| snap.in_degrees[i - 1] as f64).collect()
            }
        };
        let (mx, arg) = growth::max_degree_stats(&values)?;
        stat.push((mx - first) / scale);
        loc.push((lo + arg - 1) as f64 / loc_norm);
    }

    let ks_gumbel =
        ks_statistic(&stat, |x| (-(-(x - gumbel_loc)).exp()).exp())?;
    let ks_loc = ks_statistic(&loc, |x| {
        ppp::location_window_cdf(window.s, window.t, x).unwrap_or(if x <= window.s {
            0.0
        } else {
            1.0
        })
    })?;

    let prediction = serde_json::json!({
        "regime": format!("{:?}", cfg.family.classify()),
        "window": window,
        "index_range": [lo, hi],
        "center": first,
        "scale": scale,
        "gumbel_location": gumbel_loc,
    });
    Ok(ExperimentReport {
        plan: plan.clone(),
        observables: vec![
            Observable::new("window_statistic", stat)?,
            Observable::new("window_location", loc)?,
        ],
        statistics: vec![
            NamedStatistic { name: "ks_vs_gumbel".into(), kind: "ks".into(), value: ks_gumbel },
            NamedStatistic { name: "ks_location_vs_exp_u".into(), kind: "ks".into(), value: ks_loc },
        ],
        prediction,
        seeds,
        wall_clock_ms: start.elapsed().as_millis() as u64,
    })
}

fn rv_params(family: &WeightFamily) -> Result<(f64, f64, f64, f64)> {
    family
        .rv_effective()
        .ok_or_else(|| Error::Domain("family is not in the Rv sub-case".into()))
}

/// Full-index second-order statistic across the size ladder.
pub fn run_second_order(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    plan.validate()?;
    let start = Instant::now();
    let cfg = &plan.config;
    let mf = cfg.m as f64;

    let (target, class) = match cfg.family.classify() {
        MdaClass::GumbelRv => {
            let (tau, _, _, _) = rv_params(&cfg.family)?;
            if tau > 1.0 {
                return Err(Error::Domain(
                    "the Rv second-order constant is proved for tau in (0,1]".into(),
                ));
            }
            (0.5, MdaClass::GumbelRv)
        }
        MdaClass::GumbelRav => {
            let (tau, c1, _, _) = cfg.family.rav_params().expect("rav");
            (theory::rav_second_order_coefficient(tau, c1)?, MdaClass::GumbelRav)
        }
        other => {
            return Err(Error::Domain(format!(
                "no second-order prediction in regime {other:?}"
            )))
        }
    };

    let sizes = plan.sizes();
    let last_size = *sizes.last().expect("nonempty ladder");
    let mut observables = Vec::new();
    let mut medians = Vec::new();
    let mut seeds = Vec::new();
    for &n in &sizes {
        let nf = n as f64;
        let ln_n = nf.ln();
        let (first, denom) = match class {
            MdaClass::GumbelRv => {
                let (tau, _, _, _) = rv_params(&cfg.family)?;
                let g = theory::gamma_exponent(tau);
                let (ag, bg) = cfg.family.rv_norming_at(nf.powf(g)).expect("rv");
                (mf * (1.0 - g) * bg * ln_n, mf * (1.0 - g) * ag * ln_n * ln_n.ln())
            }
            MdaClass::GumbelRav => {
                let (tau, _, _, _) = cfg.family.rav_params().expect("rav");
                let seqs = cfg.family.norm_seqs(n as u64, cfg.m)?;
                let t_n = seqs.t_n.expect("t_n");
                let (at, bt) = theory::rav_norming_checked(&cfg.family, t_n * nf)?;
                let ln_inv = -t_n.ln();
                let growth_term = if tau <= 3.0 {
                    ln_n.ln()
                } else {
                    ln_n.powf(1.0 - 3.0 / tau)
                };
                (mf * bt * ln_inv, mf * at * ln_inv * growth_term)
            }
            _ => unreachable!(),
        };
        let mut stat = Vec::with_capacity(plan.replicas);
        for r in 0..plan.replicas {
            let seed = replica_seed(plan.base_seed, r as u64);
            if n == last_size {
                seeds.push(seed);
            }
            let mx = match plan.mode {
                StatisticMode::CondMeans => {
                    let (weights, harmonic) = sampled_profile(&cfg.family, n, seed);
                    let hn = harmonic[n - 1];
                    weights
                        .iter()
                        .zip(harmonic.iter())
                        .map(|(&w, &h)| mf * w * (hn - h))
                        .fold(f64::NEG_INFINITY, f64::max)
                }
                StatisticMode::Degrees => {
                    let snap = grow_replica(plan, n, r as u64)?;
                    *snap.in_degrees.iter().max().expect("nonempty") as f64
                }
            };
            stat.push((mx - first) / denom);
        }
        medians.push(median(&stat)?);
        observables.push(Observable::new(format!("second_order_stat_n{n}"), stat)?);
    }

    let statistics = vec![
        NamedStatistic { name: "target".into(), kind: "constant".into(), value: target },
        NamedStatistic {
            name: "final_median".into(),
            kind: "median".into(),
            value: *medians.last().expect("nonempty ladder"),
        },
        NamedStatistic {
            name: "first_median".into(),
            kind: "median".into(),
            value: medians[0],
        },
    ];
    let prediction = serde_json::json!({
        "regime": format!("{:?}", class),
        "target_constant": target,
        "ladder": plan.sizes(),
        "medians": medians,
    });
    Ok(ExperimentReport {
        plan: plan.clone(),
        observables,
        statistics,
        prediction,
        seeds,
        wall_clock_ms: start.elapsed().as_millis() as u64,
    })
}

/// Concentration of the maximum degree around the maximum conditional mean.
pub fn run_concentration(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    plan.validate()?;
    let start = Instant::now();
    let cfg = &plan.config;
    let mf = cfg.m as f64;
    let class = cfg.family.classify();
    if !matches!(class, MdaClass::GumbelSv | MdaClass::GumbelRv | MdaClass::GumbelRav) {
        return Err(Error::Domain(format!("concentration statistic wants a Gumbel regime, got {class:?}")));
    }

    let sizes = plan.sizes();
    let last_size = *sizes.last().expect("nonempty ladder");
    let mut observables = Vec::new();
    let mut medians = Vec::new();
    let mut seeds = Vec::new();
    for &n in &sizes {
        let nf = n as f64;
        let seqs = cfg.family.norm_seqs(n as u64, cfg.m)?;
        let g_n = match class {
            MdaClass::GumbelSv | MdaClass::GumbelRv => {
                mf * seqs.b_n.expect("b_n") * nf.ln()
            }
            MdaClass::GumbelRav => {
                let t_n = seqs.t_n.expect("t_n");
                let (at, _) = theory::rav_norming_checked(&cfg.family, t_n * nf)?;
                mf * at * (-t_n.ln())
            }
            _ => unreachable!(),
        };
        let mut stat = Vec::with_capacity(plan.replicas);
        for r in 0..plan.replicas {
            let snap = grow_replica(plan, n, r as u64)?;
            if n == last_size {
                seeds.push(snap.seed);
            }
            let cond = growth::cond_mean_degrees(&snap);
            let dev = snap
                .in_degrees
                .iter()
                .zip(cond.iter())
                .map(|(&z, &e)| (z as f64 - e).abs())
                .fold(0.0f64, f64::max);
            stat.push(dev / g_n);
        }
        medians.push(median(&stat)?);
        observables.push(Observable::new(format!("concentration_stat_n{n}"), stat)?);
    }

    let prediction = serde_json::json!({
        "regime": format!("{:?}", class),
        "ladder": plan.sizes(),
        "medians": medians,
    });
    let statistics = vec![NamedStatistic {
        name: "final_median".into(),
        kind: "median".into(),
        value: *medians.last().expect("nonempty"),
    }];
    Ok(ExperimentReport {
        plan: plan.clone(),
        observables,
        statistics,
        prediction,
        seeds,
        wall_clock_ms: start.elapsed().as_millis() as u64,
    })
}

/// Zero-in-degree fraction across the ladder with the fitted decay exponent
/// of the nonzero fraction.
pub fn run_zero_degree_fraction(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    plan.validate()?;
    let start = Instant::now();
    let cfg = &plan.config;
    let (alpha, x_min) = match cfg.family.class() {
        crate::weights::WeightClass::FrechetPareto { alpha, x_min } => (*alpha, *x_min),
        _ => {
            return Err(Error::Domain(
                "zero-degree experiment wants a FrechetPareto family".into(),
            ))
        }
    };
    if !(1.0 < alpha && alpha < 2.0) {
        return Err(Error::Domain(format!("zero-degree regime needs alpha in (1,2), got {alpha}")));
    }
    if x_min <= 0.0 {
        return Err(Error::Domain("weights must be bounded away from zero".into()));
    }
    let predicted_exponent = ((2.0 - alpha).min(alpha - 1.0)) / alpha;

    let sizes = plan.sizes();
    let last_size = *sizes.last().expect("nonempty ladder");
    let mut observables = Vec::new();
    let mut mean_nonzero = Vec::new();
    let mut seeds = Vec::new();
    for &n in &sizes {
        let mut fr = Vec::with_capacity(plan.replicas);
        for r in 0..plan.replicas {
            let snap = grow_replica(plan, n, r as u64)?;
            if n == last_size {
                seeds.push(snap.seed);
            }
            let zero = snap.in_degrees.iter().filter(|&&z| z == 0).count();
            fr.push(1.0 - zero as f64 / n as f64);
        }
        mean_nonzero.push(fr.iter().sum::<f64>() / fr.len() as f64);
        observables.push(Observable::new(format!("nonzero_fraction_n{n}"), fr)?);
    }

    let lx: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let ly: Vec<f64> = mean_nonzero.iter().map(|&f| f.max(f64::MIN_POSITIVE).ln()).collect();
    let slope = ls_slope(&lx, &ly)?;

    let prediction = serde_json::json!({
        "regime": "Frechet(1,2)",
        "bound_exponent": predicted_exponent,
        "ladder": plan.sizes(),
        "mean_nonzero_fractions": mean_nonzero,
    });
    let statistics = vec![
        NamedStatistic { name: "fitted_exponent".into(), kind: "slope".into(), value: -slope },
        NamedStatistic {
            name: "bound_exponent".into(),
            kind: "constant".into(),
            value: predicted_exponent,
        },
    ];
    Ok(ExperimentReport {
        plan: plan.clone(),
        observables,
        statistics,
        prediction,
        seeds,
        wall_clock_ms: start.elapsed().as_millis() as u64,
    })
}
