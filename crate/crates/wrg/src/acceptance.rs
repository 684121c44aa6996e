//! The acceptance suite: twelve numbered criteria pinning the toolkit's
//! behaviour against the limit theory at desk scale. Every tolerance is
//! fixed here; `verify` in the CLI and the `acceptance` integration test
//! both call into this module and print one pass/fail line per criterion.

use crate::error::Result;
use crate::experiments::{
    self, replica_seed, ExperimentKind, ExperimentPlan, LadderFn, StatisticMode, WindowScale,
    WindowSpec,
};
use crate::fenwick::Kahan;
use crate::growth::{self, WrgConfig};
use crate::ppp;
use crate::stats::{ks_two_sample, median, tv_distance};
use crate::theory;
use crate::weights::{WeightClass, WeightFamily};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

/// Base seed for the whole suite; chosen once (the suite's build date),
/// not tuned per criterion.
pub const DEFAULT_BASE_SEED: u64 = 20_260_810;

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {:<28} ({:.1}s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.details.join("; ")
        )
    }
}

pub const CRITERIA: [(u32, &str); 12] = [
    (1, "rrt_degree_law"),
    (2, "pk_quadrature_vs_mc"),
    (3, "bounded_max_degree"),
    (4, "gumbel_rv_first_order"),
    (5, "gumbel_window_limit"),
    (6, "frechet_limit_law"),
    (7, "ppp_self_consistency"),
    (8, "z_functional"),
    (9, "sampler_oracle"),
    (10, "concentration_regression"),
    (11, "second_order_constants"),
    (12, "zero_degree_fraction"),
];

/// Run one criterion; errors are folded into a failed report.
pub fn run_criterion(id: u32, base_seed: u64) -> CriterionReport {
    let start = Instant::now();
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .unwrap_or("unknown");
    let seed = replica_seed(base_seed, id as u64);
    let result = match id {
        1 => c01_rrt_degree_law(seed),
        2 => c02_pk_quadrature_vs_mc(seed),
        3 => c03_bounded_max_degree(seed),
        4 => c04_gumbel_rv_first_order(seed),
        5 => c05_gumbel_window_limit(seed),
        6 => c06_frechet_limit_law(seed),
        7 => c07_ppp_self_consistency(seed),
        8 => c08_z_functional(seed),
        9 => c09_sampler_oracle(seed),
        10 => c10_concentration(seed),
        11 => c11_second_order_constants(seed),
        12 => c12_zero_degree_fraction(seed),
        _ => Err(crate::Error::Domain(format!("no criterion {id}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    match result {
        Ok((passed, details)) => CriterionReport { id, name, passed, details, seconds },
        Err(e) => CriterionReport {
            id,
            name,
            passed: false,
            details: vec![format!("error: {e}")],
            seconds,
        },
    }
}

pub fn run_all(base_seed: u64) -> Vec<CriterionReport> {
    (1..=12).map(|id| run_criterion(id, base_seed)).collect()
}

type Outcome = Result<(bool, Vec<String>)>;

fn check(details: &mut Vec<String>, ok: bool, msg: String) -> bool {
    details.push(format!("{} [{}]", msg, if ok { "ok" } else { "FAIL" }));
    ok
}

/// 1. RRT degree law: Constant(1), m=1, n=1e5, 50 replicas; pooled TV to the
/// geometric law 2^{-(k+1)} on k <= 30 below 0.01; under 30 s.
fn c01_rrt_degree_law(seed: u64) -> Outcome {
    let start = Instant::now();
    let cfg = WrgConfig::new(100_000, 1, WeightFamily::constant(1.0)?, 0);
    let mut plan = ExperimentPlan::new(ExperimentKind::DegreeDist, cfg, 50, seed);
    plan.kmax = 30;
    let report = experiments::run(&plan)?;
    // independent oracle: the geometric law itself
    let geometric: Vec<f64> = (0..=30).map(|k| 0.5f64.powi(k + 1)).collect();
    let pk: Vec<f64> = (0..=30)
        .map(|k| theory::pk_limit(&plan.config.family, 1, k))
        .collect::<Result<_>>()?;
    let tv_theory_vs_geometric = tv_distance(&pk, &geometric);
    let tv = report.statistic("tv_pooled").expect("tv_pooled");
    let secs = start.elapsed().as_secs_f64();
    let mut details = Vec::new();
    let mut ok = check(&mut details, tv < 0.01, format!("pooled TV {tv:.5} < 0.01"));
    ok &= check(
        &mut details,
        tv_theory_vs_geometric < 1e-10,
        format!("pk_limit vs geometric TV {tv_theory_vs_geometric:.2e} < 1e-10"),
    );
    ok &= check(&mut details, secs < 30.0, format!("runtime {secs:.1}s < 30s"));
    Ok((ok, details))
}

/// 2. Quadrature vs Monte Carlo for FrechetPareto(3, mean 1): p(k) within 4
/// MC sigma for m in {1,2}, k in {0,1,5,20}; p(0) at m=1 equals (ln 3)/2 to
/// 1e-9.
fn c02_pk_quadrature_vs_mc(seed: u64) -> Outcome {
    let family = WeightFamily::pareto_unit_mean(3.0)?;
    let mut details = Vec::new();
    let p0 = theory::pk_limit(&family, 1, 0)?;
    let exact = 0.5 * 3.0f64.ln();
    let mut ok = check(
        &mut details,
        (p0 - exact).abs() < 1e-9,
        format!("p(0) = {p0:.12} vs (ln 3)/2 = {exact:.12}"),
    );

    let n = 1_000_000usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<f64> = (0..n).map(|_| family.sample(&mut rng)).collect();
    for &m in &[1u32, 2] {
        let mu = family.mean() / m as f64;
        for &k in &[0u64, 1, 5, 20] {
            let mut acc = 0.0;
            let mut acc2 = 0.0;
            for &w in &draws {
                let g = (mu.ln() + k as f64 * w.ln() - (k as f64 + 1.0) * (mu + w).ln()).exp();
                acc += g;
                acc2 += g * g;
            }
            let mc = acc / n as f64;
            let sigma = (((acc2 / n as f64) - mc * mc).max(0.0) / n as f64).sqrt();
            let p = theory::pk_limit(&family, m, k)?;
            ok &= check(
                &mut details,
                (p - mc).abs() < 4.0 * sigma + 1e-12,
                format!("m={m} k={k}: |{p:.3e} - {mc:.3e}| < 4*{sigma:.1e}"),
            );
        }
    }
    Ok((ok, details))
}

/// 3. Bounded max degree: RRT ladder medians of max Z / ln n approach
/// 1/ln 2, within [1.2, 1.7] at n = 1e7, in under 5 minutes. The approach is
/// asserted up to the integer granularity 0.5/ln n of the statistic.
fn c03_bounded_max_degree(seed: u64) -> Outcome {
    let start = Instant::now();
    let target = 1.0 / 2.0f64.ln();
    let family = WeightFamily::constant(1.0)?;
    let mut medians = Vec::new();
    let ladder = [10_000usize, 100_000, 1_000_000, 10_000_000];
    for (li, &n) in ladder.iter().enumerate() {
        let mut ratios = Vec::new();
        for r in 0..20u64 {
            let cfg = WrgConfig::new(n, 1, family.clone(), replica_seed(seed, ((li as u64) << 8) | r));
            let snap = growth::grow(&cfg)?;
            let (mx, _) = growth::max_degree_stats(&snap.in_degrees)?;
            ratios.push(mx as f64 / (n as f64).ln());
        }
        medians.push(median(&ratios)?);
    }
    let mut details = vec![format!(
        "medians {:?} vs 1/ln2 = {target:.4}",
        medians.iter().map(|m| format!("{m:.4}")).collect::<Vec<_>>()
    )];
    let final_med = *medians.last().expect("ladder");
    let mut ok = check(
        &mut details,
        (1.2..=1.7).contains(&final_med),
        format!("final median {final_med:.4} in [1.2, 1.7]"),
    );
    let mut approach = true;
    for (li, w) in medians.windows(2).enumerate() {
        let slack = 0.5 / (ladder[li + 1] as f64).ln();
        if (w[1] - target).abs() > (w[0] - target).abs() + slack {
            approach = false;
        }
    }
    ok &= check(&mut details, approach, "deviations nonincreasing (integer-granularity slack)".into());
    let secs = start.elapsed().as_secs_f64();
    ok &= check(&mut details, secs < 300.0, format!("runtime {secs:.0}s < 300s"));
    Ok((ok, details))
}

/// Conditional-mean max and its location for one weight replica.
fn cond_mean_profile(
    family: &WeightFamily,
    m: u32,
    n: usize,
    seed: u64,
) -> Result<(f64, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..n).map(|_| family.sample(&mut rng)).collect();
    let mut s = Kahan::default();
    let mut h = Kahan::default();
    let mut harmonic = Vec::with_capacity(n);
    harmonic.push(0.0);
    s.add(weights[0]);
    for w in weights.iter().skip(1) {
        h.add(1.0 / s.value());
        harmonic.push(h.value());
        s.add(*w);
    }
    let hn = harmonic[n - 1];
    let mf = m as f64;
    let mut best = f64::NEG_INFINITY;
    let mut arg = 0usize;
    for i in 0..n {
        let v = mf * weights[i] * (hn - harmonic[i]);
        if v > best {
            best = v;
            arg = i;
        }
    }
    Ok((best, arg + 1))
}

/// 4. Gumbel Rv first order through exact conditional means: median of
/// max_i E_W[Z_n(i)] / ((1-gamma) b_{n^gamma} log n) in [0.7, 1.3] and the
/// location exponent in [0.4, 0.6] at n = 1e6 over 50 replicas.
fn c04_gumbel_rv_first_order(seed: u64) -> Outcome {
    let family = WeightFamily::new(
        WeightClass::GumbelRv { tau: 1.0, c1: 1.0, a: 1.0, b: 0.0 },
        true,
    )?;
    let n = 1_000_000usize;
    let pred = theory::max_degree_prediction(&family, 1, n as u64)?;
    let mut ratios = Vec::new();
    let mut exps = Vec::new();
    for r in 0..50u64 {
        let (mx, arg) = cond_mean_profile(&family, 1, n, replica_seed(seed, r))?;
        ratios.push(mx / pred.first_order);
        exps.push((arg as f64).ln() / (n as f64).ln());
    }
    let med_ratio = median(&ratios)?;
    let med_exp = median(&exps)?;
    let mut details = Vec::new();
    let mut ok = check(
        &mut details,
        (0.7..=1.3).contains(&med_ratio),
        format!("median cond-mean ratio {med_ratio:.4} in [0.7, 1.3]"),
    );
    ok &= check(
        &mut details,
        (0.4..=0.6).contains(&med_exp),
        format!("median location exponent {med_exp:.4} in [0.4, 0.6] (limit 0.5)"),
    );
    Ok((ok, details))
}

/// 5. Gumbel window limit: tau=1/2, ell = 1, window s=1, t=e, n=1e6, 500
/// conditional-mean replicas; KS to the standard Gumbel below 0.08.
fn c05_gumbel_window_limit(seed: u64) -> Outcome {
    let family = WeightFamily::new(
        WeightClass::GumbelRv { tau: 0.5, c1: 1.0, a: 1.0, b: 0.0 },
        true,
    )?;
    let cfg = WrgConfig::new(1_000_000, 1, family, 0);
    let mut plan = ExperimentPlan::new(ExperimentKind::WindowGumbel, cfg, 500, seed);
    plan.window = Some(WindowSpec {
        scale: WindowScale::PowerGamma,
        s: 1.0,
        t: std::f64::consts::E,
        ell: LadderFn::One,
    });
    plan.mode = StatisticMode::CondMeans;
    let report = experiments::run(&plan)?;
    let ks = report.statistic("ks_vs_gumbel").expect("ks");
    let ks_loc = report.statistic("ks_location_vs_exp_u").expect("ks loc");
    let mut details = Vec::new();
    let ok = check(&mut details, ks < 0.08, format!("KS vs Gumbel(0) {ks:.4} < 0.08"));
    details.push(format!("location KS vs exp(U) {ks_loc:.4} (reported)"));
    Ok((ok, details))
}

/// 6. Frechet limit law at alpha=3, mean 1, n=1e5, 500 replicas: median of
/// max Z / u_n within 25% of sqrt(2/ln 2); KS to the Frechet limit < 0.15;
/// location KS vs I_alpha < 0.1.
fn c06_frechet_limit_law(seed: u64) -> Outcome {
    let family = WeightFamily::pareto_unit_mean(3.0)?;
    let cfg = WrgConfig::new(100_000, 1, family, 0);
    let plan = ExperimentPlan::new(ExperimentKind::FrechetLimit, cfg, 500, seed);
    let report = experiments::run(&plan)?;
    let med = report.statistic("median_ratio").expect("median");
    let ks_max = report.statistic("ks_max_vs_frechet").expect("ks max");
    let ks_loc = report.statistic("ks_location_vs_i_alpha").expect("ks loc");
    let target = (2.0 / 2.0f64.ln()).sqrt();
    let mut details = Vec::new();
    let mut ok = check(
        &mut details,
        (med - target).abs() <= 0.25 * target,
        format!("median max Z/u_n {med:.4} within 25% of {target:.4}"),
    );
    ok &= check(&mut details, ks_max < 0.15, format!("KS vs Frechet law {ks_max:.4} < 0.15"));
    ok &= check(&mut details, ks_loc < 0.1, format!("location KS vs I_alpha {ks_loc:.4} < 0.1"));
    Ok((ok, details))
}

/// 7. PPP self-consistency: truncated-PPP window-max sampler vs closed-form
/// inversion over 1e5 draws (two-sample KS < 0.01) and ratio invariance
/// between windows (1,2) and (10,20) (KS < 0.01).
fn c07_ppp_self_consistency(seed: u64) -> Outcome {
    let n = 100_000usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ppp12: Vec<f64> =
        (0..n).map(|_| ppp::gumbel_window_max_sample_ppp(1.0, 2.0, -10.0, &mut rng)).collect::<Result<_>>()?;
    let inv12: Vec<f64> =
        (0..n).map(|_| ppp::gumbel_window_max_sample(1.0, 2.0, &mut rng)).collect::<Result<_>>()?;
    let ppp1020: Vec<f64> =
        (0..n).map(|_| ppp::gumbel_window_max_sample_ppp(10.0, 20.0, -10.0, &mut rng)).collect::<Result<_>>()?;
    let d_samplers = ks_two_sample(&ppp12, &inv12)?;
    let d_ratio = ks_two_sample(&ppp12, &ppp1020)?;
    let mut details = Vec::new();
    let mut ok = check(
        &mut details,
        d_samplers < 0.01,
        format!("PPP vs inversion two-sample KS {d_samplers:.4} < 0.01"),
    );
    ok &= check(
        &mut details,
        d_ratio < 0.01,
        format!("(1,2) vs (10,20) ratio-invariance KS {d_ratio:.4} < 0.01"),
    );
    Ok((ok, details))
}

/// 8. Z functional: the hand-computed two-point example to 1e-12, and g_min
/// sensitivity of the sampler (1e-2 vs 1e-3, alpha=1.5, 1e4 samples) with a
/// median shift below 5%.
fn c08_z_functional(seed: u64) -> Outcome {
    let z = ppp::z_functional(&[(0.25, 2.0), (0.5, 1.0)], 1)?;
    let mut details = Vec::new();
    let mut ok = check(
        &mut details,
        (z - 7.0 / 12.0).abs() < 1e-12,
        format!("two-point example {z:.15} = 7/12 +- 1e-12"),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 10_000usize;
    let coarse: Vec<f64> = (0..n).map(|_| ppp::z_sampler(1.5, 1, 1e-2, &mut rng)).collect::<Result<_>>()?;
    let fine: Vec<f64> = (0..n).map(|_| ppp::z_sampler(1.5, 1, 1e-3, &mut rng)).collect::<Result<_>>()?;
    let mc = median(&coarse)?;
    let mfi = median(&fine)?;
    let shift = (mc - mfi).abs() / mfi;
    ok &= check(
        &mut details,
        shift < 0.05,
        format!("g_min sensitivity: medians {mc:.4} vs {mfi:.4}, shift {:.2}% < 5%", 100.0 * shift),
    );
    Ok((ok, details))
}

/// 9. Sampler oracle: Fenwick and linear-scan index sequences identical over
/// 1e6 draws on 1e6 random weights; the degree-sum invariant is enforced on
/// every growth replica in the suite.
fn c09_sampler_oracle(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 1_000_000usize;
    let weights: Vec<f64> = (0..n)
        .map(|_| loop {
            let u: f64 = rng.gen();
            if u > 0.0 {
                break u;
            }
        })
        .collect();
    let result = growth::sampler_oracle_check(&weights, 1_000_000, &mut rng);
    let mut details = Vec::new();
    let mut ok = check(
        &mut details,
        result.is_ok(),
        match &result {
            Ok(()) => "1e6 Fenwick vs linear-scan draws identical".to_string(),
            Err(m) => format!(
                "first divergence at draw {} (u={}, fenwick {}, linear {})",
                m.draw, m.u, m.fenwick_index, m.linear_index
            ),
        },
    );
    // degree-sum conservation on a direct growth run of each variant
    let cfg = WrgConfig::new(50_000, 3, WeightFamily::pareto_unit_mean(3.0)?, seed);
    let snap = growth::grow(&cfg)?;
    let total: u64 = snap.in_degrees.iter().sum();
    ok &= check(
        &mut details,
        total == 3 * (50_000 - 1),
        format!("degree sum {total} = m(n-1) (also enforced on every suite replica)"),
    );
    Ok((ok, details))
}

/// 10. Concentration regression: GumbelRv(tau=1) ladder medians of
/// max |Z - E_W Z| / (b_n log n) strictly decreasing with final value < 0.2.
fn c10_concentration(seed: u64) -> Outcome {
    let family = WeightFamily::new(
        WeightClass::GumbelRv { tau: 1.0, c1: 1.0, a: 1.0, b: 0.0 },
        true,
    )?;
    let cfg = WrgConfig::new(1_000_000, 1, family, 0);
    let mut plan = ExperimentPlan::new(ExperimentKind::Concentration, cfg, 50, seed);
    plan.ladder = vec![10_000, 100_000, 1_000_000];
    let report = experiments::run(&plan)?;
    let medians: Vec<f64> = plan
        .ladder
        .iter()
        .map(|n| {
            median(&report.observable(&format!("concentration_stat_n{n}")).expect("obs").values)
                .expect("median")
        })
        .collect();
    let mut details = vec![format!(
        "ladder medians {:?}",
        medians.iter().map(|m| format!("{m:.4}")).collect::<Vec<_>>()
    )];
    let decreasing = medians.windows(2).all(|w| w[1] < w[0]);
    let mut ok = check(&mut details, decreasing, "medians strictly decreasing".into());
    let last = *medians.last().expect("ladder");
    ok &= check(&mut details, last < 0.2, format!("final median {last:.4} < 0.2"));
    Ok((ok, details))
}

/// 11. Second-order constants via conditional means. Rv tau=1: the
/// full-index statistic at n=1e7 must lie in [0.3, 0.7] around the target
/// 1/2; Rav tau=2 in [0.1, 0.4] around 1/4; both ladders must move toward
/// their targets.
fn c11_second_order_constants(seed: u64) -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;

    // Rv tau = 1, target 1/2. The statistic's replica spread is wide
    // (IQR ~ 0.8), so medians need ~50 replicas per rung to be stable.
    let rv = WeightFamily::new(
        WeightClass::GumbelRv { tau: 1.0, c1: 1.0, a: 1.0, b: 0.0 },
        true,
    )?;
    let cfg = WrgConfig::new(10_000_000, 1, rv, 0);
    let mut plan = ExperimentPlan::new(ExperimentKind::MaxDegreeSecondOrder, cfg, 48, seed);
    plan.mode = StatisticMode::CondMeans;
    plan.ladder = vec![10_000, 100_000, 1_000_000, 10_000_000];
    let report = experiments::run(&plan)?;
    let first = report.statistic("first_median").expect("first");
    let last = report.statistic("final_median").expect("final");
    details.push(format!("Rv ladder first/final medians {first:.4} / {last:.4} (target 0.5)"));
    ok &= check(&mut details, (0.3..=0.7).contains(&last), format!("Rv final {last:.4} in [0.3, 0.7]"));
    ok &= check(
        &mut details,
        (last - 0.5).abs() < (first - 0.5).abs(),
        "Rv trend toward 1/2".into(),
    );

    // Rav tau = 2, target 1/4; the n=1e4 rung is omitted because t_n n < 2
    // there (the first-order location window sits below vertex 1).
    let rav = WeightFamily::new(
        WeightClass::GumbelRav { tau: 2.0, c1: 1.0, a: 1.0, b: 0.0 },
        true,
    )?;
    let cfg = WrgConfig::new(10_000_000, 1, rav, 0);
    let mut plan = ExperimentPlan::new(ExperimentKind::MaxDegreeSecondOrder, cfg, 48, seed ^ 0x0052_4156);
    plan.mode = StatisticMode::CondMeans;
    plan.ladder = vec![100_000, 1_000_000, 10_000_000];
    let report = experiments::run(&plan)?;
    let first = report.statistic("first_median").expect("first");
    let last = report.statistic("final_median").expect("final");
    details.push(format!("Rav ladder first/final medians {first:.4} / {last:.4} (target 0.25)"));
    ok &= check(&mut details, (0.1..=0.4).contains(&last), format!("Rav final {last:.4} in [0.1, 0.4]"));
    ok &= check(
        &mut details,
        (last - 0.25).abs() < (first - 0.25).abs(),
        "Rav trend toward 1/4".into(),
    );
    Ok((ok, details))
}

/// 12. Zero-degree fraction at alpha = 1.5: the fitted decay exponent of the
/// nonzero fraction across the ladder must lie within 0.15 of 1/3.
fn c12_zero_degree_fraction(seed: u64) -> Outcome {
    let family = WeightFamily::new(
        WeightClass::FrechetPareto { alpha: 1.5, x_min: 1.0 },
        false,
    )?;
    let cfg = WrgConfig::new(10_000_000, 1, family, 0);
    let mut plan = ExperimentPlan::new(ExperimentKind::ZeroDegreeFraction, cfg, 12, seed);
    plan.ladder = vec![10_000, 100_000, 1_000_000, 10_000_000];
    let report = experiments::run(&plan)?;
    let fitted = report.statistic("fitted_exponent").expect("fitted");
    let bound = report.statistic("bound_exponent").expect("bound");
    let mut details = vec![format!("fitted exponent {fitted:.4}, stated exponent {bound:.4}")];
    let ok = check(
        &mut details,
        (fitted - bound).abs() <= 0.15,
        format!("|{fitted:.4} - 1/3| <= 0.15"),
    );
    Ok((ok, details))
}
