//! `wrg`: grow weighted recursive graphs, tabulate the limit theory, sample
//! the point-process limit objects, run replicated experiments, and verify
//! the acceptance suite.
//!
//! Flags override config-file values; every run logs the fully resolved
//! configuration (use --dump-config to persist it for exact replay).

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use std::process::ExitCode;
use wrg::config::ConfigMap;
use wrg::error::Error;
use wrg::experiments::{
    ExperimentKind, ExperimentPlan, LadderFn, StatisticMode, WindowScale, WindowSpec,
};
use wrg::growth::{self, Variant, WrgConfig};
use wrg::theory;
use wrg::{acceptance, ppp};

#[derive(Parser)]
#[command(name = "wrg", version, about = "Weighted recursive graph simulation and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grow one graph and export the snapshot (CSV + JSON header).
    Simulate(SimulateArgs),
    /// Emit the limiting degree-distribution table and max-degree prediction.
    Theory(TheoryArgs),
    /// Sample the PPP limit objects or tabulate their CDFs.
    Ppp(PppArgs),
    /// Run a replicated Monte Carlo experiment and persist the report.
    Experiment(ExperimentArgs),
    /// Run the acceptance suite; exit 0 iff every criterion passes.
    Verify(VerifyArgs),
}

#[derive(Args, Clone, Default)]
struct FamilyArgs {
    /// Config file with key=value pairs; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Family name: constant|atom|bounded_weibull|bounded_gumbel_rv|gumbel_sv|gumbel_rv|gumbel_rav|frechet_pareto
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    q0: Option<f64>,
    /// Upper end of the uniform base of the atom family.
    #[arg(long)]
    base_s: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    x_min: Option<f64>,
    #[arg(long)]
    normalize_mean: Option<bool>,
}

impl FamilyArgs {
    /// Config file first, then flag overrides.
    fn resolve(&self) -> Result<ConfigMap, Error> {
        let mut map = match &self.config {
            Some(path) => ConfigMap::parse(&std::fs::read_to_string(path)?)?,
            None => ConfigMap::default(),
        };
        if let Some(v) = &self.family {
            map.set("family", v);
        }
        macro_rules! over {
            ($($key:literal => $field:ident),*) => {
                $(if let Some(v) = self.$field { map.set($key, v); })*
            };
        }
        over!("c" => c, "q0" => q0, "base_s" => base_s, "tau" => tau, "c1" => c1,
              "a" => a, "b" => b, "alpha" => alpha, "x_min" => x_min,
              "normalize_mean" => normalize_mean);
        Ok(map)
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// fixed: m half-edges per arrival; random: connect to every vertex
    /// independently (Theta(n^2), capped).
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    random_out_cap: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    /// Write the fully resolved configuration next to the outputs.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct TheoryArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    kmax: Option<u64>,
    /// Graph size for the max-degree prediction record.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PppArgs {
    /// gumbel_window | gumbel_window_ppp | frechet_max | kth_largest |
    /// z_sample | i_alpha | window_location
    #[arg(long)]
    functional: String,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// K for the K-th largest CDF.
    #[arg(long)]
    rank: Option<u32>,
    #[arg(long, default_value_t = 10_000)]
    count: usize,
    #[arg(long)]
    g_min: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// degree_dist | max_first_order | second_order | window_gumbel |
    /// frechet_limit | concentration | zero_degree | location_scaling
    #[arg(long)]
    kind: String,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    replicas: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    window_s: Option<f64>,
    #[arg(long)]
    window_t: Option<f64>,
    /// Window scaling: a value in (0,1) selects the n^gamma window; the
    /// string "tn" selects the t_n n window.
    #[arg(long)]
    window_gamma: Option<String>,
    /// zeta0 of ell(n) = exp(sqrt(zeta0 log n)); omitted means ell = 1.
    #[arg(long)]
    window_zeta0: Option<f64>,
    #[arg(long)]
    kmax: Option<u64>,
    /// degrees | cond_means
    #[arg(long)]
    mode: Option<String>,
    /// Comma-separated size ladder for trend experiments.
    #[arg(long)]
    ladder: Option<String>,
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Only the primary suite exists.
    #[arg(long, default_value = "primary")]
    suite: String,
    /// Base seed for the suite; required so that every run is reproducible.
    #[arg(long)]
    seed: Option<u64>,
}

fn parse_variant(v: Option<&str>) -> Result<Variant, Error> {
    match v.unwrap_or("fixed") {
        "fixed" => Ok(Variant::FixedOutDegree),
        "random" => Ok(Variant::RandomOutDegree),
        other => Err(Error::Parse(format!("unknown variant `{other}` (fixed|random)"))),
    }
}

fn resolved_run_value<T: Copy>(flag: Option<T>, cfg: Option<T>, default: T) -> T {
    flag.or(cfg).unwrap_or(default)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage problems exit 1 per the interface contract
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Theory(args) => theory_cmd(args),
        Command::Ppp(args) => ppp_cmd(args),
        Command::Experiment(args) => experiment(args),
        Command::Verify(args) => verify(args),
    }
}

fn simulate(args: SimulateArgs) -> Result<ExitCode, Error> {
    let mut map = args.family.resolve()?;
    if let Some(n) = args.n {
        map.set("n", n);
    }
    if let Some(m) = args.m {
        map.set("m", m);
    }
    if let Some(seed) = args.seed {
        map.set("seed", seed);
    }
    if let Some(v) = &args.variant {
        map.set("variant", v);
    }
    if let Some(cap) = args.random_out_cap {
        map.set("random_out_cap", cap);
    }
    let family = map.family()?;
    let n = map.get_u64("n")?.unwrap_or(1_000) as usize;
    let m = map.get_u64("m")?.unwrap_or(1) as u32;
    let seed = map.get_u64("seed")?.unwrap_or(0);
    let variant = parse_variant(map.get("variant"))?;
    let mut config = WrgConfig::new(n, m, family, seed);
    config.variant = variant;
    if let Some(cap) = map.get_u64("random_out_cap")? {
        config.random_out_cap = cap as usize;
    }

    std::fs::create_dir_all(&args.out)?;
    // log the resolved configuration
    let mut resolved = map.clone();
    resolved.set("n", n);
    resolved.set("m", m);
    resolved.set("seed", seed);
    resolved.set(
        "variant",
        match variant {
            Variant::FixedOutDegree => "fixed",
            Variant::RandomOutDegree => "random",
        },
    );
    resolved.set_family(&config.family)?;
    println!("resolved configuration:\n{}", resolved.dump());
    if args.dump_config {
        std::fs::write(args.out.join("config.txt"), resolved.dump())?;
    }

    let snapshot = growth::grow(&config)?;
    let mut csv = std::fs::File::create(args.out.join("snapshot.csv"))?;
    growth::write_snapshot_csv(&snapshot, &mut csv)?;
    let mut header = std::fs::File::create(args.out.join("header.json"))?;
    growth::write_snapshot_header(&config, &mut header)?;
    let (max, arg) = growth::max_degree_stats(&snapshot.in_degrees)?;
    println!(
        "n={} m={} seed={}: max in-degree {} at vertex {}, harmonic residual {:.6}",
        n,
        m,
        seed,
        max,
        arg,
        growth::harmonic_residual(&snapshot).unwrap_or(f64::NAN)
    );
    Ok(ExitCode::SUCCESS)
}

fn theory_cmd(args: TheoryArgs) -> Result<ExitCode, Error> {
    let map = args.family.resolve()?;
    let family = map.family()?;
    let m = resolved_run_value(args.m, map.get_u64("m")?.map(|v| v as u32), 1);
    let kmax = resolved_run_value(args.kmax, map.get_u64("kmax")?, 30);
    let n = resolved_run_value(args.n, map.get_u64("n")?, 1_000_000);
    std::fs::create_dir_all(&args.out)?;

    let mut table = String::from("k,p_k,asymptotic_lower,asymptotic_upper\n");
    for k in 0..=kmax {
        let pk = theory::pk_limit(&family, m, k)?;
        let (lo, hi) = match theory::pk_asymptotic(&family, m, k.max(1)) {
            Ok(a) if k >= 1 => (format!("{:.16e}", a.lower), format!("{:.16e}", a.upper)),
            _ => (String::new(), String::new()),
        };
        table.push_str(&format!("{k},{pk:.16e},{lo},{hi}\n"));
    }
    std::fs::write(args.out.join("pk_table.csv"), table)?;

    let prediction = theory::max_degree_prediction(&family, m, n);
    let record = serde_json::json!({
        "family": family,
        "m": m,
        "n": n,
        "norm_seqs": family.norm_seqs(n, m).ok(),
        "max_degree_prediction": prediction.as_ref().ok(),
        "prediction_error": prediction.as_ref().err().map(|e| e.to_string()),
        "location": theory::location_prediction(&family, m).ok(),
        "theta_m": theory::theta_m(&family, m).ok(),
    });
    std::fs::write(
        args.out.join("prediction.json"),
        serde_json::to_string_pretty(&record)? + "\n",
    )?;
    println!("wrote pk_table.csv (k <= {kmax}) and prediction.json under {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn ppp_cmd(args: PppArgs) -> Result<ExitCode, Error> {
    std::fs::create_dir_all(&args.out)?;
    let seed = args.seed.unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut csv = String::new();
    let path = args.out.join(format!("{}.csv", args.functional));
    match args.functional.as_str() {
        "gumbel_window" | "gumbel_window_ppp" => {
            let s = args.s.ok_or_else(|| Error::Parameter("--s required".into()))?;
            let t = args.t.ok_or_else(|| Error::Parameter("--t required".into()))?;
            csv.push_str("sample\n");
            for _ in 0..args.count {
                let v = if args.functional == "gumbel_window" {
                    ppp::gumbel_window_max_sample(s, t, &mut rng)?
                } else {
                    ppp::gumbel_window_max_sample_ppp(s, t, -10.0, &mut rng)?
                };
                csv.push_str(&format!("{v:.16e}\n"));
            }
        }
        "frechet_max" | "kth_largest" => {
            let alpha = args.alpha.ok_or_else(|| Error::Parameter("--alpha required".into()))?;
            let rank = args.rank.unwrap_or(1);
            csv.push_str("x,cdf\n");
            for i in 1..=200 {
                let x = i as f64 * 0.05 * theory::frechet_limit_scale(alpha, args.m)?;
                let c = if args.functional == "frechet_max" {
                    ppp::frechet_max_cdf(alpha, args.m, x)?
                } else {
                    ppp::kth_largest_cdf(alpha, args.m, rank, x)?
                };
                csv.push_str(&format!("{x:.16e},{c:.16e}\n"));
            }
        }
        "z_sample" => {
            let alpha = args.alpha.ok_or_else(|| Error::Parameter("--alpha required".into()))?;
            let g_min = args.g_min.unwrap_or(1e-3);
            csv.push_str("sample\n");
            for _ in 0..args.count {
                csv.push_str(&format!("{:.16e}\n", ppp::z_sampler(alpha, args.m, g_min, &mut rng)?));
            }
        }
        "i_alpha" => {
            let alpha = args.alpha.ok_or_else(|| Error::Parameter("--alpha required".into()))?;
            csv.push_str("sample\n");
            for _ in 0..args.count {
                csv.push_str(&format!("{:.16e}\n", ppp::location_i_alpha_sample(alpha, &mut rng)?));
            }
        }
        "window_location" => {
            let s = args.s.ok_or_else(|| Error::Parameter("--s required".into()))?;
            let t = args.t.ok_or_else(|| Error::Parameter("--t required".into()))?;
            csv.push_str("sample\n");
            for _ in 0..args.count {
                csv.push_str(&format!("{:.16e}\n", ppp::location_window_sample(s, t, &mut rng)?));
            }
        }
        other => {
            return Err(Error::Parse(format!("unknown functional `{other}`")));
        }
    }
    std::fs::write(&path, csv)?;
    println!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn experiment(args: ExperimentArgs) -> Result<ExitCode, Error> {
    let mut map = args.family.resolve()?;
    if let Some(n) = args.n {
        map.set("n", n);
    }
    if let Some(m) = args.m {
        map.set("m", m);
    }
    if let Some(r) = args.replicas {
        map.set("replicas", r);
    }
    if let Some(seed) = args.seed {
        map.set("seed", seed);
    }
    if let Some(v) = &args.variant {
        map.set("variant", v);
    }
    let family = map.family()?;
    let n = map.get_u64("n")?.unwrap_or(100_000) as usize;
    let m = map.get_u64("m")?.unwrap_or(1) as u32;
    let replicas = map.get_u64("replicas")?.unwrap_or(20) as usize;
    let base_seed = map.get_u64("seed")?.unwrap_or(0);
    let kind = match args.kind.as_str() {
        "degree_dist" => ExperimentKind::DegreeDist,
        "max_first_order" => ExperimentKind::MaxDegreeFirstOrder,
        "second_order" => ExperimentKind::MaxDegreeSecondOrder,
        "window_gumbel" => ExperimentKind::WindowGumbel,
        "frechet_limit" => ExperimentKind::FrechetLimit,
        "concentration" => ExperimentKind::Concentration,
        "zero_degree" => ExperimentKind::ZeroDegreeFraction,
        "location_scaling" => ExperimentKind::LocationScaling,
        other => return Err(Error::Parse(format!("unknown experiment kind `{other}`"))),
    };

    let mut config = WrgConfig::new(n, m, family, 0);
    config.variant = parse_variant(map.get("variant"))?;
    let mut plan = ExperimentPlan::new(kind, config, replicas, base_seed);
    if let Some(k) = args.kmax.or(map.get_u64("kmax")?) {
        plan.kmax = k;
    }
    plan.mode = match args.mode.as_deref().or(map.get("mode")) {
        None | Some("degrees") => StatisticMode::Degrees,
        Some("cond_means") => StatisticMode::CondMeans,
        Some(other) => return Err(Error::Parse(format!("unknown mode `{other}`"))),
    };
    if let (Some(s), Some(t)) = (
        args.window_s.or(map.get_f64("window_s")?),
        args.window_t.or(map.get_f64("window_t")?),
    ) {
        let scale = match args.window_gamma.as_deref().or(map.get("window_gamma")) {
            Some("tn") => WindowScale::TnScale,
            _ => WindowScale::PowerGamma,
        };
        let ell = match args.window_zeta0.or(map.get_f64("window_zeta0")?) {
            Some(z) => LadderFn::ExpSqrt { zeta0: z },
            None => LadderFn::One,
        };
        plan.window = Some(WindowSpec { scale, s, t, ell });
    }
    if let Some(l) = args.ladder.as_deref().or(map.get("ladder")) {
        plan.ladder = l
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad ladder entry `{tok}`: {e}")))
            })
            .collect::<Result<_, _>>()?;
    }

    if args.dump_config {
        std::fs::create_dir_all(&args.out)?;
        let mut resolved = map.clone();
        resolved.set_family(&plan.config.family)?;
        resolved.set("n", n);
        resolved.set("m", m);
        resolved.set("replicas", replicas);
        resolved.set("seed", base_seed);
        std::fs::write(args.out.join("config.txt"), resolved.dump())?;
    }

    let report = wrg::experiments::run(&plan)?;
    let path = report.save(&args.out)?;
    println!("report: {}", path.display());
    for s in &report.statistics {
        println!("  {} ({}) = {:.6}", s.name, s.kind, s.value);
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    if args.suite != "primary" {
        return Err(Error::Parameter(format!("unknown suite `{}`", args.suite)));
    }
    let seed = args
        .seed
        .ok_or_else(|| Error::Parameter("verify requires --seed (all randomness is seeded)".into()))?;
    let reports = acceptance::run_all(seed);
    let mut all_pass = true;
    for r in &reports {
        println!("{}", r.line());
        all_pass &= r.passed;
    }
    println!(
        "suite: {}/{} criteria passed (base seed {seed})",
        reports.iter().filter(|r| r.passed).count(),
        reports.len()
    );
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
