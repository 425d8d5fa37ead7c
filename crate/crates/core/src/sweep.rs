//! Batch sweeps over `(eta, N, K, T)` and their CSV output.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Parser;

use crate::error::{Error, Result};
use crate::estimators::{
    empirical_coverage, hybrid_coverage, prob_model_coverage, sg_coverage, CoverageCurve, EstimatorSettings,
    InterferenceScope, Method, ProbModelParams, SimulationOptions, ThresholdGrid, DEFAULT_DOMINANT_COUNT,
};
use crate::geometry::{NetworkConfig, Sampler};
use crate::quadrature::DEFAULT_ABS_TOL;

pub const CSV_HEADER: &str = "method,eta,N,K,T_db,coverage,stderr,trials_used";

/// Moments for the probabilistic baseline; `N` is filled in per combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbModelInputs {
    pub mu_s: f64,
    pub sigma_s_sq: f64,
    pub sigma_0_sq: f64,
}

impl ProbModelInputs {
    pub fn for_interferers(&self, interferer_total: usize) -> ProbModelParams {
        ProbModelParams {
            mu_s: self.mu_s,
            sigma_s_sq: self.sigma_s_sq,
            sigma_0_sq: self.sigma_0_sq,
            interferer_total,
        }
    }
}

/// A validated sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Scenario template; its exponent is replaced by each entry of `eta_list`.
    pub network: NetworkConfig,
    /// Template settings; `K` and `N` are replaced per combination.
    pub settings: EstimatorSettings,
    pub grid: ThresholdGrid,
    pub methods: Vec<Method>,
    pub prob_model: Option<ProbModelInputs>,
    pub eta_list: Vec<f64>,
    pub n_list: Vec<usize>,
    pub k_list: Vec<usize>,
    pub sampler: Sampler,
    pub scope: InterferenceScope,
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
    /// CSV destination; `None` writes to standard output.
    pub output_path: Option<PathBuf>,
    /// Progress lines on standard error.
    pub progress: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        let network = NetworkConfig::default();
        let settings = EstimatorSettings::default();
        Self {
            network,
            settings,
            grid: ThresholdGrid::default(),
            methods: vec![Method::Hybrid, Method::Simulation],
            prob_model: None,
            eta_list: vec![network.pathloss_exponent],
            n_list: vec![settings.interferer_total],
            k_list: vec![settings.dominant_count],
            sampler: Sampler::Window,
            scope: InterferenceScope::Nearest,
            threads: None,
            output_path: None,
            progress: false,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let usage = |msg: String| Err(Error::Usage(msg));
        if self.methods.is_empty() {
            return usage("at least one method is required".into());
        }
        if self.eta_list.is_empty() || self.n_list.is_empty() || self.k_list.is_empty() {
            return usage("--eta, --N and --K each need at least one value".into());
        }
        for &eta in &self.eta_list {
            let cfg = NetworkConfig {
                pathloss_exponent: eta,
                ..self.network
            };
            cfg.validate().map_err(|e| Error::Usage(e.to_string()))?;
            if self.methods.contains(&Method::Sg) && !(eta > 2.0) {
                return usage(format!("method sg requires eta > 2, got eta = {eta}"));
            }
            if self.methods.contains(&Method::Probabilistic) && eta != 4.0 {
                return usage(format!("method probabilistic requires eta = 4, got eta = {eta}"));
            }
        }
        if self.methods.contains(&Method::Probabilistic) {
            let Some(inputs) = self.prob_model else {
                return usage("method probabilistic requires --mu-S, --sigma-S-sq and --sigma0-sq".into());
            };
            for &n in &self.n_list {
                inputs
                    .for_interferers(n)
                    .validate()
                    .map_err(|e| Error::Usage(e.to_string()))?;
            }
        }
        for &n in &self.n_list {
            for &k in &self.k_list {
                let settings = EstimatorSettings {
                    interferer_total: n,
                    dominant_count: k,
                    ..self.settings
                };
                settings.validate().map_err(|e| Error::Usage(e.to_string()))?;
            }
            if self.sampler == Sampler::Window {
                self.network.check_capacity(n).map_err(|e| Error::Usage(e.to_string()))?;
            }
        }
        if self.scope == InterferenceScope::AllInWindow && self.sampler != Sampler::Window {
            return usage("--all-interferers requires --sampler window".into());
        }
        if self.threads == Some(0) {
            return usage("--threads must be >= 1".into());
        }
        Ok(())
    }
}

/// Coverage-probability sweeps for Poisson cellular networks.
///
/// Writes one CSV row per (method, N, K, threshold).
#[derive(Debug, Parser)]
#[command(name = "ppp-coverage", version, about, long_about = None)]
pub struct SweepArgs {
    /// BS density (per km^2)
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub lambda: f64,
    /// Path-loss exponent(s)
    #[arg(long, num_args = 1.., value_delimiter = ',', default_values_t = [4.0])]
    pub eta: Vec<f64>,
    /// Noise power (linear)
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    pub noise: f64,
    /// Dominant count(s) K
    #[arg(long = "K", num_args = 1.., value_delimiter = ',', default_values_t = [DEFAULT_DOMINANT_COUNT])]
    pub dominant: Vec<usize>,
    /// Total BS count(s) N
    #[arg(long = "N", num_args = 1.., value_delimiter = ',', default_values_t = [10usize])]
    pub interferers: Vec<usize>,
    /// Monte Carlo trials M
    #[arg(long, default_value_t = 50_000)]
    pub trials: usize,
    /// Half side L of the square window (km)
    #[arg(long = "half-width", default_value_t = 40.0, allow_hyphen_values = true)]
    pub half_width: f64,
    #[arg(long = "tmin-db", default_value_t = -20.0, allow_hyphen_values = true)]
    pub tmin_db: f64,
    #[arg(long = "tmax-db", default_value_t = 20.0, allow_hyphen_values = true)]
    pub tmax_db: f64,
    #[arg(long = "tstep-db", default_value_t = 2.0, allow_hyphen_values = true)]
    pub tstep_db: f64,
    /// Methods: hybrid, simulation, sg, probabilistic
    #[arg(long, num_args = 1.., value_delimiter = ',', default_values_t = [String::from("hybrid"), String::from("simulation")])]
    pub methods: Vec<String>,
    /// Absolute tolerance of the tail quadrature
    #[arg(long = "quad-tol", default_value_t = DEFAULT_ABS_TOL, allow_hyphen_values = true)]
    pub quad_tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (results do not depend on it)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output CSV path (standard output when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Geometry sampler: window or direct
    #[arg(long, default_value = "window")]
    pub sampler: String,
    /// Simulate interference from every window BS instead of the N - 1 nearest
    #[arg(long = "all-interferers")]
    pub all_interferers: bool,
    #[arg(long = "mu-S", allow_hyphen_values = true)]
    pub mu_s: Option<f64>,
    #[arg(long = "sigma-S-sq", allow_hyphen_values = true)]
    pub sigma_s_sq: Option<f64>,
    #[arg(long = "sigma0-sq", allow_hyphen_values = true)]
    pub sigma0_sq: Option<f64>,
    /// Print progress to standard error
    #[arg(long, short)]
    pub verbose: bool,
}

impl SweepArgs {
    pub fn into_spec(self) -> Result<SweepSpec> {
        let mut methods = Vec::new();
        for name in &self.methods {
            let m: Method = name.trim().parse()?;
            if !methods.contains(&m) {
                methods.push(m);
            }
        }
        methods.sort();
        let prob_model = match (self.mu_s, self.sigma_s_sq, self.sigma0_sq) {
            (Some(mu_s), Some(sigma_s_sq), Some(sigma_0_sq)) => Some(ProbModelInputs {
                mu_s,
                sigma_s_sq,
                sigma_0_sq,
            }),
            (None, None, None) => None,
            _ => {
                return Err(Error::Usage(
                    "--mu-S, --sigma-S-sq and --sigma0-sq must be given together".into(),
                ))
            }
        };
        let grid = ThresholdGrid::sweep_db(self.tmin_db, self.tmax_db, self.tstep_db)
            .map_err(|e| Error::Usage(e.to_string()))?;
        let sampler: Sampler = self.sampler.parse()?;
        let dedup_sorted = |mut v: Vec<usize>| {
            v.sort_unstable();
            v.dedup();
            v
        };
        let mut eta_list = self.eta.clone();
        eta_list.sort_by(f64::total_cmp);
        eta_list.dedup();
        let network = NetworkConfig {
            bs_density: self.lambda,
            pathloss_exponent: eta_list.first().copied().unwrap_or(4.0),
            noise_power: self.noise,
            half_width: self.half_width,
        };
        let n_list = dedup_sorted(self.interferers);
        let k_list = dedup_sorted(self.dominant);
        let settings = EstimatorSettings {
            dominant_count: k_list.first().copied().unwrap_or(DEFAULT_DOMINANT_COUNT),
            interferer_total: n_list.first().copied().unwrap_or(10),
            trials: self.trials,
            quad_abs_tol: self.quad_tol,
            seed: self.seed,
        };
        let spec = SweepSpec {
            network,
            settings,
            grid,
            methods,
            prob_model,
            eta_list,
            n_list,
            k_list,
            sampler,
            scope: if self.all_interferers {
                InterferenceScope::AllInWindow
            } else {
                InterferenceScope::Nearest
            },
            threads: self.threads,
            output_path: self.out,
            progress: self.verbose,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Parses command-line arguments (program name first) into a validated spec.
pub fn parse_args<I, T>(argv: I) -> Result<SweepSpec>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = SweepArgs::try_parse_from(argv).map_err(|e| Error::Usage(e.to_string()))?;
    args.into_spec()
}

fn run_combinations(spec: &SweepSpec) -> Result<Vec<CoverageCurve>> {
    let mut curves = Vec::new();
    for &eta in &spec.eta_list {
        let network = NetworkConfig {
            pathloss_exponent: eta,
            ..spec.network
        };
        // Curves that do not depend on K (or N) are computed once and relabelled.
        let mut sg_cache: Option<CoverageCurve> = None;
        let mut per_n_cache: BTreeMap<(Method, usize), CoverageCurve> = BTreeMap::new();
        for &method in &spec.methods {
            for &n in &spec.n_list {
                for &k in &spec.k_list {
                    let settings = EstimatorSettings {
                        interferer_total: n,
                        dominant_count: k,
                        ..spec.settings
                    };
                    if spec.progress {
                        eprintln!("[ppp-coverage] {method} eta={eta} N={n} K={k}");
                    }
                    let context = || format!("{method} at eta={eta}, N={n}, K={k}");
                    let curve = match method {
                        Method::Hybrid => hybrid_coverage(&network, &settings, &spec.grid, spec.sampler),
                        Method::Simulation => match per_n_cache.get(&(method, n)) {
                            Some(c) => Ok(c.clone()),
                            None => empirical_coverage(
                                &network,
                                &settings,
                                &spec.grid,
                                SimulationOptions {
                                    sampler: spec.sampler,
                                    scope: spec.scope,
                                },
                            ),
                        },
                        Method::Sg => match &sg_cache {
                            Some(c) => Ok(c.clone()),
                            None => sg_coverage(&network, &spec.grid, spec.settings.quad_abs_tol),
                        },
                        Method::Probabilistic => match per_n_cache.get(&(method, n)) {
                            Some(c) => Ok(c.clone()),
                            None => {
                                let inputs = spec
                                    .prob_model
                                    .ok_or_else(|| Error::Usage("probabilistic method needs model moments".into()))?;
                                prob_model_coverage(&inputs.for_interferers(n), &network, &spec.grid)
                            }
                        },
                    }
                    .map_err(|e| e.context(context()))?;
                    match method {
                        Method::Sg => sg_cache = Some(curve.clone()),
                        Method::Simulation | Method::Probabilistic => {
                            per_n_cache.insert((method, n), curve.clone());
                        }
                        Method::Hybrid => {}
                    }
                    curves.push(curve.with_combination(n, k));
                }
            }
        }
    }
    curves.sort_by(|a, b| {
        (a.method, a.interferer_total, a.dominant_count)
            .cmp(&(b.method, b.interferer_total, b.dominant_count))
            .then(a.pathloss_exponent.total_cmp(&b.pathloss_exponent))
    });
    Ok(curves)
}

/// Runs every `(method, eta, N, K)` combination of the spec.
///
/// Curves come back ordered by `(method, N, K, eta)`; the output is identical
/// for any worker count.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<CoverageCurve>> {
    spec.validate()?;
    match spec.threads {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::invalid(format!("cannot start {threads} worker threads: {e}")))?;
            pool.install(|| run_combinations(spec))
        }
        None => run_combinations(spec),
    }
}

/// `%.9g`-style rendering: 9 significant digits, trailing zeros trimmed,
/// exponent form outside `1e-5 <= |x| < 1e9`.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    }
}

/// Writes curves as CSV rows sorted by `(method, N, K, T_db)`.
pub fn write_csv_to<W: Write>(curves: &[CoverageCurve], mut out: W) -> std::io::Result<()> {
    let mut rows: Vec<(&CoverageCurve, usize)> = curves
        .iter()
        .flat_map(|c| (0..c.points.len()).map(move |j| (c, j)))
        .collect();
    rows.sort_by(|(a, i), (b, j)| {
        (a.method, a.interferer_total, a.dominant_count)
            .cmp(&(b.method, b.interferer_total, b.dominant_count))
            .then(a.pathloss_exponent.total_cmp(&b.pathloss_exponent))
            .then(a.points[*i].threshold_db.total_cmp(&b.points[*j].threshold_db))
    });
    out.write_all(CSV_HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for (curve, j) in rows {
        let p = &curve.points[j];
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            curve.method,
            format_sig9(curve.pathloss_exponent),
            curve.interferer_total,
            curve.dominant_count,
            format_sig9(p.threshold_db),
            format_sig9(p.estimate),
            format_sig9(p.stderr),
            p.trials_used
        )?;
    }
    out.flush()
}

/// Writes the CSV to `path`.
pub fn write_csv(curves: &[CoverageCurve], path: &Path) -> Result<()> {
    let io_err = |op: &'static str| {
        move |source| Error::Io {
            op,
            path: path.to_path_buf(),
            source,
        }
    };
    let file = File::create(path).map_err(io_err("create"))?;
    write_csv_to(curves, BufWriter::new(file)).map_err(io_err("write"))
}
