//! Command-line surface.
//!
//! Parameter files use a flat JSON schema; matrices are arrays of real
//! components, `beta` reals per entry, row-major. Every argument that
//! takes JSON accepts either inline JSON or a path to a file.

pub mod figures;

use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use crate::algebra::{Algebra, DivMatrix, HermitianPD};
use crate::densities::{
    beta_riesz_logpdf, eigenvalues_logpdf, kotz_riesz_logpdf, pearson2riesz_logpdf, riesz_logpdf, singular_values_logpdf,
    support_pd, BetaRieszParams, KotzRieszParams, PearsonIIRieszParams, RieszParams, SpectralParams,
};
use crate::error::{Error, Result};
use crate::jack::Partition;
use crate::sampling::{sample_beta_riesz, sample_kotz_riesz, sample_pearson2riesz, sample_riesz_matrix, RandomStream};
use crate::specfun::{gen_pochhammer, ln_beta_classic, ln_beta_star, ln_mv_gamma, ln_stiefel_volume, Weight};
use crate::verify::suite::{self, Profile, SuiteConfig};

/// Environment variable that overrides the default seed.
pub const SEED_ENV: &str = "PEARSON_RIESZ_SEED";
pub const DEFAULT_SEED: u64 = 20_240_607;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SUPPORT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pearson-riesz", version, about = "Pearson type II-Riesz distributions over the real division algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Dist {
    Riesz,
    KotzRiesz,
    Pearson2,
    BetaRiesz,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Constant {
    Gamma,
    Pochhammer,
    Stiefel,
    BetaStar,
    BetaClassic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpectralKind {
    Singular,
    Eigen,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProfileArg {
    Ci,
    Full,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Log-density at a point.
    Density {
        #[arg(long)]
        dist: Dist,
        /// 1, 2, 4 or 8; defaults to the `beta` field of the parameters, then 1.
        #[arg(long)]
        beta: Option<usize>,
        #[arg(long)]
        params: String,
        /// Point as a number or an array of real components.
        #[arg(long)]
        at: String,
    },
    /// Draws as CSV rows of flattened real components.
    Sample {
        #[arg(long)]
        dist: Dist,
        #[arg(long)]
        beta: Option<usize>,
        #[arg(long)]
        params: String,
        #[arg(long = "n", default_value_t = 10)]
        count: usize,
        #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Log-space special-function values.
    Constants {
        #[arg(long)]
        what: Constant,
        #[arg(long, default_value_t = 1)]
        beta: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        k: f64,
        /// Comma-separated weight; defaults to zeros.
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
    },
    /// Spectral density on a grid of ordered points.
    Spectral {
        #[arg(long)]
        kind: SpectralKind,
        #[arg(long, default_value_t = 1)]
        beta: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        nu: f64,
        #[arg(long, default_value_t = 0.0)]
        k: f64,
        /// Comma-separated partition.
        #[arg(long, default_value = "")]
        tau: String,
        /// `lo:hi:count` per coordinate; only strictly decreasing points are kept.
        #[arg(long)]
        grid: String,
    },
    /// Curve data for the `m = 1` figures.
    Figures {
        #[arg(long)]
        which: u8,
        /// Emit the family over the parameter the figure leaves open.
        #[arg(long)]
        sweep: bool,
    },
    /// Run the verification suite as JSON lines.
    Check {
        #[arg(long, value_enum, default_value_t = ProfileArg::Ci)]
        profile: ProfileArg,
        #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Run one numbered criterion (1-8) or `supplementary`.
        #[arg(long)]
        only: Option<String>,
    },
}

/// Flat parameter schema shared by all distributions.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamFile {
    beta: Option<usize>,
    m: Option<usize>,
    n: Option<usize>,
    a: Option<f64>,
    nu: Option<f64>,
    k: Option<f64>,
    rho: Option<f64>,
    kappa: Option<Vec<f64>>,
    tau: Option<Vec<f64>>,
    xi: Option<Vec<f64>>,
    mu: Option<Vec<f64>>,
    theta: Option<Vec<f64>>,
    sigma: Option<Vec<f64>>,
}

fn read_json_arg(arg: &str) -> Result<String> {
    let trimmed = arg.trim_start();
    let inline = trimmed.starts_with('{') || trimmed.starts_with('[') || trimmed.parse::<f64>().is_ok();
    if inline || !Path::new(arg).exists() {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| Error::Parameter(format!("cannot read {arg}: {e}")))
}

fn parse_params(arg: &str) -> Result<ParamFile> {
    serde_json::from_str(&read_json_arg(arg)?).map_err(|e| Error::Parameter(format!("parameters: {e}")))
}

fn parse_point(arg: &str) -> Result<Vec<f64>> {
    let v: serde_json::Value =
        serde_json::from_str(&read_json_arg(arg)?).map_err(|e| Error::Parameter(format!("point: {e}")))?;
    match v {
        serde_json::Value::Number(x) => Ok(vec![x.as_f64().unwrap_or(f64::NAN)]),
        other => serde_json::from_value(other).map_err(|e| Error::Parameter(format!("point: {e}"))),
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| Error::Parameter(format!("{t}: {e}"))))
        .collect()
}

fn resolve_algebra(flag: Option<usize>, file: Option<usize>) -> Result<Algebra> {
    match (flag, file) {
        (Some(a), Some(b)) if a != b => Err(Error::Parameter(format!("--beta {a} conflicts with beta = {b} in parameters"))),
        (Some(b), _) | (None, Some(b)) => Algebra::from_beta(b),
        (None, None) => Ok(Algebra::Real),
    }
}

fn weight_or_zeros(v: &Option<Vec<f64>>, m: usize) -> Result<Weight> {
    match v {
        Some(v) => Weight::new(v.clone()),
        None => Ok(Weight::zeros(m)),
    }
}

fn required<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::Parameter(format!("missing parameter {name}")))
}

fn square(alg: Algebra, data: &Option<Vec<f64>>, dim: usize) -> Result<HermitianPD> {
    match data {
        Some(d) => HermitianPD::new(DivMatrix::new(alg, dim, dim, d.clone())?),
        None => HermitianPD::identity(alg, dim),
    }
}

fn rect(alg: Algebra, data: &Option<Vec<f64>>, rows: usize, cols: usize) -> Result<DivMatrix> {
    match data {
        Some(d) => DivMatrix::new(alg, rows, cols, d.clone()),
        None => DivMatrix::zeros(alg, rows, cols),
    }
}

/// Row-column dimension `m`, taken from `m` or from the weight length.
fn dim_m(p: &ParamFile, weight: &Option<Vec<f64>>) -> usize {
    p.m.or(weight.as_ref().map(Vec::len)).unwrap_or(1)
}

enum Model {
    Riesz(RieszParams),
    KotzRiesz(KotzRieszParams),
    Pearson2(PearsonIIRieszParams),
    BetaRiesz(BetaRieszParams),
}

impl Model {
    fn build(dist: Dist, alg: Algebra, p: &ParamFile) -> Result<Model> {
        Ok(match dist {
            Dist::Riesz => {
                let m = dim_m(p, &p.kappa);
                Model::Riesz(RieszParams::new(required(p.a, "a")?, weight_or_zeros(&p.kappa, m)?, square(alg, &p.xi, m)?)?)
            }
            Dist::KotzRiesz => {
                let m = dim_m(p, &p.kappa);
                let n = required(p.n, "n")?;
                Model::KotzRiesz(KotzRieszParams::new(
                    weight_or_zeros(&p.kappa, m)?,
                    rect(alg, &p.mu, n, m)?,
                    square(alg, &p.theta, n)?,
                    square(alg, &p.sigma, m)?,
                )?)
            }
            Dist::Pearson2 => {
                let m = dim_m(p, &p.tau);
                let n = required(p.n, "n")?;
                Model::Pearson2(PearsonIIRieszParams::new(
                    required(p.nu, "nu")?,
                    p.k.unwrap_or(0.0),
                    weight_or_zeros(&p.tau, m)?,
                    p.rho.unwrap_or(1.0),
                    rect(alg, &p.mu, n, m)?,
                    square(alg, &p.theta, n)?,
                    square(alg, &p.sigma, m)?,
                )?)
            }
            Dist::BetaRiesz => {
                let m = dim_m(p, &p.tau);
                Model::BetaRiesz(BetaRieszParams::new(
                    required(p.nu, "nu")?,
                    p.k.unwrap_or(0.0),
                    weight_or_zeros(&p.tau, m)?,
                    p.rho.unwrap_or(1.0),
                    square(alg, &p.sigma, m)?,
                    required(p.n, "n")?,
                )?)
            }
        })
    }

    fn logpdf(&self, alg: Algebra, at: Vec<f64>) -> Result<f64> {
        match self {
            Model::Riesz(p) => {
                let m = p.dim();
                riesz_logpdf(&support_pd(DivMatrix::new(alg, m, m, at)?)?, p)
            }
            Model::KotzRiesz(p) => {
                let (n, m) = p.shape();
                kotz_riesz_logpdf(&DivMatrix::new(alg, n, m, at)?, p)
            }
            Model::Pearson2(p) => {
                let (n, m) = p.shape();
                pearson2riesz_logpdf(&DivMatrix::new(alg, n, m, at)?, p)
            }
            Model::BetaRiesz(p) => {
                let m = p.dim();
                beta_riesz_logpdf(&support_pd(DivMatrix::new(alg, m, m, at)?)?, p)
            }
        }
    }

    fn sample(&self, rng: &mut RandomStream) -> Result<DivMatrix> {
        match self {
            Model::Riesz(p) => Ok(sample_riesz_matrix(rng, p)?.matrix().clone()),
            Model::KotzRiesz(p) => sample_kotz_riesz(rng, p),
            Model::Pearson2(p) => sample_pearson2riesz(rng, p),
            Model::BetaRiesz(p) => Ok(sample_beta_riesz(rng, p)?.matrix().clone()),
        }
    }
}

fn dist_name(d: Dist) -> &'static str {
    match d {
        Dist::Riesz => "riesz",
        Dist::KotzRiesz => "kotz-riesz",
        Dist::Pearson2 => "pearson2",
        Dist::BetaRiesz => "beta-riesz",
    }
}

/// Formats a float for CSV with 17 significant digits.
fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn json_num(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(num(x))
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Support(_) => EXIT_SUPPORT,
        _ => EXIT_USAGE,
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Parameter(format!("output: {e}"))
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Density { dist, beta, params, at } => {
            let p = parse_params(&params)?;
            let alg = resolve_algebra(beta, p.beta)?;
            let model = Model::build(dist, alg, &p)?;
            let ln = model.logpdf(alg, parse_point(&at)?)?;
            let line = json!({ "dist": dist_name(dist), "beta": alg.beta(), "log_density": json_num(ln) });
            writeln!(out, "{line}").map_err(io)?;
        }
        Command::Sample { dist, beta, params, count, seed } => {
            let p = parse_params(&params)?;
            let alg = resolve_algebra(beta, p.beta)?;
            let model = Model::build(dist, alg, &p)?;
            let mut rng = RandomStream::new(seed);
            for i in 0..count {
                let x = model.sample(&mut rng)?;
                if i == 0 {
                    let header: Vec<String> = (0..x.as_slice().len()).map(|j| format!("x{j}")).collect();
                    writeln!(out, "{}", header.join(",")).map_err(io)?;
                }
                let row: Vec<String> = x.as_slice().iter().map(|&v| num(v)).collect();
                writeln!(out, "{}", row.join(",")).map_err(io)?;
            }
        }
        Command::Constants { what, beta, m, n, a, b, k, kappa, tau } => {
            let alg = Algebra::from_beta(beta)?;
            let weight = |s: &Option<String>| -> Result<Weight> {
                match s {
                    Some(s) => Weight::new(parse_list(s)?),
                    None => Ok(Weight::zeros(m)),
                }
            };
            let kappa = weight(&kappa)?;
            let tau = weight(&tau)?;
            let (name, ln) = match what {
                Constant::Gamma => ("ln_multivariate_gamma", ln_mv_gamma(alg, m, required(a, "a")?, &kappa)?),
                Constant::Pochhammer => {
                    let v = gen_pochhammer(alg, m, required(a, "a")?, &kappa)?;
                    let line = json!({
                        "what": "pochhammer", "beta": beta, "m": m,
                        "value": json_num(v), "ln_abs_value": json_num(v.abs().ln()), "sign": v.signum(),
                    });
                    writeln!(out, "{line}").map_err(io)?;
                    return Ok(EXIT_OK);
                }
                Constant::Stiefel => ("ln_stiefel_volume", ln_stiefel_volume(alg, m, required(n, "n")?)?),
                Constant::BetaStar => {
                    ("ln_beta_star", ln_beta_star(alg, m, required(a, "a")?, k, required(b, "b")?, &tau)?)
                }
                Constant::BetaClassic => {
                    ("ln_beta_classic", ln_beta_classic(alg, m, required(a, "a")?, &kappa, required(b, "b")?, &tau)?)
                }
            };
            writeln!(out, "{}", json!({ "what": name, "beta": beta, "m": m, "value": json_num(ln) })).map_err(io)?;
        }
        Command::Spectral { kind, beta, m, n, nu, k, tau, grid } => {
            let parts: Vec<u32> = parse_list(&tau)?
                .into_iter()
                .map(|x| {
                    if x >= 0.0 && x.fract() == 0.0 {
                        Ok(x as u32)
                    } else {
                        Err(Error::Parameter(format!("tau entries must be nonnegative integers, got {x}")))
                    }
                })
                .collect::<Result<_>>()?;
            let params = SpectralParams { nu, k, tau: Partition::new(parts)?, n, algebra: Algebra::from_beta(beta)? };
            let axis = parse_grid(&grid)?;
            let header: Vec<String> = (1..=m).map(|i| format!("x{i}")).chain(["log_density".into(), "density".into()]).collect();
            writeln!(out, "{}", header.join(",")).map_err(io)?;
            let mut index = vec![0usize; m];
            loop {
                let point: Vec<f64> = index.iter().map(|&i| axis[i]).collect();
                if point.windows(2).all(|w| w[0] > w[1]) {
                    let ln = match kind {
                        SpectralKind::Singular => singular_values_logpdf(&point, &params),
                        SpectralKind::Eigen => eigenvalues_logpdf(&point, &params),
                    };
                    let ln = match ln {
                        Ok(v) => v,
                        Err(Error::Support(_)) => f64::NEG_INFINITY,
                        Err(e) => return Err(e),
                    };
                    let row: Vec<String> = point.iter().map(|&x| num(x)).chain([num(ln), num(ln.exp())]).collect();
                    writeln!(out, "{}", row.join(",")).map_err(io)?;
                }
                let mut d = m;
                loop {
                    if d == 0 {
                        return Ok(EXIT_OK);
                    }
                    d -= 1;
                    index[d] += 1;
                    if index[d] < axis.len() {
                        break;
                    }
                    index[d] = 0;
                }
            }
        }
        Command::Figures { which, sweep } => {
            let curves = figures::figure_curves(which, sweep)?;
            match which {
                1 => writeln!(err, "# assumption: figure 1 leaves k open; default k = 0, sweep varies k over {:?}", figures::SWEEP),
                _ => writeln!(err, "# assumption: figure 2 leaves t open; default t = 0, sweep varies t over {:?}", figures::SWEEP),
            }
            .map_err(io)?;
            writeln!(err, "# density is the unit-mass profile along one axis; log_profile is the full n-vector log-density")
                .map_err(io)?;
            writeln!(out, "figure,nu,n,k,t,r,density,log_profile").map_err(io)?;
            for spec in &curves {
                for p in figures::curve(spec) {
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{},{}",
                        spec.figure,
                        num(spec.nu),
                        spec.n,
                        num(spec.k),
                        num(spec.t),
                        num(p.r),
                        num(p.density),
                        num(p.log_profile)
                    )
                    .map_err(io)?;
                }
            }
        }
        Command::Check { profile, seed, only } => {
            let profile = match profile {
                ProfileArg::Ci => Profile::Ci,
                ProfileArg::Full => Profile::Full,
            };
            let cfg = SuiteConfig::for_profile(profile, seed);
            let reports = match only.as_deref() {
                None => suite::run_all(&cfg),
                Some("1") => suite::criterion_1(),
                Some("2") => suite::criterion_2(&cfg),
                Some("3") => suite::criterion_3(&cfg),
                Some("4") => suite::criterion_4(&cfg),
                Some("5") => suite::criterion_5(&cfg),
                Some("6") => suite::criterion_6(&cfg),
                Some("7") => suite::criterion_7(),
                Some("8") => suite::criterion_8(&cfg),
                Some("supplementary") => suite::supplementary(&cfg),
                Some(other) => return Err(Error::Parameter(format!("unknown criterion {other}"))),
            };
            let mut all = true;
            for r in &reports {
                all &= r.pass;
                writeln!(out, "{}", r.to_json_line()).map_err(io)?;
            }
            return Ok(if all { EXIT_OK } else { EXIT_CHECK_FAILED });
        }
    }
    Ok(EXIT_OK)
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::Parameter(format!("grid {spec:?} must be lo:hi:count"));
    let fields: Vec<&str> = spec.split(':').collect();
    if fields.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = fields[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = fields[1].trim().parse().map_err(|_| bad())?;
    let count: usize = fields[2].trim().parse().map_err(|_| bad())?;
    if count == 0 || !(lo.is_finite() && hi.is_finite()) {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect())
}
