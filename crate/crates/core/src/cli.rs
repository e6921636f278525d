//! Command-line driver: `build`, `verify`, `export`, `import`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::curve::CurveParams;
use crate::error::{Error, Result};
use crate::grading::json::series_to_json;
use crate::grading::monomial::LAMBDA_COUNT;
use crate::rational::Rational;
use crate::relations::verify::{Verifier, VerifyOptions};
use crate::relations::{exit_code, run_suite, Suite, Verdict, VerificationReport};
use crate::sigma::{build_sigma, schur_weierstrass, BuildConfig, Constraint, SigmaSeries};

pub const EXIT_CONFIG: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "trigonal-sigma", version, about = "Exact σ-expansion and identity checks for y³ = x⁵ + λ₄x⁴ + … + λ₀")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Highest grade of σ; grade m carries u-weight 8 + 3m.
    #[arg(long, global = true, default_value_t = 5, env = "TRISIGMA_GRADE")]
    pub grade: u32,
    /// Order in t of the Abel-map expansions behind the strata constraints.
    #[arg(long, global = true, default_value_t = 40, env = "TRISIGMA_STRATA_ORDER")]
    pub strata_order: i64,
    /// Comma-separated constraint labels.
    #[arg(long, global = true, env = "TRISIGMA_CONSTRAINTS")]
    pub constraints: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true, default_value = "symbolic", env = "TRISIGMA_LAMBDA0")]
    pub lambda0: String,
    #[arg(long, global = true, allow_hyphen_values = true, default_value = "symbolic", env = "TRISIGMA_LAMBDA1")]
    pub lambda1: String,
    #[arg(long, global = true, allow_hyphen_values = true, default_value = "symbolic", env = "TRISIGMA_LAMBDA2")]
    pub lambda2: String,
    #[arg(long, global = true, allow_hyphen_values = true, default_value = "symbolic", env = "TRISIGMA_LAMBDA3")]
    pub lambda3: String,
    #[arg(long, global = true, allow_hyphen_values = true, default_value = "symbolic", env = "TRISIGMA_LAMBDA4")]
    pub lambda4: String,
    /// Directory holding built σ files, keyed by provenance hash.
    #[arg(long, global = true, default_value = ".trisigma-cache", env = "TRISIGMA_CACHE")]
    pub cache: PathBuf,
    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, default_value_t = 0, env = "TRISIGMA_JOBS")]
    pub jobs: usize,
    /// Include wall-clock times in the output (breaks byte-identical reruns).
    #[arg(long, global = true, env = "TRISIGMA_TIMINGS")]
    pub timings: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Builds σ (or loads it from the cache) and prints per-grade diagnostics.
    Build {
        /// Also write the σ file here.
        #[arg(long, env = "TRISIGMA_OUT")]
        out: Option<PathBuf>,
    },
    /// Runs verification suites and writes one JSON report per line.
    Verify {
        /// Suite names separated by commas, or `all`.
        #[arg(long, default_value = "all", env = "TRISIGMA_SUITE")]
        suite: String,
        #[arg(long, env = "TRISIGMA_OUT")]
        out: Option<PathBuf>,
        /// Build σ when it is not cached instead of failing.
        #[arg(long)]
        build: bool,
        /// λ-grades kept in every intermediate series.
        #[arg(long, default_value_t = 5)]
        lambda_grade: u32,
        #[arg(long, default_value_t = 6)]
        min_slack: i64,
    },
    /// Writes the cached σ file, or the polynomial σ at λ = 0.
    Export {
        #[arg(long, env = "TRISIGMA_OUT")]
        out: Option<PathBuf>,
        #[arg(long)]
        schur: bool,
    },
    /// Validates a σ file against the current configuration and caches it.
    Import { path: PathBuf },
}

fn parse_lambda(name: &str, text: &str) -> Result<Option<Rational>> {
    if text == "symbolic" {
        return Ok(None);
    }
    text.parse::<Rational>()
        .map(Some)
        .map_err(|_| Error::Config(format!("--{name} takes a rational or `symbolic`, got `{text}`")))
}

impl RunArgs {
    pub fn params(&self) -> Result<CurveParams> {
        let texts = [&self.lambda0, &self.lambda1, &self.lambda2, &self.lambda3, &self.lambda4];
        let mut lambdas: [Option<Rational>; LAMBDA_COUNT] = Default::default();
        for (j, t) in texts.iter().enumerate() {
            lambdas[j] = parse_lambda(&format!("lambda{j}"), t)?;
        }
        Ok(CurveParams { lambdas })
    }

    pub fn build_config(&self) -> Result<BuildConfig> {
        if self.grade < 1 {
            return Err(Error::Config("--grade must be at least 1".into()));
        }
        let constraints = match &self.constraints {
            None => Constraint::default_set(),
            Some(s) => s.split(',').map(Constraint::parse).collect::<Result<_>>()?,
        };
        Ok(BuildConfig {
            params: self.params()?,
            max_grade: self.grade,
            strata_order: self.strata_order,
            constraints,
            timings: self.timings,
        })
    }
}

fn cache_path(dir: &Path, hash: &str) -> PathBuf {
    dir.join(format!("sigma-{hash}.json"))
}

/// The cached σ for `cfg`, if any; a file whose provenance differs from
/// its name is rejected.
pub fn load_cached(dir: &Path, cfg: &BuildConfig) -> Result<Option<SigmaSeries>> {
    let prov = cfg.provenance();
    let path = cache_path(dir, &prov.hash());
    if !path.exists() {
        return Ok(None);
    }
    let s = SigmaSeries::from_json_str(&fs::read_to_string(&path)?)?;
    if s.provenance != prov {
        return Err(Error::Provenance(format!("{} was built under a different configuration", path.display())));
    }
    Ok(Some(s))
}

fn store(dir: &Path, s: &SigmaSeries) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, &s.provenance.hash());
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, s.to_json_string(false)?)?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Loads σ from the cache or builds and caches it.
pub fn obtain_sigma(run: &RunArgs) -> Result<SigmaSeries> {
    let cfg = run.build_config()?;
    if let Some(s) = load_cached(&run.cache, &cfg)? {
        log::info!("σ cache hit {}", cfg.provenance().hash());
        return Ok(s);
    }
    let s = build_sigma(&cfg)?;
    let path = store(&run.cache, &s)?;
    log::info!("σ written to {}", path.display());
    Ok(s)
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            Box::new(std::io::BufWriter::new(fs::File::create(p)?))
        }
        None => Box::new(std::io::stdout().lock()),
    })
}

fn cmd_build(run: &RunArgs, out: &Option<PathBuf>) -> Result<i32> {
    let s = obtain_sigma(run)?;
    let mut w = std::io::stdout().lock();
    for d in &s.diagnostics {
        let mut d = d.clone();
        if !run.timings {
            d.elapsed_ms = None;
        }
        writeln!(w, "{}", serde_json::to_string(&d)?)?;
    }
    if let Some(p) = out {
        fs::write(p, s.to_json_string(run.timings)?)?;
    }
    if !s.is_fully_determined() {
        log::warn!("some coefficients were not fixed by the constraints");
    }
    Ok(0)
}

/// Runs the suites and returns the reports in suite order.
pub fn verify_reports(run: &RunArgs, suites: &[Suite], build: bool, opts: VerifyOptions) -> Result<Vec<VerificationReport>> {
    let cfg = run.build_config()?;
    let sigma = match load_cached(&run.cache, &cfg)? {
        Some(s) => s,
        None if build => obtain_sigma(run)?,
        None => {
            return Err(Error::Config(format!(
                "no cached σ for this configuration in {}; run `trigonal-sigma build` with the same options first \
                 or pass --build",
                run.cache.display()
            )))
        }
    };
    let v = Verifier::new(&sigma, opts)?;
    let batches: Vec<Result<Vec<VerificationReport>>> = suites.par_iter().map(|s| run_suite(&v, *s)).collect();
    let mut out = Vec::new();
    for b in batches {
        out.extend(b?);
    }
    Ok(out)
}

fn cmd_verify(run: &RunArgs, suite: &str, out: &Option<PathBuf>, build: bool, lambda_grade: u32, min_slack: i64) -> Result<i32> {
    let suites = Suite::parse_list(suite)?;
    let opts = VerifyOptions {
        min_slack,
        lambda_grade,
        timings: run.timings,
    };
    let reports = verify_reports(run, &suites, build, opts)?;
    let mut w = sink(out)?;
    for r in &reports {
        writeln!(w, "{}", r.to_json_line())?;
    }
    w.flush()?;
    for s in &suites {
        let mine: Vec<&VerificationReport> = reports.iter().filter(|r| r.suite == s.name()).collect();
        let count = |v: Verdict| mine.iter().filter(|r| r.verdict == v).count();
        let unexpected = mine.iter().filter(|r| r.outcome() == crate::relations::Outcome::Unexpected).count();
        eprintln!(
            "{:<22} {:>3} reports  {:>3} PASS  {:>3} FAIL  {:>3} INDETERMINATE  {:>3} unexpected",
            s.name(),
            mine.len(),
            count(Verdict::Pass),
            count(Verdict::Fail),
            count(Verdict::Indeterminate),
            unexpected
        );
    }
    Ok(exit_code(&reports))
}

fn cmd_export(run: &RunArgs, out: &Option<PathBuf>, schur: bool) -> Result<i32> {
    let text = if schur {
        series_to_json(&schur_weierstrass())?
    } else {
        let cfg = run.build_config()?;
        let s = load_cached(&run.cache, &cfg)?.ok_or_else(|| {
            Error::Config("no cached σ for this configuration; run `trigonal-sigma build` first".into())
        })?;
        s.to_json_string(run.timings)?
    };
    let mut w = sink(out)?;
    writeln!(w, "{text}")?;
    w.flush()?;
    Ok(0)
}

fn cmd_import(run: &RunArgs, path: &Path) -> Result<i32> {
    let s = SigmaSeries::from_json_str(&fs::read_to_string(path)?)?;
    let want = run.build_config()?.provenance();
    if s.provenance != want {
        return Err(Error::Provenance(format!(
            "{} has provenance {} but the current configuration expects {}",
            path.display(),
            s.provenance.hash(),
            want.hash()
        )));
    }
    let dest = store(&run.cache, &s)?;
    eprintln!("imported into {}", dest.display());
    Ok(0)
}

pub fn execute(cli: &Cli) -> Result<i32> {
    if cli.run.jobs > 0 {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.run.jobs).build_global();
    }
    match &cli.command {
        Command::Build { out } => cmd_build(&cli.run, out),
        Command::Verify {
            suite,
            out,
            build,
            lambda_grade,
            min_slack,
        } => cmd_verify(&cli.run, suite, out, *build, *lambda_grade, *min_slack),
        Command::Export { out, schur } => cmd_export(&cli.run, out, *schur),
        Command::Import { path } => cmd_import(&cli.run, path),
    }
}

/// Parses arguments, runs, and maps errors to exit code 3.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_flags() {
        let cli = Cli::try_parse_from(["t", "--lambda0", "0", "--lambda3", "-1/2", "build"]).unwrap();
        let p = cli.run.params().unwrap();
        assert_eq!(p.lambdas[0], Some(Rational::zero()));
        assert_eq!(p.lambdas[3], Some(Rational::new(-1, 2)));
        assert_eq!(p.lambdas[1], None);
        let bad = Cli::try_parse_from(["t", "--lambda2", "x", "build"]).unwrap();
        assert!(bad.run.params().is_err());
    }

    #[test]
    fn constraint_list_and_grade() {
        let cli = Cli::try_parse_from(["t", "--constraints", "strata3,hirota4444", "verify", "--suite", "curve"]).unwrap();
        assert_eq!(cli.run.build_config().unwrap().constraints.len(), 2);
        let zero = Cli::try_parse_from(["t", "--grade", "0", "build"]).unwrap();
        assert!(zero.run.build_config().is_err());
    }
}
