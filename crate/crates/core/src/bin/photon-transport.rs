use clap::{Args, Parser, Subcommand, ValueEnum};
use photon_transport::atomic::{diffusion_matrix, saturation, steady_state, Index};
use photon_transport::config::{RunConfig, KEYS};
use photon_transport::correlation::g2_zero;
use photon_transport::figures::{figure, FigureName};
use photon_transport::medium::{alpha, voigt_hwhm, MediumParams};
use photon_transport::quadrature::Numerics;
use photon_transport::solver::{
    g2_floor_asymptotic, g2_floor_open, psi_b_zero_asymptotic, psi_s_zero_asymptotic,
    solve_detuned_branch, solve_detuned_exact, solve_od_a_asymptotic, solve_od_a_resonant,
};
use photon_transport::spectra::{psi_b_zero, psi_s_zero};
use photon_transport::{selftest, Error};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_CONFIG: u8 = 1;
const EXIT_PARTIAL: u8 = 2;
const EXIT_SELFTEST: u8 = 3;

/// Photon statistics of light transmitted through a two-level atomic gas.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Overrides,
}

#[derive(Subcommand)]
enum Command {
    /// Write a figure table as CSV to the output directory.
    Figure {
        /// fig3, fig4, fig5a, fig5b, fig6, fig7, fig8 or fig9b.
        name: String,
        /// Print the CSV instead of writing a file.
        #[arg(long)]
        stdout: bool,
    },
    /// Print one quantity as key=value lines.
    Eval {
        #[arg(value_enum)]
        quantity: EvalQuantity,
    },
    /// Run the invariant checks of all modules.
    Selftest {
        /// Only the fast subset.
        #[arg(long)]
        quick: bool,
    },
    /// List the configuration keys.
    Keys,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum EvalQuantity {
    Alpha,
    PsiBZero,
    PsiSZero,
    G2Zero,
    OdA,
    G2Floor,
    Saturation,
    Hwhm,
    SteadyState,
    Diffusion,
}

#[derive(Args)]
struct Overrides {
    /// Configuration file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads, 0 for all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Any configuration key, as KEY=VALUE; may be repeated.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Use the large-depth formulas.
    #[arg(long, global = true)]
    asymptotic: bool,
    /// Pump detuning [Gamma].
    #[arg(long, global = true, allow_hyphen_values = true)]
    delta: Option<f64>,
    /// Doppler width [Gamma].
    #[arg(long, global = true)]
    kv0: Option<f64>,
    /// Coupling fraction into the guided mode.
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Resonant optical depth.
    #[arg(long, global = true)]
    od: Option<f64>,
    /// Residual relaxation rate [Gamma].
    #[arg(long, global = true)]
    gamma: Option<f64>,
    /// Incident photon flux [Gamma].
    #[arg(long, global = true)]
    flux: Option<f64>,
    /// Doppler shift of a single atom [Gamma].
    #[arg(long, global = true, allow_hyphen_values = true)]
    kvz: Option<f64>,
    /// Frequency offset [Gamma].
    #[arg(long, global = true, allow_hyphen_values = true)]
    varpi: Option<f64>,
    /// Detuned branch, 0 for resonance.
    #[arg(long, global = true)]
    branch: Option<u32>,
    /// Quadrature tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output directory for figure CSV.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Sweep cache directory.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

impl Overrides {
    fn config(&self) -> photon_transport::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path).map_err(|e| match e {
                Error::Io { .. } => Error::Config(e.to_string()),
                e => e,
            })?,
            None => RunConfig::default(),
        };
        for kv in &self.set {
            let Some((k, v)) = kv.split_once('=') else {
                return Err(Error::Config(format!("--set expects KEY=VALUE, got `{kv}`")));
            };
            cfg.set(k.trim(), v.trim())?;
        }
        let numbers = [
            ("delta", self.delta),
            ("kv0", self.kv0),
            ("beta", self.beta),
            ("od", self.od),
            ("gamma", self.gamma),
            ("flux", self.flux),
            ("kvz", self.kvz),
            ("varpi", self.varpi),
            ("tol", self.tol),
        ];
        for (k, v) in numbers {
            if let Some(v) = v {
                cfg.set(k, v)?;
            }
        }
        if let Some(j) = self.jobs {
            cfg.set("jobs", j)?;
        }
        if let Some(b) = self.branch {
            cfg.set("branch", b)?;
        }
        if self.asymptotic {
            cfg.set("asymptotic", true)?;
        }
        if let Some(o) = &self.output {
            cfg.set("output", o.display())?;
        }
        if let Some(c) = &self.cache_dir {
            cfg.set("cache_dir", c.display())?;
        }
        Ok(cfg)
    }
}

/// `v` with 12 significant digits, trailing zeros removed.
fn sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let s = format!("{:.*}", (11 - exp).max(0) as usize, v);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{v:.11e}");
        let (m, e) = s.split_once('e').unwrap_or((&s, "0"));
        let m = if m.contains('.') {
            m.trim_end_matches('0').trim_end_matches('.')
        } else {
            m
        };
        format!("{m}e{e}")
    }
}

fn emit(key: &str, v: f64) {
    println!("{key}={}", sig12(v));
}

fn classify(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidParams(_) | Error::Io { .. } | Error::Domain { .. } => EXIT_CONFIG,
        _ => EXIT_PARTIAL,
    }
}

fn eval(q: EvalQuantity, cfg: &RunConfig) -> photon_transport::Result<()> {
    let p = cfg.params(MediumParams::default())?;
    let num = cfg.numerics()?;
    let asymptotic = cfg.get_bool("asymptotic")?.unwrap_or(false);
    let flux = cfg.f64_or("flux", 1.0)?;
    let kvz = cfg.f64_or("kvz", 0.0)?;
    match q {
        EvalQuantity::Alpha => {
            let a = alpha(&p, cfg.f64_or("varpi", 0.0)?)?;
            emit("alpha_re", a.re);
            emit("alpha_im", a.im);
        }
        EvalQuantity::PsiBZero => {
            let v = if asymptotic {
                psi_b_zero_asymptotic(&p)?
            } else {
                psi_b_zero(&p, &num)?
            };
            emit("psi_b_zero_re", v.re);
            emit("psi_b_zero_im", v.im);
        }
        EvalQuantity::PsiSZero => {
            let v = if asymptotic {
                psi_s_zero_asymptotic(&p)?
            } else {
                psi_s_zero(&p, &num)?
            };
            emit("psi_s_zero", v);
        }
        EvalQuantity::G2Zero => {
            let z = g2_zero(&p, &num)?;
            emit("g2_zero", z.g2);
            emit("psi_b_zero_re", z.psi_b.re);
            emit("psi_b_zero_im", z.psi_b.im);
            emit("psi_s_zero", z.psi_s);
        }
        EvalQuantity::OdA => {
            let branch = cfg.usize_or("branch", 0)? as u32;
            let a = match (branch, asymptotic) {
                (0, false) => solve_od_a_resonant(&p.with_delta(0.0), &num)?,
                (0, true) => solve_od_a_asymptotic(&p.with_delta(0.0))?,
                (n, false) => solve_detuned_exact(&p, n, &num)?,
                (n, true) => solve_detuned_branch(p.beta, n)?,
            };
            emit("od_a", a.od_a);
            emit("delta_a", a.delta_a);
            emit("residual", a.residual);
        }
        EvalQuantity::G2Floor => {
            if asymptotic {
                emit("g2_floor", g2_floor_asymptotic(&p)?);
            } else {
                let p = p.with_delta(0.0);
                let od = match cfg.get_f64("od")? {
                    Some(od) => od,
                    None => solve_od_a_resonant(&p, &num)?.od_a,
                };
                emit("g2_floor", g2_floor_open(&p.with_od(od), &num)?);
                emit("od", od);
            }
        }
        EvalQuantity::Saturation => emit("S", saturation(&p, flux)?),
        EvalQuantity::Hwhm => emit("hwhm", voigt_hwhm(&p)),
        EvalQuantity::SteadyState => {
            let s = steady_state(&p, flux, kvz)?;
            emit("s11", s.s11);
            emit("s22", s.s22);
            emit("s12_re", s.s12.re);
            emit("s12_im", s.s12.im);
            emit("S", s.saturation);
        }
        EvalQuantity::Diffusion => {
            let s = steady_state(&p, flux, kvz)?;
            let d = diffusion_matrix(&s, &p);
            for a in Index::ORDER {
                for b in Index::ORDER {
                    let v = d.get(a, b);
                    let key = format!("D_{}_{}", a.label(), b.label());
                    emit(&format!("{key}_re"), v.re);
                    emit(&format!("{key}_im"), v.im);
                }
            }
        }
    }
    Ok(())
}

fn run_figure(name: &str, to_stdout: bool, cfg: &RunConfig) -> photon_transport::Result<u8> {
    let name: FigureName = name.parse()?;
    let table = figure(name, cfg)?;
    if to_stdout {
        table.write_csv(std::io::stdout().lock())?;
    } else {
        let path = table.save(&cfg.output_dir(), name)?;
        eprintln!("{name}: {} rows written to {}", table.rows.len(), path.display());
    }
    if table.failed > 0 {
        eprintln!("{name}: {} grid points did not converge", table.failed);
        return Ok(EXIT_PARTIAL);
    }
    Ok(0)
}

fn run_selftest(quick: bool, num: &Numerics) -> u8 {
    let outcomes = selftest::run(quick, num);
    let mut failed = Vec::new();
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status} {:<36} {:>8.3} s", o.name, o.seconds);
        if !o.passed {
            println!("     {}", o.detail);
            failed.push(o.name);
        }
    }
    let total: f64 = outcomes.iter().map(|o| o.seconds).sum();
    if failed.is_empty() {
        println!("all {} checks passed in {total:.2} s", outcomes.len());
        0
    } else {
        println!("{} of {} checks failed: {}", failed.len(), outcomes.len(), failed.join(", "));
        EXIT_SELFTEST
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match cli.opts.config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let code = match cli.command {
        Command::Figure { name, stdout } => run_figure(&name, stdout, &cfg).unwrap_or_else(|e| {
            eprintln!("error: {e}");
            classify(&e)
        }),
        Command::Eval { quantity } => eval(quantity, &cfg).map_or_else(
            |e| {
                eprintln!("error: {e}");
                classify(&e)
            },
            |_| 0,
        ),
        Command::Selftest { quick } => match cfg.numerics() {
            Ok(num) => run_selftest(quick, &num),
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_CONFIG
            }
        },
        Command::Keys => {
            for (k, d) in KEYS {
                println!("{k:<14} {d}");
            }
            0
        }
    };
    ExitCode::from(code)
}
