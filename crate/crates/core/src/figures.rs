//! Figure tables as CSV.
//!
//! Each figure is one table in long format (one row per grid point) except
//! `fig7`, which holds one `g2` column per Doppler width. Column order is
//! fixed and part of [`SCHEMA_VERSION`]; rates and frequencies are in units
//! of the natural linewidth.
//!
//! | name  | rows                               | columns |
//! |-------|------------------------------------|---------|
//! | fig3  | kv0 x od                           | `kv0 [Gamma]`, `od`, `psi_b(0) re`, `psi_b(0) im`, `psi_s(0) [2 gamma]` |
//! | fig4  | kv0                                | `kv0 [Gamma]`, `psi_0(0)/od`, `1/tau_half [Gamma]` |
//! | fig5a, fig5b, fig9b | od x delta           | `od`, `delta [Gamma]`, `g2(0)`, `g2(0) clamped`, `converged` |
//! | fig6  | beta x kv0                         | `beta`, `kv0 [Gamma]`, `od_a` |
//! | fig7  | scaled delay                       | `tau*dw_half`, `g2 (kv0=0)`, `g2 (kv0=1)`, `g2 (kv0=10)` |
//! | fig8  | beta x kv0                         | `beta`, `kv0 [Gamma]`, `od_a`, `g2(0) [gamma]` |

use crate::config::RunConfig;
use crate::correlation::{g2_at, linspace};
use crate::error::{Error, Result};
use crate::medium::{voigt_hwhm, MediumParams};
use crate::parallel::parallel_map;
use crate::quadrature::Numerics;
use crate::solver::{brent, solve_od_a_resonant};
use crate::spectra::psi_b_low_od_tau;
use crate::sweep::{run_sweep_cached, Axis, AxisName, Cache, Quantity, SweepResult, SweepSpec};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Version of the column layout of every figure table.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureName {
    Fig3,
    Fig4,
    Fig5a,
    Fig5b,
    Fig6,
    Fig7,
    Fig8,
    Fig9b,
}

impl FigureName {
    pub const ALL: [FigureName; 8] = [
        FigureName::Fig3,
        FigureName::Fig4,
        FigureName::Fig5a,
        FigureName::Fig5b,
        FigureName::Fig6,
        FigureName::Fig7,
        FigureName::Fig8,
        FigureName::Fig9b,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureName::Fig3 => "fig3",
            FigureName::Fig4 => "fig4",
            FigureName::Fig5a => "fig5a",
            FigureName::Fig5b => "fig5b",
            FigureName::Fig6 => "fig6",
            FigureName::Fig7 => "fig7",
            FigureName::Fig8 => "fig8",
            FigureName::Fig9b => "fig9b",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            FigureName::Fig3 => "psi_b(0) and psi_s(0) against optical depth for several Doppler widths",
            FigureName::Fig4 => "low-depth psi_0(0) and spectral width against Doppler width",
            FigureName::Fig5a => "g2(0) map over optical depth and detuning, cold atoms",
            FigureName::Fig5b => "g2(0) map over optical depth and detuning, kv0 = 10",
            FigureName::Fig6 => "antibunching depth against Doppler width",
            FigureName::Fig7 => "g2 against scaled delay at the antibunching depth",
            FigureName::Fig8 => "g2(0) floor of the nearly closed system against Doppler width",
            FigureName::Fig9b => "g2(0) map at beta = 0.007",
        }
    }
}

impl fmt::Display for FigureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = FigureName::ALL.iter().map(|n| n.as_str()).collect();
                Error::Config(format!("unknown figure `{s}`, expected one of {}", names.join(", ")))
            })
    }
}

/// A figure table; `failed` counts grid points that did not converge and
/// hold NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub failed: usize,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Config(format!("writing CSV: {e}"));
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format_value(*v)))
                .map_err(csv_err)?;
        }
        w.flush()
            .map_err(|e| Error::Config(format!("writing CSV: {e}")))
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
    }

    /// Writes `<dir>/<name>.csv` and returns its path.
    pub fn save(&self, dir: &Path, name: FigureName) -> Result<PathBuf> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(format!("{name}.csv"));
        let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        self.write_csv(std::io::BufWriter::new(file))?;
        Ok(path)
    }
}

/// Shortest round-trip decimal; exponent form outside `[1e-4, 1e15)`.
pub fn format_value(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

struct Context<'a> {
    cfg: &'a RunConfig,
    num: Numerics,
    jobs: usize,
    cache: Option<Cache>,
}

impl Context<'_> {
    fn sweep(&self, base: MediumParams, axes: Vec<Axis>, quantity: Quantity) -> Result<SweepResult> {
        let mut spec = SweepSpec::new(base, axes, quantity);
        spec.numerics = self.num;
        let (r, hit) = run_sweep_cached(&spec, self.jobs, self.cache.as_ref())?;
        if hit {
            log::info!("sweep {} served from cache", &r.spec_hash[..12]);
        }
        Ok(r)
    }

    /// A configured single value, else the baked-in list.
    fn values_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        Ok(match self.cfg.get_f64(key)? {
            Some(v) => vec![v],
            None => default.to_vec(),
        })
    }

    fn range(&self, name: &str, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
        let lo = self.cfg.f64_or(&format!("{name}_min"), lo)?;
        let hi = self.cfg.f64_or(&format!("{name}_max"), hi)?;
        let n = self.cfg.usize_or(&format!("{name}_points"), n)?;
        if n == 0 || !(hi >= lo) {
            return Err(Error::Config(format!("empty {name} range [{lo}, {hi}] with {n} points")));
        }
        Ok(linspace(lo, hi, n))
    }
}

fn axis(name: AxisName, values: Vec<f64>) -> Axis {
    Axis { name, values }
}

const DOPPLER_SET: [f64; 5] = [0.0, 1.0, 5.0, 10.0, 20.0];
const BETA_SET: [f64; 3] = [1e-2, 1e-3, 1e-4];
const FIG7_KV0: [f64; 3] = [0.0, 1.0, 10.0];

/// Computes figure `name` with the defaults baked into it, overridden by
/// `cfg`.
pub fn figure(name: FigureName, cfg: &RunConfig) -> Result<Table> {
    let ctx = Context {
        cfg,
        num: cfg.numerics()?,
        jobs: cfg.jobs()?,
        cache: Cache::resolve(cfg.cache_dir().as_deref()),
    };
    match name {
        FigureName::Fig3 => fig3(&ctx),
        FigureName::Fig4 => fig4(&ctx),
        FigureName::Fig5a => density_map(&ctx, MediumParams::closed(0.0, 0.0, 1e-2, 1.0), (0.0, 10.0), 1.5),
        FigureName::Fig5b => density_map(&ctx, MediumParams::closed(0.0, 10.0, 1e-2, 1.0), (0.0, 10.0), 15.0),
        FigureName::Fig6 => fig6(&ctx),
        FigureName::Fig7 => fig7(&ctx),
        FigureName::Fig8 => fig8(&ctx),
        FigureName::Fig9b => density_map(&ctx, MediumParams::closed(0.0, 0.0, 0.007, 1.0), (0.0, 8.0), 1.0),
    }
}

fn cols(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn fig3(ctx: &Context) -> Result<Table> {
    let base = ctx.cfg.params(MediumParams::default().with_gamma(1e-3))?;
    if base.gamma_small <= 0.0 && base.open_rates.is_none() {
        return Err(Error::Config("fig3 needs gamma > 0 to scale psi_s(0)".into()));
    }
    let rate = crate::solver::emission_rate(&base);
    let kv0 = ctx.values_or("kv0", &DOPPLER_SET)?;
    let od = match ctx.cfg.get_f64("od")? {
        Some(v) => vec![v],
        None => ctx.range("od", 0.0, 20.0, 81)?,
    };
    let axes = || vec![axis(AxisName::Kv0, kv0.clone()), axis(AxisName::Od, od.clone())];
    let b = ctx.sweep(base, axes(), Quantity::PsiBZero)?;
    let s = ctx.sweep(base, axes(), Quantity::PsiSZero)?;
    let mut rows = Vec::with_capacity(b.cells.len());
    let mut failed = 0;
    for (cb, cs) in b.cells.iter().zip(&s.cells) {
        if !(cb.converged && cs.converged) {
            failed += 1;
        }
        rows.push(vec![
            cb.params.kv0,
            cb.params.od,
            cb.values[0],
            cb.values[1],
            cs.values[0] / (2.0 * rate),
        ]);
    }
    Ok(Table {
        columns: cols(&["kv0 [Gamma]", "od", "psi_b(0) re", "psi_b(0) im", "psi_s(0) [2 gamma]"]),
        rows,
        failed,
    })
}

/// Delay at which `|f|` first falls to half of `|f(0)|`, scanning in steps
/// of `dt`.
fn half_width<F: FnMut(f64) -> Result<f64>>(mut f: F, dt: f64) -> Result<f64> {
    let half = 0.5 * f(0.0)?;
    let mut prev = 0.0;
    for k in 1..100_000 {
        let t = k as f64 * dt;
        if f(t)? <= half {
            let (root, _) = brent(|x| Ok(f(x)? - half), prev, t, 1e-12 * t, "psi_0 half width")?;
            return Ok(root);
        }
        prev = t;
    }
    Err(Error::NoRoot {
        what: "psi_0 half width".into(),
        lo: 0.0,
        hi: 100_000.0 * dt,
    })
}

fn fig4(ctx: &Context) -> Result<Table> {
    let base = ctx.cfg.params(MediumParams::default().with_od(1e-3))?;
    let kv0 = match ctx.cfg.get_f64("kv0")? {
        Some(v) => vec![v],
        None => ctx.range("kv0", 0.0, 20.0, 81)?,
    };
    let num = ctx.num;
    let out = parallel_map(&kv0, ctx.jobs, |&k| -> Result<(f64, f64)> {
        let p = base.with_kv0(k);
        let psi0 = psi_b_low_od_tau(&p, 0.0, &num)?;
        let dt = 0.05 / voigt_hwhm(&p);
        let tau_half = half_width(|t| Ok(psi_b_low_od_tau(&p, t, &num)?.norm()), dt)?;
        let scale = if p.od > 0.0 { p.od } else { 1.0 };
        Ok((psi0.re / scale, 1.0 / tau_half))
    });
    let mut failed = 0;
    let rows = kv0
        .iter()
        .zip(out)
        .map(|(k, r)| match r {
            Ok((a, b)) => vec![*k, a, b],
            Err(e) => {
                log::warn!("fig4 kv0 = {k}: {e}");
                failed += 1;
                vec![*k, f64::NAN, f64::NAN]
            }
        })
        .collect();
    Ok(Table {
        columns: cols(&["kv0 [Gamma]", "psi_0(0)/od", "1/tau_half [Gamma]"]),
        rows,
        failed,
    })
}

fn density_map(ctx: &Context, defaults: MediumParams, od: (f64, f64), delta: f64) -> Result<Table> {
    let base = ctx.cfg.params(defaults)?;
    let od = ctx.range("od", od.0, od.1, 200)?;
    let delta = ctx.range("delta", -delta, delta, 200)?;
    let clamp = ctx.cfg.f64_or("clamp", 2.0)?;
    let r = ctx.sweep(
        base,
        vec![axis(AxisName::Od, od), axis(AxisName::Delta, delta)],
        Quantity::G2Zero,
    )?;
    let rows = r
        .cells
        .iter()
        .map(|c| {
            let g = c.values[0];
            vec![
                c.params.od,
                c.params.delta,
                g,
                g.min(clamp),
                if c.converged { 1.0 } else { 0.0 },
            ]
        })
        .collect();
    Ok(Table {
        columns: cols(&["od", "delta [Gamma]", "g2(0)", "g2(0) clamped", "converged"]),
        rows,
        failed: r.failed_cells(),
    })
}

fn fig6(ctx: &Context) -> Result<Table> {
    let base = ctx.cfg.params(MediumParams::default())?;
    let beta = ctx.values_or("beta", &BETA_SET)?;
    let kv0 = ctx.range("kv0", 0.0, 20.0, 41)?;
    let r = ctx.sweep(
        base,
        vec![axis(AxisName::Beta, beta), axis(AxisName::Kv0, kv0)],
        Quantity::OdA,
    )?;
    let rows = r
        .cells
        .iter()
        .map(|c| vec![c.params.beta, c.params.kv0, c.values[0]])
        .collect();
    Ok(Table {
        columns: cols(&["beta", "kv0 [Gamma]", "od_a"]),
        rows,
        failed: r.failed_cells(),
    })
}

fn fig7(ctx: &Context) -> Result<Table> {
    let base = ctx.cfg.params(MediumParams::default())?;
    let x = ctx.range("tau", 0.0, 10.0, 401)?;
    let num = ctx.num;
    let curves = parallel_map(&FIG7_KV0, ctx.jobs, |&k| -> Result<Vec<f64>> {
        let p = base.with_kv0(k).with_delta(0.0);
        let od_a = solve_od_a_resonant(&p, &num)?.od_a;
        let p = p.with_od(od_a);
        let hwhm = voigt_hwhm(&p);
        let taus: Vec<f64> = x.iter().map(|v| v / hwhm).collect();
        g2_at(&p, &taus, &num)
    });
    let mut failed = 0;
    let curves: Vec<Vec<f64>> = curves
        .into_iter()
        .zip(FIG7_KV0)
        .map(|(c, k)| {
            c.unwrap_or_else(|e| {
                log::warn!("fig7 kv0 = {k}: {e}");
                failed += x.len();
                vec![f64::NAN; x.len()]
            })
        })
        .collect();
    let rows = x
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut row = vec![*v];
            row.extend(curves.iter().map(|c| c[i]));
            row
        })
        .collect();
    Ok(Table {
        columns: cols(&["tau*dw_half", "g2 (kv0=0)", "g2 (kv0=1)", "g2 (kv0=10)"]),
        rows,
        failed,
    })
}

fn fig8(ctx: &Context) -> Result<Table> {
    let base = ctx.cfg.params(MediumParams::default().with_gamma(0.01))?;
    let rate = crate::solver::emission_rate(&base);
    if rate <= 0.0 {
        return Err(Error::Config("fig8 needs a nonzero emission rate (gamma > 0)".into()));
    }
    let beta = ctx.values_or("beta", &BETA_SET[..2])?;
    let kv0 = ctx.range("kv0", 0.0, 20.0, 41)?;
    let r = ctx.sweep(
        base,
        vec![axis(AxisName::Beta, beta), axis(AxisName::Kv0, kv0)],
        Quantity::FloorAtOdA,
    )?;
    let rows = r
        .cells
        .iter()
        .map(|c| vec![c.params.beta, c.params.kv0, c.values[0], c.values[1] / rate])
        .collect();
    Ok(Table {
        columns: cols(&["beta", "kv0 [Gamma]", "od_a", "g2(0) [gamma]"]),
        rows,
        failed: r.failed_cells(),
    })
}
