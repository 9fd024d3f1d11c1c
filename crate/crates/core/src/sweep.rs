//! Parallel parameter sweeps with deterministic output and an on-disk cache.
//!
//! Cells are ordered lexicographically over the axes, first axis outermost.
//! Each cell depends only on its own parameters, so the result is identical
//! for any worker count. Wall times are recorded per cell but excluded from
//! [`SweepResult::canonical_bytes`] and from equality of results.
//!
//! A cache entry is one file `<spec_hash>.sweep`: a JSON header line
//! (engine version, spec echo, cell count, values per cell), then per cell a
//! converged byte, the values and the wall time as little-endian `f64`.

use crate::correlation::{g2_at, g2_zero};
use crate::error::{Error, Result};
use crate::medium::MediumParams;
use crate::parallel::parallel_map;
use crate::quadrature::Numerics;
use crate::solver::{g2_floor_open, solve_od_a_resonant};
use crate::spectra::{psi_b_zero, psi_s_zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Version string mixed into every spec hash.
pub const ENGINE_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "/sweep-1");
pub const DEFAULT_CAP: usize = 1_000_000;
/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "PHOTON_TRANSPORT_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisName {
    Od,
    Delta,
    Kv0,
    Beta,
    GammaSmall,
}

impl AxisName {
    pub fn label(self) -> &'static str {
        match self {
            AxisName::Od => "od",
            AxisName::Delta => "delta",
            AxisName::Kv0 => "kv0",
            AxisName::Beta => "beta",
            AxisName::GammaSmall => "gamma_small",
        }
    }

    fn apply(self, p: MediumParams, v: f64) -> MediumParams {
        match self {
            AxisName::Od => p.with_od(v),
            AxisName::Delta => p.with_delta(v),
            AxisName::Kv0 => p.with_kv0(v),
            AxisName::Beta => p.with_beta(v),
            AxisName::GammaSmall => p.with_gamma(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: AxisName,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Quantity {
    /// `g2(0)`.
    G2Zero,
    /// Real and imaginary part of `psi_b(0)`.
    PsiBZero,
    PsiSZero,
    /// Resonant antibunching depth; the `od` and `delta` of the cell are ignored.
    OdA,
    /// Antibunching depth and the `g2(0)` floor there, `[od_a, g2_floor]`.
    FloorAtOdA,
    /// `g2` at the listed delays.
    G2Tau { tau: Vec<f64> },
}

impl Quantity {
    /// Column names of the values of one cell.
    pub fn columns(&self) -> Vec<String> {
        match self {
            Quantity::G2Zero => vec!["g2_zero".into()],
            Quantity::PsiBZero => vec!["psi_b_zero_re".into(), "psi_b_zero_im".into()],
            Quantity::PsiSZero => vec!["psi_s_zero".into()],
            Quantity::OdA => vec!["od_a".into()],
            Quantity::FloorAtOdA => vec!["od_a".into(), "g2_floor".into()],
            Quantity::G2Tau { tau } => (0..tau.len()).map(|k| format!("g2_tau{k}")).collect(),
        }
    }

    pub fn width(&self) -> usize {
        match self {
            Quantity::PsiBZero | Quantity::FloorAtOdA => 2,
            Quantity::G2Tau { tau } => tau.len(),
            _ => 1,
        }
    }

    fn eval(&self, p: &MediumParams, num: &Numerics) -> Result<Vec<f64>> {
        p.validate()?;
        Ok(match self {
            Quantity::G2Zero => vec![g2_zero(p, num)?.g2],
            Quantity::PsiBZero => {
                let v = psi_b_zero(p, num)?;
                vec![v.re, v.im]
            }
            Quantity::PsiSZero => vec![psi_s_zero(p, num)?],
            Quantity::OdA => vec![solve_od_a_resonant(&p.with_delta(0.0), num)?.od_a],
            Quantity::FloorAtOdA => {
                let od_a = solve_od_a_resonant(&p.with_delta(0.0), num)?.od_a;
                vec![od_a, g2_floor_open(&p.with_delta(0.0).with_od(od_a), num)?]
            }
            Quantity::G2Tau { tau } => g2_at(p, tau, num)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: MediumParams,
    pub axes: Vec<Axis>,
    pub quantity: Quantity,
    pub numerics: Numerics,
    /// Largest allowed number of cells.
    pub cap: usize,
}

impl SweepSpec {
    pub fn new(base: MediumParams, axes: Vec<Axis>, quantity: Quantity) -> Self {
        SweepSpec {
            base,
            axes,
            quantity,
            numerics: Numerics::default(),
            cap: DEFAULT_CAP,
        }
    }

    /// Number of cells, saturating on overflow.
    pub fn cell_count(&self) -> usize {
        self.axes
            .iter()
            .fold(1usize, |n, a| n.saturating_mul(a.values.len()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.iter().any(|a| a.values.is_empty()) {
            return Err(Error::Config("sweep axes must be non-empty".into()));
        }
        for (i, a) in self.axes.iter().enumerate() {
            if self.axes[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::Config(format!("axis {} given twice", a.name.label())));
            }
        }
        let cells = self.cell_count();
        if cells > self.cap {
            return Err(Error::CapExceeded {
                cells,
                cap: self.cap,
            });
        }
        Ok(())
    }

    /// Parameters of cell `k` in lexicographic order.
    pub fn cell_params(&self, k: usize) -> MediumParams {
        let mut p = self.base;
        let mut rest = k;
        for a in self.axes.iter().rev() {
            let n = a.values.len();
            p = a.name.apply(p, a.values[rest % n]);
            rest /= n;
        }
        p
    }

    /// Hex SHA-256 of the spec echo and the engine version.
    pub fn hash(&self) -> String {
        self.hash_with(ENGINE_VERSION)
    }

    pub fn hash_with(&self, engine: &str) -> String {
        let mut h = Sha256::new();
        h.update(engine.as_bytes());
        h.update([0u8]);
        h.update(serde_json::to_vec(self).expect("spec serializes"));
        hex::encode(h.finalize())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Cell {
    pub params: MediumParams,
    /// NaN when the cell failed.
    pub values: Vec<f64>,
    pub converged: bool,
    /// Seconds spent on the cell.
    pub wall_time: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params
            && self.converged == other.converged
            && self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec_hash: String,
    pub engine: String,
    pub spec: SweepSpec,
    pub cells: Vec<Cell>,
}

impl SweepResult {
    pub fn all_converged(&self) -> bool {
        self.cells.iter().all(|c| c.converged)
    }

    pub fn failed_cells(&self) -> usize {
        self.cells.iter().filter(|c| !c.converged).count()
    }

    /// Header line and cell payload without wall times.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = self.header_line().into_bytes();
        for c in &self.cells {
            out.push(c.converged as u8);
            for v in &c.values {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    fn header_line(&self) -> String {
        let h = Header {
            engine: self.engine.clone(),
            spec_hash: self.spec_hash.clone(),
            cells: self.cells.len(),
            width: self.spec.quantity.width(),
            spec: self.spec.clone(),
        };
        let mut s = serde_json::to_string(&h).expect("header serializes");
        s.push('\n');
        s
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    engine: String,
    spec_hash: String,
    cells: usize,
    width: usize,
    spec: SweepSpec,
}

/// Evaluates every cell on `jobs` workers (`0` for all cores).
pub fn run_sweep(spec: &SweepSpec, jobs: usize) -> Result<SweepResult> {
    spec.validate()?;
    let idx: Vec<usize> = (0..spec.cell_count()).collect();
    let width = spec.quantity.width();
    let cells = parallel_map(&idx, jobs, |&k| {
        let params = spec.cell_params(k);
        let start = Instant::now();
        let out = spec.quantity.eval(&params, &spec.numerics);
        let wall_time = start.elapsed().as_secs_f64();
        match out {
            Ok(values) if values.iter().all(|v| v.is_finite()) => Cell {
                params,
                values,
                converged: true,
                wall_time,
            },
            other => {
                if let Err(e) = other {
                    log::debug!("cell {k} failed: {e}");
                }
                Cell {
                    params,
                    values: vec![f64::NAN; width],
                    converged: false,
                    wall_time,
                }
            }
        }
    });
    Ok(SweepResult {
        spec_hash: spec.hash(),
        engine: ENGINE_VERSION.to_string(),
        spec: spec.clone(),
        cells,
    })
}

/// Directory of cached sweep results.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cache {
    pub dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// The configured directory if given, else [`CACHE_ENV`], else none.
    pub fn resolve(configured: Option<&Path>) -> Option<Cache> {
        configured
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .filter(|d| !d.as_os_str().is_empty())
            .map(Cache::new)
    }

    pub fn path_for(&self, spec_hash: &str) -> PathBuf {
        self.dir.join(format!("{spec_hash}.sweep"))
    }

    /// Stored result for `spec_hash`, if present and readable under the
    /// current engine version. Corrupt or mismatched entries are deleted.
    pub fn lookup(&self, spec_hash: &str) -> Result<Option<SweepResult>> {
        let path = self.path_for(spec_hash);
        let file = match fs::File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::io(&path, e)),
        };
        match read_entry(file, spec_hash) {
            Ok(Some(r)) => Ok(Some(r)),
            Ok(None) => {
                log::warn!("evicting cache entry {}", path.display());
                fs::remove_file(&path).map_err(|e| Error::io(&path, e))?;
                Ok(None)
            }
            Err(e) => Err(Error::io(&path, e)),
        }
    }

    /// Writes `r` atomically (temporary file, then rename).
    pub fn store(&self, r: &SweepResult) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let path = self.path_for(&r.spec_hash);
        let tmp = self.dir.join(format!(".{}.{}.tmp", r.spec_hash, std::process::id()));
        let mut bytes = r.header_line().into_bytes();
        for c in &r.cells {
            bytes.push(c.converged as u8);
            for v in &c.values {
                bytes.extend_from_slice(&v.to_le_bytes());
            }
            bytes.extend_from_slice(&c.wall_time.to_le_bytes());
        }
        let write = || -> std::io::Result<()> {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&bytes)?;
            f.sync_all()?;
            fs::rename(&tmp, &path)
        };
        write().map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }
}

// Ok(None) for a corrupt or mismatched entry.
fn read_entry(file: fs::File, spec_hash: &str) -> std::io::Result<Option<SweepResult>> {
    let mut reader = BufReader::new(file);
    let mut line = String::new();
    if reader.read_line(&mut line).is_err() {
        return Ok(None);
    }
    let h: Header = match serde_json::from_str(line.trim_end()) {
        Ok(h) => h,
        Err(_) => return Ok(None),
    };
    if h.engine != ENGINE_VERSION
        || h.spec_hash != spec_hash
        || h.spec.hash() != spec_hash
        || h.cells != h.spec.cell_count()
        || h.width != h.spec.quantity.width()
    {
        return Ok(None);
    }
    let mut payload = Vec::new();
    reader.read_to_end(&mut payload)?;
    let stride = 1 + 8 * (h.width + 1);
    if payload.len() != stride * h.cells {
        return Ok(None);
    }
    let f64_at = |b: &[u8], i: usize| f64::from_le_bytes(b[i..i + 8].try_into().expect("8 bytes"));
    let mut cells = Vec::with_capacity(h.cells);
    for (k, b) in payload.chunks_exact(stride).enumerate() {
        if b[0] > 1 {
            return Ok(None);
        }
        cells.push(Cell {
            params: h.spec.cell_params(k),
            values: (0..h.width).map(|j| f64_at(b, 1 + 8 * j)).collect(),
            converged: b[0] == 1,
            wall_time: f64_at(b, 1 + 8 * h.width),
        });
    }
    Ok(Some(SweepResult {
        spec_hash: h.spec_hash,
        engine: h.engine,
        spec: h.spec,
        cells,
    }))
}

/// Looks `spec` up in `cache` and runs it on a miss, storing the result.
/// Returns the result and whether it came from the cache.
pub fn run_sweep_cached(spec: &SweepSpec, jobs: usize, cache: Option<&Cache>) -> Result<(SweepResult, bool)> {
    spec.validate()?;
    if let Some(c) = cache {
        if let Some(r) = c.lookup(&spec.hash())? {
            return Ok((r, true));
        }
    }
    let r = run_sweep(spec, jobs)?;
    if let Some(c) = cache {
        c.store(&r)?;
    }
    Ok((r, false))
}
