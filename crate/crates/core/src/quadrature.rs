//! Globally adaptive Gauss-Kronrod (10/21 point) integration of complex
//! integrands, plus the shared numerical settings.

use crate::error::{Error, Result};
use crate::Complex;
use serde::{Deserialize, Serialize};

/// Tolerances and rule sizes shared by every integrating operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Numerics {
    /// Target error of the adaptive integrals, absolute and relative.
    pub tol: f64,
    /// Subdivision limit per adaptive integral.
    pub max_intervals: usize,
    /// Gauss-Hermite order for velocity averages with narrow Doppler width.
    pub hermite_order: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            tol: 1e-10,
            max_intervals: 4000,
            hermite_order: 64,
        }
    }
}

impl Numerics {
    pub fn with_tol(tol: f64) -> Self {
        Numerics {
            tol,
            ..Default::default()
        }
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_452_376,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Result of an adaptive integral.
#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub value: Complex,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: Complex,
    error: f64,
}

/// One 21-point Kronrod panel with the QUADPACK error heuristic.
pub fn gauss_kronrod_21<F: Fn(f64) -> Complex>(f: &F, a: f64, b: f64) -> (Complex, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[10];
    let mut resabs = fc.norm() * WGK[10];
    let mut resg = Complex::new(0.0, 0.0);
    let mut fv1 = [Complex::new(0.0, 0.0); 10];
    let mut fv2 = [Complex::new(0.0, 0.0); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += (f1 + f2) * WGK[j];
        resabs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            resg += (f1 + f2) * WG[j / 2];
        }
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[10] * (fc - reskh).norm();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).norm() + (fv2[j] - reskh).norm());
    }
    let hl = half.abs();
    let value = resk * half;
    resabs *= hl;
    resasc *= hl;
    let mut err = ((resk - resg) * half).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err)
}

/// Adaptive integral of `f` over `[a, b]` to `max(tol, tol * |I|)`.
pub fn integrate<F: Fn(f64) -> Complex>(
    f: F,
    a: f64,
    b: f64,
    num: &Numerics,
    what: &str,
) -> Result<Quad> {
    integrate_points(f, &[a, b], num, what)
}

/// Adaptive integral over `[points[0], points[last]]`, starting from the
/// panels delimited by the sorted breakpoints.
pub fn integrate_points<F: Fn(f64) -> Complex>(
    f: F,
    points: &[f64],
    num: &Numerics,
    what: &str,
) -> Result<Quad> {
    assert!(points.len() >= 2, "need at least two breakpoints");
    let mut pieces: Vec<Piece> = Vec::with_capacity(64);
    for w in points.windows(2) {
        if w[1] > w[0] {
            let (value, error) = gauss_kronrod_21(&f, w[0], w[1]);
            pieces.push(Piece {
                a: w[0],
                b: w[1],
                value,
                error,
            });
        }
    }
    if pieces.is_empty() {
        return Ok(Quad {
            value: Complex::new(0.0, 0.0),
            error: 0.0,
            intervals: 0,
        });
    }
    loop {
        let total: Complex = pieces.iter().map(|p| p.value).sum();
        let err: f64 = pieces.iter().map(|p| p.error).sum();
        let target = num.tol.max(num.tol * total.norm());
        if !total.re.is_finite() || !total.im.is_finite() {
            return Err(Error::NonConvergence {
                what: format!("{what}: non-finite integrand"),
                estimate: f64::INFINITY,
                tolerance: target,
            });
        }
        if err <= target {
            pieces.sort_by(|x, y| x.a.total_cmp(&y.a));
            let value = pieces.iter().map(|p| p.value).sum();
            return Ok(Quad {
                value,
                error: err,
                intervals: pieces.len(),
            });
        }
        let (idx, worst) = pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| {
                let m = 0.5 * (p.a + p.b);
                m > p.a && m < p.b && (p.b - p.a) > 1e-13 * p.a.abs().max(p.b.abs()).max(1e-300)
            })
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, p)| (i, *p))
            .unwrap_or((usize::MAX, pieces[0]));
        if idx == usize::MAX || pieces.len() >= num.max_intervals {
            return Err(Error::NonConvergence {
                what: format!("{what}: adaptive quadrature"),
                estimate: err,
                tolerance: target,
            });
        }
        let m = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gauss_kronrod_21(&f, worst.a, m);
        let (v2, e2) = gauss_kronrod_21(&f, m, worst.b);
        pieces[idx] = Piece {
            a: worst.a,
            b: m,
            value: v1,
            error: e1,
        };
        pieces.push(Piece {
            a: m,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
}

/// `int_a^inf f(x) dx` for `a > 0` through the map `x = a/u`.
pub fn integrate_to_infinity<F: Fn(f64) -> Complex>(
    f: F,
    a: f64,
    num: &Numerics,
    what: &str,
) -> Result<Quad> {
    assert!(a > 0.0, "lower limit must be positive");
    integrate(move |u: f64| f(a / u) * (a / (u * u)), 0.0, 1.0, num, what)
}

/// Average of `f(u)` over a Maxwell distribution of Doppler shifts
/// `u = kv0 * x` with weight `exp(-x^2)/sqrt(pi)`. `poles` lists real
/// parts of nearby singularities in `u` to seed the subdivision.
pub fn maxwell_average<F: Fn(f64) -> Complex>(
    f: F,
    kv0: f64,
    poles: &[f64],
    num: &Numerics,
    what: &str,
) -> Result<Complex> {
    if kv0 == 0.0 {
        return Ok(f(0.0));
    }
    const XMAX: f64 = 9.0;
    let mut pts = vec![-XMAX, XMAX];
    for &p in poles {
        let x = p / kv0;
        if x > -XMAX && x < XMAX {
            pts.push(x);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let g = move |x: f64| f(kv0 * x) * ((-x * x).exp() / crate::specfun::SQRT_PI);
    Ok(integrate_points(g, &pts, num, what)?.value)
}
