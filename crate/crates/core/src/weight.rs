//! Graph weights.
//!
//! Wheel weights are exact rationals built from the modified Bernoulli
//! numbers `ŝ_l`, the coefficients of `½ log(sinh(x/2) / (x/2))`. General
//! weights are estimated by Monte Carlo over the configuration space with
//! the first aerial vertex fixed at `i`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::f64::consts::{PI, TAU};
use std::path::{Path, PathBuf};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{canonical_hash, edge_count, AdmissibleGraph};
use crate::rational::{int, rat, sign_pow, Rational};
use crate::series::UnivariateSeries;

/// `(e^{x/2} - e^{-x/2}) / x` through degree `cap`.
pub(crate) fn sinh_half_quotient(cap: usize) -> UnivariateSeries {
    let e = UnivariateSeries::exp_x(cap + 1);
    let num = &e.rescale_var(&rat(1, 2)) - &e.rescale_var(&rat(-1, 2));
    num.div_x().expect("numerator vanishes at 0")
}

/// `Σ ŝ_l x^l` through degree `cap`.
pub fn modified_bernoulli_series(cap: usize) -> UnivariateSeries {
    sinh_half_quotient(cap)
        .log()
        .expect("constant term is 1")
        .scale(&rat(1, 2))
}

/// Same series with the logarithm taken by composition with `log(1 + u)`.
pub fn modified_bernoulli_series_by_composition(cap: usize) -> UnivariateSeries {
    sinh_half_quotient(cap)
        .log_by_composition()
        .expect("constant term is 1")
        .scale(&rat(1, 2))
}

/// `ŝ_l`.
pub fn modified_bernoulli(l: usize) -> Rational {
    modified_bernoulli_series(l).coeff(l)
}

/// `W_l = -(-1)^{(l+1)l/2} l ŝ_l`.
pub fn wheel_weight_closed(l: usize) -> Result<Rational> {
    if l == 0 {
        return Err(Error::InvalidGraph("wheels need at least one spoke".into()));
    }
    let s = modified_bernoulli(l);
    Ok(-(sign_pow(((l + 1) * l / 2) as i64) * int(l as i64) * s))
}

/// Point of the closed upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    fn conj(self) -> Point {
        Point::new(self.x, -self.y)
    }

    fn recip(self) -> Point {
        let d = self.x * self.x + self.y * self.y;
        Point::new(self.x / d, -self.y / d)
    }

    fn div(self, o: Point) -> Point {
        let r = o.recip();
        Point::new(self.x * r.x - self.y * r.y, self.x * r.y + self.y * r.x)
    }

    fn dist(self, o: Point) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }
}

/// Hyperbolic angle `arg((q - p)/(q - p̄))` in `[0, 2π)`.
pub fn angle(p: Point, q: Point) -> Result<f64> {
    if p.dist(q) == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let z = q.sub(p).div(q.sub(p.conj()));
    let a = z.y.atan2(z.x);
    Ok(if a < 0.0 { a + TAU } else { a })
}

/// Gradient of `angle/2π` with respect to `(x_p, y_p, x_q, y_q)`.
pub fn angle_gradient(p: Point, q: Point) -> [f64; 4] {
    let a = q.sub(p).recip();
    let b = q.sub(p.conj()).recip();
    let k = 1.0 / TAU;
    // F = 1/(q-p) - 1/(q-p̄)
    let (fx, fy) = (a.x - b.x, a.y - b.y);
    [
        k * (-a.y + b.y),
        k * (-a.x - b.x),
        k * fy,
        k * fx,
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        Self {
            samples: 100_000,
            seed: 0,
            workers: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightEstimate {
    /// Signed weight `(-1)^{|E|(|E|-1)/2} ∫ κ`.
    pub value: f64,
    /// Unsigned integral `∫ κ`.
    pub integral: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub rejected: u64,
    pub digest: String,
}

impl WeightEstimate {
    pub fn discard_fraction(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.rejected as f64 / self.samples as f64
        }
    }
}

const CHUNK: u64 = 8192;
const MARGIN: f64 = 1e-9;
const MIX: f64 = 0.5;

fn anchor_radius(a: Point) -> f64 {
    if a.y > 0.0 {
        0.5 * a.y
    } else {
        0.5 * a.x.abs().max(1.0)
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
fn determinant(mut a: Vec<f64>, n: usize) -> f64 {
    let mut det = 1.0;
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&i, &j| a[i * n + c].abs().total_cmp(&a[j * n + c].abs()))
            .unwrap();
        if a[piv * n + c] == 0.0 {
            return 0.0;
        }
        if piv != c {
            for k in 0..n {
                a.swap(piv * n + k, c * n + k);
            }
            det = -det;
        }
        let d = a[c * n + c];
        det *= d;
        for r in c + 1..n {
            let f = a[r * n + c] / d;
            if f != 0.0 {
                for k in c..n {
                    a[r * n + k] -= f * a[c * n + k];
                }
            }
        }
    }
    det
}

struct Sampler<'a> {
    n: usize,
    m: usize,
    edges: &'a [(usize, usize)],
}

impl Sampler<'_> {
    /// One integrand value (Jacobian determinant divided by the sampling
    /// density), or `None` when two points fall within the rejection margin.
    ///
    /// Ground points are drawn first through `q = tan(π(u - ½))` on sorted
    /// uniforms. Each further aerial point comes, with equal odds, from a
    /// planar law with an `r^{-3}` tail around `i` or from a `1/r` law around
    /// one of the points already placed, so that collisions and escapes to
    /// infinity are both sampled densely.
    fn sample<R: Rng>(&self, rng: &mut R, pts: &mut Vec<Point>, jac: &mut Vec<f64>) -> Option<f64> {
        let (n, m) = (self.n, self.m);
        pts.clear();
        pts.push(Point::new(0.0, 1.0));
        let mut weight = 1.0;
        let mut us: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
        us.sort_by(f64::total_cmp);
        let mut grounds = Vec::with_capacity(m);
        for u in us {
            let q = (PI * (u - 0.5)).tan();
            grounds.push(Point::new(q, 0.0));
            weight *= PI * (1.0 + q * q);
        }
        for k in 2..=m {
            weight /= k as f64;
        }
        for _ in 1..n {
            let anchors = pts.len() + grounds.len();
            let z = if rng.random::<f64>() < MIX {
                // planar law (1/2π)(1 + r²)^{-3/2} around i, r = |z - i|
                let u: f64 = rng.random();
                let r = ((1.0 - u).powi(-2) - 1.0).sqrt();
                let th = TAU * rng.random::<f64>();
                Point::new(r * th.cos(), 1.0 + r * th.sin())
            } else {
                let pick = rng.random_range(0..anchors);
                let a = if pick < pts.len() { pts[pick] } else { grounds[pick - pts.len()] };
                let radius = anchor_radius(a);
                let r = radius * rng.random::<f64>();
                let th = if a.y > 0.0 { TAU } else { PI } * rng.random::<f64>();
                Point::new(a.x + r * th.cos(), a.y + r * th.sin())
            };
            if !z.x.is_finite() || !z.y.is_finite() {
                return None;
            }
            if z.y <= 0.0 {
                // outside the half-plane: a legitimate zero sample
                return Some(0.0);
            }
            let r2 = z.x * z.x + (z.y - 1.0) * (z.y - 1.0);
            let mut density = MIX / (TAU * (1.0 + r2).powf(1.5));
            let mut near = 0.0;
            for a in pts.iter().chain(grounds.iter()) {
                let radius = anchor_radius(*a);
                let r = z.dist(*a);
                if r < radius && r > 0.0 {
                    let turn = if a.y > 0.0 { TAU } else { PI };
                    near += 1.0 / (turn * r * radius);
                }
            }
            density += (1.0 - MIX) * near / anchors as f64;
            weight /= density;
            pts.push(z);
        }
        pts.extend(grounds);
        for a in 0..pts.len() {
            if !pts[a].x.is_finite() || !pts[a].y.is_finite() {
                return None;
            }
            for b in a + 1..pts.len() {
                if pts[a].dist(pts[b]) < MARGIN {
                    return None;
                }
            }
        }
        let dim = self.edges.len();
        jac.clear();
        jac.resize(dim * dim, 0.0);
        // columns: x_2, y_2, ..., x_n, y_n, q_1, ..., q_m
        let column = |v: usize| -> Option<usize> {
            if v == 1 {
                None
            } else if v <= n {
                Some(2 * (v - 2))
            } else {
                Some(2 * (n - 1) + (v - n - 1))
            }
        };
        for (row, &(s, t)) in self.edges.iter().enumerate() {
            let g = angle_gradient(pts[s - 1], pts[t - 1]);
            if let Some(c) = column(s) {
                jac[row * dim + c] += g[0];
                jac[row * dim + c + 1] += g[1];
            }
            if let Some(c) = column(t) {
                jac[row * dim + c] += g[2];
                if t <= n {
                    jac[row * dim + c + 1] += g[3];
                }
            }
        }
        Some(determinant(jac.clone(), dim) * weight)
    }
}

#[derive(Clone, Copy, Default)]
struct Partial {
    sum: f64,
    sumsq: f64,
    rejected: u64,
}

fn run_chunks(sampler: &Sampler<'_>, cfg: &MonteCarloConfig) -> Partial {
    let chunks = cfg.samples.div_ceil(CHUNK);
    let work = |c: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(c);
        let count = CHUNK.min(cfg.samples - c * CHUNK);
        let mut p = Partial::default();
        let (mut pts, mut jac) = (Vec::new(), Vec::new());
        for _ in 0..count {
            match sampler.sample(&mut rng, &mut pts, &mut jac) {
                Some(v) => {
                    p.sum += v;
                    p.sumsq += v * v;
                }
                None => p.rejected += 1,
            }
        }
        p
    };
    let parts: Vec<Partial> = if cfg.workers <= 1 {
        (0..chunks).map(work).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .expect("thread pool");
        pool.install(|| (0..chunks).into_par_iter().map(work).collect())
    };
    parts.into_iter().fold(Partial::default(), |a, b| Partial {
        sum: a.sum + b.sum,
        sumsq: a.sumsq + b.sumsq,
        rejected: a.rejected + b.rejected,
    })
}

/// Monte Carlo weight of `g` with edges taken in the given order
/// (a permutation of `g.edges()`).
pub fn mc_weight_ordered(g: &AdmissibleGraph, order: &[(usize, usize)], cfg: &MonteCarloConfig) -> Result<WeightEstimate> {
    let dim = 2 * g.n() + g.m();
    if g.epsilon() != 0 || dim < 2 || edge_count(g.n(), g.m(), 0)? != order.len() {
        return Err(Error::InvalidGraph("edge count differs from the configuration space dimension".into()));
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != g.edges() {
        return Err(Error::InvalidGraph("edge order is not a permutation of the graph's edges".into()));
    }
    let digest = canonical_hash(g);
    let e = order.len();
    let sign = if (e * e.saturating_sub(1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    if g.n() == 0 {
        // two ground points modulo translation and dilation: a single point
        return Ok(WeightEstimate {
            value: sign,
            integral: 1.0,
            stderr: 0.0,
            samples: cfg.samples,
            seed: cfg.seed,
            workers: cfg.workers,
            rejected: 0,
            digest,
        });
    }
    if cfg.samples < 2 {
        return Err(Error::Parse("at least two samples are needed".into()));
    }
    let sampler = Sampler {
        n: g.n(),
        m: g.m(),
        edges: order,
    };
    let p = run_chunks(&sampler, cfg);
    let n = cfg.samples as f64;
    let mean = p.sum / n;
    let var = ((p.sumsq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(WeightEstimate {
        value: sign * mean,
        integral: mean,
        stderr: (var / n).sqrt(),
        samples: cfg.samples,
        seed: cfg.seed,
        workers: cfg.workers,
        rejected: p.rejected,
        digest,
    })
}

/// Monte Carlo weight with edges ordered by source, then target.
pub fn mc_weight(g: &AdmissibleGraph, cfg: &MonteCarloConfig) -> Result<WeightEstimate> {
    mc_weight_ordered(g, g.edges(), cfg)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
struct CacheKey {
    digest: String,
    samples: u64,
    seed: u64,
    workers: usize,
}

/// JSON-lines cache of weight estimates.
#[derive(Debug)]
pub struct WeightCache {
    path: PathBuf,
    records: BTreeMap<CacheKey, WeightEstimate>,
}

impl WeightCache {
    /// Loads the cache, skipping unreadable lines. Returns the warnings
    /// produced; when any line was bad the file is rewritten clean.
    pub fn open(path: impl AsRef<Path>) -> Result<(Self, Vec<String>)> {
        let path = path.as_ref().to_path_buf();
        let mut records = BTreeMap::new();
        let mut warnings = Vec::new();
        if path.exists() {
            let text = fs::read_to_string(&path).map_err(|e| Error::Io(e.to_string()))?;
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<WeightEstimate>(line) {
                    Ok(w) => {
                        records.insert(key_of(&w), w);
                    }
                    Err(e) => warnings.push(format!("{}:{}: dropped corrupt record ({e})", path.display(), i + 1)),
                }
            }
        }
        let cache = Self { path, records };
        if !warnings.is_empty() {
            cache.rewrite()?;
            warnings.push(format!("{}: cache rebuilt", cache.path.display()));
        }
        Ok((cache, warnings))
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, digest: &str, cfg: &MonteCarloConfig) -> Option<&WeightEstimate> {
        self.records.get(&CacheKey {
            digest: digest.to_string(),
            samples: cfg.samples,
            seed: cfg.seed,
            workers: cfg.workers,
        })
    }

    pub fn insert(&mut self, w: WeightEstimate) -> Result<()> {
        let line = serde_json::to_string(&w).map_err(|e| Error::Parse(e.to_string()))?;
        self.records.insert(key_of(&w), w);
        let mut f = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| Error::Io(e.to_string()))?;
        writeln!(f, "{line}").map_err(|e| Error::Io(e.to_string()))
    }

    /// Cached estimate or a fresh one, stored on the way out.
    pub fn get_or_compute(&mut self, g: &AdmissibleGraph, cfg: &MonteCarloConfig) -> Result<WeightEstimate> {
        if let Some(w) = self.get(&canonical_hash(g), cfg) {
            return Ok(w.clone());
        }
        let w = mc_weight(g, cfg)?;
        self.insert(w.clone())?;
        Ok(w)
    }

    fn rewrite(&self) -> Result<()> {
        let mut out = String::new();
        for w in self.records.values() {
            out.push_str(&serde_json::to_string(w).map_err(|e| Error::Parse(e.to_string()))?);
            out.push('\n');
        }
        fs::write(&self.path, out).map_err(|e| Error::Io(e.to_string()))
    }
}

fn key_of(w: &WeightEstimate) -> CacheKey {
    CacheKey {
        digest: w.digest.clone(),
        samples: w.samples,
        seed: w.seed,
        workers: w.workers,
    }
}

/// Exact wheel weights `W_2, W_4, ...` up to `max_l`, keyed by `l`.
pub fn wheel_weights(max_l: usize) -> BTreeMap<usize, Rational> {
    (1..=max_l)
        .map(|l| (l, wheel_weight_closed(l).expect("l ≥ 1")))
        .filter(|(_, w)| !w.is_zero())
        .collect()
}
