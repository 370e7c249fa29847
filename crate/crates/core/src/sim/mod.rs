//! Monte-Carlo estimation of randomized search ratios and the small
//! discretized search game.
//!
//! Sample `i` draws from a ChaCha8 generator seeded with the run seed on
//! stream `i`, and samples are reduced in fixed chunks in index order, so
//! estimates depend only on `(seed, n)` and not on the thread count.

mod game;

pub use game::{solve_small_game, GameConfig, GameSolution};

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::network::{ArcId, MetricNetwork, PointRef, Probe, EPS};
use crate::profile::rays;

pub type SimRng = ChaCha8Rng;

const CHUNK: usize = 256;
pub const MIN_SAMPLES: usize = 100;

/// A mixed strategy that can be sampled.
pub trait RandomizedStrategy: Sync {
    /// The network on which hider points are given.
    fn network(&self) -> &MetricNetwork;

    /// Precomputes where `p` lives in the strategy's own coordinates.
    fn probe(&self, p: &PointRef) -> Result<Probe>;

    /// Draws one pure strategy and writes the search time of each probe.
    fn sample_times(&self, rng: &mut SimRng, probes: &[Probe], out: &mut [f64]);
}

pub fn sample_rng(seed: u64, sample: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample);
    rng
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub seed: u64,
    /// Worker threads; 0 uses rayon's default.
    pub threads: usize,
}

impl SimConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            seed,
            threads: 0,
        }
    }
}

/// A named hider location.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Candidate {
    pub label: String,
    #[serde(skip)]
    pub point: PointRef,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateEstimate {
    pub label: String,
    pub distance: f64,
    pub mean_time: f64,
    pub ratio: f64,
    /// Standard error of `ratio`.
    pub se: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioEstimate {
    pub seed: u64,
    pub n: usize,
    /// Largest estimated normalized time over the candidates.
    pub rho_hat: f64,
    pub argmax: String,
    /// Three standard errors at the maximizing candidate.
    pub ci_radius: f64,
    pub candidates: Vec<CandidateEstimate>,
}

impl RatioEstimate {
    pub fn get(&self, label: &str) -> Option<&CandidateEstimate> {
        self.candidates.iter().find(|c| c.label == label)
    }
}

fn thread_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Domain(format!("cannot start thread pool: {e}")))
}

/// Per-candidate sums of `t` and `t²`.
fn chunk_moments(
    strategy: &dyn RandomizedStrategy,
    probes: &[Probe],
    seed: u64,
    range: std::ops::Range<usize>,
) -> (Vec<f64>, Vec<f64>) {
    let k = probes.len();
    let mut s1 = vec![0.0; k];
    let mut s2 = vec![0.0; k];
    let mut out = vec![0.0; k];
    for i in range {
        let mut rng = sample_rng(seed, i as u64);
        strategy.sample_times(&mut rng, probes, &mut out);
        for j in 0..k {
            s1[j] += out[j];
            s2[j] += out[j] * out[j];
        }
    }
    (s1, s2)
}

/// Estimates `E[T]/d` at every candidate from `cfg.n` samples.
pub fn estimate_ratio(
    strategy: &dyn RandomizedStrategy,
    candidates: &[Candidate],
    cfg: &SimConfig,
) -> Result<RatioEstimate> {
    if cfg.n < MIN_SAMPLES {
        return domain(format!(
            "need at least {MIN_SAMPLES} samples, got {}",
            cfg.n
        ));
    }
    if candidates.is_empty() {
        return domain("no candidate points");
    }
    let probes = candidates
        .iter()
        .map(|c| {
            if c.distance <= EPS {
                return domain(format!("candidate {} is at the root", c.label));
            }
            strategy.probe(&c.point)
        })
        .collect::<Result<Vec<_>>>()?;
    let chunks: Vec<_> = (0..cfg.n)
        .step_by(CHUNK)
        .map(|s| s..(s + CHUNK).min(cfg.n))
        .collect();
    let pool = thread_pool(cfg.threads)?;
    let parts: Vec<(Vec<f64>, Vec<f64>)> = pool.install(|| {
        chunks
            .par_iter()
            .map(|r| chunk_moments(strategy, &probes, cfg.seed, r.clone()))
            .collect()
    });
    let k = candidates.len();
    let (mut s1, mut s2) = (vec![0.0; k], vec![0.0; k]);
    for (a, b) in &parts {
        for j in 0..k {
            s1[j] += a[j];
            s2[j] += b[j];
        }
    }
    let n = cfg.n as f64;
    let mut ests = Vec::with_capacity(k);
    for (j, c) in candidates.iter().enumerate() {
        let mean = s1[j] / n;
        if !mean.is_finite() {
            return Err(Error::Verification(format!(
                "candidate {} is never found",
                c.label
            )));
        }
        let var = ((s2[j] - n * mean * mean) / (n - 1.0)).max(0.0);
        ests.push(CandidateEstimate {
            label: c.label.clone(),
            distance: c.distance,
            mean_time: mean,
            ratio: mean / c.distance,
            se: (var / n).sqrt() / c.distance,
        });
    }
    let best = ests
        .iter()
        .max_by(|a, b| a.ratio.total_cmp(&b.ratio))
        .expect("nonempty");
    Ok(RatioEstimate {
        seed: cfg.seed,
        n: cfg.n,
        rho_hat: best.ratio,
        argmax: best.label.clone(),
        ci_radius: 3.0 * best.se,
        candidates: ests,
    })
}

/// Writes one CSV row per (sample, candidate):
/// `candidate,sample_idx,time,ratio`.
pub fn dump_samples_csv<W: Write>(
    w: W,
    strategy: &dyn RandomizedStrategy,
    candidates: &[Candidate],
    cfg: &SimConfig,
) -> Result<()> {
    let probes = candidates
        .iter()
        .map(|c| strategy.probe(&c.point))
        .collect::<Result<Vec<_>>>()?;
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["candidate", "sample_idx", "time", "ratio"])
        .map_err(csv_err)?;
    let mut out = vec![0.0; probes.len()];
    for i in 0..cfg.n {
        let mut rng = sample_rng(cfg.seed, i as u64);
        strategy.sample_times(&mut rng, &probes, &mut out);
        for (c, t) in candidates.iter().zip(&out) {
            let row = [
                c.label.clone(),
                i.to_string(),
                t.to_string(),
                (t / c.distance).to_string(),
            ];
            wr.write_record(&row).map_err(csv_err)?;
        }
    }
    wr.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Domain(format!("csv: {e}"))
}

/// Candidate hider points: every non-root vertex, every interior watershed,
/// `grid` evenly spaced interior points per arc, and the points at each
/// distance `2^j` inside the network, down to a quarter of the nearest of
/// those or of the shortest arc.
pub fn default_candidates(net: &MetricNetwork, grid: usize) -> Result<Vec<Candidate>> {
    let mut out = Vec::new();
    let mut push = |label: String, p: PointRef| -> Result<()> {
        let distance = net.distance(&p)?;
        if distance > EPS {
            out.push(Candidate {
                label,
                point: p,
                distance,
            });
        }
        Ok(())
    };
    for v in 0..net.num_vertices() {
        let v = crate::network::VertexId(v);
        if v != net.root() {
            push(net.vertex_name(v).to_string(), PointRef::Vertex(v))?;
        }
    }
    for (i, arc) in net.arcs().iter().enumerate() {
        let a = ArcId(i);
        let w = net.watershed(a);
        if w > EPS && w < arc.len - EPS {
            push(format!("{}~w", arc.name), net.point(a, w)?)?;
        }
        for g in 1..=grid {
            let x = arc.len * g as f64 / (grid + 1) as f64;
            push(format!("{}~{g}/{}", arc.name, grid + 1), net.point(a, x)?)?;
        }
    }
    let shortest = net
        .arcs()
        .iter()
        .map(|a| a.len)
        .fold(f64::INFINITY, f64::min);
    let floor = out.iter().map(|c| c.distance).fold(shortest, f64::min) / 4.0;
    let mut push = |label: String, p: PointRef| -> Result<()> {
        out.push(Candidate {
            label,
            distance: net.distance(&p)?,
            point: p,
        });
        Ok(())
    };
    for ray in rays(net) {
        let arc = &net.arcs()[ray.arc.0];
        let lo = ray.start.max(floor).log2().floor() as i32;
        let hi = ray.end.log2().ceil() as i32;
        for j in lo..=hi {
            let r = 2f64.powi(j);
            if r > ray.start + EPS && r < ray.end - EPS {
                let x = ray.offset_at(r);
                push(format!("{}@2^{j}", arc.name), net.point(ray.arc, x)?)?;
            }
        }
    }
    Ok(out)
}

/// Candidates from explicit `(arc, offset)` pairs.
pub fn candidates_at(net: &MetricNetwork, points: &[(ArcId, f64)]) -> Result<Vec<Candidate>> {
    points
        .iter()
        .map(|&(a, x)| {
            let p = net.point(a, x)?;
            Ok(Candidate {
                label: format!("{}~{x}", net.arc(a)?.name),
                distance: net.distance(&p)?,
                point: p,
            })
        })
        .collect()
}

/// A deterministic schedule viewed as a (degenerate) randomized strategy.
pub struct Deterministic<'a> {
    pub net: &'a MetricNetwork,
    pub schedule: &'a crate::expanding::ExpandingSchedule,
}

impl RandomizedStrategy for Deterministic<'_> {
    fn network(&self) -> &MetricNetwork {
        self.net
    }

    fn probe(&self, p: &PointRef) -> Result<Probe> {
        Probe::of(self.net, p)
    }

    fn sample_times(&self, _rng: &mut SimRng, probes: &[Probe], out: &mut [f64]) {
        let idx = self.schedule.index(self.net.num_arcs());
        for (o, p) in out.iter_mut().zip(probes) {
            *o = idx.time(p);
        }
    }
}
