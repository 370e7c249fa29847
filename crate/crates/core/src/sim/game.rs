//! The search game on a discretized network, solved to a certified bracket.
//!
//! Arcs are cut into edges of length at most `h`. The hider picks an edge
//! and is paid the worst normalized time over it; the searcher picks
//! water-filling or an edge order. Every edge order opens with a
//! simultaneous sweep of the root edges up to the shortest of them (so
//! ratios near the root stay finite), then searches whole remaining edge
//! pieces from an already searched end, keeping the searched set connected.
//!
//! A searcher mixture bounds the continuum value from above because each
//! payoff is a supremum over its edge. A hider mixture bounds the value of
//! this restricted game from below, which in turn is at most `σ` because
//! water-filling is among the searcher's options.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::expanding::{waterfill, ExpandingSchedule, Segment};
use crate::network::{ArcId, MetricNetwork, NetworkBuilder, EPS};

#[derive(Clone, Debug, PartialEq)]
pub struct GameConfig {
    /// Longest edge of the discretization.
    pub h: f64,
    /// Target duality gap.
    pub gap: f64,
    pub max_edges: usize,
    /// Limit on enumerated searcher strategies.
    pub max_searchers: usize,
    pub max_iterations: usize,
}

impl GameConfig {
    pub fn new(h: f64, gap: f64) -> Self {
        Self {
            h,
            gap,
            max_edges: 10,
            max_searchers: 20_000,
            max_iterations: 200_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixEntry {
    pub strategy: String,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GameSolution {
    pub h: f64,
    pub edges: usize,
    pub searchers: usize,
    /// Guaranteed by the hider mixture against every listed searcher.
    pub v_lo: f64,
    /// Guaranteed by the searcher mixture against every hider point.
    pub v_hi: f64,
    pub gap: f64,
    pub iterations: usize,
    pub hider: Vec<MixEntry>,
    pub searcher: Vec<MixEntry>,
}

/// Splits every arc into `ceil(len/h)` equal edges.
pub fn discretize(net: &MetricNetwork, h: f64) -> Result<MetricNetwork> {
    if !(h > 0.0) {
        return domain(format!("edge length must be positive, got {h}"));
    }
    let mut b = NetworkBuilder::new();
    for name in net.vertex_names() {
        b.vertex(name);
    }
    b.root(net.root());
    for arc in net.arcs() {
        let k = ((arc.len / h) - 1e-9).ceil().max(1.0) as usize;
        let piece = arc.len / k as f64;
        let mut prev = arc.u;
        for i in 0..k {
            let next = if i + 1 == k {
                arc.v
            } else {
                b.vertex(&format!("{}#{}", arc.name, i + 1))
            };
            let name = if k == 1 {
                arc.name.clone()
            } else {
                format!("{}[{i}]", arc.name)
            };
            b.arc(&name, prev, next, piece)?;
            prev = next;
        }
    }
    b.build()
}

/// A searcher pure strategy: the opening sweep then `(edge, from_u)` moves.
type Order = Vec<(usize, bool)>;

struct Enumerator<'a> {
    net: &'a MetricNetwork,
    lo: Vec<f64>,
    hi: Vec<f64>,
    covered: Vec<u32>,
    current: Order,
    out: Vec<Order>,
    limit: usize,
}

impl Enumerator<'_> {
    fn run(&mut self) -> Result<()> {
        let mut any = false;
        for e in 0..self.net.num_arcs() {
            if self.hi[e] - self.lo[e] <= EPS {
                continue;
            }
            let arc = &self.net.arcs()[e];
            for from_u in [true, false] {
                let end = if from_u { arc.u } else { arc.v };
                if self.covered[end.0] == 0 || (arc.is_loop() && !from_u) {
                    continue;
                }
                any = true;
                let saved = (self.lo[e], self.hi[e]);
                self.lo[e] = self.hi[e];
                self.covered[arc.u.0] += 1;
                self.covered[arc.v.0] += 1;
                self.current.push((e, from_u));
                self.run()?;
                self.current.pop();
                self.covered[arc.u.0] -= 1;
                self.covered[arc.v.0] -= 1;
                (self.lo[e], self.hi[e]) = saved;
            }
        }
        if !any {
            if self.out.len() >= self.limit {
                return Err(Error::Budget(format!(
                    "more than {} searcher strategies",
                    self.limit
                )));
            }
            self.out.push(self.current.clone());
        }
        Ok(())
    }
}

/// Root edges swept together up to `δ`, as segments, plus the covered
/// prefix and suffix per edge.
fn opening(net: &MetricNetwork) -> (Vec<Segment>, Vec<f64>, Vec<f64>) {
    let root = net.root();
    let delta = net
        .arcs()
        .iter()
        .filter(|a| a.u == root || a.v == root)
        .map(|a| if a.is_loop() { a.len / 2.0 } else { a.len })
        .fold(f64::INFINITY, f64::min);
    let mut lo = vec![0.0; net.num_arcs()];
    let mut hi: Vec<f64> = net.arcs().iter().map(|a| a.len).collect();
    let mut segs = Vec::new();
    for (i, a) in net.arcs().iter().enumerate() {
        if a.u == root {
            segs.push(Segment {
                arc: ArcId(i),
                from: 0.0,
                to: delta,
            });
            lo[i] = delta;
        }
        if a.v == root {
            segs.push(Segment {
                arc: ArcId(i),
                from: a.len,
                to: a.len - delta,
            });
            hi[i] = a.len - delta;
        }
        if hi[i] - lo[i] <= EPS {
            lo[i] = hi[i];
        }
    }
    (segs, lo, hi)
}

fn order_schedule(open: &[Segment], lo: &[f64], hi: &[f64], order: &Order) -> ExpandingSchedule {
    let mut s = ExpandingSchedule::new();
    s.push_phase(open.to_vec());
    for &(e, from_u) in order {
        let seg = if from_u {
            Segment {
                arc: ArcId(e),
                from: lo[e],
                to: hi[e],
            }
        } else {
            Segment {
                arc: ArcId(e),
                from: hi[e],
                to: lo[e],
            }
        };
        s.push(seg);
    }
    s
}

fn describe(net: &MetricNetwork, order: &Order) -> String {
    let mut parts = vec!["open".to_string()];
    for &(e, from_u) in order {
        let a = &net.arcs()[e];
        let from = if from_u { a.u } else { a.v };
        parts.push(format!("{}<{}", a.name, net.vertex_name(from)));
    }
    parts.join(" ")
}

pub fn solve_small_game(net: &MetricNetwork, cfg: &GameConfig) -> Result<GameSolution> {
    if !(cfg.gap > 0.0) {
        return domain("gap must be positive");
    }
    let disc = discretize(net, cfg.h)?;
    let m = disc.num_arcs();
    if m > cfg.max_edges {
        return Err(Error::Budget(format!(
            "{m} edges exceed the limit of {}",
            cfg.max_edges
        )));
    }
    let (open, lo, hi) = opening(&disc);
    let mut covered = vec![0u32; disc.num_vertices()];
    covered[disc.root().0] = 1;
    for (i, a) in disc.arcs().iter().enumerate() {
        if lo[i] >= hi[i] - EPS {
            covered[a.u.0] += 1;
            covered[a.v.0] += 1;
        }
    }
    let mut en = Enumerator {
        net: &disc,
        lo: lo.clone(),
        hi: hi.clone(),
        covered,
        current: Vec::new(),
        out: Vec::new(),
        limit: cfg.max_searchers,
    };
    en.run()?;
    let orders = en.out;

    let mut names = vec!["water-filling".to_string()];
    let mut payoff: Vec<Vec<f64>> = vec![waterfill(&disc).sup_ratio_per_arc(&disc)?];
    for o in &orders {
        let s = order_schedule(&open, &lo, &hi, o);
        payoff.push(s.sup_ratio_per_arc(&disc)?);
        names.push(describe(&disc, o));
    }
    if payoff.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Verification(
            "unbounded payoff in the discretized game".into(),
        ));
    }
    let (x, y, iterations) = solve_matrix(&payoff, cfg.gap, cfg.max_iterations);
    let v_hi = (0..m)
        .map(|e| {
            payoff
                .iter()
                .zip(&x)
                .map(|(row, p)| p * row[e])
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let v_lo = payoff
        .iter()
        .map(|row| row.iter().zip(&y).map(|(v, q)| v * q).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    let support = |w: &[f64], label: &dyn Fn(usize) -> String| -> Vec<MixEntry> {
        let mut v: Vec<MixEntry> = w
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 1e-4)
            .map(|(i, &p)| MixEntry {
                strategy: label(i),
                probability: p,
            })
            .collect();
        v.sort_by(|a, b| b.probability.total_cmp(&a.probability));
        v
    };
    Ok(GameSolution {
        h: cfg.h,
        edges: m,
        searchers: payoff.len(),
        v_lo,
        v_hi,
        gap: v_hi - v_lo,
        iterations,
        hider: support(&y, &|e| disc.arcs()[e].name.clone()),
        searcher: support(&x, &|i| names[i].clone()),
    })
}

/// Regret matching+ for the hider against searcher best responses, with
/// linearly weighted averages. Returns the averaged searcher and hider
/// mixtures once their duality gap is at most `gap`.
fn solve_matrix(payoff: &[Vec<f64>], gap: f64, max_iter: usize) -> (Vec<f64>, Vec<f64>, usize) {
    let (n, m) = (payoff.len(), payoff[0].len());
    let mut regret = vec![0.0; m];
    let mut x_sum = vec![0.0; n];
    let mut y_sum = vec![0.0; m];
    let mut y = vec![1.0 / m as f64; m];
    let normalize = |v: &[f64]| {
        let s: f64 = v.iter().sum();
        v.iter().map(|a| a / s).collect::<Vec<f64>>()
    };
    let gap_of = |x: &[f64], y: &[f64]| {
        let hi = (0..m)
            .map(|e| payoff.iter().zip(x).map(|(r, p)| p * r[e]).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        let lo = payoff
            .iter()
            .map(|r| r.iter().zip(y).map(|(v, q)| v * q).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        hi - lo
    };
    for t in 1..=max_iter {
        // searcher best response
        let br = (0..n)
            .min_by(|&a, &b| {
                let va: f64 = payoff[a].iter().zip(&y).map(|(v, q)| v * q).sum();
                let vb: f64 = payoff[b].iter().zip(&y).map(|(v, q)| v * q).sum();
                va.total_cmp(&vb)
            })
            .expect("nonempty");
        let w = t as f64;
        x_sum[br] += w;
        for e in 0..m {
            y_sum[e] += w * y[e];
        }
        let value: f64 = payoff[br].iter().zip(&y).map(|(v, q)| v * q).sum();
        for e in 0..m {
            regret[e] = (regret[e] + payoff[br][e] - value).max(0.0);
        }
        let total: f64 = regret.iter().sum();
        y = if total > 0.0 {
            regret.iter().map(|r| r / total).collect()
        } else {
            vec![1.0 / m as f64; m]
        };
        if t % 16 == 0 || t == max_iter || n == 1 || m == 1 {
            let (xa, ya) = (normalize(&x_sum), normalize(&y_sum));
            if gap_of(&xa, &ya) <= gap {
                return (xa, ya, t);
            }
        }
    }
    (normalize(&x_sum), normalize(&y_sum), max_iter)
}
