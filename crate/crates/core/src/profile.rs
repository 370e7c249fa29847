//! The radius profile `f(r)`: measure of the closed ball of radius `r`.
//!
//! Every arc decomposes into at most two monotone pieces ("rays"): the part
//! reached through `u` and the part reached through `v`, meeting at the
//! watershed. Along a ray the distance grows at unit rate, so `f` is a sum
//! of clamped ramps and its slope at `r` counts the frontier points at
//! distance `r`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::network::{ArcId, MetricNetwork, EPS};

/// A piece of an arc along which distance from the root increases at unit
/// rate, from `start` to `end`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ray {
    pub arc: ArcId,
    /// Offset along the arc where the distance equals `start`.
    pub origin: f64,
    /// Whether offsets increase with distance.
    pub forward: bool,
    pub start: f64,
    pub end: f64,
}

impl Ray {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    /// Arc offset of the ray point at distance `t`.
    pub fn offset_at(&self, t: f64) -> f64 {
        let s = t - self.start;
        if self.forward {
            self.origin + s
        } else {
            self.origin - s
        }
    }
}

/// Splits every arc of `net` into its monotone rays.
pub fn rays(net: &MetricNetwork) -> Vec<Ray> {
    let mut out = Vec::with_capacity(2 * net.num_arcs());
    for (i, arc) in net.arcs().iter().enumerate() {
        let a = ArcId(i);
        let du = net.vertex_distance(arc.u);
        let dv = net.vertex_distance(arc.v);
        let x = net.watershed(a);
        if x > EPS {
            out.push(Ray {
                arc: a,
                origin: 0.0,
                forward: true,
                start: du,
                end: du + x,
            });
        }
        if arc.len - x > EPS {
            out.push(Ray {
                arc: a,
                origin: arc.len,
                forward: false,
                start: dv,
                end: dv + arc.len - x,
            });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Breakpoint {
    pub r: f64,
    pub f: f64,
    /// Right-slope of `f` at `r`; zero at the last breakpoint.
    pub slope: u32,
}

/// Continuous, strictly increasing, piecewise-linear `f` on `[0, r_max]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusProfile {
    points: Vec<Breakpoint>,
}

impl RadiusProfile {
    pub fn of(net: &MetricNetwork) -> Self {
        let spans: Vec<(f64, f64)> = rays(net).iter().map(|r| (r.start, r.end)).collect();
        Self::from_spans(&spans)
    }

    /// Profile of a union of unit-rate spans `[start, end]`.
    pub fn from_spans(spans: &[(f64, f64)]) -> Self {
        let mut rs: Vec<f64> = spans.iter().flat_map(|&(a, b)| [a, b]).collect();
        rs.push(0.0);
        rs.sort_by(f64::total_cmp);
        let mut uniq: Vec<f64> = Vec::with_capacity(rs.len());
        for r in rs {
            if uniq.last().is_none_or(|&last| r - last > EPS) {
                uniq.push(r);
            }
        }
        let measure = |r: f64| -> f64 { spans.iter().map(|&(a, b)| (r.min(b) - a).max(0.0)).sum() };
        let mut points = Vec::with_capacity(uniq.len());
        for (i, &r) in uniq.iter().enumerate() {
            let slope = match uniq.get(i + 1) {
                Some(&next) => {
                    let mid = 0.5 * (r + next);
                    spans.iter().filter(|&&(a, b)| a < mid && mid < b).count() as u32
                }
                None => 0,
            };
            points.push(Breakpoint {
                r,
                f: measure(r),
                slope,
            });
        }
        Self { points }
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.points
    }

    pub fn r_max(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.r)
    }

    pub fn total(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.f)
    }

    /// Slope at the origin; equals the root degree for network profiles.
    pub fn root_slope(&self) -> u32 {
        self.points.first().map_or(0, |p| p.slope)
    }

    fn piece(&self, r: f64) -> usize {
        // index of the last breakpoint with p.r <= r
        match self.points.partition_point(|p| p.r <= r) {
            0 => 0,
            k => k - 1,
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        if r >= self.r_max() {
            return self.total();
        }
        let p = self.points[self.piece(r)];
        p.f + p.slope as f64 * (r - p.r)
    }

    /// Slope on the piece to the right of `r`.
    pub fn slope_at(&self, r: f64) -> u32 {
        if r >= self.r_max() {
            return 0;
        }
        self.points[self.piece(r.max(0.0))].slope
    }

    /// The radius whose ball has measure `t`.
    pub fn inverse(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= self.total() {
            return self.r_max();
        }
        let k = self.points.partition_point(|p| p.f <= t).max(1) - 1;
        let p = self.points[k];
        if p.slope == 0 {
            p.r
        } else {
            p.r + (t - p.f) / p.slope as f64
        }
    }

    /// `∫_a^b r df(r)`: total distance mass of points with distance in `[a, b]`.
    pub fn moment(&self, a: f64, b: f64) -> f64 {
        let (a, b) = (a.max(0.0), b.min(self.r_max()));
        if b <= a {
            return 0.0;
        }
        let mut total = 0.0;
        for (i, p) in self.points.iter().enumerate() {
            let next = match self.points.get(i + 1) {
                Some(n) => n.r,
                None => break,
            };
            let lo = p.r.max(a);
            let hi = next.min(b);
            if hi > lo {
                total += p.slope as f64 * 0.5 * (hi * hi - lo * lo);
            }
        }
        total
    }

    /// Measure of points with distance in `[a, b]`.
    pub fn measure_between(&self, a: f64, b: f64) -> f64 {
        (self.eval(b) - self.eval(a)).max(0.0)
    }

    /// Mean distance of points with distance in `[a, b]`; `None` if that set
    /// has zero measure.
    pub fn mean_distance(&self, a: f64, b: f64) -> Option<f64> {
        let m = self.measure_between(a, b);
        (m > EPS * EPS).then(|| self.moment(a, b) / m)
    }

    /// `sup f(r)/r` and a radius attaining it (0 means the limit at the root).
    pub fn sigma(&self) -> (f64, f64) {
        let mut best = (self.root_slope() as f64, 0.0);
        for p in self.points.iter().skip(1) {
            let v = p.f / p.r;
            if v > best.0 + EPS {
                best = (v, p.r);
            }
        }
        best
    }

    /// Whether slopes never increase across breakpoints.
    pub fn is_concave(&self) -> bool {
        let n = self.points.len();
        // the terminal zero slope is not part of f's domain
        let slopes: Vec<u32> = self.points[..n.saturating_sub(1)]
            .iter()
            .map(|p| p.slope)
            .collect();
        slopes.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn validate(&self) -> Result<()> {
        let first = match self.points.first() {
            Some(p) => p,
            None => return domain("empty profile"),
        };
        if first.r != 0.0 || first.f != 0.0 {
            return domain("profile must start at f(0) = 0");
        }
        for w in self.points.windows(2) {
            let expect = w[0].f + w[0].slope as f64 * (w[1].r - w[0].r);
            if w[1].r <= w[0].r || (expect - w[1].f).abs() > 1e-7 || w[0].slope == 0 {
                return domain("profile is not continuous and strictly increasing");
            }
        }
        Ok(())
    }
}
