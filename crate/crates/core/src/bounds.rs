//! Hider-side lower bounds on the randomized search ratio and the sandwich
//! reports that pair them with upper bounds.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{domain, Error, Result};
use crate::expanding::{det_ratio, ExpandingSchedule};
use crate::generate::Instance;
use crate::network::{ArcId, MetricNetwork, VertexId, EPS};
use crate::pathwise::chinese_postman;
use crate::profile::{rays, RadiusProfile};
use crate::subnet::{ball, ShortestPathTree};

/// A finite union of closed arc intervals `(arc, lo, hi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    pieces: Vec<(ArcId, f64, f64)>,
}

impl Region {
    pub fn new(net: &MetricNetwork, pieces: Vec<(ArcId, f64, f64)>) -> Result<Self> {
        let mut kept = Vec::with_capacity(pieces.len());
        for (a, lo, hi) in pieces {
            let len = net.arc(a)?.len;
            if lo < -EPS || hi > len + EPS || hi < lo {
                return domain(format!("bad interval [{lo}, {hi}] on arc {}", a.0));
            }
            if hi - lo > EPS {
                kept.push((a, lo.max(0.0), hi.min(len)));
            }
        }
        Ok(Self { pieces: kept })
    }

    pub fn pieces(&self) -> &[(ArcId, f64, f64)] {
        &self.pieces
    }

    /// The closed ball `Q[r]`.
    pub fn ball(net: &MetricNetwork, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return domain(format!("ball radius must be positive, got {r}"));
        }
        let pieces = rays(net)
            .into_iter()
            .filter(|ray| ray.start < r)
            .map(|ray| {
                let x = ray.offset_at(ray.end.min(r));
                let (lo, hi) = if ray.forward {
                    (ray.origin, x)
                } else {
                    (x, ray.origin)
                };
                (ray.arc, lo, hi)
            })
            .collect();
        Self::new(net, pieces)
    }

    /// Points beyond vertex `v` in its shortest-path subtree, keeping in the
    /// branch through the `i`-th tree child arc of `v` only points at most
    /// `depths[i]` further from the root than `v`.
    pub fn branch(net: &MetricNetwork, v: VertexId, depths: &[f64]) -> Result<Self> {
        let spt = ShortestPathTree::new(net)?;
        let tree = &spt.tree;
        if v.0 >= net.num_vertices() {
            return domain(format!("unknown vertex {}", v.0));
        }
        let children = tree.children(v);
        if children.len() != depths.len() {
            return domain(format!(
                "vertex {} has {} branches but {} depths were given",
                net.vertex_name(v),
                children.len(),
                depths.len()
            ));
        }
        let dv = tree.depth(v);
        let mut pieces = Vec::new();
        for (&c, &t) in children.iter().zip(depths) {
            let limit = dv + t;
            let mut stack = vec![c];
            while let Some(a) = stack.pop() {
                let pd = tree.depth(tree.parent_of(a));
                let len = tree.net().arcs()[a.0].len;
                let reach = (limit - pd).min(len);
                if reach <= EPS {
                    continue;
                }
                let o = spt.map.arc_origin(a);
                let (x0, x1) = (
                    o.to_source(tree.arc_offset(a, 0.0)),
                    o.to_source(tree.arc_offset(a, reach)),
                );
                pieces.push((o.arc, x0.min(x1), x0.max(x1)));
                if reach >= len - EPS {
                    stack.extend(tree.children(tree.child_of(a)));
                }
            }
        }
        Self::new(net, pieces)
    }
}

/// `d(A)`, `λ(A)` and `d̄(A)` of a connected region.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SubsetStats {
    pub min_distance: f64,
    pub measure: f64,
    pub mean_distance: f64,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra] = rb;
    }
}

/// Exact `∫ d` over `[lo, hi]` on arc `a`, split at the watershed.
fn distance_integral(net: &MetricNetwork, a: ArcId, lo: f64, hi: f64) -> f64 {
    let w = net.watershed(a);
    let trap = |x0: f64, x1: f64| {
        0.5 * (x1 - x0)
            * (net.distance_on_arc_unchecked(a, x0) + net.distance_on_arc_unchecked(a, x1))
    };
    if lo < w && w < hi {
        trap(lo, w) + trap(w, hi)
    } else {
        trap(lo, hi)
    }
}

pub fn subset_stats(net: &MetricNetwork, region: &Region) -> Result<SubsetStats> {
    let ps = region.pieces();
    if ps.is_empty() {
        return domain("region has zero measure");
    }
    // nodes: pieces, then vertices
    let n = ps.len();
    let mut parent: Vec<usize> = (0..n + net.num_vertices()).collect();
    for (i, &(a, lo, hi)) in ps.iter().enumerate() {
        let arc = &net.arcs()[a.0];
        if lo <= EPS {
            union(&mut parent, i, n + arc.u.0);
        }
        if hi >= arc.len - EPS {
            union(&mut parent, i, n + arc.v.0);
        }
        for (j, &(b, lo2, hi2)) in ps[..i].iter().enumerate() {
            if a == b && lo <= hi2 + EPS && lo2 <= hi + EPS {
                union(&mut parent, i, j);
            }
        }
    }
    let r0 = find(&mut parent, 0);
    if (1..n).any(|i| find(&mut parent, i) != r0) {
        return Err(Error::Domain("region is not connected".into()));
    }
    let mut measure = 0.0;
    let mut moment = 0.0;
    let mut min_distance = f64::INFINITY;
    for &(a, lo, hi) in ps {
        measure += hi - lo;
        moment += distance_integral(net, a, lo, hi);
        // d is concave along an arc, so its minimum is at an end
        min_distance = min_distance
            .min(net.distance_on_arc_unchecked(a, lo))
            .min(net.distance_on_arc_unchecked(a, hi));
    }
    // overlapping pieces would double count
    let mut per_arc: Vec<Vec<(f64, f64)>> = vec![Vec::new(); net.num_arcs()];
    for &(a, lo, hi) in ps {
        per_arc[a.0].push((lo, hi));
    }
    for iv in &mut per_arc {
        iv.sort_by(|x, y| x.0.total_cmp(&y.0));
        if iv.windows(2).any(|w| w[1].0 < w[0].1 - EPS) {
            return domain("region pieces overlap");
        }
    }
    Ok(SubsetStats {
        min_distance,
        measure,
        mean_distance: moment / measure,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HiderKind {
    /// Uniform on the region.
    Uniform,
    /// Density proportional to the distance from the root.
    DistanceWeighted,
}

/// A hider mixed strategy supported on a connected region.
#[derive(Clone, Debug, PartialEq)]
pub struct HiderDistribution {
    pub support: Region,
    pub kind: HiderKind,
    pub stats: SubsetStats,
}

impl HiderDistribution {
    pub fn new(net: &MetricNetwork, support: Region, kind: HiderKind) -> Result<Self> {
        let stats = subset_stats(net, &support)?;
        Ok(Self {
            support,
            kind,
            stats,
        })
    }

    /// Density with respect to length at `(arc, x)`; zero off the support.
    pub fn density(&self, net: &MetricNetwork, a: ArcId, x: f64) -> f64 {
        let inside = self
            .support
            .pieces()
            .iter()
            .any(|&(b, lo, hi)| a == b && lo <= x && x <= hi);
        if !inside {
            return 0.0;
        }
        match self.kind {
            HiderKind::Uniform => 1.0 / self.stats.measure,
            HiderKind::DistanceWeighted => {
                net.distance_on_arc_unchecked(a, x)
                    / (self.stats.mean_distance * self.stats.measure)
            }
        }
    }

    /// Exact expected normalized search time `∫ T/d dh` under an expanding
    /// schedule on the same network.
    pub fn expected_normalized_time(
        &self,
        net: &MetricNetwork,
        sched: &ExpandingSchedule,
    ) -> Result<f64> {
        if self.kind != HiderKind::DistanceWeighted {
            return domain("exact payoff is implemented for distance-weighted hiders");
        }
        if !sched.covers(net) {
            return domain("schedule does not cover the network");
        }
        // with dh = d/(d̄ λ) dx the payoff is ∫_A T dx / (d̄ λ)
        let mut total = 0.0;
        for ph in sched.phases() {
            for s in &ph.segments {
                let (s0, s1) = (s.from.min(s.to), s.from.max(s.to));
                let t_at = |x: f64| ph.start + ph.measure * (x - s.from).abs() / s.len();
                for &(a, lo, hi) in self.support.pieces() {
                    if a != s.arc {
                        continue;
                    }
                    let (x0, x1) = (lo.max(s0), hi.min(s1));
                    if x1 > x0 {
                        total += 0.5 * (x1 - x0) * (t_at(x0) + t_at(x1));
                    }
                }
            }
        }
        Ok(total / (self.stats.mean_distance * self.stats.measure))
    }
}

/// One named bound with the parameters that reproduce it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundEntry {
    pub name: String,
    pub value: f64,
    pub witness: Value,
}

/// `(d(A) + λ(A)/2) / d̄(A)`, certified by the hider strategy `h_A`.
pub fn hider_bound_value(s: &SubsetStats) -> f64 {
    (s.min_distance + 0.5 * s.measure) / s.mean_distance
}

pub fn hider_lower_bound(net: &MetricNetwork, region: &Region) -> Result<BoundEntry> {
    let s = subset_stats(net, region)?;
    if s.mean_distance <= EPS {
        return domain("region has zero mean distance");
    }
    let pieces: Vec<Value> = region
        .pieces()
        .iter()
        .map(|&(a, lo, hi)| json!([net.arcs()[a.0].name, lo, hi]))
        .collect();
    Ok(BoundEntry {
        name: "hider".into(),
        value: hider_bound_value(&s),
        witness: json!({ "region": pieces, "stats": s }),
    })
}

/// `deg(O)`: the hider near the root.
pub fn degree_bound(inst: &Instance) -> Result<f64> {
    Ok(match inst {
        Instance::Net(net) => net.root_degree() as f64,
        Instance::Family(f) => f.ball(1.0)?.root_degree() as f64,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcavityCertificate {
    pub concave: bool,
    /// `ρ = σ = deg(O)` when the profile is concave.
    pub exact: Option<f64>,
    /// `σ / deg(O)`: how far the degree bound can be from `σ`.
    pub alpha: f64,
}

pub fn concavity_certificate(profile: &RadiusProfile) -> ConcavityCertificate {
    let deg = profile.root_slope() as f64;
    let sigma = profile.sigma().0;
    let concave = profile.is_concave();
    ConcavityCertificate {
        concave,
        exact: concave.then_some(deg),
        alpha: sigma / deg,
    }
}

/// `(1 − d̄(Q^j)/2^j)·λ(Q^j)/2^{j−1}` from the profile of a network
/// containing `Q^j = Q[2^j]`.
pub fn level_bound_from_profile(profile: &RadiusProfile, j: i32) -> Result<f64> {
    let r = 2f64.powi(j);
    let lam = profile.eval(r);
    let mean = match profile.mean_distance(0.0, r) {
        Some(m) => m,
        None => return domain(format!("Q^{j} is empty")),
    };
    Ok((1.0 - mean / r) * lam / (r / 2.0))
}

pub fn level_lower_bound(inst: &Instance, j: i32) -> Result<f64> {
    let net = inst.truncate(2f64.powi(j))?;
    level_bound_from_profile(&RadiusProfile::of(&net), j)
}

/// `l(Q[r]) / (2r)`: the hider uniform on `Q[r]` against pathwise search.
pub fn pathwise_uniform_lower_bound(inst: &Instance, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return domain(format!("radius must be positive, got {r}"));
    }
    let net = inst.truncate(r)?;
    let sub = ball(&net, r)?;
    Ok(chinese_postman(&sub.net)?.length / (2.0 * r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Expanding,
    Pathwise,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "expanding" => Ok(SearchMode::Expanding),
            "pathwise" => Ok(SearchMode::Pathwise),
            _ => domain(format!("unknown mode `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub mode: SearchMode,
    pub lower: Vec<BoundEntry>,
    pub upper: Vec<BoundEntry>,
    /// Best lower bound found; not claimed optimal.
    pub rho_lo: f64,
    pub rho_lo_label: String,
    pub rho_hi: f64,
    pub consistent: bool,
}

impl BoundReport {
    fn finish(mode: SearchMode, lower: Vec<BoundEntry>, upper: Vec<BoundEntry>) -> Self {
        let rho_lo = lower
            .iter()
            .map(|e| e.value)
            .fold(f64::NEG_INFINITY, f64::max);
        let rho_hi = upper.iter().map(|e| e.value).fold(f64::INFINITY, f64::min);
        Self {
            mode,
            lower,
            upper,
            rho_lo,
            rho_lo_label: "best found".into(),
            rho_hi,
            consistent: rho_lo <= rho_hi + 1e-9,
        }
    }

    pub fn best_lower(&self) -> Option<&BoundEntry> {
        self.lower.iter().max_by(|a, b| a.value.total_cmp(&b.value))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SandwichConfig {
    /// Doublings probed for unbounded families; also caps level bounds.
    pub budget: u32,
    /// Coordinate sweeps of the branch-depth search.
    pub sweeps: usize,
}

impl Default for SandwichConfig {
    fn default() -> Self {
        Self {
            budget: 12,
            sweeps: 4,
        }
    }
}

fn sandwich_network(inst: &Instance, cfg: &SandwichConfig) -> Result<MetricNetwork> {
    inst.truncate(2f64.powi(cfg.budget as i32))
}

pub fn sandwich(inst: &Instance, mode: SearchMode, cfg: &SandwichConfig) -> Result<BoundReport> {
    let net = sandwich_network(inst, cfg)?;
    let lower = expanding_lower_bounds(inst, &net, cfg)?;
    let det = det_ratio(inst, cfg.budget.max(20))?;
    match mode {
        SearchMode::Expanding => {
            let upper = vec![BoundEntry {
                name: "water-filling".into(),
                value: det.sigma,
                witness: json!({ "argmax_r": det.argmax_r, "certified": det.certified }),
            }];
            let report = BoundReport::finish(mode, lower, upper);
            if report.rho_lo < det.sigma / 2.0 - 1e-9 {
                return Err(Error::Verification(format!(
                    "best lower bound {} is below sigma/2 = {}",
                    report.rho_lo,
                    det.sigma / 2.0
                )));
            }
            Ok(report)
        }
        SearchMode::Pathwise => {
            let mut lower = lower;
            lower.extend(pathwise_lower_bounds(&net)?);
            let upper = [2.0, crate::pathwise::rcpt_optimal_growth()]
                .iter()
                .map(|&r| rcpt_upper_bound(inst, &net, r, cfg))
                .collect::<Result<Vec<_>>>()?;
            Ok(BoundReport::finish(mode, lower, upper))
        }
    }
}

fn expanding_lower_bounds(
    inst: &Instance,
    net: &MetricNetwork,
    cfg: &SandwichConfig,
) -> Result<Vec<BoundEntry>> {
    let prof = RadiusProfile::of(net);
    let mut out = vec![BoundEntry {
        name: "degree".into(),
        value: degree_bound(inst)?,
        witness: json!({ "root_degree": net.root_degree() }),
    }];
    // levels from just below the first breakpoint up to the whole network
    let first = prof.breakpoints().get(1).map_or(1.0, |p| p.r);
    let j_lo = first.log2().floor() as i32 - 1;
    let j_hi = (prof.r_max().log2().ceil() as i32).min(j_lo + cfg.budget as i32 + 2);
    for j in j_lo..=j_hi {
        if let Ok(v) = level_bound_from_profile(&prof, j) {
            out.push(BoundEntry {
                name: format!("level {j}"),
                value: v,
                witness: json!({ "j": j }),
            });
        }
    }
    for p in prof.breakpoints().iter().skip(1) {
        let stats = SubsetStats {
            min_distance: 0.0,
            measure: p.f,
            mean_distance: prof.moment(0.0, p.r) / p.f,
        };
        out.push(BoundEntry {
            name: format!("ball {}", p.r),
            value: hider_bound_value(&stats),
            witness: json!({ "radius": p.r }),
        });
    }
    out.extend(branch_bounds(net, cfg)?);
    Ok(out)
}

/// Per-branch measure and distance moment as functions of the depth
/// cut-off below the branching vertex.
struct Branch {
    profile: RadiusProfile,
}

impl Branch {
    fn measure(&self, t: f64) -> f64 {
        self.profile.eval(t)
    }
    fn moment(&self, t: f64) -> f64 {
        self.profile.moment(0.0, t)
    }
}

fn branch_value(dv: f64, branches: &[Branch], depths: &[f64]) -> f64 {
    let lam: f64 = branches
        .iter()
        .zip(depths)
        .map(|(b, &t)| b.measure(t))
        .sum();
    if lam <= EPS {
        return 0.0;
    }
    let mom: f64 = branches.iter().zip(depths).map(|(b, &t)| b.moment(t)).sum();
    let mean = dv + mom / lam;
    (dv + 0.5 * lam) / mean
}

fn golden_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-11 * (1.0 + hi) {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    // the end points are often optimal (whole branches)
    [(hi, f(hi)), (lo, f(lo)), (0.5 * (a + b), f(0.5 * (a + b)))]
        .into_iter()
        .fold((lo, f64::NEG_INFINITY), |best, (x, v)| {
            if v > best.1 {
                (x, v)
            } else {
                best
            }
        })
}

/// Hider bounds on depth-limited subtrees hanging at each vertex, with the
/// depth of every branch tuned by coordinate-wise golden-section search.
fn branch_bounds(net: &MetricNetwork, cfg: &SandwichConfig) -> Result<Vec<BoundEntry>> {
    let spt = ShortestPathTree::new(net)?;
    let tree = &spt.tree;
    let mut out = Vec::new();
    for v in 0..net.num_vertices() {
        let v = VertexId(v);
        let children = tree.children(v);
        if children.is_empty() {
            continue;
        }
        let dv = tree.depth(v);
        let branches: Vec<Branch> = children
            .iter()
            .map(|&c| {
                let mut spans = Vec::new();
                let mut stack = vec![c];
                while let Some(a) = stack.pop() {
                    let child = tree.child_of(a);
                    spans.push((tree.depth(tree.parent_of(a)) - dv, tree.depth(child) - dv));
                    stack.extend(tree.children(child));
                }
                Branch {
                    profile: RadiusProfile::from_spans(&spans),
                }
            })
            .collect();
        let mut depths: Vec<f64> = branches.iter().map(|b| b.profile.r_max()).collect();
        let mut best = branch_value(dv, &branches, &depths);
        for _ in 0..cfg.sweeps {
            for i in 0..depths.len() {
                let hi = branches[i].profile.r_max();
                let mut trial = depths.clone();
                let (x, val) = golden_max(
                    |t| {
                        trial[i] = t;
                        branch_value(dv, &branches, &trial)
                    },
                    0.0,
                    hi,
                );
                if val > best {
                    best = val;
                    depths[i] = x;
                }
            }
        }
        if best > 0.0 {
            out.push(BoundEntry {
                name: format!("branch {}", net.vertex_name(v)),
                value: best,
                witness: json!({ "vertex": net.vertex_name(v), "depths": depths }),
            });
        }
    }
    Ok(out)
}

fn pathwise_lower_bounds(net: &MetricNetwork) -> Result<Vec<BoundEntry>> {
    let prof = RadiusProfile::of(net);
    let mut radii: Vec<f64> = prof.breakpoints().iter().skip(1).map(|p| p.r).collect();
    let first = radii.first().copied().unwrap_or(1.0);
    radii.push(0.5 * first);
    let mut out = Vec::new();
    for r in radii {
        let sub = ball(net, r)?;
        match chinese_postman(&sub.net) {
            Ok(cpp) => out.push(BoundEntry {
                name: format!("uniform {r}"),
                value: cpp.length / (2.0 * r),
                witness: json!({ "radius": r, "tour_length": cpp.length }),
            }),
            Err(Error::Budget(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Certified ratio of the Chinese-postman doubling strategy with growth
/// `r`: a point first reached in iteration `j` lies beyond `r^{j-1}` and is
/// found by time `Σ_{i<j} l_i + l_j/2` on average. Below the first
/// breakpoint every ball is a star, so the early tours form a geometric
/// series.
fn rcpt_upper_bound(
    inst: &Instance,
    net: &MetricNetwork,
    r: f64,
    cfg: &SandwichConfig,
) -> Result<BoundEntry> {
    let prof = RadiusProfile::of(net);
    let deg = prof.root_slope() as f64;
    let first = prof.breakpoints().get(1).map_or(prof.r_max(), |p| p.r);
    let i0 = (first.ln() / r.ln()).floor() as i32;
    let i_top = match inst {
        Instance::Net(_) => (prof.r_max().ln() / r.ln()).ceil() as i32 + 1,
        Instance::Family(_) => ((cfg.budget as f64) * 2f64.ln() / r.ln()).floor() as i32,
    };
    let star_factor = deg * 2.0 * (r / (r - 1.0) + r / 2.0);
    let mut best = star_factor;
    let mut prefix = 2.0 * deg * r.powi(i0 + 1) / (r - 1.0);
    for j in (i0 + 1)..=i_top.max(i0 + 1) {
        let radius = r.powi(j);
        let l_j = if radius >= prof.r_max() - EPS {
            cpp_or_double(net)?
        } else {
            cpp_or_double(&ball(net, radius)?.net)?
        };
        best = best.max((prefix + 0.5 * l_j) / r.powi(j - 1));
        prefix += l_j;
        if radius >= prof.r_max() - EPS && inst.is_bounded() {
            break;
        }
    }
    Ok(BoundEntry {
        name: format!("rcpt r={r}"),
        value: best,
        witness: json!({ "growth": r, "certified": inst.is_bounded() }),
    })
}

/// Chinese postman length, or the closed depth-first tour `2λ` when the
/// matching is too large to solve exactly.
fn cpp_or_double(net: &MetricNetwork) -> Result<f64> {
    match chinese_postman(net) {
        Ok(c) => Ok(c.length),
        Err(Error::Budget(_)) => Ok(2.0 * net.total_measure()),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{figure3, star, unit_star, y_network, NetworkFamily};

    fn net_inst(net: &MetricNetwork) -> Instance {
        Instance::Net(net.clone())
    }

    #[test]
    fn stats_of_a_ball_on_a_star() {
        let s = unit_star(4).unwrap();
        let st = subset_stats(&s, &Region::ball(&s, 0.6).unwrap()).unwrap();
        assert!((st.mean_distance - 0.3).abs() < 1e-12);
        assert!((st.measure - 2.4).abs() < 1e-12);
        let b = hider_lower_bound(&s, &Region::ball(&s, 0.6).unwrap()).unwrap();
        assert!((b.value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn segment_mean_is_its_midpoint() {
        let s = star(&[5.0]).unwrap();
        let r = Region::new(&s, vec![(ArcId(0), 1.0, 3.0)]).unwrap();
        assert!((subset_stats(&s, &r).unwrap().mean_distance - 2.0).abs() < 1e-12);
    }

    #[test]
    fn y_pendant_pair() {
        let y = y_network(1.0, 1.0).unwrap();
        let v = y.vertex_by_name("v").unwrap();
        let r = Region::branch(&y, v, &[1.0, 1.0]).unwrap();
        let st = subset_stats(&y, &r).unwrap();
        assert_eq!((st.min_distance, st.measure), (1.0, 2.0));
        assert!((st.mean_distance - 1.5).abs() < 1e-12);
        assert!((hider_lower_bound(&y, &r).unwrap().value - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn disconnected_and_empty_regions() {
        let s = unit_star(2).unwrap();
        let r = Region::new(&s, vec![(ArcId(0), 0.5, 1.0), (ArcId(1), 0.5, 1.0)]).unwrap();
        assert!(matches!(subset_stats(&s, &r), Err(Error::Domain(_))));
        let empty = Region::new(&s, vec![]).unwrap();
        assert!(hider_lower_bound(&s, &empty).is_err());
    }

    #[test]
    fn level_bounds() {
        let s = Instance::Family(NetworkFamily::star(5).unwrap());
        assert!((level_lower_bound(&s, 0).unwrap() - 5.0).abs() < 1e-12);
        let y = y_network(1.0, 1.0).unwrap();
        assert!((level_lower_bound(&net_inst(&y), 1).unwrap() - 1.25).abs() < 1e-12);
    }

    #[test]
    fn concavity() {
        let c = concavity_certificate(&RadiusProfile::of(&unit_star(3).unwrap()));
        assert_eq!(c.exact, Some(3.0));
        let c = concavity_certificate(&RadiusProfile::of(&figure3(2).unwrap()));
        assert!(!c.concave);
        assert!((c.alpha - 2.0).abs() < 1e-12);
    }

    #[test]
    fn pathwise_uniform_values() {
        let s = Instance::Family(NetworkFamily::star(3).unwrap());
        assert!((pathwise_uniform_lower_bound(&s, 1.7).unwrap() - 3.0).abs() < 1e-12);
        let y = net_inst(&y_network(1.0, 1.0).unwrap());
        assert!((pathwise_uniform_lower_bound(&y, 2.0).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn sandwich_on_a_star_is_tight() {
        let s = net_inst(&unit_star(3).unwrap());
        let rep = sandwich(&s, SearchMode::Expanding, &SandwichConfig::default()).unwrap();
        assert!((rep.rho_lo - 3.0).abs() < 1e-9 && (rep.rho_hi - 3.0).abs() < 1e-12);
        assert!(rep.consistent);
    }

    #[test]
    fn sandwich_on_y12_finds_the_value() {
        let y = net_inst(&y_network(1.0, 2.0).unwrap());
        let rep = sandwich(&y, SearchMode::Expanding, &SandwichConfig::default()).unwrap();
        let v = 1.0 + (3f64.sqrt() - 1.0) / 2.0;
        assert!((rep.rho_lo - v).abs() < 1e-9, "{}", rep.rho_lo);
        let best = rep.best_lower().unwrap();
        assert_eq!(best.name, "branch v");
        let depths = best.witness["depths"].as_array().unwrap();
        assert!((depths[1].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-4);
    }

    #[test]
    fn pathwise_sandwich_brackets() {
        let s = net_inst(&unit_star(2).unwrap());
        let rep = sandwich(&s, SearchMode::Pathwise, &SandwichConfig::default()).unwrap();
        assert!(rep.consistent);
        assert!(rep.rho_lo >= 2.0 - 1e-9);
        assert!(rep.rho_hi <= 2.0 * (3.0 + 2.0 * 2f64.sqrt()) + 1e-9);
    }
}
