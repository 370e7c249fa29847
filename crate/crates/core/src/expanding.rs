//! Expanding search: schedules, water-filling, randomized depth-first
//! search and the randomized doubling strategy.
//!
//! A schedule is a sequence of phases. Each phase searches one or more arc
//! segments simultaneously, each at a rate proportional to its length, so
//! a point at fraction `φ` of a segment is found at `start + φ·measure`.
//! Single-segment phases are ordinary sequential search; multi-segment
//! phases express disc growth exactly.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::generate::Instance;
use crate::network::{ArcId, MetricNetwork, PointRef, Probe, VertexId, EPS};
use crate::profile::{rays, RadiusProfile};
use crate::sim::{RandomizedStrategy, SimRng};
use crate::subnet::{RootedTree, ShortestPathTree};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub arc: ArcId,
    pub from: f64,
    pub to: f64,
}

impl Segment {
    pub fn len(&self) -> f64 {
        (self.to - self.from).abs()
    }

    fn contains(&self, x: f64) -> bool {
        let (lo, hi) = if self.from <= self.to {
            (self.from, self.to)
        } else {
            (self.to, self.from)
        };
        x >= lo - EPS && x <= hi + EPS
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Phase {
    pub segments: Vec<Segment>,
    /// Cumulative measure searched before this phase.
    pub start: f64,
    pub measure: f64,
}

impl Phase {
    fn time_at(&self, seg: &Segment, x: f64) -> f64 {
        let len = seg.len();
        if len <= 0.0 {
            return self.start;
        }
        self.start + self.measure * ((x - seg.from).abs() / len).min(1.0)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExpandingSchedule {
    phases: Vec<Phase>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentJson {
    pub arc: String,
    pub from: f64,
    pub to: f64,
    pub cum_measure: f64,
    pub phase: usize,
}

/// `sup T(S,H)/d(H)` with a point at (or near) which it is attained.
#[derive(Clone, Debug, PartialEq)]
pub struct SupRatio {
    pub value: f64,
    pub witness: Option<PointRef>,
    pub note: String,
}

impl ExpandingSchedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total_measure(&self) -> f64 {
        self.phases.last().map_or(0.0, |p| p.start + p.measure)
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    /// Appends a sequential segment; zero-length segments are dropped.
    pub fn push(&mut self, seg: Segment) {
        self.push_phase(vec![seg]);
    }

    /// Appends segments searched simultaneously.
    pub fn push_phase(&mut self, segments: Vec<Segment>) {
        let segments: Vec<Segment> = segments.into_iter().filter(|s| s.len() > EPS).collect();
        if segments.is_empty() {
            return;
        }
        let start = self.total_measure();
        let measure = segments.iter().map(Segment::len).sum();
        self.phases.push(Phase {
            segments,
            start,
            measure,
        });
    }

    pub fn extend(&mut self, other: &ExpandingSchedule) {
        for p in &other.phases {
            self.push_phase(p.segments.clone());
        }
    }

    /// Checks measure accounting, interior-disjointness, and that every
    /// segment starts at a point already searched before its phase.
    pub fn validate(&self, net: &MetricNetwork) -> Result<()> {
        let mut cover = Coverage::new(net);
        let mut acc = 0.0;
        for (k, ph) in self.phases.iter().enumerate() {
            if (ph.start - acc).abs() > 1e-7 {
                return Err(Error::Verification(format!(
                    "phase {k}: cumulative measure mismatch"
                )));
            }
            let m: f64 = ph.segments.iter().map(Segment::len).sum();
            if (m - ph.measure).abs() > 1e-7 || ph.measure <= 0.0 {
                return Err(Error::Verification(format!("phase {k}: measure mismatch")));
            }
            for s in &ph.segments {
                let len = net.arc(s.arc)?.len;
                if s.from < -EPS || s.to < -EPS || s.from > len + EPS || s.to > len + EPS {
                    return Err(Error::Verification(format!(
                        "phase {k}: segment leaves its arc"
                    )));
                }
                if !cover.covers(s.arc, s.from) {
                    return Err(Error::Verification(format!(
                        "phase {k}: segment on arc {} starts at an unsearched point",
                        net.arcs()[s.arc.0].name
                    )));
                }
            }
            for (i, s) in ph.segments.iter().enumerate() {
                if cover.overlaps(s) || ph.segments[..i].iter().any(|t| overlap(s, t) > EPS) {
                    return Err(Error::Verification(format!("phase {k}: segments overlap")));
                }
            }
            for s in &ph.segments {
                cover.add(s);
            }
            acc = ph.start + ph.measure;
        }
        Ok(())
    }

    /// Whether every arc is fully searched.
    pub fn covers(&self, net: &MetricNetwork) -> bool {
        let mut per_arc: Vec<f64> = vec![0.0; net.num_arcs()];
        for ph in &self.phases {
            for s in &ph.segments {
                per_arc[s.arc.0] += s.len();
            }
        }
        per_arc
            .iter()
            .zip(net.arcs())
            .all(|(m, a)| (m - a.len).abs() < 1e-7)
    }

    /// `T(S, p)`: first time `p` is searched, or `None` if never.
    pub fn search_time(&self, net: &MetricNetwork, p: &PointRef) -> Result<Option<f64>> {
        let probe = Probe::of(net, p)?;
        if probe.is_root() {
            return Ok(Some(0.0));
        }
        let mut best = f64::INFINITY;
        for ph in &self.phases {
            if ph.start >= best {
                break;
            }
            for s in &ph.segments {
                for &(a, x) in &probe.0 {
                    if s.arc == a && s.contains(x) {
                        best = best.min(ph.time_at(s, x));
                    }
                }
            }
        }
        Ok(best.is_finite().then_some(best))
    }

    /// Exact supremum of the normalized search time over all points.
    ///
    /// Along a segment the search time is linear and the distance piecewise
    /// linear, so the ratio is monotone between the segment ends and the
    /// watershed; near the root the supremum may be infinite.
    pub fn sup_normalized_ratio(&self, net: &MetricNetwork) -> Result<SupRatio> {
        let mut best = SupRatio {
            value: 0.0,
            witness: None,
            note: String::new(),
        };
        for (a, x, ratio) in self.ratio_points(net)? {
            if ratio > best.value + EPS {
                let arc = &net.arcs()[a.0];
                // an infinite ratio is approached just inside the arc
                let w = if !ratio.is_infinite() {
                    x
                } else if x < arc.len / 2.0 {
                    x + (arc.len / 2.0).min(1e-6)
                } else {
                    x - (arc.len / 2.0).min(1e-6)
                };
                let name = &arc.name;
                best = SupRatio {
                    value: ratio,
                    witness: Some(net.point(a, w)?),
                    note: if ratio.is_infinite() {
                        format!("points of arc {name} near the root are found late")
                    } else {
                        format!("arc {name} at offset {x}")
                    },
                };
                if ratio.is_infinite() {
                    break;
                }
            }
        }
        Ok(best)
    }

    /// `sup T/d` over the points of each arc separately.
    pub fn sup_ratio_per_arc(&self, net: &MetricNetwork) -> Result<Vec<f64>> {
        let mut out = vec![0.0f64; net.num_arcs()];
        for (a, _, ratio) in self.ratio_points(net)? {
            out[a.0] = out[a.0].max(ratio);
        }
        Ok(out)
    }

    /// The ratio (or its limit) at every point where the supremum can be
    /// attained.
    fn ratio_points(&self, net: &MetricNetwork) -> Result<Vec<(ArcId, f64, f64)>> {
        if !self.covers(net) {
            return domain("schedule does not cover the network");
        }
        let mut out = Vec::new();
        for ph in &self.phases {
            for s in &ph.segments {
                let mut xs = vec![s.from, s.to];
                let w = net.watershed(s.arc);
                if s.contains(w) {
                    xs.push(w);
                }
                for x in xs {
                    let d = net.distance_on_arc(s.arc, x)?;
                    let t = ph.time_at(s, x);
                    let ratio = if d > EPS {
                        t / d
                    } else if t > EPS {
                        f64::INFINITY
                    } else {
                        // limit at the root: rate of T over rate of d
                        ph.measure / s.len()
                    };
                    out.push((s.arc, x, ratio));
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self, net: &MetricNetwork) -> Vec<SegmentJson> {
        self.phases
            .iter()
            .enumerate()
            .flat_map(|(k, ph)| {
                ph.segments.iter().map(move |s| SegmentJson {
                    arc: net.arcs()[s.arc.0].name.clone(),
                    from: s.from,
                    to: s.to,
                    cum_measure: ph.start + ph.measure,
                    phase: k,
                })
            })
            .collect()
    }

    pub fn index(&self, num_arcs: usize) -> ScheduleIndex<'_> {
        let mut by_arc = vec![Vec::new(); num_arcs];
        for (k, ph) in self.phases.iter().enumerate() {
            for (i, s) in ph.segments.iter().enumerate() {
                by_arc[s.arc.0].push((k, i));
            }
        }
        ScheduleIndex {
            sched: self,
            by_arc,
        }
    }
}

fn overlap(a: &Segment, b: &Segment) -> f64 {
    if a.arc != b.arc {
        return 0.0;
    }
    let (a0, a1) = (a.from.min(a.to), a.from.max(a.to));
    let (b0, b1) = (b.from.min(b.to), b.from.max(b.to));
    (a1.min(b1) - a0.max(b0)).max(0.0)
}

/// Searched region tracker for validity checks.
struct Coverage<'a> {
    net: &'a MetricNetwork,
    vertices: Vec<bool>,
    intervals: Vec<Vec<(f64, f64)>>,
}

impl<'a> Coverage<'a> {
    fn new(net: &'a MetricNetwork) -> Self {
        let mut vertices = vec![false; net.num_vertices()];
        vertices[net.root().0] = true;
        Self {
            net,
            vertices,
            intervals: vec![Vec::new(); net.num_arcs()],
        }
    }

    fn covers(&self, a: ArcId, x: f64) -> bool {
        let arc = &self.net.arcs()[a.0];
        (x <= EPS && self.vertices[arc.u.0])
            || (x >= arc.len - EPS && self.vertices[arc.v.0])
            || self.intervals[a.0]
                .iter()
                .any(|&(lo, hi)| x >= lo - EPS && x <= hi + EPS)
    }

    fn overlaps(&self, s: &Segment) -> bool {
        let (lo, hi) = (s.from.min(s.to), s.from.max(s.to));
        self.intervals[s.arc.0]
            .iter()
            .any(|&(a, b)| hi.min(b) - lo.max(a) > EPS)
    }

    fn add(&mut self, s: &Segment) {
        let arc = &self.net.arcs()[s.arc.0];
        let (lo, hi) = (s.from.min(s.to), s.from.max(s.to));
        self.intervals[s.arc.0].push((lo, hi));
        if lo <= EPS {
            self.vertices[arc.u.0] = true;
        }
        if hi >= arc.len - EPS {
            self.vertices[arc.v.0] = true;
        }
    }
}

/// Per-arc lookup of a schedule's segments, for repeated time queries.
pub struct ScheduleIndex<'a> {
    sched: &'a ExpandingSchedule,
    by_arc: Vec<Vec<(usize, usize)>>,
}

impl ScheduleIndex<'_> {
    /// First search time of a probed point; infinite if never searched.
    pub fn time(&self, probe: &Probe) -> f64 {
        if probe.is_root() {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        for &(a, x) in &probe.0 {
            for &(k, i) in &self.by_arc[a.0] {
                let ph = &self.sched.phases[k];
                if ph.start >= best {
                    break;
                }
                let s = &ph.segments[i];
                if s.contains(x) {
                    best = best.min(ph.time_at(s, x));
                }
            }
        }
        best
    }
}

/// The water-filling search: the searched set at time `t` is the ball
/// `Q[r]` of measure `t`. Each phase grows every frontier ray between two
/// consecutive breakpoints of the radius profile.
pub fn waterfill(net: &MetricNetwork) -> ExpandingSchedule {
    let prof = RadiusProfile::of(net);
    let mut rs = rays(net);
    rs.sort_by(|a, b| a.arc.cmp(&b.arc).then(a.origin.total_cmp(&b.origin)));
    let mut sched = ExpandingSchedule::new();
    for w in prof.breakpoints().windows(2) {
        let (r0, r1) = (w[0].r, w[1].r);
        let segs = rs
            .iter()
            .filter(|ray| ray.start <= r0 + EPS && ray.end >= r1 - EPS)
            .map(|ray| Segment {
                arc: ray.arc,
                from: ray.offset_at(r0),
                to: ray.offset_at(r1),
            })
            .collect();
        sched.push_phase(segs);
    }
    sched
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetRatio {
    pub sigma: f64,
    /// Radius attaining the supremum (0 for the limit at the root).
    pub argmax_r: f64,
    /// False when an unbounded family only stabilized within the budget.
    pub certified: bool,
}

/// Optimal deterministic expanding ratio `σ = sup f(r)/r`.
///
/// Families are probed on `Q[2^t]` for `t = 0..=budget`. The answer is
/// certified once the growth bound is dominated by the running maximum;
/// otherwise it is accepted, uncertified, when the final frontier count is
/// dominated.
pub fn det_ratio(inst: &Instance, budget: u32) -> Result<DetRatio> {
    match inst {
        Instance::Net(net) => {
            let (sigma, argmax_r) = RadiusProfile::of(net).sigma();
            Ok(DetRatio {
                sigma,
                argmax_r,
                certified: true,
            })
        }
        Instance::Family(fam) => {
            let mut last = None;
            for t in 0..=budget {
                let r = 2f64.powi(t as i32);
                let prof = RadiusProfile::of(&fam.ball(r)?);
                let (sigma, argmax_r) = prof.sigma();
                if fam.growth_bound() as f64 <= sigma + EPS {
                    return Ok(DetRatio {
                        sigma,
                        argmax_r,
                        certified: true,
                    });
                }
                let last_slope = prof
                    .breakpoints()
                    .iter()
                    .rev()
                    .nth(1)
                    .map_or(0, |p| p.slope);
                last = Some((sigma, argmax_r, last_slope));
            }
            match last {
                Some((sigma, argmax_r, slope)) if slope as f64 <= sigma + EPS => Ok(DetRatio {
                    sigma,
                    argmax_r,
                    certified: false,
                }),
                _ => Err(Error::Budget(format!(
                    "sup f(r)/r did not stabilize within {budget} doublings"
                ))),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DfsOrder {
    /// Children in input arc order.
    Forward,
    /// Children reversed at every vertex, which reverses the leaf order.
    Reverse,
}

impl DfsOrder {
    pub fn from_coin(heads: bool) -> Self {
        if heads {
            DfsOrder::Forward
        } else {
            DfsOrder::Reverse
        }
    }
}

/// Depth-first traversal restricted to the depth band `[lo, hi)`: for each
/// arc (in DFS preorder) the part of it inside the band, as
/// `(arc, from, to)` in arc offsets with `from` the shallower end.
pub fn dfs_band(tree: &RootedTree, order: DfsOrder, lo: f64, hi: f64, out: &mut Vec<Segment>) {
    let root = tree.net().root();
    let mut stack: Vec<ArcId> = Vec::new();
    push_children(tree, root, order, &mut stack);
    while let Some(a) = stack.pop() {
        let parent_depth = tree.depth(tree.parent_of(a));
        let len = tree.net().arcs()[a.0].len;
        let b0 = (lo - parent_depth).max(0.0);
        let b1 = (hi - parent_depth).min(len);
        if b1 - b0 > EPS {
            out.push(Segment {
                arc: a,
                from: tree.arc_offset(a, b0),
                to: tree.arc_offset(a, b1),
            });
        }
        let child = tree.child_of(a);
        if tree.depth(child) < hi {
            push_children(tree, child, order, &mut stack);
        }
    }
}

fn push_children(tree: &RootedTree, v: VertexId, order: DfsOrder, stack: &mut Vec<ArcId>) {
    let ch = tree.children(v);
    // the stack pops in reverse push order
    match order {
        DfsOrder::Forward => stack.extend(ch.iter().rev()),
        DfsOrder::Reverse => stack.extend(ch.iter()),
    }
}

/// One of the two depth-first searches mixed by a randomized DFS.
pub fn rdfs(tree: &RootedTree, order: DfsOrder) -> ExpandingSchedule {
    let mut segs = Vec::new();
    dfs_band(tree, order, 0.0, f64::INFINITY, &mut segs);
    let mut s = ExpandingSchedule::new();
    for seg in segs {
        s.push(seg);
    }
    s
}

/// `rdfs` on an arbitrary network, rejecting non-trees.
pub fn rdfs_network(net: &MetricNetwork, order: DfsOrder) -> Result<ExpandingSchedule> {
    let tree = RootedTree::new(net.clone())?;
    Ok(rdfs(&tree, order))
}

/// Random thresholds `d_j ~ U[2^{j-1}, 2^j]` for `j = j_min..=j_max+1` and
/// one DFS direction per level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoublingLevels {
    pub j_min: i32,
    pub j_max: i32,
    pub thresholds: Vec<f64>,
    pub forward: Vec<bool>,
}

impl DoublingLevels {
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, j_min: i32, j_max: i32) -> Self {
        let thresholds = (j_min..=j_max + 1)
            .map(|j| {
                let lo = 2f64.powi(j - 1);
                lo + rng.random::<f64>() * lo
            })
            .collect();
        let forward = (j_min..=j_max).map(|_| rng.random_bool(0.5)).collect();
        Self {
            j_min,
            j_max,
            thresholds,
            forward,
        }
    }

    pub fn threshold(&self, j: i32) -> f64 {
        self.thresholds[(j - self.j_min) as usize]
    }

    /// Depth band of level `j`. The first level also absorbs everything
    /// below it and the last level everything beyond.
    pub fn band(&self, j: i32) -> (f64, f64) {
        let lo = if j == self.j_min {
            0.0
        } else {
            self.threshold(j)
        };
        let hi = if j == self.j_max {
            f64::INFINITY
        } else {
            self.threshold(j + 1)
        };
        (lo, hi)
    }

    pub fn order(&self, j: i32) -> DfsOrder {
        DfsOrder::from_coin(self.forward[(j - self.j_min) as usize])
    }
}

/// Default level range: the lowest level sits at most a quarter of the
/// nearest candidate distance, the highest covers the whole network.
pub fn default_levels(r_max: f64, min_distance: f64) -> (i32, i32) {
    let j_min = (min_distance / 4.0).log2().floor() as i32;
    let j_max = (r_max.log2().ceil() as i32).max(j_min + 1);
    (j_min, j_max)
}

fn check_levels(j_min: i32, j_max: i32) -> Result<()> {
    if j_min >= j_max {
        return domain(format!("need j_min < j_max, got {j_min} and {j_max}"));
    }
    if j_max - j_min > 60 {
        return domain("level range too large");
    }
    Ok(())
}

/// Truncates an instance for a doubling strategy with top level `j_max`.
pub(crate) fn doubling_network(inst: &Instance, j_max: i32) -> Result<MetricNetwork> {
    let top = 2f64.powi(j_max);
    match inst {
        Instance::Net(net) => {
            if top < net.r_max() - EPS {
                return domain(format!(
                    "2^j_max = {top} must reach r_max = {}",
                    net.r_max()
                ));
            }
            Ok(net.clone())
        }
        Instance::Family(f) => f.ball(top),
    }
}

/// The randomized doubling expanding search on a shortest-path tree.
///
/// Level `j` is a randomized DFS of `R_j = {d_j <= d < d_{j+1}}`; searched
/// levels need no explicit contraction because expanding search moves
/// freely over searched ground.
#[derive(Clone, Debug)]
pub struct DoublingStrategy {
    source: MetricNetwork,
    spt: ShortestPathTree,
    j_min: i32,
    j_max: i32,
}

impl DoublingStrategy {
    pub fn new(inst: &Instance, j_min: i32, j_max: i32) -> Result<Self> {
        check_levels(j_min, j_max)?;
        let source = doubling_network(inst, j_max)?;
        let spt = ShortestPathTree::new(&source)?;
        Ok(Self {
            source,
            spt,
            j_min,
            j_max,
        })
    }

    pub fn tree(&self) -> &ShortestPathTree {
        &self.spt
    }

    pub fn levels(&self) -> (i32, i32) {
        (self.j_min, self.j_max)
    }

    pub fn sample_levels<R: Rng + ?Sized>(&self, rng: &mut R) -> DoublingLevels {
        DoublingLevels::sample(rng, self.j_min, self.j_max)
    }

    /// The schedule (on the shortest-path tree) for given levels.
    pub fn schedule(&self, levels: &DoublingLevels) -> ExpandingSchedule {
        let mut sched = ExpandingSchedule::new();
        let mut segs = Vec::new();
        for j in self.j_min..=self.j_max {
            let (lo, hi) = levels.band(j);
            segs.clear();
            dfs_band(&self.spt.tree, levels.order(j), lo, hi, &mut segs);
            for &s in &segs {
                sched.push(s);
            }
        }
        sched
    }

    /// Measure of level `j-1` inside `Q_j = {2^{j-1} <= d < 2^j}`.
    pub fn level_overlap_measure(&self, levels: &DoublingLevels, j: i32) -> f64 {
        let prof = RadiusProfile::of(&self.source);
        let lo = 2f64.powi(j - 1);
        prof.measure_between(lo, levels.threshold(j))
    }
}

impl RandomizedStrategy for DoublingStrategy {
    fn network(&self) -> &MetricNetwork {
        &self.source
    }

    fn probe(&self, p: &PointRef) -> Result<Probe> {
        let q = self.spt.map_point(&self.source, p)?;
        Probe::of(self.spt.net(), &q)
    }

    fn sample_times(&self, rng: &mut SimRng, probes: &[Probe], out: &mut [f64]) {
        let levels = self.sample_levels(rng);
        let sched = self.schedule(&levels);
        let idx = sched.index(self.spt.net().num_arcs());
        for (o, p) in out.iter_mut().zip(probes) {
            *o = idx.time(p);
        }
    }
}

/// The per-level expected-cost bound for a point `x` with
/// `2^{k-1} <= d(x) < 2^k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelCostBound {
    pub k: i32,
    pub inner: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    /// `E(L^J)`: expected measure of the levels before `x`'s level plus half
    /// of its own level.
    pub expected_l: f64,
}

impl LevelCostBound {
    /// Upper bound on the expected search time of `x`.
    pub fn time_bound(&self, d: f64) -> f64 {
        self.expected_l + d / 2.0
    }
}

/// Expected level cost `E(L^J)` from level measures and mean distances.
pub fn doubling_level_cost_bound(net: &MetricNetwork, x: &PointRef) -> Result<LevelCostBound> {
    let d = net.distance(x)?;
    if d <= EPS {
        return domain("level cost bound is undefined at the root");
    }
    let prof = RadiusProfile::of(net);
    Ok(level_cost_from_profile(&prof, d))
}

pub fn level_cost_from_profile(prof: &RadiusProfile, d: f64) -> LevelCostBound {
    let k = d.log2().floor() as i32 + 1;
    let p = |j: i32| 2f64.powi(j);
    // measure and distance moment of Q_j = {2^{j-1} <= d < 2^j}
    let lam = |j: i32| prof.measure_between(p(j - 1), p(j));
    let mom = |j: i32| prof.moment(p(j - 1), p(j));
    let inner = prof.eval(p(k - 2));
    let l1 = (2.0 - d / p(k)) * lam(k - 1) - (2.0 - d / p(k - 1)) * mom(k - 1) / p(k - 1);
    let l3 = ((d - p(k - 1)) / p(k - 1)) * (lam(k + 1) - mom(k + 1) / p(k + 1));
    let l2 = (d / p(k) + 0.5) * lam(k) - mom(k) / p(k);
    LevelCostBound {
        k,
        inner,
        l1,
        l2,
        l3,
        expected_l: inner + l1 + l2 + l3,
    }
}

/// Mixture for the `figure3(n)` network: the trunk first, then the `n²`
/// pendant arcs in uniformly random order.
#[derive(Clone, Debug)]
pub struct Figure3Mixture {
    net: MetricNetwork,
    n: usize,
}

impl Figure3Mixture {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return domain("figure3 mixture needs n >= 2");
        }
        Ok(Self {
            net: crate::generate::figure3(n)?,
            n,
        })
    }

    pub fn sample_schedule<R: Rng + ?Sized>(&self, rng: &mut R) -> ExpandingSchedule {
        use rand::seq::SliceRandom;
        let mut order: Vec<usize> = (1..self.net.num_arcs()).collect();
        order.shuffle(rng);
        let mut s = ExpandingSchedule::new();
        s.push(Segment {
            arc: ArcId(0),
            from: 0.0,
            to: self.n as f64,
        });
        for a in order {
            s.push(Segment {
                arc: ArcId(a),
                from: 0.0,
                to: 1.0,
            });
        }
        s
    }

    /// Exact expected search time: `d` on the trunk, and
    /// `n + (n²-1)/2 + y` at depth `y` on a pendant arc.
    pub fn expected_time(&self, p: &PointRef) -> Result<f64> {
        let d = self.net.distance(p)?;
        let n = self.n as f64;
        if d <= n + EPS {
            Ok(d)
        } else {
            Ok(n + (n * n - 1.0) / 2.0 + (d - n))
        }
    }
}

impl RandomizedStrategy for Figure3Mixture {
    fn network(&self) -> &MetricNetwork {
        &self.net
    }

    fn probe(&self, p: &PointRef) -> Result<Probe> {
        Probe::of(&self.net, p)
    }

    fn sample_times(&self, rng: &mut SimRng, probes: &[Probe], out: &mut [f64]) {
        let sched = self.sample_schedule(rng);
        let idx = sched.index(self.net.num_arcs());
        for (o, p) in out.iter_mut().zip(probes) {
            *o = idx.time(p);
        }
    }
}

/// A random valid expanding search: repeatedly extends a random frontier
/// arc from a searched end by a random amount.
pub fn random_schedule<R: Rng + ?Sized>(net: &MetricNetwork, rng: &mut R) -> ExpandingSchedule {
    let n = net.num_arcs();
    // searched prefix [0, lo] from u and suffix [hi, len] from v
    let mut lo = vec![0.0; n];
    let mut hi: Vec<f64> = net.arcs().iter().map(|a| a.len).collect();
    let mut vcov = vec![false; net.num_vertices()];
    vcov[net.root().0] = true;
    let mut s = ExpandingSchedule::new();
    loop {
        let mut moves = Vec::new();
        for (i, a) in net.arcs().iter().enumerate() {
            if hi[i] - lo[i] > EPS {
                if vcov[a.u.0] {
                    moves.push((i, true));
                }
                if vcov[a.v.0] {
                    moves.push((i, false));
                }
            }
        }
        if moves.is_empty() {
            break;
        }
        let (i, from_u) = moves[rng.random_range(0..moves.len())];
        let rem = hi[i] - lo[i];
        let step = if rng.random_bool(0.6) {
            rem
        } else {
            rem * rng.random_range(0.1..0.9)
        };
        let seg = if from_u {
            let seg = Segment {
                arc: ArcId(i),
                from: lo[i],
                to: lo[i] + step,
            };
            lo[i] += step;
            seg
        } else {
            let seg = Segment {
                arc: ArcId(i),
                from: hi[i],
                to: hi[i] - step,
            };
            hi[i] -= step;
            seg
        };
        if hi[i] - lo[i] <= EPS {
            lo[i] = hi[i];
            let a = &net.arcs()[i];
            vcov[a.u.0] = true;
            vcov[a.v.0] = true;
        }
        s.push(seg);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{figure3, unit_star, y_network, NetworkFamily};
    use rand::SeedableRng;

    #[test]
    fn waterfill_times_follow_the_profile() {
        let star = unit_star(3).unwrap();
        let s = waterfill(&star);
        s.validate(&star).unwrap();
        for x in [0.1, 0.5, 1.0] {
            let p = star.point(ArcId(1), x).unwrap();
            assert!((s.search_time(&star, &p).unwrap().unwrap() - 3.0 * x).abs() < 1e-12);
        }
        let y = y_network(1.0, 2.0).unwrap();
        let s = waterfill(&y);
        s.validate(&y).unwrap();
        let h = y.point(ArcId(2), 1.0).unwrap();
        assert!((s.search_time(&y, &h).unwrap().unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn figure3_leaf_under_waterfill() {
        let net = figure3(2).unwrap();
        let s = waterfill(&net);
        let leaf = PointRef::Vertex(net.vertex_by_name("x0").unwrap());
        let t = s.search_time(&net, &leaf).unwrap().unwrap();
        assert!((t - 6.0).abs() < 1e-12);
        assert!((t / 3.0 - 2.0).abs() < 1e-12);
        assert!((s.sup_normalized_ratio(&net).unwrap().value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn sequential_two_star_is_unbounded() {
        let net = unit_star(2).unwrap();
        let mut s = ExpandingSchedule::new();
        s.push(Segment {
            arc: ArcId(0),
            from: 0.0,
            to: 1.0,
        });
        s.push(Segment {
            arc: ArcId(1),
            from: 0.0,
            to: 1.0,
        });
        s.validate(&net).unwrap();
        let mid = net.point(ArcId(1), 0.5).unwrap();
        assert!((s.search_time(&net, &mid).unwrap().unwrap() - 1.5).abs() < 1e-12);
        let sup = s.sup_normalized_ratio(&net).unwrap();
        assert!(sup.value.is_infinite());
        match sup.witness {
            Some(PointRef::Interior { arc, offset }) => {
                assert_eq!(arc, ArcId(1));
                assert!(offset < 1e-3);
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn root_time_is_zero_and_uncovered_is_none() {
        let net = unit_star(2).unwrap();
        let mut s = ExpandingSchedule::new();
        s.push(Segment {
            arc: ArcId(0),
            from: 0.0,
            to: 1.0,
        });
        assert_eq!(
            s.search_time(&net, &PointRef::Vertex(net.root())).unwrap(),
            Some(0.0)
        );
        let p = net.point(ArcId(1), 0.5).unwrap();
        assert_eq!(s.search_time(&net, &p).unwrap(), None);
    }

    #[test]
    fn invalid_schedules_are_rejected() {
        let net = parse("root O\narc a O v 1\narc b v w 1\n");
        let mut s = ExpandingSchedule::new();
        s.push(Segment {
            arc: ArcId(1),
            from: 0.0,
            to: 1.0,
        });
        assert!(s.validate(&net).is_err());
        let mut s = ExpandingSchedule::new();
        s.push(Segment {
            arc: ArcId(0),
            from: 0.0,
            to: 1.0,
        });
        s.push(Segment {
            arc: ArcId(0),
            from: 0.5,
            to: 1.0,
        });
        assert!(s.validate(&net).is_err());
    }

    fn parse(t: &str) -> MetricNetwork {
        crate::network::parse_network(t).unwrap()
    }

    #[test]
    fn det_ratio_examples() {
        let y = Instance::Net(y_network(1.0, 2.0).unwrap());
        assert!((det_ratio(&y, 20).unwrap().sigma - 1.5).abs() < 1e-12);
        let star = Instance::Family(NetworkFamily::star(5).unwrap());
        let r = det_ratio(&star, 20).unwrap();
        assert_eq!(r.sigma, 5.0);
        assert!(r.certified);
    }

    #[test]
    fn det_ratio_family_budget() {
        // a growth bound far above the true ratio cannot be certified
        let fam = NetworkFamily::new("ray", 3, |r| crate::generate::star(&[r])).unwrap();
        let r = det_ratio(&Instance::Family(fam.clone()), 4).unwrap();
        assert!(!r.certified);
        assert_eq!(r.sigma, 1.0);
        // a family whose frontier keeps widening does not stabilize
        let widening = NetworkFamily::new("widening", 3, |r| {
            if r <= 4.0 {
                return crate::generate::star(&[r]);
            }
            let mut b = crate::network::NetworkBuilder::new();
            let o = b.vertex("O");
            b.root(o);
            b.arc_between("stem", "O", "v", 4.0)?;
            for leaf in ["a", "b", "c"] {
                b.arc_between(leaf, "v", leaf, r - 4.0)?;
            }
            b.build()
        })
        .unwrap();
        assert!(matches!(
            det_ratio(&Instance::Family(widening), 3),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn rdfs_two_orders_on_a_star() {
        let net = unit_star(3).unwrap();
        let fwd = rdfs_network(&net, DfsOrder::Forward).unwrap();
        let rev = rdfs_network(&net, DfsOrder::Reverse).unwrap();
        let mid_leaf = PointRef::Vertex(VertexId(2));
        let t1 = fwd.search_time(&net, &mid_leaf).unwrap().unwrap();
        let t2 = rev.search_time(&net, &mid_leaf).unwrap().unwrap();
        assert!(((t1 + t2) / 2.0 - 2.0).abs() < 1e-12);
        let first_leaf = PointRef::Vertex(VertexId(1));
        let t1 = fwd.search_time(&net, &first_leaf).unwrap().unwrap();
        let t2 = rev.search_time(&net, &first_leaf).unwrap().unwrap();
        assert_eq!((t1, t2), (1.0, 3.0));
    }

    #[test]
    fn rdfs_rejects_cycles() {
        let net = parse("root O\narc a O v 1\narc b O v 1\n");
        assert!(matches!(
            rdfs_network(&net, DfsOrder::Forward),
            Err(Error::NotTree(_))
        ));
    }

    #[test]
    fn doubling_on_a_ray_never_retreats() {
        let inst = Instance::Family(NetworkFamily::star(1).unwrap());
        let strat = DoublingStrategy::new(&inst, -3, 4).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let levels = strat.sample_levels(&mut rng);
            let s = strat.schedule(&levels);
            s.validate(strat.tree().net()).unwrap();
            for x in [0.5, 1.7, 9.0, 15.5] {
                let p = strat.network().point(ArcId(0), x).unwrap();
                let q = strat.tree().map_point(strat.network(), &p).unwrap();
                let t = s.search_time(strat.tree().net(), &q).unwrap().unwrap();
                assert!((t - x).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn doubling_rejects_bad_levels() {
        let inst = Instance::Net(unit_star(2).unwrap());
        assert!(matches!(
            DoublingStrategy::new(&inst, 2, 2),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            DoublingStrategy::new(&inst, -4, -1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn level_cost_specializes_when_neighbours_are_empty() {
        // a single arc of length 1.5 from the root: with x at d = 1 (k = 1),
        // Q_0 = [1/2,1) and Q_2 = [2,4) is empty
        let net = crate::generate::star(&[1.5]).unwrap();
        let prof = RadiusProfile::of(&net);
        let b = level_cost_from_profile(&prof, 1.0);
        assert_eq!(b.k, 1);
        assert_eq!(b.l3, 0.0);
        // Q_1 = [1, 2) ∩ [0, 1.5]: λ = 0.5, moment = (1.5² - 1)/2
        let lam = 0.5;
        let mom = (2.25 - 1.0) / 2.0;
        assert!((b.l2 - ((1.0 / 2.0 + 0.5) * lam - mom / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn figure3_mixture_expectations() {
        let m = Figure3Mixture::new(2).unwrap();
        let leaf = PointRef::Vertex(m.network().vertex_by_name("x3").unwrap());
        assert!((m.expected_time(&leaf).unwrap() / 3.0 - 1.5).abs() < 1e-12);
        // exact average over all 4! pendant orders
        let net = m.network();
        let mut total = 0.0;
        let mut count = 0.0;
        let perms = permutations(4);
        for perm in &perms {
            let mut s = ExpandingSchedule::new();
            s.push(Segment {
                arc: ArcId(0),
                from: 0.0,
                to: 2.0,
            });
            for &a in perm {
                s.push(Segment {
                    arc: ArcId(a + 1),
                    from: 0.0,
                    to: 1.0,
                });
            }
            total += s.search_time(net, &leaf).unwrap().unwrap();
            count += 1.0;
        }
        assert!((total / count - 4.5).abs() < 1e-12);
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn random_schedules_are_valid_and_complete() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let net = crate::generate::random_network(&mut rng, 6, 3);
            let s = random_schedule(&net, &mut rng);
            s.validate(&net).unwrap();
            assert!(s.covers(&net));
            assert!((s.total_measure() - net.total_measure()).abs() < 1e-7);
        }
    }
}
