//! Pathwise search: closed tours at unit speed, Chinese postman tours and
//! the randomized strategies built from them.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::expanding::{doubling_network, DfsOrder, DoublingLevels};
use crate::generate::Instance;
use crate::network::{dijkstra, ArcId, MetricNetwork, PointRef, Probe, VertexId, EPS};
use crate::sim::{RandomizedStrategy, SimRng};
use crate::subnet::{ball, RootedTree, ShortestPathTree};

/// Motion along one arc from offset `from` to offset `to`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Step {
    pub arc: ArcId,
    pub from: f64,
    pub to: f64,
    pub t_start: f64,
    pub t_end: f64,
}

impl Step {
    fn time_at(&self, x: f64) -> Option<f64> {
        let (lo, hi) = if self.from <= self.to {
            (self.from, self.to)
        } else {
            (self.to, self.from)
        };
        (x >= lo - EPS && x <= hi + EPS).then(|| self.t_start + (x - self.from).abs())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepJson {
    pub arc: String,
    pub from: f64,
    pub to: f64,
    pub t_start: f64,
    pub t_end: f64,
}

/// A walk from the root at unit speed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Tour {
    steps: Vec<Step>,
}

impl Tour {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn length(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.t_end)
    }

    /// Appends a move; zero-length moves are dropped.
    pub fn walk(&mut self, arc: ArcId, from: f64, to: f64) {
        let len = (to - from).abs();
        if len <= EPS {
            return;
        }
        let t = self.length();
        self.steps.push(Step {
            arc,
            from,
            to,
            t_start: t,
            t_end: t + len,
        });
    }

    /// The same walk backwards.
    pub fn reversed(&self) -> Tour {
        let mut t = Tour::new();
        for s in self.steps.iter().rev() {
            t.walk(s.arc, s.to, s.from);
        }
        t
    }

    /// Checks that the walk starts at the root and is continuous.
    pub fn validate(&self, net: &MetricNetwork) -> Result<()> {
        let mut at = PointRef::Vertex(net.root());
        let mut t = 0.0;
        for (k, s) in self.steps.iter().enumerate() {
            let start = net.point(s.arc, s.from)?;
            net.point(s.arc, s.to)?;
            if !same_point(&at, &start) {
                return Err(Error::Verification(format!(
                    "step {k} does not continue the walk"
                )));
            }
            if (s.t_start - t).abs() > 1e-7
                || (s.t_end - s.t_start - (s.to - s.from).abs()).abs() > 1e-7
            {
                return Err(Error::Verification(format!(
                    "step {k} is not at unit speed"
                )));
            }
            at = net.point(s.arc, s.to)?;
            t = s.t_end;
        }
        Ok(())
    }

    pub fn is_closed(&self, net: &MetricNetwork) -> bool {
        match self.steps.last() {
            None => true,
            Some(s) => net
                .point(s.arc, s.to)
                .is_ok_and(|p| p == PointRef::Vertex(net.root())),
        }
    }

    /// Whether every point of the network is visited.
    pub fn covers(&self, net: &MetricNetwork) -> bool {
        let mut per_arc: Vec<Vec<(f64, f64)>> = vec![Vec::new(); net.num_arcs()];
        for s in &self.steps {
            per_arc[s.arc.0].push((s.from.min(s.to), s.from.max(s.to)));
        }
        per_arc.iter_mut().zip(net.arcs()).all(|(iv, arc)| {
            iv.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut reach = 0.0;
            for &(lo, hi) in iv.iter() {
                if lo > reach + 1e-7 {
                    return false;
                }
                reach = f64::max(reach, hi);
            }
            reach >= arc.len - 1e-7
        })
    }

    /// First visit time of `p`, or `None` if never visited.
    pub fn search_time(&self, net: &MetricNetwork, p: &PointRef) -> Result<Option<f64>> {
        let probe = Probe::of(net, p)?;
        let t = self.index(net.num_arcs()).time(&probe);
        Ok(t.is_finite().then_some(t))
    }

    /// Exact `sup T/d` of a covering tour; infinite when points arbitrarily
    /// close to the root are first visited at a positive time.
    pub fn sup_normalized_ratio(&self, net: &MetricNetwork) -> Result<f64> {
        if !self.covers(net) {
            return domain("tour does not cover the network");
        }
        let idx = self.index(net.num_arcs());
        let mut best: f64 = 0.0;
        for (i, arc) in net.arcs().iter().enumerate() {
            let a = ArcId(i);
            let steps = &idx.by_arc[i];
            // the first-visit time is the lower envelope of the visits' lines
            let mut xs = vec![0.0, arc.len, net.watershed(a)];
            for s in steps {
                xs.push(s.from);
                xs.push(s.to);
            }
            for (j, s) in steps.iter().enumerate() {
                for t in &steps[..j] {
                    let (ds, dt) = (dir(s), dir(t));
                    if ds != dt {
                        let (cs, ct) = (s.t_start - ds * s.from, t.t_start - dt * t.from);
                        xs.push((ct - cs) / (ds - dt));
                    }
                }
            }
            for x in xs {
                if !(x >= 0.0 && x <= arc.len) {
                    continue;
                }
                let d = net.distance_on_arc(a, x)?;
                if d > EPS {
                    let t = idx.time(&Probe(vec![(a, x)]));
                    best = best.max(t / d);
                } else {
                    // approach the root along this arc
                    let inward = if x <= EPS { EPS.sqrt() } else { x - EPS.sqrt() };
                    let t = idx.time(&Probe(vec![(a, inward)]));
                    if t > 2.0 * EPS.sqrt() + EPS {
                        return Ok(f64::INFINITY);
                    }
                }
            }
        }
        Ok(best)
    }

    pub fn to_json(&self, net: &MetricNetwork) -> Vec<StepJson> {
        self.steps
            .iter()
            .map(|s| StepJson {
                arc: net.arcs()[s.arc.0].name.clone(),
                from: s.from,
                to: s.to,
                t_start: s.t_start,
                t_end: s.t_end,
            })
            .collect()
    }

    pub fn index(&self, num_arcs: usize) -> TourIndex {
        let mut by_arc = vec![Vec::new(); num_arcs];
        for s in &self.steps {
            by_arc[s.arc.0].push(*s);
        }
        TourIndex { by_arc }
    }
}

fn dir(s: &Step) -> f64 {
    if s.to >= s.from {
        1.0
    } else {
        -1.0
    }
}

fn same_point(a: &PointRef, b: &PointRef) -> bool {
    match (a, b) {
        (PointRef::Vertex(x), PointRef::Vertex(y)) => x == y,
        (
            PointRef::Interior {
                arc: a1,
                offset: x1,
            },
            PointRef::Interior {
                arc: a2,
                offset: x2,
            },
        ) => a1 == a2 && (x1 - x2).abs() < 1e-7,
        _ => false,
    }
}

/// Per-arc visits of a tour in time order.
#[derive(Clone, Debug)]
pub struct TourIndex {
    by_arc: Vec<Vec<Step>>,
}

impl TourIndex {
    pub fn time(&self, probe: &Probe) -> f64 {
        if probe.is_root() {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        for &(a, x) in &probe.0 {
            for s in &self.by_arc[a.0] {
                if s.t_start >= best {
                    break;
                }
                if let Some(t) = s.time_at(x) {
                    best = best.min(t);
                }
            }
        }
        best
    }
}

/// A minimum-length closed tour covering every arc.
#[derive(Clone, Debug, PartialEq)]
pub struct CppSolution {
    pub length: f64,
    /// Matched odd-degree vertex pairs with their shortest-path distance.
    pub matching: Vec<(VertexId, VertexId, f64)>,
    /// Arcs walked a second time.
    pub duplicated: Vec<ArcId>,
    pub tour: Tour,
}

const MAX_ODD: usize = 20;

/// Chinese postman tour from the root: pair odd-degree vertices by a
/// minimum-weight perfect matching on shortest-path distances, duplicate
/// the matched paths, and follow an Euler circuit.
pub fn chinese_postman(net: &MetricNetwork) -> Result<CppSolution> {
    let n = net.num_vertices();
    if net.num_arcs() + 1 == n {
        return Ok(tree_postman(net));
    }
    let odd: Vec<usize> = (0..n)
        .filter(|&v| net.degree(VertexId(v)) % 2 == 1)
        .collect();
    if odd.len() > MAX_ODD {
        return Err(Error::Budget(format!(
            "{} odd-degree vertices exceed the matching limit of {MAX_ODD}",
            odd.len()
        )));
    }
    let paths: Vec<(Vec<f64>, Vec<Option<ArcId>>)> = odd
        .iter()
        .map(|&s| dijkstra(n, net.arcs(), VertexId(s)))
        .collect();
    let k = odd.len();
    let full = (1usize << k) - 1;
    let mut dp = vec![f64::INFINITY; 1 << k];
    let mut choice = vec![(0usize, 0usize); 1 << k];
    dp[0] = 0.0;
    for mask in 0..=full {
        if !dp[mask].is_finite() || mask == full {
            continue;
        }
        let i = (!mask).trailing_zeros() as usize;
        #[allow(clippy::needless_range_loop)]
        for j in i + 1..k {
            if mask & (1 << j) != 0 {
                continue;
            }
            let next = mask | (1 << i) | (1 << j);
            let c = dp[mask] + paths[i].0[odd[j]];
            if c < dp[next] - 1e-12 {
                dp[next] = c;
                choice[next] = (i, j);
            }
        }
    }
    let mut duplicated = Vec::new();
    let mut matching = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let (i, j) = choice[mask];
        matching.push((VertexId(odd[i]), VertexId(odd[j]), paths[i].0[odd[j]]));
        let pred = &paths[i].1;
        let mut v = odd[j];
        while v != odd[i] {
            let a = pred[v].expect("connected");
            duplicated.push(a);
            let arc = &net.arcs()[a.0];
            v = if arc.v.0 == v { arc.u.0 } else { arc.v.0 };
        }
        mask &= !((1 << i) | (1 << j));
    }
    duplicated.sort();
    matching.reverse();
    let mut edges: Vec<ArcId> = net.arc_ids().collect();
    edges.extend(duplicated.iter().copied());
    let tour = euler_circuit(net, &edges);
    let length = tour.length();
    Ok(CppSolution {
        length,
        matching,
        duplicated,
        tour,
    })
}

/// On a tree every subtree holds an odd number of odd-degree vertices, so
/// every arc is walked twice. Each subtree passes one unmatched odd vertex
/// up through its parent arc and the rest are paired where they meet.
fn tree_postman(net: &MetricNetwork) -> CppSolution {
    let n = net.num_vertices();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        if let Some(a) = net.pred_arc(VertexId(v)) {
            let arc = &net.arcs()[a.0];
            let parent = if arc.u.0 == v { arc.v.0 } else { arc.u.0 };
            children[parent].push(v);
        }
    }
    let mut order = vec![net.root().0];
    let mut i = 0;
    while i < order.len() {
        order.extend(children[order[i]].iter().copied());
        i += 1;
    }
    let depth = net.vertex_distances();
    let mut up: Vec<Option<usize>> = vec![None; n];
    let mut matching = Vec::new();
    for &v in order.iter().rev() {
        let mut open: Vec<usize> = children[v].iter().filter_map(|&c| up[c]).collect();
        if net.degree(VertexId(v)) % 2 == 1 {
            open.push(v);
        }
        if open.len() % 2 == 1 {
            up[v] = open.pop();
        }
        for pair in open.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            let d = depth[a] + depth[b] - 2.0 * depth[v];
            matching.push((VertexId(a), VertexId(b), d));
        }
    }
    let duplicated: Vec<ArcId> = net.arc_ids().collect();
    let mut edges = duplicated.clone();
    edges.extend(duplicated.iter().copied());
    let tour = euler_circuit(net, &edges);
    CppSolution {
        length: tour.length(),
        matching,
        duplicated,
        tour,
    }
}

/// Hierholzer's algorithm over a multiset of arcs with all degrees even.
fn euler_circuit(net: &MetricNetwork, edges: &[ArcId]) -> Tour {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); net.num_vertices()];
    for (e, a) in edges.iter().enumerate() {
        let arc = &net.arcs()[a.0];
        adj[arc.u.0].push(e);
        if !arc.is_loop() {
            adj[arc.v.0].push(e);
        }
    }
    for list in &mut adj {
        list.reverse();
    }
    let mut used = vec![false; edges.len()];
    // stack of (vertex, edge used to arrive)
    let mut stack: Vec<(usize, Option<usize>)> = vec![(net.root().0, None)];
    let mut circuit: Vec<(usize, Option<usize>)> = Vec::new();
    while let Some(&(v, _)) = stack.last() {
        while adj[v].last().is_some_and(|&e| used[e]) {
            adj[v].pop();
        }
        match adj[v].pop() {
            Some(e) => {
                used[e] = true;
                let arc = &net.arcs()[edges[e].0];
                let w = if arc.u.0 == v { arc.v.0 } else { arc.u.0 };
                stack.push((w, Some(e)));
            }
            None => circuit.push(stack.pop().expect("nonempty")),
        }
    }
    circuit.reverse();
    let mut tour = Tour::new();
    let mut at = net.root().0;
    for &(w, e) in &circuit[1..] {
        let e = e.expect("every later entry has an edge");
        let a = edges[e];
        let arc = &net.arcs()[a.0];
        if arc.u.0 == at && (arc.v.0 == w || arc.is_loop()) {
            tour.walk(a, 0.0, arc.len);
        } else {
            tour.walk(a, arc.len, 0.0);
        }
        at = w;
    }
    tour
}

/// Equiprobable mixture of a Chinese postman tour and its reverse.
#[derive(Clone, Debug)]
pub struct RandomCpt {
    net: MetricNetwork,
    forward: TourIndex,
    backward: TourIndex,
    pub cpp: CppSolution,
}

impl RandomCpt {
    pub fn new(net: &MetricNetwork) -> Result<Self> {
        let cpp = chinese_postman(net)?;
        let m = net.num_arcs();
        Ok(Self {
            net: net.clone(),
            forward: cpp.tour.index(m),
            backward: cpp.tour.reversed().index(m),
            cpp,
        })
    }

    /// Exact expected search time of `p`.
    pub fn expected_time(&self, p: &PointRef) -> Result<f64> {
        let pr = Probe::of(&self.net, p)?;
        Ok(0.5 * (self.forward.time(&pr) + self.backward.time(&pr)))
    }
}

impl RandomizedStrategy for RandomCpt {
    fn network(&self) -> &MetricNetwork {
        &self.net
    }

    fn probe(&self, p: &PointRef) -> Result<Probe> {
        Probe::of(&self.net, p)
    }

    fn sample_times(&self, rng: &mut SimRng, probes: &[Probe], out: &mut [f64]) {
        let idx = if rng.random_bool(0.5) {
            &self.forward
        } else {
            &self.backward
        };
        for (o, p) in out.iter_mut().zip(probes) {
            *o = idx.time(p);
        }
    }
}

/// Worst-case factor of the doubling Chinese-postman strategy against the
/// optimal randomized pathwise ratio: `2(r/(r-1) + r/2)`.
pub fn rcpt_approximation_factor(r: f64) -> Result<f64> {
    if !(r > 1.0) {
        return domain(format!("growth factor must exceed 1, got {r}"));
    }
    Ok(2.0 * (r / (r - 1.0) + r / 2.0))
}

/// The growth factor minimizing the approximation factor.
pub fn rcpt_optimal_growth() -> f64 {
    1.0 + std::f64::consts::SQRT_2
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RcptIteration {
    pub i: i32,
    pub radius: f64,
    /// Measure of the ball toured.
    pub measure: f64,
    /// Length of its Chinese postman tour.
    pub tour_length: f64,
}

/// Tours of `Q[r^i]` for `i = i_min..=i_max`, each walked in a fresh
/// random direction.
#[derive(Clone, Debug)]
pub struct RcptDoubling {
    base: MetricNetwork,
    r: f64,
    iterations: Vec<RcptIteration>,
    forward: Vec<TourIndex>,
    backward: Vec<TourIndex>,
}

impl RcptDoubling {
    pub fn new(inst: &Instance, r: f64, i_min: i32, i_max: i32) -> Result<Self> {
        rcpt_approximation_factor(r)?;
        if i_min > i_max {
            return domain("need i_min <= i_max");
        }
        let top = r.powi(i_max);
        let base = match inst {
            Instance::Net(net) => {
                if top < net.r_max() - EPS {
                    return domain(format!(
                        "r^i_max = {top} must reach r_max = {}",
                        net.r_max()
                    ));
                }
                net.clone()
            }
            Instance::Family(f) => f.ball(top)?,
        };
        let m = base.num_arcs();
        let (mut iterations, mut forward, mut backward) = (Vec::new(), Vec::new(), Vec::new());
        for i in i_min..=i_max {
            let radius = r.powi(i);
            let sub = ball(&base, radius)?;
            let cpp = chinese_postman(&sub.net)?;
            let mut tour = Tour::new();
            for s in cpp.tour.steps() {
                let o = sub.map.arc_origin(s.arc);
                tour.walk(o.arc, o.to_source(s.from), o.to_source(s.to));
            }
            iterations.push(RcptIteration {
                i,
                radius,
                measure: sub.net.total_measure(),
                tour_length: cpp.length,
            });
            forward.push(tour.index(m));
            backward.push(tour.reversed().index(m));
        }
        Ok(Self {
            base,
            r,
            iterations,
            forward,
            backward,
        })
    }

    pub fn growth(&self) -> f64 {
        self.r
    }

    pub fn iterations(&self) -> &[RcptIteration] {
        &self.iterations
    }

    /// Search time when iteration `k` is walked forward iff `coins[k]`.
    pub fn time_with_coins(&self, coins: &[bool], probe: &Probe) -> f64 {
        let mut elapsed = 0.0;
        for (k, it) in self.iterations.iter().enumerate() {
            let idx = if coins[k] {
                &self.forward[k]
            } else {
                &self.backward[k]
            };
            let t = idx.time(probe);
            if t.is_finite() {
                return elapsed + t;
            }
            elapsed += it.tour_length;
        }
        f64::INFINITY
    }

    /// Exact expected search time: the direction only matters in the first
    /// iteration that reaches the point.
    pub fn expected_time(&self, p: &PointRef) -> Result<f64> {
        let pr = Probe::of(&self.base, p)?;
        let mut elapsed = 0.0;
        for (k, it) in self.iterations.iter().enumerate() {
            let (f, b) = (self.forward[k].time(&pr), self.backward[k].time(&pr));
            if f.is_finite() {
                return Ok(elapsed + 0.5 * (f + b));
            }
            elapsed += it.tour_length;
        }
        domain("point is outside every iteration")
    }
}

impl RandomizedStrategy for RcptDoubling {
    fn network(&self) -> &MetricNetwork {
        &self.base
    }

    fn probe(&self, p: &PointRef) -> Result<Probe> {
        Probe::of(&self.base, p)
    }

    fn sample_times(&self, rng: &mut SimRng, probes: &[Probe], out: &mut [f64]) {
        let coins: Vec<bool> = (0..self.iterations.len())
            .map(|_| rng.random_bool(0.5))
            .collect();
        for (o, p) in out.iter_mut().zip(probes) {
            *o = self.time_with_coins(&coins, p);
        }
    }
}

/// Closed depth-first walk of the part of a tree at depth below `hi`.
pub fn closed_dfs(tree: &RootedTree, order: DfsOrder, hi: f64, tour: &mut Tour) {
    enum Ev {
        Enter(ArcId),
        Leave(ArcId, f64),
    }
    let mut stack: Vec<Ev> = Vec::new();
    let push_children = |v: VertexId, stack: &mut Vec<Ev>| {
        let ch = tree.children(v);
        match order {
            DfsOrder::Forward => stack.extend(ch.iter().rev().map(|&a| Ev::Enter(a))),
            DfsOrder::Reverse => stack.extend(ch.iter().map(|&a| Ev::Enter(a))),
        }
    };
    push_children(tree.net().root(), &mut stack);
    while let Some(ev) = stack.pop() {
        match ev {
            Ev::Enter(a) => {
                let len = tree.net().arcs()[a.0].len;
                let pd = tree.depth(tree.parent_of(a));
                let reach = (hi - pd).min(len);
                if reach <= EPS {
                    continue;
                }
                let top = tree.arc_offset(a, 0.0);
                let bottom = tree.arc_offset(a, reach);
                tour.walk(a, top, bottom);
                stack.push(Ev::Leave(a, bottom));
                if reach >= len - EPS {
                    push_children(tree.child_of(a), &mut stack);
                }
            }
            Ev::Leave(a, bottom) => tour.walk(a, bottom, tree.arc_offset(a, 0.0)),
        }
    }
}

/// Randomized depth-first tours of a tree: a closed DFS or its mirror.
#[derive(Clone, Debug)]
pub struct PathwiseRdfs {
    tree: RootedTree,
    forward: TourIndex,
    backward: TourIndex,
}

pub fn pathwise_rdfs(tree: &RootedTree, order: DfsOrder) -> Tour {
    let mut t = Tour::new();
    closed_dfs(tree, order, f64::INFINITY, &mut t);
    t
}

impl PathwiseRdfs {
    pub fn new(net: &MetricNetwork) -> Result<Self> {
        let tree = RootedTree::new(net.clone())?;
        let m = net.num_arcs();
        let forward = pathwise_rdfs(&tree, DfsOrder::Forward).index(m);
        let backward = pathwise_rdfs(&tree, DfsOrder::Reverse).index(m);
        Ok(Self {
            tree,
            forward,
            backward,
        })
    }

    pub fn expected_time(&self, p: &PointRef) -> Result<f64> {
        let pr = Probe::of(self.tree.net(), p)?;
        Ok(0.5 * (self.forward.time(&pr) + self.backward.time(&pr)))
    }
}

impl RandomizedStrategy for PathwiseRdfs {
    fn network(&self) -> &MetricNetwork {
        self.tree.net()
    }

    fn probe(&self, p: &PointRef) -> Result<Probe> {
        Probe::of(self.tree.net(), p)
    }

    fn sample_times(&self, rng: &mut SimRng, probes: &[Probe], out: &mut [f64]) {
        let idx = if rng.random_bool(0.5) {
            &self.forward
        } else {
            &self.backward
        };
        for (o, p) in out.iter_mut().zip(probes) {
            *o = idx.time(p);
        }
    }
}

/// Pathwise doubling on a shortest-path tree: iteration `j` is a closed
/// randomized DFS of the points at depth below `d_{j+1}`, the last
/// iteration of the whole tree.
#[derive(Clone, Debug)]
pub struct PathwiseDoubling {
    source: MetricNetwork,
    spt: ShortestPathTree,
    j_min: i32,
    j_max: i32,
}

impl PathwiseDoubling {
    pub fn new(inst: &Instance, j_min: i32, j_max: i32) -> Result<Self> {
        if j_min >= j_max || j_max - j_min > 60 {
            return domain(format!("bad level range {j_min}..={j_max}"));
        }
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

    pub fn sample_levels<R: Rng + ?Sized>(&self, rng: &mut R) -> DoublingLevels {
        DoublingLevels::sample(rng, self.j_min, self.j_max)
    }

    pub fn tour(&self, levels: &DoublingLevels) -> Tour {
        let mut t = Tour::new();
        for j in self.j_min..=self.j_max {
            let hi = if j == self.j_max {
                f64::INFINITY
            } else {
                levels.threshold(j + 1)
            };
            closed_dfs(&self.spt.tree, levels.order(j), hi, &mut t);
        }
        t
    }
}

impl RandomizedStrategy for PathwiseDoubling {
    fn network(&self) -> &MetricNetwork {
        &self.source
    }

    fn probe(&self, p: &PointRef) -> Result<Probe> {
        let q = self.spt.map_point(&self.source, p)?;
        Probe::of(self.spt.net(), &q)
    }

    fn sample_times(&self, rng: &mut SimRng, probes: &[Probe], out: &mut [f64]) {
        let levels = self.sample_levels(rng);
        let idx = self.tour(&levels).index(self.spt.net().num_arcs());
        for (o, p) in out.iter_mut().zip(probes) {
            *o = idx.time(p);
        }
    }
}
