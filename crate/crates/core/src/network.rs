//! Rooted metric networks.
//!
//! A [`MetricNetwork`] is a connected multigraph whose arcs are continua of
//! positive length. Points are either vertices or interior arc points, and
//! the distance of a point is its shortest-path distance from the root.
//! Vertex distances are computed once at construction; the network is
//! immutable afterwards.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Global comparison tolerance for distances and measures.
pub const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArcId(pub usize);

#[derive(Clone, Debug, PartialEq)]
pub struct Arc {
    pub name: String,
    pub u: VertexId,
    pub v: VertexId,
    pub len: f64,
}

impl Arc {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// A location on a network: a vertex, or a point strictly inside an arc at
/// `offset` from the arc's `u` endpoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PointRef {
    Vertex(VertexId),
    Interior { arc: ArcId, offset: f64 },
}

#[derive(Clone, Debug)]
pub struct MetricNetwork {
    vertex_names: Vec<String>,
    arcs: Vec<Arc>,
    root: VertexId,
    dist: Vec<f64>,
    pred: Vec<Option<ArcId>>,
}

/// Incremental constructor for [`MetricNetwork`].
#[derive(Clone, Debug, Default)]
pub struct NetworkBuilder {
    vertex_names: Vec<String>,
    vertex_index: HashMap<String, VertexId>,
    arcs: Vec<Arc>,
    arc_names: HashMap<String, ArcId>,
    root: Option<VertexId>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of the named vertex, creating it if needed.
    pub fn vertex(&mut self, name: &str) -> VertexId {
        if let Some(&v) = self.vertex_index.get(name) {
            return v;
        }
        let v = VertexId(self.vertex_names.len());
        self.vertex_names.push(name.to_string());
        self.vertex_index.insert(name.to_string(), v);
        v
    }

    pub fn has_vertex(&self, name: &str) -> bool {
        self.vertex_index.contains_key(name)
    }

    pub fn arc(&mut self, name: &str, u: VertexId, v: VertexId, len: f64) -> Result<ArcId> {
        if !(len > 0.0 && len.is_finite()) {
            return domain(format!(
                "arc {name}: length must be positive and finite, got {len}"
            ));
        }
        if self.arc_names.contains_key(name) {
            return domain(format!("duplicate arc id {name}"));
        }
        for w in [u, v] {
            if w.0 >= self.vertex_names.len() {
                return domain(format!("arc {name}: unknown vertex {}", w.0));
            }
        }
        let id = ArcId(self.arcs.len());
        self.arcs.push(Arc {
            name: name.to_string(),
            u,
            v,
            len,
        });
        self.arc_names.insert(name.to_string(), id);
        Ok(id)
    }

    /// Adds an arc between two named vertices, creating them as needed.
    pub fn arc_between(&mut self, name: &str, u: &str, v: &str, len: f64) -> Result<ArcId> {
        let (u, v) = (self.vertex(u), self.vertex(v));
        self.arc(name, u, v, len)
    }

    pub fn root(&mut self, v: VertexId) -> &mut Self {
        self.root = Some(v);
        self
    }

    pub fn build(self) -> Result<MetricNetwork> {
        let root = match self.root {
            Some(r) => r,
            None => return domain("network has no root"),
        };
        MetricNetwork::new(self.vertex_names, self.arcs, root)
    }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapEntry(f64, usize);

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source shortest paths over an arc list. Returns distances and the
/// arc through which each vertex was first settled.
pub(crate) fn dijkstra(n: usize, arcs: &[Arc], source: VertexId) -> (Vec<f64>, Vec<Option<ArcId>>) {
    let mut adj: Vec<Vec<(usize, ArcId)>> = vec![Vec::new(); n];
    for (i, a) in arcs.iter().enumerate() {
        if a.is_loop() {
            continue;
        }
        adj[a.u.0].push((a.v.0, ArcId(i)));
        adj[a.v.0].push((a.u.0, ArcId(i)));
    }
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source.0] = 0.0;
    heap.push(HeapEntry(0.0, source.0));
    while let Some(HeapEntry(d, w)) = heap.pop() {
        if done[w] {
            continue;
        }
        done[w] = true;
        for &(x, a) in &adj[w] {
            let nd = d + arcs[a.0].len;
            if nd < dist[x] {
                dist[x] = nd;
                pred[x] = Some(a);
                heap.push(HeapEntry(nd, x));
            }
        }
    }
    (dist, pred)
}

impl MetricNetwork {
    pub fn new(vertex_names: Vec<String>, arcs: Vec<Arc>, root: VertexId) -> Result<Self> {
        let n = vertex_names.len();
        if root.0 >= n {
            return domain(format!("root vertex {} does not exist", root.0));
        }
        for a in &arcs {
            if !(a.len > 0.0 && a.len.is_finite()) {
                return domain(format!(
                    "arc {}: length must be positive, got {}",
                    a.name, a.len
                ));
            }
            if a.u.0 >= n || a.v.0 >= n {
                return domain(format!("arc {}: endpoint out of range", a.name));
            }
        }
        let (dist, pred) = dijkstra(n, &arcs, root);
        if let Some(i) = dist.iter().position(|d| d.is_infinite()) {
            return Err(Error::Disconnected(format!(
                "vertex {} is unreachable from the root",
                vertex_names[i]
            )));
        }
        Ok(Self {
            vertex_names,
            arcs,
            root,
            dist,
            pred,
        })
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, a: ArcId) -> Result<&Arc> {
        self.arcs
            .get(a.0)
            .ok_or_else(|| Error::Domain(format!("unknown arc {}", a.0)))
    }

    pub fn arc_ids(&self) -> impl Iterator<Item = ArcId> {
        (0..self.arcs.len()).map(ArcId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_names
            .iter()
            .position(|n| n == name)
            .map(VertexId)
    }

    pub fn arc_by_name(&self, name: &str) -> Option<ArcId> {
        self.arcs.iter().position(|a| a.name == name).map(ArcId)
    }

    /// Total measure μ.
    pub fn total_measure(&self) -> f64 {
        self.arcs.iter().map(|a| a.len).sum()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.arcs
            .iter()
            .map(|a| (a.u == v) as usize + (a.v == v) as usize)
            .sum()
    }

    pub fn root_degree(&self) -> usize {
        self.degree(self.root)
    }

    pub fn vertex_distance(&self, v: VertexId) -> f64 {
        self.dist[v.0]
    }

    pub fn vertex_distances(&self) -> &[f64] {
        &self.dist
    }

    /// Arc through which the shortest path to `v` enters it.
    pub fn pred_arc(&self, v: VertexId) -> Option<ArcId> {
        self.pred[v.0]
    }

    /// Farthest distance of any point from the root.
    pub fn r_max(&self) -> f64 {
        self.arcs
            .iter()
            .enumerate()
            .map(|(i, _)| self.arc_max_distance(ArcId(i)))
            .fold(0.0, f64::max)
    }

    /// Offset along `a` of the point equidistant via both endpoints,
    /// clamped to the arc.
    pub fn watershed(&self, a: ArcId) -> f64 {
        let arc = &self.arcs[a.0];
        let (du, dv) = (self.dist[arc.u.0], self.dist[arc.v.0]);
        ((arc.len + dv - du) / 2.0).clamp(0.0, arc.len)
    }

    pub fn arc_max_distance(&self, a: ArcId) -> f64 {
        let x = self.watershed(a);
        self.distance_on_arc_unchecked(a, x)
    }

    pub(crate) fn distance_on_arc_unchecked(&self, a: ArcId, x: f64) -> f64 {
        let arc = &self.arcs[a.0];
        let (du, dv) = (self.dist[arc.u.0], self.dist[arc.v.0]);
        (du + x).min(dv + arc.len - x)
    }

    /// Distance from the root of the point at `offset` along `a`.
    pub fn distance_on_arc(&self, a: ArcId, offset: f64) -> Result<f64> {
        let arc = self.arc(a)?;
        if !(-EPS..=arc.len + EPS).contains(&offset) {
            return domain(format!(
                "offset {offset} outside arc {} of length {}",
                arc.name, arc.len
            ));
        }
        Ok(self.distance_on_arc_unchecked(a, offset.clamp(0.0, arc.len)))
    }

    pub fn distance(&self, p: &PointRef) -> Result<f64> {
        match *p {
            PointRef::Vertex(v) => self
                .dist
                .get(v.0)
                .copied()
                .ok_or_else(|| Error::Domain(format!("unknown vertex {}", v.0))),
            PointRef::Interior { arc, offset } => self.distance_on_arc(arc, offset),
        }
    }

    /// Builds a point on `a`, canonicalizing endpoint offsets to vertices.
    pub fn point(&self, a: ArcId, offset: f64) -> Result<PointRef> {
        let arc = self.arc(a)?;
        if !(-EPS..=arc.len + EPS).contains(&offset) {
            return domain(format!(
                "offset {offset} outside arc {} of length {}",
                arc.name, arc.len
            ));
        }
        Ok(if offset <= EPS {
            PointRef::Vertex(arc.u)
        } else if offset >= arc.len - EPS {
            PointRef::Vertex(arc.v)
        } else {
            PointRef::Interior { arc: a, offset }
        })
    }

    /// Any arc-offset pair at which `p` sits. Vertices resolve to an
    /// incident arc end.
    pub fn locate(&self, p: &PointRef) -> Result<Option<(ArcId, f64)>> {
        match *p {
            PointRef::Interior { arc, offset } => {
                self.arc(arc)?;
                Ok(Some((arc, offset)))
            }
            PointRef::Vertex(v) => {
                if v.0 >= self.num_vertices() {
                    return domain(format!("unknown vertex {}", v.0));
                }
                Ok(self.arcs.iter().enumerate().find_map(|(i, a)| {
                    if a.u == v {
                        Some((ArcId(i), 0.0))
                    } else if a.v == v {
                        Some((ArcId(i), a.len))
                    } else {
                        None
                    }
                }))
            }
        }
    }

    pub fn to_json(&self) -> NetworkJson {
        NetworkJson {
            root: self.vertex_names[self.root.0].clone(),
            vertices: self.vertex_names.clone(),
            arcs: self
                .arcs
                .iter()
                .map(|a| ArcJson {
                    id: a.name.clone(),
                    u: self.vertex_names[a.u.0].clone(),
                    v: self.vertex_names[a.v.0].clone(),
                    len: a.len,
                })
                .collect(),
        }
    }

    pub fn from_json(j: &NetworkJson) -> Result<Self> {
        let mut b = NetworkBuilder::new();
        for v in &j.vertices {
            b.vertex(v);
        }
        for a in &j.arcs {
            b.arc_between(&a.id, &a.u, &a.v, a.len)?;
        }
        if !b.has_vertex(&j.root) {
            return domain(format!("root {} is not a vertex", j.root));
        }
        let r = b.vertex(&j.root);
        b.root(r);
        b.build()
    }

    /// Line-oriented text form; see [`parse_network`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "root {}", self.vertex_names[self.root.0]);
        for v in &self.vertex_names {
            let _ = writeln!(s, "vertex {v}");
        }
        for a in &self.arcs {
            let _ = writeln!(
                s,
                "arc {} {} {} {}",
                a.name, self.vertex_names[a.u.0], self.vertex_names[a.v.0], a.len
            );
        }
        s
    }
}

/// Every arc position at which a point sits: one for interior points, one
/// per incident arc end for vertices, none for the root.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Probe(pub Vec<(ArcId, f64)>);

impl Probe {
    pub fn of(net: &MetricNetwork, p: &PointRef) -> Result<Self> {
        match *p {
            PointRef::Vertex(v) if v == net.root() => Ok(Probe(Vec::new())),
            PointRef::Vertex(v) => {
                if v.0 >= net.num_vertices() {
                    return domain(format!("unknown vertex {}", v.0));
                }
                let mut at = Vec::new();
                for (i, a) in net.arcs().iter().enumerate() {
                    if a.u == v {
                        at.push((ArcId(i), 0.0));
                    }
                    if a.v == v {
                        at.push((ArcId(i), a.len));
                    }
                }
                Ok(Probe(at))
            }
            PointRef::Interior { arc, offset } => {
                net.distance_on_arc(arc, offset)?;
                Ok(Probe(vec![(arc, offset)]))
            }
        }
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcJson {
    pub id: String,
    pub u: String,
    pub v: String,
    pub len: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkJson {
    pub root: String,
    pub vertices: Vec<String>,
    pub arcs: Vec<ArcJson>,
}

/// Parses the text network format:
///
/// ```text
/// # comment
/// root O
/// vertex O
/// arc a O v 1.5
/// ```
///
/// Exactly one `root` line is required. Vertices named by arcs need not be
/// declared separately.
pub fn parse_network(text: &str) -> Result<MetricNetwork> {
    let mut b = NetworkBuilder::new();
    let mut root: Option<(String, usize)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "root" => {
                if toks.len() != 2 {
                    return Err(err("expected `root <vid>`".into()));
                }
                if root.is_some() {
                    return Err(err("duplicate root record".into()));
                }
                root = Some((toks[1].to_string(), line_no));
            }
            "vertex" => {
                if toks.len() != 2 {
                    return Err(err("expected `vertex <vid>`".into()));
                }
                if b.has_vertex(toks[1]) {
                    return Err(err(format!("duplicate vertex {}", toks[1])));
                }
                b.vertex(toks[1]);
            }
            "arc" => {
                if toks.len() != 5 {
                    return Err(err("expected `arc <aid> <vid> <vid> <length>`".into()));
                }
                let len: f64 = toks[4]
                    .parse()
                    .map_err(|_| err(format!("invalid length `{}`", toks[4])))?;
                b.arc_between(toks[1], toks[2], toks[3], len)
                    .map_err(|e| match e {
                        Error::Domain(m) => err(m),
                        other => other,
                    })?;
            }
            other => return Err(err(format!("unknown record `{other}`"))),
        }
    }
    let (name, line) = root.ok_or(Error::Parse {
        line: 0,
        msg: "missing root record".into(),
    })?;
    if !b.has_vertex(&name) {
        return Err(Error::Parse {
            line,
            msg: format!("root {name} is not a vertex"),
        });
    }
    let r = b.vertex(&name);
    b.root(r);
    b.build()
}
