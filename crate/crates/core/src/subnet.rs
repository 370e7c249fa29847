//! Derived networks that remember where their points came from: balls
//! `Q[r]` and shortest-path trees.

use crate::error::{domain, Error, Result};
use crate::network::{Arc, ArcId, MetricNetwork, PointRef, VertexId, EPS};

/// Where a derived arc lies on its source arc. Derived offset `x` maps to
/// source offset `start + x` (forward) or `start - x` (backward).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcOrigin {
    pub arc: ArcId,
    pub start: f64,
    pub forward: bool,
}

impl ArcOrigin {
    pub fn to_source(&self, x: f64) -> f64 {
        if self.forward {
            self.start + x
        } else {
            self.start - x
        }
    }

    pub fn from_source(&self, y: f64) -> f64 {
        if self.forward {
            y - self.start
        } else {
            self.start - y
        }
    }
}

/// Point correspondence between a derived network and its source.
#[derive(Clone, Debug)]
pub struct PointMap {
    arc_origin: Vec<ArcOrigin>,
    /// Source location of each derived vertex.
    vertex_origin: Vec<PointRef>,
    /// Derived vertex for each source vertex, when present.
    source_vertex: Vec<Option<VertexId>>,
    /// Derived arcs lying on each source arc.
    by_source_arc: Vec<Vec<ArcId>>,
}

impl PointMap {
    fn new(
        derived: &MetricNetwork,
        source: &MetricNetwork,
        arc_origin: Vec<ArcOrigin>,
        vertex_origin: Vec<PointRef>,
    ) -> Self {
        let mut source_vertex = vec![None; source.num_vertices()];
        for (i, p) in vertex_origin.iter().enumerate() {
            if let PointRef::Vertex(v) = p {
                source_vertex[v.0] = Some(VertexId(i));
            }
        }
        let mut by_source_arc = vec![Vec::new(); source.num_arcs()];
        for (i, o) in arc_origin.iter().enumerate() {
            by_source_arc[o.arc.0].push(ArcId(i));
        }
        debug_assert_eq!(arc_origin.len(), derived.num_arcs());
        Self {
            arc_origin,
            vertex_origin,
            source_vertex,
            by_source_arc,
        }
    }

    pub fn arc_origin(&self, a: ArcId) -> ArcOrigin {
        self.arc_origin[a.0]
    }

    /// Maps a derived point back onto the source network.
    pub fn to_source(&self, derived: &MetricNetwork, p: &PointRef) -> Result<PointRef> {
        match *p {
            PointRef::Vertex(v) => self
                .vertex_origin
                .get(v.0)
                .copied()
                .ok_or_else(|| Error::Domain(format!("unknown vertex {}", v.0))),
            PointRef::Interior { arc, offset } => {
                derived.arc(arc)?;
                let o = self.arc_origin[arc.0];
                Ok(PointRef::Interior {
                    arc: o.arc,
                    offset: o.to_source(offset),
                })
            }
        }
    }

    /// Maps a source point into the derived network, or `None` when it is not
    /// part of it.
    pub fn from_source(
        &self,
        derived: &MetricNetwork,
        source: &MetricNetwork,
        p: &PointRef,
    ) -> Result<Option<PointRef>> {
        match *p {
            PointRef::Vertex(v) => {
                if v.0 >= source.num_vertices() {
                    return domain(format!("unknown vertex {}", v.0));
                }
                Ok(self.source_vertex[v.0].map(PointRef::Vertex))
            }
            PointRef::Interior { arc, offset } => {
                source.arc(arc)?;
                let mut best: Option<(ArcId, f64)> = None;
                for &d in &self.by_source_arc[arc.0] {
                    let x = self.arc_origin[d.0].from_source(offset);
                    let len = derived.arcs()[d.0].len;
                    if x >= -EPS && x <= len + EPS {
                        // prefer the first match; ties only at shared endpoints
                        if best.is_none() {
                            best = Some((d, x.clamp(0.0, len)));
                        }
                    }
                }
                match best {
                    Some((d, x)) => Ok(Some(derived.point(d, x)?)),
                    None => Ok(None),
                }
            }
        }
    }
}

/// A network derived from a source network together with its point map.
#[derive(Clone, Debug)]
pub struct SubNetwork {
    pub net: MetricNetwork,
    pub map: PointMap,
}

impl SubNetwork {
    pub fn identity(source: &MetricNetwork) -> Self {
        let origins = (0..source.num_arcs())
            .map(|i| ArcOrigin {
                arc: ArcId(i),
                start: 0.0,
                forward: true,
            })
            .collect();
        let vorig = (0..source.num_vertices())
            .map(|i| PointRef::Vertex(VertexId(i)))
            .collect();
        let map = PointMap::new(source, source, origins, vorig);
        Self {
            net: source.clone(),
            map,
        }
    }

    pub fn to_source(&self, p: &PointRef) -> Result<PointRef> {
        self.map.to_source(&self.net, p)
    }

    pub fn from_source(&self, source: &MetricNetwork, p: &PointRef) -> Result<Option<PointRef>> {
        self.map.from_source(&self.net, source, p)
    }
}

/// Accumulates a derived network: source vertices keep their indices, new
/// leaves are appended.
struct DerivedBuilder<'a> {
    source: &'a MetricNetwork,
    names: Vec<String>,
    vertex_origin: Vec<PointRef>,
    /// index in the derived vertex list of each kept source vertex
    kept: Vec<Option<VertexId>>,
    arcs: Vec<Arc>,
    origins: Vec<ArcOrigin>,
}

impl<'a> DerivedBuilder<'a> {
    fn new(source: &'a MetricNetwork, keep: impl Fn(VertexId) -> bool) -> Self {
        let mut b = Self {
            source,
            names: Vec::new(),
            vertex_origin: Vec::new(),
            kept: vec![None; source.num_vertices()],
            arcs: Vec::new(),
            origins: Vec::new(),
        };
        for i in 0..source.num_vertices() {
            let v = VertexId(i);
            if keep(v) {
                b.kept[i] = Some(VertexId(b.names.len()));
                b.names.push(source.vertex_name(v).to_string());
                b.vertex_origin.push(PointRef::Vertex(v));
            }
        }
        b
    }

    fn leaf(&mut self, name: String, at: PointRef) -> VertexId {
        let v = VertexId(self.names.len());
        self.names.push(name);
        self.vertex_origin.push(at);
        v
    }

    fn arc(&mut self, name: String, u: VertexId, v: VertexId, len: f64, origin: ArcOrigin) {
        self.arcs.push(Arc { name, u, v, len });
        self.origins.push(origin);
    }

    /// Pendant piece of source arc `a` hanging off its `u` end (or `v` end
    /// when `from_u` is false) with length `len`.
    fn pendant(&mut self, a: ArcId, from_u: bool, len: f64, tag: &str) -> Result<()> {
        let arc = &self.source.arcs()[a.0];
        let (anchor, start, forward, side) = if from_u {
            (arc.u, 0.0, true, "u")
        } else {
            (arc.v, arc.len, false, "v")
        };
        let base = self.kept[anchor.0]
            .ok_or_else(|| Error::Domain(format!("pendant anchor {} missing", anchor.0)))?;
        let origin = ArcOrigin {
            arc: a,
            start,
            forward,
        };
        let tip = origin.to_source(len);
        let tip_point = self.source.point(a, tip)?;
        let leaf = self.leaf(format!("{}@{}{}", arc.name, side, tag), tip_point);
        self.arc(format!("{}.{}", arc.name, side), base, leaf, len, origin);
        Ok(())
    }

    fn whole(&mut self, a: ArcId) {
        let arc = &self.source.arcs()[a.0];
        let (u, v) = (self.kept[arc.u.0].unwrap(), self.kept[arc.v.0].unwrap());
        self.arc(
            arc.name.clone(),
            u,
            v,
            arc.len,
            ArcOrigin {
                arc: a,
                start: 0.0,
                forward: true,
            },
        );
    }

    fn reversed(&mut self, a: ArcId) {
        let arc = &self.source.arcs()[a.0];
        let (u, v) = (self.kept[arc.u.0].unwrap(), self.kept[arc.v.0].unwrap());
        self.arc(
            arc.name.clone(),
            v,
            u,
            arc.len,
            ArcOrigin {
                arc: a,
                start: arc.len,
                forward: false,
            },
        );
    }

    fn finish(self) -> Result<SubNetwork> {
        let root = self.kept[self.source.root().0].expect("root is always kept");
        let net = MetricNetwork::new(self.names, self.arcs, root)?;
        let map = PointMap::new(&net, self.source, self.origins, self.vertex_origin);
        Ok(SubNetwork { net, map })
    }
}

/// The closed ball `Q[r]` around the root. Frontier points become new
/// degree-one vertices.
pub fn ball(net: &MetricNetwork, r: f64) -> Result<SubNetwork> {
    if !(r > 0.0) {
        return domain(format!("ball radius must be positive, got {r}"));
    }
    if r >= net.r_max() - EPS {
        return Ok(SubNetwork::identity(net));
    }
    let mut b = DerivedBuilder::new(net, |v| net.vertex_distance(v) <= r + EPS);
    for (i, arc) in net.arcs().iter().enumerate() {
        let a = ArcId(i);
        if net.arc_max_distance(a) <= r + EPS {
            b.whole(a);
            continue;
        }
        let du = net.vertex_distance(arc.u);
        let dv = net.vertex_distance(arc.v);
        let x = net.watershed(a);
        if r - du > EPS && x > EPS {
            b.pendant(a, true, (r - du).min(x), "")?;
        }
        if r - dv > EPS && arc.len - x > EPS {
            b.pendant(a, false, (r - dv).min(arc.len - x), "")?;
        }
    }
    b.finish()
}

/// A rooted tree with arcs oriented away from the root.
#[derive(Clone, Debug)]
pub struct RootedTree {
    net: MetricNetwork,
    /// For each arc, whether its `u` endpoint is the parent side.
    parent_is_u: Vec<bool>,
    children: Vec<Vec<ArcId>>,
    parent_arc: Vec<Option<ArcId>>,
}

/// Position on a rooted tree: the root, or a point at `depth_offset` below
/// the parent end of an arc (the arc's child vertex when equal to its length).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TreeLoc {
    Root,
    On { arc: ArcId, below: f64 },
}

impl RootedTree {
    pub fn new(net: MetricNetwork) -> Result<Self> {
        let n = net.num_vertices();
        if net.num_arcs() + 1 != n {
            return Err(Error::NotTree(format!(
                "{} vertices but {} arcs",
                n,
                net.num_arcs()
            )));
        }
        if net.arcs().iter().any(Arc::is_loop) {
            return Err(Error::NotTree("self-loop".into()));
        }
        let mut inc: Vec<Vec<ArcId>> = vec![Vec::new(); n];
        for (i, a) in net.arcs().iter().enumerate() {
            inc[a.u.0].push(ArcId(i));
            inc[a.v.0].push(ArcId(i));
        }
        let mut parent_is_u = vec![true; net.num_arcs()];
        let mut children = vec![Vec::new(); n];
        let mut parent_arc = vec![None; n];
        let mut seen = vec![false; n];
        let root = net.root();
        seen[root.0] = true;
        let mut stack = vec![root];
        while let Some(w) = stack.pop() {
            for &a in &inc[w.0] {
                if Some(a) == parent_arc[w.0] {
                    continue;
                }
                let arc = &net.arcs()[a.0];
                let c = if arc.u == w { arc.v } else { arc.u };
                if seen[c.0] {
                    return Err(Error::NotTree("cycle detected".into()));
                }
                seen[c.0] = true;
                parent_is_u[a.0] = arc.u == w;
                parent_arc[c.0] = Some(a);
                children[w.0].push(a);
                stack.push(c);
            }
        }
        // children in input arc order
        for ch in &mut children {
            ch.sort();
        }
        Ok(Self {
            net,
            parent_is_u,
            children,
            parent_arc,
        })
    }

    pub fn net(&self) -> &MetricNetwork {
        &self.net
    }

    pub fn children(&self, v: VertexId) -> &[ArcId] {
        &self.children[v.0]
    }

    pub fn parent_arc(&self, v: VertexId) -> Option<ArcId> {
        self.parent_arc[v.0]
    }

    pub fn parent_of(&self, a: ArcId) -> VertexId {
        let arc = &self.net.arcs()[a.0];
        if self.parent_is_u[a.0] {
            arc.u
        } else {
            arc.v
        }
    }

    pub fn child_of(&self, a: ArcId) -> VertexId {
        let arc = &self.net.arcs()[a.0];
        if self.parent_is_u[a.0] {
            arc.v
        } else {
            arc.u
        }
    }

    pub fn depth(&self, v: VertexId) -> f64 {
        self.net.vertex_distance(v)
    }

    /// Converts a depth below an arc's parent end into the arc's own offset.
    pub fn arc_offset(&self, a: ArcId, below: f64) -> f64 {
        if self.parent_is_u[a.0] {
            below
        } else {
            self.net.arcs()[a.0].len - below
        }
    }

    pub fn loc(&self, p: &PointRef) -> Result<TreeLoc> {
        match *p {
            PointRef::Vertex(v) => {
                if v.0 >= self.net.num_vertices() {
                    return domain(format!("unknown vertex {}", v.0));
                }
                Ok(match self.parent_arc[v.0] {
                    None => TreeLoc::Root,
                    Some(a) => TreeLoc::On {
                        arc: a,
                        below: self.net.arcs()[a.0].len,
                    },
                })
            }
            PointRef::Interior { arc, offset } => {
                let len = self.net.arc(arc)?.len;
                let below = if self.parent_is_u[arc.0] {
                    offset
                } else {
                    len - offset
                };
                Ok(TreeLoc::On { arc, below })
            }
        }
    }

    /// Total measure of the subtree hanging below arc `a` (including `a`).
    pub fn subtree_measure(&self, a: ArcId) -> f64 {
        let mut total = 0.0;
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            total += self.net.arcs()[x.0].len;
            stack.extend_from_slice(&self.children[self.child_of(x).0]);
        }
        total
    }
}

/// Shortest-path tree of a network: every arc is either a tree arc or is cut
/// at its watershed into pendant pieces, so tree distances equal network
/// distances.
#[derive(Clone, Debug)]
pub struct ShortestPathTree {
    pub tree: RootedTree,
    pub map: PointMap,
}

impl ShortestPathTree {
    pub fn new(net: &MetricNetwork) -> Result<Self> {
        let mut b = DerivedBuilder::new(net, |_| true);
        for (i, arc) in net.arcs().iter().enumerate() {
            let a = ArcId(i);
            if arc.is_loop() {
                b.pendant(a, true, arc.len / 2.0, "")?;
                b.pendant(a, false, arc.len / 2.0, "")?;
            } else if net.pred_arc(arc.v) == Some(a)
                && net.vertex_distance(arc.u) < net.vertex_distance(arc.v)
            {
                b.whole(a);
            } else if net.pred_arc(arc.u) == Some(a)
                && net.vertex_distance(arc.v) < net.vertex_distance(arc.u)
            {
                b.reversed(a);
            } else {
                let x = net.watershed(a);
                if x > EPS {
                    b.pendant(a, true, x, "")?;
                }
                if arc.len - x > EPS {
                    b.pendant(a, false, arc.len - x, "")?;
                }
            }
        }
        let sub = b.finish()?;
        let tree = RootedTree::new(sub.net)?;
        Ok(Self { tree, map: sub.map })
    }

    pub fn net(&self) -> &MetricNetwork {
        self.tree.net()
    }

    /// Tree point for a point of the source network.
    pub fn map_point(&self, source: &MetricNetwork, p: &PointRef) -> Result<PointRef> {
        self.map
            .from_source(self.tree.net(), source, p)?
            .ok_or_else(|| Error::Domain("point not covered by the shortest-path tree".into()))
    }

    pub fn to_source(&self, p: &PointRef) -> Result<PointRef> {
        self.map.to_source(self.tree.net(), p)
    }
}
