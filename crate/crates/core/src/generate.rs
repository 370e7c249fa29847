//! Parametric networks, network families, and compact spec strings.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;

use crate::error::{domain, Error, Result};
use crate::network::{parse_network, MetricNetwork, NetworkBuilder};
use crate::profile::RadiusProfile;
use crate::subnet::ball;

/// Star with one arc per entry of `lengths`, rooted at the center.
pub fn star(lengths: &[f64]) -> Result<MetricNetwork> {
    if lengths.is_empty() {
        return domain("star needs at least one arm");
    }
    let mut b = NetworkBuilder::new();
    let o = b.vertex("O");
    b.root(o);
    for (i, &len) in lengths.iter().enumerate() {
        let leaf = b.vertex(&format!("x{i}"));
        b.arc(&format!("e{i}"), o, leaf, len)?;
    }
    b.build()
}

pub fn unit_star(m: usize) -> Result<MetricNetwork> {
    star(&vec![1.0; m])
}

/// Root arc of length 1 into a junction `v` with pendant arcs of lengths
/// `l` (left) and `m` (right), `m >= l`.
pub fn y_network(l: f64, m: f64) -> Result<MetricNetwork> {
    if !(l > 0.0 && m > 0.0) {
        return domain(format!(
            "y-network lengths must be positive, got L={l}, M={m}"
        ));
    }
    if m < l {
        return domain(format!("y-network requires M >= L, got L={l}, M={m}"));
    }
    let mut b = NetworkBuilder::new();
    let o = b.vertex("O");
    let v = b.vertex("v");
    let a = b.vertex("a");
    let c = b.vertex("b");
    b.root(o);
    b.arc("root", o, v, 1.0)?;
    b.arc("left", v, a, l)?;
    b.arc("right", v, c, m)?;
    b.build()
}

/// An arc of length `n` from the root, with `n²` unit arcs hanging from its
/// far end. Its water-filling ratio is exactly `n` while the randomized
/// ratio stays near `n/2`.
pub fn figure3(n: usize) -> Result<MetricNetwork> {
    if n == 0 {
        return domain("figure3 needs n >= 1");
    }
    let mut b = NetworkBuilder::new();
    let o = b.vertex("O");
    let w = b.vertex("w");
    b.root(o);
    b.arc("trunk", o, w, n as f64)?;
    for i in 0..n * n {
        let x = b.vertex(&format!("x{i}"));
        b.arc(&format!("p{i}"), w, x, 1.0)?;
    }
    b.build()
}

/// Random tree with `arcs` arcs and lengths uniform in `[0.2, 2)`; each new
/// vertex attaches to a uniformly chosen earlier vertex.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, arcs: usize) -> MetricNetwork {
    let mut b = NetworkBuilder::new();
    let o = b.vertex("v0");
    b.root(o);
    for i in 1..=arcs {
        let parent = rng.random_range(0..i);
        let len = rng.random_range(0.2..2.0);
        b.arc_between(
            &format!("e{i}"),
            &format!("v{parent}"),
            &format!("v{i}"),
            len,
        )
        .expect("valid arc");
    }
    b.build().expect("trees are connected")
}

/// Random connected network: a random tree plus `extra` arcs between
/// uniformly chosen vertex pairs (loops and parallel arcs allowed).
pub fn random_network<R: Rng + ?Sized>(
    rng: &mut R,
    vertices: usize,
    extra: usize,
) -> MetricNetwork {
    let vertices = vertices.max(2);
    let mut b = NetworkBuilder::new();
    let o = b.vertex("v0");
    b.root(o);
    for i in 1..vertices {
        let parent = rng.random_range(0..i);
        let len = rng.random_range(0.2..2.0);
        b.arc_between(
            &format!("t{i}"),
            &format!("v{parent}"),
            &format!("v{i}"),
            len,
        )
        .expect("valid arc");
    }
    for k in 0..extra {
        let u = rng.random_range(0..vertices);
        let v = rng.random_range(0..vertices);
        let len = rng.random_range(0.2..2.0);
        b.arc_between(&format!("c{k}"), &format!("v{u}"), &format!("v{v}"), len)
            .expect("valid arc");
    }
    b.build().expect("spanning tree keeps it connected")
}

type BallFn = dyn Fn(f64) -> Result<MetricNetwork> + Send + Sync;

/// A possibly unbounded network accessed only through its balls `Q[r]`.
#[derive(Clone)]
pub struct NetworkFamily {
    name: String,
    growth_bound: usize,
    generator: Arc<BallFn>,
}

impl fmt::Debug for NetworkFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NetworkFamily")
            .field("name", &self.name)
            .field("growth_bound", &self.growth_bound)
            .finish()
    }
}

impl NetworkFamily {
    pub fn new(
        name: impl Into<String>,
        growth_bound: usize,
        generator: impl Fn(f64) -> Result<MetricNetwork> + Send + Sync + 'static,
    ) -> Result<Self> {
        if growth_bound == 0 {
            return domain("growth bound must be positive");
        }
        Ok(Self {
            name: name.into(),
            growth_bound,
            generator: Arc::new(generator),
        })
    }

    /// `m` unbounded rays from the root.
    pub fn star(m: usize) -> Result<Self> {
        if m == 0 {
            return domain("star needs at least one ray");
        }
        Self::new(format!("star:{m}"), m, move |r| {
            if !(r > 0.0) {
                return domain(format!("ball radius must be positive, got {r}"));
            }
            star(&vec![r; m])
        })
    }

    /// A bounded network viewed through its balls.
    pub fn bounded(name: impl Into<String>, net: MetricNetwork) -> Result<Self> {
        let prof = RadiusProfile::of(&net);
        let m = prof
            .breakpoints()
            .iter()
            .map(|p| p.slope as usize)
            .max()
            .unwrap_or(1)
            .max(1);
        Self::new(name, m, move |r| Ok(ball(&net, r)?.net))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn growth_bound(&self) -> usize {
        self.growth_bound
    }

    pub fn ball(&self, r: f64) -> Result<MetricNetwork> {
        (self.generator)(r)
    }
}

/// A concrete network or an unbounded family.
#[derive(Clone, Debug)]
pub enum Instance {
    Net(MetricNetwork),
    Family(NetworkFamily),
}

impl Instance {
    /// A bounded network covering every point within `r` of the root.
    pub fn truncate(&self, r: f64) -> Result<MetricNetwork> {
        match self {
            Instance::Net(net) => Ok(net.clone()),
            Instance::Family(f) => f.ball(r),
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Instance::Net(_))
    }
}

/// Compact instance descriptions: `star:m`, `star:m,len`, `y:L,M`,
/// `figure3:n`, `file:PATH`.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    Star { m: usize },
    BoundedStar { m: usize, len: f64 },
    Y { l: f64, m: f64 },
    Figure3 { n: usize },
    File(PathBuf),
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::Parse { line: 0, msg };
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| bad(format!("malformed spec `{s}`")))?;
        let nums = || -> Result<Vec<f64>> {
            args.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| bad(format!("bad number in `{s}`")))
                })
                .collect()
        };
        let count = |x: f64| -> Result<usize> {
            if x >= 1.0 && x.fract() == 0.0 {
                Ok(x as usize)
            } else {
                Err(Error::Domain(format!(
                    "expected a positive integer in `{s}`"
                )))
            }
        };
        match kind {
            "star" => match nums()?.as_slice() {
                [m] => Ok(FamilySpec::Star { m: count(*m)? }),
                [m, len] => Ok(FamilySpec::BoundedStar {
                    m: count(*m)?,
                    len: *len,
                }),
                _ => Err(bad(format!("expected star:m or star:m,len in `{s}`"))),
            },
            "y" => match nums()?.as_slice() {
                [l, m] => Ok(FamilySpec::Y { l: *l, m: *m }),
                _ => Err(bad(format!("expected y:L,M in `{s}`"))),
            },
            "figure3" => match nums()?.as_slice() {
                [n] => Ok(FamilySpec::Figure3 { n: count(*n)? }),
                _ => Err(bad(format!("expected figure3:n in `{s}`"))),
            },
            "file" => Ok(FamilySpec::File(PathBuf::from(args))),
            other => Err(bad(format!("unknown family `{other}`"))),
        }
    }
}

impl FamilySpec {
    pub fn instantiate(&self) -> Result<Instance> {
        Ok(match self {
            FamilySpec::Star { m } => Instance::Family(NetworkFamily::star(*m)?),
            FamilySpec::BoundedStar { m, len } => Instance::Net(star(&vec![*len; *m])?),
            FamilySpec::Y { l, m } => Instance::Net(y_network(*l, *m)?),
            FamilySpec::Figure3 { n } => Instance::Net(figure3(*n)?),
            FamilySpec::File(path) => {
                Instance::Net(parse_network(&std::fs::read_to_string(path)?)?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn y_shape_and_validation() {
        let y = y_network(1.0, 2.0).unwrap();
        let lens: Vec<f64> = y.arcs().iter().map(|a| a.len).collect();
        assert_eq!(lens, vec![1.0, 1.0, 2.0]);
        assert!(matches!(y_network(2.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(y_network(0.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn figure3_measure() {
        let net = figure3(3).unwrap();
        assert_eq!(net.num_arcs(), 10);
        assert!((net.total_measure() - 12.0).abs() < 1e-12);
    }

    #[test]
    fn star_family_balls() {
        let f = NetworkFamily::star(4).unwrap();
        assert_eq!(f.growth_bound(), 4);
        assert!((f.ball(2.0).unwrap().total_measure() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn spec_strings() {
        assert_eq!(
            "star:4".parse::<FamilySpec>().unwrap(),
            FamilySpec::Star { m: 4 }
        );
        assert_eq!(
            "y:1,2".parse::<FamilySpec>().unwrap(),
            FamilySpec::Y { l: 1.0, m: 2.0 }
        );
        assert_eq!(
            "figure3:3".parse::<FamilySpec>().unwrap(),
            FamilySpec::Figure3 { n: 3 }
        );
        assert!("y:1".parse::<FamilySpec>().is_err());
        assert!("cube:3".parse::<FamilySpec>().is_err());
        assert!(matches!(
            "star:0".parse::<FamilySpec>(),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            "y:2,1".parse::<FamilySpec>().unwrap().instantiate(),
            Err(Error::Domain(_))
        ));
    }
}
