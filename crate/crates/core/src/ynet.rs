//! The Y-network: a unit root arc into a junction with pendant arcs of
//! lengths `L <= M`. Its randomized value and an optimal four-strategy
//! mixture are known in closed form.

use rand::Rng;
use serde::Serialize;

use crate::bounds::{hider_lower_bound, Region};
use crate::error::{domain, Error, Result};
use crate::expanding::{ExpandingSchedule, Segment};
use crate::generate::y_network;
use crate::network::{ArcId, MetricNetwork, PointRef, Probe};
use crate::sim::{RandomizedStrategy, SimRng};

const ROOT: ArcId = ArcId(0);
const LEFT: ArcId = ArcId(1);
const RIGHT: ArcId = ArcId(2);

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct YParams {
    pub l: f64,
    pub m: f64,
    /// `min(M, √(L(L+2)))`: how far the right arm is searched before the
    /// left arm is guaranteed to be finished.
    pub m_eff: f64,
    pub v: f64,
}

impl YParams {
    pub fn new(l: f64, m: f64) -> Result<Self> {
        if !(l > 0.0 && m >= l && m.is_finite()) {
            return domain(format!("need 0 < L <= M, got L={l}, M={m}"));
        }
        let m_eff = m.min((l * (l + 2.0)).sqrt());
        let v = 1.0 + 2.0 * l * m_eff / (l * (l + 2.0) + m_eff * (m_eff + 2.0));
        Ok(Self { l, m, m_eff, v })
    }
}

pub fn y_value(l: f64, m: f64) -> Result<f64> {
    Ok(YParams::new(l, m)?.v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum YComponent {
    /// Root, left arm, right arm.
    A,
    /// Root, right arm up to `M'`, left arm, rest of the right arm.
    B,
    /// Root, then both arms simultaneously at speeds proportional to `L`
    /// and `M'` until the left arm is done, then the rest.
    C,
    /// Root, right arm up to a uniform time in `[0, M']`, left arm, rest.
    D,
}

pub const COMPONENTS: [YComponent; 4] =
    [YComponent::A, YComponent::B, YComponent::C, YComponent::D];

/// Which arm a point lies on, with its depth below the junction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Arm {
    Root(f64),
    Left(f64),
    Right(f64),
}

#[derive(Clone, Debug, Serialize)]
pub struct YMixture {
    pub params: YParams,
    /// Probabilities of A, B, C, D.
    pub probabilities: [f64; 4],
    #[serde(skip)]
    net: MetricNetwork,
}

pub fn y_mixture(l: f64, m: f64) -> Result<YMixture> {
    let params = YParams::new(l, m)?;
    let me = params.m_eff;
    let den = l * (l + 2.0) + me * (me + 2.0);
    let probabilities = [
        2.0 * me / den,
        (l * l + 2.0 * l - me * me).max(0.0) / den,
        2.0 * l * l / den,
        (2.0 * me * me - 2.0 * l * l).max(0.0) / den,
    ];
    Ok(YMixture {
        params,
        probabilities,
        net: y_network(l, m)?,
    })
}

impl YMixture {
    pub fn net(&self) -> &MetricNetwork {
        &self.net
    }

    pub fn arm(&self, p: &PointRef) -> Result<Arm> {
        let (a, x) = match self.net.locate(p)? {
            None => return Ok(Arm::Root(0.0)),
            Some(loc) => loc,
        };
        Ok(match a {
            ROOT => Arm::Root(x),
            LEFT => Arm::Left(x),
            _ => Arm::Right(x),
        })
    }

    /// Expected search time of one component, with D's switch time
    /// integrated out.
    pub fn component_time(&self, c: YComponent, arm: Arm) -> f64 {
        let YParams { l, m_eff: me, .. } = self.params;
        match arm {
            Arm::Root(x) => x,
            Arm::Left(a) => match c {
                YComponent::A => 1.0 + a,
                YComponent::B => 1.0 + me + a,
                YComponent::C => 1.0 + (a / l) * (l + me),
                YComponent::D => 1.0 + me / 2.0 + a,
            },
            Arm::Right(b) if b > me => 1.0 + l + b,
            Arm::Right(b) => match c {
                YComponent::A => 1.0 + l + b,
                YComponent::B => 1.0 + b,
                YComponent::C | YComponent::D => 1.0 + (b / me) * (l + me),
            },
        }
    }

    pub fn expected_time(&self, p: &PointRef) -> Result<f64> {
        let arm = self.arm(p)?;
        Ok(COMPONENTS
            .iter()
            .zip(self.probabilities)
            .map(|(&c, q)| q * self.component_time(c, arm))
            .sum())
    }

    /// The component as an expanding schedule; `tau` is D's switch time.
    pub fn schedule(&self, c: YComponent, tau: f64) -> ExpandingSchedule {
        let YParams {
            l, m, m_eff: me, ..
        } = self.params;
        let seg = |arc, from, to| Segment { arc, from, to };
        let mut s = ExpandingSchedule::new();
        s.push(seg(ROOT, 0.0, 1.0));
        match c {
            YComponent::A => {
                s.push(seg(LEFT, 0.0, l));
                s.push(seg(RIGHT, 0.0, m));
            }
            YComponent::B | YComponent::D => {
                let cut = if c == YComponent::B {
                    me
                } else {
                    tau.clamp(0.0, me)
                };
                s.push(seg(RIGHT, 0.0, cut));
                s.push(seg(LEFT, 0.0, l));
                s.push(seg(RIGHT, cut, m));
            }
            YComponent::C => {
                s.push_phase(vec![seg(LEFT, 0.0, l), seg(RIGHT, 0.0, me)]);
                s.push(seg(RIGHT, me, m));
            }
        }
        s
    }
}

impl RandomizedStrategy for YMixture {
    fn network(&self) -> &MetricNetwork {
        &self.net
    }

    fn probe(&self, p: &PointRef) -> Result<Probe> {
        Probe::of(&self.net, p)
    }

    fn sample_times(&self, rng: &mut SimRng, probes: &[Probe], out: &mut [f64]) {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut pick = YComponent::D;
        for (&c, q) in COMPONENTS.iter().zip(self.probabilities) {
            acc += q;
            if u < acc {
                pick = c;
                break;
            }
        }
        let tau = rng.random::<f64>() * self.params.m_eff;
        let sched = self.schedule(pick, tau);
        let idx = sched.index(self.net.num_arcs());
        for (o, p) in out.iter_mut().zip(probes) {
            *o = idx.time(p);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct YVerifyReport {
    pub params: YParams,
    pub probabilities: [f64; 4],
    pub probability_sum: f64,
    pub grid_n: usize,
    /// Largest `|E[T] − V(1+a)|` on the left arm.
    pub max_left_error: f64,
    /// Largest `|E[T] − V(1+b)|` on the right arm up to `M'`.
    pub max_right_error: f64,
    /// Smallest `V(1+b) − E[T]` beyond `M'` (absent if `M = M'`).
    pub min_right_slack: Option<f64>,
    /// Hider bound on the branches of depths `(L, M')` at the junction.
    pub certificate: f64,
}

pub const Y_TOL: f64 = 1e-9;

pub fn y_verify(l: f64, m: f64, grid_n: usize) -> Result<YVerifyReport> {
    if grid_n < 2 {
        return domain("grid needs at least two points");
    }
    let mix = y_mixture(l, m)?;
    let YParams { v, m_eff: me, .. } = mix.params;
    let fail = |msg: String| Err(Error::Verification(msg));
    let sum: f64 = mix.probabilities.iter().sum();
    if (sum - 1.0).abs() > 1e-12 || mix.probabilities.iter().any(|&q| q < 0.0) {
        return fail(format!(
            "probabilities {:?} do not form a distribution",
            mix.probabilities
        ));
    }
    let mut max_left_error: f64 = 0.0;
    // depth 0 is the junction itself, found at time 1
    for i in 1..=grid_n {
        let a = l * i as f64 / grid_n as f64;
        let e = mix.expected_time(&mix.net.point(LEFT, a)?)?;
        let err = (e - v * (1.0 + a)).abs();
        if err > Y_TOL {
            return fail(format!(
                "left arm depth {a}: E[T] = {e}, expected {}",
                v * (1.0 + a)
            ));
        }
        max_left_error = max_left_error.max(err);
    }
    let mut max_right_error: f64 = 0.0;
    let mut min_right_slack: Option<f64> = None;
    for i in 1..=grid_n {
        let b = m * i as f64 / grid_n as f64;
        let e = mix.expected_time(&mix.net.point(RIGHT, b)?)?;
        let target = v * (1.0 + b);
        if b <= me {
            let err = (e - target).abs();
            if err > Y_TOL {
                return fail(format!(
                    "right arm depth {b}: E[T] = {e}, expected {target}"
                ));
            }
            max_right_error = max_right_error.max(err);
        } else {
            if (e - (1.0 + l + b)).abs() > Y_TOL || e >= target {
                return fail(format!(
                    "right arm depth {b} beyond M': E[T] = {e}, bound {target}"
                ));
            }
            let slack = target - e;
            min_right_slack = Some(min_right_slack.map_or(slack, |s: f64| s.min(slack)));
        }
    }
    let junction = mix.net.vertex_by_name("v").expect("y-network junction");
    let region = Region::branch(&mix.net, junction, &[l, me])?;
    let certificate = hider_lower_bound(&mix.net, &region)?.value;
    if (certificate - v).abs() > 1e-12 {
        return fail(format!(
            "hider certificate {certificate} differs from V = {v}"
        ));
    }
    Ok(YVerifyReport {
        params: mix.params,
        probabilities: mix.probabilities,
        probability_sum: sum,
        grid_n,
        max_left_error,
        max_right_error,
        min_right_slack,
        certificate,
    })
}

/// The table read literally: `max` in place of `min` for `M'`, and `M`
/// rather than `M'` in the numerators.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiteralReading {
    pub m_prime: f64,
    pub probabilities: [f64; 4],
    pub sum: f64,
    pub sums_to_one: bool,
    pub nonnegative: bool,
}

pub fn literal_reading(l: f64, m: f64) -> Result<LiteralReading> {
    YParams::new(l, m)?;
    let mp = m.max((l * (l + 2.0)).sqrt());
    let den = l * (l + 2.0) + mp * (mp + 2.0);
    let probabilities = [
        2.0 * m / den,
        (l * l + 2.0 * l - m * m) / den,
        2.0 * l * l / den,
        (2.0 * m * m - 2.0 * l * l) / den,
    ];
    let sum = probabilities.iter().sum::<f64>();
    Ok(LiteralReading {
        m_prime: mp,
        probabilities,
        sum,
        sums_to_one: (sum - 1.0).abs() <= 1e-12,
        nonnegative: probabilities.iter().all(|&q| q >= 0.0),
    })
}
