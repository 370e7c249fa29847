mod common;

use common::{corpus, rng};
use netsearch::bounds::{
    concavity_certificate, degree_bound, hider_lower_bound, level_lower_bound,
    pathwise_uniform_lower_bound, sandwich, subset_stats, HiderDistribution, HiderKind, Region,
    SandwichConfig, SearchMode,
};
use netsearch::expanding::{det_ratio, random_schedule};
use netsearch::generate::{figure3, star, unit_star, y_network, Instance, NetworkFamily};
use netsearch::network::parse_network;
use netsearch::profile::RadiusProfile;
use netsearch::{ArcId, MetricNetwork};
use proptest::prelude::*;

#[test]
fn subset_stats_examples() {
    let s = unit_star(4).unwrap();
    for r0 in [0.2, 0.5, 1.0] {
        let st = subset_stats(&s, &Region::ball(&s, r0).unwrap()).unwrap();
        assert!((st.mean_distance - r0 / 2.0).abs() < 1e-12);
        assert!((st.measure - 4.0 * r0).abs() < 1e-12);
        assert_eq!(st.min_distance, 0.0);
    }

    let y = y_network(1.0, 1.0).unwrap();
    let v = y.vertex_by_name("v").unwrap();
    let pair = Region::branch(&y, v, &[1.0, 1.0]).unwrap();
    let st = subset_stats(&y, &pair).unwrap();
    assert!((st.min_distance - 1.0).abs() < 1e-12);
    assert!((st.measure - 2.0).abs() < 1e-12);
    assert!((st.mean_distance - 1.5).abs() < 1e-12);

    let ray = star(&[10.0]).unwrap();
    let seg = Region::new(&ray, vec![(ArcId(0), 2.0, 7.0)]).unwrap();
    let st = subset_stats(&ray, &seg).unwrap();
    assert!((st.mean_distance - 4.5).abs() < 1e-12);
}

#[test]
fn hider_bound_examples() {
    let y = y_network(1.0, 1.0).unwrap();
    let v = y.vertex_by_name("v").unwrap();
    let b = hider_lower_bound(&y, &Region::branch(&y, v, &[1.0, 1.0]).unwrap()).unwrap();
    assert!((b.value - 4.0 / 3.0).abs() < 1e-12);

    for m in [1usize, 2, 5] {
        let s = unit_star(m).unwrap();
        let b = hider_lower_bound(&s, &Region::ball(&s, 0.3).unwrap()).unwrap();
        assert!((b.value - m as f64).abs() < 1e-12);
    }
}

#[test]
fn degree_bound_examples() {
    let fam = Instance::Family(NetworkFamily::star(4).unwrap());
    assert_eq!(degree_bound(&fam).unwrap(), 4.0);
    let y = Instance::Net(y_network(1.0, 2.0).unwrap());
    assert_eq!(degree_bound(&y).unwrap(), 1.0);
    let three =
        parse_network("root O\narc a O x 1\narc b O y 1\narc c O z 1\narc d x y 1\narc e y z 1\n")
            .unwrap();
    assert_eq!(degree_bound(&Instance::Net(three)).unwrap(), 3.0);
}

#[test]
fn concavity_examples() {
    let c = concavity_certificate(&RadiusProfile::of(&unit_star(5).unwrap()));
    assert!(c.concave);
    assert_eq!(c.exact, Some(5.0));
    let c = concavity_certificate(&RadiusProfile::of(&y_network(1.0, 2.0).unwrap()));
    assert!(!c.concave);
    assert_eq!(c.exact, None);
    assert!((c.alpha - 1.5).abs() < 1e-12);
}

#[test]
fn sandwich_examples() {
    let cfg = SandwichConfig::default();
    let y = sandwich(
        &Instance::Net(y_network(1.0, 1.0).unwrap()),
        SearchMode::Expanding,
        &cfg,
    )
    .unwrap();
    assert!((y.rho_lo - 4.0 / 3.0).abs() < 1e-9);
    assert!((y.rho_hi - 1.5).abs() < 1e-12);

    let s = sandwich(
        &Instance::Family(NetworkFamily::star(3).unwrap()),
        SearchMode::Expanding,
        &cfg,
    )
    .unwrap();
    assert!((s.rho_lo - 3.0).abs() < 1e-12 && (s.rho_hi - 3.0).abs() < 1e-12);

    let f = sandwich(
        &Instance::Net(figure3(4).unwrap()),
        SearchMode::Expanding,
        &cfg,
    )
    .unwrap();
    assert!(f.rho_lo >= 2.0 - 1e-9);
    assert!(f.consistent);
}

#[test]
fn pathwise_uniform_examples() {
    for m in [2usize, 3, 4] {
        let fam = Instance::Family(NetworkFamily::star(m).unwrap());
        for r in [0.5, 1.0, 4.0] {
            let b = pathwise_uniform_lower_bound(&fam, r).unwrap();
            assert!((b - m as f64).abs() < 1e-12);
        }
    }
}

#[test]
fn lower_bounds_never_exceed_sigma() {
    let cfg = SandwichConfig::default();
    for (name, net) in corpus() {
        let inst = Instance::Net(net.clone());
        let sigma = det_ratio(&inst, 0).unwrap().sigma;
        let rep = sandwich(&inst, SearchMode::Expanding, &cfg).unwrap();
        for e in &rep.lower {
            assert!(
                e.value <= sigma + 1e-9,
                "{name}: {} = {} > {sigma}",
                e.name,
                e.value
            );
        }
        assert!(rep.rho_lo >= sigma / 2.0 - 1e-9, "{name}");
    }
}

#[test]
fn level_bound_below_hider_bound_on_same_ball() {
    for (name, net) in corpus() {
        let inst = Instance::Net(net.clone());
        for j in -3..=3 {
            let r = 2f64.powi(j);
            let level = level_lower_bound(&inst, j).unwrap();
            let hider = hider_lower_bound(&net, &Region::ball(&net, r).unwrap())
                .unwrap()
                .value;
            assert!(level <= hider + 1e-9, "{name} j={j}: {level} > {hider}");
        }
    }
}

/// The hider region behind a named lower bound, if it has one.
fn witness_region(net: &MetricNetwork, e: &netsearch::bounds::BoundEntry) -> Option<Region> {
    if let Some(r) = e.witness.get("radius").and_then(|v| v.as_f64()) {
        return Some(Region::ball(net, r).unwrap());
    }
    if let Some(j) = e.witness.get("j").and_then(|v| v.as_i64()) {
        return Some(Region::ball(net, 2f64.powi(j as i32)).unwrap());
    }
    if let Some(v) = e.witness.get("vertex").and_then(|v| v.as_str()) {
        let depths: Vec<f64> = e.witness["depths"]
            .as_array()
            .unwrap()
            .iter()
            .map(|d| d.as_f64().unwrap())
            .collect();
        let v = net.vertex_by_name(v).unwrap();
        return Some(Region::branch(net, v, &depths).unwrap());
    }
    None
}

#[test]
fn certified_bounds_hold_against_random_searchers() {
    let cfg = SandwichConfig::default();
    let mut r = rng(99);
    for (name, net) in corpus() {
        let rep = sandwich(&Instance::Net(net.clone()), SearchMode::Expanding, &cfg).unwrap();
        let schedules: Vec<_> = (0..30).map(|_| random_schedule(&net, &mut r)).collect();
        for e in &rep.lower {
            let Some(region) = witness_region(&net, e) else {
                continue;
            };
            let h = HiderDistribution::new(&net, region, HiderKind::DistanceWeighted).unwrap();
            for s in &schedules {
                let payoff = h.expected_normalized_time(&net, s).unwrap();
                assert!(
                    payoff >= e.value - 1e-9,
                    "{name} {}: {payoff} < {}",
                    e.name,
                    e.value
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn y_branch_bound_closed_form(l in 0.2f64..4.0, extra in 0.0f64..4.0, tx in 0.01f64..1.0, ty in 0.01f64..1.0) {
        let m = l + extra;
        let y = y_network(l, m).unwrap();
        let v = y.vertex_by_name("v").unwrap();
        let (x, yy) = (tx * l, ty * m);
        let b = hider_lower_bound(&y, &Region::branch(&y, v, &[x, yy]).unwrap()).unwrap();
        let want = 1.0 + 2.0 * x * yy / (x * (x + 2.0) + yy * (yy + 2.0));
        prop_assert!((b.value - want).abs() < 1e-12);
    }

    #[test]
    fn small_balls_reproduce_the_degree(seed in any::<u64>(), v in 2usize..8, extra in 0usize..3, t in 0.01f64..1.0) {
        let net = netsearch::generate::random_network(&mut rng(seed), v, extra);
        let shortest = (0..net.num_arcs())
            .map(ArcId)
            .filter(|&a| {
                let arc = net.arc(a).unwrap();
                (arc.u == net.root() || arc.v == net.root()) && !arc.is_loop()
            })
            .map(|a| net.arc(a).unwrap().len)
            .fold(f64::INFINITY, f64::min);
        let loops = (0..net.num_arcs()).any(|a| net.arcs()[a].is_loop() && net.arcs()[a].u == net.root());
        prop_assume!(shortest.is_finite() && !loops);
        // parallel root arcs meet at their watershed; stay within half of it
        let r0 = t * shortest / 2.0;
        let b = hider_lower_bound(&net, &Region::ball(&net, r0).unwrap()).unwrap();
        prop_assert!((b.value - net.root_degree() as f64).abs() < 1e-9);
    }
}
