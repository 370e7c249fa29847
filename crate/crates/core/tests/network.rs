mod common;

use common::{brute_distance, corpus, floyd, rng, two_arc_cycle};
use netsearch::generate::{
    figure3, random_network, random_tree, unit_star, y_network, NetworkFamily,
};
use netsearch::network::{parse_network, NetworkBuilder};
use netsearch::profile::RadiusProfile;
use netsearch::subnet::{ball, ShortestPathTree};
use netsearch::{ArcId, Error, PointRef};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn distance_examples() {
    let s = unit_star(3).unwrap();
    let leaf = s.vertex_by_name("x1").unwrap();
    assert_eq!(s.distance(&PointRef::Vertex(leaf)).unwrap(), 1.0);

    let y = y_network(1.0, 2.0).unwrap();
    let p = y.point(ArcId(2), 0.5).unwrap();
    assert!((y.distance(&p).unwrap() - 1.5).abs() < 1e-12);

    let c = two_arc_cycle();
    let p = c.point(ArcId(0), 0.9).unwrap();
    assert!((c.distance(&p).unwrap() - 0.9).abs() < 1e-12);
}

#[test]
fn ball_examples() {
    let s = unit_star(3).unwrap();
    let b = ball(&s, 0.5).unwrap();
    assert_eq!(b.net.num_arcs(), 3);
    assert!((b.net.total_measure() - 1.5).abs() < 1e-12);

    let f = figure3(2).unwrap();
    assert!((ball(&f, 2.5).unwrap().net.total_measure() - 4.0).abs() < 1e-12);
    assert!((ball(&f, 10.0).unwrap().net.total_measure() - f.total_measure()).abs() < 1e-12);
    assert!(matches!(ball(&f, 0.0), Err(Error::Domain(_))));
}

#[test]
fn profile_examples() {
    let p = RadiusProfile::of(&unit_star(3).unwrap());
    for r in [0.1, 0.5, 1.0] {
        assert!((p.eval(r) - 3.0 * r).abs() < 1e-12);
    }
    for n in [2usize, 3, 5] {
        let p = RadiusProfile::of(&figure3(n).unwrap());
        let nf = n as f64;
        assert!((p.eval(nf / 2.0) - nf / 2.0).abs() < 1e-12);
        assert!((p.eval(nf + 0.5) - (nf + nf * nf * 0.5)).abs() < 1e-9);
    }
    let c = two_arc_cycle();
    let p = RadiusProfile::of(&c);
    assert!((p.r_max() - 1.0).abs() < 1e-12);
    assert!((p.eval(0.5) - 1.0).abs() < 1e-12);
}

#[test]
fn shortest_path_tree_examples() {
    let y = y_network(1.0, 1.0).unwrap();
    let t = ShortestPathTree::new(&y).unwrap();
    assert_eq!(t.net().num_arcs(), 3);

    // root–a, root–b, a–b: the far arc splits into two pendant halves
    let tri = common::cycle(&[1.0, 1.0, 1.0]);
    let t = ShortestPathTree::new(&tri).unwrap();
    assert_eq!(t.net().num_arcs(), 4);
    assert!((t.net().total_measure() - 3.0).abs() < 1e-12);
    assert!((t.net().r_max() - 1.5).abs() < 1e-12);

    let t = ShortestPathTree::new(&two_arc_cycle()).unwrap();
    assert!((t.net().total_measure() - 2.0).abs() < 1e-12);
}

#[test]
fn family_examples() {
    let f = NetworkFamily::star(4).unwrap();
    assert_eq!(f.growth_bound(), 4);
    assert!((f.ball(2.0).unwrap().total_measure() - 8.0).abs() < 1e-12);
    let y = y_network(1.0, 2.0).unwrap();
    assert_eq!(y.num_arcs(), 3);
    let f3 = figure3(3).unwrap();
    assert_eq!(f3.num_arcs(), 10);
    assert!((f3.total_measure() - 12.0).abs() < 1e-12);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let text = "root O\narc a O v 1\narc b v w -2\n";
    match parse_network(text) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("expected a parse error, got {other:?}"),
    }
    let disconnected = "root O\narc a O v 1\narc b x y 1\n";
    assert!(matches!(
        parse_network(disconnected),
        Err(Error::Disconnected(_))
    ));
}

#[test]
fn text_format_round_trips() {
    for (name, net) in corpus() {
        let back = parse_network(&net.to_text()).unwrap();
        assert_eq!(back.num_arcs(), net.num_arcs(), "{name}");
        assert!((back.total_measure() - net.total_measure()).abs() < 1e-12);
        assert_eq!(back.vertex_distances(), net.vertex_distances(), "{name}");
    }
}

#[test]
fn distances_match_floyd_warshall_on_corpus() {
    for (name, net) in corpus() {
        let d = floyd(&net);
        for a in net.arc_ids() {
            let len = net.arc(a).unwrap().len;
            for k in 0..=10 {
                let x = len * k as f64 / 10.0;
                let got = net.distance_on_arc(a, x).unwrap();
                let want = brute_distance(&net, &d, a, x);
                assert!((got - want).abs() < 1e-9, "{name} arc {a:?} x={x}");
            }
        }
    }
}

fn arb_network() -> impl Strategy<Value = netsearch::MetricNetwork> {
    (any::<u64>(), 1usize..9, 0usize..4).prop_map(|(seed, v, extra)| {
        let mut r = rng(seed);
        if extra == 0 {
            random_tree(&mut r, v)
        } else {
            random_network(&mut r, v + 1, extra)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ball_measure_matches_profile(net in arb_network(), t in 0.01f64..1.2) {
        let r = t * net.r_max();
        let p = RadiusProfile::of(&net);
        let b = ball(&net, r).unwrap();
        prop_assert!((b.net.total_measure() - p.eval(r)).abs() < 1e-9);
    }

    #[test]
    fn profile_is_monotone_and_continuous(net in arb_network()) {
        let p = RadiusProfile::of(&net);
        p.validate().unwrap();
        let n = 400;
        let mut prev = 0.0;
        for i in 1..=n {
            let r = p.r_max() * i as f64 / n as f64;
            let f = p.eval(r);
            prop_assert!(f >= prev - 1e-12);
            // slope is bounded by the arc count, so steps are small
            prop_assert!(f - prev <= net.num_arcs() as f64 * 2.0 * p.r_max() / n as f64 + 1e-9);
            prev = f;
        }
        prop_assert!((prev - net.total_measure()).abs() < 1e-9);
    }

    #[test]
    fn family_profiles_respect_growth_bound(m in 1usize..8, r in 0.1f64..20.0) {
        let f = NetworkFamily::star(m).unwrap();
        let p = RadiusProfile::of(&f.ball(r).unwrap());
        for i in 1..=20 {
            let s = r * i as f64 / 20.0;
            prop_assert!(p.eval(s) <= m as f64 * s + 1e-9);
        }
    }

    #[test]
    fn spt_preserves_measure_and_distances(net in arb_network(), seed in any::<u64>()) {
        let t = ShortestPathTree::new(&net).unwrap();
        prop_assert!((t.net().total_measure() - net.total_measure()).abs() < 1e-9);
        let mut r = rng(seed);
        for _ in 0..1000 {
            let a = ArcId(r.random_range(0..net.num_arcs()));
            let x = r.random_range(0.0..=net.arc(a).unwrap().len);
            let p = net.point(a, x).unwrap();
            let q = t.map_point(&net, &p).unwrap();
            let d0 = net.distance(&p).unwrap();
            let d1 = t.net().distance(&q).unwrap();
            prop_assert!((d0 - d1).abs() < 1e-9, "{d0} vs {d1}");
        }
    }

    #[test]
    fn builder_rejects_bad_lengths(len in prop_oneof![Just(0.0), Just(-1.0), Just(f64::NAN), Just(f64::INFINITY)]) {
        let mut b = NetworkBuilder::new();
        prop_assert!(b.arc_between("a", "O", "v", len).is_err());
    }
}
