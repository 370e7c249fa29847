//! Independent oracles and the shared test corpus.
#![allow(dead_code)]

use netsearch::generate::{figure3, random_network, random_tree, star, unit_star, y_network};
use netsearch::network::{NetworkBuilder, VertexId};
use netsearch::{ArcId, MetricNetwork};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All-pairs vertex distances by Floyd-Warshall.
pub fn floyd(net: &MetricNetwork) -> Vec<Vec<f64>> {
    let n = net.num_vertices();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for a in net.arcs() {
        let (u, v) = (a.u.0, a.v.0);
        if a.len < d[u][v] {
            d[u][v] = a.len;
            d[v][u] = a.len;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Root distance of `(arc, x)` from the two endpoints.
pub fn brute_distance(net: &MetricNetwork, d: &[Vec<f64>], a: ArcId, x: f64) -> f64 {
    let arc = &net.arcs()[a.0];
    let o = net.root().0;
    (d[o][arc.u.0] + x).min(d[o][arc.v.0] + arc.len - x)
}

/// Minimum perfect matching of `odd` under `d` by exhaustive pairing.
pub fn brute_matching(odd: &[usize], d: &[Vec<f64>]) -> f64 {
    fn go(rest: &[usize], d: &[Vec<f64>]) -> f64 {
        if rest.is_empty() {
            return 0.0;
        }
        let first = rest[0];
        let mut best = f64::INFINITY;
        for k in 1..rest.len() {
            let mut others: Vec<usize> = rest[1..].to_vec();
            let partner = others.remove(k - 1);
            best = best.min(d[first][partner] + go(&others, d));
        }
        best
    }
    go(odd, d)
}

pub fn odd_vertices(net: &MetricNetwork) -> Vec<usize> {
    (0..net.num_vertices())
        .filter(|&v| net.degree(VertexId(v)) % 2 == 1)
        .collect()
}

pub fn cycle(lengths: &[f64]) -> MetricNetwork {
    let mut b = NetworkBuilder::new();
    let n = lengths.len();
    for (i, &len) in lengths.iter().enumerate() {
        b.arc_between(
            &format!("c{i}"),
            &format!("u{i}"),
            &format!("u{}", (i + 1) % n),
            len,
        )
        .unwrap();
    }
    let o = b.vertex("u0");
    b.root(o);
    b.build().unwrap()
}

/// Two arcs of length 1 between the root and one other vertex.
pub fn two_arc_cycle() -> MetricNetwork {
    let mut b = NetworkBuilder::new();
    b.arc_between("a", "O", "v", 1.0).unwrap();
    b.arc_between("b", "O", "v", 1.0).unwrap();
    let o = b.vertex("O");
    b.root(o);
    b.build().unwrap()
}

pub fn lollipop() -> MetricNetwork {
    let mut b = NetworkBuilder::new();
    b.arc_between("s", "O", "a", 1.0).unwrap();
    b.arc_between("p", "a", "b", 1.0).unwrap();
    b.arc_between("q", "b", "c", 1.5).unwrap();
    b.arc_between("r", "c", "a", 0.5).unwrap();
    b.arc_between("t", "O", "d", 2.0).unwrap();
    let o = b.vertex("O");
    b.root(o);
    b.build().unwrap()
}

/// The 25-network corpus: random trees, cyclic networks, Y's, the figure3
/// family and stars.
pub fn corpus() -> Vec<(String, MetricNetwork)> {
    let mut out = Vec::new();
    let mut r = rng(2024);
    for k in 0..7 {
        let arcs = 3 + k;
        out.push((format!("tree{k}"), random_tree(&mut r, arcs)));
    }
    out.push(("two-arc-cycle".into(), two_arc_cycle()));
    out.push(("triangle".into(), cycle(&[1.0, 1.0, 1.0])));
    out.push(("lollipop".into(), lollipop()));
    for k in 0..4 {
        out.push((format!("cyclic{k}"), random_network(&mut r, 4 + k, 2)));
    }
    for (l, m) in [(1.0, 1.0), (1.0, 2.0), (2.0, 2.0), (1.0, 5.0), (3.0, 4.0)] {
        out.push((format!("y({l},{m})"), y_network(l, m).unwrap()));
    }
    for n in [2, 3, 4, 5] {
        out.push((format!("figure3({n})"), figure3(n).unwrap()));
    }
    out.push(("star3".into(), unit_star(3).unwrap()));
    out.push(("star(1,2,3)".into(), star(&[1.0, 2.0, 3.0]).unwrap()));
    assert_eq!(out.len(), 25);
    out
}

/// Simpson's rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// λ(Q_j) and its mean distance from ball measures alone.
pub fn shell_stats(net: &MetricNetwork, j: i32) -> (f64, f64) {
    let f = |r: f64| {
        if r <= 0.0 {
            0.0
        } else {
            netsearch::subnet::ball(net, r).unwrap().net.total_measure()
        }
    };
    let (lo, hi) = (2f64.powi(j - 1), 2f64.powi(j));
    let lam = f(hi) - f(lo);
    // ∫ r df = [r f] − ∫ f dr
    let moment = hi * f(hi) - lo * f(lo) - simpson(f, lo, hi, 2000);
    (lam, moment / lam)
}
