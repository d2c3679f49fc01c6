//! Bottleneck distance between persistence diagrams.

use petgraph::algo::maximum_matching;
use petgraph::graph::UnGraph;

use crate::barcode::Diagram;

fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    let d = |x: f64, y: f64| if x == y { 0.0 } else { (x - y).abs() };
    d(a.0, b.0).max(d(a.1, b.1))
}

fn half_persistence(p: (f64, f64)) -> f64 {
    (p.1 - p.0).max(0.0) / 2.0
}

// A perfect matching between `a` plus diagonal copies of `b` and `b` plus
// diagonal copies of `a`, using only edges of cost at most `r`.
fn feasible(a: &[(f64, f64)], b: &[(f64, f64)], r: f64) -> bool {
    let (na, nb) = (a.len(), b.len());
    let mut g = UnGraph::<(), ()>::with_capacity(2 * (na + nb), 0);
    let left: Vec<_> = (0..na + nb).map(|_| g.add_node(())).collect();
    let right: Vec<_> = (0..na + nb).map(|_| g.add_node(())).collect();
    for i in 0..na {
        for j in 0..nb {
            if linf(a[i], b[j]) <= r {
                g.add_edge(left[i], right[j], ());
            }
        }
        if half_persistence(a[i]) <= r {
            g.add_edge(left[i], right[nb + i], ());
        }
    }
    for j in 0..nb {
        if half_persistence(b[j]) <= r {
            g.add_edge(left[na + j], right[j], ());
        }
        for i in 0..na {
            g.add_edge(left[na + j], right[nb + i], ());
        }
    }
    maximum_matching(&g).is_perfect()
}

fn finite_distance(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut candidates = vec![0.0];
    candidates.extend(a.iter().chain(b).map(|&p| half_persistence(p)));
    for &p in a {
        candidates.extend(b.iter().map(|&q| linf(p, q)));
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(a, b, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

fn essential_distance(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let sorted = |v: &[(f64, f64)]| {
        let mut s: Vec<f64> = v.iter().map(|p| p.0).collect();
        s.sort_by(f64::total_cmp);
        s
    };
    sorted(a)
        .iter()
        .zip(sorted(b))
        .map(|(x, y)| if *x == y { 0.0 } else { (x - y).abs() })
        .fold(0.0, f64::max)
}

/// Bottleneck distance per degree, maximized over degrees. Bars with an
/// infinite death are matched only among themselves; unequal counts give `+inf`.
pub fn bottleneck(a: &Diagram, b: &Diagram) -> f64 {
    let empty = Vec::new();
    let degrees: std::collections::BTreeSet<usize> = a.keys().chain(b.keys()).copied().collect();
    let mut worst: f64 = 0.0;
    for d in degrees {
        let (pa, pb) = (a.get(&d).unwrap_or(&empty), b.get(&d).unwrap_or(&empty));
        let (fa, ia): (Vec<_>, Vec<_>) = pa.iter().partition(|p| p.1.is_finite());
        let (fb, ib): (Vec<_>, Vec<_>) = pb.iter().partition(|p| p.1.is_finite());
        worst = worst
            .max(essential_distance(&ia, &ib))
            .max(finite_distance(&fa, &fb));
    }
    worst
}
