//! Small triangulations with known cohomology rings, geometric samples, and
//! seeded random filtrations.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{dimension_filtration, Filtration, Simplex};
use crate::error::{Error, Result};
use crate::geometry::PointCloud;

/// Names accepted by [`generate_example`].
pub const EXAMPLE_NAMES: [&str; 8] = [
    "torus7",
    "rp2_6",
    "rp3_11",
    "klein9",
    "wedge_s1_s2",
    "hexagon_points",
    "torus_minus_disk",
    "torus_plus_disk",
];

const RP3_11: [[u32; 4]; 40] = [
    [0, 1, 2, 4], [0, 1, 2, 7], [0, 1, 3, 4], [0, 1, 3, 7], [0, 2, 4, 8],
    [0, 2, 7, 8], [0, 3, 4, 8], [0, 3, 7, 8], [1, 2, 4, 6], [1, 2, 6, 10],
    [1, 2, 7, 10], [1, 3, 4, 5], [1, 3, 5, 9], [1, 3, 7, 9], [1, 4, 5, 6],
    [1, 5, 6, 8], [1, 5, 8, 9], [1, 6, 8, 10], [1, 7, 9, 10], [1, 8, 9, 10],
    [2, 3, 5, 9], [2, 3, 5, 10], [2, 3, 6, 9], [2, 3, 6, 10], [2, 4, 6, 9],
    [2, 4, 8, 9], [2, 5, 7, 8], [2, 5, 7, 10], [2, 5, 8, 9], [3, 4, 5, 10],
    [3, 4, 8, 10], [3, 6, 7, 8], [3, 6, 7, 9], [3, 6, 8, 10], [4, 5, 6, 7],
    [4, 5, 7, 10], [4, 6, 7, 9], [4, 7, 9, 10], [4, 8, 9, 10], [5, 6, 7, 8],
];

const RP2_6: [[u32; 3]; 10] = [
    [0, 1, 3], [0, 1, 5], [0, 2, 4], [0, 2, 5], [0, 3, 4],
    [1, 2, 3], [1, 2, 4], [1, 4, 5], [2, 3, 5], [3, 4, 5],
];

/// Facets of the 7-vertex torus.
pub fn torus7_facets() -> Vec<Vec<u32>> {
    (0..7u32)
        .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
        .collect()
}

pub fn rp2_6_facets() -> Vec<Vec<u32>> {
    RP2_6.iter().map(|f| f.to_vec()).collect()
}

/// Facets of an 11-vertex triangulation of real projective 3-space.
pub fn rp3_11_facets() -> Vec<Vec<u32>> {
    RP3_11.iter().map(|f| f.to_vec()).collect()
}

// Triangulated m x m square with opposite sides glued; `twist` reverses
// one gluing, giving a Klein bottle instead of a torus.
fn square_grid_facets(m: u32, twist: bool) -> Vec<Vec<u32>> {
    let vid = |x: u32, y: u32| {
        let (mut x, mut y) = (x, y % m);
        if x == m {
            x = 0;
            if twist {
                y = (m - y) % m;
            }
        }
        x * m + y
    };
    let mut out = Vec::new();
    for x in 0..m {
        for y in 0..m {
            out.push(vec![vid(x, y), vid(x + 1, y), vid(x + 1, y + 1)]);
            out.push(vec![vid(x, y), vid(x, y + 1), vid(x + 1, y + 1)]);
        }
    }
    out
}

pub fn klein9_facets() -> Vec<Vec<u32>> {
    square_grid_facets(3, true)
}

pub fn torus7() -> Filtration {
    dimension_filtration(&torus7_facets()).expect("valid triangulation")
}

pub fn rp2_6() -> Filtration {
    dimension_filtration(&rp2_6_facets()).expect("valid triangulation")
}

pub fn rp3_11() -> Filtration {
    dimension_filtration(&rp3_11_facets()).expect("valid triangulation")
}

pub fn klein9() -> Filtration {
    dimension_filtration(&klein9_facets()).expect("valid triangulation")
}

/// A circle and a hollow tetrahedron sharing vertex 0.
pub fn wedge_s1_s2() -> Filtration {
    let facets = vec![
        vec![0, 1],
        vec![1, 2],
        vec![0, 2],
        vec![0, 3, 4],
        vec![0, 3, 5],
        vec![0, 4, 5],
        vec![3, 4, 5],
    ];
    dimension_filtration(&facets).expect("valid complex")
}

fn closure(facets: &[Vec<u32>]) -> BTreeSet<Simplex> {
    let mut all = BTreeSet::new();
    for f in facets {
        for mask in 1u32..(1 << f.len()) {
            let sub = (0..f.len()).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
            all.insert(Simplex::new(sub).expect("distinct vertices"));
        }
    }
    all
}

/// The 7-vertex torus without the triangle `{0, 1, 3}`. The boundary of the
/// removed triangle enters first (indices 1..=6), so `K_6` is a circle.
pub fn torus_minus_disk() -> Filtration {
    let removed = Simplex::new(vec![0, 1, 3]).expect("triangle");
    let boundary = closure(&[vec![0, 1], vec![1, 3], vec![0, 3]]);
    let entries = closure(&torus7_facets())
        .into_iter()
        .filter(|s| *s != removed)
        .map(|s| (if boundary.contains(&s) { 0.0 } else { 1.0 }, s))
        .collect();
    Filtration::refine(entries).expect("valid complex")
}

/// Index of the boundary stage in [`torus_minus_disk`].
pub const TORUS_MINUS_DISK_STAGE: usize = 6;

/// The 7-vertex torus, complete at value 0, with a disk coned off the loop
/// `0-1-2-3-4-5-6` at value 1.
pub fn torus_plus_disk() -> Filtration {
    let apex = 7;
    let mut entries: Vec<(f64, Simplex)> =
        closure(&torus7_facets()).into_iter().map(|s| (0.0, s)).collect();
    let cone: Vec<Vec<u32>> = (0..7u32).map(|i| vec![i, (i + 1) % 7, apex]).collect();
    for s in closure(&cone) {
        if s.vertices().contains(&apex) {
            entries.push((1.0, s));
        }
    }
    Filtration::refine(entries).expect("valid complex")
}

/// Six points on the unit circle at the vertices of a regular hexagon.
pub fn hexagon_points() -> PointCloud {
    let pts = (0..6)
        .map(|i| {
            let t = std::f64::consts::PI * i as f64 / 3.0;
            vec![t.cos(), t.sin()]
        })
        .collect();
    PointCloud::from_points(pts).expect("nonempty")
}

/// `m x m` triangulated torus (`6 m^2` simplices) with a seeded random
/// lower-star filtration.
pub fn torus_grid(m: u32, seed: u64) -> Filtration {
    assert!(m >= 3, "grid must be at least 3 x 3");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let heights: Vec<f64> = (0..m * m).map(|_| rng.gen()).collect();
    let entries = closure(&square_grid_facets(m, false))
        .into_iter()
        .map(|s| {
            let h = s.vertices().iter().map(|&v| heights[v as usize]).fold(0.0, f64::max);
            (h, s)
        })
        .collect();
    Filtration::refine(entries).expect("valid complex")
}

/// A uniformly random face-respecting order of a simplicial complex,
/// truncated to its first `max_n` simplices. Values are the indices.
pub fn random_order(simplices: &BTreeSet<Simplex>, max_n: usize, rng: &mut impl Rng) -> Filtration {
    let mut placed: BTreeSet<&Simplex> = BTreeSet::new();
    let mut order = Vec::new();
    let mut pending: Vec<&Simplex> = simplices.iter().collect();
    while order.len() < max_n && !pending.is_empty() {
        let ready: Vec<usize> = (0..pending.len())
            .filter(|&k| pending[k].facets().all(|f| placed.contains(&f)))
            .collect();
        let pick = *ready.choose(rng).expect("a face-closed set always has a ready simplex");
        let s = pending.swap_remove(pick);
        placed.insert(s);
        order.push(((order.len() + 1) as f64, s.clone()));
    }
    Filtration::new(order).expect("face-respecting order")
}

fn random_clique_complex(rng: &mut impl Rng) -> BTreeSet<Simplex> {
    let v = rng.gen_range(4..=8u32);
    let p = rng.gen_range(0.4..0.9);
    let mut edges = BTreeSet::new();
    for a in 0..v {
        for b in a + 1..v {
            if rng.gen_bool(p) {
                edges.insert((a, b));
            }
        }
    }
    let adjacent = |s: &[u32], w: u32| s.iter().all(|&u| edges.contains(&(u.min(w), u.max(w))));
    let mut all = BTreeSet::new();
    let mut frontier: Vec<Vec<u32>> = (0..v).map(|i| vec![i]).collect();
    while let Some(s) = frontier.pop() {
        if s.len() < 4 {
            for w in s[s.len() - 1] + 1..v {
                if adjacent(&s, w) {
                    let mut t = s.clone();
                    t.push(w);
                    frontier.push(t);
                }
            }
        }
        all.insert(Simplex::new(s).expect("increasing"));
    }
    all
}

/// A seeded random simplex-wise filtration with at most `max_n` simplices and
/// dimension at most 3: a random clique complex, or a random order (possibly
/// truncated) of one of the curated triangulations.
pub fn random_filtration(seed: u64, max_n: usize) -> Filtration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let complex = match rng.gen_range(0..5) {
        0 => random_clique_complex(&mut rng),
        1 => closure(&rp2_6_facets()),
        2 => closure(&torus7_facets()),
        3 => closure(&klein9_facets()),
        _ => closure(&rp3_11_facets()),
    };
    let n = rng.gen_range(1..=max_n.min(complex.len()).max(1));
    random_order(&complex, n, &mut rng)
}

/// Curated closed manifolds used throughout the tests.
pub fn curated_corpus() -> Vec<(&'static str, Filtration)> {
    vec![
        ("torus7", torus7()),
        ("rp2_6", rp2_6()),
        ("klein9", klein9()),
        ("rp3_11", rp3_11()),
    ]
}

/// A generated example: a filtration or a point cloud, with a description.
pub enum Example {
    Filtration(Filtration, &'static str),
    Points(PointCloud, &'static str),
}

impl Example {
    /// File contents in the filtration text format or as point CSV.
    pub fn to_text(&self) -> String {
        match self {
            Example::Filtration(f, about) => f.to_text(about),
            Example::Points(p, about) => {
                let mut s = format!("# {about}\n");
                for row in p.points().expect("generated clouds have coordinates") {
                    let cells: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
        }
    }
}

pub fn generate_example(name: &str) -> Result<Example> {
    use Example::{Filtration as F, Points as P};
    Ok(match name {
        "torus7" => F(torus7(), "7-vertex torus (Moebius-Kantor), value = dimension"),
        "rp2_6" => F(rp2_6(), "6-vertex real projective plane, value = dimension"),
        "rp3_11" => F(rp3_11(), "11-vertex real projective 3-space, value = dimension"),
        "klein9" => F(klein9(), "9-vertex Klein bottle (3x3 grid, one twisted gluing), value = dimension"),
        "wedge_s1_s2" => F(wedge_s1_s2(), "circle and hollow tetrahedron sharing vertex 0"),
        "torus_minus_disk" => F(
            torus_minus_disk(),
            "7-vertex torus minus triangle {0,1,3}; its boundary circle is indices 1..6",
        ),
        "torus_plus_disk" => F(
            torus_plus_disk(),
            "7-vertex torus at value 0, disk coned off the loop 0-1-...-6 at value 1",
        ),
        "hexagon_points" => P(hexagon_points(), "regular hexagon of circumradius 1"),
        other => return Err(Error::UnknownExample(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f_vector(f: &Filtration) -> Vec<usize> {
        (0..=f.dim()).map(|d| f.indices_of_dim(d).len()).collect()
    }

    fn is_closed_pseudomanifold(f: &Filtration) -> bool {
        let top = f.dim();
        f.indices_of_dim(top - 1)
            .iter()
            .all(|&i| f.coface_indices(i).unwrap().len() == 2)
    }

    #[test]
    fn face_counts() {
        assert_eq!(f_vector(&torus7()), vec![7, 21, 14]);
        assert_eq!(torus7().len(), 42);
        assert_eq!(f_vector(&rp2_6()), vec![6, 15, 10]);
        assert_eq!(rp2_6().len(), 31);
        assert_eq!(f_vector(&klein9()), vec![9, 27, 18]);
        assert_eq!(f_vector(&rp3_11()), vec![11, 51, 80, 40]);
        assert_eq!(f_vector(&wedge_s1_s2()), vec![6, 9, 4]);
    }

    #[test]
    fn manifolds_are_closed() {
        for (name, f) in curated_corpus() {
            assert!(is_closed_pseudomanifold(&f), "{name}");
        }
    }

    #[test]
    fn torus_edges_have_two_cofaces() {
        let f = torus7();
        for &e in f.indices_of_dim(1) {
            assert_eq!(f.coface_indices(e).unwrap().len(), 2);
        }
        let m = f.coboundary_matrix();
        for &e in f.indices_of_dim(1) {
            assert_eq!(m.column_by_key(e as u64).unwrap().vector().count_ones(), 2);
        }
    }

    #[test]
    fn disk_stage_is_a_circle() {
        let f = torus_minus_disk();
        assert_eq!(f.len(), 41);
        assert_eq!(f_vector(&f), vec![7, 21, 13]);
        let stage: Vec<usize> = (1..=TORUS_MINUS_DISK_STAGE).map(|i| f.dim_of(i)).collect();
        assert_eq!(stage, vec![0, 0, 0, 1, 1, 1]);
        let g = torus_plus_disk();
        assert_eq!(g.len(), 42 + 1 + 7 + 7);
        assert_eq!(g.value(42), 0.0);
        assert_eq!(g.value(43), 1.0);
    }

    #[test]
    fn torus_grid_size() {
        let f = torus_grid(4, 3);
        assert_eq!(f.len(), 6 * 16);
        assert!(is_closed_pseudomanifold(&f));
    }

    #[test]
    fn random_filtrations_are_bounded_and_reproducible() {
        for seed in 0..30 {
            let f = random_filtration(seed, 35);
            assert!(f.len() <= 35 && f.dim() <= 3);
            assert_eq!(f.simplices(), random_filtration(seed, 35).simplices());
        }
    }

    #[test]
    fn unknown_example() {
        assert!(matches!(generate_example("sphere"), Err(Error::UnknownExample(_))));
        for name in EXAMPLE_NAMES {
            assert!(!generate_example(name).unwrap().to_text().is_empty());
        }
    }
}
