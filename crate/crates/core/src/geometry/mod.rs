//! Rips and Čech filtrations of point clouds, Hausdorff and bottleneck distances.

mod bottleneck;
mod meb;

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use bottleneck::bottleneck;
pub use meb::{min_enclosing_ball, Ball, MEB_TOLERANCE};

use crate::complex::{Filtration, Simplex};
use crate::error::{Error, Result};

/// Points with coordinates, or only their pairwise distances.
#[derive(Clone, Debug)]
pub struct PointCloud {
    points: Option<Vec<Vec<f64>>>,
    dist: Vec<Vec<f64>>,
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

impl PointCloud {
    pub fn from_points(points: Vec<Vec<f64>>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyPointCloud)?;
        let dim = first.len();
        if let Some(bad) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch(dim, bad.len()));
        }
        let dist = points
            .iter()
            .map(|p| points.iter().map(|q| euclid(p, q)).collect())
            .collect();
        Ok(PointCloud {
            points: Some(points),
            dist,
        })
    }

    pub fn distance_matrix(rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::EmptyPointCloud);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidDistanceMatrix(format!(
                    "row {} has {} entries, expected {m}",
                    i + 1,
                    row.len()
                )));
            }
            if row[i] != 0.0 {
                return Err(Error::InvalidDistanceMatrix(format!("nonzero diagonal at {}", i + 1)));
            }
            for (j, &x) in row.iter().enumerate() {
                if x.is_nan() || x < 0.0 || x != rows[j][i] {
                    return Err(Error::InvalidDistanceMatrix(format!(
                        "entry ({}, {}) is negative or asymmetric",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(PointCloud {
            points: None,
            dist: rows,
        })
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn points(&self) -> Option<&[Vec<f64>]> {
        self.points.as_deref()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        self.dist.iter().flatten().copied().fold(0.0, f64::max)
    }
}

/// Reads comma-separated rows of reals; `#` starts a comment line.
pub fn parse_csv_rows(name: &str, text: &str) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let parse_err = |line: usize, message: String| Error::Parse {
            path: name.to_string(),
            line,
            message,
        };
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|e| parse_err(line, format!("bad number {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

// Enumerates vertex sets up to `max_dim` whose pairwise distances are all
// within `edge_limit`, each with its diameter.
fn cliques(cloud: &PointCloud, max_dim: usize, edge_limit: f64) -> Vec<(f64, Vec<u32>)> {
    let m = cloud.len();
    let mut out = Vec::new();
    let mut stack: Vec<(f64, Vec<usize>)> = (0..m).rev().map(|v| (0.0, vec![v])).collect();
    while let Some((value, simplex)) = stack.pop() {
        if simplex.len() <= max_dim {
            let last = *simplex.last().expect("nonempty");
            for v in (last + 1..m).rev() {
                let reach = simplex.iter().map(|&u| cloud.distance(u, v)).fold(0.0, f64::max);
                if reach <= edge_limit {
                    let mut next = simplex.clone();
                    next.push(v);
                    stack.push((value.max(reach), next));
                }
            }
        }
        out.push((value, simplex.into_iter().map(|v| v as u32).collect()));
    }
    out
}

fn check_threshold(threshold: f64) -> Result<()> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(Error::InvalidDistanceMatrix(format!("threshold {threshold} is negative")));
    }
    Ok(())
}

/// Vietoris-Rips filtration: every simplex up to `max_dim` of diameter at most
/// `threshold`, valued by its diameter.
pub fn rips_filtration(cloud: &PointCloud, max_dim: usize, threshold: f64) -> Result<Filtration> {
    if cloud.is_empty() {
        return Err(Error::EmptyPointCloud);
    }
    check_threshold(threshold)?;
    let entries = cliques(cloud, max_dim, threshold)
        .into_iter()
        .map(|(v, s)| Ok((v, Simplex::new(s)?)))
        .collect::<Result<Vec<_>>>()?;
    Filtration::refine(entries)
}

/// Čech filtration: simplices valued by the radius of the minimum enclosing
/// ball of their vertices, kept when that radius is at most `threshold`.
pub fn cech_filtration(cloud: &PointCloud, max_dim: usize, threshold: f64, seed: u64) -> Result<Filtration> {
    if cloud.is_empty() {
        return Err(Error::EmptyPointCloud);
    }
    check_threshold(threshold)?;
    let points = cloud.points().ok_or(Error::CoordinatesRequired)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates = cliques(cloud, max_dim, 2.0 * threshold * (1.0 + MEB_TOLERANCE));
    candidates.sort_by_key(|(_, s)| s.len());
    let mut value: HashMap<Vec<u32>, f64> = HashMap::new();
    let mut entries = Vec::new();
    for (_, s) in candidates {
        let refs: Vec<&[f64]> = s.iter().map(|&v| points[v as usize].as_slice()).collect();
        let mut r = min_enclosing_ball(&refs, &mut rng).radius;
        if r > threshold * (1.0 + MEB_TOLERANCE) {
            continue;
        }
        let mut complete = true;
        if s.len() > 1 {
            for drop in 0..s.len() {
                let mut face = s.clone();
                face.remove(drop);
                match value.get(&face) {
                    Some(&fv) => r = r.max(fv),
                    None => complete = false,
                }
            }
        }
        if complete {
            value.insert(s.clone(), r);
            entries.push((r, Simplex::new(s)?));
        }
    }
    Filtration::refine(entries)
}

/// Hausdorff distance between two clouds with coordinates in the same space.
pub fn hausdorff(x: &PointCloud, y: &PointCloud) -> Result<f64> {
    let (px, py) = (
        x.points().ok_or(Error::CoordinatesRequired)?,
        y.points().ok_or(Error::CoordinatesRequired)?,
    );
    if px[0].len() != py[0].len() {
        return Err(Error::DimensionMismatch(px[0].len(), py[0].len()));
    }
    let directed = |a: &[Vec<f64>], b: &[Vec<f64>]| {
        a.iter()
            .map(|p| b.iter().map(|q| euclid(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    Ok(directed(px, py).max(directed(py, px)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::persistent_cohomology;

    fn cloud(p: &[&[f64]]) -> PointCloud {
        PointCloud::from_points(p.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    #[test]
    fn rips_of_two_points() {
        let f = rips_filtration(&cloud(&[&[0.0], &[1.0]]), 2, 2.0).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.values(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn rips_triangle_value_is_its_diameter() {
        let h = 3f64.sqrt() / 2.0;
        let f = rips_filtration(&cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[0.5, h]]), 2, 2.0).unwrap();
        assert_eq!(f.len(), 7);
        assert!((f.value(7) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rips_threshold_and_dimension_cut() {
        let c = cloud(&[&[0.0], &[1.0], &[3.0]]);
        assert_eq!(rips_filtration(&c, 2, 1.5).unwrap().len(), 4);
        assert_eq!(rips_filtration(&c, 1, 5.0).unwrap().len(), 6);
        assert!(rips_filtration(&c, 1, -1.0).is_err());
    }

    #[test]
    fn hexagon_loop_lives_from_one_to_root_three() {
        let pts: Vec<Vec<f64>> = (0..6)
            .map(|i| {
                let t = std::f64::consts::PI * i as f64 / 3.0;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let f = rips_filtration(&PointCloud::from_points(pts).unwrap(), 2, 2.0).unwrap();
        let b = persistent_cohomology(&f);
        let long = b
            .in_degree(1)
            .map(|rb| crate::barcode::BarRecord::from_bar(&rb.bar, &f, None))
            .find(|r| r.death_value.is_some_and(|d| d - r.birth_value.unwrap() > 0.5))
            .expect("a long loop");
        assert!((long.birth_value.unwrap() - 1.0).abs() < 1e-9);
        assert!((long.death_value.unwrap() - 3f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn cech_values() {
        let f = cech_filtration(&cloud(&[&[0.0], &[1.0]]), 1, 1.0, 0).unwrap();
        assert!((f.value(3) - 0.5).abs() < 1e-12);
        let f = cech_filtration(&cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0]]), 2, 5.0, 0).unwrap();
        assert!((f.value(f.len()) - 1.0).abs() < 1e-12);
        let h = 3f64.sqrt() / 2.0;
        let f = cech_filtration(&cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[0.5, h]]), 2, 5.0, 0).unwrap();
        assert!((f.value(f.len()) - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cech_needs_coordinates() {
        let d = PointCloud::distance_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(cech_filtration(&d, 1, 1.0, 0), Err(Error::CoordinatesRequired)));
        assert!(matches!(PointCloud::from_points(vec![]), Err(Error::EmptyPointCloud)));
    }

    #[test]
    fn distance_matrix_validation() {
        assert!(PointCloud::distance_matrix(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(PointCloud::distance_matrix(vec![vec![1.0]]).is_err());
        assert!(PointCloud::distance_matrix(vec![vec![0.0, -1.0], vec![-1.0, 0.0]]).is_err());
    }

    #[test]
    fn hausdorff_cases() {
        let a = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff(&cloud(&[&[0.0]]), &cloud(&[&[1.0]])).unwrap(), 1.0);
        let b = cloud(&[&[0.25, 0.0], &[1.25, 0.0], &[0.25, 1.0], &[1.25, 1.0]]);
        assert!((hausdorff(&a, &b).unwrap() - 0.25).abs() < 1e-12);
        assert!(hausdorff(&a, &cloud(&[&[0.0]])).is_err());
    }

    #[test]
    fn csv_rows() {
        let rows = parse_csv_rows("p.csv", "# pts\n0, 1\n2,3\n").unwrap();
        assert_eq!(rows, vec![vec![0.0, 1.0], vec![2.0, 3.0]]);
        let err = parse_csv_rows("p.csv", "0,1\n2,x\n").unwrap_err();
        assert!(err.to_string().starts_with("p.csv:2:"), "{err}");
    }

    #[test]
    fn cech_rips_sandwich() {
        let pts: Vec<Vec<f64>> = (0..7)
            .map(|i| vec![(i as f64 * 1.3).sin() * 2.0, (i as f64 * 0.7).cos(), i as f64 * 0.1])
            .collect();
        let c = PointCloud::from_points(pts).unwrap();
        let cech = cech_filtration(&c, 3, 10.0, 1).unwrap();
        let rips = rips_filtration(&c, 3, 10.0).unwrap();
        assert_eq!(cech.len(), rips.len());
        for (v, s) in cech.values().iter().zip(cech.simplices()) {
            let d = rips.value(rips.index_of(s).unwrap());
            assert!(*v <= d + 1e-9 && d <= 2.0 * v + 1e-9);
            for face in s.facets() {
                assert!(cech.value(cech.index_of(&face).unwrap()) <= *v);
            }
        }
    }
}
