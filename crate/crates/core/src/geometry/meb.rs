//! Minimum enclosing balls by Welzl's move-to-front recursion.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;

/// Relative tolerance for ball membership.
pub const MEB_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, p: &[f64]) -> bool {
        let d = dist(&self.center, p);
        d <= self.radius * (1.0 + MEB_TOLERANCE) + MEB_TOLERANCE * 1e-3
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Smallest ball with every support point on its boundary, found in the
/// affine hull of the support.
fn circumball(points: &[&[f64]], support: &[usize]) -> Ball {
    let Some((&first, rest)) = support.split_first() else {
        return Ball {
            center: Vec::new(),
            radius: -1.0,
        };
    };
    let p0 = points[first];
    if rest.is_empty() {
        return Ball {
            center: p0.to_vec(),
            radius: 0.0,
        };
    }
    let dim = p0.len();
    let a = DMatrix::from_fn(rest.len(), dim, |i, j| points[rest[i]][j] - p0[j]);
    let gram = &a * a.transpose();
    let rhs = DVector::from_fn(rest.len(), |i, _| 0.5 * gram[(i, i)]);
    let lambda = gram
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .expect("SVD with both factors");
    let offset = a.transpose() * lambda;
    let center: Vec<f64> = p0.iter().zip(offset.iter()).map(|(x, o)| x + o).collect();
    let radius = support
        .iter()
        .map(|&s| dist(&center, points[s]))
        .fold(0.0, f64::max);
    Ball { center, radius }
}

fn move_to_front(points: &[&[f64]], order: &mut [usize], end: usize, support: &mut Vec<usize>) -> Ball {
    let dim = points[0].len();
    let mut ball = circumball(points, support);
    if support.len() == dim + 1 {
        return ball;
    }
    for i in 0..end {
        let p = order[i];
        if ball.radius < 0.0 || !ball.contains(points[p]) {
            support.push(p);
            ball = move_to_front(points, order, i, support);
            support.pop();
            order[..=i].rotate_right(1);
        }
    }
    ball
}

/// Exact minimum enclosing ball, up to floating point, of a nonempty point set.
pub fn min_enclosing_ball(points: &[&[f64]], rng: &mut impl Rng) -> Ball {
    assert!(!points.is_empty(), "need at least one point");
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(rng);
    move_to_front(points, &mut order, points.len(), &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn meb(pts: &[Vec<f64>]) -> Ball {
        let refs: Vec<&[f64]> = pts.iter().map(Vec::as_slice).collect();
        min_enclosing_ball(&refs, &mut ChaCha8Rng::seed_from_u64(7))
    }

    #[test]
    fn two_points_use_the_midpoint() {
        let b = meb(&[vec![0.0, 0.0], vec![1.0, 0.0]]);
        assert!((b.radius - 0.5).abs() < 1e-12);
        assert!((b.center[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn collinear_points() {
        let b = meb(&[vec![0.0], vec![1.0], vec![2.0]]);
        assert!((b.radius - 1.0).abs() < 1e-12);
        let b = meb(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]]);
        assert!((b.radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equilateral_triangle_circumradius() {
        let h = 3f64.sqrt() / 2.0;
        let b = meb(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]]);
        assert!((b.radius - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn obtuse_triangle_uses_longest_side() {
        let b = meb(&[vec![0.0, 0.0], vec![4.0, 0.0], vec![2.0, 0.5]]);
        assert!((b.radius - 2.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn ball_covers_all_points_and_is_not_larger_than_a_naive_one(
            pts in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 3), 1..9)
        ) {
            let b = meb(&pts);
            for p in &pts {
                prop_assert!(dist(&b.center, p) <= b.radius + 1e-7);
            }
            let far = pts.iter().map(|p| dist(&pts[0], p)).fold(0.0, f64::max);
            prop_assert!(b.radius <= far + 1e-9);
            let diam = pts.iter().flat_map(|p| pts.iter().map(move |q| dist(p, q))).fold(0.0, f64::max);
            prop_assert!(b.radius >= diam / 2.0 - 1e-9);
        }
    }
}
