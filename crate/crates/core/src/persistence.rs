//! Ordinary and relative persistent cohomology with representative cocycles.
//!
//! Both barcodes come from one reduction of the coboundary matrix, processed
//! from the last simplex to the first with lowest-index pivots. A pair
//! `(j, p)` (column `j` reduced to lowest entry `p`) yields the absolute bar
//! `(j-1, p-1]` in degree `dim σ_j` and the relative bar `(j-1, p-1]` in
//! degree `dim σ_p`. An unpaired simplex `p` yields the essential absolute bar
//! `(p-1, n]` and the relative bar `(-1, p-1]`, both in degree `dim σ_p`.

use crate::barcode::{Bar, Barcode, RepBar};
use crate::complex::Filtration;
use crate::f2linalg::{Cochain, F2Vector};

/// The coboundary reduction shared by the absolute and relative barcodes.
#[derive(Clone, Debug)]
pub struct CoboundaryReduction {
    n: usize,
    pairs: Vec<(usize, usize)>,
    essential: Vec<usize>,
    // v[j]: accumulated cochain whose coboundary is the reduced column j
    v: Vec<F2Vector>,
}

impl CoboundaryReduction {
    pub fn new(f: &Filtration) -> Self {
        let n = f.len();
        let mut owner: Vec<Option<usize>> = vec![None; n + 1];
        let mut r: Vec<F2Vector> = vec![F2Vector::default(); n + 1];
        let mut v: Vec<F2Vector> = vec![F2Vector::default(); n + 1];
        let mut pairs = Vec::new();
        for j in (1..=n).rev() {
            let mut rj = f.coboundary_of(j).into_support();
            let mut vj = F2Vector::from_indices(n + 1, [j]);
            while let Some(low) = rj.min_one() {
                match owner[low] {
                    Some(i) => {
                        rj.xor_assign(&r[i]);
                        vj.xor_assign(&v[i]);
                    }
                    None => {
                        owner[low] = Some(j);
                        pairs.push((j, low));
                        break;
                    }
                }
            }
            r[j] = rj;
            v[j] = vj;
        }
        let mut is_low = vec![false; n + 1];
        let mut is_col = vec![false; n + 1];
        for &(j, p) in &pairs {
            is_col[j] = true;
            is_low[p] = true;
        }
        let essential = (1..=n).filter(|&p| !is_col[p] && !is_low[p]).collect();
        pairs.reverse();
        CoboundaryReduction {
            n,
            pairs,
            essential,
            v,
        }
    }

    /// Persistence pairs `(j, p)` with `j < p`, ascending in `j`.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Simplices that neither kill nor get killed.
    pub fn essential(&self) -> &[usize] {
        &self.essential
    }

    pub fn absolute(&self, f: &Filtration) -> Barcode {
        let n = self.n;
        let mut bars = Vec::with_capacity(self.pairs.len() + self.essential.len());
        for &(j, p) in &self.pairs {
            let degree = f.dim_of(j);
            bars.push(RepBar {
                bar: Bar::new(degree, j as i64 - 1, p - 1),
                rep: Cochain::new(degree, self.v[j].truncated(p - 1)),
            });
        }
        for &p in &self.essential {
            let degree = f.dim_of(p);
            bars.push(RepBar {
                bar: Bar::new(degree, p as i64 - 1, n),
                rep: Cochain::new(degree, self.v[p].clone()),
            });
        }
        Barcode::new(bars)
    }

    pub fn relative(&self, f: &Filtration) -> Barcode {
        let mut bars = Vec::with_capacity(self.pairs.len() + self.essential.len());
        for &(j, p) in &self.pairs {
            let degree = f.dim_of(p);
            bars.push(RepBar {
                bar: Bar::new(degree, j as i64 - 1, p - 1),
                rep: Cochain::new(degree, self.v[p].clone()),
            });
        }
        for &p in &self.essential {
            let degree = f.dim_of(p);
            bars.push(RepBar {
                bar: Bar::new(degree, -1, p - 1),
                rep: Cochain::new(degree, self.v[p].clone()),
            });
        }
        Barcode::new(bars)
    }
}

/// Barcode of `H*(K_•)` with a representative cocycle per bar.
pub fn persistent_cohomology(f: &Filtration) -> Barcode {
    CoboundaryReduction::new(f).absolute(f)
}

/// Barcode of `H*(K, K_•)` with a representative relative cocycle per bar.
pub fn relative_persistent_cohomology(f: &Filtration) -> Barcode {
    CoboundaryReduction::new(f).relative(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{dimension_filtration, parse_text, Simplex};

    fn bars(b: &Barcode) -> Vec<(usize, i64, usize)> {
        let mut v: Vec<_> = b.bars().iter().map(|b| (b.degree, b.death, b.birth)).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn single_vertex() {
        let f = Filtration::new(vec![(0.0, Simplex::new(vec![0]).unwrap())]).unwrap();
        assert_eq!(bars(&persistent_cohomology(&f)), vec![(0, 0, 1)]);
        assert_eq!(bars(&relative_persistent_cohomology(&f)), vec![(0, -1, 0)]);
    }

    #[test]
    fn single_edge() {
        let f = Filtration::from_listing(parse_text("t", "0 0\n0 1\n1 0 1\n").unwrap()).unwrap();
        assert_eq!(bars(&persistent_cohomology(&f)), vec![(0, 0, 3), (0, 1, 2)]);
        assert_eq!(bars(&relative_persistent_cohomology(&f)), vec![(0, -1, 0), (1, 1, 2)]);
    }

    #[test]
    fn hollow_triangle() {
        let text = "0 0\n0 1\n0 2\n1 0 1\n1 0 2\n1 1 2\n";
        let f = Filtration::from_listing(parse_text("t", text).unwrap()).unwrap();
        let b = persistent_cohomology(&f);
        assert_eq!(b.in_degree(0).count(), 3);
        assert_eq!(b.in_degree(0).filter(|b| b.bar.is_essential(6)).count(), 1);
        assert_eq!(b.in_degree(1).count(), 1);
        assert!(b.in_degree(1).all(|b| b.bar.is_essential(6)));
    }

    #[test]
    fn representatives_are_cocycles_that_die_on_time() {
        let f = dimension_filtration(&[vec![0, 1, 2], vec![1, 2, 3], vec![0, 3], vec![3, 4]]).unwrap();
        let n = f.len();
        for rb in persistent_cohomology(&f).iter() {
            let b = rb.bar.birth;
            assert!(f.coboundary(&rb.rep).restrict(b).is_zero(), "{:?}", rb.bar);
            if b < n {
                assert!(!f.coboundary(&rb.rep.restrict(b + 1)).restrict(b + 1).is_zero());
            }
        }
    }

    #[test]
    fn every_simplex_is_used_once() {
        let f = dimension_filtration(&[vec![0, 1, 2, 3], vec![3, 4, 5]]).unwrap();
        let red = CoboundaryReduction::new(&f);
        assert_eq!(2 * red.pairs().len() + red.essential().len(), f.len());
    }
}
