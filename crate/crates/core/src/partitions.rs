//! Integer partitions and partition modules of the cup product.
//!
//! The partition module of `λ = (s1, ..., sl)` is generated by the products
//! of `l` classes of degrees `s1, ..., sl`. Its barcode for `l = 2` comes from
//! pairing the ordinary bars of degree `s1` with those of degree `s2`; longer
//! partitions pair the bars of degree `sl` with the barcode of the canonical
//! parent `(s1, ..., s(l-1))`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::barcode::{Barcode, RepBar};
use crate::complex::Filtration;
use crate::driver::{self, DriverOptions, Mode, Right};
use crate::error::{Error, Result};
use crate::persistence::persistent_cohomology;

/// A partition with at least two parts, stored in non-decreasing order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} has fewer than two parts"
            )));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        parts.sort_unstable();
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last_part(&self) -> usize {
        *self.0.last().expect("at least two parts")
    }

    /// The partition without its last (largest) part, if that still has two parts.
    pub fn parent(&self) -> Option<Partition> {
        (self.0.len() > 2).then(|| Partition(self.0[..self.0.len() - 1].to_vec()))
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.sum(), self.len(), &self.0).cmp(&(other.sum(), other.len(), &other.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `1+1+2` or `1,1,2`, in any part order.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(['+', ','])
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPartition(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// All partitions with at least two parts of every `q` in `2..=d`, ordered by
/// sum, then number of parts, then parts lexicographically.
///
/// Partitions of `q` are grown from those of `q - 1` by adding a part `1` or
/// incrementing one part.
pub fn enumerate_partitions(d: usize) -> Result<Vec<Partition>> {
    if d < 2 {
        return Err(Error::InvalidPartition(format!("degree bound {d} is below 2")));
    }
    let mut level: BTreeSet<Vec<usize>> = BTreeSet::from([vec![1]]);
    let mut out = Vec::new();
    for _ in 2..=d {
        let mut next = BTreeSet::new();
        for p in &level {
            let mut with_one = p.clone();
            with_one.insert(0, 1);
            next.insert(with_one);
            for i in 0..p.len() {
                if i + 1 < p.len() && p[i] == p[i + 1] {
                    continue;
                }
                let mut bumped = p.clone();
                bumped[i] += 1;
                bumped.sort_unstable();
                next.insert(bumped);
            }
        }
        out.extend(next.iter().filter(|p| p.len() >= 2).cloned().map(Partition));
        level = next;
    }
    out.sort();
    Ok(out)
}

/// True iff the parts of `a` can be grouped so that the group sums are the parts of `b`.
pub fn refines(a: &Partition, b: &Partition) -> Result<bool> {
    if a.sum() != b.sum() {
        return Err(Error::PartitionSumMismatch(a.to_string(), b.to_string()));
    }
    fn place(pieces: &[usize], bins: &mut [usize]) -> bool {
        let Some((&first, rest)) = pieces.split_first() else {
            return bins.iter().all(|&r| r == 0);
        };
        for i in 0..bins.len() {
            // Bins with equal remaining capacity are interchangeable.
            if bins[i] < first || bins[..i].contains(&bins[i]) {
                continue;
            }
            bins[i] -= first;
            if place(rest, bins) {
                return true;
            }
            bins[i] += first;
        }
        false
    }
    let mut pieces = a.0.clone();
    pieces.reverse();
    let mut bins = b.0.clone();
    Ok(place(&pieces, &mut bins))
}

/// True iff `child` is `parent` with exactly one more part appended.
pub fn extends_by_one(child: &Partition, parent: &Partition) -> bool {
    child.len() == parent.len() + 1 && child.0[..parent.len()] == parent.0[..]
}

fn of_degree(ordinary: &Barcode, degree: usize) -> Vec<&RepBar> {
    ordinary.iter().filter(|b| b.bar.degree == degree).collect()
}

fn two_parts(f: &Filtration, ordinary: &Barcode, lambda: &Partition, opts: DriverOptions) -> Result<Barcode> {
    let &[s1, s2] = lambda.parts() else {
        return Err(Error::InvalidPartition(format!("{lambda} does not have two parts")));
    };
    let right = if s1 == s2 {
        Right::Same
    } else {
        Right::Bars(of_degree(ordinary, s2))
    };
    let out = driver::run(f, Mode::Absolute, of_degree(ordinary, s1), right, opts);
    debug_assert_eq!(out.check_structure(ordinary), Ok(()));
    Ok(out)
}

fn extend_step(
    f: &Filtration,
    ordinary: &Barcode,
    lambda: &Partition,
    parent: &Barcode,
    opts: DriverOptions,
) -> Barcode {
    let right = Right::Bars(parent.iter().collect());
    let out = driver::run(f, Mode::Absolute, of_degree(ordinary, lambda.last_part()), right, opts);
    debug_assert_eq!(out.check_structure(ordinary), Ok(()));
    out
}

/// Barcode of the partition module of a two-part partition.
pub fn cup_pers_2_parts(f: &Filtration, lambda: &Partition) -> Result<Barcode> {
    two_parts(f, &persistent_cohomology(f), lambda, DriverOptions::default())
}

/// Computed partition barcodes keyed by partition, plus the ordinary barcode
/// they are built from.
#[derive(Clone, Debug)]
pub struct PartitionMemo {
    ordinary: Barcode,
    opts: DriverOptions,
    table: BTreeMap<Partition, Barcode>,
    hits: usize,
}

impl PartitionMemo {
    pub fn new(f: &Filtration) -> Self {
        Self::with_options(f, DriverOptions::default())
    }

    pub fn with_options(f: &Filtration, opts: DriverOptions) -> Self {
        PartitionMemo {
            ordinary: persistent_cohomology(f),
            opts,
            table: BTreeMap::new(),
            hits: 0,
        }
    }

    pub fn hits(&self) -> usize {
        self.hits
    }

    pub fn get(&self, lambda: &Partition) -> Option<&Barcode> {
        self.table.get(lambda)
    }

    pub fn table(&self) -> &BTreeMap<Partition, Barcode> {
        &self.table
    }

    pub fn into_table(self) -> BTreeMap<Partition, Barcode> {
        self.table
    }
}

/// Barcode of the partition module of `lambda`, reusing and filling `memo`.
pub fn extend_cup_pers_k_parts(
    f: &Filtration,
    lambda: &Partition,
    memo: &mut PartitionMemo,
) -> Result<Barcode> {
    if let Some(hit) = memo.table.get(lambda) {
        memo.hits += 1;
        return Ok(hit.clone());
    }
    let out = match lambda.parent() {
        None => two_parts(f, &memo.ordinary, lambda, memo.opts)?,
        Some(parent) => {
            let parent_bars = extend_cup_pers_k_parts(f, &parent, memo)?;
            extend_step(f, &memo.ordinary, lambda, &parent_bars, memo.opts)
        }
    };
    memo.table.insert(lambda.clone(), out.clone());
    Ok(out)
}

/// The same recursion without any caching.
pub fn partition_barcode_uncached(f: &Filtration, lambda: &Partition) -> Result<Barcode> {
    fn go(f: &Filtration, ordinary: &Barcode, lambda: &Partition) -> Result<Barcode> {
        match lambda.parent() {
            None => two_parts(f, ordinary, lambda, DriverOptions::default()),
            Some(parent) => {
                let p = go(f, ordinary, &parent)?;
                Ok(extend_step(f, ordinary, lambda, &p, DriverOptions::default()))
            }
        }
    }
    go(f, &persistent_cohomology(f), lambda)
}

/// Barcodes of every partition module with `2 <= q <= max(dim, 2)`.
///
/// Partitions are processed level by level in their number of parts; each
/// level runs in parallel against the finished previous level.
pub fn compute_partition_barcodes(f: &Filtration) -> BTreeMap<Partition, Barcode> {
    compute_partition_barcodes_with(f, DriverOptions::default())
}

pub fn compute_partition_barcodes_with(
    f: &Filtration,
    opts: DriverOptions,
) -> BTreeMap<Partition, Barcode> {
    let mut memo = PartitionMemo::with_options(f, opts);
    let all = enumerate_partitions(f.dim().max(2)).expect("bound is at least 2");
    let max_len = all.iter().map(Partition::len).max().unwrap_or(2);
    for len in 2..=max_len {
        let level: Vec<&Partition> = all.iter().filter(|p| p.len() == len).collect();
        let done: Vec<(Partition, Barcode)> = level
            .par_iter()
            .map(|&lambda| {
                let bars = match lambda.parent() {
                    None => two_parts(f, &memo.ordinary, lambda, opts).expect("two parts"),
                    Some(parent) => {
                        extend_step(f, &memo.ordinary, lambda, &memo.table[&parent], opts)
                    }
                };
                (lambda.clone(), bars)
            })
            .collect();
        memo.table.extend(done);
    }
    memo.into_table()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn count_partitions(q: usize) -> usize {
        let mut ways = vec![0usize; q + 1];
        ways[0] = 1;
        for part in 1..=q {
            for s in part..=q {
                ways[s] += ways[s - part];
            }
        }
        ways[q]
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_partitions(2).unwrap(), vec![p("1+1")]);
        assert_eq!(
            enumerate_partitions(3).unwrap(),
            vec![p("1+1"), p("1+2"), p("1+1+1")]
        );
        assert_eq!(enumerate_partitions(4).unwrap().len(), 7);
        assert!(enumerate_partitions(1).is_err());
    }

    #[test]
    fn counts_match_partition_numbers() {
        for d in 2..=12 {
            let expected: usize = (2..=d).map(|q| count_partitions(q) - 1).sum();
            assert_eq!(enumerate_partitions(d).unwrap().len(), expected);
            let c = std::f64::consts::PI * (2.0f64 / 3.0).sqrt();
            let q = d as f64;
            assert!((count_partitions(d) as f64) < (c * q.sqrt()).exp() / q.powf(0.75));
        }
    }

    #[test]
    fn parsing_normalizes_order() {
        assert_eq!(p("1+2+1"), p("1,1,2"));
        assert_eq!(p("2+1+1").to_string(), "1+1+2");
        assert!("3".parse::<Partition>().is_err());
        assert!("1+0".parse::<Partition>().is_err());
        assert!("1+x".parse::<Partition>().is_err());
    }

    #[test]
    fn refinement_examples() {
        assert!(refines(&p("1+1+1+1"), &p("1+1+2")).unwrap());
        assert!(refines(&p("2+2"), &p("2+2")).unwrap());
        assert!(!refines(&p("1+3"), &p("2+2")).unwrap());
        assert!(refines(&p("1+1+2"), &p("2+2")).unwrap());
        assert!(matches!(
            refines(&p("1+1"), &p("1+2")),
            Err(Error::PartitionSumMismatch(..))
        ));
    }

    #[test]
    fn extension_examples() {
        assert!(extends_by_one(&p("2+2+3"), &p("2+2")));
        assert!(!extends_by_one(&p("2+2"), &p("2+2")));
        assert!(!extends_by_one(&p("1+2+3"), &p("2+3")));
        let child = p("1+1+2+3");
        assert!(extends_by_one(&child, &child.parent().unwrap()));
    }

    proptest! {
        #[test]
        fn refinement_is_reflexive_and_extension_is_canonical(parts in prop::collection::vec(1usize..5, 2..6)) {
            let lambda = Partition::new(parts).unwrap();
            prop_assert!(refines(&lambda, &lambda).unwrap());
            if let Some(parent) = lambda.parent() {
                prop_assert!(extends_by_one(&lambda, &parent));
                prop_assert!(refines(&lambda, &Partition::new(vec![lambda.parts()[0], lambda.sum() - lambda.parts()[0]]).unwrap()).unwrap());
            }
        }
    }
}
