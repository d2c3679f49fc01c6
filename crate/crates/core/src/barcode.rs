//! Bars, barcodes and their JSON rendering.
//!
//! A bar `(death, birth]` in degree `p` stands for a class that is alive at
//! the indices `death + 1 ..= birth`. Cohomology runs against the filtration,
//! so the class appears at `birth` and vanishes at `death`. In value space the
//! same bar is the half-open interval `[a_{death+1}, a_{birth+1})`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::complex::Filtration;
use crate::f2linalg::Cochain;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bar {
    pub degree: usize,
    pub death: i64,
    pub birth: usize,
}

impl Bar {
    pub fn new(degree: usize, death: i64, birth: usize) -> Self {
        debug_assert!(death < birth as i64, "death must precede birth");
        Bar {
            degree,
            death,
            birth,
        }
    }

    pub fn is_essential(&self, n: usize) -> bool {
        self.birth == n
    }

    /// True iff the bar covers every index of the interval `[a, b]`.
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.death < a as i64 && b <= self.birth
    }

    fn sort_key(&self) -> (usize, std::cmp::Reverse<usize>, std::cmp::Reverse<i64>) {
        (
            self.degree,
            std::cmp::Reverse(self.birth),
            std::cmp::Reverse(self.death),
        )
    }
}

/// A bar together with the cochain representing its class at the birth index.
#[derive(Clone, Debug)]
pub struct RepBar {
    pub bar: Bar,
    pub rep: Cochain,
}

/// A barcode whose bars carry representatives.
#[derive(Clone, Debug, Default)]
pub struct Barcode {
    bars: Vec<RepBar>,
}

impl Barcode {
    /// Sorts by degree, then birth index descending, then death index descending.
    pub fn new(mut bars: Vec<RepBar>) -> Self {
        bars.sort_by_key(|b| b.bar.sort_key());
        Barcode { bars }
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &RepBar> {
        self.bars.iter()
    }

    pub fn rep_bars(&self) -> &[RepBar] {
        &self.bars
    }

    /// Plain bars in canonical order.
    pub fn bars(&self) -> Vec<Bar> {
        self.bars.iter().map(|b| b.bar).collect()
    }

    pub fn in_degree(&self, degree: usize) -> impl Iterator<Item = &RepBar> {
        self.bars.iter().filter(move |b| b.bar.degree == degree)
    }

    pub fn records(&self, f: &Filtration, partition: Option<&str>) -> Vec<BarRecord> {
        self.bars
            .iter()
            .map(|b| BarRecord::from_bar(&b.bar, f, partition))
            .collect()
    }

    /// Checks the structural facts every cup-type barcode must satisfy
    /// against the ordinary barcode it was built from: births and deaths are
    /// ordinary births and deaths, and no two bars share a death index. The
    /// relative sentinel death `-1` is not an index and may repeat.
    pub fn check_structure(&self, ordinary: &Barcode) -> Result<(), String> {
        let births: BTreeSet<usize> = ordinary.bars.iter().map(|b| b.bar.birth).collect();
        let deaths: BTreeSet<i64> = ordinary.bars.iter().map(|b| b.bar.death).collect();
        let mut seen = BTreeSet::new();
        for b in &self.bars {
            if !births.contains(&b.bar.birth) {
                return Err(format!("{:?}: birth is not an ordinary birth", b.bar));
            }
            if !deaths.contains(&b.bar.death) {
                return Err(format!("{:?}: death is not an ordinary death", b.bar));
            }
            if b.bar.death >= 0 && !seen.insert(b.bar.death) {
                return Err(format!("{:?}: death index already used", b.bar));
            }
        }
        Ok(())
    }
}

/// Sorts plain bars into the canonical output order.
pub fn sort_bars(bars: &mut [Bar]) {
    bars.sort_by_key(Bar::sort_key);
}

/// The JSON form of a bar.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BarRecord {
    pub degree: usize,
    pub birth_index: usize,
    pub death_index: i64,
    pub birth_value: Option<f64>,
    pub death_value: Option<f64>,
    pub partition: Option<String>,
}

impl BarRecord {
    pub fn from_bar(bar: &Bar, f: &Filtration, partition: Option<&str>) -> Self {
        let finite = |x: f64| x.is_finite().then_some(x);
        BarRecord {
            degree: bar.degree,
            birth_index: bar.birth,
            death_index: bar.death,
            birth_value: finite(f.grid_value(bar.death + 1)),
            death_value: finite(f.grid_value(bar.birth as i64 + 1)),
            partition: partition.map(str::to_string),
        }
    }

    pub fn bar(&self) -> Bar {
        Bar {
            degree: self.degree,
            death: self.death_index,
            birth: self.birth_index,
        }
    }
}

/// Value-space diagram per degree: `(birth_value, death_value)` with
/// `+inf` for essential bars and `-inf` for a missing birth value.
pub type Diagram = BTreeMap<usize, Vec<(f64, f64)>>;

pub fn diagram(records: &[BarRecord]) -> Diagram {
    let mut d = Diagram::new();
    for r in records {
        d.entry(r.degree).or_default().push((
            r.birth_value.unwrap_or(f64::NEG_INFINITY),
            r.death_value.unwrap_or(f64::INFINITY),
        ));
    }
    d
}

/// Multiset difference between two bar lists.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BarDiff {
    pub missing: Vec<Bar>,
    pub extra: Vec<Bar>,
}

impl BarDiff {
    /// `missing` holds bars of `expected` absent from `actual`; `extra` the reverse.
    pub fn between(expected: &[Bar], actual: &[Bar]) -> Self {
        let mut count: BTreeMap<Bar, i64> = BTreeMap::new();
        for b in expected {
            *count.entry(*b).or_default() += 1;
        }
        for b in actual {
            *count.entry(*b).or_default() -= 1;
        }
        let mut diff = BarDiff::default();
        for (bar, c) in count {
            let target = if c > 0 {
                &mut diff.missing
            } else {
                &mut diff.extra
            };
            target.extend(std::iter::repeat_n(bar, c.unsigned_abs() as usize));
        }
        diff
    }

    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }

    pub fn len(&self) -> usize {
        self.missing.len() + self.extra.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{parse_text, Filtration};

    #[test]
    fn rendering_uses_the_value_grid() {
        let f = Filtration::from_listing(parse_text("t", "0 0\n0.5 1\n2 0 1\n").unwrap()).unwrap();
        let killed = BarRecord::from_bar(&Bar::new(0, 1, 2), &f, None);
        assert_eq!(killed.birth_value, Some(0.5));
        assert_eq!(killed.death_value, Some(2.0));
        let essential = BarRecord::from_bar(&Bar::new(0, 0, 3), &f, Some("1+1"));
        assert_eq!(essential.birth_value, Some(0.0));
        assert_eq!(essential.death_value, None);
        assert_eq!(essential.partition.as_deref(), Some("1+1"));
        let relative = BarRecord::from_bar(&Bar::new(0, -1, 0), &f, None);
        assert_eq!(relative.birth_value, None);
        assert_eq!(relative.death_value, Some(0.0));
    }

    #[test]
    fn json_round_trip() {
        let f = Filtration::from_listing(parse_text("t", "0 0\n0.5 1\n2 0 1\n").unwrap()).unwrap();
        let rec = BarRecord::from_bar(&Bar::new(0, 0, 3), &f, None);
        let text = serde_json::to_string(&rec).unwrap();
        assert!(text.contains("\"death_value\":null"));
        let back: BarRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn canonical_order() {
        let mut bars = vec![Bar::new(1, 0, 3), Bar::new(0, 1, 2), Bar::new(0, 0, 3), Bar::new(0, 2, 3)];
        sort_bars(&mut bars);
        assert_eq!(
            bars,
            vec![Bar::new(0, 2, 3), Bar::new(0, 0, 3), Bar::new(0, 1, 2), Bar::new(1, 0, 3)]
        );
    }

    #[test]
    fn diff_counts_multiplicity() {
        let a = [Bar::new(1, 0, 4), Bar::new(1, 0, 4), Bar::new(2, 1, 3)];
        let b = [Bar::new(1, 0, 4), Bar::new(2, 1, 3)];
        let d = BarDiff::between(&a, &b);
        assert_eq!(d.missing, vec![Bar::new(1, 0, 4)]);
        assert!(d.extra.is_empty());
        assert!(BarDiff::between(&a, &a).is_empty());
    }

    #[test]
    fn containment() {
        let b = Bar::new(1, 2, 5);
        assert!(b.contains(3, 5));
        assert!(!b.contains(2, 5));
        assert!(!b.contains(3, 6));
    }
}
