//! Brute-force barcodes from rank functions.
//!
//! For every index `b` the oracle recomputes a cohomology basis from scratch
//! by dense Gaussian elimination, builds the generators of the requested
//! module as explicit products, and measures the rank of the structure map to
//! every `a <= b` modulo the coboundaries at `a`. Bars then follow from
//! inclusion-exclusion over the rank function:
//! `Dgm[a,b] = rk[a,b] - rk[a-1,b] - rk[a,b+1] + rk[a-1,b+1]`,
//! with `[a, b]` read as the bar `(a-1, b]`.
//!
//! Nothing here shares code with the reduction engine or the drivers.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::barcode::{sort_bars, Bar, BarDiff};
use crate::complex::Filtration;
use crate::error::{Error, Result};
use crate::f2linalg::Cochain;
use crate::partitions::Partition;

/// Largest filtration the oracle accepts.
pub const ORACLE_LIMIT: usize = 200;

/// Which persistence module to compute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleSpec {
    Ordinary,
    Relative,
    KCup(usize),
    Partition(Partition),
    RelKCup(usize),
}

impl ModuleSpec {
    pub fn is_relative(&self) -> bool {
        matches!(self, ModuleSpec::Relative | ModuleSpec::RelKCup(_))
    }
}

impl fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleSpec::Ordinary => write!(f, "ordinary"),
            ModuleSpec::Relative => write!(f, "relative"),
            ModuleSpec::KCup(k) => write!(f, "kcup:{k}"),
            ModuleSpec::Partition(p) => write!(f, "partition:{p}"),
            ModuleSpec::RelKCup(k) => write!(f, "rel-kcup:{k}"),
        }
    }
}

impl FromStr for ModuleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownSpec(s.to_string());
        let order = |k: &str| match k.parse::<usize>() {
            Ok(k) if k >= 2 => Ok(k),
            Ok(k) => Err(Error::InvalidOrder(k)),
            Err(_) => Err(bad()),
        };
        match s.split_once(':') {
            None if s == "ordinary" => Ok(ModuleSpec::Ordinary),
            None if s == "relative" => Ok(ModuleSpec::Relative),
            Some(("kcup", k)) => Ok(ModuleSpec::KCup(order(k)?)),
            Some(("rel-kcup", k)) => Ok(ModuleSpec::RelKCup(order(k)?)),
            Some(("partition", p)) => Ok(ModuleSpec::Partition(p.parse()?)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn zeros(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn flip(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }

    fn xor(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a ^= b;
        }
    }

    fn top(&self) -> Option<usize> {
        (0..self.0.len())
            .rev()
            .find(|&k| self.0[k] != 0)
            .map(|k| k * 64 + 63 - self.0[k].leading_zeros() as usize)
    }

    fn keep_up_to(&self, k: usize) -> Bits {
        let mut out = self.clone();
        for i in k + 1..out.0.len() * 64 {
            if out.get(i) {
                out.flip(i);
            }
        }
        out
    }

    fn ones(&self) -> Vec<usize> {
        (0..self.0.len() * 64).filter(|&i| self.get(i)).collect()
    }
}

/// Row echelon form keyed by highest set bit.
#[derive(Clone, Default)]
struct Echelon {
    rows: HashMap<usize, Bits>,
}

impl Echelon {
    fn remainder(&self, v: &Bits, extra: Option<&Echelon>) -> Bits {
        let mut v = v.clone();
        while let Some(t) = v.top() {
            if let Some(r) = self.rows.get(&t) {
                v.xor(r);
            } else if let Some(r) = extra.and_then(|e| e.rows.get(&t)) {
                v.xor(r);
            } else {
                break;
            }
        }
        v
    }

    fn insert_over(&mut self, v: &Bits, base: Option<&Echelon>) -> bool {
        let r = match base {
            Some(b) => b.remainder(v, Some(self)),
            None => self.remainder(v, None),
        };
        match r.top() {
            Some(t) => {
                self.rows.insert(t, r);
                true
            }
            None => false,
        }
    }

    fn insert(&mut self, v: &Bits) -> bool {
        self.insert_over(v, None)
    }
}

/// Ranks `rk[a, b]` per degree for `0 <= a <= b <= n`.
#[derive(Clone, Debug)]
pub struct RankFunction {
    n: usize,
    ranks: BTreeMap<usize, Vec<Vec<usize>>>,
}

impl RankFunction {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.ranks.keys().copied()
    }

    /// Rank in one degree; zero outside `0 <= a <= b <= n`.
    pub fn get(&self, degree: usize, a: i64, b: i64) -> usize {
        if a < 0 || b > self.n as i64 || a > b {
            return 0;
        }
        self.ranks
            .get(&degree)
            .map_or(0, |t| t[a as usize][b as usize])
    }

    pub fn total(&self, a: i64, b: i64) -> usize {
        self.degrees().map(|d| self.get(d, a, b)).sum()
    }

    /// Barcode by inclusion-exclusion; a negative multiplicity is an error.
    pub fn barcode(&self) -> Result<Vec<Bar>> {
        let n = self.n as i64;
        let mut bars = Vec::new();
        for d in self.degrees() {
            for a in 0..=n {
                for b in a..=n {
                    let m = self.get(d, a, b) as i64 - self.get(d, a - 1, b) as i64
                        - self.get(d, a, b + 1) as i64
                        + self.get(d, a - 1, b + 1) as i64;
                    if m < 0 {
                        return Err(Error::NegativeMultiplicity {
                            degree: d,
                            a: a as usize,
                            b: b as usize,
                        });
                    }
                    bars.extend(std::iter::repeat_n(Bar::new(d, a - 1, b as usize), m as usize));
                }
            }
        }
        sort_bars(&mut bars);
        Ok(bars)
    }
}

/// Brute-force evaluator over one filtration.
pub struct Oracle<'a> {
    f: &'a Filtration,
    n: usize,
    lookup: HashMap<Vec<u32>, usize>,
    cob: Vec<Bits>,
    dims: Vec<usize>,
}

impl<'a> Oracle<'a> {
    pub fn new(f: &'a Filtration) -> Result<Self> {
        let n = f.len();
        if n > ORACLE_LIMIT {
            return Err(Error::OracleTooLarge {
                n,
                limit: ORACLE_LIMIT,
            });
        }
        let mut lookup = HashMap::new();
        let mut dims = vec![0; n + 1];
        for (i, dim) in dims.iter_mut().enumerate().skip(1) {
            let v = f.simplex(i).vertices().to_vec();
            *dim = v.len() - 1;
            lookup.insert(v, i);
        }
        let mut cob = vec![Bits::zeros(n + 1); n + 1];
        for s in 1..=n {
            let v = f.simplex(s).vertices();
            if v.len() < 2 {
                continue;
            }
            for drop in 0..v.len() {
                let mut face = v.to_vec();
                face.remove(drop);
                cob[lookup[&face]].flip(s);
            }
        }
        Ok(Oracle {
            f,
            n,
            lookup,
            cob,
            dims,
        })
    }

    fn bits_to_cochain(&self, degree: usize, b: &Bits) -> Cochain {
        Cochain::from_indices(degree, self.n, b.ones())
    }

    fn degree_of(&self, b: &Bits) -> usize {
        self.dims[b.top().expect("nonzero cochain")]
    }

    /// Simplices that carry cochains at index `i`, and the coboundary of each
    /// of them as seen at `i`.
    fn cochain_space(&self, i: usize, relative: bool) -> Vec<(usize, Bits)> {
        if relative {
            (i + 1..=self.n).map(|s| (s, self.cob[s].clone())).collect()
        } else {
            (1..=i).map(|s| (s, self.cob[s].keep_up_to(i))).collect()
        }
    }

    fn coboundaries(&self, i: usize, relative: bool) -> Echelon {
        let mut e = Echelon::default();
        for (_, c) in self.cochain_space(i, relative) {
            e.insert(&c);
        }
        e
    }

    fn basis_bits(&self, i: usize, relative: bool) -> Vec<(usize, Bits)> {
        let space = self.cochain_space(i, relative);
        let mut out = Vec::new();
        let max_dim = space.iter().map(|(s, _)| self.dims[*s]).max();
        let Some(max_dim) = max_dim else {
            return out;
        };
        for d in 0..=max_dim {
            // Kernel of the coboundary on degree-d cochains, tracked with combinations.
            let mut images: HashMap<usize, (Bits, Bits)> = HashMap::new();
            let mut cocycles = Vec::new();
            for (s, c) in space.iter().filter(|(s, _)| self.dims[*s] == d) {
                let mut img = c.clone();
                let mut combo = Bits::zeros(self.n + 1);
                combo.flip(*s);
                while let Some(t) = img.top() {
                    match images.get(&t) {
                        Some((ri, rc)) => {
                            img.xor(ri);
                            combo.xor(rc);
                        }
                        None => break,
                    }
                }
                match img.top() {
                    Some(t) => {
                        images.insert(t, (img, combo));
                    }
                    None => cocycles.push(combo),
                }
            }
            let mut quotient = Echelon::default();
            for (s, c) in &space {
                if self.dims[*s] + 1 == d {
                    quotient.insert(c);
                }
            }
            for z in cocycles {
                if quotient.insert(&z) {
                    out.push((d, z));
                }
            }
        }
        out
    }

    /// A basis of the cohomology of `K_i`, or of `(K, K_i)` when `relative`.
    pub fn cohomology_basis_at(&self, i: usize, relative: bool) -> Vec<Cochain> {
        self.basis_bits(i.min(self.n), relative)
            .iter()
            .map(|(d, b)| self.bits_to_cochain(*d, b))
            .collect()
    }

    fn product(&self, x: &Bits, p: usize, y: &Bits, q: usize, prefix: usize) -> Bits {
        let mut out = Bits::zeros(self.n + 1);
        for s in 1..=prefix {
            if self.dims[s] != p + q {
                continue;
            }
            let v = self.f.simplex(s).vertices();
            let front = self.lookup[&v[..=p]];
            let back = self.lookup[&v[p..]];
            if x.get(front) && y.get(back) {
                out.flip(s);
            }
        }
        out
    }

    fn products(
        &self,
        xs: &[(usize, Bits)],
        ys: &[(usize, Bits)],
        prefix: usize,
        base: &Echelon,
    ) -> Vec<(usize, Bits)> {
        let mut span = Echelon::default();
        let mut out = Vec::new();
        for (p, x) in xs {
            for (q, y) in ys {
                let z = self.product(x, *p, y, *q, prefix);
                if span.insert_over(&z, Some(base)) {
                    out.push((p + q, z));
                }
            }
        }
        out
    }

    fn generators_bits(&self, spec: &ModuleSpec, b: usize) -> Vec<(usize, Bits)> {
        let relative = spec.is_relative();
        let basis = self.basis_bits(b, relative);
        let prefix = if relative { self.n } else { b };
        let base = self.coboundaries(b, relative);
        let of_degree = |d: usize| -> Vec<(usize, Bits)> {
            basis.iter().filter(|(e, _)| *e == d).cloned().collect()
        };
        match spec {
            ModuleSpec::Ordinary | ModuleSpec::Relative => basis.clone(),
            ModuleSpec::KCup(k) | ModuleSpec::RelKCup(k) => {
                let first: Vec<_> = basis.iter().filter(|(d, _)| *d > 0).cloned().collect();
                let mut v = first.clone();
                for _ in 2..=*k {
                    if v.is_empty() {
                        break;
                    }
                    v = self.products(&first, &v, prefix, &base);
                }
                v
            }
            ModuleSpec::Partition(lambda) => {
                let parts = lambda.parts();
                let mut v = of_degree(parts[0]);
                for &s in &parts[1..] {
                    if v.is_empty() {
                        break;
                    }
                    v = self.products(&of_degree(s), &v, prefix, &base);
                }
                v
            }
        }
    }

    /// Generating cocycles of the module at index `b`.
    pub fn generators(&self, spec: &ModuleSpec, b: usize) -> Vec<Cochain> {
        self.generators_bits(spec, b)
            .iter()
            .map(|(d, g)| self.bits_to_cochain(*d, g))
            .collect()
    }

    fn ranks_from(
        &self,
        gens: &[(usize, Bits)],
        a: usize,
        relative: bool,
        base: &Echelon,
    ) -> BTreeMap<usize, usize> {
        let mut span = Echelon::default();
        let mut ranks = BTreeMap::new();
        for (d, g) in gens {
            let moved = if relative { g.clone() } else { g.keep_up_to(a) };
            if span.insert_over(&moved, Some(base)) {
                debug_assert_eq!(self.degree_of(&moved), *d);
                *ranks.entry(*d).or_default() += 1;
            }
        }
        ranks
    }

    /// Rank of the structure map from `b` to `a`, summed over degrees.
    pub fn image_rank(&self, spec: &ModuleSpec, a: usize, b: usize) -> Result<usize> {
        if a > b {
            return Err(Error::InvalidInterval {
                a: a as i64,
                b: b as i64,
            });
        }
        if b > self.n {
            return Err(Error::IndexOutOfRange { index: b, n: self.n });
        }
        let relative = spec.is_relative();
        let gens = self.generators_bits(spec, b);
        let base = self.coboundaries(a, relative);
        Ok(self.ranks_from(&gens, a, relative, &base).values().sum())
    }

    /// The full rank function of a module.
    pub fn rank_function(&self, spec: &ModuleSpec) -> RankFunction {
        let n = self.n;
        let relative = spec.is_relative();
        let bases: Vec<Echelon> = (0..=n)
            .into_par_iter()
            .map(|a| self.coboundaries(a, relative))
            .collect();
        let columns: Vec<Vec<BTreeMap<usize, usize>>> = (0..=n)
            .into_par_iter()
            .map(|b| {
                let gens = self.generators_bits(spec, b);
                (0..=b)
                    .map(|a| {
                        if gens.is_empty() {
                            BTreeMap::new()
                        } else {
                            self.ranks_from(&gens, a, relative, &bases[a])
                        }
                    })
                    .collect()
            })
            .collect();
        let mut ranks: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
        for (b, col) in columns.iter().enumerate() {
            for (a, per_degree) in col.iter().enumerate() {
                for (&d, &r) in per_degree {
                    ranks.entry(d).or_insert_with(|| vec![vec![0; n + 1]; n + 1])[a][b] = r;
                }
            }
        }
        RankFunction { n, ranks }
    }

    pub fn barcode(&self, spec: &ModuleSpec) -> Result<Vec<Bar>> {
        self.rank_function(spec).barcode()
    }
}

/// Oracle barcode of a module over `f`.
pub fn oracle_barcode(f: &Filtration, spec: &ModuleSpec) -> Result<Vec<Bar>> {
    Oracle::new(f)?.barcode(spec)
}

pub fn image_rank(f: &Filtration, spec: &ModuleSpec, a: usize, b: usize) -> Result<usize> {
    Oracle::new(f)?.image_rank(spec, a, b)
}

pub fn cohomology_basis_at(f: &Filtration, i: usize, relative: bool) -> Result<Vec<Cochain>> {
    Ok(Oracle::new(f)?.cohomology_basis_at(i, relative))
}

/// Multiset comparison of a fast result with the oracle barcode.
pub fn verify(f: &Filtration, fast: &[Bar], spec: &ModuleSpec) -> Result<BarDiff> {
    let expected = oracle_barcode(f, spec)?;
    Ok(BarDiff::between(&expected, fast))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{dimension_filtration, parse_text};

    fn torus7() -> Filtration {
        let tris: Vec<Vec<u32>> = (0..7u32)
            .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
            .collect();
        dimension_filtration(&tris).unwrap()
    }

    #[test]
    fn spec_parsing() {
        assert_eq!("ordinary".parse::<ModuleSpec>().unwrap(), ModuleSpec::Ordinary);
        assert_eq!("kcup:3".parse::<ModuleSpec>().unwrap(), ModuleSpec::KCup(3));
        assert_eq!("rel-kcup:2".parse::<ModuleSpec>().unwrap(), ModuleSpec::RelKCup(2));
        let p = "partition:1+2".parse::<ModuleSpec>().unwrap();
        assert_eq!(p.to_string(), "partition:1+2");
        assert!("kcup:1".parse::<ModuleSpec>().is_err());
        assert!("bogus".parse::<ModuleSpec>().is_err());
    }

    #[test]
    fn empty_prefix_has_no_basis() {
        let f = torus7();
        let o = Oracle::new(&f).unwrap();
        assert!(o.cohomology_basis_at(0, false).is_empty());
    }

    #[test]
    fn circle_basis() {
        let text = "0 0\n0 1\n0 2\n1 0 1\n1 0 2\n1 1 2\n";
        let f = Filtration::from_listing(parse_text("t", text).unwrap()).unwrap();
        let basis = cohomology_basis_at(&f, 6, false).unwrap();
        let mut degrees: Vec<_> = basis.iter().map(Cochain::degree).collect();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![0, 1]);
    }

    #[test]
    fn torus_betti_numbers() {
        let f = torus7();
        let basis = cohomology_basis_at(&f, f.len(), false).unwrap();
        let count = |d| basis.iter().filter(|c| c.degree() == d).count();
        assert_eq!((count(0), count(1), count(2)), (1, 2, 1));
        let euler: i64 = (0..3).map(|d| (-1i64).pow(d as u32) * f.indices_of_dim(d).len() as i64).sum();
        assert_eq!(euler, 1 - 2 + 1);
    }

    #[test]
    fn torus_products() {
        let f = torus7();
        let n = f.len();
        let o = Oracle::new(&f).unwrap();
        assert_eq!(o.image_rank(&ModuleSpec::Ordinary, n, n).unwrap(), 4);
        assert_eq!(o.image_rank(&ModuleSpec::KCup(2), n, n).unwrap(), 1);
        assert_eq!(o.image_rank(&ModuleSpec::KCup(3), n, n).unwrap(), 0);
        assert_eq!(o.barcode(&ModuleSpec::KCup(2)).unwrap().len(), 1);
        assert!(o.image_rank(&ModuleSpec::Ordinary, 3, 2).is_err());
    }

    #[test]
    fn constant_module_gives_one_full_bar() {
        let f = dimension_filtration(&[vec![0]]).unwrap();
        assert_eq!(oracle_barcode(&f, &ModuleSpec::Ordinary).unwrap(), vec![Bar::new(0, 0, 1)]);
    }

    #[test]
    fn verify_reports_dropped_bars() {
        let f = torus7();
        let mut bars = oracle_barcode(&f, &ModuleSpec::Ordinary).unwrap();
        assert!(verify(&f, &bars, &ModuleSpec::Ordinary).unwrap().is_empty());
        bars.pop();
        assert_eq!(verify(&f, &bars, &ModuleSpec::Ordinary).unwrap().len(), 1);
    }

    #[test]
    fn refuses_large_inputs() {
        let tris: Vec<Vec<u32>> = (0..60u32).map(|i| vec![i, i + 1, i + 2]).collect();
        let f = dimension_filtration(&tris).unwrap();
        assert!(f.len() > ORACLE_LIMIT);
        assert!(matches!(Oracle::new(&f), Err(Error::OracleTooLarge { .. })));
    }
}
