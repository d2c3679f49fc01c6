//! Simplicial complexes with a simplex-wise filtration.
//!
//! Simplices are addressed by their insertion index `1..=n`; index `0` stands
//! for the empty complex `K_0`. Vertices are ordered numerically, which fixes
//! the vertex order used by the cup product.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::f2linalg::{Cochain, ColumnMatrix, F2Vector};
use crate::geometry::{self, PointCloud};

/// A simplex given by strictly increasing vertex ids.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    /// Builds a simplex from vertices in any order. Repeated vertices are rejected.
    pub fn new(mut vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidSimplex("a simplex needs at least one vertex".into()));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSimplex(format!("repeated vertex in {vertices:?}")));
        }
        Ok(Simplex(vertices))
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces, each obtained by dropping one vertex.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let skip = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..skip).map(move |drop| {
            Simplex(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != drop)
                    .map(|(_, &v)| v)
                    .collect(),
            )
        })
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl<const N: usize> TryFrom<[u32; N]> for Simplex {
    type Error = Error;

    fn try_from(v: [u32; N]) -> Result<Self> {
        Simplex::new(v.to_vec())
    }
}

/// How a filtration file should be interpreted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InputFormat {
    /// One simplex per line: `<value> <v0> <v1> ...`.
    Text,
    /// A symmetric distance matrix (CSV) turned into a Rips filtration.
    DistanceMatrix { max_dim: usize, threshold: f64 },
}

/// A simplex-wise filtration `∅ = K_0 ⊂ K_1 ⊂ ... ⊂ K_n`.
#[derive(Clone, Debug)]
pub struct Filtration {
    simplices: Vec<Simplex>,
    values: Vec<f64>,
    index_of: HashMap<Simplex, usize>,
    cofaces: Vec<Vec<usize>>,
    facets: Vec<Vec<usize>>,
    // splits[i - 1][p] = (front face {v0..vp}, back face {vp..vd}) of simplex i
    splits: Vec<Vec<(usize, usize)>>,
    by_dim: Vec<Vec<usize>>,
}

impl Filtration {
    /// Accepts entries already in a simplex-wise order.
    ///
    /// Every proper face must come earlier, no simplex may repeat, and values
    /// must be non-decreasing along the order.
    pub fn new(entries: Vec<(f64, Simplex)>) -> Result<Self> {
        let n = entries.len();
        let mut index_of = HashMap::with_capacity(n);
        let mut simplices = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        let mut facets = Vec::with_capacity(n);
        let mut last = f64::NEG_INFINITY;
        for (pos, (value, simplex)) in entries.into_iter().enumerate() {
            let index = pos + 1;
            if value.is_nan() {
                return Err(Error::InvalidSimplex(format!("NaN value for {simplex:?}")));
            }
            if value < last {
                return Err(Error::DecreasingValue {
                    simplex: simplex.0,
                    index,
                    value,
                });
            }
            last = value;
            let mut own = Vec::with_capacity(simplex.0.len());
            for face in simplex.facets() {
                match index_of.get(&face) {
                    Some(&j) => own.push(j),
                    None => {
                        return Err(Error::MissingFace {
                            simplex: simplex.0.clone(),
                            face: face.0,
                        })
                    }
                }
            }
            if index_of.insert(simplex.clone(), index).is_some() {
                return Err(Error::DuplicateSimplex(simplex.0));
            }
            facets.push(own);
            simplices.push(simplex);
            values.push(value);
        }
        Ok(Self::assemble(simplices, values, index_of, facets))
    }

    /// Refines an arbitrary listing into a simplex-wise filtration.
    ///
    /// Entries are stably sorted by `(value, dim, vertices)`, so the result is
    /// deterministic and refining a refined filtration changes nothing.
    pub fn refine(mut entries: Vec<(f64, Simplex)>) -> Result<Self> {
        if let Some((_, s)) = entries.iter().find(|(v, _)| v.is_nan()) {
            return Err(Error::InvalidSimplex(format!("NaN value for {s:?}")));
        }
        entries.sort_by(|(va, sa), (vb, sb)| {
            va.total_cmp(vb)
                .then(sa.dim().cmp(&sb.dim()))
                .then_with(|| sa.cmp(sb))
        });
        Self::new(entries)
    }

    /// Keeps a valid simplex-wise listing as given and refines anything else.
    pub fn from_listing(entries: Vec<(f64, Simplex)>) -> Result<Self> {
        match Self::new(entries.clone()) {
            Ok(f) => Ok(f),
            Err(Error::DuplicateSimplex(s)) => Err(Error::DuplicateSimplex(s)),
            Err(_) => Self::refine(entries),
        }
    }

    fn assemble(
        simplices: Vec<Simplex>,
        values: Vec<f64>,
        index_of: HashMap<Simplex, usize>,
        facets: Vec<Vec<usize>>,
    ) -> Self {
        let n = simplices.len();
        let mut cofaces = vec![Vec::new(); n];
        for (pos, fs) in facets.iter().enumerate() {
            for &j in fs {
                cofaces[j - 1].push(pos + 1);
            }
        }
        let max_dim = simplices.iter().map(Simplex::dim).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); if n == 0 { 0 } else { max_dim + 1 }];
        let mut splits = Vec::with_capacity(n);
        for (pos, s) in simplices.iter().enumerate() {
            by_dim[s.dim()].push(pos + 1);
            let v = &s.0;
            let row = (0..v.len())
                .map(|p| {
                    let front = Simplex(v[..=p].to_vec());
                    let back = Simplex(v[p..].to_vec());
                    (index_of[&front], index_of[&back])
                })
                .collect();
            splits.push(row);
        }
        Filtration {
            simplices,
            values,
            index_of,
            cofaces,
            facets,
            splits,
            by_dim,
        }
    }

    /// Number of simplices `n`.
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Top dimension of the complex (0 for an empty filtration).
    pub fn dim(&self) -> usize {
        self.by_dim.len().saturating_sub(1)
    }

    /// Simplex inserted at `index` (1-based).
    pub fn simplex(&self, index: usize) -> &Simplex {
        &self.simplices[index - 1]
    }

    pub fn value(&self, index: usize) -> f64 {
        self.values[index - 1]
    }

    /// Filtration values in insertion order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn index_of(&self, simplex: &Simplex) -> Option<usize> {
        self.index_of.get(simplex).copied()
    }

    pub fn dim_of(&self, index: usize) -> usize {
        self.simplices[index - 1].dim()
    }

    /// Indices of all simplices of dimension `d`, ascending.
    pub fn indices_of_dim(&self, d: usize) -> &[usize] {
        self.by_dim.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Indices of the codimension-one faces of the simplex at `index`.
    pub fn facet_indices(&self, index: usize) -> &[usize] {
        &self.facets[index - 1]
    }

    /// Indices of the codimension-one cofaces of the simplex at `index`.
    pub fn coface_indices(&self, index: usize) -> Result<&[usize]> {
        if index == 0 || index > self.len() {
            return Err(Error::IndexOutOfRange {
                index,
                n: self.len(),
            });
        }
        Ok(&self.cofaces[index - 1])
    }

    /// Front face `{v0..vp}` and back face `{vp..vd}` of the simplex at `index`.
    pub fn split(&self, index: usize, p: usize) -> (usize, usize) {
        self.splits[index - 1][p]
    }

    /// Coboundary of a single simplex as a cochain on the whole complex.
    pub fn coboundary_of(&self, index: usize) -> Cochain {
        let mut support = F2Vector::new(self.len() + 1);
        for &j in &self.cofaces[index - 1] {
            support.set(j);
        }
        Cochain::new(self.dim_of(index) + 1, support)
    }

    /// Coboundary of an arbitrary cochain, computed over the full complex.
    pub fn coboundary(&self, c: &Cochain) -> Cochain {
        let mut out = F2Vector::new(self.len() + 1);
        for i in c.support().iter_ones() {
            for &j in &self.cofaces[i - 1] {
                out.toggle(j);
            }
        }
        Cochain::new(c.degree() + 1, out)
    }

    /// The coboundary matrix: column `j` holds the cofaces of simplex `j`.
    pub fn coboundary_matrix(&self) -> ColumnMatrix {
        let mut m = ColumnMatrix::new(self.len());
        for j in 1..=self.len() {
            m.push_coboundary(j, self.coboundary_of(j).into_support());
        }
        m
    }

    /// Value-space position of index `i` on the grid: `a_i`, with
    /// `a_0 = -inf` and `a_{n+1} = +inf`.
    pub fn grid_value(&self, i: i64) -> f64 {
        if i <= 0 {
            f64::NEG_INFINITY
        } else if i as usize > self.len() {
            f64::INFINITY
        } else {
            self.values[i as usize - 1]
        }
    }

    /// Reads a filtration from disk.
    pub fn load(path: &Path, format: InputFormat) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let name = path.display().to_string();
        match format {
            InputFormat::Text => Self::from_listing(parse_text(&name, &text)?),
            InputFormat::DistanceMatrix { max_dim, threshold } => {
                let cloud = PointCloud::distance_matrix(geometry::parse_csv_rows(&name, &text)?)?;
                geometry::rips_filtration(&cloud, max_dim, threshold)
            }
        }
    }

    /// Writes the text format, one simplex per line in insertion order.
    pub fn write_text(&self, mut out: impl Write, header: &str) -> std::io::Result<()> {
        for line in header.lines() {
            writeln!(out, "# {line}")?;
        }
        for (value, s) in self.values.iter().zip(&self.simplices) {
            write!(out, "{value}")?;
            for v in s.vertices() {
                write!(out, " {v}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn to_text(&self, header: &str) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf, header).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("text output is UTF-8")
    }
}

/// Parses the text filtration format into an unordered listing.
pub fn parse_text(name: &str, text: &str) -> Result<Vec<(f64, Simplex)>> {
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: name.to_string(),
            line: lineno + 1,
            message,
        };
        let mut fields = line.split_whitespace();
        let value: f64 = fields
            .next()
            .unwrap()
            .parse()
            .map_err(|e| err(format!("bad filtration value: {e}")))?;
        if value.is_nan() {
            return Err(err("filtration value is NaN".into()));
        }
        let vertices = fields
            .map(|t| t.parse::<u32>().map_err(|e| err(format!("bad vertex {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let simplex = Simplex::new(vertices).map_err(|e| err(e.to_string()))?;
        entries.push((value, simplex));
    }
    Ok(entries)
}

/// Convenience: a filtration whose values are the simplex dimensions, listed
/// by dimension and then lexicographically.
pub fn dimension_filtration(facets: &[Vec<u32>]) -> Result<Filtration> {
    let mut all = std::collections::BTreeSet::new();
    for f in facets {
        let s = Simplex::new(f.clone())?;
        let v = s.vertices().to_vec();
        for mask in 1u32..(1 << v.len()) {
            let sub: Vec<u32> = (0..v.len()).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).collect();
            all.insert(Simplex(sub));
        }
    }
    Filtration::refine(all.into_iter().map(|s| (s.dim() as f64, s)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn parse_single_edge() {
        let entries = parse_text("t", "0.0 0\n0.0 1\n1.0 0 1\n").unwrap();
        let f = Filtration::from_listing(entries).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.simplex(3), &s(&[0, 1]));
        assert_eq!(f.coface_indices(1).unwrap(), &[3]);
        assert_eq!(f.coface_indices(2).unwrap(), &[3]);
        assert!(f.coface_indices(3).unwrap().is_empty());
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let entries = parse_text("t", "# header\n\n0 0 # a vertex\n  \n").unwrap();
        assert_eq!(entries.len(), 1);
    }

    #[test]
    fn parse_error_names_the_line() {
        let err = parse_text("f.flt", "0 0\nx 1\n").unwrap_err();
        assert!(err.to_string().starts_with("f.flt:2:"), "{err}");
        let err = parse_text("f.flt", "0 0 0\n").unwrap_err();
        assert!(err.to_string().contains("f.flt:1"), "{err}");
    }

    #[test]
    fn hollow_triangle_is_refined() {
        let text = "1 0 1\n1 1 2\n1 0 2\n0 2\n0 1\n0 0\n";
        let f = Filtration::from_listing(parse_text("t", text).unwrap()).unwrap();
        assert_eq!(f.len(), 6);
        assert_eq!(f.values(), &[0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        assert_eq!(f.simplex(1), &s(&[0]));
        assert_eq!(f.simplex(4), &s(&[0, 1]));
        assert_eq!(f.simplex(6), &s(&[1, 2]));
    }

    #[test]
    fn refinement_is_idempotent() {
        let text = "1 0 1\n1 1 2\n2 0 1 2\n1 0 2\n0 2\n0 1\n0 0\n";
        let once = Filtration::refine(parse_text("t", text).unwrap()).unwrap();
        let listing: Vec<_> = once
            .values()
            .iter()
            .copied()
            .zip(once.simplices().iter().cloned())
            .collect();
        let twice = Filtration::refine(listing.clone()).unwrap();
        let kept = Filtration::from_listing(listing).unwrap();
        assert_eq!(once.simplices(), twice.simplices());
        assert_eq!(once.values(), twice.values());
        assert_eq!(once.simplices(), kept.simplices());
    }

    #[test]
    fn missing_face_is_reported() {
        let err = Filtration::new(vec![(0.0, s(&[0])), (1.0, s(&[0, 1]))]).unwrap_err();
        match err {
            Error::MissingFace { simplex, face } => {
                assert_eq!(simplex, vec![0, 1]);
                assert_eq!(face, vec![1]);
            }
            other => panic!("unexpected {other}"),
        }
        // Refinement cannot invent a face either.
        assert!(Filtration::from_listing(vec![(0.0, s(&[0])), (1.0, s(&[0, 1]))]).is_err());
    }

    #[test]
    fn duplicates_are_rejected() {
        let err = Filtration::from_listing(vec![(0.0, s(&[0])), (0.0, s(&[0]))]).unwrap_err();
        assert!(matches!(err, Error::DuplicateSimplex(_)));
        assert!(Simplex::new(vec![1, 1]).is_err());
    }

    #[test]
    fn decreasing_values_are_rejected_in_strict_mode() {
        let err = Filtration::new(vec![(1.0, s(&[0])), (0.0, s(&[1]))]).unwrap_err();
        assert!(matches!(err, Error::DecreasingValue { .. }));
    }

    #[test]
    fn coface_index_range() {
        let f = dimension_filtration(&[vec![0, 1, 2]]).unwrap();
        assert!(f.coface_indices(0).is_err());
        assert!(f.coface_indices(8).is_err());
        let e01 = f.index_of(&s(&[0, 1])).unwrap();
        let tri = f.index_of(&s(&[0, 1, 2])).unwrap();
        assert_eq!(f.coface_indices(e01).unwrap(), &[tri]);
    }

    #[test]
    fn splits_follow_vertex_order() {
        let f = dimension_filtration(&[vec![0, 1, 2]]).unwrap();
        let tri = f.index_of(&s(&[0, 1, 2])).unwrap();
        let (front, back) = f.split(tri, 1);
        assert_eq!(f.simplex(front), &s(&[0, 1]));
        assert_eq!(f.simplex(back), &s(&[1, 2]));
        let (front, back) = f.split(tri, 0);
        assert_eq!(f.simplex(front), &s(&[0]));
        assert_eq!(f.simplex(back), &s(&[0, 1, 2]));
    }

    #[test]
    fn coboundary_columns_point_forward() {
        let f = dimension_filtration(&[vec![0, 1, 2, 3]]).unwrap();
        let m = f.coboundary_matrix();
        for j in 1..=f.len() {
            let col = m.column_by_key(j as u64).map(|c| c.vector().clone());
            if let Some(col) = col {
                assert!(col.iter_ones().all(|i| i > j));
            }
        }
    }

    #[test]
    fn single_vertex_coboundary_is_zero() {
        let f = Filtration::new(vec![(0.0, s(&[7]))]).unwrap();
        let m = f.coboundary_matrix();
        assert_eq!(m.num_nonzero(), 0);
        assert!(f.coboundary_of(1).is_zero());
    }

    #[test]
    fn text_round_trip() {
        let f = dimension_filtration(&[vec![0, 1, 2], vec![2, 3]]).unwrap();
        let text = f.to_text("tiny");
        let g = Filtration::from_listing(parse_text("t", &text).unwrap()).unwrap();
        assert_eq!(f.simplices(), g.simplices());
        assert_eq!(f.values(), g.values());
    }
}
