//! Linear algebra over the two-element field.
//!
//! Vectors are packed bitsets indexed by simplex index, so bit `i` is the
//! coefficient of the `i`-th simplex and bit `0` is never used. A
//! [`ColumnMatrix`] keeps an ordered set of such columns together with pivot
//! bookkeeping (pivot = largest index in the support).

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A fixed-length bit vector over F2.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct F2Vector {
    words: Vec<u64>,
    len: usize,
}

impl F2Vector {
    pub fn new(len: usize) -> Self {
        F2Vector {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::new(len);
        for i in indices {
            v.toggle(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn clear(&mut self, i: usize) {
        if i < self.len {
            self.words[i / WORD] &= !(1 << (i % WORD));
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Largest set index.
    pub fn max_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * WORD + (WORD - 1 - w.leading_zeros() as usize))
    }

    /// Smallest set index.
    pub fn min_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * WORD + t)
            })
        })
    }

    pub fn xor_assign(&mut self, other: &F2Vector) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Clears every bit above `k`.
    pub fn truncate(&mut self, k: usize) {
        let keep = k + 1;
        if keep >= self.len {
            return;
        }
        let full = keep / WORD;
        let rem = keep % WORD;
        if rem > 0 {
            self.words[full] &= (1u64 << rem) - 1;
            self.words[full + 1..].iter_mut().for_each(|w| *w = 0);
        } else {
            self.words[full..].iter_mut().for_each(|w| *w = 0);
        }
    }

    pub fn truncated(&self, k: usize) -> Self {
        let mut v = self.clone();
        v.truncate(k);
        v
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter_ones()).finish()
    }
}

/// A cochain: a degree together with a support set of simplex indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    degree: usize,
    support: F2Vector,
}

impl Cochain {
    pub fn new(degree: usize, support: F2Vector) -> Self {
        Cochain { degree, support }
    }

    pub fn zero(degree: usize, n: usize) -> Self {
        Cochain::new(degree, F2Vector::new(n + 1))
    }

    pub fn from_indices(degree: usize, n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        Cochain::new(degree, F2Vector::from_indices(n + 1, indices))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn support(&self) -> &F2Vector {
        &self.support
    }

    pub fn into_support(self) -> F2Vector {
        self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_zero()
    }

    /// Restriction to the prefix complex `K_k`.
    pub fn restrict(&self, k: usize) -> Cochain {
        Cochain::new(self.degree, self.support.truncated(k))
    }

    pub fn indices(&self) -> Vec<usize> {
        self.support.iter_ones().collect()
    }

    pub fn add(&mut self, other: &Cochain) {
        self.support.xor_assign(&other.support);
    }
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}{:?}", self.degree, self.support)
    }
}

/// Where a column of a [`ColumnMatrix`] came from.
#[derive(Clone, Debug)]
pub enum Origin {
    Coboundary,
    Product { birth: usize, rep: Cochain },
}

#[derive(Clone, Debug)]
pub struct Column {
    key: u64,
    vector: F2Vector,
    origin: Origin,
}

impl Column {
    /// Position key; columns are ordered left to right by key.
    pub fn key(&self) -> u64 {
        self.key
    }

    pub fn vector(&self) -> &F2Vector {
        &self.vector
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn pivot(&self) -> Option<usize> {
        self.vector.max_one()
    }
}

/// Keys at or above this value belong to product columns.
pub const PRODUCT_KEY_BASE: u64 = 1 << 40;

/// Ordered F2 columns with left-to-right reduction and max-index pivots.
///
/// Coboundary columns use their simplex index as key; appended product
/// columns get increasing keys above [`PRODUCT_KEY_BASE`], so they always sit
/// to the right of the coboundary block.
#[derive(Clone, Debug)]
pub struct ColumnMatrix {
    rows: usize,
    slots: Vec<Option<Column>>,
    slot_of_key: HashMap<u64, usize>,
    owner: Vec<Option<usize>>,
    reduced: bool,
    next_seq: u64,
    audit: Option<Vec<(u64, u64)>>,
}

impl ColumnMatrix {
    /// Empty matrix whose columns have rows `1..=n`.
    pub fn new(n: usize) -> Self {
        ColumnMatrix {
            rows: n,
            slots: Vec::new(),
            slot_of_key: HashMap::new(),
            owner: vec![None; n + 1],
            reduced: true,
            next_seq: 0,
            audit: None,
        }
    }

    /// Starts recording every column addition as `(source key, target key)`.
    pub fn enable_audit(&mut self) {
        self.audit.get_or_insert_with(Vec::new);
    }

    pub fn audit_log(&self) -> Option<&[(u64, u64)]> {
        self.audit.as_deref()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Number of stored columns, zero columns included.
    pub fn num_columns(&self) -> usize {
        self.slot_of_key.len()
    }

    pub fn num_nonzero(&self) -> usize {
        self.columns().filter(|c| !c.vector.is_zero()).count()
    }

    /// Columns in left-to-right order.
    pub fn columns(&self) -> impl Iterator<Item = &Column> {
        let mut cols: Vec<&Column> = self.slots.iter().flatten().collect();
        cols.sort_by_key(|c| c.key);
        cols.into_iter()
    }

    pub fn column_by_key(&self, key: u64) -> Option<&Column> {
        self.slot_of_key.get(&key).and_then(|&s| self.slots[s].as_ref())
    }

    fn check_len(&self, v: &F2Vector) {
        assert_eq!(v.len(), self.rows + 1, "column length must be n + 1");
    }

    fn store(&mut self, column: Column) -> usize {
        let key = column.key;
        assert!(
            !self.slot_of_key.contains_key(&key),
            "duplicate column key {key}"
        );
        let slot = self.slots.len();
        self.slots.push(Some(column));
        self.slot_of_key.insert(key, slot);
        slot
    }

    fn take(&mut self, slot: usize) -> Column {
        let col = self.slots[slot].take().expect("live slot");
        self.slot_of_key.remove(&col.key);
        col
    }

    fn key(&self, slot: usize) -> u64 {
        self.slots[slot].as_ref().expect("live slot").key
    }

    fn add_into(&mut self, src: usize, tgt: usize) {
        let (src_key, tgt_key) = (self.key(src), self.key(tgt));
        debug_assert!(src_key < tgt_key, "additions must go left to right");
        let mut target = self.slots[tgt].take().expect("live slot");
        target
            .vector
            .xor_assign(&self.slots[src].as_ref().expect("live slot").vector);
        self.slots[tgt] = Some(target);
        if let Some(log) = &mut self.audit {
            log.push((src_key, tgt_key));
        }
    }

    /// Pushes a column without reducing; the matrix is marked unreduced.
    pub fn push_coboundary(&mut self, key: usize, vector: F2Vector) {
        self.check_len(&vector);
        assert!((key as u64) < PRODUCT_KEY_BASE, "coboundary key too large");
        self.store(Column {
            key: key as u64,
            vector,
            origin: Origin::Coboundary,
        });
        self.reduced = false;
    }

    /// Inserts a coboundary column at its key position. If the matrix is
    /// reduced the new column is settled immediately and any columns that
    /// become zero are removed and returned.
    pub fn insert_column(&mut self, key: usize, vector: F2Vector) -> Vec<Column> {
        if !self.reduced {
            self.push_coboundary(key, vector);
            return Vec::new();
        }
        self.check_len(&vector);
        let slot = self.store(Column {
            key: key as u64,
            vector,
            origin: Origin::Coboundary,
        });
        self.settle(slot)
    }

    /// Appends a nonzero product column on the right.
    pub fn append(&mut self, c: Cochain, birth: usize, rep: Cochain) -> Result<Vec<Column>> {
        if c.is_zero() {
            return Err(Error::ZeroColumn);
        }
        self.check_len(c.support());
        let key = PRODUCT_KEY_BASE + self.next_seq;
        self.next_seq += 1;
        let slot = self.store(Column {
            key,
            vector: c.into_support(),
            origin: Origin::Product { birth, rep },
        });
        if self.reduced {
            Ok(self.settle(slot))
        } else {
            Ok(Vec::new())
        }
    }

    // Brings the column at `slot` into reduced position. Every addition goes
    // from the column with the smaller key into the one with the larger key.
    fn settle(&mut self, slot: usize) -> Vec<Column> {
        let mut killed = Vec::new();
        let mut active = slot;
        loop {
            let pivot = self.slots[active].as_ref().expect("live slot").pivot();
            let Some(p) = pivot else {
                killed.push(self.take(active));
                break;
            };
            match self.owner[p] {
                None => {
                    self.owner[p] = Some(active);
                    break;
                }
                Some(o) if o == active => break,
                Some(o) if self.key(o) < self.key(active) => self.add_into(o, active),
                Some(o) => {
                    self.add_into(active, o);
                    self.owner[p] = Some(active);
                    active = o;
                }
            }
        }
        killed
    }

    /// Full left-to-right reduction. Columns that are zero afterwards are
    /// removed and returned.
    pub fn reduce(&mut self) -> Vec<Column> {
        self.owner.iter_mut().for_each(|o| *o = None);
        let mut order: Vec<usize> = (0..self.slots.len())
            .filter(|&s| self.slots[s].is_some())
            .collect();
        order.sort_by_key(|&s| self.key(s));
        let mut killed = Vec::new();
        for slot in order {
            killed.extend(self.settle(slot));
        }
        self.reduced = true;
        killed
    }

    /// Removes entry `i` from every column. Invalidates the reduced state.
    pub fn zero_row(&mut self, i: usize) {
        for col in self.slots.iter_mut().flatten() {
            col.vector.clear(i);
        }
        self.reduced = false;
    }

    /// Removes entry `i` from every column and restores the reduced state by
    /// resettling the only column whose pivot moved.
    pub fn zero_row_reduced(&mut self, i: usize) -> Vec<Column> {
        if !self.reduced {
            self.zero_row(i);
            return self.reduce();
        }
        for col in self.slots.iter_mut().flatten() {
            col.vector.clear(i);
        }
        match self.owner.get_mut(i).and_then(Option::take) {
            Some(slot) => self.settle(slot),
            None => Vec::new(),
        }
    }

    /// Remainder of `v` after elimination against the pivots.
    ///
    /// Panics if the matrix is not reduced.
    pub fn reduce_against(&self, v: &F2Vector) -> F2Vector {
        assert!(self.reduced, "matrix must be reduced");
        self.check_len(v);
        let mut r = v.clone();
        while let Some(p) = r.max_one() {
            match self.owner[p] {
                Some(o) => r.xor_assign(&self.slots[o].as_ref().expect("live slot").vector),
                None => break,
            }
        }
        r
    }

    /// True iff `v` is not in the span of the columns.
    pub fn is_independent(&self, v: &F2Vector) -> bool {
        !self.reduce_against(v).is_zero()
    }

    /// Rank of the column span. Panics if the matrix is not reduced.
    pub fn rank(&self) -> usize {
        assert!(self.reduced, "matrix must be reduced");
        self.num_nonzero()
    }
}
