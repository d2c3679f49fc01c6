//! The product loop shared by every cup-module algorithm.
//!
//! The loop walks the index from `n` down to `0`, keeps a column matrix whose
//! left block spans the coboundaries at the current index and whose right
//! block holds product cocycles, and emits a bar whenever a product column
//! reduces to zero.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::barcode::{Bar, Barcode, RepBar};
use crate::complex::Filtration;
use crate::cup::cup_product;
use crate::f2linalg::{ColumnMatrix, Origin};

/// How the column matrix is kept reduced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Reduction {
    /// Resettle only the columns touched by each restriction or insertion.
    #[default]
    Incremental,
    /// Modify the matrix plainly and rerun a full reduction afterwards.
    Literal,
}

/// Knobs for the product drivers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DriverOptions {
    pub reduction: Reduction,
    /// Shuffles the factor lists (and so the order of same-birth
    /// representatives) with this seed.
    pub shuffle_seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    Absolute,
    Relative,
}

pub(crate) enum Right<'a> {
    /// Pair the left factors with themselves; each unordered pair once.
    Same,
    Bars(Vec<&'a RepBar>),
}

pub(crate) fn run(
    f: &Filtration,
    mode: Mode,
    left: Vec<&RepBar>,
    right: Right<'_>,
    opts: DriverOptions,
) -> Barcode {
    let n = f.len();
    let max_dim = f.dim();
    let mut left = left;
    let mut right = match right {
        Right::Same => None,
        Right::Bars(r) => Some(r),
    };
    if let Some(seed) = opts.shuffle_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        left.shuffle(&mut rng);
        if let Some(r) = right.as_mut() {
            r.shuffle(&mut rng);
        }
    }
    let by_birth = |bars: &[&RepBar]| {
        let mut table: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for (k, b) in bars.iter().enumerate() {
            table[b.bar.birth].push(k);
        }
        table
    };
    let left_births = by_birth(&left);
    let right_births = right.as_deref().map(by_birth);

    let mut m = ColumnMatrix::new(n);
    if mode == Mode::Absolute {
        for j in 1..=n {
            m.push_coboundary(j, f.coboundary_of(j).into_support());
        }
        m.reduce();
    }

    let mut out: Vec<RepBar> = Vec::new();
    let mut alive_left: Vec<usize> = Vec::new();
    let mut alive_right: Vec<usize> = Vec::new();

    for l in (0..=n).rev() {
        if l < n {
            let killed = match (mode, opts.reduction) {
                (Mode::Absolute, Reduction::Incremental) => m.zero_row_reduced(l + 1),
                (Mode::Absolute, Reduction::Literal) => {
                    m.zero_row(l + 1);
                    m.reduce()
                }
                (Mode::Relative, Reduction::Incremental) => {
                    m.insert_column(l + 1, f.coboundary_of(l + 1).into_support())
                }
                (Mode::Relative, Reduction::Literal) => {
                    m.push_coboundary(l + 1, f.coboundary_of(l + 1).into_support());
                    m.reduce()
                }
            };
            emit(&mut out, killed, l as i64);
        }

        let li = l as i64;
        alive_left.retain(|&k| left[k].bar.death != li);
        if let Some(r) = &right {
            alive_right.retain(|&k| r[k].bar.death != li);
        }

        let prefix = match mode {
            Mode::Absolute => l,
            Mode::Relative => n,
        };
        let try_product = |m: &mut ColumnMatrix, x: &RepBar, y: &RepBar| {
            if x.rep.degree() + y.rep.degree() > max_dim {
                return;
            }
            let c = cup_product(f, &x.rep, &y.rep, prefix);
            if c.is_zero() {
                return;
            }
            if !m.is_reduced() {
                let killed = m.reduce();
                debug_assert!(killed.is_empty(), "appended columns are independent");
            }
            if m.is_independent(c.support()) {
                let killed = m.append(c.clone(), l, c).expect("nonzero product");
                debug_assert!(killed.is_empty(), "independent column cannot vanish");
            }
        };

        match (&right, &right_births) {
            (None, _) => {
                for &k in &left_births[l] {
                    alive_left.push(k);
                    for &j in &alive_left {
                        try_product(&mut m, left[k], left[j]);
                    }
                }
            }
            (Some(right), Some(right_births)) => {
                let old_left = alive_left.len();
                alive_right.extend(right_births[l].iter().copied());
                for &k in &left_births[l] {
                    alive_left.push(k);
                    for &j in &alive_right {
                        try_product(&mut m, left[k], right[j]);
                    }
                }
                for &j in &right_births[l] {
                    for &k in &alive_left[..old_left] {
                        try_product(&mut m, left[k], right[j]);
                    }
                }
            }
            _ => unreachable!(),
        }
    }

    if mode == Mode::Relative {
        if !m.is_reduced() {
            emit(&mut out, m.reduce(), 0);
        }
        let survivors: Vec<_> = m.columns().cloned().collect();
        emit(&mut out, survivors, -1);
    }
    Barcode::new(out)
}

fn emit(out: &mut Vec<RepBar>, columns: Vec<crate::f2linalg::Column>, death: i64) {
    for col in columns {
        if let Origin::Product { birth, rep } = col.origin() {
            out.push(RepBar {
                bar: Bar::new(rep.degree(), death, *birth),
                rep: rep.clone(),
            });
        }
    }
}
