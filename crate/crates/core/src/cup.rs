//! Simplicial cup products, persistent k-cup modules and persistent cup-length.

use std::collections::BTreeMap;

use crate::barcode::{Barcode, RepBar};
use crate::complex::Filtration;
use crate::driver::{self, DriverOptions, Mode, Right};
use crate::error::{Error, Result};
use crate::f2linalg::{Cochain, F2Vector};
use crate::persistence::persistent_cohomology;

/// Cup product of two cochains on the prefix complex `K_{active_prefix}`.
///
/// On a simplex `{v0 < ... < v(p+q)}` the product is
/// `xi({v0..vp}) * zeta({vp..v(p+q)})`.
pub fn cup_product(f: &Filtration, xi: &Cochain, zeta: &Cochain, active_prefix: usize) -> Cochain {
    let (p, q) = (xi.degree(), zeta.degree());
    let mut out = F2Vector::new(f.len() + 1);
    if xi.is_zero() || zeta.is_zero() {
        return Cochain::new(p + q, out);
    }
    let (x, z) = (xi.support(), zeta.support());
    for &s in f.indices_of_dim(p + q) {
        if s > active_prefix {
            break;
        }
        let (front, back) = f.split(s, p);
        if x.get(front) && z.get(back) {
            out.set(s);
        }
    }
    Cochain::new(p + q, out)
}

fn positive(ordinary: &Barcode) -> Vec<&RepBar> {
    ordinary.iter().filter(|b| b.bar.degree > 0).collect()
}

/// Barcode of the persistent 2-cup module from a precomputed ordinary barcode.
pub fn cup_pers_with(f: &Filtration, ordinary: &Barcode, opts: DriverOptions) -> Barcode {
    let out = driver::run(f, Mode::Absolute, positive(ordinary), Right::Same, opts);
    debug_assert_eq!(out.check_structure(ordinary), Ok(()));
    out
}

/// One step of the k-cup tower: pairs the positive-degree ordinary bars with
/// the bars of the `(k-1)`-cup barcode.
pub fn next_order_with(
    f: &Filtration,
    ordinary: &Barcode,
    previous: &Barcode,
    opts: DriverOptions,
) -> Barcode {
    let right = Right::Bars(previous.iter().collect());
    let out = driver::run(f, Mode::Absolute, positive(ordinary), right, opts);
    debug_assert_eq!(out.check_structure(ordinary), Ok(()));
    out
}

/// Barcode of the persistent cup module `im H*(⌣ K_•)`.
pub fn cup_pers(f: &Filtration) -> Barcode {
    cup_pers_with(f, &persistent_cohomology(f), DriverOptions::default())
}

/// Barcode of the persistent k-cup module.
pub fn order_k_cup_pers(f: &Filtration, k: usize) -> Result<Barcode> {
    order_k_cup_pers_with(f, k, DriverOptions::default())
}

pub fn order_k_cup_pers_with(f: &Filtration, k: usize, opts: DriverOptions) -> Result<Barcode> {
    if k < 2 {
        return Err(Error::InvalidOrder(k));
    }
    let ordinary = persistent_cohomology(f);
    let mut current = cup_pers_with(f, &ordinary, opts);
    for _ in 3..=k {
        if current.is_empty() {
            break;
        }
        current = next_order_with(f, &ordinary, &current, opts);
    }
    Ok(current)
}

/// The ordinary barcode together with every k-cup barcode for `k = 2..=dim`.
#[derive(Clone, Debug)]
pub struct CupTower {
    n: usize,
    ordinary: Barcode,
    cups: BTreeMap<usize, Barcode>,
}

impl CupTower {
    pub fn compute(f: &Filtration, opts: DriverOptions) -> Self {
        let ordinary = persistent_cohomology(f);
        let mut cups = BTreeMap::new();
        if f.dim() >= 2 {
            let mut current = cup_pers_with(f, &ordinary, opts);
            cups.insert(2, current.clone());
            for k in 3..=f.dim() {
                if !current.is_empty() {
                    current = next_order_with(f, &ordinary, &current, opts);
                }
                cups.insert(k, current.clone());
            }
        }
        CupTower {
            n: f.len(),
            ordinary,
            cups,
        }
    }

    pub fn from_parts(n: usize, ordinary: Barcode, cups: BTreeMap<usize, Barcode>) -> Self {
        CupTower { n, ordinary, cups }
    }

    pub fn ordinary(&self) -> &Barcode {
        &self.ordinary
    }

    pub fn cups(&self) -> &BTreeMap<usize, Barcode> {
        &self.cups
    }

    pub fn order(&self, k: usize) -> Option<&Barcode> {
        self.cups.get(&k)
    }

    /// Persistent cup-length of the interval `[a, b]`.
    pub fn cup_length(&self, a: usize, b: usize) -> Result<usize> {
        cup_length(&self.cups, &self.ordinary, self.n, a, b)
    }
}

/// Largest `k` whose k-cup barcode has a bar containing `[a, b]`; `1` when
/// only a positive-degree ordinary bar does, `0` otherwise.
pub fn cup_length(
    barcodes: &BTreeMap<usize, Barcode>,
    ordinary: &Barcode,
    n: usize,
    a: usize,
    b: usize,
) -> Result<usize> {
    if a > b {
        return Err(Error::InvalidInterval {
            a: a as i64,
            b: b as i64,
        });
    }
    if b > n {
        return Err(Error::IndexOutOfRange { index: b, n });
    }
    let covers = |bc: &Barcode| bc.iter().any(|rb| rb.bar.contains(a, b));
    if let Some((&k, _)) = barcodes.iter().rev().find(|(_, bc)| covers(bc)) {
        return Ok(k);
    }
    let ordinary_hit = ordinary
        .iter()
        .any(|rb| rb.bar.degree > 0 && rb.bar.contains(a, b));
    Ok(usize::from(ordinary_hit))
}
