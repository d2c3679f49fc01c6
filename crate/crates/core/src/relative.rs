//! Relative persistent cup modules over the cochain complexes `C*(K, K_•)`.
//!
//! Relative cochains are cochains of `K` that vanish on the current `K_ℓ`, so
//! products are evaluated on the whole complex and the coboundary block
//! grows by one column `δσ_{ℓ+1}` per step instead of losing a row.

use crate::barcode::{Barcode, RepBar};
use crate::complex::Filtration;
use crate::driver::{self, DriverOptions, Mode, Right};
use crate::error::{Error, Result};
use crate::persistence::relative_persistent_cohomology;

fn positive(relative: &Barcode) -> Vec<&RepBar> {
    relative.iter().filter(|b| b.bar.degree > 0).collect()
}

pub fn rel_cup_pers_with(f: &Filtration, relative: &Barcode, opts: DriverOptions) -> Barcode {
    let out = driver::run(f, Mode::Relative, positive(relative), Right::Same, opts);
    debug_assert_eq!(out.check_structure(relative), Ok(()));
    out
}

pub fn rel_next_order_with(
    f: &Filtration,
    relative: &Barcode,
    previous: &Barcode,
    opts: DriverOptions,
) -> Barcode {
    let right = Right::Bars(previous.iter().collect());
    let out = driver::run(f, Mode::Relative, positive(relative), right, opts);
    debug_assert_eq!(out.check_structure(relative), Ok(()));
    out
}

/// Barcode of the persistent relative cup module.
pub fn rel_cup_pers(f: &Filtration) -> Barcode {
    rel_cup_pers_with(f, &relative_persistent_cohomology(f), DriverOptions::default())
}

/// Barcode of the persistent relative k-cup module.
pub fn rel_order_k_cup_pers(f: &Filtration, k: usize) -> Result<Barcode> {
    rel_order_k_cup_pers_with(f, k, DriverOptions::default())
}

pub fn rel_order_k_cup_pers_with(f: &Filtration, k: usize, opts: DriverOptions) -> Result<Barcode> {
    if k < 2 {
        return Err(Error::InvalidOrder(k));
    }
    let relative = relative_persistent_cohomology(f);
    let mut current = rel_cup_pers_with(f, &relative, opts);
    for _ in 3..=k {
        if current.is_empty() {
            break;
        }
        current = rel_next_order_with(f, &relative, &current, opts);
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{dimension_filtration, Simplex};

    #[test]
    fn single_vertex_is_empty() {
        let f = Filtration::new(vec![(0.0, Simplex::new(vec![0]).unwrap())]).unwrap();
        assert!(rel_cup_pers(&f).is_empty());
    }

    #[test]
    fn order_two_is_the_base_case() {
        let f = dimension_filtration(&[vec![0, 1, 2], vec![0, 2, 3], vec![1, 3]]).unwrap();
        assert_eq!(rel_order_k_cup_pers(&f, 2).unwrap().bars(), rel_cup_pers(&f).bars());
        assert!(rel_order_k_cup_pers(&f, 5).unwrap().is_empty());
        assert!(rel_order_k_cup_pers(&f, 0).is_err());
    }
}
