//! Persistent cup modules over Z/2.
//!
//! Given a simplex-wise filtration, the crate computes ordinary and relative
//! persistent cohomology with representatives, barcodes of the persistent
//! k-cup modules, partition modules and relative cup modules, and the
//! persistent cup-length. An independent brute-force oracle recomputes every
//! barcode from rank functions for cross-checking.

pub mod barcode;
pub mod complex;
pub mod cup;
pub mod curated;
mod driver;
pub mod error;
pub mod f2linalg;
pub mod geometry;
pub mod oracle;
pub mod partitions;
pub mod persistence;
pub mod relative;

pub use barcode::{Bar, BarDiff, BarRecord, Barcode, Diagram, RepBar};
pub use complex::{Filtration, InputFormat, Simplex};
pub use cup::{cup_length, cup_pers, cup_product, order_k_cup_pers, CupTower};
pub use driver::{DriverOptions, Reduction};
pub use error::{Error, Result};
pub use f2linalg::{Cochain, ColumnMatrix, F2Vector};
pub use geometry::PointCloud;
pub use oracle::ModuleSpec;
pub use partitions::{compute_partition_barcodes, enumerate_partitions, Partition};
pub use persistence::{persistent_cohomology, relative_persistent_cohomology};
pub use relative::{rel_cup_pers, rel_order_k_cup_pers};
