//! Curve combinatorics: words, homology, intersection numbers and enumeration.

pub mod enumerate;
pub mod homology;
pub mod intersect;
pub mod word;

pub use enumerate::{build_table, enumerate_classes, CurveEntry, CurveTable, EnumConfig};
pub use homology::{algebraic_int, basis_loop, is_nonseparating, pairing_matrix, HomologyBasis, HomologyClass, PairingMatrix};
pub use intersect::{geometric_int, geometric_int_signed, self_int_count, SignedCrossing};
pub use word::{CurveWord, Letter};
