//! Jordan classes, induced orbits, closures and strata of the disconnected
//! group SL(n) ⋊ <τ> over the algebraic closure of GF(2), computed exactly.

pub mod classes;
pub mod dimension;
pub mod error;
pub mod field;
pub mod group;
pub mod induction;
pub mod lattice;
pub mod matrix;
pub mod oracle;
mod packed;
pub mod strata;
pub mod poly;
pub mod torus;
pub mod weyl;

pub use classes::{class_of, families, JordanClassLabel};
pub use error::{Error, Result};
pub use field::Gf;
pub use group::{normal_form_tu_tau, tau_twist, GroupElement, JordanPair, NormalForm};
pub use induction::{induce, poset, InduceConfig, OrbitDescriptor, Poset};
pub use matrix::Matrix;
pub use oracle::{cross_validate, enumerate_group, load_or_build, FiniteGroupSnapshot, ValidationReport};
pub use poly::{split_char_poly, Poly, Splitting};
pub use strata::{e_map, strata_partition, StratumDescriptor};
pub use weyl::{IrrLabel, WeylGroup};
