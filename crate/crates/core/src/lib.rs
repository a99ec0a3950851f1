//! Multiple Dedekind zeta values over ℚ and quadratic fields, computed as nested
//! lattice sums over unimodular simple cones.

#[cfg(feature = "cli")]
pub mod cli;
pub mod cone;
pub mod error;
mod extrapolate;
pub mod field;
mod lattice;
pub mod mdzv;
mod nested;
pub mod oracle;
pub mod series;
pub mod sum;
pub mod verify;

pub use cone::{fundamental_domain, verify_partition, Cone, ConeDecomposition, PartitionReport, SimpleMode};
pub use error::{MdzError, Result};
pub use field::{BasisKind, FieldElement, QuadField, Signature};
pub use mdzv::{
    eisenstein_kronecker, eisenstein_partial, enumerate_shuffles, multiple_eisenstein, mdzv_eval, mzv_eval, shuffle_to_exponents,
    EvalMode, ExponentMatrix, MdzvSpec, ShuffleSpec, ShuffleVariant,
};
pub use series::{
    dedekind_polylog, dedekind_zeta_via_cones, f0_product, f0_sum, f_multi, fm, EvalParams, SectorPoint, SumResult,
    TailKind,
};
