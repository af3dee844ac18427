//! Truncated matrix representations of deformed su(1,1)/su(2) algebras
//! (quadratic, Higgs cubic, q-deformed), their canonical conjugate
//! operators, and three coherent-state families built on them.

pub mod algebra;
pub mod cli;
pub mod coherent;
pub mod config;
pub mod conjugate;
pub mod error;
pub mod expm;
pub mod matrix;
pub mod repr;
pub mod table;
pub mod verify;

pub use algebra::{AlgebraKind, AlgebraSpec};
pub use coherent::{CoherentOptions, CoherentStateVector, Family, PerelomovGenerator};
pub use conjugate::{ConjugatePair, LieMap, LieTarget};
pub use error::{Error, Result};
pub use matrix::OperatorMatrix;
pub use repr::{RepKind, Representation};
pub use verify::VerificationReport;
