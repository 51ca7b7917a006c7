//! Fusion (Verlinde) algebras of affine Kac-Moody algebras.
//!
//! Structure constants are computed exactly with the Kac-Walton algorithm and
//! cross-checked against the Verlinde formula on the Kac-Peterson S-matrix.
//! Twisted algebras are handled through the transpose algebra at a shifted
//! level, or directly for `A_{2ℓ}^(2)`.

pub mod cartan;
pub mod chars;
pub mod error;
pub mod fusion;
pub mod lattice;
pub mod matrix;
pub mod modular;
pub mod quotient;
pub mod rational;
pub mod serial;
pub mod twisted;
pub mod types;
pub mod weights;
pub mod weyl;

pub use cartan::{affine_data, transpose, AffineAlgebraData, AffineType, Family, MLattice};
pub use error::{Error, Result};
pub use fusion::{FusionAlgebra, Provenance, SMatrixResult};
pub use modular::ModularAction;
pub use quotient::QuotientAlgebra;
pub use twisted::TwistedAlgebra;

pub use matrix::{ComplexMatrix, C64};
pub use rational::Q;
pub use types::{FiniteWeight, LevelWeight, SignedWeight};
pub use weights::{enum_weights, GradingGroup, WeightBasis, WeightVariant};
