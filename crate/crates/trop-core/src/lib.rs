//! Exact max-plus (tropical) calculus over the rationals.
//!
//! Everything here is computed in exact rational arithmetic: tropical
//! scalars, piecewise-linear functions with their roots and poles, the
//! Nevanlinna functionals m/N/T, tropical determinants and Casoratians,
//! tropical projective curves and hypersurfaces, Gondran-Minoux
//! (in)dependence, and the second-main-theorem / defect-relation harness.
//! The only floating point in the crate lives in [`nevanlinna::GrowthReport`],
//! which fits order and hyperorder estimates and is flagged approximate.

pub mod corpus;
pub mod error;
pub mod gm;
pub mod hypersurface;
pub mod nevanlinna;
pub mod plfun;
pub mod projective;
pub mod rational;
pub mod semiring;
pub mod smt;
pub mod troplinalg;

pub use error::{Error, Result};
pub use plfun::{CriticalPoint, PLFunction, Window};
pub use rational::Rational;
pub use semiring::TropValue;
