//! Incidence algebras of finite posets, their idealizations, and the
//! classification of involutions on them, in exact arithmetic over ℚ and 𝔽_p.

pub mod derivations;
pub mod error;
pub mod fia;
pub mod idealization;
pub mod involutions;
pub mod json;
pub mod linalg;
pub mod morphisms;
pub mod oracle;
pub mod poset;
pub mod scalar;
pub mod smith;

pub use error::{Error, Result};
pub use fia::{IncFn, IncidenceAlgebra};
pub use poset::{MapKind, Poset, PosetMap};
pub use scalar::{Field, Scalar, SquareClass};
