//! Finite-field towers, linearized polynomials over them, and explicit
//! compositional inverses of several families of permutation polynomials.

pub mod error;
pub mod families;
pub mod field;
pub mod linalg;
pub mod linearized;
pub mod literal;
pub mod poly;
pub mod subspace;

pub use error::{Error, Result};
pub use field::{Elem, FieldTower};
pub use linalg::Matrix;
pub use linearized::{LinPoly, Linearity};
pub use poly::Poly;
pub use subspace::SubspaceBasis;
pub use families::{Family, InverseCertificate};
pub use literal::Params;
