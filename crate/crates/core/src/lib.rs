//! Exact Grassmann-algebra arithmetic, graded supermatrices and one-parameter
//! idempotent superoperator families, with a checker for their identities.

pub mod analysis;
pub mod annihilator;
pub mod cayley;
pub mod check;
pub mod error;
pub mod evolution;
pub mod families;
pub mod gamma;
pub mod grassmann;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod random;
pub mod supermatrix;
pub mod verify;

pub use annihilator::{annihilator_odd, AnnihilatorBasis, OddSubspace};
pub use error::{Error, Result};
pub use grassmann::{AlgebraContext, GrassmannElement, Monomial, Parity, Rational};
pub use matrix::{Mat, Reduction, Ring, Super, SuperVector};
pub use poly::{Frequency, LaurentPoly, Poly, Time, TimePoly};
pub use supermatrix::{ElementVector, LaurentMatrix, ParamSuperMatrix, ParamVector, SuperMatrix};
