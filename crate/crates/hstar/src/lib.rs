//! Lattice simplices with one interior-free structure: the finite abelian
//! quotient group attached to a simplex, Ehrhart h*-polynomials computed two
//! independent ways, constructions for the families whose h*-polynomial is a
//! trinomial, and an exhaustive small-scale verifier for that classification.

mod canonical;
pub mod classify;
pub mod cli;
pub mod codes;
pub mod error;
pub mod families;
pub mod group;
pub mod io;
pub mod linalg;
pub mod polynomial;
pub mod simplex;

pub use error::{Error, Result};
