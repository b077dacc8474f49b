//! Exact differential algebra on multivariate polynomial rings over Q and
//! Q(i).
//!
//! The crate is layered bottom-up: [`scalar`] and [`linalg`] provide exact
//! arithmetic, [`poly`], [`gcd`] and [`ratfunc`] the polynomial kernels,
//! [`derivation`] extends variable images to whole rings, [`groebner`]
//! decides ideal membership, and [`darboux`] and [`diffideal`] build the
//! Darboux-polynomial and differential-ideal machinery on top.

pub mod derivation;
pub mod darboux;
pub mod diffideal;
pub mod error;
pub mod gcd;
pub mod groebner;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod roots;
pub mod scalar;
pub mod solve;

pub use error::{Error, Result};
pub use poly::{Monomial, MultiPoly, Ring, RingRef};
pub use ratfunc::RationalFunction;
pub use scalar::{Field, GaussRational, Rational};
