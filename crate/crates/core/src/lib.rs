//! Corners with popular differences in finite abelian groups.
//!
//! The crate counts corners `{(x, y), (x, y + d), (x + d, y)}` in subsets of
//! `G x G`, builds the Bohr-set and regularity machinery used to localize the
//! count to a structured set of differences, and numerically studies the
//! variational quantity `m(alpha) = inf { T(phi) : E[phi] = alpha }` together
//! with its convex minorant.

pub mod bohr;
pub mod corners;
pub mod error;
pub mod group;
pub mod harmonic;
mod par;
pub mod partition;
pub mod rational;
pub mod regularity;
pub mod variational;

pub use error::{Error, Result};
pub use group::{Character, Element, GroupSpec};
pub use rational::Rational;
