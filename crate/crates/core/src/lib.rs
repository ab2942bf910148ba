//! Exact and numerical tools for unipotent `SL3` representations of the
//! thrice-punctured sphere, their character surface, and the related
//! Tzitzeica and Monge-Ampere equations.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod banded;
pub mod betti;
pub mod cone;
pub mod error;
pub mod field;
pub mod higgs;
pub mod integral;
pub mod matrix;
pub mod parse;
pub mod rational;
pub mod surface;
pub mod tzitzeica;
pub mod verify;

pub use error::{Error, ParseError, Result};
pub use field::GaussianRational;
pub use matrix::{ComplexMatrix3, ExactMatrix3, Mat2, SL3Matrix};
pub use rational::Rational;
pub use surface::{CharacterPoint, ComponentLabel, ParamPoint};
