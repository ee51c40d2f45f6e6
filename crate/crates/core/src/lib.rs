//! Counting, enumeration and least-degree search for sparse (t-nomial)
//! multiples of binary polynomials.
//!
//! A t-nomial is a polynomial over GF(2) with exactly `t` nonzero terms, one of
//! them the constant term. Low-weight multiples of an LFSR connection
//! polynomial are what fast correlation attacks feed on, so for combination
//! generators (whose connection polynomial is a product of primitive
//! polynomials with coprime degrees) it matters how many such multiples exist
//! and how small their degree can be.
//!
//! The crate is organised bottom-up:
//!
//! * [`gf2`]: polynomial arithmetic, orders, primitivity, Zech and residue tables.
//! * [`single`]: enumeration of t-nomial multiples of one polynomial and the
//!   shifted-trinomial set used by the five-term count.
//! * [`product`]: closed-form counts for two-factor products, the k-factor
//!   fold, lower bounds and a residue-matching oracle.
//! * [`crt`]: the constructive CRT lifting that generates every 5-nomial
//!   multiple of a two-factor product case by case.
//! * [`degree`]: least-degree search, degree estimates and the residue
//!   collision checker for the least multiple.
//! * [`verify`]: the acceptance checks, runnable from tests and the CLI.

pub mod crt;
pub mod degree;
mod error;
pub mod gf2;
pub mod product;
pub mod single;
pub mod verify;

pub use error::{Error, ErrorKind, Result};
pub use gf2::{FactorSpec, Gf2Poly, OrderedPoly, ResidueTable, ZechTable};
pub use single::{ShiftSet, Tnomial};
