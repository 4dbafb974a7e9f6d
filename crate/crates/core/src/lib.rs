//! Local building blocks of the twisted HKR formality map on the formal disk
//! `F = k[[t_1, ..., t_d]]`.
//!
//! The crate is organized bottom-up:
//!
//! - [`series`]: exact truncated power series, univariate series calculus and
//!   matrices of graded entries,
//! - [`polyvector`]: poly-vector fields with the Schouten bracket, wedge
//!   product, pairing with forms and contraction,
//! - [`polydiff`]: polydifferential operators with the brace (bullet)
//!   product, Gerstenhaber bracket, Hochschild differential, cup product
//!   and the HKR map,
//! - [`graph`]: Kontsevich admissible graphs, their enumeration and the
//!   wheel classification,
//! - [`weight`]: closed-form wheel weights and Monte-Carlo configuration
//!   space integrals,
//! - [`formality`]: graph operators, the first Taylor coefficient, its
//!   twist by a Maurer-Cartan form and the Todd-type closed form,
//! - [`linfty`]: L-infinity structures, Maurer-Cartan elements and twisting,
//! - [`verify`]: seeded verification suites producing JSON reports.
//!
//! Axis indices in the Rust API are 0-based; the JSON formats and the CLI
//! use 1-based labels.

pub mod error;
pub mod formality;
pub mod graph;
pub mod grassmann;
pub mod linfty;
pub mod polydiff;
pub mod polyvector;
pub mod random;
pub mod rational;
pub mod series;
pub mod verify;
pub mod weight;

pub use error::{Error, Result};
pub use rational::Rational;
pub use series::{SeriesMatrix, TruncatedSeries, UnivariateSeries};
