//! Exact chain maps between the bar and Koszul resolutions of a polynomial
//! algebra S(V), together with the quantum-differential cochain converter for
//! skew group algebras S(V)#G and the maps induced on Hochschild homology and
//! cohomology.
//!
//! Everything is computed over cyclotomic number fields with arbitrary
//! precision rational coordinates, so every identity checked by the test
//! suites is exact: there are no tolerances anywhere in this crate.
//!
//! Module map:
//! - [`scalar`]: the ground field Q(zeta_m) and quantum integers.
//! - [`poly`]: multivariate polynomials, linear substitutions, and elements
//!   of the skew group algebra S(V)#G.
//! - [`group`]: finite matrix groups with multiplication tables, conjugacy
//!   data, and deterministic eigenbasis decompositions.
//! - [`resolution`]: chains of the bar and Koszul resolutions of S(V), their
//!   differentials, and the inclusion of the Koszul resolution into the bar
//!   resolution.
//! - [`chainmap`]: the explicit retraction from bar chains onto Koszul
//!   chains, with closed forms in homological degrees one and two.
//! - [`cochain`]: Koszul cochains tagged by group elements, the quantum
//!   partial derivative, the converter from tagged forms to bar cochains,
//!   and exact cohomology dimension counts.
//! - [`homology`]: the maps induced on Hochschild homology, twisted and
//!   untwisted, with an independent functor-based oracle.
//! - [`textio`]: parsing and rendering of the text grammar used by the CLI.
//! - [`session`]: a loaded group plus caps, seed, and output format.
//! - [`suite`]: the deterministic verification suites behind `verify`.

pub mod chainmap;
pub mod cochain;
pub mod error;
pub mod group;
pub mod homology;
pub mod poly;
pub mod resolution;
pub mod scalar;
pub mod session;
pub mod suite;
pub mod textio;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
