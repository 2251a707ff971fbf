//! Exact Z2 coboundary expansion for finite cell complexes.
//!
//! The crate computes, over the two-element field:
//!
//! * cochain complexes of simplices, cubes, cross-polytopes and complete
//!   multipartite complexes ([`complex`], [`cochain`]);
//! * the coboundary expansion `h^k`, the edge expansion of graphs and the
//!   filling norm, exactly, by enumerating cosets of the coboundary space
//!   against a table of coset-leader weights ([`expansion`]);
//! * constructive isoperimetric fillings of cycles in the cube and the
//!   cube/cross-polytope duality ([`filling`]);
//! * seeded random subcomplexes and Monte Carlo sweeps ([`random`]);
//! * graph Laplacian spectra and the Cheeger/Buser sandwich ([`spectral`]).

pub mod cochain;
pub mod complex;
pub mod error;
pub mod expansion;
pub mod filling;
pub mod gf2;
pub mod random;
pub mod rational;
pub mod spectral;

pub use cochain::{Cochain, CosetTable, TableLimits};
pub use complex::{CellId, Complex, DegreeProfile, Label, LabelKind};
pub use error::{CobexError, Result};
pub use gf2::{Basis, GF2Matrix, GF2Vector};
pub use rational::Rational;
