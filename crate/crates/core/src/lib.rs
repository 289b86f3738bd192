//! Numerical toolkit for sign-changing cluster solutions of the planar
//! Lane–Emden problem `-Δu = |u|^{p-1}u` with zero Dirichlet data.
//!
//! The crate builds the two-bubble cluster ansatz (a positive bubble at the
//! origin and a k-fold ring of negative bubbles collapsing onto it), verifies
//! the quantitative estimates behind the construction — parameter
//! asymptotics, weighted error decay, linear-theory constants, reduced-energy
//! minimizer — and refines the ansatz into a discrete solution by damped
//! Newton continuation on a symmetry-reduced polar grid.

pub mod ansatz;
pub mod band;
pub mod bubbles;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod linear;
pub mod params;
pub mod profiles;
pub mod quadrature;
pub mod solver;

pub use error::{Error, Result};
