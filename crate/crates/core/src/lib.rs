//! Boundary-integral solver for the elastic stress around a hole in an
//! infinite plate under biaxial far-field load.
//!
//! The plane-strain elasticity problem is written in terms of complex Goursat
//! functions. On the hole boundary the decaying part of the first Goursat
//! function satisfies a singular integro-differential equation; this crate
//! discretizes that equation with a Chebyshev collocation basis, augments the
//! basis with a fractional-power corner term when the hole has a corner, and
//! solves the resulting overdetermined linear system in the least-squares
//! sense. Boundary and interior stresses, error norms against the classical
//! exact solutions (circle, ellipse, two overlapping circles), and stress
//! grids are built on top of the boundary solution.
//!
//! Entry points:
//! - [`shapes::BoundaryShape`] describes the hole geometry on the first
//!   quadrant (shapes are two-fold symmetric).
//! - [`assembler::solve`] produces a [`assembler::BoundarySolution`].
//! - [`field`] recovers the second Goursat function, continues both into the
//!   solid, and evaluates stresses anywhere.
//! - [`oracles`] holds the exact solutions used for validation.
//!
//! See the `examples/` directory for one runnable program per capability and
//! the `plate-hole` binary for the command-line interface.

pub mod assembler;
pub mod chebyshev;
pub mod cli;
pub mod corner;
pub mod error;
pub mod field;
pub mod goursat;
pub mod linsolve;
pub mod oracles;
pub mod quadrature;
pub mod shapes;

pub use error::{Error, Result};
