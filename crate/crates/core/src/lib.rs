//! Numerical toolkit for Hardy-type spaces of holomorphic functions on the
//! upper half-plane.
//!
//! The crate samples boundary functions on a uniform grid, extends them into
//! the half-plane on a logarithmic ladder of heights, and evaluates the
//! norms that govern the product space `H¹ · BMOA`: Musielak–Orlicz
//! Luxemburg norms, BMO and BMO⁺, Hardy norms, Carleson box ratios and the
//! logarithmically weighted tent seminorm. On top of that it builds the
//! explicit factorization `h = f · g` and studies Hankel forms.

pub mod cli;
pub mod config;
pub mod error;
pub mod factor;
pub mod grid;
pub mod hankel;
pub mod library;
pub mod maximal;
pub mod oracles;
pub mod quadrature;
pub mod spaces;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{make_grid, DecayClass, Extension, Grid1D, HalfPlaneField, HeightLadder, SampledFunction};
