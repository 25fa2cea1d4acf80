//! Colourful selection of contact pairs and witness points for translative coverings.
//!
//! The crate is organised bottom-up:
//!
//! - [`geom`]: vectors, polytopes, support functions, widths.
//! - [`lp`]: a small dense simplex solver used for hull membership and inradii.
//! - [`select`]: the colourful selection engine and its Bang / Kadets reductions.
//! - [`contact`]: maximal inscribed homothets and their contact pairs.
//! - [`cover`]: relative widths, K-inradii and witness-point constructions.
//! - [`svg`]: planar figures.

pub mod contact;
pub mod cover;
pub mod error;
pub mod geom;
pub mod lp;
pub mod select;
pub mod svg;

pub use error::{Error, Result};
pub use geom::{PairedVector, Polytope, Vector};
