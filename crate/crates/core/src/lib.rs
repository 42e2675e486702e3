//! Exact-arithmetic toolkit for the reduction chain
//! circle graph → ray graph → segment polyline cover → curve simplification.

pub mod chord_graph;
pub mod cover_solver;
pub mod curve_simplify;
pub mod error;
pub mod exact_geom;
pub mod needle_reduce;
pub mod pipeline;
pub mod ray_embed;
pub mod render;

pub use error::{Error, Result};
