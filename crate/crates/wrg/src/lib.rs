//! Simulation and numerical verification toolkit for weighted recursive
//! graphs: grow the random graph at scale, evaluate the limiting degree
//! distribution and maximum-degree predictions for every vertex-weight
//! class, sample the Poisson-point-process limit objects, and statistically
//! compare simulation against theory.

pub mod acceptance;
pub mod config;
pub mod error;
pub mod experiments;
pub mod fenwick;
pub mod growth;
pub mod ppp;
pub mod quad;
pub mod special;
pub mod stats;
pub mod theory;
pub mod weights;

pub use error::{Error, Result};
