//! Exact tools for odd unimodular lattices built from self-dual codes:
//! codes over `Z_k`, weight enumerators, theta series, exact lattices,
//! basis reduction and short-vector enumeration.

pub mod binwe;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod qtheta;
pub mod reduce;
pub mod report;
pub mod registry;
pub mod svp;
pub mod zkcode;

pub use error::{Error, Result};
