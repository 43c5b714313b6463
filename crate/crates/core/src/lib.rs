pub mod attractor;
pub mod cli;
pub mod curve;
pub mod cyclotomic;
pub mod error;
pub mod lattice;
pub mod monodromy;
pub mod mp;
pub mod periods;
pub mod quadrature;
pub mod shimura;

pub use error::{Error, Result};
