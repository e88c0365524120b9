pub mod error;
pub mod multfunc;
pub mod numberfield;
pub mod orthogonality;
pub mod primebounds;
pub mod richter;
pub mod sieve;
pub mod stats;

pub use error::{Error, Result};
