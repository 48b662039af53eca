pub mod bessel;
pub mod cli;
pub mod error;
pub mod fredholm;
pub mod identities;
pub mod kernels;
pub mod oracle;
pub mod plancherel;
pub mod symbol;

pub use error::{Error, Result};
