pub mod catalog;
pub mod channels;
pub mod cli;
pub mod composite;
pub mod compression;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod kets;
pub mod linalg;
pub mod measures;
pub mod witness;

pub use error::{Error, Result};
