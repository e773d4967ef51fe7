pub mod cli;
pub mod doc;
pub mod drezet;
pub mod dualitylab;
pub mod error;
pub mod exactla;
pub mod quiver;
pub mod selftest;
pub mod sheafbridge;

pub use error::{Error, Result};
