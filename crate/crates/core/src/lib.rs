pub mod cyclic;
pub mod dump;
pub mod error;
pub mod measure;
pub mod pair;
pub mod solver;
pub mod symbolic;
pub mod verify;

pub use error::{Error, Result};
