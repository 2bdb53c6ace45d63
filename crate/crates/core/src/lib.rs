pub mod budget;
pub mod cli;
mod error;
pub mod junta;
pub mod oracles;
pub mod properties;
pub mod report;
pub mod setcore;
pub mod shifting;
pub mod verify;

pub use budget::Budget;
pub use error::{Error, Result};
pub use setcore::{KSet, SetFamily};
