pub mod channels;
pub mod cli;
pub mod distribute;
pub mod error;
pub mod localize;
pub mod measures;
pub mod optimize;
pub mod qmat;
pub mod states;

pub use error::{Error, Result};
