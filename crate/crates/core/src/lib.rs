pub mod bichar;
pub mod catalog;
pub mod cyclo;
pub mod document;
pub mod error;
pub mod freealg;
pub mod hilbert;
pub mod linalg;
pub mod pbw;
pub mod quotient;
pub mod roots;
pub mod verify;

pub use error::{Error, Result};
