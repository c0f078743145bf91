pub mod bounds;
pub mod error;
pub mod factor;
pub mod fp;
pub mod heights;
pub mod io;
pub mod modular;
pub mod numfield;
pub mod padic;
pub mod pipeline;
pub mod polyarith;
pub mod primes;
pub mod suite;

pub use error::{Error, Result};
pub use polyarith::{IntPolynomial, RatPolynomial};
