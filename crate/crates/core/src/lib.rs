pub mod cli;
pub mod ehw;
pub mod embeddings;
pub mod error;
pub mod fourier;
pub mod lfactors;
pub mod orbitclassify;
pub mod scalar;
pub mod weights;
pub mod weyl;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use weights::Weight;
