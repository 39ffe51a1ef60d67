//! Energy-stable simulation of Q-tensor gradient flows with anisotropic
//! elasticity on triangle meshes.

pub mod assembly;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod mesh;
pub mod qtensor;
pub mod solver;

pub use error::{Error, Result};
