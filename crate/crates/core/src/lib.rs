//! Exact computations with the orbit of e1 under the golden-L Veech group and
//! with the unipotent families Gamma_rho.

pub mod constructions;
pub mod error;
pub mod gamma_rho;
pub mod group;
pub mod orbit;
pub mod report;
pub mod ring;
pub mod sector;

pub use error::{Error, Result};
pub use group::{Mat2, Vec2, Word};
pub use ring::GoldenScalar;
