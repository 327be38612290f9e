//! Laplacian on the flat square torus (R/Z)^2: exact spectrum and counting
//! function, explicit Weyl-type bounds, the Bessel constant j₀,₁, nodal-domain
//! counts of sampled eigenfunctions, and the Courant-sharp certification that
//! singles out λ₁, ..., λ₅.

pub mod certifier;
pub mod cli;
pub mod error;
pub mod nodal_lab;
pub mod special_functions;
pub mod spectrum;

pub use error::{Error, Result};
