//! Min-plus algebra for the eigenvalue problem of a two-ring traffic junction.

pub mod cli;
pub mod dynamics;
pub mod format;
pub mod minplus;
pub mod numeric;
pub mod oracle;
pub mod spectral;
pub mod traffic;
