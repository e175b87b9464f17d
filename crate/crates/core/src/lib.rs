pub mod atlas;
pub mod cli;
pub mod cone;
pub mod element;
pub mod error;
pub mod fan;
pub mod hopf;
pub mod lattice;
pub mod padic;
pub mod random;
pub mod reduction;
pub mod render;
pub mod semigroup;
