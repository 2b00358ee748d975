//! Exact symbolic kernel for multiplicities of module pairs, polar
//! multiplicities, and map-germ invariants, with a batch session runner.

pub mod free;
pub mod gb;
pub mod genstream;
pub mod germs;
pub mod jets;
pub mod modops;
pub mod monomial;
pub mod mult;
pub mod polar;
pub mod order;
pub mod parse;
pub mod poly;
pub mod ring;
pub mod runner;
pub mod session;
pub mod submodule;
pub mod scalar;
