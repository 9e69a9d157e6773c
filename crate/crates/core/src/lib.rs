//! Numerics for Chen-type weighted sieves: the explicit constants, parameter
//! relations and weight functions, plus exact desk-scale counts of primes
//! `p` with `p - b` a power of two times an almost prime.

pub mod acceptance;
pub mod bounds;
pub mod cli;
pub mod constants;
pub mod counters;
pub mod error;
pub mod oracle;
pub mod params;
pub mod primes;
pub mod quad;
pub mod rational;
pub mod report;

pub use error::{Error, Result};
