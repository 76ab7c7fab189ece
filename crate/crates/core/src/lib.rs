//! Explicit bounds for short sums of arithmetic functions and the
//! Erdős–Hooley Δ-function, with a harness that checks each inequality
//! numerically.

pub mod arith;
pub mod compensated;
pub mod error;
pub mod extscale;
pub mod primes;
pub mod specialfun;
pub mod verify;

pub use arith::{delta, factorize, short_sum, ArithFn, DeltaProfile, DivisorSet, Factorization};
pub use error::{Error, Result};
pub use extscale::{constants, ConstantBundle, ExtReal};
pub use primes::PrimeTable;
