//! Log-space arithmetic for numbers far outside the range of a double, and
//! the explicit constants built on it.

mod constants;
mod ext;
#[cfg(test)]
mod oracle;
#[cfg(test)]
mod oracle_tests;

pub use constants::{
    constants, corollary_rhs, landreau_bound, landreau_m, main_rhs, phi, x_threshold,
    ConstantBundle, LandreauBound, COROLLARY_FACTOR, ZETA2,
};
pub use ext::{ExtReal, ExtSum, Sign, CANCELLATION_GAP};
