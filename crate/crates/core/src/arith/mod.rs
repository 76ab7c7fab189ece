//! Exact arithmetic functions on integers.

mod counting;
mod delta;
mod divisor_fns;
mod factor;
mod window;

pub use counting::{sifted_count, smooth_count, DEFAULT_SMOOTH_BUDGET, MAX_SIFT_WINDOW};
pub use delta::{delta, delta_k, delta_of, DeltaProfile, DELTA_K_BUDGET};
pub use divisor_fns::{jordan_weighted, tau_abs_prime_power, tau_complex, tau_k, tau_k_u64};
pub use factor::{factorize, DivisorSet, Factorization, DIVISOR_BUDGET, MAX_FACTORIZABLE};
pub(crate) use window::window_bounds;
pub use window::{
    delta_moments, for_each_factored, short_sum, weighted_delta_sums, ArithFn, DeltaMoments,
    MAX_SHORT_WINDOW,
};
