//! Special functions and numerical integration.

mod expint;
mod lambert;
mod periodic;
mod quad;

pub use expint::{e1, ei, li};
pub use lambert::{lambert_w0, lambert_wm1};
pub use periodic::{frak_m, periodic_mean_deviation, ABS_COS_MEAN};
pub use quad::{quad, quad_with_kinks, QuadratureResult, DEFAULT_MAX_EVALUATIONS};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
