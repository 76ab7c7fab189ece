use std::f64::consts::PI;

/// Mean value of |cos(t/2)| over a period.
pub const ABS_COS_MEAN: f64 = 2.0 / PI;

/// (2/π)(√(π²−4) − 2 arccos(2/π)), the largest absolute value of
/// [`periodic_mean_deviation`].
pub fn frak_m() -> f64 {
    (2.0 / PI) * ((PI * PI - 4.0).sqrt() - 2.0 * (2.0 / PI).acos())
}

/// ∫₀^{2cπ} (|cos(t/2)| − 2/π) dt for c ∈ [0, 1], in closed form.
pub fn periodic_mean_deviation(c: f64) -> f64 {
    let s = (c * PI).sin();
    if c <= 0.5 {
        2.0 * s - 4.0 * c
    } else {
        4.0 - 2.0 * s - 4.0 * c
    }
}
