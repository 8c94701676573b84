//! Modulated Gaussian plane wave.

/// `exp(-50 s^2) cos(4 pi s)` with `s = x + 3 - t`.
pub fn gaussian_plane_wave(x: f64, t: f64) -> f64 {
    let s = x + 3.0 - t;
    (-50.0 * s * s).exp() * (4.0 * std::f64::consts::PI * s).cos()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert_eq!(gaussian_plane_wave(-3.0, 0.0), 1.0);
        assert!(gaussian_plane_wave(-2.875, 0.0).abs() < 1e-15);
        assert!((gaussian_plane_wave(-2.75, 0.0) + (-3.125f64).exp()).abs() < 1e-15);
        assert!((gaussian_plane_wave(0.25, 3.0) + 0.043937).abs() < 1e-6);
    }
}
