//! Decibel helpers. Internal computation is linear everywhere; dB appears
//! only at the API edges.

/// Convert a power quantity in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear power quantity to dB.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Power loss in dB corresponding to an amplitude-domain gain.
pub fn amplitude_gain_to_loss_db(gain: f64) -> f64 {
    -20.0 * gain.log10()
}

/// Antenna gain in dBi to linear power gain.
pub fn dbi_to_linear(dbi: f64) -> f64 {
    db_to_linear(dbi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_round_trip() {
        assert!((linear_to_db(db_to_linear(13.7)) - 13.7).abs() < 1e-12);
        assert!((db_to_linear(30.0) - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn amplitude_loss() {
        // amplitude 10^{-1/2} is a 10 dB power loss
        let g = 10f64.powf(-0.5);
        assert!((amplitude_gain_to_loss_db(g) - 10.0).abs() < 1e-12);
    }
}
