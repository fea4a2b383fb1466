//! SDNR, closed-form outage probability with its validity region, and
//! throughput under transceiver hardware imperfections.
//!
//! Hardware quality enters every expression only through κ_t² + κ_r², the
//! total error-vector-magnitude power. With γ_th above the SDNR ceiling the
//! outage probability is exactly 1 and the throughput 0.

use crate::channel::{self, ProductChannelDist};
use crate::error::{Error, Result};
use crate::specfun::SeriesControl;

/// TX/RX error-vector magnitudes.
///
/// Measured transceivers fall in EVM ∈ [0.07, 0.4]; values above that range
/// are accepted but outside the validated envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardwareProfile {
    pub kappa_t: f64,
    pub kappa_r: f64,
}

impl HardwareProfile {
    pub const IDEAL: HardwareProfile = HardwareProfile {
        kappa_t: 0.0,
        kappa_r: 0.0,
    };

    pub fn new(kappa_t: f64, kappa_r: f64) -> Result<Self> {
        if !(kappa_t >= 0.0 && kappa_r >= 0.0) || !kappa_t.is_finite() || !kappa_r.is_finite() {
            return Err(Error::domain(
                "HardwareProfile",
                format!("EVM values must be finite and nonnegative ({kappa_t}, {kappa_r})"),
            ));
        }
        Ok(HardwareProfile { kappa_t, kappa_r })
    }

    /// Split a total EVM κ = sqrt(κ_t² + κ_r²) evenly between TX and RX.
    pub fn from_total(kappa_total: f64) -> Result<Self> {
        let each = kappa_total / std::f64::consts::SQRT_2;
        HardwareProfile::new(each, each)
    }

    /// κ_t² + κ_r², the only combination the performance metrics see.
    pub fn kappa_sq(&self) -> f64 {
        self.kappa_t * self.kappa_t + self.kappa_r * self.kappa_r
    }
}

/// Radio operating point (all linear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioState {
    /// Transmit SNR ρ = h_g² P_s / σ_n².
    pub rho: f64,
    /// SDNR threshold.
    pub gamma_th: f64,
    /// Bandwidth, Hz.
    pub w_hz: f64,
    /// Spectral efficiency of the modulation/coding scheme, bits/s/Hz.
    pub r_t: f64,
}

impl RadioState {
    pub fn new(rho: f64, gamma_th: f64, w_hz: f64, r_t: f64) -> Result<Self> {
        if !(rho > 0.0 && gamma_th > 0.0 && w_hz > 0.0 && r_t > 0.0) {
            return Err(Error::domain(
                "RadioState",
                format!("all fields must be positive (rho={rho}, gamma_th={gamma_th}, W={w_hz}, r_t={r_t})"),
            ));
        }
        Ok(RadioState {
            rho,
            gamma_th,
            w_hz,
            r_t,
        })
    }
}

/// Transmit SNR implied by power, noise, and the deterministic gain:
/// ρ = h_g² P_s / σ_n².
pub fn transmit_snr(p_s_w: f64, sigma_n2_w: f64, h_g: f64) -> f64 {
    h_g * h_g * p_s_w / sigma_n2_w
}

/// Instantaneous SDNR for a fading realization A in (0, 1]:
/// γ = A² / (A² (κ_t²+κ_r²) + 1/ρ).
pub fn sdnr(a: f64, rho: f64, hw: &HardwareProfile) -> f64 {
    debug_assert!(a > 0.0 && a <= 1.0 && rho > 0.0);
    let a2 = a * a;
    a2 / (a2 * hw.kappa_sq() + 1.0 / rho)
}

/// Largest SDNR threshold for which an outage below 1 is possible:
/// min(1/(κ_t²+κ_r²), ρ/((κ_t²+κ_r²)ρ + 1)); the second argument is the
/// binding one for finite ρ, and reduces to ρ for ideal hardware.
pub fn sdnr_ceiling(rho: f64, hw: &HardwareProfile) -> f64 {
    let ks = hw.kappa_sq();
    if ks == 0.0 {
        rho
    } else {
        (1.0 / ks).min(rho / (ks * rho + 1.0))
    }
}

/// Closed-form outage probability P(γ <= γ_th).
///
/// Below the ceiling this is the product-channel CDF at
/// x* = sqrt(γ_th/ρ) / sqrt(1 - γ_th (κ_t²+κ_r²)); at or above the ceiling
/// the outage is exactly 1 (the comparison is strict per the validity
/// condition 1 - γ_th (κ_t²+κ_r²) > 0).
pub fn outage_probability(
    gamma_th: f64,
    rho: f64,
    dist: &ProductChannelDist,
    hw: &HardwareProfile,
    ctl: &SeriesControl,
) -> Result<f64> {
    if !(gamma_th > 0.0 && rho > 0.0) {
        return Err(Error::domain(
            "outage_probability",
            format!("gamma_th = {gamma_th} and rho = {rho} must be positive"),
        ));
    }
    if gamma_th >= sdnr_ceiling(rho, hw) {
        return Ok(1.0);
    }
    let guard = 1.0 - gamma_th * hw.kappa_sq();
    let x_star = ((gamma_th / rho) / guard).sqrt().min(1.0);
    channel::product_cdf(dist, x_star, ctl)
}

/// Largest spectral efficiency with nonzero throughput:
/// min(log₂(1/(κ_t²+κ_r²) + 1), log₂(1 + ρ/((κ_t²+κ_r²)ρ + 1))).
pub fn max_spectral_efficiency(rho: f64, hw: &HardwareProfile) -> f64 {
    let ks = hw.kappa_sq();
    if ks == 0.0 {
        (1.0 + rho).log2()
    } else {
        (1.0 / ks + 1.0)
            .log2()
            .min((1.0 + rho / (ks * rho + 1.0)).log2())
    }
}

/// Throughput D = W r_t (1 - P_o(2^{r_t} - 1)) in bits/s; zero whenever r_t
/// exceeds [`max_spectral_efficiency`].
pub fn throughput(
    w_hz: f64,
    r_t: f64,
    rho: f64,
    dist: &ProductChannelDist,
    hw: &HardwareProfile,
    ctl: &SeriesControl,
) -> Result<f64> {
    if !(w_hz > 0.0 && r_t > 0.0) {
        return Err(Error::domain(
            "throughput",
            format!("W = {w_hz} and r_t = {r_t} must be positive"),
        ));
    }
    if r_t > max_spectral_efficiency(rho, hw) {
        return Ok(0.0);
    }
    let gamma_th = (2f64).powf(r_t) - 1.0;
    let p_o = outage_probability(gamma_th, rho, dist, hw, ctl)?;
    Ok(w_hz * r_t * (1.0 - p_o))
}

/// Golden-section search for the spectral efficiency maximising throughput.
/// The objective is unimodal on (0, max_spectral_efficiency); returns
/// (r_t°, D(r_t°)).
pub fn optimal_spectral_efficiency(
    w_hz: f64,
    rho: f64,
    dist: &ProductChannelDist,
    hw: &HardwareProfile,
    ctl: &SeriesControl,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut lo = 1e-6;
    let mut hi = max_spectral_efficiency(rho, hw) - 1e-9;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = throughput(w_hz, c, rho, dist, hw, ctl)?;
    let mut fd = throughput(w_hz, d, rho, dist, hw, ctl)?;
    while hi - lo > 1e-10 * hi.max(1.0) {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = throughput(w_hz, c, rho, dist, hw, ctl)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = throughput(w_hz, d, rho, dist, hw, ctl)?;
        }
    }
    let r = 0.5 * (lo + hi);
    Ok((r, throughput(w_hz, r, rho, dist, hw, ctl)?))
}

/// TX and RX distortion-noise variances for a given realization:
/// σ²_{n_t} = κ_t² P_s and σ²_{n_r} = κ_r² h_g² A² P_s.
pub fn distortion_variances(p_s_w: f64, h_g: f64, a: f64, hw: &HardwareProfile) -> (f64, f64) {
    debug_assert!(p_s_w > 0.0);
    let sigma_nt = hw.kappa_t * hw.kappa_t * p_s_w;
    let sigma_nr = hw.kappa_r * hw.kappa_r * h_g * h_g * a * a * p_s_w;
    (sigma_nt, sigma_nr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{FogPreset, ProductChannelDist};
    use crate::units::db_to_linear;

    fn rel_err(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn sdnr_values() {
        let ideal = HardwareProfile::IDEAL;
        assert!(rel_err(sdnr(0.3, 500.0, &ideal), 500.0 * 0.09) < 1e-13);
        let hw = HardwareProfile::new(0.1, 0.1).unwrap();
        // hand evaluation: 0.25/(0.25*0.02 + 0.001)
        assert!(rel_err(sdnr(0.5, 1000.0, &hw), 41.666666666666664) < 1e-13);
        // ceiling as A -> 1, rho -> inf
        assert!(rel_err(sdnr(1.0, 1e15, &hw), 1.0 / 0.02) < 1e-9);
    }

    #[test]
    fn ceiling_values() {
        assert_eq!(sdnr_ceiling(1234.5, &HardwareProfile::IDEAL), 1234.5);
        let hw = HardwareProfile::new(0.1, 0.1).unwrap();
        assert!(rel_err(sdnr_ceiling(1e12, &hw), 1.0 / 0.02) < 1e-6);
        // the rho-limited branch binds for finite rho
        let hw2 = HardwareProfile::from_total(0.07).unwrap();
        assert!(rel_err(hw2.kappa_sq(), 0.0049) < 1e-12);
        assert!(rel_err(sdnr_ceiling(1e5, &hw2), 1e5 / (0.0049 * 1e5 + 1.0)) < 1e-13);
    }

    #[test]
    fn max_spectral_efficiency_values() {
        // ideal hardware: log2(1 + rho)
        assert!(
            rel_err(
                max_spectral_efficiency(1000.0, &HardwareProfile::IDEAL),
                1001f64.log2()
            ) < 1e-13
        );
        // frozen operating points
        let hw7 = HardwareProfile::from_total(0.07).unwrap();
        assert!((max_spectral_efficiency(1e5, &hw7) - 7.677127559).abs() < 1e-7);
        let hw10 = HardwareProfile::from_total(0.1).unwrap();
        assert!((max_spectral_efficiency(1e5, &hw10) - 6.656783793).abs() < 1e-7);
        // kappa = 0.1 total, rho -> inf: log2(101)
        assert!((max_spectral_efficiency(1e14, &hw10) - 101f64.log2()).abs() < 1e-6);
    }

    #[test]
    fn outage_above_ceiling_is_one() {
        let ctl = SeriesControl::default();
        let dist = ProductChannelDist::symmetric(&FogPreset::Light.condition(), 30.0);
        let hw = HardwareProfile::from_total(0.2).unwrap();
        let ceil = sdnr_ceiling(1000.0, &hw);
        assert_eq!(
            outage_probability(ceil * 1.0001, 1000.0, &dist, &hw, &ctl).unwrap(),
            1.0
        );
        // equality maps to 1 as well (strict validity inequality)
        assert_eq!(
            outage_probability(ceil, 1000.0, &dist, &hw, &ctl).unwrap(),
            1.0
        );
    }

    #[test]
    fn outage_paper_points_ideal_hardware() {
        let ctl = SeriesControl::default();
        // with kappa = 0 only the ratio rho/gamma_th matters
        let ratio = db_to_linear(15.0);
        let cases = [
            (FogPreset::Light, 30.0, 2.08e-5),
            (FogPreset::Light, 50.0, 7.63e-3),
            (FogPreset::Moderate, 30.0, 7.15e-3),
            (FogPreset::Thick, 30.0, 5.9e-1),
        ];
        for (preset, d, expect) in cases {
            let dist = ProductChannelDist::symmetric(&preset.condition(), d);
            let po = outage_probability(1.0, ratio, &dist, &HardwareProfile::IDEAL, &ctl).unwrap();
            assert!(
                (po - expect).abs() / expect < 0.03,
                "{} d={d}: {po} vs {expect}",
                preset.name()
            );
        }
    }

    #[test]
    fn outage_continuous_at_validity_boundary() {
        let ctl = SeriesControl::default();
        let dist = ProductChannelDist::symmetric(&FogPreset::Moderate.condition(), 50.0);
        let hw = HardwareProfile::from_total(0.15).unwrap();
        let rho = db_to_linear(30.0);
        let ceil = sdnr_ceiling(rho, &hw);
        let po = outage_probability(ceil * (1.0 - 1e-6), rho, &dist, &hw, &ctl).unwrap();
        assert!((1.0 - po).abs() < 1e-3, "P_o = {po} just below the ceiling");
    }

    #[test]
    fn outage_only_depends_on_total_evm() {
        let ctl = SeriesControl::default();
        let dist = ProductChannelDist::symmetric(&FogPreset::Light.condition(), 50.0);
        let a = HardwareProfile::new(0.08, 0.17).unwrap();
        let b = HardwareProfile::new(0.17, 0.08).unwrap();
        let rho = db_to_linear(35.0);
        let pa = outage_probability(10.0, rho, &dist, &a, &ctl).unwrap();
        let pb = outage_probability(10.0, rho, &dist, &b, &ctl).unwrap();
        assert_eq!(pa.to_bits(), pb.to_bits());
    }

    #[test]
    fn throughput_zero_beyond_max_efficiency() {
        let ctl = SeriesControl::default();
        let dist = ProductChannelDist::symmetric(&FogPreset::Thick.condition(), 50.0);
        let hw = HardwareProfile::from_total(0.07).unwrap();
        let rho = db_to_linear(50.0);
        let max_rt = max_spectral_efficiency(rho, &hw);
        assert_eq!(
            throughput(1.0, max_rt + 0.01, rho, &dist, &hw, &ctl).unwrap(),
            0.0
        );
        assert!(throughput(1.0, max_rt - 0.01, rho, &dist, &hw, &ctl).unwrap() > 0.0);
    }

    #[test]
    fn throughput_is_unimodal_with_interior_maximum() {
        let ctl = SeriesControl::default();
        let dist = ProductChannelDist::symmetric(&FogPreset::Thick.condition(), 50.0);
        let hw = HardwareProfile::from_total(0.07).unwrap();
        let rho = db_to_linear(50.0);
        let max_rt = max_spectral_efficiency(rho, &hw);
        let values: Vec<f64> = (1..200)
            .map(|i| {
                let rt = max_rt * i as f64 / 200.0;
                throughput(1.0, rt, rho, &dist, &hw, &ctl).unwrap()
            })
            .collect();
        // one sign change of the discrete slope
        let mut changes = 0;
        for w in values.windows(2) {
            if w[1] < w[0] {
                changes += 1;
                break;
            }
        }
        let peak = values.iter().cloned().fold(f64::MIN, f64::max);
        assert_eq!(changes, 1);
        assert!(peak > values[0] && peak > *values.last().unwrap());

        let (rt_opt, d_opt) = optimal_spectral_efficiency(1.0, rho, &dist, &hw, &ctl).unwrap();
        assert!(rt_opt > 0.0 && rt_opt < max_rt);
        assert!(d_opt >= peak - 1e-6);
        // matches the reported optimum: 5.5 bits/s/Hz at D/W = 4.125
        assert!((rt_opt - 5.5).abs() < 0.25, "rt_opt = {rt_opt}");
    }

    #[test]
    fn distortion_variance_values() {
        let hw = HardwareProfile::new(0.0, 0.1).unwrap();
        let (nt, nr) = distortion_variances(1.0, 0.1, 0.1, &hw);
        assert_eq!(nt, 0.0);
        assert!(rel_err(nr, 1e-6) < 1e-12);
        // composing the variances reproduces the SDNR expression
        let hw2 = HardwareProfile::new(0.07, 0.12).unwrap();
        let (p_s, h_g, a, sigma_n2) = (2.5, 0.02, 0.6, 1e-9);
        let (nt2, nr2) = distortion_variances(p_s, h_g, a, &hw2);
        // received-signal power over distortion-plus-noise power: the TX
        // distortion rides through the channel, the RX term does not
        let gamma_direct = h_g * h_g * a * a * p_s / (h_g * h_g * a * a * nt2 + nr2 + sigma_n2);
        let rho = transmit_snr(p_s, sigma_n2, h_g);
        let gamma_closed = sdnr(a, rho, &hw2);
        assert!(rel_err(gamma_direct, gamma_closed) < 1e-12);
    }
}
