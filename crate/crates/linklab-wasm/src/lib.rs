//! Interactive browser demo over the core models: path-loss spectra, outage
//! curves, and throughput curves as flat `Vec<f64>` series for a canvas
//! plot. The curve builders are plain Rust (tested natively); the thin
//! `wasm-bindgen` exports live behind the wasm target.
//!
//! Build for the browser with
//! `wasm-pack build crates/linklab-wasm --target web --out-dir www/pkg`
//! and serve `crates/linklab-wasm/www/`.

use linklab_core::atmosphere::{bundled_catalog, AtmosphericState, GasMixture};
use linklab_core::channel::{end_to_end_gain, FogPreset, LinkGeometry, ProductChannelDist};
use linklab_core::performance::{outage_probability, throughput, HardwareProfile};
use linklab_core::specfun::SeriesControl;
use linklab_core::units::db_to_linear;

#[cfg(target_arch = "wasm32")]
use wasm_bindgen::prelude::*;

fn grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| start + (stop - start) * i as f64 / (n - 1).max(1) as f64)
        .collect()
}

/// Total geometric loss in dB across a frequency span.
#[allow(clippy::too_many_arguments)]
pub fn pathloss_curve_impl(
    f_start_ghz: f64,
    f_stop_ghz: f64,
    n: usize,
    size_m: f64,
    d1_m: f64,
    d2_m: f64,
    psi_deg: f64,
    vapor_g_m3: f64,
    liquid_water_g_m3: f64,
    temperature_k: f64,
) -> Result<Vec<f64>, String> {
    let state = AtmosphericState::new(temperature_k, 101_300.0, vapor_g_m3, liquid_water_g_m3)
        .map_err(|e| e.to_string())?;
    let mix = GasMixture::from_state(&state).map_err(|e| e.to_string())?;
    let catalog = bundled_catalog();
    grid(f_start_ghz, f_stop_ghz, n)
        .into_iter()
        .map(|f_ghz| {
            let geom = LinkGeometry::new(
                d1_m,
                d2_m,
                psi_deg.to_radians(),
                size_m,
                size_m,
                1e5,
                1e5,
                f_ghz * 1e9,
            )
            .map_err(|e| e.to_string())?;
            Ok(end_to_end_gain(&geom, &state, &mix, &catalog)
                .map_err(|e| e.to_string())?
                .loss_db())
        })
        .collect()
}

fn parse_preset(name: &str) -> Result<FogPreset, String> {
    name.parse::<FogPreset>().map_err(|e| e.to_string())
}

/// Outage probability over a normalized rho/gamma_th span in dB.
pub fn outage_curve_impl(
    preset: &str,
    d_m: f64,
    kappa_total: f64,
    ratio_start_db: f64,
    ratio_stop_db: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    let ctl = SeriesControl::default();
    let dist = ProductChannelDist::symmetric(&parse_preset(preset)?.condition(), d_m);
    let hw = HardwareProfile::from_total(kappa_total).map_err(|e| e.to_string())?;
    grid(ratio_start_db, ratio_stop_db, n)
        .into_iter()
        .map(|ratio_db| {
            outage_probability(1.0, db_to_linear(ratio_db), &dist, &hw, &ctl)
                .map_err(|e| e.to_string())
        })
        .collect()
}

/// Throughput-to-bandwidth ratio over a spectral-efficiency span.
pub fn throughput_curve_impl(
    preset: &str,
    d_m: f64,
    rho_db: f64,
    kappa_total: f64,
    rt_max: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    let ctl = SeriesControl::default();
    let dist = ProductChannelDist::symmetric(&parse_preset(preset)?.condition(), d_m);
    let hw = HardwareProfile::from_total(kappa_total).map_err(|e| e.to_string())?;
    let rho = db_to_linear(rho_db);
    grid(rt_max / n as f64, rt_max, n)
        .into_iter()
        .map(|rt| throughput(1.0, rt, rho, &dist, &hw, &ctl).map_err(|e| e.to_string()))
        .collect()
}

#[cfg(target_arch = "wasm32")]
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn pathloss_curve(
    f_start_ghz: f64,
    f_stop_ghz: f64,
    n: usize,
    size_m: f64,
    d1_m: f64,
    d2_m: f64,
    psi_deg: f64,
    vapor_g_m3: f64,
    liquid_water_g_m3: f64,
    temperature_k: f64,
) -> Result<Vec<f64>, JsValue> {
    pathloss_curve_impl(
        f_start_ghz,
        f_stop_ghz,
        n,
        size_m,
        d1_m,
        d2_m,
        psi_deg,
        vapor_g_m3,
        liquid_water_g_m3,
        temperature_k,
    )
    .map_err(|e| JsValue::from_str(&e))
}

#[cfg(target_arch = "wasm32")]
#[wasm_bindgen]
pub fn outage_curve(
    preset: &str,
    d_m: f64,
    kappa_total: f64,
    ratio_start_db: f64,
    ratio_stop_db: f64,
    n: usize,
) -> Result<Vec<f64>, JsValue> {
    outage_curve_impl(preset, d_m, kappa_total, ratio_start_db, ratio_stop_db, n)
        .map_err(|e| JsValue::from_str(&e))
}

#[cfg(target_arch = "wasm32")]
#[wasm_bindgen]
pub fn throughput_curve(
    preset: &str,
    d_m: f64,
    rho_db: f64,
    kappa_total: f64,
    rt_max: f64,
    n: usize,
) -> Result<Vec<f64>, JsValue> {
    throughput_curve_impl(preset, d_m, rho_db, kappa_total, rt_max, n)
        .map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pathloss_curve_shows_absorption_peaks() {
        // 1 km total path makes the molecular resonances tower over the windows
        let losses =
            pathloss_curve_impl(100.0, 600.0, 251, 1.0, 500.0, 500.0, 45.0, 7.5, 0.0, 293.15)
                .unwrap();
        assert_eq!(losses.len(), 251);
        let at = |f: f64| losses[((f - 100.0) / 2.0).round() as usize];
        assert!(at(183.0) > at(150.0) + 10.0);
        assert!(at(557.0) > at(500.0) + 20.0);
    }

    #[test]
    fn outage_curve_monotone_decreasing() {
        let po = outage_curve_impl("light", 30.0, 0.0, 0.0, 30.0, 31).unwrap();
        for w in po.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        assert!(po[0] > 0.9 && *po.last().unwrap() < 1e-6);
        assert!(outage_curve_impl("pea-soup", 30.0, 0.0, 0.0, 30.0, 11).is_err());
    }

    #[test]
    fn throughput_curve_has_interior_peak() {
        let dw = throughput_curve_impl("thick", 50.0, 50.0, 0.07, 10.0, 100).unwrap();
        let peak = dw.iter().cloned().fold(f64::MIN, f64::max);
        assert!(peak > dw[0] && peak > *dw.last().unwrap());
        assert_eq!(*dw.last().unwrap(), 0.0); // beyond the hardware ceiling
    }
}
