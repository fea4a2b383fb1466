//! Property suites: bounds, monotonicity, symmetry, normalization, and
//! distributional agreement of the samplers.

use proptest::prelude::*;

use linklab_core::atmosphere::{
    fog_gain, vvw_line_shape, water_dielectric, AtmosphericState, SpectralLine,
};
use linklab_core::channel::{
    fading_cdf, fading_from_condition, product_cdf, product_pdf, FogFadingDist, FogPreset,
    ProductChannelDist,
};
use linklab_core::montecarlo::{sample_fading, RandomStream};
use linklab_core::performance::{outage_probability, HardwareProfile};
use linklab_core::specfun::{kummer_1f1, reg_upper_gamma, SeriesControl};
use linklab_core::units::db_to_linear;

proptest! {
    #[test]
    fn reg_upper_gamma_bounded_and_monotone(
        a in 0.05f64..60.0,
        x in 0.0f64..120.0,
        dx in 1e-6f64..10.0,
    ) {
        let q1 = reg_upper_gamma(a, x).unwrap();
        let q2 = reg_upper_gamma(a, x + dx).unwrap();
        prop_assert!((0.0..=1.0).contains(&q1));
        prop_assert!(q2 <= q1 + 1e-14);
    }

    #[test]
    fn kummer_transform_consistency(
        a in 0.2f64..8.0,
        db in 0.5f64..8.0,
        z in -30.0f64..-1.0,
    ) {
        // b > a keeps both routes in the positive-parameter regime
        let b = a + db;
        let ctl = SeriesControl::default();
        let direct = kummer_1f1(a, b, z, &ctl).unwrap();
        let transformed = z.exp() * kummer_1f1(b - a, b, -z, &ctl).unwrap();
        // the direct alternating sum carries terms up to ~e^{|z|}, so its
        // cancellation envelope is eps * e^{|z|} in absolute terms
        let budget = 200.0 * f64::EPSILON * z.abs().exp() + 1e-11 * transformed.abs();
        prop_assert!(
            (direct - transformed).abs() < budget,
            "a={a} b={b} z={z}: {direct} vs {transformed}"
        );
    }

    #[test]
    fn product_statistics_swap_symmetric(
        k1 in 0.5f64..40.0,
        k2 in 0.5f64..40.0,
        z1 in 0.5f64..20.0,
        z2 in 0.5f64..20.0,
        x in 1e-4f64..1.0,
    ) {
        let ctl = SeriesControl::default();
        let a = ProductChannelDist::new(
            FogFadingDist::new(k1, z1).unwrap(),
            FogFadingDist::new(k2, z2).unwrap(),
        );
        let b = ProductChannelDist::new(
            FogFadingDist::new(k2, z2).unwrap(),
            FogFadingDist::new(k1, z1).unwrap(),
        );
        let fa = product_cdf(&a, x, &ctl).unwrap();
        let fb = product_cdf(&b, x, &ctl).unwrap();
        let denom = fa.abs().max(1e-300);
        prop_assert!(((fa - fb) / denom).abs() < 1e-9, "cdf {fa} vs {fb}");
        let pa = product_pdf(&a, x, &ctl).unwrap();
        let pb = product_pdf(&b, x, &ctl).unwrap();
        if pa > 1e-290 {
            prop_assert!(((pa - pb) / pa).abs() < 1e-9, "pdf {pa} vs {pb}");
        }
    }

    #[test]
    fn fog_gain_bounded_and_monotone(
        m in 0.001f64..2.0,
        d in 1.0f64..2000.0,
        f_ghz in 1.5f64..999.0,
    ) {
        let state = AtmosphericState::new(293.15, 101_325.0, 7.5, m).unwrap();
        let g = fog_gain(f_ghz * 1e9, &state, d).unwrap();
        prop_assert!(g > 0.0 && g <= 1.0);
        // nonincreasing in both M and d
        let denser = AtmosphericState::new(293.15, 101_325.0, 7.5, m * 1.5).unwrap();
        prop_assert!(fog_gain(f_ghz * 1e9, &denser, d).unwrap() <= g);
        prop_assert!(fog_gain(f_ghz * 1e9, &state, d * 1.5).unwrap() <= g);
    }

    #[test]
    fn dielectric_parts_in_physical_range(
        f_ghz in 1.0f64..1000.0,
        t in 253.0f64..323.0,
    ) {
        let (er, ei) = water_dielectric(f_ghz * 1e9, t).unwrap();
        prop_assert!(ei > 0.0);
        prop_assert!(er > 3.52); // static-limit floor eps2
    }
}

#[test]
fn product_cdf_monotone_on_preset_grids() {
    let ctl = SeriesControl::default();
    for preset in FogPreset::ALL {
        for d in [30.0, 50.0, 100.0] {
            let dist = ProductChannelDist::symmetric(&preset.condition(), d);
            let mut prev = -1.0;
            for i in 0..200 {
                let x = (1e-6f64.ln() * (1.0 - i as f64 / 199.0)).exp();
                let f = product_cdf(&dist, x.min(1.0), &ctl).unwrap();
                assert!(
                    f >= prev - 1e-12,
                    "{} d={d}: F({x}) = {f} < {prev}",
                    preset.name()
                );
                prev = f;
            }
        }
    }
}

#[test]
fn outage_monotone_in_operating_point() {
    let ctl = SeriesControl::default();
    let dist = ProductChannelDist::symmetric(&FogPreset::Moderate.condition(), 50.0);
    let hw = HardwareProfile::from_total(0.1).unwrap();
    // nonincreasing in rho
    let mut prev = 2.0;
    for rho_db in [10.0, 15.0, 20.0, 25.0, 30.0, 40.0, 50.0] {
        let po = outage_probability(5.0, db_to_linear(rho_db), &dist, &hw, &ctl).unwrap();
        assert!(po <= prev + 1e-12);
        prev = po;
    }
    // nondecreasing in gamma_th
    let mut prev = -1.0;
    for g_db in [-5.0, 0.0, 5.0, 10.0, 15.0] {
        let po =
            outage_probability(db_to_linear(g_db), db_to_linear(30.0), &dist, &hw, &ctl).unwrap();
        assert!(po >= prev - 1e-12);
        prev = po;
    }
    // nondecreasing in total EVM
    let mut prev = -1.0;
    for kappa in [0.0, 0.05, 0.1, 0.2, 0.3, 0.4] {
        let hw = HardwareProfile::from_total(kappa).unwrap();
        let po = outage_probability(10.0, db_to_linear(25.0), &dist, &hw, &ctl).unwrap();
        assert!(po >= prev - 1e-12);
        prev = po;
    }
}

#[test]
fn outage_ordered_by_fog_severity() {
    // light < moderate < thick < dense at fixed rho/gamma_th and d
    let ctl = SeriesControl::default();
    for ratio_db in [10.0, 15.0, 20.0] {
        for d in [30.0, 50.0] {
            let po: Vec<f64> = FogPreset::ALL
                .iter()
                .map(|p| {
                    let dist = ProductChannelDist::symmetric(&p.condition(), d);
                    outage_probability(
                        1.0,
                        db_to_linear(ratio_db),
                        &dist,
                        &HardwareProfile::IDEAL,
                        &ctl,
                    )
                    .unwrap()
                })
                .collect();
            for w in po.windows(2) {
                assert!(w[0] <= w[1] * (1.0 + 1e-9), "ordering broken: {po:?}");
            }
        }
    }
}

#[test]
fn vvw_positive_and_integral_stable_under_halving() {
    let line = SpectralLine {
        molecule_id: 1,
        isotopologue_id: 1,
        nu: 6.114580,
        strength: 8.2e-23,
        gamma_air: 0.0980,
        gamma_self: 0.480,
        n_air: 0.78,
    };
    let f0 = line.center_frequency_hz();
    let alpha = 3.0e9;
    let integrate = |n: usize| {
        let (a, b) = (f0 - 50.0 * alpha, f0 + 50.0 * alpha);
        let h = (b - a) / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let f = a + i as f64 * h;
            let v = vvw_line_shape(f, &line, alpha);
            assert!(v > 0.0);
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            acc += w * v;
        }
        acc * h
    };
    let coarse = integrate(40_000);
    let fine = integrate(80_000);
    assert!(coarse.is_finite() && fine.is_finite());
    assert!(((coarse - fine) / fine).abs() < 1e-6);
}

#[test]
fn sampler_empirical_cdf_within_dkw_band() {
    // Dvoretzky-Kiefer-Wolfowitz 99% band at n = 1e6
    let dist = fading_from_condition(&FogPreset::Light.condition(), 30.0);
    let n = 1_000_000usize;
    let mut samples = sample_fading(&dist, &RandomStream::new(2024, 17), n);
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let eps = ((2.0f64 / 0.01).ln() / (2.0 * n as f64)).sqrt();
    let mut worst = 0.0f64;
    for (i, &x) in samples.iter().enumerate().step_by(97) {
        let f = fading_cdf(&dist, x).unwrap();
        let emp_hi = (i + 1) as f64 / n as f64;
        let emp_lo = i as f64 / n as f64;
        worst = worst.max((f - emp_hi).abs().max((f - emp_lo).abs()));
    }
    assert!(worst <= eps, "sup deviation {worst} > DKW band {eps}");
}

#[test]
fn sampler_passes_kolmogorov_smirnov() {
    // KS at alpha = 0.01 for n = 1e5 against the closed CDF
    let dist = fading_from_condition(&FogPreset::Moderate.condition(), 50.0);
    let n = 100_000usize;
    let mut samples = sample_fading(&dist, &RandomStream::new(7, 99), n);
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut d_stat = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = fading_cdf(&dist, x).unwrap();
        d_stat = d_stat
            .max((f - (i + 1) as f64 / n as f64).abs())
            .max((f - i as f64 / n as f64).abs());
    }
    let critical = 1.6276 / (n as f64).sqrt();
    assert!(d_stat < critical, "KS statistic {d_stat} >= {critical}");
}
