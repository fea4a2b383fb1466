//! The `validate` command: closed-form outage against Monte Carlo for a
//! default scenario matrix, with a nonzero exit status on any miss.

use linklab_core::channel::{FogPreset, ProductChannelDist};
use linklab_core::montecarlo::{empirical_outage, OutageScenario, RandomStream};
use linklab_core::performance::{outage_probability, HardwareProfile};
use linklab_core::specfun::SeriesControl;
use linklab_core::units::db_to_linear;

use crate::output::{Table, Value};

/// One comparison row.
#[derive(Debug, Clone)]
pub struct ValidationRow {
    pub preset: FogPreset,
    pub d_m: f64,
    pub ratio_db: f64,
    pub closed_form: f64,
    pub estimate: f64,
    pub ci_half_width: f64,
    pub pass: bool,
}

/// The default operating points: every preset at three (d, ρ/γ_th) pairs.
pub fn default_points() -> Vec<(FogPreset, f64, f64)> {
    let mut pts = Vec::new();
    for preset in FogPreset::ALL {
        for (d, ratio) in [(30.0, 10.0), (30.0, 15.0), (50.0, 20.0)] {
            pts.push((preset, d, ratio));
        }
    }
    pts
}

/// Run the comparison; a row passes when |closed - estimate| <= 3 x CI.
pub fn run_validation(n_samples: u64, seed: u64) -> Vec<ValidationRow> {
    let ctl = SeriesControl::default();
    default_points()
        .into_iter()
        .enumerate()
        .map(|(i, (preset, d_m, ratio_db))| {
            let dist = ProductChannelDist::symmetric(&preset.condition(), d_m);
            let rho = db_to_linear(ratio_db);
            let closed_form = outage_probability(1.0, rho, &dist, &HardwareProfile::IDEAL, &ctl)
                .expect("validated scenario");
            let scn = OutageScenario {
                dist,
                rho,
                gamma_th: 1.0,
                hw: HardwareProfile::IDEAL,
            };
            let est = empirical_outage(&scn, &RandomStream::new(seed, i as u64), n_samples);
            let pass = (closed_form - est.value).abs() <= 3.0 * est.half_width_95;
            ValidationRow {
                preset,
                d_m,
                ratio_db,
                closed_form,
                estimate: est.value,
                ci_half_width: est.half_width_95,
                pass,
            }
        })
        .collect()
}

pub fn report_table(rows: &[ValidationRow]) -> Table {
    let mut table = Table::new(
        [
            "preset",
            "d_m",
            "rho_over_gamma_db",
            "closed_form",
            "monte_carlo",
            "ci95_half_width",
            "pass",
        ]
        .map(String::from)
        .to_vec(),
    );
    for r in rows {
        table.push(vec![
            Value::Text(r.preset.name().to_string()),
            Value::Num(r.d_m),
            Value::Num(r.ratio_db),
            Value::Num(r.closed_form),
            Value::Num(r.estimate),
            Value::Num(r.ci_half_width),
            Value::Flag(r.pass),
        ]);
    }
    table
}
