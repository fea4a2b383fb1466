//! Sweep commands: one swept variable, an optional family variable, CSV or
//! JSON rows out. Rows are emitted family-major in grid order, so repeated
//! runs with the same configuration are byte-identical.

use linklab_core::atmosphere::{AtmosphericState, GasMixture, SpectralLine};
use linklab_core::channel::{
    end_to_end_gain, fading_from_condition, FogPreset, GainBreakdown, ProductChannelDist,
};
use linklab_core::performance::{outage_probability, sdnr_ceiling, throughput, HardwareProfile};
use linklab_core::specfun::SeriesControl;
use linklab_core::units::db_to_linear;

use crate::config::{FogConfig, ScenarioConfig};
use crate::output::{Table, Value};
use crate::CliError;

/// `var:start:stop:count` (inclusive endpoints, linear spacing).
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub var: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    // the negated comparison rejects NaN bounds
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(CliError::Config(format!(
                "sweep spec {s:?} must be var:start:stop:count"
            )));
        }
        let num = |p: &str, what: &str| -> Result<f64, CliError> {
            p.parse()
                .map_err(|_| CliError::Config(format!("sweep {what} {p:?} is not a number")))
        };
        let count: usize = parts[3].parse().map_err(|_| {
            CliError::Config(format!("sweep count {:?} is not an integer", parts[3]))
        })?;
        if count < 2 {
            return Err(CliError::Config("sweep count must be at least 2".into()));
        }
        let start = num(parts[1], "start")?;
        let stop = num(parts[2], "stop")?;
        if !(stop > start) {
            return Err(CliError::Config(format!(
                "sweep stop {stop} must exceed start {start}"
            )));
        }
        Ok(GridSpec {
            var: parts[0].to_string(),
            start,
            stop,
            count,
        })
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64)
            .collect()
    }
}

/// `var:v1,v2,...` — values stay strings so fog presets can be family values.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub var: String,
    pub values: Vec<String>,
}

impl FamilySpec {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let (var, rest) = s
            .split_once(':')
            .ok_or_else(|| CliError::Config(format!("family spec {s:?} must be var:v1,v2,...")))?;
        let values: Vec<String> = rest.split(',').map(|v| v.trim().to_string()).collect();
        if values.is_empty() || values.iter().any(String::is_empty) {
            return Err(CliError::Config(format!(
                "family spec {s:?} has empty values"
            )));
        }
        Ok(FamilySpec {
            var: var.to_string(),
            values,
        })
    }
}

/// Assign a swept/family variable onto the scenario. Grid and family values
/// share this path, so every settable name works in either role.
fn apply_var(cfg: &mut ScenarioConfig, var: &str, value: &str) -> Result<(), CliError> {
    let num = || -> Result<f64, CliError> {
        value
            .parse::<f64>()
            .map_err(|_| CliError::Config(format!("value {value:?} for {var:?} is not a number")))
    };
    match var {
        "f_ghz" => cfg.f_ghz = num()?,
        "d1_m" => {
            // constant total span: moving the surface moves both hops
            let total = cfg.d1_m + cfg.d2_m;
            cfg.d1_m = num()?;
            cfg.d2_m = total - cfg.d1_m;
            if cfg.d2_m <= 0.0 {
                return Err(CliError::Config(format!(
                    "d1_m = {} leaves no span for the second hop (total {total})",
                    cfg.d1_m
                )));
            }
        }
        "d_m" => {
            let d = num()?;
            cfg.d1_m = d;
            cfg.d2_m = d;
        }
        "size_m" => {
            let s = num()?;
            cfg.lh_m = s;
            cfg.lv_m = s;
        }
        "psi_deg" => cfg.psi_deg = num()?,
        "rho_db" => cfg.radio.rho_db = Some(num()?),
        "rho_over_gamma_db" => {
            // normalized operating point: rho = ratio * gamma_th
            let ratio_db = num()?;
            let gamma_db = cfg.radio.gamma_th_db.unwrap_or(0.0);
            cfg.radio.gamma_th_db = Some(gamma_db);
            cfg.radio.rho_db = Some(ratio_db + gamma_db);
        }
        "ps_over_sigma_db" => {
            cfg.radio.p_s_w = Some(db_to_linear(num()?));
            cfg.radio.sigma_n2_w = Some(1.0);
        }
        "gamma_th_db" => cfg.radio.gamma_th_db = Some(num()?),
        "rt" => cfg.radio.r_t = Some(num()?),
        "kappa_total" => {
            let hw =
                HardwareProfile::from_total(num()?).map_err(|e| CliError::Config(e.to_string()))?;
            cfg.kappa_t = hw.kappa_t;
            cfg.kappa_r = hw.kappa_r;
        }
        "kappa_t_r" => {
            let k = num()?;
            cfg.kappa_t = k;
            cfg.kappa_r = k;
        }
        "preset" => {
            cfg.fog = FogConfig::Preset(
                value
                    .parse::<FogPreset>()
                    .map_err(|e| CliError::Config(e.to_string()))?,
            );
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown sweep/family variable {other:?} (f_ghz, d1_m, d_m, size_m, psi_deg, \
                 rho_db, rho_over_gamma_db, ps_over_sigma_db, gamma_th_db, rt, kappa_total, \
                 kappa_t_r, preset)"
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepCommand {
    PathlossF,
    PathlossD1,
    OutageF,
    OutageRho,
    OutageD1,
    OutageKappa,
    ThroughputRt,
    ThroughputPsi,
    ThroughputD1,
}

impl SweepCommand {
    pub fn default_grid(&self) -> GridSpec {
        let (var, start, stop, count) = match self {
            SweepCommand::PathlossF => ("f_ghz", 100.0, 1000.0, 451),
            SweepCommand::PathlossD1 => ("d1_m", 1.0, 99.0, 99),
            SweepCommand::OutageF => ("f_ghz", 100.0, 400.0, 151),
            SweepCommand::OutageRho => ("rho_over_gamma_db", 0.0, 40.0, 81),
            SweepCommand::OutageD1 => ("d1_m", 1.0, 99.0, 99),
            SweepCommand::OutageKappa => ("kappa_total", 0.0, 0.6, 61),
            SweepCommand::ThroughputRt => ("rt", 0.25, 12.0, 48),
            SweepCommand::ThroughputPsi => ("psi_deg", 5.0, 85.0, 81),
            SweepCommand::ThroughputD1 => ("d1_m", 1.0, 99.0, 99),
        };
        GridSpec {
            var: var.to_string(),
            start,
            stop,
            count,
        }
    }

    pub fn default_family(&self) -> Option<FamilySpec> {
        let (var, values): (&str, &[&str]) = match self {
            SweepCommand::PathlossF => ("size_m", &["0.25", "0.5", "1"]),
            SweepCommand::PathlossD1 => ("f_ghz", &["100", "300", "400", "500"]),
            SweepCommand::OutageF => ("ps_over_sigma_db", &["60", "80", "100", "120"]),
            SweepCommand::OutageRho => ("d_m", &["30", "50"]),
            SweepCommand::OutageD1 => ("rho_over_gamma_db", &["20", "30", "40"]),
            SweepCommand::OutageKappa => ("gamma_th_db", &["0", "5", "10"]),
            SweepCommand::ThroughputRt => ("rho_db", &["30", "40"]),
            SweepCommand::ThroughputPsi => ("kappa_t_r", &["0", "0.1"]),
            SweepCommand::ThroughputD1 => ("psi_deg", &["45", "60", "75"]),
        };
        Some(FamilySpec {
            var: var.to_string(),
            values: values.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn kind(&self) -> Kind {
        match self {
            SweepCommand::PathlossF | SweepCommand::PathlossD1 => Kind::Pathloss,
            SweepCommand::OutageF
            | SweepCommand::OutageRho
            | SweepCommand::OutageD1
            | SweepCommand::OutageKappa => Kind::Outage,
            SweepCommand::ThroughputRt
            | SweepCommand::ThroughputPsi
            | SweepCommand::ThroughputD1 => Kind::Throughput,
        }
    }

    /// Whether the operating point folds the deterministic gain into ρ
    /// (transmit power given) or sweeps the normalized ρ/γ_th axis.
    fn physical(&self) -> bool {
        matches!(
            self,
            SweepCommand::OutageF | SweepCommand::ThroughputPsi | SweepCommand::ThroughputD1
        )
    }
}

enum Kind {
    Pathloss,
    Outage,
    Throughput,
}

/// Everything resolved for one evaluation point.
struct Point<'a> {
    cfg: ScenarioConfig,
    catalog: &'a [SpectralLine],
    ctl: &'a SeriesControl,
}

impl Point<'_> {
    fn gain(&self) -> Result<GainBreakdown, CliError> {
        let geom = self.cfg.geometry()?;
        let state = self.cfg.atmosphere()?;
        let mix = GasMixture::from_state(&state).map_err(|e| CliError::Config(e.to_string()))?;
        end_to_end_gain(&geom, &state, &mix, self.catalog).map_err(|e| CliError::Run(e.to_string()))
    }

    fn product_dist(&self) -> ProductChannelDist {
        let (hop1, hop2) = self.cfg.fog.conditions();
        ProductChannelDist::new(
            fading_from_condition(&hop1, self.cfg.d1_m),
            fading_from_condition(&hop2, self.cfg.d2_m),
        )
    }

    /// ρ for the operating point: physical mode computes h_g² P_s/σ_n²,
    /// normalized mode reads rho_db directly.
    fn rho(&self, physical: bool) -> Result<f64, CliError> {
        if physical {
            let (p_s, sigma) = match (self.cfg.radio.p_s_w, self.cfg.radio.sigma_n2_w) {
                (Some(p), Some(s)) => (p, s),
                _ => {
                    return Err(CliError::Config(
                        "this command folds the deterministic gain into rho: give [radio] \
                         p_s_w and sigma_n2_w (or the ps_over_sigma_db family)"
                            .into(),
                    ))
                }
            };
            let h_g = self.gain()?.total();
            Ok(h_g * h_g * p_s / sigma)
        } else {
            self.cfg
                .radio
                .rho_db
                .map(db_to_linear)
                .ok_or_else(|| CliError::Config("[radio] rho_db is required".into()))
        }
    }

    fn gamma_th(&self) -> Result<f64, CliError> {
        match (self.cfg.radio.gamma_th_db, self.cfg.radio.r_t) {
            (Some(g), None) => Ok(db_to_linear(g)),
            (None, Some(rt)) => Ok(2f64.powf(rt) - 1.0),
            (None, None) => Err(CliError::Config(
                "[radio] needs gamma_th_db or r_t for outage/throughput commands".into(),
            )),
            (Some(_), Some(_)) => unreachable!("rejected at load"),
        }
    }

    fn r_t(&self) -> Result<f64, CliError> {
        match (self.cfg.radio.r_t, self.cfg.radio.gamma_th_db) {
            (Some(rt), _) => Ok(rt),
            (None, Some(g)) => Ok((1.0 + db_to_linear(g)).log2()),
            (None, None) => Err(CliError::Config(
                "[radio] needs r_t or gamma_th_db for throughput commands".into(),
            )),
        }
    }
}

/// Run a sweep command and collect the output table.
pub fn run_sweep(
    command: SweepCommand,
    base: &ScenarioConfig,
    grid: &GridSpec,
    family: Option<&FamilySpec>,
    catalog: &[SpectralLine],
) -> Result<Table, CliError> {
    let ctl = SeriesControl::default();
    let family_cols: Vec<(String, String)> = match family {
        Some(f) => f
            .values
            .iter()
            .map(|v| (f.var.clone(), v.clone()))
            .collect(),
        None => vec![(String::new(), String::new())],
    };

    let mut header = vec![grid.var.clone()];
    if let Some(f) = family {
        header.push(f.var.clone());
    }
    // the resolved rho column is redundant when rho_db itself is swept
    let emit_rho = !header.iter().any(|h| h == "rho_db");
    match command.kind() {
        Kind::Pathloss => header.extend(
            [
                "loss_total_db",
                "loss_free_space_db",
                "loss_molecular_db",
                "loss_fog_db",
                "h_g",
            ]
            .map(String::from),
        ),
        Kind::Outage | Kind::Throughput => {
            if emit_rho {
                header.push("rho_db".into());
            }
            match command.kind() {
                Kind::Outage => header.extend(["p_o", "gamma_th_valid"].map(String::from)),
                _ => header.extend(["d_over_w_bits_s_hz", "p_o", "rt_valid"].map(String::from)),
            }
        }
    }

    // resolve every (family value, grid point) configuration up front so the
    // evaluations can run concurrently; rows keep grid-index order
    type Job = (f64, Option<(String, String)>, ScenarioConfig);
    let mut jobs: Vec<Job> = Vec::new();
    for (fam_var, fam_value) in &family_cols {
        let mut fam_cfg = base.clone();
        if !fam_var.is_empty() {
            apply_var(&mut fam_cfg, fam_var, fam_value)?;
        }
        for x in grid.points() {
            let mut cfg = fam_cfg.clone();
            apply_var(&mut cfg, &grid.var, &format!("{x:.12e}"))?;
            let fam = (!fam_var.is_empty()).then(|| (fam_var.clone(), fam_value.clone()));
            jobs.push((x, fam, cfg));
        }
    }

    let evaluate = |(x, fam, cfg): &Job| {
        let point = Point {
            cfg: cfg.clone(),
            catalog,
            ctl: &ctl,
        };
        let mut row = vec![Value::Num(*x)];
        if let Some((_, fam_value)) = fam {
            row.push(match fam_value.parse::<f64>() {
                Ok(v) => Value::Num(v),
                Err(_) => Value::Text(fam_value.clone()),
            });
        }
        match command.kind() {
            Kind::Pathloss => {
                let g = point.gain()?;
                row.extend([
                    Value::Num(g.loss_db()),
                    Value::Num(g.free_space_loss_db()),
                    Value::Num(g.molecular_loss_db()),
                    Value::Num(g.fog_loss_db()),
                    Value::Num(g.total()),
                ]);
            }
            Kind::Outage => {
                let rho = point.rho(command.physical())?;
                let gamma_th = point.gamma_th()?;
                let hw = point.cfg.hardware()?;
                let dist = point.product_dist();
                let p_o = outage_probability(gamma_th, rho, &dist, &hw, point.ctl)
                    .map_err(|e| CliError::Run(e.to_string()))?;
                let valid = gamma_th < sdnr_ceiling(rho, &hw);
                if emit_rho {
                    row.push(Value::Num(linklab_core::units::linear_to_db(rho)));
                }
                row.extend([Value::Num(p_o), Value::Flag(valid)]);
            }
            Kind::Throughput => {
                let rho = point.rho(command.physical())?;
                let rt = point.r_t()?;
                let hw = point.cfg.hardware()?;
                let dist = point.product_dist();
                let w = point.cfg.radio.w_hz;
                let d = throughput(w, rt, rho, &dist, &hw, point.ctl)
                    .map_err(|e| CliError::Run(e.to_string()))?;
                let gamma_th = 2f64.powf(rt) - 1.0;
                let valid = gamma_th < sdnr_ceiling(rho, &hw);
                let p_o = if valid { 1.0 - d / (w * rt) } else { 1.0 };
                if emit_rho {
                    row.push(Value::Num(linklab_core::units::linear_to_db(rho)));
                }
                row.extend([Value::Num(d / w), Value::Num(p_o), Value::Flag(valid)]);
            }
        }
        Ok(row)
    };

    let rows: Result<Vec<Vec<Value>>, CliError> = {
        use rayon::prelude::*;
        jobs.par_iter().map(evaluate).collect()
    };
    let mut table = Table::new(header);
    for row in rows? {
        table.push(row);
    }
    Ok(table)
}

/// Validate one state snapshot for tests and the wasm demo.
pub fn gain_for(cfg: &ScenarioConfig, catalog: &[SpectralLine]) -> Result<GainBreakdown, CliError> {
    let state: AtmosphericState = cfg.atmosphere()?;
    let mix = GasMixture::from_state(&state).map_err(|e| CliError::Config(e.to_string()))?;
    end_to_end_gain(&cfg.geometry()?, &state, &mix, catalog)
        .map_err(|e| CliError::Run(e.to_string()))
}
