//! Scenario configuration: flat-section key/value files with hard errors on
//! unknown keys and cross-field invariant violations.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use linklab_core::atmosphere::{load_catalog_dir, AtmosphericState, SpectralLine};
use linklab_core::channel::{FogCondition, FogPreset, LinkGeometry};
use linklab_core::performance::HardwareProfile;

use crate::CliError;

/// Radio operating-point configuration. Exactly one of {`rho_db`,
/// `p_s_w` + `sigma_n2_w`} may be given, and at most one of {`gamma_th_db`,
/// `r_t`}.
#[derive(Debug, Clone, Default)]
pub struct RadioConfig {
    pub rho_db: Option<f64>,
    pub p_s_w: Option<f64>,
    pub sigma_n2_w: Option<f64>,
    pub gamma_th_db: Option<f64>,
    pub r_t: Option<f64>,
    pub w_hz: f64,
}

/// Fog configuration: a named preset or explicit per-hop (k, β).
#[derive(Debug, Clone)]
pub enum FogConfig {
    Preset(FogPreset),
    Explicit {
        hop1: FogCondition,
        hop2: FogCondition,
    },
}

impl FogConfig {
    pub fn conditions(&self) -> (FogCondition, FogCondition) {
        match self {
            FogConfig::Preset(p) => (p.condition(), p.condition()),
            FogConfig::Explicit { hop1, hop2 } => (*hop1, *hop2),
        }
    }
}

/// Full scenario: geometry, atmosphere, fog, hardware, radio, catalog.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub d1_m: f64,
    pub d2_m: f64,
    pub psi_deg: f64,
    pub lh_m: f64,
    pub lv_m: f64,
    pub gt_dbi: f64,
    pub gr_dbi: f64,
    pub f_ghz: f64,
    pub temperature_k: f64,
    pub pressure_pa: f64,
    pub water_vapor_g_m3: f64,
    pub liquid_water_g_m3: f64,
    pub catalog_dir: Option<PathBuf>,
    pub fog: FogConfig,
    pub kappa_t: f64,
    pub kappa_r: f64,
    pub radio: RadioConfig,
}

impl Default for ScenarioConfig {
    /// The documented baseline: 50 dBi antennas, 1 m² surface, ψ = 45°,
    /// T = 293.15 K, p = 101300 Pa, water vapour 7.5 g/m³, 50 m + 50 m at
    /// 100 GHz, moderate fog, ideal hardware, no suspended liquid water.
    fn default() -> Self {
        ScenarioConfig {
            d1_m: 50.0,
            d2_m: 50.0,
            psi_deg: 45.0,
            lh_m: 1.0,
            lv_m: 1.0,
            gt_dbi: 50.0,
            gr_dbi: 50.0,
            f_ghz: 100.0,
            temperature_k: 293.15,
            pressure_pa: 101_300.0,
            water_vapor_g_m3: 7.5,
            liquid_water_g_m3: 0.0,
            catalog_dir: None,
            fog: FogConfig::Preset(FogPreset::Moderate),
            kappa_t: 0.0,
            kappa_r: 0.0,
            radio: RadioConfig {
                w_hz: 1.0,
                ..RadioConfig::default()
            },
        }
    }
}

impl ScenarioConfig {
    pub fn geometry(&self) -> Result<LinkGeometry, CliError> {
        LinkGeometry::new(
            self.d1_m,
            self.d2_m,
            self.psi_deg.to_radians(),
            self.lh_m,
            self.lv_m,
            linklab_core::units::dbi_to_linear(self.gt_dbi),
            linklab_core::units::dbi_to_linear(self.gr_dbi),
            self.f_ghz * 1e9,
        )
        .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn atmosphere(&self) -> Result<AtmosphericState, CliError> {
        AtmosphericState::new(
            self.temperature_k,
            self.pressure_pa,
            self.water_vapor_g_m3,
            self.liquid_water_g_m3,
        )
        .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn hardware(&self) -> Result<HardwareProfile, CliError> {
        HardwareProfile::new(self.kappa_t, self.kappa_r)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    /// Catalog resolution order: --catalog flag, LINKLAB_CATALOG_DIR, the
    /// config's catalog_dir, then the bundled data.
    pub fn load_catalog(
        &self,
        flag_override: Option<&Path>,
    ) -> Result<Vec<SpectralLine>, CliError> {
        let dir = flag_override
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("LINKLAB_CATALOG_DIR").map(PathBuf::from))
            .or_else(|| self.catalog_dir.clone());
        match dir {
            Some(d) => load_catalog_dir(&d).map_err(|e| CliError::Config(e.to_string())),
            None => Ok(linklab_core::atmosphere::bundled_catalog()),
        }
    }
}

struct RawSection {
    entries: BTreeMap<String, (String, usize)>,
}

fn parse_sections(text: &str) -> Result<BTreeMap<String, RawSection>, CliError> {
    let mut sections: BTreeMap<String, RawSection> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            let name = line
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| {
                    CliError::Config(format!("line {line_no}: malformed section header {line:?}"))
                })?
                .trim()
                .to_string();
            sections.entry(name.clone()).or_insert_with(|| RawSection {
                entries: BTreeMap::new(),
            });
            current = Some(name);
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "line {line_no}: expected key = value, got {line:?}"
            ))
        })?;
        let section = current.clone().ok_or_else(|| {
            CliError::Config(format!("line {line_no}: key outside of any [section]"))
        })?;
        sections
            .get_mut(&section)
            .expect("section inserted above")
            .entries
            .insert(key.trim().to_string(), (value.trim().to_string(), line_no));
    }
    Ok(sections)
}

struct SectionReader {
    name: &'static str,
    entries: BTreeMap<String, (String, usize)>,
}

impl SectionReader {
    fn take(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key).map(|(v, _)| v)
    }

    fn take_f64(&mut self, key: &str) -> Result<Option<f64>, CliError> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<f64>().map(Some).map_err(|_| {
                CliError::Config(format!(
                    "line {line}: [{}] {key} = {v:?} is not a number",
                    self.name
                ))
            }),
        }
    }

    fn finish(self) -> Result<(), CliError> {
        if let Some((key, (_, line))) = self.entries.into_iter().next() {
            return Err(CliError::Config(format!(
                "line {line}: unknown key {key:?} in section [{}]",
                self.name
            )));
        }
        Ok(())
    }
}

/// Load and fully validate a scenario file. Missing keys fall back to the
/// documented defaults; unknown sections or keys are hard errors.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig, CliError> {
    let mut sections = parse_sections(text)?;
    let mut cfg = ScenarioConfig::default();

    let known = ["geometry", "atmosphere", "fog", "hardware", "radio"];
    if let Some(unknown) = sections.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(CliError::Config(format!("unknown section [{unknown}]")));
    }

    let reader = |name: &'static str, sections: &mut BTreeMap<String, RawSection>| SectionReader {
        name,
        entries: sections.remove(name).map(|s| s.entries).unwrap_or_default(),
    };

    let mut geometry = reader("geometry", &mut sections);
    if let Some(v) = geometry.take_f64("d1_m")? {
        cfg.d1_m = v;
    }
    if let Some(v) = geometry.take_f64("d2_m")? {
        cfg.d2_m = v;
    }
    if let Some(v) = geometry.take_f64("psi_deg")? {
        cfg.psi_deg = v;
    }
    if let Some(v) = geometry.take_f64("lh_m")? {
        cfg.lh_m = v;
    }
    if let Some(v) = geometry.take_f64("lv_m")? {
        cfg.lv_m = v;
    }
    if let Some(v) = geometry.take_f64("gt_dbi")? {
        cfg.gt_dbi = v;
    }
    if let Some(v) = geometry.take_f64("gr_dbi")? {
        cfg.gr_dbi = v;
    }
    if let Some(v) = geometry.take_f64("f_ghz")? {
        cfg.f_ghz = v;
    }
    geometry.finish()?;

    let mut atmosphere = reader("atmosphere", &mut sections);
    if let Some(v) = atmosphere.take_f64("temperature_k")? {
        cfg.temperature_k = v;
    }
    if let Some(v) = atmosphere.take_f64("pressure_pa")? {
        cfg.pressure_pa = v;
    }
    if let Some(v) = atmosphere.take_f64("water_vapor_g_m3")? {
        cfg.water_vapor_g_m3 = v;
    }
    if let Some(v) = atmosphere.take_f64("liquid_water_g_m3")? {
        cfg.liquid_water_g_m3 = v;
    }
    if let Some(v) = atmosphere.take("catalog_dir") {
        cfg.catalog_dir = Some(PathBuf::from(v));
    }
    atmosphere.finish()?;

    let mut fog = reader("fog", &mut sections);
    let preset = fog.take("preset");
    let k1 = fog.take_f64("k1")?;
    let beta1 = fog.take_f64("beta1_db_km")?;
    let k2 = fog.take_f64("k2")?;
    let beta2 = fog.take_f64("beta2_db_km")?;
    fog.finish()?;
    let explicit_given = [k1, beta1, k2, beta2].iter().any(Option::is_some);
    match (preset, explicit_given) {
        (Some(p), false) => {
            cfg.fog = FogConfig::Preset(
                p.parse::<FogPreset>()
                    .map_err(|e| CliError::Config(e.to_string()))?,
            );
        }
        (Some(p), true) => {
            return Err(CliError::Config(format!(
                "[fog] gives both preset = {p:?} and explicit (k, beta) values; choose one"
            )));
        }
        (None, true) => {
            let (k1, b1) = (
                k1.ok_or_else(|| CliError::Config("[fog] k1 missing".into()))?,
                beta1.ok_or_else(|| CliError::Config("[fog] beta1_db_km missing".into()))?,
            );
            let hop1 = FogCondition {
                k: k1,
                beta_db_km: b1,
            };
            let hop2 = match (k2, beta2) {
                (Some(k), Some(b)) => FogCondition { k, beta_db_km: b },
                (None, None) => hop1,
                _ => {
                    return Err(CliError::Config(
                        "[fog] k2 and beta2_db_km must be given together".into(),
                    ))
                }
            };
            cfg.fog = FogConfig::Explicit { hop1, hop2 };
        }
        (None, false) => {}
    }

    let mut hardware = reader("hardware", &mut sections);
    if let Some(v) = hardware.take_f64("kappa_t")? {
        cfg.kappa_t = v;
    }
    if let Some(v) = hardware.take_f64("kappa_r")? {
        cfg.kappa_r = v;
    }
    hardware.finish()?;

    let mut radio = reader("radio", &mut sections);
    cfg.radio.rho_db = radio.take_f64("rho_db")?;
    cfg.radio.p_s_w = radio.take_f64("p_s_w")?;
    cfg.radio.sigma_n2_w = radio.take_f64("sigma_n2_w")?;
    cfg.radio.gamma_th_db = radio.take_f64("gamma_th_db")?;
    cfg.radio.r_t = radio.take_f64("r_t")?;
    if let Some(v) = radio.take_f64("w_hz")? {
        cfg.radio.w_hz = v;
    }
    radio.finish()?;

    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &ScenarioConfig) -> Result<(), CliError> {
    if cfg.radio.rho_db.is_some() && (cfg.radio.p_s_w.is_some() || cfg.radio.sigma_n2_w.is_some()) {
        return Err(CliError::Config(format!(
            "[radio] gives both rho_db = {:?} and transmit power p_s_w = {:?} / sigma_n2_w = {:?}; \
             exactly one form may be used",
            cfg.radio.rho_db, cfg.radio.p_s_w, cfg.radio.sigma_n2_w
        )));
    }
    if cfg.radio.p_s_w.is_some() != cfg.radio.sigma_n2_w.is_some() {
        return Err(CliError::Config(
            "[radio] p_s_w and sigma_n2_w must be given together".into(),
        ));
    }
    if cfg.radio.gamma_th_db.is_some() && cfg.radio.r_t.is_some() {
        return Err(CliError::Config(format!(
            "[radio] gives both gamma_th_db = {:?} and r_t = {:?}; exactly one may be used",
            cfg.radio.gamma_th_db, cfg.radio.r_t
        )));
    }
    // construct the validated domain types so their invariants run now
    cfg.geometry()?;
    cfg.atmosphere()?;
    cfg.hardware()?;
    Ok(())
}
