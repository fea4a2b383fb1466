//! Deterministic atmospheric physics.
//!
//! Three pieces: HITRAN 2004 fixed-width line-catalog ingestion, the
//! line-by-line molecular absorption coefficient κ_m (Van Vleck–Weisskopf
//! shape with the tanh radiation ratio), and the ITU double-Debye water
//! dielectric model feeding the fog specific-attenuation coefficient κ_f and
//! the fog amplitude gain h_f.
//!
//! Line intensities in the bundled catalog are effective values calibrated
//! against published sea-level attenuation peaks under this model; the
//! parser accepts any HITRAN 2004 `.par` file.
//!
//! # Example
//!
//! ```
//! use linklab_core::atmosphere::{bundled_catalog, molecular_absorption_kappa,
//!                                AtmosphericState, GasMixture};
//!
//! let state = AtmosphericState::new(293.15, 101_325.0, 7.5, 0.0)?;
//! let mix = GasMixture::from_state(&state)?;
//! let catalog = bundled_catalog();
//! // the 183 GHz water resonance dominates the neighbouring window
//! let peak = molecular_absorption_kappa(183.31e9, &state, &mix, &catalog)?;
//! let window = molecular_absorption_kappa(150e9, &state, &mix, &catalog)?;
//! assert!(peak > 10.0 * window);
//! # Ok::<(), linklab_core::Error>(())
//! ```

use crate::error::{Error, Result};
use crate::phys;

/// Frequency validity window of the absorption model, Hz.
pub const F_MIN_HZ: f64 = 0.05e12;
pub const F_MAX_HZ: f64 = 2.0e12;

/// Far-line cutoff: lines further than this from the evaluation frequency
/// are dropped. Chosen so far-wing truncation error < 0.1 % at window
/// centres; with the bundled 0.05–1.1 THz catalog it keeps every line.
const LINE_CUTOFF_HZ: f64 = 3.0e12;

/// Bundled catalogs (HITRAN 2004 fixed-width records).
pub const BUNDLED_H2O: &str = include_str!("../data/h2o_rotational.par");
pub const BUNDLED_O2: &str = include_str!("../data/o2_microwave.par");

// ---------------------------------------------------------------------------
// domain types
// ---------------------------------------------------------------------------

/// One spectral-line record.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralLine {
    /// Catalog molecule number (1 = H2O, 7 = O2).
    pub molecule_id: u8,
    /// Catalog isotopologue number.
    pub isotopologue_id: u8,
    /// Line-centre wavenumber, cm⁻¹.
    pub nu: f64,
    /// Line intensity at reference temperature, cm⁻¹/(molecule·cm⁻²).
    pub strength: f64,
    /// Air-broadened half-width, cm⁻¹/atm.
    pub gamma_air: f64,
    /// Self-broadened half-width, cm⁻¹/atm.
    pub gamma_self: f64,
    /// Temperature exponent of the broadening.
    pub n_air: f64,
}

impl SpectralLine {
    /// Line-centre frequency in Hz (wavenumber × 100 c).
    pub fn center_frequency_hz(&self) -> f64 {
        100.0 * phys::C * self.nu
    }

    fn validate(self, line_no: usize) -> Result<Self> {
        if !(self.nu > 0.0) {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("wavenumber must be positive, got {}", self.nu),
            });
        }
        if self.strength < 0.0 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("negative line intensity {}", self.strength),
            });
        }
        if !(self.gamma_air > 0.0) || !(self.gamma_self > 0.0) {
            return Err(Error::Parse {
                line: line_no,
                msg: "half-widths must be positive".into(),
            });
        }
        Ok(self)
    }
}

/// Per-gas mole fractions, keyed by catalog molecule number.
#[derive(Debug, Clone, Default)]
pub struct GasMixture {
    fractions: Vec<(u8, f64)>,
}

impl GasMixture {
    pub fn new() -> Self {
        Self::default()
    }

    /// Set the mole fraction of a gas. Fractions must stay in [0, 1] and sum
    /// to at most 1.
    pub fn set(&mut self, molecule_id: u8, q: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::domain(
                "GasMixture",
                format!("mixing ratio {q} outside [0, 1]"),
            ));
        }
        match self.fractions.iter_mut().find(|(m, _)| *m == molecule_id) {
            Some(slot) => slot.1 = q,
            None => self.fractions.push((molecule_id, q)),
        }
        let total: f64 = self.fractions.iter().map(|(_, q)| q).sum();
        if total > 1.0 + 1e-12 {
            return Err(Error::domain(
                "GasMixture",
                format!("mixing ratios sum to {total} > 1"),
            ));
        }
        Ok(())
    }

    pub fn fraction(&self, molecule_id: u8) -> f64 {
        self.fractions
            .iter()
            .find(|(m, _)| *m == molecule_id)
            .map(|(_, q)| *q)
            .unwrap_or(0.0)
    }

    /// Water vapour + dry-air oxygen mixture implied by an atmospheric state.
    pub fn from_state(state: &AtmosphericState) -> Result<Self> {
        let q_h2o = state.water_vapor_mole_fraction();
        let mut mix = GasMixture::new();
        mix.set(1, q_h2o)?;
        mix.set(7, 0.2095 * (1.0 - q_h2o))?;
        Ok(mix)
    }
}

/// Bulk atmospheric state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtmosphericState {
    /// Temperature, K.
    pub temperature_k: f64,
    /// Total pressure, Pa.
    pub pressure_pa: f64,
    /// Water-vapour mass density, g/m³.
    pub water_vapor_g_m3: f64,
    /// Suspended liquid-water density of the fog, g/m³.
    pub liquid_water_g_m3: f64,
}

impl AtmosphericState {
    pub fn new(
        temperature_k: f64,
        pressure_pa: f64,
        water_vapor_g_m3: f64,
        liquid_water_g_m3: f64,
    ) -> Result<Self> {
        if !(200.0..=350.0).contains(&temperature_k) {
            return Err(Error::domain(
                "AtmosphericState",
                format!("temperature {temperature_k} K outside [200, 350]"),
            ));
        }
        if !(pressure_pa > 0.0) {
            return Err(Error::domain(
                "AtmosphericState",
                format!("pressure {pressure_pa} Pa must be positive"),
            ));
        }
        if water_vapor_g_m3 < 0.0 || liquid_water_g_m3 < 0.0 {
            return Err(Error::domain(
                "AtmosphericState",
                "densities must be nonnegative".to_string(),
            ));
        }
        Ok(AtmosphericState {
            temperature_k,
            pressure_pa,
            water_vapor_g_m3,
            liquid_water_g_m3,
        })
    }

    /// Partial pressure of water vapour, Pa (ideal gas).
    pub fn water_vapor_partial_pressure_pa(&self) -> f64 {
        self.water_vapor_g_m3 * 1e-3 / phys::M_H2O * phys::R * self.temperature_k
    }

    /// Mole fraction of water vapour.
    pub fn water_vapor_mole_fraction(&self) -> f64 {
        self.water_vapor_partial_pressure_pa() / self.pressure_pa
    }

    /// Relative humidity implied by the vapour density (Buck saturation
    /// pressure over water).
    pub fn relative_humidity(&self) -> f64 {
        self.water_vapor_partial_pressure_pa() / buck_saturation_pressure_pa(self.temperature_k)
    }
}

/// Buck equation: saturation vapour pressure over liquid water, Pa.
pub fn buck_saturation_pressure_pa(temperature_k: f64) -> f64 {
    let tc = temperature_k - 273.15;
    611.21 * ((18.678 - tc / 234.5) * (tc / (257.14 + tc))).exp()
}

/// Water-vapour density (g/m³) at the given relative humidity (0..=1).
pub fn vapor_density_from_relative_humidity(temperature_k: f64, rh: f64) -> f64 {
    let pw = rh * buck_saturation_pressure_pa(temperature_k);
    pw * phys::M_H2O / (phys::R * temperature_k) * 1e3
}

// ---------------------------------------------------------------------------
// catalog parsing (HITRAN 2004, 160-character records)
// ---------------------------------------------------------------------------

fn field(bytes: &[u8], line_no: usize, range: std::ops::Range<usize>) -> Result<&str> {
    std::str::from_utf8(&bytes[range]).map_err(|_| Error::Parse {
        line: line_no,
        msg: "non-ASCII bytes in record".into(),
    })
}

fn parse_num<T: std::str::FromStr>(s: &str, line_no: usize, name: &str) -> Result<T> {
    s.trim().parse::<T>().map_err(|_| Error::Parse {
        line: line_no,
        msg: format!("field {name} is not numeric: {s:?}"),
    })
}

/// Parse HITRAN 2004 fixed-width records (molecule cols 1–2, isotopologue
/// col 3, ν cols 4–15, S cols 16–25, γ_air cols 36–40, γ_self cols 41–45,
/// n_air cols 56–59). Blank lines are skipped; catalog order is preserved.
pub fn parse_line_catalog(input: &str) -> Result<Vec<SpectralLine>> {
    let mut lines = Vec::new();
    for (i, raw) in input.lines().enumerate() {
        let line_no = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let bytes = raw.as_bytes();
        if bytes.len() < 160 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("record is {} characters, expected 160", bytes.len()),
            });
        }
        let rec = SpectralLine {
            molecule_id: parse_num(field(bytes, line_no, 0..2)?, line_no, "molecule")?,
            isotopologue_id: parse_num(field(bytes, line_no, 2..3)?, line_no, "isotopologue")?,
            nu: parse_num(field(bytes, line_no, 3..15)?, line_no, "nu")?,
            strength: parse_num(field(bytes, line_no, 15..25)?, line_no, "strength")?,
            gamma_air: parse_num(field(bytes, line_no, 35..40)?, line_no, "gamma_air")?,
            gamma_self: parse_num(field(bytes, line_no, 40..45)?, line_no, "gamma_self")?,
            n_air: parse_num(field(bytes, line_no, 55..59)?, line_no, "n_air")?,
        };
        lines.push(rec.validate(line_no)?);
    }
    Ok(lines)
}

/// The bundled H2O + O2 catalog.
pub fn bundled_catalog() -> Vec<SpectralLine> {
    let mut cat = parse_line_catalog(BUNDLED_H2O).expect("bundled H2O catalog is well-formed");
    cat.extend(parse_line_catalog(BUNDLED_O2).expect("bundled O2 catalog is well-formed"));
    cat
}

/// Load every `.par` file in a directory (sorted by file name).
pub fn load_catalog_dir(dir: &std::path::Path) -> Result<Vec<SpectralLine>> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::Parse {
            line: 0,
            msg: format!("cannot read catalog directory {}: {e}", dir.display()),
        })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "par"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::EmptyCatalog);
    }
    let mut cat = Vec::new();
    for f in files {
        let text = std::fs::read_to_string(&f).map_err(|e| Error::Parse {
            line: 0,
            msg: format!("cannot read {}: {e}", f.display()),
        })?;
        cat.extend(parse_line_catalog(&text)?);
    }
    Ok(cat)
}

// ---------------------------------------------------------------------------
// line-by-line absorption
// ---------------------------------------------------------------------------

/// Pressure/temperature-scaled Lorentz half-width of a line, in Hz.
///
/// α = ((1-q) γ_air + q γ_self) (p/p₀) (T₀/T)^{n_air}, converted from cm⁻¹
/// by the 100 c wavenumber→frequency factor.
pub fn lorentz_halfwidth(line: &SpectralLine, q: f64, state: &AtmosphericState) -> f64 {
    let gamma = (1.0 - q) * line.gamma_air + q * line.gamma_self;
    gamma
        * (state.pressure_pa / phys::P_REF)
        * (phys::T_REF / state.temperature_k).powf(line.n_air)
        * 100.0
        * phys::C
}

/// Van Vleck–Weisskopf asymmetric line shape, 1/Hz.
///
/// F = (α/π) (f/f₀) [((f-f₀)² + α²)⁻¹ + ((f+f₀)² + α²)⁻¹]; the catalog
/// wavenumber and the half-width are already converted to Hz, which absorbs
/// the printed 100 c prefactor of the wavenumber-domain form.
pub fn vvw_line_shape(f_hz: f64, line: &SpectralLine, alpha_hz: f64) -> f64 {
    let f0 = line.center_frequency_hz();
    (alpha_hz / std::f64::consts::PI)
        * (f_hz / f0)
        * (1.0 / ((f_hz - f0).powi(2) + alpha_hz * alpha_hz)
            + 1.0 / ((f_hz + f0).powi(2) + alpha_hz * alpha_hz))
}

/// Molecular absorption coefficient κ_m in 1/m, summed line by line.
///
/// Per line: volumetric density Q from the gas partial pressure, radiation
/// factor G = (f/f₀) tanh(hf/2k_bT)/tanh(hf₀/2k_bT) · F, cross-section
/// σ = S·G with S converted to SI (Hz·m²), and the (p/p₀)(T₀/T) scaling.
pub fn molecular_absorption_kappa(
    f_hz: f64,
    state: &AtmosphericState,
    mix: &GasMixture,
    catalog: &[SpectralLine],
) -> Result<f64> {
    if catalog.is_empty() {
        return Err(Error::EmptyCatalog);
    }
    if !(F_MIN_HZ..=F_MAX_HZ).contains(&f_hz) {
        return Err(Error::FrequencyRange {
            f_hz,
            lo: F_MIN_HZ,
            hi: F_MAX_HZ,
        });
    }
    let t = state.temperature_k;
    let p = state.pressure_pa;
    let tanh_f = (phys::H * f_hz / (2.0 * phys::KB * t)).tanh();
    let mut kappa = 0.0;
    for line in catalog {
        let f0 = line.center_frequency_hz();
        if (f_hz - f0).abs() > LINE_CUTOFF_HZ {
            continue;
        }
        let q = mix.fraction(line.molecule_id);
        if q == 0.0 {
            continue;
        }
        let alpha = lorentz_halfwidth(line, q, state);
        let shape = vvw_line_shape(f_hz, line, alpha);
        let radiation = (f_hz / f0) * tanh_f / (phys::H * f0 / (2.0 * phys::KB * t)).tanh();
        let sigma = line.strength * 100.0 * phys::C * 1e-4 * radiation * shape;
        let density = q * p / (phys::R * t) * phys::NA;
        kappa += (p / phys::P_REF) * (phys::T_REF / t) * density * sigma;
    }
    Ok(kappa)
}

// ---------------------------------------------------------------------------
// fog: double-Debye dielectric model and specific attenuation
// ---------------------------------------------------------------------------

/// Real and imaginary parts of the dielectric permittivity of liquid water
/// (double-Debye, θ = 300/T; principal relaxation 20.20 GHz at θ = 1,
/// secondary at 39.8 f_p).
pub fn water_dielectric(f_hz: f64, temperature_k: f64) -> Result<(f64, f64)> {
    let f_ghz = f_hz / 1e9;
    if !(1.0..=1000.0).contains(&f_ghz) {
        return Err(Error::domain(
            "water_dielectric",
            format!("frequency {f_ghz} GHz outside [1, 1000]"),
        ));
    }
    if !(253.0..=323.0).contains(&temperature_k) {
        return Err(Error::domain(
            "water_dielectric",
            format!("temperature {temperature_k} K outside [253, 323]"),
        ));
    }
    let theta = 300.0 / temperature_k;
    let eps0 = 77.66 + 103.3 * (theta - 1.0);
    let eps1 = 0.0671 * eps0;
    let eps2 = 3.52;
    let fp = 20.20 - 146.0 * (theta - 1.0) + 316.0 * (theta - 1.0).powi(2);
    let fs = 39.8 * fp;
    let rp = f_ghz / fp;
    let rs = f_ghz / fs;
    let eps_r = (eps0 - eps1) / (1.0 + rp * rp) + (eps1 - eps2) / (1.0 + rs * rs) + eps2;
    let eps_i = rp * (eps0 - eps1) / (1.0 + rp * rp) + rs * (eps1 - eps2) / (1.0 + rs * rs);
    Ok((eps_r, eps_i))
}

/// Fog specific attenuation coefficient κ_f in (dB/km)/(g/m³):
/// κ_f = 0.819 f_GHz / (ε_i (1 + η²)), η = (2 + ε_r)/ε_i.
pub fn fog_specific_attenuation(f_hz: f64, temperature_k: f64) -> Result<f64> {
    let (eps_r, eps_i) = water_dielectric(f_hz, temperature_k)?;
    let eta = (2.0 + eps_r) / eps_i;
    Ok(0.819 * (f_hz / 1e9) / (eps_i * (1.0 + eta * eta)))
}

/// Fog amplitude gain over a path. The power attenuation in dB is
/// κ_f · M · d/1000 (κ_f carries dB/km per g/m³), so the amplitude gain is
/// h_f = 10^{-κ_f M (d/1000) / 20}.
pub fn fog_gain(f_hz: f64, state: &AtmosphericState, d_total_m: f64) -> Result<f64> {
    debug_assert!(d_total_m > 0.0);
    if state.liquid_water_g_m3 == 0.0 {
        return Ok(1.0);
    }
    let kf = fog_specific_attenuation(f_hz, state.temperature_k)?;
    let loss_db = kf * state.liquid_water_g_m3 * d_total_m / 1000.0;
    Ok(10f64.powf(-loss_db / 20.0))
}
