//! End-to-end channel: deterministic gain and geometric loss, the per-hop
//! fog-fading law, and the distribution of the two-hop product gain.
//!
//! The deterministic amplitude gain factors as h_g = h_{g,f} h_{g,m} h_f
//! (free space × molecular absorption × fog), and the geometric power loss
//! is P_L = 1/h_g². Fog fading on hop i is the random amplitude h_i in
//! (0, 1] whose negative log is Gamma-distributed with shape k_i and rate
//! ζ_i = 4.343/(β_i d_i[km]).

use crate::atmosphere::{self, AtmosphericState, GasMixture, SpectralLine};
use crate::error::{Error, Result};
use crate::phys;
use crate::specfun::{self, SeriesControl};
use crate::units;

// ---------------------------------------------------------------------------
// geometry and deterministic gains
// ---------------------------------------------------------------------------

/// Link geometry of the reflect-relay hop pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    /// TX–surface distance, m.
    pub d1_m: f64,
    /// Surface–RX distance, m.
    pub d2_m: f64,
    /// Beam incidence angle at the surface, rad.
    pub psi_rad: f64,
    /// Surface width, m.
    pub l_h_m: f64,
    /// Surface height, m.
    pub l_v_m: f64,
    /// TX antenna power gain, linear.
    pub g_t: f64,
    /// RX antenna power gain, linear.
    pub g_r: f64,
    /// Carrier frequency, Hz.
    pub f_hz: f64,
}

impl LinkGeometry {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        d1_m: f64,
        d2_m: f64,
        psi_rad: f64,
        l_h_m: f64,
        l_v_m: f64,
        g_t: f64,
        g_r: f64,
        f_hz: f64,
    ) -> Result<Self> {
        if !(d1_m > 0.0 && d2_m > 0.0 && l_h_m > 0.0 && l_v_m > 0.0) {
            return Err(Error::domain(
                "LinkGeometry",
                "distances and surface dimensions must be positive".to_string(),
            ));
        }
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&psi_rad) {
            return Err(Error::domain(
                "LinkGeometry",
                format!("incidence angle {psi_rad} rad outside [0, pi/2)"),
            ));
        }
        if !(g_t >= 1.0 && g_r >= 1.0) {
            return Err(Error::domain(
                "LinkGeometry",
                "antenna power gains must be >= 1".to_string(),
            ));
        }
        if !(f_hz > 0.0) {
            return Err(Error::domain(
                "LinkGeometry",
                format!("frequency {f_hz} must be positive"),
            ));
        }
        Ok(LinkGeometry {
            d1_m,
            d2_m,
            psi_rad,
            l_h_m,
            l_v_m,
            g_t,
            g_r,
            f_hz,
        })
    }

    pub fn total_distance_m(&self) -> f64 {
        self.d1_m + self.d2_m
    }
}

/// Free-space amplitude gain of the reflected path:
/// h_{g,f} = c √(G_t G_r) l_h l_v cos ψ / (4π f d₁ d₂).
///
/// May exceed 1 for large apertures at short range; no clamping.
pub fn free_space_gain(geom: &LinkGeometry) -> f64 {
    // d1*d2 grouped so swapping the hop distances is bit-exact
    phys::C * (geom.g_t * geom.g_r).sqrt() * geom.l_h_m * geom.l_v_m * geom.psi_rad.cos()
        / (4.0 * std::f64::consts::PI * geom.f_hz * (geom.d1_m * geom.d2_m))
}

/// Molecular absorption amplitude gain over the full path:
/// h_{g,m} = exp(-κ_m (d₁+d₂)/2), in (0, 1].
pub fn molecular_gain(kappa_m: f64, d_total_m: f64) -> f64 {
    debug_assert!(kappa_m >= 0.0);
    (-0.5 * kappa_m * d_total_m).exp()
}

/// Deterministic gain split into its three factors (amplitude domain) with
/// the corresponding power losses in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainBreakdown {
    pub free_space: f64,
    pub molecular: f64,
    pub fog: f64,
    pub kappa_m: f64,
}

impl GainBreakdown {
    pub fn total(&self) -> f64 {
        self.free_space * self.molecular * self.fog
    }

    pub fn loss_db(&self) -> f64 {
        units::amplitude_gain_to_loss_db(self.total())
    }

    pub fn free_space_loss_db(&self) -> f64 {
        units::amplitude_gain_to_loss_db(self.free_space)
    }

    pub fn molecular_loss_db(&self) -> f64 {
        units::amplitude_gain_to_loss_db(self.molecular)
    }

    pub fn fog_loss_db(&self) -> f64 {
        units::amplitude_gain_to_loss_db(self.fog)
    }
}

/// End-to-end deterministic gain h_g = h_{g,f} h_{g,m} h_f with the three
/// factors reported separately for diagnostics.
pub fn end_to_end_gain(
    geom: &LinkGeometry,
    state: &AtmosphericState,
    mix: &GasMixture,
    catalog: &[SpectralLine],
) -> Result<GainBreakdown> {
    let d_total = geom.total_distance_m();
    let kappa_m = atmosphere::molecular_absorption_kappa(geom.f_hz, state, mix, catalog)?;
    Ok(GainBreakdown {
        free_space: free_space_gain(geom),
        molecular: molecular_gain(kappa_m, d_total),
        fog: atmosphere::fog_gain(geom.f_hz, state, d_total)?,
        kappa_m,
    })
}

// ---------------------------------------------------------------------------
// fog fading law
// ---------------------------------------------------------------------------

/// Fog condition of one hop: shape k and attenuation parameter β in dB/km.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FogCondition {
    pub k: f64,
    pub beta_db_km: f64,
}

/// The four measured fog presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FogPreset {
    Light,
    Moderate,
    Thick,
    Dense,
}

impl FogPreset {
    pub const ALL: [FogPreset; 4] = [
        FogPreset::Light,
        FogPreset::Moderate,
        FogPreset::Thick,
        FogPreset::Dense,
    ];

    pub fn condition(self) -> FogCondition {
        match self {
            FogPreset::Light => FogCondition {
                k: 2.32,
                beta_db_km: 13.12,
            },
            FogPreset::Moderate => FogCondition {
                k: 5.49,
                beta_db_km: 12.06,
            },
            FogPreset::Thick => FogCondition {
                k: 6.0,
                beta_db_km: 23.0,
            },
            FogPreset::Dense => FogCondition {
                k: 36.06,
                beta_db_km: 11.91,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FogPreset::Light => "light",
            FogPreset::Moderate => "moderate",
            FogPreset::Thick => "thick",
            FogPreset::Dense => "dense",
        }
    }
}

impl std::str::FromStr for FogPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "light" => Ok(FogPreset::Light),
            "moderate" => Ok(FogPreset::Moderate),
            "thick" => Ok(FogPreset::Thick),
            "dense" => Ok(FogPreset::Dense),
            other => Err(Error::domain(
                "FogPreset",
                format!("unknown fog preset {other:?} (light|moderate|thick|dense)"),
            )),
        }
    }
}

/// Logarithmic fading law of one hop: -ln h ~ Gamma(shape k, rate ζ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FogFadingDist {
    pub k: f64,
    pub zeta: f64,
}

impl FogFadingDist {
    pub fn new(k: f64, zeta: f64) -> Result<Self> {
        if !(k > 0.0 && zeta > 0.0) {
            return Err(Error::domain(
                "FogFadingDist",
                format!("k = {k} and zeta = {zeta} must be positive"),
            ));
        }
        Ok(FogFadingDist { k, zeta })
    }
}

/// ζ = 4.343 / (β d), with d expressed in kilometres (β carries dB/km).
pub fn fading_from_condition(cond: &FogCondition, d_m: f64) -> FogFadingDist {
    debug_assert!(d_m > 0.0);
    FogFadingDist {
        k: cond.k,
        zeta: 4.343 / (cond.beta_db_km * d_m / 1000.0),
    }
}

fn check_unit_interval(op: &'static str, x: f64) -> Result<()> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::domain(op, format!("x = {x} outside (0, 1]")));
    }
    Ok(())
}

/// Fading density f(x) = ζ^k/Γ(k) x^{ζ-1} (ln(1/x))^{k-1} on (0, 1].
///
/// Exponent ζ-1 on x: this is the change of variables h = e^{-Y} of the
/// Gamma(k, rate ζ) density, and the only form whose integral is the
/// incomplete-gamma CDF below.
pub fn fading_pdf(dist: &FogFadingDist, x: f64) -> Result<f64> {
    check_unit_interval("fading_pdf", x)?;
    let w = -x.ln();
    if w == 0.0 {
        // x = 1 endpoint: finite only for k >= 1
        return Ok(if dist.k > 1.0 {
            0.0
        } else if dist.k == 1.0 {
            dist.zeta
        } else {
            f64::INFINITY
        });
    }
    let ln_f = dist.k * dist.zeta.ln() - specfun::ln_gamma(dist.k)?
        + (dist.zeta - 1.0) * x.ln()
        + (dist.k - 1.0) * w.ln();
    Ok(ln_f.exp())
}

/// Fading CDF F(x) = Γ(k, ζ ln(1/x)) / Γ(k) = Q(k, ζ ln(1/x)).
pub fn fading_cdf(dist: &FogFadingDist, x: f64) -> Result<f64> {
    check_unit_interval("fading_cdf", x)?;
    specfun::reg_upper_gamma(dist.k, dist.zeta * (1.0 / x).ln())
}

// ---------------------------------------------------------------------------
// product channel A = h1 h2
// ---------------------------------------------------------------------------

/// Distribution of the product of the two independent hop gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductChannelDist {
    pub hop1: FogFadingDist,
    pub hop2: FogFadingDist,
}

impl ProductChannelDist {
    pub fn new(hop1: FogFadingDist, hop2: FogFadingDist) -> Self {
        ProductChannelDist { hop1, hop2 }
    }

    /// Both hops drawn from the same fog condition at distance d (the
    /// symmetric configuration used by the preset sweeps).
    pub fn symmetric(cond: &FogCondition, d_m: f64) -> Self {
        let hop = fading_from_condition(cond, d_m);
        ProductChannelDist {
            hop1: hop,
            hop2: hop,
        }
    }
}

/// Product-channel density
/// f_A(x) = ζ₁^{k₁} ζ₂^{k₂} / Γ(k₁+k₂) · x^{ζ₂-1} (-ln x)^{k₁+k₂-1}
///          ₁F₁(k₁; k₁+k₂; (ζ₁-ζ₂) ln x).
///
/// The hops are relabelled internally so the ₁F₁ argument is nonnegative
/// (the Kummer transform of the printed form), which keeps every series
/// term positive; the assembly then runs in log space.
pub fn product_pdf(dist: &ProductChannelDist, x: f64, ctl: &SeriesControl) -> Result<f64> {
    check_unit_interval("product_pdf", x)?;
    let (k1, z1, k2, z2) = (dist.hop1.k, dist.hop1.zeta, dist.hop2.k, dist.hop2.zeta);
    let kk = k1 + k2;
    let w = -x.ln();
    if w == 0.0 {
        return Ok(if kk > 1.0 {
            0.0
        } else if kk == 1.0 {
            (k1 * z1.ln() + k2 * z2.ln() - specfun::ln_gamma(kk)?).exp()
        } else {
            f64::INFINITY
        });
    }
    // label so that hop "2" carries the larger rate: the 1F1 argument
    // (z_max - z_min) w is then >= 0
    let (ka, za, zb) = if z2 >= z1 { (k1, z1, z2) } else { (k2, z2, z1) };
    let ln_f1f1 = specfun::ln_kummer_1f1_pos(ka, kk, (zb - za) * w, ctl)?;
    let ln_f = k1 * z1.ln() + k2 * z2.ln() - specfun::ln_gamma(kk)?
        + (zb - 1.0) * x.ln()
        + (kk - 1.0) * w.ln()
        + ln_f1f1;
    Ok(ln_f.exp())
}

/// Product-channel CDF F_A(x) = P(h₁h₂ <= x).
///
/// Evaluated through the positive-term expansion of the two-index series
/// (see [`specfun::lauricella_ha_series`]); the raw value is clamped to
/// [0, 1] only when within 1e-9 of the boundary, anything further out
/// raises a consistency error.
pub fn product_cdf(dist: &ProductChannelDist, x: f64, ctl: &SeriesControl) -> Result<f64> {
    check_unit_interval("product_cdf", x)?;
    if x == 1.0 {
        return Ok(1.0);
    }
    let raw = specfun::product_cdf_kernel(
        dist.hop1.k,
        dist.hop1.zeta,
        dist.hop2.k,
        dist.hop2.zeta,
        -x.ln(),
        ctl,
    )?;
    if !(-1e-9..=1.0 + 1e-9).contains(&raw) {
        return Err(Error::Consistency {
            op: "product_cdf",
            value: raw,
        });
    }
    Ok(raw.clamp(0.0, 1.0))
}

/// Density of the end-to-end coefficient A_t = h_g A: (1/h_g) f_A(x/h_g).
pub fn end_to_end_pdf(
    h_g: f64,
    dist: &ProductChannelDist,
    x: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    if !(x > 0.0 && x <= h_g) {
        return Err(Error::domain(
            "end_to_end_pdf",
            format!("x = {x} outside (0, h_g = {h_g}]"),
        ));
    }
    Ok(product_pdf(dist, x / h_g, ctl)? / h_g)
}

/// CDF of the end-to-end coefficient A_t = h_g A: F_A(x/h_g).
pub fn end_to_end_cdf(
    h_g: f64,
    dist: &ProductChannelDist,
    x: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    if !(x > 0.0 && x <= h_g) {
        return Err(Error::domain(
            "end_to_end_cdf",
            format!("x = {x} outside (0, h_g = {h_g}]"),
        ));
    }
    product_cdf(dist, (x / h_g).min(1.0), ctl)
}
