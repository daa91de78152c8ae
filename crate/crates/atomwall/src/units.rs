//! Units convention, physical configuration, derived length scales, and the
//! regime map.
//!
//! Hartree atomic units throughout: `a_B = 1`, `e = 1`, `hbar = 1`, `m = 1`,
//! `c = 1/alpha_fs`. Energies in Hartree, lengths in Bohr radii. The lowest
//! dipole transition of hydrogen has `E_1 - E_0 = 3/8` Hartree, so the
//! reduced temperature is `tau = k_B T / (3/8 Ha)`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;

/// CODATA fine-structure constant.
pub const ALPHA_FS: f64 = 7.297_352_569_3e-3;
/// First hydrogen excitation energy in Hartree.
pub const E1_MINUS_E0: f64 = 0.375;
/// Distances below this many Bohr radii are outside the model's validity.
pub const NEAR_FIELD_GUARD: f64 = 10.0;
/// Ratio threshold used by the scale-hierarchy validation.
pub const HIERARCHY_RATIO: f64 = 0.1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("config line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("config line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("config line {line}: cannot parse value for `{key}`: {value}")]
    BadValue { line: usize, key: String, value: String },
    #[error("cannot read config file: {0}")]
    Io(#[from] std::io::Error),
}

/// All tunable physics of a run. Everything else derives from this.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalConfig {
    /// Fine-structure constant; configurable so tests can exaggerate the
    /// scale hierarchy.
    pub alpha_fs: f64,
    /// Reduced temperature k_B T / (E_1 - E_0).
    pub tau: f64,
    /// Screening length in Bohr radii; `None` means unscreened.
    pub lambda_screen: Option<f64>,
    /// Energy cutoff for atomic traces, in Hartree; `None` means no cutoff.
    pub e_max: Option<f64>,
    /// Multiplier on the ultraviolet mode cutoff 1/lambda_c.
    pub k_cut_scale: f64,
    /// Seed for every stochastic component of a run.
    pub rng_seed: u64,
}

impl Default for PhysicalConfig {
    fn default() -> Self {
        Self {
            alpha_fs: ALPHA_FS,
            tau: 1e-3,
            lambda_screen: None,
            e_max: None,
            k_cut_scale: 1.0,
            rng_seed: 42,
        }
    }
}

impl PhysicalConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let check = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::NonPositive { name, value: v })
            }
        };
        check("alpha_fs", self.alpha_fs)?;
        check("tau", self.tau)?;
        check("k_cut_scale", self.k_cut_scale)?;
        if let Some(l) = self.lambda_screen {
            check("lambda_screen", l)?;
        }
        Ok(())
    }

    /// Inverse temperature in Hartree^-1.
    pub fn beta(&self) -> f64 {
        1.0 / (self.tau * E1_MINUS_E0)
    }

    /// Thermal energy k_B T in Hartree.
    pub fn k_bt(&self) -> f64 {
        self.tau * E1_MINUS_E0
    }

    /// hbar c in atomic units.
    pub fn hbar_c(&self) -> f64 {
        1.0 / self.alpha_fs
    }

    /// Ultraviolet mode cutoff k_cut = k_cut_scale / lambda_c, in 1/a_B.
    pub fn k_cut(&self) -> f64 {
        self.k_cut_scale / self.alpha_fs
    }

    /// Parse a `key = value` config file and apply it over the defaults.
    pub fn from_file(path: &Path) -> Result<(Self, crate::spectrum::SpectrumParams), ConfigError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str_config(&text)
    }

    /// Parse config text. Returns the physical config together with the
    /// spectrum construction parameters that may accompany it.
    pub fn from_str_config(
        text: &str,
    ) -> Result<(Self, crate::spectrum::SpectrumParams), ConfigError> {
        let mut cfg = Self::default();
        let mut sp = crate::spectrum::SpectrumParams::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Malformed {
                    line: line_no,
                    text: raw.to_string(),
                });
            };
            let key = key.trim();
            let value = value.trim();
            let bad = |k: &str, v: &str| ConfigError::BadValue {
                line: line_no,
                key: k.to_string(),
                value: v.to_string(),
            };
            match key {
                "alpha_fs" => cfg.alpha_fs = value.parse().map_err(|_| bad(key, value))?,
                "tau" => cfg.tau = value.parse().map_err(|_| bad(key, value))?,
                "lambda_screen" => {
                    cfg.lambda_screen = if value == "inf" {
                        None
                    } else {
                        Some(value.parse().map_err(|_| bad(key, value))?)
                    }
                }
                "e_max" => {
                    cfg.e_max = if value == "none" {
                        None
                    } else {
                        Some(value.parse().map_err(|_| bad(key, value))?)
                    }
                }
                "k_cut_scale" => cfg.k_cut_scale = value.parse().map_err(|_| bad(key, value))?,
                "rng_seed" => cfg.rng_seed = value.parse().map_err(|_| bad(key, value))?,
                "n_max" => sp.n_max = value.parse().map_err(|_| bad(key, value))?,
                "continuum_bins" => {
                    sp.continuum_bins = value.parse().map_err(|_| bad(key, value))?
                }
                "k_max_continuum" => {
                    sp.k_max_continuum = value.parse().map_err(|_| bad(key, value))?
                }
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line: line_no,
                        key: key.to_string(),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok((cfg, sp))
    }

    /// Manifest-ready key/value view, in a fixed order.
    pub fn manifest_entries(&self) -> BTreeMap<&'static str, String> {
        let mut m = BTreeMap::new();
        m.insert("alpha_fs", format!("{:.12e}", self.alpha_fs));
        m.insert("tau", format!("{:.12e}", self.tau));
        m.insert(
            "lambda_screen",
            self.lambda_screen
                .map_or_else(|| "inf".to_string(), |l| format!("{l:.12e}")),
        );
        m.insert(
            "e_max",
            self.e_max
                .map_or_else(|| "none".to_string(), |e| format!("{e:.12e}")),
        );
        m.insert("k_cut_scale", format!("{:.12e}", self.k_cut_scale));
        m.insert("rng_seed", self.rng_seed.to_string());
        m
    }
}

/// The four characteristic lengths, in Bohr radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthScales {
    /// Ultraviolet cutoff length (Compton scale), lambda_c = alpha_fs.
    pub lambda_c: f64,
    /// Bohr radius, identically 1 in these units.
    pub a_b: f64,
    /// Atomic transition wavelength, a_b / lambda_at = (3/8) alpha_fs.
    pub lambda_at: f64,
    /// Photon thermal length, lambda_at / lambda_ph = tau.
    pub lambda_ph: f64,
}

/// Derive the scale hierarchy from a configuration. Total on valid configs.
pub fn derive_scales(config: &PhysicalConfig) -> LengthScales {
    let a_b = 1.0;
    let lambda_at = a_b / (0.375 * config.alpha_fs);
    LengthScales {
        lambda_c: config.alpha_fs * a_b,
        a_b,
        lambda_at,
        lambda_ph: lambda_at / config.tau,
    }
}

/// One ratio of adjacent scales in the hierarchy check.
#[derive(Debug, Clone, Copy)]
pub struct HierarchyRatio {
    pub pair: (&'static str, &'static str),
    pub ratio: f64,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct HierarchyReport {
    pub ratios: [HierarchyRatio; 3],
}

impl HierarchyReport {
    pub fn all_ok(&self) -> bool {
        self.ratios.iter().all(|r| r.ok)
    }
}

#[derive(Debug, Error)]
#[error("scale hierarchy violated: {pair:?} ratio {ratio:.3e} exceeds {limit}")]
pub struct HierarchyViolation {
    pub pair: (&'static str, &'static str),
    pub ratio: f64,
    pub limit: f64,
    pub report: HierarchyReport,
}

/// Check lambda_c << a_b << lambda_at << lambda_ph with "<<" meaning a ratio
/// of at most 0.1. A violation signals that the low-temperature formulas
/// (which drop exp(-beta (E_1 - E_0)) terms) are unreliable.
pub fn validate_hierarchy(
    scales: &LengthScales,
    _config: &PhysicalConfig,
) -> Result<HierarchyReport, HierarchyViolation> {
    let entries = [
        (("lambda_c", "a_b"), scales.lambda_c / scales.a_b),
        (("a_b", "lambda_at"), scales.a_b / scales.lambda_at),
        (("lambda_at", "lambda_ph"), scales.lambda_at / scales.lambda_ph),
    ];
    let ratios = entries.map(|(pair, ratio)| HierarchyRatio {
        pair,
        ratio,
        ok: ratio <= HIERARCHY_RATIO,
    });
    let report = HierarchyReport { ratios };
    if let Some(bad) = report.ratios.iter().find(|r| !r.ok) {
        return Err(HierarchyViolation {
            pair: bad.pair,
            ratio: bad.ratio,
            limit: HIERARCHY_RATIO,
            report: report.clone(),
        });
    }
    Ok(report)
}

/// Distance regime of the atom-wall potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// X of the order of the atom itself; the model does not apply.
    NearField,
    /// Electrostatic dipole regime, Phi ~ -e^2 <a_x^2>/(4 X^3).
    VdW,
    /// Retarded regime, Phi ~ -3 hbar c alpha_E / (8 pi X^4).
    CasimirPolder,
    /// Thermal regime, Phi ~ -k_B T alpha_E / (4 X^3).
    ClassicalLifshitz,
    /// Screened van der Waals: vdW minus the classical tail.
    ScreenedVdW,
    /// Screened Casimir-Polder: CP minus the classical tail.
    ScreenedCP,
    /// Beyond both the photon and screening lengths: exact compensation.
    ScreenedCancelled,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::NearField => "near_field",
            Regime::VdW => "vdw",
            Regime::CasimirPolder => "casimir_polder",
            Regime::ClassicalLifshitz => "classical_lifshitz",
            Regime::ScreenedVdW => "screened_vdw",
            Regime::ScreenedCP => "screened_cp",
            Regime::ScreenedCancelled => "screened_cancelled",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Where the screening length sits among the other scales.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScreeningOrdering {
    /// lambda_screen = infinity.
    Unscreened,
    /// lambda_at << lambda_ph << lambda_screen.
    BeyondPhoton,
    /// lambda_at << lambda_screen << lambda_ph.
    BetweenAtomicAndPhoton,
    /// lambda_screen << lambda_at << lambda_ph.
    BelowAtomic,
}

impl ScreeningOrdering {
    pub fn of(scales: &LengthScales, lambda_screen: Option<f64>) -> Self {
        match lambda_screen {
            None => Self::Unscreened,
            Some(ls) if ls >= scales.lambda_ph => Self::BeyondPhoton,
            Some(ls) if ls >= scales.lambda_at => Self::BetweenAtomicAndPhoton,
            Some(_) => Self::BelowAtomic,
        }
    }

    /// True when lambda_screen coincides with one of the scales; the regime
    /// map is then a boundary case.
    pub fn degenerate(scales: &LengthScales, lambda_screen: Option<f64>) -> Option<&'static str> {
        let ls = lambda_screen?;
        if ls == scales.lambda_ph {
            Some("lambda_screen = lambda_ph")
        } else if ls == scales.lambda_at {
            Some("lambda_screen = lambda_at")
        } else {
            None
        }
    }
}

/// Label a distance. Crossover points carry the larger-X regime's label; the
/// near-field guard sits at 10 a_B.
pub fn classify_regime(x: f64, scales: &LengthScales, lambda_screen: Option<f64>) -> Regime {
    assert!(x > 0.0, "distance must be positive");
    if x <= NEAR_FIELD_GUARD * scales.a_b {
        return Regime::NearField;
    }
    let at = scales.lambda_at;
    let ph = scales.lambda_ph;
    match ScreeningOrdering::of(scales, lambda_screen) {
        ScreeningOrdering::Unscreened => {
            if x < at {
                Regime::VdW
            } else if x < ph {
                Regime::CasimirPolder
            } else {
                Regime::ClassicalLifshitz
            }
        }
        ScreeningOrdering::BeyondPhoton => {
            let ls = lambda_screen.unwrap();
            if x < at {
                Regime::VdW
            } else if x < ph {
                Regime::CasimirPolder
            } else if x < ls {
                Regime::ClassicalLifshitz
            } else {
                Regime::ScreenedCancelled
            }
        }
        ScreeningOrdering::BetweenAtomicAndPhoton => {
            let ls = lambda_screen.unwrap();
            if x < at {
                Regime::VdW
            } else if x < ls {
                Regime::CasimirPolder
            } else if x < ph {
                Regime::ScreenedCP
            } else {
                Regime::ScreenedCancelled
            }
        }
        ScreeningOrdering::BelowAtomic => {
            let ls = lambda_screen.unwrap();
            if x < ls {
                Regime::VdW
            } else if x < at {
                Regime::ScreenedVdW
            } else if x < ph {
                Regime::ScreenedCP
            } else {
                Regime::ScreenedCancelled
            }
        }
    }
}
