//! The hydrogen dipole spectrum table: bound Lyman lines plus a discretized
//! 1s -> (eps)p continuum, the ground moment <0|a_x^2|0>, the static
//! polarizability, and the energy-cutoff regularization of atomic traces.

use std::fmt;

use thiserror::Error;

use crate::hydrogen;

#[derive(Debug, Error, PartialEq)]
pub enum SpectrumError {
    #[error("n_max must be at least 2, got {0}")]
    NMaxTooSmall(u32),
    #[error("k_max_continuum must be positive when continuum_bins > 0")]
    BadContinuumRange,
    #[error("cannot parse spectrum CSV line {line}: {text}")]
    BadCsv { line: usize, text: String },
}

/// Identifier of a spectral line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineLabel {
    /// Bound 1s -> np line, labeled by the principal quantum number.
    Bound(u32),
    /// Continuum bin index (uniform in photoelectron momentum).
    Continuum(u32),
}

impl fmt::Display for LineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineLabel::Bound(n) => write!(f, "n{n}"),
            LineLabel::Continuum(i) => write!(f, "c{i}"),
        }
    }
}

/// One transition from the ground state: energy gap and folded x-strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    pub label: LineLabel,
    /// E_j - E_0 in Hartree, > 0.
    pub delta_e: f64,
    /// |<0|a_x|j>|^2 in a_B^2, summed over the degenerate sublevels of j.
    pub strength: f64,
}

/// Construction parameters for the spectrum table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumParams {
    /// Highest bound principal quantum number included.
    pub n_max: u32,
    /// Number of continuum bins (uniform in photoelectron momentum).
    pub continuum_bins: u32,
    /// Upper edge of the continuum discretization, in momentum units.
    pub k_max_continuum: f64,
}

impl Default for SpectrumParams {
    fn default() -> Self {
        // n_max = 40 with 200 bins up to kappa = 6 leaves a completeness
        // defect of ~5e-4 a_B^2 and alpha_E within 0.04% of 9/2.
        Self {
            n_max: 40,
            continuum_bins: 200,
            k_max_continuum: 6.0,
        }
    }
}

/// The spectral data entering every kernel sum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    /// Lines sorted by increasing delta_e.
    pub lines: Vec<SpectralLine>,
    /// Ground-state energy, -0.5 Hartree.
    pub e0: f64,
    /// <0|a_x^2|0> = <r^2>_1s / 3 = 1 a_B^2, held independently of the lines
    /// so completeness defects are visible.
    pub moment_x2: f64,
    /// Energy cutoff that was applied to the line set, if any.
    pub cutoff_applied: Option<f64>,
    params: SpectrumParams,
}

/// Ground-state moment <0|a_x^2|0> in a_B^2: <r^2>_1s / 3 with <r^2> = 3.
pub fn ground_moment() -> f64 {
    1.0
}

/// Build the table: bound lines from closed-form radial integrals, continuum
/// bins of width dk with the strength density evaluated at bin midpoints.
pub fn build_spectrum(params: &SpectrumParams) -> Result<SpectrumTable, SpectrumError> {
    if params.n_max < 2 {
        return Err(SpectrumError::NMaxTooSmall(params.n_max));
    }
    if params.continuum_bins > 0 && !(params.k_max_continuum > 0.0) {
        return Err(SpectrumError::BadContinuumRange);
    }
    let mut lines = Vec::with_capacity((params.n_max - 1 + params.continuum_bins) as usize);
    for n in 2..=params.n_max {
        lines.push(SpectralLine {
            label: LineLabel::Bound(n),
            delta_e: hydrogen::lyman_delta_e(n),
            strength: hydrogen::lyman_strength(n),
        });
    }
    if params.continuum_bins > 0 {
        let dk = params.k_max_continuum / f64::from(params.continuum_bins);
        for i in 0..params.continuum_bins {
            let kappa = (f64::from(i) + 0.5) * dk;
            lines.push(SpectralLine {
                label: LineLabel::Continuum(i),
                delta_e: 0.5 * (1.0 + kappa * kappa),
                strength: hydrogen::continuum_strength_density(kappa) * dk,
            });
        }
    }
    lines.sort_by(|a, b| a.delta_e.total_cmp(&b.delta_e));
    Ok(SpectrumTable {
        lines,
        e0: -0.5,
        moment_x2: ground_moment(),
        cutoff_applied: None,
        params: *params,
    })
}

impl SpectrumTable {
    /// A single-line toy table (used by kernel oracles).
    pub fn two_level(delta_e: f64, strength: f64) -> Self {
        SpectrumTable {
            lines: vec![SpectralLine {
                label: LineLabel::Bound(2),
                delta_e,
                strength,
            }],
            e0: -0.5,
            moment_x2: strength,
            cutoff_applied: None,
            params: SpectrumParams {
                n_max: 2,
                continuum_bins: 0,
                k_max_continuum: 0.0,
            },
        }
    }

    pub fn params(&self) -> &SpectrumParams {
        &self.params
    }

    /// Sum of strengths, a_B^2. Tends to moment_x2 as the table completes.
    pub fn sum_strengths(&self) -> f64 {
        self.lines.iter().map(|l| l.strength).sum()
    }

    /// Sum of strength/delta_e, a_B^2/Hartree (= alpha_E / 2 e^2).
    pub fn sum_strength_over_delta(&self) -> f64 {
        self.lines.iter().map(|l| l.strength / l.delta_e).sum()
    }

    /// Sum of strength*delta_e; equals 1/2 by the f-sum rule when complete.
    pub fn sum_strength_delta(&self) -> f64 {
        self.lines.iter().map(|l| l.strength * l.delta_e).sum()
    }

    /// Largest transition energy in the table.
    pub fn max_delta_e(&self) -> f64 {
        self.lines.last().map_or(0.0, |l| l.delta_e)
    }

    /// Serialize as CSV with columns label, delta_e_hartree, strength_aB2.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,delta_e_hartree,strength_aB2\n");
        for l in &self.lines {
            out.push_str(&format!("{},{:.17e},{:.17e}\n", l.label, l.delta_e, l.strength));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, SpectrumError> {
        let mut lines = Vec::new();
        for (idx, row) in text.lines().enumerate() {
            if idx == 0 || row.trim().is_empty() {
                continue;
            }
            let bad = || SpectrumError::BadCsv {
                line: idx + 1,
                text: row.to_string(),
            };
            let mut parts = row.split(',');
            let label = parts.next().ok_or_else(bad)?.trim();
            let delta_e: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
            let strength: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
            let label = if let Some(n) = label.strip_prefix('n') {
                LineLabel::Bound(n.parse().map_err(|_| bad())?)
            } else if let Some(i) = label.strip_prefix('c') {
                LineLabel::Continuum(i.parse().map_err(|_| bad())?)
            } else {
                return Err(bad());
            };
            lines.push(SpectralLine {
                label,
                delta_e,
                strength,
            });
        }
        lines.sort_by(|a, b| a.delta_e.total_cmp(&b.delta_e));
        Ok(SpectrumTable {
            lines,
            e0: -0.5,
            moment_x2: ground_moment(),
            cutoff_applied: None,
            params: SpectrumParams {
                n_max: 0,
                continuum_bins: 0,
                k_max_continuum: 0.0,
            },
        })
    }
}

/// Static polarizability alpha_E = 2 e^2 sum_j strength_j / delta_e_j, a_B^3.
pub fn static_polarizability(table: &SpectrumTable) -> f64 {
    2.0 * table.sum_strength_over_delta()
}

/// Drop lines with E_j = E_0 + delta_e above e_max and record the cutoff.
/// Idempotent for a fixed e_max.
pub fn apply_cutoff(table: &SpectrumTable, e_max: f64) -> SpectrumTable {
    let mut out = table.clone();
    out.lines.retain(|l| table.e0 + l.delta_e <= e_max);
    out.cutoff_applied = Some(e_max);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn two_level_table_matches_closed_form() {
        let t = build_spectrum(&SpectrumParams {
            n_max: 2,
            continuum_bins: 0,
            k_max_continuum: 0.0,
        })
        .unwrap();
        assert_eq!(t.lines.len(), 1);
        assert_relative_eq!(t.lines[0].delta_e, 0.375);
        assert_relative_eq!(t.lines[0].strength, 32768.0 / 59049.0, max_relative = 1e-13);
        assert_relative_eq!(
            static_polarizability(&t),
            524288.0 / 177147.0, // 2 * (32768/59049) / (3/8)
            max_relative = 1e-13
        );
    }

    #[test]
    fn n_max_too_small_rejected() {
        let p = SpectrumParams {
            n_max: 1,
            continuum_bins: 0,
            k_max_continuum: 0.0,
        };
        assert_eq!(build_spectrum(&p).unwrap_err(), SpectrumError::NMaxTooSmall(1));
    }

    #[test]
    fn bound_deltas_in_range_and_sorted() {
        let t = build_spectrum(&SpectrumParams::default()).unwrap();
        for l in &t.lines {
            match l.label {
                LineLabel::Bound(_) => assert!(l.delta_e > 0.0 && l.delta_e <= 0.5),
                LineLabel::Continuum(_) => assert!(l.delta_e > 0.5),
            }
        }
        for pair in t.lines.windows(2) {
            assert!(pair[0].delta_e <= pair[1].delta_e);
        }
    }

    #[test]
    fn completeness_defect_small_at_defaults() {
        let t = build_spectrum(&SpectrumParams::default()).unwrap();
        let defect = t.moment_x2 - t.sum_strengths();
        assert!(defect > 0.0, "discretized sum must not overshoot");
        assert!(defect <= 1e-3, "defect {defect}");
    }

    #[test]
    fn polarizability_monotone_under_line_addition() {
        let mut prev = 0.0;
        for n_max in [2, 5, 10, 20, 40] {
            let t = build_spectrum(&SpectrumParams {
                n_max,
                continuum_bins: 0,
                k_max_continuum: 0.0,
            })
            .unwrap();
            let a = static_polarizability(&t);
            assert!(a > prev);
            prev = a;
        }
        let full = build_spectrum(&SpectrumParams::default()).unwrap();
        assert!(static_polarizability(&full) > prev);
    }

    #[test]
    fn cutoff_drops_lines_and_is_idempotent() {
        let t = build_spectrum(&SpectrumParams::default()).unwrap();
        // e_max = 0 keeps bound only
        let bound = apply_cutoff(&t, 0.0);
        assert!(bound
            .lines
            .iter()
            .all(|l| matches!(l.label, LineLabel::Bound(_))));
        assert_eq!(bound.lines.len(), 39);
        // e_max = -0.2 excludes even n = 2 (E_2 = -0.125 > -0.2)
        let none = apply_cutoff(&t, -0.2);
        assert!(none.lines.is_empty());
        // +infinity is the identity on the line set
        let all = apply_cutoff(&t, f64::INFINITY);
        assert_eq!(all.lines, t.lines);
        // idempotence
        let twice = apply_cutoff(&bound, 0.0);
        assert_eq!(twice.lines, bound.lines);
    }

    #[test]
    fn csv_roundtrip() {
        let t = build_spectrum(&SpectrumParams {
            n_max: 4,
            continuum_bins: 3,
            k_max_continuum: 2.0,
        })
        .unwrap();
        let csv = t.to_csv();
        let back = SpectrumTable::from_csv(&csv).unwrap();
        assert_eq!(back.lines.len(), t.lines.len());
        for (a, b) in back.lines.iter().zip(&t.lines) {
            assert_eq!(a.label, b.label);
            assert_eq!(a.delta_e, b.delta_e);
            assert_eq!(a.strength, b.strength);
        }
        assert!(SpectrumTable::from_csv("label,delta_e_hartree,strength_aB2\nx2,0.1,0.2\n").is_err());
    }
}
