//! The response kernel B(k): the strength-weighted thermal factor G at low
//! temperature, the general finite-temperature double sum, and the closed
//! regime plateaus.
//!
//! All energies in Hartree. The photon energy is eps_k = hbar c k, so in
//! atomic units eps_k = k / alpha_fs.

use num_complex::Complex64;
use thiserror::Error;

use crate::spectrum::SpectrumTable;
use crate::units::{PhysicalConfig, Regime};

/// Principal-value window around the resonant denominator, Hartree.
pub const POLE_WIDTH: f64 = 1e-3;

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("resonant denominator vanished at delta_e = eps_k = {0} Hartree (drop_resonant = false)")]
    Pole(f64),
    #[error("the general kernel needs a finite e_max to truncate the thermal trace")]
    CutoffRequired,
    #[error("b_plateau applies to the VdW, CasimirPolder and ClassicalLifshitz regimes, not {0}")]
    NoPlateau(Regime),
}

/// Parameters shared by every kernel evaluation.
#[derive(Debug, Clone)]
pub struct KernelParams<'t> {
    /// Inverse temperature, Hartree^-1.
    pub beta: f64,
    /// hbar c in atomic units (1/alpha_fs).
    pub hbar_c: f64,
    /// Photon thermal length beta * hbar c, a_B.
    pub lambda_ph: f64,
    /// Drop the exponentially damped oscillating resonance (the
    /// low-temperature prescription).
    pub drop_resonant: bool,
    /// Trace cutoff for the general kernel's thermal sum.
    pub e_max: Option<f64>,
    pub table: &'t SpectrumTable,
}

impl<'t> KernelParams<'t> {
    pub fn new(config: &PhysicalConfig, table: &'t SpectrumTable) -> Self {
        let beta = config.beta();
        let hbar_c = config.hbar_c();
        KernelParams {
            beta,
            hbar_c,
            lambda_ph: beta * hbar_c,
            drop_resonant: true,
            e_max: config.e_max,
            table,
        }
    }
}

/// e^{-x} without spurious overflow panics for large x.
fn exp_neg(x: f64) -> f64 {
    if x > 745.0 {
        0.0
    } else {
        (-x).exp()
    }
}

/// Odd principal-value regularization of 1/d: equal to 1/d to machine
/// precision once |d| > ~7 pole widths, smooth and odd through d = 0, so a
/// symmetric quadrature grid cancels it across the pole.
fn pv_inverse(d: f64) -> f64 {
    let w2 = POLE_WIDTH * POLE_WIDTH;
    let damp = (-(d * d) / w2).exp();
    d / (d * d + w2 * damp)
}

/// The thermal weight G(delta_e, eps_k, beta):
/// `eps/(1-e^{-beta eps}) [ 1/(delta + eps) + e^{-beta eps}/(delta - eps) ]`.
pub fn g_factor(
    delta_e: f64,
    eps_k: f64,
    beta: f64,
    drop_resonant: bool,
) -> Result<f64, KernelError> {
    debug_assert!(delta_e > 0.0 && eps_k > 0.0 && beta > 0.0);
    let x = beta * eps_k;
    let pref = eps_k / (-(-x).exp_m1());
    let direct = 1.0 / (delta_e + eps_k);
    let damp = exp_neg(x);
    let resonant = if damp == 0.0 {
        0.0
    } else {
        let d = delta_e - eps_k;
        if drop_resonant {
            damp * pv_inverse(d)
        } else if d == 0.0 {
            return Err(KernelError::Pole(eps_k));
        } else {
            damp / d
        }
    };
    Ok(pref * (direct + resonant))
}

/// Low-temperature kernel B^LT(k) = sum_j strength_j G(delta_e_j, eps_k).
/// The sum runs over the full line set; the trace cutoff never enters here
/// (only the ground state contributes to the thermal sum at low T).
pub fn b_low_temp(k: f64, params: &KernelParams) -> Result<f64, KernelError> {
    debug_assert!(k > 0.0);
    let eps = params.hbar_c * k;
    let x = params.beta * eps;
    let pref = eps / (-(-x).exp_m1());
    let damp = exp_neg(x);
    let mut total = 0.0;
    for line in &params.table.lines {
        let direct = 1.0 / (line.delta_e + eps);
        let resonant = if damp == 0.0 {
            0.0
        } else {
            let d = line.delta_e - eps;
            if params.drop_resonant {
                damp * pv_inverse(d)
            } else if d == 0.0 {
                return Err(KernelError::Pole(eps));
            } else {
                damp / d
            }
        };
        total += line.strength * (direct + resonant);
    }
    Ok(pref * total)
}

/// A finite level basis with level-folded x-strengths, for the general
/// finite-temperature kernel.
#[derive(Debug, Clone)]
pub struct TransitionBasis {
    /// (energy in Hartree, degeneracy) per level, ground state first.
    pub levels: Vec<(f64, f64)>,
    /// Symmetric strength matrix: sum over sublevel pairs of |<i|a_x|j>|^2.
    pub strengths: Vec<Vec<f64>>,
}

impl TransitionBasis {
    /// Two nondegenerate levels separated by delta_e with the given strength.
    pub fn two_level(e0: f64, delta_e: f64, strength: f64) -> Self {
        TransitionBasis {
            levels: vec![(e0, 1.0), (e0 + delta_e, 1.0)],
            strengths: vec![vec![0.0, strength], vec![strength, 0.0]],
        }
    }

    /// Hydrogen bound levels 1..=n_basis with exact folded strengths.
    /// Kept small: the closed-form radial integrals are evaluated for
    /// n <= 5 only.
    pub fn hydrogen_bound(n_basis: u32) -> Self {
        assert!((2..=5).contains(&n_basis), "bound basis supports n = 2..=5");
        let s = crate::hydrogen::level_x_strengths(n_basis);
        let levels = (1..=n_basis)
            .map(|n| (crate::hydrogen::level_energy(n), f64::from(n * n)))
            .collect();
        let nb = n_basis as usize;
        let strengths = (1..=nb)
            .map(|n| (1..=nb).map(|np| s[n][np]).collect())
            .collect();
        TransitionBasis { levels, strengths }
    }
}

/// phi(u) = (u - 1 + e^{-u})/u^2, the stable combined form of the
/// (delta + eps) channel near its vanishing denominator.
fn phi_plus(u: f64) -> f64 {
    if u.abs() < 0.5 {
        // sum_m (-u)^m / (m+2)!
        let mut term = 0.5;
        let mut total = 0.5;
        for m in 1..=14 {
            term *= -u / (m as f64 + 2.0);
            total += term;
        }
        total
    } else {
        (u - 1.0 + exp_neg(u)) / (u * u)
    }
}

/// psi(v) = (v e^v - e^v + 1)/v^2, the stable combined form of the
/// (delta - eps) channel. Only called with |v| small or v <= 0.
fn phi_minus(v: f64) -> f64 {
    if v.abs() < 0.5 {
        // sum_m (m+1) v^m / (m+2)!
        let mut term = 0.5; // v^m/(m+2)! running
        let mut total = 0.5;
        for m in 1..=14 {
            term *= v / (m as f64 + 2.0);
            total += term * (m as f64 + 1.0);
        }
        total
    } else {
        let ev = v.exp();
        (v * ev - ev + 1.0) / (v * v)
    }
}

/// Combined I_ij + J_ij for one ordered level pair, with all Boltzmann
/// factors taken relative to the ground energy e0 (so nothing overflows).
/// The apparent simple poles of I and J at eps = |delta| cancel between
/// them; near the cancellation the series branches keep full precision.
fn pair_i_plus_j(ei: f64, ej: f64, e0: f64, eps: f64, beta: f64) -> f64 {
    let wi = exp_neg(beta * (ei - e0));
    let wj = exp_neg(beta * (ej - e0));
    let damp = exp_neg(beta * eps);
    let delta = ej - ei;

    // channel (delta + eps): I = wi/y, J = (wj damp - wi)/(beta y^2)
    let y = delta + eps;
    let uy = beta * y;
    let plus = if uy.abs() < 0.5 {
        wi * beta * phi_plus(uy)
    } else {
        wi / y + (wj * damp - wi) / (beta * y * y)
    };

    // channel (delta - eps): I = wi damp / z, J = -(wi damp - wj)/(beta z^2)
    let z = delta - eps;
    let vz = beta * z;
    let minus = if vz.abs() < 0.5 {
        wj * beta * phi_minus(vz)
    } else {
        wi * damp / z - (wi * damp - wj) / (beta * z * z)
    };

    plus + minus
}

/// J_ij alone (shifted by e^{beta e0}); exposed for the antisymmetry checks.
pub fn j_term(ei: f64, ej: f64, e0: f64, eps: f64, beta: f64) -> f64 {
    let wi = exp_neg(beta * (ei - e0));
    let wj = exp_neg(beta * (ej - e0));
    let damp = exp_neg(beta * eps);
    let delta = ej - ei;
    (wj * damp - wi) / (beta * (delta + eps).powi(2))
        - (wi * damp - wj) / (beta * (delta - eps).powi(2))
}

/// General finite-temperature kernel over a truncated basis:
/// `B(k) = eps/(1-e^{-beta eps}) (1/Z) sum_{E_i <= e_max} sum_{j != i}
///  S_ij (I_ij + J_ij)`, with Z the same truncated partition function.
pub fn b_general(k: f64, params: &KernelParams, basis: &TransitionBasis) -> Result<f64, KernelError> {
    debug_assert!(k > 0.0);
    let e_max = params.e_max.ok_or(KernelError::CutoffRequired)?;
    let beta = params.beta;
    let eps = params.hbar_c * k;
    let e0 = basis.levels[0].0;

    let mut z = 0.0;
    for &(ei, gi) in &basis.levels {
        if ei <= e_max {
            z += gi * exp_neg(beta * (ei - e0));
        }
    }

    let mut total = 0.0;
    for (i, &(ei, _)) in basis.levels.iter().enumerate() {
        if ei > e_max {
            continue;
        }
        for (j, &(ej, _)) in basis.levels.iter().enumerate() {
            if i == j {
                continue;
            }
            let s = basis.strengths[i][j];
            if s == 0.0 {
                continue;
            }
            total += s * pair_i_plus_j(ei, ej, e0, eps, beta);
        }
    }
    let pref = eps / (-(-beta * eps).exp_m1());
    Ok(pref * total / z)
}

/// Closed-form kernel limit in one regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlateauForm {
    /// B(k) ~ C, a_B^2.
    Constant(f64),
    /// B(k) ~ gamma k, gamma in a_B^3 (atomic units).
    Linear(f64),
}

/// The three regime limits of the kernel: the ground moment plateau, the
/// retarded linear slope hbar c sum S/delta, and the classical constant
/// 2 k_B T sum S/delta.
pub fn b_plateau(
    regime: Regime,
    table: &SpectrumTable,
    config: &PhysicalConfig,
) -> Result<PlateauForm, KernelError> {
    match regime {
        Regime::VdW => Ok(PlateauForm::Constant(table.moment_x2)),
        Regime::CasimirPolder => Ok(PlateauForm::Linear(
            config.hbar_c() * table.sum_strength_over_delta(),
        )),
        Regime::ClassicalLifshitz => Ok(PlateauForm::Constant(
            2.0 * config.k_bt() * table.sum_strength_over_delta(),
        )),
        other => Err(KernelError::NoPlateau(other)),
    }
}

/// A kernel that `fourier_invert` can integrate: pointwise values, the
/// large-k plateau, and (optionally) an analytic continuation of the
/// decaying remainder for the contour-rotated tail.
pub trait ResponseKernel: Sync {
    fn eval(&self, k: f64) -> f64;

    /// Large-k plateau C_inf subtracted analytically by the inversion.
    fn plateau(&self) -> f64 {
        0.0
    }

    /// Smallest real k from which `eval_remainder_complex` is a valid
    /// analytic continuation of eval(k) - plateau() into the upper-right
    /// quarter plane. `None` disables the analytic tail.
    fn tail_min_k(&self) -> Option<f64> {
        None
    }

    /// Analytic continuation of eval(k) - plateau() for Re k >= tail_min_k.
    fn eval_remainder_complex(&self, _k: Complex64) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
}

/// The production kernel: B^LT over a spectrum table.
#[derive(Debug, Clone)]
pub struct LowTempKernel {
    lines: Vec<(f64, f64)>, // (delta_e, strength)
    beta: f64,
    hbar_c: f64,
    lambda_ph: f64,
    drop_resonant: bool,
    plateau: f64,
}

impl LowTempKernel {
    pub fn new(config: &PhysicalConfig, table: &SpectrumTable) -> Self {
        let beta = config.beta();
        let hbar_c = config.hbar_c();
        LowTempKernel {
            lines: table.lines.iter().map(|l| (l.delta_e, l.strength)).collect(),
            beta,
            hbar_c,
            lambda_ph: beta * hbar_c,
            drop_resonant: true,
            plateau: table.sum_strengths(),
        }
    }

    /// Classical plateau 2 k_B T sum S/delta of this kernel.
    pub fn classical_constant(&self) -> f64 {
        let kbt = 1.0 / self.beta;
        2.0 * kbt * self.lines.iter().map(|&(d, s)| s / d).sum::<f64>()
    }

    pub fn lambda_ph(&self) -> f64 {
        self.lambda_ph
    }
}

impl ResponseKernel for LowTempKernel {
    fn eval(&self, k: f64) -> f64 {
        let eps = self.hbar_c * k;
        let x = self.beta * eps;
        let pref = eps / (-(-x).exp_m1());
        let damp = exp_neg(x);
        let mut total = 0.0;
        for &(delta, s) in &self.lines {
            let mut g = 1.0 / (delta + eps);
            if damp != 0.0 {
                g += if self.drop_resonant {
                    damp * pv_inverse(delta - eps)
                } else {
                    damp / (delta - eps)
                };
            }
            total += s * g;
        }
        pref * total
    }

    fn plateau(&self) -> f64 {
        self.plateau
    }

    fn tail_min_k(&self) -> Option<f64> {
        // Beyond beta eps = 80 the resonant factor e^{-beta eps} is below
        // 2e-35 and B reduces to the rational zero-temperature form whose
        // poles all sit at Re k < 0, so the contour rotation is exact there.
        if self.drop_resonant {
            Some(80.0 / self.lambda_ph)
        } else {
            None
        }
    }

    fn eval_remainder_complex(&self, k: Complex64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for &(delta, s) in &self.lines {
            total -= s * delta / (delta + self.hbar_c * k);
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{build_spectrum, SpectrumParams};
    use approx::assert_relative_eq;

    fn params<'a>(tau: f64, table: &'a SpectrumTable) -> KernelParams<'a> {
        let cfg = PhysicalConfig {
            tau,
            ..Default::default()
        };
        KernelParams::new(&cfg, table)
    }

    #[test]
    fn g_factor_limits() {
        let beta = 2666.7;
        // eps >> delta and beta eps >> 1: G -> 1 + O(1/(lambda_at k))
        let g = g_factor(0.375, 37.5, beta, true).unwrap();
        assert_relative_eq!(g, 1.0 - 0.375 / 37.5, epsilon = 2e-4);
        // eps << delta, beta eps >> 1: G -> eps coth(beta eps/2)/delta ~ eps/delta
        let g = g_factor(0.375, 3.75e-3, beta, true).unwrap();
        assert_relative_eq!(g, 3.75e-3 / 0.375, max_relative = 2e-2);
        // beta eps << 1 and eps << delta: G -> 2 k_B T / delta
        let beta_warm = 1.0;
        let g = g_factor(0.375, 1e-4, beta_warm, true).unwrap();
        assert_relative_eq!(g, 2.0 / 0.375, max_relative = 1e-3);
    }

    #[test]
    fn g_factor_pole_handling() {
        assert_eq!(
            g_factor(0.375, 0.375, 1.0, false).unwrap_err(),
            KernelError::Pole(0.375)
        );
        // with drop_resonant the PV form is finite and odd around the pole
        let up = g_factor(0.375 + 1e-5, 0.375, 1.0, true).unwrap();
        let dn = g_factor(0.375 - 1e-5, 0.375, 1.0, true).unwrap();
        assert!(up.is_finite() && dn.is_finite());
        let mid = g_factor(0.375, 0.375, 1.0, true).unwrap();
        assert_relative_eq!(0.5 * (up + dn), mid, max_relative = 1e-4);
    }

    #[test]
    fn pv_inverse_matches_exact_away_from_pole() {
        let d = 8e-3; // eight pole widths
        assert_relative_eq!(pv_inverse(d), 1.0 / d, max_relative = 1e-12);
        assert_eq!(pv_inverse(0.0), 0.0);
    }

    #[test]
    fn b_low_temp_is_positive_and_cutoff_independent() {
        let table = build_spectrum(&SpectrumParams::default()).unwrap();
        let mut p = params(1e-3, &table);
        let lam_at = 1.0 / (0.375 * crate::units::ALPHA_FS);
        for k in [0.1 / lam_at, 1.0 / lam_at, 10.0 / lam_at] {
            let b = b_low_temp(k, &p).unwrap();
            assert!(b > 0.0);
            // the trace cutoff is a property of the i-sum only
            p.e_max = Some(0.0);
            let b_cut = b_low_temp(k, &p).unwrap();
            assert_eq!(b.to_bits(), b_cut.to_bits());
            p.e_max = None;
        }
    }

    #[test]
    fn plateau_values() {
        let table = build_spectrum(&SpectrumParams::default()).unwrap();
        let cfg = PhysicalConfig {
            tau: 0.01,
            ..Default::default()
        };
        match b_plateau(Regime::VdW, &table, &cfg).unwrap() {
            PlateauForm::Constant(c) => assert_relative_eq!(c, 1.0),
            _ => panic!(),
        }
        match b_plateau(Regime::CasimirPolder, &table, &cfg).unwrap() {
            PlateauForm::Linear(g) => {
                // hbar c * alpha_E / 2 with alpha_E ~ 4.4983
                assert_relative_eq!(g, (1.0 / cfg.alpha_fs) * 4.4983 / 2.0, max_relative = 1e-3)
            }
            _ => panic!(),
        }
        match b_plateau(Regime::ClassicalLifshitz, &table, &cfg).unwrap() {
            PlateauForm::Constant(c) => {
                assert_relative_eq!(c, 0.01 * 0.375 * 4.4983, max_relative = 1e-3)
            }
            _ => panic!(),
        }
        assert!(b_plateau(Regime::NearField, &table, &cfg).is_err());
    }

    #[test]
    fn kernel_plateau_reached_at_large_k() {
        // B(k)/C_inf = 1 - (sum S delta / sum S)/eps + O(eps^-2); the bound
        // 1.5/(lambda_at k) covers the true 4/3 coefficient.
        let table = build_spectrum(&SpectrumParams::default()).unwrap();
        let cfg = PhysicalConfig {
            tau: 1e-3,
            ..Default::default()
        };
        let kern = LowTempKernel::new(&cfg, &table);
        let lam_at = 1.0 / (0.375 * cfg.alpha_fs);
        for klam in [10.0, 30.0, 100.0] {
            let k = klam / lam_at;
            let dev = (kern.eval(k) / kern.plateau() - 1.0).abs();
            assert!(dev <= 1.5 / klam, "k lambda_at = {klam}: dev = {dev}");
        }
        // and 2% closeness is genuinely reached by k = 100/lambda_at
        let k = 100.0 / lam_at;
        assert_relative_eq!(kern.eval(k), kern.plateau(), max_relative = 0.02);
    }

    #[test]
    fn general_kernel_requires_cutoff() {
        let table = build_spectrum(&SpectrumParams::default()).unwrap();
        let p = params(0.075, &table);
        let basis = TransitionBasis::two_level(-0.5, 0.375, 0.5549);
        assert_eq!(
            b_general(1e-3, &p, &basis).unwrap_err(),
            KernelError::CutoffRequired
        );
    }

    #[test]
    fn j_antisymmetry_exact() {
        let (e0, beta) = (-0.5, 7.3);
        let cases = [
            (-0.5, -0.125, 0.2),
            (-0.125, -0.5, 0.61),
            (-0.125, -0.055, 1.7),
            (-0.5, 0.3, 0.05),
        ];
        for &(ei, ej, eps) in &cases {
            let a = j_term(ei, ej, e0, eps, beta);
            let b = j_term(ej, ei, e0, eps, beta);
            assert!(
                (a + b).abs() <= 1e-15 * a.abs().max(b.abs()).max(1e-300),
                "J not antisymmetric at ({ei},{ej},{eps})"
            );
        }
    }

    #[test]
    fn combined_pair_is_finite_at_resonance() {
        // e_j - e_i = -0.375 and eps exactly 0.375: the naive I and J blow
        // up separately; the combined form tends to w_j * beta * phi(0).
        let beta = 10.0;
        let v = pair_i_plus_j(-0.125, -0.5, -0.5, 0.375, beta);
        assert!(v.is_finite());
        let near = pair_i_plus_j(-0.125, -0.5, -0.5, 0.375 + 1e-9, beta);
        assert_relative_eq!(v, near, max_relative = 1e-6);
    }

    #[test]
    fn low_t_reduction_on_two_level_system() {
        // |b_general - b_low_temp| <= 10 e^{-beta delta} b_low_temp,
        // at a non-resonant k (eps = 2 delta).
        let strength = 32768.0 / 59049.0;
        let table = SpectrumTable::two_level(0.375, strength);
        let basis = TransitionBasis::two_level(-0.5, 0.375, strength);
        for beta_delta in [5.0, 10.0, 20.0] {
            let tau = 1.0 / beta_delta;
            let mut p = params(tau, &table);
            p.e_max = Some(10.0);
            let k = 2.0 * 0.375 / p.hbar_c;
            let bg = b_general(k, &p, &basis).unwrap();
            let blt = b_low_temp(k, &p).unwrap();
            let bound = 10.0 * (-beta_delta).exp() * blt;
            assert!(
                (bg - blt).abs() <= bound,
                "beta delta = {beta_delta}: diff {} > {}",
                (bg - blt).abs(),
                bound
            );
        }
    }
}
