//! Assembly of the atom-wall potential Phi(X): the electrostatic image
//! potential, the oscillatory Fourier inversion of the kernel B(k), the
//! closed-form asymptotes, the dipolar cancellation bookkeeping, and the
//! screening modifications.
//!
//! The inversion computes, in atomic units (e = 1),
//!
//! `Phi(X) = 4 pi int d3k/(2pi)^3 e^{-2 i k_x X} (k_x^2/k^2) B(k) g(k)`
//! `       = (1/pi) int_0^inf dk k^2 B(k) g(k) W(2 k X)`
//!
//! with the angular kernel W from `quad`. The large-k plateau of B is split
//! off and inverted in closed form (-C/(4X^3)); the decaying remainder is
//! integrated on log-spaced panels, Gauss-Legendre where the phase is slow
//! and Filon (exact polynomial-times-trigonometric moments) where it is not.
//! Kernels that expose an analytic continuation get their high-k tail from a
//! rotation onto the positive imaginary direction, where the integrand
//! decays as e^{-u} and Gauss-Laguerre applies; this is what keeps fifteen
//! orders of oscillatory cancellation out of floating point.

use num_complex::Complex64;
use thiserror::Error;

pub use crate::kernel::ResponseKernel;
use crate::kernel::{LowTempKernel, PlateauForm};
use crate::par::{map_indexed, Accumulator, Parallelism};
use crate::quad::{gl16, gl8, laguerre32, laguerre40, w_kernel};
use crate::spectrum::SpectrumTable;
use crate::units::{
    classify_regime, derive_scales, LengthScales, PhysicalConfig, Regime, ScreeningOrdering,
    NEAR_FIELD_GUARD,
};

use std::f64::consts::PI;

#[derive(Debug, Error)]
pub enum PotentialError {
    #[error("electron at x + a_x = {0} is behind the wall")]
    WallContact(f64),
    #[error("quadrature failure at x = {x}: estimated error {est:.3e} exceeds tolerance {tol:.3e}")]
    QuadratureFailure { x: f64, est: f64, tol: f64 },
    #[error("x = {0} a_B is inside the near-field guard ({NEAR_FIELD_GUARD} a_B)")]
    NearField(f64),
    #[error("no closed asymptote for regime {0}")]
    NoAsymptote(Regime),
    #[error(transparent)]
    Kernel(#[from] crate::kernel::KernelError),
    #[error(transparent)]
    Config(#[from] crate::units::ConfigError),
}

/// Static image interaction of the displaced atom, Eq. context: the returned
/// value is the positive-definite combination V_im itself; the energy
/// contribution is -e^2 V_im.
pub fn image_potential(x: f64, a: [f64; 3]) -> Result<f64, PotentialError> {
    let xe = x + a[0];
    if xe <= 0.0 || x <= 0.0 {
        return Err(PotentialError::WallContact(xe));
    }
    let d2 = (2.0 * x + a[0]).powi(2) + a[1] * a[1] + a[2] * a[2];
    Ok(0.5 * (1.0 / (2.0 * x) + 1.0 / (2.0 * xe) - 2.0 / d2.sqrt()))
}

/// Dipolar large-X form of the image interaction:
/// `e^2 [a_x^2 + (a_y^2 + a_z^2)/2] / (2X)^3`.
pub fn image_potential_asymptote(x: f64, a: [f64; 3]) -> f64 {
    (a[0] * a[0] + 0.5 * (a[1] * a[1] + a[2] * a[2])) / (2.0 * x).powi(3)
}

/// Shape of the ultraviolet taper g on [taper_start*k_cut, k_cut].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Taper {
    /// C^2 quintic smoothstep (default).
    Quintic,
    /// C^1 cubic smoothstep.
    Cubic,
    /// Half-cosine roll-off.
    Cosine,
}

/// Ultraviolet mode cutoff descriptor: g = 1 below taper_start*k_cut, rolls
/// smoothly to 0 at k_cut, identically 0 beyond.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    pub k_cut: f64,
    pub taper: Taper,
    /// Fraction of k_cut where the roll-off begins.
    pub taper_start: f64,
}

impl CutoffSpec {
    pub fn from_config(config: &PhysicalConfig) -> Self {
        CutoffSpec {
            k_cut: config.k_cut(),
            taper: Taper::Quintic,
            taper_start: 0.5,
        }
    }

    pub fn g(&self, k: f64) -> f64 {
        let k1 = self.taper_start * self.k_cut;
        if k <= k1 {
            1.0
        } else if k >= self.k_cut {
            0.0
        } else {
            let t = (k - k1) / (self.k_cut - k1);
            match self.taper {
                Taper::Quintic => 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t),
                Taper::Cubic => 1.0 - t * t * (3.0 - 2.0 * t),
                Taper::Cosine => 0.5 * (1.0 + (PI * t).cos()),
            }
        }
    }
}

/// Controls for the oscillatory inversion.
#[derive(Debug, Clone, Copy)]
pub struct InvertOptions {
    /// Logarithmic panel width.
    pub log_step: f64,
    /// Relative error tolerance against the dominant scale.
    pub rel_tol: f64,
    /// Subtract the kernel plateau and invert it in closed form.
    pub split_plateau: bool,
    /// Use the contour-rotated analytic tail when the kernel supports it.
    pub analytic_tail: bool,
}

impl Default for InvertOptions {
    fn default() -> Self {
        InvertOptions {
            log_step: 0.10,
            rel_tol: 1e-6,
            split_plateau: true,
            analytic_tail: true,
        }
    }
}

/// Result of one inversion, with the accumulated error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadEval {
    pub value: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

// Chebyshev-Lobatto nodes for the degree-5 Filon amplitude fit.
const FILON_NODES: [f64; 6] = [
    -1.0,
    -0.809_016_994_374_947_5,
    -0.309_016_994_374_947_45,
    0.309_016_994_374_947_45,
    0.809_016_994_374_947_5,
    1.0,
];
const FILON_SUB: [usize; 4] = [0, 2, 3, 5];

/// Solve a small dense system in place (partial pivoting). Sizes 4 and 6.
fn solve_small(a: &mut [Vec<f64>], b: &mut [f64]) {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        let d = a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / d;
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    for col in (0..n).rev() {
        b[col] /= a[col][col];
        for row in 0..col {
            b[row] -= a[row][col] * b[col];
        }
    }
}

fn fit_monomials(nodes: &[f64], values: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut a: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&t| (0..n).map(|p| t.powi(p as i32)).collect())
        .collect();
    let mut b = values.to_vec();
    solve_small(&mut a, &mut b);
    b
}

/// Moments E_n = int_{-1}^{1} t^n e^{i omega t} dt by forward recurrence;
/// stable for omega >= ~2 and n <= 5.
fn trig_moments(omega: f64, out: &mut [Complex64]) {
    let iw = Complex64::new(0.0, omega);
    let eiw = Complex64::new(omega.cos(), omega.sin());
    let emiw = eiw.conj();
    out[0] = (eiw - emiw) / iw;
    for n in 1..out.len() {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        out[n] = (eiw - sign * emiw) / iw - (n as f64 / iw) * out[n - 1];
    }
}

/// One Filon panel: fit the sine and cosine amplitudes of F(k) W(2kX) by
/// degree-5 polynomials and integrate against the exact trigonometric
/// moments. Returns (value, error estimate from a degree-3 refit).
fn panel_filon(famp: &dyn Fn(f64) -> f64, a: f64, b: f64, x: f64) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let omega = 2.0 * x * half;
    let theta = 2.0 * x * mid;

    let mut asv = [0.0; 6];
    let mut acv = [0.0; 6];
    for (i, &t) in FILON_NODES.iter().enumerate() {
        let k = mid + half * t;
        let c = 2.0 * k * x;
        let f = famp(k);
        asv[i] = f * 2.0 * (c * c - 2.0) / (c * c * c);
        acv[i] = f * 4.0 / (c * c);
    }
    let cs = fit_monomials(&FILON_NODES, &asv);
    let cc = fit_monomials(&FILON_NODES, &acv);

    let mut moments = [Complex64::new(0.0, 0.0); 6];
    trig_moments(omega, &mut moments);
    let phase = Complex64::new(theta.cos(), theta.sin());

    let combine = |cs: &[f64], cc: &[f64]| {
        let mut acc = 0.0;
        for n in 0..cs.len() {
            let m = phase * moments[n];
            acc += cs[n] * m.im + cc[n] * m.re;
        }
        half * acc
    };
    let v6 = combine(&cs, &cc);

    let sub_nodes: Vec<f64> = FILON_SUB.iter().map(|&i| FILON_NODES[i]).collect();
    let cs4 = fit_monomials(&sub_nodes, &FILON_SUB.map(|i| asv[i]));
    let cc4 = fit_monomials(&sub_nodes, &FILON_SUB.map(|i| acv[i]));
    let v4 = combine(&cs4, &cc4);

    (v6, (v6 - v4).abs())
}

/// Non-oscillatory panel: Gauss-Legendre 16, error from the 8-point rule.
fn panel_gl(famp: &dyn Fn(f64) -> f64, a: f64, b: f64, x: f64) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |rule: &crate::quad::Rule| {
        let mut acc = 0.0;
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let k = mid + half * t;
            acc += w * famp(k) * w_kernel(2.0 * k * x);
        }
        half * acc
    };
    let v16 = eval(gl16());
    let v8 = eval(gl8());
    (v16, (v16 - v8).abs())
}

/// Tail from k_rot to infinity by rotation onto k_rot + i u/(2X):
/// `int_K^inf F(k) W(2kX) dk = Im[ e^{2iKX} (i/2X) int_0^inf Psi(K + iu/2X) e^{-u} du ]`
/// with `Psi(k) = k^2 D(k) (2/c - 4/c^3 + 4i/c^2)`, c = 2kX.
fn tail_rotated(
    kernel: &dyn ResponseKernel,
    plateau_shift: f64,
    k_rot: f64,
    x: f64,
) -> (f64, f64) {
    let psi = |k: Complex64| -> Complex64 {
        let c = 2.0 * x * k;
        let d = kernel.eval_remainder_complex(k) + plateau_shift;
        let w = 2.0 / c - 4.0 / (c * c * c) + Complex64::new(0.0, 4.0) / (c * c);
        k * k * d * w
    };
    let quad = |rule: &crate::quad::Rule| -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
            acc += w * psi(Complex64::new(k_rot, u / (2.0 * x)));
        }
        let theta = 2.0 * k_rot * x;
        let phase = Complex64::new(theta.cos(), theta.sin());
        (phase * Complex64::new(0.0, 1.0 / (2.0 * x)) * acc).im
    };
    let v40 = quad(laguerre40());
    let v32 = quad(laguerre32());
    (v40, (v40 - v32).abs())
}

/// Oscillatory Fourier inversion of a response kernel at distance x.
pub fn fourier_invert(
    kernel: &dyn ResponseKernel,
    x: f64,
    cutoff: &CutoffSpec,
    opts: &InvertOptions,
) -> Result<QuadEval, PotentialError> {
    assert!(x > 0.0, "need x > 0");
    let c_split = if opts.split_plateau { kernel.plateau() } else { 0.0 };
    let plateau_shift = kernel.plateau() - c_split;

    // decide where the numeric panels stop
    let g_edge = cutoff.taper_start * cutoff.k_cut;
    let k_rot = if opts.analytic_tail {
        kernel
            .tail_min_k()
            .map(|mk| mk.max(25.0 / x))
            .filter(|&kr| kr <= g_edge)
    } else {
        None
    };
    let k_end = k_rot.unwrap_or(cutoff.k_cut);
    let k_min = (1e-5 / x).min(1e-3 * k_end);

    let famp = |k: f64| k * k * (kernel.eval(k) - c_split) * cutoff.g(k);

    let ratio = opts.log_step.exp();
    let mut total = Accumulator::default();
    let mut err = 0.0;
    let mut a = k_min;
    while a < k_end {
        let b = (a * ratio).min(k_end);
        let span = 2.0 * x * (b - a);
        let (v, e) = if span <= 6.0 {
            panel_gl(&famp, a, b, x)
        } else {
            panel_filon(&famp, a, b, x)
        };
        total.add(v);
        err += e;
        a = b;
    }
    // closure of the neglected [0, k_min] sliver: W ~ 2/3 there
    total.add((2.0 / 9.0) * k_min.powi(3) * (kernel.eval(k_min) - c_split));

    if let Some(kr) = k_rot {
        let (v, e) = tail_rotated(kernel, plateau_shift, kr, x);
        total.add(v);
        err += e;
    }

    let value = -c_split / (4.0 * x * x * x) + total.total() / PI;
    let abs_err = err / PI;
    // the dominant scale protects the failure test when the result itself
    // sits on a cancellation (screened compensation)
    let scale = value
        .abs()
        .max(1e-3 * (c_split / (4.0 * x * x * x)).abs())
        .max(f64::MIN_POSITIVE);
    let tol = opts.rel_tol * scale;
    if abs_err > tol {
        return Err(PotentialError::QuadratureFailure {
            x,
            est: abs_err,
            tol,
        });
    }
    Ok(QuadEval {
        value,
        abs_err,
        rel_err: abs_err / value.abs().max(f64::MIN_POSITIVE),
    })
}

/// Closed-form asymptote of the potential in one regime, Hartree.
pub fn phi_asymptote(
    x: f64,
    regime: Regime,
    table: &SpectrumTable,
    config: &PhysicalConfig,
) -> Result<f64, PotentialError> {
    match crate::kernel::b_plateau(regime, table, config) {
        Ok(PlateauForm::Constant(c)) => Ok(-c / (4.0 * x * x * x)),
        Ok(PlateauForm::Linear(gamma)) => Ok(-3.0 * gamma / (4.0 * PI * x * x * x * x)),
        Err(_) => Err(PotentialError::NoAsymptote(regime)),
    }
}

/// Both sides of the dipolar compensation: the singular k_x^2/k^2
/// coefficient of the image transform and the leading radiation term.
#[derive(Debug, Clone, Copy)]
pub struct CancellationReport {
    pub image_coefficient: f64,
    pub radiation_coefficient: f64,
    pub sum: f64,
    pub moment_used: f64,
}

/// The image transform's singular coefficient is +4 pi e^2 <a_x^2>; the
/// zeroth radiation term contributes exactly the opposite when built from
/// the same moment.
pub fn dipolar_cancellation_check(table: &SpectrumTable) -> CancellationReport {
    let m = table.moment_x2;
    let image = 4.0 * PI * m;
    let radiation = -4.0 * PI * m;
    CancellationReport {
        image_coefficient: image,
        radiation_coefficient: radiation,
        sum: image + radiation,
        moment_used: m,
    }
}

/// Path moments entering the algebraic screening tail: the equal-time
/// (delta-weighted) moment and the time-decorrelated product.
#[derive(Debug, Clone, Copy)]
pub struct PathMoments {
    /// int_0^1 <alpha_x(s)^2> ds.
    pub equal_time: f64,
    /// int int <alpha_x(s1) alpha_x(s2)> ds1 ds2.
    pub cross_time: f64,
}

impl PathMoments {
    /// Thermal atomic moments: equal-time from the table's strength sum and
    /// the cross moment from the classical kernel constant.
    pub fn atomic(table: &SpectrumTable, config: &PhysicalConfig) -> Self {
        PathMoments {
            equal_time: table.sum_strengths(),
            cross_time: 2.0 * config.k_bt() * table.sum_strength_over_delta(),
        }
    }

    /// A classical point charge: the path does not fluctuate, both moments
    /// coincide and the algebraic tail vanishes.
    pub fn classical_point(a_x2: f64) -> Self {
        PathMoments {
            equal_time: a_x2,
            cross_time: a_x2,
        }
    }
}

/// Screened Coulomb propagator in Fourier form: the Debye-Huckel exponential
/// part 4 pi/(k^2 + kappa^2), and the small-k dipolar coefficient of the
/// algebraic part, (4 pi/k^2)(equal_time - cross_time).
pub fn screened_coulomb(k: f64, kappa: f64, moments: &PathMoments) -> (f64, f64) {
    assert!(k > 0.0 && kappa > 0.0);
    let exp_part = 4.0 * PI / (k * k + kappa * kappa);
    let alg_part = 4.0 * PI / (k * k) * (moments.equal_time - moments.cross_time);
    (exp_part, alg_part)
}

/// How a curve point was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Quadrature,
    Asymptote,
    Screened,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Quadrature => "quadrature",
            Method::Asymptote => "asymptote",
            Method::Screened => "screened",
        }
    }
}

/// One evaluated distance.
#[derive(Debug, Clone, Copy)]
pub struct PhiPoint {
    pub x: f64,
    pub phi: f64,
    pub regime: Regime,
    pub method: Method,
    pub rel_err: f64,
    /// Near a screening boundary both treatments are reported.
    pub alt: Option<(f64, Method)>,
}

/// A sampled potential curve; x strictly increasing.
#[derive(Debug, Clone)]
pub struct PotentialCurve {
    pub points: Vec<PhiPoint>,
}

impl PotentialCurve {
    fn new(points: Vec<PhiPoint>) -> Self {
        for pair in points.windows(2) {
            assert!(pair[0].x < pair[1].x, "curve x must be strictly increasing");
            assert!(pair[0].phi.is_finite() && pair[1].phi.is_finite());
        }
        PotentialCurve { points }
    }
}

/// Everything needed to evaluate Phi(X) repeatedly for one configuration.
pub struct PotentialEngine {
    pub config: PhysicalConfig,
    pub scales: LengthScales,
    pub table: SpectrumTable,
    kernel: LowTempKernel,
    pub cutoff: CutoffSpec,
    pub opts: InvertOptions,
}

impl PotentialEngine {
    pub fn new(config: PhysicalConfig, table: SpectrumTable) -> Result<Self, PotentialError> {
        config.validate()?;
        let scales = derive_scales(&config);
        let kernel = LowTempKernel::new(&config, &table);
        let cutoff = CutoffSpec::from_config(&config);
        Ok(PotentialEngine {
            config,
            scales,
            table,
            kernel,
            cutoff,
            opts: InvertOptions::default(),
        })
    }

    pub fn kernel(&self) -> &LowTempKernel {
        &self.kernel
    }

    /// Classical Lifshitz tail -k_B T alpha_E / (4 X^3).
    pub fn phi_class(&self, x: f64) -> f64 {
        -self.config.k_bt() * self.table.sum_strength_over_delta() / (2.0 * x * x * x)
    }

    /// Unscreened potential by quadrature of the low-temperature kernel.
    pub fn phi_unscreened(&self, x: f64) -> Result<QuadEval, PotentialError> {
        fourier_invert(&self.kernel, x, &self.cutoff, &self.opts)
    }

    /// Net potential with the screening prescription: untouched below the
    /// screening length, classical tail subtracted above it; both values
    /// reported within a factor 3 of the boundary.
    pub fn phi_total(&self, x: f64) -> Result<PhiPoint, PotentialError> {
        if x <= NEAR_FIELD_GUARD * self.scales.a_b {
            return Err(PotentialError::NearField(x));
        }
        let quad = self.phi_unscreened(x)?;
        let regime = classify_regime(x, &self.scales, self.config.lambda_screen);
        let (phi, method, alt) = match self.config.lambda_screen {
            None => (quad.value, Method::Quadrature, None),
            Some(ls) => {
                let screened = quad.value - self.phi_class(x);
                if x > ls {
                    let alt = (x < 3.0 * ls).then_some((quad.value, Method::Quadrature));
                    (screened, Method::Screened, alt)
                } else {
                    let alt = (x > ls / 3.0).then_some((screened, Method::Screened));
                    (quad.value, Method::Quadrature, alt)
                }
            }
        };
        Ok(PhiPoint {
            x,
            phi,
            regime,
            method,
            rel_err: quad.rel_err,
            alt,
        })
    }

    /// Regime-matched closed asymptote at x (the unscreened laws minus the
    /// classical tail in the screened regimes).
    pub fn phi_by_asymptote(&self, x: f64) -> Result<PhiPoint, PotentialError> {
        if x <= NEAR_FIELD_GUARD * self.scales.a_b {
            return Err(PotentialError::NearField(x));
        }
        let regime = classify_regime(x, &self.scales, self.config.lambda_screen);
        let phi = match regime {
            Regime::VdW | Regime::CasimirPolder | Regime::ClassicalLifshitz => {
                phi_asymptote(x, regime, &self.table, &self.config)?
            }
            Regime::ScreenedVdW => {
                phi_asymptote(x, Regime::VdW, &self.table, &self.config)? - self.phi_class(x)
            }
            Regime::ScreenedCP => {
                phi_asymptote(x, Regime::CasimirPolder, &self.table, &self.config)?
                    - self.phi_class(x)
            }
            Regime::ScreenedCancelled => 0.0,
            Regime::NearField => unreachable!(),
        };
        Ok(PhiPoint {
            x,
            phi,
            regime,
            method: Method::Asymptote,
            rel_err: f64::NAN,
            alt: None,
        })
    }

    /// Evaluate a whole curve; points run in parallel under the `parallel`
    /// feature, and the output order is the input order either way.
    pub fn curve(
        &self,
        xs: &[f64],
        mode: Parallelism,
        by_asymptote: bool,
    ) -> Result<PotentialCurve, PotentialError> {
        let evals = map_indexed(xs.len(), mode, |i| {
            if by_asymptote {
                self.phi_by_asymptote(xs[i])
            } else {
                self.phi_total(xs[i])
            }
        });
        let mut points = Vec::with_capacity(evals.len());
        for e in evals {
            points.push(e?);
        }
        Ok(PotentialCurve::new(points))
    }
}

/// One row of the piecewise regime map.
#[derive(Debug, Clone)]
pub struct RegimeRow {
    pub x_lo: f64,
    pub x_hi: Option<f64>,
    pub regime: Regime,
    pub decay: &'static str,
    pub formula: &'static str,
    /// Coefficient of the decay law, Hartree * a_B^power.
    pub coefficient: f64,
}

/// The piecewise regime map for the configuration's ordering of the
/// screening length among the scales.
pub fn regime_table(config: &PhysicalConfig, table: &SpectrumTable) -> Vec<RegimeRow> {
    let scales = derive_scales(config);
    let alpha_e = crate::spectrum::static_polarizability(table);
    let c3_vdw = table.moment_x2 / 4.0;
    let c4_cp = 3.0 * config.hbar_c() * alpha_e / (8.0 * PI);
    let c3_class = config.k_bt() * alpha_e / 4.0;

    let guard = NEAR_FIELD_GUARD * scales.a_b;
    let at = scales.lambda_at;
    let ph = scales.lambda_ph;
    let make = |x_lo: f64, x_hi: Option<f64>, regime: Regime| {
        let (decay, formula, coefficient) = match regime {
            Regime::VdW => ("X^-3", "-e^2 <a_x^2>/(4 X^3)", c3_vdw),
            Regime::CasimirPolder => ("X^-4", "-3 hbar c alpha_E/(8 pi X^4)", c4_cp),
            Regime::ClassicalLifshitz => ("X^-3", "-k_B T alpha_E/(4 X^3)", c3_class),
            Regime::ScreenedVdW => ("X^-3", "-[e^2 <a_x^2> - k_B T alpha_E]/(4 X^3)", c3_vdw - c3_class),
            Regime::ScreenedCP => ("X^-4", "Phi_CP - Phi_class", c4_cp),
            Regime::ScreenedCancelled => ("~0", "exact compensation", 0.0),
            Regime::NearField => ("", "model invalid", 0.0),
        };
        RegimeRow {
            x_lo,
            x_hi,
            regime,
            decay,
            formula,
            coefficient,
        }
    };

    match ScreeningOrdering::of(&scales, config.lambda_screen) {
        ScreeningOrdering::Unscreened => vec![
            make(guard, Some(at), Regime::VdW),
            make(at, Some(ph), Regime::CasimirPolder),
            make(ph, None, Regime::ClassicalLifshitz),
        ],
        ScreeningOrdering::BeyondPhoton => {
            let ls = config.lambda_screen.unwrap();
            vec![
                make(guard, Some(at), Regime::VdW),
                make(at, Some(ph), Regime::CasimirPolder),
                make(ph, Some(ls), Regime::ClassicalLifshitz),
                make(ls, None, Regime::ScreenedCancelled),
            ]
        }
        ScreeningOrdering::BetweenAtomicAndPhoton => {
            let ls = config.lambda_screen.unwrap();
            vec![
                make(guard, Some(at), Regime::VdW),
                make(at, Some(ls), Regime::CasimirPolder),
                make(ls, Some(ph), Regime::ScreenedCP),
                make(ph, None, Regime::ScreenedCancelled),
            ]
        }
        ScreeningOrdering::BelowAtomic => {
            let ls = config.lambda_screen.unwrap();
            vec![
                make(guard, Some(ls), Regime::VdW),
                make(ls, Some(at), Regime::ScreenedVdW),
                make(at, Some(ph), Regime::ScreenedCP),
                make(ph, None, Regime::ScreenedCancelled),
            ]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn image_potential_collapses_for_point_atom() {
        assert_eq!(image_potential(5.0, [0.0; 3]).unwrap(), 0.0);
    }

    #[test]
    fn image_potential_matches_dipolar_asymptote() {
        let x = 100.0;
        let a = [1.0, 0.0, 0.0];
        let exact = image_potential(x, a).unwrap();
        let asym = image_potential_asymptote(x, a);
        assert_relative_eq!(exact, asym, max_relative = 0.03);
        assert_relative_eq!(asym, 1.25e-7, max_relative = 1e-12);
        // transverse displacement carries the 1/2 weight
        let at = [0.0, 1.0, 0.0];
        assert_relative_eq!(
            image_potential_asymptote(x, at),
            0.5 / (2.0_f64 * x).powi(3),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            image_potential(x, at).unwrap(),
            image_potential_asymptote(x, at),
            max_relative = 0.03
        );
    }

    #[test]
    fn image_potential_wall_contact() {
        assert!(matches!(
            image_potential(1.0, [-1.5, 0.0, 0.0]),
            Err(PotentialError::WallContact(_))
        ));
    }

    #[test]
    fn taper_endpoints() {
        for taper in [Taper::Quintic, Taper::Cubic, Taper::Cosine] {
            let c = CutoffSpec {
                k_cut: 100.0,
                taper,
                taper_start: 0.5,
            };
            assert_eq!(c.g(10.0), 1.0);
            assert_eq!(c.g(50.0), 1.0);
            assert_eq!(c.g(100.0), 0.0);
            assert_eq!(c.g(150.0), 0.0);
            let mid = c.g(75.0);
            assert!(mid > 0.0 && mid < 1.0);
        }
    }

    #[test]
    fn cancellation_is_exact_and_scales_linearly() {
        let t = crate::spectrum::build_spectrum(&crate::spectrum::SpectrumParams::default()).unwrap();
        let r = dipolar_cancellation_check(&t);
        assert_eq!(r.sum, 0.0);
        let mut toy = crate::spectrum::SpectrumTable::two_level(0.375, 0.5);
        toy.moment_x2 = 2.0;
        let r = dipolar_cancellation_check(&toy);
        assert_relative_eq!(r.image_coefficient, 8.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(r.radiation_coefficient, -8.0 * PI, max_relative = 1e-15);
    }

    #[test]
    fn screened_coulomb_limits() {
        let m = PathMoments {
            equal_time: 1.0,
            cross_time: 0.2,
        };
        let (e_big, _) = screened_coulomb(1.0, 1e9, &m);
        assert!(e_big < 1e-15);
        let (e_small, _) = screened_coulomb(1.0, 1e-9, &m);
        assert_relative_eq!(e_small, 4.0 * PI, max_relative = 1e-10);
        let (_, alg) = screened_coulomb(2.0, 1.0, &PathMoments::classical_point(1.7));
        assert_eq!(alg, 0.0);
    }
}
