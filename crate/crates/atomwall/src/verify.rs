//! The verification suite behind `atomwall verify`: propagator identities,
//! spectral sum rules, kernel oracle equivalences, potential asymptote
//! recovery, screening compensation, and the Monte Carlo Feynman-Kac checks.
//!
//! The `oracles` submodule holds the independent reference computations
//! (direct quadratures, the Dalgarno-Lewis solve); they share no code with
//! the implementation paths they certify.

use crate::fk::{self, ModeSpec};
use crate::kernel::{b_general, b_low_temp, KernelParams, TransitionBasis};
use crate::par::Parallelism;
use crate::potential::{
    dipolar_cancellation_check, fourier_invert, phi_asymptote, CutoffSpec, InvertOptions,
    PotentialEngine, Taper,
};
use crate::propagator::q_propagator;
use crate::spectrum::{build_spectrum, static_polarizability, SpectrumParams, SpectrumTable};
use crate::units::{derive_scales, PhysicalConfig, Regime};

/// Independent reference computations.
pub mod oracles {
    use crate::quad::{gl32, integrate_gl};

    /// Direct (s,t) double quadrature of the kernel definition
    /// `B(k) = 2 int_0^1 ds int_0^s dt <a_x(s) a_x(t)> Q(lambda_ph k, s-t)`
    /// for a two-level system with gap delta_e and folded strength s01.
    pub fn bop_two_level(
        k: f64,
        delta_e: f64,
        s01: f64,
        beta: f64,
        hbar_c: f64,
    ) -> f64 {
        let eps = hbar_c * k;
        let u = beta * eps; // lambda_ph k
        let z = 1.0 + (-beta * delta_e).exp();
        let corr = |w: f64| -> f64 {
            s01 * ((-w * beta * delta_e).exp() + (-(1.0 - w) * beta * delta_e).exp()) / z
        };
        let q = |w: f64| crate::propagator::q_propagator(u, w).unwrap();
        let inner = |s: f64| -> f64 {
            // split [0, s] for the boundary layers of the exponentials
            let mid = 0.5 * s;
            integrate_gl(gl32(), 0.0, mid, |t| corr(s - t) * q(s - t))
                + integrate_gl(gl32(), mid, s, |t| corr(s - t) * q(s - t))
        };
        let outer = integrate_gl(gl32(), 0.0, 0.5, inner) + integrate_gl(gl32(), 0.5, 1.0, inner);
        2.0 * outer
    }

    /// Dalgarno-Lewis static polarizability of hydrogen: solve the radial
    /// first-order equation
    /// `[-1/2 d^2/dr^2 + 1/r^2 - 1/r - E_0] u(r) = -r^2 R_10(r)/sqrt(3)`
    /// on a uniform grid and return `alpha = -(2/sqrt(3)) int r^2 R_10 u dr`.
    /// The exact answer is 9/2.
    pub fn dalgarno_lewis_alpha(n_grid: usize, r_max: f64) -> f64 {
        let h = r_max / (n_grid as f64 + 1.0);
        let r10 = |r: f64| 2.0 * (-r).exp();
        let s3 = 3.0_f64.sqrt();
        // tridiagonal system from the second-order finite difference
        let mut diag = vec![0.0; n_grid];
        let off = -0.5 / (h * h);
        let mut rhs = vec![0.0; n_grid];
        for i in 0..n_grid {
            let r = h * (i as f64 + 1.0);
            diag[i] = 1.0 / (h * h) + 1.0 / (r * r) - 1.0 / r + 0.5;
            rhs[i] = -r * r * r10(r) / s3;
        }
        // Thomas algorithm
        let mut c = vec![0.0; n_grid];
        let mut d = vec![0.0; n_grid];
        c[0] = off / diag[0];
        d[0] = rhs[0] / diag[0];
        for i in 1..n_grid {
            let m = diag[i] - off * c[i - 1];
            c[i] = off / m;
            d[i] = (rhs[i] - off * d[i - 1]) / m;
        }
        let mut u = vec![0.0; n_grid];
        u[n_grid - 1] = d[n_grid - 1];
        for i in (0..n_grid - 1).rev() {
            u[i] = d[i] - c[i] * u[i + 1];
        }
        // alpha = -(2/sqrt 3) int r^2 R10 u dr, trapezoid on the grid
        let mut alpha = 0.0;
        for i in 0..n_grid {
            let r = h * (i as f64 + 1.0);
            alpha += r * r * r10(r) * u[i];
        }
        -(2.0 / s3) * alpha * h
    }

    /// Numerical radial quadrature of <r^2>_{1s} = int R_10^2 r^4 dr.
    pub fn ground_r2_quadrature() -> f64 {
        integrate_gl(gl32(), 0.0, 15.0, |r| 4.0 * (-2.0 * r).exp() * r.powi(4))
            + integrate_gl(gl32(), 15.0, 40.0, |r| 4.0 * (-2.0 * r).exp() * r.powi(4))
    }

    /// Numerical radial quadrature of the 1s -> 2p dipole integral.
    pub fn dipole_1s2p_quadrature() -> f64 {
        let r10 = |r: f64| 2.0 * (-r).exp();
        let r21 = |r: f64| r * (-0.5 * r).exp() / (2.0 * 6.0_f64.sqrt());
        integrate_gl(gl32(), 0.0, 20.0, |r| r10(r) * r * r21(r) * r * r)
            + integrate_gl(gl32(), 20.0, 60.0, |r| r10(r) * r * r21(r) * r * r)
    }

    /// Zero-temperature wall potential from the imaginary-frequency
    /// representation (an algebraic route independent of the oscillatory
    /// k-inversion):
    /// `U(X) = -(1/4 pi X^3) int_0^inf dxi alpha(i xi) e^{-y}(1 + y + y^2/2)`
    /// with y = 2 xi X / c.
    pub fn wall_potential_imaginary_frequency(
        lines: &[(f64, f64)],
        x: f64,
        hbar_c: f64,
    ) -> f64 {
        let alpha_iw = |xi: f64| -> f64 {
            lines
                .iter()
                .map(|&(de, s)| 2.0 * s * de / (de * de + xi * xi))
                .sum()
        };
        let scale = 2.0 * x / hbar_c;
        let integrand = |xi: f64| -> f64 {
            let y = scale * xi;
            alpha_iw(xi) * (-y).exp() * (1.0 + y + 0.5 * y * y)
        };
        // panels resolve both the atomic Lorentzians and the e^{-y} scale
        let mut total = 0.0;
        let mut lo = 0.0;
        let mut hi = 1e-3_f64.min(1.0 / scale);
        while lo < 60.0 / scale {
            total += integrate_gl(gl32(), lo, hi, integrand);
            lo = hi;
            hi = (hi * 1.6).min(60.0 / scale + 1.0);
        }
        -total / (4.0 * std::f64::consts::PI * x.powi(3))
    }
}

/// One verification check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub expected: f64,
    pub observed: f64,
    /// Allowed |observed - expected|, already scaled (absolute).
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    fn new(suite: &'static str, name: impl Into<String>, expected: f64, observed: f64, tol: f64) -> Self {
        CheckResult {
            suite,
            name: name.into(),
            expected,
            observed,
            tolerance: tol,
            pass: (observed - expected).abs() <= tol,
        }
    }
}

fn q_normalization(u: f64) -> f64 {
    use crate::quad::{gl32, integrate_gl};
    let mut edges = vec![0.0];
    let mut w = (1.0 / u.max(2.0)).min(0.25);
    while w < 0.5 {
        edges.push(w);
        w *= 2.0;
    }
    edges.push(0.5);
    let mut total = 0.0;
    for pair in edges.windows(2) {
        total += integrate_gl(gl32(), pair[0], pair[1], |s| q_propagator(u, s).unwrap());
    }
    2.0 * total
}

fn propagator_suite(out: &mut Vec<CheckResult>) {
    for u in [0.0, 0.01, 1.0, 100.0, 1e4] {
        out.push(CheckResult::new(
            "propagator",
            format!("Q normalization, u = {u}"),
            1.0,
            q_normalization(u),
            1e-10,
        ));
    }
    let q = |u: f64, s: f64| q_propagator(u, s).unwrap();
    out.push(CheckResult::new(
        "propagator",
        "Q(u, s) = Q(u, 1-s) at (3.7, 0.2)",
        q(3.7, 0.8),
        q(3.7, 0.2),
        1e-14,
    ));
    let (u, s, h) = (3.0, 0.4, 5e-4);
    let d2 = (q(u, s + h) - 2.0 * q(u, s) + q(u, s - h)) / (h * h);
    out.push(CheckResult::new(
        "propagator",
        "d2Q/ds2 = u^2 Q at (3, 0.4)",
        u * u * q(u, s),
        d2,
        1e-6 * (u * u * q(u, s)).abs(),
    ));
    let (b, sv) = (2.0, 0.3);
    out.push(CheckResult::new(
        "propagator",
        "beta_eps^2 cov = Q at (2, 0.3)",
        q(b, sv),
        b * b * crate::propagator::oscillator_covariance(b, sv).unwrap(),
        1e-13,
    ));
}

fn spectrum_suite(out: &mut Vec<CheckResult>) {
    let table = build_spectrum(&SpectrumParams::default()).unwrap();
    let dl = oracles::dalgarno_lewis_alpha(16_000, 40.0);
    out.push(CheckResult::new(
        "spectrum",
        "Dalgarno-Lewis oracle reproduces 9/2",
        4.5,
        dl,
        0.001,
    ));
    out.push(CheckResult::new(
        "spectrum",
        "alpha_E (bound + continuum) vs oracle",
        dl,
        static_polarizability(&table),
        0.005 * 4.5,
    ));
    let bound20 = build_spectrum(&SpectrumParams {
        n_max: 20,
        continuum_bins: 0,
        k_max_continuum: 0.0,
    })
    .unwrap();
    out.push(CheckResult::new(
        "spectrum",
        "alpha_E bound-only n <= 20",
        3.66,
        static_polarizability(&bound20),
        0.01 * 3.66,
    ));
    out.push(CheckResult::new(
        "spectrum",
        "completeness defect sum S vs <a_x^2>",
        0.0,
        table.moment_x2 - table.sum_strengths(),
        1e-3,
    ));
    out.push(CheckResult::new(
        "spectrum",
        "<r^2>_1s / 3 quadrature vs ground moment",
        crate::spectrum::ground_moment(),
        oracles::ground_r2_quadrature() / 3.0,
        1e-10,
    ));
    out.push(CheckResult::new(
        "spectrum",
        "1s->2p strength vs radial quadrature",
        oracles::dipole_1s2p_quadrature().powi(2) / 3.0,
        crate::hydrogen::lyman_strength(2),
        1e-10,
    ));
}

fn kernel_suite(out: &mut Vec<CheckResult>) {
    let strength = 32768.0 / 59049.0;
    let table = SpectrumTable::two_level(0.375, strength);
    let basis = TransitionBasis::two_level(-0.5, 0.375, strength);

    // oracle equivalence at 5 wavenumbers, beta = 10
    let cfg = PhysicalConfig {
        tau: 1.0 / (10.0 * 0.375),
        e_max: Some(10.0),
        ..Default::default()
    };
    let mut params = KernelParams::new(&cfg, &table);
    params.e_max = Some(10.0);
    for beta_eps in [0.3, 1.0, 3.0, 10.0, 30.0] {
        let k = beta_eps / (params.beta * params.hbar_c);
        let oracle = oracles::bop_two_level(k, 0.375, strength, params.beta, params.hbar_c);
        let bg = b_general(k, &params, &basis).unwrap();
        out.push(CheckResult::new(
            "kernel",
            format!("B oracle equivalence, beta eps_k = {beta_eps}"),
            oracle,
            bg,
            1e-8 * oracle.abs(),
        ));
    }

    // J antisymmetry at a random-ish sample of arguments
    let mut worst = 0.0_f64;
    for &(ei, ej, eps, beta) in &[
        (-0.5, -0.125, 0.2, 7.0),
        (-0.125, -0.5, 0.61, 3.0),
        (-0.125, -0.055, 1.7, 12.0),
        (-0.5, 0.3, 0.05, 20.0),
    ] {
        let a = crate::kernel::j_term(ei, ej, -0.5, eps, beta);
        let b = crate::kernel::j_term(ej, ei, -0.5, eps, beta);
        worst = worst.max((a + b).abs() / a.abs().max(b.abs()).max(1e-300));
    }
    out.push(CheckResult::new(
        "kernel",
        "J antisymmetry (worst relative residual)",
        0.0,
        worst,
        1e-14,
    ));

    // low-temperature reduction on the two-level system
    for beta_delta in [5.0, 10.0, 20.0] {
        let cfg = PhysicalConfig {
            tau: 1.0 / beta_delta,
            e_max: Some(10.0),
            ..Default::default()
        };
        let mut p = KernelParams::new(&cfg, &table);
        p.e_max = Some(10.0);
        let k = 2.0 * 0.375 / p.hbar_c;
        let bg = b_general(k, &p, &basis).unwrap();
        let blt = b_low_temp(k, &p).unwrap();
        out.push(CheckResult::new(
            "kernel",
            format!("low-T reduction, beta (E1-E0) = {beta_delta}"),
            0.0,
            (bg - blt).abs(),
            10.0 * (-beta_delta).exp() * blt,
        ));
    }

    // plateau matching on the full table
    let table = build_spectrum(&SpectrumParams::default()).unwrap();
    let cfg = PhysicalConfig {
        tau: 1e-3,
        ..Default::default()
    };
    let p = KernelParams::new(&cfg, &table);
    let scales = derive_scales(&cfg);
    let k_vdw = 100.0 / scales.lambda_at;
    out.push(CheckResult::new(
        "kernel",
        "vdW plateau at k = 100/lambda_at",
        table.sum_strengths(),
        b_low_temp(k_vdw, &p).unwrap(),
        0.02 * table.sum_strengths(),
    ));
    let k_cp = (10.0 / scales.lambda_ph * 0.1 / scales.lambda_at).sqrt();
    let gamma = cfg.hbar_c() * table.sum_strength_over_delta();
    out.push(CheckResult::new(
        "kernel",
        "retarded slope at the geometric midpoint",
        gamma,
        b_low_temp(k_cp, &p).unwrap() / k_cp,
        0.02 * gamma,
    ));
    let k_cl = 0.1 / scales.lambda_ph;
    let c_class = 2.0 * cfg.k_bt() * table.sum_strength_over_delta();
    out.push(CheckResult::new(
        "kernel",
        "classical plateau at k = 1/(10 lambda_ph)",
        c_class,
        b_low_temp(k_cl, &p).unwrap(),
        0.02 * c_class,
    ));
}

fn potential_suite(out: &mut Vec<CheckResult>) {
    let table = build_spectrum(&SpectrumParams::default()).unwrap();

    // dipolar compensation
    let rep = dipolar_cancellation_check(&table);
    out.push(CheckResult::new(
        "potential",
        "dipolar cancellation (image + radiation)",
        0.0,
        rep.sum.abs() / rep.image_coefficient.abs(),
        1e-12,
    ));

    // asymptote recovery with the physical hierarchy
    let cfg = PhysicalConfig {
        tau: 1e-3,
        ..Default::default()
    };
    let engine = PotentialEngine::new(cfg.clone(), table.clone()).unwrap();
    let scales = engine.scales;

    let x_cp = 30.0 * scales.lambda_at;
    let phi = engine.phi_total(x_cp).unwrap().phi;
    let asym = phi_asymptote(x_cp, Regime::CasimirPolder, &table, &cfg).unwrap();
    out.push(CheckResult::new(
        "potential",
        "Casimir-Polder law at X = 30 lambda_at",
        asym,
        phi,
        0.02 * asym.abs(),
    ));

    let x_cl = 30.0 * scales.lambda_ph;
    let phi = engine.phi_total(x_cl).unwrap().phi;
    let asym = phi_asymptote(x_cl, Regime::ClassicalLifshitz, &table, &cfg).unwrap();
    out.push(CheckResult::new(
        "potential",
        "classical Lifshitz law at X = 30 lambda_ph",
        asym,
        phi,
        0.02 * asym.abs(),
    ));

    // vdW recovery needs X well below lambda_at/40 before the first
    // retardation correction 0.85 X/lambda_at falls under 2%; a toy
    // hierarchy keeps that X outside the near-field guard.
    let toy = PhysicalConfig {
        alpha_fs: 1e-4,
        tau: 1e-3,
        ..Default::default()
    };
    let toy_engine = PotentialEngine::new(toy.clone(), table.clone()).unwrap();
    let x_vdw = 0.01 * toy_engine.scales.lambda_at;
    let phi = toy_engine.phi_total(x_vdw).unwrap().phi;
    let asym = phi_asymptote(x_vdw, Regime::VdW, &table, &toy).unwrap();
    out.push(CheckResult::new(
        "potential",
        "vdW law at X = 0.01 lambda_at (toy alpha_fs)",
        asym,
        phi,
        0.02 * asym.abs(),
    ));

    // plateau-split consistency
    let kern = engine.kernel();
    let x = 0.08 * scales.lambda_at;
    let cut = CutoffSpec::from_config(&cfg);
    let split = fourier_invert(kern, x, &cut, &InvertOptions::default()).unwrap();
    let nosplit = fourier_invert(
        kern,
        x,
        &cut,
        &InvertOptions {
            split_plateau: false,
            ..Default::default()
        },
    )
    .unwrap();
    out.push(CheckResult::new(
        "potential",
        "plateau-split consistency at X = 0.08 lambda_at",
        split.value,
        nosplit.value,
        1e-10 * split.value.abs(),
    ));

    // cross-validation against the imaginary-frequency oracle (T ~ 0 there)
    let lines: Vec<(f64, f64)> = table.lines.iter().map(|l| (l.delta_e, l.strength)).collect();
    let xi_oracle = oracles::wall_potential_imaginary_frequency(&lines, x, cfg.hbar_c());
    out.push(CheckResult::new(
        "potential",
        "k-inversion vs imaginary-frequency oracle",
        xi_oracle,
        split.value,
        1e-5 * xi_oracle.abs(),
    ));

    // taper-shape insensitivity where the taper is actually exercised
    let mut vals = Vec::new();
    for taper in [Taper::Quintic, Taper::Cubic, Taper::Cosine] {
        let c = CutoffSpec { taper, ..cut };
        let opts = InvertOptions {
            analytic_tail: false,
            ..Default::default()
        };
        vals.push(fourier_invert(kern, x, &c, &opts).unwrap().value);
    }
    let spread = (vals.iter().cloned().fold(f64::MIN, f64::max)
        - vals.iter().cloned().fold(f64::MAX, f64::min))
        / vals[0].abs();
    out.push(CheckResult::new(
        "potential",
        "taper-shape insensitivity at X = 0.08 lambda_at",
        0.0,
        spread,
        1e-3,
    ));
}

fn screening_suite(out: &mut Vec<CheckResult>) {
    let table = build_spectrum(&SpectrumParams::default()).unwrap();

    // exact compensation beyond both lambda_ph and lambda_screen
    let cfg = PhysicalConfig {
        tau: 1e-3,
        ..Default::default()
    };
    let scales = derive_scales(&cfg);
    let cfg = PhysicalConfig {
        lambda_screen: Some(10.0 * scales.lambda_ph),
        ..cfg
    };
    let engine = PotentialEngine::new(cfg, table.clone()).unwrap();
    let x = 30.0 * scales.lambda_ph;
    let point = engine.phi_total(x).unwrap();
    let class = engine.phi_class(x);
    out.push(CheckResult::new(
        "screening",
        "compensation: |Phi_screen| / |Phi_class| at X = 30 lambda_ph",
        0.0,
        (point.phi / class).abs(),
        0.02,
    ));

    // intermediate ordering: Phi_CP - Phi_class
    let cfg = PhysicalConfig {
        tau: 1e-4,
        ..Default::default()
    };
    let scales = derive_scales(&cfg);
    let ls = 10.0 * scales.lambda_at;
    let cfg = PhysicalConfig {
        lambda_screen: Some(ls),
        ..cfg
    };
    let engine = PotentialEngine::new(cfg.clone(), table.clone()).unwrap();
    let x = 30.0 * ls;
    let point = engine.phi_total(x).unwrap();
    let expect = phi_asymptote(x, Regime::CasimirPolder, &table, &cfg).unwrap() - engine.phi_class(x);
    out.push(CheckResult::new(
        "screening",
        "screened CP: Phi_CP - Phi_class at X = 30 lambda_screen",
        expect,
        point.phi,
        0.03 * expect.abs(),
    ));
}

fn fk_suite(out: &mut Vec<CheckResult>, seed: u64, n_paths: usize) {
    use crate::fk::BridgeEnsemble;
    let n_steps = 32;
    let ens = BridgeEnsemble::sample(n_paths, n_steps, seed, Parallelism::Auto);
    for (ia, ib) in [(16, 16), (8, 24), (4, 20)] {
        let s = ia as f64 / n_steps as f64;
        let sp = ib as f64 / n_steps as f64;
        let expect = fk::bridge_covariance(s, sp);
        let (mc, se) = ens.empirical_covariance(ia, ib);
        out.push(CheckResult::new(
            "fk",
            format!("bridge covariance at ({s}, {sp})"),
            expect,
            mc,
            3.0 * se,
        ));
    }

    let id = fk::gaussian_identity_check(&|_| 1.0, 2.0, 64, n_paths, seed, Parallelism::Auto)
        .unwrap();
    out.push(CheckResult::new(
        "fk",
        "Gaussian identity, constant test function",
        id.exact,
        id.mc_re,
        3.0 * id.se_re,
    ));
    let id = fk::gaussian_identity_check(
        &|s| (2.0 * std::f64::consts::PI * s).sin(),
        1.0,
        64,
        n_paths,
        seed,
        Parallelism::Auto,
    )
    .unwrap();
    out.push(CheckResult::new(
        "fk",
        "Gaussian identity, sine test function",
        id.exact,
        id.mc_re,
        3.0 * id.se_re,
    ));

    let mode = ModeSpec {
        eps: 1.3,
        f_const: 0.6 / std::f64::consts::SQRT_2,
        charge: 1.0,
        light_speed: 1.0,
    };
    match fk::coupled_oscillator_check(&mode, 1.0, 2.0, &[64, 128, 256, 512]) {
        Ok(rep) => {
            let last = rep.deviations.last().unwrap().1;
            out.push(CheckResult::new(
                "fk",
                "coupled-oscillator FK agreement at n = 512",
                0.0,
                last,
                1e-3,
            ));
            let slope = rep.slopes.iter().sum::<f64>() / rep.slopes.len() as f64;
            out.push(CheckResult::new(
                "fk",
                "coupled-oscillator convergence order",
                2.0,
                slope,
                0.3,
            ));
        }
        Err(e) => out.push(CheckResult::new("fk", format!("coupled oscillator: {e}"), 0.0, 1.0, 0.0)),
    }

    let rep = fk::correlation_check_harmonic(
        1.0,
        2.0,
        n_paths,
        32,
        seed,
        &[(0.25, 0.25), (0.25, 0.75), (0.0, 0.5)],
        Parallelism::Auto,
    );
    out.push(CheckResult::new(
        "fk",
        "harmonic path correlation (max deviation, sigma units)",
        0.0,
        rep.max_deviation_sigmas,
        3.0,
    ));

    let mut prev = f64::INFINITY;
    let mut monotone = true;
    for x in [2.0, 4.0, 8.0, 16.0] {
        let (frac, _) =
            fk::geometric_constraint_estimate(x, 1.0, 6.0, n_paths / 2, 32, seed, Parallelism::Auto);
        let deficit = 1.0 - frac;
        if deficit >= prev {
            monotone = false;
        }
        prev = deficit;
    }
    out.push(CheckResult::new(
        "fk",
        "wall-constraint deficit monotone over x = 2..16",
        1.0,
        if monotone { 1.0 } else { 0.0 },
        0.0,
    ));
}

/// Run the verification suites; `only` filters by suite name.
pub fn run_all(seed: u64, n_paths: usize, only: Option<&str>) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let want = |name: &str| only.is_none_or(|o| o == name);
    if want("propagator") {
        propagator_suite(&mut out);
    }
    if want("spectrum") {
        spectrum_suite(&mut out);
    }
    if want("kernel") {
        kernel_suite(&mut out);
    }
    if want("potential") {
        potential_suite(&mut out);
    }
    if want("screening") {
        screening_suite(&mut out);
    }
    if want("fk") {
        fk_suite(&mut out, seed, n_paths);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dalgarno_lewis_oracle_hits_nine_halves() {
        let a = oracles::dalgarno_lewis_alpha(8_000, 40.0);
        assert!((a - 4.5).abs() < 2e-3, "alpha = {a}");
    }

    #[test]
    fn suites_can_be_filtered() {
        let checks = run_all(42, 2_000, Some("propagator"));
        assert!(!checks.is_empty());
        assert!(checks.iter().all(|c| c.suite == "propagator"));
    }
}
