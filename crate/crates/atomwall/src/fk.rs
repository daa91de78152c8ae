//! Monte Carlo and exact-Gaussian verification of the path-integral
//! machinery: Brownian bridges, the oscillator process, the Gaussian Fourier
//! identity, the single-mode generalized Feynman-Kac formula against exact
//! normal-mode diagonalization, and the geometric wall constraint.
//!
//! Everything stochastic draws from ChaCha8 with one stream per path, so
//! results are bit-reproducible for a fixed seed regardless of thread count;
//! reductions use ordered pairwise summation for the same reason.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::par::{map_indexed, pairwise_sum, Parallelism};
use crate::propagator::oscillator_covariance;

/// Name of the counter-based generator recorded in output metadata.
pub const RNG_ALGORITHM: &str = "chacha8";

#[derive(Debug, Error)]
pub enum FkError {
    #[error("covariance matrix is not positive semidefinite")]
    CovarianceNotPsd,
    #[error("discretization did not converge: {0}")]
    Discretization(String),
}

fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path.wrapping_add(1));
    rng
}

/// Closed three-component Brownian bridges on a uniform grid s_i = i/n.
pub struct BridgeEnsemble {
    pub n_paths: usize,
    pub n_steps: usize,
    pub seed: u64,
    /// Flat layout: [path][step][component].
    paths: Vec<f64>,
}

impl BridgeEnsemble {
    pub fn value(&self, path: usize, step: usize, comp: usize) -> f64 {
        self.paths[(path * (self.n_steps + 1) + step) * 3 + comp]
    }

    /// Draw by sequential conditional sampling, which is exact for the
    /// discrete bridge distribution: every path pins xi(0) = xi(1) = 0.
    pub fn sample(n_paths: usize, n_steps: usize, seed: u64, mode: Parallelism) -> Self {
        assert!(n_steps >= 2);
        let stride = (n_steps + 1) * 3;
        let chunks = map_indexed(n_paths, mode, |p| {
            let mut rng = path_rng(seed, p as u64);
            let mut path = vec![0.0; stride];
            let h = 1.0 / n_steps as f64;
            for comp in 0..3 {
                let mut v = 0.0;
                for i in 0..n_steps - 1 {
                    let s = i as f64 * h;
                    let rest = 1.0 - s;
                    let mean = v * (rest - h) / rest;
                    let var = h * (rest - h) / rest;
                    let z: f64 = rng.sample(StandardNormal);
                    v = mean + var.sqrt() * z;
                    path[(i + 1) * 3 + comp] = v;
                }
            }
            path
        });
        let mut paths = Vec::with_capacity(n_paths * stride);
        for c in chunks {
            paths.extend_from_slice(&c);
        }
        BridgeEnsemble {
            n_paths,
            n_steps,
            seed,
            paths,
        }
    }

    /// Empirical covariance of xi(s_a) xi(s_b), averaged over the three
    /// independent components; returns (mean, standard error).
    pub fn empirical_covariance(&self, step_a: usize, step_b: usize) -> (f64, f64) {
        let mut vals = Vec::with_capacity(self.n_paths * 3);
        for p in 0..self.n_paths {
            for comp in 0..3 {
                vals.push(self.value(p, step_a, comp) * self.value(p, step_b, comp));
            }
        }
        mean_and_stderr(&vals)
    }
}

fn mean_and_stderr(vals: &[f64]) -> (f64, f64) {
    let n = vals.len() as f64;
    let mean = pairwise_sum(vals) / n;
    let sq: Vec<f64> = vals.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Exact discrete bridge covariance min(s,s') - s s'.
pub fn bridge_covariance(s: f64, sp: f64) -> f64 {
    s.min(sp) - s * sp
}

/// Outcome of the Gaussian Fourier identity test
/// `< e^{i int a R} > = e^{-(1/2) int int a cov a }`.
#[derive(Debug, Clone, Copy)]
pub struct IdentityReport {
    pub mc_re: f64,
    pub mc_im: f64,
    pub se_re: f64,
    pub se_im: f64,
    pub exact: f64,
    /// |mc_re - exact| in units of se_re.
    pub deviation_sigmas: f64,
}

/// Sample the oscillator process from its exact covariance matrix on a
/// midpoint grid and compare the Monte Carlo characteristic functional with
/// the Gaussian closed form evaluated by dense-grid quadrature.
pub fn gaussian_identity_check(
    a: &dyn Fn(f64) -> f64,
    beta_eps: f64,
    n_grid: usize,
    n_paths: usize,
    seed: u64,
    mode: Parallelism,
) -> Result<IdentityReport, FkError> {
    let h = 1.0 / n_grid as f64;
    let s: Vec<f64> = (0..n_grid).map(|i| (i as f64 + 0.5) * h).collect();
    let mut cov = DMatrix::zeros(n_grid, n_grid);
    for i in 0..n_grid {
        for j in 0..n_grid {
            cov[(i, j)] = oscillator_covariance(beta_eps, (s[i] - s[j]).abs()).unwrap();
        }
    }
    let chol = cov.clone().cholesky().ok_or(FkError::CovarianceNotPsd)?;
    let l = chol.l();
    let weights: Vec<f64> = s.iter().map(|&si| a(si) * h).collect();

    let per_path = map_indexed(n_paths, mode, |p| {
        let mut rng = path_rng(seed, p as u64);
        let z: Vec<f64> = (0..n_grid).map(|_| rng.sample(StandardNormal)).collect();
        // T = sum_i w_i (L z)_i
        let mut t = 0.0;
        for i in 0..n_grid {
            let mut ri = 0.0;
            for j in 0..=i {
                ri += l[(i, j)] * z[j];
            }
            t += weights[i] * ri;
        }
        (t.cos(), t.sin())
    });
    let re: Vec<f64> = per_path.iter().map(|v| v.0).collect();
    let im: Vec<f64> = per_path.iter().map(|v| v.1).collect();
    let (mc_re, se_re) = mean_and_stderr(&re);
    let (mc_im, se_im) = mean_and_stderr(&im);

    // dense-grid quadrature of the quadratic form (16x finer)
    let m = 16 * n_grid;
    let hm = 1.0 / m as f64;
    let mut v = 0.0;
    for i in 0..m {
        let si = (i as f64 + 0.5) * hm;
        let ai = a(si);
        for j in 0..m {
            let sj = (j as f64 + 0.5) * hm;
            v += ai * a(sj) * oscillator_covariance(beta_eps, (si - sj).abs()).unwrap();
        }
    }
    v *= hm * hm;
    let exact = (-0.5 * v).exp();
    Ok(IdentityReport {
        mc_re,
        mc_im,
        se_re,
        se_im,
        exact,
        deviation_sigmas: (mc_re - exact).abs() / se_re,
    })
}

/// A single photon mode with a spatially constant mode function along x.
#[derive(Debug, Clone, Copy)]
pub struct ModeSpec {
    /// Mode energy, Hartree.
    pub eps: f64,
    /// Constant mode-function amplitude f(r) = f_const.
    pub f_const: f64,
    /// Electron charge (1 in atomic units; kept explicit for toy models).
    pub charge: f64,
    /// Speed of light for this toy model.
    pub light_speed: f64,
}

impl ModeSpec {
    /// Linear coupling strength g_c = sqrt(2) e f / c of the equivalent
    /// momentum-coupled two-oscillator Hamiltonian.
    pub fn g_c(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.charge * self.f_const / self.light_speed
    }
}

/// Exact route: normal modes of the quadratic electron(x)-mode system.
/// Returns the coupled-to-free ratio of the field-averaged traces.
pub fn coupled_ratio_exact(mode: &ModeSpec, omega_trap: f64, beta: f64) -> f64 {
    let m = 1.0;
    let (w, eps) = (omega_trap, mode.eps);
    let gc = mode.g_c();
    let s = w * w + eps * eps + gc * gc * eps / m;
    let disc = (s * s - 4.0 * w * w * eps * eps).sqrt();
    let op = (0.5 * (s + disc)).sqrt();
    let om = (0.5 * (s - disc)).sqrt();
    let r_coupled = 2.0 * (0.5 * beta * eps).sinh() / (4.0 * (0.5 * beta * op).sinh() * (0.5 * beta * om).sinh());
    let r_free = 1.0 / (2.0 * (0.5 * beta * w).sinh());
    r_coupled / r_free
}

/// Path route: ln of the x-sector trace from the discretized generalized
/// Feynman-Kac weight. The field-induced quadratic form is used in its
/// integrated-by-parts form
/// `W = kappa [ int xi^2 ds - (beta eps)^2 int int xi(s) C(s-s') xi(s') ]`,
/// which involves only path values (no stochastic increments) and converges
/// at second order in the time step.
fn coupled_ln_trace_path(
    mode: &ModeSpec,
    omega_trap: f64,
    beta: f64,
    n: usize,
    coupled: bool,
) -> Result<f64, FkError> {
    let m = 1.0;
    let hbar = 1.0;
    let lam = hbar * (beta / m).sqrt();
    let h = 1.0 / n as f64;
    let beps = beta * mode.eps;
    let nf = n as f64;

    let dim = n; // n-1 inner bridge nodes + the base point r
    let mut g = DMatrix::zeros(dim, dim);

    // bridge precision n * tridiag(-1, 2, -1)
    for i in 0..n - 1 {
        g[(i, i)] = 2.0 * nf;
        if i + 1 < n - 1 {
            g[(i, i + 1)] = -nf;
            g[(i + 1, i)] = -nf;
        }
    }

    // trap: beta m w^2 * trapezoid of (r + lam xi)^2
    let bmw2 = beta * m * omega_trap * omega_trap;
    for i in 0..n - 1 {
        g[(i, i)] += bmw2 * lam * lam * h;
        g[(i, n - 1)] += bmw2 * lam * h;
        g[(n - 1, i)] += bmw2 * lam * h;
    }
    g[(n - 1, n - 1)] += bmw2;

    // field-induced quadratic form, integrated-by-parts kernel
    if coupled {
        let kappa = 2.0 * lam * lam * mode.eps * mode.f_const * mode.f_const
            / (hbar * hbar * mode.light_speed * mode.light_speed);
        let pref = beta * mode.charge * mode.charge * kappa;
        for i in 0..n - 1 {
            let si = (i as f64 + 1.0) * h;
            g[(i, i)] += pref * h;
            for j in 0..n - 1 {
                let sj = (j as f64 + 1.0) * h;
                let c = oscillator_covariance(beps, (si - sj).abs()).unwrap();
                g[(i, j)] -= pref * beps * beps * h * h * c;
            }
        }
    }

    let chol = g
        .cholesky()
        .ok_or_else(|| FkError::Discretization("trace quadratic form not SPD".into()))?;
    let mut logdet_g = 0.0;
    for i in 0..dim {
        logdet_g += chol.l()[(i, i)].ln();
    }
    logdet_g *= 2.0;
    let logdet_p = nf * nf.ln();
    Ok(-lam.ln() - 0.5 * (logdet_g - logdet_p))
}

#[derive(Debug, Clone)]
pub struct CoupledOscReport {
    /// (n_steps, relative deviation of the path route from the exact one).
    pub deviations: Vec<(usize, f64)>,
    /// Richardson slopes log2(dev(n)/dev(2n)); ~2 for second order.
    pub slopes: Vec<f64>,
    pub exact_ratio: f64,
}

/// Compare the discretized generalized Feynman-Kac evaluation against the
/// exact normal-mode result over a ladder of grid sizes.
pub fn coupled_oscillator_check(
    mode: &ModeSpec,
    omega_trap: f64,
    beta: f64,
    n_steps: &[usize],
) -> Result<CoupledOscReport, FkError> {
    let exact = coupled_ratio_exact(mode, omega_trap, beta);
    let mut deviations = Vec::new();
    for &n in n_steps {
        let ln_c = coupled_ln_trace_path(mode, omega_trap, beta, n, true)?;
        let ln_f = coupled_ln_trace_path(mode, omega_trap, beta, n, false)?;
        let ratio = (ln_c - ln_f).exp();
        deviations.push((n, (ratio / exact - 1.0).abs()));
    }
    let slopes: Vec<f64> = deviations
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).log2() / ((w[1].0 as f64 / w[0].0 as f64).log2()))
        .collect();
    if deviations.windows(2).any(|w| w[1].1 >= w[0].1) {
        return Err(FkError::Discretization(format!(
            "deviations not decreasing under refinement: {deviations:?}"
        )));
    }
    Ok(CoupledOscReport {
        deviations,
        slopes,
        exact_ratio: exact,
    })
}

/// Exact imaginary-time correlation of the thermal harmonic oscillator in
/// reduced time: `<x(s) x(t)> = cosh(beta w (1/2 - |s-t|)) / (2 w sinh(beta w / 2))`.
pub fn harmonic_correlation_exact(omega: f64, beta: f64, s: f64, t: f64) -> f64 {
    let u = (s - t).abs();
    (beta * omega * (0.5 - u)).cosh() / (2.0 * omega * (0.5 * beta * omega).sinh())
}

/// Importance-sampled harmonic path ensemble: bridge proposal plus a normal
/// proposal on the base point, weighted by the Feynman-Kac factor.
struct HarmonicSampler {
    omega: f64,
    beta: f64,
    n_steps: usize,
    lam: f64,
    sigma_p: f64,
}

impl HarmonicSampler {
    fn new(omega: f64, beta: f64, n_steps: usize) -> Self {
        HarmonicSampler {
            omega,
            beta,
            n_steps,
            lam: beta.sqrt(),
            sigma_p: (harmonic_correlation_exact(omega, beta, 0.0, 0.0)).sqrt(),
        }
    }

    /// Returns (path values x(s_i) on the grid, ln weight).
    fn draw(&self, rng: &mut ChaCha8Rng) -> (Vec<f64>, f64) {
        let n = self.n_steps;
        let h = 1.0 / n as f64;
        let mut xi = vec![0.0; n + 1];
        let mut v = 0.0;
        for i in 0..n - 1 {
            let s = i as f64 * h;
            let rest = 1.0 - s;
            let mean = v * (rest - h) / rest;
            let var = h * (rest - h) / rest;
            let z: f64 = rng.sample(StandardNormal);
            v = mean + var.sqrt() * z;
            xi[i + 1] = v;
        }
        let z: f64 = rng.sample(StandardNormal);
        let r = self.sigma_p * z;
        let mut x = vec![0.0; n + 1];
        let mut quad = 0.0;
        for i in 0..=n {
            x[i] = r + self.lam * xi[i];
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            quad += w * x[i] * x[i] * h;
        }
        // target: exp(-beta w^2/2 * int x^2); proposal density for r removed
        let ln_w = -0.5 * self.beta * self.omega * self.omega * quad
            + 0.5 * r * r / (self.sigma_p * self.sigma_p);
        (x, ln_w)
    }
}

/// Self-normalized importance-sampling ratio estimate with a delta-method
/// standard error: E[num]/E[den] from per-path (num, den).
fn ratio_estimate(num: &[f64], den: &[f64]) -> (f64, f64) {
    let n = num.len() as f64;
    let mean_num = pairwise_sum(num) / n;
    let mean_den = pairwise_sum(den) / n;
    let r = mean_num / mean_den;
    let g: Vec<f64> = num
        .iter()
        .zip(den)
        .map(|(&a, &b)| (a - r * b) / mean_den)
        .collect();
    let (_, se) = mean_and_stderr(&g);
    (r, se)
}

#[derive(Debug, Clone, Copy)]
pub struct CorrelationRow {
    pub s: f64,
    pub t: f64,
    pub mc: f64,
    pub se: f64,
    pub exact: f64,
    pub deviation_sigmas: f64,
}

#[derive(Debug, Clone)]
pub struct CorrelationReport {
    pub rows: Vec<CorrelationRow>,
    pub max_deviation_sigmas: f64,
}

/// Monte Carlo path correlation of the harmonic surrogate against the exact
/// operator formula on a set of (s, t) grid pairs.
pub fn correlation_check_harmonic(
    omega: f64,
    beta: f64,
    n_paths: usize,
    n_steps: usize,
    seed: u64,
    pairs: &[(f64, f64)],
    mode: Parallelism,
) -> CorrelationReport {
    let sampler = HarmonicSampler::new(omega, beta, n_steps);
    let idx: Vec<(usize, usize)> = pairs
        .iter()
        .map(|&(s, t)| {
            (
                (s * n_steps as f64).round() as usize,
                (t * n_steps as f64).round() as usize,
            )
        })
        .collect();
    let per_path = map_indexed(n_paths, mode, |p| {
        let mut rng = path_rng(seed, p as u64);
        let (x, ln_w) = sampler.draw(&mut rng);
        let w = ln_w.exp();
        let vals: Vec<f64> = idx.iter().map(|&(i, j)| w * x[i] * x[j]).collect();
        (vals, w)
    });
    let den: Vec<f64> = per_path.iter().map(|v| v.1).collect();
    let mut rows = Vec::new();
    for (col, &(s, t)) in pairs.iter().enumerate() {
        let num: Vec<f64> = per_path.iter().map(|v| v.0[col]).collect();
        let (mc, se) = ratio_estimate(&num, &den);
        let si = idx[col].0 as f64 / n_steps as f64;
        let ti = idx[col].1 as f64 / n_steps as f64;
        let exact = harmonic_correlation_exact(omega, beta, si, ti);
        rows.push(CorrelationRow {
            s,
            t,
            mc,
            se,
            exact,
            deviation_sigmas: (mc - exact).abs() / se,
        });
    }
    let max = rows
        .iter()
        .map(|r| r.deviation_sigmas)
        .fold(0.0_f64, f64::max);
    CorrelationReport {
        rows,
        max_deviation_sigmas: max,
    }
}

/// Monte Carlo estimate of the wall-constraint weight fraction
/// `int D_at theta(x + alpha_x(.))` for the harmonic surrogate atom:
/// the share of atomic weight whose whole path stays on the field side.
pub fn geometric_constraint_estimate(
    x: f64,
    omega: f64,
    beta: f64,
    n_paths: usize,
    n_steps: usize,
    seed: u64,
    mode: Parallelism,
) -> (f64, f64) {
    let sampler = HarmonicSampler::new(omega, beta, n_steps);
    let per_path = map_indexed(n_paths, mode, |p| {
        let mut rng = path_rng(seed, p as u64);
        let (path, ln_w) = sampler.draw(&mut rng);
        let w = ln_w.exp();
        let inside = path.iter().all(|&ax| x + ax > 0.0);
        (if inside { w } else { 0.0 }, w)
    });
    let num: Vec<f64> = per_path.iter().map(|v| v.0).collect();
    let den: Vec<f64> = per_path.iter().map(|v| v.1).collect();
    ratio_estimate(&num, &den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bridges_pin_endpoints_exactly() {
        let ens = BridgeEnsemble::sample(200, 16, 11, Parallelism::Auto);
        for p in 0..200 {
            for c in 0..3 {
                assert_eq!(ens.value(p, 0, c), 0.0);
                assert_eq!(ens.value(p, 16, c), 0.0);
            }
        }
    }

    #[test]
    fn bridge_sampling_reproducible_and_thread_independent() {
        let a = BridgeEnsemble::sample(64, 8, 5, Parallelism::Auto);
        let b = BridgeEnsemble::sample(64, 8, 5, Parallelism::Sequential);
        assert_eq!(a.paths, b.paths);
        let c = BridgeEnsemble::sample(64, 8, 6, Parallelism::Auto);
        assert_ne!(a.paths, c.paths);
    }

    #[test]
    fn bridge_covariance_within_three_sigma() {
        let n_steps = 16;
        let ens = BridgeEnsemble::sample(20_000, n_steps, 42, Parallelism::Auto);
        for (ia, ib, expect) in [(8, 8, 0.25), (4, 12, 0.0625), (2, 10, 0.046875)] {
            let (mc, se) = ens.empirical_covariance(ia, ib);
            assert!(
                (mc - expect).abs() < 3.0 * se,
                "cov({ia},{ib}) = {mc} +- {se}, want {expect}"
            );
        }
    }

    #[test]
    fn identity_trivial_for_zero_test_function() {
        let r = gaussian_identity_check(&|_| 0.0, 2.0, 16, 100, 3, Parallelism::Auto).unwrap();
        assert_eq!(r.mc_re, 1.0);
        assert_eq!(r.exact, 1.0);
    }

    #[test]
    fn identity_constant_function_matches_normalization() {
        // int int cov = 1/(beta eps)^2 by the propagator normalization
        let r =
            gaussian_identity_check(&|_| 1.0, 2.0, 64, 20_000, 42, Parallelism::Auto).unwrap();
        assert_relative_eq!(r.exact, (-0.5 * 0.25_f64).exp(), max_relative = 1e-4);
        assert!(r.deviation_sigmas < 3.0, "{} sigma", r.deviation_sigmas);
        assert!(r.mc_im.abs() < 3.0 * r.se_im);
    }

    #[test]
    fn coupled_oscillator_converges_second_order() {
        let mode = ModeSpec {
            eps: 1.3,
            f_const: 0.6 / std::f64::consts::SQRT_2,
            charge: 1.0,
            light_speed: 1.0,
        };
        let rep = coupled_oscillator_check(&mode, 1.0, 2.0, &[64, 128, 256]).unwrap();
        let last = rep.deviations.last().unwrap().1;
        assert!(last < 1e-3, "dev {last}");
        for s in &rep.slopes {
            assert!((s - 2.0).abs() < 0.3, "slope {s}");
        }
        // decoupled: both routes give the free value, deviation identically 0
        let free = ModeSpec {
            f_const: 0.0,
            ..mode
        };
        let ln_c = coupled_ln_trace_path(&free, 1.0, 2.0, 64, true).unwrap();
        let ln_f = coupled_ln_trace_path(&free, 1.0, 2.0, 64, false).unwrap();
        assert_eq!(ln_c, ln_f);
        assert_relative_eq!(coupled_ratio_exact(&free, 1.0, 2.0), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn path_trace_matches_free_trap_partition_function() {
        // sanity of the discrete determinant: no coupling, exact Z known
        let mode = ModeSpec {
            eps: 1.3,
            f_const: 0.0,
            charge: 1.0,
            light_speed: 1.0,
        };
        let ln = coupled_ln_trace_path(&mode, 1.0, 2.0, 512, false).unwrap();
        let exact = 1.0 / (2.0 * (1.0_f64).sinh());
        assert_relative_eq!(ln.exp(), exact, max_relative = 1e-5);
    }

    #[test]
    fn harmonic_correlation_mc_matches_exact() {
        let rep = correlation_check_harmonic(
            1.0,
            2.0,
            20_000,
            32,
            42,
            &[(0.25, 0.25), (0.25, 0.75), (0.0, 0.5)],
            Parallelism::Auto,
        );
        assert!(
            rep.max_deviation_sigmas < 3.0,
            "max dev {} sigma",
            rep.max_deviation_sigmas
        );
        // stationarity: same |s-t| gives the same exact value
        assert_relative_eq!(
            harmonic_correlation_exact(1.0, 2.0, 0.1, 0.3),
            harmonic_correlation_exact(1.0, 2.0, 0.5, 0.7),
            max_relative = 1e-14
        );
    }

    #[test]
    fn geometric_constraint_monotone_and_bounded() {
        let mut prev_deficit = f64::INFINITY;
        let mut deficits = Vec::new();
        for x in [2.0, 4.0, 8.0] {
            let (frac, _se) = geometric_constraint_estimate(
                x,
                1.0,
                6.0,
                20_000,
                32,
                42,
                Parallelism::Auto,
            );
            assert!(frac > 0.0 && frac <= 1.0);
            let deficit = 1.0 - frac;
            assert!(deficit < prev_deficit);
            prev_deficit = deficit;
            deficits.push(deficit);
        }
        // log-linear decay: slope of ln(deficit) vs x is negative
        assert!(deficits[2].ln() < deficits[0].ln());
        // x = 0 with the symmetric weight keeps strictly less than 1
        let (frac0, _) =
            geometric_constraint_estimate(0.0, 1.0, 6.0, 4_000, 16, 42, Parallelism::Auto);
        assert!(frac0 < 1.0);
    }
}
