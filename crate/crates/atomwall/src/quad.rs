//! Quadrature building blocks: Gauss-Legendre and Gauss-Laguerre rules, the
//! angular kernel of the wall Fourier inversion, and a panel integrator used
//! for non-oscillatory one-dimensional integrals.

use std::sync::OnceLock;

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-type initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0_f64, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss-Laguerre nodes and weights for weight e^{-x} on [0, inf).
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n {
        let mut x = if i == 0 {
            3.0 / (1.0 + 2.4 * nf)
        } else if i == 1 {
            nodes[0] + 15.0 / (1.0 + 2.5 * nf)
        } else {
            let k = i as f64 - 1.0;
            nodes[i - 1] + (1.0 + 2.55 * k) / (1.9 * k) * (nodes[i - 1] - nodes[i - 2])
        };
        let mut dp = 0.0;
        let mut p1 = 0.0;
        for _ in 0..200 {
            let (mut l0, mut l1) = (1.0_f64, 1.0 - x);
            for j in 2..=n {
                let jf = j as f64;
                let l2 = ((2.0 * jf - 1.0 - x) * l1 - (jf - 1.0) * l0) / jf;
                l0 = l1;
                l1 = l2;
            }
            p1 = l1;
            dp = nf * (l1 - l0) / x;
            let dx = l1 / dp;
            x -= dx;
            if dx.abs() < 1e-14 * x.max(1.0) {
                break;
            }
        }
        let _ = p1;
        nodes[i] = x;
        weights[i] = 1.0 / (x * dp * dp);
    }
    (nodes, weights)
}

pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn cached(cell: &OnceLock<Rule>, n: usize) -> &Rule {
    cell.get_or_init(|| {
        let (nodes, weights) = gauss_legendre(n);
        Rule { nodes, weights }
    })
}

static GL8: OnceLock<Rule> = OnceLock::new();
static GL16: OnceLock<Rule> = OnceLock::new();
static GL32: OnceLock<Rule> = OnceLock::new();

pub fn gl8() -> &'static Rule {
    cached(&GL8, 8)
}
pub fn gl16() -> &'static Rule {
    cached(&GL16, 16)
}
pub fn gl32() -> &'static Rule {
    cached(&GL32, 32)
}

static LAG40: OnceLock<Rule> = OnceLock::new();
static LAG32: OnceLock<Rule> = OnceLock::new();

pub fn laguerre40() -> &'static Rule {
    LAG40.get_or_init(|| {
        let (nodes, weights) = gauss_laguerre(40);
        Rule { nodes, weights }
    })
}
pub fn laguerre32() -> &'static Rule {
    LAG32.get_or_init(|| {
        let (nodes, weights) = gauss_laguerre(32);
        Rule { nodes, weights }
    })
}

/// Integrate f over [a, b] with a fixed Gauss-Legendre rule.
pub fn integrate_gl(rule: &Rule, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        acc += w * f(mid + half * x);
    }
    half * acc
}

/// Panel-adaptive integration on [a, b]: bisect until the GL16/GL32 difference
/// on a panel is below the tolerance. Meant for smooth or mildly kinked
/// integrands (oracles, normalization checks), not for oscillatory ones.
pub fn integrate_adaptive(a: f64, b: f64, rel_tol: f64, f: &mut impl FnMut(f64) -> f64) -> f64 {
    let mut stack = vec![(a, b, 0u32)];
    let mut total = 0.0;
    let scale_guess = integrate_gl(gl16(), a, b, &mut *f).abs().max(1e-300);
    while let Some((lo, hi, depth)) = stack.pop() {
        let coarse = integrate_gl(gl16(), lo, hi, &mut *f);
        let fine = integrate_gl(gl32(), lo, hi, &mut *f);
        if (fine - coarse).abs() <= rel_tol * scale_guess.max(fine.abs()) || depth >= 40 {
            total += fine;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    total
}

/// Angular kernel of the wall inversion:
/// `W(c) = int_{-1}^{1} mu^2 e^{-i c mu} d(mu) = 2[(c^2-2) sin c + 2c cos c]/c^3`.
/// The series branch keeps full precision through the cancellation near c = 0.
pub fn w_kernel(c: f64) -> f64 {
    let ca = c.abs();
    if ca < 1.0 {
        let c2 = c * c;
        let mut term = 1.0;
        let mut total = 1.0 / 3.0;
        let mut m = 1.0;
        loop {
            term *= -c2 / ((2.0 * m - 1.0) * (2.0 * m));
            let add = term / (2.0 * m + 3.0);
            total += add;
            if add.abs() < 1e-18 {
                break;
            }
            m += 1.0;
        }
        2.0 * total
    } else {
        2.0 * ((c * c - 2.0) * c.sin() + 2.0 * c * c.cos()) / (c * c * c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let r = gl16();
        // degree 31 is exact for GL16
        let v = integrate_gl(r, 0.0, 1.0, |x| 31.0 * x.powi(30));
        assert_relative_eq!(v, 1.0, max_relative = 1e-13);
    }

    #[test]
    fn laguerre_moments_are_factorials() {
        let r = laguerre40();
        for m in 0..10u32 {
            let mut acc = 0.0;
            for (&x, &w) in r.nodes.iter().zip(&r.weights) {
                acc += w * x.powi(m as i32);
            }
            let fact: f64 = (1..=m).map(|k| k as f64).product();
            assert_relative_eq!(acc, fact, max_relative = 1e-12);
        }
    }

    #[test]
    fn laguerre_handles_rational_decay() {
        // int_0^inf e^{-u}/(1+u) du = e * E1(1) = 0.596347362323194...
        let r = laguerre40();
        let mut acc = 0.0;
        for (&x, &w) in r.nodes.iter().zip(&r.weights) {
            acc += w / (1.0 + x);
        }
        assert_relative_eq!(acc, 0.596_347_362_323_194, max_relative = 1e-6);
    }

    #[test]
    fn w_kernel_limits_and_continuity() {
        assert_relative_eq!(w_kernel(0.0), 2.0 / 3.0, max_relative = 1e-15);
        // series and closed form agree at the branch switch
        let direct = 2.0 * ((0.999f64.powi(2) - 2.0) * 0.999f64.sin() + 2.0 * 0.999 * 0.999f64.cos())
            / 0.999f64.powi(3);
        assert_relative_eq!(w_kernel(0.999), direct, max_relative = 1e-11);
        // spot value against the defining integral, via adaptive quadrature
        let c = 7.3;
        let direct = integrate_adaptive(-1.0, 1.0, 1e-12, &mut |mu: f64| {
            mu * mu * (c * mu).cos()
        });
        assert_relative_eq!(w_kernel(c), direct, max_relative = 1e-10);
    }

    #[test]
    fn adaptive_handles_kinked_integrand() {
        let v = integrate_adaptive(0.0, 1.0, 1e-12, &mut |x: f64| (x - 0.3).abs());
        assert_relative_eq!(v, 0.3f64.powi(2) / 2.0 + 0.7f64.powi(2) / 2.0, max_relative = 1e-10);
    }
}
