//! Closed-form hydrogen dipole data: bound-bound radial integrals from the
//! analytic wavefunctions, the 1s -> np line strengths, and the 1s -> (eps)p
//! continuum strength density.
//!
//! Bound radial functions are polynomials times a single exponential, so all
//! radial integrals reduce to exact factorial sums; no numerical quadrature
//! enters the production path.

/// Coefficients c_m of R_nl(r) = sum_m c_m r^m e^{-r/n} (normalized).
pub fn radial_coeffs(n: u32, l: u32) -> Vec<f64> {
    assert!(l < n, "need l < n");
    let nf = f64::from(n);
    let k = (n - l - 1) as usize; // Laguerre degree
    let a = (2 * l + 1) as usize;
    // norm = sqrt((2/n)^3 (n-l-1)! / (2n ((n+l)!)))
    let norm = ((2.0 / nf).powi(3) * fact(k) / (2.0 * nf * fact((n + l) as usize))).sqrt();
    // L_k^a(x) = sum_j (-1)^j C(k+a, k-j) x^j / j!
    let mut coeffs = vec![0.0; k + l as usize + 1];
    for j in 0..=k {
        let c = neg_one(j) * binom(k + a, k - j) / fact(j);
        // term: norm * (2/n)^l * c * (2/n)^j * r^{l+j}
        coeffs[l as usize + j] = norm * (2.0 / nf).powi(l as i32 + j as i32) * c;
    }
    coeffs
}

fn fact(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn binom(n: usize, k: usize) -> f64 {
    fact(n) / (fact(k) * fact(n - k))
}

fn neg_one(j: usize) -> f64 {
    if j % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Exact radial integral int_0^inf R_nl(r) r R_{n'l'}(r) r^2 dr.
pub fn radial_dipole_integral(n: u32, l: u32, np: u32, lp: u32) -> f64 {
    let ca = radial_coeffs(n, l);
    let cb = radial_coeffs(np, lp);
    let inv = 1.0 / f64::from(n) + 1.0 / f64::from(np);
    let mut total = 0.0;
    for (m, &a) in ca.iter().enumerate() {
        for (mp, &b) in cb.iter().enumerate() {
            let p = m + mp + 3;
            total += a * b * fact(p) / inv.powi(p as i32 + 1);
        }
    }
    total
}

/// Exact norm integral int R_nl^2 r^2 dr (should be 1).
pub fn radial_norm(n: u32, l: u32) -> f64 {
    let c = radial_coeffs(n, l);
    let inv = 2.0 / f64::from(n);
    let mut total = 0.0;
    for (m, &a) in c.iter().enumerate() {
        for (mp, &b) in c.iter().enumerate() {
            let p = m + mp + 2;
            total += a * b * fact(p) / inv.powi(p as i32 + 1);
        }
    }
    total
}

/// Transition energy E_n - E_1 = (1 - 1/n^2)/2 of the Lyman line, Hartree.
pub fn lyman_delta_e(n: u32) -> f64 {
    0.5 * (1.0 - 1.0 / f64::from(n * n))
}

/// Folded x-strength of the 1s -> np multiplet, |<1s|a_x|np>|^2 summed over
/// the np sublevels: 2^8 n^7 (n-1)^{2n-5} / (3 (n+1)^{2n+5}), in a_B^2.
pub fn lyman_strength(n: u32) -> f64 {
    let nf = f64::from(n);
    let ln = 8.0 * std::f64::consts::LN_2 + 7.0 * nf.ln()
        + (2.0 * nf - 5.0) * (nf - 1.0).ln()
        - 3.0_f64.ln()
        - (2.0 * nf + 5.0) * (nf + 1.0).ln();
    ln.exp()
}

/// Photoionization oscillator-strength density df/d(omega) of H(1s), per
/// Hartree of photon energy omega = (1 + kappa^2)/2, where kappa is the
/// photoelectron momentum.
pub fn continuum_df_domega(kappa: f64) -> f64 {
    let k2 = kappa * kappa;
    // arctan(kappa)/kappa, stable at small kappa
    let atk = if kappa < 1e-4 {
        1.0 - k2 / 3.0 + k2 * k2 / 5.0
    } else {
        kappa.atan() / kappa
    };
    let emission = if kappa < 0.05 {
        1.0 // 1 - e^{-2 pi / kappa} underflows to 1
    } else {
        -(-2.0 * std::f64::consts::PI / kappa).exp_m1()
    };
    (256.0 / 3.0) * (1.0 + k2).powi(-4) * (-4.0 * atk).exp() / emission
}

/// Strength density per unit photoelectron momentum: dS/d(kappa) in a_B^2 per
/// momentum unit, with S the folded x-strength |<1s|a_x|eps p>|^2.
pub fn continuum_strength_density(kappa: f64) -> f64 {
    // dS/dw = (df/dw)/(2w), dw/dkappa = kappa, 2w = 1 + kappa^2
    continuum_df_domega(kappa) * kappa / (1.0 + kappa * kappa)
}

/// Level-folded x-strength matrix S[n][n'] = sum over sublevel pairs of
/// |<n l m|a_x|n' l' m'>|^2, for bound levels 1..=n_basis. Uses the line
/// strength max(l, l') R^2 with an isotropy factor 1/3 per Cartesian
/// component.
pub fn level_x_strengths(n_basis: u32) -> Vec<Vec<f64>> {
    let nb = n_basis as usize;
    let mut s = vec![vec![0.0; nb + 1]; nb + 1];
    for n in 1..=n_basis {
        for np in 1..=n_basis {
            let mut total = 0.0;
            for l in 0..n {
                for lp in [l.wrapping_sub(1), l + 1] {
                    if lp == u32::MAX || lp >= np {
                        continue;
                    }
                    let r = radial_dipole_integral(n, l, np, lp);
                    total += f64::from(l.max(lp)) * r * r;
                }
            }
            s[n as usize][np as usize] = total / 3.0;
        }
    }
    s
}

/// Bound level energy E_n = -1/(2 n^2), Hartree.
pub fn level_energy(n: u32) -> f64 {
    -0.5 / f64::from(n * n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn radial_functions_are_normalized() {
        for n in 1..=6 {
            for l in 0..n {
                assert_relative_eq!(radial_norm(n, l), 1.0, max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn known_radial_integrals() {
        // <1s|r|2p> = 128 sqrt(6) / 243
        assert_relative_eq!(
            radial_dipole_integral(1, 0, 2, 1),
            128.0 * 6.0_f64.sqrt() / 243.0,
            max_relative = 1e-12
        );
        // <2s|r|2p> = -3 sqrt(3)
        assert_relative_eq!(
            radial_dipole_integral(2, 0, 2, 1),
            -3.0 * 3.0_f64.sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn lyman_strength_matches_radial_integral_route() {
        // fold (1/3) * max(l,l') * R^2 must equal the closed-form strength
        for n in 2..=6 {
            let r = radial_dipole_integral(1, 0, n, 1);
            assert_relative_eq!(lyman_strength(n), r * r / 3.0, max_relative = 1e-11);
        }
        // and the n = 2 value is (128 sqrt(2)/243)^2 = 32768/59049
        assert_relative_eq!(
            lyman_strength(2),
            32768.0 / 59049.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn lyman_strengths_decrease() {
        for n in 2..6 {
            assert!(lyman_strength(n) > lyman_strength(n + 1));
        }
    }

    #[test]
    fn continuum_density_threshold_and_tail() {
        // threshold df/dw -> (2^8/3) e^{-4}
        assert_relative_eq!(
            continuum_df_domega(1e-6),
            256.0 / 3.0 * (-4.0_f64).exp(),
            max_relative = 1e-9
        );
        // large-kappa falloff ~ kappa^-7 in df/dw terms
        let r = continuum_df_domega(100.0) / continuum_df_domega(50.0);
        assert_relative_eq!(r, 2.0_f64.powi(-7), max_relative = 0.1);
    }

    #[test]
    fn level_strength_matrix_is_symmetric_and_matches_lyman_row() {
        let s = level_x_strengths(5);
        for n in 1..=5 {
            for np in 1..=5 {
                assert_relative_eq!(s[n][np], s[np][n], max_relative = 1e-11);
            }
        }
        for n in 2..=5 {
            assert_relative_eq!(s[1][n], lyman_strength(n as u32), max_relative = 1e-11);
        }
        // intra-shell n=2: 2s <-> 2p gives 2 * R^2/3 = 2 * 27/3 = 18
        assert_relative_eq!(s[2][2], 18.0, max_relative = 1e-12);
    }
}
