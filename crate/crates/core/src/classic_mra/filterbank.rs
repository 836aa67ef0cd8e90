use serde::{Deserialize, Serialize};

use crate::circle_filters::LaurentPoly;
use crate::code_space::C64;
use crate::error::{input, Result};

/// Subbands and reconstruction from one pass through the filter bank.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Roundtrip {
    pub subbands: Vec<Vec<C64>>,
    pub reconstruction: Vec<C64>,
    /// `max_t |x̂[t] − x[t]|`.
    pub pr_error: f64,
    /// `|Σ_j ‖y_j‖² − ‖x‖²|`.
    pub energy_error: f64,
}

/// Analysis filters `conj(m_j(z))` on the circle for a synthesis bank `m_j`.
pub fn analysis_taps(bank: &[LaurentPoly]) -> Vec<LaurentPoly> {
    bank.iter().map(LaurentPoly::conj_reflect).collect()
}

fn wrap(i: i64, len: usize) -> usize {
    i.rem_euclid(len as i64) as usize
}

/// Periodic analysis `y_j[n] = Σ_k h_j[k] x[Nn − k]` followed by synthesis
/// `x̂[t] = Σ_j Σ_n g_j[t − Nn] y_j[n]`.
pub fn filterbank_roundtrip(
    signal: &[C64],
    analysis: &[LaurentPoly],
    synthesis: &[LaurentPoly],
    n: usize,
) -> Result<Roundtrip> {
    if n < 2 {
        return input("N must be at least 2");
    }
    if signal.is_empty() || !signal.len().is_multiple_of(n) {
        return input(format!(
            "signal length {} is not a positive multiple of {n}",
            signal.len()
        ));
    }
    if analysis.len() != n || synthesis.len() != n {
        return input(format!("expected {n} analysis and {n} synthesis filters"));
    }
    let len = signal.len();
    let sub = len / n;

    let subbands: Vec<Vec<C64>> = analysis
        .iter()
        .map(|h| {
            (0..sub)
                .map(|m| {
                    h.terms()
                        .map(|(k, c)| c * signal[wrap((n * m) as i64 - k, len)])
                        .sum()
                })
                .collect()
        })
        .collect();

    let mut reconstruction = vec![C64::new(0.0, 0.0); len];
    for (g, y) in synthesis.iter().zip(&subbands) {
        for (m, &ym) in y.iter().enumerate() {
            for (k, c) in g.terms() {
                reconstruction[wrap((n * m) as i64 + k, len)] += c * ym;
            }
        }
    }

    let pr_error = reconstruction
        .iter()
        .zip(signal)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let energy_in: f64 = signal.iter().map(|v| v.norm_sqr()).sum();
    let energy_out: f64 = subbands.iter().flatten().map(|v| v.norm_sqr()).sum();
    Ok(Roundtrip {
        subbands,
        reconstruction,
        pr_error,
        energy_error: (energy_out - energy_in).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn haar() -> Vec<LaurentPoly> {
        let r = SQRT_2.recip();
        vec![
            LaurentPoly::from_real(0, &[r, r]),
            LaurentPoly::from_real(0, &[r, -r]),
        ]
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn haar_hand_example() {
        let bank = haar();
        let x: Vec<C64> = [1.0, 2.0, 3.0, 4.0].iter().map(|&v| c(v)).collect();
        let rt = filterbank_roundtrip(&x, &analysis_taps(&bank), &bank, 2).unwrap();
        let want_low = [3.0 / SQRT_2, 7.0 / SQRT_2];
        let want_high = [-1.0 / SQRT_2, -1.0 / SQRT_2];
        for k in 0..2 {
            assert!((rt.subbands[0][k] - c(want_low[k])).norm() < 1e-15);
            assert!((rt.subbands[1][k] - c(want_high[k])).norm() < 1e-15);
        }
        assert!(rt.pr_error < 1e-15);
    }

    #[test]
    fn delta_and_length_checks() {
        let bank = haar();
        let mut x = vec![c(0.0); 8];
        x[3] = c(1.0);
        let rt = filterbank_roundtrip(&x, &analysis_taps(&bank), &bank, 2).unwrap();
        assert!(rt.pr_error < 1e-15);
        assert!(filterbank_roundtrip(&x[..7], &analysis_taps(&bank), &bank, 2).is_err());
    }

    #[test]
    fn three_band_roots_bank_reconstructs() {
        // m_n(z) = Σ_l ε^{nl} z^l / √3 is an averaged three-band bank.
        let eps = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let bank: Vec<LaurentPoly> = (0..3)
            .map(|n| LaurentPoly::new(0, (0..3).map(|l| eps.powi(n * l) / 3f64.sqrt()).collect()))
            .collect();
        let x: Vec<C64> = (0..12)
            .map(|k| C64::new((k as f64).sin(), (k as f64 * 0.3).cos()))
            .collect();
        let rt = filterbank_roundtrip(&x, &analysis_taps(&bank), &bank, 3).unwrap();
        assert!(rt.pr_error < 1e-13);
        assert!(rt.energy_error < 1e-12);
    }
}
