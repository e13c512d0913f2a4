//! Plot-ready CSV tables. Every float is written with 17 significant
//! digits so the files round-trip and diff byte for byte.

use std::fmt::Write as _;

use qem_core::verify::{chebyshev, log_spaced};
use qem_core::{t_of_s, MetricProfile};
use rayon::prelude::*;

use crate::error::CliResult;

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Interior sample points: Chebyshev on `(0, s*)` when compact; otherwise
/// half Chebyshev on `(0, 10κ₀)` and a log tail to `10⁴κ₀`.
pub fn sample_points(profile: &MetricProfile, n: usize) -> Vec<f64> {
    if profile.is_compact() {
        chebyshev(0.0, profile.s_star(), n)
    } else {
        let top = 10.0 * profile.kappa0();
        let head = n / 2;
        let mut g = chebyshev(0.0, top, head);
        g.extend(log_spaced(top, 1e3 * top, n - head));
        g
    }
}

pub fn profile_header(r: usize) -> String {
    let mut h = String::from("s,t,alpha,f");
    for i in 1..=r {
        let _ = write!(h, ",beta_{i}");
    }
    h.push_str(",phi,u");
    h
}

/// Columns `s, t, alpha, f, beta_1..beta_r, phi, u`.
pub fn profile_csv(profile: &MetricProfile, n: usize) -> CliResult<String> {
    let r = profile.spec().r();
    let rows = sample_points(profile, n)
        .into_par_iter()
        .map(|s| {
            let t = t_of_s(profile, s)?;
            let mut row = vec![s, t, profile.alpha(s), profile.f(s)];
            row.extend((0..r).map(|i| profile.beta(i, s)));
            row.push(profile.phi(s));
            row.push(profile.potential(s));
            Ok(row.iter().map(|&x| num(x)).collect::<Vec<_>>().join(","))
        })
        .collect::<CliResult<Vec<String>>>()?;
    Ok(lines(profile_header(r), rows))
}

pub fn lines(header: String, rows: Vec<String>) -> String {
    let mut out = header;
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300] {
            let s = num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn header_lists_every_factor() {
        assert_eq!(profile_header(3), "s,t,alpha,f,beta_1,beta_2,beta_3,phi,u");
    }
}
