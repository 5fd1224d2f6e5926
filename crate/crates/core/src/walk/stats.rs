//! Goodness-of-fit helpers used to validate the simulators against exact
//! distributions.

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &[u64], b: &[u64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic 1% critical value of the two-sample KS statistic. Conservative
/// for discrete data.
pub fn ks_critical_1pct(na: usize, nb: usize) -> f64 {
    let (na, nb) = (na as f64, nb as f64);
    1.628 * ((na + nb) / (na * nb)).sqrt()
}

/// Pearson statistic for observed counts against expected probabilities;
/// the last bucket should hold the remaining tail mass.
pub fn chi_square(observed: &[u64], probs: &[f64]) -> f64 {
    let total: u64 = observed.iter().sum();
    observed
        .iter()
        .zip(probs)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum()
}

/// Upper 1% quantile of the chi-square distribution with `dof` degrees of
/// freedom, by the Wilson–Hilferty cube approximation.
pub fn chi_square_critical_1pct(dof: usize) -> f64 {
    const Z_99: f64 = 2.326_347_874_040_841;
    let k = dof as f64;
    let h = 2.0 / (9.0 * k);
    k * (1.0 - h + Z_99 * h.sqrt()).powi(3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_square_quantiles_match_tables() {
        // tabulated 0.99 quantiles
        for (dof, q) in [(5, 15.086), (10, 23.209), (19, 36.191), (30, 50.892)] {
            assert!((chi_square_critical_1pct(dof) - q).abs() / q < 5e-3, "dof {dof}");
        }
    }

    #[test]
    fn ks_identical_and_disjoint() {
        assert_eq!(ks_two_sample(&[1, 2, 3], &[3, 2, 1]), 0.0);
        assert_eq!(ks_two_sample(&[1, 1], &[5, 6]), 1.0);
    }
}
