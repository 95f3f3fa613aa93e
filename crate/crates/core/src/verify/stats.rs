//! Goodness-of-fit statistics and moment helpers.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Outcome of a hypothesis test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestOutcome {
    pub statistic: f64,
    pub pvalue: f64,
    pub samples: usize,
}

/// Kolmogorov survival function `Q(x) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2)`.
pub fn kolmogorov_q(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 1.18 {
        // Theta-function form, accurate where the alternating series is slow.
        let y = (-std::f64::consts::PI.powi(2) / (8.0 * x * x)).exp();
        let sum: f64 = (0..6).map(|j| y.powi((2 * j + 1) * (2 * j + 1))).sum();
        return (1.0 - (2.0 * std::f64::consts::PI).sqrt() / x * sum).clamp(0.0, 1.0);
    }
    let mut total = 0.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * x * x).exp();
        total += if j % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * total).clamp(0.0, 1.0)
}

/// Asymptotic p-value with the small-sample correction
/// `lambda = (sqrt(N) + 0.12 + 0.11 / sqrt(N)) D`.
fn ks_pvalue(d: f64, effective_n: f64) -> f64 {
    let root = effective_n.sqrt();
    kolmogorov_q((root + 0.12 + 0.11 / root) * d)
}

fn sorted(samples: &[f64]) -> Vec<f64> {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// One-sample Kolmogorov-Smirnov test against `cdf`.
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64) -> TestOutcome {
    let v = sorted(samples);
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in v.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    TestOutcome {
        statistic: d,
        pvalue: ks_pvalue(d, n),
        samples: v.len(),
    }
}

/// Two-sample Kolmogorov-Smirnov test.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> TestOutcome {
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    TestOutcome {
        statistic: d,
        pvalue: ks_pvalue(d, na * nb / (na + nb)),
        samples: a.len() + b.len(),
    }
}

/// Pearson chi-square test of observed counts against expected counts.
/// Adjacent bins are pooled until each expected count is at least 5.
pub fn chi_square_test(observed: &[f64], expected: &[f64]) -> TestOutcome {
    assert_eq!(observed.len(), expected.len(), "bin counts differ");
    let mut pooled = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&oi, &ei) in observed.iter().zip(expected) {
        o += oi;
        e += ei;
        if e >= 5.0 {
            pooled.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => pooled.push((o, e)),
        }
    }
    let statistic: f64 = pooled.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = pooled.len().saturating_sub(1).max(1) as f64;
    let pvalue = ChiSquared::new(dof).map(|d| d.sf(statistic)).unwrap_or(f64::NAN);
    TestOutcome {
        statistic,
        pvalue,
        samples: observed.iter().sum::<f64>() as usize,
    }
}

/// Chi-square homogeneity of counts against expected counts that carry
/// their own Monte Carlo variance; each term is `(o - e)^2 / (e + var e)`.
pub fn chi_square_noisy(observed: &[f64], expected: &[f64], expected_var: &[f64]) -> TestOutcome {
    assert!(observed.len() == expected.len() && expected.len() == expected_var.len(), "bin counts differ");
    let statistic: f64 = (0..observed.len())
        .map(|i| (observed[i] - expected[i]).powi(2) / (expected[i] + expected_var[i]))
        .sum();
    let dof = observed.len().saturating_sub(1).max(1) as f64;
    let pvalue = ChiSquared::new(dof).map(|d| d.sf(statistic)).unwrap_or(f64::NAN);
    TestOutcome {
        statistic,
        pvalue,
        samples: observed.iter().sum::<f64>() as usize,
    }
}

/// Sample mean and its standard error.
pub fn mean_stderr(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Pearson correlation coefficient.
pub fn correlation(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::RandomStream;
    use statrs::distribution::{Gamma, Normal};

    #[test]
    fn kolmogorov_branches_agree() {
        for x in [1.0, 1.1, 1.17, 1.19, 1.3] {
            let series: f64 = 2.0
                * (1..200)
                    .map(|j| {
                        let t = (-2.0 * (j * j) as f64 * x * x).exp();
                        if j % 2 == 1 { t } else { -t }
                    })
                    .sum::<f64>();
            assert!((kolmogorov_q(x) - series).abs() < 1e-12, "{x}");
        }
        assert!((kolmogorov_q(1.3581) - 0.05).abs() < 1e-4);
    }

    #[test]
    fn uniform_pvalues_are_uniform() {
        let mut rng = RandomStream::new(1);
        let pvalues: Vec<f64> = (0..300)
            .map(|_| {
                let u: Vec<f64> = (0..200).map(|_| rng.uniform()).collect();
                ks_test(&u, |x| x.clamp(0.0, 1.0)).pvalue
            })
            .collect();
        assert!(ks_test(&pvalues, |x| x.clamp(0.0, 1.0)).pvalue > 0.001);
    }

    #[test]
    fn gamma_positive_and_normal_negative_control() {
        let mut rng = RandomStream::new(2);
        let g: Vec<f64> = (0..5000).map(|_| rng.gamma(2.0, 1.0).unwrap()).collect();
        let gamma = Gamma::new(2.0, 1.0).unwrap();
        assert!(ks_test(&g, |x| gamma.cdf(x)).pvalue > 0.01);
        let normal = Normal::new(2.0, 2f64.sqrt()).unwrap();
        assert!(ks_test(&g, |x| normal.cdf(x)).pvalue < 1e-6);
    }

    #[test]
    fn two_sample_detects_shift() {
        let mut rng = RandomStream::new(3);
        let a: Vec<f64> = (0..4000).map(|_| rng.normal()).collect();
        let b: Vec<f64> = (0..4000).map(|_| rng.normal()).collect();
        let c: Vec<f64> = (0..4000).map(|_| rng.normal() + 0.2).collect();
        assert!(ks_two_sample(&a, &b).pvalue > 0.01);
        assert!(ks_two_sample(&a, &c).pvalue < 1e-6);
    }

    #[test]
    fn chi_square_examples() {
        let fair = chi_square_test(&[100.0, 98.0, 103.0, 99.0], &[100.0; 4]);
        assert!(fair.pvalue > 0.9);
        let bad = chi_square_test(&[150.0, 50.0, 100.0, 100.0], &[100.0; 4]);
        assert!(bad.pvalue < 1e-6);
    }
}
