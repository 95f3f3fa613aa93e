//! Scalar special functions of the positive definite cone: the weighted
//! multivariate gamma function, generalized Pochhammer symbols, the highest
//! weight vector `q_kappa`, Stiefel volumes and the two matrix beta
//! functions. Everything gamma-like is returned on the log scale.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, HermitianPD};
use crate::error::{Error, Result};

const LANCZOS_G: f64 = 10.900511;

const LANCZOS_COEFFS: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

/// `ln(2 sqrt(e / pi))`
const LN_TWO_SQRT_E_OVER_PI: f64 = 0.6207822376352452223455184457816472122518527279025978;

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        return ln_gamma(x + 1.0) - x.ln();
    }
    let s = LANCZOS_COEFFS
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_COEFFS[0], |s, (i, &c)| s + c / (x + i as f64 - 1.0));
    s.ln() + LN_TWO_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + LANCZOS_G) / std::f64::consts::E).ln()
}

/// Real weight vector `kappa = (k_1, ..., k_m)`.
///
/// Ordering is not enforced; the Jack engine takes [`crate::jack::Partition`]
/// instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Weight(Vec<f64>);

impl Weight {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Parameter("weight must have at least one component".into()));
        }
        if components.iter().any(|k| !k.is_finite()) {
            return Err(Error::Parameter("weight components must be finite".into()));
        }
        Ok(Weight(components))
    }

    pub fn zeros(m: usize) -> Self {
        Weight(vec![0.0; m.max(1)])
    }

    /// `(p, ..., p)`.
    pub fn constant(m: usize, p: f64) -> Self {
        Weight(vec![p; m.max(1)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0.0)
    }

    pub fn last(&self) -> f64 {
        *self.0.last().expect("non-empty")
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|k| -k).collect())
    }

    pub fn add(&self, other: &Weight) -> Result<Weight> {
        self.check_len(other.len())?;
        Ok(Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn check_len(&self, m: usize) -> Result<()> {
        if self.len() != m {
            return Err(Error::ShapeMismatch(format!(
                "weight has {} components, expected {m}",
                self.len()
            )));
        }
        Ok(())
    }

    /// Exponent applied to the `i`-th leading minor: `k_i - k_{i+1}`,
    /// with `k_{m+1} = 0`.
    pub fn minor_exponents(&self) -> impl Iterator<Item = f64> + '_ {
        let m = self.0.len();
        (0..m).map(move |i| self.0[i] - if i + 1 < m { self.0[i + 1] } else { 0.0 })
    }
}

impl TryFrom<Vec<f64>> for Weight {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Weight::new(v)
    }
}

impl From<Weight> for Vec<f64> {
    fn from(w: Weight) -> Vec<f64> {
        w.0
    }
}

/// Arguments `a + k_i - (i - 1) beta / 2` of the gamma factors.
fn gamma_arguments(algebra: Algebra, a: f64, kappa: &Weight) -> impl Iterator<Item = f64> + '_ {
    let half_beta = algebra.beta_f64() / 2.0;
    kappa
        .components()
        .iter()
        .enumerate()
        .map(move |(i, &k)| a + k - i as f64 * half_beta)
}

/// `ln Gamma_m^beta[a, kappa]
///  = ln[ pi^{m(m-1)beta/4} prod_i Gamma(a + k_i - (i-1) beta/2) ]`.
pub fn ln_mv_gamma(algebra: Algebra, m: usize, a: f64, kappa: &Weight) -> Result<f64> {
    kappa.check_len(m)?;
    let mut total = (m * (m - 1)) as f64 * algebra.beta_f64() / 4.0 * PI.ln();
    for (i, arg) in gamma_arguments(algebra, a, kappa).enumerate() {
        if !(arg > 0.0) {
            return Err(Error::Domain {
                index: i + 1,
                argument: arg,
            });
        }
        total += ln_gamma(arg);
    }
    Ok(total)
}

/// Unweighted `ln Gamma_m^beta[a]`.
pub fn ln_mv_gamma0(algebra: Algebra, m: usize, a: f64) -> Result<f64> {
    ln_mv_gamma(algebra, m, a, &Weight::zeros(m))
}

/// Generalized Pochhammer symbol `[a]_kappa^beta = prod_i (a - (i-1)beta/2)_{k_i}`.
///
/// Nonnegative integer weights use the finite product; anything else goes
/// through the gamma ratio and needs every gamma argument to be positive.
pub fn gen_pochhammer(algebra: Algebra, m: usize, a: f64, kappa: &Weight) -> Result<f64> {
    kappa.check_len(m)?;
    let integral = kappa
        .components()
        .iter()
        .all(|&k| k >= 0.0 && k.fract() == 0.0 && k <= 1e6);
    if integral {
        let zero = Weight::zeros(m);
        let mut prod = 1.0;
        for (base, &k) in gamma_arguments(algebra, a, &zero).zip(kappa.components()) {
            for j in 0..k as u64 {
                prod *= base + j as f64;
            }
        }
        return Ok(prod);
    }
    let num = ln_mv_gamma(algebra, m, a, kappa)?;
    let den = ln_mv_gamma0(algebra, m, a)?;
    Ok((num - den).exp())
}

/// `ln q_kappa` from the log leading principal minors.
pub fn ln_q_from_minors(ln_minors: &[f64], kappa: &Weight) -> Result<f64> {
    kappa.check_len(ln_minors.len())?;
    Ok(kappa
        .minor_exponents()
        .zip(ln_minors)
        .filter(|(e, _)| *e != 0.0)
        .map(|(e, l)| e * l)
        .sum())
}

/// `ln q_kappa(S) = sum_i (k_i - k_{i+1}) ln |S_i|`.
pub fn ln_q_weight(s: &HermitianPD, kappa: &Weight) -> Result<f64> {
    ln_q_from_minors(&s.ln_principal_minors(), kappa)
}

/// Highest weight vector `q_kappa(S) = |S_m|^{k_m} prod_{i<m} |S_i|^{k_i - k_{i+1}}`.
pub fn q_weight(s: &HermitianPD, kappa: &Weight) -> Result<f64> {
    Ok(ln_q_weight(s, kappa)?.exp())
}

/// `ln Vol(V_{m,n}^beta) = ln[ 2^m pi^{m n beta / 2} / Gamma_m^beta[n beta / 2] ]`.
pub fn ln_stiefel_volume(algebra: Algebra, m: usize, n: usize) -> Result<f64> {
    if m == 0 || n < m {
        return Err(Error::Parameter(format!(
            "Stiefel manifold needs n >= m >= 1, got m = {m}, n = {n}"
        )));
    }
    let beta = algebra.beta_f64();
    let half_n_beta = n as f64 * beta / 2.0;
    Ok(m as f64 * 2f64.ln() + m as f64 * half_n_beta * PI.ln() - ln_mv_gamma0(algebra, m, half_n_beta)?)
}

/// Matrix multivariate beta function
/// `ln B*_m^beta[a, k; b, tau]
///  = ln[ Gamma_1[a + k] Gamma_m[b, tau] / Gamma_1[a + m b + k + sum t_i] ]`.
pub fn ln_beta_star(algebra: Algebra, m: usize, a: f64, k: f64, b: f64, tau: &Weight) -> Result<f64> {
    tau.check_len(m)?;
    let scalar = Weight::zeros(1);
    let first = ln_mv_gamma(algebra, 1, a + k, &scalar)?;
    let second = ln_mv_gamma(algebra, m, b, tau)?;
    let third = ln_mv_gamma(algebra, 1, a + m as f64 * b + k + tau.sum(), &scalar)?;
    Ok(first + second - third)
}

/// Generalized matricvariate beta function
/// `ln B_m^beta[a, kappa; b, tau]
///  = ln[ Gamma_m[a, kappa] Gamma_m[b, tau] / Gamma_m[a + b, kappa + tau] ]`.
pub fn ln_beta_classic(
    algebra: Algebra,
    m: usize,
    a: f64,
    kappa: &Weight,
    b: f64,
    tau: &Weight,
) -> Result<f64> {
    let first = ln_mv_gamma(algebra, m, a, kappa)?;
    let second = ln_mv_gamma(algebra, m, b, tau)?;
    let third = ln_mv_gamma(algebra, m, a + b, &kappa.add(tau)?)?;
    Ok(first + second - third)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{DivMatrix, Quat};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(v: &[f64]) -> Weight {
        Weight::new(v.to_vec()).unwrap()
    }

    /// Exact `ln Gamma` at positive integers and half-integers.
    fn ln_gamma_exact(twice: u32) -> f64 {
        if twice.is_multiple_of(2) {
            (1..twice / 2).map(|j| (j as f64).ln()).sum()
        } else {
            // Gamma(j + 1/2) = sqrt(pi) prod_{i=0}^{j-1} (i + 1/2)
            let j = twice / 2;
            0.5 * PI.ln() + (0..j).map(|i| (i as f64 + 0.5).ln()).sum::<f64>()
        }
    }

    /// Stirling series with seven correction terms.
    fn ln_gamma_stirling(x: f64) -> f64 {
        let c = [
            1.0 / 12.0,
            -1.0 / 360.0,
            1.0 / 1260.0,
            -1.0 / 1680.0,
            1.0 / 1188.0,
            -691.0 / 360360.0,
            1.0 / 156.0,
        ];
        let mut series = 0.0;
        let mut pow = x;
        for ci in c {
            series += ci / pow;
            pow *= x * x;
        }
        (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
    }

    #[test]
    fn ln_gamma_matches_exact_values() {
        for twice in 1..200u32 {
            let x = twice as f64 / 2.0;
            let exact = ln_gamma_exact(twice);
            let got = ln_gamma(x);
            let tol = 1e-13 * exact.abs().max(1.0);
            assert!((got - exact).abs() <= tol, "x = {x}: {got} vs {exact}");
        }
    }

    #[test]
    fn ln_gamma_matches_stirling_for_large_arguments() {
        for &x in &[20.3, 57.77, 150.1, 999.5, 12345.6] {
            let a = ln_gamma(x);
            let b = ln_gamma_stirling(x);
            assert!((a - b).abs() <= 1e-13 * b.abs(), "x = {x}");
        }
    }

    #[test]
    fn ln_gamma_small_arguments_use_recurrence() {
        // Gamma(0.25) = 3.625609908221908...
        assert!((ln_gamma(0.25) - 3.625_609_908_221_908_3_f64.ln()).abs() < 1e-14);
        assert!((ln_gamma(1e-3) - (ln_gamma(1.001) - 1e-3f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn mv_gamma_examples() {
        let r = ln_mv_gamma(Algebra::Real, 1, 0.5, &Weight::zeros(1)).unwrap();
        assert!((r - PI.sqrt().ln()).abs() < 1e-14);
        assert!((r - 0.572_364_9).abs() < 1e-7);

        let r = ln_mv_gamma(Algebra::Real, 2, 2.0, &Weight::zeros(2)).unwrap();
        assert!((r - (PI / 2.0).ln()).abs() < 1e-14);
        assert!((r - 0.451_582_7).abs() < 1e-7);

        let r = ln_mv_gamma(Algebra::Complex, 2, 2.0, &w(&[1.0, 0.0])).unwrap();
        assert!((r - (2.0 * PI).ln()).abs() < 1e-14);
    }

    #[test]
    fn mv_gamma_domain_error_names_index() {
        // second argument: 1 + 0 - beta/2 = 0 for beta = 2
        let err = ln_mv_gamma(Algebra::Complex, 2, 1.0, &Weight::zeros(2)).unwrap_err();
        assert_eq!(err, Error::Domain { index: 2, argument: 0.0 });
        assert!(ln_mv_gamma(Algebra::Real, 2, 1.0, &Weight::zeros(3)).is_err());
    }

    #[test]
    fn mv_gamma_accepts_octonion() {
        let v = ln_mv_gamma(Algebra::Octonion, 2, 6.0, &Weight::zeros(2)).unwrap();
        let expected = 4.0 * PI.ln() + ln_gamma(6.0) + ln_gamma(2.0);
        assert!((v - expected).abs() < 1e-13);
    }

    #[test]
    fn pochhammer_examples() {
        for alg in [Algebra::Real, Algebra::Quaternion, Algebra::Octonion] {
            assert_eq!(gen_pochhammer(alg, 3, 1.7, &Weight::zeros(3)).unwrap(), 1.0);
            assert_eq!(gen_pochhammer(alg, 1, 2.0, &w(&[3.0])).unwrap(), 24.0);
        }
        assert_eq!(gen_pochhammer(Algebra::Real, 2, 3.0, &w(&[2.0, 1.0])).unwrap(), 30.0);
    }

    #[test]
    fn pochhammer_pole_is_domain_error() {
        // non-integer weight routes through gammas; a - beta/2 = 0 is a pole
        let r = gen_pochhammer(Algebra::Complex, 2, 1.0, &w(&[0.5, 0.5]));
        assert!(matches!(r, Err(Error::Domain { index: 2, .. })));
    }

    #[test]
    fn pochhammer_matches_gamma_ratio_for_random_integer_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for alg in [Algebra::Real, Algebra::Complex, Algebra::Quaternion, Algebra::Octonion] {
            for _ in 0..100 {
                let m = rng.random_range(1..=4);
                let kappa: Vec<f64> = (0..m).map(|_| rng.random_range(0..5) as f64).collect();
                let kappa = Weight::new(kappa).unwrap();
                let a = (m - 1) as f64 * alg.beta_f64() / 2.0 + rng.random_range(0.1..4.0);
                let direct = gen_pochhammer(alg, m, a, &kappa).unwrap();
                let ratio = (ln_mv_gamma(alg, m, a, &kappa).unwrap() - ln_mv_gamma0(alg, m, a).unwrap()).exp();
                assert!((direct - ratio).abs() <= 1e-10 * direct.abs());
            }
        }
    }

    #[test]
    fn q_weight_examples() {
        let s = HermitianPD::diagonal(Algebra::Real, &[2.0, 3.0]).unwrap();
        assert!((q_weight(&s, &w(&[2.0, 1.0])).unwrap() - 12.0).abs() < 1e-12);
        assert!((q_weight(&s, &w(&[2.0, 2.0])).unwrap() - 36.0).abs() < 1e-12);
        let id = HermitianPD::identity(Algebra::Quaternion, 3).unwrap();
        assert_eq!(q_weight(&id, &w(&[1.5, -2.0, 0.3])).unwrap(), 1.0);
    }

    fn random_hpd(rng: &mut ChaCha8Rng, algebra: Algebra, m: usize) -> HermitianPD {
        let x = DivMatrix::from_fn(algebra, m + 1, m, |_, _| {
            Quat([
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ])
        })
        .unwrap();
        HermitianPD::from_gram(&x).unwrap()
    }

    #[test]
    fn q_weight_identities_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for alg in [Algebra::Real, Algebra::Complex, Algebra::Quaternion] {
            for _ in 0..100 {
                let m = rng.random_range(1..=4);
                let kappa = Weight::new((0..m).map(|_| rng.random_range(-2.0..3.0)).collect()).unwrap();
                let tau = Weight::new((0..m).map(|_| rng.random_range(-2.0..3.0)).collect()).unwrap();
                let a = random_hpd(&mut rng, alg, m);
                let c = random_hpd(&mut rng, alg, m);

                let lhs = q_weight(&a, &kappa.add(&tau).unwrap()).unwrap();
                let rhs = q_weight(&a, &kappa).unwrap() * q_weight(&a, &tau).unwrap();
                assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(lhs.abs()) * 10.0);

                let b = c.cholesky_upper();
                let lhs = q_weight(&a.congruence(b).unwrap(), &kappa).unwrap();
                let rhs = q_weight(&c, &kappa).unwrap() * q_weight(&a, &kappa).unwrap();
                assert!((lhs - rhs).abs() <= 1e-10 * rhs);

                let lhs = q_weight(&a.whiten(&c).unwrap(), &kappa).unwrap();
                let rhs = q_weight(&c, &kappa.neg()).unwrap() * q_weight(&a, &kappa).unwrap();
                assert!((lhs - rhs).abs() <= 1e-10 * rhs);
            }
        }
    }

    #[test]
    fn stiefel_volume_examples() {
        let v = |m, n| ln_stiefel_volume(Algebra::Real, m, n).unwrap();
        assert!((v(1, 1) - 2f64.ln()).abs() < 1e-14);
        assert!((v(1, 2) - (2.0 * PI).ln()).abs() < 1e-14);
        assert!((v(1, 3) - (4.0 * PI).ln()).abs() < 1e-14);
        // unit circle in C and unit 3-sphere in H
        assert!((ln_stiefel_volume(Algebra::Complex, 1, 1).unwrap() - (2.0 * PI).ln()).abs() < 1e-14);
        let s3 = ln_stiefel_volume(Algebra::Quaternion, 1, 1).unwrap();
        assert!((s3 - (2.0 * PI * PI).ln()).abs() < 1e-14);
        assert!(ln_stiefel_volume(Algebra::Real, 3, 2).is_err());
    }

    #[test]
    fn beta_function_examples() {
        let zero1 = Weight::zeros(1);
        assert!(ln_beta_star(Algebra::Real, 1, 1.0, 0.0, 1.0, &zero1).unwrap().abs() < 1e-15);
        let b = ln_beta_star(Algebra::Real, 1, 1.0, 0.0, 0.5, &zero1).unwrap();
        assert!((b - 2f64.ln()).abs() < 1e-14);
        assert!(ln_beta_classic(Algebra::Real, 1, 1.0, &zero1, 1.0, &zero1).unwrap().abs() < 1e-15);

        let zero2 = Weight::zeros(2);
        let got = ln_beta_classic(Algebra::Real, 2, 2.0, &zero2, 2.0, &zero2).unwrap();
        // Gamma_2^1[4] = sqrt(pi) Gamma(4) Gamma(3.5)
        let want = (2.0 * (PI / 2.0).ln()) - (PI.sqrt() * ln_gamma(4.0).exp() * ln_gamma(3.5).exp()).ln();
        assert!((got - want).abs() < 1e-13);
    }

    proptest! {
        #[test]
        fn scalar_beta_functions_agree(
            alg in prop_oneof![Just(Algebra::Real), Just(Algebra::Complex), Just(Algebra::Quaternion), Just(Algebra::Octonion)],
            a in 0.2f64..6.0, k in -0.1f64..3.0, b in 0.2f64..6.0, t in -0.1f64..3.0,
        ) {
            let star = ln_beta_star(alg, 1, a, k, b, &w(&[t])).unwrap();
            let classic = ln_beta_classic(alg, 1, a, &w(&[k]), b, &w(&[t])).unwrap();
            let scalar = ln_gamma(a + k) + ln_gamma(b + t) - ln_gamma(a + b + k + t);
            prop_assert!((star - classic).abs() <= 1e-12 * classic.abs().max(1.0));
            prop_assert!((star - scalar).abs() <= 1e-12 * scalar.abs().max(1.0));
        }
    }
}
