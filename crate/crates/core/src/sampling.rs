//! Samplers built from the stochastic representations of each family.
//!
//! The Riesz matrix uses a Bartlett-type triangle: with `V = T* T`,
//! `|V| = prod t_ii^2` and `q_kappa(V) = prod t_ii^{2 k_i}`, so the Riesz
//! density factors over independent entries of `T` once the Cholesky
//! Jacobian `2^m prod t_ii^{beta(m-i)+1}` is accounted for.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::algebra::{Algebra, DivMatrix, HermitianPD, Quat, UpperTriangular};
use crate::densities::{BetaRieszParams, KotzRieszParams, PearsonIIRieszParams, RieszParams};
use crate::error::{Error, Result};
use crate::specfun::Weight;

/// Seeded random source. Streams with distinct indices under one seed are
/// independent, which is how parallel workers get their generators.
#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha20Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream {
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream `index` under `seed`.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(index);
        RandomStream { rng }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Gamma variate with the given shape and rate.
    pub fn gamma(&mut self, shape: f64, rate: f64) -> Result<f64> {
        let dist = Gamma::new(shape, 1.0 / rate)
            .map_err(|e| Error::Parameter(format!("gamma(shape {shape}, rate {rate}): {e}")))?;
        Ok(dist.sample(&mut self.rng))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Element with independent `N(0, sd^2)` live components.
    fn normal_element(&mut self, beta: usize, sd: f64) -> Quat {
        let mut q = [0.0; 4];
        for c in q.iter_mut().take(beta) {
            *c = sd * self.normal();
        }
        Quat(q)
    }
}

/// Bartlett triangle `T` for `Riesz(a, kappa, I_m)`: `t_ii^2 ~ Gamma(a + k_i - (i-1)beta/2, rate beta)`
/// and off-diagonal components `N(0, 1/(2 beta))`.
pub fn sample_riesz_triangle(rng: &mut RandomStream, algebra: Algebra, a: f64, kappa: &Weight) -> Result<UpperTriangular> {
    algebra.require_associative()?;
    let m = kappa.len();
    let beta = algebra.beta_f64();
    let sd = (0.5 / beta).sqrt();
    let mut t = DivMatrix::zeros(algebra, m, m)?;
    for i in 0..m {
        let shape = a + kappa.components()[i] - i as f64 * beta / 2.0;
        if !(shape > 0.0) {
            return Err(Error::Parameter(format!(
                "Bartlett shape {shape} at index {} is not positive",
                i + 1
            )));
        }
        t.set(i, i, Quat::real(rng.gamma(shape, beta)?.sqrt()));
        for j in (i + 1)..m {
            t.set(i, j, rng.normal_element(algebra.beta(), sd));
        }
    }
    UpperTriangular::new(t)
}

/// `V = u(Xi)* T* T u(Xi)` with `T` from [`sample_riesz_triangle`].
pub fn sample_riesz_matrix(rng: &mut RandomStream, p: &RieszParams) -> Result<HermitianPD> {
    let t = sample_riesz_triangle(rng, p.algebra(), p.a(), p.kappa())?;
    let x = t.matrix().matmul(p.xi().cholesky_upper().matrix())?;
    HermitianPD::from_gram(&x)
}

/// Uniform draw from the Stiefel manifold of `n x m` matrices with
/// orthonormal columns.
pub fn sample_stiefel(rng: &mut RandomStream, algebra: Algebra, m: usize, n: usize) -> Result<DivMatrix> {
    algebra.require_associative()?;
    if m == 0 || n < m {
        return Err(Error::Parameter(format!("Stiefel manifold needs n >= m >= 1, got m = {m}, n = {n}")));
    }
    let beta = algebra.beta();
    let x = DivMatrix::from_fn(algebra, n, m, |_, _| rng.normal_element(beta, 1.0))?;
    Ok(x.thin_qr()?.0)
}

/// Standardized Kotz-Riesz draw `H_1 T` with `T* T ~ Riesz(n beta/2, kappa, I_m)`.
fn sample_kotz_riesz_standard(rng: &mut RandomStream, algebra: Algebra, n: usize, kappa: &Weight) -> Result<DivMatrix> {
    let m = kappa.len();
    let h = sample_stiefel(rng, algebra, m, n)?;
    let t = sample_riesz_triangle(rng, algebra, n as f64 * algebra.beta_f64() / 2.0, kappa)?;
    h.matmul(t.matrix())
}

/// `u(Theta)* Y0 u(Sigma) * scale + mu`.
fn affine(y0: &DivMatrix, scale: f64, mu: &DivMatrix, theta: &HermitianPD, sigma: &HermitianPD) -> Result<DivMatrix> {
    let left = theta.cholesky_upper().matrix().conj_transpose();
    left.matmul(y0)?.matmul(sigma.cholesky_upper().matrix())?.scale(scale).add(mu)
}

pub fn sample_kotz_riesz(rng: &mut RandomStream, p: &KotzRieszParams) -> Result<DivMatrix> {
    let (n, _) = p.shape();
    let y0 = sample_kotz_riesz_standard(rng, p.algebra(), n, p.kappa())?;
    affine(&y0, 1.0, p.mu(), p.theta(), p.sigma())
}

/// A Pearson II-Riesz draw with its intermediate quantities.
#[derive(Debug, Clone)]
pub struct PearsonDraw {
    /// The draw `C = rho^{-1/2} u(Theta)* R u(Sigma) + mu`.
    pub c: DivMatrix,
    /// The standardized matrix `R = S^{-1/2} Y`.
    pub r: DivMatrix,
    /// `S = S_1 + ||Y||^2`.
    pub s: f64,
}

pub fn sample_pearson2riesz_parts(rng: &mut RandomStream, p: &PearsonIIRieszParams) -> Result<PearsonDraw> {
    let alg = p.algebra();
    let (n, _) = p.shape();
    let s1 = rng.gamma(p.c(), alg.beta_f64())?;
    let y = sample_kotz_riesz_standard(rng, alg, n, p.tau())?;
    let s = s1 + y.frobenius_norm_sq();
    let r = y.scale(1.0 / s.sqrt());
    let c = affine(&r, 1.0 / p.rho().sqrt(), p.mu(), p.theta(), p.sigma())?;
    Ok(PearsonDraw { c, r, s })
}

pub fn sample_pearson2riesz(rng: &mut RandomStream, p: &PearsonIIRieszParams) -> Result<DivMatrix> {
    Ok(sample_pearson2riesz_parts(rng, p)?.c)
}

/// `B = R* R` with `R` Pearson II-Riesz (`mu = 0`, `Theta = I_n`).
pub fn sample_beta_riesz(rng: &mut RandomStream, p: &BetaRieszParams) -> Result<HermitianPD> {
    let pearson = p.pearson()?;
    let c = sample_pearson2riesz(rng, &pearson)?;
    HermitianPD::from_gram(&c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{ln_mv_gamma, Weight};
    use crate::verify::stats::{ks_test, ks_two_sample, mean_stderr};
    use statrs::distribution::{Beta, ContinuousCDF, Gamma as GammaDist};

    fn w(v: &[f64]) -> Weight {
        Weight::new(v.to_vec()).unwrap()
    }

    const N: usize = 20_000;

    #[test]
    fn streams_are_reproducible() {
        let p = PearsonIIRieszParams::standard(Algebra::Quaternion, 3, 2, 3.0, 0.5, w(&[1.0, 0.5])).unwrap();
        let draw = |seed| {
            let mut rng = RandomStream::new(seed);
            (0..5).map(|_| sample_pearson2riesz(&mut rng, &p).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
        let mut a = RandomStream::substream(3, 0);
        let mut b = RandomStream::substream(3, 1);
        assert_ne!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn stiefel_columns_are_orthonormal() {
        let mut rng = RandomStream::new(1);
        for alg in [Algebra::Real, Algebra::Complex, Algebra::Quaternion] {
            for (m, n) in [(1, 1), (1, 3), (2, 2), (2, 5), (3, 4)] {
                let h = sample_stiefel(&mut rng, alg, m, n).unwrap();
                let err = h.gram().sub(&DivMatrix::identity(alg, m).unwrap()).unwrap().max_abs();
                assert!(err <= 1e-12);
            }
        }
        assert!(sample_stiefel(&mut rng, Algebra::Octonion, 1, 2).is_err());
    }

    #[test]
    fn circle_angles_are_uniform() {
        let mut rng = RandomStream::new(2);
        let angles: Vec<f64> = (0..N)
            .map(|_| {
                let h = sample_stiefel(&mut rng, Algebra::Real, 1, 2).unwrap();
                h.get(1, 0).re().atan2(h.get(0, 0).re())
            })
            .collect();
        let report = ks_test(&angles, |x| (x + std::f64::consts::PI) / (2.0 * std::f64::consts::PI));
        assert!(report.pvalue > 0.01, "{report:?}");
    }

    #[test]
    fn scalar_riesz_is_gamma() {
        let mut rng = RandomStream::new(3);
        let p = RieszParams::new(2.5, w(&[0.0]), HermitianPD::identity(Algebra::Real, 1).unwrap()).unwrap();
        let v: Vec<f64> = (0..N).map(|_| sample_riesz_matrix(&mut rng, &p).unwrap().det()).collect();
        let (mean, se) = mean_stderr(&v);
        assert!((mean - 2.5).abs() <= 3.0 * se);
        let dist = GammaDist::new(2.5, 1.0).unwrap();
        assert!(ks_test(&v, |x| dist.cdf(x)).pvalue > 0.01);
    }

    #[test]
    fn riesz_determinant_moment() {
        // E|V| = Gamma_m[a + 1, kappa] / Gamma_m[a, kappa] / beta^m for Xi = I.
        let mut rng = RandomStream::new(4);
        for alg in [Algebra::Real, Algebra::Complex] {
            let kappa = w(&[1.0, 0.0]);
            let p = RieszParams::new(2.0, kappa.clone(), HermitianPD::identity(alg, 2).unwrap()).unwrap();
            let dets: Vec<f64> = (0..N).map(|_| sample_riesz_matrix(&mut rng, &p).unwrap().det()).collect();
            let (mean, se) = mean_stderr(&dets);
            let beta = alg.beta_f64();
            let want = (ln_mv_gamma(alg, 2, 3.0, &kappa).unwrap() - ln_mv_gamma(alg, 2, 2.0, &kappa).unwrap()).exp()
                / beta.powi(2);
            assert!((mean - want).abs() <= 3.0 * se, "{alg:?}: {mean} vs {want} (se {se})");
        }
    }

    #[test]
    fn bartlett_leading_entry_is_gamma() {
        let mut rng = RandomStream::new(5);
        let kappa = w(&[1.5, 0.5, 0.0]);
        let t11: Vec<f64> = (0..N)
            .map(|_| sample_riesz_triangle(&mut rng, Algebra::Complex, 3.0, &kappa).unwrap().diagonal()[0].powi(2))
            .collect();
        let dist = GammaDist::new(4.5, 2.0).unwrap();
        assert!(ks_test(&t11, |x| dist.cdf(x)).pvalue > 0.01);
    }

    #[test]
    fn kotz_riesz_zero_weight_entries_have_half_variance() {
        let mut rng = RandomStream::new(6);
        let p = KotzRieszParams::standard(Algebra::Real, 3, 2, Weight::zeros(2)).unwrap();
        let entries: Vec<f64> = (0..N)
            .map(|_| sample_kotz_riesz(&mut rng, &p).unwrap().get(1, 1).re().powi(2))
            .collect();
        let (mean, se) = mean_stderr(&entries);
        assert!((mean - 0.5).abs() <= 3.0 * se);
    }

    #[test]
    fn kotz_riesz_gram_is_riesz() {
        let mut rng = RandomStream::new(7);
        let alg = Algebra::Complex;
        let kappa = w(&[2.0, 1.0]);
        let p = KotzRieszParams::standard(alg, 3, 2, kappa.clone()).unwrap();
        let riesz = RieszParams::new(3.0, kappa, HermitianPD::identity(alg, 2).unwrap()).unwrap();
        let a: Vec<f64> = (0..N)
            .map(|_| HermitianPD::from_gram(&sample_kotz_riesz(&mut rng, &p).unwrap()).unwrap().det())
            .collect();
        let b: Vec<f64> = (0..N).map(|_| sample_riesz_matrix(&mut rng, &riesz).unwrap().det()).collect();
        assert!(ks_two_sample(&a, &b).pvalue > 0.01);
    }

    #[test]
    fn kotz_riesz_mean_is_location() {
        let mut rng = RandomStream::new(8);
        let alg = Algebra::Real;
        let mu = DivMatrix::from_real(2, 1, &[1.5, -0.5]).unwrap();
        let theta = HermitianPD::new(DivMatrix::from_real(2, 2, &[2.0, 0.5, 0.5, 1.0]).unwrap()).unwrap();
        let p = KotzRieszParams::new(w(&[1.0]), mu, theta, HermitianPD::identity(alg, 1).unwrap()).unwrap();
        let first: Vec<f64> = (0..N).map(|_| sample_kotz_riesz(&mut rng, &p).unwrap().get(0, 0).re()).collect();
        let (mean, se) = mean_stderr(&first);
        assert!((mean - 1.5).abs() <= 3.0 * se);
    }

    #[test]
    fn pearson_draws_stay_in_support() {
        let mut rng = RandomStream::new(9);
        for alg in [Algebra::Real, Algebra::Complex, Algebra::Quaternion] {
            let p = PearsonIIRieszParams::standard(alg, 3, 2, 1.0, 0.2, w(&[2.0, 1.0])).unwrap();
            for _ in 0..2000 {
                let d = sample_pearson2riesz_parts(&mut rng, &p).unwrap();
                assert!(1.0 - d.r.frobenius_norm_sq() > 0.0);
                assert!(crate::densities::pearson2riesz_logpdf(&d.c, &p).is_ok());
            }
        }
    }

    #[test]
    fn pearson_scalar_norm_is_beta() {
        let mut rng = RandomStream::new(10);
        let (nu, k, t, n) = (3.0, 0.5, 1.5, 2);
        let p = PearsonIIRieszParams::standard(Algebra::Real, n, 1, nu, k, w(&[t])).unwrap();
        let norms: Vec<f64> = (0..N)
            .map(|_| sample_pearson2riesz_parts(&mut rng, &p).unwrap().r.frobenius_norm_sq())
            .collect();
        let dist = Beta::new(n as f64 / 2.0 + t, nu / 2.0 + k).unwrap();
        assert!(ks_test(&norms, |x| dist.cdf(x)).pvalue > 0.01);
    }

    #[test]
    fn pearson_standardized_part_is_rate_free() {
        // Scaling S_1 and Y^2 by a common factor leaves R unchanged.
        let mut rng = RandomStream::new(11);
        let y = sample_kotz_riesz_standard(&mut rng, Algebra::Complex, 3, &w(&[1.0, 0.0])).unwrap();
        let s1 = rng.gamma(2.0, 2.0).unwrap();
        let r = y.scale(1.0 / (s1 + y.frobenius_norm_sq()).sqrt());
        let c: f64 = 7.3;
        let ys = y.scale(c.sqrt());
        let rs = ys.scale(1.0 / (c * s1 + ys.frobenius_norm_sq()).sqrt());
        assert!(r.sub(&rs).unwrap().max_abs() <= 1e-14);
    }

    #[test]
    fn beta_riesz_draws_stay_in_support() {
        let mut rng = RandomStream::new(12);
        let sigma = HermitianPD::new(DivMatrix::from_real(2, 2, &[1.0, 0.3, 0.3, 0.5]).unwrap()).unwrap();
        let p = BetaRieszParams::new(3.0, 0.5, w(&[1.0, 0.0]), 2.0, sigma, 2).unwrap();
        for _ in 0..2000 {
            let b = sample_beta_riesz(&mut rng, &p).unwrap();
            assert!(crate::densities::beta_riesz_logpdf(&b, &p).is_ok());
        }
    }

    #[test]
    fn beta_riesz_scalar_is_scaled_beta() {
        let mut rng = RandomStream::new(13);
        let (nu, k, t, n, rho, s) = (2.0, 1.0, 0.5, 3, 2.0, 0.7);
        let sigma = HermitianPD::diagonal(Algebra::Complex, &[s]).unwrap();
        let p = BetaRieszParams::new(nu, k, w(&[t]), rho, sigma, n).unwrap();
        let u: Vec<f64> = (0..N).map(|_| sample_beta_riesz(&mut rng, &p).unwrap().det() * rho / s).collect();
        let dist = Beta::new(n as f64 + t, nu + k).unwrap();
        assert!(ks_test(&u, |x| dist.cdf(x)).pvalue > 0.01);
    }
}
