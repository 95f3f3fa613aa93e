//! Log-densities of the Riesz, Kotz-Riesz, Pearson II-Riesz and beta-Riesz
//! families, and the joint densities of singular values and eigenvalues.
//!
//! Every function returns the natural log of the density with respect to
//! Lebesgue measure on the matching real space. Points outside the support
//! raise [`Error::Support`].

use std::f64::consts::{LN_2, PI};

use crate::algebra::{Algebra, DivMatrix, HermitianPD};
use crate::error::{Error, Result};
use crate::jack::{jack_c, jack_c_identity, Partition};
use crate::specfun::{ln_beta_star, ln_gamma, ln_mv_gamma, ln_mv_gamma0, ln_q_weight, Weight};

fn parameter_domain(what: &str, r: Result<f64>) -> Result<f64> {
    r.map_err(|e| match e {
        Error::Domain { index, argument } => {
            Error::Parameter(format!("{what}: gamma argument {argument} at index {index} is not positive"))
        }
        other => other,
    })
}

fn same_algebra(a: Algebra, b: Algebra, what: &str) -> Result<()> {
    if a != b {
        return Err(Error::Parameter(format!(
            "{what} is over the {} numbers, expected {}",
            b.name(),
            a.name()
        )));
    }
    Ok(())
}

/// Validates a raw matrix as a support point in the positive definite cone.
pub fn support_pd(matrix: DivMatrix) -> Result<HermitianPD> {
    HermitianPD::new(matrix).map_err(|e| match e {
        Error::NotPositiveDefinite { .. } | Error::NotHermitian(_) => Error::Support(e.to_string()),
        other => other,
    })
}

/// `ln q_kappa(X* X)` from the QR factor of `X`. Zero minors are allowed
/// only where their exponent vanishes.
fn ln_q_of_gram(x: &DivMatrix, kappa: &Weight) -> Result<f64> {
    kappa.check_len(x.cols())?;
    let mut total = 0.0;
    for (i, (e, minor)) in kappa.minor_exponents().zip(x.gram_minors()).enumerate() {
        if e == 0.0 {
            continue;
        }
        if !(minor > 0.0) {
            return Err(Error::Support(format!(
                "leading minor {} of the Gram matrix vanishes (rank deficient argument)",
                i + 1
            )));
        }
        total += e * minor.ln();
    }
    Ok(total)
}

/// `u(theta)^{-*} X u(sigma)^{-1}`.
fn whiten_rect(x: &DivMatrix, theta: &HermitianPD, sigma: &HermitianPD) -> Result<DivMatrix> {
    let left = theta.cholesky_upper().inverse().matrix().conj_transpose();
    let right = sigma.cholesky_upper().inverse();
    left.matmul(x)?.matmul(right.matrix())
}

/// Parameters of the Riesz distribution of type I.
#[derive(Debug, Clone, PartialEq)]
pub struct RieszParams {
    a: f64,
    kappa: Weight,
    xi: HermitianPD,
}

impl RieszParams {
    pub fn new(a: f64, kappa: Weight, xi: HermitianPD) -> Result<Self> {
        xi.algebra().require_associative()?;
        kappa.check_len(xi.dim())?;
        parameter_domain("Riesz", ln_mv_gamma(xi.algebra(), xi.dim(), a, &kappa))?;
        Ok(RieszParams { a, kappa, xi })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn kappa(&self) -> &Weight {
        &self.kappa
    }

    pub fn xi(&self) -> &HermitianPD {
        &self.xi
    }

    pub fn algebra(&self) -> Algebra {
        self.xi.algebra()
    }

    pub fn dim(&self) -> usize {
        self.xi.dim()
    }
}

/// Parameters of the Kotz-Riesz distribution of type I for `n x m` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct KotzRieszParams {
    kappa: Weight,
    mu: DivMatrix,
    theta: HermitianPD,
    sigma: HermitianPD,
}

impl KotzRieszParams {
    pub fn new(kappa: Weight, mu: DivMatrix, theta: HermitianPD, sigma: HermitianPD) -> Result<Self> {
        let alg = sigma.algebra();
        alg.require_associative()?;
        same_algebra(alg, theta.algebra(), "Theta")?;
        same_algebra(alg, mu.algebra(), "mu")?;
        let (n, m) = (theta.dim(), sigma.dim());
        if mu.shape() != (n, m) {
            return Err(Error::ShapeMismatch(format!(
                "mu is {}x{}, expected {n}x{m}",
                mu.rows(),
                mu.cols()
            )));
        }
        if n < m {
            return Err(Error::Parameter(format!("need n >= m, got n = {n}, m = {m}")));
        }
        kappa.check_len(m)?;
        let half_n_beta = n as f64 * alg.beta_f64() / 2.0;
        parameter_domain("Kotz-Riesz", ln_mv_gamma(alg, m, half_n_beta, &kappa))?;
        Ok(KotzRieszParams { kappa, mu, theta, sigma })
    }

    /// `mu = 0`, `Theta = I_n`, `Sigma = I_m`.
    pub fn standard(algebra: Algebra, n: usize, m: usize, kappa: Weight) -> Result<Self> {
        KotzRieszParams::new(
            kappa,
            DivMatrix::zeros(algebra, n, m)?,
            HermitianPD::identity(algebra, n)?,
            HermitianPD::identity(algebra, m)?,
        )
    }

    pub fn kappa(&self) -> &Weight {
        &self.kappa
    }

    pub fn mu(&self) -> &DivMatrix {
        &self.mu
    }

    pub fn theta(&self) -> &HermitianPD {
        &self.theta
    }

    pub fn sigma(&self) -> &HermitianPD {
        &self.sigma
    }

    pub fn algebra(&self) -> Algebra {
        self.sigma.algebra()
    }

    /// `(n, m)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.theta.dim(), self.sigma.dim())
    }
}

/// Parameters of the Pearson type II-Riesz distribution for `n x m` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct PearsonIIRieszParams {
    nu: f64,
    k: f64,
    tau: Weight,
    rho: f64,
    mu: DivMatrix,
    theta: HermitianPD,
    sigma: HermitianPD,
}

fn check_pearson_scalars(alg: Algebra, m: usize, n: usize, nu: f64, k: f64, tau: &Weight, rho: f64) -> Result<()> {
    if n < m {
        return Err(Error::Parameter(format!("need n >= m, got n = {n}, m = {m}")));
    }
    tau.check_len(m)?;
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Parameter(format!("rho must be positive, got {rho}")));
    }
    if !(nu * alg.beta_f64() / 2.0 + k > 0.0) {
        return Err(Error::Parameter(format!(
            "nu beta / 2 + k must be positive, got {}",
            nu * alg.beta_f64() / 2.0 + k
        )));
    }
    parameter_domain("tau", ln_mv_gamma(alg, m, n as f64 * alg.beta_f64() / 2.0, tau))?;
    Ok(())
}

impl PearsonIIRieszParams {
    pub fn new(
        nu: f64,
        k: f64,
        tau: Weight,
        rho: f64,
        mu: DivMatrix,
        theta: HermitianPD,
        sigma: HermitianPD,
    ) -> Result<Self> {
        let alg = sigma.algebra();
        alg.require_associative()?;
        same_algebra(alg, theta.algebra(), "Theta")?;
        same_algebra(alg, mu.algebra(), "mu")?;
        let (n, m) = (theta.dim(), sigma.dim());
        if mu.shape() != (n, m) {
            return Err(Error::ShapeMismatch(format!(
                "mu is {}x{}, expected {n}x{m}",
                mu.rows(),
                mu.cols()
            )));
        }
        check_pearson_scalars(alg, m, n, nu, k, &tau, rho)?;
        Ok(PearsonIIRieszParams { nu, k, tau, rho, mu, theta, sigma })
    }

    /// `rho = 1`, `mu = 0`, `Theta = I_n`, `Sigma = I_m`.
    pub fn standard(algebra: Algebra, n: usize, m: usize, nu: f64, k: f64, tau: Weight) -> Result<Self> {
        PearsonIIRieszParams::new(
            nu,
            k,
            tau,
            1.0,
            DivMatrix::zeros(algebra, n, m)?,
            HermitianPD::identity(algebra, n)?,
            HermitianPD::identity(algebra, m)?,
        )
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn tau(&self) -> &Weight {
        &self.tau
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn mu(&self) -> &DivMatrix {
        &self.mu
    }

    pub fn theta(&self) -> &HermitianPD {
        &self.theta
    }

    pub fn sigma(&self) -> &HermitianPD {
        &self.sigma
    }

    pub fn algebra(&self) -> Algebra {
        self.sigma.algebra()
    }

    /// `(n, m)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.theta.dim(), self.sigma.dim())
    }

    /// Shape `nu beta / 2 + k` of the scalar Riesz component.
    pub fn c(&self) -> f64 {
        self.nu * self.algebra().beta_f64() / 2.0 + self.k
    }
}

/// Parameters of the beta-Riesz distribution of type I.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaRieszParams {
    nu: f64,
    k: f64,
    tau: Weight,
    rho: f64,
    sigma: HermitianPD,
    n: usize,
}

impl BetaRieszParams {
    pub fn new(nu: f64, k: f64, tau: Weight, rho: f64, sigma: HermitianPD, n: usize) -> Result<Self> {
        let alg = sigma.algebra();
        alg.require_associative()?;
        check_pearson_scalars(alg, sigma.dim(), n, nu, k, &tau, rho)?;
        Ok(BetaRieszParams { nu, k, tau, rho, sigma, n })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn tau(&self) -> &Weight {
        &self.tau
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn sigma(&self) -> &HermitianPD {
        &self.sigma
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.sigma.dim()
    }

    pub fn algebra(&self) -> Algebra {
        self.sigma.algebra()
    }

    /// The Pearson II-Riesz law whose `R* R` this is (`mu = 0`, `Theta = I_n`).
    pub fn pearson(&self) -> Result<PearsonIIRieszParams> {
        let alg = self.algebra();
        PearsonIIRieszParams::new(
            self.nu,
            self.k,
            self.tau.clone(),
            self.rho,
            DivMatrix::zeros(alg, self.n, self.dim())?,
            HermitianPD::identity(alg, self.n)?,
            self.sigma.clone(),
        )
    }
}

/// Riesz type I log-density at `V`.
pub fn riesz_logpdf(v: &HermitianPD, p: &RieszParams) -> Result<f64> {
    let (alg, m) = (p.algebra(), p.dim());
    same_algebra(alg, v.algebra(), "V")?;
    if v.dim() != m {
        return Err(Error::ShapeMismatch(format!("V is {0}x{0}, expected {m}x{m}", v.dim())));
    }
    let beta = alg.beta_f64();
    let shift = (m as f64 - 1.0) * beta / 2.0 + 1.0;
    let constant = (p.a * m as f64 + p.kappa.sum()) * beta.ln()
        - ln_mv_gamma(alg, m, p.a, &p.kappa)?
        - p.a * p.xi.ln_det()
        - ln_q_weight(&p.xi, &p.kappa)?;
    let kernel = -beta * v.trace_against(&p.xi)? + (p.a - shift) * v.ln_det() + ln_q_weight(v, &p.kappa)?;
    Ok(constant + kernel)
}

/// Riesz log-density for `m = 1` on `v > 0`; valid for every algebra.
pub fn riesz_logpdf_scalar(v: f64, a: f64, k: f64, xi: f64, algebra: Algebra) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::Support(format!("v = {v} must be positive")));
    }
    if !(xi > 0.0) {
        return Err(Error::Parameter(format!("xi = {xi} must be positive")));
    }
    let beta = algebra.beta_f64();
    let shape = parameter_domain("Riesz", ln_mv_gamma0(algebra, 1, a + k))?;
    Ok((a + k) * beta.ln() - shape - (a + k) * xi.ln() - beta * v / xi + (a + k - 1.0) * v.ln())
}

/// Kotz-Riesz type I log-density at the `n x m` matrix `Y`.
pub fn kotz_riesz_logpdf(y: &DivMatrix, p: &KotzRieszParams) -> Result<f64> {
    let alg = p.algebra();
    same_algebra(alg, y.algebra(), "Y")?;
    let (n, m) = p.shape();
    if y.shape() != (n, m) {
        return Err(Error::ShapeMismatch(format!("Y is {}x{}, expected {n}x{m}", y.rows(), y.cols())));
    }
    let beta = alg.beta_f64();
    let half_n_beta = n as f64 * beta / 2.0;
    let half_mn_beta = m as f64 * half_n_beta;
    let constant = (half_mn_beta + p.kappa.sum()) * beta.ln() + ln_mv_gamma0(alg, m, half_n_beta)?
        - half_mn_beta * PI.ln()
        - ln_mv_gamma(alg, m, half_n_beta, &p.kappa)?
        - half_n_beta * p.sigma.ln_det()
        - m as f64 * beta / 2.0 * p.theta.ln_det();
    let w = whiten_rect(&y.sub(&p.mu)?, &p.theta, &p.sigma)?;
    Ok(constant - beta * w.frobenius_norm_sq() + ln_q_of_gram(&w, &p.kappa)?)
}

/// Standardized Pearson II-Riesz log-density given `||R||^2` and
/// `ln q_tau(R* R)`.
fn pearson_standard_from_parts(
    alg: Algebra,
    n: usize,
    m: usize,
    nu: f64,
    k: f64,
    tau: &Weight,
    norm_sq: f64,
    ln_q: f64,
) -> Result<f64> {
    let g = 1.0 - norm_sq;
    if !(g > 0.0) {
        return Err(Error::Support(format!("1 - ||R||^2 = {g} must be positive")));
    }
    let beta = alg.beta_f64();
    let half_n_beta = n as f64 * beta / 2.0;
    let half_mn_beta = m as f64 * half_n_beta;
    let c = nu * beta / 2.0 + k;
    let constant = ln_mv_gamma0(alg, m, half_n_beta)? + ln_gamma(c + half_mn_beta + tau.sum())
        - half_mn_beta * PI.ln()
        - ln_mv_gamma(alg, m, half_n_beta, tau)?
        - ln_gamma(c);
    Ok(constant + (c - 1.0) * g.ln() + ln_q)
}

/// Pearson II-Riesz log-density at the `n x m` matrix `C`.
///
/// The standardized variable is `R = rho^{1/2} u(Theta)^{-*} (C - mu) u(Sigma)^{-1}`
/// and the change of variable contributes `rho^{mn beta/2} |Sigma|^{-n beta/2} |Theta|^{-m beta/2}`.
pub fn pearson2riesz_logpdf(c: &DivMatrix, p: &PearsonIIRieszParams) -> Result<f64> {
    let alg = p.algebra();
    same_algebra(alg, c.algebra(), "C")?;
    let (n, m) = p.shape();
    if c.shape() != (n, m) {
        return Err(Error::ShapeMismatch(format!("C is {}x{}, expected {n}x{m}", c.rows(), c.cols())));
    }
    let beta = alg.beta_f64();
    let r = whiten_rect(&c.sub(&p.mu)?, &p.theta, &p.sigma)?.scale(p.rho.sqrt());
    let standard = pearson_standard_from_parts(
        alg,
        n,
        m,
        p.nu,
        p.k,
        &p.tau,
        r.frobenius_norm_sq(),
        ln_q_of_gram(&r, &p.tau)?,
    )?;
    let jacobian = (m * n) as f64 * beta / 2.0 * p.rho.ln()
        - n as f64 * beta / 2.0 * p.sigma.ln_det()
        - m as f64 * beta / 2.0 * p.theta.ln_det();
    Ok(standard + jacobian)
}

/// Standardized Pearson II-Riesz log-density for `m = 1` at any point `R`
/// of `A^n` with `||R||^2 = norm_sq`; valid for every algebra.
pub fn pearson2riesz_logpdf_vector(norm_sq: f64, nu: f64, k: f64, t: f64, n: usize, algebra: Algebra) -> Result<f64> {
    let tau = Weight::new(vec![t])?;
    check_pearson_scalars(algebra, 1, n, nu, k, &tau, 1.0)?;
    if !(norm_sq >= 0.0) {
        return Err(Error::Parameter(format!("squared norm {norm_sq} must be nonnegative")));
    }
    let ln_q = if t == 0.0 {
        0.0
    } else if norm_sq > 0.0 {
        t * norm_sq.ln()
    } else {
        return Err(Error::Support("R = 0 with nonzero weight".into()));
    };
    pearson_standard_from_parts(algebra, n, 1, nu, k, &tau, norm_sq, ln_q)
}

fn beta_riesz_constant(alg: Algebra, m: usize, n: usize, nu: f64, k: f64, tau: &Weight, rho: f64) -> Result<f64> {
    let beta = alg.beta_f64();
    let half_n_beta = n as f64 * beta / 2.0;
    let exponent = m as f64 * half_n_beta + tau.sum();
    let c = nu * beta / 2.0 + k;
    Ok(ln_gamma(c + exponent) + exponent * rho.ln() - ln_mv_gamma(alg, m, half_n_beta, tau)? - ln_gamma(c))
}

/// Beta-Riesz type I log-density at `B`.
pub fn beta_riesz_logpdf(b: &HermitianPD, p: &BetaRieszParams) -> Result<f64> {
    let (alg, m, n) = (p.algebra(), p.dim(), p.n);
    same_algebra(alg, b.algebra(), "B")?;
    if b.dim() != m {
        return Err(Error::ShapeMismatch(format!("B is {0}x{0}, expected {m}x{m}", b.dim())));
    }
    let g = 1.0 - p.rho * b.trace_against(&p.sigma)?;
    if !(g > 0.0) {
        return Err(Error::Support(format!("1 - rho tr(Sigma^-1 B) = {g} must be positive")));
    }
    let beta = alg.beta_f64();
    let constant = beta_riesz_constant(alg, m, n, p.nu, p.k, &p.tau, p.rho)?
        - n as f64 * beta / 2.0 * p.sigma.ln_det()
        - ln_q_weight(&p.sigma, &p.tau)?;
    let det_power = (n as f64 - m as f64 + 1.0) * beta / 2.0 - 1.0;
    let c = p.nu * beta / 2.0 + p.k;
    Ok(constant + det_power * b.ln_det() + (c - 1.0) * g.ln() + ln_q_weight(b, &p.tau)?)
}

/// Beta-Riesz log-density for `m = 1` at `b > 0`; valid for every algebra.
#[allow(clippy::too_many_arguments)]
pub fn beta_riesz_logpdf_scalar(
    b: f64,
    nu: f64,
    k: f64,
    t: f64,
    rho: f64,
    sigma: f64,
    n: usize,
    algebra: Algebra,
) -> Result<f64> {
    let tau = Weight::new(vec![t])?;
    check_pearson_scalars(algebra, 1, n, nu, k, &tau, rho)?;
    if !(sigma > 0.0) {
        return Err(Error::Parameter(format!("sigma = {sigma} must be positive")));
    }
    if !(b > 0.0) {
        return Err(Error::Support(format!("b = {b} must be positive")));
    }
    let g = 1.0 - rho * b / sigma;
    if !(g > 0.0) {
        return Err(Error::Support(format!("1 - rho b / sigma = {g} must be positive")));
    }
    let beta = algebra.beta_f64();
    let c = nu * beta / 2.0 + k;
    let constant = beta_riesz_constant(algebra, 1, n, nu, k, &tau, rho)? - (n as f64 * beta / 2.0 + t) * sigma.ln();
    Ok(constant + (n as f64 * beta / 2.0 + t - 1.0) * b.ln() + (c - 1.0) * g.ln())
}

/// Parameters shared by the spectral densities (standardized case).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralParams {
    pub nu: f64,
    pub k: f64,
    pub tau: Partition,
    pub n: usize,
    pub algebra: Algebra,
}

impl SpectralParams {
    /// Validates against `m` ordered values.
    fn check(&self, m: usize) -> Result<Weight> {
        self.algebra.require_associative()?;
        if m == 0 {
            return Err(Error::Parameter("at least one value is required".into()));
        }
        if self.tau.len() > m {
            return Err(Error::Parameter(format!("{} has more than m = {m} parts", self.tau)));
        }
        let tau = Weight::new((0..m).map(|i| self.tau.part(i) as f64).collect())?;
        check_pearson_scalars(self.algebra, m, self.n, self.nu, self.k, &tau, 1.0)?;
        Ok(tau)
    }

    /// `ln[pi^{beta m^2/2 + rho} / (Gamma_m[beta m/2] B*_m[nu beta/2, k; n beta/2, tau])]`
    /// minus `ln C_tau(I_m)`.
    fn ln_constant(&self, m: usize, tau: &Weight) -> Result<f64> {
        let alg = self.algebra;
        let beta = alg.beta_f64();
        let pi_power = beta * (m * m) as f64 / 2.0 + alg.rho(m) as f64;
        Ok(pi_power * PI.ln()
            - ln_mv_gamma0(alg, m, beta * m as f64 / 2.0)?
            - ln_beta_star(alg, m, self.nu * beta / 2.0, self.k, self.n as f64 * beta / 2.0, tau)?
            - jack_c_identity(&self.tau, m, alg)?.ln())
    }
}

fn check_ordered(values: &[f64], what: &str) -> Result<()> {
    if values.iter().any(|v| !(*v > 0.0 && *v < 1.0)) {
        return Err(Error::Support(format!("{what} must lie in (0, 1)")));
    }
    if values.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::Support(format!("{what} must be strictly decreasing")));
    }
    Ok(())
}

/// `sum_{i<j} ln(x_i - x_j)` for strictly decreasing `x`.
fn ln_vandermonde(x: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            total += (x[i] - x[j]).ln();
        }
    }
    total
}

/// Joint log-density of the ordered eigenvalues of `R* R`.
pub fn eigenvalues_logpdf(lambda: &[f64], p: &SpectralParams) -> Result<f64> {
    let m = lambda.len();
    let tau = p.check(m)?;
    check_ordered(lambda, "eigenvalues")?;
    let g = 1.0 - lambda.iter().sum::<f64>();
    if !(g > 0.0) {
        return Err(Error::Support(format!("1 - sum(lambda) = {g} must be positive")));
    }
    let beta = p.algebra.beta_f64();
    let c = p.nu * beta / 2.0 + p.k;
    let power = (p.n as f64 - m as f64 + 1.0) * beta / 2.0 - 1.0;
    let zonal = jack_c(&p.tau, lambda, p.algebra)?;
    Ok(p.ln_constant(m, &tau)?
        + power * lambda.iter().map(|l| l.ln()).sum::<f64>()
        + (c - 1.0) * g.ln()
        + beta * ln_vandermonde(lambda)
        + zonal.ln())
}

/// Joint log-density of the ordered singular values of `R`.
pub fn singular_values_logpdf(delta: &[f64], p: &SpectralParams) -> Result<f64> {
    let m = delta.len();
    let tau = p.check(m)?;
    check_ordered(delta, "singular values")?;
    let squares: Vec<f64> = delta.iter().map(|d| d * d).collect();
    let g = 1.0 - squares.iter().sum::<f64>();
    if !(g > 0.0) {
        return Err(Error::Support(format!("1 - sum(delta^2) = {g} must be positive")));
    }
    let beta = p.algebra.beta_f64();
    let c = p.nu * beta / 2.0 + p.k;
    let power = beta * (p.n as f64 - m as f64 + 1.0) - 1.0;
    let zonal = jack_c(&p.tau, &squares, p.algebra)?;
    Ok(m as f64 * LN_2
        + p.ln_constant(m, &tau)?
        + power * delta.iter().map(|d| d.ln()).sum::<f64>()
        + (c - 1.0) * g.ln()
        + beta * ln_vandermonde(&squares)
        + zonal.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Quat;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use statrs::function::gamma::ln_gamma as sr_ln_gamma;

    fn w(v: &[f64]) -> Weight {
        Weight::new(v.to_vec()).unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, alg: Algebra, rows: usize, cols: usize, scale: f64) -> DivMatrix {
        let beta = alg.beta();
        DivMatrix::from_fn(alg, rows, cols, |_, _| {
            let mut q = [0.0; 4];
            for c in q.iter_mut().take(beta) {
                *c = rng.random_range(-scale..scale);
            }
            Quat(q)
        })
        .unwrap()
    }

    fn random_pd(rng: &mut ChaCha8Rng, alg: Algebra, m: usize) -> HermitianPD {
        let x = random_matrix(rng, alg, m + 2, m, 1.0);
        let g = x.gram().add(&DivMatrix::identity(alg, m).unwrap().scale(0.5)).unwrap();
        HermitianPD::new(g).unwrap()
    }

    /// Classical `ln Gamma_m^beta[a]` from the product formula with an external gamma.
    fn classic_ln_mv_gamma(beta: f64, m: usize, a: f64) -> f64 {
        (m * (m - 1)) as f64 * beta / 4.0 * PI.ln()
            + (0..m).map(|i| sr_ln_gamma(a - i as f64 * beta / 2.0)).sum::<f64>()
    }

    /// `(tr(rep(S)^-1 rep(X)^T rep(T)^-1 rep(X)) / beta, ln det rep(S) / beta, ln det rep(T) / beta)`
    fn classical_quadratic(x: &DivMatrix, theta: &HermitianPD, sigma: &HermitianPD) -> (f64, f64, f64) {
        let beta = x.beta() as f64;
        let rx = x.real_representation();
        let rt = theta.matrix().real_representation();
        let rs = sigma.matrix().real_representation();
        let prod: DMatrix<f64> = rs.clone().try_inverse().unwrap() * rx.transpose() * rt.clone().try_inverse().unwrap() * rx;
        (prod.trace() / beta, rs.determinant().ln() / beta, rt.determinant().ln() / beta)
    }

    #[test]
    fn riesz_scalar_examples() {
        let xi = HermitianPD::identity(Algebra::Real, 1).unwrap();
        let p = RieszParams::new(1.0, w(&[0.0]), xi.clone()).unwrap();
        let v = HermitianPD::diagonal(Algebra::Real, &[1.0]).unwrap();
        assert!((riesz_logpdf(&v, &p).unwrap() + 1.0).abs() < 1e-14);
        let p = RieszParams::new(1.0, w(&[1.0]), xi).unwrap();
        let v = HermitianPD::diagonal(Algebra::Real, &[2.0]).unwrap();
        let want = (2.0 * (-2.0f64).exp()).ln();
        assert!((riesz_logpdf(&v, &p).unwrap() - want).abs() < 1e-13);
        assert!((riesz_logpdf_scalar(2.0, 1.0, 1.0, 1.0, Algebra::Real).unwrap() - want).abs() < 1e-13);
        assert!(RieszParams::new(-0.5, w(&[0.0]), HermitianPD::identity(Algebra::Real, 1).unwrap()).is_err());
    }

    #[test]
    fn riesz_scalar_matches_matrix_form() {
        for alg in [Algebra::Real, Algebra::Complex, Algebra::Quaternion] {
            let xi = HermitianPD::diagonal(alg, &[1.7]).unwrap();
            let p = RieszParams::new(2.3, w(&[0.6]), xi).unwrap();
            let v = HermitianPD::diagonal(alg, &[0.9]).unwrap();
            let a = riesz_logpdf(&v, &p).unwrap();
            let b = riesz_logpdf_scalar(0.9, 2.3, 0.6, 1.7, alg).unwrap();
            assert!((a - b).abs() < 1e-13);
        }
        assert!(riesz_logpdf_scalar(0.5, 3.0, 0.0, 1.0, Algebra::Octonion).unwrap().is_finite());
    }

    #[test]
    fn riesz_zero_weight_is_wishart_type() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for alg in [Algebra::Real, Algebra::Complex, Algebra::Quaternion] {
            let beta = alg.beta_f64();
            for m in 1..=3 {
                let xi = random_pd(&mut rng, alg, m);
                let a = (m as f64 - 1.0) * beta / 2.0 + 1.3;
                let p = RieszParams::new(a, Weight::zeros(m), xi.clone()).unwrap();
                for _ in 0..5 {
                    let v = random_pd(&mut rng, alg, m);
                    let rv = v.matrix().real_representation();
                    let rxi = xi.matrix().real_representation();
                    let tr = (rxi.clone().try_inverse().unwrap() * &rv).trace() / beta;
                    let ln_det_v = rv.determinant().ln() / beta;
                    let ln_det_xi = rxi.determinant().ln() / beta;
                    let shift = (m as f64 - 1.0) * beta / 2.0 + 1.0;
                    let want = a * m as f64 * beta.ln() - classic_ln_mv_gamma(beta, m, a) - a * ln_det_xi - beta * tr
                        + (a - shift) * ln_det_v;
                    let got = riesz_logpdf(&v, &p).unwrap();
                    assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "{alg:?} m={m}");
                }
            }
        }
    }

    #[test]
    fn kotz_riesz_scalar_normal() {
        let p = KotzRieszParams::standard(Algebra::Real, 1, 1, w(&[0.0])).unwrap();
        let y = DivMatrix::from_real(1, 1, &[0.0]).unwrap();
        assert!((kotz_riesz_logpdf(&y, &p).unwrap() + 0.5 * PI.ln()).abs() < 1e-14);
        let y = DivMatrix::from_real(1, 1, &[0.8]).unwrap();
        assert!((kotz_riesz_logpdf(&y, &p).unwrap() + 0.5 * PI.ln() + 0.64).abs() < 1e-14);
    }

    #[test]
    fn kotz_riesz_zero_weight_is_matrix_normal() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for alg in [Algebra::Real, Algebra::Complex, Algebra::Quaternion] {
            let beta = alg.beta_f64();
            for (n, m) in [(1, 1), (2, 1), (3, 2), (3, 3)] {
                let mu = random_matrix(&mut rng, alg, n, m, 0.5);
                let theta = random_pd(&mut rng, alg, n);
                let sigma = random_pd(&mut rng, alg, m);
                let p = KotzRieszParams::new(Weight::zeros(m), mu.clone(), theta.clone(), sigma.clone()).unwrap();
                for _ in 0..5 {
                    let y = random_matrix(&mut rng, alg, n, m, 1.5);
                    let (quad, ln_s, ln_t) = classical_quadratic(&y.sub(&mu).unwrap(), &theta, &sigma);
                    let dim = (n * m) as f64 * beta;
                    let want = dim / 2.0 * (beta / PI).ln() - beta * quad - n as f64 * beta / 2.0 * ln_s
                        - m as f64 * beta / 2.0 * ln_t;
                    let got = kotz_riesz_logpdf(&y, &p).unwrap();
                    assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "{alg:?} {n}x{m}");
                }
            }
        }
    }

    #[test]
    fn kotz_riesz_rank_deficient_support() {
        let p = KotzRieszParams::standard(Algebra::Real, 2, 2, w(&[1.0, 1.0])).unwrap();
        let y = DivMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(matches!(kotz_riesz_logpdf(&y, &p), Err(Error::Support(_))));
        let p0 = KotzRieszParams::standard(Algebra::Real, 2, 2, w(&[0.0, 0.0])).unwrap();
        assert!(kotz_riesz_logpdf(&y, &p0).unwrap().is_finite());
    }

    #[test]
    fn pearson_scalar_examples() {
        let p = PearsonIIRieszParams::standard(Algebra::Real, 1, 1, 2.0, 0.0, w(&[0.0])).unwrap();
        for r in [-0.9, -0.3, 0.0, 0.3, 0.75] {
            let c = DivMatrix::from_real(1, 1, &[r]).unwrap();
            assert!((pearson2riesz_logpdf(&c, &p).unwrap() - 0.5f64.ln()).abs() < 1e-14);
        }
        let c = DivMatrix::from_real(1, 1, &[1.0]).unwrap();
        assert!(matches!(pearson2riesz_logpdf(&c, &p), Err(Error::Support(_))));
        for nu in [1.0, 3.0, 5.5, 15.0] {
            let p = PearsonIIRieszParams::standard(Algebra::Real, 1, 1, nu, 0.0, w(&[0.0])).unwrap();
            for r in [-0.6, 0.1, 0.95] {
                let c = DivMatrix::from_real(1, 1, &[r]).unwrap();
                let want = sr_ln_gamma((nu + 1.0) / 2.0) - 0.5 * PI.ln() - sr_ln_gamma(nu / 2.0)
                    + (nu / 2.0 - 1.0) * (1.0 - r * r).ln();
                assert!((pearson2riesz_logpdf(&c, &p).unwrap() - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pearson_zero_weight_is_classical() {
        // tau = 0, k = 0: spherical Pearson II in R^{beta m n}, then affine transform.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for alg in [Algebra::Real, Algebra::Complex, Algebra::Quaternion] {
            let beta = alg.beta_f64();
            for (n, m) in [(1, 1), (2, 2), (3, 2)] {
                let nu = 4.5;
                let rho = 1.7;
                let mu = random_matrix(&mut rng, alg, n, m, 0.1);
                let theta = random_pd(&mut rng, alg, n);
                let sigma = random_pd(&mut rng, alg, m);
                let p = PearsonIIRieszParams::new(nu, 0.0, Weight::zeros(m), rho, mu.clone(), theta.clone(), sigma.clone())
                    .unwrap();
                let dim = (n * m) as f64 * beta;
                let mut checked = 0;
                while checked < 5 {
                    let c = random_matrix(&mut rng, alg, n, m, 0.3).add(&mu).unwrap();
                    let (quad, ln_s, ln_t) = classical_quadratic(&c.sub(&mu).unwrap(), &theta, &sigma);
                    let g = 1.0 - rho * quad;
                    if g <= 0.0 {
                        continue;
                    }
                    let want = sr_ln_gamma((nu * beta + dim) / 2.0) - dim / 2.0 * PI.ln() - sr_ln_gamma(nu * beta / 2.0)
                        + (nu * beta / 2.0 - 1.0) * g.ln()
                        + dim / 2.0 * rho.ln()
                        - n as f64 * beta / 2.0 * ln_s
                        - m as f64 * beta / 2.0 * ln_t;
                    let got = pearson2riesz_logpdf(&c, &p).unwrap();
                    assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "{alg:?} {n}x{m}");
                    checked += 1;
                }
            }
        }
    }

    #[test]
    fn pearson_affine_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for alg in [Algebra::Real, Algebra::Complex, Algebra::Quaternion] {
            let beta = alg.beta_f64();
            let (n, m) = (3, 2);
            let tau = w(&[1.5, 0.5]);
            let mu = random_matrix(&mut rng, alg, n, m, 0.1);
            let theta = random_pd(&mut rng, alg, n);
            let sigma = random_pd(&mut rng, alg, m);
            let rho = 2.5;
            let p = PearsonIIRieszParams::new(3.0, 0.5, tau.clone(), rho, mu.clone(), theta.clone(), sigma.clone()).unwrap();
            let std = PearsonIIRieszParams::standard(alg, n, m, 3.0, 0.5, tau).unwrap();
            let mut checked = 0;
            while checked < 5 {
                let c = random_matrix(&mut rng, alg, n, m, 0.25).add(&mu).unwrap();
                let r = whiten_rect(&c.sub(&mu).unwrap(), &theta, &sigma).unwrap().scale(rho.sqrt());
                let Ok(base) = pearson2riesz_logpdf(&r, &std) else { continue };
                let want = base + (m * n) as f64 * beta / 2.0 * rho.ln() - n as f64 * beta / 2.0 * sigma.ln_det()
                    - m as f64 * beta / 2.0 * theta.ln_det();
                let got = pearson2riesz_logpdf(&c, &p).unwrap();
                assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0));
                checked += 1;
            }
        }
    }

    #[test]
    fn pearson_vector_form_matches_matrix_form() {
        let p = PearsonIIRieszParams::standard(Algebra::Complex, 3, 1, 2.5, 0.4, w(&[1.5])).unwrap();
        let c = DivMatrix::new(Algebra::Complex, 3, 1, vec![0.1, -0.2, 0.3, 0.05, -0.4, 0.2]).unwrap();
        let a = pearson2riesz_logpdf(&c, &p).unwrap();
        let b = pearson2riesz_logpdf_vector(c.frobenius_norm_sq(), 2.5, 0.4, 1.5, 3, Algebra::Complex).unwrap();
        assert!((a - b).abs() < 1e-13);
        assert!(pearson2riesz_logpdf_vector(0.3, 2.0, 0.0, 1.0, 2, Algebra::Octonion).unwrap().is_finite());
    }

    #[test]
    fn beta_riesz_examples() {
        let sigma = HermitianPD::identity(Algebra::Real, 1).unwrap();
        let p = BetaRieszParams::new(2.0, 0.0, w(&[0.0]), 1.0, sigma, 1).unwrap();
        let b = HermitianPD::diagonal(Algebra::Real, &[0.25]).unwrap();
        assert!(beta_riesz_logpdf(&b, &p).unwrap().abs() < 1e-14);
        let b = HermitianPD::diagonal(Algebra::Real, &[1.0]).unwrap();
        assert!(matches!(beta_riesz_logpdf(&b, &p), Err(Error::Support(_))));
    }

    #[test]
    fn beta_riesz_scalar_is_scaled_beta() {
        for alg in [Algebra::Real, Algebra::Complex, Algebra::Quaternion] {
            let beta = alg.beta_f64();
            let (nu, k, t, rho, s, n) = (3.0, 0.5, 1.25, 2.0, 0.8, 2);
            let sigma = HermitianPD::diagonal(alg, &[s]).unwrap();
            let p = BetaRieszParams::new(nu, k, w(&[t]), rho, sigma, n).unwrap();
            let (a, b) = (n as f64 * beta / 2.0 + t, nu * beta / 2.0 + k);
            for x in [0.05, 0.2, 0.35] {
                // x rho / s ~ Beta(a, b)
                let u = x * rho / s;
                let want = sr_ln_gamma(a + b) - sr_ln_gamma(a) - sr_ln_gamma(b) + (a - 1.0) * u.ln()
                    + (b - 1.0) * (1.0 - u).ln()
                    + (rho / s).ln();
                let mat = HermitianPD::diagonal(alg, &[x]).unwrap();
                assert!((beta_riesz_logpdf(&mat, &p).unwrap() - want).abs() < 1e-12);
                let scalar = beta_riesz_logpdf_scalar(x, nu, k, t, rho, s, n, alg).unwrap();
                assert!((scalar - want).abs() < 1e-12);
            }
        }
        assert!(beta_riesz_logpdf_scalar(0.2, 3.0, 0.0, 0.0, 1.0, 1.0, 1, Algebra::Octonion).unwrap().is_finite());
    }

    #[test]
    fn beta_riesz_zero_weight_is_classical_matrix_beta() {
        // tau = 0, k = 0, rho = 1, Sigma = I: Gamma((nu+mn)beta/2) / (Gamma_m[n beta/2] Gamma(nu beta/2))
        // |B|^{(n-m+1)beta/2 - 1} (1 - tr B)^{nu beta/2 - 1}
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for alg in [Algebra::Real, Algebra::Complex, Algebra::Quaternion] {
            let beta = alg.beta_f64();
            let (n, m, nu) = (3usize, 2usize, 2.5);
            let p = BetaRieszParams::new(nu, 0.0, Weight::zeros(m), 1.0, HermitianPD::identity(alg, m).unwrap(), n).unwrap();
            let mut checked = 0;
            while checked < 5 {
                let x = random_matrix(&mut rng, alg, m + 1, m, 0.3);
                let b = HermitianPD::new(x.gram()).unwrap();
                let tr = b.trace();
                if tr >= 1.0 {
                    continue;
                }
                let rb = b.matrix().real_representation();
                let ln_det = rb.determinant().ln() / beta;
                let want = sr_ln_gamma((nu + (m * n) as f64) * beta / 2.0)
                    - classic_ln_mv_gamma(beta, m, n as f64 * beta / 2.0)
                    - sr_ln_gamma(nu * beta / 2.0)
                    + ((n - m + 1) as f64 * beta / 2.0 - 1.0) * ln_det
                    + (nu * beta / 2.0 - 1.0) * (1.0 - tr).ln();
                let got = beta_riesz_logpdf(&b, &p).unwrap();
                assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0));
                checked += 1;
            }
        }
    }

    fn spectral(nu: f64, k: f64, tau: &[u32], n: usize) -> SpectralParams {
        SpectralParams {
            nu,
            k,
            tau: Partition::new(tau.to_vec()).unwrap(),
            n,
            algebra: Algebra::Real,
        }
    }

    #[test]
    fn spectral_scalar_examples() {
        let p = spectral(2.0, 0.0, &[], 1);
        assert!(singular_values_logpdf(&[0.3], &p).unwrap().abs() < 1e-14);
        let p = spectral(5.0, 0.0, &[], 1);
        for d in [0.1f64, 0.5, 0.9] {
            let ln_b = sr_ln_gamma(0.5) + sr_ln_gamma(2.5) - sr_ln_gamma(3.0);
            let want = LN_2 + 1.5 * (1.0 - d * d).ln() - ln_b;
            assert!((singular_values_logpdf(&[d], &p).unwrap() - want).abs() < 1e-13);
        }
    }

    #[test]
    fn eigenvalues_m1_match_beta_riesz() {
        for (nu, k, t, n) in [(3.0, 0.5, 2u32, 2usize), (4.0, 0.0, 0, 3), (2.5, 1.0, 1, 1)] {
            let p = spectral(nu, k, &[t], n);
            for l in [0.1, 0.45, 0.8] {
                let a = eigenvalues_logpdf(&[l], &p).unwrap();
                let b = beta_riesz_logpdf_scalar(l, nu, k, t as f64, 1.0, 1.0, n, Algebra::Real).unwrap();
                assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn singular_and_eigen_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for alg in [Algebra::Real, Algebra::Complex, Algebra::Quaternion] {
            for tau in [vec![], vec![1], vec![2, 1], vec![3, 1, 1]] {
                let p = SpectralParams { algebra: alg, ..spectral(3.5, 0.25, &tau, 4) };
                for _ in 0..10 {
                    let mut d: Vec<f64> = (0..3).map(|_| rng.random_range(0.01..0.55)).collect();
                    d.sort_by(|a, b| b.partial_cmp(a).unwrap());
                    let l: Vec<f64> = d.iter().map(|x| x * x).collect();
                    let lhs = singular_values_logpdf(&d, &p).unwrap();
                    let rhs = eigenvalues_logpdf(&l, &p).unwrap() + d.iter().map(|x| (2.0 * x).ln()).sum::<f64>();
                    assert!((lhs - rhs).abs() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn spectral_support_errors() {
        let p = spectral(3.0, 0.0, &[1], 3);
        assert!(matches!(singular_values_logpdf(&[0.3, 0.5], &p), Err(Error::Support(_))));
        assert!(matches!(singular_values_logpdf(&[0.8, 0.7], &p), Err(Error::Support(_))));
        assert!(matches!(eigenvalues_logpdf(&[0.6, 0.5], &p), Err(Error::Support(_))));
        assert!(matches!(eigenvalues_logpdf(&[0.6], &spectral(3.0, 0.0, &[1, 1], 3)), Err(Error::Parameter(_))));
    }
}
