//! Zonal spherical functions `C_kappa^beta`, i.e. Jack polynomials with
//! parameter `alpha = 2 / beta` in the "C" normalization
//! `sum_{kappa |- k} C_kappa(x) = (x_1 + ... + x_m)^k`.
//!
//! Polynomials are expanded in monomial symmetric functions through the
//! dominance-order recurrence that follows from the Laplace-Beltrami
//! eigen-equation; expansions are cached per `(kappa, m, beta)`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::specfun::Weight;

pub const DEFAULT_MAX_DEGREE: u32 = 12;

/// Integer partition with trailing zeros removed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Jack(format!("parts must be nonincreasing: {parts:?}")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Converts a real weight whose components are nonincreasing
    /// nonnegative integers.
    pub fn from_weight(w: &Weight) -> Result<Self> {
        let mut parts = Vec::with_capacity(w.len());
        for &k in w.components() {
            if k < 0.0 || k.fract() != 0.0 || k > u32::MAX as f64 {
                return Err(Error::Jack(format!(
                    "weight component {k} is not a nonnegative integer"
                )));
            }
            parts.push(k as u32);
        }
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of positive parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.part(0) as usize;
        let parts = (0..width)
            .map(|j| self.0.iter().filter(|&&p| p as usize > j).count() as u32)
            .collect();
        Partition(parts)
    }

    /// `self <= other` in dominance order (same degree assumed).
    pub fn dominated_by(&self, other: &Partition) -> bool {
        let len = self.len().max(other.len());
        let (mut a, mut b) = (0u32, 0u32);
        for i in 0..len {
            a += self.part(i);
            b += other.part(i);
            if a > b {
                return false;
            }
        }
        true
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `k` into at most `max_parts` parts, in reverse
/// lexicographic order.
pub fn enumerate_partitions(k: u32, max_parts: usize) -> Vec<Partition> {
    fn rec(remaining: u32, cap: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=remaining.min(cap)).rev() {
            prefix.push(p);
            rec(remaining - p, p, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, max_parts, &mut Vec::new(), &mut out);
    out
}

fn alpha_for(algebra: Algebra) -> Result<f64> {
    match algebra {
        Algebra::Real | Algebra::Complex | Algebra::Quaternion => Ok(2.0 / algebra.beta_f64()),
        Algebra::Octonion => Err(Error::UnsupportedAlgebra(
            "zonal spherical functions are only provided for beta = 1, 2, 4".into(),
        )),
    }
}

/// `sum_i k_i (k_i - 1 - (2 / alpha)(i - 1))`
fn rho(p: &[u32], alpha: f64) -> f64 {
    p.iter()
        .enumerate()
        .map(|(i, &k)| {
            let k = k as f64;
            k * (k - 1.0 - 2.0 / alpha * i as f64)
        })
        .sum()
}

/// Leading coefficient of `C_kappa` on `m_kappa`:
/// `alpha^k k! / prod_{cells} (alpha * arm + leg + alpha)`.
fn leading_coefficient(kappa: &Partition, alpha: f64) -> f64 {
    let conj = kappa.conjugate();
    let mut value = 1.0;
    let mut step = 1.0;
    for (i, &row) in kappa.parts().iter().enumerate() {
        for j in 0..row as usize {
            let arm = (row as usize - j - 1) as f64;
            let leg = (conj.part(j) as usize - i - 1) as f64;
            value *= alpha * step / (alpha * arm + leg + alpha);
            step += 1.0;
        }
    }
    value
}

/// Monomial expansion `C_kappa = sum_mu c_mu m_mu` restricted to partitions
/// with at most `m` parts.
fn expand(kappa: &Partition, m: usize, alpha: f64) -> Vec<(Partition, f64)> {
    let candidates: Vec<Partition> = enumerate_partitions(kappa.degree(), m)
        .into_iter()
        .filter(|mu| mu.dominated_by(kappa))
        .collect();
    let rho_kappa = rho(kappa.parts(), alpha);
    let mut coeffs: HashMap<Partition, f64> = HashMap::with_capacity(candidates.len());
    let mut out = Vec::with_capacity(candidates.len());
    for mu in candidates {
        let c = if &mu == kappa {
            leading_coefficient(kappa, alpha)
        } else {
            let parts = mu.parts();
            let mut acc = 0.0;
            for i in 0..parts.len() {
                for j in (i + 1)..parts.len() {
                    for t in 1..=parts[j] {
                        let mut lambda = parts.to_vec();
                        lambda[i] += t;
                        lambda[j] -= t;
                        lambda.sort_unstable_by(|a, b| b.cmp(a));
                        let lambda = Partition::new(lambda).expect("sorted");
                        if let Some(c_lambda) = coeffs.get(&lambda) {
                            acc += (parts[i] - parts[j] + 2 * t) as f64 * c_lambda;
                        }
                    }
                }
            }
            (2.0 / alpha) * acc / (rho_kappa - rho(parts, alpha))
        };
        coeffs.insert(mu.clone(), c);
        out.push((mu, c));
    }
    out
}

/// Monomial symmetric function `m_mu(x)`: the sum over distinct
/// rearrangements of the exponent vector `mu` padded with zeros.
pub fn monomial_symmetric(mu: &Partition, x: &[f64]) -> f64 {
    let n = x.len();
    if mu.len() > n {
        return 0.0;
    }
    let mut exps: Vec<u32> = (0..n).map(|i| mu.part(i)).collect();
    exps.sort_unstable();
    let mut total = 0.0;
    loop {
        total += exps
            .iter()
            .zip(x)
            .map(|(&e, &xi)| xi.powi(e as i32))
            .product::<f64>();
        if !next_permutation(&mut exps) {
            break;
        }
    }
    total
}

fn next_permutation(v: &mut [u32]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

type CacheKey = (Partition, usize, usize);

/// Jack evaluator with a shared coefficient cache. Readers proceed
/// concurrently; insertion takes the write lock.
pub struct JackEngine {
    max_degree: u32,
    cache: RwLock<HashMap<CacheKey, Arc<Vec<(Partition, f64)>>>>,
}

impl JackEngine {
    pub fn new(max_degree: u32) -> Self {
        JackEngine {
            max_degree,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Monomial coefficients of `C_kappa^beta` over partitions with at most `m` parts.
    pub fn expansion(&self, kappa: &Partition, m: usize, algebra: Algebra) -> Result<Arc<Vec<(Partition, f64)>>> {
        let alpha = alpha_for(algebra)?;
        if kappa.degree() > self.max_degree {
            return Err(Error::Jack(format!(
                "degree {} of {kappa} exceeds the cap {}",
                kappa.degree(),
                self.max_degree
            )));
        }
        let key = (kappa.clone(), m, algebra.beta());
        if let Some(hit) = self.cache.read().expect("jack cache poisoned").get(&key) {
            return Ok(Arc::clone(hit));
        }
        let computed = Arc::new(expand(kappa, m, alpha));
        let mut guard = self.cache.write().expect("jack cache poisoned");
        Ok(Arc::clone(guard.entry(key).or_insert(computed)))
    }

    /// `C_kappa^beta(diag(x))`; zero when `kappa` has more parts than `x`.
    pub fn eval(&self, kappa: &Partition, x: &[f64], algebra: Algebra) -> Result<f64> {
        alpha_for(algebra)?;
        if x.is_empty() {
            return Err(Error::Jack("at least one variable is required".into()));
        }
        if kappa.len() > x.len() {
            return Ok(0.0);
        }
        let expansion = self.expansion(kappa, x.len(), algebra)?;
        Ok(expansion
            .iter()
            .map(|(mu, c)| c * monomial_symmetric(mu, x))
            .sum())
    }

    /// `C_kappa^beta(I_m)`.
    pub fn eval_identity(&self, kappa: &Partition, m: usize, algebra: Algebra) -> Result<f64> {
        self.eval(kappa, &vec![1.0; m], algebra)
    }
}

impl Default for JackEngine {
    fn default() -> Self {
        JackEngine::new(DEFAULT_MAX_DEGREE)
    }
}

fn shared_engine() -> &'static JackEngine {
    static ENGINE: OnceLock<JackEngine> = OnceLock::new();
    ENGINE.get_or_init(JackEngine::default)
}

/// `C_kappa^beta(diag(x))` through the process-wide engine.
pub fn jack_c(kappa: &Partition, x: &[f64], algebra: Algebra) -> Result<f64> {
    shared_engine().eval(kappa, x, algebra)
}

/// `C_kappa^beta(I_m)` through the process-wide engine.
pub fn jack_c_identity(kappa: &Partition, m: usize, algebra: Algebra) -> Result<f64> {
    shared_engine().eval_identity(kappa, m, algebra)
}
