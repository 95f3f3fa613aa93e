//! Importance-sampling estimate of total probability mass.

use rayon::prelude::*;

use super::CheckReport;
use crate::error::{Error, Result};
use crate::sampling::RandomStream;

/// Number of independent chunks; fixed so results do not depend on the
/// thread count.
const CHUNKS: usize = 64;

/// A density whose mass is estimated against a proposal.
pub trait McTarget: Sync {
    type Point;

    /// Draws a proposal point and returns it with its proposal log-density.
    fn propose(&self, rng: &mut RandomStream) -> Result<(Self::Point, f64)>;

    /// Target log-density; `Error::Support` counts as zero density.
    fn logpdf(&self, x: &Self::Point) -> Result<f64>;
}

#[derive(Default, Clone, Copy)]
struct Sums {
    w: f64,
    w2: f64,
}

/// Estimates `int target` by `mean(target / proposal)` over `n` draws.
/// The report is inconclusive when the effective sample size falls
/// below 1% of `n`.
pub fn mc_normalize<T: McTarget>(name: &str, target: &T, n: usize, seed: u64) -> CheckReport {
    let per_chunk = n.div_ceil(CHUNKS);
    let chunks: Vec<Result<Sums>> = (0..CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = RandomStream::substream(seed, chunk as u64);
            let count = per_chunk.min(n.saturating_sub(chunk * per_chunk));
            let mut sums = Sums::default();
            for _ in 0..count {
                let (x, lq) = target.propose(&mut rng)?;
                let w = match target.logpdf(&x) {
                    Ok(lp) => (lp - lq).exp(),
                    Err(Error::Support(_)) => 0.0,
                    Err(e) => return Err(e),
                };
                sums.w += w;
                sums.w2 += w * w;
            }
            Ok(sums)
        })
        .collect();
    let mut total = Sums::default();
    for c in chunks {
        match c {
            Ok(s) => {
                total.w += s.w;
                total.w2 += s.w2;
            }
            Err(e) => {
                return CheckReport::failed(name, super::CheckKind::MonteCarlo, e.to_string()).with_seed(seed);
            }
        }
    }
    let nf = n as f64;
    let mean = total.w / nf;
    let var = (total.w2 / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
    let stderr = (var / nf).sqrt();
    let ess = if total.w2 > 0.0 { total.w * total.w / total.w2 } else { 0.0 };
    let mut report = CheckReport::monte_carlo(name, mean, 1.0, stderr, n, seed);
    if ess < 0.01 * nf {
        report.pass = false;
        report.inconclusive = true;
        report.note = Some(format!("effective sample size {ess:.0} below 1% of {n}"));
    } else {
        report.note = Some(format!("effective sample size {ess:.0}"));
    }
    report
}
