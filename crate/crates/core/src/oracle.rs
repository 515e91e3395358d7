//! Brute-force references that share no code path with the closed forms
//! they check: exact urn-model probabilities in big-integer arithmetic,
//! textbook pmfs, and the displacement operator as a matrix exponential.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::{annihilation_matrix, OperatorMatrix};
use crate::error::{Error, Result};

/// A pot of `red + black` balls from which `draw` are taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UrnSpec {
    pub red: u64,
    pub black: u64,
    pub draw: u64,
}

impl UrnSpec {
    pub fn new(red: u64, black: u64, draw: u64) -> Result<Self> {
        if draw > red + black {
            return Err(Error::params(format!(
                "cannot draw {draw} balls from {}",
                red + black
            )));
        }
        Ok(UrnSpec { red, black, draw })
    }
}

/// Exact `C(n, k)`; zero when `k > n`.
pub fn binomial_exact(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `q_n = C(red, n) C(black, draw−n) / C(red+black, draw)` as exact rationals.
pub fn urn_distribution_exact(spec: &UrnSpec) -> Vec<BigRational> {
    let total = BigInt::from(binomial_exact(spec.red + spec.black, spec.draw));
    (0..=spec.draw)
        .map(|n| {
            let ways = if n > spec.red || spec.draw - n > spec.black {
                BigUint::zero()
            } else {
                binomial_exact(spec.red, n) * binomial_exact(spec.black, spec.draw - n)
            };
            BigRational::new(BigInt::from(ways), total.clone())
        })
        .collect()
}

/// [`urn_distribution_exact`] converted to `f64` at the end.
pub fn urn_distribution(spec: &UrnSpec) -> Vec<f64> {
    urn_distribution_exact(spec)
        .iter()
        .map(|q| q.to_f64().unwrap_or(f64::NAN))
        .collect()
}

/// Binomial pmf by plain products.
pub fn binomial_pmf(m: u32, eta: f64) -> Vec<f64> {
    let mut coeff = 1.0f64;
    (0..=m)
        .map(|n| {
            if n > 0 {
                coeff = coeff * (m - n + 1) as f64 / n as f64;
            }
            coeff * eta.powi(n as i32) * (1.0 - eta).powi((m - n) as i32)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonPmf {
    /// `p_n` for `n < cutoff`.
    pub probabilities: Vec<f64>,
    /// `1 − Σ p_n` over the kept entries.
    pub tail_mass: f64,
}

pub fn poisson_pmf(lambda: f64, cutoff: usize) -> PoissonPmf {
    let mut p = (-lambda).exp();
    let mut probabilities = Vec::with_capacity(cutoff);
    for n in 0..cutoff {
        if n > 0 {
            p *= lambda / n as f64;
        }
        probabilities.push(p);
    }
    let tail_mass = 1.0 - probabilities.iter().sum::<f64>();
    PoissonPmf {
        probabilities,
        tail_mass,
    }
}

/// Total-variation distance `½ Σ |p_n − q_n|`, the shorter sequence zero-padded.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    0.5 * (0..len)
        .map(|i| (p.get(i).copied().unwrap_or(0.0) - q.get(i).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}

const EXPM_TERM_TARGET: f64 = 1e-17;
const EXPM_MONITOR: f64 = 1e-14;
const EXPM_MAX_TERMS: usize = 60;

/// `D(β) = exp(β a† − β* a)` on a `dim`-level space by scaling and squaring
/// around a Taylor core.
///
/// Only the leading block well inside `dim` approximates the untruncated
/// operator; callers size `dim` generously and compare that block.
pub fn displacement_by_expm(beta: Complex64, dim: usize) -> Result<OperatorMatrix> {
    let needed = 4.0 * (beta.norm_sqr() + 1.0);
    if (dim as f64) < needed {
        return Err(Error::params(format!(
            "dim {dim} below truncation margin 4(|beta|^2 + 1) = {needed}"
        )));
    }
    let a = annihilation_matrix(dim);
    let generator = &a.adjoint().scale(beta) - &a.scale(beta.conj());

    let row_norm = (0..dim)
        .map(|r| (0..dim).map(|c| generator.get(r, c).norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if row_norm > 0.5 {
        (row_norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = generator.scale(Complex64::new(0.5f64.powi(squarings as i32), 0.0));

    let mut sum = OperatorMatrix::identity(dim);
    let mut term = OperatorMatrix::identity(dim);
    let mut last = f64::INFINITY;
    for j in 1..=EXPM_MAX_TERMS {
        term = (&term * &scaled).scale(Complex64::new(1.0 / j as f64, 0.0));
        sum = &sum + &term;
        last = term.max_abs();
        if last < EXPM_TERM_TARGET {
            break;
        }
    }
    if last > EXPM_MONITOR {
        return Err(Error::Convergence {
            what: "matrix exponential",
            detail: format!("last Taylor term {last:e} after {EXPM_MAX_TERMS} terms"),
        });
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}
