//! Special functions used by the state amplitudes and phase-space kernels.
//!
//! Generalized binomial coefficients take a real upper argument, as in
//! `C(Lη, n)` with non-integer `Lη`. Products that would overflow (for
//! instance `C(10⁶, 50)`) are carried as [`LogValue`]s and only
//! exponentiated once a ratio has been formed.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// A nonnegative quantity stored as its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub log_magnitude: f64,
    /// The represented value is exactly zero; `log_magnitude` is then `-inf`.
    pub zero_flag: bool,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        log_magnitude: f64::NEG_INFINITY,
        zero_flag: true,
    };
    pub const ONE: LogValue = LogValue {
        log_magnitude: 0.0,
        zero_flag: false,
    };

    pub fn from_ln(log_magnitude: f64) -> Self {
        LogValue {
            log_magnitude,
            zero_flag: false,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero_flag
    }

    pub fn value(&self) -> f64 {
        if self.zero_flag {
            0.0
        } else {
            self.log_magnitude.exp()
        }
    }

    pub fn mul(self, other: LogValue) -> LogValue {
        if self.zero_flag || other.zero_flag {
            LogValue::ZERO
        } else {
            LogValue::from_ln(self.log_magnitude + other.log_magnitude)
        }
    }

    /// `self / other`; dividing by zero yields `+inf` in the log.
    pub fn div(self, other: LogValue) -> LogValue {
        if self.zero_flag {
            LogValue::ZERO
        } else {
            LogValue::from_ln(self.log_magnitude - other.log_magnitude)
        }
    }

    pub fn sqrt(self) -> LogValue {
        if self.zero_flag {
            LogValue::ZERO
        } else {
            LogValue::from_ln(0.5 * self.log_magnitude)
        }
    }
}

/// `α(α−1)⋯(α−n+1)/n!` by direct product; `1` for `n = 0`.
///
/// Total for every real `α`, including the signed-factor regime `α < n − 1`.
pub fn gen_binomial(alpha: f64, n: u64) -> f64 {
    let mut acc = 1.0;
    for i in 0..n {
        acc *= (alpha - i as f64) / (i + 1) as f64;
    }
    acc
}

const RESCALE_EXP: i32 = 500;

/// Log of `gen_binomial(alpha, n)` for `alpha ≥ n − 1`.
///
/// The product is accumulated as a mantissa rescaled by powers of two, so
/// the only logarithm taken is of the final mantissa. This keeps the
/// relative error at the level of the direct product.
pub fn log_gen_binomial(alpha: f64, n: u64) -> Result<LogValue> {
    if n == 0 {
        return Ok(LogValue::ONE);
    }
    if alpha < (n - 1) as f64 {
        return Err(Error::Domain { alpha, n });
    }
    let hi = 2f64.powi(RESCALE_EXP);
    let lo = 2f64.powi(-RESCALE_EXP);
    let mut mantissa = 1.0f64;
    let mut scale = 0i64;
    for i in 0..n {
        let factor = alpha - i as f64;
        if factor == 0.0 {
            return Ok(LogValue::ZERO);
        }
        mantissa *= factor / (i + 1) as f64;
        if mantissa > hi {
            mantissa *= lo;
            scale += 1;
        } else if mantissa < lo {
            mantissa *= hi;
            scale -= 1;
        }
    }
    let log = mantissa.ln() + (scale * RESCALE_EXP as i64) as f64 * std::f64::consts::LN_2;
    Ok(LogValue::from_ln(log))
}

/// Generalized Laguerre polynomial `L_n^α(x)` by forward recurrence.
pub fn laguerre(n: u64, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `|Σₙ C(α,n) C(β,M−n) − C(α+β,M)|`, evaluated term by term through the
/// log-domain binomials. A self-test of this module.
pub fn vandermonde_identity_gap(alpha: f64, beta: f64, m: u64) -> Result<f64> {
    let mut lhs = 0.0;
    for n in 0..=m {
        lhs += log_gen_binomial(alpha, n)?
            .mul(log_gen_binomial(beta, m - n)?)
            .value();
    }
    let rhs = log_gen_binomial(alpha + beta, m)?.value();
    Ok((lhs - rhs).abs())
}

const LN_FACTORIAL_TABLE: usize = 2048;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACTORIAL_TABLE);
        let mut acc = 0.0;
        t.push(0.0);
        for j in 1..LN_FACTORIAL_TABLE {
            acc += (j as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln n!`, tabulated for small `n` and summed beyond.
pub fn ln_factorial(n: u64) -> f64 {
    let table = ln_factorial_table();
    if (n as usize) < table.len() {
        table[n as usize]
    } else {
        let base = table[table.len() - 1];
        base + ((table.len() as u64)..=n)
            .map(|j| (j as f64).ln())
            .sum::<f64>()
    }
}

/// `½ ln(small!/large!)` with `small ≤ large`; the log of `√(small!/large!)`.
pub(crate) fn half_ln_factorial_ratio(small: u64, large: u64) -> f64 {
    debug_assert!(small <= large);
    if large - small <= 32 {
        -0.5 * ((small + 1)..=large).map(|j| (j as f64).ln()).sum::<f64>()
    } else {
        0.5 * (ln_factorial(small) - ln_factorial(large))
    }
}
