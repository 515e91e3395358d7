//! Photon statistics and quadrature squeezing.
//!
//! Two independent routes produce a [`PhotonStatistics`]:
//! [`closed_form_stats`] evaluates the analytic expressions in `(L, M, η)`,
//! while [`direct_stats`] sums over the amplitudes and uses quadrature
//! operator matrices. The test suite holds them against each other.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{annihilation_matrix, OperatorMatrix};
use crate::error::Result;
use crate::specfn::{ln_factorial, log_gen_binomial};
use crate::states::{binomial_amplitudes, hgs_amplitudes, HgsParams, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhotonStatistics {
    pub mean: f64,
    pub second_moment: f64,
    pub variance: f64,
    pub weakening_factor: f64,
    pub mandel_q: f64,
    pub g2: f64,
    pub s_x: f64,
    pub s_p: f64,
}

impl PhotonStatistics {
    /// `(1 + S_x)(1 + S_p)`; at least one by the uncertainty relation.
    pub fn heisenberg_product(&self) -> f64 {
        (1.0 + self.s_x) * (1.0 + self.s_p)
    }

    /// Field-by-field pairs, in declaration order.
    pub fn fields(&self) -> [(&'static str, f64); 8] {
        [
            ("mean", self.mean),
            ("second_moment", self.second_moment),
            ("variance", self.variance),
            ("weakening_factor", self.weakening_factor),
            ("mandel_q", self.mandel_q),
            ("g2", self.g2),
            ("s_x", self.s_x),
            ("s_p", self.s_p),
        ]
    }
}

/// Expansion coefficients of `a^order |L, M, η⟩` in the Fock basis,
/// `k = 0..=M−order`. Empty when `order > M`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoweringCoefficients {
    pub order: u32,
    pub coefficients: Vec<f64>,
}

pub fn closed_form_stats(params: &HgsParams) -> Result<PhotonStatistics> {
    let l = params.l();
    let m = params.m() as f64;
    let eta = params.eta();

    let mean = m * eta;
    let second_moment = m * eta * (l + l * eta * m - l * eta - m) / (l - 1.0);
    let weakening_factor = (l - m) / (l - 1.0);
    let variance = eta * (1.0 - eta) * m * weakening_factor;
    let mandel_q = (1.0 - eta) * weakening_factor - 1.0;
    let g2 = if params.m() == 1 {
        0.0
    } else {
        (m - 1.0) / m * (l * eta - 1.0) / (l * eta - eta)
    };
    let (s_x, s_p) = squeezing_indices(params)?;
    Ok(PhotonStatistics {
        mean,
        second_moment,
        variance,
        weakening_factor,
        mandel_q,
        g2,
        s_x,
        s_p,
    })
}

/// Statistics of `state` by summation and operator matrices, with the
/// weakening factor taken relative to the binomial variance of `params`.
pub fn direct_stats(state: &StateVector, params: &HgsParams) -> PhotonStatistics {
    direct_stats_relative_to(state, params.m(), params.eta())
}

/// [`direct_stats`] for any state; `m` and `eta` only enter through the
/// binomial reference variance `η(1−η)M` of the weakening factor.
pub fn direct_stats_relative_to(state: &StateVector, m: u32, eta: f64) -> PhotonStatistics {
    let dist = state.photon_distribution();
    let mean: f64 = dist.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    let second_moment: f64 = dist
        .iter()
        .enumerate()
        .map(|(n, p)| (n * n) as f64 * p)
        .sum();
    let variance: f64 = dist
        .iter()
        .enumerate()
        .map(|(n, p)| (n as f64 - mean).powi(2) * p)
        .sum();
    let factorial_moment: f64 = dist
        .iter()
        .enumerate()
        .map(|(n, p)| (n * n.saturating_sub(1)) as f64 * p)
        .sum();

    let (dx2, dp2) = quadrature_variances(state);

    PhotonStatistics {
        mean,
        second_moment,
        variance,
        weakening_factor: variance / (eta * (1.0 - eta) * m as f64),
        mandel_q: (variance - mean) / mean,
        g2: factorial_moment / (mean * mean),
        s_x: 2.0 * dx2 - 1.0,
        s_p: 2.0 * dp2 - 1.0,
    }
}

/// `(⟨Δx²⟩, ⟨Δp²⟩)` with `x = (a†+a)/√2`, `p = i(a†−a)/√2`.
///
/// The state is embedded one level higher so that `x|ψ⟩` and `p|ψ⟩` are not
/// affected by the truncation; second moments are then `‖x|ψ⟩‖²`.
pub fn quadrature_variances(state: &StateVector) -> (f64, f64) {
    let dim = state.dim() + 1;
    let psi = state.padded(dim);
    let a = annihilation_matrix(dim);
    let ad = a.adjoint();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x = (&ad + &a).scale(num_complex::Complex64::new(s, 0.0));
    let p = (&ad - &a).scale(num_complex::Complex64::new(0.0, s));

    let variance = |op: &OperatorMatrix| {
        let v = op.apply(psi.amplitudes());
        let first: f64 = psi
            .amplitudes()
            .iter()
            .zip(&v)
            .map(|(c, w)| (c.conj() * w).re)
            .sum();
        let second: f64 = v.iter().map(|w| w.norm_sqr()).sum();
        second - first * first
    };
    (variance(&x), variance(&p))
}

/// `√((k+order)!/k!) · H_{k+order}`, the direct action of `a^order`.
pub fn lowering_coefficients(params: &HgsParams, order: u32) -> Result<LoweringCoefficients> {
    let h = hgs_amplitudes(params)?.real_parts();
    Ok(LoweringCoefficients {
        order,
        coefficients: lowering_from_amplitudes(&h, order),
    })
}

fn lowering_from_amplitudes(h: &[f64], order: u32) -> Vec<f64> {
    let order = order as usize;
    if order >= h.len() {
        return Vec::new();
    }
    (0..h.len() - order)
        .map(|k| {
            let ln_ratio = ln_factorial((k + order) as u64) - ln_factorial(k as u64);
            (0.5 * ln_ratio).exp() * h[k + order]
        })
        .collect()
}

/// The same coefficients from the binomial expansion of `a^order|ψ⟩`:
/// `C(L,M)^{−1/2} [Lη(Lη−1)⋯(Lη−order+1)]^{1/2} [C(Lη−order,k) C(L(1−η),M−order−k)]^{1/2}`.
pub fn lowering_coefficients_binomial_form(
    params: &HgsParams,
    order: u32,
) -> Result<LoweringCoefficients> {
    let m = params.m();
    if order > m {
        return Ok(LoweringCoefficients {
            order,
            coefficients: Vec::new(),
        });
    }
    let l_eta = params.l_eta();
    let ln_falling: f64 = (0..order).map(|i| (l_eta - i as f64).ln()).sum();
    let ln_total = log_gen_binomial(params.l(), m as u64)?.log_magnitude;
    let top = (m - order) as u64;
    let mut coefficients = Vec::with_capacity(top as usize + 1);
    for k in 0..=top {
        let red = log_gen_binomial(l_eta - order as f64, k)?;
        let black = log_gen_binomial(params.l_one_minus_eta(), top - k)?;
        let body = red.mul(black);
        coefficients.push(if body.is_zero() {
            0.0
        } else {
            (0.5 * (ln_falling + body.log_magnitude - ln_total)).exp()
        });
    }
    Ok(LoweringCoefficients {
        order,
        coefficients,
    })
}

/// `(S_x, S_p)` of the HGS:
///
/// `S_x = 2 Σ H_n H̃_n + 2Mη − 4 (Σ H_n H̄_n)²`, `S_p = 2Mη − 2 Σ H_n H̃_n`.
pub fn squeezing_indices(params: &HgsParams) -> Result<(f64, f64)> {
    let h = hgs_amplitudes(params)?.real_parts();
    Ok(squeezing_from_real_amplitudes(
        &h,
        params.m() as f64 * params.eta(),
    ))
}

/// Squeezing indices of the binomial state `|M, η⟩`, same formulas.
pub fn binomial_squeezing_indices(m: u32, eta: f64) -> Result<(f64, f64)> {
    let h = binomial_amplitudes(m, eta)?.real_parts();
    Ok(squeezing_from_real_amplitudes(&h, m as f64 * eta))
}

fn squeezing_from_real_amplitudes(h: &[f64], mean: f64) -> (f64, f64) {
    let bar = lowering_from_amplitudes(h, 1);
    let tilde = lowering_from_amplitudes(h, 2);
    let a1: f64 = h.iter().zip(&bar).map(|(x, y)| x * y).sum();
    let a2: f64 = h.iter().zip(&tilde).map(|(x, y)| x * y).sum();
    let s_x = 2.0 * a2 + 2.0 * mean - 4.0 * a1 * a1;
    let s_p = 2.0 * mean - 2.0 * a2;
    (s_x, s_p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "Sx")]
    pub s_x: f64,
    #[serde(rename = "Sp")]
    pub s_p: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
    /// Inadmissible `L` values with the reason they were dropped.
    pub skipped: Vec<(f64, String)>,
}

/// `S_x`, `S_p` along a list of `L` values; rows keep input order.
pub fn squeezing_scan(m: u32, eta: f64, l_values: &[f64]) -> ScanTable {
    let results: Vec<(f64, Result<(f64, f64)>)> = l_values
        .par_iter()
        .map(|&l| {
            (
                l,
                HgsParams::new(l, m, eta).and_then(|p| squeezing_indices(&p)),
            )
        })
        .collect();
    let mut table = ScanTable::default();
    for (l, r) in results {
        match r {
            Ok((s_x, s_p)) => table.rows.push(ScanRow { l, s_x, s_p }),
            Err(e) => table.skipped.push((l, e.to_string())),
        }
    }
    table
}

/// Relative-or-absolute closeness used when comparing the two routes.
pub fn agree(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Largest field-wise disagreement between two records, scaled as in [`agree`].
pub fn max_disagreement(a: &PhotonStatistics, b: &PhotonStatistics) -> (&'static str, f64) {
    a.fields()
        .iter()
        .zip(b.fields())
        .map(|(&(name, x), (_, y))| (name, (x - y).abs() / x.abs().max(y.abs()).max(1.0)))
        .fold(
            ("mean", 0.0),
            |acc, cur| if cur.1 > acc.1 { cur } else { acc },
        )
}
