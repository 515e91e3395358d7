//! State vectors on a truncated Fock space.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::specfn::log_gen_binomial;

/// Relative slack on the admissibility bound, so that `L = M/η` typed with a
/// decimal `η` (e.g. `L = 10`, `η = 0.9`) is not rejected for the last ulp.
const ADMISSIBILITY_RTOL: f64 = 1e-12;

/// Deviation of the squared norm from one beyond which the final
/// renormalization pass is applied.
const RENORMALIZE_THRESHOLD: f64 = 1e-13;

/// Largest tail mass a coherent-state truncation may drop.
const COHERENT_TAIL_LIMIT: f64 = 1e-9;

/// Parameters `(L, M, η)` of a hypergeometric state.
///
/// Admissible when `0 < η < 1`, `M ≥ 1` and `L ≥ max(M/η, M/(1−η))`,
/// equality included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HgsParams {
    #[serde(rename = "L")]
    l: f64,
    #[serde(rename = "M")]
    m: u32,
    eta: f64,
}

impl HgsParams {
    pub fn new(l: f64, m: u32, eta: f64) -> Result<Self> {
        check_eta(eta)?;
        if m == 0 {
            return Err(Error::params("M must be at least 1"));
        }
        if !l.is_finite() {
            return Err(Error::params(format!("L must be finite, got {l}")));
        }
        let l_min = Self::l_min(m, eta);
        if l < l_min * (1.0 - ADMISSIBILITY_RTOL) {
            return Err(Error::params(format!(
                "L = {l} violates L >= max(M/eta, M/(1-eta)) = {l_min} for M = {m}, eta = {eta}"
            )));
        }
        Ok(HgsParams { l, m, eta })
    }

    /// Smallest admissible `L` for the given `M` and `η`.
    pub fn l_min(m: u32, eta: f64) -> f64 {
        let m = m as f64;
        (m / eta).max(m / (1.0 - eta))
    }

    pub fn with_min_l(m: u32, eta: f64) -> Result<Self> {
        check_eta(eta)?;
        Self::new(Self::l_min(m, eta), m, eta)
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Number of red balls `Lη` in the urn picture.
    pub fn l_eta(&self) -> f64 {
        self.l * self.eta
    }

    /// Number of black balls `L(1−η)`.
    pub fn l_one_minus_eta(&self) -> f64 {
        self.l * (1.0 - self.eta)
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta < 1.0 {
        Ok(())
    } else {
        Err(Error::params(format!("eta must lie in (0, 1), got {eta}")))
    }
}

/// Complex amplitudes over Fock levels `0..dim`.
///
/// Normalized on construction. `raw_norm_sq` keeps the squared norm the
/// constructor computed before any renormalization, so the quality of a
/// closed-form construction can still be inspected.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    raw_norm_sq: f64,
}

impl StateVector {
    /// Normalizes an arbitrary nonzero amplitude vector.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::params("state vector needs dim >= 1"));
        }
        if amplitudes
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::params("state amplitudes must be finite"));
        }
        let raw_norm_sq: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if raw_norm_sq == 0.0 {
            return Err(Error::params("state vector has zero norm"));
        }
        Ok(Self::normalized(amplitudes, raw_norm_sq))
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::from_amplitudes(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    fn normalized(mut amplitudes: Vec<Complex64>, raw_norm_sq: f64) -> Self {
        if (raw_norm_sq - 1.0).abs() > RENORMALIZE_THRESHOLD {
            let inv = raw_norm_sq.sqrt().recip();
            for c in &mut amplitudes {
                *c *= inv;
            }
        }
        StateVector {
            amplitudes,
            raw_norm_sq,
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amplitudes.get(n).copied().unwrap_or_default()
    }

    /// Squared norm before the renormalization pass.
    pub fn raw_norm_sq(&self) -> f64 {
        self.raw_norm_sq
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_real(&self) -> bool {
        self.amplitudes.iter().all(|c| c.im == 0.0)
    }

    /// Real parts of the amplitudes.
    pub fn real_parts(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.re).collect()
    }

    /// `|⟨n|ψ⟩|²` for every level.
    pub fn photon_distribution(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Zero-pads to `dim` levels; no-op when already at least that long.
    pub fn padded(&self, dim: usize) -> StateVector {
        let mut amplitudes = self.amplitudes.clone();
        if amplitudes.len() < dim {
            amplitudes.resize(dim, Complex64::default());
        }
        StateVector {
            amplitudes,
            raw_norm_sq: self.raw_norm_sq,
        }
    }

    /// `⟨self|other⟩`, the shorter vector zero-padded.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

#[derive(Serialize, Deserialize)]
struct StateVectorRepr {
    dim: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateVectorRepr {
            dim: self.dim(),
            amplitudes: self.amplitudes.iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = StateVectorRepr::deserialize(deserializer)?;
        if repr.dim != repr.amplitudes.len() {
            return Err(serde::de::Error::custom(format!(
                "dim {} does not match {} amplitudes",
                repr.dim,
                repr.amplitudes.len()
            )));
        }
        let amps = repr
            .amplitudes
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        StateVector::from_amplitudes(amps).map_err(serde::de::Error::custom)
    }
}

/// Log of the hypergeometric probability `C(Lη,n)·C(L(1−η),M−n)/C(L,M)`.
pub(crate) fn hgs_log_probability(params: &HgsParams, n: u32) -> Result<crate::LogValue> {
    let m = params.m() as u64;
    let n = n as u64;
    let red = log_gen_binomial(params.l_eta(), n)?;
    let black = log_gen_binomial(params.l_one_minus_eta(), m - n)?;
    let total = log_gen_binomial(params.l(), m)?;
    Ok(red.mul(black).div(total))
}

/// Amplitudes `H_n^M(η, L)` of the hypergeometric state, `n = 0..=M`.
pub fn hgs_amplitudes(params: &HgsParams) -> Result<StateVector> {
    let mut amps = Vec::with_capacity(params.m() as usize + 1);
    let mut norm_sq = 0.0;
    for n in 0..=params.m() {
        let amp = hgs_log_probability(params, n)?.sqrt().value();
        norm_sq += amp * amp;
        amps.push(Complex64::new(amp, 0.0));
    }
    Ok(StateVector::normalized(amps, norm_sq))
}

/// Amplitudes `[C(M,n) ηⁿ (1−η)^{M−n}]^{1/2}` of the binomial state.
pub fn binomial_amplitudes(m: u32, eta: f64) -> Result<StateVector> {
    check_eta(eta)?;
    if m == 0 {
        return Err(Error::params("M must be at least 1"));
    }
    let ln_eta = eta.ln();
    let ln_rest = (-eta).ln_1p();
    let mut amps = Vec::with_capacity(m as usize + 1);
    let mut norm_sq = 0.0;
    for n in 0..=m {
        let ln_c = log_gen_binomial(m as f64, n as u64)?.log_magnitude;
        let ln_p = ln_c + n as f64 * ln_eta + (m - n) as f64 * ln_rest;
        let amp = (0.5 * ln_p).exp();
        norm_sq += amp * amp;
        amps.push(Complex64::new(amp, 0.0));
    }
    Ok(StateVector::normalized(amps, norm_sq))
}

/// Dimension that keeps a coherent state's truncated tail negligible:
/// mean plus ten standard deviations, plus one.
pub fn coherent_dim(alpha: Complex64) -> usize {
    let mean = alpha.norm_sqr();
    (mean + 10.0 * (mean + 1.0).sqrt()).ceil() as usize + 1
}

/// Coherent state `e^{−|α|²/2} Σ αⁿ/√n! |n⟩` truncated to `dim` levels.
pub fn coherent_amplitudes(alpha: Complex64, dim: usize) -> Result<StateVector> {
    if dim == 0 {
        return Err(Error::params("dim must be at least 1"));
    }
    let mut amps = Vec::with_capacity(dim);
    let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    let mut norm_sq = 0.0;
    for n in 0..dim {
        if n > 0 {
            c = c * alpha / (n as f64).sqrt();
        }
        norm_sq += c.norm_sqr();
        amps.push(c);
    }
    let tail = 1.0 - norm_sq;
    if tail > COHERENT_TAIL_LIMIT {
        return Err(Error::Truncation { dim, tail });
    }
    Ok(StateVector::normalized(amps, norm_sq))
}

/// Fock state `|n⟩` in a `dim`-level space.
pub fn number_state(n: usize, dim: usize) -> Result<StateVector> {
    if n >= dim {
        return Err(Error::Index { n, dim });
    }
    let mut amps = vec![Complex64::default(); dim];
    amps[n] = Complex64::new(1.0, 0.0);
    Ok(StateVector {
        amplitudes: amps,
        raw_norm_sq: 1.0,
    })
}

/// `|⟨a|b⟩|²`, the shorter state zero-padded.
pub fn fidelity(a: &StateVector, b: &StateVector) -> f64 {
    a.inner(b).norm_sqr().min(1.0)
}
