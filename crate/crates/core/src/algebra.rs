//! Operators on the truncated Fock space and the deformed oscillator
//! algebra `𝒜(L, M)` behind the ladder-operator form of the HGS.
//!
//! Everything lives on `span{|0⟩, …, |M⟩}`. Functions of `N` standing to the
//! left of a lowering operator are evaluated at the row (post-action) index.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::{binomial_amplitudes, fidelity, hgs_amplitudes, HgsParams, StateVector};

/// Dense complex square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        OperatorMatrix {
            dim,
            entries: vec![Complex64::default(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn diagonal(values: impl IntoIterator<Item = f64>) -> Self {
        let values: Vec<f64> = values.into_iter().collect();
        let mut m = Self::zeros(values.len());
        for (i, v) in values.into_iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        OperatorMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|&e| e * factor).collect(),
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(
            v.len(),
            self.dim,
            "vector length does not match operator dim"
        );
        (0..self.dim)
            .map(|r| {
                self.entries[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, state: &StateVector) -> Complex64 {
        let psi = state.padded(self.dim);
        let a_psi = self.apply(psi.amplitudes());
        psi.amplitudes()
            .iter()
            .zip(&a_psi)
            .map(|(p, q)| p.conj() * q)
            .sum()
    }

    pub fn commutator(&self, other: &OperatorMatrix) -> OperatorMatrix {
        &(self * other) - &(other * self)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.re.is_finite() && e.im.is_finite())
    }

    /// Leading `size × size` block.
    pub fn leading_block(&self, size: usize) -> OperatorMatrix {
        let size = size.min(self.dim);
        let mut out = Self::zeros(size);
        for r in 0..size {
            for c in 0..size {
                out.set(r, c, self.get(r, c));
            }
        }
        out
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = OperatorMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == Complex64::default() {
                    continue;
                }
                for c in 0..n {
                    out.entries[r * n + c] += a * rhs.entries[k * n + c];
                }
            }
        }
        out
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim, rhs.dim);
        OperatorMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim, rhs.dim);
        OperatorMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `a` with `a[n−1, n] = √n`.
pub fn annihilation_matrix(dim: usize) -> OperatorMatrix {
    let mut a = OperatorMatrix::zeros(dim);
    for n in 1..dim {
        a.set(n - 1, n, real((n as f64).sqrt()));
    }
    a
}

pub fn creation_matrix(dim: usize) -> OperatorMatrix {
    annihilation_matrix(dim).adjoint()
}

/// `N = diag(0, 1, …, dim−1)`, set directly rather than as the truncated `a†a`.
pub fn number_matrix(dim: usize) -> OperatorMatrix {
    OperatorMatrix::diagonal((0..dim).map(|n| n as f64))
}

/// `J_M^+ = √(M−N)·a` on the `(M+1)`-level space.
pub fn jm_plus_matrix(m: u32) -> OperatorMatrix {
    let dim = m as usize + 1;
    let mut j = OperatorMatrix::zeros(dim);
    for n in 1..dim {
        let row = (n - 1) as f64;
        j.set(n - 1, n, real((m as f64 - row).sqrt() * (n as f64).sqrt()));
    }
    j
}

pub fn jm_minus_matrix(m: u32) -> OperatorMatrix {
    jm_plus_matrix(m).adjoint()
}

/// `A_M^− = √(η/(1−η)) · h(N) · J_M^+` with
/// `h(N) = [(L(1−η)−M+N+1)/(Lη−N)]^{1/2}` at the row index.
pub fn am_minus_matrix(params: &HgsParams) -> Result<OperatorMatrix> {
    let m = params.m();
    let eta = params.eta();
    let prefactor = (eta / (1.0 - eta)).sqrt();
    let j = jm_plus_matrix(m);
    let mut a = OperatorMatrix::zeros(j.dim());
    for row in 0..m as usize {
        let r = row as f64;
        let num = params.l_one_minus_eta() - m as f64 + r + 1.0;
        let den = params.l_eta() - r;
        if !(num > 0.0 && den > 0.0) {
            return Err(Error::params(format!(
                "diagonal factor not positive at n = {row}: numerator {num}, denominator {den}"
            )));
        }
        let h = (num / den).sqrt();
        a.set(row, row + 1, j.get(row, row + 1) * (prefactor * h));
    }
    Ok(a)
}

pub fn am_plus_matrix(params: &HgsParams) -> Result<OperatorMatrix> {
    Ok(am_minus_matrix(params)?.adjoint())
}

/// Structure function `F(n)` of `𝒜(L, M)`, i.e. the diagonal of `A_M^+ A_M^−`:
///
/// `F(n) = η [L(1−η)−M+n] n (M−n+1) / [(1−η)(Lη−n+1)]`.
pub fn structure_function(params: &HgsParams, n: i64) -> Result<f64> {
    let m = params.m();
    if n < 0 || n > m as i64 {
        return Err(Error::Range { n, m });
    }
    let eta = params.eta();
    let nf = n as f64;
    let mf = m as f64;
    let num = eta * (params.l_one_minus_eta() - mf + nf) * nf * (mf - nf + 1.0);
    let den = (1.0 - eta) * (params.l_eta() - nf + 1.0);
    Ok(num / den)
}

/// Entrywise maximum deviations of the three defining relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdoDeviations {
    /// `[N, A^±] = ±A^±`
    pub commutator: f64,
    /// `A^+ A^− = F(N)`
    pub product_minus: f64,
    /// `A^− A^+ = F(N+1)`, top level excluded
    pub product_plus: f64,
}

impl GdoDeviations {
    pub fn max(&self) -> f64 {
        self.commutator
            .max(self.product_minus)
            .max(self.product_plus)
    }
}

pub fn verify_gdo_relations(params: &HgsParams) -> Result<GdoDeviations> {
    let m = params.m();
    let dim = m as usize + 1;
    let n_op = number_matrix(dim);
    let lower = am_minus_matrix(params)?;
    let raise = lower.adjoint();

    let dev_lower = (&n_op.commutator(&lower) + &lower).max_abs();
    let dev_raise = (&n_op.commutator(&raise) - &raise).max_abs();

    let mut f_n = Vec::with_capacity(dim);
    for n in 0..dim {
        f_n.push(structure_function(params, n as i64)?);
    }
    let product_minus =
        (&(&raise * &lower) - &OperatorMatrix::diagonal(f_n.iter().copied())).max_abs();

    let lr = &lower * &raise;
    let mut product_plus = 0.0f64;
    for r in 0..dim {
        for c in 0..dim {
            if r == m as usize && c == m as usize {
                continue;
            }
            let expected = if r == c { f_n[r + 1] } else { 0.0 };
            product_plus = product_plus.max((lr.get(r, c) - real(expected)).norm());
        }
    }

    Ok(GdoDeviations {
        commutator: dev_lower.max(dev_raise),
        product_minus,
        product_plus,
    })
}

/// `T = √η N + √(1−η) A_M^−`, whose eigenvector at `√η M` is the HGS.
pub fn ladder_operator(params: &HgsParams) -> Result<OperatorMatrix> {
    let eta = params.eta();
    let dim = params.m() as usize + 1;
    let n_part = number_matrix(dim).scale(real(eta.sqrt()));
    let a_part = am_minus_matrix(params)?.scale(real((1.0 - eta).sqrt()));
    Ok(&n_part + &a_part)
}

/// Binomial-state counterpart `√η N + √(1−η) J_M^+`.
pub fn binomial_ladder_operator(m: u32, eta: f64) -> OperatorMatrix {
    let dim = m as usize + 1;
    let n_part = number_matrix(dim).scale(real(eta.sqrt()));
    let j_part = jm_plus_matrix(m).scale(real((1.0 - eta).sqrt()));
    &n_part + &j_part
}

fn residual(op: &OperatorMatrix, state: &StateVector, eigenvalue: f64) -> f64 {
    op.apply(state.amplitudes())
        .iter()
        .zip(state.amplitudes())
        .map(|(t, c)| (t - c * eigenvalue).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `‖T|ψ⟩ − √η M |ψ⟩‖₂` for `ψ` the HGS.
pub fn verify_ladder_equation(params: &HgsParams) -> Result<f64> {
    let t = ladder_operator(params)?;
    let psi = hgs_amplitudes(params)?;
    Ok(residual(&t, &psi, params.eta().sqrt() * params.m() as f64))
}

/// Same residual for the binomial state and its su(2) ladder operator.
pub fn verify_binomial_ladder_equation(m: u32, eta: f64) -> Result<f64> {
    let t = binomial_ladder_operator(m, eta);
    let psi = binomial_amplitudes(m, eta)?;
    Ok(residual(&t, &psi, eta.sqrt() * m as f64))
}

/// Eigenvector of an upper-triangular matrix for its `index`-th diagonal
/// entry, by back-substitution with `v[index] = 1`, then normalized.
pub fn triangular_eigenvector(t: &OperatorMatrix, index: usize) -> Result<StateVector> {
    let dim = t.dim();
    if index >= dim {
        return Err(Error::Index { n: index, dim });
    }
    let diag: Vec<Complex64> = (0..dim).map(|i| t.get(i, i)).collect();
    for i in 0..dim {
        for j in (i + 1)..dim {
            if diag[i] == diag[j] {
                return Err(Error::DegenerateSpectrum(i, j));
            }
        }
    }
    let lambda = diag[index];
    let mut v = vec![Complex64::default(); dim];
    v[index] = real(1.0);
    for r in (0..index).rev() {
        let s: Complex64 = ((r + 1)..=index).map(|c| t.get(r, c) * v[c]).sum();
        v[r] = -s / (diag[r] - lambda);
    }
    StateVector::from_amplitudes(v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenCheck {
    /// Diagonal of `T`, i.e. `√η·n` for `n = 0..=M`.
    pub eigenvalues: Vec<f64>,
    /// Fidelity between the `√η M` eigenvector and the HGS.
    pub hgs_match_fidelity: f64,
}

pub fn eigensystem_check(params: &HgsParams) -> Result<EigenCheck> {
    let t = ladder_operator(params)?;
    let m = params.m() as usize;
    let eigenvalues = (0..=m).map(|i| t.get(i, i).re).collect();
    let v = triangular_eigenvector(&t, m)?;
    let psi = hgs_amplitudes(params)?;
    Ok(EigenCheck {
        eigenvalues,
        hgs_match_fidelity: fidelity(&v, &psi),
    })
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ContractionTable {
    /// `(L, ‖A_M^− − J_M^+‖_max)` in input order.
    pub rows: Vec<(f64, f64)>,
    /// Inputs that were not admissible for `(M, η)`.
    pub skipped: Vec<(f64, String)>,
}

/// Distance of `A_M^−` from its `L → ∞` limit `J_M^+` along a list of `L`.
pub fn contraction_error(m: u32, eta: f64, l_values: &[f64]) -> ContractionTable {
    let j = jm_plus_matrix(m);
    let mut table = ContractionTable::default();
    for &l in l_values {
        match HgsParams::new(l, m, eta).and_then(|p| am_minus_matrix(&p)) {
            Ok(a) => table.rows.push((l, (&a - &j).max_abs())),
            Err(e) => table.skipped.push((l, e.to_string())),
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(l: f64, m: u32, eta: f64) -> HgsParams {
        HgsParams::new(l, m, eta).unwrap()
    }

    #[test]
    fn ladder_matrices() {
        let a = annihilation_matrix(2);
        assert_eq!(a.get(0, 1), real(1.0));
        assert_eq!(a.get(0, 0), real(0.0));
        assert_eq!(a.get(1, 0), real(0.0));
        assert_eq!(number_matrix(3), OperatorMatrix::diagonal([0.0, 1.0, 2.0]));
    }

    #[test]
    fn canonical_commutator_away_from_edge() {
        let dim = 8;
        let a = annihilation_matrix(dim);
        let c = a.commutator(&a.adjoint());
        for r in 0..dim - 1 {
            for col in 0..dim - 1 {
                let expected = if r == col { 1.0 } else { 0.0 };
                assert!((c.get(r, col) - real(expected)).norm() < 1e-14);
            }
        }
        // N = a†a away from truncation
        let n = &a.adjoint() * &a;
        assert!((&n - &number_matrix(dim)).max_abs() < 1e-14);
    }

    #[test]
    fn adjoint_involution() {
        let a = am_minus_matrix(&p(14.0, 4, 0.3))
            .unwrap()
            .scale(Complex64::new(0.3, -1.1));
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn jm_plus_entries() {
        assert_eq!(jm_plus_matrix(1), annihilation_matrix(2));
        let j = jm_plus_matrix(2);
        assert!((j.get(0, 1).re - 2f64.sqrt()).abs() < 1e-15);
        let m = 6;
        let j = jm_plus_matrix(m);
        let col_m = (m - 1) as usize;
        assert!((j.get(col_m, m as usize).re - (m as f64).sqrt()).abs() < 1e-15);
        assert_eq!(jm_minus_matrix(2), j_adj(2));
    }

    fn j_adj(m: u32) -> OperatorMatrix {
        jm_plus_matrix(m).adjoint()
    }

    #[test]
    fn am_minus_m1_half_is_j() {
        for &l in &[2.0, 7.5, 1e4] {
            let a = am_minus_matrix(&p(l, 1, 0.5)).unwrap();
            assert!((&a - &jm_plus_matrix(1)).max_abs() < 1e-15);
        }
    }

    #[test]
    fn am_minus_bottom_row_and_structure() {
        let a = am_minus_matrix(&p(30.0, 4, 0.4)).unwrap();
        for c in 0..5 {
            assert_eq!(a.get(4, c), real(0.0));
        }
        for r in 0..5 {
            for c in 0..5 {
                if c != r + 1 {
                    assert_eq!(a.get(r, c), real(0.0));
                }
            }
        }
    }

    #[test]
    fn structure_function_values() {
        let params = p(4.0, 2, 0.5);
        assert_eq!(structure_function(&params, 0).unwrap(), 0.0);
        // η(L(1−η)−M+1)·1·2 / ((1−η)(Lη−1+1)) = 0.5·1·2/(0.5·2)
        assert!((structure_function(&params, 1).unwrap() - 1.0).abs() < 1e-15);
        let params = p(12.0, 3, 0.5);
        let expected = 0.5 * 6.0 * 3.0 / (0.5 * (6.0 - 3.0 + 1.0));
        assert!((structure_function(&params, 3).unwrap() - expected).abs() < 1e-14);
        assert_eq!(
            structure_function(&params, 4),
            Err(Error::Range { n: 4, m: 3 })
        );
        assert_eq!(
            structure_function(&params, -1),
            Err(Error::Range { n: -1, m: 3 })
        );
    }

    #[test]
    fn structure_function_is_diagonal_of_product() {
        let params = p(4.0, 2, 0.5);
        let a = am_minus_matrix(&params).unwrap();
        let prod = &a.adjoint() * &a;
        // A_M^− (0,1) entry: √(1)·√(1/2)·√2 = 1
        assert!((a.get(0, 1).re - 1.0).abs() < 1e-15);
        for n in 0..3 {
            let f = structure_function(&params, n as i64).unwrap();
            assert!((prod.get(n, n).re - f).abs() < 1e-14);
        }
    }

    #[test]
    fn gdo_relations_hold() {
        for params in [
            p(4.0, 2, 0.5),
            p(10.0, 5, 0.5),
            p(3.0, 1, 0.4),
            p(1e3, 20, 0.1),
        ] {
            let d = verify_gdo_relations(&params).unwrap();
            assert!(d.max() < 1e-12, "{params:?}: {d:?}");
        }
        let d = verify_gdo_relations(&p(2.5, 1, 0.6)).unwrap();
        assert!(d.commutator < 1e-14);
    }

    #[test]
    fn ladder_equation_residuals() {
        assert!(verify_ladder_equation(&p(10.0, 5, 0.5)).unwrap() < 1e-10);
        assert!(verify_ladder_equation(&p(4.0, 2, 0.5)).unwrap() < 1e-12);
        assert!(verify_binomial_ladder_equation(5, 0.5).unwrap() < 1e-12);
        assert!(verify_binomial_ladder_equation(7, 0.2).unwrap() < 1e-12);
        // the su(2) operator does not carry the HGS
        let t = binomial_ladder_operator(5, 0.5);
        let psi = hgs_amplitudes(&p(10.0, 5, 0.5)).unwrap();
        assert!(residual(&t, &psi, 0.5f64.sqrt() * 5.0) > 1e-3);
    }

    #[test]
    fn eigensystem() {
        let check = eigensystem_check(&p(10.0, 5, 0.5)).unwrap();
        for (n, e) in check.eigenvalues.iter().enumerate() {
            assert!((e - 0.5f64.sqrt() * n as f64).abs() < 1e-15);
        }
        assert!(check.hgs_match_fidelity > 1.0 - 1e-10);

        let eta = 0.3;
        let check = eigensystem_check(&p(5.0, 1, eta)).unwrap();
        assert_eq!(check.eigenvalues.len(), 2);
        assert_eq!(check.eigenvalues[0], 0.0);
        assert!((check.eigenvalues[1] - eta.sqrt()).abs() < 1e-15);

        let t = ladder_operator(&p(10.0, 5, 0.5)).unwrap();
        let v0 = triangular_eigenvector(&t, 0).unwrap();
        assert_eq!(v0.photon_distribution(), vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn degenerate_spectrum_detected() {
        let t = OperatorMatrix::diagonal([1.0, 2.0, 1.0]);
        assert_eq!(
            triangular_eigenvector(&t, 1),
            Err(Error::DegenerateSpectrum(0, 2))
        );
    }

    #[test]
    fn contraction_decreases() {
        let table = contraction_error(5, 0.5, &[1e2, 1e3, 1e4]);
        assert_eq!(table.rows.len(), 3);
        for w in table.rows.windows(2) {
            let ratio = w[0].1 / w[1].1;
            assert!((8.0..=12.0).contains(&ratio), "{table:?}");
        }
        let m1 = contraction_error(1, 0.5, &[2.0, 100.0, 1e6]);
        assert!(m1.rows.iter().all(|&(_, d)| d < 1e-15));
        let skipped = contraction_error(5, 0.5, &[3.0, 100.0]);
        assert_eq!(skipped.rows.len(), 1);
        assert_eq!(skipped.skipped.len(), 1);
    }
}
