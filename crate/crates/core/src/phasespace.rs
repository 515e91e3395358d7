//! Q and Wigner quasiprobabilities over the `β = x + iy` plane.

use std::f64::consts::{FRAC_2_PI, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfn::{half_ln_factorial_ratio, laguerre};
use crate::states::StateVector;

/// Per-point tolerance on the truncated Wigner series.
pub const DEFAULT_WIGNER_TOL: f64 = 1e-9;

/// Hard cap on the Wigner series index `k`.
pub const WIGNER_K_CAP: usize = 500;

/// Consecutive `k` terms that must all be small before the series stops.
const WIGNER_WINDOW: usize = 5;

const MAX_GRID_CELLS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        nx: usize,
        ny: usize,
    ) -> Result<Self> {
        let spec = GridSpec {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Square grid `[-half, half]²` with `n × n` points.
    pub fn square(half: f64, n: usize) -> Result<Self> {
        Self::new(-half, half, -half, half, n, n)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || !(self.x_min < self.x_max) || !(self.y_min < self.y_max) {
            return Err(Error::InvalidGrid(format!(
                "need x_min < x_max and y_min < y_max, got {self}"
            )));
        }
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::InvalidGrid("nx and ny must be positive".into()));
        }
        if self.nx.saturating_mul(self.ny) > MAX_GRID_CELLS {
            return Err(Error::InvalidGrid(format!(
                "{} x {} exceeds {MAX_GRID_CELLS} cells",
                self.nx, self.ny
            )));
        }
        Ok(())
    }

    fn step(min: f64, max: f64, n: usize) -> f64 {
        if n == 1 {
            max - min
        } else {
            (max - min) / (n - 1) as f64
        }
    }

    fn coord(min: f64, max: f64, n: usize, i: usize) -> f64 {
        if n == 1 {
            0.5 * (min + max)
        } else {
            min + i as f64 * Self::step(min, max, n)
        }
    }

    pub fn dx(&self) -> f64 {
        Self::step(self.x_min, self.x_max, self.nx)
    }

    pub fn dy(&self) -> f64 {
        Self::step(self.y_min, self.y_max, self.ny)
    }

    pub fn x(&self, i: usize) -> f64 {
        Self::coord(self.x_min, self.x_max, self.nx, i)
    }

    pub fn y(&self, j: usize) -> f64 {
        Self::coord(self.y_min, self.y_max, self.ny, j)
    }

    pub fn beta(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.x(i), self.y(j))
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}:{}:{}x{}",
            self.x_min, self.x_max, self.y_min, self.y_max, self.nx, self.ny
        )
    }
}

/// Parses `xmin:xmax:ymin:ymax:NXxNY`, e.g. `-3:3:-3:3:121x121`.
impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidGrid(format!("expected xmin:xmax:ymin:ymax:NXxNY, got {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 5 {
            return Err(bad());
        }
        let mut bounds = [0.0; 4];
        for (b, p) in bounds.iter_mut().zip(&parts[..4]) {
            *b = p.trim().parse().map_err(|_| bad())?;
        }
        let (nx, ny) = parts[4].split_once(['x', 'X']).ok_or_else(bad)?;
        let nx = nx.trim().parse().map_err(|_| bad())?;
        let ny = ny.trim().parse().map_err(|_| bad())?;
        GridSpec::new(bounds[0], bounds[1], bounds[2], bounds[3], nx, ny)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GridKind {
    Q,
    Wigner,
}

/// One real value per grid point, stored row-major with `x` as the outer axis.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceGrid {
    pub spec: GridSpec,
    pub kind: GridKind,
    values: Vec<f64>,
}

impl PhaseSpaceGrid {
    pub fn from_values(spec: GridSpec, kind: GridKind, values: Vec<f64>) -> Result<Self> {
        spec.validate()?;
        if values.len() != spec.nx * spec.ny {
            return Err(Error::InvalidGrid(format!(
                "{} values for a {}x{} grid",
                values.len(),
                spec.nx,
                spec.ny
            )));
        }
        Ok(PhaseSpaceGrid { spec, kind, values })
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.spec.ny + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Values as `nx` rows of `ny` entries.
    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.spec.ny)
    }
}

impl Serialize for PhaseSpaceGrid {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            kind: GridKind,
            spec: GridSpec,
            values: Vec<&'a [f64]>,
        }
        Repr {
            kind: self.kind,
            spec: self.spec,
            values: self.rows().collect(),
        }
        .serialize(serializer)
    }
}

/// `χ_nk(β) = ⟨n|D(β)|k⟩`.
///
/// For `n ≥ k`: `√(k!/n!) e^{−|β|²/2} β^{n−k} L_k^{n−k}(|β|²)`;
/// for `n < k`: `√(n!/k!) e^{−|β|²/2} (−β*)^{k−n} L_n^{k−n}(|β|²)`.
/// Magnitudes are combined in log domain so large `k` neither overflows
/// `|β|^{k−n}` nor underflows `1/√k!`.
pub fn displacement_element(n: usize, k: usize, beta: Complex64) -> Complex64 {
    let r2 = beta.norm_sqr();
    if r2 == 0.0 {
        return if n == k {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::default()
        };
    }
    let (low, high, base) = if n >= k {
        (k, n, beta)
    } else {
        (n, k, -beta.conj())
    };
    let d = (high - low) as u64;
    let lag = laguerre(low as u64, d as f64, r2);
    if lag == 0.0 {
        return Complex64::default();
    }
    let ln_mag =
        -0.5 * r2 + half_ln_factorial_ratio(low as u64, high as u64) + d as f64 * 0.5 * r2.ln();
    let phase = Complex64::from_polar(1.0, d as f64 * base.arg());
    phase * (ln_mag.exp() * lag)
}

/// `Q(β) = |⟨β|ψ⟩|²/π`.
pub fn q_function(state: &StateVector, beta: Complex64) -> f64 {
    let conj = beta.conj();
    let mut term = Complex64::new(1.0, 0.0);
    let mut overlap = Complex64::default();
    for (n, c) in state.amplitudes().iter().enumerate() {
        if n > 0 {
            term = term * conj / (n as f64).sqrt();
        }
        overlap += c * term;
    }
    (-beta.norm_sqr()).exp() / PI * overlap.norm_sqr()
}

/// `W(β) = (2/π) Σ_k (−1)^k |⟨k|D(β)†|ψ⟩|²`, truncated adaptively.
///
/// The sum runs at least to `(√n_top + |β|)²`, past the mean photon number
/// of the displaced state, and stops once `WIGNER_WINDOW` consecutive terms
/// sum below `tol`.
pub fn wigner_function(state: &StateVector, beta: Complex64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::params(format!(
            "Wigner tolerance must be positive, got {tol}"
        )));
    }
    let support: Vec<(usize, Complex64)> = state
        .amplitudes()
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, c)| *c != Complex64::default())
        .collect();
    let top = support.last().map_or(0, |&(n, _)| n);
    let k_min = ((top as f64).sqrt() + beta.norm()).powi(2).ceil() as usize;

    let mut window = [f64::INFINITY; WIGNER_WINDOW];
    let mut sum = 0.0;
    for k in 0..=WIGNER_K_CAP {
        let inner: Complex64 = support
            .iter()
            .map(|&(n, c)| c * displacement_element(n, k, beta).conj())
            .sum();
        let w = inner.norm_sqr();
        sum += if k % 2 == 0 { w } else { -w };
        window[k % WIGNER_WINDOW] = w;
        if k >= k_min && window.iter().sum::<f64>() < tol {
            return Ok(FRAC_2_PI * sum);
        }
    }
    Err(Error::Convergence {
        what: "Wigner series",
        detail: format!(
            "tail above {tol:e} after k = {WIGNER_K_CAP} at beta = {}{:+}i",
            beta.re, beta.im
        ),
    })
}

/// Evaluates `kind` at every grid point. Cells are independent, so the
/// result does not depend on how the work is scheduled.
pub fn evaluate_grid(
    state: &StateVector,
    kind: GridKind,
    spec: &GridSpec,
    tol: f64,
) -> Result<PhaseSpaceGrid> {
    spec.validate()?;
    let rows: Vec<Result<Vec<f64>>> = (0..spec.nx)
        .into_par_iter()
        .map(|i| {
            (0..spec.ny)
                .map(|j| {
                    let beta = spec.beta(i, j);
                    match kind {
                        GridKind::Q => Ok(q_function(state, beta)),
                        GridKind::Wigner => wigner_function(state, beta, tol),
                    }
                })
                .collect()
        })
        .collect();
    let mut values = Vec::with_capacity(spec.nx * spec.ny);
    for row in rows {
        values.extend(row?);
    }
    PhaseSpaceGrid::from_values(*spec, kind, values)
}

/// Riemann sum `Σ value·Δx·Δy`.
pub fn grid_integral(grid: &PhaseSpaceGrid) -> f64 {
    grid.values.iter().sum::<f64>() * grid.spec.dx() * grid.spec.dy()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    pub min: f64,
    pub argmin: (f64, f64),
    pub max: f64,
    pub argmax: (f64, f64),
}

/// Exact extrema over cells; ties go to the first cell in row-major order.
pub fn grid_extrema(grid: &PhaseSpaceGrid) -> Extrema {
    let ny = grid.spec.ny;
    let (mut imin, mut imax) = (0, 0);
    for (idx, &v) in grid.values.iter().enumerate() {
        if v < grid.values[imin] {
            imin = idx;
        }
        if v > grid.values[imax] {
            imax = idx;
        }
    }
    let at = |idx: usize| (grid.spec.x(idx / ny), grid.spec.y(idx % ny));
    Extrema {
        min: grid.values[imin],
        argmin: at(imin),
        max: grid.values[imax],
        argmax: at(imax),
    }
}

/// An 8-connected cluster of grid cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub min: f64,
    pub argmin: (f64, f64),
    pub cells: usize,
}

fn neighbours(i: usize, j: usize, nx: usize, ny: usize) -> impl Iterator<Item = (usize, usize)> {
    (-1i64..=1)
        .flat_map(|di| (-1i64..=1).map(move |dj| (di, dj)))
        .filter(|&d| d != (0, 0))
        .filter_map(move |(di, dj)| {
            let a = i as i64 + di;
            let b = j as i64 + dj;
            (a >= 0 && b >= 0 && (a as usize) < nx && (b as usize) < ny)
                .then_some((a as usize, b as usize))
        })
}

fn clusters(grid: &PhaseSpaceGrid, member: impl Fn(usize, usize) -> bool) -> Vec<Cluster> {
    let (nx, ny) = (grid.spec.nx, grid.spec.ny);
    let mut seen = vec![false; nx * ny];
    let mut out = Vec::new();
    for start in 0..nx * ny {
        if seen[start] || !member(start / ny, start % ny) {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut best = start;
        let mut cells = 0;
        while let Some(idx) = stack.pop() {
            cells += 1;
            if grid.values[idx] < grid.values[best]
                || (grid.values[idx] == grid.values[best] && idx < best)
            {
                best = idx;
            }
            for (a, b) in neighbours(idx / ny, idx % ny, nx, ny) {
                let n = a * ny + b;
                if !seen[n] && member(a, b) {
                    seen[n] = true;
                    stack.push(n);
                }
            }
        }
        out.push(Cluster {
            min: grid.values[best],
            argmin: (grid.spec.x(best / ny), grid.spec.y(best % ny)),
            cells,
        });
    }
    out
}

/// Connected regions of cells strictly below `threshold`.
pub fn regions_below(grid: &PhaseSpaceGrid, threshold: f64) -> Vec<Cluster> {
    clusters(grid, |i, j| grid.value(i, j) < threshold)
}

/// Local minima below `threshold`: cells no larger than any of their eight
/// neighbours, with adjacent minima (plateaus) merged into one.
pub fn local_minima_below(grid: &PhaseSpaceGrid, threshold: f64) -> Vec<Cluster> {
    let (nx, ny) = (grid.spec.nx, grid.spec.ny);
    clusters(grid, |i, j| {
        let v = grid.value(i, j);
        v < threshold && neighbours(i, j, nx, ny).all(|(a, b)| v <= grid.value(a, b))
    })
}
