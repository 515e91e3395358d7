//! The invariant suite behind the CLI `verify` command.
//!
//! Each check sweeps a fixed parameter set and reports the worst deviation it
//! saw, so a failure names both the check and the offending parameters.

use std::fmt;

use num_complex::Complex64;

use crate::algebra::{
    contraction_error, eigensystem_check, structure_function, verify_gdo_relations,
    verify_ladder_equation,
};
use crate::error::Result;
use crate::oracle::{displacement_by_expm, urn_distribution, UrnSpec};
use crate::phasespace::{
    displacement_element, evaluate_grid, grid_extrema, grid_integral, regions_below,
    wigner_function, GridKind, GridSpec, DEFAULT_WIGNER_TOL,
};
use crate::states::{
    binomial_amplitudes, coherent_amplitudes, fidelity, hgs_amplitudes, number_state, HgsParams,
};
use crate::statistics::{
    closed_form_stats, direct_stats, max_disagreement, quadrature_variances, squeezing_indices,
};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {:<24} {}", self.name, self.detail)
    }
}

pub const SWEEP_M: [u32; 5] = [1, 2, 5, 20, 50];
pub const SWEEP_ETA: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];
pub const SWEEP_L_MULTIPLES: [f64; 3] = [1.0, 2.0, 10.0];

/// `M × η × {1, 2, 10}·L_min`, 75 points.
pub fn standard_sweep() -> Vec<HgsParams> {
    let mut out = Vec::with_capacity(75);
    for &m in &SWEEP_M {
        for &eta in &SWEEP_ETA {
            for &k in &SWEEP_L_MULTIPLES {
                let l = k * HgsParams::l_min(m, eta);
                out.push(HgsParams::new(l, m, eta).expect("sweep point is admissible"));
            }
        }
    }
    out
}

fn label(p: &HgsParams) -> String {
    format!("(L={}, M={}, eta={})", p.l(), p.m(), p.eta())
}

/// Tracks the worst value of some deviation and where it came from.
struct Worst {
    value: f64,
    at: String,
}

impl Worst {
    fn new() -> Self {
        Worst {
            value: 0.0,
            at: String::from("-"),
        }
    }

    fn see(&mut self, value: f64, at: impl FnOnce() -> String) {
        if value > self.value || value.is_nan() {
            self.value = value;
            self.at = at();
        }
    }

    fn report(self, name: &'static str, tol: f64) -> CheckReport {
        CheckReport {
            name,
            passed: self.value <= tol,
            detail: format!("max {:.3e} (tol {tol:.0e}) at {}", self.value, self.at),
        }
    }
}

fn failed(name: &'static str, err: impl fmt::Display) -> CheckReport {
    CheckReport {
        name,
        passed: false,
        detail: format!("error: {err}"),
    }
}

fn guard(name: &'static str, f: impl FnOnce() -> Result<CheckReport>) -> CheckReport {
    f().unwrap_or_else(|e| failed(name, e))
}

fn normalization(sweep: &[HgsParams]) -> CheckReport {
    guard("normalization", || {
        let mut worst = Worst::new();
        for p in sweep {
            // the sum before the defensive renormalization step
            let raw = hgs_amplitudes(p)?.raw_norm_sq();
            worst.see((raw - 1.0).abs(), || label(p));
        }
        Ok(worst.report("normalization", 1e-12))
    })
}

fn urn_oracle() -> CheckReport {
    guard("urn-oracle", || {
        let cases = [
            (4, 2, 0.5),
            (10, 3, 0.4),
            (20, 5, 0.25),
            (37, 6, 0.27027027027027023),
            (50, 7, 0.5),
            (64, 10, 0.75),
            (100, 12, 0.2),
            (150, 30, 0.6),
            (180, 9, 0.95),
            (200, 40, 0.35),
        ];
        let mut worst = Worst::new();
        for &(l, m, eta) in &cases {
            let p = HgsParams::new(l as f64, m, eta)?;
            let red = (l as f64 * eta).round() as u64;
            let q = urn_distribution(&UrnSpec::new(red, l - red, m as u64)?);
            let h = hgs_amplitudes(&p)?.photon_distribution();
            for (a, b) in h.iter().zip(&q) {
                worst.see((a - b).abs(), || label(&p));
            }
        }
        Ok(worst.report("urn-oracle", 1e-13))
    })
}

fn closed_vs_direct(sweep: &[HgsParams]) -> CheckReport {
    guard("closed-vs-direct", || {
        let mut worst = Worst::new();
        for p in sweep {
            let closed = closed_form_stats(p)?;
            let direct = direct_stats(&hgs_amplitudes(p)?, p);
            let (field, dev) = max_disagreement(&closed, &direct);
            worst.see(dev, || format!("{} field {field}", label(p)));
        }
        Ok(worst.report("closed-vs-direct", 1e-10))
    })
}

fn nonclassicality(sweep: &[HgsParams]) -> CheckReport {
    guard("sub-poissonian", || {
        for p in sweep {
            let s = closed_form_stats(p)?;
            let m = p.m() as f64;
            let bad = if !(s.mandel_q < 0.0) {
                Some(format!("Q = {}", s.mandel_q))
            } else if !(s.g2 < 1.0) {
                Some(format!("g2 = {}", s.g2))
            } else if p.m() >= 2 && !(s.g2 < (m - 1.0) / m) {
                Some(format!("g2 = {} not below (M-1)/M", s.g2))
            } else {
                None
            };
            if let Some(why) = bad {
                return Ok(CheckReport {
                    name: "sub-poissonian",
                    passed: false,
                    detail: format!("{why} at {}", label(p)),
                });
            }
        }
        Ok(CheckReport {
            name: "sub-poissonian",
            passed: true,
            detail: format!("Q < 0, g2 < 1 at all {} points", sweep.len()),
        })
    })
}

fn weakening_bound(sweep: &[HgsParams]) -> CheckReport {
    guard("weakening-factor", || {
        for p in sweep {
            let w = closed_form_stats(p)?.weakening_factor;
            let ok = if p.m() == 1 {
                w == 1.0
            } else {
                w > 0.5 && w < 1.0
            };
            if !ok {
                return Ok(CheckReport {
                    name: "weakening-factor",
                    passed: false,
                    detail: format!("W = {w} at {}", label(p)),
                });
            }
        }
        Ok(CheckReport {
            name: "weakening-factor",
            passed: true,
            detail: String::from("1/2 < W < 1 for M >= 2, W = 1 for M = 1"),
        })
    })
}

fn squeezing(sweep: &[HgsParams]) -> CheckReport {
    guard("squeezing", || {
        let mut worst = Worst::new();
        let mut heisenberg = f64::INFINITY;
        for p in sweep {
            let (sx, sp) = squeezing_indices(p)?;
            let (dx2, dp2) = quadrature_variances(&hgs_amplitudes(p)?);
            let (mx, mp) = (2.0 * dx2 - 1.0, 2.0 * dp2 - 1.0);
            let dev = (sx - mx).abs().max((sp - mp).abs()) / sx.abs().max(sp.abs()).max(1.0);
            worst.see(dev, || label(p));
            heisenberg = heisenberg.min((1.0 + sx) * (1.0 + sp));
        }
        let (sx, _) = squeezing_indices(&HgsParams::with_min_l(1, 0.25)?)?;
        worst.see((sx + 0.25).abs(), || {
            String::from("M=1, eta=0.25 hand case")
        });
        let mut report = worst.report("squeezing", 1e-10);
        if heisenberg < 1.0 - 1e-10 {
            report.passed = false;
        }
        report
            .detail
            .push_str(&format!("; min (1+Sx)(1+Sp) = {heisenberg:.6}"));
        Ok(report)
    })
}

fn ladder(sweep: &[HgsParams]) -> CheckReport {
    guard("ladder-equation", || {
        let mut worst = Worst::new();
        for p in sweep {
            worst.see(verify_ladder_equation(p)?, || {
                format!("{} residual", label(p))
            });
            let eig = eigensystem_check(p)?;
            for (n, &e) in eig.eigenvalues.iter().enumerate() {
                worst.see((e - p.eta().sqrt() * n as f64).abs(), || {
                    format!("{} eigenvalue {n}", label(p))
                });
            }
            worst.see(1.0 - eig.hgs_match_fidelity, || {
                format!("{} eigenvector", label(p))
            });
        }
        Ok(worst.report("ladder-equation", 1e-10))
    })
}

fn deformed_algebra(sweep: &[HgsParams]) -> CheckReport {
    guard("deformed-algebra", || {
        let mut worst = Worst::new();
        for p in sweep {
            worst.see(verify_gdo_relations(p)?.max(), || label(p));
            for n in 0..=p.m() as i64 {
                let f = structure_function(p, n)?;
                if f < 0.0 {
                    worst.see(f64::INFINITY, || format!("{} F({n}) = {f}", label(p)));
                }
            }
        }
        Ok(worst.report("deformed-algebra", 1e-10))
    })
}

fn contraction() -> CheckReport {
    let ls = [1e2, 1e3, 1e4, 1e5];
    let table = contraction_error(5, 0.5, &ls);
    if !table.skipped.is_empty() || table.rows.len() != ls.len() {
        return failed("contraction", "an L value was rejected");
    }
    let ratios: Vec<f64> = table.rows.windows(2).map(|w| w[0].1 / w[1].1).collect();
    let passed = ratios.iter().all(|r| (8.0..=12.0).contains(r));
    CheckReport {
        name: "contraction",
        passed,
        detail: format!(
            "decade ratios {}",
            ratios
                .iter()
                .map(|r| format!("{r:.3}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

fn limits() -> CheckReport {
    guard("limits", || {
        let bs = fidelity(
            &hgs_amplitudes(&HgsParams::new(1e6, 5, 0.5)?)?,
            &binomial_amplitudes(5, 0.5)?,
        );
        let alpha = Complex64::new(1.0, 0.0);
        let coh = fidelity(
            &hgs_amplitudes(&HgsParams::new(1e5, 100, 0.01)?)?,
            &coherent_amplitudes(alpha, 101)?,
        );
        let top = hgs_amplitudes(&HgsParams::new(500.0, 5, 0.99)?)?.photon_distribution()[5];
        Ok(CheckReport {
            name: "limits",
            passed: bs > 1.0 - 1e-6 && coh > 0.999 && top > 0.9,
            detail: format!("F(BS) = {bs:.9}, F(coherent) = {coh:.6}, P(n=M) = {top:.4}"),
        })
    })
}

fn phase_space() -> CheckReport {
    guard("phase-space", || {
        let s = hgs_amplitudes(&HgsParams::new(10.0, 5, 0.5)?)?;
        let spec = GridSpec::square(4.0, 161)?;
        let q = evaluate_grid(&s, GridKind::Q, &spec, DEFAULT_WIGNER_TOL)?;
        let w = evaluate_grid(&s, GridKind::Wigner, &spec, DEFAULT_WIGNER_TOL)?;
        let (qi, wi) = (grid_integral(&q), grid_integral(&w));
        let q_min = grid_extrema(&q).min;

        let s2 = hgs_amplitudes(&HgsParams::new(10.0, 2, 0.2)?)?;
        let w2 = evaluate_grid(
            &s2,
            GridKind::Wigner,
            &GridSpec::square(3.0, 121)?,
            DEFAULT_WIGNER_TOL,
        )?;
        let neg = grid_extrema(&w2).min;

        let w0 = wigner_function(
            &number_state(2, 3)?,
            Complex64::default(),
            DEFAULT_WIGNER_TOL,
        )?;
        let target = 2.0 / std::f64::consts::PI;
        Ok(CheckReport {
            name: "phase-space",
            passed: (qi - 1.0).abs() <= 1e-3
                && (wi - 1.0).abs() <= 1e-3
                && q_min >= 0.0
                && neg < 0.0
                && (w0 - target).abs() <= 2e-3,
            detail: format!(
                "int Q = {qi:.6}, int W = {wi:.6}, min Q = {q_min:.2e}, min W = {neg:.4}, W_2(0) = {w0:.6}"
            ),
        })
    })
}

fn displacement() -> CheckReport {
    guard("displacement-elements", || {
        let mut worst = Worst::new();
        let dim = 25;
        for beta in [
            Complex64::new(0.5, 0.0),
            Complex64::new(0.7, 0.3),
            Complex64::new(-0.4, 1.1),
        ] {
            let d = displacement_by_expm(beta, 120)?;
            for n in 0..dim {
                for k in 0..dim {
                    worst.see(
                        (displacement_element(n, k, beta) - d.get(n, k)).norm(),
                        || format!("beta = {beta}, ({n}, {k})"),
                    );
                }
            }
        }
        Ok(worst.report("displacement-elements", 1e-9))
    })
}

fn figure_negativity() -> CheckReport {
    guard("wigner-negative-peaks", || {
        let spec = GridSpec::square(3.0, 121)?;
        let count = |s| -> Result<usize> {
            let g = evaluate_grid(s, GridKind::Wigner, &spec, DEFAULT_WIGNER_TOL)?;
            Ok(regions_below(&g, -1e-3).len())
        };
        let hgs = hgs_amplitudes(&HgsParams::new(4.0, 2, 0.5)?)?;
        let bs = binomial_amplitudes(2, 0.5)?;
        let (h, b) = (count(&hgs)?, count(&bs)?);
        Ok(CheckReport {
            name: "wigner-negative-peaks",
            passed: h == 2 && b == 1,
            detail: format!("HGS(4,2,0.5) {h} negative regions, BS(2,0.5) {b}"),
        })
    })
}

/// Every check, in a fixed order.
pub fn run_all() -> Vec<CheckReport> {
    let sweep = standard_sweep();
    vec![
        normalization(&sweep),
        urn_oracle(),
        closed_vs_direct(&sweep),
        nonclassicality(&sweep),
        weakening_bound(&sweep),
        squeezing(&sweep),
        ladder(&sweep),
        deformed_algebra(&sweep),
        contraction(),
        limits(),
        phase_space(),
        displacement(),
        figure_negativity(),
    ]
}
