//! A fully resolved unit of work and how its result is rendered.

use std::io::Write;

use anyhow::Result;
use hgstate::algebra::{
    contraction_error, eigensystem_check, structure_function, verify_gdo_relations,
    verify_ladder_equation,
};
use hgstate::output::{
    fmt17, write_contraction_csv, write_grid_csv, write_json, write_scan_csv, write_state_csv,
};
use hgstate::phasespace::evaluate_grid;
use hgstate::states::{binomial_amplitudes, hgs_amplitudes, number_state};
use hgstate::statistics::{closed_form_stats, direct_stats_relative_to, squeezing_scan};
use hgstate::{Error, GridKind, GridSpec, HgsParams, PhotonStatistics, StateVector};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSel {
    Hgs(HgsParams),
    /// The `L → ∞` limit.
    Binomial {
        m: u32,
        eta: f64,
    },
    Fock(usize),
}

impl StateSel {
    pub fn vector(&self) -> hgstate::Result<StateVector> {
        match *self {
            StateSel::Hgs(p) => hgs_amplitudes(&p),
            StateSel::Binomial { m, eta } => binomial_amplitudes(m, eta),
            StateSel::Fock(n) => number_state(n, n + 1),
        }
    }

    pub fn describe(&self) -> Value {
        match self {
            StateSel::Hgs(p) => {
                json!({"state": "hypergeometric", "L": p.l(), "M": p.m(), "eta": p.eta()})
            }
            StateSel::Binomial { m, eta } => {
                json!({"state": "binomial", "L": "inf", "M": m, "eta": eta})
            }
            StateSel::Fock(n) => json!({"state": "number", "n": n}),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LValues {
    List(Vec<f64>),
    /// `start, start+step, …` up to and including `stop`.
    Range {
        start: f64,
        stop: f64,
        step: f64,
    },
}

impl LValues {
    pub fn expand(&self) -> Vec<f64> {
        match self {
            LValues::List(v) => v.clone(),
            LValues::Range { start, stop, step } => {
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..count).map(|i| start + i as f64 * step).collect()
            }
        }
    }

    pub fn describe(&self) -> Value {
        match self {
            LValues::List(v) => json!(v),
            LValues::Range { start, stop, step } => {
                json!({"start": start, "stop": stop, "step": step})
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Amplitudes {
        state: StateSel,
    },
    Stats {
        state: StateSel,
    },
    Scan {
        m: u32,
        eta: f64,
        l_values: LValues,
    },
    Grid {
        kind: GridKind,
        state: StateSel,
        spec: GridSpec,
        tol: f64,
    },
    AlgebraCheck {
        params: HgsParams,
    },
    Contraction {
        m: u32,
        eta: f64,
        l_values: Vec<f64>,
    },
}

/// Output bytes plus notes (skipped inputs) destined for the sidecar.
pub struct Rendered {
    pub data: Vec<u8>,
    pub notes: Vec<String>,
}

impl Job {
    pub fn command(&self) -> &'static str {
        match self {
            Job::Amplitudes { .. } => "amplitudes",
            Job::Stats { .. } => "stats",
            Job::Scan { .. } => "squeezing-scan",
            Job::Grid {
                kind: GridKind::Q, ..
            } => "qfunc",
            Job::Grid {
                kind: GridKind::Wigner,
                ..
            } => "wigner",
            Job::AlgebraCheck { .. } => "algebra-check",
            Job::Contraction { .. } => "algebra-check",
        }
    }

    pub fn describe(&self) -> Value {
        match self {
            Job::Amplitudes { state } | Job::Stats { state } => state.describe(),
            Job::Scan { m, eta, l_values } => json!({"M": m, "eta": eta, "L": l_values.describe()}),
            Job::Grid {
                state, spec, tol, ..
            } => {
                json!({"state": state.describe(), "grid": spec.to_string(), "tol": tol})
            }
            Job::AlgebraCheck { params } => {
                json!({"L": params.l(), "M": params.m(), "eta": params.eta()})
            }
            Job::Contraction { m, eta, l_values } => {
                json!({"M": m, "eta": eta, "contraction_L": l_values})
            }
        }
    }

    pub fn run(&self, format: Format) -> Result<Rendered> {
        let mut data = Vec::new();
        let mut notes = Vec::new();
        match self {
            Job::Amplitudes { state } => {
                let v = state.vector()?;
                match format {
                    Format::Csv => write_state_csv(&v, &mut data)?,
                    Format::Json => write_json(&v, &mut data)?,
                }
            }
            Job::Stats { state } => {
                let s = stats_for(state)?;
                match format {
                    Format::Csv => {
                        let f = s.fields();
                        let names: Vec<_> = f.iter().map(|(n, _)| *n).collect();
                        let values: Vec<_> = f.iter().map(|(_, v)| fmt17(*v)).collect();
                        writeln!(data, "{}", names.join(","))?;
                        writeln!(data, "{}", values.join(","))?;
                    }
                    Format::Json => write_json(&s, &mut data)?,
                }
            }
            Job::Scan { m, eta, l_values } => {
                let table = squeezing_scan(*m, *eta, &l_values.expand());
                notes.extend(
                    table
                        .skipped
                        .iter()
                        .map(|(l, why)| format!("skipped L={l}: {why}")),
                );
                match format {
                    Format::Csv => write_scan_csv(&table, &mut data)?,
                    Format::Json => write_json(&table.rows, &mut data)?,
                }
            }
            Job::Grid {
                kind,
                state,
                spec,
                tol,
            } => {
                let grid = evaluate_grid(&state.vector()?, *kind, spec, *tol)?;
                match format {
                    Format::Csv => write_grid_csv(&grid, &mut data)?,
                    Format::Json => write_json(&grid, &mut data)?,
                }
            }
            Job::AlgebraCheck { params } => {
                let rows = algebra_rows(params)?;
                match format {
                    Format::Csv => {
                        writeln!(data, "check,value")?;
                        for (name, v) in &rows {
                            writeln!(data, "{name},{}", fmt17(*v))?;
                        }
                    }
                    Format::Json => {
                        let map: serde_json::Map<String, Value> =
                            rows.into_iter().map(|(k, v)| (k, json!(v))).collect();
                        write_json(&map, &mut data)?;
                    }
                }
            }
            Job::Contraction { m, eta, l_values } => {
                let table = contraction_error(*m, *eta, l_values);
                notes.extend(
                    table
                        .skipped
                        .iter()
                        .map(|(l, why)| format!("skipped L={l}: {why}")),
                );
                match format {
                    Format::Csv => write_contraction_csv(&table, &mut data)?,
                    Format::Json => {
                        let rows: Vec<Value> = table
                            .rows
                            .iter()
                            .map(|&(l, d)| json!({"L": l, "max_abs_deviation": d}))
                            .collect();
                        write_json(&rows, &mut data)?;
                    }
                }
            }
        }
        Ok(Rendered { data, notes })
    }
}

fn stats_for(state: &StateSel) -> hgstate::Result<PhotonStatistics> {
    match *state {
        StateSel::Hgs(p) => closed_form_stats(&p),
        StateSel::Binomial { m, eta } => Ok(direct_stats_relative_to(
            &binomial_amplitudes(m, eta)?,
            m,
            eta,
        )),
        StateSel::Fock(_) => Err(Error::InvalidParams(
            "stats needs a hypergeometric or binomial state".into(),
        )),
    }
}

/// Named scalar diagnostics of the ladder equation and deformed algebra.
fn algebra_rows(params: &HgsParams) -> hgstate::Result<Vec<(String, f64)>> {
    let gdo = verify_gdo_relations(params)?;
    let eig = eigensystem_check(params)?;
    let mut rows = vec![
        ("commutator_deviation".to_string(), gdo.commutator),
        ("product_minus_deviation".to_string(), gdo.product_minus),
        ("product_plus_deviation".to_string(), gdo.product_plus),
        (
            "ladder_residual".to_string(),
            verify_ladder_equation(params)?,
        ),
        ("eigenvector_fidelity".to_string(), eig.hgs_match_fidelity),
    ];
    for (n, e) in eig.eigenvalues.iter().enumerate() {
        rows.push((format!("eigenvalue_{n}"), *e));
    }
    for n in 0..=params.m() as i64 {
        rows.push((format!("F_{n}"), structure_function(params, n)?));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_is_inclusive() {
        let r = LValues::Range {
            start: 10.0,
            stop: 12.0,
            step: 0.5,
        };
        assert_eq!(r.expand(), vec![10.0, 10.5, 11.0, 11.5, 12.0]);
        let r = LValues::Range {
            start: 1.0,
            stop: 2.0,
            step: 0.1,
        };
        assert_eq!(r.expand().len(), 11);
    }

    #[test]
    fn stats_csv_has_header_and_row() {
        let job = Job::Stats {
            state: StateSel::Hgs(HgsParams::new(4.0, 2, 0.5).unwrap()),
        };
        let out = String::from_utf8(job.run(Format::Csv).unwrap().data).unwrap();
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("mean,second_moment,variance"));
    }

    #[test]
    fn fock_stats_rejected() {
        let job = Job::Stats {
            state: StateSel::Fock(2),
        };
        assert!(job.run(Format::Json).is_err());
    }

    #[test]
    fn scan_notes_skipped() {
        let job = Job::Scan {
            m: 5,
            eta: 0.5,
            l_values: LValues::List(vec![8.0, 10.0]),
        };
        let r = job.run(Format::Csv).unwrap();
        assert_eq!(r.notes.len(), 1);
        assert_eq!(String::from_utf8(r.data).unwrap().lines().count(), 2);
    }
}
