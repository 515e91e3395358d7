//! Named recipes that regenerate the data behind each figure.

use hgstate::{GridKind, GridSpec, HgsParams};

use crate::job::{Job, LValues, StateSel};

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig1a",
        summary: "S_x, S_p against L for M=5, eta=0.5, L = 10..200",
    },
    Preset {
        name: "fig3a",
        summary: "Q grid, M=5, eta=0.5, L=10 (smallest L)",
    },
    Preset {
        name: "fig3b",
        summary: "Q grid, M=5, eta=0.5, L=20",
    },
    Preset {
        name: "fig3c",
        summary: "Q grid, M=5, eta=0.5, L=40",
    },
    Preset {
        name: "fig3d",
        summary: "Q grid, binomial state M=5, eta=0.5",
    },
    Preset {
        name: "fig3e",
        summary: "Q grid, M=5, eta=0.9, L=50",
    },
    Preset {
        name: "fig4a",
        summary: "Q grid for contours, M=5, eta=0.5, L=10",
    },
    Preset {
        name: "fig4b",
        summary: "Q grid for contours, M=5, eta=0.5, L=28",
    },
    Preset {
        name: "fig4c",
        summary: "Q grid for contours, binomial state M=5, eta=0.5",
    },
    Preset {
        name: "fig4d",
        summary: "Q grid for contours, M=50, eta=0.5, L=100",
    },
    Preset {
        name: "fig5a",
        summary: "Wigner grid, M=2, eta=0.2, smallest L",
    },
    Preset {
        name: "fig5b",
        summary: "Wigner grid, M=2, eta=0.5, smallest L",
    },
    Preset {
        name: "fig5c",
        summary: "Wigner grid, M=2, eta=0.9, smallest L",
    },
    Preset {
        name: "fig5d",
        summary: "Wigner grid, number state |2>",
    },
    Preset {
        name: "fig6b",
        summary: "Wigner grid, binomial state M=2, eta=0.5",
    },
    Preset {
        name: "fig6c",
        summary: "Wigner grid, binomial state M=2, eta=0.9",
    },
];

fn hgs(l: f64, m: u32, eta: f64) -> hgstate::Result<StateSel> {
    HgsParams::new(l, m, eta).map(StateSel::Hgs)
}

fn smallest(m: u32, eta: f64) -> hgstate::Result<StateSel> {
    HgsParams::with_min_l(m, eta).map(StateSel::Hgs)
}

fn grid(kind: GridKind, state: StateSel, half: f64, n: usize, tol: f64) -> hgstate::Result<Job> {
    Ok(Job::Grid {
        kind,
        state,
        spec: GridSpec::square(half, n)?,
        tol,
    })
}

/// Resolves a preset name; `tol` only affects Wigner presets.
pub fn resolve(name: &str, tol: f64) -> anyhow::Result<Job> {
    use GridKind::{Wigner, Q};
    let bs = |m, eta| StateSel::Binomial { m, eta };
    let job = match name {
        "fig1a" => Job::Scan {
            m: 5,
            eta: 0.5,
            l_values: LValues::Range {
                start: 10.0,
                stop: 200.0,
                step: 1.0,
            },
        },
        "fig3a" => grid(Q, hgs(10.0, 5, 0.5)?, 4.0, 161, tol)?,
        "fig3b" => grid(Q, hgs(20.0, 5, 0.5)?, 4.0, 161, tol)?,
        "fig3c" => grid(Q, hgs(40.0, 5, 0.5)?, 4.0, 161, tol)?,
        "fig3d" => grid(Q, bs(5, 0.5), 4.0, 161, tol)?,
        "fig3e" => grid(Q, hgs(50.0, 5, 0.9)?, 4.0, 161, tol)?,
        "fig4a" => grid(Q, hgs(10.0, 5, 0.5)?, 4.0, 161, tol)?,
        "fig4b" => grid(Q, hgs(28.0, 5, 0.5)?, 4.0, 161, tol)?,
        "fig4c" => grid(Q, bs(5, 0.5), 4.0, 161, tol)?,
        "fig4d" => grid(Q, hgs(100.0, 50, 0.5)?, 8.0, 161, tol)?,
        "fig5a" => grid(Wigner, smallest(2, 0.2)?, 3.0, 121, tol)?,
        "fig5b" => grid(Wigner, smallest(2, 0.5)?, 3.0, 121, tol)?,
        "fig5c" => grid(Wigner, smallest(2, 0.9)?, 3.0, 121, tol)?,
        "fig5d" => grid(Wigner, StateSel::Fock(2), 3.0, 121, tol)?,
        "fig6b" => grid(Wigner, bs(2, 0.5), 3.0, 121, tol)?,
        "fig6c" => grid(Wigner, bs(2, 0.9), 3.0, 121, tol)?,
        other => {
            return Err(hgstate::Error::InvalidParams(format!(
                "unknown preset {other:?}; run `hgstate preset --list`"
            ))
            .into())
        }
    };
    Ok(job)
}
