//! Writers for the emitted tables and grids.
//!
//! Floating-point fields are written with 17 significant digits in
//! scientific notation, so identical inputs give byte-identical files.

use std::io::{self, Write};

use serde::Serialize;

use crate::algebra::ContractionTable;
use crate::phasespace::PhaseSpaceGrid;
use crate::states::StateVector;
use crate::statistics::ScanTable;

/// `v` with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Rows `n,re,im,probability`.
pub fn write_state_csv<W: Write>(state: &StateVector, mut w: W) -> io::Result<()> {
    writeln!(w, "n,re,im,probability")?;
    for (n, c) in state.amplitudes().iter().enumerate() {
        writeln!(
            w,
            "{n},{},{},{}",
            fmt17(c.re),
            fmt17(c.im),
            fmt17(c.norm_sqr())
        )?;
    }
    Ok(())
}

/// Rows `x,y,value` with `x` varying slowest.
pub fn write_grid_csv<W: Write>(grid: &PhaseSpaceGrid, mut w: W) -> io::Result<()> {
    writeln!(w, "x,y,value")?;
    let spec = &grid.spec;
    for i in 0..spec.nx {
        let x = fmt17(spec.x(i));
        for j in 0..spec.ny {
            writeln!(w, "{x},{},{}", fmt17(spec.y(j)), fmt17(grid.value(i, j)))?;
        }
    }
    Ok(())
}

pub fn write_scan_csv<W: Write>(table: &ScanTable, mut w: W) -> io::Result<()> {
    writeln!(w, "L,Sx,Sp")?;
    for row in &table.rows {
        writeln!(w, "{},{},{}", fmt17(row.l), fmt17(row.s_x), fmt17(row.s_p))?;
    }
    Ok(())
}

pub fn write_contraction_csv<W: Write>(table: &ContractionTable, mut w: W) -> io::Result<()> {
    writeln!(w, "L,max_abs_deviation")?;
    for &(l, dev) in &table.rows {
        writeln!(w, "{},{}", fmt17(l), fmt17(dev))?;
    }
    Ok(())
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(value: &T, mut w: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)
}
