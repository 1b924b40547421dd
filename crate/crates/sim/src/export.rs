//! CSV and binary snapshot output, plus a plotting script for time series.

use std::io::{self, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::SimError;
use crate::grid::{FieldState, SpinorField};

pub const DUMP_MAGIC: &[u8; 4] = b"ZMDW";
pub const DUMP_VERSION: u32 = 1;

/// One row per grid point: `ix,iy,iz,x,y,z` then `re,im` per component.
pub fn write_spinor_csv<W: Write>(mut w: W, psi: &SpinorField) -> io::Result<()> {
    write!(w, "ix,iy,iz,x,y,z")?;
    for c in 0..psi.m {
        write!(w, ",re{c},im{c}")?;
    }
    writeln!(w)?;
    let g = psi.grid;
    for idx in 0..g.points() {
        let (ix, iy, iz) = g.unindex(idx);
        let [x, y, z] = g.coords(idx);
        write!(w, "{ix},{iy},{iz},{x},{y},{z}")?;
        for v in psi.at(idx) {
            write!(w, ",{},{}", v.re, v.im)?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// One row per grid point with all eight field components.
pub fn write_fields_csv<W: Write>(mut w: W, state: &FieldState) -> io::Result<()> {
    writeln!(w, "ix,iy,iz,x,y,z,E1,E2,E3,B1,B2,B3,E0,B0")?;
    let g = state.grid;
    for idx in 0..g.points() {
        let (ix, iy, iz) = g.unindex(idx);
        let [x, y, z] = g.coords(idx);
        write!(w, "{ix},{iy},{iz},{x},{y},{z}")?;
        for v in state.at(idx) {
            write!(w, ",{v}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Binary dump: magic `ZMDW`, `u32` version, `u32 n`, `f64 box`, `u32 m`,
/// then little-endian `f64` `(re, im)` pairs, component-major.
pub fn write_spinor_binary<W: Write>(mut w: W, psi: &SpinorField) -> io::Result<()> {
    w.write_all(DUMP_MAGIC)?;
    w.write_all(&DUMP_VERSION.to_le_bytes())?;
    w.write_all(&(psi.grid.n as u32).to_le_bytes())?;
    w.write_all(&psi.grid.box_len.to_le_bytes())?;
    w.write_all(&(psi.m as u32).to_le_bytes())?;
    for z in &psi.data {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

/// Contents of a binary dump.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorDump {
    pub n: usize,
    pub box_len: f64,
    pub m: usize,
    pub data: Vec<Complex64>,
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32, SimError> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64, SimError> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_spinor_binary<R: Read>(mut r: R) -> Result<SpinorDump, SimError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != DUMP_MAGIC {
        return Err(SimError::BadDump(format!("bad magic {magic:?}")));
    }
    let version = read_u32(&mut r)?;
    if version != DUMP_VERSION {
        return Err(SimError::BadDump(format!("unsupported version {version}")));
    }
    let n = read_u32(&mut r)? as usize;
    let box_len = read_f64(&mut r)?;
    let m = read_u32(&mut r)? as usize;
    let count = m * n * n * n;
    let mut data = Vec::with_capacity(count);
    for _ in 0..count {
        let re = read_f64(&mut r)?;
        let im = read_f64(&mut r)?;
        data.push(Complex64::new(re, im));
    }
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(SimError::BadDump(format!("{} trailing bytes", rest.len())));
    }
    Ok(SpinorDump { n, box_len, m, data })
}

/// Time series with a shared time column.
pub fn write_series_csv<W: Write>(
    mut w: W,
    times: &[f64],
    columns: &[(String, Vec<f64>)],
) -> io::Result<()> {
    write!(w, "t")?;
    for (name, _) in columns {
        write!(w, ",{name}")?;
    }
    writeln!(w)?;
    for (s, t) in times.iter().enumerate() {
        write!(w, "{t}")?;
        for (_, vals) in columns {
            match vals.get(s) {
                Some(v) => write!(w, ",{v}")?,
                None => write!(w, ",")?,
            }
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Python script that plots every listed CSV on log axes into PNGs next to it.
pub fn plot_script(csv_files: &[&Path]) -> String {
    let list = csv_files
        .iter()
        .map(|p| format!("    {:?},", p.display().to_string()))
        .collect::<Vec<_>>()
        .join("\n");
    format!(
        r#"#!/usr/bin/env python3
import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

FILES = [
{list}
]

here = os.path.dirname(os.path.abspath(__file__))
for name in FILES:
    path = os.path.join(here, name)
    with open(path) as f:
        rows = list(csv.reader(f))
    header, body = rows[0], rows[1:]
    t = [float(r[0]) for r in body]
    fig, ax = plt.subplots()
    for j, label in enumerate(header[1:], start=1):
        ys = [abs(float(r[j])) if r[j] else float("nan") for r in body]
        ax.semilogy(t, [max(y, 1e-18) for y in ys], label=label)
    ax.set_xlabel("t")
    ax.legend(fontsize="small")
    fig.savefig(os.path.splitext(path)[0] + ".png", dpi=120)
    plt.close(fig)
"#
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    #[test]
    fn binary_roundtrip_and_layout() {
        let g = GridSpec {
            n: 4,
            ..GridSpec::default()
        };
        let psi = SpinorField::from_fn(g, 2, |x| {
            vec![Complex64::new(x[0], -x[1]), Complex64::new(x[2], 1.0)]
        });
        let mut buf = Vec::new();
        write_spinor_binary(&mut buf, &psi).unwrap();
        assert_eq!(&buf[..4], b"ZMDW");
        assert_eq!(buf.len(), 4 + 4 + 4 + 8 + 4 + 2 * 64 * 16);
        let dump = read_spinor_binary(&buf[..]).unwrap();
        assert_eq!(dump.n, 4);
        assert_eq!(dump.m, 2);
        assert_eq!(dump.data, psi.data);
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(read_spinor_binary(&bad[..]).is_err());
        assert!(read_spinor_binary(&buf[..buf.len() - 1]).is_err());
    }

    #[test]
    fn csv_shapes() {
        let g = GridSpec {
            n: 4,
            ..GridSpec::default()
        };
        let mut out = Vec::new();
        write_fields_csv(&mut out, &FieldState::zeros(g)).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 65);
        let mut out = Vec::new();
        write_series_csv(&mut out, &[0.0, 0.1], &[("a".into(), vec![1.0, 2.0])]).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "t,a\n0,1\n0.1,2\n");
    }
}
