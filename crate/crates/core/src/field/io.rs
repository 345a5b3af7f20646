//! Field snapshots (text header + little-endian f64 pairs) and charge CSV.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::lattice::{Charges, Grid, LatticeField};
use crate::error::{Error, Result};

const MAGIC: &str = "dfra-snapshot 1";

pub fn write_snapshot<W: Write>(w: &mut W, f: &LatticeField) -> Result<()> {
    let g = &f.grid;
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "dims {} {} {}", g.nt, g.nx, g.nth)?;
    writeln!(w, "spacings {:e} {:e} {:e}", g.dt, g.dx, g.dth)?;
    writeln!(w, "lambda {:e}", g.lambda)?;
    writeln!(w, "m {:e}", g.m)?;
    writeln!(w, "endianness little")?;
    writeln!(w, "data")?;
    let mut buf = Vec::with_capacity(16 * f.values.len());
    for z in &f.values {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Io(format!("malformed snapshot: {}", msg.into()))
}

fn header_line<R: BufRead>(r: &mut R, key: &str) -> Result<Vec<String>> {
    let mut line = String::new();
    r.read_line(&mut line)?;
    let mut parts = line.split_whitespace();
    if parts.next() != Some(key) {
        return Err(bad(format!("expected `{key}`, found `{}`", line.trim())));
    }
    Ok(parts.map(str::to_string).collect())
}

fn nums<T: std::str::FromStr>(v: &[String], n: usize) -> Result<Vec<T>> {
    if v.len() != n {
        return Err(bad(format!("expected {n} values")));
    }
    v.iter()
        .map(|s| s.parse::<T>().map_err(|_| bad(format!("bad number `{s}`"))))
        .collect()
}

pub fn read_snapshot<R: Read>(r: R) -> Result<LatticeField> {
    let mut r = BufReader::new(r);
    let mut magic = String::new();
    r.read_line(&mut magic)?;
    if magic.trim_end() != MAGIC {
        return Err(bad("missing magic line"));
    }
    let dims: Vec<usize> = nums(&header_line(&mut r, "dims")?, 3)?;
    let sp: Vec<f64> = nums(&header_line(&mut r, "spacings")?, 3)?;
    let lambda: f64 = nums(&header_line(&mut r, "lambda")?, 1)?[0];
    let m: f64 = nums(&header_line(&mut r, "m")?, 1)?[0];
    if header_line(&mut r, "endianness")? != ["little"] {
        return Err(bad("only little-endian data is supported"));
    }
    header_line(&mut r, "data")?;
    let grid = Grid {
        nt: dims[0],
        nx: dims[1],
        nth: dims[2],
        dt: sp[0],
        dx: sp[1],
        dth: sp[2],
        lambda,
        m,
    };
    grid.validate()?;
    let mut raw = Vec::new();
    r.read_to_end(&mut raw)?;
    if raw.len() != 16 * grid.len() {
        return Err(bad(format!(
            "expected {} data bytes, found {}",
            16 * grid.len(),
            raw.len()
        )));
    }
    let values = raw
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect();
    Ok(LatticeField { grid, values })
}

pub fn save_snapshot(path: &Path, f: &LatticeField) -> Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_snapshot(&mut file, f)?;
    file.flush()?;
    Ok(())
}

pub fn load_snapshot(path: &Path) -> Result<LatticeField> {
    read_snapshot(std::fs::File::open(path)?)
}

/// Charge time series with columns `step,t,P0,P1,Ptheta,Q`.
pub fn write_charges_csv<W: Write>(w: &mut W, rows: &[(usize, f64, Charges)]) -> Result<()> {
    writeln!(w, "step,t,P0,P1,Ptheta,Q")?;
    for (step, t, c) in rows {
        writeln!(
            w,
            "{step},{t:e},{:e},{:e},{:e},{:e}",
            c.p0, c.p1, c.ptheta, c.q
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_round_trip() {
        let g = Grid {
            nt: 5,
            nx: 6,
            nth: 7,
            dt: 0.1,
            dx: 0.2,
            dth: 0.3,
            lambda: 0.5,
            m: 1.5,
        };
        let f = LatticeField::from_fn(g, |t, x, th| Complex64::new(t + x, th - 1.0 / 3.0)).unwrap();
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &f).unwrap();
        assert_eq!(read_snapshot(&buf[..]).unwrap(), f);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("snap.bin");
        save_snapshot(&p, &f).unwrap();
        assert_eq!(load_snapshot(&p).unwrap(), f);
        buf.truncate(buf.len() - 3);
        assert!(read_snapshot(&buf[..]).is_err());
        assert!(read_snapshot(&b"nonsense\n"[..]).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut out = Vec::new();
        let c = Charges {
            p0: 1.0,
            p1: 0.5,
            ptheta: -0.25,
            q: 2.0,
        };
        write_charges_csv(&mut out, &[(0, 0.0, c), (1, 0.1, c)]).unwrap();
        let s = String::from_utf8(out).unwrap();
        assert_eq!(s.lines().next(), Some("step,t,P0,P1,Ptheta,Q"));
        assert_eq!(s.lines().count(), 3);
        assert!(s
            .lines()
            .nth(2)
            .unwrap()
            .starts_with("1,1e-1,1e0,5e-1,-2.5e-1,2e0"));
    }
}
