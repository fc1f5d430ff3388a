//! Versioned little-endian binary dump of complex matrix stacks.
//!
//! Layout: magic `BSPD`, `u32` version, `u32` kind, `u32` matrix count, then
//! per matrix `u32` rows, `u32` cols and `rows * cols` pairs of `f64`
//! (re, im) in column-major order, then a `u32` length and that many `f64`
//! auxiliary values (subcarrier frequencies for channels).

use std::io::{Read, Write};

use crate::channel::BeamspaceChannel;
use crate::error::{Error, Result};
use crate::linalg::{c, CMat};

pub const MAGIC: [u8; 4] = *b"BSPD";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u32)]
pub enum DumpKind {
    Channel = 1,
    PhasePrecoder = 2,
    Baseband = 3,
}

impl DumpKind {
    fn from_u32(v: u32) -> Result<Self> {
        match v {
            1 => Ok(DumpKind::Channel),
            2 => Ok(DumpKind::PhasePrecoder),
            3 => Ok(DumpKind::Baseband),
            other => Err(Error::Dump(format!("unknown kind tag {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dump {
    pub kind: DumpKind,
    pub mats: Vec<CMat>,
    pub aux: Vec<f64>,
}

impl Dump {
    pub fn from_channel(ch: &BeamspaceChannel) -> Self {
        Dump { kind: DumpKind::Channel, mats: ch.mats.clone(), aux: ch.per_subcarrier_freq_hz.clone() }
    }

    pub fn into_channel(self) -> Result<BeamspaceChannel> {
        if self.kind != DumpKind::Channel {
            return Err(Error::Dump(format!("expected a channel dump, found {:?}", self.kind)));
        }
        Ok(BeamspaceChannel { mats: self.mats, per_subcarrier_freq_hz: self.aux })
    }
}

fn put_u32(w: &mut impl Write, v: u32) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn put_f64(w: &mut impl Write, v: f64) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn len_u32(n: usize) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::Dump(format!("length {n} does not fit in u32")))
}

pub fn write_dump(w: &mut impl Write, dump: &Dump) -> Result<()> {
    w.write_all(&MAGIC)?;
    put_u32(w, VERSION)?;
    put_u32(w, dump.kind as u32)?;
    put_u32(w, len_u32(dump.mats.len())?)?;
    for m in &dump.mats {
        put_u32(w, len_u32(m.nrows())?)?;
        put_u32(w, len_u32(m.ncols())?)?;
        for z in m.iter() {
            put_f64(w, z.re)?;
            put_f64(w, z.im)?;
        }
    }
    put_u32(w, len_u32(dump.aux.len())?)?;
    for &a in &dump.aux {
        put_f64(w, a)?;
    }
    Ok(())
}

fn truncated(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::Dump("truncated input".into())
    } else {
        Error::Io(e)
    }
}

fn get_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b).map_err(truncated)?;
    Ok(u32::from_le_bytes(b))
}

fn get_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b).map_err(truncated)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_dump(r: &mut impl Read) -> Result<Dump> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(truncated)?;
    if magic != MAGIC {
        return Err(Error::Dump("bad magic".into()));
    }
    let version = get_u32(r)?;
    if version != VERSION {
        return Err(Error::Dump(format!("unsupported version {version}")));
    }
    let kind = DumpKind::from_u32(get_u32(r)?)?;
    let count = get_u32(r)? as usize;
    let mut mats = Vec::new();
    for _ in 0..count {
        let rows = get_u32(r)? as usize;
        let cols = get_u32(r)? as usize;
        let n = rows.checked_mul(cols).ok_or_else(|| Error::Dump("matrix size overflows".into()))?;
        let mut data = Vec::new();
        for _ in 0..n {
            let re = get_f64(r)?;
            let im = get_f64(r)?;
            data.push(c(re, im));
        }
        mats.push(CMat::from_vec(rows, cols, data));
    }
    let n_aux = get_u32(r)? as usize;
    let aux = (0..n_aux).map(|_| get_f64(r)).collect::<Result<_>>()?;
    Ok(Dump { kind, mats, aux })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_channel() {
        let ch = BeamspaceChannel {
            mats: vec![CMat::from_fn(2, 3, |i, j| c(i as f64, -(j as f64))), CMat::zeros(2, 3)],
            per_subcarrier_freq_hz: vec![1.0, 2.0],
        };
        let mut buf = Vec::new();
        write_dump(&mut buf, &Dump::from_channel(&ch)).unwrap();
        let back = read_dump(&mut buf.as_slice()).unwrap().into_channel().unwrap();
        assert_eq!(back, ch);
    }

    #[test]
    fn rejects_corruption() {
        let d = Dump { kind: DumpKind::Baseband, mats: vec![CMat::zeros(1, 1)], aux: vec![] };
        let mut buf = Vec::new();
        write_dump(&mut buf, &d).unwrap();
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(read_dump(&mut bad.as_slice()), Err(Error::Dump(_))));
        let short = &buf[..buf.len() - 3];
        assert!(matches!(read_dump(&mut &short[..]), Err(Error::Dump(_))));
        let mut ver = buf.clone();
        ver[4] = 9;
        assert!(matches!(read_dump(&mut ver.as_slice()), Err(Error::Dump(_))));
        assert!(read_dump(&mut buf.as_slice()).unwrap().into_channel().is_err());
    }
}
