//! Binary state dumps: `"LGTS"`, version, `d`, `L` (all `u32` little-endian)
//! followed by `d^L` little-endian `(re, im)` f64 pairs.

use std::io::{Read, Write};

use super::{hilbert_dim, StateVector};
use crate::{Error, Result, C64};

pub const STATE_MAGIC: &[u8; 4] = b"LGTS";
pub const STATE_VERSION: u32 = 1;

pub fn write_state<W: Write>(state: &StateVector, mut w: W) -> Result<()> {
    w.write_all(STATE_MAGIC)?;
    for v in [STATE_VERSION, state.d() as u32, state.sites() as u32] {
        w.write_all(&v.to_le_bytes())?;
    }
    for a in state.amplitudes() {
        w.write_all(&a.re.to_le_bytes())?;
        w.write_all(&a.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf).map_err(|_| Error::StateFormat("truncated header".into()))?;
    Ok(u32::from_le_bytes(buf))
}

pub fn read_state<R: Read>(mut r: R) -> Result<StateVector> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(|_| Error::StateFormat("truncated header".into()))?;
    if &magic != STATE_MAGIC {
        return Err(Error::StateFormat(format!("bad magic {magic:?}")));
    }
    let version = read_u32(&mut r)?;
    if version != STATE_VERSION {
        return Err(Error::StateFormat(format!("unsupported version {version}")));
    }
    let d = read_u32(&mut r)? as usize;
    let l = read_u32(&mut r)? as usize;
    let dim = hilbert_dim(d, l)?;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != dim * 16 {
        return Err(Error::StateFormat(format!(
            "expected {} payload bytes for d={d}, L={l}, found {}",
            dim * 16,
            bytes.len()
        )));
    }
    let amps = bytes
        .chunks_exact(16)
        .map(|c| {
            C64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    StateVector::new(d, l, amps)
}
