//! The `VFG1` binary field format: magic `VFG1`, then little-endian `u32`
//! dim, `u32` shape per axis, `f64` spacing, `f64` origin per axis and the
//! `f64` samples in row-major order with components interleaved. The
//! component count follows from the payload length.

use std::path::Path;

use super::grid::FieldGrid;
use crate::{Error, Point, Result};

const MAGIC: &[u8; 4] = b"VFG1";

pub fn encode(grid: &FieldGrid) -> Vec<u8> {
    let d = grid.dim;
    let mut out = Vec::with_capacity(8 + 4 * d + 8 * (1 + d) + 8 * grid.data.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(d as u32).to_le_bytes());
    for &n in &grid.shape[..d] {
        out.extend_from_slice(&(n as u32).to_le_bytes());
    }
    out.extend_from_slice(&grid.h.to_le_bytes());
    for a in 0..d {
        out.extend_from_slice(&grid.origin[a].to_le_bytes());
    }
    for v in &grid.data {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| Error::Format("truncated VFG1 header".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn decode(bytes: &[u8]) -> Result<FieldGrid> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(Error::Format("missing VFG1 magic".into()));
    }
    let dim = r.u32()? as usize;
    if dim != 2 && dim != 3 {
        return Err(Error::Format(format!("unsupported dimension {dim}")));
    }
    let mut shape = [1usize; 3];
    for s in shape.iter_mut().take(dim) {
        *s = r.u32()? as usize;
    }
    let h = r.f64()?;
    let mut origin = Point::zeros();
    for a in 0..dim {
        origin[a] = r.f64()?;
    }
    let payload = &bytes[r.pos..];
    let cells: usize = shape.iter().product();
    if payload.len() % 8 != 0 || cells == 0 || (payload.len() / 8) % cells != 0 || payload.is_empty() {
        return Err(Error::Format(format!("payload of {} bytes does not fit {cells} cells", payload.len())));
    }
    let ncomp = payload.len() / 8 / cells;
    let mut grid = FieldGrid::zeros(dim, shape, h, origin, ncomp)?;
    for (slot, chunk) in grid.data.iter_mut().zip(payload.chunks_exact(8)) {
        *slot = f64::from_le_bytes(chunk.try_into().unwrap());
    }
    Ok(grid)
}

pub fn write_vfg(path: &Path, grid: &FieldGrid) -> Result<()> {
    std::fs::write(path, encode(grid)).map_err(|source| Error::Io { path: path.into(), source })
}

pub fn read_vfg(path: &Path) -> Result<FieldGrid> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io { path: path.into(), source })?;
    decode(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_bit_exact() {
        let mut g = FieldGrid::zeros(3, [16, 17, 18], 0.1, Point::new(-0.8, 1.0 / 3.0, 2.0), 3).unwrap();
        for (i, v) in g.data.iter_mut().enumerate() {
            *v = (i as f64 * 0.37).sin() / 3.0;
        }
        g.data[5] = f64::MIN_POSITIVE / 4.0;
        g.data[6] = -0.0;
        let bytes = encode(&g);
        let back = decode(&bytes).unwrap();
        assert_eq!(back.shape, g.shape);
        assert_eq!(back.ncomp, 3);
        assert!(back.data.iter().zip(&g.data).all(|(a, b)| a.to_bits() == b.to_bits()));
        assert_eq!(encode(&back), bytes);
    }

    #[test]
    fn truncated_payload_rejected() {
        let g = FieldGrid::zeros(2, [16, 16, 1], 1.0, Point::zeros(), 1).unwrap();
        let bytes = encode(&g);
        assert!(decode(&bytes[..bytes.len() - 8]).is_err());
        assert!(decode(b"VFG2").is_err());
    }
}
