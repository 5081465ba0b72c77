//! Binary grid format: 16-byte magic, one JSON header line, little-endian f64 values.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{GridError, Result};
use crate::grid::Grid;
use crate::measure::{GridMeasure, Kind};

pub const MAGIC: &[u8; 16] = b"GMTLABGRIDv1\0\0\0\0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Header {
    #[serde(flatten)]
    grid: Grid,
    kind: Kind,
}

/// Contents of a grid file.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFile {
    pub grid: Grid,
    pub kind: Kind,
    pub values: Vec<f64>,
}

pub fn write_grid<W: Write, M: GridMeasure + ?Sized>(w: &mut W, m: &M) -> std::io::Result<()> {
    write_raw(w, m.grid(), m.kind(), m.raw())
}

pub fn write_raw<W: Write>(w: &mut W, grid: &Grid, kind: Kind, values: &[f64]) -> std::io::Result<()> {
    w.write_all(MAGIC)?;
    let header = Header { grid: grid.clone(), kind };
    serde_json::to_writer(&mut *w, &header)?;
    w.write_all(b"\n")?;
    for v in values {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_grid<R: BufRead>(r: &mut R) -> Result<GridFile> {
    let io = |e: std::io::Error| GridError::Format(e.to_string());
    let mut magic = [0u8; 16];
    r.read_exact(&mut magic).map_err(io)?;
    if &magic != MAGIC {
        return Err(GridError::Format("bad magic".into()));
    }
    let mut line = Vec::new();
    r.read_until(b'\n', &mut line).map_err(io)?;
    if line.last() != Some(&b'\n') {
        return Err(GridError::Format("unterminated header".into()));
    }
    let header: Header =
        serde_json::from_slice(&line[..line.len() - 1]).map_err(|e| GridError::Format(e.to_string()))?;
    let grid = Grid::new(header.grid.dim(), header.grid.cells_per_side(), header.grid.side(), header.grid.origin().to_vec())?;
    let count = grid.len() * header.kind.components(grid.dim());
    let mut bytes = vec![0u8; count * 8];
    r.read_exact(&mut bytes).map_err(io)?;
    let mut rest = [0u8; 1];
    if r.read(&mut rest).map_err(io)? != 0 {
        return Err(GridError::Format("trailing bytes".into()));
    }
    let values = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok(GridFile { grid, kind: header.kind, values })
}
