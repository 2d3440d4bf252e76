//! `STF1` field files and CSV export.
//!
//! Layout: one ASCII header line
//! `STF1 <ncomp> <nx> <ny> <dx> <dy> <ox> <oy>\n` followed by `ncomp`
//! row-major planes of little-endian `f64`. Tensor planes are stored in the
//! order `c11, c22, c12`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::grid::{Grid2, ScalarField2, TensorField2};
use super::mask::Mask2;

const MAGIC: &str = "STF1";
const MAX_HEADER: usize = 512;

/// A field loaded from disk.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Scalar(ScalarField2),
    Tensor(TensorField2),
}

impl Field {
    pub fn grid(&self) -> &Grid2 {
        match self {
            Field::Scalar(f) => f.grid(),
            Field::Tensor(f) => f.grid(),
        }
    }

    fn planes(&self) -> Vec<&[f64]> {
        match self {
            Field::Scalar(f) => vec![f.values()],
            Field::Tensor(f) => vec![f.c11(), f.c22(), f.c12()],
        }
    }

    pub fn into_tensor(self) -> Result<TensorField2> {
        match self {
            Field::Tensor(t) => Ok(t),
            Field::Scalar(_) => Err(Error::format("field file", "expected 3 components, found 1")),
        }
    }

    pub fn into_scalar(self) -> Result<ScalarField2> {
        match self {
            Field::Scalar(s) => Ok(s),
            Field::Tensor(_) => Err(Error::format("field file", "expected 1 component, found 3")),
        }
    }
}

impl From<ScalarField2> for Field {
    fn from(f: ScalarField2) -> Self {
        Field::Scalar(f)
    }
}

impl From<TensorField2> for Field {
    fn from(f: TensorField2) -> Self {
        Field::Tensor(f)
    }
}

pub fn encode_field(field: &Field, out: &mut impl Write) -> std::io::Result<()> {
    let g = field.grid();
    let planes = field.planes();
    writeln!(
        out,
        "{MAGIC} {} {} {} {} {} {} {}",
        planes.len(),
        g.nx,
        g.ny,
        g.dx,
        g.dy,
        g.ox,
        g.oy
    )?;
    for plane in planes {
        for v in plane {
            out.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn decode_field(input: &mut impl BufRead) -> Result<Field> {
    let mut header = Vec::new();
    input
        .by_ref()
        .take(MAX_HEADER as u64)
        .read_until(b'\n', &mut header)
        .map_err(|e| Error::format("field header", e.to_string()))?;
    if header.last() != Some(&b'\n') {
        return Err(Error::format("field header", "missing newline-terminated header"));
    }
    let header = std::str::from_utf8(&header[..header.len() - 1])
        .map_err(|_| Error::format("field header", "header is not UTF-8"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 8 || tokens[0] != MAGIC {
        return Err(Error::format(
            "field header",
            format!("expected `{MAGIC} ncomp nx ny dx dy ox oy`, got `{header}`"),
        ));
    }
    let int = |s: &str, name: &str| -> Result<usize> {
        s.parse()
            .map_err(|_| Error::format("field header", format!("bad {name} `{s}`")))
    };
    let real = |s: &str, name: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| Error::format("field header", format!("bad {name} `{s}`")))
    };
    let ncomp = int(tokens[1], "ncomp")?;
    if ncomp != 1 && ncomp != 3 {
        return Err(Error::format(
            "field header",
            format!("ncomp must be 1 or 3, got {ncomp}"),
        ));
    }
    let grid = Grid2::new(
        int(tokens[2], "nx")?,
        int(tokens[3], "ny")?,
        real(tokens[4], "dx")?,
        real(tokens[5], "dy")?,
        real(tokens[6], "ox")?,
        real(tokens[7], "oy")?,
    )?;

    let n = grid.len();
    let mut payload = Vec::with_capacity(ncomp * n * 8);
    input
        .read_to_end(&mut payload)
        .map_err(|e| Error::format("field payload", e.to_string()))?;
    if payload.len() != ncomp * n * 8 {
        return Err(Error::format(
            "field payload",
            format!(
                "expected {} bytes for {ncomp} planes of {}x{}, found {}",
                ncomp * n * 8,
                grid.nx,
                grid.ny,
                payload.len()
            ),
        ));
    }
    let mut planes: Vec<Vec<f64>> = payload
        .chunks_exact(n * 8)
        .map(|plane| {
            plane
                .chunks_exact(8)
                .map(|b| f64::from_le_bytes(b.try_into().expect("8-byte chunk")))
                .collect()
        })
        .collect();
    Ok(if ncomp == 1 {
        Field::Scalar(ScalarField2::new(grid, planes.remove(0))?)
    } else {
        let c12 = planes.pop().expect("3 planes");
        let c22 = planes.pop().expect("3 planes");
        let c11 = planes.pop().expect("3 planes");
        Field::Tensor(TensorField2::new(grid, c11, c22, c12)?)
    })
}

pub fn write_field(field: impl Into<Field>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let field = field.into();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    encode_field(&field, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn read_field(path: impl AsRef<Path>) -> Result<Field> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    decode_field(&mut BufReader::new(file))
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<TensorField2> {
    read_field(path)?.into_tensor()
}

pub fn read_scalar(path: impl AsRef<Path>) -> Result<ScalarField2> {
    read_field(path)?.into_scalar()
}

/// CSV with header `x,y,c11,c22,c12` (tensor) or `x,y,value` (scalar).
pub fn write_field_csv(field: &Field, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::io(path, e.into()))?;
    let g = field.grid();
    let planes = field.planes();
    let header: &[&str] = if planes.len() == 3 {
        &["x", "y", "c11", "c22", "c12"]
    } else {
        &["x", "y", "value"]
    };
    let wrap = |e: csv::Error| Error::io(path, e.into());
    w.write_record(header).map_err(wrap)?;
    for k in 0..g.len() {
        let (x, y) = g.point(k);
        let mut rec = vec![x.to_string(), y.to_string()];
        rec.extend(planes.iter().map(|p| p[k].to_string()));
        w.write_record(&rec).map_err(wrap)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Boundary loops as CSV with header `loop,x,y`.
pub fn write_mask_csv(mask: &Mask2, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let wrap = |e: csv::Error| Error::io(path, e.into());
    let mut w = csv::Writer::from_path(path).map_err(wrap)?;
    w.write_record(["loop", "x", "y"]).map_err(wrap)?;
    for (l, ring) in mask.loops().iter().enumerate() {
        for &[x, y] in ring {
            w.write_record([l.to_string(), x.to_string(), y.to_string()])
                .map_err(wrap)?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads boundary loops written by [`write_mask_csv`].
pub fn read_mask_loops(path: impl AsRef<Path>) -> Result<Vec<Vec<[f64; 2]>>> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::io(path, e.into()))?;
    let mut loops: Vec<Vec<[f64; 2]>> = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::format("mask csv", e.to_string()))?;
        if rec.len() != 3 {
            return Err(Error::format("mask csv", "expected columns loop,x,y"));
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse()
                .map_err(|_| Error::format("mask csv", format!("bad number `{s}`")))
        };
        let l: usize = rec[0]
            .trim()
            .parse()
            .map_err(|_| Error::format("mask csv", format!("bad loop id `{}`", &rec[0])))?;
        if l >= loops.len() {
            loops.resize_with(l + 1, Vec::new);
        }
        loops[l].push([parse(&rec[1])?, parse(&rec[2])?]);
    }
    if loops.is_empty() {
        return Err(Error::format("mask csv", "no vertices"));
    }
    Ok(loops)
}
