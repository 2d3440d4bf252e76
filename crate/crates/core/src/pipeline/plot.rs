//! PNG renderings of fields, sinograms and sweep tables.
//!
//! Heatmaps use a blue-white-red map symmetric about zero, one panel per
//! component with its own scale bar. No text is drawn; the scales are in the
//! accompanying manifest.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fields::{Grid2, ScalarField2, TensorField2};
use crate::lrt::Sinogram;

const GAP: usize = 6;
const BAR: usize = 10;
const BACKGROUND: [u8; 3] = [255, 255, 255];

struct Canvas {
    w: usize,
    h: usize,
    px: Vec<u8>,
}

impl Canvas {
    fn new(w: usize, h: usize) -> Self {
        let mut px = Vec::with_capacity(w * h * 3);
        for _ in 0..w * h {
            px.extend_from_slice(&BACKGROUND);
        }
        Self { w, h, px }
    }

    fn set(&mut self, x: usize, y: usize, c: [u8; 3]) {
        if x < self.w && y < self.h {
            let k = 3 * (y * self.w + x);
            self.px[k..k + 3].copy_from_slice(&c);
        }
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), c: [u8; 3]) {
        let n = ((b.0 - a.0).abs().max((b.1 - a.1).abs()).ceil() as usize).max(1);
        for i in 0..=n {
            let t = i as f64 / n as f64;
            let x = a.0 + t * (b.0 - a.0);
            let y = a.1 + t * (b.1 - a.1);
            self.set(x.round() as usize, y.round() as usize, c);
        }
    }

    fn dot(&mut self, p: (f64, f64), c: [u8; 3]) {
        for dy in -2i64..=2 {
            for dx in -2i64..=2 {
                let (x, y) = (p.0.round() as i64 + dx, p.1.round() as i64 + dy);
                if x >= 0 && y >= 0 {
                    self.set(x as usize, y as usize, c);
                }
            }
        }
    }

    fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut enc = png::Encoder::new(BufWriter::new(file), self.w as u32, self.h as u32);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        let wrap = |e: png::EncodingError| Error::io(path, std::io::Error::other(e));
        let mut w = enc.write_header().map_err(wrap)?;
        w.write_image_data(&self.px).map_err(wrap)?;
        w.finish().map_err(wrap)
    }
}

/// Blue-white-red for `t` in `[-1, 1]`.
pub fn diverging(t: f64) -> [u8; 3] {
    let t = if t.is_finite() { t.clamp(-1.0, 1.0) } else { 0.0 };
    let fade = |v: f64| (255.0 * (1.0 - v)).round() as u8;
    if t >= 0.0 {
        [255, fade(t), fade(t)]
    } else {
        [fade(-t), fade(-t), 255]
    }
}

/// Draws panels of `nx` by `ny` samples side by side, each with its own
/// symmetric scale. Row `j = ny - 1` is at the top.
fn heatmap(path: &Path, nx: usize, ny: usize, panels: &[&[f64]]) -> Result<()> {
    let panel_w = nx + GAP + BAR;
    let mut c = Canvas::new(GAP + panels.len() * (panel_w + 2 * GAP), ny + 2 * GAP);
    for (p, values) in panels.iter().enumerate() {
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let scale = if scale > 0.0 { scale } else { 1.0 };
        let x0 = GAP + p * (panel_w + 2 * GAP);
        for j in 0..ny {
            for i in 0..nx {
                c.set(x0 + i, GAP + ny - 1 - j, diverging(values[j * nx + i] / scale));
            }
        }
        let bx = x0 + nx + GAP;
        for y in 0..ny {
            let t = 1.0 - 2.0 * y as f64 / (ny - 1).max(1) as f64;
            for x in 0..BAR {
                c.set(bx + x, GAP + y, diverging(t));
            }
        }
    }
    c.save(path)
}

pub fn write_tensor_png(f: &TensorField2, path: impl AsRef<Path>) -> Result<()> {
    let g = f.grid();
    heatmap(path.as_ref(), g.nx, g.ny, &[f.c11(), f.c22(), f.c12()])
}

pub fn write_scalar_png(f: &ScalarField2, path: impl AsRef<Path>) -> Result<()> {
    let g: &Grid2 = f.grid();
    heatmap(path.as_ref(), g.nx, g.ny, &[f.values()])
}

/// Offsets along x, angles along y.
pub fn write_sinogram_png(sg: &Sinogram, path: impl AsRef<Path>) -> Result<()> {
    heatmap(path.as_ref(), sg.n_s(), sg.n_angles(), &[sg.data()])
}

/// Log-log plot of one or more `(n, value)` series; non-positive values are
/// skipped. Series colours cycle red, blue, green.
pub fn write_loglog_png(series: &[Vec<(f64, f64)>], path: impl AsRef<Path>) -> Result<()> {
    const W: usize = 480;
    const H: usize = 360;
    const M: f64 = 30.0;
    const COLOURS: [[u8; 3]; 3] = [[200, 30, 30], [30, 60, 200], [20, 140, 40]];
    let pts: Vec<(f64, f64)> = series
        .iter()
        .flatten()
        .filter(|p| p.0 > 0.0 && p.1 > 0.0)
        .map(|p| (p.0.log10(), p.1.log10()))
        .collect();
    let mut c = Canvas::new(W, H);
    if pts.is_empty() {
        return c.save(path.as_ref());
    }
    let bounds = |sel: fn(&(f64, f64)) -> f64| {
        let lo = pts.iter().map(sel).fold(f64::INFINITY, f64::min).floor();
        let hi = pts.iter().map(sel).fold(f64::NEG_INFINITY, f64::max).ceil();
        (lo, if hi > lo { hi } else { lo + 1.0 })
    };
    let (x_lo, x_hi) = bounds(|p| p.0);
    let (y_lo, y_hi) = bounds(|p| p.1);
    let to_px = |lx: f64, ly: f64| {
        (
            M + (lx - x_lo) / (x_hi - x_lo) * (W as f64 - 2.0 * M),
            H as f64 - M - (ly - y_lo) / (y_hi - y_lo) * (H as f64 - 2.0 * M),
        )
    };
    let grey = [190, 190, 190];
    for d in (x_lo as i64)..=(x_hi as i64) {
        c.line(to_px(d as f64, y_lo), to_px(d as f64, y_hi), grey);
    }
    for d in (y_lo as i64)..=(y_hi as i64) {
        c.line(to_px(x_lo, d as f64), to_px(x_hi, d as f64), grey);
    }
    for (s, data) in series.iter().enumerate() {
        let colour = COLOURS[s % COLOURS.len()];
        let logs: Vec<(f64, f64)> = data
            .iter()
            .filter(|p| p.0 > 0.0 && p.1 > 0.0)
            .map(|p| to_px(p.0.log10(), p.1.log10()))
            .collect();
        for w in logs.windows(2) {
            c.line(w[0], w[1], colour);
        }
        for &p in &logs {
            c.dot(p, colour);
        }
    }
    c.save(path.as_ref())
}
