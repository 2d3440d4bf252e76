use crate::error::{Error, Result};

use super::contour::{signed_area, trace_loops};
use super::grid::{Grid2, TensorField2};

/// Number of vertices used to represent an analytic circle boundary.
const CIRCLE_VERTICES: usize = 2048;

/// Sample domain: per-sample inside flags plus the boundary as closed loops.
///
/// Loops follow the even-odd rule, so an annulus is an outer loop plus a
/// hole loop. The longest loop is the outer boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask2 {
    grid: Grid2,
    inside: Vec<bool>,
    loops: Vec<Vec<[f64; 2]>>,
}

impl Mask2 {
    /// Builds a mask from sample flags, tracing the boundary by marching squares.
    pub fn from_indicator(grid: Grid2, inside: Vec<bool>) -> Result<Self> {
        if inside.len() != grid.len() {
            return Err(Error::param("indicator length does not match grid"));
        }
        if !inside.iter().any(|&b| b) {
            return Err(Error::Degenerate("mask has no inside samples".into()));
        }
        let loops = trace_loops(&grid, &inside);
        Ok(Self {
            grid,
            inside,
            loops,
        })
    }

    /// Builds a mask from boundary loops; samples are inside by the even-odd rule.
    pub fn from_loops(grid: Grid2, loops: Vec<Vec<[f64; 2]>>) -> Result<Self> {
        if loops.iter().any(|l| l.len() < 3) {
            return Err(Error::Degenerate("boundary loop with fewer than 3 vertices".into()));
        }
        let inside = (0..grid.len())
            .map(|k| {
                let (x, y) = grid.point(k);
                even_odd(&loops, x, y)
            })
            .collect::<Vec<_>>();
        if !inside.iter().any(|&b| b) {
            return Err(Error::Degenerate("mask has no inside samples".into()));
        }
        Ok(Self {
            grid,
            inside,
            loops,
        })
    }

    /// Disk of radius `r` centred at `(cx, cy)` with an analytic boundary.
    pub fn disk(grid: Grid2, cx: f64, cy: f64, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::param(format!("disk radius must be positive, got {r}")));
        }
        let ring = (0..CIRCLE_VERTICES)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / CIRCLE_VERTICES as f64;
                [cx + r * t.cos(), cy + r * t.sin()]
            })
            .collect();
        let inside: Vec<bool> = (0..grid.len())
            .map(|k| {
                let (x, y) = grid.point(k);
                (x - cx).hypot(y - cy) <= r
            })
            .collect();
        if !inside.iter().any(|&b| b) {
            return Err(Error::Degenerate("disk contains no samples".into()));
        }
        Ok(Self {
            grid,
            inside,
            loops: vec![ring],
        })
    }

    /// Every sample inside.
    pub fn full(grid: Grid2) -> Self {
        let inside = vec![true; grid.len()];
        let loops = trace_loops(&grid, &inside);
        Self {
            grid,
            inside,
            loops,
        }
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    pub fn inside(&self) -> &[bool] {
        &self.inside
    }

    #[inline]
    pub fn is_inside(&self, k: usize) -> bool {
        self.inside[k]
    }

    pub fn count_inside(&self) -> usize {
        self.inside.iter().filter(|&&b| b).count()
    }

    /// Inside sample count times the cell area.
    pub fn area(&self) -> f64 {
        self.count_inside() as f64 * self.grid.cell_area()
    }

    pub fn loops(&self) -> &[Vec<[f64; 2]>] {
        &self.loops
    }

    /// The outer boundary (the loop enclosing the largest area).
    pub fn boundary_polygon(&self) -> &[[f64; 2]] {
        self.loops
            .iter()
            .max_by(|a, b| {
                signed_area(a)
                    .abs()
                    .partial_cmp(&signed_area(b).abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    /// Point-in-domain test against the boundary loops (even-odd rule).
    pub fn contains_point(&self, x: f64, y: f64) -> bool {
        even_odd(&self.loops, x, y)
    }

    /// Axis-aligned bounding box of the boundary: `[xmin, ymin, xmax, ymax]`.
    pub fn bounding_box(&self) -> [f64; 4] {
        let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        for &[x, y] in self.loops.iter().flatten() {
            b[0] = b[0].min(x);
            b[1] = b[1].min(y);
            b[2] = b[2].max(x);
            b[3] = b[3].max(y);
        }
        b
    }

    /// Length of the intersection of the line `{s * perp + t * dir}` with the domain.
    ///
    /// `dir` must be a unit vector; `perp` is its anticlockwise normal and
    /// `s` the signed offset of the line from the origin.
    pub fn chord_length(&self, dir: [f64; 2], s: f64) -> f64 {
        let perp = [-dir[1], dir[0]];
        let mut ts: Vec<f64> = Vec::new();
        for ring in &self.loops {
            let n = ring.len();
            for k in 0..n {
                let a = ring[k];
                let b = ring[(k + 1) % n];
                let va = a[0] * perp[0] + a[1] * perp[1] - s;
                let vb = b[0] * perp[0] + b[1] * perp[1] - s;
                if (va > 0.0) != (vb > 0.0) {
                    let ua = a[0] * dir[0] + a[1] * dir[1];
                    let ub = b[0] * dir[0] + b[1] * dir[1];
                    ts.push(ua + (ub - ua) * va / (va - vb));
                }
            }
        }
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        ts.chunks_exact(2).map(|p| p[1] - p[0]).sum()
    }

    /// Minimum distance from `(x, y)` to the boundary, with the closest point.
    pub fn nearest_boundary_point(&self, x: f64, y: f64) -> (f64, [f64; 2]) {
        let mut best = (f64::INFINITY, [x, y]);
        for ring in &self.loops {
            let n = ring.len();
            for k in 0..n {
                let a = ring[k];
                let b = ring[(k + 1) % n];
                let (ex, ey) = (b[0] - a[0], b[1] - a[1]);
                let l2 = ex * ex + ey * ey;
                let t = if l2 > 0.0 {
                    (((x - a[0]) * ex + (y - a[1]) * ey) / l2).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                let p = [a[0] + t * ex, a[1] + t * ey];
                let d = (p[0] - x).hypot(p[1] - y);
                if d < best.0 {
                    best = (d, p);
                }
            }
        }
        best
    }
}

fn even_odd(loops: &[Vec<[f64; 2]>], x: f64, y: f64) -> bool {
    let mut inside = false;
    for ring in loops {
        let n = ring.len();
        let mut j = n - 1;
        for i in 0..n {
            let [xi, yi] = ring[i];
            let [xj, yj] = ring[j];
            if (yi > y) != (yj > y) {
                let xc = xj + (y - yj) * (xi - xj) / (yi - yj);
                if x < xc {
                    inside = !inside;
                }
            }
            j = i;
        }
    }
    inside
}

/// Domain of a field: samples whose Frobenius magnitude exceeds
/// `tol * max_magnitude`.
pub fn mask_from_support(f: &TensorField2, tol: f64) -> Result<Mask2> {
    if !(tol >= 0.0) {
        return Err(Error::param(format!("tolerance must be >= 0, got {tol}")));
    }
    let max = f.max_frobenius();
    if max == 0.0 {
        return Err(Error::Degenerate("field is identically zero".into()));
    }
    let threshold = tol * max;
    let inside = (0..f.grid().len())
        .map(|k| f.frobenius_sq(k).sqrt() > threshold)
        .collect();
    Mask2::from_indicator(*f.grid(), inside)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn disk_chord_matches_geometry() {
        let g = Grid2::square(64, 1.2).unwrap();
        let m = Mask2::disk(g, 0.0, 0.0, 1.0).unwrap();
        for &s in &[0.0, 0.3, -0.7, 0.95] {
            for &th in &[0.0, 0.4, 2.0] {
                let l = m.chord_length([f64::cos(th), f64::sin(th)], s);
                let exact = 2.0 * (1.0f64 - s * s).sqrt();
                assert!((l - exact).abs() < 1e-4, "s={s} th={th}: {l} vs {exact}");
            }
        }
        assert_eq!(m.chord_length([1.0, 0.0], 1.5), 0.0);
    }

    #[test]
    fn annulus_chord_skips_hole() {
        let g = Grid2::square(8, 3.0).unwrap();
        let outer: Vec<[f64; 2]> = vec![[-2.0, -2.0], [2.0, -2.0], [2.0, 2.0], [-2.0, 2.0]];
        let hole: Vec<[f64; 2]> = vec![[-1.0, -1.0], [-1.0, 1.0], [1.0, 1.0], [1.0, -1.0]];
        let m = Mask2::from_loops(g, vec![outer, hole]).unwrap();
        assert!((m.chord_length([1.0, 0.0], 0.0) - 2.0).abs() < 1e-12);
        assert!((m.chord_length([1.0, 0.0], 1.5) - 4.0).abs() < 1e-12);
        assert!(!m.contains_point(0.0, 0.0));
        assert!(m.contains_point(1.5, 0.0));
    }

    #[test]
    fn support_of_disk_phantom_tracks_circle() {
        let g = Grid2::square(101, 1.2).unwrap();
        let f = TensorField2::from_fn(g, |x, y| {
            if x.hypot(y) <= 1.0 {
                [1.0, 1.0, 0.0]
            } else {
                [0.0; 3]
            }
        });
        let m = mask_from_support(&f, 1e-9).unwrap();
        for &[x, y] in m.boundary_polygon() {
            assert!((x.hypot(y) - 1.0).abs() <= g.dx, "vertex off circle by more than a cell");
        }
        // Samples inside the traced polygon are exactly the flagged samples.
        for k in 0..g.len() {
            let (x, y) = g.point(k);
            assert_eq!(m.contains_point(x, y), m.is_inside(k));
        }
        assert!((m.area() - PI).abs() / PI < 0.02);
    }

    #[test]
    fn zero_tolerance_on_positive_field_is_full() {
        let g = Grid2::square(9, 1.0).unwrap();
        let f = TensorField2::from_fn(g, |x, y| [1.0 + x * x + y * y, 0.5, 0.0]);
        let m = mask_from_support(&f, 0.0).unwrap();
        assert_eq!(m.count_inside(), g.len());
    }

    #[test]
    fn zero_field_is_rejected() {
        let g = Grid2::square(9, 1.0).unwrap();
        assert!(mask_from_support(&TensorField2::zeros(g), 1e-9).is_err());
        let f = TensorField2::from_fn(g, |_, _| [1.0, 0.0, 0.0]);
        assert!(mask_from_support(&f, -1.0).is_err());
    }
}
