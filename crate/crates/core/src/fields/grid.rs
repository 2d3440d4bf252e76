use crate::error::{Error, Result};

/// Regular sampling lattice. Sample `(i, j)` sits at `(ox + i*dx, oy + j*dy)`
/// and is stored at flat index `j * nx + i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2 {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub ox: f64,
    pub oy: f64,
}

impl Grid2 {
    pub fn new(nx: usize, ny: usize, dx: f64, dy: f64, ox: f64, oy: f64) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 samples per axis, got {nx}x{ny}"
            )));
        }
        if !(dx > 0.0 && dy > 0.0 && dx.is_finite() && dy.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "spacing must be positive and finite, got dx={dx}, dy={dy}"
            )));
        }
        if !(ox.is_finite() && oy.is_finite()) {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        Ok(Self {
            nx,
            ny,
            dx,
            dy,
            ox,
            oy,
        })
    }

    /// Grid whose samples are placed symmetrically about the origin.
    pub fn centered(nx: usize, ny: usize, dx: f64, dy: f64) -> Result<Self> {
        let ox = -0.5 * (nx as f64 - 1.0) * dx;
        let oy = -0.5 * (ny as f64 - 1.0) * dy;
        Self::new(nx, ny, dx, dy, ox, oy)
    }

    /// `n x n` centered grid spanning `[-half_width, half_width]` in both axes.
    pub fn square(n: usize, half_width: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need n >= 2, got {n}")));
        }
        let d = 2.0 * half_width / (n as f64 - 1.0);
        Self::centered(n, n, d, d)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.ox + i as f64 * self.dx
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        self.oy + j as f64 * self.dy
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Coordinates of the sample at flat index `k`.
    #[inline]
    pub fn point(&self, k: usize) -> (f64, f64) {
        (self.x(k % self.nx), self.y(k / self.nx))
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.nx - 1)
    }

    pub fn y_max(&self) -> f64 {
        self.y(self.ny - 1)
    }

    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    /// Largest distance from the world origin to any sample.
    pub fn max_radius(&self) -> f64 {
        let xs = [self.ox, self.x_max()];
        let ys = [self.oy, self.y_max()];
        xs.iter()
            .flat_map(|x| ys.iter().map(move |y| x.hypot(*y)))
            .fold(0.0, f64::max)
    }

    pub fn check_same(&self, other: &Grid2) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Bilinear interpolation of `values` at `(x, y)`; zero outside the lattice.
    #[inline]
    pub fn bilinear(&self, values: &[f64], x: f64, y: f64) -> f64 {
        let u = (x - self.ox) / self.dx;
        let v = (y - self.oy) / self.dy;
        if !(u >= 0.0 && v >= 0.0) {
            return 0.0;
        }
        let i0 = u.floor() as usize;
        let j0 = v.floor() as usize;
        if i0 >= self.nx || j0 >= self.ny {
            return 0.0;
        }
        let fu = u - i0 as f64;
        let fv = v - j0 as f64;
        let i1 = (i0 + 1).min(self.nx - 1);
        let j1 = (j0 + 1).min(self.ny - 1);
        // The last row/column interpolates toward zero beyond the edge.
        let edge_u = if i1 == i0 { 0.0 } else { 1.0 };
        let edge_v = if j1 == j0 { 0.0 } else { 1.0 };
        let r0 = j0 * self.nx;
        let r1 = j1 * self.nx;
        let a = values[r0 + i0];
        let b = values[r0 + i1] * edge_u;
        let c = values[r1 + i0] * edge_v;
        let d = values[r1 + i1] * edge_u * edge_v;
        (a * (1.0 - fu) + b * fu) * (1.0 - fv) + (c * (1.0 - fu) + d * fu) * fv
    }
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if let Some(k) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::param(format!(
            "{what} has a non-finite value at index {k}"
        )));
    }
    Ok(())
}

/// Grid-sampled scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField2 {
    grid: Grid2,
    values: Vec<f64>,
}

impl ScalarField2 {
    pub fn new(grid: Grid2, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::param(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        check_finite(&values, "scalar field")?;
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid2) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid2, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|k| {
                let (x, y) = grid.point(k);
                f(x, y)
            })
            .collect();
        Self { grid, values }
    }

    pub(crate) fn from_vec_unchecked(grid: Grid2, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn sample(&self, x: f64, y: f64) -> f64 {
        self.grid.bilinear(&self.values, x, y)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_vec_unchecked(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| v * s)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self::from_vec_unchecked(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self::from_vec_unchecked(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }
}

/// Component selector for symmetric 2x2 tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorComponent {
    C11,
    C22,
    C12,
}

impl TensorComponent {
    pub const ALL: [TensorComponent; 3] = [Self::C11, Self::C22, Self::C12];

    pub fn name(self) -> &'static str {
        match self {
            Self::C11 => "c11",
            Self::C22 => "c22",
            Self::C12 => "c12",
        }
    }
}

/// Grid-sampled symmetric 2x2 tensor field (strain, stress, ...).
///
/// Only the three independent components are stored. Norms use the
/// Frobenius convention where `c12` is counted twice.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField2 {
    grid: Grid2,
    c11: Vec<f64>,
    c22: Vec<f64>,
    c12: Vec<f64>,
}

impl TensorField2 {
    pub fn new(grid: Grid2, c11: Vec<f64>, c22: Vec<f64>, c12: Vec<f64>) -> Result<Self> {
        for (name, c) in [("c11", &c11), ("c22", &c22), ("c12", &c12)] {
            if c.len() != grid.len() {
                return Err(Error::param(format!(
                    "component {name}: expected {} values, got {}",
                    grid.len(),
                    c.len()
                )));
            }
            check_finite(c, name)?;
        }
        Ok(Self { grid, c11, c22, c12 })
    }

    pub(crate) fn from_vecs_unchecked(
        grid: Grid2,
        c11: Vec<f64>,
        c22: Vec<f64>,
        c12: Vec<f64>,
    ) -> Self {
        Self { grid, c11, c22, c12 }
    }

    pub fn zeros(grid: Grid2) -> Self {
        let n = grid.len();
        Self {
            grid,
            c11: vec![0.0; n],
            c22: vec![0.0; n],
            c12: vec![0.0; n],
        }
    }

    /// Samples `f(x, y) -> [c11, c22, c12]` on every grid point.
    pub fn from_fn(grid: Grid2, f: impl Fn(f64, f64) -> [f64; 3]) -> Self {
        let n = grid.len();
        let mut out = Self::zeros(grid);
        for k in 0..n {
            let (x, y) = grid.point(k);
            let [a, b, c] = f(x, y);
            out.c11[k] = a;
            out.c22[k] = b;
            out.c12[k] = c;
        }
        out
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    pub fn c11(&self) -> &[f64] {
        &self.c11
    }

    pub fn c22(&self) -> &[f64] {
        &self.c22
    }

    pub fn c12(&self) -> &[f64] {
        &self.c12
    }

    pub fn component(&self, c: TensorComponent) -> &[f64] {
        match c {
            TensorComponent::C11 => &self.c11,
            TensorComponent::C22 => &self.c22,
            TensorComponent::C12 => &self.c12,
        }
    }

    pub fn at(&self, k: usize) -> [f64; 3] {
        [self.c11[k], self.c22[k], self.c12[k]]
    }

    /// Squared Frobenius norm at flat index `k`.
    #[inline]
    pub fn frobenius_sq(&self, k: usize) -> f64 {
        self.c11[k] * self.c11[k] + self.c22[k] * self.c22[k] + 2.0 * self.c12[k] * self.c12[k]
    }

    pub fn max_frobenius(&self) -> f64 {
        (0..self.grid.len())
            .map(|k| self.frobenius_sq(k))
            .fold(0.0, f64::max)
            .sqrt()
    }

    pub fn trace(&self) -> ScalarField2 {
        ScalarField2::from_vec_unchecked(
            self.grid,
            self.c11.iter().zip(&self.c22).map(|(a, b)| a + b).collect(),
        )
    }

    /// Applies a pointwise map to the component triple.
    pub fn map(&self, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let mut out = Self::zeros(self.grid);
        for k in 0..self.grid.len() {
            let [a, b, c] = f(self.at(k));
            out.c11[k] = a;
            out.c22[k] = b;
            out.c12[k] = c;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|[a, b, c]| [a * s, b * s, c * s])
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let z = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect();
        Ok(Self {
            grid: self.grid,
            c11: z(&self.c11, &other.c11),
            c22: z(&self.c22, &other.c22),
            c12: z(&self.c12, &other.c12),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Frobenius inner product summed over samples where `weight(k)` is true.
    pub fn inner_masked(&self, other: &Self, include: impl Fn(usize) -> bool) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        Ok((0..self.grid.len())
            .filter(|&k| include(k))
            .map(|k| {
                self.c11[k] * other.c11[k]
                    + self.c22[k] * other.c22[k]
                    + 2.0 * self.c12[k] * other.c12[k]
            })
            .sum())
    }

    /// Rotates the field by +90 degrees about the origin on a square centered
    /// grid: `f'(x) = R f(R^T x) R^T`, which maps `c11 -> c22`, `c22 -> c11`,
    /// `c12 -> -c12`.
    pub fn rotate90(&self) -> Result<Self> {
        let g = self.grid;
        let centered = (g.ox + 0.5 * (g.nx as f64 - 1.0) * g.dx).abs() < 1e-12 * g.dx
            && (g.oy + 0.5 * (g.ny as f64 - 1.0) * g.dy).abs() < 1e-12 * g.dy;
        if g.nx != g.ny || g.dx != g.dy || !centered {
            return Err(Error::param("rotate90 needs a square grid centered on the origin"));
        }
        let n = g.nx;
        let mut out = Self::zeros(g);
        for j in 0..n {
            for i in 0..n {
                // Destination (i, j) at (x, y) takes the source at R^T (x, y) = (y, -x).
                let si = j;
                let sj = n - 1 - i;
                let s = g.index(si, sj);
                let d = g.index(i, j);
                out.c11[d] = self.c22[s];
                out.c22[d] = self.c11[s];
                out.c12[d] = -self.c12[s];
            }
        }
        Ok(out)
    }
}

/// Grid-sampled 2-vector field (divergences, body forces).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField2 {
    grid: Grid2,
    x: Vec<f64>,
    y: Vec<f64>,
}

impl VectorField2 {
    pub fn new(grid: Grid2, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != grid.len() || y.len() != grid.len() {
            return Err(Error::param("vector field component length mismatch"));
        }
        check_finite(&x, "vector x component")?;
        check_finite(&y, "vector y component")?;
        Ok(Self { grid, x, y })
    }

    pub fn zeros(grid: Grid2) -> Self {
        Self {
            grid,
            x: vec![0.0; grid.len()],
            y: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid2, f: impl Fn(f64, f64) -> [f64; 2]) -> Self {
        let mut out = Self::zeros(grid);
        for k in 0..grid.len() {
            let (px, py) = grid.point(k);
            let [a, b] = f(px, py);
            out.x[k] = a;
            out.y[k] = b;
        }
        out
    }

    pub(crate) fn from_vecs_unchecked(grid: Grid2, x: Vec<f64>, y: Vec<f64>) -> Self {
        Self { grid, x, y }
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn sample(&self, px: f64, py: f64) -> [f64; 2] {
        [
            self.grid.bilinear(&self.x, px, py),
            self.grid.bilinear(&self.y, px, py),
        ]
    }

    /// Root-mean-square magnitude over all samples.
    pub fn rms(&self) -> f64 {
        let s: f64 = self.x.iter().zip(&self.y).map(|(a, b)| a * a + b * b).sum();
        (s / self.grid.len() as f64).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.y).all(|v| v.is_finite())
    }
}
