use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::Grid2;

const MAGIC: &str = "SGM1";
const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SinogramKind {
    /// Line integrals of a scalar field.
    ScalarIntegral,
    /// Longitudinal ray transform of a strain field.
    LrtIntegral,
    /// Path-averaged strain, i.e. the LRT divided by the chord length.
    AverageStrain,
}

impl SinogramKind {
    pub fn token(self) -> &'static str {
        match self {
            SinogramKind::ScalarIntegral => "scalar",
            SinogramKind::LrtIntegral => "lrt",
            SinogramKind::AverageStrain => "average",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        match s {
            "scalar" => Some(SinogramKind::ScalarIntegral),
            "lrt" => Some(SinogramKind::LrtIntegral),
            "average" => Some(SinogramKind::AverageStrain),
            _ => None,
        }
    }
}

/// Offset sampling: `n_s` detector bins of width `ds`, symmetric about zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorSpec {
    pub n_s: usize,
    pub ds: f64,
}

impl DetectorSpec {
    pub fn new(n_s: usize, ds: f64) -> Result<Self> {
        if n_s < 2 {
            return Err(Error::param(format!("need at least 2 detector bins, got {n_s}")));
        }
        if !(ds > 0.0 && ds.is_finite()) {
            return Err(Error::param(format!("detector spacing must be positive, got {ds}")));
        }
        Ok(Self { n_s, ds })
    }

    /// Spacing `min(dx, dy)`, wide enough to cover every sample of `grid`.
    pub fn for_grid(grid: &Grid2) -> Self {
        let ds = grid.dx.min(grid.dy);
        let half = (grid.max_radius() / ds).ceil() as usize;
        Self {
            n_s: 2 * half + 1,
            ds,
        }
    }

    #[inline]
    pub fn s(&self, k: usize) -> f64 {
        (k as f64 - self.centre()) * self.ds
    }

    #[inline]
    pub(crate) fn centre(&self) -> f64 {
        (self.n_s as f64 - 1.0) / 2.0
    }

    pub fn s_values(&self) -> Vec<f64> {
        (0..self.n_s).map(|k| self.s(k)).collect()
    }

    pub fn half_width(&self) -> f64 {
        self.centre() * self.ds
    }
}

/// Ray data indexed by `(angle, offset)`, stored row-major by angle.
#[derive(Debug, Clone, PartialEq)]
pub struct Sinogram {
    kind: SinogramKind,
    angles: Vec<f64>,
    detector: DetectorSpec,
    data: Vec<f64>,
}

impl Sinogram {
    pub fn new(
        kind: SinogramKind,
        angles: Vec<f64>,
        detector: DetectorSpec,
        data: Vec<f64>,
    ) -> Result<Self> {
        check_angles(&angles)?;
        DetectorSpec::new(detector.n_s, detector.ds)?;
        if data.len() != angles.len() * detector.n_s {
            return Err(Error::param(format!(
                "sinogram data has {} values, expected {} x {}",
                data.len(),
                angles.len(),
                detector.n_s
            )));
        }
        if let Some(k) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::param(format!("non-finite sinogram value at index {k}")));
        }
        Ok(Self {
            kind,
            angles,
            detector,
            data,
        })
    }

    pub(crate) fn from_parts_unchecked(
        kind: SinogramKind,
        angles: Vec<f64>,
        detector: DetectorSpec,
        data: Vec<f64>,
    ) -> Self {
        Self {
            kind,
            angles,
            detector,
            data,
        }
    }

    pub fn zeros(kind: SinogramKind, angles: Vec<f64>, detector: DetectorSpec) -> Result<Self> {
        let n = angles.len() * detector.n_s;
        Self::new(kind, angles, detector, vec![0.0; n])
    }

    pub fn kind(&self) -> SinogramKind {
        self.kind
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn detector(&self) -> &DetectorSpec {
        &self.detector
    }

    pub fn n_angles(&self) -> usize {
        self.angles.len()
    }

    pub fn n_s(&self) -> usize {
        self.detector.n_s
    }

    pub fn ds(&self) -> f64 {
        self.detector.ds
    }

    pub fn s_values(&self) -> Vec<f64> {
        self.detector.s_values()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, a: usize) -> &[f64] {
        let n = self.detector.n_s;
        &self.data[a * n..(a + 1) * n]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn with_kind(mut self, kind: SinogramKind) -> Self {
        self.kind = kind;
        self
    }

    /// Applies `f(angle, s, value)` to every sample.
    pub fn map(&self, f: impl Fn(f64, f64, f64) -> f64) -> Result<Self> {
        let n = self.detector.n_s;
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(k, &v)| f(self.angles[k / n], self.detector.s(k % n), v))
            .collect();
        Self::new(self.kind, self.angles.clone(), self.detector, data)
    }

    pub fn sub(&self, other: &Sinogram) -> Result<Sinogram> {
        if self.angles != other.angles || self.detector != other.detector {
            return Err(Error::param("sinograms have different sampling"));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self::from_parts_unchecked(self.kind, self.angles.clone(), self.detector, data))
    }
}

fn check_angles(angles: &[f64]) -> Result<()> {
    if angles.is_empty() {
        return Err(Error::param("sinogram has no angles"));
    }
    for (k, &a) in angles.iter().enumerate() {
        if !(0.0..TWO_PI).contains(&a) {
            return Err(Error::param(format!("angle {a} at index {k} is outside [0, 2pi)")));
        }
        if k > 0 && a <= angles[k - 1] {
            return Err(Error::param("angles must be strictly increasing"));
        }
    }
    Ok(())
}

/// `SGM1 <kind> <n_theta> <n_s> <ds>` header, then the angles, then row-major
/// data, all little-endian `f64`.
pub fn encode_sinogram(sg: &Sinogram, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(
        out,
        "{MAGIC} {} {} {} {}",
        sg.kind.token(),
        sg.n_angles(),
        sg.n_s(),
        sg.ds()
    )?;
    for v in sg.angles.iter().chain(&sg.data) {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn decode_sinogram(input: &mut impl BufRead) -> Result<Sinogram> {
    let mut header = Vec::new();
    input
        .by_ref()
        .take(256)
        .read_until(b'\n', &mut header)
        .map_err(|e| Error::format("sinogram header", e.to_string()))?;
    if header.last() != Some(&b'\n') {
        return Err(Error::format("sinogram header", "missing newline-terminated header"));
    }
    let text = String::from_utf8_lossy(&header[..header.len() - 1]).into_owned();
    let t: Vec<&str> = text.split_whitespace().collect();
    if t.len() != 5 || t[0] != MAGIC {
        return Err(Error::format(
            "sinogram header",
            format!("expected `{MAGIC} kind n_theta n_s ds`, got `{text}`"),
        ));
    }
    let kind = SinogramKind::from_token(t[1])
        .ok_or_else(|| Error::format("sinogram header", format!("unknown kind `{}`", t[1])))?;
    let bad = |what: &str| Error::format("sinogram header", format!("bad {what}"));
    let n_theta: usize = t[2].parse().map_err(|_| bad("n_theta"))?;
    let n_s: usize = t[3].parse().map_err(|_| bad("n_s"))?;
    let ds: f64 = t[4].parse().map_err(|_| bad("ds"))?;
    let detector = DetectorSpec::new(n_s, ds)?;

    let mut payload = Vec::new();
    input
        .read_to_end(&mut payload)
        .map_err(|e| Error::format("sinogram payload", e.to_string()))?;
    let expected = 8 * n_theta * (1 + n_s);
    if payload.len() != expected {
        return Err(Error::format(
            "sinogram payload",
            format!("expected {expected} bytes, found {}", payload.len()),
        ));
    }
    let mut values = payload
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().expect("8-byte chunk")));
    let angles: Vec<f64> = values.by_ref().take(n_theta).collect();
    let data: Vec<f64> = values.collect();
    Sinogram::new(kind, angles, detector, data)
}

pub fn write_sinogram(sg: &Sinogram, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    encode_sinogram(sg, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn read_sinogram(path: impl AsRef<Path>) -> Result<Sinogram> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    decode_sinogram(&mut BufReader::new(file))
}

/// Writes `theta,s,value` rows.
pub fn write_sinogram_csv(sg: &Sinogram, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let wrap = |e: csv::Error| Error::io(path, e.into());
    let mut w = csv::Writer::from_path(path).map_err(wrap)?;
    w.write_record(["theta", "s", "value"]).map_err(wrap)?;
    for (a, &theta) in sg.angles.iter().enumerate() {
        for (k, v) in sg.row(a).iter().enumerate() {
            w.write_record([theta.to_string(), sg.detector.s(k).to_string(), v.to_string()])
                .map_err(wrap)?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a `theta,s,value` table into a sinogram of the given kind.
///
/// Every `(theta, s)` pair of the implied lattice must be present exactly
/// once; offsets must be uniformly spaced and symmetric about zero.
pub fn read_sinogram_csv(path: impl AsRef<Path>, kind: SinogramKind) -> Result<Sinogram> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::io(path, e.into()))?;
    let headers = r
        .headers()
        .map_err(|e| Error::format("sinogram csv", e.to_string()))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::format("sinogram csv", format!("missing column `{name}`")))
    };
    let (ct, cs, cv) = (col("theta")?, col("s")?, col("value")?);
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::format("sinogram csv", e.to_string()))?;
        let get = |c: usize| -> Result<f64> {
            let s = rec.get(c).unwrap_or("").trim();
            s.parse()
                .map_err(|_| Error::format("sinogram csv", format!("bad number `{s}`")))
        };
        rows.push((get(ct)?, get(cs)?, get(cv)?));
    }
    if rows.is_empty() {
        return Err(Error::format("sinogram csv", "no rows"));
    }

    let mut angles: Vec<f64> = rows.iter().map(|r| r.0).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup();
    let mut offsets: Vec<f64> = rows.iter().map(|r| r.1).collect();
    offsets.sort_by(f64::total_cmp);
    offsets.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * (1.0 + b.abs()));
    if offsets.len() < 2 {
        return Err(Error::format("sinogram csv", "need at least two offsets"));
    }
    let ds = (offsets[offsets.len() - 1] - offsets[0]) / (offsets.len() - 1) as f64;
    let detector = DetectorSpec::new(offsets.len(), ds)?;
    let tol = 1e-6 * ds;
    for (k, s) in offsets.iter().enumerate() {
        if (s - detector.s(k)).abs() > tol {
            return Err(Error::format(
                "sinogram csv",
                "offsets must be uniformly spaced and symmetric about 0",
            ));
        }
    }

    let n_s = detector.n_s;
    let mut data = vec![f64::NAN; angles.len() * n_s];
    for (theta, s, v) in rows {
        let a = angles.binary_search_by(|x| x.total_cmp(&theta)).expect("angle present");
        let k = (s / ds + detector.centre()).round() as usize;
        let slot = &mut data[a * n_s + k];
        if !slot.is_nan() {
            return Err(Error::format(
                "sinogram csv",
                format!("duplicate sample at theta={theta}, s={s}"),
            ));
        }
        *slot = v;
    }
    if data.iter().any(|v| v.is_nan()) {
        return Err(Error::format("sinogram csv", "missing (theta, s) samples"));
    }
    Sinogram::new(kind, angles, detector, data)
}
