//! File formats: density matrices, invariant records, slice meshes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use qutrit_orbit::invariants::{casimirs, local_invariants};
use qutrit_orbit::linalg::Mat3;
use qutrit_orbit::membership::{key_points, SliceMesh};
use qutrit_orbit::su3::{BlochVector, DensityMatrix, DENSITY_TOL};

pub const SCHEMA_VERSION: u32 = 1;

/// `{"re": [[..];3], "im": [[..];3]}`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityJson {
    pub re: [[f64; 3]; 3],
    #[serde(default)]
    pub im: [[f64; 3]; 3],
}

impl DensityJson {
    pub fn from_matrix(m: &Mat3) -> Self {
        DensityJson { re: m.re(), im: m.im() }
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        let m = Mat3::from_parts(self.re, self.im);
        Ok(DensityMatrix::new(m, DENSITY_TOL)?)
    }
}

pub fn read_density(path: &Path) -> Result<DensityMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed: DensityJson = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    parsed.to_density()
}

pub fn parse_bloch(s: &str) -> Result<BlochVector> {
    let values = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("not a number: {t:?}")))
        .collect::<Result<Vec<f64>>>()?;
    let Ok(xi) = <[f64; 8]>::try_from(values.as_slice()) else {
        bail!("expected 8 comma-separated Bloch components, got {}", values.len());
    };
    Ok(BlochVector::new(xi)?)
}

/// Flat invariant record.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub c2: f64,
    pub c3: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub f4: f64,
}

impl InvariantRecord {
    pub const CSV_HEADER: &'static str = "c2,c3,f1,f2,f3,f4";

    pub fn of(xi: &BlochVector) -> Self {
        let g = casimirs(xi);
        let l = local_invariants(xi);
        InvariantRecord { c2: g.c2, c3: g.c3, f1: l.f1, f2: l.f2, f3: l.f3, f4: l.f4 }
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{},{},{}", self.c2, self.c3, self.f1, self.f2, self.f3, self.f4)
    }
}

/// `slice_f1=<value>.<ext>`.
pub fn slice_file_name(f1: f64, ext: &str) -> String {
    format!("slice_f1={f1}.{ext}")
}

pub const SLICE_CSV_HEADER: &str = "f2,c2,c3_lo,c3_hi";

pub fn slice_csv(mesh: &SliceMesh) -> String {
    let mut s = String::with_capacity(32 * mesh.cells.len() + 32);
    s.push_str(SLICE_CSV_HEADER);
    s.push('\n');
    for c in &mesh.cells {
        let _ = writeln!(s, "{},{},{},{}", c.f2, c.c2, c.c3_lo, c.c3_hi);
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellJson {
    pub f2: f64,
    pub c2: f64,
    pub c3_lo: f64,
    pub c3_hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeyPointJson {
    pub name: String,
    pub c2: f64,
    pub c3: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceJson {
    pub schema_version: u32,
    pub f1: f64,
    pub n: usize,
    pub cells: Vec<CellJson>,
    /// Closed outline in the `(c2, c3)` plane.
    pub projection: Vec<[f64; 2]>,
    pub projection_area: f64,
    pub key_points: Vec<KeyPointJson>,
}

impl SliceJson {
    pub fn of(mesh: &SliceMesh) -> Self {
        SliceJson {
            schema_version: SCHEMA_VERSION,
            f1: mesh.f1,
            n: mesh.n,
            cells: mesh.cells.iter().map(|c| CellJson { f2: c.f2, c2: c.c2, c3_lo: c.c3_lo, c3_hi: c.c3_hi }).collect(),
            projection: mesh.projection.iter().map(|&(a, b)| [a, b]).collect(),
            projection_area: mesh.projection_area(),
            key_points: key_points(mesh.f1)
                .into_iter()
                .map(|p| KeyPointJson { name: p.name.to_string(), c2: p.c2, c3: p.c3 })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SliceFormat {
    Csv,
    Json,
}

/// Writes the mesh into `dir` and returns the path.
pub fn write_slice(mesh: &SliceMesh, dir: &Path, format: SliceFormat) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let (ext, body) = match format {
        SliceFormat::Csv => ("csv", slice_csv(mesh)),
        SliceFormat::Json => ("json", serde_json::to_string_pretty(&SliceJson::of(mesh))?),
    };
    let path = dir.join(slice_file_name(mesh.f1, ext));
    fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}
