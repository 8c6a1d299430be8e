//! JSON form of a compiled MPS.
//!
//! Every float is written with 17 significant digits in scientific notation,
//! so a document parses back to the same bits and rewriting it reproduces
//! the input byte for byte. Complex numbers are `[re, im]` pairs and matrices
//! are flattened row-major.

use std::fs;
use std::path::Path;

use faer::Mat;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::mps::{BondSpectrum, CutSpectrum, MatrixProductState, Site};

/// Float serialized as `{:.16e}`.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(transparent)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom(format!("non-finite value {}", self.0)));
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

pub fn f17s(xs: &[f64]) -> Vec<F17> {
    xs.iter().copied().map(F17).collect()
}

type Pair = [F17; 2];

fn pair(z: C64) -> Pair {
    [F17(z.re), F17(z.im)]
}

fn unpair(p: &Pair) -> C64 {
    C64::new(p[0].0, p[1].0)
}

#[derive(Debug, Serialize, Deserialize)]
struct SiteDoc {
    rows: usize,
    cols: usize,
    a0: Vec<Pair>,
    a1: Vec<Pair>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CutDoc {
    singular_values: Vec<F17>,
    retained: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct SpectrumDoc {
    tolerance: F17,
    cuts: Vec<CutDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct MpsDoc {
    num_sites: usize,
    bond_dims: Vec<usize>,
    left_boundary: Vec<Pair>,
    right_boundary: Vec<Pair>,
    sites: Vec<SiteDoc>,
    spectrum: Option<SpectrumDoc>,
}

fn flatten(m: &Mat<C64>) -> Vec<Pair> {
    (0..m.nrows())
        .flat_map(|r| (0..m.ncols()).map(move |c| (r, c)))
        .map(|(r, c)| pair(m[(r, c)]))
        .collect()
}

fn unflatten(rows: usize, cols: usize, data: &[Pair], what: &str) -> Result<Mat<C64>> {
    if data.len() != rows * cols {
        return Err(Error::MalformedMps(format!(
            "{what}: {} entries for a {rows}x{cols} matrix",
            data.len()
        )));
    }
    Ok(Mat::from_fn(rows, cols, |r, c| unpair(&data[r * cols + c])))
}

/// Serializes `mps` (and its spectrum, when given) as pretty-printed JSON
/// ending in a newline.
pub fn mps_to_json(mps: &MatrixProductState, spectrum: Option<&BondSpectrum>) -> Result<String> {
    let doc = MpsDoc {
        num_sites: mps.num_sites(),
        bond_dims: mps.bond_dims(),
        left_boundary: mps.left_boundary().iter().copied().map(pair).collect(),
        right_boundary: mps.right_boundary().iter().copied().map(pair).collect(),
        sites: mps
            .sites()
            .iter()
            .map(|s| SiteDoc {
                rows: s.rows(),
                cols: s.cols(),
                a0: flatten(s.matrix(0)),
                a1: flatten(s.matrix(1)),
            })
            .collect(),
        spectrum: spectrum.map(|sp| SpectrumDoc {
            tolerance: F17(sp.tolerance),
            cuts: sp
                .cuts
                .iter()
                .map(|c| CutDoc {
                    singular_values: f17s(&c.singular_values),
                    retained: c.retained,
                })
                .collect(),
        }),
    };
    let mut out = serde_json::to_string_pretty(&doc)?;
    out.push('\n');
    Ok(out)
}

/// Exact inverse of [`mps_to_json`]; the declared shapes are cross-checked.
pub fn mps_from_json(text: &str) -> Result<(MatrixProductState, Option<BondSpectrum>)> {
    let doc: MpsDoc = serde_json::from_str(text)?;
    if doc.sites.len() != doc.num_sites {
        return Err(Error::MalformedMps(format!(
            "num_sites is {} but {} sites are listed",
            doc.num_sites,
            doc.sites.len()
        )));
    }
    let sites = doc
        .sites
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let a0 = unflatten(s.rows, s.cols, &s.a0, &format!("site {} a0", k + 1))?;
            let a1 = unflatten(s.rows, s.cols, &s.a1, &format!("site {} a1", k + 1))?;
            Site::new(a0, a1)
        })
        .collect::<Result<Vec<_>>>()?;
    let left = doc.left_boundary.iter().map(unpair).collect();
    let right = doc.right_boundary.iter().map(unpair).collect();
    let mps = MatrixProductState::new(sites, left, right)?;
    if mps.bond_dims() != doc.bond_dims {
        return Err(Error::MalformedMps(format!(
            "declared bond_dims {:?} but sites give {:?}",
            doc.bond_dims,
            mps.bond_dims()
        )));
    }
    let spectrum = doc.spectrum.map(|sp| BondSpectrum {
        tolerance: sp.tolerance.0,
        cuts: sp
            .cuts
            .into_iter()
            .map(|c| CutSpectrum {
                singular_values: c.singular_values.iter().map(|x| x.0).collect(),
                retained: c.retained,
            })
            .collect(),
    });
    if let Some(sp) = &spectrum {
        if sp.cuts.len() + 1 != mps.num_sites() {
            return Err(Error::MalformedMps(format!(
                "{} spectrum cuts for {} sites",
                sp.cuts.len(),
                mps.num_sites()
            )));
        }
    }
    Ok((mps, spectrum))
}

pub fn write_mps(path: &Path, mps: &MatrixProductState, spectrum: Option<&BondSpectrum>) -> Result<()> {
    fs::write(path, mps_to_json(mps, spectrum)?).map_err(|e| Error::io(path, e))
}

pub fn read_mps(path: &Path) -> Result<(MatrixProductState, Option<BondSpectrum>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    mps_from_json(&text)
}
