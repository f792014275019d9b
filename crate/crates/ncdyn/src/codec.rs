//! File formats for matrices, generators, maps, sections, units and gauge
//! elements.
//!
//! Every reader also accepts a report emitted by the CLI, taking the
//! payload from the report's field of the same name.

use std::fs;
use std::io;
use std::path::Path;

use ncdyn_core::cpdyn::{CpMap, GklsGenerator};
use ncdyn_core::freeprod::{FreeWord, Section, Time};
use ncdyn_core::prodsys::{ExpUnit, GaugeElement};
use ncdyn_core::{ComplexMatrix, C64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};
use crate::json::SCHEMA_VERSION;

/// Row-major matrix with separate real and imaginary parts. A missing
/// `im` reads as zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        MatrixJson { rows: m.rows(), cols: m.cols(), re: m.re(), im: m.im() }
    }
}

impl TryFrom<&MatrixJson> for ComplexMatrix {
    type Error = ncdyn_core::Error;

    fn try_from(m: &MatrixJson) -> ncdyn_core::Result<Self> {
        if m.im.is_empty() {
            ComplexMatrix::from_parts(m.rows, m.cols, &m.re, &vec![0.0; m.re.len()])
        } else {
            ComplexMatrix::from_parts(m.rows, m.cols, &m.re, &m.im)
        }
    }
}

pub fn matrices(ms: &[MatrixJson]) -> ncdyn_core::Result<Vec<ComplexMatrix>> {
    ms.iter().map(ComplexMatrix::try_from).collect()
}

pub fn matrices_json(ms: &[ComplexMatrix]) -> Vec<MatrixJson> {
    ms.iter().map(MatrixJson::from).collect()
}

/// Complex vector as parallel `re` and `im` arrays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorJson {
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

impl From<&[C64]> for VectorJson {
    fn from(v: &[C64]) -> Self {
        VectorJson { re: v.iter().map(|z| z.re).collect(), im: v.iter().map(|z| z.im).collect() }
    }
}

impl VectorJson {
    pub fn to_vec(&self) -> Result<Vec<C64>> {
        if self.im.is_empty() {
            return Ok(self.re.iter().map(|&x| C64::new(x, 0.0)).collect());
        }
        if self.im.len() != self.re.len() {
            return Err(CliError::Invalid(format!("vector has {} real and {} imaginary parts", self.re.len(), self.im.len())));
        }
        Ok(self.re.iter().zip(&self.im).map(|(&x, &y)| C64::new(x, y)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorJson {
    pub hamiltonian: MatrixJson,
    #[serde(default)]
    pub jumps: Vec<MatrixJson>,
}

impl From<&GklsGenerator> for GeneratorJson {
    fn from(g: &GklsGenerator) -> Self {
        GeneratorJson { hamiltonian: g.hamiltonian().into(), jumps: matrices_json(g.jumps()) }
    }
}

impl TryFrom<&GeneratorJson> for GklsGenerator {
    type Error = ncdyn_core::Error;

    fn try_from(g: &GeneratorJson) -> ncdyn_core::Result<Self> {
        GklsGenerator::new((&g.hamiltonian).try_into()?, matrices(&g.jumps)?)
    }
}

/// CP map in the Heisenberg picture, `φ(a) = Σ Kᵢ* a Kᵢ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub kraus: Vec<MatrixJson>,
}

impl From<&CpMap> for MapJson {
    fn from(m: &CpMap) -> Self {
        MapJson { kraus: matrices_json(m.kraus()) }
    }
}

impl TryFrom<&MapJson> for CpMap {
    type Error = ncdyn_core::Error;

    fn try_from(m: &MapJson) -> ncdyn_core::Result<Self> {
        let kraus = matrices(&m.kraus)?;
        let dim = kraus.first().map(|k| k.rows()).ok_or(ncdyn_core::Error::Empty("map needs at least one Kraus operator"))?;
        CpMap::new(dim, kraus)
    }
}

/// A time letter: an integer, or a rational written `"p/q"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimeJson {
    Int(i64),
    Text(String),
}

impl From<Time> for TimeJson {
    fn from(t: Time) -> Self {
        if t.is_integer() {
            TimeJson::Int(*t.numer())
        } else {
            TimeJson::Text(format!("{}/{}", t.numer(), t.denom()))
        }
    }
}

impl TimeJson {
    pub fn to_time(&self) -> Result<Time> {
        match self {
            TimeJson::Int(n) => Ok(Time::from_integer(*n)),
            TimeJson::Text(s) => parse_time(s),
        }
    }
}

/// Parses `"p"` or `"p/q"` with `q > 0`.
pub fn parse_time(s: &str) -> Result<Time> {
    let bad = || CliError::Invalid(format!("bad rational time {s:?}"));
    let (p, q) = match s.trim().split_once('/') {
        Some((p, q)) => (p.trim().parse::<i64>().map_err(|_| bad())?, q.trim().parse::<i64>().map_err(|_| bad())?),
        None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    if q <= 0 {
        return Err(bad());
    }
    Ok(Time::new(p, q))
}

/// One word of a section with the elementary tensors attached to it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub word: Vec<TimeJson>,
    pub tensors: Vec<Vec<MatrixJson>>,
}

pub type SectionJson = Vec<TermJson>;

pub fn section_json(f: &Section) -> SectionJson {
    f.terms()
        .map(|(w, ts)| TermJson {
            word: w.times().iter().map(|&t| t.into()).collect(),
            tensors: ts.iter().map(|t| matrices_json(t)).collect(),
        })
        .collect()
}

pub fn section_from_json(terms: &SectionJson) -> Result<Section> {
    let dim = terms
        .iter()
        .flat_map(|t| t.tensors.iter().flatten())
        .map(|m| m.rows)
        .next()
        .ok_or_else(|| CliError::Invalid("section has no tensors".into()))?;
    let mut f = Section::zero(dim);
    for term in terms {
        let word = FreeWord::new(term.word.iter().map(TimeJson::to_time).collect::<Result<_>>()?)?;
        for t in &term.tensors {
            f.push(word.clone(), matrices(t)?)?;
        }
    }
    Ok(f)
}

/// Exponential unit `(a, ζ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitJson {
    pub a: [f64; 2],
    pub zeta: VectorJson,
}

impl From<&ExpUnit> for UnitJson {
    fn from(u: &ExpUnit) -> Self {
        UnitJson { a: [u.a.re, u.a.im], zeta: u.zeta.as_slice().into() }
    }
}

impl UnitJson {
    pub fn to_unit(&self) -> Result<ExpUnit> {
        Ok(ExpUnit::new(C64::new(self.a[0], self.a[1]), self.zeta.to_vec()?)?)
    }
}

/// Gauge group element `(λ, ξ, U)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeJson {
    pub lambda: f64,
    pub xi: VectorJson,
    pub u: MatrixJson,
}

impl From<&GaugeElement> for GaugeJson {
    fn from(g: &GaugeElement) -> Self {
        GaugeJson { lambda: g.lambda, xi: g.xi.as_slice().into(), u: (&g.u).into() }
    }
}

impl GaugeJson {
    pub fn to_element(&self) -> Result<GaugeElement> {
        Ok(GaugeElement::new(self.lambda, self.xi.to_vec()?, (&self.u).try_into()?)?)
    }
}

/// Reads a JSON document. When it is a report (it carries
/// `ncdyn_schema`), the payload is taken from `field`.
pub fn read_json<T: DeserializeOwned>(path: &Path, field: &str) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => CliError::FileNotFound(path.to_path_buf()),
        _ => CliError::Io(e),
    })?;
    parse_json(&text, field).map_err(|message| CliError::BadFile { path: path.to_path_buf(), message })
}

/// [`read_json`] on an in-memory document.
pub fn parse_json<T: DeserializeOwned>(text: &str, field: &str) -> std::result::Result<T, String> {
    let mut doc: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if let Some(obj) = doc.as_object_mut() {
        if let Some(version) = obj.get("ncdyn_schema") {
            if version.as_u64() != Some(SCHEMA_VERSION as u64) {
                return Err(format!("unsupported ncdyn_schema {version}"));
            }
            doc = obj.remove(field).ok_or_else(|| format!("report has no {field:?} field"))?;
        }
    }
    serde_json::from_value(doc).map_err(|e| e.to_string())
}
