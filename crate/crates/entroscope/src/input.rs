//! Reading JSON inputs. Every error names the file and a line.

use gausscm::CovMatrix;
use numkernel::{DensityMatrix, MatrixJson, Povm};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{CliError, Result};
use crate::fixtures;

#[derive(Clone, Debug)]
pub struct Source {
    pub name: String,
    pub text: String,
}

impl Source {
    /// `fixture:NAME` (or a digest prefix) selects a bundled input, anything else is a path.
    pub fn open(spec: &str) -> Result<Self> {
        if let Some(key) = spec.strip_prefix("fixture:") {
            return Ok(fixtures::resolve(key)?.source());
        }
        let text = std::fs::read_to_string(spec).map_err(|e| CliError::invalid(format!("{spec}: {e}")))?;
        Ok(Self { name: spec.to_string(), text })
    }

    /// Error anchored at the first line mentioning `"key"`.
    pub fn error_at(&self, key: &str, msg: impl std::fmt::Display) -> CliError {
        let needle = format!("\"{key}\"");
        let (line, col) = self
            .text
            .lines()
            .enumerate()
            .find_map(|(i, l)| l.find(&needle).map(|c| (i + 1, c + 1)))
            .unwrap_or((1, 1));
        CliError::invalid(format!("{}:{line}:{col}: {msg}", self.name))
    }
}

pub fn parse<T: DeserializeOwned>(src: &Source) -> Result<T> {
    serde_json::from_str(&src.text).map_err(|e| {
        let full = e.to_string();
        let msg = full.rfind(" at line ").map_or(full.as_str(), |i| &full[..i]);
        CliError::invalid(format!("{}:{}:{}: {msg}", src.name, e.line().max(1), e.column().max(1)))
    })
}

fn state_from_json(src: &Source, key: &str, j: &MatrixJson) -> Result<DensityMatrix> {
    j.to_state().map_err(|e| src.error_at(key, e))
}

pub fn state_from(src: &Source) -> Result<DensityMatrix> {
    let j: MatrixJson = parse(src)?;
    state_from_json(src, "re", &j)
}

pub fn load_state(spec: &str) -> Result<DensityMatrix> {
    state_from(&Source::open(spec)?)
}

#[derive(Deserialize)]
struct PovmJson {
    effects: Vec<MatrixJson>,
}

pub fn povm_from(src: &Source) -> Result<Povm> {
    let j: PovmJson = parse(src)?;
    let effects = j.effects.iter().map(|m| m.to_matrix().map_err(|e| src.error_at("effects", e))).collect::<Result<_>>()?;
    Povm::new(effects).map_err(|e| src.error_at("effects", e))
}

pub fn load_povm(spec: &str) -> Result<Povm> {
    povm_from(&Source::open(spec)?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(MatrixJson),
    Many(Vec<MatrixJson>),
}

#[derive(Deserialize)]
struct PairJson {
    rho: OneOrMany,
    sigma: OneOrMany,
}

/// A pair file holds `rho` and `sigma`, each one state or a list of per-copy states.
pub fn pair_from(src: &Source) -> Result<(Vec<DensityMatrix>, Vec<DensityMatrix>)> {
    let j: PairJson = parse(src)?;
    let states = |key: &str, v: &OneOrMany| -> Result<Vec<DensityMatrix>> {
        match v {
            OneOrMany::One(m) => Ok(vec![state_from_json(src, key, m)?]),
            OneOrMany::Many(ms) => ms.iter().map(|m| state_from_json(src, key, m)).collect(),
        }
    };
    Ok((states("rho", &j.rho)?, states("sigma", &j.sigma)?))
}

/// Parses `A:2,B:1,C:1`.
pub fn parse_parts(s: &str) -> Result<Vec<(String, usize)>> {
    s.split(',')
        .map(|item| {
            let (name, modes) = item
                .split_once(':')
                .ok_or_else(|| CliError::invalid(format!("party {item:?} is not NAME:MODES")))?;
            let modes: usize =
                modes.trim().parse().map_err(|_| CliError::invalid(format!("party {item:?} has a bad mode count")))?;
            if name.trim().is_empty() || modes == 0 {
                return Err(CliError::invalid(format!("party {item:?} needs a name and at least one mode")));
            }
            Ok((name.trim().to_string(), modes))
        })
        .collect()
}

/// Covariance JSON `{"mat", "parts", "order"}`; `parts` replaces the file's party list.
/// `checked` requires positive definiteness.
pub fn cov_from(src: &Source, parts: Option<&[(String, usize)]>, checked: bool) -> Result<CovMatrix> {
    let mut v: Value = parse(src)?;
    let obj = v.as_object_mut().ok_or_else(|| CliError::invalid(format!("{}:1:1: expected a JSON object", src.name)))?;
    if let Some(p) = parts {
        obj.insert("parts".into(), serde_json::to_value(p).expect("plain data"));
    } else if !obj.contains_key("parts") {
        return Err(CliError::invalid(format!("{}:1:1: no \"parts\" in file and no --parts given", src.name)));
    }
    let text = v.to_string();
    let r = if checked { CovMatrix::from_json(&text) } else { CovMatrix::from_json_unchecked(&text) };
    r.map_err(|e| src.error_at("mat", e))
}
