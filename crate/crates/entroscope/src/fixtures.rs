//! Bundled inputs. Each fixture is addressed by name or by the SHA-256 of
//! its bytes; `entroscope fixtures` lists both.

use gausscm::CovMatrix;
use numkernel::{DensityMatrix, Povm};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};
use crate::input::{self, Source};

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub kind: &'static str,
    pub text: &'static str,
}

impl Fixture {
    pub fn digest(&self) -> String {
        digest(self.text.as_bytes())
    }

    pub fn source(&self) -> Source {
        Source { name: format!("fixture:{}", self.name), text: self.text.to_string() }
    }
}

pub const FIXTURES: &[Fixture] = &[
    Fixture { name: "povm_0402", kind: "povm", text: include_str!("../fixtures/povm_0402.json") },
    Fixture { name: "basis_pair", kind: "pair", text: include_str!("../fixtures/basis_pair.json") },
    Fixture { name: "gmono8x8", kind: "covariance", text: gausscm::GMONO8X8_JSON },
    Fixture { name: "ff_theta", kind: "family", text: include_str!("../fixtures/ff_theta.json") },
];

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Looks a fixture up by name, or by a digest prefix of at least 8 hex digits.
pub fn resolve(key: &str) -> Result<&'static Fixture> {
    if let Some(f) = FIXTURES.iter().find(|f| f.name == key) {
        return Ok(f);
    }
    let hex = key.strip_prefix("sha256:").unwrap_or(key);
    if hex.len() >= 8 && hex.chars().all(|c| c.is_ascii_hexdigit()) {
        let hits: Vec<_> = FIXTURES.iter().filter(|f| f.digest().starts_with(&hex.to_ascii_lowercase())).collect();
        if let [f] = hits[..] {
            return Ok(f);
        }
    }
    let names: Vec<_> = FIXTURES.iter().map(|f| f.name).collect();
    Err(CliError::invalid(format!("unknown fixture {key:?} (available: {})", names.join(", "))))
}

fn named(name: &str) -> Source {
    resolve(name).expect("bundled fixture").source()
}

pub fn povm_0402() -> Povm {
    input::povm_from(&named("povm_0402")).expect("bundled POVM is valid")
}

pub fn basis_pair() -> (DensityMatrix, DensityMatrix) {
    let (r, s) = input::pair_from(&named("basis_pair")).expect("bundled pair is valid");
    (r[0].clone(), s[0].clone())
}

pub fn gmono8x8() -> CovMatrix {
    gausscm::gmono8x8()
}

#[derive(Deserialize)]
struct FamilySpec {
    theta: [f64; 2],
}

/// Member of the bundled three-qubit family; θ must lie in the declared range.
pub fn ff_theta(theta: f64) -> Result<DensityMatrix> {
    let spec: FamilySpec = input::parse(&named("ff_theta"))?;
    if !(spec.theta[0]..=spec.theta[1]).contains(&theta) {
        return Err(CliError::invalid(format!("theta {theta} outside [{}, {}]", spec.theta[0], spec.theta[1])));
    }
    Ok(recovery::fawzi_fawzi_state(theta)?)
}
