//! On-disk basis formats.
//!
//! Orbit basis: `{"m":..,"n":..,"orbits":[{"entries":[[idx,sign],...]},...]}`,
//! optionally with `"zero_forced"` orbits in the same shape. Oracle output
//! carries dense column vectors instead: `{"m":..,"n":..,"vectors":[[...],...]}`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{BasisError, EquivBasis};

impl EquivBasis {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("basis serializes")
    }

    /// Parses a basis file and checks its orbits are well formed: indices in
    /// range, no index repeated, signs `±1`.
    pub fn from_json(text: &str) -> Result<Self, BasisError> {
        let basis: EquivBasis =
            serde_json::from_str(text).map_err(|e| BasisError::Parse { line: e.line(), message: e.to_string() })?;
        basis.check_well_formed()?;
        Ok(basis)
    }

    /// Indices in range, no index repeated, signs `±1`, no empty orbit.
    pub fn check_well_formed(&self) -> Result<(), BasisError> {
        let mut seen = vec![false; self.m * self.n];
        for orbit in self.orbits.iter().chain(&self.zero_forced) {
            if orbit.entries.is_empty() {
                return Err(BasisError::MalformedOrbit("empty orbit".into()));
            }
            for &(idx, s) in &orbit.entries {
                if idx >= seen.len() {
                    return Err(BasisError::MalformedOrbit(format!("index {idx} outside m*n = {}", seen.len())));
                }
                if s != 1 && s != -1 {
                    return Err(BasisError::MalformedOrbit(format!("sign {s} at index {idx}")));
                }
                if std::mem::replace(&mut seen[idx], true) {
                    return Err(BasisError::MalformedOrbit(format!("index {idx} appears twice")));
                }
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON encoding; ties saved weights to the basis
    /// they were trained against.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }
}

/// Dense oracle nullspace in file form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleFile {
    pub m: usize,
    pub n: usize,
    pub vectors: Vec<Vec<f64>>,
}

impl OracleFile {
    pub fn new(m: usize, n: usize, q: &DMatrix<f64>) -> Self {
        let vectors = q.column_iter().map(|c| c.iter().copied().collect()).collect();
        OracleFile { m, n, vectors }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("oracle serializes")
    }
}
