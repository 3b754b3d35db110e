//! JSON document formats: algebra presentations, Cayley tables,
//! decomposition reports and change-of-basis sidecars.

use serde::{Deserialize, Serialize};

use crate::algebra::{make_presentation, AlgebraPresentation};
use crate::error::{Error, Result};
use crate::exactfield::{Matrix, PrimeField};
use crate::generators::CayleyTable;
use crate::wedderburn::{ClaimedBlock, DecompositionResult, IsomorphismClaim, LayoutEntry, VerificationReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub p: u64,
    pub dim: usize,
    pub structure_constants: Vec<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl AlgebraDocument {
    pub fn from_presentation(alg: &AlgebraPresentation) -> Self {
        AlgebraDocument {
            p: alg.modulus(),
            dim: alg.dim(),
            structure_constants: alg.nested_structure_constants(),
            identity: Some(alg.one_coords().to_vec()),
            labels: alg.labels().map(<[String]>::to_vec),
        }
    }

    pub fn to_presentation(&self) -> Result<AlgebraPresentation> {
        let alg = make_presentation(self.p, self.dim, &self.structure_constants, self.identity.as_deref())?;
        match &self.labels {
            Some(labels) => alg.with_labels(labels.clone()),
            None => Ok(alg),
        }
    }
}

pub fn parse_algebra(text: &str) -> Result<AlgebraPresentation> {
    let doc: AlgebraDocument = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("algebra document: {e}")))?;
    doc.to_presentation()
}

pub fn parse_cayley(text: &str) -> Result<CayleyTable> {
    let table: CayleyTable = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("Cayley document: {e}")))?;
    table.validate()?;
    Ok(table)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDocument {
    pub n: usize,
    pub division_degree: usize,
    pub central_idempotent: Vec<u64>,
    pub representative_idempotent: Vec<u64>,
    pub connecting_a: Vec<Vec<u64>>,
    pub connecting_b: Vec<Vec<u64>>,
    pub matrix_units: Vec<Vec<Vec<u64>>>,
    pub division_basis: Vec<Vec<u64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationFlags {
    pub unit: bool,
    pub multiplicative: bool,
    pub bijective: bool,
    pub orthogonality: bool,
}

impl From<&VerificationReport> for VerificationFlags {
    fn from(r: &VerificationReport) -> Self {
        VerificationFlags {
            unit: r.unit,
            multiplicative: r.multiplicative,
            bijective: r.bijective,
            orthogonality: r.orthogonality,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub blocks: Vec<BlockDocument>,
    pub iso_matrix: Vec<Vec<u64>>,
    pub iso_inverse: Vec<Vec<u64>>,
    pub layout: Vec<LayoutEntry>,
    pub verification: VerificationFlags,
    pub seed: u64,
    pub p: u64,
    pub dim: usize,
}

impl ReportDocument {
    pub fn new(alg: &AlgebraPresentation, result: &DecompositionResult, verification: &VerificationReport) -> Self {
        ReportDocument {
            blocks: result
                .blocks
                .iter()
                .map(|b| BlockDocument {
                    n: b.n,
                    division_degree: b.degree(),
                    central_idempotent: b.central_idempotent.clone(),
                    representative_idempotent: b.family.class_rep().coords().to_vec(),
                    connecting_a: b.family.a.clone(),
                    connecting_b: b.family.b.clone(),
                    matrix_units: b.units.units.clone(),
                    division_basis: b.division.corner.basis_lift().to_vec(),
                })
                .collect(),
            iso_matrix: result.iso.to_rows(),
            iso_inverse: result.iso_inverse.to_rows(),
            layout: result.layout(),
            verification: verification.into(),
            seed: result.seed,
            p: alg.modulus(),
            dim: alg.dim(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Checks shapes and ranges against `alg` and extracts the claim to
    /// verify. Inconsistent documents are input errors, not failed proofs.
    pub fn to_claim(&self, alg: &AlgebraPresentation) -> Result<IsomorphismClaim> {
        let n = alg.dim();
        let p = alg.modulus();
        let field = PrimeField::new(self.p)?;
        if self.p != p || self.dim != n {
            return Err(Error::InvalidInput(format!(
                "report is for p = {}, dim = {} but the algebra has p = {p}, dim = {n}",
                self.p, self.dim
            )));
        }
        let check_vec = |v: &[u64], what: &str| -> Result<()> {
            if v.len() != n || v.iter().any(|&c| c >= p) {
                return Err(Error::InvalidInput(format!("{what}: expected {n} residues mod {p}")));
            }
            Ok(())
        };
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (i, b) in self.blocks.iter().enumerate() {
            check_vec(&b.central_idempotent, &format!("block {i} central_idempotent"))?;
            if b.matrix_units.len() != b.n || b.matrix_units.iter().any(|r| r.len() != b.n) {
                return Err(Error::InvalidInput(format!("block {i}: matrix_units must be {0}x{0}", b.n)));
            }
            for u in b.matrix_units.iter().flatten() {
                check_vec(u, &format!("block {i} matrix unit"))?;
            }
            for v in &b.division_basis {
                check_vec(v, &format!("block {i} division basis"))?;
            }
            blocks.push(ClaimedBlock {
                n: b.n,
                central_idempotent: b.central_idempotent.clone(),
                matrix_units: b.matrix_units.clone(),
                division_basis: b.division_basis.clone(),
            });
        }
        let matrix = |rows: &[Vec<u64>], what: &str| -> Result<Matrix> {
            if rows.len() != n {
                return Err(Error::InvalidInput(format!("{what} must be {n}x{n}")));
            }
            for r in rows {
                check_vec(r, what)?;
            }
            Matrix::from_rows(field, rows)
        };
        Ok(IsomorphismClaim {
            blocks,
            iso: matrix(&self.iso_matrix, "iso_matrix")?,
            iso_inverse: matrix(&self.iso_inverse, "iso_inverse")?,
        })
    }
}

pub fn parse_report(text: &str) -> Result<ReportDocument> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("report document: {e}")))
}

/// Change of basis written next to a scrambled algebra: column `j` of
/// `matrix` holds the coordinates of the new `b'_j` in the old basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScrambleDocument {
    pub p: u64,
    pub dim: usize,
    pub seed: u64,
    pub matrix: Vec<Vec<u64>>,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{group_algebra, planted};
    use crate::idempotents::DEFAULT_SPLIT_CAP;
    use crate::semisimple::require_semisimple;
    use crate::wedderburn::{full_isomorphism, verify_claim, verify_isomorphism, VerifyLevel};

    #[test]
    fn algebra_document_round_trip() {
        let a = group_algebra(&CayleyTable::symmetric3(), 5).unwrap();
        let text = to_json(&AlgebraDocument::from_presentation(&a));
        assert_eq!(parse_algebra(&text).unwrap(), a);
    }

    #[test]
    fn identity_is_optional() {
        let text = r#"{"p": 5, "dim": 1, "structure_constants": [[[1]]]}"#;
        assert_eq!(parse_algebra(text).unwrap().one_coords(), &[1]);
        let labelled = r#"{"p": 5, "dim": 1, "structure_constants": [[[1]]], "labels": ["one"]}"#;
        let a = parse_algebra(labelled).unwrap();
        assert_eq!(a.labels().unwrap(), &["one".to_string()]);
        assert!(parse_algebra(r#"{"p": 5}"#).is_err());
    }

    #[test]
    fn cayley_document() {
        let text = r#"{"order": 2, "identity": 0, "table": [[0, 1], [1, 0]]}"#;
        assert_eq!(parse_cayley(text).unwrap(), CayleyTable::cyclic(2));
        assert!(parse_cayley(r#"{"order": 2, "identity": 0, "table": [[0, 1], [0, 1]]}"#).is_err());
    }

    #[test]
    fn report_round_trip_verifies() {
        let a = planted(&[(2, 1), (1, 2)], 7).unwrap().presentation;
        let s = require_semisimple(a.clone()).unwrap();
        let r = full_isomorphism(&s, 0, DEFAULT_SPLIT_CAP).unwrap();
        let v = verify_isomorphism(&a, &r);
        let doc = ReportDocument::new(&a, &r, &v);
        let parsed = parse_report(&doc.to_json()).unwrap();
        assert_eq!(parsed, doc);
        let claim = parsed.to_claim(&a).unwrap();
        assert_eq!(claim, r.claim());
        assert!(verify_claim(&a, &claim, VerifyLevel::Full).all_passed());
        let other = planted(&[(2, 1), (1, 2)], 11).unwrap().presentation;
        assert!(parsed.to_claim(&other).is_err());
    }
}
