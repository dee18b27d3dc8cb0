//! Serializable reports. Every derivation, function and scalar is rendered
//! in the text syntax accepted by the parser, so output parses back exactly.

use serde::{Deserialize, Serialize};

use crate::classify::{ClassificationVerdict, VerdictCase};
use crate::derivation::Derivation;
use crate::embed::EmbeddingMap;
use crate::lie::SpannedLieAlgebra;
use crate::poly::MultiPoly;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureTriple {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub num_vars: usize,
    pub dim: usize,
    pub basis: Vec<String>,
    /// Nonzero `c` with `[b_i, b_j] = sum_k c b_k`, `i < j`.
    pub structure_constants: Vec<StructureTriple>,
    pub rank: usize,
    pub center: Vec<String>,
    pub center_rank: usize,
    pub corank: usize,
    pub nilpotent: bool,
    pub nilpotency_class: Option<usize>,
    pub abelian: bool,
}

impl StructureReport {
    pub fn new(alg: &SpannedLieAlgebra) -> Self {
        let center = alg.center();
        let class = alg.nilpotency().class();
        StructureReport {
            num_vars: alg.num_vars(),
            dim: alg.dim(),
            basis: strings(alg.basis()),
            structure_constants: alg
                .structure_triples()
                .into_iter()
                .map(|(i, j, k, c)| StructureTriple {
                    i,
                    j,
                    k,
                    coeff: c.to_string(),
                })
                .collect(),
            rank: alg.rank_over_r(),
            center: strings(&center.center_basis),
            center_rank: center.rank_over_r,
            corank: center.corank,
            nilpotent: class.is_some(),
            nilpotency_class: class,
            abelian: alg.is_abelian(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub case: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failed_check: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    pub rank: usize,
    pub dim: usize,
    pub center_rank: usize,
    pub adapted_basis: Vec<String>,
    pub a: Option<String>,
    pub b: Option<String>,
    /// Per basis element, coordinates in the adapted basis as polynomials in
    /// `u` and `v`.
    pub coordinates: Vec<Vec<String>>,
    pub checks: Vec<CheckReport>,
}

impl VerdictReport {
    pub fn new(v: &ClassificationVerdict) -> Self {
        let (failed_check, detail) = match &v.case {
            VerdictCase::OutOfScope { check, detail } => (Some(check.clone()), Some(detail.clone())),
            _ => (None, None),
        };
        VerdictReport {
            case: v.case.tag().to_string(),
            failed_check,
            detail,
            rank: v.rank,
            dim: v.dim,
            center_rank: v.center_rank,
            adapted_basis: strings(&v.adapted),
            a: v.a.as_ref().map(|f| f.to_string()),
            b: v.b.as_ref().map(|f| f.to_string()),
            coordinates: v
                .coordinates
                .iter()
                .map(|row| row.iter().map(uv_string).collect())
                .collect(),
            checks: v
                .checks
                .iter()
                .map(|c| CheckReport {
                    name: c.name.clone(),
                    passed: c.passed,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingEntry {
    pub source: String,
    pub image: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub n: usize,
    pub case: String,
    pub table: Vec<EmbeddingEntry>,
    pub linear_samples: usize,
    pub pairs_checked: usize,
}

impl EmbeddingReport {
    pub fn new(case: &VerdictCase, m: &EmbeddingMap) -> Self {
        EmbeddingReport {
            n: m.n,
            case: case.tag().to_string(),
            table: m
                .source
                .iter()
                .zip(&m.images)
                .map(|(s, t)| EmbeddingEntry {
                    source: s.to_string(),
                    image: t.to_string(),
                })
                .collect(),
            linear_samples: m.linear_samples,
            pairs_checked: m.pairs_checked,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketReport {
    pub left: String,
    pub right: String,
    pub bracket: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub n: usize,
    pub length: usize,
    pub chain: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzEntry {
    pub seed: u64,
    pub dim: usize,
    pub case: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub n: usize,
    pub size: usize,
    pub entries: Vec<FuzzEntry>,
    pub passed: usize,
    pub failed: usize,
}

pub fn strings(ds: &[Derivation]) -> Vec<String> {
    ds.iter().map(|d| d.to_string()).collect()
}

/// Renders a polynomial in two variables with names `u`, `v`.
fn uv_string(p: &MultiPoly) -> String {
    p.to_string().replace("x1", "u").replace("x2", "v")
}
