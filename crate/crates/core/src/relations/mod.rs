//! Relations between the positive Chevalley generators: the built-in
//! non-Serre lists for el(5;5), Serre relations generated from a Cartan
//! matrix, verification against a built algebra, and discovery of defining
//! relations degree by degree.

mod corpus;
pub mod discover;
pub mod expr;

use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::cartan::{CartanError, CartanSpec};
use crate::contragredient::{self, AlgebraModel, BuildError, WeightVector};

pub use discover::{discover, Discovery, WeightStats};
pub use expr::{parse, BracketExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("generator x{index} out of range (n = {n})")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("expression mixes weights {first} and {other}")]
    MixedWeight { first: String, other: String },
    #[error("empty sum")]
    EmptySum,
    #[error("unknown relation list {0} (valid ids are 1..=7)")]
    UnknownId(u32),
    #[error("unsupported diagonal entry {value} at index {index} for Serre relations")]
    UnsupportedDiagonal { index: usize, value: u32 },
    #[error("discovery height {requested} exceeds the limit {limit}")]
    HeightLimitExceeded { requested: usize, limit: usize },
    #[error("{path}:{line}: {source}")]
    File {
        path: String,
        line: usize,
        source: Box<RelationError>,
    },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Build(#[from] BuildError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// One of the built-in lists, numbered like the registry.
    Paper(u32),
    Serre,
    Discovered,
    File(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub label: String,
    pub expr: BracketExpr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSet {
    pub provenance: Provenance,
    pub relations: Vec<Relation>,
}

impl RelationSet {
    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn exprs(&self) -> impl Iterator<Item = &BracketExpr> {
        self.relations.iter().map(|r| &r.expr)
    }
}

/// The built-in non-Serre relation list matching registry matrix `id`.
pub fn paper_relations(id: u32) -> Result<RelationSet, RelationError> {
    if !(1..=corpus::LISTED_RELATIONS.len() as u32).contains(&id) {
        return Err(RelationError::UnknownId(id));
    }
    let relations = corpus::LISTED_RELATIONS[id as usize - 1]
        .iter()
        .enumerate()
        .map(|(k, text)| {
            let expr = parse(text).expect("built-in relations parse");
            debug_assert!(expr.weight(5).is_ok());
            Relation {
                label: format!("{id}.{}", k + 1),
                expr,
            }
        })
        .collect();
    Ok(RelationSet {
        provenance: Provenance::Paper(id),
        relations,
    })
}

/// Serre-type relations of a Cartan matrix.
///
/// Even `i`: `ad(x_i)^(1+m)(x_j)` for every `j != i`, with `m` the residue of
/// `-A_ij` in `0..p`. Isotropic `i`: `[x_i, x_i]`, plus `[x_i, x_j]` whenever
/// `A_ij = 0`.
pub fn serre_relations(spec: &CartanSpec) -> Result<RelationSet, RelationError> {
    let n = spec.n();
    let p = spec.p();
    let mut relations = Vec::new();
    for i in 0..n {
        let d = spec.entry(i, i);
        if d == 0 {
            relations.push(Relation {
                label: format!("serre {i1},{i1}", i1 = i + 1),
                expr: BracketExpr::bracket(BracketExpr::gen(i + 1), BracketExpr::gen(i + 1)),
            });
            for j in (0..n).filter(|&j| j != i && spec.entry(i, j) == 0) {
                relations.push(Relation {
                    label: format!("serre {},{}", i + 1, j + 1),
                    expr: BracketExpr::bracket(BracketExpr::gen(i + 1), BracketExpr::gen(j + 1)),
                });
            }
        } else if d == p.reduce(2) && !spec.parity_of(i).is_odd() {
            for j in (0..n).filter(|&j| j != i) {
                let m = p.neg(spec.entry(i, j)) as usize;
                relations.push(Relation {
                    label: format!("serre {},{}", i + 1, j + 1),
                    expr: BracketExpr::ad_power(i + 1, m + 1, j + 1),
                });
            }
        } else {
            return Err(RelationError::UnsupportedDiagonal { index: i, value: d });
        }
    }
    Ok(RelationSet {
        provenance: Provenance::Serre,
        relations,
    })
}

/// Reads a relation file: one expression per line, `#` starts a comment.
pub fn parse_relation_text(text: &str, origin: &str) -> Result<RelationSet, RelationError> {
    let mut relations = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let expr = parse(body).map_err(|e| RelationError::File {
            path: origin.to_string(),
            line: k + 1,
            source: Box::new(e),
        })?;
        relations.push(Relation {
            label: format!("{origin}:{}", k + 1),
            expr,
        });
    }
    Ok(RelationSet {
        provenance: Provenance::File(origin.to_string()),
        relations,
    })
}

pub fn load_relation_file(path: &Path) -> Result<RelationSet, RelationError> {
    let text = std::fs::read_to_string(path).map_err(|e| RelationError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_relation_text(&text, &path.display().to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationEntry {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height: Option<usize>,
    pub zero: bool,
    /// Coordinates in the stored basis of the weight space, when nonzero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct VerificationReport {
    pub entries: Vec<VerificationEntry>,
}

impl VerificationReport {
    pub fn all_zero(&self) -> bool {
        self.entries.iter().all(|e| e.zero)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerificationEntry> {
        self.entries.iter().filter(|e| !e.zero)
    }
}

/// Evaluates each relation in the algebra; errors are reported per entry.
pub fn verify(model: &AlgebraModel, relations: &RelationSet) -> VerificationReport {
    let entries = relations
        .relations
        .iter()
        .map(|r| match model.evaluate_bracket(&r.expr) {
            Ok(el) => {
                let zero = el.is_zero();
                VerificationEntry {
                    label: r.label.clone(),
                    height: Some(el.weight.height()),
                    weight: Some(el.weight),
                    zero,
                    residual: (!zero).then_some(el.coords),
                    error: None,
                }
            }
            Err(e) => VerificationEntry {
                label: r.label.clone(),
                weight: None,
                height: None,
                zero: false,
                residual: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    VerificationReport { entries }
}

/// Builds g(A) and verifies `relations` in it.
pub fn verify_spec(
    spec: &CartanSpec,
    relations: &RelationSet,
) -> Result<VerificationReport, RelationError> {
    let model = contragredient::build(spec, contragredient::DEFAULT_MAX_HEIGHT)?;
    Ok(verify(&model, relations))
}
