//! Cartan matrices with parities.
//!
//! A [`CartanSpec`] is a square matrix over GF(p) together with the parity
//! of every simple root. Diagonal entries are restricted to `0` (odd,
//! isotropic) and `2`. Two specs are considered equivalent when one is
//! obtained from the other by a simultaneous permutation of indices and a
//! rescaling of isotropic rows by nonzero scalars.

use std::fmt;
use std::fmt::Write as _;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fp::{FpError, FpMatrix, Prime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("unknown registry matrix id {0} (valid ids are 1..=7)")]
    UnknownId(u32),
    #[error("unsupported diagonal entry {value} at index {index} (only 0 and 2 are supported)")]
    UnsupportedDiagonal { index: usize, value: u32 },
    #[error("index {index} has zero diagonal but even parity")]
    EvenIsotropic { index: usize },
    #[error("Cartan matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("size mismatch: declared n = {declared}, found {found}")]
    SizeMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Fp(#[from] FpError),
    #[error("invalid Cartan matrix file: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// Parity of a product / bracket.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Parity) -> Parity {
        Parity::from_odd(self.is_odd() ^ other.is_odd())
    }

    /// The sign `(-1)^(self * other)`.
    pub fn sign(self, other: Parity) -> i64 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

const REGISTRY: [[[i64; 5]; 5]; 7] = [
    [
        [2, 0, -1, 0, 0],
        [0, 2, 0, 0, -1],
        [-1, 0, 0, 1, 1],
        [0, 0, 1, 0, -2],
        [0, -1, 1, -2, 0],
    ],
    [
        [0, 0, 1, 0, 0],
        [0, 2, 0, 0, -1],
        [1, 0, 0, -1, -1],
        [0, 0, -1, 2, 0],
        [0, -1, -1, 0, 2],
    ],
    [
        [2, 0, -1, 0, 0],
        [0, 2, 0, 0, -1],
        [-1, 0, 2, -1, 0],
        [0, 0, -1, 0, 2],
        [0, -2, 0, -1, 2],
    ],
    [
        [2, 0, -1, 0, 0],
        [0, 0, 0, 2, 1],
        [-1, 0, 2, 0, -1],
        [0, -1, 0, 2, -1],
        [0, 1, -1, 2, 0],
    ],
    [
        [0, 0, -1, 0, 0],
        [0, 2, 0, 0, -1],
        [-1, 0, 2, -1, -1],
        [0, 0, -1, 2, 0],
        [0, -1, -1, 0, 2],
    ],
    [
        [2, 0, -1, 0, 0],
        [0, 0, 0, -2, -1],
        [-1, 0, 2, 0, -1],
        [0, -2, 0, 0, 0],
        [0, -1, -1, 0, 2],
    ],
    [
        [2, 0, -1, 0, 0],
        [0, 2, 0, -1, -2],
        [-1, 0, 2, 0, -1],
        [0, 2, 0, 0, 0],
        [0, -1, -1, 0, 2],
    ],
];

/// Number of built-in matrices.
pub const REGISTRY_SIZE: u32 = 7;

/// A Cartan matrix over GF(p) with the parities of its simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartanSpec {
    matrix: FpMatrix,
    parity: Vec<Parity>,
}

impl CartanSpec {
    pub fn new(matrix: FpMatrix, parity: Vec<Parity>) -> Result<Self, CartanError> {
        if !matrix.is_square() {
            return Err(CartanError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if parity.len() != matrix.rows() {
            return Err(CartanError::SizeMismatch {
                declared: matrix.rows(),
                found: parity.len(),
            });
        }
        let p = matrix.prime();
        for i in 0..matrix.rows() {
            let d = matrix.get(i, i);
            if d != 0 && d != p.reduce(2) {
                return Err(CartanError::UnsupportedDiagonal { index: i, value: d });
            }
            if d == 0 && !parity[i].is_odd() {
                return Err(CartanError::EvenIsotropic { index: i });
            }
        }
        Ok(CartanSpec { matrix, parity })
    }

    /// Parities inferred from the diagonal: odd exactly where `A_ii = 0`.
    pub fn with_inferred_parity(matrix: FpMatrix) -> Result<Self, CartanError> {
        let parity = (0..matrix.rows().min(matrix.cols()))
            .map(|i| Parity::from_odd(matrix.get(i, i) == 0))
            .collect();
        Self::new(matrix, parity)
    }

    pub fn from_rows<R: AsRef<[i64]>>(p: Prime, rows: &[R]) -> Result<Self, CartanError> {
        Self::with_inferred_parity(FpMatrix::from_rows(p, rows))
    }

    /// One of the seven Cartan matrices of el(5;5), numbered 1..=7.
    pub fn registry(id: u32) -> Result<Self, CartanError> {
        if !(1..=REGISTRY_SIZE).contains(&id) {
            return Err(CartanError::UnknownId(id));
        }
        Self::from_rows(Prime::FIVE, &REGISTRY[id as usize - 1])
    }

    pub fn registry_all() -> Vec<CartanSpec> {
        (1..=REGISTRY_SIZE)
            .map(|id| Self::registry(id).expect("registry entries are valid"))
            .collect()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    #[inline]
    pub fn p(&self) -> Prime {
        self.matrix.prime()
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.matrix.get(i, j)
    }

    pub fn parity(&self) -> &[Parity] {
        &self.parity
    }

    #[inline]
    pub fn parity_of(&self, i: usize) -> Parity {
        self.parity[i]
    }

    pub fn is_isotropic(&self, i: usize) -> bool {
        self.matrix.get(i, i) == 0
    }

    pub fn isotropic_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.is_isotropic(i)).collect()
    }

    pub fn diagonal(&self) -> Vec<u32> {
        (0..self.n()).map(|i| self.matrix.get(i, i)).collect()
    }

    pub fn invert_mod_p(&self) -> Result<FpMatrix, FpError> {
        self.matrix.invert()
    }

    /// `B[i][j] = A[perm[i]][perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> CartanSpec {
        let n = self.n();
        assert_eq!(perm.len(), n, "permutation size mismatch");
        let matrix = FpMatrix::from_fn(self.p(), n, n, |i, j| {
            self.matrix.get(perm[i], perm[j]) as i64
        });
        let parity = perm.iter().map(|&k| self.parity[k]).collect();
        CartanSpec { matrix, parity }
    }

    /// Row-major residues followed by parity bits.
    pub fn key(&self) -> Vec<u8> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * n * 4 + n);
        for i in 0..n {
            for &x in self.matrix.row(i) {
                out.extend_from_slice(&x.to_be_bytes());
            }
        }
        out.extend(self.parity.iter().map(|p| p.is_odd() as u8));
        out
    }

    /// Scales every isotropic row so that its first nonzero entry is 1.
    fn normalize_isotropic_rows(&mut self) {
        let p = self.p();
        let n = self.n();
        for i in 0..n {
            if !self.is_isotropic(i) {
                continue;
            }
            let Some(lead) = self.matrix.row(i).iter().copied().find(|&x| x != 0) else {
                continue;
            };
            let inv = p.inv(lead);
            for j in 0..n {
                let x = self.matrix.get(i, j);
                self.matrix.set(i, j, p.mul(x, inv));
            }
        }
    }

    /// Lexicographically minimal representative of the equivalence class.
    ///
    /// For a fixed permutation the rows can be scaled independently, so the
    /// minimum over scalings is reached by making each isotropic row start
    /// with 1.
    pub fn canonical_form(&self) -> CartanSpec {
        let n = self.n();
        let mut best: Option<(Vec<u8>, CartanSpec)> = None;
        for perm in (0..n).permutations(n) {
            let mut cand = self.permuted(&perm);
            cand.normalize_isotropic_rows();
            let key = cand.key();
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, cand));
            }
        }
        best.map(|(_, s)| s).unwrap_or_else(|| self.clone())
    }

    pub fn canonical_key(&self) -> Vec<u8> {
        self.canonical_form().key()
    }

    /// Searches permutations (in lexicographic order) and isotropic row
    /// scalings mapping `self` onto `other`.
    pub fn equivalent(&self, other: &CartanSpec) -> Option<EquivalenceWitness> {
        if self.p() != other.p() || self.n() != other.n() {
            return None;
        }
        let n = self.n();
        let p = self.p();
        'perm: for perm in (0..n).permutations(n) {
            let mut scalings = vec![1; n];
            for i in 0..n {
                let src = perm[i];
                if self.parity[src] != other.parity[i] {
                    continue 'perm;
                }
                let row = |j: usize| self.matrix.get(src, perm[j]);
                let lambda = if self.is_isotropic(src) {
                    match (0..n).find(|&j| row(j) != 0) {
                        Some(j) => {
                            let target = other.matrix.get(i, j);
                            if target == 0 {
                                continue 'perm;
                            }
                            p.mul(target, p.inv(row(j)))
                        }
                        None => 1,
                    }
                } else {
                    1
                };
                if (0..n).any(|j| p.mul(lambda, row(j)) != other.matrix.get(i, j)) {
                    continue 'perm;
                }
                scalings[i] = lambda;
            }
            return Some(EquivalenceWitness {
                permutation: perm,
                row_scalings: scalings,
            });
        }
        None
    }

    pub fn to_dynkin(&self) -> DynkinGraph {
        let n = self.n();
        let p = self.p();
        let nodes = (0..n)
            .map(|i| DynkinNode {
                index: i + 1,
                kind: if self.is_isotropic(i) {
                    NodeKind::IsotropicGrey
                } else {
                    NodeKind::EvenWhite
                },
            })
            .collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (self.entry(i, j), self.entry(j, i));
                if a == 0 && b == 0 {
                    continue;
                }
                let style = if a == 1 && b == 1 {
                    EdgeStyle::Dotted
                } else {
                    EdgeStyle::Plain
                };
                edges.push(DynkinEdge {
                    i: i + 1,
                    j: j + 1,
                    a_ij: p.signed_lift(a),
                    a_ji: p.signed_lift(b),
                    style,
                });
            }
        }
        DynkinGraph { nodes, edges }
    }

    pub fn to_file(&self) -> CartanFile {
        CartanFile {
            p: self.p().get() as u64,
            n: self.n(),
            matrix: self.matrix.signed_rows(),
            parity: Some(self.parity.clone()),
        }
    }

    pub fn from_file(file: &CartanFile) -> Result<Self, CartanError> {
        let p = Prime::new(file.p)?;
        if file.matrix.len() != file.n {
            return Err(CartanError::SizeMismatch {
                declared: file.n,
                found: file.matrix.len(),
            });
        }
        if let Some(row) = file.matrix.iter().find(|r| r.len() != file.n) {
            return Err(CartanError::NotSquare {
                rows: file.n,
                cols: row.len(),
            });
        }
        let matrix = FpMatrix::from_rows(p, &file.matrix);
        match &file.parity {
            Some(parity) => Self::new(matrix, parity.clone()),
            None => Self::with_inferred_parity(matrix),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CartanError> {
        let file: CartanFile =
            serde_json::from_str(text).map_err(|e| CartanError::Json(e.to_string()))?;
        Self::from_file(&file)
    }
}

impl fmt::Display for CartanSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.matrix.signed_rows().iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>2}")).collect();
            writeln!(f, "{}   {}", cells.join(" "), self.parity[i])?;
        }
        Ok(())
    }
}

/// On-disk Cartan matrix description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanFile {
    pub p: u64,
    pub n: usize,
    pub matrix: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Vec<Parity>>,
}

/// Maps a source spec onto a target: `target[i][j] = row_scalings[i] *
/// source[permutation[i]][permutation[j]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceWitness {
    pub permutation: Vec<usize>,
    pub row_scalings: Vec<u32>,
}

impl EquivalenceWitness {
    pub fn identity(n: usize) -> Self {
        EquivalenceWitness {
            permutation: (0..n).collect(),
            row_scalings: vec![1; n],
        }
    }

    pub fn apply(&self, source: &CartanSpec) -> CartanSpec {
        let p = source.p();
        let mut out = source.permuted(&self.permutation);
        for i in 0..out.n() {
            for j in 0..out.n() {
                let x = out.matrix.get(i, j);
                out.matrix.set(i, j, p.mul(self.row_scalings[i], x));
            }
        }
        out
    }

    /// `(other ∘ self)`: apply `self` first, then `other`.
    pub fn then(&self, other: &EquivalenceWitness) -> EquivalenceWitness {
        let permutation = other
            .permutation
            .iter()
            .map(|&k| self.permutation[k])
            .collect();
        let row_scalings = other
            .permutation
            .iter()
            .zip(&other.row_scalings)
            .map(|(&k, &s)| (s as u64 * self.row_scalings[k] as u64) as u32)
            .collect::<Vec<_>>();
        EquivalenceWitness {
            permutation,
            row_scalings,
        }
    }

    /// Same witness with scalings reduced mod `p`.
    pub fn reduced(mut self, p: Prime) -> Self {
        for s in &mut self.row_scalings {
            *s %= p.get();
        }
        self
    }
}

impl fmt::Display for EquivalenceWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let perm: Vec<String> = self
            .permutation
            .iter()
            .map(|k| (k + 1).to_string())
            .collect();
        let scal: Vec<String> = self.row_scalings.iter().map(|s| s.to_string()).collect();
        write!(
            f,
            "permutation ({}) scalings ({})",
            perm.join(","),
            scal.join(",")
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    EvenWhite,
    IsotropicGrey,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeStyle {
    Plain,
    Dotted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DynkinNode {
    pub index: usize,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DynkinEdge {
    pub i: usize,
    pub j: usize,
    pub a_ij: i64,
    pub a_ji: i64,
    pub style: EdgeStyle,
}

/// Nodes are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DynkinGraph {
    pub nodes: Vec<DynkinNode>,
    pub edges: Vec<DynkinEdge>,
}

impl DynkinGraph {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph dynkin {\n  node [shape=circle];\n");
        for node in &self.nodes {
            match node.kind {
                NodeKind::EvenWhite => {
                    let _ = writeln!(out, "  n{0} [label=\"{0}\"];", node.index);
                }
                NodeKind::IsotropicGrey => {
                    let _ = writeln!(
                        out,
                        "  n{0} [label=\"⊗\", xlabel=\"{0}\", style=filled, fillcolor=grey];",
                        node.index
                    );
                }
            }
        }
        for e in &self.edges {
            let attrs = match e.style {
                EdgeStyle::Dotted => "style=dotted".to_string(),
                EdgeStyle::Plain if e.a_ij == e.a_ji => format!("label=\"{}\"", e.a_ij),
                EdgeStyle::Plain => format!("label=\"({},{})\"", e.a_ij, e.a_ji),
            };
            let _ = writeln!(out, "  n{} -- n{} [{}];", e.i, e.j, attrs);
        }
        out.push_str("}\n");
        out
    }

    pub fn to_ascii(&self) -> String {
        let mut out = String::from("nodes:");
        for node in &self.nodes {
            let mark = match node.kind {
                NodeKind::EvenWhite => 'o',
                NodeKind::IsotropicGrey => 'x',
            };
            let _ = write!(out, " {}({})", node.index, mark);
        }
        out.push_str("\nedges:\n");
        if self.edges.is_empty() {
            out.push_str("  (none)\n");
        }
        for e in &self.edges {
            let line = match e.style {
                EdgeStyle::Dotted => "....",
                EdgeStyle::Plain => "----",
            };
            let _ = writeln!(out, "  {} {} {}   ({},{})", e.i, line, e.j, e.a_ij, e.a_ji);
        }
        out
    }

    pub fn grey_nodes(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter(|n| n.kind == NodeKind::IsotropicGrey)
            .map(|n| n.index)
            .collect()
    }
}
