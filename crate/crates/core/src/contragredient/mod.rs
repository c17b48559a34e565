//! Construction of the contragredient Lie superalgebra g(A).
//!
//! The positive part is generated height by height. At height `d` every
//! candidate `[e_j, b]` (with `b` a basis vector of height `d - 1`) is
//! represented by its images under all lowering operators `ad f_i`; a
//! combination of candidates vanishes in g(A) exactly when all of its
//! lowerings vanish, so the component at a weight is the column space of
//! the stacked lowering matrix. The lowering of a candidate is computed
//! from already known data through
//!
//! ```text
//! [f_i, [e_j, y]] = [[f_i, e_j], y] + (-1)^(p_i p_j) [e_j, [f_i, y]],
//! [f_i, e_i] = -(-1)^(p_i) h_i,   [h_i, y] = (A c)_i y  for y of weight c.
//! ```
//!
//! The negative part is never built: it is the image of the positive part
//! under the automorphism `e_i -> f_i`, `f_i -> (-1)^(p_i) e_i`,
//! `h_i -> -h_i` (see [`structure`]).

mod evaluate;
pub mod structure;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::cartan::{CartanSpec, Parity};
use crate::fp::{axpy, FpMatrix, FpScalar};
use crate::relations::RelationError;

pub use evaluate::Element;
pub use structure::{BasisKind, StructureTable};

pub const DEFAULT_MAX_HEIGHT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("Cartan matrix is singular mod {p} (rank {rank} < {n}); algebras with center are not supported")]
    SingularCartanMatrix { p: u32, rank: usize, n: usize },
    #[error("construction did not terminate: height {max_height} still has {remaining} root(s)")]
    NonTerminated { max_height: usize, remaining: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("{count} roots share the maximal height {height}")]
    NoUniqueMaximum { height: usize, count: usize },
}

/// Coefficients of a weight with respect to the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct WeightVector(pub Vec<u32>);

impl WeightVector {
    pub fn zero(n: usize) -> Self {
        WeightVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        WeightVector(v)
    }

    pub fn height(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn plus_unit(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[i] += 1;
        WeightVector(v)
    }

    pub fn minus_unit(&self, i: usize) -> Option<Self> {
        (self.0[i] > 0).then(|| {
            let mut v = self.0.clone();
            v[i] -= 1;
            WeightVector(v)
        })
    }

    pub fn parity(&self, spec: &CartanSpec) -> Parity {
        let odd = self
            .0
            .iter()
            .enumerate()
            .filter(|(i, _)| spec.parity_of(*i).is_odd())
            .map(|(_, &c)| c)
            .sum::<u32>()
            % 2
            == 1;
        Parity::from_odd(odd)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `A c mod p`: the eigenvalues of `h_1..h_n` on a vector of weight `c`.
pub fn weight_of(c: &WeightVector, spec: &CartanSpec) -> Vec<FpScalar> {
    cartan_eigenvalues(spec, c)
        .into_iter()
        .map(|x| FpScalar::new(spec.p(), x as i64))
        .collect()
}

pub(crate) fn cartan_eigenvalues(spec: &CartanSpec, c: &WeightVector) -> Vec<u32> {
    let p = spec.p();
    (0..spec.n())
        .map(|i| {
            c.0.iter().enumerate().fold(0, |acc, (k, &ck)| {
                p.add(acc, p.mul(spec.entry(i, k), p.reduce(ck as i64)))
            })
        })
        .collect()
}

/// A basis vector `[e_generator, tail]`, where `tail` indexes the basis of
/// the component at `weight - unit(generator)`; height-one vectors have no
/// tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisWord {
    pub generator: usize,
    pub tail: Option<usize>,
}

/// One root space of the positive part.
#[derive(Debug, Clone)]
pub struct Component {
    pub weight: WeightVector,
    pub parity: Parity,
    pub words: Vec<BasisWord>,
    /// `lowering[i]`: matrix of `ad f_i` from this component to the
    /// component at `weight - unit(i)`; for height-one components the target
    /// is the Cartan subalgebra in the basis `h_1..h_n`.
    pub lowering: Vec<FpMatrix>,
    /// `raising[j]`: matrix of `ad e_j` into the component at
    /// `weight + unit(j)` (zero rows when that weight is not a root).
    pub raising: Vec<FpMatrix>,
}

impl Component {
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn height(&self) -> usize {
        self.weight.height()
    }
}

/// Bookkeeping of one elimination performed during the build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationRecord {
    pub weight: WeightVector,
    pub candidates: usize,
    pub rank: usize,
    pub nullity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootDatum {
    pub weight: WeightVector,
    pub multiplicity: usize,
    pub parity: Parity,
    pub cartan_eigenvalues: Vec<u32>,
}

impl RootDatum {
    pub fn height(&self) -> usize {
        self.weight.height()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Superdimension {
    pub even: usize,
    pub odd: usize,
}

impl fmt::Display for Superdimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.even, self.odd)
    }
}

/// The constructed algebra g(A).
#[derive(Debug)]
pub struct AlgebraModel {
    spec: CartanSpec,
    components: Vec<Component>,
    index: HashMap<WeightVector, usize>,
    eliminations: Vec<EliminationRecord>,
    structure: OnceLock<StructureTable>,
}

/// Builds g(A) from a Cartan matrix.
pub fn build(spec: &CartanSpec, max_height: usize) -> Result<AlgebraModel, BuildError> {
    Builder::new(spec)?.run(max_height)
}

struct Builder<'a> {
    spec: &'a CartanSpec,
    components: Vec<Component>,
    index: HashMap<WeightVector, usize>,
    eliminations: Vec<EliminationRecord>,
}

impl<'a> Builder<'a> {
    fn new(spec: &'a CartanSpec) -> Result<Self, BuildError> {
        // The 1x1 isotropic matrix (0) is let through: its g(A) is the
        // (1|2)-dimensional algebra spanned by e, h = [e, f], f.
        let rank = spec.matrix().rank();
        if rank < spec.n() && spec.n() > 1 {
            return Err(BuildError::SingularCartanMatrix {
                p: spec.p().get(),
                rank,
                n: spec.n(),
            });
        }
        Ok(Builder {
            spec,
            components: Vec::new(),
            index: HashMap::new(),
            eliminations: Vec::new(),
        })
    }

    /// `-(-1)^(p_i)`, the coefficient in `[f_i, e_i] = s_i h_i`.
    fn cartan_sign(&self, i: usize) -> u32 {
        let p = self.spec.p();
        if self.spec.parity_of(i).is_odd() {
            1
        } else {
            p.reduce(-1)
        }
    }

    fn dim_at(&self, w: &WeightVector) -> usize {
        self.index.get(w).map_or(0, |&k| self.components[k].dim())
    }

    fn run(mut self, max_height: usize) -> Result<AlgebraModel, BuildError> {
        let n = self.spec.n();
        let p = self.spec.p();
        for j in 0..n {
            let weight = WeightVector::unit(n, j);
            let lowering = (0..n)
                .map(|i| {
                    if i == j {
                        let mut m = FpMatrix::zeros(p, n, 1);
                        m.set(i, 0, self.cartan_sign(i));
                        m
                    } else {
                        FpMatrix::zeros(p, 0, 1)
                    }
                })
                .collect();
            self.push(Component {
                parity: weight.parity(self.spec),
                weight,
                words: vec![BasisWord {
                    generator: j,
                    tail: None,
                }],
                lowering,
                raising: Vec::new(),
            });
        }

        let max_height = max_height.max(1);
        let mut previous: Vec<usize> = (0..n).collect();
        let mut height = 1;
        while !previous.is_empty() {
            if height == max_height {
                // Everything up to max_height is accepted; the level above
                // must be empty.
                let next = self.next_level(&previous);
                if !next.is_empty() {
                    return Err(BuildError::NonTerminated {
                        max_height,
                        remaining: next.len(),
                    });
                }
                break;
            }
            previous = self.next_level(&previous);
            height += 1;
        }
        Ok(AlgebraModel {
            spec: self.spec.clone(),
            components: self.components,
            index: self.index,
            eliminations: self.eliminations,
            structure: OnceLock::new(),
        })
    }

    fn push(&mut self, c: Component) -> usize {
        let k = self.components.len();
        self.index.insert(c.weight.clone(), k);
        self.components.push(c);
        k
    }

    /// Builds all components one level above `previous` and fills in the
    /// raising maps of `previous`. Returns the new component indices.
    fn next_level(&mut self, previous: &[usize]) -> Vec<usize> {
        let n = self.spec.n();
        let p = self.spec.p();
        let weights: BTreeSet<WeightVector> = previous
            .iter()
            .flat_map(|&k| {
                let w = self.components[k].weight.clone();
                (0..n).map(move |j| w.plus_unit(j))
            })
            .collect();

        // raising[j] columns for each previous component, keyed by index.
        let mut raising: HashMap<(usize, usize), Vec<Vec<u32>>> = HashMap::new();
        let mut created = Vec::new();

        for weight in weights {
            let candidates: Vec<(usize, usize, usize)> = (0..n)
                .filter_map(|j| {
                    let tail_weight = weight.minus_unit(j)?;
                    let &k = self.index.get(&tail_weight)?;
                    Some((j, k))
                })
                .flat_map(|(j, k)| (0..self.components[k].dim()).map(move |t| (j, k, t)))
                .collect();

            let targets: Vec<Option<WeightVector>> = (0..n).map(|i| weight.minus_unit(i)).collect();
            let target_dims: Vec<usize> = targets
                .iter()
                .map(|t| t.as_ref().map_or(0, |w| self.dim_at(w)))
                .collect();
            let offsets: Vec<usize> = target_dims
                .iter()
                .scan(0, |acc, &d| {
                    let o = *acc;
                    *acc += d;
                    Some(o)
                })
                .collect();
            let total_rows: usize = target_dims.iter().sum();

            let columns: Vec<Vec<u32>> = candidates
                .iter()
                .map(|&(j, k, t)| {
                    let mut col = vec![0; total_rows];
                    for i in 0..n {
                        let block = &mut col[offsets[i]..offsets[i] + target_dims[i]];
                        self.lower_candidate(i, j, k, t, targets[i].as_ref(), block);
                    }
                    col
                })
                .collect();
            let lowering_matrix = FpMatrix::from_columns(p, total_rows, &columns);
            let rref = lowering_matrix.rref();
            let rank = rref.rank();
            self.eliminations.push(EliminationRecord {
                weight: weight.clone(),
                candidates: candidates.len(),
                rank: lowering_matrix.rank(),
                nullity: lowering_matrix.kernel_basis().len(),
            });
            if rank == 0 {
                continue;
            }

            for (col, &(j, k, t)) in candidates.iter().enumerate() {
                let coords = rref.pivot_coordinates(col);
                let entry = raising
                    .entry((k, j))
                    .or_insert_with(|| vec![Vec::new(); self.components[k].dim()]);
                entry[t] = coords;
            }

            let words = rref
                .pivots
                .iter()
                .map(|&c| {
                    let (j, _, t) = candidates[c];
                    BasisWord {
                        generator: j,
                        tail: Some(t),
                    }
                })
                .collect();
            let lowering = (0..n)
                .map(|i| {
                    let mut m = FpMatrix::zeros(p, target_dims[i], rank);
                    for (r, &c) in rref.pivots.iter().enumerate() {
                        for row in 0..target_dims[i] {
                            m.set(row, r, columns[c][offsets[i] + row]);
                        }
                    }
                    m
                })
                .collect();
            let k = self.push(Component {
                parity: weight.parity(self.spec),
                weight,
                words,
                lowering,
                raising: Vec::new(),
            });
            created.push(k);
        }

        for &k in previous {
            let dim = self.components[k].dim();
            let maps = (0..n)
                .map(|j| {
                    let target = self.components[k].weight.plus_unit(j);
                    let rows = self.dim_at(&target);
                    let mut m = FpMatrix::zeros(p, rows, dim);
                    if let Some(cols) = raising.get(&(k, j)) {
                        for (t, col) in cols.iter().enumerate() {
                            for (r, &x) in col.iter().enumerate() {
                                m.set(r, t, x);
                            }
                        }
                    }
                    m
                })
                .collect();
            self.components[k].raising = maps;
        }
        created
    }

    /// Writes `[f_i, [e_j, b]]` into `out`, where `b` is basis vector `t` of
    /// component `k` and `out` is the coordinate block of the component at
    /// `target` (the candidate weight minus `unit(i)`).
    fn lower_candidate(
        &self,
        i: usize,
        j: usize,
        k: usize,
        t: usize,
        target: Option<&WeightVector>,
        out: &mut [u32],
    ) {
        if out.is_empty() {
            return;
        }
        let p = self.spec.p();
        let tail = &self.components[k];
        let sign = p.reduce(self.spec.parity_of(i).sign(self.spec.parity_of(j)));
        let s_i = self.cartan_sign(i);

        // [[f_i, e_j], b] = delta_ij s_i [h_i, b]
        if i == j {
            let eig = cartan_eigenvalues(self.spec, &tail.weight)[i];
            out[t] = p.add(out[t], p.mul(s_i, eig));
        }

        // (-1)^(p_i p_j) [e_j, [f_i, b]]
        if tail.height() == 1 {
            let kk = tail.words[0].generator;
            if i == kk {
                // [e_j, s_i h_i] = -s_i A_ij e_j, and target is unit(j).
                let a_ij = self.spec.entry(i, j);
                let val = p.mul(sign, p.mul(s_i, p.neg(a_ij)));
                out[0] = p.add(out[0], val);
            }
        } else if let Some(mid_weight) = tail.weight.minus_unit(i) {
            let Some(&mid) = self.index.get(&mid_weight) else {
                return;
            };
            let lowered = tail.lowering[i].column(t);
            let raised = self.components[mid].raising[j].mul_vec(&lowered);
            debug_assert_eq!(Some(&self.components[mid].weight.plus_unit(j)), target);
            axpy(p, out, sign, &raised);
        }
    }
}

impl AlgebraModel {
    pub fn spec(&self) -> &CartanSpec {
        &self.spec
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, w: &WeightVector) -> Option<&Component> {
        self.index.get(w).map(|&k| &self.components[k])
    }

    pub(crate) fn component_index(&self, w: &WeightVector) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn dim_at(&self, w: &WeightVector) -> usize {
        self.component(w).map_or(0, Component::dim)
    }

    pub fn eliminations(&self) -> &[EliminationRecord] {
        &self.eliminations
    }

    /// All positive roots sorted by height, then lexicographically.
    pub fn positive_roots(&self) -> Vec<RootDatum> {
        let mut roots: Vec<RootDatum> = self
            .components
            .iter()
            .map(|c| RootDatum {
                weight: c.weight.clone(),
                multiplicity: c.dim(),
                parity: c.parity,
                cartan_eigenvalues: cartan_eigenvalues(&self.spec, &c.weight),
            })
            .collect();
        roots.sort_by(|a, b| (a.height(), &a.weight).cmp(&(b.height(), &b.weight)));
        roots
    }

    pub fn superdimension(&self) -> Superdimension {
        let (mut even, mut odd) = (self.spec.n(), 0);
        for c in &self.components {
            match c.parity {
                Parity::Even => even += 2 * c.dim(),
                Parity::Odd => odd += 2 * c.dim(),
            }
        }
        Superdimension { even, odd }
    }

    pub fn dimension(&self) -> usize {
        let s = self.superdimension();
        s.even + s.odd
    }

    pub fn max_height(&self) -> usize {
        self.components
            .iter()
            .map(Component::height)
            .max()
            .unwrap_or(0)
    }

    pub fn maximal_root(&self) -> Result<RootDatum, RootError> {
        let roots = self.positive_roots();
        let height = roots.iter().map(RootDatum::height).max().unwrap_or(0);
        let top: Vec<RootDatum> = roots.into_iter().filter(|r| r.height() == height).collect();
        if top.len() != 1 {
            return Err(RootError::NoUniqueMaximum {
                height,
                count: top.len(),
            });
        }
        Ok(top.into_iter().next().expect("one element"))
    }

    /// The full structure-constant table (computed once, on first use).
    pub fn structure(&self) -> &StructureTable {
        self.structure.get_or_init(|| StructureTable::new(self))
    }

    pub fn report(&self) -> AlgebraReport {
        let roots = self
            .positive_roots()
            .into_iter()
            .map(RootReport::from)
            .collect();
        AlgebraReport {
            superdimension: self.superdimension(),
            root_count: self.components.len(),
            roots,
            maximal_root: self.maximal_root().ok().map(RootReport::from),
        }
    }

    pub fn evaluate_bracket(
        &self,
        expr: &crate::relations::BracketExpr,
    ) -> Result<Element, RelationError> {
        evaluate::evaluate(self, expr)
    }
}

/// JSON export of a built algebra.
#[derive(Debug, Clone, Serialize)]
pub struct AlgebraReport {
    pub superdimension: Superdimension,
    pub root_count: usize,
    pub roots: Vec<RootReport>,
    pub maximal_root: Option<RootReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootReport {
    pub coeffs: WeightVector,
    pub height: usize,
    pub multiplicity: usize,
    pub parity: Parity,
    pub weight_mod_p: Vec<u32>,
}

impl From<RootDatum> for RootReport {
    fn from(r: RootDatum) -> Self {
        RootReport {
            height: r.height(),
            coeffs: r.weight,
            multiplicity: r.multiplicity,
            parity: r.parity,
            weight_mod_p: r.cartan_eigenvalues,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::Prime;

    fn spec(rows: &[&[i64]]) -> CartanSpec {
        CartanSpec::from_rows(Prime::FIVE, rows).unwrap()
    }

    #[test]
    fn rank_one_even() {
        let m = build(&spec(&[&[2]]), DEFAULT_MAX_HEIGHT).unwrap();
        assert_eq!(m.superdimension(), Superdimension { even: 3, odd: 0 });
        assert_eq!(m.positive_roots().len(), 1);
    }

    #[test]
    fn rank_one_isotropic() {
        let m = build(&spec(&[&[0]]), DEFAULT_MAX_HEIGHT).unwrap();
        assert_eq!(m.superdimension(), Superdimension { even: 1, odd: 2 });
        // [e, e] was a candidate and got eliminated
        assert_eq!(m.eliminations()[0].candidates, 1);
        assert_eq!(m.eliminations()[0].rank, 0);
    }

    #[test]
    fn sl3_over_gf5() {
        let m = build(&spec(&[&[2, -1], &[-1, 2]]), DEFAULT_MAX_HEIGHT).unwrap();
        assert_eq!(m.superdimension(), Superdimension { even: 8, odd: 0 });
        assert_eq!(m.positive_roots().len(), 3);
        assert_eq!(m.maximal_root().unwrap().weight, WeightVector(vec![1, 1]));
    }

    #[test]
    fn odd_rank_one_nonisotropic_is_osp12() {
        let a = FpMatrix::from_rows(Prime::FIVE, &[[2]]);
        let s = CartanSpec::new(a, vec![Parity::Odd]).unwrap();
        let m = build(&s, DEFAULT_MAX_HEIGHT).unwrap();
        assert_eq!(m.superdimension(), Superdimension { even: 3, odd: 2 });
    }

    #[test]
    fn singular_rejected() {
        let s = spec(&[&[2, -2], &[-2, 2]]);
        assert!(matches!(
            build(&s, DEFAULT_MAX_HEIGHT),
            Err(BuildError::SingularCartanMatrix { rank: 1, .. })
        ));
    }

    #[test]
    fn non_terminated_reported() {
        let s = CartanSpec::registry(1).unwrap();
        let err = build(&s, 5).unwrap_err();
        assert!(matches!(
            err,
            BuildError::NonTerminated { max_height: 5, .. }
        ));
        // the maximal root has height 14, so 14 is the smallest bound that works
        assert!(build(&s, 14).is_ok());
        assert!(build(&s, 13).is_err());
    }

    #[test]
    fn registry_one_low_roots() {
        let m = build(&CartanSpec::registry(1).unwrap(), DEFAULT_MAX_HEIGHT).unwrap();
        assert_eq!(m.dim_at(&WeightVector(vec![1, 0, 1, 0, 0])), 1);
        assert_eq!(m.dim_at(&WeightVector(vec![1, 1, 0, 0, 0])), 0);
        for i in 0..5 {
            let c = m.component(&WeightVector::unit(5, i)).unwrap();
            assert_eq!(c.dim(), 1);
            assert_eq!(c.parity, m.spec().parity_of(i));
        }
    }

    #[test]
    fn weight_of_examples() {
        let s1 = CartanSpec::registry(1).unwrap();
        let w = weight_of(&WeightVector(vec![2, 2, 3, 3, 4]), &s1);
        assert_eq!(
            w.iter().map(|x| x.value()).collect::<Vec<_>>(),
            vec![1, 0, 0, 0, 0]
        );
        let s5 = CartanSpec::registry(5).unwrap();
        let w = weight_of(&WeightVector(vec![5, 2, 6, 3, 4]), &s5);
        assert_eq!(
            w.iter().map(|x| x.value()).collect::<Vec<_>>(),
            vec![4, 0, 0, 0, 0]
        );
        for i in 0..5 {
            let w = weight_of(&WeightVector::unit(5, i), &s1);
            let col: Vec<u32> = w.iter().map(|x| x.value()).collect();
            assert_eq!(col, s1.matrix().column(i));
        }
    }
}
