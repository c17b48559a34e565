//! Structure constants of the whole algebra `n- + h + n+`.
//!
//! Basis order: positive root vectors (in component order), then
//! `h_1..h_n`, then the negative root vectors. The negative basis vector
//! paired with a positive word `[e_j, b]` is its image `[f_j, θ(b)]` under
//! the automorphism θ: `e_i -> f_i`, `f_i -> (-1)^(p_i) e_i`, `h_i -> -h_i`.
//! Brackets of compound basis vectors are expanded with the super Jacobi
//! identity into actions of the Chevalley generators.

use crate::cartan::Parity;
use crate::fp::Prime;

use super::{cartan_eigenvalues, AlgebraModel, WeightVector};

pub type SparseVec = Vec<(usize, u32)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Positive { component: usize, index: usize },
    Cartan(usize),
    Negative { component: usize, index: usize },
}

#[derive(Debug)]
pub struct StructureTable {
    p: Prime,
    n: usize,
    kinds: Vec<BasisKind>,
    weights: Vec<Vec<i64>>,
    parities: Vec<Parity>,
    pos_offset: Vec<usize>,
    neg_offset: Vec<usize>,
    cartan_offset: usize,
    unit_component: Vec<usize>,
    table: Vec<Vec<SparseVec>>,
}

impl StructureTable {
    pub(crate) fn new(model: &AlgebraModel) -> Self {
        let spec = model.spec();
        let n = spec.n();
        let comps = model.components();

        let mut kinds = Vec::new();
        let mut weights = Vec::new();
        let mut parities = Vec::new();
        let mut pos_offset = Vec::with_capacity(comps.len());
        for (c, comp) in comps.iter().enumerate() {
            pos_offset.push(kinds.len());
            for t in 0..comp.dim() {
                kinds.push(BasisKind::Positive {
                    component: c,
                    index: t,
                });
                weights.push(comp.weight.0.iter().map(|&x| x as i64).collect());
                parities.push(comp.parity);
            }
        }
        let cartan_offset = kinds.len();
        for k in 0..n {
            kinds.push(BasisKind::Cartan(k));
            weights.push(vec![0; n]);
            parities.push(Parity::Even);
        }
        let mut neg_offset = Vec::with_capacity(comps.len());
        for (c, comp) in comps.iter().enumerate() {
            neg_offset.push(kinds.len());
            for t in 0..comp.dim() {
                kinds.push(BasisKind::Negative {
                    component: c,
                    index: t,
                });
                weights.push(comp.weight.0.iter().map(|&x| -(x as i64)).collect());
                parities.push(comp.parity);
            }
        }
        let unit_component = (0..n)
            .map(|i| {
                model
                    .component_index(&WeightVector::unit(n, i))
                    .expect("generators are roots")
            })
            .collect();

        let mut st = StructureTable {
            p: spec.p(),
            n,
            kinds,
            weights,
            parities,
            pos_offset,
            neg_offset,
            cartan_offset,
            unit_component,
            table: Vec::new(),
        };
        st.fill(model);
        st
    }

    fn fill(&mut self, model: &AlgebraModel) {
        let dim = self.kinds.len();
        let p = self.p;
        let spec = model.spec();
        let mut table: Vec<Vec<SparseVec>> = vec![Vec::new(); dim];
        let mut acc = vec![0u32; dim];

        for k in 0..self.n {
            let a = self.cartan_offset + k;
            table[a] = (0..dim).map(|b| self.ad_h(model, k, b)).collect();
        }

        for (c, comp) in model.components().iter().enumerate() {
            for (t, word) in comp.words.iter().enumerate() {
                for positive in [true, false] {
                    let a = if positive {
                        self.pos_offset[c] + t
                    } else {
                        self.neg_offset[c] + t
                    };
                    let j = word.generator;
                    let gen = |b: usize| {
                        if positive {
                            self.ad_e(model, j, b)
                        } else {
                            self.ad_f(model, j, b)
                        }
                    };
                    let Some(tail) = word.tail else {
                        table[a] = (0..dim).map(gen).collect();
                        continue;
                    };
                    let tail_comp = model
                        .component_index(
                            &comp
                                .weight
                                .minus_unit(j)
                                .expect("word weight contains generator"),
                        )
                        .expect("tail component exists");
                    let a_tail = if positive {
                        self.pos_offset[tail_comp] + tail
                    } else {
                        self.neg_offset[tail_comp] + tail
                    };
                    let sign =
                        p.reduce(spec.parity_of(j).sign(model.components()[tail_comp].parity));
                    // [[g, a'], b] = [g, [a', b]] - (-1)^(|g||a'|) [a', [g, b]]
                    let mut row = Vec::with_capacity(dim);
                    for b in 0..dim {
                        acc.iter_mut().for_each(|x| *x = 0);
                        for &(m, x) in &table[a_tail][b] {
                            for (r, y) in gen(m) {
                                acc[r] = p.add(acc[r], p.mul(x, y));
                            }
                        }
                        let coef = p.neg(sign);
                        for (m, x) in gen(b) {
                            let scale = p.mul(coef, x);
                            for &(r, y) in &table[a_tail][m] {
                                acc[r] = p.add(acc[r], p.mul(scale, y));
                            }
                        }
                        row.push(sparse(&acc));
                    }
                    table[a] = row;
                }
            }
        }
        self.table = table;
    }

    fn ad_h(&self, model: &AlgebraModel, k: usize, b: usize) -> SparseVec {
        let p = self.p;
        match self.kinds[b] {
            BasisKind::Cartan(_) => Vec::new(),
            BasisKind::Positive { component, .. } => {
                let eig =
                    cartan_eigenvalues(model.spec(), &model.components()[component].weight)[k];
                nonzero(vec![(b, eig)])
            }
            BasisKind::Negative { component, .. } => {
                let eig =
                    cartan_eigenvalues(model.spec(), &model.components()[component].weight)[k];
                nonzero(vec![(b, p.neg(eig))])
            }
        }
    }

    fn ad_e(&self, model: &AlgebraModel, i: usize, b: usize) -> SparseVec {
        let p = self.p;
        let spec = model.spec();
        let comps = model.components();
        match self.kinds[b] {
            BasisKind::Positive { component, index } => {
                let comp = &comps[component];
                match model.component_index(&comp.weight.plus_unit(i)) {
                    Some(tc) => column_into(&comp.raising[i], index, self.pos_offset[tc], 1, p),
                    None => Vec::new(),
                }
            }
            BasisKind::Cartan(k) => {
                // [e_i, h_k] = -A_ki e_i
                let e = self.pos_offset[self.unit_component[i]];
                nonzero(vec![(e, p.neg(spec.entry(k, i)))])
            }
            BasisKind::Negative { component, index } => {
                // [e_i, θu] = (-1)^(p_i) θ([f_i, u])
                let comp = &comps[component];
                let sign = if spec.parity_of(i).is_odd() {
                    p.reduce(-1)
                } else {
                    1
                };
                if comp.height() == 1 {
                    // θ(h) = -h
                    column_into(&comp.lowering[i], index, self.cartan_offset, p.neg(sign), p)
                } else {
                    match comp
                        .weight
                        .minus_unit(i)
                        .and_then(|w| model.component_index(&w))
                    {
                        Some(tc) => {
                            column_into(&comp.lowering[i], index, self.neg_offset[tc], sign, p)
                        }
                        None => Vec::new(),
                    }
                }
            }
        }
    }

    fn ad_f(&self, model: &AlgebraModel, i: usize, b: usize) -> SparseVec {
        let p = self.p;
        let spec = model.spec();
        let comps = model.components();
        match self.kinds[b] {
            BasisKind::Positive { component, index } => {
                let comp = &comps[component];
                if comp.height() == 1 {
                    column_into(&comp.lowering[i], index, self.cartan_offset, 1, p)
                } else {
                    match comp
                        .weight
                        .minus_unit(i)
                        .and_then(|w| model.component_index(&w))
                    {
                        Some(tc) => {
                            column_into(&comp.lowering[i], index, self.pos_offset[tc], 1, p)
                        }
                        None => Vec::new(),
                    }
                }
            }
            BasisKind::Cartan(k) => {
                // [f_i, h_k] = A_ki f_i
                let f = self.neg_offset[self.unit_component[i]];
                nonzero(vec![(f, spec.entry(k, i))])
            }
            BasisKind::Negative { component, index } => {
                // [f_i, θu] = θ([e_i, u])
                let comp = &comps[component];
                match model.component_index(&comp.weight.plus_unit(i)) {
                    Some(tc) => column_into(&comp.raising[i], index, self.neg_offset[tc], 1, p),
                    None => Vec::new(),
                }
            }
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.kinds.len()
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn kind(&self, a: usize) -> BasisKind {
        self.kinds[a]
    }

    pub fn weight(&self, a: usize) -> &[i64] {
        &self.weights[a]
    }

    pub fn parity(&self, a: usize) -> Parity {
        self.parities[a]
    }

    pub fn e(&self, i: usize) -> usize {
        self.pos_offset[self.unit_component[i]]
    }

    pub fn f(&self, i: usize) -> usize {
        self.neg_offset[self.unit_component[i]]
    }

    pub fn h(&self, i: usize) -> usize {
        self.cartan_offset + i
    }

    pub fn positive(&self, component: usize, index: usize) -> usize {
        self.pos_offset[component] + index
    }

    pub fn negative(&self, component: usize, index: usize) -> usize {
        self.neg_offset[component] + index
    }

    pub fn cartan_range(&self) -> std::ops::Range<usize> {
        self.cartan_offset..self.cartan_offset + self.n
    }

    /// `[a, b]` for basis vectors.
    pub fn bracket_basis(&self, a: usize, b: usize) -> &[(usize, u32)] {
        &self.table[a][b]
    }

    pub fn basis_vector(&self, a: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        v[a] = 1;
        v
    }

    /// Bilinear extension of the bracket to dense coordinate vectors.
    pub fn bracket(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut out = vec![0; self.dim()];
        for (a, &x) in u.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (b, &y) in v.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = p.mul(x, y);
                for &(r, z) in &self.table[a][b] {
                    out[r] = p.add(out[r], p.mul(xy, z));
                }
            }
        }
        out
    }

    /// `[a,[b,c]] - [[a,b],c] - (-1)^(|a||b|) [b,[a,c]]` on basis vectors.
    pub fn jacobi_defect(&self, a: usize, b: usize, c: usize) -> Vec<u32> {
        let p = self.p;
        let (ea, eb, ec) = (
            self.basis_vector(a),
            self.basis_vector(b),
            self.basis_vector(c),
        );
        let lhs = self.bracket(&ea, &self.bracket(&eb, &ec));
        let t1 = self.bracket(&self.bracket(&ea, &eb), &ec);
        let t2 = self.bracket(&eb, &self.bracket(&ea, &ec));
        let sign = p.reduce(self.parities[a].sign(self.parities[b]));
        lhs.iter()
            .zip(t1.iter().zip(&t2))
            .map(|(&l, (&x, &y))| p.sub(p.sub(l, x), p.mul(sign, y)))
            .collect()
    }

    /// `[a,b] + (-1)^(|a||b|) [b,a]` on basis vectors.
    pub fn antisymmetry_defect(&self, a: usize, b: usize) -> Vec<u32> {
        let p = self.p;
        let sign = p.reduce(self.parities[a].sign(self.parities[b]));
        let mut out = vec![0; self.dim()];
        for &(r, x) in &self.table[a][b] {
            out[r] = p.add(out[r], x);
        }
        for &(r, x) in &self.table[b][a] {
            out[r] = p.add(out[r], p.mul(sign, x));
        }
        out
    }

    /// True when every nonzero coordinate of `[a, b]` has weight
    /// `weight(a) + weight(b)` and parity `|a| + |b|`.
    pub fn bracket_is_graded(&self, a: usize, b: usize) -> bool {
        let target: Vec<i64> = self.weights[a]
            .iter()
            .zip(&self.weights[b])
            .map(|(x, y)| x + y)
            .collect();
        let parity = self.parities[a].add(self.parities[b]);
        self.table[a][b]
            .iter()
            .all(|&(r, _)| self.weights[r] == target && self.parities[r] == parity)
    }
}

fn sparse(dense: &[u32]) -> SparseVec {
    dense
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| (i, x))
        .collect()
}

fn nonzero(v: SparseVec) -> SparseVec {
    v.into_iter().filter(|&(_, x)| x != 0).collect()
}

fn column_into(
    m: &crate::fp::FpMatrix,
    col: usize,
    offset: usize,
    scale: u32,
    p: Prime,
) -> SparseVec {
    (0..m.rows())
        .map(|r| (offset + r, p.mul(scale, m.get(r, col))))
        .filter(|&(_, x)| x != 0)
        .collect()
}
