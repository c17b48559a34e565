//! Degree-by-degree discovery of defining relations.
//!
//! The free Lie superalgebra on `x_1..x_n` is realized inside the tensor
//! algebra, with basis the standard bracketings of Lyndon words together
//! with the squares `[u, u]` of odd Lyndon words. At each weight the kernel
//! of the evaluation map onto g(A) is split into the part generated by
//! relations of lower height (brackets `[x_i, r]`) and genuinely new
//! relations.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{BracketExpr, Provenance, Relation, RelationError, RelationSet};
use crate::cartan::{CartanSpec, Parity};
use crate::contragredient::{AlgebraModel, WeightVector};
use crate::fp::{FpMatrix, Prime};

/// Largest height `discover` accepts; the free components grow quickly.
pub const MAX_DISCOVERY_HEIGHT: usize = 6;

type Word = Vec<u8>;
type Poly = BTreeMap<Word, u32>;

/// Dimension bookkeeping at one weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightStats {
    pub weight: WeightVector,
    pub free_dim: usize,
    pub model_dim: usize,
    pub ideal_dim: usize,
    pub new_dim: usize,
}

struct WeightSpace {
    monomials: HashMap<Word, usize>,
    basis_polys: FpMatrix,
    kernel: Vec<Vec<u32>>,
}

pub struct Discovery {
    pub relations: RelationSet,
    pub weights: Vec<WeightStats>,
    free: FreeLieSuperalgebra,
    spaces: HashMap<WeightVector, WeightSpace>,
}

impl Discovery {
    /// Whether `expr` vanishes modulo the relations found, i.e. lies in the
    /// kernel of the evaluation map at its weight.
    pub fn contains(&self, expr: &BracketExpr) -> Result<bool, RelationError> {
        let n = self.free.n;
        let w = expr.weight(n)?;
        if w.height() > self.free.max_height {
            return Err(RelationError::HeightLimitExceeded {
                requested: w.height(),
                limit: self.free.max_height,
            });
        }
        let Some(space) = self.spaces.get(&w) else {
            // no free basis at this weight: the expression is zero already
            return Ok(true);
        };
        let poly = self.free.expr_poly(expr);
        let coords = self.free.coordinates(space, &poly);
        let p = self.free.p;
        let mut cols = space.kernel.clone();
        let base = FpMatrix::from_columns(p, coords.len(), &cols).rank();
        cols.push(coords.clone());
        let with = FpMatrix::from_columns(p, coords.len(), &cols).rank();
        Ok(base == with)
    }
}

struct FreeLieSuperalgebra {
    n: usize,
    p: Prime,
    parity: Vec<Parity>,
    max_height: usize,
    /// Basis elements grouped by weight: word key and bracket expression.
    basis: HashMap<WeightVector, Vec<(BasisKey, BracketExpr)>>,
    polys: HashMap<Word, Poly>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum BasisKey {
    Lyndon(Word),
    Square(Word),
}

impl FreeLieSuperalgebra {
    fn new(spec: &CartanSpec, max_height: usize) -> Self {
        let n = spec.n();
        let mut free = FreeLieSuperalgebra {
            n,
            p: spec.p(),
            parity: spec.parity().to_vec(),
            max_height,
            basis: HashMap::new(),
            polys: HashMap::new(),
        };
        let words = lyndon_words(n, max_height);
        for w in &words {
            free.lyndon_poly(w);
        }
        for w in words {
            let weight = free.content(&w);
            let expr = standard_bracketing(&w);
            if 2 * w.len() <= max_height && free.word_parity(&w).is_odd() {
                let doubled = WeightVector(weight.0.iter().map(|c| 2 * c).collect());
                free.basis.entry(doubled).or_default().push((
                    BasisKey::Square(w.clone()),
                    BracketExpr::bracket(expr.clone(), expr.clone()),
                ));
            }
            free.basis
                .entry(weight)
                .or_default()
                .push((BasisKey::Lyndon(w), expr));
        }
        for elems in free.basis.values_mut() {
            elems.sort_by(|a, b| key_order(&a.0).cmp(&key_order(&b.0)));
        }
        free
    }

    fn content(&self, w: &[u8]) -> WeightVector {
        let mut c = vec![0; self.n];
        for &x in w {
            c[x as usize] += 1;
        }
        WeightVector(c)
    }

    fn word_parity(&self, w: &[u8]) -> Parity {
        Parity::from_odd(
            w.iter()
                .filter(|&&x| self.parity[x as usize].is_odd())
                .count()
                % 2
                == 1,
        )
    }

    fn weight_parity(&self, w: &WeightVector) -> Parity {
        let odd: u32 =
            w.0.iter()
                .enumerate()
                .filter(|(i, _)| self.parity[*i].is_odd())
                .map(|(_, &c)| c)
                .sum();
        Parity::from_odd(odd % 2 == 1)
    }

    fn lyndon_poly(&mut self, w: &[u8]) -> Poly {
        if let Some(p) = self.polys.get(w) {
            return p.clone();
        }
        let poly = if w.len() == 1 {
            Poly::from([(w.to_vec(), 1)])
        } else {
            let split = standard_split(w);
            let (u, v) = w.split_at(split);
            let pu = self.lyndon_poly(u);
            let pv = self.lyndon_poly(v);
            let sign = self.word_parity(u).sign(self.word_parity(v));
            bracket_poly(self.p, &pu, &pv, sign)
        };
        self.polys.insert(w.to_vec(), poly.clone());
        poly
    }

    fn basis_poly(&self, key: &BasisKey) -> Poly {
        match key {
            BasisKey::Lyndon(w) => self.polys[w].clone(),
            BasisKey::Square(w) => {
                let pw = &self.polys[w];
                bracket_poly(self.p, pw, pw, -1)
            }
        }
    }

    fn expr_poly(&self, expr: &BracketExpr) -> Poly {
        let p = self.p;
        match expr {
            BracketExpr::Generator(k) => Poly::from([(vec![(*k - 1) as u8], 1)]),
            BracketExpr::Bracket(a, b) => {
                let pa = self.weight_parity(&a.weight(self.n).expect("homogeneous"));
                let pb = self.weight_parity(&b.weight(self.n).expect("homogeneous"));
                bracket_poly(p, &self.expr_poly(a), &self.expr_poly(b), pa.sign(pb))
            }
            BracketExpr::Scaled(c, e) => {
                let c = p.reduce(*c);
                self.expr_poly(e)
                    .into_iter()
                    .map(|(m, x)| (m, p.mul(c, x)))
                    .filter(|&(_, x)| x != 0)
                    .collect()
            }
            BracketExpr::Sum(ts) => {
                let mut acc = Poly::new();
                for t in ts {
                    add_into(p, &mut acc, &self.expr_poly(t), 1);
                }
                acc
            }
        }
    }

    fn space(&self, weight: &WeightVector) -> Option<(Vec<BracketExpr>, WeightSpace)> {
        let elems = self.basis.get(weight)?;
        let polys: Vec<Poly> = elems.iter().map(|(k, _)| self.basis_poly(k)).collect();
        let mut monomials = HashMap::new();
        for poly in &polys {
            for m in poly.keys() {
                let next = monomials.len();
                monomials.entry(m.clone()).or_insert(next);
            }
        }
        let mut basis_polys = FpMatrix::zeros(self.p, monomials.len(), polys.len());
        for (col, poly) in polys.iter().enumerate() {
            for (m, &x) in poly {
                basis_polys.set(monomials[m], col, x);
            }
        }
        debug_assert_eq!(
            basis_polys.rank(),
            polys.len(),
            "free basis must be independent"
        );
        let exprs = elems.iter().map(|(_, e)| e.clone()).collect();
        Some((
            exprs,
            WeightSpace {
                monomials,
                basis_polys,
                kernel: Vec::new(),
            },
        ))
    }

    /// Coordinates of a polynomial in the free basis of its weight space.
    fn coordinates(&self, space: &WeightSpace, poly: &Poly) -> Vec<u32> {
        let rows = space.basis_polys.rows();
        let mut rhs = vec![0; rows];
        for (m, &x) in poly {
            let &r = space
                .monomials
                .get(m)
                .expect("Lie polynomial outside the span of the free basis");
            rhs[r] = x;
        }
        space
            .basis_polys
            .solve(&rhs)
            .expect("Lie polynomial outside the span of the free basis")
    }
}

fn key_order(k: &BasisKey) -> (u8, &Word) {
    match k {
        BasisKey::Lyndon(w) => (0, w),
        BasisKey::Square(w) => (1, w),
    }
}

fn add_into(p: Prime, acc: &mut Poly, other: &Poly, scale: u32) {
    for (m, &x) in other {
        let e = acc.entry(m.clone()).or_insert(0);
        *e = p.add(*e, p.mul(scale, x));
        if *e == 0 {
            acc.remove(m);
        }
    }
}

fn product(p: Prime, a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ma, &xa) in a {
        for (mb, &xb) in b {
            let mut m = ma.clone();
            m.extend_from_slice(mb);
            let e = out.entry(m).or_insert(0);
            *e = p.add(*e, p.mul(xa, xb));
        }
    }
    out.retain(|_, x| *x != 0);
    out
}

/// `ab - sign * ba`.
fn bracket_poly(p: Prime, a: &Poly, b: &Poly, sign: i64) -> Poly {
    let mut out = product(p, a, b);
    add_into(p, &mut out, &product(p, b, a), p.reduce(-sign));
    out
}

fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Position of the standard factorization `w = u v`, with `v` the longest
/// proper Lyndon suffix.
fn standard_split(w: &[u8]) -> usize {
    (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .expect("every Lyndon word of length >= 2 has a Lyndon suffix")
}

pub(crate) fn standard_bracketing(w: &[u8]) -> BracketExpr {
    if w.len() == 1 {
        return BracketExpr::gen(w[0] as usize + 1);
    }
    let (u, v) = w.split_at(standard_split(w));
    BracketExpr::bracket(standard_bracketing(u), standard_bracketing(v))
}

/// All Lyndon words over `0..n` of length at most `max_len` (Duval).
pub(crate) fn lyndon_words(n: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if n == 0 || max_len == 0 {
        return out;
    }
    let mut w: Word = vec![0];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&((n - 1) as u8)) {
            w.pop();
        }
        match w.last_mut() {
            Some(c) => *c += 1,
            None => break,
        }
    }
    out
}

/// All weights of the given height over `n` generators.
fn weights_of_height(n: usize, height: usize) -> Vec<WeightVector> {
    fn rec(n: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<WeightVector>) {
        if cur.len() == n - 1 {
            cur.push(left as u32);
            out.push(WeightVector(cur.clone()));
            cur.pop();
            return;
        }
        for c in (0..=left).rev() {
            cur.push(c as u32);
            rec(n, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, height, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

/// Relations of g(A) up to the given height that do not follow from those
/// of lower height.
pub fn discover(model: &AlgebraModel, up_to_height: usize) -> Result<Discovery, RelationError> {
    if up_to_height > MAX_DISCOVERY_HEIGHT {
        return Err(RelationError::HeightLimitExceeded {
            requested: up_to_height,
            limit: MAX_DISCOVERY_HEIGHT,
        });
    }
    let spec = model.spec();
    let n = spec.n();
    let p = spec.p();
    let free = FreeLieSuperalgebra::new(spec, up_to_height);
    let mut spaces: HashMap<WeightVector, WeightSpace> = HashMap::new();
    let mut stats = Vec::new();
    let mut relations = Vec::new();

    for height in 1..=up_to_height {
        for weight in weights_of_height(n, height) {
            let Some((exprs, mut space)) = free.space(&weight) else {
                continue;
            };
            let model_dim = model.dim_at(&weight);
            let mut eval_cols = Vec::with_capacity(exprs.len());
            for e in &exprs {
                eval_cols.push(model.evaluate_bracket(e)?.coords);
            }
            let evaluation = FpMatrix::from_columns(p, model_dim, &eval_cols);
            space.kernel = evaluation.kernel_basis();

            // [x_i, r] for relations r one step below
            let wpar = free.weight_parity(&weight);
            let mut ideal: Vec<Vec<u32>> = Vec::new();
            for i in 0..n {
                let Some(lower) = weight.minus_unit(i) else {
                    continue;
                };
                let Some(lower_space) = spaces.get(&lower) else {
                    continue;
                };
                let sign = spec.parity_of(i).sign(wpar.add(spec.parity_of(i)));
                let x_i = Poly::from([(vec![i as u8], 1)]);
                for r in &lower_space.kernel {
                    let poly = combination_poly(p, lower_space, r);
                    let bracketed = bracket_poly(p, &x_i, &poly, sign);
                    ideal.push(free.coordinates(&space, &bracketed));
                }
            }
            let dim = exprs.len();
            let ideal_dim = FpMatrix::from_columns(p, dim, &ideal).rank();

            let mut spanning = ideal;
            let mut current = ideal_dim;
            let mut fresh = Vec::new();
            for k in &space.kernel {
                spanning.push(k.clone());
                let r = FpMatrix::from_columns(p, dim, &spanning).rank();
                if r > current {
                    current = r;
                    fresh.push(k.clone());
                } else {
                    spanning.pop();
                }
            }

            for (idx, v) in fresh.iter().enumerate() {
                relations.push(Relation {
                    label: format!("{weight}#{}", idx + 1),
                    expr: combination_expr(p, &exprs, v),
                });
            }
            stats.push(WeightStats {
                weight: weight.clone(),
                free_dim: dim,
                model_dim,
                ideal_dim,
                new_dim: fresh.len(),
            });
            spaces.insert(weight, space);
        }
    }

    Ok(Discovery {
        relations: RelationSet {
            provenance: Provenance::Discovered,
            relations,
        },
        weights: stats,
        free,
        spaces,
    })
}

fn combination_poly(p: Prime, space: &WeightSpace, coords: &[u32]) -> Poly {
    let mut inverse = vec![Word::new(); space.monomials.len()];
    for (m, &r) in &space.monomials {
        inverse[r] = m.clone();
    }
    let values = space.basis_polys.mul_vec(coords);
    inverse
        .into_iter()
        .zip(values)
        .filter(|&(_, x)| x != 0)
        .map(|(m, x)| (m, x % p.get()))
        .collect()
}

fn combination_expr(p: Prime, exprs: &[BracketExpr], coords: &[u32]) -> BracketExpr {
    let mut terms: Vec<BracketExpr> = exprs
        .iter()
        .zip(coords)
        .filter(|&(_, &c)| c != 0)
        .map(|(e, &c)| match p.signed_lift(c) {
            1 => e.clone(),
            s => BracketExpr::scaled(s, e.clone()),
        })
        .collect();
    if terms.len() == 1 {
        terms.pop().expect("one term")
    } else {
        BracketExpr::Sum(terms)
    }
}
