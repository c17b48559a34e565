//! Evaluation of bracket expressions in the Chevalley generators `e_i`.

use crate::cartan::Parity;
use crate::fp::Prime;
use crate::relations::{BracketExpr, RelationError};

use super::{AlgebraModel, WeightVector};

/// An element of one weight space of the positive part, in the stored basis
/// of that component (empty coordinates when the weight is not a root).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub weight: WeightVector,
    pub parity: Parity,
    pub coords: Vec<u32>,
    pub p: Prime,
}

impl Element {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    pub fn signed_coords(&self) -> Vec<i64> {
        self.coords.iter().map(|&x| self.p.signed_lift(x)).collect()
    }
}

pub(super) fn evaluate(model: &AlgebraModel, expr: &BracketExpr) -> Result<Element, RelationError> {
    let spec = model.spec();
    let weight = expr.weight(spec.n())?;
    let st = model.structure();
    let dense = eval_dense(model, expr);
    let coords = match model.component_index(&weight) {
        Some(c) => {
            let base = st.positive(c, 0);
            dense[base..base + model.components()[c].dim()].to_vec()
        }
        None => Vec::new(),
    };
    debug_assert_eq!(
        dense.iter().filter(|&&x| x != 0).count(),
        coords.iter().filter(|&&x| x != 0).count(),
        "evaluation left its weight space"
    );
    Ok(Element {
        parity: weight.parity(spec),
        weight,
        coords,
        p: spec.p(),
    })
}

fn eval_dense(model: &AlgebraModel, expr: &BracketExpr) -> Vec<u32> {
    let st = model.structure();
    let p = st.prime();
    match expr {
        BracketExpr::Generator(k) => st.basis_vector(st.e(k - 1)),
        BracketExpr::Bracket(a, b) => st.bracket(&eval_dense(model, a), &eval_dense(model, b)),
        BracketExpr::Scaled(c, e) => {
            let c = p.reduce(*c);
            eval_dense(model, e)
                .into_iter()
                .map(|x| p.mul(c, x))
                .collect()
        }
        BracketExpr::Sum(terms) => {
            let mut acc = vec![0; st.dim()];
            for t in terms {
                for (a, x) in acc.iter_mut().zip(eval_dense(model, t)) {
                    *a = p.add(*a, x);
                }
            }
            acc
        }
    }
}
