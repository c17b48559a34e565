//! Odd reflections and the orbit of a Cartan matrix under them.
//!
//! A reflection at an isotropic index `i` is computed inside the built
//! algebra: the new Chevalley generators are `e'_i = f_i`, `f'_i = e_i`
//! and, for every `j` with `[e_i, e_j] != 0`, `e'_j = [e_i, e_j]`,
//! `f'_j = [f_i, f_j]`. The new Cartan matrix is read off from
//! `[h'_j, e'_k] = B_jk e'_k` with `h'_j = [e'_j, f'_j]`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::cartan::{CartanError, CartanSpec, EquivalenceWitness};
use crate::contragredient::{self, AlgebraModel, BuildError, StructureTable};
use crate::fp::FpMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReflectError {
    #[error("reflection at root {index} is not applicable: A_ii = {diagonal} != 0")]
    NotIsotropic { index: usize, diagonal: u32 },
    #[error("root index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("reflected generators do not form a Chevalley system: {0}")]
    Degenerate(String),
    #[error("orbit class {node} matches no registry matrix")]
    Unmatched { node: usize },
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

/// Reflects `spec` at the 0-based index `i`, building g(A) first.
pub fn odd_reflect(spec: &CartanSpec, i: usize) -> Result<CartanSpec, ReflectError> {
    check_applicable(spec, i)?;
    let model = contragredient::build(spec, contragredient::DEFAULT_MAX_HEIGHT)?;
    odd_reflect_in(&model, i)
}

fn check_applicable(spec: &CartanSpec, i: usize) -> Result<(), ReflectError> {
    if i >= spec.n() {
        return Err(ReflectError::IndexOutOfRange {
            index: i + 1,
            n: spec.n(),
        });
    }
    if !spec.is_isotropic(i) || !spec.parity_of(i).is_odd() {
        return Err(ReflectError::NotIsotropic {
            index: i + 1,
            diagonal: spec.entry(i, i),
        });
    }
    Ok(())
}

/// Reflects the Cartan matrix of an already built algebra at index `i`.
pub fn odd_reflect_in(model: &AlgebraModel, i: usize) -> Result<CartanSpec, ReflectError> {
    let spec = model.spec();
    check_applicable(spec, i)?;
    let n = spec.n();
    let p = spec.p();
    let st = model.structure();
    let basis = |a: usize| st.basis_vector(a);

    let mut e_new = Vec::with_capacity(n);
    let mut f_new = Vec::with_capacity(n);
    let mut parity = Vec::with_capacity(n);
    for j in 0..n {
        if j == i {
            e_new.push(basis(st.f(i)));
            f_new.push(basis(st.e(i)));
            parity.push(spec.parity_of(i));
            continue;
        }
        let raised = st.bracket(&basis(st.e(i)), &basis(st.e(j)));
        if raised.iter().any(|&x| x != 0) {
            e_new.push(raised);
            f_new.push(st.bracket(&basis(st.f(i)), &basis(st.f(j))));
            parity.push(spec.parity_of(j).add(spec.parity_of(i)));
        } else {
            e_new.push(basis(st.e(j)));
            f_new.push(basis(st.f(j)));
            parity.push(spec.parity_of(j));
        }
    }

    let mut b = FpMatrix::zeros(p, n, n);
    for j in 0..n {
        let h = st.bracket(&e_new[j], &f_new[j]);
        if h.iter()
            .enumerate()
            .any(|(a, &x)| x != 0 && !st.cartan_range().contains(&a))
        {
            return Err(ReflectError::Degenerate(format!(
                "[e'_{0}, f'_{0}] is not in the Cartan subalgebra",
                j + 1
            )));
        }
        for k in 0..n {
            let image = st.bracket(&h, &e_new[k]);
            b.set(
                j,
                k,
                eigenvalue(st, &image, &e_new[k]).ok_or_else(|| {
                    ReflectError::Degenerate(format!(
                        "e'_{} is not an eigenvector of h'_{}",
                        k + 1,
                        j + 1
                    ))
                })?,
            );
        }
    }

    // even rows get diagonal 2; isotropic rows stay as computed
    for j in 0..n {
        let d = b.get(j, j);
        if d == 0 {
            if !parity[j].is_odd() {
                return Err(ReflectError::Degenerate(format!(
                    "even root {} acquired a zero diagonal",
                    j + 1
                )));
            }
            continue;
        }
        let scale = p.mul(p.reduce(2), p.inv(d));
        for k in 0..n {
            let x = b.get(j, k);
            b.set(j, k, p.mul(scale, x));
        }
    }
    Ok(CartanSpec::new(b, parity)?)
}

/// The scalar `c` with `image = c * vector`, if any.
fn eigenvalue(st: &StructureTable, image: &[u32], vector: &[u32]) -> Option<u32> {
    let p = st.prime();
    let pivot = vector.iter().position(|&x| x != 0)?;
    let c = p.mul(image[pivot], p.inv(vector[pivot]));
    image
        .iter()
        .zip(vector)
        .all(|(&y, &v)| y == p.mul(c, v))
        .then_some(c)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitNode {
    /// The matrix as first reached by reflection (or the seed).
    pub spec: CartanSpec,
    pub key: Vec<u8>,
}

/// Directed edge: reflecting `from` at the 0-based `index` lands in `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrbitEdge {
    pub from: usize,
    pub index: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitGraph {
    pub nodes: Vec<OrbitNode>,
    pub edges: Vec<OrbitEdge>,
}

/// Breadth-first closure under odd reflections; nodes are equivalence
/// classes, numbered in discovery order.
pub fn orbit(seed: &CartanSpec, max_height: usize) -> Result<OrbitGraph, ReflectError> {
    let mut nodes = vec![OrbitNode {
        key: seed.canonical_key(),
        spec: seed.clone(),
    }];
    let mut by_key: HashMap<Vec<u8>, usize> = HashMap::from([(nodes[0].key.clone(), 0)]);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0]);
    while let Some(k) = queue.pop_front() {
        let spec = nodes[k].spec.clone();
        let model = contragredient::build(&spec, max_height)?;
        for i in spec.isotropic_indices() {
            let reflected = odd_reflect_in(&model, i)?;
            let key = reflected.canonical_key();
            let to = match by_key.get(&key) {
                Some(&t) => t,
                None => {
                    let t = nodes.len();
                    by_key.insert(key.clone(), t);
                    nodes.push(OrbitNode {
                        spec: reflected,
                        key,
                    });
                    queue.push_back(t);
                    t
                }
            };
            edges.push(OrbitEdge {
                from: k,
                index: i,
                to,
            });
        }
    }
    Ok(OrbitGraph { nodes, edges })
}

impl OrbitGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn target(&self, node: usize, index: usize) -> Option<usize> {
        self.edges
            .iter()
            .find(|e| e.from == node && e.index == index)
            .map(|e| e.to)
    }

    /// Directed DOT graph, nodes labelled by class number (1-based) and
    /// edges by the reflected root index (1-based, in the source node's
    /// numbering).
    pub fn to_dot(&self, labels: Option<&[ClassLabel]>) -> String {
        let name = |k: usize| labels.map_or(k + 1, |l| l[k].id as usize);
        let mut out = String::from("digraph orbit {\n");
        for k in 0..self.nodes.len() {
            let _ = writeln!(out, "  c{0} [label=\"{0})\"];", name(k));
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  c{} -> c{} [label=\"{}\"];",
                name(e.from),
                name(e.to),
                e.index + 1
            );
        }
        out.push_str("}\n");
        out
    }
}

/// Identification of an orbit node with a numbered reference matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassLabel {
    pub id: u32,
    /// Maps the node's matrix onto the reference matrix.
    pub witness: EquivalenceWitness,
}

/// Numbers orbit nodes by the first reference matrix each is equivalent to.
pub fn number_against(
    graph: &OrbitGraph,
    references: &[(u32, CartanSpec)],
) -> Result<Vec<ClassLabel>, ReflectError> {
    graph
        .nodes
        .iter()
        .enumerate()
        .map(|(k, node)| {
            references
                .iter()
                .find_map(|(id, r)| {
                    node.spec
                        .equivalent(r)
                        .map(|witness| ClassLabel { id: *id, witness })
                })
                .ok_or(ReflectError::Unmatched { node: k })
        })
        .collect()
}

pub fn number_against_registry(graph: &OrbitGraph) -> Result<Vec<ClassLabel>, ReflectError> {
    let refs: Vec<(u32, CartanSpec)> = CartanSpec::registry_all()
        .into_iter()
        .enumerate()
        .map(|(k, s)| (k as u32 + 1, s))
        .collect();
    number_against(graph, &refs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReflectionTable {
    #[serde(skip)]
    pub ids: Vec<u32>,
    #[serde(serialize_with = "serialize_classes")]
    pub classes: Vec<CartanSpec>,
    /// `cells[row][i]`: class reached by reflecting at root `i`, `None`
    /// where the root is not isotropic.
    pub cells: Vec<Vec<Option<u32>>>,
}

fn serialize_classes<S: serde::Serializer>(
    classes: &[CartanSpec],
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_seq(classes.iter().map(CartanSpec::to_file))
}

/// Tabulates reflections row by row in class-number order; columns are
/// root indices in the numbering of each class's reference matrix.
pub fn reflection_table(graph: &OrbitGraph, numbering: &[ClassLabel]) -> ReflectionTable {
    let mut order: Vec<usize> = (0..graph.nodes.len()).collect();
    order.sort_by_key(|&k| numbering[k].id);
    let mut ids = Vec::new();
    let mut classes = Vec::new();
    let mut cells = Vec::new();
    for k in order {
        let label = &numbering[k];
        let reference = label.witness.apply(&graph.nodes[k].spec);
        let row = (0..reference.n())
            .map(|i| {
                let node_index = label.witness.permutation[i];
                graph.target(k, node_index).map(|t| numbering[t].id)
            })
            .collect();
        ids.push(label.id);
        classes.push(reference);
        cells.push(row);
    }
    ReflectionTable {
        ids,
        classes,
        cells,
    }
}

impl ReflectionTable {
    /// The registry numbering of table rows as printed: `-` for roots that
    /// are not isotropic.
    pub fn to_text(&self) -> String {
        let mut out = String::from("    ");
        let n = self.cells.first().map_or(0, Vec::len);
        for i in 0..n {
            let _ = write!(out, " {}", i + 1);
        }
        out.push('\n');
        for (id, row) in self.ids.iter().zip(&self.cells) {
            let _ = write!(out, "{id:>2})  ");
            let cells: Vec<String> = row
                .iter()
                .map(|c| c.map_or("-".to_string(), |x| x.to_string()))
                .collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for ReflectionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::Prime;

    fn reg(k: u32) -> CartanSpec {
        CartanSpec::registry(k).unwrap()
    }

    #[test]
    fn reflect_one_at_three_gives_two() {
        let b = odd_reflect(&reg(1), 2).unwrap();
        assert!(b.equivalent(&reg(2)).is_some(), "{b}");
    }

    #[test]
    fn even_root_is_rejected() {
        assert_eq!(
            odd_reflect(&reg(1), 0),
            Err(ReflectError::NotIsotropic {
                index: 1,
                diagonal: 2
            })
        );
        assert!(matches!(
            odd_reflect(&reg(1), 5),
            Err(ReflectError::IndexOutOfRange { index: 6, n: 5 })
        ));
    }

    #[test]
    fn double_reflection_returns() {
        let b = odd_reflect(&reg(1), 2).unwrap();
        let c = odd_reflect(&b, 2).unwrap();
        assert_eq!(c.canonical_key(), reg(1).canonical_key());
    }

    #[test]
    fn rank_one_isotropic_orbit() {
        let s = CartanSpec::from_rows(Prime::FIVE, &[[0i64]]).unwrap();
        let g = orbit(&s, 8).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(
            g.edges,
            vec![OrbitEdge {
                from: 0,
                index: 0,
                to: 0
            }]
        );
    }

    #[test]
    fn gl_one_one_chain() {
        // sl(2|1) with the distinguished and the all-odd simple systems
        let distinguished = CartanSpec::from_rows(Prime::FIVE, &[[2i64, -1], [-1, 0]]).unwrap();
        let g = orbit(&distinguished, 16).unwrap();
        assert_eq!(g.len(), 2);
        let odd = g
            .nodes
            .iter()
            .find(|n| n.spec.isotropic_indices().len() == 2);
        assert!(odd.is_some());
    }

    #[test]
    fn table_text_uses_dashes() {
        let g = orbit(&reg(1), contragredient::DEFAULT_MAX_HEIGHT).unwrap();
        let labels = number_against_registry(&g).unwrap();
        let t = reflection_table(&g, &labels);
        let first = t.to_text().lines().nth(1).unwrap().to_string();
        assert_eq!(first, " 1)  - - 2 3 4");
    }

    #[test]
    fn dot_labels_edges_by_index() {
        let g = orbit(&reg(1), contragredient::DEFAULT_MAX_HEIGHT).unwrap();
        let labels = number_against_registry(&g).unwrap();
        let dot = g.to_dot(Some(&labels));
        assert!(dot.starts_with("digraph orbit {"));
        assert!(dot.contains("c1 -> c2 [label=\"3\"];"));
    }
}
