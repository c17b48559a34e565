//! Acceptance gate: one PASS/FAIL line per criterion.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use elduque::cartan::{CartanSpec, EquivalenceWitness};
use elduque::contragredient::{
    build, AlgebraModel, Superdimension, WeightVector, DEFAULT_MAX_HEIGHT,
};
use elduque::fp::{FpMatrix, Prime};
use elduque::reflections::{number_against_registry, odd_reflect_in, orbit, reflection_table};
use elduque::relations::{paper_relations, serre_relations, verify};

const P: Prime = Prime::FIVE;

const INVERSES: [[[i64; 5]; 5]; 7] = [
    [
        [2, 2, 3, 3, 4],
        [2, 4, 4, 0, 2],
        [3, 4, 1, 1, 3],
        [3, 0, 1, 3, 0],
        [4, 2, 3, 0, 4],
    ],
    [
        [2, 2, 1, 3, 4],
        [2, 4, 0, 0, 2],
        [1, 0, 0, 0, 0],
        [3, 0, 0, 3, 0],
        [4, 2, 0, 0, 4],
    ],
    [
        [2, 2, 3, 4, 2],
        [2, 4, 4, 1, 1],
        [3, 4, 1, 3, 4],
        [4, 1, 3, 2, 1],
        [4, 2, 3, 2, 2],
    ],
    [
        [2, 2, 3, 4, 4],
        [2, 4, 4, 0, 1],
        [3, 4, 1, 3, 3],
        [3, 0, 1, 4, 4],
        [4, 1, 3, 2, 2],
    ],
    [
        [0, 3, 4, 2, 1],
        [3, 4, 0, 0, 2],
        [4, 0, 0, 0, 0],
        [2, 0, 0, 3, 0],
        [1, 2, 0, 0, 4],
    ],
    [
        [2, 0, 3, 3, 4],
        [0, 0, 0, 2, 0],
        [3, 0, 1, 1, 3],
        [3, 2, 1, 3, 4],
        [4, 0, 3, 4, 2],
    ],
    [
        [2, 0, 3, 2, 4],
        [0, 0, 0, 3, 0],
        [3, 0, 1, 4, 3],
        [2, 4, 4, 4, 1],
        [4, 0, 3, 1, 2],
    ],
];

// 0 stands for a dash
const TABLE: [[u32; 5]; 7] = [
    [0, 0, 2, 3, 4],
    [5, 0, 1, 0, 0],
    [0, 0, 0, 1, 0],
    [0, 6, 0, 0, 1],
    [2, 0, 0, 0, 0],
    [0, 4, 0, 7, 0],
    [0, 0, 0, 6, 0],
];

const MAXIMAL_ROOTS: [[u32; 5]; 7] = [
    [2, 2, 3, 3, 4],
    [2, 2, 6, 3, 4],
    [2, 2, 3, 4, 4],
    [2, 2, 3, 3, 4],
    [5, 2, 6, 3, 4],
    [2, 5, 3, 3, 4],
    [2, 5, 3, 2, 4],
];

const EL_SDIM: Superdimension = Superdimension { even: 55, odd: 32 };

type Outcome = Result<String, String>;

fn models() -> Result<Vec<AlgebraModel>, String> {
    CartanSpec::registry_all()
        .iter()
        .enumerate()
        .map(|(k, s)| build(s, DEFAULT_MAX_HEIGHT).map_err(|e| format!("matrix {}: {e}", k + 1)))
        .collect()
}

fn superdimension() -> Outcome {
    for (k, spec) in CartanSpec::registry_all().iter().enumerate() {
        let start = std::time::Instant::now();
        let m = build(spec, DEFAULT_MAX_HEIGHT).map_err(|e| format!("matrix {}: {e}", k + 1))?;
        let elapsed = start.elapsed();
        if m.superdimension() != EL_SDIM {
            return Err(format!("matrix {}: {}", k + 1, m.superdimension()));
        }
        if elapsed.as_secs_f64() >= 5.0 {
            return Err(format!("matrix {} took {elapsed:?}", k + 1));
        }
    }
    Ok("all seven give (55|32)".into())
}

fn inverses() -> Outcome {
    let mut problems = Vec::new();
    for (k, spec) in CartanSpec::registry_all().iter().enumerate() {
        let table = FpMatrix::from_rows(P, &INVERSES[k]);
        let id = FpMatrix::identity(P, 5);
        if spec.matrix().mul(&table) != id {
            problems.push(format!(
                "table {} fails A*X = I (suspected transcription error)",
                k + 1
            ));
        }
        match spec.invert_mod_p() {
            Ok(x) if x == table => {}
            Ok(x) => problems.push(format!(
                "matrix {}: computed {:?} differs from table",
                k + 1,
                x.residue_rows()
            )),
            Err(e) => problems.push(format!("matrix {}: {e}", k + 1)),
        }
    }
    if problems.is_empty() {
        Ok("seven inverses match entrywise and satisfy A*X = I".into())
    } else {
        Err(problems.join("; "))
    }
}

fn reflection_table_matches() -> Outcome {
    let g =
        orbit(&CartanSpec::registry(1).unwrap(), DEFAULT_MAX_HEIGHT).map_err(|e| e.to_string())?;
    if g.len() != 7 {
        return Err(format!("{} classes", g.len()));
    }
    let labels = number_against_registry(&g).map_err(|e| e.to_string())?;
    let t = reflection_table(&g, &labels);
    if t.ids != (1..=7).collect::<Vec<u32>>() {
        return Err(format!("class numbering {:?}", t.ids));
    }
    for (row, expected) in TABLE.iter().enumerate() {
        let got: Vec<u32> = t.cells[row].iter().map(|c| c.unwrap_or(0)).collect();
        if got != expected {
            return Err(format!("row {}: {:?} vs {:?}", row + 1, got, expected));
        }
    }
    Ok("7 classes, 7x5 table equal cell for cell".into())
}

fn maximal_roots() -> Outcome {
    for (k, m) in models()?.iter().enumerate() {
        let root = m
            .maximal_root()
            .map_err(|e| format!("matrix {}: {e}", k + 1))?;
        if root.weight.0 != MAXIMAL_ROOTS[k] {
            return Err(format!("matrix {}: {}", k + 1, root.weight));
        }
        let expected = if k == 4 {
            [4, 0, 0, 0, 0]
        } else {
            [1, 0, 0, 0, 0]
        };
        if root.cartan_eigenvalues != expected {
            return Err(format!(
                "matrix {}: weight {:?}",
                k + 1,
                root.cartan_eigenvalues
            ));
        }
        let direct: Vec<u32> = elduque::contragredient::weight_of(&root.weight, m.spec())
            .iter()
            .map(|x| x.value())
            .collect();
        if direct != expected {
            return Err(format!("matrix {}: weight_of {:?}", k + 1, direct));
        }
    }
    Ok("coefficients and weights as listed".into())
}

fn relations_vanish() -> Outcome {
    let mut count = 0;
    for (k, m) in models()?.iter().enumerate() {
        let id = k as u32 + 1;
        let listed = verify(m, &paper_relations(id).map_err(|e| e.to_string())?);
        let serre = verify(m, &serre_relations(m.spec()).map_err(|e| e.to_string())?);
        for r in [&listed, &serre] {
            if let Some(f) = r.failures().next() {
                return Err(format!("matrix {id}: {} does not vanish", f.label));
            }
            count += r.entries.len();
        }
    }
    Ok(format!("{count} relations vanish"))
}

fn root_census() -> Outcome {
    for (k, m) in models()?.iter().enumerate() {
        let roots = m.positive_roots();
        let even = roots.iter().filter(|r| !r.parity.is_odd()).count();
        let odd = roots.len() - even;
        if roots.len() != 41 || even != 25 || odd != 16 {
            return Err(format!(
                "matrix {}: {} roots ({even} even, {odd} odd)",
                k + 1,
                roots.len()
            ));
        }
        if let Some(r) = roots.iter().find(|r| r.multiplicity != 1) {
            return Err(format!(
                "matrix {}: multiplicity {} at {}",
                k + 1,
                r.multiplicity,
                r.weight
            ));
        }
        if (EL_SDIM.even - 5) / 2 != even || EL_SDIM.odd / 2 != odd {
            return Err("census inconsistent with (55|32)".into());
        }
    }
    Ok("41 roots (25 even, 16 odd), all of multiplicity 1".into())
}

fn random_spec(rng: &mut StdRng, n: usize) -> CartanSpec {
    let iso: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let m = FpMatrix::from_fn(P, n, n, |i, j| {
        if i == j {
            if iso[i] {
                0
            } else {
                2
            }
        } else {
            rng.gen_range(0..5)
        }
    });
    CartanSpec::with_inferred_parity(m).unwrap()
}

fn invariants() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_e1d0);
    let mut triples = 0;
    for (k, m) in models()?.iter().enumerate() {
        let st = m.structure();
        let dim = st.dim();
        for _ in 0..1500 {
            let (a, b, c) = (
                rng.gen_range(0..dim),
                rng.gen_range(0..dim),
                rng.gen_range(0..dim),
            );
            if st.jacobi_defect(a, b, c).iter().any(|&x| x != 0) {
                return Err(format!("matrix {}: Jacobi fails at ({a},{b},{c})", k + 1));
            }
            triples += 1;
        }
        for a in 0..dim {
            for b in 0..dim {
                if !st.bracket_is_graded(a, b) {
                    return Err(format!("matrix {}: [{a},{b}] breaks the grading", k + 1));
                }
                if st.antisymmetry_defect(a, b).iter().any(|&x| x != 0) {
                    return Err(format!(
                        "matrix {}: [{a},{b}] not super antisymmetric",
                        k + 1
                    ));
                }
            }
        }
        for e in m.eliminations() {
            if e.rank + e.nullity != e.candidates || m.dim_at(&e.weight) != e.rank {
                return Err(format!("matrix {}: rank-nullity at {}", k + 1, e.weight));
            }
        }
        for i in m.spec().isotropic_indices() {
            let b = odd_reflect_in(m, i).map_err(|e| e.to_string())?;
            let mb = build(&b, DEFAULT_MAX_HEIGHT).map_err(|e| e.to_string())?;
            let back = odd_reflect_in(&mb, i).map_err(|e| e.to_string())?;
            if back.canonical_key() != m.spec().canonical_key() {
                return Err(format!(
                    "matrix {}: reflecting twice at {} does not return",
                    k + 1,
                    i + 1
                ));
            }
        }
    }
    for round in 0..300 {
        let n = rng.gen_range(1..=5);
        let s = random_spec(&mut rng, n);
        let c = s.canonical_form();
        if c.canonical_form() != c {
            return Err(format!("canonical form not idempotent (round {round})"));
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let scal = (0..n)
            .map(|i| {
                if s.is_isotropic(perm[i]) {
                    rng.gen_range(1..5)
                } else {
                    1
                }
            })
            .collect();
        let t = EquivalenceWitness {
            permutation: perm,
            row_scalings: scal,
        }
        .apply(&s);
        if t.canonical_form() != c {
            return Err(format!(
                "canonical form changes under relabelling (round {round})"
            ));
        }
    }
    Ok(format!(
        "{triples} Jacobi triples, grading, rank-nullity, involution, canonical form"
    ))
}

fn small_cases() -> Outcome {
    let case = |rows: &[&[i64]]| -> Result<AlgebraModel, String> {
        let s = CartanSpec::from_rows(P, rows).map_err(|e| e.to_string())?;
        build(&s, DEFAULT_MAX_HEIGHT).map_err(|e| e.to_string())
    };
    let even = case(&[&[2]])?.superdimension();
    if even != (Superdimension { even: 3, odd: 0 }) {
        return Err(format!("(2) gives {even}"));
    }
    let iso = case(&[&[0]])?.superdimension();
    if iso != (Superdimension { even: 1, odd: 2 }) {
        return Err(format!("(0) gives {iso}"));
    }
    let sl3 = case(&[&[2, -1], &[-1, 2]])?;
    let top = sl3.maximal_root().map_err(|e| e.to_string())?;
    if sl3.superdimension() != (Superdimension { even: 8, odd: 0 })
        || sl3.positive_roots().len() != 3
        || top.weight != WeightVector(vec![1, 1])
    {
        return Err(format!(
            "sl3 gives {} with maximal root {}",
            sl3.superdimension(),
            top.weight
        ));
    }
    Ok("(3|0), (1|2), (8|0) with maximal root (1,1)".into())
}

fn gate(k: usize, name: &str, check: fn() -> Outcome) {
    match check() {
        Ok(detail) => println!("criterion {k}: PASS {name}: {detail}"),
        Err(detail) => {
            println!("criterion {k}: FAIL {name}: {detail}");
            panic!("criterion {k} failed: {detail}");
        }
    }
}

#[test]
fn criterion_1_superdimension() {
    gate(
        1,
        "superdimension (55|32) for all registry matrices",
        superdimension,
    );
}

#[test]
fn criterion_2_inverses() {
    gate(2, "inverse matrices mod 5", inverses);
}

#[test]
fn criterion_3_reflection_table() {
    gate(3, "reflection table", reflection_table_matches);
}

#[test]
fn criterion_4_maximal_roots() {
    gate(4, "maximal roots and their weights", maximal_roots);
}

#[test]
fn criterion_5_relations() {
    gate(5, "listed and Serre relations vanish", relations_vanish);
}

#[test]
fn criterion_6_root_census() {
    gate(6, "root census", root_census);
}

#[test]
fn criterion_7_structural_invariants() {
    gate(7, "structural invariants", invariants);
}

#[test]
fn criterion_8_small_cases() {
    gate(8, "small-case oracles", small_cases);
}
