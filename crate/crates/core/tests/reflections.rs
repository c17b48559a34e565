use elduque::cartan::{CartanSpec, Parity};
use elduque::contragredient::{build, DEFAULT_MAX_HEIGHT};
use elduque::reflections::{
    number_against_registry, odd_reflect, odd_reflect_in, orbit, reflection_table, ReflectError,
};

fn registry() -> Vec<CartanSpec> {
    CartanSpec::registry_all()
}

fn applicable(spec: &CartanSpec) -> Vec<usize> {
    spec.isotropic_indices()
}

#[test]
fn superdimension_is_preserved() {
    for (k, spec) in registry().iter().enumerate() {
        let sdim = build(spec, DEFAULT_MAX_HEIGHT).unwrap().superdimension();
        for i in applicable(spec) {
            let b = odd_reflect(spec, i).unwrap();
            let reflected = build(&b, DEFAULT_MAX_HEIGHT).unwrap().superdimension();
            assert_eq!(reflected, sdim, "matrix {} root {}", k + 1, i + 1);
        }
    }
}

#[test]
fn reflection_is_an_involution_on_classes() {
    for (k, spec) in registry().iter().enumerate() {
        for i in applicable(spec) {
            let b = odd_reflect(spec, i).unwrap();
            let back = odd_reflect(&b, i).unwrap();
            assert_eq!(
                back.canonical_key(),
                spec.canonical_key(),
                "matrix {} root {}",
                k + 1,
                i + 1
            );
        }
    }
}

#[test]
fn zero_diagonals_match_odd_parities() {
    for spec in registry() {
        for i in applicable(&spec) {
            let b = odd_reflect(&spec, i).unwrap();
            let odd = b.parity().iter().filter(|&&p| p == Parity::Odd).count();
            assert_eq!(b.isotropic_indices().len(), odd, "{b}");
        }
    }
}

// Roots touched by a reflection at i are those with [e_i, e_j] != 0; in every
// registry matrix this is the same as A_ij != 0 or A_ji != 0.
#[test]
fn affected_roots_follow_the_zero_pattern() {
    for spec in registry() {
        let model = build(&spec, DEFAULT_MAX_HEIGHT).unwrap();
        let st = model.structure();
        for i in applicable(&spec) {
            for j in (0..spec.n()).filter(|&j| j != i) {
                let bracket = st.bracket(&st.basis_vector(st.e(i)), &st.basis_vector(st.e(j)));
                let nonzero = bracket.iter().any(|&x| x != 0);
                let by_matrix = spec.entry(i, j) != 0 || spec.entry(j, i) != 0;
                assert_eq!(nonzero, by_matrix, "{spec} i={} j={}", i + 1, j + 1);
            }
        }
    }
}

#[test]
fn orbit_does_not_depend_on_the_seed() {
    let keys = |seed: u32| {
        let mut k: Vec<Vec<u8>> = orbit(&CartanSpec::registry(seed).unwrap(), DEFAULT_MAX_HEIGHT)
            .unwrap()
            .nodes
            .into_iter()
            .map(|n| n.key)
            .collect();
        k.sort();
        k
    };
    let from_one = keys(1);
    assert_eq!(from_one.len(), 7);
    assert_eq!(keys(3), from_one);
    assert_eq!(keys(7), from_one);
}

#[test]
fn orbit_edges_pair_up() {
    let g = orbit(&CartanSpec::registry(1).unwrap(), DEFAULT_MAX_HEIGHT).unwrap();
    for e in &g.edges {
        assert!(
            g.edges.iter().any(|r| r.from == e.to && r.to == e.from),
            "{e:?} has no reverse"
        );
    }
}

#[test]
fn table_is_symmetric_and_dashes_sit_on_even_roots() {
    let g = orbit(&CartanSpec::registry(1).unwrap(), DEFAULT_MAX_HEIGHT).unwrap();
    let labels = number_against_registry(&g).unwrap();
    let t = reflection_table(&g, &labels);
    for (row, cells) in t.cells.iter().enumerate() {
        let rep = &t.classes[row];
        for (i, cell) in cells.iter().enumerate() {
            assert_eq!(cell.is_none(), !rep.is_isotropic(i));
            if let Some(m) = cell {
                let back = t.ids.iter().position(|id| id == m).unwrap();
                assert_eq!(
                    t.cells[back][i],
                    Some(t.ids[row]),
                    "row {} col {}",
                    row + 1,
                    i + 1
                );
            }
        }
    }
}

#[test]
fn table_classes_are_the_registry_matrices() {
    let g = orbit(&CartanSpec::registry(1).unwrap(), DEFAULT_MAX_HEIGHT).unwrap();
    let labels = number_against_registry(&g).unwrap();
    let t = reflection_table(&g, &labels);
    assert_eq!(t.ids, (1..=7).collect::<Vec<u32>>());
    for (k, class) in t.classes.iter().enumerate() {
        assert_eq!(class, &CartanSpec::registry(k as u32 + 1).unwrap());
    }
}

#[test]
fn reflecting_a_built_model_matches_the_wrapper() {
    let spec = CartanSpec::registry(4).unwrap();
    let model = build(&spec, DEFAULT_MAX_HEIGHT).unwrap();
    for i in applicable(&spec) {
        assert_eq!(
            odd_reflect_in(&model, i).unwrap(),
            odd_reflect(&spec, i).unwrap()
        );
    }
    assert!(matches!(
        odd_reflect_in(&model, 0),
        Err(ReflectError::NotIsotropic { index: 1, .. })
    ));
}
