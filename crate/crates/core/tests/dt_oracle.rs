mod common;

use common::{all_models, for_each_vector, library_components, oracle_components, ModelTable};
use strata_core::dehn_thurston::{standard_model_in_pants, trace_components, DtCoordinates, PantsDecomposition};

fn agree_up_to(d: &PantsDecomposition, max: u32, table: &ModelTable) -> usize {
    let mut checked = 0;
    for_each_vector(d.labels().len(), max, |v| {
        let Some(expected) = oracle_components(d, v, table) else {
            return;
        };
        let coords = DtCoordinates::for_decomposition(d, v).unwrap();
        let sys = trace_components(d, &coords).unwrap();
        assert_eq!(library_components(&sys), expected, "coords {v:?}");
        checked += 1;
    });
    checked
}

#[test]
fn model_counts_match_enumeration() {
    for a in 0..=8 {
        for b in 0..=8 {
            for c in 0..=8 {
                let models = all_models([a, b, c]);
                match standard_model_in_pants([a, b, c]) {
                    Ok(m) => {
                        assert_eq!(models.len(), 1);
                        for i in 0..3 {
                            for j in 0..3 {
                                assert_eq!(m.t(i, j), models[0][i][j]);
                            }
                        }
                    }
                    Err(_) => assert!(models.is_empty()),
                }
            }
        }
    }
}

#[test]
fn reference_arcs_through_oracle() {
    let table = ModelTable::new(10);
    let o5 = PantsDecomposition::o5();
    let even = oracle_components(&o5, &[8, 0, 0, 1, 1, 0, 0], &table).unwrap();
    assert_eq!(even.len(), 1);
    assert_eq!(even[0].0, Some(("p2".into(), "p3".into())));
    let odd = oracle_components(&o5, &[7, 0, 1, 1, 0, 0, 0], &table).unwrap();
    assert_eq!(odd.len(), 1);
    assert_eq!(odd[0].0, Some(("p1".into(), "p2".into())));
}

#[test]
fn oracle_agrees_on_small_o5() {
    let table = ModelTable::new(6);
    assert!(agree_up_to(&PantsDecomposition::o5(), 3, &table) > 1000);
}

#[test]
fn oracle_agrees_on_oprime4() {
    let table = ModelTable::new(10);
    assert!(agree_up_to(&PantsDecomposition::oprime4(), 10, &table) > 10_000);
}
