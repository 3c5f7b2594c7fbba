use equivol::adhm::su_system;
use equivol::oracle::{k_theory_volume, partition_sum_su, PolePolicy};
use equivol::quotient::{equivariant_volume, VolumeOptions};
use equivol::residue::ResidueOptions;

fn opts() -> VolumeOptions {
    VolumeOptions { residue: ResidueOptions { parallel: true, order: None }, skip_validation: false }
}

#[test]
fn su_volumes_match_partition_sums() {
    for (n, k) in [(1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        let ws = su_system(n, k).unwrap();
        let vol = equivariant_volume(&ws, &opts()).unwrap();
        let ps = partition_sum_su(n, k).unwrap();
        assert!(vol.exact_eq(&ps).unwrap(), "su({n},{k}): {vol} vs {ps}");
    }
}

#[test]
fn su_volumes_match_k_theory_route() {
    for (n, k) in [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)] {
        let ws = su_system(n, k).unwrap();
        let vol = equivariant_volume(&ws, &opts()).unwrap();
        let kt = k_theory_volume(&ws, &PolePolicy::for_system(&ws)).unwrap();
        assert!(vol.exact_eq(&kt).unwrap(), "su({n},{k}): {vol} vs {kt}");
    }
}

#[test]
fn k_theory_route_reports_higher_order_poles() {
    let ws = su_system(1, 3).unwrap();
    let err = k_theory_volume(&ws, &PolePolicy::for_system(&ws)).unwrap_err();
    assert!(matches!(err, equivol::oracle::OracleError::Unsupported(_)), "{err}");
}

#[test]
fn zero_charge_partition_sum_is_one() {
    for n in 1..4 {
        let p = partition_sum_su(n, 0).unwrap();
        assert!(p.exact_eq(&equivol::algebra::FactoredRational::one(p.table())).unwrap());
    }
}

use equivol::oracle::{
    beta_limit, character_from_weights, contour_residue, partition_tuples, partitions, CharacterFunction, OracleError,
};
use equivol::samples::{basic_system, c4_system};
use equivol::scalar::{int, rat};

fn sorted(mut v: Vec<(Vec<i64>, u32)>) -> Vec<(Vec<i64>, u32)> {
    v.sort();
    v
}

#[test]
fn c4_character_is_the_hilbert_series_of_the_zero_level() {
    let ch = character_from_weights(&c4_system()).unwrap();
    assert_eq!(ch.scalar, int(1));
    assert_eq!(ch.num, vec![(vec![0, 1, 1], 1)]);
    assert_eq!(sorted(ch.den), sorted(vec![(vec![1, 1, 0], 1), (vec![1, 0, 1], 1), (vec![-1, 0, 1], 1), (vec![-1, 1, 0], 1)]));
}

#[test]
fn basic_character_has_no_numerator() {
    let ch = character_from_weights(&basic_system()).unwrap();
    assert!(ch.num.is_empty());
    assert_eq!(sorted(ch.den), vec![(vec![-1, 1], 1), (vec![1, 1], 1)]);
}

#[test]
fn c4_contour_encloses_the_two_printed_poles() {
    let ws = c4_system();
    let ch = character_from_weights(&ws).unwrap();
    let terms = contour_residue(&ch, 0, &PolePolicy::for_system(&ws)).unwrap();
    assert_eq!(terms.len(), 2);
    let mut got: Vec<(Vec<i64>, CharacterFunction)> =
        terms.into_iter().map(|t| (t.location.unwrap(), t.value.sorted())).collect();
    got.sort_by(|a, b| a.0.cmp(&b.0));
    // Poles s = t1 and s = t2, from the factors 1 - t_i / s.
    assert_eq!(got[0].0, vec![0, 0, 1]);
    assert_eq!(got[1].0, vec![0, 1, 0]);
    let at_t2 = &got[0].1;
    assert_eq!(at_t2.num, vec![(vec![0, 1, 1], 1)]);
    assert_eq!(at_t2.den, sorted(vec![(vec![0, 1, 1], 1), (vec![0, 0, 2], 1), (vec![0, 1, -1], 1)]));
    let at_t1 = &got[1].1;
    assert_eq!(at_t1.den, sorted(vec![(vec![0, 2, 0], 1), (vec![0, 1, 1], 1), (vec![0, -1, 1], 1)]));
    assert!(at_t1.scalar == int(1) && at_t2.scalar == int(1));

    let values: Vec<CharacterFunction> = got.into_iter().map(|g| g.1).collect();
    let v = beta_limit(&values, ws.quotient_dimension()).unwrap();
    let want = equivol::algebra::FactoredRational::from_linear(
        &ws.table,
        rat(1, 2),
        vec![],
        vec![
            (equivol::algebra::LinearForm::parse_terms(&ws.table, &[("tau1", 1)]).unwrap(), 1),
            (equivol::algebra::LinearForm::parse_terms(&ws.table, &[("tau2", 1)]).unwrap(), 1),
        ],
    )
    .unwrap();
    assert!(v.exact_eq(&want).unwrap());
}

#[test]
fn growing_poles_are_not_enclosed_by_the_smallness_rule() {
    let ws = c4_system();
    let ch = character_from_weights(&ws).unwrap();
    let terms = contour_residue(&ch, 0, &PolePolicy::smallness(&ws.table)).unwrap();
    // The poles s = 1/t_i from 1 - s t_i grow as t -> 0.
    assert!(terms.iter().all(|t| t.location.as_ref().is_some_and(|a| a.iter().all(|&x| x >= 0))));
}

#[test]
fn constant_characters_only_see_the_measure_pole() {
    let ws = c4_system();
    let mut ch = CharacterFunction::one(&ws.table);
    ch.den.push((vec![0, 1, 0], 1));
    let terms = contour_residue(&ch, 0, &PolePolicy::for_system(&ws)).unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0].location, None);
    assert_eq!(terms[0].value.clone().sorted(), ch.sorted());
}

#[test]
fn beta_limit_balances_orders() {
    let ws = basic_system();
    let one = CharacterFunction::one(&ws.table);
    assert!(beta_limit(&[one.clone()], 0).unwrap().exact_eq(&equivol::algebra::FactoredRational::one(&ws.table)).unwrap());
    assert!(matches!(beta_limit(&[one], 1), Err(OracleError::Unbalanced { .. })));
}

#[test]
fn basic_system_through_the_contour_route() {
    let ws = basic_system();
    let v = k_theory_volume(&ws, &PolePolicy::for_system(&ws)).unwrap();
    let want = equivol::algebra::FactoredRational::from_linear(
        &ws.table,
        rat(1, 2),
        vec![],
        vec![(equivol::algebra::LinearForm::parse_terms(&ws.table, &[("tau", 1)]).unwrap(), 1)],
    )
    .unwrap();
    assert!(v.exact_eq(&want).unwrap());
}

#[test]
fn partition_counts() {
    let counts: Vec<usize> = (0..8).map(|k| partitions(k).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15]);
    // Pairs of partitions: coefficients of prod (1 - q^k)^-2.
    let pairs: Vec<usize> = (0..5).map(|k| partition_tuples(2, k).len()).collect();
    assert_eq!(pairs, vec![1, 2, 5, 10, 20]);
}
