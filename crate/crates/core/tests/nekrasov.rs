mod common;

use std::collections::BTreeMap;

use equivol::adhm::{Group, Rescale};
use equivol::algebra::{FactoredRational, LinearForm};
use equivol::cache::Cache;
use equivol::nekrasov::{
    evaluate, finst, series_exp, series_log, series_table, zinst, zinst_from_finst, NekrasovError, QSeries,
    SeriesOptions,
};
use equivol::scalar::{int, rat};
use equivol::{Rational, RationalFunction};
use proptest::prelude::*;

use common::{named, random_point, rng};

fn eps(a: i64, b: i64) -> BTreeMap<String, Rational> {
    [("eps1".to_string(), int(a)), ("eps2".to_string(), int(b))].into()
}

/// Coefficient `scale * prod(num forms) / prod(den forms)` over eps1, eps2, tau1.
fn coefficient(scale: (i64, i64), num: &[Vec<i64>], den: &[Vec<i64>]) -> RationalFunction {
    let t = series_table(1);
    let form = |c: &Vec<i64>| LinearForm::new(&t, c.iter().map(|&x| int(x)).collect()).unwrap();
    FactoredRational::from_linear(
        &t,
        rat(scale.0, scale.1),
        num.iter().map(|c| (form(c), 1)).collect(),
        den.iter().filter(|c| c.iter().any(|&x| x != 0)).map(|c| (form(c), 1)).collect(),
    )
    .unwrap()
}

fn form_coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, 3)
}

fn coefficient_strategy() -> impl Strategy<Value = RationalFunction> {
    ((-5i64..=5, 1i64..=4), prop::collection::vec(form_coeffs(), 0..2), prop::collection::vec(form_coeffs(), 0..3))
        .prop_map(|(s, n, d)| coefficient(s, &n, &d))
}

fn unital_series() -> impl Strategy<Value = Vec<RationalFunction>> {
    prop::collection::vec(coefficient_strategy(), 1..5).prop_map(|mut v| {
        v.insert(0, FactoredRational::one(&series_table(1)));
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exp_inverts_log(a in unital_series()) {
        let t = series_table(1);
        let back = series_exp(&series_log(&a, &t).unwrap(), &t).unwrap();
        prop_assert_eq!(back.len(), a.len());
        for (x, y) in back.iter().zip(&a) {
            prop_assert!(x.exact_eq(y).unwrap(), "{} vs {}", x, y);
        }
    }

    #[test]
    fn log_turns_products_into_sums(a in unital_series(), b in unital_series()) {
        let t = series_table(1);
        let n = a.len().min(b.len());
        let product: Vec<RationalFunction> = (0..n)
            .map(|k| FactoredRational::sum(&t, (0..=k).map(|j| a[j].mul(&b[k - j]).unwrap()).collect()).unwrap())
            .collect();
        let la = series_log(&a[..n], &t).unwrap();
        let lb = series_log(&b[..n], &t).unwrap();
        let lp = series_log(&product, &t).unwrap();
        for k in 0..n {
            prop_assert!(lp[k].exact_eq(&la[k].add(&lb[k]).unwrap()).unwrap());
        }
    }
}

#[test]
fn non_unital_series_have_no_log() {
    let t = series_table(1);
    let two = FactoredRational::one(&t).scale(&int(2));
    assert!(matches!(series_log(&[two.clone()], &t), Err(NekrasovError::NotUnital)));
    assert!(matches!(series_exp(&[two], &t), Err(NekrasovError::NotUnital)));
}

#[test]
fn abelian_series_is_an_exponential() {
    let z = zinst(Group::SU, 1, 4, &SeriesOptions::default()).unwrap();
    let t = &z.table;
    let e = |name: &str| LinearForm::var(t, t.require(name).unwrap());
    let mut fact = 1;
    for (k, c) in z.coeffs.iter().enumerate() {
        if k > 0 {
            fact *= k as i64;
        }
        let want =
            FactoredRational::from_linear(t, rat(1, fact), vec![], vec![(e("eps1"), k as u32), (e("eps2"), k as u32)])
                .unwrap();
        assert!(c.exact_eq(&want).unwrap(), "k = {k}: {c}");
    }
    let f = finst(&z).unwrap();
    let values = f.evaluate(&eps(3, 5)).unwrap();
    assert_eq!(values, [int(0), int(1), int(0), int(0), int(0)]);
}

#[test]
fn zero_charge_truncation_is_one() {
    for n in 1..=3 {
        let z = zinst(Group::SU, n, 0, &SeriesOptions::default()).unwrap();
        assert_eq!(z.coeffs.len(), 1);
        assert!(z.coeffs[0].exact_eq(&FactoredRational::one(&z.table)).unwrap());
    }
}

#[test]
fn prepotential_round_trips() {
    let z = zinst(Group::SU, 2, 3, &SeriesOptions { parallel: true, ..Default::default() }).unwrap();
    let f = finst(&z).unwrap();
    assert!(f.coeffs[0].is_zero());
    assert!(zinst_from_finst(&f).unwrap().exact_eq(&z).unwrap());
}

#[test]
fn prepotential_is_regular_at_vanishing_epsilon() {
    // The eps1 eps2 poles of Z exponentiate, so F has none.
    let z = zinst(Group::SU, 2, 3, &SeriesOptions { parallel: true, ..Default::default() }).unwrap();
    let f = finst(&z).unwrap();
    let t = &f.table;
    let (e1, e2) = (t.require("eps1").unwrap(), t.require("eps2").unwrap());
    for (k, c) in f.coeffs.iter().enumerate() {
        let c = c.canonical();
        for d in c.denominator() {
            let support: Vec<usize> = d.form.support().map(|(i, _)| i).collect();
            assert!(support != [e1] && support != [e2], "k = {k}: {c}");
        }
    }
}

#[test]
fn su2_coefficients_are_symmetric_in_the_framing() {
    let z = zinst(Group::SU, 2, 2, &SeriesOptions::default()).unwrap();
    let t = &z.table;
    let (a, b) = (t.require("tau1").unwrap(), t.require("tau2").unwrap());
    let mut images: Vec<_> = (0..t.len()).map(|i| LinearForm::var(t, i)).collect();
    images.swap(a, b);
    for c in &z.coeffs {
        assert!(c.linear_change(&images).unwrap().exact_eq(c).unwrap());
    }
}

#[test]
fn halved_rescale_substitutes_half_epsilon() {
    let std = zinst(Group::Sp, 1, 2, &SeriesOptions::default()).unwrap();
    let half = zinst(Group::Sp, 1, 2, &SeriesOptions { rescale: Rescale::Halved, ..Default::default() }).unwrap();
    let mut r = rng(5);
    for _ in 0..10 {
        let p = named(&std.table, &random_point(&std.table, &mut r));
        let mut q = p.clone();
        for e in ["eps1", "eps2"] {
            q.insert(e.into(), p[e].clone() / int(2));
        }
        let (Ok(x), Ok(y)) = (half.evaluate(&p), std.evaluate(&q)) else { continue };
        assert_eq!(x, y);
    }
}

#[test]
fn series_json_round_trip() {
    let z = zinst(Group::SU, 2, 2, &SeriesOptions::default()).unwrap();
    let j = serde_json::to_string(&z.to_json()).unwrap();
    let back = QSeries::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
    assert!(back.exact_eq(&z).unwrap());
    assert_eq!(back.meta, z.meta);
    assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), j);
}

#[test]
fn cached_series_equal_cold_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    let cached = SeriesOptions { cache: Some(Cache::new(dir.path())), ..Default::default() };
    let cold = zinst(Group::SU, 2, 2, &SeriesOptions::default()).unwrap();
    let first = zinst(Group::SU, 2, 2, &cached).unwrap();
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let warm = zinst(Group::SU, 2, 2, &cached).unwrap();
    assert!(first.exact_eq(&cold).unwrap() && warm.exact_eq(&cold).unwrap());
}

#[test]
fn evaluation_reports_poles_and_missing_symbols() {
    let z = zinst(Group::SU, 1, 1, &SeriesOptions::default()).unwrap();
    assert_eq!(evaluate(&z.coeffs[1], &eps(2, 3)).unwrap(), rat(1, 6));
    assert!(matches!(evaluate(&z.coeffs[1], &eps(0, 3)), Err(NekrasovError::Algebra(_))));
    let mut partial = eps(2, 3);
    partial.remove("eps2");
    assert!(matches!(evaluate(&z.coeffs[1], &partial), Err(NekrasovError::Assignment(_))));
    let mut extra = eps(2, 3);
    extra.insert("nu".into(), int(1));
    assert!(matches!(evaluate(&z.coeffs[1], &extra), Err(NekrasovError::Assignment(_))));
}
