mod common;

use equivol::adhm::{degree_identity, su_system, AdhmSpec, Group, SoMomentExponent};
use equivol::algebra::{LinearForm, SymbolTable};
use equivol::nekrasov::{adhm_volume, SeriesOptions};
use equivol::quotient::{central_function, equivariant_volume, validate_polarization, VolumeOptions};
use equivol::scalar::{int, rat};
use equivol::{Form, Rational, RationalFunction};

use common::{printed_central, random_point, rng};

fn volume(spec: AdhmSpec) -> RationalFunction {
    adhm_volume(&spec, &SeriesOptions { parallel: true, ..Default::default() }).unwrap()
}

fn index(t: &SymbolTable, name: &str) -> usize {
    t.require(name).unwrap()
}

/// Images over `target` sending every symbol of `source` to the same-named
/// symbol, with the given overrides and gauge symbols sent to zero.
fn images(source: &SymbolTable, target: &SymbolTable, overrides: &[(&str, Form)]) -> Vec<Form> {
    (0..source.len())
        .map(|i| {
            let name = source.name(i);
            if let Some((_, f)) = overrides.iter().find(|(n, _)| *n == name) {
                return f.clone();
            }
            match target.index(name) {
                Some(j) if !name.starts_with("sigma") => LinearForm::var(target, j),
                _ => LinearForm::zero(target),
            }
        })
        .collect()
}

fn instances() -> Vec<AdhmSpec> {
    let mut v = Vec::new();
    for (n, c) in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        v.push(AdhmSpec::new(Group::SU, n, c));
    }
    for (n, c) in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        v.push(AdhmSpec::new(Group::Sp, n, c));
    }
    for (n, c) in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (5, 1), (6, 1)] {
        v.push(AdhmSpec::new(Group::SO, n, c));
    }
    v
}

#[test]
fn generated_weights_reproduce_printed_products() {
    let mut r = rng(11);
    let mut cases: Vec<(AdhmSpec, SoMomentExponent)> = Vec::new();
    for n in 1..=3 {
        for c in 1..=3 {
            cases.push((AdhmSpec::new(Group::SU, n, c), SoMomentExponent::Charge));
            cases.push((AdhmSpec::new(Group::Sp, n, c), SoMomentExponent::Charge));
        }
    }
    for n in 2..=7 {
        for c in 1..=3 {
            cases.push((AdhmSpec::new(Group::SO, n, c), SoMomentExponent::Charge));
            if n % 2 == 0 {
                let mut s = AdhmSpec::new(Group::SO, n, c);
                s.so_exponent = SoMomentExponent::Printed;
                cases.push((s, SoMomentExponent::Printed));
            }
        }
    }
    for (spec, exp) in cases {
        let ws = spec.system().unwrap();
        let central = central_function(&ws).unwrap();
        let t = &ws.table;
        let mut checked = 0;
        while checked < 20 {
            let p = random_point(t, &mut r);
            let sigma: Vec<Rational> = (0..spec.rank()).map(|i| p[index(t, &format!("sigma{}", i + 1))].clone()).collect();
            let tau: Vec<Rational> = (0..spec.framing()).map(|l| p[index(t, &format!("tau{}", l + 1))].clone()).collect();
            let eps = [p[index(t, "eps1")].clone(), p[index(t, "eps2")].clone()];
            let (pre, printed) = printed_central(spec.group, spec.n, spec.c, exp, &sigma, eps, &tau);
            assert_eq!(pre, ws.prefactor, "{} prefactor", spec.label());
            let Some(printed) = printed else { continue };
            let ours = central.evaluate(&p).unwrap();
            assert_eq!(ours, printed, "{} at {p:?}", spec.label());
            checked += 1;
        }
    }
}

#[test]
fn generated_systems_are_polarized() {
    for spec in instances() {
        let ws = spec.system().unwrap();
        assert!(validate_polarization(&ws).unwrap().ok(), "{}", spec.label());
    }
}

#[test]
fn volumes_obey_the_dimension_law() {
    for spec in instances() {
        let ws = spec.system().unwrap();
        let v = volume(spec);
        if v.is_zero() {
            continue;
        }
        assert_eq!(v.degree(), Some(degree_identity(&ws)), "{}", spec.label());
        assert_eq!(v.degree(), Some(moduli_degree(&spec)), "{}", spec.label());
    }
}

#[test]
fn volumes_are_weyl_symmetric() {
    for spec in instances() {
        let ws = spec.system().unwrap();
        let v = volume(spec);
        let t = &ws.table;
        let taus: Vec<usize> = (0..spec.framing()).map(|l| index(t, &format!("tau{}", l + 1))).collect();
        let mut maps: Vec<Vec<Form>> = Vec::new();
        if taus.len() >= 2 {
            // Transposition and cycle generate the symmetric group.
            let mut swap: Vec<Form> = (0..t.len()).map(|i| LinearForm::var(t, i)).collect();
            swap[taus[0]] = LinearForm::var(t, taus[1]);
            swap[taus[1]] = LinearForm::var(t, taus[0]);
            maps.push(swap);
            let mut cycle: Vec<Form> = (0..t.len()).map(|i| LinearForm::var(t, i)).collect();
            for (k, &l) in taus.iter().enumerate() {
                cycle[l] = LinearForm::var(t, taus[(k + 1) % taus.len()]);
            }
            maps.push(cycle);
        }
        if spec.group != Group::SU && !taus.is_empty() {
            let mut flip: Vec<Form> = (0..t.len()).map(|i| LinearForm::var(t, i)).collect();
            flip[taus[0]] = LinearForm::var(t, taus[0]).neg();
            maps.push(flip);
        }
        for m in maps {
            let w = v.linear_change(&m).unwrap();
            assert!(w.exact_eq(&v).unwrap(), "{}: {v} vs {w}", spec.label());
        }
    }
}

#[test]
fn sp1_matches_su2_up_to_the_root_sign() {
    for c in 1..=3 {
        let sp = AdhmSpec::new(Group::Sp, 1, c);
        let sp_vol = volume(sp);
        let su = su_system(2, c).unwrap();
        let su_vol = equivariant_volume(&su, &VolumeOptions::default()).unwrap();
        let target = sp_vol.table().clone();
        let tau = LinearForm::var(&target, index(&target, "tau1"));
        let m = images(&su.table, &target, &[("tau1", tau.clone()), ("tau2", tau.neg())]);
        let restricted = su_vol.map_into(&target, &m).unwrap();
        let roots = sp.system().unwrap().roots.len();
        let sign = if roots % 2 == 1 { int(-1) } else { int(1) };
        assert!(sp_vol.exact_eq(&restricted.scale(&sign)).unwrap(), "c = {c}: {sp_vol} vs {restricted}");

        let mut signed = sp;
        signed.signed_roots = true;
        assert!(volume(signed).exact_eq(&restricted).unwrap(), "signed roots, c = {c}");
    }
}

#[test]
fn so6_matches_su4_under_the_spin_embedding() {
    let so = AdhmSpec::new(Group::SO, 6, 1);
    let so_vol = volume(so);
    let su = su_system(4, 1).unwrap();
    let su_vol = equivariant_volume(&su, &VolumeOptions::default()).unwrap();
    let target = so_vol.table().clone();
    let t = |signs: [i64; 3]| {
        LinearForm::from_terms(
            &target,
            &[
                (index(&target, "tau1"), rat(signs[0], 2)),
                (index(&target, "tau2"), rat(signs[1], 2)),
                (index(&target, "tau3"), rat(signs[2], 2)),
            ],
        )
    };
    let m = images(
        &su.table,
        &target,
        &[("tau1", t([1, 1, 1])), ("tau2", t([1, -1, -1])), ("tau3", t([-1, 1, -1])), ("tau4", t([-1, -1, 1]))],
    );
    let restricted = su_vol.map_into(&target, &m).unwrap();
    assert!(so_vol.exact_eq(&restricted.neg()).unwrap(), "{so_vol} vs {restricted}");
}

#[test]
fn printed_so_exponent_misses_the_moduli_dimension() {
    let mut spec = AdhmSpec::new(Group::SO, 6, 1);
    spec.so_exponent = SoMomentExponent::Printed;
    // Factor counting still balances, but the degree is no longer minus
    // the complex dimension 2 (n - 2) c of the moduli space.
    let v = volume(spec);
    assert_eq!(v.degree(), Some(degree_identity(&spec.system().unwrap())));
    assert_eq!(v.degree(), Some(-6));
}

/// Minus the complex dimension `2 h c` of the moduli space, `h` the dual
/// Coxeter number.
fn moduli_degree(spec: &AdhmSpec) -> i64 {
    let (n, c) = (spec.n as i64, spec.c as i64);
    let h = match spec.group {
        Group::SU => n,
        Group::Sp => n + 1,
        Group::SO => n - 2,
    };
    -2 * h * c
}
