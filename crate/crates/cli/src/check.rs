//! Built-in verification suites for `equivol check`.

use anyhow::{anyhow, bail};
use serde::Serialize;

use equivol::adhm::su_system;
use equivol::algebra::{FactoredRational, LinearForm, SymbolTable};
use equivol::nekrasov::{self, SeriesOptions};
use equivol::oracle::{k_theory_volume, partition_sum_su, PolePolicy};
use equivol::quotient::{equivariant_volume, VolumeOptions, WeightSystem};
use equivol::samples::{basic_system, c4_system};
use equivol::scalar::rat;
use equivol::{Rational, RationalFunction};

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// Empty on success; otherwise the two sides or the error.
    pub detail: String,
}

fn compare(name: &str, got: anyhow::Result<RationalFunction>, want: anyhow::Result<RationalFunction>) -> CheckResult {
    let (pass, detail) = match (got, want) {
        (Ok(g), Ok(w)) => match g.exact_eq(&w) {
            Ok(true) => (true, String::new()),
            Ok(false) => (false, format!("got {}, expected {}", g.canonical(), w.canonical())),
            Err(e) => (false, e.to_string()),
        },
        (Err(e), _) | (_, Err(e)) => (false, format!("{e:#}")),
    };
    CheckResult { name: name.to_string(), pass, detail }
}

fn volume(ws: &WeightSystem<Rational>) -> anyhow::Result<RationalFunction> {
    Ok(equivariant_volume(ws, &VolumeOptions::default())?)
}

/// `scale / prod(forms)` on `table`, forms given by symbol names.
fn reciprocal(table: &SymbolTable, scale: Rational, forms: &[&[(&str, i64)]]) -> anyhow::Result<RationalFunction> {
    let mut den = Vec::new();
    for f in forms {
        den.push((LinearForm::parse_terms(table, f)?, 1));
    }
    Ok(FactoredRational::from_linear(table, scale, vec![], den)?)
}

fn paper_examples() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let b = basic_system();
    out.push(compare("basic C^2 volume = 1/(2 tau)", volume(&b), reciprocal(&b.table, rat(1, 2), &[&[("tau", 1)]])));

    let c4 = c4_system();
    let want = || reciprocal(&c4.table, rat(1, 2), &[&[("tau1", 1)], &[("tau2", 1)]]);
    out.push(compare("C^4 hyper-Kaehler quotient = 1/(2 tau1 tau2)", volume(&c4), want()));
    out.push(compare(
        "C^4 K-theoretic contour route",
        k_theory_volume(&c4, &PolePolicy::for_system(&c4)).map_err(Into::into),
        want(),
    ));

    let opts = SeriesOptions::default();
    match nekrasov::zinst(equivol::adhm::Group::SU, 1, 3, &opts) {
        Ok(z) => {
            let mut fact = 1i64;
            for k in 0..=3usize {
                if k > 0 {
                    fact *= k as i64;
                }
                let e1: Vec<(&str, i64)> = vec![("eps1", 1)];
                let e2: Vec<(&str, i64)> = vec![("eps2", 1)];
                let mut forms: Vec<&[(&str, i64)]> = Vec::new();
                for _ in 0..k {
                    forms.push(&e1);
                    forms.push(&e2);
                }
                let want = reciprocal(&z.table, rat(1, fact), &forms);
                out.push(compare(&format!("U(1) instanton coefficient q^{k}"), Ok(z.coeffs[k].clone()), want));
            }
        }
        Err(e) => out.push(CheckResult { name: "U(1) instanton series".into(), pass: false, detail: e.to_string() }),
    }
    out
}

fn oracles() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for (n, k) in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1)] {
        let ws = su_system(n, k).map_err(anyhow::Error::from);
        let engine = ws.as_ref().map_err(|e| anyhow!("{e}")).and_then(volume);
        out.push(compare(
            &format!("SU({n}) charge {k}: residues vs partition sum"),
            engine,
            partition_sum_su(n, k).map_err(Into::into),
        ));
    }
    for (n, k) in [(1, 1), (1, 2), (2, 1)] {
        let ws = match su_system(n, k) {
            Ok(ws) => ws,
            Err(e) => {
                out.push(CheckResult { name: format!("SU({n}) charge {k}"), pass: false, detail: e.to_string() });
                continue;
            }
        };
        out.push(compare(
            &format!("SU({n}) charge {k}: residues vs contour integrals"),
            volume(&ws),
            k_theory_volume(&ws, &PolePolicy::for_system(&ws)).map_err(Into::into),
        ));
    }
    let b = basic_system();
    out.push(compare(
        "basic C^2: residues vs contour integrals",
        volume(&b),
        k_theory_volume(&b, &PolePolicy::for_system(&b)).map_err(Into::into),
    ));
    out
}

pub fn run_suite(name: &str) -> anyhow::Result<Vec<CheckResult>> {
    Ok(match name {
        "paper-examples" => paper_examples(),
        "oracles" => oracles(),
        "all" => {
            let mut v = paper_examples();
            v.extend(oracles());
            v
        }
        other => bail!("unknown suite `{other}` (expected paper-examples, oracles or all)"),
    })
}
