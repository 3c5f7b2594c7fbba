//! Instanton partition function as a truncated q-series of volumes, and
//! the prepotential `F = eps1 eps2 log Z`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::adhm::{rescale_epsilon, AdhmSpec, Group, Rescale, SoMomentExponent};
use crate::algebra::{AlgebraError, FactoredRational, LinearForm, Role, SymbolInfo, SymbolTable};
use crate::cache::Cache;
use crate::json::{series_from_json, series_to_json, SeriesJson};
use crate::quotient::{equivariant_volume, QuotientError, VolumeOptions};
use crate::render::latex_function;
use crate::scalar::{int, rat};
use crate::{Form, Rational, RationalFunction};

#[derive(Debug, thiserror::Error)]
pub enum NekrasovError {
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("charge {k}: degree {found:?} violates the dimension law {expected}")]
    DimensionLaw { k: usize, expected: i64, found: Option<i64> },
    #[error("series must start with 1")]
    NotUnital,
    #[error("assignment: {0}")]
    Assignment(String),
}

/// Truncated series `sum_k coeffs[k] q^k`.
#[derive(Clone, Debug)]
pub struct QSeries {
    pub meta: BTreeMap<String, String>,
    pub table: SymbolTable,
    pub coeffs: Vec<RationalFunction>,
}

impl QSeries {
    pub fn kmax(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn to_json(&self) -> SeriesJson {
        series_to_json(self.meta.clone(), &self.table, &self.coeffs)
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self, crate::json::JsonError> {
        let (table, coeffs) = series_from_json(j)?;
        Ok(QSeries { meta: j.meta.clone(), table, coeffs })
    }

    pub fn latex(&self) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = latex_function(c);
            parts.push(match k {
                0 => body,
                1 => format!("\\left({body}\\right) q"),
                _ => format!("\\left({body}\\right) q^{{{k}}}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            format!("{} + O(q^{{{}}})", parts.join(" + "), self.coeffs.len())
        }
    }

    pub fn evaluate(&self, assignment: &BTreeMap<String, Rational>) -> Result<Vec<Rational>, NekrasovError> {
        self.coeffs.iter().map(|c| evaluate(c, assignment)).collect()
    }

    /// Coefficient-wise exact equality.
    pub fn exact_eq(&self, other: &QSeries) -> Result<bool, AlgebraError> {
        if self.coeffs.len() != other.coeffs.len() {
            return Ok(false);
        }
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            if !a.exact_eq(&b.with_table(&self.table)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `eps1, eps2, tau1..tau_framing`: the symbols every coefficient lives on.
pub fn series_table(framing: usize) -> SymbolTable {
    let mut s = vec![
        SymbolInfo { name: "eps1".into(), role: Role::Equivariant },
        SymbolInfo { name: "eps2".into(), role: Role::Equivariant },
    ];
    for l in 1..=framing {
        s.push(SymbolInfo { name: format!("tau{l}"), role: Role::Framing });
    }
    SymbolTable::new(s).expect("distinct names")
}

#[derive(Clone, Debug, Default)]
pub struct SeriesOptions {
    pub rescale: Rescale,
    pub signed_roots: bool,
    pub so_exponent: SoMomentExponent,
    pub volume: VolumeOptions,
    pub cache: Option<Cache>,
    /// Compute the charges on the rayon pool.
    pub parallel: bool,
}

impl SeriesOptions {
    fn spec(&self, group: Group, n: usize, k: usize) -> AdhmSpec {
        AdhmSpec { group, n, c: k, rescale: self.rescale, signed_roots: self.signed_roots, so_exponent: self.so_exponent }
    }
}

/// Volume of one ADHM instance on its own table, through the cache when
/// one is configured. The rescale convention is applied afterwards and is
/// not part of the cache key.
pub fn adhm_volume(spec: &AdhmSpec, opts: &SeriesOptions) -> Result<RationalFunction, NekrasovError> {
    let ws = spec.system()?;
    let key = opts.cache.as_ref().map(|_| Cache::key(&ws, ""));
    let cached = match (&opts.cache, &key) {
        (Some(c), Some(k)) => c.get(k).and_then(|v| v.with_table(&ws.table).ok()),
        _ => None,
    };
    let v = match cached {
        Some(v) => v,
        None => {
            let v = equivariant_volume(&ws, &opts.volume)?;
            if let (Some(c), Some(k)) = (&opts.cache, &key) {
                // A failed write only costs a recomputation later.
                let _ = c.put(k, &v);
            }
            v
        }
    };
    let expected = ws.expected_degree();
    if !v.is_zero() && v.degree() != Some(expected) {
        return Err(NekrasovError::DimensionLaw { k: spec.c, expected, found: v.degree() });
    }
    Ok(rescale_epsilon(&v, spec.rescale)?)
}

fn to_series_table(f: &RationalFunction, target: &SymbolTable) -> Result<RationalFunction, AlgebraError> {
    let t = f.table();
    let images: Vec<Form> = (0..t.len())
        .map(|i| match target.index(t.name(i)) {
            Some(j) => LinearForm::var(target, j),
            None => LinearForm::zero(target),
        })
        .collect();
    f.map_into(target, &images)
}

/// `Z = 1 + sum_{k=1..kmax} vol(group, n, k) q^k`.
pub fn zinst(group: Group, n: usize, kmax: usize, opts: &SeriesOptions) -> Result<QSeries, NekrasovError> {
    let framing = opts.spec(group, n, 1).framing();
    let table = series_table(framing);
    let one = |k: usize| -> Result<RationalFunction, NekrasovError> {
        let v = adhm_volume(&opts.spec(group, n, k), opts)?;
        Ok(to_series_table(&v, &table)?)
    };
    let ks: Vec<usize> = (1..=kmax).collect();
    let rest: Vec<Result<RationalFunction, NekrasovError>> =
        if opts.parallel { ks.par_iter().map(|&k| one(k)).collect() } else { ks.iter().map(|&k| one(k)).collect() };
    let mut coeffs = vec![FactoredRational::one(&table)];
    for r in rest {
        coeffs.push(r?);
    }
    let mut meta = BTreeMap::new();
    meta.insert("group".into(), group.to_string());
    meta.insert("n".into(), n.to_string());
    meta.insert("rescale".into(), opts.rescale.to_string());
    meta.insert("roots".into(), if opts.signed_roots { "signed-pairs" } else { "squared" }.into());
    if group == Group::SO {
        meta.insert("so_exponent".into(), opts.so_exponent.to_string());
    }
    meta.insert("series".into(), "zinst".into());
    Ok(QSeries { meta, table, coeffs })
}

/// `log(1 + a_1 q + ...)` by `k L_k = k a_k - sum_{j<k} j L_j a_{k-j}`.
pub fn series_log(a: &[RationalFunction], table: &SymbolTable) -> Result<Vec<RationalFunction>, NekrasovError> {
    match a.first() {
        Some(a0) if a0.exact_eq(&FactoredRational::one(table))? => {}
        None => return Ok(Vec::new()),
        _ => return Err(NekrasovError::NotUnital),
    }
    let mut l = vec![FactoredRational::zero(table)];
    for k in 1..a.len() {
        let mut terms = Vec::with_capacity(k);
        for j in 1..k {
            terms.push(l[j].mul(&a[k - j])?.scale(&rat(-(j as i64), k as i64)));
        }
        terms.push(a[k].clone());
        l.push(FactoredRational::sum(table, terms)?.canonical());
    }
    Ok(l)
}

/// `exp(f)` for `f` without constant term, by `k e_k = sum_j j f_j e_{k-j}`.
pub fn series_exp(f: &[RationalFunction], table: &SymbolTable) -> Result<Vec<RationalFunction>, NekrasovError> {
    if let Some(f0) = f.first() {
        if !f0.is_zero() {
            return Err(NekrasovError::NotUnital);
        }
    }
    let mut e = vec![FactoredRational::one(table)];
    for k in 1..f.len() {
        let mut terms = Vec::with_capacity(k);
        for j in 1..=k {
            terms.push(f[j].mul(&e[k - j])?.scale(&rat(j as i64, k as i64)));
        }
        e.push(FactoredRational::sum(table, terms)?.canonical());
    }
    Ok(e)
}

fn eps_product(table: &SymbolTable) -> Result<RationalFunction, NekrasovError> {
    let e1 = LinearForm::var(table, table.require("eps1")?);
    let e2 = LinearForm::var(table, table.require("eps2")?);
    Ok(FactoredRational::from_linear(table, int(1), vec![(e1, 1), (e2, 1)], vec![])?)
}

/// `F = eps1 eps2 log Z`, truncated at the same order.
pub fn finst(z: &QSeries) -> Result<QSeries, NekrasovError> {
    let e = eps_product(&z.table)?;
    let log = series_log(&z.coeffs, &z.table)?;
    let coeffs = log.iter().map(|c| Ok(c.mul(&e)?.canonical())).collect::<Result<Vec<_>, NekrasovError>>()?;
    let mut meta = z.meta.clone();
    meta.insert("series".into(), "finst".into());
    Ok(QSeries { meta, table: z.table.clone(), coeffs })
}

/// `exp(F / (eps1 eps2))`, the inverse of [`finst`].
pub fn zinst_from_finst(f: &QSeries) -> Result<QSeries, NekrasovError> {
    let e = eps_product(&f.table)?;
    let scaled = f.coeffs.iter().map(|c| Ok(c.div(&e)?)).collect::<Result<Vec<_>, NekrasovError>>()?;
    let coeffs = series_exp(&scaled, &f.table)?;
    let mut meta = f.meta.clone();
    meta.insert("series".into(), "zinst".into());
    Ok(QSeries { meta, table: f.table.clone(), coeffs })
}

/// Exact value at an assignment by symbol name. Symbols the function does
/// not depend on may be left out.
pub fn evaluate(f: &RationalFunction, assignment: &BTreeMap<String, Rational>) -> Result<Rational, NekrasovError> {
    let t = f.table();
    for name in assignment.keys() {
        if t.index(name).is_none() {
            return Err(NekrasovError::Assignment(format!("unknown symbol `{name}`")));
        }
    }
    let mut point = Vec::with_capacity(t.len());
    for i in 0..t.len() {
        match assignment.get(t.name(i)) {
            Some(v) => point.push(v.clone()),
            None if f.depends_on(i) => {
                return Err(NekrasovError::Assignment(format!("no value for `{}`", t.name(i))));
            }
            None => point.push(int(0)),
        }
    }
    Ok(f.evaluate(&point)?)
}
