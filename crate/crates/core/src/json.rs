//! External JSON formats. Field names are fixed; every document carries a
//! `schema` tag with a version suffix.
//!
//! * Rational: `{"num": "-3", "den": "4"}` (decimal strings). On input a
//!   bare integer or a string `"p/q"` is accepted as well.
//! * LinearForm: `{"eps1": <rational>, ...}`, zero coefficients omitted.
//! * Polynomial: `[[<rational>, {"eps1": 2, "tau1": 1}], ...]`, grlex
//!   descending.
//! * FactoredRational: `{schema, symbols, gauge_order?, scalar, numerator,
//!   denominator}` with the value `scalar * numerator / prod(form^mult)`.
//!   A denominator entry is `[form, mult]`, or `[form, mult, origin]` when
//!   the factor still remembers the pre-substitution weight that decides
//!   its residue polarization.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraError, DenFactor, FactoredRational, LinearForm, Monomial, Polynomial, SymbolInfo, SymbolTable};
use crate::quotient::{RootConvention, WeightSystem};
use crate::residue::ResidueTrace;
use crate::{Form, Poly, Rational, RationalFunction};

pub const FUNCTION_SCHEMA: &str = "equivol.rational-function/1";
pub const WEIGHT_SYSTEM_SCHEMA: &str = "equivol.weight-system/1";
pub const SERIES_SCHEMA: &str = "equivol.series/1";
pub const TRACE_SCHEMA: &str = "equivol.trace/1";

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("field `{field}`: {msg}")]
    Field { field: String, msg: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn field_err(field: &str, msg: impl Into<String>) -> JsonError {
    JsonError::Field { field: field.to_string(), msg: msg.into() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
enum RationalInput {
    Pair { num: String, den: String },
    Integer(i64),
    Text(String),
}

/// A rational in either accepted input shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "RationalInput", into = "RationalJson")]
pub struct RationalValue(pub RationalJson);

impl From<RationalInput> for RationalValue {
    fn from(r: RationalInput) -> Self {
        RationalValue(match r {
            RationalInput::Pair { num, den } => RationalJson { num, den },
            RationalInput::Integer(v) => RationalJson { num: v.to_string(), den: "1".into() },
            RationalInput::Text(s) => match s.split_once('/') {
                Some((n, d)) => RationalJson { num: n.trim().into(), den: d.trim().into() },
                None => RationalJson { num: s.trim().into(), den: "1".into() },
            },
        })
    }
}

impl From<RationalValue> for RationalJson {
    fn from(r: RationalValue) -> Self {
        r.0
    }
}

pub fn rational_to_json(r: &Rational) -> RationalValue {
    RationalValue(RationalJson { num: r.numer().to_string(), den: r.denom().to_string() })
}

pub fn rational_from_json(r: &RationalValue, field: &str) -> Result<Rational, JsonError> {
    let n = BigInt::from_str(&r.0.num).map_err(|_| field_err(field, format!("bad numerator {:?}", r.0.num)))?;
    let d = BigInt::from_str(&r.0.den).map_err(|_| field_err(field, format!("bad denominator {:?}", r.0.den)))?;
    if d.is_zero() {
        return Err(field_err(field, "zero denominator"));
    }
    Ok(Rational::new(n, d))
}

pub type FormJson = BTreeMap<String, RationalValue>;
pub type TermJson = (RationalValue, BTreeMap<String, u16>);

pub fn form_to_json(f: &Form) -> FormJson {
    f.support().map(|(i, c)| (f.table().name(i).to_string(), rational_to_json(c))).collect()
}

pub fn form_from_json(table: &SymbolTable, f: &FormJson, field: &str) -> Result<Form, JsonError> {
    let mut coeffs = vec![Rational::zero(); table.len()];
    for (name, c) in f {
        let i = table.index(name).ok_or_else(|| field_err(field, format!("unknown symbol `{name}`")))?;
        coeffs[i] = rational_from_json(c, field)?;
    }
    Ok(LinearForm::new(table, coeffs)?)
}

pub fn poly_to_json(p: &Poly) -> Vec<TermJson> {
    let t = p.table();
    p.terms()
        .iter()
        .map(|(m, c)| {
            let exps = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (t.name(i).to_string(), e))
                .collect();
            (rational_to_json(c), exps)
        })
        .collect()
}

pub fn poly_from_json(table: &SymbolTable, terms: &[TermJson], field: &str) -> Result<Poly, JsonError> {
    let mut out = Vec::with_capacity(terms.len());
    for (k, (c, exps)) in terms.iter().enumerate() {
        let f = format!("{field}[{k}]");
        let mut e = vec![0u16; table.len()];
        for (name, &x) in exps {
            let i = table.index(name).ok_or_else(|| field_err(&f, format!("unknown symbol `{name}`")))?;
            e[i] = x;
        }
        out.push((Monomial::from_exponents(&e), rational_from_json(c, &f)?));
    }
    Ok(Polynomial::from_terms(table, out)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DenJson {
    Plain(FormJson, u32),
    WithOrigin(FormJson, u32, FormJson),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionJson {
    pub schema: String,
    pub symbols: Vec<SymbolInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge_order: Option<Vec<String>>,
    pub scalar: RationalValue,
    pub numerator: Vec<TermJson>,
    pub denominator: Vec<DenJson>,
}

fn gauge_order_json(t: &SymbolTable) -> Option<Vec<String>> {
    let default: Vec<usize> = t.indices_with_role(crate::algebra::Role::Gauge);
    if t.gauge_order() == default.as_slice() {
        None
    } else {
        Some(t.gauge_order().iter().map(|&i| t.name(i).to_string()).collect())
    }
}

pub fn table_from_json(symbols: &[SymbolInfo], order: Option<&[String]>) -> Result<SymbolTable, JsonError> {
    match order {
        None => Ok(SymbolTable::new(symbols.to_vec())?),
        Some(names) => {
            let mut idx = Vec::new();
            for n in names {
                let i = symbols
                    .iter()
                    .position(|s| &s.name == n)
                    .ok_or_else(|| field_err("gauge_order", format!("unknown symbol `{n}`")))?;
                idx.push(i);
            }
            Ok(SymbolTable::with_order(symbols.to_vec(), idx)?)
        }
    }
}

pub fn function_to_json(f: &RationalFunction) -> FunctionJson {
    let t = f.table();
    let denominator = f
        .denominator()
        .iter()
        .map(|d| {
            if d.origin == d.form {
                DenJson::Plain(form_to_json(&d.form), d.mult)
            } else {
                DenJson::WithOrigin(form_to_json(&d.form), d.mult, form_to_json(&d.origin))
            }
        })
        .collect();
    FunctionJson {
        schema: FUNCTION_SCHEMA.into(),
        symbols: t.symbols().to_vec(),
        gauge_order: gauge_order_json(t),
        scalar: rational_to_json(f.scalar()),
        numerator: poly_to_json(&f.numerator()),
        denominator,
    }
}

pub fn function_from_json(j: &FunctionJson) -> Result<RationalFunction, JsonError> {
    if j.schema != FUNCTION_SCHEMA {
        return Err(field_err("schema", format!("expected {FUNCTION_SCHEMA}, found {}", j.schema)));
    }
    let table = table_from_json(&j.symbols, j.gauge_order.as_deref())?;
    function_from_parts(&table, j)
}

fn function_from_parts(table: &SymbolTable, j: &FunctionJson) -> Result<RationalFunction, JsonError> {
    let scalar = rational_from_json(&j.scalar, "scalar")?;
    let poly = poly_from_json(table, &j.numerator, "numerator")?;
    let mut den = Vec::new();
    for (k, d) in j.denominator.iter().enumerate() {
        let field = format!("denominator[{k}]");
        let (form, mult, origin) = match d {
            DenJson::Plain(f, m) => (form_from_json(table, f, &field)?, *m, None),
            DenJson::WithOrigin(f, m, o) => (form_from_json(table, f, &field)?, *m, Some(form_from_json(table, o, &field)?)),
        };
        if form.is_zero() {
            return Err(field_err(&field, "zero form"));
        }
        if mult == 0 {
            return Err(field_err(&field, "multiplicity must be positive"));
        }
        let mut d = DenFactor::new(form, mult);
        if let Some(o) = origin {
            d.origin = o;
        }
        den.push(d);
    }
    Ok(FactoredRational::from_parts(table, scalar, Vec::new(), poly, den)?.cancel())
}

pub fn function_to_string(f: &RationalFunction) -> String {
    serde_json::to_string_pretty(&function_to_json(f)).expect("serializable")
}

pub fn function_from_str(s: &str) -> Result<RationalFunction, JsonError> {
    function_from_json(&serde_json::from_str(s)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSystemJson {
    pub schema: String,
    #[serde(default)]
    pub name: String,
    pub symbols: Vec<SymbolInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge_order: Option<Vec<String>>,
    pub v_weights: Vec<FormJson>,
    #[serde(default)]
    pub muc_weights: Vec<FormJson>,
    #[serde(default)]
    pub roots: Vec<FormJson>,
    /// `squared` (default) or `signed-pairs`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_convention: Option<String>,
    #[serde(default = "one_u64")]
    pub weyl_order: u64,
    /// Full multiplier including `1/weyl_order`; defaults to `1/weyl_order`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefactor: Option<RationalValue>,
    pub cutting_circle: FormJson,
}

fn one_u64() -> u64 {
    1
}

pub fn weight_system_to_json(ws: &WeightSystem<Rational>) -> WeightSystemJson {
    let forms = |v: &[Form]| v.iter().map(form_to_json).collect::<Vec<_>>();
    let circle = LinearForm::new(&ws.table, ws.cutting_circle.clone()).expect("length matches");
    WeightSystemJson {
        schema: WEIGHT_SYSTEM_SCHEMA.into(),
        name: ws.name.clone(),
        symbols: ws.table.symbols().to_vec(),
        gauge_order: gauge_order_json(&ws.table),
        v_weights: forms(&ws.v_weights),
        muc_weights: forms(&ws.muc_weights),
        roots: forms(&ws.roots),
        root_convention: Some(ws.root_convention.as_str().into()),
        weyl_order: ws.weyl_order,
        prefactor: Some(rational_to_json(&ws.prefactor)),
        cutting_circle: form_to_json(&circle),
    }
}

pub fn weight_system_from_json(j: &WeightSystemJson) -> Result<WeightSystem<Rational>, JsonError> {
    if j.schema != WEIGHT_SYSTEM_SCHEMA {
        return Err(field_err("schema", format!("expected {WEIGHT_SYSTEM_SCHEMA}, found {}", j.schema)));
    }
    let table = table_from_json(&j.symbols, j.gauge_order.as_deref())?;
    let forms = |v: &[FormJson], name: &str| -> Result<Vec<Form>, JsonError> {
        v.iter().enumerate().map(|(k, f)| form_from_json(&table, f, &format!("{name}[{k}]"))).collect()
    };
    let root_convention = match &j.root_convention {
        None => RootConvention::Squared,
        Some(s) => RootConvention::parse(s).ok_or_else(|| field_err("root_convention", format!("unknown convention `{s}`")))?,
    };
    if j.weyl_order == 0 {
        return Err(field_err("weyl_order", "must be positive"));
    }
    let prefactor = match &j.prefactor {
        Some(p) => rational_from_json(p, "prefactor")?,
        None => Rational::one() / Rational::from_integer(BigInt::from(j.weyl_order)),
    };
    let circle = form_from_json(&table, &j.cutting_circle, "cutting_circle")?;
    Ok(WeightSystem {
        name: j.name.clone(),
        v_weights: forms(&j.v_weights, "v_weights")?,
        muc_weights: forms(&j.muc_weights, "muc_weights")?,
        roots: forms(&j.roots, "roots")?,
        root_convention,
        weyl_order: j.weyl_order,
        prefactor,
        cutting_circle: circle.coeffs().to_vec(),
        table,
    })
}

pub fn weight_system_to_string(ws: &WeightSystem<Rational>) -> String {
    serde_json::to_string_pretty(&weight_system_to_json(ws)).expect("serializable")
}

pub fn weight_system_from_str(s: &str) -> Result<WeightSystem<Rational>, JsonError> {
    weight_system_from_json(&serde_json::from_str(s)?)
}

/// Coefficient of a series, without the repeated symbol list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientJson {
    pub charge: usize,
    pub scalar: RationalValue,
    pub numerator: Vec<TermJson>,
    pub denominator: Vec<DenJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesJson {
    pub schema: String,
    pub meta: BTreeMap<String, String>,
    pub symbols: Vec<SymbolInfo>,
    pub coefficients: Vec<CoefficientJson>,
}

pub fn series_to_json(meta: BTreeMap<String, String>, table: &SymbolTable, coeffs: &[RationalFunction]) -> SeriesJson {
    let coefficients = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let f = function_to_json(c);
            CoefficientJson { charge: k, scalar: f.scalar, numerator: f.numerator, denominator: f.denominator }
        })
        .collect();
    SeriesJson { schema: SERIES_SCHEMA.into(), meta, symbols: table.symbols().to_vec(), coefficients }
}

pub fn series_from_json(j: &SeriesJson) -> Result<(SymbolTable, Vec<RationalFunction>), JsonError> {
    if j.schema != SERIES_SCHEMA {
        return Err(field_err("schema", format!("expected {SERIES_SCHEMA}, found {}", j.schema)));
    }
    let table = table_from_json(&j.symbols, None)?;
    let mut out = Vec::new();
    for (k, c) in j.coefficients.iter().enumerate() {
        if c.charge != k {
            return Err(field_err(&format!("coefficients[{k}].charge"), "charges must be 0, 1, 2, ... in order"));
        }
        let f = FunctionJson {
            schema: FUNCTION_SCHEMA.into(),
            symbols: j.symbols.clone(),
            gauge_order: None,
            scalar: c.scalar.clone(),
            numerator: c.numerator.clone(),
            denominator: c.denominator.clone(),
        };
        out.push(function_from_parts(&table, &f)?);
    }
    Ok((table, out))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceJson {
    pub schema: String,
    #[serde(flatten)]
    pub trace: ResidueTrace,
}

pub fn trace_to_string(t: &ResidueTrace) -> String {
    serde_json::to_string_pretty(&TraceJson { schema: TRACE_SCHEMA.into(), trace: t.clone() }).expect("serializable")
}

pub fn trace_from_str(s: &str) -> Result<ResidueTrace, JsonError> {
    let j: TraceJson = serde_json::from_str(s)?;
    if j.schema != TRACE_SCHEMA {
        return Err(field_err("schema", format!("expected {TRACE_SCHEMA}, found {}", j.schema)));
    }
    Ok(j.trace)
}
