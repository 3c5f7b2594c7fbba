//! K-theoretic route: characters `prod(1 - x^a) / prod(1 - x^b)`, iterated
//! multiplicative contour residues and the `beta -> 0` limit.
//!
//! A monomial `x^b` stands for `exp(-beta <b, xi>)`, so `1 - x^b` tends to
//! `beta * <b, xi>`.

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use super::OracleError;
use crate::algebra::{FactoredRational, LinearForm, SymbolTable};
use crate::quotient::{RootConvention, WeightSystem};
use crate::scalar::int;
use crate::{Rational, RationalFunction};

/// Exponent vector over the symbol table.
pub type Exponents = Vec<i64>;

#[derive(Clone, Debug, PartialEq)]
pub struct CharacterFunction {
    pub table: SymbolTable,
    pub scalar: Rational,
    pub monomial: Exponents,
    pub num: Vec<(Exponents, u32)>,
    pub den: Vec<(Exponents, u32)>,
}

/// Which poles a contour encloses.
#[derive(Clone, Debug, PartialEq)]
pub enum PolePolicy {
    /// Poles `s = x^a` with `<a, circle>` positive, i.e. those that tend to
    /// zero along the cutting circle; `s = 0` is always enclosed. Ties on
    /// the circle are broken by the second direction, when given.
    CuttingCircle(Vec<Rational>),
    Perturbed(Vec<Rational>, Vec<Rational>),
    /// Poles coming from factors `1 - m / s`.
    NegativeExponent,
}

impl PolePolicy {
    /// Poles that tend to zero when every non-gauge multiplicative symbol
    /// does.
    pub fn smallness(table: &SymbolTable) -> Self {
        let dir = (0..table.len())
            .map(|i| if table.role(i) == crate::algebra::Role::Gauge { int(0) } else { int(1) })
            .collect();
        PolePolicy::CuttingCircle(dir)
    }

    /// The system's cutting circle with a fixed generic tie-break, which
    /// also orders the contour radii of the gauge symbols.
    pub fn for_system(ws: &WeightSystem<Rational>) -> Self {
        let tie = (0..ws.table.len())
            .map(|i| {
                let k = i as i64;
                if ws.table.role(i) == crate::algebra::Role::Gauge {
                    crate::scalar::rat(k + 1, 1000)
                } else {
                    crate::scalar::rat(1, (k + 2) * (k + 5))
                }
            })
            .collect();
        PolePolicy::Perturbed(ws.cutting_circle.clone(), tie)
    }
}

impl CharacterFunction {
    pub fn one(table: &SymbolTable) -> Self {
        CharacterFunction { table: table.clone(), scalar: int(1), monomial: vec![0; table.len()], num: vec![], den: vec![] }
    }

    pub fn monomial_name(&self, e: &[i64]) -> String {
        let mut parts = Vec::new();
        for (i, &k) in e.iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(self.table.name(i).to_string()),
                _ => parts.push(format!("{}^{}", self.table.name(i), k)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Factor multisets sorted, for structural comparison.
    pub fn sorted(&self) -> Self {
        let mut c = self.clone();
        c.num.sort();
        c.den.sort();
        c
    }

    /// Order in `beta` of the leading term.
    pub fn beta_order(&self) -> i64 {
        let n: u32 = self.num.iter().map(|(_, k)| k).sum();
        let d: u32 = self.den.iter().map(|(_, k)| k).sum();
        n as i64 - d as i64
    }
}

impl fmt::Display for CharacterFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fac = |v: &[(Exponents, u32)]| -> String {
            v.iter()
                .map(|(e, k)| {
                    let s = format!("(1 - {})", self.monomial_name(e));
                    if *k == 1 {
                        s
                    } else {
                        format!("{s}^{k}")
                    }
                })
                .collect::<Vec<_>>()
                .join("*")
        };
        write!(f, "{}", self.scalar)?;
        if self.monomial.iter().any(|&k| k != 0) {
            write!(f, "*{}", self.monomial_name(&self.monomial))?;
        }
        if !self.num.is_empty() {
            write!(f, "*{}", fac(&self.num))?;
        }
        if !self.den.is_empty() {
            write!(f, " / ({})", fac(&self.den))?;
        }
        Ok(())
    }
}

fn exponents(w: &LinearForm<Rational>) -> Result<Exponents, OracleError> {
    w.coeffs()
        .iter()
        .map(|c| {
            if c.is_integer() {
                c.to_integer().to_i64().ok_or_else(|| OracleError::Unsupported("huge exponent".into()))
            } else {
                Err(OracleError::Unsupported(format!("weight {w} is not integral")))
            }
        })
        .collect()
}

/// `prefactor * prod_roots (1 - x^a) * prod(1 - x^mu) / prod(1 - x^v)`,
/// the root product taken over positive and negative roots. That product
/// tends to `prod alpha * (-alpha)`, so squared roots pick up the sign
/// `(-1)^(#positive roots)`.
pub fn character_from_weights(ws: &WeightSystem<Rational>) -> Result<CharacterFunction, OracleError> {
    let mut ch = CharacterFunction::one(&ws.table);
    ch.scalar = ws.prefactor.clone();
    if ws.root_convention == RootConvention::Squared && ws.roots.len() % 2 == 1 {
        ch.scalar = -ch.scalar;
    }
    for r in &ws.roots {
        let e = exponents(r)?;
        ch.num.push((e.iter().map(|x| -x).collect(), 1));
        ch.num.push((e, 1));
    }
    for m in &ws.muc_weights {
        ch.num.push((exponents(m)?, 1));
    }
    for v in &ws.v_weights {
        ch.den.push((exponents(v)?, 1));
    }
    if ch.num.iter().chain(&ch.den).any(|(e, _)| e.iter().all(|&x| x == 0)) {
        return Err(OracleError::Unsupported("factor 1 - 1 from a zero weight".into()));
    }
    Ok(ch)
}

fn substitute(e: &[i64], var: usize, a: &[i64]) -> Exponents {
    let k = e[var];
    let mut out = e.to_vec();
    out[var] = 0;
    for (o, x) in out.iter_mut().zip(a) {
        *o += k * x;
    }
    out
}

fn neg_pow(scalar: &mut Rational, k: u32) {
    if k % 2 == 1 {
        *scalar = -scalar.clone();
    }
}

/// A pole of `(1/s) * ch` in `s = var` and the residue there.
#[derive(Clone, Debug, PartialEq)]
pub struct ContourTerm {
    /// `s = x^location`; `None` for `s = 0`.
    pub location: Option<Exponents>,
    pub value: CharacterFunction,
}

/// Residues of `ch ds / s` over the enclosed poles in `var`.
pub fn contour_residue(ch: &CharacterFunction, var: usize, policy: &PolePolicy) -> Result<Vec<ContourTerm>, OracleError> {
    let name = ch.table.name(var).to_string();
    for (e, _) in &ch.den {
        if e[var].abs() > 1 {
            return Err(OracleError::Unsupported(format!("factor with exponent {} in {name}", e[var])));
        }
    }
    let mut out = Vec::new();
    // Order of (1/s) ch at s = 0.
    let mut ord = -1 + ch.monomial[var];
    for (e, k) in &ch.num {
        if e[var] < 0 {
            ord += e[var] * *k as i64;
        }
    }
    for (e, k) in &ch.den {
        if e[var] < 0 {
            ord -= e[var] * *k as i64;
        }
    }
    if ord < -1 {
        return Err(OracleError::Unsupported(format!("pole of order {} at {name} = 0", -ord)));
    }
    if ord == -1 {
        let mut v = ch.clone();
        v.monomial[var] = 0;
        v.num.clear();
        v.den.clear();
        for (e, k) in &ch.num {
            if e[var] < 0 {
                let mut mu = e.clone();
                mu[var] = 0;
                neg_pow(&mut v.scalar, *k);
                for (m, x) in v.monomial.iter_mut().zip(&mu) {
                    *m += *k as i64 * x;
                }
            } else if e[var] == 0 {
                v.num.push((e.clone(), *k));
            }
        }
        for (e, k) in &ch.den {
            if e[var] < 0 {
                let mut mu = e.clone();
                mu[var] = 0;
                neg_pow(&mut v.scalar, *k);
                for (m, x) in v.monomial.iter_mut().zip(&mu) {
                    *m -= *k as i64 * x;
                }
            } else if e[var] == 0 {
                v.den.push((e.clone(), *k));
            }
        }
        out.push(ContourTerm { location: None, value: v });
    }
    let mut seen: Vec<Exponents> = Vec::new();
    for (idx, (e, k)) in ch.den.iter().enumerate() {
        let s = e[var];
        if s == 0 {
            continue;
        }
        let mut mu = e.clone();
        mu[var] = 0;
        let a: Exponents = if s < 0 { mu } else { mu.iter().map(|x| -x).collect() };
        let enclosed = match policy {
            PolePolicy::NegativeExponent => s < 0,
            PolePolicy::CuttingCircle(circle) | PolePolicy::Perturbed(circle, _) => {
                // |x^a| against the radius |s| of the contour in `var`.
                let pair = |dir: &[Rational]| -> Rational {
                    a.iter().zip(dir).map(|(x, c)| c * int(*x)).fold(-dir[var].clone(), |x, y| x + y)
                };
                let mut p = pair(circle);
                if let (true, PolePolicy::Perturbed(_, tie)) = (p.is_zero(), policy) {
                    p = pair(tie);
                }
                if p.is_zero() {
                    return Err(OracleError::Unsupported(format!(
                        "pole {name} = {} lies on the contour",
                        ch.monomial_name(&a)
                    )));
                }
                p.is_positive()
            }
        };
        if !enclosed {
            continue;
        }
        if seen.contains(&a) || *k > 1 {
            return Err(OracleError::Unsupported(format!("higher-order pole at {name} = {}", ch.monomial_name(&a))));
        }
        seen.push(a.clone());
        let mut v = ch.clone();
        if s > 0 {
            v.scalar = -v.scalar;
        }
        v.monomial = substitute(&ch.monomial, var, &a);
        v.num.clear();
        v.den.clear();
        let mut zero = false;
        for (f, m) in &ch.num {
            let g = substitute(f, var, &a);
            zero |= g.iter().all(|&x| x == 0);
            v.num.push((g, *m));
        }
        if zero {
            continue;
        }
        for (j, (f, m)) in ch.den.iter().enumerate() {
            if j == idx {
                continue;
            }
            let g = substitute(f, var, &a);
            if g.iter().all(|&x| x == 0) {
                return Err(OracleError::Unsupported(format!("coincident poles at {name} = {}", ch.monomial_name(&a))));
            }
            v.den.push((g, *m));
        }
        out.push(ContourTerm { location: Some(a), value: v });
    }
    Ok(out)
}

/// Iterate [`contour_residue`] over the gauge symbols, last in the residue
/// order first.
pub fn iterated_contour(ch: &CharacterFunction, policy: &PolePolicy) -> Result<Vec<CharacterFunction>, OracleError> {
    let mut terms = vec![ch.clone()];
    for &var in ch.table.gauge_order().iter().rev() {
        let mut next = Vec::new();
        for t in &terms {
            next.extend(contour_residue(t, var, policy)?.into_iter().map(|c| c.value));
        }
        terms = next;
    }
    Ok(terms)
}

fn form_of(table: &SymbolTable, e: &[i64]) -> LinearForm<Rational> {
    LinearForm::new(table, e.iter().map(|&x| int(x)).collect()).expect("length matches")
}

/// Leading term of `beta^dim * sum(terms)` as `beta -> 0`; every term
/// must have `beta` order exactly `-dim`.
pub fn beta_limit(terms: &[CharacterFunction], dim: i64) -> Result<RationalFunction, OracleError> {
    let Some(first) = terms.first() else {
        return Err(OracleError::Unsupported("no residue terms".into()));
    };
    let table = first.table.clone();
    let mut out = Vec::new();
    for t in terms {
        if t.beta_order() + dim != 0 {
            return Err(OracleError::Unbalanced { order: t.beta_order(), dim });
        }
        let num = t.num.iter().map(|(e, k)| (form_of(&table, e), *k)).collect();
        let mut den = Vec::new();
        for (e, k) in &t.den {
            den.push((form_of(&table, e), *k));
        }
        let f = FactoredRational::from_linear(&table, t.scalar.clone(), num, den)?;
        out.push(f);
    }
    Ok(FactoredRational::sum(&table, out)?.canonical())
}

/// Whole K-theoretic pipeline for a weight system.
pub fn k_theory_volume(ws: &WeightSystem<Rational>, policy: &PolePolicy) -> Result<RationalFunction, OracleError> {
    let ch = character_from_weights(ws)?;
    let terms = iterated_contour(&ch, policy)?;
    if terms.is_empty() {
        return Ok(FactoredRational::zero(&ws.table));
    }
    beta_limit(&terms, ws.quotient_dimension())
}
