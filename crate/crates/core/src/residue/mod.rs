//! One-variable and iterated residues of rational functions with linear
//! denominators.

mod iterated;
mod jk;
mod paths;

pub use iterated::{replay, res_plus_iterated, ResidueOptions, ResidueTrace, TraceStep};
pub use jk::{jk_surviving_sum, jkres_plus_exp, ExpTerm, JkResidue};
pub use paths::{enumerate_admissible_paths, AdmissiblePath, PathStep};

use thiserror::Error;

use crate::algebra::{AlgebraError, DenFactor, FactoredRational, LinearForm};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResidueError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassMember<S: Scalar> {
    /// Index into the denominator list of the function.
    pub index: usize,
    pub mult: u32,
    /// `form = scale * (var - location)`.
    pub scale: S,
    /// Sign of the origin's coefficient in the active variable.
    pub positive: bool,
}

/// Denominator factors sharing one hyperplane in the active variable.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleClass<S: Scalar> {
    pub var: usize,
    /// The pole is at `var = location`.
    pub location: LinearForm<S>,
    pub members: Vec<ClassMember<S>>,
    pub order: u32,
    /// Selected by `Res+`: some member is positively polarized.
    pub selected: bool,
}

/// Group var-dependent denominator factors into pole classes, in order of
/// first appearance.
pub fn pole_classes<S: Scalar>(f: &FactoredRational<S>, var: usize) -> Vec<PoleClass<S>> {
    let mut classes: Vec<PoleClass<S>> = Vec::new();
    for (index, d) in f.denominator().iter().enumerate() {
        let a = d.form.coeff(var);
        if a.is_zero() {
            continue;
        }
        let member = |scale: S| ClassMember {
            index,
            mult: d.mult,
            scale,
            positive: d.origin.coeff(var).is_positive_s(),
        };
        let found = classes.iter_mut().find(|c| {
            let rep = pole_rep(&c.location, var);
            rep.ratio_from(&d.form).is_some()
        });
        match found {
            Some(c) => {
                let m = member(a.clone());
                c.order += m.mult;
                c.selected |= m.positive;
                c.members.push(m);
            }
            None => {
                // var - location = form / a
                let mut loc = d.form.scale(&S::one().div_ref(a)).neg();
                loc = loc.add(&LinearForm::var(d.form.table(), var)).expect("same table");
                let m = member(a.clone());
                classes.push(PoleClass { var, location: loc, order: m.mult, selected: m.positive, members: vec![m] });
            }
        }
    }
    classes
}

fn pole_rep<S: Scalar>(location: &LinearForm<S>, var: usize) -> LinearForm<S> {
    LinearForm::var(location.table(), var).sub(location).expect("same table")
}

fn binom(n: u64, k: u64) -> u64 {
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Residue at one pole class as a list of summands. Simple poles give one
/// term; higher orders expand the Taylor coefficient
/// `[h^(m-1)] N(a+h) / prod L(a+h)^k`.
pub fn residue_terms<S: Scalar>(
    f: &FactoredRational<S>,
    class: &PoleClass<S>,
) -> Result<Vec<FactoredRational<S>>, ResidueError> {
    let var = class.var;
    let table = f.table();
    let in_class = |i: usize| class.members.iter().any(|m| m.index == i);
    let mut scalar = f.scalar().clone();
    for m in &class.members {
        scalar = scalar.div_ref(&m.scale.powi_s(m.mult));
    }
    let rest: Vec<DenFactor<S>> = f
        .denominator()
        .iter()
        .enumerate()
        .filter(|(i, _)| !in_class(*i))
        .map(|(_, d)| d.clone())
        .collect();
    let loc = &class.location;
    if class.order == 1 {
        let g = FactoredRational::from_parts(
            table,
            scalar,
            f.numerator_factors().to_vec(),
            f.numerator_poly().clone(),
            rest,
        )?;
        return Ok(vec![g.substitute_inert(var, loc)?]);
    }
    let m = class.order;
    let mut keep = Vec::new();
    let mut p = f.numerator_poly().clone();
    for (g, k) in f.numerator_factors() {
        if g.depends_on(var) {
            p = p.mul_form_pow(g, *k)?;
        } else {
            keep.push((g.clone(), *k));
        }
    }
    // Taylor coefficients p_j(a) = p^(j)(a) / j!
    let mut taylor = Vec::with_capacity(m as usize);
    let mut deriv = p;
    let mut fact = S::one();
    for j in 0..m {
        if j > 0 {
            deriv = deriv.differentiate(var);
            fact = fact.mul_ref(&S::from_i64(j as i64));
        }
        taylor.push(deriv.substitute(var, loc)?.scale(&S::one().div_ref(&fact)));
    }
    let (active, inert): (Vec<DenFactor<S>>, Vec<DenFactor<S>>) =
        rest.into_iter().partition(|d| d.form.depends_on(var));
    let shifted: Vec<DenFactor<S>> = active
        .iter()
        .map(|d| DenFactor { form: d.form.substitute(var, loc), mult: d.mult, origin: d.origin.clone() })
        .collect();
    if let Some(d) = shifted.iter().find(|d| d.form.is_zero()) {
        return Err(AlgebraError::VanishingFactor(d.origin.to_string()).into());
    }
    let mut out = Vec::new();
    for (j, pj) in taylor.iter().enumerate() {
        if pj.is_zero() {
            continue;
        }
        let r = m - 1 - j as u32;
        for comp in compositions(r, active.len()) {
            let mut c = scalar.clone();
            let mut den = inert.clone();
            for ((d, s), &ri) in active.iter().zip(&shifted).zip(&comp) {
                // binom(-k, r) c^r = (-1)^r binom(k + r - 1, r) c^r
                let b = binom((d.mult + ri - 1) as u64, ri as u64) as i64;
                let sign = if ri % 2 == 1 { -1 } else { 1 };
                c = c.mul_ref(&S::from_i64(sign * b)).mul_ref(&d.form.coeff(var).powi_s(ri));
                den.push(DenFactor { form: s.form.clone(), mult: d.mult + ri, origin: s.origin.clone() });
            }
            let g = FactoredRational::from_parts(table, c, keep.clone(), pj.clone(), den)?.cancel_inert();
            if !g.is_zero() {
                out.push(g);
            }
        }
    }
    Ok(out)
}

/// Residue of `f` in `var` at one pole class.
pub fn residue_at<S: Scalar>(
    f: &FactoredRational<S>,
    class: &PoleClass<S>,
) -> Result<FactoredRational<S>, ResidueError> {
    let terms = residue_terms(f, class)?;
    Ok(FactoredRational::sum(f.table(), terms)?)
}

/// Positive residue in one variable: the sum over selected classes.
pub fn res_plus<S: Scalar>(f: &FactoredRational<S>, var: usize) -> Result<FactoredRational<S>, ResidueError> {
    let mut terms = Vec::new();
    for c in pole_classes(f, var).iter().filter(|c| c.selected) {
        terms.push(residue_at(f, c)?);
    }
    Ok(FactoredRational::sum(f.table(), terms)?)
}

/// Sum of residues over every finite pole in `var`.
pub fn total_residue<S: Scalar>(f: &FactoredRational<S>, var: usize) -> Result<FactoredRational<S>, ResidueError> {
    let mut terms = Vec::new();
    for c in pole_classes(f, var) {
        terms.push(residue_at(f, &c)?);
    }
    Ok(FactoredRational::sum(f.table(), terms)?)
}

/// Reference route: `(1/(m-1)!) d^(m-1)/dv^(m-1) [(v - a)^m f]` at `v = a`.
pub fn residue_by_derivative<S: Scalar>(
    f: &FactoredRational<S>,
    class: &PoleClass<S>,
) -> Result<FactoredRational<S>, ResidueError> {
    let var = class.var;
    let mut g = f.clone();
    let rep = pole_rep(&class.location, var);
    g = g.mul_form(&rep, class.order)?;
    if pole_classes(&g, var).iter().any(|c| c.location == class.location) {
        return Err(ResidueError::Unsupported("pole did not cancel".into()));
    }
    let mut fact = S::one();
    for j in 1..class.order {
        g = g.differentiate(var)?;
        fact = fact.mul_ref(&S::from_i64(j as i64));
    }
    Ok(g.substitute(var, &class.location)?.scale(&S::one().div_ref(&fact)))
}
