//! Admissible paths: the iterated residue expanded as a sum over ordered
//! choices of one denominator factor per gauge variable.
//!
//! Non-degenerate paths are evaluated in closed form, numerator and
//! remaining factors at the pole point divided by the product of pivots,
//! without going through the one-variable residue code. A step whose
//! hyperplane is shared by several factors is degenerate; its whole subtree
//! is handed to the iterated engine and reported as one bundled path.

use super::{pole_classes, res_plus_iterated, residue_at, ResidueError, ResidueOptions};
use crate::algebra::{FactoredRational, LinearForm};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct PathStep<S: Scalar> {
    pub variable: usize,
    /// Indices into the input's denominator list sharing this pole.
    pub factors: Vec<usize>,
    pub location: LinearForm<S>,
    /// Coefficient of `variable` in the chosen factor after the earlier
    /// substitutions.
    pub pivot: S,
}

#[derive(Clone, Debug)]
pub struct AdmissiblePath<S: Scalar> {
    pub steps: Vec<PathStep<S>>,
    /// Pole point, gauge symbol to form in the remaining symbols. Empty for
    /// degenerate bundles.
    pub point: Vec<(usize, LinearForm<S>)>,
    pub contribution: FactoredRational<S>,
    pub degenerate: bool,
}

struct State<S: Scalar> {
    current: Vec<LinearForm<S>>,
    used: Vec<bool>,
    steps: Vec<PathStep<S>>,
}

pub fn enumerate_admissible_paths<S: Scalar>(
    f: &FactoredRational<S>,
    opts: &ResidueOptions,
) -> Result<Vec<AdmissiblePath<S>>, ResidueError> {
    let order = opts.order.clone().unwrap_or_else(|| f.table().gauge_order().to_vec());
    let den = f.denominator();
    let state = State {
        current: den.iter().map(|d| d.form.clone()).collect(),
        used: vec![false; den.len()],
        steps: Vec::new(),
    };
    let mut out = Vec::new();
    walk(f, &order, state, &mut out)?;
    Ok(out)
}

fn walk<S: Scalar>(
    f: &FactoredRational<S>,
    vars: &[usize],
    st: State<S>,
    out: &mut Vec<AdmissiblePath<S>>,
) -> Result<(), ResidueError> {
    let Some((&var, rest)) = vars.split_last() else {
        out.push(leaf(f, &st)?);
        return Ok(());
    };
    let den = f.denominator();
    // Group unused var-dependent factors by hyperplane.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..den.len() {
        if st.used[i] || st.current[i].coeff(var).is_zero() {
            continue;
        }
        match groups.iter_mut().find(|g| st.current[g[0]].ratio_from(&st.current[i]).is_some()) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    for g in groups {
        if !g.iter().any(|&i| den[i].origin.coeff(var).is_positive_s()) {
            continue;
        }
        let lead = g[0];
        let pivot = st.current[lead].coeff(var).clone();
        let loc = LinearForm::var(f.table(), var)
            .sub(&st.current[lead].scale(&S::one().div_ref(&pivot)))
            .expect("same table");
        let mut steps = st.steps.clone();
        steps.push(PathStep { variable: var, factors: g.clone(), location: loc.clone(), pivot });
        if g.len() > 1 || den[lead].mult > 1 {
            out.push(bundle(f, steps, rest)?);
            continue;
        }
        let mut current = st.current.clone();
        let mut used = st.used.clone();
        used[lead] = true;
        for (i, c) in current.iter_mut().enumerate() {
            if !used[i] {
                *c = c.substitute(var, &loc);
            }
        }
        walk(f, rest, State { current, used, steps }, out)?;
    }
    Ok(())
}

fn leaf<S: Scalar>(f: &FactoredRational<S>, st: &State<S>) -> Result<AdmissiblePath<S>, ResidueError> {
    let table = f.table();
    // Back substitution: steps were taken last variable first, so the final
    // step's location involves no gauge symbol.
    let mut point: Vec<(usize, LinearForm<S>)> = Vec::new();
    for s in st.steps.iter().rev() {
        let mut v = s.location.clone();
        for (u, val) in &point {
            v = v.substitute(*u, val);
        }
        point.push((s.variable, v));
    }
    let at = |g: &LinearForm<S>| {
        let mut h = g.clone();
        for (u, val) in &point {
            h = h.substitute(*u, val);
        }
        h
    };
    let mut scalar = f.scalar().clone();
    for s in &st.steps {
        scalar = scalar.div_ref(&s.pivot);
    }
    let mut num = Vec::new();
    let mut zero = false;
    for (g, m) in f.numerator_factors() {
        let h = at(g);
        zero |= h.is_zero();
        num.push((h, *m));
    }
    let mut poly = f.numerator_poly().clone();
    for (u, val) in &point {
        poly = poly.substitute(*u, val)?;
    }
    let contribution = if zero || poly.is_zero() {
        FactoredRational::zero(table)
    } else {
        let mut den = Vec::new();
        for (i, d) in f.denominator().iter().enumerate() {
            if !st.used[i] {
                den.push((at(&d.form), d.mult));
            }
        }
        let mut r = FactoredRational::new(scalar, poly, den)?;
        for (g, m) in num {
            r = r.mul_form(&g, m)?;
        }
        r
    };
    Ok(AdmissiblePath { steps: st.steps.clone(), point, contribution, degenerate: false })
}

fn bundle<S: Scalar>(
    f: &FactoredRational<S>,
    steps: Vec<PathStep<S>>,
    rest: &[usize],
) -> Result<AdmissiblePath<S>, ResidueError> {
    let mut g = f.clone();
    for s in &steps {
        let c = pole_classes(&g, s.variable).into_iter().find(|c| c.location == s.location);
        match c {
            Some(c) => g = residue_at(&g, &c)?,
            None => g = FactoredRational::zero(f.table()),
        }
        if g.is_zero() {
            break;
        }
    }
    let contribution = if g.is_zero() || rest.is_empty() {
        g
    } else {
        res_plus_iterated(&g, &ResidueOptions { parallel: false, order: Some(rest.to_vec()) })?.0
    };
    Ok(AdmissiblePath { steps, point: Vec::new(), contribution, degenerate: true })
}
