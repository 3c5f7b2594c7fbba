use super::{pole_classes, residue_at, ResidueError};
use crate::algebra::{FactoredRational, LinearForm};
use crate::scalar::Scalar;

/// `g * exp(lambda * exponent)` with a formal coupling `lambda`.
#[derive(Clone, Debug)]
pub struct ExpTerm<S: Scalar> {
    pub g: FactoredRational<S>,
    pub exponent: LinearForm<S>,
}

/// One residue of a `jkres+` sum.
#[derive(Clone, Debug)]
pub struct JkResidue<S: Scalar> {
    pub location: LinearForm<S>,
    pub value: FactoredRational<S>,
    /// Exponent evaluated at the pole.
    pub exponent: LinearForm<S>,
    /// Nonzero exponent: the term vanishes in the cut limit.
    pub vanishing: bool,
}

/// Residues of `sum_j g_j exp(lambda E_j)` in `var`, keeping terms whose
/// exponent has nonnegative coefficient of `var` and summing over every
/// pole of those terms.
pub fn jkres_plus_exp<S: Scalar>(terms: &[ExpTerm<S>], var: usize) -> Result<Vec<JkResidue<S>>, ResidueError> {
    let mut out = Vec::new();
    for t in terms {
        let lam = t.exponent.coeff(var);
        if lam.is_negative_s() {
            continue;
        }
        for c in pole_classes(&t.g, var) {
            if c.order > 1 && !lam.is_zero() {
                return Err(ResidueError::Unsupported(format!(
                    "pole of order {} at {} = {} with exponential factor",
                    c.order,
                    t.g.table().name(var),
                    c.location
                )));
            }
            let value = residue_at(&t.g, &c)?;
            if value.is_zero() {
                continue;
            }
            let exponent = t.exponent.substitute(var, &c.location);
            out.push(JkResidue { location: c.location.clone(), vanishing: !exponent.is_zero(), value, exponent });
        }
    }
    Ok(out)
}

/// Sum of the residues that survive the cut limit.
pub fn jk_surviving_sum<S: Scalar>(res: &[JkResidue<S>]) -> Result<FactoredRational<S>, ResidueError> {
    let table = match res.first() {
        Some(r) => r.value.table().clone(),
        None => return Err(ResidueError::Unsupported("empty residue list".into())),
    };
    let terms = res.iter().filter(|r| !r.vanishing).map(|r| r.value.clone()).collect();
    Ok(FactoredRational::sum(&table, terms)?.canonical())
}
