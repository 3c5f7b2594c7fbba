use std::cmp::Ordering;
use std::fmt;

use super::{AlgebraError, SymbolTable};
use crate::scalar::Scalar;

/// Homogeneous linear form `sum_i c_i x_i` over a symbol table.
#[derive(Clone, PartialEq)]
pub struct LinearForm<S> {
    table: SymbolTable,
    coeffs: Vec<S>,
}

impl<S: Scalar> LinearForm<S> {
    pub fn new(table: &SymbolTable, coeffs: Vec<S>) -> Result<Self, AlgebraError> {
        if coeffs.len() != table.len() {
            return Err(AlgebraError::Structure(format!(
                "form has {} coefficients for {} symbols",
                coeffs.len(),
                table.len()
            )));
        }
        Ok(LinearForm { table: table.clone(), coeffs })
    }

    pub fn zero(table: &SymbolTable) -> Self {
        LinearForm { table: table.clone(), coeffs: vec![S::zero(); table.len()] }
    }

    pub fn var(table: &SymbolTable, i: usize) -> Self {
        let mut f = Self::zero(table);
        f.coeffs[i] = S::one();
        f
    }

    /// Sparse constructor; repeated indices accumulate.
    pub fn from_terms(table: &SymbolTable, terms: &[(usize, S)]) -> Self {
        let mut f = Self::zero(table);
        for (i, c) in terms {
            f.coeffs[*i].add_assign_ref(c);
        }
        f
    }

    /// Integer-coefficient constructor by symbol name.
    pub fn parse_terms(table: &SymbolTable, terms: &[(&str, i64)]) -> Result<Self, AlgebraError> {
        let mut f = Self::zero(table);
        for (n, c) in terms {
            let i = table.require(n)?;
            f.coeffs[i].add_assign_ref(&S::from_i64(*c));
        }
        Ok(f)
    }

    pub fn table(&self) -> &SymbolTable {
        &self.table
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &S {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn depends_on(&self, i: usize) -> bool {
        !self.coeffs[i].is_zero()
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, &S)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    fn zip(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self, AlgebraError> {
        self.table.check(&other.table)?;
        Ok(LinearForm {
            table: self.table.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.zip(other, |a, b| a.add_ref(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.zip(other, |a, b| a.sub_ref(b))
    }

    pub fn scale(&self, k: &S) -> Self {
        LinearForm {
            table: self.table.clone(),
            coeffs: self.coeffs.iter().map(|c| c.mul_ref(k)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        LinearForm { table: self.table.clone(), coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    /// Replace symbol `var` by the form `repl`.
    pub fn substitute(&self, var: usize, repl: &Self) -> Self {
        let c = &self.coeffs[var];
        if c.is_zero() {
            return self.clone();
        }
        let mut out = self.coeffs.clone();
        out[var] = S::zero();
        for (i, r) in repl.support() {
            out[i].add_assign_ref(&c.mul_ref(r));
        }
        LinearForm { table: self.table.clone(), coeffs: out }
    }

    pub fn evaluate(&self, point: &[S]) -> S {
        let mut acc = S::zero();
        for (i, c) in self.support() {
            acc.add_assign_ref(&c.mul_ref(&point[i]));
        }
        acc
    }

    /// If `other == lambda * self` return `lambda`.
    pub fn ratio_from(&self, other: &Self) -> Option<S> {
        let p = self.coeffs.iter().position(|c| !c.is_zero())?;
        if self.coeffs.iter().zip(&other.coeffs).any(|(a, b)| a.is_zero() != b.is_zero()) {
            return None;
        }
        if let (Some(ap), Some(bp)) = (self.coeffs[p].modular(), other.coeffs[p].modular()) {
            use crate::scalar::modular::mul;
            for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
                if let (Some(am), Some(bm)) = (a.modular(), b.modular()) {
                    if mul(am, bp) != mul(bm, ap) {
                        return None;
                    }
                }
            }
        }
        let lambda = other.coeffs[p].div_ref(&self.coeffs[p]);
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            if a.mul_ref(&lambda) != *b {
                return None;
            }
        }
        Some(lambda)
    }

    /// `(c, g)` with `self = c * g`, `g` primitive and its first nonzero
    /// coefficient positive.
    pub fn primitive(&self) -> (S, Self) {
        let mut c = S::content(&self.coeffs);
        if self.coeffs.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative_s()) {
            c = -c;
        }
        (c.clone(), LinearForm { table: self.table.clone(), coeffs: self.coeffs.iter().map(|x| x.div_ref(&c)).collect() })
    }

    /// Same as [`primitive`](Self::primitive) but only positive rescaling.
    pub fn positive_primitive(&self) -> (S, Self) {
        let c = S::content(&self.coeffs);
        (c.clone(), LinearForm { table: self.table.clone(), coeffs: self.coeffs.iter().map(|x| x.div_ref(&c)).collect() })
    }

    /// Total order on coefficient vectors used for canonical sorting.
    pub fn cmp_coeffs(&self, other: &Self) -> Ordering {
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            match b.partial_cmp(a).unwrap_or(Ordering::Equal) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    pub fn map_scalar<T: Scalar>(&self, f: &impl Fn(&S) -> T) -> LinearForm<T> {
        LinearForm { table: self.table.clone(), coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn with_table(&self, table: &SymbolTable) -> Result<Self, AlgebraError> {
        self.table.check(table)?;
        Ok(LinearForm { table: table.clone(), coeffs: self.coeffs.clone() })
    }
}

pub(crate) fn fmt_terms<S: Scalar>(
    f: &mut fmt::Formatter<'_>,
    terms: &mut dyn Iterator<Item = (S, String)>,
) -> fmt::Result {
    let mut first = true;
    for (c, m) in terms {
        let neg = c.is_negative_s();
        let a = c.abs_s();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { " - " } else { " + " })?;
        }
        first = false;
        if m.is_empty() {
            write!(f, "{a}")?;
        } else if a.is_one() {
            write!(f, "{m}")?;
        } else {
            write!(f, "{a}*{m}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl<S: Scalar> fmt::Display for LinearForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut it = self.support().map(|(i, c)| (c.clone(), self.table.name(i).to_string()));
        fmt_terms(f, &mut it)
    }
}

impl<S: Scalar> fmt::Debug for LinearForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Role;
    use crate::scalar::{int, rat};
    use num_rational::BigRational;

    fn table() -> SymbolTable {
        SymbolTable::from_pairs(&[("s", Role::Gauge), ("t", Role::Equivariant), ("u", Role::Equivariant)]).unwrap()
    }

    #[test]
    fn substitution_and_ratio() {
        let t = table();
        let f = LinearForm::<BigRational>::parse_terms(&t, &[("s", 2), ("t", 1)]).unwrap();
        let r = LinearForm::parse_terms(&t, &[("t", 1), ("u", -1)]).unwrap();
        let g = f.substitute(0, &r);
        assert_eq!(g.coeffs(), &[int(0), int(3), int(-2)]);
        assert_eq!(f.ratio_from(&f.scale(&rat(-3, 2))), Some(rat(-3, 2)));
        assert_eq!(f.ratio_from(&r), None);
        assert_eq!(format!("{g}"), "3*t - 2*u");
    }

    #[test]
    fn primitive_normalises_sign() {
        let t = table();
        let f = LinearForm::from_terms(&t, &[(0, rat(-2, 3)), (2, rat(4, 3))]);
        let (c, g) = f.primitive();
        assert_eq!(c, rat(-2, 3));
        assert_eq!(g.coeffs(), &[int(1), int(0), int(-2)]);
    }
}
