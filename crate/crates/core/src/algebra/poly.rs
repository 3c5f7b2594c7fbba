use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;

use super::{AlgebraError, LinearForm, SymbolTable};
use crate::scalar::Scalar;

/// Exponent vector ordered by graded lexicographic order: total degree
/// first, then lexicographically with the first symbol largest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    deg: u32,
    exps: SmallVec<[u16; 12]>,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial { deg: 0, exps: SmallVec::from_elem(0, n) }
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial { deg: exps.iter().map(|&e| e as u32).sum(), exps: SmallVec::from_slice(exps) }
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    fn bump(&self, i: usize) -> Self {
        let mut m = self.clone();
        m.exps[i] += 1;
        m.deg += 1;
        m
    }

    fn with_exp(&self, i: usize, e: u16) -> Self {
        let mut m = self.clone();
        m.deg = m.deg - m.exps[i] as u32 + e as u32;
        m.exps[i] = e;
        m
    }

    fn mul(&self, other: &Self) -> Self {
        Monomial {
            deg: self.deg + other.deg,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Sparse multivariate polynomial. Terms are kept sorted with the grlex
/// leading term first and carry no zero coefficients.
#[derive(Clone, PartialEq)]
pub struct Polynomial<S> {
    table: SymbolTable,
    terms: Vec<(Monomial, S)>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero(table: &SymbolTable) -> Self {
        Polynomial { table: table.clone(), terms: Vec::new() }
    }

    pub fn constant(table: &SymbolTable, c: S) -> Self {
        let mut p = Self::zero(table);
        if !c.is_zero() {
            p.terms.push((Monomial::one(table.len()), c));
        }
        p
    }

    pub fn one(table: &SymbolTable) -> Self {
        Self::constant(table, S::one())
    }

    pub fn from_form(f: &LinearForm<S>) -> Self {
        let n = f.table().len();
        let mut terms: Vec<_> = f
            .support()
            .map(|(i, c)| (Monomial::one(n).bump(i), c.clone()))
            .collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Polynomial { table: f.table().clone(), terms }
    }

    /// Build from arbitrary terms; duplicates are combined.
    pub fn from_terms(table: &SymbolTable, terms: Vec<(Monomial, S)>) -> Result<Self, AlgebraError> {
        if terms.iter().any(|(m, _)| m.exps.len() != table.len()) {
            return Err(AlgebraError::Structure("monomial length does not match symbol table".into()));
        }
        let mut acc: HashMap<Monomial, S> = HashMap::new();
        for (m, c) in terms {
            acc.entry(m).and_modify(|x| x.add_assign_ref(&c)).or_insert(c);
        }
        Ok(Self::from_map(table, acc))
    }

    fn from_map(table: &SymbolTable, acc: HashMap<Monomial, S>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { table: table.clone(), terms }
    }

    pub fn table(&self) -> &SymbolTable {
        &self.table
    }

    pub fn terms(&self) -> &[(Monomial, S)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_value(&self) -> Option<S> {
        match self.terms.as_slice() {
            [] => Some(S::zero()),
            [(m, c)] if m.deg == 0 => Some(c.clone()),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.deg)
    }

    /// Homogeneous degree, if every term has the same total degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.terms.first()?.0.deg;
        self.terms.iter().all(|(m, _)| m.deg == d).then_some(d)
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.exps[var]).max().unwrap_or(0)
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exps[var] > 0)
    }

    pub fn leading_coefficient(&self) -> Option<&S> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn coefficients(&self) -> Vec<S> {
        self.terms.iter().map(|(_, c)| c.clone()).collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.table.check(&other.table)?;
        // Merge of two sorted lists.
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = a[i].1.add_ref(&b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(Polynomial { table: self.table.clone(), terms: out })
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return Self::zero(&self.table);
        }
        Polynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul_ref(k))).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.table.check(&other.table)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.table));
        }
        if let Some(c) = other.constant_value() {
            return Ok(self.scale(&c));
        }
        if let Some(c) = self.constant_value() {
            return Ok(other.scale(&c));
        }
        let mut acc: HashMap<Monomial, S> = HashMap::with_capacity(self.len() * other.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca.mul_ref(cb);
                acc.entry(ma.mul(mb)).and_modify(|x| x.add_assign_ref(&c)).or_insert(c);
            }
        }
        Ok(Self::from_map(&self.table, acc))
    }

    /// Product with a linear form.
    pub fn mul_form(&self, f: &LinearForm<S>) -> Result<Self, AlgebraError> {
        self.table.check(f.table())?;
        let support: Vec<(usize, &S)> = f.support().collect();
        if self.is_zero() || support.is_empty() {
            return Ok(Self::zero(&self.table));
        }
        let mut acc: HashMap<Monomial, S> = HashMap::with_capacity(self.len() * support.len());
        for (m, c) in &self.terms {
            for (i, a) in &support {
                let v = c.mul_ref(a);
                acc.entry(m.bump(*i)).and_modify(|x| x.add_assign_ref(&v)).or_insert(v);
            }
        }
        Ok(Self::from_map(&self.table, acc))
    }

    pub fn mul_form_pow(&self, f: &LinearForm<S>, k: u32) -> Result<Self, AlgebraError> {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.mul_form(f)?;
        }
        Ok(p)
    }

    /// Multiply by `x_var^k`.
    pub fn mul_var_pow(&self, var: usize, k: u16) -> Self {
        Polynomial {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.with_exp(var, m.exps[var] + k), c.clone()))
                .collect::<Vec<_>>(),
        }
        .resorted()
    }

    fn resorted(mut self) -> Self {
        self.terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        self
    }

    /// `p = sum_k p_k x_var^k`; returns `[p_0, p_1, ...]`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let d = self.degree_in(var) as usize;
        let mut parts: Vec<Vec<(Monomial, S)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            parts[m.exps[var] as usize].push((m.with_exp(var, 0), c.clone()));
        }
        parts
            .into_iter()
            .map(|t| Polynomial { table: self.table.clone(), terms: t }.resorted())
            .collect()
    }

    /// Replace `x_var` by a linear form not involving `x_var` (Horner scheme).
    pub fn substitute(&self, var: usize, repl: &LinearForm<S>) -> Result<Self, AlgebraError> {
        self.table.check(repl.table())?;
        if repl.depends_on(var) {
            return Err(AlgebraError::SelfReferential(self.table.name(var).to_string()));
        }
        if !self.depends_on(var) {
            return Ok(self.clone());
        }
        let parts = self.coefficients_in(var);
        let mut it = parts.into_iter().rev();
        let mut r = it.next().unwrap_or_else(|| Self::zero(&self.table));
        for p in it {
            r = r.mul_form(repl)?.add(&p)?;
        }
        Ok(r)
    }

    pub fn differentiate(&self, var: usize) -> Self {
        let mut terms = Vec::with_capacity(self.len());
        for (m, c) in &self.terms {
            let e = m.exps[var];
            if e > 0 {
                terms.push((m.with_exp(var, e - 1), c.mul_ref(&S::from_i64(e as i64))));
            }
        }
        // Differentiation keeps distinct monomials distinct.
        Polynomial { table: self.table.clone(), terms }.resorted()
    }

    /// Exact quotient by a nonzero linear form.
    pub fn exact_divide(&self, f: &LinearForm<S>) -> Result<Self, AlgebraError> {
        self.table.check(f.table())?;
        let Some((x, a)) = f.support().next().map(|(i, a)| (i, a.clone())) else {
            return Err(AlgebraError::Structure("division by the zero form".into()));
        };
        if self.is_zero() {
            return Ok(self.clone());
        }
        // Cheap rejection: a multiple of f vanishes on the hyperplane f = 0.
        if !self.vanishes_on_sample(f, x, &a) {
            return Err(AlgebraError::NotDivisible(f.to_string()));
        }
        let mut rest = f.clone();
        let rest_coeffs: Vec<S> = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| if i == x { S::zero() } else { c.clone() })
            .collect();
        rest = LinearForm::new(rest.table(), rest_coeffs)?;
        let parts = self.coefficients_in(x);
        let d = parts.len() - 1;
        if d == 0 {
            return Err(AlgebraError::NotDivisible(f.to_string()));
        }
        let mut q: Vec<Self> = vec![Self::zero(&self.table); d];
        q[d - 1] = parts[d].scale(&S::one().div_ref(&a));
        for k in (1..d).rev() {
            let t = parts[k].sub(&q[k].mul_form(&rest)?)?;
            q[k - 1] = t.scale(&S::one().div_ref(&a));
        }
        if q[0].mul_form(&rest)? != parts[0] {
            return Err(AlgebraError::NotDivisible(f.to_string()));
        }
        let mut out = Self::zero(&self.table);
        for (k, qk) in q.into_iter().enumerate() {
            out = out.add(&qk.mul_var_pow(x, k as u16))?;
        }
        Ok(out)
    }

    /// Evaluate modulo a large prime at a pseudo-random point of the
    /// hyperplane `f = 0`. `false` proves `f` does not divide `self`.
    fn vanishes_on_sample(&self, f: &LinearForm<S>, x: usize, a: &S) -> bool {
        use crate::scalar::modular;
        let n = self.table.len();
        let mut point: Vec<u64> = (0..n).map(|i| 0x9e37_79b9_7f4a_7c15u64.wrapping_mul(i as u64 + 1) % crate::scalar::MODULUS).collect();
        let Some(am) = a.modular() else { return true };
        let mut rest = 0;
        for (i, c) in f.support() {
            if i == x {
                continue;
            }
            let Some(cm) = c.modular() else { return true };
            rest = modular::add(rest, modular::mul(cm, point[i]));
        }
        let Some(px) = modular::div(modular::neg(rest), am) else { return true };
        point[x] = px;
        let mut acc = 0;
        for (m, c) in &self.terms {
            let Some(mut t) = c.modular() else { return true };
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    t = modular::mul(t, modular::pow(point[i], e as u64));
                }
            }
            acc = modular::add(acc, t);
        }
        acc == 0
    }

    pub fn evaluate(&self, point: &[S]) -> S {
        let n = self.table.len();
        let mut powers: Vec<Vec<S>> = (0..n).map(|i| vec![S::one(), point[i].clone()]).collect();
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul_ref(&point[i]);
                    powers[i].push(next);
                }
                t = t.mul_ref(&powers[i][e as usize]);
            }
            acc.add_assign_ref(&t);
        }
        acc
    }

    pub fn map_scalar<T: Scalar>(&self, f: &impl Fn(&S) -> T) -> Polynomial<T> {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Polynomial { table: self.table.clone(), terms }
    }

    pub fn with_table(&self, table: &SymbolTable) -> Result<Self, AlgebraError> {
        self.table.check(table)?;
        Ok(Polynomial { table: table.clone(), terms: self.terms.clone() })
    }

    pub(crate) fn monomial_name(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.table.name(i).to_string()),
                _ => parts.push(format!("{}^{}", self.table.name(i), e)),
            }
        }
        parts.join("*")
    }
}

impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut it = self.terms.iter().map(|(m, c)| (c.clone(), self.monomial_name(m)));
        super::form::fmt_terms(f, &mut it)
    }
}

impl<S: Scalar> fmt::Debug for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Role;
    use crate::scalar::int;
    use num_rational::BigRational;

    fn table() -> SymbolTable {
        SymbolTable::from_pairs(&[("x", Role::Gauge), ("y", Role::Equivariant), ("z", Role::Equivariant)]).unwrap()
    }

    fn form(t: &SymbolTable, c: &[i64]) -> LinearForm<BigRational> {
        LinearForm::new(t, c.iter().map(|&v| int(v)).collect()).unwrap()
    }

    #[test]
    fn grlex_order_leads_with_highest_degree() {
        let t = table();
        let p = Polynomial::from_form(&form(&t, &[1, 0, 1])).mul_form(&form(&t, &[0, 1, 0])).unwrap();
        let p = p.add(&Polynomial::from_form(&form(&t, &[0, 0, 3]))).unwrap();
        assert_eq!(p.to_string(), "x*y + y*z + 3*z");
    }

    #[test]
    fn divide_and_substitute() {
        let t = table();
        let l1 = form(&t, &[1, -1, 0]);
        let l2 = form(&t, &[2, 0, 1]);
        let p = Polynomial::one(&t).mul_form(&l1).unwrap().mul_form(&l2).unwrap();
        assert_eq!(p.exact_divide(&l1).unwrap(), Polynomial::from_form(&l2));
        assert!(p.exact_divide(&form(&t, &[1, 1, 0])).is_err());
        let s = p.substitute(0, &form(&t, &[0, 1, 0])).unwrap();
        assert!(s.is_zero());
        let d = p.differentiate(0);
        assert_eq!(d.to_string(), "4*x - 2*y + z");
    }
}
