use std::fmt;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::{AlgebraError, LinearForm, Polynomial, SymbolTable};
use crate::scalar::Scalar;

/// Denominator entry `form^mult`.
///
/// `origin` is the weight the entry descends from before any substitution.
/// Its sign pattern on the remaining gauge symbols is the polarization used
/// for pole selection; it is never rescaled by a negative number.
#[derive(Clone, PartialEq)]
pub struct DenFactor<S> {
    pub form: LinearForm<S>,
    pub mult: u32,
    pub origin: LinearForm<S>,
}

impl<S: Scalar> fmt::Debug for DenFactor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})^{} [{}]", self.form, self.mult, self.origin)
    }
}

impl<S: Scalar> DenFactor<S> {
    pub fn new(form: LinearForm<S>, mult: u32) -> Self {
        DenFactor { origin: form.clone(), form, mult }
    }
}

/// `scalar * prod(num_factors) * poly / prod(den)`.
///
/// The numerator keeps linear factors apart from an expanded polynomial
/// part, so substitutions that annihilate a factor are detected at once.
#[derive(Clone, PartialEq)]
pub struct FactoredRational<S> {
    table: SymbolTable,
    scalar: S,
    num_factors: Vec<(LinearForm<S>, u32)>,
    poly: Polynomial<S>,
    den: Vec<DenFactor<S>>,
}

impl<S: Scalar> FactoredRational<S> {
    pub fn zero(table: &SymbolTable) -> Self {
        FactoredRational {
            table: table.clone(),
            scalar: S::zero(),
            num_factors: Vec::new(),
            poly: Polynomial::one(table),
            den: Vec::new(),
        }
    }

    pub fn constant(table: &SymbolTable, c: S) -> Self {
        let mut f = Self::zero(table);
        f.scalar = c;
        f
    }

    pub fn one(table: &SymbolTable) -> Self {
        Self::constant(table, S::one())
    }

    /// `scalar * poly / prod(den)`; origins default to the forms themselves.
    pub fn new(
        scalar: S,
        poly: Polynomial<S>,
        den: Vec<(LinearForm<S>, u32)>,
    ) -> Result<Self, AlgebraError> {
        let table = poly.table().clone();
        Self::from_parts(
            &table,
            scalar,
            Vec::new(),
            poly,
            den.into_iter().map(|(f, m)| DenFactor::new(f, m)).collect(),
        )
    }

    /// `scalar * prod(num) / prod(den)` with purely linear numerator.
    pub fn from_linear(
        table: &SymbolTable,
        scalar: S,
        num: Vec<(LinearForm<S>, u32)>,
        den: Vec<(LinearForm<S>, u32)>,
    ) -> Result<Self, AlgebraError> {
        Self::from_parts(
            table,
            scalar,
            num,
            Polynomial::one(table),
            den.into_iter().map(|(f, m)| DenFactor::new(f, m)).collect(),
        )
    }

    pub fn from_parts(
        table: &SymbolTable,
        scalar: S,
        num_factors: Vec<(LinearForm<S>, u32)>,
        poly: Polynomial<S>,
        den: Vec<DenFactor<S>>,
    ) -> Result<Self, AlgebraError> {
        poly.table().check(table)?;
        for (f, _) in &num_factors {
            f.table().check(table)?;
        }
        for d in &den {
            d.form.table().check(table)?;
            d.origin.table().check(table)?;
            if d.form.is_zero() {
                return Err(AlgebraError::Structure("zero form in denominator".into()));
            }
        }
        let mut r = FactoredRational { table: table.clone(), scalar, num_factors, poly, den };
        r.num_factors.retain(|(_, m)| *m > 0);
        r.den.retain(|d| d.mult > 0);
        if r.num_factors.iter().any(|(f, _)| f.is_zero()) {
            return Ok(Self::zero(table));
        }
        r.normalize_zero();
        r.merge_num();
        r.merge_den();
        Ok(r)
    }

    fn normalize_zero(&mut self) {
        if self.scalar.is_zero() || self.poly.is_zero() {
            *self = Self::zero(&self.table);
        } else if let Some(c) = self.poly.constant_value() {
            if !c.is_one() {
                self.scalar = self.scalar.mul_ref(&c);
                self.poly = Polynomial::one(&self.table);
            }
        }
    }

    pub fn table(&self) -> &SymbolTable {
        &self.table
    }

    pub fn scalar(&self) -> &S {
        &self.scalar
    }

    pub fn numerator_factors(&self) -> &[(LinearForm<S>, u32)] {
        &self.num_factors
    }

    pub fn numerator_poly(&self) -> &Polynomial<S> {
        &self.poly
    }

    pub fn denominator(&self) -> &[DenFactor<S>] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    /// Fully expanded numerator excluding the scalar.
    pub fn numerator(&self) -> Polynomial<S> {
        let mut p = self.poly.clone();
        for (f, m) in &self.num_factors {
            p = p.mul_form_pow(f, *m).expect("same table");
        }
        p
    }

    /// Expanded numerator including the scalar.
    pub fn scaled_numerator(&self) -> Polynomial<S> {
        self.numerator().scale(&self.scalar)
    }

    pub fn denominator_degree(&self) -> u32 {
        self.den.iter().map(|d| d.mult).sum()
    }

    /// Total degree if the numerator is homogeneous.
    pub fn degree(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let lin: u32 = self.num_factors.iter().map(|(_, m)| m).sum();
        let p = self.poly.homogeneous_degree()?;
        Some(lin as i64 + p as i64 - self.denominator_degree() as i64)
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.poly.depends_on(var)
            || self.num_factors.iter().any(|(f, _)| f.depends_on(var))
            || self.den.iter().any(|d| d.form.depends_on(var))
    }

    fn merge_num(&mut self) {
        let mut out: Vec<(LinearForm<S>, u32)> = Vec::with_capacity(self.num_factors.len());
        for (f, m) in std::mem::take(&mut self.num_factors) {
            match out.iter_mut().find_map(|(g, k)| g.ratio_from(&f).map(|l| (g, k, l))) {
                // f = l * g
                Some((_, k, l)) => {
                    *k += m;
                    self.scalar = self.scalar.mul_ref(&l.powi_s(m));
                }
                None => out.push((f, m)),
            }
        }
        self.num_factors = out;
    }

    /// Merge denominator entries whose forms are proportional and whose
    /// origins agree up to a positive factor.
    fn merge_den(&mut self) {
        let mut out: Vec<DenFactor<S>> = Vec::with_capacity(self.den.len());
        for d in std::mem::take(&mut self.den) {
            let hit = out.iter_mut().find_map(|e| {
                let l = e.form.ratio_from(&d.form)?;
                let o = e.origin.ratio_from(&d.origin)?;
                o.is_positive_s().then_some((e, l))
            });
            match hit {
                // 1/(l g)^m = l^-m / g^m
                Some((e, l)) => {
                    e.mult += d.mult;
                    self.scalar = self.scalar.div_ref(&l.powi_s(d.mult));
                }
                None => out.push(d),
            }
        }
        self.den = out;
    }

    /// Cancel numerator factors and polynomial divisors against the
    /// denominator.
    pub fn cancel(self) -> Self {
        self.cancel_where(|_| true)
    }

    /// Like [`cancel`](Self::cancel), but only against factors free of
    /// gauge symbols. Cancelling one of several proportional poles in a
    /// gauge variable would drop its polarization, and with it the pole
    /// from a later `Res+` selection.
    pub fn cancel_inert(self) -> Self {
        let gauge = self.table.gauge_order().to_vec();
        self.cancel_where(|d| !gauge.iter().any(|&v| d.form.depends_on(v)))
    }

    fn cancel_where(mut self, allowed: impl Fn(&DenFactor<S>) -> bool) -> Self {
        if self.is_zero() {
            return self;
        }
        for (nf, nm) in self.num_factors.iter_mut() {
            for d in self.den.iter_mut() {
                if *nm == 0 {
                    break;
                }
                if d.mult == 0 || !allowed(d) {
                    continue;
                }
                if let Some(l) = d.form.ratio_from(nf) {
                    let k = (*nm).min(d.mult);
                    *nm -= k;
                    d.mult -= k;
                    self.scalar = self.scalar.mul_ref(&l.powi_s(k));
                }
            }
        }
        self.num_factors.retain(|(_, m)| *m > 0);
        self.den.retain(|d| d.mult > 0);
        if self.poly.total_degree().unwrap_or(0) > 0 {
            for d in self.den.iter_mut() {
                while d.mult > 0 && allowed(d) {
                    match self.poly.exact_divide(&d.form) {
                        Ok(q) => {
                            self.poly = q;
                            d.mult -= 1;
                        }
                        Err(_) => break,
                    }
                    if self.poly.total_degree().unwrap_or(0) == 0 {
                        break;
                    }
                }
                if self.poly.total_degree().unwrap_or(0) == 0 {
                    break;
                }
            }
            self.den.retain(|d| d.mult > 0);
            self.normalize_zero();
        }
        self
    }

    pub fn neg(&self) -> Self {
        let mut r = self.clone();
        r.scalar = -r.scalar;
        r
    }

    pub fn scale(&self, k: &S) -> Self {
        let mut r = self.clone();
        r.scalar = r.scalar.mul_ref(k);
        if r.scalar.is_zero() {
            return Self::zero(&self.table);
        }
        r
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.table.check(&other.table)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.table));
        }
        let mut num = self.num_factors.clone();
        num.extend(other.num_factors.iter().cloned());
        let mut den = self.den.clone();
        den.extend(other.den.iter().cloned());
        let poly = self.poly.mul(&other.poly)?;
        Ok(Self::from_parts(&self.table, self.scalar.mul_ref(&other.scalar), num, poly, den)?.cancel())
    }

    /// Multiplicative inverse; the numerator must be a product of linear
    /// factors.
    pub fn recip(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::Structure("reciprocal of zero".into()));
        }
        if self.poly.constant_value().is_none() {
            return Err(AlgebraError::Structure("reciprocal needs a factored numerator".into()));
        }
        let den = self.num_factors.iter().map(|(f, m)| DenFactor::new(f.clone(), *m)).collect();
        let num = self.den.iter().map(|d| (d.form.clone(), d.mult)).collect();
        Self::from_parts(&self.table, S::one().div_ref(&self.scalar), num, Polynomial::one(&self.table), den)
    }

    pub fn div(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.mul(&other.recip()?)
    }

    pub fn mul_form(&self, f: &LinearForm<S>, k: u32) -> Result<Self, AlgebraError> {
        let mut num = self.num_factors.clone();
        num.push((f.clone(), k));
        Ok(Self::from_parts(&self.table, self.scalar.clone(), num, self.poly.clone(), self.den.clone())?.cancel())
    }

    pub fn div_form(&self, f: &LinearForm<S>, k: u32) -> Result<Self, AlgebraError> {
        let mut den = self.den.clone();
        den.push(DenFactor::new(f.clone(), k));
        Ok(Self::from_parts(&self.table, self.scalar.clone(), self.num_factors.clone(), self.poly.clone(), den)?.cancel())
    }

    pub fn pow(&self, k: u32) -> Result<Self, AlgebraError> {
        let mut acc = Self::one(&self.table);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.table.check(&other.table)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        // Least common denominator by proportionality classes. A factor
        // d = l * rep contributes l^-m / rep^m.
        let mut reps: Vec<LinearForm<S>> = Vec::new();
        let class_of = |reps: &mut Vec<LinearForm<S>>, d: &LinearForm<S>| -> (usize, S) {
            match reps.iter().position(|r| r.ratio_from(d).is_some()) {
                Some(c) => (c, reps[c].ratio_from(d).unwrap()),
                None => {
                    reps.push(d.clone());
                    (reps.len() - 1, S::one())
                }
            }
        };
        let mut a_tot: Vec<u32> = Vec::new();
        let mut b_tot: Vec<u32> = Vec::new();
        let mut a_scale = S::one();
        let mut b_scale_den = S::one();
        let mut b_entries: Vec<(usize, S)> = Vec::new();
        for d in &self.den {
            let (c, l) = class_of(&mut reps, &d.form);
            a_tot.resize(reps.len(), 0);
            a_tot[c] += d.mult;
            a_scale = a_scale.div_ref(&l.powi_s(d.mult));
        }
        for d in &other.den {
            let (c, l) = class_of(&mut reps, &d.form);
            b_tot.resize(reps.len(), 0);
            b_tot[c] += d.mult;
            b_scale_den = b_scale_den.div_ref(&l.powi_s(d.mult));
            b_entries.push((c, l));
        }
        a_tot.resize(reps.len(), 0);
        b_tot.resize(reps.len(), 0);
        let top: Vec<u32> = a_tot.iter().zip(&b_tot).map(|(a, b)| *a.max(b)).collect();
        // Output entries: ours, then enough of the other's to reach `top`.
        let mut lcm: Vec<DenFactor<S>> = self.den.clone();
        let mut kappa = S::one();
        for d in &self.den {
            let (_, l) = class_of(&mut reps, &d.form);
            kappa = kappa.mul_ref(&l.powi_s(d.mult));
        }
        let mut extra: Vec<u32> = top.iter().zip(&a_tot).map(|(t, a)| t - a).collect();
        for (d, (c, l)) in other.den.iter().zip(&b_entries) {
            let m = d.mult.min(extra[*c]);
            if m > 0 {
                extra[*c] -= m;
                kappa = kappa.mul_ref(&l.powi_s(m));
                lcm.push(DenFactor { form: d.form.clone(), mult: m, origin: d.origin.clone() });
            }
        }
        // Common numerator factors.
        let mut a_num = self.num_factors.clone();
        let mut b_num = other.num_factors.clone();
        let mut common: Vec<(LinearForm<S>, u32)> = Vec::new();
        let mut b_scale = other.scalar.clone();
        for (fa, ma) in a_num.iter_mut() {
            for (fb, mb) in b_num.iter_mut() {
                if *ma == 0 {
                    break;
                }
                if *mb == 0 {
                    continue;
                }
                if let Some(l) = fa.ratio_from(fb) {
                    let k = (*ma).min(*mb);
                    *ma -= k;
                    *mb -= k;
                    b_scale = b_scale.mul_ref(&l.powi_s(k));
                    common.push((fa.clone(), k));
                }
            }
        }
        let mut pa = self.poly.scale(&self.scalar.mul_ref(&a_scale).mul_ref(&kappa));
        for (f, m) in a_num.iter().filter(|(_, m)| *m > 0) {
            pa = pa.mul_form_pow(f, *m)?;
        }
        let mut pb = other.poly.scale(&b_scale.mul_ref(&b_scale_den).mul_ref(&kappa));
        for (f, m) in b_num.iter().filter(|(_, m)| *m > 0) {
            pb = pb.mul_form_pow(f, *m)?;
        }
        for (c, r) in reps.iter().enumerate() {
            pa = pa.mul_form_pow(r, top[c] - a_tot[c])?;
            pb = pb.mul_form_pow(r, top[c] - b_tot[c])?;
        }
        let poly = pa.add(&pb)?;
        Ok(Self::from_parts(&self.table, S::one(), common, poly, lcm)?.cancel())
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    /// Sum of many terms by a balanced tree.
    pub fn sum(table: &SymbolTable, terms: Vec<Self>) -> Result<Self, AlgebraError> {
        let mut layer: Vec<Self> = terms.into_iter().filter(|t| !t.is_zero()).collect();
        if layer.is_empty() {
            return Ok(Self::zero(table));
        }
        while layer.len() > 1 {
            let next: Result<Vec<Self>, AlgebraError> = layer
                .par_chunks(2)
                .map(|c| if c.len() == 2 { c[0].add(&c[1]) } else { Ok(c[0].clone()) })
                .collect();
            layer = next?;
        }
        Ok(layer.pop().unwrap())
    }

    /// Replace symbol `var` by `repl`. A denominator factor that vanishes
    /// identically is a structural error; a vanishing numerator factor gives
    /// zero.
    pub fn substitute(&self, var: usize, repl: &LinearForm<S>) -> Result<Self, AlgebraError> {
        Ok(self.substitute_uncancelled(var, repl)?.cancel())
    }

    /// [`substitute`](Self::substitute) followed by
    /// [`cancel_inert`](Self::cancel_inert) instead of a full cancellation.
    pub fn substitute_inert(&self, var: usize, repl: &LinearForm<S>) -> Result<Self, AlgebraError> {
        Ok(self.substitute_uncancelled(var, repl)?.cancel_inert())
    }

    fn substitute_uncancelled(&self, var: usize, repl: &LinearForm<S>) -> Result<Self, AlgebraError> {
        self.table.check(repl.table())?;
        if repl.depends_on(var) {
            return Err(AlgebraError::SelfReferential(self.table.name(var).to_string()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let mut num = Vec::with_capacity(self.num_factors.len());
        for (f, m) in &self.num_factors {
            let g = f.substitute(var, repl);
            if g.is_zero() {
                return Ok(Self::zero(&self.table));
            }
            num.push((g, *m));
        }
        let mut den = Vec::with_capacity(self.den.len());
        for d in &self.den {
            let g = d.form.substitute(var, repl);
            if g.is_zero() {
                return Err(AlgebraError::VanishingFactor(d.form.to_string()));
            }
            den.push(DenFactor { form: g, mult: d.mult, origin: d.origin.clone() });
        }
        let poly = self.poly.substitute(var, repl)?;
        Self::from_parts(&self.table, self.scalar.clone(), num, poly, den)
    }

    /// Partial derivative in `var`.
    pub fn differentiate(&self, var: usize) -> Result<Self, AlgebraError> {
        if self.is_zero() || !self.depends_on(var) {
            return Ok(Self::zero(&self.table));
        }
        // Move var-dependent numerator factors into the polynomial part.
        let mut keep = Vec::new();
        let mut p = self.poly.clone();
        for (f, m) in &self.num_factors {
            if f.depends_on(var) {
                p = p.mul_form_pow(f, *m)?;
            } else {
                keep.push((f.clone(), *m));
            }
        }
        // d/dv [p / prod L^k] = (p' Pi - p sum k c_L Pi/L) / (Pi prod L^k),
        // Pi = product of var-dependent denominator forms.
        let active: Vec<&DenFactor<S>> = self.den.iter().filter(|d| d.form.depends_on(var)).collect();
        let mut pi = Polynomial::one(&self.table);
        for d in &active {
            pi = pi.mul_form(&d.form)?;
        }
        let mut top = p.differentiate(var).mul(&pi)?;
        for (i, d) in active.iter().enumerate() {
            let mut t = p.scale(&S::from_i64(d.mult as i64).mul_ref(d.form.coeff(var)));
            for (j, e) in active.iter().enumerate() {
                if i != j {
                    t = t.mul_form(&e.form)?;
                }
            }
            top = top.sub(&t)?;
        }
        let mut den = self.den.clone();
        for d in den.iter_mut() {
            if d.form.depends_on(var) {
                d.mult += 1;
            }
        }
        Ok(Self::from_parts(&self.table, self.scalar.clone(), keep, top, den)?.cancel())
    }

    pub fn evaluate(&self, point: &[S]) -> Result<S, AlgebraError> {
        if point.len() != self.table.len() {
            return Err(AlgebraError::Structure("assignment length does not match symbol table".into()));
        }
        let mut den = S::one();
        for d in &self.den {
            let v = d.form.evaluate(point);
            if v.is_zero() {
                return Err(AlgebraError::PoleAtAssignment(d.form.to_string()));
            }
            den = den.mul_ref(&v.powi_s(d.mult));
        }
        if self.is_zero() {
            return Ok(S::zero());
        }
        let mut num = self.scalar.mul_ref(&self.poly.evaluate(point));
        for (f, m) in &self.num_factors {
            num = num.mul_ref(&f.evaluate(point).powi_s(*m));
        }
        Ok(num.div_ref(&den))
    }

    /// Unique representative: expanded primitive numerator with positive
    /// leading coefficient, primitive sign-normalised denominator forms
    /// sorted, common divisors cancelled.
    pub fn canonical(&self) -> Self {
        if self.is_zero() {
            return Self::zero(&self.table);
        }
        let gauge_free = self.table.gauge_order().iter().all(|&g| !self.depends_on(g));
        let src = if gauge_free { self.forget_origins() } else { self.clone() };
        let mut scalar = src.scalar.clone();
        let mut den: Vec<DenFactor<S>> = Vec::with_capacity(src.den.len());
        for d in &src.den {
            let (c, g) = d.form.primitive();
            scalar = scalar.div_ref(&c.powi_s(d.mult));
            let (_, o) = d.origin.positive_primitive();
            den.push(DenFactor { form: g, mult: d.mult, origin: o });
        }
        let mut r = FactoredRational {
            table: src.table.clone(),
            scalar,
            num_factors: src.num_factors.clone(),
            poly: src.poly.clone(),
            den,
        };
        r.merge_den();
        let mut r = r.cancel();
        let mut poly = r.numerator();
        let mut c = S::content(&poly.coefficients());
        if poly.leading_coefficient().is_some_and(|x| x.is_negative_s()) {
            c = -c;
        }
        poly = poly.scale(&S::one().div_ref(&c));
        r.scalar = r.scalar.mul_ref(&c);
        r.num_factors.clear();
        r.poly = poly;
        let mut r = r.cancel();
        r.den.sort_by(|a, b| a.form.cmp_coeffs(&b.form).then_with(|| a.origin.cmp_coeffs(&b.origin)));
        r
    }

    /// Drop polarization data, as appropriate once no gauge symbol remains.
    pub fn forget_origins(&self) -> Self {
        let mut r = self.clone();
        for d in r.den.iter_mut() {
            d.origin = d.form.clone();
        }
        let zero = Self::zero(&r.table);
        let mut r = Self::from_parts(&r.table, r.scalar, r.num_factors, r.poly, r.den).unwrap_or(zero);
        r.merge_den_any_sign();
        r
    }

    fn merge_den_any_sign(&mut self) {
        let mut out: Vec<DenFactor<S>> = Vec::with_capacity(self.den.len());
        for d in std::mem::take(&mut self.den) {
            match out.iter_mut().find_map(|e| e.form.ratio_from(&d.form).map(|l| (e, l))) {
                Some((e, l)) => {
                    e.mult += d.mult;
                    self.scalar = self.scalar.div_ref(&l.powi_s(d.mult));
                }
                None => out.push(d),
            }
        }
        self.den = out;
    }

    /// Exact equality of the represented rational functions, by cross
    /// multiplication.
    pub fn exact_eq(&self, other: &Self) -> Result<bool, AlgebraError> {
        Ok(self.sub(other)?.is_zero())
    }

    /// SHA-256 fingerprint of the current representation.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{}|", self.scalar).as_bytes());
        for (f, m) in &self.num_factors {
            h.update(format!("n{m}:{:?}|", f.coeffs()).as_bytes());
        }
        for (mono, c) in self.poly.terms() {
            h.update(format!("p{:?}:{c}|", mono.exponents()).as_bytes());
        }
        for d in &self.den {
            h.update(format!("d{}:{:?}:{:?}|", d.mult, d.form.coeffs(), d.origin.coeffs()).as_bytes());
        }
        hex::encode(h.finalize())
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Result<FactoredRational<T>, AlgebraError> {
        FactoredRational::from_parts(
            &self.table,
            f(&self.scalar),
            self.num_factors.iter().map(|(g, m)| (g.map_scalar(&f), *m)).collect(),
            self.poly.map_scalar(&f),
            self.den
                .iter()
                .map(|d| DenFactor { form: d.form.map_scalar(&f), mult: d.mult, origin: d.origin.map_scalar(&f) })
                .collect(),
        )
    }

    /// Reinterpret over a compatible table (for example a different
    /// residue order).
    pub fn with_table(&self, table: &SymbolTable) -> Result<Self, AlgebraError> {
        self.table.check(table)?;
        Ok(FactoredRational {
            table: table.clone(),
            scalar: self.scalar.clone(),
            num_factors: self.num_factors.iter().map(|(f, m)| (f.with_table(table).unwrap(), *m)).collect(),
            poly: self.poly.with_table(table)?,
            den: self
                .den
                .iter()
                .map(|d| DenFactor {
                    form: d.form.with_table(table).unwrap(),
                    mult: d.mult,
                    origin: d.origin.with_table(table).unwrap(),
                })
                .collect(),
        })
    }

    /// Apply a linear change of symbols, `x_i -> images[i]`.
    pub fn linear_change(&self, images: &[LinearForm<S>]) -> Result<Self, AlgebraError> {
        let table = self.table.clone();
        self.map_into(&table, images)
    }

    /// Move to another symbol table, `x_i -> images[i]` with the images
    /// written over `target`.
    pub fn map_into(&self, target: &SymbolTable, images: &[LinearForm<S>]) -> Result<Self, AlgebraError> {
        if images.len() != self.table.len() {
            return Err(AlgebraError::Structure("one image per symbol required".into()));
        }
        for im in images {
            im.table().check(target)?;
        }
        if self.is_zero() {
            return Ok(Self::zero(target));
        }
        let map = |f: &LinearForm<S>| {
            let mut g = LinearForm::zero(target);
            for (i, c) in f.support() {
                g = g.add(&images[i].scale(c)).expect("same table");
            }
            g
        };
        let mut poly = Polynomial::zero(target);
        for (m, c) in self.poly.terms() {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                t = t.mul_form_pow(&images[i], e as u32)?;
            }
            poly = poly.add(&t)?;
        }
        let mut num = Vec::new();
        for (f, m) in &self.num_factors {
            let g = map(f);
            if g.is_zero() {
                return Ok(Self::zero(target));
            }
            num.push((g, *m));
        }
        let mut den = Vec::new();
        for d in &self.den {
            let g = map(&d.form);
            if g.is_zero() {
                return Err(AlgebraError::VanishingFactor(d.form.to_string()));
            }
            den.push(DenFactor { form: g, mult: d.mult, origin: map(&d.origin) });
        }
        Ok(Self::from_parts(target, self.scalar.clone(), num, poly, den)?.cancel())
    }
}

fn paren<S: Scalar>(f: &LinearForm<S>) -> String {
    let mut it = f.support();
    match (it.next(), it.next()) {
        (Some((_, c)), None) if c.is_one() => f.to_string(),
        _ => format!("({f})"),
    }
}

impl<S: Scalar> fmt::Display for FactoredRational<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        if !self.scalar.is_one() || (self.num_factors.is_empty() && self.poly.constant_value().is_some()) {
            parts.push(format!("{}", self.scalar));
        }
        for (g, m) in &self.num_factors {
            parts.push(if *m == 1 { paren(g) } else { format!("{}^{m}", paren(g)) });
        }
        if self.poly.constant_value().is_none() {
            parts.push(format!("({})", self.poly));
        }
        write!(f, "{}", parts.join("*"))?;
        if !self.den.is_empty() {
            let ds: Vec<String> = self
                .den
                .iter()
                .map(|d| if d.mult == 1 { paren(&d.form) } else { format!("{}^{}", paren(&d.form), d.mult) })
                .collect();
            match ds.as_slice() {
                [one] => write!(f, " / {one}")?,
                _ => write!(f, " / ({})", ds.join("*"))?,
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for FactoredRational<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Role;
    use crate::scalar::{int, rat};
    use num_rational::BigRational;

    type F = FactoredRational<BigRational>;

    fn table() -> SymbolTable {
        SymbolTable::from_pairs(&[("x", Role::Gauge), ("a", Role::Equivariant), ("b", Role::Equivariant)]).unwrap()
    }

    fn form(t: &SymbolTable, c: &[i64]) -> LinearForm<BigRational> {
        LinearForm::new(t, c.iter().map(|&v| int(v)).collect()).unwrap()
    }

    #[test]
    fn partial_fractions_add_up() {
        let t = table();
        let xa = form(&t, &[1, -1, 0]);
        let xb = form(&t, &[1, 0, -1]);
        let ab = form(&t, &[0, 1, -1]);
        // 1/((x-a)(a-b)) + 1/((x-b)(b-a)) = 1/((x-a)(x-b))
        let l = F::from_linear(&t, int(1), vec![], vec![(xa.clone(), 1), (ab.clone(), 1)]).unwrap();
        let r = F::from_linear(&t, int(-1), vec![], vec![(xb.clone(), 1), (ab, 1)]).unwrap();
        let s = l.add(&r).unwrap().canonical();
        let want = F::from_linear(&t, int(1), vec![], vec![(xa, 1), (xb, 1)]).unwrap().canonical();
        assert_eq!(s, want);
        assert_eq!(s.degree(), Some(-2));
    }

    #[test]
    fn substitution_cancels_and_detects_zeros() {
        let t = table();
        let f = F::from_linear(&t, rat(1, 2), vec![(form(&t, &[1, 1, 0]), 1)], vec![(form(&t, &[2, 0, 2]), 1)])
            .unwrap();
        // x -> b: (b + a)/(4b)/2
        let g = f.substitute(0, &form(&t, &[0, 0, 1])).unwrap();
        assert_eq!(g.evaluate(&[int(0), int(1), int(1)]).unwrap(), rat(1, 4));
        assert!(f.substitute(0, &form(&t, &[0, -1, 0])).unwrap().is_zero());
        assert!(matches!(
            f.substitute(0, &form(&t, &[0, 0, -1])),
            Err(AlgebraError::VanishingFactor(_))
        ));
    }

    #[test]
    fn derivative_of_reciprocal() {
        let t = table();
        let f = F::from_linear(&t, int(1), vec![], vec![(form(&t, &[1, -1, 0]), 2)]).unwrap();
        let d = f.differentiate(0).unwrap();
        let want = F::from_linear(&t, int(-2), vec![], vec![(form(&t, &[1, -1, 0]), 3)]).unwrap();
        assert!(d.exact_eq(&want).unwrap());
    }

    #[test]
    fn canonical_numerator_is_primitive() {
        let t = table();
        let p = Polynomial::from_form(&form(&t, &[0, -2, 4]));
        let f = F::new(rat(1, 3), p, vec![(form(&t, &[0, -3, 0]), 1)]).unwrap().canonical();
        assert_eq!(f.numerator_poly().to_string(), "a - 2*b");
        assert_eq!(f.scalar(), &rat(2, 9));
        assert_eq!(f.denominator()[0].form.to_string(), "a");
    }
}
