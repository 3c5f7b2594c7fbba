//! Weight systems of ADHM data for the classical gauge groups.
//!
//! Symbols are `sigma1..` (gauge), `eps1, eps2` (rotations of the plane)
//! and `tau1..` (framing). Printed quadratic factors `A^2 - B^2` enter as
//! the two linear weights `A - B`, `A + B`.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{LinearForm, Role, SymbolInfo, SymbolTable};
use crate::quotient::{QuotientError, RootConvention, WeightSystem};
use crate::scalar::{int, rat};
use crate::{Form, Rational, RationalFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    SU,
    Sp,
    SO,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::SU => "su",
            Group::Sp => "sp",
            Group::SO => "so",
        })
    }
}

impl FromStr for Group {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "su" => Ok(Group::SU),
            "sp" => Ok(Group::Sp),
            "so" => Ok(Group::SO),
            _ => Err(format!("unknown group `{s}` (expected su, sp or so)")),
        }
    }
}

/// Normalization of the plane rotations for the Sp/SO double-weight lift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Rescale {
    /// Weights exactly as lifted, `eps` with weight two.
    #[default]
    Paper,
    /// `eps_k -> eps_k / 2` applied to the result.
    Halved,
}

impl FromStr for Rescale {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" => Ok(Rescale::Paper),
            "halved" => Ok(Rescale::Halved),
            _ => Err(format!("unknown rescale convention `{s}` (expected paper or halved)")),
        }
    }
}

impl fmt::Display for Rescale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rescale::Paper => "paper",
            Rescale::Halved => "halved",
        })
    }
}

/// Exponent of `(eps1 + eps2)` in the SO complex moment map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SoMomentExponent {
    /// One factor per Cartan direction of the gauge group, `c`.
    #[default]
    Charge,
    /// `n / 2` as printed; only defined for even `n`.
    Printed,
}

impl fmt::Display for SoMomentExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SoMomentExponent::Charge => "charge",
            SoMomentExponent::Printed => "printed",
        })
    }
}

impl FromStr for SoMomentExponent {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "charge" => Ok(SoMomentExponent::Charge),
            "printed" => Ok(SoMomentExponent::Printed),
            _ => Err(format!("unknown SO moment exponent `{s}` (expected charge or printed)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AdhmSpec {
    pub group: Group,
    pub n: usize,
    pub c: usize,
    pub rescale: Rescale,
    /// Use `prod alpha * (-alpha)` for `varpi^2` instead of the printed
    /// squares. Only changes Sp and SO, by `(-1)^(#positive roots)`.
    pub signed_roots: bool,
    pub so_exponent: SoMomentExponent,
}

impl AdhmSpec {
    pub fn new(group: Group, n: usize, c: usize) -> Self {
        AdhmSpec { group, n, c, rescale: Rescale::Paper, signed_roots: false, so_exponent: SoMomentExponent::Charge }
    }

    pub fn validate(&self) -> Result<(), QuotientError> {
        if self.n == 0 || self.c == 0 {
            return Err(QuotientError::Validation("n and c must be at least 1".into()));
        }
        if self.group == Group::SU && self.rescale == Rescale::Halved {
            return Err(QuotientError::Validation("the halved convention only applies to Sp and SO".into()));
        }
        if self.group == Group::SO && self.so_exponent == SoMomentExponent::Printed && self.n % 2 == 1 {
            return Err(QuotientError::Validation("printed SO moment exponent n/2 needs even n".into()));
        }
        Ok(())
    }

    /// Number of gauge symbols.
    pub fn rank(&self) -> usize {
        match self.group {
            Group::SU | Group::SO => self.c,
            Group::Sp => self.c / 2,
        }
    }

    /// Number of framing symbols.
    pub fn framing(&self) -> usize {
        match self.group {
            Group::SU | Group::Sp => self.n,
            Group::SO => self.n / 2,
        }
    }

    pub fn system(&self) -> Result<WeightSystem<Rational>, QuotientError> {
        self.validate()?;
        let mut ws = match self.group {
            Group::SU => su_system(self.n, self.c),
            Group::Sp => sp_system(self.n, self.c),
            Group::SO => so_system_with(self.n, self.c, self.so_exponent),
        }?;
        if self.signed_roots {
            ws.root_convention = RootConvention::SignedPairs;
        }
        Ok(ws)
    }

    pub fn label(&self) -> String {
        format!("{}({},{})", self.group, self.n, self.c)
    }
}

/// Symbol table `sigma1..sigma_rank, eps1, eps2, tau1..tau_framing`.
pub fn adhm_table(rank: usize, framing: usize) -> SymbolTable {
    let mut s = Vec::new();
    for i in 1..=rank {
        s.push(SymbolInfo { name: format!("sigma{i}"), role: Role::Gauge });
    }
    s.push(SymbolInfo { name: "eps1".into(), role: Role::Equivariant });
    s.push(SymbolInfo { name: "eps2".into(), role: Role::Equivariant });
    for l in 1..=framing {
        s.push(SymbolInfo { name: format!("tau{l}"), role: Role::Framing });
    }
    SymbolTable::new(s).expect("distinct names")
}

pub(crate) struct Vars {
    pub table: SymbolTable,
    pub rank: usize,
    pub framing: usize,
}

impl Vars {
    pub fn new(rank: usize, framing: usize) -> Self {
        Vars { table: adhm_table(rank, framing), rank, framing }
    }
    pub fn sigma(&self, i: usize) -> usize {
        i
    }
    pub fn eps(&self, k: usize) -> usize {
        self.rank + k
    }
    pub fn tau(&self, l: usize) -> usize {
        self.rank + 2 + l
    }
    /// Integer-coefficient form from `(index, coefficient)` pairs.
    pub fn form(&self, terms: &[(usize, Rational)]) -> Form {
        LinearForm::from_terms(&self.table, terms)
    }
    pub fn circle(&self, eps: i64, tau: i64) -> Vec<Rational> {
        let mut c = vec![int(0); self.table.len()];
        c[self.eps(0)] = int(eps);
        c[self.eps(1)] = int(eps);
        for l in 0..self.framing {
            c[self.tau(l)] = int(tau);
        }
        c
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// SU(n) instantons of charge c.
pub fn su_system(n: usize, c: usize) -> Result<WeightSystem<Rational>, QuotientError> {
    AdhmSpec::new(Group::SU, n, c).validate()?;
    let v = Vars::new(c, n);
    let one = int(1);
    let mut v_weights = Vec::new();
    for k in 0..2 {
        for i in 0..c {
            for j in 0..c {
                v_weights.push(v.form(&[(v.eps(k), one.clone()), (v.sigma(i), one.clone()), (v.sigma(j), -one.clone())]));
            }
        }
    }
    for i in 0..c {
        for o in 0..n {
            v_weights.push(v.form(&[(v.sigma(i), one.clone()), (v.tau(o), -one.clone())]));
        }
    }
    for i in 0..c {
        for q in 0..n {
            v_weights.push(v.form(&[
                (v.eps(0), one.clone()),
                (v.eps(1), one.clone()),
                (v.sigma(i), -one.clone()),
                (v.tau(q), one.clone()),
            ]));
        }
    }
    let mut muc = Vec::new();
    for g in 0..c {
        for h in 0..c {
            muc.push(v.form(&[
                (v.eps(0), one.clone()),
                (v.eps(1), one.clone()),
                (v.sigma(g), one.clone()),
                (v.sigma(h), -one.clone()),
            ]));
        }
    }
    let mut roots = Vec::new();
    for e in 0..c {
        for f in e + 1..c {
            roots.push(v.form(&[(v.sigma(e), one.clone()), (v.sigma(f), -one.clone())]));
        }
    }
    Ok(WeightSystem {
        name: format!("su({n},{c})"),
        v_weights,
        muc_weights: muc,
        roots,
        root_convention: RootConvention::SignedPairs,
        weyl_order: factorial(c),
        prefactor: rat(1, factorial(c) as i64),
        cutting_circle: v.circle(1, -1),
        table: v.table,
    })
}

/// Weights `h + t - s, h + t + s, h - t - s, h - t + s` with `h = (eps1+eps2)/2`.
fn half_block(v: &Vars, s: Option<usize>, t: Option<usize>) -> Vec<Form> {
    let h = rat(1, 2);
    let mut out = Vec::new();
    let ts: Vec<i64> = if t.is_some() { vec![1, -1] } else { vec![0] };
    let ss: Vec<i64> = if s.is_some() { vec![-1, 1] } else { vec![0] };
    for &a in &ts {
        for &b in &ss {
            let mut terms = vec![(v.eps(0), h.clone()), (v.eps(1), h.clone())];
            if let Some(t) = t {
                terms.push((v.tau(t), int(a)));
            }
            if let Some(s) = s {
                terms.push((v.sigma(s), int(b)));
            }
            out.push(v.form(&terms));
        }
    }
    out
}

/// `A - B, A + B` for `A = eps_k` (or `eps1 + eps2`) and `B` a signed sum of sigmas.
fn pair(v: &Vars, a: &[usize], b: &[(usize, i64)]) -> [Form; 2] {
    let base: Vec<(usize, Rational)> = a.iter().map(|&e| (e, int(1))).collect();
    let mut minus = base.clone();
    let mut plus = base;
    for &(s, c) in b {
        minus.push((v.sigma(s), int(-c)));
        plus.push((v.sigma(s), int(c)));
    }
    [v.form(&minus), v.form(&plus)]
}

/// Sp(n) instantons of charge c; gauge group O(c) with torus rank `c / 2`.
pub fn sp_system(n: usize, c: usize) -> Result<WeightSystem<Rational>, QuotientError> {
    AdhmSpec::new(Group::Sp, n, c).validate()?;
    let m = c / 2;
    let odd = c % 2 == 1;
    let v = Vars::new(m, n);
    let e12 = [v.eps(0), v.eps(1)];
    let mut roots = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            roots.push(v.form(&[(v.sigma(i), int(1)), (v.sigma(j), int(-1))]));
            roots.push(v.form(&[(v.sigma(i), int(1)), (v.sigma(j), int(1))]));
        }
    }
    if odd {
        for i in 0..m {
            roots.push(v.form(&[(v.sigma(i), int(1))]));
        }
    }
    let mut muc = Vec::new();
    for _ in 0..m {
        muc.push(v.form(&[(v.eps(0), int(1)), (v.eps(1), int(1))]));
    }
    if odd {
        for i in 0..m {
            muc.extend(pair(&v, &e12, &[(i, 1)]));
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            muc.extend(pair(&v, &e12, &[(i, 1), (j, 1)]));
            muc.extend(pair(&v, &e12, &[(i, 1), (j, -1)]));
        }
    }
    let mut vw = Vec::new();
    for k in 0..2 {
        let ek = [v.eps(k)];
        if odd {
            vw.push(v.form(&[(v.eps(k), int(1))]));
            for i in 0..m {
                vw.extend(pair(&v, &ek, &[(i, 1)]));
            }
        }
        for i in 0..m {
            for j in 0..m {
                vw.push(v.form(&[(v.eps(k), int(1)), (v.sigma(i), int(1)), (v.sigma(j), int(-1))]));
            }
        }
        // The odd block prints (sigma1 + sigma2) inside the i <= j product;
        // the general pattern (sigma_i + sigma_j) is used.
        for i in 0..m {
            for j in i..m {
                if i == j {
                    vw.extend(pair(&v, &ek, &[(i, 2)]));
                } else {
                    vw.extend(pair(&v, &ek, &[(i, 1), (j, 1)]));
                }
            }
        }
    }
    for i in 0..m {
        for l in 0..n {
            vw.extend(half_block(&v, Some(i), Some(l)));
        }
    }
    if odd {
        for l in 0..n {
            vw.extend(half_block(&v, None, Some(l)));
        }
    }
    let weyl = if odd {
        (1u64 << m) * factorial(m)
    } else if m == 0 {
        1
    } else {
        (1u64 << (m - 1)) * factorial(m)
    };
    Ok(WeightSystem {
        name: format!("sp({n},{c})"),
        v_weights: vw,
        muc_weights: muc,
        roots,
        root_convention: RootConvention::Squared,
        weyl_order: weyl,
        prefactor: rat(1, 2 * weyl as i64),
        cutting_circle: v.circle(1, 0),
        table: v.table,
    })
}

/// SO(n) instantons of charge c; gauge group Sp(c) with torus rank `c`.
pub fn so_system(n: usize, c: usize) -> Result<WeightSystem<Rational>, QuotientError> {
    so_system_with(n, c, SoMomentExponent::Charge)
}

pub fn so_system_with(n: usize, c: usize, exponent: SoMomentExponent) -> Result<WeightSystem<Rational>, QuotientError> {
    let mut spec = AdhmSpec::new(Group::SO, n, c);
    spec.so_exponent = exponent;
    spec.validate()?;
    let mm = n / 2;
    let odd = n % 2 == 1;
    let v = Vars::new(c, mm);
    let e12 = [v.eps(0), v.eps(1)];
    let mut roots = Vec::new();
    for i in 0..c {
        for j in i + 1..c {
            roots.push(v.form(&[(v.sigma(i), int(1)), (v.sigma(j), int(-1))]));
            roots.push(v.form(&[(v.sigma(i), int(1)), (v.sigma(j), int(1))]));
        }
    }
    for i in 0..c {
        roots.push(v.form(&[(v.sigma(i), int(2))]));
    }
    let x = match exponent {
        SoMomentExponent::Charge => c,
        SoMomentExponent::Printed => n / 2,
    };
    let mut muc = Vec::new();
    for _ in 0..x {
        muc.push(v.form(&[(v.eps(0), int(1)), (v.eps(1), int(1))]));
    }
    for i in 0..c {
        for j in i + 1..c {
            muc.extend(pair(&v, &e12, &[(i, 1), (j, -1)]));
        }
    }
    for i in 0..c {
        for j in i..c {
            if i == j {
                muc.extend(pair(&v, &e12, &[(i, 2)]));
            } else {
                muc.extend(pair(&v, &e12, &[(i, 1), (j, 1)]));
            }
        }
    }
    let mut vw = Vec::new();
    for k in 0..2 {
        let ek = [v.eps(k)];
        for i in 0..c {
            for j in 0..c {
                vw.push(v.form(&[(v.eps(k), int(1)), (v.sigma(i), int(1)), (v.sigma(j), int(-1))]));
            }
        }
        for i in 0..c {
            for j in i + 1..c {
                vw.extend(pair(&v, &ek, &[(i, 1), (j, 1)]));
            }
        }
    }
    if odd {
        for i in 0..c {
            vw.extend(half_block(&v, Some(i), None));
        }
    }
    for i in 0..c {
        for l in 0..mm {
            vw.extend(half_block(&v, Some(i), Some(l)));
        }
    }
    let w = factorial(c) * (1u64 << c);
    Ok(WeightSystem {
        name: format!("so({n},{c})"),
        v_weights: vw,
        muc_weights: muc,
        roots,
        root_convention: RootConvention::Squared,
        weyl_order: w,
        prefactor: rat(1, w as i64),
        cutting_circle: v.circle(1, 0),
        table: v.table,
    })
}

/// `eps_k -> eps_k / 2` for [`Rescale::Halved`], identity otherwise.
pub fn rescale_epsilon(f: &RationalFunction, convention: Rescale) -> Result<RationalFunction, QuotientError> {
    match convention {
        Rescale::Paper => Ok(f.clone()),
        Rescale::Halved => scale_epsilon(f, &rat(1, 2)),
    }
}

/// `eps_k -> factor * eps_k`.
pub fn scale_epsilon(f: &RationalFunction, factor: &Rational) -> Result<RationalFunction, QuotientError> {
    let t = f.table();
    let images: Vec<Form> = (0..t.len())
        .map(|i| {
            let e = LinearForm::var(t, i);
            if t.name(i) == "eps1" || t.name(i) == "eps2" {
                e.scale(factor)
            } else {
                e
            }
        })
        .collect();
    Ok(f.linear_change(&images)?)
}

/// Volume degree predicted by factor counting.
pub fn degree_identity(ws: &WeightSystem<Rational>) -> i64 {
    ws.expected_degree()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::{equivariant_volume, validate_polarization, VolumeOptions};

    #[test]
    fn su_counts() {
        for (n, c) in [(1, 1), (2, 3), (3, 2)] {
            let ws = su_system(n, c).unwrap();
            assert_eq!(ws.v_weights.len(), 2 * c * c + 2 * n * c);
            assert_eq!(ws.muc_weights.len(), c * c);
            assert!(validate_polarization(&ws).unwrap().ok());
        }
    }

    #[test]
    fn su11_volume() {
        let ws = su_system(1, 1).unwrap();
        let v = equivariant_volume(&ws, &VolumeOptions::default()).unwrap();
        assert_eq!(v.to_string(), "1 / (eps1*eps2)");
    }

    #[test]
    fn sp_and_so_polarized() {
        for c in 1..=3 {
            for n in 1..=3 {
                assert!(validate_polarization(&sp_system(n, c).unwrap()).unwrap().ok());
                assert!(validate_polarization(&so_system(n + 1, c).unwrap()).unwrap().ok());
            }
        }
    }

    #[test]
    fn rescale_doubles_inverse_plane() {
        let ws = su_system(1, 1).unwrap();
        let v = equivariant_volume(&ws, &VolumeOptions::default()).unwrap();
        let r = rescale_epsilon(&v, Rescale::Halved).unwrap();
        assert!(r.exact_eq(&v.scale(&int(4))).unwrap());
        let back = scale_epsilon(&r, &int(2)).unwrap();
        assert!(back.exact_eq(&v).unwrap());
    }
}
