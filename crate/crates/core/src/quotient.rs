//! Weight systems of torus quotients and their equivariant volumes.

use thiserror::Error;

use crate::algebra::{AlgebraError, FactoredRational, LinearForm, Role, SymbolTable};
use crate::residue::{res_plus_iterated, ResidueError, ResidueOptions, ResidueTrace};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuotientError {
    #[error("validation failed: {0}")]
    Validation(String),
    #[error(transparent)]
    Residue(#[from] ResidueError),
}

impl From<AlgebraError> for QuotientError {
    fn from(e: AlgebraError) -> Self {
        QuotientError::Residue(e.into())
    }
}

/// How the root data enters `varpi^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootConvention {
    /// `prod_{alpha > 0} alpha^2`.
    Squared,
    /// `prod_{alpha > 0} alpha * (-alpha)`, i.e. the product over all roots.
    SignedPairs,
}

impl RootConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            RootConvention::Squared => "squared",
            RootConvention::SignedPairs => "signed_pairs",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "squared" => Some(RootConvention::Squared),
            "signed_pairs" => Some(RootConvention::SignedPairs),
            _ => None,
        }
    }
}

/// Torus weights of a quotient problem.
///
/// The volume is `prefactor * Res+ (varpi^2 * prod(muc) / prod(v))`;
/// `prefactor` already contains the Weyl factor `1/weyl_order`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSystem<S: Scalar> {
    pub name: String,
    pub table: SymbolTable,
    pub v_weights: Vec<LinearForm<S>>,
    /// Complex moment map weights; empty for a symplectic quotient.
    pub muc_weights: Vec<LinearForm<S>>,
    /// Positive roots of the gauge group.
    pub roots: Vec<LinearForm<S>>,
    pub root_convention: RootConvention,
    pub weyl_order: u64,
    pub prefactor: S,
    /// Pairing of the cutting circle with each symbol.
    pub cutting_circle: Vec<S>,
}

/// Per-weight outcome of [`validate_polarization`].
#[derive(Clone, Debug, PartialEq)]
pub struct PolarizationReport<S: Scalar> {
    pub pairings: Vec<S>,
    pub offending: Vec<usize>,
}

impl<S: Scalar> PolarizationReport<S> {
    pub fn ok(&self) -> bool {
        self.offending.is_empty()
    }
}

impl<S: Scalar> WeightSystem<S> {
    pub fn gauge(&self) -> Vec<usize> {
        self.table.gauge_order().to_vec()
    }

    pub fn pairing(&self, w: &LinearForm<S>) -> S {
        w.evaluate(&self.cutting_circle)
    }

    /// Number of positive roots.
    pub fn positive_roots(&self) -> usize {
        self.roots.len()
    }

    /// Same weights with another residue order.
    pub fn reordered(&self, order: Vec<usize>) -> Result<Self, QuotientError> {
        let table = self.table.reordered(order)?;
        let rt = |v: &[LinearForm<S>]| -> Vec<LinearForm<S>> { v.iter().map(|f| f.with_table(&table).unwrap()).collect() };
        Ok(WeightSystem {
            name: self.name.clone(),
            v_weights: rt(&self.v_weights),
            muc_weights: rt(&self.muc_weights),
            roots: rt(&self.roots),
            table,
            root_convention: self.root_convention,
            weyl_order: self.weyl_order,
            prefactor: self.prefactor.clone(),
            cutting_circle: self.cutting_circle.clone(),
        })
    }

    /// Apply a linear change of variables to every weight.
    pub fn map_weights(&self, f: impl Fn(&LinearForm<S>) -> LinearForm<S>) -> Self {
        WeightSystem {
            name: self.name.clone(),
            table: self.table.clone(),
            v_weights: self.v_weights.iter().map(&f).collect(),
            muc_weights: self.muc_weights.iter().map(&f).collect(),
            roots: self.roots.iter().map(&f).collect(),
            root_convention: self.root_convention,
            weyl_order: self.weyl_order,
            prefactor: self.prefactor.clone(),
            cutting_circle: self.cutting_circle.clone(),
        }
    }

    /// Degree of the volume by factor counting: `2|roots| + |muc| - |v|`
    /// for the central function, plus one per residue taken.
    pub fn expected_degree(&self) -> i64 {
        let rank = self.table.gauge_order().len() as i64;
        2 * self.roots.len() as i64 + self.muc_weights.len() as i64 - self.v_weights.len() as i64 + rank
    }

    /// Complex dimension of the quotient.
    pub fn quotient_dimension(&self) -> i64 {
        let rank = self.table.gauge_order().len() as i64;
        let dim_g = 2 * self.roots.len() as i64 + rank;
        if self.muc_weights.is_empty() {
            self.v_weights.len() as i64 - dim_g
        } else {
            self.v_weights.len() as i64 - self.muc_weights.len() as i64 - dim_g
        }
    }
}

/// Every v weight must pair strictly positively with the cutting circle,
/// and the circle must not move gauge symbols.
pub fn validate_polarization<S: Scalar>(ws: &WeightSystem<S>) -> Result<PolarizationReport<S>, QuotientError> {
    if ws.cutting_circle.len() != ws.table.len() {
        return Err(QuotientError::Validation("cutting circle has wrong length".into()));
    }
    for &g in ws.table.gauge_order() {
        if !ws.cutting_circle[g].is_zero() {
            return Err(QuotientError::Validation(format!(
                "cutting circle pairs nontrivially with gauge symbol {}",
                ws.table.name(g)
            )));
        }
    }
    let pairings: Vec<S> = ws.v_weights.iter().map(|w| ws.pairing(w)).collect();
    let offending = pairings
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_positive_s())
        .map(|(i, _)| i)
        .collect();
    Ok(PolarizationReport { pairings, offending })
}

fn structural_checks<S: Scalar>(ws: &WeightSystem<S>) -> Result<(), QuotientError> {
    let all = ws.v_weights.iter().chain(&ws.muc_weights).chain(&ws.roots);
    for w in all {
        ws.table.check(w.table())?;
    }
    if let Some(i) = ws.v_weights.iter().position(|w| w.is_zero()) {
        return Err(QuotientError::Validation(format!("v weight {i} is zero")));
    }
    for r in &ws.roots {
        if ws.table.gauge_order().iter().all(|&g| !r.depends_on(g)) {
            return Err(QuotientError::Validation(format!("root {r} does not involve a gauge symbol")));
        }
        for (i, _) in r.support() {
            if ws.table.role(i) != Role::Gauge {
                return Err(QuotientError::Validation(format!("root {r} involves a non-gauge symbol")));
            }
        }
    }
    if ws.weyl_order == 0 {
        return Err(QuotientError::Validation("Weyl group order must be positive".into()));
    }
    Ok(())
}

/// `varpi^2 * prod(muc) / prod(v)`.
pub fn central_function<S: Scalar>(ws: &WeightSystem<S>) -> Result<FactoredRational<S>, QuotientError> {
    structural_checks(ws)?;
    let mut num: Vec<(LinearForm<S>, u32)> = ws.roots.iter().map(|r| (r.clone(), 2)).collect();
    num.extend(ws.muc_weights.iter().map(|m| (m.clone(), 1)));
    let den = ws.v_weights.iter().map(|v| (v.clone(), 1)).collect();
    let sign = match ws.root_convention {
        RootConvention::SignedPairs if ws.roots.len() % 2 == 1 => -S::one(),
        _ => S::one(),
    };
    Ok(FactoredRational::from_linear(&ws.table, sign, num, den)?.cancel())
}

/// Options for [`equivariant_volume`].
#[derive(Clone, Debug, Default)]
pub struct VolumeOptions {
    pub residue: ResidueOptions,
    /// Skip the polarization check (for experiments with bad data).
    pub skip_validation: bool,
}

/// The equivariant volume together with the residue trace.
pub fn equivariant_volume_traced<S: Scalar>(
    ws: &WeightSystem<S>,
    opts: &VolumeOptions,
) -> Result<(FactoredRational<S>, ResidueTrace), QuotientError> {
    if !opts.skip_validation {
        let r = validate_polarization(ws)?;
        if !r.ok() {
            let names: Vec<String> = r.offending.iter().map(|&i| ws.v_weights[i].to_string()).collect();
            return Err(QuotientError::Validation(format!(
                "weights not positive on the cutting circle: {}",
                names.join(", ")
            )));
        }
    }
    let f = central_function(ws)?;
    let (total, trace) = res_plus_iterated(&f, &opts.residue)?;
    Ok((total.scale(&ws.prefactor).canonical(), trace))
}

pub fn equivariant_volume<S: Scalar>(
    ws: &WeightSystem<S>,
    opts: &VolumeOptions,
) -> Result<FactoredRational<S>, QuotientError> {
    Ok(equivariant_volume_traced(ws, opts)?.0)
}

/// Builder for hand-written weight systems with integer coefficients.
pub struct SystemBuilder {
    table: SymbolTable,
}

impl SystemBuilder {
    pub fn new(table: SymbolTable) -> Self {
        SystemBuilder { table }
    }

    pub fn form<S: Scalar>(&self, terms: &[(&str, i64)]) -> Result<LinearForm<S>, QuotientError> {
        Ok(LinearForm::parse_terms(&self.table, terms)?)
    }

    pub fn table(&self) -> &SymbolTable {
        &self.table
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::Rational;

    fn basic() -> WeightSystem<Rational> {
        let t = SymbolTable::from_pairs(&[("sigma", Role::Gauge), ("tau", Role::Equivariant)]).unwrap();
        let b = SystemBuilder::new(t.clone());
        WeightSystem {
            name: "basic".into(),
            v_weights: vec![b.form(&[("sigma", 1), ("tau", 1)]).unwrap(), b.form(&[("sigma", -1), ("tau", 1)]).unwrap()],
            muc_weights: vec![],
            roots: vec![],
            root_convention: RootConvention::Squared,
            weyl_order: 1,
            prefactor: int(1),
            cutting_circle: vec![int(0), int(1)],
            table: t,
        }
    }

    #[test]
    fn basic_example() {
        let ws = basic();
        let v = equivariant_volume(&ws, &VolumeOptions::default()).unwrap();
        let t = &ws.table;
        let want = FactoredRational::from_linear(t, rat(1, 2), vec![], vec![(LinearForm::var(t, 1), 1)]).unwrap();
        assert!(v.exact_eq(&want).unwrap());
        assert_eq!(ws.quotient_dimension(), 1);
    }

    #[test]
    fn rejects_bad_polarization() {
        let mut ws = basic();
        ws.cutting_circle = vec![int(0), int(-1)];
        let r = validate_polarization(&ws).unwrap();
        assert_eq!(r.offending, vec![0, 1]);
        assert!(matches!(equivariant_volume(&ws, &VolumeOptions::default()), Err(QuotientError::Validation(_))));
        ws.cutting_circle = vec![int(1), int(1)];
        assert!(validate_polarization(&ws).is_err());
    }
}
