use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{pole_classes, residue_at, PoleClass, ResidueError};
use crate::algebra::{AlgebraError, FactoredRational};
use crate::scalar::Scalar;

#[derive(Clone, Debug, Default)]
pub struct ResidueOptions {
    /// Explore sibling branches on the rayon pool.
    pub parallel: bool,
    /// Overrides the table's gauge order; the last entry goes first.
    pub order: Option<Vec<usize>>,
}

/// One residue taken along a branch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub variable: String,
    /// Pole location, `variable = location`.
    pub location: String,
    pub order: u32,
    /// Denominator indices (in the function at this depth) forming the class.
    pub members: Vec<usize>,
    /// Fingerprint of the residue produced at this step.
    pub fingerprint: String,
    pub children: Vec<TraceStep>,
}

/// Branch tree of an iterated positive residue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueTrace {
    /// Elimination order, first eliminated first.
    pub order: Vec<String>,
    pub input: String,
    pub steps: Vec<TraceStep>,
    /// Fingerprint of the canonical result.
    pub result: String,
    pub leaves: usize,
}

impl ResidueTrace {
    /// Plain-text path diagram.
    pub fn diagram(&self) -> String {
        let mut out = format!("res+ over [{}]  ({} nonzero leaves)\n", self.order.join(", "), self.leaves);
        fn walk(s: &TraceStep, depth: usize, out: &mut String) {
            let pad = "  ".repeat(depth);
            let ord = if s.order > 1 { format!("  [order {}]", s.order) } else { String::new() };
            let mark = if s.children.is_empty() { "*" } else { "+" };
            out.push_str(&format!("{pad}{mark} {} = {}{ord}  #{}\n", s.variable, s.location, &s.fingerprint[..12]));
            for c in &s.children {
                walk(c, depth + 1, out);
            }
        }
        for s in &self.steps {
            walk(s, 0, &mut out);
        }
        out.push_str(&format!("result #{}\n", &self.result[..12]));
        out
    }

    pub fn step_count(&self) -> usize {
        fn n(s: &TraceStep) -> usize {
            1 + s.children.iter().map(n).sum::<usize>()
        }
        self.steps.iter().map(n).sum()
    }
}

struct Branch<S: Scalar> {
    leaves: Vec<FactoredRational<S>>,
    steps: Vec<TraceStep>,
}

fn descend<S: Scalar>(
    f: &FactoredRational<S>,
    vars: &[usize],
    opts: &ResidueOptions,
) -> Result<Branch<S>, ResidueError> {
    let Some((&var, rest)) = vars.split_last() else {
        return Ok(Branch { leaves: vec![f.clone()], steps: Vec::new() });
    };
    let classes: Vec<PoleClass<S>> = pole_classes(f, var).into_iter().filter(|c| c.selected).collect();
    let one = |c: &PoleClass<S>| -> Result<Option<(Branch<S>, TraceStep)>, ResidueError> {
        let g = residue_at(f, c)?;
        if g.is_zero() {
            return Ok(None);
        }
        let fingerprint = g.fingerprint();
        let sub = descend(&g, rest, opts)?;
        let step = TraceStep {
            variable: f.table().name(var).to_string(),
            location: c.location.to_string(),
            order: c.order,
            members: c.members.iter().map(|m| m.index).collect(),
            fingerprint,
            children: Vec::new(),
        };
        Ok(Some((sub, step)))
    };
    let results: Vec<Result<Option<(Branch<S>, TraceStep)>, ResidueError>> = if opts.parallel && classes.len() > 1 {
        classes.par_iter().map(one).collect()
    } else {
        classes.iter().map(one).collect()
    };
    let mut out = Branch { leaves: Vec::new(), steps: Vec::new() };
    for r in results {
        if let Some((sub, mut step)) = r? {
            if !rest.is_empty() && sub.leaves.is_empty() {
                continue;
            }
            out.leaves.extend(sub.leaves);
            step.children = sub.steps;
            out.steps.push(step);
        }
    }
    Ok(out)
}

fn order_of<S: Scalar>(f: &FactoredRational<S>, opts: &ResidueOptions) -> Result<Vec<usize>, ResidueError> {
    let order = opts.order.clone().unwrap_or_else(|| f.table().gauge_order().to_vec());
    let mut sorted = order.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != order.len() || order.iter().any(|&i| i >= f.table().len()) {
        return Err(AlgebraError::Structure("residue order repeats or names unknown symbols".into()).into());
    }
    Ok(order)
}

/// `Res+` in every gauge variable, last in the order first.
pub fn res_plus_iterated<S: Scalar>(
    f: &FactoredRational<S>,
    opts: &ResidueOptions,
) -> Result<(FactoredRational<S>, ResidueTrace), ResidueError> {
    let order = order_of(f, opts)?;
    let branch = descend(f, &order, opts)?;
    let leaves = branch.leaves.len();
    let total = FactoredRational::sum(f.table(), branch.leaves)?.canonical();
    let trace = ResidueTrace {
        order: order.iter().rev().map(|&i| f.table().name(i).to_string()).collect(),
        input: f.fingerprint(),
        steps: branch.steps,
        result: total.fingerprint(),
        leaves,
    };
    Ok((total, trace))
}

/// Recompute a trace step by step, checking every fingerprint, and return
/// the reproduced result.
pub fn replay<S: Scalar>(f: &FactoredRational<S>, trace: &ResidueTrace) -> Result<FactoredRational<S>, ResidueError> {
    if f.fingerprint() != trace.input {
        return Err(ResidueError::ReplayMismatch("input fingerprint".into()));
    }
    let table = f.table();
    let mut order = Vec::new();
    for name in trace.order.iter().rev() {
        order.push(table.require(name)?);
    }
    fn walk<S: Scalar>(
        f: &FactoredRational<S>,
        vars: &[usize],
        steps: &[TraceStep],
        leaves: &mut Vec<FactoredRational<S>>,
    ) -> Result<(), ResidueError> {
        let Some((&var, rest)) = vars.split_last() else {
            leaves.push(f.clone());
            return Ok(());
        };
        let classes = pole_classes(f, var);
        for s in steps {
            let c = classes
                .iter()
                .find(|c| c.selected && c.location.to_string() == s.location)
                .ok_or_else(|| ResidueError::ReplayMismatch(format!("no selected pole {} = {}", s.variable, s.location)))?;
            let g = residue_at(f, c)?;
            if g.fingerprint() != s.fingerprint {
                return Err(ResidueError::ReplayMismatch(format!("step {} = {}", s.variable, s.location)));
            }
            walk(&g, rest, &s.children, leaves)?;
        }
        Ok(())
    }
    let mut leaves = Vec::new();
    walk(f, &order, &trace.steps, &mut leaves)?;
    let total = FactoredRational::sum(table, leaves)?.canonical();
    if total.fingerprint() != trace.result {
        return Err(ResidueError::ReplayMismatch("result fingerprint".into()));
    }
    Ok(total)
}
