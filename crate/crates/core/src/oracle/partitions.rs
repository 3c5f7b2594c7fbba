//! Fixed-point sum over n-tuples of Young diagrams for SU(n) instantons.

use rayon::prelude::*;

use crate::adhm::adhm_table;
use crate::algebra::{AlgebraError, FactoredRational, LinearForm};
use crate::scalar::int;
use crate::{Form, RationalFunction};

/// A Young diagram as weakly decreasing row lengths.
pub type Partition = Vec<usize>;

pub fn partitions(k: usize) -> Vec<Partition> {
    fn go(k: usize, max: usize, prefix: &mut Partition, out: &mut Vec<Partition>) {
        if k == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=k.min(max)).rev() {
            prefix.push(p);
            go(k - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// All n-tuples of diagrams with `k` boxes in total.
pub fn partition_tuples(n: usize, k: usize) -> Vec<Vec<Partition>> {
    if n == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for a in 0..=k {
        for p in partitions(a) {
            for mut rest in partition_tuples(n - 1, k - a) {
                rest.insert(0, p.clone());
                out.push(rest);
            }
        }
    }
    out
}

fn row(y: &Partition, i: usize) -> i64 {
    y.get(i).copied().unwrap_or(0) as i64
}

fn column(y: &Partition, j: usize) -> i64 {
    y.iter().filter(|&&r| r > j).count() as i64
}

/// Arm length of box (i, j) relative to `y`.
pub fn arm(y: &Partition, i: usize, j: usize) -> i64 {
    row(y, i) - j as i64 - 1
}

/// Leg length of box (i, j) relative to `y`.
pub fn leg(y: &Partition, i: usize, j: usize) -> i64 {
    column(y, j) - i as i64 - 1
}

fn boxes(y: &Partition) -> impl Iterator<Item = (usize, usize)> + '_ {
    y.iter().enumerate().flat_map(|(i, &r)| (0..r).map(move |j| (i, j)))
}

/// Tangent weights at the fixed point labelled by `ys`.
pub fn tangent_weights(n: usize, ys: &[Partition], rank: usize) -> Vec<Form> {
    let t = adhm_table(rank, n);
    let (e1, e2) = (rank, rank + 1);
    let tau = |a: usize| rank + 2 + a;
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let (ya, yb) = (&ys[a], &ys[b]);
            for (i, j) in boxes(ya) {
                let mut terms = vec![(e1, int(-leg(yb, i, j))), (e2, int(arm(ya, i, j) + 1))];
                terms.push((tau(b), int(1)));
                terms.push((tau(a), int(-1)));
                out.push(LinearForm::from_terms(&t, &terms));
            }
            for (i, j) in boxes(yb) {
                let mut terms = vec![(e1, int(leg(ya, i, j) + 1)), (e2, int(-arm(yb, i, j)))];
                terms.push((tau(b), int(1)));
                terms.push((tau(a), int(-1)));
                out.push(LinearForm::from_terms(&t, &terms));
            }
        }
    }
    out
}

/// `sum over tuples of 1 / prod(tangent weights)`, on the symbol table of
/// the SU(n) charge-k weight system.
pub fn partition_sum_su(n: usize, k: usize) -> Result<RationalFunction, AlgebraError> {
    let t = adhm_table(k, n);
    let terms: Result<Vec<RationalFunction>, AlgebraError> = partition_tuples(n, k)
        .par_iter()
        .map(|ys| {
            let w = tangent_weights(n, ys, k);
            if w.iter().any(|f| f.is_zero()) {
                return Err(AlgebraError::Structure("vanishing tangent weight".into()));
            }
            FactoredRational::from_linear(&t, int(1), vec![], w.into_iter().map(|f| (f, 1)).collect())
        })
        .collect();
    Ok(FactoredRational::sum(&t, terms?)?.canonical())
}
