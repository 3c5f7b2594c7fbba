//! Small hand-written weight systems.

use crate::algebra::{Role, SymbolTable};
use crate::quotient::{RootConvention, SystemBuilder, WeightSystem};
use crate::scalar::int;
use crate::Rational;

/// `C^2` with weights `sigma + tau, -sigma + tau`; volume `1/(2 tau)`.
pub fn basic_system() -> WeightSystem<Rational> {
    let t = SymbolTable::from_pairs(&[("sigma", Role::Gauge), ("tau", Role::Equivariant)]).expect("valid table");
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

/// Hyper-Kähler quotient of `C^4` by `C*`; volume `1/(2 tau1 tau2)`.
pub fn c4_system() -> WeightSystem<Rational> {
    let t = SymbolTable::from_pairs(&[("sigma", Role::Gauge), ("tau1", Role::Equivariant), ("tau2", Role::Equivariant)])
        .expect("valid table");
    let b = SystemBuilder::new(t.clone());
    let f = |v: &[(&str, i64)]| b.form(v).unwrap();
    WeightSystem {
        name: "c4".into(),
        v_weights: vec![
            f(&[("sigma", 1), ("tau1", 1)]),
            f(&[("sigma", 1), ("tau2", 1)]),
            f(&[("sigma", -1), ("tau2", 1)]),
            f(&[("sigma", -1), ("tau1", 1)]),
        ],
        muc_weights: vec![f(&[("tau1", 1), ("tau2", 1)])],
        roots: vec![],
        root_convention: RootConvention::Squared,
        weyl_order: 1,
        prefactor: int(1),
        cutting_circle: vec![int(0), int(1), int(1)],
        table: t,
    }
}
