use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::AlgebraError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// Integration variables of the torus being quotiented.
    Gauge,
    /// Parameters of the residual torus that survive the quotient.
    Equivariant,
    /// Framing parameters; equivariant as well, but kept apart for Weyl checks.
    Framing,
    /// Formal parameters such as the exponential coupling.
    Auxiliary,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolInfo {
    pub name: String,
    pub role: Role,
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct Inner {
    symbols: Vec<SymbolInfo>,
    gauge_order: Vec<usize>,
}

/// Shared, immutable symbol table. Cloning is cheap.
///
/// The gauge order is the residue order: the last entry is eliminated first.
#[derive(Clone)]
pub struct SymbolTable(Arc<Inner>);

impl SymbolTable {
    pub fn new(symbols: Vec<SymbolInfo>) -> Result<Self, AlgebraError> {
        let gauge_order = symbols
            .iter()
            .enumerate()
            .filter(|(_, s)| s.role == Role::Gauge)
            .map(|(i, _)| i)
            .collect();
        Self::with_order(symbols, gauge_order)
    }

    pub fn with_order(symbols: Vec<SymbolInfo>, gauge_order: Vec<usize>) -> Result<Self, AlgebraError> {
        for (i, s) in symbols.iter().enumerate() {
            if s.name.is_empty() {
                return Err(AlgebraError::Structure("empty symbol name".into()));
            }
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(AlgebraError::Structure(format!("duplicate symbol `{}`", s.name)));
            }
        }
        let gauge: Vec<usize> = (0..symbols.len()).filter(|&i| symbols[i].role == Role::Gauge).collect();
        let mut sorted = gauge_order.clone();
        sorted.sort_unstable();
        if sorted != gauge {
            return Err(AlgebraError::Structure(
                "residue order must list every gauge symbol exactly once".into(),
            ));
        }
        Ok(SymbolTable(Arc::new(Inner { symbols, gauge_order })))
    }

    /// Build from `(name, role)` pairs.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, Role)]) -> Result<Self, AlgebraError> {
        Self::new(
            pairs
                .iter()
                .map(|(n, r)| SymbolInfo { name: n.as_ref().to_string(), role: *r })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[SymbolInfo] {
        &self.0.symbols
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0.symbols[i].name
    }

    pub fn role(&self, i: usize) -> Role {
        self.0.symbols[i].role
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.symbols.iter().position(|s| s.name == name)
    }

    pub fn require(&self, name: &str) -> Result<usize, AlgebraError> {
        self.index(name)
            .ok_or_else(|| AlgebraError::Structure(format!("unknown symbol `{name}`")))
    }

    pub fn gauge_order(&self) -> &[usize] {
        &self.0.gauge_order
    }

    pub fn indices_with_role(&self, role: Role) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.role(i) == role).collect()
    }

    /// Same symbols, different residue order.
    pub fn reordered(&self, gauge_order: Vec<usize>) -> Result<Self, AlgebraError> {
        Self::with_order(self.0.symbols.clone(), gauge_order)
    }

    /// Tables are compatible when they list the same symbols in the same
    /// positions; the residue order does not affect arithmetic.
    pub fn compatible(&self, other: &SymbolTable) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.symbols == other.0.symbols
    }

    pub fn check(&self, other: &SymbolTable) -> Result<(), AlgebraError> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(AlgebraError::SymbolMismatch)
        }
    }
}

impl PartialEq for SymbolTable {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for SymbolTable {}

impl fmt::Debug for SymbolTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.symbols.iter().map(|s| s.name.as_str()).collect();
        write!(f, "SymbolTable{names:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_bad_orders() {
        assert!(SymbolTable::from_pairs(&[("x", Role::Gauge), ("x", Role::Equivariant)]).is_err());
        let syms = vec![
            SymbolInfo { name: "a".into(), role: Role::Gauge },
            SymbolInfo { name: "b".into(), role: Role::Gauge },
        ];
        assert!(SymbolTable::with_order(syms.clone(), vec![0]).is_err());
        let t = SymbolTable::with_order(syms, vec![1, 0]).unwrap();
        assert_eq!(t.gauge_order(), &[1, 0]);
    }
}
