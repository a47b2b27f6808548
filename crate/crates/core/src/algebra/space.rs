use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered variable names: equivariant parameters, flavour parameters, the
/// loop-rotation parameter `h`, then auxiliary cohomology generators.
///
/// The declared order is also the variable order of the graded
/// lexicographic monomial order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableSpace {
    names: Vec<String>,
    n_equiv: usize,
    n_flavour: usize,
}

impl VariableSpace {
    /// `a1..ar`, `m1..mf`, `h`, followed by the given auxiliary names.
    pub fn standard(n_equiv: usize, n_flavour: usize, aux: &[&str]) -> Result<Arc<Self>> {
        let equiv = (1..=n_equiv).map(|i| format!("a{i}")).collect();
        let flavour = (1..=n_flavour).map(|i| format!("m{i}")).collect();
        let aux = aux.iter().map(|s| s.to_string()).collect();
        Self::with_names(equiv, flavour, "h".to_string(), aux)
    }

    pub fn with_names(
        equiv: Vec<String>,
        flavour: Vec<String>,
        hbar: String,
        aux: Vec<String>,
    ) -> Result<Arc<Self>> {
        let n_equiv = equiv.len();
        let n_flavour = flavour.len();
        let mut names = equiv;
        names.extend(flavour);
        names.push(hbar);
        names.extend(aux);
        let mut seen = HashSet::new();
        for name in &names {
            if !is_identifier(name) || name == "z" || name == "q" {
                return Err(Error::InvalidInput(format!("invalid variable name `{name}`")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate variable name `{name}`")));
            }
        }
        Ok(Arc::new(Self {
            names,
            n_equiv,
            n_flavour,
        }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn n_equiv(&self) -> usize {
        self.n_equiv
    }

    pub fn n_flavour(&self) -> usize {
        self.n_flavour
    }

    pub fn n_aux(&self) -> usize {
        self.names.len() - self.n_equiv - self.n_flavour - 1
    }

    pub fn equiv(&self, i: usize) -> usize {
        assert!(i < self.n_equiv, "equivariant index out of range");
        i
    }

    pub fn flavour(&self, i: usize) -> usize {
        assert!(i < self.n_flavour, "flavour index out of range");
        self.n_equiv + i
    }

    pub fn hbar(&self) -> usize {
        self.n_equiv + self.n_flavour
    }

    pub fn aux(&self, i: usize) -> usize {
        assert!(i < self.n_aux(), "auxiliary index out of range");
        self.hbar() + 1 + i
    }

    pub fn aux_names(&self) -> &[String] {
        &self.names[self.hbar() + 1..]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_equiv(&self, i: usize) -> bool {
        i < self.n_equiv
    }

    /// Same shape with extra flavour variables appended after the existing
    /// ones, named `m{f+1}`, `m{f+2}`, ...
    pub fn with_extra_flavour(&self, extra: usize) -> Result<Arc<Self>> {
        let equiv = self.names[..self.n_equiv].to_vec();
        let mut flavour = self.names[self.n_equiv..self.hbar()].to_vec();
        for k in 0..extra {
            flavour.push(format!("m{}", self.n_flavour + k + 1));
        }
        Self::with_names(
            equiv,
            flavour,
            self.names[self.hbar()].clone(),
            self.aux_names().to_vec(),
        )
    }
}

impl fmt::Display for VariableSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(", "))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn same_space(a: &Arc<VariableSpace>, b: &Arc<VariableSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
