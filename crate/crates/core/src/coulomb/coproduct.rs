use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::DiffOp;
use crate::algebra::{divides, Polynomial, RationalFunction, VariableSpace};
use crate::error::{Error, Result};
use crate::gauge::{Coweight, GaugeTheory, HbarConvention};

/// Balanced tensor `sum (c t^lambda) ⊗ t^mu` over the equivariant scalars,
/// stored with every scalar moved onto the left factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    space: Arc<VariableSpace>,
    terms: BTreeMap<(Coweight, Coweight), RationalFunction>,
}

impl Tensor {
    pub fn zero(space: &Arc<VariableSpace>) -> Self {
        Self {
            space: space.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, left: Coweight, right: Coweight, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        let key = (left, right);
        let sum = match self.terms.remove(&key) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Coweight, Coweight), &RationalFunction)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn space(&self) -> &Arc<VariableSpace> {
        &self.space
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let z = |l: &Coweight| format!("z[{}]", l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|((l, m), c)| format!("(({c})*{}) ⊗ {}", z(l), z(m)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Check that `n1 ⊕ n2` reproduces the theory's matter as a multiset.
pub fn check_split(theory: &GaugeTheory, n1: &GaugeTheory, n2: &GaugeTheory) -> Result<()> {
    let sum = n1
        .direct_sum(n2)
        .map_err(|e| Error::SplitMismatch(e.to_string()))?;
    if sum.rank() != theory.rank() || sum.flavour_rank() != theory.flavour_rank() {
        return Err(Error::SplitMismatch("rank differs from the theory".into()));
    }
    let key = |t: &GaugeTheory| {
        let mut v: Vec<(Vec<i64>, Vec<i64>)> = t
            .matter()
            .iter()
            .cloned()
            .zip(t.charges().iter().cloned())
            .collect();
        v.sort();
        v
    };
    if key(&sum) != key(theory) {
        return Err(Error::SplitMismatch("summands do not reproduce the matter".into()));
    }
    Ok(())
}

/// `Delta(c t^lambda) = (c t^lambda) ⊗ t^lambda`.
pub fn coproduct(x: &DiffOp, theory: &GaugeTheory, n1: &GaugeTheory, n2: &GaugeTheory) -> Result<Tensor> {
    theory.check_space(x.space())?;
    check_split(theory, n1, n2)?;
    let mut out = Tensor::zero(x.space());
    for (l, c) in x.terms() {
        out.add_term(l.clone(), l.clone(), c.clone());
    }
    Ok(out)
}

/// Re-express every tensor term as `(p e_1(lambda) t^lambda) ⊗ (e_2(mu) t^mu)`
/// and return the polynomial scalars `p`, or `None` if some term does not
/// factor through the two sub-algebras.
pub fn factor_through(t: &Tensor, n1: &GaugeTheory, n2: &GaugeTheory, conv: HbarConvention) -> Result<Option<BTreeMap<(Coweight, Coweight), Polynomial>>> {
    let mut out = BTreeMap::new();
    for ((l, m), c) in t.terms() {
        let Some(p) = c.as_polynomial() else {
            return Ok(None);
        };
        let e1 = n1.euler_s(l, conv, t.space())?;
        let e2 = n2.euler_s(m, conv, t.space())?;
        match divides(&(&e1 * &e2), p) {
            Some(q) => {
                out.insert((l.clone(), m.clone()), q);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Every ordered splitting of the matter indices into two sub-theories.
pub fn all_splits(theory: &GaugeTheory) -> Vec<(GaugeTheory, GaugeTheory)> {
    let n = theory.matter().len();
    assert!(n < 20, "too many matter weights to split exhaustively");
    (0u32..1 << n)
        .map(|mask| {
            let (a, b): (Vec<usize>, Vec<usize>) = (0..n).partition(|i| mask & (1 << i) != 0);
            (
                theory.sub_theory(&a).expect("indices in range"),
                theory.sub_theory(&b).expect("indices in range"),
            )
        })
        .collect()
}
