use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use crate::algebra::{phi_shift, same_space, Polynomial, RationalFunction, Substitution, VariableSpace, Q};
use crate::error::{check_len, Error, Result};
use crate::gauge::Coweight;

/// Finite sum `sum_lambda c_lambda t^lambda` in the twisted group algebra of
/// the coweight lattice over rational functions, with
/// `t^lambda * P(a, h) = P(a + lambda h, h) * t^lambda`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOp {
    space: Arc<VariableSpace>,
    terms: BTreeMap<Coweight, RationalFunction>,
}

impl DiffOp {
    pub fn zero(space: &Arc<VariableSpace>) -> Self {
        Self {
            space: space.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(space: &Arc<VariableSpace>) -> Self {
        Self::monomial(space, vec![0; space.n_equiv()], RationalFunction::one(space)).expect("rank matches")
    }

    /// `c * t^lambda`.
    pub fn monomial(space: &Arc<VariableSpace>, lambda: Coweight, c: RationalFunction) -> Result<Self> {
        check_len(space.n_equiv(), lambda.len())?;
        if !same_space(space, c.space()) {
            return Err(Error::SpaceMismatch);
        }
        let mut out = Self::zero(space);
        if !c.is_zero() {
            out.terms.insert(lambda, c);
        }
        Ok(out)
    }

    pub fn scalar(c: RationalFunction) -> Self {
        let space = c.space().clone();
        Self::monomial(&space, vec![0; space.n_equiv()], c).expect("rank matches")
    }

    pub fn from_terms(space: &Arc<VariableSpace>, terms: impl IntoIterator<Item = (Coweight, RationalFunction)>) -> Result<Self> {
        let mut out = Self::zero(space);
        for (lambda, c) in terms {
            out.add_term(lambda, c)?;
        }
        Ok(out)
    }

    pub fn add_term(&mut self, lambda: Coweight, c: RationalFunction) -> Result<()> {
        check_len(self.rank(), lambda.len())?;
        if !same_space(&self.space, c.space()) {
            return Err(Error::SpaceMismatch);
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.entry(lambda) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &Arc<VariableSpace> {
        &self.space
    }

    pub fn rank(&self) -> usize {
        self.space.n_equiv()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Coweight, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, lambda: &[i64]) -> RationalFunction {
        self.terms
            .get(lambda)
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(&self.space))
    }

    pub fn support(&self) -> impl Iterator<Item = &Coweight> {
        self.terms.keys()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_term(l.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(l, c)| (l.clone(), -c)).collect(),
        }
    }

    /// `c * self`, the scalar acting from the left.
    pub fn scale_left(&self, c: &RationalFunction) -> Result<Self> {
        if !same_space(&self.space, c.space()) {
            return Err(Error::SpaceMismatch);
        }
        let mut out = Self::zero(&self.space);
        if c.is_zero() {
            return Ok(out);
        }
        for (l, x) in &self.terms {
            out.terms.insert(l.clone(), c * x);
        }
        Ok(out)
    }

    pub fn scale_rational(&self, q: &Q) -> Self {
        let mut out = Self::zero(&self.space);
        for (l, x) in &self.terms {
            let y = x.scale(q);
            if !y.is_zero() {
                out.terms.insert(l.clone(), y);
            }
        }
        out
    }

    /// `(c t^lambda)(d t^mu) = c Phi_lambda(d) t^{lambda + mu}`.
    pub fn twisted_product(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.space);
        for (l, c) in &self.terms {
            for (m, d) in &other.terms {
                let shifted = phi_shift(d, l)?;
                let sum: Coweight = l.iter().zip(m).map(|(a, b)| a + b).collect();
                out.add_term(sum, c * &shifted)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut out = Self::one(&self.space);
        for _ in 0..e {
            out = out.twisted_product(self)?;
        }
        Ok(out)
    }

    /// Apply `f` to every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(&RationalFunction) -> Result<RationalFunction>) -> Result<Self> {
        let mut out = Self::zero(&self.space);
        for (l, c) in &self.terms {
            out.add_term(l.clone(), f(c)?)?;
        }
        Ok(out)
    }

    /// Weyl action: coweights by `w`, coefficients by `P(a) -> P(w^{-1} a)`,
    /// i.e. `a_i -> sum_j winv[i][j] a_j`.
    pub fn weyl_act(&self, w: &[Vec<i64>], winv: &[Vec<i64>]) -> Result<Self> {
        let r = self.rank();
        check_len(r, w.len())?;
        check_len(r, winv.len())?;
        let sub = weyl_substitution(&self.space, winv)?;
        let mut out = Self::zero(&self.space);
        for (l, c) in &self.terms {
            let wl = mat_vec(w, l);
            out.add_term(wl, sub.apply(c)?)?;
        }
        Ok(out)
    }

    pub fn reembed(&self, target: &Arc<VariableSpace>) -> Result<Self> {
        check_len(self.rank(), target.n_equiv())?;
        let mut out = Self::zero(target);
        for (l, c) in &self.terms {
            out.add_term(l.clone(), c.reembed(target)?)?;
        }
        Ok(out)
    }

    /// All coefficients are polynomials.
    pub fn is_polynomial(&self) -> bool {
        self.terms.values().all(RationalFunction::is_polynomial)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms
            .values()
            .any(|c| c.numer().uses_var(v) || c.denom().uses_var(v))
    }
}

pub fn weyl_substitution(space: &Arc<VariableSpace>, winv: &[Vec<i64>]) -> Result<Substitution> {
    let r = space.n_equiv();
    let mut sub = Substitution::new(space);
    let vars: Vec<usize> = (0..r).collect();
    for (i, row) in winv.iter().enumerate() {
        check_len(r, row.len())?;
        let is_identity_row = row.iter().enumerate().all(|(j, x)| *x == i64::from(i == j));
        if !is_identity_row {
            sub.set_poly(i, Polynomial::linear(space, &vars, row))?;
        }
    }
    Ok(sub)
}

pub fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn format_coweight(l: &[i64]) -> String {
    let parts: Vec<String> = l.iter().map(|x| x.to_string()).collect();
    format!("z[{}]", parts.join(","))
}

impl fmt::Display for DiffOp {
    /// Terms in descending coweight order as `(c)*z[..]`; unit coefficients elided.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (l, c)) in self.terms.iter().rev().enumerate() {
            let z = format_coweight(l);
            let (neg, body) = match c.constant_value() {
                Some(q) if q.abs() == num_traits::One::one() => (q.is_negative(), z),
                Some(q) => (q.is_negative(), format!("{}*{z}", crate::algebra::format_rational(&q.abs()))),
                None => (false, format!("({c})*{z}")),
            };
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank1() -> Arc<VariableSpace> {
        VariableSpace::standard(1, 0, &[]).unwrap()
    }

    #[test]
    fn shift_relation() {
        let s = rank1();
        let a = RationalFunction::from_poly(Polynomial::var(&s, 0));
        let t = DiffOp::monomial(&s, vec![1], RationalFunction::one(&s)).unwrap();
        let prod = t.twisted_product(&DiffOp::scalar(a)).unwrap();
        assert_eq!(prod.to_string(), "(a1 + h)*z[1]");
    }

    #[test]
    fn negative_shift_square() {
        let s = rank1();
        let a = RationalFunction::from_poly(Polynomial::var(&s, 0));
        let x = DiffOp::monomial(&s, vec![-1], a).unwrap();
        let sq = x.twisted_product(&x).unwrap();
        assert_eq!(sq.to_string(), "(a1^2 - a1*h)*z[-2]");
    }

    #[test]
    fn untwisted_sector() {
        let s = rank1();
        let p = RationalFunction::from_poly(Polynomial::var(&s, 0));
        let q = RationalFunction::from_poly(Polynomial::var(&s, 1));
        let x = DiffOp::scalar(p.clone()).twisted_product(&DiffOp::scalar(q.clone())).unwrap();
        assert_eq!(x, DiffOp::scalar(&p * &q));
    }

    #[test]
    fn display_signs() {
        let s = VariableSpace::standard(2, 0, &[]).unwrap();
        let one = RationalFunction::one(&s);
        let x = DiffOp::from_terms(&s, [(vec![1, 0], one.clone()), (vec![0, 1], -&one)]).unwrap();
        assert_eq!(x.to_string(), "z[1,0] - z[0,1]");
    }
}
