use std::collections::HashMap;
use std::sync::Arc;

use super::poly::{Monomial, Polynomial};
use super::rational::RationalFunction;
use super::space::{same_space, VariableSpace};
use crate::error::{Error, Result};

/// Simultaneous substitution of variables by rational functions in the
/// same space. Unassigned variables are left alone.
#[derive(Debug, Clone)]
pub struct Substitution {
    space: Arc<VariableSpace>,
    values: Vec<Option<RationalFunction>>,
}

impl Substitution {
    pub fn new(space: &Arc<VariableSpace>) -> Self {
        Self {
            space: space.clone(),
            values: vec![None; space.len()],
        }
    }

    pub fn set(&mut self, var: usize, value: RationalFunction) -> Result<&mut Self> {
        if !same_space(&self.space, value.space()) {
            return Err(Error::SpaceMismatch);
        }
        self.values[var] = Some(value);
        Ok(self)
    }

    pub fn set_poly(&mut self, var: usize, value: Polynomial) -> Result<&mut Self> {
        self.set(var, RationalFunction::from_poly(value))
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().all(Option::is_none)
    }

    pub fn apply_poly(&self, p: &Polynomial) -> Result<RationalFunction> {
        if !same_space(&self.space, p.space()) {
            return Err(Error::SpaceMismatch);
        }
        let n = self.space.len();
        let used = p.vars_used();
        let active: Vec<usize> = (0..n)
            .filter(|&v| used[v] && self.values[v].is_some())
            .collect();
        if active.is_empty() {
            return Ok(RationalFunction::from_poly(p.clone()));
        }
        // Homogenize against a common denominator prod den_v^{deg_v p}.
        let max_deg: HashMap<usize, u32> = active.iter().map(|&v| (v, p.degree_in(v))).collect();
        let mut num_pows: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut den_pows: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut total = Polynomial::zero(&self.space);
        for (m, c) in p.terms() {
            let mut rest = m.exponents().to_vec();
            for &v in &active {
                rest[v] = 0;
            }
            let mut term = Polynomial::term(&self.space, Monomial::from_exponents(rest), c.clone());
            for &v in &active {
                let val = self.values[v].as_ref().unwrap();
                let e = m.exp(v);
                if e > 0 {
                    let np = cached_pow(&mut num_pows, v, e, val.numer());
                    term = &term * np;
                }
                if !val.is_polynomial() {
                    let d = max_deg[&v] - e;
                    if d > 0 {
                        let dp = cached_pow(&mut den_pows, v, d, val.denom());
                        term = &term * dp;
                    }
                }
            }
            total = &total + &term;
        }
        let mut den = Polynomial::one(&self.space);
        for &v in &active {
            let val = self.values[v].as_ref().unwrap();
            if !val.is_polynomial() {
                den = &den * &val.denom().pow(max_deg[&v]);
            }
        }
        RationalFunction::new(total, den)
    }

    pub fn apply(&self, r: &RationalFunction) -> Result<RationalFunction> {
        let num = self.apply_poly(r.numer())?;
        if r.is_polynomial() {
            return Ok(num);
        }
        let den = self.apply_poly(r.denom())?;
        if den.is_zero() {
            return Err(Error::PoleAtSpecialization(r.pole_locus().to_string()));
        }
        num.checked_div(&den)
    }
}

fn cached_pow<'a>(
    cache: &'a mut HashMap<(usize, u32), Polynomial>,
    v: usize,
    e: u32,
    base: &Polynomial,
) -> &'a Polynomial {
    cache.entry((v, e)).or_insert_with(|| base.pow(e))
}

/// The shift `a_i -> a_i + lambda_i h` on equivariant variables.
pub fn phi_shift(r: &RationalFunction, lambda: &[i64]) -> Result<RationalFunction> {
    let s = shift_substitution(r.space(), lambda)?;
    if s.is_identity() {
        return Ok(r.clone());
    }
    s.apply(r)
}

pub fn phi_shift_poly(p: &Polynomial, lambda: &[i64]) -> Result<Polynomial> {
    let s = shift_substitution(p.space(), lambda)?;
    if s.is_identity() {
        return Ok(p.clone());
    }
    let r = s.apply_poly(p)?;
    Ok(r.into_parts().0)
}

pub fn shift_substitution(space: &Arc<VariableSpace>, lambda: &[i64]) -> Result<Substitution> {
    crate::error::check_len(space.n_equiv(), lambda.len())?;
    let h = space.hbar();
    let mut s = Substitution::new(space);
    for (i, l) in lambda.iter().enumerate() {
        if *l != 0 {
            let v = Polynomial::linear(space, &[i, h], &[1, *l]);
            s.set_poly(i, v)?;
        }
    }
    Ok(s)
}

/// Set a variable to zero.
pub fn specialize_zero(r: &RationalFunction, var: usize) -> Result<RationalFunction> {
    let mut s = Substitution::new(r.space());
    s.set_poly(var, Polynomial::zero(r.space()))?;
    s.apply(r)
}

/// `divides(d, p)`: exact quotient when `d | p`.
pub fn divides(d: &Polynomial, p: &Polynomial) -> Option<Polynomial> {
    if d.is_zero() {
        return p.is_zero().then(|| Polynomial::zero(p.space()));
    }
    p.div_exact(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pole_at_specialization() {
        let s = VariableSpace::standard(1, 0, &[]).unwrap();
        let a = Polynomial::var(&s, 0);
        let h = Polynomial::var(&s, 1);
        let r = RationalFunction::new(Polynomial::one(&s), &a - &h).unwrap();
        let mut sub = Substitution::new(&s);
        sub.set_poly(0, h.clone()).unwrap();
        let err = sub.apply(&r).unwrap_err();
        assert!(err.to_string().starts_with("pole at specialization"));
    }

    #[test]
    fn divisibility() {
        let s = VariableSpace::standard(1, 0, &[]).unwrap();
        let a = Polynomial::var(&s, 0);
        let h = Polynomial::var(&s, 1);
        let d = &a * &(&a - &h);
        let p = &d * &(&a - &h.scale(&crate::algebra::q_int(2)));
        assert!(divides(&d, &p).is_some());
        assert!(divides(&p, &d).is_none());
    }

    #[test]
    fn shift_moves_equivariant_only() {
        let s = VariableSpace::standard(2, 0, &["x"]).unwrap();
        let x = &Polynomial::var(&s, 0) + &Polynomial::var(&s, 3);
        let y = phi_shift_poly(&x, &[2, 5]).unwrap();
        assert_eq!(y.to_string(), "a1 + 2*h + x");
    }

    #[test]
    fn rational_substitution() {
        let s = VariableSpace::standard(2, 0, &[]).unwrap();
        let a1 = Polynomial::var(&s, 0);
        let a2 = Polynomial::var(&s, 1);
        let p = &(&a1 * &a1) + &a2;
        let mut sub = Substitution::new(&s);
        sub.set(0, RationalFunction::new(Polynomial::one(&s), a2.clone()).unwrap())
            .unwrap();
        let r = sub.apply_poly(&p).unwrap();
        let expected = RationalFunction::new(&(&a2 * &(&a2 * &a2)) + &Polynomial::one(&s), &a2 * &a2).unwrap();
        assert_eq!(r, expected);
    }
}
