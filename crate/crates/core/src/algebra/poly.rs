use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::space::{same_space, VariableSpace};
use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then lexicographically with the first variable most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Self {
            exps: vec![0; nvars],
            degree: 0,
        }
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Self { exps, degree }
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = e;
        m.degree = e;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Self) -> Self {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            exps,
            degree: self.degree + other.degree,
        }
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.degree > self.degree {
            return None;
        }
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Self {
            exps,
            degree: self.degree - other.degree,
        })
    }

    pub fn gcd(&self, other: &Self) -> Self {
        Self::from_exponents(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    fn with_exp(&self, i: usize, e: u32) -> Self {
        let mut exps = self.exps.clone();
        exps[i] = e;
        Self::from_exponents(exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
/// No stored coefficient is zero.
#[derive(Debug, Clone)]
pub struct Polynomial {
    space: Arc<VariableSpace>,
    terms: BTreeMap<Monomial, Q>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(space: &Arc<VariableSpace>) -> Self {
        Self {
            space: space.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(space: &Arc<VariableSpace>) -> Self {
        Self::constant(space, Q::one())
    }

    pub fn constant(space: &Arc<VariableSpace>, c: Q) -> Self {
        let mut p = Self::zero(space);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(space.len()), c);
        }
        p
    }

    pub fn from_int(space: &Arc<VariableSpace>, n: i64) -> Self {
        Self::constant(space, q_int(n))
    }

    pub fn var(space: &Arc<VariableSpace>, i: usize) -> Self {
        Self::term(space, Monomial::var(space.len(), i, 1), Q::one())
    }

    pub fn term(space: &Arc<VariableSpace>, m: Monomial, c: Q) -> Self {
        assert_eq!(m.exps.len(), space.len(), "monomial arity");
        let mut p = Self::zero(space);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(space: &Arc<VariableSpace>, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Self::zero(space);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Terms already keyed by monomial; zero coefficients are dropped.
    pub fn from_sorted_terms(space: &Arc<VariableSpace>, mut terms: BTreeMap<Monomial, Q>) -> Self {
        terms.retain(|m, c| {
            assert_eq!(m.exps.len(), space.len(), "monomial arity");
            !c.is_zero()
        });
        Self { space: space.clone(), terms }
    }

    /// Linear form `sum coeffs[i] * x_{vars[i]}`.
    pub fn linear(space: &Arc<VariableSpace>, vars: &[usize], coeffs: &[i64]) -> Self {
        let mut p = Self::zero(space);
        for (v, c) in vars.iter().zip(coeffs) {
            p.add_term(Monomial::var(space.len(), *v, 1), q_int(*c));
        }
        p
    }

    pub fn space(&self) -> &Arc<VariableSpace> {
        &self.space
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.terms.is_empty() {
            Some(Q::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Q {
        self.terms
            .get(&Monomial::one(self.space.len()))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Q {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.exps[v]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.exps[v] > 0)
    }

    pub fn vars_used(&self) -> Vec<bool> {
        let mut used = vec![false; self.space.len()];
        for m in self.terms.keys() {
            for (u, e) in used.iter_mut().zip(&m.exps) {
                *u |= *e > 0;
            }
        }
        used
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self -= c * m * d`, in place.
    pub(crate) fn sub_mul_term(&mut self, d: &Polynomial, m: &Monomial, c: &Q) {
        for (dm, dc) in &d.terms {
            self.add_term(dm.mul(m), -(dc * c));
        }
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(&self.space);
        }
        Self {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(&self.space);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Scale so that the leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(same_space(&self.space, &d.space), "variable-space mismatch");
        let (dm, dc) = d.leading_term()?;
        if self.is_zero() {
            return Some(Self::zero(&self.space));
        }
        if d.is_constant() {
            return Some(self.scale(&dc.recip()));
        }
        let (sm, _) = self.leading_term()?;
        if sm.degree < dm.degree || !self.could_divide(d) {
            return None;
        }
        match super::packed::div_exact(self, d) {
            Some(Some(q)) => return Some(q),
            Some(None) => return None,
            None => {}
        }
        let dc_inv = dc.recip();
        let mut r = self.clone();
        let mut q = Self::zero(&self.space);
        while let Some((m, c)) = r.leading_term() {
            let qm = m.checked_div(dm)?;
            let qc = c * &dc_inv;
            r.sub_mul_term(d, &qm, &qc);
            q.add_term(qm, qc);
        }
        Some(q)
    }

    fn could_divide(&self, d: &Self) -> bool {
        let mine = self.vars_used();
        let theirs = d.vars_used();
        for v in 0..theirs.len() {
            if theirs[v] && (!mine[v] || self.degree_in(v) < d.degree_in(v)) {
                return false;
            }
        }
        true
    }

    /// Coefficients as a polynomial in `x_v`: entry `k` is the coefficient of `x_v^k`.
    pub fn coefficients_in(&self, v: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Self::zero(&self.space); deg + 1];
        for (m, c) in &self.terms {
            let k = m.exps[v] as usize;
            out[k].terms.insert(m.with_exp(v, 0), c.clone());
        }
        out
    }

    pub fn coefficient_in(&self, v: usize, k: u32) -> Polynomial {
        let mut out = Self::zero(&self.space);
        for (m, c) in &self.terms {
            if m.exps[v] == k {
                out.terms.insert(m.with_exp(v, 0), c.clone());
            }
        }
        out
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut out = Self::zero(&self.space);
        for (m, c) in &self.terms {
            let e = m.exps[v];
            if e > 0 {
                out.add_term(m.with_exp(v, e - 1), c * q_int(e as i64));
            }
        }
        out
    }

    /// Set `x_v = c` for a rational constant `c`.
    pub fn evaluate_var(&self, v: usize, c: &Q) -> Self {
        let mut out = Self::zero(&self.space);
        let mut powers: Vec<Q> = vec![Q::one()];
        for (m, coef) in &self.terms {
            let e = m.exps[v] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * c;
                powers.push(next);
            }
            out.add_term(m.with_exp(v, 0), coef * &powers[e]);
        }
        out
    }

    /// Move into another space by variable name. Fails if a used variable
    /// has no counterpart.
    pub fn reembed(&self, target: &Arc<VariableSpace>) -> Result<Self> {
        if same_space(&self.space, target) {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self
            .space
            .names()
            .iter()
            .map(|n| target.index_of(n))
            .collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for (i, e) in m.exps.iter().enumerate() {
                if *e > 0 {
                    let j = map[i].ok_or(Error::SpaceMismatch)?;
                    exps[j] = *e;
                }
            }
            out.add_term(Monomial::from_exponents(exps), c.clone());
        }
        Ok(out)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub(crate) fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, e) in m.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.space.name(i).to_string()),
                _ => parts.push(format!("{}^{}", self.space.name(i), e)),
            }
        }
        parts.join("*")
    }
}

pub(crate) fn format_rational(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", self.format_monomial(m))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), self.format_monomial(m))?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        assert!(same_space(&self.space, &rhs.space), "variable-space mismatch");
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        assert!(same_space(&self.space, &rhs.space), "variable-space mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        assert!(same_space(&self.space, &rhs.space), "variable-space mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(&self.space);
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        if let Some(p) = super::packed::mul(self, rhs) {
            return p;
        }
        let mut acc: std::collections::HashMap<Monomial, Q> =
            std::collections::HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match acc.get_mut(&m) {
                    Some(x) => *x += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Polynomial {
            space: self.space.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &'a Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
