use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::algebra::{format_rational, same_space, RationalFunction, Substitution, VariableSpace};
use crate::error::{check_len, Error, Result};

/// Finite sum `sum_beta c_beta q^beta` over a curve lattice `Z^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NovikovSum {
    space: Arc<VariableSpace>,
    rank: usize,
    terms: BTreeMap<Vec<i64>, RationalFunction>,
}

impl NovikovSum {
    pub fn zero(space: &Arc<VariableSpace>, rank: usize) -> Self {
        Self {
            space: space.clone(),
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(space: &Arc<VariableSpace>, beta: Vec<i64>, c: RationalFunction) -> Result<Self> {
        let mut out = Self::zero(space, beta.len());
        out.add_term(beta, c)?;
        Ok(out)
    }

    pub fn constant(c: RationalFunction, rank: usize) -> Self {
        let space = c.space().clone();
        let mut out = Self::zero(&space, rank);
        out.add_term(vec![0; rank], c).expect("rank matches");
        out
    }

    pub fn space(&self) -> &Arc<VariableSpace> {
        &self.space
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<i64>, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, beta: &[i64]) -> RationalFunction {
        self.terms
            .get(beta)
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(&self.space))
    }

    pub fn add_term(&mut self, beta: Vec<i64>, c: RationalFunction) -> Result<()> {
        check_len(self.rank, beta.len())?;
        if !same_space(&self.space, c.space()) {
            return Err(Error::SpaceMismatch);
        }
        if c.is_zero() {
            return Ok(());
        }
        let sum = match self.terms.remove(&beta) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(beta, sum);
        }
        Ok(())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        check_len(self.rank, other.rank)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            space: self.space.clone(),
            rank: self.rank,
            terms: self.terms.iter().map(|(b, c)| (b.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.space, self.rank);
        for (b1, c1) in &self.terms {
            for (b2, c2) in &other.terms {
                let b: Vec<i64> = b1.iter().zip(b2).map(|(x, y)| x + y).collect();
                out.add_term(b, c1 * c2)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &RationalFunction) -> Result<Self> {
        if !same_space(&self.space, c.space()) {
            return Err(Error::SpaceMismatch);
        }
        let mut out = Self::zero(&self.space, self.rank);
        if c.is_zero() {
            return Ok(out);
        }
        for (b, x) in &self.terms {
            out.terms.insert(b.clone(), c * x);
        }
        Ok(out)
    }

    /// Multiply by `q^beta`.
    pub fn shift(&self, beta: &[i64]) -> Result<Self> {
        check_len(self.rank, beta.len())?;
        Ok(Self {
            space: self.space.clone(),
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(b, c)| (b.iter().zip(beta).map(|(x, y)| x + y).collect(), c.clone()))
                .collect(),
        })
    }

    pub fn map_coefficients(&self, f: impl Fn(&RationalFunction) -> Result<RationalFunction>) -> Result<Self> {
        let mut out = Self::zero(&self.space, self.rank);
        for (b, c) in &self.terms {
            out.add_term(b.clone(), f(c)?)?;
        }
        Ok(out)
    }

    pub fn push(&self, map: &NovikovMap) -> Result<Self> {
        check_len(map.source_rank(), self.rank)?;
        let mut out = Self::zero(&self.space, map.target_rank);
        for (b, c) in &self.terms {
            out.add_term(map.apply(b)?, c.clone())?;
        }
        Ok(out)
    }

    pub fn reembed(&self, target: &Arc<VariableSpace>) -> Result<Self> {
        let mut out = Self::zero(target, self.rank);
        for (b, c) in &self.terms {
            out.add_term(b.clone(), c.reembed(target)?)?;
        }
        Ok(out)
    }

    /// Terms whose exponent has L1 norm at most `cutoff`, and whether any
    /// term lies beyond it.
    pub fn truncate(&self, cutoff: u32) -> (Self, bool) {
        let mut out = Self::zero(&self.space, self.rank);
        let mut beyond = false;
        for (b, c) in &self.terms {
            let norm: i64 = b.iter().map(|x| x.abs()).sum();
            if norm <= i64::from(cutoff) {
                out.terms.insert(b.clone(), c.clone());
            } else {
                beyond = true;
            }
        }
        (out, beyond)
    }
}

fn format_exponent(prefix: &str, b: &[i64]) -> String {
    format!(
        "{prefix}[{}]",
        b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    )
}

impl fmt::Display for NovikovSum {
    /// Terms in descending exponent order as `(c)*q[..]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (b, c)) in self.terms.iter().rev().enumerate() {
            let q = format_exponent("q", b);
            let (neg, body) = match c.constant_value() {
                Some(x) if x.abs().is_one() => (x.is_negative(), q),
                Some(x) => (x.is_negative(), format!("{}*{q}", format_rational(&x.abs()))),
                None => (false, format!("({c})*{q}")),
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

/// Additive map `Z^source -> Z^target` given by the images of basis vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NovikovMap {
    pub target_rank: usize,
    pub images: Vec<Vec<i64>>,
}

impl NovikovMap {
    pub fn new(target_rank: usize, images: Vec<Vec<i64>>) -> Result<Self> {
        for im in &images {
            check_len(target_rank, im.len())?;
        }
        Ok(Self { target_rank, images })
    }

    pub fn identity(rank: usize) -> Self {
        let images = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect();
        Self {
            target_rank: rank,
            images,
        }
    }

    pub fn source_rank(&self) -> usize {
        self.images.len()
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn apply(&self, beta: &[i64]) -> Result<Vec<i64>> {
        check_len(self.images.len(), beta.len())?;
        let mut out = vec![0; self.target_rank];
        for (b, im) in beta.iter().zip(&self.images) {
            for (o, x) in out.iter_mut().zip(im) {
                *o += b * x;
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        for im in &self.images {
            check_len(self.target_rank, im.len())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    /// One value whose coefficients may involve the auxiliary cohomology generators.
    Global,
    /// One value per isolated fixed point.
    FixedPoints,
}

/// A class in localized equivariant cohomology with Novikov coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizedClass {
    layout: Layout,
    components: Vec<NovikovSum>,
}

impl LocalizedClass {
    pub fn global(value: NovikovSum) -> Self {
        Self {
            layout: Layout::Global,
            components: vec![value],
        }
    }

    pub fn fixed_points(values: Vec<NovikovSum>) -> Result<Self> {
        if let Some(first) = values.first() {
            for v in &values[1..] {
                first.check(v)?;
            }
        }
        Ok(Self {
            layout: Layout::FixedPoints,
            components: values,
        })
    }

    pub fn zero_like(&self) -> Self {
        Self {
            layout: self.layout,
            components: self
                .components
                .iter()
                .map(|c| NovikovSum::zero(c.space(), c.rank()))
                .collect(),
        }
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn components(&self) -> &[NovikovSum] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(NovikovSum::is_zero)
    }

    pub fn space(&self) -> Option<&Arc<VariableSpace>> {
        self.components.first().map(NovikovSum::space)
    }

    pub fn curve_rank(&self) -> Option<usize> {
        self.components.first().map(NovikovSum::rank)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::InvalidInput("class layouts differ".into()));
        }
        check_len(self.components.len(), other.components.len())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(Self {
            layout: self.layout,
            components,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.map(|c| Ok(c.neg()))?)
    }

    pub fn map(&self, f: impl Fn(&NovikovSum) -> Result<NovikovSum>) -> Result<Self> {
        Ok(Self {
            layout: self.layout,
            components: self.components.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn scale(&self, c: &RationalFunction) -> Result<Self> {
        self.map(|x| x.scale(c))
    }

    pub fn push(&self, map: &NovikovMap) -> Result<Self> {
        self.map(|x| x.push(map))
    }

    /// Apply a coefficient substitution and an exponent map, as for a Weyl
    /// element acting on classes and curve classes together.
    pub fn transform(&self, sub: &Substitution, map: &NovikovMap) -> Result<Self> {
        self.map(|x| x.map_coefficients(|c| sub.apply(c))?.push(map))
    }
}

impl fmt::Display for LocalizedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.layout {
            Layout::Global => write!(f, "{}", self.components[0]),
            Layout::FixedPoints => {
                let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
                write!(f, "[{}]", parts.join("; "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Polynomial;

    #[test]
    fn push_and_display() {
        let s = VariableSpace::standard(2, 0, &["x"]).unwrap();
        let x = RationalFunction::from_poly(Polynomial::var(&s, 3));
        let mut n = NovikovSum::zero(&s, 4);
        n.add_term(vec![1, 0, 0, 0], x.clone()).unwrap();
        n.add_term(vec![0, 0, 0, 1], -&x).unwrap();
        let map = NovikovMap::new(2, vec![vec![1, 0], vec![0, 1], vec![0, 1], vec![1, 0]]).unwrap();
        assert!(n.push(&map).unwrap().is_zero());
        assert_eq!(n.to_string(), "(x)*q[1,0,0,0] + (-x)*q[0,0,0,1]");
    }

    #[test]
    fn truncation() {
        let s = VariableSpace::standard(1, 0, &[]).unwrap();
        let one = RationalFunction::one(&s);
        let mut n = NovikovSum::constant(one.clone(), 1);
        n.add_term(vec![3], one).unwrap();
        let (t, beyond) = n.truncate(2);
        assert!(beyond);
        assert_eq!(t.num_terms(), 1);
    }
}
