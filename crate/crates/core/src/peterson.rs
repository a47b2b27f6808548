//! Peterson-type Seidel classes on partial flag varieties `G/P`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{format_rational, Q};
use crate::error::{Error, Result};
use crate::gauge::{pair, Coweight, GaugeTheory};
use crate::roots::{Parabolic, RootDatum};

/// Formal combination of `q^{beta} sigma(v)` with `beta in pi_1(P)` (as
/// projected coordinates) and `v` a minimal coset representative (Weyl
/// index).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QhClass {
    terms: BTreeMap<(Vec<i64>, usize), Q>,
}

impl QhClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(novikov: Vec<i64>, schubert: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((novikov, schubert), Q::one());
        Self { terms }
    }

    pub fn add_term(&mut self, novikov: Vec<i64>, schubert: usize, c: Q) {
        let key = (novikov, schubert);
        let sum = self.terms.remove(&key).unwrap_or_else(Q::zero) + c;
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Vec<i64>, usize), &Q)> {
        self.terms.iter()
    }

    /// The unique term of a monomial class.
    pub fn single_term(&self) -> Option<(&Vec<i64>, usize)> {
        if self.terms.len() == 1 {
            let ((n, s), c) = self.terms.iter().next()?;
            c.is_one().then_some((n, *s))
        } else {
            None
        }
    }

    pub fn display<'a>(&'a self, datum: &'a RootDatum) -> impl fmt::Display + 'a {
        ClassDisplay { class: self, datum }
    }
}

struct ClassDisplay<'a> {
    class: &'a QhClass,
    datum: &'a RootDatum,
}

impl fmt::Display for ClassDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.class.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .class
            .terms
            .iter()
            .map(|((n, s), c)| {
                let word = one_based(&self.datum.element(*s).word);
                let q = format!("q^{n:?}*sigma({word:?})");
                if c.is_one() {
                    q
                } else {
                    format!("{}*{q}", format_rational(c))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn one_based(word: &[usize]) -> Vec<usize> {
    word.iter().map(|i| i + 1).collect()
}

/// The condition on `R_P^+`: `<alpha, lambda^->` is `0` where `w_lambda(alpha) < 0`
/// and `-1` where `w_lambda(alpha) > 0`.
pub fn is_p_allowed(datum: &RootDatum, lambda: &[i64], p: &Parabolic) -> Result<bool> {
    let (minus, w) = datum.antidominant(lambda)?;
    Ok(p.positive_roots.iter().all(|&k| {
        let alpha = &datum.positive_roots()[k];
        let value = datum.pair_root(alpha, &minus);
        if datum.is_positive(w, alpha) {
            value == -1
        } else {
            value == 0
        }
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PetersonData {
    pub allowed: bool,
    pub antidominant: Coweight,
    /// Weyl index of `w_lambda`.
    #[serde(skip)]
    pub w_lambda: usize,
    /// Projection of `lambda^-` to `pi_1(P)`.
    pub novikov: Vec<i64>,
    /// Weyl index of the minimal representative of `w_lambda W_P`.
    #[serde(skip)]
    pub schubert: usize,
}

pub fn peterson_data(datum: &RootDatum, lambda: &[i64], p: &Parabolic) -> Result<PetersonData> {
    let (minus, w) = datum.antidominant(lambda)?;
    let allowed = is_p_allowed(datum, lambda, p)?;
    let novikov = datum.pi1_parabolic(p).project(&minus);
    let (schubert, _) = datum.coset_data(p, w);
    Ok(PetersonData {
        allowed,
        antidominant: minus,
        w_lambda: w,
        novikov,
        schubert,
    })
}

/// `q^{lambda^-_P} sigma(w_lambda W_P)` if `lambda` is P-allowed, otherwise zero.
pub fn psi_flag(datum: &RootDatum, lambda: &[i64], p: &Parabolic) -> Result<QhClass> {
    let d = peterson_data(datum, lambda, p)?;
    Ok(if d.allowed {
        QhClass::monomial(d.novikov, d.schubert)
    } else {
        QhClass::zero()
    })
}

/// `-sum_{alpha>0} <alpha, lambda^-> - |R^+| + ell(w_lambda)`.
pub fn dim_cell(datum: &RootDatum, lambda: &[i64]) -> Result<i64> {
    let (minus, w) = datum.antidominant(lambda)?;
    let s: i64 = datum.positive_roots().iter().map(|a| datum.pair_root(a, &minus)).sum();
    Ok(-s - datum.positive_roots().len() as i64 + datum.element(w).length() as i64)
}

/// `dim C_lambda + dim G/P + sum_{R^+ \ R_P^+} <alpha, lambda^-> - ell_P(w_lambda)`,
/// which vanishes for P-allowed `lambda`.
pub fn virtual_dimension(datum: &RootDatum, lambda: &[i64], p: &Parabolic) -> Result<i64> {
    let (minus, w) = datum.antidominant(lambda)?;
    let n_pos = datum.positive_roots().len();
    let dim_gp = (n_pos - p.positive_roots.len()) as i64;
    let s: i64 = (0..n_pos)
        .filter(|k| !p.positive_roots.contains(k))
        .map(|k| datum.pair_root(&datum.positive_roots()[k], &minus))
        .sum();
    let (_, ell_p) = datum.coset_data(p, w);
    Ok(dim_cell(datum, lambda)? + dim_gp + s - ell_p as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

/// Least `n >= 0` such that the dual matter has trivial Euler class along
/// the whole orbit of `lambda ∓ n rho`, and the class
/// `q^{(lambda ∓ n rho)^-_P} sigma(w_lambda W_P)` (zero if not P-allowed).
pub fn matter_peterson(
    datum: &RootDatum,
    lambda: &[i64],
    p: &Parabolic,
    theory: &GaugeTheory,
    rho: &[i64],
    sign: Sign,
) -> Result<(u64, QhClass)> {
    datum.check_coweight(lambda)?;
    datum.check_coweight(rho)?;
    if theory.rank() != datum.rank() {
        return Err(Error::TheoryMismatch("theory and root datum ranks differ".into()));
    }
    for a in datum.simple_roots() {
        if pair(a, rho)? != 0 {
            return Err(Error::NotCentral(format!("{rho:?}")));
        }
    }
    let rho_pairings = theory.pairings(rho)?;
    let ok = rho_pairings.iter().all(|x| match sign {
        Sign::Positive => *x > 0,
        Sign::Negative => *x < 0,
    });
    if !ok {
        return Err(Error::SignHypothesis(format!(
            "pairings with rho are {rho_pairings:?}"
        )));
    }
    let step: i64 = match sign {
        Sign::Positive => -1,
        Sign::Negative => 1,
    };
    let orbit = datum.orbit(lambda);
    let max_pair = orbit
        .iter()
        .flat_map(|mu| theory.matter().iter().map(move |eta| pair(eta, mu).unwrap().abs()))
        .max()
        .unwrap_or(0);
    let min_rho = rho_pairings.iter().map(|x| x.abs()).min().unwrap_or(1);
    let bound = max_pair / min_rho + 1;
    let dual = theory.dualize();
    for n in 0..=bound {
        let shifted: Coweight = lambda.iter().zip(rho).map(|(l, r)| l + step * n * r).collect();
        let vanishes = datum
            .orbit(&shifted)
            .iter()
            .all(|mu| dual.d_lambda(mu).unwrap() == 0);
        if vanishes {
            let class = psi_flag(datum, &shifted, p)?;
            return Ok((n as u64, class));
        }
    }
    Err(Error::Internal("matter Peterson search exceeded its bound".into()))
}
