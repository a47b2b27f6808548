//! Weights, coweights and abelian gauge-theory data: matter Euler classes
//! of the fibres over torus-fixed points of the affine Grassmannian.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use num_bigint::BigInt;

use crate::algebra::{Monomial, Polynomial, VariableSpace, Q};
use crate::error::{check_len, Error, Result};

pub type Coweight = Vec<i64>;
pub type Weight = Vec<i64>;

pub fn pair(eta: &[i64], lambda: &[i64]) -> Result<i64> {
    check_len(eta.len(), lambda.len())?;
    Ok(eta.iter().zip(lambda).map(|(a, b)| a * b).sum())
}

/// Loop-rotation weights on the fibre pieces `C_eta^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HbarConvention {
    /// `eta^m`, no loop rotation.
    Classical,
    /// `prod_{c=0}^{m-1} (eta - c h)`
    Shift0,
    /// `prod_{c=1}^{m} (eta - c h)`
    #[default]
    Shift1,
}

impl HbarConvention {
    pub const ALL: [HbarConvention; 3] = [Self::Classical, Self::Shift0, Self::Shift1];

    fn offsets(self, m: i64) -> std::ops::Range<i64> {
        match self {
            Self::Classical | Self::Shift0 => 0..m,
            Self::Shift1 => 1..m + 1,
        }
    }
}

impl FromStr for HbarConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Self::Classical),
            "shift0" => Ok(Self::Shift0),
            "shift1" => Ok(Self::Shift1),
            _ => Err(Error::InvalidInput(format!("unknown convention `{s}`"))),
        }
    }
}

impl fmt::Display for HbarConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Classical => "classical",
            Self::Shift0 => "shift0",
            Self::Shift1 => "shift1",
        })
    }
}

/// Torus of rank `r` acting on `N = sum_j C_{eta_j}`, with an optional
/// flavour torus of rank `f` acting with charges on each summand.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaugeTheory {
    rank: usize,
    matter: Vec<Weight>,
    flavour_rank: usize,
    charges: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoryFile {
    pub rank: usize,
    pub matter: Vec<Weight>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flavour: Option<FlavourFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlavourFile {
    pub rank: usize,
    pub charges: Vec<Vec<i64>>,
}

impl GaugeTheory {
    pub fn new(rank: usize, matter: Vec<Weight>) -> Result<Self> {
        let n = matter.len();
        Self::with_flavour(rank, matter, 0, vec![Vec::new(); n])
    }

    pub fn with_flavour(rank: usize, matter: Vec<Weight>, flavour_rank: usize, charges: Vec<Vec<i64>>) -> Result<Self> {
        for w in &matter {
            check_len(rank, w.len())?;
        }
        check_len(matter.len(), charges.len())?;
        for c in &charges {
            check_len(flavour_rank, c.len())?;
        }
        Ok(Self {
            rank,
            matter,
            flavour_rank,
            charges,
        })
    }

    pub fn from_file(file: TheoryFile) -> Result<Self> {
        match file.flavour {
            None => Self::new(file.rank, file.matter),
            Some(f) => Self::with_flavour(file.rank, file.matter, f.rank, f.charges),
        }
    }

    pub fn to_file(&self) -> TheoryFile {
        TheoryFile {
            rank: self.rank,
            matter: self.matter.clone(),
            flavour: (self.flavour_rank > 0).then(|| FlavourFile {
                rank: self.flavour_rank,
                charges: self.charges.clone(),
            }),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TheoryFile = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("theory: {e}")))?;
        Self::from_file(file)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matter(&self) -> &[Weight] {
        &self.matter
    }

    pub fn flavour_rank(&self) -> usize {
        self.flavour_rank
    }

    pub fn charges(&self) -> &[Vec<i64>] {
        &self.charges
    }

    /// `a1..ar, m1..mf, h` followed by `aux`.
    pub fn space(&self, aux: &[&str]) -> Arc<VariableSpace> {
        VariableSpace::standard(self.rank, self.flavour_rank, aux).expect("standard names are valid")
    }

    pub fn check_space(&self, space: &VariableSpace) -> Result<()> {
        if space.n_equiv() != self.rank || space.n_flavour() != self.flavour_rank {
            return Err(Error::TheoryMismatch(format!(
                "space {space} does not fit a theory of rank {} with flavour rank {}",
                self.rank, self.flavour_rank
            )));
        }
        Ok(())
    }

    /// The linear form `eta_j + sum_k charge_{jk} m_k`.
    pub fn weight_form(&self, j: usize, space: &Arc<VariableSpace>) -> Polynomial {
        let mut vars: Vec<usize> = (0..self.rank).map(|i| space.equiv(i)).collect();
        vars.extend((0..self.flavour_rank).map(|k| space.flavour(k)));
        let mut coeffs = self.matter[j].clone();
        coeffs.extend(&self.charges[j]);
        Polynomial::linear(space, &vars, &coeffs)
    }

    pub fn pairings(&self, lambda: &[i64]) -> Result<Vec<i64>> {
        check_len(self.rank, lambda.len())?;
        self.matter.iter().map(|w| pair(w, lambda)).collect()
    }

    /// `d_lambda = sum_j max(0, -<eta_j, lambda>)`.
    pub fn d_lambda(&self, lambda: &[i64]) -> Result<u64> {
        Ok(self
            .pairings(lambda)?
            .into_iter()
            .map(|p| (-p).max(0) as u64)
            .sum())
    }

    /// Euler class of the fibre over `t^lambda`.
    pub fn euler_s(&self, lambda: &[i64], conv: HbarConvention, space: &Arc<VariableSpace>) -> Result<Polynomial> {
        self.check_space(space)?;
        let pairings = self.pairings(lambda)?;
        let h = space.hbar();
        let mut out = Polynomial::one(space);
        let mut factors = Vec::new();
        for (j, p) in pairings.iter().enumerate() {
            let m = -p;
            if m <= 0 {
                continue;
            }
            if conv == HbarConvention::Classical {
                factors.push((j, m as u32));
                continue;
            }
            let eta = self.weight_form(j, space);
            for c in conv.offsets(m) {
                out = &out * &(&eta - &Polynomial::linear(space, &[h], &[c]));
            }
        }
        if !factors.is_empty() {
            let p = self.power_product(&factors, space);
            out = if out.is_one() { p } else { &out * &p };
        }
        Ok(out)
    }

    /// `prod_{<eta_j, lambda> = p > 0} prod_{c=0}^{p-1} (eta_j + c h)`,
    /// or `eta_j^p` classically: the positive-weight numerator.
    pub fn positive_numerator(&self, lambda: &[i64], conv: HbarConvention, space: &Arc<VariableSpace>) -> Result<Polynomial> {
        self.check_space(space)?;
        let pairings = self.pairings(lambda)?;
        let h = space.hbar();
        let mut out = Polynomial::one(space);
        let mut factors = Vec::new();
        for (j, p) in pairings.iter().enumerate() {
            if *p <= 0 {
                continue;
            }
            if conv == HbarConvention::Classical {
                factors.push((j, *p as u32));
                continue;
            }
            let eta = self.weight_form(j, space);
            for c in 0..*p {
                out = &out * &(&eta + &Polynomial::linear(space, &[h], &[c]));
            }
        }
        if !factors.is_empty() {
            let p = self.power_product(&factors, space);
            out = if out.is_one() { p } else { &out * &p };
        }
        Ok(out)
    }

    /// `prod eta_j^{e_j}` over `(j, e_j)`. Classical Euler classes are the
    /// hot loop of Seidel sweeps, so the expansion runs on a dense `i128`
    /// array indexed by all exponents but the last (the product is
    /// homogeneous) and only falls back to exact rationals on overflow or
    /// when the array would be large.
    fn power_product(&self, factors: &[(usize, u32)], space: &Arc<VariableSpace>) -> Polynomial {
        let mut vars: Vec<usize> = (0..self.rank).map(|i| space.equiv(i)).collect();
        vars.extend((0..self.flavour_rank).map(|k| space.flavour(k)));
        let n = vars.len();
        let degree: u32 = factors.iter().map(|(_, e)| e).sum();
        let side = degree as usize + 1;
        let cells = (n - 1) as u32;
        if let Some(size) = side.checked_pow(cells).filter(|s| *s <= 1 << 14) {
            if let Some(dense) = self.dense_power_product(factors, n, side, size) {
                let mut terms = BTreeMap::new();
                for (idx, c) in dense.into_iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let mut exps = vec![0u32; space.len()];
                    let mut rest = idx;
                    let mut used = 0;
                    for v in &vars[..n - 1] {
                        let e = (rest % side) as u32;
                        exps[*v] = e;
                        used += e;
                        rest /= side;
                    }
                    exps[vars[n - 1]] = degree - used;
                    terms.insert(Monomial::from_exponents(exps), Q::from_integer(BigInt::from(c)));
                }
                return Polynomial::from_sorted_terms(space, terms);
            }
        }
        let mut out = Polynomial::one(space);
        for (j, e) in factors {
            out = &out * &self.weight_form(*j, space).pow(*e);
        }
        out
    }

    fn dense_power_product(&self, factors: &[(usize, u32)], n: usize, side: usize, size: usize) -> Option<Vec<i128>> {
        let mut acc = vec![0i128; size];
        acc[0] = 1;
        let strides: Vec<usize> = (0..n - 1).map(|i| side.pow(i as u32)).collect();
        for (j, e) in factors {
            let w = self.full_weight(*j);
            for _ in 0..*e {
                let mut next = vec![0i128; size];
                for (idx, c) in acc.iter().enumerate() {
                    if *c == 0 {
                        continue;
                    }
                    for (v, a) in w.iter().enumerate() {
                        if *a == 0 {
                            continue;
                        }
                        let t = c.checked_mul(i128::from(*a))?;
                        let target = if v + 1 == n { idx } else { idx + strides[v] };
                        next[target] = next[target].checked_add(t)?;
                    }
                }
                acc = next;
            }
        }
        Some(acc)
    }

    /// No nonzero weight is a negative rational multiple of another, compared
    /// on the full gauge and flavour vectors.
    pub fn is_gluable(&self) -> bool {
        let full: Vec<Vec<i64>> = (0..self.matter.len()).map(|j| self.full_weight(j)).collect();
        for (i, x) in full.iter().enumerate() {
            if x.iter().all(|v| *v == 0) {
                continue;
            }
            for y in &full[i + 1..] {
                if y.iter().all(|v| *v == 0) {
                    continue;
                }
                if negative_multiple(x, y) {
                    return false;
                }
            }
        }
        true
    }

    fn full_weight(&self, j: usize) -> Vec<i64> {
        let mut w = self.matter[j].clone();
        w.extend(&self.charges[j]);
        w
    }

    pub fn dualize(&self) -> Self {
        Self {
            rank: self.rank,
            matter: self.matter.iter().map(|w| w.iter().map(|x| -x).collect()).collect(),
            flavour_rank: self.flavour_rank,
            charges: self.charges.iter().map(|c| c.iter().map(|x| -x).collect()).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank || self.flavour_rank != other.flavour_rank {
            return Err(Error::TheoryMismatch(format!(
                "direct sum of rank ({}, {}) and ({}, {})",
                self.rank, self.flavour_rank, other.rank, other.flavour_rank
            )));
        }
        let mut out = self.clone();
        out.matter.extend(other.matter.iter().cloned());
        out.charges.extend(other.charges.iter().cloned());
        Ok(out)
    }

    /// Rank `r + f` theory with the hatted weights `(eta_j, charges_j)`.
    pub fn flavour_embed(&self) -> Self {
        let matter = (0..self.matter.len()).map(|j| self.full_weight(j)).collect();
        Self::new(self.rank + self.flavour_rank, matter).expect("lengths agree")
    }

    /// One extra flavour coordinate under which every summand has charge 1.
    pub fn with_dilation(&self) -> Self {
        let charges = self
            .charges
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.push(1);
                c
            })
            .collect();
        Self::with_flavour(self.rank, self.matter.clone(), self.flavour_rank + 1, charges).expect("lengths agree")
    }

    /// Drop the flavour data.
    pub fn unflavoured(&self) -> Self {
        Self::new(self.rank, self.matter.clone()).expect("lengths agree")
    }

    /// Matter restricted to a subset of indices, keeping flavour charges.
    pub fn sub_theory(&self, indices: &[usize]) -> Result<Self> {
        let mut matter = Vec::new();
        let mut charges = Vec::new();
        for &i in indices {
            if i >= self.matter.len() {
                return Err(Error::SplitMismatch(format!("index {i} out of range")));
            }
            matter.push(self.matter[i].clone());
            charges.push(self.charges[i].clone());
        }
        Self::with_flavour(self.rank, matter, self.flavour_rank, charges)
    }
}

fn negative_multiple(x: &[i64], y: &[i64]) -> bool {
    // x = -k y with k > 0 iff x and y are parallel with a negative dot product.
    let n = x.len();
    for i in 0..n {
        for j in i + 1..n {
            if x[i] * y[j] != x[j] * y[i] {
                return false;
            }
        }
    }
    let dot: i64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    dot < 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adjoint_gl2() -> GaugeTheory {
        GaugeTheory::new(2, vec![vec![0, 0], vec![0, 0], vec![1, -1], vec![-1, 1]]).unwrap()
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pair(&[1, -1], &[1, 0]).unwrap(), 1);
        assert_eq!(pair(&[-1, 1], &[1, 0]).unwrap(), -1);
        assert!(pair(&[1], &[1, 0]).is_err());
    }

    #[test]
    fn d_lambda_examples() {
        assert_eq!(adjoint_gl2().d_lambda(&[1, 0]).unwrap(), 1);
        let t = GaugeTheory::new(1, vec![vec![1], vec![1]]).unwrap();
        assert_eq!(t.d_lambda(&[-2]).unwrap(), 4);
        assert_eq!(t.d_lambda(&[0]).unwrap(), 0);
    }

    #[test]
    fn euler_examples() {
        let t = GaugeTheory::new(1, vec![vec![1]]).unwrap();
        let s = t.space(&[]);
        assert_eq!(t.euler_s(&[-2], HbarConvention::Classical, &s).unwrap().to_string(), "a1^2");
        assert_eq!(t.euler_s(&[-2], HbarConvention::Shift0, &s).unwrap().to_string(), "a1^2 - a1*h");
        assert_eq!(t.euler_s(&[-2], HbarConvention::Shift1, &s).unwrap().to_string(), "a1^2 - 3*a1*h + 2*h^2");
        for conv in HbarConvention::ALL {
            assert!(t.euler_s(&[1], conv, &s).unwrap().is_one());
        }
    }

    #[test]
    fn gluable_examples() {
        let t = GaugeTheory::new(2, vec![vec![1, -1], vec![-1, 1]]).unwrap();
        assert!(!t.is_gluable());
        assert!(GaugeTheory::new(2, vec![]).unwrap().is_gluable());
        let flav = GaugeTheory::with_flavour(2, vec![vec![1, -1], vec![-1, 1], vec![0, 0]], 1, vec![vec![1], vec![1], vec![1]]).unwrap();
        assert!(flav.is_gluable());
    }

    #[test]
    fn transforms() {
        let t = GaugeTheory::new(1, vec![vec![1]]).unwrap();
        assert_eq!(t.dualize().matter(), &[vec![-1]]);
        let s = t.direct_sum(&t.dualize()).unwrap();
        assert_eq!(s.matter(), &[vec![1], vec![-1]]);
        let e = adjoint_gl2().with_dilation().flavour_embed();
        assert_eq!(e.matter(), &[vec![0, 0, 1], vec![0, 0, 1], vec![1, -1, 1], vec![-1, 1, 1]]);
        assert!(t.direct_sum(&adjoint_gl2()).is_err());
    }

    #[test]
    fn schema_round_trip() {
        let t = GaugeTheory::from_json(r#"{"rank": 1, "matter": [[1]], "flavour": {"rank": 1, "charges": [[2]]}}"#).unwrap();
        assert_eq!(t.flavour_rank(), 1);
        let again = GaugeTheory::from_file(t.to_file()).unwrap();
        assert_eq!(t, again);
        assert!(GaugeTheory::from_json(r#"{"rank": 2, "matter": [[1]]}"#).is_err());
    }
}
