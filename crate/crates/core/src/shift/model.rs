use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::class::{LocalizedClass, NovikovSum};
use crate::algebra::{Polynomial, RationalFunction, Substitution, VariableSpace};
use crate::error::{check_len, Error, Result};
use crate::gauge::{pair, Coweight, GaugeTheory, Weight};
use crate::parse::{parse_int_vector, parse_rational};

/// An equivariant divisor class given by its fixed-point restrictions and
/// its pairing with the curve lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    pub name: String,
    pub restrictions: Vec<RationalFunction>,
    pub pairing: Vec<i64>,
}

/// Torus action with isolated fixed points: tangent weights per point,
/// a curve lattice `Z^m` and section classes `s(lambda, k)`.
#[derive(Debug, Clone)]
pub struct FixedPointModel {
    space: Arc<VariableSpace>,
    rank: usize,
    tangent_weights: Vec<Vec<Weight>>,
    curve_rank: usize,
    /// `generators[i][k] = s(e_i, k)`.
    generators: Vec<Vec<Vec<i64>>>,
    divisors: Vec<Divisor>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub tangent_weights: Vec<Vec<Weight>>,
    pub curve_rank: usize,
    pub sections: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(default)]
    pub divisors: BTreeMap<String, DivisorFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorFile {
    pub restrictions: Vec<String>,
    pub pairing: Vec<i64>,
}

impl FixedPointModel {
    /// `sections` maps coweights to per-point curve classes. It must contain
    /// the standard basis vectors; any further entries are checked against
    /// the additive extension.
    pub fn new(
        rank: usize,
        tangent_weights: Vec<Vec<Weight>>,
        curve_rank: usize,
        sections: &BTreeMap<Coweight, Vec<Vec<i64>>>,
        divisors: Vec<(String, Vec<Polynomial>, Vec<i64>)>,
    ) -> Result<Self> {
        let n = tangent_weights.len();
        for (k, ws) in tangent_weights.iter().enumerate() {
            for w in ws {
                check_len(rank, w.len())?;
                if w.iter().all(|x| *x == 0) {
                    return Err(Error::ZeroWeight(k + 1));
                }
            }
        }
        let names: Vec<&str> = divisors.iter().map(|(name, _, _)| name.as_str()).collect();
        let space = VariableSpace::standard(rank, 0, &names)?;
        let mut generators = Vec::with_capacity(rank);
        for i in 0..rank {
            let e: Coweight = (0..rank).map(|j| i64::from(i == j)).collect();
            let g = sections
                .get(&e)
                .ok_or_else(|| Error::MissingData(format!("section classes for basis coweight {e:?}")))?;
            check_len(n, g.len())?;
            for v in g {
                check_len(curve_rank, v.len())?;
            }
            generators.push(g.clone());
        }
        let mut divs = Vec::new();
        for (name, restr, pairing) in divisors {
            check_len(n, restr.len())?;
            check_len(curve_rank, pairing.len())?;
            let restrictions = restr
                .into_iter()
                .map(|p| p.reembed(&space).map(RationalFunction::from_poly))
                .collect::<Result<_>>()?;
            divs.push(Divisor {
                name,
                restrictions,
                pairing,
            });
        }
        let model = Self {
            space,
            rank,
            tangent_weights,
            curve_rank,
            generators,
            divisors: divs,
        };
        for (lambda, given) in sections {
            check_len(rank, lambda.len())?;
            check_len(n, given.len())?;
            for (k, g) in given.iter().enumerate() {
                if model.section(lambda, k)? != *g {
                    return Err(Error::Cocycle(format!(
                        "s({lambda:?}, {}) = {:?} is not the additive extension {:?}",
                        k + 1,
                        g,
                        model.section(lambda, k)?
                    )));
                }
            }
        }
        Ok(model)
    }

    pub fn from_file(file: ModelFile) -> Result<Self> {
        check_len(file.points, file.tangent_weights.len())?;
        let rank = match file.rank {
            Some(r) => r,
            None => file
                .tangent_weights
                .iter()
                .flatten()
                .map(Vec::len)
                .next()
                .ok_or_else(|| Error::MissingData("model rank".into()))?,
        };
        let mut sections = BTreeMap::new();
        for (key, v) in &file.sections {
            sections.insert(parse_int_vector(key)?, v.clone());
        }
        let names: Vec<&str> = file.divisors.keys().map(String::as_str).collect();
        let space = VariableSpace::standard(rank, 0, &names)?;
        let mut divisors = Vec::new();
        for (name, d) in &file.divisors {
            let restr = d
                .restrictions
                .iter()
                .map(|t| {
                    let r = parse_rational(t, &space)?;
                    r.as_polynomial()
                        .cloned()
                        .ok_or_else(|| Error::InvalidInput(format!("divisor restriction `{t}` is not polynomial")))
                })
                .collect::<Result<_>>()?;
            divisors.push((name.clone(), restr, d.pairing.clone()));
        }
        Self::new(rank, file.tangent_weights, file.curve_rank, &sections, divisors)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("model: {e}")))?;
        Self::from_file(file)
    }

    pub fn to_file(&self) -> ModelFile {
        let mut sections = BTreeMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            let e: Vec<String> = (0..self.rank).map(|j| i64::from(i == j).to_string()).collect();
            sections.insert(format!("[{}]", e.join(",")), g.clone());
        }
        ModelFile {
            points: self.points(),
            rank: Some(self.rank),
            tangent_weights: self.tangent_weights.clone(),
            curve_rank: self.curve_rank,
            sections,
            divisors: self
                .divisors
                .iter()
                .map(|d| {
                    (
                        d.name.clone(),
                        DivisorFile {
                            restrictions: d.restrictions.iter().map(|r| r.to_string()).collect(),
                            pairing: d.pairing.clone(),
                        },
                    )
                })
                .collect(),
        }
    }

    /// `X = N` for an abelian theory: one fixed point with the matter
    /// weights as tangent weights and `s(lambda) = lambda`.
    pub fn linear(theory: &GaugeTheory) -> Result<Self> {
        let r = theory.rank();
        let weights: Vec<Weight> = theory
            .matter()
            .iter()
            .filter(|w| w.iter().any(|x| *x != 0))
            .cloned()
            .collect();
        let mut sections = BTreeMap::new();
        for i in 0..r {
            let e: Vec<i64> = (0..r).map(|j| i64::from(i == j)).collect();
            sections.insert(e.clone(), vec![e]);
        }
        Self::new(r, vec![weights], r, &sections, vec![])
    }

    /// `P^1` with tangent weights `u` and `-u`, curve lattice `Z^r ⊕ Z` with
    /// `s(lambda, 1) = (lambda, 0)`, `s(lambda, 2) = (lambda, <u, lambda>)`, and
    /// the divisor `name` restricting to `-l` and `-l + u`.
    pub fn p1(u: &[i64], l: &[i64], name: &str) -> Result<Self> {
        let r = u.len();
        check_len(r, l.len())?;
        let mut sections = BTreeMap::new();
        for (i, &ui) in u.iter().enumerate() {
            let e: Vec<i64> = (0..r).map(|j| i64::from(i == j)).collect();
            let mut s1 = e.clone();
            s1.push(0);
            let mut s2 = e.clone();
            s2.push(ui);
            sections.insert(e, vec![s1, s2]);
        }
        let space = VariableSpace::standard(r, 0, &[])?;
        let vars: Vec<usize> = (0..r).collect();
        let neg_l: Vec<i64> = l.iter().map(|x| -x).collect();
        let d1 = Polynomial::linear(&space, &vars, &neg_l);
        let d2 = &d1 + &Polynomial::linear(&space, &vars, u);
        let mut pairing: Vec<i64> = neg_l;
        pairing.push(1);
        Self::new(
            r,
            vec![vec![u.to_vec()], vec![u.iter().map(|x| -x).collect()]],
            r + 1,
            &sections,
            vec![(name.to_string(), vec![d1, d2], pairing)],
        )
    }

    /// Product model: fixed points are pairs, curve lattices add.
    pub fn product(&self, other: &Self) -> Result<Self> {
        check_len(self.rank, other.rank)?;
        let n1 = self.points();
        let n2 = other.points();
        let m = self.curve_rank + other.curve_rank;
        let mut weights = Vec::new();
        for i in 0..n1 {
            for j in 0..n2 {
                let mut w = self.tangent_weights[i].clone();
                w.extend(other.tangent_weights[j].iter().cloned());
                weights.push(w);
            }
        }
        let mut sections = BTreeMap::new();
        for g in 0..self.rank {
            let e: Vec<i64> = (0..self.rank).map(|j| i64::from(g == j)).collect();
            let mut per = Vec::new();
            for i in 0..n1 {
                for j in 0..n2 {
                    let mut v = self.generators[g][i].clone();
                    v.extend(&other.generators[g][j]);
                    per.push(v);
                }
            }
            sections.insert(e, per);
        }
        let mut divisors = Vec::new();
        for d in &self.divisors {
            let mut restr = Vec::new();
            for i in 0..n1 {
                for _ in 0..n2 {
                    restr.push(d.restrictions[i].numer().clone());
                }
            }
            let mut pairing = d.pairing.clone();
            pairing.extend(vec![0; other.curve_rank]);
            divisors.push((d.name.clone(), restr, pairing));
        }
        for d in &other.divisors {
            let mut restr = Vec::new();
            for _ in 0..n1 {
                for j in 0..n2 {
                    restr.push(d.restrictions[j].numer().clone());
                }
            }
            let mut pairing = vec![0; self.curve_rank];
            pairing.extend(&d.pairing);
            divisors.push((d.name.clone(), restr, pairing));
        }
        Self::new(self.rank, weights, m, &sections, divisors)
    }

    pub fn space(&self) -> &Arc<VariableSpace> {
        &self.space
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn points(&self) -> usize {
        self.tangent_weights.len()
    }

    pub fn curve_rank(&self) -> usize {
        self.curve_rank
    }

    pub fn tangent_weights(&self, k: usize) -> &[Weight] {
        &self.tangent_weights[k]
    }

    pub fn divisors(&self) -> &[Divisor] {
        &self.divisors
    }

    pub fn divisor(&self, name: &str) -> Result<&Divisor> {
        self.divisors
            .iter()
            .find(|d| d.name == name)
            .ok_or_else(|| Error::MissingData(format!("divisor `{name}`")))
    }

    /// `s(lambda, k)` by additive extension.
    pub fn section(&self, lambda: &[i64], k: usize) -> Result<Vec<i64>> {
        check_len(self.rank, lambda.len())?;
        let mut out = vec![0; self.curve_rank];
        for (l, g) in lambda.iter().zip(&self.generators) {
            for (o, x) in out.iter_mut().zip(&g[k]) {
                *o += l * x;
            }
        }
        Ok(out)
    }

    /// Tangent weight as a linear form in the model's space.
    pub fn weight_form(&self, w: &[i64]) -> Polynomial {
        let vars: Vec<usize> = (0..self.rank).collect();
        Polynomial::linear(&self.space, &vars, w)
    }

    pub fn weight_pairing(&self, w: &[i64], lambda: &[i64]) -> Result<i64> {
        pair(w, lambda)
    }

    /// The unit class.
    pub fn unit(&self) -> LocalizedClass {
        let one = NovikovSum::constant(RationalFunction::one(&self.space), self.curve_rank);
        LocalizedClass::fixed_points(vec![one; self.points()]).expect("uniform")
    }

    /// Class supported at one fixed point with value 1 there.
    pub fn point_class(&self, k: usize) -> LocalizedClass {
        let values = (0..self.points())
            .map(|j| {
                if j == k {
                    NovikovSum::constant(RationalFunction::one(&self.space), self.curve_rank)
                } else {
                    NovikovSum::zero(&self.space, self.curve_rank)
                }
            })
            .collect();
        LocalizedClass::fixed_points(values).expect("uniform")
    }

    pub fn divisor_class(&self, d: &Divisor) -> LocalizedClass {
        let values = d
            .restrictions
            .iter()
            .map(|r| NovikovSum::constant(r.clone(), self.curve_rank))
            .collect();
        LocalizedClass::fixed_points(values).expect("uniform")
    }

    /// Fixed-point values of a global class by substituting each divisor
    /// generator by its restriction.
    pub fn restrict(&self, class: &LocalizedClass) -> Result<LocalizedClass> {
        use super::class::Layout;
        match class.layout() {
            Layout::FixedPoints => {
                check_len(self.points(), class.len())?;
                Ok(class.clone())
            }
            Layout::Global => {
                let value = class.components()[0].reembed(&self.space)?;
                let mut values = Vec::new();
                for k in 0..self.points() {
                    let mut sub = Substitution::new(&self.space);
                    for (i, d) in self.divisors.iter().enumerate() {
                        sub.set(self.space.aux(i), d.restrictions[k].clone())?;
                    }
                    values.push(value.map_coefficients(|c| sub.apply(c))?);
                }
                LocalizedClass::fixed_points(values)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_sections() {
        let m = FixedPointModel::p1(&[1, -1], &[1, 0], "x").unwrap();
        assert_eq!(m.section(&[2, 1], 0).unwrap(), vec![2, 1, 0]);
        assert_eq!(m.section(&[2, 1], 1).unwrap(), vec![2, 1, 1]);
        assert_eq!(m.divisors()[0].restrictions[1].to_string(), "-a2");
        assert_eq!(m.divisors()[0].pairing, vec![-1, 0, 1]);
    }

    #[test]
    fn cocycle_violation() {
        let mut sections = BTreeMap::new();
        sections.insert(vec![1], vec![vec![1]]);
        sections.insert(vec![2], vec![vec![3]]);
        let err = FixedPointModel::new(1, vec![vec![vec![1]]], 1, &sections, vec![]).unwrap_err();
        assert!(matches!(err, Error::Cocycle(_)));
    }

    #[test]
    fn zero_weight_rejected() {
        let mut sections = BTreeMap::new();
        sections.insert(vec![1], vec![vec![1]]);
        let err = FixedPointModel::new(1, vec![vec![vec![0]]], 1, &sections, vec![]).unwrap_err();
        assert_eq!(err, Error::ZeroWeight(1));
    }

    #[test]
    fn json_round_trip() {
        let m = FixedPointModel::p1(&[1, -1], &[1, 0], "x").unwrap();
        let text = serde_json::to_string(&m.to_file()).unwrap();
        let again = FixedPointModel::from_json(&text).unwrap();
        assert_eq!(again.section(&[1, 3], 1).unwrap(), m.section(&[1, 3], 1).unwrap());
        assert_eq!(again.divisors(), m.divisors());
    }
}
