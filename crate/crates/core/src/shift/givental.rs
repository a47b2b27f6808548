use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::One;

use super::class::{Layout, LocalizedClass};
use super::model::FixedPointModel;
use crate::algebra::{phi_shift, q_int, Polynomial, RationalFunction, VariableSpace, Q};
use crate::error::{check_len, Error, Result};
use crate::gauge::{pair, Weight};

/// Euler class of `Delta_lambda` of the normal bundle at an isolated fixed
/// point. A weight with `p = alpha(lambda) > 0` contributes
/// `prod_{c=0}^{p-1} (alpha + c h)`, one with `p < 0` contributes
/// `1 / prod_{c=p}^{-1} (alpha + c h)`.
pub fn euler_delta(space: &Arc<VariableSpace>, weights: &[Weight], lambda: &[i64]) -> Result<RationalFunction> {
    let f = DeltaFactors::new(space, weights, lambda)?;
    let mut num = Polynomial::constant(space, f.scalar.clone());
    let mut den = Polynomial::one(space);
    for (p, e) in &f.factors {
        if *e > 0 {
            num = &num * &p.pow(*e as u32);
        } else {
            den = &den * &p.pow((-e) as u32);
        }
    }
    RationalFunction::from_coprime(num, den)
}

/// The same Euler class as a scalar times powers of pairwise non-associate
/// linear forms `alpha + c h` (primitive, first nonzero entry positive).
/// Equal factors have already cancelled, and multiplying a reduced fraction
/// by it only needs trial division by each factor, never a gcd.
struct DeltaFactors {
    scalar: Q,
    factors: Vec<(Polynomial, i64)>,
}

impl DeltaFactors {
    fn new(space: &Arc<VariableSpace>, weights: &[Weight], lambda: &[i64]) -> Result<Self> {
        let r = lambda.len();
        if r > space.n_equiv() {
            return Err(Error::LengthMismatch {
                expected: space.n_equiv(),
                got: r,
            });
        }
        let mut vars: Vec<usize> = (0..r).collect();
        vars.push(space.hbar());
        let mut keyed: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        let mut scalar = Q::one();
        for (j, w) in weights.iter().enumerate() {
            check_len(r, w.len())?;
            if w.iter().all(|x| *x == 0) {
                return Err(Error::ZeroWeight(j + 1));
            }
            let p = pair(w, lambda)?;
            let (sign, range) = if p > 0 { (1, 0..p) } else { (-1, p..0) };
            for c in range {
                let mut key = w.clone();
                key.push(c);
                let g = key.iter().fold(0i64, |g, x| g.gcd(x));
                let g = if key.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) { -g } else { g };
                key.iter_mut().for_each(|x| *x /= g);
                scalar = if sign > 0 { scalar * q_int(g) } else { scalar / q_int(g) };
                *keyed.entry(key).or_insert(0) += sign;
            }
        }
        let factors = keyed
            .into_iter()
            .filter(|(_, e)| *e != 0)
            .map(|(key, e)| (Polynomial::linear(space, &vars, &key), e))
            .collect();
        Ok(Self { scalar, factors })
    }

    /// `c` times the class. Stays reduced: a factor either cancels against
    /// the other side of `c` or, being irreducible and distinct from every
    /// factor on the opposite side, shares nothing with it.
    fn apply(&self, c: &RationalFunction) -> Result<RationalFunction> {
        if c.is_zero() {
            return Ok(c.clone());
        }
        let (mut num, mut den) = (c.numer().clone(), c.denom().clone());
        for (f, e) in &self.factors {
            let (same, other) = if *e > 0 { (&mut num, &mut den) } else { (&mut den, &mut num) };
            for _ in 0..e.abs() {
                match other.div_exact(f) {
                    Some(q) => *other = q,
                    None => *same = &*same * f,
                }
            }
        }
        RationalFunction::from_coprime(num.scale(&self.scalar), den)
    }
}

fn at_points(model: &FixedPointModel, alpha: &LocalizedClass) -> Result<LocalizedClass> {
    let out = model.restrict(alpha)?;
    debug_assert_eq!(out.layout(), Layout::FixedPoints);
    Ok(out)
}

/// The untwisted operator: at `F_k` multiply by `q^{s(lambda,k)}` and the Euler
/// class of `Delta_lambda(N_{F_k})`.
pub fn shift_s_untwisted(model: &FixedPointModel, lambda: &[i64], alpha: &LocalizedClass) -> Result<LocalizedClass> {
    let alpha = at_points(model, alpha)?;
    let space = model.space();
    let mut values = Vec::with_capacity(model.points());
    for (k, v) in alpha.components().iter().enumerate() {
        let v = v.reembed(space)?;
        check_len(model.curve_rank(), v.rank())?;
        let e = DeltaFactors::new(space, model.tangent_weights(k), lambda)?;
        values.push(v.map_coefficients(|c| e.apply(c))?.shift(&model.section(lambda, k)?)?);
    }
    LocalizedClass::fixed_points(values)
}

/// `S_lambda = untwisted ∘ Phi_lambda`.
pub fn shift_s(model: &FixedPointModel, lambda: &[i64], alpha: &LocalizedClass) -> Result<LocalizedClass> {
    check_len(model.rank(), lambda.len())?;
    let alpha = at_points(model, alpha)?;
    let shifted = alpha.map(|v| v.map_coefficients(|c| phi_shift(c, lambda)))?;
    shift_s_untwisted(model, lambda, &shifted)
}

/// Whether `S_{lambda+mu}(a) = S_lambda(S_mu(a))` for `a` the unit and every
/// divisor class of the model.
pub fn module_check(model: &FixedPointModel, lambda: &[i64], mu: &[i64]) -> Result<bool> {
    check_len(model.rank(), lambda.len())?;
    check_len(model.rank(), mu.len())?;
    let sum: Vec<i64> = lambda.iter().zip(mu).map(|(a, b)| a + b).collect();
    let mut classes = vec![model.unit()];
    classes.extend(model.divisors().iter().map(|d| model.divisor_class(d)));
    for a in &classes {
        let lhs = shift_s(model, &sum, a)?;
        let rhs = shift_s(model, lambda, &shift_s(model, mu, a)?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Values `S_lambda(1)` as a fixed-point class.
pub fn shift_of_unit(model: &FixedPointModel, lambda: &[i64]) -> Result<LocalizedClass> {
    shift_s(model, lambda, &model.unit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_rational;
    use crate::shift::NovikovSum;

    #[test]
    fn delta_examples() {
        let s = VariableSpace::standard(1, 0, &[]).unwrap();
        let w = vec![vec![1]];
        assert_eq!(euler_delta(&s, &w, &[1]).unwrap().to_string(), "a1");
        assert!(euler_delta(&s, &w, &[0]).unwrap().is_one());
        let expect = parse_rational("1/((a1 - h)*(a1 - 2*h))", &s).unwrap();
        assert_eq!(euler_delta(&s, &w, &[-2]).unwrap(), expect);
        assert_eq!(euler_delta(&s, &[vec![0]], &[1]).unwrap_err(), Error::ZeroWeight(1));
    }

    #[test]
    fn factorwise_product_is_reduced() {
        let s = VariableSpace::standard(2, 0, &[]).unwrap();
        let weights = vec![vec![2, -2], vec![1, 1], vec![-1, -1], vec![1, -1]];
        let mut rng = crate::sample::rng(11);
        for lambda in [[2, 1], [-1, 2], [0, -3], [3, 3]] {
            let f = DeltaFactors::new(&s, &weights, &lambda).unwrap();
            let e = euler_delta(&s, &weights, &lambda).unwrap();
            for _ in 0..20 {
                let mut c = crate::sample::rational(&mut rng, &s);
                c = c.checked_div(&e).unwrap();
                assert_eq!(f.apply(&c).unwrap(), &c * &e);
            }
        }
    }

    #[test]
    fn p1_shift_of_unit() {
        let m = FixedPointModel::p1(&[1, -1], &[1, 0], "x").unwrap();
        let v = shift_of_unit(&m, &[1, 0]).unwrap();
        let s = m.space();
        let p1 = NovikovSum::monomial(s, vec![1, 0, 0], parse_rational("a1 - a2", s).unwrap()).unwrap();
        let p2 = NovikovSum::monomial(s, vec![1, 0, 1], parse_rational("1/(a2 - a1 - h)", s).unwrap()).unwrap();
        assert_eq!(v, LocalizedClass::fixed_points(vec![p1, p2]).unwrap());
        assert_eq!(shift_of_unit(&m, &[0, 0]).unwrap(), m.unit());
    }

    #[test]
    fn module_examples() {
        let m = FixedPointModel::p1(&[1, -1], &[1, 0], "x").unwrap();
        assert!(module_check(&m, &[1, 0], &[0, 1]).unwrap());
        assert!(module_check(&m, &[1, 0], &[1, 0]).unwrap());
        assert!(module_check(&m, &[0, 0], &[0, 0]).unwrap());
    }

    #[test]
    fn twisted_linearity() {
        let m = FixedPointModel::p1(&[1, -1], &[1, 0], "x").unwrap();
        let s = m.space();
        let p = parse_rational("a1^2 + x*h", s).unwrap();
        let lambda = [2, -1];
        let lhs = shift_s(&m, &lambda, &m.unit().scale(&p).unwrap()).unwrap();
        let rhs = shift_s(&m, &lambda, &m.unit()).unwrap().scale(&phi_shift(&p, &lambda).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
