use std::sync::Arc;

use super::class::NovikovSum;
use crate::algebra::{Polynomial, RationalFunction, Substitution, VariableSpace};
use crate::coulomb::DiffOp;
use crate::error::Result;
use crate::gauge::{GaugeTheory, HbarConvention};

/// `(lambda, prod_{<eta_j, lambda> > 0} eta_j^{<eta_j, lambda>})` for `X = N`.
pub fn seidel_linear_rep(theory: &GaugeTheory, lambda: &[i64], space: &Arc<VariableSpace>) -> Result<(Vec<i64>, Polynomial)> {
    let p = theory.positive_numerator(lambda, HbarConvention::Classical, space)?;
    Ok((lambda.to_vec(), p))
}

/// Image of `[t^lambda]` itself: the linear representative divided by the
/// classical Euler class of `S_{t^lambda}`.
pub fn seidel_localized(theory: &GaugeTheory, lambda: &[i64], space: &Arc<VariableSpace>) -> Result<RationalFunction> {
    let (_, num) = seidel_linear_rep(theory, lambda, space)?;
    let den = theory.euler_s(lambda, HbarConvention::Classical, space)?;
    RationalFunction::new(num, den)
}

/// The classical Seidel image `sum_lambda c_lambda|_{h=0} q^lambda N_lambda / e_lambda`.
pub fn seidel_image(x: &DiffOp, theory: &GaugeTheory) -> Result<NovikovSum> {
    let space = x.space();
    theory.check_space(space)?;
    let mut sub = Substitution::new(space);
    sub.set(space.hbar(), RationalFunction::zero(space))?;
    let mut out = NovikovSum::zero(space, theory.rank());
    for (lambda, c) in x.terms() {
        let value = sub.apply(c)?.checked_mul(&seidel_localized(theory, lambda, space)?)?;
        out.add_term(lambda.clone(), value)?;
    }
    Ok(out)
}

/// `(-1)^{sum_{<eta_j, lambda> > 0} <eta_j, lambda>}`, the sign relating the
/// linear representative to the classical Euler class of the dual theory.
pub fn nn_dual_sign(theory: &GaugeTheory, lambda: &[i64]) -> Result<i64> {
    let total: i64 = theory.pairings(lambda)?.into_iter().filter(|p| *p > 0).sum();
    Ok(if total % 2 == 0 { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q_int;

    #[test]
    fn rank_one_examples() {
        let t = GaugeTheory::new(1, vec![vec![1]]).unwrap();
        let s = t.space(&[]);
        let (n, p) = seidel_linear_rep(&t, &[1], &s).unwrap();
        assert_eq!((n, p.to_string()), (vec![1], "a1".to_string()));
        let (n, p) = seidel_linear_rep(&t, &[-1], &s).unwrap();
        assert_eq!((n, p), (vec![-1], Polynomial::one(&s)));
        assert!(seidel_linear_rep(&t, &[0], &s).unwrap().1.is_one());
        assert_eq!(seidel_localized(&t, &[-2], &s).unwrap().to_string(), "(1)/(a1^2)");
    }

    #[test]
    fn dual_identity() {
        let t = GaugeTheory::new(2, vec![vec![1, 0], vec![1, -1], vec![0, 2]]).unwrap();
        let s = t.space(&[]);
        for lambda in [[1, 0], [2, -1], [-1, 3], [0, 0]] {
            let (_, p) = seidel_linear_rep(&t, &lambda, &s).unwrap();
            let e = t.dualize().euler_s(&lambda, HbarConvention::Classical, &s).unwrap();
            assert_eq!(p, e.scale(&q_int(nn_dual_sign(&t, &lambda).unwrap())));
        }
    }
}
