use super::DiffOp;
use crate::algebra::RationalFunction;
use crate::error::Result;
use crate::gauge::{GaugeTheory, HbarConvention};

/// Lift `x` to the theory flavoured by one extra dilation parameter `m`
/// (every summand has charge 1) and test whether the abelian Seidel image
/// of the lift is polynomial.
///
/// The lift of `c_lambda t^lambda` is `c_lambda ê(lambda)/e(lambda) t^lambda`,
/// where `ê` is the flavoured Euler class; its image is
/// `lift · N̂(lambda) / ê(lambda)` with `N̂` the flavoured positive-weight numerator.
pub fn largest_subspace_check(x: &DiffOp, theory: &GaugeTheory, conv: HbarConvention) -> Result<bool> {
    theory.check_space(x.space())?;
    let dil = theory.with_dilation();
    let big = x.space().with_extra_flavour(1)?;
    for (lambda, c) in x.terms() {
        let c = c.reembed(&big)?;
        let e = RationalFunction::from_poly(theory.euler_s(lambda, conv, x.space())?.reembed(&big)?);
        let e_hat = RationalFunction::from_poly(dil.euler_s(lambda, conv, &big)?);
        let n_hat = RationalFunction::from_poly(dil.positive_numerator(lambda, conv, &big)?);
        let lift = c.checked_mul(&e_hat)?.checked_div(&e)?;
        let image = lift.checked_mul(&n_hat)?.checked_div(&e_hat)?;
        if !image.is_polynomial() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Polynomial;

    #[test]
    fn glue_examples() {
        let t = GaugeTheory::new(1, vec![vec![1]]).unwrap();
        let s = t.space(&[]);
        let conv = HbarConvention::Classical;
        let a = RationalFunction::from_poly(Polynomial::var(&s, 0));
        let x = DiffOp::monomial(&s, vec![-1], a).unwrap();
        assert!(largest_subspace_check(&x, &t, conv).unwrap());
        let y = DiffOp::monomial(&s, vec![-1], RationalFunction::one(&s)).unwrap();
        assert!(!largest_subspace_check(&y, &t, conv).unwrap());
    }
}
