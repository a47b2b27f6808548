use super::DiffOp;
use crate::algebra::{specialize_zero, Polynomial};
use crate::error::{Error, Result};

pub fn commutator(x: &DiffOp, y: &DiffOp) -> Result<DiffOp> {
    x.twisted_product(y)?.sub(&y.twisted_product(x)?)
}

/// Set `h = 0` in every coefficient.
pub fn classical_limit(x: &DiffOp) -> Result<DiffOp> {
    let h = x.space().hbar();
    x.map_coefficients(|c| specialize_zero(c, h))
}

/// Product in the commutative `h = 0` algebra.
pub fn classical_product(x: &DiffOp, y: &DiffOp) -> Result<DiffOp> {
    classical_limit(&x.twisted_product(y)?)
}

/// `{x, y} = (xy - yx)/h mod h` for classical representatives.
pub fn poisson_bracket(x: &DiffOp, y: &DiffOp) -> Result<DiffOp> {
    let h = x.space().hbar();
    if x.uses_var(h) || y.uses_var(h) {
        return Err(Error::InvalidInput("Poisson bracket needs h-free coefficients".into()));
    }
    let hp = Polynomial::var(x.space(), h);
    let c = commutator(x, y)?;
    c.map_coefficients(|r| {
        let q = r.div_poly(&hp)?;
        specialize_zero(&q, h).map_err(|_| Error::Internal("commutator not divisible by h".into()))
    })
}

/// `{t^lambda, P} = (d_lambda P) t^lambda`, the directional derivative along `lambda`.
pub fn directional_derivative(p: &crate::algebra::RationalFunction, lambda: &[i64]) -> crate::algebra::RationalFunction {
    let mut out = crate::algebra::RationalFunction::zero(p.space());
    for (i, l) in lambda.iter().enumerate() {
        if *l != 0 {
            out = &out + &p.derivative(i).scale(&crate::algebra::q_int(*l));
        }
    }
    out
}
