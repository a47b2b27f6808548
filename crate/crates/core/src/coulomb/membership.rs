use std::collections::BTreeMap;
use std::sync::Arc;

use super::DiffOp;
use crate::algebra::{divides, Polynomial, RationalFunction, VariableSpace};
use crate::error::Result;
use crate::gauge::{Coweight, GaugeTheory, HbarConvention};

/// `e(S_{t^lambda}) t^lambda`.
pub fn basis_element(theory: &GaugeTheory, lambda: &[i64], conv: HbarConvention, space: &Arc<VariableSpace>) -> Result<DiffOp> {
    let e = theory.euler_s(lambda, conv, space)?;
    DiffOp::monomial(space, lambda.to_vec(), RationalFunction::from_poly(e))
}

/// Quotients `p_lambda` with `x = sum p_lambda e(S_{t^lambda}) t^lambda`, or
/// `None` if some coefficient is not a polynomial multiple of its Euler class.
pub fn membership(x: &DiffOp, theory: &GaugeTheory, conv: HbarConvention) -> Result<Option<BTreeMap<Coweight, Polynomial>>> {
    theory.check_space(x.space())?;
    let mut witness = BTreeMap::new();
    for (lambda, c) in x.terms() {
        let Some(p) = c.as_polynomial() else {
            return Ok(None);
        };
        let e = theory.euler_s(lambda, conv, x.space())?;
        match divides(&e, p) {
            Some(q) => {
                witness.insert(lambda.clone(), q);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(witness))
}

pub fn is_member(x: &DiffOp, theory: &GaugeTheory, conv: HbarConvention) -> Result<bool> {
    Ok(membership(x, theory, conv)?.is_some())
}

/// Human-readable witness, `p·(e·z[lambda]) + ...` in descending coweight order.
pub fn format_witness(witness: &BTreeMap<Coweight, Polynomial>, theory: &GaugeTheory, conv: HbarConvention) -> Result<String> {
    if witness.is_empty() {
        return Ok("0".to_string());
    }
    let mut parts = Vec::new();
    for (lambda, p) in witness.iter().rev() {
        let e = theory.euler_s(lambda, conv, p.space())?;
        let z = format!(
            "z[{}]",
            lambda.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        );
        let basis = if e.is_one() {
            z
        } else {
            format!("{}·{z}", wrap(&e))
        };
        parts.push(format!("{}·({basis})", wrap(p)));
    }
    Ok(parts.join(" + "))
}

fn wrap(p: &Polynomial) -> String {
    if p.num_terms() > 1 {
        format!("({p})")
    } else {
        p.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theory() -> GaugeTheory {
        GaugeTheory::new(1, vec![vec![1]]).unwrap()
    }

    fn mono(space: &Arc<VariableSpace>, l: i64, c: Polynomial) -> DiffOp {
        DiffOp::monomial(space, vec![l], RationalFunction::from_poly(c)).unwrap()
    }

    #[test]
    fn membership_examples() {
        let t = theory();
        let s = t.space(&[]);
        let a = Polynomial::var(&s, 0);
        let conv = HbarConvention::Classical;
        let w = membership(&mono(&s, -1, a), &t, conv).unwrap().unwrap();
        assert_eq!(format_witness(&w, &t, conv).unwrap(), "1·(a1·z[-1])");
        assert!(!is_member(&mono(&s, -1, Polynomial::one(&s)), &t, conv).unwrap());
        assert!(is_member(&mono(&s, 2, Polynomial::one(&s)), &t, conv).unwrap());
    }

    #[test]
    fn rational_coefficient_is_not_member() {
        let t = theory();
        let s = t.space(&[]);
        let c = RationalFunction::new(Polynomial::one(&s), Polynomial::var(&s, 0)).unwrap();
        let x = DiffOp::monomial(&s, vec![3], c).unwrap();
        assert!(!is_member(&x, &t, HbarConvention::Shift1).unwrap());
    }
}
