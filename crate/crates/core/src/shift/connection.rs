use super::assemble::OperatorTable;
use super::class::{LocalizedClass, NovikovSum};
use super::model::{Divisor, FixedPointModel};
use crate::algebra::{phi_shift, q_int, Polynomial, RationalFunction};
use crate::coulomb::DiffOp;
use crate::error::{check_len, Error, Result};
use crate::gauge::pair;

/// Quantum multiplication by a divisor `D` on the fixed-point basis:
/// `D * e_k = sum_j matrix[j][k] e_j`, together with `<D, beta>` on the
/// curve lattice.
#[derive(Debug, Clone)]
pub struct ProductTable {
    pub pairing: Vec<i64>,
    pub matrix: Vec<Vec<NovikovSum>>,
}

impl ProductTable {
    /// Classical cup product: diagonal with the fixed-point restrictions.
    pub fn classical(model: &FixedPointModel, d: &Divisor) -> Self {
        let n = model.points();
        let zero = NovikovSum::zero(model.space(), model.curve_rank());
        let matrix = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| {
                        if j == k {
                            NovikovSum::constant(d.restrictions[k].clone(), model.curve_rank())
                        } else {
                            zero.clone()
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            pairing: d.pairing.clone(),
            matrix,
        }
    }

    pub fn zero(model: &FixedPointModel) -> Self {
        let n = model.points();
        let zero = NovikovSum::zero(model.space(), model.curve_rank());
        Self {
            pairing: vec![0; model.curve_rank()],
            matrix: vec![vec![zero; n]; n],
        }
    }

    fn dim(&self) -> usize {
        self.matrix.len()
    }

    fn apply(&self, v: &[NovikovSum]) -> Result<Vec<NovikovSum>> {
        let mut out = Vec::with_capacity(self.dim());
        for row in &self.matrix {
            let mut acc = NovikovSum::zero(v[0].space(), v[0].rank());
            for (p, x) in row.iter().zip(v) {
                acc = acc.add(&p.mul(x)?)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    fn derivative(&self, v: &NovikovSum) -> Result<NovikovSum> {
        let mut out = NovikovSum::zero(v.space(), v.rank());
        for (b, c) in v.terms() {
            let k = pair(&self.pairing, b)?;
            if k != 0 {
                out.add_term(b.clone(), c.scale(&q_int(k)))?;
            }
        }
        Ok(out)
    }
}

fn coordinates(c: &LocalizedClass, n: usize) -> Result<Vec<NovikovSum>> {
    check_len(n, c.len())?;
    Ok(c.components().to_vec())
}

/// Whether `[D q d/dq + h^{-1} (D*), sum_mu c_mu S_mu] = 0` on the fixed-point
/// basis, comparing Novikov terms of L1 norm at most `cutoff`.
pub fn connection_commute_check(gamma: &DiffOp, table: &OperatorTable, product: &ProductTable, cutoff: u32) -> Result<bool> {
    let n = product.dim();
    for row in &product.matrix {
        check_len(n, row.len())?;
    }
    check_len(table.curve_rank(), product.pairing.len())?;
    let space = table.space();
    let gamma = gamma.reembed(space)?;
    let product = ProductTable {
        pairing: product.pairing.clone(),
        matrix: product
            .matrix
            .iter()
            .map(|row| row.iter().map(|p| p.reembed(space)).collect::<Result<_>>())
            .collect::<Result<_>>()?,
    };
    let h_inv = RationalFunction::from_poly(Polynomial::var(space, space.hbar())).inv()?;
    let mut undetermined = false;
    for k in 0..n {
        let mut residual = vec![NovikovSum::zero(space, table.curve_rank()); n];
        for (mu, c) in gamma.terms() {
            let cols = table.columns(mu)?;
            check_len(n, cols.len())?;
            let col_k = coordinates(&cols[k], n)?;
            let mut r = Vec::with_capacity(n);
            let p_col = product.apply(&col_k)?;
            for (v, pv) in col_k.iter().zip(&p_col) {
                r.push(product.derivative(v)?.add(&pv.scale(&h_inv)?)?);
            }
            for (j, col) in cols.iter().enumerate() {
                let phi = product.matrix[j][k].map_coefficients(|x| phi_shift(x, mu))?;
                let col_j = coordinates(col, n)?;
                for (ri, v) in r.iter_mut().zip(&col_j) {
                    *ri = ri.sub(&phi.mul(v)?.scale(&h_inv)?)?;
                }
            }
            for (acc, ri) in residual.iter_mut().zip(&r) {
                *acc = acc.add(&ri.scale(c)?)?;
            }
        }
        for v in &residual {
            let (low, beyond) = v.truncate(cutoff);
            if !low.is_zero() {
                return Ok(false);
            }
            undetermined |= beyond;
        }
    }
    if undetermined {
        return Err(Error::Undetermined(cutoff));
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_diffop;

    #[test]
    fn givental_table_commutes() {
        let m = FixedPointModel::p1(&[1, -1], &[1, 0], "x").unwrap();
        let support = vec![vec![1, 0], vec![0, 1], vec![0, 0]];
        let t = OperatorTable::from_givental(&m, &support).unwrap();
        let g = parse_diffop("a1*z[1,0] + (h - a2)*z[0,1] + 3", t.space()).unwrap();
        let d = ProductTable::classical(&m, &m.divisors()[0]);
        assert!(connection_commute_check(&g, &t, &d, 10).unwrap());
        assert!(connection_commute_check(&g, &t, &ProductTable::zero(&m), 10).unwrap());
    }

    #[test]
    fn inconsistent_product_fails() {
        let m = FixedPointModel::p1(&[1, -1], &[1, 0], "x").unwrap();
        let t = OperatorTable::from_givental(&m, &[vec![1, 0]]).unwrap();
        let g = parse_diffop("z[1,0]", t.space()).unwrap();
        let mut d = ProductTable::classical(&m, &m.divisors()[0]);
        d.pairing[2] = 2;
        assert!(!connection_commute_check(&g, &t, &d, 10).unwrap());
        assert_eq!(connection_commute_check(&g, &t, &d, 0), Err(Error::Undetermined(0)));
    }

    #[test]
    fn needs_columns() {
        let m = FixedPointModel::p1(&[1, -1], &[1, 0], "x").unwrap();
        let mut t = OperatorTable::new(m.space(), 2, 3).unwrap();
        t.insert(vec![1, 0], m.unit()).unwrap();
        let g = parse_diffop("z[1,0]", t.space()).unwrap();
        let d = ProductTable::classical(&m, &m.divisors()[0]);
        assert!(matches!(connection_commute_check(&g, &t, &d, 5), Err(Error::MissingData(_))));
    }
}
