//! Seeded generators for property sweeps and benchmarks.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{q_int, Monomial, Polynomial, RationalFunction, VariableSpace};
use crate::coulomb::{basis_element, DiffOp};
use crate::gauge::{Coweight, GaugeTheory, HbarConvention, Weight};
use crate::shift::FixedPointModel;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int_vector(rng: &mut SampleRng, len: usize, bound: i64) -> Vec<i64> {
    (0..len).map(|_| rng.random_range(-bound..=bound)).collect()
}

pub fn nonzero_weight(rng: &mut SampleRng, len: usize, bound: i64) -> Weight {
    loop {
        let w = int_vector(rng, len, bound);
        if w.iter().any(|x| *x != 0) {
            return w;
        }
    }
}

pub fn coweight(rng: &mut SampleRng, rank: usize, bound: i64) -> Coweight {
    int_vector(rng, rank, bound)
}

/// Rank in `1..=max_rank`, between one and `max_weights` nonzero weights
/// with entries in `[-bound, bound]`.
pub fn theory(rng: &mut SampleRng, max_rank: usize, max_weights: usize, bound: i64) -> GaugeTheory {
    let r = rng.random_range(1..=max_rank);
    let n = rng.random_range(1..=max_weights);
    let matter = (0..n).map(|_| nonzero_weight(rng, r, bound)).collect();
    GaugeTheory::new(r, matter).expect("uniform lengths")
}

/// Polynomial in the first `nvars` variables of `space` with small integer
/// coefficients.
pub fn polynomial(rng: &mut SampleRng, space: &Arc<VariableSpace>, vars: &[usize], max_deg: u32, max_terms: usize) -> Polynomial {
    let n = rng.random_range(1..=max_terms);
    let mut p = Polynomial::zero(space);
    for _ in 0..n {
        let mut exps = vec![0u32; space.len()];
        let mut budget = rng.random_range(0..=max_deg);
        while budget > 0 && !vars.is_empty() {
            let v = vars[rng.random_range(0..vars.len())];
            exps[v] += 1;
            budget -= 1;
        }
        let c = rng.random_range(-3i64..=3);
        p.add_term(Monomial::from_exponents(exps), q_int(c));
    }
    p
}

/// Variables `a_1..a_r`, the flavour parameters and `h`.
pub fn coefficient_vars(space: &VariableSpace) -> Vec<usize> {
    let mut v: Vec<usize> = (0..space.n_equiv()).map(|i| space.equiv(i)).collect();
    v.extend((0..space.n_flavour()).map(|i| space.flavour(i)));
    v.push(space.hbar());
    v
}

pub fn nonzero_polynomial(rng: &mut SampleRng, space: &Arc<VariableSpace>, max_deg: u32, max_terms: usize) -> Polynomial {
    let vars = coefficient_vars(space);
    loop {
        let p = polynomial(rng, space, &vars, max_deg, max_terms);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Quotient of two small polynomials, the denominator being a product of
/// linear forms.
pub fn rational(rng: &mut SampleRng, space: &Arc<VariableSpace>) -> RationalFunction {
    let vars = coefficient_vars(space);
    let num = polynomial(rng, space, &vars, 2, 3);
    let mut den = Polynomial::one(space);
    for _ in 0..rng.random_range(0..=2) {
        let coeffs = nonzero_weight(rng, vars.len(), 2);
        den = &den * &Polynomial::linear(space, &vars, &coeffs);
    }
    RationalFunction::new(num, den).expect("nonzero denominator")
}

/// Random `sum c_lambda t^lambda` with polynomial coefficients.
pub fn diffop(rng: &mut SampleRng, space: &Arc<VariableSpace>, max_terms: usize, bound: i64) -> DiffOp {
    let r = space.n_equiv();
    let vars = coefficient_vars(space);
    let mut x = DiffOp::zero(space);
    for _ in 0..rng.random_range(1..=max_terms) {
        let c = polynomial(rng, space, &vars, 2, 3);
        x.add_term(coweight(rng, r, bound), RationalFunction::from_poly(c)).expect("rank matches");
    }
    x
}

/// Random operator with rational coefficients, for round-trip tests.
pub fn rational_diffop(rng: &mut SampleRng, space: &Arc<VariableSpace>, max_terms: usize, bound: i64) -> DiffOp {
    let r = space.n_equiv();
    let mut x = DiffOp::zero(space);
    for _ in 0..rng.random_range(0..=max_terms) {
        x.add_term(coweight(rng, r, bound), rational(rng, space)).expect("rank matches");
    }
    x
}

/// Either a combination of basis elements with polynomial coefficients, or
/// such a combination with one coefficient divided by a linear factor of
/// the Euler class (typically not a member), or an arbitrary operator.
pub fn element(rng: &mut SampleRng, theory: &GaugeTheory, conv: HbarConvention, space: &Arc<VariableSpace>) -> DiffOp {
    let r = theory.rank();
    match rng.random_range(0..3) {
        0 | 1 => {
            let mut x = DiffOp::zero(space);
            for _ in 0..rng.random_range(1..=3) {
                let b = basis_element(theory, &coweight(rng, r, 2), conv, space).expect("theory fits space");
                let p = RationalFunction::from_poly(nonzero_polynomial(rng, space, 1, 2));
                x = x.add(&b.scale_left(&p).expect("same space")).expect("same space");
            }
            if rng.random_bool(0.5) {
                if let Some((lambda, c)) = x.terms().next().map(|(l, c)| (l.clone(), c.clone())) {
                    let e = theory.euler_s(&lambda, conv, space).expect("theory fits space");
                    if !e.is_constant() {
                        let vars = coefficient_vars(space);
                        let factor = Polynomial::linear(space, &vars, &nonzero_weight(rng, vars.len(), 1));
                        let reduced = c.div_poly(&factor).expect("nonzero");
                        let mut y = DiffOp::zero(space);
                        for (l, d) in x.terms() {
                            y.add_term(l.clone(), if *l == lambda { reduced.clone() } else { d.clone() })
                                .expect("rank matches");
                        }
                        return y;
                    }
                }
            }
            x
        }
        _ => diffop(rng, space, 3, 2),
    }
}

/// Random model with isolated fixed points and one divisor.
pub fn model(rng: &mut SampleRng) -> FixedPointModel {
    let r = rng.random_range(1..=2);
    let n = rng.random_range(1..=3);
    let m = rng.random_range(1..=3);
    let weights: Vec<Vec<Weight>> = (0..n)
        .map(|_| (0..rng.random_range(1..=2)).map(|_| nonzero_weight(rng, r, 2)).collect())
        .collect();
    let mut sections = BTreeMap::new();
    for i in 0..r {
        let e: Vec<i64> = (0..r).map(|j| i64::from(i == j)).collect();
        sections.insert(e, (0..n).map(|_| int_vector(rng, m, 2)).collect());
    }
    let space = VariableSpace::standard(r, 0, &[]).expect("standard names");
    let vars: Vec<usize> = (0..r).collect();
    let restrictions = (0..n)
        .map(|_| Polynomial::linear(&space, &vars, &int_vector(rng, r, 2)))
        .collect();
    let pairing = int_vector(rng, m, 2);
    FixedPointModel::new(r, weights, m, &sections, vec![("D".to_string(), restrictions, pairing)])
        .expect("generated data is consistent")
}
