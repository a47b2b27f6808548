//! Multivariate gcd over the rationals by recursive primitive
//! pseudo-remainder sequences.

use super::poly::{Monomial, Polynomial};

/// Monic gcd. `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(a.space());
    }
    if a.num_terms() == 1 || b.num_terms() == 1 {
        let m = monomial_content(a).gcd(&monomial_content(b));
        return Polynomial::term(a.space(), m, num_traits::One::one());
    }
    let ma = monomial_content(a);
    let mb = monomial_content(b);
    let mg = ma.gcd(&mb);
    let a1 = strip_monomial(a, &ma);
    let b1 = strip_monomial(b, &mb);
    let g = gcd_free(&a1, &b1);
    g.mul_monomial(&mg).monic()
}

pub fn lcm(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() || b.is_zero() {
        return Polynomial::zero(a.space());
    }
    let g = gcd(a, b);
    let q = a.div_exact(&g).expect("gcd divides");
    (&q * b).monic()
}

fn monomial_content(p: &Polynomial) -> Monomial {
    let mut it = p.terms().map(|(m, _)| m);
    let first = it.next().expect("nonzero").clone();
    it.fold(first, |acc, m| acc.gcd(m))
}

fn strip_monomial(p: &Polynomial, m: &Monomial) -> Polynomial {
    if m.is_one() {
        return p.clone();
    }
    Polynomial::from_terms(
        p.space(),
        p.terms()
            .map(|(k, c)| (k.checked_div(m).expect("content divides"), c.clone())),
    )
}

/// gcd of polynomials with no monomial factor.
fn gcd_free(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(a.space());
    }
    if a.num_terms() <= b.num_terms() {
        if b.div_exact(a).is_some() {
            return a.monic();
        }
    } else if a.div_exact(b).is_some() {
        return b.monic();
    }
    // Linear forms are irreducible.
    for (l, p) in [(a, b), (b, a)] {
        if l.total_degree() == Some(1) {
            return if p.div_exact(l).is_some() { l.monic() } else { Polynomial::one(a.space()) };
        }
    }
    let mut a = a.clone();
    let mut b = b.clone();
    // A variable present in only one argument cannot occur in the gcd, so
    // that argument may be replaced by its content in that variable.
    loop {
        let ua = a.vars_used();
        let ub = b.vars_used();
        if let Some(v) = (0..ua.len()).find(|&v| ua[v] && !ub[v]) {
            a = content_in(&a, v);
        } else if let Some(v) = (0..ub.len()).find(|&v| ub[v] && !ua[v]) {
            b = content_in(&b, v);
        } else {
            break;
        }
        if a.is_constant() || b.is_constant() {
            return Polynomial::one(a.space());
        }
    }
    let ua = a.vars_used();
    let used: Vec<usize> = (0..ua.len()).filter(|&v| ua[v]).collect();
    for &v in &used {
        if image_gcd_degree(&a, &b, v) == Some(0) {
            return gcd(&content_in(&a, v), &content_in(&b, v));
        }
    }
    let v = used
        .into_iter()
        .min_by_key(|&v| a.degree_in(v).max(b.degree_in(v)))
        .expect("non-constant");
    let ca = content_in(&a, v);
    let cb = content_in(&b, v);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = primitive_prs(pa, pb, v);
    (&c * &g).monic()
}

/// Degree in `x_v` of the gcd of `a` and `b` with every other variable set
/// to an integer, at a point where neither leading coefficient in `x_v`
/// vanishes. This bounds the degree in `x_v` of the true gcd, so a zero
/// proves the gcd is free of `x_v`. `None` if no good point was found.
fn image_gcd_degree(a: &Polynomial, b: &Polynomial, v: usize) -> Option<u32> {
    let (da, db) = (a.degree_in(v), b.degree_in(v));
    let n = a.space().len();
    for attempt in 0..3usize {
        let mut ea = a.clone();
        let mut eb = b.clone();
        for i in (0..n).filter(|&i| i != v) {
            let c = super::poly::q_int(((i * 7919 + attempt * 104_729 + 31) % 997) as i64 + 2);
            if ea.uses_var(i) {
                ea = ea.evaluate_var(i, &c);
            }
            if eb.uses_var(i) {
                eb = eb.evaluate_var(i, &c);
            }
        }
        if ea.degree_in(v) != da || eb.degree_in(v) != db {
            continue;
        }
        let (mut p, mut q) = if da >= db { (ea, eb) } else { (eb, ea) };
        while !q.is_zero() {
            if !q.uses_var(v) {
                return Some(0);
            }
            let r = pseudo_remainder(&p, &q, v);
            p = q;
            q = r;
        }
        return Some(p.degree_in(v));
    }
    None
}

/// gcd of the coefficients of `p` viewed as a polynomial in `x_v`.
pub fn content_in(p: &Polynomial, v: usize) -> Polynomial {
    let mut coeffs: Vec<Polynomial> = p
        .coefficients_in(v)
        .into_iter()
        .filter(|c| !c.is_zero())
        .collect();
    coeffs.sort_by_key(|c| c.num_terms());
    let mut g = Polynomial::zero(p.space());
    for c in &coeffs {
        g = gcd(&g, c);
        if g.is_constant() {
            return Polynomial::one(p.space());
        }
    }
    g
}

fn primitive_part_in(p: &Polynomial, v: usize) -> Polynomial {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").monic()
}

fn pseudo_remainder(p: &Polynomial, q: &Polynomial, v: usize) -> Polynomial {
    let dq = q.degree_in(v);
    let lcq = q.coefficient_in(v, dq);
    let mut r = p.clone();
    while !r.is_zero() && r.uses_var(v) && r.degree_in(v) >= dq {
        let dr = r.degree_in(v);
        let lcr = r.coefficient_in(v, dr);
        let shift = Monomial::var(p.space().len(), v, dr - dq);
        let t = (&lcr * q).mul_monomial(&shift);
        r = &(&lcq * &r) - &t;
        r = normalize_scale(&r);
    }
    r
}

/// Clear rational denominators and integer content to limit coefficient growth.
fn normalize_scale(p: &Polynomial) -> Polynomial {
    use num_integer::Integer;
    use num_rational::BigRational;
    use num_traits::{One, Zero};
    if p.is_zero() {
        return p.clone();
    }
    let l = p.denominator_lcm();
    let mut g = num_bigint::BigInt::zero();
    for (_, c) in p.terms() {
        let n = c.numer() * (&l / c.denom());
        g = g.gcd(&n);
    }
    if g.is_zero() {
        return p.clone();
    }
    let factor = BigRational::new(l, g);
    if factor.is_one() {
        p.clone()
    } else {
        p.scale(&factor)
    }
}

fn primitive_prs(p: Polynomial, q: Polynomial, v: usize) -> Polynomial {
    let (mut p, mut q) = if p.degree_in(v) >= q.degree_in(v) {
        (p, q)
    } else {
        (q, p)
    };
    if !q.uses_var(v) {
        return Polynomial::one(p.space());
    }
    loop {
        let r = pseudo_remainder(&p, &q, v);
        if r.is_zero() {
            return primitive_part_in(&q, v);
        }
        if !r.uses_var(v) {
            return Polynomial::one(p.space());
        }
        p = q;
        q = primitive_part_in(&r, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::space::VariableSpace;

    #[test]
    fn shared_linear_factor() {
        let s = VariableSpace::standard(2, 0, &[]).unwrap();
        let a1 = Polynomial::var(&s, 0);
        let a2 = Polynomial::var(&s, 1);
        let h = Polynomial::var(&s, 2);
        let f = &a1 - &a2;
        let x = &(&f * &(&a1 + &h)) * &(&a2 - &h);
        let y = &(&f * &f) * &(&a1 + &a2);
        assert_eq!(gcd(&x, &y), f.monic());
        assert!(gcd(&(&a1 + &h), &(&a1 - &h)).is_one());
    }

    #[test]
    fn monomial_factors() {
        let s = VariableSpace::standard(1, 0, &[]).unwrap();
        let a = Polynomial::var(&s, 0);
        let h = Polynomial::var(&s, 1);
        let x = &(&a * &a) * &(&a + &h);
        let y = &a * &(&(&a + &h) * &h);
        assert_eq!(gcd(&x, &y), &a * &(&a + &h));
    }

    #[test]
    fn coprime_quartics() {
        let s = VariableSpace::standard(2, 1, &[]).unwrap();
        let x = crate::parse::parse_polynomial(
            "-2*a1^2*m1^2 - 2*a1^2*h^2 + a1*a2*m1^2 + a1*a2*h^2 + a1*m1^3 + a1*m1^2*h + a1*m1*h^2 + a1*h^3 \
             + a2^2*m1^2 + a2^2*h^2 + 2*a2*m1^3 + 2*a2*m1^2*h + 2*a2*m1*h^2 + 2*a2*h^3 + m1^4 + 2*m1^3*h \
             + 2*m1^2*h^2 + 2*m1*h^3 + h^4 + 2*a1^3 - a1^2*a2 - a1^2*m1 - a1^2*h - a1*a2^2 - 2*a1*a2*m1 \
             - 2*a1*a2*h - a1*m1^2 - 2*a1*m1*h - a1*h^2 + 3/2*a1*m1 - 3*a2*m1 - 3*m1^2 + 3*m1*h",
            &s,
        )
        .unwrap();
        let f = crate::parse::parse_polynomial("a1 - 2*a2 + m1 + 2*h", &s).unwrap();
        let g = crate::parse::parse_polynomial("a1^3 - a2*m1*h + h^3 - 2*a1*a2", &s).unwrap();
        assert!(gcd(&x, &(&f * &g)).is_one());
        assert_eq!(gcd(&(&x * &f), &(&f * &g)), f.monic());
    }
}
