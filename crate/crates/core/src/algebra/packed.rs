//! Integer polynomials with the exponent vector packed into one `u128`.
//!
//! Products and exact quotients of integer polynomials dominate the closure
//! and membership sweeps; in this form they avoid rational normalization
//! and vector-keyed hashing. Every routine returns `None` when the operands
//! do not fit (non-integer coefficient, too many variables, degree above
//! 255, `i128` overflow) and the caller falls back to exact rationals.
//!
//! Layout: total degree in the top 16 bits, then one byte per variable with
//! the first variable most significant, so integer order on keys is the
//! graded-lexicographic order of [`Monomial`].

use std::collections::{BTreeMap, HashMap};
use std::hash::{BuildHasherDefault, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::poly::{Monomial, Polynomial, Q};
use super::space::VariableSpace;

const DEGREE_SHIFT: u32 = 112;
const MAX_VARS: usize = 14;
const MAX_DEGREE: u32 = 255;

type Terms = Vec<(u128, i128)>;

/// Splitmix-style finalizer over the two key halves.
#[derive(Default)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for b in bytes {
            self.0 = (self.0.rotate_left(5) ^ u64::from(*b)).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
        }
    }

    fn write_u128(&mut self, k: u128) {
        let mut x = (k as u64) ^ ((k >> 64) as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        self.0 = x ^ (x >> 31);
    }
}

type KeyMap = HashMap<u128, i128, BuildHasherDefault<KeyHasher>>;

fn var_shift(i: usize) -> u32 {
    DEGREE_SHIFT - 8 * (i as u32 + 1)
}

fn pack_monomial(m: &Monomial) -> Option<u128> {
    if m.degree() > MAX_DEGREE {
        return None;
    }
    let mut key = u128::from(m.degree()) << DEGREE_SHIFT;
    for (i, e) in m.exponents().iter().enumerate() {
        key |= u128::from(*e) << var_shift(i);
    }
    Some(key)
}

fn unpack_monomial(key: u128, nvars: usize) -> Monomial {
    Monomial::from_exponents((0..nvars).map(|i| ((key >> var_shift(i)) & 0xff) as u32).collect())
}

fn degree(key: u128) -> u32 {
    (key >> DEGREE_SHIFT) as u32
}

/// Ascending terms, or `None` if `p` does not fit.
fn pack(p: &Polynomial) -> Option<Terms> {
    if p.space().len() > MAX_VARS {
        return None;
    }
    p.terms()
        .map(|(m, c)| {
            if !c.is_integer() {
                return None;
            }
            Some((pack_monomial(m)?, c.numer().to_i128()?))
        })
        .collect()
}

fn unpack(space: &Arc<VariableSpace>, terms: impl IntoIterator<Item = (u128, i128)>) -> Polynomial {
    let n = space.len();
    let map: BTreeMap<Monomial, Q> = terms
        .into_iter()
        .map(|(k, c)| (unpack_monomial(k, n), Q::from_integer(BigInt::from(c))))
        .collect();
    Polynomial::from_sorted_terms(space, map)
}

pub(super) fn mul(a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
    let pa = pack(a)?;
    let pb = pack(b)?;
    let top = |t: &Terms| t.last().map_or(0, |(k, _)| degree(*k));
    if top(&pa) + top(&pb) > MAX_DEGREE {
        return None;
    }
    let mut acc = KeyMap::with_capacity_and_hasher(pa.len() * pb.len(), Default::default());
    for (ka, ca) in &pa {
        for (kb, cb) in &pb {
            let slot = acc.entry(ka + kb).or_insert(0);
            *slot = slot.checked_add(ca.checked_mul(*cb)?)?;
        }
    }
    let mut terms: Terms = acc.into_iter().filter(|(_, c)| *c != 0).collect();
    terms.sort_unstable_by_key(|(k, _)| *k);
    Some(unpack(a.space(), terms))
}

fn divisible(m: u128, d: u128, nvars: usize) -> bool {
    (0..nvars).all(|i| (m >> var_shift(i)) & 0xff >= (d >> var_shift(i)) & 0xff)
}

/// `Some(Some(q))` for an exact integer quotient, `Some(None)` if `d` does
/// not divide `p`, `None` if the integer path cannot decide.
pub(super) fn div_exact(p: &Polynomial, d: &Polynomial) -> Option<Option<Polynomial>> {
    let pd = pack(d)?;
    let mut rem: BTreeMap<u128, i128> = pack(p)?.into_iter().collect();
    let nvars = p.space().len();
    let &(lead, lc) = pd.last()?;
    let mut quotient = Vec::new();
    while let Some((&m, &c)) = rem.last_key_value() {
        if degree(m) < degree(lead) || !divisible(m, lead, nvars) {
            return Some(None);
        }
        if c.checked_rem(lc)? != 0 {
            return None;
        }
        let (qm, qc) = (m - lead, c.checked_div(lc)?);
        for (k, dc) in &pd {
            let t = qc.checked_mul(*dc)?;
            let key = qm + k;
            let slot = rem.entry(key).or_insert(0);
            *slot = slot.checked_sub(t)?;
            if *slot == 0 {
                rem.remove(&key);
            }
        }
        quotient.push((qm, qc));
    }
    quotient.reverse();
    Some(Some(unpack(p.space(), quotient)))
}
