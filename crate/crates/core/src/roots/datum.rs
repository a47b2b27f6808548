use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::snf::{identity, mat_mul, IntMatrix, LatticeQuotient};
use crate::algebra::{q_int, Q};
use crate::error::{check_len, Error, Result};
use crate::gauge::{pair, Coweight};

pub const WEYL_GUARD: usize = 1152;
const ROOT_GUARD: usize = 600;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootDatumFile {
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
}

/// Weyl group element with a reduced word (0-based simple-reflection
/// indices, leftmost letter applied last) and its actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub word: Vec<usize>,
    /// Action on the coweight lattice `Z^r`.
    pub matrix: IntMatrix,
    pub inverse: IntMatrix,
    /// Action on simple-root coordinates.
    root_matrix: IntMatrix,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn act(&self, lambda: &[i64]) -> Coweight {
        crate::coulomb::mat_vec(&self.matrix, lambda)
    }

    /// Image of a root given in simple-root coordinates.
    pub fn act_root(&self, root: &[i64]) -> Vec<i64> {
        crate::coulomb::mat_vec(&self.root_matrix, root)
    }

    /// Action on weights, dual to the coweight action: `eta -> eta · w^{-1}`.
    pub fn act_weight(&self, eta: &[i64]) -> Vec<i64> {
        let r = eta.len();
        (0..r)
            .map(|j| (0..r).map(|i| eta[i] * self.inverse[i][j]).sum())
            .collect()
    }

    fn key(&self) -> Vec<i64> {
        self.matrix
            .iter()
            .chain(&self.root_matrix)
            .flatten()
            .copied()
            .collect()
    }
}

/// Root datum on `Z^r` given by simple roots and simple coroots. The
/// coroots may span a proper sublattice (torus factors, `GL_n`).
#[derive(Debug, Clone)]
pub struct RootDatum {
    rank: usize,
    simple_roots: Vec<Vec<i64>>,
    simple_coroots: Vec<Vec<i64>>,
    /// `cartan[i][j] = <alpha_j, alpha_i^vee>`.
    cartan: IntMatrix,
    positive_roots: Vec<Vec<i64>>,
    weyl: Vec<WeylElement>,
    index: HashMap<Vec<i64>, usize>,
    /// `right_mul[w][i]` is the index of `w s_i`.
    right_mul: Vec<Vec<usize>>,
}

/// Standard parabolic generated by a subset of simple reflections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parabolic {
    pub subset: Vec<usize>,
    /// Indices into the datum's positive roots.
    pub positive_roots: Vec<usize>,
    /// Indices into the datum's Weyl group.
    pub weyl: Vec<usize>,
    pub longest: usize,
}

impl RootDatum {
    pub fn new(rank: usize, simple_roots: Vec<Vec<i64>>, simple_coroots: Vec<Vec<i64>>) -> Result<Self> {
        check_len(simple_roots.len(), simple_coroots.len())?;
        for v in simple_roots.iter().chain(&simple_coroots) {
            check_len(rank, v.len())?;
        }
        let n = simple_roots.len();
        let cartan: IntMatrix = (0..n)
            .map(|i| (0..n).map(|j| pair(&simple_roots[j], &simple_coroots[i]).unwrap()).collect())
            .collect();
        for (i, row) in cartan.iter().enumerate() {
            if row[i] != 2 {
                return Err(Error::NotFiniteType(format!("<alpha_{0}, alpha_{0}^vee> = {1}", i + 1, row[i])));
            }
            for (j, &c) in row.iter().enumerate() {
                if i != j && (c > 0 || (c == 0) != (cartan[j][i] == 0)) {
                    return Err(Error::NotFiniteType(format!("invalid off-diagonal entry at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        let mut datum = Self {
            rank,
            simple_roots,
            simple_coroots,
            cartan,
            positive_roots: Vec::new(),
            weyl: Vec::new(),
            index: HashMap::new(),
            right_mul: Vec::new(),
        };
        datum.generate_roots()?;
        datum.generate_weyl()?;
        Ok(datum)
    }

    pub fn from_file(file: RootDatumFile) -> Result<Self> {
        Self::new(file.rank, file.simple_roots, file.simple_coroots)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: RootDatumFile = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("root datum: {e}")))?;
        Self::from_file(file)
    }

    /// `SL_2` on its coweight lattice with `alpha = (1)`, `alpha^vee = (2)`.
    pub fn sl2() -> Self {
        Self::new(1, vec![vec![1]], vec![vec![2]]).expect("valid datum")
    }

    pub fn gl2() -> Self {
        Self::new(2, vec![vec![1, -1]], vec![vec![1, -1]]).expect("valid datum")
    }

    /// Simply connected `SL_3`: coroots are the standard basis.
    pub fn sl3() -> Self {
        Self::new(2, vec![vec![2, -1], vec![-1, 2]], vec![vec![1, 0], vec![0, 1]]).expect("valid datum")
    }

    pub fn gln(n: usize) -> Self {
        let roots: Vec<Vec<i64>> = (0..n.saturating_sub(1))
            .map(|i| (0..n).map(|j| i64::from(j == i) - i64::from(j == i + 1)).collect())
            .collect();
        Self::new(n, roots.clone(), roots).expect("valid datum")
    }

    fn generate_roots(&mut self) -> Result<()> {
        let n = self.simple_roots.len();
        let mut roots: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut k = 0;
        while k < roots.len() {
            for i in 0..n {
                let b = self.reflect_root(i, &roots[k]);
                if b.iter().all(|x| *x >= 0) && !roots.contains(&b) {
                    roots.push(b);
                    if roots.len() > ROOT_GUARD {
                        return Err(Error::NotFiniteType("positive roots do not close up".into()));
                    }
                }
            }
            k += 1;
        }
        roots.sort_by_key(|r| (r.iter().sum::<i64>(), std::cmp::Reverse(r.clone())));
        self.positive_roots = roots;
        Ok(())
    }

    fn reflect_root(&self, i: usize, beta: &[i64]) -> Vec<i64> {
        let p: i64 = beta.iter().enumerate().map(|(j, b)| b * self.cartan[i][j]).sum();
        let mut out = beta.to_vec();
        out[i] -= p;
        out
    }

    fn reflection(&self, i: usize) -> WeylElement {
        let r = self.rank;
        let n = self.simple_roots.len();
        let matrix: IntMatrix = (0..r)
            .map(|a| {
                (0..r)
                    .map(|b| i64::from(a == b) - self.simple_coroots[i][a] * self.simple_roots[i][b])
                    .collect()
            })
            .collect();
        let root_matrix: IntMatrix = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| i64::from(a == b) - if a == i { self.cartan[i][b] } else { 0 })
                    .collect()
            })
            .collect();
        WeylElement {
            word: vec![i],
            inverse: matrix.clone(),
            matrix,
            root_matrix,
        }
    }

    fn generate_weyl(&mut self) -> Result<()> {
        let n = self.simple_roots.len();
        let gens: Vec<WeylElement> = (0..n).map(|i| self.reflection(i)).collect();
        let e = WeylElement {
            word: vec![],
            matrix: identity(self.rank),
            inverse: identity(self.rank),
            root_matrix: identity(n),
        };
        self.index.insert(e.key(), 0);
        self.weyl.push(e);
        let mut k = 0;
        while k < self.weyl.len() {
            let mut row = Vec::with_capacity(n);
            for g in &gens {
                let w = &self.weyl[k];
                let mut word = w.word.clone();
                word.push(g.word[0]);
                let next = WeylElement {
                    word,
                    matrix: mat_mul(&w.matrix, &g.matrix),
                    inverse: mat_mul(&g.matrix, &w.inverse),
                    root_matrix: mat_mul(&w.root_matrix, &g.root_matrix),
                };
                let key = next.key();
                match self.index.get(&key) {
                    Some(&idx) => row.push(idx),
                    None => {
                        if self.weyl.len() >= WEYL_GUARD {
                            return Err(Error::WeylGroupTooLarge(WEYL_GUARD));
                        }
                        row.push(self.weyl.len());
                        self.index.insert(key, self.weyl.len());
                        self.weyl.push(next);
                    }
                }
            }
            self.right_mul.push(row);
            k += 1;
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn semisimple_rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple_roots
    }

    pub fn simple_coroots(&self) -> &[Vec<i64>] {
        &self.simple_coroots
    }

    pub fn cartan(&self) -> &IntMatrix {
        &self.cartan
    }

    /// Positive roots in simple-root coordinates.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// A root in simple-root coordinates as a weight on `Z^r`.
    pub fn root_weight(&self, root: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.rank];
        for (c, a) in root.iter().zip(&self.simple_roots) {
            for (o, x) in out.iter_mut().zip(a) {
                *o += c * x;
            }
        }
        out
    }

    /// `<alpha, lambda>` for a root in simple-root coordinates.
    pub fn pair_root(&self, root: &[i64], lambda: &[i64]) -> i64 {
        root.iter()
            .zip(&self.simple_roots)
            .map(|(c, a)| c * pair(a, lambda).expect("rank checked"))
            .sum()
    }

    pub fn weyl(&self) -> &[WeylElement] {
        &self.weyl
    }

    pub fn element(&self, i: usize) -> &WeylElement {
        &self.weyl[i]
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    /// Index of the element with the given word (0-based letters).
    pub fn from_word(&self, word: &[usize]) -> Result<usize> {
        let mut w = 0;
        for &i in word {
            if i >= self.semisimple_rank() {
                return Err(Error::InvalidInput(format!("simple reflection {} out of range", i + 1)));
            }
            w = self.mul_simple(w, i);
        }
        Ok(w)
    }

    /// `w s_i`.
    pub fn mul_simple(&self, w: usize, i: usize) -> usize {
        self.right_mul[w][i]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let mut w = a;
        for &i in &self.weyl[b].word {
            w = self.mul_simple(w, i);
        }
        w
    }

    pub fn longest(&self) -> usize {
        (0..self.weyl.len())
            .max_by_key(|&i| self.weyl[i].length())
            .expect("identity present")
    }

    fn is_positive_root(root: &[i64]) -> bool {
        root.iter().all(|x| *x >= 0)
    }

    /// `w s_i < w`, i.e. `w(alpha_i) < 0`.
    pub fn has_right_descent(&self, w: usize, i: usize) -> bool {
        let mut e = vec![0; self.semisimple_rank()];
        e[i] = 1;
        !Self::is_positive_root(&self.weyl[w].act_root(&e))
    }

    pub fn is_positive(&self, w: usize, root: &[i64]) -> bool {
        Self::is_positive_root(&self.weyl[w].act_root(root))
    }

    pub fn check_coweight(&self, lambda: &[i64]) -> Result<()> {
        check_len(self.rank, lambda.len())
    }

    pub fn is_dominant(&self, lambda: &[i64]) -> bool {
        self.simple_roots.iter().all(|a| pair(a, lambda).unwrap() >= 0)
    }

    pub fn is_antidominant(&self, lambda: &[i64]) -> bool {
        self.simple_roots.iter().all(|a| pair(a, lambda).unwrap() <= 0)
    }

    fn reflect_coweight(&self, i: usize, lambda: &[i64]) -> Coweight {
        let p = pair(&self.simple_roots[i], lambda).unwrap();
        lambda
            .iter()
            .zip(&self.simple_coroots[i])
            .map(|(l, c)| l - p * c)
            .collect()
    }

    /// `(lambda^-, w_lambda)` with `lambda = w_lambda(lambda^-)`, `lambda^-`
    /// antidominant and `w_lambda` longest in `w_lambda Stab(lambda^-)`.
    pub fn antidominant(&self, lambda: &[i64]) -> Result<(Coweight, usize)> {
        self.check_coweight(lambda)?;
        let mut mu = lambda.to_vec();
        let mut word = Vec::new();
        while let Some(i) = (0..self.semisimple_rank()).find(|&i| pair(&self.simple_roots[i], &mu).unwrap() > 0) {
            mu = self.reflect_coweight(i, &mu);
            word.push(i);
        }
        let v = self.from_word(&word)?;
        let stab: Vec<usize> = (0..self.semisimple_rank())
            .filter(|&i| pair(&self.simple_roots[i], &mu).unwrap() == 0)
            .collect();
        let p = self.parabolic(&stab)?;
        let (minrep, _) = self.coset_data(&p, v);
        Ok((mu, self.mul(minrep, p.longest)))
    }

    pub fn dominant(&self, lambda: &[i64]) -> Result<Coweight> {
        let neg: Vec<i64> = lambda.iter().map(|x| -x).collect();
        let (m, _) = self.antidominant(&neg)?;
        Ok(m.iter().map(|x| -x).collect())
    }

    /// Coefficients of `d` in the simple coroots, if `d` lies in their
    /// rational span.
    pub fn coroot_coordinates(&self, d: &[i64]) -> Option<Vec<Q>> {
        let n = self.semisimple_rank();
        // Solve sum_i c_i cartan[i][j] = <alpha_j, d>.
        let mut m: Vec<Vec<Q>> = (0..n)
            .map(|j| {
                let mut row: Vec<Q> = (0..n).map(|i| q_int(self.cartan[i][j])).collect();
                row.push(q_int(pair(&self.simple_roots[j], d).unwrap()));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            let p = m[col][col].clone();
            for x in m[col].iter_mut() {
                *x = &*x / &p;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    let pivot_row = m[col].clone();
                    for (x, y) in m[r].iter_mut().zip(pivot_row) {
                        *x = &*x - &(&f * y);
                    }
                }
            }
        }
        let c: Vec<Q> = m.into_iter().map(|row| row[n].clone()).collect();
        for (k, dk) in d.iter().enumerate() {
            let s: Q = c
                .iter()
                .zip(&self.simple_coroots)
                .fold(Q::zero(), |acc, (ci, cv)| acc + ci * q_int(cv[k]));
            if s != q_int(*dk) {
                return None;
            }
        }
        Some(c)
    }

    /// `mu <= lambda` for dominant `lambda`: `lambda - mu^+` is a
    /// non-negative integer combination of simple coroots.
    pub fn dominance_leq(&self, mu: &[i64], lambda: &[i64]) -> Result<bool> {
        self.check_coweight(mu)?;
        self.check_coweight(lambda)?;
        if !self.is_dominant(lambda) {
            return Err(Error::UnsupportedOrder(format!("{lambda:?} is not dominant")));
        }
        let mp = self.dominant(mu)?;
        let d: Vec<i64> = lambda.iter().zip(&mp).map(|(a, b)| a - b).collect();
        Ok(match self.coroot_coordinates(&d) {
            Some(c) => c.iter().all(|x| x.is_integer() && !x.is_negative()),
            None => false,
        })
    }

    pub fn parabolic(&self, subset: &[usize]) -> Result<Parabolic> {
        let n = self.semisimple_rank();
        let mut subset = subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        if let Some(&i) = subset.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidInput(format!("simple root {} out of range", i + 1)));
        }
        let in_j = |i: usize| subset.binary_search(&i).is_ok();
        let positive_roots = (0..self.positive_roots.len())
            .filter(|&k| {
                self.positive_roots[k]
                    .iter()
                    .enumerate()
                    .all(|(i, c)| *c == 0 || in_j(i))
            })
            .collect();
        let weyl: Vec<usize> = (0..self.weyl.len())
            .filter(|&w| self.weyl[w].word.iter().all(|&i| in_j(i)))
            .collect();
        let longest = *weyl
            .iter()
            .max_by_key(|&&w| self.weyl[w].length())
            .expect("identity present");
        Ok(Parabolic {
            subset,
            positive_roots,
            weyl,
            longest,
        })
    }

    pub fn borel(&self) -> Parabolic {
        self.parabolic(&[]).expect("empty subset")
    }

    pub fn full_parabolic(&self) -> Parabolic {
        let all: Vec<usize> = (0..self.semisimple_rank()).collect();
        self.parabolic(&all).expect("all simple roots")
    }

    /// All standard parabolics, one per subset of simple roots.
    pub fn all_parabolics(&self) -> Vec<Parabolic> {
        let n = self.semisimple_rank();
        (0u32..1 << n)
            .map(|mask| {
                let s: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                self.parabolic(&s).expect("valid subset")
            })
            .collect()
    }

    /// Minimal representative of `v W_P` and its length `ell_P(v)`.
    pub fn coset_data(&self, p: &Parabolic, v: usize) -> (usize, usize) {
        let mut w = v;
        while let Some(&j) = p.subset.iter().find(|&&j| self.has_right_descent(w, j)) {
            w = self.mul_simple(w, j);
        }
        (w, self.weyl[w].length())
    }

    /// `Z^r` modulo the coroots of the Levi of `P`.
    pub fn pi1_parabolic(&self, p: &Parabolic) -> LatticeQuotient {
        let gens: Vec<Vec<i64>> = p.subset.iter().map(|&i| self.simple_coroots[i].clone()).collect();
        LatticeQuotient::new(self.rank, &gens)
    }

    /// Weyl orbit of a coweight.
    pub fn orbit(&self, lambda: &[i64]) -> Vec<Coweight> {
        let mut out: Vec<Coweight> = self.weyl.iter().map(|w| w.act(lambda)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Matter weights stable under `W` as a multiset.
    pub fn is_w_stable(&self, weights: &[Vec<i64>]) -> bool {
        let mut base = weights.to_vec();
        base.sort();
        (0..self.semisimple_rank()).all(|i| {
            let w = self.reflection(i);
            let mut img: Vec<Vec<i64>> = weights.iter().map(|e| w.act_weight(e)).collect();
            img.sort();
            img == base
        })
    }

    /// Generators `s_i` as (coweight matrix, inverse) pairs.
    pub fn generator_indices(&self) -> Vec<usize> {
        (0..self.semisimple_rank())
            .map(|i| self.from_word(&[i]).expect("in range"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_types() {
        let sl2 = RootDatum::sl2();
        assert_eq!((sl2.positive_roots().len(), sl2.weyl().len()), (1, 2));
        let gl2 = RootDatum::gl2();
        assert_eq!(gl2.root_weight(&gl2.positive_roots()[0]), vec![1, -1]);
        assert_eq!(gl2.weyl().len(), 2);
        let sl3 = RootDatum::sl3();
        assert_eq!((sl3.positive_roots().len(), sl3.weyl().len()), (3, 6));
    }

    #[test]
    fn rejects_bad_cartan() {
        let affine = RootDatum::new(2, vec![vec![2, -2], vec![-2, 2]], vec![vec![1, 0], vec![0, 1]]);
        assert!(matches!(affine, Err(Error::NotFiniteType(_))));
        let bad = RootDatum::new(1, vec![vec![1]], vec![vec![1]]);
        assert!(bad.is_err());
    }

    #[test]
    fn weyl_guard() {
        // E8 has far more than 1152 elements.
        let e8 = [
            [2, -1, 0, 0, 0, 0, 0, 0],
            [-1, 2, -1, 0, 0, 0, 0, 0],
            [0, -1, 2, -1, 0, 0, 0, 0],
            [0, 0, -1, 2, -1, 0, 0, 0],
            [0, 0, 0, -1, 2, -1, 0, -1],
            [0, 0, 0, 0, -1, 2, -1, 0],
            [0, 0, 0, 0, 0, -1, 2, 0],
            [0, 0, 0, 0, -1, 0, 0, 2],
        ];
        let roots: Vec<Vec<i64>> = e8.iter().map(|r| r.to_vec()).collect();
        let coroots: Vec<Vec<i64>> = (0..8).map(|i| (0..8).map(|j| i64::from(i == j)).collect()).collect();
        // Columns of the Cartan matrix give the roots in the fundamental coweight basis.
        let roots_t: Vec<Vec<i64>> = (0..8).map(|j| roots.iter().map(|r| r[j]).collect()).collect();
        let err = RootDatum::new(8, roots_t, coroots).unwrap_err();
        assert_eq!(err, Error::WeylGroupTooLarge(WEYL_GUARD));
    }

    #[test]
    fn antidominant_examples() {
        let sl2 = RootDatum::sl2();
        let (m, w) = sl2.antidominant(&[2]).unwrap();
        assert_eq!((m, sl2.element(w).word.clone()), (vec![-2], vec![0]));
        let (m, w) = sl2.antidominant(&[-2]).unwrap();
        assert_eq!((m, w), (vec![-2], 0));
        let gl2 = RootDatum::gl2();
        let (m, w) = gl2.antidominant(&[1, 0]).unwrap();
        assert_eq!((m, gl2.element(w).word.clone()), (vec![0, 1], vec![0]));
        let (m, w) = gl2.antidominant(&[1, 1]).unwrap();
        assert_eq!((m, gl2.element(w).word.clone()), (vec![1, 1], vec![0]));
    }

    #[test]
    fn dominance_examples() {
        let sl2 = RootDatum::sl2();
        assert!(sl2.dominance_leq(&[0], &[2]).unwrap());
        assert!(sl2.dominance_leq(&[2], &[2]).unwrap());
        assert!(sl2.dominance_leq(&[-2], &[2]).unwrap());
        assert!(!sl2.dominance_leq(&[1], &[2]).unwrap());
        assert!(matches!(sl2.dominance_leq(&[0], &[-2]), Err(Error::UnsupportedOrder(_))));
        let gl2 = RootDatum::gl2();
        assert!(!gl2.dominance_leq(&[0, 0], &[1, 0]).unwrap());
        assert!(gl2.dominance_leq(&[0, 1], &[1, 0]).unwrap());
    }

    #[test]
    fn coset_examples() {
        let sl3 = RootDatum::sl3();
        let p = sl3.parabolic(&[0]).unwrap();
        let v = sl3.from_word(&[0, 1]).unwrap();
        let (m, l) = sl3.coset_data(&p, v);
        let coset: Vec<usize> = p.weyl.iter().map(|&u| sl3.mul(v, u)).collect();
        let brute = *coset.iter().min_by_key(|&&w| sl3.element(w).length()).unwrap();
        assert_eq!((m, l), (brute, sl3.element(brute).length()));
        let sl2 = RootDatum::sl2();
        let g = sl2.full_parabolic();
        assert_eq!(sl2.coset_data(&g, 1), (0, 0));
    }

    #[test]
    fn pi1_examples() {
        let gl2 = RootDatum::gl2();
        let b = gl2.pi1_parabolic(&gl2.borel());
        assert_eq!((b.torsion.clone(), b.free_rank), (vec![], 2));
        let g = gl2.pi1_parabolic(&gl2.full_parabolic());
        assert_eq!((g.torsion.clone(), g.free_rank), (vec![], 1));
        let sl2 = RootDatum::sl2();
        let g = sl2.pi1_parabolic(&sl2.full_parabolic());
        assert_eq!((g.torsion.clone(), g.free_rank), (vec![2], 0));
    }
}
