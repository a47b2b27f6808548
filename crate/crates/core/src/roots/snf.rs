//! Smith normal form over the integers and the induced description of a
//! lattice quotient `Z^r / span(columns)`.

use serde::Serialize;

pub type IntMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// `u * a * v = d` with `u`, `v` unimodular and `d` diagonal with
/// non-negative entries, each dividing the next.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
}

pub fn smith_normal_form(a: &IntMatrix, rows: usize, cols: usize) -> Smith {
    let mut d = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let n = rows.min(cols);
    for t in 0..n {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&d, t, rows, cols) else {
                return finish(u, v, d);
            };
            swap_rows(&mut d, t, pi);
            swap_rows(&mut u, t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                let q = d[i][t].div_euclid(d[t][t]);
                if q != 0 {
                    add_row(&mut d, i, t, -q);
                    add_row(&mut u, i, t, -q);
                }
                clean &= d[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = d[t][j].div_euclid(d[t][t]);
                if q != 0 {
                    add_col(&mut d, j, t, -q);
                    add_col(&mut v, j, t, -q);
                }
                clean &= d[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // Divisibility: fold any offending row into row t and retry.
            let p = d[t][t];
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d[i][j] % p != 0));
            match bad {
                Some(i) => {
                    add_row(&mut d, t, i, 1);
                    add_row(&mut u, t, i, 1);
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            for x in d[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    finish(u, v, d)
}

fn finish(u: IntMatrix, v: IntMatrix, d: IntMatrix) -> Smith {
    Smith { u, v, d }
}

fn smallest_nonzero(d: &IntMatrix, t: usize, rows: usize, cols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..rows {
        for j in t..cols {
            if d[i][j] != 0 && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    m.swap(a, b);
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// row_i += k * row_j
fn add_row(m: &mut IntMatrix, i: usize, j: usize, k: i64) {
    let src = m[j].clone();
    for (x, s) in m[i].iter_mut().zip(src) {
        *x += k * s;
    }
}

/// col_i += k * col_j
fn add_col(m: &mut IntMatrix, i: usize, j: usize, k: i64) {
    for row in m.iter_mut() {
        row[i] += k * row[j];
    }
}

/// `Z^r / L` presented as `⊕ Z/d_i ⊕ Z^free`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeQuotient {
    /// Invariant factors greater than one.
    pub torsion: Vec<i64>,
    pub free_rank: usize,
    #[serde(skip)]
    u: IntMatrix,
    #[serde(skip)]
    torsion_rows: Vec<usize>,
    #[serde(skip)]
    free_rows: Vec<usize>,
}

impl LatticeQuotient {
    /// Quotient of `Z^r` by the span of the given vectors.
    pub fn new(r: usize, generators: &[Vec<i64>]) -> Self {
        let k = generators.len();
        let a: IntMatrix = (0..r).map(|i| generators.iter().map(|g| g[i]).collect()).collect();
        let s = smith_normal_form(&a, r, k);
        let mut torsion = Vec::new();
        let mut torsion_rows = Vec::new();
        let mut free_rows = Vec::new();
        for i in 0..r {
            let di = if i < k { s.d[i][i] } else { 0 };
            if di == 0 {
                free_rows.push(i);
            } else if di > 1 {
                torsion.push(di);
                torsion_rows.push(i);
            }
        }
        Self {
            torsion,
            free_rank: free_rows.len(),
            u: s.u,
            torsion_rows,
            free_rows,
        }
    }

    /// Image of `lambda`: torsion coordinates reduced mod `d_i`, then free coordinates.
    pub fn project(&self, lambda: &[i64]) -> Vec<i64> {
        let ul: Vec<i64> = self
            .u
            .iter()
            .map(|row| row.iter().zip(lambda).map(|(a, b)| a * b).sum())
            .collect();
        let mut out: Vec<i64> = self
            .torsion_rows
            .iter()
            .zip(&self.torsion)
            .map(|(&i, d)| ul[i].rem_euclid(*d))
            .collect();
        out.extend(self.free_rows.iter().map(|&i| ul[i]));
        out
    }

    pub fn is_identity(&self) -> bool {
        self.torsion.is_empty() && self.u == identity(self.u.len())
    }
}
