//! Independent exact linear algebra for cross-checking the library.
//!
//! Deliberately naive: dense `Vec<Vec<Q>>`, row-major, no shared code with
//! `gderive::linalg`.
#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;
pub type M = Vec<Vec<Q>>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn mat(rows: &[&[i64]]) -> M {
    rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
}

pub fn zero(n: usize) -> M {
    vec![vec![Q::zero(); n]; n]
}

pub fn identity(n: usize) -> M {
    let mut m = zero(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

pub fn mul(a: &M, b: &M) -> M {
    let (n, k, p) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![Q::zero(); p]; n];
    for i in 0..n {
        for j in 0..p {
            let mut s = Q::zero();
            for t in 0..k {
                s += &a[i][t] * &b[t][j];
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn add(a: &M, b: &M) -> M {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u + v).collect()).collect()
}

pub fn sub(a: &M, b: &M) -> M {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u - v).collect()).collect()
}

pub fn scale(a: &M, k: &Q) -> M {
    a.iter().map(|r| r.iter().map(|x| x * k).collect()).collect()
}

pub fn apply(m: &M, v: &[Q]) -> Vec<Q> {
    m.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).fold(Q::zero(), |s, x| s + x)).collect()
}

pub fn column(m: &M, c: usize) -> Vec<Q> {
    m.iter().map(|r| r[c].clone()).collect()
}

pub fn is_zero(m: &M) -> bool {
    m.iter().all(|r| r.iter().all(Zero::is_zero))
}

pub fn flat(m: &M) -> Vec<Q> {
    m.iter().flatten().cloned().collect()
}

pub fn unflat(v: &[Q], n: usize) -> M {
    v.chunks(n).map(<[Q]>::to_vec).collect()
}

/// Row echelon form in place; returns the pivot columns.
fn eliminate(rows: &mut [Vec<Q>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Q::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    eliminate(&mut m).len()
}

/// Basis of `{x : A x = 0}` for `A` with `ncols` columns.
pub fn nullspace(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut m = rows.to_vec();
    let pivots = eliminate(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn inverse(a: &M) -> Option<M> {
    let n = a.len();
    let mut aug: Vec<Vec<Q>> = a.iter().zip(identity(n)).map(|(r, e)| r.iter().cloned().chain(e).collect()).collect();
    let pivots = eliminate(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn power(a: &M, k: i64) -> M {
    let base = if k < 0 { inverse(a).expect("invertible") } else { a.clone() };
    (0..k.unsigned_abs()).fold(identity(a.len()), |acc, _| mul(&acc, &base))
}

/// Dimension of a span of vectors.
pub fn span_dim(vs: &[Vec<Q>]) -> usize {
    if vs.is_empty() {
        0
    } else {
        rank(vs)
    }
}

pub fn same_span(a: &[Vec<Q>], b: &[Vec<Q>]) -> bool {
    let both: Vec<Vec<Q>> = a.iter().chain(b).cloned().collect();
    let r = span_dim(&both);
    span_dim(a) == r && span_dim(b) == r
}

pub fn intersection_dim(a: &[Vec<Q>], b: &[Vec<Q>]) -> usize {
    let both: Vec<Vec<Q>> = a.iter().chain(b).cloned().collect();
    span_dim(a) + span_dim(b) - span_dim(&both)
}

/// 1-based `(i, j, [(coeff, k)])` relation.
pub type Rel<'a> = (usize, usize, &'a [(i64, usize)]);

/// Structure constants `c[i][j][k]`, stored for all ordered pairs.
pub struct Consts {
    pub n: usize,
    pub c: Vec<Vec<Vec<Q>>>,
}

impl Consts {
    /// From 1-based `(i, j, [(coeff, k)])` with `i < j`.
    pub fn new(n: usize, rels: &[Rel]) -> Self {
        let mut c = vec![vec![vec![Q::zero(); n]; n]; n];
        for &(i, j, terms) in rels {
            for &(coef, k) in terms {
                c[i - 1][j - 1][k - 1] += q(coef);
                c[j - 1][i - 1][k - 1] -= q(coef);
            }
        }
        Consts { n, c }
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.n];
        for (xi, ci) in x.iter().zip(&self.c) {
            if xi.is_zero() {
                continue;
            }
            for (yj, cij) in y.iter().zip(ci) {
                if yj.is_zero() {
                    continue;
                }
                let w = xi * yj;
                for (o, c) in out.iter_mut().zip(cij) {
                    *o += &w * c;
                }
            }
        }
        out
    }

    pub fn e(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.n];
        v[i] = Q::one();
        v
    }

    pub fn is_automorphism(&self, s: &M) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| apply(s, &self.c[i][j]) == self.bracket(&column(s, i), &column(s, j))))
    }

    /// Components of `D[e_i,e_j] - [D e_i, σ e_j] - [τ e_i, D e_j]` over all `(i, j)`.
    pub fn residual(&self, d: &M, sigma: &M, tau: &M) -> Vec<Q> {
        self.residual_on(d, sigma, tau, false)
    }

    /// As [`Consts::residual`], optionally restricted to pairs `i < j`.
    pub fn residual_on(&self, d: &M, sigma: &M, tau: &M, upper_only: bool) -> Vec<Q> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if upper_only && i >= j {
                    continue;
                }
                let lhs = apply(d, &self.c[i][j]);
                let r1 = self.bracket(&column(d, i), &column(sigma, j));
                let r2 = self.bracket(&column(tau, i), &column(d, j));
                out.extend(lhs.iter().zip(r1).zip(r2).map(|((a, b), c)| a - b - c));
            }
        }
        out
    }

    pub fn is_derivation(&self, d: &M, sigma: &M, tau: &M) -> bool {
        self.residual(d, sigma, tau).iter().all(Zero::is_zero)
    }

    /// Linear system for `D` (row-major unknowns) given a linear residual map.
    fn system<F: Fn(&M) -> Vec<Q>>(&self, residual: F) -> Vec<Vec<Q>> {
        let n2 = self.n * self.n;
        let cols: Vec<Vec<Q>> = (0..n2)
            .map(|u| {
                let mut e = vec![Q::zero(); n2];
                e[u] = Q::one();
                residual(&unflat(&e, self.n))
            })
            .collect();
        (0..cols[0].len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
    }

    /// Basis of `Der_{σ,τ}` as flattened row-major matrices.
    pub fn derivations(&self, sigma: &M, tau: &M) -> Vec<Vec<Q>> {
        self.derivations_on(sigma, tau, false)
    }

    pub fn derivations_on(&self, sigma: &M, tau: &M, upper_only: bool) -> Vec<Vec<Q>> {
        nullspace(&self.system(|d| self.residual_on(d, sigma, tau, upper_only)), self.n * self.n)
    }

    pub fn centroid(&self) -> Vec<Vec<Q>> {
        self.centroid_on(false)
    }

    pub fn centroid_on(&self, upper_only: bool) -> Vec<Vec<Q>> {
        let sys = self.system(|d| {
            let mut out = Vec::new();
            for i in 0..self.n {
                for j in 0..self.n {
                    if upper_only && i >= j {
                        continue;
                    }
                    let lhs = apply(d, &self.c[i][j]);
                    let left = self.bracket(&column(d, i), &self.e(j));
                    let right = self.bracket(&self.e(i), &column(d, j));
                    out.extend(lhs.iter().zip(&left).map(|(a, b)| a - b));
                    out.extend(left.iter().zip(&right).map(|(a, b)| a - b));
                }
            }
            out
        });
        nullspace(&sys, self.n * self.n)
    }
}

pub fn sl2() -> Consts {
    Consts::new(3, &[(1, 2, &[(-1, 1)]), (1, 3, &[(2, 2)]), (2, 3, &[(-1, 3)])])
}

pub fn heisenberg() -> Consts {
    Consts::new(3, &[(1, 2, &[(1, 3)])])
}

/// `[e1,e2] = e2`, `[e1,e3] = 2e3`.
pub fn solvable() -> Consts {
    Consts::new(3, &[(1, 2, &[(1, 2)]), (1, 3, &[(2, 3)])])
}

/// `I + D + D²/2` for `D³ = 0`.
pub fn exp3(d: &M) -> M {
    let d2 = mul(d, d);
    assert!(is_zero(&mul(&d2, d)), "not nilpotent of index <= 3");
    add(&add(&identity(d.len()), d), &scale(&d2, &qf(1, 2)))
}

pub fn from_lib(m: &gderive::Matrix) -> M {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| m[(r, c)].clone()).collect()).collect()
}

pub fn to_lib(m: &M) -> gderive::Matrix {
    gderive::Matrix::from_rows(m.clone()).expect("rectangular")
}
