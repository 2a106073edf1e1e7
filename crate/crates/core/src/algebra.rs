//! Algebras given by structure constants, and their automorphisms.
//!
//! Only brackets `[e_i, e_j]` with `i < j` are stored; the rest follow from
//! antisymmetry. Indices are 0-based in the API and 1-based in files and
//! reports.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{format_rational, is_zero_vec, parse_rational, rat, unit, Matrix, Rational, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    structure: BTreeMap<(usize, usize), Vec<Rational>>,
    lie_validated: bool,
}

#[derive(Serialize, Deserialize)]
struct AlgebraFile {
    name: String,
    dim: usize,
    brackets: Vec<BracketEntry>,
}

#[derive(Serialize, Deserialize)]
struct BracketEntry {
    left: usize,
    right: usize,
    result: Vec<(String, usize)>,
}

/// A basis triple on which the Jacobi identity fails, with its residual
/// `[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiViolation {
    pub triple: [usize; 3],
    pub residual: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct JacobiReport {
    pub algebra: String,
    pub violations: Vec<JacobiViolation>,
}

impl JacobiReport {
    pub fn is_lie(&self) -> bool {
        self.violations.is_empty()
    }
}

impl LieAlgebra {
    /// Builds an unvalidated algebra from 0-based brackets `[e_i, e_j] = v`.
    /// Pairs with `i > j` are stored negated; `i == j` must be zero.
    pub fn new<I>(name: impl Into<String>, dim: usize, brackets: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Vec<Rational>)>,
    {
        let mut structure = BTreeMap::new();
        for ((i, j), v) in brackets {
            if i >= dim || j >= dim {
                return Err(Error::DimensionMismatch { expected: dim, found: i.max(j) + 1 });
            }
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
            }
            if i == j {
                if !is_zero_vec(&v) {
                    return Err(Error::Parse(format!("bracket [e{0}, e{0}] must vanish", i + 1)));
                }
                continue;
            }
            let (key, v) = if i < j { ((i, j), v) } else { ((j, i), v.iter().map(|x| -x).collect()) };
            if !is_zero_vec(&v) {
                structure.insert(key, v);
            }
        }
        Ok(LieAlgebra { name: name.into(), dim, structure, lie_validated: false })
    }

    /// Abelian algebra of dimension `n`.
    pub fn abelian(n: usize) -> Self {
        LieAlgebra { name: format!("abelian({n})"), dim: n, structure: BTreeMap::new(), lie_validated: true }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: AlgebraFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut brackets = Vec::new();
        for b in f.brackets {
            if b.left == 0 || b.right == 0 || b.left >= b.right {
                return Err(Error::Parse(format!(
                    "bracket indices must satisfy 1 <= left < right, got ({}, {})",
                    b.left, b.right
                )));
            }
            let mut v = vec![Rational::zero(); f.dim];
            for (coeff, k) in b.result {
                if k == 0 || k > f.dim {
                    return Err(Error::Parse(format!("basis index {k} out of range 1..={}", f.dim)));
                }
                v[k - 1] += parse_rational(&coeff)?;
            }
            brackets.push(((b.left - 1, b.right - 1), v));
        }
        LieAlgebra::new(f.name, f.dim, brackets)
    }

    pub fn to_json(&self) -> String {
        let brackets = self
            .structure
            .iter()
            .map(|(&(i, j), v)| BracketEntry {
                left: i + 1,
                right: j + 1,
                result: v
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (format_rational(c), k + 1))
                    .collect(),
            })
            .collect();
        let f = AlgebraFile { name: self.name.clone(), dim: self.dim, brackets };
        serde_json::to_string_pretty(&f).expect("algebra serializes")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_validated(&self) -> bool {
        self.lie_validated
    }

    /// Stored relations `[e_i, e_j]` with `i < j` (0-based), zero brackets omitted.
    pub fn relations(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<Rational>)> {
        self.structure.iter()
    }

    /// Structure constant vector of `[e_i, e_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<Rational> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => {
                self.structure.get(&(i, j)).cloned().unwrap_or_else(|| vec![Rational::zero(); self.dim])
            }
            std::cmp::Ordering::Greater => match self.structure.get(&(j, i)) {
                Some(v) => v.iter().map(|x| -x).collect(),
                None => vec![Rational::zero(); self.dim],
            },
            std::cmp::Ordering::Equal => vec![Rational::zero(); self.dim],
        }
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
            }
        }
        Ok(self.br(x, y))
    }

    /// Bracket without length checks; callers guarantee `dim`-length inputs.
    pub(crate) fn br(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (&(i, j), v) in &self.structure {
            let c = &x[i] * &y[j] - &x[j] * &y[i];
            if c.is_zero() {
                continue;
            }
            for (o, s) in out.iter_mut().zip(v) {
                if !s.is_zero() {
                    *o += &c * s;
                }
            }
        }
        out
    }

    /// Jacobi check on all basis triples `i < j < k`.
    pub fn jacobi_report(&self) -> JacobiReport {
        let n = self.dim;
        let mut violations = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (ei, ej, ek) = (unit(n, i), unit(n, j), unit(n, k));
                    let a = self.br(&ei, &self.basis_bracket(j, k));
                    let b = self.br(&ej, &self.basis_bracket(k, i));
                    let c = self.br(&ek, &self.basis_bracket(i, j));
                    let r: Vec<Rational> = (0..n).map(|t| &a[t] + &b[t] + &c[t]).collect();
                    if !is_zero_vec(&r) {
                        violations.push(JacobiViolation {
                            triple: [i + 1, j + 1, k + 1],
                            residual: r.iter().map(format_rational).collect(),
                        });
                    }
                }
            }
        }
        JacobiReport { algebra: self.name.clone(), violations }
    }

    /// Runs the Jacobi check and marks the algebra validated when it passes.
    pub fn validate_lie(&mut self) -> JacobiReport {
        let report = self.jacobi_report();
        self.lie_validated = report.is_lie();
        report
    }

    pub fn validated(mut self) -> Result<Self> {
        if self.validate_lie().is_lie() {
            Ok(self)
        } else {
            Err(Error::NotLie(self.name))
        }
    }

    /// Matrix of `y -> [x, y]`.
    pub fn ad(&self, x: &[Rational]) -> Result<Matrix> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        let cols: Vec<Vec<Rational>> = (0..self.dim).map(|j| self.br(x, &unit(self.dim, j))).collect();
        Matrix::from_columns(self.dim, &cols)
    }

    pub fn center(&self) -> Subspace {
        let n = self.dim;
        // Column i stacks [e_i, e_j] over all j.
        let cols: Vec<Vec<Rational>> =
            (0..n).map(|i| (0..n).flat_map(|j| self.basis_bracket(i, j)).collect()).collect();
        Matrix::from_columns(n * n, &cols).expect("consistent sizes").kernel()
    }

    pub fn centralizer(&self, x: &[Rational]) -> Result<Subspace> {
        Ok(self.ad(x)?.kernel())
    }

    pub fn derived_subalgebra(&self) -> Subspace {
        Subspace::span(self.dim, self.structure.values().cloned().collect()).expect("structure vectors have length dim")
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subalgebra().dim() == self.dim
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.is_empty()
    }

    /// True iff `m` is invertible and preserves every basis bracket.
    pub fn is_automorphism(&self, m: &Matrix) -> bool {
        let n = self.dim;
        if m.rows() != n || m.cols() != n || !m.is_invertible() {
            return false;
        }
        let images: Vec<Vec<Rational>> = (0..n).map(|i| m.column(i)).collect();
        for i in 0..n {
            for j in i + 1..n {
                if m.mul_vec(&self.basis_bracket(i, j)) != self.br(&images[i], &images[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// The subalgebra on `h`, written in the canonical basis of `h`.
    pub fn subalgebra(&self, h: &Subspace) -> Result<LieAlgebra> {
        if h.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: h.ambient_dim() });
        }
        let b = h.basis();
        let mut brackets = Vec::new();
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                let v = self.br(&b[i], &b[j]);
                let coords = h.coordinates(&v)?.ok_or(Error::NotInSubspace)?;
                brackets.push(((i, j), coords));
            }
        }
        let mut sub = LieAlgebra::new(format!("{}|sub", self.name), b.len(), brackets)?;
        sub.lie_validated = self.lie_validated;
        Ok(sub)
    }

    /// Catalog: `sl2`, `heisenberg`, `solvable`, `abelian(n)`.
    pub fn builtin(name: &str) -> Result<Self> {
        let v = |c: &[i64]| c.iter().map(|&x| rat(x)).collect::<Vec<_>>();
        let g = match name {
            "sl2" => LieAlgebra::new(
                "sl2",
                3,
                [((0, 1), v(&[-1, 0, 0])), ((0, 2), v(&[0, 2, 0])), ((1, 2), v(&[0, 0, -1]))],
            )?,
            "heisenberg" => LieAlgebra::new("heisenberg", 3, [((0, 1), v(&[0, 0, 1]))])?,
            "solvable" => LieAlgebra::new("solvable", 3, [((0, 1), v(&[0, 1, 0])), ((0, 2), v(&[0, 0, 2]))])?,
            _ => {
                let n = name
                    .strip_prefix("abelian(")
                    .and_then(|s| s.strip_suffix(')'))
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| Error::UnknownName(name.to_string()))?;
                return Ok(LieAlgebra::abelian(n));
            }
        };
        g.validated()
    }
}

/// An automorphism of a validated algebra, stored with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    matrix: Matrix,
    inverse: Matrix,
}

impl Automorphism {
    pub fn new(g: &LieAlgebra, m: Matrix) -> Result<Self> {
        if !g.is_automorphism(&m) {
            return Err(Error::UnvalidatedAutomorphism { algebra: g.name.clone() });
        }
        let inverse = m.inverse()?;
        Ok(Automorphism { matrix: m, inverse })
    }

    pub fn identity(n: usize) -> Self {
        Automorphism { matrix: Matrix::identity(n), inverse: Matrix::identity(n) }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.inverse
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism { matrix: self.inverse.clone(), inverse: self.matrix.clone() }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism { matrix: &self.matrix * &other.matrix, inverse: &other.inverse * &self.inverse }
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, k: i64) -> Automorphism {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let e = k.unsigned_abs() as u32;
        Automorphism { matrix: base.matrix.pow(e).expect("square"), inverse: base.inverse.pow(e).expect("square") }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == Matrix::identity(self.dim())
    }
}
