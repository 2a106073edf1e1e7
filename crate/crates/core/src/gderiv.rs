//! Twisted derivation spaces and the operator constructions built on them.
//!
//! Every solver assembles an explicit linear system in the `n²` entries of an
//! unknown map and returns its exact kernel. Maps are flattened row-major, so a
//! kernel vector is directly the entry list of a matrix.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{Automorphism, LieAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, rational_roots, unit, Matrix, Rational, Subspace};

/// A subspace of `End(Q^n)` with a canonical basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapSpace {
    n: usize,
    space: Subspace,
}

impl MapSpace {
    pub fn from_subspace(n: usize, space: Subspace) -> Result<Self> {
        if space.ambient_dim() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: space.ambient_dim() });
        }
        Ok(MapSpace { n, space })
    }

    pub fn span(n: usize, maps: &[Matrix]) -> Result<Self> {
        let vectors = maps
            .iter()
            .map(|m| {
                if m.rows() != n || m.cols() != n {
                    Err(Error::DimensionMismatch { expected: n, found: m.rows() })
                } else {
                    Ok(m.as_flat().to_vec())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MapSpace { n, space: Subspace::span(n * n, vectors)? })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis(&self) -> Vec<Matrix> {
        self.space.basis().iter().map(|v| Matrix::from_flat(self.n, self.n, v.clone()).expect("n² entries")).collect()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        m.rows() == self.n && m.cols() == self.n && self.space.contains(m.as_flat()).unwrap_or(false)
    }

    pub fn intersect(&self, other: &MapSpace) -> Result<MapSpace> {
        Ok(MapSpace { n: self.n, space: self.space.intersect(&other.space)? })
    }

    pub fn subspace(&self) -> &Subspace {
        &self.space
    }
}

/// Kernel of a linear residual map `D -> residual(D)` on `n x n` matrices.
pub(crate) fn solve_maps<F>(n: usize, residual: F) -> MapSpace
where
    F: Fn(&Matrix) -> Vec<Rational>,
{
    let columns: Vec<Vec<Rational>> = (0..n * n)
        .map(|u| {
            let mut e = Matrix::zeros(n, n);
            e[(u / n, u % n)] = Rational::one();
            residual(&e)
        })
        .collect();
    let rows = columns.first().map_or(0, Vec::len);
    let space = if rows == 0 {
        Subspace::full(n * n)
    } else {
        Matrix::from_columns(rows, &columns).expect("uniform residual length").kernel()
    };
    MapSpace { n, space }
}

fn check_dim(g: &LieAlgebra, m: &Matrix) -> Result<()> {
    if m.rows() != g.dim() || m.cols() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: m.rows() });
    }
    Ok(())
}

fn sub_into(out: &mut Vec<Rational>, a: Vec<Rational>, b: Vec<Rational>, c: Vec<Rational>) {
    out.extend(a.into_iter().zip(b).zip(c).map(|((a, b), c)| a - b - c));
}

/// Stacked residuals `D[e_i,e_j] - [D e_i, σ e_j] - [τ e_i, D e_j]` over all
/// ordered pairs. The mixed twist makes `(i,j)` and `(j,i)` independent
/// conditions, and `i == j` is not automatic either.
fn derivation_residual(g: &LieAlgebra, d: &Matrix, sigma: &Matrix, tau: &Matrix) -> Vec<Rational> {
    let n = g.dim();
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        let de_i = d.column(i);
        let te_i = tau.column(i);
        for j in 0..n {
            sub_into(
                &mut out,
                d.mul_vec(&g.basis_bracket(i, j)),
                g.br(&de_i, &sigma.column(j)),
                g.br(&te_i, &d.column(j)),
            );
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivationKind {
    Plain,
    Plus,
    Minus,
}

impl std::str::FromStr for DerivationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Self::Plain),
            "plus" => Ok(Self::Plus),
            "minus" => Ok(Self::Minus),
            _ => Err(Error::Parse(format!("unknown derivation kind `{s}`"))),
        }
    }
}

/// A solved space `Der_{σ,τ}(g)`, optionally cut down to an interior.
#[derive(Clone, Debug)]
pub struct DerivationSpace {
    pub sigma: Automorphism,
    pub tau: Automorphism,
    pub kind: DerivationKind,
    pub maps: MapSpace,
    pub generators: Vec<Automorphism>,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.maps.dim()
    }

    pub fn basis(&self) -> Vec<Matrix> {
        self.maps.basis()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.maps.contains(m)
    }
}

pub fn is_derivation_pair(g: &LieAlgebra, d: &Matrix, sigma: &Automorphism, tau: &Automorphism) -> Result<bool> {
    check_dim(g, d)?;
    check_dim(g, sigma.matrix())?;
    check_dim(g, tau.matrix())?;
    Ok(is_zero_vec(&derivation_residual(g, d, sigma.matrix(), tau.matrix())))
}

/// `Der_{σ,τ}(g)`.
pub fn derivation_space(g: &LieAlgebra, sigma: &Automorphism, tau: &Automorphism) -> Result<DerivationSpace> {
    check_dim(g, sigma.matrix())?;
    check_dim(g, tau.matrix())?;
    let maps = solve_maps(g.dim(), |d| derivation_residual(g, d, sigma.matrix(), tau.matrix()));
    Ok(DerivationSpace {
        sigma: sigma.clone(),
        tau: tau.clone(),
        kind: DerivationKind::Plain,
        maps,
        generators: Vec::new(),
    })
}

/// Shorthand for `Der_σ(g) = Der_{σ,1}(g)`.
pub fn der_sigma(g: &LieAlgebra, sigma: &Automorphism) -> Result<DerivationSpace> {
    derivation_space(g, sigma, &Automorphism::identity(g.dim()))
}

fn commutes_residual(out: &mut Vec<Rational>, d: &Matrix, s: &Matrix) {
    out.extend((&(d * s) - &(s * d)).as_flat().iter().cloned());
}

/// Elements of `Der_σ(g)` commuting with σ.
pub fn plus_interior(g: &LieAlgebra, sigma: &Automorphism) -> Result<DerivationSpace> {
    check_dim(g, sigma.matrix())?;
    let id = Matrix::identity(g.dim());
    let maps = solve_maps(g.dim(), |d| {
        let mut r = derivation_residual(g, d, sigma.matrix(), &id);
        commutes_residual(&mut r, d, sigma.matrix());
        r
    });
    Ok(DerivationSpace {
        sigma: sigma.clone(),
        tau: Automorphism::identity(g.dim()),
        kind: DerivationKind::Plus,
        maps,
        generators: Vec::new(),
    })
}

/// Elements of `Der_σ(g)` commuting with every listed generator.
pub fn minus_interior(g: &LieAlgebra, sigma: &Automorphism, gens: &[Automorphism]) -> Result<DerivationSpace> {
    check_dim(g, sigma.matrix())?;
    for t in gens {
        check_dim(g, t.matrix())?;
    }
    let id = Matrix::identity(g.dim());
    let maps = solve_maps(g.dim(), |d| {
        let mut r = derivation_residual(g, d, sigma.matrix(), &id);
        for t in gens {
            commutes_residual(&mut r, d, t.matrix());
        }
        r
    });
    Ok(DerivationSpace {
        sigma: sigma.clone(),
        tau: Automorphism::identity(g.dim()),
        kind: DerivationKind::Minus,
        maps,
        generators: gens.to_vec(),
    })
}

/// Maps with `[D x, y] = [x, D y] = D [x, y]` for all `x, y`.
pub fn centroid(g: &LieAlgebra) -> MapSpace {
    let n = g.dim();
    solve_maps(n, |d| {
        let mut out = Vec::with_capacity(2 * n * n * n);
        for i in 0..n {
            for j in 0..n {
                let dij = d.mul_vec(&g.basis_bracket(i, j));
                let left = g.br(&d.column(i), &unit(n, j));
                let right = g.br(&unit(n, i), &d.column(j));
                out.extend(left.iter().zip(&dij).map(|(a, b)| a - b));
                out.extend(right.iter().zip(&dij).map(|(a, b)| a - b));
            }
        }
        out
    })
}

/// `τ⁻¹ ∘ D`, carrying `Der_{σ,τ}` onto `Der_{τ⁻¹σ}`.
pub fn twist(d: &Matrix, tau: &Automorphism) -> Matrix {
    tau.inverse_matrix() * d
}

/// Inverse of [`twist`]: `τ ∘ D`.
pub fn untwist(d: &Matrix, tau: &Automorphism) -> Matrix {
    tau.matrix() * d
}

/// `σ [σ⁻¹D, σ⁻¹T]`, the bracket transported from `Der(g)` to `Der_{σ,σ}(g)`.
pub fn sigma_bracket(d: &Matrix, t: &Matrix, sigma: &Automorphism) -> Matrix {
    let a = twist(d, sigma);
    let b = twist(t, sigma);
    sigma.matrix() * &a.commutator(&b)
}

/// Structure constants of a bilinear product on `Q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductTable {
    n: usize,
    table: Vec<Vec<Vec<Rational>>>,
}

impl ProductTable {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `e_i * e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[Rational] {
        &self.table[i][j]
    }

    pub fn product(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.n];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let c = xi * yj;
                for (o, t) in out.iter_mut().zip(&self.table[i][j]) {
                    *o += &c * t;
                }
            }
        }
        out
    }

    /// True iff `(x*y)*z - x*(y*z)` is symmetric in `x, y` on all basis triples.
    pub fn is_left_symmetric(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (unit(n, i), unit(n, j), unit(n, k));
                    let lhs: Vec<Rational> = self
                        .product(&self.product(&x, &y), &z)
                        .into_iter()
                        .zip(self.product(&x, &self.product(&y, &z)))
                        .map(|(a, b)| a - b)
                        .collect();
                    let rhs: Vec<Rational> = self
                        .product(&self.product(&y, &x), &z)
                        .into_iter()
                        .zip(self.product(&y, &self.product(&x, &z)))
                        .map(|(a, b)| a - b)
                        .collect();
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// `x * y = D⁻¹[σx, Dy]` for an invertible `D ∈ Der_{σ,σ}(g)`.
pub fn left_symmetric_product(g: &LieAlgebra, d: &Matrix, sigma: &Automorphism) -> Result<ProductTable> {
    check_dim(g, d)?;
    let n = g.dim();
    let d_inv = d.inverse()?;
    let table = (0..n)
        .map(|i| {
            let sx = sigma.matrix().column(i);
            (0..n).map(|j| d_inv.mul_vec(&g.br(&sx, &d.column(j)))).collect()
        })
        .collect();
    Ok(ProductTable { n, table })
}

/// `ad(σ⁻¹ D x)`; for `D ∈ Der_σ(g)` this satisfies `[D, ad x] = σ ∘ result`.
pub fn phi_x_sigma(g: &LieAlgebra, d: &Matrix, sigma: &Automorphism, x: &[Rational]) -> Result<Matrix> {
    check_dim(g, d)?;
    let y = sigma.inverse_matrix().mul_vec(&d.mul_vec(x));
    g.ad(&y)
}

/// `{D ∈ Der_σ(g) : D x ∈ Z(g)}`.
pub fn kernel_phi(g: &LieAlgebra, sigma: &Automorphism, x: &[Rational]) -> Result<MapSpace> {
    check_dim(g, sigma.matrix())?;
    let n = g.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    let id = Matrix::identity(n);
    Ok(solve_maps(n, |d| {
        let mut r = derivation_residual(g, d, sigma.matrix(), &id);
        let dx = d.mul_vec(x);
        for j in 0..n {
            r.extend(g.br(&dx, &unit(n, j)));
        }
        r
    }))
}

/// Some `T` with `[Dx, y] + [x, Dy] = T[x, y]` for all `x, y`, if one exists.
pub fn quasiderivation_witness(g: &LieAlgebra, d: &Matrix) -> Result<Option<Matrix>> {
    check_dim(g, d)?;
    let n = g.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    if pairs.is_empty() {
        return Ok(Some(Matrix::zeros(n, n)));
    }
    let mut rhs = Vec::with_capacity(pairs.len() * n);
    for &(i, j) in &pairs {
        let a = g.br(&d.column(i), &unit(n, j));
        let b = g.br(&unit(n, i), &d.column(j));
        rhs.extend(a.into_iter().zip(b).map(|(a, b)| a + b));
    }
    let columns: Vec<Vec<Rational>> = (0..n * n)
        .map(|u| {
            let mut e = Matrix::zeros(n, n);
            e[(u / n, u % n)] = Rational::one();
            pairs.iter().flat_map(|&(i, j)| e.mul_vec(&g.basis_bracket(i, j))).collect()
        })
        .collect();
    let system = Matrix::from_columns(rhs.len(), &columns)?;
    Ok(system.solve(&rhs)?.map(|t| Matrix::from_flat(n, n, t).expect("n² entries")))
}

/// `{D : α D[x,y] = β [Dx, y] + γ [x, Dy]}`.
pub fn abg_space(g: &LieAlgebra, alpha: &Rational, beta: &Rational, gamma: &Rational) -> MapSpace {
    let n = g.dim();
    solve_maps(n, |d| {
        let mut out = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                let a = d.mul_vec(&g.basis_bracket(i, j));
                let b = g.br(&d.column(i), &unit(n, j));
                let c = g.br(&unit(n, i), &d.column(j));
                out.extend((0..n).map(|k| alpha * &a[k] - beta * &b[k] - gamma * &c[k]));
            }
        }
        out
    })
}

/// Linear functionals whose common kernel is `h`.
fn annihilator(h: &Subspace) -> Vec<Vec<Rational>> {
    if h.is_zero() {
        return (0..h.ambient_dim()).map(|i| unit(h.ambient_dim(), i)).collect();
    }
    let rows = Matrix::from_rows(h.basis().to_vec()).expect("uniform basis");
    rows.kernel().basis().to_vec()
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// `{D ∈ Der_σ(g) : D(h) ⊆ h}` for a σ-stable subspace `h`.
pub fn stabilized_space(g: &LieAlgebra, sigma: &Automorphism, h: &Subspace) -> Result<MapSpace> {
    check_dim(g, sigma.matrix())?;
    let n = g.dim();
    if h.ambient_dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: h.ambient_dim() });
    }
    for v in h.basis() {
        if !h.contains(&sigma.matrix().mul_vec(v))? {
            return Err(Error::NotSigmaStable);
        }
    }
    let ann = annihilator(h);
    let id = Matrix::identity(n);
    Ok(solve_maps(n, |d| {
        let mut r = derivation_residual(g, d, sigma.matrix(), &id);
        for v in h.basis() {
            let dv = d.mul_vec(v);
            r.extend(ann.iter().map(|w| dot(w, &dv)));
        }
        r
    }))
}

/// The map induced by `D` on `h`, in the canonical basis of `h`.
pub fn restrict(d: &Matrix, h: &Subspace) -> Result<Matrix> {
    let cols = h
        .basis()
        .iter()
        .map(|v| h.coordinates(&d.mul_vec(v))?.ok_or(Error::NotInSubspace))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_columns(h.dim(), &cols)
}

/// `ad(x0)` restricted to `h`, required to be invertible.
pub fn ad_on(g: &LieAlgebra, x0: &[Rational], h: &Subspace) -> Result<Matrix> {
    let ad = g.ad(x0)?;
    let a = restrict(&ad, h).map_err(|e| match e {
        Error::NotInSubspace => Error::AdNotInvertibleOnH,
        e => e,
    })?;
    if !a.is_invertible() {
        return Err(Error::AdNotInvertibleOnH);
    }
    Ok(a)
}

/// `D̃` on `h`: for `v = [x0, y]`, `D̃ v = 2D[x0,y] + [Dy, σx0] + [σy, Dx0]`.
pub fn tilde_map(g: &LieAlgebra, d: &Matrix, sigma: &Automorphism, x0: &[Rational], h: &Subspace) -> Result<Matrix> {
    check_dim(g, d)?;
    let a_inv = ad_on(g, x0, h)?.inverse()?;
    let k = h.dim();
    let sx0 = sigma.matrix().mul_vec(x0);
    let dx0 = d.mul_vec(x0);
    let mut cols = Vec::with_capacity(k);
    for c in 0..k {
        let s = a_inv.column(c);
        let mut y = vec![Rational::zero(); g.dim()];
        for (si, b) in s.iter().zip(h.basis()) {
            for (yi, bi) in y.iter_mut().zip(b) {
                *yi += si * bi;
            }
        }
        let v = g.br(x0, &y);
        let p = d.mul_vec(&v);
        let q = g.br(&d.mul_vec(&y), &sx0);
        let r = g.br(&sigma.matrix().mul_vec(&y), &dx0);
        let w: Vec<Rational> = (0..g.dim()).map(|t| &p[t] + &p[t] + &q[t] + &r[t]).collect();
        cols.push(h.coordinates(&w)?.ok_or(Error::NotInSubspace)?);
    }
    Matrix::from_columns(k, &cols)
}

/// `Dσ - σD`.
pub fn commutator_with_sigma(d: &Matrix, sigma: &Automorphism) -> Matrix {
    &(d * sigma.matrix()) - &(sigma.matrix() * d)
}

/// True iff `[g, g]` lies in the kernel of `Dσ - σD`.
pub fn derived_in_kernel(g: &LieAlgebra, d: &Matrix, sigma: &Automorphism) -> Result<bool> {
    check_dim(g, d)?;
    let c = commutator_with_sigma(d, sigma);
    Ok(g.derived_subalgebra().basis().iter().all(|v| is_zero_vec(&c.mul_vec(v))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub witness: Vec<String>,
    pub image: Vec<String>,
    /// Whether `(σ⁻¹τ)(w)` commutes with `w`.
    pub in_centralizer: bool,
}

#[derive(Clone, Debug)]
pub struct IntersectionReport {
    pub dimension: usize,
    pub intersection: MapSpace,
    pub witness: Option<WitnessCheck>,
}

/// `Der_σ(g) ∩ Der_τ(g)` plus an optional check of a caller-supplied witness.
pub fn intersection_report(
    g: &LieAlgebra,
    sigma: &Automorphism,
    tau: &Automorphism,
    witness: Option<&[Rational]>,
) -> Result<IntersectionReport> {
    let a = der_sigma(g, sigma)?;
    let b = der_sigma(g, tau)?;
    let intersection = a.maps.intersect(&b.maps)?;
    let witness = match witness {
        Some(w) => {
            let image = sigma.inverse_matrix().mul_vec(&tau.matrix().mul_vec(w));
            let in_centralizer = is_zero_vec(&g.bracket(w, &image)?);
            let fmt = |v: &[Rational]| v.iter().map(ToString::to_string).collect();
            Some(WitnessCheck { witness: fmt(w), image: fmt(&image), in_centralizer })
        }
        None => None,
    };
    Ok(IntersectionReport { dimension: intersection.dim(), intersection, witness })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PeriodicVerdict {
    /// Finite order `m`, a rational σ-fixed eigenvector, and `6 | m`.
    DivisibleBySixConfirmed,
    /// `D ∉ Der_σ(g)`, or `D` cannot have finite order (singular).
    HypothesisNotMet,
    OrderNotFoundWithinBound,
    /// Finite order, but no σ-fixed eigenvector over the rationals.
    NoRationalFixedEigenvector,
    /// Hypotheses hold over the rationals but `6 ∤ m`.
    Violation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicReport {
    pub nonabelian: bool,
    pub in_der_sigma: bool,
    pub order: Option<usize>,
    pub rational_eigenvalues: Vec<String>,
    pub fixed_eigenvector: Option<Vec<String>>,
    pub verdict: PeriodicVerdict,
}

pub fn periodic_check(g: &LieAlgebra, d: &Matrix, sigma: &Automorphism, max_m: usize) -> Result<PeriodicReport> {
    if g.is_abelian() {
        return Err(Error::AbelianAlgebra);
    }
    check_dim(g, d)?;
    let in_der_sigma = is_derivation_pair(g, d, sigma, &Automorphism::identity(g.dim()))?;
    let eigenvalues = rational_roots(&d.charpoly()?);
    let mut report = PeriodicReport {
        nonabelian: true,
        in_der_sigma,
        order: None,
        rational_eigenvalues: eigenvalues.iter().map(ToString::to_string).collect(),
        fixed_eigenvector: None,
        verdict: PeriodicVerdict::HypothesisNotMet,
    };
    if !in_der_sigma || !d.is_invertible() {
        return Ok(report);
    }
    report.order = d.order(max_m)?;
    let Some(m) = report.order else {
        report.verdict = PeriodicVerdict::OrderNotFoundWithinBound;
        return Ok(report);
    };
    let n = g.dim();
    let fixed = (sigma.matrix() - &Matrix::identity(n)).kernel();
    for lambda in &eigenvalues {
        let eig = (d - &Matrix::identity(n).scale(lambda)).kernel();
        if let Some(v) = eig.intersect(&fixed)?.basis().first() {
            report.fixed_eigenvector = Some(v.iter().map(ToString::to_string).collect());
            break;
        }
    }
    report.verdict = match (&report.fixed_eigenvector, m % 6 == 0) {
        (None, _) => PeriodicVerdict::NoRationalFixedEigenvector,
        (Some(_), true) => PeriodicVerdict::DivisibleBySixConfirmed,
        (Some(_), false) => PeriodicVerdict::Violation,
    };
    Ok(report)
}
