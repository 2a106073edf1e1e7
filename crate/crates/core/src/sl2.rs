//! The `sl2` case study: derivation forms, the three one-parameter families
//! of inner automorphisms, and the ideal-theoretic description of
//! `Der_σ(sl2)` as an affine variety in the entries of `D` and the family
//! parameters.
//!
//! Variables: `x_ij` is the coefficient of `e_j` in `D(e_i)`, i.e. the matrix
//! entry in row `j`, column `i`. The family parameter is `y` for the `b` and
//! `c` families; the `ab` family uses `a`, `b` and `w = 1/b`.

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{Automorphism, LieAlgebra};
use crate::error::{Error, Result};
use crate::gderiv::{der_sigma, is_derivation_pair, MapSpace};
use crate::linalg::{frac, rat, Matrix, Rational};
use crate::poly::{reduce, var_table, Ideal, MultiPoly, PrimeCheck};

/// Claimed dimension of `Der_σ(sl2)` for every fixed family parameter in the
/// published source. The computed value is authoritative.
pub const PUBLISHED_FIXED_DIMENSION: usize = 4;

pub fn sl2() -> LieAlgebra {
    LieAlgebra::builtin("sl2").expect("builtin sl2")
}

/// `[[a,b,0],[-2c,0,-2b],[0,c,-a]]`, the general derivation of `sl2`.
pub fn derivation_form(a: &Rational, b: &Rational, c: &Rational) -> Matrix {
    let z = Rational::zero;
    let two = rat(2);
    Matrix::from_rows(vec![
        vec![a.clone(), b.clone(), z()],
        vec![-(&two * c), z(), -(&two * b)],
        vec![z(), c.clone(), -a.clone()],
    ])
    .expect("3x3")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub matrix: Matrix,
    pub nilpotent: bool,
    /// `rank(D^n)` for `n = 1, 2, 3`.
    pub ranks: [usize; 3],
    /// `(bc = 0 and a = 0) or (bc != 0 and a² = 4bc)`.
    pub predicted_nilpotent: bool,
}

pub fn classify_derivation(a: &Rational, b: &Rational, c: &Rational) -> Classification {
    let d = derivation_form(a, b, c);
    let d2 = &d * &d;
    let d3 = &d2 * &d;
    let bc = b * c;
    let predicted_nilpotent = if bc.is_zero() { a.is_zero() } else { a * a == &bc * rat(4) };
    Classification { nilpotent: d3.is_zero(), ranks: [d.rank(), d2.rank(), d3.rank()], predicted_nilpotent, matrix: d }
}

pub fn d_b(b: &Rational) -> Matrix {
    derivation_form(&Rational::zero(), b, &Rational::zero())
}

pub fn d_c(c: &Rational) -> Matrix {
    let z = Rational::zero;
    Matrix::from_rows(vec![vec![z(), z(), z()], vec![-(rat(2) * c), z(), z()], vec![z(), c.clone(), z()]]).expect("3x3")
}

pub fn d_ab(a: &Rational, b: &Rational) -> Result<Matrix> {
    if a.is_zero() {
        return Err(Error::ZeroParameterA);
    }
    if b.is_zero() {
        return Err(Error::ZeroParameterB);
    }
    let z = Rational::zero;
    let a2 = a * a;
    Matrix::from_rows(vec![
        vec![a.clone(), b.clone(), z()],
        vec![-(&a2 / (rat(2) * b)), z(), -(rat(2) * b)],
        vec![z(), &a2 / (rat(4) * b), -a.clone()],
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sl2Family {
    B,
    C,
    AB,
}

impl FromStr for Sl2Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "b" => Ok(Self::B),
            "c" => Ok(Self::C),
            "ab" => Ok(Self::AB),
            _ => Err(Error::Parse(format!("unknown family `{s}` (expected b, c or ab)"))),
        }
    }
}

pub type Params = BTreeMap<String, Rational>;

fn param(values: &Params, name: &str) -> Result<Rational> {
    values.get(name).cloned().ok_or_else(|| Error::MissingParameter(name.to_string()))
}

pub const X_VARS: [&str; 9] = ["x11", "x12", "x13", "x21", "x22", "x23", "x31", "x32", "x33"];

/// Variable holding matrix entry `(r, c)`.
pub fn entry_var(r: usize, c: usize) -> String {
    format!("x{}{}", c + 1, r + 1)
}

impl Sl2Family {
    pub const ALL: [Sl2Family; 3] = [Sl2Family::B, Sl2Family::C, Sl2Family::AB];

    pub fn tag(self) -> &'static str {
        match self {
            Self::B => "b",
            Self::C => "c",
            Self::AB => "ab",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Self::B => &["b"],
            Self::C => &["c"],
            Self::AB => &["a", "b"],
        }
    }

    /// Polynomial ring of the derivation ideal, in lex order. For `ab`, `x31`
    /// is placed last among the entries so that it can serve as the free
    /// coordinate of the twisted component.
    pub fn ring(self) -> Arc<Vec<String>> {
        match self {
            Self::B | Self::C => var_table(&["x11", "x12", "x13", "x21", "x22", "x23", "x31", "x32", "x33", "y"]),
            Self::AB => var_table(&["x11", "x12", "x13", "x21", "x22", "x23", "x32", "x33", "x31", "a", "b", "w"]),
        }
    }

    /// The fixed automorphism `exp(D)` of the family at the given parameters.
    pub fn sigma(self, values: &Params) -> Result<Matrix> {
        match self {
            Self::B => {
                let b = param(values, "b")?;
                Ok(d_b(&b).exp_nilpotent()?)
            }
            Self::C => {
                let c = param(values, "c")?;
                Ok(d_c(&c).exp_nilpotent()?)
            }
            Self::AB => {
                let (a, b) = (param(values, "a")?, param(values, "b")?);
                d_ab(&a, &b)?.exp_nilpotent()
            }
        }
    }

    pub fn automorphism(self, values: &Params) -> Result<Automorphism> {
        Automorphism::new(&sl2(), self.sigma(values)?)
    }

    /// Localizing relations of the ring (`b*w - 1` for `ab`).
    fn relations(self, ring: &Arc<Vec<String>>) -> Vec<MultiPoly> {
        match self {
            Self::AB => vec![MultiPoly::parse(ring, "b*w - 1").expect("valid")],
            _ => Vec::new(),
        }
    }

    /// The symbolic automorphism over `ring()`.
    pub fn symbolic_sigma(self) -> PolyMatrix {
        let ring = self.ring();
        let p = |s: &str| MultiPoly::parse(&ring, s).expect("valid literal");
        match self {
            Self::B => PolyMatrix::from_strs(&ring, [["1", "y", "-y^2"], ["0", "1", "-2*y"], ["0", "0", "1"]]),
            Self::C => PolyMatrix::from_strs(&ring, [["1", "0", "0"], ["-2*y", "1", "0"], ["-y^2", "y", "1"]]),
            Self::AB => {
                let d =
                    PolyMatrix::from_strs(&ring, [["a", "b", "0"], ["-a^2*w/2", "0", "-2*b"], ["0", "a^2*w/4", "-a"]]);
                let d2 = d.mul(&d);
                let rel = self.relations(&ring);
                let half = frac(1, 2);
                let entries = (0..9)
                    .map(|k| {
                        let (r, c) = (k / 3, k % 3);
                        let id = if r == c { p("1") } else { p("0") };
                        let e = &(&id + &d.get(r, c)) + &d2.get(r, c).scale(&half);
                        reduce(&e, &rel)
                    })
                    .collect();
                PolyMatrix { entries }
            }
        }
    }
}

/// A 3x3 matrix of polynomials, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    fn from_strs(ring: &Arc<Vec<String>>, rows: [[&str; 3]; 3]) -> Self {
        let entries = rows.iter().flatten().map(|s| MultiPoly::parse(ring, s).expect("valid literal")).collect();
        PolyMatrix { entries }
    }

    /// The generic unknown `D` with entry `(r, c)` equal to `x_{c+1, r+1}`.
    pub fn unknown(ring: &Arc<Vec<String>>) -> Self {
        let entries = (0..9).map(|k| MultiPoly::var(ring, &entry_var(k / 3, k % 3)).expect("x variable")).collect();
        PolyMatrix { entries }
    }

    pub fn get(&self, r: usize, c: usize) -> MultiPoly {
        self.entries[r * 3 + c].clone()
    }

    pub fn column(&self, c: usize) -> Vec<MultiPoly> {
        (0..3).map(|r| self.get(r, c)).collect()
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        let entries = (0..9)
            .map(|k| {
                let (r, c) = (k / 3, k % 3);
                (0..3).fold(MultiPoly::zero(self.entries[0].vars()), |acc, t| {
                    &acc + &(&self.get(r, t) * &other.get(t, c))
                })
            })
            .collect();
        PolyMatrix { entries }
    }

    pub fn mul_vec(&self, v: &[MultiPoly]) -> Vec<MultiPoly> {
        (0..3).map(|r| (0..3).fold(MultiPoly::zero(v[0].vars()), |acc, t| &acc + &(&self.get(r, t) * &v[t]))).collect()
    }

    /// Substitutes rational values for every variable.
    pub fn evaluate(&self, values: &Params) -> Result<Matrix> {
        let data = self.entries.iter().map(|e| e.evaluate(values)).collect::<Result<Vec<_>>>()?;
        Matrix::from_flat(3, 3, data)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..3).map(|r| (0..3).map(|c| self.get(r, c).to_string()).collect()).collect()
    }
}

fn const_vec(ring: &Arc<Vec<String>>, v: &[Rational]) -> Vec<MultiPoly> {
    v.iter().map(|x| MultiPoly::constant(ring, x.clone())).collect()
}

fn bracket_poly(g: &LieAlgebra, x: &[MultiPoly], y: &[MultiPoly]) -> Vec<MultiPoly> {
    let ring = x[0].vars();
    let mut out = vec![MultiPoly::zero(ring); g.dim()];
    for (&(i, j), v) in g.relations() {
        let c = &(&x[i] * &y[j]) - &(&x[j] * &y[i]);
        if c.is_zero() {
            continue;
        }
        for (o, s) in out.iter_mut().zip(v) {
            if !s.is_zero() {
                *o = &*o + &c.scale(s);
            }
        }
    }
    out
}

/// Polynomial system of `D ∈ Der_σ(sl2)` over the family's ring.
#[derive(Clone, Debug)]
pub struct DerivationIdeal {
    pub family: Sl2Family,
    /// Nonzero residual components over all ordered pairs `(i, j)`.
    pub raw: Vec<MultiPoly>,
    /// `raw` with scalar multiples removed.
    pub distinct: Vec<MultiPoly>,
    /// Ring relations appended to the generators (`b*w - 1` for `ab`).
    pub relations: Vec<MultiPoly>,
    pub ideal: Ideal,
}

impl DerivationIdeal {
    /// Reduced Gröbner basis, the simplified form of the system.
    pub fn simplified(&self) -> Result<Vec<MultiPoly>> {
        Ok(self.ideal.groebner()?.to_vec())
    }
}

/// Coefficients of `D[e_i,e_j] - [D e_i, σ e_j] - [e_i, D e_j]`.
pub fn derivation_ideal(f: Sl2Family) -> Result<DerivationIdeal> {
    let g = sl2();
    let ring = f.ring();
    let d = PolyMatrix::unknown(&ring);
    let s = f.symbolic_sigma();
    let mut raw = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let lhs = d.mul_vec(&const_vec(&ring, &g.basis_bracket(i, j)));
            let t1 = bracket_poly(&g, &d.column(i), &s.column(j));
            let e_i = const_vec(&ring, &crate::linalg::unit(3, i));
            let t2 = bracket_poly(&g, &e_i, &d.column(j));
            for k in 0..3 {
                let r = &(&lhs[k] - &t1[k]) - &t2[k];
                if !r.is_zero() {
                    raw.push(r);
                }
            }
        }
    }
    let mut distinct: Vec<MultiPoly> = Vec::new();
    for r in &raw {
        let m = r.monic();
        if !distinct.iter().any(|q| q.monic() == m) {
            distinct.push(r.clone());
        }
    }
    let relations = f.relations(&ring);
    let gens = distinct.iter().chain(&relations).cloned().collect();
    let ideal = Ideal::new(&ring, gens)?;
    Ok(DerivationIdeal { family: f, raw, distinct, relations, ideal })
}

/// The published generator list `{x13, f1, ..., f6}` for the `b` family,
/// optionally with `x22` added.
pub fn published_j(with_x22: bool) -> Ideal {
    let ring = Sl2Family::B.ring();
    let mut gens = vec!["x13", "x11 + x33", "x12 + 2*x23", "x21 + x32/2", "x23*y", "x31 - x32*y/2", "x33*y"];
    if with_x22 {
        gens.insert(1, "x22");
    }
    Ideal::parse(&ring, &gens).expect("valid generators")
}

/// A polynomial parametrization of a component: `D` as a matrix over a
/// parameter ring, together with the images of the ring's family variables.
#[derive(Clone, Debug)]
pub struct ParametricForm {
    pub params: Arc<Vec<String>>,
    pub matrix: PolyMatrix,
    /// Image of each non-`x` ring variable.
    pub ring_map: Vec<(String, MultiPoly)>,
    /// Relations holding among the parameters (`b*w - 1` for `ab`).
    pub relations: Vec<MultiPoly>,
}

impl ParametricForm {
    /// True iff every generator vanishes identically on the parametrization.
    pub fn satisfies(&self, gens: &[MultiPoly]) -> Result<bool> {
        let mut images: HashMap<String, MultiPoly> = HashMap::new();
        for r in 0..3 {
            for c in 0..3 {
                images.insert(entry_var(r, c), self.matrix.get(r, c));
            }
        }
        for (v, p) in &self.ring_map {
            images.insert(v.clone(), p.clone());
        }
        for g in gens {
            let composed = g.compose(&images, &self.params)?;
            if !reduce(&composed, &self.relations).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Parametrizations published for the twisted component, evaluated pointwise.
/// Returns `None` where the display is undefined.
pub fn published_form(f: Sl2Family, values: &Params) -> Result<Option<Matrix>> {
    let a = param(values, "a")?;
    let z = Rational::zero;
    match f {
        Sl2Family::B => {
            let b = param(values, "b")?;
            let rows =
                vec![vec![z(), -(&a / rat(2)), &a * &b / rat(2)], vec![z(), z(), a.clone()], vec![z(), z(), z()]];
            Ok(Some(Matrix::from_rows(rows)?))
        }
        Sl2Family::C => {
            let c = param(values, "c")?;
            let rows =
                vec![vec![z(), z(), z()], vec![-(rat(2) * &a), z(), a.clone()], vec![-(rat(2) * &a * &c), z(), z()]];
            Ok(Some(Matrix::from_rows(rows)?))
        }
        Sl2Family::AB => {
            let (b, c) = (param(values, "b")?, param(values, "c")?);
            let ab = &a * &b;
            let den1 = &ab - rat(4);
            let den2 = &ab * &b - rat(4) * &b;
            let den3 = &ab * &a - rat(4) * &a;
            if den1.is_zero() || den2.is_zero() || den3.is_zero() {
                return Ok(None);
            }
            let a2 = &a * &a;
            let a3 = &a2 * &a;
            let b2 = &b * &b;
            let rows = vec![
                vec![
                    (&ab + rat(4)) / &den1 * &c,
                    (-(&a2 * &b) - rat(2) * &a) / &den2 * &c,
                    (-(&a3 / rat(4))) / &den2 * &c,
                ],
                vec![
                    (rat(2) * &a * &b2 + rat(4) * &b) / &den3 * &c,
                    (-(rat(2) * &ab)) / &den1 * &c,
                    (&a - &a2 * &b / rat(2)) / &den2 * &c,
                ],
                vec![(-(rat(4) * &b2 * &b)) / &den3 * &c, (rat(4) * &a * &b2 - rat(8) * &b) / &den3 * &c, c.clone()],
            ];
            Ok(Some(Matrix::from_rows(rows)?))
        }
    }
}

/// Candidate components of the derivation variety with parametrizations.
#[derive(Clone, Debug)]
pub struct KnownComponents {
    pub p1: Ideal,
    pub p2: Ideal,
    /// Parametrization of `V(p2)`, derived from the solved system.
    pub form: ParametricForm,
    pub notes: Vec<String>,
}

const DER_RELATIONS: [&str; 6] = ["x13", "x22", "x31", "x11 + x33", "x12 + 2*x23", "x21 + x32/2"];

pub fn known_components(f: Sl2Family) -> Result<KnownComponents> {
    let ring = f.ring();
    match f {
        Sl2Family::B | Sl2Family::C => {
            let mut g1: Vec<&str> = DER_RELATIONS.to_vec();
            g1.push("y");
            let p1 = Ideal::parse(&ring, &g1)?;
            let params = var_table(&["a", f.param_names()[0]]);
            let (p2, rows, notes) = if f == Sl2Family::B {
                (
                    Ideal::parse(&ring, &["x11", "x12", "x13", "x22", "x23", "x33", "x21 + x32/2", "x31 - x32*y/2"])?,
                    [["0", "-a/2", "a*b/2"], ["0", "0", "a"], ["0", "0", "0"]],
                    vec![
                        "the published generator list omits x22; it is added here (x22 lies in the ideal of the system)"
                            .to_string(),
                    ],
                )
            } else {
                (
                    Ideal::parse(&ring, &["x11", "x21", "x22", "x31", "x32", "x33", "x12 + 2*x23", "x13 + x23*y"])?,
                    [["0", "0", "0"], ["-2*a", "0", "0"], ["-a*c", "a", "0"]],
                    vec![
                        "second component reconstructed from the solved system: D = a*(sigma - I)/(-2c)".to_string(),
                        "the published parametrization [[0,0,0],[-2a,0,a],[-2ac,0,0]] fails the defining identity"
                            .to_string(),
                    ],
                )
            };
            let matrix = PolyMatrix::from_strs(&params, rows);
            let form = ParametricForm {
                ring_map: vec![("y".to_string(), MultiPoly::var(&params, f.param_names()[0])?)],
                params,
                matrix,
                relations: Vec::new(),
            };
            Ok(KnownComponents { p1, p2, form, notes })
        }
        Sl2Family::AB => {
            let mut g1: Vec<&str> = DER_RELATIONS.to_vec();
            g1.extend(["a", "b", "b*w - 1"]);
            let p1 = Ideal::parse(&ring, &g1)?;
            // D = s*(sigma - I); the (1,3) entry of sigma - I is -b², so
            // s = -x31*w² and every other entry is x31 times a polynomial.
            let sigma = f.symbolic_sigma();
            let rel = f.relations(&ring);
            let x31 = MultiPoly::var(&ring, "x31")?;
            let w2 = MultiPoly::parse(&ring, "w^2")?;
            let mut gens = Vec::new();
            for r in 0..3 {
                for c in 0..3 {
                    if (r, c) == (0, 2) {
                        continue;
                    }
                    let e = if r == c { &sigma.get(r, c) - &MultiPoly::one(&ring) } else { sigma.get(r, c) };
                    let x = MultiPoly::var(&ring, &entry_var(r, c))?;
                    gens.push(reduce(&(&x + &(&(&x31 * &w2) * &e)), &rel));
                }
            }
            gens.extend(rel.iter().cloned());
            let p2 = Ideal::new(&ring, gens)?;
            let params = var_table(&["s", "a", "b", "w"]);
            // Entries of sigma involve only a, b, w; carry them over by name.
            let drop_x: HashMap<String, MultiPoly> =
                X_VARS.iter().map(|x| (x.to_string(), MultiPoly::zero(&params))).collect();
            let embed = |p: &MultiPoly| p.compose(&drop_x, &params);
            let s = MultiPoly::var(&params, "s")?;
            let mut entries = Vec::with_capacity(9);
            for r in 0..3 {
                for c in 0..3 {
                    let e = if r == c { &sigma.get(r, c) - &MultiPoly::one(&ring) } else { sigma.get(r, c) };
                    entries.push(&s * &embed(&e)?);
                }
            }
            let ring_map = ["a", "b", "w"]
                .iter()
                .map(|v| Ok((v.to_string(), MultiPoly::var(&params, v)?)))
                .collect::<Result<_>>()?;
            let form = ParametricForm {
                relations: vec![MultiPoly::parse(&params, "b*w - 1")?],
                params,
                matrix: PolyMatrix { entries },
                ring_map,
            };
            let notes = vec![
                "V(p1) is empty on this family: exp(D_{a,b}) differs from I whenever b != 0".to_string(),
                "second component: D = s*(sigma - I), certified prime after inverting b".to_string(),
                "the published parametrization agrees with the solved system only at b = 1, read transposed, with denominators a - 4".to_string(),
            ];
            Ok(KnownComponents { p1, p2, form, notes })
        }
    }
}

/// Sample parameter points for the parametric forms (including `w = 1/b`).
pub fn sample_points(f: Sl2Family) -> Vec<Params> {
    let pt = |kv: &[(&str, Rational)]| kv.iter().map(|(k, v)| (k.to_string(), v.clone())).collect::<Params>();
    match f {
        Sl2Family::B => vec![
            pt(&[("a", rat(2)), ("b", rat(1))]),
            pt(&[("a", rat(-3)), ("b", frac(1, 2))]),
            pt(&[("a", frac(5, 7)), ("b", rat(-2))]),
        ],
        Sl2Family::C => vec![
            pt(&[("a", rat(1)), ("c", rat(1))]),
            pt(&[("a", rat(-3)), ("c", frac(1, 2))]),
            pt(&[("a", frac(5, 7)), ("c", rat(-2))]),
        ],
        Sl2Family::AB => vec![
            pt(&[("s", rat(1)), ("a", rat(2)), ("b", rat(1)), ("w", rat(1))]),
            pt(&[("s", rat(-2)), ("a", rat(1)), ("b", rat(3)), ("w", frac(1, 3))]),
            pt(&[("s", frac(1, 2)), ("a", rat(-1)), ("b", rat(2)), ("w", frac(1, 2))]),
        ],
    }
}

/// Family parameters of a sample point.
fn sigma_params(f: Sl2Family, point: &Params) -> Params {
    f.param_names().iter().filter_map(|k| point.get(*k).map(|v| (k.to_string(), v.clone()))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub name: String,
    pub generators: Vec<String>,
    pub unit_ideal: bool,
    pub prime_certified: bool,
    pub prime_criterion: String,
    pub free_vars: Vec<String>,
    pub inverted: Vec<String>,
    pub dimension: Option<usize>,
    pub parametric_form: Option<Vec<Vec<String>>>,
}

impl ComponentReport {
    fn new(name: &str, ideal: &Ideal, form: Option<&ParametricForm>) -> Result<Self> {
        let PrimeCheck { certified, criterion, free_vars, inverted, dimension, .. } = ideal.triangular_prime_check()?;
        Ok(ComponentReport {
            name: name.to_string(),
            generators: ideal.generators().iter().map(ToString::to_string).collect(),
            unit_ideal: ideal.is_unit()?,
            prime_certified: certified,
            prime_criterion: criterion,
            free_vars,
            inverted,
            dimension,
            parametric_form: form.map(|f| f.matrix.to_strings()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Containments {
    pub j_in_p1: bool,
    pub j_in_p2: bool,
    pub p1_p2_in_j: bool,
    /// The ideal used equals the ideal generated by the solved system.
    pub j_matches_system: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PublishedFormCheck {
    pub samples: usize,
    /// Samples where the published display is defined and passes the identity.
    pub passing: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub family: Sl2Family,
    pub ring: Vec<String>,
    pub ideal_generators: Vec<String>,
    pub raw_generator_count: usize,
    pub distinct_generator_count: usize,
    pub reduced_basis: Vec<String>,
    pub components: Vec<ComponentReport>,
    pub containments: Containments,
    /// The derived parametrization zeroes every raw generator identically.
    pub parametric_identity: bool,
    /// Sampled points of the derived parametrization pass the derivation identity.
    pub parametric_samples_pass: bool,
    pub published_form: PublishedFormCheck,
    pub notes: Vec<String>,
    pub verified: bool,
}

pub fn verify_decomposition(f: Sl2Family) -> Result<DecompositionReport> {
    let system = derivation_ideal(f)?;
    let known = known_components(f)?;
    let j = match f {
        Sl2Family::B => published_j(true),
        _ => system.ideal.clone(),
    };
    let j_matches_system = j.contains(&system.ideal)? && system.ideal.contains(&j)?;
    let containments = Containments {
        j_in_p1: known.p1.contains(&j)?,
        j_in_p2: known.p2.contains(&j)?,
        p1_p2_in_j: j.contains(&known.p1.product(&known.p2)?)?,
        j_matches_system,
    };
    let components =
        vec![ComponentReport::new("p1", &known.p1, None)?, ComponentReport::new("p2", &known.p2, Some(&known.form))?];
    let parametric_identity = known.form.satisfies(&system.raw)?;

    let g = sl2();
    let id = Automorphism::identity(3);
    let mut parametric_samples_pass = true;
    let mut published = PublishedFormCheck { samples: 0, passing: 0 };
    for point in sample_points(f) {
        let sigma = f.automorphism(&sigma_params(f, &point))?;
        let d = known.form.matrix.evaluate(&point)?;
        parametric_samples_pass &= is_derivation_pair(&g, &d, &sigma, &id)?;
        let mut pp = point.clone();
        if let Some(s) = pp.remove("s") {
            pp.insert("c".into(), s);
        }
        if f == Sl2Family::AB {
            pp.remove("w");
        }
        pp.insert("a".into(), pp.get("a").cloned().unwrap_or_else(Rational::one));
        published.samples += 1;
        if let Some(m) = published_form(f, &pp)? {
            if is_derivation_pair(&g, &m, &sigma, &id)? {
                published.passing += 1;
            }
        }
    }
    let mut notes = known.notes.clone();
    if f == Sl2Family::B && !published_j(false).member(&MultiPoly::var(&j.vars().clone(), "x22")?)? {
        notes.push("x22 is not in the ideal of the published list without it".to_string());
    }
    let verified = containments.j_in_p1
        && containments.j_in_p2
        && containments.p1_p2_in_j
        && containments.j_matches_system
        && components.iter().all(|c| c.prime_certified)
        && parametric_identity
        && parametric_samples_pass;
    Ok(DecompositionReport {
        family: f,
        ring: f.ring().to_vec(),
        ideal_generators: j.generators().iter().map(ToString::to_string).collect(),
        raw_generator_count: system.raw.len(),
        distinct_generator_count: system.distinct.len(),
        reduced_basis: j.groebner()?.iter().map(ToString::to_string).collect(),
        components,
        containments,
        parametric_identity,
        parametric_samples_pass,
        published_form: published,
        notes,
        verified,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedReport {
    pub family: Sl2Family,
    pub params: BTreeMap<String, String>,
    pub dimension: usize,
    pub basis: Vec<Matrix>,
    pub published_claim: usize,
    pub discrepancy: bool,
}

/// Solves the family's polynomial system at fixed parameters. This path
/// substitutes into the symbolic generators and never calls the generic
/// derivation solver.
pub fn fixed_param_dimension(f: Sl2Family, values: &Params) -> Result<FixedReport> {
    let mut assign = Params::new();
    match f {
        Sl2Family::B | Sl2Family::C => {
            assign.insert("y".into(), param(values, f.param_names()[0])?);
        }
        Sl2Family::AB => {
            let (a, b) = (param(values, "a")?, param(values, "b")?);
            if a.is_zero() {
                return Err(Error::ZeroParameterA);
            }
            if b.is_zero() {
                return Err(Error::ZeroParameterB);
            }
            assign.insert("w".into(), Rational::one() / &b);
            assign.insert("a".into(), a);
            assign.insert("b".into(), b);
        }
    }
    let system = derivation_ideal(f)?;
    let mut rows = Vec::new();
    for g in system.raw.iter().chain(&system.relations) {
        let lin = g.substitute(&assign)?;
        let mut row = vec![Rational::zero(); 9];
        for (e, c) in lin.terms() {
            let deg: u32 = e.iter().sum();
            if deg != 1 {
                // Constant terms can only come from the ring relations, which vanish here.
                return Err(Error::Parse(format!("nonlinear residual `{lin}` after substitution")));
            }
            let v = e.iter().position(|&x| x == 1).expect("degree one");
            let idx = X_VARS.iter().position(|x| *x == lin.vars()[v]).expect("x variable");
            row[idx] = c.clone();
        }
        rows.push(row);
    }
    let kernel = Matrix::from_rows(rows)?.kernel();
    let maps: Vec<Matrix> = kernel
        .basis()
        .iter()
        .map(|x| {
            let mut m = Matrix::zeros(3, 3);
            for r in 0..3 {
                for c in 0..3 {
                    let idx = X_VARS.iter().position(|v| *v == entry_var(r, c)).expect("x variable");
                    m[(r, c)] = x[idx].clone();
                }
            }
            m
        })
        .collect();
    let space = MapSpace::span(3, &maps)?;
    let dimension = space.dim();
    Ok(FixedReport {
        family: f,
        params: values.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        dimension,
        basis: space.basis(),
        published_claim: PUBLISHED_FIXED_DIMENSION,
        discrepancy: dimension != PUBLISHED_FIXED_DIMENSION,
    })
}

/// The same space through the generic solver, for cross-checking.
pub fn fixed_param_space(f: Sl2Family, values: &Params) -> Result<MapSpace> {
    Ok(der_sigma(&sl2(), &f.automorphism(values)?)?.maps)
}
