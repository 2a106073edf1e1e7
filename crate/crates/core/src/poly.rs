//! Multivariate polynomials over the rationals in lex order, Buchberger's
//! algorithm, and ideal-level queries built on reduced Gröbner bases.
//!
//! The variable table is ordered from largest to smallest: the first variable
//! dominates in lex comparisons. Exponent vectors compare lexicographically as
//! plain `Vec<u32>`, so the leading term of a polynomial is the last map key.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Rational;

pub type Monomial = Vec<u32>;

/// Default cap on the number of polynomials Buchberger may add.
pub const DEFAULT_GUARD: usize = 5000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Monomial, Rational>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn quotient(b: &[u32], a: &[u32]) -> Monomial {
    b.iter().zip(a).map(|(y, x)| y - x).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

pub fn var_table<S: AsRef<str>>(names: &[S]) -> Arc<Vec<String>> {
    Arc::new(names.iter().map(|s| s.as_ref().to_string()).collect())
}

impl MultiPoly {
    pub fn zero(vars: &Arc<Vec<String>>) -> Self {
        MultiPoly { vars: Arc::clone(vars), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Arc<Vec<String>>, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &Arc<Vec<String>>) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: &Arc<Vec<String>>, name: &str) -> Result<Self> {
        let i = vars.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Ok(Self::monomial(vars, e, Rational::one()))
    }

    pub fn monomial(vars: &Arc<Vec<String>>, exps: Monomial, c: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.last_key_value()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Indices of variables that occur in some term.
    pub fn support(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|e| e.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, _)| i)).collect()
    }

    fn same_table(&self, other: &MultiPoly) -> Result<()> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VariableMismatch)
        }
    }

    fn add_term(&mut self, e: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    /// `self - c * x^e * g`, in place.
    fn sub_scaled(&mut self, c: &Rational, e: &[u32], g: &MultiPoly) {
        for (ge, gc) in &g.terms {
            let m: Monomial = ge.iter().zip(e).map(|(a, b)| a + b).collect();
            self.add_term(m, -(c * gc));
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly { vars: Arc::clone(&self.vars), terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => self.scale(&(Rational::one() / c)),
            None => self.clone(),
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<Self> {
        self.same_table(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<Self> {
        self.same_table(other)?;
        let mut out = Self::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.iter().zip(eb).map(|(a, b)| a + b).collect(), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.vars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Partial evaluation; assigned variables are dropped from the table.
    pub fn substitute(&self, values: &BTreeMap<String, Rational>) -> Result<Self> {
        for name in values.keys() {
            if !self.vars.contains(name) {
                return Err(Error::UnknownVariable(name.clone()));
            }
        }
        let keep: Vec<usize> = (0..self.vars.len()).filter(|&i| !values.contains_key(&self.vars[i])).collect();
        let vars = Arc::new(keep.iter().map(|&i| self.vars[i].clone()).collect::<Vec<_>>());
        Ok(self.substitute_into(values, &vars, &keep))
    }

    fn substitute_into(&self, values: &BTreeMap<String, Rational>, vars: &Arc<Vec<String>>, keep: &[usize]) -> Self {
        let mut out = Self::zero(vars);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    if let Some(v) = values.get(&self.vars[i]) {
                        coeff *= num_traits::pow(v.clone(), x as usize);
                    }
                }
            }
            out.add_term(keep.iter().map(|&i| e[i]).collect(), coeff);
        }
        out
    }

    /// Full evaluation at a point given by name.
    pub fn evaluate(&self, values: &BTreeMap<String, Rational>) -> Result<Rational> {
        let rest = self.substitute(values)?;
        if let Some(v) = rest.vars.first() {
            return Err(Error::MissingParameter(v.clone()));
        }
        Ok(rest.terms.values().next().cloned().unwrap_or_else(Rational::zero))
    }

    /// Replaces each variable by a polynomial over `target`; unmapped variables
    /// are carried over by name and must exist in `target`.
    pub fn compose(&self, images: &HashMap<String, MultiPoly>, target: &Arc<Vec<String>>) -> Result<Self> {
        let mut subs = Vec::with_capacity(self.vars.len());
        for name in self.vars.iter() {
            let p = match images.get(name) {
                Some(p) => {
                    if p.vars != *target {
                        return Err(Error::VariableMismatch);
                    }
                    p.clone()
                }
                None => MultiPoly::var(target, name)?,
            };
            subs.push(p);
        }
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    t = &t * &subs[i].pow(x);
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over a table that contains all of its variables.
    pub fn embed(&self, target: &Arc<Vec<String>>) -> Result<Self> {
        let map = self
            .vars
            .iter()
            .map(|v| target.iter().position(|t| t == v).ok_or_else(|| Error::UnknownVariable(v.clone())))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut m = vec![0; target.len()];
            for (i, &x) in e.iter().enumerate() {
                m[map[i]] += x;
            }
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    pub fn parse(vars: &Arc<Vec<String>>, s: &str) -> Result<Self> {
        let mut p = Parser { vars, src: s.as_bytes(), pos: 0 };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(out)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("shared variable table")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("shared variable table")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("shared variable table")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], x) })
                .collect();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    vars: &'a Arc<Vec<String>>,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in `{}`", self.pos, String::from_utf8_lossy(self.src)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let t = self.unary()?;
            if c == b'*' {
                acc = &acc * &t;
            } else {
                if !t.is_constant() || t.is_zero() {
                    return Err(self.error("division only by nonzero constants"));
                }
                let d = t.terms.values().next().expect("nonzero constant").clone();
                acc = acc.scale(&(Rational::one() / d));
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let k: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| self.error("expected exponent"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt =
                    std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").parse().expect("digits");
                Ok(MultiPoly::constant(self.vars, Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                MultiPoly::var(self.vars, std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
            }
            _ => Err(self.error("expected a number, variable or `(`")),
        }
    }
}

/// Quotients and remainder of multivariate division.
#[derive(Clone, Debug)]
pub struct Division {
    pub quotients: Vec<MultiPoly>,
    pub remainder: MultiPoly,
}

impl Division {
    /// Re-expands `Σ q_i g_i + r`.
    pub fn recombine(&self, divisors: &[MultiPoly]) -> MultiPoly {
        let mut acc = self.remainder.clone();
        for (q, g) in self.quotients.iter().zip(divisors) {
            acc = &acc + &(q * g);
        }
        acc
    }
}

/// Multivariate division: the first divisor whose leading term divides the
/// current leading term is used.
pub fn divide(p: &MultiPoly, divisors: &[MultiPoly]) -> Result<Division> {
    for g in divisors {
        p.same_table(g)?;
    }
    let vars = p.vars();
    let mut quotients = vec![MultiPoly::zero(vars); divisors.len()];
    let mut remainder = MultiPoly::zero(vars);
    let mut rest = p.clone();
    while let Some((e, c)) = rest.terms.last_key_value().map(|(e, c)| (e.clone(), c.clone())) {
        let hit = divisors.iter().enumerate().find_map(|(i, g)| {
            let (ge, gc) = g.leading()?;
            divides(ge, &e).then(|| (i, quotient(&e, ge), &c / gc))
        });
        match hit {
            Some((i, m, k)) => {
                quotients[i].add_term(m.clone(), k.clone());
                rest.sub_scaled(&k, &m, &divisors[i]);
            }
            None => {
                rest.terms.remove(&e);
                remainder.add_term(e, c);
            }
        }
    }
    Ok(Division { quotients, remainder })
}

/// Full reduction of `p` modulo `basis` (remainder only).
pub fn reduce(p: &MultiPoly, basis: &[MultiPoly]) -> MultiPoly {
    let mut remainder = MultiPoly::zero(p.vars());
    let mut rest = p.clone();
    while let Some((e, c)) = rest.terms.pop_last() {
        let hit = basis.iter().find(|g| g.leading().is_some_and(|(ge, _)| divides(ge, &e)));
        match hit {
            Some(g) => {
                let (ge, gc) = g.leading().expect("nonzero");
                let k = &c / gc;
                let m = quotient(&e, ge);
                // The leading term cancels exactly; subtract the tail only.
                for (te, tc) in g.terms.iter().rev().skip(1) {
                    let t: Monomial = te.iter().zip(&m).map(|(a, b)| a + b).collect();
                    rest.add_term(t, -(&k * tc));
                }
            }
            None => {
                remainder.terms.insert(e, c);
            }
        }
    }
    remainder
}

/// S-polynomial of two nonzero polynomials.
pub fn s_polynomial(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let (fe, fc) = f.leading().expect("nonzero f");
    let (ge, gc) = g.leading().expect("nonzero g");
    let l = lcm(fe, ge);
    let mut out = MultiPoly::zero(f.vars());
    out.sub_scaled(&-(Rational::one() / fc), &quotient(&l, fe), f);
    out.sub_scaled(&(Rational::one() / gc), &quotient(&l, ge), g);
    out
}

/// Reduced lex Gröbner basis, sorted by increasing leading monomial.
pub fn buchberger(gens: &[MultiPoly], guard: usize) -> Result<Vec<MultiPoly>> {
    let mut basis: Vec<MultiPoly> = Vec::new();
    for g in gens {
        let r = reduce(g, &basis);
        if !r.is_zero() {
            basis.push(r.monic());
        }
    }
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    // Pairs keyed by lcm so that the smallest lcm is processed first.
    let mut pairs: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    let push_pairs = |basis: &[MultiPoly], pairs: &mut BTreeSet<(Monomial, usize, usize)>, j: usize| {
        let je = basis[j].leading().expect("nonzero").0.clone();
        for (i, b) in basis.iter().enumerate().take(j) {
            let ie = b.leading().expect("nonzero").0;
            if !coprime(ie, &je) {
                pairs.insert((lcm(ie, &je), i, j));
            }
        }
    };
    for j in 0..basis.len() {
        push_pairs(&basis, &mut pairs, j);
    }
    let mut added = 0usize;
    while let Some((l, i, j)) = pairs.pop_first() {
        // Chain criterion: skip if some k has LT dividing l and both pairs
        // (i,k) and (j,k) were already handled.
        let skip = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && divides(basis[k].leading().expect("nonzero").0, &l)
                && !pair_pending(&pairs, &basis, i, k)
                && !pair_pending(&pairs, &basis, j, k)
        });
        if skip {
            continue;
        }
        let r = reduce(&s_polynomial(&basis[i], &basis[j]), &basis);
        if r.is_zero() {
            continue;
        }
        added += 1;
        if added > guard {
            return Err(Error::DegreeGuardExceeded(guard));
        }
        if r.is_constant() {
            return Ok(vec![MultiPoly::one(r.vars())]);
        }
        basis.push(r.monic());
        push_pairs(&basis, &mut pairs, basis.len() - 1);
    }
    Ok(reduce_basis(basis))
}

fn pair_pending(pairs: &BTreeSet<(Monomial, usize, usize)>, basis: &[MultiPoly], a: usize, b: usize) -> bool {
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    let l = lcm(basis[i].leading().expect("nonzero").0, basis[j].leading().expect("nonzero").0);
    pairs.contains(&(l, i, j))
}

/// Minimal, interreduced, monic basis in increasing leading-monomial order.
fn reduce_basis(basis: Vec<MultiPoly>) -> Vec<MultiPoly> {
    let mut minimal: Vec<MultiPoly> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let ge = g.leading().expect("nonzero").0;
        let redundant = basis.iter().enumerate().any(|(m, h)| {
            let he = h.leading().expect("nonzero").0;
            m != k && divides(he, ge) && (he != ge || m < k)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out: Vec<MultiPoly> = (0..minimal.len())
        .map(|k| {
            let others: Vec<MultiPoly> =
                minimal.iter().enumerate().filter(|(m, _)| *m != k).map(|(_, h)| h.clone()).collect();
            reduce(&minimal[k], &others).monic()
        })
        .collect();
    out.sort_by(|a, b| a.leading().expect("nonzero").0.cmp(b.leading().expect("nonzero").0));
    out
}

/// An ideal of `Q[vars]` with a lazily computed reduced Gröbner basis.
#[derive(Clone, Debug)]
pub struct Ideal {
    vars: Arc<Vec<String>>,
    gens: Vec<MultiPoly>,
    guard: usize,
    groebner: OnceLock<Vec<MultiPoly>>,
}

#[derive(Serialize, Deserialize)]
struct IdealFile {
    vars: Vec<String>,
    gens: Vec<String>,
}

/// Outcome of the triangular-linear primality criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeCheck {
    pub certified: bool,
    /// `triangular`, `triangular-localized` or `none`.
    pub criterion: String,
    pub leading_vars: Vec<String>,
    pub free_vars: Vec<String>,
    /// Monomials inverted by generators `v*m - c` (localized criterion only).
    pub inverted: Vec<String>,
    /// Krull dimension of the quotient when certified.
    pub dimension: Option<usize>,
}

impl Ideal {
    pub fn new(vars: &Arc<Vec<String>>, gens: Vec<MultiPoly>) -> Result<Self> {
        for g in &gens {
            if g.vars != *vars {
                return Err(Error::VariableMismatch);
            }
        }
        Ok(Ideal { vars: Arc::clone(vars), gens, guard: DEFAULT_GUARD, groebner: OnceLock::new() })
    }

    pub fn parse<S: AsRef<str>>(vars: &Arc<Vec<String>>, gens: &[S]) -> Result<Self> {
        let gens = gens.iter().map(|s| MultiPoly::parse(vars, s.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::new(vars, gens)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: IdealFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let vars = var_table(&f.vars);
        Self::parse(&vars, &f.gens)
    }

    pub fn to_json(&self) -> String {
        let f = IdealFile { vars: self.vars.to_vec(), gens: self.gens.iter().map(ToString::to_string).collect() };
        serde_json::to_string_pretty(&f).expect("serializable")
    }

    pub fn with_guard(mut self, guard: usize) -> Self {
        self.guard = guard;
        self.groebner = OnceLock::new();
        self
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn groebner(&self) -> Result<&[MultiPoly]> {
        if let Some(g) = self.groebner.get() {
            return Ok(g);
        }
        let g = buchberger(&self.gens, self.guard)?;
        Ok(self.groebner.get_or_init(|| g))
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner()?.iter().any(MultiPoly::is_constant))
    }

    pub fn normal_form(&self, p: &MultiPoly) -> Result<MultiPoly> {
        p.same_table(&MultiPoly::zero(&self.vars))?;
        Ok(reduce(p, self.groebner()?))
    }

    pub fn member(&self, p: &MultiPoly) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Every generator of `inner` lies in `self`.
    pub fn contains(&self, inner: &Ideal) -> Result<bool> {
        if self.vars != inner.vars {
            return Err(Error::VariableMismatch);
        }
        for g in &inner.gens {
            if !self.member(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch);
        }
        let gens = self.gens.iter().flat_map(|a| other.gens.iter().map(move |b| a * b)).collect();
        Ideal::new(&self.vars, gens)
    }

    pub fn substitute(&self, values: &BTreeMap<String, Rational>) -> Result<Ideal> {
        let gens = self.gens.iter().map(|g| g.substitute(values)).collect::<Result<Vec<_>>>()?;
        let vars = match gens.first() {
            Some(g) => Arc::clone(g.vars()),
            None => MultiPoly::zero(&self.vars).substitute(values)?.vars().clone(),
        };
        Ideal::new(&vars, gens)
    }

    /// Certifies primality when the reduced basis is `{v - q(free vars)}` with
    /// distinct leading variables `v`; the quotient is then a polynomial ring.
    ///
    /// As a labelled extension, basis elements `v*m - c` in the free variables
    /// (`c` a nonzero constant, `m` a monomial, each `v` used once and absent
    /// from every `m`) are accepted: the quotient is then a localization of a
    /// polynomial ring, still a domain.
    pub fn triangular_prime_check(&self) -> Result<PrimeCheck> {
        let gb = self.groebner()?;
        let n = self.vars.len();
        let unit = gb.iter().any(MultiPoly::is_constant);
        let mut leading = BTreeSet::new();
        let mut linear = Vec::new();
        let mut rest = Vec::new();
        for g in gb {
            let (e, _) = g.leading().expect("nonzero");
            let deg: u32 = e.iter().sum();
            let v = e.iter().position(|&x| x > 0);
            match v {
                Some(v) if deg == 1 && !leading.contains(&v) => {
                    leading.insert(v);
                    linear.push(g);
                }
                _ => rest.push(g),
            }
        }
        let tail_ok = linear.iter().all(|g| {
            let lead = g.leading().expect("nonzero").0;
            g.terms
                .keys()
                .filter(|e| *e != lead)
                .all(|e| e.iter().enumerate().all(|(i, &x)| x == 0 || !leading.contains(&i)))
        });
        // Localizers: v*m - c with support in the free variables.
        let mut loc_vars = BTreeSet::new();
        let mut inverted = Vec::new();
        let mut loc_ok = true;
        for g in &rest {
            let mut it = g.terms.iter();
            let shape = match (it.next(), it.next(), it.next()) {
                (Some((c0, _)), Some((e, _)), None) if c0.iter().all(|&x| x == 0) => Some(e),
                _ => None,
            };
            let Some(e) = shape else {
                loc_ok = false;
                break;
            };
            if e.iter().enumerate().any(|(i, &x)| x > 0 && leading.contains(&i)) {
                loc_ok = false;
                break;
            }
            let Some(v) = e.iter().rposition(|&x| x == 1) else {
                loc_ok = false;
                break;
            };
            if !loc_vars.insert(v) {
                loc_ok = false;
                break;
            }
            let mut m = e.clone();
            m[v] = 0;
            inverted.push((v, m));
        }
        if inverted.iter().any(|(_, m)| m.iter().enumerate().any(|(i, &x)| x > 0 && loc_vars.contains(&i))) {
            loc_ok = false;
        }
        let criterion = match (unit, tail_ok, rest.is_empty(), loc_ok) {
            (false, true, true, _) => "triangular",
            (false, true, false, true) => "triangular-localized",
            _ => "none",
        };
        let certified = criterion != "none";
        let name = |i: usize| self.vars[i].clone();
        let free: Vec<usize> = (0..n).filter(|i| !leading.contains(i)).collect();
        let inverted = if criterion == "triangular-localized" {
            inverted
                .iter()
                .map(|(_, m)| MultiPoly::monomial(&self.vars, m.clone(), Rational::one()).to_string())
                .collect()
        } else {
            Vec::new()
        };
        Ok(PrimeCheck {
            certified,
            criterion: criterion.to_string(),
            leading_vars: leading.iter().map(|&i| name(i)).collect(),
            free_vars: free.iter().map(|&i| name(i)).collect(),
            dimension: certified.then(|| free.len() - inverted.len()),
            inverted,
        })
    }
}
