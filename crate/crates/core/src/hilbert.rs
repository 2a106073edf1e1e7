//! Graded dimensions `k -> dim Der_{σ^k}(g)` for a cyclic group `<σ>` and
//! their generating series.
//!
//! Nothing here extrapolates past the computed window unless a period was
//! detected on it, and even then the series is labelled with the window.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{Automorphism, LieAlgebra};
use crate::error::{Error, Result};
use crate::gderiv::{der_sigma, plus_interior, DerivationKind};

pub const DEFAULT_WINDOW: usize = 8;
pub const DEFAULT_ORDER_BOUND: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedDims {
    pub kind: DerivationKind,
    /// Half-width `K` of the window for infinite order.
    pub window: usize,
    pub finite_order: Option<usize>,
    pub dims: BTreeMap<i64, usize>,
}

impl GradedDims {
    /// `dim` in degree `k`; finite-order gradings are read modulo the order.
    pub fn get(&self, k: i64) -> Option<usize> {
        match self.finite_order {
            Some(m) => self.dims.get(&k.rem_euclid(m as i64)).copied(),
            None => self.dims.get(&k).copied(),
        }
    }
}

pub fn graded_dims(
    g: &LieAlgebra,
    sigma: &Automorphism,
    kind: DerivationKind,
    window: usize,
    order_bound: usize,
) -> Result<GradedDims> {
    if kind == DerivationKind::Minus {
        return Err(Error::Parse("graded dimensions support kinds plain and plus".into()));
    }
    let finite_order = sigma.matrix().order(order_bound)?;
    let range: Vec<i64> = match finite_order {
        Some(m) => (0..m as i64).collect(),
        None => (-(window as i64)..=window as i64).collect(),
    };
    let mut dims = BTreeMap::new();
    for k in range {
        let s = sigma.pow(k);
        let d = match kind {
            DerivationKind::Plus => plus_interior(g, &s)?.dim(),
            _ => der_sigma(g, &s)?.dim(),
        };
        dims.insert(k, d);
    }
    Ok(GradedDims { kind, window, finite_order, dims })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Period {
    pub cutoff: usize,
    pub period: usize,
}

/// Least period `p`, then least cutoff `c`, with `dims(±k) = dims(±(k+p))`
/// for `c <= k <= K-p`. Every residue class mod `p` must be compared at least
/// once, so `c <= K - 2p + 1`.
pub fn detect_period(gd: &GradedDims) -> Result<Option<Period>> {
    if gd.finite_order.is_some() {
        return Err(Error::FiniteOrderInput);
    }
    let k_max = gd.window as i64;
    for p in 1..=k_max {
        for c in 0..=(k_max - 2 * p + 1) {
            let fits = (c..=k_max - p).all(|k| gd.get(k) == gd.get(k + p) && gd.get(-k) == gd.get(-k - p));
            if fits {
                return Ok(Some(Period { cutoff: c as usize, period: p as usize }));
            }
        }
    }
    Ok(None)
}

/// `t^start * (Σ numerator_i t^i) / (1 - t^period)` in the variable `t` or `t⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tail {
    pub start: usize,
    pub numerator: Vec<usize>,
    pub period: usize,
}

impl Tail {
    fn coefficient(&self, k: usize) -> usize {
        if k < self.start {
            0
        } else {
            self.numerator[(k - self.start) % self.period]
        }
    }

    fn render(&self, var: &str) -> Option<String> {
        let terms: Vec<String> = self
            .numerator
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| monomial(c, &power(var, self.start + i)))
            .collect();
        if terms.is_empty() {
            return None;
        }
        let num = if terms.len() == 1 { terms[0].clone() } else { format!("({})", terms.join(" + ")) };
        Some(format!("{num}/(1 - {})", power(var, self.period)))
    }
}

fn power(var: &str, e: usize) -> String {
    match e {
        0 => "1".into(),
        1 => var.into(),
        _ if var.ends_with("^-1") => format!("t^-{e}"),
        _ => format!("{var}^{e}"),
    }
}

fn monomial(c: usize, m: &str) -> String {
    match (c, m) {
        (_, "1") => c.to_string(),
        (1, _) => m.to_string(),
        _ => format!("{c}*{m}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalSeries {
    /// Coefficients of the Laurent polynomial part, keyed by exponent.
    pub polynomial: BTreeMap<i64, usize>,
    pub positive_tail: Option<Tail>,
    /// Tail in the variable `t⁻¹`.
    pub negative_tail: Option<Tail>,
    /// `Some(K)` when the closed form was extrapolated from a window of half-width `K`.
    pub certified_to: Option<usize>,
}

impl RationalSeries {
    pub fn coefficient(&self, k: i64) -> usize {
        let poly = self.polynomial.get(&k).copied().unwrap_or(0);
        let tail = match k {
            k if k > 0 => self.positive_tail.as_ref().map_or(0, |t| t.coefficient(k as usize)),
            k if k < 0 => self.negative_tail.as_ref().map_or(0, |t| t.coefficient(k.unsigned_abs() as usize)),
            _ => 0,
        };
        poly + tail
    }

    pub fn expand(&self, from: i64, to: i64) -> BTreeMap<i64, usize> {
        (from..=to).map(|k| (k, self.coefficient(k))).collect()
    }

    pub fn label(&self) -> String {
        match self.certified_to {
            Some(k) => format!("window-certified to {k}"),
            None => "exact".into(),
        }
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .polynomial
            .iter()
            .filter(|(_, &c)| c != 0)
            .map(|(&e, &c)| match e {
                0 => c.to_string(),
                e if e < 0 => monomial(c, &format!("t^{e}")),
                e => monomial(c, &power("t", e as usize)),
            })
            .collect();
        parts.extend(self.positive_tail.as_ref().and_then(|t| t.render("t")));
        parts.extend(self.negative_tail.as_ref().and_then(|t| t.render("t^-1")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Closed form for an infinite-order window with the given cutoff and period.
pub fn rational_series(gd: &GradedDims, cutoff: usize, period: usize) -> Result<RationalSeries> {
    if gd.finite_order.is_some() {
        return Err(Error::FiniteOrderInput);
    }
    let k_max = gd.window;
    if period == 0 || cutoff.max(1) + period > k_max + 1 {
        return Err(Error::NoPeriod);
    }
    let start = cutoff.max(1);
    let at = |k: i64| gd.get(k).ok_or(Error::NoPeriod);
    let polynomial = (-(start as i64) + 1..start as i64).map(|k| Ok((k, at(k)?))).collect::<Result<_>>()?;
    let positive = (0..period).map(|i| at((start + i) as i64)).collect::<Result<Vec<_>>>()?;
    let negative = (0..period).map(|i| at(-((start + i) as i64))).collect::<Result<Vec<_>>>()?;
    let series = RationalSeries {
        polynomial,
        positive_tail: Some(Tail { start, numerator: positive, period }),
        negative_tail: Some(Tail { start, numerator: negative, period }),
        certified_to: Some(k_max),
    };
    let window = -(k_max as i64)..=k_max as i64;
    if window.clone().any(|k| Some(series.coefficient(k)) != gd.get(k)) {
        return Err(Error::NoPeriod);
    }
    Ok(series)
}

/// Polynomial series for finite order, or the detected closed form otherwise.
pub fn series(gd: &GradedDims) -> Result<RationalSeries> {
    match gd.finite_order {
        Some(_) => Ok(RationalSeries {
            polynomial: gd.dims.iter().map(|(&k, &d)| (k, d)).collect(),
            positive_tail: None,
            negative_tail: None,
            certified_to: None,
        }),
        None => {
            let p = detect_period(gd)?.ok_or(Error::NoPeriod)?;
            rational_series(gd, p.cutoff, p.period)
        }
    }
}
