//! Truncated Laurent series in one variable `q` with arbitrary-precision
//! integer coefficients.
//!
//! A [`QSeries`] is known exactly for every exponent up to its truncation
//! order and says nothing about higher exponents. Every operation tracks the
//! order it can certify, so precision loss shows up in the result instead of
//! silently corrupting coefficients.

mod products;

use std::cmp::{max, min};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use products::{pochhammer, theta_jacobi, theta_odd_squares, Length, Monomial, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("lowest coefficient {0} is not a unit")]
    NotAUnit(String),
    #[error("series is known to q^{known} but q^{required} is needed")]
    InsufficientPrecision { known: i64, required: i64 },
    #[error("q-step must be positive, got {0}")]
    InvalidStep(i64),
    #[error("malformed series: {0}")]
    Malformed(String),
}

/// A truncated Laurent series `sum c_t q^(valuation + t) + O(q^(order + 1))`.
///
/// The coefficient vector is kept canonical: its first and last entries are
/// nonzero and it never reaches past the truncation order. The series that is
/// zero on its whole known range has an empty vector and valuation
/// `order + 1`.
#[derive(Clone, Debug)]
pub struct QSeries {
    valuation: i64,
    coeffs: Vec<BigInt>,
    order: i64,
}

/// First exponent at which two series disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub exponent: i64,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl QSeries {
    pub fn zero(order: i64) -> Self {
        QSeries {
            valuation: order.saturating_add(1),
            coeffs: Vec::new(),
            order,
        }
    }

    pub fn one(order: i64) -> Self {
        Self::monomial(1, 0, order)
    }

    /// `c * q^exponent`, truncated at `order`.
    pub fn monomial(c: impl Into<BigInt>, exponent: i64, order: i64) -> Self {
        Self::from_coefficients(exponent, vec![c.into()], order)
    }

    /// Builds a series from the coefficient of `q^(valuation + t)` at offset `t`.
    pub fn from_coefficients(valuation: i64, coeffs: Vec<BigInt>, order: i64) -> Self {
        let mut s = QSeries {
            valuation,
            coeffs,
            order,
        };
        s.canonicalize();
        s
    }

    /// Builds a series from `(exponent, coefficient)` pairs; repeated exponents
    /// accumulate and exponents above `order` are dropped.
    pub fn from_terms<I>(terms: I, order: i64) -> Self
    where
        I: IntoIterator<Item = (i64, BigInt)>,
    {
        let terms: Vec<(i64, BigInt)> = terms.into_iter().filter(|(e, _)| *e <= order).collect();
        let Some(lo) = terms.iter().map(|(e, _)| *e).min() else {
            return Self::zero(order);
        };
        let hi = terms.iter().map(|(e, _)| *e).max().unwrap_or(lo);
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::from_coefficients(lo, coeffs, order)
    }

    fn canonicalize(&mut self) {
        let room = self.order.saturating_sub(self.valuation).saturating_add(1);
        if room <= 0 {
            self.coeffs.clear();
        } else if (room as u128) < self.coeffs.len() as u128 {
            self.coeffs.truncate(room as usize);
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.valuation = self.order.saturating_add(1);
            return;
        }
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.valuation += lead as i64;
        }
    }

    /// Exponent of the lowest nonzero coefficient, or `order + 1` when the
    /// series vanishes on its whole known range.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn truncation_order(&self) -> i64 {
        self.order
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `q^exponent`, or `None` past the truncation order.
    pub fn coeff(&self, exponent: i64) -> Option<BigInt> {
        if exponent > self.order {
            return None;
        }
        let offset = exponent - self.valuation;
        if offset < 0 || offset as usize >= self.coeffs.len() {
            Some(BigInt::zero())
        } else {
            Some(self.coeffs[offset as usize].clone())
        }
    }

    /// Nonzero terms as `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(t, c)| (self.valuation + t as i64, c))
    }

    /// True when every known coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Lowers the truncation order to `min(self.order, order)`.
    pub fn truncate(&self, order: i64) -> Self {
        Self::from_coefficients(self.valuation, self.coeffs.clone(), min(self.order, order))
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        QSeries {
            valuation: self.valuation.saturating_add(k),
            coeffs: self.coeffs.clone(),
            order: self.order.saturating_add(k),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coefficients(
            self.valuation,
            self.coeffs.iter().map(|x| x * c).collect(),
            self.order,
        )
    }

    /// Multiplies in place by the binomial `1 - c q^e` with `e >= 0`.
    pub(crate) fn mul_one_minus(&mut self, c: i64, e: i64) {
        debug_assert!(e >= 0);
        if self.is_zero() {
            return;
        }
        if e == 0 {
            let k = BigInt::from(1 - c);
            for x in &mut self.coeffs {
                *x *= &k;
            }
            self.canonicalize();
            return;
        }
        let room = (self.order - self.valuation + 1) as usize;
        let e = e as usize;
        let new_len = min(room, self.coeffs.len() + e);
        self.coeffs.resize(new_len, BigInt::zero());
        for t in (e..new_len).rev() {
            if self.coeffs[t - e].is_zero() {
                continue;
            }
            let delta = &self.coeffs[t - e] * c;
            self.coeffs[t] -= delta;
        }
        self.canonicalize();
    }

    /// Cauchy product. The result is known to
    /// `min(self.order + rhs.valuation, rhs.order + self.valuation)`.
    pub fn mul_series(&self, rhs: &QSeries) -> QSeries {
        let order = min(
            self.order.saturating_add(rhs.valuation),
            rhs.order.saturating_add(self.valuation),
        );
        if self.is_zero() || rhs.is_zero() {
            return QSeries::zero(order);
        }
        let valuation = self.valuation + rhs.valuation;
        if valuation > order {
            return QSeries::zero(order);
        }
        let len = (order - valuation + 1) as usize;
        let mut out = vec![BigInt::zero(); min(len, self.coeffs.len() + rhs.coeffs.len() - 1)];
        let (sparse, dense) = if self.nonzero_count() <= rhs.nonzero_count() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let len = out.len();
        for (s, a) in sparse.coeffs.iter().enumerate() {
            if s >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            let lim = min(dense.coeffs.len(), len - s);
            for (t, b) in dense.coeffs[..lim].iter().enumerate() {
                if !b.is_zero() {
                    out[s + t] += a * b;
                }
            }
        }
        QSeries::from_coefficients(valuation, out, order)
    }

    pub fn add_series(&self, rhs: &QSeries) -> QSeries {
        self.combine(rhs, false)
    }

    pub fn sub_series(&self, rhs: &QSeries) -> QSeries {
        self.combine(rhs, true)
    }

    fn combine(&self, rhs: &QSeries, subtract: bool) -> QSeries {
        let order = min(self.order, rhs.order);
        if self.is_zero() && rhs.is_zero() {
            return QSeries::zero(order);
        }
        let lo = min(self.valuation, rhs.valuation);
        let hi = max(
            self.valuation + self.coeffs.len() as i64,
            rhs.valuation + rhs.coeffs.len() as i64,
        )
        .min(order.saturating_add(1));
        if hi <= lo {
            return QSeries::zero(order);
        }
        let mut out = vec![BigInt::zero(); (hi - lo) as usize];
        for (e, c) in self.terms() {
            if e < hi {
                out[(e - lo) as usize] += c;
            }
        }
        for (e, c) in rhs.terms() {
            if e < hi {
                if subtract {
                    out[(e - lo) as usize] -= c;
                } else {
                    out[(e - lo) as usize] += c;
                }
            }
        }
        QSeries::from_coefficients(lo, out, order)
    }

    /// Inverse of a series whose lowest coefficient is `+1` or `-1`, returned
    /// to truncation order `order`.
    ///
    /// With `v` the valuation of `self`, the inverse has valuation `-v` and
    /// needs `self` known to `order + 2v`.
    pub fn invert_unit(&self, order: i64) -> Result<QSeries, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::NotAUnit("0".into()));
        }
        let lead = &self.coeffs[0];
        if !lead.abs().is_one() {
            return Err(SeriesError::NotAUnit(lead.to_string()));
        }
        let v = self.valuation;
        let required = order.saturating_add(2 * v);
        if self.order < required {
            return Err(SeriesError::InsufficientPrecision {
                known: self.order,
                required,
            });
        }
        // h = 1/u where u = self / q^v has constant term `lead`.
        let n = order + v;
        if n < 0 {
            return Ok(QSeries::zero(order));
        }
        let n = n as usize;
        let tail: Vec<(usize, &BigInt)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(t, c)| *t <= n && !c.is_zero())
            .collect();
        let mut h: Vec<BigInt> = Vec::with_capacity(n + 1);
        h.push(lead.clone());
        for k in 1..=n {
            let mut acc = BigInt::zero();
            for &(t, c) in &tail {
                if t > k {
                    break;
                }
                let prev = &h[k - t];
                if !prev.is_zero() {
                    acc += c * prev;
                }
            }
            // lead is +-1, so dividing by it is multiplying by it.
            h.push(-(acc * lead));
        }
        Ok(QSeries::from_coefficients(-v, h, order))
    }

    /// Smallest exponent, up to the common truncation order, where the two
    /// series differ.
    pub fn first_mismatch(&self, other: &QSeries) -> Option<Mismatch> {
        let order = min(self.order, other.order);
        let lo = min(self.valuation, other.valuation);
        let mut e = lo;
        while e <= order {
            let a = self.coeff(e).unwrap_or_default();
            let b = other.coeff(e).unwrap_or_default();
            if a != b {
                return Some(Mismatch {
                    exponent: e,
                    lhs: a,
                    rhs: b,
                });
            }
            let next_a = self.next_nonzero_after(e);
            let next_b = other.next_nonzero_after(e);
            e = match (next_a, next_b) {
                (Some(x), Some(y)) => min(x, y),
                (Some(x), None) | (None, Some(x)) => x,
                (None, None) => return None,
            };
        }
        None
    }

    fn next_nonzero_after(&self, e: i64) -> Option<i64> {
        let start = max(e + 1 - self.valuation, 0) as usize;
        self.coeffs
            .iter()
            .enumerate()
            .skip(start)
            .find(|(_, c)| !c.is_zero())
            .map(|(t, _)| self.valuation + t as i64)
    }

    /// Coefficientwise equality on the exponents both series know.
    pub fn agrees_with(&self, other: &QSeries) -> bool {
        self.first_mismatch(other).is_none()
    }

    /// Renders the known terms without the `O(...)` tail.
    pub fn to_polynomial_string(&self) -> String {
        render_terms(self.terms(), usize::MAX).unwrap_or_else(|| "0".into())
    }

    /// Renders at most `max_terms` nonzero terms followed by `…` when more
    /// remain.
    pub fn head_string(&self, max_terms: usize) -> String {
        let body = render_terms(self.terms(), max_terms).unwrap_or_else(|| "0".into());
        if self.nonzero_count() > max_terms {
            format!("{body} + …")
        } else {
            body
        }
    }
}

fn render_terms<'a>(terms: impl Iterator<Item = (i64, &'a BigInt)>, limit: usize) -> Option<String> {
    let mut out = String::new();
    for (idx, (e, c)) in terms.take(limit).enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let var = match e {
            0 => String::new(),
            1 => "q".to_string(),
            _ => format!("q^{e}"),
        };
        if var.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&var);
        } else {
            out.push_str(&format!("{mag}{var}"));
        }
    }
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let next = self.order.saturating_add(1);
        if self.is_zero() {
            write!(f, "O(q^{next})")
        } else {
            write!(f, "{} + O(q^{next})", self.to_polynomial_string())
        }
    }
}

/// Coefficientwise agreement on the common known range; not transitive.
impl PartialEq for QSeries {
    fn eq(&self, other: &Self) -> bool {
        self.agrees_with(other)
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.add_series(rhs)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self.sub_series(rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        self.mul_series(rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            order: self.order,
        }
    }
}

impl Neg for QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    valuation: i64,
    truncation_order: i64,
    coefficients: Vec<String>,
}

impl Serialize for QSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SeriesRepr {
            valuation: self.valuation,
            truncation_order: self.order,
            coefficients: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(deserializer)?;
        QSeries::try_from(repr).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<SeriesRepr> for QSeries {
    type Error = SeriesError;

    fn try_from(repr: SeriesRepr) -> Result<Self, Self::Error> {
        if repr.valuation > repr.truncation_order.saturating_add(1) {
            return Err(SeriesError::Malformed(format!(
                "valuation {} exceeds truncation order {} + 1",
                repr.valuation, repr.truncation_order
            )));
        }
        let coeffs = repr
            .coefficients
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| SeriesError::Malformed(format!("bad coefficient {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QSeries::from_coefficients(repr.valuation, coeffs, repr.truncation_order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(valuation: i64, coeffs: &[i64], order: i64) -> QSeries {
        QSeries::from_coefficients(valuation, coeffs.iter().map(|&c| BigInt::from(c)).collect(), order)
    }

    fn exps(f: &QSeries) -> Vec<(i64, i64)> {
        f.terms().map(|(e, c)| (e, i64::try_from(c).unwrap())).collect()
    }

    #[test]
    fn add_cancels_and_moves_valuation() {
        let f = s(0, &[1, 1], 10);
        let g = s(0, &[-1, 1], 10);
        let h = &f + &g;
        assert_eq!(h.valuation(), 1);
        assert_eq!(exps(&h), vec![(1, 2)]);
    }

    #[test]
    fn add_zero_is_identity() {
        let f = s(-2, &[3, 0, 1], 7);
        let h = &f + &QSeries::zero(7);
        assert_eq!(exps(&h), exps(&f));
        assert_eq!(h.truncation_order(), 7);
    }

    #[test]
    fn add_takes_min_order() {
        let f = QSeries::from_terms([(1, 1.into()), (9, 1.into())], 10);
        let g = QSeries::monomial(1, 25, 30);
        let h = &f + &g;
        assert_eq!(h.truncation_order(), 10);
        assert_eq!(exps(&h), vec![(1, 1), (9, 1)]);
    }

    #[test]
    fn mul_examples() {
        let h = &s(0, &[1, 1], 20) * &s(0, &[1, -1], 20);
        assert_eq!(exps(&h), vec![(0, 1), (2, -1)]);

        let h = &QSeries::monomial(1, -1, 20) * &QSeries::monomial(1, 3, 20);
        assert_eq!(exps(&h), vec![(2, 1)]);

        let h = &s(0, &[1, 1, 1], 2) * &s(0, &[1, 1], 2);
        assert_eq!(exps(&h), vec![(0, 1), (1, 2), (2, 2)]);
        assert_eq!(h.truncation_order(), 2);
    }

    #[test]
    fn mul_order_tracks_valuation_shift() {
        let f = QSeries::monomial(1, 3, 10);
        let g = QSeries::monomial(1, -2, 5);
        let h = &f * &g;
        // f's unknown tail starts at 11 and is shifted by -2; g's at 6 shifted by 3.
        assert_eq!(h.truncation_order(), 8);
    }

    #[test]
    fn invert_unit_examples() {
        let g = s(0, &[1, -1], 4).invert_unit(4).unwrap();
        assert_eq!(exps(&g), vec![(0, 1), (1, 1), (2, 1), (3, 1), (4, 1)]);

        let g = QSeries::one(9).invert_unit(9).unwrap();
        assert_eq!(exps(&g), vec![(0, 1)]);

        let g = QSeries::from_terms([(0, 1.into()), (8, (-1).into())], 20)
            .invert_unit(20)
            .unwrap();
        assert_eq!(exps(&g), vec![(0, 1), (8, 1), (16, 1)]);
    }

    #[test]
    fn invert_unit_laurent() {
        let f = QSeries::from_terms([(-1, (-1).into()), (0, 1.into())], 30);
        let g = f.invert_unit(10).unwrap();
        assert_eq!(g.valuation(), 1);
        let one = &f * &g;
        assert!(one.agrees_with(&QSeries::one(10)));
    }

    #[test]
    fn invert_unit_errors() {
        assert_eq!(
            s(0, &[2, 1], 10).invert_unit(5),
            Err(SeriesError::NotAUnit("2".into()))
        );
        assert!(QSeries::zero(5).invert_unit(5).is_err());
        assert_eq!(
            s(0, &[1, -1], 3).invert_unit(5),
            Err(SeriesError::InsufficientPrecision { known: 3, required: 5 })
        );
    }

    #[test]
    fn first_mismatch_reports_smallest_exponent() {
        let f = s(0, &[1, 0, 2, 5], 10);
        let g = s(0, &[1, 0, 3, 7], 10);
        let m = f.first_mismatch(&g).unwrap();
        assert_eq!(m.exponent, 2);
        assert_eq!(m.lhs, BigInt::from(2));
        assert_eq!(m.rhs, BigInt::from(3));
        // Disagreement beyond the shorter order is invisible.
        let f = s(0, &[1, 0, 2], 1);
        assert!(f.first_mismatch(&g).is_none());
    }

    #[test]
    fn canonical_zero() {
        let z = s(3, &[0, 0, 0], 4);
        assert!(z.is_zero());
        assert_eq!(z.valuation(), 5);
        let t = s(0, &[1, 2, 3, 4], 1);
        assert_eq!(t.coefficients().len(), 2);
    }

    #[test]
    fn json_uses_decimal_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let f = QSeries::from_coefficients(-1, vec![big.clone(), 0.into(), (-3).into()], 8);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(
            json,
            r#"{"valuation":-1,"truncation_order":8,"coefficients":["123456789012345678901234567890","0","-3"]}"#
        );
        let back: QSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back.coefficients(), f.coefficients());
        assert_eq!(back.truncation_order(), 8);
        assert!(serde_json::from_str::<QSeries>(
            r#"{"valuation":12,"truncation_order":8,"coefficients":[]}"#
        )
        .is_err());
    }

    #[test]
    fn display() {
        let f = QSeries::from_terms([(0, 1.into()), (1, (-1).into()), (2, (-2).into())], 4);
        assert_eq!(f.to_string(), "1 - q - 2q^2 + O(q^5)");
        assert_eq!(f.head_string(2), "1 - q + …");
        assert_eq!(QSeries::zero(3).to_string(), "O(q^4)");
    }
}
