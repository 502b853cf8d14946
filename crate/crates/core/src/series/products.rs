//! q-Pochhammer products and theta sums.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{QSeries, SeriesError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// `self^n` for any integer `n`.
    pub fn pow(self, n: i64) -> Sign {
        if self == Sign::Minus && n.rem_euclid(2) == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// `±q^exponent`, the values substituted for the auxiliary variables of the
/// bivariate identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub sign: Sign,
    pub exponent: u32,
}

impl Monomial {
    pub const fn new(sign: Sign, exponent: u32) -> Self {
        Monomial { sign, exponent }
    }

    pub const fn plus(exponent: u32) -> Self {
        Monomial::new(Sign::Plus, exponent)
    }

    pub const fn minus(exponent: u32) -> Self {
        Monomial::new(Sign::Minus, exponent)
    }

    pub fn exp(self) -> i64 {
        i64::from(self.exponent)
    }

    pub fn negated(self) -> Self {
        Monomial::new(self.sign.flip(), self.exponent)
    }

    pub fn times(self, other: Monomial) -> Self {
        Monomial::new(self.sign.times(other.sign), self.exponent + other.exponent)
    }

    /// `self^n` as `(sign, exponent)`; the exponent may be large.
    pub fn pow(self, n: i64) -> (Sign, i64) {
        (self.sign.pow(n), self.exp() * n)
    }

    pub fn to_series(self, order: i64) -> QSeries {
        QSeries::monomial(self.sign.value(), self.exp(), order)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            Sign::Plus => "+",
            Sign::Minus => "-",
        };
        match self.exponent {
            0 => write!(f, "{s}1"),
            1 => write!(f, "{s}q"),
            e => write!(f, "{s}q^{e}"),
        }
    }
}

/// Number of factors in a q-Pochhammer product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Length {
    Finite(usize),
    Infinite,
}

/// `(a; q^step)_n = (1 - a)(1 - a q^step) ... (1 - a q^(step (n-1)))`
/// truncated at `order`.
///
/// The infinite product stops at the first factor that is `1` modulo
/// `q^(order+1)`. `(1; q)_∞` contains the factor `1 - 1` and is the zero
/// series.
pub fn pochhammer(a: Monomial, step: i64, n: Length, order: i64) -> Result<QSeries, SeriesError> {
    if step <= 0 {
        return Err(SeriesError::InvalidStep(step));
    }
    let mut acc = QSeries::one(order);
    let c = a.sign.value();
    let mut j: usize = 0;
    loop {
        if let Length::Finite(n) = n {
            if j >= n {
                break;
            }
        }
        let e = a.exp() + step * j as i64;
        // factors are increasing in degree; the rest are 1 modulo q^(order+1)
        if e > order {
            break;
        }
        acc.mul_one_minus(c, e);
        if acc.is_zero() {
            break;
        }
        j += 1;
    }
    Ok(acc)
}

/// `sum_{n >= 0} q^((2n+1)^2)` truncated at `order`.
pub fn theta_odd_squares(order: i64) -> QSeries {
    let terms = (0_i64..)
        .map(|n| (2 * n + 1) * (2 * n + 1))
        .take_while(|&e| e <= order)
        .map(|e| (e, BigInt::from(1)));
    QSeries::from_terms(terms, order)
}

/// The bilateral theta sum `sum_{n in Z} q^(n^2) z^n` at `z = ±q^m`, which is
/// `sum s^n q^(n^2 + m n)`. Exponents are bounded below by `-floor(m^2/4)`.
pub fn theta_jacobi(z: Monomial, order: i64) -> QSeries {
    let m = z.exp();
    let exponent = |n: i64| n * n + m * n;
    let vertex = -(m / 2);
    let mut terms = Vec::new();
    let mut n = vertex;
    while exponent(n) <= order {
        terms.push((exponent(n), BigInt::from(z.sign.pow(n).value())));
        n += 1;
    }
    let mut n = vertex - 1;
    while exponent(n) <= order {
        terms.push((exponent(n), BigInt::from(z.sign.pow(n).value())));
        n -= 1;
    }
    QSeries::from_terms(terms, order)
}
