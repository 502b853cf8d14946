//! Brute-force representation counts.
//!
//! These are the independent oracles for every generating-function check:
//! ordered tuples of positive odd integers with a given sum of squares,
//! ordered tuples in a residue class mod 4 with a given cyclic form
//! `x1 x2 + x2 x3 + ... + xk x1`, decompositions into triangular numbers,
//! Kronecker's reduced-form count and the classical `r_2`, `r_4`.
//!
//! All enumerations are depth-first with a lower bound on what the
//! undetermined variables must still contribute, and the last variable is
//! solved for directly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec;
use crate::report::{Discrepancy, ReportBuilder, VerificationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("count does not fit in 64 bits")]
    Overflow,
    #[error("{0} must be odd")]
    OddRequired(u64),
    #[error("{0} is not congruent to 3 mod 8")]
    CongruenceViolation(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Residue {
    One,
    Three,
}

impl Residue {
    pub fn value(self) -> u64 {
        match self {
            Residue::One => 1,
            Residue::Three => 3,
        }
    }
}

/// Ordered `k`-tuples of positive integers congruent to `residue` mod 4,
/// counted by the value of their cyclic form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicFormSpec {
    pub k: usize,
    pub residue: Residue,
}

impl CyclicFormSpec {
    pub const MODULUS: u64 = 4;

    pub fn new(k: usize, residue: Residue) -> Result<Self, CountError> {
        if k == 0 {
            return Err(CountError::InvalidArgument("k must be at least 1".into()));
        }
        Ok(CyclicFormSpec { k, residue })
    }

    pub fn count(&self, n: u64) -> Result<u64, CountError> {
        cyclic_count(*self, n)
    }
}

/// Ordered `k`-tuples of positive odd integers, counted by their sum of
/// squares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OddSquaresSpec {
    pub k: usize,
}

impl OddSquaresSpec {
    pub fn count(&self, n: u64) -> Result<u64, CountError> {
        odd_squares_count(self.k, n)
    }
}

fn tally(acc: u64, add: u64) -> Result<u64, CountError> {
    acc.checked_add(add).ok_or(CountError::Overflow)
}

fn require_k(k: usize) -> Result<(), CountError> {
    if k == 0 {
        Err(CountError::InvalidArgument("k must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Exact integer square root.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn exact_sqrt(n: u64) -> Option<u64> {
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

/// `r_k(n)`: ordered `k`-tuples of positive odd integers with
/// `x1^2 + ... + xk^2 = n`.
pub fn odd_squares_count(k: usize, n: u64) -> Result<u64, CountError> {
    require_k(k)?;
    fn go(vars: usize, rem: u64) -> Result<u64, CountError> {
        if vars == 1 {
            return Ok(match exact_sqrt(rem) {
                Some(x) if x % 2 == 1 => 1,
                _ => 0,
            });
        }
        let mut total = 0;
        let mut x = 1u64;
        // each of the other vars - 1 variables contributes at least 1
        while x * x + (vars as u64 - 1) <= rem {
            total = tally(total, go(vars - 1, rem - x * x)?)?;
            x += 2;
        }
        Ok(total)
    }
    go(k, n)
}

/// `c_k(n)` for the given residue class: ordered `k`-tuples with
/// `x1 x2 + x2 x3 + ... + x_{k-1} x_k + x_k x1 = n`. For `k = 1` the form is
/// `x1^2` and for `k = 2` it is `2 x1 x2`.
pub fn cyclic_count(spec: CyclicFormSpec, n: u64) -> Result<u64, CountError> {
    require_k(spec.k)?;
    let r = spec.residue.value();
    let k = spec.k;
    if k == 1 {
        return Ok(match exact_sqrt(n) {
            Some(x) if x % 4 == r => 1,
            _ => 0,
        });
    }

    struct Walk {
        k: usize,
        r: u64,
        n: u64,
    }

    impl Walk {
        /// Minimum contribution of the products not yet determined once
        /// `x_c` is fixed: `x_c x_{c+1} + ... + x_k x_1`.
        fn rest(&self, c: usize, xc: u64, x1: u64) -> u64 {
            self.r * xc + self.r * x1 + (self.k - c - 1) as u64 * self.r * self.r
        }

        /// `c` variables are fixed, the last one being `prev`.
        fn go(&self, c: usize, x1: u64, prev: u64, partial: u64) -> Result<u64, CountError> {
            if c == self.k - 1 {
                // x_k (x_{k-1} + x_1) = n - partial
                let rem = self.n - partial;
                let denom = prev + x1;
                return Ok(
                    if rem > 0 && rem % denom == 0 && (rem / denom) % 4 == self.r {
                        1
                    } else {
                        0
                    },
                );
            }
            let mut total = 0;
            let mut x = self.r;
            loop {
                let next = partial + prev * x;
                if next + self.rest(c + 1, x, x1) > self.n {
                    break;
                }
                total = tally(total, self.go(c + 1, x1, x, next)?)?;
                x += 4;
            }
            Ok(total)
        }
    }

    let walk = Walk { k, r, n };
    let mut total = 0;
    let mut x1 = r;
    while walk.rest(1, x1, x1) <= n {
        total = tally(total, walk.go(1, x1, x1, 0)?)?;
        x1 += 4;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumontCheck {
    pub k: usize,
    pub n: u64,
    pub r: u64,
    pub c1: u64,
    pub c3: u64,
    pub holds: bool,
}

/// Evaluates `r_k(n) = c_k^{1}(n) - (-1)^k c_k^{3}(n)` by brute force.
pub fn check_dumont(k: usize, n: u64) -> Result<DumontCheck, CountError> {
    let r = odd_squares_count(k, n)?;
    let c1 = cyclic_count(CyclicFormSpec::new(k, Residue::One)?, n)?;
    let c3 = cyclic_count(CyclicFormSpec::new(k, Residue::Three)?, n)?;
    let sign: i128 = if k % 2 == 0 { 1 } else { -1 };
    let holds = i128::from(r) == i128::from(c1) - sign * i128::from(c3);
    Ok(DumontCheck {
        k,
        n,
        r,
        c1,
        c3,
        holds,
    })
}

/// Checks every `1 <= k <= k_max`, `0 <= n <= n_max`. Rows come back sorted
/// by `(k, n)`.
pub fn verify_dumont(
    k_max: usize,
    n_max: u64,
) -> Result<(Vec<DumontCheck>, VerificationReport), CountError> {
    let builder = ReportBuilder::new("dumont")
        .param("k_max", k_max as u64)
        .param("n_max", n_max);
    let grid: Vec<(usize, u64)> = (1..=k_max)
        .flat_map(|k| (0..=n_max).map(move |n| (k, n)))
        .collect();
    let rows = exec::map(&grid, |&(k, n)| check_dumont(k, n))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let d = rows.iter().find(|row| !row.holds).map(|row| {
        let sign: i128 = if row.k % 2 == 0 { 1 } else { -1 };
        Discrepancy {
            location: format!("k={}", row.k),
            exponent: row.n as i64,
            lhs_coefficient: row.r.to_string(),
            rhs_coefficient: (i128::from(row.c1) - sign * i128::from(row.c3)).to_string(),
        }
    });
    Ok((rows, builder.finish(d)))
}

/// Ordered `k`-tuples of integers `y_i >= 1` with
/// `C(y_1,2) + ... + C(y_k,2) = m`.
pub fn triangular_count(k: usize, m: u64) -> Result<u64, CountError> {
    require_k(k)?;
    fn tri(y: u64) -> u64 {
        y * (y - 1) / 2
    }
    fn go(vars: usize, rem: u64) -> Result<u64, CountError> {
        if vars == 1 {
            // y(y-1)/2 = rem  <=>  (2y-1)^2 = 8 rem + 1
            return Ok(match exact_sqrt(8 * rem + 1) {
                Some(s) if s % 2 == 1 => 1,
                _ => 0,
            });
        }
        let mut total = 0;
        let mut y = 1u64;
        while tri(y) <= rem {
            total = tally(total, go(vars - 1, rem - tri(y))?)?;
            y += 1;
        }
        Ok(total)
    }
    go(k, m)
}

/// Positive divisors of `n >= 1` in increasing order, by trial division.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `sum_{d | n} (-1)^((d-1)/2)` for odd `n`.
pub fn divisor_sum_alternating(n: u64) -> Result<i64, CountError> {
    if n % 2 == 0 {
        return Err(CountError::OddRequired(n));
    }
    Ok(divisors(n)
        .into_iter()
        .map(|d| if d % 4 == 1 { 1 } else { -1 })
        .sum())
}

/// `sigma(n) = sum_{d | n} d`.
pub fn divisor_sum_sigma(n: u64) -> Result<u64, CountError> {
    if n == 0 {
        return Err(CountError::InvalidArgument("n must be positive".into()));
    }
    divisors(n)
        .into_iter()
        .try_fold(0u64, |acc, d| acc.checked_add(d).ok_or(CountError::Overflow))
}

/// Triples `(a, b, c)` of positive integers with `n = 4ac - b^2`,
/// `b < 2a` and `b < 2c`, for `n ≡ 3 (mod 8)`.
pub fn kronecker_count(n: u64) -> Result<u64, CountError> {
    if n % 8 != 3 {
        return Err(CountError::CongruenceViolation(n));
    }
    let mut total = 0;
    // a, c >= (b+1)/2 forces n + b^2 >= (b+1)^2, i.e. 2b + 1 <= n.
    let mut b = 1u64;
    while 2 * b < n {
        let p = n + b * b;
        if p % 4 == 0 {
            let ac = p / 4;
            for a in divisors(ac) {
                let c = ac / a;
                if b < 2 * a && b < 2 * c {
                    total = tally(total, 1)?;
                }
            }
        }
        b += 1;
    }
    Ok(total)
}

/// `r_2(n)` or `r_4(n)`: representations as a sum of 2 or 4 squares of
/// arbitrary integers, signs and order distinguished.
pub fn all_signs_squares_count(k: usize, n: u64) -> Result<u64, CountError> {
    // number of integers x with x^2 = rem
    fn roots(rem: u64) -> u64 {
        match exact_sqrt(rem) {
            Some(0) => 1,
            Some(_) => 2,
            None => 0,
        }
    }
    // 2 * |{x >= 1 : x^2 <= rem}| + 1 choices, weighted by `inner`
    fn sweep(rem: u64, inner: &dyn Fn(u64) -> Result<u64, CountError>) -> Result<u64, CountError> {
        let mut total = inner(rem)?;
        let mut x = 1u64;
        while x * x <= rem {
            total = tally(total, inner(rem - x * x)?.checked_mul(2).ok_or(CountError::Overflow)?)?;
            x += 1;
        }
        Ok(total)
    }
    match k {
        2 => sweep(n, &|rem| Ok(roots(rem))),
        4 => sweep(n, &|r1| sweep(r1, &|r2| sweep(r2, &|r3| Ok(roots(r3))))),
        _ => Err(CountError::InvalidArgument(format!(
            "all-signs counts are defined for k = 2 or 4, got {k}"
        ))),
    }
}

/// Index ranges for the classical corollary sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassicalRanges {
    /// `m` for three triangular numbers.
    pub eureka_m: u64,
    /// `m` for the two- and four-odd-square divisor formulas.
    pub odd_square_m: u64,
    /// `n` for the `r_2` and `r_4` divisor formulas.
    pub divisor_n: u64,
    /// `n` for four-square positivity.
    pub lagrange_n: u64,
    /// `n ≡ 3 (mod 8)` for Kronecker's count.
    pub kronecker_n: u64,
}

impl ClassicalRanges {
    pub fn from_max(range_max: u64) -> Self {
        ClassicalRanges {
            eureka_m: range_max,
            odd_square_m: range_max / 4,
            divisor_n: range_max,
            lagrange_n: 5 * range_max,
            kronecker_n: range_max,
        }
    }
}

fn first_failure<F>(check: &str, indices: Vec<u64>, f: F) -> Result<VerificationReport, CountError>
where
    F: Fn(u64) -> Result<Option<(i64, i64)>, CountError> + Sync + Send,
{
    let builder = ReportBuilder::new(check)
        .param("from", indices.first().copied().unwrap_or(0))
        .param("to", indices.last().copied().unwrap_or(0));
    let results = exec::map(&indices, |&i| f(i).map(|r| r.map(|lr| (i, lr))))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let d = results.into_iter().flatten().next().map(|(i, (l, r))| Discrepancy {
        location: check.to_string(),
        exponent: i as i64,
        lhs_coefficient: l.to_string(),
        rhs_coefficient: r.to_string(),
    });
    Ok(builder.finish(d))
}

fn differ(lhs: i64, rhs: i64) -> Option<(i64, i64)> {
    (lhs != rhs).then_some((lhs, rhs))
}

fn as_i64(x: u64) -> Result<i64, CountError> {
    i64::try_from(x).map_err(|_| CountError::Overflow)
}

/// The classical corollaries, one report each, in a fixed order:
/// three triangular numbers (with the constructive witness), the two- and
/// four-odd-square divisor formulas, the `r_2` and `r_4` divisor formulas,
/// four-square positivity and Kronecker's three-odd-square count.
///
/// A failing report's `exponent` is the failing `m` or `n`; positivity
/// checks report the count as the left side and `1` as the right.
pub fn verify_classical(range_max: u64) -> Result<Vec<VerificationReport>, CountError> {
    let ranges = ClassicalRanges::from_max(range_max);
    let mut out = Vec::new();

    out.push(first_failure("gauss-eureka", (0..=ranges.eureka_m).collect(), |m| {
        let count = triangular_count(3, m)?;
        // x = (1, 1, 4m+1) in the 1 mod 4 cyclic form gives 8m + 3
        let witness = 1 + (4 * m + 1) + (4 * m + 1);
        if count == 0 || witness != 8 * m + 3 {
            return Ok(Some((as_i64(count)?, 1)));
        }
        Ok(None)
    })?);

    out.push(first_failure("jacobi-two-odd-squares", (0..=ranges.odd_square_m).collect(), |m| {
        let lhs = as_i64(odd_squares_count(2, 8 * m + 2)?)?;
        Ok(differ(lhs, divisor_sum_alternating(4 * m + 1)?))
    })?);

    out.push(first_failure("jacobi-four-odd-squares", (0..=ranges.odd_square_m).collect(), |m| {
        let lhs = as_i64(odd_squares_count(4, 8 * m + 4)?)?;
        Ok(differ(lhs, as_i64(divisor_sum_sigma(2 * m + 1)?)?))
    })?);

    out.push(first_failure("jacobi-r2", (1..=ranges.divisor_n).collect(), |n| {
        let lhs = as_i64(all_signs_squares_count(2, n)?)?;
        let rhs: i64 = divisors(n)
            .into_iter()
            .filter(|d| d % 2 == 1)
            .map(|d| if d % 4 == 1 { 4 } else { -4 })
            .sum();
        Ok(differ(lhs, rhs))
    })?);

    out.push(first_failure("jacobi-r4", (1..=ranges.divisor_n).collect(), |n| {
        let lhs = as_i64(all_signs_squares_count(4, n)?)?;
        let rhs: u64 = divisors(n).into_iter().filter(|d| d % 4 != 0).sum::<u64>() * 8;
        Ok(differ(lhs, as_i64(rhs)?))
    })?);

    out.push(first_failure("lagrange", (0..=ranges.lagrange_n).collect(), |n| {
        let count = all_signs_squares_count(4, n)?;
        Ok((count == 0).then_some((0, 1)))
    })?);

    let kron: Vec<u64> = (3..=ranges.kronecker_n).step_by(8).collect();
    out.push(first_failure("kronecker", kron, |n| {
        Ok(differ(as_i64(kronecker_count(n)?)?, as_i64(odd_squares_count(3, n)?)?))
    })?);

    Ok(out)
}
