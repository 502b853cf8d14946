//! Infinite matrices with formal power series entries.
//!
//! A matrix is given intensionally by an entry generator and certified lower
//! bounds on entry valuations. The bounds are what make every infinite sum
//! here finite: a product entry `sum_m M1(i,m) M2(m,j)` is cut off at the
//! first `m` past which the row tail of `M1` plus the column tail of `M2`
//! exceeds the requested degree, and a trace is taken over the finite block
//! outside of which every entry vanishes to that degree.
//!
//! The concrete matrices are
//!
//! - `A(i,j) = q^((4i+1)(4j+1))`,
//! - `B(i,j) = -q^((4i-1)(4j-1))` for `i, j >= 1`, `B(0,0) = sum q^((2n+1)^2)`,
//!   zero elsewhere,
//! - `X`, built from `1/(1 - q^(16d+8))` factors above and below the
//!   diagonal and from `(q^8;q^16)_i/(q^16;q^16)_i q^(4i)` in column 0,
//!
//! which satisfy `XB = AX`.

use std::cmp::{max, min};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::counting::{cyclic_count, odd_squares_count, CountError, CyclicFormSpec, Residue};
use crate::exec;
use crate::report::{Discrepancy, ReportBuilder, VerificationReport};
use crate::series::{pochhammer, theta_odd_squares, Length, Monomial, QSeries};

/// Valuation bound of an entry that is identically zero.
pub const VANISHING: i64 = i64::MAX / 4;

/// Longest index scan used to certify a cutoff.
const MAX_SCAN: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("no finite cutoff certified for {0}")]
    NoFiniteCutoff(String),
    #[error("{0} is not admitted; its trace is undefined")]
    NotAdmitted(String),
    #[error("{0} has negative valuation bound; block truncation is unsound")]
    NegativeValuation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Count(#[from] CountError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    /// Valuations grow with `|i - j|`; products of two such matrices exist.
    Admissible,
    /// Valuations grow with `max(i, j)`; the trace exists.
    Admitted,
}

/// An infinite matrix `(m_ij)`, `i, j >= 0`, of truncated q-series.
///
/// Implementors promise:
///
/// - `entry(i, j, N).valuation() >= valuation_bound(i, j)`;
/// - `row_tail_bound(i, m) <= valuation_bound(i, m')` for every `m' >= m`,
///   and `col_tail_bound(j, m) <= valuation_bound(m', j)` likewise;
/// - `min_valuation() <= valuation_bound(i, j)` everywhere;
/// - for admitted matrices, `line_bound(i)` is nondecreasing in `i` and
///   unbounded.
pub trait SymbolicMatrix: Send + Sync {
    fn name(&self) -> &str;
    fn kind(&self) -> MatrixKind;
    fn entry(&self, i: usize, j: usize, order: i64) -> QSeries;
    fn valuation_bound(&self, i: usize, j: usize) -> i64;
    fn row_tail_bound(&self, i: usize, from: usize) -> i64;
    fn col_tail_bound(&self, j: usize, from: usize) -> i64;
    fn min_valuation(&self) -> i64;

    /// Lower bound on every entry of row `i` and column `i`.
    fn line_bound(&self, i: usize) -> i64 {
        min(self.row_tail_bound(i, 0), self.col_tail_bound(i, 0))
    }
}

fn idx(i: usize) -> i64 {
    i as i64
}

/// `A(i,j) = q^((4i+1)(4j+1))`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MatrixA;

impl SymbolicMatrix for MatrixA {
    fn name(&self) -> &str {
        "A"
    }
    fn kind(&self) -> MatrixKind {
        MatrixKind::Admitted
    }
    fn entry(&self, i: usize, j: usize, order: i64) -> QSeries {
        QSeries::monomial(1, self.valuation_bound(i, j), order)
    }
    fn valuation_bound(&self, i: usize, j: usize) -> i64 {
        (4 * idx(i) + 1) * (4 * idx(j) + 1)
    }
    fn row_tail_bound(&self, i: usize, from: usize) -> i64 {
        self.valuation_bound(i, from)
    }
    fn col_tail_bound(&self, j: usize, from: usize) -> i64 {
        self.valuation_bound(from, j)
    }
    fn min_valuation(&self) -> i64 {
        1
    }
}

/// `B(i,j) = -q^((4i-1)(4j-1))` for `i, j >= 1`, `B(0,0) = sum q^((2n+1)^2)`
/// and zero on the rest of row and column 0.
#[derive(Clone, Copy, Debug, Default)]
pub struct MatrixB;

impl SymbolicMatrix for MatrixB {
    fn name(&self) -> &str {
        "B"
    }
    fn kind(&self) -> MatrixKind {
        MatrixKind::Admitted
    }
    fn entry(&self, i: usize, j: usize, order: i64) -> QSeries {
        match (i, j) {
            (0, 0) => theta_odd_squares(order),
            (0, _) | (_, 0) => QSeries::zero(order),
            _ => QSeries::monomial(-1, self.valuation_bound(i, j), order),
        }
    }
    fn valuation_bound(&self, i: usize, j: usize) -> i64 {
        match (i, j) {
            (0, 0) => 1,
            (0, _) | (_, 0) => VANISHING,
            _ => (4 * idx(i) - 1) * (4 * idx(j) - 1),
        }
    }
    fn row_tail_bound(&self, i: usize, from: usize) -> i64 {
        match (i, from) {
            (0, 0) => 1,
            (0, _) => VANISHING,
            _ => self.valuation_bound(i, max(from, 1)),
        }
    }
    fn col_tail_bound(&self, j: usize, from: usize) -> i64 {
        self.row_tail_bound(j, from)
    }
    fn min_valuation(&self) -> i64 {
        1
    }
}

/// `q^shift / (1 - q^denom)` truncated at `order`, for `denom >= 1`.
fn unit_fraction(shift: i64, denom: i64, order: i64) -> QSeries {
    let inner = order - shift;
    if inner < 0 {
        return QSeries::zero(order);
    }
    QSeries::from_terms([(0, BigInt::from(1)), (denom, BigInt::from(-1))], inner)
        .invert_unit(inner)
        .expect("1 - q^d is a unit")
        .shift(shift)
}

/// The intertwining matrix `X`.
///
/// `X(i,j) = -q^(12d+4)/(1-q^(16d+8))` with `d = j-i-1` above the diagonal,
/// `q^(4d)/(1-q^(16d+8))` with `d = i-j` for `1 <= j <= i`, and
/// `(q^8;q^16)_i/(q^16;q^16)_i q^(4i)` in column 0.
///
/// A fault can be injected to zero out one entry, which must break `XB = AX`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MatrixX {
    fault: Option<(usize, usize)>,
}

impl MatrixX {
    pub fn new() -> Self {
        MatrixX { fault: None }
    }

    /// `X` with entry `(i, j)` replaced by zero.
    pub fn with_zeroed_entry(i: usize, j: usize) -> Self {
        MatrixX { fault: Some((i, j)) }
    }

    pub fn fault(&self) -> Option<(usize, usize)> {
        self.fault
    }

    fn column_zero(i: usize, order: i64) -> QSeries {
        let shift = 4 * idx(i);
        let inner = order - shift;
        if inner < 0 {
            return QSeries::zero(order);
        }
        let num = pochhammer(Monomial::plus(8), 16, Length::Finite(i), inner)
            .expect("positive step");
        let den = pochhammer(Monomial::plus(16), 16, Length::Finite(i), inner)
            .expect("positive step")
            .invert_unit(inner)
            .expect("(q^16;q^16)_i is a unit");
        (&num * &den).shift(shift)
    }
}

impl SymbolicMatrix for MatrixX {
    fn name(&self) -> &str {
        "X"
    }
    fn kind(&self) -> MatrixKind {
        MatrixKind::Admissible
    }
    fn entry(&self, i: usize, j: usize, order: i64) -> QSeries {
        if self.fault == Some((i, j)) {
            return QSeries::zero(order);
        }
        let (i64i, i64j) = (idx(i), idx(j));
        if j > i {
            let d = i64j - i64i - 1;
            -unit_fraction(12 * d + 4, 16 * d + 8, order)
        } else if j >= 1 {
            let d = i64i - i64j;
            unit_fraction(4 * d, 16 * d + 8, order)
        } else {
            Self::column_zero(i, order)
        }
    }
    fn valuation_bound(&self, i: usize, j: usize) -> i64 {
        let (i, j) = (idx(i), idx(j));
        if j > i {
            12 * (j - i - 1) + 4
        } else if j >= 1 {
            4 * (i - j)
        } else {
            4 * i
        }
    }
    fn row_tail_bound(&self, i: usize, from: usize) -> i64 {
        if from > i {
            self.valuation_bound(i, from)
        } else {
            0
        }
    }
    fn col_tail_bound(&self, j: usize, from: usize) -> i64 {
        if j == 0 {
            4 * idx(from)
        } else if from >= j {
            4 * idx(from - j)
        } else {
            0
        }
    }
    fn min_valuation(&self) -> i64 {
        0
    }
}

/// The identity matrix.
#[derive(Clone, Copy, Debug, Default)]
pub struct Identity;

impl SymbolicMatrix for Identity {
    fn name(&self) -> &str {
        "I"
    }
    fn kind(&self) -> MatrixKind {
        MatrixKind::Admissible
    }
    fn entry(&self, i: usize, j: usize, order: i64) -> QSeries {
        if i == j {
            QSeries::one(order)
        } else {
            QSeries::zero(order)
        }
    }
    fn valuation_bound(&self, i: usize, j: usize) -> i64 {
        if i == j {
            0
        } else {
            VANISHING
        }
    }
    fn row_tail_bound(&self, i: usize, from: usize) -> i64 {
        if from <= i {
            0
        } else {
            VANISHING
        }
    }
    fn col_tail_bound(&self, j: usize, from: usize) -> i64 {
        self.row_tail_bound(j, from)
    }
    fn min_valuation(&self) -> i64 {
        0
    }
}

/// First summation index `m` such that every term `M1(i,m') M2(m',j)` with
/// `m' >= m` has valuation above `order`.
pub fn product_cutoff(
    left: &dyn SymbolicMatrix,
    right: &dyn SymbolicMatrix,
    i: usize,
    j: usize,
    order: i64,
) -> Result<usize, MatrixError> {
    (0..MAX_SCAN)
        .find(|&m| {
            left.row_tail_bound(i, m)
                .saturating_add(right.col_tail_bound(j, m))
                > order
        })
        .ok_or_else(|| {
            MatrixError::NoFiniteCutoff(format!(
                "({}{})[{i},{j}] to q^{order}",
                left.name(),
                right.name()
            ))
        })
}

/// `(M1 M2)(i,j)` exact to `q^order`.
pub fn truncated_product_entry(
    left: &dyn SymbolicMatrix,
    right: &dyn SymbolicMatrix,
    i: usize,
    j: usize,
    order: i64,
) -> Result<QSeries, MatrixError> {
    truncated_product_entry_with_slack(left, right, i, j, order, 0)
}

/// As [`truncated_product_entry`], but summing `slack` terms past the
/// certified cutoff. The result must not change.
pub fn truncated_product_entry_with_slack(
    left: &dyn SymbolicMatrix,
    right: &dyn SymbolicMatrix,
    i: usize,
    j: usize,
    order: i64,
    slack: usize,
) -> Result<QSeries, MatrixError> {
    let cutoff = product_cutoff(left, right, i, j, order)? + slack;
    // a factor of negative valuation eats into the other factor's precision
    let left_order = order.saturating_sub(min(0, right.min_valuation()));
    let right_order = order.saturating_sub(min(0, left.min_valuation()));
    let mut acc = QSeries::zero(order);
    for m in 0..cutoff {
        let bound = left
            .valuation_bound(i, m)
            .saturating_add(right.valuation_bound(m, j));
        if bound > order && slack == 0 {
            continue;
        }
        let term = &left.entry(i, m, left_order) * &right.entry(m, j, right_order);
        acc = &acc + &term;
    }
    Ok(acc.truncate(order))
}

fn block_size(m: &dyn SymbolicMatrix, order: i64) -> Result<usize, MatrixError> {
    (0..MAX_SCAN)
        .find(|&i| m.line_bound(i) > order)
        .ok_or_else(|| MatrixError::NoFiniteCutoff(format!("trace block of {}", m.name())))
}

fn dense_block(m: &dyn SymbolicMatrix, size: usize, order: i64, generate_all: bool) -> Vec<Vec<QSeries>> {
    exec::map_range(size, |i| {
        (0..size)
            .map(|j| {
                if !generate_all && m.valuation_bound(i, j) > order {
                    QSeries::zero(order)
                } else {
                    m.entry(i, j, order)
                }
            })
            .collect()
    })
}

fn block_product(lhs: &[Vec<QSeries>], rhs: &[Vec<QSeries>], order: i64) -> Vec<Vec<QSeries>> {
    let size = rhs.len();
    exec::map_range(lhs.len(), |i| {
        (0..size)
            .map(|j| {
                let mut acc = QSeries::zero(order);
                for (a, row) in lhs[i].iter().zip(rhs) {
                    let b = &row[j];
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                acc.truncate(order)
            })
            .collect()
    })
}

/// `tr[M^k]` exact to `q^order` for an admitted matrix with nonnegative
/// valuations.
///
/// Every closed walk that touches an index `i` with `line_bound(i) > order`
/// has valuation above `order`, so the trace is that of the finite block
/// below the first such index.
pub fn trace_power(m: &dyn SymbolicMatrix, k: usize, order: i64) -> Result<QSeries, MatrixError> {
    trace_power_with_slack(m, k, order, 0)
}

/// As [`trace_power`] on a block enlarged by `slack` indices. The result
/// must not change.
pub fn trace_power_with_slack(
    m: &dyn SymbolicMatrix,
    k: usize,
    order: i64,
    slack: usize,
) -> Result<QSeries, MatrixError> {
    if m.kind() != MatrixKind::Admitted {
        return Err(MatrixError::NotAdmitted(m.name().to_string()));
    }
    if m.min_valuation() < 0 {
        return Err(MatrixError::NegativeValuation(m.name().to_string()));
    }
    if k == 0 {
        return Err(MatrixError::Precondition("k must be at least 1".into()));
    }
    let size = block_size(m, order)? + slack;
    let block = dense_block(m, size, order, slack > 0);
    let mut power = block.clone();
    for _ in 2..k {
        power = block_product(&power, &block, order);
    }
    let diag = if k == 1 {
        (0..size).map(|i| block[i][i].clone()).collect::<Vec<_>>()
    } else {
        exec::map_range(size, |i| {
            let mut acc = QSeries::zero(order);
            for (a, row) in power[i].iter().zip(&block) {
                let b = &row[i];
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
    };
    Ok(diag
        .iter()
        .fold(QSeries::zero(order), |acc, d| &acc + d)
        .truncate(order))
}

/// `tr[M1 M2]` exact to `q^order`. At least one factor must be admitted and
/// both must have nonnegative valuations.
pub fn trace_of_product(
    left: &dyn SymbolicMatrix,
    right: &dyn SymbolicMatrix,
    order: i64,
) -> Result<QSeries, MatrixError> {
    for m in [left, right] {
        if m.min_valuation() < 0 {
            return Err(MatrixError::NegativeValuation(m.name().to_string()));
        }
    }
    // (M1 M2)(i,i) has valuation at least the larger of these two bounds
    let diag_bound = |i: usize| {
        max(
            left.row_tail_bound(i, 0).saturating_add(right.min_valuation()),
            left.min_valuation().saturating_add(right.col_tail_bound(i, 0)),
        )
    };
    let size = (0..MAX_SCAN).find(|&i| diag_bound(i) > order).ok_or_else(|| {
        MatrixError::NoFiniteCutoff(format!("tr[{}{}]", left.name(), right.name()))
    })?;
    let diag = exec::map_range(size, |i| truncated_product_entry(left, right, i, i, order))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    Ok(diag.iter().fold(QSeries::zero(order), |acc, d| &acc + d))
}

fn x_for(fault: Option<(usize, usize)>) -> MatrixX {
    match fault {
        Some((i, j)) => MatrixX::with_zeroed_entry(i, j),
        None => MatrixX::new(),
    }
}

/// Compares `(XB)(i,j)` with `(AX)(i,j)` for all `0 <= i, j <= max_index`.
/// The first discrepancy is the smallest in `(i, j)` row-major order.
pub fn verify_intertwining(
    max_index: usize,
    order: i64,
    fault: Option<(usize, usize)>,
) -> Result<VerificationReport, MatrixError> {
    let mut builder = ReportBuilder::new("intertwining")
        .param("max_index", max_index as u64)
        .param("degree", order);
    if let Some((i, j)) = fault {
        builder = builder.param("fault", format!("x[{i},{j}]=0"));
    }
    let x = x_for(fault);
    let cells: Vec<(usize, usize)> = (0..=max_index)
        .flat_map(|i| (0..=max_index).map(move |j| (i, j)))
        .collect();
    let results = exec::map(&cells, |&(i, j)| -> Result<Option<Discrepancy>, MatrixError> {
        let xb = truncated_product_entry(&x, &MatrixB, i, j, order)?;
        let ax = truncated_product_entry(&MatrixA, &x, i, j, order)?;
        Ok(xb
            .first_mismatch(&ax)
            .map(|m| Discrepancy::from_mismatch(format!("({i},{j})"), &m)))
    });
    let mut first = None;
    for r in results {
        if let Some(d) = r? {
            first.get_or_insert(d);
        }
    }
    Ok(builder.finish(first))
}

/// Both sides of `XB = AX` at `(i, j)` reduce, for `j >= 1`, to
/// `(-1)^[i>j] q^(16ij+4j-4i+1) sum_{l=min(i,j)}^{max(i,j)-1} q^(8l)/(1-q^(16l+8))`.
pub fn intertwining_closed_form(i: usize, j: usize, order: i64) -> Result<QSeries, MatrixError> {
    if j == 0 {
        return Err(MatrixError::Precondition(
            "the closed form covers columns j >= 1".into(),
        ));
    }
    Ok(signed_lambert_block(i, j, i > j, order))
}

/// `± q^(16ij+4j-4i+1) sum_{l=min}^{max-1} q^(8l)/(1-q^(16l+8))`, negative
/// when `negative` is set.
fn signed_lambert_block(i: usize, j: usize, negative: bool, order: i64) -> QSeries {
    let (i64i, i64j) = (idx(i), idx(j));
    let prefix = 16 * i64i * i64j + 4 * i64j - 4 * i64i + 1;
    let lo = min(i, j);
    let hi = max(i, j);
    let mut sum = QSeries::zero(order);
    for l in lo..hi {
        let l = idx(l);
        sum = &sum + &geometric_direct(prefix + 8 * l, 16 * l + 8, order);
    }
    if negative {
        -sum
    } else {
        sum
    }
}

/// `q^shift / (1 - q^step)` expanded directly as `sum_t q^(shift + t step)`.
fn geometric_direct(shift: i64, step: i64, order: i64) -> QSeries {
    let terms = (0..)
        .map(|t: i64| shift + t * step)
        .take_while(|&e| e <= order)
        .map(|e| (e, BigInt::from(1)));
    QSeries::from_terms(terms, order)
}

/// Sum of `q^exponent(k)/(1 - q^(16k+8))` over `k` in `ks`; terms with
/// exponent above `order` contribute nothing.
fn lambert_partial_sum(
    ks: impl Iterator<Item = i64>,
    exponent: impl Fn(i64) -> i64,
    order: i64,
) -> QSeries {
    let mut acc = QSeries::zero(order);
    for k in ks {
        let e = exponent(k);
        if e <= order {
            acc = &acc + &geometric_direct(e, 16 * k + 8, order);
        }
    }
    acc
}

/// Like [`lambert_partial_sum`] over all `k >= 0`, for exponents increasing
/// in `k`.
fn lambert_tail_sum(exponent: impl Fn(i64) -> i64, order: i64) -> QSeries {
    let last = (0..).take_while(|&k| exponent(k) <= order).count() as i64;
    lambert_partial_sum(0..last, exponent, order)
}

/// Checks the two rearrangements behind `XB = AX` in column `j >= 1`:
///
/// - tails: `sum_{n>=j} q^(4(n-j))/(1-q^(16(n-j)+8)) q^((4n+1)(4i+1))
///   - sum_{m>=i+1} q^(12(m-i-1)+4)/(1-q^(16(m-i-1)+8)) q^((4m-1)(4j-1))`
///   equals the closed form with sign `(-1)^[i>j]`;
/// - heads: `sum_{m=1}^{i} q^(4(i-m))/(1-q^(16(i-m)+8)) q^((4m-1)(4j-1))
///   - sum_{n=0}^{j-1} q^(12(j-n-1)+4)/(1-q^(16(j-n-1)+8)) q^((4n+1)(4i+1))`
///   equals it with sign `(-1)^[j>i]`.
///
/// Each sum is evaluated term by term from its displayed form, independently
/// of the entries of `X`.
pub fn verify_proof_decomposition(
    i: usize,
    j: usize,
    order: i64,
) -> Result<VerificationReport, MatrixError> {
    let builder = ReportBuilder::new("proof-decomposition")
        .param("i", i as u64)
        .param("j", j as u64)
        .param("degree", order);
    if j == 0 {
        return Err(MatrixError::Precondition(
            "the decomposition covers columns j >= 1".into(),
        ));
    }
    let (ii, jj) = (idx(i), idx(j));
    // tail sums, reindexed by k = n - j = m - i - 1
    let tail_ax = lambert_tail_sum(|k| 4 * k + (4 * (k + jj) + 1) * (4 * ii + 1), order);
    let tail_xb = lambert_tail_sum(|k| 12 * k + 4 + (4 * (k + ii + 1) - 1) * (4 * jj - 1), order);
    // head sums, reindexed by k = i - m = j - n - 1
    let head_xb = lambert_partial_sum(0..ii, |k| 4 * k + (4 * (ii - k) - 1) * (4 * jj - 1), order);
    let head_ax = lambert_partial_sum(0..jj, |k| 12 * k + 4 + (4 * (jj - k - 1) + 1) * (4 * ii + 1), order);

    let tails = &tail_ax - &tail_xb;
    let heads = &head_xb - &head_ax;
    let tails_rhs = signed_lambert_block(i, j, i > j, order);
    let heads_rhs = signed_lambert_block(i, j, j > i, order);

    let d = tails
        .first_mismatch(&tails_rhs)
        .map(|m| Discrepancy::from_mismatch("tails", &m))
        .or_else(|| {
            heads
                .first_mismatch(&heads_rhs)
                .map(|m| Discrepancy::from_mismatch("heads", &m))
        });
    Ok(builder.finish(d))
}

/// `tr[A^k] = tr[B^k]` for `1 <= k <= k_max`.
pub fn verify_trace_equality(k_max: usize, order: i64) -> Result<VerificationReport, MatrixError> {
    let builder = ReportBuilder::new("trace-equality")
        .param("k_max", k_max as u64)
        .param("degree", order);
    if k_max == 0 {
        return Err(MatrixError::Precondition("k_max must be at least 1".into()));
    }
    for k in 1..=k_max {
        let a = trace_power(&MatrixA, k, order)?;
        let b = trace_power(&MatrixB, k, order)?;
        if let Some(m) = a.first_mismatch(&b) {
            return Ok(builder.finish(Some(Discrepancy::from_mismatch(format!("k={k}"), &m))));
        }
    }
    Ok(builder.finish(None))
}

/// `tr[AX] = tr[XA]` through certified truncated products.
pub fn verify_trace_cyclicity(
    order: i64,
    fault: Option<(usize, usize)>,
) -> Result<VerificationReport, MatrixError> {
    let mut builder = ReportBuilder::new("trace-cyclicity").param("degree", order);
    if let Some((i, j)) = fault {
        builder = builder.param("fault", format!("x[{i},{j}]=0"));
    }
    let x = x_for(fault);
    let ax = trace_of_product(&MatrixA, &x, order)?;
    let xa = trace_of_product(&x, &MatrixA, order)?;
    let d = ax
        .first_mismatch(&xa)
        .map(|m| Discrepancy::from_mismatch("tr[AX] vs tr[XA]", &m));
    Ok(builder.finish(d))
}

/// Coefficients of `tr[A^k]` against brute-force `c_k^{1}(n)`, and of
/// `tr[B^k]` against `r_k(n) + (-1)^k c_k^{3}(n)`, for `k <= k_max`,
/// `n <= order`.
pub fn verify_trace_counts(k_max: usize, order: i64) -> Result<VerificationReport, MatrixError> {
    let builder = ReportBuilder::new("trace-counts")
        .param("k_max", k_max as u64)
        .param("degree", order);
    for k in 1..=k_max {
        let ta = trace_power(&MatrixA, k, order)?;
        let tb = trace_power(&MatrixB, k, order)?;
        let ns: Vec<u64> = (0..=order.max(0) as u64).collect();
        let rows = exec::map(&ns, |&n| -> Result<(u64, BigInt, BigInt), MatrixError> {
            let c1 = cyclic_count(CyclicFormSpec::new(k, Residue::One)?, n)?;
            let c3 = cyclic_count(CyclicFormSpec::new(k, Residue::Three)?, n)?;
            let r = odd_squares_count(k, n)?;
            let sign = if k % 2 == 0 { 1 } else { -1 };
            Ok((n, BigInt::from(c1), BigInt::from(r) + BigInt::from(sign) * BigInt::from(c3)))
        });
        for row in rows {
            let (n, a_expected, b_expected) = row?;
            let e = n as i64;
            let a = ta.coeff(e).unwrap_or_default();
            if a != a_expected {
                return Ok(builder.finish(Some(Discrepancy {
                    location: format!("tr[A^{k}]"),
                    exponent: e,
                    lhs_coefficient: a.to_string(),
                    rhs_coefficient: a_expected.to_string(),
                })));
            }
            let b = tb.coeff(e).unwrap_or_default();
            if b != b_expected {
                return Ok(builder.finish(Some(Discrepancy {
                    location: format!("tr[B^{k}]"),
                    exponent: e,
                    lhs_coefficient: b.to_string(),
                    rhs_coefficient: b_expected.to_string(),
                })));
            }
        }
    }
    Ok(builder.finish(None))
}

/// Samples `samples` random cells with indices below `max_index` and checks
/// that each generated entry respects its declared valuation bound and the
/// tail bounds that cover it.
pub fn verify_valuation_soundness(
    m: &dyn SymbolicMatrix,
    samples: usize,
    max_index: usize,
    order: i64,
    seed: u64,
) -> VerificationReport {
    let builder = ReportBuilder::new("valuation-soundness")
        .param("matrix", m.name())
        .param("samples", samples as u64)
        .param("max_index", max_index as u64)
        .param("degree", order)
        .param("seed", seed);
    let mut rng = StdRng::seed_from_u64(seed);
    let cells: Vec<(usize, usize)> = (0..samples)
        .map(|_| (rng.gen_range(0..max_index), rng.gen_range(0..max_index)))
        .collect();
    let bad = exec::map(&cells, |&(i, j)| {
        let entry = m.entry(i, j, order);
        let bound = m.valuation_bound(i, j);
        // tails starting at or before the cell must not exceed its bound
        let tails_ok = [0, j / 2, j].iter().all(|&from| m.row_tail_bound(i, from) <= bound)
            && [0, i / 2, i].iter().all(|&from| m.col_tail_bound(j, from) <= bound);
        let sound = (entry.is_zero() || entry.valuation() >= bound)
            && tails_ok
            && m.min_valuation() <= bound;
        (!sound).then(|| Discrepancy {
            location: format!("{}({i},{j})", m.name()),
            exponent: entry.valuation(),
            lhs_coefficient: entry.valuation().to_string(),
            rhs_coefficient: bound.to_string(),
        })
    });
    builder.finish(bad.into_iter().flatten().next())
}
