//! Coefficientwise checks of the classical q-series identities: the
//! q-binomial theorem, Euler's two product formulas, the Jacobi triple
//! product and Gauss's two theta corollaries.
//!
//! Bivariate identities are checked at monomial specializations `±q^e` of the
//! auxiliary variable. Each check builds the summation side and the product
//! side along separate code paths and compares them up to `q^degree`.

use num_bigint::BigInt;
use serde_json::Value;
use thiserror::Error;

use crate::exec;
use crate::report::{Discrepancy, ReportBuilder, VerificationReport};
use crate::series::{pochhammer, theta_jacobi, Length, Monomial, QSeries, SeriesError};

pub const DEFAULT_DEGREE: i64 = 200;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdentityError {
    #[error("invalid specialization: {0}")]
    InvalidSpecialization(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Monomial specialization grid for the suite.
#[derive(Clone, Debug)]
pub struct IdentityGrid {
    /// Values of `a` for the q-binomial theorem; `None` stands for `a = 0`.
    pub binomial_a: Vec<Option<Monomial>>,
    pub binomial_t: Vec<Monomial>,
    pub euler_t: Vec<Monomial>,
    pub triple_z: Vec<Monomial>,
}

fn signed(exponents: impl IntoIterator<Item = u32>) -> Vec<Monomial> {
    exponents
        .into_iter()
        .flat_map(|e| [Monomial::plus(e), Monomial::minus(e)])
        .collect()
}

impl Default for IdentityGrid {
    fn default() -> Self {
        let mut binomial_a = vec![None];
        binomial_a.extend(signed(1..=2).into_iter().map(Some));
        IdentityGrid {
            binomial_a,
            binomial_t: signed(1..=3),
            euler_t: signed(1..=4),
            triple_z: signed(0..=2),
        }
    }
}

fn compare(builder: ReportBuilder, location: &str, lhs: &QSeries, rhs: &QSeries) -> VerificationReport {
    let d = lhs
        .first_mismatch(rhs)
        .map(|m| Discrepancy::from_mismatch(location, &m));
    builder.finish(d)
}

fn monomial_param(m: Option<Monomial>) -> Value {
    match m {
        Some(m) => Value::String(m.to_string()),
        None => Value::String("0".into()),
    }
}

/// `1/(1 - q^e)` truncated at `order`, for `e >= 1`.
fn geometric(e: i64, order: i64) -> QSeries {
    QSeries::from_terms([(0, BigInt::from(1)), (e, BigInt::from(-1))], order)
        .invert_unit(order)
        .expect("1 - q^e is a unit")
}

fn require_positive_exponent(t: Monomial) -> Result<(), IdentityError> {
    if t.exponent == 0 {
        return Err(IdentityError::InvalidSpecialization(
            "t must have positive q-exponent".into(),
        ));
    }
    Ok(())
}

/// Partial sums of `sum_n c_n t^n q^(extra(n)) / (q;q)_n` with
/// `c_0 = 1` and `c_n = c_{n-1} * f_n`, where `step(n, s)` multiplies `s` by
/// `f_n` in place. Terms whose monomial prefactor exceeds `order` are
/// dropped; `extra` must make the prefactor exponent nondecreasing in `n`.
fn basic_hypergeometric_sum(
    t: Monomial,
    order: i64,
    extra: impl Fn(i64) -> i64,
    step: impl Fn(i64, &mut QSeries),
) -> QSeries {
    let mut sum = QSeries::zero(order);
    // c_n / (q;q)_n, kept only to the precision later terms can use
    let mut core = QSeries::one(order);
    let mut n: i64 = 0;
    loop {
        let (sign, exp) = t.pow(n);
        let shift = exp + extra(n);
        if shift > order {
            break;
        }
        if n > 0 {
            step(n, &mut core);
            core = &core.truncate(order - shift) * &geometric(n, order - shift);
        }
        let term = core.shift(shift).scale(&BigInt::from(sign.value()));
        sum = &sum + &term;
        n += 1;
    }
    sum.truncate(order)
}

/// `sum_{n>=0} (a;q)_n/(q;q)_n t^n = (at;q)_∞/(t;q)_∞` with `a = 0` when
/// `a` is `None`.
pub fn verify_q_binomial(
    a: Option<Monomial>,
    t: Monomial,
    degree: i64,
) -> Result<VerificationReport, IdentityError> {
    let builder = ReportBuilder::new("q-binomial")
        .param("a", monomial_param(a))
        .param("t", t.to_string())
        .param("degree", degree);
    let (lhs, rhs) = q_binomial_sides(a, t, degree)?;
    Ok(compare(builder, "q-binomial", &lhs, &rhs))
}

/// Summation and product sides of the q-binomial theorem.
pub fn q_binomial_sides(
    a: Option<Monomial>,
    t: Monomial,
    degree: i64,
) -> Result<(QSeries, QSeries), IdentityError> {
    require_positive_exponent(t)?;
    // (a;q)_n = (a;q)_{n-1} (1 - a q^(n-1))
    let lhs = basic_hypergeometric_sum(t, degree, |_| 0, |n, core| {
        if let Some(a) = a {
            core.mul_one_minus(a.sign.value(), a.exp() + n - 1);
        }
    });
    let numerator = match a {
        None => QSeries::one(degree),
        Some(a) => pochhammer(a.times(t), 1, Length::Infinite, degree)?,
    };
    let denominator = pochhammer(t, 1, Length::Infinite, degree)?;
    let rhs = &numerator * &denominator.invert_unit(degree)?;
    Ok((lhs, rhs))
}

/// `sum_{n>=0} t^n/(q;q)_n = 1/(t;q)_∞`.
pub fn verify_euler_first(t: Monomial, degree: i64) -> Result<VerificationReport, IdentityError> {
    let builder = ReportBuilder::new("euler-first")
        .param("t", t.to_string())
        .param("degree", degree);
    let (lhs, rhs) = euler_first_sides(t, degree)?;
    Ok(compare(builder, "euler-first", &lhs, &rhs))
}

pub fn euler_first_sides(t: Monomial, degree: i64) -> Result<(QSeries, QSeries), IdentityError> {
    require_positive_exponent(t)?;
    let lhs = basic_hypergeometric_sum(t, degree, |_| 0, |_, _| {});
    let rhs = pochhammer(t, 1, Length::Infinite, degree)?.invert_unit(degree)?;
    Ok((lhs, rhs))
}

/// `sum_{n>=0} t^n q^(n(n-1)/2)/(q;q)_n = (-t;q)_∞`.
///
/// `t = ±1` is accepted: the quadratic exponent keeps the sum finite modulo
/// `q^(degree+1)`.
pub fn verify_euler_second(t: Monomial, degree: i64) -> Result<VerificationReport, IdentityError> {
    let builder = ReportBuilder::new("euler-second")
        .param("t", t.to_string())
        .param("degree", degree);
    let lhs = basic_hypergeometric_sum(t, degree, |n| n * (n - 1) / 2, |_, _| {});
    let rhs = pochhammer(t.negated(), 1, Length::Infinite, degree)?;
    Ok(compare(builder, "euler-second", &lhs, &rhs))
}

/// The triple product `(q^2;q^2)_∞ (-qz;q^2)_∞ (-q/z;q^2)_∞` at `z = s q^m`,
/// as a Laurent series known to `q^degree`.
pub fn triple_product(z: Monomial, degree: i64) -> Result<QSeries, IdentityError> {
    let m = z.exp();
    let s = z.sign;
    // Factors of (-q/z; q^2)_∞ are 1 + s q^(2j+1-m); the first few have
    // negative exponent when m >= 2.
    let negative: Vec<i64> = (0..)
        .map(|j: i64| 2 * j + 1 - m)
        .take_while(|&e| e < 0)
        .collect();
    let depth: i64 = negative.iter().map(|e| -e).sum();
    let inner = degree + depth;
    let first_nonneg = 2 * negative.len() as i64 + 1 - m;

    let mut product = pochhammer(Monomial::plus(2), 2, Length::Infinite, inner)?;
    product = &product
        * &pochhammer(Monomial::new(s.flip(), (m + 1) as u32), 2, Length::Infinite, inner)?;
    product = &product
        * &pochhammer(
            Monomial::new(s.flip(), first_nonneg as u32),
            2,
            Length::Infinite,
            inner,
        )?;
    let exact = inner + depth + 1;
    for e in negative {
        let factor = QSeries::from_terms([(0, BigInt::from(1)), (e, BigInt::from(s.value()))], exact);
        product = &product * &factor;
    }
    Ok(product.truncate(degree))
}

/// `sum_{n in Z} q^(n^2) z^n = (q^2;q^2)_∞ (-qz;q^2)_∞ (-q/z;q^2)_∞`
/// compared on the common Laurent range up to `q^degree`.
pub fn verify_triple_product(z: Monomial, degree: i64) -> Result<VerificationReport, IdentityError> {
    let builder = ReportBuilder::new("triple-product")
        .param("z", z.to_string())
        .param("degree", degree);
    let lhs = theta_jacobi(z, degree);
    let rhs = triple_product(z, degree)?;
    let location = if rhs.is_zero() && !lhs.is_zero() {
        "triple-product (product side vanishes)"
    } else {
        "triple-product"
    };
    Ok(compare(builder, location, &lhs, &rhs))
}

/// Gauss's corollaries:
/// `sum_{n in Z} (-1)^n q^(n^2) = (q;q)_∞/(-q;q)_∞`,
/// `sum_{n>=0} q^(n(n+1)/2) = (q^2;q^2)_∞/(q;q^2)_∞`, and the auxiliary
/// `(-q;q)_∞ (q;q^2)_∞ = 1`.
pub fn verify_gauss_corollaries(degree: i64) -> Result<VerificationReport, IdentityError> {
    let builder = ReportBuilder::new("gauss-corollaries").param("degree", degree);
    let inf = Length::Infinite;
    let q_q = pochhammer(Monomial::plus(1), 1, inf, degree)?;
    let mq_q = pochhammer(Monomial::minus(1), 1, inf, degree)?;
    let q2_q2 = pochhammer(Monomial::plus(2), 2, inf, degree)?;
    let q_q2 = pochhammer(Monomial::plus(1), 2, inf, degree)?;

    let alternating = theta_jacobi(Monomial::minus(0), degree);
    let alternating_rhs = &q_q * &mq_q.invert_unit(degree)?;

    let triangular = QSeries::from_terms(
        (0_i64..)
            .map(|n| n * (n + 1) / 2)
            .take_while(|&e| e <= degree)
            .map(|e| (e, BigInt::from(1))),
        degree,
    );
    let triangular_rhs = &q2_q2 * &q_q2.invert_unit(degree)?;

    let auxiliary = &mq_q * &q_q2;
    let one = QSeries::one(degree);

    let checks = [
        ("alternating-squares", &alternating, &alternating_rhs),
        ("triangular", &triangular, &triangular_rhs),
        ("euler-auxiliary", &auxiliary, &one),
    ];
    let d = checks.iter().find_map(|(loc, l, r)| {
        l.first_mismatch(r)
            .map(|m| Discrepancy::from_mismatch(*loc, &m))
    });
    Ok(builder.finish(d))
}

/// Runs every identity over `grid` at `degree`, in a fixed canonical order.
pub fn verify_identity_suite(
    grid: &IdentityGrid,
    degree: i64,
) -> Result<Vec<VerificationReport>, IdentityError> {
    enum Job {
        Binomial(Option<Monomial>, Monomial),
        EulerFirst(Monomial),
        EulerSecond(Monomial),
        Triple(Monomial),
        Gauss,
    }
    let mut jobs = Vec::new();
    for &a in &grid.binomial_a {
        for &t in &grid.binomial_t {
            jobs.push(Job::Binomial(a, t));
        }
    }
    jobs.extend(grid.euler_t.iter().map(|&t| Job::EulerFirst(t)));
    jobs.extend(grid.euler_t.iter().map(|&t| Job::EulerSecond(t)));
    jobs.extend(grid.triple_z.iter().map(|&z| Job::Triple(z)));
    jobs.push(Job::Gauss);

    exec::map(&jobs, |job| match *job {
        Job::Binomial(a, t) => verify_q_binomial(a, t, degree),
        Job::EulerFirst(t) => verify_euler_first(t, degree),
        Job::EulerSecond(t) => verify_euler_second(t, degree),
        Job::Triple(z) => verify_triple_product(z, degree),
        Job::Gauss => verify_gauss_corollaries(degree),
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Partition numbers by the standard coin-change recurrence.
    fn partition_counts(n: usize) -> Vec<u64> {
        let mut p = vec![0u64; n + 1];
        p[0] = 1;
        for part in 1..=n {
            for total in part..=n {
                p[total] += p[total - part];
            }
        }
        p
    }

    /// Partitions into distinct parts, 0/1 knapsack.
    fn distinct_partition_counts(n: usize) -> Vec<u64> {
        let mut p = vec![0u64; n + 1];
        p[0] = 1;
        for part in 1..=n {
            for total in (part..=n).rev() {
                p[total] += p[total - part];
            }
        }
        p
    }

    fn as_vec(f: &QSeries, n: i64) -> Vec<BigInt> {
        (0..=n).map(|e| f.coeff(e).unwrap()).collect()
    }

    #[test]
    fn q_binomial_examples() {
        assert!(verify_q_binomial(None, Monomial::plus(1), 50).unwrap().pass);
        assert!(verify_q_binomial(Some(Monomial::plus(2)), Monomial::plus(3), 100).unwrap().pass);
        assert!(matches!(
            verify_q_binomial(None, Monomial::plus(0), 10),
            Err(IdentityError::InvalidSpecialization(_))
        ));
    }

    #[test]
    fn q_binomial_with_a_equal_one() {
        // (1;q)_n vanishes for n >= 1 and both sides collapse to 1.
        assert!(verify_q_binomial(Some(Monomial::plus(0)), Monomial::minus(2), 40).unwrap().pass);
    }

    #[test]
    fn euler_first_matches_partition_numbers() {
        let (sum, _) = euler_first_sides(Monomial::plus(1), 60).unwrap();
        let expected: Vec<BigInt> = partition_counts(60).into_iter().map(BigInt::from).collect();
        assert_eq!(as_vec(&sum, 60), expected);
        for t in [Monomial::plus(1), Monomial::plus(2), Monomial::minus(1)] {
            assert!(verify_euler_first(t, 40).unwrap().pass, "{t}");
        }
    }

    #[test]
    fn euler_first_agrees_with_binomial_at_a_zero() {
        for t in [Monomial::plus(1), Monomial::minus(2), Monomial::plus(3)] {
            let (l1, r1) = euler_first_sides(t, 60).unwrap();
            let (l2, r2) = q_binomial_sides(None, t, 60).unwrap();
            assert!(l1.first_mismatch(&l2).is_none());
            assert!(r1.first_mismatch(&r2).is_none());
            assert_eq!(
                verify_euler_first(t, 60).unwrap().pass,
                verify_q_binomial(None, t, 60).unwrap().pass
            );
        }
    }

    #[test]
    fn euler_second_matches_distinct_partitions() {
        let rhs = pochhammer(Monomial::minus(1), 1, Length::Infinite, 60).unwrap();
        let expected: Vec<BigInt> = distinct_partition_counts(60)
            .into_iter()
            .map(BigInt::from)
            .collect();
        assert_eq!(as_vec(&rhs, 60), expected);
        for t in [Monomial::plus(1), Monomial::plus(3), Monomial::minus(2)] {
            assert!(verify_euler_second(t, 40).unwrap().pass, "{t}");
        }
    }

    #[test]
    fn euler_second_at_units() {
        // t = -1 gives (1;q)_∞ = 0 on the product side.
        assert!(verify_euler_second(Monomial::minus(0), 40).unwrap().pass);
        assert!(verify_euler_second(Monomial::plus(0), 40).unwrap().pass);
    }

    #[test]
    fn triple_product_examples() {
        assert!(verify_triple_product(Monomial::minus(0), 100).unwrap().pass);
        assert!(verify_triple_product(Monomial::plus(1), 100).unwrap().pass);
        assert!(verify_triple_product(Monomial::plus(2), 80).unwrap().pass);
    }

    #[test]
    fn triple_product_laurent_range() {
        for m in 0..=5 {
            for z in [Monomial::plus(m), Monomial::minus(m)] {
                let r = verify_triple_product(z, 60).unwrap();
                assert!(r.pass, "{z}: {:?}", r.first_discrepancy);
            }
        }
        let p = triple_product(Monomial::plus(4), 30).unwrap();
        assert_eq!(p.valuation(), -4);
    }

    #[test]
    fn gauss_examples() {
        for n in [0, 1, 200] {
            assert!(verify_gauss_corollaries(n).unwrap().pass, "N={n}");
        }
    }

    #[test]
    fn mismatch_is_reported() {
        let a = QSeries::from_terms([(0, 1.into()), (3, 2.into())], 10);
        let b = QSeries::from_terms([(0, 1.into()), (3, 5.into())], 10);
        let r = compare(ReportBuilder::new("x"), "here", &a, &b);
        let d = r.first_discrepancy.unwrap();
        assert_eq!((d.exponent, d.lhs_coefficient.as_str(), d.rhs_coefficient.as_str()), (3, "2", "5"));
    }

    #[test]
    fn default_grid_shape() {
        let g = IdentityGrid::default();
        assert_eq!(g.binomial_a.len(), 5);
        assert_eq!(g.binomial_t.len(), 6);
        assert_eq!(g.euler_t.len(), 8);
        assert_eq!(g.triple_z.len(), 6);
    }
}
