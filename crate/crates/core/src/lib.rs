//! Exact verification of the identity
//! `r_k(n) = c_k^{1 mod 4}(n) - (-1)^k c_k^{3 mod 4}(n)` relating sums of `k`
//! odd squares to cyclic quadratic forms, together with the q-series
//! identities, the infinite-matrix intertwining relation and the classical
//! sums-of-squares corollaries it rests on.
//!
//! - [`series`]: truncated Laurent series over big integers, q-Pochhammer
//!   products and theta sums.
//! - [`identities`]: q-binomial, Euler, Jacobi triple product and Gauss checks.
//! - [`matrix`]: the infinite matrices `A`, `B`, `X`, certified truncated
//!   products and traces.
//! - [`counting`]: brute-force representation counts and divisor formulas.
//! - [`report`]: the machine-readable verification report.

pub mod counting;
pub mod exec;
pub mod identities;
pub mod matrix;
pub mod report;
pub mod series;

pub use report::{Discrepancy, ReportBuilder, VerificationReport};
pub use series::{Length, Monomial, QSeries, SeriesError, Sign};
