//! Exit criteria. Every check is exact; each test prints one PASS/FAIL line
//! per criterion (run with `--nocapture` to see them).

use std::time::{Duration, Instant};

use dumont_core::counting::{
    check_dumont, cyclic_count, odd_squares_count, verify_classical, verify_dumont, CyclicFormSpec,
    Residue,
};
use dumont_core::identities::{verify_identity_suite, IdentityGrid};
use dumont_core::matrix::{
    trace_power, trace_power_with_slack, truncated_product_entry,
    truncated_product_entry_with_slack, verify_intertwining, verify_proof_decomposition,
    verify_trace_counts, verify_trace_cyclicity, verify_trace_equality,
    verify_valuation_soundness, MatrixA, MatrixB, MatrixX, SymbolicMatrix,
};
use dumont_core::QSeries;
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn verdict(id: &str, what: &str, pass: bool, elapsed: Duration) -> bool {
    println!(
        "criterion {id}: {} - {what} ({} ms)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_millis()
    );
    pass
}

#[test]
fn criterion_1_dumont_identity() {
    let start = Instant::now();
    let (rows, report) = verify_dumont(6, 200).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(rows.len(), 6 * 201);
    // the n - k values settled by hand before the general proof
    let early = [0u64, 8, 16, 24, 32, 40]
        .iter()
        .flat_map(|&d| (1..=6u64).map(move |k| (k, k + d)))
        .all(|(k, n)| check_dumont(k as usize, n).unwrap().holds);
    let pass = report.pass && early && elapsed < Duration::from_secs(30);
    assert!(
        verdict("1", "r_k = c_k^1 - (-1)^k c_k^3 for k<=6, n<=200", pass, elapsed),
        "{:?}",
        report.first_discrepancy
    );
}

#[test]
fn criterion_2_intertwining() {
    let start = Instant::now();
    let report = verify_intertwining(12, 200, None).unwrap();
    let elapsed = start.elapsed();
    let pass = report.pass && elapsed < Duration::from_secs(60);
    assert!(
        verdict("2", "XB = AX on 13x13 entries to q^200", pass, elapsed),
        "{:?}",
        report.first_discrepancy
    );
}

#[test]
fn criterion_3_trace_corollary() {
    let start = Instant::now();
    let equality = verify_trace_equality(6, 200).unwrap();
    let counts = verify_trace_counts(4, 100).unwrap();
    let elapsed = start.elapsed();
    let pass = equality.pass && counts.pass;
    assert!(
        verdict(
            "3",
            "tr[A^k] = tr[B^k] for k<=6 to q^200; trace coefficients match brute force for k<=4, n<=100",
            pass,
            elapsed
        ),
        "{:?} {:?}",
        equality.first_discrepancy,
        counts.first_discrepancy
    );
}

#[test]
fn criterion_4_proof_decomposition() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for i in 0..=6 {
        for j in 1..=6 {
            let r = verify_proof_decomposition(i, j, 100).unwrap();
            if !r.pass {
                failures.push((i, j, r.first_discrepancy));
            }
        }
    }
    let pass = failures.is_empty();
    assert!(
        verdict("4", "head/tail rearrangements for 0<=i<=6, 1<=j<=6 to q^100", pass, start.elapsed()),
        "{failures:?}"
    );
}

#[test]
fn criterion_5_identity_suite() {
    let start = Instant::now();
    let reports = verify_identity_suite(&IdentityGrid::default(), 200).unwrap();
    let elapsed = start.elapsed();
    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    // 5 a-values x 6 t-values, 8 + 8 Euler, 6 triple product, 1 Gauss
    assert_eq!(reports.len(), 30 + 16 + 6 + 1);
    let pass = failed.is_empty() && elapsed < Duration::from_secs(10);
    assert!(
        verdict("5", "q-binomial, Euler, triple product, Gauss at q^200", pass, elapsed),
        "{failed:?}"
    );
}

#[test]
fn criterion_6_classical_corollaries() {
    let start = Instant::now();
    let reports = verify_classical(200).unwrap();
    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    let pass = reports.len() == 7 && failed.is_empty();
    assert!(
        verdict(
            "6",
            "Eureka m<=200, Jacobi odd squares m<=50, r_2/r_4 n<=200, Lagrange n<=1000, Kronecker n<=200",
            pass,
            start.elapsed()
        ),
        "{failed:?}"
    );
}

fn random_series(rng: &mut StdRng) -> QSeries {
    let valuation = rng.gen_range(-3..4);
    let len = rng.gen_range(0..12);
    let coeffs = (0..len)
        .map(|_| BigInt::from(rng.gen_range(-1_000_000_000_000i64..1_000_000_000_000)))
        .collect();
    let order = valuation + rng.gen_range(0..14);
    QSeries::from_coefficients(valuation, coeffs, order)
}

fn ring_axioms_hold(rng: &mut StdRng) -> bool {
    let (f, g, h) = (random_series(rng), random_series(rng), random_series(rng));
    let assoc = (&(&f * &g) * &h).agrees_with(&(&f * &(&g * &h)));
    let comm = (&f * &g).agrees_with(&(&g * &f)) && (&f + &g).agrees_with(&(&g + &f));
    let dist = (&f * &(&g + &h)).agrees_with(&(&(&f * &g) + &(&f * &h)));
    let add_assoc = (&(&f + &g) + &h).agrees_with(&(&f + &(&g + &h)));
    assoc && comm && dist && add_assoc
}

fn truncation_coherent(rng: &mut StdRng) -> bool {
    let (f, g) = (random_series(rng), random_series(rng));
    let n = rng.gen_range(-2..10);
    let add = (&f.truncate(n) + &g.truncate(n)).agrees_with(&(&f + &g).truncate(n));
    // truncating the inputs at n leaves the product known to at least n + min valuation
    let prod_n = n + f.valuation().min(g.valuation()).min(0);
    let mul = (&f.truncate(n) * &g.truncate(n)).agrees_with(&(&f * &g).truncate(prod_n));
    add && mul
}

fn congruence_vanishing() -> bool {
    (1..=6usize).all(|k| {
        (0..=300u64).filter(|n| n % 8 != k as u64 % 8).all(|n| {
            odd_squares_count(k, n).unwrap() == 0
                && cyclic_count(CyclicFormSpec::new(k, Residue::One).unwrap(), n).unwrap() == 0
                && cyclic_count(CyclicFormSpec::new(k, Residue::Three).unwrap(), n).unwrap() == 0
        })
    })
}

fn cutoff_independence() -> bool {
    if !verify_intertwining(14, 200, None).unwrap().pass {
        return false;
    }
    let x = MatrixX::new();
    let pairs: [(&dyn SymbolicMatrix, &dyn SymbolicMatrix); 2] = [(&x, &MatrixB), (&MatrixA, &x)];
    let entries_stable = pairs.iter().all(|(l, r)| {
        [(0, 0), (3, 7), (12, 12), (12, 0), (5, 11)].iter().all(|&(i, j)| {
            let exact = truncated_product_entry(*l, *r, i, j, 200).unwrap();
            let padded = truncated_product_entry_with_slack(*l, *r, i, j, 200, 6).unwrap();
            exact.first_mismatch(&padded).is_none()
        })
    });
    let traces_stable = (1..=3).all(|k| {
        [&MatrixA as &dyn SymbolicMatrix, &MatrixB].iter().all(|m| {
            let exact = trace_power(*m, k, 120).unwrap();
            let padded = trace_power_with_slack(*m, k, 120, 4).unwrap();
            exact.first_mismatch(&padded).is_none()
        })
    });
    entries_stable && traces_stable
}

#[test]
fn criterion_7_property_suites() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let ring = (0..500).all(|_| ring_axioms_hold(&mut rng));
    let x = MatrixX::new();
    let soundness = [&MatrixA as &dyn SymbolicMatrix, &MatrixB, &x]
        .iter()
        .all(|m| verify_valuation_soundness(*m, 500, 40, 200, 0).pass);
    let coherence = (0..500).all(|_| truncation_coherent(&mut rng));
    let vanishing = congruence_vanishing();
    let cutoffs = cutoff_independence();
    println!(
        "  ring={ring} soundness={soundness} coherence={coherence} vanishing={vanishing} cutoffs={cutoffs}"
    );
    let pass = ring && soundness && coherence && vanishing && cutoffs;
    assert!(verdict(
        "7",
        "ring axioms, valuation soundness, truncation coherence, congruence vanishing, cutoff independence",
        pass,
        start.elapsed()
    ));
}

#[test]
fn criterion_8_mutation_sanity() {
    let start = Instant::now();
    let fault = Some((0, 1));
    let intertwining = verify_intertwining(12, 200, fault).unwrap();
    let cyclicity = verify_trace_cyclicity(200, fault).unwrap();
    println!(
        "  intertwining with x01 = 0: pass={} first_discrepancy={:?}",
        intertwining.pass, intertwining.first_discrepancy
    );
    println!(
        "  trace cyclicity with x01 = 0: pass={} first_discrepancy={:?}",
        cyclicity.pass, cyclicity.first_discrepancy
    );
    // tr[AX] and tr[XA] are both sum_{i,n} a_in x_ni for any X, so the
    // cyclicity half cannot fail and this criterion stays red as stated.
    let caught = |r: &dumont_core::VerificationReport| !r.pass && r.first_discrepancy.is_some();
    let pass = caught(&intertwining) && caught(&cyclicity);
    assert!(verdict(
        "8",
        "zeroing x01 makes XB = AX and tr[AX] = tr[XA] fail with a reported discrepancy",
        pass,
        start.elapsed()
    ));
}
