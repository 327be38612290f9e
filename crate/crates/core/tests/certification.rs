use std::f64::consts::PI;

use num_rational::Ratio;
use proptest::prelude::*;
use torus_courant::certifier::{
    candidate_indices, certify_all, format_ratio, pleijel_lower_bound, ratio, threshold_k,
    upper_bound_lambda_k, Verdict,
};
use torus_courant::special_functions::ratio_bound;
use torus_courant::spectrum::{SpectrumTable, FOUR_PI_SQ};
use torus_courant::Error;

const J01: f64 = 2.404825557695773;

/// Crossing of (4 + 2√(4 + π(k+3)))² and π j² k in real k, by bisection.
fn threshold_oracle() -> f64 {
    let gap = |k: f64| {
        let upper = (4.0 + 2.0 * (4.0 + PI * (k + 3.0)).sqrt()).powi(2);
        upper - PI * J01 * J01 * k
    };
    let (mut lo, mut hi) = (10.0_f64, 100.0_f64);
    assert!(gap(lo) > 0.0 && gap(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn threshold_matches_bisection() {
    let t = threshold_k();
    assert!((t - threshold_oracle()).abs() < 1e-9);
    assert_eq!(format!("{t:.4}"), "49.5973");
}

#[test]
fn bound_crossover() {
    for k in 50..=10_000u64 {
        assert!(
            upper_bound_lambda_k(k) < pleijel_lower_bound(k).unwrap(),
            "k = {k}"
        );
    }
    assert!(upper_bound_lambda_k(49) > pleijel_lower_bound(49).unwrap());
    assert_eq!(format!("{:.4}", upper_bound_lambda_k(0)), "128.3229");
    assert_eq!(format!("{:.4}", pleijel_lower_bound(4).unwrap()), "72.6737");
    assert_eq!(pleijel_lower_bound(3), Err(Error::TooFewDomains(3)));
}

#[test]
fn upper_bound_dominates_true_eigenvalues() {
    let table = SpectrumTable::covering_index(10_000).unwrap();
    for k in 1..=10_000u64 {
        let lam = table.lambda_k(k).unwrap().value();
        assert!(lam <= upper_bound_lambda_k(k), "k = {k}");
    }
}

#[test]
fn ratio_stays_below_bound_past_index_three() {
    let table = SpectrumTable::covering_index(10_000).unwrap();
    let bound = ratio_bound();
    for c in table.classes.iter().filter(|c| c.first_index >= 4) {
        let r = c.s as f64 / c.first_index as f64;
        assert!(r < bound, "nu = {}: {r}", c.first_index);
    }
    assert_eq!(
        candidate_indices(&table).unwrap(),
        [6, 10, 14, 22, 26, 30, 38, 46]
    );
    assert!(matches!(
        candidate_indices(&SpectrumTable::build(8).unwrap()),
        Err(Error::TableTooSmall { .. })
    ));
}

#[test]
fn ratio_table_values() {
    let expected = [
        (6, "0.3333"),
        (10, "0.4000"),
        (14, "0.3571"),
        (22, "0.3636"),
        (26, "0.3462"),
        (30, "0.3333"),
        (38, "0.3421"),
        (46, "0.3478"),
    ];
    for (k, text) in expected {
        let r = ratio(k).unwrap();
        assert_eq!(format_ratio(r, 4), text);
        let lam = SpectrumTable::covering_index(k)
            .unwrap()
            .lambda_k(k)
            .unwrap()
            .value();
        assert!(
            (lam / (4.0 * k as f64 * PI * PI) - *r.numer() as f64 / *r.denom() as f64).abs()
                < 1e-12
        );
    }
    assert_eq!(ratio(0), Err(Error::ZeroIndex));
}

#[test]
fn report_verdicts() {
    let report = certify_all().unwrap();
    assert_eq!(report.courant_sharp_indices, [1, 2, 3, 4, 5]);
    assert_eq!(report.unresolved().count(), 0);
    assert_eq!(
        report.verdict_for_nu(1).unwrap().verdict,
        Verdict::CourantSharpConfirmed
    );
    assert_eq!(
        report.verdict_for_nu(2).unwrap().verdict,
        Verdict::CourantSharpConfirmed
    );
    for nu in [6, 10, 14, 22, 26, 30, 38, 46] {
        assert_eq!(
            report.verdict_for_nu(nu).unwrap().verdict,
            Verdict::ExcludedByRatio
        );
    }
    let last = report.verdict_for_nu(50).unwrap();
    assert_eq!(last.lam_over_4pi2, 17);
    assert_eq!(last.verdict, Verdict::ExcludedByThreshold);
    assert_eq!(report.index_view.len(), 50);
    for iv in &report.index_view {
        assert_eq!(
            iv.verdict == Verdict::CourantSharpConfirmed,
            iv.k <= 5,
            "k = {}",
            iv.k
        );
    }
    let lam2 = report.verdict_for_nu(2).unwrap();
    assert_eq!(lam2.witness.as_ref().unwrap().mu, 2);
    assert!((lam2.lam_over_4pi2 as f64 * FOUR_PI_SQ - 4.0 * PI * PI).abs() < 1e-12);
}

proptest! {
    #[test]
    fn rendering_matches_float_formatting(num in 0u64..100_000, den in 1u64..10_000) {
        let r = Ratio::new(num, den);
        let x = num as f64 / den as f64;
        let scaled = x * 1e4;
        // skip values within float noise of a rounding tie
        prop_assume!((scaled - scaled.floor() - 0.5).abs() > 1e-6);
        prop_assert_eq!(format_ratio(r, 4), format!("{x:.4}"));
    }
}
