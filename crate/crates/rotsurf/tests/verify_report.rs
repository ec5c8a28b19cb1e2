//! End-to-end checks of the verification suite: every built-in check
//! passes on the shipped catalogue, the report round-trips through
//! JSON, and repeated runs are bit-identical.

use rotsurf::verify::{
    curvature_fd, gauss_from_moutard, run_suite, MoutardPolarData, SuiteConfig,
    VerificationReport,
};

use rotsurf::geometry::embed;
use rotsurf::profile::{classify, Branch, CaseParams, SpaceForm};

#[test]
fn default_suite_passes_every_check() {
    let report = run_suite(&SuiteConfig::default());
    assert_eq!(report.checks.len(), 6);
    for check in &report.checks {
        assert!(
            check.pass,
            "{}: max residual {:.3e} exceeds {:.1e} over {} samples",
            check.name, check.max_residual, check.tolerance, check.n_samples
        );
        assert!(check.n_samples > 0, "{}: no samples evaluated", check.name);
    }
}

#[test]
fn report_serialisation_is_deterministic() {
    let config = SuiteConfig::default();
    let a = serde_json::to_string_pretty(&run_suite(&config)).unwrap();
    let b = serde_json::to_string_pretty(&run_suite(&config)).unwrap();
    assert_eq!(a, b, "suite output changed between identical runs");
    let parsed: VerificationReport = serde_json::from_str(&a).unwrap();
    assert!(parsed.all_pass());
}

/// The analytic curvature formula against finite differences of the
/// embedding, across all four rotation classes.
#[test]
fn lemma_agrees_with_finite_differences_everywhere() {
    let picks: &[(SpaceForm, f64)] = &[
        (SpaceForm::s3(), -2.0),
        (SpaceForm::s3(), 1.0),
        (SpaceForm::h3_elliptic(), 2.0),
        (SpaceForm::h3_elliptic(), -1.0),
        (SpaceForm::h3_hyperbolic(), 2.0),
        (SpaceForm::h3_hyperbolic(), -1.0),
        (SpaceForm::h3_parabolic(), 2.0),
        (SpaceForm::h3_parabolic(), -1.0),
    ];
    for &(space, k) in picks {
        for case in classify(space, k).unwrap() {
            if case.branch() == Branch::Clifford {
                continue;
            }
            let params = if case.parametrised_by_c() && case.branch() != Branch::Flat {
                let (lo, _) = case.c_bounds();
                let c = if lo.is_some() { 1.25 } else { -1.25 };
                CaseParams::from_c(case, c)
            } else {
                let (lo, hi) = case.modulus_interval();
                let p = if hi.is_finite() { lo + 0.5 * (hi - lo) } else { 1.25 };
                CaseParams::from_modulus(case, p)
            };
            let params = match params {
                Ok(p) => p,
                Err(_) => continue, // parameter outside this row's constant range
            };
            let (lo, hi) = params.default_window();
            let mut checked = 0;
            for i in 1..5 {
                let s = lo + (hi - lo) * (0.2 + 0.15 * i as f64);
                let est = match curvature_fd(&|a, b| embed(&params, a, b), s, 0.7, 1e-4) {
                    Ok(est) => est,
                    Err(_) => continue, // near-umbilic or singular sample
                };
                let lemma = gauss_from_moutard(
                    &MoutardPolarData::from_profile(&params, s).unwrap(),
                )
                .unwrap();
                assert!(
                    (lemma - k).abs() < 1e-8,
                    "{} K={k} {:?}: lemma gives {lemma} at s = {s}",
                    space.name(),
                    case.branch()
                );
                assert!(
                    (est.k - lemma).abs() < 5e-4,
                    "{} K={k} {:?}: FD {} vs lemma {lemma} at s = {s}",
                    space.name(),
                    case.branch(),
                    est.k
                );
                checked += 1;
            }
            assert!(checked > 0, "{} K={k} {:?}: no regular samples", space.name(), case.branch());
        }
    }
}
