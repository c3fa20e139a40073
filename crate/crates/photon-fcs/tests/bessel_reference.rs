//! Cross-check of the downward-recurrence spherical Bessel evaluation
//! against 60-digit reference values frozen to JSON.

use num_complex::Complex64;
use photon_fcs::bessel::spherical_bessel_j;
use serde::Deserialize;

#[derive(Deserialize)]
struct Fixture {
    #[allow(dead_code)]
    comment: String,
    records: Vec<Record>,
}

#[derive(Deserialize)]
struct Record {
    n: i64,
    rho: [f64; 2],
    j: [f64; 2],
}

#[test]
fn matches_sixty_digit_references() {
    let fixture: Fixture =
        serde_json::from_str(include_str!("data/bessel_reference.json")).expect("fixture parses");
    assert!(fixture.records.len() > 1000, "fixture looks truncated");

    let mut worst = 0.0f64;
    for rec in &fixture.records {
        let rho = Complex64::new(rec.rho[0], rec.rho[1]);
        let want = Complex64::new(rec.j[0], rec.j[1]);
        let got = spherical_bessel_j(rec.n, rho).expect("grid point evaluates");
        let rel = (got - want).norm() / want.norm().max(f64::MIN_POSITIVE);
        assert!(
            rel <= 1e-12,
            "j_{}({}) off by rel {:.3e}: got {}, want {}",
            rec.n,
            rho,
            rel,
            got,
            want
        );
        worst = worst.max(rel);
    }
    // plenty of headroom expected; a creeping worst case means the
    // recurrence seed has degraded
    assert!(worst < 1e-12, "worst relative error {worst:.3e}");
}
