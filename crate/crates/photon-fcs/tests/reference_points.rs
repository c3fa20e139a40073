//! Spot checks of public entry points against values frozen from a
//! 40-digit independent computation: series coefficients, scattering
//! coefficients via both table and single-entry routes, kernel values,
//! and joint-distribution cells.

use num_complex::Complex64;
use photon_fcs::bessel::{c_coeff, spherical_bessel_j};
use photon_fcs::coeffs;
use photon_fcs::counting::{self, Truncation};
use photon_fcs::kernel;
use photon_fcs::ScatterParams;

fn close(got: Complex64, want: Complex64, tol: f64) -> bool {
    (got - want).norm() <= tol * want.norm().max(1.0)
}

#[test]
fn spherical_bessel_spot_value() {
    let got = spherical_bessel_j(5, Complex64::new(2.0, 3.0)).unwrap();
    let want = Complex64::new(-0.017607720108720656, -0.06960828461198492);
    assert!(close(got, want, 1e-13), "got {got}");
}

#[test]
fn series_coefficients_small_and_large_argument() {
    let got = c_coeff(2, Complex64::new(1.0, 1.0)).unwrap();
    let want = Complex64::new(-0.18198470600328486, 0.24113082491272852);
    assert!(close(got, want, 1e-13), "c_2(1+1i) = {got}");

    let got = c_coeff(3, Complex64::new(50.0, 0.0)).unwrap();
    let want = Complex64::new(-0.06290689542504332, -1.0094910220013357);
    assert!(close(got, want, 1e-13), "c_3(50) = {got}");
}

#[test]
fn scattering_coefficients_match_frozen_values() {
    let cases = [
        (2.0, 1.0, 2, 1, Complex64::new(-0.26748210303446685, -0.03989424961402802)),
        (5.0, 1.0, 5, 3, Complex64::new(-0.014080721927066041, -0.0006716710639130616)),
        (1.0, 0.0, 10, 0, Complex64::new(-0.7007713122781803, 0.0)),
        (10.0, 5.0, 0, 7, Complex64::new(0.000545323488066443, -0.009742911386627044)),
        (1.0, 0.0, 1, 0, Complex64::new(1.0 - (-1.0f64).exp(), 0.0)),
    ];
    for (gamma, delta, n, m, want) in cases {
        let params = ScatterParams::new(gamma, delta).unwrap();
        let single = coeffs::s_nm(&params, n, m).unwrap().value;
        let table = coeffs::coeff_table(&params, n + m).unwrap().entry(n, m).value;
        assert!(
            close(single, want, 1e-12),
            "s_{n}{m}(gamma={gamma}, delta={delta}) = {single}, want {want}"
        );
        assert!(
            close(table, single, 1e-13),
            "table and single-entry routes disagree at ({n},{m})"
        );
    }
}

#[test]
fn kernel_values_on_all_routes() {
    let params = ScatterParams::new(1.0, 1.0).unwrap();
    let cases = [
        (Complex64::new(0.2, 0.0), Complex64::new(0.8660439230089893, -0.03819658840661845)),
        (Complex64::new(0.3, 0.1), Complex64::new(0.8186986581164933, -0.11946009458647913)),
    ];
    for (w, want) in cases {
        let trig = kernel::kernel_d_tilde(&params, w);
        let root = kernel::kernel_root_form(&params, w);
        let series = kernel::kernel_series(&params, w, 60).unwrap();
        for (route, got) in [("trig", trig), ("root", root), ("series", series)] {
            assert!(close(got, want, 1e-12), "{route} route at w={w}: {got}");
        }
    }
}

#[test]
fn joint_cells_match_frozen_values() {
    let params = ScatterParams::new(1.0, 1.0).unwrap();
    let joint = counting::joint_distribution(&params, 3.0, Truncation::Auto).unwrap();
    // the zero cell is a true probability; the (2,0) edge cell is a
    // genuinely negative quasiprobability weight
    assert!((joint.q(0, 0) - 0.9461950804656477).abs() < 1e-12);
    assert!((joint.q(2, 0) - (-0.008712158565187987)).abs() < 1e-12);
    assert!((joint.total_mass() - 1.0).abs() < 1e-10);
}

#[test]
fn poisson_weight_spot_value() {
    assert!((counting::poisson_weight(4.0, 4) - 0.19536681481316454).abs() < 1e-16);
}
