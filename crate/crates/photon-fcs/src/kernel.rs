//! The generating kernel d̃(w) whose Taylor coefficients at w = 0 encode the
//! scattering coefficients, evaluated through three independent routes:
//!
//! * trig closed form  e^{ia/2} [cos(κ/2) − i a sin(κ/2)/κ],  κ = √(a² + 8γw)
//! * quadratic-root representation  [−p₋ e^{−ip₊} + p₊ e^{−ip₋}] / (p₊ − p₋)
//! * power series  Σ_k t^k c_k(ρ)/k!  with  t = −γw/ρ
//!
//! where a = δ + iγ = 2ρ. The three must agree; they share no intermediate
//! code, which is what makes cross-route comparison a meaningful check.
//! The kernel is even in κ, so the square-root branch never matters.
//!
//! A jet-valued evaluation of the closed form provides exact derivatives at
//! w = 0, used as the independent oracle for the binomial Bessel sum.

use num_complex::Complex64;

use crate::bessel::c_coeff_seq;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::numeric::{binomial_row, KahanComplex};
use crate::params::ScatterParams;

/// Which evaluation route produced a kernel value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelRoute {
    TrigClosedForm,
    RootRepresentation,
    SeriesExpansion,
}

/// A kernel value tagged with the route that produced it.
#[derive(Debug, Clone, Copy)]
pub struct KernelValue {
    pub value: Complex64,
    pub route: KernelRoute,
}

/// κ² below this bound switches the trig form to its Taylor branch
/// (equivalently |κ| < 1e−4); both branches agree to ~1e−12 at the crossover.
const REMOVABLE_TOL: f64 = 1e-8;

/// |p₊ − p₋| = |κ| below this uses the confluent double-root limit.
const CONFLUENT_TOL: f64 = 1e-6;

/// Up to this |κ²| at the expansion point, the jet evaluation composes the
/// entire power series of cos(√y/2) and sin(√y/2)/√y in y = κ², which is
/// linear in w. d̃ is an entire function of w, but the sqrt/trig jet route
/// manufactures a spurious branch point at κ = 0 whose contribution must
/// cancel between the cos and sinc pieces — a cancellation that deepens
/// super-exponentially with jet order and silently destroys high-order
/// derivatives. The series route has no branch point to cancel; its term
/// peak ~e^{|κ₀|/2} stays within f64 range for |κ₀| up to ~1200, hence the
/// bound below. Beyond it, the sqrt route (adequate at the low orders that
/// regime is used for) takes over.
const JET_SERIES_MAX: f64 = 1e6;

fn kappa_squared(params: &ScatterParams, w: Complex64) -> Complex64 {
    let a = params.complex_detuning();
    a * a + 8.0 * params.gamma() * w
}

/// e^{ia/2} prefactor shared by every route.
fn prefactor(params: &ScatterParams) -> Complex64 {
    (Complex64::i() * params.complex_detuning() / 2.0).exp()
}

/// Trig closed form of the kernel; the removable point κ = 0 is handled by a
/// short Taylor branch in κ².
pub fn kernel_d_tilde(params: &ScatterParams, w: Complex64) -> Complex64 {
    let a = params.complex_detuning();
    let y = kappa_squared(params, w);
    let pre = prefactor(params);
    if y.norm() < REMOVABLE_TOL {
        let (c, s) = cos_sinc_taylor(y);
        pre * (c - Complex64::i() * a * s)
    } else {
        let kappa = y.sqrt();
        let half = kappa / 2.0;
        pre * (half.cos() - Complex64::i() * a * half.sin() / kappa)
    }
}

/// cos(√y / 2) and sin(√y / 2)/√y as entire functions of y = κ².
/// Six terms give ~1e−57 truncation error at the |y| < 1e−8 switchover.
fn cos_sinc_taylor(y: Complex64) -> (Complex64, Complex64) {
    let x = -y / 4.0;
    let mut pw = Complex64::new(1.0, 0.0);
    let mut c = Complex64::new(0.0, 0.0);
    let mut s = Complex64::new(0.0, 0.0);
    let mut fact = 1.0; // (2k)!
    for k in 0..6 {
        if k > 0 {
            pw *= x;
            fact *= (2 * k - 1) as f64 * (2 * k) as f64;
        }
        c += pw / fact;
        s += pw / (fact * (2 * k + 1) as f64) / 2.0;
    }
    (c, s)
}

/// Kernel through the roots p± = (−a ± κ)/2 of the underlying quadratic.
///
/// The free variable of the quadratic's constant term enters only through
/// the combination −2γw (= p₊p₋), which fixes the dimensionless mapping;
/// agreement with the trig form validates it.
pub fn kernel_root_form(params: &ScatterParams, w: Complex64) -> Complex64 {
    let a = params.complex_detuning();
    let pre = prefactor(params);
    let kappa = kappa_squared(params, w).sqrt();
    if kappa.norm() < CONFLUENT_TOL {
        // confluent double root: lim = e^{ia/2} (1 − ia/2)
        return pre * (Complex64::new(1.0, 0.0) - Complex64::i() * a / 2.0);
    }
    let p_plus = (-a + kappa) / 2.0;
    let p_minus = (-a - kappa) / 2.0;
    let mi = -Complex64::i();
    (-p_minus * (mi * p_plus).exp() + p_plus * (mi * p_minus).exp()) / kappa
}

/// Kernel as the exponential generating series Σ t^k c_k(ρ)/k!, t = −γw/ρ.
pub fn kernel_series(params: &ScatterParams, w: Complex64, terms: usize) -> Result<Complex64> {
    if params.gamma() == 0.0 || terms == 0 {
        // t = 0: the series collapses to c_0 = 1
        return Ok(Complex64::new(1.0, 0.0));
    }
    let rho = params.rho();
    let t = -params.gamma() * w / rho;
    let c = c_coeff_seq(terms - 1, rho)?;
    let mut acc = KahanComplex::new();
    let mut tk = Complex64::new(1.0, 0.0); // t^k / k!
    for (k, ck) in c.iter().enumerate() {
        if k > 0 {
            tk = tk * t / k as f64;
        }
        acc.add(tk * ck);
    }
    Ok(acc.value())
}

/// Evaluate the kernel through a chosen route, tagging the result.
pub fn kernel_value(params: &ScatterParams, w: Complex64, route: KernelRoute) -> Result<KernelValue> {
    let value = match route {
        KernelRoute::TrigClosedForm => kernel_d_tilde(params, w),
        KernelRoute::RootRepresentation => kernel_root_form(params, w),
        KernelRoute::SeriesExpansion => kernel_series(params, w, 60)?,
    };
    Ok(KernelValue { value, route })
}

/// Jet-valued kernel: the closed form evaluated on a truncated Taylor
/// argument, yielding exact derivatives of d̃ at the jet's base point.
///
/// The default path composes the entire series of cos(√y/2) and sin(√y/2)/√y
/// in y = κ², which is linear in w, so every Taylor coefficient of d̃ is a
/// convergent sum of same-order terms — no cancellation grows with the jet
/// order. The sqrt + sin/cos jet route is kept only for |κ²| beyond f64
/// range of the series' intermediate terms; there each trig factor carries a
/// κ = 0 branch-point contribution that must cancel against its partner, and
/// high-order derivatives degrade, but that regime is only reached by the
/// strong-coupling asymptotics where low orders suffice.
pub fn kernel_d_tilde_jet(params: &ScatterParams, w: &Jet) -> Result<Jet> {
    if params.gamma() == 0.0 && params.delta() == 0.0 {
        return Err(Error::JetBranchPoint("sqrt"));
    }
    let a = params.complex_detuning();
    let order = w.order();
    let a_sq = Jet::constant(a * a, order);
    let y = a_sq.add(&w.scale(Complex64::new(8.0 * params.gamma(), 0.0)));
    let pre = prefactor(params);

    let (c, s) = if y.coeff(0).norm() <= JET_SERIES_MAX {
        jet_cos_sinc_series(&y)
    } else {
        let kappa = y.sqrt()?;
        let (sin_half, cos_half) = kappa.scale(Complex64::new(0.5, 0.0)).sin_cos();
        let inv_kappa = kappa.recip()?;
        (cos_half, sin_half.mul(&inv_kappa))
    };

    let ias = s.scale(Complex64::i() * a);
    Ok(c.sub(&ias).scale(pre))
}

/// Entire-series jets for cos(√y/2) and sin(√y/2)/√y, summed in powers of
/// x = −y/4 until every coefficient has converged.
///
/// The running term is kept normalized as u_k = x^k/(2k)! (one recurrence
/// step multiplies by x and divides by (2k−1)(2k)), so its magnitude peaks
/// near e^{|κ₀|/2} instead of |x₀|^k — the raw power would overflow long
/// before the factorial catches up once |κ₀| is a few hundred.
fn jet_cos_sinc_series(y: &Jet) -> (Jet, Jet) {
    let order = y.order();
    let x = y.scale(Complex64::new(-0.25, 0.0));
    let mut u = Jet::constant(Complex64::new(1.0, 0.0), order);
    let mut c = Jet::constant(Complex64::new(1.0, 0.0), order);
    let mut s = Jet::constant(Complex64::new(0.5, 0.0), order);
    let min_terms = order + 4;
    // The largest term sits near k ≈ √|x₀| = |κ₀|/2; budget past it.
    let peak = x.coeff(0).norm().sqrt() as usize;
    let max_terms = 16 * (order + 8) + 4 * (peak + 1);
    for k in 1..=max_terms {
        let damp = 1.0 / ((2 * k - 1) as f64 * (2 * k) as f64);
        u = u.mul(&x).scale(Complex64::new(damp, 0.0));
        c = c.add(&u);
        s = s.add(&u.scale(Complex64::new(0.5 / (2 * k + 1) as f64, 0.0)));
        if k >= min_terms {
            let scale: f64 = c
                .coeffs()
                .iter()
                .map(|v| v.norm())
                .fold(1.0, f64::max);
            let biggest = u.coeffs().iter().map(|v| v.norm()).fold(0.0, f64::max);
            if biggest < 1e-18 * scale {
                break;
            }
        }
    }
    (c, s)
}

/// Scattering coefficient by direct differentiation:
/// s_nm = 2^{−(n+m)} (D + 2)^n D^m d̃ |_{w=0}, expanded binomially over
/// derivative orders, with D = ∂/∂w.
pub fn s_nm_oracle(params: &ScatterParams, n: usize, m: usize) -> Result<Complex64> {
    s_nm_oracle_padded(params, n, m, 0)
}

/// Same as [`s_nm_oracle`] with extra jet orders beyond the required n+m,
/// for diagnosing order-sensitivity (the result must not depend on `pad`).
#[allow(clippy::needless_range_loop)]
pub fn s_nm_oracle_padded(
    params: &ScatterParams,
    n: usize,
    m: usize,
    pad: usize,
) -> Result<Complex64> {
    let order = n + m + pad;
    let w = Jet::variable(Complex64::new(0.0, 0.0), order);
    let d = kernel_d_tilde_jet(params, &w)?;
    let bin = binomial_row(n);
    let mut acc = KahanComplex::new();
    for p in 0..=n {
        let weight = bin[p] * 2f64.powi((n - p) as i32);
        acc.add(d.derivative(p + m) * weight);
    }
    Ok(acc.value() * 2f64.powi(-((n + m) as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(gamma: f64, delta: f64) -> ScatterParams {
        ScatterParams::new(gamma, delta).unwrap()
    }

    #[test]
    fn kernel_is_one_at_w_zero_without_coupling() {
        let v = kernel_d_tilde(&params(0.0, 2.0), Complex64::new(0.0, 0.0));
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn kernel_is_one_at_w_zero_with_coupling() {
        let v = kernel_d_tilde(&params(1.0, 1.0), Complex64::new(0.0, 0.0));
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn trig_matches_frozen_reference() {
        // 60-digit reference values
        let v = kernel_d_tilde(&params(1.0, 1.0), Complex64::new(0.2, 0.0));
        let want = Complex64::new(0.8660439230089893, -0.03819658840661845);
        assert!((v - want).norm() < 1e-14);

        let v = kernel_d_tilde(&params(1.0, 1.0), Complex64::new(0.3, 0.1));
        let want = Complex64::new(0.8186986581164933, -0.11946009458647913);
        assert!((v - want).norm() < 1e-14);
    }

    #[test]
    fn three_routes_agree_at_a_generic_point() {
        let p = params(1.0, 1.0);
        let w = Complex64::new(0.2, 0.0);
        let trig = kernel_d_tilde(&p, w);
        let root = kernel_root_form(&p, w);
        let series = kernel_series(&p, w, 60).unwrap();
        assert!((trig - root).norm() < 1e-12 * trig.norm());
        assert!((trig - series).norm() < 1e-12 * trig.norm());
    }

    #[test]
    fn degenerate_kappa_point_is_removable() {
        // w chosen so that κ² = a² + 8γw = 0 exactly
        let p = params(1.0, 1.0);
        let a = p.complex_detuning();
        let w_star = -a * a / (8.0 * p.gamma());
        let taylor = kernel_d_tilde(&p, w_star);
        let confluent = kernel_root_form(&p, w_star);
        assert!((taylor - confluent).norm() < 1e-12);
        // and both equal e^{ia/2}(1 − ia/2)
        let expect = (Complex64::i() * a / 2.0).exp()
            * (Complex64::new(1.0, 0.0) - Complex64::i() * a / 2.0);
        assert!((taylor - expect).norm() < 1e-12);
    }

    #[test]
    fn jet_kernel_rejects_double_branch_point() {
        let w = Jet::variable(Complex64::new(0.0, 0.0), 3);
        assert_eq!(
            kernel_d_tilde_jet(&params(0.0, 0.0), &w),
            Err(Error::JetBranchPoint("sqrt"))
        );
    }

    #[test]
    fn jet_constant_term_matches_scalar_kernel() {
        for (g, d) in [(1.0, 1.0), (0.1, 0.0), (10.0, 5.0), (5.0, 0.0)] {
            let p = params(g, d);
            let w = Jet::variable(Complex64::new(0.0, 0.0), 6);
            let jet = kernel_d_tilde_jet(&p, &w).unwrap();
            let scalar = kernel_d_tilde(&p, Complex64::new(0.0, 0.0));
            assert!(
                (jet.coeff(0) - scalar).norm() < 1e-12,
                "gamma={g} delta={d}"
            );
        }
    }

    #[test]
    fn jet_derivatives_match_finite_differences() {
        let p = params(2.0, 1.0);
        let w = Jet::variable(Complex64::new(0.0, 0.0), 2);
        let jet = kernel_d_tilde_jet(&p, &w).unwrap();
        let h = 1e-5;
        let fd1 = (kernel_d_tilde(&p, Complex64::new(h, 0.0))
            - kernel_d_tilde(&p, Complex64::new(-h, 0.0)))
            / (2.0 * h);
        assert!((jet.derivative(1) - fd1).norm() < 1e-8);
    }

    #[test]
    fn oracle_identity_order_zero() {
        // (D+2)^0 D^0 / 2^0 returns d̃(0) unchanged
        let p = params(3.0, 2.0);
        let s00 = s_nm_oracle(&p, 0, 0).unwrap();
        let direct = kernel_d_tilde(&p, Complex64::new(0.0, 0.0));
        assert!((s00 - direct).norm() < 1e-13);
    }

    #[test]
    fn oracle_matches_frozen_references() {
        // s_21(γ=2, δ=1) from the independent 60-digit derivative route
        let v = s_nm_oracle(&params(2.0, 1.0), 2, 1).unwrap();
        let want = Complex64::new(-0.26748210303446685, -0.03989424961402802);
        assert!((v - want).norm() < 1e-12, "got {v}");

        // s_10(γ=1, δ=0) = 1 − 1/e
        let v = s_nm_oracle(&params(1.0, 0.0), 1, 0).unwrap();
        assert_relative_eq!(v.re, 0.6321205588285577, max_relative = 1e-12);
        assert!(v.im.abs() < 1e-13);
    }

    #[test]
    fn oracle_is_insensitive_to_jet_padding() {
        let p = params(2.0, 1.0);
        let base = s_nm_oracle(&p, 2, 1).unwrap();
        for pad in [1, 3, 7] {
            let padded = s_nm_oracle_padded(&p, 2, 1, pad).unwrap();
            assert!((base - padded).norm() < 1e-13);
        }
    }

    #[test]
    fn jet_series_and_sqrt_branches_agree_near_threshold() {
        // |a²| straddles JET_SERIES_MAX = 1e6: a point just under stays on
        // the entire-series branch, one just over flips to jet sqrt+trig;
        // both must reproduce finite differences of the scalar closed form
        for (g, d) in [(999.0, 0.0), (1001.0, 0.0)] {
            let p = params(g, d);
            let w = Jet::variable(Complex64::new(0.0, 0.0), 3);
            let jet = kernel_d_tilde_jet(&p, &w).unwrap();
            let h = 1e-5;
            let fd = (kernel_d_tilde(&p, Complex64::new(h, 0.0))
                - kernel_d_tilde(&p, Complex64::new(-h, 0.0)))
                / (2.0 * h);
            assert!(
                (jet.derivative(1) - fd).norm() < 1e-7 * fd.norm().max(1.0),
                "gamma={g}"
            );
        }
    }
}
