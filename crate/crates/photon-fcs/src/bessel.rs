//! Spherical Bessel functions of the first kind for complex argument, and the
//! pulse-shape coefficients c_n built from them.
//!
//! Orders are generated with Miller's downward recurrence: seed two tiny
//! values far above the largest requested order, recur down with
//! f_{k-1} = (2k+1)/rho * f_k - f_{k+1}, then rescale the whole sequence
//! against a closed-form low order. Downward is the stable direction because
//! j_n is the minimal solution of the recurrence for orders beyond |rho|.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{ln_double_factorial_odd, ln_double_factorial_odd_below};

/// Below this magnitude the leading series term is exact to ~1e-16 relative,
/// so the recurrence machinery is skipped entirely.
const TINY_RHO: f64 = 1e-8;

/// Unnormalized recurrence values are rescaled when they pass this bound.
/// It must sit far below sqrt(f64::MAX) ~ 1.3e154: the final normalization
/// divides by vals[0], and complex division squares the magnitude
/// internally, so letting the sweep run past that wall would silently turn
/// the scale factor into zero.
const RESCALE_AT: f64 = 1e130;
const RESCALE_BY: f64 = 1e-130;

/// j_n(rho) for a single order n >= -1.
///
/// j_{-1} comes from its closed form cos(rho)/rho; other orders share the
/// batched evaluation below.
pub fn spherical_bessel_j(n: i64, rho: Complex64) -> Result<Complex64> {
    if n < -1 {
        return Err(Error::BesselOrder(n));
    }
    if rho == Complex64::new(0.0, 0.0) {
        return Err(Error::BesselZeroArgument);
    }
    if n == -1 {
        return Ok(rho.cos() / rho);
    }
    let seq = spherical_bessel_j_seq(n as usize, rho)?;
    Ok(seq[n as usize])
}

/// j_0(rho) .. j_{n_max}(rho) in one downward sweep.
pub fn spherical_bessel_j_seq(n_max: usize, rho: Complex64) -> Result<Vec<Complex64>> {
    if rho == Complex64::new(0.0, 0.0) {
        return Err(Error::BesselZeroArgument);
    }
    let r = rho.norm();
    if r < TINY_RHO {
        return Ok((0..=n_max).map(|n| small_argument_j(n, rho)).collect());
    }

    // The seed must sit far enough past the turning point k ~ |rho| that the
    // contaminating (Neumann-like) solution has decayed below target accuracy
    // relative to j. A flat offset alone is not enough when n_max << |rho|,
    // hence the |rho|-proportional cushion.
    let base = n_max.max(r.ceil() as usize) + 40 + (0.12 * r).ceil() as usize;
    let start = base.max(n_max + 20usize.max(r.ceil() as usize));

    let inv_rho = Complex64::new(1.0, 0.0) / rho;
    let mut f_hi = Complex64::new(0.0, 0.0); // f_{k+1}
    let mut f_cur = Complex64::new(1e-30, 0.0); // f_k
    let keep = n_max.max(1);
    let mut vals = vec![Complex64::new(0.0, 0.0); keep + 1];
    let mut k = start;
    while k > 0 {
        let f_lo = (2.0 * k as f64 + 1.0) * inv_rho * f_cur - f_hi;
        f_hi = f_cur;
        f_cur = f_lo;
        k -= 1;
        if k <= keep {
            vals[k] = f_cur;
        }
        if f_cur.norm_sqr() > RESCALE_AT * RESCALE_AT {
            f_hi *= RESCALE_BY;
            f_cur *= RESCALE_BY;
            for v in vals.iter_mut() {
                *v *= RESCALE_BY;
            }
        }
    }

    // Normalize against whichever closed-form order is larger in magnitude;
    // j_0 = sin(rho)/rho has zeros on the real axis where j_1 does not.
    let j0 = rho.sin() / rho;
    let j1 = rho.sin() / (rho * rho) - rho.cos() / rho;
    let scale = if j0.norm() >= j1.norm() {
        j0 / vals[0]
    } else {
        j1 / vals[1]
    };

    vals.truncate(n_max + 1);
    for v in vals.iter_mut() {
        *v *= scale;
    }
    Ok(vals)
}

/// Leading series term j_n ~ rho^n / (2n+1)!!, assembled in log space so
/// large orders underflow gracefully instead of overflowing the double
/// factorial.
fn small_argument_j(n: usize, rho: Complex64) -> Complex64 {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let ln_mag = (n as f64) * rho.norm().ln() - ln_double_factorial_odd(n);
    Complex64::from_polar(ln_mag.exp(), (n as f64) * rho.arg())
}

/// Pulse coefficients c_n(rho) = rho e^{i rho} [j_{n-1}(rho) - i j_n(rho)].
///
/// c_0 = 1 identically, and c_n -> i^n for large |rho|.
pub fn c_coeff(n: usize, rho: Complex64) -> Result<Complex64> {
    Ok(c_coeff_seq(n, rho)?[n])
}

/// c_0(rho) .. c_{n_max}(rho) from one Bessel sweep.
pub fn c_coeff_seq(n_max: usize, rho: Complex64) -> Result<Vec<Complex64>> {
    if rho.norm() < TINY_RHO {
        // analytic limit: c_0 = 1, c_n ~ rho^n / (2n-1)!!
        return Ok((0..=n_max)
            .map(|n| {
                if n == 0 {
                    Complex64::new(1.0, 0.0)
                } else if rho == Complex64::new(0.0, 0.0) {
                    Complex64::new(0.0, 0.0)
                } else {
                    let ln_mag =
                        (n as f64) * rho.norm().ln() - ln_double_factorial_odd_below(n);
                    Complex64::from_polar(ln_mag.exp(), (n as f64) * rho.arg())
                }
            })
            .collect());
    }
    let j = spherical_bessel_j_seq(n_max, rho)?;
    let j_m1 = rho.cos() / rho;
    let pre = rho * (Complex64::i() * rho).exp();
    let i = Complex64::i();
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let j_prev = if n == 0 { j_m1 } else { j[n - 1] };
        out.push(pre * (j_prev - i * j[n]));
    }
    Ok(out)
}
