//! Scattering coefficients s_nm: the complex weights that deform the
//! incident Poissonian statistics, with n counting forward and m backward
//! photons.
//!
//! The production route is the binomial sum
//!
//! ```text
//! s_nm = Σ_{p=0}^{n} C(n,p) q^{p+m} c_{p+m}(ρ),   q = −γ/(2ρ),  ρ = (δ+iγ)/2
//! ```
//!
//! which alternates in phase and cancels, so every entry carries a running
//! absolute-error estimate built from the compensated sum. Binomials combine
//! with the power term in log space, deferring overflow past n ≈ 1000.
//!
//! Exact limits replace the sum where the arithmetic would be pointless:
//! γ = 0 transmits everything (s_nm = [m = 0]), and very large γ factorizes
//! into single-photon amplitudes t^n r^m.

use num_complex::Complex64;

use crate::bessel::c_coeff_seq;
use crate::error::{Error, Result};
use crate::kernel::kernel_d_tilde_jet;
use crate::jet::Jet;
use crate::numeric::{ln_factorial_table, KahanComplex};
use crate::params::ScatterParams;

/// Scattering direction for marginal quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    /// Transmitted, co-propagating with the input pulse (n index).
    Forward,
    /// Reflected (m index).
    Backward,
}

/// Relative cancellation beyond this marks an entry as ill-conditioned.
pub const CONDITIONING_TOL: f64 = 1e-8;

/// Above this coupling, e^{±γ/2} leaves the f64 range inside the Bessel
/// balancing act; the factorized limit is exact to far better than f64 noise
/// there (the correction is O((n+m)/γ)).
pub const LARGE_GAMMA: f64 = 1400.0;

/// A coefficient with its summation-error estimate.
#[derive(Debug, Clone, Copy)]
pub struct CoeffValue {
    pub value: Complex64,
    /// Estimated absolute error of `value` from rounding plus compensation
    /// residue accumulated over the alternating sum.
    pub abs_err: f64,
}

impl CoeffValue {
    /// Error relative to max(1, |value|) — the scale probabilities live on.
    pub fn rel_err(&self) -> f64 {
        self.abs_err / self.value.norm().max(1.0)
    }
}

/// Which computation produced a coefficient table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffRoute {
    /// Binomial sum over spherical-Bessel c_k values (production route).
    BesselSum,
    /// Derivative extraction from a single truncated-Taylor kernel
    /// evaluation (verification route).
    JetOracle,
}

/// An entry flagged for cancellation beyond [`CONDITIONING_TOL`].
#[derive(Debug, Clone, Copy)]
pub struct ConditioningWarning {
    pub n: usize,
    pub m: usize,
    pub rel_err: f64,
}

/// Dense triangular table of s_nm for all n + m ≤ n_max.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    n_max: usize,
    params: ScatterParams,
    route: CoeffRoute,
    entries: Vec<CoeffValue>,
    warnings: Vec<ConditioningWarning>,
}

impl CoeffTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn params(&self) -> &ScatterParams {
        &self.params
    }

    pub fn route(&self) -> CoeffRoute {
        self.route
    }

    pub fn warnings(&self) -> &[ConditioningWarning] {
        &self.warnings
    }

    fn index(&self, n: usize, m: usize) -> usize {
        debug_assert!(n + m <= self.n_max);
        // row n holds n_max − n + 1 entries
        n * (self.n_max + 1) - n * (n.wrapping_sub(1)) / 2 + m
    }

    /// s_nm with its error estimate; requires n + m ≤ n_max.
    pub fn entry(&self, n: usize, m: usize) -> CoeffValue {
        assert!(
            n + m <= self.n_max,
            "coefficient ({n},{m}) outside table of extent {}",
            self.n_max
        );
        self.entries[self.index(n, m)]
    }

    /// Iterate (n, m, value) over the whole triangle.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, CoeffValue)> + '_ {
        (0..=self.n_max).flat_map(move |n| {
            (0..=self.n_max - n).map(move |m| (n, m, self.entry(n, m)))
        })
    }
}

/// Single-photon continuum amplitudes and probabilities.
#[derive(Debug, Clone, Copy)]
pub struct ContinuumAmplitudes {
    pub t: Complex64,
    pub r: Complex64,
    pub transmission: f64,
    pub reflection: f64,
}

/// t = δ/(δ+iγ), r = −iγ/(δ+iγ); T = |t|², R = |r|² with T + R = 1.
pub fn continuum_amplitudes(params: &ScatterParams) -> Result<ContinuumAmplitudes> {
    let gamma = params.gamma();
    let delta = params.delta();
    if gamma == 0.0 && delta == 0.0 {
        return Err(Error::DegenerateParams);
    }
    let a = params.complex_detuning();
    let t = Complex64::new(delta, 0.0) / a;
    let r = Complex64::new(0.0, -gamma) / a;
    let denom = delta * delta + gamma * gamma;
    Ok(ContinuumAmplitudes {
        t,
        r,
        transmission: delta * delta / denom,
        reflection: gamma * gamma / denom,
    })
}

/// Printed large-n oscillation overlay cos(√(γn/2)) for the forward
/// marginal at resonance (δ = 0). A comparison aid, not a replacement:
/// empirically it tracks the quasi-period of s_{n0} only loosely.
pub fn s_n_forward_asymptotic(params: &ScatterParams, n: usize) -> f64 {
    (params.gamma() * n as f64 / 2.0).sqrt().cos()
}

struct SumContext {
    c: Vec<Complex64>,
    lnf: Vec<f64>,
    ln_q: f64,
    arg_q: f64,
}

impl SumContext {
    fn new(params: &ScatterParams, k_max: usize) -> Result<Self> {
        let rho = params.rho();
        let q = -params.gamma() / (2.0 * rho);
        Ok(Self {
            c: c_coeff_seq(k_max, rho)?,
            lnf: ln_factorial_table(k_max),
            ln_q: q.norm().ln(),
            arg_q: q.arg(),
        })
    }

    fn entry(&self, n: usize, m: usize) -> CoeffValue {
        let mut acc = KahanComplex::new();
        let mut absum = 0.0;
        for p in 0..=n {
            let k = p + m;
            let ln_binom = self.lnf[n] - self.lnf[p] - self.lnf[n - p];
            let mag = (ln_binom + k as f64 * self.ln_q).exp();
            let term = Complex64::from_polar(mag, k as f64 * self.arg_q) * self.c[k];
            acc.add(term);
            absum += term.norm();
        }
        CoeffValue {
            value: acc.value(),
            // per-term relative error budget (ln-space assembly, Bessel
            // normalization, compensated addition) is a few tens of ulps
            abs_err: absum * 64.0 * f64::EPSILON + acc.compensation(),
        }
    }
}

fn exact_limit(params: &ScatterParams, n: usize, m: usize) -> Option<CoeffValue> {
    if params.gamma() == 0.0 {
        let value = if m == 0 { 1.0 } else { 0.0 };
        return Some(CoeffValue {
            value: Complex64::new(value, 0.0),
            abs_err: 0.0,
        });
    }
    if params.gamma() >= LARGE_GAMMA {
        // factorized limit s_nm → t^n r^m, relative correction O((n+m)/|ρ|)
        let amps = continuum_amplitudes(params).expect("gamma > 0 is nondegenerate");
        let value = amps.t.powu(n as u32) * amps.r.powu(m as u32);
        return Some(CoeffValue {
            value,
            abs_err: (n + m + 1) as f64 / params.rho().norm() * value.norm().max(1e-300),
        });
    }
    None
}

/// Single scattering coefficient with error estimate.
pub fn s_nm(params: &ScatterParams, n: usize, m: usize) -> Result<CoeffValue> {
    if let Some(v) = exact_limit(params, n, m) {
        return Ok(v);
    }
    Ok(SumContext::new(params, n + m)?.entry(n, m))
}

/// Marginal coefficients s_n^r = s_{n0} (Forward) or s_n^l = s_{0n}
/// (Backward) for n = 0..=n_max.
pub fn marginal_coeffs(
    params: &ScatterParams,
    channel: Channel,
    n_max: usize,
) -> Result<Vec<CoeffValue>> {
    if params.gamma() == 0.0 || params.gamma() >= LARGE_GAMMA {
        return Ok((0..=n_max)
            .map(|n| {
                let (nn, mm) = match channel {
                    Channel::Forward => (n, 0),
                    Channel::Backward => (0, n),
                };
                exact_limit(params, nn, mm).expect("limit branch")
            })
            .collect());
    }
    let ctx = SumContext::new(params, n_max)?;
    Ok((0..=n_max)
        .map(|n| match channel {
            Channel::Forward => ctx.entry(n, 0),
            // single-term sum: q^m c_m
            Channel::Backward => ctx.entry(0, n),
        })
        .collect())
}

/// Full triangular table via the binomial Bessel sum; c_k computed once per
/// k and shared by every (n, m, p) combination.
pub fn coeff_table(params: &ScatterParams, n_max: usize) -> Result<CoeffTable> {
    let mut entries = Vec::with_capacity((n_max + 1) * (n_max + 2) / 2);
    let mut warnings = Vec::new();
    if params.gamma() == 0.0 || params.gamma() >= LARGE_GAMMA {
        for n in 0..=n_max {
            for m in 0..=n_max - n {
                entries.push(exact_limit(params, n, m).expect("limit branch"));
            }
        }
    } else {
        let ctx = SumContext::new(params, n_max)?;
        for n in 0..=n_max {
            for m in 0..=n_max - n {
                let v = ctx.entry(n, m);
                if v.rel_err() > CONDITIONING_TOL {
                    warnings.push(ConditioningWarning {
                        n,
                        m,
                        rel_err: v.rel_err(),
                    });
                }
                entries.push(v);
            }
        }
    }
    Ok(CoeffTable {
        n_max,
        params: *params,
        route: CoeffRoute::BesselSum,
        entries,
        warnings,
    })
}

/// The same table from one jet evaluation of the kernel: every s_nm is a
/// weighted sum of kernel derivatives at w = 0. Independent of the Bessel
/// machinery end to end; used to cross-check [`coeff_table`].
pub fn coeff_table_via_jets(params: &ScatterParams, n_max: usize) -> Result<CoeffTable> {
    if n_max > 170 {
        return Err(Error::JetOrderTooLarge(n_max));
    }
    let w = Jet::variable(Complex64::new(0.0, 0.0), n_max);
    let d = kernel_d_tilde_jet(params, &w)?;
    let derivs: Vec<Complex64> = (0..=n_max).map(|k| d.derivative(k)).collect();
    let lnf = ln_factorial_table(n_max);
    let mut entries = Vec::with_capacity((n_max + 1) * (n_max + 2) / 2);
    let mut warnings = Vec::new();
    for n in 0..=n_max {
        for m in 0..=n_max - n {
            let mut acc = KahanComplex::new();
            let mut absum = 0.0;
            for p in 0..=n {
                let ln_weight =
                    lnf[n] - lnf[p] - lnf[n - p] + (n - p) as f64 * std::f64::consts::LN_2;
                let term = derivs[p + m] * ln_weight.exp();
                acc.add(term);
                absum += term.norm();
            }
            let scale = 2f64.powi(-((n + m) as i32));
            let v = CoeffValue {
                value: acc.value() * scale,
                abs_err: (absum * 64.0 * f64::EPSILON + acc.compensation()) * scale,
            };
            if v.rel_err() > CONDITIONING_TOL {
                warnings.push(ConditioningWarning {
                    n,
                    m,
                    rel_err: v.rel_err(),
                });
            }
            entries.push(v);
        }
    }
    Ok(CoeffTable {
        n_max,
        params: *params,
        route: CoeffRoute::JetOracle,
        entries,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(gamma: f64, delta: f64) -> ScatterParams {
        ScatterParams::new(gamma, delta).unwrap()
    }

    #[test]
    fn zero_coupling_transmits_everything() {
        let p = params(0.0, 3.0);
        let forward = s_nm(&p, 7, 0).unwrap();
        assert_eq!(forward.value, Complex64::new(1.0, 0.0));
        let backward = s_nm(&p, 0, 4).unwrap();
        assert_eq!(backward.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn matches_frozen_references() {
        // 60-digit reference values computed from two independent routes
        let v = s_nm(&params(2.0, 1.0), 2, 1).unwrap();
        let want = Complex64::new(-0.26748210303446685, -0.03989424961402802);
        assert!((v.value - want).norm() < 1e-13, "got {}", v.value);

        let v = s_nm(&params(5.0, 1.0), 5, 3).unwrap();
        let want = Complex64::new(-0.014080721927066041, -0.0006716710639130616);
        assert!((v.value - want).norm() < 1e-12);

        let v = s_nm(&params(1.0, 0.0), 10, 0).unwrap();
        assert_relative_eq!(v.value.re, -0.7007713122781803, max_relative = 1e-11);
        assert!(v.value.im.abs() < 1e-13);

        let v = s_nm(&params(10.0, 5.0), 0, 7).unwrap();
        let want = Complex64::new(0.000545323488066443, -0.009742911386627044);
        assert!((v.value - want).norm() < 1e-13);
    }

    #[test]
    fn huge_coupling_reflects_with_alternating_phase() {
        let p = params(1e6, 0.0);
        let v = s_nm(&p, 0, 3).unwrap();
        assert!((v.value.norm() - 1.0).abs() < 1e-4);
        assert!((v.value - Complex64::new(-1.0, 0.0)).norm() < 1e-4);
        // forward marginal dies
        let v = s_nm(&p, 2, 0).unwrap();
        assert!(v.value.norm() < 1e-4);
    }

    #[test]
    fn s00_is_one_everywhere() {
        for (g, d) in [(0.5, 0.0), (2.0, 1.0), (10.0, 5.0), (0.0, 0.0), (1e7, 2.0)] {
            let v = s_nm(&params(g, d), 0, 0).unwrap();
            assert!(
                (v.value - Complex64::new(1.0, 0.0)).norm() < 1e-12,
                "gamma={g} delta={d}: {}",
                v.value
            );
        }
    }

    #[test]
    fn continuum_amplitudes_examples() {
        let a = continuum_amplitudes(&params(1.0, 1.0)).unwrap();
        assert_relative_eq!(a.transmission, 0.5, max_relative = 1e-15);
        assert_relative_eq!(a.reflection, 0.5, max_relative = 1e-15);

        let a = continuum_amplitudes(&params(0.0, 2.0)).unwrap();
        assert_eq!(a.transmission, 1.0);
        assert_eq!(a.reflection, 0.0);

        let a = continuum_amplitudes(&params(5.0, 0.0)).unwrap();
        assert_eq!(a.transmission, 0.0);
        assert_eq!(a.reflection, 1.0);
        assert!((a.transmission + a.reflection - 1.0).abs() < 1e-15);

        assert!(matches!(
            continuum_amplitudes(&params(0.0, 0.0)),
            Err(Error::DegenerateParams)
        ));
    }

    #[test]
    fn trivial_table_is_single_unit_entry() {
        let t = coeff_table(&params(0.5, 0.0), 0).unwrap();
        assert_eq!(t.n_max(), 0);
        assert!((t.entry(0, 0).value - Complex64::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn table_agrees_with_single_entry_route() {
        let p = params(2.0, 1.0);
        let t = coeff_table(&p, 10).unwrap();
        for (n, m) in [(0, 0), (3, 2), (10, 0), (0, 10), (4, 6)] {
            let single = s_nm(&p, n, m).unwrap();
            assert!((t.entry(n, m).value - single.value).norm() < 1e-15);
        }
    }

    #[test]
    fn table_satisfies_pascal_recurrence() {
        // s_{n+1,m} = s_{n,m} + s_{n,m+1} follows from the binomial identity
        // C(n+1,p) = C(n,p) + C(n,p−1); a reassociation-independent check of
        // the table assembly.
        let t = coeff_table(&params(3.0, 2.0), 12).unwrap();
        for n in 0..=10 {
            for m in 0..=10 - n {
                let lhs = t.entry(n + 1, m).value;
                let rhs = t.entry(n, m).value + t.entry(n, m + 1).value;
                assert!(
                    (lhs - rhs).norm() < 1e-12,
                    "n={n} m={m}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn jet_route_table_matches_bessel_route() {
        let p = params(2.0, 1.0);
        let bessel = coeff_table(&p, 8).unwrap();
        let jets = coeff_table_via_jets(&p, 8).unwrap();
        assert_eq!(jets.route(), CoeffRoute::JetOracle);
        for (n, m, v) in bessel.iter() {
            let o = jets.entry(n, m).value;
            assert!(
                (v.value - o).norm() <= 1e-10 * v.value.norm().max(1.0),
                "({n},{m}): {} vs {o}",
                v.value
            );
        }
    }

    #[test]
    fn jet_route_rejects_overflowing_orders() {
        assert_eq!(
            coeff_table_via_jets(&params(1.0, 0.0), 171).err(),
            Some(Error::JetOrderTooLarge(171))
        );
    }

    #[test]
    fn backward_marginals_are_single_terms() {
        let p = params(1.5, 0.5);
        let marg = marginal_coeffs(&p, Channel::Backward, 6).unwrap();
        for (m, v) in marg.iter().enumerate() {
            let direct = s_nm(&p, 0, m).unwrap();
            assert!((v.value - direct.value).norm() < 1e-15);
        }
    }

    #[test]
    fn asymptotic_overlay_values() {
        let v = s_n_forward_asymptotic(&params(2.0, 0.0), 2);
        assert_relative_eq!(v, 0.15594369476537447, max_relative = 1e-15);
        assert_eq!(s_n_forward_asymptotic(&params(0.0, 0.0), 17), 1.0);
    }

    #[test]
    fn conditioning_estimate_is_small_on_benign_entries() {
        let v = s_nm(&params(1.0, 1.0), 5, 5).unwrap();
        assert!(v.rel_err() < CONDITIONING_TOL);
    }
}
