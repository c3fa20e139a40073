//! Photon-number statistics for a coherent pulse: channel and joint
//! distributions, the generating function F(λ_r, λ_l), and moment/cumulant
//! extraction.
//!
//! The counted quantity is the photon number in the forward or backward
//! copy of the pulse mode. For n ≥ 1 the probabilities are the Poissonian
//! input weights deformed by the scattering coefficients,
//! p(n) = p_α(n)|s_n|²; the n = 0 entry is fixed by normalization
//! (F at λ = 0 is exactly 1), because scattering also moves photons into
//! modes that are never counted. Both zero-count conventions — the raw
//! p_α(0)|s_0|² product and the normalization-completing bucket — are kept
//! so downstream consumers can pick either.

use num_complex::Complex64;

use crate::coeffs::{coeff_table, marginal_coeffs, Channel, CoeffValue};
use crate::error::{Error, Result};
use crate::numeric::{ln_factorial_table, KahanComplex, KahanSum};
use crate::params::ScatterParams;

/// Truncation policy for the photon-number index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Poisson tail bound plus a fixed 25-term safety margin.
    Auto,
    /// Explicit cap, overriding the automatic choice.
    Fixed(usize),
}

/// n_max = ceil(N̄ + 10 √N̄ + 25): ten standard deviations past the mean
/// leave a Poisson tail below 1e−20 for any N̄, and the additive margin
/// covers the small-N̄ regime where √N̄ is no cushion at all.
pub fn auto_n_max(nbar: f64) -> usize {
    (nbar + 10.0 * nbar.sqrt() + 25.0).ceil() as usize
}

impl Truncation {
    fn resolve(self, nbar: f64) -> usize {
        match self {
            Truncation::Auto => auto_n_max(nbar),
            Truncation::Fixed(n) => n,
        }
    }
}

/// Which counting channel a distribution describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionChannel {
    Forward,
    Backward,
    /// Derived by summing rows or columns of a joint distribution.
    JointMarginal,
}

impl From<Channel> for DistributionChannel {
    fn from(ch: Channel) -> Self {
        match ch {
            Channel::Forward => DistributionChannel::Forward,
            Channel::Backward => DistributionChannel::Backward,
        }
    }
}

/// Poissonian weight e^{−N̄} N̄^n / n!, evaluated in log space so extreme
/// inputs land on subnormals instead of spurious zeros or infinities.
pub fn poisson_weight(nbar: f64, n: usize) -> f64 {
    if nbar == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if n == 0 {
        return (-nbar).exp();
    }
    let lnf = crate::numeric::ln_factorial(n);
    (-nbar + n as f64 * nbar.ln() - lnf).exp()
}

pub(crate) fn check_nbar(nbar: f64) -> Result<()> {
    if !nbar.is_finite() || nbar < 0.0 {
        return Err(Error::InvalidMeanPhotonNumber(nbar));
    }
    Ok(())
}

/// Probability distribution of the photon count in one channel.
#[derive(Debug, Clone)]
pub struct CountDistribution {
    /// p(n) for n = 0..=n_max; index 0 holds the normalization bucket.
    pub probs: Vec<f64>,
    pub channel: DistributionChannel,
    /// The n = 0 mass defined by 1 − Σ_{n≥1} p(n); identical to probs[0].
    pub zero_bucket_mass: f64,
    /// The literal n = 0 product p_α(0)|s_0|², which ignores leakage out of
    /// the counted mode. Exported alongside the bucket, never mixed with it.
    pub raw_zero_product: f64,
    /// |1 − Σ probs|; a few ulps by construction, recorded for audits.
    pub norm_defect: f64,
    /// Probability-weighted absolute error propagated from the coefficient
    /// sums; large values mean the underlying s_n were ill-conditioned.
    pub conditioning_estimate: f64,
}

impl CountDistribution {
    pub(crate) fn from_weighted(
        weights: Vec<f64>,
        raw_zero: f64,
        channel: DistributionChannel,
        conditioning: f64,
    ) -> Result<Self> {
        let mut probs = weights;
        let mut tail = KahanSum::new();
        for &p in probs.iter().skip(1) {
            tail.add(p);
        }
        let bucket = 1.0 - tail.value();
        if bucket < -1e-9 {
            return Err(Error::NegativeProbability {
                index: 0,
                value: bucket,
            });
        }
        probs[0] = bucket;
        let mut total = KahanSum::new();
        for &p in probs.iter() {
            total.add(p);
        }
        Ok(CountDistribution {
            zero_bucket_mass: bucket,
            raw_zero_product: raw_zero,
            norm_defect: (1.0 - total.value()).abs(),
            conditioning_estimate: conditioning,
            probs,
            channel,
        })
    }

    pub fn n_max(&self) -> usize {
        self.probs.len() - 1
    }

    /// Mean count Σ n p(n).
    pub fn mean(&self) -> f64 {
        let mut acc = KahanSum::new();
        for (n, &p) in self.probs.iter().enumerate() {
            acc.add(n as f64 * p);
        }
        acc.value()
    }
}

/// p(n) = p_α(n)|s_n|² for n ≥ 1 with the zero bucket completing the norm.
pub fn channel_distribution(
    params: &ScatterParams,
    nbar: f64,
    channel: Channel,
    trunc: Truncation,
) -> Result<CountDistribution> {
    check_nbar(nbar)?;
    let n_max = trunc.resolve(nbar);
    let coeffs = marginal_coeffs(params, channel, n_max)?;
    let mut weights = Vec::with_capacity(n_max + 1);
    let mut conditioning = 0.0;
    for (n, cv) in coeffs.iter().enumerate() {
        let pw = poisson_weight(nbar, n);
        let s_abs = cv.value.norm();
        weights.push(pw * s_abs * s_abs);
        conditioning += pw * (2.0 * s_abs * cv.abs_err + cv.abs_err * cv.abs_err);
    }
    let raw_zero = weights[0];
    CountDistribution::from_weighted(weights, raw_zero, channel.into(), conditioning)
}

/// Precomputed weights of the generating function:
/// A_n = p_α(n)|s_{n0}|², B_m = p_α(m)|s_{0m}|², and the cross weights
/// C_nm = e^{−N̄} N̄^{n+m}/(n! m!) |s_nm|² with the e^{N̄} prefactor of the
/// double sum absorbed analytically. C cells are assembled in log space:
/// the combined weight may reach e^{N̄} while |s_nm|² underflows, and only
/// their product is a probability.
#[derive(Clone)]
struct Weights {
    n_max: usize,
    nbar: f64,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    conditioning: f64,
}

impl std::fmt::Debug for Weights {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Weights")
            .field("n_max", &self.n_max)
            .field("nbar", &self.nbar)
            .finish_non_exhaustive()
    }
}

impl Weights {
    fn c_at(&self, n: usize, m: usize) -> f64 {
        debug_assert!((1..=self.n_max).contains(&n) && (1..=self.n_max).contains(&m));
        self.c[(n - 1) * self.n_max + (m - 1)]
    }
}

fn build_weights(params: &ScatterParams, nbar: f64, n_max: usize) -> Result<Weights> {
    let table = coeff_table(params, 2 * n_max)?;
    let lnf = ln_factorial_table(n_max);
    let ln_nbar = if nbar > 0.0 { nbar.ln() } else { f64::NEG_INFINITY };
    let mut conditioning = 0.0;

    let marginal = |pick: &dyn Fn(usize) -> CoeffValue, cond: &mut f64| -> Vec<f64> {
        (0..=n_max)
            .map(|n| {
                let cv = pick(n);
                let pw = poisson_weight(nbar, n);
                let s_abs = cv.value.norm();
                *cond += pw * (2.0 * s_abs * cv.abs_err + cv.abs_err * cv.abs_err);
                pw * s_abs * s_abs
            })
            .collect()
    };
    let a = marginal(&|n| table.entry(n, 0), &mut conditioning);
    let b = marginal(&|m| table.entry(0, m), &mut conditioning);

    let mut c = vec![0.0; n_max * n_max];
    if nbar > 0.0 {
        for n in 1..=n_max {
            for m in 1..=n_max {
                let cv = table.entry(n, m);
                let ln_w = -nbar + (n + m) as f64 * ln_nbar - lnf[n] - lnf[m];
                let ln_s = cv.value.norm().ln();
                c[(n - 1) * n_max + (m - 1)] = (ln_w + 2.0 * ln_s).exp();
                conditioning += 2.0 * (ln_w + ln_s).exp() * cv.abs_err
                    + (ln_w + 2.0 * cv.abs_err.ln()).exp();
            }
        }
    }
    Ok(Weights {
        n_max,
        nbar,
        a,
        b,
        c,
        conditioning,
    })
}

/// Joint counting weights q(n, m): the coefficients of z_r^n z_l^m in the
/// generating function F.
///
/// Interior cells (n, m ≥ 1) are the cross weights C_nm and are always
/// nonnegative. The edge cells q(n, 0) and q(0, m) complete the expansion
/// and **can be legitimately negative** at finite pulse length: the two
/// counted wave-packet modes do not span the scattered state, so F is not
/// the generating function of a classical joint distribution, and its edge
/// coefficients are quasiprobability weights. Exact identities that do
/// hold, and are enforced here: row/column sums reproduce the channel
/// marginals, the zero cell q(0,0) = F(z_r=0, z_l=0) is a true probability
/// (an expectation of a product of projectors), and the whole table sums
/// to 1 with truncation errors cancelling between edges and interior.
#[derive(Debug, Clone)]
pub struct JointDistribution {
    n_max: usize,
    nbar: f64,
    params: ScatterParams,
    zero_zero: f64,
    forward_only: Vec<f64>,
    backward_only: Vec<f64>,
    inner: Vec<f64>,
    conditioning_estimate: f64,
}

#[allow(clippy::needless_range_loop)]
pub fn joint_distribution(
    params: &ScatterParams,
    nbar: f64,
    trunc: Truncation,
) -> Result<JointDistribution> {
    check_nbar(nbar)?;
    let n_max = trunc.resolve(nbar);
    let w = build_weights(params, nbar, n_max)?;

    let mut row_sums = vec![0.0; n_max + 1];
    let mut col_sums = vec![0.0; n_max + 1];
    for n in 1..=n_max {
        let mut row = KahanSum::new();
        for m in 1..=n_max {
            row.add(w.c_at(n, m));
        }
        row_sums[n] = row.value();
    }
    for m in 1..=n_max {
        let mut col = KahanSum::new();
        for n in 1..=n_max {
            col.add(w.c_at(n, m));
        }
        col_sums[m] = col.value();
    }

    let mut forward_only = vec![0.0; n_max + 1];
    let mut backward_only = vec![0.0; n_max + 1];
    for n in 1..=n_max {
        forward_only[n] = w.a[n] - row_sums[n];
    }
    for m in 1..=n_max {
        backward_only[m] = w.b[m] - col_sums[m];
    }

    let mut zero = KahanSum::new();
    zero.add(1.0);
    for n in 1..=n_max {
        zero.add(-w.a[n]);
    }
    for m in 1..=n_max {
        zero.add(-w.b[m]);
    }
    for n in 1..=n_max {
        zero.add(row_sums[n]);
    }
    // F(z_r=0, z_l=0) is a genuine probability; a materially negative value
    // here means the coefficient sums degraded, not the formula.
    let zero_zero = zero.value();
    if zero_zero < -1e-9 {
        return Err(Error::NegativeProbability {
            index: 0,
            value: zero_zero,
        });
    }

    Ok(JointDistribution {
        n_max,
        nbar,
        params: *params,
        zero_zero,
        forward_only,
        backward_only,
        inner: w.c,
        conditioning_estimate: w.conditioning,
    })
}

impl JointDistribution {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    pub fn params(&self) -> &ScatterParams {
        &self.params
    }

    pub fn conditioning_estimate(&self) -> f64 {
        self.conditioning_estimate
    }

    /// Cell probability; n and m must both be ≤ n_max.
    pub fn q(&self, n: usize, m: usize) -> f64 {
        assert!(
            n <= self.n_max && m <= self.n_max,
            "cell ({n},{m}) outside joint table of extent {}",
            self.n_max
        );
        match (n, m) {
            (0, 0) => self.zero_zero,
            (n, 0) => self.forward_only[n],
            (0, m) => self.backward_only[m],
            (n, m) => self.inner[(n - 1) * self.n_max + (m - 1)],
        }
    }

    /// Σ over every cell; 1 up to round-off by construction.
    pub fn total_mass(&self) -> f64 {
        let mut acc = KahanSum::new();
        for n in 0..=self.n_max {
            for m in 0..=self.n_max {
                acc.add(self.q(n, m));
            }
        }
        acc.value()
    }

    /// The most negative cell. Interior cells are nonnegative by
    /// construction; a negative result is always an edge quasiprobability.
    pub fn min_cell(&self) -> (usize, usize, f64) {
        let mut best = (0, 0, self.zero_zero);
        for n in 0..=self.n_max {
            for m in 0..=self.n_max {
                let v = self.q(n, m);
                if v < best.2 {
                    best = (n, m, v);
                }
            }
        }
        best
    }

    fn marginal(&self, rows: bool) -> CountDistribution {
        let mut probs = vec![0.0; self.n_max + 1];
        for (k, slot) in probs.iter_mut().enumerate() {
            let mut acc = KahanSum::new();
            for j in 0..=self.n_max {
                acc.add(if rows { self.q(k, j) } else { self.q(j, k) });
            }
            *slot = acc.value();
        }
        let mut total = KahanSum::new();
        for &p in probs.iter() {
            total.add(p);
        }
        let zero = probs[0];
        CountDistribution {
            zero_bucket_mass: zero,
            raw_zero_product: poisson_weight(self.nbar, 0),
            norm_defect: (1.0 - total.value()).abs(),
            conditioning_estimate: self.conditioning_estimate,
            probs,
            channel: DistributionChannel::JointMarginal,
        }
    }

    /// Row sums: the forward (transmitted) count distribution.
    pub fn forward_marginal(&self) -> CountDistribution {
        self.marginal(true)
    }

    /// Column sums: the backward (reflected) count distribution.
    pub fn backward_marginal(&self) -> CountDistribution {
        self.marginal(false)
    }
}

/// The generating function F(λ_r, λ_l) with its weights precomputed, so
/// repeated evaluations (Fourier inversion, finite differences) cost one
/// pass over the weight arrays each.
#[derive(Debug, Clone)]
pub struct CharacteristicFunction {
    w: Weights,
}

impl CharacteristicFunction {
    pub fn new(params: &ScatterParams, nbar: f64, trunc: Truncation) -> Result<Self> {
        check_nbar(nbar)?;
        let n_max = trunc.resolve(nbar);
        Ok(CharacteristicFunction {
            w: build_weights(params, nbar, n_max)?,
        })
    }

    pub fn n_max(&self) -> usize {
        self.w.n_max
    }

    /// F(λ_r, λ_l) = 1 + Σ(z_r^n−1)A_n + Σ(z_l^m−1)B_m
    ///             + ΣΣ(z_r^n−1)(z_l^m−1)C_nm with z = e^{iλ}.
    ///
    /// At λ = 0 every factor (z^n − 1) is exactly zero, so F(0,0) = 1 with
    /// no round-off at all.
    pub fn eval(&self, lambda_r: f64, lambda_l: f64) -> Complex64 {
        let zr = |n: usize| Complex64::from_polar(1.0, lambda_r * n as f64);
        let zl = |m: usize| Complex64::from_polar(1.0, lambda_l * m as f64);
        self.eval_with(&zr, &zl)
    }

    /// F with real fugacities z ∈ [−1, 1] substituted for e^{iλ}; the same
    /// series, reinterpreted as a probability-generating function.
    pub fn eval_real(&self, z_r: f64, z_l: f64) -> Complex64 {
        let zr = |n: usize| Complex64::new(z_r.powi(n as i32), 0.0);
        let zl = |m: usize| Complex64::new(z_l.powi(m as i32), 0.0);
        self.eval_with(&zr, &zl)
    }

    #[allow(clippy::needless_range_loop)]
    fn eval_with(
        &self,
        zr: &dyn Fn(usize) -> Complex64,
        zl: &dyn Fn(usize) -> Complex64,
    ) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let n_max = self.w.n_max;
        let zr_m1: Vec<Complex64> = (0..=n_max).map(|n| zr(n) - one).collect();
        let zl_m1: Vec<Complex64> = (0..=n_max).map(|m| zl(m) - one).collect();
        let mut acc = KahanComplex::new();
        for n in 1..=n_max {
            acc.add(zr_m1[n] * self.w.a[n]);
        }
        for m in 1..=n_max {
            acc.add(zl_m1[m] * self.w.b[m]);
        }
        for n in 1..=n_max {
            let mut row = KahanComplex::new();
            for m in 1..=n_max {
                row.add(zl_m1[m] * self.w.c_at(n, m));
            }
            acc.add(zr_m1[n] * row.value());
        }
        one + acc.value()
    }
}

/// One-shot evaluation of F; build a [`CharacteristicFunction`] instead
/// when sweeping λ.
pub fn evaluate_f(
    params: &ScatterParams,
    nbar: f64,
    lambda_r: f64,
    lambda_l: f64,
) -> Result<Complex64> {
    Ok(CharacteristicFunction::new(params, nbar, Truncation::Auto)?.eval(lambda_r, lambda_l))
}

/// Summary statistics of a count distribution.
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub mean: f64,
    pub variance: f64,
    /// variance/mean; None when the mean is numerically zero.
    pub fano: Option<f64>,
    /// Fano factor − 1: positive for super-Poissonian statistics.
    pub mandel_q: Option<f64>,
    /// κ₁..κ₄ from the standard moment-to-cumulant conversion.
    pub cumulants: [f64; 4],
}

/// Moments by direct summation over the distribution — exact at truncation
/// level, unlike differentiating ln F, which trades accuracy for each order.
pub fn moments(dist: &CountDistribution) -> MomentReport {
    let mut raw = [KahanSum::new(); 4];
    for (n, &p) in dist.probs.iter().enumerate() {
        let x = n as f64;
        let mut pw = x;
        for acc in raw.iter_mut() {
            acc.add(pw * p);
            pw *= x;
        }
    }
    let m1 = raw[0].value();
    let m2 = raw[1].value();
    let m3 = raw[2].value();
    let m4 = raw[3].value();
    let k1 = m1;
    let k2 = m2 - m1 * m1;
    let k3 = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
    let k4 = m4 - 4.0 * m1 * m3 - 3.0 * m2 * m2 + 12.0 * m1 * m1 * m2
        - 6.0 * m1 * m1 * m1 * m1;
    let variance = k2.max(0.0);
    let (fano, mandel_q) = if m1 < 1e-14 {
        (None, None)
    } else {
        let f = variance / m1;
        (Some(f), Some(f - 1.0))
    };
    MomentReport {
        mean: m1,
        variance,
        fano,
        mandel_q,
        cumulants: [k1, k2, k3, k4],
    }
}
