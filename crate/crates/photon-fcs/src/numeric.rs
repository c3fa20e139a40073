//! Compensated summation and log-space combinatorics shared across modules.

use num_complex::Complex64;

/// Kahan compensated accumulator.
///
/// The scattering coefficient sums alternate in sign and cancel heavily, so
/// plain summation would add noise on top of the cancellation that is already
/// inherent in the terms. The compensation term also doubles as a cheap
/// summation-error indicator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    err: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.err;
        let t = self.sum + y;
        self.err = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }

    /// Magnitude of the running compensation term.
    pub fn compensation(&self) -> f64 {
        self.err.abs()
    }
}

/// Componentwise Kahan accumulator for complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplex {
    re: KahanSum,
    im: KahanSum,
}

impl KahanComplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    pub fn compensation(&self) -> f64 {
        self.re.compensation().hypot(self.im.compensation())
    }
}

/// ln(n!), accumulated with compensation so the absolute error stays at a few
/// ulps of the result rather than growing linearly with n.
pub fn ln_factorial(n: usize) -> f64 {
    let mut acc = KahanSum::new();
    for k in 2..=n {
        acc.add((k as f64).ln());
    }
    acc.value()
}

/// Table of ln(k!) for k = 0..=n.
pub fn ln_factorial_table(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    let mut acc = KahanSum::new();
    for k in 1..=n {
        acc.add((k as f64).ln());
        out.push(acc.value());
    }
    out
}

/// ln((2n+1)!!) via (2n+1)!! = (2n+1)! / (2^n n!).
pub fn ln_double_factorial_odd(n: usize) -> f64 {
    ln_factorial(2 * n + 1) - (n as f64) * std::f64::consts::LN_2 - ln_factorial(n)
}

/// ln((2n-1)!!) via (2n-1)!! = (2n)! / (2^n n!); returns 0 for n = 0.
pub fn ln_double_factorial_odd_below(n: usize) -> f64 {
    ln_factorial(2 * n) - (n as f64) * std::f64::consts::LN_2 - ln_factorial(n)
}

/// Row n of Pascal's triangle as f64. Exact through n = 52; relative error
/// stays near machine precision well past n = 300.
pub fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = 1.0f64;
    row.push(c);
    for p in 0..n {
        c = c * (n - p) as f64 / (p + 1) as f64;
        row.push(c);
    }
    row
}

/// n! as f64; callers keep n small enough that this stays finite (n <= 170).
pub fn factorial(n: usize) -> f64 {
    let mut acc = 1.0f64;
    for k in 2..=n {
        acc *= k as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_recovers_alternating_sum() {
        // sum_{k=1..10^5} (-1)^k / k converges to -ln 2
        let mut acc = KahanSum::new();
        let n = 100_000;
        for k in 1..=n {
            let term = if k % 2 == 0 { 1.0 } else { -1.0 } / k as f64;
            acc.add(term);
        }
        // tail of the alternating harmonic series is ~ 1/(2n)
        let expected = -std::f64::consts::LN_2 + 1.0 / (2.0 * n as f64);
        assert!((acc.value() - expected).abs() < 1e-10);
    }

    #[test]
    fn ln_factorial_matches_direct_product() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert!((ln_factorial(10) - (3628800.0f64).ln()).abs() < 1e-12);
        let table = ln_factorial_table(20);
        for (k, v) in table.iter().enumerate() {
            assert!((v - ln_factorial(k)).abs() < 1e-13, "k = {k}");
        }
    }

    #[test]
    fn double_factorials() {
        // (2*3+1)!! = 7!! = 105
        assert!((ln_double_factorial_odd(3) - 105f64.ln()).abs() < 1e-12);
        // (2*3-1)!! = 5!! = 15
        assert!((ln_double_factorial_odd_below(3) - 15f64.ln()).abs() < 1e-12);
        assert_eq!(ln_double_factorial_odd_below(0), 0.0);
    }

    #[test]
    fn binomial_rows_are_exact_for_small_n() {
        assert_eq!(binomial_row(4), vec![1.0, 4.0, 6.0, 4.0, 1.0]);
        let row = binomial_row(30);
        assert_eq!(row[15], 155117520.0);
    }

    #[test]
    fn factorial_small_values() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
    }
}
