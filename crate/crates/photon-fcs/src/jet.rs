//! Truncated Taylor series ("jet") arithmetic over complex coefficients.
//!
//! A jet of order d carries the coefficients a_0..a_d of a Taylor expansion
//! around a base point. Arithmetic and elementary functions propagate all
//! coefficients exactly (up to round-off), so the k-th derivative of a
//! composite expression is read off as k! * a_k with no step-size tuning.
//! This is what makes the derivative-based route for the scattering
//! coefficients an honest, independent cross-check of the Bessel route.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::factorial;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<Complex64>,
}

impl Jet {
    /// Jet representing the constant `value`.
    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = value;
        Jet { coeffs }
    }

    /// Jet representing the expansion variable itself: value + 1 * dw.
    pub fn variable(value: Complex64, order: usize) -> Self {
        let mut jet = Jet::constant(value, order);
        if order >= 1 {
            jet.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        jet
    }

    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least a constant term");
        Jet { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Taylor coefficient a_k.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// k-th derivative at the base point: k! * a_k. Valid for k <= 170,
    /// far above any jet order used here.
    pub fn derivative(&self, k: usize) -> Complex64 {
        self.coeffs[k] * factorial(k)
    }

    fn check_order(&self, rhs: &Jet) {
        assert_eq!(
            self.order(),
            rhs.order(),
            "jet orders must match: {} vs {}",
            self.order(),
            rhs.order()
        );
    }

    pub fn add(&self, rhs: &Jet) -> Jet {
        self.check_order(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Jet { coeffs }
    }

    pub fn sub(&self, rhs: &Jet) -> Jet {
        self.check_order(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Jet { coeffs }
    }

    /// Truncated Cauchy product.
    #[allow(clippy::needless_range_loop)]
    pub fn mul(&self, rhs: &Jet) -> Jet {
        self.check_order(rhs);
        let d = self.order();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
        for k in 0..=d {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=k {
                acc += self.coeffs[j] * rhs.coeffs[k - j];
            }
            coeffs[k] = acc;
        }
        Jet { coeffs }
    }

    pub fn scale(&self, s: Complex64) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    /// exp of a jet: e_0 = exp(a_0), e_k = (1/k) sum_{j=1..k} j a_j e_{k-j}.
    pub fn exp(&self) -> Jet {
        let d = self.order();
        let mut e = vec![Complex64::new(0.0, 0.0); d + 1];
        e[0] = self.coeffs[0].exp();
        for k in 1..=d {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += (j as f64) * self.coeffs[j] * e[k - j];
            }
            e[k] = acc / (k as f64);
        }
        Jet { coeffs: e }
    }

    /// sin and cos share one recurrence, so compute them together:
    /// s_k = (1/k) sum j a_j c_{k-j}, c_k = -(1/k) sum j a_j s_{k-j}.
    pub fn sin_cos(&self) -> (Jet, Jet) {
        let d = self.order();
        let mut s = vec![Complex64::new(0.0, 0.0); d + 1];
        let mut c = vec![Complex64::new(0.0, 0.0); d + 1];
        s[0] = self.coeffs[0].sin();
        c[0] = self.coeffs[0].cos();
        for k in 1..=d {
            let mut acc_s = Complex64::new(0.0, 0.0);
            let mut acc_c = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                let ja = (j as f64) * self.coeffs[j];
                acc_s += ja * c[k - j];
                acc_c += ja * s[k - j];
            }
            s[k] = acc_s / (k as f64);
            c[k] = -acc_c / (k as f64);
        }
        (Jet { coeffs: s }, Jet { coeffs: c })
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    /// Principal square root; the constant term must not vanish since the
    /// recurrence divides by 2 sqrt(a_0).
    pub fn sqrt(&self) -> Result<Jet> {
        if self.coeffs[0] == Complex64::new(0.0, 0.0) {
            return Err(Error::JetBranchPoint("sqrt"));
        }
        let d = self.order();
        let mut r = vec![Complex64::new(0.0, 0.0); d + 1];
        r[0] = self.coeffs[0].sqrt();
        let two_r0 = 2.0 * r[0];
        for k in 1..=d {
            let mut acc = self.coeffs[k];
            for j in 1..k {
                acc -= r[j] * r[k - j];
            }
            r[k] = acc / two_r0;
        }
        Ok(Jet { coeffs: r })
    }

    /// Reciprocal; the constant term must not vanish.
    pub fn recip(&self) -> Result<Jet> {
        if self.coeffs[0] == Complex64::new(0.0, 0.0) {
            return Err(Error::JetBranchPoint("reciprocal"));
        }
        let d = self.order();
        let mut b = vec![Complex64::new(0.0, 0.0); d + 1];
        b[0] = Complex64::new(1.0, 0.0) / self.coeffs[0];
        for k in 1..=d {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * b[k - j];
            }
            b[k] = -acc / self.coeffs[0];
        }
        Ok(Jet { coeffs: b })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exp_of_variable_gives_factorial_coefficients() {
        // exp around 0 to order 3: coefficients (1, 1, 1/2, 1/6)
        let w = Jet::variable(c(0.0, 0.0), 3);
        let e = w.exp();
        let expected = [1.0, 1.0, 0.5, 1.0 / 6.0];
        for (k, want) in expected.iter().enumerate() {
            assert_relative_eq!(e.coeff(k).re, want, max_relative = 1e-14);
            assert_eq!(e.coeff(k).im, 0.0);
        }
    }

    #[test]
    fn sqrt_of_constant_four() {
        let j = Jet::from_coeffs(vec![c(4.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let r = j.sqrt().unwrap();
        assert_eq!(r.coeff(0), c(2.0, 0.0));
        assert_eq!(r.coeff(1), c(0.0, 0.0));
        assert_eq!(r.coeff(2), c(0.0, 0.0));
    }

    #[test]
    fn reciprocal_of_one_minus_w_is_geometric() {
        let j = Jet::from_coeffs(vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]);
        let r = j.recip().unwrap();
        for k in 0..=2 {
            assert_relative_eq!(r.coeff(k).re, 1.0, max_relative = 1e-14);
            assert_eq!(r.coeff(k).im, 0.0);
        }
    }

    #[test]
    fn branch_point_errors() {
        let zero = Jet::variable(c(0.0, 0.0), 2);
        assert_eq!(zero.sqrt(), Err(Error::JetBranchPoint("sqrt")));
        assert_eq!(zero.recip(), Err(Error::JetBranchPoint("reciprocal")));
    }

    #[test]
    fn derivative_applies_k_factorial() {
        // f(w) = w^2 seeded as variable * variable
        let w = Jet::variable(c(0.0, 0.0), 4);
        let f = w.mul(&w);
        assert_eq!(f.derivative(2), c(2.0, 0.0));
        assert_eq!(f.derivative(0), c(0.0, 0.0));
        assert_eq!(f.derivative(3), c(0.0, 0.0));
    }

    #[test]
    fn sin_cos_pythagorean_identity_as_jets() {
        let w = Jet::variable(c(0.4, 0.2), 6);
        let (s, co) = w.sin_cos();
        let ident = s.mul(&s).add(&co.mul(&co));
        assert_relative_eq!(ident.coeff(0).re, 1.0, max_relative = 1e-14);
        for k in 1..=6 {
            assert!(ident.coeff(k).norm() < 1e-14, "k = {k}");
        }
    }

    #[test]
    fn sqrt_squares_back() {
        let j = Jet::from_coeffs(vec![c(2.0, 1.0), c(0.5, -0.3), c(0.1, 0.0), c(0.0, 0.2)]);
        let r = j.sqrt().unwrap();
        let back = r.mul(&r);
        for k in 0..=3 {
            assert!((back.coeff(k) - j.coeff(k)).norm() < 1e-13);
        }
    }
}
