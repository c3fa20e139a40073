use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dimensionless pulse-level scattering parameters.
///
/// `gamma` is the emitter-waveguide coupling integrated over the pulse length
/// and `delta` the accumulated detuning between the carrier and the emitter
/// transition. Everything downstream depends on the complex half-detuning
/// rho = (delta + i gamma) / 2, which is exposed as a derived quantity so it
/// can never fall out of sync with the stored fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterParams {
    gamma: f64,
    delta: f64,
}

impl ScatterParams {
    pub fn new(gamma: f64, delta: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::InvalidCoupling(gamma));
        }
        if !delta.is_finite() {
            return Err(Error::InvalidDetuning(delta));
        }
        Ok(Self { gamma, delta })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// rho = (delta + i gamma) / 2.
    pub fn rho(&self) -> Complex64 {
        Complex64::new(self.delta / 2.0, self.gamma / 2.0)
    }

    /// delta + i gamma, the argument of the kernel prefactor exp(i(delta + i gamma)/2).
    pub fn complex_detuning(&self) -> Complex64 {
        Complex64::new(self.delta, self.gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_tracks_fields() {
        let p = ScatterParams::new(2.0, 1.0).unwrap();
        assert_eq!(p.rho(), Complex64::new(0.5, 1.0));
        assert_eq!(p.complex_detuning(), Complex64::new(1.0, 2.0));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(
            ScatterParams::new(-1.0, 0.0),
            Err(Error::InvalidCoupling(-1.0))
        );
        assert!(ScatterParams::new(f64::NAN, 0.0).is_err());
        assert!(ScatterParams::new(1.0, f64::INFINITY).is_err());
        // gamma = 0 with nonzero delta is a valid decoupled configuration
        assert!(ScatterParams::new(0.0, 3.0).is_ok());
    }
}
