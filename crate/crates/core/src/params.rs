use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::error::{Error, Result};

/// Critical interaction angle, independent of the cluster extension.
pub const PHI_CRITICAL: f64 = FRAC_PI_4;

/// One Hamiltonian instance
/// `H = -J cos(phi) sum_j x_j z_{j+1} .. z_{j+n} x_{j+n+1} + J sin(phi) sum_j z_j`.
///
/// `n` counts the sigma-z factors between the two sigma-x endpoints, so a
/// cluster spans `n + 2` spins. `n = 0` is the transverse-field Ising chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n: usize,
    phi: f64,
    j_scale: f64,
}

impl ModelParams {
    pub fn new(n: usize, phi: f64, j_scale: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&phi) {
            return Err(Error::InvalidParameter(format!(
                "phi = {phi} must lie in [0, pi/2]"
            )));
        }
        if !(j_scale > 0.0 && j_scale.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "J = {j_scale} must be positive and finite"
            )));
        }
        Ok(Self { n, phi, j_scale })
    }

    /// Parameters with `J = 1`.
    pub fn unit(n: usize, phi: f64) -> Result<Self> {
        Self::new(n, phi, 1.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn j_scale(&self) -> f64 {
        self.j_scale
    }

    /// Fermionic hopping distance `n + 1`; also the period of the selection rule.
    pub fn stride(&self) -> usize {
        self.n + 1
    }

    pub fn cluster_size(&self) -> usize {
        self.n + 2
    }

    pub fn is_ordered(&self) -> bool {
        self.phi < PHI_CRITICAL
    }

    /// Dimensionless mode frequency `sqrt(1 + cos((n+1)k) sin(2 phi))`.
    ///
    /// Evaluated as `sqrt((cos phi - sin phi)^2 + 2 sin(2 phi) cos^2((n+1)k/2))`,
    /// which has no cancellation near the gapless points.
    pub fn omega(&self, k: f64) -> f64 {
        let (s, c) = self.phi.sin_cos();
        let gap = c - s;
        let half = (0.5 * (self.stride() as f64) * k).cos();
        (gap * gap + 2.0 * (2.0 * self.phi).sin() * half * half).sqrt()
    }
}
