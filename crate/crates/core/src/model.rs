//! Fermionic mode decomposition, ground-state energy density and the
//! critical-point scan.
//!
//! After the Jordan-Wigner mapping the cluster term couples fermions `n + 1`
//! sites apart, so each pair of momenta `(k, -k)` decouples into a four-level
//! problem whose ground energy is `-2 J sqrt(1 + cos((n+1)k) sin 2phi)`.
//!
//! The energy density is normalized per spin: `-(J/pi) int_0^pi omega(k) dk`.
//! At `phi = pi/2` this is `-J`, the energy per spin of the fully polarized
//! product state; a `2J/pi` prefactor would double it and disagree with exact
//! diagonalization at every angle.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::quadrature::{self, QuadratureSpec};

/// Ground state of one `(k, -k)` mode pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSolution {
    pub k: f64,
    /// Pairing amplitude `J sin((n+1)k) cos(phi)`.
    pub delta: f64,
    /// Diagonal amplitude `J (cos((n+1)k) cos(phi) + sin(phi))`.
    pub epsilon: f64,
    /// `-2 sqrt(epsilon^2 + delta^2)`.
    pub e_ground: f64,
    /// Amplitude of `|1_k, 1_-k>`.
    pub alpha: Complex64,
    /// Amplitude of `|0_k, 0_-k>`.
    pub beta: Complex64,
}

impl ModeSolution {
    /// The 2x2 block of the mode Hamiltonian on `(|1,1>, |0,0>)`.
    pub fn paired_block(&self) -> [[Complex64; 2]; 2] {
        let i = Complex64::i();
        [
            [Complex64::from(2.0 * self.epsilon), 2.0 * i * self.delta],
            [-2.0 * i * self.delta, Complex64::from(-2.0 * self.epsilon)],
        ]
    }
}

pub fn mode_solution(params: &ModelParams, k: f64) -> Result<ModeSolution> {
    if !(k > 0.0 && k <= PI) {
        return Err(Error::InvalidParameter(format!(
            "wave number k = {k} outside (0, pi]"
        )));
    }
    let j = params.j_scale();
    let (sp, cp) = params.phi().sin_cos();
    let (sk, ck) = (params.stride() as f64 * k).sin_cos();
    let delta = j * sk * cp;
    let epsilon = j * (ck * cp + sp);
    let omega = j * params.omega(k);
    let e_ground = -2.0 * omega;

    // Ground eigenvector of [[e, i d], [-i d, -e]] for eigenvalue -omega.
    // Two algebraically equivalent forms; pick the better conditioned one.
    let i = Complex64::i();
    let n1 = delta.hypot(epsilon + omega);
    let n2 = delta.hypot(omega - epsilon);
    let (alpha, beta) = if n1 >= n2 && n1 > 0.0 {
        (-i * (delta / n1), Complex64::from((epsilon + omega) / n1))
    } else if n2 > 0.0 {
        (Complex64::from((omega - epsilon) / n2), i * (delta / n2))
    } else {
        // epsilon = delta = 0: the block vanishes and any state is a ground state.
        (Complex64::from(0.0), Complex64::from(1.0))
    };

    Ok(ModeSolution {
        k,
        delta,
        epsilon,
        e_ground,
        alpha,
        beta,
    })
}

/// Wave numbers in `(0, pi]` where the mode gap closes at `phi = pi/4`.
pub fn critical_modes(n: usize) -> Vec<f64> {
    let stride = (n + 1) as f64;
    (0..)
        .map(|m| (2 * m + 1) as f64 * PI / stride)
        .take_while(|&k| k <= PI * (1.0 + 1e-15))
        .collect()
}

pub(crate) fn breakpoints(params: &ModelParams, quad: &QuadratureSpec) -> Vec<f64> {
    if quad.split_at_singularities {
        critical_modes(params.n())
    } else {
        Vec::new()
    }
}

/// Ground-state energy per spin in the thermodynamic limit.
pub fn energy_density(params: &ModelParams, quad: &QuadratureSpec) -> Result<f64> {
    quad.validate(params.n())?;
    let cuts = breakpoints(params, quad);
    let integral = quadrature::integrate(quad, 0.0, PI, &cuts, |k| params.omega(k))?;
    Ok(-params.j_scale() * integral / PI)
}

/// Ground-state energy per spin of a finite ring of `n_sites` spins, from the
/// discrete momentum sum `(1/N) sum_{k>0} E_k`.
///
/// `antiperiodic` selects `k = 2 pi (l + 1/2) / N` (even fermion parity);
/// otherwise `k = 2 pi l / N`, where the unpaired `k = 0, pi` modes are
/// filled in their single-particle ground state without a parity constraint.
pub fn finite_energy_density(
    params: &ModelParams,
    n_sites: usize,
    antiperiodic: bool,
) -> Result<f64> {
    if n_sites == 0 {
        return Err(Error::InvalidParameter(
            "ring needs at least one site".into(),
        ));
    }
    let shift = if antiperiodic { 0.5 } else { 0.0 };
    let total: f64 = (0..n_sites)
        .map(|l| {
            let k = 2.0 * PI * (l as f64 + shift) / n_sites as f64;
            params.omega(k)
        })
        .sum();
    Ok(-params.j_scale() * total / n_sites as f64)
}

/// Smallest excitation energy `min_k 2 J omega(k) = 2 J |cos(phi) - sin(phi)|`.
///
/// `cos((n+1)k) = -1` is reachable for every `n`, so the minimum is attained
/// analytically. Written as `2 sqrt(2) J |sin(pi/4 - phi)|`, which is exactly
/// zero at the critical angle.
pub fn spectral_gap(params: &ModelParams) -> f64 {
    2.0 * std::f64::consts::SQRT_2 * params.j_scale() * (FRAC_PI_4 - params.phi()).sin().abs()
}

/// Second derivative of the energy density along a grid of angles.
#[derive(Debug, Clone, PartialEq)]
pub struct D2EnergyScan {
    pub n: usize,
    pub step: f64,
    /// `(phi, d^2 E / d phi^2)` in grid order.
    pub rows: Vec<(f64, f64)>,
    /// Set when the finite-difference step amplifies quadrature noise.
    pub noise_warning: Option<String>,
}

impl D2EnergyScan {
    /// Grid point with the largest `|d^2 E / d phi^2|`.
    pub fn peak(&self) -> Option<(f64, f64)> {
        self.rows
            .iter()
            .copied()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
    }
}

/// Central second differences of the energy density (`J = 1`) with step `h`.
pub fn d2_energy_scan(
    n: usize,
    grid: &[f64],
    h: f64,
    quad: &QuadratureSpec,
) -> Result<D2EnergyScan> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty phi grid".into()));
    }
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "finite-difference step h = {h} must be positive"
        )));
    }
    for &phi in grid {
        if phi - h < 0.0 || phi + h > std::f64::consts::FRAC_PI_2 {
            return Err(Error::InvalidParameter(format!(
                "phi = {phi} with step {h} leaves [0, pi/2]"
            )));
        }
    }

    // Quadrature error enters the second difference as ~4 tol / h^2.
    let noise = 4.0 * quad.tolerance / (h * h);
    let noise_warning = (noise > 1e-3).then(|| {
        let msg = format!("step h = {h:e} amplifies quadrature noise to ~{noise:.1e}");
        log::warn!("{msg}");
        msg
    });

    let energy = |phi: f64| energy_density(&ModelParams::unit(n, phi)?, quad);
    let rows = grid
        .iter()
        .map(|&phi| {
            let lo = energy(phi - h)?;
            let mid = energy(phi)?;
            let hi = energy(phi + h)?;
            Ok((phi, (hi - 2.0 * mid + lo) / (h * h)))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(D2EnergyScan {
        n,
        step: h,
        rows,
        noise_warning,
    })
}
