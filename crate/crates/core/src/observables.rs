//! Spin correlators, cluster correlators and the order parameters.

use std::f64::consts::FRAC_PI_4;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::correlators::{build_table, CorrelatorTable};
use crate::error::{Error, Result};
use crate::params::{ModelParams, PHI_CRITICAL};
use crate::pauli::{cluster_pair, compile, Axis, PauliString};
use crate::quadrature::QuadratureSpec;
use crate::wick::{expectation, structured_determinant};

/// `<sigma^z_j> = -G_0`.
pub fn sigma_z(table: &CorrelatorTable) -> Result<f64> {
    Ok(-table.get(0)?)
}

/// `<sigma^z_j sigma^z_{j+r}> = G_0^2 - G_r G_{-r}`.
pub fn zz(table: &CorrelatorTable, r: i64) -> Result<f64> {
    check_separation(r)?;
    let g0 = table.get(0)?;
    Ok(g0 * g0 - table.get(r)? * table.get(-r)?)
}

fn check_separation(r: i64) -> Result<()> {
    if r <= 0 {
        return Err(Error::InvalidParameter(format!(
            "separation r = {r} must be positive"
        )));
    }
    Ok(())
}

fn toeplitz(table: &CorrelatorTable, r: i64, shift: i64) -> Result<DMatrix<f64>> {
    let n = r as usize;
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = table.get(i as i64 - j as i64 + shift)?;
        }
    }
    Ok(m)
}

/// `<sigma^x_j sigma^x_{j+r}> = det[G_{i-j-1}]_{r x r}`.
pub fn xx(table: &CorrelatorTable, r: i64) -> Result<f64> {
    check_separation(r)?;
    structured_determinant(&toeplitz(table, r, -1)?)
}

/// `<sigma^y_j sigma^y_{j+r}> = det[G_{j-i+1}]_{r x r}`.
pub fn yy(table: &CorrelatorTable, r: i64) -> Result<f64> {
    check_separation(r)?;
    structured_determinant(&toeplitz(table, r, 1)?.transpose())
}

/// Expectation of an arbitrary Hermitian Pauli product.
pub fn pauli_expectation(table: &CorrelatorTable, p: &PauliString) -> Result<f64> {
    expectation(&compile(p), table)
}

/// `<x_j x_{j+r}>` through the compiler and a Pfaffian, for cross-checks.
pub fn xx_pfaffian(table: &CorrelatorTable, r: i64) -> Result<f64> {
    check_separation(r)?;
    pauli_expectation(table, &PauliString::pair(0, Axis::X, r, Axis::X))
}

/// Largest `|G|` offset touched by `<O_j O_{j+r}>`.
pub fn cluster_offset_span(n: usize, r: i64) -> usize {
    r.unsigned_abs() as usize + 2 * (n + 1)
}

/// `<O_j O_{j+r}>` for the cluster operators of [`cluster_pair`].
///
/// Evaluated at two origins; a mismatch means the table is not translation
/// invariant and is reported as a numerical failure.
pub fn cluster_correlator(table: &CorrelatorTable, r: i64) -> Result<f64> {
    check_separation(r)?;
    let n = table.params().n();
    let eval = |j: i64| -> Result<f64> {
        let (sign, s) = cluster_pair(n, j, r);
        Ok(sign * pauli_expectation(table, &s)?)
    };
    let a = eval(0)?;
    let b = eval(n as i64 + 2)?;
    if (a - b).abs() > 1e-10 * a.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "cluster correlator at r = {r} depends on the origin: {a} vs {b}"
        )));
    }
    Ok(a)
}

/// String order for odd `n`, block (nematic) order for even `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    String,
    Block,
}

impl OrderKind {
    pub fn for_n(n: usize) -> Self {
        if n % 2 == 1 {
            OrderKind::String
        } else {
            OrderKind::Block
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            OrderKind::String => "string",
            OrderKind::Block => "block",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderParameterResult {
    pub n: usize,
    pub phi: f64,
    pub kind: OrderKind,
    pub r_max: i64,
    /// `(r, <O_j O_{j+r}>)` in increasing `r`.
    pub samples: Vec<(i64, f64)>,
    /// Square root of the plateau average, clamped to `[0, 1]`.
    pub extrapolated: f64,
    /// Successive plateau samples differ by less than `1e-4`.
    pub converged: bool,
    /// `(1 - tan^2 phi)^((n+1)/8)`; `None` in the paramagnetic phase.
    pub closed_form: Option<f64>,
}

pub const PLATEAU_TOLERANCE: f64 = 1e-4;
const MAX_SAMPLES: i64 = 24;

/// `(1 - tan^2 phi)^((n+1)/8)` for `phi <= pi/4`.
pub fn order_parameter_closed_form(n: usize, phi: f64) -> Option<f64> {
    if phi > PHI_CRITICAL {
        return None;
    }
    let t = phi.tan();
    Some((1.0 - t * t).max(0.0).powf((n + 1) as f64 / 8.0))
}

/// A separation long enough for the correlator to settle: a few correlation
/// lengths in the ordered phase, and far enough in the paramagnet that the
/// square root of the residual is below `1e-3`.
pub fn suggested_r_max(params: &ModelParams) -> i64 {
    let log_t = params.phi().tan().ln().abs();
    let lengths = if params.is_ordered() { 3.0 } else { 16.0 };
    let m = if log_t > 0.0 {
        (lengths / log_t).ceil()
    } else {
        f64::INFINITY
    };
    let m = m.clamp(24.0, 600.0) as i64;
    m * params.stride() as i64
}

/// Sample `<O_j O_{j+r}>` at multiples of `n + 1` up to `r_max` and
/// extrapolate the plateau.
pub fn order_parameter(
    params: &ModelParams,
    r_max: i64,
    quad: &QuadratureSpec,
) -> Result<OrderParameterResult> {
    let stride = params.stride() as i64;
    let m_max = r_max / stride;
    if m_max < 4 {
        return Err(Error::InvalidParameter(format!(
            "r_max = {r_max} gives fewer than 4 separations at multiples of {stride}"
        )));
    }
    let table = build_table(
        params,
        cluster_offset_span(params.n(), m_max * stride),
        quad,
    )?;
    let step = (m_max + MAX_SAMPLES - 1) / MAX_SAMPLES;
    let mut ms: Vec<i64> = (1..=m_max / step).map(|i| i * step).collect();
    if *ms.last().expect("non-empty") != m_max {
        ms.push(m_max);
    }
    let samples = ms
        .par_iter()
        .map(|&m| cluster_correlator(&table, m * stride).map(|v| (m * stride, v)))
        .collect::<Result<Vec<_>>>()?;

    let tail = (samples.len() / 4).max(2);
    let plateau = &samples[samples.len() - tail..];
    let converged = plateau
        .windows(2)
        .all(|w| (w[1].1 - w[0].1).abs() < PLATEAU_TOLERANCE);
    let avg = plateau.iter().map(|s| s.1).sum::<f64>() / plateau.len() as f64;
    let extrapolated = avg.max(0.0).sqrt().min(1.0);
    if !converged {
        log::warn!(
            "order parameter at n = {}, phi = {} not converged by r = {}",
            params.n(),
            params.phi(),
            m_max * stride
        );
    }
    Ok(OrderParameterResult {
        n: params.n(),
        phi: params.phi(),
        kind: OrderKind::for_n(params.n()),
        r_max: m_max * stride,
        samples,
        extrapolated,
        converged,
        closed_form: order_parameter_closed_form(params.n(), params.phi()),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaFit {
    pub n: usize,
    pub grid: Vec<f64>,
    /// `(phi, order parameter)` of the points entering the fit.
    pub points: Vec<(f64, f64)>,
    /// Grid values dropped because the order parameter did not converge.
    pub excluded: Vec<f64>,
    pub beta_hat: f64,
    pub beta_theory: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// `pi/4 - delta` for 8 log-spaced `delta` in `[0.005, 0.04]`.
pub fn default_beta_grid() -> Vec<f64> {
    let (lo, hi) = (0.005f64.ln(), 0.04f64.ln());
    (0..8)
        .map(|i| FRAC_PI_4 - (lo + (hi - lo) * i as f64 / 7.0).exp())
        .collect()
}

/// Ordinary least squares `y = a + b x`; returns `(a, b, R^2)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 {
        sxy * sxy / (sxx * syy)
    } else {
        1.0
    };
    (intercept, slope, r2)
}

/// Fit `log m = log C + beta log(pi/4 - phi)` over `grid`.
pub fn fit_beta(n: usize, grid: &[f64], quad: &QuadratureSpec) -> Result<BetaFit> {
    if let Some(&bad) = grid.iter().find(|&&p| !(0.0..PHI_CRITICAL).contains(&p)) {
        return Err(Error::InvalidParameter(format!(
            "beta grid point {bad} is not in [0, pi/4)"
        )));
    }
    let results = grid
        .iter()
        .map(|&phi| {
            let params = ModelParams::unit(n, phi)?;
            order_parameter(&params, suggested_r_max(&params), quad)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut points = Vec::new();
    let mut excluded = Vec::new();
    for r in &results {
        if r.converged && r.extrapolated > 0.0 {
            points.push((r.phi, r.extrapolated));
        } else {
            excluded.push(r.phi);
        }
    }
    if points.len() < 4 {
        return Err(Error::Numerical(format!(
            "only {} converged order parameters for the beta fit at n = {n}",
            points.len()
        )));
    }
    let x: Vec<f64> = points.iter().map(|p| (PHI_CRITICAL - p.0).ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (intercept, beta_hat, r_squared) = linear_fit(&x, &y);
    Ok(BetaFit {
        n,
        grid: grid.to_vec(),
        points,
        excluded,
        beta_hat,
        beta_theory: (n + 1) as f64 / 8.0,
        intercept,
        r_squared,
    })
}
