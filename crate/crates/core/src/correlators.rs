//! The fermionic two-point function `G_r = <B_i A_{i-r}>`.
//!
//! In the thermodynamic limit
//!
//! ```text
//! G_r = (1/pi) int_0^pi [cos(k(n+1+r)) cos(phi) + cos(k r) sin(phi)] / omega(k) dk
//! ```
//!
//! with `omega(k) = sqrt(1 + cos((n+1)k) sin(2 phi))`. The integrand depends on
//! `k` only through `(n+1)k` apart from the `cos(k r)` factors, so `G_r`
//! vanishes unless `r` is a multiple of `n + 1`. That selection rule is applied
//! analytically: off-lattice entries are stored as exact zeros.
//!
//! Sign convention: the field term enters with `+ sin(phi)`. This is the sign
//! for which `<sigma^z> = -G_0` reproduces exact diagonalization (the
//! spins point down at `phi = pi/2`, where `G_0 = 1`). With `- sin(phi)` the
//! same formula yields `|<sigma^z>| > 1` at large `phi`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::breakpoints;
use crate::params::ModelParams;
use crate::quadrature::{self, QuadratureSpec};

/// Whether `r` survives the selection rule for cluster extension `n`.
pub fn on_lattice(n: usize, r: i64) -> bool {
    r.rem_euclid((n + 1) as i64) == 0
}

fn integrand(params: &ModelParams, r: i64, k: f64) -> f64 {
    let (sp, cp) = params.phi().sin_cos();
    let shifted = (params.stride() as i64 + r) as f64;
    ((k * shifted).cos() * cp + (k * r as f64).cos() * sp) / params.omega(k)
}

/// `G_r` by direct quadrature, without the selection-rule shortcut.
pub fn g_correlator_by_quadrature(
    params: &ModelParams,
    r: i64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    quad.validate(params.n())?;
    let freq = (params.stride() as i64 + r)
        .unsigned_abs()
        .max(r.unsigned_abs()) as usize;
    // Keep a couple of oscillations per starting panel at most.
    let spec = QuadratureSpec {
        panels: quad.panels.max(freq.div_ceil(2)),
        ..*quad
    };
    let cuts = breakpoints(params, quad);
    let v =
        quadrature::integrate(&spec, 0.0, PI, &cuts, |k| integrand(params, r, k)).map_err(|e| {
            Error::Correlator {
                r,
                source: Box::new(e),
            }
        })?;
    Ok(v / PI)
}

/// `G_r(n, phi)` in the thermodynamic limit; exact zero off the `n+1` lattice.
pub fn g_correlator(params: &ModelParams, r: i64, quad: &QuadratureSpec) -> Result<f64> {
    if !on_lattice(params.n(), r) {
        quad.validate(params.n())?;
        return Ok(0.0);
    }
    g_correlator_by_quadrature(params, r, quad)
}

/// Momentum quantization of a finite ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingSector {
    /// `k = 2 pi (l + 1/2) / N`: even fermion parity.
    Antiperiodic,
    /// `k = 2 pi l / N`: odd fermion parity (unpaired `k = 0, pi` modes).
    Periodic,
}

impl RingSector {
    /// Sector holding the spin ground state with an even number of up spins.
    ///
    /// The fermions are the down spins, so their parity follows that of `N`.
    pub fn for_even_up_spins(n_sites: usize) -> Self {
        if n_sites.is_multiple_of(2) {
            RingSector::Antiperiodic
        } else {
            RingSector::Periodic
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TableSource {
    Thermodynamic(QuadratureSpec),
    FiniteRing { n_sites: usize, sector: RingSector },
}

/// Immutable table of `G_r` for `|r| <= max_abs_offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorTable {
    params: ModelParams,
    source: TableSource,
    max_abs_offset: usize,
    values: Vec<f64>,
}

impl CorrelatorTable {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn source(&self) -> &TableSource {
        &self.source
    }

    pub fn max_abs_offset(&self) -> usize {
        self.max_abs_offset
    }

    /// True when off-lattice entries are structural zeros.
    pub fn has_selection_rule(&self) -> bool {
        match self.source {
            TableSource::Thermodynamic(_) => true,
            TableSource::FiniteRing { n_sites, .. } => n_sites % self.params.stride() == 0,
        }
    }

    pub fn get(&self, r: i64) -> Result<f64> {
        let m = self.max_abs_offset as i64;
        if r.abs() > m {
            return Err(Error::MissingOffset {
                r,
                max_abs_offset: m,
            });
        }
        Ok(self.values[(r + m) as usize])
    }

    /// `(r, G_r)` pairs in increasing `r`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let m = self.max_abs_offset as i64;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i as i64 - m, v))
    }
}

/// Tabulate `G_r` for all `|r| <= max_abs_offset`.
pub fn build_table(
    params: &ModelParams,
    max_abs_offset: usize,
    quad: &QuadratureSpec,
) -> Result<CorrelatorTable> {
    quad.validate(params.n())?;
    let m = max_abs_offset as i64;
    let values = (-m..=m)
        .into_par_iter()
        .map(|r| g_correlator(params, r, quad))
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelatorTable {
        params: *params,
        source: TableSource::Thermodynamic(*quad),
        max_abs_offset,
        values,
    })
}

/// `G_r` of the Gaussian ground state on a ring of `n_sites` spins, for
/// `|r| < n_sites`, from the discrete momentum sum in the given sector.
///
/// In the antiperiodic sector this is the exact even-parity ground state of
/// the spin chain; in the periodic sector it fills the unpaired modes without
/// a parity constraint.
pub fn finite_ring_table(
    params: &ModelParams,
    n_sites: usize,
    sector: RingSector,
) -> Result<CorrelatorTable> {
    if n_sites < params.cluster_size() {
        return Err(Error::InvalidParameter(format!(
            "ring of {n_sites} sites is shorter than a cluster of {}",
            params.cluster_size()
        )));
    }
    let shift = match sector {
        RingSector::Antiperiodic => 0.5,
        RingSector::Periodic => 0.0,
    };
    let ks: Vec<f64> = (0..n_sites)
        .map(|l| 2.0 * PI * (l as f64 + shift) / n_sites as f64)
        .collect();
    let mut weights = Vec::with_capacity(n_sites);
    for &k in &ks {
        let w = params.omega(k);
        if w < 1e-13 {
            return Err(Error::Numerical(format!(
                "gapless mode k = {k} on the {n_sites}-site ring: ground state is degenerate"
            )));
        }
        weights.push(1.0 / w);
    }
    let (sp, cp) = params.phi().sin_cos();
    let stride = params.stride() as f64;
    let max = n_sites - 1;
    let m = max as i64;
    let values = (-m..=m)
        .map(|r| {
            let r = r as f64;
            ks.iter()
                .zip(&weights)
                .map(|(&k, &w)| ((k * (stride + r)).cos() * cp + (k * r).cos() * sp) * w)
                .sum::<f64>()
                / n_sites as f64
        })
        .collect();
    Ok(CorrelatorTable {
        params: *params,
        source: TableSource::FiniteRing { n_sites, sector },
        max_abs_offset: max,
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct TableKey {
    n: usize,
    phi: u64,
    j: u64,
    panels: usize,
    nodes: usize,
    split: bool,
    tol: u64,
    max_panels: usize,
}

impl TableKey {
    fn new(p: &ModelParams, q: &QuadratureSpec) -> Self {
        Self {
            n: p.n(),
            phi: p.phi().to_bits(),
            j: p.j_scale().to_bits(),
            panels: q.panels,
            nodes: q.nodes_per_panel,
            split: q.split_at_singularities,
            tol: q.tolerance.to_bits(),
            max_panels: q.max_panels,
        }
    }
}

/// Shares thermodynamic tables between consumers, keyed by parameter values.
///
/// A request for a wider range than cached rebuilds the entry.
#[derive(Debug, Default)]
pub struct TableCache {
    tables: Mutex<HashMap<TableKey, Arc<CorrelatorTable>>>,
}

impl TableCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_build(
        &self,
        params: &ModelParams,
        max_abs_offset: usize,
        quad: &QuadratureSpec,
    ) -> Result<Arc<CorrelatorTable>> {
        let key = TableKey::new(params, quad);
        if let Some(t) = self.tables.lock().expect("cache lock").get(&key) {
            if t.max_abs_offset() >= max_abs_offset {
                return Ok(Arc::clone(t));
            }
        }
        let table = Arc::new(build_table(params, max_abs_offset, quad)?);
        let mut tables = self.tables.lock().expect("cache lock");
        let entry = tables.entry(key).or_insert_with(|| Arc::clone(&table));
        if entry.max_abs_offset() < table.max_abs_offset() {
            *entry = Arc::clone(&table);
        }
        Ok(Arc::clone(entry))
    }

    pub fn len(&self) -> usize {
        self.tables.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
