use std::f64::consts::FRAC_PI_4;

use rayon::prelude::*;

use ncluster::correlators::{build_table, finite_ring_table, CorrelatorTable, RingSector};
use ncluster::ed::{build_and_solve, ed_entropy, ed_expectation, Boundary};
use ncluster::entanglement::{block_entropy, central_charge_fit, concurrence, two_spin_rdm};
use ncluster::model::{d2_energy_scan, energy_density};
use ncluster::observables::{
    cluster_correlator, cluster_offset_span, fit_beta, order_parameter, sigma_z, suggested_r_max,
    xx, yy, zz,
};
use ncluster::pauli::{cluster_pair, Axis, PauliString};
use ncluster::{ModelParams, QuadratureSpec, PHI_CRITICAL};

use crate::csv::{Cell, Table};
use crate::{
    BetaFit, ClusterCorr, Concurrence, Correlators, EnergyScan, Entropy, Failure, OracleCompare,
    OrderParam, QuadArgs,
};

fn quad_spec(q: &QuadArgs, n: usize) -> Result<QuadratureSpec, Failure> {
    let mut spec = QuadratureSpec::for_model(n);
    spec.tolerance = q.tol;
    spec.nodes_per_panel = q.nodes;
    spec.max_panels = q.max_panels;
    if let Some(p) = q.panels {
        spec.panels = p;
    }
    spec.validate(n)
        .map_err(Failure::at(format!("quadrature settings for n={n}")))?;
    Ok(spec)
}

fn echo_quad(q: &QuadArgs) -> String {
    let mut s = format!(
        "--tol {:e} --nodes {} --max-panels {}",
        q.tol, q.nodes, q.max_panels
    );
    if let Some(p) = q.panels {
        s.push_str(&format!(" --panels {p}"));
    }
    s
}

fn params(n: usize, phi: f64) -> Result<ModelParams, Failure> {
    ModelParams::unit(n, phi).map_err(Failure::at(format!("n={n}, phi={phi}")))
}

fn table(
    n: usize,
    phi: f64,
    span: usize,
    quad: &QuadratureSpec,
) -> Result<CorrelatorTable, Failure> {
    build_table(&params(n, phi)?, span, quad).map_err(Failure::at(format!("n={n}, phi={phi}")))
}

pub fn echo_energy_scan(c: &EnergyScan) -> String {
    format!(
        "ncluster energy-scan --n {} --phi {} --h {:e} {}",
        c.n,
        c.phi,
        c.h,
        echo_quad(&c.quad)
    )
}

pub fn energy_scan(c: &EnergyScan) -> Result<String, Failure> {
    let quad = quad_spec(&c.quad, c.n)?;
    let rows = c
        .phi
        .values
        .par_iter()
        .map(|&phi| {
            d2_energy_scan(c.n, &[phi], c.h, &quad)
                .map(|s| s.rows[0])
                .map_err(Failure::at(format!("n={}, phi={phi}, h={}", c.n, c.h)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let noise = 4.0 * quad.tolerance / (c.h * c.h);
    if noise > 1e-3 {
        eprintln!(
            "warning: step h = {:e} amplifies quadrature noise to ~{noise:.1e}",
            c.h
        );
    }
    let mut t = Table::new(&echo_energy_scan(c), &["phi", "d2E"]);
    for (phi, d2) in rows {
        t.row(&[Cell::F(phi), Cell::F(d2)]);
    }
    Ok(t.finish())
}

pub fn echo_correlators(c: &Correlators) -> String {
    format!(
        "ncluster correlators --n {} --phi {} --r {} {}",
        c.n,
        c.phi,
        c.r,
        echo_quad(&c.quad)
    )
}

pub fn correlators(c: &Correlators) -> Result<String, Failure> {
    let quad = quad_spec(&c.quad, c.n)?;
    let span = c.r.values.iter().copied().max().unwrap_or(0) + 1;
    let blocks = c
        .phi
        .values
        .par_iter()
        .map(|&phi| {
            let t = table(c.n, phi, span, &quad)?;
            c.r.values
                .iter()
                .map(|&r| {
                    let r = r as i64;
                    let ctx = format!("n={}, phi={phi}, r={r}", c.n);
                    let at = || Failure::at(ctx.clone());
                    let g = t.get(r).map_err(at())?;
                    let gm = t.get(-r).map_err(at())?;
                    let z = sigma_z(&t).map_err(at())?;
                    let (zzv, x, y) = if r > 0 {
                        (
                            zz(&t, r).map_err(at())?,
                            xx(&t, r).map_err(at())?,
                            yy(&t, r).map_err(at())?,
                        )
                    } else {
                        (1.0, 1.0, 1.0)
                    };
                    Ok([phi, r as f64, g, gm, z, zzv, x, y])
                })
                .collect::<Result<Vec<_>, Failure>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(
        &echo_correlators(c),
        &["phi", "r", "G_r", "G_minus_r", "sigma_z", "zz", "xx", "yy"],
    );
    for row in blocks.into_iter().flatten() {
        let mut cells: Vec<Cell> = row.iter().map(|&v| Cell::F(v)).collect();
        cells[1] = Cell::I(row[1] as i64);
        t.row(&cells);
    }
    Ok(t.finish())
}

pub fn echo_cluster_corr(c: &ClusterCorr) -> String {
    format!(
        "ncluster cluster-corr --n {} --phi {} --r {} {}",
        c.n,
        c.phi,
        c.r,
        echo_quad(&c.quad)
    )
}

pub fn cluster_corr(c: &ClusterCorr) -> Result<String, Failure> {
    let quad = quad_spec(&c.quad, c.n)?;
    if c.r.values.contains(&0) {
        return Err(Failure::usage(
            "cluster correlator separations must be positive",
        ));
    }
    let r_max = *c.r.values.iter().max().expect("non-empty") as i64;
    let blocks = c
        .phi
        .values
        .par_iter()
        .map(|&phi| {
            let t = table(c.n, phi, cluster_offset_span(c.n, r_max), &quad)?;
            c.r.values
                .iter()
                .map(|&r| {
                    cluster_correlator(&t, r as i64)
                        .map(|v| (phi, r, v))
                        .map_err(Failure::at(format!("n={}, phi={phi}, r={r}", c.n)))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&echo_cluster_corr(c), &["phi", "r", "cluster"]);
    for (phi, r, v) in blocks.into_iter().flatten() {
        t.row(&[Cell::F(phi), Cell::I(r as i64), Cell::F(v)]);
    }
    Ok(t.finish())
}

pub fn echo_order_param(c: &OrderParam) -> String {
    let mut s = format!("ncluster order-param --n {} --phi {}", c.n, c.phi);
    if let Some(r) = c.rmax {
        s.push_str(&format!(" --rmax {r}"));
    }
    format!("{s} {}", echo_quad(&c.quad))
}

pub fn order_param(c: &OrderParam) -> Result<String, Failure> {
    let quad = quad_spec(&c.quad, c.n)?;
    let results = c
        .phi
        .values
        .par_iter()
        .map(|&phi| {
            let p = params(c.n, phi)?;
            let r_max = c.rmax.unwrap_or_else(|| suggested_r_max(&p));
            order_parameter(&p, r_max, &quad)
                .map_err(Failure::at(format!("n={}, phi={phi}, rmax={r_max}", c.n)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(
        &echo_order_param(c),
        &[
            "phi",
            "numeric",
            "closed_form",
            "converged",
            "r_max",
            "kind",
        ],
    );
    for r in results {
        if !r.converged {
            eprintln!(
                "warning: n={}, phi={} not converged by r={}",
                r.n, r.phi, r.r_max
            );
        }
        t.row(&[
            Cell::F(r.phi),
            Cell::F(r.extrapolated),
            Cell::F(r.closed_form.unwrap_or(f64::NAN)),
            Cell::B(r.converged),
            Cell::I(r.r_max),
            Cell::S(r.kind.as_str().into()),
        ]);
    }
    Ok(t.finish())
}

pub fn echo_concurrence(c: &Concurrence) -> String {
    let mut s = format!("ncluster concurrence --n {} --phi {}", c.n, c.phi);
    if let Some(r) = &c.r {
        s.push_str(&format!(" --r {r}"));
    }
    format!("{s} {}", echo_quad(&c.quad))
}

pub fn concurrence_cmd(c: &Concurrence) -> Result<String, Failure> {
    let quad = quad_spec(&c.quad, c.n)?;
    let rs: Vec<usize> =
        c.r.as_ref()
            .map(|l| l.values.clone())
            .unwrap_or_else(|| vec![c.n + 1]);
    if rs.contains(&0) {
        return Err(Failure::usage("concurrence separations must be positive"));
    }
    let span = rs.iter().copied().max().expect("non-empty") + 2;
    let blocks = c
        .phi
        .values
        .par_iter()
        .map(|&phi| {
            let t = table(c.n, phi, span, &quad)?;
            rs.iter()
                .map(|&r| {
                    two_spin_rdm(&t, r as i64)
                        .map(|rdm| (phi, r, concurrence(&rdm)))
                        .map_err(Failure::at(format!("n={}, phi={phi}, r={r}", c.n)))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&echo_concurrence(c), &["phi", "r", "concurrence"]);
    for (phi, r, v) in blocks.into_iter().flatten() {
        t.row(&[Cell::F(phi), Cell::I(r as i64), Cell::F(v)]);
    }
    Ok(t.finish())
}

pub fn echo_entropy(c: &Entropy) -> String {
    let mut s = format!("ncluster entropy --n {}", c.n);
    if let Some(phi) = c.phi {
        s.push_str(&format!(" --phi {phi:e}"));
    }
    format!("{s} --m {} {}", c.m, echo_quad(&c.quad))
}

pub fn entropy(c: &Entropy) -> Result<String, Failure> {
    let quad = quad_spec(&c.quad, c.n)?;
    let phi = c.phi.unwrap_or(PHI_CRITICAL);
    if c.m.values.contains(&0) {
        return Err(Failure::usage("block sizes must be positive"));
    }
    let mut t = Table::new(&echo_entropy(c), &["m", "S"]);
    if phi == PHI_CRITICAL && c.m.values.len() >= 6 {
        let fit = central_charge_fit(c.n, &c.m.values, &quad)
            .map_err(Failure::at(format!("n={}, phi={phi}, m={}", c.n, c.m)))?;
        for (&m, &s) in fit.m_range.iter().zip(&fit.entropies) {
            t.row(&[Cell::I(m as i64), Cell::F(s)]);
        }
        t.comment(&format!(
            "fit slope={} intercept={} r_squared={} c_hat={} c_theory={}",
            crate::csv::fmt_g(fit.slope),
            crate::csv::fmt_g(fit.intercept),
            crate::csv::fmt_g(fit.r_squared),
            crate::csv::fmt_g(fit.c_hat),
            crate::csv::fmt_g(fit.c_theory),
        ));
    } else {
        let m_max = *c.m.values.iter().max().expect("non-empty");
        let tb = table(c.n, phi, m_max, &quad)?;
        for &m in &c.m.values {
            let s = block_entropy(&tb, m)
                .map_err(Failure::at(format!("n={}, phi={phi}, m={m}", c.n)))?;
            t.row(&[Cell::I(m as i64), Cell::F(s)]);
        }
    }
    Ok(t.finish())
}

pub fn echo_beta_fit(c: &BetaFit) -> String {
    format!(
        "ncluster beta-fit --n {} --delta-min {:e} --delta-max {:e} --points {} {}",
        c.n,
        c.delta_min,
        c.delta_max,
        c.points,
        echo_quad(&c.quad)
    )
}

pub fn beta_fit(c: &BetaFit) -> Result<String, Failure> {
    if !(c.delta_min > 0.0 && c.delta_min < c.delta_max && c.delta_max < FRAC_PI_4) || c.points < 2
    {
        return Err(Failure::usage(
            "need 0 < delta-min < delta-max < pi/4 and at least 2 points",
        ));
    }
    let (lo, hi) = (c.delta_min.ln(), c.delta_max.ln());
    let grid: Vec<f64> = (0..c.points)
        .map(|i| FRAC_PI_4 - (lo + (hi - lo) * i as f64 / (c.points - 1) as f64).exp())
        .collect();
    let fits =
        c.n.values
            .iter()
            .map(|&n| {
                let quad = quad_spec(&c.quad, n)?;
                fit_beta(n, &grid, &quad).map_err(Failure::at(format!("n={n}, beta fit")))
            })
            .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(
        &echo_beta_fit(c),
        &[
            "n",
            "beta_hat",
            "beta_theory",
            "relative_error",
            "r_squared",
            "points_used",
        ],
    );
    for f in &fits {
        t.row(&[
            Cell::I(f.n as i64),
            Cell::F(f.beta_hat),
            Cell::F(f.beta_theory),
            Cell::F(f.beta_hat / f.beta_theory - 1.0),
            Cell::F(f.r_squared),
            Cell::I(f.points.len() as i64),
        ]);
    }
    for f in fits.iter().filter(|f| !f.excluded.is_empty()) {
        let list: Vec<String> = f.excluded.iter().map(|&p| crate::csv::fmt_g(p)).collect();
        t.comment(&format!(
            "n={} excluded unconverged phi {}",
            f.n,
            list.join(" ")
        ));
    }
    Ok(t.finish())
}

pub fn echo_oracle_compare(c: &OracleCompare) -> String {
    format!(
        "ncluster oracle-compare --n {} --sites {} --phi {} {}",
        c.n,
        c.sites,
        c.phi,
        echo_quad(&c.quad)
    )
}

struct Comparison {
    class: &'static str,
    phi: f64,
    r: i64,
    ed: f64,
    ring: f64,
    thermo: f64,
}

const CLASSES: [&str; 6] = ["energy", "sigma_z", "zz", "xx", "cluster", "entropy"];

pub fn oracle_compare(c: &OracleCompare) -> Result<String, Failure> {
    let quad = quad_spec(&c.quad, c.n)?;
    let n_sites = c.sites;
    let stride = c.n as i64 + 1;
    let r_top = (n_sites as i64 / 2).min(n_sites as i64 - stride);
    if r_top < 1 {
        return Err(Failure::usage(format!(
            "{n_sites} sites are too few for n={}",
            c.n
        )));
    }
    let mut rows = Vec::new();
    for &phi in &c.phi.values {
        let ctx = format!("n={}, phi={phi}, N={n_sites}", c.n);
        let at = || Failure::at(ctx.clone());
        let p = params(c.n, phi)?;
        let state = build_and_solve(n_sites, &p, Boundary::Periodic).map_err(at())?;
        let sector = RingSector::for_even_up_spins(n_sites);
        let ring = finite_ring_table(&p, n_sites, sector).map_err(at())?;
        let thermo = table(c.n, phi, cluster_offset_span(c.n, r_top) + n_sites, &quad)?;
        let mut push = |class, r, ed: f64, f: f64, t: f64| {
            rows.push(Comparison {
                class,
                phi,
                r,
                ed,
                ring: f,
                thermo: t,
            })
        };

        let e_ring =
            ncluster::model::finite_energy_density(&p, n_sites, sector == RingSector::Antiperiodic)
                .map_err(at())?;
        let e_inf = energy_density(&p, &quad).map_err(at())?;
        push("energy", 0, state.energy_per_site(), e_ring, e_inf);

        let z = ed_expectation(&state, &PauliString::single(0, Axis::Z)).map_err(at())?;
        push(
            "sigma_z",
            0,
            z,
            sigma_z(&ring).map_err(at())?,
            sigma_z(&thermo).map_err(at())?,
        );
        for r in 1..=r_top {
            let at = || Failure::at(format!("{ctx}, r={r}"));
            let e =
                ed_expectation(&state, &PauliString::pair(0, Axis::Z, r, Axis::Z)).map_err(at())?;
            push(
                "zz",
                r,
                e,
                zz(&ring, r).map_err(at())?,
                zz(&thermo, r).map_err(at())?,
            );
            let e =
                ed_expectation(&state, &PauliString::pair(0, Axis::X, r, Axis::X)).map_err(at())?;
            push(
                "xx",
                r,
                e,
                xx(&ring, r).map_err(at())?,
                xx(&thermo, r).map_err(at())?,
            );
        }
        let origin = if c.n % 2 == 1 { c.n as i64 } else { 0 };
        for r in (1..=r_top).filter(|r| (r + stride) as usize <= n_sites) {
            let at = || Failure::at(format!("{ctx}, cluster r={r}"));
            let (sign, s) = cluster_pair(c.n, origin, r);
            let e = sign * ed_expectation(&state, &s).map_err(at())?;
            push(
                "cluster",
                r,
                e,
                cluster_correlator(&ring, r).map_err(at())?,
                cluster_correlator(&thermo, r).map_err(at())?,
            );
        }
        for m in 1..=4usize.min(n_sites / 2) {
            let at = || Failure::at(format!("{ctx}, m={m}"));
            let sites: Vec<i64> = (0..m as i64).collect();
            let e = ed_entropy(&state, &sites).map_err(at())?;
            push(
                "entropy",
                m as i64,
                e,
                block_entropy(&ring, m).map_err(at())?,
                block_entropy(&thermo, m).map_err(at())?,
            );
        }
    }
    let mut t = Table::new(
        &echo_oracle_compare(c),
        &["class", "phi", "r", "ed", "fermion_ring", "thermodynamic"],
    );
    for row in &rows {
        t.row(&[
            Cell::S(row.class.into()),
            Cell::F(row.phi),
            Cell::I(row.r),
            Cell::F(row.ed),
            Cell::F(row.ring),
            Cell::F(row.thermo),
        ]);
    }
    for class in CLASSES {
        let (mut d_ring, mut d_thermo) = (0.0f64, 0.0f64);
        for row in rows.iter().filter(|r| r.class == class) {
            d_ring = d_ring.max((row.ed - row.ring).abs());
            d_thermo = d_thermo.max((row.ed - row.thermo).abs());
        }
        t.comment(&format!(
            "max_deviation {class} fermion_ring={} thermodynamic={}",
            crate::csv::fmt_g(d_ring),
            crate::csv::fmt_g(d_thermo)
        ));
    }
    Ok(t.finish())
}
