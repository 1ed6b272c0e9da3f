//! Exact diagonalization of short chains, used as an independent oracle.
//!
//! Basis states are bit strings with bit `j` set when spin `j` points up
//! (`sigma^z_j = +1`). The Hamiltonian conserves `prod_j sigma^z_j`, and the
//! ground state returned is the lowest state with an even number of up
//! spins. That sector has antiperiodic fermion momenta for even `N` and
//! periodic ones for odd `N` ([`RingSector::for_even_up_spins`]). The
//! Hamiltonian is real, so amplitudes are real.
//!
//! [`RingSector::for_even_up_spins`]: crate::correlators::RingSector::for_even_up_spins

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::pauli::{Axis, PauliString};

pub const MAX_SITES: usize = 16;
const DENSE_SITES: usize = 10;
const DEGENERACY_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    Open,
}

#[derive(Debug, Clone)]
pub struct EdGroundState {
    pub n_sites: usize,
    pub params: ModelParams,
    pub boundary: Boundary,
    /// Lowest energy with an even number of up spins.
    pub energy: f64,
    /// Lowest energy with an odd number of up spins.
    pub odd_sector_energy: f64,
    /// Length `2^N`, unit norm, zero outside the even sector.
    pub amplitudes: Vec<f64>,
    /// The two parity sectors have ground energies within `1e-9`.
    pub degenerate: bool,
    /// `|H v - E v|` of the returned state.
    pub residual: f64,
}

impl EdGroundState {
    pub fn energy_per_site(&self) -> f64 {
        self.energy / self.n_sites as f64
    }

    pub fn ground_energy(&self) -> f64 {
        self.energy.min(self.odd_sector_energy)
    }
}

struct SectorMatrix {
    states: Vec<usize>,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SectorMatrix {
    fn dim(&self) -> usize {
        self.states.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (row, out) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *out = acc;
        }
    }

    fn dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for row in 0..n {
            for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                m[(row, self.cols[k])] += self.vals[k];
            }
        }
        m
    }
}

fn build_sector(
    n_sites: usize,
    params: &ModelParams,
    boundary: Boundary,
    parity: u32,
) -> SectorMatrix {
    let full = 1usize << n_sites;
    let states: Vec<usize> = (0..full).filter(|s| s.count_ones() % 2 == parity).collect();
    let mut index = vec![usize::MAX; full];
    for (i, &s) in states.iter().enumerate() {
        index[s] = i;
    }
    let j = params.j_scale();
    let (sp, cp) = params.phi().sin_cos();
    let reach = params.stride();
    let terms: Vec<usize> = match boundary {
        Boundary::Periodic => (0..n_sites).collect(),
        Boundary::Open => (0..n_sites.saturating_sub(reach)).collect(),
    };
    let mut row_ptr = Vec::with_capacity(states.len() + 1);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    row_ptr.push(0);
    let mut row: Vec<(usize, f64)> = Vec::new();
    for &s in &states {
        row.clear();
        let up = s.count_ones() as f64;
        row.push((index[s], j * sp * (2.0 * up - n_sites as f64)));
        for &a in &terms {
            let b = (a + reach) % n_sites;
            let mut sign = 1.0;
            for t in 1..reach {
                if s & (1 << ((a + t) % n_sites)) == 0 {
                    sign = -sign;
                }
            }
            let target = s ^ (1 << a) ^ (1 << b);
            row.push((index[target], -j * cp * sign));
        }
        row.sort_by_key(|e| e.0);
        let start = cols.len();
        for &(c, v) in &row {
            if cols.len() > start && *cols.last().expect("non-empty") == c {
                *vals.last_mut().expect("non-empty") += v;
            } else {
                cols.push(c);
                vals.push(v);
            }
        }
        row_ptr.push(cols.len());
    }
    SectorMatrix {
        states,
        row_ptr,
        cols,
        vals,
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn residual(h: &SectorMatrix, e: f64, v: &[f64]) -> f64 {
    let mut hv = vec![0.0; v.len()];
    h.apply(v, &mut hv);
    hv.iter()
        .zip(v)
        .map(|(a, b)| (a - e * b).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Lowest eigenpair by restarted Lanczos with full reorthogonalization.
fn lanczos(h: &SectorMatrix, tol: f64) -> Result<(f64, Vec<f64>)> {
    let dim = h.dim();
    let krylov = dim.min(150);
    let mut start: Vec<f64> = (0..dim)
        .map(|i| 1.0 + ((i * 7919) % 101) as f64 / 101.0)
        .collect();
    let mut best = (f64::INFINITY, Vec::new());
    for _ in 0..30 {
        let nrm = norm(&start);
        let mut basis: Vec<Vec<f64>> = vec![start.iter().map(|x| x / nrm).collect()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut w = vec![0.0; dim];
        for k in 0..krylov {
            h.apply(&basis[k], &mut w);
            let a = dot(&w, &basis[k]);
            alpha.push(a);
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(&w, v);
                    w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
                }
            }
            let b = norm(&w);
            if k + 1 == krylov || b < 1e-13 {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }
        let m = alpha.len();
        let mut t = DMatrix::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = t.symmetric_eigen();
        let (imin, &theta) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty tridiagonal");
        let mut x = vec![0.0; dim];
        for (i, v) in basis.iter().enumerate().take(m) {
            let c = eig.eigenvectors[(i, imin)];
            x.iter_mut().zip(v).for_each(|(a, b)| *a += c * b);
        }
        let nx = norm(&x);
        x.iter_mut().for_each(|a| *a /= nx);
        let res = residual(h, theta, &x);
        if res < tol {
            return Ok((theta, x));
        }
        if theta < best.0 {
            best = (theta, x.clone());
        }
        start = x;
    }
    Err(Error::Numerical(format!(
        "Lanczos did not reach residual {tol:e} (best energy {})",
        best.0
    )))
}

fn lowest(h: &SectorMatrix, n_sites: usize, tol: f64) -> Result<(f64, Vec<f64>)> {
    if n_sites <= DENSE_SITES {
        let eig = h.dense().symmetric_eigen();
        let (imin, &e) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty sector");
        Ok((e, eig.eigenvectors.column(imin).iter().copied().collect()))
    } else {
        lanczos(h, tol)
    }
}

/// Ground state of the spin Hamiltonian on `n_sites` spins.
pub fn build_and_solve(
    n_sites: usize,
    params: &ModelParams,
    boundary: Boundary,
) -> Result<EdGroundState> {
    if n_sites > MAX_SITES {
        return Err(Error::InvalidParameter(format!(
            "{n_sites} sites exceed the exact-diagonalization limit of {MAX_SITES}"
        )));
    }
    if n_sites <= params.cluster_size() && boundary == Boundary::Periodic {
        return Err(Error::InvalidParameter(format!(
            "a periodic ring needs more than {} sites for n = {}",
            params.cluster_size(),
            params.n()
        )));
    }
    if n_sites < 2 {
        return Err(Error::InvalidParameter(
            "a chain needs at least 2 sites".into(),
        ));
    }
    let scale =
        n_sites as f64 * params.j_scale() * (params.phi().sin().abs() + params.phi().cos().abs());
    let tol = 1e-10 * scale;
    let even = build_sector(n_sites, params, boundary, 0);
    let odd = build_sector(n_sites, params, boundary, 1);
    let (energy, v) = lowest(&even, n_sites, tol)?;
    let (odd_energy, _) = lowest(&odd, n_sites, tol)?;
    let res = residual(&even, energy, &v);
    if res >= tol {
        return Err(Error::Numerical(format!(
            "ground state residual {res:e} above {tol:e}"
        )));
    }
    let mut amplitudes = vec![0.0; 1 << n_sites];
    for (i, &s) in even.states.iter().enumerate() {
        amplitudes[s] = v[i];
    }
    Ok(EdGroundState {
        n_sites,
        params: *params,
        boundary,
        energy,
        odd_sector_energy: odd_energy,
        amplitudes,
        degenerate: (energy - odd_energy).abs() < DEGENERACY_GAP,
        residual: res,
    })
}

fn check_site(state: &EdGroundState, site: i64) -> Result<usize> {
    if site < 0 || site as usize >= state.n_sites {
        return Err(Error::SiteOutOfRange {
            site,
            n_sites: state.n_sites,
        });
    }
    Ok(site as usize)
}

/// `<psi| p |psi>` for an arbitrary Pauli product.
pub fn ed_expectation_complex(state: &EdGroundState, p: &PauliString) -> Result<Complex64> {
    let factors = p
        .factors
        .iter()
        .map(|&(s, a)| check_site(state, s).map(|s| (s, a)))
        .collect::<Result<Vec<_>>>()?;
    let i = Complex64::i();
    let mut total = Complex64::new(0.0, 0.0);
    for (s, &amp) in state.amplitudes.iter().enumerate() {
        if amp == 0.0 {
            continue;
        }
        let mut t = s;
        let mut phase = Complex64::new(1.0, 0.0);
        for &(site, axis) in factors.iter().rev() {
            let up = t & (1 << site) != 0;
            match axis {
                Axis::X => t ^= 1 << site,
                Axis::Y => {
                    phase *= if up { i } else { -i };
                    t ^= 1 << site;
                }
                Axis::Z => {
                    if !up {
                        phase = -phase;
                    }
                }
            }
        }
        total += phase * amp * state.amplitudes[t];
    }
    Ok(total)
}

/// `<psi| p |psi>` for a Hermitian Pauli product.
pub fn ed_expectation(state: &EdGroundState, p: &PauliString) -> Result<f64> {
    let z = ed_expectation_complex(state, p)?;
    if z.im.abs() > 1e-10 {
        return Err(Error::Numerical(format!(
            "expectation of {p} has imaginary part {:e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// Reduced density matrix on `sites`, in the basis where the first listed
/// site is the most significant and `up` comes before `down`.
pub fn ed_rdm(state: &EdGroundState, sites: &[i64]) -> Result<DMatrix<f64>> {
    let sites = sites
        .iter()
        .map(|&s| check_site(state, s))
        .collect::<Result<Vec<_>>>()?;
    for (a, s) in sites.iter().enumerate() {
        if sites[..a].contains(s) {
            return Err(Error::InvalidParameter(format!("site {s} listed twice")));
        }
    }
    let k = sites.len();
    let mask: usize = sites.iter().map(|s| 1 << s).sum();
    let local = |s: usize| -> usize {
        sites
            .iter()
            .enumerate()
            .map(|(t, &site)| usize::from(s & (1 << site) == 0) << (k - 1 - t))
            .sum()
    };
    let embed = |b: usize| -> usize {
        sites
            .iter()
            .enumerate()
            .map(|(t, &site)| {
                if b & (1 << (k - 1 - t)) == 0 {
                    1 << site
                } else {
                    0
                }
            })
            .sum()
    };
    let embedded: Vec<usize> = (0..1usize << k).map(embed).collect();
    let mut rho = DMatrix::zeros(1 << k, 1 << k);
    for (s, &amp) in state.amplitudes.iter().enumerate() {
        if amp == 0.0 {
            continue;
        }
        let a = local(s);
        let env = s & !mask;
        for (b, &e) in embedded.iter().enumerate() {
            rho[(a, b)] += amp * state.amplitudes[env | e];
        }
    }
    Ok(rho)
}

/// Von Neumann entropy (bits) of the spins in `sites`.
pub fn ed_entropy(state: &EdGroundState, sites: &[i64]) -> Result<f64> {
    let rho = ed_rdm(state, sites)?;
    let ev: DVector<f64> = rho.symmetric_eigenvalues();
    Ok(ev
        .iter()
        .filter(|&&l| l > 1e-15)
        .map(|&l| -l * l.log2())
        .sum())
}
