//! Two-spin reduced density matrices, concurrence, multipartite structure
//! and block entanglement entropy.
//!
//! Two-spin matrices use the basis `|uu>, |ud>, |du>, |dd>` where `u` is the
//! `sigma^z = +1` state.

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::correlators::{build_table, CorrelatorTable};
use crate::error::{Error, Result};
use crate::observables::{linear_fit, sigma_z, xx, yy, zz};
use crate::params::{ModelParams, PHI_CRITICAL};
use crate::pauli::{compile, Axis, PauliString};
use crate::quadrature::QuadratureSpec;
use crate::wick::expectation_complex;

const NEGATIVE_EIGENVALUE: f64 = -1e-8;
const CONCURRENCE_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct TwoSpinRdm {
    pub entries: Matrix4<f64>,
}

impl TwoSpinRdm {
    /// X-shaped state from the translation-invariant correlators.
    pub fn from_correlators(z: f64, zz: f64, xx: f64, yy: f64) -> Result<Self> {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = (1.0 + 2.0 * z + zz) / 4.0;
        m[(1, 1)] = (1.0 - zz) / 4.0;
        m[(2, 2)] = (1.0 - zz) / 4.0;
        m[(3, 3)] = (1.0 - 2.0 * z + zz) / 4.0;
        m[(0, 3)] = (xx - yy) / 4.0;
        m[(3, 0)] = (xx - yy) / 4.0;
        m[(1, 2)] = (xx + yy) / 4.0;
        m[(2, 1)] = (xx + yy) / 4.0;
        let rdm = Self { entries: m };
        let low = rdm.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if low < NEGATIVE_EIGENVALUE {
            return Err(Error::Numerical(format!(
                "two-spin density matrix has eigenvalue {low:e}"
            )));
        }
        Ok(rdm)
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    /// No entries besides the diagonal and the anti-diagonal.
    pub fn is_x_shaped(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| i == j || i + j == 3 || self.entries[(i, j)] == 0.0))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| i == j || self.entries[(i, j)] == 0.0))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.entries
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect()
    }
}

/// Reduced state of spins `j` and `j + r`.
pub fn two_spin_rdm(table: &CorrelatorTable, r: i64) -> Result<TwoSpinRdm> {
    if r < 1 {
        return Err(Error::InvalidParameter(format!(
            "separation r = {r} must be positive"
        )));
    }
    TwoSpinRdm::from_correlators(sigma_z(table)?, zz(table, r)?, xx(table, r)?, yy(table, r)?)
}

fn concurrence_x(m: &Matrix4<f64>) -> f64 {
    let c1 = m[(1, 2)].abs() - (m[(0, 0)].max(0.0) * m[(3, 3)].max(0.0)).sqrt();
    let c2 = m[(0, 3)].abs() - (m[(1, 1)].max(0.0) * m[(2, 2)].max(0.0)).sqrt();
    let c = 2.0 * c1.max(c2);
    // Coherences at the rounding level of the correlators are not entanglement.
    if c < CONCURRENCE_FLOOR {
        0.0
    } else {
        c
    }
}

/// Concurrence from the spin-flip spectrum, valid for any real two-qubit state.
pub fn concurrence_general(rho: &Matrix4<f64>) -> f64 {
    #[rustfmt::skip]
    let yy = Matrix4::new(
        0.0, 0.0, 0.0, -1.0,
        0.0, 0.0, 1.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        -1.0, 0.0, 0.0, 0.0,
    );
    let flipped = yy * rho * yy;
    let eig = rho.symmetric_eigen();
    let sqrt_rho = eig.eigenvectors
        * Matrix4::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0).sqrt()))
        * eig.eigenvectors.transpose();
    let r = sqrt_rho * flipped * sqrt_rho;
    let r = (r + r.transpose()) * 0.5;
    let mut l: Vec<f64> = r
        .symmetric_eigenvalues()
        .iter()
        .map(|v| v.max(0.0).sqrt())
        .collect();
    l.sort_by(|a, b| b.total_cmp(a));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// Wootters concurrence of an X-shaped state, in `[0, 1]`.
pub fn concurrence(rdm: &TwoSpinRdm) -> f64 {
    let c = concurrence_x(&rdm.entries).min(1.0);
    if cfg!(debug_assertions) {
        let g = concurrence_general(&rdm.entries);
        debug_assert!(
            (c - g).abs() < 1e-8,
            "X-state concurrence {c} vs general {g}"
        );
    }
    c
}

/// Two-spin state of sites `i`, `j` assembled from all 16 Pauli correlators.
pub fn pair_rdm_general(table: &CorrelatorTable, i: i64, j: i64) -> Result<Matrix4<Complex64>> {
    if i == j {
        return Err(Error::InvalidParameter(
            "pair density matrix needs two distinct sites".into(),
        ));
    }
    let paulis = [
        Matrix2c::identity(),
        Matrix2c::sx(),
        Matrix2c::sy(),
        Matrix2c::sz(),
    ];
    let axes = [None, Some(Axis::X), Some(Axis::Y), Some(Axis::Z)];
    let mut rho = Matrix4::<Complex64>::zeros();
    for (a, ax) in axes.iter().enumerate() {
        for (b, bx) in axes.iter().enumerate() {
            let mut p = PauliString::identity();
            if let Some(ax) = ax {
                p.push(i, *ax);
            }
            if let Some(bx) = bx {
                p.push(j, *bx);
            }
            let v = expectation_complex(&compile(&p), table)?;
            rho += paulis[a].kron(&paulis[b]) * (v / 4.0);
        }
    }
    Ok(rho)
}

#[derive(Clone, Copy)]
struct Matrix2c([[Complex64; 2]; 2]);

impl Matrix2c {
    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn identity() -> Self {
        Self([
            [Self::c(1.0, 0.0), Self::c(0.0, 0.0)],
            [Self::c(0.0, 0.0), Self::c(1.0, 0.0)],
        ])
    }

    fn sx() -> Self {
        Self([
            [Self::c(0.0, 0.0), Self::c(1.0, 0.0)],
            [Self::c(1.0, 0.0), Self::c(0.0, 0.0)],
        ])
    }

    fn sy() -> Self {
        Self([
            [Self::c(0.0, 0.0), Self::c(0.0, -1.0)],
            [Self::c(0.0, 1.0), Self::c(0.0, 0.0)],
        ])
    }

    fn sz() -> Self {
        Self([
            [Self::c(1.0, 0.0), Self::c(0.0, 0.0)],
            [Self::c(0.0, 0.0), Self::c(-1.0, 0.0)],
        ])
    }

    fn kron(&self, o: &Self) -> Matrix4<Complex64> {
        Matrix4::from_fn(|r, c| self.0[r / 2][c / 2] * o.0[r % 2][c % 2])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureCheck {
    pub premise: &'static str,
    pub passed: bool,
    /// Largest entry that should vanish.
    pub max_violation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultipartiteReport {
    pub n: usize,
    pub phi: f64,
    pub block: usize,
    pub checks: Vec<StructureCheck>,
}

impl MultipartiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

const STRUCTURE_TOLERANCE: f64 = 1e-12;

/// Checks the premises behind the absence of genuine multipartite
/// entanglement in a block of `n + 2` spins: inner pairs are diagonal, the
/// endpoint pair is X-shaped, and single spins carry no coherence.
pub fn multipartite_structure_report(table: &CorrelatorTable) -> Result<MultipartiteReport> {
    let params = table.params();
    let m = params.cluster_size() as i64;
    let mut inner = 0.0f64;
    for i in 0..m {
        for j in (i + 1)..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            let rho = pair_rdm_general(table, i, j)?;
            for a in 0..4 {
                for b in 0..4 {
                    if a != b {
                        inner = inner.max(rho[(a, b)].norm());
                    }
                }
            }
        }
    }
    let rho = pair_rdm_general(table, 0, m - 1)?;
    let mut outer = 0.0f64;
    for a in 0..4 {
        for b in 0..4 {
            if a != b && a + b != 3 {
                outer = outer.max(rho[(a, b)].norm());
            }
        }
    }
    let mut single = 0.0f64;
    for axis in [Axis::X, Axis::Y] {
        let v = expectation_complex(&compile(&PauliString::single(0, axis)), table)?;
        single = single.max(v.norm());
    }
    let check = |premise, v: f64| StructureCheck {
        premise,
        passed: v <= STRUCTURE_TOLERANCE,
        max_violation: v,
    };
    Ok(MultipartiteReport {
        n: params.n(),
        phi: params.phi(),
        block: m as usize,
        checks: vec![
            check("inner pairs diagonal", inner),
            check("endpoint pair X-shaped", outer),
            check("no single-spin coherence", single),
        ],
    })
}

/// Majorana correlation matrix of a block of `m` contiguous spins.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockGamma {
    pub m: usize,
    /// `2m x 2m`, 2x2 blocks `Pi_{i-j} = [[0, G_{i-j}], [-G_{j-i}, 0]]`.
    pub matrix: DMatrix<f64>,
    /// `nu_j` in decreasing order.
    pub spectrum: Vec<f64>,
}

impl BlockGamma {
    pub fn new(table: &CorrelatorTable, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter(
                "block length must be positive".into(),
            ));
        }
        let mut matrix = DMatrix::zeros(2 * m, 2 * m);
        // In (A_1..A_m, B_1..B_m) order the matrix is [[0, C], [-C^T, 0]], so
        // the spectrum of i * Gamma is +- the singular values of C.
        let mut c = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                let g = table.get(i as i64 - j as i64)?;
                matrix[(2 * i, 2 * j + 1)] = g;
                matrix[(2 * j + 1, 2 * i)] = -g;
                c[(i, j)] = g;
            }
        }
        let svd = c.try_svd(false, false, f64::EPSILON, 500).ok_or_else(|| {
            Error::Numerical(format!(
                "singular value decomposition failed for block of {m} spins"
            ))
        })?;
        let mut spectrum: Vec<f64> = svd.singular_values.iter().copied().collect();
        spectrum.sort_by(|a, b| b.total_cmp(a));
        if let Some(&top) = spectrum.first() {
            if top > 1.0 + 1e-8 {
                return Err(Error::Numerical(format!(
                    "correlation eigenvalue {top} exceeds 1 for block of {m} spins"
                )));
            }
        }
        Ok(Self {
            m,
            matrix,
            spectrum,
        })
    }

    /// Eigenvalues of the Hermitian matrix `i * Gamma`, ascending.
    pub fn hermitian_spectrum(&self) -> Vec<f64> {
        let h = self.matrix.map(|v| Complex64::new(0.0, v));
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Binary Shannon entropy in bits.
pub fn shannon2(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

/// Von Neumann entropy (bits) of `m` contiguous spins.
pub fn block_entropy(table: &CorrelatorTable, m: usize) -> Result<f64> {
    let gamma = BlockGamma::new(table, m)?;
    Ok(gamma
        .spectrum
        .iter()
        .map(|&nu| shannon2((1.0 + nu.min(1.0)) / 2.0))
        .sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralChargeFit {
    pub n: usize,
    pub m_range: Vec<usize>,
    pub entropies: Vec<f64>,
    /// Coefficient of `log2 m`.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `3 * slope`.
    pub c_hat: f64,
    /// `0.51 (1 + n)`.
    pub c_theory: f64,
}

/// Block sizes `8..=64`.
pub fn default_m_range() -> Vec<usize> {
    (8..=64).collect()
}

/// Fit `S(m) = (c/3) log2 m + const` at the critical point.
pub fn central_charge_fit(
    n: usize,
    m_range: &[usize],
    quad: &QuadratureSpec,
) -> Result<CentralChargeFit> {
    if m_range.len() < 6 {
        return Err(Error::InvalidParameter(format!(
            "central charge fit needs at least 6 block sizes, got {}",
            m_range.len()
        )));
    }
    if m_range.contains(&0) {
        return Err(Error::InvalidParameter(
            "block size 0 in central charge fit".into(),
        ));
    }
    let params = ModelParams::unit(n, PHI_CRITICAL)?;
    let m_max = *m_range.iter().max().expect("non-empty");
    let table = build_table(&params, m_max, quad)?;
    let entropies = m_range
        .par_iter()
        .map(|&m| block_entropy(&table, m))
        .collect::<Result<Vec<_>>>()?;
    let x: Vec<f64> = m_range.iter().map(|&m| (m as f64).log2()).collect();
    let (intercept, slope, r_squared) = linear_fit(&x, &entropies);
    Ok(CentralChargeFit {
        n,
        m_range: m_range.to_vec(),
        entropies,
        slope,
        intercept,
        r_squared,
        c_hat: 3.0 * slope,
        c_theory: 0.51 * (1 + n) as f64,
    })
}
