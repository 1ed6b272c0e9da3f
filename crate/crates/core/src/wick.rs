//! Wick contractions of Majorana monomials.
//!
//! The ground state is Gaussian, so `<g_1 g_2 ... g_2M> = Pf(M)` with
//! `M_ab = <g_a g_b>` for `a < b`. Structural zeros of `M` split it into
//! independent blocks; the Pfaffian of each block is computed by
//! Parlett-Reid tridiagonalization with pivoting.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::correlators::CorrelatorTable;
use crate::error::{Error, Result};
use crate::pauli::{permutation_is_odd, Compiled, Flavor, Majorana, MajoranaMonomial};

const SKEW_TOLERANCE: f64 = 1e-12;
const IMAGINARY_RESIDUE: f64 = 1e-10;

/// Real skew-symmetric matrix of pair contractions.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionMatrix {
    entries: DMatrix<f64>,
}

impl ContractionMatrix {
    /// Validates even dimension and skew symmetry, then stores the exactly
    /// antisymmetrized matrix.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let n = entries.nrows();
        if entries.ncols() != n {
            return Err(Error::InvalidParameter(format!(
                "contraction matrix must be square, got {}x{}",
                n,
                entries.ncols()
            )));
        }
        if n % 2 == 1 {
            return Err(Error::InvalidParameter(format!(
                "contraction matrix has odd dimension {n}"
            )));
        }
        let scale = entries.amax().max(1.0);
        for i in 0..n {
            for j in 0..=i {
                if (entries[(i, j)] + entries[(j, i)]).abs() > SKEW_TOLERANCE * scale {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not skew-symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let entries = (&entries - entries.transpose()) * 0.5;
        Ok(Self { entries })
    }

    /// Contractions of `ops` in the given order.
    pub fn from_ops(ops: &[Majorana], table: &CorrelatorTable) -> Result<Self> {
        let n = ops.len();
        if n % 2 == 1 {
            return Err(Error::InvalidParameter(format!(
                "odd number of Majorana operators ({n})"
            )));
        }
        let mut m = DMatrix::zeros(n, n);
        for a in 0..n {
            for b in (a + 1)..n {
                let v = contraction(ops[a], ops[b], table)?;
                m[(a, b)] = v;
                m[(b, a)] = -v;
            }
        }
        Ok(Self { entries: m })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }
}

/// `<a b>` on the ground state described by `table`.
pub fn contraction(a: Majorana, b: Majorana, table: &CorrelatorTable) -> Result<f64> {
    let same = a.site == b.site;
    Ok(match (a.flavor, b.flavor) {
        (Flavor::A, Flavor::A) => f64::from(u8::from(same)),
        (Flavor::B, Flavor::B) => -f64::from(u8::from(same)),
        (Flavor::B, Flavor::A) => table.get(a.site - b.site)?,
        (Flavor::A, Flavor::B) => -table.get(b.site - a.site)?,
    })
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Members of each set, sets ordered by smallest member.
    fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut slot = vec![usize::MAX; n];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let r = self.find(i);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(i);
        }
        groups
    }
}

/// Pfaffian of a validated contraction matrix. Dimension 0 gives 1.
pub fn pfaffian(m: &ContractionMatrix) -> f64 {
    let a = &m.entries;
    let n = a.nrows();
    let mut sets = DisjointSets::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if a[(i, j)] != 0.0 {
                sets.union(i, j);
            }
        }
    }
    let groups = sets.groups();
    if groups.iter().any(|g| g.len() % 2 == 1) {
        return 0.0;
    }
    let perm: Vec<usize> = groups.iter().flatten().copied().collect();
    let mut value = if permutation_is_odd(&perm) { -1.0 } else { 1.0 };
    for g in &groups {
        let block = DMatrix::from_fn(g.len(), g.len(), |i, j| a[(g[i], g[j])]);
        value *= pfaffian_dense(block);
        if value == 0.0 {
            return 0.0;
        }
    }
    value
}

/// Parlett-Reid Pfaffian with partial pivoting; `a` must be skew-symmetric.
pub fn pfaffian_dense(mut a: DMatrix<f64>) -> f64 {
    let n = a.nrows();
    if n % 2 == 1 {
        return 0.0;
    }
    let mut pf = 1.0;
    let mut k = 0;
    while k + 1 < n {
        let mut kp = k + 1;
        for i in (k + 2)..n {
            if a[(i, k)].abs() > a[(kp, k)].abs() {
                kp = i;
            }
        }
        if kp != k + 1 {
            a.swap_rows(k + 1, kp);
            a.swap_columns(k + 1, kp);
            pf = -pf;
        }
        let pivot = a[(k, k + 1)];
        if pivot == 0.0 {
            return 0.0;
        }
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<f64> = ((k + 2)..n).map(|j| a[(k, j)] / pivot).collect();
            let col: Vec<f64> = ((k + 2)..n).map(|i| a[(i, k + 1)]).collect();
            for (ii, i) in ((k + 2)..n).enumerate() {
                for (jj, j) in ((k + 2)..n).enumerate() {
                    a[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    pf
}

/// Determinant that splits the sparsity pattern into independent blocks.
///
/// A block with unequal numbers of rows and columns makes the determinant an
/// exact zero, which is how structurally singular Toeplitz matrices come out
/// as `0.0` rather than rounding noise.
pub fn structured_determinant(m: &DMatrix<f64>) -> Result<f64> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(Error::InvalidParameter(format!(
            "determinant of a {rows}x{cols} matrix"
        )));
    }
    let n = rows;
    if n == 0 {
        return Ok(1.0);
    }
    // Nodes 0..n are rows, n..2n are columns.
    let mut sets = DisjointSets::new(2 * n);
    for i in 0..n {
        for j in 0..n {
            if m[(i, j)] != 0.0 {
                sets.union(i, n + j);
            }
        }
    }
    let groups = sets.groups();
    let mut row_perm = Vec::with_capacity(n);
    let mut col_perm = Vec::with_capacity(n);
    let mut blocks = Vec::with_capacity(groups.len());
    for g in &groups {
        let r: Vec<usize> = g.iter().copied().filter(|&v| v < n).collect();
        let c: Vec<usize> = g.iter().filter(|&&v| v >= n).map(|&v| v - n).collect();
        if r.len() != c.len() {
            return Ok(0.0);
        }
        row_perm.extend_from_slice(&r);
        col_perm.extend_from_slice(&c);
        blocks.push((r, c));
    }
    let mut value = if permutation_is_odd(&row_perm) != permutation_is_odd(&col_perm) {
        -1.0
    } else {
        1.0
    };
    for (r, c) in blocks {
        let block = DMatrix::from_fn(r.len(), c.len(), |i, j| m[(r[i], c[j])]);
        value *= block.lu().determinant();
    }
    Ok(value)
}

/// `prefactor * Pf(M)` for a monomial, as a complex number.
pub fn monomial_expectation(mono: &MajoranaMonomial, table: &CorrelatorTable) -> Result<Complex64> {
    if mono.ops.len() % 2 == 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let m = ContractionMatrix::from_ops(&mono.ops, table)?;
    Ok(mono.prefactor * pfaffian(&m))
}

/// Ground-state expectation of a compiled operator, complex in general.
pub fn expectation_complex(c: &Compiled, table: &CorrelatorTable) -> Result<Complex64> {
    match c {
        Compiled::ParityOdd => Ok(Complex64::new(0.0, 0.0)),
        Compiled::Monomial(m) => monomial_expectation(m, table),
    }
}

/// Ground-state expectation of a compiled Hermitian operator.
///
/// Fails if the result carries an imaginary part above `1e-10`, which means
/// the operator was not Hermitian.
pub fn expectation(c: &Compiled, table: &CorrelatorTable) -> Result<f64> {
    let z = expectation_complex(c, table)?;
    if z.im.abs() > IMAGINARY_RESIDUE * z.re.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "expectation has imaginary part {:e}; operator is not Hermitian",
            z.im
        )));
    }
    Ok(z.re)
}
