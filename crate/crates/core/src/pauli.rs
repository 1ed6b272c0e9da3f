//! Jordan-Wigner compilation of Pauli products into Majorana monomials.
//!
//! With `S_j = prod_{k<j} sigma^z_k` the Majorana operators are
//! `A_j = S_j sigma^x_j` and `B_j = -i S_j sigma^y_j`, so that
//!
//! ```text
//! sigma^z_j = A_j B_j,   sigma^x_j = S_j A_j,   sigma^y_j = i S_j B_j,
//! A_j^2 = 1,             B_j^2 = -1.
//! ```
//!
//! A product with an even number of `x`/`y` factors has all string parts
//! below its lowest site cancel, so only a finite window is ever expanded.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Sign in `sigma^z_j = SIGMA_Z_SIGN * A_j B_j`. Pinned by `<sigma^z> = -G_0`.
pub const SIGMA_Z_SIGN: f64 = 1.0;
/// Sign in `sigma^x_j = SIGMA_X_SIGN * S_j A_j`. Pinned by `<x_i x_{i+1}> = G_{-1}`.
pub const SIGMA_X_SIGN: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            _ => Err(Error::InvalidParameter(format!("unknown Pauli axis {s:?}"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Ordered product of single-site Pauli operators. Empty is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub factors: Vec<(i64, Axis)>,
}

impl PauliString {
    pub fn new(factors: Vec<(i64, Axis)>) -> Self {
        Self { factors }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(site: i64, axis: Axis) -> Self {
        Self {
            factors: vec![(site, axis)],
        }
    }

    pub fn pair(i: i64, a: Axis, j: i64, b: Axis) -> Self {
        Self {
            factors: vec![(i, a), (j, b)],
        }
    }

    pub fn push(&mut self, site: i64, axis: Axis) -> &mut Self {
        self.factors.push((site, axis));
        self
    }

    /// `self` followed by `other` (operator product `self * other`).
    pub fn times(&self, other: &PauliString) -> PauliString {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        PauliString { factors }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Smallest and largest site, or `None` for the identity.
    pub fn window(&self) -> Option<(i64, i64)> {
        let lo = self.factors.iter().map(|f| f.0).min()?;
        let hi = self.factors.iter().map(|f| f.0).max()?;
        Some((lo, hi))
    }

    pub fn shifted(&self, by: i64) -> PauliString {
        PauliString {
            factors: self.factors.iter().map(|&(s, a)| (s + by, a)).collect(),
        }
    }

    /// Number of `x`/`y` factors; odd means the expectation vanishes by parity.
    pub fn string_count(&self) -> usize {
        self.factors.iter().filter(|f| f.1 != Axis::Z).count()
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `"x0 z1 x2"` style input (axis letter followed by site).
    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for tok in s.split_whitespace() {
            let (a, site) = tok.split_at(1);
            let axis: Axis = a.parse()?;
            let site: i64 = site.parse().map_err(|_| {
                Error::InvalidParameter(format!("bad site in Pauli factor {tok:?}"))
            })?;
            factors.push((site, axis));
        }
        Ok(Self { factors })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (s, a)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}{s}")?;
        }
        Ok(())
    }
}

/// The two Majorana flavours on a site. `A < B` in the canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Majorana {
    pub site: i64,
    pub flavor: Flavor,
}

impl Majorana {
    pub fn a(site: i64) -> Self {
        Self {
            site,
            flavor: Flavor::A,
        }
    }

    pub fn b(site: i64) -> Self {
        Self {
            site,
            flavor: Flavor::B,
        }
    }

    /// `gamma^2`: `+1` for `A`, `-1` for `B`.
    pub fn square(&self) -> f64 {
        match self.flavor {
            Flavor::A => 1.0,
            Flavor::B => -1.0,
        }
    }
}

impl fmt::Display for Majorana {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.flavor {
            Flavor::A => 'A',
            Flavor::B => 'B',
        };
        write!(f, "{c}{}", self.site)
    }
}

/// `prefactor * ops[0] ops[1] ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct MajoranaMonomial {
    pub prefactor: Complex64,
    pub ops: Vec<Majorana>,
}

impl MajoranaMonomial {
    pub fn new(prefactor: Complex64, ops: Vec<Majorana>) -> Self {
        Self { prefactor, ops }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn count(&self, flavor: Flavor) -> usize {
        self.ops.iter().filter(|o| o.flavor == flavor).count()
    }

    /// Equal numbers of `A` and `B` operators.
    pub fn is_parity_balanced(&self) -> bool {
        self.count(Flavor::A) == self.count(Flavor::B)
    }

    /// Sort into `(site, A < B)` order, tracking the anticommutation sign,
    /// and cancel repeated operators.
    pub fn canonical(&self) -> MajoranaMonomial {
        // A stable sort never inverts equal operators, so the permutation
        // parity equals the parity of the anticommuting swaps.
        let mut order: Vec<usize> = (0..self.ops.len()).collect();
        order.sort_by_key(|&i| self.ops[i]);
        let mut sign = if permutation_is_odd(&order) {
            -1.0
        } else {
            1.0
        };
        let ops: Vec<Majorana> = order.iter().map(|&i| self.ops[i]).collect();
        let mut out: Vec<Majorana> = Vec::with_capacity(ops.len());
        for op in ops {
            if out.last() == Some(&op) {
                out.pop();
                sign *= op.square();
            } else {
                out.push(op);
            }
        }
        MajoranaMonomial {
            prefactor: self.prefactor * sign,
            ops: out,
        }
    }
}

pub(crate) fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0usize;
    for start in 0..perm.len() {
        let mut i = start;
        let mut len = 0usize;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        transpositions += len.saturating_sub(1);
    }
    transpositions % 2 == 1
}

impl fmt::Display for MajoranaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{:+}i)", self.prefactor.re, self.prefactor.im)?;
        for op in &self.ops {
            write!(f, " {op}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Compiled {
    Monomial(MajoranaMonomial),
    /// Odd number of Majorana operators: the ground-state expectation is 0.
    ParityOdd,
}

impl Compiled {
    pub fn monomial(&self) -> Option<&MajoranaMonomial> {
        match self {
            Compiled::Monomial(m) => Some(m),
            Compiled::ParityOdd => None,
        }
    }
}

/// Compile a Pauli product into its canonical Majorana monomial.
pub fn compile(p: &PauliString) -> Compiled {
    if p.string_count() % 2 == 1 {
        return Compiled::ParityOdd;
    }
    let Some((lo, _)) = p.window() else {
        return Compiled::Monomial(MajoranaMonomial::new(Complex64::new(1.0, 0.0), Vec::new()));
    };
    let mut prefactor = Complex64::new(1.0, 0.0);
    let mut ops = Vec::new();
    for &(site, axis) in &p.factors {
        match axis {
            Axis::Z => {
                prefactor *= SIGMA_Z_SIGN;
                ops.push(Majorana::a(site));
                ops.push(Majorana::b(site));
            }
            Axis::X | Axis::Y => {
                for k in lo..site {
                    ops.push(Majorana::a(k));
                    ops.push(Majorana::b(k));
                }
                prefactor *= SIGMA_Z_SIGN.powi((site - lo) as i32);
                if axis == Axis::X {
                    prefactor *= SIGMA_X_SIGN;
                    ops.push(Majorana::a(site));
                } else {
                    // sigma^y = -i sigma^z sigma^x and A B A = -B.
                    prefactor *= Complex64::new(0.0, SIGMA_Z_SIGN * SIGMA_X_SIGN);
                    ops.push(Majorana::b(site));
                }
            }
        }
    }
    Compiled::Monomial(MajoranaMonomial::new(prefactor, ops).canonical())
}

/// `O_j O_{j+r}` for the cluster order parameter of extension `n`, returned
/// as `(sign, string)` with `O_j O_{j+r} = sign * string`.
///
/// Even `n`: `O_j = x_j y_{j+1} x_{j+2} ... x_{j+n}`.
/// Odd `n`: `O_j = (-1)^j (prod_{k<j-n} z_k) y_{j-n} x_{j-n+1} ... y_{j-1} x_j`;
/// the semi-infinite strings of the two factors cancel down to
/// `z_{j-n} ... z_{j+r-n-1}`. The `(-1)^j` phase makes nearest neighbours
/// multiply to `+ x z..z x`, so `<O_j O_{j+r}> -> 1` in the pure cluster state.
pub fn cluster_pair(n: usize, j: i64, r: i64) -> (f64, PauliString) {
    let n_i = n as i64;
    if n.is_multiple_of(2) {
        let local = |origin: i64| -> PauliString {
            PauliString::new(
                (0..=n_i)
                    .map(|t| (origin + t, if t % 2 == 0 { Axis::X } else { Axis::Y }))
                    .collect(),
            )
        };
        (1.0, local(j).times(&local(j + r)))
    } else {
        let local = |end: i64| -> PauliString {
            PauliString::new(
                (0..=n_i)
                    .map(|t| (end - n_i + t, if t % 2 == 0 { Axis::Y } else { Axis::X }))
                    .collect(),
            )
        };
        let mut s = local(j);
        for k in (j - n_i)..(j + r - n_i) {
            s.push(k, Axis::Z);
        }
        let s = s.times(&local(j + r));
        let sign = if r.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        (sign, s)
    }
}

/// The Hamiltonian cluster term `x_j z_{j+1} ... z_{j+n} x_{j+n+1}`.
pub fn cluster_term(n: usize, j: i64) -> PauliString {
    let mut s = PauliString::single(j, Axis::X);
    for k in 1..=n as i64 {
        s.push(j + k, Axis::Z);
    }
    s.push(j + n as i64 + 1, Axis::X);
    s
}
