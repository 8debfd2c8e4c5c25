//! Dense complex linear algebra: operators, pure and mixed states, tensor
//! products, commutators and Hermitian eigensystems.
//!
//! Everything here works in units where ħ = 1. An [`Operator`] carries the
//! power of ħ its entries are measured in so that reported eigenvalues can be
//! labelled (`ħ`, `ħ²`, ...).

use std::fmt::Write as _;
use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::settings::DEFAULT_DIM_CAP;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    data: Vec<Complex64>,
    hbar_power: i32,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "operator dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
            hbar_power: 0,
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out.data[i * dim + i] = ONE;
        }
        out
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                out.data[i * dim + j] = f(i, j);
            }
        }
        out
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let mut out = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            out.data[i * diag.len() + i] = d;
        }
        out
    }

    /// Builds an operator from row-major entries.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::Shape {
                expected: dim * dim,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite operator entry".into()));
        }
        Ok(Self {
            dim,
            data,
            hbar_power: 0,
        })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::Shape {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(dim, data)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Power of ħ the entries are expressed in.
    pub fn hbar_power(&self) -> i32 {
        self.hbar_power
    }

    pub fn with_hbar_power(mut self, power: i32) -> Self {
        self.hbar_power = power;
        self
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n).with_hbar_power(self.hbar_power);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * c).collect(),
            hbar_power: self.hbar_power,
        }
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Shape {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
            hbar_power: self.hbar_power,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
            hbar_power: self.hbar_power,
        })
    }

    /// Matrix product `self · other`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n).with_hbar_power(self.hbar_power + other.hbar_power);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// Max-entry norm `max |a_ij|`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |A - A†|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// `max |A - B|`, or an error on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.dim {
            return Err(Error::Shape {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok((0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `A·ψ` as a raw amplitude vector.
    pub fn apply_pure(&self, psi: &PureState) -> Result<Vec<Complex64>> {
        self.matvec(psi.amplitudes())
    }

    /// Left multiplication `A·W`.
    pub fn apply_mixed(&self, w: &MixedState) -> Result<Operator> {
        self.checked_mul(w.as_operator())
    }

    /// Conjugation by a basis permutation: returns `P A P†` where `P|k⟩ = |map[k]⟩`.
    ///
    /// Equivalent to the dense product with the permutation matrix, without
    /// forming it.
    pub fn conjugate_by_basis_permutation(&self, map: &[usize]) -> Result<Self> {
        if map.len() != self.dim {
            return Err(Error::Shape {
                expected: self.dim,
                found: map.len(),
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n).with_hbar_power(self.hbar_power);
        for i in 0..n {
            for j in 0..n {
                out.data[map[i] * n + map[j]] = self.data[i * n + j];
            }
        }
        Ok(out)
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    /// Text dump: one row per line, entries as `re+imi` separated by spaces.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(|&z| format_complex(z)).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    pub fn parse_dump(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.split_whitespace().map(parse_complex).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&rows)
    }
}

impl Index<(usize, usize)> for Operator {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.dim && j < self.dim, "index out of bounds");
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for Operator {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.dim && j < self.dim, "index out of bounds");
        &mut self.data[i * self.dim + j]
    }
}

impl std::ops::Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        self.checked_add(rhs).expect("operator dimensions differ")
    }
}

impl std::ops::Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        self.checked_sub(rhs).expect("operator dimensions differ")
    }
}

impl std::ops::Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        self.checked_mul(rhs).expect("operator dimensions differ")
    }
}

fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

fn parse_complex(tok: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("malformed complex entry `{tok}`"));
    let body = tok.strip_suffix('i').ok_or_else(bad)?;
    let bytes = body.as_bytes();
    // The imaginary sign is the last +/- that is neither leading nor an exponent sign.
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let re: f64 = body[..split].parse().map_err(|_| bad())?;
    let im: f64 = body[split..].parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// Kronecker product `A ⊗ B` under the default dimension cap.
pub fn kron(a: &Operator, b: &Operator) -> Result<Operator> {
    kron_capped(a, b, DEFAULT_DIM_CAP)
}

/// Kronecker product: entry `(i·dB + k, j·dB + l)` is `A[i,j]·B[k,l]`.
pub fn kron_capped(a: &Operator, b: &Operator, cap: usize) -> Result<Operator> {
    let (da, db) = (a.dim, b.dim);
    let dim = da.checked_mul(db).filter(|&d| d <= cap).ok_or(Error::DimensionCap {
        requested: da.saturating_mul(db),
        cap,
    })?;
    let mut out = Operator::zeros(dim).with_hbar_power(a.hbar_power + b.hbar_power);
    for i in 0..da {
        for j in 0..da {
            let aij = a.data[i * da + j];
            if aij == ZERO {
                continue;
            }
            for k in 0..db {
                let dst = (i * db + k) * dim + j * db;
                let src = &b.data[k * db..(k + 1) * db];
                for (o, bkl) in out.data[dst..dst + db].iter_mut().zip(src) {
                    *o = aij * bkl;
                }
            }
        }
    }
    Ok(out)
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    a.checked_mul(b)?.checked_sub(&b.checked_mul(a)?)
}

/// Decides `A = c·1` by the max-entry norm of `A − c·1`.
///
/// This is the operator form of "`Aψ = cψ` for every ψ".
pub fn is_scalar_identity(a: &Operator, c: Complex64, tol: f64) -> bool {
    scalar_identity_deviation(a, c) <= tol
}

pub fn scalar_identity_deviation(a: &Operator, c: Complex64) -> f64 {
    let n = a.dim;
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { c } else { ZERO };
            dev = dev.max((a.data[i * n + j] - target).norm());
        }
    }
    dev
}

/// An eigenvalue together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub value: f64,
    pub multiplicity: usize,
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: Vec<PureState>,
    scale: f64,
}

impl Eigensystem {
    pub fn pairs(&self) -> impl Iterator<Item = (f64, &PureState)> {
        self.values.iter().copied().zip(&self.vectors)
    }

    /// Groups eigenvalues closer than `grouping · ‖A‖_max` into one level.
    pub fn levels(&self, grouping: f64) -> Vec<Level> {
        group_levels(&self.values, grouping * self.scale.max(1.0))
    }

    /// Indices of the eigenvectors in each level, aligned with [`Self::levels`].
    pub fn level_indices(&self, grouping: f64) -> Vec<Vec<usize>> {
        let gap = grouping * self.scale.max(1.0);
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (k, &v) in self.values.iter().enumerate() {
            match out.last_mut() {
                Some(level) if v - self.values[*level.last().unwrap()] <= gap => level.push(k),
                _ => out.push(vec![k]),
            }
        }
        out
    }
}

/// Groups a sorted list of values; consecutive values within `gap` merge.
/// Each level reports the mean of its members.
pub fn group_levels(sorted: &[f64], gap: f64) -> Vec<Level> {
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    for &v in sorted {
        match out.last_mut() {
            Some((sum, count, last)) if v - *last <= gap => {
                *sum += v;
                *count += 1;
                *last = v;
            }
            _ => out.push((v, 1, v)),
        }
    }
    out.into_iter()
        .map(|(sum, count, _)| Level {
            value: sum / count as f64,
            multiplicity: count,
        })
        .collect()
}

/// Eigen-decomposition of a self-adjoint operator.
///
/// The input is symmetrised as `(A + A†)/2` after the hermiticity check so the
/// solver sees an exactly Hermitian matrix.
pub fn hermitian_eigensystem(a: &Operator, tol_abs: f64) -> Result<Eigensystem> {
    let deviation = a.hermiticity_deviation();
    if deviation > tol_abs {
        return Err(Error::NotHermitian { deviation });
    }
    let m = a.to_nalgebra();
    let sym = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(sym);

    let mut order: Vec<usize> = (0..a.dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| PureState::from_unnormalized(eig.eigenvectors.column(k).iter().copied().collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Eigensystem {
        values,
        vectors,
        scale: a.max_abs(),
    })
}

/// Unit vector in a finite-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Accepts amplitudes whose squared norm is 1 within `tol`.
    pub fn new(amplitudes: Vec<Complex64>, tol: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty amplitude vector".into()));
        }
        let norm_sq = norm_sq(&amplitudes);
        if (norm_sq - 1.0).abs() > tol || !norm_sq.is_finite() {
            return Err(Error::InvalidState(format!("squared norm {norm_sq} is not 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Normalises the given amplitudes; fails on a zero vector.
    pub fn from_unnormalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = norm_sq(&amplitudes).sqrt();
        if amplitudes.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalise a zero vector".into()));
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Ok(Self { amplitudes })
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[k] = ONE;
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> Operator {
        let n = self.dim();
        Operator::from_fn(n, |i, j| self.amplitudes[i] * self.amplitudes[j].conj())
    }

    /// Multiplies by a global phase.
    pub fn with_phase(&self, phase: Complex64) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|z| z * phase).collect(),
        }
    }
}

pub(crate) fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Conjugate-linear in the first argument.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Result<Complex64> {
    if a.len() != b.len() {
        return Err(Error::Shape {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| x.conj() * y).sum())
}

/// Statistical operator: self-adjoint, positive, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedState {
    matrix: Operator,
}

impl MixedState {
    pub fn new(matrix: Operator, tol: f64) -> Result<Self> {
        let deviation = matrix.hermiticity_deviation();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > tol {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let eig = hermitian_eigensystem(&matrix, tol)?;
        if let Some(&min) = eig.values.first() {
            if min < -tol {
                return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
            }
        }
        Ok(Self { matrix })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            matrix: psi.projector(),
        }
    }

    /// `Σ w_k |ψ_k⟩⟨ψ_k|` for positive weights summing to 1.
    pub fn from_ensemble(weights: &[f64], states: &[PureState]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::InvalidState("weights and states differ in length".into()));
        }
        if weights.iter().any(|&w| w.is_nan() || w <= 0.0) {
            return Err(Error::InvalidState("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("weights sum to {total}")));
        }
        let dim = states[0].dim();
        let mut matrix = Operator::zeros(dim);
        for (w, psi) in weights.iter().zip(states) {
            if psi.dim() != dim {
                return Err(Error::Shape {
                    expected: dim,
                    found: psi.dim(),
                });
            }
            let amps = psi.amplitudes();
            for i in 0..dim {
                for j in 0..dim {
                    matrix.data[i * dim + j] += amps[i] * amps[j].conj() * *w;
                }
            }
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }

    pub fn as_operator(&self) -> &Operator {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }
}
