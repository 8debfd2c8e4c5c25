//! Spin-`s` operators on `ℂ^(2s+1)`, pair total spin, the coupled basis
//! `|s; S, M⟩` and Clebsch-Gordan coefficients.
//!
//! Spins are stored doubled (`two_s = 2s`) so half-integers stay exact. The
//! single-particle basis is ordered by descending magnetic number:
//! index `k` carries `m = s − k`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigensystem, Operator, PureState};
use crate::multiparticle::{embed_at_slot, ParticleSystem, Sector};
use crate::settings::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinLabel {
    two_s: u32,
}

impl SpinLabel {
    pub const fn from_doubled(two_s: u32) -> Self {
        Self { two_s }
    }

    pub fn two_s(self) -> u32 {
        self.two_s
    }

    pub fn dim(self) -> usize {
        self.two_s as usize + 1
    }

    pub fn is_half_integer(self) -> bool {
        self.two_s % 2 == 1
    }

    pub fn value(self) -> f64 {
        self.two_s as f64 / 2.0
    }

    /// `s(s+1)`.
    pub fn casimir_value(self) -> f64 {
        let t = self.two_s as f64;
        t * (t + 2.0) / 4.0
    }

    /// `4s(s+1)`, the eigenvalue of `(S_a + S_a)²` in units of ħ². Always an integer.
    pub fn doubled_casimir_target(self) -> u64 {
        let t = self.two_s as u64;
        t * (t + 2)
    }

    /// `2s(2s+1)`, the largest eigenvalue of `(S_a + S_b)²` for `a ≠ b`.
    pub fn max_pair_eigenvalue(self) -> u64 {
        let t = self.two_s as u64;
        t * (t + 1)
    }

    /// Doubled magnetic numbers `2m` in basis order `s, s−1, …, −s`.
    pub fn doubled_m_values(self) -> impl Iterator<Item = i32> {
        let t = self.two_s as i32;
        (0..=t).map(move |k| t - 2 * k)
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_half_integer() {
            write!(f, "{}/2", self.two_s)
        } else {
            write!(f, "{}", self.two_s / 2)
        }
    }
}

/// `(S_x, S_y, S_z)` in units of ħ.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperators {
    pub x: Operator,
    pub y: Operator,
    pub z: Operator,
}

impl SpinOperators {
    pub fn components(&self) -> [&Operator; 3] {
        [&self.x, &self.y, &self.z]
    }
}

/// `S_z = diag(s, …, −s)`, `S_x = (S₊+S₋)/2`, `S_y = (S₊−S₋)/(2i)` with
/// `⟨m+1|S₊|m⟩ = √(s(s+1) − m(m+1))`.
pub fn spin_operators(s: SpinLabel) -> SpinOperators {
    let raise = raising_operator(s);
    let lower = raise.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let x = (&raise + &lower).scale(half);
    let y = (&raise - &lower).scale(Complex64::new(0.0, -0.5));
    let z = Operator::diagonal(
        &s.doubled_m_values()
            .map(|two_m| Complex64::new(two_m as f64 / 2.0, 0.0))
            .collect::<Vec<_>>(),
    );
    SpinOperators {
        x: x.with_hbar_power(1),
        y: y.with_hbar_power(1),
        z: z.with_hbar_power(1),
    }
}

/// `S₊` in units of ħ.
pub fn raising_operator(s: SpinLabel) -> Operator {
    let dim = s.dim();
    let t = s.two_s as i64;
    let mut out = Operator::zeros(dim);
    for k in 1..dim {
        // column k has m = s − k; it is raised into row k − 1
        let two_m = t - 2 * k as i64;
        let four_times = t * (t + 2) - two_m * (two_m + 2);
        out[(k - 1, k)] = Complex64::new((four_times as f64 / 4.0).sqrt(), 0.0);
    }
    out.with_hbar_power(1)
}

/// `𝐒² = S_x² + S_y² + S_z²`.
pub fn casimir(s: SpinLabel) -> Operator {
    let ops = spin_operators(s);
    let sq = |a: &Operator| a * a;
    &(&sq(&ops.x) + &sq(&ops.y)) + &sq(&ops.z)
}

fn check_spin_system(s: SpinLabel, system: &ParticleSystem) -> Result<()> {
    if system.single_dim() != s.dim() {
        return Err(Error::Shape {
            expected: s.dim(),
            found: system.single_dim(),
        });
    }
    Ok(())
}

/// `(𝐒_a + 𝐒_b)² = Σ_w (S_w^(a) + S_w^(b))²` on the `N`-particle space.
pub fn pair_total_spin_squared(s: SpinLabel, a: usize, b: usize, system: &ParticleSystem) -> Result<Operator> {
    check_spin_system(s, system)?;
    let ops = spin_operators(s);
    let mut total = Operator::zeros(system.total_dim()).with_hbar_power(2);
    for component in ops.components() {
        let sum = &embed_at_slot(component, a, system)? + &embed_at_slot(component, b, system)?;
        total = &total + &(&sum * &sum);
    }
    Ok(total)
}

/// Total `S_z = Σ_j S_z^(j)`.
pub fn total_spin_z(s: SpinLabel, system: &ParticleSystem) -> Result<Operator> {
    check_spin_system(s, system)?;
    let sz = spin_operators(s).z;
    let mut total = Operator::zeros(system.total_dim()).with_hbar_power(1);
    for slot in 1..=system.n_particles() {
        total = &total + &embed_at_slot(&sz, slot, system)?;
    }
    Ok(total)
}

fn total_lowering(s: SpinLabel, system: &ParticleSystem) -> Result<Operator> {
    let lower = raising_operator(s).adjoint();
    let mut total = Operator::zeros(system.total_dim());
    for slot in 1..=system.n_particles() {
        total = &total + &embed_at_slot(&lower, slot, system)?;
    }
    Ok(total)
}

/// Simultaneous eigenvector of pair `𝐒²` and total `S_z` on `ℂ^(2s+1) ⊗ ℂ^(2s+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledBasisVector {
    /// `2S`
    pub two_total: u32,
    /// `2M`
    pub two_m: i32,
    pub vector: PureState,
}

/// Builds `{|s; S, M⟩}` by diagonalising `𝐒²`, then total `S_z` inside each
/// `𝐒²` eigenspace. Phases follow Condon–Shortley: the `M = S` vector has a
/// positive component on `|s, s⟩ ⊗ |s, S−s⟩` and lower vectors come from
/// applying the total lowering operator.
///
/// Output is ordered by `S` ascending, and `M` descending within each `S`.
pub fn coupled_basis(s: SpinLabel, tol: &Tolerances) -> Result<Vec<CoupledBasisVector>> {
    let system = ParticleSystem::new(2, s.dim(), Sector::Full)?;
    let total_sq = pair_total_spin_squared(s, 1, 2, &system)?;
    let sz = total_spin_z(s, &system)?;
    let lowering = total_lowering(s, &system)?;
    let dim = system.total_dim();

    let eig = hermitian_eigensystem(&total_sq, tol.abs)?;
    let levels = eig.level_indices(tol.level_grouping);
    let mut out = Vec::with_capacity(dim);

    for indices in levels {
        let lambda = indices.iter().map(|&k| eig.values[k]).sum::<f64>() / indices.len() as f64;
        let total = ((1.0 + 4.0 * lambda.max(0.0)).sqrt() - 1.0) / 2.0;
        let two_total = (2.0 * total).round() as i64;
        let s_of = two_total as f64 / 2.0;
        if two_total < 0
            || two_total % 2 != 0
            || (lambda - s_of * (s_of + 1.0)).abs() > tol.rel * total_sq.max_abs().max(1.0)
            || indices.len() != two_total as usize + 1
        {
            return Err(Error::Diagonalization(format!(
                "level {lambda} with multiplicity {} is not S(S+1) with 2S+1 states",
                indices.len()
            )));
        }
        let two_total = two_total as u32;

        // restrict S_z to the level and diagonalise
        let basis: Vec<&PureState> = indices.iter().map(|&k| &eig.vectors[k]).collect();
        let sz_images: Vec<Vec<Complex64>> = basis.iter().map(|v| sz.apply_pure(v)).collect::<Result<_>>()?;
        let restricted = Operator::from_fn(basis.len(), |i, j| {
            crate::matrix::inner(basis[i].amplitudes(), &sz_images[j]).expect("same dimension")
        });
        let sub = hermitian_eigensystem(&restricted, tol.abs.max(1e-9))?;

        let mut vectors: Vec<(i32, Vec<Complex64>)> = Vec::with_capacity(basis.len());
        for (m_value, coeffs) in sub.pairs() {
            let two_m = (2.0 * m_value).round();
            if (2.0 * m_value - two_m).abs() > 1e-6 {
                return Err(Error::Diagonalization(format!(
                    "S_z eigenvalue {m_value} is not a half-integer"
                )));
            }
            let mut amps = vec![Complex64::new(0.0, 0.0); dim];
            for (c, v) in coeffs.amplitudes().iter().zip(&basis) {
                for (a, x) in amps.iter_mut().zip(v.amplitudes()) {
                    *a += c * x;
                }
            }
            vectors.push((two_m as i32, amps));
        }
        vectors.sort_by_key(|v| std::cmp::Reverse(v.0));
        let expected_m: Vec<i32> = (0..=two_total as i32).map(|k| two_total as i32 - 2 * k).collect();
        if vectors.iter().map(|v| v.0).collect::<Vec<_>>() != expected_m {
            return Err(Error::Diagonalization(format!(
                "S = {}: magnetic numbers do not run from S to -S",
                two_total / 2
            )));
        }

        // Condon–Shortley phases
        // m1 = s is product index 0 in the first factor
        let anchor = s.two_s() as usize - two_total as usize / 2;
        let mut previous: Option<Vec<Complex64>> = None;
        for (two_m, mut amps) in vectors {
            let reference = match &previous {
                None => amps[anchor].conj(),
                Some(prev) => crate::matrix::inner(&amps, &lowering.matvec(prev)?)?,
            };
            if reference.norm() < 1e-8 {
                return Err(Error::Diagonalization(format!(
                    "no phase reference for S = {}, 2M = {two_m}",
                    two_total / 2
                )));
            }
            let phase = reference / reference.norm();
            for a in &mut amps {
                *a *= phase;
            }
            previous = Some(amps.clone());
            let vector = PureState::from_unnormalized(amps)?;
            check_coupled_vector(&vector, two_total, two_m, &total_sq, &sz, tol)?;
            out.push(CoupledBasisVector {
                two_total,
                two_m,
                vector,
            });
        }
    }
    Ok(out)
}

fn check_coupled_vector(
    v: &PureState,
    two_total: u32,
    two_m: i32,
    total_sq: &Operator,
    sz: &Operator,
    tol: &Tolerances,
) -> Result<()> {
    let big_s = two_total as f64 / 2.0;
    let checks = [(total_sq, big_s * (big_s + 1.0)), (sz, two_m as f64 / 2.0)];
    for (op, value) in checks {
        let image = op.apply_pure(v)?;
        let residual = image
            .iter()
            .zip(v.amplitudes())
            .map(|(a, x)| (a - x * value).norm())
            .fold(0.0, f64::max);
        if residual > tol.rel * op.max_abs().max(1.0) {
            return Err(Error::Diagonalization(format!(
                "residual {residual:e} for S = {big_s}, 2M = {two_m}"
            )));
        }
    }
    Ok(())
}

fn factorial_f64(n: i64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn check_projection(two_j: i64, two_m: i64, what: &str) -> Result<()> {
    if two_m.abs() > two_j || (two_j - two_m) % 2 != 0 {
        return Err(Error::Domain(format!("{what}: 2m = {two_m} invalid for 2j = {two_j}")));
    }
    Ok(())
}

/// `⟨s, m1; s, m2 | S, M⟩` in the Condon–Shortley convention (Racah's closed form).
///
/// All quantum numbers are passed doubled.
pub fn clebsch_gordan(s: SpinLabel, two_total: u32, two_m_total: i32, two_m1: i32, two_m2: i32) -> Result<f64> {
    let tj = s.two_s() as i64;
    let big = two_total as i64;
    if big > 2 * tj || big % 2 != 0 {
        return Err(Error::Domain(format!("2S = {big} not in {{0, 2, …, {}}}", 2 * tj)));
    }
    check_projection(tj, two_m1 as i64, "m1")?;
    check_projection(tj, two_m2 as i64, "m2")?;
    check_projection(big, two_m_total as i64, "M")?;
    if two_m_total != two_m1 + two_m2 {
        return Ok(0.0);
    }
    let (m1, m2, mm) = (two_m1 as i64, two_m2 as i64, two_m_total as i64);
    // every combination below is an even doubled quantity
    let h = |x: i64| x / 2;
    let f = |x: i64| factorial_f64(h(x));

    let pre = (big + 1) as f64 * f(big) * f(big) * f(2 * tj - big) / f(2 * tj + big + 2);
    let pre = pre.sqrt() * (f(big + mm) * f(big - mm) * f(tj - m1) * f(tj + m1) * f(tj - m2) * f(tj + m2)).sqrt();

    let mut sum = 0.0;
    for k in 0..=h(2 * tj + big) {
        let k2 = 2 * k;
        let args = [
            2 * tj - big - k2,
            tj - m1 - k2,
            tj + m2 - k2,
            big - tj + m1 + k2,
            big - tj - m2 + k2,
        ];
        if args.iter().any(|&a| a < 0) {
            continue;
        }
        let denom = factorial_f64(k) * args.iter().map(|&a| f(a)).product::<f64>();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / denom;
    }
    Ok(pre * sum)
}

/// Square matrix of coefficients: rows follow [`coupled_basis`] ordering
/// (`S` ascending, `M` descending), columns the product basis `(m1, m2)`.
pub fn clebsch_gordan_matrix(s: SpinLabel) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::with_capacity(s.dim() * s.dim());
    for two_total in (0..=2 * s.two_s()).step_by(2) {
        for k in 0..=two_total as i32 {
            let two_m = two_total as i32 - 2 * k;
            let mut row = Vec::with_capacity(s.dim() * s.dim());
            for m1 in s.doubled_m_values() {
                for m2 in s.doubled_m_values() {
                    row.push(clebsch_gordan(s, two_total, two_m, m1, m2)?);
                }
            }
            rows.push(row);
        }
    }
    Ok(rows)
}
