//! N-fold tensor spaces: slot embeddings, permutation unitaries,
//! (anti)symmetrizers and sector-confined random states.
//!
//! Basis ordering: the product basis vector `|i₁ i₂ … i_N⟩` has index
//! `Σ_k i_k · d^(N−k)`, i.e. slot 1 is the most significant digit. This is the
//! ordering produced by `A₁ ⊗ A₂ ⊗ … ⊗ A_N`.
//!
//! Permutation convention: `U_π` moves the content of slot `k` to slot `π(k)`,
//! so `U_π(φ₁ ⊗ … ⊗ φ_N) = φ_{π⁻¹(1)} ⊗ … ⊗ φ_{π⁻¹(N)}`. With this choice
//! `U_π U_σ = U_{π∘σ}` and `U_π A_j U_π† = A_{π(j)}`.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{norm_sq, MixedState, Operator, PureState};
use crate::settings::DEFAULT_DIM_CAP;

/// Largest particle count for which `N!` is formed.
pub const MAX_FACTORIAL_N: usize = 12;

/// Which subspace of `ℋ^N` states are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Full,
    Bose,
    Fermi,
}

impl Sector {
    pub fn parity(self) -> Option<Parity> {
        match self {
            Sector::Full => None,
            Sector::Bose => Some(Parity::Symmetric),
            Sector::Fermi => Some(Parity::Antisymmetric),
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sector::Full => "full",
            Sector::Bose => "bose",
            Sector::Fermi => "fermi",
        })
    }
}

impl std::str::FromStr for Sector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Ok(Sector::Full),
            "bose" => Ok(Sector::Bose),
            "fermi" => Ok(Sector::Fermi),
            other => Err(Error::Parse(format!("unknown sector `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    /// Π⁺
    Symmetric,
    /// Π⁻
    Antisymmetric,
}

/// `N` similar particles, each with a `d`-dimensional state space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParticleSystem {
    n_particles: usize,
    single_dim: usize,
    sector: Sector,
    total_dim: usize,
}

impl ParticleSystem {
    pub fn new(n_particles: usize, single_dim: usize, sector: Sector) -> Result<Self> {
        Self::with_cap(n_particles, single_dim, sector, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(n_particles: usize, single_dim: usize, sector: Sector, cap: usize) -> Result<Self> {
        if n_particles == 0 {
            return Err(Error::Arity(0));
        }
        if single_dim == 0 {
            return Err(Error::Shape { expected: 1, found: 0 });
        }
        let mut total: usize = 1;
        for _ in 0..n_particles {
            total = total
                .checked_mul(single_dim)
                .filter(|&t| t <= cap)
                .ok_or(Error::DimensionCap {
                    requested: single_dim.saturating_pow(n_particles as u32),
                    cap,
                })?;
        }
        Ok(Self {
            n_particles,
            single_dim,
            sector,
            total_dim: total,
        })
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn single_dim(&self) -> usize {
        self.single_dim
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn with_sector(self, sector: Sector) -> Self {
        Self { sector, ..self }
    }

    fn check_slot(&self, slot: usize) -> Result<usize> {
        if slot == 0 || slot > self.n_particles {
            return Err(Error::SlotOutOfRange {
                slot,
                n_particles: self.n_particles,
            });
        }
        Ok(slot - 1)
    }

    /// Digits `(i₁, …, i_N)` of a product-basis index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.n_particles];
        for k in (0..self.n_particles).rev() {
            out[k] = index % self.single_dim;
            index /= self.single_dim;
        }
        out
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, &i| acc * self.single_dim + i)
    }

    /// Dimension of the configured sector.
    pub fn active_sector_dimension(&self) -> u64 {
        match self.sector.parity() {
            None => self.total_dim as u64,
            Some(parity) => sector_dimension(self, parity),
        }
    }
}

/// Bijection on `{1, …, N}`, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// One-line notation with 1-based images: `[2, 3, 1]` maps 1→2, 2→3, 3→1.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut zero_based = Vec::with_capacity(n);
        for &img in images {
            if img == 0 || img > n || seen[img - 1] {
                return Err(Error::Permutation(format!("{images:?} is not a bijection on 1..={n}")));
            }
            seen[img - 1] = true;
            zero_based.push(img - 1);
        }
        Ok(Self { images: zero_based })
    }

    /// Swap of slots `a` and `b` (1-based).
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::Permutation(format!("transposition ({a} {b}) outside 1..={n}")));
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a - 1, b - 1);
        Ok(Self { images })
    }

    /// Every permutation of `n` points, in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Self {
                images: current.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of a 1-based slot.
    pub fn image(&self, slot: usize) -> usize {
        self.images[slot - 1] + 1
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "permutations act on different sets");
        Self {
            images: other.images.iter().map(|&k| self.images[k]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.len()];
        for (k, &img) in self.images.iter().enumerate() {
            images[img] = k;
        }
        Self { images }
    }

    /// +1 for even, −1 for odd, from the cycle decomposition.
    pub fn sign(&self) -> i32 {
        let n = self.len();
        let mut visited = vec![false; n];
        let mut transpositions = 0;
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !visited[k] {
                visited[k] = true;
                k = self.images[k];
                len += 1;
            }
            transpositions += len - 1;
        }
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    fn check_arity(&self, system: &ParticleSystem) -> Result<()> {
        if self.len() != system.n_particles {
            return Err(Error::Permutation(format!(
                "permutation on {} points applied to {} particles",
                self.len(),
                system.n_particles
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_line().iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub fn factorial(n: usize) -> u64 {
    assert!(n <= MAX_FACTORIAL_N, "factorial argument above {MAX_FACTORIAL_N}");
    (1..=n as u64).product()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `1 ⊗ … ⊗ A ⊗ … ⊗ 1` with `A` at the 1-based `slot`.
pub fn embed_at_slot(a: &Operator, slot: usize, system: &ParticleSystem) -> Result<Operator> {
    let d = system.single_dim;
    if a.dim() != d {
        return Err(Error::Shape {
            expected: d,
            found: a.dim(),
        });
    }
    let k = system.check_slot(slot)?;
    let stride = d.pow((system.n_particles - 1 - k) as u32);
    let dim = system.total_dim;
    let mut out = Operator::zeros(dim).with_hbar_power(a.hbar_power());
    for row in 0..dim {
        let digit = (row / stride) % d;
        let base = row - digit * stride;
        for col_digit in 0..d {
            let v = a[(digit, col_digit)];
            if v != Complex64::new(0.0, 0.0) {
                out[(row, base + col_digit * stride)] = v;
            }
        }
    }
    Ok(out)
}

/// Basis map of `U_π`: `U_π |k⟩ = |map[k]⟩`.
pub fn permutation_basis_map(pi: &Permutation, system: &ParticleSystem) -> Result<Vec<usize>> {
    pi.check_arity(system)?;
    let mut out = Vec::with_capacity(system.total_dim);
    let mut moved = vec![0; system.n_particles];
    for index in 0..system.total_dim {
        let digits = system.digits(index);
        for (k, &digit) in digits.iter().enumerate() {
            moved[pi.images[k]] = digit;
        }
        out.push(system.index_of(&moved));
    }
    Ok(out)
}

pub fn permutation_unitary(pi: &Permutation, system: &ParticleSystem) -> Result<Operator> {
    let map = permutation_basis_map(pi, system)?;
    let mut out = Operator::zeros(system.total_dim);
    for (k, &target) in map.iter().enumerate() {
        out[(target, k)] = Complex64::new(1.0, 0.0);
    }
    Ok(out)
}

/// `Π± = (1/N!) Σ_π (±1)^π U_π`.
pub fn symmetrizer(system: &ParticleSystem, parity: Parity) -> Result<Operator> {
    let n = system.n_particles;
    if n > MAX_FACTORIAL_N {
        return Err(Error::Arity(n));
    }
    let weight = 1.0 / factorial(n) as f64;
    let mut out = Operator::zeros(system.total_dim);
    for pi in Permutation::all(n) {
        let sign = match parity {
            Parity::Symmetric => 1.0,
            Parity::Antisymmetric => pi.sign() as f64,
        };
        for (k, target) in permutation_basis_map(&pi, system)?.into_iter().enumerate() {
            out[(target, k)] += Complex64::new(sign * weight, 0.0);
        }
    }
    Ok(out)
}

/// `C(d+N−1, N)` for the symmetric sector, `C(d, N)` for the antisymmetric one.
pub fn sector_dimension(system: &ParticleSystem, parity: Parity) -> u64 {
    let (n, d) = (system.n_particles as u64, system.single_dim as u64);
    match parity {
        Parity::Symmetric => binomial(d + n - 1, n),
        Parity::Antisymmetric => binomial(d, n),
    }
}

/// Mixes a base seed with a stream index (splitmix64 finaliser) so that
/// independent work items get independent generators.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const MAX_SAMPLING_RETRIES: usize = 16;

/// Draws Haar-random rays from the configured sector.
///
/// Holds the sector projector so repeated draws do not rebuild it.
#[derive(Debug, Clone)]
pub struct SectorSampler {
    system: ParticleSystem,
    projector: Option<Operator>,
    sector_dim: u64,
}

impl SectorSampler {
    pub fn new(system: &ParticleSystem) -> Result<Self> {
        let sector_dim = system.active_sector_dimension();
        if sector_dim == 0 {
            return Err(Error::EmptySector);
        }
        let projector = match system.sector.parity() {
            None => None,
            Some(parity) => Some(symmetrizer(system, parity)?),
        };
        Ok(Self {
            system: *system,
            projector,
            sector_dim,
        })
    }

    pub fn sector_dim(&self) -> u64 {
        self.sector_dim
    }

    pub fn projector(&self) -> Option<&Operator> {
        self.projector.as_ref()
    }

    pub fn pure_state(&self, seed: u64) -> Result<PureState> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = self.system.total_dim;
        for _ in 0..MAX_SAMPLING_RETRIES {
            let raw: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let projected = match &self.projector {
                Some(p) => p.matvec(&raw)?,
                None => raw,
            };
            if norm_sq(&projected) > 1e-20 {
                return PureState::from_unnormalized(projected);
            }
        }
        Err(Error::Sampling {
            retries: MAX_SAMPLING_RETRIES,
        })
    }

    pub fn mixed_state(&self, rank: usize, seed: u64) -> Result<MixedState> {
        if rank == 0 || rank as u64 > self.sector_dim {
            return Err(Error::Rank {
                rank,
                sector_dim: self.sector_dim as usize,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states = (0..rank as u64)
            .map(|k| self.pure_state(derive_seed(seed, k)))
            .collect::<Result<Vec<_>>>()?;
        // weights in (0, 1], normalised
        let raw: Vec<f64> = (0..rank).map(|_| 1.0 - rng.random::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let fixed_total: f64 = weights.iter().sum();
        let mut weights = weights;
        // absorb rounding so the weights sum to 1 to machine precision
        let last = weights.len() - 1;
        weights[last] += 1.0 - fixed_total;
        MixedState::from_ensemble(&weights, &states)
    }
}

/// Random unit vector confined to the system's sector; deterministic per seed.
pub fn random_pure_state(system: &ParticleSystem, seed: u64) -> Result<PureState> {
    SectorSampler::new(system)?.pure_state(seed)
}

/// Random statistical operator `Σ w_k |ψ_k⟩⟨ψ_k|` with `rank` sector-confined terms.
pub fn random_mixed_state(system: &ParticleSystem, rank: usize, seed: u64) -> Result<MixedState> {
    SectorSampler::new(system)?.mixed_state(rank, seed)
}
