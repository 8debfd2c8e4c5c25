//! Exact model of wavefunction spaces on `ℝ^N`: a polynomial with
//! complex-rational coefficients times `Π_j exp(−q_j²/2)`.
//!
//! The class is closed under position multiplication `Q_a` and momentum
//! `P_a = −iħ ∂/∂q_a`, so both act exactly on coefficient maps:
//!
//! * `Q_a : p ↦ q_a·p`
//! * `P_a : p ↦ −iħ (∂p/∂q_a − q_a·p)` (the second term comes from the Gaussian)
//!
//! Inner products reduce to Gaussian moments
//! `∫ qⁿ e^{−q²} dq = √π (n−1)!! / 2^{n/2}` (zero for odd `n`), so they are
//! exact rationals times `π^{N/2}`.
//!
//! Each particle has a one-dimensional configuration coordinate `q_j`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::multiparticle::{derive_seed, factorial, Parity, ParticleSystem, Permutation, Sector, MAX_FACTORIAL_N};
use crate::spin::SpinLabel;

/// Exact complex rational.
pub type ComplexRational = Complex<BigRational>;

/// Default per-variable degree cap.
pub const DEFAULT_DEGREE_CAP: u32 = 32;

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn complex_rational(re: BigRational, im: BigRational) -> ComplexRational {
    Complex::new(re, im)
}

/// `−i` (that is `−iħ` with ħ = 1).
pub fn minus_i() -> ComplexRational {
    Complex::new(BigRational::zero(), -BigRational::one())
}

/// `c · z` with cheap paths for `±i` and real `c`, which dominate operator actions.
fn mul_complex(z: &ComplexRational, c: &ComplexRational) -> ComplexRational {
    if c.re.is_zero() && c.im.is_one() {
        Complex::new(-z.im.clone(), z.re.clone())
    } else if c.re.is_zero() && (-&c.im).is_one() {
        Complex::new(z.im.clone(), -z.re.clone())
    } else if c.im.is_zero() {
        Complex::new(&z.re * &c.re, &z.im * &c.re)
    } else {
        z * c
    }
}

fn complex_to_f64(z: &ComplexRational) -> Complex64 {
    Complex64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

/// Polynomial × Gaussian wavefunction of `n_particles` coordinates.
///
/// Terms map exponent tuples to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianPolyWavefunction {
    n_particles: usize,
    terms: BTreeMap<Vec<u32>, ComplexRational>,
    degree_cap: u32,
}

impl GaussianPolyWavefunction {
    pub fn zero(n_particles: usize) -> Self {
        assert!(n_particles > 0, "at least one coordinate is required");
        Self {
            n_particles,
            terms: BTreeMap::new(),
            degree_cap: DEFAULT_DEGREE_CAP,
        }
    }

    /// The bare Gaussian (`p = 1`).
    pub fn gaussian(n_particles: usize) -> Self {
        let mut out = Self::zero(n_particles);
        out.terms.insert(vec![0; n_particles], ComplexRational::one());
        out
    }

    pub fn from_terms(
        n_particles: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, ComplexRational)>,
    ) -> Result<Self> {
        let mut out = Self::zero(n_particles);
        for (exps, coeff) in terms {
            if exps.len() != n_particles {
                return Err(Error::Shape {
                    expected: n_particles,
                    found: exps.len(),
                });
            }
            out.check_degrees(&exps)?;
            out.add_term(exps, coeff);
        }
        Ok(out)
    }

    pub fn with_degree_cap(mut self, cap: u32) -> Result<Self> {
        self.degree_cap = cap;
        let degree = self.max_degree();
        if degree > cap {
            return Err(Error::DegreeCap { degree, cap });
        }
        Ok(self)
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, ComplexRational> {
        &self.terms
    }

    pub fn coefficient(&self, exps: &[u32]) -> ComplexRational {
        self.terms.get(exps).cloned().unwrap_or_else(ComplexRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest exponent of any single variable.
    pub fn max_degree(&self) -> u32 {
        self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, slot: usize) -> u32 {
        self.terms.keys().map(|e| e[slot - 1]).max().unwrap_or(0)
    }

    fn check_degrees(&self, exps: &[u32]) -> Result<()> {
        if let Some(&degree) = exps.iter().find(|&&e| e > self.degree_cap) {
            return Err(Error::DegreeCap {
                degree,
                cap: self.degree_cap,
            });
        }
        Ok(())
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

    fn add_term(&mut self, exps: Vec<u32>, coeff: ComplexRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn empty_like(&self) -> Self {
        Self {
            n_particles: self.n_particles,
            terms: BTreeMap::new(),
            degree_cap: self.degree_cap,
        }
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.n_particles != other.n_particles {
            return Err(Error::Shape {
                expected: self.n_particles,
                found: other.n_particles,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ComplexRational) -> Self {
        let mut out = self.empty_like();
        if c.is_zero() {
            return out;
        }
        for (e, coeff) in &self.terms {
            out.terms.insert(e.clone(), mul_complex(coeff, c));
        }
        out
    }

    /// `Q_a`: multiply by `q_a`.
    pub fn apply_q(&self, slot: usize) -> Result<Self> {
        let k = self.check_slot(slot)?;
        let mut out = self.empty_like();
        for (e, c) in &self.terms {
            let mut raised = e.clone();
            raised[k] += 1;
            out.check_degrees(&raised)?;
            out.terms.insert(raised, c.clone());
        }
        Ok(out)
    }

    /// `∂/∂q_a` of the full wavefunction, as a polynomial: `∂p/∂q_a − q_a·p`.
    fn derivative(&self, slot: usize) -> Result<Self> {
        let k = self.check_slot(slot)?;
        let mut out = self.empty_like();
        for (e, c) in &self.terms {
            if e[k] > 0 {
                let mut lowered = e.clone();
                lowered[k] -= 1;
                let factor = BigRational::from_integer(BigInt::from(e[k]));
                out.add_term(lowered, Complex::new(&c.re * &factor, &c.im * &factor));
            }
            let mut raised = e.clone();
            raised[k] += 1;
            out.check_degrees(&raised)?;
            out.add_term(raised, -c.clone());
        }
        Ok(out)
    }

    /// `P_a = −iħ ∂/∂q_a`.
    pub fn apply_p(&self, slot: usize) -> Result<Self> {
        Ok(self.derivative(slot)?.scale(&minus_i()))
    }

    /// Renames coordinate `q_k` to `q_{π(k)}`.
    pub fn permute_coordinates(&self, pi: &Permutation) -> Result<Self> {
        if pi.len() != self.n_particles {
            return Err(Error::Permutation(format!(
                "permutation on {} points applied to {} coordinates",
                pi.len(),
                self.n_particles
            )));
        }
        let mut out = self.empty_like();
        for (e, c) in &self.terms {
            let mut moved = vec![0; self.n_particles];
            for (k, &exp) in e.iter().enumerate() {
                moved[pi.image(k + 1) - 1] = exp;
            }
            out.terms.insert(moved, c.clone());
        }
        Ok(out)
    }

    /// Tensor product: coordinates of `other` follow those of `self`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n_particles + other.n_particles);
        out.degree_cap = self.degree_cap.max(other.degree_cap);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let mut e = e1.clone();
                e.extend_from_slice(e2);
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    /// `⟨self|other⟩ = value · π^(N/2)`; returns the exact rational `value`.
    pub fn inner_product_exact(&self, other: &Self) -> Result<ComplexRational> {
        self.check_same_space(other)?;
        let mut moments = MomentTable::default();
        let mut total = ComplexRational::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let mut weight = BigRational::one();
                for (a, b) in e1.iter().zip(e2) {
                    let m = moments.get(a + b);
                    if m.is_zero() {
                        weight = BigRational::zero();
                        break;
                    }
                    weight *= m;
                }
                if !weight.is_zero() {
                    total += c1.conj() * c2.clone() * Complex::new(weight, BigRational::zero());
                }
            }
        }
        Ok(total)
    }

    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        let exact = self.inner_product_exact(other)?;
        Ok(complex_to_f64(&exact) * std::f64::consts::PI.powf(self.n_particles as f64 / 2.0))
    }
}

/// `∫ qⁿ e^{−q²} dq / √π`, cached.
#[derive(Default)]
struct MomentTable {
    values: Vec<BigRational>,
}

impl MomentTable {
    fn get(&mut self, n: u32) -> BigRational {
        let n = n as usize;
        while self.values.len() <= n {
            let k = self.values.len();
            let next = if k == 0 {
                BigRational::one()
            } else if k % 2 == 1 {
                BigRational::zero()
            } else {
                // M(k) = M(k−2)·(k−1)/2
                self.values[k - 2].clone() * rational(k as i64 - 1, 2)
            };
            self.values.push(next);
        }
        self.values[n].clone()
    }
}

/// Gaussian moment `∫ qⁿ e^{−q²} dq` in floating point.
pub fn gaussian_moment(n: u32) -> f64 {
    MomentTable::default().get(n).to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI.sqrt()
}

/// `(2s+1)^N` wavefunction components, indexed like the product spin basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinorWavefunction {
    spin: SpinLabel,
    n_particles: usize,
    components: Vec<GaussianPolyWavefunction>,
}

impl SpinorWavefunction {
    pub fn new(spin: SpinLabel, n_particles: usize, components: Vec<GaussianPolyWavefunction>) -> Result<Self> {
        let expected = spin_space_dim(spin, n_particles)?;
        if components.len() != expected {
            return Err(Error::Shape {
                expected,
                found: components.len(),
            });
        }
        if let Some(bad) = components.iter().find(|c| c.n_particles != n_particles) {
            return Err(Error::Shape {
                expected: n_particles,
                found: bad.n_particles,
            });
        }
        Ok(Self {
            spin,
            n_particles,
            components,
        })
    }

    /// A spinless wavefunction.
    pub fn scalar(psi: GaussianPolyWavefunction) -> Self {
        Self {
            spin: SpinLabel::from_doubled(0),
            n_particles: psi.n_particles,
            components: vec![psi],
        }
    }

    pub fn zero(spin: SpinLabel, n_particles: usize) -> Result<Self> {
        let count = spin_space_dim(spin, n_particles)?;
        Ok(Self {
            spin,
            n_particles,
            components: vec![GaussianPolyWavefunction::zero(n_particles); count],
        })
    }

    pub fn spin(&self) -> SpinLabel {
        self.spin
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn components(&self) -> &[GaussianPolyWavefunction] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(GaussianPolyWavefunction::is_zero)
    }

    pub fn max_degree(&self) -> u32 {
        self.components.iter().map(|c| c.max_degree()).max().unwrap_or(0)
    }

    fn map_components(
        &self,
        f: impl Fn(&GaussianPolyWavefunction) -> Result<GaussianPolyWavefunction>,
    ) -> Result<Self> {
        Ok(Self {
            spin: self.spin,
            n_particles: self.n_particles,
            components: self.components.iter().map(f).collect::<Result<_>>()?,
        })
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.spin != other.spin || self.n_particles != other.n_particles {
            return Err(Error::Shape {
                expected: self.components.len(),
                found: other.components.len(),
            });
        }
        Ok(())
    }

    pub fn apply_p(&self, slot: usize) -> Result<Self> {
        self.map_components(|c| c.apply_p(slot))
    }

    pub fn apply_q(&self, slot: usize) -> Result<Self> {
        self.map_components(|c| c.apply_q(slot))
    }

    pub fn scale(&self, c: &ComplexRational) -> Self {
        Self {
            components: self.components.iter().map(|p| p.scale(c)).collect(),
            spin: self.spin,
            n_particles: self.n_particles,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect::<Result<_>>()?,
            spin: self.spin,
            n_particles: self.n_particles,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.sub(b))
                .collect::<Result<_>>()?,
            spin: self.spin,
            n_particles: self.n_particles,
        })
    }

    /// Sum of component inner products, exact part (multiply by `π^(N/2)`).
    pub fn inner_product_exact(&self, other: &Self) -> Result<ComplexRational> {
        self.check_same_space(other)?;
        let mut total = ComplexRational::zero();
        for (a, b) in self.components.iter().zip(&other.components) {
            total += a.inner_product_exact(b)?;
        }
        Ok(total)
    }

    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        let exact = self.inner_product_exact(other)?;
        Ok(complex_to_f64(&exact) * std::f64::consts::PI.powf(self.n_particles as f64 / 2.0))
    }

    /// `U_π ψ`: moves both the coordinate and the spin index of slot `k` to slot `π(k)`.
    pub fn permute(&self, pi: &Permutation) -> Result<Self> {
        let system = ParticleSystem::new(self.n_particles, self.spin.dim(), Sector::Full)?;
        let map = crate::multiparticle::permutation_basis_map(pi, &system)?;
        let mut components = vec![GaussianPolyWavefunction::zero(self.n_particles); self.components.len()];
        for (k, comp) in self.components.iter().enumerate() {
            components[map[k]] = comp.permute_coordinates(pi)?;
        }
        Ok(Self {
            components,
            spin: self.spin,
            n_particles: self.n_particles,
        })
    }

    /// `Π± ψ = (1/N!) Σ_π (±1)^π U_π ψ`, exactly.
    pub fn symmetrize(&self, parity: Parity) -> Result<Self> {
        if self.n_particles > MAX_FACTORIAL_N {
            return Err(Error::Arity(self.n_particles));
        }
        let mut acc = Self::zero(self.spin, self.n_particles)?;
        for pi in Permutation::all(self.n_particles) {
            let moved = self.permute(&pi)?;
            acc = match (parity, pi.sign()) {
                (Parity::Antisymmetric, -1) => acc.sub(&moved)?,
                _ => acc.add(&moved)?,
            };
        }
        let norm = Complex::new(rational(1, factorial(self.n_particles) as i64), BigRational::zero());
        Ok(acc.scale(&norm))
    }

    /// Tensor product of single-particle spinors; factor `k` occupies slot `k`.
    pub fn product(factors: &[SpinorWavefunction]) -> Result<Self> {
        let first = factors.first().ok_or(Error::Arity(0))?;
        let spin = first.spin;
        for f in factors {
            if f.n_particles != 1 || f.spin != spin {
                return Err(Error::InvalidState(
                    "product factors must be single-particle spinors of equal spin".into(),
                ));
            }
        }
        let mut acc = first.clone();
        for f in &factors[1..] {
            let mut components = Vec::with_capacity(acc.components.len() * f.components.len());
            for a in &acc.components {
                for b in &f.components {
                    components.push(a.tensor(b));
                }
            }
            acc = Self {
                spin,
                n_particles: acc.n_particles + 1,
                components,
            };
        }
        Ok(acc)
    }

    /// Structured text listing: a header line, then one line per nonzero term
    /// `term <component> <exponents…> : <re> <im>` with rationals as `p/q`.
    pub fn to_text(&self) -> String {
        let mut out = format!("spinor n_particles={} two_s={}\n", self.n_particles, self.spin.two_s());
        for (k, comp) in self.components.iter().enumerate() {
            for (exps, c) in &comp.terms {
                let e: Vec<String> = exps.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(out, "term {k} {} : {} {}", e.join(" "), c.re, c.im);
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty wavefunction listing".into()))?;
        let mut n_particles = None;
        let mut two_s = None;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("spinor") {
            return Err(Error::Parse(format!("bad header `{header}`")));
        }
        for field in fields {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field `{field}`")))?;
            let value: usize = value
                .parse()
                .map_err(|_| Error::Parse(format!("bad number in `{field}`")))?;
            match key {
                "n_particles" => n_particles = Some(value),
                "two_s" => two_s = Some(value as u32),
                _ => return Err(Error::Parse(format!("unknown header field `{key}`"))),
            }
        }
        let (n_particles, two_s) = match (n_particles, two_s) {
            (Some(n), Some(t)) if n > 0 => (n, t),
            _ => return Err(Error::Parse("header needs n_particles and two_s".into())),
        };
        let spin = SpinLabel::from_doubled(two_s);
        let mut out = Self::zero(spin, n_particles)?;
        for line in lines {
            let (lhs, rhs) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("missing `:` in `{line}`")))?;
            let mut lhs = lhs.split_whitespace();
            if lhs.next() != Some("term") {
                return Err(Error::Parse(format!("expected `term` in `{line}`")));
            }
            let nums = lhs
                .map(|t| t.parse::<u32>().map_err(|_| Error::Parse(format!("bad integer `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            if nums.len() != n_particles + 1 {
                return Err(Error::Parse(format!("wrong exponent count in `{line}`")));
            }
            let component = nums[0] as usize;
            if component >= out.components.len() {
                return Err(Error::Parse(format!("component {component} out of range")));
            }
            let parts: Vec<&str> = rhs.split_whitespace().collect();
            let [re, im] = parts[..] else {
                return Err(Error::Parse(format!("expected `re im` in `{line}`")));
            };
            let parse = |t: &str| {
                t.parse::<BigRational>()
                    .map_err(|_| Error::Parse(format!("bad rational `{t}`")))
            };
            let coeff = Complex::new(parse(re)?, parse(im)?);
            let target = &mut out.components[component];
            target.check_degrees(&nums[1..])?;
            target.add_term(nums[1..].to_vec(), coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for SpinorWavefunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn spin_space_dim(spin: SpinLabel, n_particles: usize) -> Result<usize> {
    if n_particles == 0 {
        return Err(Error::Arity(0));
    }
    spin.dim().checked_pow(n_particles as u32).ok_or(Error::DimensionCap {
        requested: usize::MAX,
        cap: crate::settings::DEFAULT_DIM_CAP,
    })
}

/// Operations shared by scalar and spinor wavefunctions.
pub trait Wavefunction: Sized + Clone + PartialEq {
    fn n_particles(&self) -> usize;
    fn apply_p(&self, slot: usize) -> Result<Self>;
    fn apply_q(&self, slot: usize) -> Result<Self>;
    fn sub(&self, other: &Self) -> Result<Self>;
    fn scale(&self, c: &ComplexRational) -> Self;
    fn is_zero(&self) -> bool;
    fn inner_product(&self, other: &Self) -> Result<Complex64>;
}

impl Wavefunction for GaussianPolyWavefunction {
    fn n_particles(&self) -> usize {
        self.n_particles
    }
    fn apply_p(&self, slot: usize) -> Result<Self> {
        GaussianPolyWavefunction::apply_p(self, slot)
    }
    fn apply_q(&self, slot: usize) -> Result<Self> {
        GaussianPolyWavefunction::apply_q(self, slot)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        GaussianPolyWavefunction::sub(self, other)
    }
    fn scale(&self, c: &ComplexRational) -> Self {
        GaussianPolyWavefunction::scale(self, c)
    }
    fn is_zero(&self) -> bool {
        GaussianPolyWavefunction::is_zero(self)
    }
    fn inner_product(&self, other: &Self) -> Result<Complex64> {
        GaussianPolyWavefunction::inner_product(self, other)
    }
}

impl Wavefunction for SpinorWavefunction {
    fn n_particles(&self) -> usize {
        self.n_particles
    }
    fn apply_p(&self, slot: usize) -> Result<Self> {
        SpinorWavefunction::apply_p(self, slot)
    }
    fn apply_q(&self, slot: usize) -> Result<Self> {
        SpinorWavefunction::apply_q(self, slot)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        SpinorWavefunction::sub(self, other)
    }
    fn scale(&self, c: &ComplexRational) -> Self {
        SpinorWavefunction::scale(self, c)
    }
    fn is_zero(&self) -> bool {
        SpinorWavefunction::is_zero(self)
    }
    fn inner_product(&self, other: &Self) -> Result<Complex64> {
        SpinorWavefunction::inner_product(self, other)
    }
}

pub fn apply_p<W: Wavefunction>(psi: &W, slot: usize) -> Result<W> {
    psi.apply_p(slot)
}

pub fn apply_q<W: Wavefunction>(psi: &W, slot: usize) -> Result<W> {
    psi.apply_q(slot)
}

/// `[P_a, Q_b] ψ = P_a(Q_b ψ) − Q_b(P_a ψ)`.
pub fn commutator_pq_apply<W: Wavefunction>(psi: &W, a: usize, b: usize) -> Result<W> {
    let pq = psi.apply_q(b)?.apply_p(a)?;
    let qp = psi.apply_p(a)?.apply_q(b)?;
    pq.sub(&qp)
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    rational(rng.random_range(-9..=9), rng.random_range(1..=9))
}

fn random_component(rng: &mut ChaCha8Rng, n_particles: usize, max_degree: u32) -> GaussianPolyWavefunction {
    let mut out = GaussianPolyWavefunction::zero(n_particles);
    let n_terms = rng.random_range(0..=3);
    for _ in 0..n_terms {
        let exps: Vec<u32> = (0..n_particles).map(|_| rng.random_range(0..=max_degree)).collect();
        let coeff = Complex::new(random_rational(rng), random_rational(rng));
        out.add_term(exps, coeff);
    }
    out
}

/// Random nonzero spinor wavefunction with sparse rational support and
/// per-variable degree at most `max_degree`; deterministic per seed.
pub fn random_wavefunction(
    n_particles: usize,
    max_degree: u32,
    spin: SpinLabel,
    seed: u64,
) -> Result<SpinorWavefunction> {
    if max_degree > DEFAULT_DEGREE_CAP {
        return Err(Error::DegreeCap {
            degree: max_degree,
            cap: DEFAULT_DEGREE_CAP,
        });
    }
    let count = spin_space_dim(spin, n_particles)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let components: Vec<_> = (0..count)
            .map(|_| random_component(&mut rng, n_particles, max_degree))
            .collect();
        let psi = SpinorWavefunction {
            spin,
            n_particles,
            components,
        };
        if !psi.is_zero() {
            return Ok(psi);
        }
    }
}

const MAX_SECTOR_RETRIES: u64 = 16;

/// Random wavefunction projected into a bose/fermi sector (exactly).
pub fn random_wavefunction_in_sector(
    n_particles: usize,
    max_degree: u32,
    spin: SpinLabel,
    sector: Sector,
    seed: u64,
) -> Result<SpinorWavefunction> {
    let Some(parity) = sector.parity() else {
        return random_wavefunction(n_particles, max_degree, spin, seed);
    };
    for attempt in 0..MAX_SECTOR_RETRIES {
        let raw = random_wavefunction(n_particles, max_degree, spin, derive_seed(seed, attempt))?;
        let projected = raw.symmetrize(parity)?;
        if !projected.is_zero() {
            return Ok(projected);
        }
    }
    Err(Error::Sampling {
        retries: MAX_SECTOR_RETRIES as usize,
    })
}
