//! Discerning relations and weak-discernibility certification.
//!
//! Two relations are decided here:
//!
//! * **T** (total spin): `T(a, b)` iff `(𝐒_a + 𝐒_b)² φ = 4s(s+1)ħ² φ` for all
//!   states. For `a = b` the operator is `4𝐒_a² = 4s(s+1)ħ²·1`; for `a ≠ b`
//!   its largest eigenvalue is `2s(2s+1)ħ²`, strictly below the target.
//! * **C** (commutator): `C(a, b)` iff `[P_a, Q_b] Ψ = −iħ Ψ` for all
//!   wavefunctions. Decided exactly on polynomial × Gaussian wavefunctions.
//!
//! A state possesses the property `⟨A, a⟩` only when it is an eigenstate of
//! `A` with eigenvalue `a`, and never with two values at once. A relation
//! instance on a state therefore fails either because the state has another
//! value ([`Branch::PropertyDiffers`]) or because it has no value
//! ([`Branch::NoProperty`]); both branches are recorded.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{
    hermitian_eigensystem, inner, is_scalar_identity, scalar_identity_deviation, MixedState, Operator, PureState,
};
use crate::multiparticle::{derive_seed, permutation_basis_map, ParticleSystem, Permutation, Sector, SectorSampler};
use crate::report::{
    Branch, ComplexValue, DiscernibilityReport, LevelEvidence, Mode, PairResult, Relation, SampleCounts,
    SampleEvidence, SpectrumEvidence, Verdict, Witness,
};
use crate::schwartz::{
    commutator_pq_apply, minus_i, random_wavefunction, random_wavefunction_in_sector, ComplexRational,
    GaussianPolyWavefunction, SpinorWavefunction, Wavefunction, DEFAULT_DEGREE_CAP,
};
use crate::settings::{Tolerances, DEFAULT_DIM_CAP};
use crate::spin::{pair_total_spin_squared, SpinLabel};

/// A quantitative property `⟨A, a⟩`: a named magnitude and its value.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantitativeProperty {
    pub operator: String,
    pub value: Complex64,
    pub hbar_power: i32,
}

/// A finite-dimensional state argument.
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a PureState),
    Mixed(&'a MixedState),
}

impl<'a> From<&'a PureState> for StateRef<'a> {
    fn from(psi: &'a PureState) -> Self {
        StateRef::Pure(psi)
    }
}

impl<'a> From<&'a MixedState> for StateRef<'a> {
    fn from(w: &'a MixedState) -> Self {
        StateRef::Mixed(w)
    }
}

impl StateRef<'_> {
    fn dim(&self) -> usize {
        match self {
            StateRef::Pure(p) => p.dim(),
            StateRef::Mixed(w) => w.dim(),
        }
    }
}

/// Value of `A` possessed by the state, if any.
///
/// Pure: `a = ⟨ψ|Aψ⟩`, returned iff `‖Aψ − aψ‖ ≤ tol`.
/// Mixed: `a = tr(AW)/tr(W)`, returned iff `‖AW − aW‖_max ≤ tol`.
pub fn eigenproperty(a: &Operator, state: StateRef<'_>, tol: f64) -> Result<Option<Complex64>> {
    if a.dim() != state.dim() {
        return Err(Error::Shape {
            expected: a.dim(),
            found: state.dim(),
        });
    }
    match state {
        StateRef::Pure(psi) => {
            let image = a.apply_pure(psi)?;
            let value = inner(psi.amplitudes(), &image)?;
            let residual: f64 = image
                .iter()
                .zip(psi.amplitudes())
                .map(|(x, y)| (x - value * y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            Ok((residual <= tol).then_some(value))
        }
        StateRef::Mixed(w) => {
            let aw = a.apply_mixed(w)?;
            let value = aw.trace() / w.trace();
            let residual = aw.max_abs_diff(&w.as_operator().scale(value))?;
            Ok((residual <= tol).then_some(value))
        }
    }
}

/// Property possessed by the state for a named magnitude.
pub fn possessed_property(
    name: &str,
    a: &Operator,
    state: StateRef<'_>,
    tol: f64,
) -> Result<Option<QuantitativeProperty>> {
    Ok(eigenproperty(a, state, tol)?.map(|value| QuantitativeProperty {
        operator: name.to_string(),
        value,
        hbar_power: a.hbar_power(),
    }))
}

/// Decision of one relation instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationOutcome {
    pub holds: bool,
    pub branch: Branch,
    pub value: Option<Complex64>,
}

/// The state argument of a T instance.
#[derive(Debug, Clone, Copy)]
pub enum TScope<'a> {
    /// "for every state": decided as an operator identity.
    AllStates,
    Pure(&'a PureState),
    Mixed(&'a MixedState),
}

/// Cached `(𝐒_a + 𝐒_b)²` for every pair of slots of a spin system.
#[derive(Debug, Clone)]
pub struct TotalSpinRelation {
    spin: SpinLabel,
    system: ParticleSystem,
    tolerances: Tolerances,
    operators: Vec<Operator>,
}

impl TotalSpinRelation {
    pub fn new(spin: SpinLabel, system: &ParticleSystem, tolerances: Tolerances) -> Result<Self> {
        if spin.two_s() == 0 {
            return Err(Error::DegenerateSpin);
        }
        let n = system.n_particles();
        let mut operators: Vec<Operator> = Vec::with_capacity(n * n);
        for a in 1..=n {
            for b in 1..=n {
                if b < a {
                    // (𝐒_a + 𝐒_b)² is symmetric in its slots
                    let mirrored = operators[(b - 1) * n + (a - 1)].clone();
                    operators.push(mirrored);
                } else {
                    operators.push(pair_total_spin_squared(spin, a, b, system)?);
                }
            }
        }
        Ok(Self {
            spin,
            system: *system,
            tolerances,
            operators,
        })
    }

    pub fn spin(&self) -> SpinLabel {
        self.spin
    }

    pub fn system(&self) -> &ParticleSystem {
        &self.system
    }

    /// `4s(s+1)` in units of ħ².
    pub fn target(&self) -> f64 {
        self.spin.doubled_casimir_target() as f64
    }

    fn slot_index(&self, a: usize, b: usize) -> Result<usize> {
        let n = self.system.n_particles();
        for slot in [a, b] {
            if slot == 0 || slot > n {
                return Err(Error::SlotOutOfRange { slot, n_particles: n });
            }
        }
        Ok((a - 1) * n + (b - 1))
    }

    pub fn operator(&self, a: usize, b: usize) -> Result<&Operator> {
        Ok(&self.operators[self.slot_index(a, b)?])
    }

    pub fn evaluate(&self, a: usize, b: usize, scope: TScope<'_>) -> Result<RelationOutcome> {
        decide_total_spin(self.operator(a, b)?, self.target(), &self.tolerances, scope)
    }
}

fn decide_total_spin(k: &Operator, target: f64, tolerances: &Tolerances, scope: TScope<'_>) -> Result<RelationOutcome> {
    let target = Complex64::new(target, 0.0);
    let state = match scope {
        TScope::AllStates => {
            let holds = is_scalar_identity(k, target, tolerances.abs);
            return Ok(RelationOutcome {
                holds,
                branch: if holds {
                    Branch::ScalarIdentity
                } else {
                    Branch::NotScalarIdentity
                },
                value: holds.then_some(target),
            });
        }
        TScope::Pure(psi) => StateRef::Pure(psi),
        TScope::Mixed(w) => StateRef::Mixed(w),
    };
    let tol = tolerances.rel * k.max_abs().max(1.0);
    Ok(match eigenproperty(k, state, tol)? {
        None => RelationOutcome {
            holds: false,
            branch: Branch::NoProperty,
            value: None,
        },
        Some(value) if (value - target).norm() <= tol => RelationOutcome {
            holds: true,
            branch: Branch::PropertyMatches,
            value: Some(value),
        },
        Some(value) => RelationOutcome {
            holds: false,
            branch: Branch::PropertyDiffers,
            value: Some(value),
        },
    })
}

/// Decides `T(a, b)` and reports which branch fired.
pub fn evaluate_relation_t(
    a: usize,
    b: usize,
    scope: TScope<'_>,
    spin: SpinLabel,
    system: &ParticleSystem,
    tolerances: &Tolerances,
) -> Result<RelationOutcome> {
    if spin.two_s() == 0 {
        return Err(Error::DegenerateSpin);
    }
    if system.single_dim() != spin.dim() {
        return Err(Error::Shape {
            expected: spin.dim(),
            found: system.single_dim(),
        });
    }
    let k = pair_total_spin_squared(spin, a, b, system)?;
    decide_total_spin(&k, spin.doubled_casimir_target() as f64, tolerances, scope)
}

pub fn relation_t_holds(
    a: usize,
    b: usize,
    scope: TScope<'_>,
    spin: SpinLabel,
    system: &ParticleSystem,
    tolerances: &Tolerances,
) -> Result<bool> {
    Ok(evaluate_relation_t(a, b, scope, spin, system, tolerances)?.holds)
}

/// Exact decision of `C(a, b)` on one wavefunction.
pub fn evaluate_relation_c<W: Wavefunction>(a: usize, b: usize, psi: &W) -> Result<RelationOutcome> {
    let image = commutator_pq_apply(psi, a, b)?;
    Ok(classify_commutator_image(&image, &psi.scale(&minus_i())))
}

/// Decides `C(a, b)` for every ordered pair of slots, in row-major order.
///
/// Shares `P_a ψ`, `Q_b ψ` and `−iψ` across pairs; each instance is still the
/// exact comparison of `P_a(Q_b ψ) − Q_b(P_a ψ)` with `−iψ`.
pub fn evaluate_relation_c_all_pairs<W: Wavefunction>(psi: &W) -> Result<Vec<RelationOutcome>> {
    let n = psi.n_particles();
    let p_psi = (1..=n).map(|a| psi.apply_p(a)).collect::<Result<Vec<_>>>()?;
    let q_psi = (1..=n).map(|b| psi.apply_q(b)).collect::<Result<Vec<_>>>()?;
    let target = psi.scale(&minus_i());
    let mut out = Vec::with_capacity(n * n);
    for a in 1..=n {
        for b in 1..=n {
            let image = q_psi[b - 1].apply_p(a)?.sub(&p_psi[a - 1].apply_q(b)?)?;
            out.push(classify_commutator_image(&image, &target));
        }
    }
    Ok(out)
}

fn classify_commutator_image<W: Wavefunction>(image: &W, target: &W) -> RelationOutcome {
    if image == target {
        RelationOutcome {
            holds: true,
            branch: Branch::PropertyMatches,
            value: Some(Complex64::new(0.0, -1.0)),
        }
    } else if image.is_zero() {
        RelationOutcome {
            holds: false,
            branch: Branch::PropertyDiffers,
            value: Some(Complex64::new(0.0, 0.0)),
        }
    } else {
        RelationOutcome {
            holds: false,
            branch: Branch::NoProperty,
            value: None,
        }
    }
}

/// `C(a, b)` on one wavefunction.
pub fn relation_c_holds<W: Wavefunction>(a: usize, b: usize, psi: &W) -> Result<bool> {
    Ok(evaluate_relation_c(a, b, psi)?.holds)
}

/// `C(a, b)` on every wavefunction of a sample set.
pub fn relation_c_holds_for_all<W: Wavefunction>(a: usize, b: usize, samples: &[W]) -> Result<bool> {
    for psi in samples {
        if !relation_c_holds(a, b, psi)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `C(a, b)` on a mixture `Σ w_k |Ψ_k⟩⟨Ψ_k|` of exact wavefunctions.
///
/// `[P_a, Q_b] W = c W` is decided member-wise: the commutator is a scalar on
/// every member with one common value, or the mixture has no value.
pub fn evaluate_relation_c_mixed<W: Wavefunction>(a: usize, b: usize, members: &[W]) -> Result<RelationOutcome> {
    let outcomes = members
        .iter()
        .map(|psi| evaluate_relation_c(a, b, psi))
        .collect::<Result<Vec<_>>>()?;
    combine_members(&outcomes)
}

/// [`evaluate_relation_c_mixed`] for every ordered pair, in row-major order.
pub fn evaluate_relation_c_mixed_all_pairs<W: Wavefunction>(members: &[W]) -> Result<Vec<RelationOutcome>> {
    let per_member = members
        .iter()
        .map(evaluate_relation_c_all_pairs)
        .collect::<Result<Vec<_>>>()?;
    let n_pairs = per_member.first().map_or(0, Vec::len);
    (0..n_pairs)
        .map(|k| combine_members(&per_member.iter().map(|m| m[k]).collect::<Vec<_>>()))
        .collect()
}

fn combine_members(outcomes: &[RelationOutcome]) -> Result<RelationOutcome> {
    let first = outcomes
        .first()
        .ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
    if outcomes.iter().all(|o| o.value.is_some() && o.value == first.value) {
        Ok(*first)
    } else {
        Ok(RelationOutcome {
            holds: false,
            branch: Branch::NoProperty,
            value: None,
        })
    }
}

/// Exact check of `[P_a, Q_b] = c·1` on every monomial `q^e · G` with each
/// exponent at most `max_degree`. These span every polynomial × Gaussian
/// wavefunction of that degree, so by linearity the check covers all of them.
///
/// Returns the first monomial violating the identity, if any.
pub fn commutator_identity_counterexample(
    n_particles: usize,
    max_degree: u32,
    a: usize,
    b: usize,
    c: &ComplexRational,
) -> Result<Option<Vec<u32>>> {
    let count = (max_degree as usize + 1).pow(n_particles as u32);
    let found = (0..count)
        .into_par_iter()
        .map(|mut index| -> Result<Option<Vec<u32>>> {
            let mut exps = vec![0u32; n_particles];
            for e in exps.iter_mut().rev() {
                *e = (index % (max_degree as usize + 1)) as u32;
                index /= max_degree as usize + 1;
            }
            let monomial = GaussianPolyWavefunction::from_terms(n_particles, [(exps.clone(), ComplexRational::one())])?;
            let image = commutator_pq_apply(&monomial, a, b)?;
            Ok((image != monomial.scale(c)).then_some(exps))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().next())
}

/// Covariance of a relation's defining operators under permutations.
pub enum RelationFamily<'a> {
    /// `K_ab = (𝐒_a + 𝐒_b)²`.
    TotalSpin(&'a TotalSpinRelation),
    /// `K_ab = [P_a, Q_b]`, checked on probe wavefunctions.
    Commutator { probes: &'a [SpinorWavefunction] },
}

/// True iff `U_π K_ab U_π† = K_{π(a)π(b)}` for every pair of slots.
pub fn permutation_invariance_check(
    family: &RelationFamily<'_>,
    pi: &Permutation,
    system: &ParticleSystem,
) -> Result<bool> {
    let n = system.n_particles();
    match family {
        RelationFamily::TotalSpin(relation) => {
            let map = permutation_basis_map(pi, system)?;
            let tol = relation.tolerances.abs;
            for a in 1..=n {
                for b in 1..=n {
                    let conjugated = relation.operator(a, b)?.conjugate_by_basis_permutation(&map)?;
                    let target = relation.operator(pi.image(a), pi.image(b))?;
                    if conjugated.max_abs_diff(target)? > tol {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        RelationFamily::Commutator { probes } => {
            let inverse = pi.inverse();
            for psi in probes.iter() {
                if psi.n_particles() != n {
                    return Err(Error::Shape {
                        expected: n,
                        found: psi.n_particles(),
                    });
                }
                let pulled_back = psi.permute(&inverse)?;
                for a in 1..=n {
                    for b in 1..=n {
                        let lhs = commutator_pq_apply(&pulled_back, a, b)?.permute(pi)?;
                        let rhs = commutator_pq_apply(psi, pi.image(a), pi.image(b))?;
                        if lhs != rhs {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Settings of a certification run.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifyConfig {
    pub n_particles: usize,
    pub spin: SpinLabel,
    pub sector: Sector,
    pub pure_samples: usize,
    pub mixed_samples: usize,
    pub mixed_rank: usize,
    /// Per-variable degree of random wavefunctions (C only).
    pub max_degree: u32,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub dim_cap: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            n_particles: 2,
            spin: SpinLabel::from_doubled(1),
            sector: Sector::Full,
            pure_samples: 1000,
            mixed_samples: 200,
            mixed_rank: 2,
            max_degree: 6,
            seed: 0,
            tolerances: Tolerances::default(),
            dim_cap: DEFAULT_DIM_CAP,
        }
    }
}

const PURE_STREAM: u64 = 0;
const MIXED_STREAM: u64 = 1;
const PROBE_STREAM: u64 = 2;

/// Runs the full certification of `relation` and assembles the report.
///
/// Reflexivity is checked on every slot, failure on every ordered pair of
/// distinct slots, symmetry from the two failures `¬R(a,b)` and `¬R(b,a)`,
/// and permutation invariance for every permutation of the slots.
pub fn certify_weak_discernibility(relation: Relation, config: &CertifyConfig) -> Result<DiscernibilityReport> {
    if config.n_particles < 2 {
        return Err(Error::Arity(config.n_particles));
    }
    match relation {
        Relation::T => certify_total_spin(config),
        Relation::C => certify_commutator(config),
    }
}

/// Per-pair accumulator.
#[derive(Default)]
struct PairTally {
    checked: usize,
    holding: usize,
    branches: BTreeMap<Branch, usize>,
    first_failure: Option<Witness>,
    first_success: Option<Witness>,
}

impl PairTally {
    fn record(&mut self, outcome: &RelationOutcome, witness: impl FnOnce() -> (String, Option<usize>, Option<u64>)) {
        self.checked += 1;
        *self.branches.entry(outcome.branch).or_default() += 1;
        let slot = if outcome.holds {
            self.holding += 1;
            &mut self.first_success
        } else {
            &mut self.first_failure
        };
        if slot.is_none() {
            let (kind, index, seed) = witness();
            *slot = Some(Witness {
                kind,
                index,
                seed,
                branch: outcome.branch,
                value: outcome.value.map(ComplexValue::from),
                detail: None,
            });
        }
    }

    fn evidence(&self) -> SampleEvidence {
        SampleEvidence {
            checked: self.checked,
            holding: self.holding,
            branches: self.branches.iter().map(|(b, n)| (*b, *n)).collect(),
        }
    }
}

fn ordered_pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|a| (1..=n).map(move |b| (a, b))).collect()
}

fn assemble_pairs(
    n: usize,
    tallies: &[PairTally],
    identity: &[(bool, Option<f64>)],
    extra_failure_witness: impl Fn(usize, usize) -> Option<Witness>,
) -> Vec<PairResult> {
    let pairs = ordered_pairs(n);
    let fails = |idx: usize| -> bool {
        let tally = &tallies[idx];
        !identity[idx].0 && tally.holding == 0
    };
    pairs
        .iter()
        .enumerate()
        .map(|(idx, &(a, b))| {
            let tally = &tallies[idx];
            let (operator_identity, operator_deviation) = identity[idx];
            if a == b {
                PairResult {
                    a,
                    b,
                    reflexive: Some(operator_identity && tally.holding == tally.checked),
                    off_diagonal_fails: None,
                    symmetric: None,
                    witness: tally.first_failure.clone(),
                    operator_identity,
                    operator_deviation,
                    samples: tally.evidence(),
                }
            } else {
                let mirror = (b - 1) * n + (a - 1);
                PairResult {
                    a,
                    b,
                    reflexive: None,
                    off_diagonal_fails: Some(fails(idx)),
                    // ¬R(a,b) ∧ ¬R(b,a) ⇒ (R(a,b) ⇔ R(b,a))
                    symmetric: Some(fails(idx) && fails(mirror)),
                    witness: tally.first_failure.clone().or_else(|| extra_failure_witness(a, b)),
                    operator_identity,
                    operator_deviation,
                    samples: tally.evidence(),
                }
            }
        })
        .collect()
}

fn certify_total_spin(config: &CertifyConfig) -> Result<DiscernibilityReport> {
    let spin = config.spin;
    if spin.two_s() == 0 {
        return Err(Error::DegenerateSpin);
    }
    let n = config.n_particles;
    let system = ParticleSystem::with_cap(n, spin.dim(), config.sector, config.dim_cap)?;
    let tol = config.tolerances;
    let relation = TotalSpinRelation::new(spin, &system, tol)?;
    let pairs = ordered_pairs(n);
    let target = relation.target();

    // operator-identity route
    let identity: Vec<(bool, Option<f64>)> = pairs
        .iter()
        .map(|&(a, b)| {
            let k = relation.operator(a, b)?;
            let deviation = scalar_identity_deviation(k, Complex64::new(target, 0.0));
            Ok((deviation <= tol.abs, Some(deviation)))
        })
        .collect::<Result<_>>()?;

    // spectral certificate: no state reaches the target off the diagonal
    let mut spectral_max: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut levels_12 = Vec::new();
    for &(a, b) in pairs.iter().filter(|(a, b)| a < b) {
        let eig = hermitian_eigensystem(relation.operator(a, b)?, tol.abs)?;
        let max = *eig.values.last().expect("nonempty spectrum");
        spectral_max.insert((a, b), max);
        if (a, b) == (1, 2) {
            levels_12 = eig.levels(tol.level_grouping);
        }
    }
    let spectral_margin = tol.rel * target.max(1.0);
    let spectrally_excluded = |a: usize, b: usize| -> bool {
        let key = (a.min(b), a.max(b));
        spectral_max
            .get(&key)
            .is_some_and(|&max| max < target - spectral_margin)
    };

    // sampling routes
    let mut skipped = None;
    let mut tallies: Vec<PairTally> = pairs.iter().map(|_| PairTally::default()).collect();
    let mut effective_rank = 0;
    match SectorSampler::new(&system) {
        Err(Error::EmptySector) => {
            skipped = Some(format!(
                "{} sector is empty for N = {n}, d = {}",
                config.sector,
                spin.dim()
            ));
        }
        Err(e) => return Err(e),
        Ok(sampler) => {
            effective_rank = config.mixed_rank.clamp(1, sampler.sector_dim() as usize);
            let pure_outcomes = (0..config.pure_samples)
                .into_par_iter()
                .map(|k| -> Result<(u64, Vec<RelationOutcome>)> {
                    let seed = derive_seed(derive_seed(config.seed, PURE_STREAM), k as u64);
                    let psi = sampler.pure_state(seed)?;
                    let outcomes = pairs
                        .iter()
                        .map(|&(a, b)| relation.evaluate(a, b, TScope::Pure(&psi)))
                        .collect::<Result<_>>()?;
                    Ok((seed, outcomes))
                })
                .collect::<Result<Vec<_>>>()?;
            let mixed_outcomes = (0..config.mixed_samples)
                .into_par_iter()
                .map(|k| -> Result<(u64, Vec<RelationOutcome>)> {
                    let seed = derive_seed(derive_seed(config.seed, MIXED_STREAM), k as u64);
                    let w = sampler.mixed_state(effective_rank, seed)?;
                    let outcomes = pairs
                        .iter()
                        .map(|&(a, b)| relation.evaluate(a, b, TScope::Mixed(&w)))
                        .collect::<Result<_>>()?;
                    Ok((seed, outcomes))
                })
                .collect::<Result<Vec<_>>>()?;
            for (kind, batch) in [("pure", pure_outcomes), ("mixed", mixed_outcomes)] {
                for (index, (seed, outcomes)) in batch.into_iter().enumerate() {
                    for (tally, outcome) in tallies.iter_mut().zip(&outcomes) {
                        tally.record(outcome, || (kind.to_string(), Some(index), Some(seed)));
                    }
                }
            }
        }
    }

    let spectral_witness = |a: usize, b: usize| -> Option<Witness> {
        let key = (a.min(b), a.max(b));
        spectral_max.get(&key).map(|&max| Witness {
            kind: "spectral".into(),
            index: None,
            seed: None,
            branch: Branch::NotScalarIdentity,
            value: Some(ComplexValue { re: max, im: 0.0 }),
            detail: Some(format!("largest eigenvalue {max} below target {target}")),
        })
    };
    let mut pair_results = assemble_pairs(n, &tallies, &identity, spectral_witness);
    for p in pair_results.iter_mut().filter(|p| p.a != p.b) {
        let excluded = spectrally_excluded(p.a, p.b);
        p.off_diagonal_fails = p.off_diagonal_fails.map(|f| f && excluded);
    }
    // recompute symmetry with the spectral check folded in
    let fails: BTreeMap<(usize, usize), bool> = pair_results
        .iter()
        .filter_map(|p| p.off_diagonal_fails.map(|f| ((p.a, p.b), f)))
        .collect();
    for p in pair_results.iter_mut().filter(|p| p.a != p.b) {
        p.symmetric = Some(fails[&(p.a, p.b)] && fails[&(p.b, p.a)]);
    }

    let family = RelationFamily::TotalSpin(&relation);
    let mut permutation_invariant = true;
    for pi in Permutation::all(n) {
        if !permutation_invariance_check(&family, &pi, &system)? {
            permutation_invariant = false;
            break;
        }
    }

    let mut mode = vec![Mode::OperatorIdentity];
    if skipped.is_none() && config.pure_samples > 0 {
        mode.push(Mode::PureSampling);
    }
    if skipped.is_none() && config.mixed_samples > 0 {
        mode.push(Mode::MixedSampling);
    }
    let verdict = DiscernibilityReport::derive_verdict(&pair_results, permutation_invariant, true);
    let gap = spin.doubled_casimir_target() - spin.max_pair_eigenvalue();

    Ok(DiscernibilityReport {
        relation: Relation::T,
        mode,
        n_particles: n,
        two_s: spin.two_s(),
        sector: config.sector,
        samples: SampleCounts {
            pure: if skipped.is_some() { 0 } else { config.pure_samples },
            mixed: if skipped.is_some() { 0 } else { config.mixed_samples },
            mixed_rank: effective_rank,
            skipped,
        },
        seed: config.seed,
        tolerances: tol,
        pairs: pair_results,
        permutation_invariant,
        spectrum: Some(SpectrumEvidence {
            unit_power: 2,
            target: ComplexValue { re: target, im: 0.0 },
            reflexive_value: ComplexValue { re: target, im: 0.0 },
            off_diagonal_levels: levels_12
                .iter()
                .map(|l| LevelEvidence {
                    value: l.value,
                    multiplicity: Some(l.multiplicity),
                })
                .collect(),
            off_diagonal_max: spectral_max.get(&(1, 2)).copied(),
            exact_gap: Some(gap),
        }),
        verdict,
        timestamp: None,
    })
}

/// Single-particle spinor `φ` and the symmetric product `φ ⊗ … ⊗ φ`.
fn bosonic_product_probe(config: &CertifyConfig) -> Result<SpinorWavefunction> {
    let phi = random_wavefunction(
        1,
        config.max_degree,
        config.spin,
        derive_seed(config.seed, PROBE_STREAM),
    )?;
    SpinorWavefunction::product(&vec![phi; config.n_particles])
}

fn certify_commutator(config: &CertifyConfig) -> Result<DiscernibilityReport> {
    let n = config.n_particles;
    let spin = config.spin;
    if config.max_degree >= DEFAULT_DEGREE_CAP {
        return Err(Error::DegreeCap {
            degree: config.max_degree + 1,
            cap: DEFAULT_DEGREE_CAP,
        });
    }
    let pairs = ordered_pairs(n);
    let c = minus_i();

    // operator identity on the spanning monomials
    let identity: Vec<(bool, Option<f64>)> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let holds = commutator_identity_counterexample(n, config.max_degree, a, b, &c)?.is_none();
            Ok((holds, None))
        })
        .collect::<Result<_>>()?;
    // off the diagonal the commutator is the zero operator on the same span
    let zero = ComplexRational::default();
    let off_diagonal_zero = pairs
        .par_iter()
        .filter(|(a, b)| a != b)
        .map(|&(a, b)| Ok(commutator_identity_counterexample(n, config.max_degree, a, b, &zero)?.is_none()))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|z| z);

    let sample = |stream: u64, k: usize| -> Result<(u64, SpinorWavefunction)> {
        let seed = derive_seed(derive_seed(config.seed, stream), k as u64);
        Ok((
            seed,
            random_wavefunction_in_sector(n, config.max_degree, spin, config.sector, seed)?,
        ))
    };

    let pure_outcomes = (0..config.pure_samples)
        .into_par_iter()
        .map(|k| -> Result<(u64, Vec<RelationOutcome>)> {
            let (seed, psi) = sample(PURE_STREAM, k)?;
            let outcomes = evaluate_relation_c_all_pairs(&psi)?;
            Ok((seed, outcomes))
        })
        .collect::<Result<Vec<_>>>()?;
    let rank = config.mixed_rank.max(1);
    let mixed_outcomes = (0..config.mixed_samples)
        .into_par_iter()
        .map(|k| -> Result<(u64, Vec<RelationOutcome>)> {
            let seed = derive_seed(derive_seed(config.seed, MIXED_STREAM), k as u64);
            let members = (0..rank)
                .map(|r| {
                    random_wavefunction_in_sector(
                        n,
                        config.max_degree,
                        spin,
                        config.sector,
                        derive_seed(seed, r as u64),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            let outcomes = evaluate_relation_c_mixed_all_pairs(&members)?;
            Ok((seed, outcomes))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut tallies: Vec<PairTally> = pairs.iter().map(|_| PairTally::default()).collect();
    for (kind, batch) in [("symbolic", pure_outcomes), ("symbolic_mixed", mixed_outcomes)] {
        for (index, (seed, outcomes)) in batch.into_iter().enumerate() {
            for (tally, outcome) in tallies.iter_mut().zip(&outcomes) {
                tally.record(outcome, || (kind.to_string(), Some(index), Some(seed)));
            }
        }
    }
    // symmetric product state φ ⊗ … ⊗ φ
    let boson = bosonic_product_probe(config)?;
    for (tally, outcome) in tallies.iter_mut().zip(evaluate_relation_c_all_pairs(&boson)?) {
        tally.record(&outcome, || {
            (
                "bosonic_product".to_string(),
                None,
                Some(derive_seed(config.seed, PROBE_STREAM)),
            )
        });
    }

    let pair_results = assemble_pairs(n, &tallies, &identity, |_, _| None);

    // relabeling covariance is degree-independent, so low-degree probes suffice
    let small_phi = random_wavefunction(1, 1, spin, derive_seed(config.seed, PROBE_STREAM + 2))?;
    let probes = vec![
        random_wavefunction(n, 2, spin, derive_seed(config.seed, PROBE_STREAM + 1))?,
        SpinorWavefunction::product(&vec![small_phi; n])?,
    ];
    let family = RelationFamily::Commutator { probes: &probes };
    let system = ParticleSystem::new(n, spin.dim(), Sector::Full)?;
    let mut permutation_invariant = true;
    for pi in Permutation::all(n) {
        if !permutation_invariance_check(&family, &pi, &system)? {
            permutation_invariant = false;
            break;
        }
    }

    let verdict = DiscernibilityReport::derive_verdict(&pair_results, permutation_invariant, true);
    Ok(DiscernibilityReport {
        relation: Relation::C,
        mode: vec![Mode::OperatorIdentity, Mode::SymbolicExact],
        n_particles: n,
        two_s: spin.two_s(),
        sector: config.sector,
        samples: SampleCounts {
            pure: config.pure_samples,
            mixed: config.mixed_samples,
            mixed_rank: rank,
            skipped: None,
        },
        seed: config.seed,
        tolerances: config.tolerances,
        pairs: pair_results,
        permutation_invariant,
        spectrum: Some(SpectrumEvidence {
            unit_power: 1,
            target: ComplexValue { re: 0.0, im: -1.0 },
            reflexive_value: ComplexValue { re: 0.0, im: -1.0 },
            off_diagonal_levels: if off_diagonal_zero {
                vec![LevelEvidence {
                    value: 0.0,
                    multiplicity: None,
                }]
            } else {
                Vec::new()
            },
            off_diagonal_max: None,
            exact_gap: None,
        }),
        verdict,
        timestamp: None,
    })
}

/// Whether a finished report satisfies the weak-discernibility pattern.
pub fn is_weakly_discerning(report: &DiscernibilityReport) -> bool {
    report.verdict == Verdict::WeaklyDiscerning
}
