//! Operators, state spaces and relation checks for certifying that similar
//! quantum particles are weakly discernible.
//!
//! The crate is split by subsystem:
//!
//! * [`matrix`]: dense complex kernel (tensor products, commutators,
//!   Hermitian eigensystems, pure and mixed states).
//! * [`multiparticle`]: `N`-fold tensor spaces, permutation unitaries,
//!   symmetrizers and sector-confined sampling.
//! * [`spin`]: spin-`s` operators, pair total spin, coupled bases and
//!   Clebsch-Gordan coefficients.
//! * [`schwartz`]: exact polynomial × Gaussian wavefunctions with the
//!   momentum and position operators acting symbolically.
//! * [`discern`]: the commutator and total-spin relations, property
//!   possession, and weak-discernibility certification reports.
//!
//! Units: ħ = 1 throughout.

pub mod discern;
pub mod error;
pub mod matrix;
pub mod multiparticle;
pub mod report;
pub mod schwartz;
pub mod settings;
pub mod spin;

pub use discern::{
    certify_weak_discernibility, eigenproperty, evaluate_relation_c, evaluate_relation_t, permutation_invariance_check,
    relation_c_holds, relation_t_holds, CertifyConfig, RelationFamily, RelationOutcome, StateRef, TScope,
    TotalSpinRelation,
};
pub use error::{Error, Result};
pub use matrix::{
    commutator, hermitian_eigensystem, is_scalar_identity, kron, Eigensystem, Level, MixedState, Operator, PureState,
};
pub use multiparticle::{
    embed_at_slot, permutation_unitary, random_mixed_state, random_pure_state, sector_dimension, symmetrizer, Parity,
    ParticleSystem, Permutation, Sector,
};
pub use report::{Branch, DiscernibilityReport, Mode, PairResult, Relation, Verdict, Witness};
pub use schwartz::{
    commutator_pq_apply, random_wavefunction, ComplexRational, GaussianPolyWavefunction, SpinorWavefunction,
    Wavefunction,
};
pub use settings::{Tolerances, DEFAULT_DIM_CAP};
pub use spin::{
    casimir, clebsch_gordan, coupled_basis, pair_total_spin_squared, spin_operators, CoupledBasisVector, SpinLabel,
    SpinOperators,
};
