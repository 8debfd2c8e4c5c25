//! Certification report: the serialisable record of one run.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::multiparticle::Sector;
use crate::settings::Tolerances;

/// The two discerning relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    /// Commutator relation `[P_a, Q_b] Ψ = −iħ Ψ`.
    C,
    /// Total-spin relation `(𝐒_a + 𝐒_b)² φ = 4s(s+1)ħ² φ`.
    T,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::C => "C",
            Relation::T => "T",
        })
    }
}

impl std::str::FromStr for Relation {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "C" | "c" => Ok(Relation::C),
            "T" | "t" => Ok(Relation::T),
            other => Err(crate::Error::Parse(format!("unknown relation `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    OperatorIdentity,
    PureSampling,
    MixedSampling,
    SymbolicExact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    WeaklyDiscerning,
    Violated,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::WeaklyDiscerning => "weakly_discerning",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Which branch decided a relation instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// The defining operator equals the target scalar.
    ScalarIdentity,
    /// The defining operator differs from the target scalar.
    NotScalarIdentity,
    /// The state has the property with the target value.
    PropertyMatches,
    /// The state has the property with another value; single-valuedness rules
    /// the target value out.
    PropertyDiffers,
    /// The state is not an eigenstate, so it has no value for the magnitude.
    NoProperty,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<num_complex::Complex64> for ComplexValue {
    fn from(z: num_complex::Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// State that decided a pair, or the spectral certificate when no sampled state is available.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// `pure`, `mixed`, `symbolic`, `symbolic_mixed`, `bosonic_product`, `monomial` or `spectral`.
    pub kind: String,
    pub index: Option<usize>,
    pub seed: Option<u64>,
    pub branch: Branch,
    pub value: Option<ComplexValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleEvidence {
    pub checked: usize,
    pub holding: usize,
    /// Number of samples decided by each branch.
    pub branches: Vec<(Branch, usize)>,
}

/// Evidence for one ordered pair of slots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairResult {
    pub a: usize,
    pub b: usize,
    /// `R(a, a)` holds (diagonal entries only).
    pub reflexive: Option<bool>,
    /// `R(a, b)` fails (off-diagonal entries only).
    pub off_diagonal_fails: Option<bool>,
    /// `R(a, b) ⇔ R(b, a)`, via both failures (off-diagonal entries only).
    pub symmetric: Option<bool>,
    pub witness: Option<Witness>,
    pub operator_identity: bool,
    /// `max |K_ab − target·1|` for matrix relations.
    pub operator_deviation: Option<f64>,
    pub samples: SampleEvidence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelEvidence {
    pub value: f64,
    pub multiplicity: Option<usize>,
}

/// Spectral facts backing the verdict, in units of `ħ^unit_power`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEvidence {
    pub unit_power: i32,
    /// Value the relation requires (`4s(s+1)` for T, `−i` for C).
    pub target: ComplexValue,
    /// Value of the diagonal defining operator (a scalar).
    pub reflexive_value: ComplexValue,
    /// Spectrum of `K_12`.
    pub off_diagonal_levels: Vec<LevelEvidence>,
    pub off_diagonal_max: Option<f64>,
    /// `4s(s+1) − 2s(2s+1) = 2s`, computed in integers (T only).
    pub exact_gap: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleCounts {
    pub pure: usize,
    pub mixed: usize,
    pub mixed_rank: usize,
    /// Reason sampling was skipped, if it was.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscernibilityReport {
    pub relation: Relation,
    pub mode: Vec<Mode>,
    pub n_particles: usize,
    pub two_s: u32,
    pub sector: Sector,
    pub samples: SampleCounts,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub pairs: Vec<PairResult>,
    pub permutation_invariant: bool,
    pub spectrum: Option<SpectrumEvidence>,
    pub verdict: Verdict,
    pub timestamp: Option<String>,
}

impl DiscernibilityReport {
    /// Verdict implied by the recorded evidence.
    ///
    /// `operator_identity_available` is false for relations that can only be
    /// sampled; passing evidence then yields `Inconclusive`.
    pub fn derive_verdict(
        pairs: &[PairResult],
        permutation_invariant: bool,
        operator_identity_available: bool,
    ) -> Verdict {
        let reflexive = pairs.iter().filter_map(|p| p.reflexive).all(|r| r);
        let fails = pairs.iter().filter_map(|p| p.off_diagonal_fails).all(|r| r);
        let symmetric = pairs.iter().filter_map(|p| p.symmetric).all(|r| r);
        let has_diagonal = pairs.iter().any(|p| p.reflexive.is_some());
        let has_off = pairs.iter().any(|p| p.off_diagonal_fails.is_some());
        if !(reflexive && fails && symmetric && permutation_invariant && has_diagonal && has_off) {
            Verdict::Violated
        } else if operator_identity_available {
            Verdict::WeaklyDiscerning
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn pair(&self, a: usize, b: usize) -> Option<&PairResult> {
        self.pairs.iter().find(|p| p.a == a && p.b == b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: usize, b: usize, ok: bool) -> PairResult {
        PairResult {
            a,
            b,
            reflexive: (a == b).then_some(ok),
            off_diagonal_fails: (a != b).then_some(ok),
            symmetric: (a != b).then_some(ok),
            witness: None,
            operator_identity: a == b,
            operator_deviation: None,
            samples: SampleEvidence::default(),
        }
    }

    fn pairs(bad: Option<(usize, usize)>) -> Vec<PairResult> {
        (1..=2)
            .flat_map(|a| (1..=2).map(move |b| (a, b)))
            .map(|(a, b)| pair(a, b, bad != Some((a, b))))
            .collect()
    }

    #[test]
    fn verdicts() {
        assert_eq!(
            DiscernibilityReport::derive_verdict(&pairs(None), true, true),
            Verdict::WeaklyDiscerning
        );
        assert_eq!(
            DiscernibilityReport::derive_verdict(&pairs(None), true, false),
            Verdict::Inconclusive
        );
        assert_eq!(
            DiscernibilityReport::derive_verdict(&pairs(None), false, true),
            Verdict::Violated
        );
        assert_eq!(
            DiscernibilityReport::derive_verdict(&pairs(Some((1, 1))), true, true),
            Verdict::Violated
        );
        assert_eq!(
            DiscernibilityReport::derive_verdict(&pairs(Some((2, 1))), true, true),
            Verdict::Violated
        );
        assert_eq!(DiscernibilityReport::derive_verdict(&[], true, true), Verdict::Violated);
    }

    #[test]
    fn relation_parsing() {
        assert_eq!("T".parse::<Relation>().unwrap(), Relation::T);
        assert_eq!("c".parse::<Relation>().unwrap(), Relation::C);
        assert!("X".parse::<Relation>().is_err());
    }
}
