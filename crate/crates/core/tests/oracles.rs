//! Reference values checked against independent oracles.

mod common;

use common::{c, max_diff, pair_spin_half_oracle, pauli_z};
use discernlab_core::discern::{evaluate_relation_c, TScope};
use discernlab_core::report::Branch;
use discernlab_core::schwartz::minus_i;
use discernlab_core::spin::total_spin_z;
use discernlab_core::*;

fn half() -> SpinLabel {
    SpinLabel::from_doubled(1)
}

fn coupled(s: SpinLabel, two_total: u32, two_m: i32) -> PureState {
    coupled_basis(s, &Tolerances::default())
        .unwrap()
        .into_iter()
        .find(|v| v.two_total == two_total && v.two_m == two_m)
        .unwrap()
        .vector
}

#[test]
fn slot_one_embedding_is_left_factor() {
    let system = ParticleSystem::new(2, 2, Sector::Full).unwrap();
    let sz = Operator::from_rows(&pauli_z()).unwrap();
    let embedded = embed_at_slot(&sz, 1, &system).unwrap();
    assert_eq!(
        max_diff(&embedded, &common::naive_kron(&pauli_z(), &common::identity(2))),
        0.0
    );
}

#[test]
fn two_particle_symmetrizers_sum_to_identity() {
    for d in 1..=4 {
        let system = ParticleSystem::new(2, d, Sector::Full).unwrap();
        let plus = symmetrizer(&system, Parity::Symmetric).unwrap();
        let minus = symmetrizer(&system, Parity::Antisymmetric).unwrap();
        assert!(is_scalar_identity(&(&plus + &minus), c(1.0, 0.0), 1e-12), "d = {d}");
    }
}

#[test]
fn sz_eigenvalues_are_magnetic_numbers() {
    for two_s in 0..=5u32 {
        let s = SpinLabel::from_doubled(two_s);
        let eig = hermitian_eigensystem(&spin_operators(s).z, 1e-12).unwrap();
        let expected: Vec<f64> = (0..=two_s).map(|k| -(two_s as f64) / 2.0 + k as f64).collect();
        for (got, want) in eig.values.iter().zip(&expected) {
            assert!((got - want).abs() < 1e-12, "2s = {two_s}");
        }
    }
}

#[test]
fn reflexive_pair_is_scalar() {
    for two_s in 1..=4u32 {
        let s = SpinLabel::from_doubled(two_s);
        let system = ParticleSystem::new(2, s.dim(), Sector::Full).unwrap();
        let target = (two_s * (two_s + 2)) as f64;
        for a in 1..=2 {
            let k = pair_total_spin_squared(s, a, a, &system).unwrap();
            assert!(is_scalar_identity(&k, c(target, 0.0), 1e-10));
        }
    }
}

#[test]
fn off_diagonal_pair_fails_and_stays_below_target() {
    for two_s in 1..=5u32 {
        let s = SpinLabel::from_doubled(two_s);
        let system = ParticleSystem::new(2, s.dim(), Sector::Full).unwrap();
        let target = (two_s * (two_s + 2)) as f64;
        let k = pair_total_spin_squared(s, 1, 2, &system).unwrap();
        assert!(!is_scalar_identity(&k, c(target, 0.0), 1e-10));
        let max = *hermitian_eigensystem(&k, 1e-10).unwrap().values.last().unwrap();
        assert!((max - (two_s * (two_s + 1)) as f64).abs() < 1e-8);
        assert!(max < target);
    }
}

#[test]
fn pair_total_spin_matches_pauli_oracle() {
    let system = ParticleSystem::new(2, 2, Sector::Full).unwrap();
    let k = pair_total_spin_squared(half(), 1, 2, &system).unwrap();
    assert!(max_diff(&k, &pair_spin_half_oracle()) < 1e-14);
    let levels = hermitian_eigensystem(&k, 1e-10).unwrap().levels(1e-7);
    let got: Vec<_> = levels
        .iter()
        .map(|l| (l.value.round() as i64, l.multiplicity))
        .collect();
    assert_eq!(got, vec![(0, 1), (2, 3)]);
}

#[test]
fn cross_sector_state_has_no_total_spin_value() {
    let system = ParticleSystem::new(2, 2, Sector::Full).unwrap();
    let singlet = coupled(half(), 0, 0);
    let triplet0 = coupled(half(), 2, 0);
    let mixed: Vec<_> = singlet
        .amplitudes()
        .iter()
        .zip(triplet0.amplitudes())
        .map(|(x, y)| (x + y) / 2f64.sqrt())
        .collect();
    let psi = PureState::new(mixed, 1e-12).unwrap();
    let k = pair_total_spin_squared(half(), 1, 2, &system).unwrap();
    assert_eq!(eigenproperty(&k, (&psi).into(), 1e-9).unwrap(), None);
    let out = evaluate_relation_t(1, 2, TScope::Pure(&psi), half(), &system, &Tolerances::default()).unwrap();
    assert!(!out.holds);
    assert_eq!(out.branch, Branch::NoProperty);

    // the singlet itself has value 0
    assert!(eigenproperty(&k, (&singlet).into(), 1e-9).unwrap().unwrap().norm() < 1e-12);
    assert_eq!(
        eigenproperty(&Operator::identity(4), (&psi).into(), 1e-12).unwrap(),
        Some(c(1.0, 0.0))
    );
}

#[test]
fn reflexive_relation_holds_in_every_mode() {
    let system = ParticleSystem::new(2, 2, Sector::Full).unwrap();
    let tol = Tolerances::default();
    let psi = random_pure_state(&system, 3).unwrap();
    let w = random_mixed_state(&system, 3, 4).unwrap();
    for a in 1..=2 {
        for scope in [TScope::AllStates, TScope::Pure(&psi), TScope::Mixed(&w)] {
            assert!(relation_t_holds(a, a, scope, half(), &system, &tol).unwrap());
        }
    }
    let singlet = coupled(half(), 0, 0);
    let out = evaluate_relation_t(1, 2, TScope::Pure(&singlet), half(), &system, &tol).unwrap();
    assert_eq!(out.branch, Branch::PropertyDiffers);
}

#[test]
fn off_diagonal_relation_fails_on_sampled_mixed_states() {
    for sector in [Sector::Full, Sector::Bose] {
        let system = ParticleSystem::new(2, 2, sector).unwrap();
        for seed in 0..50 {
            let w = random_mixed_state(&system, 2, seed).unwrap();
            assert!(!relation_t_holds(1, 2, TScope::Mixed(&w), half(), &system, &Tolerances::default()).unwrap());
        }
    }
}

#[test]
fn mixed_projector_form_of_commutator() {
    // [A_1, B_2] W versus c W for W = |ψ⟩⟨ψ|: disjoint slots give zero, not c W
    let system = ParticleSystem::new(2, 2, Sector::Full).unwrap();
    let ops = spin_operators(half());
    let a = embed_at_slot(&ops.x, 1, &system).unwrap();
    let b = embed_at_slot(&ops.y, 2, &system).unwrap();
    let psi = random_pure_state(&system, 11).unwrap();
    let w = MixedState::from_pure(&psi);
    let lhs = commutator(&a, &b).unwrap().apply_mixed(&w).unwrap();
    assert!(lhs.max_abs() < 1e-14);
    assert!(w.as_operator().scale(c(0.0, -1.0)).max_abs() > 0.1);
}

#[test]
fn canonical_commutator_on_random_wavefunctions() {
    for seed in 0..200u64 {
        let n = 1 + (seed % 4) as usize;
        let spin = SpinLabel::from_doubled([0, 1, 3][(seed % 3) as usize]);
        let psi = random_wavefunction(n, 8, spin, seed).unwrap();
        for a in 1..=n {
            assert_eq!(commutator_pq_apply(&psi, a, a).unwrap(), psi.scale(&minus_i()));
            assert!(relation_c_holds(a, a, &psi).unwrap());
            for b in (1..=n).filter(|&b| b != a) {
                assert!(commutator_pq_apply(&psi, a, b).unwrap().is_zero());
                assert!(!relation_c_holds(a, b, &psi).unwrap());
            }
        }
    }
}

#[test]
fn bosonic_product_state_keeps_reflexive_commutator() {
    let phi = random_wavefunction(1, 5, SpinLabel::from_doubled(0), 21).unwrap();
    let boson = SpinorWavefunction::product(&[phi.clone(), phi]).unwrap();
    assert_eq!(boson.symmetrize(Parity::Symmetric).unwrap(), boson);
    for a in 1..=2 {
        assert!(relation_c_holds(a, a, &boson).unwrap());
    }
    let off = evaluate_relation_c(1, 2, &boson).unwrap();
    assert_eq!(off.branch, Branch::PropertyDiffers);
}

#[test]
fn certification_examples() {
    let t = certify_weak_discernibility(
        Relation::T,
        &CertifyConfig {
            n_particles: 2,
            spin: half(),
            pure_samples: 1000,
            mixed_samples: 200,
            ..CertifyConfig::default()
        },
    )
    .unwrap();
    assert_eq!(t.verdict, Verdict::WeaklyDiscerning);

    let c = certify_weak_discernibility(
        Relation::C,
        &CertifyConfig {
            n_particles: 3,
            spin: SpinLabel::from_doubled(2),
            pure_samples: 200,
            mixed_samples: 0,
            max_degree: 4,
            ..CertifyConfig::default()
        },
    )
    .unwrap();
    assert_eq!(c.verdict, Verdict::WeaklyDiscerning);
}

#[test]
fn total_spin_z_of_coupled_vectors() {
    let s = SpinLabel::from_doubled(2);
    let system = ParticleSystem::new(2, 3, Sector::Full).unwrap();
    let sz = total_spin_z(s, &system).unwrap();
    for v in coupled_basis(s, &Tolerances::default()).unwrap() {
        let image = sz.apply_pure(&v.vector).unwrap();
        for (x, y) in image.iter().zip(v.vector.amplitudes()) {
            assert!((x - y * (v.two_m as f64 / 2.0)).norm() < 1e-9);
        }
    }
}

#[test]
fn clebsch_gordan_reference_values() {
    let up_down = clebsch_gordan(half(), 2, 0, 1, -1).unwrap();
    assert!((up_down - 1.0 / 2f64.sqrt()).abs() < 1e-12);
    let singlet = clebsch_gordan(half(), 0, 0, 1, -1).unwrap();
    assert!((singlet - 1.0 / 2f64.sqrt()).abs() < 1e-12);
    let singlet_flip = clebsch_gordan(half(), 0, 0, -1, 1).unwrap();
    assert!((singlet_flip + 1.0 / 2f64.sqrt()).abs() < 1e-12);
    for two_s in 1..=4u32 {
        let s = SpinLabel::from_doubled(two_s);
        let top = 2 * two_s;
        assert!((clebsch_gordan(s, top, top as i32, two_s as i32, two_s as i32).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(clebsch_gordan(s, top, 0, two_s as i32, two_s as i32).unwrap(), 0.0);
    }
    // spin 1 ⊗ spin 1 → S = 0, M = 0: (1, −1, 1)/√3 over m1 = 1, 0, −1
    let one = SpinLabel::from_doubled(2);
    for (m1, want) in [(1, 1.0), (0, -1.0), (-1, 1.0)] {
        let got = clebsch_gordan(one, 0, 0, 2 * m1, -2 * m1).unwrap();
        assert!((got - want / 3f64.sqrt()).abs() < 1e-12);
    }
}

#[test]
fn sector_dimension_examples() {
    let cases = [
        (2, 2, Parity::Antisymmetric, 1),
        (2, 2, Parity::Symmetric, 3),
        (3, 3, Parity::Antisymmetric, 1),
        (3, 2, Parity::Antisymmetric, 0),
    ];
    for (n, d, parity, want) in cases {
        let system = ParticleSystem::new(n, d, Sector::Full).unwrap();
        assert_eq!(sector_dimension(&system, parity), want);
        let trace = symmetrizer(&system, parity).unwrap().trace().re;
        assert_eq!(trace.round() as u64, want);
        assert_eq!(common::rank(&symmetrizer(&system, parity).unwrap(), 1e-9) as u64, want);
    }
}

#[test]
fn fermi_pair_of_qubits_samples_the_singlet_ray() {
    let system = ParticleSystem::new(2, 2, Sector::Fermi).unwrap();
    let singlet = coupled(half(), 0, 0);
    for seed in 0..10 {
        let psi = random_pure_state(&system, seed).unwrap();
        assert!((psi.inner(&singlet).unwrap().norm() - 1.0).abs() < 1e-10);
    }
}
