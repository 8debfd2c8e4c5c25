//! Invariants checked over generated inputs.

mod common;

use common::{c, Lcg};
use discernlab_core::discern::TScope;
use discernlab_core::multiparticle::permutation_basis_map;
use discernlab_core::schwartz::minus_i;
use discernlab_core::spin::{clebsch_gordan_matrix, total_spin_z};
use discernlab_core::*;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 32,
        ..ProptestConfig::default()
    }
}

fn random_operator(rng: &mut Lcg, n: usize) -> Operator {
    Operator::from_fn(n, |_, _| rng.complex())
}

/// Small-integer entries: every product is exactly representable.
fn integer_operator(rng: &mut Lcg, n: usize) -> Operator {
    Operator::from_fn(n, |_, _| {
        let z = rng.complex() * 8.0;
        c(z.re.round(), z.im.round())
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn kron_is_associative(seed in any::<u64>(), (n, m, k) in (1usize..4, 1usize..4, 1usize..4)) {
        let mut rng = Lcg(seed);
        let a = integer_operator(&mut rng, n);
        let b = integer_operator(&mut rng, m);
        let d = integer_operator(&mut rng, k);
        let left = kron(&kron(&a, &b).unwrap(), &d).unwrap();
        let right = kron(&a, &kron(&b, &d).unwrap()).unwrap();
        prop_assert_eq!(left.max_abs_diff(&right).unwrap(), 0.0);
    }

    #[test]
    fn commutator_is_antisymmetric(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = Lcg(seed);
        let a = random_operator(&mut rng, n);
        let b = random_operator(&mut rng, n);
        let ab = commutator(&a, &b).unwrap();
        let ba = commutator(&b, &a).unwrap();
        prop_assert_eq!(ab.max_abs_diff(&ba.scale(c(-1.0, 0.0))).unwrap(), 0.0);
    }

    #[test]
    fn eigensystem_reconstructs(seed in any::<u64>(), n in 1usize..=64) {
        let mut rng = Lcg(seed);
        let a = rng.hermitian(n);
        let eig = hermitian_eigensystem(&a, 1e-10).unwrap();
        let mut rebuilt = Operator::zeros(n);
        for (value, v) in eig.pairs() {
            rebuilt = &rebuilt + &v.projector().scale(c(value, 0.0));
        }
        prop_assert!(rebuilt.max_abs_diff(&a).unwrap() <= 1e-9 * a.max_abs().max(1.0));
    }

    #[test]
    fn scalar_identity_acts_as_scalar(seed in any::<u64>(), n in 1usize..16, re in -5.0f64..5.0, im in -5.0f64..5.0) {
        let tol = 1e-10;
        let mut rng = Lcg(seed);
        let scalar = c(re, im);
        // perturb below the tolerance
        let a = Operator::from_fn(n, |i, j| {
            let base = if i == j { scalar } else { c(0.0, 0.0) };
            base + rng.complex() * (tol / 4.0)
        });
        prop_assert!(is_scalar_identity(&a, scalar, tol));
        for _ in 0..100 {
            let psi = rng.unit_vector(n);
            let image = a.matvec(&psi).unwrap();
            let residual: f64 = image.iter().zip(&psi).map(|(x, y)| (x - scalar * y).norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(residual <= 10.0 * tol * (n as f64).sqrt().max(1.0) / 2.0);
        }
    }

    #[test]
    fn symmetrizers_commute_with_symmetric_sums(seed in any::<u64>(), n in 2usize..=3, d in 2usize..=3) {
        let mut rng = Lcg(seed);
        let system = ParticleSystem::new(n, d, Sector::Full).unwrap();
        let a = rng.hermitian(d);
        let mut sum = Operator::zeros(system.total_dim());
        for slot in 1..=n {
            sum = &sum + &embed_at_slot(&a, slot, &system).unwrap();
        }
        for parity in [Parity::Symmetric, Parity::Antisymmetric] {
            let pi = symmetrizer(&system, parity).unwrap();
            prop_assert!(commutator(&pi, &sum).unwrap().max_abs() <= 1e-10);
        }
    }

    #[test]
    fn eigenproperty_is_single_valued(seed in any::<u64>(), two_s in 1u32..=3) {
        let s = SpinLabel::from_doubled(two_s);
        let system = ParticleSystem::new(2, s.dim(), Sector::Full).unwrap();
        let k = pair_total_spin_squared(s, 1, 2, &system).unwrap();
        let psi = random_pure_state(&system, seed).unwrap();
        let first = eigenproperty(&k, (&psi).into(), 1e-9).unwrap();
        let second = eigenproperty(&k, (&psi).into(), 1e-9).unwrap();
        prop_assert_eq!(first, second);
        // a coupled-basis vector has exactly one value
        let basis = coupled_basis(s, &Tolerances::default()).unwrap();
        let v = &basis[(seed % basis.len() as u64) as usize];
        let value = eigenproperty(&k, (&v.vector).into(), 1e-9).unwrap().unwrap();
        let t = v.two_total as f64 / 2.0;
        prop_assert!((value.re - t * (t + 1.0)).abs() < 1e-9);
    }

    #[test]
    fn sector_independent_off_diagonal_failure(seed in any::<u64>()) {
        let s = SpinLabel::from_doubled(1);
        for sector in [Sector::Full, Sector::Bose, Sector::Fermi] {
            let system = ParticleSystem::new(3, 2, sector).unwrap();
            match random_pure_state(&system, seed) {
                Ok(psi) => {
                    for (a, b) in [(1, 2), (1, 3), (2, 3), (2, 1)] {
                        prop_assert!(!relation_t_holds(a, b, TScope::Pure(&psi), s, &system, &Tolerances::default()).unwrap());
                    }
                }
                Err(Error::EmptySector) => prop_assert_eq!(sector, Sector::Fermi),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }

    #[test]
    fn momentum_is_symmetric(seed in any::<u64>(), n in 1usize..=3, slot_pick in 0usize..3) {
        let spin = SpinLabel::from_doubled(0);
        let psi = random_wavefunction(n, 4, spin, seed).unwrap();
        let phi = random_wavefunction(n, 4, spin, seed.wrapping_add(1)).unwrap();
        let slot = 1 + slot_pick % n;
        let lhs = psi.apply_p(slot).unwrap().inner_product(&phi).unwrap();
        let rhs = psi.inner_product(&phi.apply_p(slot).unwrap()).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn operators_raise_degree_by_at_most_one(seed in any::<u64>(), n in 1usize..=3, degree in 0u32..=8) {
        let psi = random_wavefunction(n, degree, SpinLabel::from_doubled(1), seed).unwrap();
        for slot in 1..=n {
            for image in [psi.apply_p(slot).unwrap(), psi.apply_q(slot).unwrap()] {
                for (before, after) in psi.components().iter().zip(image.components()) {
                    for var in 1..=n {
                        let bump = u32::from(var == slot);
                        prop_assert!(after.degree_in(var) <= before.degree_in(var) + bump);
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_commutator_exact(seed in any::<u64>(), n in 1usize..=4, pick in 0usize..3, degree in 0u32..=8) {
        let spin = SpinLabel::from_doubled([0, 1, 3][pick]);
        let psi = random_wavefunction(n, degree, spin, seed).unwrap();
        for a in 1..=n {
            for b in 1..=n {
                let image = commutator_pq_apply(&psi, a, b).unwrap();
                if a == b {
                    prop_assert_eq!(image, psi.scale(&minus_i()));
                } else {
                    prop_assert!(image.is_zero());
                }
            }
        }
    }

    #[test]
    fn inner_product_is_conjugate_symmetric(seed in any::<u64>(), n in 1usize..=2) {
        let spin = SpinLabel::from_doubled(1);
        let psi = random_wavefunction(n, 3, spin, seed).unwrap();
        let phi = random_wavefunction(n, 3, spin, seed ^ 0xABCD).unwrap();
        let ab = psi.inner_product(&phi).unwrap();
        let ba = phi.inner_product(&psi).unwrap();
        prop_assert!((ab - ba.conj()).norm() <= 1e-12 * ab.norm().max(1.0));
        prop_assert!(psi.inner_product(&psi).unwrap().re > 0.0);
    }

    #[test]
    fn mixed_states_are_valid(seed in any::<u64>(), rank in 1usize..=3) {
        let system = ParticleSystem::new(2, 3, Sector::Bose).unwrap();
        let w = random_mixed_state(&system, rank, seed).unwrap();
        prop_assert!((w.trace().re - 1.0).abs() < 1e-12);
        let eig = hermitian_eigensystem(w.as_operator(), 1e-10).unwrap();
        prop_assert!(eig.values.iter().all(|&v| v >= -1e-10));
        let projector = symmetrizer(&system, Parity::Symmetric).unwrap();
        let confined = projector.checked_mul(w.as_operator()).unwrap();
        prop_assert!(confined.max_abs_diff(w.as_operator()).unwrap() < 1e-10);
    }
}

#[test]
fn slot_embeddings_conjugate_under_permutations() {
    let mut rng = Lcg(5);
    for n in 1..=3 {
        for d in 2..=3 {
            let system = ParticleSystem::new(n, d, Sector::Full).unwrap();
            let a = rng.hermitian(d);
            for pi in Permutation::all(n) {
                let u = permutation_unitary(&pi, &system).unwrap();
                for j in 1..=n {
                    let lhs = &(&u * &embed_at_slot(&a, j, &system).unwrap()) * &u.adjoint();
                    let rhs = embed_at_slot(&a, pi.image(j), &system).unwrap();
                    assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
                    let map = permutation_basis_map(&pi, &system).unwrap();
                    let fast = embed_at_slot(&a, j, &system)
                        .unwrap()
                        .conjugate_by_basis_permutation(&map)
                        .unwrap();
                    assert!(fast.max_abs_diff(&rhs).unwrap() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn projectors_and_sector_ranks() {
    for n in 1..=4 {
        for d in 1..=4 {
            let system = ParticleSystem::new(n, d, Sector::Full).unwrap();
            let plus = symmetrizer(&system, Parity::Symmetric).unwrap();
            let minus = symmetrizer(&system, Parity::Antisymmetric).unwrap();
            for p in [&plus, &minus] {
                assert!((p * p).max_abs_diff(p).unwrap() <= 1e-10);
                assert!(p.hermiticity_deviation() <= 1e-10);
            }
            if n == 2 {
                assert!((&plus * &minus).max_abs() <= 1e-10);
            }
            let ranks = common::rank(&plus, 1e-8) + common::rank(&minus, 1e-8);
            if n >= 3 && d >= 2 {
                assert!(ranks < system.total_dim(), "N = {n}, d = {d}");
            }
        }
    }
}

#[test]
fn spin_operator_algebra() {
    let tol = 1e-10;
    for two_s in 0..=5u32 {
        let s = SpinLabel::from_doubled(two_s);
        let ops = spin_operators(s);
        let cas = casimir(s);
        for comp in ops.components() {
            assert!(comp.is_hermitian(tol));
            assert!(commutator(&cas, comp).unwrap().max_abs() <= tol);
        }
        let xy = commutator(&ops.x, &ops.y).unwrap();
        assert!(xy.max_abs_diff(&ops.z.scale(c(0.0, 1.0))).unwrap() <= tol);
    }
    for two_s in 1..=3u32 {
        let s = SpinLabel::from_doubled(two_s);
        let system = ParticleSystem::new(2, s.dim(), Sector::Full).unwrap();
        let set = [
            embed_at_slot(&casimir(s), 1, &system).unwrap(),
            embed_at_slot(&casimir(s), 2, &system).unwrap(),
            pair_total_spin_squared(s, 1, 2, &system).unwrap(),
            total_spin_z(s, &system).unwrap(),
        ];
        for x in &set {
            for y in &set {
                assert!(commutator(x, y).unwrap().max_abs() <= tol);
            }
        }
    }
}

#[test]
fn spectral_inequality_and_integer_gap() {
    for two_s in 1..=5u32 {
        let s = SpinLabel::from_doubled(two_s);
        let system = ParticleSystem::new(2, s.dim(), Sector::Full).unwrap();
        let k = pair_total_spin_squared(s, 1, 2, &system).unwrap();
        let max_allowed = (two_s * (two_s + 1)) as f64;
        let eig = hermitian_eigensystem(&k, 1e-10).unwrap();
        assert!(eig.values.iter().all(|&v| v <= max_allowed + 1e-8));
        assert_eq!(s.doubled_casimir_target() - s.max_pair_eigenvalue(), two_s as u64);
    }
}

#[test]
fn clebsch_gordan_matrix_is_orthogonal() {
    for two_s in 1..=3u32 {
        let m = clebsch_gordan_matrix(SpinLabel::from_doubled(two_s)).unwrap();
        let n = m.len();
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|k| m[i][k] * m[j][k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() <= 1e-9);
            }
        }
    }
}
