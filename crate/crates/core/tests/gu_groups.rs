use gspin6::exact_rings::rational::{q, Q};
use gspin6::exact_rings::{HermMat2, MatE, QuadAlgebra};
use gspin6::gu_groups::{
    act_on_f_plane, d_e_sample, epsilon, f_t_vector, inversion, sample, stabilizer_test, v6_as_group_element,
    GUElem, GroupError, V6Vec,
};
use gspin6::harness::suites::random_pd_herm;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn algebra() -> impl Strategy<Value = QuadAlgebra> {
    prop_oneof![
        Just(QuadAlgebra::gaussian()),
        Just(QuadAlgebra::eisenstein()),
        Just(QuadAlgebra::field(2).unwrap()),
        Just(QuadAlgebra::split()),
    ]
}

fn product(rng: &mut ChaCha8Rng, e: QuadAlgebra, len: usize) -> GUElem {
    let mut g = GUElem::identity(e);
    for _ in 0..len {
        g = g.mul(&sample::generator(rng, e, 3).to_gu().unwrap());
    }
    g
}

/// `nu^{-1} eps^{-1} g^t eps v g` straight from the 4x4 matrices.
fn act_by_matrices(v: &V6Vec, g: &GUElem) -> MatE {
    let e = v.algebra();
    let eps = epsilon(e);
    let gpp = &(&eps.inverse().unwrap() * &g.matrix().transpose()) * &eps;
    (&(&gpp * &v.to_mat4()) * g.matrix()).scale(&e.rational(Q::from(g.nu().recip())))
}

fn scalar_gu(z: gspin6::exact_rings::EElem) -> GUElem {
    GUElem::from_matrix(MatE::diag(&[z.clone(), z.clone(), z.clone(), z])).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn action_preserves_q_and_agrees_with_matrices(e in algebra(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = sample::v6(&mut rng, e, 5);
        let g = sample::generator(&mut rng, e, 3).to_gu().unwrap();
        let vg = v.act(&g).unwrap();
        prop_assert_eq!(vg.qform(), v.qform());
        prop_assert_eq!(vg.to_mat4(), act_by_matrices(&v, &g));
    }

    #[test]
    fn action_is_a_right_action(e in algebra(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = sample::v6(&mut rng, e, 5);
        let (n1, n2) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let g1 = product(&mut rng, e, n1);
        let g2 = product(&mut rng, e, n2);
        prop_assert!(g1.mul(&g2).is_gspin6());
        prop_assert_eq!(v.act(&g1.mul(&g2)).unwrap(), v.act(&g1).unwrap().act(&g2).unwrap());
        prop_assert_eq!(v.act(&g1).unwrap().act(&g1.inverse()).unwrap(), v);
    }

    #[test]
    fn rational_scalars_act_trivially(e in algebra(), seed in any::<u64>(), z in 1i64..50) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = sample::v6(&mut rng, e, 5);
        for z in [z, -z] {
            let g = scalar_gu(e.int(z, 0));
            prop_assert_eq!(g.nu(), &q(z * z));
            prop_assert!(g.is_gspin6());
            prop_assert_eq!(v.act(&g).unwrap(), v.clone());
        }
    }

    #[test]
    fn iota_is_an_isometric_involution(e in algebra(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = sample::v6(&mut rng, e, 5);
        let w = sample::v6(&mut rng, e, 5);
        prop_assert_eq!(v.iota().iota(), v.clone());
        prop_assert_eq!(v.iota().bform(&w.iota()), v.bform(&w));
        prop_assert_eq!(v.bform(&v), v.qform());
        let polar = (v.add(&w).qform() - v.qform() - w.qform()) / q(2);
        prop_assert_eq!(v.bform(&w), polar);
    }

    #[test]
    fn reflections(e in algebra(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = sample::v6(&mut rng, e, 5);
        let v0 = sample::v6(&mut rng, e, 3);
        prop_assume!(!v0.qform().is_zero());
        let r = v.reflect(&v0).unwrap();
        prop_assert_eq!(r.qform(), v.qform());
        prop_assert_eq!(r.reflect(&v0).unwrap(), v.clone());
        prop_assert_eq!(v0.reflect(&v0).unwrap(), v0.neg());
        // the reflection through v0 is iota followed by v0 read as a group element
        let g0 = v6_as_group_element(&v0).unwrap();
        prop_assert_eq!(v.iota().act(&g0).unwrap(), r.neg());
    }

    #[test]
    fn q_is_a_square_root_of_the_determinant(e in algebra(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = sample::v6(&mut rng, e, 6);
        let half = v.qform() / q(2);
        prop_assert_eq!(v.to_mat4().det(), e.rational(&half * &half));
    }

    #[test]
    fn stabilizer_criteria_match_the_action(e in algebra(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_pd_herm(&mut rng, e, 4);
        let gen = if rng.gen_bool(0.5) {
            gspin6::gu_groups::Generator::UpperUnipotent(sample::traceless_against(&mut rng, &t, 3))
        } else {
            sample::generator(&mut rng, e, 2)
        };
        prop_assert!(stabilizer_test(&gen, &t).unwrap().consistent());
    }

    #[test]
    fn line_stabilizers_act_by_the_conjugate_on_f_t(e in algebra(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_pd_herm(&mut rng, e, 4);
        let f = vec![sample::eelem(&mut rng, e, 3), sample::eelem(&mut rng, e, 3)];
        let lambda = sample::unit_free_eelem(&mut rng, e, 3);
        let us: Vec<HermMat2> = (0..2).map(|_| sample::traceless_against(&mut rng, &t, 3)).collect();
        let g = match d_e_sample(&t, &f, &lambda, &us) {
            Ok(g) => g,
            Err(GroupError::NotInvertible) | Err(GroupError::BadLevi) => return Ok(()),
            Err(err) => return Err(TestCaseError::fail(err.to_string())),
        };
        let scaled = |x: &[gspin6::exact_rings::EElem], c: &gspin6::exact_rings::EElem| -> Vec<_> { x.iter().map(|y| y * c).collect() };
        prop_assert_eq!(act_on_f_plane(&f, &g), Some(scaled(&f, &lambda)));
        let ft = f_t_vector(&f, &t.to_mat());
        prop_assert_eq!(act_on_f_plane(&ft, &g), Some(scaled(&ft, &lambda.conj())));
        prop_assert_eq!(V6Vec::v_t(&t).act(&g).unwrap(), V6Vec::v_t(&t).scale(&lambda.norm().recip()).scale(&g.nu().clone()));
    }

    #[test]
    fn json_round_trips(e in algebra(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = sample::v6(&mut rng, e, 9);
        prop_assert_eq!(V6Vec::from_json(&v.to_json().to_string()).unwrap(), v);
        let g = product(&mut rng, e, 3);
        prop_assert_eq!(GUElem::from_json(&g.to_json().to_string()).unwrap(), g);
    }
}

#[test]
fn imaginary_scalars_act_by_minus_one() {
    // i I has det = nu^2 = 1, so it lies in GSpin6, and acts on V6 by z/conj(z) = -1
    let e = QuadAlgebra::gaussian();
    let g = scalar_gu(e.int(0, 1));
    assert!(g.is_gspin6());
    let v = V6Vec::int(e, 1, (2, -1, 1, 3), 5);
    assert_eq!(v.act(&g).unwrap(), v.neg());
    // 1 + i is not in GSpin6: det = -4, nu^2 = 4
    let h = scalar_gu(e.int(1, 1));
    assert!(!h.is_gspin6());
    assert_eq!(v.act(&h), Err(GroupError::NotInV6));
}

#[test]
fn inversion_swaps_alpha_and_delta() {
    let e = QuadAlgebra::gaussian();
    let v = V6Vec::int(e, 2, (0, 0, 0, 0), 7);
    let w = v.act(&inversion(e)).unwrap();
    assert_eq!((w.alpha, w.delta), (q(7), q(2)));
}
