use std::collections::BTreeSet;

use gspin6::arch_quadrature::{random_hermitian, random_pd, random_real_gu};
use gspin6::exact_rings::rational::q;
use gspin6::exact_rings::{HermMat2, MatE, QuadAlgebra};
use gspin6::gu_groups::{inversion, sample, GUElem, Generator};
use gspin6::harness::suites::generic_z;
use gspin6::herm_modform::{
    act_of, enumerate_reps, enumerate_reps_brute, equivariance_defect, eval_pt, j_of, random_k_infinity,
    random_positive_gu, rstar_part1, rstar_part2_defect, rstar_part3, rstar_part4, RepSolution, UpperHalfPoint,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gaussian() -> QuadAlgebra {
    QuadAlgebra::gaussian()
}

fn random_point(rng: &mut ChaCha8Rng) -> UpperHalfPoint {
    UpperHalfPoint::from_xy(&random_hermitian(rng), &random_pd(rng)).unwrap()
}

fn levi(m: MatE) -> GUElem {
    Generator::Levi { m, nu: q(1) }.to_gu().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rstar_part1_exact(seed in any::<u64>()) {
        let v = sample::v6(&mut ChaCha8Rng::seed_from_u64(seed), gaussian(), 6);
        let (lhs, rhs) = rstar_part1(&v).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn j_is_a_cocycle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g1, g2) = (random_real_gu(&mut rng), random_real_gu(&mut rng));
        let z = random_point(&mut rng);
        let g2z = act_of(&g2, z.z()).unwrap();
        let lhs = j_of(&(&g1 * &g2), z.z());
        let rhs = j_of(&g1, &g2z) * j_of(&g2, z.z());
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0), "{lhs} vs {rhs}");
        // the action is a left action on the upper half space
        let direct = act_of(&(&g1 * &g2), z.z()).unwrap();
        prop_assert!(direct.max_abs_diff(&act_of(&g1, &g2z).unwrap()) <= 1e-9);
        prop_assert!(UpperHalfPoint::new(direct).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rstar_parts_2_to_4(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert!(rstar_part2_defect(&random_k_infinity(&mut rng)) <= 1e-10);
        let g = random_positive_gu(&mut rng, gaussian(), 3);
        let (l3, r3) = rstar_part3(&g).unwrap();
        prop_assert_eq!(l3, r3);
        let v = sample::v6(&mut rng, gaussian(), 4);
        let (l4, r4) = rstar_part4(&v, &g).unwrap();
        prop_assert_eq!(l4, r4);
    }
}

fn test_ts() -> Vec<HermMat2> {
    let e = gaussian();
    let eis = QuadAlgebra::eisenstein();
    vec![
        HermMat2::identity(e),
        HermMat2::diag(e, q(1), q(2)),
        HermMat2::new(q(2), q(3), e.int(1, 1)),
        HermMat2::identity(eis),
        HermMat2::new(q(2), q(2), eis.int(0, 1)),
    ]
}

#[test]
fn enumeration_matches_brute_force() {
    for t in test_ts() {
        for bound in 0..=4 {
            let fast = enumerate_reps(&t, bound).unwrap();
            let mut slow = enumerate_reps_brute(&t, bound).unwrap();
            slow.sort();
            assert_eq!(fast, slow, "T = {t}, bound = {bound}");
            let target = -(t.det() * q(2));
            for v in &fast {
                assert!(v.height() <= bound);
                assert_eq!(v.to_v6(t.algebra()).qform(), target.clone());
                assert_eq!(RepSolution::from_v6(&v.to_v6(t.algebra())), Some(*v));
            }
        }
    }
    // 1 = alpha delta - det h has no height-0 solution and finitely many at height 1
    let t = HermMat2::identity(gaussian());
    assert!(enumerate_reps(&t, 0).unwrap().is_empty());
    assert!(!enumerate_reps(&t, 1).unwrap().is_empty());
}

#[test]
fn error_estimates_are_honest() {
    let e = gaussian();
    let ts = [HermMat2::identity(e), HermMat2::diag(e, q(1), q(2))];
    let zs = [UpperHalfPoint::base(), generic_z()];
    for t in &ts {
        for z in &zs {
            for r in [8, 10] {
                for b in [2, 3, 4] {
                    let small = eval_pt(t, r, z, b).unwrap();
                    let big = eval_pt(t, r, z, 2 * b).unwrap();
                    let moved = (small.value - big.value).norm();
                    assert!(moved <= small.error, "T = {t}, r = {r}, B = {b}: moved {moved:e} > estimate {:e}", small.error);
                    assert!(big.error < small.error);
                }
            }
        }
    }
}

/// Levi elements with integral unit `m` keep every coordinate's absolute value bounded
/// by the height only when `m` is monomial; these and the inversion preserve each box.
fn box_stable_gammas() -> Vec<(&'static str, GUElem)> {
    let e = gaussian();
    let (o, z, i) = (e.one(), e.zero(), e.int(0, 1));
    vec![
        ("inversion", inversion(e)),
        ("diag(i,-i)", levi(MatE::diag(&[i.clone(), -&i]))),
        ("swap", levi(MatE::from_rows(vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]]))),
        ("diag(1,-1)", levi(MatE::diag(&[o.clone(), -&o]))),
    ]
}

#[test]
fn term_level_equivariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in &test_ts()[..3] {
        let alg = t.algebra();
        let bound = 2;
        let reps = enumerate_reps(t, bound).unwrap();
        let boxed: BTreeSet<RepSolution> = reps.iter().copied().collect();
        for (name, g) in box_stable_gammas() {
            assert_eq!(g.nu(), &q(1));
            // the box is gamma-stable, so v -> v gamma permutes the solutions in it
            let image: BTreeSet<RepSolution> = reps
                .iter()
                .map(|v| RepSolution::from_v6(&v.to_v6(alg).act(&g).unwrap()).unwrap())
                .collect();
            assert_eq!(image, boxed, "{name} does not preserve the box for T = {t}");
            for z in [UpperHalfPoint::base(), generic_z(), random_point(&mut rng)] {
                let d = equivariance_defect(t, &g, &z, bound).unwrap();
                assert!(d <= 1e-10, "{name}, T = {t}: defect {d:e}");
            }
        }
    }
}

#[test]
fn value_at_i_vanishes_unless_four_divides_r() {
    // At iI, Q_v = (alpha - delta) - i tr h. The lattice maps h -> -h and
    // (alpha, delta, x, y) -> (x, -y, alpha, -delta) preserve q and send Q to conj(Q)
    // and -i conj(Q), so the sum equals i^r times itself.
    let z = UpperHalfPoint::base();
    for alg in [gaussian(), QuadAlgebra::field(2).unwrap(), QuadAlgebra::eisenstein()] {
        let t = HermMat2::identity(alg);
        for r in 9..=12 {
            let v = eval_pt(&t, r, &z, 4).unwrap();
            if r % 4 == 0 {
                assert!(v.value.norm() > 10.0 * v.error, "{alg} r = {r}: {v:?}");
            } else {
                assert_eq!(v.value.norm(), 0.0, "{alg} r = {r}");
            }
        }
    }
}
