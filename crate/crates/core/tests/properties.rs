//! Randomized invariants across the ring, prism, module, display and descent
//! layers. Each case draws a seed and builds its inputs from a ChaCha stream.

use std::sync::{Arc, OnceLock};

use prismdisp::bkmod::filtration::{height_sides, ladder_holds};
use prismdisp::bkmod::normal::verify_normal;
use prismdisp::bkmod::{hodge_and_classify, make_banal_bk, normal_decomposition, Cocharacter, Verdict};
use prismdisp::descent::{random_gdk_eta, setup_deformation, solve_v, v_residual_zero, DeformationProblem};
use prismdisp::displays::{
    act, decompose, display_to_bk, membership_display_group, random_gl, random_member, random_parabolic,
    random_unipotent, stabilizes_filtration, BanalDisplay, GroupDescriptor,
};
use prismdisp::prisms::{build_coproduct, make_bk_prism, EnvelopeCtx, PrismCtx};
use prismdisp::rings::delta::random_elt;
use prismdisp::rings::{parse_elt, witt2_section, CoeffRing, DeltaCtx, Mat};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn prism(p: u64, n: u32, m: u32, e: &str) -> PrismCtx {
    let a = DeltaCtx::series(CoeffRing::zp(p, n).unwrap(), 1, m).unwrap();
    make_bk_prism(&a, parse_elt(&a, e).unwrap()).unwrap()
}

fn base2() -> &'static PrismCtx {
    static P: OnceLock<PrismCtx> = OnceLock::new();
    P.get_or_init(|| prism(2, 3, 4, "2 + t"))
}

fn base3() -> &'static PrismCtx {
    static P: OnceLock<PrismCtx> = OnceLock::new();
    P.get_or_init(|| prism(3, 4, 6, "3 + t"))
}

fn env2() -> &'static EnvelopeCtx {
    static E: OnceLock<EnvelopeCtx> = OnceLock::new();
    E.get_or_init(|| build_coproduct(base2(), 2, 400_000).unwrap())
}

fn unit_problem() -> &'static DeformationProblem {
    static D: OnceLock<DeformationProblem> = OnceLock::new();
    D.get_or_init(|| {
        let pr = base2();
        let mu = Cocharacter::new(vec![1, 0]).unwrap();
        let dsp = BanalDisplay::new(pr, GroupDescriptor::Gl(2), mu, Mat::identity(pr.ring(), 2)).unwrap();
        setup_deformation(env2(), &dsp).unwrap()
    })
}

fn two_var_ring() -> &'static Arc<DeltaCtx> {
    static R: OnceLock<Arc<DeltaCtx>> = OnceLock::new();
    R.get_or_init(|| DeltaCtx::series(CoeffRing::zp(3, 3).unwrap(), 2, 5).unwrap())
}

fn mu_of(shape: usize) -> Cocharacter {
    let w: [&[i64]; 4] = [&[1, 0], &[1, 1, 0], &[1, 0, 0], &[0, 0]];
    Cocharacter::new(w[shape % w.len()].to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn frobenius_is_a_lift_and_a_homomorphism(seed in any::<u64>()) {
        let ctx = two_var_ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_elt(ctx, &mut rng), random_elt(ctx, &mut rng));
        let (pa, pb) = (a.phi().unwrap(), b.phi().unwrap());
        prop_assert!((&a * &b).phi().unwrap().eq_cert(&(&pa * &pb)));
        prop_assert!((&a + &b).phi().unwrap().eq_cert(&(&pa + &pb)));
        prop_assert!((&pa - &a.pow(ctx.coeff().q())).div_pi().is_some());
    }

    #[test]
    fn precision_never_increases(seed in any::<u64>()) {
        let pr = base3();
        let ctx = pr.ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_elt(ctx, &mut rng);
        let b = pr.divide(&(&random_elt(ctx, &mut rng) * pr.e()), 1).unwrap();
        let floor = a.prec().min(b.prec());
        for r in [&a + &b, &a * &b, &a - &b] {
            prop_assert!(floor.covers(r.prec()));
        }
        prop_assert!(b.prec().covers((&b * &b).prec()));
        prop_assert!(a.prec().covers(a.phi().unwrap().prec()));
        prop_assert!(a.prec().covers(a.delta().unwrap().prec()));
    }

    #[test]
    fn witt_section_is_a_homomorphism(seed in any::<u64>()) {
        let ctx = base3().ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_elt(ctx, &mut rng), random_elt(ctx, &mut rng));
        let (sa, sb) = (witt2_section(&a).unwrap(), witt2_section(&b).unwrap());
        prop_assert!(witt2_section(&(&a * &b)).unwrap().eq_cert(&sa.mul(&sb)));
        prop_assert!(witt2_section(&(&a + &b)).unwrap().eq_cert(&sa.add(&sb)));
        prop_assert!(sa.epsilon().eq_cert(&a));
    }

    #[test]
    fn membership_quotients_multiply_back(seed in any::<u64>(), k in 0u32..3) {
        let pr = base3();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_elt(pr.ring(), &mut rng);
        for c in [a.clone(), &a * &pr.e().pow(k as u64)] {
            if let (true, Some(q)) = pr.ideal_pow_membership(&c, k) {
                prop_assert!((&q * &pr.e().pow(k as u64)).eq_cert(&c));
            }
        }
        prop_assert!(pr.ideal_pow_membership(&(&a * &pr.e().pow(k as u64)), k).0);
    }

    #[test]
    fn fold_map_splits_both_projections(seed in any::<u64>()) {
        let env = env2();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_elt(env.base().ring(), &mut rng);
        prop_assert!(env.m(&env.p1(&a).unwrap()).unwrap().eq_cert(&a));
        prop_assert!(env.m(&env.p2(&a).unwrap()).unwrap().eq_cert(&a));
    }

    #[test]
    fn banal_modules_satisfy_ladder_height_and_normal_form(seed in any::<u64>(), shape in 0usize..4) {
        let pr = base3();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu = mu_of(shape);
        let m = make_banal_bk(pr, &mu, &random_gl(pr, mu.rank(), &mut rng)).unwrap();
        let top = mu.max();
        for i in 1..=top + 1 {
            prop_assert!(ladder_holds(&m, i));
        }
        for h in 0..=top + 1 {
            let (a, b) = height_sides(&m, h);
            prop_assert_eq!(a, b);
        }
        let c = hodge_and_classify(&m);
        prop_assert_eq!(c.displayed, Verdict::True);
        prop_assert_eq!(c.mu.as_ref(), Some(&mu));
        let nd = normal_decomposition(&m).unwrap();
        prop_assert!(verify_normal(&m, &nd).unwrap());
    }

    #[test]
    fn action_is_a_right_action_and_functorial(seed in any::<u64>(), shape in 0usize..3) {
        let pr = base2();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu = mu_of(shape);
        let n = mu.rank();
        let gl = GroupDescriptor::Gl(n);
        let d = BanalDisplay::new(pr, gl, mu.clone(), random_gl(pr, n, &mut rng)).unwrap();
        let g = membership_display_group(&gl, pr, &mu, &random_member(pr, &mu, &mut rng)).unwrap();
        let h = membership_display_group(&gl, pr, &mu, &random_member(pr, &mu, &mut rng)).unwrap();
        let gh = membership_display_group(&gl, pr, &mu, &g.g.mul(&h.g)).unwrap();
        let lhs = act(&act(&d, &g).unwrap(), &h).unwrap();
        prop_assert!(lhs.x.eq_cert(&act(&d, &gh).unwrap().x));
        let m = display_to_bk(&d).unwrap();
        let mg = display_to_bk(&act(&d, &g).unwrap()).unwrap();
        prop_assert!(m.is_isomorphism_from(&mg, &g.conj).unwrap());
    }

    #[test]
    fn membership_criteria_agree(seed in any::<u64>(), shape in 0usize..3) {
        let pr = base2();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu = mu_of(shape);
        let n = mu.rank();
        let g = random_gl(pr, n, &mut rng);
        let member = membership_display_group(&GroupDescriptor::Gl(n), pr, &mu, &g).is_some();
        prop_assert_eq!(member, stabilizes_filtration(pr, &mu, &g));
        // For minuscule mu, membership is decided by the reduction mod E
        // being block upper triangular.
        let w = mu.weights();
        let reduced_parabolic = (0..n)
            .all(|i| (0..n).all(|j| w[i] >= w[j] || pr.ideal_pow_membership(g.at(i, j), 1).0));
        prop_assert_eq!(member, reduced_parabolic);
    }

    #[test]
    fn decomposition_inverts_multiplication(seed in any::<u64>(), shape in 0usize..3) {
        let pr = base2();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu = mu_of(shape);
        let gl = GroupDescriptor::Gl(mu.rank());
        let (u, p) = (random_unipotent(pr, &mu, &mut rng), random_parabolic(pr, &mu, &mut rng));
        let g = membership_display_group(&gl, pr, &mu, &u.mul(&p)).unwrap();
        let (u2, p2) = decompose(&gl, pr, &mu, &g).unwrap();
        prop_assert!(u2.g.eq_cert(&u) && p2.g.eq_cert(&p));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn v_is_bijective_on_gdk(seed in any::<u64>()) {
        let prob = unit_problem();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let eta = random_gdk_eta(prob, &mut rng).unwrap();
        let c = prob.v_eta(&eta).unwrap();
        let back = solve_v(prob, &c, 200).unwrap();
        prop_assert!(back.eta.sub(&eta).entries().iter().all(|a| a.is_exact_zero()));
        let sol = solve_v(prob, &eta, 200).unwrap();
        prop_assert!(v_residual_zero(prob, &sol.eta, &eta).unwrap());
    }
}
