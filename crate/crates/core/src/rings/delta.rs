//! Randomized checks of the delta-ring laws and random element generation.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::rings::algebra::{DeltaCtx, Elt};
use crate::rings::witt::sum_carry;

/// Uniformly random element of the stored ring (every monomial, every digit).
pub fn random_elt(ctx: &Arc<DeltaCtx>, rng: &mut impl Rng) -> Elt {
    let q = ctx.coeff().modulus().value();
    let c = (0..ctx.width()).map(|_| rng.gen_range(0..q)).collect();
    Elt::from_raw(ctx, c)
}

/// Random element with constant term zero.
pub fn random_radical(ctx: &Arc<DeltaCtx>, rng: &mut impl Rng) -> Elt {
    let mut a = random_elt(ctx, rng);
    let df = ctx.coeff().degree();
    let mut c = a.coeffs().to_vec();
    c[..df].iter_mut().for_each(|x| *x = 0);
    a = Elt::from_raw(ctx, c);
    a
}

/// Random unit.
pub fn random_unit(ctx: &Arc<DeltaCtx>, rng: &mut impl Rng) -> Elt {
    loop {
        let a = random_elt(ctx, rng);
        if a.is_unit() {
            return a;
        }
    }
}

/// Outcome of one law across all trials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawOutcome {
    pub law: String,
    pub passed: usize,
    pub trials: usize,
    pub counterexample: Option<(String, String)>,
}

impl LawOutcome {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

/// Result of [`axiom_suite`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub laws: Vec<LawOutcome>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.laws.iter().all(LawOutcome::ok)
    }
}

/// Checks the product and sum laws of `delta` on `trials` random pairs,
/// plus `phi(a) = a^q mod pi` and the ring-homomorphism property of `phi`.
pub fn axiom_suite(ctx: &Arc<DeltaCtx>, trials: usize, seed: u64) -> AxiomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = ctx.coeff().q();
    let pi = ctx.pi();
    let names = ["delta(xy)", "delta(x+y)", "phi(xy)", "phi(x+y)", "phi = frobenius mod pi"];
    let mut laws: Vec<LawOutcome> =
        names.iter().map(|n| LawOutcome { law: n.to_string(), passed: 0, trials, counterexample: None }).collect();
    for k in 0..trials {
        // The first trial is the zero pair.
        let (x, y) =
            if k == 0 { (ctx.zero(), ctx.zero()) } else { (random_elt(ctx, &mut rng), random_elt(ctx, &mut rng)) };
        let dx = x.delta().expect("fresh elements have full precision");
        let dy = y.delta().expect("fresh elements have full precision");
        let prod_law = {
            let lhs = (&x * &y).delta().unwrap();
            let rhs = &(&(&x.pow(q) * &dy) + &(&y.pow(q) * &dx)) + &(&pi * &(&dx * &dy));
            lhs.eq_cert(&rhs)
        };
        let sum_law = {
            let lhs = (&x + &y).delta().unwrap();
            let rhs = &(&dx + &dy) + &sum_carry(&x, &y);
            lhs.eq_cert(&rhs)
        };
        let phi_mul = (&x * &y).phi().unwrap().eq_cert(&(&x.phi().unwrap() * &y.phi().unwrap()));
        let phi_add = (&x + &y).phi().unwrap().eq_cert(&(&x.phi().unwrap() + &y.phi().unwrap()));
        let frob = {
            let d = &x.phi().unwrap() - &x.pow(q);
            d.div_pi().is_some()
        };
        for (law, ok) in laws.iter_mut().zip([prod_law, sum_law, phi_mul, phi_add, frob]) {
            if ok {
                law.passed += 1;
            } else if law.counterexample.is_none() {
                law.counterexample = Some((x.to_string(), y.to_string()));
            }
        }
    }
    AxiomReport { laws }
}
