//! Descent of banal displays along the two maps `A -> A^(2)`.
//!
//! For a `1`-bounded display `X` over `A`, the two base changes are
//! `X_1 = p1(X)` and `X_2 = p2(X) phi(mu(u))` relative to `d = p1(E)`, where
//! `p2(E) = u d`. A descent isomorphism is `eps in G(dK)` with
//! `eps^{-1} X_2 sigma(eps) = X_1`; writing `gamma = p2(X)^{-1} p1(X)` this is
//! `V(eps) = c` for `V(g) = X_1 sigma(g) X_1^{-1} g^{-1}` and
//! `c = X_1 phi(mu(u))^{-1} gamma X_1^{-1}`.
//!
//! Elements of `G(dK)` are stored as `eta` with `g = 1 + d eta`, `eta` with
//! entries in `K`. Then `sigma(g) = 1 + d S(eta)` with
//! `S(eta)_ij = phi(d)^{a_ij} phi_1(eta_ij)`, `a_ij = 1 + m_i - m_j` and
//! `phi_1 = phi / d` on `K`. `V(g) = c` is the fixed point of
//! `g -> c^{-1} U(g)`, `U(g) = X_1 sigma(g) X_1^{-1}`, which contracts along
//! the filtration of `K` by `(pi, d)^a ((t)^b M + (pi, d) K)`.

pub mod uniqueness;

pub use uniqueness::{check_uniqueness, PieceCheck, UniquenessReport};

use serde::Serialize;

use crate::bkmod::Cocharacter;
use crate::displays::{one_bounded, BanalDisplay};
use crate::error::{Error, Result};
use crate::prisms::{build_coproduct, EnvelopeCtx, KernelDivider};
use crate::rings::{Elt, Mat};

/// The data of the deformation problem on `A^(2)`.
#[derive(Clone, Debug)]
pub struct DeformationProblem {
    pub env: EnvelopeCtx,
    pub display: BanalDisplay,
    /// `p2(E) = u d`.
    pub u: Elt,
    pub x1: Mat,
    pub x2: Mat,
    /// `p2(X)^{-1} p1(X)`.
    pub gamma: Mat,
    /// `c = 1 + d * target_eta`.
    pub target_eta: Mat,
    x1_inv: Mat,
    exps: Vec<Vec<u32>>,
    phi_d: Elt,
    div: KernelDivider,
}

/// A solution `g = 1 + d eta` of `V(g) = c`.
#[derive(Clone, Debug)]
pub struct VSolution {
    pub eta: Mat,
    pub iterations: usize,
}

/// The descent isomorphism with its certificates.
#[derive(Clone, Debug)]
pub struct Descent {
    pub eps: Mat,
    pub eta: Mat,
    pub iterations: usize,
    /// `m(eps) = 1` exactly.
    pub fold_is_identity: bool,
    /// `eps^{-1} X_2 sigma(eps) - X_1 = 0` exactly.
    pub residual_zero: bool,
}

/// Serializable summary of a descent computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentRecord {
    pub depth: usize,
    pub iterations: usize,
    pub fold_is_identity: bool,
    pub residual_zero: bool,
    pub epsilon: Vec<Vec<String>>,
}

fn eta_of(div: &KernelDivider, g: &Mat, what: &str) -> Result<Mat> {
    let id = Mat::identity(g.ctx(), g.rows);
    g.sub(&id)
        .try_map(|a| div.divide(a).ok_or_else(|| Error::Membership(format!("{what} is not certified to lie in G(dK)"))))
}

fn exact_eq(a: &Mat, b: &Mat) -> bool {
    a.sub(b).entries().iter().all(|x| x.is_exact_zero())
}

/// `mu(u)` for a unit `u`.
fn mu_of_unit(mu: &Cocharacter, u: &Elt) -> Result<Mat> {
    Ok(mu.shifted_diag(u).scale(&u.inv()?.pow(mu.shift() as u64)))
}

/// Builds the problem and checks `m(X_1) = m(X_2) = X`,
/// `gamma in G(dK)` and `phi(mu(u)) in G(dK)`.
pub fn setup_deformation(env: &EnvelopeCtx, dsp: &BanalDisplay) -> Result<DeformationProblem> {
    if !one_bounded(&dsp.group, &dsp.mu) {
        return Err(Error::NotOneBounded(format!("{} is not 1-bounded for {}", dsp.mu, dsp.group)));
    }
    let d = env.prism().e().clone();
    let div = KernelDivider::new(env, env.depth());
    let p2e = env.p2(env.base().e())?;
    let ku = div
        .divide(&(&p2e - &d))
        .ok_or_else(|| Error::Membership("p2(E) - p1(E) is not certified to lie in dK".into()))?;
    let u = &env.ring().one() + &ku;
    if !(&d * &u).sub_ref(&p2e).is_exact_zero() {
        return Err(Error::Validation("p2(E) != u d".into()));
    }
    let phi_mu_u = mu_of_unit(&dsp.mu, &u)?.phi()?;
    let x1 = dsp.x.try_map(|a| env.p1(a))?;
    let px2 = dsp.x.try_map(|a| env.p2(a))?;
    let x2 = px2.mul(&phi_mu_u);
    for (name, xi) in [("X_1", &x1), ("X_2", &x2)] {
        let back = xi.try_map(|a| env.m(a))?;
        if !exact_eq(&back, &dsp.x) {
            return Err(Error::Validation(format!("m({name}) != X")));
        }
    }
    let gamma = px2.inv()?.mul(&x1);
    eta_of(&div, &gamma, "gamma")?;
    eta_of(&div, &phi_mu_u, "phi(mu(u))")?;
    let x1_inv = x1.inv()?;
    let c = x1.mul(&phi_mu_u.inv()?).mul(&gamma).mul(&x1_inv);
    let target_eta = eta_of(&div, &c, "the target")?;
    let w = dsp.mu.weights();
    let n = w.len();
    let exps = (0..n).map(|i| (0..n).map(|j| (1 + w[i] - w[j]) as u32).collect()).collect();
    let phi_d = d.phi()?;
    Ok(DeformationProblem {
        env: env.clone(),
        display: dsp.clone(),
        u,
        x1,
        x2,
        gamma,
        target_eta,
        x1_inv,
        exps,
        phi_d,
        div,
    })
}

impl DeformationProblem {
    pub fn d(&self) -> &Elt {
        self.env.prism().e()
    }
    pub fn rank(&self) -> usize {
        self.x1.rows
    }

    /// `1 + d eta`.
    pub fn group_elt(&self, eta: &Mat) -> Mat {
        Mat::identity(self.env.ring(), eta.rows).add(&eta.scale(self.d()))
    }

    /// `eta` of `g`, when `g` is certified to lie in `G(dK)`.
    pub fn eta_of(&self, g: &Mat) -> Result<Mat> {
        eta_of(&self.div, g, "element")
    }

    /// `phi_1(a) = phi(a) / d` for `a in K`.
    pub fn phi1(&self, a: &Elt) -> Result<Elt> {
        if a.is_exact_zero() {
            return Ok(self.env.ring().zero());
        }
        let fa = a.phi()?;
        self.div
            .divide(&fa)
            .ok_or_else(|| Error::DepthExhausted(format!("no phi-admissible quotient at depth {}", self.env.depth())))
    }

    /// `S(eta)` with `sigma(1 + d eta) = 1 + d S(eta)`.
    pub fn sigma_eta(&self, eta: &Mat) -> Result<Mat> {
        let n = eta.rows;
        let mut out = eta.clone();
        for i in 0..n {
            for j in 0..n {
                let v = &self.phi_d.pow(self.exps[i][j] as u64) * &self.phi1(eta.at(i, j))?;
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    /// `eta` of `U(g) = X_1 sigma(g) X_1^{-1}`.
    pub fn u_eta(&self, eta: &Mat) -> Result<Mat> {
        Ok(self.x1.mul(&self.sigma_eta(eta)?).mul(&self.x1_inv))
    }

    /// `eta` of a product in `G(dK)`.
    pub fn mul_eta(&self, a: &Mat, b: &Mat) -> Mat {
        a.add(b).add(&a.mul(b).scale(self.d()))
    }

    /// `eta` of an inverse in `G(dK)`.
    pub fn inv_eta(&self, a: &Mat) -> Result<Mat> {
        let zero = Mat::zeros(self.env.ring(), a.rows, a.cols);
        Ok(zero.sub(&self.group_elt(a).inv()?.mul(a)))
    }

    /// `eta` of `V(g) = U(g) g^{-1}`.
    pub fn v_eta(&self, eta: &Mat) -> Result<Mat> {
        Ok(self.mul_eta(&self.u_eta(eta)?, &self.inv_eta(eta)?))
    }

    /// `sigma_{mu,d}(g)` computed directly as `phi(mu(d) g mu(d)^{-1})`.
    pub fn sigma_direct(&self, eta: &Mat) -> Result<Mat> {
        let n = eta.rows;
        let ring = self.env.ring();
        let conj = Mat::from_fn(n, n, |i, j| {
            let off = &self.d().pow(self.exps[i][j] as u64) * eta.at(i, j);
            if i == j {
                &ring.one() + &off
            } else {
                off
            }
        });
        conj.phi()
    }
}

/// Solves `V(g) = 1 + d c_eta` by iterating `g -> c^{-1} U(g)` from
/// `g = c^{-1}`, stopping at an exact fixed point.
pub fn solve_v(prob: &DeformationProblem, c_eta: &Mat, max_iter: usize) -> Result<VSolution> {
    solve_v_from(prob, c_eta, None, max_iter, true)
}

/// The iteration from an optional starting point. With `exact = false` it
/// stops after `max_iter` steps without requiring a fixed point.
pub fn solve_v_from(
    prob: &DeformationProblem,
    c_eta: &Mat,
    start: Option<&Mat>,
    max_iter: usize,
    exact: bool,
) -> Result<VSolution> {
    let c_inv = prob.inv_eta(c_eta)?;
    let mut eta = match start {
        Some(s) => s.clone(),
        None => c_inv.clone(),
    };
    for it in 1..=max_iter {
        let next = prob.mul_eta(&c_inv, &prob.u_eta(&eta)?);
        if exact_eq(&next, &eta) {
            return Ok(VSolution { eta: next, iterations: it });
        }
        eta = next;
    }
    if exact {
        Err(Error::NonConvergence(format!("no fixed point after {max_iter} iterations")))
    } else {
        Ok(VSolution { eta, iterations: max_iter })
    }
}

/// `eps` with `m(eps) = 1` and `eps^{-1} X_2 sigma(eps) = X_1`.
pub fn lift_descent_isomorphism(prob: &DeformationProblem, max_iter: usize) -> Result<Descent> {
    let sol = solve_v(prob, &prob.target_eta, max_iter)?;
    let eps = prob.group_elt(&sol.eta);
    let n = prob.rank();
    let folded = eps.try_map(|a| prob.env.m(a))?;
    let fold_is_identity = folded.entries().iter().enumerate().all(|(k, a)| {
        let want = if k / n == k % n { a.ctx().one() } else { a.ctx().zero() };
        a.sub_ref(&want).is_exact_zero()
    });
    let lhs = eps.inv()?.mul(&prob.x2).mul(&prob.sigma_direct(&sol.eta)?);
    let residual_zero = exact_eq(&lhs, &prob.x1);
    Ok(Descent { eps, eta: sol.eta, iterations: sol.iterations, fold_is_identity, residual_zero })
}

/// Builds the envelope at `depth` and solves; on depth exhaustion the
/// envelope is rebuilt one level deeper, up to `max_depth`.
pub fn descend(
    dsp: &BanalDisplay,
    depth: usize,
    max_depth: usize,
    budget: usize,
    max_iter: usize,
) -> Result<(DeformationProblem, Descent)> {
    let mut last = None;
    for dd in depth..=max_depth.max(depth) {
        let env = build_coproduct(&dsp.prism, dd, budget)?;
        let prob = setup_deformation(&env, dsp)?;
        match lift_descent_isomorphism(&prob, max_iter) {
            Ok(desc) => return Ok((prob, desc)),
            Err(e @ (Error::DepthExhausted(_) | Error::NonConvergence(_))) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::DepthExhausted("no depth tried".into())))
}

/// Solves in two stages: `max_first` steps of the iteration give `g_1`,
/// then `g_2` solves `V(g_2) = U(g_1)^{-1} c g_1` and the result is `g_1 g_2`.
pub fn solve_v_staged(prob: &DeformationProblem, c_eta: &Mat, max_first: usize, max_iter: usize) -> Result<VSolution> {
    let g1 = solve_v_from(prob, c_eta, None, max_first, false)?;
    let c2 = prob.mul_eta(&prob.inv_eta(&prob.u_eta(&g1.eta)?)?, &prob.mul_eta(c_eta, &g1.eta));
    let g2 = solve_v(prob, &c2, max_iter)?;
    Ok(VSolution { eta: prob.mul_eta(&g1.eta, &g2.eta), iterations: g1.iterations + g2.iterations })
}

/// A random `eta` for an element of `G(dK)`: entries are combinations of
/// `Y_{i,j}`, `j < D - 1`, with coefficients from the base ring.
pub fn random_gdk_eta(prob: &DeformationProblem, rng: &mut impl rand::Rng) -> Result<Mat> {
    let env = &prob.env;
    let base = env.base().ring().clone();
    let n = prob.rank();
    let top = env.depth().saturating_sub(1).max(1);
    let mut out = Mat::zeros(env.ring(), n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = env.ring().zero();
            for v in 0..env.r() {
                for k in 0..top {
                    let a = env.p1(&crate::rings::delta::random_elt(&base, rng))?;
                    acc = &acc + &(&a * &env.y(v, k));
                }
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// `V(g) = c` holds exactly for `g = 1 + d eta`, checked with `sigma`
/// computed directly.
pub fn v_residual_zero(prob: &DeformationProblem, eta: &Mat, c_eta: &Mat) -> Result<bool> {
    let g = prob.group_elt(eta);
    let lhs = prob.x1.mul(&prob.sigma_direct(eta)?).mul(&prob.x1_inv);
    let rhs = prob.group_elt(c_eta).mul(&g);
    Ok(exact_eq(&lhs, &rhs))
}

impl Descent {
    pub fn record(&self, depth: usize) -> DescentRecord {
        DescentRecord {
            depth,
            iterations: self.iterations,
            fold_is_identity: self.fold_is_identity,
            residual_zero: self.residual_zero,
            epsilon: self.eps.to_strings(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bkmod::tests::prism;
    use crate::displays::GroupDescriptor;
    use crate::prisms::PrismCtx;
    use crate::rings::parse_elt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn problem_with(x: impl Fn(&PrismCtx) -> Mat, mu: Vec<i64>) -> DeformationProblem {
        let pr = prism(2, 3, 4, "2 + t");
        let n = mu.len();
        let x = x(&pr);
        let dsp = BanalDisplay::new(&pr, GroupDescriptor::Gl(n), Cocharacter::new(mu).unwrap(), x).unwrap();
        let env = build_coproduct(&pr, 2, 200_000).unwrap();
        setup_deformation(&env, &dsp).unwrap()
    }

    fn problem(mu: Vec<i64>) -> DeformationProblem {
        let n = mu.len();
        problem_with(|pr| Mat::identity(pr.ring(), n), mu)
    }

    #[test]
    fn trivial_problem() {
        let prob = problem(vec![0, 0]);
        assert!(prob.target_eta.entries().iter().all(|a| a.is_exact_zero()));
        let desc = lift_descent_isomorphism(&prob, 50).unwrap();
        assert!(desc.eps.is_identity() && desc.residual_zero && desc.fold_is_identity);
    }

    #[test]
    fn generic_gl2_display() {
        let x = |pr: &PrismCtx| {
            let ctx = pr.ring();
            Mat::from_rows(vec![
                vec![parse_elt(ctx, "1 + t").unwrap(), ctx.var(0)],
                vec![parse_elt(ctx, "2 + t^2").unwrap(), ctx.one()],
            ])
            .unwrap()
        };
        let prob = problem_with(x, vec![1, 0]);
        let desc = lift_descent_isomorphism(&prob, 200).unwrap();
        assert!(desc.fold_is_identity && desc.residual_zero);
        assert!(!desc.eps.is_identity());
        let rep = check_uniqueness(&prob, &desc).unwrap();
        assert_eq!(rep.status, crate::prisms::CheckStatus::Verified, "{rep:?}");
    }

    #[test]
    fn v_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for mu in [vec![0], vec![1, 0]] {
            let prob = problem(mu);
            for _ in 0..3 {
                let eta = random_gdk_eta(&prob, &mut rng).unwrap();
                let c = prob.v_eta(&eta).unwrap();
                assert!(v_residual_zero(&prob, &eta, &c).unwrap());
                let back = solve_v(&prob, &c, 200).unwrap();
                assert!(exact_eq(&back.eta, &eta));
                let sol = solve_v(&prob, &eta, 200).unwrap();
                assert!(v_residual_zero(&prob, &sol.eta, &eta).unwrap());
                let staged = solve_v_staged(&prob, &eta, 1, 200).unwrap();
                assert!(exact_eq(&staged.eta, &sol.eta));
            }
        }
    }

    #[test]
    fn sigma_preserves_gdk() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let prob = problem(vec![1, 0]);
        let eta = random_gdk_eta(&prob, &mut rng).unwrap();
        let s = prob.sigma_direct(&eta).unwrap();
        let via = prob.group_elt(&prob.sigma_eta(&eta).unwrap());
        assert!(exact_eq(&s, &via));
        assert!(prob.eta_of(&s).is_ok());
    }

    #[test]
    fn refuses_unbounded_cocharacter() {
        let pr = prism(2, 3, 4, "2 + t");
        let dsp = BanalDisplay::new(
            &pr,
            GroupDescriptor::Gl(2),
            Cocharacter::new(vec![2, 0]).unwrap(),
            Mat::identity(pr.ring(), 2),
        )
        .unwrap();
        let env = build_coproduct(&pr, 2, 200_000).unwrap();
        assert!(matches!(setup_deformation(&env, &dsp), Err(Error::NotOneBounded(_))));
    }
}
