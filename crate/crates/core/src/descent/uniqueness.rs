//! Uniqueness of the descent isomorphism on the truncated envelope.
//!
//! On each graded piece of the filtration
//! `K ⊃ (t)^0 M + (pi,d) K ⊃ (t)^1 M + (pi,d) K ⊃ ... ⊃ (pi,d) K ⊃ ...`
//! the operator `U` vanishes, so the linearization of `V` is `eta -> -eta`
//! and has trivial kernel exactly when `phi_1` moves every generator of a
//! step into the next one. Each step is checked as the ideal membership
//! `phi(f) in d F_{l+1}`; the chain must end in the zero ideal.

use serde::Serialize;

use crate::descent::{DeformationProblem, Descent};
use crate::error::Result;
use crate::prisms::CheckStatus;
use crate::rings::matrix::{ambient_rows, module_rows};
use crate::rings::Elt;
use crate::zlinalg::Howell;

/// One graded piece `F_l / F_{l+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceCheck {
    pub piece: String,
    pub generators: usize,
    pub status: CheckStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub pieces: Vec<PieceCheck>,
    /// Some power of `(pi,d)` kills `K`, so the filtration reaches zero.
    pub terminates: bool,
    /// The solution lies in the filtered domain `1 + d K`.
    pub solution_in_domain: bool,
    pub status: CheckStatus,
}

fn nonzero(v: Vec<Elt>) -> Vec<Elt> {
    v.into_iter().filter(|a| !a.is_exact_zero()).collect()
}

fn times(a: &[Elt], b: &[Elt]) -> Vec<Elt> {
    nonzero(a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect())
}

/// Monomials of degree `b` in the `t` variables.
fn t_monomials(prob: &DeformationProblem, b: u32) -> Vec<Elt> {
    let mut cur = vec![prob.env.ring().one()];
    for _ in 0..b {
        let ts: Vec<Elt> = (0..prob.env.r()).map(|i| prob.env.t(i)).collect();
        cur = times(&cur, &ts);
    }
    cur
}

fn ideal(prob: &DeformationProblem, gens: &[Elt]) -> Howell {
    let ring = prob.env.ring();
    let cols: Vec<Vec<Elt>> = gens.iter().map(|g| vec![prob.d() * g]).collect();
    let mut rows = module_rows(ring, &cols);
    rows.extend(ambient_rows(ring, 1, None));
    Howell::new(ring.coeff().modulus(), ring.width(), rows, false)
}

/// A labelled filtration step and its generators.
type Step = (String, Vec<Elt>);

/// The filtration steps, and whether some power of `(pi,d)` kills `K`.
fn filtration(prob: &DeformationProblem) -> Result<(Vec<Step>, bool)> {
    let env = &prob.env;
    let ring = env.ring();
    let ys: Vec<Elt> =
        (0..env.r()).flat_map(|i| (0..env.depth()).map(move |j| (i, j))).map(|(i, j)| env.y(i, j)).collect();
    let ms: Vec<Elt> = (0..env.r()).map(|i| prob.phi1(&env.y(i, 0))).collect::<Result<_>>()?;
    let gens_pd = [ring.pi(), prob.d().clone()];
    let m_deg = ring.algebra().m();
    let mut levels = Vec::new();
    let mut pa = vec![ring.one()];
    let cap = 4 * (m_deg as usize + ring.coeff().n() as usize * ring.coeff().e() as usize);
    let mut exhausted = false;
    for a in 0..=cap {
        let pk = times(&pa, &ys);
        if pk.is_empty() {
            exhausted = true;
            break;
        }
        let pa1 = times(&pa, &gens_pd);
        let pk1 = times(&pa1, &ys);
        levels.push((format!("(pi,d)^{a} K"), pk));
        for b in 0..m_deg {
            let tb = t_monomials(prob, b);
            if tb.is_empty() {
                break;
            }
            let mut g = times(&times(&pa, &tb), &ms);
            g.extend(pk1.iter().cloned());
            levels.push((format!("(pi,d)^{a} ((t)^{b} M + (pi,d) K)"), g));
        }
        pa = pa1;
    }
    levels.retain(|(_, g)| !g.is_empty());
    levels.push(("0".into(), Vec::new()));
    Ok((levels, exhausted))
}

/// Checks that the linearized `V` has trivial kernel on every graded piece
/// and that the solution lies in `1 + d K`.
pub fn check_uniqueness(prob: &DeformationProblem, desc: &Descent) -> Result<UniquenessReport> {
    let env = &prob.env;
    let (levels, terminates) = filtration(prob)?;
    let mut pieces = Vec::with_capacity(levels.len());
    for w in levels.windows(2) {
        let (label, gens) = &w[0];
        let next = ideal(prob, &w[1].1);
        let mut ok = true;
        for f in gens {
            match f.phi() {
                Ok(ff) => {
                    if !next.contains(&ring_nf(&ff)) {
                        ok = false;
                        break;
                    }
                }
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        pieces.push(PieceCheck {
            piece: label.clone(),
            generators: gens.len(),
            status: if ok { CheckStatus::Verified } else { CheckStatus::Inconclusive },
        });
    }
    let ys: Vec<Elt> = (0..env.r()).flat_map(|i| (0..env.depth()).map(move |j| env.y(i, j))).collect();
    let cols: Vec<Vec<Elt>> = ys.iter().map(|y| vec![y.clone()]).collect();
    let mut rows = module_rows(env.ring(), &cols);
    rows.extend(ambient_rows(env.ring(), 1, None));
    let k = Howell::new(env.ring().coeff().modulus(), env.ring().width(), rows, false);
    let solution_in_domain = desc.eta.entries().iter().all(|a| k.contains(&ring_nf(a)));
    let all = pieces.iter().all(|p| p.status == CheckStatus::Verified);
    let status =
        if all && terminates && solution_in_domain { CheckStatus::Verified } else { CheckStatus::Inconclusive };
    Ok(UniquenessReport { pieces, terminates, solution_in_domain, status })
}

fn ring_nf(a: &Elt) -> Vec<u64> {
    a.ctx().normal_form(a.coeffs())
}
