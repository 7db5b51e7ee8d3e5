//! Brute-force cardinalities of the congruence filtration
//! `G_mu(A, I) ∩ G^{>=m}(A)` over a finite truncated ring.

use std::collections::HashSet;

use serde::Serialize;

use crate::bkmod::Cocharacter;
use crate::displays::{membership_display_group, GroupDescriptor};
use crate::error::{Error, Result};
use crate::prisms::PrismCtx;
use crate::rings::matrix::{ambient_rows, flatten, module_rows};
use crate::rings::{DeltaCtx, Elt, Mat};
use crate::zlinalg::Howell;

/// One graded piece `G^{>=m}_mu / G^{>=m+1}_mu`, as `log_p` of its size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientPiece {
    pub m: u32,
    pub observed_log: u32,
    pub expected_log: u32,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedQuotientReport {
    pub p: u64,
    /// `log_p |G_mu(A, I)|`.
    pub total_log: u32,
    pub pieces: Vec<QuotientPiece>,
}

impl GradedQuotientReport {
    pub fn all_match(&self) -> bool {
        self.pieces.iter().all(|q| q.matches)
    }
}

/// Every element of the finite ring `A`.
fn enumerate_ring(ctx: &std::sync::Arc<DeltaCtx>) -> Vec<Elt> {
    let w = ctx.width();
    let q = ctx.coeff().modulus().value();
    let total = (q as u128).pow(w as u32);
    let mut out = Vec::with_capacity(total as usize);
    let mut c = vec![0u64; w];
    loop {
        out.push(Elt::from_raw(ctx, c.clone()));
        let mut k = 0;
        loop {
            if k == w {
                return dedup(ctx, out);
            }
            c[k] += 1;
            if c[k] < q {
                break;
            }
            c[k] = 0;
            k += 1;
        }
    }
}

/// Drops duplicates modulo the ring's relations.
fn dedup(ctx: &std::sync::Arc<DeltaCtx>, v: Vec<Elt>) -> Vec<Elt> {
    let mut seen = HashSet::new();
    v.into_iter().filter(|a| seen.insert(ctx.normal_form(a.coeffs()))).collect()
}

/// Canonical residues modulo `E^m A`.
struct Quotient {
    h: Howell,
}

impl Quotient {
    fn new(pr: &PrismCtx, m: u32) -> Quotient {
        let ctx = pr.ring();
        let mut rows = module_rows(ctx, &[vec![pr.e().pow(m as u64)]]);
        rows.extend(ambient_rows(ctx, 1, None));
        Quotient { h: Howell::new(ctx.coeff().modulus(), ctx.width(), rows, false) }
    }
    fn key(&self, g: &Mat) -> Vec<u64> {
        g.entries().iter().flat_map(|a| self.h.normal_form(&flatten(std::slice::from_ref(a)))).collect()
    }
    fn log_ideal(&self) -> u32 {
        self.h.log_size()
    }
}

fn ilog(p: u64, mut x: u64) -> Option<u32> {
    let mut k = 0;
    while x > 1 {
        if !x.is_multiple_of(p) {
            return None;
        }
        x /= p;
        k += 1;
    }
    Some(k)
}

/// Counts `|G^{>=m}_mu / G^{>=m+1}_mu|` for `m = 0..=m_max` by enumerating
/// `GL_n(A)` and compares with `|P_mu(A/I)|` for `m = 0` and with
/// `|I^m / I^{m+1}|^{dim of weights <= m}` for `m >= 1`.
pub fn graded_quotients(
    desc: &GroupDescriptor,
    mu: &Cocharacter,
    pr: &PrismCtx,
    m_max: u32,
    budget: u64,
) -> Result<GradedQuotientReport> {
    let n = match desc {
        GroupDescriptor::Gl(n) => *n,
        GroupDescriptor::Orth(_) => {
            return Err(Error::Budget("brute-force enumeration is only offered for GL_n".into()));
        }
    };
    desc.check_mu(mu)?;
    let ctx = pr.ring().clone();
    let p = ctx.coeff().modulus().p();
    let elts = enumerate_ring(&ctx);
    let count = (elts.len() as u128).checked_pow((n * n) as u32).unwrap_or(u128::MAX);
    if count > budget as u128 {
        return Err(Error::Budget(format!("{count} matrices exceed the budget {budget}")));
    }
    let quots: Vec<Quotient> = (0..=m_max + 1).map(|m| Quotient::new(pr, m)).collect();
    let id = Mat::identity(&ctx, n);
    let id_keys: Vec<Vec<u64>> = quots.iter().map(|q| q.key(&id)).collect();
    // congr[m] = #{g in G_mu : g = 1 mod I^m}
    let mut congr = vec![0u64; m_max as usize + 2];
    let mut idx = vec![0usize; n * n];
    loop {
        let g = Mat::from_fn(n, n, |i, j| elts[idx[i * n + j]].clone());
        if membership_display_group(desc, pr, mu, &g).is_some() {
            for (m, q) in quots.iter().enumerate() {
                if q.key(&g) == id_keys[m] {
                    congr[m] += 1;
                } else {
                    break;
                }
            }
        }
        let mut k = 0;
        loop {
            if k == n * n {
                break;
            }
            idx[k] += 1;
            if idx[k] < elts.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == n * n {
            break;
        }
    }
    let total_log = ilog(p, congr[0]).ok_or_else(|| Error::Validation("group order is not a power of p".into()))?;
    let mut pieces = Vec::new();
    for m in 0..=m_max {
        let (a, b) = (congr[m as usize], congr[m as usize + 1]);
        let observed_log = if a % b == 0 { ilog(p, a / b) } else { None };
        let expected_log = if m == 0 {
            log_parabolic_mod_e(pr, mu, &elts, &quots[1])?
        } else {
            let dim = desc.lie_basis(mu).iter().filter(|v| v.weight <= m as i64).count() as u32;
            dim * (quots[m as usize].log_ideal() - quots[m as usize + 1].log_ideal())
        };
        let observed = observed_log.unwrap_or(u32::MAX);
        pieces.push(QuotientPiece { m, observed_log: observed, expected_log, matches: observed == expected_log });
    }
    Ok(GradedQuotientReport { p, total_log, pieces })
}

/// `log_p |P_mu(A/I)|` by enumerating block upper triangular matrices over
/// residues modulo `I`.
fn log_parabolic_mod_e(pr: &PrismCtx, mu: &Cocharacter, elts: &[Elt], q: &Quotient) -> Result<u32> {
    let mut seen = HashSet::new();
    let reps: Vec<&Elt> = elts.iter().filter(|a| seen.insert(q.key(&Mat::diag(&[(*a).clone()])))).collect();
    let n = mu.rank();
    let w = mu.weights();
    let free: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| w[i] >= w[j]).collect();
    let ctx = pr.ring();
    let mut idx = vec![0usize; free.len()];
    let mut count: u64 = 0;
    loop {
        let mut g = Mat::zeros(ctx, n, n);
        for (k, &(i, j)) in free.iter().enumerate() {
            g.set(i, j, reps[idx[k]].clone());
        }
        if g.det().is_unit() {
            count += 1;
        }
        let mut k = 0;
        while k < free.len() {
            idx[k] += 1;
            if idx[k] < reps.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == free.len() {
            break;
        }
    }
    ilog(ctx.coeff().modulus().p(), count)
        .ok_or_else(|| Error::Validation("parabolic order is not a power of p".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bkmod::tests::prism;

    #[test]
    fn gl1_pieces() {
        let pr = prism(2, 2, 2, "2 + t");
        let mu = Cocharacter::new(vec![0]).unwrap();
        let r = graded_quotients(&GroupDescriptor::Gl(1), &mu, &pr, 2, 1 << 20).unwrap();
        assert!(r.all_match(), "{r:?}");
    }

    #[test]
    fn gl2_pieces() {
        let pr = prism(2, 2, 2, "2 + t");
        let mu = Cocharacter::new(vec![1, 0]).unwrap();
        let r = graded_quotients(&GroupDescriptor::Gl(2), &mu, &pr, 1, 1 << 20).unwrap();
        assert!(r.all_match(), "{r:?}");
        assert_eq!(r.total_log, 12);
    }
}
