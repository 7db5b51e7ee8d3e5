//! The truncated self-coproduct `A^(2)` of a Breuil-Kisin type prism.
//!
//! `A^(2)` is presented as a polynomial ring in `t_i`, `x_i` and `Y_{i,j}`
//! (`0 <= j <= D`) modulo the relations `rho_{i,j} = delta^j(E*Y_{i,0} - x_i)`
//! and the degree truncation. Here `x_i` stands for `p2(t_i) - p1(t_i)` and
//! `Y_{i,j}` for `delta^j(x_i / E)`; the Frobenius is
//! `phi(x_i) = (x_i + t_i)^q - t_i^q`, `phi(Y_{i,j}) = Y_{i,j}^q + pi*Y_{i,j+1}`
//! and is left undefined on `Y_{i,D}`.
//!
//! Relations are reduced by linear algebra: the relation ideal is the row span
//! of all monomial multiples of the `rho_{i,j}`. The elimination order puts
//! monomials containing some `x_i` first and deeper `Y`s before shallower
//! ones, so normal forms are written in `t` and shallow `Y`s where possible.
//!
//! Every statement decided here holds modulo the relations and the degree
//! truncation; since the presented relations hold in the true coproduct, a
//! verified identity is an identity in its quotient by the truncation ideal.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::prisms::{make_bk_prism, PrismCtx};
use crate::rings::matrix::module_rows;
use crate::rings::{DeltaCtx, Elt};

/// The presented coproduct with its structure maps.
#[derive(Clone, Debug)]
pub struct EnvelopeCtx {
    base: PrismCtx,
    depth: usize,
    r: usize,
    free: Arc<DeltaCtx>,
    ring: Arc<DeltaCtx>,
    relations: Vec<Vec<Elt>>,
    prism: PrismCtx,
}

fn names(r: usize, depth: usize) -> Vec<String> {
    let mut v: Vec<String> = (0..r).map(|i| format!("t{i}")).collect();
    v.extend((0..r).map(|i| format!("x{i}")));
    for i in 0..r {
        v.extend((0..=depth).map(|j| format!("y{i}_{j}")));
    }
    v
}

/// Frobenius images of the envelope variables, computed inside `ctx`.
fn phi_images(ctx: &Arc<DeltaCtx>, r: usize, depth: usize) -> Vec<Option<Vec<u64>>> {
    let q = ctx.coeff().q();
    let pi = ctx.pi();
    let mut out = Vec::new();
    for i in 0..r {
        out.push(Some(ctx.var(i).pow(q).coeffs().to_vec()));
    }
    for i in 0..r {
        let t = ctx.var(i);
        let x = ctx.var(r + i);
        let img = &(&x + &t).pow(q) - &t.pow(q);
        out.push(Some(img.coeffs().to_vec()));
    }
    for i in 0..r {
        for j in 0..=depth {
            let v = 2 * r + i * (depth + 1) + j;
            if j == depth {
                out.push(None);
            } else {
                let img = &ctx.var(v).pow(q) + &(&pi * &ctx.var(v + 1));
                out.push(Some(img.coeffs().to_vec()));
            }
        }
    }
    out
}

fn presented(coeff: crate::rings::CoeffRing, r: usize, depth: usize, m: u32) -> Result<Arc<DeltaCtx>> {
    let base = DeltaCtx::with_q_power_frobenius(coeff, names(r, depth), m)?;
    let images = phi_images(&base, r, depth);
    Ok(base.with_phi(images))
}

/// Builds `A^(2)` with `delta`-depth `depth`. `budget` caps the number of
/// flat coordinates of one element.
pub fn build_coproduct(pr: &PrismCtx, depth: usize, budget: usize) -> Result<EnvelopeCtx> {
    if depth == 0 {
        return Err(Error::Validation("envelope depth must be at least 1".into()));
    }
    let a = pr.ring();
    if a.has_relations() {
        return Err(Error::Validation("the base of an envelope must be a power series ring".into()));
    }
    let r = a.algebra().nvars();
    let m = a.algebra().m();
    let coeff = a.coeff().clone();
    let free = presented(coeff.clone(), r, depth, m)?;
    if free.width() > budget {
        return Err(Error::Budget(format!(
            "envelope needs {} coordinates per element, budget is {budget}",
            free.width()
        )));
    }
    // Relations are computed with `depth` spare digits; each delta uses one.
    let hi_coeff = coeff.with_precision(coeff.n() + coeff.e() * depth as u32)?;
    let hi = presented(hi_coeff, r, depth, m)?;
    let e_hi = pr.e().embed(&hi)?;
    let mut relations = Vec::with_capacity(r);
    let mut rows = Vec::new();
    for i in 0..r {
        let y0 = hi.var(2 * r + i * (depth + 1));
        let mut rho = &(&e_hi * &y0) - &hi.var(r + i);
        let mut list = Vec::with_capacity(depth + 1);
        for j in 0..=depth {
            if j > 0 {
                rho = rho.delta()?;
            }
            let lo = rho.embed(&free)?;
            rows.extend(module_rows(&free, &[vec![lo.clone()]]));
            list.push(lo);
        }
        relations.push(list);
    }
    // Elimination order on flat coordinates.
    let alg = free.algebra();
    let df = coeff.degree();
    let depth_of = |mono: usize| -> usize {
        let ex = alg.exps(mono);
        let mut d = 0;
        for i in 0..r {
            for j in 0..=depth {
                if ex[2 * r + i * (depth + 1) + j] > 0 {
                    d = d.max(j + 1);
                }
            }
        }
        d
    };
    let has_x = |mono: usize| alg.exps(mono)[r..2 * r].iter().any(|&k| k > 0);
    let mut order: Vec<usize> = (0..free.width()).collect();
    order.sort_by_key(|&k| {
        let mono = k / df;
        (std::cmp::Reverse(has_x(mono)), std::cmp::Reverse(depth_of(mono)), std::cmp::Reverse(alg.degree(mono)), k)
    });
    let ring = free.with_relations(rows, order);
    let relations: Vec<Vec<Elt>> =
        relations.into_iter().map(|l| l.into_iter().map(|e| e.transport(&ring)).collect()).collect();
    let e1 = pr.e().embed(&ring)?;
    let prism = make_bk_prism(&ring, e1)?;
    Ok(EnvelopeCtx { base: pr.clone(), depth, r, free, ring, relations, prism })
}

impl EnvelopeCtx {
    pub fn base(&self) -> &PrismCtx {
        &self.base
    }
    /// The ring `A^(2)` (with relations).
    pub fn ring(&self) -> &Arc<DeltaCtx> {
        &self.ring
    }
    /// The same polynomial ring without relations.
    pub fn free_ring(&self) -> &Arc<DeltaCtx> {
        &self.free
    }
    /// The prism `(A^(2), (p1(E)))`.
    pub fn prism(&self) -> &PrismCtx {
        &self.prism
    }
    pub fn depth(&self) -> usize {
        self.depth
    }
    pub fn r(&self) -> usize {
        self.r
    }
    /// `rho_{i,j}`.
    pub fn relation(&self, i: usize, j: usize) -> &Elt {
        &self.relations[i][j]
    }
    pub fn t(&self, i: usize) -> Elt {
        self.ring.var(i)
    }
    pub fn x(&self, i: usize) -> Elt {
        self.ring.var(self.r + i)
    }
    pub fn y(&self, i: usize, j: usize) -> Elt {
        self.ring.var(self.y_index(i, j))
    }
    /// Variable index of `Y_{i,j}`.
    pub fn y_index(&self, i: usize, j: usize) -> usize {
        2 * self.r + i * (self.depth + 1) + j
    }
    /// Generators of the kernel ideal `K` of the fold map.
    pub fn k_gens(&self) -> Vec<Elt> {
        let mut out = Vec::new();
        for i in 0..self.r {
            for j in 0..=self.depth {
                out.push(self.y(i, j));
            }
        }
        out
    }

    /// First structure map, `t_i -> t_i`.
    pub fn p1(&self, a: &Elt) -> Result<Elt> {
        a.embed(&self.ring)
    }

    /// Second structure map, `t_i -> t_i + x_i`.
    pub fn p2(&self, a: &Elt) -> Result<Elt> {
        let images: Vec<Option<Elt>> = (0..self.r).map(|i| Some(&self.t(i) + &self.x(i))).collect();
        a.substitute(&self.ring, &images)
    }

    /// The fold map `A^(2) -> A`: `t -> t`, `x -> 0`, `Y -> 0`.
    pub fn m(&self, c: &Elt) -> Result<Elt> {
        let a = self.base.ring();
        let mut images: Vec<Option<Elt>> = (0..self.r).map(|i| Some(a.var(i))).collect();
        images.extend((0..self.r).map(|_| Some(a.zero())));
        images.extend((0..self.r * (self.depth + 1)).map(|_| Some(a.zero())));
        c.substitute(a, &images)
    }

    /// Is `c` in the ideal generated by `gens` (modulo the relations)?
    /// Returns coefficient witnesses when it is.
    pub fn ideal_witness(&self, gens: &[Elt], c: &Elt) -> Option<Vec<Elt>> {
        let cols: Vec<Vec<Elt>> = gens.iter().map(|g| vec![g.clone()]).collect();
        let h = crate::rings::matrix::module_span(&self.ring, 1, &cols, None, true);
        let w = h.witness(c.coeffs())?;
        let width = self.ring.width();
        Some((0..gens.len()).map(|g| Elt::from_raw(&self.ring, w[g * width..(g + 1) * width].to_vec())).collect())
    }

    /// Membership of `c` in the ideal generated by `gens`.
    pub fn in_ideal(&self, gens: &[Elt], c: &Elt) -> bool {
        let cols: Vec<Vec<Elt>> = gens.iter().map(|g| vec![g.clone()]).collect();
        crate::rings::matrix::module_span(&self.ring, 1, &cols, None, false).contains(c.coeffs())
    }

    /// Largest `Y`-depth (`j + 1` for `Y_{i,j}`) among monomials with a
    /// nonzero coefficient; zero when no `Y` occurs.
    pub fn y_depth(&self, c: &Elt) -> usize {
        let alg = self.ring.algebra();
        let df = self.ring.coeff().degree();
        let mut d = 0;
        for mono in 0..alg.len() {
            if c.coeffs()[mono * df..(mono + 1) * df].iter().all(|&x| x == 0) {
                continue;
            }
            let ex = alg.exps(mono);
            for i in 0..self.r {
                for j in 0..=self.depth {
                    if ex[self.y_index(i, j)] > 0 {
                        d = d.max(j + 1);
                    }
                }
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{parse_elt, CoeffRing};

    fn env(depth: usize) -> EnvelopeCtx {
        let a = DeltaCtx::series(CoeffRing::zp(2, 3).unwrap(), 1, 4).unwrap();
        let pr = make_bk_prism(&a, parse_elt(&a, "2 + t").unwrap()).unwrap();
        build_coproduct(&pr, depth, 100_000).unwrap()
    }

    #[test]
    fn relations_satisfy_delta_identity() {
        let env = env(1);
        let rho0 = env.relation(0, 0);
        let rho1 = env.relation(0, 1);
        // phi(rho0) - rho0^q = pi * rho1, checked on raw representatives.
        let free = env.free_ring();
        let a = rho0.transport(free);
        let b = rho1.transport(free);
        let lhs = &a.phi().unwrap() - &a.pow(2);
        assert!(lhs.eq_cert(&(&free.pi() * &b)));
        assert!(rho0.is_exact_zero());
    }

    #[test]
    fn structure_maps() {
        let env = env(1);
        let a = env.base().ring().clone();
        let f = parse_elt(&a, "1 + t").unwrap();
        assert!(env.m(&env.p1(&f).unwrap()).unwrap().eq_cert(&f));
        assert!(env.m(&env.p2(&f).unwrap()).unwrap().eq_cert(&f));
        let e = env.base().e().clone();
        let diff = &env.p2(&e).unwrap() - &env.p1(&e).unwrap();
        assert!(env.in_ideal(&env.k_gens(), &diff));
        // x = E * Y_0 in the presented ring.
        let x = env.x(0);
        assert!(x.eq_cert(&(env.prism().e() * &env.y(0, 0))));
        assert!(matches!(env.y(0, 1).phi(), Err(Error::DepthExhausted(_))));
    }
}
