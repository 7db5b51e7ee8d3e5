//! Oriented prisms of Breuil-Kisin type, distinguished elements, division by
//! powers of the orientation, and maps of prisms.

pub mod envelope;
pub mod kernel;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rings::matrix::module_span;
use crate::rings::{DeltaCtx, Elt, Prec};

pub use envelope::{build_coproduct, EnvelopeCtx};
pub use kernel::{verify_kernel_lemmas, CheckStatus, KernelDivider, LemmaCheck};

/// An oriented prism `(A, (E))` with a witness that `E` is distinguished.
#[derive(Clone, Debug)]
pub struct PrismCtx {
    ring: Arc<DeltaCtx>,
    e: Elt,
    delta_e_inv: Elt,
    e_t: Option<u32>,
}

/// `delta(a)` for an element known exactly: the computation runs with one
/// extra `p`-digit, so no precision is lost.
pub fn exact_delta(a: &Elt) -> Result<Elt> {
    let ctx = a.ctx();
    if ctx.has_relations() {
        return a.delta();
    }
    let coeff = ctx.coeff();
    let hi = coeff.with_precision(coeff.n() + coeff.e())?;
    let names = ctx.algebra().names().to_vec();
    let m = ctx.algebra().m();
    let base = DeltaCtx::with_q_power_frobenius(hi, names, m)?;
    // Reuse the variable Frobenius images of the original ring.
    let images = (0..ctx.algebra().nvars())
        .map(|v| {
            if !ctx.phi_defined(v) {
                return Ok(None);
            }
            let img = ctx.var(v).phi()?;
            Ok(Some(img.embed(&base)?.coeffs().to_vec()))
        })
        .collect::<Result<Vec<_>>>()?;
    let hi_ctx = base.with_phi(images);
    let d = a.embed(&hi_ctx)?.delta()?;
    Ok(d.embed(ctx)?.with_prec(a.prec()))
}

/// `pi`-membership in the ideal `(d, phi(d))`.
fn pi_in_d_phi_d(d: &Elt) -> Result<bool> {
    let ctx = d.ctx();
    let h = module_span(ctx, 1, &[vec![d.clone()], vec![d.phi()?]], None, false);
    Ok(h.contains(ctx.pi().coeffs()))
}

impl PrismCtx {
    pub fn ring(&self) -> &Arc<DeltaCtx> {
        &self.ring
    }
    /// The orientation generator `E`.
    pub fn e(&self) -> &Elt {
        &self.e
    }
    /// Inverse of `delta(E)`.
    pub fn delta_e_inverse(&self) -> &Elt {
        &self.delta_e_inv
    }
    /// `t`-adic order of `E mod pi`; `None` when `E` lies in `pi * A`.
    pub fn e_t(&self) -> Option<u32> {
        self.e_t
    }
    /// Crystalline type: `E` is `pi` times a unit.
    pub fn is_crystalline(&self) -> bool {
        self.e_t.is_none()
    }

    /// Ledger after dividing an element of ledger `p` by `E^k`.
    pub fn div_prec(&self, p: Prec, k: u32) -> Prec {
        if self.is_crystalline() {
            Prec { n: p.n.saturating_sub(k), m: p.m, s: p.s.saturating_sub(k) }
        } else {
            Prec { n: p.n, m: p.m, s: p.adic().saturating_sub(k) }
        }
    }

    /// Decides `a in E^k A`, returning a quotient when it is.
    pub fn ideal_pow_membership(&self, a: &Elt, k: u32) -> (bool, Option<Elt>) {
        if a.is_exact_zero() {
            return (true, Some(self.ring.zero().with_prec(self.div_prec(a.prec(), k))));
        }
        let ek = self.e.pow(k as u64);
        let h = module_span(&self.ring, 1, &[vec![ek]], None, true);
        match h.witness(a.coeffs()) {
            None => (false, None),
            Some(w) => {
                let q = Elt::from_raw(&self.ring, w[..self.ring.width()].to_vec());
                (true, Some(q.with_prec(self.div_prec(a.prec(), k))))
            }
        }
    }

    /// `a / E^k`, failing when `a` is not a multiple.
    pub fn divide(&self, a: &Elt, k: u32) -> Result<Elt> {
        match self.ideal_pow_membership(a, k) {
            (true, Some(q)) => Ok(q),
            _ => Err(Error::Membership(format!("{a} is not divisible by E^{k}"))),
        }
    }
}

/// Validates `E` and builds the prism `(A, (E))`.
pub fn make_bk_prism(ring: &Arc<DeltaCtx>, e: Elt) -> Result<PrismCtx> {
    let coeff = ring.coeff();
    let c0 = e.constant_term().to_vec();
    if coeff.val(&c0) != 1 {
        return Err(Error::BadConstantTerm(format!(
            "constant term {} of E has pi-valuation {}, expected 1",
            coeff.format(&c0),
            coeff.val(&c0)
        )));
    }
    let de = exact_delta(&e)?;
    let delta_e_inv = de.inv().map_err(|_| Error::NotDistinguished(format!("delta(E) = {de} is not a unit")))?;
    if !(&delta_e_inv * &de).eq_cert(&ring.one()) {
        return Err(Error::NotDistinguished("unit witness for delta(E) failed".into()));
    }
    if !pi_in_d_phi_d(&e)? {
        return Err(Error::NotDistinguished("pi is not in (E, phi(E))".into()));
    }
    let df = coeff.degree();
    let e_t = (0..ring.algebra().len())
        .find(|&i| coeff.is_unit(&e.coeffs()[i * df..(i + 1) * df]))
        .map(|i| ring.algebra().degree(i));
    Ok(PrismCtx { ring: ring.clone(), e, delta_e_inv, e_t })
}

/// Both tests for distinguishedness of `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Distinguished {
    /// `delta(d)` is a unit.
    pub flag: bool,
    /// `pi` lies in `(d, phi(d))`.
    pub equiv_check: bool,
}

/// Runs the unit test and the ideal-membership test; for `d` in the
/// maximal ideal the two agree.
pub fn is_distinguished(d: &Elt) -> Result<Distinguished> {
    if d.prec().n < 2 {
        return Err(Error::PrecisionExhausted("distinguishedness needs two pi-digits".into()));
    }
    let flag = exact_delta(d)?.is_unit();
    let equiv_check = pi_in_d_phi_d(d)?;
    Ok(Distinguished { flag, equiv_check })
}

/// A map of prisms given by variable images, with coefficients embedded.
#[derive(Clone, Debug)]
pub struct PrismMap {
    pub src: PrismCtx,
    pub dst: PrismCtx,
    images: Vec<Elt>,
    unit: Elt,
}

impl PrismMap {
    /// Builds and validates `f`: it must commute with `phi` on the
    /// variables and send `E` to a unit multiple of `E'`.
    pub fn new(src: &PrismCtx, dst: &PrismCtx, images: Vec<Elt>) -> Result<Self> {
        if images.len() != src.ring.algebra().nvars() {
            return Err(Error::Dimension("one image per source variable is required".into()));
        }
        let map = PrismMap { src: src.clone(), dst: dst.clone(), images, unit: dst.ring.one() };
        for v in 0..src.ring.algebra().nvars() {
            let lhs = map.apply_raw(&src.ring.var(v).phi()?)?;
            let rhs = map.images[v].phi()?;
            if !lhs.eq_cert(&rhs) {
                return Err(Error::Validation(format!("map does not commute with phi on variable {v}")));
            }
        }
        let fe = map.apply_raw(&src.e)?;
        let unit = dst.divide(&fe, 1).map_err(|_| Error::Validation("image of E is not a multiple of E'".into()))?;
        if !unit.is_unit() {
            return Err(Error::Validation("image of E is not a unit multiple of E'".into()));
        }
        Ok(PrismMap { unit, ..map })
    }

    /// The identity map.
    pub fn identity(pr: &PrismCtx) -> Result<Self> {
        let images = (0..pr.ring.algebra().nvars()).map(|v| pr.ring.var(v)).collect();
        Self::new(pr, pr, images)
    }

    fn apply_raw(&self, a: &Elt) -> Result<Elt> {
        let src = a.ctx();
        let imgs: Vec<Option<Elt>> = self.images.iter().cloned().map(Some).collect();
        if src.coeff().f_ints() == self.dst.ring.coeff().f_ints() && src.coeff().k() == self.dst.ring.coeff().k() {
            return a.substitute(&self.dst.ring, &imgs);
        }
        // Different coefficient rings: embed the coefficients termwise.
        let alg = src.algebra();
        let mut out = self.dst.ring.zero();
        for i in 0..alg.len() {
            let b = a.coeff_at(i);
            if b.iter().all(|&x| x == 0) {
                continue;
            }
            let mono = src.term(b, alg.exps(i)).embed_constant_of(&self.dst.ring, i)?;
            let mut term = mono;
            for (v, &k) in alg.exps(i).iter().enumerate() {
                if k > 0 {
                    term = &term * &self.images[v].pow(k as u64);
                }
            }
            out = &out + &term;
        }
        Ok(out.with_prec(a.prec()))
    }

    /// Applies the map to an element of the source ring.
    pub fn apply(&self, a: &Elt) -> Result<Elt> {
        self.apply_raw(a)
    }

    /// The unit `u` with `f(E) = u * E'`.
    pub fn unit(&self) -> &Elt {
        &self.unit
    }
}

impl Elt {
    /// The coefficient of monomial `i`, embedded as a constant of `target`.
    fn embed_constant_of(&self, target: &Arc<DeltaCtx>, i: usize) -> Result<Elt> {
        let c = self.ctx().constant(self.coeff_at(i));
        c.embed(target)
    }
}
