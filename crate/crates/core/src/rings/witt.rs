//! Length-2 ramified Witt vectors over a truncated delta-ring.
//!
//! A pair `(a0, a1)` stands for the ghost components `a0` and
//! `a0^q + pi*a1`. Sum and product are given by explicit polynomials; the
//! sum carry `(a0^q + b0^q - (a0 + b0)^q) / pi` is expanded with integer
//! binomial coefficients so no truncated element is ever divided by `pi`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rings::algebra::{DeltaCtx, Elt};

/// An element of `W_2` over a [`DeltaCtx`].
#[derive(Clone, Debug, PartialEq)]
pub struct Witt2 {
    pub w0: Elt,
    pub w1: Elt,
}

/// `binom(q, i) / p` for `0 < i < q`, reduced into the coefficient ring.
fn binom_over_p(q: u64, i: u64, p: u64) -> u128 {
    let mut b: u128 = 1;
    for k in 0..i {
        b = b * (q - k) as u128 / (k + 1) as u128;
    }
    debug_assert_eq!(b % p as u128, 0);
    b / p as u128
}

/// The carry `(a^q + b^q - (a+b)^q) / pi`.
pub fn sum_carry(a: &Elt, b: &Elt) -> Elt {
    let ctx = a.ctx();
    let coeff = ctx.coeff();
    let q = coeff.q();
    let p = coeff.p();
    let md = coeff.modulus();
    let mut apow = vec![ctx.one()];
    let mut bpow = vec![ctx.one()];
    for _ in 1..q {
        apow.push(apow.last().unwrap() * a);
        bpow.push(bpow.last().unwrap() * b);
    }
    let mut acc = ctx.zero().with_prec(a.prec().min(b.prec()));
    for i in 1..q {
        let c = (binom_over_p(q, i, p) % md.value() as u128) as u64;
        let coef = coeff.scale(coeff.p_over_pi(), c);
        acc = &acc - &(&apow[i as usize] * &bpow[(q - i) as usize]).scale(&coef);
    }
    acc
}

impl Witt2 {
    pub fn new(w0: Elt, w1: Elt) -> Self {
        assert!(Arc::ptr_eq(w0.ctx(), w1.ctx()), "components from different rings");
        Witt2 { w0, w1 }
    }
    pub fn zero(ctx: &Arc<DeltaCtx>) -> Self {
        Witt2::new(ctx.zero(), ctx.zero())
    }
    pub fn one(ctx: &Arc<DeltaCtx>) -> Self {
        Witt2::new(ctx.one(), ctx.zero())
    }

    pub fn add(&self, o: &Witt2) -> Witt2 {
        let carry = sum_carry(&self.w0, &o.w0);
        Witt2::new(&self.w0 + &o.w0, &(&self.w1 + &o.w1) + &carry)
    }

    pub fn mul(&self, o: &Witt2) -> Witt2 {
        let q = self.w0.ctx().coeff().q();
        let pi = self.w0.ctx().pi();
        let w1 = &(&(&self.w0.pow(q) * &o.w1) + &(&o.w0.pow(q) * &self.w1)) + &(&pi * &(&self.w1 * &o.w1));
        Witt2::new(&self.w0 * &o.w0, w1)
    }

    pub fn neg(&self) -> Witt2 {
        let n0 = -&self.w0;
        let carry = sum_carry(&self.w0, &n0);
        Witt2::new(n0, -&(&self.w1 + &carry))
    }

    /// The first-coordinate projection.
    pub fn epsilon(&self) -> &Elt {
        &self.w0
    }

    /// Ghost components `(w0, w0^q + pi*w1)`.
    pub fn ghost(&self) -> (Elt, Elt) {
        let q = self.w0.ctx().coeff().q();
        let g1 = &self.w0.pow(q) + &(&self.w0.ctx().pi() * &self.w1);
        (self.w0.clone(), g1)
    }

    /// Certified equality of both components.
    pub fn eq_cert(&self, o: &Witt2) -> bool {
        self.w0.eq_cert(&o.w0) && self.w1.eq_cert(&o.w1)
    }
}

/// The section `a -> (a, delta(a))`.
pub fn witt2_section(a: &Elt) -> Result<Witt2> {
    if a.prec().n < 2 {
        return Err(Error::PrecisionExhausted("the Witt section needs two pi-digits".into()));
    }
    Ok(Witt2::new(a.clone(), a.delta()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::CoeffRing;

    fn ctx() -> Arc<DeltaCtx> {
        DeltaCtx::series(CoeffRing::zp(2, 4).unwrap(), 1, 6).unwrap()
    }

    #[test]
    fn identity_laws() {
        let c = ctx();
        let a = Witt2::new(&c.int(2) + &c.var(0), c.var(0).pow(2));
        assert!(Witt2::one(&c).mul(&a).eq_cert(&a));
        assert!(Witt2::zero(&c).add(&a).eq_cert(&a));
        assert!(a.add(&a.neg()).eq_cert(&Witt2::zero(&c)));
    }

    #[test]
    fn explicit_values() {
        let c = ctx();
        let t = c.var(0);
        let prod = Witt2::new(t.clone(), c.zero()).mul(&Witt2::new(c.zero(), c.one()));
        assert!(prod.eq_cert(&Witt2::new(c.zero(), t.pow(2))));
        let s = Witt2::new(c.one(), c.zero()).add(&Witt2::new(c.int(-1), c.zero()));
        assert!(s.eq_cert(&Witt2::new(c.zero(), c.one())));
    }

    #[test]
    fn section_values() {
        let c = ctx();
        assert!(witt2_section(&c.one()).unwrap().eq_cert(&Witt2::one(&c)));
        let s = witt2_section(&c.pi()).unwrap();
        assert!(s.w1.eq_cert(&c.int(1 - 2)));
        let a = c.var(0);
        let b = &c.int(2) + &c.var(0);
        let lhs = witt2_section(&a).unwrap().mul(&witt2_section(&b).unwrap());
        assert!(lhs.eq_cert(&witt2_section(&(&a * &b)).unwrap()));
    }
}
