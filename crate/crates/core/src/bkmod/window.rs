//! Windows `(N, Fil^1 N, Phi, Phi_1)` and their correspondence with
//! minuscule modules.
//!
//! A window is presented on `N = A^n` by a basis `B` of `Fil^1 N`, the
//! matrix `C` with `B C = E I` (the inclusion `E N in Fil^1 N`), the values
//! `P_1 = Phi_1(B)` and the matrix `Phi` of `Phi` on the standard basis, so
//! that `Phi = P_1 phi(C)`.

use crate::bkmod::{hodge_and_classify, BkModule, Lattice, Verdict};
use crate::error::{Error, Result};
use crate::prisms::PrismCtx;
use crate::rings::{Elt, Mat};

#[derive(Clone, Debug)]
pub struct Window {
    pub prism: PrismCtx,
    pub rank: usize,
    /// Columns form a basis of `Fil^1 N`.
    pub fil1: Mat,
    /// `fil1 * d_in_fil1 = E * I`.
    pub d_in_fil1: Mat,
    /// `Phi_1` on the basis of `Fil^1 N`.
    pub phi1: Mat,
    /// `Phi` on the standard basis of `N`.
    pub phi: Mat,
}

impl Window {
    /// Checks the window axioms on the presentation.
    pub fn validate(&self) -> Result<()> {
        if self.rank == 0 {
            return Ok(());
        }
        let ctx = self.prism.ring();
        let e_id = Mat::identity(ctx, self.rank).scale(self.prism.e());
        if !self.fil1.mul(&self.d_in_fil1).eq_cert(&e_id) {
            return Err(Error::Validation("E N is not presented inside Fil^1 N".into()));
        }
        if !self.phi.eq_cert(&self.phi1.mul(&self.d_in_fil1.phi()?)) {
            return Err(Error::Validation("Phi(x) != Phi_1(E x)".into()));
        }
        if !self.phi1.det().is_unit() {
            return Err(Error::Validation("linearization of Phi_1 is not invertible".into()));
        }
        let m = minuscule_of(self)?;
        if hodge_and_classify(&m).displayed != Verdict::True {
            return Err(Error::Validation("P^1 is not a direct summand of N / E N".into()));
        }
        Ok(())
    }
}

/// The window of a minuscule module: `N = phi^*M`, `Fil^1 N = Fil^1(phi^*M)`
/// with basis `E F^{-1}`, and `Phi_1(E F^{-1} e_j) = e_j`.
pub fn window_of(m: &BkModule) -> Result<Window> {
    let pr = m.prism().clone();
    let n = m.rank();
    if n == 0 {
        let z = Mat::from_fn(0, 0, |_, _| pr.ring().zero());
        return Ok(Window { prism: pr, rank: 0, fil1: z.clone(), d_in_fil1: z.clone(), phi1: z.clone(), phi: z });
    }
    let class = hodge_and_classify(m);
    if class.minuscule != Verdict::True || !class.minuscule_cokernel {
        return Err(Error::WrongType("module is not minuscule".into()));
    }
    let ctx = pr.ring().clone();
    let f = m.f_num();
    let ft = f.transpose();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let rhs: Vec<Elt> = (0..n).map(|j| if i == j { pr.e().clone() } else { ctx.zero() }).collect();
        let b = Lattice::solve(&ft, &rhs).ok_or_else(|| Error::Membership("E F^{-1} is not integral".into()))?;
        rows.push(b);
    }
    let fil1 = Mat::from_rows(rows)?;
    let phi1 = Mat::identity(&ctx, n);
    let phi = f.phi()?;
    let w = Window { prism: pr, rank: n, fil1, d_in_fil1: f.clone(), phi1, phi };
    w.validate()?;
    Ok(w)
}

/// The minuscule module `(Fil^1 N, E (1 (x) Phi_1))` in the basis `B`:
/// `F = B^{-1} E P_1 = C P_1`.
pub fn minuscule_of(w: &Window) -> Result<BkModule> {
    if w.rank == 0 {
        return BkModule::new(&w.prism, w.phi1.clone(), 0);
    }
    BkModule::new(&w.prism, w.d_in_fil1.mul(&w.phi1), 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bkmod::tests::prism;
    use crate::bkmod::{make_banal_bk, Cocharacter};

    #[test]
    fn round_trip() {
        let pr = prism(3, 4, 6, "3 + t");
        let ctx = pr.ring().clone();
        let m = make_banal_bk(&pr, &Cocharacter::new(vec![1, 0]).unwrap(), &Mat::identity(&ctx, 2)).unwrap();
        let w = window_of(&m).unwrap();
        assert!(w.fil1.eq_cert(&Mat::diag(&[ctx.one(), pr.e().clone()])));
        let back = minuscule_of(&w).unwrap();
        assert!(back.f_num().eq_cert(m.f_num()));
        let nm = make_banal_bk(&pr, &Cocharacter::new(vec![2, 0]).unwrap(), &Mat::identity(&ctx, 2)).unwrap();
        assert!(window_of(&nm).is_err());
    }
}
