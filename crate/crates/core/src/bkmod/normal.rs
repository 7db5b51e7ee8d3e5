//! Normal decompositions of displayed modules and the standard form
//! `(A^n, mu(E) X)` of a banal module.

use serde::Serialize;

use crate::bkmod::filtration::Hodge;
use crate::bkmod::{fil_mu, hodge_and_classify, BkModule, Cocharacter, Lattice, Verdict};
use crate::error::{Error, Result};
use crate::rings::matrix::ambient_rows;
use crate::rings::{Elt, Mat, Prec};

/// `h : A^n -> phi^*M` carrying `Fil^i_mu` onto `Fil^i(phi^*M)`; the columns
/// of weight `j` span the summand `L_j`.
#[derive(Clone, Debug)]
pub struct NormalDecomposition {
    pub h: Mat,
    pub mu: Cocharacter,
}

/// Lattice of `m^l A^n`, the tolerance for comparisons at decision precision.
fn slack(m: &BkModule, lp: u32) -> Lattice {
    let ctx = m.prism().ring();
    let mp = ctx.model_prec();
    Lattice::from_rows(ctx, m.rank(), ambient_rows(ctx, m.rank(), Some(Prec { n: mp.n, m: mp.m, s: lp })))
}

/// Chooses bases of the graded pieces `P^i / P^{i+1}`, lifts them into
/// `Fil^i`, and assembles the lifts by descending level.
pub fn normal_decomposition(m: &BkModule) -> Result<NormalDecomposition> {
    let class = hodge_and_classify(m);
    if class.displayed != Verdict::True {
        return Err(Error::WrongType(format!("module is not displayed (verdict {:?})", class.displayed)));
    }
    let mu = class.mu.clone().expect("displayed modules have a type");
    let n = m.rank();
    let ctx = m.prism().ring().clone();
    if n == 0 {
        return Ok(NormalDecomposition { h: Mat::from_fn(0, 0, |_, _| ctx.zero()), mu });
    }
    let hodge = Hodge::compute(m);
    let mut cols: Vec<Vec<Elt>> = Vec::with_capacity(n);
    for piece in class.pieces.iter().rev() {
        let i = piece.level;
        let mut cur = hodge.fil(i).times_maximal().plus(hodge.p(i + 1));
        let mut chosen = 0;
        for v in hodge.fil(i).vectors() {
            if chosen == piece.rank {
                break;
            }
            if !cur.contains(&v) {
                cur = cur.plus(&Lattice::generated(&ctx, n, std::slice::from_ref(&v)));
                cols.push(v);
                chosen += 1;
            }
        }
        if chosen != piece.rank {
            return Err(Error::Validation(format!("could not lift a basis of the graded piece at level {i}")));
        }
    }
    let h = Mat::from_fn(n, n, |i, j| cols[j][i].clone());
    if !h.det().is_unit() {
        return Err(Error::Validation("lifted basis is not a basis".into()));
    }
    let nd = NormalDecomposition { h, mu };
    if !verify_normal(m, &nd)? {
        return Err(Error::Validation("normal decomposition does not match the filtration".into()));
    }
    Ok(nd)
}

/// Span equality `h(Fil^i_mu) = Fil^i(phi^*M)` at every level, modulo the
/// decision precision.
pub fn verify_normal(m: &BkModule, nd: &NormalDecomposition) -> Result<bool> {
    let hodge = Hodge::compute(m);
    let tol = slack(m, hodge.lp.max(1));
    for i in hodge.lo..=hodge.hi {
        let lhs = Lattice::columns(&nd.h.mul(&fil_mu(m.prism(), &nd.mu, i))).plus(&tol);
        let rhs = hodge.fil(i).plus(&tol);
        if !lhs.same_as(&rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `X` with `(A^n, mu(E) X)` isomorphic to the module through `h_d`.
#[derive(Clone, Debug)]
pub struct StandardForm {
    pub x: Mat,
    pub mu: Cocharacter,
    pub h: Mat,
    /// `h_d = F h mu(E)^{-1}`, an isomorphism `(A^n, mu(E) X) -> M`.
    pub h_d: Mat,
}

/// Serializable summary of a standard form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StandardFormRecord {
    pub mu: Cocharacter,
    pub x: Vec<Vec<String>>,
    pub precision: Prec,
}

impl StandardForm {
    pub fn record(&self) -> StandardFormRecord {
        StandardFormRecord { mu: self.mu.clone(), x: self.x.to_strings(), precision: self.x.prec() }
    }
}

/// Standard form via `X = h^{-1} phi(h_d)`; the isomorphism
/// `F phi(h_d) = h_d mu(E) X` is checked before returning.
pub fn to_standard_form(m: &BkModule) -> Result<StandardForm> {
    let nd = normal_decomposition(m)?;
    let pr = m.prism();
    let n = m.rank();
    let k = m.denom_k() as i64;
    let fh = m.f_num().mul(&nd.h);
    let mut h_d = fh.clone();
    for j in 0..n {
        let pow = nd.mu.weights()[j] + k;
        if pow < 0 {
            return Err(Error::Validation("weight below the denominator of F".into()));
        }
        for i in 0..n {
            let q = pr.divide(fh.at(i, j), pow as u32)?;
            h_d.set(i, j, q);
        }
    }
    let x = nd.h.inv()?.mul(&h_d.phi()?);
    let sf = StandardForm { x, mu: nd.mu.clone(), h: nd.h, h_d };
    if !is_standard_iso(m, &sf)? {
        return Err(Error::Validation("standard form does not intertwine the Frobenius".into()));
    }
    Ok(sf)
}

/// `F phi(h_d) = h_d mu(E) X`, with denominators cleared.
pub fn is_standard_iso(m: &BkModule, sf: &StandardForm) -> Result<bool> {
    let e = m.prism().e();
    let c = sf.mu.shift();
    let lhs = m.f_num().mul(&sf.h_d.phi()?).scale(&e.pow(c as u64));
    let rhs = sf.h_d.mul(&sf.mu.shifted_diag(e)).mul(&sf.x).scale(&e.pow(m.denom_k() as u64));
    Ok(lhs.eq_cert(&rhs) && sf.h_d.det().is_unit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bkmod::make_banal_bk;
    use crate::bkmod::tests::prism;
    use crate::rings::parse_elt;

    #[test]
    fn identity_and_generic() {
        let pr = prism(3, 4, 6, "3 + t");
        let ctx = pr.ring().clone();
        let mu = Cocharacter::new(vec![1, 0]).unwrap();
        let m = make_banal_bk(&pr, &mu, &Mat::identity(&ctx, 2)).unwrap();
        let nd = normal_decomposition(&m).unwrap();
        assert!(verify_normal(&m, &nd).unwrap());
        let sf = to_standard_form(&m).unwrap();
        assert_eq!(sf.mu, mu);

        let e = |s: &str| parse_elt(&ctx, s).unwrap();
        let x0 = Mat::from_rows(vec![vec![e("1 + t"), e("2 + t^3")], vec![e("t"), e("1 - t")]]).unwrap();
        let m = make_banal_bk(&pr, &mu, &x0).unwrap();
        let sf = to_standard_form(&m).unwrap();
        let back = make_banal_bk(&pr, &sf.mu, &sf.x).unwrap();
        assert!(m.is_isomorphism_from(&back, &sf.h_d).unwrap());
    }

    #[test]
    fn negative_weights() {
        let pr = prism(3, 6, 8, "3 + t");
        let ctx = pr.ring().clone();
        let mu = Cocharacter::new(vec![1, 0, -1]).unwrap();
        let e = |s: &str| parse_elt(&ctx, s).unwrap();
        let x0 = Mat::from_rows(vec![
            vec![e("1"), e("t"), e("0")],
            vec![e("3"), e("1"), e("t^2")],
            vec![e("0"), e("1 + t"), e("1")],
        ])
        .unwrap();
        let m = make_banal_bk(&pr, &mu, &x0).unwrap();
        let sf = to_standard_form(&m).unwrap();
        assert_eq!(sf.mu, mu);
    }
}
