//! Orthogonal modules for the split form `Q(a) = sum_{i <= m} a_i a_{2m+1-i}`
//! and the cocharacter `(1, 0, ..., 0, -1)`.

use std::sync::Arc;

use crate::bkmod::{make_banal_bk, BkModule, Cocharacter};
use crate::error::{Error, Result};
use crate::prisms::PrismCtx;
use crate::rings::{DeltaCtx, Elt, Mat};

/// Antidiagonal Gram matrix of the polar form of `Q`.
pub fn gram_matrix(ctx: &Arc<DeltaCtx>, n: usize) -> Mat {
    Mat::from_fn(n, n, |i, j| if i + j + 1 == n { ctx.one() } else { ctx.zero() })
}

/// `Q(v) = sum_{i < n/2} v_i v_{n-1-i}`.
pub fn quadratic_form(v: &[Elt]) -> Elt {
    let n = v.len();
    let ctx = v[0].ctx().clone();
    (0..n / 2).fold(ctx.zero(), |acc, i| &acc + &(&v[i] * &v[n - 1 - i]))
}

/// `X` preserves `Q`: the polar form is preserved and every column is
/// isotropic. The second condition matters when `p = 2`.
pub fn is_orthogonal(x: &Mat) -> bool {
    let n = x.rows;
    if n == 0 || n % 2 == 1 || !x.is_square() {
        return false;
    }
    let j = gram_matrix(x.ctx(), n);
    x.transpose().mul(&j).mul(x).eq_cert(&j) && (0..n).all(|c| quadratic_form(&x.col(c)).is_zero())
}

/// The cocharacter `t -> diag(t, 1, ..., 1, t^{-1})`.
pub fn orthogonal_mu(n: usize) -> Result<Cocharacter> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::Dimension("orthogonal modules need even rank".into()));
    }
    let mut w = vec![0; n];
    w[0] = 1;
    w[n - 1] = -1;
    Cocharacter::new(w)
}

/// A module of type `(1, 0, ..., 0, -1)` with its compatibility certificate.
#[derive(Clone, Debug)]
pub struct OrthogonalBk {
    pub module: BkModule,
    pub mu: Cocharacter,
    /// `phi(Q(x)) = Q(F(1 (x) x))` on basis vectors and their pairwise sums.
    pub compatible: bool,
}

/// `(A^n, mu(E) X)` for `X in O(Q)(A)`.
pub fn make_orthogonal_bk(pr: &PrismCtx, x: &Mat) -> Result<OrthogonalBk> {
    let mu = orthogonal_mu(x.rows)?;
    if !is_orthogonal(x) {
        return Err(Error::Validation("X does not preserve the quadratic form".into()));
    }
    let module = make_banal_bk(pr, &mu, x)?;
    let compatible = q_compatible(&module)?;
    Ok(OrthogonalBk { module, mu, compatible })
}

/// Checks `E^{2k} phi(Q(v)) = Q(F_num phi(v))` for `v` ranging over `e_i`
/// and `e_i + e_j`.
pub fn q_compatible(m: &BkModule) -> Result<bool> {
    let ctx = m.prism().ring().clone();
    let n = m.rank();
    let e2k = m.prism().e().pow(2 * m.denom_k() as u64);
    for i in 0..n {
        for j in i..n {
            let v: Vec<Elt> = (0..n).map(|c| if c == i || c == j { ctx.one() } else { ctx.zero() }).collect();
            let lhs = &e2k * &quadratic_form(&v).phi()?;
            let rhs = quadratic_form(&m.apply_num(&v)?);
            if !lhs.eq_cert(&rhs) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bkmod::tests::prism;

    #[test]
    fn examples() {
        let pr = prism(3, 3, 4, "3 + t");
        let ctx = pr.ring().clone();
        let id = Mat::identity(&ctx, 4);
        let o = make_orthogonal_bk(&pr, &id).unwrap();
        assert!(o.compatible);
        assert_eq!(o.module.denom_k(), 1);
        let swap = Mat::from_fn(4, 4, |i, j| {
            let s = match i {
                1 => 2,
                2 => 1,
                k => k,
            };
            if s == j {
                ctx.one()
            } else {
                ctx.zero()
            }
        });
        assert!(make_orthogonal_bk(&pr, &swap).unwrap().compatible);
        let bad = Mat::diag(&[ctx.one(), ctx.one(), ctx.one(), ctx.int(2)]);
        assert!(make_orthogonal_bk(&pr, &bad).is_err());
    }
}
