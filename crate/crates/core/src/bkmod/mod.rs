//! Breuil-Kisin modules over an oriented prism `(A, (E))`.
//!
//! Conventions: `M = A^n`, and `phi^*M` is identified with `A^n` through
//! `1 (x) a -> phi(a)`. The Frobenius `F` is the matrix sending the basis
//! `1 (x) e_j` of `phi^*M` to column `j`, stored as `F = F_num / E^k` with
//! `k >= 0` minimal. Coordinates of cocharacters are sorted by descending
//! weight.

pub mod filtration;
pub mod lattice;
pub mod normal;
pub mod orthogonal;
pub mod window;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::prisms::PrismCtx;
use crate::rings::{Elt, Mat, Prec};

pub use filtration::{fil_phi_star, hodge_and_classify, Classification, FilteredPiece, HodgeWitness, Verdict};
pub use lattice::Lattice;
pub use normal::{normal_decomposition, to_standard_form, NormalDecomposition, StandardForm};
pub use orthogonal::{gram_matrix, is_orthogonal, make_orthogonal_bk, quadratic_form, OrthogonalBk};
pub use window::{minuscule_of, window_of, Window};

/// A cocharacter of `GL_n` given by weakly decreasing weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Cocharacter {
    weights: Vec<i64>,
}

impl Cocharacter {
    pub fn new(weights: Vec<i64>) -> Result<Self> {
        if weights.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Validation(format!("weights {weights:?} are not weakly decreasing")));
        }
        Ok(Cocharacter { weights })
    }
    pub fn weights(&self) -> &[i64] {
        &self.weights
    }
    pub fn rank(&self) -> usize {
        self.weights.len()
    }
    pub fn max(&self) -> i64 {
        self.weights.first().copied().unwrap_or(0)
    }
    pub fn min(&self) -> i64 {
        self.weights.last().copied().unwrap_or(0)
    }
    /// `(weight, multiplicity)` pairs in descending order of weight.
    pub fn multiplicities(&self) -> Vec<(i64, usize)> {
        let mut out: Vec<(i64, usize)> = Vec::new();
        for &w in &self.weights {
            match out.last_mut() {
                Some((v, c)) if *v == w => *c += 1,
                _ => out.push((w, 1)),
            }
        }
        out
    }
    /// Shift making every weight non-negative.
    pub fn shift(&self) -> u32 {
        (-self.min()).max(0) as u32
    }
    /// `mu(g) * g^shift = diag(g^{m_i + shift})`.
    pub fn shifted_diag(&self, g: &Elt) -> Mat {
        let c = self.shift() as i64;
        let w: Vec<i64> = self.weights.iter().map(|m| m + c).collect();
        Mat::diag_pow(g, &w)
    }
}

impl fmt::Display for Cocharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", w.join(","))
    }
}

/// Basis of the standard filtration `Fil^i_mu`, as the columns of
/// `diag(E^{max(0, i - m_k)})`.
pub fn fil_mu(pr: &PrismCtx, mu: &Cocharacter, i: i64) -> Mat {
    let w: Vec<i64> = mu.weights().iter().map(|&m| (i - m).max(0)).collect();
    Mat::diag_pow(pr.e(), &w)
}

/// A Breuil-Kisin module `(A^n, F_num / E^k)`.
#[derive(Clone, Debug)]
pub struct BkModule {
    prism: PrismCtx,
    f_num: Mat,
    k: u32,
    det_order: u32,
}

/// Serialized form `{rank, denom_k, F_num}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BkRecord {
    pub rank: usize,
    pub denom_k: u32,
    pub f_num: Vec<Vec<String>>,
}

/// `(s, u)` with `a = E^s * u` and `u` a unit.
pub fn e_order(pr: &PrismCtx, a: &Elt) -> Result<(u32, Elt)> {
    let mut s = 0;
    let mut cur = a.clone();
    while !cur.is_unit() {
        if s as usize > a.ctx().algebra().m() as usize + a.ctx().coeff().n() as usize {
            return Err(Error::Validation("determinant is not a power of E times a unit".into()));
        }
        cur = pr
            .divide(&cur, 1)
            .map_err(|_| Error::Validation(format!("determinant {a} is not a power of E times a unit")))?;
        s += 1;
    }
    Ok((s, cur))
}

impl BkModule {
    /// Builds `F = F_num / E^k`, lowering `k` while every entry of `F_num`
    /// is a multiple of `E`, and checks `det F_num = E^s * unit`.
    pub fn new(prism: &PrismCtx, f_num: Mat, k: u32) -> Result<Self> {
        if !f_num.is_square() {
            return Err(Error::Dimension("Frobenius matrix must be square".into()));
        }
        let mut f_num = f_num;
        let mut k = k;
        while k > 0 {
            let divided: Option<Vec<Elt>> = f_num
                .entries()
                .iter()
                .map(|x| match prism.ideal_pow_membership(x, 1) {
                    (true, Some(q)) => Some(q),
                    _ => None,
                })
                .collect();
            match divided {
                Some(d) => {
                    f_num = Mat::from_fn(f_num.rows, f_num.cols, |i, j| d[i * f_num.cols + j].clone());
                    k -= 1;
                }
                None => break,
            }
        }
        let det_order = if f_num.rows == 0 { 0 } else { e_order(prism, &f_num.det())?.0 };
        Ok(BkModule { prism: prism.clone(), f_num, k, det_order })
    }

    pub fn prism(&self) -> &PrismCtx {
        &self.prism
    }
    pub fn rank(&self) -> usize {
        self.f_num.rows
    }
    pub fn f_num(&self) -> &Mat {
        &self.f_num
    }
    pub fn denom_k(&self) -> u32 {
        self.k
    }
    /// `s` with `det F_num = E^s * unit`.
    pub fn det_order(&self) -> u32 {
        self.det_order
    }
    /// `F` has entries in `A`.
    pub fn is_effective(&self) -> bool {
        self.k == 0
    }
    /// Certified precision of the Frobenius matrix.
    pub fn prec(&self) -> Prec {
        if self.rank() == 0 {
            return self.prism.ring().model_prec();
        }
        self.f_num.prec()
    }

    /// `F(1 (x) x) = F * phi(x)` on a vector of `M`, times `E^k`.
    pub fn apply_num(&self, x: &[Elt]) -> Result<Vec<Elt>> {
        let fx: Vec<Elt> = x.iter().map(|a| a.phi()).collect::<Result<_>>()?;
        Ok(self.f_num.apply(&fx))
    }

    /// Checks that `P : M' -> M` is an isomorphism `other -> self`:
    /// `F phi(P) = P F'`, cleared of denominators.
    pub fn is_isomorphism_from(&self, other: &BkModule, p: &Mat) -> Result<bool> {
        if p.rows != self.rank() || p.cols != other.rank() || !p.det().is_unit() {
            return Ok(false);
        }
        let e = self.prism.e();
        let lhs = self.f_num.mul(&p.phi()?).scale(&e.pow(other.k as u64));
        let rhs = p.mul(&other.f_num).scale(&e.pow(self.k as u64));
        Ok(lhs.eq_cert(&rhs))
    }

    /// Base change along a map of prisms given as a ring map `f` with
    /// `f(E) = unit * E'`.
    pub fn base_change(&self, target: &PrismCtx, f: impl Fn(&Elt) -> Result<Elt>, unit: &Elt) -> Result<BkModule> {
        let fe = f(self.prism.e())?;
        if !fe.eq_cert(&(unit * target.e())) {
            return Err(Error::Validation("the map does not send E to unit * E'".into()));
        }
        let u_inv = unit.inv()?.pow(self.k as u64);
        let f_num = self.f_num.try_map(|x| Ok(&f(x)? * &u_inv))?;
        BkModule::new(target, f_num, self.k)
    }

    pub fn record(&self) -> BkRecord {
        BkRecord { rank: self.rank(), denom_k: self.k, f_num: self.f_num.to_strings() }
    }
}

/// `(A^n, mu(E) X)` for `X` invertible, normalized to `F_num = diag(E^{m_i + c}) X`
/// and `k = c` where `c = max(0, -m_n)`.
pub fn make_banal_bk(pr: &PrismCtx, mu: &Cocharacter, x: &Mat) -> Result<BkModule> {
    if x.rows != mu.rank() || !x.is_square() {
        return Err(Error::Dimension(format!("matrix is {}x{}, cocharacter has rank {}", x.rows, x.cols, mu.rank())));
    }
    if !x.det().is_unit() {
        return Err(Error::NotInvertible("X is not invertible over A".into()));
    }
    let f_num = mu.shifted_diag(pr.e()).mul(x);
    let k = mu.shift();
    let det_order = (mu.weights().iter().sum::<i64>() + k as i64 * mu.rank() as i64) as u32;
    Ok(BkModule { prism: pr.clone(), f_num, k, det_order })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::prisms::make_bk_prism;
    use crate::rings::{parse_elt, CoeffRing, DeltaCtx};

    pub(crate) fn prism(p: u64, n: u32, m: u32, e: &str) -> PrismCtx {
        let a = DeltaCtx::series(CoeffRing::zp(p, n).unwrap(), 1, m).unwrap();
        make_bk_prism(&a, parse_elt(&a, e).unwrap()).unwrap()
    }

    #[test]
    fn standard_filtration() {
        let pr = prism(2, 3, 4, "2 + t");
        let ctx = pr.ring().clone();
        let mu = Cocharacter::new(vec![1, 0]).unwrap();
        let e = pr.e().clone();
        assert!(fil_mu(&pr, &mu, 1).eq_cert(&Mat::diag(&[ctx.one(), e.clone()])));
        assert!(fil_mu(&pr, &mu, 0).is_identity());
        assert!(fil_mu(&pr, &mu, 2).eq_cert(&Mat::diag(&[e.clone(), e.pow(2)])));
        assert!(Cocharacter::new(vec![0, 1]).is_err());
    }

    #[test]
    fn banal_normalization() {
        let pr = prism(2, 3, 4, "2 + t");
        let ctx = pr.ring().clone();
        let e = pr.e().clone();
        let id = Mat::identity(&ctx, 2);
        let m = make_banal_bk(&pr, &Cocharacter::new(vec![1, 0]).unwrap(), &id).unwrap();
        assert!(m.f_num().eq_cert(&Mat::diag(&[e.clone(), ctx.one()])));
        assert_eq!(m.denom_k(), 0);
        let x = Mat::from_rows(vec![vec![ctx.one(), ctx.one()], vec![ctx.zero(), ctx.one()]]).unwrap();
        let m = make_banal_bk(&pr, &Cocharacter::new(vec![1, 0]).unwrap(), &x).unwrap();
        let want = Mat::from_rows(vec![vec![e.clone(), e.clone()], vec![ctx.zero(), ctx.one()]]).unwrap();
        assert!(m.f_num().eq_cert(&want));
        let m = make_banal_bk(&pr, &Cocharacter::new(vec![0, -1]).unwrap(), &id).unwrap();
        assert!(m.f_num().eq_cert(&Mat::diag(&[e.clone(), ctx.one()])));
        assert_eq!(m.denom_k(), 1);
        // Normalization removes common factors of E.
        let m = BkModule::new(&pr, Mat::diag(&[e.pow(2), e.clone()]), 1).unwrap();
        assert_eq!(m.denom_k(), 0);
        assert!(m.f_num().eq_cert(&Mat::diag(&[e.clone(), ctx.one()])));
        assert_eq!(m.det_order(), 1);
    }
}
