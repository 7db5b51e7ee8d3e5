//! Square and rectangular matrices over a truncated ring, and the flattening
//! of `A`-submodules of `A^n` into `Z/p^K`-row spans.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rings::algebra::{DeltaCtx, Elt, Prec};
use crate::zlinalg::Howell;

/// Dense matrix of ring elements, row-major.
#[derive(Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    e: Vec<Elt>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_strings().iter().map(|r| format!("[{}]", r.join(", "))).collect::<Vec<_>>().join(" "))
    }
}

impl Mat {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elt) -> Mat {
        let mut e = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                e.push(f(i, j));
            }
        }
        Mat { rows, cols, e }
    }
    pub fn from_rows(rows: Vec<Vec<Elt>>) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(Mat { rows: r, cols: c, e: rows.into_iter().flatten().collect() })
    }
    pub fn zeros(ctx: &Arc<DeltaCtx>, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(rows, cols, |_, _| ctx.zero())
    }
    pub fn identity(ctx: &Arc<DeltaCtx>, n: usize) -> Mat {
        Mat::from_fn(n, n, |i, j| if i == j { ctx.one() } else { ctx.zero() })
    }
    pub fn diag(d: &[Elt]) -> Mat {
        let ctx = d[0].ctx().clone();
        Mat::from_fn(d.len(), d.len(), |i, j| if i == j { d[i].clone() } else { ctx.zero() })
    }
    /// Diagonal matrix `diag(g^{w_i})` for non-negative weights.
    pub fn diag_pow(g: &Elt, w: &[i64]) -> Mat {
        let d: Vec<Elt> = w.iter().map(|&k| g.pow(k.max(0) as u64)).collect();
        Mat::diag(&d)
    }

    pub fn ctx(&self) -> &Arc<DeltaCtx> {
        self.e[0].ctx()
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &Elt {
        &self.e[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: Elt) {
        self.e[i * self.cols + j] = v;
    }
    pub fn entries(&self) -> &[Elt] {
        &self.e
    }
    pub fn row(&self, i: usize) -> Vec<Elt> {
        self.e[i * self.cols..(i + 1) * self.cols].to_vec()
    }
    pub fn col(&self, j: usize) -> Vec<Elt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }
    pub fn map(&self, f: impl FnMut(&Elt) -> Elt) -> Mat {
        Mat { rows: self.rows, cols: self.cols, e: self.e.iter().map(f).collect() }
    }
    pub fn try_map(&self, f: impl FnMut(&Elt) -> Result<Elt>) -> Result<Mat> {
        Ok(Mat { rows: self.rows, cols: self.cols, e: self.e.iter().map(f).collect::<Result<_>>()? })
    }
    /// Smallest ledger among the entries.
    pub fn prec(&self) -> Prec {
        self.e.iter().map(Elt::prec).reduce(Prec::min).unwrap_or(Prec { n: 0, m: 0, s: 0 })
    }
    pub fn with_prec(&self, p: Prec) -> Mat {
        self.map(|x| x.clone().with_prec(p))
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix sum shapes");
        Mat { rows: self.rows, cols: self.cols, e: self.e.iter().zip(&o.e).map(|(a, b)| a + b).collect() }
    }
    pub fn sub(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix difference shapes");
        Mat { rows: self.rows, cols: self.cols, e: self.e.iter().zip(&o.e).map(|(a, b)| a - b).collect() }
    }
    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "matrix product shapes");
        let ctx = self.ctx().clone();
        Mat::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = ctx.zero();
            for k in 0..self.cols {
                let a = self.at(i, k);
                let b = o.at(k, j);
                if a.is_exact_zero_fast() || b.is_exact_zero_fast() {
                    acc = acc.with_prec(a.prec().min(b.prec()));
                    continue;
                }
                acc = &acc + &(a * b);
            }
            acc
        })
    }
    /// Matrix times a column vector.
    pub fn apply(&self, v: &[Elt]) -> Vec<Elt> {
        assert_eq!(self.cols, v.len(), "matrix-vector shapes");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.ctx().zero();
                for (k, x) in v.iter().enumerate() {
                    acc = &acc + &(self.at(i, k) * x);
                }
                acc
            })
            .collect()
    }
    pub fn scale(&self, a: &Elt) -> Mat {
        self.map(|x| x * a)
    }
    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }
    /// Entrywise Frobenius.
    pub fn phi(&self) -> Result<Mat> {
        self.try_map(Elt::phi)
    }

    /// Determinant by cofactor expansion (ranks here are small).
    pub fn det(&self) -> Elt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let ctx = self.ctx().clone();
        if self.rows == 0 {
            return ctx.one();
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        self.minor_det(0, &idx)
    }

    fn minor_det(&self, row: usize, cols: &[usize]) -> Elt {
        if cols.len() == 1 {
            return self.at(row, cols[0]).clone();
        }
        let mut acc = self.ctx().zero();
        for (k, &c) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = self.at(row, c) * &self.minor_det(row + 1, &rest);
            acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    /// Inverse over the local ring: Gaussian elimination with unit pivots.
    pub fn inv(&self) -> Result<Mat> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let ctx = self.ctx().clone();
        let mut a = self.clone();
        let mut b = Mat::identity(&ctx, n).with_prec(self.prec());
        for c in 0..n {
            let r = (c..n)
                .find(|&r| a.at(r, c).is_unit())
                .ok_or_else(|| Error::NotInvertible(format!("no unit pivot in column {c}")))?;
            if r != c {
                for j in 0..n {
                    a.e.swap(r * n + j, c * n + j);
                    b.e.swap(r * n + j, c * n + j);
                }
            }
            let pinv = a.at(c, c).inv()?;
            for j in 0..n {
                let x = a.at(c, j) * &pinv;
                a.set(c, j, x);
                let y = b.at(c, j) * &pinv;
                b.set(c, j, y);
            }
            for i in 0..n {
                if i == c {
                    continue;
                }
                let f = a.at(i, c).clone();
                if f.is_exact_zero_fast() {
                    continue;
                }
                for j in 0..n {
                    let x = a.at(i, j) - &(&f * a.at(c, j));
                    a.set(i, j, x);
                    let y = b.at(i, j) - &(&f * b.at(c, j));
                    b.set(i, j, y);
                }
            }
        }
        Ok(b)
    }

    /// Certified equality of all entries.
    pub fn eq_cert(&self, o: &Mat) -> bool {
        (self.rows, self.cols) == (o.rows, o.cols) && self.e.iter().zip(&o.e).all(|(a, b)| a.eq_cert(b))
    }
    pub fn is_identity(&self) -> bool {
        self.is_square() && self.eq_cert(&Mat::identity(self.ctx(), self.rows))
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect()
    }
}

impl Elt {
    /// Cheap test for an all-zero stored vector (no relation reduction).
    pub fn is_exact_zero_fast(&self) -> bool {
        self.coeffs().iter().all(|&x| x == 0)
    }
}

/// Flat `Z/p^K` coordinates of a vector in `A^n`.
pub fn flatten(v: &[Elt]) -> Vec<u64> {
    v.iter().flat_map(|x| x.coeffs().iter().copied()).collect()
}

/// Splits flat coordinates back into `n` elements.
pub fn unflatten(ctx: &Arc<DeltaCtx>, flat: &[u64], n: usize) -> Vec<Elt> {
    let w = ctx.width();
    assert_eq!(flat.len(), w * n, "flat vector length");
    (0..n).map(|i| Elt::from_raw(ctx, flat[i * w..(i + 1) * w].to_vec())).collect()
}

/// Rows spanning the `A`-submodule of `A^n` generated by `gens` (each a
/// vector of length `n`): every generator times every monomial and digit.
/// Row `g * width + k` is generator `g` times basis coordinate `k`, so a
/// membership witness splits directly into coefficient elements.
pub fn module_rows(ctx: &Arc<DeltaCtx>, gens: &[Vec<Elt>]) -> Vec<Vec<u64>> {
    let df = ctx.coeff().degree();
    let alg = ctx.algebra();
    let mut rows = Vec::with_capacity(gens.len() * ctx.width());
    for g in gens {
        for i in 0..alg.len() {
            for d in 0..df {
                let mut c = vec![0; ctx.width()];
                let mut digit = vec![0; df];
                digit[d] = 1;
                let xd = ctx.coeff().from_poly(&digit.iter().map(|&x| x as i64).collect::<Vec<_>>());
                c[i * df..(i + 1) * df].copy_from_slice(&xd);
                let m = Elt::from_raw(ctx, c);
                let row: Vec<Elt> = g.iter().map(|x| x * &m).collect();
                rows.push(flatten(&row));
            }
        }
    }
    rows
}

/// Rows of `R * A^n` for the relation module of a relation-carrying ring,
/// plus the ledger ideal `J(p) * A^n`.
pub fn ambient_rows(ctx: &Arc<DeltaCtx>, n: usize, p: Option<Prec>) -> Vec<Vec<u64>> {
    let w = ctx.width();
    let mut base = ctx.relation_rows();
    if let Some(p) = p {
        if !p.covers(ctx.model_prec()) {
            base.extend(ctx.ledger_rows(p));
        }
    }
    let mut rows = Vec::with_capacity(base.len() * n);
    for k in 0..n {
        for r in &base {
            let mut row = vec![0; w * n];
            row[k * w..(k + 1) * w].copy_from_slice(r);
            rows.push(row);
        }
    }
    rows
}

/// Howell form of the `A`-span of `gens` in `A^n`, together with the
/// ambient relations and (optionally) the ledger ideal.
pub fn module_span(ctx: &Arc<DeltaCtx>, n: usize, gens: &[Vec<Elt>], p: Option<Prec>, track: bool) -> Howell {
    let mut rows = module_rows(ctx, gens);
    rows.extend(ambient_rows(ctx, n, p));
    Howell::new(ctx.coeff().modulus(), ctx.width() * n, rows, track)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{parse_elt, CoeffRing};

    #[test]
    fn inverse_and_det() {
        let ctx = DeltaCtx::series(CoeffRing::zp(2, 3).unwrap(), 1, 4).unwrap();
        let e = |s: &str| parse_elt(&ctx, s).unwrap();
        let m = Mat::from_rows(vec![vec![e("1 + t"), e("2")], vec![e("t^2"), e("3")]]).unwrap();
        let mi = m.inv().unwrap();
        assert!(m.mul(&mi).is_identity());
        assert!(m.det().eq_cert(&e("3 + 3*t - 2*t^2")));
        let sing = Mat::from_rows(vec![vec![e("2"), e("t")], vec![e("t"), e("2")]]).unwrap();
        assert!(sing.inv().is_err());
    }
}
