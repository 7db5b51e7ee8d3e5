//! Exact linear algebra over the chain ring `Z/p^N`.
//!
//! Everything in the crate that asks "is this element in that ideal?" or
//! "divide this by that" ends up here: a truncated ring is flattened to a
//! free `Z/p^N`-module on its monomial basis, ideals become row spans, and the
//! Howell normal form decides membership.
//!
//! Conventions: module elements are row vectors and generators are stacked as
//! rows. `solve_mod` solves `x * m = b`.

use crate::error::{Error, Result};

/// The modulus `p^n` of a chain ring `Z/p^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u64,
    n: u32,
    m: u64,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Modulus {
    /// Largest supported modulus; keeps every product inside a `u64`.
    pub const MAX: u64 = 1 << 31;

    /// Builds `p^n`, rejecting composite `p`, `n = 0` and oversized moduli.
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Validation(format!("{p} is not prime")));
        }
        if n == 0 {
            return Err(Error::Validation("precision exponent must be at least 1".into()));
        }
        let mut m: u64 = 1;
        for _ in 0..n {
            m = m
                .checked_mul(p)
                .filter(|&v| v <= Self::MAX)
                .ok_or_else(|| Error::Budget(format!("{p}^{n} exceeds 2^31")))?;
        }
        Ok(Modulus { p, n, m })
    }

    /// The prime `p`.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The exponent `n`.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// The integer `p^n`.
    pub fn value(&self) -> u64 {
        self.m
    }

    /// `p^k` as a residue (zero once `k >= n`).
    pub fn p_pow(&self, k: u32) -> u64 {
        if k >= self.n {
            0
        } else {
            self.p.pow(k)
        }
    }

    /// Reduces a signed integer into `[0, p^n)`.
    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.m as i64) as u64
    }

    /// Symmetric lift to `(-p^n/2, p^n/2]`, used for printing.
    pub fn to_signed(&self, x: u64) -> i64 {
        if x > self.m / 2 {
            x as i64 - self.m as i64
        } else {
            x as i64
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.m
    }

    /// `p`-adic valuation of a residue; `n` for zero.
    pub fn val(&self, mut x: u64) -> u32 {
        if x == 0 {
            return self.n;
        }
        let mut v = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// Inverse of a unit residue, `None` if `x` is divisible by `p`.
    pub fn inv(&self, x: u64) -> Option<u64> {
        if x.is_multiple_of(self.p) {
            return None;
        }
        let (mut a, mut b) = (x as i64, self.m as i64);
        let (mut u, mut v) = (1i64, 0i64);
        while b != 0 {
            let q = a / b;
            (a, b) = (b, a - q * b);
            (u, v) = (v, u - q * v);
        }
        Some(self.from_i64(u))
    }

    /// The same prime at another precision.
    pub fn with_n(&self, n: u32) -> Result<Self> {
        Modulus::new(self.p, n)
    }
}

/// Dense matrix with entries in `Z/p^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZModMatrix {
    pub modulus: Modulus,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl ZModMatrix {
    /// The zero matrix.
    pub fn zeros(modulus: Modulus, rows: usize, cols: usize) -> Self {
        ZModMatrix { modulus, rows, cols, data: vec![0; rows * cols] }
    }

    /// The identity matrix.
    pub fn identity(modulus: Modulus, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from signed integer rows.
    pub fn from_i64_rows(modulus: Modulus, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Dimension("ragged rows".into()));
            }
            data.extend(r.iter().map(|&x| modulus.from_i64(x)));
        }
        Ok(ZModMatrix { modulus, rows: rows.len(), cols, data })
    }

    /// Builds a matrix from reduced rows of a common length `cols`.
    pub fn from_rows(modulus: Modulus, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row of length {} in a {cols}-column matrix", r.len())));
            }
            data.extend(r.iter().map(|&x| x % modulus.value()));
        }
        Ok(ZModMatrix { modulus, rows: rows.len(), cols, data })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.modulus.value();
    }

    /// Borrow one row.
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// All rows as owned vectors.
    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &ZModMatrix) -> Result<ZModMatrix> {
        if self.cols != other.rows || self.modulus != other.modulus {
            return Err(Error::Dimension("matrix product shapes".into()));
        }
        let md = self.modulus;
        let mut out = ZModMatrix::zeros(md, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let cur = out.data[i * other.cols + j];
                        out.data[i * other.cols + j] = md.add(cur, md.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, x: &[u64]) -> Result<Vec<u64>> {
        if x.len() != self.rows {
            return Err(Error::Dimension("vector-matrix product".into()));
        }
        let md = self.modulus;
        let mut out = vec![0; self.cols];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self.get(i, j);
                if b != 0 {
                    *o = md.add(*o, md.mul(a, b));
                }
            }
        }
        Ok(out)
    }
}

/// `dst -= f * src` on the tail starting at `from`.
#[inline]
fn axpy_neg(md: &Modulus, dst: &mut [u64], src: &[u64], f: u64, from: usize) {
    if f == 0 {
        return;
    }
    for (d, &s) in dst[from..].iter_mut().zip(&src[from..]) {
        if s != 0 {
            *d = md.sub(*d, md.mul(f, s));
        }
    }
}

#[inline]
fn scale(md: &Modulus, v: &mut [u64], f: u64) {
    for x in v.iter_mut() {
        *x = md.mul(*x, f);
    }
}

/// A matrix in Howell normal form together with its pivot data.
///
/// The optional transform records, for each Howell row, the combination of
/// input rows producing it.
#[derive(Clone, Debug)]
pub struct Howell {
    modulus: Modulus,
    cols: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<(usize, u32)>,
    transform: Option<Vec<Vec<u64>>>,
    inputs: usize,
}

impl Howell {
    /// Computes the Howell form of the row span of `rows` (each of length
    /// `cols`). When `track` is set the transform is kept.
    pub fn new(modulus: Modulus, cols: usize, rows: Vec<Vec<u64>>, track: bool) -> Self {
        let md = modulus;
        let inputs = rows.len();
        let mut w: Vec<Vec<u64>> = rows;
        let mut t: Vec<Vec<u64>> = if track {
            (0..inputs)
                .map(|i| {
                    let mut e = vec![0; inputs];
                    e[i] = 1;
                    e
                })
                .collect()
        } else {
            Vec::new()
        };
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let mut best: Option<(usize, u32)> = None;
            for (i, row) in w.iter().enumerate().skip(r) {
                let x = row[c];
                if x != 0 {
                    let v = md.val(x);
                    if best.is_none_or(|(_, bv)| v < bv) {
                        best = Some((i, v));
                        if v == 0 {
                            break;
                        }
                    }
                }
            }
            let Some((bi, v)) = best else { continue };
            w.swap(r, bi);
            if track {
                t.swap(r, bi);
            }
            let pv = md.p_pow(v);
            let unit = w[r][c] / pv;
            let uinv = md.inv(unit % md.value()).expect("unit part is invertible");
            scale(&md, &mut w[r], uinv);
            if track {
                scale(&md, &mut t[r], uinv);
            }
            let (head, tail) = w.split_at_mut(r + 1);
            let prow = &head[r];
            for (k, row) in tail.iter_mut().enumerate() {
                let x = row[c];
                if x != 0 {
                    let f = x / pv;
                    axpy_neg(&md, row, prow, f, c);
                    if track {
                        let (th, tt) = t.split_at_mut(r + 1);
                        axpy_neg(&md, &mut tt[k], &th[r], f, 0);
                    }
                }
            }
            for i in 0..r {
                let x = head[i][c];
                if x >= pv {
                    let f = x / pv;
                    let (a, b) = head.split_at_mut(r);
                    axpy_neg(&md, &mut a[i], &b[0], f, c);
                    if track {
                        let (ta, tb) = t.split_at_mut(r);
                        axpy_neg(&md, &mut ta[i], &tb[0], f, 0);
                    }
                }
            }
            if v > 0 {
                let k = md.p_pow(md.n() - v);
                let mut extra = w[r].clone();
                scale(&md, &mut extra, k);
                if extra.iter().any(|&x| x != 0) {
                    w.push(extra);
                    if track {
                        let mut te = t[r].clone();
                        scale(&md, &mut te, k);
                        t.push(te);
                    }
                }
            }
            pivots.push((c, v));
            r += 1;
        }
        w.truncate(r);
        if track {
            t.truncate(r);
        }
        Howell { modulus, cols, rows: w, pivots, transform: if track { Some(t) } else { None }, inputs }
    }

    /// The chain-ring modulus.
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Howell rows (nonzero, in echelon order).
    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// `(column, valuation)` of each pivot.
    pub fn pivots(&self) -> &[(usize, u32)] {
        &self.pivots
    }

    /// The Howell form as a matrix.
    pub fn matrix(&self) -> ZModMatrix {
        ZModMatrix::from_rows(self.modulus, self.cols, &self.rows).expect("consistent rows")
    }

    /// The transform `t` with `h = t * input`, when tracked.
    pub fn transform_matrix(&self) -> Option<ZModMatrix> {
        self.transform.as_ref().map(|t| ZModMatrix::from_rows(self.modulus, self.inputs, t).expect("consistent rows"))
    }

    /// `log_p` of the cardinality of the row span.
    pub fn log_size(&self) -> u32 {
        self.pivots.iter().map(|&(_, v)| self.modulus.n() - v).sum()
    }

    /// Reduces `v` in place to its canonical residue. Returns the row
    /// coefficients used, so that `v_in = coeffs * H + v_out`.
    pub fn reduce_in_place(&self, v: &mut [u64]) -> Vec<u64> {
        let md = self.modulus;
        let mut coeffs = vec![0; self.rows.len()];
        for (k, (&(c, val), row)) in self.pivots.iter().zip(&self.rows).enumerate() {
            let x = v[c];
            let pv = md.p_pow(val);
            if x >= pv {
                let f = x / pv;
                axpy_neg(&md, v, row, f, c);
                coeffs[k] = f;
            }
        }
        coeffs
    }

    /// Canonical residue of `v` modulo the span.
    pub fn normal_form(&self, v: &[u64]) -> Vec<u64> {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w
    }

    /// Span membership.
    pub fn contains(&self, v: &[u64]) -> bool {
        self.normal_form(v).iter().all(|&x| x == 0)
    }

    /// Span membership with a witness over the original input rows
    /// (requires a tracked transform).
    pub fn witness(&self, v: &[u64]) -> Option<Vec<u64>> {
        let t = self.transform.as_ref()?;
        let mut w = v.to_vec();
        let coeffs = self.reduce_in_place(&mut w);
        if w.iter().any(|&x| x != 0) {
            return None;
        }
        let md = self.modulus;
        let mut out = vec![0; self.inputs];
        for (c, trow) in coeffs.iter().zip(t) {
            if *c != 0 {
                for (o, &x) in out.iter_mut().zip(trow) {
                    *o = md.add(*o, md.mul(*c, x));
                }
            }
        }
        Some(out)
    }

    /// Whether every row of `other` lies in this span.
    pub fn contains_span(&self, other: &Howell) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }
}

/// Howell normal form of `m`, returning `(h, t)` with `h = t * m`.
///
/// `h` may have more rows than `m`: the Howell property can require extra
/// rows (for example `[2, 1]` over `Z/4` needs `[0, 2]`), so `t` is
/// rectangular in general and span equality is the contract.
pub fn howell_form(m: &ZModMatrix) -> (ZModMatrix, ZModMatrix) {
    let h = Howell::new(m.modulus, m.cols, m.to_rows(), true);
    let t = h.transform_matrix().expect("tracked");
    (h.matrix(), t)
}

/// A particular solution and generators of the solution kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub x0: Vec<u64>,
    pub kernel: Vec<Vec<u64>>,
}

/// Solves `x * m = b`. Returns `None` when no solution exists.
pub fn solve_mod(m: &ZModMatrix, b: &[u64]) -> Result<Option<Solution>> {
    if b.len() != m.cols {
        return Err(Error::Dimension(format!("right-hand side has length {}, matrix has {} columns", b.len(), m.cols)));
    }
    let md = m.modulus;
    let width = m.cols + m.rows;
    let rows: Vec<Vec<u64>> = (0..m.rows)
        .map(|i| {
            let mut r = vec![0; width];
            r[..m.cols].copy_from_slice(m.row(i));
            r[m.cols + i] = md.neg(1);
            r
        })
        .collect();
    let h = Howell::new(md, width, rows, false);
    let mut v = vec![0; width];
    v[..m.cols].copy_from_slice(b);
    h.reduce_in_place(&mut v);
    if v[..m.cols].iter().any(|&x| x != 0) {
        return Ok(None);
    }
    // Rows are `[m_i | -e_i]`, so the residue's right half is the solution.
    let x0 = v[m.cols..].to_vec();
    let kernel =
        h.rows().iter().zip(h.pivots()).filter(|(_, &(c, _))| c >= m.cols).map(|(r, _)| r[m.cols..].to_vec()).collect();
    Ok(Some(Solution { x0, kernel }))
}

/// Outcome of reducing a vector against a list of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub member: bool,
    pub witness: Option<Vec<u64>>,
    pub normal_form: Vec<u64>,
}

/// Decides whether `v` lies in the span of `gens`, with a witness.
pub fn ideal_reduce(modulus: Modulus, gens: &[Vec<u64>], v: &[u64]) -> Result<Reduction> {
    if gens.iter().any(|g| g.len() != v.len()) {
        return Err(Error::Dimension("generator length differs from vector length".into()));
    }
    let h = Howell::new(modulus, v.len(), gens.to_vec(), true);
    let normal_form = h.normal_form(v);
    let member = normal_form.iter().all(|&x| x == 0);
    let witness = if member { h.witness(v) } else { None };
    Ok(Reduction { member, witness, normal_form })
}

/// Generators of the intersection of two row spans.
pub fn intersect(modulus: Modulus, cols: usize, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut rows = Vec::with_capacity(a.len() + b.len());
    for r in a {
        let mut x = r.clone();
        x.extend_from_slice(r);
        rows.push(x);
    }
    for r in b {
        let mut x = r.clone();
        x.extend(std::iter::repeat_n(0, cols));
        rows.push(x);
    }
    let h = Howell::new(modulus, 2 * cols, rows, false);
    h.rows().iter().zip(h.pivots()).filter(|(_, &(c, _))| c >= cols).map(|(r, _)| r[cols..].to_vec()).collect()
}

/// Generators of `{ x : x * m lies in the span of rel }`, i.e. the kernel of
/// the induced map to the quotient by `rel`.
pub fn preimage_kernel(m: &ZModMatrix, rel: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let md = m.modulus;
    let width = m.cols + m.rows;
    let mut rows: Vec<Vec<u64>> = (0..m.rows)
        .map(|i| {
            let mut r = vec![0; width];
            r[..m.cols].copy_from_slice(m.row(i));
            r[m.cols + i] = 1;
            r
        })
        .collect();
    for r in rel {
        let mut x = r.clone();
        x.resize(width, 0);
        rows.push(x);
    }
    let h = Howell::new(md, width, rows, false);
    h.rows().iter().zip(h.pivots()).filter(|(_, &(c, _))| c >= m.cols).map(|(r, _)| r[m.cols..].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(p: u64, n: u32) -> Modulus {
        Modulus::new(p, n).unwrap()
    }

    #[test]
    fn modulus_rejects_bad_input() {
        assert!(Modulus::new(4, 2).is_err());
        assert!(Modulus::new(2, 0).is_err());
        assert!(Modulus::new(2, 40).is_err());
    }

    #[test]
    fn diagonal_two_is_canonical() {
        let m = ZModMatrix::from_i64_rows(md(2, 2), &[vec![2, 0], vec![0, 2]]).unwrap();
        let (h, _) = howell_form(&m);
        assert_eq!(h.to_rows(), vec![vec![2, 0], vec![0, 2]]);
    }

    #[test]
    fn single_two_mod_four() {
        let m = ZModMatrix::from_i64_rows(md(2, 2), &[vec![2]]).unwrap();
        let (h, _) = howell_form(&m);
        assert_eq!(h.to_rows(), vec![vec![2]]);
        let hw = Howell::new(md(2, 2), 1, h.to_rows(), false);
        assert!(hw.contains(&[2]));
        assert!(!hw.contains(&[1]));
    }

    #[test]
    fn howell_extra_row() {
        let m = ZModMatrix::from_i64_rows(md(2, 2), &[vec![2, 1]]).unwrap();
        let (h, t) = howell_form(&m);
        assert_eq!(h.to_rows(), vec![vec![2, 1], vec![0, 2]]);
        assert_eq!(t.mul(&m).unwrap(), h);
    }

    #[test]
    fn solve_examples() {
        let m = ZModMatrix::from_i64_rows(md(2, 3), &[vec![2]]).unwrap();
        let s = solve_mod(&m, &[4]).unwrap().unwrap();
        assert_eq!(m.vec_mul(&s.x0).unwrap(), vec![4]);
        assert_eq!(s.kernel, vec![vec![4]]);
        assert!(solve_mod(&m, &[1]).unwrap().is_none());
        let z = ZModMatrix::from_i64_rows(md(2, 2), &[vec![0]]).unwrap();
        let s = solve_mod(&z, &[0]).unwrap().unwrap();
        assert_eq!(s.kernel, vec![vec![1]]);
    }

    #[test]
    fn reduce_examples() {
        let m4 = md(2, 2);
        let r = ideal_reduce(m4, &[vec![2, 0], vec![0, 2]], &[2, 2]).unwrap();
        assert!(r.member);
        assert_eq!(r.witness, Some(vec![1, 1]));
        let r = ideal_reduce(m4, &[vec![2, 1]], &[0, 2]).unwrap();
        assert!(r.member);
        assert_eq!(r.witness, Some(vec![2]));
        let r = ideal_reduce(m4, &[vec![2, 0]], &[1, 0]).unwrap();
        assert!(!r.member);
        assert_eq!(r.normal_form, vec![1, 0]);
    }
}
