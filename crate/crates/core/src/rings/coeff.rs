//! Coefficient rings `O = Z[x]/(f, p^K)` with a Frobenius `sigma` and a
//! uniformizer `pi`.
//!
//! An element is its coefficient vector in the basis `1, x, ..., x^(d-1)`.
//! The ring models `O` at `pi`-adic precision `N`; storage uses `K = ceil(N/e)`
//! digits of `p`, which holds `e*K >= N` digits of `pi`.

use crate::error::{Error, Result};
use crate::zlinalg::{Howell, Modulus, ZModMatrix};

/// A validated coefficient ring.
#[derive(Clone, Debug)]
pub struct CoeffRing {
    md: Modulus,
    df: usize,
    /// Monic modulus, low degree first, without the leading 1.
    f: Vec<u64>,
    f_int: Vec<i64>,
    n_pi: u32,
    e: u32,
    q: u64,
    pi: Vec<u64>,
    sigma_x: Vec<i64>,
    sigma_rows: Vec<Vec<u64>>,
    sigma_is_id: bool,
    pi_is_p: bool,
    /// `span(pi^k O)` for `k = 0..=e*K`.
    pi_pow: Vec<Howell>,
    /// Multiplication-by-`pi` rows with a tracked transform.
    pi_div: Howell,
    p_over_pi: Vec<u64>,
}

fn poly_reduce(md: &Modulus, f: &[u64], r: &mut Vec<u64>) {
    let df = f.len();
    while r.len() > df {
        let c = r.pop().unwrap();
        if c != 0 {
            let base = r.len() - df;
            for (i, &fi) in f.iter().enumerate() {
                r[base + i] = md.sub(r[base + i], md.mul(c, fi));
            }
        }
    }
    r.resize(df, 0);
}

fn raw_mul(md: &Modulus, f: &[u64], a: &[u64], b: &[u64]) -> Vec<u64> {
    let df = f.len();
    let mut r = vec![0; 2 * df - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                r[i + j] = md.add(r[i + j], md.mul(x, y));
            }
        }
    }
    poly_reduce(md, f, &mut r);
    r
}

fn from_ints(md: &Modulus, f: &[u64], v: &[i64]) -> Vec<u64> {
    let mut r: Vec<u64> = v.iter().map(|&x| md.from_i64(x)).collect();
    if r.len() < f.len() {
        r.resize(f.len(), 0);
    }
    poly_reduce(md, f, &mut r);
    r
}

fn mul_rows(md: &Modulus, f: &[u64], a: &[u64]) -> Vec<Vec<u64>> {
    let df = f.len();
    (0..df)
        .map(|i| {
            let mut xi = vec![0; df];
            xi[i] = 1;
            raw_mul(md, f, a, &xi)
        })
        .collect()
}

fn power_spans(md: &Modulus, f: &[u64], pi: &[u64], kmax: u32) -> Vec<Howell> {
    let df = f.len();
    let mut out = Vec::with_capacity(kmax as usize + 1);
    let mut pw = vec![0; df];
    pw[0] = 1;
    for _ in 0..=kmax {
        out.push(Howell::new(*md, df, mul_rows(md, f, &pw), false));
        pw = raw_mul(md, f, &pw, pi);
    }
    out
}

fn span_val(spans: &[Howell], a: &[u64]) -> u32 {
    let mut v = 0;
    while (v as usize + 1) < spans.len() && spans[v as usize + 1].contains(a) {
        v += 1;
    }
    v
}

impl CoeffRing {
    /// Builds and validates `Z[x]/(f, p^K)` at `pi`-precision `n`.
    ///
    /// `f` is monic, lowest degree first (the leading 1 included). `pi` and
    /// `sigma_x` are integer polynomials in `x`; `q` is the residue cardinality
    /// of the base `O_E`.
    pub fn new(p: u64, f: &[i64], n: u32, pi: &[i64], sigma_x: &[i64], q: u64) -> Result<Self> {
        if f.len() < 2 || *f.last().unwrap() != 1 {
            return Err(Error::Validation("defining polynomial must be monic of degree >= 1".into()));
        }
        if n == 0 {
            return Err(Error::Validation("precision must be at least 1".into()));
        }
        let df = f.len() - 1;
        let f_int = f[..df].to_vec();
        // The ramification index is read off at modulus p^2, where p != 0.
        let md2 = Modulus::new(p, 2)?;
        let f2: Vec<u64> = f_int.iter().map(|&c| md2.from_i64(c)).collect();
        let pi2 = from_ints(&md2, &f2, pi);
        let spans2 = power_spans(&md2, &f2, &pi2, 2 * df as u32 + 1);
        let mut pv = vec![0; df];
        pv[0] = p;
        let e = span_val(&spans2, &pv);
        if e == 0 || e as usize >= spans2.len() - 1 {
            return Err(Error::Validation("pi is not a uniformizer: p is not a unit times a power of pi".into()));
        }
        let k = n.div_ceil(e);
        Self::build(p, &f_int, n, e, k, pi, sigma_x, q)
    }

    #[allow(clippy::too_many_arguments)]
    fn build(p: u64, f_int: &[i64], n: u32, e: u32, k: u32, pi: &[i64], sigma_x: &[i64], q: u64) -> Result<Self> {
        let md = Modulus::new(p, k)?;
        let df = f_int.len();
        let f: Vec<u64> = f_int.iter().map(|&c| md.from_i64(c)).collect();
        let pi_v = from_ints(&md, &f, pi);
        let pi_pow = power_spans(&md, &f, &pi_v, e * k);
        let pi_div = Howell::new(md, df, mul_rows(&md, &f, &pi_v), true);
        let sx = from_ints(&md, &f, sigma_x);
        let mut sigma_rows = Vec::with_capacity(df);
        let mut pw = vec![0; df];
        pw[0] = 1;
        for _ in 0..df {
            sigma_rows.push(pw.clone());
            pw = raw_mul(&md, &f, &pw, &sx);
        }
        let mut xv = vec![0; df];
        if df > 1 {
            xv[1] = 1;
        } else {
            xv[0] = md.from_i64(-f_int[0]);
        }
        let sigma_is_id = sx == xv;
        let mut pp = vec![0; df];
        pp[0] = p % md.value();
        let pi_is_p = pi_v == pp;
        // p / pi, computed one digit higher so the quotient is exact mod p^K.
        let md1 = Modulus::new(p, k + 1)?;
        let f1: Vec<u64> = f_int.iter().map(|&c| md1.from_i64(c)).collect();
        let pi1 = from_ints(&md1, &f1, pi);
        let h1 = Howell::new(md1, df, mul_rows(&md1, &f1, &pi1), true);
        let mut p1 = vec![0; df];
        p1[0] = p;
        let w = h1.witness(&p1).ok_or_else(|| Error::Validation("p is not divisible by pi".into()))?;
        let p_over_pi: Vec<u64> = w.iter().map(|&c| c % md.value()).collect();
        let ring = CoeffRing {
            md,
            df,
            f,
            f_int: f_int.to_vec(),
            n_pi: n,
            e,
            q,
            pi: pi_v,
            sigma_x: sigma_x.to_vec(),
            sigma_rows,
            sigma_is_id,
            pi_is_p,
            pi_pow,
            pi_div,
            p_over_pi,
        };
        ring.validate()?;
        Ok(ring)
    }

    fn validate(&self) -> Result<()> {
        let p = self.md.p();
        let mut qq = self.q;
        while qq > 1 && qq.is_multiple_of(p) {
            qq /= p;
        }
        if self.q < p || qq != 1 {
            return Err(Error::Validation(format!("q = {} is not a power of p = {p}", self.q)));
        }
        // The residue ring O/pi must be a field.
        let res = &self.pi_pow[1];
        let digits: Vec<u64> = (0..self.df)
            .map(|c| match res.pivots().iter().find(|&&(pc, _)| pc == c) {
                Some(&(_, v)) => self.md.p_pow(v).max(1),
                None => self.md.value(),
            })
            .collect();
        let size: u64 = digits.iter().product();
        if size > 1 << 16 {
            return Err(Error::Budget(format!("residue field of size {size} is too large to validate")));
        }
        if size == 1 {
            return Err(Error::Validation("pi is a unit".into()));
        }
        if self.q > size || !size_log(size, p).is_multiple_of(size_log(self.q, p)) {
            return Err(Error::Validation(format!(
                "q = {} is not compatible with the residue field of size {size}",
                self.q
            )));
        }
        let pi_rows = mul_rows(&self.md, &self.f, &self.pi);
        let mut one = vec![0; self.df];
        one[0] = 1;
        for mut code in 1..size {
            let a: Vec<u64> = digits
                .iter()
                .map(|&d| {
                    let c = code % d;
                    code /= d;
                    c
                })
                .collect();
            let mut rows = mul_rows(&self.md, &self.f, &a);
            rows.extend(pi_rows.iter().cloned());
            if !Howell::new(self.md, self.df, rows, false).contains(&one) {
                return Err(Error::Validation(format!("O/pi is not a field: {} has no inverse", self.format(&a))));
            }
        }
        // sigma is a ring endomorphism: f(sigma(x)) = 0.
        let sx = self.sigma(&self.x());
        let mut acc = vec![0; self.df];
        let mut pw = self.one();
        for &c in &self.f {
            acc = self.add(&acc, &self.scale(&pw, c));
            pw = self.mul(&pw, &sx);
        }
        acc = self.add(&acc, &pw);
        if !self.is_zero(&acc) {
            return Err(Error::Validation("sigma(x) is not a root of f".into()));
        }
        if !self.is_zero(&self.sub(&self.sigma(&self.pi), &self.pi)) {
            return Err(Error::Validation("sigma does not fix pi".into()));
        }
        let xq = self.pow(&self.x(), self.q);
        if !res.contains(&self.sub(&sx, &xq)) {
            return Err(Error::Validation(format!("sigma is not a lift of y -> y^{} on the residue field", self.q)));
        }
        Ok(())
    }

    /// `Z_p` at precision `n`, with `pi = p` and trivial `sigma`.
    pub fn zp(p: u64, n: u32) -> Result<Self> {
        Self::new(p, &[0, 1], n, &[p as i64], &[0], p)
    }

    /// `W(F_{p^d})` at precision `n`, built on the first monic polynomial of
    /// degree `d` irreducible mod `p`, with `sigma` the Hensel lift of the
    /// `p`-power map and `q = p`.
    pub fn unramified(p: u64, d: usize, n: u32) -> Result<Self> {
        if d == 1 {
            return Self::zp(p, n);
        }
        let f = first_irreducible(p, d)?;
        Self::unramified_with(p, &f, n)
    }

    /// Unramified ring on a given monic `f` irreducible mod `p`.
    pub fn unramified_with(p: u64, f: &[i64], n: u32) -> Result<Self> {
        let df = f.len() - 1;
        let md = Modulus::new(p, n)?;
        let fr: Vec<u64> = f[..df].iter().map(|&c| md.from_i64(c)).collect();
        let mut xv = vec![0; df];
        xv[1 % df] = 1;
        let mut y = vec![0; df];
        y[0] = 1;
        for _ in 0..p {
            y = raw_mul(&md, &fr, &y, &xv);
        }
        // Evaluates f (or its derivative) at y by Horner's rule.
        let eval = |y: &[u64], deriv: bool| -> Vec<u64> {
            let coeff = |i: usize| -> u64 {
                let c = if i == df { 1 } else { fr[i] };
                if deriv {
                    md.mul(c, i as u64)
                } else {
                    c
                }
            };
            let lo = usize::from(deriv);
            let mut acc = vec![0; df];
            for i in (lo..=df).rev() {
                acc = raw_mul(&md, &fr, &acc, y);
                acc[0] = md.add(acc[0], coeff(i));
            }
            acc
        };
        for _ in 0..n {
            let fy = eval(&y, false);
            let dfy = eval(&y, true);
            let h = Howell::new(md, df, mul_rows(&md, &fr, &dfy), true);
            let w = h.witness(&fy).ok_or_else(|| Error::Validation("f is not separable mod p".into()))?;
            for (a, b) in y.iter_mut().zip(&w) {
                *a = md.sub(*a, *b);
            }
        }
        let sx: Vec<i64> = y.iter().map(|&c| md.to_signed(c)).collect();
        Self::new(p, f, n, &[p as i64], &sx, p)
    }

    /// Totally ramified `Z_p[x]/(f)` for an Eisenstein `f`, with `pi = x`,
    /// trivial `sigma` and `q = p`.
    pub fn eisenstein(p: u64, f: &[i64], n: u32) -> Result<Self> {
        Self::new(p, f, n, &[0, 1], &[0, 1], p)
    }

    /// The same ring at another `pi`-precision.
    pub fn with_precision(&self, n: u32) -> Result<Self> {
        Self::build(self.md.p(), &self.f_int, n, self.e, n.div_ceil(self.e), &self.pi_ints(), &self.sigma_x, self.q)
    }

    fn pi_ints(&self) -> Vec<i64> {
        self.pi.iter().map(|&c| self.md.to_signed(c)).collect()
    }

    pub fn modulus(&self) -> Modulus {
        self.md
    }
    pub fn p(&self) -> u64 {
        self.md.p()
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    /// Number of `p`-digits stored.
    pub fn k(&self) -> u32 {
        self.md.n()
    }
    /// Requested `pi`-precision.
    pub fn n(&self) -> u32 {
        self.n_pi
    }
    /// Degree of `f`; the rank of `O` over `Z/p^K`.
    pub fn degree(&self) -> usize {
        self.df
    }
    /// Defining polynomial (without the leading 1).
    pub fn f_ints(&self) -> &[i64] {
        &self.f_int
    }
    pub fn sigma_x_ints(&self) -> &[i64] {
        &self.sigma_x
    }
    pub fn sigma_is_identity(&self) -> bool {
        self.sigma_is_id
    }
    pub fn pi(&self) -> &[u64] {
        &self.pi
    }
    /// The exact element `p / pi`.
    pub fn p_over_pi(&self) -> &[u64] {
        &self.p_over_pi
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.df]
    }
    pub fn one(&self) -> Vec<u64> {
        self.int(1)
    }
    pub fn int(&self, c: i64) -> Vec<u64> {
        let mut v = vec![0; self.df];
        v[0] = self.md.from_i64(c);
        v
    }
    /// The generator `x` (reduced, so for `d = 1` it is `-f_0`).
    pub fn x(&self) -> Vec<u64> {
        from_ints(&self.md, &self.f, &[0, 1])
    }
    /// Reduces an integer polynomial in `x`.
    pub fn from_poly(&self, v: &[i64]) -> Vec<u64> {
        from_ints(&self.md, &self.f, v)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| self.md.add(x, y)).collect()
    }
    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| self.md.sub(x, y)).collect()
    }
    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| self.md.neg(x)).collect()
    }
    pub fn scale(&self, a: &[u64], c: u64) -> Vec<u64> {
        a.iter().map(|&x| self.md.mul(x, c)).collect()
    }
    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if self.df == 1 {
            return vec![self.md.mul(a[0], b[0])];
        }
        raw_mul(&self.md, &self.f, a, b)
    }
    /// `out += a * b`.
    #[inline]
    pub fn mul_acc(&self, out: &mut [u64], a: &[u64], b: &[u64]) {
        if self.df == 1 {
            out[0] = self.md.add(out[0], self.md.mul(a[0], b[0]));
            return;
        }
        let r = raw_mul(&self.md, &self.f, a, b);
        for (o, x) in out.iter_mut().zip(r) {
            *o = self.md.add(*o, x);
        }
    }
    pub fn pow(&self, a: &[u64], mut k: u64) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }
    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// The Frobenius `sigma`.
    pub fn sigma(&self, a: &[u64]) -> Vec<u64> {
        if self.sigma_is_id {
            return a.to_vec();
        }
        let mut out = vec![0; self.df];
        for (&c, row) in a.iter().zip(&self.sigma_rows) {
            if c != 0 {
                for (o, &r) in out.iter_mut().zip(row) {
                    *o = self.md.add(*o, self.md.mul(c, r));
                }
            }
        }
        out
    }

    /// `pi`-adic valuation, capped at the stored precision `e*K`.
    pub fn val(&self, a: &[u64]) -> u32 {
        if self.pi_is_p {
            return a.iter().map(|&c| self.md.val(c)).min().unwrap_or(self.md.n());
        }
        if self.is_zero(a) {
            return self.e * self.md.n();
        }
        span_val(&self.pi_pow, a)
    }

    /// Units are the elements of valuation zero.
    pub fn is_unit(&self, a: &[u64]) -> bool {
        if self.pi_is_p {
            return a.iter().any(|&c| c % self.md.p() != 0);
        }
        !self.pi_pow[1].contains(a)
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: &[u64]) -> Option<Vec<u64>> {
        if self.df == 1 {
            return self.md.inv(a[0]).map(|x| vec![x]);
        }
        let h = Howell::new(self.md, self.df, mul_rows(&self.md, &self.f, a), true);
        h.witness(&self.one())
    }

    /// Divides by `pi`. The quotient is determined modulo the annihilator of
    /// `pi`, so one `pi`-digit of precision is lost.
    pub fn div_pi(&self, a: &[u64]) -> Option<Vec<u64>> {
        if self.pi_is_p {
            let p = self.md.p();
            if a.iter().any(|&c| c % p != 0) {
                return None;
            }
            return Some(a.iter().map(|&c| c / p).collect());
        }
        self.pi_div.witness(a)
    }

    /// Multiplication-by-`a` matrix (rows are `a * x^i`).
    pub fn mul_matrix(&self, a: &[u64]) -> ZModMatrix {
        ZModMatrix::from_rows(self.md, self.df, &mul_rows(&self.md, &self.f, a)).expect("square")
    }

    /// Canonical text form, e.g. `3 + 2*x`.
    pub fn format(&self, a: &[u64]) -> String {
        let mut parts = Vec::new();
        for (i, &c) in a.iter().enumerate() {
            let s = self.md.to_signed(c);
            if s == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            parts.push(match (mono.is_empty(), s) {
                (true, _) => format!("{s}"),
                (false, 1) => mono,
                (false, -1) => format!("-{mono}"),
                (false, _) => format!("{s}*{mono}"),
            });
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = parts[0].clone();
        for part in &parts[1..] {
            if let Some(rest) = part.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(part);
            }
        }
        out
    }
}

fn size_log(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        n /= p;
        k += 1;
    }
    k
}

/// First monic polynomial of degree `d` (lexicographic in its coefficients)
/// that is irreducible mod `p`, found by trial division over `F_p`.
fn first_irreducible(p: u64, d: usize) -> Result<Vec<i64>> {
    let total = p
        .checked_pow(d as u32)
        .filter(|&t| t <= 1 << 20)
        .ok_or_else(|| Error::Budget(format!("search space for degree {d} over F_{p} is too large")))?;
    for code in 0..total {
        let mut f: Vec<u64> = (0..d).map(|i| (code / p.pow(i as u32)) % p).collect();
        f.push(1);
        if f[0] == 0 {
            continue;
        }
        if is_irreducible_fp(&f, p) {
            return Ok(f.iter().map(|&c| c as i64).collect());
        }
    }
    Err(Error::Validation(format!("no irreducible polynomial of degree {d} mod {p}")))
}

fn poly_rem_fp(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = Modulus::new(p, 1).unwrap().inv(b[db]).unwrap();
    while r.len() > db {
        let c = r.pop().unwrap() * lead_inv % p;
        let base = r.len() - db;
        for (i, &bi) in b[..db].iter().enumerate() {
            r[base + i] = (r[base + i] + p * p - c * bi % p) % p;
        }
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn is_irreducible_fp(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    // Trial division by every monic polynomial of degree 1..=d/2.
    for deg in 1..=d / 2 {
        for code in 0..p.pow(deg as u32) {
            let mut g: Vec<u64> = (0..deg).map(|i| (code / p.pow(i as u32)) % p).collect();
            g.push(1);
            if poly_rem_fp(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zp_basics() {
        let r = CoeffRing::zp(2, 4).unwrap();
        assert_eq!(r.modulus().value(), 16);
        assert_eq!(r.q(), 2);
        assert_eq!(r.e(), 1);
        assert_eq!(r.val(&r.int(4)), 2);
        assert_eq!(r.div_pi(&r.int(6)), Some(r.int(3)));
        assert_eq!(r.p_over_pi(), &r.one()[..]);
    }

    #[test]
    fn w_f4_frobenius_choices() {
        let f = [1, 1, 1];
        // The square map lifts the 2-power Frobenius, so q = 2 is accepted.
        assert!(CoeffRing::new(2, &f, 3, &[2], &[0, 0, 1], 2).is_ok());
        // It is not congruent to y^4 = y, so q = 4 is rejected.
        assert!(matches!(CoeffRing::new(2, &f, 3, &[2], &[0, 0, 1], 4), Err(Error::Validation(_))));
        // For q = 4 the identity is the correct Frobenius.
        assert!(CoeffRing::new(2, &f, 3, &[2], &[0, 1], 4).is_ok());
    }

    #[test]
    fn unramified_sigma_lifts_frobenius() {
        let r = CoeffRing::unramified(3, 2, 3).unwrap();
        let x = r.x();
        let d = r.sub(&r.sigma(&x), &r.pow(&x, 3));
        assert!(r.val(&d) >= 1);
        // sigma has order 2.
        assert_eq!(r.sigma(&r.sigma(&x)), x);
    }

    #[test]
    fn eisenstein_ring() {
        let r = CoeffRing::eisenstein(2, &[-2, 0, 1], 4).unwrap();
        assert_eq!(r.e(), 2);
        assert_eq!(r.k(), 2);
        assert_eq!(r.val(&r.int(2)), 2);
        assert_eq!(r.val(&r.x()), 1);
        // p / pi = x since x^2 = 2.
        assert_eq!(r.p_over_pi(), &r.x()[..]);
        assert!(r.div_pi(&r.x()).is_some());
        assert!(r.div_pi(&r.one()).is_none());
        // sigma(x) = -x does not fix the uniformizer.
        assert!(CoeffRing::new(2, &[-2, 0, 1], 4, &[0, 1], &[0, -1], 2).is_err());
    }

    #[test]
    fn rejects_non_field_residue() {
        // x^2 + 1 = (x + 1)^2 mod 2.
        assert!(CoeffRing::new(2, &[1, 0, 1], 2, &[2], &[0, 1], 2).is_err());
    }
}
