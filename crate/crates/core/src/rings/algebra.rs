//! Truncated polynomial rings over a coefficient ring, with a Frobenius lift.
//!
//! A [`DeltaCtx`] fixes the variables, the total-degree bound `M` and the
//! image of every variable under `phi`. It can also carry a relation module,
//! in which case elements are compared modulo those relations. Power series
//! rings `O[[t_1..t_r]]/(t)^M` are the relation-free case with
//! `phi(t_i) = t_i^q`.
//!
//! Every element carries a [`Prec`] ledger: the element is known modulo
//! `pi^n + (t)^m + m^s`, where `m` is the maximal ideal. Sums and products
//! take the componentwise minimum; `phi` keeps it; `delta` and division by
//! `pi` cost one `pi`-digit and one `m`-adic step.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rings::coeff::CoeffRing;
use crate::zlinalg::Howell;

/// Largest monomial basis a context may use.
pub const MAX_MONOMIALS: usize = 4000;

const NONE: u32 = u32::MAX;

/// Monomial basis of a truncated polynomial ring.
#[derive(Clone, Debug)]
pub struct Algebra {
    names: Vec<String>,
    m: u32,
    monos: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    deg: Vec<u32>,
    table: Vec<u32>,
}

impl Algebra {
    /// All monomials of total degree `< m` in the named variables, ordered by
    /// degree and then lexicographically with earlier variables first.
    pub fn new(names: Vec<String>, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Validation("degree bound must be at least 1".into()));
        }
        let nv = names.len();
        let mut monos: Vec<Vec<u8>> = Vec::new();
        for d in 0..m {
            let start = monos.len();
            gen_exps(nv, d, &mut vec![0; nv], 0, &mut monos);
            monos[start..].sort_by(|a, b| b.cmp(a));
            if monos.len() > MAX_MONOMIALS {
                return Err(Error::Budget(format!(
                    "{} monomials in {nv} variables below degree {m} exceed {MAX_MONOMIALS}",
                    monos.len()
                )));
            }
        }
        let index: HashMap<Vec<u8>, usize> = monos.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let deg: Vec<u32> = monos.iter().map(|e| e.iter().map(|&x| x as u32).sum()).collect();
        let n = monos.len();
        let mut table = vec![NONE; n * n];
        for i in 0..n {
            for j in i..n {
                if deg[i] + deg[j] < m {
                    let prod: Vec<u8> = monos[i].iter().zip(&monos[j]).map(|(a, b)| a + b).collect();
                    let k = index[&prod] as u32;
                    table[i * n + j] = k;
                    table[j * n + i] = k;
                }
            }
        }
        Ok(Algebra { names, m, monos, index, deg, table })
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }
    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }
    pub fn nvars(&self) -> usize {
        self.names.len()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    /// The total-degree bound `M`.
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn exps(&self, i: usize) -> &[u8] {
        &self.monos[i]
    }
    pub fn degree(&self, i: usize) -> u32 {
        self.deg[i]
    }
    pub fn index_of(&self, exps: &[u8]) -> Option<usize> {
        self.index.get(exps).copied()
    }
    /// Index of the product of two monomials, `None` if truncated away.
    #[inline]
    pub fn product(&self, i: usize, j: usize) -> Option<usize> {
        let k = self.table[i * self.monos.len() + j];
        (k != NONE).then_some(k as usize)
    }
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
    /// Monomial index of a single variable.
    pub fn var_mono(&self, v: usize) -> Option<usize> {
        let mut e = vec![0; self.names.len()];
        e[v] = 1;
        self.index_of(&e)
    }
    pub fn format_mono(&self, i: usize) -> String {
        let mut parts = Vec::new();
        for (v, &k) in self.monos[i].iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(self.names[v].clone()),
                _ => parts.push(format!("{}^{k}", self.names[v])),
            }
        }
        parts.join("*")
    }
}

fn gen_exps(nv: usize, left: u32, cur: &mut Vec<u8>, v: usize, out: &mut Vec<Vec<u8>>) {
    if v + 1 >= nv {
        if nv == 0 {
            if left == 0 {
                out.push(Vec::new());
            }
            return;
        }
        cur[v] = left as u8;
        out.push(cur.clone());
        cur[v] = 0;
        return;
    }
    for k in 0..=left {
        cur[v] = k as u8;
        gen_exps(nv, left - k, cur, v + 1, out);
    }
    cur[v] = 0;
}

/// Certified precision: known modulo `pi^n + (t)^m + (maximal ideal)^s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Prec {
    pub n: u32,
    pub m: u32,
    pub s: u32,
}

impl Prec {
    pub fn min(self, o: Prec) -> Prec {
        Prec { n: self.n.min(o.n), m: self.m.min(o.m), s: self.s.min(o.s) }
    }
    /// `min(n, m, s)`: the largest `L` with the ledger ideal inside `m^L`.
    pub fn adic(self) -> u32 {
        self.n.min(self.m).min(self.s)
    }
    /// Whether this ledger is at least as fine as `o`.
    pub fn covers(self, o: Prec) -> bool {
        self.n >= o.n && self.m >= o.m && self.s >= o.s
    }
}

impl fmt::Display for Prec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(pi^{}, deg {}, m^{})", self.n, self.m, self.s)
    }
}

#[derive(Debug)]
struct Relations {
    /// Flat coordinate to elimination column.
    pos: Vec<usize>,
    /// Elimination column to flat coordinate.
    order: Vec<usize>,
    howell: Howell,
}

/// A truncated polynomial ring with a Frobenius lift.
#[derive(Debug)]
pub struct DeltaCtx {
    coeff: CoeffRing,
    alg: Algebra,
    phi_var: Vec<Option<Vec<u64>>>,
    phi_mono: Vec<Option<Vec<u64>>>,
    rel: Option<Relations>,
}

impl DeltaCtx {
    /// `O[[t_0..t_{r-1}]]/(t)^m` with `phi(t_i) = t_i^q`.
    pub fn series(coeff: CoeffRing, r: usize, m: u32) -> Result<Arc<Self>> {
        let names = (0..r).map(|i| format!("t{i}")).collect();
        Self::with_q_power_frobenius(coeff, names, m)
    }

    /// Polynomial ring on the given variables with `phi(v) = v^q` for all.
    pub fn with_q_power_frobenius(coeff: CoeffRing, names: Vec<String>, m: u32) -> Result<Arc<Self>> {
        let alg = Algebra::new(names, m)?;
        let base = Arc::new(DeltaCtx { coeff, alg, phi_var: Vec::new(), phi_mono: Vec::new(), rel: None });
        let q = base.coeff.q();
        let images = (0..base.alg.nvars()).map(|v| Some(base.var(v).pow(q).c)).collect();
        Ok(base.with_phi(images))
    }

    /// The same ring with the given `phi` images of the variables (`None`
    /// leaves `phi` undefined on that variable).
    pub fn with_phi(self: &Arc<Self>, images: Vec<Option<Vec<u64>>>) -> Arc<Self> {
        let mut ctx = DeltaCtx {
            coeff: self.coeff.clone(),
            alg: self.alg.clone(),
            phi_var: images,
            phi_mono: Vec::new(),
            rel: None,
        };
        let n = ctx.alg.len();
        let mut phi_mono: Vec<Option<Vec<u64>>> = Vec::with_capacity(n);
        for i in 0..n {
            let exps = ctx.alg.exps(i).to_vec();
            if ctx.alg.degree(i) == 0 {
                phi_mono.push(Some(ctx.const_raw(&ctx.coeff.one())));
                continue;
            }
            // Peel one variable off and reuse the smaller monomial.
            let v = exps.iter().position(|&k| k > 0).unwrap();
            let mut rest = exps.clone();
            rest[v] -= 1;
            let j = ctx.alg.index_of(&rest).unwrap();
            let img = match (&phi_mono[j], &ctx.phi_var[v]) {
                (Some(a), Some(b)) => Some(ctx.mul_raw(a, b)),
                _ => None,
            };
            phi_mono.push(img);
        }
        ctx.phi_mono = phi_mono;
        Arc::new(ctx)
    }

    /// The same ring modulo the span of `rows`, eliminating flat coordinates
    /// in the given `order` first.
    pub fn with_relations(self: &Arc<Self>, rows: Vec<Vec<u64>>, order: Vec<usize>) -> Arc<Self> {
        let width = self.width();
        let mut pos = vec![0; width];
        for (c, &k) in order.iter().enumerate() {
            pos[k] = c;
        }
        let permuted: Vec<Vec<u64>> = rows
            .into_iter()
            .map(|r| {
                let mut out = vec![0; width];
                for (k, x) in r.into_iter().enumerate() {
                    out[pos[k]] = x;
                }
                out
            })
            .collect();
        let howell = Howell::new(self.coeff.modulus(), width, permuted, false);
        Arc::new(DeltaCtx {
            coeff: self.coeff.clone(),
            alg: self.alg.clone(),
            phi_var: self.phi_var.clone(),
            phi_mono: self.phi_mono.clone(),
            rel: Some(Relations { pos, order, howell }),
        })
    }

    pub fn coeff(&self) -> &CoeffRing {
        &self.coeff
    }
    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }
    pub fn has_relations(&self) -> bool {
        self.rel.is_some()
    }
    /// Number of `Z/p^K` coordinates of an element.
    pub fn width(&self) -> usize {
        self.alg.len() * self.coeff.degree()
    }
    /// The model precision: every freshly built element carries it.
    pub fn model_prec(&self) -> Prec {
        let n = self.coeff.n();
        let m = self.alg.m();
        Prec { n, m, s: n + m - 1 }
    }
    /// Whether `phi` is defined on variable `v`.
    pub fn phi_defined(&self, v: usize) -> bool {
        self.phi_var.get(v).is_some_and(|x| x.is_some())
    }

    fn const_raw(&self, c: &[u64]) -> Vec<u64> {
        let mut v = vec![0; self.width()];
        v[..c.len()].copy_from_slice(c);
        v
    }

    pub(crate) fn mul_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let df = self.coeff.degree();
        let n = self.alg.len();
        let mut out = vec![0; n * df];
        let nz_b: Vec<usize> = (0..n).filter(|&j| b[j * df..(j + 1) * df].iter().any(|&x| x != 0)).collect();
        for i in 0..n {
            let ai = &a[i * df..(i + 1) * df];
            if ai.iter().all(|&x| x == 0) {
                continue;
            }
            for &j in &nz_b {
                if let Some(k) = self.alg.product(i, j) {
                    let bj = &b[j * df..(j + 1) * df];
                    self.coeff.mul_acc(&mut out[k * df..(k + 1) * df], ai, bj);
                }
            }
        }
        out
    }

    fn phi_raw(&self, a: &[u64]) -> Result<Vec<u64>> {
        let df = self.coeff.degree();
        let mut out = vec![0; self.width()];
        let md = self.coeff.modulus();
        for i in 0..self.alg.len() {
            let ai = &a[i * df..(i + 1) * df];
            if ai.iter().all(|&x| x == 0) {
                continue;
            }
            let img = self.phi_mono[i]
                .as_ref()
                .ok_or_else(|| Error::DepthExhausted(format!("phi is undefined on {}", self.alg.format_mono(i))))?;
            let s = self.coeff.sigma(ai);
            if df == 1 {
                let c = s[0];
                for (o, &x) in out.iter_mut().zip(img) {
                    if x != 0 {
                        *o = md.add(*o, md.mul(c, x));
                    }
                }
            } else {
                for k in 0..self.alg.len() {
                    let ik = &img[k * df..(k + 1) * df];
                    if ik.iter().any(|&x| x != 0) {
                        self.coeff.mul_acc(&mut out[k * df..(k + 1) * df], &s, ik);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reduces a flat vector modulo the relation module (identity without
    /// relations).
    pub fn normal_form(&self, a: &[u64]) -> Vec<u64> {
        match &self.rel {
            None => a.to_vec(),
            Some(rel) => {
                let mut v = vec![0; a.len()];
                for (k, &x) in a.iter().enumerate() {
                    v[rel.pos[k]] = x;
                }
                rel.howell.reduce_in_place(&mut v);
                let mut out = vec![0; a.len()];
                for (c, &x) in v.iter().enumerate() {
                    out[rel.order[c]] = x;
                }
                out
            }
        }
    }

    /// Relation rows in flat coordinates (empty without relations).
    pub fn relation_rows(&self) -> Vec<Vec<u64>> {
        match &self.rel {
            None => Vec::new(),
            Some(rel) => rel
                .howell
                .rows()
                .iter()
                .map(|r| {
                    let mut out = vec![0; r.len()];
                    for (c, &x) in r.iter().enumerate() {
                        out[rel.order[c]] = x;
                    }
                    out
                })
                .collect(),
        }
    }

    /// Flat rows spanning the ledger ideal `pi^n + (t)^m + m^s` inside the
    /// stored ring (only the part not already zero in storage).
    pub fn ledger_rows(&self, prec: Prec) -> Vec<Vec<u64>> {
        let df = self.coeff.degree();
        let mut rows = Vec::new();
        let pi_rows = pi_power_basis(&self.coeff, prec.n.min(prec.s));
        for i in 0..self.alg.len() {
            let d = self.alg.degree(i);
            let need = if d >= prec.m || d >= prec.s { 0 } else { prec.n.min(prec.s - d) };
            let basis = if need == 0 {
                pi_power_basis(&self.coeff, 0)
            } else if need == prec.n.min(prec.s) {
                pi_rows.clone()
            } else {
                pi_power_basis(&self.coeff, need)
            };
            for b in basis {
                let mut r = vec![0; self.width()];
                r[i * df..(i + 1) * df].copy_from_slice(&b);
                rows.push(r);
            }
        }
        rows
    }

    /// The constant `c` of the coefficient ring.
    pub fn constant(self: &Arc<Self>, c: &[u64]) -> Elt {
        Elt::from_raw(self, self.const_raw(c))
    }
    pub fn int(self: &Arc<Self>, c: i64) -> Elt {
        self.constant(&self.coeff.int(c))
    }
    pub fn zero(self: &Arc<Self>) -> Elt {
        self.int(0)
    }
    pub fn one(self: &Arc<Self>) -> Elt {
        self.int(1)
    }
    /// The uniformizer `pi`.
    pub fn pi(self: &Arc<Self>) -> Elt {
        self.constant(self.coeff.pi())
    }
    /// The variable with index `v`.
    pub fn var(self: &Arc<Self>, v: usize) -> Elt {
        let mut c = vec![0; self.width()];
        if let Some(i) = self.alg.var_mono(v) {
            c[i * self.coeff.degree()] = 1;
        }
        Elt::from_raw(self, c)
    }
    /// The variable with the given name.
    pub fn var_named(self: &Arc<Self>, name: &str) -> Result<Elt> {
        let v = self.alg.var_index(name).ok_or_else(|| Error::Validation(format!("unknown variable {name}")))?;
        Ok(self.var(v))
    }
    /// A monomial times a coefficient.
    pub fn term(self: &Arc<Self>, c: &[u64], exps: &[u8]) -> Elt {
        let mut out = vec![0; self.width()];
        if let Some(i) = self.alg.index_of(exps) {
            let df = self.coeff.degree();
            out[i * df..(i + 1) * df].copy_from_slice(c);
        }
        Elt::from_raw(self, out)
    }
}

/// `Z/p^K`-basis of `pi^k O` as coefficient vectors.
fn pi_power_basis(coeff: &CoeffRing, k: u32) -> Vec<Vec<u64>> {
    let mut pw = coeff.one();
    for _ in 0..k {
        pw = coeff.mul(&pw, coeff.pi());
    }
    let df = coeff.degree();
    (0..df)
        .map(|i| {
            let mut xi = vec![0; df];
            xi[i] = 1;
            coeff.mul(&pw, &xi)
        })
        .collect()
}

/// An element of a [`DeltaCtx`] with its precision ledger.
#[derive(Clone)]
pub struct Elt {
    ctx: Arc<DeltaCtx>,
    c: Vec<u64>,
    prec: Prec,
}

impl fmt::Debug for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {}", self, self.prec)
    }
}

impl fmt::Display for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::rings::parse::format_elt(self))
    }
}

impl Elt {
    /// Wraps a flat coefficient vector at model precision.
    pub fn from_raw(ctx: &Arc<DeltaCtx>, c: Vec<u64>) -> Elt {
        assert_eq!(c.len(), ctx.width(), "coefficient vector length");
        let prec = ctx.model_prec();
        Elt { ctx: ctx.clone(), c, prec }
    }

    pub fn ctx(&self) -> &Arc<DeltaCtx> {
        &self.ctx
    }
    /// Flat coefficients: monomial-major, coefficient digits inner.
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }
    pub fn prec(&self) -> Prec {
        self.prec
    }
    /// Lowers the ledger to at most `p`.
    pub fn with_prec(mut self, p: Prec) -> Elt {
        self.prec = self.prec.min(p);
        self
    }
    /// Coefficient of monomial `i`.
    pub fn coeff_at(&self, i: usize) -> &[u64] {
        let df = self.ctx.coeff.degree();
        &self.c[i * df..(i + 1) * df]
    }
    /// The constant coefficient.
    pub fn constant_term(&self) -> &[u64] {
        self.coeff_at(0)
    }

    fn check(&self, o: &Elt) {
        assert!(Arc::ptr_eq(&self.ctx, &o.ctx), "elements of different rings combined");
    }

    fn map(&self, c: Vec<u64>, prec: Prec) -> Elt {
        Elt { ctx: self.ctx.clone(), c, prec }
    }

    pub fn add_ref(&self, o: &Elt) -> Elt {
        self.check(o);
        let c = self.ctx.coeff.add(&self.c, &o.c);
        self.map(c, self.prec.min(o.prec))
    }
    pub fn sub_ref(&self, o: &Elt) -> Elt {
        self.check(o);
        let c = self.ctx.coeff.sub(&self.c, &o.c);
        self.map(c, self.prec.min(o.prec))
    }
    pub fn neg_ref(&self) -> Elt {
        self.map(self.ctx.coeff.neg(&self.c), self.prec)
    }
    pub fn mul_ref(&self, o: &Elt) -> Elt {
        self.check(o);
        self.map(self.ctx.mul_raw(&self.c, &o.c), self.prec.min(o.prec))
    }
    /// Multiplies by a coefficient-ring element.
    pub fn scale(&self, a: &[u64]) -> Elt {
        let df = self.ctx.coeff.degree();
        let mut c = vec![0; self.c.len()];
        for (dst, src) in c.chunks_mut(df).zip(self.c.chunks(df)) {
            if src.iter().any(|&x| x != 0) {
                dst.copy_from_slice(&self.ctx.coeff.mul(src, a));
            }
        }
        self.map(c, self.prec)
    }
    pub fn scale_int(&self, k: i64) -> Elt {
        let md = self.ctx.coeff.modulus();
        let f = md.from_i64(k);
        self.map(self.c.iter().map(|&x| md.mul(x, f)).collect(), self.prec)
    }
    pub fn pow(&self, mut k: u64) -> Elt {
        let mut acc = self.ctx.one().with_prec(self.prec);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// The Frobenius lift; the ledger is unchanged.
    pub fn phi(&self) -> Result<Elt> {
        Ok(self.map(self.ctx.phi_raw(&self.c)?, self.prec))
    }

    /// Exact division by `pi`; `None` if some coefficient is not divisible.
    pub fn div_pi(&self) -> Option<Elt> {
        let df = self.ctx.coeff.degree();
        let mut c = vec![0; self.c.len()];
        for (dst, src) in c.chunks_mut(df).zip(self.c.chunks(df)) {
            if src.iter().any(|&x| x != 0) {
                dst.copy_from_slice(&self.ctx.coeff.div_pi(src)?);
            }
        }
        let p = Prec { n: self.prec.n.saturating_sub(1), m: self.prec.m, s: self.prec.s.saturating_sub(1) };
        Some(self.map(c, p))
    }

    /// `delta(a) = (phi(a) - a^q) / pi`.
    pub fn delta(&self) -> Result<Elt> {
        if self.prec.n < 2 {
            return Err(Error::PrecisionExhausted(format!(
                "delta needs at least two pi-digits, element has {}",
                self.prec.n
            )));
        }
        let d = self.phi()?.sub_ref(&self.pow(self.ctx.coeff.q()));
        d.div_pi().ok_or_else(|| {
            Error::Validation("phi(a) - a^q is not divisible by pi; the Frobenius lift is inconsistent".into())
        })
    }

    /// Units are the elements whose constant coefficient is a unit: every
    /// other monomial is nilpotent.
    pub fn is_unit(&self) -> bool {
        self.ctx.coeff.is_unit(self.constant_term())
    }

    /// Inverse of a unit via a finite geometric series.
    pub fn inv(&self) -> Result<Elt> {
        let c0 = self.constant_term().to_vec();
        let c0i = self
            .ctx
            .coeff
            .inv(&c0)
            .ok_or_else(|| Error::NotInvertible(format!("{self} has non-unit constant term")))?;
        // a = c0 (1 + n) with n nilpotent of order < M.
        let n = self.scale(&c0i).sub_ref(&self.ctx.one());
        let mut acc = self.ctx.one();
        let mut term = self.ctx.one();
        let neg_n = n.neg_ref();
        for _ in 1..self.ctx.alg.m() {
            term = term.mul_ref(&neg_n);
            acc = acc.add_ref(&term);
        }
        Ok(acc.scale(&c0i).with_prec(self.prec))
    }

    /// Minimum `pi`-valuation over all coefficients.
    pub fn val_pi(&self) -> u32 {
        let df = self.ctx.coeff.degree();
        self.c.chunks(df).map(|b| self.ctx.coeff.val(b)).min().unwrap_or(0)
    }

    /// Smallest degree of a monomial with nonzero coefficient (`M` if zero).
    pub fn ord(&self) -> u32 {
        let df = self.ctx.coeff.degree();
        self.c
            .chunks(df)
            .enumerate()
            .find(|(_, b)| b.iter().any(|&x| x != 0))
            .map_or(self.ctx.alg.m(), |(i, _)| self.ctx.alg.degree(i))
    }

    /// Is this element zero at precision `p` (modulo the ring's relations)?
    pub fn is_zero_at(&self, p: Prec) -> bool {
        let ctx = &self.ctx;
        if ctx.rel.is_none() {
            let df = ctx.coeff.degree();
            return self.c.chunks(df).enumerate().all(|(i, b)| {
                let d = ctx.alg.degree(i);
                if d >= p.m || d >= p.s {
                    return true;
                }
                let need = p.n.min(p.s - d);
                need == 0 || b.iter().all(|&x| x == 0) || ctx.coeff.val(b) >= need
            });
        }
        let nf = ctx.normal_form(&self.c);
        if nf.iter().all(|&x| x == 0) {
            return true;
        }
        if p.covers(ctx.model_prec()) {
            return false;
        }
        let mut rows = ctx.relation_rows();
        rows.extend(ctx.ledger_rows(p));
        Howell::new(ctx.coeff.modulus(), ctx.width(), rows, false).contains(&self.c)
    }

    /// Zero at this element's own certified precision.
    pub fn is_zero(&self) -> bool {
        self.is_zero_at(self.prec)
    }

    /// Exactly zero as stored (after reduction by relations).
    pub fn is_exact_zero(&self) -> bool {
        self.ctx.normal_form(&self.c).iter().all(|&x| x == 0)
    }

    /// Equality at the smaller of the two certified precisions.
    pub fn eq_cert(&self, o: &Elt) -> bool {
        self.sub_ref(o).is_zero()
    }

    /// Reduced representative (modulo the ring's relations).
    pub fn reduced(&self) -> Elt {
        self.map(self.ctx.normal_form(&self.c), self.prec)
    }

    /// Drops all terms of degree `>= m`.
    pub fn truncate_deg(&self, m: u32) -> Elt {
        let df = self.ctx.coeff.degree();
        let mut c = self.c.clone();
        for (i, b) in c.chunks_mut(df).enumerate() {
            if self.ctx.alg.degree(i) >= m {
                b.iter_mut().for_each(|x| *x = 0);
            }
        }
        self.map(c, self.prec)
    }

    /// Ring map to `target` sending variable `v` to `images[v]` and acting
    /// on coefficients by the identity. Variables mapped by `None` must not
    /// occur.
    pub fn substitute(&self, target: &Arc<DeltaCtx>, images: &[Option<Elt>]) -> Result<Elt> {
        let alg = &self.ctx.alg;
        let df = self.ctx.coeff.degree();
        let mut out = target.zero();
        let mut powers: Vec<Vec<Elt>> =
            images.iter().map(|im| im.iter().map(|e| target.one().with_prec(e.prec)).collect()).collect();
        for (v, im) in images.iter().enumerate() {
            if let Some(e) = im {
                let mut cur = powers[v][0].clone();
                for _ in 1..alg.m() {
                    cur = cur.mul_ref(e);
                    powers[v].push(cur.clone());
                }
            }
        }
        for i in 0..alg.len() {
            let b = &self.c[i * df..(i + 1) * df];
            if b.iter().all(|&x| x == 0) {
                continue;
            }
            let mut term = target.constant(b);
            for (v, &k) in alg.exps(i).iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = powers[v]
                    .get(k as usize)
                    .ok_or_else(|| Error::Validation(format!("variable {} has no image", alg.names()[v])))?;
                term = term.mul_ref(pw);
            }
            out = out.add_ref(&term);
        }
        Ok(out.with_prec(self.prec))
    }

    /// Maps this element into `target`, matching variables by name and
    /// lifting coefficients through their symmetric representatives. The
    /// coefficient rings must share the defining polynomial, or the source
    /// must be a quotient of `Z_p`. Terms above the target degree bound are
    /// dropped.
    pub fn embed(&self, target: &Arc<DeltaCtx>) -> Result<Elt> {
        let src = &self.ctx;
        let sc = &src.coeff;
        let tc = &target.coeff;
        if sc.p() != tc.p() {
            return Err(Error::Validation("embedding between different primes".into()));
        }
        let same_f = sc.f_ints() == tc.f_ints();
        if !same_f && sc.degree() != 1 {
            return Err(Error::Validation("coefficient rings are not compatible".into()));
        }
        let smd = sc.modulus();
        let vmap: Vec<Option<usize>> = src.alg.names().iter().map(|n| target.alg.var_index(n)).collect();
        let df = sc.degree();
        let mut out = vec![0; target.width()];
        let tdf = tc.degree();
        for i in 0..src.alg.len() {
            let b = &self.c[i * df..(i + 1) * df];
            if b.iter().all(|&x| x == 0) {
                continue;
            }
            let mut exps = vec![0u8; target.alg.nvars()];
            for (v, &k) in src.alg.exps(i).iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let tv = vmap[v].ok_or_else(|| {
                    Error::Validation(format!("variable {} is missing in the target ring", src.alg.names()[v]))
                })?;
                exps[tv] = k;
            }
            let Some(j) = target.alg.index_of(&exps) else { continue };
            let lifted: Vec<i64> = b.iter().map(|&x| smd.to_signed(x)).collect();
            let img = if same_f { tc.from_poly(&lifted) } else { tc.int(lifted[0]) };
            out[j * tdf..(j + 1) * tdf].copy_from_slice(&img);
        }
        let prec = self.prec.min(target.model_prec());
        Ok(Elt { ctx: target.clone(), c: out, prec })
    }

    /// Reinterprets the coefficients in another context with the same
    /// algebra and coefficient modulus (used to move between the relation-free
    /// and relation-carrying versions of a ring).
    pub fn transport(&self, target: &Arc<DeltaCtx>) -> Elt {
        assert_eq!(self.ctx.width(), target.width(), "transport between different bases");
        Elt { ctx: target.clone(), c: self.c.clone(), prec: self.prec }
    }
}

impl PartialEq for Elt {
    /// Certified equality; see [`Elt::eq_cert`].
    fn eq(&self, o: &Elt) -> bool {
        self.eq_cert(o)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&Elt> for &Elt {
            type Output = Elt;
            fn $m(self, o: &Elt) -> Elt {
                self.$f(o)
            }
        }
        impl $tr<Elt> for Elt {
            type Output = Elt;
            fn $m(self, o: Elt) -> Elt {
                self.$f(&o)
            }
        }
        impl $tr<&Elt> for Elt {
            type Output = Elt;
            fn $m(self, o: &Elt) -> Elt {
                self.$f(o)
            }
        }
    };
}
binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl Neg for &Elt {
    type Output = Elt;
    fn neg(self) -> Elt {
        self.neg_ref()
    }
}
impl Neg for Elt {
    type Output = Elt;
    fn neg(self) -> Elt {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp_series(p: u64, n: u32, r: usize, m: u32) -> Arc<DeltaCtx> {
        DeltaCtx::series(CoeffRing::zp(p, n).unwrap(), r, m).unwrap()
    }

    #[test]
    fn monomial_count() {
        let a = Algebra::new(vec!["a".into(), "b".into()], 3).unwrap();
        assert_eq!(a.len(), 6);
        assert_eq!(a.format_mono(1), "a");
        assert_eq!(a.format_mono(3), "a^2");
    }

    #[test]
    fn frobenius_examples() {
        let ctx = zp_series(2, 3, 1, 8);
        let t = ctx.var(0);
        assert_eq!(t.phi().unwrap(), t.pow(2));
        let a = &ctx.int(1) + &t;
        assert_eq!(a.phi().unwrap(), &ctx.int(1) + &t.pow(2));
        let b = &t.scale_int(2) + &t.pow(3);
        assert_eq!(b.phi().unwrap(), &t.pow(2).scale_int(2) + &t.pow(6));
    }

    #[test]
    fn delta_examples() {
        let ctx = zp_series(2, 4, 1, 4);
        let two = ctx.int(2);
        let d = two.delta().unwrap();
        assert_eq!(d, ctx.int(-1));
        assert_eq!(d.prec().n, 3);
        assert!(ctx.var(0).delta().unwrap().is_zero());
        let e = &ctx.int(2) + &ctx.var(0);
        let expect = &ctx.int(-1) - &ctx.var(0).scale_int(2);
        assert_eq!(e.delta().unwrap(), expect);
    }

    #[test]
    fn inverse_of_unit() {
        let ctx = zp_series(3, 3, 2, 5);
        let a = &ctx.int(2) + &(&ctx.var(0) * &ctx.var(1));
        let b = a.inv().unwrap();
        assert_eq!(&a * &b, ctx.one());
        assert!(ctx.var(0).inv().is_err());
    }
}
