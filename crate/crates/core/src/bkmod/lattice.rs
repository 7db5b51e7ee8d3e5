//! `A`-submodules of `A^n`, stored as `Z/p^K`-row spans of flat coordinates.

use std::sync::Arc;

use crate::rings::matrix::{ambient_rows, flatten, module_rows, unflatten};
use crate::rings::{DeltaCtx, Elt, Mat, Prec};
use crate::zlinalg::{preimage_kernel, Howell, ZModMatrix};

/// An `A`-stable row span inside `A^n`.
#[derive(Clone, Debug)]
pub struct Lattice {
    ctx: Arc<DeltaCtx>,
    n: usize,
    h: Howell,
}

/// Multiplies a flat vector of `A^n` by a scalar.
pub fn scale_row(ctx: &Arc<DeltaCtx>, n: usize, row: &[u64], a: &Elt) -> Vec<u64> {
    let v: Vec<Elt> = unflatten(ctx, row, n).iter().map(|x| x * a).collect();
    flatten(&v)
}

impl Lattice {
    pub fn from_rows(ctx: &Arc<DeltaCtx>, n: usize, rows: Vec<Vec<u64>>) -> Lattice {
        let h = Howell::new(ctx.coeff().modulus(), ctx.width() * n, rows, false);
        Lattice { ctx: ctx.clone(), n, h }
    }
    /// The `A`-span of vectors, plus the relations of the ring.
    pub fn generated(ctx: &Arc<DeltaCtx>, n: usize, gens: &[Vec<Elt>]) -> Lattice {
        let mut rows = module_rows(ctx, gens);
        rows.extend(ambient_rows(ctx, n, None));
        Lattice::from_rows(ctx, n, rows)
    }
    /// The `A`-span of the columns of a matrix.
    pub fn columns(m: &Mat) -> Lattice {
        let gens: Vec<Vec<Elt>> = (0..m.cols).map(|j| m.col(j)).collect();
        Lattice::generated(m.ctx(), m.rows, &gens)
    }
    /// All of `A^n`.
    pub fn full(ctx: &Arc<DeltaCtx>, n: usize) -> Lattice {
        Lattice::columns(&Mat::identity(ctx, n))
    }
    /// `(E, m^l) A^n` together with the ring relations: the kernel of
    /// `A^n -> (A / (E + m^l))^n`.
    pub fn de_rham_kernel(ctx: &Arc<DeltaCtx>, n: usize, e: &Elt, l: u32) -> Lattice {
        let gens: Vec<Vec<Elt>> =
            (0..n).map(|k| (0..n).map(|j| if j == k { e.clone() } else { ctx.zero() }).collect()).collect();
        let mut rows = module_rows(ctx, &gens);
        let mp = ctx.model_prec();
        rows.extend(ambient_rows(ctx, n, Some(Prec { n: mp.n, m: mp.m, s: l })));
        rows.extend(ambient_rows(ctx, n, None));
        Lattice::from_rows(ctx, n, rows)
    }

    pub fn ctx(&self) -> &Arc<DeltaCtx> {
        &self.ctx
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn rows(&self) -> &[Vec<u64>] {
        self.h.rows()
    }
    /// Generators as vectors of ring elements.
    pub fn vectors(&self) -> Vec<Vec<Elt>> {
        self.h.rows().iter().map(|r| unflatten(&self.ctx, r, self.n)).collect()
    }
    /// `log_p` of the cardinality.
    pub fn log_size(&self) -> u32 {
        self.h.log_size()
    }
    pub fn contains_flat(&self, v: &[u64]) -> bool {
        self.h.contains(v)
    }
    pub fn contains(&self, v: &[Elt]) -> bool {
        self.h.contains(&flatten(v))
    }
    pub fn contains_lattice(&self, o: &Lattice) -> bool {
        self.h.contains_span(&o.h)
    }
    pub fn same_as(&self, o: &Lattice) -> bool {
        self.contains_lattice(o) && o.contains_lattice(self)
    }
    pub fn plus(&self, o: &Lattice) -> Lattice {
        let mut rows = self.h.rows().to_vec();
        rows.extend(o.h.rows().iter().cloned());
        Lattice::from_rows(&self.ctx, self.n, rows)
    }
    /// `a * L`.
    pub fn scaled(&self, a: &Elt) -> Lattice {
        let rows = self.h.rows().iter().map(|r| scale_row(&self.ctx, self.n, r, a)).collect();
        Lattice::from_rows(&self.ctx, self.n, rows)
    }
    /// `m * L` where `m = (pi, t_1, ..., t_r)` is the maximal ideal.
    pub fn times_maximal(&self) -> Lattice {
        let mut out = self.scaled(&self.ctx.pi());
        for v in 0..self.ctx.algebra().nvars() {
            out = out.plus(&self.scaled(&self.ctx.var(v)));
        }
        out
    }

    /// `{x in A^n : F x in target}` for an `n' x n` matrix `F`.
    pub fn preimage(f: &Mat, target: &Lattice) -> Lattice {
        let ctx = f.ctx().clone();
        let w = ctx.width();
        let md = ctx.coeff().modulus();
        let mut img = Vec::with_capacity(f.cols * w);
        for j in 0..f.cols {
            for c in 0..w {
                let mut b = vec![0; w];
                b[c] = 1;
                let basis = Elt::from_raw(&ctx, b);
                let col: Vec<Elt> = f.col(j).iter().map(|x| x * &basis).collect();
                img.push(flatten(&col));
            }
        }
        let m = ZModMatrix::from_rows(md, w * f.rows, &img).expect("consistent widths");
        let mut rows = preimage_kernel(&m, target.rows());
        rows.extend(ambient_rows(&ctx, f.cols, None));
        Lattice::from_rows(&ctx, f.cols, rows)
    }

    /// `y` with `F y = v`, if the target lies in the column span.
    pub fn solve(f: &Mat, v: &[Elt]) -> Option<Vec<Elt>> {
        let ctx = f.ctx().clone();
        let w = ctx.width();
        let gens: Vec<Vec<Elt>> = (0..f.cols).map(|j| f.col(j)).collect();
        let mut rows = module_rows(&ctx, &gens);
        rows.extend(ambient_rows(&ctx, f.rows, None));
        let h = Howell::new(ctx.coeff().modulus(), w * f.rows, rows, true);
        let wit = h.witness(&flatten(v))?;
        Some((0..f.cols).map(|g| Elt::from_raw(&ctx, wit[g * w..(g + 1) * w].to_vec())).collect())
    }
}
