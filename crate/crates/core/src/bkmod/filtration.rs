//! The filtration `Fil^i(phi^*M) = {x : F x in E^i M}`, its image `P^i` in
//! `M_dR = phi^*M / E`, and the displayed / minuscule classification.
//!
//! In the truncated ring `E` is nilpotent, so membership in `E^j A^n` picks
//! up spurious solutions near the truncation edge. Every statement about
//! `P^i` is therefore made in `A / (E + m^l)` with decision precision
//! `l = L - s`, where `L` is the adic precision of `F` and
//! `det F_num = E^s * unit`. When `F x = E^j z + tau` with `tau in m^L`
//! and `j >= s`, multiplying by the adjugate shows that `x` differs from a
//! true member by an element of `m^{L - s}`.

use serde::Serialize;

use crate::bkmod::{BkModule, Cocharacter, Lattice};
use crate::rings::{Elt, Mat};
use crate::zlinalg::intersect;

/// Three-valued outcome of a precision-relative decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

/// `Fil^i(phi^*M)` as a sub-lattice of `A^n`.
#[derive(Clone, Debug)]
pub struct FilteredPiece {
    pub level: i64,
    pub lattice: Lattice,
}

impl FilteredPiece {
    /// A spanning set of `A`-module generators.
    pub fn basis(&self) -> Vec<Vec<Elt>> {
        self.lattice.vectors()
    }
    pub fn contains(&self, v: &[Elt]) -> bool {
        self.lattice.contains(v)
    }
}

/// `Fil^i(phi^*M)`: the preimage of `E^{i+k} A^n` under `F_num`.
pub fn fil_phi_star(m: &BkModule, i: i64) -> FilteredPiece {
    let ctx = m.prism().ring().clone();
    let n = m.rank();
    let j = i + m.denom_k() as i64;
    let lattice = if j <= 0 {
        Lattice::full(&ctx, n)
    } else {
        let ej = m.prism().e().pow(j as u64);
        let target = Lattice::columns(&Mat::diag(&vec![ej; n]));
        Lattice::preimage(m.f_num(), &target)
    };
    FilteredPiece { level: i, lattice }
}

/// A class of `P^i / P^{i+1}` that is killed by `pi` but is not in
/// `m (P^i / P^{i+1})`; over a ring with `pi^2 != 0` no free module has one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeWitness {
    pub level: i64,
    pub vector: Vec<String>,
}

/// Rank and size of one graded piece `P^i / P^{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedPiece {
    pub level: i64,
    /// Minimal number of generators.
    pub rank: u32,
    /// `log_p |P^i / P^{i+1}|`.
    pub log_size: u32,
    pub free: bool,
}

/// Output of [`hodge_and_classify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub decision_precision: u32,
    pub pieces: Vec<GradedPiece>,
    pub displayed: Verdict,
    pub effective: bool,
    /// Hodge pattern: `P^i` full for `i <= 0`, zero for `i >= 2`, displayed.
    pub minuscule_filtration: Verdict,
    /// Effective and `E` kills the cokernel of `F`.
    pub minuscule_cokernel: bool,
    pub minuscule: Verdict,
    pub mu: Option<Cocharacter>,
    pub witness: Option<HodgeWitness>,
}

/// Hodge data of a module at its decision precision.
pub(crate) struct Hodge {
    pub lp: u32,
    pub lo: i64,
    pub hi: i64,
    pub de_rham: Lattice,
    pub fil: Vec<Lattice>,
    pub images: Vec<Lattice>,
}

impl Hodge {
    pub fn compute(m: &BkModule) -> Hodge {
        let ctx = m.prism().ring().clone();
        let n = m.rank();
        let lp = m.prec().adic().saturating_sub(m.det_order());
        let de_rham = Lattice::de_rham_kernel(&ctx, n, m.prism().e(), lp.max(1));
        let lo = -(m.denom_k() as i64);
        let hi = m.det_order() as i64 - m.denom_k() as i64 + 1;
        let fil: Vec<Lattice> = (lo..=hi).map(|i| fil_phi_star(m, i).lattice).collect();
        let images = fil.iter().map(|f| f.plus(&de_rham)).collect();
        Hodge { lp, lo, hi, de_rham, fil, images }
    }
    /// Index of level `i`, clamped to the computed range.
    pub fn idx(&self, i: i64) -> usize {
        (i.clamp(self.lo, self.hi) - self.lo) as usize
    }
    /// `P^i` (as a lattice containing the de Rham kernel).
    pub fn p(&self, i: i64) -> &Lattice {
        &self.images[self.idx(i)]
    }
    pub fn fil(&self, i: i64) -> &Lattice {
        &self.fil[self.idx(i)]
    }
}

fn log_ring(m: &BkModule, h: &Hodge) -> u32 {
    let n = m.rank() as u32;
    let ctx = m.prism().ring();
    let full = n * ctx.width() as u32 * ctx.coeff().k();
    (full - h.de_rham.log_size()) / n.max(1)
}

/// Computes `P^i` for every level and classifies the module.
pub fn hodge_and_classify(m: &BkModule) -> Classification {
    let n = m.rank();
    let ctx = m.prism().ring().clone();
    let h = Hodge::compute(m);
    let coeff = ctx.coeff();
    let f_res = coeff.degree() as u32 / coeff.e();
    let log_r = if n == 0 { 0 } else { log_ring(m, &h) };
    let full = Lattice::full(&ctx, n).plus(&h.de_rham);
    let edges_ok = h.p(h.lo).same_as(&full) && h.p(h.hi).same_as(&h.de_rham);

    let mut pieces = Vec::new();
    let mut witness = None;
    for i in h.lo..h.hi {
        let pi_ = h.p(i);
        let next = h.p(i + 1);
        let gen_quot = h.fil(i).times_maximal().plus(next);
        let log_size = pi_.log_size() - next.log_size();
        let rank = (pi_.log_size() - gen_quot.log_size()) / f_res;
        let free = log_size == rank * log_r;
        if !free && witness.is_none() {
            witness = find_witness(m, &h, i, &gen_quot);
        }
        pieces.push(GradedPiece { level: i, rank, log_size, free });
    }

    let displayed =
        if h.lp < 2 || !edges_ok { Verdict::Inconclusive } else { Verdict::from(pieces.iter().all(|p| p.free)) };
    let mu = (displayed == Verdict::True).then(|| {
        let mut w = Vec::new();
        for p in pieces.iter().rev() {
            w.extend(std::iter::repeat_n(p.level, p.rank as usize));
        }
        Cocharacter::new(w).expect("levels are listed in descending order")
    });
    let pattern = h.p(0).same_as(&full) && h.p(2).same_as(&h.de_rham);
    let minuscule_filtration = match displayed {
        Verdict::True => Verdict::from(pattern),
        Verdict::False => Verdict::False,
        Verdict::Inconclusive => Verdict::Inconclusive,
    };
    let minuscule_cokernel = m.is_effective() && cokernel_killed_by_e(m);
    Classification {
        decision_precision: h.lp,
        pieces,
        displayed,
        effective: m.is_effective(),
        minuscule_filtration,
        minuscule_cokernel,
        minuscule: minuscule_filtration,
        mu,
        witness,
    }
}

fn find_witness(m: &BkModule, h: &Hodge, i: i64, gen_quot: &Lattice) -> Option<HodgeWitness> {
    let ctx = m.prism().ring();
    let pi = ctx.pi();
    let next = h.p(i + 1);
    h.fil(i).vectors().into_iter().find_map(|v| {
        let pv: Vec<Elt> = v.iter().map(|x| x * &pi).collect();
        (next.contains(&pv) && !gen_quot.contains(&v))
            .then(|| HodgeWitness { level: i, vector: v.iter().map(|x| x.to_string()).collect() })
    })
}

/// `E * e_j` lies in the image of `F_num` for every `j`.
pub fn cokernel_killed_by_e(m: &BkModule) -> bool {
    let ctx = m.prism().ring();
    let img = Lattice::columns(m.f_num());
    let n = m.rank();
    (0..n).all(|j| {
        let v: Vec<Elt> = (0..n).map(|i| if i == j { m.prism().e().clone() } else { ctx.zero() }).collect();
        img.contains(&v)
    })
}

/// `E Fil^{i-1} = Fil^i  cap  E phi^*M`, compared modulo `m^l A^n` at the
/// decision precision.
pub fn ladder_holds(m: &BkModule, i: i64) -> bool {
    let ctx = m.prism().ring().clone();
    let n = m.rank();
    let e = m.prism().e();
    let lp = m.prec().adic().saturating_sub(m.det_order()).max(1);
    let mp = ctx.model_prec();
    let slack = Lattice::from_rows(
        &ctx,
        n,
        crate::rings::matrix::ambient_rows(&ctx, n, Some(crate::rings::Prec { n: mp.n, m: mp.m, s: lp })),
    );
    let lhs = fil_phi_star(m, i - 1).lattice.scaled(e).plus(&slack);
    let e_full = Lattice::columns(&Mat::diag(&vec![e.clone(); n]));
    let cap = intersect(ctx.coeff().modulus(), ctx.width() * n, fil_phi_star(m, i).lattice.rows(), e_full.rows());
    let rhs = Lattice::from_rows(&ctx, n, cap).plus(&slack);
    lhs.same_as(&rhs)
}

/// Both sides of `Fil^{h+1} in E phi^*M  <=>  E^h M in F(phi^*M)`.
pub fn height_sides(m: &BkModule, height: i64) -> (bool, bool) {
    let h = Hodge::compute(m);
    let lhs = h.p(height + 1).same_as(&h.de_rham);
    let ctx = m.prism().ring();
    let n = m.rank();
    let e = m.prism().e();
    let j = height + m.denom_k() as i64;
    let (img, scale) = if j >= 0 {
        (Lattice::columns(m.f_num()), e.pow(j as u64))
    } else {
        (Lattice::columns(&m.f_num().scale(&e.pow((-j) as u64))), ctx.one())
    };
    let rhs = (0..n).all(|c| {
        let v: Vec<Elt> = (0..n).map(|i| if i == c { scale.clone() } else { ctx.zero() }).collect();
        img.contains(&v)
    });
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bkmod::make_banal_bk;
    use crate::bkmod::tests::prism;
    use crate::rings::parse_elt;

    #[test]
    fn banal_is_displayed() {
        let pr = prism(3, 4, 6, "3 + t");
        let ctx = pr.ring().clone();
        let e = |s: &str| parse_elt(&ctx, s).unwrap();
        let x = Mat::from_rows(vec![vec![e("1 + t"), e("2")], vec![e("t^2"), e("1")]]).unwrap();
        let mu = Cocharacter::new(vec![1, 0]).unwrap();
        let m = make_banal_bk(&pr, &mu, &x).unwrap();
        let c = hodge_and_classify(&m);
        assert_eq!(c.displayed, Verdict::True, "{c:?}");
        assert_eq!(c.mu, Some(mu));
        assert_eq!(c.minuscule, Verdict::True);
        assert!(c.minuscule_cokernel);
        assert!(ladder_holds(&m, 1) && ladder_holds(&m, 2));
        assert_eq!(height_sides(&m, 1), (true, true));
        assert_eq!(height_sides(&m, 0), (false, false));
    }

    #[test]
    fn non_displayed_example() {
        let pr = prism(3, 4, 6, "3 + t");
        let ctx = pr.ring().clone();
        let d = pr.e().clone();
        let f = Mat::from_rows(vec![vec![ctx.pi(), d.clone()], vec![d.clone(), d.pow(2)]]).unwrap();
        let m = BkModule::new(&pr, f, 0).unwrap();
        assert!(fil_phi_star(&m, 1).contains(&[d.clone(), ctx.one()]));
        let c = hodge_and_classify(&m);
        assert_eq!(c.displayed, Verdict::False, "{c:?}");
        let w = c.witness.unwrap();
        assert_eq!(w.level, 1);
        assert!(!c.minuscule_cokernel);
        assert_eq!(c.minuscule, Verdict::False);
    }

    #[test]
    fn identity_frobenius() {
        let pr = prism(2, 3, 4, "2 + t");
        let m = BkModule::new(&pr, Mat::identity(pr.ring(), 2), 0).unwrap();
        let c = hodge_and_classify(&m);
        assert_eq!(c.displayed, Verdict::True);
        assert_eq!(c.mu, Some(Cocharacter::new(vec![0, 0]).unwrap()));
        assert!(c.minuscule_cokernel);
        assert!(fil_phi_star(&m, -5).lattice.same_as(&Lattice::full(pr.ring(), 2)));
    }
}
