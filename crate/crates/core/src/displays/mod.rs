//! Display groups `G_mu(A, (E))` for `GL_n` and the split orthogonal group,
//! their parabolic/unipotent decomposition, and graded coordinates.
//!
//! Coordinates are sorted by descending weight, so `P_mu` is block upper
//! triangular and the unipotent part `U^-_mu` is block strictly lower
//! triangular. The conjugate `mu(E) g mu(E)^{-1}` has entries
//! `E^{m_i - m_j} g_ij`, so membership asks for `E^{m_j - m_i} | g_ij`
//! whenever `m_i < m_j`.

pub mod banal;
pub mod congruence;

pub use banal::{
    act, bk_intertwiner, change_generator, display_iso_from_standard_form, display_to_bk, phi_torsor,
    phi_torsor_consistent, sigma_mu_d, verify_iso, BanalDisplay, DisplayRecord, PhiTorsor,
};
pub use congruence::{graded_quotients, GradedQuotientReport, QuotientPiece};

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bkmod::{fil_mu, is_orthogonal, Cocharacter, Lattice};
use crate::error::{Error, Result};
use crate::prisms::PrismCtx;
use crate::rings::delta::random_elt;
use crate::rings::{Elt, Mat};

/// The reductive groups that ship: `GL_n` and `O(Q)` for the split form on
/// `2m` variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n", rename_all = "lowercase")]
pub enum GroupDescriptor {
    Gl(usize),
    Orth(usize),
}

/// A Lie algebra basis vector `sum sign * E_ij` with its weight under
/// `Ad(mu(t)^{-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LieVector {
    pub terms: Vec<(usize, usize, i64)>,
    pub weight: i64,
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Gl(n) => write!(f, "GL{n}"),
            GroupDescriptor::Orth(n) => write!(f, "O{n}"),
        }
    }
}

impl GroupDescriptor {
    pub fn rank(&self) -> usize {
        match *self {
            GroupDescriptor::Gl(n) | GroupDescriptor::Orth(n) => n,
        }
    }

    /// `x in G(A)`.
    pub fn contains(&self, x: &Mat) -> bool {
        if x.rows != self.rank() || !x.is_square() {
            return false;
        }
        match self {
            GroupDescriptor::Gl(_) => x.det().is_unit(),
            GroupDescriptor::Orth(_) => is_orthogonal(x),
        }
    }

    /// Checks that `mu` is a cocharacter of the group.
    pub fn check_mu(&self, mu: &Cocharacter) -> Result<()> {
        let n = self.rank();
        if mu.rank() != n {
            return Err(Error::Dimension(format!(
                "cocharacter {mu} has rank {}, group {self} has rank {n}",
                mu.rank()
            )));
        }
        if let GroupDescriptor::Orth(_) = self {
            let w = mu.weights();
            if n % 2 == 1 || (0..n).any(|i| w[i] + w[n - 1 - i] != 0) {
                return Err(Error::Validation(format!("{mu} does not factor through {self}")));
            }
        }
        Ok(())
    }

    /// A basis of `Lie(G)` by elementary matrices, with weights
    /// `m_j - m_i` for `E_ij`.
    pub fn lie_basis(&self, mu: &Cocharacter) -> Vec<LieVector> {
        let n = self.rank();
        let w = mu.weights();
        let mut out = Vec::new();
        match self {
            GroupDescriptor::Gl(_) => {
                for i in 0..n {
                    for j in 0..n {
                        out.push(LieVector { terms: vec![(i, j, 1)], weight: w[j] - w[i] });
                    }
                }
            }
            GroupDescriptor::Orth(_) => {
                // X^T J + J X = 0 pairs E_ij with -E_{j',i'} (k' = n-1-k); the
                // antidiagonal positions are forced to vanish.
                for i in 0..n {
                    for j in 0..n {
                        let (ip, jp) = (n - 1 - j, n - 1 - i);
                        if i + j == n - 1 || (ip, jp) < (i, j) {
                            continue;
                        }
                        out.push(LieVector { terms: vec![(i, j, 1), (ip, jp, -1)], weight: w[j] - w[i] });
                    }
                }
            }
        }
        out
    }
}

/// No Lie algebra weight `>= 2`.
pub fn one_bounded(desc: &GroupDescriptor, mu: &Cocharacter) -> bool {
    desc.check_mu(mu).is_ok() && desc.lie_basis(mu).iter().all(|v| v.weight <= 1)
}

/// `g in G_mu(A, (E))` together with `mu(E) g mu(E)^{-1}`, whose entries are
/// the division witnesses.
#[derive(Clone, Debug)]
pub struct DisplayGroupElt {
    pub g: Mat,
    pub conj: Mat,
}

/// Membership by entrywise divisibility. Returns the element with its
/// conjugate when `g` lies in the display group.
pub fn membership_display_group(
    desc: &GroupDescriptor,
    pr: &PrismCtx,
    mu: &Cocharacter,
    g: &Mat,
) -> Option<DisplayGroupElt> {
    if desc.check_mu(mu).is_err() || !desc.contains(g) {
        return None;
    }
    let w = mu.weights();
    let n = g.rows;
    let mut conj = g.clone();
    for i in 0..n {
        for j in 0..n {
            let d = w[i] - w[j];
            let c = if d >= 0 {
                g.at(i, j) * &pr.e().pow(d as u64)
            } else {
                match pr.ideal_pow_membership(g.at(i, j), (-d) as u32) {
                    (true, Some(q)) => q,
                    _ => return None,
                }
            };
            conj.set(i, j, c);
        }
    }
    Some(DisplayGroupElt { g: g.clone(), conj })
}

/// The definitional criterion for `GL_n`: `g` stabilizes every `Fil^i_mu`.
pub fn stabilizes_filtration(pr: &PrismCtx, mu: &Cocharacter, g: &Mat) -> bool {
    if !g.det().is_unit() {
        return false;
    }
    (mu.min()..=mu.max()).all(|i| {
        let f = fil_mu(pr, mu, i);
        Lattice::columns(&f).contains_lattice(&Lattice::columns(&g.mul(&f)))
    })
}

/// Index ranges of the weight blocks.
fn blocks(mu: &Cocharacter) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut s = 0;
    for (_, r) in mu.multiplicities() {
        out.push((s, s + r));
        s += r;
    }
    out
}

fn sub(m: &Mat, r: (usize, usize), c: (usize, usize)) -> Mat {
    Mat::from_fn(r.1 - r.0, c.1 - c.0, |i, j| m.at(r.0 + i, c.0 + j).clone())
}

/// `g = u p` with `u in U^-_mu` (block lower unipotent) and `p in P_mu`
/// (block upper triangular), by block elimination.
pub fn decompose(
    desc: &GroupDescriptor,
    pr: &PrismCtx,
    mu: &Cocharacter,
    g: &DisplayGroupElt,
) -> Result<(DisplayGroupElt, DisplayGroupElt)> {
    let n = g.g.rows;
    let ctx = pr.ring().clone();
    let mut a = g.g.clone();
    let mut l = Mat::identity(&ctx, n);
    for (s, e) in blocks(mu) {
        if e == n {
            break;
        }
        let piv = sub(&a, (s, e), (s, e)).inv()?;
        let lower = sub(&a, (e, n), (s, e)).mul(&piv);
        let upper = sub(&a, (s, e), (0, n));
        let corr = lower.mul(&upper);
        for i in e..n {
            for j in s..e {
                l.set(i, j, lower.at(i - e, j - s).clone());
            }
            for j in 0..n {
                let v = a.at(i, j) - corr.at(i - e, j);
                a.set(i, j, v);
            }
        }
    }
    if !l.mul(&a).eq_cert(&g.g) {
        return Err(Error::Validation("block factorization does not recompose".into()));
    }
    let u = membership_display_group(desc, pr, mu, &l)
        .ok_or_else(|| Error::Membership("unipotent factor is not in the display group".into()))?;
    let p = membership_display_group(desc, pr, mu, &a)
        .ok_or_else(|| Error::Membership("parabolic factor is not in the display group".into()))?;
    Ok((u, p))
}

/// `p in P_mu(A)`: block upper triangular.
pub fn in_parabolic(mu: &Cocharacter, p: &Mat) -> bool {
    let w = mu.weights();
    (0..p.rows).all(|i| (0..p.cols).all(|j| w[i] >= w[j] || p.at(i, j).is_zero()))
}

/// `u in U^-_mu(A)`: block lower unipotent.
pub fn in_unipotent(mu: &Cocharacter, u: &Mat) -> bool {
    let w = mu.weights();
    (0..u.rows).all(|i| {
        (0..u.cols).all(
            |j| {
                if i == j {
                    u.at(i, j).eq_cert(&u.ctx().one())
                } else {
                    w[i] < w[j] || u.at(i, j).is_zero()
                }
            },
        )
    })
}

fn random_invertible(pr: &PrismCtx, r: usize, rng: &mut impl Rng) -> Mat {
    let ctx = pr.ring();
    loop {
        let m = Mat::from_fn(r, r, |_, _| random_elt(ctx, rng));
        if m.det().is_unit() {
            return m;
        }
    }
}

/// A random `u in U^-_mu` with the required divisibility.
pub fn random_unipotent(pr: &PrismCtx, mu: &Cocharacter, rng: &mut impl Rng) -> Mat {
    let ctx = pr.ring().clone();
    let w = mu.weights();
    let n = mu.rank();
    Mat::from_fn(n, n, |i, j| {
        if i == j {
            ctx.one()
        } else if w[i] < w[j] {
            &random_elt(&ctx, rng) * &pr.e().pow((w[j] - w[i]) as u64)
        } else {
            ctx.zero()
        }
    })
}

/// A random `p in P_mu(A)`.
pub fn random_parabolic(pr: &PrismCtx, mu: &Cocharacter, rng: &mut impl Rng) -> Mat {
    let ctx = pr.ring().clone();
    let n = mu.rank();
    let w = mu.weights();
    let bl = blocks(mu);
    let diag: Vec<Mat> = bl.iter().map(|&(s, e)| random_invertible(pr, e - s, rng)).collect();
    let mut p = Mat::zeros(&ctx, n, n);
    for i in 0..n {
        for j in 0..n {
            if w[i] > w[j] {
                p.set(i, j, random_elt(&ctx, rng));
            }
        }
    }
    for (b, &(s, e)) in bl.iter().enumerate() {
        for i in s..e {
            for j in s..e {
                p.set(i, j, diag[b].at(i - s, j - s).clone());
            }
        }
    }
    p
}

/// A random element of `G_mu(A, (E))` for `GL_n`.
pub fn random_member(pr: &PrismCtx, mu: &Cocharacter, rng: &mut impl Rng) -> Mat {
    random_unipotent(pr, mu, rng).mul(&random_parabolic(pr, mu, rng))
}

/// A random `g in GL_n(A)`, a member or not.
pub fn random_gl(pr: &PrismCtx, n: usize, rng: &mut impl Rng) -> Mat {
    loop {
        let mut m = random_invertible(pr, n, rng);
        // Bias the lower triangle toward multiples of E so that both
        // outcomes of the membership test are common.
        for i in 0..n {
            for j in 0..i {
                if rng.gen_bool(0.5) {
                    let v = m.at(i, j) * pr.e();
                    m.set(i, j, v);
                }
            }
        }
        if m.det().is_unit() {
            return m;
        }
    }
}

/// Graded coordinates `g_ij = E^{w_ij} b_ij` of a display group element.
#[derive(Clone, Debug)]
pub struct ReesWitness {
    pub entries: Vec<ReesEntry>,
    pub n: usize,
}

#[derive(Clone, Debug)]
pub struct ReesEntry {
    pub i: usize,
    pub j: usize,
    pub weight: u32,
    pub b: Elt,
}

/// Serializable `{(i, j) -> (b_ij, w_ij)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReesRecord {
    pub i: usize,
    pub j: usize,
    pub weight: u32,
    pub b: String,
}

impl ReesWitness {
    pub fn records(&self) -> Vec<ReesRecord> {
        self.entries.iter().map(|e| ReesRecord { i: e.i, j: e.j, weight: e.weight, b: e.b.to_string() }).collect()
    }

    /// Evaluation at `tau = 1`: `g_ij = E^{w_ij} b_ij`.
    pub fn evaluate(&self, pr: &PrismCtx) -> Mat {
        let mut m = Mat::zeros(pr.ring(), self.n, self.n);
        for e in &self.entries {
            m.set(e.i, e.j, &e.b * &pr.e().pow(e.weight as u64));
        }
        m
    }
}

/// The graded-coordinate record of a member.
pub fn rees_witness(pr: &PrismCtx, mu: &Cocharacter, g: &DisplayGroupElt) -> Result<ReesWitness> {
    let w = mu.weights();
    let n = g.g.rows;
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let weight = (w[j] - w[i]).max(0) as u32;
            let b = if weight == 0 { g.g.at(i, j).clone() } else { pr.divide(g.g.at(i, j), weight)? };
            entries.push(ReesEntry { i, j, weight, b });
        }
    }
    Ok(ReesWitness { entries, n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bkmod::tests::prism;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn membership_examples() {
        let pr = prism(2, 3, 4, "2 + t");
        let ctx = pr.ring().clone();
        let gl2 = GroupDescriptor::Gl(2);
        let mu = Cocharacter::new(vec![1, 0]).unwrap();
        let e = pr.e().clone();
        let g = Mat::from_rows(vec![vec![ctx.one(), ctx.zero()], vec![e.clone(), ctx.one()]]).unwrap();
        let m = membership_display_group(&gl2, &pr, &mu, &g).unwrap();
        assert!(m.conj.at(1, 0).eq_cert(&ctx.one()));
        assert!(stabilizes_filtration(&pr, &mu, &g));
        let h = Mat::from_rows(vec![vec![ctx.one(), ctx.zero()], vec![ctx.one(), ctx.one()]]).unwrap();
        assert!(membership_display_group(&gl2, &pr, &mu, &h).is_none());
        assert!(!stabilizes_filtration(&pr, &mu, &h));
        let id = Mat::identity(&ctx, 2);
        assert!(membership_display_group(&gl2, &pr, &mu, &id).is_some());
    }

    #[test]
    fn decomposition_recomposes() {
        let pr = prism(2, 3, 4, "2 + t");
        let mu = Cocharacter::new(vec![1, 1, 0]).unwrap();
        let gl3 = GroupDescriptor::Gl(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let u0 = random_unipotent(&pr, &mu, &mut rng);
            let p0 = random_parabolic(&pr, &mu, &mut rng);
            let g = membership_display_group(&gl3, &pr, &mu, &u0.mul(&p0)).unwrap();
            let (u, p) = decompose(&gl3, &pr, &mu, &g).unwrap();
            assert!(u.g.eq_cert(&u0) && p.g.eq_cert(&p0));
            assert!(in_unipotent(&mu, &u.g) && in_parabolic(&mu, &p.g));
        }
    }

    #[test]
    fn one_boundedness() {
        let c = |w: Vec<i64>| Cocharacter::new(w).unwrap();
        assert!(one_bounded(&GroupDescriptor::Gl(2), &c(vec![1, 0])));
        assert!(!one_bounded(&GroupDescriptor::Gl(2), &c(vec![2, 0])));
        assert!(one_bounded(&GroupDescriptor::Orth(4), &c(vec![1, 0, 0, -1])));
        assert!(!one_bounded(&GroupDescriptor::Gl(4), &c(vec![1, 0, 0, -1])));
        assert!(!one_bounded(&GroupDescriptor::Orth(4), &c(vec![1, 1, 0, 0])));
    }

    #[test]
    fn rees_round_trip() {
        let pr = prism(2, 3, 4, "2 + t");
        let ctx = pr.ring().clone();
        let mu = Cocharacter::new(vec![1, 0]).unwrap();
        let a = ctx.var(0);
        let g = Mat::from_rows(vec![vec![ctx.one(), ctx.zero()], vec![&a * pr.e(), ctx.one()]]).unwrap();
        let m = membership_display_group(&GroupDescriptor::Gl(2), &pr, &mu, &g).unwrap();
        let r = rees_witness(&pr, &mu, &m).unwrap();
        assert!(r.entries[2].b.eq_cert(&a) && r.entries[2].weight == 1);
        assert!(r.evaluate(&pr).eq_cert(&g));
    }
}
