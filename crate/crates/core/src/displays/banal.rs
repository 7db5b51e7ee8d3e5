//! Banal `G`-`mu`-displays `X in G(A)` up to `X . g = g^{-1} X sigma(g)`,
//! and their Breuil-Kisin modules and `phi`-torsors.

use serde::Serialize;

use crate::bkmod::{make_banal_bk, BkModule, Cocharacter, StandardForm};
use crate::displays::{membership_display_group, DisplayGroupElt, GroupDescriptor};
use crate::error::{Error, Result};
use crate::prisms::PrismCtx;
use crate::rings::{Mat, Prec};

/// A representative `X in G(A)` relative to the generator `E`.
#[derive(Clone, Debug)]
pub struct BanalDisplay {
    pub prism: PrismCtx,
    pub group: GroupDescriptor,
    pub mu: Cocharacter,
    pub x: Mat,
}

/// Serializable `{group, mu, X}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisplayRecord {
    pub group: GroupDescriptor,
    pub mu: Cocharacter,
    pub x: Vec<Vec<String>>,
    pub precision: Prec,
}

impl BanalDisplay {
    pub fn new(prism: &PrismCtx, group: GroupDescriptor, mu: Cocharacter, x: Mat) -> Result<Self> {
        group.check_mu(&mu)?;
        if !group.contains(&x) {
            return Err(Error::Membership(format!("X is not in {group}(A)")));
        }
        Ok(BanalDisplay { prism: prism.clone(), group, mu, x })
    }

    pub fn record(&self) -> DisplayRecord {
        DisplayRecord { group: self.group, mu: self.mu.clone(), x: self.x.to_strings(), precision: self.x.prec() }
    }
}

/// `sigma_{mu,E}(g) = phi(mu(E) g mu(E)^{-1})`.
pub fn sigma_mu_d(g: &DisplayGroupElt) -> Result<Mat> {
    g.conj.phi()
}

/// `X . g = g^{-1} X sigma(g)`.
pub fn act(dsp: &BanalDisplay, g: &DisplayGroupElt) -> Result<BanalDisplay> {
    let x = g.g.inv()?.mul(&dsp.x).mul(&sigma_mu_d(g)?);
    Ok(BanalDisplay { x, ..dsp.clone() })
}

/// The representative relative to `E' = E / u`: `X phi(mu(u))`.
pub fn change_generator(dsp: &BanalDisplay, u: &crate::rings::Elt) -> Result<Mat> {
    if !u.is_unit() {
        return Err(Error::NotInvertible("generator change needs a unit".into()));
    }
    let c = dsp.mu.shift() as u64;
    let mu_u = dsp.mu.shifted_diag(u).scale(&u.inv()?.pow(c));
    Ok(dsp.x.mul(&mu_u.phi()?))
}

/// `g` is an isomorphism `dsp1 -> dsp2`: `g^{-1} X_2 sigma(g) = X_1`.
pub fn verify_iso(dsp1: &BanalDisplay, dsp2: &BanalDisplay, g: &DisplayGroupElt) -> Result<bool> {
    if dsp1.mu != dsp2.mu || dsp1.x.rows != g.g.rows {
        return Ok(false);
    }
    Ok(act(dsp2, g)?.x.eq_cert(&dsp1.x))
}

/// The Breuil-Kisin module `(A^n, mu(E) X)`.
pub fn display_to_bk(dsp: &BanalDisplay) -> Result<BkModule> {
    make_banal_bk(&dsp.prism, &dsp.mu, &dsp.x)
}

/// `X_phi = X phi(mu(E)) = num / phi(E)^denom`.
#[derive(Clone, Debug)]
pub struct PhiTorsor {
    pub num: Mat,
    pub denom: u32,
}

pub fn phi_torsor(dsp: &BanalDisplay) -> Result<PhiTorsor> {
    let num = dsp.x.mul(&dsp.mu.shifted_diag(dsp.prism.e()).phi()?);
    Ok(PhiTorsor { num, denom: dsp.mu.shift() })
}

/// The pullback `phi^*` of the Breuil-Kisin module agrees with the torsor
/// after the change of basis by `X`: `X^{-1} X_phi phi(X) = phi(mu(E) X)`.
pub fn phi_torsor_consistent(dsp: &BanalDisplay) -> Result<bool> {
    let t = phi_torsor(dsp)?;
    let m = display_to_bk(dsp)?;
    if m.denom_k() != t.denom {
        return Ok(false);
    }
    let lhs = dsp.x.inv()?.mul(&t.num).mul(&dsp.x.phi()?);
    Ok(lhs.eq_cert(&m.f_num().phi()?))
}

/// The Breuil-Kisin isomorphism `M_{X.g} -> M_X` induced by `g`.
pub fn bk_intertwiner(g: &DisplayGroupElt) -> &Mat {
    &g.conj
}

/// The display isomorphism `g = mu(E)^{-1} h_d mu(E)` from `X_0` to the
/// standard form `X` of `make_banal_bk(X_0)`, so that `X_0 . g = X`.
pub fn display_iso_from_standard_form(
    pr: &PrismCtx,
    group: GroupDescriptor,
    x0: &Mat,
    sf: &StandardForm,
) -> Result<DisplayGroupElt> {
    let w = sf.mu.weights();
    let n = x0.rows;
    let mut g = sf.h_d.clone();
    for i in 0..n {
        for j in 0..n {
            let d = w[j] - w[i];
            let v =
                if d >= 0 { sf.h_d.at(i, j) * &pr.e().pow(d as u64) } else { pr.divide(sf.h_d.at(i, j), (-d) as u32)? };
            g.set(i, j, v);
        }
    }
    let elt = membership_display_group(&group, pr, &sf.mu, &g)
        .ok_or_else(|| Error::Membership("standard-form isomorphism is not in the display group".into()))?;
    Ok(elt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bkmod::tests::prism;
    use crate::bkmod::to_standard_form;
    use crate::displays::random_member;
    use crate::rings::parse_elt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn action_example() {
        let pr = prism(2, 3, 4, "2 + t");
        let ctx = pr.ring().clone();
        let mu = Cocharacter::new(vec![1, 0]).unwrap();
        let gl2 = GroupDescriptor::Gl(2);
        let one = BanalDisplay::new(&pr, gl2, mu.clone(), Mat::identity(&ctx, 2)).unwrap();
        let g = Mat::from_rows(vec![vec![ctx.one(), ctx.zero()], vec![pr.e().clone(), ctx.one()]]).unwrap();
        let g = membership_display_group(&gl2, &pr, &mu, &g).unwrap();
        let s = sigma_mu_d(&g).unwrap();
        let expect = Mat::from_rows(vec![vec![ctx.one(), ctx.zero()], vec![ctx.one(), ctx.one()]]).unwrap();
        assert!(s.eq_cert(&expect));
        let xg = act(&one, &g).unwrap();
        assert!(xg.x.eq_cert(&g.g.inv().unwrap().mul(&expect)));
        assert!(verify_iso(&one, &xg, &membership_display_group(&gl2, &pr, &mu, &g.g.inv().unwrap()).unwrap()).unwrap());
        assert!(change_generator(&one, &ctx.one()).unwrap().is_identity());
        assert!(phi_torsor_consistent(&one).unwrap());
    }

    #[test]
    fn action_law_and_bk_functor() {
        let pr = prism(2, 3, 4, "2 + t");
        let ctx = pr.ring().clone();
        let mu = Cocharacter::new(vec![1, 0]).unwrap();
        let gl2 = GroupDescriptor::Gl(2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = Mat::from_rows(vec![vec![parse_elt(&ctx, "1 + t").unwrap(), ctx.var(0)], vec![ctx.int(2), ctx.one()]])
            .unwrap();
        let d = BanalDisplay::new(&pr, gl2, mu.clone(), x).unwrap();
        let g = membership_display_group(&gl2, &pr, &mu, &random_member(&pr, &mu, &mut rng)).unwrap();
        let h = membership_display_group(&gl2, &pr, &mu, &random_member(&pr, &mu, &mut rng)).unwrap();
        let gh = membership_display_group(&gl2, &pr, &mu, &g.g.mul(&h.g)).unwrap();
        let lhs = act(&act(&d, &g).unwrap(), &h).unwrap();
        let rhs = act(&d, &gh).unwrap();
        assert!(lhs.x.eq_cert(&rhs.x));
        let m = display_to_bk(&d).unwrap();
        let mg = display_to_bk(&act(&d, &g).unwrap()).unwrap();
        assert!(m.is_isomorphism_from(&mg, bk_intertwiner(&g)).unwrap());
        assert!(phi_torsor_consistent(&d).unwrap());
    }

    #[test]
    fn standard_form_is_isomorphic() {
        let pr = prism(3, 4, 6, "3 + t");
        let ctx = pr.ring().clone();
        let mu = Cocharacter::new(vec![1, 0]).unwrap();
        let x0 = Mat::from_rows(vec![
            vec![parse_elt(&ctx, "1 + t").unwrap(), parse_elt(&ctx, "2 + t^3").unwrap()],
            vec![ctx.var(0), parse_elt(&ctx, "1 - t").unwrap()],
        ])
        .unwrap();
        let m = make_banal_bk(&pr, &mu, &x0).unwrap();
        let sf = to_standard_form(&m).unwrap();
        let g = display_iso_from_standard_form(&pr, GroupDescriptor::Gl(2), &x0, &sf).unwrap();
        let d0 = BanalDisplay::new(&pr, GroupDescriptor::Gl(2), mu.clone(), x0).unwrap();
        let d = BanalDisplay::new(&pr, GroupDescriptor::Gl(2), mu, sf.x.clone()).unwrap();
        assert!(verify_iso(&d, &d0, &g).unwrap());
    }
}
