//! Builds the prism (Z/8[[t]]/t^4, (2 + t)) and tests elements for being
//! distinguished by both criteria.

use prismdisp::prisms::{is_distinguished, make_bk_prism};
use prismdisp::rings::{parse_elt, CoeffRing, DeltaCtx};

fn main() -> prismdisp::Result<()> {
    let ctx = DeltaCtx::series(CoeffRing::zp(2, 3)?, 1, 4)?;
    let pr = make_bk_prism(&ctx, parse_elt(&ctx, "2 + t")?)?;
    println!("orientation E = {}", pr.e());
    for s in ["2 + t", "2", "t", "(2 + t)^2", "2 + t + t^3", "6 + t"] {
        let d = parse_elt(&ctx, s)?;
        let r = is_distinguished(&d)?;
        println!("{s:>12}: delta unit {:<5}  pi in (d, phi(d)) {}", r.flag, r.equiv_check);
    }
    Ok(())
}
