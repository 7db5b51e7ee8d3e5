//! Brute-force sizes of the congruence filtration on the display group of
//! GL2 over Z/4[t]/(t^2), compared with the closed formulas.

use prismdisp::bkmod::Cocharacter;
use prismdisp::displays::{graded_quotients, GroupDescriptor};
use prismdisp::prisms::make_bk_prism;
use prismdisp::rings::{parse_elt, CoeffRing, DeltaCtx};

fn main() -> prismdisp::Result<()> {
    let ctx = DeltaCtx::series(CoeffRing::zp(2, 2)?, 1, 2)?;
    let pr = make_bk_prism(&ctx, parse_elt(&ctx, "2 + t")?)?;
    let r = graded_quotients(&GroupDescriptor::Gl(2), &Cocharacter::new(vec![1, 0])?, &pr, 1, 1 << 24)?;
    println!("|G_mu| = {}^{}", r.p, r.total_log);
    for q in &r.pieces {
        println!("m = {}: observed {}^{}, formula {}^{}", q.m, r.p, q.observed_log, r.p, q.expected_log);
    }
    println!("all pieces match: {}", r.all_match());
    Ok(())
}
