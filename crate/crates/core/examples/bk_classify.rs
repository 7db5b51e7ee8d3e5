//! Hodge filtration and classification of two Breuil-Kisin modules: a banal
//! one of type (1,0) and one whose graded pieces are not free.

use prismdisp::bkmod::{hodge_and_classify, make_banal_bk, BkModule, Cocharacter};
use prismdisp::prisms::make_bk_prism;
use prismdisp::rings::{parse_elt, CoeffRing, DeltaCtx, Mat};

fn main() -> prismdisp::Result<()> {
    let ctx = DeltaCtx::series(CoeffRing::zp(3, 4)?, 1, 6)?;
    let pr = make_bk_prism(&ctx, parse_elt(&ctx, "3 + t")?)?;
    let e = pr.e().clone();

    let x = Mat::from_rows(vec![
        vec![parse_elt(&ctx, "1 + t")?, parse_elt(&ctx, "t")?],
        vec![parse_elt(&ctx, "2")?, parse_elt(&ctx, "1")?],
    ])?;
    let banal = make_banal_bk(&pr, &Cocharacter::new(vec![1, 0])?, &x)?;
    let c = hodge_and_classify(&banal);
    println!("banal: displayed {:?}, minuscule {:?}, type {:?}", c.displayed, c.minuscule, c.mu.map(|m| m.to_string()));

    let f = Mat::from_rows(vec![vec![ctx.pi(), e.clone()], vec![e.clone(), e.pow(2)]])?;
    let c = hodge_and_classify(&BkModule::new(&pr, f, 0)?);
    println!("other: displayed {:?} at decision precision {}", c.displayed, c.decision_precision);
    for p in &c.pieces {
        println!("  P^{} / P^{}: log size {}, free {}", p.level, p.level + 1, p.log_size, p.free);
    }
    if let Some(w) = c.witness {
        println!("  witness at level {}: {:?}", w.level, w.vector);
    }
    Ok(())
}
