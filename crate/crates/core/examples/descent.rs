//! Solves for the descent isomorphism of a banal GL2 display over the
//! coproduct prism and checks its uniqueness on the filtration pieces.

use prismdisp::bkmod::Cocharacter;
use prismdisp::descent::{check_uniqueness, descend};
use prismdisp::displays::{BanalDisplay, GroupDescriptor};
use prismdisp::prisms::make_bk_prism;
use prismdisp::rings::{parse_elt, CoeffRing, DeltaCtx, Mat};

fn main() -> prismdisp::Result<()> {
    let ctx = DeltaCtx::series(CoeffRing::zp(2, 3)?, 1, 4)?;
    let pr = make_bk_prism(&ctx, parse_elt(&ctx, "2 + t")?)?;
    let x = Mat::from_rows(vec![
        vec![parse_elt(&ctx, "1 + t")?, parse_elt(&ctx, "t")?],
        vec![parse_elt(&ctx, "2 + t^2")?, parse_elt(&ctx, "1")?],
    ])?;
    let dsp = BanalDisplay::new(&pr, GroupDescriptor::Gl(2), Cocharacter::new(vec![1, 0])?, x)?;
    let (prob, d) = descend(&dsp, 2, 3, 400_000, 200)?;
    println!("solved in {} iterations", d.iterations);
    println!("m(eps) = 1: {}", d.fold_is_identity);
    println!("zero intertwining residual: {}", d.residual_zero);
    let u = check_uniqueness(&prob, &d)?;
    for p in &u.pieces {
        println!("  {p:?}");
    }
    println!("uniqueness: {:?}", u.status);
    Ok(())
}
