//! Builds the depth-2 coproduct prism of (Z/8[[t]]/t^4, (2 + t)) and checks
//! the kernel lemmas on every generator.

use prismdisp::prisms::{build_coproduct, make_bk_prism, verify_kernel_lemmas};
use prismdisp::rings::{parse_elt, CoeffRing, DeltaCtx};

fn main() -> prismdisp::Result<()> {
    let ctx = DeltaCtx::series(CoeffRing::zp(2, 3)?, 1, 4)?;
    let pr = make_bk_prism(&ctx, parse_elt(&ctx, "2 + t")?)?;
    let env = build_coproduct(&pr, 2, 400_000)?;
    for c in verify_kernel_lemmas(&env)? {
        println!("{:<28} {:<16} {:?}", c.lemma, c.generator, c.status);
    }
    Ok(())
}
