//! Frobenius lift, delta and the Witt-2 section on a truncated series ring.

use prismdisp::rings::{axiom_suite, parse_elt, witt2_section, CoeffRing, DeltaCtx};

fn main() -> prismdisp::Result<()> {
    let ctx = DeltaCtx::series(CoeffRing::zp(2, 4)?, 1, 6)?;
    let x = parse_elt(&ctx, "1 + 3*t + t^2")?;
    println!("x        = {x}");
    println!("phi(x)   = {}", x.phi()?);
    println!("delta(x) = {}", x.delta()?);
    println!("precision of delta(x): {:?}", x.delta()?.prec());

    let s = witt2_section(&x)?;
    println!("epsilon(s(x)) = x: {}", s.epsilon().eq_cert(&x));

    let rep = axiom_suite(&ctx, 50, 7);
    for law in &rep.laws {
        println!("{:<24} {}/{}", law.law, law.passed, law.trials);
    }
    println!("all laws hold: {}", rep.all_pass());
    Ok(())
}
