//! Standard form of a banal module with the display isomorphism back to its
//! input, and the window round trip of a minuscule module.

use prismdisp::bkmod::{make_banal_bk, minuscule_of, to_standard_form, window_of, Cocharacter};
use prismdisp::displays::{display_iso_from_standard_form, random_gl, verify_iso, BanalDisplay, GroupDescriptor};
use prismdisp::prisms::make_bk_prism;
use prismdisp::rings::{parse_elt, CoeffRing, DeltaCtx};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> prismdisp::Result<()> {
    let ctx = DeltaCtx::series(CoeffRing::zp(3, 4)?, 1, 6)?;
    let pr = make_bk_prism(&ctx, parse_elt(&ctx, "3 + t")?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mu = Cocharacter::new(vec![1, 1, 0])?;
    let gl3 = GroupDescriptor::Gl(3);

    let x0 = random_gl(&pr, 3, &mut rng);
    let sf = to_standard_form(&make_banal_bk(&pr, &mu, &x0)?)?;
    println!("recovered type {}", sf.mu);
    println!("standard X = {:?}", sf.x.to_strings());
    let g = display_iso_from_standard_form(&pr, gl3, &x0, &sf)?;
    let d0 = BanalDisplay::new(&pr, gl3, mu.clone(), x0)?;
    let d = BanalDisplay::new(&pr, gl3, sf.mu.clone(), sf.x.clone())?;
    println!("isomorphism g = {:?}", g.g.to_strings());
    println!("zero residual: {}", verify_iso(&d, &d0, &g)?);

    let m = make_banal_bk(&pr, &mu, &random_gl(&pr, 3, &mut rng))?;
    let w = window_of(&m)?;
    println!("window valid: {}", w.validate().is_ok());
    println!("round trip is the identity: {}", minuscule_of(&w)?.f_num().eq_cert(m.f_num()));
    Ok(())
}
