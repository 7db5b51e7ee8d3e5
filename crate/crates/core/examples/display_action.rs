//! The display group of GL2 with mu = (1,0): membership, the twisted
//! conjugation action, its intertwiner and the unipotent-parabolic split.

use prismdisp::bkmod::Cocharacter;
use prismdisp::displays::{
    act, bk_intertwiner, decompose, display_to_bk, membership_display_group, BanalDisplay, GroupDescriptor,
};
use prismdisp::prisms::make_bk_prism;
use prismdisp::rings::{parse_elt, CoeffRing, DeltaCtx, Mat};

fn main() -> prismdisp::Result<()> {
    let ctx = DeltaCtx::series(CoeffRing::zp(2, 3)?, 1, 4)?;
    let pr = make_bk_prism(&ctx, parse_elt(&ctx, "2 + t")?)?;
    let mu = Cocharacter::new(vec![1, 0])?;
    let gl2 = GroupDescriptor::Gl(2);
    let m = |rows: [[&str; 2]; 2]| -> prismdisp::Result<Mat> {
        Mat::from_rows(
            rows.iter().map(|r| r.iter().map(|s| parse_elt(&ctx, s)).collect()).collect::<prismdisp::Result<_>>()?,
        )
    };

    let x = m([["1 + t", "t"], ["2", "1"]])?;
    let dsp = BanalDisplay::new(&pr, gl2, mu.clone(), x)?;
    let outside = m([["1", "0"], ["1", "1"]])?;
    println!("[[1,0],[1,1]] member: {}", membership_display_group(&gl2, &pr, &mu, &outside).is_some());

    let g = membership_display_group(&gl2, &pr, &mu, &m([["1", "t"], ["2 + t", "1 + t"]])?).expect("member");
    println!("sigma(g) = {:?}", g.conj.to_strings());
    let moved = act(&dsp, &g)?;
    println!("X.g = {:?}", moved.x.to_strings());
    let h = bk_intertwiner(&g);
    let ok = display_to_bk(&dsp)?.is_isomorphism_from(&display_to_bk(&moved)?, h)?;
    println!("intertwiner is a module isomorphism: {ok}");

    let (u, p) = decompose(&gl2, &pr, &mu, &g)?;
    println!("g = u p with u = {:?}, p = {:?}", u.g.to_strings(), p.g.to_strings());
    println!("recomposes: {}", u.g.mul(&p.g).eq_cert(&g.g));
    Ok(())
}
