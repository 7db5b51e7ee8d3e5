//! Over a ramified coefficient ring, `delta` is certified to one `pi`-digit
//! less than its input. Checked against the same computation at a higher
//! precision, reduced back.

use prismdisp::rings::{format_elt, parse_elt, CoeffRing, DeltaCtx};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_poly(rng: &mut ChaCha8Rng) -> String {
    let mut out = String::from("0");
    for mono in ["1", "x", "t", "x*t", "t^2", "x*t^3"] {
        let c: i64 = rng.gen_range(-9..=9);
        out.push_str(&format!(" {} {}*{mono}", if c < 0 { '-' } else { '+' }, c.abs()));
    }
    out
}

#[test]
fn delta_loses_one_pi_digit_over_eisenstein_rings() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (p, f) in [(2u64, [-2i64, 0, 1]), (3, [-3, 0, 1])] {
        let lo = DeltaCtx::series(CoeffRing::eisenstein(p, &f, 4).unwrap(), 1, 5).unwrap();
        let hi = DeltaCtx::series(CoeffRing::eisenstein(p, &f, 8).unwrap(), 1, 5).unwrap();
        for _ in 0..100 {
            let s = random_poly(&mut rng);
            let d_lo = parse_elt(&lo, &s).unwrap().delta().unwrap();
            let d_hi = parse_elt(&hi, &s).unwrap().delta().unwrap();
            assert_eq!(d_lo.prec().n, 3, "{s}");
            let reduced = parse_elt(&lo, &format_elt(&d_hi)).unwrap();
            assert!(d_lo.eq_cert(&reduced), "{s}: {d_lo} vs {reduced}");
        }
    }
}
