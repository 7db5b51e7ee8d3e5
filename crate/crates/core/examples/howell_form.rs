//! Howell normal form over Z/8 and span membership with a witness.

use prismdisp::zlinalg::{howell_form, Howell, Modulus, ZModMatrix};

fn main() -> prismdisp::Result<()> {
    let md = Modulus::new(2, 3)?;
    let m = ZModMatrix::from_i64_rows(md, &[vec![2, 4, 6], vec![4, 0, 2], vec![1, 3, 0]])?;
    let (h, t) = howell_form(&m);
    println!("Howell form over Z/8:");
    for r in h.to_rows() {
        println!("  {r:?}");
    }
    println!("transform rows: {}", t.to_rows().len());

    let span = Howell::new(md, 3, m.to_rows(), true);
    println!("log_2 of the span size: {}", span.log_size());
    let v = vec![3, 7, 6];
    match span.witness(&v) {
        Some(c) => println!("{v:?} = combination {c:?} of the input rows"),
        None => println!("{v:?} is not in the span"),
    }
    println!("[0, 0, 1] in span: {}", span.contains(&[0, 0, 1]));
    Ok(())
}
