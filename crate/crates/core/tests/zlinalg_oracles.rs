//! Brute-force oracles for the Howell engine at tiny sizes.

use std::collections::BTreeSet;

use prismdisp::zlinalg::{howell_form, ideal_reduce, solve_mod, Howell, Modulus, ZModMatrix};
use proptest::prelude::*;

/// Every vector in the row span, by enumerating all coefficient tuples.
fn span(md: Modulus, cols: usize, rows: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let q = md.value();
    let mut out = BTreeSet::new();
    let total = q.pow(rows.len() as u32);
    for mut code in 0..total {
        let mut v = vec![0; cols];
        for r in rows {
            let c = code % q;
            code /= q;
            for (x, &y) in v.iter_mut().zip(r) {
                *x = (*x + c * y) % q;
            }
        }
        out.insert(v);
    }
    out
}

fn moduli() -> impl Strategy<Value = Modulus> {
    prop_oneof![
        Just(Modulus::new(2, 2).unwrap()),
        Just(Modulus::new(2, 3).unwrap()),
        Just(Modulus::new(2, 4).unwrap()),
        Just(Modulus::new(3, 2).unwrap()),
    ]
}

fn matrix() -> impl Strategy<Value = (Modulus, usize, Vec<Vec<u64>>)> {
    (moduli(), 1usize..=3, 1usize..=3).prop_flat_map(|(md, rows, cols)| {
        let q = md.value();
        (Just(md), Just(cols), prop::collection::vec(prop::collection::vec(0..q, cols), rows))
    })
}

#[test]
fn unit_pivot_example() {
    let md = Modulus::new(2, 3).unwrap();
    let m = ZModMatrix::from_i64_rows(md, &[vec![3, 1], vec![1, 3]]).unwrap();
    let (h, t) = howell_form(&m);
    assert_eq!(h.get(0, 0), 1);
    assert_eq!(t.mul(&m).unwrap(), h);
    assert_eq!(span(md, 2, &h.to_rows()), span(md, 2, &m.to_rows()));
}

#[test]
fn solve_by_enumeration() {
    let md = Modulus::new(2, 3).unwrap();
    let m = ZModMatrix::from_i64_rows(md, &[vec![2]]).unwrap();
    let sols: Vec<u64> = (0..8).filter(|x| (2 * x) % 8 == 4).collect();
    let s = solve_mod(&m, &[4]).unwrap().unwrap();
    assert_eq!(s.x0, vec![2]);
    let ker = span(md, 1, &s.kernel);
    let found: BTreeSet<u64> = ker.iter().map(|k| (k[0] + s.x0[0]) % 8).collect();
    assert_eq!(found, sols.into_iter().collect());
}

#[test]
fn reduce_by_multiples() {
    let md = Modulus::new(2, 2).unwrap();
    let multiples = span(md, 2, &[vec![2, 1]]);
    assert!(multiples.contains(&vec![0, 2]));
    assert!(ideal_reduce(md, &[vec![2, 1]], &[0, 2]).unwrap().member);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn howell_preserves_span((md, cols, rows) in matrix()) {
        let m = ZModMatrix::from_rows(md, cols, &rows).unwrap();
        let (h, t) = howell_form(&m);
        prop_assert_eq!(t.mul(&m).unwrap(), h.clone());
        prop_assert_eq!(span(md, cols, &h.to_rows()), span(md, cols, &rows));
    }

    #[test]
    fn howell_is_idempotent((md, cols, rows) in matrix()) {
        let m = ZModMatrix::from_rows(md, cols, &rows).unwrap();
        let (h, _) = howell_form(&m);
        let (h2, _) = howell_form(&h);
        prop_assert_eq!(h2, h);
    }

    #[test]
    fn howell_is_canonical((md, cols, rows) in matrix(), mix in prop::collection::vec(0u64..64, 9)) {
        // Any set of generators of the same span must give the same form.
        let q = md.value();
        let mut other: Vec<Vec<u64>> = rows
            .iter()
            .enumerate()
            .map(|(i, _)| {
                let mut v = vec![0; cols];
                for (j, r) in rows.iter().enumerate() {
                    let c = if i == j { 1 } else { mix[3 * i + j] % q };
                    for (x, &y) in v.iter_mut().zip(r) {
                        *x = (*x + c * y) % q;
                    }
                }
                v
            })
            .collect();
        // The unitriangular mixing may lose the span, so restore it explicitly.
        other.extend(rows.iter().cloned());
        other.reverse();
        let a = Howell::new(md, cols, rows.clone(), false);
        let b = Howell::new(md, cols, other, false);
        prop_assert_eq!(a.rows(), b.rows());
        prop_assert_eq!(a.log_size(), {
            let s = span(md, cols, &rows).len();
            (0u32..).find(|k| (md.p() as usize).pow(*k) == s).unwrap()
        });
    }

    #[test]
    fn membership_matches_span((md, cols, rows) in matrix(), v in prop::collection::vec(0u64..16, 3)) {
        let q = md.value();
        let v: Vec<u64> = v.into_iter().take(cols).map(|x| x % q).collect();
        prop_assume!(v.len() == cols);
        let red = ideal_reduce(md, &rows, &v).unwrap();
        let all = span(md, cols, &rows);
        prop_assert_eq!(red.member, all.contains(&v));
        if let Some(w) = red.witness {
            let m = ZModMatrix::from_rows(md, cols, &rows).unwrap();
            prop_assert_eq!(m.vec_mul(&w).unwrap(), v.clone());
        }
        // Normal forms agree on cosets.
        let shifted: Vec<u64> = v.iter().zip(all.iter().next_back().unwrap()).map(|(a, b)| (a + b) % q).collect();
        prop_assert_eq!(ideal_reduce(md, &rows, &shifted).unwrap().normal_form, red.normal_form);
    }

    #[test]
    fn solve_matches_search((md, cols, rows) in matrix(), b in prop::collection::vec(0u64..16, 3)) {
        let q = md.value();
        let b: Vec<u64> = b.into_iter().take(cols).map(|x| x % q).collect();
        prop_assume!(b.len() == cols);
        let m = ZModMatrix::from_rows(md, cols, &rows).unwrap();
        let n = rows.len();
        let mut sols = BTreeSet::new();
        for mut code in 0..q.pow(n as u32) {
            let x: Vec<u64> = (0..n).map(|_| { let c = code % q; code /= q; c }).collect();
            if m.vec_mul(&x).unwrap() == b {
                sols.insert(x);
            }
        }
        match solve_mod(&m, &b).unwrap() {
            None => prop_assert!(sols.is_empty()),
            Some(s) => {
                let ker = span(md, n, &s.kernel);
                let found: BTreeSet<Vec<u64>> = ker
                    .iter()
                    .map(|k| k.iter().zip(&s.x0).map(|(a, c)| (a + c) % q).collect())
                    .collect();
                prop_assert_eq!(found, sols);
            }
        }
    }
}
