mod common;

use assoc_core::homology::{boundary_of_cell, ChainComplex, OrientedCell};
use assoc_core::nested::nested_sets;
use assoc_core::Diagram;
use proptest::prelude::*;

fn parity(v: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 { 1 } else { -1 }
}

proptest! {
    #[test]
    fn scrambled_orientation_sign(seed in any::<u64>(), which in 0usize..4) {
        let d = [Diagram::path(5), Diagram::cycle(5), Diagram::star(4), Diagram::complete(4)][which]
            .clone()
            .unwrap();
        let cells = nested_sets(&d);
        let h = &cells[(seed as usize) % cells.len()];
        let canon = OrientedCell::canonical(h);
        let mut rng = seed;
        let mut next = || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 33) as usize
        };
        let mut order = canon.order.clone();
        let mut expected = 1;
        for (_, alpha) in order.iter_mut() {
            for i in (1..alpha.len()).rev() {
                alpha.swap(i, next() % (i + 1));
            }
            expected *= parity(alpha);
        }
        if order.len() == 2 && next() % 2 == 1 {
            let odd = (order[0].1.len() - 1) * (order[1].1.len() - 1) % 2 == 1;
            order.swap(0, 1);
            if odd {
                expected = -expected;
            }
        }
        let cell = OrientedCell { nested: h.clone(), order };
        let (c, sign) = cell.canonicalize().unwrap();
        prop_assert_eq!(&c, &canon);
        prop_assert_eq!(sign, expected);
        let a = boundary_of_cell(&d, &cell).unwrap();
        let b = boundary_of_cell(&d, &canon).unwrap();
        for (k, v) in b.terms() {
            prop_assert_eq!(a.coefficient(k), i64::from(sign) * v);
        }
    }
}

#[test]
fn boundary_entries_are_units() {
    for d in common::classes_up_to(4) {
        let cx = ChainComplex::new(&d);
        for k in 1..=cx.top_dim() {
            let m = cx.boundary_matrix(k).unwrap();
            assert!(m.entries.iter().all(|e| e.2.abs() == 1));
            // Every k-cell has exactly the facets of its face as boundary.
            for c in 0..m.cols {
                let facets = m.entries.iter().filter(|e| e.1 == c).count();
                let h = &cx.cells(k)[c];
                let below = cx.cells(k - 1).iter().filter(|g| h.elements().iter().all(|b| g.contains(*b))).count();
                assert_eq!(facets, below);
            }
        }
    }
}
