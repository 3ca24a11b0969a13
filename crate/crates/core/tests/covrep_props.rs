mod common;

use covrep_core::covrep::CovariantRep;
use covrep_core::linalg::{c, eye, hstack, min_eigenvalue, op_norm, vstack, Mat};
use covrep_core::wold::wandering_subspace;
use proptest::prelude::*;

/// All products `T(e_{i_1}) ⋯ T(e_{i_n})` in lexicographic order, side by side.
fn direct_products(rep: &CovariantRep, n: usize) -> Mat {
    let mut cols: Vec<Mat> = vec![eye(rep.hilbert_dim())];
    for _ in 0..n {
        let mut next = Vec::new();
        for t in rep.t() {
            for p in &cols {
                next.push(t * p);
            }
        }
        cols = next;
    }
    let refs: Vec<&Mat> = cols.iter().collect();
    hstack(&refs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tilde_round_trips(mut p in common::pool()) {
        let rep = common::left_invertible(&mut p);
        let back = CovariantRep::from_tilde(rep.sigma().clone(), rep.correspondence().clone(), rep.tilde().clone()).unwrap();
        for (a, b) in rep.t().iter().zip(back.t()) {
            prop_assert!(op_norm(&(a - b)) < 1e-10);
        }
    }

    #[test]
    fn tilde_powers_match_direct_products(mut p in common::pool()) {
        let rep = common::left_invertible(&mut p);
        for n in 1..=3 {
            let push = rep.with_spaces(|s| s.nested_push(&vec![0; n])).unwrap();
            let lhs = rep.tilde_power(n).unwrap() * push;
            let rhs = direct_products(&rep, n);
            prop_assert!(op_norm(&(lhs - rhs)) < 1e-9, "n = {}", n);
        }
    }

    #[test]
    fn shimorin_forms_agree(mut p in common::pool()) {
        let rep = common::left_invertible(&mut p);
        let s = rep.check_shimorin().unwrap();
        let margin = s.min_eigenvalue.unwrap_or(1.0).abs();
        prop_assume!(margin > 1e-6);
        prop_assert_eq!(s.pass, rep.check_eq13().unwrap().pass);
        prop_assert_eq!(s.pass, rep.check_eq12().unwrap().pass);
    }

    #[test]
    fn cauchy_dual_is_an_involution(mut p in common::pool()) {
        let rep = common::left_invertible(&mut p);
        let dual = rep.cauchy_dual().unwrap();
        let back = dual.cauchy_dual().unwrap();
        prop_assert!(op_norm(&(back.tilde() - rep.tilde())) < 1e-8 * (1.0 + op_norm(rep.tilde())));
        prop_assert!(wandering_subspace(&rep).equals(&wandering_subspace(&dual)).unwrap());
    }

    #[test]
    fn shimorin_implies_dual_concave(mut p in common::pool()) {
        let rep = common::left_invertible(&mut p);
        if rep.check_shimorin().unwrap().pass {
            prop_assert!(rep.cauchy_dual().unwrap().check_concave().unwrap().pass);
        }
    }

    #[test]
    fn scalar_shimorin_matches_block_oracle(mut p in common::pool()) {
        let n = 3;
        let q = p.cmat(n, n, 1.0).qr().q();
        let eps = if p.next() > 0.0 { 0.0 } else { p.range(0.0, 0.05) };
        let a = &q + p.cmat(n, n, eps);
        let rep = CovariantRep::scalar(a.clone()).unwrap();
        let check = rep.check_shimorin().unwrap();
        let margin = check.min_eigenvalue.unwrap().abs();
        prop_assume!(!(1e-8..1e-6).contains(&margin));
        let ad = a.adjoint();
        let g = &ad * &a;
        let top = hstack(&[&(eye(n) * c(2.0) - &g), &(-&ad)]);
        let bottom = hstack(&[&(-&a), &(&g * c(2.0) - eye(n))]);
        let oracle = min_eigenvalue(&vstack(&[&top, &bottom])) >= -1e-9;
        prop_assert_eq!(check.pass, oracle);
        if check.pass {
            for _ in 0..8 {
                let x = p.cmat(n, 1, 1.0);
                let y = p.cmat(n, 1, 1.0);
                let lhs = (&a * &x + &y).norm_squared();
                let rhs = 2.0 * (x.norm_squared() + (&a * &y).norm_squared());
                prop_assert!(lhs <= rhs * (1.0 + 1e-9));
            }
        }
    }
}

#[test]
fn concave_path_with_short_tower_is_not_expansive() {
    use covrep_core::examples::{graph_block_rep, DirectedGraph};
    use covrep_core::linalg::from_real;
    let g = DirectedGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
    let blocks = [from_real(1, 1, &[1.0]), from_real(1, 1, &[0.5])];
    let rep = graph_block_rep(&g, &[1, 1, 1], &blocks).unwrap();
    let conc = rep.check_concave().unwrap();
    assert!(conc.pass && !conc.vacuous);
    assert_eq!(rep.power_dim(3).unwrap(), 0);
    let exp = rep.check_expansive();
    assert!(!exp.pass);
    assert!((exp.min_eigenvalue.unwrap() + 0.75).abs() < 1e-12);
}
