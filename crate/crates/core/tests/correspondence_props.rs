mod common;

use covrep_core::algebra::MatrixBlocksAlgebra;
use covrep_core::correspondence::{internal_tensor, internal_tensor_dim, tensor_power};
use covrep_core::examples::graph_correspondence;
use covrep_core::linalg::{cx, eye, kron, op_norm, psd_test, Mat};
use covrep_core::Correspondence;
use proptest::prelude::*;

fn power_dim(e: &Correspondence, n: usize) -> usize {
    tensor_power(e, n).unwrap().map(|t| t.dim()).unwrap_or(0)
}

fn vector(p: &mut common::Pool, n: usize) -> Mat {
    p.cmat(n, 1, 1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tensor_power_dims_count_paths(mut p in common::pool()) {
        let g = common::dag(&mut p, 6);
        let e = graph_correspondence(&g).unwrap();
        for n in 0..5 {
            prop_assert_eq!(power_dim(&e, n), g.path_count(n), "n = {}", n);
        }
    }

    #[test]
    fn tensor_powers_are_functorial(mut p in common::pool()) {
        let g = common::dag(&mut p, 5);
        let e = graph_correspondence(&g).unwrap();
        for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let lhs = power_dim(&e, m + n);
            let rhs = match (tensor_power(&e, m).unwrap(), tensor_power(&e, n).unwrap()) {
                (Some(a), Some(b)) => internal_tensor_dim(&a, &b).unwrap(),
                _ => 0,
            };
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn quotient_gram_is_positive_and_orthonormal(mut p in common::pool()) {
        let g = common::dag(&mut p, 5);
        let e = graph_correspondence(&g).unwrap();
        if let Ok((t, _)) = internal_tensor(&e, &e) {
            prop_assert!(t.validate().pass());
            for b in t.gram_blocks() {
                prop_assert!(psd_test(b, 1e-9).pass);
            }
            let tg = t.trace_gram();
            prop_assert!(op_norm(&(&tg - eye(tg.nrows()))) < 1e-9);
        }
    }

    #[test]
    fn balancing_lies_in_the_kernel(mut p in common::pool()) {
        let alg = MatrixBlocksAlgebra::new(vec![1, 2]).unwrap();
        let e = Correspondence::identity(&alg);
        let (_, space) = internal_tensor(&e, &e).unwrap();
        let coeffs: Vec<_> = (0..alg.dim()).map(|_| cx(p.next(), p.next())).collect();
        let a = alg.from_coeffs(&coeffs).unwrap();
        let zeta = vector(&mut p, e.dim());
        let xi = vector(&mut p, e.dim());
        let lhs = space.push() * kron(&(e.right(&a) * &zeta), &xi);
        let rhs = space.push() * kron(&zeta, &(e.left(&a) * &xi));
        prop_assert!(op_norm(&(lhs - rhs)) < 1e-9);
    }
}
