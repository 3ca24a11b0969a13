mod common;

use covrep_core::algebra::{MatrixBlocksAlgebra, StarRepresentation};
use covrep_core::linalg::{eye, op_norm};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn representations_are_contractive(mut p in common::pool()) {
        let alg = MatrixBlocksAlgebra::new(vec![1, 2]).unwrap();
        let sigma = StarRepresentation::with_multiplicities(&alg, &[2, 1]).unwrap();
        prop_assert!(sigma.validate().pass());
        let coeffs: Vec<_> = (0..alg.dim()).map(|_| covrep_core::linalg::cx(p.next(), p.next())).collect();
        let a = alg.from_coeffs(&coeffs).unwrap();
        let img = sigma.apply(&a).unwrap();
        prop_assert!(op_norm(&img) <= a.norm() * (1.0 + 1e-9) + 1e-12);
        let one = sigma.apply(&alg.identity()).unwrap();
        prop_assert!(op_norm(&(one - eye(sigma.hilbert_dim()))) < 1e-12);
    }
}
