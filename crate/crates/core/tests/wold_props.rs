mod common;

use covrep_core::covrep::CovariantRep;
use covrep_core::examples::unitary_plus_induced;
use covrep_core::linalg::{eye, op_norm};
use covrep_core::subspace::Subspace;
use covrep_core::wold::{h_infinity, h_infinity_steps, invariant_closure, tilde_ranges, wandering_subspace, wold_decompose};
use proptest::prelude::*;

/// Left-invertible instances, some of them with a nonzero unitary part.
fn instance(p: &mut common::Pool) -> CovariantRep {
    if p.next() > 0.3 {
        let k = 1 + p.below(2);
        let u = p.cmat(k, k, 1.0).qr().q();
        unitary_plus_induced(1 + p.below(2), &u).unwrap().0
    } else {
        common::left_invertible(p)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tilde_ranges_decrease(mut p in common::pool()) {
        let rep = instance(&mut p);
        let ranges = tilde_ranges(&rep, rep.hilbert_dim() + 1);
        for w in ranges.windows(2) {
            prop_assert!(w[0].contains(&w[1]).unwrap());
        }
    }

    #[test]
    fn h_infinity_stabilizes(mut p in common::pool()) {
        let rep = instance(&mut p);
        let n = rep.hilbert_dim();
        let a = h_infinity_steps(&rep, n);
        prop_assert!(a.equals(&h_infinity_steps(&rep, n + 1)).unwrap());
        prop_assert!(a.equals(&h_infinity_steps(&rep, n + 4)).unwrap());
    }

    #[test]
    fn wold_projectors_split_the_space(mut p in common::pool()) {
        let rep = instance(&mut p);
        let d = wold_decompose(&rep).unwrap();
        if d.hypotheses_met() {
            prop_assert!(d.certificates_pass(), "{:?}", d.certificates);
            let (pu, pi) = (d.h_u.projector(), d.h_inf.projector());
            prop_assert!(op_norm(&(&pu + &pi - eye(rep.hilbert_dim()))) < 1e-7);
            prop_assert!(op_norm(&(&pu * &pi)) < 1e-7);
            prop_assert!(op_norm(&(&pu * &pu - &pu)) < 1e-9);
        }
    }

    #[test]
    fn generated_space_is_dual_h_infinity_complement(mut p in common::pool()) {
        let rep = instance(&mut p);
        let w = wandering_subspace(&rep);
        let closure = invariant_closure(&rep, &w).unwrap();
        let dual_inf = h_infinity(&rep.cauchy_dual().unwrap());
        prop_assert!(closure.equals(&dual_inf.orthocomplement()).unwrap());
    }

    #[test]
    fn wandering_subspace_is_unique(mut p in common::pool()) {
        let rep = instance(&mut p);
        prop_assume!(wold_decompose(&rep).unwrap().hypotheses_met());
        let w = wandering_subspace(&rep);
        let k = invariant_closure(&rep, &w).unwrap();
        prop_assume!(!k.is_zero());
        let inner: Subspace = wandering_subspace(&rep.restrict(&k).unwrap());
        prop_assert!(inner.embed_in(&k).unwrap().equals(&w).unwrap());
    }
}
