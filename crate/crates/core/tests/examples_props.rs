mod common;

use covrep_core::algebra::StarRepresentation;
use covrep_core::examples::{graph_correspondence, induced_representation};
use covrep_core::wold::{check_analytic, verify_muhly_solel};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn induced_graph_reps_are_pure_isometries(mut p in common::pool()) {
        let g = common::dag(&mut p, 5);
        let e = graph_correspondence(&g).unwrap();
        let pi = StarRepresentation::faithful(e.algebra());
        let ind = induced_representation(&e, &pi, g.vertices).unwrap();
        prop_assert!(ind.exact);
        let rep = &ind.rep;
        prop_assert!(rep.validate().pass());
        prop_assert!(rep.check_isometric().pass);
        prop_assert!(check_analytic(rep).pass);
        let ms = verify_muhly_solel(rep).unwrap();
        prop_assert!(ms.report.pass(), "{:?}", ms.report);
        prop_assert_eq!(ms.report.dim_named("H2"), Some(0));
    }
}
