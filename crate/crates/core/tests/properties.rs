//! Randomized invariants of the public building blocks.

use std::sync::Arc;

use jagged_fsi::coupling::{extrapolate, jagged_schedule, HistoryBuffer, LiftingOperator, Order};
use jagged_fsi::fluid::{FluidParams, FluidSpace};
use jagged_fsi::mesh::StructuredMesh;
use jagged_fsi::study::compute_order;
use proptest::prelude::*;

proptest! {
    #[test]
    fn lifting_is_a_right_inverse_of_restriction(v in prop::collection::vec(-1e3f64..1e3, 61)) {
        let mesh = StructuredMesh::new(0).unwrap();
        let space = FluidSpace::new(Arc::new(mesh), FluidParams::default()).unwrap();
        let lift = LiftingOperator::new(&space.mesh, space.dofs.clone());
        prop_assert_eq!(lift.restrict(&lift.apply(&v).unwrap()).unwrap(), v);
    }

    #[test]
    fn second_order_extrapolation_is_exact_on_lines(a in -10.0f64..10.0, b in -10.0f64..10.0) {
        let f = |t: f64| vec![a + b * t];
        let mut h = HistoryBuffer::new(0.0, f(0.0));
        h.push(0.1, f(0.1)).unwrap();
        h.push(0.2, f(0.2)).unwrap();
        let q = extrapolate(&h, Order::SECOND);
        prop_assert!((q[0] - f(0.3)[0]).abs() < 1e-12 * (1.0 + a.abs() + b.abs()));
        prop_assert_eq!(extrapolate(&h, Order::FIRST), f(0.2));
    }

    #[test]
    fn schedule_is_a_merge_of_both_step_sequences(nf in 1usize..40, ns in 1usize..40) {
        let ev = jagged_schedule(nf, ns).unwrap();
        prop_assert_eq!(ev.len(), nf + ns);
        prop_assert!(ev.windows(2).all(|w| w[0].time <= w[1].time));
    }

    #[test]
    fn halving_error_is_order_one(e in 1e-6f64..1e3) {
        prop_assert!((compute_order(e, e / 2.0).unwrap() - 1.0).abs() < 1e-12);
    }
}
