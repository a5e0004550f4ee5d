mod common;

use common::*;
use graphon_wl_core::bilabeled::BiLabeledGraph;
use graphon_wl_core::operators::{apply_operator, hom_function, inner_product, operator_matrix, KTensor};
use graphon_wl_core::{Rational, StepGraphon};
use proptest::prelude::*;

fn tensor(k: usize, w: &StepGraphon, values: Vec<Rational>) -> KTensor {
    KTensor::new(k, w.vertex_count(), values).unwrap()
}

/// A graphon, two composable bi-labeled graphs in `M^{k,m}` and `M^{m,l}`,
/// and test functions on `[n]^l` and `[n]^k`.
fn instance() -> impl Strategy<Value = (StepGraphon, BiLabeledGraph, BiLabeledGraph, Vec<Rational>, Vec<Rational>)> {
    (arb_graphon(4), 0usize..=2, 0usize..=2, 0usize..=2).prop_flat_map(|(w, k, m, l)| {
        let n = w.vertex_count();
        (Just(w), arb_bilabeled(k, m), arb_bilabeled(m, l), arb_tensor(l, n), arb_tensor(k, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn apply_matches_the_oracle((w, f1, _f2, _f, _g) in instance(), raw in arb_tensor(2, 4)) {
        let out = f1.output_arity();
        let h: Vec<Rational> = raw[..w.vertex_count().pow(out as u32)].to_vec();
        let got = apply_operator(&f1, &w, &tensor(out, &w, h.clone())).unwrap();
        prop_assert_eq!(got.k(), f1.input_arity());
        prop_assert_eq!(got.values().to_vec(), naive_apply(&f1, &w, &h));
    }

    #[test]
    fn composition_law((w, f1, f2, f, _g) in instance()) {
        let l = f2.output_arity();
        let composed = f1.compose(&f2).unwrap();
        let ft = tensor(l, &w, f);
        let direct = apply_operator(&composed, &w, &ft).unwrap();
        let stepwise = apply_operator(&f1, &w, &apply_operator(&f2, &w, &ft).unwrap()).unwrap();
        prop_assert_eq!(direct, stepwise);

        let m = operator_matrix(&composed, &w).unwrap();
        let product = operator_matrix(&f1, &w).unwrap().mul(&operator_matrix(&f2, &w).unwrap()).unwrap();
        prop_assert_eq!(m, product);
    }

    #[test]
    fn adjoint_law((w, f1, _f2, _f, g) in instance()) {
        let (k, m) = (f1.input_arity(), f1.output_arity());
        let n = w.vertex_count();
        let h: Vec<Rational> = (0..n.pow(m as u32)).map(|i| Rational::from(i as i64 % 3 - 1)).collect();
        let ht = tensor(m, &w, h);
        let gt = tensor(k, &w, g);
        let left = inner_product(&apply_operator(&f1, &w, &ht).unwrap(), &gt, &w).unwrap();
        let right = inner_product(&ht, &apply_operator(&f1.transpose(), &w, &gt).unwrap(), &w).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn contraction_bounds((w, f1, _f2, _f, _g) in instance(), raw in arb_tensor(2, 4)) {
        let m = f1.output_arity();
        let values: Vec<Rational> = raw[..w.vertex_count().pow(m as u32)].to_vec();
        let f = tensor(m, &w, values);
        let tf = apply_operator(&f1, &w, &f).unwrap();
        prop_assert!(tf.max_abs() <= f.max_abs());
        let norm = |t: &KTensor| inner_product(t, t, &w).unwrap();
        prop_assert!(norm(&tf) <= norm(&f));
        prop_assert_eq!(naive_inner(tf.values(), tf.values(), &w, tf.k()), norm(&tf));
    }

    #[test]
    fn schur_on_scalars(
        (w, f1, f2) in (arb_graphon(4), 0usize..=2)
            .prop_flat_map(|(w, k)| (Just(w), arb_bilabeled(k, 0), arb_bilabeled(k, 0))),
        c1 in -3i64..=3,
        c2 in -3i64..=3,
    ) {
        let n = w.vertex_count();
        let scalar = |c: i64| KTensor::constant(0, n, Rational::from(c)).unwrap();
        let product = f1.schur(&f2).unwrap();
        let lhs = apply_operator(&product, &w, &scalar(c1 * c2)).unwrap();
        let rhs = apply_operator(&f1, &w, &scalar(c1))
            .unwrap()
            .pointwise_mul(&apply_operator(&f2, &w, &scalar(c2)).unwrap())
            .unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(
            hom_function(&product, &w).unwrap(),
            hom_function(&f1, &w).unwrap().pointwise_mul(&hom_function(&f2, &w).unwrap()).unwrap()
        );
    }
}
