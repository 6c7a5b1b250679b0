mod common;

use proptest::prelude::*;
use whitforge_core::exactq::{q, rref_solve, QMatrix, SkewForm, Solution, Subspace};
use whitforge_core::whitpair::weight_components;

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(-3i64..=3, rows * cols)
        .prop_map(move |v| QMatrix::from_data(rows, cols, v.into_iter().map(q).collect()).unwrap())
}

fn sparse_vectors(dim: usize, count: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -2i64..=2], dim), 0..=count)
}

fn to_space(dim: usize, v: &[Vec<i64>]) -> Subspace {
    Subspace::span(dim, v.iter().map(|r| r.iter().map(|&x| q(x)).collect::<Vec<_>>())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rref_solution_and_kernel(a in int_matrix(4, 5), b in prop::collection::vec(-3i64..=3, 4)) {
        let b: Vec<_> = b.into_iter().map(q).collect();
        let r = rref_solve(&a, Some(&b)).unwrap();
        prop_assert_eq!(r.rank + r.kernel.len(), 5);
        for k in &r.kernel {
            prop_assert!(a.mul_vec(k).iter().all(|x| *x == q(0)));
        }
        match r.solution.unwrap() {
            Solution::Particular(x) => prop_assert_eq!(a.mul_vec(&x), b),
            Solution::NoSolution => {
                let mut aug = a.to_rows();
                for (row, bi) in aug.iter_mut().zip(&b) {
                    row.push(bi.clone());
                }
                prop_assert!(QMatrix::from_rows(aug).unwrap().rank() > a.rank());
            }
        }
    }

    #[test]
    fn subspace_dimension_formula(u in sparse_vectors(6, 4), v in sparse_vectors(6, 4)) {
        let (u, v) = (to_space(6, &u), to_space(6, &v));
        let sum = u.sum(&v).unwrap();
        let meet = u.intersect(&v).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), u.dim() + v.dim());
        prop_assert!(u.contains(&meet).unwrap() && v.contains(&meet).unwrap());
        prop_assert!(sum.contains(&u).unwrap() && sum.contains(&v).unwrap());
        prop_assert_eq!(u.annihilator().dim() + u.dim(), 6);
    }

    #[test]
    fn inverse_and_det(a in int_matrix(4, 4), b in int_matrix(4, 4)) {
        let (da, db) = (a.det().unwrap(), b.det().unwrap());
        prop_assert_eq!((&a * &b).det().unwrap(), &da * &db);
        if da != q(0) {
            prop_assert_eq!(&a * &a.inverse().unwrap(), QMatrix::identity(4));
        }
    }

    #[test]
    fn weight_components_reassemble(seed in any::<u64>(), m in int_matrix(4, 4), d in prop::collection::vec(-3i64..=3, 4)) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_unimodular(4, &mut rng);
        let s = QMatrix::diag_i64(&d).conjugate(&g).unwrap();
        let comps = weight_components(&s, &m).unwrap();
        let total = comps.values().fold(QMatrix::zeros(4, 4), |acc, c| &acc + c);
        prop_assert_eq!(total, m);
        for (w, c) in &comps {
            prop_assert_eq!(s.bracket(c), c.scale(w));
        }
    }

    #[test]
    fn lagrangians_are_maximal(f in int_matrix(3, 3), w in sparse_vectors(9, 6)) {
        let form = SkewForm::new(&f).unwrap();
        let w = to_space(9, &w);
        let l = form.lagrangian(&w).unwrap();
        let rad = form.radical(&w);
        prop_assert!(form.is_isotropic(&l));
        prop_assert!(w.contains(&l).unwrap() && l.contains(&rad).unwrap());
        prop_assert_eq!(2 * l.dim(), w.dim() + rad.dim());
    }
}
