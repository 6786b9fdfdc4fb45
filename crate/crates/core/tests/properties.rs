use proptest::prelude::*;

use toric_minres::cli::input::{embedding_to_psi, EmbeddingSpec};
use toric_minres::cli::random::check_resolution;
use toric_minres::hhl::verify_complex;
use toric_minres::ratlin::{ratio, IntMatrix, RatMatrix};
use toric_minres::{build_hhl_complex, minimal_resolution, Error, GradingError, MinresOptions, Quadruple};

fn quadruple() -> impl Strategy<Value = Quadruple> {
    (1usize..=2, 1usize..=5)
        .prop_flat_map(|(k, n)| proptest::collection::vec(proptest::collection::vec(-2i64..=2, n.max(k)), k))
        .prop_filter_map("rank k", |rows| Quadruple::new(rows).ok())
}

fn alternating(v: &[usize]) -> i64 {
    v.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cells_tile_the_torus(q in quadruple()) {
        let hhl = build_hhl_complex(&q).unwrap();
        let s = &hhl.strat;
        prop_assert_eq!(s.euler_characteristic(), 0);
        for c in &s.cells {
            prop_assert!(c.interior.iter().all(|x| *x >= ratio(0, 1) && *x < ratio(1, 1)));
            prop_assert_eq!(s.locate(&c.interior), Some(c.id));
        }
        prop_assert!(verify_complex(&hhl.complex).is_ok());
    }

    #[test]
    fn resolutions_pass_every_check(q in quadruple()) {
        match minimal_resolution(&q, &MinresOptions::default()) {
            Ok(m) => {
                prop_assert!(check_resolution(&m).is_ok());
                prop_assert_eq!(alternating(&m.complex.ranks()), alternating(&m.hhl.complex.ranks()));
                prop_assert!(m.complex.ranks()[0] >= 1);
            }
            Err(Error::Grading(GradingError::NoPositiveGrading { .. })) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn coordinate_sublattices_drop_coordinates(
        rays in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 1..5),
        dropped in 0usize..3,
    ) {
        let mut generator = vec![0; 3];
        generator[dropped] = 1;
        let e = EmbeddingSpec { rays: rays.clone(), fan: None, sublattice: vec![generator] };
        let psi = embedding_to_psi(&e).unwrap();
        prop_assert_eq!(psi.len(), 2);
        // the rows of psi span the same rational space as the kept coordinates
        let kept: Vec<Vec<i64>> = (0..3).filter(|&j| j != dropped).map(|j| rays.iter().map(|r| r[j]).collect()).collect();
        let n = rays.len();
        let a = IntMatrix::from_rows_with_cols(n, &psi).to_rational();
        let b = IntMatrix::from_rows_with_cols(n, &kept).to_rational();
        let stacked: RatMatrix = a.vstack(&b);
        prop_assert_eq!(stacked.rank(), a.rank());
        prop_assert_eq!(a.rank(), b.rank());
    }
}
