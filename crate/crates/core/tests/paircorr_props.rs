mod common;

use proptest::prelude::*;
use qmc_ppc::exact::Ratio;
use qmc_ppc::paircorr::{count_pairs_in, count_pairs_leq, ppc_curve, CountMode, ExactCloud, FloatCloud};
use qmc_ppc::sequences::{ExactCoord, ExactPoint, SeqSource};

const PREC: usize = 10;

/// A dyadic point set from numerators below 2^PREC.
fn dyadic_cloud(nums: &[u32], dim: usize, shift: &[u32]) -> ExactCloud {
    let points: Vec<ExactPoint> = nums
        .chunks(dim)
        .map(|c| {
            let coords = c
                .iter()
                .zip(shift)
                .map(|(&x, &t)| {
                    let v = (x + t) % (1 << PREC);
                    let digits = (0..PREC).map(|i| (v >> (PREC - 1 - i)) & 1).collect();
                    ExactCoord::new(2, digits).unwrap()
                })
                .collect();
            ExactPoint::new(coords)
        })
        .collect();
    ExactCloud::new(&points).unwrap()
}

fn dyadic_input() -> impl Strategy<Value = (usize, Vec<u32>, Vec<u32>, u32, u32)> {
    (1usize..=3).prop_flat_map(|dim| {
        (
            Just(dim),
            prop::collection::vec(0u32..1 << PREC, dim * 2..=dim * 300).prop_map(move |mut v| {
                v.truncate(v.len() / dim * dim);
                v
            }),
            prop::collection::vec(0u32..1 << PREC, dim),
            0u32..1 << (PREC - 1),
            0u32..1 << (PREC - 1),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exact_counts_are_consistent((dim, nums, shift, r1, r2) in dyadic_input()) {
        let cloud = dyadic_cloud(&nums, dim, &vec![0; dim]);
        let rotated = dyadic_cloud(&nums, dim, &shift);
        let (lo, hi) = (r1.min(r2), r1.max(r2) + 1);
        let lo = Ratio::new(lo as u128, 1 << PREC).unwrap();
        let hi = Ratio::new(hi as u128, 1 << PREC).unwrap();
        let c_lo = count_pairs_leq(&cloud, lo, CountMode::Grid);
        let c_hi = count_pairs_leq(&cloud, hi, CountMode::Grid);
        prop_assert_eq!(c_lo, count_pairs_leq(&cloud, lo, CountMode::Naive));
        prop_assert_eq!(c_hi, count_pairs_leq(&cloud, hi, CountMode::Naive));
        prop_assert!(c_lo <= c_hi);
        prop_assert_eq!(c_lo % 2, 0);
        prop_assert_eq!(count_pairs_in(&cloud, lo, hi, CountMode::Grid).unwrap() + c_lo, c_hi);
        prop_assert_eq!(count_pairs_leq(&rotated, hi, CountMode::Grid), c_hi);
    }

    #[test]
    fn float_grid_matches_double_loop(
        dim in 1usize..=3,
        coords in prop::collection::vec(0.0f64..1.0, 3..600),
        r in 0.0f64..0.6,
    ) {
        let n = coords.len() / dim;
        let coords = coords[..n * dim].to_vec();
        let cloud = FloatCloud::new(dim, coords.clone()).unwrap();
        let grid = count_pairs_leq(&cloud, r, CountMode::Grid);
        prop_assert_eq!(grid, count_pairs_leq(&cloud, r, CountMode::Naive));
        prop_assert_eq!(grid, common::naive_pairs_leq(&coords, dim, r));
    }
}

#[test]
fn equispaced_points_give_integer_steps() {
    let src = SeqSource::van_der_corput(2).unwrap();
    let cloud = ExactCloud::new(&src.exact_points(1024).unwrap()).unwrap();
    let curve = ppc_curve(&cloud, &[0.5, 1.0, 1.5, 2.5], CountMode::Grid).unwrap();
    let f: Vec<f64> = curve.entries.iter().map(|e| e.f).collect();
    assert_eq!(f, vec![0.0, 2.0, 2.0, 4.0]);
}

#[test]
fn equispaced_radius_one_and_a_half() {
    for n in [7usize, 100, 1000] {
        let coords: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        let cloud = FloatCloud::new(1, coords).unwrap();
        assert_eq!(count_pairs_leq(&cloud, 1.5 / n as f64, CountMode::Grid), 2 * n as u64);
    }
}
