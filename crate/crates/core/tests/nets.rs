mod common;

use proptest::prelude::*;
use qmc_ppc::genmat::{
    row_length, scrambled, scrambler_matrix, stack_leading_rows, tse_check, Construction, GenMatrix, SeqDef,
};
use qmc_ppc::poly::parse_poly_list;
use qmc_ppc::sequences::{radical_inverse, DigitalSeq};
use qmc_ppc::{Error, FieldSpec};

fn def(polys: &str, method: Construction) -> SeqDef {
    let f2 = FieldSpec::prime(2).unwrap();
    SeqDef::new(&f2, parse_poly_list(&f2, polys).unwrap(), method).unwrap()
}

const METHODS: [Construction; 2] = [Construction::Niederreiter, Construction::ColumnByColumn];

#[test]
fn rank_check_agrees_with_brute_force() {
    for polys in ["x;x+1", "x;x^2+x+1", "x+1;x^2+x+1", "x;x+1;x^2+x+1"] {
        for method in METHODS {
            let d = def(polys, method);
            for scramble in [false, true] {
                let mut mats = d.matrices(10).unwrap();
                if scramble {
                    mats = scrambled(&mats, &scrambler_matrix(&d, 10)).unwrap();
                }
                let lib = tse_check(&mats, d.degrees(), 0, 10).unwrap().map(|c| (c.m, c.r));
                assert_eq!(lib, common::tse_brute_force_f2(&mats, d.degrees(), 0, 10), "{polys} {method:?}");
                assert_eq!(lib, None);
            }
        }
    }
}

#[test]
fn rank_check_finds_failures() {
    let f2 = FieldSpec::prime(2).unwrap();
    let mats = vec![GenMatrix::identity(&f2, 6), GenMatrix::identity(&f2, 6)];
    let cert = tse_check(&mats, &[1, 1], 0, 6).unwrap().expect("equal matrices collide");
    assert_eq!(Some((cert.m, cert.r.clone())), common::tse_brute_force_f2(&mats, &[1, 1], 0, 6));
    assert_eq!((cert.m, cert.r), (2, vec![1, 1]));
    assert!(tse_check(&mats, &[1, 1], 6, 6).unwrap().is_none());
}

fn f2_matrix(bits: &[bool], size: usize) -> GenMatrix {
    let f2 = FieldSpec::prime(2).unwrap();
    let digits: Vec<u32> = bits.iter().map(|&b| b as u32).collect();
    GenMatrix::from_digits(&f2, size, size, &digits).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_matrices_agree_with_brute_force(
        a in prop::collection::vec(any::<bool>(), 49),
        b in prop::collection::vec(any::<bool>(), 49),
        t in 0usize..3,
    ) {
        let mats = vec![f2_matrix(&a, 7), f2_matrix(&b, 7)];
        let lib = tse_check(&mats, &[1, 1], t, 7).unwrap().map(|c| (c.m, c.r));
        prop_assert_eq!(lib, common::tse_brute_force_f2(&mats, &[1, 1], t, 7));
    }
}

#[test]
fn elementary_intervals_hold_one_point_per_block() {
    for method in METHODS {
        let seq = DigitalSeq::from_def(&def("x;x+1", method), 14).unwrap();
        let points: Vec<_> = (0..1u128 << 13).map(|n| seq.point(n, 12).unwrap()).collect();
        for m in 0..=12usize {
            let block = 1usize << m;
            for s in 0..2 {
                let chunk: Vec<_> =
                    points[s * block..(s + 1) * block].iter().map(|p| p.truncate(m).unwrap()).collect();
                for v1 in 0..=m {
                    assert!(common::one_point_per_interval(&chunk, &[v1, m - v1]), "{method:?} m={m} s={s} v1={v1}");
                }
            }
        }
    }
}

#[test]
fn scrambled_row_lengths_are_short() {
    for method in METHODS {
        let d = def("x;x+1", method);
        let size = 24;
        let mats = scrambled(&d.matrices(size).unwrap(), &scrambler_matrix(&d, size)).unwrap();
        for f in 1..=10 {
            assert!(row_length(&mats, f).unwrap() <= 2 * f, "{method:?} f={f}");
        }
        assert!(scrambler_matrix(&d, size).is_nut().unwrap());
    }
    let d = def("x;x+1", Construction::Niederreiter);
    assert!(matches!(row_length(&d.matrices(16).unwrap(), 2), Err(Error::Inconclusive(_))));
}

#[test]
fn stacked_scrambled_rows_kill_last_column() {
    let d = def("x;x+1", Construction::Niederreiter);
    for k in 1..=5usize {
        let m = 2 * k;
        let size = m + 1;
        let mats = scrambled(&d.matrices(size).unwrap(), &scrambler_matrix(&d, size)).unwrap();
        let stack = stack_leading_rows(&mats, k, size).unwrap();
        assert!((0..stack.rows()).all(|r| stack.get(r, m).is_zero()), "k = {k}");
    }
}

#[test]
fn identity_matrices_give_van_der_corput() {
    let f2 = FieldSpec::prime(2).unwrap();
    let seq = DigitalSeq::new(vec![GenMatrix::identity(&f2, 10)]).unwrap();
    for n in 0..1u128 << 10 {
        let p = seq.point(n, 10).unwrap();
        let v = radical_inverse(2, n).unwrap();
        assert_eq!(p.coord(0).to_ratio().unwrap(), v.to_ratio().unwrap());
    }
}

#[test]
fn radical_inverse_is_injective_below_one() {
    for b in [2u32, 3, 5] {
        let limit = (b as u128).pow(6);
        let mut seen = std::collections::HashSet::new();
        for n in 0..limit {
            let x = radical_inverse(b, n).unwrap();
            assert!(x.to_f64() < 1.0);
            let r = x.to_ratio().unwrap();
            assert!(seen.insert((r.num, r.den)));
        }
    }
}
