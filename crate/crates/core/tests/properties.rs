use num_bigint::BigUint;
use proptest::prelude::*;

use sbcube::cube::line_profile;
use sbcube::designs::{pbd456, sbts_pair_sums, verify_pbd, BlockDesign, SbtsWeights};
use sbcube::latin::{circulant_square, idempotent_square, inflate};
use sbcube::library::{block_cube, BlockKind};
use sbcube::{decode_cube, encode_cube, verify_consecutive, BigCube, Cube, Format, Mask};

fn cube_strategy() -> impl Strategy<Value = Cube> {
    (1usize..=5, 0u8..3)
        .prop_flat_map(|(n, shape)| {
            let mask = match shape {
                1 if n >= 3 => Mask::holey(n),
                2 => Mask::jay(n, n - 1),
                _ => Mask::full(n),
            };
            let cells = mask.cell_count();
            (Just(mask), prop::collection::vec(0u64..50, cells), 0u64..100)
        })
        .prop_map(|(mask, values, start)| {
            let mut cube = Cube::zeros_masked(mask.clone()).with_start(start);
            for ((i, j, k), v) in mask.cells().collect::<Vec<_>>().into_iter().zip(values) {
                cube.set(i, j, k, v).unwrap();
            }
            cube
        })
}

fn permutation() -> impl Strategy<Value = [usize; 3]> {
    Just(vec![0, 1, 2]).prop_shuffle().prop_map(|v| [v[0], v[1], v[2]])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn permuting_axes_permutes_line_sums(cube in cube_strategy(), perm in permutation()) {
        let permuted = cube.permute_axes(perm);
        let mut before = line_profile(&cube).unwrap().nonempty_sums();
        let mut after = line_profile(&permuted).unwrap().nonempty_sums();
        before.sort_unstable();
        after.sort_unstable();
        prop_assert_eq!(before, after);
        prop_assert_eq!(permuted.total().unwrap(), cube.total().unwrap());
        prop_assert_eq!(
            verify_consecutive(&permuted).unwrap().accepted,
            verify_consecutive(&cube).unwrap().accepted
        );
    }

    #[test]
    fn codec_round_trip_any_cube(cube in cube_strategy(), json in any::<bool>()) {
        let format = if json { Format::Json } else { Format::Text };
        let back: Cube = decode_cube(&encode_cube(&cube, format)).unwrap();
        prop_assert_eq!(back, cube);
    }

    #[test]
    fn single_increment_breaks_verification(kind in 0usize..8, cell in any::<prop::sample::Index>()) {
        let mut cube = block_cube::<u64>(BlockKind::ALL[kind]).unwrap();
        let cells: Vec<_> = cube.mask().cells().collect();
        let (i, j, k) = cells[cell.index(cells.len())];
        let value = *cube.get(i, j, k) + 1;
        cube.set(i, j, k, value).unwrap();
        prop_assert!(!verify_consecutive(&cube).unwrap().accepted);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inflation_of_library_cubes(base in prop::sample::select(vec![BlockKind::Sbc2, BlockKind::Sbc3]), m in 1usize..=5) {
        let base = block_cube::<u64>(base).unwrap();
        let big = inflate(&base, m).unwrap();
        let n = base.n() * m;
        prop_assert_eq!(verify_consecutive(&big).unwrap().expected_range, (0, 3 * (n * n) as u64 - 1));
        prop_assert!(verify_consecutive(&big).unwrap().accepted);
    }

    #[test]
    fn big_entries_round_trip(n in 1usize..=3, digits in prop::collection::vec(any::<u64>(), 27)) {
        let mut cube = BigCube::zeros(n);
        for (idx, d) in digits.iter().take(n * n * n).enumerate() {
            let value = BigUint::from(*d) * BigUint::from(u64::MAX) * BigUint::from(u64::MAX);
            cube.set(idx % n, idx / n % n, idx / (n * n), value).unwrap();
        }
        for format in [Format::Json, Format::Text] {
            let back: BigCube = decode_cube(&encode_cube(&cube, format)).unwrap();
            prop_assert_eq!(&back, &cube);
        }
    }

    #[test]
    fn pbd_pair_arithmetic(v in 24usize..=300) {
        let design = pbd456(v).unwrap();
        let pairs: usize = design.blocks().iter().map(|b| b.len() * (b.len() - 1) / 2).sum();
        prop_assert_eq!(pairs, v * (v - 1) / 2);
        prop_assert!(design.blocks().iter().all(|b| (4..=6).contains(&b.len())));
        let back = BlockDesign::from_json(&design.to_json()).unwrap();
        prop_assert!(verify_pbd(&back, &[4, 5, 6]).accepted);
    }

    #[test]
    fn triple_weights_total(v in 3usize..=7, raw in prop::collection::vec(0u64..20, 35)) {
        let mut w = SbtsWeights::new(v);
        let mut total = 0;
        let mut next = raw.into_iter();
        for a in 1..=v {
            for b in a + 1..=v {
                for c in b + 1..=v {
                    let weight = next.next().unwrap_or(0);
                    total += weight;
                    w.set([a, b, c], weight).unwrap();
                }
            }
        }
        let report = sbts_pair_sums(&w).unwrap();
        prop_assert_eq!(report.pair_sums.values().sum::<u64>(), 3 * total);
    }

    #[test]
    fn latin_squares(n in 1usize..=12) {
        prop_assert!(circulant_square(n).unwrap().is_latin());
        if n != 2 {
            let square = idempotent_square(n).unwrap();
            prop_assert!(square.is_latin() && square.is_idempotent());
        }
    }
}
