//! One line per acceptance criterion; exits nonzero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use sbcube::composer::{construction_cons, generate_sbc, plan_general, plan_special, Plan};
use sbcube::cube::{line_profile, Cube};
use sbcube::designs::{pbd456, sbts_pair_sums, verify_pbd, SbtsWeights};
use sbcube::latin::{inflate, two_dim_square, unit_cube};
use sbcube::library::{block_cube, BlockKind};
use sbcube::oracle::{search_cube, Outcome, SearchProblem};
use sbcube::{add_unit_multiple, decode_cube, encode_cube, verify_consecutive, Error, Format, GraphKind, Mask};

fn range(cube: &Cube) -> (u64, u64) {
    let report = verify_consecutive(cube).unwrap();
    assert!(report.accepted, "{report}");
    report.expected_range
}

fn bundled_cubes() {
    let expected = [
        (BlockKind::Sbc2, 11),
        (BlockKind::Sbc3, 26),
        (BlockKind::Sbc5, 74),
        (BlockKind::Sbhc4_14, 35),
        (BlockKind::Sbhc5_15, 59),
        (BlockKind::Sbhc6_16, 89),
        (BlockKind::Sbhc3_12, 20),
        (BlockKind::Sbhc4_13, 38),
    ];
    let clock = Instant::now();
    for (kind, last) in expected {
        assert_eq!(range(&block_cube(kind).unwrap()), (0, last), "{kind}");
    }
    assert!(clock.elapsed() < Duration::from_secs(1));
}

fn generation_sweep() {
    let clock = Instant::now();
    for n in 2..=64 {
        let cube = generate_sbc::<u64>(n).unwrap();
        assert_eq!(cube.n(), n);
        assert_eq!(range(&cube), (0, 3 * (n * n) as u64 - 1), "n = {n}");
    }
    for n in [19, 23, 29] {
        let plan = plan_general::<u64>(n).unwrap();
        assert_eq!(range(&construction_cons(&plan).unwrap()), (0, 3 * (n * n) as u64 - 1));
    }
    assert!(clock.elapsed() < Duration::from_secs(120), "took {:?}", clock.elapsed());
}

fn seven() {
    let plan = plan_special::<u64>(7).unwrap();
    assert_eq!(plan.offsets(), (0..7).map(|i| 21 * i).collect::<Vec<_>>());
    let cube = construction_cons(&plan).unwrap();
    let mut sums = line_profile(&cube).unwrap().nonempty_sums();
    sums.sort_unstable();
    assert_eq!(sums, (0..147).collect::<Vec<u64>>());
}

fn inflation() {
    let six = inflate(&block_cube::<u64>(BlockKind::Sbc2).unwrap(), 3).unwrap();
    assert_eq!(six.n(), 6);
    assert_eq!(range(&six), (0, 107));
}

fn triple_system() {
    let w = SbtsWeights::from_triples(
        5,
        &[
            ([2, 3, 4], 2),
            ([1, 3, 5], 1),
            ([2, 3, 5], 3),
            ([1, 4, 5], 2),
            ([2, 4, 5], 5),
            ([3, 4, 5], 2),
        ],
    )
    .unwrap();
    let report = sbts_pair_sums(&w).unwrap();
    assert!(report.accepted());
    // pair sums recomputed by brute force over all triples
    let brute = |i: usize, j: usize| -> u64 { (1..=5).filter(|&k| k != i && k != j).map(|k| w.get([i, j, k])).sum() };
    let mut all: Vec<u64> = (1..=5)
        .flat_map(|i| (i + 1..=5).map(move |j| (i, j)))
        .map(|(i, j)| brute(i, j))
        .collect();
    all.sort_unstable();
    assert_eq!(all, (0..10).collect::<Vec<u64>>());
    assert_eq!(brute(1, 2), 0);
    assert_eq!(brute(4, 5), 9);
    assert_eq!(report.sum(1, 2), Some(0));
    assert_eq!(report.sum(4, 5), Some(9));
}

fn nonexistence() {
    let clock = Instant::now();
    let problem = SearchProblem::new(GraphKind::K3xK(3).mask(), 0, 10_000_000, 0).unwrap();
    assert_eq!(search_cube(&problem), Outcome::ExhaustedNone);
    assert!(clock.elapsed() < Duration::from_secs(1), "took {:?}", clock.elapsed());
    let eleven = construction_cons(&plan_special::<u64>(11).unwrap()).unwrap();
    assert_eq!(range(&eleven), (0, 362));
}

fn pbd_synthesis() {
    let clock = Instant::now();
    for v in [13, 16, 17, 20, 21, 22].into_iter().chain(24..=200) {
        let design = pbd456(v).unwrap_or_else(|e| panic!("v = {v}: {e}"));
        assert_eq!(design.v(), v);
        assert!(verify_pbd(&design, &[4, 5, 6]).accepted, "v = {v}");
        let pairs: usize = design.blocks().iter().map(|b| b.len() * (b.len() - 1) / 2).sum();
        assert_eq!(pairs, v * (v - 1) / 2);
    }
    assert!(clock.elapsed() < Duration::from_secs(600));
}

fn oracle_agreement() {
    for mask in [
        Mask::full(2),
        GraphKind::J { m: 3, x: 0 }.mask(),
        GraphKind::J { m: 4, x: 0 }.mask(),
    ] {
        let problem = SearchProblem::new(mask, 0, 50_000_000, 1).unwrap();
        match search_cube(&problem) {
            Outcome::Found(cube) => assert!(verify_consecutive(&cube).unwrap().accepted),
            other => panic!("no witness: {other:?}"),
        }
    }
    assert!(matches!(two_dim_square(3), Err(Error::Parity(_))));
    assert!(matches!(two_dim_square(5), Err(Error::Parity(_))));
}

fn permutations() -> impl Strategy<Value = [usize; 3]> {
    Just([0, 1, 2]).prop_shuffle().prop_map(|v| [v[0], v[1], v[2]])
}

fn property_suites() {
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    let sbcs: Vec<Cube> = (2..=9).map(|n| generate_sbc(n).unwrap()).collect();

    // axis permutation keeps the verdict and the range
    runner
        .run(&(0..sbcs.len(), permutations()), |(i, perm)| {
            let permuted = sbcs[i].permute_axes(perm);
            prop_assert_eq!(
                verify_consecutive(&permuted).unwrap(),
                verify_consecutive(&sbcs[i]).unwrap()
            );
            Ok(())
        })
        .unwrap();

    // adding a·unit moves the range to start at a
    runner
        .run(&(0..BlockKind::ALL.len(), 0u64..1_000_000_000), |(k, a)| {
            let kind = BlockKind::ALL[k];
            let base = block_cube::<u64>(kind).unwrap();
            let unit = unit_cube(kind.graph()).unwrap();
            let shifted = add_unit_multiple(&base, &unit, &a).unwrap();
            let report = verify_consecutive(&shifted).unwrap();
            prop_assert!(report.accepted);
            prop_assert_eq!(report.expected_range, (a, a + kind.line_count() as u64 - 1));
            Ok(())
        })
        .unwrap();

    // offsets start at 0, step by the piece line counts, and end at 3n²
    let plans: Vec<Plan> = [7, 11, 13, 17]
        .iter()
        .map(|&n| plan_special(n).unwrap())
        .chain([12, 15, 16, 19, 20, 23].iter().map(|&n| plan_general(n).unwrap()))
        .collect();
    runner
        .run(&(0..plans.len(), any::<u64>()), |(p, seed)| {
            let plan = &plans[p];
            let mut order: Vec<usize> = (0..plan.pieces().len()).collect();
            let mut state = seed;
            for i in (1..order.len()).rev() {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                order.swap(i, (state >> 33) as usize % (i + 1));
            }
            let plan = plan.reordered(&order).unwrap();
            let offsets = plan.offsets();
            prop_assert_eq!(offsets[0], 0);
            for i in 1..offsets.len() {
                prop_assert_eq!(offsets[i], offsets[i - 1] + plan.pieces()[i - 1].line_count());
            }
            let last = plan.pieces().last().unwrap().line_count();
            prop_assert_eq!(offsets.last().unwrap() + last, 3 * plan.n() * plan.n());
            if plan.n() <= 13 {
                prop_assert!(construction_cons(&plan).is_ok());
            }
            Ok(())
        })
        .unwrap();

    // encode then decode gives back the same cube
    let cubes = (1usize..=5, any::<u64>(), prop::bool::ANY, 0u64..1_000_000).prop_map(|(n, seed, masked, start)| {
        let mask = if masked && n >= 3 {
            Mask::holey(n)
        } else {
            Mask::full(n)
        };
        let mut cube = Cube::zeros_masked(mask.clone()).with_start(start);
        let mut state = seed;
        for (i, j, k) in mask.cells().collect::<Vec<_>>() {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            cube.set(i, j, k, state >> (state % 40)).unwrap();
        }
        cube
    });
    runner
        .run(&(cubes, prop::bool::ANY), |(cube, json)| {
            let format = if json { Format::Json } else { Format::Text };
            let decoded: Cube = decode_cube(&encode_cube(&cube, format)).unwrap();
            prop_assert_eq!(decoded, cube);
            Ok(())
        })
        .unwrap();
}

fn main() {
    let criteria: [(&str, fn()); 9] = [
        ("bundled cubes verify with their published ranges", bundled_cubes),
        ("gen n verifies for every n in 2..=64", generation_sweep),
        ("n = 7 plan offsets 0,21,...,126 and sums 0..=146", seven),
        ("inflate(SBC2, 3) is an SBC(6) with range [0,107]", inflation),
        ("SBTS(5) table gives pair sums 0..=9", triple_system),
        (
            "K3xK3 search exhausts; repaired n = 11 plan gives [0,362]",
            nonexistence,
        ),
        ("pbd456 verified on {13,16,17,20,21,22} and 24..=200", pbd_synthesis),
        (
            "oracle witnesses for n = 2, J3, J4; parity rejects 3 and 5",
            oracle_agreement,
        ),
        ("property suites, 1000 trials each", property_suites),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let clock = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check));
        let status = if result.is_ok() { "PASS" } else { "FAIL" };
        let detail = match &result {
            Err(payload) => payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .map(|m| format!(" ({m})"))
                .unwrap_or_default(),
            Ok(()) => String::new(),
        };
        println!("criterion {}: {status} {name} [{:.2?}]{detail}", i + 1, clock.elapsed());
        failed += usize::from(result.is_err());
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
