//! Recomputes every line sum of the bundled tables and compares it with the
//! sums transcribed alongside them.

use serde_json::Value;

use sbcube::cube::line_profile;
use sbcube::library::{block_cube, BlockKind};
use sbcube::{Axis, Line};

fn fixture() -> Value {
    serde_json::from_str(include_str!("fixtures/table_sums.json")).unwrap()
}

fn grid(value: &Value) -> Vec<Vec<Option<u64>>> {
    value
        .as_array()
        .unwrap()
        .iter()
        .map(|row| row.as_array().unwrap().iter().map(Value::as_u64).collect())
        .collect()
}

#[test]
fn transcribed_sums_match_recomputed_sums() {
    let fixture = fixture();
    let kinds = &BlockKind::ALL[1..];
    assert_eq!(fixture.as_object().unwrap().len(), kinds.len());
    for &kind in kinds {
        let cube = block_cube::<u64>(kind).unwrap();
        let profile = line_profile(&cube).unwrap();
        let n = cube.n();
        let table = &fixture[kind.name()];
        let rows = grid(&table["row_sums"]);
        let columns = grid(&table["column_sums"]);
        let throughs = grid(&table["through_sums"]);
        let at = |line: Line| profile.is_nonempty(line).then(|| *profile.sum(line));
        for a in 0..n {
            for b in 0..n {
                assert_eq!(
                    rows[b][a],
                    at(Line::new(Axis::Y, a, b)),
                    "{kind} row sum, row {a} layer {b}"
                );
                assert_eq!(
                    columns[b][a],
                    at(Line::new(Axis::X, a, b)),
                    "{kind} column sum, column {a} layer {b}"
                );
                assert_eq!(
                    throughs[a][b],
                    at(Line::new(Axis::Z, a, b)),
                    "{kind} through sum at ({a},{b})"
                );
            }
        }
    }
}

#[test]
fn figure_cube_matches_small_table() {
    let sbc2 = block_cube::<u64>(BlockKind::Sbc2).unwrap();
    let profile = line_profile(&sbc2).unwrap();
    let mut sums = profile.nonempty_sums();
    sums.sort_unstable();
    assert_eq!(sums, (0..12).collect::<Vec<u64>>());
    assert_eq!(sbc2.total().unwrap(), 22);
}
