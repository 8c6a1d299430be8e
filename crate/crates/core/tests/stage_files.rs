use std::fs;

use gmclone::prep::{run_pipeline, FULL_BITSTRING_FILE, GM_BITSTRING_FILE, GM_MATRIX_FILE};

// √(2/3) and 1/√6 correctly rounded (checked at 50 digits) and printed
// with 17 significant digits.
const GM_MATRIX_M2: &str = "\
001\t8.1649658092772603e-1\t0.0000000000000000e0\tC0
010\t-4.0824829046386302e-1\t0.0000000000000000e0\tC0
011\t-4.0824829046386302e-1\t0.0000000000000000e0\tC1
100\t-4.0824829046386302e-1\t0.0000000000000000e0\tC0
101\t-4.0824829046386302e-1\t0.0000000000000000e0\tC1
110\t8.1649658092772603e-1\t0.0000000000000000e0\tC1
";

#[test]
fn two_clone_stage_files() {
    let dir = tempfile::tempdir().unwrap();
    let (art, records) = run_pipeline(2, dir.path()).unwrap();
    assert_eq!(records.len(), 6);
    assert_eq!(
        fs::read_to_string(&art.full_path).unwrap(),
        "000\n001\n010\n011\n100\n101\n110\n111\n"
    );
    assert_eq!(
        fs::read_to_string(&art.gm_path).unwrap(),
        "001\n010\n011\n100\n101\n110\n"
    );
    assert_eq!(fs::read_to_string(&art.matrix_path).unwrap(), GM_MATRIX_M2);
}

#[test]
fn one_clone_has_two_records() {
    let dir = tempfile::tempdir().unwrap();
    let (art, _) = run_pipeline(1, dir.path()).unwrap();
    assert_eq!(fs::read_to_string(&art.gm_path).unwrap(), "0\n1\n");
    assert_eq!(fs::read_to_string(&art.matrix_path).unwrap().lines().count(), 2);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run_pipeline(5, &a).unwrap();
    run_pipeline(5, &b).unwrap();
    for name in [FULL_BITSTRING_FILE, GM_BITSTRING_FILE, GM_MATRIX_FILE] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
}
