use pcm_core::io::{load, matrix_to_csv, parse_matrix, parse_vector, Backend, Loaded};
use pcm_core::scalar::{Rational, Scalar};

#[test]
fn csv_and_json_agree() {
    let csv = parse_matrix("# comment\n1, 3/2, 4\n2/3, 1, 0.5\n1/4, 2, 1\n").unwrap();
    let json =
        parse_matrix(r#"{"n": 3, "entries": [["1", "3/2", 4], ["2/3", 1, 0.5], ["1/4", 2, 1]]}"#)
            .unwrap();
    let (Loaded::Exact(a, _), Loaded::Exact(b, _)) = (
        load(&csv, None, None).unwrap(),
        load(&json, None, None).unwrap(),
    ) else {
        panic!("expected exact backend");
    };
    assert_eq!(a.rows(), b.rows());
    assert_eq!(a.get(1, 2), &Rational::from_ratio(1, 2));
    let again = parse_matrix(&matrix_to_csv(&a)).unwrap();
    assert_eq!(load(&again, None, None).unwrap().backend(), Backend::Exact);
}

#[test]
fn float_literals_fall_back_to_float() {
    let m = parse_matrix("1,3\n0.3333333333333333,1\n").unwrap();
    let v = parse_vector("3\n1\n").unwrap();
    assert_eq!(load(&m, Some(&v), None).unwrap().backend(), Backend::Float);
    assert!(load(&m, Some(&v), Some(Backend::Exact)).is_err());
}

#[test]
fn rational_literal_blocks_fallback() {
    let m = parse_matrix("1,1/3\n2.9,1\n").unwrap();
    assert!(load(&m, None, None).is_err());
}

#[test]
fn shape_errors() {
    assert!(parse_matrix("1\n")
        .and_then(|m| load(&m, None, None))
        .is_err());
    assert!(parse_matrix("1,2\n1/2\n")
        .and_then(|m| load(&m, None, None))
        .is_err());
    let m = parse_matrix("1,2\n1/2,1\n").unwrap();
    let v = parse_vector("[1, 2, 3]").unwrap();
    assert!(load(&m, Some(&v), None).is_err());
    assert!(parse_vector("1,2\n3,4\n").is_err());
}
