use std::io::Write;

use fairkm_core::{load_csv, Error, LoadOptions};

fn write(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn loads_numeric_and_categorical_columns() {
    let f = write("id,age,city,sex\na,30,x,m\nb,41,y,f\nc,?,x,f\nd,25,z,m\n");
    let opts = LoadOptions::new("sex").with_id_column("id");
    let data = load_csv(f.path(), &opts).unwrap();
    assert_eq!(data.len(), 3);
    assert_eq!(data.schema().dropped_rows, 1);
    assert_eq!(data.schema().feature_names, vec!["age", "city=x", "city=y", "city=z"]);
    assert_eq!(data.row(2), &[25.0, 0.0, 0.0, 1.0]);
    assert_eq!(data.sensitive(), &[0, 1, 0]);
    assert_eq!(data.point_ids().unwrap(), &["a", "b", "d"]);
}

#[test]
fn missing_sensitive_column_is_reported() {
    let f = write("x,y\n1,2\n3,4\n");
    match load_csv(f.path(), &LoadOptions::new("sex")) {
        Err(Error::MissingColumn { column }) => assert_eq!(column, "sex"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn missing_file_is_an_io_error() {
    let err = load_csv("/nonexistent/data.csv", &LoadOptions::new("g")).unwrap_err();
    assert!(matches!(err, Error::Io { .. }), "{err:?}");
}
