//! Result CSV with a fixed header. Floats are written with the shortest
//! decimal representation that parses back to the same value.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::harness::tables::ResultRow;

pub const RESULT_HEADER: [&str; 14] = [
    "table",
    "generator",
    "param_set",
    "variable",
    "q",
    "stat",
    "original_mean",
    "original_std",
    "shuffled_mean",
    "shuffled_std",
    "delta_h",
    "delta_h_shuff",
    "test_z",
    "reject95",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

pub fn write_results<W: Write>(out: W, rows: &[ResultRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULT_HEADER).map_err(csv_io)?;
    for r in rows {
        w.write_record([
            r.table.clone(),
            r.generator.clone(),
            r.param_set.clone(),
            r.variable.clone(),
            opt(r.q),
            r.stat.clone(),
            r.original_mean.to_string(),
            r.original_std.to_string(),
            opt(r.shuffled_mean),
            opt(r.shuffled_std),
            opt(r.delta_h),
            opt(r.delta_h_shuff),
            opt(r.test_z),
            opt(r.reject95),
        ])
        .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_io(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::Parse {
            row: 0,
            msg: format!("{other:?}"),
        },
    }
}

pub fn read_results<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers().map_err(|e| Error::Parse {
        row: 0,
        msg: e.to_string(),
    })?;
    if headers.iter().ne(RESULT_HEADER) {
        return Err(Error::Parse {
            row: 0,
            msg: format!("unexpected header {:?}", headers.iter().collect::<Vec<_>>()),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| Error::Parse {
            row,
            msg: e.to_string(),
        })?;
        let cell = |j: usize| rec.get(j).unwrap_or("");
        let num = |j: usize| -> Result<f64> {
            cell(j).parse().map_err(|_| Error::Parse {
                row,
                msg: format!("{}: `{}` is not a number", RESULT_HEADER[j], cell(j)),
            })
        };
        let opt_num = |j: usize| -> Result<Option<f64>> {
            if cell(j).is_empty() {
                Ok(None)
            } else {
                num(j).map(Some)
            }
        };
        let reject95 = match cell(13) {
            "" => None,
            "true" => Some(true),
            "false" => Some(false),
            other => {
                return Err(Error::Parse {
                    row,
                    msg: format!("reject95: `{other}` is not a boolean"),
                })
            }
        };
        rows.push(ResultRow {
            table: cell(0).into(),
            generator: cell(1).into(),
            param_set: cell(2).into(),
            variable: cell(3).into(),
            q: opt_num(4)?,
            stat: cell(5).into(),
            original_mean: num(6)?,
            original_std: num(7)?,
            shuffled_mean: opt_num(8)?,
            shuffled_std: opt_num(9)?,
            delta_h: opt_num(10)?,
            delta_h_shuff: opt_num(11)?,
            test_z: opt_num(12)?,
            reject95,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(x: f64, y: f64, some: bool) -> ResultRow {
        ResultRow {
            table: "T5".into(),
            generator: "stable".into(),
            param_set: "alpha=1.2".into(),
            variable: "price".into(),
            q: some.then_some(2.0),
            stat: "H".into(),
            original_mean: x,
            original_std: y,
            shuffled_mean: some.then_some(x / 3.0),
            shuffled_std: some.then_some(y * 1e-9),
            delta_h: some.then_some(-x),
            delta_h_shuff: None,
            test_z: some.then_some(x * y),
            reject95: some.then_some(x > y),
        }
    }

    #[test]
    fn header_is_exact() {
        let mut buf = Vec::new();
        write_results(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "table,generator,param_set,variable,q,stat,original_mean,original_std,shuffled_mean,shuffled_std,delta_h,delta_h_shuff,test_z,reject95\n"
        );
    }

    #[test]
    fn shortest_float_formatting() {
        let mut buf = Vec::new();
        write_results(&mut buf, &[row(0.1, 2.0, false)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.ends_with("T5,stable,alpha=1.2,price,,H,0.1,2,,,,,,\n"), "{text}");
    }

    #[test]
    fn rejects_foreign_header() {
        assert!(read_results("a,b\n1,2\n".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_exact(x in -1e6f64..1e6, y in 0f64..10.0, some in any::<bool>()) {
            let rows = vec![row(x, y, some), row(y, x, !some)];
            let mut buf = Vec::new();
            write_results(&mut buf, &rows).unwrap();
            let back = read_results(buf.as_slice()).unwrap();
            prop_assert_eq!(back, rows);
        }
    }
}
