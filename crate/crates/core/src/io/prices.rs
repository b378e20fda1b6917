use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceRecord {
    /// 1-based data row number.
    pub ordinal: usize,
    pub price: f64,
}

/// Loads the named price column of a headed CSV file.
///
/// Row numbers in errors count data rows from 1, excluding the header.
pub fn load_price_csv(path: &Path, column: &str) -> Result<Vec<PriceRecord>> {
    let file = File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    read_price_csv(file, column)
}

pub fn read_price_csv<R: Read>(input: R, column: &str) -> Result<Vec<PriceRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers().map_err(|e| parse_err(0, e))?.clone();
    let idx = headers
        .iter()
        .position(|h| h.eq_ignore_ascii_case(column))
        .ok_or_else(|| Error::Parse {
            row: 0,
            msg: format!("no column `{column}` in header {:?}", headers.iter().collect::<Vec<_>>()),
        })?;

    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| parse_err(row, e))?;
        let cell = record.get(idx).unwrap_or("");
        if cell.is_empty() {
            return Err(Error::Parse {
                row,
                msg: format!("empty `{column}` cell"),
            });
        }
        let price: f64 = cell.parse().map_err(|_| Error::Parse {
            row,
            msg: format!("`{cell}` is not a number"),
        })?;
        if !price.is_finite() {
            return Err(Error::Parse {
                row,
                msg: format!("price `{cell}` is not finite"),
            });
        }
        out.push(PriceRecord { ordinal: row, price });
    }
    if out.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok(out)
}

fn parse_err(row: usize, e: csv::Error) -> Error {
    Error::Parse {
        row,
        msg: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prices(r: &[PriceRecord]) -> Vec<f64> {
        r.iter().map(|p| p.price).collect()
    }

    #[test]
    fn three_rows() {
        let r = read_price_csv("date,price\n1,100\n2,101\n3,99.5".as_bytes(), "price").unwrap();
        assert_eq!(prices(&r), [100.0, 101.0, 99.5]);
        assert_eq!(r.iter().map(|p| p.ordinal).collect::<Vec<_>>(), [1, 2, 3]);
    }

    #[test]
    fn crlf_line_endings() {
        let r = read_price_csv("date,price\r\n1,100\r\n2,101\r\n".as_bytes(), "price").unwrap();
        assert_eq!(prices(&r), [100.0, 101.0]);
    }

    #[test]
    fn non_numeric_cell_reports_its_row() {
        let e = read_price_csv("date,price\n1,100\n2,abc\n3,99".as_bytes(), "price").unwrap_err();
        assert!(matches!(e, Error::Parse { row: 2, .. }), "{e:?}");
    }

    #[test]
    fn empty_cell_reports_its_row() {
        let e = read_price_csv("date,price\n1,100\n2,101\n3,\n".as_bytes(), "price").unwrap_err();
        assert!(matches!(e, Error::Parse { row: 3, .. }), "{e:?}");
    }

    #[test]
    fn header_only_is_empty() {
        assert!(matches!(
            read_price_csv("date,price\n".as_bytes(), "price"),
            Err(Error::EmptySeries)
        ));
    }

    #[test]
    fn unknown_column() {
        assert!(matches!(
            read_price_csv("date,close\n1,2\n".as_bytes(), "price"),
            Err(Error::Parse { row: 0, .. })
        ));
    }

    #[test]
    fn missing_file() {
        let p = Path::new("/definitely/not/here.csv");
        assert!(matches!(load_price_csv(p, "price"), Err(Error::FileNotFound(_))));
    }
}
