use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Writes `contents` to a sibling temporary file and renames it over `path`,
/// so readers never see a half-written file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let name = path.file_name().ok_or_else(|| Error::Io(format!("{} is not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// `# key = value` comment lines placed above CSV data.
pub fn comment_header(pairs: &[(String, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("# {k} = {v}\n")).collect()
}

/// Reads the `# key = value` comment lines at the top of a CSV file.
pub fn read_comment_header(text: &str) -> Vec<(String, String)> {
    text.lines()
        .map_while(|l| l.strip_prefix('#'))
        .filter_map(|l| l.split_once('=').map(|(k, v)| (k.trim().to_string(), v.trim().to_string())))
        .collect()
}

/// First column of a CSV file as numbers; `#` lines are skipped and a
/// non-numeric first row is taken as a header.
pub fn read_series(path: &Path) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(csv_error)?;
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(csv_error)?;
        let field = record.get(0).unwrap_or("");
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => out.push(v),
            _ if i == 0 => {}
            _ => return Err(Error::Io(format!("{}: row {} is not a finite number: `{field}`", path.display(), i + 1))),
        }
    }
    if out.is_empty() {
        return Err(Error::Io(format!("{} holds no observations", path.display())));
    }
    Ok(out)
}

/// Single-column CSV with a header cell `name` below the comment lines.
pub fn write_series(path: &Path, name: &str, series: &[f64], header: &[(String, String)]) -> Result<()> {
    let mut buf = comment_header(header).into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record([name]).map_err(csv_error)?;
        for x in series {
            w.write_record([x.to_string()]).map_err(csv_error)?;
        }
        w.flush()?;
    }
    write_atomic(path, &buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub/x.csv");
        let xs = vec![0.1, -2.5e-17, 3.0, f64::MAX];
        let header = vec![("seed".to_string(), "4".to_string())];
        write_series(&path, "x", &xs, &header).unwrap();
        assert_eq!(read_series(&path).unwrap(), xs);
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(read_comment_header(&text), header);
        assert!(!dir.path().join("sub/.x.csv.tmp").exists());
    }

    #[test]
    fn headerless_and_bad_files() {
        let dir = tempfile::tempdir().unwrap();
        let plain = dir.path().join("plain.csv");
        fs::write(&plain, "1.5,9\n2\n").unwrap();
        assert_eq!(read_series(&plain).unwrap(), vec![1.5, 2.0]);
        let bad = dir.path().join("bad.csv");
        fs::write(&bad, "x\n1\nNaN\n").unwrap();
        assert!(read_series(&bad).is_err());
        let empty = dir.path().join("empty.csv");
        fs::write(&empty, "x\n").unwrap();
        assert!(read_series(&empty).is_err());
        assert!(read_series(&dir.path().join("missing.csv")).is_err());
    }
}
