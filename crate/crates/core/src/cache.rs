//! On-disk cache of enumerated norm balls.
//!
//! One file per entry-norm cap M, holding the full canonical enumeration:
//! a header `# norm_ball M=<M> version=<v>` followed by one `a b c d` line
//! per element in sorted order. Reads validate unimodularity, the norm cap,
//! and ordering, so a stale or corrupted file is recomputed rather than
//! trusted.

use crate::error::{Error, Result};
use crate::group::{enumerate_norm_ball, GroupElement};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

pub const CACHE_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn cache_file_name(m: i128) -> String {
    format!("norm_ball_{m}.txt")
}

/// Writes the enumeration for cap m; returns the file path.
pub fn write_norm_ball(dir: &Path, m: i128, elements: &[GroupElement]) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(cache_file_name(m));
    let mut w = BufWriter::new(fs::File::create(&path)?);
    writeln!(w, "# norm_ball M={m} version={CACHE_VERSION}")?;
    for g in elements {
        writeln!(w, "{} {} {} {}", g.a, g.b, g.c, g.d)?;
    }
    w.flush()?;
    Ok(path)
}

/// Reads and fully validates a cache file: (cap, version, elements).
pub fn read_norm_ball(path: &Path) -> Result<(i128, String, Vec<GroupElement>)> {
    let mut lines = BufReader::new(fs::File::open(path)?).lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty cache file".into()))??;
    let rest = header
        .strip_prefix("# norm_ball M=")
        .ok_or_else(|| Error::Parse(format!("bad cache header '{header}'")))?;
    let (m_str, version) = rest
        .split_once(" version=")
        .ok_or_else(|| Error::Parse(format!("bad cache header '{header}'")))?;
    let m: i128 =
        m_str.parse().map_err(|_| Error::Parse(format!("bad cache cap '{m_str}'")))?;
    let mut elements = Vec::new();
    for line in lines {
        let line = line?;
        let mut nums = line.split_whitespace().map(str::parse::<i64>);
        let mut next = || {
            nums.next()
                .ok_or_else(|| Error::Parse(format!("short cache row '{line}'")))?
                .map_err(|_| Error::Parse(format!("bad cache row '{line}'")))
        };
        let g = GroupElement::new(next()?, next()?, next()?, next()?)?;
        if nums.next().is_some() {
            return Err(Error::Parse(format!("trailing data in cache row '{line}'")));
        }
        if g.frobenius_norm_sq() > m {
            return Err(Error::Parse(format!("cache row {g} exceeds the cap {m}")));
        }
        elements.push(g);
    }
    if !elements.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Parse("cache rows out of order".into()));
    }
    Ok((m, version.to_string(), elements))
}

/// Returns the cached enumeration for cap m, recomputing and rewriting the
/// file whenever it is missing, stale, or fails validation.
pub fn load_or_compute(dir: &Path, m: i128) -> Result<Vec<GroupElement>> {
    let path = dir.join(cache_file_name(m));
    if path.exists() {
        match read_norm_ball(&path) {
            Ok((cap, version, elements)) if cap == m && version == CACHE_VERSION => {
                return Ok(elements)
            }
            _ => {}
        }
    }
    let elements = enumerate_norm_ball(m)?;
    write_norm_ball(dir, m, &elements)?;
    Ok(elements)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_validation() {
        let dir = tempfile::tempdir().unwrap();
        let ball = enumerate_norm_ball(50).unwrap();
        let path = write_norm_ball(dir.path(), 50, &ball).unwrap();
        let (m, version, back) = read_norm_ball(&path).unwrap();
        assert_eq!(m, 50);
        assert_eq!(version, CACHE_VERSION);
        assert_eq!(back, ball);

        // loading reuses the file; a corrupted file is recomputed
        assert_eq!(load_or_compute(dir.path(), 50).unwrap(), ball);
        fs::write(&path, "# norm_ball M=50 version=0.0.0\n9 9 9 9\n").unwrap();
        assert_eq!(load_or_compute(dir.path(), 50).unwrap(), ball);
        assert_eq!(read_norm_ball(&path).unwrap().2, ball);
    }

    #[test]
    fn read_rejects_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let ball = enumerate_norm_ball(10).unwrap();
        let path = write_norm_ball(dir.path(), 10, &ball).unwrap();

        let cases = [
            "norm_ball M=10 version=1\n1 0 0 1\n",
            "# norm_ball M=10\n1 0 0 1\n",
            "# norm_ball M=10 version=1\n1 0 0\n",
            "# norm_ball M=10 version=1\n2 0 0 1\n",
            "# norm_ball M=10 version=1\n1 1 1 2\n1 0 0 1\n",
            "# norm_ball M=10 version=1\n5 2 2 1\n",
        ];
        for text in cases {
            fs::write(&path, text).unwrap();
            assert!(read_norm_ball(&path).is_err(), "accepted {text:?}");
        }
    }
}
