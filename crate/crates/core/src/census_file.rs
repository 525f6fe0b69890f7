//! Text serialization of censuses.
//!
//! ```text
//! MCENSUS 1 n=4 r=2 mode=unlabeled
//! 1,2;1,3;1,4;2,3;2,4;3,4
//! ```
//!
//! Each body line lists the bases of one matroid as ascending element lists
//! joined by `;`, sorted lexicographically. A rank-0 matroid has the single
//! empty basis and therefore an empty line. Lines are sorted by canonical key,
//! with the basis list as tie-breaker in labeled mode. Lines end in LF.

use std::cmp::Ordering;

use num_bigint::BigUint;

use crate::enumerate::{labeled_total, Census, CensusMode};
use crate::error::{Error, Result};
use crate::matroid::{check_exchange, CanonicalKey, Matroid, SubsetMask};

pub const MAGIC: &str = "MCENSUS";
pub const VERSION: u32 = 1;

/// Bases of `m` as element lists in lexicographic order.
fn element_lists(m: &Matroid) -> Vec<Vec<usize>> {
    let mut lists: Vec<Vec<usize>> = m.bases().iter().map(|b| b.elements().collect()).collect();
    lists.sort();
    lists
}

/// One body line.
pub fn format_matroid(m: &Matroid) -> String {
    element_lists(m)
        .iter()
        .map(|b| b.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

fn sort_key(m: &Matroid, mode: CensusMode) -> Result<(CanonicalKey, Vec<SubsetMask>)> {
    let key = m.canonical_key()?;
    Ok(match mode {
        CensusMode::Unlabeled => (key, Vec::new()),
        CensusMode::Labeled => (key, m.bases().to_vec()),
    })
}

pub fn serialize_census(c: &Census) -> Result<Vec<u8>> {
    let mut keyed = c
        .items
        .iter()
        .map(|m| Ok((sort_key(m, c.mode)?, m)))
        .collect::<Result<Vec<_>>>()?;
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = format!("{MAGIC} {VERSION} n={} r={} mode={}\n", c.n, c.r, c.mode.as_str());
    for (_, m) in keyed {
        out.push_str(&format_matroid(m));
        out.push('\n');
    }
    Ok(out.into_bytes())
}

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

fn parse_header(line: &str) -> std::result::Result<(usize, usize, CensusMode), String> {
    let fields: Vec<&str> = line.split(' ').collect();
    let [magic, version, n, r, mode] = fields.as_slice() else {
        return Err(format!("expected `{MAGIC} {VERSION} n=<n> r=<r> mode=<mode>`"));
    };
    if *magic != MAGIC {
        return Err(format!("expected format tag {MAGIC}"));
    }
    if *version != VERSION.to_string() {
        return Err(format!("unsupported version {version}"));
    }
    let num = |field: &str, name: &str| -> std::result::Result<usize, String> {
        field
            .strip_prefix(name)
            .and_then(|v| v.strip_prefix('='))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| format!("expected {name}=<integer>, found `{field}`"))
    };
    let n = num(n, "n")?;
    let r = num(r, "r")?;
    let mode = match *mode {
        "mode=unlabeled" => CensusMode::Unlabeled,
        "mode=labeled" => CensusMode::Labeled,
        other => return Err(format!("expected mode=labeled or mode=unlabeled, found `{other}`")),
    };
    if r > n || n > SubsetMask::WIDTH {
        return Err(format!("invalid parameters n={n}, r={r}"));
    }
    Ok((n, r, mode))
}

fn parse_line(line: &str, n: usize, r: usize) -> std::result::Result<Matroid, String> {
    let mut lists: Vec<Vec<usize>> = Vec::new();
    for basis in line.split(';') {
        let elems: Vec<usize> = if basis.is_empty() {
            Vec::new()
        } else {
            basis
                .split(',')
                .map(|e| match e.parse::<usize>() {
                    Ok(v) if (1..=n).contains(&v) && !e.starts_with('0') => Ok(v),
                    _ => Err(format!("bad element `{e}`")),
                })
                .collect::<std::result::Result<_, _>>()?
        };
        if elems.windows(2).any(|w| w[0] >= w[1]) {
            return Err(format!("basis `{basis}` is not strictly ascending"));
        }
        if elems.len() != r {
            return Err(format!("basis `{basis}` does not have {r} elements"));
        }
        if let Some(prev) = lists.last() {
            if *prev >= elems {
                return Err(format!("bases are not in sorted order at `{basis}`"));
            }
        }
        lists.push(elems);
    }
    let masks: Vec<SubsetMask> = lists
        .iter()
        .map(|l| SubsetMask::from_elements(l.iter().copied()).map_err(|e| e.to_string()))
        .collect::<std::result::Result<_, _>>()?;
    if !check_exchange(n, &masks).map_err(|e| e.to_string())? {
        return Err("basis family violates the exchange axiom".into());
    }
    Matroid::new(n, masks).map_err(|e| e.to_string())
}

pub fn parse_census(bytes: &[u8]) -> Result<Census> {
    if let Some(pos) = bytes.iter().position(|b| !b.is_ascii() || *b == b'\r') {
        return Err(parse_err(pos, "non-ASCII byte or CR in census file"));
    }
    let text = std::str::from_utf8(bytes).map_err(|e| parse_err(e.valid_up_to(), "invalid text"))?;
    if !text.ends_with('\n') {
        return Err(parse_err(text.len(), "missing final newline"));
    }
    let mut offset = 0;
    let mut lines = text[..text.len() - 1].split('\n').map(|l| {
        let start = offset;
        offset += l.len() + 1;
        (start, l)
    });
    let (_, header) = lines.next().unwrap_or((0, ""));
    let (n, r, mode) = parse_header(header).map_err(|m| parse_err(0, m))?;
    let mut items = Vec::new();
    let mut prev: Option<(CanonicalKey, Vec<SubsetMask>)> = None;
    for (start, line) in lines {
        let m = parse_line(line, n, r).map_err(|msg| parse_err(start, msg))?;
        if mode == CensusMode::Unlabeled && !m.is_canonical()? {
            return Err(parse_err(start, "matroid is not in canonical form"));
        }
        let key = sort_key(&m, mode)?;
        if let Some(p) = &prev {
            match p.cmp(&key) {
                Ordering::Less => {}
                Ordering::Equal => return Err(parse_err(start, "duplicate matroid")),
                Ordering::Greater => return Err(parse_err(start, "lines are not sorted")),
            }
        }
        prev = Some(key);
        items.push(m);
    }
    let labeled_count = match mode {
        CensusMode::Unlabeled => labeled_total(&items)?,
        CensusMode::Labeled => BigUint::from(items.len()),
    };
    Ok(Census {
        n,
        r,
        mode,
        items,
        labeled_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{enumerate_matroids, EnumOptions};

    #[test]
    fn u24_line() {
        let m = Matroid::uniform(2, 4).unwrap();
        assert_eq!(format_matroid(&m), "1,2;1,3;1,4;2,3;2,4;3,4");
    }

    #[test]
    fn header_and_round_trip() {
        let c = enumerate_matroids(4, 2, EnumOptions::default()).unwrap();
        let bytes = serialize_census(&c).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.starts_with("MCENSUS 1 n=4 r=2 mode=unlabeled\n"));
        assert_eq!(parse_census(&bytes).unwrap(), c);
        let l = c.to_labeled().unwrap();
        let lb = serialize_census(&l).unwrap();
        assert_eq!(parse_census(&lb).unwrap(), l);
    }

    #[test]
    fn rank_zero_census() {
        let c = enumerate_matroids(3, 0, EnumOptions::default()).unwrap();
        let bytes = serialize_census(&c).unwrap();
        assert_eq!(bytes, b"MCENSUS 1 n=3 r=0 mode=unlabeled\n\n");
        assert_eq!(parse_census(&bytes).unwrap(), c);
    }

    #[test]
    fn tampering_is_reported_with_offset() {
        let bad = b"MCENSUS 1 n=4 r=2 mode=labeled\n1,3;1,2\n";
        match parse_census(bad) {
            Err(Error::Parse { offset, message }) => {
                assert_eq!(offset, 31);
                assert!(message.contains("sorted"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_census(b"MCENSUS 2 n=4 r=2 mode=labeled\n"), Err(Error::Parse { offset: 0, .. })));
        assert!(parse_census(b"MCENSUS 1 n=4 r=2 mode=labeled\n1,2;3,4\n").is_err());
        assert!(parse_census(b"MCENSUS 1 n=4 r=2 mode=labeled").is_err());
        // Not canonical: {1,2} is the only basis, but the canonical form uses {3,4}.
        assert!(parse_census(b"MCENSUS 1 n=4 r=2 mode=unlabeled\n1,2\n").is_err());
    }
}
