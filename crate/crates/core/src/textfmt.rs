//! Plain-text set format shared by every tool in the workspace.
//!
//! ```text
//! #window 0 10
//! 2-4
//! 7
//! ```
//!
//! The header gives the half-open window `[lo, hi)`. Each following line is
//! an integer `n` or an inclusive range `a-b`; lines are unioned, so
//! overlapping ranges are fine. Blank lines are ignored. The serializer
//! writes maximal runs in increasing order, one per line.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::window::WindowedSet;

pub fn parse_set_text(text: &str) -> Result<WindowedSet> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (hline, header) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or(Error::Parse { line: 1, msg: "missing '#window lo hi' header".into() })?;
    let mut set = parse_header(hline, header)?;

    for (line, tok) in lines {
        if tok.is_empty() {
            continue;
        }
        let (a, b) = parse_token(tok).ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected an integer or a range 'a-b', got '{tok}'"),
        })?;
        if a > b {
            return Err(Error::Parse { line, msg: format!("empty range {a}-{b}") });
        }
        for n in [a, b] {
            if !set.in_window(n) {
                return Err(Error::Parse {
                    line,
                    msg: format!("{n} outside window [{}, {})", set.lo(), set.hi()),
                });
            }
        }
        for n in a..=b {
            set.insert(n).expect("checked against window");
        }
    }
    Ok(set)
}

fn parse_header(line: usize, header: &str) -> Result<WindowedSet> {
    let bad = |msg: String| Error::Parse { line, msg };
    let mut parts = header.split_whitespace();
    if parts.next() != Some("#window") {
        return Err(bad(format!("expected '#window lo hi', got '{header}'")));
    }
    let mut bound = |name: &str| -> Result<i64> {
        let tok = parts.next().ok_or_else(|| bad(format!("header missing {name}")))?;
        tok.parse().map_err(|_| bad(format!("bad {name} '{tok}'")))
    };
    let lo = bound("lo")?;
    let hi = bound("hi")?;
    if parts.next().is_some() {
        return Err(bad("trailing tokens after '#window lo hi'".into()));
    }
    WindowedSet::empty(lo, hi).map_err(|e| bad(e.to_string()))
}

/// `n`, `-n`, `a-b`, `-a-b`, `-a--b`.
fn parse_token(tok: &str) -> Option<(i64, i64)> {
    if let Ok(n) = tok.parse::<i64>() {
        return Some((n, n));
    }
    // The separator is the first '-' that is not a leading sign.
    let sep = tok.char_indices().skip(1).find(|&(_, c)| c == '-')?.0;
    let a = tok[..sep].parse().ok()?;
    let b = tok[sep + 1..].parse().ok()?;
    Some((a, b))
}

pub fn serialize_set_text(set: &WindowedSet) -> String {
    let mut out = format!("#window {} {}\n", set.lo(), set.hi());
    for (a, b) in set.runs() {
        if a == b {
            writeln!(out, "{a}").unwrap();
        } else {
            writeln!(out, "{a}-{b}").unwrap();
        }
    }
    out
}

/// Reads a set file; I/O failures are reported as a parse error on line 0.
pub fn parse_set_file(path: impl AsRef<Path>) -> Result<WindowedSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("{}: {e}", path.display()),
    })?;
    parse_set_text(&text)
}

/// Short stable identifier of a set: the first 16 hex digits of the SHA-256
/// of its serialized text.
pub fn fingerprint(set: &WindowedSet) -> String {
    let digest = Sha256::digest(serialize_set_text(set).as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

pub fn serialize_set_file(path: impl AsRef<Path>, set: &WindowedSet) -> std::io::Result<()> {
    std::fs::write(path, serialize_set_text(set))
}
