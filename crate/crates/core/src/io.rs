//! Plain-text file formats for codes and partitions.
//!
//! Code files:
//!
//! ```text
//! # optional comments
//! n=16
//! 0000
//! 001e
//! ...
//! ```
//!
//! One word per line as zero-padded lowercase hex of the word's bitmask
//! (bit `i` of the mask is coordinate `i`). `#` starts a comment, anywhere
//! on a line; blank lines are ignored.
//!
//! Partition files use the same lexical rules with a `n=8` header and eight
//! sections `C0:` .. `C7:`, each followed by its sixteen two-digit words.
//! Classes are re-canonicalized on read (sorted by least word), so a file's
//! section order never changes which class an index refers to.

use crate::bitcode::{hex_width, Code, Word};
use crate::error::{Error, Result};
use crate::partitions::ExtendedPartition;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

/// Writes `text` to `path` atomically (temp file in the same directory, then
/// rename), creating parent directories as needed.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| io_err(path, e))?;
        }
    }
    let tmp = path.with_extension("tmp~");
    fs::write(&tmp, text).map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))
}

/// Strips comments and whitespace, yielding `(line_number, content)` for the
/// lines that carry content.
fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            None
        } else {
            Some((i + 1, body))
        }
    })
}

fn parse_header(path: &Path, line: usize, body: &str) -> Result<usize> {
    let rest = body
        .strip_prefix("n=")
        .ok_or_else(|| parse_err(path, line, format!("expected `n=<len>` header, got `{body}`")))?;
    let len: usize = rest
        .trim()
        .parse()
        .map_err(|_| parse_err(path, line, format!("bad length `{rest}`")))?;
    if len == 0 || len > 16 {
        return Err(parse_err(path, line, format!("unsupported length {len}")));
    }
    Ok(len)
}

/// Reads a code file.
pub fn read_code(path: &Path) -> Result<Code> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut lines = significant_lines(&text);
    let (hline, hbody) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let len = parse_header(path, hline, hbody)?;
    let mut masks = Vec::new();
    for (lineno, body) in lines {
        let w = Word::parse_hex(body, len).map_err(|_| {
            parse_err(
                path,
                lineno,
                format!(
                    "expected a {}-digit hex word for length {len}, got `{body}`",
                    hex_width(len)
                ),
            )
        })?;
        masks.push(w.bits());
    }
    if masks.is_empty() {
        return Err(parse_err(path, hline, "code file has no words"));
    }
    Code::from_masks(masks, len)
}

/// Renders a code in the file format, with optional leading comment lines.
pub fn render_code(code: &Code, comments: &[&str]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "n={}", code.len());
    for w in code.words() {
        let _ = writeln!(out, "{w}");
    }
    out
}

/// Writes a code file atomically.
pub fn write_code(path: &Path, code: &Code, comments: &[&str]) -> Result<()> {
    write_text(path, &render_code(code, comments))
}

/// Reads a partition file.
pub fn read_partition(path: &Path) -> Result<ExtendedPartition> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut lines = significant_lines(&text);
    let (hline, hbody) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let len = parse_header(path, hline, hbody)?;
    if len != 8 {
        return Err(parse_err(
            path,
            hline,
            format!("partition files have length 8, got {len}"),
        ));
    }

    let mut classes: Vec<Code> = Vec::new();
    let mut current: Option<(usize, Vec<u16>)> = None;
    let flush = |current: &mut Option<(usize, Vec<u16>)>, classes: &mut Vec<Code>| -> Result<()> {
        if let Some((lineno, masks)) = current.take() {
            if masks.len() != 16 {
                return Err(parse_err(
                    path,
                    lineno,
                    format!("class has {} words, expected 16", masks.len()),
                ));
            }
            classes.push(Code::from_masks(masks, 8)?);
        }
        Ok(())
    };

    for (lineno, body) in lines {
        if let Some(rest) = body.strip_prefix('C') {
            if let Some(idx) = rest.strip_suffix(':') {
                let idx: usize = idx
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(path, lineno, format!("bad class header `{body}`")))?;
                if idx != classes.len() + usize::from(current.is_some()) {
                    return Err(parse_err(
                        path,
                        lineno,
                        format!("class headers must run C0..C7 in order, got C{idx}"),
                    ));
                }
                flush(&mut current, &mut classes)?;
                current = Some((lineno, Vec::new()));
                continue;
            }
        }
        match current.as_mut() {
            None => {
                return Err(parse_err(path, lineno, "word before any `C<i>:` header"));
            }
            Some((_, masks)) => {
                let w = Word::parse_hex(body, 8).map_err(|_| {
                    parse_err(path, lineno, format!("expected a 2-digit hex word, got `{body}`"))
                })?;
                masks.push(w.bits());
            }
        }
    }
    flush(&mut current, &mut classes)?;
    ExtendedPartition::from_classes(classes)
}

/// Renders a partition in the file format.
pub fn render_partition(p: &ExtendedPartition, comments: &[&str]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "n=8");
    for (i, class) in p.classes().iter().enumerate() {
        let _ = writeln!(out, "C{i}:");
        for w in class.words() {
            let _ = writeln!(out, "{w}");
        }
    }
    out
}

/// Writes a partition file atomically.
pub fn write_partition(path: &Path, p: &ExtendedPartition, comments: &[&str]) -> Result<()> {
    write_text(path, &render_partition(p, comments))
}

/// The paths of files in `dir` with the given extension, sorted by name for
/// reproducible traversal order.
pub fn sorted_files(dir: &Path, extension: &str) -> Result<Vec<std::path::PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| io_err(dir, e))? {
        let entry = entry.map_err(|e| io_err(dir, e))?;
        let path = entry.path();
        if path.extension().and_then(|e| e.to_str()) == Some(extension) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}
