//! Plain-text instance formats.
//!
//! Approval instances (`fvr 1`):
//!
//! ```text
//! fvr 1
//! m 4
//! n 3
//! 1 2
//! 1 3
//! 2 3
//! ```
//!
//! followed by optional `k <int>` and `t <int>` lines. Each voter line lists
//! strictly increasing 0-based candidate indices; an empty line is an empty
//! approval set.
//!
//! Ranked profiles (`fvr-ranked 1`) have the same header and one permutation
//! of `0..m` per voter, most preferred first.

use std::fmt;

use fvr_core::oracles::RankedProfile;
use fvr_core::Instance;

/// A parse failure at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn fail<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        column,
        message: message.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub k: Option<usize>,
    pub t: Option<usize>,
}

/// Lines of `text` without terminators; a final newline does not start an
/// extra line.
fn lines(text: &str) -> Vec<&str> {
    let mut lines: Vec<&str> = text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect();
    if text.ends_with('\n') {
        lines.pop();
    }
    lines
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let start = rest.find(|c: char| !c.is_whitespace())?;
        let tail = &rest[start..];
        let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
        let column = line[..offset + start].chars().count() + 1;
        let token = &tail[..len];
        offset += start + len;
        rest = &tail[len..];
        Some((column, token))
    })
}

fn parse_number(line_no: usize, column: usize, token: &str) -> Result<usize, FormatError> {
    token.parse().or_else(|_| {
        fail(
            line_no,
            column,
            format!("expected a nonnegative integer, found {token:?}"),
        )
    })
}

/// Parses `<key> <int>` on line `line_no` (1-based).
fn keyed(lines: &[&str], line_no: usize, key: &str) -> Result<usize, FormatError> {
    let Some(line) = lines.get(line_no - 1) else {
        return fail(line_no, 1, format!("missing `{key} <int>` line"));
    };
    let toks: Vec<(usize, &str)> = tokens(line).collect();
    match toks.as_slice() {
        [(_, k), (c, v)] if *k == key => parse_number(line_no, *c, v),
        [(c, k), ..] if *k != key => {
            fail(line_no, *c, format!("expected `{key} <int>`, found {k:?}"))
        }
        [_, _, (c, extra), ..] => fail(line_no, *c, format!("unexpected token {extra:?}")),
        _ => fail(line_no, 1, format!("expected `{key} <int>`")),
    }
}

fn header(lines: &[&str], magic: &str) -> Result<(usize, usize), FormatError> {
    match lines.first() {
        Some(l) if l.trim_end() == magic => {}
        Some(_) => return fail(1, 1, format!("expected header `{magic}`")),
        None => return fail(1, 1, "empty document"),
    }
    let m = keyed(lines, 2, "m")?;
    if m == 0 {
        return fail(2, 3, "need at least one candidate");
    }
    let n = keyed(lines, 3, "n")?;
    if n == 0 {
        return fail(3, 3, "need at least one voter");
    }
    if lines.len() < 3 + n {
        return fail(
            lines.len() + 1,
            1,
            format!("expected {n} voter lines, found {}", lines.len() - 3),
        );
    }
    Ok((m, n))
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, FormatError> {
    let lines = lines(text);
    let (m, n) = header(&lines, "fvr 1")?;
    let mut approvals = Vec::with_capacity(n);
    for i in 0..n {
        let line_no = 4 + i;
        let mut set: Vec<usize> = Vec::new();
        for (column, token) in tokens(lines[line_no - 1]) {
            let a = parse_number(line_no, column, token)?;
            if a >= m {
                return fail(
                    line_no,
                    column,
                    format!("candidate {a} out of range (m = {m})"),
                );
            }
            match set.last() {
                Some(&prev) if prev == a => {
                    return fail(line_no, column, format!("duplicate index {a}"))
                }
                Some(&prev) if prev > a => {
                    return fail(
                        line_no,
                        column,
                        format!("index {a} after {prev}: indices must increase"),
                    )
                }
                _ => set.push(a),
            }
        }
        approvals.push(set);
    }
    let (mut k, mut t) = (None, None);
    for (offset, line) in lines[3 + n..].iter().enumerate() {
        let line_no = 4 + n + offset;
        let Some((column, key)) = tokens(line).next() else {
            return fail(line_no, 1, "unexpected empty line after the voter lines");
        };
        let slot = match key {
            "k" => &mut k,
            "t" => &mut t,
            other => {
                return fail(
                    line_no,
                    column,
                    format!("expected `k <int>` or `t <int>`, found {other:?}"),
                )
            }
        };
        if slot.is_some() {
            return fail(line_no, column, format!("repeated `{key}` line"));
        }
        *slot = Some(keyed(&lines, line_no, key)?);
    }
    let instance = Instance::new(m, approvals).map_err(|e| FormatError {
        line: 1,
        column: 1,
        message: e.to_string(),
    })?;
    Ok(InstanceFile { instance, k, t })
}

/// Canonical text of an instance.
pub fn serialize_instance(inst: &Instance) -> String {
    serialize_instance_file(&InstanceFile {
        instance: inst.clone(),
        k: None,
        t: None,
    })
}

pub fn serialize_instance_file(file: &InstanceFile) -> String {
    let inst = &file.instance;
    let mut out = format!("fvr 1\nm {}\nn {}\n", inst.m(), inst.n());
    for set in inst.approvals() {
        out.push_str(&join(set));
        out.push('\n');
    }
    if let Some(k) = file.k {
        out.push_str(&format!("k {k}\n"));
    }
    if let Some(t) = file.t {
        out.push_str(&format!("t {t}\n"));
    }
    out
}

fn join(items: &[usize]) -> String {
    items
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_ranked(text: &str) -> Result<RankedProfile, FormatError> {
    let lines = lines(text);
    let (m, n) = header(&lines, "fvr-ranked 1")?;
    if lines.len() > 3 + n {
        return fail(4 + n, 1, format!("expected exactly {n} ranking lines"));
    }
    let mut rankings = Vec::with_capacity(n);
    for i in 0..n {
        let line_no = 4 + i;
        let mut seen = vec![false; m];
        let mut ranking = Vec::with_capacity(m);
        for (column, token) in tokens(lines[line_no - 1]) {
            let a = parse_number(line_no, column, token)?;
            if a >= m {
                return fail(
                    line_no,
                    column,
                    format!("candidate {a} out of range (m = {m})"),
                );
            }
            if std::mem::replace(&mut seen[a], true) {
                return fail(line_no, column, format!("candidate {a} ranked twice"));
            }
            ranking.push(a);
        }
        if ranking.len() != m {
            return fail(
                line_no,
                1,
                format!("ranking lists {} candidates, expected {m}", ranking.len()),
            );
        }
        rankings.push(ranking);
    }
    RankedProfile::new(m, rankings).map_err(|e| FormatError {
        line: 1,
        column: 1,
        message: e.to_string(),
    })
}

pub fn serialize_ranked(profile: &RankedProfile) -> String {
    let mut out = format!("fvr-ranked 1\nm {}\nn {}\n", profile.m(), profile.n());
    for ranking in profile.rankings() {
        out.push_str(&join(ranking));
        out.push('\n');
    }
    out
}

impl fmt::Display for InstanceFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_instance_file(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fvr_core::build_instance;

    const INTRO: &str = "fvr 1\nm 4\nn 3\n1 2\n1 3\n2 3\n";

    #[test]
    fn intro_round_trip() {
        let inst = build_instance(4, vec![vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap();
        assert_eq!(serialize_instance(&inst), INTRO);
        assert_eq!(parse_instance(INTRO).unwrap().instance, inst);
    }

    #[test]
    fn empty_line_is_empty_set() {
        let text = "fvr 1\nm 2\nn 2\n\n0 1\n";
        let file = parse_instance(text).unwrap();
        assert!(file.instance.approval_set(0).is_empty());
        assert_eq!(serialize_instance(&file.instance), text);
    }

    #[test]
    fn committee_parameters() {
        let text = "fvr 1\nm 4\nn 2\n0 1\n2 3\nk 2\nt 1\n";
        let file = parse_instance(text).unwrap();
        assert_eq!((file.k, file.t), (Some(2), Some(1)));
        assert_eq!(file.to_string(), text);
        assert_eq!(
            parse_instance("fvr 1\nm 4\nn 1\n0\nt 1\n").unwrap().t,
            Some(1)
        );
    }

    #[test]
    fn diagnostics_locate_errors() {
        let err = parse_instance("fvr 1\nm 3\nn 1\n0 0\n").unwrap_err();
        assert_eq!((err.line, err.column), (4, 3));
        assert!(err.message.contains("duplicate"));
        let err = parse_instance("fvr 1\nm 3\nn 1\n2 1\n").unwrap_err();
        assert_eq!((err.line, err.column), (4, 3));
        let err = parse_instance("fvr 1\nm 3\nn 1\n0 3\n").unwrap_err();
        assert!(err.message.contains("out of range"));
        let err = parse_instance("fvr 1\nm 3\nn 2\n0\n").unwrap_err();
        assert_eq!(err.line, 5);
        let err = parse_instance("fvr 2\nm 3\nn 1\n0\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = parse_instance("fvr 1\nm x\nn 1\n0\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
        let err = parse_instance("fvr 1\nm 3\nn 1\n0\nq 2\n").unwrap_err();
        assert_eq!(err.line, 5);
        let err = parse_instance("fvr 1\nm 3\nn 1\n0\n\n").unwrap_err();
        assert_eq!(err.line, 5);
    }

    #[test]
    fn ranked_round_trip_and_errors() {
        let text = "fvr-ranked 1\nm 3\nn 2\n0 1 2\n2 1 0\n";
        let p = parse_ranked(text).unwrap();
        assert_eq!(serialize_ranked(&p), text);
        let err = parse_ranked("fvr-ranked 1\nm 3\nn 1\n0 1 1\n").unwrap_err();
        assert_eq!((err.line, err.column), (4, 5));
        assert!(parse_ranked("fvr-ranked 1\nm 3\nn 1\n0 1\n").is_err());
        assert!(parse_ranked("fvr-ranked 1\nm 3\nn 1\n0 1 2\n0 1 2\n").is_err());
    }
}
