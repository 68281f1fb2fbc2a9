//! `.dg` text format and the JSON alternative.
//!
//! ```text
//! # comment
//! n 3
//! d 0 1
//! d 1 2
//! d 2 0
//! ```

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::digraph::{Dart, Digraph};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct DigraphJson {
    n: usize,
    darts: Vec<[usize; 2]>,
}

pub fn parse_dg(text: &str) -> Result<Digraph> {
    let mut n: Option<usize> = None;
    let mut darts = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let tag = parts.next().unwrap();
        let nums: Vec<usize> = parts
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|e| Error::Parse { line: lineno, msg: format!("{p:?}: {e}") })
            })
            .collect::<Result<_>>()?;
        match (tag, n, nums.as_slice()) {
            ("n", None, [count]) => n = Some(*count),
            ("n", Some(_), _) => {
                return Err(Error::Parse { line: lineno, msg: "repeated order line".into() })
            }
            ("d", Some(_), [u, v]) => darts.push(Dart::new(*u, *v)),
            ("d", None, _) => {
                return Err(Error::Parse { line: lineno, msg: "dart before order line".into() })
            }
            _ => return Err(Error::Parse { line: lineno, msg: format!("malformed line {line:?}") }),
        }
    }
    let n = n.ok_or(Error::Parse { line: 0, msg: "missing order line".into() })?;
    Digraph::new(n, darts)
}

pub fn to_dg(g: &Digraph) -> String {
    let mut s = String::with_capacity(16 + 12 * g.dart_count());
    writeln!(s, "n {}", g.n()).unwrap();
    for d in g.darts() {
        writeln!(s, "d {} {}", d.tail, d.head).unwrap();
    }
    s
}

pub fn parse_json(text: &str) -> Result<Digraph> {
    let j: DigraphJson = serde_json::from_str(text)?;
    Digraph::new(j.n, j.darts.iter().map(|&[u, v]| Dart::new(u, v)))
}

pub fn to_json(g: &Digraph) -> String {
    let j = DigraphJson { n: g.n(), darts: g.darts().iter().map(|d| [d.tail, d.head]).collect() };
    serde_json::to_string(&j).expect("digraph json")
}

/// Parses either format; JSON is recognised by a leading `{`.
pub fn parse_any(text: &str) -> Result<Digraph> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_dg(text)
    }
}

pub fn read_digraph(path: impl AsRef<Path>) -> Result<Digraph> {
    parse_any(&std::fs::read_to_string(path)?)
}

/// Writes JSON when the extension is `.json`, `.dg` text otherwise.
pub fn write_digraph(path: impl AsRef<Path>, g: &Digraph) -> Result<()> {
    let path = path.as_ref();
    let body = if path.extension().is_some_and(|e| e == "json") { to_json(g) } else { to_dg(g) };
    std::fs::write(path, body)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::dcyc;

    #[test]
    fn parses_text_with_comments() {
        let g = parse_dg("# directed triangle\nn 3\n\nd 0 1\nd 1 2\n  d 2 0\n").unwrap();
        assert_eq!(g.dart_count(), 3);
        assert!(g.has_dart(2, 0));
    }

    #[test]
    fn text_and_json_agree() {
        let g = dcyc(5).unwrap();
        assert_eq!(parse_dg(&to_dg(&g)).unwrap(), g);
        assert_eq!(parse_json(&to_json(&g)).unwrap(), g);
        assert_eq!(parse_any(&to_json(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_dg("n 2\nd 0 0\n"), Err(Error::Loop(0))));
        assert!(matches!(parse_dg("n 2\nd 0 1\nd 0 1\n"), Err(Error::DuplicateDart(0, 1))));
        assert!(matches!(parse_dg("d 0 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_dg("n 2\nd 0 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_dg("# nothing\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_json(r#"{"n":2,"darts":[[1,1]]}"#), Err(Error::Loop(1))));
        assert!(matches!(
            parse_json(r#"{"n":2,"darts":[[0,1],[0,1]]}"#),
            Err(Error::DuplicateDart(0, 1))
        ));
    }
}
