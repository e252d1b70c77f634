//! Text formats for systems and colourings.
//!
//! `.star` files:
//!
//! ```text
//! # comment
//! 9 3
//! 1: 3 5 6
//! 2: 1 3 6
//! ```
//!
//! Line 1 is `n e`, then one line per block, `root: p1 p2 ... pe`.
//! `#` starts a comment line and blank lines are ignored.
//!
//! `.cstar` files carry a colouring: each block line becomes
//! `label | root: p1 ... pe`, and class membership is by shared label.
//! Classes are ordered by first appearance.
//!
//! Several systems can share one stream, separated by `---` lines.
//!
//! The parsers enforce syntax only; semantic problems (wrong pendant
//! count, out-of-range vertices, bad decompositions) are left for
//! [`verify_system`](crate::verify_system) to report.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::design::{ColourClass, ColouredStarSystem, Star, StarSystem, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: expected header `n e`, got {text:?}")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: cannot parse {text:?} as a vertex id")]
    BadNumber { line: usize, text: String },
    #[error("line {line}: expected `root: p1 p2 ...`, got {text:?}")]
    BadBlock { line: usize, text: String },
    #[error("line {line}: empty class label")]
    EmptyLabel { line: usize },
    #[error("line {line}: block line carries a class label, but this is a plain system file")]
    UnexpectedLabel { line: usize },
    #[error("line {line}: block line is missing a class label")]
    MissingLabel { line: usize },
    #[error("no header line found")]
    Empty,
}

/// A parsed file of either kind, for format auto-detection.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedFile {
    Plain(StarSystem),
    Coloured(ColouredStarSystem),
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_vertex(line: usize, token: &str) -> Result<Vertex, FormatError> {
    token
        .parse()
        .map_err(|_| FormatError::BadNumber { line, text: token.to_string() })
}

fn parse_header(line: usize, text: &str) -> Result<(u32, u32), FormatError> {
    let mut it = text.split_ascii_whitespace();
    match (it.next(), it.next(), it.next()) {
        (Some(n), Some(e), None) => Ok((parse_vertex(line, n)?, parse_vertex(line, e)?)),
        _ => Err(FormatError::BadHeader { line, text: text.to_string() }),
    }
}

/// Parses `root: p1 p2 ...` into a block.
fn parse_block(line: usize, text: &str) -> Result<Star, FormatError> {
    let bad = || FormatError::BadBlock { line, text: text.to_string() };
    let (root, rest) = text.split_once(':').ok_or_else(bad)?;
    let root = parse_vertex(line, root.trim())?;
    let pendants = rest
        .split_ascii_whitespace()
        .map(|t| parse_vertex(line, t))
        .collect::<Result<Vec<_>, _>>()?;
    if pendants.is_empty() {
        return Err(bad());
    }
    Ok(Star::new(root, pendants))
}

/// Parses a `.star` document.
pub fn parse_system(text: &str) -> Result<StarSystem, FormatError> {
    let mut lines = content_lines(text);
    let (lno, header) = lines.next().ok_or(FormatError::Empty)?;
    let (n, e) = parse_header(lno, header)?;
    let mut blocks = Vec::new();
    for (lno, line) in lines {
        if line.contains('|') {
            return Err(FormatError::UnexpectedLabel { line: lno });
        }
        blocks.push(parse_block(lno, line)?);
    }
    Ok(StarSystem::new(n, e, blocks))
}

/// Parses a `.cstar` document. Classes are ordered by first appearance.
pub fn parse_coloured(text: &str) -> Result<ColouredStarSystem, FormatError> {
    let mut lines = content_lines(text);
    let (lno, header) = lines.next().ok_or(FormatError::Empty)?;
    let (n, e) = parse_header(lno, header)?;

    let mut blocks = Vec::new();
    let mut classes: Vec<ColourClass> = Vec::new();
    for (lno, line) in lines {
        let (label, rest) = line.split_once('|').ok_or(FormatError::MissingLabel { line: lno })?;
        let label = label.trim();
        if label.is_empty() {
            return Err(FormatError::EmptyLabel { line: lno });
        }
        let index = blocks.len();
        blocks.push(parse_block(lno, rest.trim())?);
        match classes.iter_mut().find(|c| c.label == label) {
            Some(class) => {
                class.members.insert(index);
            }
            None => classes.push(ColourClass {
                label: label.to_string(),
                members: BTreeSet::from([index]),
            }),
        }
    }
    Ok(ColouredStarSystem { system: StarSystem::new(n, e, blocks), classes })
}

/// Auto-detects the format: any `|` on a block line means `.cstar`.
pub fn parse_auto(text: &str) -> Result<ParsedFile, FormatError> {
    let coloured = content_lines(text).skip(1).any(|(_, l)| l.contains('|'));
    if coloured {
        Ok(ParsedFile::Coloured(parse_coloured(text)?))
    } else {
        Ok(ParsedFile::Plain(parse_system(text)?))
    }
}

pub fn write_system(sys: &StarSystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", sys.n, sys.e);
    for block in &sys.blocks {
        let _ = writeln!(out, "{block}");
    }
    out
}

/// Writes a `.cstar` document; block lines appear in block order, each
/// tagged with its class label.
pub fn write_coloured(col: &ColouredStarSystem) -> String {
    let sys = &col.system;
    let mut label_of: Vec<&str> = vec![""; sys.blocks.len()];
    for class in &col.classes {
        for &m in &class.members {
            if let Some(slot) = label_of.get_mut(m) {
                *slot = &class.label;
            }
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", sys.n, sys.e);
    for (block, label) in sys.blocks.iter().zip(&label_of) {
        let _ = writeln!(out, "{label} | {block}");
    }
    out
}

/// Parses a stream of `---`-separated `.star` documents.
pub fn parse_system_stream(text: &str) -> Result<Vec<StarSystem>, FormatError> {
    text.split("---")
        .filter(|chunk| content_lines(chunk).next().is_some())
        .map(parse_system)
        .collect()
}

pub fn write_system_stream(systems: &[StarSystem]) -> String {
    let mut out = String::new();
    for (i, sys) in systems.iter().enumerate() {
        if i > 0 {
            out.push_str("---\n");
        }
        out.push_str(&write_system(sys));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::verify_colouring;

    const SAMPLE: &str = "\
# a 3-star system of order 6
6 3

1: 3 5 6
2: 1 3 6
4: 1 2 3
5: 2 3 4
6: 3 4 5
";

    #[test]
    fn parses_and_round_trips_plain() {
        let sys = parse_system(SAMPLE).unwrap();
        assert_eq!(sys.n, 6);
        assert_eq!(sys.e, 3);
        assert_eq!(sys.blocks.len(), 5);
        assert_eq!(sys.blocks[2], Star::new(4, vec![1, 2, 3]));
        let again = parse_system(&write_system(&sys)).unwrap();
        assert_eq!(sys, again);
    }

    #[test]
    fn parses_and_round_trips_coloured() {
        let text = "\
6 3
a | 1: 3 5 6
b | 2: 1 3 6
a | 4: 1 2 3
c | 5: 2 3 4
c | 6: 3 4 5
";
        let col = parse_coloured(text).unwrap();
        assert_eq!(col.classes.len(), 3);
        assert_eq!(col.classes[0].label, "a");
        assert_eq!(col.classes[0].members, BTreeSet::from([0, 2]));
        // Not a legal colouring (a's blocks intersect), but it parses fine.
        assert!(verify_colouring(&col).is_err());
        let again = parse_coloured(&write_coloured(&col)).unwrap();
        assert_eq!(col, again);
    }

    #[test]
    fn detects_format() {
        assert!(matches!(parse_auto(SAMPLE), Ok(ParsedFile::Plain(_))));
        assert!(matches!(
            parse_auto("6 3\nx | 1: 3 5 6\n"),
            Ok(ParsedFile::Coloured(_))
        ));
    }

    #[test]
    fn rejects_bad_lines() {
        assert_eq!(parse_system(""), Err(FormatError::Empty));
        assert!(matches!(parse_system("6\n"), Err(FormatError::BadHeader { line: 1, .. })));
        assert!(matches!(
            parse_system("6 3\n1 3 5 6\n"),
            Err(FormatError::BadBlock { line: 2, .. })
        ));
        assert!(matches!(
            parse_system("6 3\n1: 3 x 6\n"),
            Err(FormatError::BadNumber { line: 2, .. })
        ));
        assert!(matches!(
            parse_system("6 3\na | 1: 3 5 6\n"),
            Err(FormatError::UnexpectedLabel { line: 2 })
        ));
        assert!(matches!(
            parse_coloured("6 3\n1: 3 5 6\n"),
            Err(FormatError::MissingLabel { line: 2 })
        ));
    }

    #[test]
    fn stream_split_and_join() {
        let a = parse_system(SAMPLE).unwrap();
        let b = a.relabel(|v| (v % 6) + 1);
        let text = write_system_stream(&[a.clone(), b.clone()]);
        let parsed = parse_system_stream(&text).unwrap();
        assert_eq!(parsed, vec![a, b]);
    }
}
