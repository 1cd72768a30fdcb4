//! Generator-set text formats.
//!
//! JSON: `{"degree": n, "generators": [[images…], …]}` with 0-based images
//! and an optional `"labels"` array.
//!
//! Cycle text: an optional `n=<int>;` header followed by generators written
//! as 1-based disjoint-cycle products, e.g. `(1 2)(3 4) (1 3)` holds two
//! generators. Cycles of one generator are adjacent; whitespace separates
//! generators. `()` is the identity and `#` starts a comment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{GeneratorSet, Permutation};

#[derive(Serialize, Deserialize)]
struct GeneratorsJson {
    degree: usize,
    generators: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

/// Parses either format, chosen by the first non-blank character.
pub fn parse_generators(text: &str) -> Result<GeneratorSet> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_cycles(text)
    }
}

pub fn parse_json(text: &str) -> Result<GeneratorSet> {
    let raw: GeneratorsJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let gens = raw
        .generators
        .into_iter()
        .enumerate()
        .map(|(i, images)| {
            if images.len() != raw.degree {
                return Err(Error::arg(format!(
                    "generator {i} has {} images, expected {}",
                    images.len(),
                    raw.degree
                )));
            }
            Permutation::from_images(images).map_err(|e| Error::arg(format!("generator {i}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let set = GeneratorSet::new(raw.degree, gens)?;
    match raw.labels {
        Some(labels) => set.with_labels(labels),
        None => Ok(set),
    }
}

pub fn emit_json(gens: &GeneratorSet) -> String {
    let raw = GeneratorsJson {
        degree: gens.degree(),
        generators: gens
            .generators()
            .iter()
            .map(|g| g.images().to_vec())
            .collect(),
        labels: gens.labels().map(|l| l.to_vec()),
    };
    serde_json::to_string(&raw).expect("plain data serializes")
}

/// Cycle text with an explicit header, one generator per line.
pub fn emit_cycles(gens: &GeneratorSet) -> String {
    let mut out = format!("n={};\n", gens.degree());
    for g in gens.generators() {
        let cycles = g.cycles();
        if cycles.is_empty() {
            out.push_str("()");
        }
        for c in cycles {
            out.push('(');
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            out.push_str(&pts.join(" "));
            out.push(')');
        }
        out.push('\n');
    }
    out
}

/// Default emitter: JSON.
pub fn emit_generators(gens: &GeneratorSet) -> String {
    emit_json(gens)
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
            _src: src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.col,
            message: message.into(),
        }
    }

    /// Skips blanks and comments; reports whether anything was skipped.
    fn skip_blank(&mut self) -> bool {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
        self.pos != start
    }

    fn number(&mut self) -> Result<(usize, usize, usize)> {
        let (line, col) = (self.line, self.col);
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.bump();
        }
        if digits.is_empty() {
            return Err(self.err("expected a number"));
        }
        let v = digits.parse().map_err(|_| self.err("number too large"))?;
        Ok((v, line, col))
    }
}

type RawCycles = Vec<Vec<(usize, usize, usize)>>;

pub fn parse_cycles(text: &str) -> Result<GeneratorSet> {
    let mut cur = Cursor::new(text);
    cur.skip_blank();

    let mut degree = None;
    if matches!(cur.peek(), Some('n') | Some('N')) {
        cur.bump();
        cur.skip_blank();
        if cur.bump() != Some('=') {
            return Err(cur.err("expected '=' after n"));
        }
        cur.skip_blank();
        let (n, _, _) = cur.number()?;
        if n == 0 {
            return Err(cur.err("degree must be at least 1"));
        }
        cur.skip_blank();
        if cur.bump() != Some(';') {
            return Err(cur.err("expected ';' after degree"));
        }
        degree = Some(n);
        cur.skip_blank();
    }

    let mut raw: Vec<RawCycles> = Vec::new();
    while cur.peek().is_some() {
        let mut generator: RawCycles = Vec::new();
        loop {
            if cur.peek() != Some('(') {
                return Err(cur.err("expected '('"));
            }
            cur.bump();
            let mut cycle = Vec::new();
            loop {
                while cur.peek().is_some_and(|c| c.is_whitespace() || c == ',') {
                    cur.bump();
                }
                match cur.peek() {
                    Some(')') => {
                        cur.bump();
                        break;
                    }
                    Some(c) if c.is_ascii_digit() => cycle.push(cur.number()?),
                    Some(c) => return Err(cur.err(format!("unexpected character {c:?}"))),
                    None => return Err(cur.err("unterminated cycle")),
                }
            }
            generator.push(cycle);
            if cur.peek() != Some('(') {
                break;
            }
        }
        raw.push(generator);
        let separated = cur.skip_blank();
        if cur.peek().is_some() && !separated {
            return Err(cur.err("generators must be separated by whitespace"));
        }
    }
    if raw.is_empty() {
        return Err(cur.err("no generators"));
    }

    let max_point = raw
        .iter()
        .flatten()
        .flatten()
        .map(|&(p, _, _)| p)
        .max()
        .unwrap_or(1);
    let n = degree.unwrap_or(max_point.max(1));
    let mut gens = Vec::with_capacity(raw.len());
    for generator in raw {
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for cycle in generator {
            let mut pts = Vec::with_capacity(cycle.len());
            for (p, line, column) in cycle {
                let at = |message: String| Error::Parse {
                    line,
                    column,
                    message,
                };
                if p == 0 || p > n {
                    return Err(at(format!("point {p} outside 1..={n}")));
                }
                if std::mem::replace(&mut seen[p - 1], true) {
                    return Err(at(format!("point {p} repeated within one generator")));
                }
                pts.push(p - 1);
            }
            cycles.push(pts);
        }
        gens.push(Permutation::from_cycles(n, &cycles)?);
    }
    GeneratorSet::new(n, gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_cycles_agree() {
        let a = parse_generators(r#"{"degree":4,"generators":[[1,2,3,0]]}"#).unwrap();
        let b = parse_generators("n=4; (1 2 3 4)").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.generators()[0].images(), &[1, 2, 3, 0]);
    }

    #[test]
    fn adjacent_cycles_form_one_generator() {
        let g = parse_cycles("(1 2)(3 4) (1 3)").unwrap();
        assert_eq!(g.degree(), 4);
        assert_eq!(g.len(), 2);
        assert_eq!(g.generators()[0].images(), &[1, 0, 3, 2]);
    }

    #[test]
    fn repeated_point_is_an_error() {
        let err = parse_cycles("(1 2)(2 3)").unwrap_err();
        let Error::Parse { line, column, .. } = err else {
            panic!("{err:?}")
        };
        assert_eq!((line, column), (1, 7));
    }

    #[test]
    fn error_positions() {
        let err = parse_cycles("n=3;\n(1 2)\n(1 x)").unwrap_err();
        assert!(
            matches!(
                err,
                Error::Parse {
                    line: 3,
                    column: 4,
                    ..
                }
            ),
            "{err:?}"
        );
        assert!(matches!(
            parse_cycles("n=2; (1 3)"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(parse_cycles("n=2;"), Err(Error::Parse { .. })));
        assert!(matches!(parse_cycles("(1 2"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_json("{\"degree\": 2,"),
            Err(Error::Parse { .. })
        ));
        assert!(parse_json(r#"{"degree":2,"generators":[[0,0]]}"#).is_err());
        assert!(parse_json(r#"{"degree":2,"generators":[]}"#).is_err());
    }

    #[test]
    fn identity_and_comments() {
        let g = parse_cycles("# header\nn=3; () # trivial\n(1 2 3)").unwrap();
        assert!(g.generators()[0].is_identity());
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn emit_round_trips() {
        let g = parse_cycles("n=6; (1 2 3)(5 6) () (2 4)").unwrap();
        assert_eq!(parse_generators(&emit_cycles(&g)).unwrap(), g);
        assert_eq!(parse_generators(&emit_json(&g)).unwrap(), g);
        let labelled = g
            .with_labels(vec!["a".into(), "e".into(), "b".into()])
            .unwrap();
        assert_eq!(
            parse_generators(&emit_generators(&labelled)).unwrap(),
            labelled
        );
    }
}
