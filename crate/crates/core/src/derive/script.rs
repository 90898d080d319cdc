//! Parser for the line-oriented derivation-script language.
//!
//! ```text
//! # comment
//! assume <label>: <lhs> = <rhs>
//! assume-nonzero <expr>
//! point nonhopf|hopf [name=<expr> ...]
//! jacobi <X> as <l1> <l2> <l3>          # hypothesis: l X = 0
//! codazzi <X> <Y> as <l1> <l2> <l3>
//! curvcomm <X> <Y> <Z> as <l1> <l2> <l3>
//! defect <X> <Y> <Z> as <l1> <l2> <l3>
//! diff <label> along <X> as <label>
//! commutator <X> <Y> <f> as <label>
//! subst <label> using <label>:<pivot>, ... as <label>
//! restrict using <label>:<pivot>, ...
//! conclude <lhs> = <rhs> [from <label>] [as <label>]
//! contradiction [from <label>]
//! case <label>: <lhs> = <rhs> {
//!   ...
//! } else {
//!   ...
//! }
//! check-hopf                           # current point satisfies the Hopf relation
//! cite <script>
//! external "<text>"
//! ```
//!
//! `_` skips a component. A pivot is a symbol, a jet or a monomial.

use crate::error::Error;
use crate::exact::{parse_expr, parse_relation, Direction, Monomial, RatFunc, Symbol};

#[derive(Clone, Debug, PartialEq)]
pub enum PointKind {
    Hopf,
    NonHopf,
}

/// Up to three component labels, `None` for `_`.
pub type Labels = [Option<String>; 3];

#[derive(Clone, Debug, PartialEq)]
pub struct Pivot {
    pub label: String,
    pub monomial: Monomial,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    Assume {
        label: String,
        expr: RatFunc,
    },
    AssumeNonzero {
        expr: RatFunc,
    },
    Point {
        kind: PointKind,
        entries: Vec<(String, RatFunc)>,
    },
    Jacobi {
        x: Direction,
        labels: Labels,
    },
    Codazzi {
        x: Direction,
        y: Direction,
        labels: Labels,
    },
    CurvComm {
        x: Direction,
        y: Direction,
        z: Direction,
        labels: Labels,
    },
    Defect {
        x: Direction,
        y: Direction,
        z: Direction,
        labels: Labels,
    },
    Diff {
        src: String,
        dir: Direction,
        label: String,
    },
    Commutator {
        x: Direction,
        y: Direction,
        f: Symbol,
        label: String,
    },
    Subst {
        src: String,
        using: Vec<Pivot>,
        label: String,
    },
    Restrict {
        using: Vec<Pivot>,
    },
    Conclude {
        expr: RatFunc,
        from: Option<String>,
        label: Option<String>,
    },
    Contradiction {
        from: Option<String>,
    },
    Case {
        label: String,
        expr: RatFunc,
        then: Vec<Line>,
        otherwise: Vec<Line>,
    },
    CheckHopf,
    Cite {
        script: String,
    },
    External {
        text: String,
    },
}

impl Stmt {
    /// Statements that introduce hypotheses rather than derive facts.
    pub fn is_hypothesis(&self) -> bool {
        matches!(
            self,
            Stmt::Assume { .. } | Stmt::AssumeNonzero { .. } | Stmt::Jacobi { .. }
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Line {
    /// 1-based source line.
    pub line: usize,
    pub text: String,
    pub stmt: Stmt,
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Script {
        line,
        message: message.into(),
    }
}

fn expr(line: usize, src: &str) -> Result<RatFunc, Error> {
    parse_expr(src).map_err(|e| err(line, e.to_string()))
}

fn relation(line: usize, src: &str) -> Result<RatFunc, Error> {
    parse_relation(src).map_err(|e| err(line, e.to_string()))
}

fn direction(line: usize, s: &str) -> Result<Direction, Error> {
    Direction::from_name(s).ok_or_else(|| err(line, format!("unknown direction '{}'", s)))
}

fn ident(line: usize, s: &str) -> Result<String, Error> {
    let ok = !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
    if ok {
        Ok(s.to_string())
    } else {
        Err(err(line, format!("bad label '{}'", s)))
    }
}

fn labels(line: usize, words: &[&str]) -> Result<Labels, Error> {
    if words.len() != 3 {
        return Err(err(line, "expected three labels after 'as'"));
    }
    let one = |w: &str| -> Result<Option<String>, Error> {
        if w == "_" {
            Ok(None)
        } else {
            ident(line, w).map(Some)
        }
    };
    Ok([one(words[0])?, one(words[1])?, one(words[2])?])
}

fn pivot_monomial(line: usize, src: &str) -> Result<Monomial, Error> {
    let e = expr(line, src)?;
    let mut terms = e.numer().terms();
    match (terms.next(), terms.next(), e.denom().is_one()) {
        (Some((m, q)), None, true) if q == &num_rational::BigRational::from_integer(1.into()) && !m.is_one() => {
            Ok(m.clone())
        }
        _ => Err(err(line, format!("pivot '{}' is not a monomial", src))),
    }
}

fn pivots(line: usize, src: &str) -> Result<Vec<Pivot>, Error> {
    src.split(',')
        .map(|item| {
            let (label, p) = item
                .split_once(':')
                .ok_or_else(|| err(line, format!("expected <label>:<pivot>, got '{}'", item.trim())))?;
            Ok(Pivot {
                label: ident(line, label.trim())?,
                monomial: pivot_monomial(line, p.trim())?,
            })
        })
        .collect()
}

/// Splits `head ... <kw> tail` at the last ` kw `.
fn split_kw<'a>(s: &'a str, kw: &str) -> (&'a str, Option<&'a str>) {
    let pat = format!(" {} ", kw);
    match s.rfind(&pat) {
        Some(i) => (s[..i].trim(), Some(s[i + pat.len()..].trim())),
        None => (s.trim(), None),
    }
}

fn point_entries(line: usize, rest: &str) -> Result<Vec<(String, RatFunc)>, Error> {
    // `name=value` pairs; words without `=` continue the previous value.
    let mut raw: Vec<(String, String)> = Vec::new();
    for w in rest.split_whitespace() {
        match w.split_once('=') {
            Some((k, v)) => raw.push((k.to_string(), v.to_string())),
            None => match raw.last_mut() {
                Some((_, v)) => {
                    v.push(' ');
                    v.push_str(w);
                }
                None => return Err(err(line, format!("expected name=value, got '{}'", w))),
            },
        }
    }
    raw.into_iter().map(|(k, v)| Ok((k, expr(line, &v)?))).collect()
}

fn parse_simple(line: usize, text: &str) -> Result<Stmt, Error> {
    let (kw, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    let words: Vec<&str> = rest.split_whitespace().collect();
    let as_labels = |n: usize| -> Result<Labels, Error> {
        if words.get(n) != Some(&"as") {
            return Err(err(line, format!("expected 'as' after {} arguments", n)));
        }
        labels(line, &words[n + 1..])
    };
    Ok(match kw {
        "assume" => {
            let (label, rel) = rest
                .split_once(':')
                .ok_or_else(|| err(line, "expected 'assume <label>: <relation>'"))?;
            Stmt::Assume {
                label: ident(line, label.trim())?,
                expr: relation(line, rel)?,
            }
        }
        "assume-nonzero" => Stmt::AssumeNonzero {
            expr: expr(line, rest)?,
        },
        "point" => {
            let (kind, tail) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            let kind = match kind {
                "hopf" => PointKind::Hopf,
                "nonhopf" => PointKind::NonHopf,
                other => return Err(err(line, format!("unknown point kind '{}'", other))),
            };
            Stmt::Point {
                kind,
                entries: point_entries(line, tail)?,
            }
        }
        "jacobi" => Stmt::Jacobi {
            x: direction(line, words.first().copied().unwrap_or(""))?,
            labels: as_labels(1)?,
        },
        "codazzi" => {
            if words.len() < 2 {
                return Err(err(line, "codazzi needs two directions"));
            }
            Stmt::Codazzi {
                x: direction(line, words[0])?,
                y: direction(line, words[1])?,
                labels: as_labels(2)?,
            }
        }
        "curvcomm" | "defect" => {
            if words.len() < 3 {
                return Err(err(line, format!("{} needs three directions", kw)));
            }
            let (x, y, z) = (
                direction(line, words[0])?,
                direction(line, words[1])?,
                direction(line, words[2])?,
            );
            let labels = as_labels(3)?;
            if kw == "curvcomm" {
                Stmt::CurvComm { x, y, z, labels }
            } else {
                Stmt::Defect { x, y, z, labels }
            }
        }
        "diff" => match words.as_slice() {
            [src, "along", d, "as", label] => Stmt::Diff {
                src: ident(line, src)?,
                dir: direction(line, d)?,
                label: ident(line, label)?,
            },
            _ => return Err(err(line, "expected 'diff <label> along <X> as <label>'")),
        },
        "commutator" => match words.as_slice() {
            [x, y, f, "as", label] => Stmt::Commutator {
                x: direction(line, x)?,
                y: direction(line, y)?,
                f: expr(line, f)?
                    .as_symbol()
                    .ok_or_else(|| err(line, format!("'{}' is not a symbol", f)))?,
                label: ident(line, label)?,
            },
            _ => return Err(err(line, "expected 'commutator <X> <Y> <f> as <label>'")),
        },
        "subst" => {
            let (head, label) = split_kw(rest, "as");
            let label = label.ok_or_else(|| err(line, "subst needs 'as <label>'"))?;
            let (src, using) = head
                .split_once(" using ")
                .ok_or_else(|| err(line, "expected 'subst <label> using ...'"))?;
            Stmt::Subst {
                src: ident(line, src.trim())?,
                using: pivots(line, using)?,
                label: ident(line, label)?,
            }
        }
        "restrict" => {
            let using = rest
                .strip_prefix("using")
                .ok_or_else(|| err(line, "expected 'restrict using ...'"))?;
            Stmt::Restrict {
                using: pivots(line, using)?,
            }
        }
        "conclude" => {
            let (head, label) = split_kw(rest, "as");
            let (rel, from) = split_kw(head, "from");
            Stmt::Conclude {
                expr: relation(line, rel)?,
                from: from.map(|f| ident(line, f)).transpose()?,
                label: label.map(|l| ident(line, l)).transpose()?,
            }
        }
        "contradiction" => Stmt::Contradiction {
            from: match words.as_slice() {
                [] => None,
                ["from", l] => Some(ident(line, l)?),
                _ => return Err(err(line, "expected 'contradiction [from <label>]'")),
            },
        },
        "check-hopf" => {
            if !rest.is_empty() {
                return Err(err(line, "check-hopf takes no arguments"));
            }
            Stmt::CheckHopf
        }
        "cite" => match words.as_slice() {
            [name] => Stmt::Cite {
                script: ident(line, name)?,
            },
            _ => return Err(err(line, "expected 'cite <script>'")),
        },
        "external" => {
            let text = rest
                .strip_prefix('"')
                .and_then(|r| r.strip_suffix('"'))
                .ok_or_else(|| err(line, "expected 'external \"<text>\"'"))?;
            Stmt::External { text: text.to_string() }
        }
        other => return Err(err(line, format!("unknown statement '{}'", other))),
    })
}

/// Statements of a block and the closing `}` line, if any.
type Block<'s> = (Vec<Line>, Option<(usize, &'s str)>);

struct Source<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl Source<'_> {
    /// Parses statements until a closing `}` line (returned) or end of input.
    fn block(&mut self, nested: bool) -> Result<Block<'_>, Error> {
        let mut out = Vec::new();
        while let Some(&(n, text)) = self.lines.get(self.pos) {
            self.pos += 1;
            if text.starts_with('}') {
                if !nested {
                    return Err(err(n, "unmatched '}'"));
                }
                return Ok((out, Some((n, text))));
            }
            let stmt = if let Some(head) = text.strip_prefix("case ") {
                let head = head
                    .strip_suffix('{')
                    .ok_or_else(|| err(n, "case line must end with '{'"))?;
                let (label, rel) = head
                    .split_once(':')
                    .ok_or_else(|| err(n, "expected 'case <label>: <relation> {'"))?;
                let (then, close) = self.block(true)?;
                let (cn, ctext) = close.ok_or_else(|| err(n, "unterminated case"))?;
                if ctext.split_whitespace().collect::<Vec<_>>() != ["}", "else", "{"] {
                    return Err(err(cn, "expected '} else {'"));
                }
                let (otherwise, close) = self.block(true)?;
                match close {
                    Some((_, "}")) => {}
                    Some((cn, _)) => return Err(err(cn, "expected '}'")),
                    None => return Err(err(n, "unterminated else")),
                }
                Stmt::Case {
                    label: ident(n, label.trim())?,
                    expr: relation(n, rel)?,
                    then,
                    otherwise,
                }
            } else {
                parse_simple(n, text)?
            };
            out.push(Line {
                line: n,
                text: text.to_string(),
                stmt,
            });
        }
        if nested {
            return Err(err(self.lines.last().map_or(0, |l| l.0), "missing '}'"));
        }
        Ok((out, None))
    }
}

/// Parses a whole script.
pub fn parse_script(src: &str) -> Result<Vec<Line>, Error> {
    let lines: Vec<(usize, &str)> = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let mut s = Source { lines, pos: 0 };
    Ok(s.block(false)?.0)
}
