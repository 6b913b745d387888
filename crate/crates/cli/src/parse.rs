//! Problem files: a `polyhedron` section and a `set` section, exact
//! rationals throughout. The writer emits the canonical form (rows scaled
//! primitive, sorted, `<=` only), so writing after parsing canonicalizes
//! and writing a canonical file round-trips byte for byte.

use std::fmt;
use std::path::Path;

use num_traits::Signed;

use scg_core::mip::MixedSSpec;
use scg_core::rat::{self, Int, Rational};
use scg_core::ratpoly::{Constraint, Limits, Polyhedron, Rel};
use scg_core::sets::SSpec;

/// Position-carrying parse failure; line and column are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

/// Either kind of failure while loading a problem: the text did not parse,
/// or it parsed but the described objects could not be built.
#[derive(Debug)]
pub enum LoadError {
    Parse(ParseError),
    Build(scg_core::Error),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Parse(e) => write!(f, "{e}"),
            LoadError::Build(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LoadError {}

impl From<ParseError> for LoadError {
    fn from(e: ParseError) -> Self {
        LoadError::Parse(e)
    }
}

impl From<scg_core::Error> for LoadError {
    fn from(e: scg_core::Error) -> Self {
        LoadError::Build(e)
    }
}

/// The point set a problem strengthens against.
#[derive(Debug, Clone)]
pub enum ProblemSet {
    Pure(SSpec),
    Mixed(MixedSSpec),
}

impl ProblemSet {
    pub fn dim(&self) -> usize {
        match self {
            ProblemSet::Pure(s) => s.dim(),
            ProblemSet::Mixed(s) => s.region().dim(),
        }
    }
}

/// A parsed problem: the polyhedron to strengthen and the set to
/// strengthen over, in a common ambient dimension.
#[derive(Debug, Clone)]
pub struct Problem {
    pub p: Polyhedron,
    pub set: ProblemSet,
}

const KEYWORDS: [&str; 6] = ["polyhedron", "set", "dim", "integer_hull", "explicit", "mixed"];

#[derive(Debug, Clone)]
struct Tok {
    col: usize,
    text: String,
}

#[derive(Debug, Clone)]
struct Line {
    no: usize,
    toks: Vec<Tok>,
}

/// Comment-stripped, tokenized lines; blank lines are dropped.
fn tokenize(text: &str) -> Vec<Line> {
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let body = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let mut toks = Vec::new();
        let mut start: Option<(usize, usize)> = None;
        let mut chars = 0usize;
        let mut bytes_at_char = body.char_indices().peekable();
        while let Some((byte, c)) = bytes_at_char.next() {
            chars += 1;
            if c.is_whitespace() {
                if let Some((scol, sbyte)) = start.take() {
                    toks.push(Tok {
                        col: scol,
                        text: body[sbyte..byte].to_string(),
                    });
                }
            } else if start.is_none() {
                start = Some((chars, byte));
            }
        }
        if let Some((scol, sbyte)) = start {
            toks.push(Tok {
                col: scol,
                text: body[sbyte..].to_string(),
            });
        }
        if !toks.is_empty() {
            lines.push(Line { no: idx + 1, toks });
        }
    }
    lines
}

struct Cursor {
    lines: Vec<Line>,
    pos: usize,
    last_line: usize,
}

impl Cursor {
    fn new(lines: Vec<Line>) -> Self {
        let last_line = lines.last().map_or(1, |l| l.no);
        Cursor {
            lines,
            pos: 0,
            last_line,
        }
    }

    fn peek(&self) -> Option<&Line> {
        self.lines.get(self.pos)
    }

    fn next(&mut self) -> Option<&Line> {
        let line = self.lines.get(self.pos);
        if line.is_some() {
            self.pos += 1;
        }
        line
    }

    fn eof_error(&self, msg: &str) -> ParseError {
        ParseError::new(self.last_line, 1, msg)
    }
}

fn parse_rat_tok(line: usize, tok: &Tok) -> Result<Rational, ParseError> {
    rat::parse_rat(&tok.text)
        .ok_or_else(|| ParseError::new(line, tok.col, format!("malformed rational `{}`", tok.text)))
}

fn parse_int_tok(line: usize, tok: &Tok) -> Result<Int, ParseError> {
    tok.text
        .parse::<Int>()
        .map_err(|_| ParseError::new(line, tok.col, format!("malformed integer `{}`", tok.text)))
}

fn expect_bare_keyword(line: &Line) -> Result<(), ParseError> {
    if let Some(extra) = line.toks.get(1) {
        return Err(ParseError::new(
            line.no,
            extra.col,
            format!("unexpected token `{}` after `{}`", extra.text, line.toks[0].text),
        ));
    }
    Ok(())
}

/// "dim n" followed by rows "a₁ … aₙ REL b" until the next keyword line.
fn parse_poly_block(cursor: &mut Cursor) -> Result<Polyhedron, LoadError> {
    let header = match cursor.next() {
        Some(line) => line.clone(),
        None => return Err(cursor.eof_error("expected `dim n`").into()),
    };
    if header.toks[0].text != "dim" {
        return Err(ParseError::new(
            header.no,
            header.toks[0].col,
            format!("expected `dim`, found `{}`", header.toks[0].text),
        )
        .into());
    }
    let n_tok = header
        .toks
        .get(1)
        .ok_or_else(|| ParseError::new(header.no, header.toks[0].col, "`dim` needs a dimension"))?;
    let n: usize = n_tok.text.parse().map_err(|_| {
        ParseError::new(header.no, n_tok.col, format!("malformed dimension `{}`", n_tok.text))
    })?;
    if n == 0 {
        return Err(ParseError::new(header.no, n_tok.col, "dimension must be positive").into());
    }
    if let Some(extra) = header.toks.get(2) {
        return Err(ParseError::new(
            header.no,
            extra.col,
            format!("unexpected token `{}` after the dimension", extra.text),
        )
        .into());
    }

    let mut rows = Vec::new();
    while let Some(line) = cursor.peek() {
        if KEYWORDS.contains(&line.toks[0].text.as_str()) {
            break;
        }
        let line = cursor.next().expect("peeked").clone();
        if line.toks.len() != n + 2 {
            return Err(ParseError::new(
                line.no,
                line.toks[0].col,
                format!(
                    "row needs {} coefficients, a relation, and a right-hand side",
                    n
                ),
            )
            .into());
        }
        let mut coeffs = Vec::with_capacity(n);
        for tok in &line.toks[..n] {
            coeffs.push(parse_rat_tok(line.no, tok)?);
        }
        let rel_tok = &line.toks[n];
        let rel = match rel_tok.text.as_str() {
            "<=" => Rel::Le,
            ">=" => Rel::Ge,
            "=" => Rel::Eq,
            other => {
                return Err(ParseError::new(
                    line.no,
                    rel_tok.col,
                    format!("expected `<=`, `>=`, or `=`, found `{other}`"),
                )
                .into())
            }
        };
        let rhs = parse_rat_tok(line.no, &line.toks[n + 1])?;
        rows.push(Constraint::new(coeffs, rel, rhs));
    }
    Ok(Polyhedron::new(n, rows)?)
}

fn parse_set_block(cursor: &mut Cursor, limits: &Limits) -> Result<ProblemSet, LoadError> {
    let head = match cursor.next() {
        Some(line) => line.clone(),
        None => return Err(cursor.eof_error("expected a set kind after `set`").into()),
    };
    match head.toks[0].text.as_str() {
        "integer_hull" => {
            expect_bare_keyword(&head)?;
            let region = parse_poly_block(cursor)?;
            Ok(ProblemSet::Pure(SSpec::hull_of(region, limits)?))
        }
        "explicit" => {
            expect_bare_keyword(&head)?;
            let mut points: Vec<Vec<Int>> = Vec::new();
            while let Some(line) = cursor.peek() {
                if KEYWORDS.contains(&line.toks[0].text.as_str()) {
                    break;
                }
                let line = cursor.next().expect("peeked").clone();
                let mut point = Vec::with_capacity(line.toks.len());
                for tok in &line.toks {
                    point.push(parse_int_tok(line.no, tok)?);
                }
                if let Some(first) = points.first() {
                    if point.len() != first.len() {
                        return Err(ParseError::new(
                            line.no,
                            line.toks[0].col,
                            format!(
                                "point has {} coordinates, expected {}",
                                point.len(),
                                first.len()
                            ),
                        )
                        .into());
                    }
                }
                points.push(point);
            }
            if points.is_empty() {
                return Err(ParseError::new(
                    head.no,
                    head.toks[0].col,
                    "explicit set needs at least one point",
                )
                .into());
            }
            Ok(ProblemSet::Pure(SSpec::explicit(points)?))
        }
        "mixed" => {
            let n_tok = head.toks.get(1).ok_or_else(|| {
                ParseError::new(head.no, head.toks[0].col, "`mixed` needs an integer count")
            })?;
            let n_int: usize = n_tok.text.parse().map_err(|_| {
                ParseError::new(
                    head.no,
                    n_tok.col,
                    format!("malformed integer count `{}`", n_tok.text),
                )
            })?;
            if let Some(extra) = head.toks.get(2) {
                return Err(ParseError::new(
                    head.no,
                    extra.col,
                    format!("unexpected token `{}` after the integer count", extra.text),
                )
                .into());
            }
            let region = parse_poly_block(cursor)?;
            if n_int > region.dim() {
                return Err(ParseError::new(
                    head.no,
                    n_tok.col,
                    format!(
                        "integer count {} exceeds the region dimension {}",
                        n_int,
                        region.dim()
                    ),
                )
                .into());
            }
            Ok(ProblemSet::Mixed(MixedSSpec::new(region, n_int)?))
        }
        other => Err(ParseError::new(
            head.no,
            head.toks[0].col,
            format!("expected `integer_hull`, `explicit`, or `mixed`, found `{other}`"),
        )
        .into()),
    }
}

/// Parses a problem from text. Exactly one `polyhedron` and one `set`
/// section are required, in either order, with matching dimensions.
pub fn parse_problem_str(text: &str, limits: &Limits) -> Result<Problem, LoadError> {
    let mut cursor = Cursor::new(tokenize(text));
    let mut poly: Option<Polyhedron> = None;
    let mut set: Option<ProblemSet> = None;
    while let Some(line) = cursor.peek() {
        let (no, tok) = (line.no, line.toks[0].clone());
        match tok.text.as_str() {
            "polyhedron" => {
                let line = cursor.next().expect("peeked").clone();
                expect_bare_keyword(&line)?;
                if poly.is_some() {
                    return Err(
                        ParseError::new(no, tok.col, "duplicate `polyhedron` section").into()
                    );
                }
                poly = Some(parse_poly_block(&mut cursor)?);
            }
            "set" => {
                let line = cursor.next().expect("peeked").clone();
                expect_bare_keyword(&line)?;
                if set.is_some() {
                    return Err(ParseError::new(no, tok.col, "duplicate `set` section").into());
                }
                set = Some(parse_set_block(&mut cursor, limits)?);
            }
            other => {
                return Err(ParseError::new(
                    no,
                    tok.col,
                    format!("expected `polyhedron` or `set`, found `{other}`"),
                )
                .into())
            }
        }
    }
    let p = poly.ok_or_else(|| cursor.eof_error("missing `polyhedron` section"))?;
    let set = set.ok_or_else(|| cursor.eof_error("missing `set` section"))?;
    if p.dim() != set.dim() {
        return Err(ParseError::new(
            cursor.last_line,
            1,
            format!(
                "polyhedron dimension {} does not match set dimension {}",
                p.dim(),
                set.dim()
            ),
        )
        .into());
    }
    Ok(Problem { p, set })
}

/// Parses a problem file from disk; I/O failures surface as parse errors
/// at position 0:0.
pub fn parse_problem(path: &Path, limits: &Limits) -> Result<Problem, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        LoadError::Parse(ParseError::new(0, 0, format!("{}: {e}", path.display())))
    })?;
    parse_problem_str(&text, limits)
}

fn write_poly_block(out: &mut String, p: &Polyhedron) {
    let canon = p.canonicalized();
    out.push_str(&format!("dim {}\n", canon.dim()));
    for row in canon.rows() {
        let coeffs: Vec<String> = row
            .coeffs
            .iter()
            .map(|c| c.to_integer().to_string())
            .collect();
        out.push_str(&format!(
            "{} {} {}\n",
            coeffs.join(" "),
            row.rel.as_str(),
            rat::fmt_rat(&row.rhs)
        ));
    }
}

/// Canonical text form of a problem. Parsing the output reproduces the
/// same sets, and writing is idempotent.
pub fn write_problem(problem: &Problem) -> String {
    let mut out = String::from("polyhedron\n");
    write_poly_block(&mut out, &problem.p);
    out.push_str("set\n");
    match &problem.set {
        ProblemSet::Pure(s) => match s.points() {
            Some(points) => {
                out.push_str("explicit\n");
                for z in points {
                    let coords: Vec<String> = z.iter().map(Int::to_string).collect();
                    out.push_str(&coords.join(" "));
                    out.push('\n');
                }
            }
            None => {
                out.push_str("integer_hull\n");
                write_poly_block(&mut out, s.region().expect("hull kind"));
            }
        },
        ProblemSet::Mixed(s) => {
            out.push_str(&format!("mixed {}\n", s.n_int()));
            write_poly_block(&mut out, s.region());
        }
    }
    out
}

/// Comma-separated integers, e.g. `2,3` or `2, -1, 0`.
pub fn parse_int_list(s: &str) -> Result<Vec<Int>, String> {
    s.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<Int>()
                .map_err(|_| format!("malformed integer `{part}`"))
        })
        .collect()
}

/// Comma-separated nonnegative rationals, e.g. `1,3/2,0`.
pub fn parse_multiplier_list(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',')
        .map(|part| {
            let part = part.trim();
            let value =
                rat::parse_rat(part).ok_or_else(|| format!("malformed rational `{part}`"))?;
            if value.is_negative() {
                return Err(format!("multiplier `{part}` is negative"));
            }
            Ok(value)
        })
        .collect()
}
