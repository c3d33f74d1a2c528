//! The algebra file format: a line-oriented description of a dg algebra by
//! structure constants, with a canonical serialization.
//!
//! ```text
//! # the Heisenberg cdga
//! species com
//! name F2
//! basis
//!   one 0
//!   x 1
//!   y 1
//!   z 1
//!   xy 2
//! unit one
//! d z = xy
//! x * y = xy
//! ```
//!
//! Lie algebras write brackets as `[a, b] = …`. Products involving the unit and the
//! (anti)symmetric partners of declared products are filled in.

use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Zero};

use crate::algebras::{DgAlgebra, Species};
use crate::error::{Error, Result};
use crate::graded::GradedSpace;
use crate::linalg::{LinMap, Vector};
use crate::scalar::{fmt_q, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Sym(char),
}

struct Line {
    number: usize,
    toks: Vec<(Tok, usize)>,
    /// Column just past the last character, for errors at the end of the line.
    end: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

fn tokenize(number: usize, text: &str) -> Result<Line> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if is_ident_start(c) {
            let s = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            toks.push((Tok::Ident(chars[s..i].iter().collect()), col));
        } else if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && is_ident_start(chars[i]) {
                return Err(syntax(number, i + 1, "a coefficient must be separated from the basis name by a space"));
            }
            toks.push((Tok::Int(chars[s..i].iter().collect()), col));
        } else if "*=[],+-/".contains(c) {
            toks.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(syntax(number, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(Line { number, toks, end: chars.len() + 1 })
}

fn describe(t: Option<&(Tok, usize)>) -> String {
    match t {
        None => "end of line".into(),
        Some((Tok::Ident(s), _)) => format!("`{s}`"),
        Some((Tok::Int(s), _)) => format!("`{s}`"),
        Some((Tok::Sym(c), _)) => format!("`{c}`"),
    }
}

/// Cursor over the tokens of one line.
struct Cursor<'a> {
    line: &'a Line,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a (Tok, usize)> {
        self.line.toks.get(self.pos)
    }

    fn column(&self) -> usize {
        self.peek().map(|t| t.1).unwrap_or(self.line.end)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        syntax(self.line.number, self.column(), message)
    }

    fn expected(&self, what: &str) -> Error {
        self.error(format!("expected {what}, found {}", describe(self.peek())))
    }

    fn sym(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some((Tok::Sym(x), _)) if *x == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.expected(&format!("`{c}`"))),
        }
    }

    fn ident(&mut self) -> Result<(&'a str, usize)> {
        match self.peek() {
            Some((Tok::Ident(s), col)) => {
                self.pos += 1;
                Ok((s.as_str(), *col))
            }
            _ => Err(self.expected("a name")),
        }
    }

    fn end(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.expected("end of line")),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let negative = matches!(self.peek(), Some((Tok::Sym('-'), _)));
        if negative {
            self.pos += 1;
        }
        match self.peek() {
            Some((Tok::Int(s), _)) => {
                let v: i64 = s.parse().map_err(|_| self.error("degree out of range"))?;
                self.pos += 1;
                Ok(if negative { -v } else { v })
            }
            _ => Err(self.expected("an integer degree")),
        }
    }

    /// `p` or `p/q` (unsigned).
    fn rational(&mut self) -> Result<Option<Q>> {
        let Some((Tok::Int(p), _)) = self.peek() else { return Ok(None) };
        self.pos += 1;
        let p: num_bigint::BigInt = p.parse().expect("digits");
        if !matches!(self.peek(), Some((Tok::Sym('/'), _))) {
            return Ok(Some(Q::from_integer(p)));
        }
        self.pos += 1;
        match self.peek() {
            Some((Tok::Int(q), _)) => {
                let q: num_bigint::BigInt = q.parse().expect("digits");
                if q.is_zero() {
                    return Err(self.error("zero denominator"));
                }
                self.pos += 1;
                Ok(Some(Q::new(p, q)))
            }
            _ => Err(self.expected("a denominator")),
        }
    }

    /// `0`, or signed terms `c name` with an optional rational coefficient.
    fn combination(&mut self, space: &GradedSpace) -> Result<(Vector, Vec<(usize, usize)>)> {
        let mut v = Vector::new();
        let mut seen = Vec::new();
        if let Some((Tok::Int(s), _)) = self.peek() {
            if s.chars().all(|c| c == '0') && self.line.toks.len() == self.pos + 1 {
                self.pos += 1;
                return Ok((v, seen));
            }
        }
        let mut first = true;
        loop {
            let mut c = Q::one();
            match self.peek() {
                Some((Tok::Sym('+'), _)) if !first => self.pos += 1,
                Some((Tok::Sym('-'), _)) => {
                    c = -c;
                    self.pos += 1;
                }
                None if first => return Err(self.expected("a linear combination")),
                _ if first => {}
                _ => return Err(self.expected("`+`, `-` or end of line")),
            }
            if let Some(k) = self.rational()? {
                c *= k;
            }
            let (name, col) = self.ident()?;
            let i = space
                .index_of(name)
                .ok_or_else(|| syntax(self.line.number, col, format!("unknown basis element `{name}`")))?;
            v.add_term(i, &c);
            seen.push((i, col));
            first = false;
            if self.peek().is_none() {
                return Ok((v, seen));
            }
        }
    }
}

/// Parses an algebra file. Structural validation (sizes, degrees, unknown names) happens
/// here; the algebra axioms are checked separately.
pub fn parse_algebra(text: &str) -> Result<DgAlgebra> {
    let mut species: Option<Species> = None;
    let mut name: Option<String> = None;
    let mut basis: Option<Vec<(String, i32)>> = None;
    let mut in_basis = false;
    let mut space = GradedSpace::zero();
    let mut unit: Option<usize> = None;
    let mut d_cols: BTreeMap<usize, Vector> = BTreeMap::new();
    let mut products: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
    let mut seen_pairs: HashSet<(usize, usize)> = HashSet::new();
    let mut last_line = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = tokenize(k + 1, raw)?;
        last_line = k + 1;
        if line.toks.is_empty() {
            continue;
        }
        let mut cur = Cursor { line: &line, pos: 0 };
        if in_basis {
            if let (Some((Tok::Ident(n), col)), Some(second)) = (line.toks.first(), line.toks.get(1)) {
                if matches!(second.0, Tok::Int(_) | Tok::Sym('-')) {
                    cur.pos = 1;
                    let deg = cur.integer()?;
                    cur.end()?;
                    let b = basis.as_mut().expect("inside the basis section");
                    if b.iter().any(|(m, _)| m == n) {
                        return Err(syntax(line.number, *col, format!("duplicate basis name `{n}`")));
                    }
                    let deg = i32::try_from(deg).map_err(|_| syntax(line.number, *col, "degree out of range"))?;
                    b.push((n.clone(), deg));
                    continue;
                }
            }
            if let [(Tok::Ident(n), _), (Tok::Ident(_), col)] = line.toks.as_slice() {
                if !["species", "name", "unit", "d", "basis"].contains(&n.as_str()) {
                    return Err(syntax(line.number, *col, "expected an integer degree"));
                }
            }
            in_basis = false;
            space = GradedSpace::new(basis.clone().unwrap_or_default())?;
        }
        let first = &line.toks[0];
        let keyword = match &first.0 {
            Tok::Ident(s) => s.as_str(),
            Tok::Sym('[') => "[",
            _ => return Err(cur.expected("a statement")),
        };
        let second = line.toks.get(1).map(|t| &t.0);
        match (keyword, second) {
            ("species", Some(Tok::Ident(_))) => {
                cur.pos = 1;
                let (s, col) = cur.ident()?;
                cur.end()?;
                if species.is_some() {
                    return Err(syntax(line.number, first.1, "species declared twice"));
                }
                species = Some(Species::from_keyword(s).ok_or_else(|| {
                    syntax(line.number, col, format!("unknown species `{s}` (expected ass, com or lie)"))
                })?);
            }
            ("name", Some(Tok::Ident(_))) => {
                cur.pos = 1;
                let (s, _) = cur.ident()?;
                cur.end()?;
                if name.is_some() {
                    return Err(syntax(line.number, first.1, "name declared twice"));
                }
                name = Some(s.to_string());
            }
            ("basis", None) => {
                if basis.is_some() {
                    return Err(syntax(line.number, first.1, "basis declared twice"));
                }
                basis = Some(Vec::new());
                in_basis = true;
            }
            ("unit", Some(Tok::Ident(_))) => {
                require_basis(&basis, &line)?;
                cur.pos = 1;
                let (s, col) = cur.ident()?;
                cur.end()?;
                if unit.is_some() {
                    return Err(syntax(line.number, first.1, "unit declared twice"));
                }
                let u = space.index_of(s).ok_or_else(|| syntax(line.number, col, format!("unknown basis element `{s}`")))?;
                if space.degree(u) != 0 {
                    return Err(syntax(line.number, col, "the unit must have degree 0"));
                }
                unit = Some(u);
            }
            ("d", Some(Tok::Ident(_))) => {
                require_basis(&basis, &line)?;
                cur.pos = 1;
                let (s, col) = cur.ident()?;
                let x = space.index_of(s).ok_or_else(|| syntax(line.number, col, format!("unknown basis element `{s}`")))?;
                cur.sym('=')?;
                let (v, terms) = cur.combination(&space)?;
                for (i, c) in terms {
                    if space.degree(i) != space.degree(x) + 1 {
                        return Err(syntax(line.number, c, format!("d {s} must have degree {}", space.degree(x) + 1)));
                    }
                }
                if d_cols.insert(x, v).is_some() {
                    return Err(syntax(line.number, first.1, format!("d {s} declared twice")));
                }
            }
            _ => {
                require_basis(&basis, &line)?;
                let sp = species.ok_or_else(|| syntax(line.number, first.1, "species must be declared before products"))?;
                let lie_form = keyword == "[";
                let ((a, ca), (b, _)) = if lie_form {
                    cur.sym('[')?;
                    let a = cur.ident()?;
                    cur.sym(',')?;
                    let b = cur.ident()?;
                    cur.sym(']')?;
                    (a, b)
                } else {
                    let a = cur.ident()?;
                    cur.sym('*')?;
                    let b = cur.ident()?;
                    (a, b)
                };
                if lie_form != (sp == Species::Lie) {
                    let want = if sp == Species::Lie { "brackets `[a, b] = …`" } else { "products `a * b = …`" };
                    return Err(syntax(line.number, first.1, format!("{sp} algebras declare {want}")));
                }
                let lookup = |n: &str| space.index_of(n);
                let ia = lookup(a).ok_or_else(|| syntax(line.number, ca, format!("unknown basis element `{a}`")))?;
                let ib = lookup(b).ok_or_else(|| {
                    let col = line.toks.iter().filter(|t| t.0 == Tok::Ident(b.to_string())).map(|t| t.1).last().unwrap_or(ca);
                    syntax(line.number, col, format!("unknown basis element `{b}`"))
                })?;
                cur.sym('=')?;
                let (v, terms) = cur.combination(&space)?;
                let target = space.degree(ia) + space.degree(ib);
                for (i, c) in terms {
                    if space.degree(i) != target {
                        return Err(syntax(line.number, c, format!("the product must have degree {target}")));
                    }
                }
                let key = if sp == Species::Ass { (ia, ib) } else { (ia.min(ib), ia.max(ib)) };
                if !seen_pairs.insert(key) {
                    return Err(syntax(line.number, first.1, format!("product of {a} and {b} declared twice")));
                }
                products.insert((ia, ib), v);
            }
        }
    }
    if in_basis {
        space = GradedSpace::new(basis.clone().unwrap_or_default())?;
    }
    let end = last_line.max(1);
    let species = species.ok_or_else(|| syntax(end, 1, "missing `species` line"))?;
    let name = name.ok_or_else(|| syntax(end, 1, "missing `name` line"))?;
    if basis.is_none() {
        return Err(syntax(end, 1, "missing `basis` section"));
    }
    let n = space.dim();
    let cols = (0..n).map(|i| d_cols.remove(&i).unwrap_or_default()).collect();
    DgAlgebra::new(species, name, space, LinMap::from_cols(n, cols), products, unit)
}

fn require_basis(basis: &Option<Vec<(String, i32)>>, line: &Line) -> Result<()> {
    if basis.is_none() {
        return Err(syntax(line.number, line.toks[0].1, "the basis must be declared first"));
    }
    Ok(())
}

fn write_combination(v: &Vector, space: &GradedSpace) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (i, c)) in v.iter().enumerate() {
        let negative = *c < Q::zero();
        let a = if negative { -c.clone() } else { c.clone() };
        match (k, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if !a.is_one() {
            out.push_str(&fmt_q(&a));
            out.push(' ');
        }
        out.push_str(space.name(i));
    }
    out
}

/// Canonical text: header, basis, unit, differentials in basis order, then the products
/// that determine the table (one per unordered pair for Com and Lie, none with the unit).
pub fn serialize_algebra(alg: &DgAlgebra) -> String {
    let sp = &alg.space;
    let mut out = format!("species {}\nname {}\nbasis\n", alg.species, alg.name);
    for i in 0..sp.dim() {
        out.push_str(&format!("  {} {}\n", sp.name(i), sp.degree(i)));
    }
    if let Some(u) = alg.unit {
        out.push_str(&format!("unit {}\n", sp.name(u)));
    }
    for (x, col) in alg.d.cols.iter().enumerate() {
        if !col.is_zero() {
            out.push_str(&format!("d {} = {}\n", sp.name(x), write_combination(col, sp)));
        }
    }
    for (&(a, b), v) in alg.products() {
        if Some(a) == alg.unit || Some(b) == alg.unit || (alg.species != Species::Ass && a > b) {
            continue;
        }
        let lhs = if alg.species == Species::Lie {
            format!("[{}, {}]", sp.name(a), sp.name(b))
        } else {
            format!("{} * {}", sp.name(a), sp.name(b))
        };
        out.push_str(&format!("{lhs} = {}\n", write_combination(v, sp)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::fixtures;

    #[test]
    fn single_generator() {
        let a = parse_algebra("species ass\nname one\nbasis\n  x 0\n").unwrap();
        assert_eq!(a.dim(), 1);
        assert!(a.has_zero_differential());
    }

    #[test]
    fn fixtures_round_trip() {
        for alg in fixtures::all() {
            let text = serialize_algebra(&alg);
            let back = parse_algebra(&text).unwrap();
            assert_eq!(back, alg, "{}", alg.name);
            assert_eq!(serialize_algebra(&back), text);
        }
    }

    #[test]
    fn comments_and_coefficients() {
        let text = "# demo\nspecies com # trailing\nname D\nbasis\n  one 0\n  x 1\n  y 2\n  z 2\nunit one\nd x = 1/2 y - 3 z\n";
        let a = parse_algebra(text).unwrap();
        assert_eq!(a.d.cols[1], Vector::from_pairs([(2, Q::new(1.into(), 2.into())), (3, Q::from_integer((-3).into()))]));
        assert!(serialize_algebra(&a).contains("d x = 1/2 y - 3 z"));
    }

    fn error_at(text: &str) -> (usize, usize) {
        match parse_algebra(text) {
            Err(Error::Syntax { line, column, .. }) => (line, column),
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn products_in_differentials_are_rejected() {
        let text = "species com\nname F\nbasis\n  x 1\n  y 1\n  z 1\n  xy 2\nd z = x*y\n";
        assert_eq!(error_at(text), (8, 8));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(error_at("species ass\nname A\nbasis\n  x 0\n  x 1\n"), (5, 3));
        assert_eq!(error_at("species ass\nname A\nbasis\n  x 0\nd q = x\n"), (5, 3));
        assert_eq!(error_at("species ass\nname A\nbasis\n  x 0\n  y 1\nd x = x\n"), (6, 7));
        assert_eq!(error_at("species lie\nname A\nbasis\n  x 0\nx * x = x\n"), (5, 1));
        assert_eq!(error_at("species ass\nname A\nbasis\n  x a\n"), (4, 5));
        assert_eq!(error_at("species ass\nname A\nbasis\n  x 0\nd x = 1/0 x\n"), (5, 9));
        assert_eq!(error_at("species foo\n"), (1, 9));
        assert_eq!(error_at("name A\nbasis\n  x 0\n"), (3, 1));
    }
}
