//! Parser for the `.trop` declaration format.
//!
//! Documents are sequences of named blocks:
//!
//! ```text
//! pl     <name> { left_slope=<q> points=(x1,y1)(x2,y2)... right_slope=<q> [window=a,b] }
//! entire <name> { monomials=(s1,c1)(s2,c2)... }
//! mat    <name> { rows=[a,b;c,d] }
//! poly   <name> { nvars=<int> degree=<int> terms=([i0,i1,...],c)(...) }
//! curve  <name> { n=<int> components=f0,f1,... }
//! instance <name> { curve=<name> polys=p1,p2,... [c=<q>] [grid=a:b:s] [tol=<q>] }
//! ```
//!
//! Rationals are `p/q` or integers, `-inf` is the tropical bottom, and
//! `#` starts a line comment. Errors carry line and column.

use std::collections::BTreeMap;

use trop_core::plfun::{PLFunction, Window};
use trop_core::rational::{parse_rational, Rational};
use trop_core::semiring::{parse_trop, TropValue};
use trop_core::troplinalg::TropMatrix;
use trop_core::hypersurface::TropPolynomial;
use trop_core::projective::TropCurve;

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Equals,
    Comma,
    Semicolon,
    Colon,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> PResult<Vec<Token>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let mut chars = line.char_indices().peekable();
        while let Some(&(col, ch)) = chars.peek() {
            let pos = (lineno + 1, col + 1);
            let simple = match ch {
                '{' => Some(Tok::LBrace),
                '}' => Some(Tok::RBrace),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '[' => Some(Tok::LBracket),
                ']' => Some(Tok::RBracket),
                '=' => Some(Tok::Equals),
                ',' => Some(Tok::Comma),
                ';' => Some(Tok::Semicolon),
                ':' => Some(Tok::Colon),
                _ => None,
            };
            if let Some(tok) = simple {
                out.push(Token {
                    tok,
                    line: pos.0,
                    col: pos.1,
                });
                chars.next();
            } else if ch.is_whitespace() {
                chars.next();
            } else if ch.is_alphanumeric() || "_-./".contains(ch) {
                let mut word = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_alphanumeric() || "_-./".contains(c) {
                        word.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token {
                    tok: Tok::Word(word),
                    line: pos.0,
                    col: pos.1,
                });
            } else {
                return Err(ParseError {
                    line: pos.0,
                    col: pos.1,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        }
    }
    Ok(out)
}

/// Unresolved instance declaration from an `instance` block.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceDecl {
    pub curve: String,
    pub polys: Vec<String>,
    pub c: Option<Rational>,
    pub grid: Option<Vec<Rational>>,
    pub tol: Option<Rational>,
}

/// A parsed, resolved document. Raw component/instance name lists are kept
/// for round-trip emission.
#[derive(Debug, Default)]
pub struct InputDocument {
    pub functions: BTreeMap<String, PLFunction>,
    pub matrices: BTreeMap<String, TropMatrix>,
    pub polynomials: BTreeMap<String, TropPolynomial>,
    pub curves: BTreeMap<String, TropCurve>,
    pub curve_components: BTreeMap<String, Vec<String>>,
    pub instances: BTreeMap<String, InstanceDecl>,
    /// Whether a function was declared in monomial (`entire`) form.
    pub entire_form: BTreeMap<String, Vec<(Rational, Rational)>>,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        let (line, col) = self
            .tokens
            .get(self.pos.min(self.tokens.len().saturating_sub(1)))
            .map(|t| (t.line, t.col))
            .unwrap_or((0, 0));
        Err(ParseError {
            line,
            col,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        match self.next() {
            Some(t) if t == tok => Ok(()),
            other => {
                self.pos = self.pos.saturating_sub(1);
                self.err(format!("expected {tok:?}, found {other:?}"))
            }
        }
    }

    fn word(&mut self) -> PResult<String> {
        match self.next() {
            Some(Tok::Word(w)) => Ok(w),
            other => {
                self.pos = self.pos.saturating_sub(1);
                self.err(format!("expected a word, found {other:?}"))
            }
        }
    }

    fn rational(&mut self) -> PResult<Rational> {
        let w = self.word()?;
        match parse_rational(&w) {
            Ok(q) => Ok(q),
            Err(e) => {
                self.pos -= 1;
                self.err(e.to_string())
            }
        }
    }

    fn trop_value(&mut self) -> PResult<TropValue> {
        let w = self.word()?;
        match parse_trop(&w) {
            Ok(v) => Ok(v),
            Err(e) => {
                self.pos -= 1;
                self.err(e.to_string())
            }
        }
    }

    fn integer(&mut self) -> PResult<u32> {
        let w = self.word()?;
        match w.parse::<u32>() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos -= 1;
                self.err(format!("expected a nonnegative integer, found `{w}`"))
            }
        }
    }

    fn key(&mut self, expected: &str) -> PResult<()> {
        let w = self.word()?;
        if w != expected {
            self.pos -= 1;
            return self.err(format!("expected `{expected}=`, found `{w}`"));
        }
        self.expect(Tok::Equals)
    }

    /// `(a,b)(c,d)...` pair lists.
    fn pair_list(&mut self) -> PResult<Vec<(Rational, Rational)>> {
        let mut out = Vec::new();
        while self.peek() == Some(&Tok::LParen) {
            self.expect(Tok::LParen)?;
            let a = self.rational()?;
            self.expect(Tok::Comma)?;
            let b = self.rational()?;
            self.expect(Tok::RParen)?;
            out.push((a, b));
        }
        if out.is_empty() {
            return self.err("expected at least one (a,b) pair");
        }
        Ok(out)
    }

    fn name_list(&mut self) -> PResult<Vec<String>> {
        let mut out = vec![self.word()?];
        while self.peek() == Some(&Tok::Comma) {
            self.next();
            out.push(self.word()?);
        }
        Ok(out)
    }

    fn parse_pl(&mut self) -> PResult<PLFunction> {
        self.expect(Tok::LBrace)?;
        self.key("left_slope")?;
        let left = self.rational()?;
        self.key("points")?;
        let points = self.pair_list()?;
        self.key("right_slope")?;
        let right = self.rational()?;
        let window = if matches!(self.peek(), Some(Tok::Word(w)) if w == "window") {
            self.key("window")?;
            let lo = self.rational()?;
            self.expect(Tok::Comma)?;
            let hi = self.rational()?;
            match Window::new(lo, hi) {
                Ok(w) => Some(w),
                Err(e) => return self.err(e.to_string()),
            }
        } else {
            None
        };
        self.expect(Tok::RBrace)?;
        match PLFunction::from_breakpoints(left, &points, right, window) {
            Ok(f) => Ok(f),
            Err(e) => self.err(e.to_string()),
        }
    }

    fn parse_entire(&mut self) -> PResult<(PLFunction, Vec<(Rational, Rational)>)> {
        self.expect(Tok::LBrace)?;
        self.key("monomials")?;
        let monomials = self.pair_list()?;
        self.expect(Tok::RBrace)?;
        match PLFunction::from_monomials(&monomials) {
            Ok(f) => Ok((f, monomials)),
            Err(e) => self.err(e.to_string()),
        }
    }

    fn parse_mat(&mut self) -> PResult<TropMatrix> {
        self.expect(Tok::LBrace)?;
        self.key("rows")?;
        self.expect(Tok::LBracket)?;
        let mut rows: Vec<Vec<TropValue>> = vec![Vec::new()];
        loop {
            rows.last_mut().unwrap().push(self.trop_value()?);
            match self.next() {
                Some(Tok::Comma) => {}
                Some(Tok::Semicolon) => rows.push(Vec::new()),
                Some(Tok::RBracket) => break,
                other => {
                    self.pos = self.pos.saturating_sub(1);
                    return self.err(format!("expected `,`, `;` or `]`, found {other:?}"));
                }
            }
        }
        self.expect(Tok::RBrace)?;
        match TropMatrix::new(rows) {
            Ok(m) => Ok(m),
            Err(e) => self.err(e.to_string()),
        }
    }

    fn parse_poly(&mut self) -> PResult<TropPolynomial> {
        self.expect(Tok::LBrace)?;
        self.key("nvars")?;
        let nvars = self.integer()? as usize;
        self.key("degree")?;
        let degree = self.integer()?;
        self.key("terms")?;
        let mut terms = Vec::new();
        while self.peek() == Some(&Tok::LParen) {
            self.expect(Tok::LParen)?;
            self.expect(Tok::LBracket)?;
            let mut index = vec![self.integer()?];
            while self.peek() == Some(&Tok::Comma) {
                self.next();
                index.push(self.integer()?);
            }
            self.expect(Tok::RBracket)?;
            self.expect(Tok::Comma)?;
            let coeff = self.trop_value()?;
            self.expect(Tok::RParen)?;
            terms.push((index, coeff));
        }
        self.expect(Tok::RBrace)?;
        match TropPolynomial::new(nvars, degree, &terms) {
            Ok(p) => Ok(p),
            Err(e) => self.err(e.to_string()),
        }
    }

    fn parse_curve_block(&mut self) -> PResult<(usize, Vec<String>)> {
        self.expect(Tok::LBrace)?;
        self.key("n")?;
        let n = self.integer()? as usize;
        self.key("components")?;
        let names = self.name_list()?;
        self.expect(Tok::RBrace)?;
        Ok((n, names))
    }

    fn parse_grid_value(&mut self) -> PResult<Vec<Rational>> {
        let start = self.rational()?;
        self.expect(Tok::Colon)?;
        let stop = self.rational()?;
        self.expect(Tok::Colon)?;
        let step = self.rational()?;
        match expand_grid(&start, &stop, &step) {
            Ok(g) => Ok(g),
            Err(e) => self.err(e),
        }
    }

    fn parse_instance(&mut self) -> PResult<InstanceDecl> {
        self.expect(Tok::LBrace)?;
        self.key("curve")?;
        let curve = self.word()?;
        self.key("polys")?;
        let polys = self.name_list()?;
        let mut decl = InstanceDecl {
            curve,
            polys,
            c: None,
            grid: None,
            tol: None,
        };
        while let Some(Tok::Word(w)) = self.peek() {
            let w = w.clone();
            match w.as_str() {
                "c" => {
                    self.key("c")?;
                    decl.c = Some(self.rational()?);
                }
                "grid" => {
                    self.key("grid")?;
                    decl.grid = Some(self.parse_grid_value()?);
                }
                "tol" => {
                    self.key("tol")?;
                    decl.tol = Some(self.rational()?);
                }
                _ => return self.err(format!("unknown instance field `{w}`")),
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(decl)
    }
}

/// Expands `start:stop:step` into the inclusive arithmetic grid.
pub fn expand_grid(start: &Rational, stop: &Rational, step: &Rational) -> Result<Vec<Rational>, String> {
    use num_traits::Zero;
    if step <= &Rational::zero() {
        return Err(format!("grid step must be positive, got {step}"));
    }
    if stop < start {
        return Err(format!("grid stop {stop} is below start {start}"));
    }
    let mut out = Vec::new();
    let mut r = start.clone();
    while &r <= stop {
        out.push(r.clone());
        r += step;
    }
    Ok(out)
}

/// Parses a full document, resolving curve references.
pub fn parse_document(text: &str) -> PResult<InputDocument> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let mut doc = InputDocument::default();
    let mut names: Vec<String> = Vec::new();

    while parser.peek().is_some() {
        let kind = parser.word()?;
        let name = parser.word()?;
        if names.contains(&name) {
            parser.pos -= 1;
            return parser.err(format!("duplicate declaration name `{name}`"));
        }
        names.push(name.clone());
        match kind.as_str() {
            "pl" => {
                let f = parser.parse_pl()?;
                doc.functions.insert(name, f);
            }
            "entire" => {
                let (f, monomials) = parser.parse_entire()?;
                doc.functions.insert(name.clone(), f);
                doc.entire_form.insert(name, monomials);
            }
            "mat" => {
                let m = parser.parse_mat()?;
                doc.matrices.insert(name, m);
            }
            "poly" => {
                let p = parser.parse_poly()?;
                doc.polynomials.insert(name, p);
            }
            "curve" => {
                let (n, component_names) = parser.parse_curve_block()?;
                if component_names.len() != n + 1 {
                    parser.pos -= 1;
                    return parser.err(format!(
                        "curve `{name}` declares n={n} but lists {} components",
                        component_names.len()
                    ));
                }
                let mut components = Vec::new();
                for cname in &component_names {
                    match doc.functions.get(cname) {
                        Some(f) => components.push(f.clone()),
                        None => {
                            parser.pos -= 1;
                            return parser
                                .err(format!("curve `{name}` references unknown function `{cname}`"));
                        }
                    }
                }
                match TropCurve::new(components) {
                    Ok(curve) => {
                        doc.curves.insert(name.clone(), curve);
                        doc.curve_components.insert(name, component_names);
                    }
                    Err(e) => {
                        parser.pos -= 1;
                        return parser.err(format!("curve `{name}`: {e}"));
                    }
                }
            }
            "instance" => {
                let decl = parser.parse_instance()?;
                if !doc.curves.contains_key(&decl.curve) {
                    parser.pos -= 1;
                    return parser.err(format!(
                        "instance `{name}` references unknown curve `{}`",
                        decl.curve
                    ));
                }
                for p in &decl.polys {
                    if !doc.polynomials.contains_key(p) {
                        parser.pos -= 1;
                        return parser.err(format!(
                            "instance `{name}` references unknown polynomial `{p}`"
                        ));
                    }
                }
                doc.instances.insert(name, decl);
            }
            other => {
                parser.pos = parser.pos.saturating_sub(2);
                return parser.err(format!("unknown block kind `{other}`"));
            }
        }
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use trop_core::rational::rat_int;

    #[test]
    fn parses_minimal_entire_block() {
        let doc = parse_document("entire f { monomials=(1,0)(0,0) }").unwrap();
        let f = &doc.functions["f"];
        let expected =
            PLFunction::from_monomials(&[(rat_int(1), rat_int(0)), (rat_int(0), rat_int(0))])
                .unwrap();
        assert!(f.pl_equal(&expected).unwrap());
    }

    #[test]
    fn parses_pl_block_with_window() {
        let text = "pl g { left_slope=-1 points=(0,1)(2,3) right_slope=1/2 window=-4,6 }";
        let doc = parse_document(text).unwrap();
        let g = &doc.functions["g"];
        assert_eq!(g.evaluate(&rat_int(1)).unwrap(), rat_int(2));
        assert!(g.window().is_some());
    }

    #[test]
    fn dangling_reference_reports_location() {
        let err = parse_document("curve c { n=1 components=f0,f1 }").unwrap_err();
        assert!(err.message.contains("unknown function"));
        assert!(err.line >= 1);
    }

    #[test]
    fn duplicate_names_rejected() {
        let err =
            parse_document("entire f { monomials=(1,0) }\nentire f { monomials=(2,0) }")
                .unwrap_err();
        assert!(err.message.contains("duplicate"));
    }

    #[test]
    fn non_homogeneous_poly_rejected() {
        let err = parse_document("poly p { nvars=2 degree=2 terms=([1,0],0) }").unwrap_err();
        assert!(err.message.contains("degree"));
    }

    #[test]
    fn parses_matrix_and_instance() {
        let text = "\
entire f0 { monomials=(0,0) }
entire f1 { monomials=(1,0)(0,0) }
curve c { n=1 components=f0,f1 }
poly p { nvars=2 degree=1 terms=([1,0],0)([0,1],0) }
mat a { rows=[1,-inf;-inf,1] }
instance i { curve=c polys=p,p c=1 grid=1:10:1 tol=1/20 }
";
        let doc = parse_document(text).unwrap();
        assert_eq!(doc.matrices["a"].dim(), 2);
        let inst = &doc.instances["i"];
        assert_eq!(inst.grid.as_ref().unwrap().len(), 10);
        assert_eq!(inst.tol, Some(trop_core::rational::rat(1, 20)));
    }

    #[test]
    fn grid_expansion() {
        let g = expand_grid(&rat_int(1), &rat_int(4), &rat_int(1)).unwrap();
        assert_eq!(g.len(), 4);
        let g = expand_grid(
            &trop_core::rational::rat(1, 2),
            &rat_int(3),
            &trop_core::rational::rat(1, 2),
        )
        .unwrap();
        assert_eq!(g.len(), 6);
        assert!(expand_grid(&rat_int(1), &rat_int(4), &rat_int(0)).is_err());
    }
}
