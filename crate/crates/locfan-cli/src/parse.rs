//! Text format for fan problems.
//!
//! ```text
//! ring weyl(t1,t2,x,y);
//! ideal: t1-y, t2-(y-(x-1)^2), (-2x+2)*dt2+dx, dt1+dt2+dy;
//! subspace: rows [[-1,0,0,0,1,0,0,0],[0,-1,0,0,0,1,0,0]];
//! region: local;
//! mode: local-fan;
//! ```
//!
//! Other statements: `base-point: 1/2, 3;`, `homogenization: alpha(1,2);`,
//! `weights: [-1,-2], [-2,-1];` (for compare-initials).

use std::sync::Arc;

use locfan_core::algebra::{Kind, RingSignature, VarNames, WeylElement};
use locfan_core::problem::RegionKind;
use locfan_core::scalar::Scalar;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    GlobalFan,
    LocalFan,
    NormalFan,
    CompareInitials,
    CheckFan,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::GlobalFan => "global-fan",
            Mode::LocalFan => "local-fan",
            Mode::NormalFan => "normal-fan",
            Mode::CompareInitials => "compare-initials",
            Mode::CheckFan => "check-fan",
        }
    }
    pub fn from_name(s: &str) -> Option<Mode> {
        [Mode::GlobalFan, Mode::LocalFan, Mode::NormalFan, Mode::CompareInitials, Mode::CheckFan]
            .into_iter()
            .find(|m| m.name() == s)
    }
}

/// Requested homogenization; `Auto` defers to the ring and region.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HomogChoice {
    Auto,
    Alpha(Option<Vec<u32>>),
    H11,
    Double,
    DoubleGenerators,
}

impl HomogChoice {
    pub fn parse(s: &str) -> Option<HomogChoice> {
        let s = s.trim();
        Some(match s {
            "auto" => HomogChoice::Auto,
            "alpha" => HomogChoice::Alpha(None),
            "h11" => HomogChoice::H11,
            "double" | "h01" => HomogChoice::Double,
            "double(generators)" => HomogChoice::DoubleGenerators,
            _ => {
                let inner = s.strip_prefix("alpha(")?.strip_suffix(')')?;
                let a = inner.split(',').map(|t| t.trim().parse::<u32>().ok().filter(|&k| k > 0)).collect::<Option<Vec<_>>>()?;
                HomogChoice::Alpha(Some(a))
            }
        })
    }
}

pub fn parse_region(s: &str) -> Option<RegionKind> {
    match s.trim() {
        "local" => Some(RegionKind::Local),
        "global" => Some(RegionKind::Global),
        "full" => Some(RegionKind::Full),
        _ => None,
    }
}

#[derive(Clone, Debug)]
pub struct ProblemInput {
    pub ring: Arc<RingSignature>,
    pub names: VarNames,
    pub generators: Vec<WeylElement>,
    /// Images of the parameter basis vectors in the weight space.
    pub subspace: Option<Vec<Vec<BigInt>>>,
    pub region: Option<RegionKind>,
    pub base_point: Option<Vec<Scalar>>,
    pub mode: Option<Mode>,
    pub homogenization: Option<HomogChoice>,
    pub weights: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let at = |tok| Token { tok, line: li + 1, col };
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let s = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[s..i].iter().collect();
                out.push(at(Tok::Num(digits.parse().unwrap())));
            } else if c.is_alphabetic() || c == '_' {
                let s = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '-' && is_keyword_dash(&chars, s, i)) {
                    i += 1;
                }
                out.push(at(Tok::Ident(chars[s..i].iter().collect())));
            } else if "+-*^/(),;:[]".contains(c) {
                out.push(at(Tok::Sym(c)));
                i += 1;
            } else {
                return Err(ParseError { line: li + 1, col, msg: format!("unexpected character '{c}'") });
            }
        }
    }
    Ok(out)
}

/// Dashes join words only in keywords such as `base-point` or `local-fan`.
fn is_keyword_dash(chars: &[char], start: usize, i: usize) -> bool {
    let word: String = chars[start..i].iter().collect();
    matches!(word.as_str(), "base" | "local" | "global" | "normal" | "compare" | "check")
        && chars.get(i + 1).is_some_and(|c| c.is_alphabetic())
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }
    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|t| (t.line, t.col)).unwrap_or(self.end)
    }
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError { line, col, msg: msg.into() })
    }
    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }
    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }
    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected a name"),
        }
    }
    fn uint(&mut self) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected a non-negative integer"),
        }
    }
    fn int(&mut self) -> Result<BigInt, ParseError> {
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        let n = self.uint()?;
        Ok(if neg { -n } else { n })
    }
    fn rational(&mut self) -> Result<Scalar, ParseError> {
        let p = self.int()?;
        if self.eat('/') {
            let q = self.uint()?;
            if q.is_zero() {
                return self.err("zero denominator");
            }
            return Ok(Scalar::new(p, q));
        }
        Ok(Scalar::from_integer(p))
    }
    fn rational_list(&mut self) -> Result<Vec<Scalar>, ParseError> {
        let mut v = vec![self.rational()?];
        while self.eat(',') {
            v.push(self.rational()?);
        }
        Ok(v)
    }
    fn bracket_row(&mut self) -> Result<Vec<Scalar>, ParseError> {
        self.expect('[')?;
        let v = self.rational_list()?;
        self.expect(']')?;
        Ok(v)
    }
}

struct ExprCtx<'a> {
    sig: &'a Arc<RingSignature>,
    names: &'a [String],
}

impl ExprCtx<'_> {
    fn expr(&self, p: &mut Parser) -> Result<WeylElement, ParseError> {
        let mut acc = if p.eat('-') {
            self.term(p)?.neg()
        } else {
            p.eat('+');
            self.term(p)?
        };
        loop {
            if p.eat('+') {
                acc = &acc + &self.term(p)?;
            } else if p.eat('-') {
                acc = &acc - &self.term(p)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(t: Option<&Tok>) -> bool {
        matches!(t, Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Sym('(')))
    }

    fn term(&self, p: &mut Parser) -> Result<WeylElement, ParseError> {
        let mut acc = self.factor(p)?;
        loop {
            if p.eat('*') {
                acc = &acc * &self.factor(p)?;
            } else if p.eat('/') {
                let q = p.uint()?;
                if q.is_zero() {
                    return p.err("division by zero");
                }
                acc = acc.scale(&Scalar::new(BigInt::one(), q));
            } else if Self::starts_factor(p.peek()) {
                acc = &acc * &self.factor(p)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&self, p: &mut Parser) -> Result<WeylElement, ParseError> {
        let base = self.atom(p)?;
        if p.eat('^') {
            let k = p.uint()?;
            let k: u32 = match u32::try_from(k) {
                Ok(k) => k,
                Err(_) => return p.err("exponent too large"),
            };
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&self, p: &mut Parser) -> Result<WeylElement, ParseError> {
        match p.peek().cloned() {
            Some(Tok::Num(n)) => {
                p.pos += 1;
                Ok(WeylElement::constant(self.sig, Scalar::from_integer(n)))
            }
            Some(Tok::Sym('(')) => {
                p.pos += 1;
                let e = self.expr(p)?;
                p.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                if let Some(i) = self.names.iter().position(|x| *x == name) {
                    p.pos += 1;
                    return Ok(WeylElement::x(self.sig, i));
                }
                if let Some(rest) = name.strip_prefix('d') {
                    if let Some(i) = self.names.iter().position(|x| x == rest) {
                        if !self.sig.is_weyl() {
                            return p.err(format!("derivation '{name}' needs a weyl ring"));
                        }
                        p.pos += 1;
                        return Ok(WeylElement::d(self.sig, i));
                    }
                }
                if name == "h" && self.sig.has_h() {
                    p.pos += 1;
                    return Ok(WeylElement::h(self.sig));
                }
                if name == "hp" && self.sig.has_hprime() {
                    p.pos += 1;
                    return Ok(WeylElement::hprime(self.sig));
                }
                p.err(format!("unknown variable '{name}'"))
            }
            _ => p.err("expected a number, a variable or '('"),
        }
    }
}

fn to_int_rows(rows: Vec<Vec<Scalar>>, p: &Parser) -> Result<Vec<Vec<BigInt>>, ParseError> {
    rows.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| if x.is_integer() { Ok(x.to_integer()) } else { p.err("subspace entries must be integers") })
                .collect()
        })
        .collect()
}

/// Parse a `rows [[..],[..]]` or bare `[[..],[..]]` matrix (also used by `--subspace`).
pub fn parse_rows(text: &str) -> Result<Vec<Vec<BigInt>>, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { end: end_of(text), toks, pos: 0 };
    let rows = rows_body(&mut p)?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(rows)
}

fn rows_body(p: &mut Parser) -> Result<Vec<Vec<BigInt>>, ParseError> {
    if p.peek() == Some(&Tok::Ident("rows".into())) {
        p.pos += 1;
    }
    p.expect('[')?;
    let mut rows = vec![p.bracket_row()?];
    while p.eat(',') {
        rows.push(p.bracket_row()?);
    }
    p.expect(']')?;
    to_int_rows(rows, p)
}

/// Parse a comma-separated rational vector (used by `--base-point`).
pub fn parse_vector(text: &str) -> Result<Vec<Scalar>, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { end: end_of(text), toks, pos: 0 };
    let v = p.rational_list()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(v)
}

/// One element of `sig`; `h` and `hp` name the homogenizing variables when present.
pub fn parse_element(text: &str, sig: &Arc<RingSignature>, names: &VarNames) -> Result<WeylElement, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { end: end_of(text), toks, pos: 0 };
    let e = ExprCtx { sig, names: &names.x }.expr(&mut p)?;
    match p.peek() {
        None => Ok(e),
        Some(_) => p.err("unexpected input after the expression"),
    }
}

fn end_of(text: &str) -> (usize, usize) {
    let lines: Vec<&str> = text.lines().collect();
    (lines.len().max(1), lines.last().map(|l| l.chars().count() + 1).unwrap_or(1))
}

pub fn parse_problem(text: &str) -> Result<ProblemInput, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { end: end_of(text), toks, pos: 0 };
    if p.peek() != Some(&Tok::Ident("ring".into())) {
        return p.err("a problem starts with 'ring poly(...)' or 'ring weyl(...)'");
    }
    p.pos += 1;
    let kind = match p.ident()?.as_str() {
        "poly" => Kind::Commutative,
        "weyl" => Kind::Weyl,
        other => {
            p.pos -= 1;
            return p.err(format!("unknown ring '{other}'"));
        }
    };
    p.expect('(')?;
    let mut names = vec![p.ident()?];
    while p.eat(',') {
        let (line, col) = p.here();
        let n = p.ident()?;
        if names.contains(&n) {
            return Err(ParseError { line, col, msg: format!("variable '{n}' declared twice") });
        }
        names.push(n);
    }
    p.expect(')')?;
    p.expect(';')?;
    let sig = Arc::new(match kind {
        Kind::Commutative => RingSignature::commutative(names.len()),
        Kind::Weyl => RingSignature::weyl(names.len()),
    });
    let mut input = ProblemInput {
        ring: sig.clone(),
        names: VarNames::new(names.clone()),
        generators: Vec::new(),
        subspace: None,
        region: None,
        base_point: None,
        mode: None,
        homogenization: None,
        weights: Vec::new(),
    };
    let ctx = ExprCtx { sig: &sig, names: &names };
    while p.peek().is_some() {
        let key = p.ident()?;
        p.expect(':')?;
        match key.as_str() {
            "ideal" => loop {
                let (line, col) = p.here();
                let g = ctx.expr(&mut p)?;
                if g.is_zero() {
                    return Err(ParseError { line, col, msg: "generator is zero".into() });
                }
                input.generators.push(g);
                if !p.eat(',') {
                    break;
                }
            },
            "subspace" => input.subspace = Some(rows_body(&mut p)?),
            "base-point" => input.base_point = Some(p.rational_list()?),
            "weights" => {
                input.weights.push(p.bracket_row()?);
                while p.eat(',') {
                    input.weights.push(p.bracket_row()?);
                }
            }
            "region" | "mode" | "homogenization" => {
                let s = p.here();
                let mut word = String::new();
                while let Some(t) = p.peek() {
                    if *t == Tok::Sym(';') {
                        break;
                    }
                    match p.next().unwrap() {
                        Tok::Num(n) => word.push_str(&n.to_string()),
                        Tok::Ident(x) => word.push_str(&x),
                        Tok::Sym(c) => word.push(c),
                    }
                }
                let bad = |what: &str| ParseError { line: s.0, col: s.1, msg: format!("unknown {what} '{word}'") };
                match key.as_str() {
                    "region" => input.region = Some(parse_region(&word).ok_or_else(|| bad("region"))?),
                    "mode" => input.mode = Some(Mode::from_name(&word).ok_or_else(|| bad("mode"))?),
                    _ => input.homogenization = Some(HomogChoice::parse(&word).ok_or_else(|| bad("homogenization"))?),
                }
            }
            other => {
                p.pos -= 2;
                return p.err(format!("unknown statement '{other}'"));
            }
        }
        p.expect(';')?;
    }
    if input.generators.is_empty() {
        return p.err("missing 'ideal:' statement");
    }
    Ok(input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use locfan_core::scalar::{frac, int};

    #[test]
    fn cusp() {
        let s = parse_problem("ring poly(x,y); ideal: x^3 - y^2; mode: local-fan;").unwrap();
        assert_eq!(s.mode, Some(Mode::LocalFan));
        assert_eq!(s.generators.len(), 1);
        assert_eq!(s.generators[0].display_with(&s.names), "x^3 - y^2");
    }

    #[test]
    fn bernstein_sato_input() {
        let s = parse_problem(
            "ring weyl(t1,t2,x,y);\nideal: t1-y, t2-(y-(x-1)^2), (-2x+2)*dt2+dx, dt1+dt2+dy;\nsubspace: rows [[-1,0,0,0,1,0,0,0],[0,-1,0,0,0,1,0,0]];",
        )
        .unwrap();
        let sig = &s.ring;
        let x = |i| WeylElement::x(sig, i);
        let d = |i| WeylElement::d(sig, i);
        let c = |k| WeylElement::constant(sig, int(k));
        assert_eq!(s.generators[0], &x(0) - &x(3));
        let xm = &x(2) - &c(1);
        assert_eq!(s.generators[1], &x(1) - &(&x(3) - &(&xm * &xm)));
        assert_eq!(s.generators[2], &(&(&(&c(-2) * &x(2)) + &c(2)) * &d(1)) + &d(2));
        assert_eq!(s.subspace.as_ref().unwrap().len(), 2);
    }

    #[test]
    fn weyl_products_are_normally_ordered() {
        let s = parse_problem("ring weyl(x); ideal: dx*x;").unwrap();
        assert_eq!(s.generators[0].display_with(&s.names), "x*dx + 1");
    }

    #[test]
    fn rationals_and_implicit_products() {
        let s = parse_problem("ring poly(x,y); ideal: 1/2 x y + 3/4; base-point: -1/3, 2;").unwrap();
        assert_eq!(s.generators[0].coeff(&[1, 1]), frac(1, 2));
        assert_eq!(s.base_point, Some(vec![frac(-1, 3), int(2)]));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_problem("ring poly(x,y);\nideal: x^-1;").unwrap_err();
        assert_eq!((e.line, e.col), (2, 10));
        let e = parse_problem("ring poly(x,y); ideal: z;").unwrap_err();
        assert!(e.msg.contains("unknown variable"));
        let e = parse_problem("ring poly(x); ideal: dx;").unwrap_err();
        assert!(e.msg.contains("weyl"));
        let e = parse_problem("ring poly(x); ideal: x - x;").unwrap_err();
        assert!(e.msg.contains("zero"));
        assert!(parse_problem("ring poly(x); ideal: x; region: sideways;").is_err());
        assert!(parse_problem("ring poly(x); ideal: (x;").is_err());
    }

    #[test]
    fn homogenized_elements() {
        let s = parse_problem("ring weyl(x); ideal: x;").unwrap();
        let h11 = Arc::new(s.ring.with_homogenization(locfan_core::algebra::Homogenization::H11).unwrap());
        let e = parse_element("dx*x - x*dx", &h11, &s.names).unwrap();
        assert_eq!(e, WeylElement::h(&h11).pow(2));
        assert!(parse_element("h", &s.ring, &s.names).is_err());
        assert!(parse_element("x x)", &h11, &s.names).is_err());
    }

    #[test]
    fn matrices_and_choices() {
        assert_eq!(parse_rows("[[1,0],[0,-1]]").unwrap().len(), 2);
        assert!(parse_rows("[[1/2,0]]").is_err());
        assert_eq!(HomogChoice::parse("alpha(1,2)"), Some(HomogChoice::Alpha(Some(vec![1, 2]))));
        assert_eq!(HomogChoice::parse("alpha(0)"), None);
        let s = parse_problem("ring poly(x,y); ideal: x; homogenization: alpha(2,3); weights: [-1,-2], [-2,-1];").unwrap();
        assert_eq!(s.homogenization, Some(HomogChoice::Alpha(Some(vec![2, 3]))));
        assert_eq!(s.weights.len(), 2);
    }
}
