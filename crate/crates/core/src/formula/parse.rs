use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{PrenexFormula, Qf, Relation};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("universal quantifiers are not supported (line {line}, column {col})")]
    UniversalQuantifierUnsupported { line: usize, col: usize },
    #[error("equational constraint {0} involves only free variables")]
    ECInFreeVariablesOnly(String),
    #[error("at least one quantified variable is required")]
    NoQuantifier,
    #[error("at least one equational constraint is required")]
    NoEquationalConstraint,
    #[error("quantified variables must be the last {k} variables of the header")]
    QuantifierOrder { k: usize },
    #[error("assumption involves the quantified variable {0}")]
    AssumptionOnBoundVariable(String),
}

/// Which input restrictions apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseMode {
    /// Quantifier elimination and solution systems: `k >= 1`, `t >= 1`, every
    /// equational constraint involves a quantified variable.
    Gsps,
    /// Any prenex existential formula, including quantifier-free ones.
    EvaluateOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    LBrack,
    RBrack,
    And,
    Or,
    Rel(Relation),
    Colon,
    Semi,
    Comma,
    Newline,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let next = chars.get(i + 1).copied();
        let push = |out: &mut Vec<Spanned>, tok| {
            out.push(Spanned {
                tok,
                line: start.0,
                col: start.1,
            })
        };
        let mut width = 1;
        match c {
            '\n' => {
                push(&mut out, Tok::Newline);
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            c if c.is_whitespace() => {}
            '+' => push(&mut out, Tok::Plus),
            '-' => push(&mut out, Tok::Minus),
            '*' => push(&mut out, Tok::Star),
            '^' => push(&mut out, Tok::Caret),
            '(' => push(&mut out, Tok::LParen),
            ')' => push(&mut out, Tok::RParen),
            '[' => push(&mut out, Tok::LBrack),
            ']' => push(&mut out, Tok::RBrack),
            ':' => push(&mut out, Tok::Colon),
            ';' => push(&mut out, Tok::Semi),
            ',' => push(&mut out, Tok::Comma),
            '/' if next == Some('\\') => {
                push(&mut out, Tok::And);
                width = 2;
            }
            '/' if next == Some('=') => {
                push(&mut out, Tok::Rel(Relation::Ne));
                width = 2;
            }
            '/' => push(&mut out, Tok::Slash),
            '\\' if next == Some('/') => {
                push(&mut out, Tok::Or);
                width = 2;
            }
            '<' if next == Some('=') => {
                push(&mut out, Tok::Rel(Relation::Le));
                width = 2;
            }
            '>' if next == Some('=') => {
                push(&mut out, Tok::Rel(Relation::Ge));
                width = 2;
            }
            '<' => push(&mut out, Tok::Rel(Relation::Lt)),
            '>' => push(&mut out, Tok::Rel(Relation::Gt)),
            '=' => push(&mut out, Tok::Rel(Relation::Eq)),
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                push(&mut out, Tok::Int(s.parse().unwrap()));
                width = j - i;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                push(&mut out, Tok::Ident(s));
                width = j - i;
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        }
        i += width;
        col += width;
    }
    Ok(out)
}

/// A polynomial with rational coefficients, `num / den` with `den > 0`.
#[derive(Clone)]
struct Frac {
    num: Poly,
    den: BigInt,
}

impl Frac {
    fn reduce(mut self) -> Frac {
        let g = self.num.integer_content().gcd(&self.den);
        if !g.is_zero() && !g.is_one() {
            self.num = self.num.div_integer(&g);
            self.den /= g;
        }
        if self.num.is_zero() {
            self.den = BigInt::one();
        }
        self
    }

    fn add(&self, o: &Frac, sign: i32) -> Frac {
        let a = self.num.scale(&o.den);
        let b = o.num.scale(&self.den);
        let num = if sign > 0 { &a + &b } else { &a - &b };
        Frac {
            num,
            den: &self.den * &o.den,
        }
        .reduce()
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
        .reduce()
    }
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    names: &'a [String],
}

impl<'a> Parser<'a> {
    fn new(toks: Vec<Spanned>, names: &'a [String]) -> Self {
        Parser {
            toks,
            pos: 0,
            names,
        }
    }

    fn skip_newlines(&mut self) {
        while matches!(self.peek(), Some(Tok::Newline)) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|s| &s.tok)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = match self.toks.get(self.pos) {
            Some(s) => (s.line, s.col),
            None => self.toks.last().map_or((1, 1), |s| (s.line, s.col + 1)),
        };
        ParseError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        self.skip_inline_newlines();
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    /// Newlines only matter between top-level items; inside a formula they
    /// are whitespace.
    fn skip_inline_newlines(&mut self) {
        self.skip_newlines();
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_inline_newlines();
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err("expected an identifier")),
        }
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name).map(|i| i + 1)
    }

    fn starts_primary(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen)
        )
    }

    fn expr(&mut self) -> Result<Frac, ParseError> {
        self.skip_inline_newlines();
        let mut sign = 1;
        match self.peek() {
            Some(Tok::Minus) => {
                sign = -1;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let n = self.names.len();
        let zero = Frac {
            num: Poly::zero(n),
            den: BigInt::one(),
        };
        let mut acc = zero.add(&first, sign);
        loop {
            self.skip_inline_newlines();
            let s = match self.peek() {
                Some(Tok::Plus) => 1,
                Some(Tok::Minus) => -1,
                _ => break,
            };
            self.pos += 1;
            let t = self.term()?;
            acc = acc.add(&t, s);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Frac, ParseError> {
        let mut acc = self.power()?;
        loop {
            self.skip_inline_newlines();
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = acc.mul(&f);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let f = self.power()?;
                    if !f.num.is_constant() || f.num.is_zero() {
                        return Err(self.err("division only by nonzero constants"));
                    }
                    let c = f.num.constant_value();
                    let mut inv = Frac {
                        num: Poly::constant(self.names.len(), f.den),
                        den: c,
                    };
                    if inv.den.is_negative() {
                        inv.den = -inv.den;
                        inv.num = -inv.num;
                    }
                    acc = acc.mul(&inv);
                }
                _ if self.starts_primary() => {
                    let f = self.power()?;
                    acc = acc.mul(&f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Frac, ParseError> {
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let e = match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    self.pos += 1;
                    e
                }
                _ => return Err(self.err("expected an integer exponent")),
            };
            let e: u32 = e
                .try_into()
                .map_err(|_| self.err("exponent out of range"))?;
            if e > crate::poly::DEFAULT_DEGREE_CAP * 4 {
                return Err(self.err("exponent out of range"));
            }
            return Ok(Frac {
                num: base.num.pow(e),
                den: num_traits::pow(base.den, e as usize),
            });
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Frac, ParseError> {
        self.skip_inline_newlines();
        let n = self.names.len();
        match self.peek().cloned() {
            Some(Tok::Int(c)) => {
                self.pos += 1;
                Ok(Frac {
                    num: Poly::constant(n, c),
                    den: BigInt::one(),
                })
            }
            Some(Tok::Ident(name)) => match self.var_index(&name) {
                Some(v) => {
                    self.pos += 1;
                    Ok(Frac {
                        num: Poly::var(n, v),
                        den: BigInt::one(),
                    })
                }
                None => Err(self.err(format!("unknown variable '{name}'"))),
            },
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            _ => Err(self.err("expected a polynomial")),
        }
    }

    /// `lhs rel rhs` as a folded atom.
    fn comparison(&mut self) -> Result<(Qf, bool), ParseError> {
        let lhs = self.expr()?;
        self.skip_inline_newlines();
        let rel = match self.peek() {
            Some(Tok::Rel(r)) => *r,
            _ => return Err(self.err("expected a relation")),
        };
        self.pos += 1;
        let rhs = self.expr()?;
        let diff = lhs.add(&rhs, -1);
        Ok((Qf::atom(diff.num, rel), rel == Relation::Eq))
    }

    /// `matrix := clause ("/\" clause)*`, returned as a flat clause list.
    /// Each entry carries whether it is a top-level equation.
    fn matrix(&mut self) -> Result<Vec<(Qf, bool)>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.clause(&mut out)?;
            self.skip_inline_newlines();
            if self.peek() == Some(&Tok::And) {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(out)
    }

    fn clause(&mut self, out: &mut Vec<(Qf, bool)>) -> Result<(), ParseError> {
        self.skip_inline_newlines();
        if self.peek() == Some(&Tok::LBrack) {
            self.pos += 1;
            let mut alternatives = vec![self.matrix()?];
            loop {
                self.skip_inline_newlines();
                if self.peek() == Some(&Tok::Or) {
                    self.pos += 1;
                    alternatives.push(self.matrix()?);
                } else {
                    break;
                }
            }
            self.expect(Tok::RBrack, "']'")?;
            if alternatives.len() == 1 {
                out.extend(alternatives.pop().unwrap());
            } else {
                let alts = alternatives
                    .into_iter()
                    .map(|m| Qf::and(m.into_iter().map(|(q, _)| q).collect()))
                    .collect();
                out.push((Qf::or(alts), false));
            }
            Ok(())
        } else {
            out.push(self.comparison()?);
            Ok(())
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_newlines();
        self.pos >= self.toks.len()
    }
}

/// Parses a polynomial over the named variables; rational coefficients are
/// cleared by the least common denominator.
pub fn parse_poly(text: &str, names: &[String]) -> Result<Poly, ParseError> {
    let mut p = Parser::new(lex(text)?, names);
    let f = p.expr()?;
    if !p.at_end() {
        return Err(p.err("unexpected input after polynomial"));
    }
    Ok(f.num)
}

/// Parses a matrix (`clause /\ clause ...`, with bracketed disjunctions).
pub fn parse_qf(text: &str, names: &[String]) -> Result<Qf, ParseError> {
    let mut p = Parser::new(lex(text)?, names);
    let m = p.matrix()?;
    if !p.at_end() {
        return Err(p.err("unexpected input after formula"));
    }
    Ok(Qf::and(m.into_iter().map(|(q, _)| q).collect()))
}

/// Parses a formula file.
pub fn parse(text: &str, mode: ParseMode) -> Result<PrenexFormula, ParseError> {
    let toks = lex(text)?;
    let mut names: Vec<String> = Vec::new();
    // Header.
    let rest = {
        let mut p = Parser::new(toks.clone(), &[]);
        p.skip_newlines();
        match p.peek() {
            Some(Tok::Ident(s)) if s == "vars" => p.pos += 1,
            _ => return Err(p.err("expected 'vars:' header")),
        }
        p.expect(Tok::Colon, "':'")?;
        loop {
            let name = p.ident()?;
            if names.contains(&name) {
                return Err(p.err(format!("duplicate variable '{name}'")));
            }
            names.push(name);
            p.skip_inline_newlines();
            match p.peek() {
                Some(Tok::Comma) => p.pos += 1,
                Some(Tok::Semi) => {
                    p.pos += 1;
                    break;
                }
                _ => return Err(p.err("expected ',' or ';'")),
            }
        }
        p.pos
    };
    parse_body(toks, rest, names, mode)
}

fn parse_body(
    toks: Vec<Spanned>,
    start: usize,
    names: Vec<String>,
    mode: ParseMode,
) -> Result<PrenexFormula, ParseError> {
    let mut p = Parser::new(toks, &names);
    p.pos = start;
    let mut assumption: Option<Qf> = None;
    let mut quantified: Vec<String> = Vec::new();
    let mut body: Option<Vec<(Qf, bool)>> = None;
    while !p.at_end() {
        match p.peek().cloned() {
            Some(Tok::Ident(s)) if s == "assume" && p.peek_at(1) == Some(&Tok::LBrack) => {
                p.pos += 2;
                let m = p.matrix()?;
                p.expect(Tok::RBrack, "']'")?;
                let q = Qf::and(m.into_iter().map(|(q, _)| q).collect());
                assumption = Some(match assumption.take() {
                    None => q,
                    Some(prev) => Qf::and(vec![prev, q]),
                });
            }
            Some(Tok::LParen) | Some(Tok::LBrack) if body.is_none() => {
                while p.peek() == Some(&Tok::LParen) {
                    let (line, col) = (p.toks[p.pos].line, p.toks[p.pos].col);
                    p.pos += 1;
                    match p.ident()?.as_str() {
                        "E" => {}
                        "A" => return Err(ParseError::UniversalQuantifierUnsupported { line, col }),
                        _ => return Err(p.err("expected quantifier 'E'")),
                    }
                    let v = p.ident()?;
                    if p.var_index(&v).is_none() {
                        return Err(p.err(format!("unknown variable '{v}'")));
                    }
                    if quantified.contains(&v) {
                        return Err(p.err(format!("variable '{v}' quantified twice")));
                    }
                    quantified.push(v);
                    p.expect(Tok::RParen, "')'")?;
                    p.skip_inline_newlines();
                }
                p.expect(Tok::LBrack, "'['")?;
                let m = p.matrix()?;
                p.expect(Tok::RBrack, "']'")?;
                body = Some(m);
            }
            _ => return Err(p.err("expected a formula or an assume line")),
        }
    }
    let Some(body) = body else {
        return Err(p.err("missing formula"));
    };
    let n = names.len();
    let k = quantified.len();
    let s = n - k;
    if quantified.iter().any(|v| p.var_index(v).unwrap() <= s) {
        return Err(ParseError::QuantifierOrder { k });
    }
    let mut ecs = Vec::new();
    let mut rest = Vec::new();
    for (q, is_eq) in body {
        match q {
            Qf::Atom(a) if is_eq => ecs.push(a.poly),
            other => rest.push(other),
        }
    }
    let psi = Qf::and(rest);
    if let Some(a) = &assumption {
        if let Some(atom) = a.atoms().into_iter().find(|a| a.poly.level() > s) {
            return Err(ParseError::AssumptionOnBoundVariable(
                names[atom.poly.level() - 1].clone(),
            ));
        }
    }
    if mode == ParseMode::Gsps {
        if k == 0 {
            return Err(ParseError::NoQuantifier);
        }
        if ecs.is_empty() {
            return Err(ParseError::NoEquationalConstraint);
        }
        if let Some(f) = ecs.iter().find(|f| f.level() <= s) {
            return Err(ParseError::ECInFreeVariablesOnly(f.to_text(&names)));
        }
    }
    Ok(PrenexFormula {
        vars: names,
        k,
        ecs,
        psi,
        assumption,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(s: &str) -> Vec<String> {
        s.split(',').map(|x| x.trim().to_string()).collect()
    }

    #[test]
    fn implicit_multiplication_and_powers() {
        let n = names("r,u");
        let a = parse_poly("3r u^2", &n).unwrap();
        let b = parse_poly("3*r*u^2", &n).unwrap();
        assert_eq!(a, b);
        let c = parse_poly("(u + 1)(u - 1)", &n).unwrap();
        assert_eq!(c, parse_poly("u^2 - 1", &n).unwrap());
        assert_eq!(
            parse_poly("-(1 - r) - (u - 2)", &n).unwrap(),
            parse_poly("r - u + 1", &n).unwrap()
        );
    }

    #[test]
    fn rational_coefficients_are_cleared() {
        let n = names("x");
        assert_eq!(
            parse_poly("x/2 - 1/3", &n).unwrap(),
            parse_poly("3x - 2", &n).unwrap()
        );
    }

    #[test]
    fn fgt_header() {
        let text = "vars: c, b, a, z, y, x;\n(E z)(E y)(E x)[a x^2 + x + y = 0 /\\ b x + z = 0 /\\ c y + y - z = 0]";
        let f = parse(text, ParseMode::Gsps).unwrap();
        assert_eq!((f.t(), f.k, f.s()), (3, 3, 3));
        assert_eq!(f.psi, Qf::True);
    }

    #[test]
    fn single_equation() {
        let f = parse("vars: x, y;\n(E y)[y^2 - x = 0]", ParseMode::Gsps).unwrap();
        assert_eq!((f.t(), f.k, f.s()), (1, 1, 1));
    }

    #[test]
    fn quantifier_free_depends_on_mode() {
        let text = "vars: x;\n[x = 1]";
        assert_eq!(parse(text, ParseMode::Gsps), Err(ParseError::NoQuantifier));
        let f = parse(text, ParseMode::EvaluateOnly).unwrap();
        assert_eq!(f.k, 0);
    }

    #[test]
    fn rejections() {
        assert!(matches!(
            parse("vars: x, y;\n(A y)[y = x]", ParseMode::Gsps),
            Err(ParseError::UniversalQuantifierUnsupported { .. })
        ));
        assert!(matches!(
            parse("vars: x, y;\n(E y)[x - 1 = 0 /\\ y > 0]", ParseMode::Gsps),
            Err(ParseError::ECInFreeVariablesOnly(_))
        ));
        assert!(matches!(
            parse("vars: x, y;\n(E x)[x = y]", ParseMode::Gsps),
            Err(ParseError::QuantifierOrder { k: 1 })
        ));
        assert!(matches!(
            parse("vars: x, y;\n(E y)[y ^ = x]", ParseMode::Gsps),
            Err(ParseError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn nested_equations_stay_in_psi() {
        let f = parse(
            "vars: x, y;\n(E y)[y^2 = x /\\ [y = 1 \\/ y < 0] /\\ [x > 0 /\\ y - 2 = 0]]",
            ParseMode::Gsps,
        )
        .unwrap();
        assert_eq!(f.t(), 2);
        assert!(matches!(f.psi, Qf::And(ref v) if v.len() == 2));
    }

    #[test]
    fn assumption_line() {
        let text = "vars: a, x;\nassume [a /= 0]\n(E x)[a x - 1 = 0]";
        let f = parse(text, ParseMode::Gsps).unwrap();
        assert!(f.assumption.is_some());
        let bad = "vars: a, x;\nassume [x /= 0]\n(E x)[a x - 1 = 0]";
        assert!(matches!(
            parse(bad, ParseMode::Gsps),
            Err(ParseError::AssumptionOnBoundVariable(_))
        ));
    }

    #[test]
    fn print_roundtrip() {
        let text = "vars: r, b, u;\nassume [r /= 0]\n(E b)(E u)[r > 1 /\\ 3u^2 + 2r u - 1 = 0 /\\ [u < 1 \\/ b >= 2 /\\ u /= 0] /\\ u^3 + r u^2 - u + r - 2b = 0]";
        let f = parse(text, ParseMode::Gsps).unwrap();
        let printed = f.to_text();
        let g = parse(&printed, ParseMode::Gsps).unwrap();
        assert_eq!(f, g);
        assert_eq!(printed, g.to_text());
    }
}
