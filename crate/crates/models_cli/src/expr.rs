//! Lie expressions in model files.

use std::fmt;

use exactlin::Rational;
use gla_free::{FreeGradedLie, GeneratorSet, LieElement, LieError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Gen(String),
    Bracket(Box<Expr>, Box<Expr>),
}

/// A linear combination of atoms, kept as written: terms are neither merged
/// nor reordered. The empty combination is `0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<(Rational, Atom)>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn gen(name: &str) -> Self {
        Expr {
            terms: vec![(Rational::one(), Atom::Gen(name.to_string()))],
        }
    }

    pub fn bracket(x: Expr, y: Expr) -> Self {
        Expr {
            terms: vec![(Rational::one(), Atom::Bracket(Box::new(x), Box::new(y)))],
        }
    }

    pub fn scaled(mut self, c: &Rational) -> Self {
        for (k, _) in &mut self.terms {
            *k = &*k * c;
        }
        self
    }

    pub fn plus(mut self, other: Expr) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn minus(self, other: Expr) -> Self {
        self.plus(other.scaled(&Rational::from_integer(-1)))
    }

    /// The degree every nonzero term has, `None` for expressions that are
    /// syntactically zero.
    pub fn degree(&self, gens: &GeneratorSet) -> Result<Option<i64>, ExprError> {
        let mut out = None;
        for (_, atom) in &self.terms {
            let d = match atom {
                Atom::Gen(name) => {
                    let i = gens
                        .index_of(name)
                        .ok_or_else(|| ExprError(format!("unknown generator {name:?}")))?;
                    Some(gens.get(i).degree)
                }
                Atom::Bracket(x, y) => match (x.degree(gens)?, y.degree(gens)?) {
                    (Some(p), Some(q)) => Some(p + q),
                    _ => None,
                },
            };
            match (out, d) {
                (Some(a), Some(b)) if a != b => {
                    return Err(ExprError(format!("{self} mixes degrees {a} and {b}")));
                }
                (None, Some(b)) => out = Some(b),
                _ => {}
            }
        }
        Ok(out)
    }

    /// Evaluates in the free Lie algebra on `gens`, as an element of degree
    /// `degree`.
    pub fn evaluate(&self, gens: &GeneratorSet, degree: i64) -> Result<LieElement, ExprError> {
        match self.degree(gens)? {
            Some(d) if d != degree => Err(ExprError(format!("{self} has degree {d}, expected {degree}"))),
            _ => self.eval_at(gens, degree),
        }
    }

    fn eval_at(&self, gens: &GeneratorSet, degree: i64) -> Result<LieElement, ExprError> {
        let mut acc = LieElement::zero(degree);
        for (c, atom) in &self.terms {
            let x = match atom {
                Atom::Gen(name) => LieElement::generator(gens, name).map_err(lie)?,
                Atom::Bracket(x, y) => match (x.degree(gens)?, y.degree(gens)?) {
                    (Some(p), Some(q)) => {
                        LieElement::commutator(&x.eval_at(gens, p)?, &y.eval_at(gens, q)?)
                    }
                    _ => continue,
                },
            };
            acc = acc.add(&x.scale(c)).map_err(lie)?;
        }
        Ok(acc)
    }
}

fn lie(e: LieError) -> ExprError {
    ExprError(e.to_string())
}

/// Why an expression could not be read or evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError(pub String);

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `x` in the basis of `l`, written with the basis bracketings.
pub fn canonical(l: &FreeGradedLie, x: &LieElement) -> Result<Expr, LieError> {
    let coords = l.coordinates(x)?;
    let n = x.degree();
    let mut terms = Vec::new();
    for (i, c) in coords.iter() {
        let label = l.label(n, i);
        let atom = parse_expr(label)
            .ok()
            .and_then(|e| e.terms.into_iter().next())
            .map(|(_, a)| a)
            .ok_or_else(|| LieError::InvalidModel(format!("unreadable basis label {label}")))?;
        terms.push((c.clone(), atom));
    }
    Ok(Expr { terms })
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Gen(name) => f.write_str(name),
            Atom::Bracket(x, y) => write!(f, "[{x},{y}]"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (c, atom)) in self.terms.iter().enumerate() {
            let mag = if c.is_negative() {
                f.write_str(if k == 0 { "-" } else { " - " })?;
                -c
            } else {
                if k > 0 {
                    f.write_str(" + ")?;
                }
                c.clone()
            };
            if mag.is_one() {
                write!(f, "{atom}")?;
            } else {
                write!(f, "{mag}*{atom}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Name(String),
    Number(String),
    Slash,
    Star,
    Plus,
    Minus,
    Open,
    Close,
    Comma,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Token>, ExprError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let single = match c {
            '/' => Some(Token::Slash),
            '*' => Some(Token::Star),
            '+' => Some(Token::Plus),
            '-' | '−' => Some(Token::Minus),
            '[' => Some(Token::Open),
            ']' => Some(Token::Close),
            ',' => Some(Token::Comma),
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push(t);
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Token::Number(chars[start..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || matches!(chars[i], '_' | '#' | '\'')) {
                i += 1;
            }
            out.push(Token::Name(chars[start..i].iter().collect()));
        } else {
            return Err(ExprError(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Token, what: &str) -> Result<(), ExprError> {
        match self.next() {
            Some(ref u) if *u == t => Ok(()),
            Some(u) => Err(ExprError(format!("expected {what}, found {u:?}"))),
            None => Err(ExprError(format!("expected {what} at end of input"))),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut out = if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            self.term()?.scaled(&Rational::from_integer(-1))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    out = out.plus(self.term()?);
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    out = out.minus(self.term()?);
                }
                _ => return Ok(out),
            }
        }
    }

    fn rational(&mut self, p: String) -> Result<Rational, ExprError> {
        let text = if self.peek() == Some(&Token::Slash) {
            self.pos += 1;
            match self.next() {
                Some(Token::Number(q)) => format!("{p}/{q}"),
                _ => return Err(ExprError("expected a denominator after '/'".into())),
            }
        } else {
            p
        };
        text.parse().map_err(|_| ExprError(format!("bad rational {text}")))
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        if let Some(Token::Number(p)) = self.peek().cloned() {
            self.pos += 1;
            let c = self.rational(p)?;
            if self.peek() == Some(&Token::Star) {
                self.pos += 1;
                return Ok(self.factor()?.scaled(&c));
            }
            if c.is_zero() {
                return Ok(Expr::zero());
            }
            return Err(ExprError(format!("the scalar {c} is not a Lie element")));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        match self.next() {
            Some(Token::Name(n)) => Ok(Expr::gen(&n)),
            Some(Token::Open) => {
                let x = self.expr()?;
                self.expect(Token::Comma, "','")?;
                let y = self.expr()?;
                self.expect(Token::Close, "']'")?;
                Ok(Expr::bracket(x, y))
            }
            Some(Token::LParen) => {
                let x = self.expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(x)
            }
            Some(t) => Err(ExprError(format!("unexpected {t:?}"))),
            None => Err(ExprError("unexpected end of expression".into())),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr, ExprError> {
    let mut p = Parser {
        tokens: tokenize(s)?,
        pos: 0,
    };
    if p.tokens.is_empty() {
        return Err(ExprError("empty expression".into()));
    }
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(t) => Err(ExprError(format!("trailing {t:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn parses_and_prints() {
        let e = parse_expr("1/2 * [x1, x1] - [x2,x1] + 3*y").unwrap();
        assert_eq!(e.terms.len(), 3);
        assert_eq!(e.terms[0].0, q(1, 2));
        assert_eq!(e.terms[1].0, q(-1, 1));
        assert_eq!(e.to_string(), "1/2*[x1,x1] - [x2,x1] + 3*y");
        assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
        assert_eq!(parse_expr("0").unwrap(), Expr::zero());
        assert_eq!(Expr::zero().to_string(), "0");
        assert_eq!(parse_expr("-x").unwrap().to_string(), "-x");
    }

    #[test]
    fn parentheses_distribute() {
        let e = parse_expr("2*(a - 1/3*b)").unwrap();
        assert_eq!(e.to_string(), "2*a - 2/3*b");
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in ["", "[a,b", "a +", "2", "1/0*a", "a b", "[a;b]", "3/*a"] {
            assert!(parse_expr(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn degrees_and_evaluation() {
        let gens = GeneratorSet::new([("a", 1), ("b", 2)]).unwrap();
        let e = parse_expr("[a,b] + 2*[b,a]").unwrap();
        assert_eq!(e.degree(&gens).unwrap(), Some(3));
        let x = e.evaluate(&gens, 3).unwrap();
        let a = LieElement::generator(&gens, "a").unwrap();
        let b = LieElement::generator(&gens, "b").unwrap();
        let ab = LieElement::commutator(&a, &b);
        let ba = LieElement::commutator(&b, &a);
        assert_eq!(x, ab.add(&ba.scale(&q(2, 1))).unwrap());
        assert!(e.evaluate(&gens, 2).is_err());
        assert!(parse_expr("a + b").unwrap().degree(&gens).is_err());
        assert!(parse_expr("c").unwrap().degree(&gens).is_err());
        assert!(parse_expr("[0,a]").unwrap().evaluate(&gens, 5).unwrap().is_zero());
    }
}
