//! Expression syntax for series arguments.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr     := term (("+"|"-") term)*
//! term     := factor (("*"|"/") factor)*
//! factor   := "-" factor | atom ("^" "("? signed-int ")"?)?
//! atom     := rational | variable | "(" expr ")" | func "(" expr ")"
//! func     := "exp" | "log" | "theta" | "D"
//! rational := int ("/" posint)?        (longest match)
//! variable := "z" | "w"
//! ```
//!
//! Negative powers are written `z^-1` or `z^(-1)`; a bare `z^-` is a parse
//! error. Rational literals bind tighter than division: `1/2*z` is the
//! literal one half times `z`, while `1/(2-z)` is a series division.

use std::fmt;

use bracket_series::Rational;

/// A parsed series expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Literal(Rational),
    Var(char),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Neg(Box<Expr>),
    Apply(Func, Box<Expr>),
}

/// Built-in series functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Theta,
    /// Differentiation `D(f) = f'`.
    D,
}

impl Expr {
    /// The set of variables appearing in the expression, as (has z, has w).
    pub fn variables(&self) -> (bool, bool) {
        match self {
            Expr::Literal(_) => (false, false),
            Expr::Var(v) => (*v == 'z', *v == 'w'),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let (az, aw) = a.variables();
                let (bz, bw) = b.variables();
                (az || bz, aw || bw)
            }
            Expr::Pow(a, _) | Expr::Neg(a) | Expr::Apply(_, a) => a.variables(),
        }
    }
}

/// A parse failure: byte position, what was expected there, what was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at position {}: expected ", self.position)?;
        for (i, e) in self.expected.iter().enumerate() {
            if i > 0 {
                write!(f, " or ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ", found {}", self.found)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Int(s) => format!("integer '{s}'"),
            Token::Ident(s) => format!("identifier '{s}'"),
            Token::Plus => "'+'".into(),
            Token::Minus => "'-'".into(),
            Token::Star => "'*'".into(),
            Token::Slash => "'/'".into(),
            Token::Caret => "'^'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
        }
    }
}

struct Lexer<'a> {
    input: &'a str,
}

impl Lexer<'_> {
    fn tokenize(&self) -> Result<Vec<(usize, Token)>, ParseError> {
        let mut tokens = Vec::new();
        let bytes = self.input.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            let start = i;
            match c {
                ' ' | '\t' | '\n' | '\r' => {
                    i += 1;
                }
                '0'..='9' => {
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    tokens.push((start, Token::Int(self.input[start..i].into())));
                }
                'a'..='z' | 'A'..='Z' => {
                    while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                        i += 1;
                    }
                    tokens.push((start, Token::Ident(self.input[start..i].into())));
                }
                '+' => {
                    tokens.push((start, Token::Plus));
                    i += 1;
                }
                '-' => {
                    tokens.push((start, Token::Minus));
                    i += 1;
                }
                '*' => {
                    tokens.push((start, Token::Star));
                    i += 1;
                }
                '/' => {
                    tokens.push((start, Token::Slash));
                    i += 1;
                }
                '^' => {
                    tokens.push((start, Token::Caret));
                    i += 1;
                }
                '(' => {
                    tokens.push((start, Token::LParen));
                    i += 1;
                }
                ')' => {
                    tokens.push((start, Token::RParen));
                    i += 1;
                }
                other => {
                    return Err(ParseError {
                        position: start,
                        expected: vec!["a number, variable, operator or parenthesis"],
                        found: format!("'{other}'"),
                    });
                }
            }
        }
        Ok(tokens)
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn found(&self) -> String {
        self.peek().map_or("end of input".into(), Token::describe)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError { position: self.position(), expected, found: self.found() }
    }

    fn expect(&mut self, token: Token, name: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(&token) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(vec![name]))
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.parse_term()?));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.parse_term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.parse_factor()?));
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.parse_factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.parse_factor()?)));
        }
        let atom = self.parse_atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let exponent = self.parse_exponent()?;
            return Ok(Expr::Pow(Box::new(atom), exponent));
        }
        Ok(atom)
    }

    /// `"("? signed-int ")"?` with the parenthesis balanced if present.
    fn parse_exponent(&mut self) -> Result<i64, ParseError> {
        let parenthesized = if self.peek() == Some(&Token::LParen) {
            self.pos += 1;
            true
        } else {
            false
        };
        let negative = if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let digits = match self.peek() {
            Some(Token::Int(s)) => {
                let s = s.clone();
                self.pos += 1;
                s
            }
            _ => return Err(self.error(vec!["an integer exponent"])),
        };
        let magnitude: i64 = digits
            .parse()
            .map_err(|_| self.error(vec!["an exponent that fits in 64 bits"]))?;
        if parenthesized {
            self.expect(Token::RParen, "')'")?;
        }
        Ok(if negative { -magnitude } else { magnitude })
    }

    fn parse_atom(&mut self) -> Result<Expr, ParseError> {
        let position = self.position();
        match self.bump() {
            Some(Token::Int(numerator)) => {
                // Longest match: `int / posint` is a single rational literal
                // when the slash is immediately followed by an integer.
                if self.peek() == Some(&Token::Slash) {
                    if let Some((_, Token::Int(_))) = self.tokens.get(self.pos + 1) {
                        self.pos += 1;
                        let Some(Token::Int(denominator)) = self.bump() else {
                            unreachable!("lookahead checked an integer");
                        };
                        return Rational::parse(&format!("{numerator}/{denominator}"))
                            .map(Expr::Literal)
                            .map_err(|_| ParseError {
                                position,
                                expected: vec!["a rational with nonzero denominator"],
                                found: format!("'{numerator}/{denominator}'"),
                            });
                    }
                }
                Ok(Expr::Literal(
                    Rational::parse(&numerator).expect("digit runs parse as integers"),
                ))
            }
            Some(Token::Ident(name)) => match name.as_str() {
                "z" => Ok(Expr::Var('z')),
                "w" => Ok(Expr::Var('w')),
                "exp" | "log" | "theta" | "D" => {
                    let func = match name.as_str() {
                        "exp" => Func::Exp,
                        "log" => Func::Log,
                        "theta" => Func::Theta,
                        _ => Func::D,
                    };
                    self.expect(Token::LParen, "'(' after function name")?;
                    let arg = self.parse_expr()?;
                    self.expect(Token::RParen, "')'")?;
                    Ok(Expr::Apply(func, Box::new(arg)))
                }
                _ => Err(ParseError {
                    position,
                    expected: vec!["'z'", "'w'", "'exp'", "'log'", "'theta'", "'D'"],
                    found: format!("identifier '{name}'"),
                }),
            },
            Some(Token::LParen) => {
                let inner = self.parse_expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(inner)
            }
            Some(other) => Err(ParseError {
                position,
                expected: vec!["a rational", "a variable", "'('", "a function"],
                found: other.describe(),
            }),
            None => Err(ParseError {
                position,
                expected: vec!["a rational", "a variable", "'('", "a function"],
                found: "end of input".into(),
            }),
        }
    }
}

/// Parses an expression, requiring the whole input to be consumed.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let tokens = Lexer { input: text }.tokenize()?;
    let mut parser = Parser { tokens, pos: 0, end: text.len() };
    let expr = parser.parse_expr()?;
    if parser.peek().is_some() {
        return Err(parser.error(vec!["an operator", "end of input"]));
    }
    Ok(expr)
}
