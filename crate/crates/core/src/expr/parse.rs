use thiserror::Error;

use super::{BinOp, Expression, Func, Node, Var};

/// Trees deeper than this are rejected so that evaluation and printing never
/// exhaust the stack.
pub const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("empty expression")]
    Empty,
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("malformed number {0:?}")]
    MalformedNumber(String),
    #[error("numeric literal {0:?} is out of range")]
    LiteralOutOfRange(String),
    #[error("unknown identifier {0:?} (variables are x, t, y)")]
    UnknownIdentifier(String),
    #[error("unknown function {0:?}")]
    UnknownFunction(String),
    #[error("function {0:?} must be followed by '('")]
    MissingCallParen(String),
    #[error("unbalanced parenthesis: missing ')'")]
    MissingCloseParen,
    #[error("unbalanced parenthesis: unexpected ')'")]
    UnexpectedCloseParen,
    #[error("expected an operand, found {0}")]
    ExpectedOperand(String),
    #[error("trailing input starting with {0}")]
    TrailingTokens(String),
    #[error("expression nests deeper than {MAX_DEPTH} levels")]
    TooDeep,
}

/// Syntax error with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(BinOp),
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(name) => format!("identifier {name:?}"),
            Tok::Op(op) => format!("'{}'", op.symbol()),
            Tok::LParen => "'('".to_string(),
            Tok::RParen => "')'".to_string(),
            Tok::End => "end of input".to_string(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(offset: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { offset, kind }
    }

    fn peek_byte(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn eat_digits(&mut self) -> usize {
        let start = self.pos;
        while matches!(self.peek_byte(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        self.pos - start
    }

    fn number(&mut self, start: usize) -> Result<Tok, ParseError> {
        let int_digits = self.eat_digits();
        let mut frac_digits = 0;
        if self.peek_byte() == Some(b'.') {
            self.pos += 1;
            frac_digits = self.eat_digits();
        }
        if int_digits == 0 && frac_digits == 0 {
            return Err(Self::err(
                start,
                ParseErrorKind::MalformedNumber(self.src[start..self.pos].to_string()),
            ));
        }
        if matches!(self.peek_byte(), Some(b'e' | b'E')) {
            self.pos += 1;
            if matches!(self.peek_byte(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.eat_digits() == 0 {
                return Err(Self::err(
                    start,
                    ParseErrorKind::MalformedNumber(self.src[start..self.pos].to_string()),
                ));
            }
        }
        let text = &self.src[start..self.pos];
        let value: f64 = text
            .parse()
            .map_err(|_| Self::err(start, ParseErrorKind::MalformedNumber(text.to_string())))?;
        if !value.is_finite() {
            return Err(Self::err(
                start,
                ParseErrorKind::LiteralOutOfRange(text.to_string()),
            ));
        }
        Ok(Tok::Num(value))
    }

    fn next(&mut self) -> Result<(usize, Tok), ParseError> {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
        let start = self.pos;
        let Some(c) = self.src[self.pos..].chars().next() else {
            return Ok((start, Tok::End));
        };
        let tok = match c {
            '0'..='9' | '.' => self.number(start)?,
            'a'..='z' | 'A'..='Z' | '_' => {
                while matches!(
                    self.peek_byte(),
                    Some(b'a'..=b'z' | b'A'..=b'Z' | b'0'..=b'9' | b'_')
                ) {
                    self.pos += 1;
                }
                Tok::Ident(self.src[start..self.pos].to_string())
            }
            _ => {
                self.pos += c.len_utf8();
                match c {
                    '+' => Tok::Op(BinOp::Add),
                    '-' => Tok::Op(BinOp::Sub),
                    '*' => Tok::Op(BinOp::Mul),
                    '/' => Tok::Op(BinOp::Div),
                    '^' => Tok::Op(BinOp::Pow),
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    other => return Err(Self::err(start, ParseErrorKind::UnexpectedChar(other))),
                }
            }
        };
        Ok((start, tok))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    offset: usize,
    nesting: usize,
}

type Parsed = Result<(Node, usize), ParseError>;

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer { src, pos: 0 };
        let (offset, tok) = lexer.next()?;
        Ok(Parser {
            lexer,
            tok,
            offset,
            nesting: 0,
        })
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        let (offset, tok) = self.lexer.next()?;
        self.tok = tok;
        self.offset = offset;
        Ok(())
    }

    fn fail<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.offset,
            kind,
        })
    }

    fn check_depth(&self, depth: usize) -> Result<usize, ParseError> {
        if depth > MAX_DEPTH {
            self.fail(ParseErrorKind::TooDeep)
        } else {
            Ok(depth)
        }
    }

    fn descend(&mut self) -> Result<(), ParseError> {
        self.nesting += 1;
        if self.nesting > MAX_DEPTH {
            return self.fail(ParseErrorKind::TooDeep);
        }
        Ok(())
    }

    fn binary(&self, op: BinOp, lhs: (Node, usize), rhs: (Node, usize)) -> Parsed {
        let depth = self.check_depth(1 + lhs.1.max(rhs.1))?;
        Ok((Node::Binary(op, Box::new(lhs.0), Box::new(rhs.0)), depth))
    }

    fn expr(&mut self) -> Parsed {
        let mut lhs = self.term()?;
        while let Tok::Op(op @ (BinOp::Add | BinOp::Sub)) = self.tok {
            self.advance()?;
            let rhs = self.term()?;
            lhs = self.binary(op, lhs, rhs)?;
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Parsed {
        let mut lhs = self.unary()?;
        while let Tok::Op(op @ (BinOp::Mul | BinOp::Div)) = self.tok {
            self.advance()?;
            let rhs = self.unary()?;
            lhs = self.binary(op, lhs, rhs)?;
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Parsed {
        if self.tok == Tok::Op(BinOp::Sub) {
            self.descend()?;
            self.advance()?;
            let (inner, depth) = self.unary()?;
            self.nesting -= 1;
            let depth = self.check_depth(depth + 1)?;
            return Ok((Node::Neg(Box::new(inner)), depth));
        }
        self.power()
    }

    fn power(&mut self) -> Parsed {
        let base = self.primary()?;
        if self.tok == Tok::Op(BinOp::Pow) {
            self.advance()?;
            self.descend()?;
            let exponent = self.unary()?;
            self.nesting -= 1;
            return self.binary(BinOp::Pow, base, exponent);
        }
        Ok(base)
    }

    fn parenthesized(&mut self) -> Parsed {
        // current token is '('
        self.descend()?;
        self.advance()?;
        let inner = self.expr()?;
        if self.tok != Tok::RParen {
            return self.fail(ParseErrorKind::MissingCloseParen);
        }
        self.advance()?;
        self.nesting -= 1;
        Ok(inner)
    }

    fn primary(&mut self) -> Parsed {
        match std::mem::replace(&mut self.tok, Tok::End) {
            Tok::Num(value) => {
                self.advance()?;
                Ok((Node::Num(value), 1))
            }
            Tok::LParen => {
                self.tok = Tok::LParen;
                self.parenthesized()
            }
            Tok::Ident(name) => {
                let name_offset = self.offset;
                self.advance()?;
                let calls = self.tok == Tok::LParen;
                match (Var::from_name(&name), Func::from_name(&name), calls) {
                    (Some(var), _, _) => Ok((Node::Var(var), 1)),
                    (None, Some(func), true) => {
                        let (arg, depth) = self.parenthesized()?;
                        let depth = self.check_depth(depth + 1)?;
                        Ok((Node::Call(func, Box::new(arg)), depth))
                    }
                    (None, Some(_), false) => Err(ParseError {
                        offset: name_offset,
                        kind: ParseErrorKind::MissingCallParen(name),
                    }),
                    (None, None, true) => Err(ParseError {
                        offset: name_offset,
                        kind: ParseErrorKind::UnknownFunction(name),
                    }),
                    (None, None, false) => Err(ParseError {
                        offset: name_offset,
                        kind: ParseErrorKind::UnknownIdentifier(name),
                    }),
                }
            }
            Tok::RParen => {
                self.tok = Tok::RParen;
                self.fail(ParseErrorKind::UnexpectedCloseParen)
            }
            other => {
                let found = other.describe();
                self.tok = other;
                self.fail(ParseErrorKind::ExpectedOperand(found))
            }
        }
    }
}

/// Parses `text` into an [`Expression`].
pub fn parse(text: &str) -> Result<Expression, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError {
            offset: 0,
            kind: ParseErrorKind::Empty,
        });
    }
    let mut parser = Parser::new(text)?;
    let (root, _) = parser.expr()?;
    match &parser.tok {
        Tok::End => Ok(Expression::new(root)),
        Tok::RParen => parser.fail(ParseErrorKind::UnexpectedCloseParen),
        other => parser.fail(ParseErrorKind::TrailingTokens(other.describe())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(v: f64) -> Box<Node> {
        Box::new(Node::Num(v))
    }

    fn var(v: Var) -> Box<Node> {
        Box::new(Node::Var(v))
    }

    fn err_kind(text: &str) -> (usize, ParseErrorKind) {
        let e = parse(text).unwrap_err();
        (e.offset, e.kind)
    }

    #[test]
    fn precedence_of_sum_and_product() {
        let e = parse("1+2*x").unwrap();
        let expected = Node::Binary(
            BinOp::Add,
            num(1.0),
            Box::new(Node::Binary(BinOp::Mul, num(2.0), var(Var::X))),
        );
        assert_eq!(e.root(), &expected);
    }

    #[test]
    fn power_is_right_associative_and_binds_tighter_than_minus() {
        let e = parse("2^3^2").unwrap();
        let expected = Node::Binary(
            BinOp::Pow,
            num(2.0),
            Box::new(Node::Binary(BinOp::Pow, num(3.0), num(2.0))),
        );
        assert_eq!(e.root(), &expected);

        let e = parse("-2^2").unwrap();
        assert_eq!(
            e.root(),
            &Node::Neg(Box::new(Node::Binary(BinOp::Pow, num(2.0), num(2.0))))
        );
    }

    #[test]
    fn left_associative_subtraction_and_division() {
        let e = parse("8/4/2").unwrap();
        let expected = Node::Binary(
            BinOp::Div,
            Box::new(Node::Binary(BinOp::Div, num(8.0), num(4.0))),
            num(2.0),
        );
        assert_eq!(e.root(), &expected);
    }

    #[test]
    fn kernel_of_first_example_parses() {
        let e = parse("x*(1+2*x)*exp(t*(x-t))*y").unwrap();
        assert_eq!(
            e.free_variables().into_iter().collect::<Vec<_>>(),
            vec![Var::X, Var::T, Var::Y]
        );
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(parse(" 1 +\t2 * x\n").unwrap(), parse("1+2*x").unwrap());
    }

    #[test]
    fn number_forms() {
        for (text, value) in [
            ("1", 1.0),
            ("1.", 1.0),
            (".5", 0.5),
            ("2.5e-3", 2.5e-3),
            ("1E+2", 100.0),
        ] {
            assert_eq!(parse(text).unwrap().root(), &Node::Num(value), "{text}");
        }
    }

    #[test]
    fn positioned_errors() {
        assert_eq!(err_kind(""), (0, ParseErrorKind::Empty));
        assert_eq!(err_kind("(1+2"), (4, ParseErrorKind::MissingCloseParen));
        assert_eq!(err_kind("1+2)"), (3, ParseErrorKind::UnexpectedCloseParen));
        assert_eq!(
            err_kind("1 + z"),
            (4, ParseErrorKind::UnknownIdentifier("z".into()))
        );
        assert_eq!(
            err_kind("2*foo(x)"),
            (2, ParseErrorKind::UnknownFunction("foo".into()))
        );
        assert_eq!(
            err_kind("sin x"),
            (0, ParseErrorKind::MissingCallParen("sin".into()))
        );
        assert_eq!(
            err_kind("1 2"),
            (2, ParseErrorKind::TrailingTokens("number 2".into()))
        );
        assert_eq!(
            err_kind("2x"),
            (1, ParseErrorKind::TrailingTokens("identifier \"x\"".into()))
        );
        assert_eq!(err_kind("1 $ 2"), (2, ParseErrorKind::UnexpectedChar('$')));
        assert_eq!(
            err_kind("1e999"),
            (0, ParseErrorKind::LiteralOutOfRange("1e999".into()))
        );
        assert_eq!(
            err_kind("1e"),
            (0, ParseErrorKind::MalformedNumber("1e".into()))
        );
        assert_eq!(
            err_kind("3*"),
            (2, ParseErrorKind::ExpectedOperand("end of input".into()))
        );
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let deep = format!("{}x{}", "(".repeat(10_000), ")".repeat(10_000));
        assert_eq!(parse(&deep).unwrap_err().kind, ParseErrorKind::TooDeep);
        let minus = format!("{}x", "-".repeat(10_000));
        assert_eq!(parse(&minus).unwrap_err().kind, ParseErrorKind::TooDeep);
        let long_sum = vec!["x"; 10_000].join("+");
        assert_eq!(parse(&long_sum).unwrap_err().kind, ParseErrorKind::TooDeep);
        let ok = format!("{}x{}", "(".repeat(100), ")".repeat(100));
        assert!(parse(&ok).is_ok());
    }

    #[test]
    fn error_message_names_offset() {
        let e = parse("1 + z").unwrap_err();
        assert_eq!(
            e.to_string(),
            "at byte 4: unknown identifier \"z\" (variables are x, t, y)"
        );
    }
}
