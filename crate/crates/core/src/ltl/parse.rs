use thiserror::Error;

use super::Ltl;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("negated until is outside the formula grammar: !{subterm}")]
    NegatedUntil { subterm: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Next,
    Finally,
    Globally,
    Until,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let single = match c {
            '!' => Some(Tok::Not),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push((pos, tok));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut ident = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    ident.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            let tok = match ident.as_str() {
                "X" => Tok::Next,
                "F" => Tok::Finally,
                "G" => Tok::Globally,
                "U" => Tok::Until,
                _ => Tok::Ident(ident),
            };
            out.push((pos, tok));
            continue;
        }
        return Err(ParseError::Syntax {
            pos,
            msg: format!("unexpected character '{c}'"),
        });
    }
    Ok(out)
}

/// Parse tree before negations are pushed to the leaves.
enum Raw {
    Prop(String),
    Not(Box<Raw>),
    And(Box<Raw>, Box<Raw>),
    Or(Box<Raw>, Box<Raw>),
    Next(Box<Raw>),
    Finally(Box<Raw>),
    Globally(Box<Raw>),
    Until(Box<Raw>, Box<Raw>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn disjunction(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.at += 1;
            let rhs = self.conjunction()?;
            lhs = Raw::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.until()?;
        while self.peek() == Some(&Tok::And) {
            self.at += 1;
            let rhs = self.until()?;
            lhs = Raw::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    // U is right-associative: a U b U c = a U (b U c)
    fn until(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.unary()?;
        if self.peek() == Some(&Tok::Until) {
            self.at += 1;
            let rhs = self.until()?;
            return Ok(Raw::Until(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Raw, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return self.error("unexpected end of input");
        };
        self.at += 1;
        match tok {
            Tok::Not => Ok(Raw::Not(Box::new(self.unary()?))),
            Tok::Next => Ok(Raw::Next(Box::new(self.unary()?))),
            Tok::Finally => Ok(Raw::Finally(Box::new(self.unary()?))),
            Tok::Globally => Ok(Raw::Globally(Box::new(self.unary()?))),
            Tok::Ident(name) => Ok(Raw::Prop(name)),
            Tok::LParen => {
                let inner = self.disjunction()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.error("expected ')'");
                }
                self.at += 1;
                Ok(inner)
            }
            _ => {
                self.at -= 1;
                self.error("expected a proposition, '!', 'X', 'F', 'G' or '('")
            }
        }
    }
}

fn to_nnf(raw: &Raw, negated: bool) -> Result<Ltl, ParseError> {
    Ok(match (raw, negated) {
        (Raw::Prop(name), neg) => Ltl::literal(name.as_str(), !neg),
        (Raw::Not(inner), neg) => to_nnf(inner, !neg)?,
        (Raw::And(l, r), false) => Ltl::and(to_nnf(l, false)?, to_nnf(r, false)?),
        (Raw::And(l, r), true) => Ltl::or(to_nnf(l, true)?, to_nnf(r, true)?),
        (Raw::Or(l, r), false) => Ltl::or(to_nnf(l, false)?, to_nnf(r, false)?),
        (Raw::Or(l, r), true) => Ltl::and(to_nnf(l, true)?, to_nnf(r, true)?),
        (Raw::Next(c), neg) => Ltl::next(to_nnf(c, neg)?),
        (Raw::Finally(c), false) => Ltl::finally(to_nnf(c, false)?),
        (Raw::Finally(c), true) => Ltl::globally(to_nnf(c, true)?),
        (Raw::Globally(c), false) => Ltl::globally(to_nnf(c, false)?),
        (Raw::Globally(c), true) => Ltl::finally(to_nnf(c, true)?),
        (Raw::Until(l, r), false) => Ltl::until(to_nnf(l, false)?, to_nnf(r, false)?),
        (Raw::Until(l, r), true) => {
            let subterm = Ltl::until(to_nnf(l, false)?, to_nnf(r, false)?);
            return Err(ParseError::NegatedUntil {
                subterm: subterm.to_string(),
            });
        }
    })
}

/// Parse an ASCII formula and rewrite it into negation normal form.
pub fn parse_ltl(text: &str) -> Result<Ltl, ParseError> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        at: 0,
        end: text.len(),
    };
    let raw = parser.disjunction()?;
    if parser.at != parser.toks.len() {
        return parser.error("unexpected trailing input");
    }
    to_nnf(&raw, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_finally() {
        let f = parse_ltl("F(a & F(b))").unwrap();
        let expected = Ltl::finally(Ltl::and(Ltl::prop("a"), Ltl::finally(Ltl::prop("b"))));
        assert_eq!(f, expected);
    }

    #[test]
    fn negated_finally_becomes_globally() {
        assert_eq!(
            parse_ltl("!(F a)").unwrap(),
            Ltl::globally(Ltl::not_prop("a"))
        );
    }

    #[test]
    fn nested_until() {
        let f = parse_ltl("a U (b U a)").unwrap();
        let expected = Ltl::until(Ltl::prop("a"), Ltl::until(Ltl::prop("b"), Ltl::prop("a")));
        assert_eq!(f, expected);
        assert_eq!(f.measure(), (5, 2));
    }

    #[test]
    fn nnf_rules() {
        assert_eq!(parse_ltl("!!a").unwrap(), Ltl::prop("a"));
        assert_eq!(
            parse_ltl("!(a & X b)").unwrap(),
            Ltl::or(Ltl::not_prop("a"), Ltl::next(Ltl::not_prop("b")))
        );
        assert_eq!(
            parse_ltl("!G(a | b)").unwrap(),
            Ltl::finally(Ltl::and(Ltl::not_prop("a"), Ltl::not_prop("b")))
        );
    }

    #[test]
    fn negated_until_is_rejected_with_subterm() {
        let err = parse_ltl("F(!(a U b))").unwrap_err();
        assert_eq!(
            err,
            ParseError::NegatedUntil {
                subterm: "(a U b)".into()
            }
        );
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_ltl("(a & b").unwrap_err() {
            ParseError::Syntax { pos, .. } => assert_eq!(pos, 6),
            e => panic!("unexpected {e:?}"),
        }
        match parse_ltl("a $ b").unwrap_err() {
            ParseError::Syntax { pos, .. } => assert_eq!(pos, 2),
            e => panic!("unexpected {e:?}"),
        }
        assert!(parse_ltl("").is_err());
        assert!(parse_ltl("a b").is_err());
        assert!(parse_ltl("F").is_err());
    }

    #[test]
    fn printed_forms_parse_back() {
        for text in ["F(a)", "(a U b)", "(G(!h) & F(a))", "X((a | !b))"] {
            let f = parse_ltl(text).unwrap();
            assert_eq!(parse_ltl(&f.to_string()).unwrap(), f);
        }
        assert_eq!(
            parse_ltl("(G(!h) & F(a))").unwrap().to_string(),
            "(G(!h) & F(a))"
        );
    }
}
