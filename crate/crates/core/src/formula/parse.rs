//! Recursive-descent parser for the infix formula syntax.
//!
//! Precedence, tightest first: `!`, `&`, `|`, `->` (right-assoc), `<->`
//! (left-assoc). `#` starts a comment running to the end of the line.

use super::{Formula, FormulaArena, FormulaError};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> FormulaError {
    FormulaError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn advance(n: usize, i: &mut usize, col: &mut usize) {
    *i += n;
    *col += n;
}

fn lex(text: &str) -> Result<Vec<Token>, FormulaError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(1, &mut i, &mut col);
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            _ => {}
        }
        let tok = match c {
            '!' => {
                advance(1, &mut i, &mut col);
                Tok::Not
            }
            '&' => {
                advance(1, &mut i, &mut col);
                Tok::And
            }
            '|' => {
                advance(1, &mut i, &mut col);
                Tok::Or
            }
            '(' => {
                advance(1, &mut i, &mut col);
                Tok::LParen
            }
            ')' => {
                advance(1, &mut i, &mut col);
                Tok::RParen
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                advance(2, &mut i, &mut col);
                Tok::Implies
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                advance(3, &mut i, &mut col);
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '.')
                {
                    i += 1;
                }
                col += i - start;
                let word: String = chars[start..i].iter().collect();
                match word.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word),
                }
            }
            other => return Err(syntax(line, col, format!("unexpected character `{other}`"))),
        };
        out.push(Token {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    arena: &'a mut FormulaArena,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn bump(&mut self) -> &Token {
        let t = &self.tokens[self.pos];
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> FormulaError {
        let t = &self.tokens[self.pos];
        syntax(
            t.line,
            t.column,
            format!("expected {expected}, found {}", t.tok.describe()),
        )
    }

    fn equiv(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implication()?;
            lhs = self.arena.store_mut().iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(self.arena.store_mut().implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut parts = vec![self.conjunction()?];
        while *self.peek() == Tok::Or {
            self.bump();
            parts.push(self.conjunction()?);
        }
        Ok(self.arena.store_mut().or(parts))
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut parts = vec![self.unary()?];
        while *self.peek() == Tok::And {
            self.bump();
            parts.push(self.unary()?);
        }
        Ok(self.arena.store_mut().and(parts))
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        if *self.peek() == Tok::Not {
            self.bump();
            let inner = self.unary()?;
            return Ok(self.arena.store_mut().not(inner));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Formula::TRUE)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::FALSE)
            }
            Tok::Ident(name) => {
                self.bump();
                self.arena.var_named(&name)
            }
            Tok::LParen => {
                let (line, column) = {
                    let t = self.bump();
                    (t.line, t.column)
                };
                let inner = self.equiv()?;
                if *self.peek() != Tok::RParen {
                    let t = &self.tokens[self.pos];
                    return Err(syntax(
                        t.line,
                        t.column,
                        format!(
                            "expected `)` to close `(` opened at {line}:{column}, found {}",
                            t.tok.describe()
                        ),
                    ));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

/// Parses `text` into `arena`, interning any new identifiers.
pub fn parse_formula(text: &str, arena: &mut FormulaArena) -> Result<Formula, FormulaError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        arena,
    };
    let f = p.equiv()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Node;

    fn parse(ar: &mut FormulaArena, s: &str) -> Formula {
        ar.parse(s).unwrap()
    }

    #[test]
    fn constant() {
        let mut ar = FormulaArena::new();
        assert_eq!(parse(&mut ar, "true"), Formula::TRUE);
        assert_eq!(parse(&mut ar, " false # trailing"), Formula::FALSE);
    }

    #[test]
    fn or_of_and() {
        let mut ar = FormulaArena::new();
        let f = parse(&mut ar, "a | (b & c)");
        let Node::Or(cs) = ar.node(f).clone() else { panic!() };
        let a = ar.var_named("a").unwrap();
        let bc = parse(&mut ar, "b & c");
        assert!(matches!(ar.node(bc), Node::And(_)));
        let mut expect = vec![a, bc];
        expect.sort();
        assert_eq!(cs.to_vec(), expect);
    }

    #[test]
    fn implication_is_eliminated() {
        let mut ar = FormulaArena::new();
        let f = parse(&mut ar, "e1 -> g1");
        let g1 = ar.var_named("g1").unwrap();
        let e1 = ar.var_named("e1").unwrap();
        let ne1 = ar.store_mut().not(e1);
        let Node::Or(cs) = ar.node(f) else { panic!() };
        assert!(cs.contains(&ne1) && cs.contains(&g1) && cs.len() == 2);
    }

    #[test]
    fn unbalanced_paren_is_a_syntax_error() {
        let mut ar = FormulaArena::new();
        let err = ar.parse("a & (b").unwrap_err();
        assert!(matches!(err, FormulaError::Syntax { line: 1, column: 7, .. }), "{err}");
    }

    #[test]
    fn error_positions_track_lines() {
        let mut ar = FormulaArena::new();
        let err = ar.parse("a &\n  b $").unwrap_err();
        assert!(matches!(err, FormulaError::Syntax { line: 2, column: 5, .. }), "{err}");
        assert!(ar.parse("a b").is_err());
        assert!(ar.parse("").is_err());
        assert!(ar.parse("a - b").is_err());
    }

    #[test]
    fn precedence_and_associativity() {
        let mut ar = FormulaArena::new();
        assert_eq!(parse(&mut ar, "!a & b | c"), parse(&mut ar, "((!a) & b) | c"));
        assert_eq!(parse(&mut ar, "a | b -> c"), parse(&mut ar, "(a | b) -> c"));
        assert_eq!(parse(&mut ar, "a -> b -> c"), parse(&mut ar, "a -> (b -> c)"));
        assert_eq!(parse(&mut ar, "a <-> b <-> c"), parse(&mut ar, "(a <-> b) <-> c"));
        assert_eq!(parse(&mut ar, "a -> b <-> c"), parse(&mut ar, "(a -> b) <-> c"));
        assert_eq!(parse(&mut ar, "true -> a"), parse(&mut ar, "a"));
    }

    #[test]
    fn reparse_yields_identical_node() {
        let mut ar = FormulaArena::new();
        let s = "(x.1 | !y) & (z <-> x.1) -> _w";
        assert_eq!(parse(&mut ar, s), parse(&mut ar, s));
    }
}
