//! Rational expressions over `p` and `k`, and the rule patterns that select
//! them.

use nupair_core::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Rational),
    P,
    K,
    Neg(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl Expr {
    pub fn eval(&self, p: u64, k: u32) -> Result<Rational, String> {
        Ok(match self {
            Expr::Const(c) => c.clone(),
            Expr::P => Rational::from(p as i64),
            Expr::K => Rational::from(k as i64),
            Expr::Neg(e) => -&e.eval(p, k)?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(p, k)?, b.eval(p, k)?);
                match op {
                    Op::Add => &a + &b,
                    Op::Sub => &a - &b,
                    Op::Mul => &a * &b,
                    Op::Div => {
                        if b.is_zero() {
                            return Err(format!("division by zero at p={p}, k={k}"));
                        }
                        &a / &b
                    }
                    Op::Pow => {
                        if !b.is_integer() {
                            return Err(format!("non-integer exponent {b}"));
                        }
                        let e = i64::try_from(b.numer()).map_err(|_| format!("exponent {b} too large"))?;
                        a.pow(e).ok_or_else(|| format!("0 raised to {e} at p={p}, k={k}"))?
                    }
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    P,
    K,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        chars.next();
        out.push(match c {
            ' ' | '\t' => continue,
            '0'..='9' | '.' => {
                let mut lit = String::from(c);
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit() || **d == '.') {
                    chars.next();
                    lit.push(d);
                }
                Tok::Num(lit.parse().map_err(|_| format!("bad number '{lit}'"))?)
            }
            'p' => Tok::P,
            'k' => Tok::K,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => return Err(format!("unexpected character '{other}'")),
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).cloned()
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr, String> {
        let mut lhs = self.term()?;
        while let Some(op) = match self.peek() {
            Some(Tok::Plus) => Some(Op::Add),
            Some(Tok::Minus) => Some(Op::Sub),
            _ => None,
        } {
            self.bump();
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, String> {
        let mut lhs = self.unary()?;
        while let Some(op) = match self.peek() {
            Some(Tok::Star) => Some(Op::Mul),
            Some(Tok::Slash) => Some(Op::Div),
            _ => None,
        } {
            self.bump();
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, String> {
        if self.peek() == Some(Tok::Minus) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.peek() == Some(Tok::Caret) {
            self.bump();
            return Ok(Expr::Bin(Op::Pow, Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, String> {
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Const(v)),
            Some(Tok::P) => Ok(Expr::P),
            Some(Tok::K) => Ok(Expr::K),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err("missing ')'".into()),
                }
            }
            Some(t) => Err(format!("unexpected {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, String> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    if p.toks.is_empty() {
        return Err("empty expression".into());
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input in '{}'", src.trim()));
    }
    Ok(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    P,
    K,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

/// Conjunction of comparisons such as `p=2, k>=2`; empty matches everything.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Pattern(Vec<(Var, Cmp, u64)>);

impl Pattern {
    pub fn matches(&self, p: u64, k: u32) -> bool {
        self.0.iter().all(|&(var, cmp, v)| {
            let x = match var {
                Var::P => p,
                Var::K => k as u64,
            };
            match cmp {
                Cmp::Eq => x == v,
                Cmp::Ne => x != v,
                Cmp::Lt => x < v,
                Cmp::Le => x <= v,
                Cmp::Gt => x > v,
                Cmp::Ge => x >= v,
            }
        })
    }
}

pub fn parse_pattern(src: &str) -> Result<Pattern, String> {
    let src = src.trim();
    if src == "otherwise" || src == "*" {
        return Ok(Pattern::default());
    }
    let mut out = Vec::new();
    for cond in src.split(',') {
        let cond = cond.trim();
        let (var, rest) = match cond.chars().next() {
            Some('p') => (Var::P, &cond[1..]),
            Some('k') => (Var::K, &cond[1..]),
            _ => return Err(format!("condition '{cond}' must start with p or k")),
        };
        let rest = rest.trim_start();
        let (cmp, value) = [
            ("!=", Cmp::Ne),
            ("<=", Cmp::Le),
            (">=", Cmp::Ge),
            ("==", Cmp::Eq),
            ("=", Cmp::Eq),
            ("<", Cmp::Lt),
            (">", Cmp::Gt),
        ]
        .iter()
        .find_map(|(s, c)| rest.strip_prefix(s).map(|v| (*c, v)))
        .ok_or_else(|| format!("condition '{cond}' has no comparison"))?;
        let value = value
            .trim()
            .parse()
            .map_err(|_| format!("condition '{cond}' must compare with a nonnegative integer"))?;
        out.push((var, cmp, value));
    }
    Ok(Pattern(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(src: &str, p: u64, k: u32) -> Rational {
        parse_expr(src).unwrap().eval(p, k).unwrap()
    }

    #[test]
    fn precedence_and_power() {
        assert_eq!(eval("1 + 2 * 3", 2, 1), Rational::from(7));
        assert_eq!(eval("-p^k", 3, 2), Rational::from(-9));
        assert_eq!(eval("(1 - 1/p)^-1", 2, 1), Rational::from(2));
        assert_eq!(eval("2^3^2", 2, 1), Rational::from(512));
        assert_eq!(eval("p^(k-1)*(p-1)", 5, 2), Rational::from(20));
        assert_eq!(eval("0.125 * p", 4, 1), Rational::new(1, 2));
    }

    #[test]
    fn errors() {
        assert!(parse_expr("").is_err());
        assert!(parse_expr("p +").is_err());
        assert!(parse_expr("(p").is_err());
        assert!(parse_expr("q").is_err());
        assert!(parse_expr("1.2.3").is_err());
        assert!(parse_expr("1/(p-2)").unwrap().eval(2, 1).is_err());
        assert!(parse_expr("p^(1/2)").unwrap().eval(2, 1).is_err());
    }

    #[test]
    fn patterns() {
        let pat = parse_pattern("p=2, k>=2").unwrap();
        assert!(pat.matches(2, 3));
        assert!(!pat.matches(2, 1));
        assert!(!pat.matches(3, 2));
        assert!(parse_pattern("otherwise").unwrap().matches(97, 5));
        assert!(parse_pattern("p!=2").unwrap().matches(3, 1));
        assert!(parse_pattern("n=2").is_err());
        assert!(parse_pattern("p~2").is_err());
    }
}
