//! Arithmetic expression DSL used by manifold definition files.
//!
//! Expressions are functions of declared coordinate names, with the usual
//! precedence (`^` > unary `-` > `*` `/` > `+` `-`), right-associative `^`,
//! the functions `exp`, `ln`, `sin`, `cos`, `sqrt`, and the predefined
//! constants `pi` and `e`. There is no implicit multiplication: `2x` is a
//! syntax error.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FuncKind {
    Exp,
    Ln,
    Sin,
    Cos,
    Sqrt,
}

impl FuncKind {
    fn name(self) -> &'static str {
        match self {
            FuncKind::Exp => "exp",
            FuncKind::Ln => "ln",
            FuncKind::Sin => "sin",
            FuncKind::Cos => "cos",
            FuncKind::Sqrt => "sqrt",
        }
    }
}

/// Immutable expression AST. Variables carry both their declared name and
/// their index into the evaluation environment, fixed at parse time.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var { name: String, index: usize },
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Func(FuncKind, Box<Expr>),
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    /// Evaluate with `values[i]` bound to the i-th declared variable.
    pub fn eval(&self, values: &[f64]) -> Result<f64> {
        let v = self.eval_inner(values)?;
        if !v.is_finite() {
            return Err(Error::EvalDomain {
                message: format!("non-finite result from `{self}`"),
            });
        }
        Ok(v)
    }

    fn eval_inner(&self, values: &[f64]) -> Result<f64> {
        match self {
            Expr::Num(v) => Ok(*v),
            Expr::Var { name, index } => {
                values
                    .get(*index)
                    .copied()
                    .ok_or_else(|| Error::EvalDomain {
                        message: format!("variable `{name}` is not bound"),
                    })
            }
            Expr::Neg(e) => Ok(-e.eval_inner(values)?),
            Expr::Bin(op, a, b) => {
                let x = a.eval_inner(values)?;
                let y = b.eval_inner(values)?;
                match op {
                    BinOp::Add => Ok(x + y),
                    BinOp::Sub => Ok(x - y),
                    BinOp::Mul => Ok(x * y),
                    BinOp::Div => {
                        if y == 0.0 {
                            Err(Error::EvalDomain {
                                message: "division by zero".into(),
                            })
                        } else {
                            Ok(x / y)
                        }
                    }
                    BinOp::Pow => Ok(x.powf(y)),
                }
            }
            Expr::Func(f, a) => {
                let x = a.eval_inner(values)?;
                match f {
                    FuncKind::Exp => Ok(x.exp()),
                    FuncKind::Ln => {
                        if x <= 0.0 {
                            Err(Error::EvalDomain {
                                message: format!("ln of non-positive argument {x}"),
                            })
                        } else {
                            Ok(x.ln())
                        }
                    }
                    FuncKind::Sin => Ok(x.sin()),
                    FuncKind::Cos => Ok(x.cos()),
                    FuncKind::Sqrt => {
                        if x < 0.0 {
                            Err(Error::EvalDomain {
                                message: format!("sqrt of negative argument {x}"),
                            })
                        } else {
                            Ok(x.sqrt())
                        }
                    }
                }
            }
        }
    }

    /// True if any variable node occurs in the tree.
    pub fn references_vars(&self) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var { .. } => true,
            Expr::Neg(e) | Expr::Func(_, e) => e.references_vars(),
            Expr::Bin(_, a, b) => a.references_vars() || b.references_vars(),
        }
    }

    /// Replace every variable with index ≥ `keep` by the constant
    /// `values[index - keep]`. Used to bind manifold-spec parameters while
    /// leaving coordinate variables (which come first) untouched.
    pub fn bind_trailing(&self, keep: usize, values: &[f64]) -> Expr {
        match self {
            Expr::Num(v) => Expr::Num(*v),
            Expr::Var { name, index } => {
                if *index >= keep {
                    Expr::Num(values[*index - keep])
                } else {
                    Expr::Var {
                        name: name.clone(),
                        index: *index,
                    }
                }
            }
            Expr::Neg(e) => neg(e.bind_trailing(keep, values)),
            Expr::Bin(op, a, b) => Expr::Bin(
                *op,
                Box::new(a.bind_trailing(keep, values)),
                Box::new(b.bind_trailing(keep, values)),
            ),
            Expr::Func(f, a) => Expr::Func(*f, Box::new(a.bind_trailing(keep, values))),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(BinOp::Pow, ..) => 4,
            _ => 5,
        }
    }
}

/// Negation that folds literals so `-1` and `-(1)` parse to the same node.
fn neg(e: Expr) -> Expr {
    match e {
        Expr::Num(v) => Expr::Num(-v),
        other => Expr::Neg(Box::new(other)),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
            if e.precedence() < min_prec {
                write!(f, "(")?;
                write!(f, "{e}")?;
                write!(f, ")")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Num(v) => {
                if *v < 0.0 || v.is_sign_negative() {
                    write!(f, "({v:?})")
                } else {
                    write!(f, "{v:?}")
                }
            }
            Expr::Var { name, .. } => write!(f, "{name}"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                child(f, e, 4)
            }
            Expr::Bin(op, a, b) => {
                let (sym, prec) = match op {
                    BinOp::Add => ("+", 1),
                    BinOp::Sub => ("-", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                    BinOp::Pow => ("^", 4),
                };
                if *op == BinOp::Pow {
                    // Right-associative: parenthesize a left child of equal precedence.
                    child(f, a, prec + 1)?;
                    write!(f, "{sym}")?;
                    child(f, b, prec)
                } else {
                    child(f, a, prec)?;
                    write!(f, " {sym} ")?;
                    // Left-associative: the right child needs strictly higher precedence.
                    child(f, b, prec + 1)
                }
            }
            Expr::Func(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

// ---------------------------------------------------------------------------
// Recursive-descent parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
}

/// Parse `text` over the declared variable names. Unknown identifiers are
/// rejected at parse time with their position.
pub fn parse(text: &str, vars: &[&str]) -> Result<Expr> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
        vars,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(Error::Syntax {
            pos: p.pos,
            message: format!("unexpected `{}`", p.rest_preview()),
        });
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn rest_preview(&self) -> String {
        let rest = &self.text[self.pos..];
        let take = rest.len().min(8);
        String::from_utf8_lossy(&rest[..take]).into_owned()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Bin(BinOp::Add, Box::new(lhs), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Bin(BinOp::Sub, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Bin(BinOp::Div, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(neg(inner));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            // `^` binds tighter than unary minus but allows `x^-2`.
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::Syntax {
                        pos: self.pos,
                        message: "expected `)`".into(),
                    });
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(_) => Err(Error::Syntax {
                pos: self.pos,
                message: format!("unexpected `{}`", self.rest_preview()),
            }),
            None => Err(Error::Syntax {
                pos: self.pos,
                message: "unexpected end of input".into(),
            }),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len()
            && (self.text[self.pos].is_ascii_digit() || self.text[self.pos] == b'.')
        {
            self.pos += 1;
        }
        // Exponent part: e or E followed by optional sign and digits.
        if self.pos < self.text.len() && matches!(self.text[self.pos], b'e' | b'E') {
            let mut look = self.pos + 1;
            if look < self.text.len() && matches!(self.text[look], b'+' | b'-') {
                look += 1;
            }
            if look < self.text.len() && self.text[look].is_ascii_digit() {
                self.pos = look;
                while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        if self.pos < self.text.len()
            && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
        {
            return Err(Error::Syntax {
                pos: self.pos,
                message: "implicit multiplication is not allowed".into(),
            });
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        s.parse::<f64>().map(Expr::Num).map_err(|_| Error::Syntax {
            pos: start,
            message: format!("bad number literal `{s}`"),
        })
    }

    fn identifier(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len()
            && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .to_string();
        if self.peek() == Some(b'(') {
            let func = match name.as_str() {
                "exp" => FuncKind::Exp,
                "ln" => FuncKind::Ln,
                "sin" => FuncKind::Sin,
                "cos" => FuncKind::Cos,
                "sqrt" => FuncKind::Sqrt,
                _ => return Err(Error::UnknownIdentifier { name, pos: start }),
            };
            self.pos += 1;
            let arg = self.expr()?;
            if self.peek() != Some(b')') {
                return Err(Error::Syntax {
                    pos: self.pos,
                    message: "expected `)` after function argument".into(),
                });
            }
            self.pos += 1;
            return Ok(Expr::Func(func, Box::new(arg)));
        }
        match name.as_str() {
            "pi" => Ok(Expr::Num(std::f64::consts::PI)),
            "e" => Ok(Expr::Num(std::f64::consts::E)),
            _ => match self.vars.iter().position(|v| *v == name) {
                Some(index) => Ok(Expr::Var { name, index }),
                None => Err(Error::UnknownIdentifier { name, pos: start }),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const XYZ: &[&str] = &["x", "y", "z"];

    #[test]
    fn parses_simple_product() {
        let e = parse("2*y", XYZ).unwrap();
        assert_eq!(
            e,
            Expr::Bin(
                BinOp::Mul,
                Box::new(Expr::Num(2.0)),
                Box::new(Expr::Var {
                    name: "y".into(),
                    index: 1
                })
            )
        );
        assert_eq!(e.eval(&[0.0, 3.0, 0.0]).unwrap(), 6.0);
    }

    #[test]
    fn parses_frame_component_expression() {
        let e = parse("(1/4)*exp(2*x) - y^2", XYZ).unwrap();
        // e^(2 ln 2)/4 = 1 at x = ln 2, y = 0.
        let v = e.eval(&[2.0f64.ln(), 0.0, 0.0]).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_unknown_identifier() {
        match parse("2*w", XYZ) {
            Err(Error::UnknownIdentifier { name, .. }) => assert_eq!(name, "w"),
            other => panic!("expected unknown identifier, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_function() {
        match parse("tan(x)", XYZ) {
            Err(Error::UnknownIdentifier { name, .. }) => assert_eq!(name, "tan"),
            other => panic!("expected unknown identifier, got {other:?}"),
        }
    }

    #[test]
    fn rejects_implicit_multiplication() {
        assert!(matches!(parse("2x", XYZ), Err(Error::Syntax { .. })));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let e = parse("1/x", XYZ).unwrap();
        assert!(matches!(
            e.eval(&[0.0, 0.0, 0.0]),
            Err(Error::EvalDomain { .. })
        ));
        assert_eq!(e.eval(&[2.0, 0.0, 0.0]).unwrap(), 0.5);
    }

    #[test]
    fn domain_errors_for_ln_and_sqrt() {
        let e = parse("ln(x)", XYZ).unwrap();
        assert!(e.eval(&[-1.0, 0.0, 0.0]).is_err());
        let e = parse("sqrt(x)", XYZ).unwrap();
        assert!(e.eval(&[-1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse("2^3^2", &[]).unwrap();
        assert_eq!(e.eval(&[]).unwrap(), 512.0); // right-assoc: 2^(3^2)
        let e = parse("-2^2", &[]).unwrap();
        assert_eq!(e.eval(&[]).unwrap(), -4.0); // ^ binds tighter than unary -
        let e = parse("2^-1", &[]).unwrap();
        assert_eq!(e.eval(&[]).unwrap(), 0.5);
        let e = parse("1 - 2 - 3", &[]).unwrap();
        assert_eq!(e.eval(&[]).unwrap(), -4.0); // left-assoc
        let e = parse("6/3/2", &[]).unwrap();
        assert_eq!(e.eval(&[]).unwrap(), 1.0);
    }

    #[test]
    fn predefined_constants() {
        let e = parse("cos(pi)", &[]).unwrap();
        assert!((e.eval(&[]).unwrap() + 1.0).abs() < 1e-15);
        let e = parse("ln(e)", &[]).unwrap();
        assert!((e.eval(&[]).unwrap() - 1.0).abs() < 1e-15);
        // 3*pi/4 shows up in curve-family parameters.
        let e = parse("3*pi/4", &[]).unwrap();
        assert!((e.eval(&[]).unwrap() - 3.0 * std::f64::consts::PI / 4.0).abs() < 1e-16);
    }

    #[test]
    fn bind_trailing_substitutes_parameters() {
        let e = parse("(-c2 + 2) / 2 * x", &["x", "c2"]).unwrap();
        let bound = e.bind_trailing(1, &[6.0]);
        assert!(!bound.to_string().contains("c2"));
        assert_eq!(bound.eval(&[3.0]).unwrap(), -6.0);
    }

    /// Fixed table of expressions with independently computed values.
    #[test]
    fn eval_matches_hand_computed_table() {
        let cases: &[(&str, &[f64], f64)] = &[
            ("2*y", &[0.0, 3.0, 0.0], 6.0),
            ("x + y*z", &[1.0, 2.0, 3.0], 7.0),
            ("x^2 - y^2", &[3.0, 2.0, 0.0], 5.0),
            ("(x + y)^2", &[1.0, 2.0, 0.0], 9.0),
            ("exp(0)", &[0.0; 3], 1.0),
            ("ln(exp(2))", &[0.0; 3], 2.0),
            ("sqrt(16)", &[0.0; 3], 4.0),
            ("sin(0)", &[0.0; 3], 0.0),
            ("cos(0)", &[0.0; 3], 1.0),
            ("sin(pi/6)", &[0.0; 3], 0.5),
            ("cos(pi/3)", &[0.0; 3], 0.5),
            ("2*(1 + exp(2*x)/4)", &[2.0f64.ln(), 0.0, 0.0], 4.0),
            ("1 - exp(4*x)/16", &[0.0; 3], 0.9375),
            ("-x/2", &[5.0, 0.0, 0.0], -2.5),
            ("x/y/z", &[12.0, 3.0, 2.0], 2.0),
            ("2^10", &[0.0; 3], 1024.0),
            ("(1/4)*exp(2*x) - y^2", &[2.0f64.ln(), 1.0, 0.0], 0.0),
            ("x*x*x", &[1.5, 0.0, 0.0], 3.375),
            ("sqrt(x^2 + y^2)", &[3.0, 4.0, 0.0], 5.0),
            ("-(x - y)", &[2.0, 7.0, 0.0], 5.0),
        ];
        for (text, env, want) in cases {
            let e = parse(text, XYZ).unwrap();
            let got = e.eval(env).unwrap();
            let scale = want.abs().max(1.0);
            assert!(
                (got - want).abs() <= 1e-15 * scale,
                "`{text}` → {got}, want {want}"
            );
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0u8..100).prop_map(|v| Expr::Num(v as f64 / 4.0)),
            (0usize..3).prop_map(|i| Expr::Var {
                name: ["x", "y", "z"][i].into(),
                index: i
            }),
        ];
        leaf.prop_recursive(4, 32, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone(), 0u8..5).prop_map(|(a, b, op)| {
                    let op =
                        [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow][op as usize];
                    Expr::Bin(op, Box::new(a), Box::new(b))
                }),
                inner.clone().prop_map(|e| match e {
                    Expr::Num(v) => Expr::Num(-v),
                    other => Expr::Neg(Box::new(other)),
                }),
                (inner, 0u8..5).prop_map(|(a, f)| {
                    let f = [
                        FuncKind::Exp,
                        FuncKind::Ln,
                        FuncKind::Sin,
                        FuncKind::Cos,
                        FuncKind::Sqrt,
                    ][f as usize];
                    Expr::Func(f, Box::new(a))
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(e in arb_expr()) {
            let printed = e.to_string();
            let reparsed = parse(&printed, XYZ)
                .unwrap_or_else(|err| panic!("`{printed}` failed to reparse: {err}"));
            prop_assert_eq!(reparsed, e);
        }
    }
}
