//! Expression trees for the text syntax, with a canonical printer.
//!
//! The printer emits exactly the grammar the parser accepts, with
//! parentheses only where precedence demands them, so `parse(print(e))`
//! returns `e` node for node.

use std::fmt;

use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ast {
    /// nonnegative integer literal (fractions arise through division)
    Num(BigInt),
    /// base indeterminate `t<i>`, 1-based
    TVar(usize),
    /// differential indeterminate `x<i>`, 1-based
    XVar(usize),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i64),
    /// `d<index>^power(arg)`
    Delta { index: usize, power: u32, arg: Box<Ast> },
    /// `s^power(arg)`
    Sigma { power: i64, arg: Box<Ast> },
}

/// Precedence tiers of the grammar, loosest first.
#[derive(PartialEq, PartialOrd, Clone, Copy)]
enum Level {
    Expr,
    Term,
    Factor,
    Atom,
}

fn level(ast: &Ast) -> Level {
    match ast {
        Ast::Add(..) | Ast::Sub(..) | Ast::Neg(..) => Level::Expr,
        Ast::Mul(..) | Ast::Div(..) => Level::Term,
        Ast::Pow(..) => Level::Factor,
        Ast::Num(_) | Ast::TVar(_) | Ast::XVar(_) | Ast::Delta { .. } | Ast::Sigma { .. } => {
            Level::Atom
        }
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, ast: &Ast, required: Level) -> fmt::Result {
    if level(ast) < required {
        write!(f, "(")?;
        write_at(f, ast, Level::Expr)?;
        return write!(f, ")");
    }
    match ast {
        Ast::Num(n) => write!(f, "{n}"),
        Ast::TVar(i) => write!(f, "t{i}"),
        Ast::XVar(i) => write!(f, "x{i}"),
        Ast::Neg(a) => {
            write!(f, "-")?;
            write_at(f, a, Level::Term)
        }
        Ast::Add(a, b) => {
            write_at(f, a, Level::Expr)?;
            write!(f, " + ")?;
            write_at(f, b, Level::Term)
        }
        Ast::Sub(a, b) => {
            write_at(f, a, Level::Expr)?;
            write!(f, " - ")?;
            write_at(f, b, Level::Term)
        }
        Ast::Mul(a, b) => {
            write_at(f, a, Level::Term)?;
            write!(f, "*")?;
            write_at(f, b, Level::Factor)
        }
        Ast::Div(a, b) => {
            write_at(f, a, Level::Term)?;
            write!(f, "/")?;
            write_at(f, b, Level::Factor)
        }
        Ast::Pow(a, e) => {
            write_at(f, a, Level::Atom)?;
            write!(f, "^{e}")
        }
        Ast::Delta { index, power, arg } => {
            write!(f, "d{index}")?;
            if *power != 1 {
                write!(f, "^{power}")?;
            }
            write!(f, "(")?;
            write_at(f, arg, Level::Expr)?;
            write!(f, ")")
        }
        Ast::Sigma { power, arg } => {
            write!(f, "s")?;
            if *power != 1 {
                write!(f, "^{power}")?;
            }
            write!(f, "(")?;
            write_at(f, arg, Level::Expr)?;
            write!(f, ")")
        }
    }
}

impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, Level::Expr)
    }
}

// Neg prints as a leading minus, which the grammar only allows at the head
// of an expression (or inside parentheses); a Neg that appears as the
// *right* operand of Add/Sub/Mul/Div would print ambiguously, so write_at
// parenthesizes it there via the level check: Neg sits at Expr level while
// right operands demand Term or tighter.

#[cfg(test)]
mod tests {
    use super::*;

    fn num(n: i64) -> Ast {
        Ast::Num(BigInt::from(n))
    }

    #[test]
    fn printing_examples() {
        let dx2 = Ast::Delta {
            index: 1,
            power: 2,
            arg: Box::new(Ast::XVar(1)),
        };
        let e = Ast::Sub(
            Box::new(Ast::Mul(Box::new(dx2), Box::new(Ast::XVar(2)))),
            Box::new(Ast::Mul(Box::new(num(4)), Box::new(Ast::XVar(1)))),
        );
        assert_eq!(e.to_string(), "d1^2(x1)*x2 - 4*x1");
        let s = Ast::Sigma {
            power: -1,
            arg: Box::new(Ast::TVar(1)),
        };
        assert_eq!(s.to_string(), "s^-1(t1)");
        // right-nested subtraction needs parentheses
        let nested = Ast::Sub(
            Box::new(num(1)),
            Box::new(Ast::Sub(Box::new(num(2)), Box::new(num(3)))),
        );
        assert_eq!(nested.to_string(), "1 - (2 - 3)");
        // negation as a right operand gets wrapped
        let neg = Ast::Add(Box::new(num(1)), Box::new(Ast::Neg(Box::new(num(2)))));
        assert_eq!(neg.to_string(), "1 + (-2)");
    }
}
