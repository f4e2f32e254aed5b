//! Lowering parsed expressions into ring elements under a session context.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use kolchin_core::diffpoly::{DiffPoly, DiffRing};
use kolchin_core::polyalg::{CPoly, PolyRing};
use kolchin_core::scalars::{ScalarElement, ScalarField};

use crate::ast::Ast;
use crate::parser::{parse, ParseError};

#[derive(Debug, Clone, PartialEq)]
pub enum LowerError {
    Parse(ParseError),
    UnknownVariable(String),
    DivisorNotScalar(String),
    DivisionByZero,
    NegativePowerOfPolynomial(String),
    ExpectedScalar(String),
    ExpectedOrderZero(String),
    BadShiftOffsets(String),
}

impl fmt::Display for LowerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LowerError::Parse(e) => write!(f, "{e}"),
            LowerError::UnknownVariable(v) => write!(f, "unknown identifier {v} in this context"),
            LowerError::DivisorNotScalar(d) => {
                write!(f, "division by the non-scalar polynomial {d}")
            }
            LowerError::DivisionByZero => write!(f, "division by zero"),
            LowerError::NegativePowerOfPolynomial(p) => {
                write!(f, "negative power of the non-scalar polynomial {p}")
            }
            LowerError::ExpectedScalar(p) => write!(f, "expected a scalar, got {p}"),
            LowerError::ExpectedOrderZero(p) => write!(
                f,
                "expected an order-zero polynomial without sigma moves, got {p}"
            ),
            LowerError::BadShiftOffsets(s) => write!(f, "bad shift offsets: {s}"),
        }
    }
}

impl std::error::Error for LowerError {}

impl From<ParseError> for LowerError {
    fn from(e: ParseError) -> Self {
        LowerError::Parse(e)
    }
}

/// The ring context a session works in.
#[derive(Debug, Clone, PartialEq)]
pub struct Context {
    pub vars: usize,
    pub derivations: usize,
    pub base_vars: usize,
    pub shift_offsets: Vec<BigRational>,
}

impl Context {
    pub fn new(
        vars: usize,
        derivations: usize,
        base_vars: usize,
        shift_offsets: Vec<BigRational>,
    ) -> Result<Self, LowerError> {
        if shift_offsets.len() != base_vars {
            return Err(LowerError::BadShiftOffsets(format!(
                "expected {base_vars} offsets, got {}",
                shift_offsets.len()
            )));
        }
        Ok(Context {
            vars,
            derivations,
            base_vars,
            shift_offsets,
        })
    }

    pub fn field(&self) -> ScalarField {
        ScalarField::new(self.derivations, self.base_vars, self.shift_offsets.clone())
            .expect("offsets validated at construction")
    }

    pub fn diff_ring(&self) -> Arc<DiffRing> {
        DiffRing::new(self.field(), self.vars)
    }

    /// The order-zero commutative ring on the same variables.
    pub fn poly_ring(&self) -> Arc<PolyRing> {
        PolyRing::with_xvars(self.field(), self.vars)
    }

    /// A variant over twice the variables (for `Gamma` over `(x, y)`).
    pub fn doubled(&self) -> Context {
        Context {
            vars: self.vars * 2,
            ..self.clone()
        }
    }

    pub fn lower(&self, ast: &Ast) -> Result<DiffPoly, LowerError> {
        let ring = self.diff_ring();
        self.lower_in(ast, &ring)
    }

    pub fn lower_in(&self, ast: &Ast, ring: &Arc<DiffRing>) -> Result<DiffPoly, LowerError> {
        Ok(match ast {
            Ast::Num(n) => DiffPoly::constant(
                ring,
                ScalarElement::from_rational(self.base_vars, BigRational::from_integer(n.clone())),
            ),
            Ast::TVar(i) => {
                if *i > self.base_vars {
                    return Err(LowerError::UnknownVariable(format!("t{i}")));
                }
                DiffPoly::constant(ring, ring.field().t(*i))
            }
            Ast::XVar(i) => {
                if *i > ring.num_vars() {
                    return Err(LowerError::UnknownVariable(format!("x{i}")));
                }
                DiffPoly::var(ring, *i - 1)
            }
            Ast::Neg(a) => self.lower_in(a, ring)?.neg(),
            Ast::Add(a, b) => self.lower_in(a, ring)?.add(&self.lower_in(b, ring)?),
            Ast::Sub(a, b) => self.lower_in(a, ring)?.sub(&self.lower_in(b, ring)?),
            Ast::Mul(a, b) => self.lower_in(a, ring)?.mul(&self.lower_in(b, ring)?),
            Ast::Div(a, b) => {
                let num = self.lower_in(a, ring)?;
                let den = self.lower_in(b, ring)?;
                if !den.is_constant() {
                    return Err(LowerError::DivisorNotScalar(den.to_string()));
                }
                let d = den.constant_term();
                if d.is_zero() {
                    return Err(LowerError::DivisionByZero);
                }
                num.scale(&d.recip().expect("nonzero"))
            }
            Ast::Pow(a, e) => {
                let base = self.lower_in(a, ring)?;
                if *e >= 0 {
                    base.pow(*e as u32)
                } else {
                    if !base.is_constant() {
                        return Err(LowerError::NegativePowerOfPolynomial(base.to_string()));
                    }
                    let c = base.constant_term();
                    if c.is_zero() {
                        return Err(LowerError::DivisionByZero);
                    }
                    DiffPoly::constant(ring, c.pow(*e).expect("nonzero base"))
                }
            }
            Ast::Delta { index, power, arg } => {
                if *index == 0 || *index > ring.num_derivations() {
                    return Err(LowerError::UnknownVariable(format!("d{index}")));
                }
                let mut out = self.lower_in(arg, ring)?;
                for _ in 0..*power {
                    out = out.apply_delta(*index).expect("index checked");
                }
                out
            }
            Ast::Sigma { power, arg } => {
                // the CLI's s() is the ring automorphism: coefficients and
                // indeterminates both move
                self.lower_in(arg, ring)?.apply_sigma(*power, true)
            }
        })
    }

    pub fn lower_scalar(&self, ast: &Ast) -> Result<ScalarElement, LowerError> {
        let p = self.lower(ast)?;
        if !p.is_constant() {
            return Err(LowerError::ExpectedScalar(p.to_string()));
        }
        Ok(p.constant_term())
    }

    /// Lower to an order-zero commutative polynomial in the `x` variables.
    pub fn lower_cpoly(&self, ast: &Ast, ring: &Arc<PolyRing>) -> Result<CPoly, LowerError> {
        let p = self.lower(ast)?;
        diff_to_order_zero(&p, ring)
    }

    pub fn parse_poly(&self, text: &str) -> Result<DiffPoly, LowerError> {
        self.lower(&parse(text)?)
    }

    pub fn parse_scalar(&self, text: &str) -> Result<ScalarElement, LowerError> {
        self.lower_scalar(&parse(text)?)
    }

    /// Comma-separated scalar coordinates.
    pub fn parse_point(&self, text: &str) -> Result<Vec<ScalarElement>, LowerError> {
        split_top_level(text, ',')
            .into_iter()
            .map(|piece| self.parse_scalar(piece.trim()))
            .collect()
    }

    /// Semicolon-separated polynomial list.
    pub fn parse_polys(&self, text: &str) -> Result<Vec<DiffPoly>, LowerError> {
        split_top_level(text, ';')
            .into_iter()
            .filter(|s| !s.trim().is_empty())
            .map(|piece| self.parse_poly(piece.trim()))
            .collect()
    }
}

/// An order-zero sigma-free differential polynomial as a commutative one.
pub fn diff_to_order_zero(p: &DiffPoly, ring: &Arc<PolyRing>) -> Result<CPoly, LowerError> {
    let mut out = CPoly::zero(ring);
    for (mono, c) in p.terms() {
        let mut e = vec![0u32; ring.num_vars()];
        for (u, k) in mono.factors() {
            if u.op.order() != 0 || !u.is_sigma_free() {
                return Err(LowerError::ExpectedOrderZero(p.to_string()));
            }
            e[u.var] += k;
        }
        out = out.add(&CPoly::monomial(ring, e, c.clone()));
    }
    Ok(out)
}

/// Split on a separator, ignoring separators inside parentheses.
pub fn split_top_level(text: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            c if c == sep && depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

/// Parse a rational literal such as `-3/2`.
pub fn parse_rational(text: &str) -> Result<BigRational, LowerError> {
    let s = text.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| LowerError::BadShiftOffsets(format!("bad rational {s}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| LowerError::BadShiftOffsets(format!("bad rational {s}")))?;
    if d.is_zero() {
        return Err(LowerError::DivisionByZero);
    }
    Ok(BigRational::new(n, d))
}
