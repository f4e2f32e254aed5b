//! The coefficient field `K = Q(t1..tk)` with `m` commuting derivations and
//! a shift automorphism.
//!
//! Derivations act as `d/dti` on the first `active` base indeterminates and
//! kill the rest; the automorphism is the translation `sigma(ti) = ti + ci`.
//! Translations commute with `d/dt`, so the differential-difference axioms
//! hold on the nose. `k = 0` gives plain `Q` with trivial operators.
//!
//! Elements are reduced fractions of [`QPoly`]s. Normalization (coprime,
//! graded-lex-monic denominator) is canonical, so equality is structural.

pub mod qpoly;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use qpoly::QPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("derivation index {index} out of range 1..={max}")]
    DerivationOutOfRange { index: usize, max: usize },
    #[error("shift offsets must have length k = {k}, got {got}")]
    BadOffsets { k: usize, got: usize },
    #[error("active derivation count {active} exceeds min(m, k) = {bound}")]
    BadActiveCount { active: usize, bound: usize },
}

/// The computable differential-difference coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarField {
    /// Number of derivations `delta_1..delta_m` of the ambient ring.
    derivations: usize,
    /// Number of base indeterminates `t1..tk`.
    base_vars: usize,
    /// `delta_i` acts as `d/dti` for `i <= active`, and as zero beyond.
    active: usize,
    /// `sigma(ti) = ti + offsets[i]`.
    shift_offsets: Vec<BigRational>,
}

impl ScalarField {
    /// Field with `active = min(m, k)`: every derivation that can act on a
    /// base indeterminate does.
    pub fn new(derivations: usize, base_vars: usize, shift_offsets: Vec<BigRational>) -> Result<Self, ScalarError> {
        let active = derivations.min(base_vars);
        Self::with_active(derivations, base_vars, active, shift_offsets)
    }

    /// Field with an explicit count of acting derivations; the remaining
    /// `ti` are sigma-moved differential constants.
    pub fn with_active(
        derivations: usize,
        base_vars: usize,
        active: usize,
        shift_offsets: Vec<BigRational>,
    ) -> Result<Self, ScalarError> {
        if shift_offsets.len() != base_vars {
            return Err(ScalarError::BadOffsets {
                k: base_vars,
                got: shift_offsets.len(),
            });
        }
        let bound = derivations.min(base_vars);
        if active > bound {
            return Err(ScalarError::BadActiveCount { active, bound });
        }
        Ok(ScalarField {
            derivations,
            base_vars,
            active,
            shift_offsets,
        })
    }

    /// Plain `Q` as a field with `m` (trivial) derivations and identity sigma.
    pub fn rationals(derivations: usize) -> Self {
        ScalarField {
            derivations,
            base_vars: 0,
            active: 0,
            shift_offsets: vec![],
        }
    }

    /// `Q(t)` with `delta = d/dt` and `sigma(t) = t + 1`.
    pub fn q_t_shift() -> Self {
        ScalarField {
            derivations: 1,
            base_vars: 1,
            active: 1,
            shift_offsets: vec![BigRational::one()],
        }
    }

    /// `Q(t)` with `delta = d/dt` and identity sigma.
    pub fn q_t() -> Self {
        ScalarField {
            derivations: 1,
            base_vars: 1,
            active: 1,
            shift_offsets: vec![BigRational::zero()],
        }
    }

    pub fn derivations(&self) -> usize {
        self.derivations
    }

    pub fn base_vars(&self) -> usize {
        self.base_vars
    }

    pub fn active_derivations(&self) -> usize {
        self.active
    }

    pub fn shift_offsets(&self) -> &[BigRational] {
        &self.shift_offsets
    }

    pub fn zero(&self) -> ScalarElement {
        ScalarElement::zero(self.base_vars)
    }

    pub fn one(&self) -> ScalarElement {
        ScalarElement::one(self.base_vars)
    }

    pub fn from_int(&self, n: i64) -> ScalarElement {
        ScalarElement::from_int(self.base_vars, n)
    }

    pub fn from_rational(&self, q: BigRational) -> ScalarElement {
        ScalarElement::from_poly(QPoly::constant(self.base_vars, q))
    }

    /// The base indeterminate `t_i`, 1-based.
    pub fn t(&self, i: usize) -> ScalarElement {
        assert!(i >= 1 && i <= self.base_vars, "t{i} not in ring with k = {}", self.base_vars);
        ScalarElement::from_poly(QPoly::var(self.base_vars, i - 1))
    }

    /// `d a / d t_i` (1-based); zero map for inactive derivations.
    pub fn derive(&self, a: &ScalarElement, i: usize) -> Result<ScalarElement, ScalarError> {
        if i == 0 || i > self.derivations {
            return Err(ScalarError::DerivationOutOfRange {
                index: i,
                max: self.derivations,
            });
        }
        if i > self.active {
            return Ok(self.zero());
        }
        let v = i - 1;
        // (n/d)' = (n' d - n d') / d^2
        let num = a.num.partial(v).mul(&a.den).sub(&a.num.mul(&a.den.partial(v)));
        let den = a.den.mul(&a.den);
        Ok(ScalarElement::normalized(num, den))
    }

    /// Apply `sigma^power`; negative powers invert the translation.
    pub fn shift(&self, a: &ScalarElement, power: i64) -> ScalarElement {
        if power == 0 || self.base_vars == 0 {
            return a.clone();
        }
        let p = BigRational::from_integer(BigInt::from(power));
        let mut num = a.num.clone();
        let mut den = a.den.clone();
        for (i, c) in self.shift_offsets.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let off = c * &p;
            num = num.translate(i, &off);
            den = den.translate(i, &off);
        }
        ScalarElement::normalized(num, den)
    }

    /// True when every derivation kills `a` and sigma fixes it.
    pub fn is_constant(&self, a: &ScalarElement) -> bool {
        (1..=self.derivations).all(|i| self.derive(a, i).map(|d| d.is_zero()).unwrap_or(false))
            && self.shift(a, 1) == *a
    }
}

/// An element of `Q(t1..tk)`, stored as a reduced fraction.
///
/// Invariants: `den != 0`, `gcd(num, den) = 1`, and `den` is monic under
/// graded-lex, so equal elements are structurally equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarElement {
    num: QPoly,
    den: QPoly,
}

impl ScalarElement {
    pub fn zero(k: usize) -> Self {
        ScalarElement {
            num: QPoly::zero(k),
            den: QPoly::one(k),
        }
    }

    pub fn one(k: usize) -> Self {
        ScalarElement {
            num: QPoly::one(k),
            den: QPoly::one(k),
        }
    }

    pub fn from_int(k: usize, n: i64) -> Self {
        ScalarElement {
            num: QPoly::from_int(k, n),
            den: QPoly::one(k),
        }
    }

    pub fn from_poly(p: QPoly) -> Self {
        let k = p.nvars();
        ScalarElement {
            num: p,
            den: QPoly::one(k),
        }
    }

    pub fn from_rational(k: usize, q: BigRational) -> Self {
        ScalarElement::from_poly(QPoly::constant(k, q))
    }

    /// Build `num/den`, reducing to canonical form. Panics if `den = 0`;
    /// use [`ScalarElement::checked_div`] for fallible division.
    pub fn normalized(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "scalar with zero denominator");
        assert_eq!(num.nvars(), den.nvars());
        if num.is_zero() {
            return ScalarElement::zero(num.nvars());
        }
        let g = QPoly::gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        // Make the denominator graded-lex monic; fold the unit into num.
        let lc = den.leading_coeff_grlex().cloned().unwrap();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        ScalarElement { num, den }
    }

    pub fn numerator(&self) -> &QPoly {
        &self.num
    }

    pub fn denominator(&self) -> &QPoly {
        &self.den
    }

    pub fn base_vars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The rational value of a constant element, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.constant_term() / self.den.constant_term())
        } else {
            None
        }
    }

    pub fn recip(&self) -> Result<ScalarElement, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(ScalarElement::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &ScalarElement) -> Result<ScalarElement, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(ScalarElement::normalized(
            self.num.mul(&rhs.den),
            self.den.mul(&rhs.num),
        ))
    }

    pub fn pow(&self, n: i64) -> Result<ScalarElement, ScalarError> {
        if n < 0 {
            let r = self.recip()?;
            return r.pow(-n);
        }
        Ok(ScalarElement::normalized(self.num.pow(n as u32), self.den.pow(n as u32)))
    }
}

impl Add for &ScalarElement {
    type Output = ScalarElement;
    fn add(self, rhs: &ScalarElement) -> ScalarElement {
        ScalarElement::normalized(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub for &ScalarElement {
    type Output = ScalarElement;
    fn sub(self, rhs: &ScalarElement) -> ScalarElement {
        ScalarElement::normalized(
            self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Mul for &ScalarElement {
    type Output = ScalarElement;
    fn mul(self, rhs: &ScalarElement) -> ScalarElement {
        ScalarElement::normalized(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

/// Panics on a zero divisor; prefer [`ScalarElement::checked_div`] where the
/// divisor is not known to be nonzero.
impl Div for &ScalarElement {
    type Output = ScalarElement;
    fn div(self, rhs: &ScalarElement) -> ScalarElement {
        self.checked_div(rhs).expect("scalar division by zero")
    }
}

impl Neg for &ScalarElement {
    type Output = ScalarElement;
    fn neg(self) -> ScalarElement {
        ScalarElement {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for ScalarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let np = self.num.num_terms() > 1;
        let dp = self.den.num_terms() > 1 || needs_parens_as_factor(&self.den);
        if np {
            write!(f, "({})", self.num)?;
        } else {
            let nn = needs_parens_as_factor(&self.num);
            if nn {
                write!(f, "({})", self.num)?;
            } else {
                write!(f, "{}", self.num)?;
            }
        }
        write!(f, "/")?;
        if dp {
            write!(f, "({})", self.den)
        } else {
            write!(f, "{}", self.den)
        }
    }
}

/// A single term still needs parentheses when it carries an inner `*`, `/`
/// or a leading minus, e.g. `3/2*t1` or `-t1`.
fn needs_parens_as_factor(p: &QPoly) -> bool {
    let s = p.to_string();
    s.contains('*') || s.contains('/') || s.starts_with('-')
}

impl fmt::Debug for ScalarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
