//! Commutative multivariate polynomial algebra over the scalar field.
//!
//! Polynomials are sparse maps from exponent vectors (over a finite variable
//! list fixed per ring) to scalar coefficients. On top of this module sit
//! Buchberger's algorithm, ideal membership with cofactor certificates,
//! saturation by the extra-variable method, and a deliberately partial
//! three-valued primality oracle.

mod groebner;
mod primality;

pub use groebner::{groebner, ideal_member, saturate, MembershipAnswer};
pub use primality::{is_prime_bounded, NotPrimeWitness, Primality, PrimeEvidence};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::scalars::{ScalarElement, ScalarField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("empty ring context")]
    EmptyRing,
    #[error("saturation by the zero polynomial")]
    SaturateByZero,
}

/// Resource limits for Groebner-based computations. These are engineering
/// parameters, not theoretical bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    pub max_degree: u32,
    pub max_basis: usize,
    pub max_pairs: usize,
    /// Cap on divisor-tuple combinations in the bounded factor search.
    pub max_factor_combinations: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_degree: 24,
            max_basis: 512,
            max_pairs: 50_000,
            max_factor_combinations: 20_000,
        }
    }
}

/// A commutative polynomial ring context: coefficient field plus a fixed,
/// ordered variable list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    field: ScalarField,
    vars: Vec<String>,
}

impl PolyRing {
    pub fn new(field: ScalarField, vars: Vec<String>) -> Arc<Self> {
        Arc::new(PolyRing { field, vars })
    }

    /// Ring `K[x1..xn]` with mechanically named variables.
    pub fn with_xvars(field: ScalarField, n: usize) -> Arc<Self> {
        let vars = (1..=n).map(|i| format!("x{i}")).collect();
        Arc::new(PolyRing { field, vars })
    }

    pub fn field(&self) -> &ScalarField {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Extend by one variable appended at the end (used by saturation).
    pub fn extended(&self, name: &str) -> Arc<PolyRing> {
        let mut vars = self.vars.clone();
        vars.push(name.to_string());
        Arc::new(PolyRing {
            field: self.field.clone(),
            vars,
        })
    }
}

pub(crate) fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Monomial orders. Variables later in the ring's list are the larger ones,
/// so in `K[x1, x2]` we have `x2 > x1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    GrLex,
    /// Elimination order: positions `>= split` form the elimination block.
    /// Block exponents are compared by grevlex first; ties fall through to
    /// grevlex on the remaining positions.
    Elim {
        split: usize,
    },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match *self {
            MonomialOrder::Lex => lex_cmp(a, b),
            MonomialOrder::GrevLex => grevlex_cmp(a, b),
            MonomialOrder::GrLex => {
                let da: u64 = a.iter().map(|&e| e as u64).sum();
                let db: u64 = b.iter().map(|&e| e as u64).sum();
                da.cmp(&db).then_with(|| lex_cmp(a, b))
            }
            MonomialOrder::Elim { split } => grevlex_cmp(&a[split..], &b[split..])
                .then_with(|| grevlex_cmp(&a[..split], &b[..split])),
        }
    }
}

/// Lex with the last position most significant.
fn lex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    Ordering::Equal
}

/// Graded reverse lexicographic: total degree first; ties broken so that the
/// monomial with the smaller exponent in the least variable is larger.
fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            // smaller exponent in the least variable means larger monomial
            ord => return ord.reverse(),
        }
    }
    Ordering::Equal
}

/// A sparse commutative polynomial over the ring's scalar field.
#[derive(Clone)]
pub struct CPoly {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Vec<u32>, ScalarElement>,
}

impl PartialEq for CPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for CPoly {}

impl CPoly {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        CPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, ScalarElement::one(ring.field.base_vars()))
    }

    pub fn constant(ring: &Arc<PolyRing>, c: ScalarElement) -> Self {
        assert_eq!(c.base_vars(), ring.field.base_vars());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; ring.num_vars()], c);
        }
        CPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_int(ring: &Arc<PolyRing>, n: i64) -> Self {
        Self::constant(ring, ScalarElement::from_int(ring.field.base_vars(), n))
    }

    /// Variable by position (0-based).
    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        assert!(i < ring.num_vars());
        let mut e = vec![0; ring.num_vars()];
        e[i] = 1;
        Self::monomial(ring, e, ScalarElement::one(ring.field.base_vars()))
    }

    pub fn monomial(ring: &Arc<PolyRing>, expt: Vec<u32>, c: ScalarElement) -> Self {
        assert_eq!(expt.len(), ring.num_vars());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(expt, c);
        }
        CPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|&e| e == 0))
    }

    pub fn constant_term(&self) -> ScalarElement {
        self.terms
            .get(&vec![0; self.ring.num_vars()])
            .cloned()
            .unwrap_or_else(|| ScalarElement::zero(self.ring.field.base_vars()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &ScalarElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    fn insert_term(&mut self, e: Vec<u32>, c: ScalarElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let sum = &*old + &c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &CPoly) -> CPoly {
        assert!(same_ring(&self.ring, &other.ring));
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &CPoly) -> CPoly {
        assert!(same_ring(&self.ring, &other.ring));
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> CPoly {
        CPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        assert!(same_ring(&self.ring, &other.ring));
        let mut out = CPoly::zero(&self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &ScalarElement) -> CPoly {
        if c.is_zero() {
            return CPoly::zero(&self.ring);
        }
        CPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> CPoly {
        let mut out = CPoly::one(&self.ring);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Formal partial derivative in variable `i`.
    pub fn partial(&self, i: usize) -> CPoly {
        let mut out = CPoly::zero(&self.ring);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                let factor = ScalarElement::from_int(self.ring.field.base_vars(), e[i] as i64);
                out.insert_term(e2, c * &factor);
            }
        }
        out
    }

    /// Apply a map to every coefficient (e.g. a scalar derivation or shift).
    pub fn map_coeffs<F: Fn(&ScalarElement) -> ScalarElement>(&self, f: F) -> CPoly {
        let mut out = CPoly::zero(&self.ring);
        for (e, c) in &self.terms {
            out.insert_term(e.clone(), f(c));
        }
        out
    }

    pub fn eval(&self, point: &[ScalarElement]) -> ScalarElement {
        assert_eq!(point.len(), self.ring.num_vars());
        let k = self.ring.field.base_vars();
        let mut acc = ScalarElement::zero(k);
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &n) in e.iter().enumerate() {
                if n > 0 {
                    term = &term * &point[i].pow(n as i64).expect("nonnegative power");
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Substitute `x_i -> x_i + a_i` (Taylor shift to the point `a`).
    pub fn translate(&self, a: &[ScalarElement]) -> CPoly {
        assert_eq!(a.len(), self.ring.num_vars());
        let k = self.ring.field.base_vars();
        let mut out = CPoly::zero(&self.ring);
        for (e, c) in &self.terms {
            // expand prod_i (x_i + a_i)^{e_i}
            let mut partial_terms: Vec<(Vec<u32>, ScalarElement)> =
                vec![(vec![0; self.ring.num_vars()], c.clone())];
            for (i, &n) in e.iter().enumerate() {
                if n == 0 {
                    continue;
                }
                let mut next = Vec::new();
                // binomial expansion of (x_i + a_i)^n
                let mut binom = ScalarElement::one(k);
                let mut a_pow = ScalarElement::one(k);
                let mut pieces: Vec<(u32, ScalarElement)> = Vec::new();
                for j in 0..=n {
                    pieces.push((n - j, &binom * &a_pow));
                    if j < n {
                        let num = ScalarElement::from_int(k, (n - j) as i64);
                        let den = ScalarElement::from_int(k, (j + 1) as i64);
                        binom = &(&binom * &num) / &den;
                        a_pow = &a_pow * &a[i];
                    }
                }
                for (base_e, base_c) in &partial_terms {
                    for (pow_i, piece_c) in &pieces {
                        let mut e2 = base_e.clone();
                        e2[i] = *pow_i;
                        next.push((e2, base_c * piece_c));
                    }
                }
                partial_terms = next;
            }
            for (e2, c2) in partial_terms {
                out.insert_term(e2, c2);
            }
        }
        out
    }

    /// Full composition: substitute `x_i -> images[i]`.
    pub fn compose(&self, images: &[CPoly]) -> CPoly {
        assert_eq!(images.len(), self.ring.num_vars());
        let target = images
            .first()
            .map(|f| f.ring.clone())
            .unwrap_or_else(|| self.ring.clone());
        let mut out = CPoly::zero(&target);
        for (e, c) in &self.terms {
            let mut term = CPoly::constant(&target, c.clone());
            for (i, &n) in e.iter().enumerate() {
                if n > 0 {
                    term = term.mul(&images[i].pow(n));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Leading exponent under `order`.
    pub fn leading_expt(&self, order: MonomialOrder) -> Option<&Vec<u32>> {
        self.terms.keys().max_by(|a, b| order.cmp(a, b))
    }

    pub fn leading_coeff(&self, order: MonomialOrder) -> Option<&ScalarElement> {
        let e = self.leading_expt(order)?.clone();
        self.terms.get(&e)
    }

    /// Scale so the leading coefficient is 1.
    pub fn monic(&self, order: MonomialOrder) -> CPoly {
        match self.leading_coeff(order) {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.recip().expect("leading coefficient nonzero");
                self.scale(&inv)
            }
        }
    }

    /// Multivariate division with remainder: `self = sum q_i g_i + r` where
    /// no term of `r` is divisible by any leading monomial of `g`. Divisors
    /// are tried in slice order; fully deterministic.
    pub fn div_rem(&self, divisors: &[CPoly], order: MonomialOrder) -> (Vec<CPoly>, CPoly) {
        let mut quotients = vec![CPoly::zero(&self.ring); divisors.len()];
        let mut remainder = CPoly::zero(&self.ring);
        let mut p = self.clone();
        let leads: Vec<(Vec<u32>, ScalarElement)> = divisors
            .iter()
            .map(|g| {
                let e = g
                    .leading_expt(order)
                    .expect("division by zero polynomial")
                    .clone();
                let c = g.terms[&e].clone();
                (e, c)
            })
            .collect();
        while let Some(e) = p.leading_expt(order).cloned() {
            let c = p.terms[&e].clone();
            let mut divided = false;
            for (gi, (ge, gc)) in leads.iter().enumerate() {
                if e.iter().zip(ge).all(|(a, b)| a >= b) {
                    let qe: Vec<u32> = e.iter().zip(ge).map(|(a, b)| a - b).collect();
                    let qc = &c / gc;
                    let qt = CPoly::monomial(&self.ring, qe, qc);
                    p = p.sub(&qt.mul(&divisors[gi]));
                    quotients[gi] = quotients[gi].add(&qt);
                    divided = true;
                    break;
                }
            }
            if !divided {
                p.terms.remove(&e);
                remainder.insert_term(e, c);
            }
        }
        (quotients, remainder)
    }

    /// Normal form of `self` modulo `divisors`.
    pub fn normal_form(&self, divisors: &[CPoly], order: MonomialOrder) -> CPoly {
        self.div_rem(divisors, order).1
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| MonomialOrder::GrevLex.cmp(b, a));
        for (idx, e) in keys.iter().enumerate() {
            let c = &self.terms[*e];
            let s = c.to_string();
            let (neg, abs) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const_term = e.iter().all(|&k| k == 0);
            let coeff_is_one = abs == "1";
            if !coeff_is_one || is_const_term {
                if abs.contains(' ') {
                    write!(f, "({abs})")?;
                } else {
                    write!(f, "{abs}")?;
                }
                if !is_const_term {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", self.ring.vars[i])?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A generating set with a declared monomial order; `groebner_flag` records
/// that the generators are a reduced Groebner basis for that order.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealBasis {
    pub ring: Arc<PolyRing>,
    pub gens: Vec<CPoly>,
    pub order: MonomialOrder,
    pub groebner_flag: bool,
}

impl IdealBasis {
    pub fn new(ring: Arc<PolyRing>, gens: Vec<CPoly>, order: MonomialOrder) -> Self {
        for g in &gens {
            assert!(same_ring(&g.ring, &ring), "generator from a different ring");
        }
        IdealBasis {
            ring,
            gens,
            order,
            groebner_flag: false,
        }
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.iter().all(|g| g.is_zero())
    }

    pub fn contains_unit(&self) -> bool {
        self.gens.iter().any(|g| !g.is_zero() && g.is_constant())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qring(n: usize) -> Arc<PolyRing> {
        PolyRing::with_xvars(ScalarField::rationals(0), n)
    }

    #[test]
    fn order_conventions() {
        // x2 > x1 in every order
        let a = vec![0, 1];
        let b = vec![1, 0];
        for ord in [MonomialOrder::Lex, MonomialOrder::GrevLex, MonomialOrder::GrLex] {
            assert_eq!(ord.cmp(&a, &b), Ordering::Greater, "{ord:?}");
        }
        // grevlex: x1*x2 vs x2^2 -- total degrees equal, x2^2 has smaller
        // exponent in the least variable, hence is larger
        assert_eq!(
            MonomialOrder::GrevLex.cmp(&[1, 1], &[0, 2]),
            Ordering::Less
        );
        // lex with x2 most significant: x2 beats any power of x1
        assert_eq!(MonomialOrder::Lex.cmp(&[5, 0], &[0, 1]), Ordering::Less);
        // elimination block on position 1: anything with x2 beats x1-only
        let elim = MonomialOrder::Elim { split: 1 };
        assert_eq!(elim.cmp(&[9, 0], &[0, 1]), Ordering::Less);
    }

    #[test]
    fn arithmetic_and_division() {
        let r = qring(2);
        let x = CPoly::var(&r, 0);
        let y = CPoly::var(&r, 1);
        // (x + y)^2 = x^2 + 2xy + y^2
        let sq = x.add(&y).pow(2);
        let expect = x
            .pow(2)
            .add(&x.mul(&y).scale(&ScalarElement::from_int(0, 2)))
            .add(&y.pow(2));
        assert_eq!(sq, expect);
        // divide x^2 y by [x*y - 1]: q = x, r = x
        let f = x.pow(2).mul(&y);
        let g = x.mul(&y).sub(&CPoly::one(&r));
        let (q, rem) = f.div_rem(std::slice::from_ref(&g), MonomialOrder::GrevLex);
        assert_eq!(f, q[0].mul(&g).add(&rem));
        assert_eq!(rem, x);
    }

    #[test]
    fn translate_is_taylor_shift() {
        let r = qring(2);
        let x = CPoly::var(&r, 0);
        let y = CPoly::var(&r, 1);
        // f = y - x^2 shifted to (1,1): (y+1) - (x+1)^2 = y - 2x - x^2
        let f = y.sub(&x.pow(2));
        let one = ScalarElement::one(0);
        let shifted = f.translate(&[one.clone(), one]);
        let expect = y.sub(&x.scale(&ScalarElement::from_int(0, 2))).sub(&x.pow(2));
        assert_eq!(shifted, expect);
    }

    #[test]
    fn eval_and_compose() {
        let r = qring(2);
        let x = CPoly::var(&r, 0);
        let y = CPoly::var(&r, 1);
        let f = y.sub(&x.pow(2));
        let a = [ScalarElement::from_int(0, 3), ScalarElement::from_int(0, 9)];
        assert!(f.eval(&a).is_zero());
        // compose f with (x, x^2) gives 0
        let images = [x.clone(), x.pow(2)];
        assert!(f.compose(&images).is_zero());
    }
}
