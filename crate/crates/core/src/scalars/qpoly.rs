//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! `QPoly` is the representation underneath the coefficient field: numerators
//! and denominators of rational functions in the base indeterminates
//! `t1..tk`, and the carrier for the irreducibility machinery. Terms live in
//! a `BTreeMap` keyed by exponent vectors, so equality is structural and the
//! zero polynomial is the empty map.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector of fixed length (the ring's variable count).
pub type Expt = Vec<u32>;

/// A sparse multivariate polynomial with `BigRational` coefficients.
///
/// Invariant: no zero coefficients are stored, and every key has length
/// `nvars`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QPoly {
    nvars: usize,
    terms: BTreeMap<Expt, BigRational>,
}

/// Graded-lex comparison of exponent vectors: total degree first, then lex.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl QPoly {
    pub fn zero(nvars: usize) -> Self {
        QPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        QPoly { nvars, terms }
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(BigInt::from(c)))
    }

    /// The variable `t_{i+1}` (0-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range (nvars = {nvars})");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigRational::one());
        QPoly { nvars, terms }
    }

    pub fn monomial(nvars: usize, expt: Expt, c: BigRational) -> Self {
        assert_eq!(expt.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(expt, c);
        }
        QPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|&e| e == 0))
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expt, &BigRational)> {
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

    /// True if the variable `i` occurs in some term.
    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    fn insert_term(&mut self, e: Expt, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                *old += c;
                if old.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = QPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Expt = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero(self.nvars);
        }
        QPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> QPoly {
        let mut out = QPoly::one(self.nvars);
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

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> QPoly {
        assert!(i < self.nvars);
        let mut out = QPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.insert_term(e2, c * BigRational::from_integer(BigInt::from(e[i])));
            }
        }
        out
    }

    /// Substitute `t_i -> t_i + offset` (translation).
    pub fn translate(&self, i: usize, offset: &BigRational) -> QPoly {
        assert!(i < self.nvars);
        if offset.is_zero() {
            return self.clone();
        }
        let mut out = QPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            // (t + offset)^e[i] expanded by the binomial theorem.
            let n = e[i];
            let mut binom = BigRational::one();
            let mut off_pow = BigRational::one();
            for j in 0..=n {
                // term: C(n, j) * offset^j * t^(n-j)
                let mut e2 = e.clone();
                e2[i] = n - j;
                out.insert_term(e2, c * &binom * &off_pow);
                if j < n {
                    binom = binom * BigRational::from_integer(BigInt::from(n - j))
                        / BigRational::from_integer(BigInt::from(j + 1));
                    off_pow *= offset;
                }
            }
        }
        out
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term *= &point[i];
                }
            }
            acc += term;
        }
        acc
    }

    /// Leading exponent under graded-lex.
    pub fn leading_expt_grlex(&self) -> Option<&Expt> {
        self.terms.keys().max_by(|a, b| grlex_cmp(a, b))
    }

    pub fn leading_coeff_grlex(&self) -> Option<&BigRational> {
        let e = self.leading_expt_grlex()?.clone();
        self.terms.get(&e)
    }

    /// Divide by the graded-lex leading coefficient, making it 1.
    pub fn monic_grlex(&self) -> QPoly {
        match self.leading_coeff_grlex() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// gcd of the rational coefficients: gcd of numerators over lcm of
    /// denominators, always positive.
    pub fn rational_content(&self) -> BigRational {
        use num_integer::Integer;
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            BigRational::zero()
        } else {
            BigRational::new(num_gcd, den_lcm)
        }
    }

    /// Exact division; panics if `d` does not divide `self`.
    pub fn div_exact(&self, d: &QPoly) -> QPoly {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "div_exact: division was not exact");
        q
    }

    /// Multivariate division with remainder by a single divisor (graded-lex
    /// leading terms). If `d | self` the remainder is zero.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert_eq!(self.nvars, d.nvars);
        assert!(!d.is_zero(), "division by zero polynomial");
        let dlead = d.leading_expt_grlex().unwrap().clone();
        let dlc = d.terms[&dlead].clone();
        let mut q = QPoly::zero(self.nvars);
        let mut r = QPoly::zero(self.nvars);
        let mut p = self.clone();
        while let Some(e) = p.leading_expt_grlex().cloned() {
            let c = p.terms[&e].clone();
            if e.iter().zip(&dlead).all(|(a, b)| a >= b) {
                let qe: Expt = e.iter().zip(&dlead).map(|(a, b)| a - b).collect();
                let qc = &c / &dlc;
                let qt = QPoly::monomial(self.nvars, qe, qc);
                p = p.sub(&qt.mul(d));
                q = q.add(&qt);
            } else {
                p.terms.remove(&e);
                r.insert_term(e, c);
            }
        }
        (q, r)
    }

    // ---- multivariate gcd ----

    /// View as univariate in variable `v`: coefficients indexed by v-degree,
    /// each a polynomial (in the same ambient ring) free of `v`.
    fn to_univariate(&self, v: usize) -> Vec<QPoly> {
        let d = self.degree_in(v) as usize;
        let mut coeffs = vec![QPoly::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let k = e[v] as usize;
            let mut e2 = e.clone();
            e2[v] = 0;
            coeffs[k].insert_term(e2, c.clone());
        }
        coeffs
    }

    fn from_univariate(nvars: usize, v: usize, coeffs: &[QPoly]) -> QPoly {
        let mut out = QPoly::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (e, q) in &c.terms {
                let mut e2 = e.clone();
                e2[v] += k as u32;
                out.insert_term(e2, q.clone());
            }
        }
        out
    }

    /// Content with respect to variable `v`: gcd of the univariate-view
    /// coefficients.
    pub fn content_wrt(&self, v: usize) -> QPoly {
        let coeffs = self.to_univariate(v);
        let mut g = QPoly::zero(self.nvars);
        for c in coeffs.iter().filter(|c| !c.is_zero()) {
            g = QPoly::gcd(&g, c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with respect to `v` (self / content).
    pub fn primitive_wrt(&self, v: usize) -> QPoly {
        let c = self.content_wrt(v);
        if c.is_zero() {
            return self.clone();
        }
        self.div_exact(&c)
    }

    /// Pseudo-remainder of `self` by `d`, both viewed as univariate in `v`.
    fn pseudo_rem(&self, d: &QPoly, v: usize) -> QPoly {
        let du = d.to_univariate(v);
        let dd = du.len() - 1;
        let lc = du[dd].clone();
        let mut r = self.to_univariate(v);
        while r.len() > dd && !(r.len() == 1 && r[0].is_zero()) {
            let rd = r.len() - 1;
            if r[rd].is_zero() {
                r.pop();
                continue;
            }
            if rd < dd {
                break;
            }
            // r = lc * r - r_lead * x^(rd-dd) * d
            let rl = r[rd].clone();
            for coeff in r.iter_mut() {
                *coeff = coeff.mul(&lc);
            }
            for (j, dc) in du.iter().enumerate() {
                let idx = j + rd - dd;
                r[idx] = r[idx].sub(&rl.mul(dc));
            }
            while r.len() > 1 && r.last().unwrap().is_zero() {
                r.pop();
            }
            if r.len() == 1 && r[0].is_zero() {
                break;
            }
        }
        QPoly::from_univariate(self.nvars, v, &r)
    }

    /// Multivariate gcd by primitive pseudo-remainder sequences, normalized
    /// to be graded-lex monic.
    pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        if a.is_zero() {
            return b.monic_grlex();
        }
        if b.is_zero() {
            return a.monic_grlex();
        }
        // Pick the highest variable present in either.
        let v = (0..a.nvars).rev().find(|&i| a.involves(i) || b.involves(i));
        let v = match v {
            None => return QPoly::one(a.nvars), // both nonzero constants
            Some(v) => v,
        };
        if !a.involves(v) {
            // gcd(a, b) divides a, which is free of v: gcd(a, content_v(b)).
            return QPoly::gcd(a, &b.content_wrt(v)).monic_grlex();
        }
        if !b.involves(v) {
            return QPoly::gcd(&a.content_wrt(v), b).monic_grlex();
        }
        let ca = a.content_wrt(v);
        let cb = b.content_wrt(v);
        let cont = QPoly::gcd(&ca, &cb);
        // integer-primitive normalization per step keeps the coefficient
        // growth of the pseudo-remainder sequence polynomial
        let mut f = a.primitive_wrt(v).primitive_integer();
        let mut g = b.primitive_wrt(v).primitive_integer();
        if f.degree_in(v) < g.degree_in(v) {
            std::mem::swap(&mut f, &mut g);
        }
        loop {
            let r = f.pseudo_rem(&g, v);
            if r.is_zero() {
                break;
            }
            if !r.involves(v) {
                // Nontrivial gcd impossible in v; primitive gcd is 1.
                return cont.monic_grlex();
            }
            f = g;
            g = r.primitive_wrt(v).primitive_integer();
        }
        cont.mul(&g.primitive_wrt(v)).monic_grlex()
    }

    /// Clear denominators and divide by the integer content: the primitive
    /// integer-coefficient associate (leading grlex coefficient positive).
    pub fn primitive_integer(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.rational_content();
        let mut p = self.scale(&c.recip());
        if p.leading_coeff_grlex().map(|l| l.is_negative()).unwrap_or(false) {
            p = p.neg();
        }
        p
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self, "t")
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shared display routine: terms in descending graded-lex order, `name{i+1}`
/// as the variable spelling. The output reparses in the CLI grammar.
pub(crate) fn write_poly(f: &mut fmt::Formatter<'_>, p: &QPoly, name: &str) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut keys: Vec<&Expt> = p.terms.keys().collect();
    keys.sort_by(|a, b| grlex_cmp(b, a));
    for (idx, e) in keys.iter().enumerate() {
        let c = &p.terms[*e];
        let neg = c.is_negative();
        let abs = c.abs();
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
        if !abs.is_one() || is_const_term {
            if abs.denom().is_one() {
                write!(f, "{}", abs.numer())?;
            } else {
                write!(f, "{}/{}", abs.numer(), abs.denom())?;
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
            write!(f, "{}{}", name, i + 1)?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: usize) -> QPoly {
        QPoly::var(2, i)
    }

    #[test]
    fn arithmetic_basics() {
        let a = t(0).add(&QPoly::one(2)); // t1 + 1
        let b = t(0).sub(&QPoly::one(2)); // t1 - 1
        let prod = a.mul(&b);
        let expect = t(0).mul(&t(0)).sub(&QPoly::one(2));
        assert_eq!(prod, expect);
        assert!(prod.sub(&expect).is_zero());
    }

    #[test]
    fn translate_binomial() {
        // (t1 + 1)^2 = t1^2 + 2 t1 + 1
        let sq = t(0).mul(&t(0));
        let shifted = sq.translate(0, &BigRational::one());
        let expect = sq
            .add(&t(0).scale(&BigRational::from_integer(2.into())))
            .add(&QPoly::one(2));
        assert_eq!(shifted, expect);
    }

    #[test]
    fn gcd_univariate() {
        // gcd(t^2 - 1, t - 1) = t - 1
        let f = t(0).mul(&t(0)).sub(&QPoly::one(2));
        let g = t(0).sub(&QPoly::one(2));
        assert_eq!(QPoly::gcd(&f, &g), g);
    }

    #[test]
    fn gcd_bivariate() {
        // gcd(t1*t2 - t2, t1^2 - t1) = t1 - 1
        let f = t(0).mul(&t(1)).sub(&t(1));
        let g = t(0).mul(&t(0)).sub(&t(0));
        let d = QPoly::gcd(&f, &g);
        assert_eq!(d, t(0).sub(&QPoly::one(2)));
    }

    #[test]
    fn gcd_coprime() {
        let f = t(0).add(&t(1)); // t1 + t2
        let g = t(0).sub(&t(1)); // t1 - t2
        assert!(QPoly::gcd(&f, &g).is_one());
    }

    #[test]
    fn div_exact_cancels() {
        let f = t(0).pow(2).sub(&t(1).pow(2));
        let d = t(0).sub(&t(1));
        let q = f.div_exact(&d);
        assert_eq!(q, t(0).add(&t(1)));
    }

    #[test]
    fn partial_derivative() {
        let f = t(0).pow(3).mul(&t(1)); // t1^3 t2
        let df = f.partial(0);
        assert_eq!(df, t(0).pow(2).mul(&t(1)).scale(&BigRational::from_integer(3.into())));
    }

    #[test]
    fn display_roundtrippable_shape() {
        let f = t(0).pow(2).scale(&BigRational::new(3.into(), 2.into())).sub(&t(1));
        assert_eq!(format!("{f}"), "3/2*t1^2 - t2");
    }
}
