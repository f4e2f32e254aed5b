//! The differential-difference polynomial ring `K{x1..xn}`.
//!
//! Derivative operators are stored as exponent vectors over the commuting
//! derivations plus an integer sigma power, so commutativity is baked into
//! the representation. The canonical ranking orders algebraic indeterminates
//! by `(total order, variable index, e_m, ..., e_1)` lexicographically; all
//! ranking-based machinery requires sigma-free operators, and sigma-moved
//! problems are prolonged to pure delta problems upstream.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::scalars::{ScalarElement, ScalarError, ScalarField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiffError {
    #[error("polynomial lies in the coefficient field; it has no leader")]
    NoLeader,
    #[error("operation requires sigma-free indeterminates (prolong first)")]
    SigmaPresent,
    #[error("mixed ring contexts")]
    MixedContext,
    #[error("derivation index {index} out of range 1..={max}")]
    DerivationOutOfRange { index: usize, max: usize },
    #[error("point has {got} coordinates, ring has {expected} variables")]
    BadPoint { expected: usize, got: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A derivative operator `delta_m^{e_m} ... delta_1^{e_1} sigma^s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DerivOp {
    /// exponents[i] is the power of `delta_{i+1}`
    pub exponents: Vec<u16>,
    pub sigma_power: i32,
}

impl DerivOp {
    pub fn identity(m: usize) -> Self {
        DerivOp {
            exponents: vec![0; m],
            sigma_power: 0,
        }
    }

    pub fn deltas(exponents: Vec<u16>) -> Self {
        DerivOp {
            exponents,
            sigma_power: 0,
        }
    }

    pub fn order(&self) -> u32 {
        self.exponents.iter().map(|&e| e as u32).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.order() == 0 && self.sigma_power == 0
    }

    /// Composition (operators commute, so this is exponent addition).
    pub fn compose(&self, other: &DerivOp) -> DerivOp {
        DerivOp {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
            sigma_power: self.sigma_power + other.sigma_power,
        }
    }

    pub fn bump(&self, i: usize) -> DerivOp {
        let mut exps = self.exponents.clone();
        exps[i - 1] += 1;
        DerivOp {
            exponents: exps,
            sigma_power: self.sigma_power,
        }
    }

    /// Apply this operator to a scalar.
    pub fn apply_scalar(&self, field: &ScalarField, a: &ScalarElement) -> Result<ScalarElement, ScalarError> {
        let mut out = field.shift(a, self.sigma_power as i64);
        for (i, &e) in self.exponents.iter().enumerate() {
            for _ in 0..e {
                out = field.derive(&out, i + 1)?;
            }
        }
        Ok(out)
    }
}

/// An algebraic indeterminate `theta x_i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgInd {
    pub op: DerivOp,
    /// 0-based variable index
    pub var: usize,
}

impl AlgInd {
    pub fn base(m: usize, var: usize) -> Self {
        AlgInd {
            op: DerivOp::identity(m),
            var,
        }
    }

    pub fn is_sigma_free(&self) -> bool {
        self.op.sigma_power == 0
    }

    /// The ranking tuple `(total order, variable index, e_m, ..., e_1)`.
    fn rank_key(&self) -> (u32, usize, Vec<u16>) {
        let mut rev = self.op.exponents.clone();
        rev.reverse();
        (self.op.order(), self.var, rev)
    }

    /// `Some(theta)` with `theta(other) = self`, when `self` is a derivative
    /// of `other` (including `theta = id`).
    pub fn derivative_from(&self, other: &AlgInd) -> Option<DerivOp> {
        if self.var != other.var || self.op.sigma_power != other.op.sigma_power {
            return None;
        }
        let mut diff = Vec::with_capacity(self.op.exponents.len());
        for (a, b) in self.op.exponents.iter().zip(&other.op.exponents) {
            if a < b {
                return None;
            }
            diff.push(a - b);
        }
        Some(DerivOp::deltas(diff))
    }

    pub fn is_proper_derivative_of(&self, other: &AlgInd) -> bool {
        match self.derivative_from(other) {
            Some(theta) => !theta.is_identity(),
            None => false,
        }
    }
}

/// Total order for canonical storage: the canonical ranking extended by the
/// sigma power on ties (the ranking proper ignores sigma; see
/// [`compare_indets`]).
impl Ord for AlgInd {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank_key()
            .cmp(&other.rank_key())
            .then(self.op.sigma_power.cmp(&other.op.sigma_power))
    }
}

impl PartialOrd for AlgInd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The canonical ranking on sigma-free algebraic indeterminates.
pub fn compare_indets(u: &AlgInd, v: &AlgInd) -> Result<Ordering, DiffError> {
    if u.op.exponents.len() != v.op.exponents.len() {
        return Err(DiffError::MixedContext);
    }
    if !u.is_sigma_free() || !v.is_sigma_free() {
        return Err(DiffError::SigmaPresent);
    }
    Ok(u.rank_key().cmp(&v.rank_key()))
}

impl fmt::Display for AlgInd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // outermost-first: d_m^{e_m}( ... d_1^{e_1}( s^k( x_i ) ) ... )
        let mut closes = 0;
        for (i, &e) in self.op.exponents.iter().enumerate().rev() {
            if e == 0 {
                continue;
            }
            write!(f, "d{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
            write!(f, "(")?;
            closes += 1;
        }
        if self.op.sigma_power != 0 {
            write!(f, "s")?;
            if self.op.sigma_power != 1 {
                write!(f, "^{}", self.op.sigma_power)?;
            }
            write!(f, "(")?;
            closes += 1;
        }
        write!(f, "x{}", self.var + 1)?;
        for _ in 0..closes {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for AlgInd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A monomial: a finite multiset of algebraic indeterminates, factors kept
/// sorted ascending by the storage order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DpMonomial {
    factors: Vec<(AlgInd, u32)>,
}

impl DpMonomial {
    pub fn one() -> Self {
        DpMonomial { factors: vec![] }
    }

    pub fn indet(u: AlgInd) -> Self {
        DpMonomial {
            factors: vec![(u, 1)],
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(AlgInd, u32)] {
        &self.factors
    }

    pub fn total_degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_of(&self, u: &AlgInd) -> u32 {
        self.factors
            .iter()
            .find(|(v, _)| v == u)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &DpMonomial) -> DpMonomial {
        let mut out = self.factors.clone();
        for (u, e) in &other.factors {
            match out.binary_search_by(|(v, _)| v.cmp(u)) {
                Ok(i) => out[i].1 += e,
                Err(i) => out.insert(i, (u.clone(), *e)),
            }
        }
        DpMonomial { factors: out }
    }

    pub fn with_power(&self, u: &AlgInd, e: u32) -> DpMonomial {
        let mut out = self.factors.clone();
        match out.binary_search_by(|(v, _)| v.cmp(u)) {
            Ok(i) => {
                if e == 0 {
                    out.remove(i);
                } else {
                    out[i].1 = e;
                }
            }
            Err(i) => {
                if e > 0 {
                    out.insert(i, (u.clone(), e));
                }
            }
        }
        DpMonomial { factors: out }
    }

    /// Map the operator of every factor (used for sigma moves and variable
    /// renamings).
    fn map_inds<F: Fn(&AlgInd) -> AlgInd>(&self, f: F) -> DpMonomial {
        let mut factors: Vec<(AlgInd, u32)> =
            self.factors.iter().map(|(u, e)| (f(u), *e)).collect();
        factors.sort_by(|(a, _), (b, _)| a.cmp(b));
        DpMonomial { factors }
    }
}

/// Graded reverse lexicographic over the indeterminate order: total degree
/// first; on ties the monomial with the larger exponent at the smallest
/// disagreeing indeterminate is the smaller monomial.
impl Ord for DpMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // factors are sorted ascending; scan from the small end
        let mut i = 0;
        let mut j = 0;
        loop {
            match (self.factors.get(i), other.factors.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (Some((u, eu)), Some((v, ev))) => match u.cmp(v) {
                    Ordering::Less => return Ordering::Less,
                    Ordering::Greater => return Ordering::Greater,
                    Ordering::Equal => {
                        match eu.cmp(ev) {
                            Ordering::Equal => {}
                            ord => return ord.reverse(),
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for DpMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ring context: the coefficient field (which carries `m`) plus the number
/// of differential indeterminates.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffRing {
    field: ScalarField,
    num_vars: usize,
}

impl DiffRing {
    pub fn new(field: ScalarField, num_vars: usize) -> Arc<Self> {
        Arc::new(DiffRing { field, num_vars })
    }

    pub fn field(&self) -> &ScalarField {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_derivations(&self) -> usize {
        self.field.derivations()
    }
}

pub(crate) fn same_diff_ring(a: &Arc<DiffRing>, b: &Arc<DiffRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A sparse differential polynomial.
#[derive(Clone)]
pub struct DiffPoly {
    ring: Arc<DiffRing>,
    terms: BTreeMap<DpMonomial, ScalarElement>,
}

impl PartialEq for DiffPoly {
    fn eq(&self, other: &Self) -> bool {
        same_diff_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for DiffPoly {}

/// Leader, degree, separant and initial of a nonconstant polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct LeaderData {
    pub leader: AlgInd,
    pub degree: u32,
    pub separant: DiffPoly,
    pub initial: DiffPoly,
}

impl DiffPoly {
    pub fn zero(ring: &Arc<DiffRing>) -> Self {
        DiffPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<DiffRing>) -> Self {
        Self::constant(ring, ScalarElement::one(ring.field.base_vars()))
    }

    pub fn constant(ring: &Arc<DiffRing>, c: ScalarElement) -> Self {
        assert_eq!(c.base_vars(), ring.field.base_vars());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(DpMonomial::one(), c);
        }
        DiffPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_int(ring: &Arc<DiffRing>, n: i64) -> Self {
        Self::constant(ring, ScalarElement::from_int(ring.field.base_vars(), n))
    }

    /// The variable `x_{i+1}` (0-based index).
    pub fn var(ring: &Arc<DiffRing>, i: usize) -> Self {
        assert!(i < ring.num_vars);
        Self::indeterminate(ring, AlgInd::base(ring.num_derivations(), i))
    }

    pub fn indeterminate(ring: &Arc<DiffRing>, u: AlgInd) -> Self {
        assert_eq!(u.op.exponents.len(), ring.num_derivations());
        assert!(u.var < ring.num_vars);
        let mut terms = BTreeMap::new();
        terms.insert(
            DpMonomial::indet(u),
            ScalarElement::one(ring.field.base_vars()),
        );
        DiffPoly {
            ring: ring.clone(),
            terms,
        }
    }

    /// `theta x_i` built from delta exponents (1-based variable).
    pub fn theta_var(ring: &Arc<DiffRing>, exponents: Vec<u16>, var_1based: usize) -> Self {
        Self::indeterminate(
            ring,
            AlgInd {
                op: DerivOp::deltas(exponents),
                var: var_1based - 1,
            },
        )
    }

    pub fn ring(&self) -> &Arc<DiffRing> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the polynomial lies in the coefficient field.
    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn constant_term(&self) -> ScalarElement {
        self.terms
            .get(&DpMonomial::one())
            .cloned()
            .unwrap_or_else(|| ScalarElement::zero(self.ring.field.base_vars()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DpMonomial, &ScalarElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// All algebraic indeterminates occurring.
    pub fn indeterminates(&self) -> BTreeSet<AlgInd> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (u, _) in m.factors() {
                out.insert(u.clone());
            }
        }
        out
    }

    pub fn degree_in(&self, u: &AlgInd) -> u32 {
        self.terms.keys().map(|m| m.degree_of(u)).max().unwrap_or(0)
    }

    pub fn contains_sigma_moved(&self) -> bool {
        self.indeterminates().iter().any(|u| !u.is_sigma_free())
    }

    fn insert_term(&mut self, m: DpMonomial, c: ScalarElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let sum = &*old + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &DiffPoly) -> DiffPoly {
        assert!(same_diff_ring(&self.ring, &other.ring));
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffPoly) -> DiffPoly {
        assert!(same_diff_ring(&self.ring, &other.ring));
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> DiffPoly {
        DiffPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &DiffPoly) -> DiffPoly {
        assert!(same_diff_ring(&self.ring, &other.ring));
        let mut out = DiffPoly::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &ScalarElement) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero(&self.ring);
        }
        DiffPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> DiffPoly {
        let mut out = DiffPoly::one(&self.ring);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Apply `delta_i` (1-based): Leibniz over monomials, `scalar_derive` on
    /// coefficients, exponent bump on indeterminates.
    pub fn apply_delta(&self, i: usize) -> Result<DiffPoly, DiffError> {
        let m = self.ring.num_derivations();
        if i == 0 || i > m {
            return Err(DiffError::DerivationOutOfRange { index: i, max: m });
        }
        let mut out = DiffPoly::zero(&self.ring);
        for (mono, c) in &self.terms {
            // coefficient part
            let dc = self.ring.field.derive(c, i)?;
            out.insert_term(mono.clone(), dc);
            // monomial part
            for (u, e) in mono.factors() {
                let bumped = AlgInd {
                    op: u.op.bump(i),
                    var: u.var,
                };
                let rest = mono
                    .with_power(u, e - 1)
                    .mul(&DpMonomial::indet(bumped));
                let factor = ScalarElement::from_int(self.ring.field.base_vars(), *e as i64);
                out.insert_term(rest, c * &factor);
            }
        }
        Ok(out)
    }

    /// Apply `sigma^power` to the coefficients; when `move_indets` is set
    /// the indeterminates' sigma powers move too (the full ring
    /// automorphism rather than the coefficient transform).
    pub fn apply_sigma(&self, power: i64, move_indets: bool) -> DiffPoly {
        let mut out = DiffPoly::zero(&self.ring);
        for (mono, c) in &self.terms {
            let sc = self.ring.field.shift(c, power);
            let sm = if move_indets {
                mono.map_inds(|u| AlgInd {
                    op: DerivOp {
                        exponents: u.op.exponents.clone(),
                        sigma_power: u.op.sigma_power + power as i32,
                    },
                    var: u.var,
                })
            } else {
                mono.clone()
            };
            out.insert_term(sm, sc);
        }
        out
    }

    /// The coefficient transform `f^sigma` (indeterminates fixed).
    pub fn sigma_transform(&self, power: i64) -> DiffPoly {
        self.apply_sigma(power, false)
    }

    /// Apply a whole derivative operator (deltas and a moving sigma power).
    pub fn apply_theta(&self, theta: &DerivOp) -> Result<DiffPoly, DiffError> {
        let mut out = self.apply_sigma(theta.sigma_power as i64, true);
        for (i, &e) in theta.exponents.iter().enumerate() {
            for _ in 0..e {
                out = out.apply_delta(i + 1)?;
            }
        }
        Ok(out)
    }

    /// Leader anatomy; errors on constants and on sigma-moved polynomials.
    pub fn leader_data(&self) -> Result<LeaderData, DiffError> {
        if self.is_constant() {
            return Err(DiffError::NoLeader);
        }
        if self.contains_sigma_moved() {
            return Err(DiffError::SigmaPresent);
        }
        let leader = self.indeterminates().into_iter().next_back().unwrap();
        let degree = self.degree_in(&leader);
        // write f = sum_i g_i v^i
        let mut separant = DiffPoly::zero(&self.ring);
        let mut initial = DiffPoly::zero(&self.ring);
        for (mono, c) in &self.terms {
            let e = mono.degree_of(&leader);
            if e > 0 {
                let lowered = mono.with_power(&leader, e - 1);
                let factor = ScalarElement::from_int(self.ring.field.base_vars(), e as i64);
                separant.insert_term(lowered, c * &factor);
            }
            if e == degree {
                initial.insert_term(mono.with_power(&leader, 0), c.clone());
            }
        }
        Ok(LeaderData {
            leader,
            degree,
            separant,
            initial,
        })
    }

    /// The coefficient of `v^power` when `self` is viewed as a polynomial
    /// in the indeterminate `v`.
    pub fn coeff_of_power(&self, v: &AlgInd, power: u32) -> DiffPoly {
        let mut out = DiffPoly::zero(&self.ring);
        for (mono, c) in &self.terms {
            if mono.degree_of(v) == power {
                out.insert_term(mono.with_power(v, 0), c.clone());
            }
        }
        out
    }

    /// Rank comparison; elements of `K` rank strictly below everything.
    pub fn compare_rank(&self, other: &DiffPoly) -> Result<Ordering, DiffError> {
        match (self.is_constant(), other.is_constant()) {
            (true, true) => Ok(Ordering::Equal),
            (true, false) => Ok(Ordering::Less),
            (false, true) => Ok(Ordering::Greater),
            (false, false) => {
                let a = self.leader_data()?;
                let b = other.leader_data()?;
                Ok(compare_indets(&a.leader, &b.leader)?
                    .then(a.degree.cmp(&b.degree)))
            }
        }
    }

    /// Evaluate at a point with scalar coordinates: `theta x_i` becomes
    /// `theta` applied to `a_i`.
    pub fn evaluate(&self, a: &[ScalarElement]) -> Result<ScalarElement, DiffError> {
        if a.len() != self.ring.num_vars {
            return Err(DiffError::BadPoint {
                expected: self.ring.num_vars,
                got: a.len(),
            });
        }
        let k = self.ring.field.base_vars();
        let mut cache: BTreeMap<AlgInd, ScalarElement> = BTreeMap::new();
        let mut acc = ScalarElement::zero(k);
        for (mono, c) in &self.terms {
            let mut term = c.clone();
            for (u, e) in mono.factors() {
                if !cache.contains_key(u) {
                    let val = u.op.apply_scalar(&self.ring.field, &a[u.var])?;
                    cache.insert(u.clone(), val);
                }
                let val = &cache[u];
                for _ in 0..*e {
                    term = &term * val;
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Substitute `x_i -> images[i]`: each indeterminate `theta x_i` maps to
    /// `theta` applied to the image polynomial.
    pub fn substitute(&self, images: &[DiffPoly]) -> Result<DiffPoly, DiffError> {
        if images.len() != self.ring.num_vars {
            return Err(DiffError::BadPoint {
                expected: self.ring.num_vars,
                got: images.len(),
            });
        }
        let target = images
            .first()
            .map(|f| f.ring.clone())
            .unwrap_or_else(|| self.ring.clone());
        let mut cache: BTreeMap<AlgInd, DiffPoly> = BTreeMap::new();
        let mut out = DiffPoly::zero(&target);
        for (mono, c) in &self.terms {
            let mut term = DiffPoly::constant(&target, c.clone());
            for (u, e) in mono.factors() {
                if !cache.contains_key(u) {
                    let img = images[u.var].apply_theta(&u.op)?;
                    cache.insert(u.clone(), img);
                }
                let img = cache[u].clone();
                for _ in 0..*e {
                    term = term.mul(&img);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Reindex the differential variables into another ring of the same
    /// field: variable `i` becomes variable `map(i)`.
    pub fn rename_vars<F: Fn(usize) -> usize>(
        &self,
        target: &Arc<DiffRing>,
        map: F,
    ) -> DiffPoly {
        assert_eq!(self.ring.field, target.field);
        let mut out = DiffPoly::zero(target);
        for (mono, c) in &self.terms {
            let renamed = mono.map_inds(|u| {
                let nv = map(u.var);
                assert!(nv < target.num_vars);
                AlgInd {
                    op: u.op.clone(),
                    var: nv,
                }
            });
            out.insert_term(renamed, c.clone());
        }
        out
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<&DpMonomial> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.cmp(a));
        for (idx, m) in keys.iter().enumerate() {
            let c = &self.terms[*m];
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
            let coeff_is_one = abs == "1";
            if !coeff_is_one || m.is_one() {
                if abs.contains(' ') {
                    write!(f, "({abs})")?;
                } else {
                    write!(f, "{abs}")?;
                }
                if !m.is_one() {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (u, e) in m.factors() {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{u}")?;
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
