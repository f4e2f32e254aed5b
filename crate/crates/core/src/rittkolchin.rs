//! Reduction theory: autoreduced sets, Ritt reduction with certificates,
//! characteristic sets, coherence, and membership in the saturation ideal
//! `[Lambda] : H^infinity`.
//!
//! Every reduction carries an explicit trace: `H * g - remainder` is an
//! exact combination `sum c_j * theta_j(f_{i_j})`, where `H` is a recorded
//! product of separants and initials. Nothing here trusts a computation it
//! cannot replay symbolically.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::diffpoly::{same_diff_ring, AlgInd, DerivOp, DiffError, DiffPoly, LeaderData};
use crate::polyalg::{
    self, Budget, CPoly, IdealBasis, MonomialOrder, NotPrimeWitness, PolyError, PolyRing,
    Primality,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RittError {
    #[error("autoreduced sets are nonempty subsets of K{{x}} minus K")]
    Empty,
    #[error("element {index} lies in the coefficient field")]
    ConstantElement { index: usize },
    #[error("not autoreduced: {offender} is not reduced with respect to {against}")]
    NotAutoreduced { offender: String, against: String },
    #[error("inconsistent system: reduction produced the nonzero constant {witness}")]
    Inconsistent { witness: String },
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `g` is partially reduced with respect to `f`: no proper derivative of
/// `f`'s leader appears in `g`. Elements of `K` are reduced w.r.t.
/// everything.
pub fn is_partially_reduced(g: &DiffPoly, f: &DiffPoly) -> Result<bool, DiffError> {
    let ld = f.leader_data()?;
    if g.is_constant() {
        return Ok(true);
    }
    Ok(!g
        .indeterminates()
        .iter()
        .any(|u| u.is_proper_derivative_of(&ld.leader)))
}

/// `g` is reduced with respect to `f`: partially reduced and of lower
/// leader degree.
pub fn is_reduced(g: &DiffPoly, f: &DiffPoly) -> Result<bool, DiffError> {
    if !is_partially_reduced(g, f)? {
        return Ok(false);
    }
    let ld = f.leader_data()?;
    Ok(g.degree_in(&ld.leader) < ld.degree)
}

/// A rank-ordered, pairwise-reduced set with its product of separants and
/// initials.
#[derive(Clone, Debug, PartialEq)]
pub struct AutoreducedSet {
    elements: Vec<DiffPoly>,
    leaders: Vec<LeaderData>,
    h_product: DiffPoly,
}

impl AutoreducedSet {
    /// Validate and build; fails naming the offending pair.
    pub fn new(elements: Vec<DiffPoly>) -> Result<Self, RittError> {
        if elements.is_empty() {
            return Err(RittError::Empty);
        }
        for (i, f) in elements.iter().enumerate() {
            if f.is_constant() {
                return Err(RittError::ConstantElement { index: i });
            }
            if f.contains_sigma_moved() {
                return Err(RittError::Diff(DiffError::SigmaPresent));
            }
            if !same_diff_ring(f.ring(), elements[0].ring()) {
                return Err(RittError::Diff(DiffError::MixedContext));
            }
        }
        let mut elements = elements;
        let mut ranked: Vec<(DiffPoly, LeaderData)> = Vec::new();
        for f in elements.drain(..) {
            let ld = f.leader_data()?;
            ranked.push((f, ld));
        }
        ranked.sort_by(|(f, a), (g, b)| {
            crate::diffpoly::compare_indets(&a.leader, &b.leader)
                .expect("sigma-free leaders")
                .then(a.degree.cmp(&b.degree))
                .then_with(|| f.to_string().cmp(&g.to_string()))
        });
        for i in 0..ranked.len() {
            for j in 0..ranked.len() {
                if i == j {
                    continue;
                }
                if !is_reduced(&ranked[i].0, &ranked[j].0)? {
                    return Err(RittError::NotAutoreduced {
                        offender: ranked[i].0.to_string(),
                        against: ranked[j].0.to_string(),
                    });
                }
            }
        }
        let ring = ranked[0].0.ring().clone();
        let mut h = DiffPoly::one(&ring);
        for (_, ld) in &ranked {
            h = h.mul(&ld.separant).mul(&ld.initial);
        }
        let (elements, leaders) = ranked.into_iter().unzip();
        Ok(AutoreducedSet {
            elements,
            leaders,
            h_product: h,
        })
    }

    pub fn elements(&self) -> &[DiffPoly] {
        &self.elements
    }

    pub fn leaders(&self) -> &[LeaderData] {
        &self.leaders
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn ring(&self) -> &Arc<crate::diffpoly::DiffRing> {
        self.elements[0].ring()
    }

    /// `H = prod S_f I_f` over the elements.
    pub fn h_product(&self) -> &DiffPoly {
        &self.h_product
    }

    /// The canonical ranking on autoreduced sets: first rank disagreement
    /// decides; on a tie of prefixes the longer set is lower.
    pub fn compare(&self, other: &AutoreducedSet) -> Ordering {
        for (a, b) in self.leaders.iter().zip(&other.leaders) {
            let ord = crate::diffpoly::compare_indets(&a.leader, &b.leader)
                .expect("sigma-free leaders")
                .then(a.degree.cmp(&b.degree));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        // longer set is lower
        other.len().cmp(&self.len())
    }
}

/// Tag for a certificate factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CertFactor {
    Separant,
    Initial,
}

/// One factor `S_{f_i}^power` or `I_{f_i}^power` of the certificate product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertTerm {
    pub element: usize,
    pub factor: CertFactor,
    pub power: u32,
}

/// One term `coefficient * theta(f_element)` of the reduction trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceTerm {
    pub coefficient: DiffPoly,
    pub theta: DerivOp,
    pub element: usize,
}

/// The outcome of a Ritt reduction: `H * g = remainder + sum(trace)`, where
/// `H` is the certificate product.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionResult {
    pub remainder: DiffPoly,
    pub certificate: Vec<CertTerm>,
    pub trace: Vec<TraceTerm>,
}

impl ReductionResult {
    /// Expand the recorded certificate product.
    pub fn certificate_product(&self, set: &AutoreducedSet) -> DiffPoly {
        let mut h = DiffPoly::one(set.ring());
        for t in &self.certificate {
            let base = match t.factor {
                CertFactor::Separant => &set.leaders()[t.element].separant,
                CertFactor::Initial => &set.leaders()[t.element].initial,
            };
            h = h.mul(&base.pow(t.power));
        }
        h
    }

    /// The smallest `l` with `H_Lambda^l * g` witnessed inside `[Lambda]`
    /// by this trace (the maximum certificate exponent).
    pub fn saturation_exponent(&self) -> u32 {
        self.certificate.iter().map(|t| t.power).max().unwrap_or(0)
    }

    /// Replay the trace: checks `H*g - remainder = sum c_j theta_j(f_ij)`
    /// as an exact identity.
    pub fn verify(&self, g: &DiffPoly, set: &AutoreducedSet) -> Result<bool, DiffError> {
        let h = self.certificate_product(set);
        let lhs = h.mul(g).sub(&self.remainder);
        let mut rhs = DiffPoly::zero(set.ring());
        for t in &self.trace {
            let theta_f = set.elements()[t.element].apply_theta(&t.theta)?;
            rhs = rhs.add(&t.coefficient.mul(&theta_f));
        }
        Ok(lhs == rhs)
    }
}

enum Offense {
    /// offending indeterminate is a proper derivative of the leader of
    /// element `i`
    Partial { ind: AlgInd, element: usize },
    /// offending indeterminate is the leader of element `i` with degree at
    /// least `d_i`
    Degree { ind: AlgInd, element: usize },
}

fn find_offense(r: &DiffPoly, set: &AutoreducedSet) -> Option<Offense> {
    let mut best: Option<(AlgInd, Offense)> = None;
    for u in r.indeterminates() {
        // lowest-ranked matching element (deterministic tie-break; with
        // several derivations one indeterminate can derive from two leaders)
        let partial = set
            .leaders()
            .iter()
            .position(|ld| u.is_proper_derivative_of(&ld.leader));
        let offense = if let Some(i) = partial {
            Some(Offense::Partial {
                ind: u.clone(),
                element: i,
            })
        } else {
            set.leaders()
                .iter()
                .position(|ld| ld.leader == u && r.degree_in(&u) >= ld.degree)
                .map(|i| Offense::Degree {
                    ind: u.clone(),
                    element: i,
                })
        };
        if let Some(off) = offense {
            let replace = match &best {
                None => true,
                Some((bu, _)) => {
                    crate::diffpoly::compare_indets(&u, bu).expect("sigma-free") == Ordering::Greater
                }
            };
            if replace {
                best = Some((u.clone(), off));
            }
        }
    }
    best.map(|(_, off)| off)
}

/// Ritt's full reduction: the remainder is reduced with respect to every
/// element, and the trace certifies `H*g = remainder mod [Lambda]` exactly.
/// Deterministic: the highest-ranking offending indeterminate goes first.
pub fn ritt_reduce(g: &DiffPoly, set: &AutoreducedSet) -> Result<ReductionResult, RittError> {
    if g.contains_sigma_moved() {
        return Err(RittError::Diff(DiffError::SigmaPresent));
    }
    let ring = set.ring().clone();
    let mut r = g.clone();
    let mut cert: BTreeMap<(usize, CertFactor), u32> = BTreeMap::new();
    let mut trace: Vec<TraceTerm> = Vec::new();

    // one elimination step: r := mult*r - c*theta(f_i); every prior trace
    // coefficient picks up the factor `mult`
    let step = |r: &mut DiffPoly,
                    trace: &mut Vec<TraceTerm>,
                    cert: &mut BTreeMap<(usize, CertFactor), u32>,
                    mult: &DiffPoly,
                    factor: CertFactor,
                    coeff: DiffPoly,
                    theta: DerivOp,
                    element: usize,
                    theta_f: &DiffPoly| {
        *r = mult.mul(r).sub(&coeff.mul(theta_f));
        for t in trace.iter_mut() {
            t.coefficient = mult.mul(&t.coefficient);
        }
        trace.push(TraceTerm {
            coefficient: coeff,
            theta,
            element,
        });
        *cert.entry((element, factor)).or_insert(0) += 1;
    };

    loop {
        match find_offense(&r, set) {
            None => break,
            Some(Offense::Partial { ind, element }) => {
                let ld = &set.leaders()[element];
                let theta = ind
                    .derivative_from(&ld.leader)
                    .expect("offense is a derivative of the leader");
                let theta_f = set.elements()[element].apply_theta(&theta)?;
                // theta(f) = S_f * ind + lower; eliminate every power of ind
                let sep = ld.separant.clone();
                while r.degree_in(&ind) >= 1 {
                    let d = r.degree_in(&ind);
                    let c = r.coeff_of_power(&ind, d);
                    let u_pow = DiffPoly::indeterminate(&ring, ind.clone()).pow(d - 1);
                    step(
                        &mut r,
                        &mut trace,
                        &mut cert,
                        &sep,
                        CertFactor::Separant,
                        c.mul(&u_pow),
                        theta.clone(),
                        element,
                        &theta_f,
                    );
                }
            }
            Some(Offense::Degree { ind, element }) => {
                let ld = &set.leaders()[element];
                let f = set.elements()[element].clone();
                let init = ld.initial.clone();
                let d_f = ld.degree;
                while r.degree_in(&ind) >= d_f {
                    let d = r.degree_in(&ind);
                    let c = r.coeff_of_power(&ind, d);
                    let u_pow = DiffPoly::indeterminate(&ring, ind.clone()).pow(d - d_f);
                    step(
                        &mut r,
                        &mut trace,
                        &mut cert,
                        &init,
                        CertFactor::Initial,
                        c.mul(&u_pow),
                        DerivOp::identity(ring.num_derivations()),
                        element,
                        &f,
                    );
                }
            }
        }
    }

    let certificate = cert
        .into_iter()
        .map(|((element, factor), power)| CertTerm {
            element,
            factor,
            power,
        })
        .collect();
    Ok(ReductionResult {
        remainder: r,
        certificate,
        trace,
    })
}

/// Greedy basic set: scan candidates in increasing rank, keeping each one
/// that stays reduced against everything already kept.
fn basic_set(candidates: &[DiffPoly]) -> Result<Vec<DiffPoly>, RittError> {
    let mut sorted: Vec<&DiffPoly> = candidates.iter().collect();
    let mut keyed: Vec<(&DiffPoly, LeaderData, String)> = Vec::new();
    for f in sorted.drain(..) {
        let ld = f.leader_data()?;
        keyed.push((f, ld, f.to_string()));
    }
    keyed.sort_by(|(_, a, sa), (_, b, sb)| {
        crate::diffpoly::compare_indets(&a.leader, &b.leader)
            .expect("sigma-free leaders")
            .then(a.degree.cmp(&b.degree))
            .then_with(|| sa.cmp(sb))
    });
    let mut chosen: Vec<DiffPoly> = Vec::new();
    'outer: for (f, _, _) in keyed {
        for b in &chosen {
            if !is_reduced(f, b)? {
                continue 'outer;
            }
        }
        chosen.push(f.clone());
    }
    Ok(chosen)
}

/// Ritt's characteristic-set process: greedily take a lowest-ranking basic
/// set, reduce the rest, adjoin nonzero remainders, repeat. A remainder in
/// `K \ {0}` means the system generates the unit ideal.
pub fn characteristic_set(system: &[DiffPoly]) -> Result<AutoreducedSet, RittError> {
    characteristic_set_traced(system).map(|(set, _)| set)
}

/// As [`characteristic_set`], also returning the accumulated working set
/// (inputs plus every adjoined remainder).
pub fn characteristic_set_traced(
    system: &[DiffPoly],
) -> Result<(AutoreducedSet, Vec<DiffPoly>), RittError> {
    let mut acc: Vec<DiffPoly> = Vec::new();
    for f in system {
        if f.is_zero() {
            continue;
        }
        if f.is_constant() {
            return Err(RittError::Inconsistent {
                witness: f.to_string(),
            });
        }
        if !acc.contains(f) {
            acc.push(f.clone());
        }
    }
    if acc.is_empty() {
        return Err(RittError::Empty);
    }
    loop {
        let basic = basic_set(&acc)?;
        let set = AutoreducedSet::new(basic)?;
        let mut fresh: Vec<DiffPoly> = Vec::new();
        for f in &acc {
            if set.elements().contains(f) {
                continue;
            }
            let rr = ritt_reduce(f, &set)?;
            if rr.remainder.is_zero() {
                continue;
            }
            if rr.remainder.is_constant() {
                return Err(RittError::Inconsistent {
                    witness: rr.remainder.to_string(),
                });
            }
            if !acc.contains(&rr.remainder) && !fresh.contains(&rr.remainder) {
                fresh.push(rr.remainder);
            }
        }
        if fresh.is_empty() {
            return Ok((set, acc));
        }
        acc.extend(fresh);
    }
}

/// The delta-polynomials of all leader pairs with a common derivative:
/// `S_{f_j} theta_i(f_i) - S_{f_i} theta_j(f_j)` at the least common
/// derivative of the two leaders.
pub fn delta_pairs(set: &AutoreducedSet) -> Result<Vec<DiffPoly>, RittError> {
    let mut out = Vec::new();
    for i in 0..set.len() {
        for j in (i + 1)..set.len() {
            let vi = &set.leaders()[i].leader;
            let vj = &set.leaders()[j].leader;
            if vi.var != vj.var {
                continue;
            }
            let lcm: Vec<u16> = vi
                .op
                .exponents
                .iter()
                .zip(&vj.op.exponents)
                .map(|(a, b)| *a.max(b))
                .collect();
            let theta_i = DerivOp::deltas(
                lcm.iter()
                    .zip(&vi.op.exponents)
                    .map(|(l, e)| l - e)
                    .collect(),
            );
            let theta_j = DerivOp::deltas(
                lcm.iter()
                    .zip(&vj.op.exponents)
                    .map(|(l, e)| l - e)
                    .collect(),
            );
            let lhs = set.leaders()[j]
                .separant
                .mul(&set.elements()[i].apply_theta(&theta_i)?);
            let rhs = set.leaders()[i]
                .separant
                .mul(&set.elements()[j].apply_theta(&theta_j)?);
            out.push(lhs.sub(&rhs));
        }
    }
    Ok(out)
}

/// Coherence report: every delta-polynomial must reduce to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceReport {
    pub coherent: bool,
    /// nonzero remainders of delta-polynomials, printed
    pub failures: Vec<String>,
}

pub fn is_coherent(set: &AutoreducedSet) -> Result<CoherenceReport, RittError> {
    let mut failures = Vec::new();
    for dp in delta_pairs(set)? {
        let rr = ritt_reduce(&dp, set)?;
        if !rr.remainder.is_zero() {
            failures.push(rr.remainder.to_string());
        }
    }
    Ok(CoherenceReport {
        coherent: failures.is_empty(),
        failures,
    })
}

/// Build the commutative snapshot ring on exactly the algebraic
/// indeterminates occurring in the given polynomials (ascending rank), and
/// convert the polynomials into it.
pub fn algebraic_snapshot(polys: &[&DiffPoly]) -> (Arc<PolyRing>, Vec<CPoly>) {
    assert!(!polys.is_empty());
    let ring = polys[0].ring().clone();
    let mut inds: Vec<AlgInd> = Vec::new();
    for p in polys {
        for u in p.indeterminates() {
            if !inds.contains(&u) {
                inds.push(u);
            }
        }
    }
    inds.sort();
    let names: Vec<String> = inds.iter().map(|u| u.to_string()).collect();
    let cring = PolyRing::new(ring.field().clone(), names.clone());
    let position: BTreeMap<AlgInd, usize> = inds.into_iter().zip(0..).collect();
    let out = polys
        .iter()
        .map(|p| diff_to_cpoly(p, &cring, &position))
        .collect();
    (cring, out)
}

pub fn diff_to_cpoly(
    p: &DiffPoly,
    cring: &Arc<PolyRing>,
    position: &BTreeMap<AlgInd, usize>,
) -> CPoly {
    let mut out = CPoly::zero(cring);
    for (mono, c) in p.terms() {
        let mut e = vec![0u32; cring.num_vars()];
        for (u, k) in mono.factors() {
            e[*position.get(u).expect("indeterminate present in snapshot")] += k;
        }
        out = out.add(&CPoly::monomial(cring, e, c.clone()));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThreeValued {
    True,
    False,
    Unknown,
}

/// Evidence trail for the characteristic-set-of-a-prime test: coherence,
/// the audited snapshot variable set, bounded primality of the algebraic
/// saturation, and the probe sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CharsetCertification {
    pub verdict: ThreeValued,
    pub coherence: CoherenceReport,
    pub algebraic_vars: Vec<String>,
    pub saturation_basis: Option<Vec<String>>,
    pub primality: Option<Primality>,
    pub probes_checked: usize,
    pub probe_hit: Option<String>,
    pub note: String,
}

/// Decide (three-valued) whether `Lambda` is a characteristic set of a
/// prime differential ideal: coherence, primality of the algebraic
/// saturation `(Lambda) : H^infinity` on the snapshot variables, and a
/// bounded sweep of reduced probe polynomials that must stay outside it.
pub fn is_char_set_of_prime(set: &AutoreducedSet, budget: &Budget) -> Result<CharsetCertification, RittError> {
    let coherence = is_coherent(set)?;
    if !coherence.coherent {
        let note = format!(
            "a delta-polynomial has nonzero remainder {}",
            coherence.failures[0]
        );
        return Ok(CharsetCertification {
            verdict: ThreeValued::False,
            coherence,
            algebraic_vars: vec![],
            saturation_basis: None,
            primality: None,
            probes_checked: 0,
            probe_hit: None,
            note,
        });
    }

    let mut polys: Vec<&DiffPoly> = set.elements().iter().collect();
    let h = set.h_product().clone();
    polys.push(&h);
    let (cring, mut converted) = algebraic_snapshot(&polys);
    let h_c = converted.pop().unwrap();
    let algebraic_vars: Vec<String> = cring.vars().to_vec();

    let ideal = IdealBasis::new(cring.clone(), converted, MonomialOrder::GrevLex);
    let sat = match polyalg::saturate(&ideal, &h_c, budget) {
        Ok(s) => s,
        Err(PolyError::BudgetExceeded(reason)) => {
            return Ok(CharsetCertification {
                verdict: ThreeValued::Unknown,
                coherence,
                algebraic_vars,
                saturation_basis: None,
                primality: None,
                probes_checked: 0,
                probe_hit: None,
                note: format!("saturation exceeded budget: {reason}"),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let saturation_basis: Vec<String> = sat.gens.iter().map(|g| g.to_string()).collect();

    let primality = polyalg::is_prime_bounded(&sat, budget)?;
    if let Primality::NotPrime(ref w) = primality {
        let note = match w {
            NotPrimeWitness::UnitIdeal => "algebraic saturation is the unit ideal".to_string(),
            NotPrimeWitness::ZeroDivisors { f, g, .. } => {
                format!("algebraic saturation has zero divisors {f} and {g}")
            }
        };
        return Ok(CharsetCertification {
            verdict: ThreeValued::False,
            coherence,
            algebraic_vars,
            saturation_basis: Some(saturation_basis),
            primality: Some(primality),
            probes_checked: 0,
            probe_hit: None,
            note,
        });
    }

    // probe sweep: reduced nonzero polynomials that must stay outside the
    // algebraic saturation (a hit refutes minimality of the would-be
    // characteristic set)
    let probes = probe_polynomials(set, &cring);
    let probes_checked = probes.len();
    for probe in &probes {
        match polyalg::ideal_member(probe, &sat, budget) {
            Ok(ans) if ans.is_member() => {
                return Ok(CharsetCertification {
                    verdict: ThreeValued::False,
                    coherence,
                    algebraic_vars,
                    saturation_basis: Some(saturation_basis),
                    primality: Some(primality),
                    probes_checked,
                    probe_hit: Some(probe.to_string()),
                    note: format!("reduced probe {probe} lies in the algebraic saturation"),
                });
            }
            Ok(_) => {}
            Err(PolyError::BudgetExceeded(reason)) => {
                return Ok(CharsetCertification {
                    verdict: ThreeValued::Unknown,
                    coherence,
                    algebraic_vars,
                    saturation_basis: Some(saturation_basis),
                    primality: Some(primality),
                    probes_checked,
                    probe_hit: None,
                    note: format!("probe membership exceeded budget: {reason}"),
                });
            }
            Err(e) => return Err(e.into()),
        }
    }

    match primality {
        Primality::Prime(_) => Ok(CharsetCertification {
            verdict: ThreeValued::True,
            coherence,
            algebraic_vars,
            saturation_basis: Some(saturation_basis),
            primality: Some(primality),
            probes_checked,
            probe_hit: None,
            note: "coherent, saturation prime, probes clear".to_string(),
        }),
        Primality::Unknown(ref reason) => {
            let note = format!("primality of the algebraic saturation undecided: {reason}");
            Ok(CharsetCertification {
                verdict: ThreeValued::Unknown,
                coherence,
                algebraic_vars,
                saturation_basis: Some(saturation_basis),
                primality: Some(primality),
                probes_checked,
                probe_hit: None,
                note,
            })
        }
        Primality::NotPrime(_) => unreachable!("handled above"),
    }
}

/// Probe set: monomials in the leaders below their element degrees, and
/// monomials in the non-leader indeterminates up to total degree 2.
fn probe_polynomials(set: &AutoreducedSet, cring: &Arc<PolyRing>) -> Vec<CPoly> {
    let leaders: Vec<&AlgInd> = set.leaders().iter().map(|ld| &ld.leader).collect();
    let degrees: Vec<u32> = set.leaders().iter().map(|ld| ld.degree).collect();
    let leader_pos: Vec<usize> = leaders
        .iter()
        .map(|u| cring.var_index(&u.to_string()).expect("leader in snapshot"))
        .collect();
    let nonleader_pos: Vec<usize> = (0..cring.num_vars())
        .filter(|i| !leader_pos.contains(i))
        .collect();
    let mut probes = Vec::new();
    // products of leaders with exponents strictly below the degrees
    let mut stack: Vec<Vec<u32>> = vec![vec![]];
    for &d in &degrees {
        let mut next = Vec::new();
        for partial in &stack {
            for e in 0..d {
                let mut p = partial.clone();
                p.push(e);
                next.push(p);
            }
        }
        stack = next;
    }
    for exps in stack {
        if exps.iter().all(|&e| e == 0) {
            continue;
        }
        let mut e = vec![0u32; cring.num_vars()];
        for (pos, &x) in leader_pos.iter().zip(&exps) {
            e[*pos] = x;
        }
        probes.push(CPoly::monomial(
            cring,
            e,
            crate::scalars::ScalarElement::one(cring.field().base_vars()),
        ));
    }
    // non-leader monomials of total degree 1 and 2
    for (a_idx, &a) in nonleader_pos.iter().enumerate() {
        let mut e = vec![0u32; cring.num_vars()];
        e[a] = 1;
        probes.push(CPoly::monomial(
            cring,
            e.clone(),
            crate::scalars::ScalarElement::one(cring.field().base_vars()),
        ));
        for &b in nonleader_pos.iter().skip(a_idx) {
            let mut e2 = vec![0u32; cring.num_vars()];
            e2[a] += 1;
            e2[b] += 1;
            probes.push(CPoly::monomial(
                cring,
                e2,
                crate::scalars::ScalarElement::one(cring.field().base_vars()),
            ));
        }
    }
    probes
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatAnswer {
    Yes,
    No,
    Unknown,
}

/// Membership answer for `[Lambda] : H^infinity` with its evidence: the
/// reduction (certificate-bearing) and, when consulted, the charset
/// certification.
#[derive(Debug, Clone)]
pub struct SaturationMembership {
    pub answer: SatAnswer,
    pub reduction: ReductionResult,
    pub certification: Option<CharsetCertification>,
}

/// Membership of `g` in `[Lambda] : H_Lambda^infinity`. Remainder zero is a
/// certified yes; a nonzero remainder refutes membership when `Lambda` is a
/// certified characteristic set of a prime differential ideal (the
/// remainder is reduced, so it could only be the zero element); otherwise
/// the answer is unknown.
pub fn saturation_member(
    g: &DiffPoly,
    set: &AutoreducedSet,
    budget: &Budget,
) -> Result<SaturationMembership, RittError> {
    let reduction = ritt_reduce(g, set)?;
    if reduction.remainder.is_zero() {
        return Ok(SaturationMembership {
            answer: SatAnswer::Yes,
            reduction,
            certification: None,
        });
    }
    let certification = is_char_set_of_prime(set, budget)?;
    let answer = match certification.verdict {
        ThreeValued::True => SatAnswer::No,
        _ => SatAnswer::Unknown,
    };
    Ok(SaturationMembership {
        answer,
        reduction,
        certification: Some(certification),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::DiffRing;
    use crate::scalars::ScalarField;

    fn ring1() -> Arc<DiffRing> {
        DiffRing::new(ScalarField::q_t_shift(), 1)
    }

    fn parabolic(r: &Arc<DiffRing>) -> (DiffPoly, DiffPoly, DiffPoly) {
        let x = DiffPoly::var(r, 0);
        let dx = x.apply_delta(1).unwrap();
        let f = dx.pow(2).sub(&DiffPoly::from_int(r, 4).mul(&x));
        (x, dx, f)
    }

    #[test]
    fn reduced_predicates() {
        let r = ring1();
        let (x, dx, f) = parabolic(&r);
        let d2x = dx.apply_delta(1).unwrap();
        assert!(!is_partially_reduced(&d2x, &f).unwrap());
        let g = DiffPoly::from_int(&r, 4).mul(&dx);
        assert!(is_reduced(&g, &f).unwrap());
        assert!(is_reduced(&x, &f).unwrap());
        // K elements are reduced w.r.t. everything
        assert!(is_reduced(&DiffPoly::from_int(&r, 3), &f).unwrap());
    }

    #[test]
    fn autoreduced_construction() {
        let r = ring1();
        let (x, dx, f) = parabolic(&r);
        let set = AutoreducedSet::new(vec![f.clone()]).unwrap();
        // H = S*I = 2 dx * 1
        assert_eq!(set.h_product(), &DiffPoly::from_int(&r, 2).mul(&dx));
        // {x, dx} is not autoreduced: dx is a proper derivative of x's leader
        let err = AutoreducedSet::new(vec![x.clone(), dx.clone()]).unwrap_err();
        assert!(matches!(err, RittError::NotAutoreduced { .. }));
        // empty is rejected
        assert!(matches!(AutoreducedSet::new(vec![]), Err(RittError::Empty)));
    }

    #[test]
    fn autoreduced_ranking() {
        let r = DiffRing::new(ScalarField::with_active(1, 1, 1, vec![num_rational::BigRational::from_integer(1.into())]).unwrap(), 2);
        let x = DiffPoly::var(&r, 0);
        let y = DiffPoly::var(&r, 1);
        let dy = y.apply_delta(1).unwrap();
        let (_, _, f) = {
            let dx = x.apply_delta(1).unwrap();
            (x.clone(), dx.clone(), dx.pow(2).sub(&DiffPoly::from_int(&r, 4).mul(&x)))
        };
        let s1 = AutoreducedSet::new(vec![x.clone()]).unwrap();
        let s2 = AutoreducedSet::new(vec![f]).unwrap();
        // {x} < {(dx)^2 - 4x}
        assert_eq!(s1.compare(&s2), Ordering::Less);
        // {x, dy} < {x}: prefix equal, longer set is lower
        let s3 = AutoreducedSet::new(vec![x.clone(), dy]).unwrap();
        assert_eq!(s3.compare(&s1), Ordering::Less);
        assert_eq!(s1.compare(&s1), Ordering::Equal);
    }

    #[test]
    fn reduce_second_derivative() {
        // g = d2x, Lambda = {(dx)^2 - 4x}: remainder 4 dx, certificate S^1
        let r = ring1();
        let (_, dx, f) = parabolic(&r);
        let set = AutoreducedSet::new(vec![f.clone()]).unwrap();
        let d2x = dx.apply_delta(1).unwrap();
        let rr = ritt_reduce(&d2x, &set).unwrap();
        assert_eq!(rr.remainder, DiffPoly::from_int(&r, 4).mul(&dx));
        assert_eq!(rr.certificate.len(), 1);
        assert_eq!(rr.certificate[0].factor, CertFactor::Separant);
        assert_eq!(rr.certificate[0].power, 1);
        assert!(rr.verify(&d2x, &set).unwrap());
        // an element of Lambda reduces to zero
        let rr2 = ritt_reduce(&f, &set).unwrap();
        assert!(rr2.remainder.is_zero());
        assert!(rr2.verify(&f, &set).unwrap());
        // g = d2x - 2 reduces to zero: S*g = delta(f) exactly
        let g = d2x.sub(&DiffPoly::from_int(&r, 2));
        let rr3 = ritt_reduce(&g, &set).unwrap();
        assert!(rr3.remainder.is_zero(), "remainder {}", rr3.remainder);
        assert!(rr3.verify(&g, &set).unwrap());
    }

    #[test]
    fn remainder_is_reduced() {
        let r = ring1();
        let (x, dx, f) = parabolic(&r);
        let set = AutoreducedSet::new(vec![f.clone()]).unwrap();
        let d2x = dx.apply_delta(1).unwrap();
        let g = d2x.pow(2).mul(&x).add(&dx.pow(3)).sub(&x.pow(2));
        let rr = ritt_reduce(&g, &set).unwrap();
        for e in set.elements() {
            assert!(is_reduced(&rr.remainder, e).unwrap());
        }
        assert!(rr.verify(&g, &set).unwrap());
    }

    #[test]
    fn charset_examples() {
        let r = ring1();
        let (_, dx, f) = parabolic(&r);
        // singleton input returns itself
        let s = characteristic_set(&[f.clone()]).unwrap();
        assert_eq!(s.elements(), &[f.clone()]);
        // {dx - 1, d2x}: the second element reduces away
        let g = dx.sub(&DiffPoly::one(&r));
        let d2x = dx.apply_delta(1).unwrap();
        let s2 = characteristic_set(&[g.clone(), d2x.clone()]).unwrap();
        assert_eq!(s2.elements(), &[g]);
        // {(dx)^2 - 4x, d2x - 2}: the second reduces to zero via delta(f)
        let h = d2x.sub(&DiffPoly::from_int(&r, 2));
        let s3 = characteristic_set(&[f.clone(), h]).unwrap();
        assert_eq!(s3.elements(), &[f]);
    }

    #[test]
    fn charset_inconsistent() {
        // {dx - 1, dx + 1} forces 2 = 0
        let r = ring1();
        let x = DiffPoly::var(&r, 0);
        let dx = x.apply_delta(1).unwrap();
        let err = characteristic_set(&[
            dx.sub(&DiffPoly::one(&r)),
            dx.add(&DiffPoly::one(&r)),
        ])
        .unwrap_err();
        assert!(matches!(err, RittError::Inconsistent { .. }));
    }

    #[test]
    fn delta_pairs_and_coherence() {
        // m = 2 over Q
        let r = DiffRing::new(ScalarField::rationals(2), 1);
        let x = DiffPoly::var(&r, 0);
        let d1x = x.apply_delta(1).unwrap();
        let d2x = x.apply_delta(2).unwrap();
        // singleton: vacuously coherent
        let (_, dx, f) = {
            let rr = ring1();
            let x = DiffPoly::var(&rr, 0);
            let dx = x.apply_delta(1).unwrap();
            (x.clone(), dx.clone(), dx.pow(2).sub(&DiffPoly::from_int(&rr, 4).mul(&x)))
        };
        let single = AutoreducedSet::new(vec![f]).unwrap();
        assert!(delta_pairs(&single).unwrap().is_empty());
        assert!(is_coherent(&single).unwrap().coherent);
        let _ = dx;
        // {d1x - x, d2x - 1}: delta-poly reduces to the nonzero constant -1
        let set = AutoreducedSet::new(vec![d1x.sub(&x), d2x.sub(&DiffPoly::one(&r))]).unwrap();
        let dps = delta_pairs(&set).unwrap();
        assert_eq!(dps.len(), 1);
        let rep = is_coherent(&set).unwrap();
        assert!(!rep.coherent);
        // {d1x, d2x}: the delta-polynomial collapses to zero
        let set2 = AutoreducedSet::new(vec![d1x.clone(), d2x.clone()]).unwrap();
        let dps2 = delta_pairs(&set2).unwrap();
        assert_eq!(dps2.len(), 1);
        assert!(dps2[0].is_zero());
        assert!(is_coherent(&set2).unwrap().coherent);
    }

    #[test]
    fn charset_of_prime_examples() {
        let budget = Budget::default();
        let r = ring1();
        let x = DiffPoly::var(&r, 0);
        let dx = x.apply_delta(1).unwrap();
        // {dx}: true
        let s1 = AutoreducedSet::new(vec![dx.clone()]).unwrap();
        assert_eq!(is_char_set_of_prime(&s1, &budget).unwrap().verdict, ThreeValued::True);
        // {(dx)^2 - 4x}: true
        let f = dx.pow(2).sub(&DiffPoly::from_int(&r, 4).mul(&x));
        let s2 = AutoreducedSet::new(vec![f]).unwrap();
        let cert = is_char_set_of_prime(&s2, &budget).unwrap();
        assert_eq!(cert.verdict, ThreeValued::True, "{}", cert.note);
        // {(dx)^2}: false, saturation is the unit ideal
        let s3 = AutoreducedSet::new(vec![dx.pow(2)]).unwrap();
        let cert3 = is_char_set_of_prime(&s3, &budget).unwrap();
        assert_eq!(cert3.verdict, ThreeValued::False);
        // {d1x, d2x} with m = 2: true
        let r2 = DiffRing::new(ScalarField::rationals(2), 1);
        let y = DiffPoly::var(&r2, 0);
        let s4 = AutoreducedSet::new(vec![
            y.apply_delta(1).unwrap(),
            y.apply_delta(2).unwrap(),
        ])
        .unwrap();
        assert_eq!(is_char_set_of_prime(&s4, &budget).unwrap().verdict, ThreeValued::True);
    }

    #[test]
    fn saturation_membership() {
        let budget = Budget::default();
        let r = ring1();
        let x = DiffPoly::var(&r, 0);
        let dx = x.apply_delta(1).unwrap();
        let f = dx.pow(2).sub(&DiffPoly::from_int(&r, 4).mul(&x));
        let set = AutoreducedSet::new(vec![f]).unwrap();
        // d2x - 2 is a member (remainder zero)
        let d2x = dx.apply_delta(1).unwrap();
        let g = d2x.sub(&DiffPoly::from_int(&r, 2));
        assert_eq!(
            saturation_member(&g, &set, &budget).unwrap().answer,
            SatAnswer::Yes
        );
        // x is reduced and nonzero; Lambda certified: not a member
        assert_eq!(
            saturation_member(&x, &set, &budget).unwrap().answer,
            SatAnswer::No
        );
        // zero is trivially a member
        assert_eq!(
            saturation_member(&DiffPoly::zero(&r), &set, &budget)
                .unwrap()
                .answer,
            SatAnswer::Yes
        );
    }
}
