//! Delta-closed sets as presented objects, instance verification for the
//! existential-closedness axioms, the sigma-power product construction, and
//! D-varieties with sharp points.
//!
//! Everything here verifies; nothing searches. Witness points are supplied
//! by the caller and checked exactly, and every hypothesis gets its own line
//! in the report.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::diffpoly::{DiffError, DiffPoly, DiffRing};
use crate::polyalg::{
    self, Budget, CPoly, IdealBasis, MonomialOrder, PolyError, PolyRing, Primality,
};
use crate::rittkolchin::{
    is_char_set_of_prime, saturation_member, AutoreducedSet, RittError, SatAnswer, ThreeValued,
};
use crate::scalars::{ScalarElement, ScalarError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("point has {got} coordinates, expected {expected}")]
    BadPoint { expected: usize, got: usize },
    #[error("sections must be {m} maps of {n} polynomials each")]
    BadSections { m: usize, n: usize },
    #[error("sigma-power reduction requires k >= 1")]
    PowerTooSmall,
    #[error("W must live over twice the variables of V ({expected}, got {got})")]
    BadWArity { expected: usize, got: usize },
    #[error("point does not lie on the variety: generator {generator} evaluates to {value}")]
    NotOnVariety { generator: String, value: String },
    #[error("charset presentation refuted: {0}")]
    NotACharset(String),
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error(transparent)]
    Ritt(#[from] RittError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Unknown,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Pass => write!(f, "pass"),
            CheckStatus::Fail => write!(f, "fail"),
            CheckStatus::Unknown => write!(f, "unknown"),
        }
    }
}

/// One named hypothesis with its outcome and, on failure, the witness.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub witness: Option<String>,
}

/// Structured pass/fail per hypothesis.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WitnessReport {
    pub checks: Vec<CheckResult>,
}

impl WitnessReport {
    pub fn push(&mut self, name: impl Into<String>, status: CheckStatus, witness: Option<String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            status,
            witness,
        });
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.push(name, CheckStatus::Pass, None);
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: impl Into<String>) {
        self.push(name, CheckStatus::Fail, Some(witness.into()));
    }

    pub fn unknown(&mut self, name: impl Into<String>, witness: impl Into<String>) {
        self.push(name, CheckStatus::Unknown, Some(witness.into()));
    }

    /// Fail dominates; otherwise unknown; otherwise pass.
    pub fn overall(&self) -> CheckStatus {
        if self.checks.iter().any(|c| c.status == CheckStatus::Fail) {
            CheckStatus::Fail
        } else if self.checks.iter().any(|c| c.status == CheckStatus::Unknown) {
            CheckStatus::Unknown
        } else {
            CheckStatus::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.overall() == CheckStatus::Pass
    }
}

/// A delta-closed set presented by its defining polynomials, optionally
/// certified as the zero set of a prime ideal via a characteristic set.
#[derive(Debug, Clone)]
pub enum DeltaClosedPresentation {
    General(Vec<DiffPoly>),
    Charset(AutoreducedSet),
}

impl DeltaClosedPresentation {
    /// Charset-tagged presentation; construction fails when the
    /// certification is refuted (unknown is allowed and recorded upstream).
    pub fn charset(set: AutoreducedSet, budget: &Budget) -> Result<Self, GeometryError> {
        let cert = is_char_set_of_prime(&set, budget)?;
        if cert.verdict == ThreeValued::False {
            return Err(GeometryError::NotACharset(cert.note));
        }
        Ok(DeltaClosedPresentation::Charset(set))
    }

    pub fn defining(&self) -> &[DiffPoly] {
        match self {
            DeltaClosedPresentation::General(fs) => fs,
            DeltaClosedPresentation::Charset(set) => set.elements(),
        }
    }
}

/// Membership in `V*(Lambda) = V(Lambda) \ V(H_Lambda)`: all elements vanish
/// at the point and the product of separants and initials does not.
pub fn vstar_member(a: &[ScalarElement], set: &AutoreducedSet) -> Result<bool, GeometryError> {
    let n = set.ring().num_vars();
    if a.len() != n {
        return Err(GeometryError::BadPoint {
            expected: n,
            got: a.len(),
        });
    }
    for f in set.elements() {
        if !f.evaluate(a)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(!set.h_product().evaluate(a)?.is_zero())
}

/// Check `V*(Gamma) <= V(Lambda) x V(Lambda^sigma)` by saturation-ideal
/// membership of every `Lambda` element (x-block) and every sigma-transform
/// (y-block) in `[Gamma] : H^infinity`. Three-valued per element.
pub fn containment_check(
    gamma: &AutoreducedSet,
    lambda: &AutoreducedSet,
    budget: &Budget,
) -> Result<WitnessReport, GeometryError> {
    let n = lambda.ring().num_vars();
    let n2 = gamma.ring().num_vars();
    if n2 != 2 * n {
        return Err(GeometryError::BadWArity {
            expected: 2 * n,
            got: n2,
        });
    }
    let mut report = WitnessReport::default();
    let coh = crate::rittkolchin::is_coherent(gamma)?;
    if coh.coherent {
        report.pass("gamma-coherent");
    } else {
        report.fail("gamma-coherent", coh.failures[0].clone());
        return Ok(report);
    }
    let gring = gamma.ring().clone();
    for (idx, f) in lambda.elements().iter().enumerate() {
        let fx = f.rename_vars(&gring, |i| i);
        record_membership(&mut report, format!("lambda[{idx}] on x-block"), &fx, gamma, budget)?;
    }
    for (idx, f) in lambda.elements().iter().enumerate() {
        let fy = f.sigma_transform(1).rename_vars(&gring, |i| i + n);
        record_membership(
            &mut report,
            format!("lambda^sigma[{idx}] on y-block"),
            &fy,
            gamma,
            budget,
        )?;
    }
    Ok(report)
}

fn record_membership(
    report: &mut WitnessReport,
    name: String,
    f: &DiffPoly,
    gamma: &AutoreducedSet,
    budget: &Budget,
) -> Result<(), GeometryError> {
    let sm = saturation_member(f, gamma, budget)?;
    match sm.answer {
        SatAnswer::Yes => report.pass(name),
        SatAnswer::No => report.fail(name, format!("{f} is not in the saturation ideal")),
        SatAnswer::Unknown => report.unknown(
            name,
            format!(
                "membership of {f} undecided (remainder {})",
                sm.reduction.remainder
            ),
        ),
    }
    Ok(())
}

/// Verify one instance of the existential-closedness axiom scheme: the two
/// characteristic-set certifications, the containment hypothesis, and the
/// witness point `a` with `(a, sigma a)`.
pub fn axiom_instance_verify(
    lambda: &AutoreducedSet,
    gamma: &AutoreducedSet,
    a: &[ScalarElement],
    budget: &Budget,
) -> Result<WitnessReport, GeometryError> {
    let mut report = WitnessReport::default();
    let field = lambda.ring().field().clone();

    let lc = is_char_set_of_prime(lambda, budget)?;
    match lc.verdict {
        ThreeValued::True => report.pass("lambda-charset-certified"),
        ThreeValued::False => report.fail("lambda-charset-certified", lc.note.clone()),
        ThreeValued::Unknown => report.unknown("lambda-charset-certified", lc.note.clone()),
    }
    let gc = is_char_set_of_prime(gamma, budget)?;
    match gc.verdict {
        ThreeValued::True => report.pass("gamma-charset-certified"),
        ThreeValued::False => report.fail("gamma-charset-certified", gc.note.clone()),
        ThreeValued::Unknown => report.unknown("gamma-charset-certified", gc.note.clone()),
    }

    let containment = containment_check(gamma, lambda, budget)?;
    match containment.overall() {
        CheckStatus::Pass => report.pass("containment"),
        CheckStatus::Fail => {
            let w = containment
                .checks
                .iter()
                .find(|c| c.status == CheckStatus::Fail)
                .and_then(|c| c.witness.clone())
                .unwrap_or_default();
            report.fail("containment", w);
        }
        CheckStatus::Unknown => {
            let w = containment
                .checks
                .iter()
                .find(|c| c.status == CheckStatus::Unknown)
                .and_then(|c| c.witness.clone())
                .unwrap_or_default();
            report.unknown("containment", w);
        }
    }

    // witness point on V*(Lambda)
    if vstar_member(a, lambda)? {
        report.pass("witness-on-vstar-lambda");
    } else {
        let vals: Vec<String> = lambda
            .elements()
            .iter()
            .map(|f| f.evaluate(a).map(|v| v.to_string()).unwrap_or_default())
            .collect();
        report.fail(
            "witness-on-vstar-lambda",
            format!("element values at a: [{}]", vals.join(", ")),
        );
    }
    // (a, sigma a) on V*(Gamma)
    let mut pair: Vec<ScalarElement> = a.to_vec();
    pair.extend(a.iter().map(|c| field.shift(c, 1)));
    if vstar_member(&pair, gamma)? {
        report.pass("witness-pair-on-vstar-gamma");
    } else {
        let vals: Vec<String> = gamma
            .elements()
            .iter()
            .map(|f| f.evaluate(&pair).map(|v| v.to_string()).unwrap_or_default())
            .collect();
        report.fail(
            "witness-pair-on-vstar-gamma",
            format!("element values at (a, sigma a): [{}]", vals.join(", ")),
        );
    }
    Ok(report)
}

/// The sigma-power product construction: given `V` over `n` variables and
/// `W` over `2n`, build `V~ = V x V^sigma x ... x V^{sigma^{k-1}}` and `W~`
/// with the gluing equations `x_{i+1} = y_i` and the `W` equations on
/// `(x_0, y_{k-1})`.
pub fn sigma_power_reduction(
    v_gens: &[DiffPoly],
    w_gens: &[DiffPoly],
    k: usize,
) -> Result<(Vec<DiffPoly>, Vec<DiffPoly>), GeometryError> {
    if k < 1 {
        return Err(GeometryError::PowerTooSmall);
    }
    let (ring_n, n) = match v_gens.first().or_else(|| w_gens.first()) {
        Some(f) => {
            let r = f.ring().clone();
            if !v_gens.is_empty() {
                (r.clone(), r.num_vars())
            } else {
                (r.clone(), r.num_vars() / 2)
            }
        }
        None => return Ok((vec![], vec![])),
    };
    let field = ring_n.field().clone();
    for w in w_gens {
        if w.ring().num_vars() != 2 * n {
            return Err(GeometryError::BadWArity {
                expected: 2 * n,
                got: w.ring().num_vars(),
            });
        }
    }
    let ring_kn = DiffRing::new(field.clone(), k * n);
    let ring_2kn = DiffRing::new(field.clone(), 2 * k * n);

    // V~: block j carries V^{sigma^j}
    let mut v_tilde = Vec::new();
    for j in 0..k {
        for f in v_gens {
            v_tilde.push(f.sigma_transform(j as i64).rename_vars(&ring_kn, |i| i + j * n));
        }
    }

    // W~: V~ on the x-blocks, the gluing rows, and W on (x_0, y_{k-1})
    let mut w_tilde = Vec::new();
    for j in 0..k {
        for f in v_gens {
            w_tilde.push(f.sigma_transform(j as i64).rename_vars(&ring_2kn, |i| i + j * n));
        }
    }
    for i in 0..k.saturating_sub(1) {
        for v in 0..n {
            let x_next = DiffPoly::var(&ring_2kn, (i + 1) * n + v);
            let y_i = DiffPoly::var(&ring_2kn, k * n + i * n + v);
            w_tilde.push(x_next.sub(&y_i));
        }
    }
    for w in w_gens {
        // x-half -> block x_0, y-half -> block y_{k-1}
        w_tilde.push(w.rename_vars(&ring_2kn, |i| {
            if i < n {
                i
            } else {
                k * n + (k - 1) * n + (i - n)
            }
        }));
    }
    Ok((v_tilde, w_tilde))
}

/// An affine D-variety: order-zero generators (taken to generate the ideal
/// of the variety) with `m` section maps satisfying the derivation and
/// integrability conditions.
#[derive(Debug, Clone)]
pub struct DVariety {
    ring: Arc<PolyRing>,
    generators: Vec<CPoly>,
    sections: Vec<Vec<CPoly>>,
}

impl DVariety {
    /// Validates the derivation condition and the integrability condition;
    /// irreducibility of `V` gets a best-effort bounded check whose outcome
    /// is recorded but does not block construction.
    pub fn new(
        ring: Arc<PolyRing>,
        generators: Vec<CPoly>,
        sections: Vec<Vec<CPoly>>,
        budget: &Budget,
    ) -> Result<(DVariety, WitnessReport), GeometryError> {
        let m = ring.field().derivations();
        let n = ring.num_vars();
        if sections.len() != m || sections.iter().any(|s| s.len() != n) {
            return Err(GeometryError::BadSections { m, n });
        }
        let mut report = dvariety_check(&ring, &generators, &sections, budget)?;
        let integ = integrability_check(&ring, &generators, &sections, budget)?;
        report.checks.extend(integ.checks);
        match polyalg::is_prime_bounded(
            &IdealBasis::new(ring.clone(), generators.clone(), MonomialOrder::GrevLex),
            budget,
        )? {
            Primality::Prime(_) => report.pass("irreducibility (bounded)"),
            Primality::NotPrime(w) => report.fail("irreducibility (bounded)", format!("{w:?}")),
            Primality::Unknown(r) => report.unknown("irreducibility (bounded)", r),
        }
        if report
            .checks
            .iter()
            .any(|c| c.status == CheckStatus::Fail && c.name != "irreducibility (bounded)")
        {
            // derivation or integrability failure is fatal for the type
            return Err(GeometryError::NotACharset(format!(
                "D-variety conditions fail: {:?}",
                report
                    .checks
                    .iter()
                    .find(|c| c.status == CheckStatus::Fail)
                    .map(|c| c.name.clone())
            )));
        }
        Ok((
            DVariety {
                ring,
                generators,
                sections,
            },
            report,
        ))
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[CPoly] {
        &self.generators
    }

    pub fn sections(&self) -> &[Vec<CPoly>] {
        &self.sections
    }
}

/// The derivation condition: for every generator `f` and every `i`,
/// `sum_k (df/dx_k) s_i^(k) + f^{delta_i}` lies in the generated ideal.
pub fn dvariety_check(
    ring: &Arc<PolyRing>,
    generators: &[CPoly],
    sections: &[Vec<CPoly>],
    budget: &Budget,
) -> Result<WitnessReport, GeometryError> {
    let m = ring.field().derivations();
    let n = ring.num_vars();
    let field = ring.field().clone();
    let mut report = WitnessReport::default();
    let ideal = IdealBasis::new(ring.clone(), generators.to_vec(), MonomialOrder::GrevLex);
    if generators.is_empty() {
        report.pass("derivation condition (vacuous: no generators)");
        return Ok(report);
    }
    for (gi, f) in generators.iter().enumerate() {
        for i in 1..=m {
            let mut p = f.map_coeffs(|c| field.derive(c, i).expect("valid index"));
            for k in 0..n {
                p = p.add(&f.partial(k).mul(&sections[i - 1][k]));
            }
            let name = format!("derivation condition gen[{gi}] delta_{i}");
            match polyalg::ideal_member(&p, &ideal, budget) {
                Ok(ans) if ans.is_member() => report.pass(name),
                Ok(_) => report.fail(name, format!("{p} is not in the ideal")),
                Err(PolyError::BudgetExceeded(r)) => report.unknown(name, r),
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(report)
}

/// The integrability condition, in the coefficient-differentiated reading:
/// for `i < j` and every coordinate, `sum_k (ds_i/dx_k) s_j^(k) +
/// s_i^{delta_j}` agrees with the `(i, j)`-swapped expression modulo the
/// ideal. For constant-coefficient sections this coincides with the bare
/// form.
pub fn integrability_check(
    ring: &Arc<PolyRing>,
    generators: &[CPoly],
    sections: &[Vec<CPoly>],
    budget: &Budget,
) -> Result<WitnessReport, GeometryError> {
    let m = ring.field().derivations();
    let n = ring.num_vars();
    let field = ring.field().clone();
    let mut report = WitnessReport::default();
    if m < 2 {
        report.pass("integrability (vacuous: single derivation)");
        return Ok(report);
    }
    let ideal = IdealBasis::new(ring.clone(), generators.to_vec(), MonomialOrder::GrevLex);
    for i in 1..=m {
        for j in (i + 1)..=m {
            for l in 0..n {
                let mut lhs = sections[i - 1][l].map_coeffs(|c| field.derive(c, j).expect("valid"));
                let mut rhs = sections[j - 1][l].map_coeffs(|c| field.derive(c, i).expect("valid"));
                for k in 0..n {
                    lhs = lhs.add(&sections[i - 1][l].partial(k).mul(&sections[j - 1][k]));
                    rhs = rhs.add(&sections[j - 1][l].partial(k).mul(&sections[i - 1][k]));
                }
                let diff = lhs.sub(&rhs);
                let name = format!("integrability delta_{i} delta_{j} coord {}", l + 1);
                if diff.is_zero() {
                    report.pass(name);
                    continue;
                }
                if generators.is_empty() {
                    report.fail(name, format!("difference {diff} is nonzero"));
                    continue;
                }
                match polyalg::ideal_member(&diff, &ideal, budget) {
                    Ok(ans) if ans.is_member() => report.pass(name),
                    Ok(_) => report.fail(name, format!("difference {diff} not in the ideal")),
                    Err(PolyError::BudgetExceeded(r)) => report.unknown(name, r),
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    Ok(report)
}

/// Sharp point test: `a` on `V` (otherwise an error) and `s_i(a) =
/// delta_i(a)` coordinatewise for every section.
pub fn sharp_point_check(d: &DVariety, a: &[ScalarElement]) -> Result<bool, GeometryError> {
    let n = d.ring.num_vars();
    if a.len() != n {
        return Err(GeometryError::BadPoint {
            expected: n,
            got: a.len(),
        });
    }
    for f in &d.generators {
        let v = f.eval(a);
        if !v.is_zero() {
            return Err(GeometryError::NotOnVariety {
                generator: f.to_string(),
                value: v.to_string(),
            });
        }
    }
    let field = d.ring.field();
    for (i, s) in d.sections.iter().enumerate() {
        for (k, comp) in s.iter().enumerate() {
            if comp.eval(a) != field.derive(&a[k], i + 1)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::DiffRing;
    use crate::scalars::ScalarField;

    fn ring1() -> Arc<DiffRing> {
        DiffRing::new(ScalarField::q_t_shift(), 1)
    }

    #[test]
    fn vstar_examples() {
        let r = ring1();
        let field = r.field().clone();
        let t = field.t(1);
        let x = DiffPoly::var(&r, 0);
        let dx = x.apply_delta(1).unwrap();
        // Lambda = {dx - 1}, a = t: H = 1
        let l1 = AutoreducedSet::new(vec![dx.sub(&DiffPoly::one(&r))]).unwrap();
        assert!(vstar_member(std::slice::from_ref(&t), &l1).unwrap());
        // Lambda = {(dx)^2 - 4x}, a = t^2: H(a) = 4t != 0
        let f = dx.pow(2).sub(&DiffPoly::from_int(&r, 4).mul(&x));
        let l2 = AutoreducedSet::new(vec![f]).unwrap();
        assert!(vstar_member(&[&t * &t], &l2).unwrap());
        // a = 0: the separant vanishes at the singular zero
        assert!(!vstar_member(&[field.zero()], &l2).unwrap());
    }

    #[test]
    fn containment_pass_and_fail() {
        let budget = Budget::default();
        let rx = ring1();
        let rxy = DiffRing::new(rx.field().clone(), 2);
        let x = DiffPoly::var(&rxy, 0);
        let y = DiffPoly::var(&rxy, 1);
        let dx = x.apply_delta(1).unwrap();
        // Gamma = {y - x, dx - 1}; Lambda = {dx - 1}
        let gamma =
            AutoreducedSet::new(vec![y.sub(&x), dx.sub(&DiffPoly::one(&rxy))]).unwrap();
        let xs = DiffPoly::var(&rx, 0);
        let lambda =
            AutoreducedSet::new(vec![xs.apply_delta(1).unwrap().sub(&DiffPoly::one(&rx))])
                .unwrap();
        let rep = containment_check(&gamma, &lambda, &budget).unwrap();
        assert!(rep.passed(), "{rep:?}");
        // Lambda = {x} with Gamma silent about x: fail with witness
        let lambda_bad = AutoreducedSet::new(vec![xs.clone()]).unwrap();
        let rep2 = containment_check(&gamma, &lambda_bad, &budget).unwrap();
        assert_eq!(rep2.overall(), CheckStatus::Fail);
    }

    #[test]
    fn power_trick_unwinds_sigma_powers() {
        // diagonal W: points of the pattern shape force sigma^k a = a
        let r1 = ring1();
        let r2 = DiffRing::new(r1.field().clone(), 2);
        let x = DiffPoly::var(&r2, 0);
        let y = DiffPoly::var(&r2, 1);
        let w = vec![y.sub(&x)]; // the diagonal
        for k in [2usize, 3] {
            let (v_t, w_t) = sigma_power_reduction(&[], &w, k).unwrap();
            assert!(v_t.is_empty());
            // substitute the pattern (a0, .., sigma^{k-1} a0, sigma a0, ..,
            // sigma^k a0) with a0 a fresh indeterminate
            let pattern_ring = DiffRing::new(r1.field().clone(), 1);
            let a0 = DiffPoly::var(&pattern_ring, 0);
            let images: Vec<DiffPoly> = (0..k)
                .map(|j| a0.apply_sigma(j as i64, true))
                .chain((0..k).map(|j| a0.apply_sigma(j as i64 + 1, true)))
                .collect();
            let substituted: Vec<DiffPoly> = w_t
                .iter()
                .map(|g| g.substitute(&images).unwrap())
                .collect();
            // gluing rows vanish identically; the W row becomes
            // sigma^k a0 - a0
            let expect = a0.apply_sigma(k as i64, true).sub(&a0);
            let nonzero: Vec<&DiffPoly> =
                substituted.iter().filter(|g| !g.is_zero()).collect();
            assert_eq!(nonzero.len(), 1);
            assert_eq!(nonzero[0], &expect);
        }
    }

    #[test]
    fn power_trick_k1_is_renaming() {
        let r1 = ring1();
        let r2 = DiffRing::new(r1.field().clone(), 2);
        let xs = DiffPoly::var(&r1, 0);
        let dv = xs.apply_delta(1).unwrap();
        let x = DiffPoly::var(&r2, 0);
        let y = DiffPoly::var(&r2, 1);
        let w = vec![y.sub(&x)];
        let (v_t, w_t) = sigma_power_reduction(&[dv.clone()], &w, 1).unwrap();
        assert_eq!(v_t.len(), 1);
        assert_eq!(v_t[0].to_string(), "d1(x1)");
        // W~ = V-rows on x0 plus W on (x0, y0); no gluing for k = 1
        assert_eq!(w_t.len(), 2);
        assert_eq!(w_t[0].to_string(), "d1(x1)");
        assert_eq!(w_t[1].to_string(), "x2 - x1");
    }

    #[test]
    fn dvariety_parabola() {
        let budget = Budget::default();
        let field = ScalarField::q_t_shift();
        let ring = PolyRing::with_xvars(field, 2);
        let x = CPoly::var(&ring, 0);
        let y = CPoly::var(&ring, 1);
        let v = vec![y.sub(&x.pow(2))];
        // s = (1, 2x): a D-variety structure
        let good = vec![vec![
            CPoly::one(&ring),
            x.scale(&ScalarElement::from_int(1, 2)),
        ]];
        let rep = dvariety_check(&ring, &v, &good, &budget).unwrap();
        assert!(rep.passed(), "{rep:?}");
        // s = (1, 1): fails with witness -2x + 1
        let bad = vec![vec![CPoly::one(&ring), CPoly::one(&ring)]];
        let rep2 = dvariety_check(&ring, &v, &bad, &budget).unwrap();
        assert_eq!(rep2.overall(), CheckStatus::Fail);
        // affine line with no generators: vacuous pass
        let ring1 = PolyRing::with_xvars(ScalarField::q_t_shift(), 1);
        let rep3 = dvariety_check(&ring1, &[], &[vec![CPoly::var(&ring1, 0)]], &budget).unwrap();
        assert!(rep3.passed());
    }

    #[test]
    fn integrability_examples() {
        let budget = Budget::default();
        let field = ScalarField::rationals(2);
        let ring = PolyRing::with_xvars(field, 1);
        let x = CPoly::var(&ring, 0);
        // s1 = (x), s2 = (x): symmetric, passes
        let rep = integrability_check(&ring, &[], &[vec![x.clone()], vec![x.clone()]], &budget)
            .unwrap();
        assert!(rep.passed());
        // s1 = (x), s2 = (x^2): x^2 vs 2x^2 fails
        let rep2 =
            integrability_check(&ring, &[], &[vec![x.clone()], vec![x.pow(2)]], &budget).unwrap();
        assert_eq!(rep2.overall(), CheckStatus::Fail);
        // s1 = (1), s2 = (0): everything zero
        let rep3 = integrability_check(
            &ring,
            &[],
            &[vec![CPoly::one(&ring)], vec![CPoly::zero(&ring)]],
            &budget,
        )
        .unwrap();
        assert!(rep3.passed());
    }

    #[test]
    fn sharp_points() {
        let budget = Budget::default();
        let field = ScalarField::q_t_shift();
        let t = field.t(1);
        let ring = PolyRing::with_xvars(field.clone(), 1);
        // V = A^1, s = (1): sharp points satisfy da = 1
        let (d, _) = DVariety::new(
            ring.clone(),
            vec![],
            vec![vec![CPoly::one(&ring)]],
            &budget,
        )
        .unwrap();
        assert!(sharp_point_check(&d, std::slice::from_ref(&t)).unwrap());
        assert!(!sharp_point_check(&d, &[&t * &t]).unwrap());
        // s = (0): constants are sharp
        let (d0, _) = DVariety::new(
            ring.clone(),
            vec![],
            vec![vec![CPoly::zero(&ring)]],
            &budget,
        )
        .unwrap();
        assert!(sharp_point_check(&d0, &[field.from_int(7)]).unwrap());
        // a off the variety is an error
        let parab_ring = PolyRing::with_xvars(field.clone(), 2);
        let x = CPoly::var(&parab_ring, 0);
        let y = CPoly::var(&parab_ring, 1);
        let (dp, _) = DVariety::new(
            parab_ring.clone(),
            vec![y.sub(&x.pow(2))],
            vec![vec![
                CPoly::one(&parab_ring),
                x.scale(&ScalarElement::from_int(1, 2)),
            ]],
            &budget,
        )
        .unwrap();
        let bad = sharp_point_check(&dp, &[t.clone(), t.clone()]);
        assert!(matches!(bad, Err(GeometryError::NotOnVariety { .. })));
        // the moving point (t, t^2) is sharp
        assert!(sharp_point_check(&dp, &[t.clone(), &t * &t]).unwrap());
    }
}
