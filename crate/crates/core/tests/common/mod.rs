#![allow(dead_code)] // each test binary uses a different slice of this module

//! Shared test support: an independent prolongation-based membership
//! oracle, random generators for scalars and differential polynomials, and
//! the reduction corpus used by several suites.
//!
//! The oracle deliberately avoids the Ritt reduction path: it prolongs the
//! system by brute force, saturates the commutative ideal and asks plain
//! ideal membership, so agreement with `saturation_member` is a genuine
//! cross-check.

use std::sync::Arc;

use kolchin_core::diffpoly::{DerivOp, DiffPoly, DiffRing};
use kolchin_core::polyalg::{self, Budget, IdealBasis, MonomialOrder, PolyError};
use kolchin_core::rittkolchin::{algebraic_snapshot, AutoreducedSet};
use kolchin_core::scalars::{ScalarElement, ScalarField};

use rand::rngs::StdRng;
use rand::Rng;

/// All delta-operators of total order at most `order`.
pub fn deltas_up_to(m: usize, order: u32) -> Vec<DerivOp> {
    fn fill(out: &mut Vec<Vec<u16>>, prefix: &mut Vec<u16>, rest: u32, pos: usize, m: usize) {
        if pos == m - 1 {
            prefix.push(rest as u16);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in 0..=rest {
            prefix.push(e as u16);
            fill(out, prefix, rest - e, pos + 1, m);
            prefix.pop();
        }
    }
    let mut exps = Vec::new();
    for d in 0..=order {
        if m == 0 {
            if d == 0 {
                exps.push(vec![]);
            }
            continue;
        }
        fill(&mut exps, &mut Vec::new(), d, 0, m);
    }
    exps.into_iter().map(DerivOp::deltas).collect()
}

/// Membership of `g` in the commutative ideal generated by all `theta(f)`
/// with `order(theta) <= order`, saturated by `H_Lambda`. `None` when a
/// budget gives out.
pub fn prolonged_membership_oracle(
    g: &DiffPoly,
    set: &AutoreducedSet,
    order: u32,
    budget: &Budget,
) -> Option<bool> {
    let m = set.ring().num_derivations();
    let mut prolonged: Vec<DiffPoly> = Vec::new();
    for f in set.elements() {
        for theta in deltas_up_to(m, order) {
            prolonged.push(f.apply_theta(&theta).expect("delta application"));
        }
    }
    let h = set.h_product().clone();
    let mut all: Vec<&DiffPoly> = prolonged.iter().collect();
    all.push(&h);
    all.push(g);
    let (ring, mut converted) = algebraic_snapshot(&all);
    let g_c = converted.pop().unwrap();
    let h_c = converted.pop().unwrap();
    let ideal = IdealBasis::new(ring, converted, MonomialOrder::GrevLex);
    let sat = match polyalg::saturate(&ideal, &h_c, budget) {
        Ok(s) => s,
        Err(PolyError::BudgetExceeded(_)) => return None,
        Err(e) => panic!("oracle saturation failed: {e}"),
    };
    match polyalg::ideal_member(&g_c, &sat, budget) {
        Ok(ans) => Some(ans.is_member()),
        Err(PolyError::BudgetExceeded(_)) => None,
        Err(e) => panic!("oracle membership failed: {e}"),
    }
}

/// Random element of `Q(t)`: ratio of small polynomials, denominator kept
/// away from zero.
pub fn rand_scalar(field: &ScalarField, rng: &mut StdRng) -> ScalarElement {
    let t = field.t(1);
    let poly = |rng: &mut StdRng| {
        let mut acc = field.from_int(rng.gen_range(-3i64..=3));
        for d in 1..=2u32 {
            let c = rng.gen_range(-2i64..=2);
            if c != 0 {
                acc = &acc + &(&field.from_int(c) * &t.pow(d as i64).unwrap());
            }
        }
        acc
    };
    let num = poly(rng);
    let mut den = poly(rng);
    if den.is_zero() {
        den = &t + &field.one();
    }
    num.checked_div(&den).unwrap()
}

/// Random differential polynomial: a few monomials in low-order
/// indeterminates with small rational coefficients.
pub fn rand_diffpoly(ring: &Arc<DiffRing>, rng: &mut StdRng) -> DiffPoly {
    let m = ring.num_derivations();
    let n = ring.num_vars();
    let mut acc = DiffPoly::zero(ring);
    let terms = rng.gen_range(1..=3);
    for _ in 0..terms {
        let mut mono = DiffPoly::from_int(ring, rng.gen_range(-3i64..=3));
        if mono.is_zero() {
            mono = DiffPoly::one(ring);
        }
        let factors = rng.gen_range(0..=2);
        for _ in 0..factors {
            let var = rng.gen_range(0..n);
            let mut exps = vec![0u16; m];
            if m > 0 && rng.gen_bool(0.7) {
                exps[rng.gen_range(0..m)] = rng.gen_range(1..=2);
            }
            let ind = DiffPoly::theta_var(ring, exps, var + 1);
            mono = mono.mul(&ind);
        }
        acc = acc.add(&mono);
    }
    acc
}

/// The reduction corpus: pairs `(g, Lambda)` with `m <= 2`, `n <= 2`,
/// order <= 2, degree <= 3, anchored at the `(dx)^2 - 4x` family.
pub fn reduction_corpus() -> Vec<(DiffPoly, AutoreducedSet)> {
    let mut corpus = Vec::new();

    // m = 1, n = 1 over Q(t) with shift
    let r1 = DiffRing::new(ScalarField::q_t_shift(), 1);
    let x = DiffPoly::var(&r1, 0);
    let dx = x.apply_delta(1).unwrap();
    let d2x = dx.apply_delta(1).unwrap();
    let four_x = DiffPoly::from_int(&r1, 4).mul(&x);
    let parab = dx.pow(2).sub(&four_x);
    let l_parab = AutoreducedSet::new(vec![parab.clone()]).unwrap();
    for g in [
        d2x.clone(),
        d2x.sub(&DiffPoly::from_int(&r1, 2)),
        parab.clone(),
        parab.apply_delta(1).unwrap(),
        x.clone(),
        dx.clone(),
        x.pow(2),
        dx.mul(&x),
        d2x.mul(&dx).sub(&x),
        d2x.pow(2).sub(&DiffPoly::from_int(&r1, 4)),
        parab.mul(&x).add(&parab.apply_delta(1).unwrap()),
        DiffPoly::zero(&r1),
    ] {
        corpus.push((g, l_parab.clone()));
    }

    let l_lin = AutoreducedSet::new(vec![dx.sub(&DiffPoly::one(&r1))]).unwrap();
    for g in [
        d2x.clone(),
        dx.pow(2).sub(&DiffPoly::one(&r1)),
        dx.sub(&DiffPoly::one(&r1)),
        x.mul(&dx).sub(&x),
        d2x.add(&dx).sub(&DiffPoly::one(&r1)),
        x.clone(),
    ] {
        corpus.push((g, l_lin.clone()));
    }

    let l_exp = AutoreducedSet::new(vec![dx.sub(&x)]).unwrap();
    for g in [
        d2x.sub(&x),
        d2x.sub(&dx),
        dx.mul(&x).sub(&x.pow(2)),
        dx.pow(3).sub(&x.pow(3)),
        x.clone(),
    ] {
        corpus.push((g, l_exp.clone()));
    }

    let l_sq = AutoreducedSet::new(vec![dx.pow(2)]).unwrap();
    for g in [d2x.mul(&dx), dx.pow(3), x.clone(), dx.clone()] {
        corpus.push((g, l_sq.clone()));
    }

    // m = 1, n = 2: a charset with two elements
    let r2 = DiffRing::new(ScalarField::q_t_shift(), 2);
    let x1 = DiffPoly::var(&r2, 0);
    let x2 = DiffPoly::var(&r2, 1);
    let dx1 = x1.apply_delta(1).unwrap();
    let l_pair = AutoreducedSet::new(vec![
        x2.sub(&x1).sub(&DiffPoly::one(&r2)),
        dx1.sub(&DiffPoly::one(&r2)),
    ])
    .unwrap();
    for g in [
        x2.apply_delta(1).unwrap().sub(&DiffPoly::one(&r2)),
        x2.sub(&x1).sub(&DiffPoly::one(&r2)),
        dx1.pow(2).sub(&DiffPoly::one(&r2)),
        x1.clone(),
        x2.mul(&dx1).sub(&x1).sub(&DiffPoly::one(&r2)),
    ] {
        corpus.push((g, l_pair.clone()));
    }

    // m = 2, n = 1 over Q
    let rq2 = DiffRing::new(ScalarField::rationals(2), 1);
    let y = DiffPoly::var(&rq2, 0);
    let d1y = y.apply_delta(1).unwrap();
    let d2y = y.apply_delta(2).unwrap();
    let l_flat = AutoreducedSet::new(vec![d1y.clone(), d2y.clone()]).unwrap();
    for g in [
        d1y.apply_delta(2).unwrap(),
        d1y.mul(&d2y),
        d1y.add(&d2y),
        y.clone(),
        y.pow(2),
    ] {
        corpus.push((g, l_flat.clone()));
    }

    // m = 2: an incoherent pair (unknown answers allowed downstream)
    let l_incoh = AutoreducedSet::new(vec![d1y.sub(&y), d2y.sub(&DiffPoly::one(&rq2))]).unwrap();
    for g in [d1y.apply_delta(2).unwrap(), y.clone()] {
        corpus.push((g, l_incoh.clone()));
    }

    corpus
}
