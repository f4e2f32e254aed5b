//! Buchberger's algorithm with sugar-strategy pair selection, cofactor
//! tracking for membership certificates, and saturation by the
//! extra-variable method.

use std::sync::Arc;

use super::{same_ring, Budget, CPoly, IdealBasis, MonomialOrder, PolyError, PolyRing};
use crate::scalars::ScalarElement;

/// A basis element together with its expression in terms of the original
/// generators: `poly = sum cofactors[i] * gen_i`.
#[derive(Clone)]
struct Tracked {
    poly: CPoly,
    cofactors: Vec<CPoly>,
    sugar: u32,
}

impl Tracked {
    fn monic(mut self, order: MonomialOrder) -> Tracked {
        if let Some(lc) = self.poly.leading_coeff(order).cloned() {
            if !lc.is_one() {
                let inv = lc.recip().expect("leading coefficient nonzero");
                self.poly = self.poly.scale(&inv);
                for c in &mut self.cofactors {
                    *c = c.scale(&inv);
                }
            }
        }
        self
    }
}

/// Full normal form of `p` with respect to `basis`, updating cofactors.
fn reduce_tracked(mut p: Tracked, basis: &[Tracked], order: MonomialOrder) -> Tracked {
    let ring = p.poly.ring().clone();
    let mut result = CPoly::zero(&ring);
    'outer: loop {
        let Some(e) = p.poly.leading_expt(order).cloned() else {
            break;
        };
        for b in basis {
            let be = b.poly.leading_expt(order).expect("basis polynomial nonzero");
            if e.iter().zip(be).all(|(a, x)| a >= x) {
                let qe: Vec<u32> = e.iter().zip(be).map(|(a, x)| a - x).collect();
                let qdeg: u32 = qe.iter().sum();
                let qc = p.poly.leading_coeff(order).unwrap()
                    / b.poly.leading_coeff(order).unwrap();
                let qt = CPoly::monomial(&ring, qe, qc);
                p.poly = p.poly.sub(&qt.mul(&b.poly));
                for (pc, bc) in p.cofactors.iter_mut().zip(&b.cofactors) {
                    *pc = pc.sub(&qt.mul(bc));
                }
                p.sugar = p.sugar.max(qdeg + b.sugar);
                continue 'outer;
            }
        }
        // leading term irreducible: move it to the result
        let c = p.poly.terms.remove(&e).unwrap();
        result.insert_term(e, c);
    }
    Tracked {
        poly: result,
        cofactors: p.cofactors,
        sugar: p.sugar,
    }
}

fn spoly(f: &Tracked, g: &Tracked, order: MonomialOrder, ring: &Arc<PolyRing>) -> Tracked {
    let ef = f.poly.leading_expt(order).unwrap();
    let eg = g.poly.leading_expt(order).unwrap();
    let lcm: Vec<u32> = ef.iter().zip(eg).map(|(a, b)| *a.max(b)).collect();
    let mf: Vec<u32> = lcm.iter().zip(ef).map(|(l, a)| l - a).collect();
    let mg: Vec<u32> = lcm.iter().zip(eg).map(|(l, a)| l - a).collect();
    let k = ring.field().base_vars();
    // basis elements are monic, so monomial multiples cancel leading terms
    let tf = CPoly::monomial(ring, mf.clone(), ScalarElement::one(k));
    let tg = CPoly::monomial(ring, mg.clone(), ScalarElement::one(k));
    let poly = tf.mul(&f.poly).sub(&tg.mul(&g.poly));
    let cofactors = f
        .cofactors
        .iter()
        .zip(&g.cofactors)
        .map(|(a, b)| tf.mul(a).sub(&tg.mul(b)))
        .collect();
    let sf: u32 = mf.iter().sum();
    let sg: u32 = mg.iter().sum();
    Tracked {
        poly,
        cofactors,
        sugar: (f.sugar + sf).max(g.sugar + sg),
    }
}

/// Core Buchberger loop. Returns the reduced Groebner basis with cofactors.
fn buchberger(
    gens: &[CPoly],
    ring: &Arc<PolyRing>,
    order: MonomialOrder,
    budget: &Budget,
) -> Result<Vec<Tracked>, PolyError> {
    let n_orig = gens.len();
    let zero_cof = || vec![CPoly::zero(ring); n_orig];
    let mut basis: Vec<Tracked> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let mut cof = zero_cof();
        cof[i] = CPoly::one(ring);
        basis.push(
            Tracked {
                poly: g.clone(),
                cofactors: cof,
                sugar: g.total_degree(),
            }
            .monic(order),
        );
    }

    // pair worklist: (sugar, lcm degree, i, j), selected by minimum
    let mut pairs: Vec<(u32, u32, usize, usize)> = Vec::new();
    let push_pairs = |pairs: &mut Vec<(u32, u32, usize, usize)>, basis: &[Tracked], j: usize| {
        for i in 0..j {
            let ei = basis[i].poly.leading_expt(order).unwrap();
            let ej = basis[j].poly.leading_expt(order).unwrap();
            let lcm: Vec<u32> = ei.iter().zip(ej).map(|(a, b)| *a.max(b)).collect();
            let ldeg: u32 = lcm.iter().sum();
            let si: u32 = lcm.iter().zip(ei).map(|(l, a)| l - a).sum();
            let sj: u32 = lcm.iter().zip(ej).map(|(l, a)| l - a).sum();
            let sugar = (basis[i].sugar + si).max(basis[j].sugar + sj);
            pairs.push((sugar, ldeg, i, j));
        }
    };
    for j in 0..basis.len() {
        push_pairs(&mut pairs, &basis, j);
    }

    let mut processed = 0usize;
    while !pairs.is_empty() {
        processed += 1;
        if processed > budget.max_pairs {
            return Err(PolyError::BudgetExceeded(format!(
                "more than {} critical pairs",
                budget.max_pairs
            )));
        }
        let best = pairs
            .iter()
            .enumerate()
            .min_by_key(|(_, p)| **p)
            .map(|(idx, _)| idx)
            .unwrap();
        let (_, _, i, j) = pairs.swap_remove(best);
        let ei = basis[i].poly.leading_expt(order).unwrap();
        let ej = basis[j].poly.leading_expt(order).unwrap();
        // product criterion: coprime leading monomials reduce to zero
        if ei.iter().zip(ej).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let s = spoly(&basis[i], &basis[j], order, ring);
        let r = reduce_tracked(s, &basis, order);
        if r.poly.is_zero() {
            continue;
        }
        if r.poly.total_degree() > budget.max_degree {
            return Err(PolyError::BudgetExceeded(format!(
                "basis element of degree {} exceeds {}",
                r.poly.total_degree(),
                budget.max_degree
            )));
        }
        basis.push(r.monic(order));
        if basis.len() > budget.max_basis {
            return Err(PolyError::BudgetExceeded(format!(
                "basis larger than {} polynomials",
                budget.max_basis
            )));
        }
        push_pairs(&mut pairs, &basis, basis.len() - 1);
    }

    // minimalize: keep one representative per leading monomial, dropping
    // any element whose lead is divisible by a kept element's lead (the
    // rest is still a basis of the same ideal)
    basis.sort_by(|a, b| {
        order
            .cmp(
                a.poly.leading_expt(order).unwrap(),
                b.poly.leading_expt(order).unwrap(),
            )
            .then_with(|| a.poly.to_string().cmp(&b.poly.to_string()))
    });
    let mut kept: Vec<Tracked> = Vec::new();
    'select: for t in basis {
        let lt = t.poly.leading_expt(order).unwrap().clone();
        for k in &kept {
            let kl = k.poly.leading_expt(order).unwrap();
            if lt.iter().zip(kl).all(|(a, b)| a >= b) {
                continue 'select;
            }
        }
        kept.push(t);
    }
    // tail-reduce to the unique reduced Groebner basis; leads are stable
    loop {
        let mut changed = false;
        for i in 0..kept.len() {
            let others: Vec<Tracked> = kept
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, t)| t.clone())
                .collect();
            let r = reduce_tracked(kept[i].clone(), &others, order).monic(order);
            assert!(!r.poly.is_zero(), "minimal basis element vanished");
            if r.poly != kept[i].poly {
                changed = true;
                kept[i] = r;
            }
        }
        if !changed {
            break;
        }
    }
    kept.sort_by(|a, b| {
        order.cmp(
            a.poly.leading_expt(order).unwrap(),
            b.poly.leading_expt(order).unwrap(),
        )
    });
    Ok(kept)
}

/// Reduced Groebner basis of the ideal for its declared order. Idempotent:
/// running it on its own output returns the same basis.
pub fn groebner(basis: &IdealBasis, budget: &Budget) -> Result<IdealBasis, PolyError> {
    if basis.ring.num_vars() == 0 {
        return Err(PolyError::EmptyRing);
    }
    if basis.groebner_flag {
        return Ok(basis.clone());
    }
    let gb = buchberger(&basis.gens, &basis.ring, basis.order, budget)?;
    Ok(IdealBasis {
        ring: basis.ring.clone(),
        gens: gb.into_iter().map(|t| t.poly).collect(),
        order: basis.order,
        groebner_flag: true,
    })
}

/// Outcome of an ideal membership test.
#[derive(Debug, Clone, PartialEq)]
pub enum MembershipAnswer {
    /// `f = sum cofactors[i] * gen_i` over the basis passed in.
    Member { cofactors: Vec<CPoly> },
    NotMember { normal_form: CPoly },
}

impl MembershipAnswer {
    pub fn is_member(&self) -> bool {
        matches!(self, MembershipAnswer::Member { .. })
    }
}

/// Membership of `f` in the ideal generated by `basis.gens`, with a cofactor
/// certificate in terms of those generators on success.
pub fn ideal_member(
    f: &CPoly,
    basis: &IdealBasis,
    budget: &Budget,
) -> Result<MembershipAnswer, PolyError> {
    assert!(same_ring(f.ring(), &basis.ring));
    let gb = buchberger(&basis.gens, &basis.ring, basis.order, budget)?;
    let n_orig = basis.gens.len();
    let start = Tracked {
        poly: f.clone(),
        cofactors: vec![CPoly::zero(&basis.ring); n_orig],
        sugar: f.total_degree(),
    };
    let r = reduce_tracked(start, &gb, basis.order);
    if r.poly.is_zero() {
        // f - sum cof_i gen_i reduced to zero, so f = -sum(...) with the
        // accumulated signs; reduce_tracked subtracts, hence negate.
        let cofactors = r.cofactors.iter().map(|c| c.neg()).collect();
        Ok(MembershipAnswer::Member { cofactors })
    } else {
        Ok(MembershipAnswer::NotMember { normal_form: r.poly })
    }
}

/// `I : h^infinity` by the extra-variable method: adjoin `1 - z*h`, compute
/// a Groebner basis in an elimination order for `z`, and keep the `z`-free
/// part, re-normalized in the declared order of `I`.
pub fn saturate(basis: &IdealBasis, h: &CPoly, budget: &Budget) -> Result<IdealBasis, PolyError> {
    if h.is_zero() {
        return Err(PolyError::SaturateByZero);
    }
    if h.is_constant() {
        // saturating by a unit changes nothing
        return groebner(basis, budget);
    }
    let n = basis.ring.num_vars();
    let mut zname = "zsat".to_string();
    while basis.ring.var_index(&zname).is_some() {
        zname.push('_');
    }
    let ext = basis.ring.extended(&zname);
    let lift = |p: &CPoly| -> CPoly {
        let mut out = CPoly::zero(&ext);
        for (e, c) in p.terms() {
            let mut e2 = e.clone();
            e2.push(0);
            out.insert_term(e2, c.clone());
        }
        out
    };
    let mut gens: Vec<CPoly> = basis.gens.iter().map(&lift).collect();
    let z = CPoly::var(&ext, n);
    gens.push(CPoly::one(&ext).sub(&z.mul(&lift(h))));
    let gb = buchberger(&gens, &ext, MonomialOrder::Elim { split: n }, budget)?;
    let mut kept: Vec<CPoly> = Vec::new();
    for t in gb {
        if t.poly.terms().all(|(e, _)| e[n] == 0) {
            let mut down = CPoly::zero(&basis.ring);
            for (e, c) in t.poly.terms() {
                down.insert_term(e[..n].to_vec(), c.clone());
            }
            kept.push(down);
        }
    }
    groebner(
        &IdealBasis::new(basis.ring.clone(), kept, basis.order),
        budget,
    )
}
