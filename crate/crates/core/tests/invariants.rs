//! Cross-checks that pit the bounded deciders against brute force, plus the
//! pointwise geometry invariants over the worked corpus.

mod common;

use std::sync::Arc;

use kolchin_core::diffpoly::{DiffPoly, DiffRing};
use kolchin_core::dsmod::{gauge_transform, sharp_verify, DSigmaModule};
use kolchin_core::geometry::vstar_member;
use kolchin_core::linalg::Matrix;
use kolchin_core::polyalg::{
    self, Budget, CPoly, IdealBasis, MonomialOrder, NotPrimeWitness, PolyRing, Primality,
};
use kolchin_core::rittkolchin::{saturation_member, AutoreducedSet, SatAnswer};
use kolchin_core::scalars::{ScalarElement, ScalarField};

/// Candidate zero divisors: monic-normalized polynomials with up to three
/// terms over the degree-<= 2 monomials, relative coefficients small.
fn zero_divisor_candidates(ring: &Arc<PolyRing>) -> Vec<CPoly> {
    let monos: Vec<CPoly> = {
        let x = CPoly::var(ring, 0);
        let y = CPoly::var(ring, 1);
        vec![
            CPoly::one(ring),
            x.clone(),
            y.clone(),
            x.pow(2),
            x.mul(&y),
            y.pow(2),
        ]
    };
    let coeffs: Vec<ScalarElement> = [1i64, -1, 2, -2]
        .iter()
        .map(|&c| ScalarElement::from_int(0, c))
        .collect();
    let mut out = Vec::new();
    // single monomials
    out.extend(monos.iter().skip(1).cloned());
    // two-term combinations with a relative coefficient
    for i in 0..monos.len() {
        for j in (i + 1)..monos.len() {
            for c in &coeffs {
                out.push(monos[j].add(&monos[i].scale(c)));
            }
        }
    }
    // a sweep of three-term combinations with unit coefficients
    for i in 0..monos.len() {
        for j in (i + 1)..monos.len() {
            for k in (j + 1)..monos.len() {
                for (ci, cj) in [(1i64, 1i64), (-1, 1), (1, -1), (-1, -1)] {
                    out.push(
                        monos[k]
                            .add(&monos[j].scale(&ScalarElement::from_int(0, cj)))
                            .add(&monos[i].scale(&ScalarElement::from_int(0, ci))),
                    );
                }
            }
        }
    }
    out
}

/// `is_prime_bounded` never contradicts the brute-force zero-divisor search
/// on small ideals over `Q`; `not_prime` witnesses check out by membership.
#[test]
fn primality_vs_brute_force() {
    let budget = Budget::default();
    let ring = PolyRing::with_xvars(ScalarField::rationals(0), 2);
    let x = CPoly::var(&ring, 0);
    let y = CPoly::var(&ring, 1);
    let ideals: Vec<Vec<CPoly>> = vec![
        vec![x.clone()],
        vec![y.sub(&x.pow(2))],
        vec![x.mul(&y)],
        vec![x.pow(2)],
        vec![x.pow(2).sub(&CPoly::one(&ring))],
        vec![x.clone(), y.clone()],
        vec![x.pow(2).sub(&y.pow(2))],
        vec![y.sub(&x.pow(3))],
    ];
    let candidates = zero_divisor_candidates(&ring);
    for gens in ideals {
        let basis = IdealBasis::new(ring.clone(), gens.clone(), MonomialOrder::GrevLex);
        let gb = polyalg::groebner(&basis, &budget).unwrap();
        let answer = polyalg::is_prime_bounded(&basis, &budget).unwrap();
        // non-members among the candidates
        let outside: Vec<&CPoly> = candidates
            .iter()
            .filter(|f| {
                !polyalg::ideal_member(f, &gb, &budget)
                    .unwrap()
                    .is_member()
            })
            .collect();
        match &answer {
            Primality::Prime(_) => {
                for (ai, f) in outside.iter().enumerate() {
                    for g in outside.iter().skip(ai) {
                        let prod = f.mul(g);
                        assert!(
                            !polyalg::ideal_member(&prod, &gb, &budget)
                                .unwrap()
                                .is_member(),
                            "claimed prime, but {f} * {g} lies in ({:?})",
                            gens.iter().map(|p| p.to_string()).collect::<Vec<_>>()
                        );
                    }
                }
            }
            Primality::NotPrime(NotPrimeWitness::ZeroDivisors { f, g, .. }) => {
                assert!(polyalg::ideal_member(&f.mul(g), &gb, &budget).unwrap().is_member());
                assert!(!polyalg::ideal_member(f, &gb, &budget).unwrap().is_member());
                assert!(!polyalg::ideal_member(g, &gb, &budget).unwrap().is_member());
            }
            Primality::NotPrime(NotPrimeWitness::UnitIdeal) => {
                assert!(gb.contains_unit());
            }
            Primality::Unknown(_) => {}
        }
    }
}

/// Groebner bases are idempotent and stable across generator ordering.
#[test]
fn groebner_idempotent_and_order_stable() {
    let budget = Budget::default();
    let ring = PolyRing::with_xvars(ScalarField::rationals(0), 2);
    let x = CPoly::var(&ring, 0);
    let y = CPoly::var(&ring, 1);
    let gens = vec![
        x.pow(2).add(&y.pow(2)).sub(&CPoly::one(&ring)),
        x.mul(&y).sub(&CPoly::one(&ring)),
        y.pow(3).sub(&x),
    ];
    for order in [MonomialOrder::GrevLex, MonomialOrder::Lex, MonomialOrder::GrLex] {
        let forward = polyalg::groebner(
            &IdealBasis::new(ring.clone(), gens.clone(), order),
            &budget,
        )
        .unwrap();
        let mut rev = gens.clone();
        rev.reverse();
        let backward =
            polyalg::groebner(&IdealBasis::new(ring.clone(), rev, order), &budget).unwrap();
        assert_eq!(forward.gens, backward.gens, "{order:?} must be order-stable");
        let again = polyalg::groebner(
            &IdealBasis::new(ring.clone(), forward.gens.clone(), order),
            &budget,
        )
        .unwrap();
        assert_eq!(forward.gens, again.gens, "{order:?} must be idempotent");
    }
}

/// Pointwise form of the basic proposition: certified sets with a known
/// `V*` point have every saturation-ideal member vanish at that point.
#[test]
fn vstar_points_kill_saturation_members() {
    let budget = Budget::default();
    let field = ScalarField::q_t_shift();
    let t = field.t(1);
    let r1 = DiffRing::new(field.clone(), 1);
    let x = DiffPoly::var(&r1, 0);
    let dx = x.apply_delta(1).unwrap();
    let d2x = dx.apply_delta(1).unwrap();
    // (Lambda, point, test polynomials)
    let cases: Vec<(AutoreducedSet, Vec<ScalarElement>, Vec<DiffPoly>)> = vec![
        (
            AutoreducedSet::new(vec![dx.sub(&DiffPoly::one(&r1))]).unwrap(),
            vec![t.clone()],
            vec![
                d2x.clone(),
                dx.pow(2).sub(&DiffPoly::one(&r1)),
                d2x.mul(&x).add(&dx).sub(&DiffPoly::one(&r1)),
                x.clone(),
            ],
        ),
        (
            AutoreducedSet::new(vec![dx.pow(2).sub(&DiffPoly::from_int(&r1, 4).mul(&x))]).unwrap(),
            vec![&t * &t],
            vec![
                d2x.sub(&DiffPoly::from_int(&r1, 2)),
                d2x.clone(),
                x.pow(2),
                dx.mul(&x),
            ],
        ),
    ];
    for (set, point, tests) in cases {
        assert!(vstar_member(&point, &set).unwrap());
        for g in tests {
            let sm = saturation_member(&g, &set, &budget).unwrap();
            if sm.answer == SatAnswer::Yes {
                assert!(
                    g.evaluate(&point).unwrap().is_zero(),
                    "saturation member {g} must vanish on V*"
                );
            }
        }
    }
}

/// D-variety passes are stable under adjoining redundant generators.
#[test]
fn dvariety_check_stable_under_redundant_generators() {
    use kolchin_core::geometry::dvariety_check;
    let budget = Budget::default();
    let field = ScalarField::q_t_shift();
    let ring = PolyRing::with_xvars(field, 2);
    let x = CPoly::var(&ring, 0);
    let y = CPoly::var(&ring, 1);
    let f = y.sub(&x.pow(2));
    let sections = vec![vec![CPoly::one(&ring), x.scale(&ScalarElement::from_int(1, 2))]];
    let base = dvariety_check(&ring, std::slice::from_ref(&f), &sections, &budget).unwrap();
    assert!(base.passed());
    // adjoin x*f and f + y*f: same ideal, so the conditions still hold
    let padded = vec![f.clone(), x.mul(&f), f.add(&y.mul(&f))];
    let rep = dvariety_check(&ring, &padded, &sections, &budget).unwrap();
    assert!(rep.passed(), "{rep:?}");
}

/// Dualizing preserves the pairwise delta identity for families that
/// satisfy it (built as gauges of the zero connection).
#[test]
fn dual_preserves_delta_commutation() {
    use kolchin_core::dsmod::dual_matrices;
    use num_rational::BigRational;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    let field = ScalarField::new(
        2,
        2,
        vec![BigRational::from_integer(1.into()), BigRational::from_integer(1.into())],
    )
    .unwrap();
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..12 {
        let d = 1 + rng.gen_range(0..3);
        // random invertible P with entries of degree <= 1
        let p = loop {
            let rows: Vec<Vec<ScalarElement>> = (0..d)
                .map(|_| {
                    (0..d)
                        .map(|_| {
                            let c = field.from_int(rng.gen_range(-1i64..=1));
                            let a = field.from_int(rng.gen_range(-1i64..=1));
                            let b = field.from_int(rng.gen_range(-1i64..=1));
                            &c + &(&(&a * &field.t(1)) + &(&b * &field.t(2)))
                        })
                        .collect()
                })
                .collect();
            let m = Matrix::from_rows(2, rows);
            if !m.det().is_zero() {
                break m;
            }
        };
        let trivial = DSigmaModule::new(
            field.clone(),
            vec![Matrix::zeros(2, d, d); 2],
            Matrix::identity(2, d),
        )
        .unwrap();
        let gauged = gauge_transform(&trivial, &p).unwrap();
        assert!(gauged.check_commutation().passed());
        let duals = dual_matrices(gauged.a_matrices());
        // delta_j A*_i - delta_i A*_j = [A*_i, A*_j]
        let derive = |m: &Matrix, i: usize| m.map(|e| field.derive(e, i).unwrap());
        let lhs = &derive(&duals[0], 2) - &derive(&duals[1], 1);
        let rhs = &(&duals[0] * &duals[1]) - &(&duals[1] * &duals[0]);
        assert_eq!(lhs, rhs, "dual family must satisfy the delta identity");
    }
}

/// First-jet dimension equals the Jacobian corank at smooth points of
/// degree-<= 3 hypersurfaces.
#[test]
fn first_jet_matches_jacobian_corank() {
    use kolchin_core::jets::jet_space;
    let ring = PolyRing::with_xvars(ScalarField::rationals(0), 2);
    let x = CPoly::var(&ring, 0);
    let y = CPoly::var(&ring, 1);
    let one = CPoly::one(&ring);
    let at = |a: i64, b: i64| vec![ScalarElement::from_int(0, a), ScalarElement::from_int(0, b)];
    let cases: Vec<(CPoly, Vec<ScalarElement>)> = vec![
        (y.sub(&x.pow(2)), at(1, 1)),
        (y.sub(&x.pow(3)), at(2, 8)),
        (x.pow(2).add(&y.pow(2)).sub(&CPoly::from_int(&ring, 2)), at(1, 1)),
        (x.mul(&y).sub(&one), at(1, 1)),
        (y.pow(2).sub(&x.pow(3)).sub(&x), at(0, 0)),
        // singular point of the node y^2 = x^2 (x + 1): full corank
        (y.pow(2).sub(&x.pow(2).mul(&x.add(&one))), at(0, 0)),
    ];
    for (f, a) in cases {
        let j = jet_space(std::slice::from_ref(&f), &ring, &a, 1).unwrap();
        let grads: Vec<ScalarElement> = (0..2).map(|i| f.partial(i).eval(&a)).collect();
        let rank = if grads.iter().all(|g| g.is_zero()) { 0 } else { 1 };
        assert_eq!(j.dim(), 2 - rank, "at {f}");
    }
}

/// Charset-tagged presentations refuse refuted sets.
#[test]
fn charset_presentation_refuses_refuted_sets() {
    use kolchin_core::diffpoly::{DiffPoly, DiffRing};
    use kolchin_core::geometry::DeltaClosedPresentation;
    let budget = Budget::default();
    let ring = DiffRing::new(ScalarField::q_t_shift(), 1);
    let dx = DiffPoly::var(&ring, 0).apply_delta(1).unwrap();
    let good = AutoreducedSet::new(vec![dx.clone()]).unwrap();
    assert!(DeltaClosedPresentation::charset(good, &budget).is_ok());
    let bad = AutoreducedSet::new(vec![dx.pow(2)]).unwrap();
    assert!(DeltaClosedPresentation::charset(bad, &budget).is_err());
}

/// Sharp fundamental matrices transport along gauges: `N` sharp for `M`
/// gives `P^{-1} N` sharp for the gauged module.
#[test]
fn sharp_matrices_transport_along_gauges() {
    let field = ScalarField::q_t_shift();
    let t = field.t(1);
    let one = field.one();
    let a = Matrix::from_rows(1, vec![vec![field.from_int(-1).checked_div(&t).unwrap()]]);
    let b = Matrix::from_rows(1, vec![vec![t.checked_div(&(&t + &one)).unwrap()]]);
    let m = DSigmaModule::new(field.clone(), vec![a], b).unwrap();
    let n = Matrix::from_rows(1, vec![vec![t.clone()]]);
    assert!(sharp_verify(&m, &n));
    for p_entry in [t.clone(), &t + &one, &(&t * &t) + &one] {
        let p = Matrix::from_rows(1, vec![vec![p_entry]]);
        let gauged = gauge_transform(&m, &p).unwrap();
        let n_mapped = &p.inverse().unwrap() * &n;
        assert!(sharp_verify(&gauged, &n_mapped));
    }
}
