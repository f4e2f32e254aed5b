//! Algebraic jet spaces of affine varieties at rational points.
//!
//! `j_r V_a` is presented as the exact kernel of the linear system whose
//! rows are Taylor data at `a` of the generators multiplied by monomials in
//! `(x - a)` of degree below `r`: since every generator vanishes at `a`,
//! these multiples span all equations the generated ideal induces at order
//! `r`. Coordinates `u_D` are dual to the monomials `(x - a)^alpha`,
//! matching the worked equations downstream.

use std::sync::Arc;

use thiserror::Error;

use crate::linalg::Matrix;
use crate::polyalg::{self, Budget, CPoly, IdealBasis, MonomialOrder, PolyError, PolyRing};
use crate::scalars::ScalarElement;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("jet order must be at least 1")]
    OrderZero,
    #[error("point has {got} coordinates, ring has {expected} variables")]
    BadPoint { expected: usize, got: usize },
    #[error("point is not on the variety: generator {generator} evaluates to {value}")]
    NotOnVariety { generator: String, value: String },
    #[error("inclusion precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Multi-indices `alpha` with `1 <= |alpha| <= r`, enumerated by degree and
/// then lexicographically with the first variable dominant, e.g. for two
/// variables and `r = 2`: x, y, x^2, xy, y^2.
pub fn jet_operators(n: usize, r: u32) -> Vec<Vec<u32>> {
    fn fill(out: &mut Vec<Vec<u32>>, prefix: &mut Vec<u32>, rest: u32, pos: usize, n: usize) {
        if pos == n - 1 {
            prefix.push(rest);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=rest).rev() {
            prefix.push(e);
            fill(out, prefix, rest - e, pos + 1, n);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for d in 1..=r {
        fill(&mut out, &mut Vec::new(), d, 0, n);
    }
    out
}

/// An exact presentation of `j_r V_a`: the operator list fixing the ambient
/// coordinates and a kernel basis (each vector scaled so its first nonzero
/// coordinate is 1).
#[derive(Debug, Clone, PartialEq)]
pub struct JetSubspace {
    pub point: Vec<ScalarElement>,
    pub order: u32,
    pub operators: Vec<Vec<u32>>,
    pub basis: Vec<Vec<ScalarElement>>,
}

impl JetSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.operators.len()
    }
}

/// The equation matrix of `j_r V_a`: one row per (generator, monomial
/// multiplier) pair, one column per jet operator; entries are Taylor
/// coefficients at `a`.
pub fn jet_equations(
    gens: &[CPoly],
    ring: &Arc<PolyRing>,
    a: &[ScalarElement],
    r: u32,
) -> Result<Matrix, JetError> {
    if r == 0 {
        return Err(JetError::OrderZero);
    }
    let n = ring.num_vars();
    if a.len() != n {
        return Err(JetError::BadPoint {
            expected: n,
            got: a.len(),
        });
    }
    let k = ring.field().base_vars();
    for f in gens {
        let v = f.eval(a);
        if !v.is_zero() {
            return Err(JetError::NotOnVariety {
                generator: f.to_string(),
                value: v.to_string(),
            });
        }
    }
    let ops = jet_operators(n, r);
    let multipliers: Vec<Vec<u32>> = std::iter::once(vec![0; n])
        .chain(jet_operators(n, r.saturating_sub(1)))
        .collect();
    let mut rows: Vec<Vec<ScalarElement>> = Vec::new();
    for f in gens {
        let shifted = f.translate(a); // f(z + a) as a polynomial in z
        for beta in &multipliers {
            let p = shifted.mul(&CPoly::monomial(ring, beta.clone(), ScalarElement::one(k)));
            let row: Vec<ScalarElement> = ops
                .iter()
                .map(|alpha| {
                    p.terms()
                        .find(|(e, _)| *e == alpha)
                        .map(|(_, c)| c.clone())
                        .unwrap_or_else(|| ScalarElement::zero(k))
                })
                .collect();
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Ok(Matrix::zeros(k, 0, ops.len()));
    }
    Ok(Matrix::from_rows(k, rows))
}

/// The jet space itself: exact kernel basis of [`jet_equations`].
pub fn jet_space(
    gens: &[CPoly],
    ring: &Arc<PolyRing>,
    a: &[ScalarElement],
    r: u32,
) -> Result<JetSubspace, JetError> {
    let eqs = jet_equations(gens, ring, a, r)?;
    let ops = jet_operators(ring.num_vars(), r);
    let basis = if eqs.rows() == 0 {
        // no constraints: the full ambient space
        (0..ops.len())
            .map(|i| {
                let mut v = vec![ScalarElement::zero(ring.field().base_vars()); ops.len()];
                v[i] = ScalarElement::one(ring.field().base_vars());
                v
            })
            .collect()
    } else {
        eqs.kernel_basis()
            .into_iter()
            .map(|v| normalize_leading(v))
            .collect()
    };
    Ok(JetSubspace {
        point: a.to_vec(),
        order: r,
        operators: ops,
        basis,
    })
}

fn normalize_leading(v: Vec<ScalarElement>) -> Vec<ScalarElement> {
    let lead = v.iter().find(|e| !e.is_zero()).cloned();
    match lead {
        Some(l) => {
            let inv = l.recip().expect("nonzero leading entry");
            v.iter().map(|e| e * &inv).collect()
        }
        None => v,
    }
}

/// True when `span(small) <= span(big)`, both in the same ambient space.
pub fn subspace_contained(small: &JetSubspace, big: &JetSubspace) -> bool {
    assert_eq!(small.operators, big.operators);
    if small.basis.is_empty() {
        return true;
    }
    let k = small.point.first().map(|e| e.base_vars()).unwrap_or(0);
    let d = big.operators.len();
    // columns are big's basis vectors
    let mut cols = Matrix::zeros(k, d, big.basis.len());
    for (j, v) in big.basis.iter().enumerate() {
        for (i, e) in v.iter().enumerate() {
            cols[(i, j)] = e.clone();
        }
    }
    small.basis.iter().all(|v| cols.solve(v).is_some())
}

/// Jet inclusion `j_r X_a <= j_r Y_a` for `X <= Y` as presented (every
/// `Y`-generator must lie in the ideal generated by the `X`-generators).
pub fn jet_include(
    x_gens: &[CPoly],
    y_gens: &[CPoly],
    ring: &Arc<PolyRing>,
    a: &[ScalarElement],
    r: u32,
    budget: &Budget,
) -> Result<bool, JetError> {
    let x_ideal = IdealBasis::new(ring.clone(), x_gens.to_vec(), MonomialOrder::GrevLex);
    for g in y_gens {
        if !polyalg::ideal_member(g, &x_ideal, budget)?.is_member() {
            return Err(JetError::Precondition(format!(
                "{g} is not in the ideal of the X generators, so X is not presented inside Y"
            )));
        }
    }
    let jx = jet_space(x_gens, ring, a, r)?;
    let jy = jet_space(y_gens, ring, a, r)?;
    Ok(subspace_contained(&jx, &jy))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetSeparation {
    EqualUpTo(u32),
    SeparatedAt(u32),
}

/// The jet-separation test: the smallest `r <= r_max` at which the two jet
/// spaces differ as subspaces, or `EqualUpTo(r_max)`.
pub fn jet_separate(
    x_gens: &[CPoly],
    y_gens: &[CPoly],
    ring: &Arc<PolyRing>,
    a: &[ScalarElement],
    r_max: u32,
) -> Result<JetSeparation, JetError> {
    for r in 1..=r_max {
        let jx = jet_space(x_gens, ring, a, r)?;
        let jy = jet_space(y_gens, ring, a, r)?;
        let equal = jx.dim() == jy.dim()
            && subspace_contained(&jx, &jy)
            && subspace_contained(&jy, &jx);
        if !equal {
            return Ok(JetSeparation::SeparatedAt(r));
        }
    }
    Ok(JetSeparation::EqualUpTo(r_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::ScalarField;

    fn qring(n: usize) -> Arc<PolyRing> {
        PolyRing::with_xvars(ScalarField::rationals(0), n)
    }

    fn one_one() -> Vec<ScalarElement> {
        vec![ScalarElement::from_int(0, 1), ScalarElement::from_int(0, 1)]
    }

    #[test]
    fn operator_enumeration() {
        assert_eq!(
            jet_operators(2, 2),
            vec![
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
    }

    #[test]
    fn parabola_first_jet() {
        let ring = qring(2);
        let x = CPoly::var(&ring, 0);
        let y = CPoly::var(&ring, 1);
        let gens = vec![y.sub(&x.pow(2))];
        let j = jet_space(&gens, &ring, &one_one(), 1).unwrap();
        assert_eq!(j.dim(), 1);
        assert_eq!(
            j.basis[0],
            vec![ScalarElement::from_int(0, 1), ScalarElement::from_int(0, 2)]
        );
    }

    #[test]
    fn parabola_second_jet() {
        let ring = qring(2);
        let x = CPoly::var(&ring, 0);
        let y = CPoly::var(&ring, 1);
        let gens = vec![y.sub(&x.pow(2))];
        let j = jet_space(&gens, &ring, &one_one(), 2).unwrap();
        assert_eq!(j.dim(), 2);
        // every basis vector satisfies every generating equation
        let eqs = jet_equations(&gens, &ring, &one_one(), 2).unwrap();
        for v in &j.basis {
            assert!(eqs.mul_vec(v).iter().all(|e| e.is_zero()));
        }
    }

    #[test]
    fn full_ambient_space_without_equations() {
        let ring = qring(2);
        let j = jet_space(&[], &ring, &one_one(), 1).unwrap();
        assert_eq!(j.dim(), 2);
    }

    #[test]
    fn point_not_on_variety_errors() {
        let ring = qring(2);
        let x = CPoly::var(&ring, 0);
        let y = CPoly::var(&ring, 1);
        let gens = vec![y.sub(&x.pow(2))];
        let bad = vec![ScalarElement::from_int(0, 1), ScalarElement::from_int(0, 3)];
        assert!(matches!(
            jet_space(&gens, &ring, &bad, 1),
            Err(JetError::NotOnVariety { .. })
        ));
    }

    #[test]
    fn inclusion_point_inside_parabola() {
        let budget = Budget::default();
        let ring = qring(2);
        let x = CPoly::var(&ring, 0);
        let y = CPoly::var(&ring, 1);
        let point = vec![x.sub(&CPoly::one(&ring)), y.sub(&CPoly::one(&ring))];
        let parabola = vec![y.sub(&x.pow(2))];
        // X = Y reflexive
        assert!(jet_include(&parabola, &parabola, &ring, &one_one(), 1, &budget).unwrap());
        // the point has zero-dimensional jets inside the parabola's
        assert!(jet_include(&point, &parabola, &ring, &one_one(), 1, &budget).unwrap());
        // swapped roles violate the precondition
        assert!(matches!(
            jet_include(&parabola, &point, &ring, &one_one(), 1, &budget),
            Err(JetError::Precondition(_))
        ));
    }

    #[test]
    fn separation_of_parabola_and_tangent() {
        let ring = qring(2);
        let x = CPoly::var(&ring, 0);
        let y = CPoly::var(&ring, 1);
        let parabola = vec![y.sub(&x.pow(2))];
        // tangent line at (1,1): y - 2x + 1
        let tangent = vec![y
            .sub(&x.scale(&ScalarElement::from_int(0, 2)))
            .add(&CPoly::one(&ring))];
        assert_eq!(
            jet_separate(&parabola, &tangent, &ring, &one_one(), 2).unwrap(),
            JetSeparation::SeparatedAt(2)
        );
        assert_eq!(
            jet_separate(&parabola, &parabola, &ring, &one_one(), 2).unwrap(),
            JetSeparation::EqualUpTo(2)
        );
        // two distinct lines separate at order 1
        let line2 = vec![y
            .sub(&x.scale(&ScalarElement::from_int(0, 3)))
            .add(&CPoly::from_int(&ring, 2))];
        assert_eq!(
            jet_separate(&tangent, &line2, &ring, &one_one(), 1).unwrap(),
            JetSeparation::SeparatedAt(1)
        );
    }

    #[test]
    fn first_jet_dim_matches_jacobian_corank() {
        // smooth hypersurface points: dim j_1 = n - rank(Jacobian)
        let ring = qring(3);
        let x = CPoly::var(&ring, 0);
        let y = CPoly::var(&ring, 1);
        let z = CPoly::var(&ring, 2);
        // x^2 + y^2 - z^2 - 1 at (1, 1, 1)
        let f = x.pow(2).add(&y.pow(2)).sub(&z.pow(2)).sub(&CPoly::one(&ring));
        let a = vec![
            ScalarElement::from_int(0, 1),
            ScalarElement::from_int(0, 1),
            ScalarElement::from_int(0, 1),
        ];
        let j = jet_space(std::slice::from_ref(&f), &ring, &a, 1).unwrap();
        let jac_rank = {
            let grads: Vec<ScalarElement> = (0..3).map(|i| f.partial(i).eval(&a)).collect();
            if grads.iter().all(|g| g.is_zero()) {
                0
            } else {
                1
            }
        };
        assert_eq!(j.dim(), 3 - jac_rank);
    }

    #[test]
    fn jet_monotonicity_on_corpus() {
        let ring = qring(2);
        let x = CPoly::var(&ring, 0);
        let y = CPoly::var(&ring, 1);
        let corpus = [
            vec![y.sub(&x.pow(2))],
            vec![y.sub(&x.pow(3))],
            vec![y.pow(2).sub(&x.pow(2))],
        ];
        for gens in &corpus {
            let mut prev = 0;
            for r in 1..=3 {
                let j = jet_space(gens, &ring, &one_one(), r);
                let j = match j {
                    Ok(j) => j,
                    Err(JetError::NotOnVariety { .. }) => continue,
                    Err(e) => panic!("{e}"),
                };
                assert!(j.dim() >= prev, "dim j_{r} dropped");
                prev = j.dim();
            }
        }
    }
}
