use num_bigint::BigInt;

use super::element::AlgebraElement;
use crate::arith::{bigint_mod, LargePrimes};
use crate::error::{Error, Result};
use crate::factor::factor_monic_squarefree;
use crate::modp::Fp;
use crate::RatPoly;

/// An irreducible factor of the minimal polynomial over `Q` together with
/// the multiplicity of each of its roots as an eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueClass {
    pub factor: RatPoly,
    pub multiplicity: usize,
}

/// Eigenvalue multiplicities of the dense action.
///
/// The characteristic polynomial is `Π f_i^{m_i}` over the irreducible
/// factors `f_i` of the squarefree part `s`. Modulo a prime where `s` stays
/// squarefree the `f_i` remain pairwise coprime, so the exponents can be read
/// off one characteristic polynomial mod `p`; a second prime confirms them.
pub fn eigenvalue_multiplicities(
    x: &AlgebraElement<'_>,
    squarefree: &RatPoly,
    dense_cap: usize,
) -> Result<Vec<EigenvalueClass>> {
    let matrix = x.dense_action_matrix(dense_cap)?;
    let dim = matrix.len();
    if !squarefree.is_monic() || !squarefree.is_integral() {
        return Err(Error::internal(
            "squarefree part must be monic and integral",
        ));
    }
    let s_int: Vec<BigInt> = squarefree.coeffs().iter().map(|c| c.to_integer()).collect();
    let factors = factor_monic_squarefree(&s_int);

    let mut found: Option<Vec<usize>> = None;
    for p in LargePrimes::new() {
        let f = Fp::new(p);
        let reduced: Vec<Vec<u64>> = factors
            .iter()
            .map(|g| f.trim(g.iter().map(|c| bigint_mod(c, p)).collect()))
            .collect();
        let s_mod = reduced
            .iter()
            .fold(vec![1u64], |acc, g| f.poly_mul(&acc, g));
        if !f.is_squarefree(&s_mod) {
            continue;
        }
        let m: Vec<Vec<u64>> = matrix
            .iter()
            .map(|row| row.iter().map(|&c| c % p).collect())
            .collect();
        let mut chi = f.char_poly(&m);
        let mut exps = Vec::with_capacity(reduced.len());
        for g in &reduced {
            let mut e = 0;
            loop {
                let (q, r) = f.poly_divrem(&chi, g);
                if !r.is_empty() {
                    break;
                }
                chi = q;
                e += 1;
            }
            exps.push(e);
        }
        if chi != [1] {
            return Err(Error::internal(
                "characteristic polynomial has a factor outside the minimal polynomial",
            ));
        }
        match &found {
            None => found = Some(exps),
            Some(prev) if *prev == exps => break,
            Some(_) => {
                return Err(Error::internal(
                    "eigenvalue multiplicities disagree between primes",
                ))
            }
        }
    }
    let exps = found.expect("some prime is good");
    let total: usize = factors
        .iter()
        .zip(&exps)
        .map(|(g, e)| (g.len() - 1) * e)
        .sum();
    if total != dim {
        return Err(Error::internal(format!(
            "multiplicities account for {total} of {dim} dimensions"
        )));
    }
    Ok(factors
        .iter()
        .zip(exps)
        .map(|(g, multiplicity)| EigenvalueClass {
            factor: RatPoly::from_integers(g),
            multiplicity,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dessin::parse_dessin;
    use crate::perm::{GroupTable, DEFAULT_GROUP_CAP};
    use crate::spectrum::element::conjugation_sum;
    use crate::spectrum::minpoly::{min_poly_of_x, Strategy, StrategyCaps};
    use num_traits::Zero;

    fn group_of(s: &str) -> GroupTable {
        parse_dessin(s)
            .unwrap()
            .monodromy_group(DEFAULT_GROUP_CAP)
            .unwrap()
    }

    fn classes(s: &str) -> (usize, Vec<EigenvalueClass>) {
        let g = group_of(s);
        let x = conjugation_sum(&g).unwrap();
        let (m, _) = min_poly_of_x(&x, Strategy::Dense, StrategyCaps::default()).unwrap();
        (
            g.order(),
            eigenvalue_multiplicities(&x, &m.squarefree_part_over_z(), 24).unwrap(),
        )
    }

    #[test]
    fn closed_forms() {
        let (_, c) = classes("n=1 a=() b=()");
        assert_eq!(
            c,
            vec![EigenvalueClass {
                factor: RatPoly::from_i64(&[-1, 1]),
                multiplicity: 1
            }]
        );
        // x = 2(g, g): char poly (t - 2)²(t + 2)²
        let (_, c) = classes("n=2 a=(1 2) b=(1 2)");
        assert_eq!(
            c,
            vec![
                EigenvalueClass {
                    factor: RatPoly::from_i64(&[-2, 1]),
                    multiplicity: 2
                },
                EigenvalueClass {
                    factor: RatPoly::from_i64(&[2, 1]),
                    multiplicity: 2
                },
            ]
        );
        // x = 3(g, g) on Z3×Z3: each cube root times 3 appears three times
        let (_, c) = classes("n=3 a=(1 2 3) b=(1 2 3)");
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|e| e.multiplicity == 3));
    }

    #[test]
    fn multiplicities_fill_the_space() {
        for s in [
            "n=3 a=(1 2 3) b=(1 2)",
            "n=4 a=(1 2 3 4) b=(1 3)",
            "n=4 a=(1 2)(3 4) b=(1 3)(2 4)",
        ] {
            let (order, c) = classes(s);
            let total: usize = c
                .iter()
                .map(|e| e.factor.degree().unwrap() * e.multiplicity)
                .sum();
            assert_eq!(total, order * order, "{s}");
            // the trivial ⊗ trivial eigenvalue |G| is present
            let g = crate::Rational::from_integer((order as i64).into());
            assert!(c.iter().any(|e| e.factor.eval(&g).is_zero()));
        }
    }
}
