use std::fmt;

use super::element::Verdict;
use crate::arith::{next_prime_in_class, units};
use crate::chartab::CharacterTable;
use crate::error::{Error, Result};
use crate::factor::factor_monic_squarefree;
use crate::modp::Fp;
use crate::perm::GroupTable;
use crate::subfield::{stabilizer_subgroup, Subfield};
use crate::{CycloNum, RatPoly, Rational};

/// `p` is good for `s` when `s` reduces mod `p` without losing degree or
/// dividing by `p`, and stays squarefree (so `p` misses the discriminant).
fn good_reduction(s: &RatPoly, p: u64) -> Option<Vec<u64>> {
    let f = Fp::new(p);
    let r = f.trim(s.reduce_mod(p)?);
    (r.len() == s.coeffs().len() && f.is_squarefree(&r)).then_some(r)
}

/// Primes consulted per residue class; the identity class gets more since
/// it carries the containment test.
const PRIMES_PER_RESIDUE: usize = 2;
const PRIMES_FOR_IDENTITY: usize = 4;

/// Splitting behaviour of `s` at the first `count` good primes
/// `p ≡ j (mod n)`.
fn frobenius_splits(s: &RatPoly, n: u64, j: u64, count: usize) -> Vec<(u64, bool)> {
    let mut out = Vec::with_capacity(count);
    let mut p = next_prime_in_class(3, j, n);
    while out.len() < count {
        if let Some(r) = good_reduction(s, p) {
            out.push((p, Fp::new(p).splits_completely(&r)));
        }
        p = next_prime_in_class(p + 1, j, n);
    }
    out
}

/// The field generated by the roots of a squarefree `s`, located inside
/// `Q(ζ_n)` by Frobenius: for a good prime `p`, `s` splits completely mod `p`
/// exactly when `σ_p` fixes every root.
///
/// If the roots all lie in `Q(ζ_n)`, the splitting behaviour depends only on
/// `p mod n` and `s` splits at every `p ≡ 1`. Several primes per class are
/// consulted; a disagreement or a non-split at `p ≡ 1` proves a root lies
/// outside `Q(ζ_n)` and is reported as [`Error::EigenvaluesOutsideCyclotomic`].
pub fn field_l(s: &RatPoly, n: u64) -> Result<Subfield> {
    if s.is_zero() || !s.is_squarefree_over_z() {
        return Err(Error::input(
            "field_l expects a nonzero squarefree polynomial",
        ));
    }
    let outside = |detail: String| Error::EigenvaluesOutsideCyclotomic {
        conductor: n,
        detail,
    };
    let mut h = Vec::new();
    for j in units(n) {
        let count = if j == 1 {
            PRIMES_FOR_IDENTITY
        } else {
            PRIMES_PER_RESIDUE
        };
        let tests = frobenius_splits(s, n, j, count);
        if j == 1 {
            if let Some(&(p, _)) = tests.iter().find(|t| !t.1) {
                let culprits = factors_where(s, |g| {
                    good_reduction(g, p).is_some_and(|r| !Fp::new(p).splits_completely(&r))
                });
                return Err(outside(format!(
                    "{culprits} does not split modulo {p} ≡ 1 (mod {n})"
                )));
            }
        }
        if tests.iter().any(|t| t.1 != tests[0].1) {
            let primes: Vec<u64> = tests.iter().map(|t| t.0).collect();
            let culprits = factors_where(s, |g| {
                let split: Vec<bool> = primes
                    .iter()
                    .filter_map(|&p| good_reduction(g, p).map(|r| Fp::new(p).splits_completely(&r)))
                    .collect();
                split.iter().any(|&x| x != split[0])
            });
            let ps: Vec<String> = tests.iter().map(|(p, sp)| format!("{p}:{sp}")).collect();
            return Err(outside(format!(
                "splitting of {culprits} is not determined by p mod {n} (residue {j}: {})",
                ps.join(", ")
            )));
        }
        if tests[0].1 {
            h.push(j);
        }
    }
    Subfield::new(n, h).map_err(|e| {
        Error::internal(format!(
            "splitting residues of {s} modulo {n} do not form a subgroup: {e}"
        ))
    })
}

/// The irreducible factors of `s` satisfying `pred`, joined for a diagnostic;
/// `s` itself when it cannot be factored over `Z` directly.
fn factors_where(s: &RatPoly, pred: impl Fn(&RatPoly) -> bool) -> String {
    if !s.is_monic() || !s.is_integral() {
        return s.to_string();
    }
    let found: Vec<String> = factor_monic_squarefree(&s.primitive_integer())
        .iter()
        .map(|g| RatPoly::from_integers(g))
        .filter(|g| pred(g))
        .map(|g| g.to_string())
        .collect();
    if found.is_empty() {
        s.to_string()
    } else {
        found.join("; ")
    }
}

/// `k` via power maps: `σ_j` fixes every `χ(a)`, `χ(b)` iff `a^j ~ a` and
/// `b^j ~ b`.
pub fn field_k_power_maps(group: &GroupTable, a: usize, b: usize) -> Result<Subfield> {
    let n = group.exponent();
    let h: Vec<u64> = units(n)
        .into_iter()
        .filter(|&j| {
            [a, b]
                .iter()
                .all(|&g| group.class_of(group.pow(g, j)) == group.class_of(g))
        })
        .collect();
    Subfield::new(n, h)
}

/// `k` from the table: the stabilizer of all values `χ(a)`, `χ(b)`.
pub fn field_k_table(table: &CharacterTable, a: usize, b: usize) -> Result<Subfield> {
    let mut values = table.column_at_index(a);
    values.extend(table.column_at_index(b));
    stabilizer_subgroup(table.exponent(), &values)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    A,
    B,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "a",
            Side::B => "b",
        })
    }
}

/// A value `|G|·χ(g)/χ(1)` with every `(row, g)` producing it.
#[derive(Clone, Debug, PartialEq)]
pub struct PredictedEigenvalue {
    pub value: CycloNum,
    pub sources: Vec<(usize, Side)>,
}

/// `{|G|·χ_i(a)/χ_i(1)} ∪ {|G|·χ_i(b)/χ_i(1)}`, deduplicated in order of
/// first appearance (row by row, `a` before `b`).
pub fn predicted_eigenvalues(
    table: &CharacterTable,
    group_order: usize,
    a: usize,
    b: usize,
) -> Vec<PredictedEigenvalue> {
    let cols = [
        (Side::A, table.column_at_index(a)),
        (Side::B, table.column_at_index(b)),
    ];
    let mut out: Vec<PredictedEigenvalue> = Vec::new();
    for (row, &degree) in table.degrees().iter().enumerate() {
        let scale = Rational::new(group_order.into(), degree.into());
        for (side, col) in &cols {
            let value = col[row].scale(&scale);
            match out.iter_mut().find(|e| e.value == value) {
                Some(e) => e.sources.push((row, *side)),
                None => out.push(PredictedEigenvalue {
                    value,
                    sources: vec![(row, *side)],
                }),
            }
        }
    }
    out
}

/// Every predicted value is an exact root of `m`.
pub fn verify_predicted_are_roots(m: &RatPoly, predicted: &[PredictedEigenvalue]) -> Verdict {
    for e in predicted {
        let r = e.value.eval_poly(m);
        if !r.is_zero() {
            return Err(format!(
                "predicted eigenvalue {} (from {}) is not a root: m = {}",
                e.value,
                describe_sources(&e.sources),
                r
            ));
        }
    }
    Ok(())
}

pub(crate) fn describe_sources(sources: &[(usize, Side)]) -> String {
    let parts: Vec<String> = sources
        .iter()
        .map(|(r, s)| format!("row {r} at {s}"))
        .collect();
    parts.join(", ")
}

/// `(k ≤ L, L ≤ K_exp, K_exp ≤ K_ord)`.
pub fn verify_tower(
    k: &Subfield,
    l: &Subfield,
    k_exp: &Subfield,
    k_ord: &Subfield,
) -> (bool, bool, bool) {
    (k.leq(l), l.leq(k_exp), k_exp.leq(k_ord))
}

/// Invariant factors of `Gal(L/Q)`; empty for `Q`.
pub fn galois_group_of_l(l: &Subfield) -> Vec<u64> {
    l.galois_group()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::{character_table, DEFAULT_CHARTAB_CAP};
    use crate::dessin::parse_dessin;
    use crate::perm::DEFAULT_GROUP_CAP;

    fn int(k: i64) -> CycloNum {
        CycloNum::from_rational(1, Rational::from_integer(k.into()))
    }

    #[test]
    fn frobenius_examples() {
        let s = RatPoly::from_i64(&[1, 1, 1]);
        assert_eq!(frobenius_splits(&s, 3, 1, 1), vec![(7, true)]);
        assert_eq!(frobenius_splits(&s, 3, 2, 1), vec![(5, false)]);
        assert_eq!(field_l(&s, 3).unwrap(), Subfield::cyclotomic(3));
        for n in [1, 4, 12, 60] {
            assert!(field_l(&RatPoly::from_i64(&[-1, 1]), n)
                .unwrap()
                .is_rational());
        }
        assert_eq!(
            field_l(&RatPoly::from_i64(&[-27, 0, 0, 1]), 3).unwrap(),
            Subfield::cyclotomic(3)
        );
        // roots ±√5 generate the real quadratic subfield of Q(ζ_5)
        let l = field_l(&RatPoly::from_i64(&[-5, 0, 1]), 5).unwrap();
        assert_eq!((l.conductor(), l.degree()), (5, 2));
        assert_eq!(l.subgroup(), &[1, 4]);
    }

    #[test]
    fn roots_outside_the_cyclotomic_field_are_reported() {
        // √2 is not in Q(ζ_3), although it exists modulo 7
        let err = field_l(&RatPoly::from_i64(&[-2, 0, 1]), 3).unwrap_err();
        assert!(matches!(
            err,
            Error::EigenvaluesOutsideCyclotomic { conductor: 3, .. }
        ));
        // ∛2 is in no abelian field
        assert!(field_l(&RatPoly::from_i64(&[-2, 0, 0, 1]), 36).is_err());
        // the diagnostic names the offending factor of (t − 1)(t² − 2)
        let s = &RatPoly::from_i64(&[-1, 1]) * &RatPoly::from_i64(&[-2, 0, 1]);
        match field_l(&s, 3).unwrap_err() {
            Error::EigenvaluesOutsideCyclotomic { detail, .. } => {
                assert!(detail.starts_with("t^2 - 2 "), "{detail}")
            }
            e => panic!("{e}"),
        }
    }

    fn setup(s: &str) -> (GroupTable, CharacterTable) {
        let g = parse_dessin(s)
            .unwrap()
            .monodromy_group(DEFAULT_GROUP_CAP)
            .unwrap();
        let t = character_table(&g, DEFAULT_CHARTAB_CAP).unwrap();
        (g, t)
    }

    #[test]
    fn character_fields() {
        for (s, want) in [
            ("n=1 a=() b=()", Subfield::rationals()),
            ("n=3 a=(1 2 3) b=(1 2)", Subfield::rationals()),
            ("n=4 a=(1 2 3 4) b=(1 2 3 4)", Subfield::cyclotomic(4)),
            ("n=3 a=(1 2 3) b=(1 2 3)", Subfield::cyclotomic(3)),
            (
                "n=5 a=(1 2 3 4 5) b=(1 2 3)",
                Subfield::new(5, [1, 4]).unwrap(),
            ),
            ("n=5 a=(1 2 3 4 5) b=(1 2)", Subfield::rationals()),
        ] {
            let (g, t) = setup(s);
            let (a, b) = (g.generators()[0], g.generators()[1]);
            let by_power = field_k_power_maps(&g, a, b).unwrap();
            let by_table = field_k_table(&t, a, b).unwrap();
            assert_eq!(by_power, want, "{s}");
            assert_eq!(by_table, want, "{s}");
        }
    }

    #[test]
    fn s3_predictions() {
        let (g, t) = setup("n=3 a=(1 2 3) b=(1 2)");
        let (a, b) = (g.generators()[0], g.generators()[1]);
        let pred = predicted_eigenvalues(&t, g.order(), a, b);
        let values: Vec<CycloNum> = pred.iter().map(|e| e.value.clone()).collect();
        assert_eq!(values, vec![int(6), int(-6), int(-3), int(0)]);
        assert_eq!(
            pred[0].sources,
            vec![(0, Side::A), (0, Side::B), (1, Side::A)]
        );
        // (t - 6)(t + 6)(t + 3) t
        let m = RatPoly::from_i64(&[0, -108, -36, 3, 1]);
        assert!(verify_predicted_are_roots(&m, &pred).is_ok());
        let wrong = RatPoly::from_i64(&[0, -36, 0, 1]);
        assert!(verify_predicted_are_roots(&wrong, &pred)
            .unwrap_err()
            .contains("-3"));
    }

    #[test]
    fn cyclic_predictions() {
        let (g, t) = setup("n=3 a=(1 2 3) b=(1 2 3)");
        let (a, b) = (g.generators()[0], g.generators()[1]);
        let mut values: Vec<CycloNum> = predicted_eigenvalues(&t, 3, a, b)
            .into_iter()
            .map(|e| e.value)
            .collect();
        let mut want: Vec<CycloNum> = (0..3)
            .map(|k| CycloNum::root_of_unity(k, 3).scale(&Rational::from_integer(3.into())))
            .collect();
        values.sort_by(|x, y| x.lex_cmp(y));
        want.sort_by(|x, y| x.lex_cmp(y));
        assert_eq!(values, want);
        let triv = setup("n=1 a=() b=()");
        let pred = predicted_eigenvalues(&triv.1, 1, 0, 0);
        assert_eq!(pred.len(), 1);
        assert_eq!(pred[0].value, int(1));
    }

    #[test]
    fn tower_and_galois() {
        let q = Subfield::rationals();
        assert_eq!(verify_tower(&q, &q, &q, &q), (true, true, true));
        let q3 = Subfield::cyclotomic(3);
        assert_eq!(verify_tower(&q3, &q3, &q3, &q3), (true, true, true));
        assert_eq!(
            verify_tower(&q, &q3, &Subfield::cyclotomic(6), &Subfield::cyclotomic(6)),
            (true, true, true)
        );
        assert_eq!(verify_tower(&q3, &q, &q3, &q3).0, false);
        assert!(galois_group_of_l(&q).is_empty());
        assert_eq!(galois_group_of_l(&q3), vec![2]);
        assert_eq!(galois_group_of_l(&Subfield::cyclotomic(5)), vec![4]);
    }
}
