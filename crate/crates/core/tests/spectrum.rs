use dessin_core::perm::DEFAULT_GROUP_CAP;
use dessin_core::spectrum::{
    analyze, conjugation_sum, min_poly_of_x, AlgebraElement, AnalyzeConfig, Strategy, StrategyCaps,
};
use dessin_core::{parse_dessin, Error, GroupTable, RatPoly, Rational};
use num_traits::Zero;

const P: u64 = 1_000_000_007;

fn group_of(s: &str) -> GroupTable {
    parse_dessin(s)
        .unwrap()
        .monodromy_group(DEFAULT_GROUP_CAP)
        .unwrap()
}

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn to_mod(c: &Rational) -> u64 {
    assert!(c.is_integer());
    let r = (c.to_integer() % num_bigint::BigInt::from(P) + P) % P;
    r.try_into().unwrap()
}

/// `x·v` through the sparse columns.
fn apply(cols: &[Vec<(usize, u64)>], v: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; v.len()];
    for (j, col) in cols.iter().enumerate() {
        if v[j] == 0 {
            continue;
        }
        for &(i, c) in col {
            out[i] = (out[i] + mulmod(c, v[j])) % P;
        }
    }
    out
}

/// `q(x)·v` by Horner.
fn apply_poly(cols: &[Vec<(usize, u64)>], q: &RatPoly, v: &[u64]) -> Vec<u64> {
    let mut acc = vec![0u64; v.len()];
    for c in q.coeffs().iter().rev() {
        let c = to_mod(c);
        acc = apply(cols, &acc);
        for (a, &vi) in acc.iter_mut().zip(v) {
            *a = (*a + mulmod(c, vi)) % P;
        }
    }
    acc
}

/// The A5 dessin has eigenvalues 1 ± √13: the factor t² − 2t − 12 of the
/// minimal polynomial cannot be dropped, checked by applying the cofactor to
/// basis vectors without any Krylov machinery.
#[test]
fn a5_has_eigenvalues_outside_its_cyclotomic_field() {
    let g = group_of("n=5 a=(1 2 3 4 5) b=(1 2 3)");
    let x = conjugation_sum(&g).unwrap();
    let (m, _) = min_poly_of_x(&x, Strategy::Krylov, StrategyCaps::default()).unwrap();
    let f = RatPoly::from_i64(&[-12, -2, 1]);
    let cofactor = m
        .exact_div(&f)
        .expect("t^2 - 2t - 12 divides the minimal polynomial");
    let cols = x.action_columns();
    let dim = cols.len();
    let nonzero = (0..dim).step_by(37).any(|i| {
        let mut e = vec![0u64; dim];
        e[i] = 1;
        apply_poly(&cols, &cofactor, &e).iter().any(|&c| c != 0)
    });
    assert!(nonzero, "the cofactor already annihilates x");
    let e0: Vec<u64> = (0..dim as u64).map(|i| i % 7 + 1).collect();
    assert!(apply_poly(&cols, &m, &e0).iter().all(|&c| c == 0));

    let err = analyze(
        &parse_dessin("n=5 a=(1 2 3 4 5) b=(1 2 3)").unwrap(),
        &AnalyzeConfig::default(),
    )
    .unwrap_err();
    assert!(
        matches!(
            err,
            Error::EigenvaluesOutsideCyclotomic { conductor: 30, .. }
        ),
        "{err}"
    );
}

/// Row-reduces `rows` mod `P` and returns a basis of the null space.
fn kernel(mut rows: Vec<Vec<u64>>, dim: usize) -> Vec<Vec<u64>> {
    let inv = |a: u64| {
        let (mut r, mut b, mut e) = (1u64, a, P - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..dim {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let s = inv(rows[rank][col]);
        for c in rows[rank].iter_mut() {
            *c = mulmod(*c, s);
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in 0..dim {
                    rows[r][c] = (rows[r][c] + P - mulmod(f, rows[rank][c])) % P;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; dim];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (P - rows[r][fc]) % P;
            }
            v
        })
        .collect()
}

fn dense_mod(x: &AlgebraElement<'_>, shift: i64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = x
        .dense_action_matrix(24)
        .unwrap()
        .into_iter()
        .map(|r| r.into_iter().map(|c| c % P).collect())
        .collect();
    let s = shift.rem_euclid(P as i64) as u64;
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = (row[i] + P - s) % P;
    }
    m
}

/// Each rational eigenspace is a submodule for the diagonal copy of `G`.
#[test]
fn rational_eigenspaces_are_diagonal_submodules() {
    for s in [
        "n=3 a=(1 2 3) b=(1 2)",
        "n=4 a=(1 2 3 4) b=(1 3)",
        "n=4 a=(1 2)(3 4) b=(1 3)(2 4)",
        "n=4 a=(1 2 3) b=(2 3 4)",
        "n=8 a=(1 3 2 4)(5 7 6 8) b=(1 5 2 6)(3 8 4 7)",
    ] {
        let g = group_of(s);
        let n = g.order();
        let x = conjugation_sum(&g).unwrap();
        let (m, _) = min_poly_of_x(&x, Strategy::Dense, StrategyCaps::default()).unwrap();
        let bound = n as i64;
        let eigen: Vec<i64> = (-bound..=bound)
            .filter(|&r| m.eval(&Rational::from_integer(r.into())).is_zero())
            .collect();
        assert!(eigen.contains(&bound), "{s}");
        for rho in eigen {
            let shifted = dense_mod(&x, rho);
            let basis = kernel(shifted.clone(), n * n);
            assert!(!basis.is_empty(), "{s}: {rho} has no eigenvector");
            for v in &basis {
                for &h in g.generators() {
                    let mut w = vec![0u64; n * n];
                    for u in 0..n {
                        for t in 0..n {
                            w[g.mul(h, u) * n + g.mul(h, t)] = v[u * n + t];
                        }
                    }
                    let image: Vec<u64> = shifted
                        .iter()
                        .map(|row| {
                            row.iter()
                                .zip(&w)
                                .fold(0, |acc, (&a, &b)| (acc + mulmod(a, b)) % P)
                        })
                        .collect();
                    assert!(
                        image.iter().all(|&c| c == 0),
                        "{s}: eigenspace {rho} not stable"
                    );
                }
            }
        }
    }
}
