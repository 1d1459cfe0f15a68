//! Minimal polynomial of left multiplication by `x` on `Q[G×G]`.
//!
//! Both strategies find the degree and the coefficients modulo word-size
//! primes, reconstruct the integer coefficients by CRT, and then certify the
//! result exactly. The polynomial is monic with integer coefficients, and
//! every eigenvalue has modulus at most `|G|` (the column sums of the
//! action), which bounds the coefficients.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use super::element::AlgebraElement;
use crate::arith::{root_coefficient_bound, Crt, LargePrimes};
use crate::error::{Error, Result};
use crate::modp::{reduce_against, DependencyTracker, Fp};
use crate::RatPoly;

/// Default ceiling on `|G|` for the Krylov strategy.
pub const DEFAULT_KRYLOV_CAP: usize = 360;

/// Extra primes allowed after the coefficient bound is met, in case the
/// exact check fails.
const EXTRA_PRIME_ROUNDS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Dense,
    Krylov,
    Auto,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Dense => "dense",
            Strategy::Krylov => "krylov",
            Strategy::Auto => "auto",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Strategy::Dense),
            "krylov" => Ok(Strategy::Krylov),
            "auto" => Ok(Strategy::Auto),
            other => Err(Error::input(format!("unknown strategy '{other}'"))),
        }
    }
}

/// Caps consulted when resolving a strategy.
#[derive(Clone, Copy, Debug)]
pub struct StrategyCaps {
    pub dense: usize,
    pub krylov: usize,
}

impl Default for StrategyCaps {
    fn default() -> Self {
        StrategyCaps {
            dense: super::element::DEFAULT_DENSE_CAP,
            krylov: DEFAULT_KRYLOV_CAP,
        }
    }
}

/// The concrete strategy for a group of the given order, or a cap error.
pub fn resolve_strategy(strategy: Strategy, order: usize, caps: StrategyCaps) -> Result<Strategy> {
    let dense_err = || Error::CapExceeded {
        what: "group order for the dense strategy",
        cap: caps.dense,
        reached: order,
    };
    let krylov_err = || Error::CapExceeded {
        what: "group order for the Krylov strategy",
        cap: caps.krylov,
        reached: order,
    };
    match strategy {
        Strategy::Dense if order <= caps.dense => Ok(Strategy::Dense),
        Strategy::Dense => Err(dense_err()),
        Strategy::Krylov if order <= caps.krylov => Ok(Strategy::Krylov),
        Strategy::Krylov => Err(krylov_err()),
        Strategy::Auto if order <= caps.dense => Ok(Strategy::Dense),
        Strategy::Auto if order <= caps.krylov => Ok(Strategy::Krylov),
        Strategy::Auto => Err(krylov_err()),
    }
}

/// The exact minimal polynomial of `x`, with the strategy actually used.
pub fn min_poly_of_x(
    x: &AlgebraElement<'_>,
    strategy: Strategy,
    caps: StrategyCaps,
) -> Result<(RatPoly, Strategy)> {
    let resolved = resolve_strategy(strategy, x.group().order(), caps)?;
    let coeffs = match resolved {
        Strategy::Dense => DenseOperator::new(x).min_poly()?,
        _ => OrbitOperator::new(x).min_poly()?,
    };
    Ok((RatPoly::from_integers(&coeffs), resolved))
}

/// A sparse integer operator; `rows[i]` lists `(j, c)` with `A_ij = c`.
struct SparseOp {
    rows: Vec<Vec<(usize, u64)>>,
}

impl SparseOp {
    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn apply_mod(&self, f: &Fp, v: &[u64]) -> Vec<u64> {
        self.rows
            .iter()
            .map(|row| {
                row.iter().fold(0u64, |acc, &(j, c)| {
                    f.add(acc, f.mul(c % f.modulus(), v[j]))
                })
            })
            .collect()
    }

    fn apply_exact(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.rows
            .iter()
            .map(|row| {
                row.iter().fold(BigInt::zero(), |acc, &(j, c)| {
                    if v[j].is_zero() {
                        acc
                    } else {
                        acc + &v[j] * c
                    }
                })
            })
            .collect()
    }

    /// Whether `m(A)·e_j = 0` exactly, by Horner's rule.
    fn annihilates(&self, m: &[BigInt], j: usize) -> bool {
        let mut w = vec![BigInt::zero(); self.dim()];
        for c in m.iter().rev() {
            w = self.apply_exact(&w);
            w[j] += c;
        }
        w.iter().all(Zero::is_zero)
    }

    /// Monic annihilating relation of the Krylov sequence of `e_start`
    /// modulo `p`, plus the Krylov vectors themselves when requested.
    fn krylov_mod(&self, f: &Fp, start: usize, keep: bool) -> (Vec<u64>, Vec<Vec<u64>>) {
        let mut tracker = DependencyTracker::new(*f);
        let mut v = vec![0u64; self.dim()];
        v[start] = 1;
        let mut kept = Vec::new();
        loop {
            let next = self.apply_mod(f, &v);
            if keep {
                kept.push(v.clone());
            }
            if let Some(rel) = tracker.push(v) {
                if keep {
                    kept.pop();
                }
                return (rel, kept);
            }
            v = next;
        }
    }
}

/// Combines per-prime monic relations by CRT, keeping only primes that
/// realize the largest degree seen, until the coefficient bound is passed
/// and `certify` accepts the candidate.
fn reconstruct(
    order: usize,
    mut relation_mod: impl FnMut(&Fp) -> Vec<u64>,
    certify: impl Fn(&[BigInt]) -> bool,
) -> Result<Vec<BigInt>> {
    let mut primes = LargePrimes::new();
    let mut crt: Option<Crt> = None;
    let mut rounds_after_bound = 0;
    loop {
        let p = primes.next().expect("prime supply");
        let rel = relation_mod(&Fp::new(p));
        match &mut crt {
            Some(c) if rel.len() < c.len() => continue,
            Some(c) if rel.len() == c.len() => c.absorb(&rel, p),
            _ => crt = Some(Crt::new(&rel, p)),
        }
        let c = crt.as_ref().unwrap();
        let degree = c.len() - 1;
        let bound = root_coefficient_bound(order as u64, degree) * 2u32;
        if c.modulus() <= &bound {
            continue;
        }
        let candidate = c.symmetric();
        if certify(&candidate) {
            return Ok(candidate);
        }
        rounds_after_bound += 1;
        if rounds_after_bound > EXTRA_PRIME_ROUNDS {
            return Err(Error::internal(
                "minimal polynomial reconstruction failed its exact check",
            ));
        }
    }
}

/// The action restricted to functions on `G×G` constant on orbits of
/// diagonal conjugation, which contain every power of `x`.
pub(crate) struct OrbitOperator {
    op: SparseOp,
    identity_orbit: usize,
    order: usize,
}

impl OrbitOperator {
    pub(crate) fn new(x: &AlgebraElement<'_>) -> Self {
        let g = x.group();
        let n = g.order();
        let pair = |u: usize, v: usize| u * n + v;
        let mut orbit_of = vec![u32::MAX; n * n];
        let mut reps = Vec::new();
        for start in 0..n * n {
            if orbit_of[start] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push((start / n, start % n));
            orbit_of[start] = id;
            let mut stack = vec![start];
            while let Some(q) = stack.pop() {
                let (u, v) = (q / n, q % n);
                for &h in g.generators() {
                    let r = pair(g.conjugate_idx(u, h), g.conjugate_idx(v, h));
                    if orbit_of[r] == u32::MAX {
                        orbit_of[r] = id;
                        stack.push(r);
                    }
                }
            }
        }
        // (x·w)(p, q) = Σ c_st · w(s⁻¹p, t⁻¹q), evaluated at representatives.
        let rows = reps
            .iter()
            .map(|&(p, q)| {
                let mut row: Vec<(usize, u64)> = Vec::new();
                for (&(s, t), &c) in x.support() {
                    let j = orbit_of[pair(g.mul(g.inv(s), p), g.mul(g.inv(t), q))] as usize;
                    row.push((j, c));
                }
                row.sort_unstable();
                row.dedup_by(|b, a| {
                    if a.0 == b.0 {
                        a.1 += b.1;
                        true
                    } else {
                        false
                    }
                });
                row
            })
            .collect();
        OrbitOperator {
            op: SparseOp { rows },
            identity_orbit: orbit_of[0] as usize,
            order: n,
        }
    }

    /// Number of orbit coordinates.
    #[cfg(test)]
    pub(crate) fn dim(&self) -> usize {
        self.op.dim()
    }

    pub(crate) fn min_poly(&self) -> Result<Vec<BigInt>> {
        reconstruct(
            self.order,
            |f| self.op.krylov_mod(f, self.identity_orbit, false).0,
            |m| self.op.annihilates(m, self.identity_orbit),
        )
    }
}

/// The full `|G|² × |G|²` action. The minimal polynomial is the lcm of the
/// minimal polynomials of a set of basis vectors whose Krylov spaces span
/// everything.
struct DenseOperator {
    op: SparseOp,
    order: usize,
}

impl DenseOperator {
    fn new(x: &AlgebraElement<'_>) -> Self {
        let cols = x.action_columns();
        let mut rows = vec![Vec::new(); cols.len()];
        for (j, col) in cols.into_iter().enumerate() {
            for (i, c) in col {
                rows[i].push((j, c));
            }
        }
        DenseOperator {
            op: SparseOp { rows },
            order: x.group().order(),
        }
    }

    /// Basis vectors whose Krylov spaces together span the whole space
    /// modulo `p` (hence over `Q`).
    fn spanning_starts(&self, f: &Fp) -> Vec<usize> {
        let dim = self.op.dim();
        let mut span: Vec<(usize, Vec<u64>)> = Vec::new();
        let mut starts = Vec::new();
        for j in 0..dim {
            if span.len() == dim {
                break;
            }
            let mut e = vec![0u64; dim];
            e[j] = 1;
            if reduce_against(f, &span, e).iter().all(|&c| c == 0) {
                continue;
            }
            starts.push(j);
            let (_, vecs) = self.op.krylov_mod(f, j, true);
            for v in vecs {
                let mut r = reduce_against(f, &span, v);
                if let Some(pivot) = r.iter().position(|&c| c != 0) {
                    let inv = f.inv(r[pivot]);
                    r.iter_mut().for_each(|c| *c = f.mul(*c, inv));
                    span.push((pivot, r));
                }
            }
        }
        starts
    }

    fn min_poly(&self) -> Result<Vec<BigInt>> {
        let first = Fp::new(LargePrimes::new().next().expect("prime supply"));
        let starts = self.spanning_starts(&first);
        reconstruct(
            self.order,
            |f| {
                starts.iter().fold(vec![1u64], |acc, &j| {
                    f.poly_lcm(&acc, &self.op.krylov_mod(f, j, false).0)
                })
            },
            |m| starts.iter().all(|&j| self.op.annihilates(m, j)),
        )
    }
}

/// `m(x)` reduced modulo `p` applied to `e_j`; used by tests as an extra
/// modular witness.
#[cfg(test)]
fn residue_check(op: &SparseOp, m: &[BigInt], p: u64, j: usize) -> bool {
    let f = Fp::new(p);
    let mut w = vec![0u64; op.dim()];
    for c in m.iter().rev() {
        w = op.apply_mod(&f, &w);
        w[j] = f.add(w[j], crate::arith::bigint_mod(c, p));
    }
    w.iter().all(|&c| c == 0)
}
