//! Subfields of cyclotomic fields, identified with their fixing subgroups
//! `H ≤ (Z/N)*` via the Galois correspondence.

use std::collections::BTreeSet;
use std::fmt;

use crate::arith::{divisors, euler_phi, factorize, gcd, lcm, units};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::Field;

/// The fixed field of `subgroup` inside `Q(ζ_conductor)`, always stored
/// with the minimal conductor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subfield {
    conductor: u64,
    subgroup: Vec<u64>,
}

impl Subfield {
    /// Validates `h` as a subgroup of `(Z/n)*` and canonicalizes.
    pub fn new(n: u64, h: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("conductor must be positive"));
        }
        let set: BTreeSet<u64> = h
            .into_iter()
            .map(|j| j % n.max(1))
            .map(|j| if n <= 2 { 1 } else { j })
            .collect();
        if n > 2 {
            if !set.contains(&1) {
                return Err(Error::input(format!("subgroup of (Z/{n})* must contain 1")));
            }
            if let Some(&bad) = set.iter().find(|&&j| gcd(j, n) != 1) {
                return Err(Error::NotCoprime(bad, n));
            }
            for &x in &set {
                for &y in &set {
                    if !set.contains(&(x * y % n)) {
                        return Err(Error::input(format!(
                            "{x}·{y} mod {n} escapes the proposed subgroup"
                        )));
                    }
                }
            }
        }
        Ok(conductor_reduce(n, &set.into_iter().collect::<Vec<_>>()))
    }

    pub fn rationals() -> Self {
        Subfield {
            conductor: 1,
            subgroup: vec![1],
        }
    }

    /// `Q(ζ_n)` itself.
    pub fn cyclotomic(n: u64) -> Self {
        conductor_reduce(n, &[1])
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn subgroup(&self) -> &[u64] {
        &self.subgroup
    }

    /// `[F : Q] = φ(N) / |H|`.
    pub fn degree(&self) -> u64 {
        euler_phi(self.conductor) / self.subgroup.len() as u64
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    /// Preimage of `H` in `(Z/m)*` for a multiple `m` of the conductor.
    pub fn lift_subgroup(&self, m: u64) -> Vec<u64> {
        assert_eq!(
            m % self.conductor,
            0,
            "lift target must be a multiple of the conductor"
        );
        let n = self.conductor;
        units(m)
            .into_iter()
            .filter(|&j| n <= 2 || self.subgroup.binary_search(&(j % n)).is_ok())
            .collect()
    }

    /// Field containment: lift both to a common conductor and compare
    /// subgroups in reverse.
    pub fn leq(&self, other: &Subfield) -> bool {
        let m = lcm(self.conductor, other.conductor);
        let mine: BTreeSet<u64> = self.lift_subgroup(m).into_iter().collect();
        other
            .lift_subgroup(m)
            .into_iter()
            .all(|j| mine.contains(&j))
    }

    /// Whether `σ_j` fixes the field, for `j` a unit modulo the conductor.
    pub fn is_fixed_by(&self, j: u64) -> bool {
        self.conductor <= 2 || self.subgroup.binary_search(&(j % self.conductor)).is_ok()
    }

    /// Invariant factors `d_1 | d_2 | …` of `Gal(F/Q) ≅ (Z/N)*/H`; empty for
    /// `Q`.
    pub fn galois_group(&self) -> Vec<u64> {
        let n = self.conductor;
        if n <= 2 {
            return Vec::new();
        }
        let h: BTreeSet<u64> = self.subgroup.iter().copied().collect();
        // One representative per coset.
        let mut seen = BTreeSet::new();
        let mut reps = Vec::new();
        for u in units(n) {
            if seen.contains(&u) {
                continue;
            }
            reps.push(u);
            for &x in &h {
                seen.insert(u * x % n);
            }
        }
        let order = reps.len() as u64;
        let in_h = |x: u64, k: u64| h.contains(&crate::arith::pow_mod(x, k, n));
        // Elementary divisors per prime from counts of q^i-torsion.
        let mut elementary: Vec<Vec<u64>> = Vec::new();
        for (q, _) in factorize(order) {
            let mut ranks = vec![0u32];
            let mut qi = 1u64;
            loop {
                qi *= q;
                let count = reps.iter().filter(|&&x| in_h(x, qi)).count() as u64;
                let mut s = 0u32;
                let mut c = count;
                while c > 1 {
                    c /= q;
                    s += 1;
                }
                ranks.push(s);
                if count == q_part(order, q) {
                    break;
                }
            }
            // ranks[i] = log_q #{x : x^(q^i) = 1}; factors of order ≥ q^i number
            // ranks[i] - ranks[i-1].
            let mut powers = Vec::new();
            for i in 1..ranks.len() {
                let at_least_i = ranks[i] - ranks[i - 1];
                let at_least_next = if i + 1 < ranks.len() {
                    ranks[i + 1] - ranks[i]
                } else {
                    0
                };
                for _ in 0..(at_least_i - at_least_next) {
                    powers.push(q.pow(i as u32));
                }
            }
            powers.sort_unstable_by(|a, b| b.cmp(a));
            elementary.push(powers);
        }
        let k = elementary.iter().map(Vec::len).max().unwrap_or(0);
        let mut factors: Vec<u64> = (0..k)
            .map(|i| elementary.iter().filter_map(|e| e.get(i)).product())
            .collect();
        factors.reverse();
        factors
    }
}

fn q_part(order: u64, q: u64) -> u64 {
    let mut out = 1;
    let mut o = order;
    while o % q == 0 {
        o /= q;
        out *= q;
    }
    out
}

impl fmt::Display for Subfield {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "Q");
        }
        if self.subgroup.len() == 1 {
            return write!(f, "Q(zeta_{})", self.conductor);
        }
        let h: Vec<String> = self.subgroup.iter().map(u64::to_string).collect();
        write!(
            f,
            "Fix<{}> in Q(zeta_{}) [degree {}]",
            h.join(","),
            self.conductor,
            self.degree()
        )
    }
}

/// Re-expresses the fixed field of `h ≤ (Z/n)*` at the least conductor `d | n`
/// whose congruence kernel `{j ≡ 1 mod d}` lies inside `h`.
pub fn conductor_reduce(n: u64, h: &[u64]) -> Subfield {
    let set: BTreeSet<u64> = h.iter().map(|&j| j % n.max(1)).collect();
    let all = units(n);
    for d in divisors(n) {
        let kernel_inside = all
            .iter()
            .filter(|&&j| d <= 1 || j % d == 1)
            .all(|j| n <= 2 || set.contains(j));
        if kernel_inside {
            let sub: BTreeSet<u64> = if d <= 2 {
                [1].into()
            } else {
                set.iter().map(|&j| j % d).collect()
            };
            return Subfield {
                conductor: if d <= 2 { 1 } else { d },
                subgroup: sub.into_iter().collect(),
            };
        }
    }
    unreachable!("d = n always qualifies")
}

/// The field `Q(S)` generated by a set of cyclotomic numbers, as the fixed
/// field of `{j : σ_j(e) = e for all e in S}` inside `Q(ζ_n)`.
pub fn stabilizer_subgroup<T: Field>(n: u64, values: &[Cyclo<T>]) -> Result<Subfield> {
    let lifted: Vec<Cyclo<T>> = values.iter().map(|v| v.embed(n)).collect::<Result<_>>()?;
    let n = crate::cyclo::normalize_conductor(n);
    let h: Vec<u64> = units(n)
        .into_iter()
        .filter(|&j| {
            lifted
                .iter()
                .all(|v| v.galois_apply(j as i64).map(|w| &w == v).unwrap_or(false))
        })
        .collect();
    Ok(conductor_reduce(n, &h))
}
