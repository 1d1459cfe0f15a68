//! Exact arithmetic in cyclotomic fields `Q(ζ_N)` on the power basis
//! `{ζ^i : 0 ≤ i < φ(N)}`.
//!
//! Conductors `N ≡ 2 (mod 4)` are replaced by `N/2` on construction since the
//! two fields coincide; stored conductors are therefore never `≡ 2 (mod 4)`.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use crate::arith::{divisors, euler_phi, gcd, lcm};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::Field;

/// `N/2` for `N ≡ 2 (mod 4)`, otherwise `N`.
pub fn normalize_conductor(n: u64) -> u64 {
    assert!(n >= 1, "conductor must be positive");
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

fn cyclotomic_cache() -> &'static RwLock<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients (ascending) of the `n`-th cyclotomic polynomial, computed
/// as `(t^n - 1) / Π_{d | n, d < n} Φ_d` and memoized.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<i64>> {
    if let Some(p) = cyclotomic_cache().read().unwrap().get(&n) {
        return Arc::clone(p);
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        num = exact_int_div(&num, &cyclotomic_poly(d));
    }
    let arc = Arc::new(num);
    // Concurrent fills compute the same value; first writer wins.
    cyclotomic_cache()
        .write()
        .unwrap()
        .entry(n)
        .or_insert_with(|| Arc::clone(&arc))
        .clone()
}

fn exact_int_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    debug_assert_eq!(b[db], 1);
    let mut rem = a.to_vec();
    let mut q = vec![0i64; a.len() - db];
    for k in (db..rem.len()).rev() {
        let c = rem[k];
        if c != 0 {
            q[k - db] = c;
            for (i, &bc) in b.iter().enumerate() {
                rem[k - db + i] -= c * bc;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

/// An element of `Q(ζ_N)`.
#[derive(Clone, Debug)]
pub struct Cyclo<T> {
    conductor: u64,
    coords: Vec<T>,
}

impl<T: Field> Cyclo<T> {
    /// Reduces an arbitrary polynomial in `ζ_N` to canonical coordinates.
    pub fn from_poly_coeffs(n: u64, mut coeffs: Vec<T>) -> Self {
        let m = normalize_conductor(n);
        if m != n {
            // ζ_N = -ζ_m^((m+1)/2) for N = 2m, m odd.
            let half = (m + 1) / 2;
            let mut lifted = vec![T::zero(); m as usize];
            for (k, c) in coeffs.into_iter().enumerate() {
                let e = ((k as u64 % n) * half % m) as usize;
                let c = if k % 2 == 1 { -c } else { c };
                lifted[e] = lifted[e].clone() + c;
            }
            coeffs = lifted;
        }
        let phi = euler_phi(m) as usize;
        let cyc = cyclotomic_poly(m);
        // Fold exponents ≥ m using ζ^m = 1 first, then reduce by Φ_m.
        if coeffs.len() > m as usize {
            let mut folded = vec![T::zero(); m as usize];
            for (k, c) in coeffs.into_iter().enumerate() {
                let e = k % m as usize;
                folded[e] = folded[e].clone() + c;
            }
            coeffs = folded;
        }
        let phi_coeffs: Vec<T> = cyc.iter().map(|&c| from_i64::<T>(c)).collect();
        for k in (phi..coeffs.len()).rev() {
            let c = coeffs[k].clone();
            if c.is_zero() {
                continue;
            }
            for (i, pc) in phi_coeffs.iter().enumerate().take(phi) {
                if !pc.is_zero() {
                    coeffs[k - phi + i] = coeffs[k - phi + i].clone() - c.clone() * pc.clone();
                }
            }
            coeffs[k] = T::zero();
        }
        coeffs.resize(phi, T::zero());
        Cyclo {
            conductor: m,
            coords: coeffs,
        }
    }

    pub fn zero(n: u64) -> Self {
        Self::from_rational(n, T::zero())
    }

    pub fn one(n: u64) -> Self {
        Self::from_rational(n, T::one())
    }

    pub fn from_rational(n: u64, q: T) -> Self {
        let m = normalize_conductor(n);
        let mut coords = vec![T::zero(); euler_phi(m) as usize];
        coords[0] = q;
        Cyclo {
            conductor: m,
            coords,
        }
    }

    /// `ζ_N^k`.
    pub fn root_of_unity(k: i64, n: u64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let mut c = vec![T::zero(); e + 1];
        c[e] = T::one();
        Self::from_poly_coeffs(n, c)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(num_traits::Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(num_traits::Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<T> {
        self.is_rational().then(|| self.coords[0].clone())
    }

    /// The same number in `Q(ζ_M)`; requires `N | M` (after normalization).
    pub fn embed(&self, m: u64) -> Result<Self> {
        let target = normalize_conductor(m);
        if target % self.conductor != 0 {
            return Err(Error::NotDivisible(self.conductor, m));
        }
        if target == self.conductor {
            return Ok(self.clone());
        }
        let step = (target / self.conductor) as usize;
        let mut c = vec![T::zero(); (self.coords.len().max(1) - 1) * step + 1];
        for (i, x) in self.coords.iter().enumerate() {
            c[i * step] = x.clone();
        }
        Ok(Self::from_poly_coeffs(target, c))
    }

    /// Coordinates in the subfield `Q(ζ_d)`, if the number lies there.
    pub fn restrict(&self, d: u64) -> Result<Self> {
        let d = normalize_conductor(d);
        if self.conductor % d != 0 {
            return Err(Error::NotDivisible(d, self.conductor));
        }
        let phi_d = euler_phi(d) as usize;
        let columns: Vec<Vec<T>> = (0..phi_d)
            .map(|i| {
                Cyclo::<T>::root_of_unity(i as i64, d)
                    .embed(self.conductor)
                    .expect("d divides the conductor")
                    .coords
            })
            .collect();
        let x = solve_columns(&columns, &self.coords)
            .ok_or_else(|| Error::input(format!("value does not lie in Q(zeta_{d})")))?;
        Ok(Cyclo {
            conductor: d,
            coords: x,
        })
    }

    fn lifted_pair<'a>(&'a self, other: &'a Self) -> (Cow<'a, Self>, Cow<'a, Self>) {
        if self.conductor == other.conductor {
            return (Cow::Borrowed(self), Cow::Borrowed(other));
        }
        let m = lcm(self.conductor, other.conductor);
        (
            Cow::Owned(self.embed(m).unwrap()),
            Cow::Owned(other.embed(m).unwrap()),
        )
    }

    pub fn scale(&self, q: &T) -> Self {
        Cyclo {
            conductor: self.conductor,
            coords: self.coords.iter().map(|c| c.clone() * q.clone()).collect(),
        }
    }

    /// The image under `σ_j : ζ ↦ ζ^j`.
    pub fn galois_apply(&self, j: i64) -> Result<Self> {
        let n = self.conductor;
        let jr = j.rem_euclid(n as i64) as u64;
        if gcd(jr, n) != 1 && n > 1 {
            return Err(Error::NotCoprime(j.unsigned_abs(), n));
        }
        let mut c = vec![T::zero(); n as usize];
        for (i, x) in self.coords.iter().enumerate() {
            let e = (i as u64 * jr % n) as usize;
            c[e] = c[e].clone() + x.clone();
        }
        Ok(Self::from_poly_coeffs(n, c))
    }

    /// Complex conjugate, `σ_{-1}`.
    pub fn conj(&self) -> Self {
        self.galois_apply(-1).expect("-1 is a unit")
    }

    /// Multiplicative inverse by solving against the multiplication matrix.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.conductor;
        let columns: Vec<Vec<T>> = (0..self.coords.len())
            .map(|i| (self * &Cyclo::root_of_unity(i as i64, n)).coords)
            .collect();
        let one = Cyclo::<T>::one(n).coords;
        let x = solve_columns(&columns, &one)
            .ok_or_else(|| Error::internal("singular multiplication matrix for nonzero element"))?;
        Ok(Cyclo {
            conductor: n,
            coords: x,
        })
    }

    /// Monic minimal polynomial over `Q`: the product of `t - σ_j(e)` over
    /// the distinct Galois conjugates.
    pub fn min_poly(&self) -> Poly<T> {
        let n = self.conductor;
        let mut orbit: Vec<Self> = Vec::new();
        for j in crate::arith::units(n) {
            let c = self.galois_apply(j as i64).unwrap();
            if !orbit.contains(&c) {
                orbit.push(c);
            }
        }
        let mut acc: Vec<Self> = vec![Cyclo::one(n)];
        for r in &orbit {
            let mut next = vec![Cyclo::zero(n); acc.len() + 1];
            for (k, a) in acc.iter().enumerate() {
                next[k + 1] = &next[k + 1] + a;
                next[k] = &next[k] - &(a * r);
            }
            acc = next;
        }
        Poly::new(
            acc.into_iter()
                .map(|c| {
                    c.to_rational()
                        .expect("minimal polynomial has rational coefficients")
                })
                .collect(),
        )
    }

    /// Evaluates a rational polynomial at this element (Horner).
    pub fn eval_poly(&self, p: &Poly<T>) -> Self {
        let n = self.conductor;
        p.coeffs().iter().rev().fold(Cyclo::zero(n), |acc, c| {
            &(&acc * self) + &Cyclo::from_rational(n, c.clone())
        })
    }
}

impl<T: Field + PartialOrd> Cyclo<T> {
    /// Lexicographic comparison of coordinate vectors at a common conductor.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        let (a, b) = self.lifted_pair(other);
        for (x, y) in a.coords.iter().zip(&b.coords) {
            match x.partial_cmp(y) {
                Some(Ordering::Equal) | None => continue,
                Some(o) => return o,
            }
        }
        Ordering::Equal
    }
}

fn from_i64<T: Field>(c: i64) -> T {
    T::from_i64(c).expect("scalar type represents small integers")
}

/// Solves `Σ x_i · columns[i] = rhs` by Gaussian elimination.
fn solve_columns<T: Field>(columns: &[Vec<T>], rhs: &[T]) -> Option<Vec<T>> {
    let rows = rhs.len();
    let cols = columns.len();
    let mut m: Vec<Vec<T>> = (0..rows)
        .map(|r| {
            let mut row: Vec<T> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = T::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=cols {
                    let v = f.clone() * m[r][j].clone();
                    m[i][j] = m[i][j].clone() - v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    if pivots.len() < cols {
        return None;
    }
    Some((0..cols).map(|i| m[i][cols].clone()).collect())
}

impl<T: Field> PartialEq for Cyclo<T> {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coords == other.coords;
        }
        let (a, b) = self.lifted_pair(other);
        a.coords == b.coords
    }
}

impl<T: Field> Add for &Cyclo<T> {
    type Output = Cyclo<T>;
    fn add(self, rhs: &Cyclo<T>) -> Cyclo<T> {
        let (a, b) = self.lifted_pair(rhs);
        Cyclo {
            conductor: a.conductor,
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x.clone() + y.clone())
                .collect(),
        }
    }
}

impl<T: Field> Sub for &Cyclo<T> {
    type Output = Cyclo<T>;
    fn sub(self, rhs: &Cyclo<T>) -> Cyclo<T> {
        let (a, b) = self.lifted_pair(rhs);
        Cyclo {
            conductor: a.conductor,
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x.clone() - y.clone())
                .collect(),
        }
    }
}

impl<T: Field> Neg for &Cyclo<T> {
    type Output = Cyclo<T>;
    fn neg(self) -> Cyclo<T> {
        Cyclo {
            conductor: self.conductor,
            coords: self.coords.iter().map(|x| -x.clone()).collect(),
        }
    }
}

impl<T: Field> Mul for &Cyclo<T> {
    type Output = Cyclo<T>;
    fn mul(self, rhs: &Cyclo<T>) -> Cyclo<T> {
        let (a, b) = self.lifted_pair(rhs);
        let len = a.coords.len() + b.coords.len() - 1;
        let mut c = vec![T::zero(); len];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    c[i + j] = c[i + j].clone() + x.clone() * y.clone();
                }
            }
        }
        Cyclo::from_poly_coeffs(a.conductor, c)
    }
}

impl<T: Field + fmt::Display> fmt::Display for Cyclo<T> {
    /// `c0 + c1*z + c2*z^2 + …` with `z = ζ_N`; zero terms are omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::{BigRational, Rational64};
    use proptest::prelude::*;

    type C = Cyclo<BigRational>;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn c(n: u64, coords: &[i64]) -> C {
        Cyclo::from_poly_coeffs(n, coords.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        let p105 = cyclotomic_poly(105);
        assert_eq!(p105.len() as u64, euler_phi(105) + 1);
        assert_eq!(p105.iter().min(), Some(&-2));
    }

    #[test]
    fn roots_of_unity() {
        for n in [1u64, 3, 4, 5, 7, 12] {
            assert_eq!(C::root_of_unity(0, n), C::one(n));
        }
        assert_eq!(C::root_of_unity(1, 4).coords(), &[q(0), q(1)]);
        assert_eq!(C::root_of_unity(2, 3).coords(), &[q(-1), q(-1)]);
        // ζ_6 = -ζ_3^2 = 1 + ζ_3
        assert_eq!(C::root_of_unity(1, 6), c(3, &[1, 1]));
        assert_eq!(C::root_of_unity(1, 6).conductor(), 3);
    }

    #[test]
    fn field_arithmetic_examples() {
        let z3 = C::root_of_unity(1, 3);
        let z3sq = C::root_of_unity(2, 3);
        assert_eq!(&z3 + &z3sq, C::from_rational(3, q(-1)));
        let i = C::root_of_unity(1, 4);
        assert_eq!(&i * &i, C::from_rational(4, q(-1)));
        let two = C::from_rational(1, q(2));
        assert_eq!(
            two.invert().unwrap(),
            C::from_rational(1, BigRational::new(1.into(), 2.into()))
        );
        assert_eq!(C::zero(5).invert(), Err(Error::DivisionByZero));
    }

    #[test]
    fn embedding_examples() {
        let z3 = C::root_of_unity(1, 3);
        let e = z3.embed(12).unwrap();
        assert_eq!(e, C::root_of_unity(4, 12));
        assert_eq!(e.restrict(3).unwrap().coords(), z3.coords());
        assert_eq!(
            C::from_rational(1, q(7)).embed(20).unwrap(),
            C::from_rational(20, q(7))
        );
        assert_eq!(
            C::root_of_unity(1, 4).embed(12).unwrap(),
            C::root_of_unity(3, 12)
        );
        assert!(C::root_of_unity(1, 4).embed(6).is_err());
        assert!(C::root_of_unity(1, 4)
            .embed(12)
            .unwrap()
            .restrict(3)
            .is_err());
    }

    #[test]
    fn galois_examples() {
        let i = C::root_of_unity(1, 4);
        assert_eq!(i.galois_apply(3).unwrap(), -&i);
        let r = C::from_rational(7, q(5));
        assert_eq!(r.galois_apply(3).unwrap(), r);
        assert_eq!(
            C::root_of_unity(1, 3).galois_apply(2).unwrap(),
            C::root_of_unity(2, 3)
        );
        assert!(C::root_of_unity(1, 9).galois_apply(3).is_err());
    }

    #[test]
    fn minimal_polynomials() {
        assert_eq!(
            C::root_of_unity(1, 3).min_poly(),
            Poly::from_i64(&[1, 1, 1])
        );
        let half = BigRational::new(5.into(), 2.into());
        assert_eq!(
            C::from_rational(1, half.clone()).min_poly(),
            Poly::new(vec![-half, q(1)])
        );
        assert_eq!(
            C::root_of_unity(1, 4).min_poly(),
            Poly::from_i64(&[1, 0, 1])
        );
        // √5 = 1 + 2(ζ5 + ζ5^4)
        let z = |k| C::root_of_unity(k, 5);
        let s5 = &C::one(5) + &(&(&z(1) + &z(4)) * &C::from_rational(5, q(2)));
        assert_eq!(s5.min_poly(), Poly::from_i64(&[-5, 0, 1]));
    }

    #[test]
    fn display_form() {
        assert_eq!(C::root_of_unity(2, 3).to_string(), "-1 + -1*z");
        assert_eq!(C::zero(4).to_string(), "0");
        assert_eq!(C::root_of_unity(2, 5).to_string(), "1*z^2");
    }

    #[test]
    fn generic_scalar_instance() {
        let z = Cyclo::<Rational64>::root_of_unity(1, 5);
        let s: Cyclo<Rational64> =
            (0..5).fold(Cyclo::zero(5), |acc, k| &acc + &Cyclo::root_of_unity(k, 5));
        assert!(s.is_zero());
        assert_eq!(&z * &z.invert().unwrap(), Cyclo::one(5));
    }

    fn arb_cyclo(n: u64) -> impl Strategy<Value = C> {
        let phi = euler_phi(normalize_conductor(n)) as usize;
        prop::collection::vec(-6i64..6, phi).prop_map(move |v| c(n, &v))
    }

    fn arb_pair() -> impl Strategy<Value = (u64, C, C)> {
        prop::sample::select(vec![3u64, 4, 5, 8, 9, 12, 15])
            .prop_flat_map(|n| (Just(n), arb_cyclo(n), arb_cyclo(n)))
    }

    proptest! {
        #[test]
        fn galois_is_a_homomorphism((n, a, b) in arb_pair(), jsel in 0usize..16) {
            let units = crate::arith::units(n);
            let j = units[jsel % units.len()] as i64;
            let sa = a.galois_apply(j).unwrap();
            let sb = b.galois_apply(j).unwrap();
            prop_assert_eq!((&a + &b).galois_apply(j).unwrap(), &sa + &sb);
            prop_assert_eq!((&a * &b).galois_apply(j).unwrap(), &sa * &sb);
            for &j2 in &units {
                let lhs = sa.galois_apply(j2 as i64).unwrap();
                let rhs = a.galois_apply((j as u64 * j2 % n) as i64).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn inverse_and_min_poly((_n, a, _b) in arb_pair()) {
            prop_assume!(!a.is_zero());
            let inv = a.invert().unwrap();
            prop_assert_eq!(&a * &inv, Cyclo::one(a.conductor()));
            prop_assert!(a.eval_poly(&a.min_poly()).is_zero());
        }

        #[test]
        fn embed_restrict_round_trip((n, a, _b) in arb_pair(), k in 1u64..4) {
            let m = n * k;
            let back = a.embed(m).unwrap().restrict(n).unwrap();
            prop_assert_eq!(back.coords(), a.coords());
        }
    }
}
