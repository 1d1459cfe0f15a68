//! Factorization of monic squarefree integer polynomials over `Q`
//! (Zassenhaus: factor mod a small prime, Hensel-lift, recombine).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{bigint_mod, is_prime};
use crate::modp::Fp;

/// Number of candidate primes tried; the one with fewest modular factors
/// is kept.
const PRIME_CANDIDATES: usize = 8;

/// Irreducible monic factors over `Q` of a monic squarefree `f` (ascending
/// coefficients), sorted by degree then coefficients.
pub fn factor_monic_squarefree(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let f = trim(f.to_vec());
    assert!(
        f.last().is_some_and(One::is_one),
        "polynomial must be monic"
    );
    let n = f.len() - 1;
    if n <= 1 {
        return if n == 1 { vec![f] } else { Vec::new() };
    }
    let (p, modular) = choose_prime(&f);
    let mut out = if modular.len() == 1 {
        vec![f]
    } else {
        let bound = factor_coefficient_bound(&f);
        let mut k = 1u32;
        let mut pk = BigInt::from(p);
        while pk <= &bound * 2 {
            pk *= p;
            k += 1;
        }
        let lifted = hensel_lift(&f, &modular, p, k);
        recombine(f, lifted, &pk)
    };
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn trim(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

/// Among the first good primes, the one giving the fewest factors.
fn choose_prime(f: &[BigInt]) -> (u64, Vec<Vec<u64>>) {
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    let mut p = 3u64;
    while tried < PRIME_CANDIDATES || best.is_none() {
        p += 2;
        if !is_prime(p) {
            continue;
        }
        let fp = Fp::new(p);
        let reduced = fp.trim(f.iter().map(|c| bigint_mod(c, p)).collect());
        if reduced.len() != f.len() || !fp.is_squarefree(&reduced) {
            continue;
        }
        tried += 1;
        let factors = fp.factor_squarefree(&reduced);
        if best.as_ref().is_none_or(|(_, b)| factors.len() < b.len()) {
            let done = factors.len() == 1;
            best = Some((p, factors));
            if done {
                break;
            }
        }
    }
    best.unwrap()
}

/// Bound on the coefficients of any monic factor: every root has modulus at
/// most `R = 2·max_i |a_{n-i}|^{1/i}`, so coefficients are at most `(1+R)^n`.
fn factor_coefficient_bound(f: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    let mut r = BigInt::zero();
    for i in 1..=n {
        let a = f[n - i].abs();
        let mut root = a.nth_root(i as u32);
        if root.pow(i as u32) < a {
            root += 1;
        }
        r = r.max(root);
    }
    let base: BigInt = r * 2 + 1;
    base.pow(n as u32)
}

/// Lifts `f ≡ Π g_i (mod p)` to a factorization modulo `p^k`, splitting the
/// list in halves recursively.
fn hensel_lift(f: &[BigInt], factors: &[Vec<u64>], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        let pk = BigInt::from(p).pow(k);
        return vec![f.iter().map(|c| c.mod_floor(&pk)).collect()];
    }
    let fp = Fp::new(p);
    let mid = factors.len() / 2;
    let prod = |fs: &[Vec<u64>]| fs.iter().fold(vec![1u64], |acc, g| fp.poly_mul(&acc, g));
    let g0 = prod(&factors[..mid]);
    let h0 = prod(&factors[mid..]);
    let (g, h) = lift_pair(f, &g0, &h0, p, k);
    let mut out = hensel_lift(&g, &factors[..mid], p, k);
    out.extend(hensel_lift(&h, &factors[mid..], p, k));
    out
}

/// Linear Hensel lifting of `f ≡ g·h (mod p)` with `g`, `h` monic and
/// coprime mod `p`.
fn lift_pair(f: &[BigInt], g0: &[u64], h0: &[u64], p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let fp = Fp::new(p);
    let (s, t) = xgcd_mod(&fp, g0, h0);
    let to_big = |v: &[u64]| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
    let mut g = to_big(g0);
    let mut h = to_big(h0);
    let big_p = BigInt::from(p);
    let mut pj = big_p.clone();
    for _ in 1..k {
        // e = (f - g h) / p^j mod p
        let gh = mul_int(&g, &h);
        let e: Vec<u64> = fp.trim(
            (0..f.len())
                .map(|i| {
                    let d = &f[i] - gh.get(i).cloned().unwrap_or_default();
                    debug_assert!((&d % &pj).is_zero());
                    bigint_mod(&(d / &pj), p)
                })
                .collect(),
        );
        if !e.is_empty() {
            let (q, dg) = fp.poly_divrem(&fp.poly_mul(&e, &t), g0);
            let dh = fp.poly_add(&fp.poly_mul(&e, &s), &fp.poly_mul(h0, &q));
            add_scaled(&mut g, &dg, &pj);
            add_scaled(&mut h, &dh, &pj);
        }
        pj *= &big_p;
    }
    (g, h)
}

fn add_scaled(a: &mut Vec<BigInt>, b: &[u64], scale: &BigInt) {
    if a.len() < b.len() {
        a.resize(b.len(), BigInt::zero());
    }
    for (x, &y) in a.iter_mut().zip(b) {
        *x += scale * y;
    }
}

/// `s, t` with `s·a + t·b = 1 (mod p)` for coprime `a`, `b`.
fn xgcd_mod(fp: &Fp, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp.poly_divrem(&r0, &r1);
        let s2 = fp.poly_sub(&s0, &fp.poly_mul(&q, &s1));
        let t2 = fp.poly_sub(&t0, &fp.poly_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    assert_eq!(r0.len(), 1, "factors must be coprime mod p");
    let inv = fp.inv(r0[0]);
    (fp.poly_scale(&s0, inv), fp.poly_scale(&t0, inv))
}

fn mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic integer polynomial, if it divides.
fn div_exact_int(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return None;
    }
    let mut rem = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (db..rem.len()).rev() {
        let c = std::mem::take(&mut rem[k]);
        if c.is_zero() {
            continue;
        }
        for (i, bc) in b.iter().enumerate().take(db) {
            rem[k - db + i] -= &c * bc;
        }
        q[k - db] = c;
    }
    rem.iter().all(Zero::is_zero).then_some(q)
}

fn symmetric_mod(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half: BigInt = m / 2;
    v.iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect()
}

/// Tries products of lifted factors, smallest subsets first, as true
/// factors over `Z`.
fn recombine(mut f: Vec<BigInt>, mut lifted: Vec<Vec<BigInt>>, pk: &BigInt) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in Subsets::new(lifted.len(), size) {
            let mut cand = vec![BigInt::one()];
            for &i in &subset {
                cand = symmetric_mod(&mul_int(&cand, &lifted[i]), pk);
            }
            if let Some(q) = div_exact_int(&f, &cand) {
                out.push(cand);
                f = q;
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    out.push(f);
    out
}

/// Lexicographic `k`-subsets of `0..n`.
struct Subsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Subsets {
    fn new(n: usize, k: usize) -> Self {
        Subsets {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let k = cur.len();
        let mut nxt = cur.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if nxt[i] < self.n - k + i {
                nxt[i] += 1;
                for j in i + 1..k {
                    nxt[j] = nxt[j - 1] + 1;
                }
                self.current = Some(nxt);
                break;
            }
        }
        Some(cur)
    }
}
