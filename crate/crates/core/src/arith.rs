//! Small-integer number theory: totients, unit groups, primality, and
//! multi-modular reconstruction helpers.

use num_bigint::BigInt;
use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a.lcm(&b)
    }
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let cur = ds.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            ds.extend(cur.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Residues in `1..n` coprime to `n`, ascending. The unit group is trivial
/// for `n <= 2` and is then represented as `[1]`.
pub fn units(n: u64) -> Vec<u64> {
    if n <= 2 {
        return vec![1];
    }
    (1..n).filter(|&j| gcd(j, n) == 1).collect()
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `p >= start` with `p ≡ residue (mod modulus)`.
pub fn next_prime_in_class(start: u64, residue: u64, modulus: u64) -> u64 {
    let modulus = modulus.max(1);
    let residue = residue % modulus;
    let mut p = start - start % modulus + residue;
    if p < start {
        p += modulus;
    }
    loop {
        if is_prime(p) {
            return p;
        }
        p += modulus;
    }
}

/// Word-size primes used for multi-modular computations, descending from
/// just below 2^62.
pub struct LargePrimes {
    next: u64,
}

impl LargePrimes {
    pub fn new() -> Self {
        LargePrimes {
            next: (1u64 << 62) - 1,
        }
    }
}

impl Default for LargePrimes {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for LargePrimes {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while !is_prime(self.next) {
            self.next -= 2;
        }
        let p = self.next;
        self.next -= 2;
        Some(p)
    }
}

/// Inverse of `a` modulo prime-or-coprime `m`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    if t < 0 {
        t += m as i128;
    }
    Some(t as u64)
}

/// Residue of a big integer modulo a word-size modulus, in `0..m`.
pub fn bigint_mod(x: &BigInt, m: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(m));
    u64::try_from(r).expect("residue fits in u64")
}

/// Incremental Chinese remaindering of coefficient vectors.
#[derive(Debug, Clone)]
pub struct Crt {
    modulus: BigInt,
    values: Vec<BigInt>,
}

impl Crt {
    pub fn new(residues: &[u64], p: u64) -> Self {
        Crt {
            modulus: BigInt::from(p),
            values: residues.iter().map(|&r| BigInt::from(r)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// Fold in residues modulo a new prime `p` coprime to the current modulus.
    pub fn absorb(&mut self, residues: &[u64], p: u64) {
        assert_eq!(residues.len(), self.values.len(), "CRT length mismatch");
        let m_mod_p = bigint_mod(&self.modulus, p);
        let m_inv = inv_mod(m_mod_p, p).expect("CRT moduli must be coprime");
        for (v, &r) in self.values.iter_mut().zip(residues) {
            let v_mod_p = bigint_mod(v, p);
            let delta = mul_mod((r + p - v_mod_p) % p, m_inv, p);
            *v += &self.modulus * BigInt::from(delta);
        }
        self.modulus *= BigInt::from(p);
    }

    /// Values in the symmetric range `(-M/2, M/2]`.
    pub fn symmetric(&self) -> Vec<BigInt> {
        let half = &self.modulus >> 1;
        self.values
            .iter()
            .map(|v| {
                if v > &half {
                    v - &self.modulus
                } else {
                    v.clone()
                }
            })
            .collect()
    }
}

/// `(b + 1)^d` as a big integer; a coarse bound on the coefficients of a
/// monic degree-`d` polynomial whose roots have modulus at most `b`.
pub fn root_coefficient_bound(b: u64, d: usize) -> BigInt {
    num_traits::pow(BigInt::from(b + 1), d)
}
