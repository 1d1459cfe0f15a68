//! Arithmetic in `F_p` for word-size primes: polynomials, root finding,
//! factorization of squarefree polynomials, and small dense linear algebra.
//!
//! Polynomials are `Vec<u64>` in ascending degree with no trailing zeros.

use crate::arith::{inv_mod, mul_mod, pow_mod};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    p: u64,
}

/// splitmix64; the fixed seed keeps every splitting decision reproducible.
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

const SPLIT_SEED: u64 = 0x5EED_D355_1A5E_0001;

impl Fp {
    pub fn new(p: u64) -> Self {
        debug_assert!(crate::arith::is_prime(p));
        Fp { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    pub fn inv(&self, a: u64) -> u64 {
        inv_mod(a, self.p).expect("inverse of zero in F_p")
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }

    /// Reduces a signed integer.
    pub fn from_i64(&self, x: i64) -> u64 {
        (x as i128).rem_euclid(self.p as i128) as u64
    }

    /// Symmetric lift to `(-p/2, p/2]`.
    pub fn to_signed(&self, a: u64) -> i128 {
        if a > self.p / 2 {
            a as i128 - self.p as i128
        } else {
            a as i128
        }
    }

    /// A generator of the multiplicative group.
    pub fn primitive_root(&self) -> u64 {
        if self.p == 2 {
            return 1;
        }
        let factors = crate::arith::factorize(self.p - 1);
        (2..self.p)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&(q, _)| self.pow(g, (self.p - 1) / q) != 1)
            })
            .expect("primitive root exists")
    }

    // ---- polynomials ----

    pub fn trim(&self, mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn poly_add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|k| self.add(*a.get(k).unwrap_or(&0), *b.get(k).unwrap_or(&0)))
            .collect();
        self.trim(out)
    }

    pub fn poly_sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|k| self.sub(*a.get(k).unwrap_or(&0), *b.get(k).unwrap_or(&0)))
            .collect();
        self.trim(out)
    }

    pub fn poly_scale(&self, a: &[u64], c: u64) -> Vec<u64> {
        self.trim(a.iter().map(|&x| self.mul(x, c)).collect())
    }

    pub fn poly_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] = (acc[i + j] + x as u128 * y as u128) % p;
            }
        }
        self.trim(acc.into_iter().map(|v| v as u64).collect())
    }

    pub fn poly_divrem(&self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        assert!(!b.is_empty(), "polynomial division by zero");
        let db = b.len() - 1;
        if a.len() <= db {
            return (Vec::new(), a.to_vec());
        }
        let inv_lc = self.inv(b[db]);
        let mut rem = a.to_vec();
        let mut quot = vec![0u64; a.len() - db];
        for k in (db..rem.len()).rev() {
            let c = rem[k];
            if c == 0 {
                continue;
            }
            let q = self.mul(c, inv_lc);
            quot[k - db] = q;
            for (i, &bc) in b.iter().enumerate() {
                let idx = k - db + i;
                rem[idx] = self.sub(rem[idx], self.mul(q, bc));
            }
        }
        rem.truncate(db);
        (self.trim(quot), self.trim(rem))
    }

    pub fn poly_rem(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.poly_divrem(a, b).1
    }

    pub fn poly_monic(&self, a: &[u64]) -> Vec<u64> {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => self.poly_scale(a, self.inv(lc)),
        }
    }

    pub fn poly_gcd(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        self.poly_monic(&a)
    }

    pub fn poly_lcm(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let g = self.poly_gcd(a, b);
        let (q, _) = self.poly_divrem(&self.poly_mul(a, b), &g);
        self.poly_monic(&q)
    }

    pub fn poly_deriv(&self, a: &[u64]) -> Vec<u64> {
        let out = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| self.mul(c, k as u64 % self.p))
            .collect();
        self.trim(out)
    }

    pub fn poly_eval(&self, a: &[u64], x: u64) -> u64 {
        a.iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    pub fn poly_mulmod(&self, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
        self.poly_rem(&self.poly_mul(a, b), m)
    }

    pub fn poly_powmod(&self, base: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
        let mut acc = self.poly_rem(&[1], m);
        let mut b = self.poly_rem(base, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mulmod(&acc, &b, m);
            }
            b = self.poly_mulmod(&b, &b, m);
            e >>= 1;
        }
        acc
    }

    pub fn is_squarefree(&self, f: &[u64]) -> bool {
        self.poly_gcd(f, &self.poly_deriv(f)).len() == 1
    }

    /// Whether `f` divides `t^p - t`, i.e. splits into distinct linear
    /// factors over `F_p`.
    pub fn splits_completely(&self, f: &[u64]) -> bool {
        if f.len() <= 1 {
            return true;
        }
        let tp = self.poly_powmod(&[0, 1], self.p, f);
        self.poly_rem(&self.poly_sub(&tp, &[0, 1]), f).is_empty()
    }

    /// Distinct roots of `f` in `F_p`, ascending.
    pub fn roots(&self, f: &[u64]) -> Vec<u64> {
        let f = self.poly_monic(f);
        if f.len() <= 1 {
            return Vec::new();
        }
        if self.p < 64 {
            return (0..self.p)
                .filter(|&x| self.poly_eval(&f, x) == 0)
                .collect();
        }
        let tp = self.poly_powmod(&[0, 1], self.p, &f);
        let g = self.poly_gcd(&f, &self.poly_sub(&tp, &[0, 1]));
        let mut rng = SplitMix(SPLIT_SEED);
        let mut out: Vec<u64> = self
            .equal_degree_split(g, 1, &mut rng)
            .into_iter()
            .map(|lin| self.neg(lin[0]))
            .collect();
        out.sort_unstable();
        out
    }

    /// Splits a monic product of distinct irreducibles of degree `d` into
    /// its factors (odd `p`).
    fn equal_degree_split(&self, f: Vec<u64>, d: usize, rng: &mut SplitMix) -> Vec<Vec<u64>> {
        let n = f.len() - 1;
        if n == 0 {
            return Vec::new();
        }
        if n == d {
            return vec![f];
        }
        loop {
            let a: Vec<u64> = self.trim((0..n).map(|_| rng.next() % self.p).collect());
            if a.len() <= 1 {
                continue;
            }
            // a^((p^d - 1)/2) = (a · a^p · … · a^(p^(d-1)))^((p-1)/2)
            let mut frob = a.clone();
            let mut norm = a.clone();
            for _ in 1..d {
                frob = self.poly_powmod(&frob, self.p, &f);
                norm = self.poly_mulmod(&norm, &frob, &f);
            }
            let h = self.poly_powmod(&norm, (self.p - 1) / 2, &f);
            let g = self.poly_gcd(&f, &self.poly_sub(&h, &[1]));
            if g.len() > 1 && g.len() < f.len() {
                let (q, _) = self.poly_divrem(&f, &g);
                let mut out = self.equal_degree_split(g, d, rng);
                out.extend(self.equal_degree_split(self.poly_monic(&q), d, rng));
                return out;
            }
        }
    }

    /// Monic irreducible factors of a squarefree `f` (odd `p`), sorted by
    /// degree then coefficients.
    pub fn factor_squarefree(&self, f: &[u64]) -> Vec<Vec<u64>> {
        assert!(self.p > 2, "factorization requires an odd prime");
        let mut f = self.poly_monic(f);
        let mut rng = SplitMix(SPLIT_SEED);
        let mut out = Vec::new();
        let mut h = vec![0, 1];
        let mut d = 0;
        while f.len() > 1 {
            d += 1;
            if 2 * d > f.len() - 1 {
                out.push(f.clone());
                break;
            }
            h = self.poly_powmod(&h, self.p, &f);
            let g = self.poly_gcd(&f, &self.poly_sub(&h, &[0, 1]));
            if g.len() > 1 {
                let (q, _) = self.poly_divrem(&f, &g);
                f = self.poly_monic(&q);
                h = self.poly_rem(&h, &f);
                out.extend(self.equal_degree_split(g, d, &mut rng));
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    // ---- dense matrices (row-major) ----

    pub fn mat_vec(&self, m: &[Vec<u64>], v: &[u64]) -> Vec<u64> {
        m.iter()
            .map(|row| {
                let s: u128 = row
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u128 * b as u128 % self.p as u128)
                    .sum();
                (s % self.p as u128) as u64
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&self, m: &mut [Vec<u64>]) -> Vec<usize> {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
                continue;
            };
            m.swap(r, pr);
            let inv = self.inv(m[r][c]);
            for x in m[r].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for i in 0..rows {
                if i != r && m[i][c] != 0 {
                    let f = m[i][c];
                    for j in 0..cols {
                        let v = self.mul(f, m[r][j]);
                        m[i][j] = self.sub(m[i][j], v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Basis of the right kernel `{v : m v = 0}`.
    pub fn kernel(&self, m: &[Vec<u64>], cols: usize) -> Vec<Vec<u64>> {
        let mut a = m.to_vec();
        let pivots = self.rref(&mut a);
        let mut basis = Vec::new();
        for free in (0..cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u64; cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = self.neg(a[r][free]);
            }
            basis.push(v);
        }
        basis
    }

    /// Characteristic polynomial `det(tI - m)` via Hessenberg reduction.
    pub fn char_poly(&self, m: &[Vec<u64>]) -> Vec<u64> {
        let n = m.len();
        let mut h: Vec<Vec<u64>> = m.to_vec();
        for j in 0..n.saturating_sub(2) {
            let Some(piv) = (j + 1..n).find(|&i| h[i][j] != 0) else {
                continue;
            };
            if piv != j + 1 {
                h.swap(piv, j + 1);
                for row in h.iter_mut() {
                    row.swap(piv, j + 1);
                }
            }
            let inv = self.inv(h[j + 1][j]);
            for i in j + 2..n {
                let u = self.mul(h[i][j], inv);
                if u == 0 {
                    continue;
                }
                for k in 0..n {
                    let v = self.mul(u, h[j + 1][k]);
                    h[i][k] = self.sub(h[i][k], v);
                }
                for row in h.iter_mut() {
                    let v = self.mul(u, row[i]);
                    row[j + 1] = self.add(row[j + 1], v);
                }
            }
        }
        // p_k = charpoly of leading k×k block.
        let mut polys: Vec<Vec<u64>> = vec![vec![1]];
        for k in 0..n {
            let mut pk = self.poly_mul(&[self.neg(h[k][k]), 1], &polys[k]);
            let mut prod = 1u64;
            for i in (0..k).rev() {
                prod = self.mul(prod, h[i + 1][i]);
                if prod == 0 {
                    break;
                }
                let c = self.mul(prod, h[i][k]);
                pk = self.poly_sub(&pk, &self.poly_scale(&polys[i], c));
            }
            polys.push(pk);
        }
        polys.pop().unwrap()
    }
}

/// Incremental detection of the first linear dependency in a sequence of
/// vectors over `F_p`, tracking each reduced vector as a combination of the
/// originals.
#[derive(Debug, Clone)]
pub struct DependencyTracker {
    field: Fp,
    rows: Vec<(usize, Vec<u64>, Vec<u64>)>,
}

impl DependencyTracker {
    pub fn new(field: Fp) -> Self {
        DependencyTracker {
            field,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds the next vector `v_k` (with `k = rank()`); if it is dependent on
    /// the earlier ones, returns the monic relation `c` with
    /// `Σ c_i v_i = 0` and `c_k = 1`.
    pub fn push(&mut self, mut v: Vec<u64>) -> Option<Vec<u64>> {
        let f = self.field;
        let k = self.rows.len();
        let mut comb = vec![0u64; k + 1];
        comb[k] = 1;
        for (pivot, row, rc) in &self.rows {
            let c = v[*pivot];
            if c == 0 {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(row) {
                if y != 0 {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
            for (x, &y) in comb.iter_mut().zip(rc) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => Some(comb),
            Some(pivot) => {
                let inv = f.inv(v[pivot]);
                for x in v.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                for x in comb.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                self.rows.push((pivot, v, comb));
                None
            }
        }
    }
}

/// Reduces `v` against an echelon basis; returns the residue.
pub(crate) fn reduce_against(f: &Fp, basis: &[(usize, Vec<u64>)], mut v: Vec<u64>) -> Vec<u64> {
    for (pivot, row) in basis {
        let c = v[*pivot];
        if c == 0 {
            continue;
        }
        for (x, &y) in v.iter_mut().zip(row) {
            if y != 0 {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_roots_of_unity_mod_7() {
        let f = Fp::new(7);
        assert_eq!(f.roots(&[1, 1, 1]), vec![2, 4]);
        assert!(f.splits_completely(&[1, 1, 1]));
        assert!(!Fp::new(5).splits_completely(&[1, 1, 1]));
        assert!(Fp::new(3).splits_completely(&[2, 1]));
        assert!(Fp::new(5).splits_completely(&[0, 4, 1]));
    }

    #[test]
    fn roots_large_prime() {
        let p = 1_000_000_007;
        let f = Fp::new(p);
        let roots = [3u64, 17, 123456, 999_999_000];
        let poly = roots
            .iter()
            .fold(vec![1u64], |acc, &r| f.poly_mul(&acc, &[f.neg(r), 1]));
        let mut expect = roots.to_vec();
        expect.sort_unstable();
        assert_eq!(f.roots(&poly), expect);
        // x^2 + 1 has no roots when p ≡ 3 mod 4
        assert!(Fp::new(1_000_000_007).roots(&[1, 0, 1]).is_empty());
    }

    #[test]
    fn factorization_mod_p() {
        let f = Fp::new(101);
        // (t^2 + 2)(t - 5)(t^3 + t + 1) is squarefree mod 101
        let a = [2, 0, 1];
        let b = [f.neg(5), 1];
        let c = [1, 1, 0, 1];
        let prod = f.poly_mul(&f.poly_mul(&a, &b), &c);
        let factors = f.factor_squarefree(&prod);
        let back = factors
            .iter()
            .fold(vec![1u64], |acc, g| f.poly_mul(&acc, g));
        assert_eq!(back, prod);
        for g in &factors {
            assert_eq!(f.factor_squarefree(g).len(), 1);
        }
        let degs: usize = factors.iter().map(|g| g.len() - 1).sum();
        assert_eq!(degs, 6);
    }

    #[test]
    fn char_poly_matches_small_cases() {
        let f = Fp::new(1_000_003);
        // [[2,1],[1,2]] -> t^2 - 4t + 3
        let m = vec![vec![2, 1], vec![1, 2]];
        assert_eq!(f.char_poly(&m), vec![3, f.neg(4), 1]);
        // companion of t^3 - 2t + 5
        let c = vec![vec![0, 0, f.neg(5)], vec![1, 0, 2], vec![0, 1, 0]];
        assert_eq!(f.char_poly(&c), vec![5, f.neg(2), 0, 1]);
    }

    #[test]
    fn kernel_and_dependencies() {
        let f = Fp::new(13);
        let m = vec![vec![1, 2, 3], vec![2, 4, 6]];
        let k = f.kernel(&m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(f.mat_vec(&m, v).iter().all(|&x| x == 0));
        }
        let mut t = DependencyTracker::new(f);
        assert!(t.push(vec![1, 0, 0]).is_none());
        assert!(t.push(vec![0, 1, 0]).is_none());
        let rel = t.push(vec![2, 3, 0]).unwrap();
        assert_eq!(rel, vec![f.neg(2), f.neg(3), 1]);
    }

    #[test]
    fn primitive_roots() {
        let f = Fp::new(7);
        assert_eq!(f.primitive_root(), 3);
        let f = Fp::new(61);
        let g = f.primitive_root();
        assert_eq!((1..60).filter(|&k| f.pow(g, k) == 1).count(), 0);
    }
}
