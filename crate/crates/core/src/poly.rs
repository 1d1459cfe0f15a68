//! Dense univariate polynomials over an exact (or floating) scalar field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::bigint_mod;
use crate::Field;

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Field> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `c · t^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// `t - r`.
    pub fn linear(r: T) -> Self {
        Poly::new(vec![-r, T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => {
                let inv = T::one() / lc.clone();
                self.scale(&inv)
            }
        }
    }

    pub fn derivative(&self) -> Self {
        let mut k = T::zero();
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        for c in self.coeffs.iter().skip(1) {
            k = k + T::one();
            out.push(c.clone() * k.clone());
        }
        Poly::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lc = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = rem[k].clone() / lc.clone();
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                rem[idx] = rem[idx].clone() - q.clone() * dc.clone();
            }
            quot[k - dd] = q;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Quotient if `divisor` divides `self` exactly.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`, monic: the same roots, each simple.
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Field> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Field> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Field> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Field> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Field + fmt::Display + Signed> fmt::Display for Poly<T> {
    /// Descending powers of `t`, e.g. `t^3 - 27`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{mag}*t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Polynomials over `Q`.
impl Poly<BigRational> {
    pub fn from_integers(coeffs: &[BigInt]) -> Self {
        Poly::new(
            coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    /// Whether every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// The primitive integer polynomial with positive leading coefficient
    /// that is a rational multiple of `self`.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        for c in &mut ints {
            *c = &*c / &content * &sign;
        }
        ints
    }

    /// Same result as [`Poly::gcd`], computed by a primitive remainder
    /// sequence over `Z`; the generic Euclidean version spends most of its
    /// time normalizing rationals once coefficients reach a few hundred bits.
    pub fn gcd_over_z(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return self.gcd(other);
        }
        let (mut a, mut b) = (self.primitive_integer(), other.primitive_integer());
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = primitive_part(pseudo_rem(a, &b));
            a = b;
            b = r;
        }
        Poly::from_integers(&a).monic()
    }

    /// [`Poly::squarefree_part`] via [`Poly::gcd_over_z`].
    pub fn squarefree_part_over_z(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd_over_z(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn is_squarefree_over_z(&self) -> bool {
        self.gcd_over_z(&self.derivative()).degree() == Some(0)
    }

    /// Reduction modulo a prime; `None` if some denominator vanishes mod `p`.
    pub fn reduce_mod(&self, p: u64) -> Option<Vec<u64>> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let den = bigint_mod(c.denom(), p);
            let inv = crate::arith::inv_mod(den, p)?;
            out.push(crate::arith::mul_mod(bigint_mod(c.numer(), p), inv, p));
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        Some(out)
    }
}

/// `lc(b)^k · a mod b` for the least `k` that keeps the arithmetic in `Z`.
fn pseudo_rem(mut a: Vec<BigInt>, b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lc = &b[db];
    while a.len() > db {
        let top = a.pop().expect("nonempty");
        if top.is_zero() {
            continue;
        }
        let shift = a.len() - db;
        for c in a.iter_mut() {
            *c *= lc;
        }
        for (i, bc) in b[..db].iter().enumerate() {
            a[shift + i] -= &top * bc;
        }
    }
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn primitive_part(mut a: Vec<BigInt>) -> Vec<BigInt> {
    let content = a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !content.is_zero() && !content.is_one() {
        for c in &mut a {
            *c = &*c / &content;
        }
    }
    a
}
