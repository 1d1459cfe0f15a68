//! Character tables by Dixon's modular method.
//!
//! Central characters are the common eigenvectors of the class matrices over
//! `F_p` with `p ≡ 1 (mod N)`, `N` the group exponent. Each value `χ(g)` is
//! then recovered exactly as a sum of `N`-th roots of unity from the values
//! of `χ` on the powers of `g`.

use std::cmp::Ordering;

use num_bigint::BigInt;

use crate::arith::next_prime_in_class;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::modp::Fp;
use crate::perm::{GroupTable, Perm};
use crate::{CycloNum, Rational};

/// Default ceiling on the group order for table computation.
pub const DEFAULT_CHARTAB_CAP: usize = 2000;

const MAX_PRIME_ATTEMPTS: usize = 64;

/// `χ(g)` as a multiset of eigenvalues: pairs `(e, m)` meaning `m·ζ_N^e`.
type Spectrum = Vec<(u64, u64)>;

#[derive(Clone, Debug)]
pub struct CharacterTable {
    exponent: u64,
    group_order: usize,
    class_reps: Vec<usize>,
    class_sizes: Vec<usize>,
    class_of: Vec<usize>,
    degrees: Vec<u64>,
    rows: Vec<Vec<CycloNum>>,
    spectra: Vec<Vec<Spectrum>>,
    prime: u64,
}

impl CharacterTable {
    /// Ambient conductor of every value (the group exponent).
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Representatives (element indices) of the columns, in the group's class
    /// order.
    pub fn class_reps(&self) -> &[usize] {
        &self.class_reps
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn rows(&self) -> &[Vec<CycloNum>] {
        &self.rows
    }

    pub fn value(&self, row: usize, class: usize) -> &CycloNum {
        &self.rows[row][class]
    }

    /// The prime the table was computed with.
    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Column of the table at the element with index `i`.
    pub fn column_at_index(&self, i: usize) -> Vec<CycloNum> {
        let c = self.class_of[i];
        self.rows.iter().map(|r| r[c].clone()).collect()
    }

    /// Column of the table at `g`.
    pub fn char_values_at(&self, group: &GroupTable, g: &Perm) -> Result<Vec<CycloNum>> {
        let i = group
            .index_of(g)
            .ok_or_else(|| Error::input(format!("{g} is not in the group")))?;
        Ok(self.column_at_index(i))
    }

    /// `Σ_c |c|·χ_i(c)·conj(χ_j(c)) = |G|·δ_ij`, checked exactly.
    pub fn verify_row_orthogonality(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            for j in i..n {
                let mut acc = vec![0i64; self.exponent as usize];
                for c in 0..n {
                    let w = self.class_sizes[c] as i64;
                    self.accumulate_product(&mut acc, &self.spectra[i][c], &self.spectra[j][c], w);
                }
                let want = if i == j { self.group_order as i64 } else { 0 };
                if !self.reduces_to(acc, want) {
                    return Err(Error::internal(format!(
                        "rows {i} and {j} of the character table are not orthogonal"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `Σ_i χ_i(c)·conj(χ_i(c')) = δ_cc'·|G|/|c|`, checked exactly.
    pub fn verify_column_orthogonality(&self) -> Result<()> {
        let n = self.len();
        for c in 0..n {
            for d in c..n {
                let mut acc = vec![0i64; self.exponent as usize];
                for row in &self.spectra {
                    self.accumulate_product(&mut acc, &row[c], &row[d], 1);
                }
                let want = if c == d {
                    (self.group_order / self.class_sizes[c]) as i64
                } else {
                    0
                };
                if !self.reduces_to(acc, want) {
                    return Err(Error::internal(format!(
                        "columns {c} and {d} of the character table are not orthogonal"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Adds `w·x·conj(y)` to `acc`, both sides given as root multisets.
    fn accumulate_product(&self, acc: &mut [i64], x: &Spectrum, y: &Spectrum, w: i64) {
        let n = self.exponent;
        for &(e1, m1) in x {
            for &(e2, m2) in y {
                acc[((e1 + n - e2) % n) as usize] += w * (m1 * m2) as i64;
            }
        }
    }

    fn reduces_to(&self, acc: Vec<i64>, want: i64) -> bool {
        let v = Cyclo::<i64>::from_poly_coeffs(self.exponent, acc);
        v.to_rational() == Some(want)
    }
}

/// Structure constants `(M_i)_{jk} = #{(u, v) ∈ C_i × C_j : uv = rep(C_k)}`,
/// one matrix per class.
pub fn class_matrices(group: &GroupTable) -> Vec<Vec<Vec<u64>>> {
    let classes = group.classes();
    let r = classes.len();
    classes
        .iter()
        .map(|ci| {
            let mut m = vec![vec![0u64; r]; r];
            for &u in &ci.members {
                let u_inv = group.inv(u);
                for (k, ck) in classes.iter().enumerate() {
                    let v = group.mul(u_inv, ck.representative);
                    m[group.class_of(v)][k] += 1;
                }
            }
            m
        })
        .collect()
}

/// The full character table of `group`, rows sorted with the trivial
/// character first and the rest by degree, then by values.
pub fn character_table(group: &GroupTable, cap: usize) -> Result<CharacterTable> {
    if group.order() > cap {
        return Err(Error::CapExceeded {
            what: "character table group order",
            cap,
            reached: group.order(),
        });
    }
    let exponent = group.exponent();
    let order = group.order() as u64;
    let mats = class_matrices(group);
    let start = 2 * (order as f64).sqrt().ceil() as u64 + 1;
    let mut p = next_prime_in_class(start.max(3), 1, exponent);
    for _ in 0..MAX_PRIME_ATTEMPTS {
        if let Some(table) = dixon(group, &mats, p) {
            return Ok(table);
        }
        p = next_prime_in_class(p + 1, 1, exponent);
    }
    Err(Error::internal(format!(
        "character table: no suitable prime found up to {p}"
    )))
}

/// One attempt at prime `p`; `None` if the eigenspaces do not separate or
/// the lifted values are inconsistent.
fn dixon(group: &GroupTable, mats: &[Vec<Vec<u64>>], p: u64) -> Option<CharacterTable> {
    let f = Fp::new(p);
    let classes = group.classes();
    let r = classes.len();
    let order = group.order() as u64;
    let exponent = group.exponent();

    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r)
        .map(|i| {
            let mut e = vec![0u64; r];
            e[i] = 1;
            e
        })
        .collect()];
    for m in mats.iter().skip(1) {
        if spaces.len() == r {
            break;
        }
        let mut next = Vec::with_capacity(r);
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            next.extend(split_space(&f, m, &basis)?);
        }
        spaces = next;
    }
    if spaces.len() != r {
        return None;
    }

    let inverse_class: Vec<usize> = classes
        .iter()
        .map(|c| group.class_of(group.inv(c.representative)))
        .collect();
    let sizes: Vec<usize> = classes.iter().map(|c| c.size()).collect();
    let z = f.pow(f.primitive_root(), (p - 1) / exponent);
    let max_degree = (order as f64).sqrt().floor() as u64 + 1;

    let mut rows = Vec::with_capacity(r);
    for space in spaces {
        let w = &space[0];
        if w[0] == 0 {
            return None;
        }
        let w0 = f.inv(w[0]);
        let w: Vec<u64> = w.iter().map(|&x| f.mul(x, w0)).collect();
        let s = (0..r).fold(0u64, |acc, k| {
            let t = f.mul(f.mul(w[k], w[inverse_class[k]]), f.inv(sizes[k] as u64 % p));
            f.add(acc, t)
        });
        if s == 0 {
            return None;
        }
        let d_sq = f.mul(order % p, f.inv(s));
        let d = (1..=max_degree).find(|&d| d * d % p == d_sq && order % d == 0)?;
        let values: Vec<u64> = (0..r)
            .map(|k| f.mul(f.mul(w[k], d % p), f.inv(sizes[k] as u64 % p)))
            .collect();
        let spectra = lift_row(group, &f, z, &values, d)?;
        rows.push((d, spectra));
    }
    Some(assemble(group, rows, p))
}

/// Splits an invariant subspace (rows of `basis`, in reduced echelon form)
/// into eigenspaces of `m`. `None` if `m` is not diagonalizable over `F_p` on
/// it.
fn split_space(f: &Fp, m: &[Vec<u64>], basis: &[Vec<u64>]) -> Option<Vec<Vec<Vec<u64>>>> {
    let d = basis.len();
    let pivots: Vec<usize> = basis
        .iter()
        .map(|b| {
            b.iter()
                .position(|&x| x != 0)
                .expect("basis rows are nonzero")
        })
        .collect();
    let images: Vec<Vec<u64>> = basis.iter().map(|b| f.mat_vec(m, b)).collect();
    // a[s][l] = coordinate s of m·b_l
    let a: Vec<Vec<u64>> = (0..d)
        .map(|s| (0..d).map(|l| images[l][pivots[s]]).collect())
        .collect();
    let roots = f.roots(&f.char_poly(&a));
    let mut out = Vec::with_capacity(roots.len());
    let mut total = 0;
    for lambda in roots {
        let mut shifted = a.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] = f.sub(row[i], lambda);
        }
        let coords = f.kernel(&shifted, d);
        total += coords.len();
        let mut vecs: Vec<Vec<u64>> = coords
            .iter()
            .map(|c| {
                let mut v = vec![0u64; basis[0].len()];
                for (&cl, b) in c.iter().zip(basis) {
                    if cl != 0 {
                        for (x, &y) in v.iter_mut().zip(b) {
                            *x = f.add(*x, f.mul(cl, y));
                        }
                    }
                }
                v
            })
            .collect();
        f.rref(&mut vecs);
        out.push(vecs);
    }
    (total == d).then_some(out)
}

/// Recovers each `χ(g_k)` as a multiset of `N`-th roots of unity:
/// the multiplicity of `ζ_o^m` is `o⁻¹ Σ_l χ(g^l) ζ_o^{-ml}`.
fn lift_row(group: &GroupTable, f: &Fp, z: u64, values: &[u64], d: u64) -> Option<Vec<Spectrum>> {
    let exponent = group.exponent();
    let mut out = Vec::with_capacity(values.len());
    for class in group.classes() {
        let g = class.representative;
        let o = group.element_order(g);
        let step = exponent / o;
        let zo = f.pow(z, step);
        let power_values: Vec<u64> = (0..o)
            .map(|l| values[group.class_of(group.pow(g, l))])
            .collect();
        let o_inv = f.inv(o % f.modulus());
        let zo_inv = f.inv(zo);
        let mut spectrum = Vec::new();
        let mut total = 0;
        for m in 0..o {
            let base = f.pow(zo_inv, m);
            let mut acc = 0;
            let mut t = 1;
            for &v in &power_values {
                acc = f.add(acc, f.mul(v, t));
                t = f.mul(t, base);
            }
            let mu = f.mul(acc, o_inv);
            if mu > d {
                return None;
            }
            if mu > 0 {
                spectrum.push((m * step, mu));
                total += mu;
            }
        }
        if total != d {
            return None;
        }
        out.push(spectrum);
    }
    Some(out)
}

fn to_cyclo(exponent: u64, spectrum: &Spectrum) -> CycloNum {
    let mut coeffs = vec![Rational::from_integer(BigInt::from(0)); exponent as usize];
    for &(e, m) in spectrum {
        coeffs[e as usize] += Rational::from_integer(BigInt::from(m));
    }
    Cyclo::from_poly_coeffs(exponent, coeffs)
}

fn assemble(group: &GroupTable, rows: Vec<(u64, Vec<Spectrum>)>, prime: u64) -> CharacterTable {
    let exponent = group.exponent();
    let mut rows: Vec<(u64, Vec<CycloNum>, Vec<Spectrum>)> = rows
        .into_iter()
        .map(|(d, s)| (d, s.iter().map(|x| to_cyclo(exponent, x)).collect(), s))
        .collect();
    let is_trivial = |s: &[Spectrum]| s.iter().all(|x| x.as_slice() == [(0, 1)]);
    rows.sort_by(|x, y| {
        is_trivial(&y.2)
            .cmp(&is_trivial(&x.2))
            .then(x.0.cmp(&y.0))
            .then_with(|| {
                x.1.iter()
                    .zip(&y.1)
                    .map(|(a, b)| a.lex_cmp(b))
                    .find(|o| *o != Ordering::Equal)
                    .unwrap_or(Ordering::Equal)
            })
    });
    let classes = group.classes();
    CharacterTable {
        exponent,
        group_order: group.order(),
        class_reps: classes.iter().map(|c| c.representative).collect(),
        class_sizes: classes.iter().map(|c| c.size()).collect(),
        class_of: (0..group.order()).map(|i| group.class_of(i)).collect(),
        degrees: rows.iter().map(|r| r.0).collect(),
        spectra: rows.iter().map(|r| r.2.clone()).collect(),
        rows: rows.into_iter().map(|r| r.1).collect(),
        prime,
    }
}
