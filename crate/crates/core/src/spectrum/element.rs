use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::perm::GroupTable;

/// Default ceiling on `|G|` for materializing the `|G|² × |G|²` action
/// matrix.
pub const DEFAULT_DENSE_CAP: usize = 24;

/// An element of `Z[G×G]` with nonnegative coefficients, keyed by pairs of
/// element indices.
#[derive(Clone, Debug)]
pub struct AlgebraElement<'g> {
    group: &'g GroupTable,
    support: BTreeMap<(usize, usize), u64>,
}

/// Outcome of a verification: `Ok` or a human-readable witness.
pub type Verdict = std::result::Result<(), String>;

impl<'g> AlgebraElement<'g> {
    pub fn new(group: &'g GroupTable, support: BTreeMap<(usize, usize), u64>) -> Self {
        AlgebraElement { group, support }
    }

    pub fn group(&self) -> &'g GroupTable {
        self.group
    }

    pub fn support(&self) -> &BTreeMap<(usize, usize), u64> {
        &self.support
    }

    pub fn coefficient_sum(&self) -> u64 {
        self.support.values().sum()
    }

    /// Left multiplication by `(h, h)` commutes with `x` iff conjugating
    /// each support pair by `(h, h)` preserves the coefficient map; checked
    /// for every generator of the group.
    pub fn verify_commutation(&self) -> Verdict {
        let g = self.group;
        for &h in g.generators() {
            for (&(s, t), &c) in &self.support {
                let image = (g.conjugate_idx(s, h), g.conjugate_idx(t, h));
                if self.support.get(&image) != Some(&c) {
                    return Err(format!(
                        "conjugating ({}, {}) by {} gives ({}, {}) with coefficient {:?}, expected {c}",
                        g.element(s),
                        g.element(t),
                        g.element(h),
                        g.element(image.0),
                        g.element(image.1),
                        self.support.get(&image)
                    ));
                }
            }
        }
        Ok(())
    }

    /// Sparse columns of left multiplication on `Q[G×G]`: basis vector
    /// `(u, v)` (index `u·|G| + v`) maps to `Σ c·(su, tv)`.
    pub fn action_columns(&self) -> Vec<Vec<(usize, u64)>> {
        let g = self.group;
        let n = g.order();
        let mut cols = Vec::with_capacity(n * n);
        for u in 0..n {
            for v in 0..n {
                let mut col: Vec<(usize, u64)> = self
                    .support
                    .iter()
                    .map(|(&(s, t), &c)| (g.mul(s, u) * n + g.mul(t, v), c))
                    .collect();
                col.sort_unstable();
                cols.push(col);
            }
        }
        cols
    }

    /// The dense action matrix, row-major.
    pub fn dense_action_matrix(&self, cap: usize) -> Result<Vec<Vec<u64>>> {
        let n = self.group.order();
        if n > cap {
            return Err(Error::CapExceeded {
                what: "group order for the dense strategy",
                cap,
                reached: n,
            });
        }
        let dim = n * n;
        let mut m = vec![vec![0u64; dim]; dim];
        for (j, col) in self.action_columns().into_iter().enumerate() {
            for (i, c) in col {
                m[i][j] += c;
            }
        }
        Ok(m)
    }
}

/// `x = Σ_g (g⁻¹ag, g⁻¹bg)` for the first two generators `a`, `b` of the
/// group, with multiplicities collected.
pub fn conjugation_sum(group: &GroupTable) -> Result<AlgebraElement<'_>> {
    let gens = group.generators();
    if gens.len() != 2 {
        return Err(Error::internal(
            "the monodromy group must be generated by exactly (a, b)",
        ));
    }
    let (a, b) = (gens[0], gens[1]);
    let mut support = BTreeMap::new();
    for g in 0..group.order() {
        *support
            .entry((group.conjugate_idx(a, g), group.conjugate_idx(b, g)))
            .or_insert(0) += 1;
    }
    Ok(AlgebraElement::new(group, support))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dessin::parse_dessin;
    use crate::perm::DEFAULT_GROUP_CAP;

    fn group_of(s: &str) -> GroupTable {
        parse_dessin(s)
            .unwrap()
            .monodromy_group(DEFAULT_GROUP_CAP)
            .unwrap()
    }

    #[test]
    fn support_examples() {
        let g = group_of("n=1 a=() b=()");
        let x = conjugation_sum(&g).unwrap();
        assert_eq!(x.support().iter().collect::<Vec<_>>(), vec![(&(0, 0), &1)]);

        let g = group_of("n=4 a=(1 2 3 4) b=(1 2 3 4)");
        let x = conjugation_sum(&g).unwrap();
        let a = g.generators()[0];
        assert_eq!(x.support().iter().collect::<Vec<_>>(), vec![(&(a, a), &4)]);
    }

    /// Brute-force recount of the S3 support over all six conjugators.
    #[test]
    fn s3_support_has_trivial_centralizer() {
        let g = group_of("n=3 a=(1 2 3) b=(1 2)");
        let x = conjugation_sum(&g).unwrap();
        let a = g.element(g.generators()[0]).clone();
        let b = g.element(g.generators()[1]).clone();
        let mut pairs: Vec<_> = g
            .elements()
            .iter()
            .map(|h| (a.conjugate(h).unwrap(), b.conjugate(h).unwrap()))
            .collect();
        pairs.sort();
        pairs.dedup();
        assert_eq!(pairs.len(), 6);
        assert_eq!(x.support().len(), 6);
        assert!(x.support().values().all(|&c| c == 1));
        assert_eq!(x.coefficient_sum(), 6);
        assert!(x.verify_commutation().is_ok());
    }

    #[test]
    fn support_size_times_centralizer_is_order() {
        for s in [
            "n=4 a=(1 2 3 4) b=(1 3)",
            "n=4 a=(1 2 3) b=(2 3 4)",
            "n=8 a=(1 3 2 4)(5 7 6 8) b=(1 5 2 6)(3 8 4 7)",
            "n=5 a=(1 2 3 4 5) b=(1 2 3)",
        ] {
            let g = group_of(s);
            let x = conjugation_sum(&g).unwrap();
            let (a, b) = (g.generators()[0], g.generators()[1]);
            let centralizer = (0..g.order())
                .filter(|&h| g.conjugate_idx(a, h) == a && g.conjugate_idx(b, h) == b)
                .count() as u64;
            assert!(x.support().values().all(|&c| c == centralizer), "{s}");
            assert_eq!(x.support().len() as u64 * centralizer, g.order() as u64);
            assert!(x.verify_commutation().is_ok());
        }
    }

    #[test]
    fn commutation_failure_has_witness() {
        let g = group_of("n=3 a=(1 2 3) b=(1 2)");
        let (a, b) = (g.generators()[0], g.generators()[1]);
        let lone = AlgebraElement::new(&g, [((a, b), 1)].into());
        let err = lone.verify_commutation().unwrap_err();
        assert!(err.contains("conjugating"), "{err}");
    }

    #[test]
    fn dense_matrix_examples() {
        let g = group_of("n=1 a=() b=()");
        let x = conjugation_sum(&g).unwrap();
        assert_eq!(x.dense_action_matrix(24).unwrap(), vec![vec![1]]);

        // x = 2·(g, g): twice the permutation matrix of (u, v) ↦ (gu, gv)
        let g = group_of("n=2 a=(1 2) b=(1 2)");
        let x = conjugation_sum(&g).unwrap();
        let m = x.dense_action_matrix(24).unwrap();
        let s = g.generators()[0];
        for u in 0..2 {
            for v in 0..2 {
                let col = u * 2 + v;
                let row = g.mul(s, u) * 2 + g.mul(s, v);
                for r in 0..4 {
                    assert_eq!(m[r][col], if r == row { 2 } else { 0 });
                }
            }
        }

        let g = group_of("n=4 a=(1 2 3 4) b=(1 3)");
        let x = conjugation_sum(&g).unwrap();
        let m = x.dense_action_matrix(24).unwrap();
        let order = g.order() as u64;
        for i in 0..m.len() {
            assert_eq!(m[i].iter().sum::<u64>(), order);
            assert_eq!(m.iter().map(|r| r[i]).sum::<u64>(), order);
        }
        assert!(matches!(
            x.dense_action_matrix(4),
            Err(Error::CapExceeded { .. })
        ));
    }
}
