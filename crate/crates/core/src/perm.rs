//! Permutations of `{0..n-1}` and fully enumerated permutation groups.
//!
//! Composition convention: `p.compose(q)` is the map `i ↦ p(q(i))`, i.e. `q`
//! is applied first. Every derived quantity in the crate (conjugates, face
//! permutations, the group-algebra action) uses this convention.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::arith::lcm;
use crate::error::{Error, Result};

/// Default ceiling on the number of elements enumerated by [`enumerate_group`].
pub const DEFAULT_GROUP_CAP: usize = 5000;

/// Groups up to this order keep a materialized multiplication table.
pub const MUL_TABLE_LIMIT: usize = 512;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::input("permutation degree must be at least 1"));
        }
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::input(format!(
                    "images {images:?} do not form a bijection of 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation from disjoint 0-based cycles; points not mentioned
    /// are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("permutation degree must be at least 1"));
        }
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= n {
                    return Err(Error::input(format!("point {} out of range 1..{n}", x + 1)));
                }
                if used[x] {
                    return Err(Error::input(format!("point {} appears twice", x + 1)));
                }
                used[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    fn check_degree(&self, other: &Perm) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(())
    }

    /// `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        self.check_degree(other)?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Perm) -> Perm {
        Perm {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Perm { images }
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate(&self, g: &Perm) -> Result<Perm> {
        self.check_degree(g)?;
        Ok(g.inverse().compose_unchecked(&self.compose_unchecked(g)))
    }

    pub fn pow(&self, k: u64) -> Perm {
        let mut acc = Perm::identity(self.degree());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose_unchecked(&base);
            }
            base = base.compose_unchecked(&base);
            k >>= 1;
        }
        acc
    }

    /// All cycles including fixed points, each starting at its least point,
    /// ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths in descending order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    pub fn order(&self) -> u64 {
        self.cycle_type()
            .into_iter()
            .fold(1, |acc, l| lcm(acc, l as u64))
    }
}

impl fmt::Display for Perm {
    /// 1-based cycle notation with fixed points omitted; `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{}[n={}]", self, self.degree())
    }
}

#[derive(Debug, Clone)]
pub struct ConjugacyClass {
    /// Least element index in the class.
    pub representative: usize,
    /// Element indices, ascending.
    pub members: Vec<usize>,
    pub centralizer_order: usize,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// A finite permutation group with all elements listed. Element 0 is the
/// identity.
#[derive(Debug, Clone)]
pub struct GroupTable {
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    generators: Vec<usize>,
    inverses: Vec<usize>,
    table: Option<Vec<u32>>,
    element_orders: Vec<u64>,
    exponent: u64,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
}

/// Breadth-first closure of `gens` under composition.
///
/// Elements appear layer by layer (word length in the generators); within a
/// layer they are sorted by their image sequence, so the ordering depends
/// only on the generating set.
pub fn enumerate_group(gens: &[Perm], cap: usize) -> Result<GroupTable> {
    let first = gens
        .first()
        .ok_or_else(|| Error::input("at least one generator is required"))?;
    if cap == 0 {
        return Err(Error::input("group cap must be positive"));
    }
    for g in gens {
        first.check_degree(g)?;
    }
    let n = first.degree();
    let identity = Perm::identity(n);
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::new();
    index.insert(identity, 0usize);
    let mut layer = vec![0usize];
    while !layer.is_empty() {
        let mut fresh = HashSet::new();
        for &e in &layer {
            for g in gens {
                let p = g.compose_unchecked(&elements[e]);
                if !index.contains_key(&p) {
                    fresh.insert(p);
                }
            }
        }
        let mut fresh: Vec<Perm> = fresh.into_iter().collect();
        fresh.sort();
        layer.clear();
        for p in fresh {
            if elements.len() >= cap {
                return Err(Error::CapExceeded {
                    what: "group order",
                    cap,
                    reached: elements.len() + 1,
                });
            }
            index.insert(p.clone(), elements.len());
            layer.push(elements.len());
            elements.push(p);
        }
    }
    let generators = gens.iter().map(|g| index[g]).collect();
    GroupTable::build(elements, index, generators)
}

impl GroupTable {
    fn build(
        elements: Vec<Perm>,
        index: HashMap<Perm, usize>,
        generators: Vec<usize>,
    ) -> Result<Self> {
        let order = elements.len();
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        let table = if order <= MUL_TABLE_LIMIT {
            let mut t = Vec::with_capacity(order * order);
            for p in &elements {
                for q in &elements {
                    let r = index
                        .get(&p.compose_unchecked(q))
                        .ok_or_else(|| Error::internal("group closure failed"))?;
                    t.push(*r as u32);
                }
            }
            Some(t)
        } else {
            None
        };
        let element_orders: Vec<u64> = elements.iter().map(Perm::order).collect();
        let exponent = element_orders.iter().fold(1, |acc, &o| lcm(acc, o));
        let mut group = GroupTable {
            elements,
            index,
            generators,
            inverses,
            table,
            element_orders,
            exponent,
            classes: Vec::new(),
            class_of: Vec::new(),
        };
        group.compute_classes();
        Ok(group)
    }

    fn compute_classes(&mut self) {
        let order = self.order();
        let mut class_of = vec![usize::MAX; order];
        let mut classes = Vec::new();
        for start in 0..order {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = classes.len();
            class_of[start] = id;
            let mut members = vec![start];
            let mut head = 0;
            while head < members.len() {
                let g = members[head];
                head += 1;
                for &h in &self.generators {
                    let c = self.conjugate_idx(g, h);
                    if class_of[c] == usize::MAX {
                        class_of[c] = id;
                        members.push(c);
                    }
                }
            }
            members.sort_unstable();
            classes.push(ConjugacyClass {
                representative: start,
                centralizer_order: order / members.len(),
                members,
            });
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.elements[0].degree()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub(crate) fn require_index(&self, p: &Perm) -> Result<usize> {
        self.index_of(p)
            .ok_or_else(|| Error::input(format!("{p} is not an element of the group")))
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn has_mul_table(&self) -> bool {
        self.table.is_some()
    }

    /// Index of `elements[i] ∘ elements[j]` (apply `j` first).
    pub fn mul(&self, i: usize, j: usize) -> usize {
        match &self.table {
            Some(t) => t[i * self.order() + j] as usize,
            None => self.index[&self.elements[i].compose_unchecked(&self.elements[j])],
        }
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inverses[i]
    }

    /// Index of `h⁻¹ g h`.
    pub fn conjugate_idx(&self, g: usize, h: usize) -> usize {
        self.mul(self.inv(h), self.mul(g, h))
    }

    pub fn pow(&self, i: usize, k: u64) -> usize {
        let k = k % self.element_orders[i];
        let mut acc = 0;
        let mut base = i;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, i: usize) -> u64 {
        self.element_orders[i]
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn are_conjugate(&self, p: &Perm, q: &Perm) -> Result<bool> {
        let i = self.require_index(p)?;
        let j = self.require_index(q)?;
        Ok(self.class_of[i] == self.class_of[j])
    }

    /// Whether the group acts transitively on its points.
    pub fn is_transitive(&self) -> bool {
        let n = self.degree();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in &self.generators {
                let y = self.elements[g].apply(x);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order()
    }
}
