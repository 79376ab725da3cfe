//! Quotients `N/D` by a normal subgroup, and cyclic decompositions of the
//! abelian ones.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::perm::Perm;

/// Partition of a group's elements into cosets of a normal subgroup.
#[derive(Clone)]
pub struct CosetTable {
    ids: HashMap<Perm, u32>,
    reps: Vec<Perm>,
}

impl CosetTable {
    /// Requires `denominator` normal in `numerator`.
    pub fn new(numerator: &Group, denominator: &Group) -> Result<Self> {
        if !denominator.is_normal_in(numerator) {
            return Err(Error::Precondition(
                "denominator is not a normal subgroup of the numerator".into(),
            ));
        }
        let num = numerator.elements()?;
        let den = denominator.elements()?;
        let mut ids = HashMap::with_capacity(num.len());
        let mut reps = Vec::with_capacity(num.len() / den.len());
        for x in num {
            if ids.contains_key(x) {
                continue;
            }
            let id = reps.len() as u32;
            for d in den {
                ids.insert(d.mul(x), id);
            }
            reps.push(x.clone());
        }
        Ok(CosetTable { ids, reps })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Coset containing `x`, or `None` if `x` is outside the numerator.
    pub fn id_of(&self, x: &Perm) -> Option<u32> {
        self.ids.get(x).copied()
    }

    pub fn representative(&self, id: u32) -> &Perm {
        &self.reps[id as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.ids[&self.reps[a as usize].mul(&self.reps[b as usize])]
    }

    pub fn identity_id(&self) -> u32 {
        let degree = self.reps[0].degree();
        self.ids[&Perm::identity(degree)]
    }

    fn pow(&self, a: u32, e: u64) -> u32 {
        self.ids[&self.reps[a as usize].pow(e)]
    }
}

/// An abelian quotient `numerator / denominator` written additively, with a
/// basis of cyclic generators.
#[derive(Clone)]
pub struct AbelianSection {
    numerator: Group,
    denominator: Group,
    cosets: CosetTable,
    basis: Vec<Perm>,
    orders: Vec<u64>,
    /// coset id -> mixed-radix index of its exponent vector
    index_of_coset: Vec<u32>,
    /// mixed-radix index -> coset id
    coset_of_index: Vec<u32>,
}

impl AbelianSection {
    pub fn new(numerator: &Group, denominator: &Group) -> Result<Self> {
        if !denominator.is_subgroup_of(numerator) {
            return Err(Error::Precondition(
                "denominator is not contained in the numerator".into(),
            ));
        }
        let gens = numerator.generators();
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                if !denominator.contains(&a.commutator(b)) {
                    return Err(Error::Precondition(
                        "quotient is not abelian: denominator misses a commutator".into(),
                    ));
                }
            }
        }
        let cosets = CosetTable::new(numerator, denominator)?;
        let (basis_ids, orders) = greedy_basis(&cosets)?;

        let m = cosets.len();
        let identity = cosets.identity_id();
        let mut coset_of_index = vec![identity];
        for (&y, &o) in basis_ids.iter().zip(&orders) {
            let mut next = Vec::with_capacity(coset_of_index.len() * o as usize);
            let mut power = identity;
            for _ in 0..o {
                for &c in &coset_of_index {
                    next.push(cosets.mul(c, power));
                }
                power = cosets.mul(power, y);
            }
            coset_of_index = next;
        }
        if coset_of_index.len() != m {
            return Err(Error::Internal(format!(
                "basis orders multiply to {} but the quotient has order {m}",
                coset_of_index.len()
            )));
        }
        let mut index_of_coset = vec![u32::MAX; m];
        for (idx, &c) in coset_of_index.iter().enumerate() {
            if index_of_coset[c as usize] != u32::MAX {
                return Err(Error::Internal("basis is not independent".into()));
            }
            index_of_coset[c as usize] = idx as u32;
        }
        let basis = basis_ids
            .iter()
            .map(|&c| cosets.representative(c).clone())
            .collect();
        Ok(AbelianSection {
            numerator: numerator.clone(),
            denominator: denominator.clone(),
            cosets,
            basis,
            orders,
            index_of_coset,
            coset_of_index,
        })
    }

    pub fn numerator(&self) -> &Group {
        &self.numerator
    }

    pub fn denominator(&self) -> &Group {
        &self.denominator
    }

    pub fn basis(&self) -> &[Perm] {
        &self.basis
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Order of the quotient.
    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Mixed-radix index of the coset of `x` (first coordinate least
    /// significant), or `None` outside the numerator.
    pub fn index_of(&self, x: &Perm) -> Option<u32> {
        self.cosets
            .id_of(x)
            .map(|c| self.index_of_coset[c as usize])
    }

    pub fn decompose(&self, x: &Perm) -> Result<Vec<u64>> {
        let idx = self
            .index_of(x)
            .ok_or_else(|| Error::NotContained("element outside the section numerator".into()))?;
        Ok(self.vector_of(idx))
    }

    pub fn vector_of(&self, mut idx: u32) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&o| {
                let e = idx as u64 % o;
                idx = (idx as u64 / o) as u32;
                e
            })
            .collect()
    }

    /// Index of an exponent vector; entries are reduced modulo the orders.
    pub fn index_of_vector(&self, v: &[i64]) -> u32 {
        let mut idx = 0u64;
        let mut stride = 1u64;
        for (&e, &o) in v.iter().zip(&self.orders) {
            idx += (e.rem_euclid(o as i64) as u64) * stride;
            stride *= o;
        }
        idx as u32
    }

    /// A coset representative of the element with the given index.
    pub fn representative(&self, idx: u32) -> &Perm {
        self.cosets
            .representative(self.coset_of_index[idx as usize])
    }

    /// `∏ basis[i]^e[i]`
    pub fn recompose(&self, v: &[u64]) -> Perm {
        let mut x = self.numerator.identity();
        for (b, &e) in self.basis.iter().zip(v) {
            x = x.mul(&b.pow(e));
        }
        x
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let va = self.vector_of(a);
        let vb = self.vector_of(b);
        let sum: Vec<i64> = va.iter().zip(&vb).map(|(x, y)| (x + y) as i64).collect();
        self.index_of_vector(&sum)
    }

    pub fn neg(&self, a: u32) -> u32 {
        let v: Vec<i64> = self.vector_of(a).iter().map(|&x| -(x as i64)).collect();
        self.index_of_vector(&v)
    }
}

/// Picks an element of maximal order modulo the span so far, then corrects
/// it by an element of the span so that its cyclic group meets the span
/// trivially.
fn greedy_basis(cosets: &CosetTable) -> Result<(Vec<u32>, Vec<u64>)> {
    let m = cosets.len();
    let identity = cosets.identity_id();
    let mut in_span = vec![false; m];
    in_span[identity as usize] = true;
    let mut span = vec![identity];
    let mut basis = Vec::new();
    let mut orders = Vec::new();
    while span.len() < m {
        let mut best: Option<(u32, u64)> = None;
        for c in 0..m as u32 {
            if in_span[c as usize] {
                continue;
            }
            let mut t = 1u64;
            let mut x = c;
            while !in_span[x as usize] {
                x = cosets.mul(x, c);
                t += 1;
            }
            if best.map_or(true, |(_, bt)| t > bt) {
                best = Some((c, t));
            }
        }
        let (c, t) = best.expect("span is a proper subgroup");
        let target = cosets.pow(c, t);
        let s = span
            .iter()
            .copied()
            .find(|&s| cosets.pow(s, t) == target)
            .ok_or_else(|| Error::Internal("no complement-adjusting element found".into()))?;
        let s_inv = cosets.pow(s, m as u64 - 1);
        let y = cosets.mul(c, s_inv);
        let mut new_span = Vec::with_capacity(span.len() * t as usize);
        let mut power = identity;
        for _ in 0..t {
            for &x in &span {
                new_span.push(cosets.mul(x, power));
            }
            power = cosets.mul(power, y);
        }
        for &x in &new_span {
            in_span[x as usize] = true;
        }
        span = new_span;
        basis.push(y);
        orders.push(t);
    }
    Ok((basis, orders))
}
