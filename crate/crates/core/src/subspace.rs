//! Subgroups of `A ≅ (Z/p)^k`, stored as reduced row-echelon spanning sets.

use std::collections::BTreeSet;
use std::fmt;

/// An exponent vector in `(Z/p)^k`.
pub type AVector = Vec<u32>;

/// A subgroup `B ≤ A`, described by a canonical basis of exponent vectors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ASubgroupDescriptor {
    p: u32,
    k: usize,
    rows: Vec<AVector>,
}

impl fmt::Debug for ASubgroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| format_vector(r)).collect();
        write!(f, "<{}>", rows.join(" | "))
    }
}

pub fn format_vector(v: &[u32]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime and small
    (1..p).find(|&x| (a as u64 * x as u64) % p as u64 == 1).expect("nonzero residue")
}

impl ASubgroupDescriptor {
    /// The span of `vectors`.
    pub fn span(p: u32, k: usize, vectors: &[AVector]) -> Self {
        let mut rows: Vec<AVector> = vectors
            .iter()
            .map(|v| v.iter().map(|x| x % p).collect())
            .collect();
        let mut rank = 0;
        for col in 0..k {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let inv = inv_mod(rows[rank][col], p);
            for x in rows[rank].iter_mut() {
                *x = (*x * inv) % p;
            }
            for r in 0..rows.len() {
                if r != rank && rows[r][col] != 0 {
                    let f = rows[r][col];
                    for c in 0..k {
                        rows[r][c] = (rows[r][c] + (p - f) * rows[rank][c]) % p;
                    }
                }
            }
            rank += 1;
        }
        rows.truncate(rank);
        ASubgroupDescriptor { p, k, rows }
    }

    pub fn whole(p: u32, k: usize) -> Self {
        let rows = (0..k).map(|i| unit(k, i)).collect::<Vec<_>>();
        Self::span(p, k, &rows)
    }

    pub fn trivial(p: u32, k: usize) -> Self {
        ASubgroupDescriptor { p, k, rows: vec![] }
    }

    pub fn cyclic(p: u32, v: &[u32]) -> Self {
        Self::span(p, v.len(), &[v.to_vec()])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Canonical spanning vectors.
    pub fn basis(&self) -> &[AVector] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// `log_p |A/B|`
    pub fn codim(&self) -> usize {
        self.k - self.rows.len()
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut with = self.rows.clone();
        with.push(v.to_vec());
        Self::span(self.p, self.k, &with).rank() == self.rank()
    }

    pub fn is_subgroup_of(&self, other: &ASubgroupDescriptor) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn intersects_nontrivially(&self, other: &ASubgroupDescriptor) -> bool {
        self.elements().iter().any(|v| v.iter().any(|&x| x != 0) && other.contains(v))
    }

    /// All `p^rank` elements.
    pub fn elements(&self) -> Vec<AVector> {
        let mut out = vec![vec![0u32; self.k]];
        for row in &self.rows {
            let mut next = Vec::with_capacity(out.len() * self.p as usize);
            for c in 0..self.p {
                for v in &out {
                    next.push(
                        v.iter()
                            .zip(row)
                            .map(|(a, b)| (a + c * b) % self.p)
                            .collect(),
                    );
                }
            }
            out = next;
        }
        out
    }
}

pub fn unit(k: usize, i: usize) -> AVector {
    let mut v = vec![0; k];
    v[i] = 1;
    v
}

/// All vectors of `(Z/p)^k`, in mixed-radix order.
pub fn all_vectors(p: u32, k: usize) -> Vec<AVector> {
    ASubgroupDescriptor::whole(p, k).elements()
}

/// Nonzero vectors whose first nonzero entry is 1: one generator for each
/// cyclic subgroup of order `p`.
pub fn normalized_nonzero_vectors(p: u32, k: usize) -> Vec<AVector> {
    let mut out: Vec<AVector> = all_vectors(p, k)
        .into_iter()
        .filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
        .collect();
    out.sort();
    out
}

/// The `(p^k − 1)/(p − 1)` subgroups of index `p`, one per normalized
/// linear functional, in functional order.
pub fn maximal_subgroups(p: u32, k: usize) -> Vec<ASubgroupDescriptor> {
    let all = all_vectors(p, k);
    normalized_nonzero_vectors(p, k)
        .into_iter()
        .map(|f| {
            let kernel: Vec<AVector> = all
                .iter()
                .filter(|v| v.iter().zip(&f).map(|(a, b)| a * b).sum::<u32>() % p == 0)
                .cloned()
                .collect();
            ASubgroupDescriptor::span(p, k, &kernel)
        })
        .collect()
}

/// Every subgroup of `A`, ordered by codimension ascending, then canonically.
pub fn all_subgroups(p: u32, k: usize) -> Vec<ASubgroupDescriptor> {
    let mut found: BTreeSet<ASubgroupDescriptor> = BTreeSet::new();
    let mut frontier = vec![ASubgroupDescriptor::trivial(p, k)];
    found.insert(frontier[0].clone());
    let nonzero = normalized_nonzero_vectors(p, k);
    while let Some(b) = frontier.pop() {
        for v in &nonzero {
            if b.contains(v) {
                continue;
            }
            let mut rows = b.basis().to_vec();
            rows.push(v.clone());
            let c = ASubgroupDescriptor::span(p, k, &rows);
            if found.insert(c.clone()) {
                frontier.push(c);
            }
        }
    }
    let mut out: Vec<_> = found.into_iter().collect();
    out.sort_by(|a, b| a.codim().cmp(&b.codim()).then_with(|| a.cmp(b)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximal_subgroup_counts() {
        assert_eq!(maximal_subgroups(2, 3).len(), 7);
        assert_eq!(maximal_subgroups(3, 2).len(), 4);
        assert_eq!(maximal_subgroups(2, 4).len(), 15);
        for m in maximal_subgroups(3, 3) {
            assert_eq!(m.codim(), 1);
            assert_eq!(m.elements().len(), 9);
        }
    }

    #[test]
    fn subgroup_lattice_sizes() {
        // Gaussian binomials: (Z/2)^3 has 1 + 7 + 7 + 1 subgroups.
        assert_eq!(all_subgroups(2, 3).len(), 16);
        // (Z/2)^4: 1 + 15 + 35 + 15 + 1
        assert_eq!(all_subgroups(2, 4).len(), 67);
        // (Z/3)^3: 1 + 13 + 13 + 1
        assert_eq!(all_subgroups(3, 3).len(), 28);
        let subs = all_subgroups(2, 3);
        assert_eq!(subs[0].codim(), 0);
        assert_eq!(subs.last().unwrap().codim(), 3);
    }

    #[test]
    fn span_is_canonical() {
        let a = ASubgroupDescriptor::span(3, 3, &[vec![1, 2, 0], vec![0, 1, 1]]);
        let b = ASubgroupDescriptor::span(3, 3, &[vec![1, 0, 1], vec![1, 2, 0], vec![2, 1, 0]]);
        assert_eq!(a, b);
        assert!(a.contains(&[2, 1, 0]));
        assert!(!a.contains(&[0, 0, 1]));
    }

    #[test]
    fn hyperplanes_meet_rank_two_subgroups() {
        // any two subgroups with codimensions summing below k meet nontrivially
        let b = ASubgroupDescriptor::span(2, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        for m in maximal_subgroups(2, 3) {
            assert!(b.intersects_nontrivially(&m));
        }
    }
}
