//! Brute-force reference implementations over a full multiplication table.
//!
//! Nothing here uses the library's stabilizer chains, element index or
//! automorphism tables. The group is enumerated by closing its generators
//! under multiplication, every product is tabulated, and subgroups are
//! membership masks over that table.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use coprime_lab::{Group, Perm};

pub type P = Vec<u32>;
/// Membership mask over the elements of a [`Cayley`] table.
pub type Set = Vec<bool>;

/// Apply `a`, then `b`.
pub fn mul(a: &P, b: &P) -> P {
    a.iter().map(|&x| b[x as usize]).collect()
}

pub fn raw(x: &Perm) -> P {
    x.images().to_vec()
}

pub struct Cayley {
    pub degree: usize,
    pub elements: Vec<P>,
    pub index: HashMap<P, u32>,
    table: Vec<u32>,
    inverse: Vec<u32>,
    pub generators: Vec<u32>,
}

impl Cayley {
    /// Enumerates `⟨gens⟩` by breadth-first search and tabulates products.
    pub fn new(degree: usize, gens: &[P]) -> Self {
        let id: P = (0..degree as u32).collect();
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0u32)]);
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head].clone();
            head += 1;
            for g in gens {
                let y = mul(&x, g);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elements.len() as u32);
                    elements.push(y);
                }
            }
        }
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for (i, x) in elements.iter().enumerate() {
            for (j, y) in elements.iter().enumerate() {
                table[i * n + j] = index[&mul(x, y)];
            }
        }
        let inverse = (0..n)
            .map(|i| (0..n).find(|&j| table[i * n + j] == 0).unwrap() as u32)
            .collect();
        let generators = gens.iter().map(|g| index[g]).collect();
        Cayley {
            degree,
            elements,
            index,
            table,
            inverse,
            generators,
        }
    }

    pub fn of(g: &Group) -> Self {
        let gens: Vec<P> = g.generators().iter().map(raw).collect();
        Cayley::new(g.degree(), &gens)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order() + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    /// `[a, b] = a⁻¹b⁻¹ab`.
    pub fn comm(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn whole(&self) -> Set {
        vec![true; self.order()]
    }

    pub fn trivial(&self) -> Set {
        let mut s = vec![false; self.order()];
        s[0] = true;
        s
    }

    /// Closure of `gens` under multiplication.
    pub fn closure(&self, gens: &[u32]) -> Set {
        let mut s = self.trivial();
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !s[y as usize] {
                    s[y as usize] = true;
                    queue.push_back(y);
                }
            }
        }
        s
    }

    /// Subgroup generated by an arbitrary element mask.
    pub fn generated(&self, elements: &Set) -> Set {
        let mut gens = Vec::new();
        let mut current = self.trivial();
        for (x, &present) in elements.iter().enumerate() {
            if present && !current[x] {
                gens.push(x as u32);
                current = self.closure(&gens);
            }
        }
        current
    }

    /// `⟨[x, y] : x ∈ h, y ∈ k⟩` over every element pair.
    pub fn commutator(&self, h: &Set, k: &Set) -> Set {
        let mut comms = vec![false; self.order()];
        let ks: Vec<u32> = members(k).collect();
        for x in members(h) {
            for &y in &ks {
                comms[self.comm(x, y) as usize] = true;
            }
        }
        self.generated(&comms)
    }

    pub fn lower_central(&self) -> Vec<Set> {
        let g = self.whole();
        self.descending(|t| self.commutator(t, &g))
    }

    pub fn derived(&self) -> Vec<Set> {
        self.descending(|t| self.commutator(t, t))
    }

    fn descending(&self, step: impl Fn(&Set) -> Set) -> Vec<Set> {
        let mut terms = vec![self.whole()];
        loop {
            let last = terms.last().unwrap();
            if count(last) == 1 {
                return terms;
            }
            let next = step(last);
            if &next == last {
                return terms;
            }
            terms.push(next);
        }
    }

    /// `None` when the lower central series stalls above the identity.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let terms = self.lower_central();
        (count(terms.last().unwrap()) == 1).then(|| terms.len() - 1)
    }

    /// `{x : [x, y] ∈ N for all y}`, the preimage of `Z(G/N)`.
    pub fn next_center(&self, n: &Set) -> Set {
        (0..self.order() as u32)
            .map(|x| (0..self.order() as u32).all(|y| n[self.comm(x, y) as usize]))
            .collect()
    }

    pub fn upper_central(&self) -> Vec<Set> {
        let mut terms = vec![self.trivial()];
        loop {
            let last = terms.last().unwrap();
            if count(last) == self.order() {
                return terms;
            }
            let next = self.next_center(last);
            if &next == last {
                return terms;
            }
            terms.push(next);
        }
    }

    pub fn is_normal(&self, h: &Set) -> bool {
        members(h).all(|x| {
            (0..self.order() as u32).all(|y| h[self.mul(self.mul(self.inv(y), x), y) as usize])
        })
    }

    /// Mask of a library group's elements (which must lie in this group).
    pub fn mask_of(&self, g: &Group) -> Set {
        let mut s = vec![false; self.order()];
        for x in g.elements().unwrap() {
            s[self.index[&raw(x)] as usize] = true;
        }
        s
    }

    /// The homomorphism sending generator `i` to `images[i]`, tabulated by
    /// walking the Cayley graph. `None` if the assignment is not well
    /// defined or leaves the group.
    pub fn hom_table(&self, images: &[P]) -> Option<Vec<u32>> {
        let imgs: Vec<u32> = images
            .iter()
            .map(|p| self.index.get(p).copied())
            .collect::<Option<_>>()?;
        let mut table = vec![u32::MAX; self.order()];
        table[0] = 0;
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            let fx = table[x as usize];
            for (&g, &img) in self.generators.iter().zip(&imgs) {
                let y = self.mul(x, g);
                let fy = self.mul(fx, img);
                match table[y as usize] {
                    u32::MAX => {
                        table[y as usize] = fy;
                        queue.push_back(y);
                    }
                    existing if existing != fy => return None,
                    _ => {}
                }
            }
        }
        Some(table)
    }
}

pub fn members(s: &Set) -> impl Iterator<Item = u32> + '_ {
    s.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u32)
}

pub fn count(s: &Set) -> usize {
    s.iter().filter(|&&b| b).count()
}

/// Every vector of `(Z/p)^k`.
pub fn all_vectors(p: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

/// Hyperplanes of `(Z/p)^k` as explicit element sets.
pub fn hyperplanes(p: u32, k: usize) -> Vec<BTreeSet<Vec<u32>>> {
    let mut seen = BTreeSet::new();
    for normal in all_vectors(p, k) {
        if normal.iter().all(|&x| x == 0) {
            continue;
        }
        let plane: BTreeSet<Vec<u32>> = all_vectors(p, k)
            .into_iter()
            .filter(|v| v.iter().zip(&normal).map(|(a, b)| a * b).sum::<u32>() % p == 0)
            .collect();
        seen.insert(plane);
    }
    seen.into_iter().collect()
}

/// Oracle view of an action: the group table plus one automorphism table
/// per basis vector of `A`.
pub struct OracleAction {
    pub cayley: Cayley,
    pub p: u32,
    pub k: usize,
    pub basis: Vec<Vec<u32>>,
}

impl OracleAction {
    pub fn new(setup: &coprime_lab::action::ActionSetup) -> Self {
        let cayley = Cayley::of(setup.group());
        let basis = setup
            .basis()
            .iter()
            .map(|a| {
                let imgs: Vec<P> = a.images().iter().map(raw).collect();
                cayley.hom_table(&imgs).expect("basis images define an endomorphism")
            })
            .collect();
        OracleAction {
            cayley,
            p: setup.p(),
            k: setup.k(),
            basis,
        }
    }

    /// The automorphism `Σ u_i e_i` as a table.
    pub fn element(&self, u: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = (0..self.cayley.order() as u32).collect();
        for (t, &e) in self.basis.iter().zip(u) {
            for _ in 0..e {
                for v in out.iter_mut() {
                    *v = t[*v as usize];
                }
            }
        }
        out
    }

    /// `C_G(B)` for `B` given as an explicit set of vectors.
    pub fn fixed(&self, b: &BTreeSet<Vec<u32>>) -> Set {
        let maps: Vec<Vec<u32>> = b.iter().map(|u| self.element(u)).collect();
        (0..self.cayley.order())
            .map(|x| maps.iter().all(|m| m[x] as usize == x))
            .collect()
    }
}
