//! Finite permutation groups backed by a Schreier–Sims stabilizer chain.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::Perm;

/// Default ceiling on the number of elements any group may enumerate.
pub const DEFAULT_ENUMERATION_CAP: u64 = 200_000;

/// Environment variable overriding the enumeration cap.
pub const CAP_ENV: &str = "COPRIME_LAB_CAP";

static CAP: AtomicU64 = AtomicU64::new(0);

/// Current enumeration cap. Reads `COPRIME_LAB_CAP` on first use.
pub fn enumeration_cap() -> u64 {
    let cap = CAP.load(Ordering::Relaxed);
    if cap != 0 {
        return cap;
    }
    let cap = std::env::var(CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .filter(|&c| c > 0)
        .unwrap_or(DEFAULT_ENUMERATION_CAP);
    CAP.store(cap, Ordering::Relaxed);
    cap
}

pub fn set_enumeration_cap(cap: u64) {
    CAP.store(cap.max(1), Ordering::Relaxed);
}

#[derive(Clone)]
struct Level {
    base: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    /// `slot[point]` indexes into `reps` when the point lies in the orbit.
    slot: Vec<Option<u32>>,
    /// `(u, u⁻¹)` with `u` mapping the base point to the orbit point.
    reps: Vec<(Perm, Perm)>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut level = Level {
            base,
            gens: Vec::new(),
            orbit: Vec::new(),
            slot: vec![None; degree],
            reps: Vec::new(),
        };
        level.recompute(degree);
        level
    }

    fn recompute(&mut self, degree: usize) {
        self.slot = vec![None; degree];
        self.orbit.clear();
        self.reps.clear();
        let id = Perm::identity(degree);
        self.slot[self.base] = Some(0);
        self.orbit.push(self.base);
        self.reps.push((id.clone(), id));
        let mut head = 0;
        while head < self.orbit.len() {
            let beta = self.orbit[head];
            let u = self.reps[self.slot[beta].unwrap() as usize].0.clone();
            for s in &self.gens {
                let gamma = s.image(beta);
                if self.slot[gamma].is_none() {
                    let v = u.mul(s);
                    let v_inv = v.inverse();
                    self.slot[gamma] = Some(self.reps.len() as u32);
                    self.reps.push((v, v_inv));
                    self.orbit.push(gamma);
                }
            }
            head += 1;
        }
    }

    fn rep(&self, point: usize) -> Option<&(Perm, Perm)> {
        self.slot[point].map(|i| &self.reps[i as usize])
    }
}

/// Base and strong generating set with orbit transversals.
#[derive(Clone)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize) -> Self {
        StabChain {
            degree,
            levels: Vec::new(),
        }
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> u64 {
        self.levels.iter().map(|l| l.orbit.len() as u64).product()
    }

    /// Strips `g` through the chain starting at level `from`. Returns the
    /// residue and the level at which stripping stopped.
    fn sift(&self, mut g: Perm, from: usize) -> (Perm, usize) {
        for l in from..self.levels.len() {
            let level = &self.levels[l];
            let beta = g.image(level.base);
            match level.rep(beta) {
                Some((_, u_inv)) => g = g.mul(u_inv),
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        let (residue, level) = self.sift(g.clone(), 0);
        level == self.levels.len() && residue.is_identity()
    }

    /// Adds `g` to the group, restoring the Schreier–Sims conditions.
    /// Returns `false` when `g` was already a member.
    pub fn extend(&mut self, g: &Perm) -> bool {
        if self.contains(g) {
            return false;
        }
        let mut depth = 0;
        while depth < self.levels.len() && g.image(self.levels[depth].base) == self.levels[depth].base {
            depth += 1;
        }
        if depth == self.levels.len() {
            let base = g.first_moved_point().expect("non-member is not the identity");
            self.levels.push(Level::new(base, self.degree));
        }
        for l in 0..=depth {
            self.levels[l].gens.push(g.clone());
            self.levels[l].recompute(self.degree);
        }
        self.complete(depth);
        true
    }

    fn complete(&mut self, from: usize) {
        let mut i = from as isize;
        while i >= 0 {
            let lvl = i as usize;
            let found = self.find_failing_schreier_generator(lvl);
            match found {
                None => i -= 1,
                Some((y, j)) => {
                    if j == self.levels.len() {
                        let base = y.first_moved_point().expect("residue is not the identity");
                        self.levels.push(Level::new(base, self.degree));
                    }
                    for l in lvl + 1..=j {
                        self.levels[l].gens.push(y.clone());
                        self.levels[l].recompute(self.degree);
                    }
                    i = j as isize;
                }
            }
        }
    }

    fn find_failing_schreier_generator(&self, lvl: usize) -> Option<(Perm, usize)> {
        let level = &self.levels[lvl];
        for &beta in &level.orbit {
            let (u, _) = level.rep(beta).unwrap();
            for s in &level.gens {
                let gamma = s.image(beta);
                let (_, v_inv) = level.rep(gamma).unwrap();
                let h = u.mul(s).mul(v_inv);
                if h.is_identity() {
                    continue;
                }
                let (y, j) = self.sift(h, lvl + 1);
                if j < self.levels.len() || !y.is_identity() {
                    return Some((y, j));
                }
            }
        }
        None
    }

    fn enumerate(&self) -> Vec<Perm> {
        let mut elems = vec![Perm::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(elems.len() * level.reps.len());
            for h in &elems {
                for (u, _) in &level.reps {
                    next.push(h.mul(u));
                }
            }
            elems = next;
        }
        elems
    }

    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        let mut g = Perm::identity(self.degree);
        for level in self.levels.iter().rev() {
            let (u, _) = &level.reps[rng.gen_range(0..level.reps.len())];
            g = g.mul(u);
        }
        g
    }
}

struct Inner {
    degree: usize,
    generators: Vec<Perm>,
    chain: StabChain,
    order: u64,
    elements: OnceLock<Vec<Perm>>,
}

/// An immutable finite permutation group. Cloning is cheap.
#[derive(Clone)]
pub struct Group(Arc<Inner>);

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("degree", &self.0.degree)
            .field("order", &self.0.order)
            .field("generators", &self.0.generators)
            .finish()
    }
}

impl Group {
    /// The group generated by `gens` on `degree` points.
    pub fn from_generators(degree: usize, gens: Vec<Perm>) -> Result<Group> {
        if degree == 0 {
            return Err(Error::Precondition("degree-0 groups are not supported".into()));
        }
        let mut chain = StabChain::new(degree);
        let mut kept = Vec::new();
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    got: g.degree(),
                });
            }
            if g.is_identity() || kept.contains(&g) {
                continue;
            }
            chain.extend(&g);
            kept.push(g);
        }
        Ok(Self::from_parts(degree, kept, chain))
    }

    fn from_parts(degree: usize, generators: Vec<Perm>, chain: StabChain) -> Group {
        let order = chain.order();
        Group(Arc::new(Inner {
            degree,
            generators,
            chain,
            order,
            elements: OnceLock::new(),
        }))
    }

    pub fn trivial(degree: usize) -> Group {
        Self::from_parts(degree, Vec::new(), StabChain::new(degree))
    }

    /// Subgroup generated by a collection of elements, keeping only those
    /// generators that enlarge the group seen so far.
    pub fn from_elements<'a, I>(degree: usize, elements: I) -> Group
    where
        I: IntoIterator<Item = &'a Perm>,
    {
        let mut chain = StabChain::new(degree);
        let mut gens = Vec::new();
        for x in elements {
            if chain.extend(x) {
                gens.push(x.clone());
            }
        }
        Self::from_parts(degree, gens, chain)
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.0.generators
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn chain(&self) -> &StabChain {
        &self.0.chain
    }

    pub fn is_trivial(&self) -> bool {
        self.0.order == 1
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.0.degree)
    }

    /// Membership test; errors on degree mismatch.
    pub fn is_member(&self, x: &Perm) -> Result<bool> {
        if x.degree() != self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                got: x.degree(),
            });
        }
        Ok(self.0.chain.contains(x))
    }

    /// Membership test for elements already known to have the right degree.
    pub fn contains(&self, x: &Perm) -> bool {
        x.degree() == self.degree() && self.0.chain.contains(x)
    }

    /// All elements, sorted. Fails when the order exceeds the enumeration cap.
    pub fn elements(&self) -> Result<&[Perm]> {
        self.elements_capped(enumeration_cap())
    }

    pub fn elements_capped(&self, cap: u64) -> Result<&[Perm]> {
        if let Some(e) = self.0.elements.get() {
            return Ok(e);
        }
        if self.order() > cap {
            return Err(Error::Capacity {
                order: self.order(),
                cap,
            });
        }
        let mut elems = self.0.chain.enumerate();
        elems.sort_unstable();
        Ok(self.0.elements.get_or_init(|| elems))
    }

    pub fn has_cached_elements(&self) -> bool {
        self.0.elements.get().is_some()
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        self.0.chain.random_element(rng)
    }

    pub fn is_subgroup_of(&self, other: &Group) -> bool {
        self.degree() == other.degree()
            && other.order() % self.order() == 0
            && self.generators().iter().all(|g| other.contains(g))
    }

    pub fn same_as(&self, other: &Group) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    pub fn is_normal_in(&self, ambient: &Group) -> bool {
        self.is_subgroup_of(ambient)
            && ambient.generators().iter().all(|g| {
                self.generators()
                    .iter()
                    .all(|h| self.contains(&h.conjugate(g)))
            })
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .enumerate()
            .all(|(i, a)| gens[i + 1..].iter().all(|b| a.mul(b) == b.mul(a)))
    }

    /// `⟨self, other⟩`
    pub fn join(&self, other: &Group) -> Group {
        if other.is_subgroup_of(self) {
            return self.clone();
        }
        if self.is_subgroup_of(other) {
            return other.clone();
        }
        let mut chain = self.0.chain.clone();
        let mut gens = self.generators().to_vec();
        for g in other.generators() {
            if chain.extend(g) {
                gens.push(g.clone());
            }
        }
        Self::from_parts(self.degree(), gens, chain)
    }

    /// Subgroup generated by a list of groups (trivial when empty).
    pub fn join_all<'a, I>(degree: usize, groups: I) -> Group
    where
        I: IntoIterator<Item = &'a Group>,
    {
        let mut chain = StabChain::new(degree);
        let mut gens = Vec::new();
        for h in groups {
            for g in h.generators() {
                if chain.extend(g) {
                    gens.push(g.clone());
                }
            }
        }
        Self::from_parts(degree, gens, chain)
    }

    /// `self ∩ other`, by enumerating the smaller group.
    pub fn intersection(&self, other: &Group) -> Result<Group> {
        if self.is_subgroup_of(other) {
            return Ok(self.clone());
        }
        if other.is_subgroup_of(self) {
            return Ok(other.clone());
        }
        let (small, large) = if self.order() <= other.order() {
            (self, other)
        } else {
            (other, self)
        };
        let elems = small.elements()?;
        Ok(Group::from_elements(
            self.degree(),
            elems.iter().filter(|x| large.contains(x)),
        ))
    }

    /// `g⁻¹ self g`
    pub fn conjugate(&self, g: &Perm) -> Group {
        let gens: Vec<Perm> = self.generators().iter().map(|h| h.conjugate(g)).collect();
        Group::from_elements(self.degree(), gens.iter())
    }

    /// True when the order is a power of `r`.
    pub fn is_r_group(&self, r: u64) -> bool {
        let mut n = self.order();
        while n % r == 0 {
            n /= r;
        }
        n == 1
    }
}

/// Smallest normal subgroup of `ambient` containing `set`.
pub fn normal_closure(set: &[Perm], ambient: &Group) -> Result<Group> {
    for x in set {
        if !ambient.is_member(x)? {
            return Err(Error::NotContained(format!("{x:?} is not in the ambient group")));
        }
    }
    Ok(closure_under_conjugation(
        ambient.degree(),
        set.iter().cloned(),
        ambient.generators(),
    ))
}

fn closure_under_conjugation<I>(degree: usize, seeds: I, conjugators: &[Perm]) -> Group
where
    I: IntoIterator<Item = Perm>,
{
    let mut chain = StabChain::new(degree);
    let mut gens = Vec::new();
    let mut queue = Vec::new();
    for x in seeds {
        if chain.extend(&x) {
            gens.push(x.clone());
            queue.push(x);
        }
    }
    while let Some(n) = queue.pop() {
        for g in conjugators {
            let c = n.conjugate(g);
            if chain.extend(&c) {
                gens.push(c.clone());
                queue.push(c);
            }
        }
    }
    Group::from_parts(degree, gens, chain)
}

/// `[H, K]`: the subgroup generated by all `[x, y]` with `x ∈ H`, `y ∈ K`.
///
/// This is the normal closure in `⟨H, K⟩` of the commutators of generator
/// pairs, which is exact for arbitrary subgroups `H` and `K`.
pub fn commutator_subgroup(h: &Group, k: &Group, ambient: &Group) -> Result<Group> {
    if !h.is_subgroup_of(ambient) {
        return Err(Error::NotContained("first argument is not a subgroup of the ambient group".into()));
    }
    if !k.is_subgroup_of(ambient) {
        return Err(Error::NotContained("second argument is not a subgroup of the ambient group".into()));
    }
    Ok(commutator_unchecked(h, k))
}

pub(crate) fn commutator_unchecked(h: &Group, k: &Group) -> Group {
    let degree = h.degree();
    let seeds: Vec<Perm> = h
        .generators()
        .iter()
        .flat_map(|x| k.generators().iter().map(move |y| x.commutator(y)))
        .filter(|c| !c.is_identity())
        .collect();
    if seeds.is_empty() {
        return Group::trivial(degree);
    }
    let conjugators: Vec<Perm> = h
        .generators()
        .iter()
        .chain(k.generators())
        .cloned()
        .collect();
    closure_under_conjugation(degree, seeds, &conjugators)
}

/// `[X, Y, Y, …, Y]` with `times` copies of `Y`, left-normed.
pub(crate) fn iterated_commutator(x: &Group, y: &Group, times: usize) -> Group {
    let mut acc = x.clone();
    for _ in 0..times {
        if acc.is_trivial() {
            break;
        }
        acc = commutator_unchecked(&acc, y);
    }
    acc
}
