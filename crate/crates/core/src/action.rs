//! Actions of `A ≅ (Z/p)^k` on a finite group `G` by automorphisms, and the
//! centralizer machinery built on them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::perm::{gcd, is_prime, Perm};
use crate::section::CosetTable;
use crate::series;
use crate::subspace::{self, format_vector, ASubgroupDescriptor, AVector};

/// Sorted elements of a group together with a reverse lookup.
pub struct ElementIndex {
    elements: Vec<Perm>,
    lookup: HashMap<Perm, u32>,
}

impl ElementIndex {
    pub fn new(group: &Group) -> Result<Self> {
        let elements = group.elements()?.to_vec();
        let lookup = elements
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), i as u32))
            .collect();
        Ok(ElementIndex { elements, lookup })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: u32) -> &Perm {
        &self.elements[i as usize]
    }

    pub fn index(&self, x: &Perm) -> Option<u32> {
        self.lookup.get(x).copied()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }
}

/// An automorphism of `G`, given by generator images and tabulated on every
/// element of `G`.
#[derive(Clone)]
pub struct Automorphism {
    images: Vec<Perm>,
    table: Arc<Vec<u32>>,
    defect: Option<String>,
}

impl Automorphism {
    /// Tabulates the map determined by `images` by walking the Cayley graph
    /// of `G`. A map that is not a well-defined bijective homomorphism is
    /// kept with a recorded defect.
    fn tabulate(group: &Group, index: &ElementIndex, images: Vec<Perm>) -> Result<Self> {
        let gens = group.generators();
        if images.len() != gens.len() {
            return Err(Error::InvalidAction(format!(
                "{} generator images given for {} generators",
                images.len(),
                gens.len()
            )));
        }
        let mut image_idx = Vec::with_capacity(images.len());
        for (i, x) in images.iter().enumerate() {
            if x.degree() != group.degree() {
                return Err(Error::InvalidAction(format!(
                    "image of generator {i} has degree {}, expected {}",
                    x.degree(),
                    group.degree()
                )));
            }
            match index.index(x) {
                Some(j) => image_idx.push(j),
                None => {
                    return Err(Error::InvalidAction(format!(
                        "image of generator {i} is not an element of the group"
                    )))
                }
            }
        }
        let n = index.len();
        let mut table = vec![u32::MAX; n];
        let id = index.index(&group.identity()).expect("identity is a member");
        table[id as usize] = id;
        let mut queue = vec![id];
        let mut defect = None;
        'walk: while let Some(x) = queue.pop() {
            let fx = index.get(table[x as usize]).clone();
            for (g, &gi) in gens.iter().zip(&image_idx) {
                let y = index.index(&index.get(x).mul(g)).expect("closed under products");
                let fy = index
                    .index(&fx.mul(index.get(gi)))
                    .expect("closed under products");
                if table[y as usize] == u32::MAX {
                    table[y as usize] = fy;
                    queue.push(y);
                } else if table[y as usize] != fy {
                    defect = Some("generator images do not define a homomorphism".to_string());
                    break 'walk;
                }
            }
        }
        if defect.is_none() {
            let mut hit = vec![false; n];
            for &t in &table {
                if hit[t as usize] {
                    defect = Some("map is not injective".to_string());
                    break;
                }
                hit[t as usize] = true;
            }
        }
        Ok(Automorphism {
            images,
            table: Arc::new(table),
            defect,
        })
    }

    fn identity(group: &Group, index: &ElementIndex) -> Self {
        Automorphism {
            images: group.generators().to_vec(),
            table: Arc::new((0..index.len() as u32).collect()),
            defect: None,
        }
    }

    pub fn images(&self) -> &[Perm] {
        &self.images
    }

    pub fn defect(&self) -> Option<&str> {
        self.defect.as_deref()
    }

    #[inline]
    pub fn apply_index(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    /// `self` followed by `other`.
    fn compose(&self, other: &Automorphism, index: &ElementIndex) -> Automorphism {
        let table: Vec<u32> = self.table.iter().map(|&x| other.table[x as usize]).collect();
        let images = self
            .images
            .iter()
            .map(|y| index.get(other.table[index.index(y).unwrap() as usize]).clone())
            .collect();
        Automorphism {
            images,
            table: Arc::new(table),
            defect: None,
        }
    }

    fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }
}

struct SetupInner {
    group: Group,
    p: u32,
    k: usize,
    index: ElementIndex,
    basis: Vec<Automorphism>,
    centralizers: Mutex<HashMap<ASubgroupDescriptor, Group>>,
}

/// A group `G` with an action of `A = (Z/p)^k` given on the standard basis
/// of `A`. Cloning is cheap.
#[derive(Clone)]
pub struct ActionSetup(Arc<SetupInner>);

impl std::fmt::Debug for ActionSetup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ActionSetup")
            .field("order", &self.0.group.order())
            .field("degree", &self.0.group.degree())
            .field("p", &self.0.p)
            .field("k", &self.0.k)
            .finish()
    }
}

impl ActionSetup {
    /// Builds a setup from the images of `group.generators()` under each
    /// basis vector of `A`. Structural problems are errors; algebraic
    /// problems (coprimality, homomorphism, orders) are left for
    /// [`validate_setup`].
    pub fn new(group: Group, p: u32, k: usize, basis_images: Vec<Vec<Perm>>) -> Result<Self> {
        if basis_images.len() != k {
            return Err(Error::InvalidAction(format!(
                "{} basis automorphisms given for k = {k}",
                basis_images.len()
            )));
        }
        let index = ElementIndex::new(&group)?;
        let basis = basis_images
            .into_iter()
            .map(|imgs| Automorphism::tabulate(&group, &index, imgs))
            .collect::<Result<Vec<_>>>()?;
        Ok(ActionSetup(Arc::new(SetupInner {
            group,
            p,
            k,
            index,
            basis,
            centralizers: Mutex::new(HashMap::new()),
        })))
    }

    /// [`ActionSetup::new`] followed by [`validate_setup`], failing on any
    /// violation.
    pub fn validated(group: Group, p: u32, k: usize, basis_images: Vec<Vec<Perm>>) -> Result<Self> {
        let setup = Self::new(group, p, k, basis_images)?;
        let report = validate_setup(&setup);
        if !report.valid {
            return Err(Error::InvalidAction(report.violations.join("; ")));
        }
        Ok(setup)
    }

    /// The trivial action of `(Z/p)^k`.
    pub fn trivial(group: Group, p: u32, k: usize) -> Result<Self> {
        let imgs = vec![group.generators().to_vec(); k];
        Self::new(group, p, k, imgs)
    }

    pub fn group(&self) -> &Group {
        &self.0.group
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn k(&self) -> usize {
        self.0.k
    }

    pub fn index(&self) -> &ElementIndex {
        &self.0.index
    }

    pub fn basis(&self) -> &[Automorphism] {
        &self.0.basis
    }

    pub fn a_order(&self) -> u64 {
        (self.0.p as u64).pow(self.0.k as u32)
    }

    /// `phi(u)` for an exponent vector `u`.
    pub fn phi(&self, u: &[u32]) -> Automorphism {
        let idx = &self.0.index;
        let mut acc = Automorphism::identity(&self.0.group, idx);
        for (i, &e) in u.iter().enumerate() {
            for _ in 0..e % self.0.p {
                acc = acc.compose(&self.0.basis[i], idx);
            }
        }
        acc
    }

    /// Image of the element with index `x` under `phi(u)`.
    pub fn apply_index(&self, u: &[u32], mut x: u32) -> u32 {
        for (i, &e) in u.iter().enumerate() {
            for _ in 0..e % self.0.p {
                x = self.0.basis[i].apply_index(x);
            }
        }
        x
    }

    /// Image of `x ∈ G` under `phi(u)`.
    pub fn apply(&self, u: &[u32], x: &Perm) -> Result<Perm> {
        let i = self
            .0
            .index
            .index(x)
            .ok_or_else(|| Error::NotContained(format!("{x:?} is not in G")))?;
        Ok(self.0.index.get(self.apply_index(u, i)).clone())
    }

    /// True when every basis automorphism maps `h` into itself.
    pub fn is_invariant(&self, h: &Group) -> bool {
        self.0.basis.iter().all(|a| {
            h.generators().iter().all(|x| match self.0.index.index(x) {
                Some(i) => h.contains(self.0.index.get(a.apply_index(i))),
                None => false,
            })
        })
    }

    /// `C_G(B)`.
    pub fn fixed_subgroup(&self, b: &ASubgroupDescriptor) -> Result<Group> {
        if b.p() != self.0.p || b.k() != self.0.k {
            return Err(Error::Precondition(format!(
                "subgroup descriptor for (Z/{})^{} used with (Z/{})^{}",
                b.p(),
                b.k(),
                self.0.p,
                self.0.k
            )));
        }
        if let Some(g) = self.0.centralizers.lock().unwrap().get(b) {
            return Ok(g.clone());
        }
        let tables: Vec<Automorphism> = b.basis().iter().map(|u| self.phi(u)).collect();
        let idx = &self.0.index;
        let fixed = (0..idx.len() as u32)
            .filter(|&x| tables.iter().all(|t| t.apply_index(x) == x))
            .map(|x| idx.get(x));
        let g = Group::from_elements(self.0.group.degree(), fixed);
        self.0
            .centralizers
            .lock()
            .unwrap()
            .insert(b.clone(), g.clone());
        Ok(g)
    }

    /// `C_G(a)` for a single element `a ∈ A`.
    pub fn fixed_subgroup_of_element(&self, a: &[u32]) -> Result<Group> {
        self.fixed_subgroup(&ASubgroupDescriptor::cyclic(self.0.p, a))
    }

    /// `C_H(B) = C_G(B) ∩ H`.
    pub fn fixed_in(&self, h: &Group, b: &ASubgroupDescriptor) -> Result<Group> {
        self.fixed_subgroup(b)?.intersection(h)
    }

    pub fn maximal_subgroups(&self) -> Vec<ASubgroupDescriptor> {
        subspace::maximal_subgroups(self.0.p, self.0.k)
    }

    /// The same action restricted to an `A`-invariant subgroup `H`.
    pub fn restrict(&self, h: &Group) -> Result<ActionSetup> {
        if !h.is_subgroup_of(&self.0.group) {
            return Err(Error::NotContained("subgroup is not contained in G".into()));
        }
        if !self.is_invariant(h) {
            return Err(Error::Precondition("subgroup is not A-invariant".into()));
        }
        let idx = &self.0.index;
        let images = self
            .0
            .basis
            .iter()
            .map(|a| {
                h.generators()
                    .iter()
                    .map(|x| idx.get(a.apply_index(idx.index(x).unwrap())).clone())
                    .collect()
            })
            .collect();
        ActionSetup::new(h.clone(), self.0.p, self.0.k, images)
    }

    /// Same group, with basis automorphisms placed at coordinates
    /// `offset..offset + self.k()` of a rank-`k` group acting trivially
    /// elsewhere.
    pub fn embed_rank(&self, k: usize, offset: usize) -> Result<ActionSetup> {
        if offset + self.0.k > k {
            return Err(Error::Precondition(format!(
                "cannot place rank {} at offset {offset} in rank {k}",
                self.0.k
            )));
        }
        let gens = self.0.group.generators().to_vec();
        let images = (0..k)
            .map(|i| {
                if i >= offset && i < offset + self.0.k {
                    self.0.basis[i - offset].images.clone()
                } else {
                    gens.clone()
                }
            })
            .collect();
        ActionSetup::new(self.0.group.clone(), self.0.p, k, images)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<String>,
}

/// Checks that `phi` is a homomorphism from `(Z/p)^k` into `Aut(G)` and that
/// the action is coprime. On the basis this means: each basis map is an
/// automorphism, has order dividing `p`, and the basis maps commute.
pub fn validate_setup(setup: &ActionSetup) -> ValidationReport {
    let mut violations = Vec::new();
    let p = setup.p();
    if !is_prime(p as u64) {
        violations.push(format!("p = {p} is not prime"));
    }
    let order = setup.group().order();
    if gcd(order, p as u64) != 1 {
        violations.push(format!("|G| = {order} is not coprime to p = {p}"));
    }
    let basis = setup.basis();
    let mut all_automorphisms = true;
    for (i, a) in basis.iter().enumerate() {
        if let Some(d) = a.defect() {
            violations.push(format!("phi(e{i}): {d}"));
            all_automorphisms = false;
        }
    }
    if all_automorphisms {
        let idx = setup.index();
        for (i, a) in basis.iter().enumerate() {
            let mut power = a.clone();
            for _ in 1..p {
                power = power.compose(a, idx);
            }
            if !power.is_identity() {
                violations.push(format!("phi(e{i}) has order not dividing {p}"));
            }
            for (j, b) in basis.iter().enumerate().skip(i + 1) {
                let ab = a.compose(b, idx);
                let ba = b.compose(a, idx);
                if ab.table != ba.table {
                    violations.push(format!("phi(e{i}) and phi(e{j}) do not commute"));
                }
            }
        }
    }
    ValidationReport {
        valid: violations.is_empty(),
        violations,
    }
}

/// Lemma: for `N` normal and `A`-invariant, `C_{G/N}(B) = C_G(B)N/N`.
/// Compares the two sets of cosets directly.
pub fn check_fg1_quotient(setup: &ActionSetup, n: &Group, b: &ASubgroupDescriptor) -> Result<bool> {
    let g = setup.group();
    if !n.is_normal_in(g) {
        return Err(Error::Precondition("N is not normal in G".into()));
    }
    if !setup.is_invariant(n) {
        return Err(Error::Precondition("N is not A-invariant".into()));
    }
    let cosets = CosetTable::new(g, n)?;
    let idx = setup.index();
    let tables: Vec<Automorphism> = b.basis().iter().map(|u| setup.phi(u)).collect();
    let mut fixed_downstairs = vec![false; cosets.len()];
    for c in 0..cosets.len() as u32 {
        let rep = idx.index(cosets.representative(c)).unwrap();
        fixed_downstairs[c as usize] = tables.iter().all(|t| {
            cosets.id_of(idx.get(t.apply_index(rep))) == Some(c)
        });
    }
    let mut image = vec![false; cosets.len()];
    for x in setup.fixed_subgroup(b)?.elements()? {
        image[cosets.id_of(x).unwrap() as usize] = true;
    }
    Ok(fixed_downstairs == image)
}

/// Lemma: an `A`-invariant `H` is generated by the `C_H(A_j)` over the
/// maximal subgroups `A_j`, and is their setwise product when nilpotent.
pub fn check_fg2_generation(setup: &ActionSetup, h: &Group) -> Result<bool> {
    if setup.k() < 2 {
        return Err(Error::Precondition("generation by maximal-subgroup centralizers needs k ≥ 2".into()));
    }
    if !setup.is_invariant(h) {
        return Err(Error::Precondition("H is not A-invariant".into()));
    }
    let parts = setup
        .maximal_subgroups()
        .iter()
        .map(|m| setup.fixed_in(h, m))
        .collect::<Result<Vec<_>>>()?;
    let generated = Group::join_all(h.degree(), parts.iter());
    if !generated.same_as(h) {
        return Ok(false);
    }
    if series::is_nilpotent(h) {
        let idx = setup.index();
        let mut in_product = vec![false; idx.len()];
        let id = idx.index(&h.identity()).unwrap();
        in_product[id as usize] = true;
        let mut product = vec![id];
        for part in &parts {
            if product.len() as u64 == h.order() {
                break;
            }
            let factors: Vec<&Perm> = part.elements()?.iter().collect();
            let mut next = Vec::new();
            for &x in &product {
                let px = idx.get(x);
                for c in &factors {
                    let y = idx.index(&px.mul(c)).unwrap();
                    if !in_product[y as usize] {
                        in_product[y as usize] = true;
                        next.push(y);
                    }
                }
            }
            product.extend(next);
        }
        if product.len() as u64 != h.order() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An `A`-invariant Sylow `r`-subgroup of the `A`-invariant subgroup `H`.
///
/// Starts from any Sylow `r`-subgroup and walks its conjugacy class until an
/// `A`-invariant member appears.
pub fn invariant_sylow(setup: &ActionSetup, h: &Group, r: u64) -> Result<Group> {
    if !setup.is_invariant(h) {
        return Err(Error::Precondition("H is not A-invariant".into()));
    }
    let p0 = series::sylow_subgroup(h, r)?;
    if p0.is_trivial() || setup.is_invariant(&p0) {
        return Ok(p0);
    }
    let mut orbit = vec![p0];
    let mut head = 0;
    while head < orbit.len() {
        let cur = orbit[head].clone();
        head += 1;
        for g in h.generators() {
            let conj = cur.conjugate(g);
            if orbit.iter().any(|q| q.same_as(&conj)) {
                continue;
            }
            if setup.is_invariant(&conj) {
                return Ok(conj);
            }
            orbit.push(conj);
        }
    }
    Err(Error::Internal(format!(
        "no A-invariant Sylow {r}-subgroup among {} conjugates",
        orbit.len()
    )))
}

/// The induced action on a faithful permutation representation of `G/N`
/// (right multiplication on the cosets of `N`).
pub fn induced_action_on_quotient(setup: &ActionSetup, n: &Group) -> Result<ActionSetup> {
    let g = setup.group();
    if !n.is_normal_in(g) {
        return Err(Error::Precondition("N is not normal in G".into()));
    }
    if !setup.is_invariant(n) {
        return Err(Error::Precondition("N is not A-invariant".into()));
    }
    let cosets = CosetTable::new(g, n)?;
    let m = cosets.len();
    let coset_perm = |y: &Perm| -> Perm {
        let images = (0..m as u32)
            .map(|c| cosets.id_of(&cosets.representative(c).mul(y)).unwrap())
            .collect();
        Perm::from_images(images).expect("right multiplication permutes cosets")
    };
    let mut kept: Vec<(Perm, Perm)> = Vec::new();
    for x in g.generators() {
        let q = coset_perm(x);
        if q.is_identity() || kept.iter().any(|(k, _)| *k == q) {
            continue;
        }
        kept.push((q, x.clone()));
    }
    let quotient = Group::from_generators(m, kept.iter().map(|(q, _)| q.clone()).collect())?;
    let images = (0..setup.k())
        .map(|i| {
            let u = subspace::unit(setup.k(), i);
            kept.iter()
                .map(|(_, x)| Ok(coset_perm(&setup.apply(&u, x)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ActionSetup::new(quotient, setup.p(), setup.k(), images)
}

/// Generator images of the basis automorphisms keyed by exponent-vector
/// strings, for reports and instance files.
pub fn basis_labels(setup: &ActionSetup) -> Vec<(String, AVector)> {
    (0..setup.k())
        .map(|i| {
            let u = subspace::unit(setup.k(), i);
            (format_vector(&u), u)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::fixtures::*;

    fn inversion_images(g: &Group) -> Vec<Perm> {
        g.generators().iter().map(|x| x.inverse()).collect()
    }

    /// C_3 × C_3 on 6 points with the coordinate swap.
    fn swap_setup() -> ActionSetup {
        let a = Perm::from_cycles(6, &[&[0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(6, &[&[3, 4, 5]]).unwrap();
        let g = Group::from_generators(6, vec![a.clone(), b.clone()]).unwrap();
        ActionSetup::validated(g, 2, 1, vec![vec![b, a]]).unwrap()
    }

    #[test]
    fn trivial_action_is_valid() {
        let s = ActionSetup::trivial(heisenberg27(), 2, 3).unwrap();
        assert!(validate_setup(&s).valid);
        for m in s.maximal_subgroups() {
            assert_eq!(s.fixed_subgroup(&m).unwrap().order(), 27);
        }
    }

    #[test]
    fn coprimality_violation_flagged() {
        let g = symmetric(3);
        let s = ActionSetup::trivial(g, 2, 1).unwrap();
        let r = validate_setup(&s);
        assert!(!r.valid);
        assert!(r.violations[0].contains("coprime"));
    }

    #[test]
    fn inversion_on_abelian_three_group() {
        let g = cyclic(9);
        let imgs = inversion_images(&g);
        let s = ActionSetup::validated(g, 2, 1, vec![imgs]).unwrap();
        let whole = ASubgroupDescriptor::whole(2, 1);
        assert!(s.fixed_subgroup(&whole).unwrap().is_trivial());
    }

    #[test]
    fn non_homomorphism_is_reported() {
        // S_3: swapping the 3-cycle and the transposition is not a homomorphism
        let s3 = symmetric(3);
        let gens = s3.generators().to_vec();
        let imgs = vec![gens[1].clone(), gens[0].clone()];
        let s = ActionSetup::new(s3, 5, 1, vec![imgs]).unwrap();
        let report = validate_setup(&s);
        assert!(!report.valid);
        assert!(report.violations[0].contains("homomorphism"));

        // x -> y, y -> y on the Heisenberg group is a homomorphism with a kernel
        let h = heisenberg27();
        let gens = h.generators().to_vec();
        let imgs = vec![gens[1].clone(), gens[1].clone()];
        let s = ActionSetup::new(h, 2, 1, vec![imgs]).unwrap();
        let report = validate_setup(&s);
        assert!(!report.valid);
        assert!(report.violations[0].contains("injective"));
    }

    #[test]
    fn swap_fixes_diagonal() {
        let s = swap_setup();
        let c = s.fixed_subgroup(&ASubgroupDescriptor::whole(2, 1)).unwrap();
        assert_eq!(c.order(), 3);
        let n = c.clone();
        assert!(check_fg1_quotient(&s, &Group::trivial(6), &ASubgroupDescriptor::whole(2, 1)).unwrap());
        assert!(check_fg1_quotient(&s, s.group(), &ASubgroupDescriptor::whole(2, 1)).unwrap());
        assert!(check_fg1_quotient(&s, &n, &ASubgroupDescriptor::whole(2, 1)).unwrap());
        let q = induced_action_on_quotient(&s, &n).unwrap();
        assert_eq!(q.group().order(), 3);
        assert!(validate_setup(&q).valid);
    }

    #[test]
    fn fg2_for_two_inversions() {
        // (Z/2)^2 on C_3 × C_3: e0 inverts the first factor, e1 the second.
        let a = Perm::from_cycles(6, &[&[0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(6, &[&[3, 4, 5]]).unwrap();
        let g = Group::from_generators(6, vec![a.clone(), b.clone()]).unwrap();
        let s = ActionSetup::validated(
            g.clone(),
            2,
            2,
            vec![vec![a.inverse(), b.clone()], vec![a.clone(), b.inverse()]],
        )
        .unwrap();
        let orders: Vec<u64> = s
            .maximal_subgroups()
            .iter()
            .map(|m| s.fixed_subgroup(m).unwrap().order())
            .collect();
        assert_eq!(orders.iter().filter(|&&o| o == 3).count(), 2);
        assert!(check_fg2_generation(&s, &g).unwrap());
        let k1 = ActionSetup::trivial(g.clone(), 2, 1).unwrap();
        assert!(check_fg2_generation(&k1, &g).is_err());
    }

    #[test]
    fn non_commuting_basis_rejected() {
        let a = Perm::from_cycles(6, &[&[0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(6, &[&[3, 4, 5]]).unwrap();
        let g = Group::from_generators(6, vec![a.clone(), b.clone()]).unwrap();
        let s = ActionSetup::validated(
            g,
            2,
            2,
            vec![vec![a.inverse(), b.clone()], vec![b.clone(), a.clone()]],
        );
        // inversion of one factor and the swap do not commute
        assert!(s.is_err());
    }

    #[test]
    fn restriction_and_rank_embedding() {
        let s = swap_setup();
        let e = s.embed_rank(3, 1).unwrap();
        assert!(validate_setup(&e).valid);
        let fixed = e.fixed_subgroup_of_element(&[0, 1, 0]).unwrap();
        assert_eq!(fixed.order(), 3);
        assert_eq!(e.fixed_subgroup_of_element(&[1, 0, 0]).unwrap().order(), 9);
        let d = s.fixed_subgroup(&ASubgroupDescriptor::whole(2, 1)).unwrap();
        let r = s.restrict(&d).unwrap();
        assert_eq!(r.group().order(), 3);
    }
}
