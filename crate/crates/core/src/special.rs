//! A-special and γ-A-special subgroup families and the checks built on them.

use std::collections::HashMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::action::{invariant_sylow, ActionSetup};
use crate::error::{Error, Result};
use crate::group::{commutator_unchecked, iterated_commutator, Group};
use crate::series::{derived_term, lower_central_term, nilpotency_class, prime_factors};
use crate::subspace::{all_subgroups, format_vector, ASubgroupDescriptor};
use crate::verdict::Verdict;

pub const DEFAULT_A_SPECIAL_DEGREE: usize = 4;
pub const DEFAULT_GAMMA_DEGREE: usize = 6;
pub const DEFAULT_MEMBER_CEILING: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpecialKind {
    #[serde(rename = "A-special")]
    ASpecial,
    #[serde(rename = "gamma-A-special")]
    GammaASpecial,
}

/// How a member was first obtained. Parent indices refer to the family of the
/// previous degree; `j` and `n` index the maximal subgroups of `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Recipe {
    /// `C_G(A_j)`
    Centralizer { j: usize },
    /// `[J_1, J_2] ∩ C_G(A_j)`
    Pair { j1: usize, j2: usize, j: usize },
    /// `[J, C_G(A_j)] ∩ C_G(A_n)`
    Gamma { parent: usize, j: usize, n: usize },
}

#[derive(Clone, Debug)]
pub struct SpecialMember {
    pub group: Group,
    pub recipe: Recipe,
    /// Number of recipes producing this subgroup (unordered parent pairs
    /// for A-special members).
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct SpecialFamily {
    pub kind: SpecialKind,
    pub degree: usize,
    pub members: Vec<SpecialMember>,
}

impl SpecialFamily {
    pub fn groups(&self) -> impl Iterator<Item = &Group> {
        self.members.iter().map(|m| &m.group)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind,
            "degree": self.degree,
            "members": self.members.iter().map(|m| json!({
                "order": m.group.order(),
                "generators": m.group.generators(),
                "recipe": m.recipe,
                "multiplicity": m.multiplicity,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Subgroups of `G` as bitsets over its element index.
struct Masks<'a> {
    setup: &'a ActionSetup,
    words: usize,
}

impl<'a> Masks<'a> {
    fn new(setup: &'a ActionSetup) -> Self {
        Masks {
            setup,
            words: setup.index().len().div_ceil(64),
        }
    }

    fn of(&self, h: &Group) -> Result<Vec<u64>> {
        let mut m = vec![0u64; self.words];
        let idx = self.setup.index();
        for x in h.elements()? {
            let i = idx
                .index(x)
                .ok_or_else(|| Error::NotContained("subgroup leaves G".into()))?
                as usize;
            m[i / 64] |= 1 << (i % 64);
        }
        Ok(m)
    }

    fn group(&self, mask: &[u64]) -> Group {
        let idx = self.setup.index();
        let elements = mask.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64)
                .filter(move |b| bits >> b & 1 == 1)
                .map(move |b| idx.get((w * 64 + b) as u32))
        });
        Group::from_elements(self.setup.group().degree(), elements)
    }
}

fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

/// Dedup accumulator for one level.
struct Level<'a> {
    masks: &'a Masks<'a>,
    seen: HashMap<Vec<u64>, usize>,
    members: Vec<SpecialMember>,
    ceiling: usize,
    degree: usize,
}

impl<'a> Level<'a> {
    fn new(masks: &'a Masks<'a>, degree: usize, ceiling: usize) -> Self {
        Level {
            masks,
            seen: HashMap::new(),
            members: Vec::new(),
            ceiling,
            degree,
        }
    }

    fn offer(&mut self, mask: Vec<u64>, recipe: Recipe) -> Result<()> {
        self.offer_weighted(mask, recipe, 1)
    }

    fn offer_weighted(&mut self, mask: Vec<u64>, recipe: Recipe, weight: usize) -> Result<()> {
        if let Some(&i) = self.seen.get(&mask) {
            self.members[i].multiplicity += weight;
            return Ok(());
        }
        if self.members.len() >= self.ceiling {
            return Err(Error::FamilyCeiling {
                degree: self.degree,
                count: self.members.len() + 1,
                ceiling: self.ceiling,
            });
        }
        let group = self.masks.group(&mask);
        self.seen.insert(mask, self.members.len());
        self.members.push(SpecialMember {
            group,
            recipe,
            multiplicity: weight,
        });
        Ok(())
    }
}

fn centralizer_masks(setup: &ActionSetup, masks: &Masks) -> Result<Vec<(Group, Vec<u64>)>> {
    setup
        .maximal_subgroups()
        .iter()
        .map(|m| {
            let c = setup.fixed_subgroup(m)?;
            let mask = masks.of(&c)?;
            Ok((c, mask))
        })
        .collect()
}

fn require_rank_two(setup: &ActionSetup) -> Result<()> {
    if setup.k() < 2 {
        return Err(Error::Precondition(
            "special subgroups are defined through maximal subgroups of A and need k ≥ 2".into(),
        ));
    }
    Ok(())
}

/// Families of A-special subgroups of degrees `0..=max_degree`.
pub fn a_special_lattice(setup: &ActionSetup, max_degree: usize) -> Result<Vec<SpecialFamily>> {
    a_special_lattice_with_ceiling(setup, max_degree, DEFAULT_MEMBER_CEILING)
}

pub fn a_special_lattice_with_ceiling(
    setup: &ActionSetup,
    max_degree: usize,
    ceiling: usize,
) -> Result<Vec<SpecialFamily>> {
    require_rank_two(setup)?;
    let masks = Masks::new(setup);
    let cents = centralizer_masks(setup, &masks)?;

    let mut level = Level::new(&masks, 0, ceiling);
    for (j, (_, mask)) in cents.iter().enumerate() {
        level.offer(mask.clone(), Recipe::Centralizer { j })?;
    }
    let mut families = vec![SpecialFamily {
        kind: SpecialKind::ASpecial,
        degree: 0,
        members: level.members,
    }];

    for degree in 1..=max_degree {
        let prev = &families[degree - 1].members;
        let mut level = Level::new(&masks, degree, ceiling);
        // [J1, J2] = [J2, J1], so unordered pairs suffice; distinct pairs
        // often share a commutator, which is computed once.
        let mut commutators: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut distinct: Vec<(Vec<u64>, usize, usize)> = Vec::new();
        for a in 0..prev.len() {
            for b in a..prev.len() {
                let c = commutator_unchecked(&prev[a].group, &prev[b].group);
                let mask = masks.of(&c)?;
                *commutators.entry(mask.clone()).or_insert_with(|| {
                    distinct.push((mask, a, b));
                    0
                }) += 1;
            }
        }
        for (mask, j1, j2) in &distinct {
            let weight = commutators[mask];
            for (j, (_, cm)) in cents.iter().enumerate() {
                let recipe = Recipe::Pair { j1: *j1, j2: *j2, j };
                level.offer_weighted(and(mask, cm), recipe, weight)?;
            }
        }
        families.push(SpecialFamily {
            kind: SpecialKind::ASpecial,
            degree,
            members: level.members,
        });
    }
    Ok(families)
}

/// Families of γ-A-special subgroups of degrees `1..=max_degree`.
pub fn gamma_a_special_lattice(setup: &ActionSetup, max_degree: usize) -> Result<Vec<SpecialFamily>> {
    gamma_a_special_lattice_with_ceiling(setup, max_degree, DEFAULT_MEMBER_CEILING)
}

pub fn gamma_a_special_lattice_with_ceiling(
    setup: &ActionSetup,
    max_degree: usize,
    ceiling: usize,
) -> Result<Vec<SpecialFamily>> {
    require_rank_two(setup)?;
    let masks = Masks::new(setup);
    let cents = centralizer_masks(setup, &masks)?;
    let mut families: Vec<SpecialFamily> = Vec::new();
    if max_degree == 0 {
        return Ok(families);
    }

    let mut level = Level::new(&masks, 1, ceiling);
    for (j, (_, mask)) in cents.iter().enumerate() {
        level.offer(mask.clone(), Recipe::Centralizer { j })?;
    }
    families.push(SpecialFamily {
        kind: SpecialKind::GammaASpecial,
        degree: 1,
        members: level.members,
    });

    for degree in 2..=max_degree {
        let prev = &families[degree - 2].members;
        let mut level = Level::new(&masks, degree, ceiling);
        for (parent, member) in prev.iter().enumerate() {
            for (j, (cj, _)) in cents.iter().enumerate() {
                let mask = masks.of(&commutator_unchecked(&member.group, cj))?;
                for (n, (_, cn)) in cents.iter().enumerate() {
                    level.offer(and(&mask, cn), Recipe::Gamma { parent, j, n })?;
                }
            }
        }
        families.push(SpecialFamily {
            kind: SpecialKind::GammaASpecial,
            degree,
            members: level.members,
        });
    }
    Ok(families)
}

fn describe(family: &SpecialFamily, i: usize) -> String {
    let m = &family.members[i];
    format!(
        "{:?} degree {} member {} (order {}, recipe {:?})",
        family.kind,
        family.degree,
        i,
        m.group.order(),
        m.recipe
    )
}

/// Every member of degree `i` lies in some member of degree `i − 1`.
pub fn check_aspecial_containment(families: &[SpecialFamily]) -> Verdict {
    for pair in families.windows(2) {
        let (lower, upper) = (&pair[0], &pair[1]);
        for (i, m) in upper.members.iter().enumerate() {
            if !lower.groups().any(|l| m.group.is_subgroup_of(l)) {
                return Verdict::Fails(format!(
                    "{} lies in no member of degree {}",
                    describe(upper, i),
                    lower.degree
                ));
            }
        }
    }
    Verdict::Holds
}

/// The members of degree `i` generate `G^(i)` (A-special) or `γ_i(G)`
/// (γ-A-special).
pub fn check_aspecial_generation(setup: &ActionSetup, families: &[SpecialFamily]) -> Verdict {
    let g = setup.group();
    for f in families {
        let expected = match f.kind {
            SpecialKind::ASpecial => derived_term(g, f.degree),
            SpecialKind::GammaASpecial => lower_central_term(g, f.degree),
        };
        let generated = Group::join_all(g.degree(), f.groups());
        if !generated.same_as(&expected) {
            return Verdict::Fails(format!(
                "{:?} degree {}: members generate a subgroup of order {}, expected {}",
                f.kind,
                f.degree,
                generated.order(),
                expected.order()
            ));
        }
    }
    Verdict::Holds
}

/// Largest co-order exponent allowed for a witness at this degree, or `None`
/// when the degree is outside the range the bound speaks about.
fn witness_codim(kind: SpecialKind, degree: usize, k: usize) -> Option<usize> {
    match kind {
        SpecialKind::ASpecial => {
            let e = 1usize.checked_shl(degree as u32)?;
            (e < k).then_some(e)
        }
        SpecialKind::GammaASpecial => (degree < k).then_some(degree),
    }
}

/// Each member `H` of degree `i` lies in `C_G(B)^(i)` (resp. `γ_i(C_G(B))`)
/// for some `B ≤ A` with `|A/B| ≤ p^(2^i)` (resp. `p^i`). Degrees outside
/// `2^i ≤ k − 1` (resp. `i ≤ k − 1`) are skipped; if every degree is
/// skipped the verdict is not-applicable.
pub fn check_aspecial_degree_bound(setup: &ActionSetup, families: &[SpecialFamily]) -> Result<Verdict> {
    let subgroups = all_subgroups(setup.p(), setup.k());
    let mut checked = 0;
    let mut terms: HashMap<(ASubgroupDescriptor, usize), Group> = HashMap::new();
    for f in families {
        let Some(bound) = witness_codim(f.kind, f.degree, setup.k()) else {
            continue;
        };
        checked += 1;
        for (i, m) in f.members.iter().enumerate() {
            let mut found = false;
            for b in subgroups.iter().take_while(|b| b.codim() <= bound) {
                let key = (b.clone(), f.degree);
                let term = match terms.get(&key) {
                    Some(t) => t.clone(),
                    None => {
                        let c = setup.fixed_subgroup(b)?;
                        let t = match f.kind {
                            SpecialKind::ASpecial => derived_term(&c, f.degree),
                            SpecialKind::GammaASpecial => lower_central_term(&c, f.degree),
                        };
                        terms.insert(key, t.clone());
                        t
                    }
                };
                if m.group.is_subgroup_of(&term) {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(Verdict::Fails(format!(
                    "{} has no witness B with |A/B| ≤ {}^{}",
                    describe(f, i),
                    setup.p(),
                    bound
                )));
            }
        }
    }
    if checked == 0 {
        return Ok(Verdict::NotApplicable(format!(
            "no computed degree lies in the range covered by k = {}",
            setup.k()
        )));
    }
    Ok(Verdict::Holds)
}

/// For every prime `r` dividing `|G^(d)|`, an `A`-invariant Sylow
/// `r`-subgroup `R` of `G^(d)` is generated by its intersections with the
/// A-special subgroups of degree `d`.
pub fn check_sylow_generation(setup: &ActionSetup, families: &[SpecialFamily], d: usize) -> Result<Verdict> {
    let family = families
        .iter()
        .find(|f| f.kind == SpecialKind::ASpecial && f.degree == d)
        .ok_or_else(|| Error::Precondition(format!("A-special family of degree {d} was not computed")))?;
    let gd = derived_term(setup.group(), d);
    for r in prime_factors(gd.order()) {
        let sylow = invariant_sylow(setup, &gd, r)?;
        let parts = family
            .groups()
            .map(|h| sylow.intersection(h))
            .collect::<Result<Vec<_>>>()?;
        let generated = Group::join_all(gd.degree(), parts.iter());
        if !generated.same_as(&sylow) {
            return Ok(Verdict::Fails(format!(
                "Sylow {r}-subgroup of G^({d}) has order {} but its intersections with degree-{d} members generate order {}",
                sylow.order(),
                generated.order()
            )));
        }
    }
    Ok(Verdict::Holds)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum TheoremMode {
    Derived { d: usize },
    Gamma,
}

impl TheoremMode {
    /// Degree of the special family that the commutator relation ranges over.
    pub fn family_degree(&self, k: usize) -> usize {
        match self {
            TheoremMode::Derived { d } => *d,
            TheoremMode::Gamma => k.saturating_sub(2),
        }
    }

    pub fn kind(&self) -> SpecialKind {
        match self {
            TheoremMode::Derived { .. } => SpecialKind::ASpecial,
            TheoremMode::Gamma => SpecialKind::GammaASpecial,
        }
    }

    pub fn check_bounds(&self, k: usize) -> Result<()> {
        match self {
            TheoremMode::Derived { d } => {
                let ok = k >= 3 && (*d as u32) < 62 && (1usize << d) + 2 <= k;
                if !ok {
                    return Err(Error::Precondition(format!("derived mode needs 2^d + 2 ≤ k, got d = {d}, k = {k}")));
                }
            }
            TheoremMode::Gamma => {
                if k < 3 {
                    return Err(Error::Precondition(format!("gamma mode needs k ≥ 3, got k = {k}")));
                }
            }
        }
        Ok(())
    }

    /// The subgroup the hypothesis constrains inside each `C_G(a)`, and the
    /// one the conclusion is about inside `G`.
    pub fn term(&self, g: &Group, k: usize) -> Group {
        match self {
            TheoremMode::Derived { d } => derived_term(g, *d),
            TheoremMode::Gamma => lower_central_term(g, k - 2),
        }
    }
}

/// `[C_G(A_j), H, …, H] = 1` with `c + 1` copies of `H`, for every maximal
/// `A_j` and every member `H` of the relevant family.
pub fn check_key_commutator_relation(
    setup: &ActionSetup,
    families: &[SpecialFamily],
    c: usize,
    mode: TheoremMode,
) -> Result<Verdict> {
    mode.check_bounds(setup.k())?;
    let degree = mode.family_degree(setup.k());
    let family = families
        .iter()
        .find(|f| f.kind == mode.kind() && f.degree == degree)
        .ok_or_else(|| Error::Precondition(format!("special family of degree {degree} was not computed")))?;
    for (j, m) in setup.maximal_subgroups().iter().enumerate() {
        let cj = setup.fixed_subgroup(m)?;
        for (i, h) in family.groups().enumerate() {
            let x = iterated_commutator(&cj, h, c + 1);
            if !x.is_trivial() {
                return Ok(Verdict::Fails(format!(
                    "[C_G(A_{j}), {} × H] ≠ 1 for {} (order {} left)",
                    c + 1,
                    describe(family, i),
                    x.order()
                )));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// `max` over normalized `a ∈ A^#` of the class of the hypothesis term inside
/// `C_G(a)`. `Err` carries the first `a` whose term is not nilpotent.
pub fn hypothesis_class(setup: &ActionSetup, mode: TheoremMode) -> Result<std::result::Result<usize, String>> {
    let mut c = 0;
    for a in crate::subspace::normalized_nonzero_vectors(setup.p(), setup.k()) {
        let centralizer = setup.fixed_subgroup_of_element(&a)?;
        let term = mode.term(&centralizer, setup.k());
        match nilpotency_class(&term) {
            Some(cls) => c = c.max(cls),
            None => {
                return Ok(Err(format!(
                    "the hypothesis term of C_G(a) for a = ({}) is not nilpotent",
                    format_vector(&a)
                )))
            }
        }
    }
    Ok(Ok(c))
}
