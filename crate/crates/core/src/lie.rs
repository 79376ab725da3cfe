//! The associated graded Lie ring `L(G) = ⊕ γ_i/γ_{i+1}` of a nilpotent
//! group, its homogeneous subspaces, and the induced `A`-action.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::action::ActionSetup;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::perm::gcd;
use crate::section::AbelianSection;
use crate::series::{lower_central_series, nilpotency_class};
use crate::subspace::{format_vector, ASubgroupDescriptor};
use crate::verdict::Verdict;

/// Component pairs with at most this many element pairs in total are
/// checked for bilinearity exhaustively.
pub const EXHAUSTIVE_PAIR_BUDGET: u64 = 1 << 20;
/// Random pairs drawn when the budget is exceeded.
pub const SAMPLED_PAIRS: usize = 200;

#[derive(Clone)]
struct Component {
    section: AbelianSection,
    /// global index of the first basis element
    offset: usize,
}

impl Component {
    fn size(&self) -> u32 {
        self.section.order() as u32
    }

    fn rank(&self) -> usize {
        self.section.rank()
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        self.section.add(a, b)
    }

    fn unit(&self, i: usize) -> u32 {
        let mut v = vec![0i64; self.rank()];
        v[i] = 1;
        self.section.index_of_vector(&v)
    }
}

/// `L(G)` with structure constants on the cyclic bases of the components.
#[derive(Clone)]
pub struct GradedLieRing {
    group: Group,
    terms: Vec<Group>,
    components: Vec<Component>,
    /// `(weight, position in component)` for each global basis index
    basis: Vec<(usize, usize)>,
    /// `constants[a][b]`: exponent vector of `[e_a, e_b]` in the component
    /// of weight `w(a) + w(b)`, empty when that weight exceeds the class.
    constants: Vec<Vec<Vec<u64>>>,
    grading: Verdict,
}

impl std::fmt::Debug for GradedLieRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let orders: Vec<_> = self.components.iter().map(|c| c.section.orders().to_vec()).collect();
        write!(f, "L(G) with components {orders:?}")
    }
}

/// `L(G)` for nilpotent `G`.
pub fn lie_ring_of(g: &Group) -> Result<GradedLieRing> {
    let series = lower_central_series(g)?;
    if series.class_or_length.is_none() {
        return Err(Error::Precondition("G is not nilpotent".into()));
    }
    let terms = series.terms;
    let mut components = Vec::new();
    let mut basis = Vec::new();
    for w in 0..terms.len() - 1 {
        let section = AbelianSection::new(&terms[w], &terms[w + 1])?;
        let offset = basis.len();
        for i in 0..section.rank() {
            basis.push((w + 1, i));
        }
        components.push(Component { section, offset });
    }
    let class = components.len();
    let n = basis.len();
    let mut constants = vec![vec![Vec::new(); n]; n];
    let mut grading = Verdict::Holds;
    for a in 0..n {
        for b in 0..n {
            let (wa, ia) = basis[a];
            let (wb, ib) = basis[b];
            let x = &components[wa - 1].section.basis()[ia];
            let y = &components[wb - 1].section.basis()[ib];
            let c = x.commutator(y);
            let target = wa + wb;
            if target > class {
                if !c.is_identity() && grading.holds() {
                    grading = Verdict::Fails(format!(
                        "commutator of weights {wa} and {wb} is nontrivial beyond the class"
                    ));
                }
                continue;
            }
            match components[target - 1].section.decompose(&c) {
                Ok(v) => constants[a][b] = v,
                Err(_) => {
                    if grading.holds() {
                        grading = Verdict::Fails(format!(
                            "commutator of weights {wa} and {wb} leaves γ_{target}"
                        ));
                    }
                    constants[a][b] = vec![0; components[target - 1].rank()];
                }
            }
        }
    }
    let ring = GradedLieRing {
        group: g.clone(),
        terms,
        components,
        basis,
        constants,
        grading,
    };
    let axioms = Verdict::all([ring.check_alternating(), ring.check_antisymmetry(), ring.check_jacobi()]);
    if let Verdict::Fails(why) = axioms {
        return Err(Error::Internal(format!("constructed ring violates a Lie axiom: {why}")));
    }
    Ok(ring)
}

/// Exhaustive or sampled outcome of the axiom checks.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub alternating: Verdict,
    pub antisymmetry: Verdict,
    pub jacobi: Verdict,
    pub grading: Verdict,
    pub bilinearity: Verdict,
    pub bilinearity_exhaustive: bool,
}

impl AxiomReport {
    pub fn overall(&self) -> Verdict {
        Verdict::all([
            self.alternating.clone(),
            self.antisymmetry.clone(),
            self.jacobi.clone(),
            self.grading.clone(),
            self.bilinearity.clone(),
        ])
    }
}

impl GradedLieRing {
    pub fn group(&self) -> &Group {
        &self.group
    }

    /// `γ_1, …, γ_{c+1}`
    pub fn terms(&self) -> &[Group] {
        &self.terms
    }

    pub fn class(&self) -> usize {
        self.components.len()
    }

    /// The section `γ_w/γ_{w+1}` for `w ≥ 1`.
    pub fn component(&self, w: usize) -> &AbelianSection {
        &self.components[w - 1].section
    }

    pub fn component_size(&self, w: usize) -> u32 {
        self.components[w - 1].size()
    }

    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    /// `(weight, position)` of a global basis index.
    pub fn basis_position(&self, a: usize) -> (usize, usize) {
        self.basis[a]
    }

    pub fn structure_constant(&self, a: usize, b: usize) -> &[u64] {
        &self.constants[a][b]
    }

    /// Changes one structure constant so that tests can confirm the checks
    /// notice. Picks the first pair `a < b` whose bracket lands in a nonzero
    /// component. Returns the pair, or `None` when every bracket is forced to
    /// vanish by the grading.
    pub fn corrupt_structure_constant(&mut self) -> Option<(usize, usize)> {
        for a in 0..self.basis.len() {
            for b in a + 1..self.basis.len() {
                let target = self.basis[a].0 + self.basis[b].0;
                if target > self.class() {
                    continue;
                }
                let orders = self.components[target - 1].section.orders().to_vec();
                let v = &mut self.constants[a][b];
                v[0] = (v[0] + 1) % orders[0];
                return Some((a, b));
            }
        }
        None
    }

    /// Index of the basis element `e_a` in its component.
    fn basis_element(&self, a: usize) -> (usize, u32) {
        let (w, i) = self.basis[a];
        (w, self.components[w - 1].unit(i))
    }

    /// `[x, y]` for homogeneous `x` of weight `wx`, `y` of weight `wy`, by
    /// bi-additive extension of the structure constants. `None` when the
    /// weight exceeds the class (the bracket is zero).
    pub fn bracket(&self, wx: usize, x: u32, wy: usize, y: u32) -> Option<(usize, u32)> {
        let target = wx + wy;
        if target > self.class() {
            return None;
        }
        let cx = &self.components[wx - 1];
        let cy = &self.components[wy - 1];
        let vx = cx.section.vector_of(x);
        let vy = cy.section.vector_of(y);
        let rank = self.components[target - 1].rank();
        let mut acc = vec![0i64; rank];
        for (i, &ex) in vx.iter().enumerate() {
            if ex == 0 {
                continue;
            }
            for (j, &ey) in vy.iter().enumerate() {
                if ey == 0 {
                    continue;
                }
                let k = &self.constants[cx.offset + i][cy.offset + j];
                for (t, &kt) in k.iter().enumerate() {
                    acc[t] += (ex * ey * kt) as i64;
                }
            }
        }
        let orders = self.components[target - 1].section.orders();
        for (t, o) in orders.iter().enumerate() {
            acc[t] = acc[t].rem_euclid(*o as i64);
        }
        Some((target, self.components[target - 1].section.index_of_vector(&acc)))
    }

    /// `[x, y]` computed in the group from coset representatives.
    fn group_bracket(&self, wx: usize, x: u32, wy: usize, y: u32) -> std::result::Result<Option<u32>, String> {
        let gx = self.components[wx - 1].section.representative(x);
        let gy = self.components[wy - 1].section.representative(y);
        let c = gx.commutator(gy);
        let target = wx + wy;
        if target > self.class() {
            return if c.is_identity() {
                Ok(None)
            } else {
                Err("nontrivial commutator beyond the class".into())
            };
        }
        self.components[target - 1]
            .section
            .index_of(&c)
            .map(Some)
            .ok_or_else(|| format!("commutator leaves γ_{target}"))
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.basis.len();
        (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
    }

    fn is_zero(v: &[u64]) -> bool {
        v.iter().all(|&x| x == 0)
    }

    pub fn check_alternating(&self) -> Verdict {
        for a in 0..self.basis.len() {
            if !Self::is_zero(&self.constants[a][a]) {
                return Verdict::Fails(format!("[e{a}, e{a}] ≠ 0"));
            }
        }
        Verdict::Holds
    }

    pub fn check_antisymmetry(&self) -> Verdict {
        for (a, b) in self.pairs() {
            let (wa, xa) = self.basis_element(a);
            let (wb, xb) = self.basis_element(b);
            let (Some((w, ab)), Some((_, ba))) = (self.bracket(wa, xa, wb, xb), self.bracket(wb, xb, wa, xa))
            else {
                continue;
            };
            if self.components[w - 1].add(ab, ba) != 0 {
                return Verdict::Fails(format!("[e{a}, e{b}] ≠ −[e{b}, e{a}]"));
            }
        }
        Verdict::Holds
    }

    fn nested(&self, a: usize, b: usize, c: usize) -> Option<(usize, u32)> {
        let (wa, xa) = self.basis_element(a);
        let (wb, xb) = self.basis_element(b);
        let (wc, xc) = self.basis_element(c);
        let (w, ab) = self.bracket(wa, xa, wb, xb)?;
        self.bracket(w, ab, wc, xc)
    }

    pub fn check_jacobi(&self) -> Verdict {
        let n = self.basis.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let w = self.basis[a].0 + self.basis[b].0 + self.basis[c].0;
                    if w > self.class() {
                        continue;
                    }
                    let comp = &self.components[w - 1];
                    let sum = [self.nested(a, b, c), self.nested(b, c, a), self.nested(c, a, b)]
                        .iter()
                        .fold(0, |acc, t| match t {
                            Some((_, x)) => comp.add(acc, *x),
                            None => acc,
                        });
                    if sum != 0 {
                        return Verdict::Fails(format!("Jacobi fails on (e{a}, e{b}, e{c})"));
                    }
                }
            }
        }
        Verdict::Holds
    }

    pub fn check_grading(&self) -> Verdict {
        if !self.grading.holds() {
            return self.grading.clone();
        }
        for (a, b) in self.pairs() {
            let target = self.basis[a].0 + self.basis[b].0;
            let expected = if target > self.class() { 0 } else { self.components[target - 1].rank() };
            if self.constants[a][b].len() != expected {
                return Verdict::Fails(format!("[e{a}, e{b}] is not homogeneous of weight {target}"));
            }
        }
        Verdict::Holds
    }

    /// Compares the bi-additive bracket with group commutators of lifted
    /// representatives; exhaustive under the pair budget, sampled beyond it.
    pub fn check_bilinearity(&self, seed: u64) -> (Verdict, bool) {
        let c = self.class();
        let total: u64 = (1..=c)
            .flat_map(|i| (1..=c).map(move |j| (i, j)))
            .map(|(i, j)| self.component_size(i) as u64 * self.component_size(j) as u64)
            .sum();
        let compare = |wx: usize, x: u32, wy: usize, y: u32| -> Option<String> {
            let via_constants = self.bracket(wx, x, wy, y).map(|(_, z)| z);
            match self.group_bracket(wx, x, wy, y) {
                Err(e) => Some(e),
                Ok(g) => {
                    let g = g.filter(|&z| z != 0);
                    let k = via_constants.filter(|&z| z != 0);
                    (g != k).then(|| format!("bracket of ({wx}:{x}) and ({wy}:{y}) disagrees with the group"))
                }
            }
        };
        if total <= EXHAUSTIVE_PAIR_BUDGET {
            for wx in 1..=c {
                for wy in 1..=c {
                    for x in 0..self.component_size(wx) {
                        for y in 0..self.component_size(wy) {
                            if let Some(e) = compare(wx, x, wy, y) {
                                return (Verdict::Fails(e), true);
                            }
                        }
                    }
                }
            }
            return (Verdict::Holds, true);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..SAMPLED_PAIRS {
            let wx = rng.gen_range(1..=c);
            let wy = rng.gen_range(1..=c);
            let x = rng.gen_range(0..self.component_size(wx));
            let y = rng.gen_range(0..self.component_size(wy));
            if let Some(e) = compare(wx, x, wy, y) {
                return (Verdict::Fails(e), false);
            }
        }
        (Verdict::Holds, false)
    }

    pub fn check_axioms(&self, seed: u64) -> AxiomReport {
        let (bilinearity, bilinearity_exhaustive) = self.check_bilinearity(seed);
        AxiomReport {
            alternating: self.check_alternating(),
            antisymmetry: self.check_antisymmetry(),
            jacobi: self.check_jacobi(),
            grading: self.check_grading(),
            bilinearity,
            bilinearity_exhaustive,
        }
    }

    pub fn to_json(&self) -> Value {
        let components: Vec<Value> = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| json!({ "weight": i + 1, "orders": c.section.orders() }))
            .collect();
        let mut constants = Vec::new();
        for (a, b) in self.pairs() {
            let v = &self.constants[a][b];
            if a < b && !Self::is_zero(v) {
                constants.push(json!({ "a": a, "b": b, "value": v }));
            }
        }
        json!({
            "class": self.class(),
            "components": components,
            "basis": self.basis.iter().map(|(w, i)| json!([w, i])).collect::<Vec<_>>(),
            "structure_constants": constants,
        })
    }

    // -- subspace arithmetic -------------------------------------------------

    fn span_in(&self, w: usize, gens: &[u32]) -> Vec<u32> {
        let comp = &self.components[w - 1];
        let mut seen = vec![false; comp.size() as usize];
        seen[0] = true;
        let mut out = vec![0u32];
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            head += 1;
            for &g in gens {
                let y = comp.add(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// A small generating set of a subgroup of the component of weight `w`.
    fn generators_in(&self, w: usize, elements: &[u32]) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut span: HashSet<u32> = HashSet::from([0]);
        for &x in elements {
            if !span.contains(&x) {
                gens.push(x);
                span = self.span_in(w, &gens).into_iter().collect();
            }
        }
        gens
    }

    pub fn zero_subspace(&self) -> LieSubspace {
        LieSubspace {
            parts: vec![vec![0]; self.class()],
        }
    }

    pub fn whole(&self) -> LieSubspace {
        LieSubspace {
            parts: (1..=self.class()).map(|w| (0..self.component_size(w)).collect()).collect(),
        }
    }

    pub fn sum(&self, x: &LieSubspace, y: &LieSubspace) -> LieSubspace {
        LieSubspace {
            parts: (1..=self.class())
                .map(|w| {
                    let mut gens = self.generators_in(w, &x.parts[w - 1]);
                    gens.extend(self.generators_in(w, &y.parts[w - 1]));
                    self.span_in(w, &gens)
                })
                .collect(),
        }
    }

    pub fn intersection(&self, x: &LieSubspace, y: &LieSubspace) -> LieSubspace {
        LieSubspace {
            parts: x
                .parts
                .iter()
                .zip(&y.parts)
                .map(|(a, b)| {
                    let b: HashSet<u32> = b.iter().copied().collect();
                    a.iter().copied().filter(|v| b.contains(v)).collect()
                })
                .collect(),
        }
    }

    /// The additive span of `[x, y]` over `x ∈ X`, `y ∈ Y`.
    pub fn bracket_span(&self, x: &LieSubspace, y: &LieSubspace) -> LieSubspace {
        let c = self.class();
        let mut gens: Vec<Vec<u32>> = vec![Vec::new(); c];
        let xg: Vec<Vec<u32>> = (1..=c).map(|w| self.generators_in(w, &x.parts[w - 1])).collect();
        let yg: Vec<Vec<u32>> = (1..=c).map(|w| self.generators_in(w, &y.parts[w - 1])).collect();
        for wx in 1..=c {
            for wy in 1..=c - wx {
                for &a in &xg[wx - 1] {
                    for &b in &yg[wy - 1] {
                        if let Some((w, z)) = self.bracket(wx, a, wy, b) {
                            gens[w - 1].push(z);
                        }
                    }
                }
            }
        }
        LieSubspace {
            parts: (1..=c).map(|w| self.span_in(w, &gens[w - 1])).collect(),
        }
    }

    /// The subring generated by `x`.
    pub fn generated_subring(&self, x: &LieSubspace) -> LieSubspace {
        let mut s = x.clone();
        loop {
            let next = self.sum(&s, &self.bracket_span(&s, &s));
            if next == s {
                return s;
            }
            s = next;
        }
    }

    pub fn is_bracket_closed(&self, x: &LieSubspace) -> bool {
        self.bracket_span(x, x).is_subspace_of(x)
    }
}

/// A homogeneous additive subgroup of `L`: one subgroup per component, kept
/// as the sorted element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LieSubspace {
    parts: Vec<Vec<u32>>,
}

impl LieSubspace {
    /// Elements in the component of weight `w`.
    pub fn part(&self, w: usize) -> &[u32] {
        &self.parts[w - 1]
    }

    pub fn contains(&self, w: usize, x: u32) -> bool {
        self.parts[w - 1].binary_search(&x).is_ok()
    }

    pub fn is_subspace_of(&self, other: &LieSubspace) -> bool {
        self.parts
            .iter()
            .enumerate()
            .all(|(i, p)| p.iter().all(|&x| other.contains(i + 1, x)))
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|p| p.len() == 1)
    }

    /// Orders of the parts.
    pub fn orders(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.len()).collect()
    }
}

/// `L(G, H) = ⊕ (H ∩ γ_i)γ_{i+1}/γ_{i+1}`.
pub fn lie_subring_of_subgroup(l: &GradedLieRing, h: &Group) -> Result<LieSubspace> {
    if !h.is_subgroup_of(l.group()) {
        return Err(Error::NotContained("H is not a subgroup of G".into()));
    }
    let mut parts = Vec::with_capacity(l.class());
    for w in 1..=l.class() {
        let meet = h.intersection(&l.terms[w - 1])?;
        let section = l.component(w);
        let mut idx: Vec<u32> = meet
            .elements()?
            .iter()
            .map(|x| section.index_of(x).expect("γ_w element lies in the section"))
            .collect();
        idx.sort_unstable();
        idx.dedup();
        parts.push(idx);
    }
    let s = LieSubspace { parts };
    if !l.is_bracket_closed(&s) {
        return Err(Error::Internal("L(G, H) is not closed under the bracket".into()));
    }
    Ok(s)
}

/// The action of the basis of `A` on every component of `L`, tabulated.
#[derive(Clone, Debug)]
pub struct InducedAction {
    p: u32,
    k: usize,
    /// `tables[u][w - 1][x]`: image of `x` under basis automorphism `u`
    tables: Vec<Vec<Vec<u32>>>,
}

pub fn induced_a_action(l: &GradedLieRing, setup: &ActionSetup) -> Result<InducedAction> {
    if !setup.group().same_as(l.group()) {
        return Err(Error::Precondition("ring and action are over different groups".into()));
    }
    let mut tables = Vec::with_capacity(setup.k());
    for u in 0..setup.k() {
        let e = crate::subspace::unit(setup.k(), u);
        let mut per = Vec::with_capacity(l.class());
        for w in 1..=l.class() {
            let section = l.component(w);
            let table = (0..section.order() as u32)
                .map(|x| {
                    let image = setup.apply(&e, section.representative(x))?;
                    section
                        .index_of(&image)
                        .ok_or_else(|| Error::Internal(format!("automorphism e{u} does not preserve γ_{w}")))
                })
                .collect::<Result<Vec<u32>>>()?;
            per.push(table);
        }
        tables.push(per);
    }
    Ok(InducedAction {
        p: setup.p(),
        k: setup.k(),
        tables,
    })
}

impl InducedAction {
    pub fn apply(&self, u: &[u32], w: usize, mut x: u32) -> u32 {
        for (i, &e) in u.iter().enumerate() {
            for _ in 0..e {
                x = self.tables[i][w - 1][x as usize];
            }
        }
        x
    }

    /// Images of each component basis element under each basis element of
    /// `A`, as exponent vectors: `[u][w - 1][i]`.
    pub fn matrices(&self, l: &GradedLieRing) -> Vec<Vec<Vec<Vec<u64>>>> {
        self.tables
            .iter()
            .map(|per| {
                (1..=l.class())
                    .map(|w| {
                        let comp = &l.components[w - 1];
                        (0..comp.rank())
                            .map(|i| comp.section.vector_of(per[w - 1][comp.unit(i) as usize]))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// Additivity and compatibility with the bracket on basis pairs.
    pub fn verify(&self, l: &GradedLieRing) -> Verdict {
        for (u, per) in self.tables.iter().enumerate() {
            for w in 1..=l.class() {
                let comp = &l.components[w - 1];
                let t = &per[w - 1];
                for x in 0..comp.size() {
                    for i in 0..comp.rank() {
                        let b = comp.unit(i);
                        if t[comp.add(x, b) as usize] != comp.add(t[x as usize], t[b as usize]) {
                            return Verdict::Fails(format!("e{u} is not additive on component {w}"));
                        }
                    }
                }
            }
            for a in 0..l.basis_len() {
                for b in 0..l.basis_len() {
                    let (wa, xa) = l.basis_element(a);
                    let (wb, xb) = l.basis_element(b);
                    let Some((w, z)) = l.bracket(wa, xa, wb, xb) else {
                        continue;
                    };
                    let lhs = per[w - 1][z as usize];
                    let rhs = l
                        .bracket(wa, per[wa - 1][xa as usize], wb, per[wb - 1][xb as usize])
                        .map_or(0, |(_, r)| r);
                    if lhs != rhs {
                        return Verdict::Fails(format!("e{u} does not commute with [e{a}, e{b}]"));
                    }
                }
            }
        }
        Verdict::Holds
    }

    /// `C_L(B)`.
    pub fn fixed_subspace(&self, l: &GradedLieRing, b: &ASubgroupDescriptor) -> LieSubspace {
        LieSubspace {
            parts: (1..=l.class())
                .map(|w| {
                    (0..l.component_size(w))
                        .filter(|&x| b.basis().iter().all(|u| self.apply(u, w, x) == x))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn is_invariant(&self, l: &GradedLieRing, s: &LieSubspace) -> bool {
        (0..self.k).all(|u| {
            (1..=l.class()).all(|w| {
                s.part(w)
                    .iter()
                    .all(|&x| s.contains(w, self.tables[u][w - 1][x as usize]))
            })
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
}

/// `C_L(B) = L(G, C_G(B))`, componentwise.
pub fn check_centralizer_transfer(
    l: &GradedLieRing,
    setup: &ActionSetup,
    action: &InducedAction,
    b: &ASubgroupDescriptor,
) -> Result<Verdict> {
    let lhs = action.fixed_subspace(l, b);
    let rhs = lie_subring_of_subgroup(l, &setup.fixed_subgroup(b)?)?;
    Ok(Verdict::from_bool(lhs == rhs, || {
        format!(
            "B = {:?}: fixed subspace has part orders {:?}, L(G, C_G(B)) has {:?}",
            b,
            lhs.orders(),
            rhs.orders()
        )
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LieSeriesKind {
    LowerCentral,
    Derived,
}

/// Lower central series (`γ_1(L) = L`, `γ_{n+1}(L) = [γ_n(L), L]`) or
/// derived series (`L^(0) = L`, `L^(n+1) = [L^(n), L^(n)]`), up to and
/// including the first repeated or zero term.
pub fn lie_series(l: &GradedLieRing, kind: LieSeriesKind) -> Vec<LieSubspace> {
    let whole = l.whole();
    let mut terms = vec![whole.clone()];
    loop {
        let last = terms.last().unwrap();
        if last.is_zero() {
            return terms;
        }
        let next = match kind {
            LieSeriesKind::LowerCentral => l.bracket_span(last, &whole),
            LieSeriesKind::Derived => l.bracket_span(last, last),
        };
        if &next == last {
            return terms;
        }
        terms.push(next);
    }
}

/// The Lie ring has the same nilpotency class as `G`.
pub fn check_class_transfer(l: &GradedLieRing, g: &Group) -> Verdict {
    let Some(group_class) = nilpotency_class(g) else {
        return Verdict::NotApplicable("G is not nilpotent".into());
    };
    let series = lie_series(l, LieSeriesKind::LowerCentral);
    let lie_class = if series.last().is_some_and(|s| s.is_zero()) {
        Some(series.len() - 1)
    } else {
        None
    };
    Verdict::from_bool(lie_class == Some(group_class), || {
        format!("L has class {lie_class:?}, G has class {group_class}")
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpanMode {
    /// `[R_i, R_j] ∩ C_L(A_k) ≤ R_m`
    Pairwise,
    /// `[R_i, C_L(A_j)] ∩ C_L(A_k) ≤ R_m`
    Gamma,
}

/// If `L` is generated by `A`-invariant subspaces `R_i` satisfying the
/// closure hypothesis of `mode`, then `L = Σ R_i`. An unmet hypothesis
/// (including failure to generate `L`) is reported as such, not as a failure.
pub fn check_span_lemma(
    l: &GradedLieRing,
    setup: &ActionSetup,
    action: &InducedAction,
    subspaces: &[LieSubspace],
    mode: SpanMode,
) -> Result<Verdict> {
    for (i, r) in subspaces.iter().enumerate() {
        if !action.is_invariant(l, r) {
            return Err(Error::Precondition(format!("subspace {i} is not A-invariant")));
        }
    }
    let p = setup.p() as u64;
    for w in 1..=l.class() {
        if gcd(l.component(w).order(), p) != 1 {
            return Ok(Verdict::HypothesisNotMet(format!("component {w} is not p-divisible")));
        }
    }
    let total = subspaces.iter().fold(l.zero_subspace(), |acc, r| l.sum(&acc, r));
    if l.generated_subring(&total) != l.whole() {
        return Ok(Verdict::HypothesisNotMet("the subspaces do not generate L".into()));
    }
    let centralizers: Vec<LieSubspace> = setup
        .maximal_subgroups()
        .iter()
        .map(|m| action.fixed_subspace(l, m))
        .collect();
    let seconds: Vec<&LieSubspace> = match mode {
        SpanMode::Pairwise => subspaces.iter().collect(),
        SpanMode::Gamma => centralizers.iter().collect(),
    };
    for (i, r) in subspaces.iter().enumerate() {
        for (j, s) in seconds.iter().enumerate() {
            let br = l.bracket_span(r, s);
            for (k, ck) in centralizers.iter().enumerate() {
                let meet = l.intersection(&br, ck);
                if !subspaces.iter().any(|m| meet.is_subspace_of(m)) {
                    return Ok(Verdict::HypothesisNotMet(format!(
                        "closure fails for (i, j, k) = ({i}, {j}, {k})"
                    )));
                }
            }
        }
    }
    Ok(Verdict::from_bool(total == l.whole(), || {
        format!("the subspaces span parts of orders {:?} only", total.orders())
    }))
}

/// Starting from `seeds`, adds `[R_i, X] ∩ C_L(A_k)` until the family is
/// closed, where `X` ranges over the family (pairwise) or over the
/// `C_L(A_j)` (gamma). The result satisfies the closure hypothesis of the
/// span lemma by construction. `None` if more than `ceiling` subspaces arise.
pub fn span_closure_family(
    l: &GradedLieRing,
    setup: &ActionSetup,
    action: &InducedAction,
    seeds: Vec<LieSubspace>,
    mode: SpanMode,
    ceiling: usize,
) -> Option<Vec<LieSubspace>> {
    let centralizers: Vec<LieSubspace> = setup
        .maximal_subgroups()
        .iter()
        .map(|m| action.fixed_subspace(l, m))
        .collect();
    let mut family: Vec<LieSubspace> = Vec::new();
    let mut seen: HashSet<LieSubspace> = HashSet::new();
    for s in seeds {
        if seen.insert(s.clone()) {
            family.push(s);
        }
    }
    let mut head = 0;
    while head < family.len() {
        let r = family[head].clone();
        let seconds: Vec<LieSubspace> = match mode {
            SpanMode::Pairwise => family[..=head].to_vec(),
            SpanMode::Gamma => centralizers.clone(),
        };
        head += 1;
        for s in &seconds {
            let mut brs = vec![l.bracket_span(&r, s)];
            if mode == SpanMode::Pairwise {
                brs.push(l.bracket_span(s, &r));
            }
            for br in brs {
                for ck in &centralizers {
                    let meet = l.intersection(&br, ck);
                    if seen.insert(meet.clone()) {
                        family.push(meet);
                        if family.len() > ceiling {
                            return None;
                        }
                    }
                }
            }
        }
    }
    Some(family)
}

/// The subspaces `C_L(A_j)`, one per maximal subgroup.
pub fn maximal_centralizer_subspaces(
    l: &GradedLieRing,
    setup: &ActionSetup,
    action: &InducedAction,
) -> Vec<LieSubspace> {
    setup
        .maximal_subgroups()
        .iter()
        .map(|m| action.fixed_subspace(l, m))
        .collect()
}

pub fn describe_subgroup(b: &ASubgroupDescriptor) -> String {
    b.basis().iter().map(|v| format_vector(v)).collect::<Vec<_>>().join(" | ")
}
