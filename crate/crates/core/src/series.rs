//! Lower central, derived and upper central series; nilpotency class;
//! Sylow subgroups and the Fitting subgroup.

use crate::error::{Error, Result};
use crate::group::{commutator_unchecked, Group};

/// Iteration guard; a strictly monotone chain of subgroups of a group of
/// order below 2^64 is shorter than this.
const MAX_SERIES_LENGTH: usize = 64;

#[derive(Clone, Debug)]
pub struct SeriesResult {
    pub terms: Vec<Group>,
    pub stabilized: bool,
    /// Nilpotency class (lower/upper central) or derived length, when the
    /// series reaches its natural end point.
    pub class_or_length: Option<usize>,
}

fn descending<F>(g: &Group, step: F) -> Result<SeriesResult>
where
    F: Fn(&Group) -> Group,
{
    let mut terms = vec![g.clone()];
    loop {
        let last = terms.last().unwrap();
        if last.is_trivial() {
            let n = terms.len() - 1;
            return Ok(SeriesResult {
                terms,
                stabilized: true,
                class_or_length: Some(n),
            });
        }
        let next = step(last);
        if next.same_as(last) {
            return Ok(SeriesResult {
                terms,
                stabilized: true,
                class_or_length: None,
            });
        }
        terms.push(next);
        if terms.len() > MAX_SERIES_LENGTH {
            return Err(Error::Internal("series did not stabilize within 64 terms".into()));
        }
    }
}

/// `γ_1 = G`, `γ_{i+1} = [γ_i, G]`; `terms[i]` is `γ_{i+1}`.
pub fn lower_central_series(g: &Group) -> Result<SeriesResult> {
    descending(g, |x| commutator_unchecked(x, g))
}

/// `G^(0) = G`, `G^(i+1) = [G^(i), G^(i)]`; `terms[i]` is `G^(i)`.
pub fn derived_series(g: &Group) -> Result<SeriesResult> {
    descending(g, |x| commutator_unchecked(x, x))
}

/// `γ_i(G)` with `i ≥ 1` (`γ_1 = G`).
pub fn lower_central_term(g: &Group, i: usize) -> Group {
    let mut t = g.clone();
    for _ in 1..i {
        if t.is_trivial() {
            break;
        }
        t = commutator_unchecked(&t, g);
    }
    t
}

/// `G^(i)` with `i ≥ 0`.
pub fn derived_term(g: &Group, i: usize) -> Group {
    let mut t = g.clone();
    for _ in 0..i {
        if t.is_trivial() {
            break;
        }
        t = commutator_unchecked(&t, &t);
    }
    t
}

/// `Z_0 = 1`, `Z_{i+1}/Z_i = Z(G/Z_i)`; `terms[i]` is `Z_i`.
pub fn upper_central_series(g: &Group) -> Result<SeriesResult> {
    let elements = g.elements()?;
    let mut terms = vec![Group::trivial(g.degree())];
    loop {
        let last = terms.last().unwrap();
        if last.same_as(g) {
            let n = terms.len() - 1;
            return Ok(SeriesResult {
                terms,
                stabilized: true,
                class_or_length: Some(n),
            });
        }
        let next = Group::from_elements(
            g.degree(),
            elements.iter().filter(|x| {
                g.generators()
                    .iter()
                    .all(|y| last.contains(&x.commutator(y)))
            }),
        );
        if next.same_as(last) {
            return Ok(SeriesResult {
                terms,
                stabilized: true,
                class_or_length: None,
            });
        }
        terms.push(next);
        if terms.len() > MAX_SERIES_LENGTH {
            return Err(Error::Internal("series did not stabilize within 64 terms".into()));
        }
    }
}

pub fn nilpotency_class(g: &Group) -> Option<usize> {
    lower_central_series(g).ok().and_then(|s| s.class_or_length)
}

pub fn is_nilpotent(g: &Group) -> bool {
    nilpotency_class(g).is_some()
}

pub fn derived_length(g: &Group) -> Option<usize> {
    derived_series(g).ok().and_then(|s| s.class_or_length)
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn r_part(mut n: u64, r: u64) -> u64 {
    let mut part = 1;
    while n % r == 0 {
        n /= r;
        part *= r;
    }
    part
}

fn is_power_of(mut n: u64, r: u64) -> bool {
    while n % r == 0 {
        n /= r;
    }
    n == 1
}

/// A Sylow `r`-subgroup of `g`: grows an `r`-subgroup by `r`-elements of its
/// normalizer until the order reaches the `r`-part of `|g|`.
pub fn sylow_subgroup(g: &Group, r: u64) -> Result<Group> {
    let target = r_part(g.order(), r);
    let mut p = Group::trivial(g.degree());
    if target == 1 {
        return Ok(p);
    }
    let r_elements: Vec<_> = g
        .elements()?
        .iter()
        .filter(|x| !x.is_identity() && is_power_of(x.order(), r))
        .collect();
    while p.order() < target {
        let next = r_elements.iter().find(|x| {
            !p.contains(x)
                && p.generators()
                    .iter()
                    .all(|y| p.contains(&y.conjugate(x)))
        });
        match next {
            Some(x) => {
                let mut gens = p.generators().to_vec();
                gens.push((*x).clone());
                p = Group::from_generators(g.degree(), gens)?;
            }
            None => {
                return Err(Error::Internal(format!(
                    "r-subgroup of order {} has no r-element in its normalizer outside it",
                    p.order()
                )))
            }
        }
    }
    Ok(p)
}

/// All Sylow `r`-subgroups, as the conjugacy class of one of them.
pub fn sylow_subgroups(g: &Group, r: u64) -> Result<Vec<Group>> {
    let p = sylow_subgroup(g, r)?;
    let mut orbit = vec![p];
    let mut head = 0;
    while head < orbit.len() {
        let cur = orbit[head].clone();
        head += 1;
        for x in g.generators() {
            let c = cur.conjugate(x);
            if !orbit.iter().any(|q| q.same_as(&c)) {
                orbit.push(c);
            }
        }
    }
    Ok(orbit)
}

/// `O_r(G)`, the intersection of all Sylow `r`-subgroups.
pub fn largest_normal_r_subgroup(g: &Group, r: u64) -> Result<Group> {
    let sylows = sylow_subgroups(g, r)?;
    let mut acc = sylows[0].clone();
    for s in &sylows[1..] {
        if acc.is_trivial() {
            break;
        }
        acc = acc.intersection(s)?;
    }
    Ok(acc)
}

/// `F(G) = ∏_r O_r(G)`.
pub fn fitting_subgroup(g: &Group) -> Result<Group> {
    g.elements()?;
    let parts = prime_factors(g.order())
        .into_iter()
        .map(|r| largest_normal_r_subgroup(g, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(Group::join_all(g.degree(), parts.iter()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::fixtures::*;
    use crate::perm::Perm;

    /// C_3 ≀ C_3 on 9 points.
    fn wreath() -> Group {
        Group::from_generators(
            9,
            vec![
                Perm::from_cycles(9, &[&[0, 1, 2]]).unwrap(),
                Perm::from_cycles(9, &[&[0, 3, 6], &[1, 4, 7], &[2, 5, 8]]).unwrap(),
            ],
        )
        .unwrap()
    }

    /// C_7 ⋊ C_3 on 7 points.
    fn frobenius21() -> Group {
        Group::from_generators(
            7,
            vec![
                Perm::from_cycles(7, &[&[0, 1, 2, 3, 4, 5, 6]]).unwrap(),
                Perm::from_cycles(7, &[&[1, 2, 4], &[3, 6, 5]]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn abelian_series() {
        let c = cyclic(9);
        assert_eq!(nilpotency_class(&c), Some(1));
        assert_eq!(derived_length(&c), Some(1));
        let z = upper_central_series(&c).unwrap();
        assert_eq!(z.terms.len(), 2);
        assert!(z.terms[1].same_as(&c));
    }

    #[test]
    fn heisenberg_series() {
        let h = heisenberg27();
        let l = lower_central_series(&h).unwrap();
        assert_eq!(l.class_or_length, Some(2));
        assert_eq!(l.terms[1].order(), 3);
        assert_eq!(derived_length(&h), Some(2));
        let u = upper_central_series(&h).unwrap();
        assert_eq!(u.class_or_length, Some(2));
        assert_eq!(u.terms[1].order(), 3);
    }

    #[test]
    fn wreath_series() {
        let w = wreath();
        assert_eq!(w.order(), 81);
        assert_eq!(nilpotency_class(&w), Some(3));
        assert_eq!(derived_length(&w), Some(2));
        assert_eq!(upper_central_series(&w).unwrap().class_or_length, Some(3));
    }

    #[test]
    fn frobenius_is_not_nilpotent() {
        let f = frobenius21();
        assert_eq!(f.order(), 21);
        assert_eq!(nilpotency_class(&f), None);
        let u = upper_central_series(&f).unwrap();
        assert_eq!(u.terms.len(), 1);
        assert_eq!(u.class_or_length, None);
        let fit = fitting_subgroup(&f).unwrap();
        assert_eq!(fit.order(), 7);
        assert_eq!(sylow_subgroups(&f, 3).unwrap().len(), 7);
    }

    #[test]
    fn fitting_of_nilpotent_is_whole() {
        let h = heisenberg27();
        assert!(fitting_subgroup(&h).unwrap().same_as(&h));
        // Heisenberg × C_5 on 9 + 5 points
        let mut gens: Vec<Perm> = h.generators().iter().map(|x| x.shifted(0, 14)).collect();
        gens.push(Perm::from_cycles(14, &[&[9, 10, 11, 12, 13]]).unwrap());
        let g = Group::from_generators(14, gens).unwrap();
        assert_eq!(g.order(), 135);
        assert!(fitting_subgroup(&g).unwrap().same_as(&g));
    }

    #[test]
    fn sylow_orders() {
        let s = symmetric(5);
        assert_eq!(sylow_subgroup(&s, 2).unwrap().order(), 8);
        assert_eq!(sylow_subgroup(&s, 3).unwrap().order(), 3);
        assert_eq!(sylow_subgroup(&s, 7).unwrap().order(), 1);
        assert_eq!(sylow_subgroups(&s, 5).unwrap().len(), 6);
    }

    #[test]
    fn gamma_two_is_derived_subgroup() {
        for g in [heisenberg27(), wreath(), frobenius21(), symmetric(4)] {
            let l = lower_central_series(&g).unwrap();
            let d = derived_series(&g).unwrap();
            if l.terms.len() > 1 && d.terms.len() > 1 {
                assert!(l.terms[1].same_as(&d.terms[1]));
            }
            for t in &l.terms {
                assert!(t.is_normal_in(&g));
            }
        }
    }
}
