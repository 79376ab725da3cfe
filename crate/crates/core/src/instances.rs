//! Instance families: coprime actions built from matrix groups, coordinate
//! permutations, Heisenberg-type groups, small named groups, direct sums,
//! and instance files.

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::action::{validate_setup, ActionSetup};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::perm::{is_prime, Perm};
use crate::subspace::{format_vector, unit, AVector};

pub const INSTANCE_SCHEMA: u64 = 1;

/// A named setup.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub setup: ActionSetup,
}

// ---------------------------------------------------------------------------
// arithmetic mod q

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, q: u64) -> u64 {
    pow_mod(a, q - 2, q)
}

/// An element of order exactly `p` in `F_q^*`; requires `p | q − 1`.
fn root_of_unity(p: u64, q: u64) -> u64 {
    (2..q)
        .map(|g| pow_mod(g, (q - 1) / p, q))
        .find(|&z| z != 1)
        .unwrap_or(q - 1)
}

/// Least `m ≥ 1` with `p | q^m − 1`.
fn multiplicative_order(q: u64, p: u64) -> u64 {
    let mut m = 1;
    let mut x = q % p;
    while x != 1 {
        x = x * (q % p) % p;
        m += 1;
    }
    m
}

type Matrix = Vec<Vec<u64>>;

fn mat_identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect()
}

fn mat_mul(a: &Matrix, b: &Matrix, q: u64) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|t| a[i][t] * b[t][j]).sum::<u64>() % q)
                .collect()
        })
        .collect()
}

fn mat_inverse(a: &Matrix, q: u64) -> Option<Matrix> {
    let n = a.len();
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .zip(mat_identity(n))
        .map(|(row, id)| row.iter().copied().chain(id).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| m[r][col] != 0)?;
        m.swap(col, pivot);
        let inv = inv_mod(m[col][col], q);
        for x in m[col].iter_mut() {
            *x = *x * inv % q;
        }
        for r in 0..n {
            if r != col && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..2 * n {
                    m[r][c] = (m[r][c] + (q - f) * m[col][c]) % q;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

fn random_invertible<R: Rng>(n: usize, q: u64, rng: &mut R) -> (Matrix, Matrix) {
    loop {
        let m: Matrix = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..q)).collect()).collect();
        if let Some(inv) = mat_inverse(&m, q) {
            return (m, inv);
        }
    }
}

/// Some matrix of order exactly `p` in `GL(m, q)`.
fn matrix_of_order<R: Rng>(m: usize, q: u64, p: u64, rng: &mut R) -> Matrix {
    let id = mat_identity(m);
    loop {
        let (a, _) = random_invertible(m, q, rng);
        let mut order = 1u64;
        let mut x = a.clone();
        while x != id {
            x = mat_mul(&x, &a, q);
            order += 1;
        }
        if order % p == 0 {
            let mut y = id.clone();
            for _ in 0..order / p {
                y = mat_mul(&y, &a, q);
            }
            return y;
        }
    }
}

// ---------------------------------------------------------------------------
// building blocks

/// A group with a list of commuting automorphisms of order `p`, each given
/// by the images of `group.generators()`.
#[derive(Clone, Debug)]
pub struct Block {
    pub group: Group,
    pub p: u32,
    pub automorphisms: Vec<Vec<Perm>>,
}

impl Block {
    /// Setup of rank `k` using the first `k` automorphisms.
    pub fn setup(&self, k: usize) -> Result<ActionSetup> {
        if k > self.automorphisms.len() {
            return Err(Error::Generation(format!(
                "block provides {} automorphisms, {k} requested",
                self.automorphisms.len()
            )));
        }
        ActionSetup::validated(self.group.clone(), self.p, k, self.automorphisms[..k].to_vec())
    }
}

fn conjugation_images(group: &Group, sigma: &Perm) -> Vec<Perm> {
    group.generators().iter().map(|g| g.conjugate(sigma)).collect()
}

/// `C_q^n` on `n·q` points, one `q`-cycle per coordinate.
fn elementary_abelian(q: u64, n: usize) -> Result<Group> {
    let q = q as usize;
    let degree = n * q;
    let gens = (0..n)
        .map(|i| {
            let cycle: Vec<u32> = (i * q..(i + 1) * q).map(|x| x as u32).collect();
            Perm::from_cycles(degree, &[&cycle])
        })
        .collect::<Result<Vec<_>>>()?;
    Group::from_generators(degree, gens)
}

/// Image of the unit vector `e_j` under `m`, written in the generators of
/// `C_q^n` (column `j` of `m`).
fn matrix_images(group: &Group, m: &Matrix) -> Vec<Perm> {
    let gens = group.generators();
    let n = gens.len();
    (0..n)
        .map(|j| {
            (0..n).fold(group.identity(), |acc, i| acc.mul(&gens[i].pow(m[i][j])))
        })
        .collect()
}

fn check_primes(q: u64, p: u64) -> Result<()> {
    if !is_prime(q) {
        return Err(Error::Generation(format!("q = {q} is not prime")));
    }
    if !is_prime(p) {
        return Err(Error::Generation(format!("p = {p} is not prime")));
    }
    if p == q {
        return Err(Error::Generation(format!("q = p = {p}: the action would not be coprime")));
    }
    Ok(())
}

/// `C_q^n` with a randomly conjugated elementary abelian `p`-subgroup of
/// `GL(n, q)` of rank `k` acting linearly.
pub fn gen_gl_module(q: u64, n: usize, p: u64, k: usize, seed: u64) -> Result<ActionSetup> {
    check_primes(q, p)?;
    if k == 0 || n == 0 {
        return Err(Error::Generation("n and k must be positive".into()));
    }
    let cap = crate::group::enumeration_cap();
    if (q as f64).powi(n as i32) > cap as f64 {
        return Err(Error::Capacity {
            order: q.saturating_pow(n as u32),
            cap,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diagonal: Vec<Matrix> = if (q - 1) % p == 0 {
        if k > n {
            return Err(Error::Generation(format!(
                "p = {p} divides q − 1 = {}, so the largest elementary abelian p-subgroup of GL({n}, {q}) has rank {n} < {k}",
                q - 1
            )));
        }
        let zeta = root_of_unity(p, q);
        let exponents = random_full_rank(k, n, p, &mut rng);
        exponents
            .iter()
            .map(|row| {
                let mut m = mat_identity(n);
                for (j, &e) in row.iter().enumerate() {
                    m[j][j] = pow_mod(zeta, e as u64, q);
                }
                m
            })
            .collect()
    } else {
        let m = multiplicative_order(q, p) as usize;
        if m * k > n {
            return Err(Error::Generation(format!(
                "p = {p} does not divide q − 1; the least m with p | {q}^m − 1 is {m}, so GL({n}, {q}) has p-rank {} < {k}",
                n / m
            )));
        }
        let block = matrix_of_order(m, q, p, &mut rng);
        (0..k)
            .map(|r| {
                let mut mat = mat_identity(n);
                for i in 0..m {
                    for j in 0..m {
                        mat[r * m + i][r * m + j] = block[i][j];
                    }
                }
                mat
            })
            .collect()
    };
    let (c, c_inv) = random_invertible(n, q, &mut rng);
    let group = elementary_abelian(q, n)?;
    let images = diagonal
        .iter()
        .map(|d| matrix_images(&group, &mat_mul(&mat_mul(&c, d, q), &c_inv, q)))
        .collect();
    ActionSetup::validated(group, p as u32, k, images)
}

/// A random `k × n` matrix over `F_p` of rank `k`.
fn random_full_rank<R: Rng>(k: usize, n: usize, p: u64, rng: &mut R) -> Vec<AVector> {
    loop {
        let rows: Vec<AVector> = (0..k)
            .map(|_| (0..n).map(|_| rng.gen_range(0..p as u32)).collect())
            .collect();
        // rank over F_p, via the subgroup descriptor of (Z/p)^n
        if crate::subspace::ASubgroupDescriptor::span(p as u32, n, &rows).rank() == k {
            return rows;
        }
    }
}

/// The Heisenberg group of order `q^(2m+1)` and exponent `q`, as the maps
/// `(x, y) ↦ (x + a, y + b·x + c)` on `F_q^m × F_q`, generated by the
/// translations `T_i` and shears `U_i` in the order `T_0, U_0, T_1, U_1, …`.
pub fn heisenberg(q: u64, m: usize) -> Result<Group> {
    let qs = q as usize;
    let degree = qs.pow(m as u32 + 1);
    // point index: y + q·(x_0 + q·x_1 + …)
    let decode = |pt: usize| -> (Vec<usize>, usize) {
        let y = pt % qs;
        let mut rest = pt / qs;
        let x = (0..m)
            .map(|_| {
                let v = rest % qs;
                rest /= qs;
                v
            })
            .collect();
        (x, y)
    };
    let encode = |x: &[usize], y: usize| -> u32 {
        let mut idx = 0;
        for &v in x.iter().rev() {
            idx = idx * qs + v;
        }
        (idx * qs + y) as u32
    };
    let mut gens = Vec::new();
    for i in 0..m {
        let t: Vec<u32> = (0..degree)
            .map(|pt| {
                let (mut x, y) = decode(pt);
                x[i] = (x[i] + 1) % qs;
                encode(&x, y)
            })
            .collect();
        let u: Vec<u32> = (0..degree)
            .map(|pt| {
                let (x, y) = decode(pt);
                encode(&x, (y + x[i]) % qs)
            })
            .collect();
        gens.push(Perm::from_images(t)?);
        gens.push(Perm::from_images(u)?);
    }
    Group::from_generators(degree, gens)
}

/// The point map `(x, y) ↦ (α·x, λ·y)` for `α ∈ (F_q^*)^m`, `λ ∈ F_q^*`;
/// it normalizes [`heisenberg`].
fn heisenberg_scaling(q: u64, m: usize, alpha: &[u64], lambda: u64) -> Result<Perm> {
    let qs = q as usize;
    let degree = qs.pow(m as u32 + 1);
    let images = (0..degree)
        .map(|pt| {
            let y = pt % qs;
            let mut rest = pt / qs;
            let mut idx = 0;
            let mut stride = qs;
            for a in alpha.iter().take(m) {
                let v = rest % qs;
                rest /= qs;
                idx += (v as u64 * a % q) as usize * stride;
                stride *= qs;
            }
            (idx + (y as u64 * lambda % q) as usize) as u32
        })
        .collect();
    Perm::from_images(images)
}

/// Heisenberg group of order `q^(2m+1)` with the diagonal scalings of order
/// `p`: `m + 1` independent ones when `p | q − 1`.
pub fn heisenberg_block(q: u64, m: usize, p: u64) -> Result<Block> {
    check_primes(q, p)?;
    if q == 2 {
        return Err(Error::Generation("the Heisenberg family needs q odd".into()));
    }
    if (q - 1) % p != 0 {
        return Err(Error::Generation(format!(
            "diagonal automorphisms of order {p} need p | q − 1 = {}",
            q - 1
        )));
    }
    let group = heisenberg(q, m)?;
    let zeta = root_of_unity(p, q);
    let automorphisms = (0..=m)
        .map(|i| {
            let mut alpha = vec![1; m];
            let mut lambda = 1;
            if i < m {
                alpha[i] = zeta;
            } else {
                lambda = zeta;
            }
            Ok(conjugation_images(&group, &heisenberg_scaling(q, m, &alpha, lambda)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Block {
        group,
        p: p as u32,
        automorphisms,
    })
}

/// Heisenberg group of order `q^(2m+1)` with `A` of rank `k` acting by
/// diagonal scalings.
pub fn gen_extraspecial(q: u64, m: usize, p: u64, k: usize) -> Result<ActionSetup> {
    let cap = crate::group::enumeration_cap();
    let order = q.saturating_pow(2 * m as u32 + 1);
    if order > cap {
        return Err(Error::Capacity { order, cap });
    }
    let block = heisenberg_block(q, m, p)?;
    if k > block.automorphisms.len() {
        return Err(Error::Generation(format!(
            "diagonal scalings give rank at most {} = m + 1, {k} requested",
            m + 1
        )));
    }
    block.setup(k)
}

/// `C_3 ≀ C_3` on 9 points with the two commuting involutions
/// `(x, b) ↦ (−x, b)` and `(x, b) ↦ (x, −b)`.
pub fn wreath_block() -> Result<Block> {
    let group = Group::from_generators(
        9,
        vec![
            Perm::from_cycles(9, &[&[0, 1, 2]])?,
            Perm::from_cycles(9, &[&[0, 3, 6], &[1, 4, 7], &[2, 5, 8]])?,
        ],
    )?;
    let sigma = Perm::from_cycles(9, &[&[1, 2], &[4, 5], &[7, 8]])?;
    let tau = Perm::from_cycles(9, &[&[3, 6], &[4, 7], &[5, 8]])?;
    let automorphisms = vec![conjugation_images(&group, &sigma), conjugation_images(&group, &tau)];
    Ok(Block {
        group,
        p: 2,
        automorphisms,
    })
}

/// `{x ↦ αx + β}` on `Z/q` with `α` in the subgroup generated by `mult`,
/// acted on by conjugation with `x ↦ s·x`.
fn affine_block(q: u64, mult: u64, s: u64, p: u32) -> Result<Block> {
    let qs = q as usize;
    let translation: Vec<u32> = (0..qs).map(|x| ((x + 1) % qs) as u32).collect();
    let scaling: Vec<u32> = (0..q).map(|x| (x * mult % q) as u32).collect();
    let group = Group::from_generators(qs, vec![Perm::from_images(translation)?, Perm::from_images(scaling)?])?;
    let sigma = Perm::from_images((0..q).map(|x| (x * s % q) as u32).collect())?;
    Ok(Block {
        automorphisms: vec![conjugation_images(&group, &sigma)],
        group,
        p,
    })
}

/// The quaternion group in its regular representation, with the order-3
/// automorphism `i ↦ j ↦ k ↦ i`.
pub fn quaternion_block() -> Result<Block> {
    // elements: sign · unit, unit ∈ {1, i, j, k}; point = 4·[sign < 0] + unit
    let mul_units = |a: usize, b: usize| -> (bool, usize) {
        // returns (negate, unit) for unit_a · unit_b
        const T: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        T[a][b]
    };
    let right = |u: usize| -> Result<Perm> {
        let images = (0..8)
            .map(|pt| {
                let (neg, unit) = mul_units(pt % 4, u);
                let sign = (pt >= 4) ^ neg;
                (4 * sign as usize + unit) as u32
            })
            .collect();
        Perm::from_images(images)
    };
    let (i, j, k) = (right(1)?, right(2)?, right(3)?);
    let group = Group::from_generators(8, vec![i, j.clone()])?;
    Ok(Block {
        group,
        p: 3,
        automorphisms: vec![vec![j, k]],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedBlock {
    /// `C_3 ≀ C_3`, two involutions
    Wreath33,
    /// `C_7 ⋊ C_3` with `x ↦ −x`
    Frobenius21,
    /// `C_13 ⋊ C_3` with `x ↦ −x`
    Frobenius39,
    /// dihedral of order 14 with `x ↦ 2x`
    Dihedral14,
    /// dihedral of order 26 with `x ↦ 3x`
    Dihedral26,
    /// `Q_8` with its order-3 automorphism
    Quaternion8,
    /// Heisenberg group of order 27 with two diagonal involutions
    Heisenberg27,
}

impl NamedBlock {
    pub fn block(self) -> Result<Block> {
        match self {
            NamedBlock::Wreath33 => wreath_block(),
            NamedBlock::Frobenius21 => affine_block(7, 2, 6, 2),
            NamedBlock::Frobenius39 => affine_block(13, 3, 12, 2),
            NamedBlock::Dihedral14 => affine_block(7, 6, 2, 3),
            NamedBlock::Dihedral26 => affine_block(13, 12, 3, 3),
            NamedBlock::Quaternion8 => quaternion_block(),
            NamedBlock::Heisenberg27 => heisenberg_block(3, 1, 2),
        }
    }
}

/// `H^(p·m)` where basis vector `c < m` cycles the `p` coordinates of its
/// own group of copies and the remaining `k − m` basis vectors apply the
/// block's automorphisms to every coordinate at once.
pub fn gen_coordinate_permutation(block: &Block, m: usize, k: usize) -> Result<ActionSetup> {
    let p = block.p as usize;
    if k < m {
        return Err(Error::Generation(format!("k = {k} is smaller than the number of coordinate cycles {m}")));
    }
    if k - m > block.automorphisms.len() {
        return Err(Error::Generation(format!(
            "{} diagonal automorphisms requested, block has {}",
            k - m,
            block.automorphisms.len()
        )));
    }
    let copies = p * m.max(1);
    let cap = crate::group::enumeration_cap();
    let order = (block.group.order() as f64).powi(copies as i32);
    if order > cap as f64 {
        return Err(Error::Capacity {
            order: block.group.order().saturating_pow(copies as u32),
            cap,
        });
    }
    let deg = block.group.degree();
    let total = deg * copies;
    let hgens = block.group.generators();
    let gens: Vec<Perm> = (0..copies)
        .flat_map(|c| hgens.iter().map(move |g| g.shifted(c * deg, total)))
        .collect();
    let group = Group::from_generators(total, gens)?;
    let mut images = Vec::with_capacity(k);
    for cycle in 0..m {
        let mut imgs = Vec::with_capacity(copies * hgens.len());
        for c in 0..copies {
            let target = if c / p == cycle { cycle * p + (c % p + 1) % p } else { c };
            imgs.extend(hgens.iter().map(|g| g.shifted(target * deg, total)));
        }
        images.push(imgs);
    }
    for aut in &block.automorphisms[..k - m] {
        let imgs = (0..copies)
            .flat_map(|c| aut.iter().map(move |g| g.shifted(c * deg, total)))
            .collect();
        images.push(imgs);
    }
    ActionSetup::validated(group, block.p, k, images)
}

/// Direct product of the groups of `parts`, where the basis of part `i` is
/// placed at coordinates `offset_i..offset_i + k_i` of `(Z/p)^k` and every
/// other coordinate acts trivially on that factor.
pub fn direct_sum_placed(parts: &[(ActionSetup, usize)], k: usize) -> Result<ActionSetup> {
    let Some((first, _)) = parts.first() else {
        return Err(Error::Generation("direct sum of no summands".into()));
    };
    let p = first.p();
    for (s, offset) in parts {
        if s.p() != p {
            return Err(Error::InvalidAction(format!("summands act with p = {p} and p = {}", s.p())));
        }
        if offset + s.k() > k {
            return Err(Error::InvalidAction(format!(
                "summand of rank {} at offset {offset} does not fit in rank {k}",
                s.k()
            )));
        }
    }
    let total: usize = parts.iter().map(|(s, _)| s.group().degree()).sum();
    let mut offsets = Vec::with_capacity(parts.len());
    let mut acc = 0;
    for (s, _) in parts {
        offsets.push(acc);
        acc += s.group().degree();
    }
    let gens: Vec<Perm> = parts
        .iter()
        .zip(&offsets)
        .flat_map(|((s, _), &o)| s.group().generators().iter().map(move |g| g.shifted(o, total)))
        .collect();
    let group = Group::from_generators(total, gens)?;
    let images = (0..k)
        .map(|u| {
            parts
                .iter()
                .zip(&offsets)
                .flat_map(|((s, place), &o)| {
                    let local: Vec<Perm> = if u >= *place && u < place + s.k() {
                        s.basis()[u - place].images().to_vec()
                    } else {
                        s.group().generators().to_vec()
                    };
                    local.into_iter().map(move |g| g.shifted(o, total))
                })
                .collect()
        })
        .collect();
    ActionSetup::validated(group, p, k, images)
}

/// Direct product with the diagonal action; summands of smaller rank are
/// padded with trivially acting coordinates.
pub fn gen_direct_sum(setups: &[ActionSetup]) -> Result<ActionSetup> {
    let k = setups.iter().map(|s| s.k()).max().unwrap_or(0);
    let parts: Vec<(ActionSetup, usize)> = setups.iter().map(|s| (s.clone(), 0)).collect();
    direct_sum_placed(&parts, k)
}

// ---------------------------------------------------------------------------
// declarative specs

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    GlModule { q: u64, n: usize, p: u64, k: usize, seed: u64 },
    CoordinatePermutation { block: Box<FamilySpec>, m: usize, k: usize },
    DiagonalAut { block: NamedBlock, k: usize },
    Extraspecial { q: u64, m: usize, p: u64, k: usize },
    DirectSum { parts: Vec<Placed>, k: usize },
    Trivial { block: NamedBlock, p: u32, k: usize },
    File { path: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placed {
    pub spec: FamilySpec,
    pub offset: usize,
}

impl FamilySpec {
    pub fn build(&self) -> Result<ActionSetup> {
        match self {
            FamilySpec::GlModule { q, n, p, k, seed } => gen_gl_module(*q, *n, *p, *k, *seed),
            FamilySpec::CoordinatePermutation { block, m, k } => {
                let inner = block.build()?;
                let b = Block {
                    group: inner.group().clone(),
                    p: inner.p(),
                    automorphisms: inner.basis().iter().map(|a| a.images().to_vec()).collect(),
                };
                gen_coordinate_permutation(&b, *m, *k)
            }
            FamilySpec::DiagonalAut { block, k } => block.block()?.setup(*k),
            FamilySpec::Extraspecial { q, m, p, k } => gen_extraspecial(*q, *m, *p, *k),
            FamilySpec::DirectSum { parts, k } => {
                let built = parts
                    .iter()
                    .map(|pl| Ok((pl.spec.build()?, pl.offset)))
                    .collect::<Result<Vec<_>>>()?;
                direct_sum_placed(&built, *k)
            }
            FamilySpec::Trivial { block, p, k } => {
                let group = block.block()?.group;
                let images = vec![group.generators().to_vec(); *k];
                ActionSetup::validated(group, *p, *k, images)
            }
            FamilySpec::File { path } => load_instance(Path::new(path)).map(|i| i.setup),
        }
    }
}

fn gl(q: u64, n: usize, p: u64, k: usize, seed: u64) -> FamilySpec {
    FamilySpec::GlModule { q, n, p, k, seed }
}

fn es(q: u64, m: usize, p: u64, k: usize) -> FamilySpec {
    FamilySpec::Extraspecial { q, m, p, k }
}

fn named(block: NamedBlock, k: usize) -> FamilySpec {
    FamilySpec::DiagonalAut { block, k }
}

fn sum(k: usize, parts: Vec<(FamilySpec, usize)>) -> FamilySpec {
    FamilySpec::DirectSum {
        parts: parts.into_iter().map(|(spec, offset)| Placed { spec, offset }).collect(),
        k,
    }
}

fn coords(block: FamilySpec, m: usize, k: usize) -> FamilySpec {
    FamilySpec::CoordinatePermutation {
        block: Box::new(block),
        m,
        k,
    }
}

pub const PRESETS: &[&str] = &["p2k3", "p2k4", "p3k3"];

/// The named specs of a preset. `seed` perturbs the randomized families.
pub fn preset_specs(name: &str, seed: u64) -> Result<Vec<(String, FamilySpec)>> {
    use NamedBlock::*;
    let s = seed;
    let list: Vec<(&str, FamilySpec)> = match name {
        "p2k3" => vec![
            ("gl-q3n3", gl(3, 3, 2, 3, s)),
            ("gl-q7n3", gl(7, 3, 2, 3, s + 1)),
            ("gl-q5n4", gl(5, 4, 2, 3, s + 2)),
            ("heis-q3m2", es(3, 2, 2, 3)),
            ("heis-q5m2", es(5, 2, 2, 3)),
            ("heis27-c3sq", sum(3, vec![(es(3, 1, 2, 2), 0), (coords(gl(3, 1, 2, 1, s + 3), 1, 2), 1)])),
            ("wreath-c5", sum(3, vec![(named(Wreath33, 2), 0), (gl(5, 1, 2, 1, s + 4), 2)])),
            ("heis27-squared", coords(es(3, 1, 2, 2), 1, 3)),
            ("frob21-c3sq", sum(3, vec![(named(Frobenius21, 1), 0), (gl(3, 2, 2, 2, s + 5), 1)])),
            ("trivial-heis27", FamilySpec::Trivial { block: Heisenberg27, p: 2, k: 3 }),
            ("c3-c5-c7", sum(3, vec![(gl(3, 1, 2, 1, s + 6), 0), (gl(5, 1, 2, 1, s + 7), 1), (gl(7, 1, 2, 1, s + 8), 2)])),
        ],
        "p2k4" => vec![
            ("gl-q3n4", gl(3, 4, 2, 4, s)),
            ("gl-q5n4", gl(5, 4, 2, 4, s + 1)),
            ("heis-q3m3", es(3, 3, 2, 4)),
            ("heis27-squared-c5", sum(4, vec![(coords(es(3, 1, 2, 2), 1, 3), 0), (gl(5, 1, 2, 1, s + 2), 3)])),
            ("wreath-heis27", sum(4, vec![(named(Wreath33, 2), 0), (es(3, 1, 2, 2), 2)])),
            ("frob21-c3cube", sum(4, vec![(named(Frobenius21, 1), 0), (gl(3, 3, 2, 3, s + 3), 1)])),
            ("frob39-c3cube", sum(4, vec![(named(Frobenius39, 1), 0), (gl(3, 3, 2, 3, s + 4), 1)])),
            ("trivial-wreath", FamilySpec::Trivial { block: Wreath33, p: 2, k: 4 }),
            ("heis-q3m2-c7", sum(4, vec![(es(3, 2, 2, 3), 0), (gl(7, 1, 2, 1, s + 5), 3)])),
            ("wreath-c3sq", sum(4, vec![(named(Wreath33, 2), 0), (gl(3, 2, 2, 2, s + 6), 2)])),
        ],
        "p3k3" => vec![
            ("gl-q7n3", gl(7, 3, 3, 3, s)),
            ("gl-q2n6", gl(2, 6, 3, 3, s + 1)),
            ("heis-q7-c2sq", sum(3, vec![(es(7, 1, 3, 2), 0), (gl(2, 2, 3, 1, s + 2), 2)])),
            ("q8-c7sq", sum(3, vec![(named(Quaternion8, 1), 0), (gl(7, 2, 3, 2, s + 3), 1)])),
            ("d14-c7sq", sum(3, vec![(named(Dihedral14, 1), 0), (gl(7, 2, 3, 2, s + 4), 1)])),
            ("d26-q8-c2sq", sum(3, vec![(named(Dihedral26, 1), 0), (named(Quaternion8, 1), 1), (gl(2, 2, 3, 1, s + 5), 2)])),
            ("heis-q7-c7", sum(3, vec![(es(7, 1, 3, 2), 0), (gl(7, 1, 3, 1, s + 6), 2)])),
            ("c7cube-cycle-c2sq", sum(3, vec![(coords(gl(7, 1, 3, 1, s + 7), 1, 2), 0), (gl(2, 2, 3, 1, s + 8), 2)])),
            ("trivial-q8", FamilySpec::Trivial { block: Quaternion8, p: 3, k: 3 }),
            ("q8cube-cycle-c7", sum(3, vec![(coords(named(Quaternion8, 1), 1, 2), 0), (gl(7, 1, 3, 1, s + 9), 2)])),
        ],
        _ => {
            return Err(Error::Generation(format!(
                "unknown preset {name:?}; known presets: {}",
                PRESETS.join(", ")
            )))
        }
    };
    Ok(list
        .into_iter()
        .map(|(n, spec)| (format!("{name}-{n}"), spec))
        .collect())
}

pub fn preset_instances(name: &str, seed: u64) -> Result<Vec<Instance>> {
    preset_specs(name, seed)?
        .into_iter()
        .map(|(name, spec)| {
            let setup = spec
                .build()
                .map_err(|e| Error::Generation(format!("{name}: {e}")))?;
            Ok(Instance { name, setup })
        })
        .collect()
}

/// Nilpotent groups of orders 27 to 2187 with nontrivial Lie structure.
pub fn nilpotent_zoo() -> Result<Vec<(String, Group)>> {
    let mut out: Vec<(String, Group)> = Vec::new();
    let wreath = wreath_block()?.group;
    let heis27 = heisenberg(3, 1)?;
    let q8 = quaternion_block()?.group;
    out.push(("heisenberg-27".into(), heis27.clone()));
    out.push(("heisenberg-125".into(), heisenberg(5, 1)?));
    out.push(("heisenberg-343".into(), heisenberg(7, 1)?));
    out.push(("heisenberg-243".into(), heisenberg(3, 2)?));
    out.push(("heisenberg-2187".into(), heisenberg(3, 3)?));
    out.push(("wreath-81".into(), wreath.clone()));
    out.push(("elementary-27".into(), elementary_abelian(3, 3)?));
    out.push(("affine-z9".into(), affine_cyclic(9, 4)?));
    out.push(("affine-z27".into(), affine_cyclic(27, 10)?));
    out.push(("unitriangular-4-3".into(), unitriangular(4, 3)?));
    out.push(("unitriangular-4-2".into(), unitriangular(4, 2)?));
    out.push(("unitriangular-3-5".into(), unitriangular(3, 5)?));
    out.push(("sylow2-s8".into(), sylow2_s8()?));
    out.push(("heis27-x-c3".into(), product(&[&heis27, &cyclic_group(3)?])?));
    out.push(("heis27-squared".into(), product(&[&heis27, &heis27])?));
    out.push(("wreath-x-c9".into(), product(&[&wreath, &cyclic_group(9)?])?));
    out.push(("wreath-x-heis27".into(), product(&[&wreath, &heis27])?));
    out.push(("heis27-x-q8".into(), product(&[&heis27, &q8])?));
    out.push(("q8-x-c9".into(), product(&[&q8, &cyclic_group(9)?])?));
    out.push(("q8-x-d8".into(), product(&[&q8, &dihedral8()?])?));
    out.push(("sylow2-s8-x-c3".into(), product(&[&sylow2_s8()?, &cyclic_group(3)?])?));
    Ok(out)
}

fn cyclic_group(n: usize) -> Result<Group> {
    let images: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
    Group::from_generators(n, vec![Perm::from_images(images)?])
}

fn dihedral8() -> Result<Group> {
    Group::from_generators(
        4,
        vec![Perm::from_cycles(4, &[&[0, 1, 2, 3]])?, Perm::from_cycles(4, &[&[1, 3]])?],
    )
}

/// `{x ↦ a·x + b}` on `Z/n` with `a` a power of `mult`.
fn affine_cyclic(n: u64, mult: u64) -> Result<Group> {
    let t = Perm::from_images((0..n).map(|x| ((x + 1) % n) as u32).collect())?;
    let s = Perm::from_images((0..n).map(|x| (x * mult % n) as u32).collect())?;
    Group::from_generators(n as usize, vec![t, s])
}

/// Upper unitriangular `d × d` matrices over `F_q`, acting on the affine
/// hyperplane of vectors with last coordinate 1.
fn unitriangular(d: usize, q: u64) -> Result<Group> {
    let n = d - 1;
    let qs = q as usize;
    let degree = qs.pow(n as u32);
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..d {
            // x_i += x_j (x_n = 1)
            let images = (0..degree)
                .map(|pt| {
                    let mut x: Vec<usize> = (0..n).map(|t| pt / qs.pow(t as u32) % qs).collect();
                    let add = if j == n { 1 } else { x[j] };
                    x[i] = (x[i] + add) % qs;
                    x.iter().enumerate().map(|(t, &v)| v * qs.pow(t as u32)).sum::<usize>() as u32
                })
                .collect();
            gens.push(Perm::from_images(images)?);
        }
    }
    Group::from_generators(degree, gens)
}

fn sylow2_s8() -> Result<Group> {
    Group::from_generators(
        8,
        vec![
            Perm::from_cycles(8, &[&[0, 1]])?,
            Perm::from_cycles(8, &[&[0, 2], &[1, 3]])?,
            Perm::from_cycles(8, &[&[0, 4], &[1, 5], &[2, 6], &[3, 7]])?,
        ],
    )
}

fn product(groups: &[&Group]) -> Result<Group> {
    let total: usize = groups.iter().map(|g| g.degree()).sum();
    let mut gens = Vec::new();
    let mut offset = 0;
    for g in groups {
        gens.extend(g.generators().iter().map(|x| x.shifted(offset, total)));
        offset += g.degree();
    }
    Group::from_generators(total, gens)
}

// ---------------------------------------------------------------------------
// instance files

#[derive(Serialize)]
struct InstanceFile<'a> {
    schema: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<&'a str>,
    p: u32,
    k: usize,
    group: GroupFile<'a>,
    action: BTreeMap<String, BTreeMap<String, &'a Perm>>,
}

#[derive(Serialize)]
struct GroupFile<'a> {
    degree: usize,
    generators: &'a [Perm],
}

/// The instance as JSON text: one stanza per basis vector of `A`.
pub fn export_instance(name: Option<&str>, setup: &ActionSetup) -> Result<String> {
    let mut action = BTreeMap::new();
    for (u, a) in setup.basis().iter().enumerate() {
        let stanza = a
            .images()
            .iter()
            .enumerate()
            .map(|(i, x)| (i.to_string(), x))
            .collect();
        action.insert(format_vector(&unit(setup.k(), u)), stanza);
    }
    let file = InstanceFile {
        schema: INSTANCE_SCHEMA,
        name,
        p: setup.p(),
        k: setup.k(),
        group: GroupFile {
            degree: setup.group().degree(),
            generators: setup.group().generators(),
        },
        action,
    };
    let mut text = serde_json::to_string_pretty(&file)?;
    text.push('\n');
    Ok(text)
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    let fallback = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".into());
    parse_instance(&text, &fallback)
}

fn schema_err(location: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        location: location.to_string(),
        message: message.into(),
    }
}

fn as_uint(v: &Value, location: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| schema_err(location, "expected a non-negative integer"))
}

fn as_perm(v: &Value, degree: usize, location: &str) -> Result<Perm> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema_err(location, "expected an array of point images"))?;
    if arr.len() != degree {
        return Err(schema_err(
            location,
            format!("permutation has {} images, degree is {degree}", arr.len()),
        ));
    }
    let images = arr
        .iter()
        .enumerate()
        .map(|(i, x)| {
            as_uint(x, &format!("{location}[{i}]")).and_then(|n| {
                u32::try_from(n).map_err(|_| schema_err(&format!("{location}[{i}]"), "image too large"))
            })
        })
        .collect::<Result<Vec<u32>>>()?;
    Perm::from_images(images).map_err(|e| schema_err(location, e.to_string()))
}

/// Parses instance JSON. Basis stanzas (unit exponent vectors) define the
/// action; a missing basis stanza means that basis vector acts trivially and
/// a missing generator entry means that generator is fixed. Other stanzas
/// are checked against the action the basis defines.
pub fn parse_instance(text: &str, fallback_name: &str) -> Result<Instance> {
    let root: Value = serde_json::from_str(text).map_err(|e| schema_err("$", e.to_string()))?;
    let obj = root
        .as_object()
        .ok_or_else(|| schema_err("$", "expected an object"))?;
    let field = |name: &str| -> Result<&Value> {
        obj.get(name)
            .ok_or_else(|| schema_err("$", format!("missing field {name:?}")))
    };
    let schema = as_uint(field("schema")?, "$.schema")?;
    if schema != INSTANCE_SCHEMA {
        return Err(schema_err("$.schema", format!("unsupported schema {schema}, expected 1")));
    }
    let p = as_uint(field("p")?, "$.p")?;
    if !is_prime(p) || p > u32::MAX as u64 {
        return Err(schema_err("$.p", format!("{p} is not a prime")));
    }
    let k = as_uint(field("k")?, "$.k")? as usize;
    if k == 0 {
        return Err(schema_err("$.k", "k must be at least 1"));
    }
    let name = match obj.get("name") {
        None => fallback_name.to_string(),
        Some(v) => v
            .as_str()
            .ok_or_else(|| schema_err("$.name", "expected a string"))?
            .to_string(),
    };
    let group_v = field("group")?;
    let degree = as_uint(
        group_v
            .get("degree")
            .ok_or_else(|| schema_err("$.group", "missing field \"degree\""))?,
        "$.group.degree",
    )? as usize;
    if degree == 0 {
        return Err(schema_err("$.group.degree", "degree must be at least 1"));
    }
    let gens_v = group_v
        .get("generators")
        .and_then(|g| g.as_array())
        .ok_or_else(|| schema_err("$.group", "missing generator array"))?;
    let file_gens = gens_v
        .iter()
        .enumerate()
        .map(|(i, g)| as_perm(g, degree, &format!("$.group.generators[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let group = Group::from_generators(degree, file_gens.clone())?;

    let action_v = field("action")?
        .as_object()
        .ok_or_else(|| schema_err("$.action", "expected an object"))?;
    let mut stanzas: BTreeMap<AVector, (String, Vec<Perm>)> = BTreeMap::new();
    for (key, stanza) in action_v {
        let loc = format!("$.action[{key:?}]");
        let vector = key
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<u32>, _>>()
            .map_err(|_| schema_err(&loc, "exponent vector must be comma-separated integers"))?;
        if vector.len() != k || vector.iter().any(|&e| e as u64 >= p) {
            return Err(schema_err(&loc, format!("expected {k} exponents in 0..{p}")));
        }
        let entries = stanza
            .as_object()
            .ok_or_else(|| schema_err(&loc, "expected an object keyed by generator index"))?;
        let mut images = file_gens.clone();
        for (gk, img) in entries {
            let gloc = format!("{loc}[{gk:?}]");
            let i: usize = gk
                .parse()
                .map_err(|_| schema_err(&gloc, "generator index must be an integer"))?;
            if i >= file_gens.len() {
                return Err(schema_err(&gloc, format!("only {} generators", file_gens.len())));
            }
            images[i] = as_perm(img, degree, &gloc)?;
        }
        stanzas.insert(vector, (loc, images));
    }

    // images for the deduplicated generator list of `group`
    let pick = |images: &[Perm], loc: &str| -> Result<Vec<Perm>> {
        for (i, g) in file_gens.iter().enumerate() {
            let first = file_gens.iter().position(|h| h == g).unwrap();
            if g.is_identity() && !images[i].is_identity() {
                return Err(schema_err(loc, format!("identity generator {i} has a non-identity image")));
            }
            if images[i] != images[first] {
                return Err(schema_err(loc, format!("generators {first} and {i} coincide but have different images")));
            }
        }
        Ok(group
            .generators()
            .iter()
            .map(|g| images[file_gens.iter().position(|h| h == g).unwrap()].clone())
            .collect())
    };
    let mut basis_images = Vec::with_capacity(k);
    for u in 0..k {
        let e = unit(k, u);
        match stanzas.get(&e) {
            Some((loc, images)) => basis_images.push(pick(images, loc)?),
            None => basis_images.push(group.generators().to_vec()),
        }
    }
    let setup = ActionSetup::new(group, p as u32, k, basis_images).map_err(|e| match e {
        Error::InvalidAction(m) => schema_err("$.action", m),
        other => other,
    })?;
    let report = validate_setup(&setup);
    if !report.valid {
        return Err(Error::InvalidAction(format!("{name}: {}", report.violations.join("; "))));
    }
    for (vector, (loc, images)) in &stanzas {
        if vector.iter().filter(|&&e| e != 0).count() == 1 && vector.iter().any(|&e| e == 1) {
            continue;
        }
        let expected: Vec<Perm> = file_gens
            .iter()
            .map(|g| setup.apply(vector, g))
            .collect::<Result<_>>()?;
        if &expected != images {
            return Err(schema_err(loc, "stanza disagrees with the action defined by the basis stanzas"));
        }
    }
    Ok(Instance { name, setup })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::nilpotency_class;
    use crate::subspace::ASubgroupDescriptor;

    #[test]
    fn gl_module_examples() {
        let s = gen_gl_module(3, 1, 2, 1, 0).unwrap();
        assert_eq!(s.group().order(), 3);
        assert!(s.fixed_subgroup_of_element(&[1]).unwrap().is_trivial());
        let s = gen_gl_module(7, 3, 2, 3, 1).unwrap();
        assert_eq!(s.group().order(), 343);
        assert!(s.fixed_subgroup(&ASubgroupDescriptor::whole(2, 3)).unwrap().is_trivial());
        let s = gen_gl_module(3, 4, 2, 4, 2).unwrap();
        assert_eq!(s.group().order(), 81);
        // companion path: 3 ∤ 2 − 1, 3 | 2^2 − 1
        let s = gen_gl_module(2, 4, 3, 2, 3).unwrap();
        assert!(s.fixed_subgroup(&ASubgroupDescriptor::whole(3, 2)).unwrap().is_trivial());
        assert!(matches!(gen_gl_module(2, 3, 3, 2, 0), Err(Error::Generation(_))));
        assert!(matches!(gen_gl_module(3, 2, 2, 3, 0), Err(Error::Generation(_))));
        assert!(gen_gl_module(3, 2, 3, 1, 0).is_err());
    }

    #[test]
    fn heisenberg_orders() {
        assert_eq!(heisenberg(3, 1).unwrap().order(), 27);
        assert_eq!(heisenberg(3, 2).unwrap().order(), 243);
        assert_eq!(nilpotency_class(&heisenberg(5, 1).unwrap()), Some(2));
        let s = gen_extraspecial(7, 1, 3, 2).unwrap();
        assert_eq!(s.group().order(), 343);
        assert!(gen_extraspecial(3, 1, 2, 3).is_err());
        // q = 3, m = 1: negating one symplectic coordinate fixes a subgroup of order 3
        let s = gen_extraspecial(3, 1, 2, 1).unwrap();
        assert_eq!(s.fixed_subgroup_of_element(&[1]).unwrap().order(), 3);
    }

    #[test]
    fn named_blocks_validate() {
        for b in [
            NamedBlock::Wreath33,
            NamedBlock::Frobenius21,
            NamedBlock::Frobenius39,
            NamedBlock::Dihedral14,
            NamedBlock::Dihedral26,
            NamedBlock::Quaternion8,
            NamedBlock::Heisenberg27,
        ] {
            let block = b.block().unwrap();
            let s = block.setup(block.automorphisms.len()).unwrap();
            assert!(validate_setup(&s).valid, "{b:?}");
        }
        let f = NamedBlock::Frobenius21.block().unwrap().setup(1).unwrap();
        assert_eq!(f.fixed_subgroup_of_element(&[1]).unwrap().order(), 3);
        assert_eq!(NamedBlock::Quaternion8.block().unwrap().group.order(), 8);
    }

    #[test]
    fn coordinate_swap_fixes_diagonal() {
        let block = Block {
            group: elementary_abelian(3, 1).unwrap(),
            p: 2,
            automorphisms: vec![],
        };
        let s = gen_coordinate_permutation(&block, 1, 1).unwrap();
        assert_eq!(s.group().order(), 9);
        assert_eq!(s.fixed_subgroup_of_element(&[1]).unwrap().order(), 3);
    }

    #[test]
    fn direct_sum_fixed_points_factor() {
        let inv = gen_gl_module(3, 1, 2, 1, 0).unwrap();
        let five = ActionSetup::trivial(elementary_abelian(5, 1).unwrap(), 2, 1).unwrap();
        let s = gen_direct_sum(&[inv.clone()]).unwrap();
        assert_eq!(s.group().order(), 3);
        let s = gen_direct_sum(&[inv, five]).unwrap();
        let c = s.fixed_subgroup_of_element(&[1]).unwrap();
        assert_eq!(c.order(), 5);
        let other_p = ActionSetup::trivial(elementary_abelian(5, 1).unwrap(), 3, 1).unwrap();
        assert!(gen_direct_sum(&[s, other_p]).is_err());
    }

    #[test]
    fn presets_build() {
        let mut total = 0;
        for name in PRESETS {
            let list = preset_instances(name, 0).unwrap();
            total += list.len();
            for inst in &list {
                assert!(validate_setup(&inst.setup).valid, "{}", inst.name);
            }
        }
        assert!(total >= 30);
        assert!(preset_instances("nope", 0).is_err());
    }

    #[test]
    fn zoo_is_nilpotent() {
        let zoo = nilpotent_zoo().unwrap();
        assert!(zoo.len() >= 20);
        for (name, g) in &zoo {
            assert!(nilpotency_class(g).is_some(), "{name}");
            assert!((27..=2187).contains(&g.order()), "{name}: {}", g.order());
        }
    }

    #[test]
    fn file_round_trip() {
        let s = gen_extraspecial(3, 1, 2, 2).unwrap();
        let text = export_instance(Some("heis"), &s).unwrap();
        let back = parse_instance(&text, "x").unwrap();
        assert_eq!(back.name, "heis");
        assert_eq!(back.setup.group().order(), 27);
        assert_eq!(export_instance(Some("heis"), &back.setup).unwrap(), text);
    }

    #[test]
    fn file_errors_have_locations() {
        let trivial = r#"{"schema":1,"p":2,"k":2,"group":{"degree":3,"generators":[[1,2,0]]},"action":{}}"#;
        let inst = parse_instance(trivial, "t").unwrap();
        assert_eq!(inst.setup.group().order(), 3);

        let coprime = r#"{"schema":1,"p":3,"k":1,"group":{"degree":3,"generators":[[1,2,0]]},"action":{}}"#;
        assert!(matches!(parse_instance(coprime, "t"), Err(Error::InvalidAction(m)) if m.contains("coprime")));

        let bad = r#"{"schema":1,"p":2,"k":1,"group":{"degree":3,"generators":[[1,1,0]]},"action":{}}"#;
        assert!(matches!(parse_instance(bad, "t"), Err(Error::Schema { location, .. }) if location == "$.group.generators[0]"));

        let non_hom = r#"{"schema":1,"p":2,"k":1,"group":{"degree":3,"generators":[[1,2,0]]},"action":{"1":{"0":[0,1,2]}}}"#;
        assert!(matches!(parse_instance(non_hom, "t"), Err(Error::InvalidAction(_))));

        let wrong_schema = r#"{"schema":2,"p":2,"k":1,"group":{"degree":3,"generators":[]},"action":{}}"#;
        assert!(matches!(parse_instance(wrong_schema, "t"), Err(Error::Schema { location, .. }) if location == "$.schema"));
    }
}
