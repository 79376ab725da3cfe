//! Permutations of `{0..n-1}` acting on the right.
//!
//! A product `x * y` means "apply `x`, then `y`", so point `i` is sent to
//! `y(x(i))`. Commutators follow the same convention: `[x, y] = x⁻¹y⁻¹xy`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm {
    images: Box<[u32]>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image array, rejecting repeated or
    /// out-of-range images.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (i, &x) in images.iter().enumerate() {
            let x = x as usize;
            if x >= n {
                return Err(Error::InvalidPerm(format!(
                    "image {x} of point {i} is out of range for degree {n}"
                )));
            }
            if seen[x] {
                return Err(Error::InvalidPerm(format!("image {x} repeated")));
            }
            seen[x] = true;
        }
        Ok(Perm {
            images: images.into_boxed_slice(),
        })
    }

    /// Product of disjoint cycles on `degree` points. Cycles must not overlap.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (pos, &a) in cycle.iter().enumerate() {
                let b = cycle[(pos + 1) % cycle.len()];
                if a as usize >= degree || b as usize >= degree {
                    return Err(Error::InvalidPerm(format!(
                        "cycle point out of range for degree {degree}"
                    )));
                }
                if touched[a as usize] {
                    return Err(Error::InvalidPerm(format!("point {a} appears twice in cycles")));
                }
                touched[a as usize] = true;
                images[a as usize] = b;
            }
        }
        Perm::from_images(images)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i)
    }

    pub fn mul(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Perm {
            images: images.into_boxed_slice(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Perm {
        let mut base = self.clone();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `g⁻¹ self g`
    pub fn conjugate(&self, g: &Perm) -> Perm {
        g.inverse().mul(self).mul(g)
    }

    /// `[self, other] = self⁻¹ other⁻¹ self other`
    pub fn commutator(&self, other: &Perm) -> Perm {
        self.inverse()
            .mul(&other.inverse())
            .mul(self)
            .mul(other)
    }

    /// Order as the lcm of cycle lengths.
    pub fn order(&self) -> u64 {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut order = 1u64;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            order = lcm(order, len);
        }
        order
    }

    /// Places `self` on points `offset..offset+degree` of a permutation of
    /// `total` points, fixing everything else.
    pub fn shifted(&self, offset: usize, total: usize) -> Perm {
        let mut images: Vec<u32> = (0..total as u32).collect();
        for (i, &x) in self.images.iter().enumerate() {
            images[offset + i] = offset as u32 + x;
        }
        Perm {
            images: images.into_boxed_slice(),
        }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
                first = false;
                x = self.images[x] as usize;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}
