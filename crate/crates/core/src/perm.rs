//! Explicit permutations of a canonically ranked state space.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cipher::{CipherSpec, Pipeline};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::state::StateShape;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_odd(odd: bool) -> Parity {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Parity of a composition.
    pub fn compose(self, other: Parity) -> Parity {
        Parity::from_odd(self.is_odd() ^ other.is_odd())
    }

    /// Parity of a k-fold composition.
    pub fn times(self, k: u64) -> Parity {
        Parity::from_odd(self.is_odd() && k % 2 == 1)
    }
}

impl std::ops::BitXor for Parity {
    type Output = Parity;

    fn bitxor(self, rhs: Parity) -> Parity {
        self.compose(rhs)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// `images[i]` is the rank of the image of the state with rank `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DensePermutation {
    images: Vec<u32>,
}

impl fmt::Debug for DensePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.images.len() <= 32 {
            write!(f, "Perm{:?}", self.images)
        } else {
            write!(f, "Perm(N={})", self.images.len())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleDecomposition {
    pub cycles: Vec<Vec<u32>>,
}

impl CycleDecomposition {
    /// Length → number of cycles of that length.
    pub fn cycle_type(&self) -> BTreeMap<usize, u64> {
        let mut t = BTreeMap::new();
        for c in &self.cycles {
            *t.entry(c.len()).or_insert(0) += 1;
        }
        t
    }
}

impl DensePermutation {
    pub fn identity(n: usize) -> DensePermutation {
        DensePermutation {
            images: (0..n as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<DensePermutation> {
        if let Some((first, second, image)) = first_collision(&images)? {
            return Err(Error::NotBijective {
                first,
                second,
                image,
            });
        }
        Ok(DensePermutation { images })
    }

    /// Builds a permutation from disjoint cycles; unlisted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<u32>]) -> Result<DensePermutation> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                let y = c[(i + 1) % c.len()];
                if x as usize >= n || y as usize >= n {
                    return Err(Error::IndexOutOfRange(format!(
                        "{x} in a permutation of {n}"
                    )));
                }
                images[x as usize] = y;
            }
        }
        DensePermutation::from_images(images)
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: u32) -> u32 {
        self.images[i as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// (self ∘ other)(i) = self(other(i)).
    pub fn compose(&self, other: &DensePermutation) -> Result<DensePermutation> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch(self.size(), other.size()));
        }
        Ok(DensePermutation {
            images: other
                .images
                .iter()
                .map(|&x| self.images[x as usize])
                .collect(),
        })
    }

    /// other ∘ self: apply self first. Panics on size mismatch.
    pub fn then(&self, other: &DensePermutation) -> DensePermutation {
        other.compose(self).expect("equal sizes")
    }

    pub fn inverse(&self) -> DensePermutation {
        let mut inv = vec![0u32; self.size()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        DensePermutation { images: inv }
    }

    /// g⁻¹ ∘ self ∘ g.
    pub fn conjugate_by(&self, g: &DensePermutation) -> DensePermutation {
        g.then(self).then(&g.inverse())
    }

    pub fn pow(&self, mut e: u64) -> DensePermutation {
        let mut acc = DensePermutation::identity(self.size());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.then(&base);
            }
        }
        acc
    }

    pub fn cycle_decomposition(&self) -> CycleDecomposition {
        let mut seen = vec![false; self.size()];
        let mut cycles = Vec::new();
        for start in 0..self.size() {
            if seen[start] {
                continue;
            }
            let mut c = Vec::new();
            let mut x = start as u32;
            while !seen[x as usize] {
                seen[x as usize] = true;
                c.push(x);
                x = self.images[x as usize];
            }
            cycles.push(c);
        }
        CycleDecomposition { cycles }
    }

    /// Cycle type without materializing the cycles.
    pub fn cycle_type(&self) -> BTreeMap<usize, u64> {
        let mut seen = vec![false; self.size()];
        let mut t = BTreeMap::new();
        for start in 0..self.size() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.images[x] as usize;
            }
            *t.entry(len).or_insert(0u64) += 1;
        }
        t
    }

    pub fn parity(&self) -> Parity {
        let even_cycles: u64 = self
            .cycle_type()
            .iter()
            .filter(|(len, _)| *len % 2 == 0)
            .map(|(_, c)| c)
            .sum();
        Parity::from_odd(even_cycles % 2 == 1)
    }

    pub fn order(&self) -> BigUint {
        self.cycle_type()
            .keys()
            .fold(BigUint::from(1u32), |acc, &l| acc.lcm(&BigUint::from(l)))
    }

    pub fn support_size(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i as u32 != x)
            .count()
    }
}

/// Lowest-index collision `(first, second, image)`, if any.
fn first_collision(images: &[u32]) -> Result<Option<(u64, u64, u64)>> {
    let n = images.len();
    let mut preimage = vec![u32::MAX; n];
    for (i, &x) in images.iter().enumerate() {
        let slot = preimage
            .get_mut(x as usize)
            .ok_or_else(|| Error::IndexOutOfRange(format!("image {x} in a permutation of {n}")))?;
        if *slot != u32::MAX {
            return Ok(Some((*slot as u64, i as u64, x as u64)));
        }
        *slot = i as u32;
    }
    Ok(None)
}

const CHUNK: usize = 1 << 12;

/// Tabulates a state map over the whole space and checks it is a bijection.
/// `f(input, output)` receives row-major entries.
pub fn materialize<F>(shape: &StateShape, cap: u64, f: F) -> Result<DensePermutation>
where
    F: Fn(&[Elem], &mut [Elem]) + Sync,
{
    let size = shape.enumerable_size(cap.min(u32::MAX as u64))? as usize;
    let mut images = vec![0u32; size];
    images
        .par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(c, out)| {
            let mut a = vec![Elem::ZERO; shape.len()];
            let mut b = vec![Elem::ZERO; shape.len()];
            for (k, slot) in out.iter_mut().enumerate() {
                shape.unrank_into((c * CHUNK + k) as u64, &mut a);
                f(&a, &mut b);
                *slot = shape.rank_of(&b) as u32;
            }
        });
    DensePermutation::from_images(images)
}

/// Tabulates a pipeline of cipher components.
pub fn materialize_pipeline(
    spec: &CipherSpec,
    pipeline: &Pipeline,
    cap: u64,
) -> Result<DensePermutation> {
    materialize(spec.shape(), cap, |a, b| {
        b.copy_from_slice(a);
        pipeline.apply(spec, b);
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_of_cycles() {
        let t = DensePermutation::from_cycles(4, &[vec![0, 1]]).unwrap();
        assert_eq!(t.parity(), Parity::Odd);
        assert_eq!(DensePermutation::identity(4).parity(), Parity::Even);
        let c3 = DensePermutation::from_cycles(5, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(c3.parity(), Parity::Even);
        assert_eq!(c3.order(), BigUint::from(3u32));
    }

    #[test]
    fn compose_and_inverse() {
        let a = DensePermutation::from_images(vec![1, 2, 0, 3]).unwrap();
        let b = DensePermutation::from_images(vec![0, 1, 3, 2]).unwrap();
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.images(), &[1, 2, 3, 0]);
        assert!(a.compose(&a.inverse()).unwrap().is_identity());
        assert_eq!(a.pow(3), DensePermutation::identity(4));
        assert!(a.compose(&DensePermutation::identity(3)).is_err());
    }

    #[test]
    fn collision_witness() {
        let err = DensePermutation::from_images(vec![0, 2, 2, 1]).unwrap_err();
        assert_eq!(
            err,
            Error::NotBijective {
                first: 1,
                second: 2,
                image: 2
            }
        );
    }

    #[test]
    fn cycles_round_trip() {
        let a = DensePermutation::from_images(vec![3, 0, 4, 1, 2, 5]).unwrap();
        let d = a.cycle_decomposition();
        assert_eq!(DensePermutation::from_cycles(6, &d.cycles).unwrap(), a);
        assert_eq!(d.cycle_type(), a.cycle_type());
    }
}
