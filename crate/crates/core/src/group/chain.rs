//! Stabilizer chains (Schreier–Sims) over dense permutations.
//!
//! Construction is randomized Schreier–Sims driven by a seeded
//! product-replacement generator. The resulting order is a lower bound on
//! the true order; it is accepted outright when it reaches the largest
//! order possible for the generators (N! or N!/2). Otherwise every Schreier
//! generator is sifted until none survives, which makes the chain exact.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{DensePermutation, Parity};

const NONE: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;

/// Consecutive successful random sifts before the random phase stops.
const RANDOM_SIFTS: usize = 48;

type Perm = Vec<u32>;

fn compose(a: &[u32], b: &[u32]) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn invert(a: &[u32]) -> Perm {
    let mut inv = vec![0u32; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

fn is_identity(a: &[u32]) -> bool {
    a.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

pub fn factorial(n: usize) -> BigUint {
    (2..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

#[derive(Clone, Debug)]
struct Level {
    base: u32,
    /// Indices into the strong generating set.
    gens: Vec<usize>,
    orbit: Vec<u32>,
    /// For x in the orbit, the strong generator g with x = g(parent).
    label: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainMethod {
    /// Random phase reached the largest possible order.
    RandomizedCertified,
    /// Random phase followed by a full Schreier generator check.
    Deterministic,
    /// Primitive and containing a prime cycle of length at most N - 3.
    GiantRecognition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Giant {
    Alternating,
    Symmetric,
}

#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    strong: Vec<Perm>,
    strong_inv: Vec<Perm>,
    levels: Vec<Level>,
    giant: Option<Giant>,
    method: ChainMethod,
    any_odd: bool,
}

impl StabilizerChain {
    /// Schreier–Sims from the given generators.
    pub fn schreier_sims(generators: &[DensePermutation], seed: u64) -> Result<StabilizerChain> {
        let degree = check_sizes(generators)?;
        let mut chain = StabilizerChain {
            degree,
            strong: Vec::new(),
            strong_inv: Vec::new(),
            levels: Vec::new(),
            giant: None,
            method: ChainMethod::Deterministic,
            any_odd: generators.iter().any(|g| g.parity().is_odd()),
        };
        let gens: Vec<Perm> = generators
            .iter()
            .map(|g| g.images().to_vec())
            .filter(|g| !is_identity(g))
            .collect();
        if gens.is_empty() {
            chain.method = ChainMethod::RandomizedCertified;
            return Ok(chain);
        }
        for g in &gens {
            let (res, j) = chain.sift(g.clone(), 0);
            if !is_identity(&res) {
                chain.insert(res, j);
            }
        }
        let bound = chain.order_bound();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pr = ProductReplacement::new(&gens, &mut rng);
        let mut streak = 0;
        while streak < RANDOM_SIFTS && chain.order() < bound {
            let g = pr.next(&mut rng);
            let (res, j) = chain.sift(g, 0);
            if is_identity(&res) {
                streak += 1;
            } else {
                chain.insert(res, j);
                streak = 0;
            }
        }
        if chain.order() == bound {
            chain.method = ChainMethod::RandomizedCertified;
        } else {
            chain.verify();
            chain.method = ChainMethod::Deterministic;
        }
        Ok(chain)
    }

    /// A_N or S_N without an explicit chain.
    pub fn giant(degree: usize, kind: Giant) -> StabilizerChain {
        StabilizerChain {
            degree,
            strong: Vec::new(),
            strong_inv: Vec::new(),
            levels: Vec::new(),
            giant: Some(kind),
            method: ChainMethod::GiantRecognition,
            any_odd: kind == Giant::Symmetric,
        }
    }

    fn order_bound(&self) -> BigUint {
        let f = factorial(self.degree);
        if self.any_odd {
            f
        } else {
            f / 2u32
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn method(&self) -> ChainMethod {
        self.method
    }

    pub fn giant_kind(&self) -> Option<Giant> {
        self.giant
    }

    pub fn base(&self) -> Vec<u32> {
        match self.giant {
            Some(kind) => (0..self.giant_base_len(kind) as u32).collect(),
            None => self.levels.iter().map(|l| l.base).collect(),
        }
    }

    fn giant_base_len(&self, kind: Giant) -> usize {
        match kind {
            Giant::Symmetric => self.degree.saturating_sub(1),
            Giant::Alternating => self.degree.saturating_sub(2),
        }
    }

    /// Fundamental orbit lengths, one per base point.
    pub fn orbit_lengths(&self) -> Vec<u64> {
        match self.giant {
            Some(kind) => (0..self.giant_base_len(kind))
                .map(|i| (self.degree - i) as u64)
                .collect(),
            None => self.levels.iter().map(|l| l.orbit.len() as u64).collect(),
        }
    }

    pub fn order(&self) -> BigUint {
        self.orbit_lengths()
            .into_iter()
            .fold(BigUint::one(), |acc, l| acc * l)
    }

    pub fn strong_generator_count(&self) -> usize {
        self.strong.len()
    }

    pub fn contains(&self, g: &DensePermutation) -> bool {
        if g.size() != self.degree {
            return false;
        }
        match self.giant {
            Some(Giant::Symmetric) => true,
            Some(Giant::Alternating) => g.parity() == Parity::Even,
            None => {
                let (res, j) = self.sift(g.images().to_vec(), 0);
                j == self.levels.len() && is_identity(&res)
            }
        }
    }

    /// Strips `h` through levels `from..`; returns the residue and the
    /// level at which it left the chain (`levels.len()` if it passed all).
    fn sift(&self, mut h: Perm, from: usize) -> (Perm, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let b = level.base;
            let mut x = h[b as usize];
            if level.label[x as usize] == NONE {
                return (h, i);
            }
            while x != b {
                let gi = level.label[x as usize] as usize;
                let inv = &self.strong_inv[gi];
                for v in h.iter_mut() {
                    *v = inv[*v as usize];
                }
                x = inv[x as usize];
            }
        }
        (h, self.levels.len())
    }

    /// Adds `h`, which fixes the first `j` base points, as a strong generator.
    fn insert(&mut self, h: Perm, j: usize) {
        let gi = self.strong.len();
        self.strong_inv.push(invert(&h));
        self.strong.push(h);
        if j == self.levels.len() {
            let h = &self.strong[gi];
            let moved = (0..self.degree as u32)
                .find(|&x| h[x as usize] != x)
                .expect("nonidentity residue");
            self.levels.push(Level {
                base: moved,
                gens: Vec::new(),
                orbit: Vec::new(),
                label: Vec::new(),
            });
        }
        for i in 0..=j {
            self.levels[i].gens.push(gi);
            self.rebuild_orbit(i);
        }
    }

    fn rebuild_orbit(&mut self, i: usize) {
        let n = self.degree;
        let level = &mut self.levels[i];
        let mut label = vec![NONE; n];
        label[level.base as usize] = ROOT;
        let mut orbit = vec![level.base];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            for &gi in &level.gens {
                let y = self.strong[gi][x as usize];
                if label[y as usize] == NONE {
                    label[y as usize] = gi as u32;
                    orbit.push(y);
                }
            }
            k += 1;
        }
        level.orbit = orbit;
        level.label = label;
    }

    /// u_x with u_x(base) = x, for x in the orbit of level i.
    fn transversal(&self, i: usize, mut x: u32) -> Perm {
        let level = &self.levels[i];
        let mut u: Perm = (0..self.degree as u32).collect();
        while level.label[x as usize] != ROOT {
            let gi = level.label[x as usize] as usize;
            u = compose(&u, &self.strong[gi]);
            // walking towards the root: x = g(parent)
            x = self.strong_inv[gi][x as usize];
        }
        // u was built as g_1 ∘ g_2 ∘ … in path order from x, which maps base to x.
        u
    }

    /// Sifts every Schreier generator, adding residues, until all pass.
    fn verify(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            i -= 1;
            let mut restart = None;
            'scan: for x in self.levels[i].orbit.clone() {
                let ux = self.transversal(i, x);
                for gi in self.levels[i].gens.clone() {
                    let y = self.strong[gi][x as usize];
                    let uy_inv = invert(&self.transversal(i, y));
                    let h = compose(&uy_inv, &compose(&self.strong[gi], &ux));
                    let (res, j) = self.sift(h, i + 1);
                    if !is_identity(&res) {
                        self.insert(res, j);
                        restart = Some(j + 1);
                        break 'scan;
                    }
                }
            }
            if let Some(r) = restart {
                i = r.min(self.levels.len());
            }
        }
    }
}

fn check_sizes(generators: &[DensePermutation]) -> Result<usize> {
    let degree = generators.first().map_or(0, |g| g.size());
    if let Some(g) = generators.iter().find(|g| g.size() != degree) {
        return Err(Error::SizeMismatch(degree, g.size()));
    }
    Ok(degree)
}

/// Seeded product-replacement random elements.
pub struct ProductReplacement {
    slots: Vec<Perm>,
    acc: Perm,
}

impl ProductReplacement {
    pub fn new(gens: &[Perm], rng: &mut impl Rng) -> ProductReplacement {
        let n = gens.first().map_or(0, |g| g.len());
        let mut slots: Vec<Perm> = gens.to_vec();
        while slots.len() < 10 {
            slots.push(gens[slots.len() % gens.len()].clone());
        }
        let mut pr = ProductReplacement {
            slots,
            acc: (0..n as u32).collect(),
        };
        for _ in 0..50 {
            pr.next(rng);
        }
        pr
    }

    pub fn from_perms(gens: &[DensePermutation], rng: &mut impl Rng) -> ProductReplacement {
        let gens: Vec<Perm> = gens.iter().map(|g| g.images().to_vec()).collect();
        ProductReplacement::new(&gens, rng)
    }

    pub fn next(&mut self, rng: &mut impl Rng) -> Perm {
        let k = self.slots.len();
        let i = rng.gen_range(0..k);
        let mut j = rng.gen_range(0..k - 1);
        if j >= i {
            j += 1;
        }
        let other = if rng.gen_bool(0.5) {
            self.slots[j].clone()
        } else {
            invert(&self.slots[j])
        };
        self.slots[i] = if rng.gen_bool(0.5) {
            compose(&self.slots[i], &other)
        } else {
            compose(&other, &self.slots[i])
        };
        self.acc = compose(&self.acc, &self.slots[i]);
        self.acc.clone()
    }

    pub fn next_perm(&mut self, rng: &mut impl Rng) -> DensePermutation {
        DensePermutation::from_images(self.next(rng)).expect("products of permutations")
    }
}

/// Orbits of the group generated by `gens` on 0..n, in order of least element.
pub fn orbits(n: usize, gens: &[DensePermutation]) -> Vec<Vec<u32>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut orbit = vec![s as u32];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            for g in gens {
                let y = g.apply(x) as usize;
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y as u32);
                }
            }
            k += 1;
        }
        out.push(orbit);
    }
    out
}

/// Smallest block containing 0 and `b`, by union-find closure.
fn minimal_block(n: usize, gens: &[DensePermutation], b: u32) -> usize {
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let up = parent[parent[x as usize] as usize];
            parent[x as usize] = up;
            x = up;
        }
        x
    }
    let mut queue = vec![(0u32, b)];
    while let Some((x, y)) = queue.pop() {
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx == ry {
            continue;
        }
        parent[ry as usize] = rx;
        for g in gens {
            queue.push((g.apply(x), g.apply(y)));
        }
    }
    let r0 = find(&mut parent, 0);
    (0..n as u32)
        .filter(|&x| find(&mut parent, x) == r0)
        .count()
}

/// Transitive and without nontrivial blocks.
pub fn is_primitive(n: usize, gens: &[DensePermutation]) -> bool {
    if n <= 1 {
        return true;
    }
    if orbits(n, gens).len() != 1 {
        return false;
    }
    (1..n as u32).all(|b| minimal_block(n, gens, b) == n)
}

fn is_prime(n: usize) -> bool {
    crate::arith::is_prime(n as u64)
}

/// A prime p ≤ n - 3 and the p-cycle obtained as a power of `g`, when `g`
/// has exactly one cycle of length p and no other length divisible by p.
pub fn prime_cycle_power(g: &DensePermutation) -> Option<(usize, DensePermutation)> {
    let n = g.size();
    let ct = g.cycle_type();
    for (&len, &count) in ct.iter().rev() {
        if count != 1 || len < 2 || len + 3 > n || !is_prime(len) {
            continue;
        }
        if ct.keys().any(|&l| l != len && l % len == 0) {
            continue;
        }
        let others = ct
            .keys()
            .filter(|&&l| l != len)
            .fold(1u64, |acc, &l| num_integer::lcm(acc, l as u64));
        return Some((len, g.pow(others)));
    }
    None
}

/// Jordan: a primitive group containing a p-cycle with p prime and
/// p ≤ N - 3 contains A_N.
pub fn recognize_giant(
    gens: &[DensePermutation],
    seed: u64,
    tries: usize,
) -> Option<(Giant, usize)> {
    let n = gens.first()?.size();
    if n < 5 || !is_primitive(n, gens) {
        return None;
    }
    let kind = if gens.iter().any(|g| g.parity().is_odd()) {
        Giant::Symmetric
    } else {
        Giant::Alternating
    };
    for g in gens {
        if let Some((p, _)) = prime_cycle_power(g) {
            return Some((kind, p));
        }
    }
    let nontrivial: Vec<Perm> = gens
        .iter()
        .filter(|g| !g.is_identity())
        .map(|g| g.images().to_vec())
        .collect();
    if nontrivial.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6a09_e667);
    let mut pr = ProductReplacement::new(&nontrivial, &mut rng);
    for _ in 0..tries {
        let g = pr.next_perm(&mut rng);
        if let Some((p, _)) = prime_cycle_power(&g) {
            return Some((kind, p));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[u32]) -> DensePermutation {
        DensePermutation::from_images(v.to_vec()).unwrap()
    }

    fn cycle(n: usize) -> DensePermutation {
        perm(
            &(0..n as u32)
                .map(|i| (i + 1) % n as u32)
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn symmetric_six() {
        let gens = [
            DensePermutation::from_cycles(6, &[vec![0, 1]]).unwrap(),
            cycle(6),
        ];
        let c = StabilizerChain::schreier_sims(&gens, 1).unwrap();
        assert_eq!(c.order(), BigUint::from(720u32));
    }

    #[test]
    fn alternating_five() {
        let gens = [
            DensePermutation::from_cycles(5, &[vec![0, 1, 2]]).unwrap(),
            DensePermutation::from_cycles(5, &[vec![2, 3, 4]]).unwrap(),
        ];
        let c = StabilizerChain::schreier_sims(&gens, 1).unwrap();
        assert_eq!(c.order(), BigUint::from(60u32));
        assert!(!c.contains(&DensePermutation::from_cycles(5, &[vec![0, 1]]).unwrap()));
    }

    #[test]
    fn small_groups_need_the_deterministic_pass() {
        // Dihedral group of order 16 on 8 points.
        let r = cycle(8);
        let s = perm(&[0, 7, 6, 5, 4, 3, 2, 1]);
        let c = StabilizerChain::schreier_sims(&[r.clone(), s.clone()], 3).unwrap();
        assert_eq!(c.order(), BigUint::from(16u32));
        assert_eq!(c.method(), ChainMethod::Deterministic);
        assert!(c.contains(&r.then(&s)));
        assert!(!c.contains(&DensePermutation::from_cycles(8, &[vec![0, 1]]).unwrap()));
    }

    #[test]
    fn trivial_group() {
        let c = StabilizerChain::schreier_sims(&[DensePermutation::identity(4)], 0).unwrap();
        assert_eq!(c.order(), BigUint::one());
        assert!(c.contains(&DensePermutation::identity(4)));
    }

    #[test]
    fn giant_recognition_agrees_with_schreier_sims() {
        let gens = [
            DensePermutation::from_cycles(9, &[vec![0, 1]]).unwrap(),
            cycle(9),
        ];
        assert_eq!(
            recognize_giant(&gens, 0, 100).map(|g| g.0),
            Some(Giant::Symmetric)
        );
        let c = StabilizerChain::schreier_sims(&gens, 0).unwrap();
        assert_eq!(c.order(), factorial(9));
        // the dihedral group is not primitive on 8 points
        let d = [cycle(8), perm(&[0, 7, 6, 5, 4, 3, 2, 1])];
        assert!(recognize_giant(&d, 0, 100).is_none());
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(5, &[cycle(5)]));
        assert!(!is_primitive(6, &[cycle(6)]));
    }
}
