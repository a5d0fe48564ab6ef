//! The state space M_{m,n}(GF(p^r)) and its canonical integer ranking.
//!
//! States are stored row-major. A state's rank reads the entries in that
//! order as digits base q = p^r, least significant first; each entry's digit
//! is its packed coefficient code, so the whole rank is the coefficient
//! vector read base p, least significant first.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};

/// Default enumeration cap on the number of states.
pub const DEFAULT_MAX_STATES: u64 = 1 << 20;
/// Environment variable overriding [`DEFAULT_MAX_STATES`].
pub const MAX_STATES_ENV: &str = "SPN_MAX_STATES";

/// Enumeration cap, honouring `SPN_MAX_STATES` when it parses.
pub fn max_states() -> u64 {
    std::env::var(MAX_STATES_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_STATES)
}

#[derive(Clone, PartialEq, Eq)]
pub struct StateShape {
    m: usize,
    n: usize,
    field: Arc<FieldSpec>,
}

impl fmt::Debug for StateShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} over {}", self.m, self.n, self.field)
    }
}

impl StateShape {
    pub fn new(field: Arc<FieldSpec>, m: usize, n: usize) -> Result<StateShape> {
        if m == 0 {
            return Err(Error::invalid("m", "must be at least 1"));
        }
        if n == 0 {
            return Err(Error::invalid("n", "must be at least 1"));
        }
        Ok(StateShape { m, n, field })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of field coordinates, m·n.
    pub fn len(&self) -> usize {
        self.m * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    /// log_p of the state count, r·m·n.
    pub fn bit_degree(&self) -> u64 {
        self.field.r() as u64 * self.len() as u64
    }

    /// p^{rmn}, or `None` when it does not fit in a u64.
    pub fn size(&self) -> Option<u64> {
        crate::arith::checked_pow(self.field.p() as u64, self.bit_degree())
    }

    pub fn size_big(&self) -> num_bigint::BigUint {
        num_bigint::BigUint::from(self.field.p()).pow(self.bit_degree() as u32)
    }

    /// State count, refused above `cap`.
    pub fn enumerable_size(&self, cap: u64) -> Result<u64> {
        match self.size() {
            Some(s) if s <= cap => Ok(s),
            _ => Err(Error::too_large("state space", self.size_big(), cap)),
        }
    }

    pub fn zero(&self) -> StateMatrix {
        StateMatrix {
            shape: self.clone(),
            entries: vec![Elem::ZERO; self.len()],
        }
    }

    /// Entries of the state with the given rank, written into `out`.
    pub fn unrank_into(&self, mut index: u64, out: &mut [Elem]) {
        let q = self.field.order() as u64;
        for e in out.iter_mut() {
            *e = Elem((index % q) as u32);
            index /= q;
        }
    }

    pub fn rank_of(&self, entries: &[Elem]) -> u64 {
        let q = self.field.order() as u64;
        entries
            .iter()
            .rev()
            .fold(0u64, |acc, e| acc * q + e.0 as u64)
    }

    pub fn unrank(&self, index: u64) -> Result<StateMatrix> {
        match self.size() {
            Some(s) if index < s => {}
            _ => return Err(Error::IndexOutOfRange(format!("{index} for {self:?}"))),
        }
        let mut entries = vec![Elem::ZERO; self.len()];
        self.unrank_into(index, &mut entries);
        Ok(StateMatrix {
            shape: self.clone(),
            entries,
        })
    }

    /// b_{ij} = a_{n·i + j}.
    pub fn flatten(&self, a: &[Elem]) -> Result<StateMatrix> {
        if a.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: a.len(),
            });
        }
        self.matrix(a.to_vec())
    }

    pub fn matrix(&self, entries: Vec<Elem>) -> Result<StateMatrix> {
        if entries.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: entries.len(),
            });
        }
        let q = self.field.order();
        if let Some(bad) = entries.iter().find(|e| e.0 >= q) {
            return Err(Error::InvalidElement(format!("code {} in GF({q})", bad.0)));
        }
        Ok(StateMatrix {
            shape: self.clone(),
            entries,
        })
    }

    pub fn from_rows(&self, rows: Vec<Vec<Elem>>) -> Result<StateMatrix> {
        if rows.len() != self.m || rows.iter().any(|r| r.len() != self.n) {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{}", self.m, self.n),
                found: format!("{}x{}", rows.len(), rows.first().map_or(0, |r| r.len())),
            });
        }
        self.matrix(rows.into_iter().flatten().collect())
    }

    /// All states in rank order.
    pub fn enumerate_states(&self) -> Result<StateIter> {
        self.enumerate_states_capped(max_states())
    }

    pub fn enumerate_states_capped(&self, cap: u64) -> Result<StateIter> {
        let size = self.enumerable_size(cap)?;
        Ok(StateIter {
            shape: self.clone(),
            next: 0,
            end: size,
        })
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct StateMatrix {
    shape: StateShape,
    entries: Vec<Elem>,
}

impl fmt::Debug for StateMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl StateMatrix {
    pub fn shape(&self) -> &StateShape {
        &self.shape
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [Elem] {
        &mut self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[i * self.shape.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.entries[i * self.shape.n + j] = v;
    }

    pub fn rows(&self) -> Vec<&[Elem]> {
        self.entries.chunks(self.shape.n).collect()
    }

    pub fn unflatten(&self) -> Vec<Elem> {
        self.entries.clone()
    }

    pub fn rank(&self) -> u64 {
        self.shape.rank_of(&self.entries)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, other: &StateMatrix) -> Result<StateMatrix> {
        self.check_shape(other)?;
        let f = self.shape.field();
        Ok(StateMatrix {
            shape: self.shape.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: Elem) -> StateMatrix {
        let f = self.shape.field();
        StateMatrix {
            shape: self.shape.clone(),
            entries: self.entries.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn neg(&self) -> StateMatrix {
        let f = self.shape.field();
        StateMatrix {
            shape: self.shape.clone(),
            entries: self.entries.iter().map(|&a| f.neg(a)).collect(),
        }
    }

    pub fn check_shape(&self, other: &StateMatrix) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                expected: format!("{:?}", self.shape),
                found: format!("{:?}", other.shape),
            });
        }
        Ok(())
    }

    /// Row-major list of coefficient vectors, the report serialization.
    pub fn to_coeff_rows(&self) -> Vec<Vec<Vec<u32>>> {
        let f = self.shape.field();
        self.rows()
            .into_iter()
            .map(|row| row.iter().map(|&e| f.coeffs(e)).collect())
            .collect()
    }
}

impl Serialize for StateMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_coeff_rows().serialize(s)
    }
}

#[derive(Debug)]
pub struct StateIter {
    shape: StateShape,
    next: u64,
    end: u64,
}

impl Iterator for StateIter {
    type Item = StateMatrix;

    fn next(&mut self) -> Option<StateMatrix> {
        if self.next == self.end {
            return None;
        }
        let mut entries = vec![Elem::ZERO; self.shape.len()];
        self.shape.unrank_into(self.next, &mut entries);
        self.next += 1;
        Some(StateMatrix {
            shape: self.shape.clone(),
            entries,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for StateIter {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn shape(p: u64, r: u32, m: usize, n: usize) -> StateShape {
        StateShape::new(Arc::new(make_field(p, r, None).unwrap()), m, n).unwrap()
    }

    #[test]
    fn index_law() {
        let s = shape(7, 1, 2, 3);
        let a: Vec<Elem> = (0..6).map(Elem).collect();
        let b = s.flatten(&a).unwrap();
        assert_eq!(b.get(1, 1), Elem(4));
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(b.get(i, j), a[3 * i + j]);
            }
        }
        assert_eq!(b.unflatten(), a);
        assert!(s.flatten(&a[..5]).is_err());
    }

    #[test]
    fn mixed_radix_rank() {
        let s = shape(3, 1, 1, 2);
        let st = s.from_rows(vec![vec![Elem(1), Elem(2)]]).unwrap();
        assert_eq!(st.rank(), 7);
        assert_eq!(s.zero().rank(), 0);
        assert!(s.unrank(9).is_err());
    }

    #[test]
    fn rank_is_bijective() {
        for (p, r, m, n) in [
            (2u64, 1u32, 2usize, 3usize),
            (3, 2, 1, 3),
            (2, 4, 2, 2),
            (5, 1, 2, 3),
        ] {
            let s = shape(p, r, m, n);
            let mut count = 0u64;
            for (i, st) in s.enumerate_states().unwrap().enumerate() {
                assert_eq!(st.rank(), i as u64);
                assert_eq!(s.unrank(i as u64).unwrap(), st);
                count += 1;
            }
            assert_eq!(count, s.size().unwrap());
        }
    }

    #[test]
    fn enumeration_order_and_cap() {
        let s = shape(2, 1, 1, 2);
        let seen: Vec<Vec<u32>> = s
            .enumerate_states()
            .unwrap()
            .map(|st| st.entries().iter().map(|e| e.0).collect())
            .collect();
        assert_eq!(seen, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        let big = shape(7, 1, 2, 8);
        assert!(big
            .enumerate_states_capped(DEFAULT_MAX_STATES)
            .unwrap_err()
            .is_too_large());
    }
}
