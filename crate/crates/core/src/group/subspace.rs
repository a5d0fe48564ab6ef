//! Orbits of α = ρ∘π and its invariant subspaces.

use std::sync::Arc;

use serde::Serialize;

use crate::cipher::CipherSpec;
use crate::error::{Error, Result};
use crate::field::{make_field, Elem, FieldSpec};
use crate::linalg::Matrix;
use crate::state::StateMatrix;

/// Incrementally maintained row-echelon basis.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    /// Rows with a leading one at `pivots[i]`, fully reduced against each other.
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Echelon {
        Echelon {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, f: &FieldSpec, v: &mut [Elem]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if !c.is_zero() {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
    }

    pub fn contains(&self, f: &FieldSpec, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(f, &mut w);
        w.iter().all(|e| e.is_zero())
    }

    /// Adds `v`; false when it is already in the span.
    pub fn insert(&mut self, f: &FieldSpec, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(f, &mut w);
        let Some(p) = w.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        let inv = f.inv_nonzero(w[p]);
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[p];
            if !c.is_zero() {
                for (x, &r) in row.iter_mut().zip(&w) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
        true
    }

    /// Canonical reduced row-echelon rows, sorted by pivot.
    pub fn basis(&self) -> Vec<Vec<Elem>> {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_by_key(|&i| self.pivots[i]);
        idx.into_iter().map(|i| self.rows[i].clone()).collect()
    }

    pub fn ambient(&self) -> usize {
        self.dim
    }
}

/// A subspace of the coordinate space, in canonical echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubspaceBasis {
    pub scalar_field: String,
    pub ambient_dimension: usize,
    pub dimension: usize,
    /// Echelon rows, each entry as its coefficient vector.
    pub vectors: Vec<Vec<Vec<u32>>>,
    #[serde(skip)]
    pub rows: Vec<Vec<Elem>>,
}

impl SubspaceBasis {
    fn from_echelon(f: &FieldSpec, e: &Echelon) -> SubspaceBasis {
        let rows = e.basis();
        SubspaceBasis {
            scalar_field: f.to_string(),
            ambient_dimension: e.ambient(),
            dimension: rows.len(),
            vectors: rows
                .iter()
                .map(|r| r.iter().map(|&x| f.coeffs(x)).collect())
                .collect(),
            rows,
        }
    }

    /// α·basis ⊆ span(basis), checked directly.
    pub fn is_invariant_under(&self, f: &FieldSpec, alpha: &Matrix) -> bool {
        let mut e = Echelon::new(self.ambient_dimension);
        for r in &self.rows {
            e.insert(f, r);
        }
        self.rows
            .iter()
            .all(|r| e.contains(f, &alpha.mul_vec(f, r)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub start: StateMatrix,
    pub size: u64,
    pub span_dimension: usize,
    pub ambient_dimension: usize,
}

/// Iterates α from `start` until it returns; α is invertible so the orbit is a cycle.
pub fn alpha_orbit(spec: &CipherSpec, start: &StateMatrix, cap: u64) -> Result<OrbitReport> {
    spec.shape().zero().check_shape(start)?;
    let f = spec.field();
    let alpha = spec.alpha_matrix();
    let mut span = Echelon::new(alpha.rows());
    let first = start.entries().to_vec();
    let mut v = first.clone();
    let mut size = 0u64;
    loop {
        if size == cap {
            return Err(Error::CapExceeded(cap));
        }
        size += 1;
        span.insert(f, &v);
        v = alpha.mul_vec(f, &v);
        if v == first {
            break;
        }
    }
    Ok(OrbitReport {
        start: start.clone(),
        size,
        span_dimension: span.dimension(),
        ambient_dimension: alpha.rows(),
    })
}

/// α written over GF(p): each GF(p^r) entry c becomes the r×r matrix of x ↦ c·x
/// in the polynomial basis.
pub fn alpha_over_prime_field(spec: &CipherSpec) -> Result<(Arc<FieldSpec>, Matrix)> {
    let f = spec.field();
    let r = f.r() as usize;
    let base = make_field(f.p() as u64, 1, None)?;
    let alpha = spec.alpha_matrix();
    let d = alpha.rows();
    let mut out = Matrix::zeros(d * r, d * r);
    for u in 0..d {
        for v in 0..d {
            let c = alpha.get(u, v);
            if c.is_zero() {
                continue;
            }
            for j in 0..r {
                let col = f.coeffs(f.mul(c, Elem(f.p().pow(j as u32))));
                for (i, &x) in col.iter().enumerate() {
                    out.set(u * r + i, v * r + j, Elem(x));
                }
            }
        }
    }
    Ok((Arc::new(base), out))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantSubspaceVerdict {
    pub scalar_field: String,
    pub dimension: usize,
    /// Characteristic polynomial of α, coefficients from the constant term up.
    pub char_poly: Vec<Vec<u32>>,
    pub irreducible: bool,
    /// Hypothesis "only {0} and the whole space are α-invariant".
    pub hypothesis_holds: bool,
    /// Irreducible factor h of the characteristic polynomial used for the witness.
    pub factor: Option<Vec<Vec<u32>>>,
    pub witness: Option<SubspaceBasis>,
    pub witness_invariant: Option<bool>,
    pub method: String,
}

/// Irreducible characteristic polynomial ⇔ no proper nontrivial invariant subspace.
/// Otherwise the witness is ker h(α) for an irreducible factor h, or the cyclic
/// subspace of a basis vector when h(α) = 0.
pub fn alpha_invariant_subspace_verdict(
    spec: &CipherSpec,
    over_prime_field: bool,
) -> Result<InvariantSubspaceVerdict> {
    let (field, alpha) = if over_prime_field {
        alpha_over_prime_field(spec)?
    } else {
        (spec.field_arc().clone(), spec.alpha_matrix())
    };
    let f = &field;
    let d = alpha.rows();
    let chi = alpha.char_poly(f);
    let irreducible = chi.is_irreducible(f);
    let render = |p: &crate::field::poly::Poly| p.coeffs().iter().map(|&c| f.coeffs(c)).collect();
    let mut factor = None;
    let mut witness = None;
    let mut method = "characteristic polynomial irreducible over the scalar field".to_string();
    if !irreducible {
        let h = chi
            .irreducible_factor(f, 0)
            .expect("a reducible polynomial of positive degree has a factor");
        let k = alpha.eval_poly(f, &h).kernel(f);
        let mut e = Echelon::new(d);
        if k.rows() < d {
            for row in k.to_rows() {
                e.insert(f, &row);
            }
            method = "kernel of h(alpha) for an irreducible factor h".to_string();
        } else {
            let mut v = vec![Elem::ZERO; d];
            v[0] = Elem::ONE;
            while e.insert(f, &v) {
                v = alpha.mul_vec(f, &v);
            }
            method = "h(alpha) = 0: cyclic subspace of the first coordinate vector".to_string();
        }
        factor = Some(render(&h));
        witness = Some(SubspaceBasis::from_echelon(f, &e));
    }
    let witness_invariant = witness
        .as_ref()
        .map(|w| w.dimension > 0 && w.dimension < d && w.is_invariant_under(f, &alpha));
    Ok(InvariantSubspaceVerdict {
        scalar_field: f.to_string(),
        dimension: d,
        char_poly: render(&chi),
        irreducible,
        hypothesis_holds: irreducible,
        factor,
        witness,
        witness_invariant,
        method,
    })
}

/// Brute force: a proper nontrivial invariant subspace exists iff some nonzero
/// vector has a cyclic subspace of dimension below the ambient one.
pub fn exhaustive_invariant_subspace(
    spec: &CipherSpec,
    over_prime_field: bool,
    cap: u64,
) -> Result<Option<SubspaceBasis>> {
    let (field, alpha) = if over_prime_field {
        alpha_over_prime_field(spec)?
    } else {
        (spec.field_arc().clone(), spec.alpha_matrix())
    };
    let f = &field;
    let d = alpha.rows();
    let q = f.order() as u64;
    let total = crate::arith::checked_pow(q, d as u64)
        .filter(|&t| t <= cap)
        .ok_or_else(|| Error::too_large("vector space", spec.shape().size_big(), cap))?;
    let mut v = vec![Elem::ZERO; d];
    for idx in 1..total {
        let mut rest = idx;
        for x in v.iter_mut() {
            *x = Elem((rest % q) as u32);
            rest /= q;
        }
        let mut e = Echelon::new(d);
        let mut w = v.clone();
        while e.insert(f, &w) {
            w = alpha.mul_vec(f, &w);
        }
        if e.dimension() < d {
            return Ok(Some(SubspaceBasis::from_echelon(f, &e)));
        }
    }
    Ok(None)
}

/// gcd(c(0), …, c(m−1), n) = 1.
pub fn gcd_condition(spec: &CipherSpec) -> bool {
    let n = spec.shape().n() as u64;
    spec.shifts()
        .iter()
        .fold(n, |g, &c| crate::arith::gcd(g, c as u64))
        == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cipher::{CipherSpec, Sbox};
    use crate::field::PrimePoly;
    use crate::state::StateShape;

    fn spec(
        p: u64,
        r: u32,
        modulus: Option<&[i64]>,
        shifts: Vec<usize>,
        mix: Vec<Vec<i64>>,
        n: usize,
    ) -> CipherSpec {
        let field =
            make_field(p, r, modulus.map(|c| PrimePoly::new(p as u32, c).unwrap())).unwrap();
        let m = mix.len();
        let mix = Matrix::from_rows(
            mix.into_iter()
                .map(|row| row.into_iter().map(|v| field.from_int(v)).collect())
                .collect(),
        )
        .unwrap();
        let shape = StateShape::new(Arc::new(field), m, n).unwrap();
        CipherSpec::new(
            shape,
            Sbox::Global {
                a: Elem::ONE,
                b: Elem::ZERO,
            },
            shifts,
            mix,
            2,
            None,
        )
        .unwrap()
    }

    fn example(r: u32) -> CipherSpec {
        let modulus: Option<&[i64]> = if r == 2 { Some(&[3, 1, 1]) } else { None };
        spec(7, r, modulus, vec![1, 5], vec![vec![1, 4], vec![1, 0]], 8)
    }

    fn example_start(s: &CipherSpec) -> StateMatrix {
        let mut a = s.shape().zero();
        a.set(0, 0, Elem(1));
        a.set(1, 0, Elem(3));
        a
    }

    #[test]
    fn worked_example() {
        for r in [1, 2] {
            let s = example(r);
            let o = alpha_orbit(&s, &example_start(&s), 1 << 20).unwrap();
            assert_eq!(o.size, 48);
            assert!(o.span_dimension > 1 && o.span_dimension < 16);
            let v = alpha_invariant_subspace_verdict(&s, false).unwrap();
            assert!(!v.irreducible);
            assert_eq!(v.witness_invariant, Some(true));
            assert!(gcd_condition(&s));
        }
    }

    #[test]
    fn zero_orbit_and_cap() {
        let s = example(1);
        assert_eq!(alpha_orbit(&s, &s.shape().zero(), 10).unwrap().size, 1);
        assert_eq!(
            alpha_orbit(&s, &example_start(&s), 10).unwrap_err(),
            Error::CapExceeded(10)
        );
    }

    #[test]
    fn shift_on_two_columns() {
        let s = spec(3, 1, None, vec![1], vec![vec![1]], 2);
        let v = alpha_invariant_subspace_verdict(&s, false).unwrap();
        assert!(!v.irreducible);
        let w = v.witness.unwrap();
        assert_eq!(w.dimension, 1);
        // span{(1,1)} or span{(1,-1)}
        assert!(
            w.vectors == vec![vec![vec![1], vec![1]]] || w.vectors == vec![vec![vec![1], vec![2]]]
        );
    }

    #[test]
    fn identity_alpha_uses_cyclic_witness() {
        let s = spec(2, 2, None, vec![0, 0], vec![vec![1, 0], vec![0, 1]], 2);
        let v = alpha_invariant_subspace_verdict(&s, false).unwrap();
        assert_eq!(v.witness.as_ref().unwrap().dimension, 1);
        assert_eq!(v.witness_invariant, Some(true));
    }

    #[test]
    fn gcd_examples() {
        assert!(!gcd_condition(&spec(
            7,
            1,
            None,
            vec![2, 4],
            vec![vec![1, 4], vec![1, 0]],
            8
        )));
        assert!(gcd_condition(&spec(2, 1, None, vec![0], vec![vec![1]], 1)));
    }

    #[test]
    fn verdict_matches_exhaustive_search() {
        let cases = [
            spec(2, 1, None, vec![1], vec![vec![1]], 3),
            spec(2, 2, None, vec![0, 1], vec![vec![1, 1], vec![1, 0]], 2),
            spec(3, 1, None, vec![0, 1], vec![vec![0, 1], vec![1, 1]], 2),
            spec(2, 3, None, vec![0], vec![vec![1]], 1),
            spec(5, 1, None, vec![0, 0], vec![vec![0, 2], vec![1, 0]], 1),
        ];
        for s in &cases {
            for prime in [false, true] {
                let v = alpha_invariant_subspace_verdict(s, prime).unwrap();
                let e = exhaustive_invariant_subspace(s, prime, 1 << 10).unwrap();
                assert_eq!(
                    v.irreducible,
                    e.is_none(),
                    "{:?} over GF(p): {prime}",
                    s.shape()
                );
            }
        }
    }
}
