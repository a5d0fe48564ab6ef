//! Dense matrices over GF(q): products, inverses, rank and kernels,
//! characteristic polynomials and exact multiplicative orders.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec, Poly};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::invalid("matrix", "ragged rows"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols)
                    .all(|j| self.get(i, j) == if i == j { Elem::ONE } else { Elem::ZERO })
            })
    }

    pub fn mul(&self, f: &FieldSpec, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimensions");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &FieldSpec, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimensions");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn sub(&self, f: &FieldSpec, other: &Matrix) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, f: &FieldSpec, c: Elem) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn add(&self, f: &FieldSpec, other: &Matrix) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn pow(&self, f: &FieldSpec, e: &BigUint) -> Matrix {
        let mut acc = Matrix::identity(self.rows);
        let mut base = self.clone();
        for bit in 0..e.bits() {
            if e.bit(bit) {
                acc = acc.mul(f, &base);
            }
            if bit + 1 < e.bits() {
                base = base.mul(f, &base);
            }
        }
        acc
    }

    /// Reduced row-echelon form and the pivot columns.
    pub fn rref(&self, f: &FieldSpec) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, piv);
            let inv = f.inv_nonzero(m.get(row, col));
            for j in 0..m.cols {
                let v = f.mul(m.get(row, j), inv);
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row {
                    continue;
                }
                let c = m.get(i, col);
                if c.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(c, m.get(row, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, f: &FieldSpec) -> usize {
        self.rref(f).1.len()
    }

    /// Basis of the right kernel {v : M v = 0}, as rows of the returned matrix.
    pub fn kernel(&self, f: &FieldSpec) -> Matrix {
        let (r, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            basis.set(k, fc, Elem::ONE);
            for (i, &pc) in pivots.iter().enumerate() {
                basis.set(k, pc, f.neg(r.get(i, fc)));
            }
        }
        basis
    }

    pub fn inverse(&self, f: &FieldSpec) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Elem::ONE);
        }
        let (r, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }

    pub fn determinant(&self, f: &FieldSpec) -> Elem {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Elem::ONE;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&i| !m.get(i, col).is_zero()) else {
                return Elem::ZERO;
            };
            if piv != col {
                m.swap_rows(piv, col);
                det = f.neg(det);
            }
            let d = m.get(col, col);
            det = f.mul(det, d);
            let inv = f.inv_nonzero(d);
            for i in col + 1..n {
                let c = f.mul(m.get(i, col), inv);
                if c.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = f.sub(m.get(i, j), f.mul(c, m.get(col, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// det(xI - M), via reduction to upper Hessenberg form.
    pub fn char_poly(&self, f: &FieldSpec) -> Poly {
        assert!(self.is_square());
        let n = self.rows;
        let mut h = self.clone();
        // Similarity transforms: eliminate below the subdiagonal.
        for m in 1..n.saturating_sub(1) {
            let Some(piv) = (m..n).find(|&i| !h.get(i, m - 1).is_zero()) else {
                continue;
            };
            if piv != m {
                h.swap_rows(piv, m);
                for i in 0..n {
                    h.data.swap(i * n + piv, i * n + m);
                }
            }
            let inv = f.inv_nonzero(h.get(m, m - 1));
            for i in m + 1..n {
                let u = f.mul(h.get(i, m - 1), inv);
                if u.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = f.sub(h.get(i, j), f.mul(u, h.get(m, j)));
                    h.set(i, j, v);
                }
                for j in 0..n {
                    let v = f.add(h.get(j, m), f.mul(u, h.get(j, i)));
                    h.set(j, m, v);
                }
            }
        }
        // Recurrence on leading principal submatrices.
        let mut ps: Vec<Poly> = vec![Poly::one()];
        for k in 0..n {
            let xk = Poly::new(vec![f.neg(h.get(k, k)), Elem::ONE]);
            let mut pk = xk.mul(f, &ps[k]);
            let mut t = Elem::ONE;
            for i in (0..k).rev() {
                t = f.mul(t, h.get(i + 1, i));
                let c = f.mul(t, h.get(i, k));
                pk = pk.sub(f, &ps[i].scale(f, c));
            }
            ps.push(pk);
        }
        ps.pop().unwrap()
    }

    /// h(M) by Horner's rule.
    pub fn eval_poly(&self, f: &FieldSpec, h: &Poly) -> Matrix {
        let n = self.rows;
        let mut acc = Matrix::zeros(n, n);
        for &c in h.coeffs().iter().rev() {
            acc = acc.mul(f, self);
            for i in 0..n {
                let v = f.add(acc.get(i, i), c);
                acc.set(i, i, v);
            }
        }
        acc
    }

    /// Exact multiplicative order in GL_n(q). `None` when singular.
    ///
    /// The order divides |GL_n(q)| = q^{n(n-1)/2} ∏ (q^i - 1); each prime
    /// factor is stripped while the reduced power is still the identity.
    pub fn order(&self, f: &FieldSpec) -> Result<Option<BigUint>> {
        if !self.is_square() {
            return Ok(None);
        }
        if self.determinant(f).is_zero() {
            return Ok(None);
        }
        let n = self.rows as u32;
        let q = f.order() as u64;
        let mut factors: std::collections::BTreeMap<u64, u32> = Default::default();
        *factors.entry(f.p() as u64).or_default() += f.r() * n * (n.saturating_sub(1)) / 2;
        for i in 1..=n {
            let qi = arith::checked_pow(q, i as u64)
                .filter(|&v| v < (1u64 << 62))
                .ok_or_else(|| {
                    Error::too_large("group order factorization", format!("{q}^{i}"), 1 << 62)
                })?;
            for (l, e) in arith::factorize(qi - 1) {
                *factors.entry(l).or_default() += e;
            }
        }
        let mut order = BigUint::one();
        for (&l, &e) in &factors {
            order *= BigUint::from(l).pow(e);
        }
        for (&l, &e) in &factors {
            for _ in 0..e {
                let cand = &order / l;
                if self.pow(f, &cand).is_identity() {
                    order = cand;
                } else {
                    break;
                }
            }
        }
        Ok(Some(order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn mat(f: &FieldSpec, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| f.from_int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    /// Leibniz expansion of det(xI - M) with polynomial entries.
    fn char_poly_leibniz(f: &FieldSpec, m: &Matrix) -> Poly {
        let n = m.rows();
        let entry = |i: usize, j: usize| {
            let c = f.neg(m.get(i, j));
            if i == j {
                Poly::new(vec![c, Elem::ONE])
            } else {
                Poly::new(vec![c])
            }
        };
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = Poly::zero();
        loop {
            let mut term = Poly::one();
            for i in 0..n {
                term = term.mul(f, &entry(i, perm[i]));
            }
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| perm[i] > perm[j])
                .count();
            if inversions % 2 == 1 {
                term = term.scale(f, f.neg(Elem::ONE));
            }
            total = total.add(f, &term);
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1))
                .rev()
                .find(|&i| perm[i] < perm[i + 1])
            else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        total
    }

    #[test]
    fn char_poly_matches_leibniz() {
        let f = make_field(7, 1, None).unwrap();
        let mut seed = 1u64;
        for n in 1..=5 {
            for _ in 0..20 {
                let rows: Vec<Vec<i64>> = (0..n)
                    .map(|_| {
                        (0..n)
                            .map(|_| {
                                seed = seed
                                    .wrapping_mul(6364136223846793005)
                                    .wrapping_add(1442695040888963407);
                                // sparse-ish so the Hessenberg pivot search is exercised
                                let v = (seed >> 33) % 11;
                                if v > 6 {
                                    0
                                } else {
                                    v as i64
                                }
                            })
                            .collect()
                    })
                    .collect();
                let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
                let m = mat(&f, &refs);
                assert_eq!(m.char_poly(&f), char_poly_leibniz(&f, &m), "{m:?}");
            }
        }
    }

    #[test]
    fn cayley_hamilton_over_extension() {
        let f = make_field(2, 3, None).unwrap();
        let m = Matrix::from_rows(vec![
            vec![Elem(3), Elem(5), Elem(0)],
            vec![Elem(1), Elem(0), Elem(7)],
            vec![Elem(6), Elem(2), Elem(4)],
        ])
        .unwrap();
        let cp = m.char_poly(&f);
        assert_eq!(cp.degree(), Some(3));
        assert_eq!(m.eval_poly(&f, &cp), Matrix::zeros(3, 3));
    }

    #[test]
    fn inverse_and_kernel() {
        let f = make_field(7, 1, None).unwrap();
        let m = mat(&f, &[&[1, 4], &[1, 0]]);
        let inv = m.inverse(&f).unwrap();
        assert!(m.mul(&f, &inv).is_identity());
        let s = mat(&f, &[&[1, 2], &[2, 4]]);
        assert!(s.inverse(&f).is_none());
        let k = s.kernel(&f);
        assert_eq!(k.rows(), 1);
        assert!(s.mul_vec(&f, k.row(0)).iter().all(|e| e.is_zero()));
    }

    #[test]
    fn orders() {
        let f3 = make_field(3, 1, None).unwrap();
        let c = mat(&f3, &[&[0, 1], &[1, 1]]);
        assert_eq!(c.order(&f3).unwrap().unwrap(), BigUint::from(8u32));
        let d = mat(&f3, &[&[1, 0], &[0, 2]]);
        assert_eq!(d.order(&f3).unwrap().unwrap(), BigUint::from(2u32));
        let u = mat(&f3, &[&[1, 1], &[0, 1]]);
        assert_eq!(u.order(&f3).unwrap().unwrap(), BigUint::from(3u32));
        assert!(mat(&f3, &[&[1, 1], &[1, 1]]).order(&f3).unwrap().is_none());
    }

    #[test]
    fn order_by_brute_force() {
        let f = make_field(5, 1, None).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    for d in 0..5 {
                        let m = mat(&f, &[&[a, b], &[c, d]]);
                        let Some(o) = m.order(&f).unwrap() else {
                            continue;
                        };
                        let mut p = m.clone();
                        let mut k = 1u32;
                        while !p.is_identity() {
                            p = p.mul(&f, &m);
                            k += 1;
                        }
                        assert_eq!(o, BigUint::from(k));
                    }
                }
            }
        }
    }
}
