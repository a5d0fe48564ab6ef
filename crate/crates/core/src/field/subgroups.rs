//! Inverse-closed additive subgroups of GF(p^r).
//!
//! Additive subgroups are exactly the F_p-subspaces of F_p^r. They are
//! enumerated through reduced row-echelon bases, which name each subspace
//! once. Every nontrivial inverse-closed one must have order p^k with k | r.

use num_bigint::BigUint;
use serde::Serialize;

use super::{Elem, FieldSpec};
use crate::error::{Error, Result};

/// Largest field order accepted by the verifier.
pub const MAX_VERIFY_ORDER: u64 = 1 << 10;
/// Above this many subspaces the exhaustive sweep hands over to closure search.
pub const MAX_EXHAUSTIVE_SUBSPACES: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupKind {
    Trivial,
    Subfield,
    TraceZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InverseClosedSubgroup {
    pub order: u64,
    pub dimension: u32,
    pub kind: SubgroupKind,
    /// Elements as packed codes, sorted.
    pub elements: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InverseClosedReport {
    pub field: String,
    pub method: &'static str,
    pub subspaces_examined: u64,
    pub orders: Vec<u64>,
    pub subgroups: Vec<InverseClosedSubgroup>,
    pub all_pass: bool,
}

/// Number of subspaces of F_p^r (sum of Gaussian binomials).
pub fn subspace_count(p: u64, r: u32) -> BigUint {
    let mut total = BigUint::from(0u32);
    for k in 0..=r {
        let mut num = BigUint::from(1u32);
        let mut den = BigUint::from(1u32);
        for i in 0..k {
            num *= BigUint::from(p).pow(r - i) - 1u32;
            den *= BigUint::from(p).pow(i + 1) - 1u32;
        }
        total += num / den;
    }
    total
}

pub fn verify_inverse_closed_subgroup_orders(field: &FieldSpec) -> Result<InverseClosedReport> {
    let q = field.order() as u64;
    if q > MAX_VERIFY_ORDER {
        return Err(Error::too_large("field", q, MAX_VERIFY_ORDER));
    }
    let count = subspace_count(field.p() as u64, field.r());
    let (method, examined, mut found) = if count <= BigUint::from(MAX_EXHAUSTIVE_SUBSPACES) {
        let (n, found) = exhaustive(field);
        ("exhaustive-subspaces", n, found)
    } else {
        let found = closure_search(field);
        ("closure-lattice", found.len() as u64, found)
    };
    found.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    let subgroups: Vec<InverseClosedSubgroup> = found
        .into_iter()
        .map(|elements| describe(field, elements))
        .collect();
    let r = field.r();
    let all_pass = subgroups
        .iter()
        .filter(|s| s.order > 1)
        .all(|s| s.dimension >= 1 && r % s.dimension == 0);
    let mut orders: Vec<u64> = subgroups.iter().map(|s| s.order).collect();
    orders.dedup();
    Ok(InverseClosedReport {
        field: field.to_string(),
        method,
        subspaces_examined: examined,
        orders,
        subgroups,
        all_pass,
    })
}

fn describe(field: &FieldSpec, elements: Vec<u32>) -> InverseClosedSubgroup {
    let order = elements.len() as u64;
    let mut dimension = 0;
    let mut t = order;
    while t > 1 {
        t /= field.p() as u64;
        dimension += 1;
    }
    let kind = if order == 1 {
        SubgroupKind::Trivial
    } else if closed_under_mul(field, &elements) {
        SubgroupKind::Subfield
    } else {
        SubgroupKind::TraceZero
    };
    InverseClosedSubgroup {
        order,
        dimension,
        kind,
        elements,
    }
}

fn closed_under_mul(field: &FieldSpec, elements: &[u32]) -> bool {
    let mut member = vec![false; field.order() as usize];
    for &e in elements {
        member[e as usize] = true;
    }
    elements.iter().all(|&a| {
        elements
            .iter()
            .all(|&b| member[field.mul(Elem(a), Elem(b)).0 as usize])
    })
}

/// All elements of the span of `basis` (vectors given as packed codes).
fn span(field: &FieldSpec, basis: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32];
    for &b in basis {
        let mut next = Vec::with_capacity(out.len() * field.p() as usize);
        for &x in &out {
            let mut acc = Elem(x);
            for _ in 0..field.p() {
                next.push(acc.0);
                acc = field.add(acc, Elem(b));
            }
        }
        out = next;
    }
    out
}

fn is_inverse_closed(field: &FieldSpec, elements: &[u32], member: &mut [bool]) -> bool {
    for &e in elements {
        member[e as usize] = true;
    }
    let ok = elements
        .iter()
        .all(|&e| e == 0 || member[field.inv_nonzero(Elem(e)).0 as usize]);
    for &e in elements {
        member[e as usize] = false;
    }
    ok
}

/// Walks every reduced row-echelon basis of F_p^r.
fn exhaustive(field: &FieldSpec) -> (u64, Vec<Vec<u32>>) {
    let r = field.r() as usize;
    let p = field.p();
    let mut member = vec![false; field.order() as usize];
    let mut found = Vec::new();
    let mut examined = 0u64;
    for mask in 0u32..(1 << r) {
        let pivots: Vec<usize> = (0..r).filter(|&j| mask >> j & 1 == 1).collect();
        // Free slots: (row, column) with column after the row's pivot and not a pivot column.
        let slots: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(row, &pc)| {
                (pc + 1..r)
                    .filter(|c| mask >> c & 1 == 0)
                    .map(move |c| (row, c))
            })
            .collect();
        let combos = (p as u64).pow(slots.len() as u32);
        for t in 0..combos {
            let mut rows: Vec<Vec<u32>> = pivots
                .iter()
                .map(|&pc| {
                    let mut v = vec![0u32; r];
                    v[pc] = 1;
                    v
                })
                .collect();
            let mut rest = t;
            for &(row, c) in &slots {
                rows[row][c] = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            let basis: Vec<u32> = rows
                .iter()
                .map(|v| {
                    let c: Vec<u64> = v.iter().map(|&x| x as u64).collect();
                    field.from_coeffs(&c).expect("valid coefficients").0
                })
                .collect();
            examined += 1;
            let elements = span(field, &basis);
            if is_inverse_closed(field, &elements, &mut member) {
                let mut e = elements;
                e.sort_unstable();
                found.push(e);
            }
        }
    }
    (examined, found)
}

/// Smallest inverse-closed additive subgroup containing `seed`.
fn closure(field: &FieldSpec, seed: &[u32]) -> Vec<u32> {
    let mut member = vec![false; field.order() as usize];
    let mut basis: Vec<u32> = Vec::new();
    let mut elements = vec![0u32];
    member[0] = true;
    let mut pending: Vec<u32> = seed.to_vec();
    while let Some(x) = pending.pop() {
        if member[x as usize] {
            continue;
        }
        basis.push(x);
        elements = span(field, &basis);
        for &e in &elements {
            member[e as usize] = true;
        }
        for &e in &elements {
            let inv = field.inv_nonzero(Elem(e)).0;
            if !member[inv as usize] {
                pending.push(inv);
            }
        }
    }
    elements.sort_unstable();
    elements
}

/// Lattice walk: every inverse-closed subgroup arises as the closure of a
/// smaller one together with one extra element.
fn closure_search(field: &FieldSpec) -> Vec<Vec<u32>> {
    let mut found: Vec<Vec<u32>> = vec![vec![0]];
    let mut seen = std::collections::HashSet::new();
    seen.insert(vec![0u32]);
    let mut i = 0;
    while i < found.len() {
        let h = found[i].clone();
        let mut member = vec![false; field.order() as usize];
        for &e in &h {
            member[e as usize] = true;
        }
        for x in 1..field.order() {
            if member[x as usize] {
                continue;
            }
            let mut seed = h.clone();
            seed.push(x);
            let c = closure(field, &seed);
            if seen.insert(c.clone()) {
                found.push(c);
            }
        }
        i += 1;
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, PrimePoly};

    #[test]
    fn gf4_orders() {
        let f = make_field(2, 2, Some(PrimePoly::new(2, &[1, 1, 1]).unwrap())).unwrap();
        let rep = verify_inverse_closed_subgroup_orders(&f).unwrap();
        assert_eq!(rep.subspaces_examined, 5);
        assert_eq!(rep.orders, vec![1, 2, 4]);
        assert!(rep.all_pass);
    }

    #[test]
    fn prime_field_has_only_trivial_and_full() {
        let f = make_field(3, 1, None).unwrap();
        let rep = verify_inverse_closed_subgroup_orders(&f).unwrap();
        assert_eq!(rep.orders, vec![1, 3]);
    }

    #[test]
    fn gf16_proper_orders() {
        let f = make_field(2, 4, None).unwrap();
        let rep = verify_inverse_closed_subgroup_orders(&f).unwrap();
        assert!(rep.all_pass);
        for s in rep.subgroups.iter().filter(|s| s.order > 1 && s.order < 16) {
            assert!(s.order == 2 || s.order == 4, "{s:?}");
        }
    }

    #[test]
    fn exhaustive_and_closure_routes_agree() {
        for (p, r) in [(2u64, 3u32), (2, 4), (3, 2), (2, 6), (5, 2), (3, 3)] {
            let f = make_field(p, r, None).unwrap();
            let (_, mut a) = exhaustive(&f);
            let mut b = closure_search(&f);
            a.sort();
            b.sort();
            assert_eq!(a, b, "GF({p}^{r})");
        }
    }

    #[test]
    fn subspace_counts() {
        assert_eq!(subspace_count(2, 2), BigUint::from(5u32));
        assert_eq!(subspace_count(2, 3), BigUint::from(16u32));
        assert_eq!(subspace_count(3, 2), BigUint::from(6u32));
    }

    #[test]
    fn refuses_large_fields() {
        let f = make_field(2, 11, None).unwrap();
        assert!(verify_inverse_closed_subgroup_orders(&f).is_err());
    }
}
