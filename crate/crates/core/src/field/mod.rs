//! Exact arithmetic in GF(p^r) = F_p[x]/(f).
//!
//! Elements are coefficient vectors of length `r` over `[0, p)`, stored packed
//! as the integer `c0 + c1·p + … + c_{r-1}·p^{r-1}` ([`Elem`]). The packing is
//! also the element's position in the canonical state ranking, so a state's
//! rank is read straight off its entries.
//!
//! Multiplication uses discrete-log tables for fields of order up to 2^20 and
//! falls back to schoolbook polynomial multiplication modulo `f` otherwise;
//! both paths give identical results.

pub mod poly;
pub mod subgroups;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
pub use poly::Poly;

/// Largest field order for which log/antilog tables are built.
const TABLE_LIMIT: u64 = 1 << 20;
/// Largest supported field order (element codes are `u32`).
const MAX_ORDER: u64 = 1 << 31;

/// A field element, packed as its base-`p` coefficient vector (low degree first).
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A polynomial over the prime field F_p, ascending coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePoly {
    pub p: u32,
    pub coeffs: Vec<u32>,
}

impl PrimePoly {
    /// Reduces coefficients mod `p` and strips leading zeros.
    pub fn new(p: u32, coeffs: &[i64]) -> Result<Self> {
        let mut c: Vec<u32> = coeffs
            .iter()
            .map(|&v| v.rem_euclid(p as i64) as u32)
            .collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        if c.is_empty() {
            return Err(Error::invalid("modulus", "zero polynomial"));
        }
        Ok(PrimePoly { p, coeffs: c })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }
}

impl fmt::Display for PrimePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 {
                String::new()
            } else {
                c.to_string()
            };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

struct Tables {
    /// exp[i] = g^i for 0 <= i < 2(q-1).
    exp: Vec<u32>,
    /// log[a] for a != 0; log[0] unused.
    log: Vec<u32>,
}

/// GF(p^r) given by a monic irreducible modulus of degree `r` over F_p.
pub struct FieldSpec {
    p: u32,
    r: u32,
    q: u32,
    modulus: PrimePoly,
    pow_p: Vec<u32>,
    tables: Option<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `GF(p^r; f=c0,c1,...,cr)` with ascending modulus coefficients.
impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.modulus.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "GF({}^{}; f={})", self.p, self.r, cs.join(","))
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid("field", format!("cannot parse `{s}`"));
        let body = s
            .trim()
            .strip_prefix("GF(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (pr, f) = body.split_once(';').ok_or_else(bad)?;
        let (p, r) = pr.trim().split_once('^').ok_or_else(bad)?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let r: u32 = r.trim().parse().map_err(|_| bad())?;
        let coeffs = f
            .trim()
            .strip_prefix("f=")
            .ok_or_else(bad)?
            .split(',')
            .map(|c| c.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let p32 = u32::try_from(p).map_err(|_| Error::NotPrime(p))?;
        let modulus = PrimePoly::new(p32, &coeffs)?;
        make_field(p, r, Some(modulus))
    }
}

/// Builds GF(p^r). Without a modulus, picks the lexicographically smallest
/// monic irreducible of degree `r`, comparing `c0` first, then `c1`, and so on.
pub fn make_field(p: u64, r: u32, modulus: Option<PrimePoly>) -> Result<FieldSpec> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r == 0 {
        return Err(Error::invalid("r", "extension degree must be at least 1"));
    }
    let q = arith::checked_pow(p, r as u64)
        .filter(|&q| q <= MAX_ORDER)
        .ok_or_else(|| Error::FieldTooLarge(format!("{p}^{r}")))?;
    let p32 = p as u32;
    let base = FieldSpec::prime(p32);
    let modulus = match modulus {
        Some(m) => {
            if m.p != p32 {
                return Err(Error::invalid(
                    "modulus",
                    "coefficients over a different prime",
                ));
            }
            if m.degree() != r as usize {
                return Err(Error::DegreeMismatch {
                    expected: r,
                    found: m.degree(),
                });
            }
            if !m.is_monic() {
                return Err(Error::NotMonic);
            }
            if !base.poly_from_prime(&m).is_irreducible(&base) {
                return Err(Error::NotIrreducible(m.to_string()));
            }
            m
        }
        None => smallest_irreducible(&base, r),
    };
    Ok(FieldSpec::with_modulus(p32, r, q as u32, modulus))
}

fn smallest_irreducible(base: &FieldSpec, r: u32) -> PrimePoly {
    let p = base.p;
    let total = (p as u64).pow(r);
    for t in 0..total {
        // c0 is the most significant digit of t, c_{r-1} the least.
        let mut coeffs = vec![0u32; r as usize + 1];
        let mut rest = t;
        for j in (0..r as usize).rev() {
            coeffs[j] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[r as usize] = 1;
        if r > 1 && coeffs[0] == 0 {
            continue;
        }
        let cand = PrimePoly { p, coeffs };
        if base.poly_from_prime(&cand).is_irreducible(base) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldSpec {
    /// The prime field F_p with modulus `x`. `p` must be prime.
    pub fn prime(p: u32) -> FieldSpec {
        FieldSpec::with_modulus(
            p,
            1,
            p,
            PrimePoly {
                p,
                coeffs: vec![0, 1],
            },
        )
    }

    fn with_modulus(p: u32, r: u32, q: u32, modulus: PrimePoly) -> FieldSpec {
        let mut pow_p = Vec::with_capacity(r as usize);
        let mut acc = 1u32;
        for _ in 0..r {
            pow_p.push(acc);
            acc = acc.wrapping_mul(p);
        }
        let mut f = FieldSpec {
            p,
            r,
            q,
            modulus,
            pow_p,
            tables: None,
        };
        if (q as u64) <= TABLE_LIMIT {
            f.tables = Some(f.build_tables());
        }
        f
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as u64;
        let factors = arith::factorize(q - 1);
        let g = (1..self.q)
            .map(Elem)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&(l, _)| self.pow_slow(g, (q - 1) / l) != Elem::ONE)
            })
            .expect("multiplicative group is cyclic");
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut x = Elem::ONE;
        for i in 0..n {
            exp[i] = x.0;
            log[x.0 as usize] = i as u32;
            x = self.mul_slow(x, g);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        Tables { exp, log }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Field order p^r.
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &PrimePoly {
        &self.modulus
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// Iterates all field elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    pub fn elem(&self, code: u64) -> Result<Elem> {
        if code < self.q as u64 {
            Ok(Elem(code as u32))
        } else {
            Err(Error::InvalidElement(format!(
                "code {code} not below {}",
                self.q
            )))
        }
    }

    /// The constant `v mod p` of the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Elem> {
        if coeffs.len() > self.r as usize {
            return Err(Error::InvalidElement(format!(
                "{} coefficients for a degree-{} extension",
                coeffs.len(),
                self.r
            )));
        }
        let mut code = 0u32;
        for (j, &c) in coeffs.iter().enumerate() {
            if c >= self.p as u64 {
                return Err(Error::InvalidElement(format!(
                    "coefficient {c} not below {}",
                    self.p
                )));
            }
            code += c as u32 * self.pow_p[j];
        }
        Ok(Elem(code))
    }

    /// Coefficient vector of length `r`, low degree first.
    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.r as usize);
        let mut x = a.0;
        for _ in 0..self.r {
            v.push(x % self.p);
            x /= self.p;
        }
        v
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if self.r == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut y, mut out) = (a.0, b.0, 0u32);
        for &w in &self.pow_p {
            let d = x % self.p + y % self.p;
            out += if d >= self.p { d - self.p } else { d } * w;
            x /= self.p;
            y /= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let (mut x, mut out) = (a.0, 0u32);
        for &w in &self.pow_p {
            let d = x % self.p;
            out += if d == 0 { 0 } else { self.p - d } * w;
            x /= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) => Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => self.mul_slow(a, b),
        }
    }

    /// Multiplicative inverse; `ZeroInverse` for zero.
    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.inv_nonzero(a))
    }

    /// Inverse of a nonzero element. Zero maps to zero.
    #[inline]
    pub fn inv_nonzero(&self, a: Elem) -> Elem {
        if a.is_zero() {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let n = self.q - 1;
                let l = t.log[a.0 as usize];
                Elem(t.exp[((n - l) % n) as usize])
            }
            None => self.pow_slow(a, self.q as u64 - 2),
        }
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let n = (self.q - 1) as u64;
                let l = t.log[a.0 as usize] as u64;
                Elem(t.exp[((l * (e % n)) % n) as usize])
            }
            None => self.pow_slow(a, e),
        }
    }

    pub fn pow_big(&self, a: Elem, e: &BigUint) -> Elem {
        if a.is_zero() {
            return if e.bits() == 0 { Elem::ONE } else { Elem::ZERO };
        }
        let n = BigUint::from(self.q - 1);
        let reduced = e % &n;
        self.pow(a, reduced.try_into().expect("reduced exponent fits"))
    }

    /// Least k >= 1 with a^k = 1.
    pub fn mult_order(&self, a: Elem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let mut order = self.q as u64 - 1;
        for (l, e) in arith::factorize(order) {
            for _ in 0..e {
                if self.pow(a, order / l) == Elem::ONE {
                    order /= l;
                } else {
                    break;
                }
            }
        }
        Ok(order)
    }

    /// Tr(a) = a + a^s + … + a^{s^{d-1}} with s = p^k and d = r/k.
    pub fn trace_to_base(&self, a: Elem, k: u32) -> Result<Elem> {
        if k == 0 || self.r % k != 0 {
            return Err(Error::NotADivisor { k, r: self.r });
        }
        let s = (self.p as u64).pow(k);
        let mut acc = Elem::ZERO;
        let mut term = a;
        for _ in 0..self.r / k {
            acc = self.add(acc, term);
            term = self.pow(term, s);
        }
        Ok(acc)
    }

    /// Quadratic character of a nonzero element (odd characteristic): true for squares.
    pub fn is_square(&self, a: Elem) -> bool {
        if a.is_zero() || self.p == 2 {
            return true;
        }
        self.pow(a, (self.q as u64 - 1) / 2) == Elem::ONE
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p as u64;
        let r = self.r as usize;
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // Reduce by the monic modulus from the top down.
        let m = &self.modulus.coeffs;
        for d in (r..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for j in 0..r {
                let t = c * m[j] as u64 % p;
                prod[d - r + j] = (prod[d - r + j] + p - t) % p;
            }
            prod[d] = 0;
        }
        let mut code = 0u32;
        for j in 0..r {
            code += prod[j] as u32 * self.pow_p[j];
        }
        Elem(code)
    }

    fn pow_slow(&self, mut a: Elem, mut e: u64) -> Elem {
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, a);
            }
            a = self.mul_slow(a, a);
            e >>= 1;
        }
        acc
    }

    /// Lifts a polynomial over F_p into a polynomial over this field.
    pub fn poly_from_prime(&self, f: &PrimePoly) -> Poly {
        Poly::new(f.coeffs.iter().map(|&c| self.from_int(c as i64)).collect())
    }
}

/// A field element bound to its field, for the checked public API.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Arc<FieldSpec>,
    value: Elem,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && same_field(&self.field, &other.field)
    }
}

fn same_field(a: &Arc<FieldSpec>, b: &Arc<FieldSpec>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FieldElement {
    pub fn new(field: Arc<FieldSpec>, value: Elem) -> Result<Self> {
        field.elem(value.0 as u64)?;
        Ok(FieldElement { field, value })
    }

    pub fn from_coeffs(field: Arc<FieldSpec>, coeffs: &[u64]) -> Result<Self> {
        let value = field.from_coeffs(coeffs)?;
        Ok(FieldElement { field, value })
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    fn binary(&self, other: &Self, op: impl Fn(&FieldSpec, Elem, Elem) -> Elem) -> Result<Self> {
        if !same_field(&self.field, &other.field) {
            return Err(Error::FieldMismatch);
        }
        Ok(FieldElement {
            field: self.field.clone(),
            value: op(&self.field, self.value, other.value),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.binary(other, FieldSpec::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.binary(other, FieldSpec::sub)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.binary(other, FieldSpec::mul)
    }

    pub fn neg(&self) -> Self {
        FieldElement {
            field: self.field.clone(),
            value: self.field.neg(self.value),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(FieldElement {
            field: self.field.clone(),
            value: self.field.inv(self.value)?,
        })
    }

    pub fn mult_order(&self) -> Result<u64> {
        self.field.mult_order(self.value)
    }

    pub fn trace_to_base(&self, k: u32) -> Result<Self> {
        Ok(FieldElement {
            field: self.field.clone(),
            value: self.field.trace_to_base(self.value, k)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, r: u32, m: &[i64]) -> FieldSpec {
        make_field(p, r, Some(PrimePoly::new(p as u32, m).unwrap())).unwrap()
    }

    #[test]
    fn default_modulus_for_prime_field_is_x() {
        let f = make_field(2, 1, None).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.modulus().coeffs, vec![0, 1]);
    }

    #[test]
    fn gf49_with_example_modulus() {
        let f = gf(7, 2, &[3, 1, 1]);
        assert_eq!(f.order(), 49);
        assert_eq!(f.to_string(), "GF(7^2; f=3,1,1)");
    }

    #[test]
    fn rejects_reducible_and_bad_moduli() {
        assert!(make_field(2, 4, Some(PrimePoly::new(2, &[1, 1, 0, 0, 1]).unwrap())).is_ok());
        assert!(matches!(
            make_field(2, 4, Some(PrimePoly::new(2, &[1, 0, 0, 0, 1]).unwrap())),
            Err(Error::NotIrreducible(_))
        ));
        assert!(matches!(make_field(4, 1, None), Err(Error::NotPrime(4))));
        assert!(matches!(
            make_field(3, 2, Some(PrimePoly::new(3, &[1, 1, 0, 1]).unwrap())),
            Err(Error::DegreeMismatch { .. })
        ));
        assert!(matches!(
            make_field(3, 2, Some(PrimePoly::new(3, &[1, 0, 2]).unwrap())),
            Err(Error::NotMonic)
        ));
    }

    #[test]
    fn default_modulus_is_lexicographic_low_degree_first() {
        // (1,0,0,1) precedes (1,1,0,0) when c0 is compared first.
        let f = make_field(2, 4, None).unwrap();
        assert_eq!(f.modulus().coeffs, vec![1, 0, 0, 1, 1]);
        let f = make_field(7, 2, None).unwrap();
        assert_eq!(f.modulus().coeffs, vec![1, 0, 1]);
        let f = make_field(2, 8, None).unwrap();
        assert_eq!(f.to_string(), make_field(2, 8, None).unwrap().to_string());
    }

    #[test]
    fn small_arithmetic() {
        let f5 = make_field(5, 1, None).unwrap();
        assert_eq!(f5.add(Elem(2), Elem(4)), Elem(1));
        assert_eq!(f5.inv(Elem(2)).unwrap(), Elem(3));
        assert_eq!(f5.mult_order(Elem(4)).unwrap(), 2);
        let f7 = make_field(7, 1, None).unwrap();
        assert_eq!(f7.mul(Elem(3), Elem(5)), Elem(1));
        assert_eq!(f7.inv(Elem(4)).unwrap(), Elem(2));
        assert_eq!(f7.mult_order(Elem(3)).unwrap(), 6);
        assert_eq!(f7.mult_order(Elem(1)).unwrap(), 1);
        assert_eq!(f7.inv(Elem::ZERO), Err(Error::ZeroInverse));
        assert_eq!(f7.mult_order(Elem::ZERO), Err(Error::ZeroArgument));
    }

    #[test]
    fn gf4_x_times_x() {
        let f = gf(2, 2, &[1, 1, 1]);
        let x = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.coeffs(f.mul(x, x)), vec![1, 1]);
    }

    #[test]
    fn gf4_trace() {
        let f = gf(2, 2, &[1, 1, 1]);
        let w = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.trace_to_base(w, 1).unwrap(), Elem::ONE);
        assert_eq!(f.trace_to_base(Elem::ZERO, 1).unwrap(), Elem::ZERO);
        let zeros: Vec<Elem> = f
            .elements()
            .filter(|&a| f.trace_to_base(a, 1).unwrap().is_zero())
            .collect();
        assert_eq!(zeros, vec![Elem(0), Elem(1)]);
        assert!(matches!(
            f.trace_to_base(w, 3),
            Err(Error::NotADivisor { .. })
        ));
    }

    #[test]
    fn table_and_slow_paths_agree() {
        let f = gf(3, 3, &[1, 2, 0, 1]);
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
            }
            if !a.is_zero() {
                assert_eq!(f.inv_nonzero(a), f.pow_slow(a, f.order() as u64 - 2));
            }
        }
    }

    #[test]
    fn text_form_round_trips() {
        let f = gf(7, 2, &[3, 1, 1]);
        let g: FieldSpec = f.to_string().parse().unwrap();
        assert_eq!(f, g);
        assert!("GF(7^2; f=1,0,0)".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn checked_elements_detect_mismatch() {
        let a = Arc::new(make_field(5, 1, None).unwrap());
        let b = Arc::new(make_field(7, 1, None).unwrap());
        let x = FieldElement::new(a.clone(), Elem(2)).unwrap();
        let y = FieldElement::new(b, Elem(2)).unwrap();
        assert_eq!(x.add(&y), Err(Error::FieldMismatch));
        let z = FieldElement::new(a, Elem(4)).unwrap();
        assert_eq!(x.add(&z).unwrap().value(), Elem(1));
        assert_eq!(x.inv().unwrap().value(), Elem(3));
    }
}
