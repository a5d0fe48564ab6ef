//! Univariate polynomials over a [`FieldSpec`]: division, gcd, modular
//! powers, irreducibility and splitting off an irreducible factor.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Elem, FieldSpec};

/// Ascending coefficients, no trailing zeros. The zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly {
            coeffs: vec![Elem::ONE],
        }
    }

    /// The monomial x.
    pub fn x() -> Poly {
        Poly {
            coeffs: vec![Elem::ZERO, Elem::ONE],
        }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn eval(&self, f: &FieldSpec, x: Elem) -> Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, f: &FieldSpec, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[Elem], i: usize| v.get(i).copied().unwrap_or(Elem::ZERO);
        Poly::new(
            (0..n)
                .map(|i| f.add(get(&self.coeffs, i), get(&other.coeffs, i)))
                .collect(),
        )
    }

    pub fn sub(&self, f: &FieldSpec, other: &Poly) -> Poly {
        self.add(f, &other.scale(f, f.neg(Elem::ONE)))
    }

    pub fn scale(&self, f: &FieldSpec, c: Elem) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &FieldSpec, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, f: &FieldSpec, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv_nonzero(divisor.leading());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Elem::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = f.sub(rem[k], f.mul(c, d));
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, f: &FieldSpec, divisor: &Poly) -> Poly {
        self.div_rem(f, divisor).1
    }

    pub fn monic(&self, f: &FieldSpec) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f, f.inv_nonzero(self.leading()))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, f: &FieldSpec, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn mul_mod(&self, f: &FieldSpec, other: &Poly, modulus: &Poly) -> Poly {
        self.mul(f, other).rem(f, modulus)
    }

    /// self^e mod modulus.
    pub fn pow_mod(&self, f: &FieldSpec, mut e: u64, modulus: &Poly) -> Poly {
        let mut base = self.rem(f, modulus);
        let mut acc = Poly::one().rem(f, modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(f, &base, modulus);
            }
            base = base.mul_mod(f, &base, modulus);
            e >>= 1;
        }
        acc
    }

    /// Irreducibility over `f`: gcd(g, x^{q^i} - x) = 1 for every i <= deg/2.
    pub fn is_irreducible(&self, f: &FieldSpec) -> bool {
        let Some(d) = self.degree() else {
            return false;
        };
        if d == 0 {
            return false;
        }
        let g = self.monic(f);
        let q = f.order() as u64;
        let x = Poly::x();
        let mut xp = x.rem(f, &g);
        for _ in 1..=d / 2 {
            xp = xp.pow_mod(f, q, &g);
            if g.gcd(f, &xp.sub(f, &x)).degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// An irreducible monic factor of least degree, found by distinct-degree
    /// then equal-degree splitting. `None` for constants.
    pub fn irreducible_factor(&self, f: &FieldSpec, seed: u64) -> Option<Poly> {
        let d = self.degree()?;
        if d == 0 {
            return None;
        }
        let g = self.monic(f);
        let q = f.order() as u64;
        let x = Poly::x();
        let mut xp = x.rem(f, &g);
        for i in 1..=d {
            xp = xp.pow_mod(f, q, &g);
            let h = g.gcd(f, &xp.sub(f, &x));
            if h.degree().unwrap_or(0) > 0 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                return Some(equal_degree_split(f, h, i, &mut rng));
            }
        }
        None
    }
}

/// Splits a squarefree product of degree-`k` irreducibles down to one factor.
fn equal_degree_split(f: &FieldSpec, mut h: Poly, k: usize, rng: &mut ChaCha8Rng) -> Poly {
    let q = f.order() as u64;
    while h.degree().unwrap() > k {
        let n = h.degree().unwrap();
        let a = Poly::new((0..n).map(|_| Elem(rng.gen_range(0..f.order()))).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if f.p() == 2 {
            // Absolute trace map a + a^2 + … + a^{2^{rk-1}} mod h.
            let mut acc = a.clone();
            let mut t = a.clone();
            for _ in 1..(f.r() as usize * k) {
                t = t.mul_mod(f, &t, &h);
                acc = acc.add(f, &t);
            }
            acc
        } else {
            let mut e = 1u64;
            for _ in 0..k {
                e = e
                    .checked_mul(q)
                    .expect("exponent overflow in equal-degree split");
            }
            a.pow_mod(f, (e - 1) / 2, &h).sub(f, &Poly::one())
        };
        let g = h.gcd(f, &b);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            h = if dg <= n - dg {
                g
            } else {
                h.div_rem(f, &g).0.monic(f)
            };
        }
    }
    h.monic(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn p(f: &FieldSpec, c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&v| f.from_int(v)).collect())
    }

    /// Independent check: trial division by every monic polynomial of degree <= deg/2.
    fn irreducible_by_trial_division(f: &FieldSpec, g: &Poly) -> bool {
        let d = g.degree().unwrap();
        let q = f.order() as u64;
        for k in 1..=d / 2 {
            for t in 0..q.pow(k as u32) {
                let mut c = Vec::with_capacity(k + 1);
                let mut rest = t;
                for _ in 0..k {
                    c.push(Elem((rest % q) as u32));
                    rest /= q;
                }
                c.push(Elem::ONE);
                if g.rem(f, &Poly::new(c)).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn examples() {
        let f7 = make_field(7, 1, None).unwrap();
        assert!(p(&f7, &[3, 1, 1]).is_irreducible(&f7));
        let f3 = make_field(3, 1, None).unwrap();
        assert!(!p(&f3, &[-1, 0, 1]).is_irreducible(&f3));
        assert!(p(&f3, &[-1, -1, 1]).is_irreducible(&f3));
    }

    #[test]
    fn gcd_criterion_matches_trial_division() {
        for (pr, r) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1)] {
            let f = make_field(pr, r, None).unwrap();
            let q = f.order() as u64;
            for deg in 1..=4usize {
                let total = q.pow(deg as u32).min(700);
                for t in 0..total {
                    let mut c = Vec::new();
                    let mut rest = t;
                    for _ in 0..deg {
                        c.push(Elem((rest % q) as u32));
                        rest /= q;
                    }
                    c.push(Elem::ONE);
                    let g = Poly::new(c);
                    assert_eq!(
                        g.is_irreducible(&f),
                        irreducible_by_trial_division(&f, &g),
                        "{g:?} over GF({pr}^{r})"
                    );
                }
            }
        }
    }

    #[test]
    fn division_identity() {
        let f = make_field(5, 2, None).unwrap();
        let a = Poly::new((0..7).map(|i| Elem((i * 7 + 3) % 25)).collect());
        let b = Poly::new((0..3).map(|i| Elem((i * 11 + 1) % 25)).collect());
        let (qq, rr) = a.div_rem(&f, &b);
        assert_eq!(qq.mul(&f, &b).add(&f, &rr), a);
        assert!(rr.degree().unwrap_or(0) < b.degree().unwrap());
    }

    #[test]
    fn irreducible_factor_divides_and_is_irreducible() {
        for (pr, r) in [(2u64, 1u32), (2, 2), (3, 1), (7, 1), (5, 2)] {
            let f = make_field(pr, r, None).unwrap();
            // (x^2 + x + c)(x^3 + 2x + 1)(x - 1)^2 for a few shapes.
            let g = p(&f, &[1, 1, 1])
                .mul(&f, &p(&f, &[1, 2, 0, 1]))
                .mul(&f, &p(&f, &[-1, 1]))
                .mul(&f, &p(&f, &[-1, 1]));
            let h = g.irreducible_factor(&f, 7).unwrap();
            assert!(h.is_irreducible(&f));
            assert!(g.rem(&f, &h).is_zero());
        }
    }

    #[test]
    fn irreducible_factor_of_product_of_quadratics() {
        // Forces the equal-degree split to separate two degree-2 factors.
        let f = make_field(2, 1, None).unwrap();
        let quad = p(&f, &[1, 1, 1]);
        let f3 = make_field(3, 1, None).unwrap();
        let g3 = p(&f3, &[1, 0, 1]).mul(&f3, &p(&f3, &[2, 1, 1]));
        let h3 = g3.irreducible_factor(&f3, 1).unwrap();
        assert_eq!(h3.degree(), Some(2));
        assert!(g3.rem(&f3, &h3).is_zero());
        let f4 = make_field(2, 2, None).unwrap();
        let g4 = f4.poly_from_prime(&crate::field::PrimePoly::new(2, &[1, 1, 0, 0, 1]).unwrap());
        let h4 = g4.irreducible_factor(&f4, 3).unwrap();
        assert_eq!(h4.degree(), Some(2));
        assert!(h4.is_irreducible(&f4));
        assert!(quad.is_irreducible(&f));
    }
}
