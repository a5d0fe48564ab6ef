//! Rijndael-like component maps on M_{m,n}(GF(p^r)) and the rounds built
//! from them.
//!
//! Compositions are written right to left as usual, so
//! T[k] = σ[k]∘ρ∘π∘λ applies λ first. Internally a map is a [`Pipeline`]
//! of [`Op`]s listed in application order.

mod config;

pub use config::{CipherConfig, ElemRepr, KeyScheduleConfig, SboxConfig, SboxPairConfig};

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::linalg::Matrix;
use crate::state::{StateMatrix, StateShape};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sbox {
    /// One (A, B) pair for every position.
    Global { a: Elem, b: Elem },
    /// Row-major (A_ij, B_ij) pairs.
    PerPosition(Vec<(Elem, Elem)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KeySchedule {
    /// Explicit subkeys k_1..k_{s+1}.
    Independent(Vec<StateMatrix>),
    /// One key used for every subkey.
    Constant(StateMatrix),
    /// ChaCha8 expansion of a seed.
    Seeded(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CipherSpec {
    shape: StateShape,
    sbox: Sbox,
    shifts: Vec<usize>,
    mix: Matrix,
    mix_inv: Matrix,
    rounds: usize,
    key_schedule: Option<KeySchedule>,
}

impl CipherSpec {
    pub fn new(
        shape: StateShape,
        sbox: Sbox,
        shifts: Vec<usize>,
        mix: Matrix,
        rounds: usize,
        key_schedule: Option<KeySchedule>,
    ) -> Result<CipherSpec> {
        let f = shape.field();
        let q = f.order();
        let (m, n) = (shape.m(), shape.n());
        let check = |field: &str, e: Elem| -> Result<()> {
            if e.0 >= q {
                return Err(Error::invalid(
                    field,
                    format!("element code {} not in GF({q})", e.0),
                ));
            }
            Ok(())
        };
        match &sbox {
            Sbox::Global { a, b } => {
                check("sbox.A", *a)?;
                check("sbox.B", *b)?;
                if a.is_zero() {
                    return Err(Error::invalid("sbox.A", "must be nonzero"));
                }
            }
            Sbox::PerPosition(pairs) => {
                if pairs.len() != m * n {
                    return Err(Error::invalid(
                        "sbox",
                        format!("expected {m}x{n} pairs, found {}", pairs.len()),
                    ));
                }
                for (idx, &(a, b)) in pairs.iter().enumerate() {
                    let at = format!("sbox[{}][{}]", idx / n, idx % n);
                    check(&format!("{at}.A"), a)?;
                    check(&format!("{at}.B"), b)?;
                    if a.is_zero() {
                        return Err(Error::invalid(format!("{at}.A"), "must be nonzero"));
                    }
                }
            }
        }
        if shifts.len() != m {
            return Err(Error::invalid(
                "shifts",
                format!("expected {m} offsets, found {}", shifts.len()),
            ));
        }
        if let Some((i, c)) = shifts.iter().enumerate().find(|(_, &c)| c >= n) {
            return Err(Error::invalid(
                format!("shifts[{i}]"),
                format!("{c} not in 0..{n}"),
            ));
        }
        if mix.rows() != m || mix.cols() != m {
            return Err(Error::invalid(
                "mix",
                format!("expected {m}x{m}, found {}x{}", mix.rows(), mix.cols()),
            ));
        }
        for i in 0..m {
            for j in 0..m {
                check(&format!("mix[{i}][{j}]"), mix.get(i, j))?;
            }
        }
        let mix_inv = mix
            .inverse(f)
            .ok_or_else(|| Error::invalid("mix", "matrix is not invertible"))?;
        if rounds == 0 {
            return Err(Error::invalid("s", "must be at least 1"));
        }
        let spec = CipherSpec {
            shape,
            sbox,
            shifts,
            mix,
            mix_inv,
            rounds,
            key_schedule,
        };
        if let Some(ks) = &spec.key_schedule {
            spec.validate_schedule(ks)?;
        }
        Ok(spec)
    }

    /// All components the identity except λ, which is x ↦ x⁻¹ with 0 ↦ 0.
    pub fn plain(shape: StateShape) -> CipherSpec {
        let m = shape.m();
        CipherSpec::new(
            shape,
            Sbox::Global {
                a: Elem::ONE,
                b: Elem::ZERO,
            },
            vec![0; m],
            Matrix::identity(m),
            2,
            None,
        )
        .expect("identity configuration is valid")
    }

    fn validate_schedule(&self, ks: &KeySchedule) -> Result<()> {
        let check_key = |field: String, k: &StateMatrix| -> Result<()> {
            if k.shape() != &self.shape {
                return Err(Error::invalid(
                    field,
                    "key shape does not match the state shape",
                ));
            }
            Ok(())
        };
        match ks {
            KeySchedule::Independent(keys) => {
                if keys.len() != self.rounds + 1 {
                    return Err(Error::KeyCountMismatch {
                        expected: self.rounds + 1,
                        found: keys.len(),
                    });
                }
                for (i, k) in keys.iter().enumerate() {
                    check_key(format!("key_schedule.keys[{i}]"), k)?;
                }
            }
            KeySchedule::Constant(k) => check_key("key_schedule.key".into(), k)?,
            KeySchedule::Seeded(_) => {}
        }
        Ok(())
    }

    pub fn shape(&self) -> &StateShape {
        &self.shape
    }

    pub fn field(&self) -> &FieldSpec {
        self.shape.field()
    }

    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        self.shape.field_arc()
    }

    pub fn sbox(&self) -> &Sbox {
        &self.sbox
    }

    pub fn shifts(&self) -> &[usize] {
        &self.shifts
    }

    pub fn mix(&self) -> &Matrix {
        &self.mix
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn key_schedule(&self) -> Option<&KeySchedule> {
        self.key_schedule.as_ref()
    }

    pub fn with_rounds(&self, s: usize) -> Result<CipherSpec> {
        let ks = match &self.key_schedule {
            Some(KeySchedule::Independent(_)) => None,
            other => other.clone(),
        };
        CipherSpec::new(
            self.shape.clone(),
            self.sbox.clone(),
            self.shifts.clone(),
            self.mix.clone(),
            s,
            ks,
        )
    }

    pub fn with_key_schedule(&self, ks: Option<KeySchedule>) -> Result<CipherSpec> {
        CipherSpec::new(
            self.shape.clone(),
            self.sbox.clone(),
            self.shifts.clone(),
            self.mix.clone(),
            self.rounds,
            ks,
        )
    }

    /// Global (A, B), or `None` in per-position mode.
    pub fn global_sbox(&self) -> Option<(Elem, Elem)> {
        match &self.sbox {
            Sbox::Global { a, b } => Some((*a, *b)),
            Sbox::PerPosition(_) => None,
        }
    }

    #[inline]
    fn sbox_at(&self, idx: usize) -> (Elem, Elem) {
        match &self.sbox {
            Sbox::Global { a, b } => (*a, *b),
            Sbox::PerPosition(pairs) => pairs[idx],
        }
    }

    /// Notes about readings of the definitions that affect this spec.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.rounds == 1 {
            w.push(
                "s = 1: the s-round function degenerates to sigma[k2] o pi o lambda o sigma[k1]"
                    .to_string(),
            );
        }
        w
    }

    /// The s+1 subkeys k_1..k_{s+1} from the key schedule.
    pub fn subkeys(&self) -> Result<Vec<StateMatrix>> {
        let ks = self
            .key_schedule
            .as_ref()
            .ok_or_else(|| Error::invalid("key_schedule", "required for encryption"))?;
        let count = self.rounds + 1;
        Ok(match ks {
            KeySchedule::Independent(keys) => keys.clone(),
            KeySchedule::Constant(k) => vec![k.clone(); count],
            KeySchedule::Seeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..count)
                    .map(|_| random_state(&self.shape, &mut rng))
                    .collect()
            }
        })
    }

    // ---- component maps on raw row-major slices ----

    pub fn sigma_slice(&self, a: &mut [Elem], k: &[Elem]) {
        let f = self.field();
        for (x, &kk) in a.iter_mut().zip(k) {
            *x = f.add(*x, kk);
        }
    }

    pub fn sigma_inv_slice(&self, a: &mut [Elem], k: &[Elem]) {
        let f = self.field();
        for (x, &kk) in a.iter_mut().zip(k) {
            *x = f.sub(*x, kk);
        }
    }

    pub fn lambda_slice(&self, a: &mut [Elem]) {
        let f = self.field();
        for (idx, x) in a.iter_mut().enumerate() {
            let (sa, sb) = self.sbox_at(idx);
            *x = if x.is_zero() {
                sb
            } else {
                f.add(f.mul(sa, f.inv_nonzero(*x)), sb)
            };
        }
    }

    pub fn lambda_inv_slice(&self, a: &mut [Elem]) {
        let f = self.field();
        for (idx, y) in a.iter_mut().enumerate() {
            let (sa, sb) = self.sbox_at(idx);
            *y = if *y == sb {
                Elem::ZERO
            } else {
                f.mul(sa, f.inv_nonzero(f.sub(*y, sb)))
            };
        }
    }

    /// b_ij = a_{i, (j - c(i)) mod n}.
    pub fn pi_slice(&self, a: &mut [Elem]) {
        let n = self.shape.n();
        for (row, &c) in a.chunks_mut(n).zip(&self.shifts) {
            row.rotate_right(c);
        }
    }

    pub fn pi_inv_slice(&self, a: &mut [Elem]) {
        let n = self.shape.n();
        for (row, &c) in a.chunks_mut(n).zip(&self.shifts) {
            row.rotate_left(c);
        }
    }

    fn mix_columns(&self, mat: &Matrix, a: &mut [Elem]) {
        let f = self.field();
        let (m, n) = (self.shape.m(), self.shape.n());
        let mut col = vec![Elem::ZERO; m];
        for j in 0..n {
            for i in 0..m {
                col[i] = a[i * n + j];
            }
            for i in 0..m {
                let mut acc = Elem::ZERO;
                for (k, &x) in col.iter().enumerate() {
                    acc = f.add(acc, f.mul(mat.get(i, k), x));
                }
                a[i * n + j] = acc;
            }
        }
    }

    pub fn rho_slice(&self, a: &mut [Elem]) {
        self.mix_columns(&self.mix, a);
    }

    pub fn rho_inv_slice(&self, a: &mut [Elem]) {
        self.mix_columns(&self.mix_inv, a);
    }

    /// Blockwise inversion with 0 ↦ 0.
    pub fn gamma_slice(&self, a: &mut [Elem]) {
        let f = self.field();
        for x in a.iter_mut() {
            if !x.is_zero() {
                *x = f.inv_nonzero(*x);
            }
        }
    }

    // ---- StateMatrix front end ----

    fn checked(&self, a: &StateMatrix) -> Result<()> {
        if a.shape() != &self.shape {
            return Err(Error::ShapeMismatch {
                expected: format!("{:?}", self.shape),
                found: format!("{:?}", a.shape()),
            });
        }
        Ok(())
    }

    fn map(&self, a: &StateMatrix, op: impl FnOnce(&mut [Elem])) -> Result<StateMatrix> {
        self.checked(a)?;
        let mut out = a.clone();
        op(out.entries_mut());
        Ok(out)
    }

    pub fn sigma(&self, k: &StateMatrix, a: &StateMatrix) -> Result<StateMatrix> {
        self.checked(k)?;
        self.map(a, |x| self.sigma_slice(x, k.entries()))
    }

    pub fn lambda(&self, a: &StateMatrix) -> Result<StateMatrix> {
        self.map(a, |x| self.lambda_slice(x))
    }

    pub fn lambda_inv(&self, a: &StateMatrix) -> Result<StateMatrix> {
        self.map(a, |x| self.lambda_inv_slice(x))
    }

    pub fn pi(&self, a: &StateMatrix) -> Result<StateMatrix> {
        self.map(a, |x| self.pi_slice(x))
    }

    pub fn pi_inv(&self, a: &StateMatrix) -> Result<StateMatrix> {
        self.map(a, |x| self.pi_inv_slice(x))
    }

    pub fn rho(&self, a: &StateMatrix) -> Result<StateMatrix> {
        self.map(a, |x| self.rho_slice(x))
    }

    pub fn rho_inv(&self, a: &StateMatrix) -> Result<StateMatrix> {
        self.map(a, |x| self.rho_inv_slice(x))
    }

    pub fn gamma(&self, a: &StateMatrix) -> Result<StateMatrix> {
        self.map(a, |x| self.gamma_slice(x))
    }

    /// T[k] = σ[k]∘ρ∘π∘λ.
    pub fn round(&self, k: &StateMatrix, a: &StateMatrix) -> Result<StateMatrix> {
        self.checked(k)?;
        let p = Pipeline::round(k.entries().to_vec());
        self.map(a, |x| p.apply(self, x))
    }

    pub fn round_inv(&self, k: &StateMatrix, a: &StateMatrix) -> Result<StateMatrix> {
        self.checked(k)?;
        let p = Pipeline::round(k.entries().to_vec()).inverse();
        self.map(a, |x| p.apply(self, x))
    }

    /// T_s with the s+1 keys k_1..k_{s+1}, s = `keys.len() - 1`.
    pub fn s_round(&self, keys: &[StateMatrix], a: &StateMatrix) -> Result<StateMatrix> {
        let p = self.s_round_pipeline(keys)?;
        self.map(a, |x| p.apply(self, x))
    }

    pub fn s_round_inv(&self, keys: &[StateMatrix], a: &StateMatrix) -> Result<StateMatrix> {
        let p = self.s_round_pipeline(keys)?.inverse();
        self.map(a, |x| p.apply(self, x))
    }

    pub fn s_round_pipeline(&self, keys: &[StateMatrix]) -> Result<Pipeline> {
        if keys.len() != self.rounds + 1 {
            return Err(Error::KeyCountMismatch {
                expected: self.rounds + 1,
                found: keys.len(),
            });
        }
        for k in keys {
            self.checked(k)?;
        }
        Ok(Pipeline::s_round(
            keys.iter().map(|k| k.entries().to_vec()).collect(),
        ))
    }

    pub fn encrypt(&self, a: &StateMatrix) -> Result<StateMatrix> {
        self.s_round(&self.subkeys()?, a)
    }

    pub fn decrypt(&self, a: &StateMatrix) -> Result<StateMatrix> {
        self.s_round_inv(&self.subkeys()?, a)
    }

    /// Matrix of α = ρ∘π acting on row-major coordinate vectors.
    pub fn alpha_matrix(&self) -> Matrix {
        let f = self.field();
        let (m, n) = (self.shape.m(), self.shape.n());
        let mut out = Matrix::zeros(m * n, m * n);
        for i in 0..m {
            for j in 0..n {
                for k in 0..m {
                    let src = k * n + (j + n - self.shifts[k]) % n;
                    let v = f.add(out.get(i * n + j, src), self.mix.get(i, k));
                    out.set(i * n + j, src, v);
                }
            }
        }
        out
    }

    /// The unit key e_t: coordinate t/r holds x^{t mod r}.
    pub fn unit_key(&self, t: usize) -> StateMatrix {
        let f = self.field();
        let r = f.r() as usize;
        let mut k = self.shape.zero();
        k.entries_mut()[t / r] = Elem(f.p().pow((t % r) as u32));
        k
    }
}

pub fn random_state(shape: &StateShape, rng: &mut impl Rng) -> StateMatrix {
    let q = shape.field().order();
    let entries = (0..shape.len())
        .map(|_| Elem(rng.gen_range(0..q)))
        .collect();
    shape.matrix(entries).expect("codes in range")
}

/// One step of a pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    Sigma(Vec<Elem>),
    SigmaInv(Vec<Elem>),
    Lambda,
    LambdaInv,
    Pi,
    PiInv,
    Rho,
    RhoInv,
    Gamma,
}

impl Op {
    pub fn inverse(&self) -> Op {
        match self {
            Op::Sigma(k) => Op::SigmaInv(k.clone()),
            Op::SigmaInv(k) => Op::Sigma(k.clone()),
            Op::Lambda => Op::LambdaInv,
            Op::LambdaInv => Op::Lambda,
            Op::Pi => Op::PiInv,
            Op::PiInv => Op::Pi,
            Op::Rho => Op::RhoInv,
            Op::RhoInv => Op::Rho,
            Op::Gamma => Op::Gamma,
        }
    }

    pub fn apply(&self, spec: &CipherSpec, a: &mut [Elem]) {
        match self {
            Op::Sigma(k) => spec.sigma_slice(a, k),
            Op::SigmaInv(k) => spec.sigma_inv_slice(a, k),
            Op::Lambda => spec.lambda_slice(a),
            Op::LambdaInv => spec.lambda_inv_slice(a),
            Op::Pi => spec.pi_slice(a),
            Op::PiInv => spec.pi_inv_slice(a),
            Op::Rho => spec.rho_slice(a),
            Op::RhoInv => spec.rho_inv_slice(a),
            Op::Gamma => spec.gamma_slice(a),
        }
    }
}

/// Ops in application order (first element applied first).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pipeline(pub Vec<Op>);

impl Pipeline {
    pub fn single(op: Op) -> Pipeline {
        Pipeline(vec![op])
    }

    pub fn round(k: Vec<Elem>) -> Pipeline {
        Pipeline(vec![Op::Lambda, Op::Pi, Op::Rho, Op::Sigma(k)])
    }

    /// σ[k_{s+1}]∘π∘λ∘(σ[k_i]∘ρ∘π∘λ for i = s..2)∘σ[k_1].
    pub fn s_round(keys: Vec<Vec<Elem>>) -> Pipeline {
        let s = keys.len() - 1;
        let mut it = keys.into_iter();
        let mut ops = vec![Op::Sigma(it.next().expect("at least one key"))];
        for _ in 2..=s {
            ops.extend([Op::Lambda, Op::Pi, Op::Rho, Op::Sigma(it.next().unwrap())]);
        }
        ops.extend([Op::Lambda, Op::Pi, Op::Sigma(it.next().unwrap())]);
        Pipeline(ops)
    }

    pub fn inverse(&self) -> Pipeline {
        Pipeline(self.0.iter().rev().map(Op::inverse).collect())
    }

    /// self then other.
    pub fn then(mut self, other: &Pipeline) -> Pipeline {
        self.0.extend(other.0.iter().cloned());
        self
    }

    pub fn apply(&self, spec: &CipherSpec, a: &mut [Elem]) {
        for op in &self.0 {
            op.apply(spec, a);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn shape(p: u64, r: u32, m: usize, n: usize) -> StateShape {
        StateShape::new(Arc::new(make_field(p, r, None).unwrap()), m, n).unwrap()
    }

    fn global(
        shape: StateShape,
        a: u32,
        b: u32,
        shifts: Vec<usize>,
        mix: Vec<Vec<u32>>,
    ) -> CipherSpec {
        let mix = Matrix::from_rows(
            mix.into_iter()
                .map(|r| r.into_iter().map(Elem).collect())
                .collect(),
        )
        .unwrap();
        CipherSpec::new(
            shape,
            Sbox::Global {
                a: Elem(a),
                b: Elem(b),
            },
            shifts,
            mix,
            2,
            None,
        )
        .unwrap()
    }

    fn st(shape: &StateShape, v: &[u32]) -> StateMatrix {
        shape.matrix(v.iter().map(|&x| Elem(x)).collect()).unwrap()
    }

    #[test]
    fn lambda_gf3() {
        let sh = shape(3, 1, 1, 1);
        let c = global(sh.clone(), 2, 1, vec![0], vec![vec![1]]);
        let img: Vec<u32> = (0..3)
            .map(|x| c.lambda(&st(&sh, &[x])).unwrap().entries()[0].0)
            .collect();
        assert_eq!(img, vec![1, 0, 2]);
        for x in 0..3 {
            let y = c.lambda(&st(&sh, &[x])).unwrap();
            assert_eq!(c.lambda_inv(&y).unwrap(), st(&sh, &[x]));
        }
    }

    #[test]
    fn rho_on_example_column() {
        let sh = shape(7, 1, 2, 1);
        let c = global(sh.clone(), 1, 0, vec![0, 0], vec![vec![1, 4], vec![1, 0]]);
        assert_eq!(c.rho(&st(&sh, &[1, 3])).unwrap(), st(&sh, &[6, 1]));
    }

    #[test]
    fn pi_shifts_right() {
        let sh = shape(5, 1, 2, 3);
        let c = global(sh.clone(), 1, 0, vec![1, 2], vec![vec![1, 0], vec![0, 1]]);
        let a = st(&sh, &[0, 1, 2, 3, 4, 0]);
        // b_ij = a_{i,(j-c(i)) mod n}
        assert_eq!(c.pi(&a).unwrap(), st(&sh, &[2, 0, 1, 4, 0, 3]));
    }

    #[test]
    fn s_round_structure() {
        let p = Pipeline::s_round(vec![vec![Elem(1)], vec![Elem(2)], vec![Elem(3)]]);
        let rho = p.0.iter().filter(|o| **o == Op::Rho).count();
        let lam = p.0.iter().filter(|o| **o == Op::Lambda).count();
        let pi = p.0.iter().filter(|o| **o == Op::Pi).count();
        assert_eq!((rho, lam, pi), (1, 2, 2));
        assert_eq!(p.0.first(), Some(&Op::Sigma(vec![Elem(1)])));
        assert_eq!(p.0.last(), Some(&Op::Sigma(vec![Elem(3)])));
    }

    #[test]
    fn alpha_matrix_matches_composition() {
        let sh = shape(7, 2, 2, 3);
        let c = global(sh.clone(), 3, 5, vec![1, 2], vec![vec![1, 4], vec![9, 0]]);
        let m = c.alpha_matrix();
        let f = sh.field();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = random_state(&sh, &mut rng);
            let via = m.mul_vec(f, a.entries());
            let direct = c.rho(&c.pi(&a).unwrap()).unwrap();
            assert_eq!(via, direct.entries());
        }
    }

    #[test]
    fn rejects_bad_specs() {
        let sh = shape(3, 1, 2, 2);
        let singular =
            Matrix::from_rows(vec![vec![Elem(1), Elem(1)], vec![Elem(1), Elem(1)]]).unwrap();
        let err = CipherSpec::new(
            sh.clone(),
            Sbox::Global {
                a: Elem(1),
                b: Elem(0),
            },
            vec![0, 1],
            singular,
            2,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Invalid { ref field, .. } if field == "mix"));
        let err = CipherSpec::new(
            sh.clone(),
            Sbox::Global {
                a: Elem(0),
                b: Elem(0),
            },
            vec![0, 1],
            Matrix::identity(2),
            2,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Invalid { ref field, .. } if field == "sbox.A"));
        let err = CipherSpec::new(
            sh,
            Sbox::Global {
                a: Elem(1),
                b: Elem(0),
            },
            vec![0, 2],
            Matrix::identity(2),
            2,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Invalid { ref field, .. } if field == "shifts[1]"));
    }

    #[test]
    fn seeded_schedule_is_deterministic() {
        let sh = shape(5, 1, 2, 2);
        let c = CipherSpec::plain(sh)
            .with_key_schedule(Some(KeySchedule::Seeded(9)))
            .unwrap();
        assert_eq!(c.subkeys().unwrap(), c.subkeys().unwrap());
        assert_eq!(c.subkeys().unwrap().len(), 3);
    }
}
