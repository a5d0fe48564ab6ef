//! Closed form versus oracle sweeps over a grid of small specs.
//!
//! Each grid cell (p, r, m, n) gets `draws` specs with seeded random S-box
//! constants, mix matrix, shifts and keys. The random stream for a draw
//! depends only on the grid seed and the cell, so reports do not depend on
//! the worker count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cipher::{random_state, CipherConfig, CipherSpec, KeySchedule, Op, Pipeline, Sbox};
use crate::error::{Error, Result};
use crate::field::{make_field, Elem, FieldSpec};
use crate::linalg::Matrix;
use crate::parity::{self, ClosureVerdict, CountComponent, Family, Parity};
use crate::perm::{materialize, materialize_pipeline, DensePermutation};
use crate::state::{StateMatrix, StateShape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Lemma {
    #[serde(rename = "ARKlemma")]
    Ark,
    #[serde(rename = "SBlemma")]
    Sbox,
    #[serde(rename = "SRlemma")]
    ShiftRows,
    #[serde(rename = "2isp")]
    TwoIsp,
    #[serde(rename = "MClemma")]
    MixColumns,
    #[serde(rename = "round")]
    Round,
    #[serde(rename = "sround")]
    SRound,
    #[serde(rename = "SWtheorem")]
    SwTheorem,
    #[serde(rename = "n>2")]
    WideRows,
    #[serde(rename = "fullpermutations")]
    FullPermutations,
    #[serde(rename = "cycles")]
    Cycles,
}

impl Lemma {
    pub const ALL: [Lemma; 11] = [
        Lemma::Ark,
        Lemma::Sbox,
        Lemma::ShiftRows,
        Lemma::TwoIsp,
        Lemma::MixColumns,
        Lemma::Round,
        Lemma::SRound,
        Lemma::SwTheorem,
        Lemma::WideRows,
        Lemma::FullPermutations,
        Lemma::Cycles,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::Ark => "ARKlemma",
            Lemma::Sbox => "SBlemma",
            Lemma::ShiftRows => "SRlemma",
            Lemma::TwoIsp => "2isp",
            Lemma::MixColumns => "MClemma",
            Lemma::Round => "round",
            Lemma::SRound => "sround",
            Lemma::SwTheorem => "SWtheorem",
            Lemma::WideRows => "n>2",
            Lemma::FullPermutations => "fullpermutations",
            Lemma::Cycles => "cycles",
        }
    }

    /// Whether the lemma says anything about this cell.
    fn applies(self, p: u64, r: u32, m: usize, n: usize) -> bool {
        match self {
            Lemma::ShiftRows => p > 2,
            Lemma::TwoIsp => p == 2,
            Lemma::SwTheorem => p == 2 && m * n > 2 && r >= 2,
            Lemma::WideRows => p == 2 && n > 2,
            _ => true,
        }
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Lemma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Lemma> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Unknown {
                kind: "lemma".into(),
                name: s.into(),
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub p: Vec<u64>,
    pub r: Vec<u32>,
    pub m: Vec<usize>,
    pub n: Vec<usize>,
    #[serde(default = "default_max_states")]
    pub max_states: u64,
    #[serde(default = "default_draws")]
    pub draws: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_s")]
    pub s: Vec<usize>,
}

fn default_max_states() -> u64 {
    1 << 14
}

fn default_draws() -> usize {
    20
}

fn default_s() -> Vec<usize> {
    vec![2, 3]
}

impl Default for Grid {
    fn default() -> Grid {
        Grid {
            p: vec![2, 3, 5, 7],
            r: vec![1, 2, 3],
            m: vec![1, 2, 3, 4],
            n: vec![1, 2, 3, 4],
            max_states: default_max_states(),
            draws: default_draws(),
            seed: 0,
            s: default_s(),
        }
    }
}

impl Grid {
    pub fn from_json(text: &str) -> Result<Grid> {
        serde_json::from_str(text).map_err(|e| Error::invalid("grid", e.to_string()))
    }

    /// Cells in grid order, each flagged enumerable or not.
    pub fn cells(&self) -> Vec<(Cell, bool)> {
        let mut out = Vec::new();
        for &p in &self.p {
            for &r in &self.r {
                for &m in &self.m {
                    for &n in &self.n {
                        let size = crate::arith::checked_pow(p, r as u64 * (m * n) as u64);
                        let ok = size.is_some_and(|s| s <= self.max_states);
                        out.push((Cell { p, r, m, n }, ok));
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Cell {
    pub p: u64,
    pub r: u32,
    pub m: usize,
    pub n: usize,
}

impl Cell {
    fn rng(&self, seed: u64, draw: usize) -> ChaCha8Rng {
        let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
        for v in [
            self.p,
            self.r as u64,
            self.m as u64,
            self.n as u64,
            draw as u64,
        ] {
            h = (h ^ v).wrapping_mul(0x0100_0000_01b3).rotate_left(17);
        }
        ChaCha8Rng::seed_from_u64(h)
    }
}

/// One random configuration for a cell.
#[derive(Clone, Debug)]
pub struct Draw {
    pub spec: CipherSpec,
    pub key: StateMatrix,
    /// Key tuples for T_s, one per requested s.
    pub s_keys: Vec<Vec<StateMatrix>>,
}

pub fn random_invertible(f: &FieldSpec, m: usize, rng: &mut impl Rng) -> Matrix {
    let q = f.order();
    loop {
        let rows = (0..m)
            .map(|_| (0..m).map(|_| Elem(rng.gen_range(0..q))).collect())
            .collect();
        let c = Matrix::from_rows(rows).expect("square");
        if !c.determinant(f).is_zero() {
            return c;
        }
    }
}

pub fn random_draw(
    field: &Arc<FieldSpec>,
    cell: Cell,
    s_values: &[usize],
    rng: &mut impl Rng,
) -> Result<Draw> {
    let f = &**field;
    let q = f.order();
    let shape = StateShape::new(field.clone(), cell.m, cell.n)?;
    let a = Elem(rng.gen_range(1..q));
    let b = Elem(rng.gen_range(0..q));
    let shifts = (0..cell.m).map(|_| rng.gen_range(0..cell.n)).collect();
    let mix = random_invertible(f, cell.m, rng);
    let spec = CipherSpec::new(shape.clone(), Sbox::Global { a, b }, shifts, mix, 2, None)?;
    let key = random_state(&shape, rng);
    let s_keys = s_values
        .iter()
        .map(|&s| (0..=s).map(|_| random_state(&shape, rng)).collect())
        .collect();
    Ok(Draw { spec, key, s_keys })
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub lemma: Lemma,
    pub cell: Cell,
    pub draw: usize,
    pub check: String,
    pub predicted: String,
    pub oracle: String,
    pub spec: CipherConfig,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LemmaTally {
    pub checks: u64,
    pub mismatches: u64,
    /// Checks where the published statement's literal prediction is wrong.
    pub published_literal_disagreements: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub lemmas: Vec<Lemma>,
    pub grid: Grid,
    pub cells_total: usize,
    pub cells_run: usize,
    pub cells_skipped_too_large: Vec<Cell>,
    pub draws_run: u64,
    pub tallies: BTreeMap<Lemma, LemmaTally>,
    pub mismatches: Vec<Mismatch>,
    /// First few specs on which a published statement is literally wrong.
    pub published_literal_examples: Vec<Mismatch>,
    pub all_pass: bool,
}

const MAX_LITERAL_EXAMPLES: usize = 3;

#[derive(Default)]
struct CellOutcome {
    draws: u64,
    tallies: BTreeMap<Lemma, LemmaTally>,
    mismatches: Vec<Mismatch>,
    literal: Vec<Mismatch>,
}

struct Checker<'a> {
    lemma: Lemma,
    cell: Cell,
    draw: usize,
    spec: &'a CipherSpec,
    out: &'a mut CellOutcome,
}

impl Checker<'_> {
    fn record(
        &mut self,
        check: &str,
        predicted: impl fmt::Display,
        oracle: impl fmt::Display,
        keys: Option<&[StateMatrix]>,
    ) {
        let (predicted, oracle) = (predicted.to_string(), oracle.to_string());
        let t = self.out.tallies.entry(self.lemma).or_default();
        t.checks += 1;
        if predicted != oracle {
            t.mismatches += 1;
            self.out
                .mismatches
                .push(self.witness(check, predicted, oracle, keys));
        }
    }

    fn literal(&mut self, check: &str, literal: Option<Parity>, oracle: Parity) {
        if let Some(lit) = literal {
            if lit != oracle {
                self.out
                    .tallies
                    .entry(self.lemma)
                    .or_default()
                    .published_literal_disagreements += 1;
                if self.out.literal.len() < MAX_LITERAL_EXAMPLES {
                    let w = self.witness(check, lit.to_string(), oracle.to_string(), None);
                    self.out.literal.push(w);
                }
            }
        }
    }

    fn witness(
        &self,
        check: &str,
        predicted: String,
        oracle: String,
        keys: Option<&[StateMatrix]>,
    ) -> Mismatch {
        let spec = match keys {
            Some(k) => self
                .spec
                .with_rounds(k.len() - 1)
                .and_then(|s| s.with_key_schedule(Some(KeySchedule::Independent(k.to_vec()))))
                .unwrap_or_else(|_| self.spec.clone()),
            None => self.spec.clone(),
        };
        Mismatch {
            lemma: self.lemma,
            cell: self.cell,
            draw: self.draw,
            check: check.to_string(),
            predicted,
            oracle,
            spec: spec.to_config(),
        }
    }
}

/// Oracle permutations shared by the lemma checks of one draw.
struct Oracles<'a> {
    spec: &'a CipherSpec,
    cap: u64,
    cache: BTreeMap<String, DensePermutation>,
}

impl<'a> Oracles<'a> {
    fn get(
        &mut self,
        name: &str,
        pipeline: impl FnOnce() -> Pipeline,
    ) -> Result<&DensePermutation> {
        if !self.cache.contains_key(name) {
            let perm = materialize_pipeline(self.spec, &pipeline(), self.cap)?;
            self.cache.insert(name.to_string(), perm);
        }
        Ok(&self.cache[name])
    }

    fn parity(&mut self, name: &str, pipeline: impl FnOnce() -> Pipeline) -> Result<Parity> {
        Ok(self.get(name, pipeline)?.parity())
    }
}

fn big_type(perm: &DensePermutation) -> BTreeMap<u64, BigUint> {
    perm.cycle_type()
        .into_iter()
        .map(|(l, c)| (l as u64, BigUint::from(c)))
        .collect()
}

fn fmt_type(t: &BTreeMap<u64, BigUint>) -> String {
    t.iter()
        .map(|(l, c)| format!("{l}^{c}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn check_draw(
    lemmas: &[Lemma],
    cell: Cell,
    draw_idx: usize,
    draw: &Draw,
    s_values: &[usize],
    cap: u64,
    out: &mut CellOutcome,
) -> Result<()> {
    let spec = &draw.spec;
    let mut o = Oracles {
        spec,
        cap,
        cache: BTreeMap::new(),
    };
    let key = draw.key.entries().to_vec();
    for &lemma in lemmas {
        if !lemma.applies(cell.p, cell.r, cell.m, cell.n) {
            continue;
        }
        let mut ck = Checker {
            lemma,
            cell,
            draw: draw_idx,
            spec,
            out,
        };
        match lemma {
            Lemma::Ark => {
                let pred = parity::parity_sigma(spec, &draw.key).parity;
                let got = o.parity("sigma", || Pipeline::single(Op::Sigma(key.clone())))?;
                ck.record(
                    "sigma parity",
                    pred,
                    got,
                    Some(std::slice::from_ref(&draw.key)),
                );
            }
            Lemma::Sbox => {
                let rep = parity::parity_lambda(spec)?;
                let got = o.parity("lambda", || Pipeline::single(Op::Lambda))?;
                ck.record("lambda parity", rep.parity, got, None);
                ck.literal("lambda parity", rep.published_prediction, got);
            }
            Lemma::ShiftRows | Lemma::TwoIsp => {
                let pred = parity::parity_pi(spec).parity;
                let got = o.parity("pi", || Pipeline::single(Op::Pi))?;
                ck.record("pi parity", pred, got, None);
            }
            Lemma::MixColumns => {
                let rep = parity::parity_rho(spec)?;
                let got = o.parity("rho", || Pipeline::single(Op::Rho))?;
                ck.record("rho parity", rep.parity, got, None);
                ck.literal("rho parity", rep.published_prediction, got);
            }
            Lemma::Round => {
                let pred = parity::parity_round(spec, &draw.key)?.parity;
                let got = o.parity("round", || Pipeline::round(key.clone()))?;
                ck.record(
                    "T[k] parity",
                    pred,
                    got,
                    Some(std::slice::from_ref(&draw.key)),
                );
                // Parity is additive over the components.
                let parts = [
                    o.parity("lambda", || Pipeline::single(Op::Lambda))?,
                    o.parity("pi", || Pipeline::single(Op::Pi))?,
                    o.parity("rho", || Pipeline::single(Op::Rho))?,
                    o.parity("sigma", || Pipeline::single(Op::Sigma(key.clone())))?,
                ];
                let xor = parts.into_iter().fold(Parity::Even, |a, b| a ^ b);
                ck.record("T[k] parity vs XOR of component oracles", xor, got, None);
            }
            Lemma::SRound | Lemma::SwTheorem | Lemma::WideRows => {
                for (keys, &s) in draw.s_keys.iter().zip(s_values) {
                    let name = format!("sround{s}");
                    let got = o.parity(&name, || {
                        Pipeline::s_round(keys.iter().map(|k| k.entries().to_vec()).collect())
                    })?;
                    let pred = match lemma {
                        Lemma::SRound => parity::parity_s_round(spec, keys)?.parity,
                        _ => Parity::Even,
                    };
                    ck.record(&format!("T_s parity, s = {s}"), pred, got, Some(keys));
                }
            }
            Lemma::FullPermutations => {
                for (keys, &s) in draw.s_keys.iter().zip(s_values) {
                    let v = parity::closure_verdict(spec, Family::SRound { s })?;
                    if v.verdict != ClosureVerdict::NotAGroup {
                        continue;
                    }
                    let name = format!("sround{s}");
                    let got = o.parity(&name, || {
                        Pipeline::s_round(keys.iter().map(|k| k.entries().to_vec()).collect())
                    })?;
                    ck.record(
                        &format!("member of a non-closed family is odd, s = {s}"),
                        Parity::Odd,
                        got,
                        Some(keys),
                    );
                }
            }
            Lemma::Cycles => check_cycles(&mut ck, &mut o, draw)?,
        }
    }
    Ok(())
}

/// Oracle permutation for a cycle-count component, acting on the same
/// coordinates as [`parity::component_cycle_counts`].
pub fn component_oracle(
    spec: &CipherSpec,
    component: CountComponent,
    key: Option<&StateMatrix>,
    cap: u64,
) -> Result<DensePermutation> {
    let f = spec.field();
    let (m, n) = (spec.shape().m(), spec.shape().n());
    let shape = spec.shape();
    let single = |g: &(dyn Fn(&mut [Elem]) + Sync)| -> Result<DensePermutation> {
        materialize(shape, cap, |x, y| {
            y.copy_from_slice(x);
            g(y);
        })
    };
    match component {
        CountComponent::Inversion => single(&|y: &mut [Elem]| {
            if !y[0].is_zero() {
                y[0] = f.inv_nonzero(y[0]);
            }
        }),
        CountComponent::MultByA => {
            let (a, _) = spec.global_sbox().ok_or(Error::PerPositionMode)?;
            single(&|y: &mut [Elem]| y[0] = f.mul(a, y[0]))
        }
        CountComponent::RowShift => {
            let c0 = spec.shifts()[0];
            single(&|y: &mut [Elem]| y[..n].rotate_right(c0))
        }
        CountComponent::Rho => {
            let mix = spec.mix();
            single(&|y: &mut [Elem]| {
                let x: Vec<Elem> = (0..m).map(|i| y[i * n]).collect();
                let v = mix.mul_vec(f, &x);
                for i in 0..m {
                    y[i * n] = v[i];
                }
            })
        }
        CountComponent::Sigma => {
            let zero = shape.zero();
            let k = key.unwrap_or(&zero).entries().to_vec();
            materialize_pipeline(spec, &Pipeline::single(Op::Sigma(k)), cap)
        }
    }
}

/// Closed-form cycle types against the oracle's.
fn check_cycles(ck: &mut Checker<'_>, o: &mut Oracles<'_>, draw: &Draw) -> Result<()> {
    let spec = ck.spec;
    let f = spec.field();
    let (a, _) = spec.global_sbox().expect("sweep uses global S-boxes");
    let cap = o.cap;
    let key = Some(&draw.key);
    let inv = component_oracle(spec, CountComponent::Inversion, key, cap)?;
    let mul = component_oracle(spec, CountComponent::MultByA, key, cap)?;
    let row = component_oracle(spec, CountComponent::RowShift, key, cap)?;
    let col = component_oracle(spec, CountComponent::Rho, key, cap)?;
    let sigma = o
        .get("sigma", || {
            Pipeline::single(Op::Sigma(draw.key.entries().to_vec()))
        })?
        .clone();

    let cases = [
        (CountComponent::Inversion, &inv),
        (CountComponent::MultByA, &mul),
        (CountComponent::RowShift, &row),
        (CountComponent::Rho, &col),
        (CountComponent::Sigma, &sigma),
    ];
    for (component, perm) in cases {
        let rep = parity::component_cycle_counts(spec, component, Some(&draw.key))?;
        let oracle = big_type(perm);
        let label = format!("{component:?} cycle type");
        ck.record(
            &label,
            fmt_type(&rep.cycle_type()),
            fmt_type(&oracle),
            Some(std::slice::from_ref(&draw.key)),
        );
        ck.record(
            &format!("{component:?} points"),
            rep.points(),
            BigUint::from(perm.size()),
            None,
        );
        if let Some(false) = rep.identities_hold {
            ck.record(
                &format!("{component:?} divisor-sum identity"),
                "true",
                "false",
                None,
            );
        }
        if let (Some(published), Some(applicable)) =
            (&rep.published_value, rep.published_formula_applicable)
        {
            // Published closed forms count the cycles of the nontrivial length.
            let length = match component {
                CountComponent::Inversion => 2,
                CountComponent::MultByA => f.mult_order(a)?,
                CountComponent::Rho => parity::mix_order(spec)?.try_into().unwrap_or(0),
                _ => continue,
            };
            let got = oracle.get(&length).cloned().unwrap_or_default();
            let nontrivial = length > 1;
            if applicable && nontrivial {
                ck.record(
                    &format!("{component:?} published count"),
                    published,
                    &got,
                    None,
                );
            } else if nontrivial && &got != published {
                let t = ck.out.tallies.entry(ck.lemma).or_default();
                t.published_literal_disagreements += 1;
                if ck.out.literal.len() < MAX_LITERAL_EXAMPLES {
                    let w = ck.witness(
                        &format!("{component:?} published count"),
                        published.to_string(),
                        got.to_string(),
                        None,
                    );
                    ck.out.literal.push(w);
                }
            }
        }
    }
    Ok(())
}

fn run_cell(lemmas: &[Lemma], grid: &Grid, cell: Cell) -> Result<CellOutcome> {
    let field = Arc::new(make_field(cell.p, cell.r, None)?);
    let mut out = CellOutcome::default();
    for draw_idx in 0..grid.draws {
        let mut rng = cell.rng(grid.seed, draw_idx);
        let draw = random_draw(&field, cell, &grid.s, &mut rng)?;
        check_draw(
            lemmas,
            cell,
            draw_idx,
            &draw,
            &grid.s,
            grid.max_states,
            &mut out,
        )?;
        out.draws += 1;
    }
    Ok(out)
}

/// Runs the listed lemma checks over every enumerable grid cell.
/// `workers = None` uses the global thread pool.
pub fn verify_lemmas(lemmas: &[Lemma], grid: &Grid, workers: Option<usize>) -> Result<SweepReport> {
    if grid.s.iter().any(|&s| s == 0) {
        return Err(Error::invalid("grid.s", "every s must be at least 1"));
    }
    let cells = grid.cells();
    let runnable: Vec<Cell> = cells
        .iter()
        .filter(|(c, ok)| *ok && lemmas.iter().any(|l| l.applies(c.p, c.r, c.m, c.n)))
        .map(|(c, _)| *c)
        .collect();
    let skipped: Vec<Cell> = cells
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(c, _)| *c)
        .collect();
    let work = || -> Result<Vec<CellOutcome>> {
        runnable
            .par_iter()
            .map(|&c| run_cell(lemmas, grid, c))
            .collect()
    };
    let outcomes = match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::invalid("workers", e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    let mut tallies: BTreeMap<Lemma, LemmaTally> =
        lemmas.iter().map(|&l| (l, LemmaTally::default())).collect();
    let mut mismatches = Vec::new();
    let mut literal = Vec::new();
    let mut draws = 0;
    for o in outcomes {
        draws += o.draws;
        for (l, t) in o.tallies {
            let e = tallies.entry(l).or_default();
            e.checks += t.checks;
            e.mismatches += t.mismatches;
            e.published_literal_disagreements += t.published_literal_disagreements;
        }
        mismatches.extend(o.mismatches);
        for w in o.literal {
            if literal.len() < MAX_LITERAL_EXAMPLES * lemmas.len() {
                literal.push(w);
            }
        }
    }
    Ok(SweepReport {
        lemmas: lemmas.to_vec(),
        grid: grid.clone(),
        cells_total: cells.len(),
        cells_run: runnable.len(),
        cells_skipped_too_large: skipped,
        draws_run: draws,
        all_pass: mismatches.is_empty(),
        tallies,
        mismatches,
        published_literal_examples: literal,
    })
}

pub fn verify_lemma(lemma: Lemma, grid: &Grid, workers: Option<usize>) -> Result<SweepReport> {
    verify_lemmas(&[lemma], grid, workers)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> Grid {
        Grid {
            p: vec![2, 3],
            r: vec![1, 2],
            m: vec![1, 2],
            n: vec![1, 2, 3],
            max_states: 1 << 10,
            draws: 3,
            seed: 5,
            s: vec![2, 3],
        }
    }

    #[test]
    fn small_sweep_passes() {
        let rep = verify_lemmas(&Lemma::ALL, &small_grid(), None).unwrap();
        assert!(rep.all_pass, "{:#?}", rep.mismatches);
        assert!(rep.cells_run > 0);
    }

    #[test]
    fn worker_count_does_not_change_the_report() {
        let g = small_grid();
        let a = serde_json::to_string(&verify_lemmas(&Lemma::ALL, &g, Some(1)).unwrap()).unwrap();
        let b = serde_json::to_string(&verify_lemmas(&Lemma::ALL, &g, Some(4)).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn lemma_names_round_trip() {
        for l in Lemma::ALL {
            assert_eq!(l.name().parse::<Lemma>().unwrap(), l);
        }
    }
}
