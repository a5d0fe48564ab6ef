//! Groups generated by round functions, invariant subspaces of α, and
//! closure witnesses.

pub mod chain;
pub mod subspace;

use std::collections::HashMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cipher::{random_state, CipherSpec, Pipeline};
use crate::error::{Error, Result};
use crate::parity::{closure_verdict, ser_big, ClosureVerdict, Family};
use crate::perm::{materialize_pipeline, DensePermutation, Parity};
use crate::state::{max_states, StateMatrix};

pub use chain::{factorial, ChainMethod, Giant, StabilizerChain};
pub use subspace::{
    alpha_invariant_subspace_verdict, alpha_orbit, exhaustive_invariant_subspace, gcd_condition,
    InvariantSubspaceVerdict, OrbitReport, SubspaceBasis,
};

/// Largest degree accepted by [`build_group`].
pub const DEFAULT_GROUP_CAP: u64 = 1 << 14;

/// Attempts at finding a prime cycle before falling back to Schreier–Sims.
const GIANT_TRIES: usize = 200;

/// Stabilizer chain for ⟨generators⟩. A_N and S_N are recognized directly
/// when the group is primitive and holds a suitable prime cycle; every
/// other group goes through Schreier–Sims.
pub fn build_group(generators: &[DensePermutation], cap: u64) -> Result<StabilizerChain> {
    let n = generators.first().map_or(0, |g| g.size());
    if let Some(g) = generators.iter().find(|g| g.size() != n) {
        return Err(Error::SizeMismatch(n, g.size()));
    }
    if n as u64 > cap {
        return Err(Error::too_large(
            "permutation degree",
            BigUint::from(n),
            cap,
        ));
    }
    if let Some((kind, _)) = chain::recognize_giant(generators, 0, GIANT_TRIES) {
        return Ok(StabilizerChain::giant(n, kind));
    }
    StabilizerChain::schreier_sims(generators, 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupVerdict {
    Alternating,
    Symmetric,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityCensus {
    pub even: usize,
    pub odd: usize,
}

impl ParityCensus {
    fn of(perms: &[DensePermutation]) -> ParityCensus {
        let odd = perms.iter().filter(|g| g.parity().is_odd()).count();
        ParityCensus {
            even: perms.len() - odd,
            odd,
        }
    }
}

/// A word in the generators with a power that is a single ℓ-cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShortCycleEvidence {
    pub word: Vec<usize>,
    pub cycle_length: u64,
    pub degree: u64,
    /// 2 ≤ ℓ ≤ (N − ℓ)!
    pub bound_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremHypotheses {
    pub r_greater_than_4: bool,
    pub n_greater_than_1: bool,
    pub alpha_irreducible: bool,
    pub gcd_condition: bool,
    pub all_hold: bool,
    pub note: String,
}

pub fn theorem_hypotheses(spec: &CipherSpec) -> Result<TheoremHypotheses> {
    let r_gt_4 = spec.field().r() > 4;
    let n_gt_1 = spec.shape().n() > 1;
    let irreducible = alpha_invariant_subspace_verdict(spec, false)?.irreducible;
    Ok(TheoremHypotheses {
        r_greater_than_4: r_gt_4,
        n_greater_than_1: n_gt_1,
        alpha_irreducible: irreducible,
        gcd_condition: gcd_condition(spec),
        all_hold: r_gt_4 && n_gt_1 && irreducible,
        note: "Theorems primthm and mainthm need r > 4, n > 1 and no proper nontrivial \
               alpha-invariant subspace; the cycle condition of mainthm is read with group degree \
               N = p^(rmn)"
            .to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupClassification {
    #[serde(serialize_with = "ser_big")]
    pub degree: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub order: BigUint,
    pub verdict: GroupVerdict,
    pub method: ChainMethod,
    pub base_length: usize,
    pub generators: usize,
    pub sampled_keys: usize,
    pub seed: u64,
    pub parity_census: ParityCensus,
    pub primitive: Option<bool>,
    pub short_cycle: Option<ShortCycleEvidence>,
    pub hypotheses: TheoremHypotheses,
}

/// Degrees up to which the block-system primitivity check is run.
const PRIMITIVITY_LIMIT: usize = 1 << 12;

fn round_perm(spec: &CipherSpec, k: &StateMatrix, cap: u64) -> Result<DensePermutation> {
    materialize_pipeline(spec, &Pipeline::round(k.entries().to_vec()), cap)
}

fn group_cap(spec: &CipherSpec, cap: u64) -> Result<u64> {
    let n = spec.shape().enumerable_size(cap.min(max_states()))?;
    Ok(n)
}

/// T[0], T[e_t] for every unit key, then `samples` seeded random T[k].
pub fn round_generators(
    spec: &CipherSpec,
    samples: usize,
    seed: u64,
    cap: u64,
) -> Result<Vec<DensePermutation>> {
    group_cap(spec, cap)?;
    let shape = spec.shape();
    let units = shape.bit_degree() as usize;
    let mut keys = vec![shape.zero()];
    keys.extend((0..units).map(|t| spec.unit_key(t)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    keys.extend((0..samples).map(|_| random_state(shape, &mut rng)));
    keys.iter().map(|k| round_perm(spec, k, cap)).collect()
}

fn verdict_of(order: &BigUint, degree: usize, census: &ParityCensus) -> GroupVerdict {
    let full = factorial(degree);
    if *order == full {
        GroupVerdict::Symmetric
    } else if order * 2u32 == full && census.odd == 0 {
        GroupVerdict::Alternating
    } else {
        GroupVerdict::Other
    }
}

fn rodgers_bound(len: u64, degree: u64) -> bool {
    if len < 2 || len > degree {
        return false;
    }
    let mut f = 1u64;
    for k in 2..=(degree - len) {
        f = f.saturating_mul(k);
        if f >= len {
            return true;
        }
    }
    f >= len
}

/// Random words of length ≤ 6 in the generators; the first whose cycle type
/// has a length ℓ occurring once and coprime to all other lengths.
fn short_cycle_search(
    gens: &[DensePermutation],
    seed: u64,
    words: usize,
) -> Option<ShortCycleEvidence> {
    let n = gens.first()?.size() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5851_f42d);
    let mut best: Option<ShortCycleEvidence> = None;
    for w in 0..words {
        let word: Vec<usize> = if w < gens.len() {
            vec![w]
        } else {
            let len = rng.gen_range(2..=6);
            (0..len).map(|_| rng.gen_range(0..gens.len())).collect()
        };
        let mut g = gens[word[0]].clone();
        for &i in &word[1..] {
            g = g.then(&gens[i]);
        }
        let ct = g.cycle_type();
        for (&len, &count) in &ct {
            if len < 2 || count != 1 {
                continue;
            }
            let others = ct
                .keys()
                .filter(|&&l| l != len)
                .fold(1u64, |acc, &l| num_integer::lcm(acc, l as u64));
            if num_integer::gcd(others, len as u64) != 1 {
                continue;
            }
            let ev = ShortCycleEvidence {
                word: word.clone(),
                cycle_length: len as u64,
                degree: n,
                bound_holds: rodgers_bound(len as u64, n),
            };
            if ev.bound_holds {
                return Some(ev);
            }
            if best
                .as_ref()
                .map_or(true, |b| ev.cycle_length < b.cycle_length)
            {
                best = Some(ev);
            }
        }
    }
    best
}

/// G_τ = ⟨T[k]⟩ from the canonical key set plus `samples` seeded keys.
pub fn classify_group(spec: &CipherSpec, samples: usize, seed: u64) -> Result<GroupClassification> {
    let (c, _, _) = classify_with_chain(spec, samples, seed, DEFAULT_GROUP_CAP)?;
    Ok(c)
}

pub fn classify_with_chain(
    spec: &CipherSpec,
    samples: usize,
    seed: u64,
    cap: u64,
) -> Result<(GroupClassification, StabilizerChain, Vec<DensePermutation>)> {
    let gens = round_generators(spec, samples, seed, cap)?;
    let chain = build_group(&gens, cap)?;
    let degree = gens[0].size();
    let order = chain.order();
    let census = ParityCensus::of(&gens);
    let verdict = verdict_of(&order, degree, &census);
    let primitive = (degree <= PRIMITIVITY_LIMIT).then(|| chain::is_primitive(degree, &gens));
    let report = GroupClassification {
        degree: BigUint::from(degree),
        order,
        verdict,
        method: chain.method(),
        base_length: chain.base().len(),
        generators: gens.len(),
        sampled_keys: samples,
        seed,
        parity_census: census,
        primitive,
        short_cycle: short_cycle_search(&gens, seed, 256),
        hypotheses: theorem_hypotheses(spec)?,
    };
    Ok((report, chain, gens))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SRoundGroupReport {
    pub s: usize,
    #[serde(serialize_with = "ser_big")]
    pub degree: BigUint,
    pub group: GroupClassification,
    #[serde(serialize_with = "ser_big")]
    pub s_fold_order: BigUint,
    pub s_fold_verdict: GroupVerdict,
    pub s_fold_generators: usize,
    #[serde(serialize_with = "ser_big")]
    pub index: BigUint,
    pub containment_holds: bool,
    pub normality_tests: usize,
    pub normality_failures: usize,
    #[serde(serialize_with = "crate::parity::ser_big_opt")]
    pub expected_s_fold_order: Option<BigUint>,
    pub theorem_holds: Option<bool>,
    pub rule: String,
}

/// Number of conjugation tests run by [`s_round_group_relation`].
pub const NORMALITY_TESTS: usize = 100;

/// Compares G_τ with the group of s-fold compositions T[k_s]∘…∘T[k_1].
///
/// The s-fold group is generated exactly by T[0]^s together with the
/// products having a single unit key in one position and zero keys
/// elsewhere; `samples` seeded random products are added on top.
pub fn s_round_group_relation(
    spec: &CipherSpec,
    s: usize,
    samples: usize,
    seed: u64,
) -> Result<SRoundGroupReport> {
    if s == 0 {
        return Err(Error::invalid("s", "must be at least 1"));
    }
    let cap = DEFAULT_GROUP_CAP;
    let (group, g_chain, _) = classify_with_chain(spec, samples, seed, cap)?;
    let shape = spec.shape();
    let t0 = round_perm(spec, &shape.zero(), cap)?;
    let units: Vec<DensePermutation> = (0..shape.bit_degree() as usize)
        .map(|t| round_perm(spec, &spec.unit_key(t), cap))
        .collect::<Result<_>>()?;

    let product = |rounds: &[&DensePermutation]| {
        let mut acc = rounds[0].clone();
        for g in &rounds[1..] {
            acc = acc.then(g);
        }
        acc
    };
    let mut gens = vec![t0.pow(s as u64)];
    for pos in 0..s {
        for u in &units {
            let rounds: Vec<&DensePermutation> =
                (0..s).map(|i| if i == pos { u } else { &t0 }).collect();
            gens.push(product(&rounds));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x2545_f491);
    let random_round = |rng: &mut ChaCha8Rng| round_perm(spec, &random_state(shape, rng), cap);
    for _ in 0..samples {
        let rounds = (0..s)
            .map(|_| random_round(&mut rng))
            .collect::<Result<Vec<_>>>()?;
        gens.push(product(&rounds.iter().collect::<Vec<_>>()));
    }
    let gs_chain = build_group(&gens, cap)?;
    let containment_holds = gens.iter().all(|g| g_chain.contains(g));

    let mut failures = 0;
    for _ in 0..NORMALITY_TESTS {
        let rounds = (0..s)
            .map(|_| random_round(&mut rng))
            .collect::<Result<Vec<_>>>()?;
        let x = product(&rounds.iter().collect::<Vec<_>>());
        let g = random_round(&mut rng)?;
        if !gs_chain.contains(&x.conjugate_by(&g)) {
            failures += 1;
        }
    }

    let degree = t0.size();
    let gs_order = gs_chain.order();
    let gs_verdict = verdict_of(&gs_order, degree, &ParityCensus::of(&gens));
    let full = factorial(degree);
    let (expected, rule) = match group.verdict {
        GroupVerdict::Alternating => (
            Some(&full / 2u32),
            "Theorem groupsgenth (a): G_tau alternating implies every s-fold group is alternating",
        ),
        GroupVerdict::Symmetric if s % 2 == 0 => (
            Some(&full / 2u32),
            "Theorem groupsgenth (b): G_tau symmetric and s even implies the alternating group",
        ),
        GroupVerdict::Symmetric => (
            Some(full.clone()),
            "Theorem groupsgenth (b): G_tau symmetric and s odd implies the symmetric group",
        ),
        GroupVerdict::Other => (
            None,
            "Lemma NormalSubGrp only: G_tau is neither alternating nor symmetric",
        ),
    };
    let theorem_holds = expected.as_ref().map(|e| *e == gs_order);
    Ok(SRoundGroupReport {
        s,
        degree: BigUint::from(degree),
        index: &group.order / &gs_order,
        group,
        s_fold_order: gs_order,
        s_fold_verdict: gs_verdict,
        s_fold_generators: gens.len(),
        containment_holds,
        normality_tests: NORMALITY_TESTS,
        normality_failures: failures,
        expected_s_fold_order: expected,
        theorem_holds,
        rule: rule.to_string(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessMode {
    /// Every member tabulated and compared with the composition.
    Exhaustive,
    /// Composition parity against the common member parity.
    Parity,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosureWitness {
    pub family: Family,
    pub verdict: ClosureVerdict,
    pub rule: String,
    pub mode: WitnessMode,
    /// Keys of the member applied first.
    pub first_keys: Vec<StateMatrix>,
    /// Keys of the member applied second.
    pub second_keys: Vec<StateMatrix>,
    pub composition_parity: Parity,
    pub member_parity_min: Parity,
    pub member_parity_max: Parity,
    #[serde(serialize_with = "ser_big")]
    pub members: BigUint,
    pub members_checked: u64,
    pub composition_in_family: bool,
}

/// Members tabulated at most, for exhaustive mode.
pub const WITNESS_MEMBER_CAP: u64 = 1 << 12;

fn member_pipeline(family: Family, keys: &[StateMatrix]) -> Pipeline {
    match family {
        Family::Round => Pipeline::round(keys[0].entries().to_vec()),
        Family::SRound { .. } => {
            Pipeline::s_round(keys.iter().map(|k| k.entries().to_vec()).collect())
        }
    }
}

fn key_count(family: Family) -> usize {
    match family {
        Family::Round => 1,
        Family::SRound { s } => s + 1,
    }
}

/// Two members whose composition is not a member.
pub fn closure_witness(spec: &CipherSpec, family: Family) -> Result<ClosureWitness> {
    let verdict = closure_verdict(spec, family)?;
    if verdict.verdict != ClosureVerdict::NotAGroup {
        return Err(Error::InconclusiveParity(verdict.reason));
    }
    let family_spec = match family {
        Family::SRound { s } => spec.with_key_schedule(None)?.with_rounds(s)?,
        Family::Round => spec.clone(),
    };
    let spec = &family_spec;
    let shape = spec.shape();
    let nkeys = key_count(family);
    let members = shape.size_big().pow(nkeys as u32);
    let first_keys = vec![shape.zero(); nkeys];
    let mut second_keys = first_keys.clone();
    second_keys[nkeys - 1] = spec.unit_key(0);
    let member_parity = verdict
        .member_parity
        .expect("a NOT-A-GROUP verdict fixes the member parity");

    let state_cap = max_states();
    let enumerable = shape.size().filter(|&n| n <= state_cap);
    let exhaustive = enumerable.is_some_and(|n| {
        crate::arith::checked_pow(n, nkeys as u64)
            .is_some_and(|m| m <= WITNESS_MEMBER_CAP && m.saturating_mul(n) <= 1 << 24)
    });
    if !exhaustive {
        return Ok(ClosureWitness {
            family,
            verdict: verdict.verdict,
            rule: verdict.rule,
            mode: WitnessMode::Parity,
            first_keys,
            second_keys,
            composition_parity: member_parity ^ member_parity,
            member_parity_min: member_parity,
            member_parity_max: member_parity,
            members,
            members_checked: 0,
            composition_in_family: false,
        });
    }

    let n = enumerable.unwrap();
    let count = n.pow(nkeys as u32);
    let mut table: HashMap<Vec<u32>, u64> = HashMap::new();
    let mut parities = Vec::with_capacity(count as usize);
    for idx in 0..count {
        let mut rest = idx;
        let keys: Vec<StateMatrix> = (0..nkeys)
            .map(|_| {
                let k = shape.unrank(rest % n).expect("rank below size");
                rest /= n;
                k
            })
            .collect();
        let perm = materialize_pipeline(spec, &member_pipeline(family, &keys), state_cap)?;
        parities.push(perm.parity());
        table.insert(perm.images().to_vec(), idx);
    }
    let a = materialize_pipeline(spec, &member_pipeline(family, &first_keys), state_cap)?;
    let b = materialize_pipeline(spec, &member_pipeline(family, &second_keys), state_cap)?;
    let comp = a.then(&b);
    let min = parities
        .iter()
        .copied()
        .min_by_key(|p| p.is_odd())
        .unwrap_or(Parity::Even);
    let max = parities
        .iter()
        .copied()
        .max_by_key(|p| p.is_odd())
        .unwrap_or(Parity::Even);
    Ok(ClosureWitness {
        family,
        verdict: verdict.verdict,
        rule: verdict.rule,
        mode: WitnessMode::Exhaustive,
        first_keys,
        second_keys,
        composition_parity: comp.parity(),
        member_parity_min: min,
        member_parity_max: max,
        members,
        members_checked: count,
        composition_in_family: table.contains_key(comp.images()),
    })
}
