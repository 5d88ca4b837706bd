//! The twelve end-to-end checks run by `pickychar suite` and the
//! `acceptance` test target.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::nu_p_big;
use crate::bijection::{gamma_picky, gamma_reduction, inject_sign_fault, linear_sign_counts, two_part_profile, verify, Pairing};
use crate::characters::{centralizer_order, column, degree, irr_p_prime, irr_x, mn_value, CycleType};
use crate::error::Result;
use crate::local::{irr_local, irr_local_degree_counts, LocalChar, PhiChar};
use crate::partition::{gamma, partitions, tau, Partition};
use crate::perm::Permutation;
use crate::subnormalizer::{all_two_elements, random_two_element, sub_bruteforce, sub_shape_2};
use crate::sylow::{
    classify_picky, element_in_canonical, invariant_block_structure_count, p_adic_element, p_element_types,
    sylow_count_containing, PickyType,
};

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "degree of (4,3,1)"),
    (2, "odd-degree character count"),
    (3, "hook and double-hook classification"),
    (4, "S_8 Type II value data"),
    (5, "column orthogonality"),
    (6, "picky test against block structures"),
    (7, "subnormalizer shape against brute force"),
    (8, "local character table completeness"),
    (9, "subnormalizer reduction pairings"),
    (10, "assembled picky pairings"),
    (11, "normalizer character values"),
    (12, "2-part profile and linear sign counts"),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Caps every family's `n` bound (and `2^k` for the power families).
    pub max_n: Option<usize>,
    pub primes: Vec<usize>,
    pub seed: u64,
    /// Random 2-elements per degree in the large subnormalizer check.
    pub random_samples: usize,
    /// Flip one stored sign in every pairing before verification.
    pub inject_fault: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_n: None, primes: vec![2, 3, 5, 7], seed: 0, random_samples: 50, inject_fault: false }
    }
}

impl SuiteConfig {
    fn cap(&self, n: usize) -> usize {
        self.max_n.map_or(n, |m| m.min(n))
    }

    fn primes_in(&self, wanted: &[usize]) -> Vec<usize> {
        wanted.iter().copied().filter(|p| self.primes.contains(p)).collect()
    }
}

/// Outcome of one criterion. Failures keep the first few witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    pub pass: bool,
    pub checked: usize,
    pub failed: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub millis: u64,
}

const WITNESS_LIMIT: usize = 10;

#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self, id: u8, start: Instant) -> CriterionResult {
        let title = CRITERIA[id as usize - 1].1.to_string();
        let failed = self.failures.len();
        let mut failures = self.failures;
        failures.truncate(WITNESS_LIMIT);
        CriterionResult {
            id,
            title,
            pass: failed == 0,
            checked: self.checked,
            failed,
            failures,
            notes: self.notes,
            millis: start.elapsed().as_millis() as u64,
        }
    }
}

pub fn run(id: u8, cfg: &SuiteConfig) -> Result<CriterionResult> {
    let start = Instant::now();
    let mut t = Tally::default();
    match id {
        1 => degree_example(&mut t)?,
        2 => odd_degree_counts(&mut t, cfg)?,
        3 => hook_classification(&mut t, cfg)?,
        4 => type_ii_s8(&mut t, cfg)?,
        5 => orthogonality(&mut t, cfg)?,
        6 => picky_oracle(&mut t, cfg)?,
        7 => subnormalizer_oracle(&mut t, cfg)?,
        8 => local_completeness(&mut t, cfg)?,
        9 => reduction_pairings(&mut t, cfg)?,
        10 => picky_pairings(&mut t, cfg)?,
        11 => normalizer_values(&mut t, cfg)?,
        12 => two_part_and_signs(&mut t, cfg)?,
        _ => return Err(crate::Error::OutOfRange(format!("no criterion {id}"))),
    }
    Ok(t.finish(id, start))
}

/// All criteria, run in parallel and returned in id order.
pub fn run_all(cfg: &SuiteConfig) -> Result<Vec<CriterionResult>> {
    CRITERIA.par_iter().map(|&(id, _)| run(id, cfg)).collect()
}

fn part(v: &[usize]) -> Partition {
    Partition::new(v.to_vec()).expect("valid literal")
}

fn degree_example(t: &mut Tally) -> Result<()> {
    let d = degree(&part(&[4, 3, 1]));
    t.check(d == BigUint::from(70u32), || format!("degree((4,3,1)) = {d}"));
    Ok(())
}

fn odd_degree_counts(t: &mut Tally, cfg: &SuiteConfig) -> Result<()> {
    for n in 1..=cfg.cap(14) {
        let got = irr_p_prime(n, 2)?.len();
        let exp: u32 = (0..usize::BITS).filter(|i| n >> i & 1 == 1).sum();
        let want = 1usize << exp;
        t.check(got == want, || format!("n = {n}: {got} odd-degree characters, expected {want}"));
    }
    Ok(())
}

fn hook_classification(t: &mut Tally, cfg: &SuiteConfig) -> Result<()> {
    for k in 0..=4u32 {
        let n = 1usize << k;
        if n > cfg.cap(16) {
            break;
        }
        let odd: BTreeSet<Partition> = irr_p_prime(n, 2)?.into_iter().collect();
        let hooks: BTreeSet<Partition> = (0..n).map(|a| tau(a, k)).collect::<Result<_>>()?;
        t.check(odd == hooks, || format!("k = {k}: odd-degree characters are not the hooks"));

        let half = n / 2;
        let doubles: BTreeSet<Partition> = partitions(n)
            .into_iter()
            .filter(|l| half > 0 && l.cells().filter(|&c| l.hook_length(c).ok() == Some(half)).count() >= 2)
            .collect();
        let mut gammas = BTreeSet::new();
        if k >= 2 {
            for a in 0..half {
                for b in a + 1..half {
                    gammas.insert(gamma(a, b, k)?);
                }
            }
        }
        t.check(doubles == gammas, || format!("k = {k}: {} double-hook partitions, {} of gamma form", doubles.len(), gammas.len()));
        for l in &gammas {
            let v = nu_p_big(&degree(l), 2);
            t.check(v == 1, || format!("({l}) has nu_2 = {v}"));
        }
    }
    Ok(())
}

fn type_ii_s8(t: &mut Tally, cfg: &SuiteConfig) -> Result<()> {
    if cfg.cap(8) < 8 {
        t.note("skipped: n = 8 is above max_n");
        return Ok(());
    }
    let x = CycleType::new(vec![4, 2, 1, 1])?;
    let got: BTreeSet<Partition> = irr_x(&x).into_iter().collect();
    let odd: BTreeSet<Partition> = irr_p_prime(8, 2)?.into_iter().collect();
    let mut want = odd.clone();
    want.insert(part(&[4, 2, 1, 1]));
    want.insert(part(&[3, 3, 2]));
    t.check(got == want, || format!("Irr^x has {} members, expected {}", got.len(), want.len()));
    let col: BTreeMap<Partition, BigInt> = column(&x).into_iter().collect();
    t.check(col[&part(&[4, 2, 1, 1])] == BigInt::from(2), || format!("chi^(4,2,1,1)(x) = {}", col[&part(&[4, 2, 1, 1])]));
    t.check(col[&part(&[3, 3, 2])] == BigInt::from(-2), || format!("chi^(3,3,2)(x) = {}", col[&part(&[3, 3, 2])]));
    for l in &odd {
        t.check(col[l].abs() == BigInt::one(), || format!("chi^({l})(x) = {}", col[l]));
    }
    Ok(())
}

fn orthogonality(t: &mut Tally, cfg: &SuiteConfig) -> Result<()> {
    for n in 1..=cfg.cap(9) {
        for ty in partitions(n) {
            let ct = CycleType::new(ty.parts().to_vec())?;
            let sum: BigInt = column(&ct).into_iter().map(|(_, v)| &v * &v).sum();
            let c = BigInt::from(centralizer_order(&ct));
            t.check(sum == c, || format!("type {ct}: sum of squares {sum}, centralizer {c}"));
        }
    }
    Ok(())
}

fn picky_oracle(t: &mut Tally, cfg: &SuiteConfig) -> Result<()> {
    let mut sylow_agree = 0usize;
    let mut total = 0usize;
    for p in cfg.primes_in(&[2, 3, 5, 7]) {
        for n in 1..=cfg.cap(9) {
            for ty in p_element_types(n, p) {
                let x = Permutation::from_cycle_type(&ty);
                let picky = classify_picky(&ty, p)? != PickyType::NotPicky;
                let blocks = invariant_block_structure_count(&x, p)?;
                t.check(picky == (blocks == 1), || {
                    format!("p = {p}, type {ty}: classify_picky says {picky}, {blocks} invariant block structures")
                });
                total += 1;
                if picky == (sylow_count_containing(&x, p)? == 1) {
                    sylow_agree += 1;
                }
            }
        }
    }
    t.note(format!("one representative per class; classify_picky agrees with Sylow enumeration on {sylow_agree}/{total}"));
    Ok(())
}

fn subnormalizer_oracle(t: &mut Tally, cfg: &SuiteConfig) -> Result<()> {
    let check = |x: &Permutation| -> Result<Option<String>> {
        let a = sub_shape_2(x)?.order();
        let b = sub_bruteforce(x, 2)?.order();
        Ok((a != b).then(|| format!("{x} in S_{}: shape order {a}, brute force {b}", x.degree())))
    };
    for n in 4..=cfg.cap(8) {
        let xs = all_two_elements(n);
        let out: Vec<Option<String>> = xs.par_iter().map(check).collect::<Result<_>>()?;
        for o in out {
            t.check(o.is_none(), || o.clone().unwrap_or_default());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for n in 9..=cfg.cap(10) {
        let xs: Vec<Permutation> = (0..cfg.random_samples).map(|_| random_two_element(n, &mut rng)).collect();
        let out: Vec<Option<String>> = xs.par_iter().map(check).collect::<Result<_>>()?;
        for o in out {
            t.check(o.is_none(), || o.clone().unwrap_or_default());
        }
    }
    Ok(())
}

fn local_completeness(t: &mut Tally, cfg: &SuiteConfig) -> Result<()> {
    for k in 0..=4u32 {
        if 1usize << k > cfg.cap(16) {
            break;
        }
        let irr = irr_local(k)?;
        let sq: BigUint = irr.iter().map(|c| c.degree().pow(2)).sum();
        let want = BigUint::one() << ((1usize << k) - 1);
        t.check(sq == want, || format!("k = {k}: sum of squared degrees {sq}, expected {want}"));
        let linear = irr.iter().filter(|c| c.degree().is_one()).count();
        t.check(linear == 1 << k, || format!("k = {k}: {linear} linear characters"));
        let distinct: BTreeSet<&LocalChar> = irr.iter().collect();
        t.check(distinct.len() == irr.len(), || format!("k = {k}: repeated labels"));
    }
    for k in 3..=5u32 {
        if 1usize << k > cfg.cap(32) {
            break;
        }
        let degrees: BTreeSet<BigUint> = irr_local_degree_counts(k)?.into_keys().collect();
        let top = (1u32 << (k - 2)) + (1 << (k - 3)) - 1;
        let want: BTreeSet<BigUint> = (0..=top).map(|j| BigUint::from(2u32).pow(j)).collect();
        t.check(degrees == want, || format!("k = {k}: degree set {degrees:?}"));
    }
    Ok(())
}

fn check_pairing(t: &mut Tally, pairing: Result<Pairing>, what: &str, cfg: &SuiteConfig) {
    match pairing {
        Ok(mut p) => {
            if cfg.inject_fault {
                inject_sign_fault(&mut p);
            }
            let r = verify(&p);
            let failures: Vec<String> = r
                .failures()
                .iter()
                .map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()))
                .collect();
            t.check(failures.is_empty(), || format!("{what}: {}", failures.join("; ")));
        }
        Err(e) => t.check(false, || format!("{what}: {e}")),
    }
}

fn reduction_pairings(t: &mut Tally, cfg: &SuiteConfig) -> Result<()> {
    let cases: Vec<(usize, CycleType)> =
        (1..=cfg.cap(10)).flat_map(|n| p_element_types(n, 2).into_iter().map(move |ty| (n, ty))).collect();
    let out: Vec<(String, Result<Pairing>)> = cases
        .par_iter()
        .map(|(n, ty)| {
            let x = element_in_canonical(ty, 2);
            (format!("S_{n}, type {ty}"), x.and_then(|x| gamma_reduction(&x)))
        })
        .collect();
    for (what, p) in out {
        check_pairing(t, p, &what, cfg);
    }
    Ok(())
}

fn picky_pairings(t: &mut Tally, cfg: &SuiteConfig) -> Result<()> {
    let cases: Vec<(usize, usize)> =
        cfg.primes_in(&[2, 3, 5, 7]).into_iter().flat_map(|p| (1..=cfg.cap(12)).map(move |n| (n, p))).collect();
    let out: Vec<(usize, usize, Result<Pairing>)> = cases.par_iter().map(|&(n, p)| (n, p, gamma_picky(n, p))).collect();
    for (n, p, pairing) in out {
        // Every picky class must be among the tracked elements.
        if let Ok(pr) = &pairing {
            let tracked: BTreeSet<CycleType> = pr.elements.iter().map(|e| e.global.cycle_type()).collect();
            for ty in p_element_types(n, p) {
                if classify_picky(&ty, p)? != PickyType::NotPicky {
                    t.check(tracked.contains(&ty), || format!("n = {n}, p = {p}: picky class {ty} is not tracked"));
                }
            }
        }
        check_pairing(t, pairing, &format!("n = {n}, p = {p}"), cfg);
    }
    Ok(())
}

fn normalizer_values(t: &mut Tally, cfg: &SuiteConfig) -> Result<()> {
    for p in cfg.primes_in(&[3, 5]) {
        for n in 1..=cfg.cap(10) {
            let ty = p_adic_element(n, p)?;
            for l in irr_p_prime(n, p)? {
                let phi = PhiChar::new(&l, p)?.value_at_adic().abs();
                let chi = mn_value(&l, &ty)?.abs();
                t.check(phi == chi, || format!("p = {p}, ({l}): |Phi| = {phi}, |chi| = {chi}"));
            }
        }
    }
    Ok(())
}

fn two_part_and_signs(t: &mut Tally, cfg: &SuiteConfig) -> Result<()> {
    for k in 3..=4u32 {
        if 1usize << k > cfg.cap(16) {
            t.note(format!("k = {k} skipped: above max_n"));
            continue;
        }
        let prof = two_part_profile(k)?;
        let want: BTreeSet<u64> = (0..=k - 2).map(|j| 1u64 << j).collect();
        t.check(prof.two_parts == want, || format!("k = {k}: 2-parts {:?}", prof.two_parts));
        let quarter = 1usize << (k - 2);
        t.check(prof.top_count == quarter, || {
            format!("k = {k}: {} characters with 2-part {}, expected {quarter}", prof.top_count, prof.top)
        });
        let counts = linear_sign_counts(k)?;
        for a in [1i8, -1] {
            for b in [1i8, -1] {
                let c = counts.get(&(a, b)).copied().unwrap_or(0);
                t.check(c == quarter, || format!("k = {k}: sign pair ({a},{b}) hit {c} times, expected {quarter}"));
            }
        }
    }
    Ok(())
}

pub fn all_passed(results: &[CriterionResult]) -> bool {
    results.iter().all(|r| r.pass)
}
