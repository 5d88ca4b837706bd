//! Irreducible characters of `S_n`: Murnaghan–Nakayama values, hook-length
//! degrees, `Irr^x` / `Irr_{p'}` and centralizer orders.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::factorial;
use crate::error::{Error, Result};
use crate::partition::{partitions, Partition};
use crate::tower::is_p_prime_degree;

/// Cycle lengths (fixed points included), sorted descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn new(mut lengths: Vec<usize>) -> Result<CycleType> {
        if lengths.iter().any(|&l| l == 0) {
            return Err(Error::Parse { pos: 0, msg: "cycle length 0".into() });
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CycleType(lengths))
    }

    pub fn identity(n: usize) -> CycleType {
        CycleType(vec![1; n])
    }

    pub fn lengths(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().filter(|&&l| l == 1).count()
    }

    /// Element order (lcm of the cycle lengths).
    pub fn order(&self) -> usize {
        self.0.iter().fold(1, |acc, &l| num_integer::lcm(acc, l))
    }

    pub fn multiplicity(&self, len: usize) -> usize {
        self.0.iter().filter(|&&l| l == len).count()
    }

    /// Union of two disjoint-support types.
    pub fn join(&self, other: &CycleType) -> CycleType {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        CycleType::new(v).expect("lengths already positive")
    }

    pub fn as_partition(&self) -> Partition {
        Partition::from_unsorted(self.0.clone())
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for CycleType {
    type Err = Error;

    fn from_str(text: &str) -> Result<CycleType> {
        if text.trim().is_empty() {
            return Ok(CycleType(Vec::new()));
        }
        let mut out = Vec::new();
        let mut pos = 0;
        for token in text.split(',') {
            let t = token.trim();
            let v: usize = t.parse().map_err(|_| Error::Parse { pos, msg: format!("malformed token {t:?}") })?;
            if v == 0 {
                return Err(Error::Parse { pos, msg: "cycle length 0".into() });
            }
            out.push(v);
            pos += token.len() + 1;
        }
        CycleType::new(out)
    }
}

impl From<CycleType> for String {
    fn from(t: CycleType) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for CycleType {
    type Error = Error;

    fn try_from(s: String) -> Result<CycleType> {
        s.parse()
    }
}

/// Murnaghan–Nakayama evaluator for a fixed sequence of cycle lengths,
/// memoized on (partition, number of cycles consumed).
pub struct MnEvaluator {
    cycles: Vec<usize>,
    memo: HashMap<(Vec<usize>, usize), BigInt>,
}

impl MnEvaluator {
    /// Cycles are consumed largest first.
    pub fn new(t: &CycleType) -> MnEvaluator {
        MnEvaluator { cycles: t.0.clone(), memo: HashMap::new() }
    }

    /// Cycles consumed in the given order.
    pub fn with_order(cycles: Vec<usize>) -> MnEvaluator {
        MnEvaluator { cycles, memo: HashMap::new() }
    }

    pub fn value(&mut self, lambda: &Partition) -> Result<BigInt> {
        let total: usize = self.cycles.iter().sum();
        if total != lambda.size() {
            return Err(Error::SizeMismatch { partition: lambda.size(), cycle_type: total });
        }
        Ok(self.eval(lambda.parts().to_vec(), 0))
    }

    fn eval(&mut self, parts: Vec<usize>, idx: usize) -> BigInt {
        if idx == self.cycles.len() {
            return BigInt::one();
        }
        if parts.len() <= 1 {
            return BigInt::one();
        }
        let key = (parts, idx);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let parts = &key.0;
        let q = self.cycles[idx];
        let m = parts.len();
        // Beta-numbers in decreasing order.
        let beta: Vec<usize> = parts.iter().enumerate().map(|(i, &l)| l + m - 1 - i).collect();
        let mut total = BigInt::zero();
        for (i, &b) in beta.iter().enumerate() {
            if b < q || beta.contains(&(b - q)) {
                continue;
            }
            let target = b - q;
            let between = beta.iter().filter(|&&c| c > target && c < b).count();
            let mut moved = beta.clone();
            moved[i] = target;
            moved.sort_unstable_by(|x, y| y.cmp(x));
            let next: Vec<usize> = moved
                .iter()
                .enumerate()
                .map(|(j, &c)| c + j + 1 - m)
                .filter(|&l| l > 0)
                .collect();
            let v = self.eval(next, idx + 1);
            if between % 2 == 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        self.memo.insert(key.clone(), total.clone());
        total
    }
}

/// `χ^λ` at an element of cycle type `t`.
pub fn mn_value(lambda: &Partition, t: &CycleType) -> Result<BigInt> {
    MnEvaluator::new(t).value(lambda)
}

/// `n!/H(λ)`.
pub fn degree(lambda: &Partition) -> BigUint {
    factorial(lambda.size()) / lambda.hook_product()
}

/// `∏ ℓ^{m_ℓ} m_ℓ!`.
pub fn centralizer_order(t: &CycleType) -> BigUint {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &l in &t.0 {
        *counts.entry(l).or_default() += 1;
    }
    counts
        .iter()
        .fold(BigUint::one(), |acc, (&l, &m)| acc * BigUint::from(l).pow(m as u32) * factorial(m))
}

/// Values of every `χ^λ`, `λ ⊢ n`, at `t`, in [`partitions`] order.
pub fn column(t: &CycleType) -> Vec<(Partition, BigInt)> {
    let parts = partitions(t.n());
    parts
        .into_par_iter()
        .map_init(
            || MnEvaluator::new(t),
            |ev, l| {
                let v = ev.value(&l).expect("sizes agree");
                (l, v)
            },
        )
        .collect()
}

/// `Irr^x(S_n)`: partitions whose character does not vanish at `t`.
pub fn irr_x(t: &CycleType) -> Vec<Partition> {
    column(t).into_iter().filter(|(_, v)| !v.is_zero()).map(|(l, _)| l).collect()
}

/// `Irr_{p'}(S_n)`.
pub fn irr_p_prime(n: usize, p: usize) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    for l in partitions(n) {
        if is_p_prime_degree(&l, p)? {
            out.push(l);
        }
    }
    Ok(out)
}
