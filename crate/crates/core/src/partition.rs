//! Partitions, Young diagrams, rim hooks, and q-cores / q-quotients via
//! beta-numbers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition with weakly decreasing positive parts. Serializes as `"4,3,1"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Partition {
    parts: Vec<usize>,
    size: usize,
}

/// A box of a Young diagram, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

/// A removable rim hook (border strip).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RimHook {
    /// Cells from the top-right end of the strip to its bottom-left end.
    pub cells: Vec<Cell>,
    pub length: usize,
    /// Number of rows occupied minus one.
    pub height: usize,
    /// The cell whose hook is this strip.
    pub corner: Cell,
}

/// First-column hook lengths of a partition padded to `m` rows:
/// `values[i] = λ_{m-i} + i` listed in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaSet {
    pub values: Vec<usize>,
    pub m: usize,
}

impl BetaSet {
    pub fn new(lambda: &Partition, m: usize) -> Result<BetaSet> {
        if m < lambda.len() {
            return Err(Error::OutOfRange(format!(
                "padding {m} shorter than partition length {}",
                lambda.len()
            )));
        }
        let mut values: Vec<usize> = (0..m).map(|i| lambda.part(i + 1) + m - 1 - i).collect();
        values.reverse();
        Ok(BetaSet { values, m })
    }

    pub fn to_partition(&self) -> Partition {
        let mut desc = self.values.clone();
        desc.sort_unstable_by(|a, b| b.cmp(a));
        let parts = desc
            .iter()
            .enumerate()
            .map(|(i, &e)| e + i + 1 - self.m)
            .filter(|&v| v > 0)
            .collect();
        Partition::from_sorted(parts)
    }
}

impl Partition {
    /// Validating constructor. Parts must be positive and weakly decreasing.
    pub fn new(parts: Vec<usize>) -> Result<Partition> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition::from_sorted(parts))
    }

    /// Sorts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition::from_sorted(parts)
    }

    pub(crate) fn from_sorted(parts: Vec<usize>) -> Partition {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]) && parts.iter().all(|&p| p > 0));
        let size = parts.iter().sum();
        Partition { parts, size }
    }

    pub fn empty() -> Partition {
        Partition { parts: Vec::new(), size: 0 }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `λ_i` with 1-based `i`; zero beyond the last row.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.part(1);
        let parts = (1..=width).map(|c| self.parts.iter().filter(|&&p| p >= c).count()).collect();
        Partition::from_sorted(parts)
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.row >= 1 && c.col >= 1 && c.col <= self.part(c.row)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |col| Cell { row: i + 1, col }))
    }

    /// True when the diagram is a single hook `(n-a, 1^a)`.
    pub fn is_hook(&self) -> bool {
        self.parts.iter().skip(1).all(|&p| p == 1)
    }

    pub fn arm(&self, c: Cell) -> usize {
        self.part(c.row) - c.col
    }

    pub fn leg(&self, c: Cell) -> usize {
        self.parts[c.row..].iter().take_while(|&&p| p >= c.col).count()
    }

    pub fn hook_length(&self, c: Cell) -> Result<usize> {
        if !self.contains(c) {
            return Err(Error::CellOutOfDiagram { row: c.row, col: c.col });
        }
        Ok(self.arm(c) + self.leg(c) + 1)
    }

    /// Product of all hook lengths, `H(λ)`.
    pub fn hook_product(&self) -> BigUint {
        self.cells()
            .map(|c| self.arm(c) + self.leg(c) + 1)
            .fold(BigUint::from(1u32), |acc, h| acc * h)
    }

    fn rim_hook_at(&self, corner: Cell) -> RimHook {
        let leg = self.leg(corner);
        let mut cells = Vec::new();
        for r in corner.row..=corner.row + leg {
            let lo = corner.col.max(self.part(r + 1));
            for col in (lo..=self.part(r)).rev() {
                cells.push(Cell { row: r, col });
            }
        }
        RimHook { length: cells.len(), cells, height: leg, corner }
    }

    /// All removable rim hooks of length `q`, ordered by the corner cell
    /// (row first, then column).
    pub fn list_q_hooks(&self, q: usize) -> Vec<RimHook> {
        if q == 0 {
            return Vec::new();
        }
        self.cells()
            .filter(|&c| self.arm(c) + self.leg(c) + 1 == q)
            .map(|c| self.rim_hook_at(c))
            .collect()
    }

    pub fn remove_hook(&self, hook: &RimHook) -> Result<Partition> {
        let genuine = self.contains(hook.corner)
            && self.arm(hook.corner) + self.leg(hook.corner) + 1 == hook.length
            && self.rim_hook_at(hook.corner).cells == hook.cells;
        if !genuine {
            return Err(Error::HookNotInPartition(self.to_string()));
        }
        let mut parts = self.parts.clone();
        for c in &hook.cells {
            parts[c.row - 1] -= 1;
        }
        Ok(Partition::from_unsorted(parts))
    }

    /// Canonical beta-set padding: the least multiple of `q` exceeding the length.
    pub fn canonical_padding(&self, q: usize) -> usize {
        q * ((self.len() + 1).div_ceil(q))
    }

    /// Beads of the abacus with `m` beads, grouped by runner `r = value mod q`;
    /// within each runner the positions `(value - r)/q` are decreasing.
    fn runners(&self, q: usize, m: usize) -> Vec<Vec<usize>> {
        let beta = BetaSet::new(self, m).expect("padding checked by caller");
        let mut runners = vec![Vec::new(); q];
        for &v in beta.values.iter().rev() {
            runners[v % q].push(v / q);
        }
        runners
    }

    pub fn q_core(&self, q: usize) -> Result<Partition> {
        check_q(q)?;
        let m = self.canonical_padding(q);
        let runners = self.runners(q, m);
        let mut gamma: Vec<usize> = runners
            .iter()
            .enumerate()
            .flat_map(|(r, beads)| (0..beads.len()).map(move |s| q * s + r))
            .collect();
        gamma.sort_unstable_by(|a, b| b.cmp(a));
        Ok(BetaSet { values: gamma.into_iter().rev().collect(), m }.to_partition())
    }

    pub fn q_quotient(&self, q: usize) -> Result<Vec<Partition>> {
        check_q(q)?;
        let m = self.canonical_padding(q);
        Ok(self
            .runners(q, m)
            .iter()
            .map(|beads| {
                let mr = beads.len();
                let parts = beads
                    .iter()
                    .enumerate()
                    .map(|(k, &e)| e + k + 1 - mr)
                    .filter(|&v| v > 0)
                    .collect();
                Partition::from_sorted(parts)
            })
            .collect())
    }

    pub fn is_q_core(&self, q: usize) -> bool {
        self.list_q_hooks(q).is_empty()
    }

    /// Inverse of `(q_core, q_quotient)` under the canonical padding convention.
    pub fn from_core_and_quotient(core: &Partition, quotient: &[Partition], q: usize) -> Result<Partition> {
        check_q(q)?;
        if quotient.len() != q {
            return Err(Error::OutOfRange(format!("quotient has {} components, expected {q}", quotient.len())));
        }
        if !core.is_q_core(q) {
            return Err(Error::NotACore(core.to_string(), q));
        }
        let mut m = core.canonical_padding(q);
        let counts = loop {
            let counts: Vec<usize> = core.runners(q, m).iter().map(Vec::len).collect();
            if counts.iter().zip(quotient).all(|(&c, part)| c >= part.len()) {
                break counts;
            }
            m += q;
        };
        let mut values = Vec::with_capacity(m);
        for (r, (&mr, part)) in counts.iter().zip(quotient).enumerate() {
            for k in 1..=mr {
                values.push(q * (part.part(k) + mr - k) + r);
            }
        }
        values.sort_unstable();
        Ok(BetaSet { values, m }.to_partition())
    }

    /// Weight: number of `q`-hooks removed on the way to the core.
    pub fn q_weight(&self, q: usize) -> Result<usize> {
        Ok((self.size - self.q_core(q)?.size) / q)
    }
}

fn check_q(q: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::OutOfRange(format!("q = {q} must be at least 2")));
    }
    Ok(())
}

/// `τ(a,k) = (2^k − a, 1^a)`.
pub fn tau(a: usize, k: u32) -> Result<Partition> {
    let n = 1usize << k;
    if a >= n {
        return Err(Error::OutOfRange(format!("tau({a},{k}) needs a < {n}")));
    }
    let mut parts = vec![n - a];
    parts.extend(std::iter::repeat(1).take(a));
    Ok(Partition::from_sorted(parts))
}

/// `γ(a,b,k) = (2^{k−1} − a, 2^{k−1} − b + 1, 2^a, 1^{b−a−1})`, where `2^a`
/// means `a` parts equal to 2.
pub fn gamma(a: usize, b: usize, k: u32) -> Result<Partition> {
    if k == 0 {
        return Err(Error::OutOfRange("gamma needs k >= 1".into()));
    }
    let h = 1usize << (k - 1);
    if !(a < b && b < h) {
        return Err(Error::OutOfRange(format!("gamma({a},{b},{k}) needs a < b < {h}")));
    }
    let mut parts = vec![h - a, h - b + 1];
    parts.extend(std::iter::repeat(2).take(a));
    parts.extend(std::iter::repeat(1).take(b - a - 1));
    Partition::new(parts)
}

/// All partitions of `n`, in decreasing lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition::from_sorted(cur.clone()));
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"4,3,1"`; the empty string is the empty partition.
    fn from_str(text: &str) -> Result<Partition> {
        if text.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        let mut pos = 0;
        for token in text.split(',') {
            let t = token.trim();
            let v: usize = t.parse().map_err(|_| Error::Parse {
                pos,
                msg: format!("malformed token {t:?}"),
            })?;
            parts.push(v);
            pos += token.len() + 1;
        }
        Partition::new(parts)
    }
}

impl From<Partition> for String {
    fn from(p: Partition) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Partition {
    type Error = Error;

    fn try_from(s: String) -> Result<Partition> {
        s.parse()
    }
}

pub fn parse_partition(text: &str) -> Result<Partition> {
    text.parse()
}
