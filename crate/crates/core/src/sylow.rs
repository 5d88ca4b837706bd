//! Block structures, Sylow p-subgroups of `S_n`, their normalizers, and the
//! classification of picky p-elements with brute-force oracles.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{check_prime, factorial, is_power_of, nu_p_factorial, PAdicExpansion};
use crate::characters::CycleType;
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

/// Default brute-force bounds on `n`.
pub const BLOCK_BOUND_P2: usize = 12;
pub const BLOCK_BOUND_ODD: usize = 9;

/// A block structure for `n`: the nested p-power blocks, singletons omitted,
/// stored as sorted bitmasks over points `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockStructure {
    pub n: usize,
    pub p: usize,
    pub blocks: Vec<u64>,
}

/// A node of the block tree; leaves are single points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockNode {
    pub mask: u64,
    pub children: Vec<BlockNode>,
}

impl BlockNode {
    pub fn min_point(&self) -> usize {
        self.mask.trailing_zeros() as usize
    }

    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Points in recursive child order.
    pub fn leaf_order(&self) -> Vec<usize> {
        if self.children.is_empty() {
            return vec![self.min_point()];
        }
        self.children.iter().flat_map(BlockNode::leaf_order).collect()
    }
}

pub(crate) fn points_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

fn mask_of(points: &[usize]) -> u64 {
    points.iter().fold(0, |m, &i| m | 1 << i)
}

fn image_mask(x: &Permutation, mask: u64) -> u64 {
    points_of(mask).iter().fold(0, |m, &i| m | 1 << x.apply(i))
}

fn check_n(n: usize) -> Result<()> {
    if n > 64 {
        return Err(Error::OutOfRange(format!("n = {n} exceeds 64 points")));
    }
    Ok(())
}

impl BlockStructure {
    /// Consecutive intervals, largest blocks first, each split into `p`
    /// consecutive pieces.
    pub fn canonical(n: usize, p: usize) -> Result<BlockStructure> {
        check_prime(p)?;
        check_n(n)?;
        let digits = PAdicExpansion::new(n, p);
        let mut blocks = Vec::new();
        let mut start = 0;
        for k in (0..digits.digits.len()).rev() {
            let size = p.pow(k as u32);
            for _ in 0..digits.digit(k) {
                interval_blocks(start, size, p, &mut blocks);
                start += size;
            }
        }
        blocks.sort_unstable();
        Ok(BlockStructure { n, p, blocks })
    }

    /// Ranges of the top-level canonical blocks, largest first, with their exponents.
    pub fn canonical_top_blocks(n: usize, p: usize) -> Vec<(usize, u32)> {
        let digits = PAdicExpansion::new(n, p);
        let mut out = Vec::new();
        let mut start = 0;
        for k in (0..digits.digits.len()).rev() {
            for _ in 0..digits.digit(k) {
                out.push((start, k as u32));
                start += p.pow(k as u32);
            }
        }
        out
    }

    pub fn is_invariant_under(&self, x: &Permutation) -> bool {
        self.blocks.iter().all(|&b| self.blocks.binary_search(&image_mask(x, b)).is_ok())
    }

    /// Top-level forest: maximal blocks, then uncovered points.
    pub fn tree(&self) -> Vec<BlockNode> {
        fn build(mask: u64, inner: &[u64]) -> BlockNode {
            let mut kids: Vec<u64> = inner
                .iter()
                .copied()
                .filter(|&b| b != mask && b & mask == b)
                .filter(|&b| !inner.iter().any(|&c| c != b && c != mask && c & mask == c && b & c == b))
                .collect();
            let covered = kids.iter().fold(0, |m, &b| m | b);
            if mask.count_ones() > 1 {
                kids.extend(points_of(mask & !covered).into_iter().map(|i| 1u64 << i));
            }
            kids.sort_unstable_by_key(|b| b.trailing_zeros());
            let children = if mask.count_ones() > 1 { kids.iter().map(|&b| build(b, inner)).collect() } else { Vec::new() };
            BlockNode { mask, children }
        }
        let maximal: Vec<u64> = self
            .blocks
            .iter()
            .copied()
            .filter(|&b| !self.blocks.iter().any(|&c| c != b && c & b == b))
            .collect();
        let covered = maximal.iter().fold(0, |m, &b| m | b);
        let mut roots: Vec<u64> = maximal;
        roots.extend(points_of(!covered & low_mask(self.n)).into_iter().map(|i| 1u64 << i));
        roots.sort_unstable_by_key(|b| (std::cmp::Reverse(b.count_ones()), b.trailing_zeros()));
        roots.iter().map(|&b| build(b, &self.blocks)).collect()
    }
}

fn low_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn interval_blocks(start: usize, size: usize, p: usize, out: &mut Vec<u64>) {
    if size < p {
        return;
    }
    out.push(mask_of(&(start..start + size).collect::<Vec<_>>()));
    let sub = size / p;
    for c in 0..p {
        interval_blocks(start + c * sub, sub, p, out);
    }
}

impl fmt::Display for BlockStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|&b| {
                let s: Vec<String> = points_of(b).iter().map(|i| (i + 1).to_string()).collect();
                format!("{{{}}}", s.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Generators of the Sylow subgroup attached to `B`: at each node, the map
/// sending child `i` onto child `i+1` along their leaf orders.
pub fn sylow_generators(b: &BlockStructure) -> Vec<Permutation> {
    let mut gens = Vec::new();
    fn walk(node: &BlockNode, n: usize, gens: &mut Vec<Permutation>) {
        if node.children.is_empty() {
            return;
        }
        let orders: Vec<Vec<usize>> = node.children.iter().map(BlockNode::leaf_order).collect();
        let mut images: Vec<usize> = (0..n).collect();
        for (i, src) in orders.iter().enumerate() {
            let dst = &orders[(i + 1) % orders.len()];
            for (a, b) in src.iter().zip(dst) {
                images[*a] = *b;
            }
        }
        gens.push(Permutation::from_images(images).expect("leaf orders partition the block"));
        for c in &node.children {
            walk(c, n, gens);
        }
    }
    for root in b.tree() {
        walk(&root, b.n, &mut gens);
    }
    gens
}

/// Odometer on a block: advances the top child index, carrying downwards.
/// A full cycle inside the block's Sylow subgroup.
pub fn block_full_cycle(node: &BlockNode, n: usize) -> Permutation {
    fn odo(node: &BlockNode, images: &mut Vec<usize>) {
        if node.children.is_empty() {
            return;
        }
        let orders: Vec<Vec<usize>> = node.children.iter().map(BlockNode::leaf_order).collect();
        let p = orders.len();
        for i in 0..p - 1 {
            for (a, b) in orders[i].iter().zip(&orders[i + 1]) {
                images[*a] = *b;
            }
        }
        // The last child wraps to the first, after one step inside the first.
        let mut inner: Vec<usize> = (0..images.len()).collect();
        odo(&node.children[0], &mut inner);
        for (a, b) in orders[p - 1].iter().zip(&orders[0]) {
            images[*a] = inner[*b];
        }
    }
    let mut images: Vec<usize> = (0..n).collect();
    odo(node, &mut images);
    Permutation::from_images(images).expect("odometer is a bijection")
}

/// `(p^k − 1)/(p − 1)`.
fn wreath_exponent(p: usize, k: u32) -> u32 {
    ((p.pow(k) - 1) / (p - 1)) as u32
}

/// Formal group expressions for Sylow normalizers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupShape {
    Sym(usize),
    /// `C_p ≀ … ≀ C_p` with `k` factors.
    IterWreath { p: usize, k: u32 },
    Cyclic(usize),
    DirectProduct(Vec<GroupShape>),
    WreathBySym(Box<GroupShape>, usize),
    /// `IterWreath(p,k) ⋊ C_{p−1}^k`.
    SemidirectTorus { p: usize, k: u32 },
}

impl GroupShape {
    pub fn order(&self) -> BigUint {
        match self {
            GroupShape::Sym(m) => factorial(*m),
            GroupShape::IterWreath { p, k } => BigUint::from(*p).pow(wreath_exponent(*p, *k)),
            GroupShape::Cyclic(m) => BigUint::from(*m),
            GroupShape::DirectProduct(fs) => fs.iter().map(GroupShape::order).product(),
            GroupShape::WreathBySym(h, a) => h.order().pow(*a as u32) * factorial(*a),
            GroupShape::SemidirectTorus { p, k } => {
                BigUint::from(*p).pow(wreath_exponent(*p, *k)) * BigUint::from(p - 1).pow(*k)
            }
        }
    }
}

impl fmt::Display for GroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupShape::Sym(m) => write!(f, "Sym({m})"),
            GroupShape::IterWreath { p, k } => write!(f, "IterWreath({p},{k})"),
            GroupShape::Cyclic(m) => write!(f, "CycGrp({m})"),
            GroupShape::DirectProduct(fs) => {
                let s: Vec<String> = fs.iter().map(|g| g.to_string()).collect();
                write!(f, "DirectProduct({})", s.join(", "))
            }
            GroupShape::WreathBySym(h, a) => write!(f, "WreathBySym({h}, {a})"),
            GroupShape::SemidirectTorus { p, k } => write!(f, "SemidirectTorus(IterWreath({p},{k}), CycGrp({})^{k})", p - 1),
        }
    }
}

/// `N_{S_n}(P_n)` as a product over p-adic digits, largest blocks first.
pub fn normalizer_shape(n: usize, p: usize) -> Result<GroupShape> {
    check_prime(p)?;
    let d = PAdicExpansion::new(n, p);
    let mut factors = Vec::new();
    for k in (0..d.digits.len()).rev() {
        let a = d.digit(k);
        if a == 0 {
            continue;
        }
        if k == 0 {
            if a >= 2 {
                factors.push(GroupShape::Sym(a));
            }
            continue;
        }
        let base = if p == 2 {
            GroupShape::IterWreath { p, k: k as u32 }
        } else {
            GroupShape::SemidirectTorus { p, k: k as u32 }
        };
        factors.push(if a > 1 { GroupShape::WreathBySym(Box::new(base), a) } else { base });
    }
    Ok(match factors.len() {
        0 => GroupShape::Sym(1),
        1 => factors.pop().unwrap(),
        _ => GroupShape::DirectProduct(factors),
    })
}

/// Number of `c`-multipartitions of `a`.
pub fn multipartition_count(a: usize, c: usize) -> BigUint {
    let mut part = vec![BigUint::from(0u32); a + 1];
    for (m, slot) in part.iter_mut().enumerate() {
        *slot = BigUint::from(crate::partition::partitions(m).len());
    }
    let mut acc = vec![BigUint::from(0u32); a + 1];
    acc[0] = BigUint::one();
    for _ in 0..c {
        let mut next = vec![BigUint::from(0u32); a + 1];
        for i in 0..=a {
            for j in 0..=a - i {
                next[i + j] += &acc[i] * &part[j];
            }
        }
        acc = next;
    }
    acc[a].clone()
}

/// `|Irr_{p'}(N_{S_n}(P_n))|`.
pub fn irr_pprime_count_normalizer(n: usize, p: usize) -> Result<BigUint> {
    check_prime(p)?;
    let d = PAdicExpansion::new(n, p);
    if p == 2 {
        let e: u32 = d.exponents().iter().sum();
        return Ok(BigUint::from(2u32).pow(e));
    }
    Ok((0..d.digits.len()).map(|k| multipartition_count(d.digit(k), p.pow(k as u32))).product())
}

/// Generators of `N_{S_n}(P)` for the canonical Sylow `P`: the Sylow
/// generators, digit-wise torus scalings in each top block, and
/// permutations of equal-size top blocks.
pub fn normalizer_generators(n: usize, p: usize) -> Result<Vec<Permutation>> {
    let b = BlockStructure::canonical(n, p)?;
    let mut gens = sylow_generators(&b);
    let tops = BlockStructure::canonical_top_blocks(n, p);
    let unit = primitive_root(p);
    for &(start, k) in &tops {
        let size = p.pow(k);
        // Canonical blocks are intervals: digit t of (i − start) indexes level t.
        for t in 0..k {
            let w = p.pow(t);
            let mut images: Vec<usize> = (0..n).collect();
            for off in 0..size {
                let d = off / w % p;
                images[start + off] = start + off - d * w + (d * unit % p) * w;
            }
            let g = Permutation::from_images(images).expect("digit scaling is a bijection");
            if !g.is_identity() {
                gens.push(g);
            }
        }
    }
    for k in 0..=tops.iter().map(|t| t.1).max().unwrap_or(0) {
        let same: Vec<usize> = tops.iter().filter(|t| t.1 == k).map(|t| t.0).collect();
        if same.len() < 2 {
            continue;
        }
        let size = p.pow(k);
        let mut swap: Vec<usize> = (0..n).collect();
        let mut cyc: Vec<usize> = (0..n).collect();
        for off in 0..size {
            swap[same[0] + off] = same[1] + off;
            swap[same[1] + off] = same[0] + off;
            for (i, &s) in same.iter().enumerate() {
                cyc[s + off] = same[(i + 1) % same.len()] + off;
            }
        }
        gens.push(Permutation::from_images(swap).unwrap());
        gens.push(Permutation::from_images(cyc).unwrap());
    }
    Ok(gens)
}

fn primitive_root(p: usize) -> usize {
    if p == 2 {
        return 1;
    }
    (2..p)
        .find(|&g| {
            let mut v = 1;
            (1..p - 1).all(|_| {
                v = v * g % p;
                v != 1
            })
        })
        .unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PickyType {
    TypeI,
    TypeII,
    TypeIII,
    NotPicky,
}

impl fmt::Display for PickyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PickyType::TypeI => "TypeI",
            PickyType::TypeII => "TypeII",
            PickyType::TypeIII => "TypeIII",
            PickyType::NotPicky => "NotPicky",
        };
        write!(f, "{s}")
    }
}

fn adic_lengths(n: usize, p: usize) -> Vec<usize> {
    let d = PAdicExpansion::new(n, p);
    let mut v = Vec::new();
    for k in (0..d.digits.len()).rev() {
        v.extend(std::iter::repeat(p.pow(k as u32)).take(d.digit(k)));
    }
    v
}

/// Cycle type with `a_i` cycles of length `p^i`.
pub fn p_adic_element(n: usize, p: usize) -> Result<CycleType> {
    check_prime(p)?;
    CycleType::new(adic_lengths(n, p))
}

/// 2-adic element of `n−2` plus two fixed points; any even `n ≥ 2`.
pub fn type_ii_element(n: usize) -> Result<CycleType> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::Inapplicable(format!("type II needs even n >= 2, got {n}")));
    }
    let mut v = adic_lengths(n - 2, 2);
    v.extend([1, 1]);
    CycleType::new(v)
}

/// 3-adic element of `n−3` plus three fixed points; needs `n ≡ ±3 (mod 9)`.
pub fn type_iii_element(n: usize) -> Result<CycleType> {
    if n % 9 != 3 && n % 9 != 6 {
        return Err(Error::Inapplicable(format!("type III needs n = ±3 mod 9, got {n}")));
    }
    let mut v = adic_lengths(n - 3, 3);
    v.extend([1, 1, 1]);
    CycleType::new(v)
}

pub fn is_p_element(t: &CycleType, p: usize) -> bool {
    t.lengths().iter().all(|&l| is_power_of(l, p).is_some())
}

/// Which picky family a p-element belongs to.
pub fn classify_picky(t: &CycleType, p: usize) -> Result<PickyType> {
    check_prime(p)?;
    if !is_p_element(t, p) {
        return Err(Error::NotPElement { p, what: t.to_string() });
    }
    let n = t.n();
    if *t == p_adic_element(n, p)? {
        return Ok(PickyType::TypeI);
    }
    if p == 2 && n >= 2 && n % 2 == 0 && *t == type_ii_element(n)? {
        return Ok(PickyType::TypeII);
    }
    if p == 3 && (n % 9 == 3 || n % 9 == 6) && *t == type_iii_element(n)? {
        return Ok(PickyType::TypeIII);
    }
    Ok(PickyType::NotPicky)
}

/// Every cycle type of `S_n` made of p-power lengths.
pub fn p_element_types(n: usize, p: usize) -> Vec<CycleType> {
    crate::partition::partitions(n)
        .into_iter()
        .map(|l| CycleType::new(l.parts().to_vec()).unwrap())
        .filter(|t| is_p_element(t, p))
        .collect()
}

/// Permutation of the given type lying in the canonical Sylow subgroup:
/// each cycle is the odometer of a free canonical block of its length,
/// longest cycles placed first in the lowest free block.
pub fn element_in_canonical(t: &CycleType, p: usize) -> Result<Permutation> {
    if !is_p_element(t, p) {
        return Err(Error::NotPElement { p, what: t.to_string() });
    }
    let n = t.n();
    let b = BlockStructure::canonical(n, p)?;
    let mut nodes: Vec<BlockNode> = Vec::new();
    fn collect(node: &BlockNode, out: &mut Vec<BlockNode>) {
        out.push(node.clone());
        for c in &node.children {
            collect(c, out);
        }
    }
    for r in b.tree() {
        collect(&r, &mut nodes);
    }
    let mut used = 0u64;
    let mut x = Permutation::identity(n);
    for &len in t.lengths().iter().filter(|&&l| l > 1) {
        let node = nodes
            .iter()
            .filter(|nd| nd.size() == len && nd.mask & used == 0)
            .min_by_key(|nd| nd.min_point())
            .ok_or_else(|| Error::Inapplicable(format!("no free canonical block for type {t}")))?;
        used |= node.mask;
        x = x.then(&block_full_cycle(node, n));
    }
    Ok(x)
}

type StructureCache = Mutex<HashMap<(usize, usize), Arc<Vec<BlockStructure>>>>;

fn structure_cache() -> &'static StructureCache {
    static CACHE: OnceLock<StructureCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Internal blocks of a block on `0..p^k` (itself excluded), all choices.
fn internal_templates(p: usize, k: u32) -> Vec<Vec<u64>> {
    if k <= 1 {
        return vec![Vec::new()];
    }
    let size = p.pow(k);
    let sub = size / p;
    let inner = internal_templates(p, k - 1);
    let mut out = Vec::new();
    let mut pieces = Vec::new();
    split_equal(low_mask(size), sub, &mut pieces, &mut |parts: &[u64]| {
        let mut acc: Vec<Vec<u64>> = vec![parts.to_vec()];
        for &part in parts {
            let pts = points_of(part);
            let mut next = Vec::new();
            for a in &acc {
                for t in &inner {
                    let mut v = a.clone();
                    v.extend(t.iter().map(|&m| relabel(m, &pts)));
                    next.push(v);
                }
            }
            acc = next;
        }
        out.extend(acc);
    });
    out
}

/// Sends bit `i` of `m` to bit `pts[i]`.
fn relabel(m: u64, pts: &[usize]) -> u64 {
    points_of(m).iter().fold(0, |acc, &i| acc | 1 << pts[i])
}

/// Unordered splits of `mask` into pieces of size `sub`.
fn split_equal(mask: u64, sub: usize, cur: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
    if mask == 0 {
        f(cur);
        return;
    }
    let first = mask.trailing_zeros() as usize;
    let rest: Vec<usize> = points_of(mask & !(1 << first));
    for_each_combination(&rest, sub - 1, &mut |c| {
        let piece = mask_of(c) | 1 << first;
        cur.push(piece);
        split_equal(mask & !piece, sub, cur, f);
        cur.pop();
    });
}

fn for_each_combination(items: &[usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut Vec::new(), f);
}

/// All block structures for `(n, p)`, cached.
pub fn all_block_structures(n: usize, p: usize) -> Result<Arc<Vec<BlockStructure>>> {
    check_prime(p)?;
    let bound = if p == 2 { BLOCK_BOUND_P2 } else { BLOCK_BOUND_ODD };
    if n > bound {
        return Err(Error::BoundExceeded(format!("block enumeration for n = {n} > {bound}")));
    }
    if let Some(v) = structure_cache().lock().unwrap().get(&(n, p)) {
        return Ok(v.clone());
    }
    let sizes: Vec<u32> = {
        let d = PAdicExpansion::new(n, p);
        let mut s = Vec::new();
        for k in (1..d.digits.len()).rev() {
            s.extend(std::iter::repeat(k as u32).take(d.digit(k)));
        }
        s
    };
    let templates: HashMap<u32, Vec<Vec<u64>>> =
        sizes.iter().map(|&k| (k, internal_templates(p, k))).collect();
    let mut out = Vec::new();
    let mut tops = Vec::new();
    choose_tops(low_mask(n), &sizes, p, 0, &mut tops, &mut |chosen: &[u64]| {
        let mut acc: Vec<Vec<u64>> = vec![chosen.to_vec()];
        for (&top, &k) in chosen.iter().zip(&sizes) {
            let pts = points_of(top);
            let mut next = Vec::new();
            for a in &acc {
                for t in &templates[&k] {
                    let mut v = a.clone();
                    v.extend(t.iter().map(|&m| relabel(m, &pts)));
                    next.push(v);
                }
            }
            acc = next;
        }
        for mut blocks in acc {
            blocks.sort_unstable();
            out.push(BlockStructure { n, p, blocks });
        }
    });
    let out = Arc::new(out);
    structure_cache().lock().unwrap().insert((n, p), out.clone());
    Ok(out)
}

fn choose_tops(rem: u64, sizes: &[u32], p: usize, idx: usize, cur: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
    if idx == sizes.len() {
        f(cur);
        return;
    }
    let size = p.pow(sizes[idx]);
    let min_after = if idx > 0 && sizes[idx - 1] == sizes[idx] { cur[idx - 1].trailing_zeros() as usize + 1 } else { 0 };
    let pts = points_of(rem);
    for_each_combination(&pts, size, &mut |c| {
        if c[0] < min_after {
            return;
        }
        let m = mask_of(c);
        cur.push(m);
        choose_tops(rem & !m, sizes, p, idx + 1, cur, f);
        cur.pop();
    });
}

/// Block structures fixed by `x`.
pub fn invariant_block_structures(x: &Permutation, p: usize) -> Result<Vec<BlockStructure>> {
    let all = all_block_structures(x.degree(), p)?;
    Ok(all.par_iter().filter(|b| b.is_invariant_under(x)).cloned().collect())
}

pub fn invariant_block_structure_count(x: &Permutation, p: usize) -> Result<usize> {
    let all = all_block_structures(x.degree(), p)?;
    Ok(all.par_iter().filter(|b| b.is_invariant_under(x)).count())
}

/// `4` bits per point; needs `n ≤ 16`.
pub(crate) fn encode(x: &Permutation) -> u64 {
    x.images().iter().enumerate().fold(0, |acc, (i, &j)| acc | (j as u64) << (4 * i))
}

/// A Sylow p-subgroup listed by its elements, with `g` such that it equals
/// `g⁻¹ P g` for the canonical `P`.
#[derive(Clone, Debug)]
pub struct SylowMember {
    pub elements: Vec<u64>,
    pub conjugator: Permutation,
}

impl SylowMember {
    pub fn contains(&self, x: &Permutation) -> bool {
        self.elements.binary_search(&encode(x)).is_ok()
    }
}

type SylowCache = Mutex<HashMap<(usize, usize), Arc<Vec<SylowMember>>>>;

fn sylow_cache() -> &'static SylowCache {
    static CACHE: OnceLock<SylowCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All conjugates of `P` under the group generated by `ambient`.
pub fn conjugates_of(p_elements: &[Permutation], ambient: &[Permutation]) -> Vec<SylowMember> {
    let n = p_elements.first().map_or(0, Permutation::degree);
    let start: Vec<Permutation> = p_elements.to_vec();
    let key = |els: &[Permutation]| {
        let mut v: Vec<u64> = els.iter().map(encode).collect();
        v.sort_unstable();
        v
    };
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let first = key(&start);
    seen.insert(first.clone());
    let mut out = vec![SylowMember { elements: first, conjugator: Permutation::identity(n) }];
    let mut frontier = vec![(start, Permutation::identity(n))];
    while let Some((els, g)) = frontier.pop() {
        for h in ambient {
            let conj: Vec<Permutation> = els.iter().map(|s| s.conjugate_by(h)).collect();
            let k = key(&conj);
            if seen.insert(k.clone()) {
                let gh = g.then(h);
                out.push(SylowMember { elements: k, conjugator: gh.clone() });
                frontier.push((conj, gh));
            }
        }
    }
    out
}

/// Every Sylow p-subgroup of `S_n`, enumerated by conjugating the canonical one.
pub fn all_sylows(n: usize, p: usize) -> Result<Arc<Vec<SylowMember>>> {
    check_prime(p)?;
    let bound = if p == 2 { 10 } else { BLOCK_BOUND_ODD };
    if n > bound {
        return Err(Error::BoundExceeded(format!("Sylow enumeration for n = {n} > {bound}")));
    }
    if let Some(v) = sylow_cache().lock().unwrap().get(&(n, p)) {
        return Ok(v.clone());
    }
    let canon = PermGroup::generate(n, &sylow_generators(&BlockStructure::canonical(n, p)?));
    let elements = canon.elements();
    let ambient = if n < 2 { Vec::new() } else { vec![Permutation::transposition(n, 0, 1), Permutation::long_cycle(n)] };
    let out = Arc::new(if elements.is_empty() { Vec::new() } else { conjugates_of(&elements, &ambient) });
    sylow_cache().lock().unwrap().insert((n, p), out.clone());
    Ok(out)
}

/// Number of Sylow p-subgroups of `S_n` containing `x`.
pub fn sylow_count_containing(x: &Permutation, p: usize) -> Result<usize> {
    Ok(all_sylows(x.degree(), p)?.iter().filter(|s| s.contains(x)).count())
}

/// Brute-force pickiness: a unique invariant block structure for `p = 2`,
/// a unique Sylow subgroup containing `x` for odd `p`.
pub fn is_picky_bruteforce(x: &Permutation, p: usize) -> Result<bool> {
    if p == 2 {
        Ok(invariant_block_structure_count(x, 2)? == 1)
    } else {
        Ok(sylow_count_containing(x, p)? == 1)
    }
}

/// `ν_p(n!)`, the exponent of `|P_n|`.
pub fn sylow_exponent(n: usize, p: usize) -> usize {
    nu_p_factorial(n, p)
}

/// Order of the stabilizer in `S_n` of one block structure.
pub fn block_stabilizer_order(n: usize, p: usize) -> BigUint {
    let d = PAdicExpansion::new(n, p);
    let pf = factorial(p);
    (0..d.digits.len())
        .map(|k| pf.pow(wreath_exponent(p, k as u32)).pow(d.digit(k) as u32) * factorial(d.digit(k)))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::CycleType;

    fn t(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    fn perm(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, Some(n)).unwrap()
    }

    #[test]
    fn named_elements() {
        assert_eq!(p_adic_element(8, 2).unwrap(), t("8"));
        assert_eq!(type_ii_element(8).unwrap(), t("4,2,1,1"));
        assert_eq!(type_iii_element(6).unwrap(), t("3,1,1,1"));
        assert!(type_iii_element(9).is_err());
        assert!(type_ii_element(7).is_err());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_picky(&t("4,2,1,1"), 2).unwrap(), PickyType::TypeII);
        assert_eq!(classify_picky(&t("9,3,1"), 3).unwrap(), PickyType::TypeI);
        assert_eq!(classify_picky(&t("4,4"), 2).unwrap(), PickyType::NotPicky);
        assert_eq!(classify_picky(&t("1,1,1"), 3).unwrap(), PickyType::TypeIII);
        assert!(classify_picky(&t("3,1"), 2).is_err());
    }

    #[test]
    fn sylow_closure_orders() {
        for (n, p, order) in [(4, 2, 8u32), (8, 2, 128), (9, 3, 81), (12, 2, 1024), (7, 7, 7)] {
            let g = PermGroup::generate(n, &sylow_generators(&BlockStructure::canonical(n, p).unwrap()));
            assert_eq!(g.order(), BigUint::from(order), "n={n} p={p}");
        }
    }

    #[test]
    fn canonical_elements_lie_in_canonical_sylow() {
        for p in [2, 3, 5] {
            for n in 1..=12 {
                let g = PermGroup::generate(n, &sylow_generators(&BlockStructure::canonical(n, p).unwrap()));
                for ty in p_element_types(n, p) {
                    if let Ok(x) = element_in_canonical(&ty, p) {
                        assert_eq!(x.cycle_type(), ty);
                        assert!(g.contains(&x));
                    }
                }
                let x = element_in_canonical(&p_adic_element(n, p).unwrap(), p).unwrap();
                assert!(g.contains(&x));
            }
        }
    }

    #[test]
    fn structure_counts() {
        for n in 0..=10 {
            let c = all_block_structures(n, 2).unwrap().len();
            assert_eq!(BigUint::from(c), factorial(n) / BigUint::from(2u32).pow(sylow_exponent(n, 2) as u32));
        }
        for p in [3, 5, 7] {
            for n in 0..=9 {
                let c = all_block_structures(n, p).unwrap().len();
                assert_eq!(BigUint::from(c), factorial(n) / block_stabilizer_order(n, p), "n={n} p={p}");
            }
        }
        assert_eq!(invariant_block_structure_count(&Permutation::identity(3), 3).unwrap(), 1);
    }

    #[test]
    fn normalizers() {
        assert_eq!(normalizer_shape(8, 2).unwrap(), GroupShape::IterWreath { p: 2, k: 3 });
        assert_eq!(irr_pprime_count_normalizer(8, 2).unwrap(), BigUint::from(8u32));
        assert_eq!(
            normalizer_shape(12, 2).unwrap(),
            GroupShape::DirectProduct(vec![GroupShape::IterWreath { p: 2, k: 3 }, GroupShape::IterWreath { p: 2, k: 2 }])
        );
        assert_eq!(irr_pprime_count_normalizer(12, 2).unwrap(), BigUint::from(32u32));
        for p in [3, 5, 7] {
            assert_eq!(normalizer_shape(p, p).unwrap(), GroupShape::SemidirectTorus { p, k: 1 });
            assert_eq!(irr_pprime_count_normalizer(p, p).unwrap(), BigUint::from(p));
        }
    }

    /// Brute-force normalizer of the canonical Sylow subgroup, by testing
    /// every element of `S_n`.
    fn brute_normalizer_order(n: usize, p: usize) -> usize {
        let gens = sylow_generators(&BlockStructure::canonical(n, p).unwrap());
        let pg = PermGroup::generate(n, &gens);
        PermGroup::symmetric(n)
            .elements()
            .par_iter()
            .filter(|g| gens.iter().all(|s| pg.contains(&s.conjugate_by(g))))
            .count()
    }

    #[test]
    fn normalizer_generators_match_brute_force() {
        for (n, p) in [(3, 3), (5, 5), (6, 3), (7, 3), (7, 7), (5, 3), (8, 3), (6, 2), (7, 5)] {
            let shape = normalizer_shape(n, p).unwrap().order();
            let g = PermGroup::generate(n, &normalizer_generators(n, p).unwrap());
            assert_eq!(g.order(), shape, "n={n} p={p}");
            assert_eq!(BigUint::from(brute_normalizer_order(n, p)), shape, "n={n} p={p}");
        }
        let g = PermGroup::generate(9, &normalizer_generators(9, 3).unwrap());
        assert_eq!(g.order(), normalizer_shape(9, 3).unwrap().order());
        assert_eq!(BigUint::from(all_sylows(9, 3).unwrap().len()), factorial(9) / g.order());
    }

    #[test]
    fn normalizer_counts_match_symmetric_group() {
        for p in [2, 3, 5, 7] {
            for n in 1..=14 {
                let s = crate::characters::irr_p_prime(n, p).unwrap().len();
                assert_eq!(irr_pprime_count_normalizer(n, p).unwrap(), BigUint::from(s), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn classification_matches_sylow_counts() {
        for p in [2, 3, 5, 7] {
            for n in 1..=9 {
                for ty in p_element_types(n, p) {
                    let x = Permutation::from_cycle_type(&ty);
                    let picky = sylow_count_containing(&x, p).unwrap() == 1;
                    assert_eq!(classify_picky(&ty, p).unwrap() != PickyType::NotPicky, picky, "{ty} p={p}");
                }
            }
        }
        for n in 1..=12 {
            for ty in p_element_types(n, 2) {
                let x = Permutation::from_cycle_type(&ty);
                let picky = invariant_block_structure_count(&x, 2).unwrap() == 1;
                assert_eq!(classify_picky(&ty, 2).unwrap() != PickyType::NotPicky, picky, "{ty}");
            }
        }
    }

    #[test]
    fn block_test_misses_odd_sylows() {
        let id = Permutation::identity(5);
        assert_eq!(invariant_block_structure_count(&id, 5).unwrap(), 1);
        assert_eq!(sylow_count_containing(&id, 5).unwrap(), 6);
        let x = perm("(1,2,3)(4,5,6)", 9);
        assert_eq!(invariant_block_structure_count(&x, 3).unwrap(), 1);
        assert!(sylow_count_containing(&x, 3).unwrap() > 1);
    }

    #[test]
    fn named_block_examples() {
        for k in 1..=3u32 {
            let n = 1usize << k;
            let x = perm(&format!("({})", (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(",")), n);
            assert_eq!(invariant_block_structure_count(&x, 2).unwrap(), 1);
        }
        let x = perm("(1,2)(3,4)", 4);
        let c = invariant_block_structure_count(&x, 2).unwrap();
        assert_eq!(c > 1, classify_picky(&x.cycle_type(), 2).unwrap() == PickyType::NotPicky);
    }

    /// Sylows of a direct product containing `(x, y)` are exactly products
    /// of Sylows of the factors containing `x` and `y`.
    #[test]
    fn product_pickiness() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..12 {
            let a = rng.gen_range(2..=5usize);
            let b = rng.gen_range(2..=5usize);
            let n = a + b;
            let tx = p_element_types(a, 2);
            let ty = p_element_types(b, 2);
            let x = Permutation::from_cycle_type(tx.choose(&mut rng).unwrap());
            let y = Permutation::from_cycle_type(ty.choose(&mut rng).unwrap());
            let xy = x.extend(n).then(&y.shifted(a, n));
            let pa = sylow_generators(&BlockStructure::canonical(a, 2).unwrap());
            let pb = sylow_generators(&BlockStructure::canonical(b, 2).unwrap());
            let mut gens: Vec<Permutation> = pa.iter().map(|g| g.extend(n)).collect();
            gens.extend(pb.iter().map(|g| g.shifted(a, n)));
            let elements = PermGroup::generate(n, &gens).elements();
            let ambient = vec![
                Permutation::transposition(a, 0, 1).extend(n),
                Permutation::long_cycle(a).extend(n),
                Permutation::transposition(b, 0, 1).shifted(a, n),
                Permutation::long_cycle(b).shifted(a, n),
            ];
            let count = conjugates_of(&elements, &ambient).iter().filter(|s| s.contains(&xy)).count();
            let cx = sylow_count_containing(&x, 2).unwrap();
            let cy = sylow_count_containing(&y, 2).unwrap();
            assert_eq!(count, cx * cy);
            assert_eq!(count == 1, cx == 1 && cy == 1);
        }
    }
}
