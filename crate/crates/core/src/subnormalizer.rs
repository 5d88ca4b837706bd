//! Subnormalizers of 2-elements of `S_n`: the structural recursion and a
//! brute-force oracle generated from Sylow normalizers containing `x`.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::{check_prime, factorial, is_power_of};
use crate::characters::CycleType;
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};
use crate::sylow::{
    all_sylows, invariant_block_structures, is_p_element, normalizer_generators, sylow_generators, BlockStructure,
};

/// Structure of `Sub_{S_n}(x)`; every atom carries its (0-based) support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubShape {
    FullSym(Vec<usize>),
    /// The Sylow 2-subgroup of `S_{2^k}` on these points containing the cycle.
    Syl2Tower(Vec<usize>),
    Product(Vec<SubShape>),
    /// `inner ≀ S_2`: `inner` lives on the short-cycle half, `twin` is the
    /// other half carrying the long cycle.
    WreathS2 { inner: Box<SubShape>, twin: Vec<usize> },
}

impl SubShape {
    pub fn order(&self) -> BigUint {
        match self {
            SubShape::FullSym(pts) => factorial(pts.len()),
            SubShape::Syl2Tower(pts) => BigUint::from(2u32).pow(pts.len().saturating_sub(1) as u32),
            SubShape::Product(fs) => fs.iter().map(SubShape::order).product(),
            SubShape::WreathS2 { inner, .. } => {
                let o = inner.order();
                BigUint::from(2u32) * &o * &o
            }
        }
    }

    pub fn points(&self) -> Vec<usize> {
        let mut v = match self {
            SubShape::FullSym(p) | SubShape::Syl2Tower(p) => p.clone(),
            SubShape::Product(fs) => fs.iter().flat_map(SubShape::points).collect(),
            SubShape::WreathS2 { inner, twin } => {
                let mut v = inner.points();
                v.extend(twin);
                v
            }
        };
        v.sort_unstable();
        v
    }

    /// Atoms as `(kind, size)`, sorted; wreaths contribute their inner atoms.
    pub fn atoms(&self) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        fn walk(s: &SubShape, out: &mut Vec<(String, usize)>) {
            match s {
                SubShape::FullSym(p) => out.push(("FullSym".into(), p.len())),
                SubShape::Syl2Tower(p) => out.push(("Syl2Tower".into(), p.len())),
                SubShape::Product(fs) => fs.iter().for_each(|f| walk(f, out)),
                SubShape::WreathS2 { inner, twin } => {
                    out.push(("WreathS2".into(), 2 * twin.len()));
                    walk(inner, out);
                }
            }
        }
        walk(self, &mut out);
        out.sort();
        out
    }

    /// True when the expression describes a 2-group.
    pub fn is_2_group(&self) -> bool {
        match self {
            SubShape::FullSym(p) => p.len() <= 2,
            SubShape::Syl2Tower(_) => true,
            SubShape::Product(fs) => fs.iter().all(SubShape::is_2_group),
            SubShape::WreathS2 { inner, .. } => inner.is_2_group(),
        }
    }

    fn product(parts: Vec<SubShape>) -> SubShape {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                SubShape::Product(fs) => flat.extend(fs),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            SubShape::Product(flat)
        }
    }
}

fn fmt_points(pts: &[usize]) -> String {
    let s: Vec<String> = pts.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", s.join(","))
}

impl fmt::Display for SubShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubShape::FullSym(p) => write!(f, "FullSym({})", fmt_points(p)),
            SubShape::Syl2Tower(p) => write!(f, "Syl2Tower({})", fmt_points(p)),
            SubShape::Product(fs) => {
                let s: Vec<String> = fs.iter().map(|x| x.to_string()).collect();
                write!(f, "Product({})", s.join(", "))
            }
            SubShape::WreathS2 { inner, twin } => write!(f, "WreathS2({inner}; twin {})", fmt_points(twin)),
        }
    }
}

/// Which valid Reduction split to use when several exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitPolicy {
    Minimal,
    Maximal,
}

/// `Sub_{S_n}(x)` for a 2-element `x`, by the structural recursion.
pub fn sub_shape_2(x: &Permutation) -> Result<SubShape> {
    sub_shape_2_with(x, SplitPolicy::Minimal)
}

pub fn sub_shape_2_with(x: &Permutation, policy: SplitPolicy) -> Result<SubShape> {
    if !is_p_element(&x.cycle_type(), 2) {
        return Err(Error::NotPElement { p: 2, what: x.to_string() });
    }
    let cycles = x.cycles();
    Ok(shape_of(&cycles, policy))
}

fn order_of(cycles: &[Vec<usize>]) -> usize {
    cycles.iter().map(Vec::len).max().unwrap_or(1)
}

fn flat_points(cycles: &[Vec<usize>]) -> Vec<usize> {
    let mut v: Vec<usize> = cycles.iter().flatten().copied().collect();
    v.sort_unstable();
    v
}

/// Shape of the subnormalizer of the element with these cycles (fixed
/// points included) in the symmetric group on their union.
pub(crate) fn shape_of(cycles: &[Vec<usize>], policy: SplitPolicy) -> SubShape {
    let pts = flat_points(cycles);
    let n = pts.len();
    if let Some(k) = is_power_of(n, 2) {
        if k <= 2 {
            return base_case(cycles, policy);
        }
        return power_case(cycles, k, policy).unwrap_or(SubShape::FullSym(pts));
    }
    match reduction_split(cycles, policy) {
        Some((big, small)) => SubShape::product(vec![shape_of(&big, policy), shape_of(&small, policy)]),
        None => SubShape::FullSym(pts),
    }
}

/// The cases of `S_{2^k}` with a proper subnormalizer.
fn power_case(cycles: &[Vec<usize>], k: u32, policy: SplitPolicy) -> Option<SubShape> {
    let n = 1usize << k;
    let o = order_of(cycles);
    if o == n {
        return Some(SubShape::Syl2Tower(flat_points(cycles)));
    }
    let fix = cycles.iter().filter(|c| c.len() == 1).count();
    if o == n / 2 && fix > 0 {
        let zi = cycles.iter().position(|c| c.len() == n / 2).unwrap();
        let mut twin = cycles[zi].clone();
        twin.sort_unstable();
        let y: Vec<Vec<usize>> = cycles.iter().enumerate().filter(|&(i, _)| i != zi).map(|(_, c)| c.clone()).collect();
        return Some(SubShape::WreathS2 { inner: Box::new(shape_of(&y, policy)), twin });
    }
    None
}

/// Splits into (cycles of length ≥ 2^{m_t}, shorter cycles) for a valid `t`.
pub(crate) fn reduction_split(cycles: &[Vec<usize>], policy: SplitPolicy) -> Option<(Vec<Vec<usize>>, Vec<Vec<usize>>)> {
    let mut lengths: Vec<usize> = cycles.iter().map(Vec::len).collect();
    lengths.sort_unstable();
    lengths.dedup();
    let valid: Vec<usize> = (1..lengths.len())
        .filter(|&t| {
            let below: usize = cycles.iter().filter(|c| c.len() < lengths[t]).map(Vec::len).sum();
            lengths[t] > below
        })
        .collect();
    let t = match policy {
        SplitPolicy::Minimal => *valid.first()?,
        SplitPolicy::Maximal => *valid.last()?,
    };
    let cut = lengths[t];
    let big = cycles.iter().filter(|c| c.len() >= cut).cloned().collect();
    let small = cycles.iter().filter(|c| c.len() < cut).cloned().collect();
    Some((big, small))
}

/// Brute-force subnormalizer orders for every 2-element type of `S_1`,
/// `S_2`, `S_4`.
fn base_table() -> &'static HashMap<CycleType, BigUint> {
    static TABLE: OnceLock<HashMap<CycleType, BigUint>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut m = HashMap::new();
        for n in [1usize, 2, 4] {
            for t in crate::sylow::p_element_types(n, 2) {
                let x = Permutation::from_cycle_type(&t);
                let o = sub_bruteforce(&x, 2).expect("small n").order();
                m.insert(t, o);
            }
        }
        m
    })
}

/// `S_1`, `S_2`, `S_4`: the first of (tower, full, wreath) whose order
/// matches the brute-force table.
fn base_case(cycles: &[Vec<usize>], policy: SplitPolicy) -> SubShape {
    let pts = flat_points(cycles);
    let n = pts.len();
    let t = CycleType::new(cycles.iter().map(Vec::len).collect()).unwrap();
    let target = &base_table()[&t];
    let o = order_of(cycles);
    let fix = cycles.iter().filter(|c| c.len() == 1).count();
    let mut candidates = Vec::new();
    if o == n && n > 1 {
        candidates.push(SubShape::Syl2Tower(pts.clone()));
    }
    candidates.push(SubShape::FullSym(pts.clone()));
    if n >= 2 && o == n / 2 && fix > 0 {
        let zi = cycles.iter().position(|c| c.len() == n / 2).unwrap();
        let mut twin = cycles[zi].clone();
        twin.sort_unstable();
        let y: Vec<Vec<usize>> = cycles.iter().enumerate().filter(|&(i, _)| i != zi).map(|(_, c)| c.clone()).collect();
        candidates.push(SubShape::WreathS2 { inner: Box::new(shape_of(&y, policy)), twin });
    }
    candidates.into_iter().find(|c| &c.order() == target).expect("brute-force order matches a candidate")
}

/// Brute-force bounds for [`sub_bruteforce`].
pub const SUB_BOUND_P2: usize = 10;
pub const SUB_BOUND_ODD: usize = 9;

/// `⟨N(P) : x ∈ P ∈ Syl_p(S_n)⟩`.
pub fn sub_bruteforce(x: &Permutation, p: usize) -> Result<PermGroup> {
    check_prime(p)?;
    let n = x.degree();
    if !is_p_element(&x.cycle_type(), p) {
        return Err(Error::NotPElement { p, what: x.to_string() });
    }
    let bound = if p == 2 { SUB_BOUND_P2 } else { SUB_BOUND_ODD };
    if n > bound {
        return Err(Error::BoundExceeded(format!("brute-force subnormalizer for n = {n} > {bound}")));
    }
    let mut g = PermGroup::trivial(n);
    if p == 2 {
        for b in invariant_block_structures(x, 2)? {
            for s in sylow_generators(&b) {
                g.add_generator(&s);
            }
        }
    } else {
        let norm = normalizer_generators(n, p)?;
        for s in all_sylows(n, p)?.iter().filter(|s| s.contains(x)) {
            for h in &norm {
                g.add_generator(&h.conjugate_by(&s.conjugator));
            }
        }
    }
    Ok(g)
}

/// Checks `Sub(x) × Sub(y) ≤ Sub((x, y))` for `x ∈ S_a`, `y ∈ S_b` acting on
/// disjoint consecutive supports.
pub fn sub_product_lower_bound_check(x: &Permutation, y: &Permutation, p: usize) -> Result<bool> {
    let (a, b) = (x.degree(), y.degree());
    let n = a + b;
    let xy = x.extend(n).then(&y.shifted(a, n));
    let whole = sub_bruteforce(&xy, p)?;
    let sx = sub_bruteforce(x, p)?;
    let sy = sub_bruteforce(y, p)?;
    Ok(sx.generators().iter().all(|g| whole.contains(&g.extend(n)))
        && sy.generators().iter().all(|g| whole.contains(&g.shifted(a, n))))
}

/// For a fixed-point-free 2-element of `S_{2^k}`: a block structure fixed by
/// `x` whose two halves `b1`, `b2` satisfy `x(b1) = b2`. A full cycle gets
/// the residue-class structure; otherwise the cycles are split into two
/// halves and the two half-structures are interleaved.
pub fn swapping_structure(x: &Permutation) -> Result<(BlockStructure, u64, u64)> {
    let n = x.degree();
    let k = is_power_of(n, 2).ok_or_else(|| Error::Inapplicable(format!("{n} is not a power of 2")))?;
    let cycles = x.cycles();
    if k == 0 || cycles.iter().any(|c| c.len() == 1) || !is_p_element(&x.cycle_type(), 2) {
        return Err(Error::Inapplicable("needs a fixed-point-free 2-element on at least 2 points".into()));
    }
    let (blocks, b1, b2) = swap_blocks(&cycles);
    let mut blocks = blocks;
    blocks.sort_unstable();
    blocks.dedup();
    Ok((BlockStructure { n, p: 2, blocks }, b1, b2))
}

fn swap_blocks(cycles: &[Vec<usize>]) -> (Vec<u64>, u64, u64) {
    let mask = |pts: &[usize]| pts.iter().fold(0u64, |m, &i| m | 1 << i);
    if cycles.len() == 1 {
        let c = &cycles[0];
        let len = c.len();
        let mut blocks = Vec::new();
        let mut w = len;
        while w >= 2 {
            // Residue classes mod len/w of positions along the cycle.
            let classes = len / w;
            for r in 0..classes {
                let pts: Vec<usize> = (0..len).filter(|i| i % classes == r).map(|i| c[i]).collect();
                blocks.push(mask(&pts));
            }
            w /= 2;
        }
        let b1 = mask(&(0..len).step_by(2).map(|i| c[i]).collect::<Vec<_>>());
        let b2 = mask(&(1..len).step_by(2).map(|i| c[i]).collect::<Vec<_>>());
        return (blocks, b1, b2);
    }
    let total: usize = cycles.iter().map(Vec::len).sum();
    let mut sorted: Vec<Vec<usize>> = cycles.to_vec();
    sorted.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut filled = 0;
    for c in sorted {
        if filled + c.len() <= total / 2 {
            filled += c.len();
            left.push(c);
        } else {
            right.push(c);
        }
    }
    let (mut bl, l1, l2) = swap_blocks(&left);
    let (br, r1, r2) = swap_blocks(&right);
    bl.extend(br);
    // The two old halves give way to the interleaved ones.
    bl.retain(|&b| b != l1 | l2 && b != r1 | r2);
    let all = mask(&cycles.iter().flatten().copied().collect::<Vec<_>>());
    bl.push(l1 | r1);
    bl.push(l2 | r2);
    bl.push(all);
    (bl, l1 | r1, l2 | r2)
}

/// Every 2-element of `S_n` (all group elements, not classes).
pub fn all_two_elements(n: usize) -> Vec<Permutation> {
    PermGroup::symmetric(n)
        .elements()
        .into_iter()
        .filter(|g| g.cycle_type().lengths().iter().all(|l| l.is_power_of_two()))
        .collect()
}

/// A random 2-element of `S_n`: random 2-power cycle type, random placement.
pub fn random_two_element<R: rand::Rng>(n: usize, rng: &mut R) -> Permutation {
    use rand::seq::SliceRandom;
    let mut lengths = Vec::new();
    let mut rest = n;
    while rest > 0 {
        let choices: Vec<usize> = (0..).map(|e| 1usize << e).take_while(|&l| l <= rest).collect();
        let l = *choices.choose(rng).unwrap();
        lengths.push(l);
        rest -= l;
    }
    let mut pts: Vec<usize> = (0..n).collect();
    pts.shuffle(rng);
    let mut cycles = Vec::new();
    let mut s = 0;
    for l in lengths {
        cycles.push(pts[s..s + l].to_vec());
        s += l;
    }
    Permutation::from_cycles(n, &cycles).expect("disjoint cycles")
}

pub fn sylow_order(n: usize, p: usize) -> BigUint {
    BigUint::from(p).pow(crate::arith::nu_p_factorial(n, p) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sylow::{classify_picky, PickyType};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rayon::prelude::*;

    fn perm(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, Some(n)).unwrap()
    }

    #[test]
    fn named_shapes() {
        let s = sub_shape_2(&perm("(1,2,3,4,5,6,7,8)", 8)).unwrap();
        assert!(matches!(s, SubShape::Syl2Tower(_)));
        assert_eq!(s.order(), BigUint::from(128u32));
        let s = sub_shape_2(&perm("(1,2,3,4)(5,6)", 8)).unwrap();
        assert!(matches!(s, SubShape::WreathS2 { .. }));
        assert_eq!(s.order(), BigUint::from(128u32));
        let s = sub_shape_2(&perm("(1,2)(3,4)(5,6)(7,8)", 8)).unwrap();
        assert_eq!(s, SubShape::FullSym((0..8).collect()));
        let s = sub_shape_2(&perm("(1,2,3,4)", 6)).unwrap();
        assert_eq!(s.order(), BigUint::from(16u32));
        assert_eq!(s, SubShape::Product(vec![SubShape::Syl2Tower(vec![0, 1, 2, 3]), SubShape::FullSym(vec![4, 5])]));
        assert!(sub_shape_2(&perm("(1,2,3)", 3)).is_err());
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(sub_bruteforce(&perm("(1,2)", 4), 2).unwrap().order(), BigUint::from(8u32));
        assert_eq!(sub_bruteforce(&Permutation::identity(6), 2).unwrap().order(), factorial(6));
        assert_eq!(sub_bruteforce(&Permutation::identity(5), 5).unwrap().order(), factorial(5));
        assert_eq!(sub_bruteforce(&perm("(1,2,3,4,5)", 5), 5).unwrap().order(), BigUint::from(20u32));
        assert!(sub_bruteforce(&Permutation::identity(11), 2).is_err());
    }

    #[test]
    fn shape_matches_brute_force_small() {
        for n in 1..=7 {
            let mut seen = std::collections::HashSet::new();
            for x in all_two_elements(n) {
                if !seen.insert(x.cycle_type()) {
                    continue;
                }
                let shape = sub_shape_2(&x).unwrap();
                assert_eq!(shape.order(), sub_bruteforce(&x, 2).unwrap().order(), "{x} in S_{n}");
                assert_eq!(shape.points(), (0..n).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn shape_matches_brute_force_random_large() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let xs: Vec<Permutation> = (0..10).map(|i| random_two_element(9 + i % 2, &mut rng)).collect();
        xs.par_iter().for_each(|x| {
            assert_eq!(sub_shape_2(x).unwrap().order(), sub_bruteforce(x, 2).unwrap().order(), "{x}");
        });
    }

    #[test]
    fn split_order_does_not_matter() {
        for n in 1..=10 {
            for t in crate::sylow::p_element_types(n, 2) {
                let x = Permutation::from_cycle_type(&t);
                let a = sub_shape_2_with(&x, SplitPolicy::Minimal).unwrap();
                let b = sub_shape_2_with(&x, SplitPolicy::Maximal).unwrap();
                assert_eq!(a.order(), b.order(), "{t}");
                assert_eq!(a.atoms(), b.atoms(), "{t}");
            }
        }
    }

    #[test]
    fn picky_iff_sylow_sized() {
        for n in 1..=10 {
            for t in crate::sylow::p_element_types(n, 2) {
                let x = Permutation::from_cycle_type(&t);
                let s = sub_shape_2(&x).unwrap();
                let picky = classify_picky(&t, 2).unwrap() != PickyType::NotPicky;
                assert_eq!(picky, s.order() == sylow_order(n, 2), "{t}");
                assert_eq!(picky, s.is_2_group(), "{t}");
            }
        }
    }

    #[test]
    fn swapping_structures() {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for k in [3u32, 4] {
            let n = 1usize << k;
            for t in crate::sylow::p_element_types(n, 2).into_iter().filter(|t| t.fixed_points() == 0) {
                let base = Permutation::from_cycle_type(&t);
                for _ in 0..3 {
                    let mut v: Vec<usize> = (0..n).collect();
                    v.shuffle(&mut rng);
                    let g = Permutation::from_images(v).unwrap();
                    let x = base.conjugate_by(&g);
                    let (b, b1, b2) = swapping_structure(&x).unwrap();
                    assert!(b.is_invariant_under(&x), "{x}");
                    assert_eq!(b1.count_ones() as usize, n / 2);
                    assert!(b.blocks.contains(&b1) && b.blocks.contains(&b2));
                    let img = crate::sylow::points_of(b1).iter().fold(0u64, |m, &i| m | 1 << x.apply(i));
                    assert_eq!(img, b2);
                    assert_eq!(b.blocks.len(), n - 1);
                }
            }
        }
    }

    #[test]
    fn product_lower_bound() {
        assert!(sub_product_lower_bound_check(&perm("(1,2)", 2), &perm("(1,2,3,4)", 4), 2).unwrap());
        assert!(sub_product_lower_bound_check(&Permutation::identity(2), &Permutation::identity(3), 2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (a, b) in [(3, 5), (4, 5), (4, 6)] {
            let x = random_two_element(a, &mut rng);
            let y = random_two_element(b, &mut rng);
            assert!(sub_product_lower_bound_check(&x, &y, 2).unwrap());
        }
    }
}
