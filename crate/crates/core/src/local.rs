//! Characters of the local groups: iterated wreath products `P_{2^k}`,
//! `H ≀ S_2`, symmetric factors and direct products, evaluated exactly in
//! wreath coordinates; plus closed-form values of the p'-characters of odd-p
//! Sylow normalizers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{check_prime, factorial, PAdicExpansion};
use crate::characters::{centralizer_order as sym_centralizer, degree, mn_value, CycleType};
use crate::error::{Error, Result};
use crate::partition::{partitions, Partition};
use crate::perm::Permutation;
use crate::sylow::BlockStructure;
use crate::tower::CoreTower;

// ---------------------------------------------------------------------------
// Cyclotomic integers

/// Element of `Z[ζ_q]`, `q` a prime power (or 1), in the power basis
/// `1, ζ, …, ζ^{φ(q)−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicInt {
    order: usize,
    coeffs: Vec<BigInt>,
}

fn prime_power_base(q: usize) -> Option<usize> {
    if q == 1 {
        return Some(1);
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut r = q;
    while r % p == 0 {
        r /= p;
    }
    (r == 1).then_some(p)
}

impl CyclotomicInt {
    fn check_order(order: usize) -> Result<usize> {
        if order == 0 {
            return Err(Error::OutOfRange("root of unity order must be positive".into()));
        }
        prime_power_base(order).ok_or_else(|| Error::OutOfRange(format!("order {order} is not a prime power")))
    }

    fn phi(order: usize) -> usize {
        let p = prime_power_base(order).expect("checked");
        if p == 1 {
            1
        } else {
            order / p * (p - 1)
        }
    }

    pub fn from_int(order: usize, v: impl Into<BigInt>) -> Result<CyclotomicInt> {
        Self::check_order(order)?;
        let mut coeffs = vec![BigInt::zero(); Self::phi(order)];
        coeffs[0] = v.into();
        Ok(CyclotomicInt { order, coeffs })
    }

    /// `ζ_q^e`.
    pub fn zeta_power(order: usize, e: usize) -> Result<CyclotomicInt> {
        Self::check_order(order)?;
        let mut raw = vec![BigInt::zero(); order];
        raw[e % order] = BigInt::one();
        Ok(Self::reduce(order, raw))
    }

    /// Reduces a coefficient vector indexed by exponents `0..q` modulo `Φ_q`.
    fn reduce(order: usize, mut raw: Vec<BigInt>) -> CyclotomicInt {
        let p = prime_power_base(order).expect("checked");
        let phi = Self::phi(order);
        if p > 1 {
            let step = order / p;
            // ζ^{(p−1)·step + r} = −Σ_{i<p−1} ζ^{i·step + r}
            for j in (phi..order).rev() {
                let c = std::mem::take(&mut raw[j]);
                if c.is_zero() {
                    continue;
                }
                let r = j - (p - 1) * step;
                for i in 0..p - 1 {
                    raw[r + i * step] -= &c;
                }
            }
        }
        raw.truncate(phi);
        CyclotomicInt { order, coeffs: raw }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_integer(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn to_integer(&self) -> Result<BigInt> {
        if self.is_integer() {
            Ok(self.coeffs[0].clone())
        } else {
            Err(Error::Internal(format!("value {self} is not a rational integer")))
        }
    }
}

impl std::ops::Add for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn add(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        assert_eq!(self.order, rhs.order, "mixed cyclotomic orders");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicInt { order: self.order, coeffs }
    }
}

impl std::ops::Neg for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn neg(self) -> CyclotomicInt {
        CyclotomicInt { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl std::ops::Mul for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn mul(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        assert_eq!(self.order, rhs.order, "mixed cyclotomic orders");
        let mut raw = vec![BigInt::zero(); self.order.max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                raw[(i + j) % self.order] += a * b;
            }
        }
        CyclotomicInt::reduce(self.order, raw)
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            return write!(f, "{}", self.coeffs[0]);
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| if i == 0 { c.to_string() } else { format!("{c}*z{}^{i}", self.order) })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// Local groups

/// Permutation group on `0..degree()` built from symmetric groups by `≀ S_2`
/// and direct products. `Wreath(H)` acts on `2m` points, `H` on the halves
/// `[0,m)` and `[m,2m)`; `Product` factors sit on consecutive intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LocalGroup {
    Trivial,
    Sym(usize),
    Wreath(Box<LocalGroup>),
    Product(Vec<LocalGroup>),
}

/// Splits images of a wreath element on `2m` points into `(h1, h2, swap)`.
/// Base elements map `i ↦ h1(i)`, `m+i ↦ m+h2(i)`; swap elements map
/// `i ↦ m+h1(i)`, `m+i ↦ h2(i)`.
fn wreath_split(m: usize, g: &[usize]) -> Option<(Vec<usize>, Vec<usize>, bool)> {
    let swap = g[0] >= m;
    let (lo, hi) = g.split_at(m);
    let h1: Option<Vec<usize>> = lo.iter().map(|&v| if (v >= m) == swap { Some(v % m) } else { None }).collect();
    let h2: Option<Vec<usize>> = hi.iter().map(|&v| if (v < m) == swap { Some(v % m) } else { None }).collect();
    Some((h1?, h2?, swap))
}

fn then(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().map(|&i| b[i]).collect()
}

fn cycle_type_of(g: &[usize]) -> CycleType {
    Permutation::from_images(g.to_vec()).expect("valid images").cycle_type()
}

/// Complete conjugacy-class invariant inside a [`LocalGroup`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassKey {
    Leaf,
    Sym(CycleType),
    Base(Box<ClassKey>, Box<ClassKey>),
    Swap(Box<ClassKey>),
    Product(Vec<ClassKey>),
}

impl LocalGroup {
    /// `P_{2^k}` as `Wreath^k(Trivial)`.
    pub fn tower(k: u32) -> LocalGroup {
        (0..k).fold(LocalGroup::Trivial, |g, _| LocalGroup::Wreath(Box::new(g)))
    }

    /// Canonical Sylow 2-subgroup of `S_n`: towers on consecutive intervals,
    /// larger blocks on smaller points.
    pub fn canonical_sylow2(n: usize) -> LocalGroup {
        let mut fs: Vec<LocalGroup> =
            BlockStructure::canonical_top_blocks(n, 2).into_iter().map(|(_, k)| LocalGroup::tower(k)).collect();
        if fs.len() == 1 {
            fs.pop().unwrap()
        } else {
            LocalGroup::Product(fs)
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            LocalGroup::Trivial => 1,
            LocalGroup::Sym(m) => *m,
            LocalGroup::Wreath(h) => 2 * h.degree(),
            LocalGroup::Product(fs) => fs.iter().map(LocalGroup::degree).sum(),
        }
    }

    pub fn order(&self) -> BigUint {
        match self {
            LocalGroup::Trivial => BigUint::one(),
            LocalGroup::Sym(m) => factorial(*m),
            LocalGroup::Wreath(h) => {
                let o = h.order();
                BigUint::from(2u32) * &o * &o
            }
            LocalGroup::Product(fs) => fs.iter().map(LocalGroup::order).product(),
        }
    }

    fn offsets(fs: &[LocalGroup]) -> Vec<usize> {
        let mut v = vec![0];
        for f in fs {
            v.push(v.last().unwrap() + f.degree());
        }
        v
    }

    fn factor_images(g: &[usize], lo: usize, hi: usize) -> Option<Vec<usize>> {
        g[lo..hi].iter().map(|&v| (lo..hi).contains(&v).then(|| v - lo)).collect()
    }

    /// Membership of the permutation with these images.
    pub fn contains_images(&self, g: &[usize]) -> bool {
        if g.len() != self.degree() {
            return false;
        }
        match self {
            LocalGroup::Trivial => g == [0],
            LocalGroup::Sym(_) => true,
            LocalGroup::Wreath(h) => match wreath_split(h.degree(), g) {
                Some((h1, h2, _)) => h.contains_images(&h1) && h.contains_images(&h2),
                None => false,
            },
            LocalGroup::Product(fs) => {
                let off = Self::offsets(fs);
                fs.iter().enumerate().all(|(i, f)| match Self::factor_images(g, off[i], off[i + 1]) {
                    Some(sub) => f.contains_images(&sub),
                    None => false,
                })
            }
        }
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.contains_images(g.images())
    }

    /// A full cycle of the group; `None` for products.
    pub fn full_cycle(&self) -> Option<Permutation> {
        self.full_cycle_images().map(|v| Permutation::from_images(v).expect("valid"))
    }

    fn full_cycle_images(&self) -> Option<Vec<usize>> {
        match self {
            LocalGroup::Trivial => Some(vec![0]),
            LocalGroup::Sym(m) => Some((0..*m).map(|i| (i + 1) % m).collect()),
            LocalGroup::Wreath(h) => {
                let c = h.full_cycle_images()?;
                let m = c.len();
                let mut v: Vec<usize> = c.iter().map(|&ci| m + ci).collect();
                v.extend(0..m);
                Some(v)
            }
            LocalGroup::Product(fs) if fs.len() == 1 => fs[0].full_cycle_images(),
            LocalGroup::Product(_) => None,
        }
    }

    /// Product of the full cycles of the factors.
    pub fn adic_element(&self) -> Option<Permutation> {
        let images = match self {
            LocalGroup::Product(fs) => {
                let off = Self::offsets(fs);
                let mut v = Vec::new();
                for (i, f) in fs.iter().enumerate() {
                    v.extend(f.full_cycle_images()?.into_iter().map(|x| x + off[i]));
                }
                v
            }
            other => other.full_cycle_images()?,
        };
        Some(Permutation::from_images(images).expect("valid"))
    }

    /// Irreducible characters, in a fixed canonical order.
    pub fn irr(&self) -> Vec<LocalChar> {
        match self {
            LocalGroup::Trivial => vec![LocalChar::Base],
            LocalGroup::Sym(m) => partitions(*m).into_iter().map(LocalChar::Sym).collect(),
            LocalGroup::Wreath(h) => wreath_irr(&h.irr()),
            LocalGroup::Product(fs) => {
                let mut out: Vec<Vec<LocalChar>> = vec![Vec::new()];
                for f in fs {
                    let irr = f.irr();
                    out = out
                        .into_iter()
                        .flat_map(|pre| {
                            irr.iter().map(move |c| {
                                let mut v = pre.clone();
                                v.push(c.clone());
                                v
                            })
                        })
                        .collect();
                }
                out.into_iter().map(LocalChar::Product).collect()
            }
        }
    }

    /// Conjugacy-class invariant of an element (images assumed in the group).
    pub fn class_key(&self, g: &[usize]) -> ClassKey {
        match self {
            LocalGroup::Trivial => ClassKey::Leaf,
            LocalGroup::Sym(_) => ClassKey::Sym(cycle_type_of(g)),
            LocalGroup::Wreath(h) => {
                let (h1, h2, swap) = wreath_split(h.degree(), g).expect("element of the group");
                if swap {
                    ClassKey::Swap(Box::new(h.class_key(&then(&h1, &h2))))
                } else {
                    let (a, b) = (h.class_key(&h1), h.class_key(&h2));
                    let (a, b) = if a <= b { (a, b) } else { (b, a) };
                    ClassKey::Base(Box::new(a), Box::new(b))
                }
            }
            LocalGroup::Product(fs) => {
                let off = Self::offsets(fs);
                ClassKey::Product(
                    fs.iter()
                        .enumerate()
                        .map(|(i, f)| f.class_key(&Self::factor_images(g, off[i], off[i + 1]).expect("element")))
                        .collect(),
                )
            }
        }
    }

    /// `|C_G(g)|` by the wreath centralizer formulas.
    pub fn centralizer_order(&self, g: &Permutation) -> Result<BigUint> {
        if !self.contains(g) {
            return Err(Error::NotInGroup(format!("{g} is not in {self}")));
        }
        Ok(self.centralizer_images(g.images()))
    }

    fn centralizer_images(&self, g: &[usize]) -> BigUint {
        match self {
            LocalGroup::Trivial => BigUint::one(),
            LocalGroup::Sym(_) => sym_centralizer(&cycle_type_of(g)),
            LocalGroup::Wreath(h) => {
                let (h1, h2, swap) = wreath_split(h.degree(), g).expect("element");
                if swap {
                    BigUint::from(2u32) * h.centralizer_images(&then(&h1, &h2))
                } else {
                    let c = h.centralizer_images(&h1) * h.centralizer_images(&h2);
                    if h.class_key(&h1) == h.class_key(&h2) {
                        c * 2u32
                    } else {
                        c
                    }
                }
            }
            LocalGroup::Product(fs) => {
                let off = Self::offsets(fs);
                fs.iter()
                    .enumerate()
                    .map(|(i, f)| f.centralizer_images(&Self::factor_images(g, off[i], off[i + 1]).expect("element")))
                    .product()
            }
        }
    }

    /// Every element, for groups of order at most `ELEMENT_BOUND`.
    pub fn elements(&self) -> Result<Vec<Permutation>> {
        if self.order() > BigUint::from(ELEMENT_BOUND) {
            return Err(Error::BoundExceeded(format!("{self} has order {} > {ELEMENT_BOUND}", self.order())));
        }
        Ok(self.element_images().into_iter().map(|v| Permutation::from_images(v).expect("valid")).collect())
    }

    fn element_images(&self) -> Vec<Vec<usize>> {
        match self {
            LocalGroup::Trivial => vec![vec![0]],
            LocalGroup::Sym(m) => all_arrangements(*m),
            LocalGroup::Wreath(h) => {
                let hs = h.element_images();
                let m = h.degree();
                let mut out = Vec::with_capacity(2 * hs.len() * hs.len());
                for swap in [false, true] {
                    for a in &hs {
                        for b in &hs {
                            let mut v = vec![0; 2 * m];
                            for i in 0..m {
                                if swap {
                                    v[i] = m + a[i];
                                    v[m + i] = b[i];
                                } else {
                                    v[i] = a[i];
                                    v[m + i] = m + b[i];
                                }
                            }
                            out.push(v);
                        }
                    }
                }
                out
            }
            LocalGroup::Product(fs) => {
                let off = Self::offsets(fs);
                let mut out: Vec<Vec<usize>> = vec![Vec::new()];
                for (i, f) in fs.iter().enumerate() {
                    let es = f.element_images();
                    let o = off[i];
                    out = out
                        .into_iter()
                        .flat_map(|pre| {
                            es.iter().map(move |e| {
                                let mut v = pre.clone();
                                v.extend(e.iter().map(|&x| x + o));
                                v
                            })
                        })
                        .collect();
                }
                out
            }
        }
    }
}

/// Largest group order [`LocalGroup::elements`] will enumerate.
pub const ELEMENT_BOUND: u64 = 200_000;

fn all_arrangements(m: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

fn wreath_irr(inner: &[LocalChar]) -> Vec<LocalChar> {
    let mut out = Vec::with_capacity(inner.len() * (inner.len() + 3) / 2);
    for (i, a) in inner.iter().enumerate() {
        for b in &inner[i + 1..] {
            out.push(LocalChar::pair(a.clone(), b.clone()).expect("distinct"));
        }
    }
    for a in inner {
        for s in [1, -1] {
            out.push(LocalChar::Ext(Box::new(a.clone()), s));
        }
    }
    out
}

impl fmt::Display for LocalGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalGroup::Trivial => write!(f, "1"),
            LocalGroup::Sym(m) => write!(f, "S{m}"),
            LocalGroup::Wreath(h) => match **h {
                LocalGroup::Product(_) => write!(f, "({h})wrS2"),
                _ => write!(f, "{h}wrS2"),
            },
            LocalGroup::Product(fs) => {
                let s: Vec<String> = fs.iter().map(|g| format!("({g})")).collect();
                write!(f, "{}", s.join(" x "))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Characters

/// Irreducible character of a [`LocalGroup`], as a recursive label.
/// Ordered by variant, then fields, with `Ext(φ,+1)` before `Ext(φ,−1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LocalChar {
    /// The trivial group's only character.
    Base,
    /// `χ^λ` of a symmetric factor.
    Sym(Partition),
    /// `(φ × ψ)` induced to `H ≀ S_2`, `φ < ψ`.
    Pair(Box<LocalChar>, Box<LocalChar>),
    /// Extension of `φ × φ`; `+1` takes `φ(h₁h₂)` on the swap coset.
    Ext(Box<LocalChar>, i8),
    Product(Vec<LocalChar>),
}

impl Ord for LocalChar {
    fn cmp(&self, other: &LocalChar) -> std::cmp::Ordering {
        use LocalChar::*;
        fn rank(c: &LocalChar) -> u8 {
            match c {
                Base => 0,
                Sym(_) => 1,
                Pair(..) => 2,
                Ext(..) => 3,
                Product(_) => 4,
            }
        }
        match (self, other) {
            (Sym(a), Sym(b)) => a.cmp(b),
            (Pair(a1, b1), Pair(a2, b2)) => (a1, b1).cmp(&(a2, b2)),
            (Ext(a1, s1), Ext(a2, s2)) => a1.cmp(a2).then(s2.cmp(s1)),
            (Product(a), Product(b)) => a.cmp(b),
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

impl PartialOrd for LocalChar {
    fn partial_cmp(&self, other: &LocalChar) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl LocalChar {
    pub fn pair(a: LocalChar, b: LocalChar) -> Result<LocalChar> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(LocalChar::Pair(Box::new(a), Box::new(b))),
            std::cmp::Ordering::Greater => Ok(LocalChar::Pair(Box::new(b), Box::new(a))),
            std::cmp::Ordering::Equal => Err(Error::Inapplicable(format!("pair of equal characters {a}"))),
        }
    }

    pub fn ext(a: LocalChar, s: i8) -> Result<LocalChar> {
        if s != 1 && s != -1 {
            return Err(Error::OutOfRange(format!("extension sign must be 1 or -1, got {s}")));
        }
        Ok(LocalChar::Ext(Box::new(a), s))
    }

    /// Product label, flattening nested products.
    pub fn product(parts: Vec<LocalChar>) -> LocalChar {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                LocalChar::Product(v) => flat.extend(v),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            LocalChar::Product(flat)
        }
    }

    pub fn degree(&self) -> BigUint {
        match self {
            LocalChar::Base => BigUint::one(),
            LocalChar::Sym(l) => degree(l),
            LocalChar::Pair(a, b) => BigUint::from(2u32) * a.degree() * b.degree(),
            LocalChar::Ext(a, _) => {
                let d = a.degree();
                &d * &d
            }
            LocalChar::Product(v) => v.iter().map(LocalChar::degree).product(),
        }
    }

    /// Depth for labels of `P_{2^k}`; `None` for other groups' labels.
    pub fn depth(&self) -> Option<u32> {
        match self {
            LocalChar::Base => Some(0),
            LocalChar::Pair(a, b) => {
                let d = a.depth()?;
                (b.depth()? == d).then_some(d + 1)
            }
            LocalChar::Ext(a, _) => Some(a.depth()? + 1),
            LocalChar::Sym(_) | LocalChar::Product(_) => None,
        }
    }

    /// Value at a group element; errors if the label does not belong to the
    /// group or the element lies outside it.
    pub fn value(&self, group: &LocalGroup, g: &Permutation) -> Result<BigInt> {
        if !group.contains(g) {
            return Err(Error::NotInGroup(format!("{g} is not in {group}")));
        }
        self.value_images(group, g.images()).map(BigInt::from)
    }

    fn mismatch(&self, group: &LocalGroup) -> Error {
        Error::DepthMismatch(format!("character {self} does not belong to {group}"))
    }

    fn value_images(&self, group: &LocalGroup, g: &[usize]) -> Result<i128> {
        match (self, group) {
            (LocalChar::Base, LocalGroup::Trivial) => Ok(1),
            (LocalChar::Sym(l), LocalGroup::Sym(m)) if l.size() == *m => {
                let v = mn_value(l, &cycle_type_of(g))?;
                v.to_i128().ok_or_else(|| Error::Internal("character value overflow".into()))
            }
            (LocalChar::Pair(a, b), LocalGroup::Wreath(h)) => {
                let (h1, h2, swap) = wreath_split(h.degree(), g).expect("element");
                if swap {
                    // Still reject foreign labels.
                    a.value_images(h, &vec_identity(h.degree()))?;
                    b.value_images(h, &vec_identity(h.degree()))?;
                    return Ok(0);
                }
                let (a1, a2) = (a.value_images(h, &h1)?, a.value_images(h, &h2)?);
                let (b1, b2) = (b.value_images(h, &h1)?, b.value_images(h, &h2)?);
                Ok(a1 * b2 + b1 * a2)
            }
            (LocalChar::Ext(a, s), LocalGroup::Wreath(h)) => {
                let (h1, h2, swap) = wreath_split(h.degree(), g).expect("element");
                if swap {
                    Ok(i128::from(*s) * a.value_images(h, &then(&h1, &h2))?)
                } else {
                    Ok(a.value_images(h, &h1)? * a.value_images(h, &h2)?)
                }
            }
            (LocalChar::Product(cs), LocalGroup::Product(fs)) if cs.len() == fs.len() => {
                let off = LocalGroup::offsets(fs);
                let mut acc = 1i128;
                for (i, (c, f)) in cs.iter().zip(fs).enumerate() {
                    let sub = LocalGroup::factor_images(g, off[i], off[i + 1]).expect("element");
                    acc *= c.value_images(f, &sub)?;
                }
                Ok(acc)
            }
            _ => Err(self.mismatch(group)),
        }
    }
}

fn vec_identity(m: usize) -> Vec<usize> {
    (0..m).collect()
}

impl fmt::Display for LocalChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalChar::Base => write!(f, "b"),
            LocalChar::Ext(a, s) if **a == LocalChar::Base => write!(f, "{}", if *s == 1 { "b0" } else { "b1" }),
            LocalChar::Ext(a, s) => write!(f, "(ext {a} {s})"),
            LocalChar::Pair(a, b) => write!(f, "(pair {a} {b})"),
            LocalChar::Sym(l) => write!(f, "(sym {l})"),
            LocalChar::Product(v) => {
                write!(f, "(prod")?;
                for c in v {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// S-expression reader for labels such as `(ext (pair b0 b1) -1)`.
struct LabelParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> LabelParser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn atom(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest.find(|c: char| c.is_whitespace() || c == '(' || c == ')').unwrap_or(rest.len());
        if len == 0 {
            return Err(self.err("expected a token"));
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn peek_close(&mut self) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(')')
    }

    fn label(&mut self) -> Result<LocalChar> {
        self.skip_ws();
        if !self.src[self.pos..].starts_with('(') {
            let at = self.pos;
            return match self.atom()? {
                "b" => Ok(LocalChar::Base),
                "b0" => Ok(LocalChar::Ext(Box::new(LocalChar::Base), 1)),
                "b1" => Ok(LocalChar::Ext(Box::new(LocalChar::Base), -1)),
                other => Err(Error::Parse { pos: at, msg: format!("unknown label '{other}'") }),
            };
        }
        self.pos += 1;
        let head_at = self.pos;
        let head = self.atom()?;
        let out = match head {
            "ext" => {
                let a = self.label()?;
                let at = self.pos;
                let s: i8 = self.atom()?.parse().map_err(|_| Error::Parse { pos: at, msg: "bad sign".into() })?;
                LocalChar::ext(a, s).map_err(|e| Error::Parse { pos: at, msg: e.to_string() })?
            }
            "pair" => {
                let a = self.label()?;
                let b = self.label()?;
                LocalChar::pair(a, b).map_err(|e| self.err(e.to_string()))?
            }
            "sym" => {
                let at = self.pos;
                let text = self.atom()?;
                LocalChar::Sym(text.parse().map_err(|e: Error| Error::Parse { pos: at, msg: e.to_string() })?)
            }
            "prod" => {
                let mut v = Vec::new();
                while !self.peek_close() {
                    v.push(self.label()?);
                }
                if v.is_empty() {
                    return Err(self.err("empty product"));
                }
                LocalChar::Product(v)
            }
            other => return Err(Error::Parse { pos: head_at, msg: format!("unknown form '{other}'") }),
        };
        self.expect(')')?;
        Ok(out)
    }
}

impl FromStr for LocalChar {
    type Err = Error;

    fn from_str(s: &str) -> Result<LocalChar> {
        let mut p = LabelParser { src: s, pos: 0 };
        let c = p.label()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(c)
    }
}

// ---------------------------------------------------------------------------
// Wreath coordinates for P_{2^k}

/// Element of `P_{2^k}` in recursive wreath coordinates `(h₁, h₂; σ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WreathElement {
    Leaf,
    Node { h1: Box<WreathElement>, h2: Box<WreathElement>, swap: bool },
}

impl WreathElement {
    pub fn identity(k: u32) -> WreathElement {
        (0..k).fold(WreathElement::Leaf, |h, _| WreathElement::Node {
            h1: Box::new(h.clone()),
            h2: Box::new(h),
            swap: false,
        })
    }

    pub fn depth(&self) -> u32 {
        match self {
            WreathElement::Leaf => 0,
            WreathElement::Node { h1, .. } => h1.depth() + 1,
        }
    }

    pub fn from_permutation(k: u32, g: &Permutation) -> Result<WreathElement> {
        if g.degree() != 1 << k {
            return Err(Error::DepthMismatch(format!("{g} does not act on 2^{k} points")));
        }
        Self::from_images(k, g.images()).ok_or_else(|| Error::NotInGroup(format!("{g} is not in P_{}", 1usize << k)))
    }

    fn from_images(k: u32, g: &[usize]) -> Option<WreathElement> {
        if k == 0 {
            return Some(WreathElement::Leaf);
        }
        let (h1, h2, swap) = wreath_split(g.len() / 2, g)?;
        Some(WreathElement::Node {
            h1: Box::new(Self::from_images(k - 1, &h1)?),
            h2: Box::new(Self::from_images(k - 1, &h2)?),
            swap,
        })
    }

    pub fn to_permutation(&self) -> Permutation {
        Permutation::from_images(self.images()).expect("valid")
    }

    fn images(&self) -> Vec<usize> {
        match self {
            WreathElement::Leaf => vec![0],
            WreathElement::Node { h1, h2, swap } => {
                let (a, b) = (h1.images(), h2.images());
                let m = a.len();
                let mut v = vec![0; 2 * m];
                for i in 0..m {
                    if *swap {
                        v[i] = m + a[i];
                        v[m + i] = b[i];
                    } else {
                        v[i] = a[i];
                        v[m + i] = m + b[i];
                    }
                }
                v
            }
        }
    }

    /// `self` followed by `other`, in coordinates.
    pub fn then(&self, other: &WreathElement) -> Result<WreathElement> {
        match (self, other) {
            (WreathElement::Leaf, WreathElement::Leaf) => Ok(WreathElement::Leaf),
            (WreathElement::Node { h1: a1, h2: a2, swap: s }, WreathElement::Node { h1: b1, h2: b2, swap: t }) => {
                let (c1, c2) = if *s { (b2, b1) } else { (b1, b2) };
                Ok(WreathElement::Node { h1: Box::new(a1.then(c1)?), h2: Box::new(a2.then(c2)?), swap: s ^ t })
            }
            _ => Err(Error::DepthMismatch("wreath elements of different depths".into())),
        }
    }

    /// All `2^{2^k−1}` elements of `P_{2^k}`, `k ≤ 4`.
    pub fn all(k: u32) -> Result<Vec<WreathElement>> {
        if k > 4 {
            return Err(Error::BoundExceeded(format!("enumerating P_{} is limited to k <= 4", 1usize << k)));
        }
        if k == 0 {
            return Ok(vec![WreathElement::Leaf]);
        }
        let inner = Self::all(k - 1)?;
        let mut out = Vec::with_capacity(2 * inner.len() * inner.len());
        for swap in [false, true] {
            for a in &inner {
                for b in &inner {
                    out.push(WreathElement::Node { h1: Box::new(a.clone()), h2: Box::new(b.clone()), swap });
                }
            }
        }
        Ok(out)
    }
}

/// Largest `k` for which [`irr_local`] lists characters.
pub const IRR_LIST_BOUND: u32 = 4;

/// `Irr(P_{2^k})` as labels, `k ≤ 4`.
pub fn irr_local(k: u32) -> Result<Vec<LocalChar>> {
    if k > IRR_LIST_BOUND {
        return Err(Error::BoundExceeded(format!("listing Irr(P_{}) is limited to k <= {IRR_LIST_BOUND}", 1u64 << k)));
    }
    Ok(LocalGroup::tower(k).irr())
}

/// Degree multiset of `Irr(P_{2^k})` as `degree -> count`, without listing.
pub fn irr_local_degree_counts(k: u32) -> Result<BTreeMap<BigUint, BigUint>> {
    if k > 8 {
        return Err(Error::BoundExceeded(format!("degree counts are limited to k <= 8, got {k}")));
    }
    let mut dist: BTreeMap<BigUint, BigUint> = BTreeMap::from([(BigUint::one(), BigUint::one())]);
    for _ in 0..k {
        let mut next: BTreeMap<BigUint, BigUint> = BTreeMap::new();
        let items: Vec<(BigUint, BigUint)> = dist.into_iter().collect();
        for (i, (d, c)) in items.iter().enumerate() {
            *next.entry(d * d).or_default() += c * 2u32;
            let same = c * (c - 1u32) / 2u32;
            if !same.is_zero() {
                *next.entry(d * d * 2u32).or_default() += same;
            }
            for (e, c2) in &items[i + 1..] {
                *next.entry(d * e * 2u32).or_default() += c * c2;
            }
        }
        dist = next;
    }
    Ok(dist)
}

/// `χ` at an element of `P_{2^k}` given in wreath coordinates.
pub fn eval_local(chi: &LocalChar, g: &WreathElement) -> Result<CyclotomicInt> {
    if chi.depth() != Some(g.depth()) {
        return Err(Error::DepthMismatch(format!("{chi} does not label a character of P_{}", 1usize << g.depth())));
    }
    CyclotomicInt::from_int(1 << g.depth(), eval_coords(chi, g))
}

fn eval_coords(chi: &LocalChar, g: &WreathElement) -> BigInt {
    match (chi, g) {
        (LocalChar::Base, WreathElement::Leaf) => BigInt::one(),
        (LocalChar::Pair(a, b), WreathElement::Node { h1, h2, swap }) => {
            if *swap {
                BigInt::zero()
            } else {
                eval_coords(a, h1) * eval_coords(b, h2) + eval_coords(b, h1) * eval_coords(a, h2)
            }
        }
        (LocalChar::Ext(a, s), WreathElement::Node { h1, h2, swap }) => {
            if *swap {
                BigInt::from(*s) * eval_coords(a, &h1.then(h2).expect("same depth"))
            } else {
                eval_coords(a, h1) * eval_coords(a, h2)
            }
        }
        _ => unreachable!("depths checked"),
    }
}

// ---------------------------------------------------------------------------
// Frames: local groups placed on global points

/// A [`LocalGroup`] placed on global points: local position `i` is the
/// global point `layout[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub group: LocalGroup,
    pub layout: Vec<usize>,
}

impl Frame {
    /// Canonical Sylow 2-subgroup of `S_n` on the identity layout.
    pub fn canonical_sylow2(n: usize) -> Frame {
        Frame { group: LocalGroup::canonical_sylow2(n), layout: (0..n).collect() }
    }

    /// Direct product of frames on disjoint point sets.
    pub fn product(frames: Vec<Frame>) -> Frame {
        let mut groups = Vec::new();
        let mut layout = Vec::new();
        for f in frames {
            layout.extend(f.layout);
            match f.group {
                LocalGroup::Product(v) => groups.extend(v),
                g => groups.push(g),
            }
        }
        let group = if groups.len() == 1 { groups.pop().unwrap() } else { LocalGroup::Product(groups) };
        Frame { group, layout }
    }

    /// `x` in local coordinates; errors if `x` leaves the frame's points or
    /// its local image is outside the group.
    pub fn to_local(&self, x: &Permutation) -> Result<Permutation> {
        let mut pos = vec![usize::MAX; x.degree()];
        for (i, &pt) in self.layout.iter().enumerate() {
            if pt >= x.degree() {
                return Err(Error::PointOutOfRange { point: pt + 1, n: x.degree() });
            }
            pos[pt] = i;
        }
        let images: Option<Vec<usize>> = self
            .layout
            .iter()
            .map(|&pt| {
                let q = pos[x.apply(pt)];
                (q != usize::MAX).then_some(q)
            })
            .collect();
        let images = images.ok_or_else(|| Error::NotInGroup(format!("{x} moves points out of the frame")))?;
        if !self.group.contains_images(&images) {
            return Err(Error::NotInGroup(format!("{x} is not in the local group {}", self.group)));
        }
        Ok(Permutation::from_images(images).expect("valid"))
    }

    /// Local element as a permutation of `0..n`, identity off the frame.
    pub fn to_global(&self, g: &Permutation, n: usize) -> Permutation {
        let mut images: Vec<usize> = (0..n).collect();
        for (i, &pt) in self.layout.iter().enumerate() {
            images[pt] = self.layout[g.apply(i)];
        }
        Permutation::from_images(images).expect("valid")
    }
}

/// `Irr^x(P_n)` for `x` in the canonical Sylow 2-subgroup of `S_n`.
pub fn irr_x_local(n: usize, x: &Permutation) -> Result<Vec<LocalChar>> {
    if x.degree() != n {
        return Err(Error::OutOfRange(format!("{x} does not act on {n} points")));
    }
    if n > 16 {
        return Err(Error::BoundExceeded(format!("irr_x_local is limited to n <= 16, got {n}")));
    }
    let frame = Frame::canonical_sylow2(n);
    let g = frame
        .to_local(x)
        .map_err(|_| Error::NotInGroup(format!("{x} is not in the canonical Sylow 2-subgroup of S_{n}")))?;
    let mut out = Vec::new();
    for c in frame.group.irr() {
        if !c.value(&frame.group, &g)?.is_zero() {
            out.push(c);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Odd-p normalizer characters

/// Degree and value at a `p^t`-cycle of the `j`-th p'-character of
/// `N_{S_{p^t}}(P)`: one factor per base-`p` digit of `j`, a digit `p−1`
/// contributing degree `p−1` and value `−1`, any other digit a linear
/// character with value `1`.
pub fn pprime_label(p: usize, t: u32, j: usize) -> (BigUint, i8) {
    let mut deg = BigUint::one();
    let mut sign = 1i8;
    let mut r = j;
    for _ in 0..t {
        if r % p == p - 1 {
            deg *= p - 1;
            sign = -sign;
        }
        r /= p;
    }
    (deg, sign)
}

/// `a! / ∏|λ_i|! · ∏ χ^{λ_i}(1)`: the absolute value of `Φ^λ` at a p-adic
/// element when the only nonempty tower row is row `k` with these entries.
pub fn phi_value_small(p: usize, a: usize, k: u32, rowdata: &[Partition]) -> Result<BigUint> {
    check_prime(p)?;
    if a >= p {
        return Err(Error::OutOfRange(format!("row weight {a} must be below p = {p}")));
    }
    if rowdata.len() != p.pow(k) {
        return Err(Error::OutOfRange(format!("row {k} needs {} entries, got {}", p.pow(k), rowdata.len())));
    }
    let total: usize = rowdata.iter().map(Partition::size).sum();
    if total != a {
        return Err(Error::SizeMismatch { partition: total, cycle_type: a });
    }
    let mut v = factorial(a);
    for l in rowdata {
        v /= factorial(l.size());
    }
    for l in rowdata {
        v *= degree(l);
    }
    Ok(v)
}

fn check_pprime_tower(p: usize, n: usize, tower: &CoreTower) -> Result<()> {
    if tower.p != p {
        return Err(Error::Inapplicable(format!("tower is for p = {}, not {p}", tower.p)));
    }
    if tower.size() != n {
        return Err(Error::SizeMismatch { partition: tower.size(), cycle_type: n });
    }
    let d = PAdicExpansion::new(n, p);
    if tower.row_weights().iter().enumerate().any(|(i, &w)| w != d.digit(i)) {
        return Err(Error::Inapplicable("tower is not p'-degree (row weights differ from the p-adic digits)".into()));
    }
    Ok(())
}

/// `|Φ^λ(x)|` for the p-adic element `x`: product of [`phi_value_small`]
/// over the tower rows.
pub fn phi_value_general(p: usize, n: usize, tower: &CoreTower) -> Result<BigUint> {
    check_prime(p)?;
    check_pprime_tower(p, n, tower)?;
    let mut v = BigUint::one();
    for (t, row) in tower.rows.iter().enumerate() {
        let a = row.iter().map(Partition::size).sum();
        v *= phi_value_small(p, a, t as u32, row)?;
    }
    Ok(v)
}

/// The p'-character `Φ^λ` of `N_{S_n}(P_n)`, odd `p`, held by its tower.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhiChar {
    pub p: usize,
    pub n: usize,
    pub tower: CoreTower,
}

impl PhiChar {
    pub fn new(lambda: &Partition, p: usize) -> Result<PhiChar> {
        let tower = CoreTower::build(lambda, p)?;
        check_pprime_tower(p, lambda.size(), &tower)?;
        Ok(PhiChar { p, n: lambda.size(), tower })
    }

    /// `∏_t a_t!/∏_j|λ_tj|! · ∏ χ^{λ_tj}(1) · ∏ deg(label j)^{|λ_tj|}`.
    pub fn degree(&self) -> BigUint {
        let mut d = BigUint::one();
        for (t, row) in self.tower.rows.iter().enumerate() {
            let a: usize = row.iter().map(Partition::size).sum();
            d *= phi_value_small(self.p, a, t as u32, row).expect("validated tower");
            for (j, l) in row.iter().enumerate() {
                let (dj, _) = pprime_label(self.p, t as u32, j);
                d *= dj.pow(l.size() as u32);
            }
        }
        d
    }

    /// Signed value at the canonical p-adic element.
    pub fn value_at_adic(&self) -> BigInt {
        let abs = phi_value_general(self.p, self.n, &self.tower).expect("validated tower");
        let mut sign = 1i8;
        for (t, row) in self.tower.rows.iter().enumerate() {
            for (j, l) in row.iter().enumerate() {
                let (_, s) = pprime_label(self.p, t as u32, j);
                if s < 0 && l.size() % 2 == 1 {
                    sign = -sign;
                }
            }
        }
        let v = BigInt::from(abs);
        if sign < 0 {
            -v
        } else {
            v
        }
    }
}

impl fmt::Display for PhiChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(phi {}", self.p)?;
        for row in &self.tower.rows {
            let cells: Vec<String> =
                row.iter().map(|l| if l.is_empty() { "-".to_string() } else { l.to_string() }).collect();
            write!(f, " [{}]", cells.join(";"))?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use crate::characters::MnEvaluator;
    use crate::sylow::{element_in_canonical, p_adic_element, type_ii_element};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::collections::{BTreeSet, HashSet};

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn cyclotomic_arithmetic() {
        let z = CyclotomicInt::zeta_power(8, 1).unwrap();
        let mut acc = CyclotomicInt::from_int(8, 1).unwrap();
        for _ in 0..8 {
            acc = &acc * &z;
        }
        assert_eq!(acc, CyclotomicInt::from_int(8, 1).unwrap());
        // ζ_8^4 = −1
        assert_eq!(CyclotomicInt::zeta_power(8, 4).unwrap().to_integer().unwrap(), BigInt::from(-1));
        // 1 + ζ + ζ² = 0 for ζ = ζ_3
        let s = (0..3).fold(CyclotomicInt::from_int(3, 0).unwrap(), |a, e| &a + &CyclotomicInt::zeta_power(3, e).unwrap());
        assert!(s.is_integer() && s.to_integer().unwrap().is_zero());
        // ζ_9 + ζ_9^8 is real but irrational
        let r = &CyclotomicInt::zeta_power(9, 1).unwrap() + &CyclotomicInt::zeta_power(9, 8).unwrap();
        assert!(!r.is_integer());
        assert!(r.to_integer().is_err());
        assert!(CyclotomicInt::from_int(6, 1).is_err());
        let neg = -&CyclotomicInt::zeta_power(4, 1).unwrap();
        assert_eq!(&neg * &neg, CyclotomicInt::from_int(4, -1).unwrap());
    }

    #[test]
    fn irr_counts_and_degree_sums() {
        let expected = [2usize, 5, 20, 230];
        for k in 1..=4u32 {
            let irr = irr_local(k).unwrap();
            assert_eq!(irr.len(), expected[k as usize - 1]);
            let distinct: HashSet<&LocalChar> = irr.iter().collect();
            assert_eq!(distinct.len(), irr.len());
            let sq: BigUint = irr.iter().map(|c| c.degree() * c.degree()).sum();
            assert_eq!(sq, BigUint::from(2u32).pow((1 << k) - 1));
            assert_eq!(irr.iter().filter(|c| c.degree().is_one()).count(), 1 << k);
            assert!(irr.iter().all(|c| c.depth() == Some(k)));
        }
        assert!(matches!(irr_local(5), Err(Error::BoundExceeded(_))));
        let c5 = irr_local_degree_counts(5).unwrap();
        let total: BigUint = c5.values().sum();
        assert_eq!(total, BigUint::from(26795u32));
        let sq: BigUint = c5.iter().map(|(d, c)| d * d * c).sum();
        assert_eq!(sq, BigUint::from(2u64).pow(31));
        assert_eq!(c5[&BigUint::one()], BigUint::from(32u32));
    }

    #[test]
    fn huppert_degree_sets() {
        for k in 3..=5u32 {
            let degrees: BTreeSet<BigUint> = irr_local_degree_counts(k).unwrap().into_keys().collect();
            let top = (1u32 << (k - 2)) + (1 << (k - 3)) - 1;
            let want: BTreeSet<BigUint> = (0..=top).map(|j| BigUint::from(2u32).pow(j)).collect();
            assert_eq!(degrees, want, "k = {k}");
        }
        let k3: BTreeSet<BigUint> = irr_local(3).unwrap().iter().map(LocalChar::degree).collect();
        assert_eq!(k3, [1u32, 2, 4].iter().map(|&d| BigUint::from(d)).collect());
    }

    #[test]
    fn wreath_coordinates_round_trip_and_compose() {
        let all = WreathElement::all(3).unwrap();
        assert_eq!(all.len(), 128);
        let perms: HashSet<Permutation> = all.iter().map(WreathElement::to_permutation).collect();
        assert_eq!(perms.len(), 128);
        let g = LocalGroup::tower(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = all.choose(&mut rng).unwrap();
            let b = all.choose(&mut rng).unwrap();
            assert_eq!(WreathElement::from_permutation(3, &a.to_permutation()).unwrap(), *a);
            let ab = a.then(b).unwrap();
            assert_eq!(ab.to_permutation(), a.to_permutation().then(&b.to_permutation()));
            assert!(g.contains(&ab.to_permutation()));
        }
        // Not in the interval Sylow subgroup.
        let x = Permutation::parse("(1,2,3,4)(5,6)", Some(8)).unwrap();
        assert!(WreathElement::from_permutation(3, &x).is_err());
    }

    #[test]
    fn coordinate_and_permutation_evaluators_agree() {
        let g = LocalGroup::tower(3);
        let irr = irr_local(3).unwrap();
        for e in WreathElement::all(3).unwrap() {
            let perm = e.to_permutation();
            for c in &irr {
                let a = eval_local(c, &e).unwrap().to_integer().unwrap();
                assert_eq!(a, c.value(&g, &perm).unwrap());
            }
        }
    }

    #[test]
    fn sign_rules() {
        let phi = LocalChar::pair(LocalChar::Ext(Box::new(LocalChar::Base), 1), LocalChar::Ext(Box::new(LocalChar::Base), -1)).unwrap();
        let minus = LocalChar::ext(phi.clone(), -1).unwrap();
        let plus = LocalChar::ext(phi.clone(), 1).unwrap();
        // (1, 1; swap) at depth 3
        let swap = WreathElement::Node {
            h1: Box::new(WreathElement::identity(2)),
            h2: Box::new(WreathElement::identity(2)),
            swap: true,
        };
        assert_eq!(eval_local(&minus, &swap).unwrap().to_integer().unwrap(), BigInt::from(-2));
        assert_eq!(eval_local(&plus, &swap).unwrap().to_integer().unwrap(), BigInt::from(2));
        // Ext(φ,−1) = Ext(φ,+1) times the sign of the top coordinate.
        for e in WreathElement::all(3).unwrap() {
            let top = match &e {
                WreathElement::Node { swap: true, .. } => -1,
                _ => 1,
            };
            let a = eval_local(&minus, &e).unwrap().to_integer().unwrap();
            let b = eval_local(&plus, &e).unwrap().to_integer().unwrap();
            assert_eq!(a, b * top);
        }
        for c in irr_local(3).unwrap().iter().filter(|c| matches!(c, LocalChar::Pair(..))) {
            assert!(eval_local(c, &swap).unwrap().to_integer().unwrap().is_zero());
        }
        assert!(matches!(eval_local(&plus, &WreathElement::identity(2)), Err(Error::DepthMismatch(_))));
    }

    fn inner(a: &LocalChar, b: &LocalChar, g: &LocalGroup, elems: &[Permutation]) -> BigInt {
        elems.iter().map(|e| a.value(g, e).unwrap() * b.value(g, e).unwrap()).sum()
    }

    #[test]
    fn first_orthogonality_on_p8() {
        let g = LocalGroup::tower(3);
        let elems = g.elements().unwrap();
        assert_eq!(elems.len(), 128);
        let irr = irr_local(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = irr.choose(&mut rng).unwrap();
            let b = irr.choose(&mut rng).unwrap();
            let want = if a == b { 128 } else { 0 };
            assert_eq!(inner(a, b, &g, &elems), BigInt::from(want), "{a} vs {b}");
        }
        // And the full table for a group with a symmetric base.
        let w = LocalGroup::Wreath(Box::new(LocalGroup::Sym(3)));
        let elems = w.elements().unwrap();
        let irr = w.irr();
        assert_eq!(irr.len(), 9);
        for a in &irr {
            for b in &irr {
                let want = if a == b { 72 } else { 0 };
                assert_eq!(inner(a, b, &w, &elems), BigInt::from(want));
            }
        }
    }

    #[test]
    fn class_keys_count_classes_and_centralizers() {
        for g in [LocalGroup::tower(3), LocalGroup::Wreath(Box::new(LocalGroup::Sym(3))), LocalGroup::Wreath(Box::new(LocalGroup::tower(1)))] {
            let elems = g.elements().unwrap();
            let keys: HashSet<ClassKey> = elems.iter().map(|e| g.class_key(e.images())).collect();
            assert_eq!(keys.len(), g.irr().len(), "{g}");
            for e in elems.iter().step_by(7) {
                let brute = elems.iter().filter(|h| e.then(h) == h.then(e)).count();
                assert_eq!(g.centralizer_order(e).unwrap(), BigUint::from(brute));
            }
        }
    }

    #[test]
    fn second_orthogonality_at_adic_elements() {
        for n in 1..=12usize {
            let frame = Frame::canonical_sylow2(n);
            let x = element_in_canonical(&p_adic_element(n, 2).unwrap(), 2).unwrap();
            let g = frame.to_local(&x).unwrap();
            let labels = irr_x_local(n, &x).unwrap();
            let sum: BigInt = labels.iter().map(|c| c.value(&frame.group, &g).unwrap().pow(2)).sum();
            assert_eq!(sum, BigInt::from(sym_centralizer(&x.cycle_type())), "n = {n}");
            assert_eq!(sum, BigInt::from(frame.group.centralizer_order(&g).unwrap()));
        }
    }

    #[test]
    fn irr_x_local_examples() {
        let x = element_in_canonical(&CycleType::new(vec![8]).unwrap(), 2).unwrap();
        let l = irr_x_local(8, &x).unwrap();
        assert_eq!(l.len(), 8);
        let g = LocalGroup::tower(3);
        assert!(l.iter().all(|c| c.degree().is_one() && c.value(&g, &x).unwrap().abs().is_one()));

        let y = element_in_canonical(&type_ii_element(8).unwrap(), 2).unwrap();
        let l = irr_x_local(8, &y).unwrap();
        let lin: Vec<&LocalChar> = l.iter().filter(|c| c.degree().is_one()).collect();
        let rest: Vec<&LocalChar> = l.iter().filter(|c| !c.degree().is_one()).collect();
        assert_eq!(lin.len(), 8);
        assert_eq!(rest.len(), 2);
        assert!(lin.iter().all(|c| c.value(&g, &y).unwrap().abs().is_one()));
        for c in rest {
            assert_eq!(c.degree() % 4u32, BigUint::from(2u32));
            assert_eq!(c.value(&g, &y).unwrap().abs(), BigInt::from(2));
        }
        assert_eq!(irr_x_local(8, &Permutation::identity(8)).unwrap().len(), 20);
        let outside = Permutation::parse("(1,2,3,4)(5,6)", Some(8)).unwrap();
        assert!(matches!(irr_x_local(8, &outside), Err(Error::NotInGroup(_))));
    }

    #[test]
    fn label_syntax_round_trips() {
        for text in ["b", "b0", "b1", "(ext (pair b0 b1) -1)", "(pair (ext b0 1) (ext b1 -1))", "(prod (sym 3,1) b0)"] {
            let c: LocalChar = text.parse().unwrap();
            assert_eq!(c.to_string(), text);
        }
        for c in irr_local(3).unwrap() {
            assert_eq!(c.to_string().parse::<LocalChar>().unwrap(), c);
        }
        // Pairs are stored in canonical order.
        let a: LocalChar = "(pair b1 b0)".parse().unwrap();
        assert_eq!(a.to_string(), "(pair b0 b1)");
        assert!(matches!("(pair b0 b0)".parse::<LocalChar>(), Err(Error::Parse { .. })));
        assert!(matches!("(ext b0 2)".parse::<LocalChar>(), Err(Error::Parse { .. })));
        assert!(matches!("(ext b0 1".parse::<LocalChar>(), Err(Error::Parse { pos: 9, .. })));
        assert!(matches!("q".parse::<LocalChar>(), Err(Error::Parse { pos: 0, .. })));
    }

    #[test]
    fn frames_move_elements() {
        let f = Frame { group: LocalGroup::tower(2), layout: vec![5, 2, 7, 0] };
        let c = f.group.full_cycle().unwrap();
        let global = f.to_global(&c, 8);
        assert_eq!(global.cycle_type(), CycleType::new(vec![4, 1, 1, 1, 1]).unwrap());
        assert_eq!(f.to_local(&global).unwrap(), c);
        let bad = Permutation::parse("(1,2)", Some(8)).unwrap();
        assert!(f.to_local(&bad).is_err());
        let p = Frame::product(vec![f.clone(), Frame { group: LocalGroup::Sym(2), layout: vec![1, 3] }]);
        assert_eq!(p.group.degree(), 6);
        assert_eq!(p.group.adic_element().unwrap().cycle_type(), CycleType::new(vec![4, 2]).unwrap());
    }

    /// Tower of `λ ⊢ a·p^k` whose only nonempty row is row `k`.
    fn row_partition(p: usize, k: usize, row: &[Partition]) -> Partition {
        let mut rows: Vec<Vec<Partition>> = (0..k).map(|i| vec![Partition::empty(); p.pow(i as u32)]).collect();
        rows.push(row.to_vec());
        CoreTower { p, rows }.to_partition().unwrap()
    }

    #[test]
    fn phi_small_against_character_values() {
        let one = part(&[1]);
        let e = Partition::empty();
        let l = row_partition(3, 1, &[one.clone(), one.clone(), e.clone()]);
        assert_eq!(l.size(), 6);
        assert_eq!(phi_value_small(3, 2, 1, &[one.clone(), one.clone(), e.clone()]).unwrap(), BigUint::from(2u32));
        let oracle = mn_value(&l, &CycleType::new(vec![3, 3]).unwrap()).unwrap();
        assert_eq!(oracle.abs(), BigInt::from(2));
        let two = part(&[2]);
        let l = row_partition(3, 1, &[two.clone(), e.clone(), e.clone()]);
        assert_eq!(phi_value_small(3, 2, 1, &[two, e.clone(), e.clone()]).unwrap(), BigUint::one());
        assert_eq!(mn_value(&l, &CycleType::new(vec![3, 3]).unwrap()).unwrap().abs(), BigInt::one());
        assert!(phi_value_small(3, 2, 1, &[one.clone(), e.clone(), e.clone()]).is_err());
        assert!(phi_value_small(3, 3, 0, &[part(&[3])]).is_err());
        // a = 1 gives 1 whatever the slot.
        for j in 0..5 {
            let mut row = vec![e.clone(); 5];
            row[j] = one.clone();
            assert!(phi_value_small(5, 1, 1, &row).unwrap().is_one());
        }
    }

    #[test]
    fn phi_general_matches_character_values() {
        for p in [3usize, 5] {
            for n in 1..=10 {
                let t = p_adic_element(n, p).unwrap();
                let mut ev = MnEvaluator::new(&t);
                for l in crate::characters::irr_p_prime(n, p).unwrap() {
                    let phi = PhiChar::new(&l, p).unwrap();
                    let v = phi_value_general(p, n, &phi.tower).unwrap();
                    assert_eq!(BigInt::from(v.clone()), ev.value(&l).unwrap().abs(), "p={p} n={n} {l}");
                    assert_eq!(phi.value_at_adic().abs().to_biguint().unwrap(), v);
                    assert!(!(phi.degree() % p).is_zero());
                }
            }
        }
        assert!(phi_value_general(3, 4, &CoreTower::build(&Partition::new(vec![4]).unwrap(), 3).unwrap()).unwrap().is_one());
        let bad = CoreTower::build(&part(&[3, 1]), 3).unwrap();
        assert!(matches!(phi_value_general(3, 4, &bad), Err(Error::Inapplicable(_))));
    }

    #[test]
    fn phi_degrees_at_n_equal_p() {
        // N_{S_p}(C_p) = C_p ⋊ C_{p−1}: p−1 linear characters and one of degree p−1.
        for p in [3usize, 5, 7] {
            let mut degs: Vec<BigUint> = crate::characters::irr_p_prime(p, p)
                .unwrap()
                .iter()
                .map(|l| PhiChar::new(l, p).unwrap().degree())
                .collect();
            degs.sort();
            let mut want = vec![BigUint::one(); p - 1];
            want.push(BigUint::from(p - 1));
            assert_eq!(degs, want);
        }
    }

    #[test]
    fn pprime_labels_of_p_cycle_normalizer() {
        // N_{S_3}(C_3) = S_3: degrees 1, 1, 2 with values 1, 1, −1 at a 3-cycle.
        let labels: Vec<(BigUint, i8)> = (0..3).map(|j| pprime_label(3, 1, j)).collect();
        assert_eq!(labels, vec![(BigUint::one(), 1), (BigUint::one(), 1), (BigUint::from(2u32), -1)]);
        let sum: BigUint = labels.iter().map(|(d, _)| d * d).sum();
        assert_eq!(sum, BigUint::from(6u32));
    }
}
