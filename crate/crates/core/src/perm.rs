//! Permutations on `{0..n}` (printed 1-based) and a small Schreier–Sims
//! group engine.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::characters::CycleType;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation { images: (0..n).collect() }
    }

    /// From 0-based images; checks bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n {
                return Err(Error::PointOutOfRange { point: i + 1, n });
            }
            if seen[i] {
                return Err(Error::RepeatedPoint(i + 1));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// From 0-based cycles on `n` points.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Permutation> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for c in cycles {
            for (i, &a) in c.iter().enumerate() {
                if a >= n {
                    return Err(Error::PointOutOfRange { point: a + 1, n });
                }
                if used[a] {
                    return Err(Error::RepeatedPoint(a + 1));
                }
                used[a] = true;
                images[a] = c[(i + 1) % c.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Disjoint consecutive cycles `(0..l1)(l1..l1+l2)…` with the given lengths.
    pub fn from_cycle_type(t: &CycleType) -> Permutation {
        let mut cycles = Vec::new();
        let mut start = 0;
        for &l in t.lengths() {
            cycles.push((start..start + l).collect());
            start += l;
        }
        Permutation::from_cycles(start, &cycles).expect("consecutive cycles are disjoint")
    }

    /// The cycle `(0,1,…,n−1)`.
    pub fn long_cycle(n: usize) -> Permutation {
        Permutation { images: (0..n).map(|i| (i + 1) % n.max(1)).collect() }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Permutation {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&i| other.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// `g⁻¹ x g`, i.e. relabel points through `g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().then(self).then(g)
    }

    /// Cycles including fixed points, each starting at its least point,
    /// ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut i = self.images[s];
            while i != s {
                seen[i] = true;
                c.push(i);
                i = self.images[i];
            }
            out.push(c);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::new(self.cycles().iter().map(Vec::len).collect()).expect("cycles are nonempty")
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.images[i] != i).collect()
    }

    pub fn order(&self) -> usize {
        self.cycle_type().order()
    }

    /// Extends to `m ≥ n` points by fixing the new ones.
    pub fn extend(&self, m: usize) -> Permutation {
        let mut images = self.images.clone();
        images.extend(self.images.len()..m);
        Permutation { images }
    }

    /// Acts on `offset..offset+n` inside `total` points.
    pub fn shifted(&self, offset: usize, total: usize) -> Permutation {
        let mut images: Vec<usize> = (0..total).collect();
        for (i, &j) in self.images.iter().enumerate() {
            images[offset + i] = offset + j;
        }
        Permutation { images }
    }

    /// Restriction to an invariant set of points, relabelled `0..points.len()`
    /// in the given order.
    pub fn restrict(&self, points: &[usize]) -> Result<Permutation> {
        let mut index = vec![usize::MAX; self.degree()];
        for (k, &p) in points.iter().enumerate() {
            index[p] = k;
        }
        let images: Result<Vec<usize>> = points
            .iter()
            .map(|&p| {
                let q = index[self.images[p]];
                if q == usize::MAX {
                    Err(Error::Inapplicable(format!("point {} leaves the restricted set", p + 1)))
                } else {
                    Ok(q)
                }
            })
            .collect();
        Permutation::from_images(images?)
    }

    /// Parses cycle notation `"(1,2,3)(4,5)"` or one-line images `"2 3 1"` /
    /// `"[2,3,1]"`, all 1-based. `n` pads cycle notation with fixed points.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Permutation> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "()" {
            return Ok(Permutation::identity(n.unwrap_or(0)));
        }
        if trimmed.starts_with('(') {
            parse_cycles(text, n)
        } else {
            parse_one_line(text, n)
        }
    }
}

fn parse_number(text: &str, start: usize, n: Option<usize>) -> Result<usize> {
    let t = text.trim();
    let v: usize = t.parse().map_err(|_| Error::Parse { pos: start, msg: format!("malformed token {t:?}") })?;
    if v == 0 {
        return Err(Error::PointOutOfRange { point: 0, n: n.unwrap_or(0) });
    }
    if let Some(n) = n {
        if v > n {
            return Err(Error::PointOutOfRange { point: v, n });
        }
    }
    Ok(v - 1)
}

fn parse_cycles(text: &str, n: Option<usize>) -> Result<Permutation> {
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b' ' | b'\t' => i += 1,
            b'(' => {
                let close = text[i..]
                    .find(')')
                    .map(|c| c + i)
                    .ok_or(Error::Parse { pos: i, msg: "unclosed cycle".into() })?;
                let body = &text[i + 1..close];
                let mut cycle = Vec::new();
                if !body.trim().is_empty() {
                    let sep = if body.contains(',') { ',' } else { ' ' };
                    let mut pos = i + 1;
                    for tok in body.split(sep) {
                        if !tok.trim().is_empty() {
                            cycle.push(parse_number(tok, pos, n)?);
                        }
                        pos += tok.len() + 1;
                    }
                }
                cycles.push(cycle);
                i = close + 1;
            }
            _ => return Err(Error::Parse { pos: i, msg: format!("unexpected {:?}", bytes[i] as char) }),
        }
    }
    let largest = cycles.iter().flatten().map(|&a| a + 1).max().unwrap_or(0);
    let size = n.unwrap_or(largest).max(largest);
    Permutation::from_cycles(size, &cycles)
}

fn parse_one_line(text: &str, n: Option<usize>) -> Result<Permutation> {
    let body = text.trim().trim_start_matches('[').trim_end_matches(']');
    let offset = text.find(body).unwrap_or(0);
    let mut images = Vec::new();
    let mut pos = offset;
    for tok in body.split(|c: char| c == ',' || c.is_whitespace()) {
        if !tok.is_empty() {
            images.push(parse_number(tok, pos, None)?);
        }
        pos += tok.len() + 1;
    }
    if let Some(n) = n {
        if images.len() != n {
            return Err(Error::Parse { pos: 0, msg: format!("expected {n} images, got {}", images.len()) });
        }
    }
    Permutation::from_images(images)
}

impl Mul for &Permutation {
    type Output = Permutation;

    /// `a * b` applies `a` first.
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs)
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, 1-based, fixed points omitted; identity is `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for c in self.cycles() {
            if c.len() > 1 {
                any = true;
                let s: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
                write!(f, "({})", s.join(","))?;
            }
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Permutation group with a stabilizer chain for base `0,1,…,n−1`.
#[derive(Clone, Debug)]
pub struct PermGroup {
    n: usize,
    generators: Vec<Permutation>,
    /// `transversal[k][j]` maps `k` to `j` and fixes `0..k`.
    transversal: Vec<Vec<Option<Permutation>>>,
    strong: Vec<Vec<Permutation>>,
}

impl PermGroup {
    pub fn trivial(n: usize) -> PermGroup {
        let transversal = (0..n)
            .map(|k| {
                let mut row = vec![None; n];
                row[k] = Some(Permutation::identity(n));
                row
            })
            .collect();
        PermGroup { n, generators: Vec::new(), transversal, strong: vec![Vec::new(); n] }
    }

    pub fn generate(n: usize, gens: &[Permutation]) -> PermGroup {
        let mut g = PermGroup::trivial(n);
        for s in gens {
            g.add_generator(s);
        }
        g
    }

    pub fn symmetric(n: usize) -> PermGroup {
        if n < 2 {
            return PermGroup::trivial(n);
        }
        PermGroup::generate(n, &[Permutation::transposition(n, 0, 1), Permutation::long_cycle(n)])
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn add_generator(&mut self, g: &Permutation) {
        assert_eq!(g.degree(), self.n, "generator degree");
        if self.contains(g) {
            return;
        }
        self.generators.push(g.clone());
        self.extend_level(0, g.clone());
    }

    fn sift(&self, from: usize, g: &Permutation) -> Option<Permutation> {
        let mut h = g.clone();
        for k in from..self.n {
            let j = h.apply(k);
            match &self.transversal[k][j] {
                Some(t) => h = h.then(&t.inverse()),
                None => return None,
            }
        }
        Some(h)
    }

    fn contains_from(&self, k: usize, g: &Permutation) -> bool {
        self.sift(k, g).is_some_and(|h| h.is_identity())
    }

    fn extend_level(&mut self, k: usize, g: Permutation) {
        if k >= self.n || self.contains_from(k, &g) {
            return;
        }
        self.strong[k].push(g.clone());
        let reps: Vec<Permutation> = self.transversal[k].iter().flatten().cloned().collect();
        for s in reps {
            self.close_level(k, s.then(&g));
        }
    }

    fn close_level(&mut self, k: usize, r: Permutation) {
        let j = r.apply(k);
        match self.transversal[k][j].clone() {
            None => {
                self.transversal[k][j] = Some(r.clone());
                let gens = self.strong[k].clone();
                for t in gens {
                    self.close_level(k, r.then(&t));
                }
            }
            Some(s) => self.extend_level(k + 1, r.then(&s.inverse())),
        }
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.n && self.contains_from(0, g)
    }

    pub fn order(&self) -> BigUint {
        self.transversal
            .iter()
            .map(|row| row.iter().filter(|t| t.is_some()).count())
            .fold(BigUint::one(), |acc, c| acc * c)
    }

    pub fn order_u64(&self) -> Option<u64> {
        u64::try_from(self.order()).ok()
    }

    /// All elements, by breadth-first closure. Only for small groups.
    pub fn elements(&self) -> Vec<Permutation> {
        let id = Permutation::identity(self.n);
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        let mut out = Vec::new();
        while let Some(g) = queue.pop_front() {
            for s in &self.generators {
                let h = g.then(s);
                if seen.insert(h.clone()) {
                    queue.push_back(h);
                }
            }
            out.push(g);
        }
        out.sort();
        out
    }

    /// Orbit of a point.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[point] = true;
        let mut stack = vec![point];
        let mut out = vec![point];
        while let Some(a) = stack.pop() {
            for g in &self.generators {
                let b = g.apply(a);
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                    out.push(b);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, Some(n)).unwrap()
    }

    #[test]
    fn parsing_and_display() {
        let x = perm("(1,2,3,4)(5,6)", 8);
        assert_eq!(x.to_string(), "(1,2,3,4)(5,6)");
        assert_eq!(x.cycle_type().to_string(), "4,2,1,1");
        assert_eq!(perm("2 3 1", 3), perm("(1,2,3)", 3));
        assert_eq!(perm("[2,3,1]", 3), perm("(1,2,3)", 3));
        assert_eq!(perm("(1 2)", 2), Permutation::transposition(2, 0, 1));
        assert!(matches!(Permutation::parse("(1,2,1)", Some(3)), Err(Error::RepeatedPoint(1))));
        assert!(matches!(Permutation::parse("(1,9)", Some(8)), Err(Error::PointOutOfRange { point: 9, .. })));
        assert!(matches!(Permutation::parse("(1,x)", Some(8)), Err(Error::Parse { .. })));
        assert!(Permutation::parse("(1,2", Some(3)).is_err());
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }

    #[test]
    fn composition_applies_left_first() {
        let a = perm("(1,2)", 3);
        let b = perm("(2,3)", 3);
        assert_eq!((&a * &b).apply(0), 2);
        assert!(a.then(&a.inverse()).is_identity());
        let c = perm("(1,2,3,4,5)", 5);
        assert!(c.pow(5).is_identity());
        assert_eq!(c.pow(2), c.then(&c));
    }

    #[test]
    fn group_orders() {
        for n in 1..=8usize {
            let cyc = PermGroup::generate(n, &[Permutation::long_cycle(n)]);
            assert_eq!(cyc.order(), BigUint::from(n));
        }
        assert_eq!(PermGroup::symmetric(8).order(), BigUint::from(40320u32));
        let d4 = PermGroup::generate(4, &[perm("(1,2)", 4), perm("(1,3)(2,4)", 4)]);
        assert_eq!(d4.order(), BigUint::from(8u32));
        assert!(d4.contains(&perm("(3,4)", 4)));
        assert!(!d4.contains(&perm("(1,3)", 4)));
        assert_eq!(d4.elements().len(), 8);
    }

    /// Membership agrees with explicit closure on small random groups.
    #[test]
    fn membership_matches_closure() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let n = rng.gen_range(3..=6);
            let gens: Vec<Permutation> = (0..rng.gen_range(1..=2))
                .map(|_| {
                    let mut v: Vec<usize> = (0..n).collect();
                    v.shuffle(&mut rng);
                    Permutation::from_images(v).unwrap()
                })
                .collect();
            let g = PermGroup::generate(n, &gens);
            let elems: HashSet<Permutation> = g.elements().into_iter().collect();
            assert_eq!(BigUint::from(elems.len()), g.order());
            for s in PermGroup::symmetric(n).elements() {
                assert_eq!(g.contains(&s), elems.contains(&s));
            }
        }
    }
}
