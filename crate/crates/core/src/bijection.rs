//! Character bijections `Irr^x(S_n) → Irr^x(local group)` built by recursion
//! over subnormalizer shapes, and a verifier that re-derives every value and
//! sign from scratch.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{check_prime, is_power_of, nu_p_big};
use crate::characters::{centralizer_order, column, irr_p_prime, CycleType};
use crate::error::{Error, Result};
use crate::local::{Frame, LocalChar, LocalGroup, PhiChar};
use crate::partition::{gamma, partitions, tau, Partition};
use crate::perm::Permutation;
use crate::subnormalizer::{reduction_split, shape_of, SplitPolicy, SubShape};
use crate::sylow::{element_in_canonical, irr_pprime_count_normalizer, p_adic_element, type_ii_element, type_iii_element};
use crate::tower::splice_towers;

// ---------------------------------------------------------------------------
// Local side descriptions

/// Image of a character under a bijection.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LocalLabel {
    Char(LocalChar),
    /// p'-character of an odd-p Sylow normalizer, known by its values.
    Phi(PhiChar),
    Product(Vec<LocalLabel>),
}

impl LocalLabel {
    pub fn degree(&self) -> BigUint {
        match self {
            LocalLabel::Char(c) => c.degree(),
            LocalLabel::Phi(phi) => phi.degree(),
            LocalLabel::Product(v) => v.iter().map(LocalLabel::degree).product(),
        }
    }
}

impl fmt::Display for LocalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalLabel::Char(c) => write!(f, "{c}"),
            LocalLabel::Phi(phi) => write!(f, "{phi}"),
            LocalLabel::Product(v) => {
                write!(f, "(prod")?;
                for c in v {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// The group on the local side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalSide {
    Group(LocalGroup),
    /// `N_{S_n}(P)` for odd `p`.
    Normalizer { n: usize, p: usize },
    Product(Vec<LocalSide>),
}

impl fmt::Display for LocalSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalSide::Group(g) => write!(f, "{g}"),
            LocalSide::Normalizer { n, p } => write!(f, "N(S{n},p={p})"),
            LocalSide::Product(v) => {
                let s: Vec<String> = v.iter().map(|x| format!("({x})")).collect();
                write!(f, "{}", s.join(" x "))
            }
        }
    }
}

/// An element of the local side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalElem {
    Perm(Permutation),
    /// The canonical p-adic element of a normalizer.
    PAdic,
    Product(Vec<LocalElem>),
}

impl fmt::Display for LocalElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalElem::Perm(g) => write!(f, "{g}"),
            LocalElem::PAdic => write!(f, "p-adic"),
            LocalElem::Product(v) => {
                let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "[{}]", s.join(", "))
            }
        }
    }
}

/// Value of a local label at a local element.
pub fn eval_label(label: &LocalLabel, side: &LocalSide, elem: &LocalElem) -> Result<BigInt> {
    match (label, side, elem) {
        (LocalLabel::Char(c), LocalSide::Group(g), LocalElem::Perm(e)) => c.value(g, e),
        (LocalLabel::Phi(phi), LocalSide::Normalizer { n, p }, LocalElem::PAdic) if phi.n == *n && phi.p == *p => {
            Ok(phi.value_at_adic())
        }
        (LocalLabel::Product(ls), LocalSide::Product(ss), LocalElem::Product(es))
            if ls.len() == ss.len() && ss.len() == es.len() =>
        {
            let mut acc = BigInt::one();
            for ((l, s), e) in ls.iter().zip(ss).zip(es) {
                acc *= eval_label(l, s, e)?;
            }
            Ok(acc)
        }
        _ => Err(Error::DepthMismatch(format!("label {label} does not fit the local side {side}"))),
    }
}

/// `Irr` of the local side, when it can be listed.
fn side_irr(side: &LocalSide) -> Option<Vec<LocalLabel>> {
    match side {
        LocalSide::Group(g) => Some(g.irr().into_iter().map(LocalLabel::Char).collect()),
        LocalSide::Normalizer { .. } => None,
        LocalSide::Product(v) => {
            let mut out: Vec<Vec<LocalLabel>> = vec![Vec::new()];
            for s in v {
                let irr = side_irr(s)?;
                out = out
                    .into_iter()
                    .flat_map(|pre| {
                        irr.iter().map(move |c| {
                            let mut w = pre.clone();
                            w.push(c.clone());
                            w
                        })
                    })
                    .collect();
            }
            Some(out.into_iter().map(LocalLabel::Product).collect())
        }
    }
}

/// `|Irr^e(side)|`; normalizer factors count their p'-characters.
fn side_irr_x_count(side: &LocalSide, elem: &LocalElem) -> Result<BigUint> {
    match (side, elem) {
        (LocalSide::Group(g), LocalElem::Perm(e)) => {
            let mut count = 0u64;
            for c in g.irr() {
                if !c.value(g, e)?.is_zero() {
                    count += 1;
                }
            }
            Ok(BigUint::from(count))
        }
        (LocalSide::Normalizer { n, p }, LocalElem::PAdic) => irr_pprime_count_normalizer(*n, *p),
        (LocalSide::Product(ss), LocalElem::Product(es)) if ss.len() == es.len() => {
            let mut acc = BigUint::one();
            for (s, e) in ss.iter().zip(es) {
                acc *= side_irr_x_count(s, e)?;
            }
            Ok(acc)
        }
        _ => Err(Error::DepthMismatch(format!("element {elem} does not fit the local side {side}"))),
    }
}

fn side_centralizer(side: &LocalSide, elem: &LocalElem) -> Result<BigUint> {
    match (side, elem) {
        (LocalSide::Group(g), LocalElem::Perm(e)) => g.centralizer_order(e),
        (LocalSide::Normalizer { n, p }, LocalElem::PAdic) => Ok(centralizer_order(&p_adic_element(*n, *p)?)),
        (LocalSide::Product(ss), LocalElem::Product(es)) if ss.len() == es.len() => {
            let mut acc = BigUint::one();
            for (s, e) in ss.iter().zip(es) {
                acc *= side_centralizer(s, e)?;
            }
            Ok(acc)
        }
        _ => Err(Error::DepthMismatch(format!("element {elem} does not fit the local side {side}"))),
    }
}

// ---------------------------------------------------------------------------
// Pairings

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Context {
    pub n: usize,
    pub p: usize,
    pub kind: String,
}

/// An element tracked by a pairing, in global and local coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tracked {
    pub name: String,
    pub global: Permutation,
    pub local: LocalElem,
    /// Whether `Irr^e` on both sides must correspond under the pairing; the
    /// global domain is the union of `Irr^e` over these elements.
    pub image_check: bool,
}

/// `χ^global ↦ local` with one sign per tracked element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub global: Partition,
    pub local: LocalLabel,
    pub signs: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub context: Context,
    pub elements: Vec<Tracked>,
    pub side: LocalSide,
    pub triples: Vec<Triple>,
    /// Element index pairs whose signs must agree on every triple.
    pub shared_sign: Vec<(usize, usize)>,
}

fn column_map(t: &CycleType) -> HashMap<Partition, BigInt> {
    column(t).into_iter().collect()
}

fn sign_of(global: &BigInt, local: &BigInt) -> i8 {
    if global.is_negative() != local.is_negative() && !global.is_zero() && !local.is_zero() {
        -1
    } else {
        1
    }
}

impl Pairing {
    fn assemble(
        context: Context,
        elements: Vec<Tracked>,
        side: LocalSide,
        pairs: Vec<(Partition, LocalLabel)>,
        shared_sign: Vec<(usize, usize)>,
    ) -> Result<Pairing> {
        let cols: Vec<HashMap<Partition, BigInt>> =
            elements.iter().map(|e| column_map(&e.global.cycle_type())).collect();
        let mut triples = Vec::with_capacity(pairs.len());
        for (global, local) in pairs {
            let mut signs = Vec::with_capacity(elements.len());
            for (e, col) in elements.iter().zip(&cols) {
                let lv = eval_label(&local, &side, &e.local)?;
                signs.push(sign_of(&col[&global], &lv));
            }
            triples.push(Triple { global, local, signs });
        }
        triples.sort_by(|a, b| b.global.cmp(&a.global));
        Ok(Pairing { context, elements, side, triples, shared_sign })
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn image(&self, lambda: &Partition) -> Option<&LocalLabel> {
        self.triples.iter().find(|t| &t.global == lambda).map(|t| &t.local)
    }
}

// ---------------------------------------------------------------------------
// Matching by values

struct Cand<L> {
    label: L,
    values: Vec<BigInt>,
    nu: usize,
}

fn compatible(g: &[BigInt], l: &[BigInt], shared: &[(usize, usize)]) -> bool {
    if g.iter().zip(l).any(|(a, b)| a.abs() != b.abs()) {
        return false;
    }
    shared.iter().all(|&(i, j)| g[i].is_zero() || g[j].is_zero() || sign_of(&g[i], &l[i]) == sign_of(&g[j], &l[j]))
}

/// Perfect matching with equal degree p-parts and values equal up to sign,
/// preferring exact value agreement, then earlier candidates. Returns the
/// local index for each global.
fn search_match<G, L>(globals: &[Cand<G>], locals: &[Cand<L>], shared: &[(usize, usize)]) -> Result<Vec<usize>> {
    if globals.len() != locals.len() {
        return Err(Error::Internal(format!("{} global against {} local characters", globals.len(), locals.len())));
    }
    let adj: Vec<Vec<usize>> = globals
        .iter()
        .map(|g| {
            let mut c: Vec<usize> = (0..locals.len())
                .filter(|&j| locals[j].nu == g.nu && compatible(&g.values, &locals[j].values, shared))
                .collect();
            c.sort_by_key(|&j| (locals[j].values != g.values, j));
            c
        })
        .collect();
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none() || augment(owner[v].unwrap(), adj, seen, owner) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    let mut owner: Vec<Option<usize>> = vec![None; locals.len()];
    for u in 0..globals.len() {
        let mut seen = vec![false; locals.len()];
        if !augment(u, &adj, &mut seen, &mut owner) {
            return Err(Error::Internal(format!("no value-compatible partner for global character #{u}")));
        }
    }
    let mut out = vec![0; globals.len()];
    for (v, u) in owner.iter().enumerate() {
        out[u.expect("perfect")] = v;
    }
    Ok(out)
}

fn nu(d: &BigUint, p: usize) -> usize {
    nu_p_big(d, p)
}

/// Linear characters of a local group.
fn linear_labels(g: &LocalGroup) -> Vec<LocalChar> {
    match g {
        LocalGroup::Trivial => vec![LocalChar::Base],
        LocalGroup::Sym(m) if *m <= 1 => vec![LocalChar::Sym(Partition::new(vec![1; *m]).expect("valid"))],
        LocalGroup::Sym(m) => vec![
            LocalChar::Sym(Partition::new(vec![*m]).expect("valid")),
            LocalChar::Sym(Partition::new(vec![1; *m]).expect("valid")),
        ],
        LocalGroup::Wreath(h) => linear_labels(h)
            .into_iter()
            .flat_map(|phi| [1i8, -1].map(|s| LocalChar::Ext(Box::new(phi.clone()), s)))
            .collect(),
        LocalGroup::Product(fs) => {
            let mut out: Vec<Vec<LocalChar>> = vec![Vec::new()];
            for f in fs {
                let lin = linear_labels(f);
                out = out
                    .into_iter()
                    .flat_map(|pre| {
                        lin.iter().map(move |c| {
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

// ---------------------------------------------------------------------------
// Frames for subnormalizer shapes

fn cycle_through(x: &Permutation, start: usize) -> Vec<usize> {
    let mut c = vec![start];
    let mut i = x.apply(start);
    while i != start {
        c.push(i);
        i = x.apply(i);
    }
    c
}

fn cycle_type_of(cycles: &[Vec<usize>]) -> CycleType {
    CycleType::new(cycles.iter().map(Vec::len).collect()).expect("nonempty cycles")
}

/// `P_{2^k}` on `pts`, placed so that `x` (a full cycle on `pts`) is the
/// group's canonical full cycle.
fn tower_frame(pts: &[usize], x: &Permutation) -> Result<Frame> {
    let m = pts.len();
    let k = is_power_of(m, 2).ok_or_else(|| Error::Internal(format!("tower on {m} points")))?;
    let group = LocalGroup::tower(k);
    let c = group.full_cycle().expect("towers have full cycles");
    let cyc = cycle_through(x, pts[0]);
    if cyc.len() != m {
        return Err(Error::Internal("tower points are not one cycle".into()));
    }
    let mut layout = vec![0; m];
    let mut pos = 0;
    for &pt in &cyc {
        layout[pos] = pt;
        pos = c.apply(pos);
    }
    Ok(Frame { group, layout })
}

/// `H ≀ S_2` with `H` on the first half and the cycle of `x` through
/// `twin[0]` acting on the second half as `H`'s full cycle.
fn wreath_frame(inner: Frame, twin: &[usize], x: &Permutation) -> Result<Frame> {
    let c = inner.group.full_cycle().ok_or_else(|| Error::Internal(format!("{} has no full cycle", inner.group)))?;
    let m = inner.layout.len();
    let z = cycle_through(x, twin[0]);
    if z.len() != m {
        return Err(Error::Internal("twin cycle has the wrong length".into()));
    }
    let mut second = vec![0; m];
    let mut pos = 0;
    for &pt in &z {
        second[pos] = pt;
        pos = c.apply(pos);
    }
    let mut layout = inner.layout;
    layout.extend(second);
    Ok(Frame { group: LocalGroup::Wreath(Box::new(inner.group)), layout })
}

fn build_frame(shape: &SubShape, x: &Permutation) -> Result<Frame> {
    let frame = match shape {
        SubShape::FullSym(pts) => Frame { group: LocalGroup::Sym(pts.len()), layout: pts.clone() },
        SubShape::Syl2Tower(pts) => tower_frame(pts, x)?,
        SubShape::WreathS2 { inner, twin } => wreath_frame(build_frame(inner, x)?, twin, x)?,
        SubShape::Product(fs) => Frame::product(fs.iter().map(|f| build_frame(f, x)).collect::<Result<_>>()?),
    };
    if frame.group.order() != shape.order() {
        return Err(Error::Internal(format!("frame {} does not realise {shape}", frame.group)));
    }
    Ok(frame)
}

/// Local group realising `Sub(x)` for a 2-element `x`, on its points.
pub fn subnormalizer_frame(x: &Permutation) -> Result<Frame> {
    build_frame(&crate::subnormalizer::sub_shape_2(x)?, x)
}

// ---------------------------------------------------------------------------
// The recursion

/// A bijection onto the characters of a frame group, with the tracked
/// element in local coordinates and the frame's full cycle if it has one.
#[derive(Clone, Debug)]
struct Omega {
    frame: Frame,
    x: Permutation,
    g: Option<Permutation>,
    map: BTreeMap<Partition, LocalChar>,
}

impl Omega {
    fn new(frame: Frame, x: &Permutation, map: BTreeMap<Partition, LocalChar>) -> Result<Omega> {
        let xl = frame.to_local(x)?;
        let g = frame.group.full_cycle();
        Ok(Omega { frame, x: xl, g, map })
    }

    fn get(&self, l: &Partition) -> Result<&LocalChar> {
        self.map.get(l).ok_or_else(|| Error::Internal(format!("({l}) is outside the recursion's domain")))
    }
}

/// Recursion over `Sub(x)` restricted to the points of `cycles`. The map
/// covers `Irr^x`, and also `Irr_{2'}` when the point count is a 2-power.
fn omega(cycles: &[Vec<usize>], x: &Permutation) -> Result<Omega> {
    let shape = shape_of(cycles, SplitPolicy::Minimal);
    match &shape {
        SubShape::Product(_) => omega_product(cycles, x),
        SubShape::FullSym(pts) => {
            let frame = build_frame(&shape, x)?;
            let map = partitions(pts.len()).into_iter().map(|l| (l.clone(), LocalChar::Sym(l))).collect();
            Omega::new(frame, x, map)
        }
        SubShape::Syl2Tower(_) => {
            let frame = build_frame(&shape, x)?;
            let xl = frame.to_local(x)?;
            let map = two_adic_map(&frame.group, &[xl], &[cycle_type_of(cycles)])?;
            Omega::new(frame, x, map)
        }
        SubShape::WreathS2 { twin, .. } => omega_wreath(cycles, twin, &shape, x),
    }
}

/// `Irr_{2'}(S_n)` onto the linear characters of `group`, matched by value
/// vectors at the given elements.
fn two_adic_map(
    group: &LocalGroup,
    local_elems: &[Permutation],
    global_types: &[CycleType],
) -> Result<BTreeMap<Partition, LocalChar>> {
    let n = group.degree();
    let cols: Vec<HashMap<Partition, BigInt>> = global_types.iter().map(column_map).collect();
    let mut globals: Vec<Cand<Partition>> = irr_p_prime(n, 2)?
        .into_iter()
        .map(|l| {
            let values = cols.iter().map(|c| c[&l].clone()).collect();
            Cand { label: l, values, nu: 0 }
        })
        .collect();
    let mut locals = Vec::new();
    for c in linear_labels(group) {
        let values = local_elems.iter().map(|e| c.value(group, e)).collect::<Result<Vec<_>>>()?;
        locals.push(Cand { label: c, values, nu: 0 });
    }
    globals.sort_by(|a, b| (&a.values, &a.label).cmp(&(&b.values, &b.label)));
    locals.sort_by(|a, b| (&a.values, &a.label).cmp(&(&b.values, &b.label)));
    let m = search_match(&globals, &locals, &[])?;
    Ok(globals.iter().zip(m).map(|(g, j)| (g.label.clone(), locals[j].label.clone())).collect())
}

fn omega_product(cycles: &[Vec<usize>], x: &Permutation) -> Result<Omega> {
    let (big, small) =
        reduction_split(cycles, SplitPolicy::Minimal).ok_or_else(|| Error::Internal("product shape without a split".into()))?;
    let cut = big.iter().map(Vec::len).min().expect("nonempty");
    let s = is_power_of(cut, 2).expect("2-element") as usize;
    let a = omega(&big, x)?;
    let b = omega(&small, x)?;
    let (nb, ns): (usize, usize) = (big.iter().map(Vec::len).sum(), small.iter().map(Vec::len).sum());
    let frame = Frame::product(vec![a.frame.clone(), b.frame.clone()]);
    let mut map = BTreeMap::new();
    for (l, v) in column(&cycle_type_of(cycles)) {
        if v.is_zero() {
            continue;
        }
        let top = splice_towers(&Partition::empty(), &l, s, 2)?;
        let core = l.q_core(cut)?;
        if top.size() != nb || core.size() != ns {
            return Err(Error::Internal(format!("({l}) splits as {} + {}, expected {nb} + {ns}", top.size(), core.size())));
        }
        map.insert(l, LocalChar::product(vec![a.get(&top)?.clone(), b.get(&core)?.clone()]));
    }
    Omega::new(frame, x, map)
}

fn omega_wreath(cycles: &[Vec<usize>], twin: &[usize], shape: &SubShape, x: &Permutation) -> Result<Omega> {
    let n: usize = cycles.iter().map(Vec::len).sum();
    let k = is_power_of(n, 2).ok_or_else(|| Error::Internal("wreath shape off a 2-power".into()))?;
    let half = n / 2;
    let y_cycles: Vec<Vec<usize>> = cycles.iter().filter(|c| !c.contains(&twin[0])).cloned().collect();
    let inner = omega(&y_cycles, x)?;
    let frame = wreath_frame(inner.frame.clone(), twin, x)?;
    if frame.group.order() != shape.order() {
        return Err(Error::Internal(format!("frame {} does not realise {shape}", frame.group)));
    }
    let xk = frame.to_local(x)?;
    let gk = frame.group.full_cycle().expect("wreath of a group with a full cycle");
    let xv = column_map(&cycle_type_of(cycles));
    let gv = column_map(&CycleType::new(vec![n])?);
    let domain: Vec<Partition> =
        partitions(n).into_iter().filter(|l| !xv[l].is_zero() || !gv[l].is_zero()).collect();

    if n <= 4 {
        let globals: Vec<Cand<Partition>> = domain
            .iter()
            .map(|l| Cand { label: l.clone(), values: vec![xv[l].clone(), gv[l].clone()], nu: nu(&crate::characters::degree(l), 2) })
            .collect();
        let mut locals = Vec::new();
        for c in frame.group.irr() {
            let values = vec![c.value(&frame.group, &xk)?, c.value(&frame.group, &gk)?];
            if values.iter().any(|v| !v.is_zero()) {
                let nu = nu(&c.degree(), 2);
                locals.push(Cand { label: c, values, nu });
            }
        }
        let m = search_match(&globals, &locals, &[(0, 1)])?;
        let map = globals.iter().zip(m).map(|(g, j)| (g.label.clone(), locals[j].label.clone())).collect();
        return Omega::new(frame, x, map);
    }

    let mut map = BTreeMap::new();
    let kk = k - 1;

    // 2'-degree hooks, one orbit {m, half−m−1} × {±1} at a time, onto the
    // extensions of the inner images. Each orbit's (x, g) values agree with
    // the local ones up to a sign per character, not one sign per orbit.
    for m in 0..half / 2 {
        let (globals, locals) = hook_orbit(m, k, &inner, &frame.group, &xk, &gk, &xv, &gv)?;
        if abs_values(&globals) != abs_values(&locals) {
            return Err(Error::Internal(format!("hook orbit {m} of S_{n}: absolute values differ")));
        }
        let mm = search_match(&globals, &locals, &[(0, 1)])?;
        for (g, j) in globals.iter().zip(mm) {
            map.insert(g.label.clone(), locals[j].label.clone());
        }
    }

    // Non-hooks: one removable 2^{k−1}-hook, or a double hook.
    for l in domain.iter().filter(|l| !l.is_hook()) {
        let label = match l.q_weight(half)? {
            1 => {
                let core = l.q_core(half)?;
                let top = splice_towers(&Partition::empty(), l, kk as usize, 2)?;
                LocalChar::pair(inner.get(&top)?.clone(), inner.get(&core)?.clone())?
            }
            2 => {
                let (a, b) = (0..half)
                    .flat_map(|a| (a + 1..half).map(move |b| (a, b)))
                    .find(|&(a, b)| gamma(a, b, k).map(|g| &g == l).unwrap_or(false))
                    .ok_or_else(|| Error::Internal(format!("({l}) is nonzero at x but is not a double hook")))?;
                LocalChar::pair(inner.get(&tau(a, kk)?)?.clone(), inner.get(&tau(b, kk)?)?.clone())?
            }
            w => return Err(Error::Internal(format!("({l}) is nonzero at x with 2^{kk}-weight {w}"))),
        };
        map.insert(l.clone(), label);
    }
    Omega::new(frame, x, map)
}

fn abs_values<L>(v: &[Cand<L>]) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = v.iter().map(|c| c.values.iter().map(BigInt::abs).collect()).collect();
    a.sort();
    a
}

type OrbitCands = (Vec<Cand<Partition>>, Vec<Cand<LocalChar>>);

/// Global hooks `τ(t,k)`, `τ(2^{k−1}+t,k)` and local extensions of the
/// inner images of `τ(t,k−1)`, for `t ∈ {m, 2^{k−1}−m−1}`, in label order,
/// with values at `(x, g)`.
#[allow(clippy::too_many_arguments)]
fn hook_orbit(
    m: usize,
    k: u32,
    inner: &Omega,
    group: &LocalGroup,
    xk: &Permutation,
    gk: &Permutation,
    xv: &HashMap<Partition, BigInt>,
    gv: &HashMap<Partition, BigInt>,
) -> Result<OrbitCands> {
    let half = 1usize << (k - 1);
    let mut globals = Vec::new();
    let mut locals = Vec::new();
    for t in [m, half - m - 1] {
        for a in [t, half + t] {
            let l = tau(a, k)?;
            let values = vec![xv[&l].clone(), gv[&l].clone()];
            globals.push(Cand { label: l, values, nu: 0 });
        }
        let phi = inner.get(&tau(t, k - 1)?)?.clone();
        for s in [1i8, -1] {
            let psi = LocalChar::ext(phi.clone(), s)?;
            let values = vec![psi.value(group, xk)?, psi.value(group, gk)?];
            locals.push(Cand { label: psi, values, nu: 0 });
        }
    }
    globals.sort_by(|a, b| a.label.cmp(&b.label));
    locals.sort_by(|a, b| a.label.cmp(&b.label));
    Ok((globals, locals))
}

// ---------------------------------------------------------------------------
// Public constructions

fn ctx(n: usize, p: usize, kind: &str) -> Context {
    Context { n, p, kind: kind.to_string() }
}

fn global_from(frame: &Frame, local: &Permutation, n: usize) -> Permutation {
    frame.to_global(local, n)
}

/// `Irr_{2'}(S_n)` onto the linear characters of a Sylow 2-subgroup, sorted
/// by value vectors at the picky elements. For even `n` the Sylow subgroup
/// is the one containing the Type II element.
pub fn gamma_2adic(n: usize) -> Result<Pairing> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    let x_type = p_adic_element(n, 2)?;
    let (frame, mut elements) = if n % 2 == 0 {
        let y = element_in_canonical(&type_ii_element(n)?, 2)?;
        let frame = subnormalizer_frame(&y)?;
        let yl = frame.to_local(&y)?;
        let xl = frame.group.adic_element().ok_or_else(|| Error::Internal("no adic element".into()))?;
        let x = global_from(&frame, &xl, n);
        let y_t = Tracked { name: "y".into(), global: y, local: LocalElem::Perm(yl), image_check: n % 8 != 0 };
        (frame, vec![Tracked { name: "x".into(), global: x, local: LocalElem::Perm(xl), image_check: true }, y_t])
    } else {
        let x = element_in_canonical(&x_type, 2)?;
        let frame = subnormalizer_frame(&x)?;
        let xl = frame.to_local(&x)?;
        (frame, vec![Tracked { name: "x".into(), global: x, local: LocalElem::Perm(xl), image_check: true }])
    };
    if elements[0].global.cycle_type() != x_type {
        return Err(Error::Internal("adic element of the frame has the wrong type".into()));
    }
    if n == 1 {
        elements.truncate(1);
    }
    let locals: Vec<Permutation> = elements
        .iter()
        .map(|e| match &e.local {
            LocalElem::Perm(p) => p.clone(),
            _ => unreachable!(),
        })
        .collect();
    let types: Vec<CycleType> = elements.iter().map(|e| e.global.cycle_type()).collect();
    let map = two_adic_map(&frame.group, &locals, &types)?;
    let pairs = map.into_iter().map(|(l, c)| (l, LocalLabel::Char(c))).collect();
    Pairing::assemble(ctx(n, 2, "two-adic"), elements, LocalSide::Group(frame.group), pairs, vec![])
}

/// `Irr_{p'}(S_n)` onto the normalizer characters `Φ^λ`, odd `p`.
pub fn gamma_odd(n: usize, p: usize) -> Result<Pairing> {
    check_prime(p)?;
    if p == 2 {
        return Err(Error::Inapplicable("odd-prime construction needs p odd".into()));
    }
    if n == 0 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    let x = element_in_canonical(&p_adic_element(n, p)?, p)?;
    let pairs = irr_p_prime(n, p)?
        .into_iter()
        .map(|l| Ok((l.clone(), LocalLabel::Phi(PhiChar::new(&l, p)?))))
        .collect::<Result<Vec<_>>>()?;
    let elements = vec![Tracked { name: "x".into(), global: x, local: LocalElem::PAdic, image_check: true }];
    Pairing::assemble(ctx(n, p, "odd-prime"), elements, LocalSide::Normalizer { n, p }, pairs, vec![])
}

/// `x` a `p^k`-cycle.
pub fn gamma_pk_cycle(p: usize, k: u32) -> Result<Pairing> {
    check_prime(p)?;
    let n = p.pow(k);
    if p == 2 {
        gamma_2adic(n)
    } else {
        gamma_odd(n, p)
    }
}

fn pairing_from_omega(o: Omega, x: Permutation, n: usize, kind: &str, track_g: bool) -> Result<Pairing> {
    let mut elements =
        vec![Tracked { name: "x".into(), global: x, local: LocalElem::Perm(o.x.clone()), image_check: true }];
    let mut shared = vec![];
    if track_g {
        if let Some(g) = &o.g {
            if *g != o.x {
                let global = o.frame.to_global(g, n);
                elements.push(Tracked { name: "g".into(), global, local: LocalElem::Perm(g.clone()), image_check: true });
                shared.push((0, 1));
            }
        }
    }
    let cols: Vec<HashMap<Partition, BigInt>> = elements.iter().map(|e| column_map(&e.global.cycle_type())).collect();
    let mut pairs = Vec::new();
    for l in partitions(n) {
        if cols.iter().any(|c| !c[&l].is_zero()) {
            pairs.push((l.clone(), LocalLabel::Char(o.get(&l)?.clone())));
        }
    }
    Pairing::assemble(ctx(n, 2, kind), elements, LocalSide::Group(o.frame.group.clone()), pairs, shared)
}

/// For a 2-element `x` of `S_{2^k}`: the recursion onto `Irr(Sub(x))`,
/// covering `Irr^x ∪ Irr^g` for the frame's full cycle `g`, with one sign
/// shared by `x` and `g`.
pub fn gamma_wreath(x: &Permutation) -> Result<Pairing> {
    let n = x.degree();
    if is_power_of(n, 2).is_none() {
        return Err(Error::Inapplicable(format!("needs a 2-power degree, got {n}")));
    }
    let o = omega(&x.cycles(), x)?;
    pairing_from_omega(o, x.clone(), n, "wreath", true)
}

/// For any 2-element `x` of `S_n`: `Irr^x(S_n) → Irr^x(Sub(x))` by the
/// subnormalizer reduction.
pub fn gamma_reduction(x: &Permutation) -> Result<Pairing> {
    let n = x.degree();
    if !crate::sylow::is_p_element(&x.cycle_type(), 2) {
        return Err(Error::NotPElement { p: 2, what: x.to_string() });
    }
    let o = omega(&x.cycles(), x)?;
    pairing_from_omega(o, x.clone(), n, "reduction", false)
}

/// Recursion for a Type II element of `S_n`, `8 | n`: covers `Irr^y ∪
/// Irr^x` with `x` the frame's adic element. The top cycle splices onto the
/// rest by its hook.
fn omega_type_ii(cycles: &[Vec<usize>], y: &Permutation) -> Result<(Omega, Permutation)> {
    let n: usize = cycles.iter().map(Vec::len).sum();
    if is_power_of(n, 2).is_some() {
        let o = omega(cycles, y)?;
        let g = o.g.clone().ok_or_else(|| Error::Internal("power case without a full cycle".into()))?;
        return Ok((o, g));
    }
    let top_len = cycles.iter().map(Vec::len).max().expect("nonempty");
    let k = is_power_of(top_len, 2).expect("2-element") as usize;
    let top: Vec<Vec<usize>> = cycles.iter().filter(|c| c.len() == top_len).cloned().collect();
    let rest: Vec<Vec<usize>> = cycles.iter().filter(|c| c.len() != top_len).cloned().collect();
    if top.len() != 1 {
        return Err(Error::Internal("type II element with a repeated top cycle".into()));
    }
    let a = omega(&top, y)?;
    let (b, _) = omega_type_ii(&rest, y)?;
    let frame = Frame::product(vec![a.frame.clone(), b.frame.clone()]);
    let xl = frame.group.adic_element().ok_or_else(|| Error::Internal("no adic element".into()))?;
    let yv = column(&cycle_type_of(cycles));
    let xv = column_map(&p_adic_element(n, 2)?);
    let q = 1usize << k;
    let mut map = BTreeMap::new();
    for (l, v) in yv {
        if v.is_zero() && xv[&l].is_zero() {
            continue;
        }
        let hook = splice_towers(&Partition::empty(), &l, k, 2)?;
        let core = l.q_core(q)?;
        if hook.size() != q || !hook.is_hook() || splice_towers(&core, &hook, k, 2)? != l {
            return Err(Error::Internal(format!("({l}) is not a {q}-hook spliced onto a smaller partition")));
        }
        map.insert(l, LocalChar::product(vec![a.get(&hook)?.clone(), b.get(&core)?.clone()]));
    }
    let o = Omega::new(frame, y, map)?;
    Ok((o, xl))
}

/// Type II element `y` of `S_n` with `8 | n`: `Irr^y ∪ Irr^x` onto the
/// Sylow 2-subgroup containing `y`.
pub fn gamma_type_ii(n: usize) -> Result<Pairing> {
    if n % 8 != 0 || n == 0 {
        return Err(Error::Inapplicable(format!("needs n divisible by 8, got {n}")));
    }
    let y = element_in_canonical(&type_ii_element(n)?, 2)?;
    let (o, xl) = omega_type_ii(&y.cycles(), &y)?;
    let x = o.frame.to_global(&xl, n);
    let elements = vec![
        Tracked { name: "y".into(), global: y, local: LocalElem::Perm(o.x.clone()), image_check: true },
        Tracked { name: "x".into(), global: x, local: LocalElem::Perm(xl), image_check: true },
    ];
    let cols: Vec<HashMap<Partition, BigInt>> = elements.iter().map(|e| column_map(&e.global.cycle_type())).collect();
    let mut pairs = Vec::new();
    for l in partitions(n) {
        if cols.iter().any(|c| !c[&l].is_zero()) {
            pairs.push((l.clone(), LocalLabel::Char(o.get(&l)?.clone())));
        }
    }
    Pairing::assemble(ctx(n, 2, "type-ii"), elements, LocalSide::Group(o.frame.group.clone()), pairs, vec![])
}

/// `n ≡ ±3 (mod 9)`, `p = 3`: `Irr_{3'}(S_n)` onto `N_m × N_k`, `k ∈ {3,6}`,
/// tracking the 3-adic element and the Type III element.
pub fn gamma_type_iii(n: usize) -> Result<Pairing> {
    if n % 9 != 3 && n % 9 != 6 {
        return Err(Error::Inapplicable(format!("needs n = 3 or 6 mod 9, got {n}")));
    }
    let k = n % 9;
    let m = n - k;
    let x = element_in_canonical(&p_adic_element(n, 3)?, 3)?;
    let z = element_in_canonical(&type_iii_element(n)?, 3)?;

    // Small factor: N_{S_k}(P) with the k-parts of x and z.
    let c3 = Permutation::from_images(vec![1, 2, 0])?;
    let (group, x1, z1) = if k == 3 {
        (LocalGroup::Sym(3), c3.clone(), Permutation::identity(3))
    } else {
        let g = LocalGroup::Wreath(Box::new(LocalGroup::Sym(3)));
        (g, Permutation::from_images(vec![1, 2, 0, 4, 5, 3])?, Permutation::from_images(vec![1, 2, 0, 3, 4, 5])?)
    };
    let x1_type = p_adic_element(k, 3)?;
    let z1_type = type_iii_element(k)?;
    let (cx, cz) = (column_map(&x1_type), column_map(&z1_type));
    let globals: Vec<Cand<Partition>> = irr_p_prime(k, 3)?
        .into_iter()
        .map(|l| {
            let values = vec![cx[&l].clone(), cz[&l].clone()];
            let nu = nu(&crate::characters::degree(&l), 3);
            Cand { label: l, values, nu }
        })
        .collect();
    let mut locals = Vec::new();
    for c in group.irr() {
        let values = vec![c.value(&group, &x1)?, c.value(&group, &z1)?];
        if values.iter().any(|v| !v.is_zero()) {
            let nu = nu(&c.degree(), 3);
            locals.push(Cand { label: c, values, nu });
        }
    }
    let small = search_match(&globals, &locals, &[])?;
    let delta: HashMap<Partition, LocalChar> =
        globals.iter().zip(small).map(|(g, j)| (g.label.clone(), locals[j].label.clone())).collect();

    let mut pairs = Vec::new();
    for l in irr_p_prime(n, 3)? {
        let core = l.q_core(9)?;
        let d = delta.get(&core).ok_or_else(|| Error::Internal(format!("({l}) has 9-core ({core}) outside the small factor")))?;
        let label = if m == 0 {
            LocalLabel::Char(d.clone())
        } else {
            let top = splice_towers(&Partition::empty(), &l, 2, 3)?;
            if top.size() != m {
                return Err(Error::Internal(format!("({l}) has upper part of size {}", top.size())));
            }
            LocalLabel::Product(vec![LocalLabel::Phi(PhiChar::new(&top, 3)?), LocalLabel::Char(d.clone())])
        };
        pairs.push((l, label));
    }
    let (side, xe, ze) = if m == 0 {
        (LocalSide::Group(group), LocalElem::Perm(x1), LocalElem::Perm(z1))
    } else {
        (
            LocalSide::Product(vec![LocalSide::Normalizer { n: m, p: 3 }, LocalSide::Group(group)]),
            LocalElem::Product(vec![LocalElem::PAdic, LocalElem::Perm(x1)]),
            LocalElem::Product(vec![LocalElem::PAdic, LocalElem::Perm(z1)]),
        )
    };
    let elements = vec![
        Tracked { name: "x".into(), global: x, local: xe, image_check: true },
        Tracked { name: "z".into(), global: z, local: ze, image_check: true },
    ];
    Pairing::assemble(ctx(n, 3, "type-iii"), elements, side, pairs, vec![])
}

/// One pairing on `Irr^𝒫(S_n)` for the picky p-elements `𝒫`, satisfying the
/// degree, value and image conditions at every picky class.
pub fn gamma_picky(n: usize, p: usize) -> Result<Pairing> {
    check_prime(p)?;
    if n == 0 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    if p == 2 {
        if n % 8 == 0 {
            gamma_type_ii(n)
        } else {
            gamma_2adic(n)
        }
    } else if p == 3 && (n % 9 == 3 || n % 9 == 6) {
        gamma_type_iii(n)
    } else {
        gamma_odd(n, p)
    }
}

// ---------------------------------------------------------------------------
// Verification

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub global: usize,
    pub local: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub context: Context,
    pub elements: Vec<String>,
    pub counts: Counts,
    pub checks: Vec<Check>,
    pub millis: u64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

fn check(name: impl Into<String>, witness: Option<String>) -> Check {
    Check { name: name.into(), pass: witness.is_none(), witness }
}

/// Re-derives every value and sign of `pairing` and checks bijectivity,
/// degree p-parts, values up to the stored signs, image sets and the
/// centralizer cross-sums.
pub fn verify(pairing: &Pairing) -> Report {
    let start = Instant::now();
    let Pairing { context, elements, side, triples, shared_sign } = pairing;
    let p = context.p;
    let cols: Vec<HashMap<Partition, BigInt>> =
        elements.par_iter().map(|e| column_map(&e.global.cycle_type())).collect();
    let lvals: Vec<Result<Vec<BigInt>>> = triples
        .par_iter()
        .map(|t| elements.iter().map(|e| eval_label(&t.local, side, &e.local)).collect())
        .collect();
    let mut checks = Vec::new();
    let local_count = triples.iter().map(|t| &t.local).collect::<HashSet<_>>().len();
    let finish = |checks: Vec<Check>| Report {
        context: context.clone(),
        elements: elements.iter().map(|e| format!("{}={}", e.name, e.global)).collect(),
        counts: Counts { global: triples.len(), local: local_count },
        checks,
        millis: start.elapsed().as_millis() as u64,
    };

    let eval_err = triples
        .iter()
        .zip(&lvals)
        .find_map(|(t, v)| v.as_ref().err().map(|e| format!("{} ↦ {}: {e}", t.global, t.local)));
    let failed = eval_err.is_some();
    checks.push(check("evaluation", eval_err));
    if failed {
        return finish(checks);
    }
    let lvals: Vec<Vec<BigInt>> = lvals.into_iter().map(|v| v.expect("checked")).collect();
    let gval = |t: &Triple, i: usize| cols[i].get(&t.global).cloned();

    // Bijectivity.
    let mut witness = None;
    let mut seen_g = HashSet::new();
    let mut seen_l = HashSet::new();
    for t in triples {
        if t.global.size() != context.n {
            witness = Some(format!("({}) is not a partition of {}", t.global, context.n));
        } else if !seen_g.insert(&t.global) {
            witness = Some(format!("({}) appears twice", t.global));
        } else if !seen_l.insert(&t.local) {
            witness = Some(format!("{} is hit twice", t.local));
        }
        if witness.is_some() {
            break;
        }
    }
    if witness.is_none() && elements.iter().any(|e| e.image_check) {
        let expected: BTreeSet<&Partition> = cols
            .iter()
            .zip(elements)
            .filter(|(_, e)| e.image_check)
            .flat_map(|(c, _)| c.iter().filter(|(_, v)| !v.is_zero()).map(|(l, _)| l))
            .collect();
        let got: BTreeSet<&Partition> = triples.iter().map(|t| &t.global).collect();
        if let Some(l) = expected.difference(&got).next() {
            witness = Some(format!("({l}) is in the domain but unpaired"));
        } else if let Some(l) = got.difference(&expected).next() {
            witness = Some(format!("({l}) is paired but outside the domain"));
        }
    }
    checks.push(check("bijectivity", witness));

    // Degree p-parts.
    let witness = triples.iter().find_map(|t| {
        let (a, b) = (nu(&crate::characters::degree(&t.global), p), nu(&t.local.degree(), p));
        (a != b).then(|| format!("({}) has nu_{p} {a}, {} has {b}", t.global, t.local))
    });
    checks.push(check("degree_p_part", witness));

    // Values and signs.
    let mut value_w = None;
    let mut sign_w = None;
    let mut derived: Vec<Vec<Option<i8>>> = Vec::with_capacity(triples.len());
    for (t, lv) in triples.iter().zip(&lvals) {
        let mut row = Vec::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            let gv = gval(t, i).unwrap_or_default();
            let l = &lv[i];
            let eps = if gv.is_zero() {
                if !l.is_zero() && value_w.is_none() {
                    value_w = Some(format!("({}) vanishes at {} but {} = {l}", t.global, e.name, t.local));
                }
                None
            } else if *l == gv {
                Some(1)
            } else if *l == -gv.clone() {
                Some(-1)
            } else {
                if value_w.is_none() {
                    value_w = Some(format!("({})({}) = {gv} but {} = {l}", t.global, e.name, t.local));
                }
                None
            };
            if let Some(s) = eps {
                if t.signs.get(i) != Some(&s) && sign_w.is_none() {
                    sign_w = Some(format!("({}) at {}: stored {:?}, derived {s}", t.global, e.name, t.signs.get(i)));
                }
            }
            row.push(eps);
        }
        derived.push(row);
    }
    checks.push(check("values", value_w));
    checks.push(check("sign_bookkeeping", sign_w));
    if !shared_sign.is_empty() {
        let witness = shared_sign.iter().find_map(|&(i, j)| {
            triples.iter().zip(&derived).find_map(|(t, d)| match (d.get(i).copied().flatten(), d.get(j).copied().flatten()) {
                (Some(a), Some(b)) if a != b => Some(format!(
                    "({}) has sign {a} at {} and {b} at {}",
                    t.global, elements[i].name, elements[j].name
                )),
                _ => None,
            })
        });
        checks.push(check("shared_sign", witness));
    }

    // Images and cross-sums.
    let all_local = side_irr(side);
    for (i, e) in elements.iter().enumerate().filter(|(_, e)| e.image_check) {
        let img: HashSet<&LocalLabel> = triples
            .iter()
            .filter(|t| gval(t, i).is_some_and(|v| !v.is_zero()))
            .map(|t| &t.local)
            .collect();
        let witness = match &all_local {
            Some(all) => {
                let mut w = None;
                for c in all {
                    let nonzero = match eval_label(c, side, &e.local) {
                        Ok(v) => !v.is_zero(),
                        Err(err) => {
                            w = Some(err.to_string());
                            break;
                        }
                    };
                    if nonzero != img.contains(c) {
                        w = Some(if nonzero {
                            format!("{c} is nonzero at {} but not hit", e.name)
                        } else {
                            format!("{c} is hit but vanishes at {}", e.name)
                        });
                        break;
                    }
                }
                if w.is_none() && img.iter().any(|c| !all.contains(c)) {
                    w = Some("an image is not an irreducible character of the local side".into());
                }
                w
            }
            None => {
                let nonzero = triples.iter().zip(&lvals).all(|(t, lv)| {
                    gval(t, i).is_some_and(|v| v.is_zero()) || !lv[i].is_zero()
                });
                match side_irr_x_count(side, &e.local) {
                    Ok(count) if !nonzero => Some(format!("an image vanishes at {} (expected {count})", e.name)),
                    Ok(count) if BigUint::from(img.len()) != count => {
                        Some(format!("{} images at {}, local side has {count}", img.len(), e.name))
                    }
                    Ok(_) => None,
                    Err(err) => Some(err.to_string()),
                }
            }
        };
        checks.push(check(format!("image[{}]", e.name), witness));

        let gsum: BigInt = triples.iter().filter_map(|t| gval(t, i)).map(|v| &v * &v).sum();
        let lsum: BigInt = triples
            .iter()
            .zip(&lvals)
            .filter(|(t, _)| gval(t, i).is_some_and(|v| !v.is_zero()))
            .map(|(_, lv)| &lv[i] * &lv[i])
            .sum();
        let gc = BigInt::from(centralizer_order(&e.global.cycle_type()));
        let witness = match side_centralizer(side, &e.local) {
            Ok(lc) => {
                let lc = BigInt::from(lc);
                if gsum != gc {
                    Some(format!("global sum {gsum} != |C(x)| = {gc}"))
                } else if lsum != lc {
                    Some(format!("local sum {lsum} != local centralizer {lc}"))
                } else {
                    None
                }
            }
            Err(err) => Some(err.to_string()),
        };
        checks.push(check(format!("cross_sum[{}]", e.name), witness));
    }
    finish(checks)
}

/// Flips the stored sign of the trivial character at the first element.
pub fn inject_sign_fault(pairing: &mut Pairing) -> bool {
    let n = pairing.context.n;
    match pairing.triples.iter_mut().find(|t| t.global.parts() == [n]) {
        Some(t) if !t.signs.is_empty() => {
            t.signs[0] = -t.signs[0];
            true
        }
        _ => false,
    }
}

/// Swaps the images of the first two triples whose local value vectors
/// differ.
pub fn inject_swap_fault(pairing: &mut Pairing) -> bool {
    let vals: Vec<Option<Vec<BigInt>>> = pairing
        .triples
        .iter()
        .map(|t| pairing.elements.iter().map(|e| eval_label(&t.local, &pairing.side, &e.local).ok()).collect())
        .collect();
    for j in 1..vals.len() {
        if vals[j] != vals[0] {
            let l0 = pairing.triples[0].local.clone();
            pairing.triples[0].local = pairing.triples[j].local.clone();
            pairing.triples[j].local = l0;
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Counting statements for S_{2^k}

/// 2-parts of `χ(1)` over `Irr^y(S_{2^k})`, `y` of Type II.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoPartProfile {
    pub k: u32,
    pub two_parts: BTreeSet<u64>,
    pub top: u64,
    pub top_count: usize,
}

pub fn two_part_profile(k: u32) -> Result<TwoPartProfile> {
    if k < 2 {
        return Err(Error::OutOfRange(format!("needs k >= 2, got {k}")));
    }
    let n = 1usize << k;
    let mut parts = Vec::new();
    for (l, v) in column(&type_ii_element(n)?) {
        if !v.is_zero() {
            parts.push(1u64 << nu(&crate::characters::degree(&l), 2));
        }
    }
    let top = *parts.iter().max().expect("trivial character");
    Ok(TwoPartProfile { k, two_parts: parts.iter().copied().collect(), top, top_count: parts.iter().filter(|&&d| d == top).count() })
}

/// Counts of `(χ(x), χ(y))` over `Irr_{2'}(S_{2^k})`, `x` a `2^k`-cycle and
/// `y` of Type II.
pub fn linear_sign_counts(k: u32) -> Result<BTreeMap<(i8, i8), usize>> {
    if k < 1 {
        return Err(Error::OutOfRange("needs k >= 1".into()));
    }
    let n = 1usize << k;
    let xv = column_map(&p_adic_element(n, 2)?);
    let yv = column_map(&type_ii_element(n)?);
    let mut out = BTreeMap::new();
    for l in irr_p_prime(n, 2)? {
        let s = |v: &BigInt| if v.is_negative() { -1i8 } else { 1 };
        let (a, b) = (&xv[&l], &yv[&l]);
        if a.abs() != BigInt::one() || b.abs() != BigInt::one() {
            return Err(Error::Internal(format!("({l}) takes values {a}, {b}")));
        }
        *out.entry((s(a), s(b))).or_insert(0) += 1;
    }
    Ok(out)
}
