//! p-core towers and the p-part of character degrees.

use serde::{Deserialize, Serialize};

use crate::arith::{check_prime, PAdicExpansion};
use crate::error::{Error, Result};
use crate::partition::Partition;

/// Row `i` holds `p^i` p-cores. Rows above the top p-adic digit of `n` are
/// empty and not stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoreTower {
    pub p: usize,
    pub rows: Vec<Vec<Partition>>,
}

fn top_row(n: usize, p: usize) -> usize {
    if n == 0 {
        0
    } else {
        PAdicExpansion::new(n, p).digits.len() - 1
    }
}

fn build_rows(lambda: &Partition, p: usize, depth: usize) -> Vec<Vec<Partition>> {
    let mut rows = vec![vec![lambda.q_core(p).expect("p >= 2")]];
    if depth == 0 {
        return rows;
    }
    let quotient = lambda.q_quotient(p).expect("p >= 2");
    let subs: Vec<Vec<Vec<Partition>>> = quotient.iter().map(|c| build_rows(c, p, depth - 1)).collect();
    for i in 1..=depth {
        rows.push(subs.iter().flat_map(|s| s[i - 1].iter().cloned()).collect());
    }
    rows
}

fn rows_to_partition(rows: &[Vec<Partition>], p: usize) -> Result<Partition> {
    let core = &rows[0][0];
    if rows.len() == 1 {
        return Ok(core.clone());
    }
    let mut quotient = Vec::with_capacity(p);
    for r in 0..p {
        let sub: Vec<Vec<Partition>> = rows[1..]
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let w = p.pow(i as u32);
                row[r * w..(r + 1) * w].to_vec()
            })
            .collect();
        quotient.push(rows_to_partition(&sub, p)?);
    }
    Partition::from_core_and_quotient(core, &quotient, p)
}

impl CoreTower {
    pub fn build(lambda: &Partition, p: usize) -> Result<CoreTower> {
        check_prime(p)?;
        Ok(CoreTower { p, rows: build_rows(lambda, p, top_row(lambda.size(), p)) })
    }

    /// Validates shape and that every entry is a p-core, then inverts `build`.
    pub fn to_partition(&self) -> Result<Partition> {
        check_prime(self.p)?;
        if self.rows.is_empty() {
            return Ok(Partition::empty());
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.p.pow(i as u32) {
                return Err(Error::OutOfRange(format!("row {i} has {} entries", row.len())));
            }
            if let Some(bad) = row.iter().find(|c| !c.is_q_core(self.p)) {
                return Err(Error::NotACore(bad.to_string(), self.p));
            }
        }
        rows_to_partition(&self.rows, self.p)
    }

    pub fn empty(p: usize, depth: usize) -> CoreTower {
        CoreTower {
            p,
            rows: (0..=depth).map(|i| vec![Partition::empty(); p.pow(i as u32)]).collect(),
        }
    }

    pub fn depth(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    /// `b_i = Σ_j |λ_{ij}|`.
    pub fn row_weights(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.iter().map(Partition::size).sum()).collect()
    }

    pub fn weight(&self, i: usize) -> usize {
        self.rows.get(i).map_or(0, |r| r.iter().map(Partition::size).sum())
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&Partition> {
        self.rows.get(i).and_then(|r| r.get(j))
    }

    /// Total size `Σ b_i p^i`.
    pub fn size(&self) -> usize {
        self.row_weights().iter().enumerate().map(|(i, b)| b * self.p.pow(i as u32)).sum()
    }

    /// Pads with empty rows up to `depth`.
    pub fn padded(&self, depth: usize) -> CoreTower {
        let mut t = self.clone();
        while t.rows.len() <= depth {
            let w = self.p.pow(t.rows.len() as u32);
            t.rows.push(vec![Partition::empty(); w]);
        }
        t
    }

    /// Drops trailing all-empty rows, keeping at least row 0.
    pub fn trimmed(&self) -> CoreTower {
        let mut t = self.clone();
        while t.rows.len() > 1 && t.rows.last().unwrap().iter().all(Partition::is_empty) {
            t.rows.pop();
        }
        t
    }
}

/// `ν_p(χ^λ(1)) = (Σ b_k − Σ a_k)/(p−1)`.
pub fn nu_p_degree(lambda: &Partition, p: usize) -> Result<usize> {
    let t = CoreTower::build(lambda, p)?;
    let b: usize = t.row_weights().iter().sum();
    let a = PAdicExpansion::new(lambda.size(), p).digit_sum();
    if b < a || (b - a) % (p - 1) != 0 {
        return Err(Error::Internal(format!("tower weights of {lambda} inconsistent for p = {p}")));
    }
    Ok((b - a) / (p - 1))
}

/// True iff `b_k = a_k` for all `k`.
pub fn is_p_prime_degree(lambda: &Partition, p: usize) -> Result<bool> {
    let t = CoreTower::build(lambda, p)?;
    let a = PAdicExpansion::new(lambda.size(), p);
    Ok(t.row_weights().iter().enumerate().all(|(i, &b)| b == a.digit(i)))
}

/// Rows `< s` taken from `lower`, rows `>= s` from `upper`.
pub fn splice_towers(lower: &Partition, upper: &Partition, s: usize, p: usize) -> Result<Partition> {
    let tl = CoreTower::build(lower, p)?;
    let tu = CoreTower::build(upper, p)?;
    let depth = tl.depth().max(tu.depth()).max(s);
    let (tl, tu) = (tl.padded(depth), tu.padded(depth));
    let rows = (0..=depth).map(|i| if i < s { tl.rows[i].clone() } else { tu.rows[i].clone() }).collect();
    CoreTower { p, rows }.to_partition()
}

fn check_hook(tau: &Partition, k: u32) -> Result<()> {
    if tau.size() != 1 << k || !tau.is_hook() {
        return Err(Error::Inapplicable(format!("{tau} is not a 2^{k}-hook")));
    }
    Ok(())
}

/// The partition of `2^{k+1}` whose tower agrees with `μ` below row `k` and
/// with the hook `τ` at row `k`. Needs `|μ| = 2^k` with `μ` not a hook.
pub fn splice_ext(mu: &Partition, tau: &Partition, k: u32) -> Result<Partition> {
    check_hook(tau, k)?;
    if mu.size() != 1 << k || mu.is_hook() {
        return Err(Error::Inapplicable(format!("{mu} must be a non-hook partition of 2^{k}")));
    }
    splice_towers(mu, tau, k as usize, 2)
}

/// The partition `λ(τ,μ)` of `n + 2^k`, for even `n` with `2^{k−1} < n < 2^k`.
pub fn splice_ext2(mu: &Partition, tau: &Partition, k: u32) -> Result<Partition> {
    check_hook(tau, k)?;
    let n = mu.size();
    if k == 0 || n % 2 != 0 || n <= 1 << (k - 1) || n >= 1 << k {
        return Err(Error::Inapplicable(format!("|{mu}| must be even and strictly between 2^{} and 2^{k}", k.saturating_sub(1))));
    }
    splice_towers(mu, tau, k as usize, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{nu_p_big, nu_p_factorial};
    use crate::partition::{gamma, partitions, tau};

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    /// ν_p of `n!/H(λ)` straight from the hook-length formula.
    fn nu_hook(l: &Partition, q: usize) -> usize {
        nu_p_factorial(l.size(), q) - nu_p_big(&l.hook_product(), q)
    }

    #[test]
    fn hooks_sit_in_one_top_slot() {
        for k in 1..=4u32 {
            for a in 0..(1usize << k) {
                let t = CoreTower::build(&tau(a, k).unwrap(), 2).unwrap();
                assert_eq!(t.depth(), k as usize);
                let mut w = vec![0; k as usize + 1];
                w[k as usize] = 1;
                assert_eq!(t.row_weights(), w);
            }
        }
    }

    #[test]
    fn double_hook_weights() {
        for k in 2..=4u32 {
            let h = 1usize << (k - 1);
            for b in 1..h {
                for a in 0..b {
                    let w = CoreTower::build(&gamma(a, b, k).unwrap(), 2).unwrap().row_weights();
                    for (i, &bi) in w.iter().enumerate() {
                        assert_eq!(bi, if i == k as usize - 1 { 2 } else { 0 });
                    }
                    assert_eq!(nu_p_degree(&gamma(a, b, k).unwrap(), 2).unwrap(), 1);
                }
            }
        }
    }

    #[test]
    fn core_is_its_own_tower() {
        let c = p(&[3, 2, 1]);
        let t = CoreTower::build(&c, 2).unwrap();
        assert_eq!(t.rows[0][0], c);
        assert_eq!(t.row_weights().iter().skip(1).sum::<usize>(), 0);
        assert_eq!(CoreTower::empty(2, 3).to_partition().unwrap(), Partition::empty());
    }

    #[test]
    fn round_trip_and_degrees() {
        for n in 0..=12 {
            for l in partitions(n) {
                for q in [2, 3, 5] {
                    let t = CoreTower::build(&l, q).unwrap();
                    assert_eq!(t.size(), n);
                    assert_eq!(t.to_partition().unwrap(), l);
                    let nu = nu_p_degree(&l, q).unwrap();
                    assert_eq!(nu, nu_hook(&l, q), "{l} p={q}");
                    assert_eq!(is_p_prime_degree(&l, q).unwrap(), nu == 0);
                }
            }
        }
        assert_eq!(nu_p_degree(&p(&[4, 3, 1]), 2).unwrap(), 1);
    }

    #[test]
    fn odd_degree_counts() {
        for n in 1..=12usize {
            let count = partitions(n).iter().filter(|l| is_p_prime_degree(l, 2).unwrap()).count();
            let e: u32 = PAdicExpansion::new(n, 2).exponents().iter().sum();
            assert_eq!(count, 1 << e, "n = {n}");
        }
        for k in 1..=4u32 {
            let odd: Vec<Partition> =
                partitions(1 << k).into_iter().filter(|l| is_p_prime_degree(l, 2).unwrap()).collect();
            assert!(odd.iter().all(Partition::is_hook));
            assert_eq!(odd.len(), 1 << k);
        }
    }

    #[test]
    fn top_hook_removal_moves_one_box() {
        for n in 1..=10usize {
            for q in [2, 3] {
                let f = top_row(n, q);
                let len = q.pow(f as u32);
                for l in partitions(n) {
                    let before = CoreTower::build(&l, q).unwrap();
                    for h in l.list_q_hooks(len) {
                        let after = CoreTower::build(&l.remove_hook(&h).unwrap(), q).unwrap().padded(f);
                        let diffs: Vec<(usize, usize)> = (0..before.rows[f].len())
                            .filter(|&j| before.rows[f][j] != after.rows[f][j])
                            .map(|j| (before.rows[f][j].size(), after.rows[f][j].size()))
                            .collect();
                        assert_eq!(diffs.len(), 1);
                        assert_eq!(diffs[0].0, diffs[0].1 + 1);
                        assert_eq!(before.rows[..f], after.rows[..f]);
                    }
                }
            }
        }
    }

    #[test]
    fn splices() {
        let l = splice_ext(&p(&[2, 2]), &tau(0, 2).unwrap(), 2).unwrap();
        assert_eq!(l.size(), 8);
        assert_eq!(nu_p_degree(&l, 2).unwrap(), nu_p_degree(&p(&[2, 2]), 2).unwrap() + 1);
        for mu in partitions(6) {
            for a in 0..8 {
                let t = tau(a, 3).unwrap();
                let l = splice_ext2(&mu, &t, 3).unwrap();
                assert_eq!(l.size(), 14);
                assert_eq!(nu_p_degree(&l, 2).unwrap(), nu_p_degree(&mu, 2).unwrap());
                let back: Vec<Partition> =
                    l.list_q_hooks(8).iter().map(|h| l.remove_hook(h).unwrap()).collect();
                assert!(back.contains(&mu));
            }
        }
        for mu in partitions(8).into_iter().filter(|m| !m.is_hook()) {
            for a in 0..8 {
                let l = splice_ext(&mu, &tau(a, 3).unwrap(), 3).unwrap();
                let back: Vec<Partition> =
                    l.list_q_hooks(8).iter().map(|h| l.remove_hook(h).unwrap()).collect();
                assert!(back.contains(&mu));
                assert_eq!(nu_p_degree(&l, 2).unwrap(), nu_p_degree(&mu, 2).unwrap() + 1);
            }
        }
        assert!(splice_ext(&tau(1, 2).unwrap(), &tau(0, 2).unwrap(), 2).is_err());
        assert!(splice_ext2(&p(&[3]), &tau(0, 2).unwrap(), 2).is_err());
    }
}
