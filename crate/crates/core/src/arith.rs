//! Small integer helpers: primality, p-adic digits, valuations.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub fn check_prime(p: usize) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("{p} is not prime")))
    }
}

/// Base-p digits of `n`, least significant first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PAdicExpansion {
    pub p: usize,
    pub digits: Vec<usize>,
}

impl PAdicExpansion {
    pub fn new(n: usize, p: usize) -> PAdicExpansion {
        assert!(p >= 2);
        let mut digits = Vec::new();
        let mut m = n;
        while m > 0 {
            digits.push(m % p);
            m /= p;
        }
        PAdicExpansion { p, digits }
    }

    pub fn value(&self) -> usize {
        self.digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn digit(&self, i: usize) -> usize {
        self.digits.get(i).copied().unwrap_or(0)
    }

    pub fn digit_sum(&self) -> usize {
        self.digits.iter().sum()
    }

    /// Exponents `i` with a nonzero digit, each repeated digit-many times, ascending.
    pub fn exponents(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (i, &d) in self.digits.iter().enumerate() {
            out.extend(std::iter::repeat(i as u32).take(d));
        }
        out
    }
}

/// `ν_p(n!)` by Legendre's formula.
pub fn nu_p_factorial(n: usize, p: usize) -> usize {
    let mut total = 0;
    let mut q = p;
    while q <= n {
        total += n / q;
        q = match q.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
    }
    total
}

pub fn nu_p_big(n: &BigUint, p: usize) -> usize {
    if n.is_zero() {
        return usize::MAX;
    }
    let p = BigUint::from(p);
    let mut m = n.clone();
    let mut v = 0;
    while (&m % &p).is_zero() {
        m /= &p;
        v += 1;
    }
    v
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn is_power_of(n: usize, p: usize) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut m = n;
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansions() {
        let e = PAdicExpansion::new(12, 2);
        assert_eq!(e.digits, vec![0, 0, 1, 1]);
        assert_eq!(e.value(), 12);
        assert_eq!(e.exponents(), vec![2, 3]);
        assert!(PAdicExpansion::new(0, 3).digits.is_empty());
        for p in [2, 3, 5, 7] {
            for n in 0..500 {
                assert_eq!(PAdicExpansion::new(n, p).value(), n);
            }
        }
    }

    #[test]
    fn legendre_matches_factorial() {
        for p in [2, 3, 5] {
            for n in 0..40 {
                assert_eq!(nu_p_factorial(n, p), nu_p_big(&factorial(n), p));
            }
        }
    }

    #[test]
    fn primes() {
        let ps: Vec<usize> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(is_power_of(16, 2), Some(4));
        assert_eq!(is_power_of(1, 3), Some(0));
        assert_eq!(is_power_of(12, 2), None);
    }
}
