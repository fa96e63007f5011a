use crate::numth::{prime_power_base, primes_upto};
use rug::Integer;

/// n·(n−u)·(n−2u)··· down to the last positive factor; 1 for n ≤ 0.
pub fn multifactorial(n: i64, u: u32) -> Integer {
    assert!(u >= 1, "multifactorial order must be positive");
    let mut acc = Integer::from(1);
    let mut k = n;
    while k > 0 {
        acc *= k;
        k -= u as i64;
    }
    acc
}

/// lcm(1, …, n); 1 for n ≤ 1.
pub fn lcm_upto(n: u64) -> Integer {
    let mut acc = Integer::from(1);
    for p in primes_upto(n) {
        let mut pk = p;
        while pk <= n / p {
            pk *= p;
        }
        acc *= pk;
    }
    acc
}

/// Running lcm(1..m), advanced one integer at a time.
#[derive(Debug, Clone)]
pub struct LcmCounter {
    m: u64,
    value: Integer,
}

impl Default for LcmCounter {
    fn default() -> Self {
        LcmCounter { m: 1, value: Integer::from(1) }
    }
}

impl LcmCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn upto(&self) -> u64 {
        self.m
    }

    pub fn value(&self) -> &Integer {
        &self.value
    }

    /// Moves to lcm(1..=target); target must not be below the current position.
    pub fn advance_to(&mut self, target: u64) -> &Integer {
        while self.m < target {
            self.m += 1;
            if let Some(p) = prime_power_base(self.m) {
                self.value *= p;
            }
        }
        &self.value
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multifactorial_examples() {
        assert_eq!(multifactorial(7, 3), 28);
        assert_eq!(multifactorial(5, 1), 120);
        assert_eq!(multifactorial(0, 2), 1);
        assert_eq!(multifactorial(-3, 2), 1);
        assert_eq!(multifactorial(9, 2), 945);
    }

    #[test]
    fn lcm_matches_brute_force() {
        let mut brute = Integer::from(1);
        let mut counter = LcmCounter::new();
        for n in 1..=200u64 {
            brute.lcm_u_mut(n as u32);
            assert_eq!(lcm_upto(n), brute);
            assert_eq!(*counter.advance_to(n), brute);
        }
        assert_eq!(lcm_upto(6), 60);
        assert_eq!(lcm_upto(0), 1);
    }
}
