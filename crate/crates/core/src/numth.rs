//! Small number-theory helpers: sieves, divisors, valuations.

use rug::{Assign, Integer};

/// Primes up to and including `bound`.
pub fn primes_upto(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// If `m` is a prime power p^k (k ≥ 1), returns p.
pub fn prime_power_base(m: u64) -> Option<u64> {
    if m < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut r = m;
            while r.is_multiple_of(p) {
                r /= p;
            }
            return if r == 1 { Some(p) } else { None };
        }
        p += 1;
    }
    Some(m)
}

/// Exponent of `p` in `x`; zero for x = 0 by convention of the callers (never asked).
pub fn valuation(x: &Integer, p: u64) -> u32 {
    if *x == 0 {
        return 0;
    }
    let p = Integer::from(p);
    let mut t = Integer::new();
    t.assign(x.abs_ref());
    t.remove_factor_mut(&p)
}

/// Prime factorization of |m| by trial division. Returns None if |m| has a prime factor
/// above `trial_limit` that is not certifiably prime by the remaining cofactor test.
pub fn factorize(m: &Integer, trial_limit: u64) -> Option<Vec<(Integer, u32)>> {
    let mut rest = Integer::from(m.abs_ref());
    let mut out = Vec::new();
    if rest <= 1 {
        return Some(out);
    }
    let mut d = 2u64;
    while d <= trial_limit {
        if Integer::from(d) * d > rest {
            break;
        }
        let di = Integer::from(d);
        if rest.is_divisible(&di) {
            let k = rest.remove_factor_mut(&di);
            out.push((di, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        if Integer::from(d) * d > rest || rest.is_probably_prime(40) != rug::integer::IsPrime::No {
            out.push((rest, 1));
        } else {
            return None;
        }
    }
    Some(out)
}

/// Positive divisors of |m| (m ≠ 0), ascending. None when factorization fails.
pub fn divisors(m: &Integer) -> Option<Vec<Integer>> {
    let fac = factorize(m, 1_000_000)?;
    let mut divs = vec![Integer::from(1)];
    for (p, k) in fac {
        let len = divs.len();
        let mut pk = Integer::from(1);
        for _ in 0..k {
            pk *= &p;
            for i in 0..len {
                divs.push(Integer::from(&divs[i] * &pk));
            }
        }
    }
    divs.sort();
    Some(divs)
}

/// Natural log of |x| for possibly huge integers.
pub fn ln_abs(x: &Integer) -> f64 {
    let bits = x.significant_bits();
    if bits <= 1000 {
        return x.to_f64().abs().ln();
    }
    let shift = bits - 64;
    let top = (Integer::from(x.abs_ref()) >> shift).to_f64();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// ln(n!) computed exactly-summed in f64 for n up to the table sizes used here.
pub fn ln_factorial_table(n_max: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(n_max + 1);
    let mut acc = 0.0f64;
    t.push(0.0);
    for k in 1..=n_max {
        acc += (k as f64).ln();
        t.push(acc);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_small() {
        assert_eq!(primes_upto(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_upto(1).is_empty());
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power_base(8), Some(2));
        assert_eq!(prime_power_base(9), Some(3));
        assert_eq!(prime_power_base(12), None);
        assert_eq!(prime_power_base(13), Some(13));
        assert_eq!(prime_power_base(1), None);
    }

    #[test]
    fn divisors_of_60() {
        let d: Vec<i64> = divisors(&Integer::from(-60))
            .unwrap()
            .iter()
            .map(|x| x.to_i64().unwrap())
            .collect();
        assert_eq!(d, vec![1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60]);
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&Integer::from(48), 2), 4);
        assert_eq!(valuation(&Integer::from(-81), 3), 4);
        assert_eq!(valuation(&Integer::from(7), 5), 0);
    }

    #[test]
    fn ln_of_large() {
        let x = Integer::from(Integer::u_pow_u(10, 500));
        assert!((ln_abs(&x) - 500.0 * 10f64.ln()).abs() < 1e-9);
        assert!((ln_abs(&Integer::from(-1000)) - 1000f64.ln()).abs() < 1e-12);
    }
}
