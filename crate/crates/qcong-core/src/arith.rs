//! Small number-theory helpers: primality by trial division, modular
//! arithmetic on machine words, Legendre and Kronecker symbols, divisors.

use crate::error::{Error, Result};

/// Deterministic trial-division primality test, adequate for the word-sized
/// moduli and primes this crate works with.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    // 30-wheel residues coprime to 2, 3, 5
    let mut base = 7u64;
    let wheel = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut i = 0;
    while base * base <= n {
        if n.is_multiple_of(base) {
            return false;
        }
        base += wheel[i];
        i = (i + 1) % wheel.len();
    }
    true
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        exp >>= 1;
        base = mul_mod(base, base, m);
    }
    acc
}

/// Inverse of `a` mod `m` when gcd(a, m) = 1.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            ds.push(d);
            if d != n / d {
                ds.push(n / d);
            }
        }
        d += 1;
    }
    ds.sort_unstable();
    ds
}

pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Legendre symbol (a/p) for an odd prime p, by Euler's criterion.
/// Returns 0, 1, or -1; 0 exactly when p divides a.
pub fn legendre(a: i64, p: u64) -> Result<i64> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Ok(0);
    }
    let t = pow_mod(r, (p - 1) / 2, p);
    Ok(if t == 1 { 1 } else { -1 })
}

/// Kronecker symbol (a/n), extending the Jacobi symbol to all integers n.
pub fn kronecker(a: i64, n: i64) -> i64 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut a = a;
    let mut n = n;
    // strip twos from n; (a/2) depends on a mod 8
    let two_of = |x: i64| match x.rem_euclid(8) {
        1 | 7 => 1,
        3 | 5 => -1,
        _ => 0,
    };
    let mut k = 1i64;
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v % 2 == 1 {
        k = two_of(a);
    }
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    // invariant: n odd and positive
    loop {
        if a == 0 {
            return if n > 1 { 0 } else { k };
        }
        v = 0;
        while a % 2 == 0 {
            a /= 2;
            v += 1;
        }
        if v % 2 == 1 {
            k *= two_of(n);
        }
        // reciprocity for odd a, n (a may still be negative on the first pass)
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            k = -k;
        }
        let r = a.abs();
        a = n % r;
        n = r;
    }
}
