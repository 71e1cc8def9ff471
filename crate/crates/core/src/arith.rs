// SPDX-License-Identifier: Apache-2.0

//! Exact elementary number theory on machine integers.

use num_integer::{Integer, Roots};

use crate::error::{Error, Result};

/// Trial division bound before switching to Pollard rho.
const TRIAL_LIMIT: u64 = 1_000_000;

/// Witnesses that make Miller–Rabin deterministic for every `n < 2⁶⁴`.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// `value = sign · ∏ pᵉ`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    value: i64,
    sign: i8,
    factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Exponent of `p` in the factorization (`ord_p`).
    pub fn ord(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Multiplies the factorization back out.
    pub fn reassemble(&self) -> i128 {
        let magnitude: i128 = self
            .factors
            .iter()
            .map(|&(p, e)| (p as i128).pow(e))
            .product();
        magnitude * self.sign as i128
    }
}

/// Factors a nonzero integer into primes.
pub fn factorize(n: i64) -> Result<PrimeFactorization> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let mut primes = Vec::new();
    factor_u64(n.unsigned_abs(), &mut primes);
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(PrimeFactorization {
        value: n,
        sign: if n < 0 { -1 } else { 1 },
        factors,
    })
}

fn factor_u64(mut n: u64, out: &mut Vec<u64>) {
    for p in [2u64, 3] {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
    }
    let mut d = 5u64;
    while d <= TRIAL_LIMIT && d.saturating_mul(d) <= n {
        for p in [d, d + 2] {
            while n % p == 0 {
                out.push(p);
                n /= p;
            }
        }
        d += 6;
    }
    if n > 1 {
        split_large(n, out);
    }
}

/// Factors an `n` with no prime factor below the trial bound.
fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let root = n.sqrt();
    if root.checked_mul(root) == Some(n) {
        split_large(root, out);
        split_large(root, out);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Returns a nontrivial divisor of the odd composite `n`.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        while g == 1 {
            x = f(x);
            y = f(f(y));
            g = x.abs_diff(y).gcd(&n);
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// True iff no prime square divides `n`.
pub fn is_squarefree(n: i64) -> Result<bool> {
    Ok(factorize(n)?.is_squarefree())
}

/// Square-free flags over a half-open interval `[lo, hi)` of positive integers.
#[derive(Debug, Clone)]
pub struct SquarefreeFlags {
    lo: u64,
    hi: u64,
    bits: Vec<u64>,
}

impl SquarefreeFlags {
    pub fn range(&self) -> std::ops::Range<u64> {
        self.lo..self.hi
    }

    /// Panics if `n` lies outside the sieved interval.
    pub fn get(&self, n: u64) -> bool {
        assert!(
            (self.lo..self.hi).contains(&n),
            "{n} outside sieved range {}..{}",
            self.lo,
            self.hi
        );
        let i = (n - self.lo) as usize;
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (self.lo..self.hi).filter(move |&n| self.get(n))
    }

    fn clear(&mut self, n: u64) {
        let i = (n - self.lo) as usize;
        self.bits[i / 64] &= !(1u64 << (i % 64));
    }
}

/// Square-free bitmap over `1..=limit`.
pub fn squarefree_flags(limit: u64) -> SquarefreeFlags {
    squarefree_flags_range(1, limit + 1)
}

/// Segmented square-free sieve over `[lo, hi)`, `lo ≥ 1`.
pub fn squarefree_flags_range(lo: u64, hi: u64) -> SquarefreeFlags {
    let lo = lo.max(1);
    let hi = hi.max(lo);
    let len = (hi - lo) as usize;
    let mut bits = vec![u64::MAX; len.div_ceil(64)];
    if len % 64 != 0 {
        if let Some(last) = bits.last_mut() {
            *last = (1u64 << (len % 64)) - 1;
        }
    }
    let mut flags = SquarefreeFlags { lo, hi, bits };
    if len == 0 {
        return flags;
    }
    let root = (hi - 1).sqrt();
    for p in small_primes(root) {
        let sq = p * p;
        let mut m = lo.div_ceil(sq) * sq;
        while m < hi {
            flags.clear(m);
            m += sq;
        }
    }
    flags
}

/// Primes `≤ limit` by the sieve of Eratosthenes.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Kronecker symbol `(a/n)`, defined for every pair of integers.
pub fn kronecker(a: i64, n: i64) -> i8 {
    let mut a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut k: i8 = 1;
    let v = n.trailing_zeros();
    n >>= v;
    // (a/2) = (−1)^((a²−1)/8) for odd a
    if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
        k = -k;
    }
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    // n odd and positive: Jacobi symbol with a reduced mod n.
    a = a.rem_euclid(n);
    while a != 0 {
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 && matches!(n % 8, 3 | 5) {
            k = -k;
        }
        if a % 4 == 3 && n % 4 == 3 {
            k = -k;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        k
    } else {
        0
    }
}

/// Representative of `n mod modulus` in `[0, modulus)`.
pub fn canonical_residue(n: i64, modulus: u64) -> u64 {
    assert!(modulus >= 1, "modulus must be positive");
    (n as i128).rem_euclid(modulus as i128) as u64
}

/// Exact `log₃ n` when `n` is a power of 3.
pub fn log3_exact(n: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut k = 0;
    let mut m = n;
    while m % 3 == 0 {
        m /= 3;
        k += 1;
    }
    (m == 1).then_some(k)
}

pub fn is_perfect_square(n: i128) -> bool {
    n >= 0 && {
        let r = n.sqrt();
        r * r == n
    }
}

pub fn is_perfect_cube(n: i128) -> bool {
    let r = n.abs().cbrt();
    r * r * r == n.abs()
}
