//! Prime iteration and primality testing.
//!
//! Primes are produced by a segmented sieve of Eratosthenes. Primality of
//! machine words uses deterministic Miller–Rabin; big integers use
//! deterministic Miller–Rabin below 3.3·10²⁴ and Baillie–PSW above.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Segment length of the sieve (in odd and even integers alike).
pub const SEGMENT_LEN: u64 = 1 << 20;

/// Simple sieve returning every prime `<= n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
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

/// Iterator over the primes in `[lo, hi]`, one sieve segment at a time.
pub struct PrimeIter {
    hi: u64,
    next_lo: u64,
    base: Vec<u64>,
    base_limit: u64,
    buf: Vec<u64>,
    pos: usize,
    seg: u64,
}

impl PrimeIter {
    pub fn new(lo: u64, hi: u64) -> Self {
        Self {
            hi,
            next_lo: lo.max(2),
            base: Vec::new(),
            base_limit: 0,
            buf: Vec::new(),
            pos: 0,
            seg: 1 << 12,
        }
    }

    fn fill(&mut self) -> bool {
        while self.pos >= self.buf.len() {
            if self.next_lo > self.hi {
                return false;
            }
            let lo = self.next_lo;
            // short first segments keep small scans cheap
            let hi = lo.saturating_add(self.seg - 1).min(self.hi);
            self.seg = (self.seg * 2).min(SEGMENT_LEN);
            let len = (hi - lo + 1) as usize;
            // sieving primes are grown on demand so open-ended ranges stay cheap
            let root = isqrt_u64(hi) + 1;
            if root > self.base_limit {
                self.base_limit = root
                    .max(self.base_limit.saturating_mul(2))
                    .min(isqrt_u64(self.hi) + 1);
                self.base = primes_up_to(self.base_limit);
            }
            let mut composite = vec![false; len];
            for &q in &self.base {
                if q * q > hi {
                    break;
                }
                let mut start = lo.div_ceil(q) * q;
                if start < q * q {
                    start = q * q;
                }
                let mut m = start;
                while m <= hi {
                    composite[(m - lo) as usize] = true;
                    m += q;
                }
            }
            self.buf.clear();
            self.pos = 0;
            for (i, c) in composite.iter().enumerate() {
                if !c {
                    self.buf.push(lo + i as u64);
                }
            }
            self.next_lo = match hi.checked_add(1) {
                Some(v) => v,
                None => return !self.buf.is_empty(),
            };
        }
        true
    }
}

impl Iterator for PrimeIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if !self.fill() {
            return None;
        }
        let p = self.buf[self.pos];
        self.pos += 1;
        Some(p)
    }
}

/// The `n`-th prime, 1-indexed (`nth_prime(1) == 2`).
pub fn nth_prime(n: usize) -> u64 {
    assert!(n >= 1);
    PrimeIter::new(2, u64::MAX)
        .nth(n - 1)
        .expect("infinitely many primes")
}

pub fn isqrt_u64(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

#[inline]
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
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Modular inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let eg = (a as i128 % m as i128).extended_gcd(&(m as i128));
    if eg.gcd != 1 {
        return None;
    }
    Some(eg.x.rem_euclid(m as i128) as u64)
}

fn strong_probable_prime_u64(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

const SMALL_PRIMES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    SMALL_PRIMES[..12]
        .iter()
        .all(|&a| strong_probable_prime_u64(n, a))
}

fn strong_probable_prime_big(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    // n odd and positive
    let n_int = BigInt::from(n.clone());
    let mut a = a.mod_floor(&n_int).to_biguint().expect("nonnegative");
    let mut n = n.clone();
    let mut t = 1;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            t = -t;
        }
        a %= &n;
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &(&r * &r) == n
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas(n: &BigUint) -> bool {
    if is_perfect_square(n) {
        return false;
    }
    let mut d = BigInt::from(5);
    loop {
        let j = jacobi(&d, n);
        if j == -1 {
            break;
        }
        if j == 0 && BigInt::from(n.clone()) != d.abs() {
            return false;
        }
        d = if d.sign() == Sign::Plus {
            -(d + 2u32)
        } else {
            -(d - 2u32)
        };
    }
    let n_int = BigInt::from(n.clone());
    let p = BigInt::one();
    let q = (BigInt::one() - &d) / 4;
    let modn = |x: BigInt| x.mod_floor(&n_int);
    let half = |x: BigInt| -> BigInt {
        let x = if x.is_odd() { x + &n_int } else { x };
        (x >> 1u32).mod_floor(&n_int)
    };

    let n_plus_1 = &n_int + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let dd = &n_plus_1 >> s;

    // Binary Lucas chain for U_dd, V_dd, Q^dd.
    let mut u = BigInt::zero();
    let mut v = BigInt::from(2);
    let mut qk = BigInt::one();
    let bits = dd.bits();
    for i in (0..bits).rev() {
        // double
        u = modn(&u * &v);
        v = modn(&v * &v - &qk * 2u32);
        qk = modn(&qk * &qk);
        if dd.bit(i) {
            let nu = half(&p * &u + &v);
            let nv = half(&d * &u + &p * &v);
            u = nu;
            v = nv;
            qk = modn(&qk * &q);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = modn(&v * &v - &qk * 2u32);
        qk = modn(&qk * &qk);
        if v.is_zero() {
            return true;
        }
    }
    false
}

/// Largest bound below which Miller–Rabin with the first 13 primes as
/// bases is deterministic.
fn deterministic_mr_limit() -> BigUint {
    BigUint::parse_bytes(b"3317044064679887385961981", 10).unwrap()
}

/// Primality test for arbitrary-size integers.
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    if n < &deterministic_mr_limit() {
        return SMALL_PRIMES
            .iter()
            .all(|&a| strong_probable_prime_big(n, &BigUint::from(a)));
    }
    strong_probable_prime_big(n, &BigUint::from(2u32)) && strong_lucas(n)
}

/// Euler's totient of a machine integer.
pub fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            while n % q == 0 {
                n /= q;
            }
            result -= result / q;
        }
        q += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}
