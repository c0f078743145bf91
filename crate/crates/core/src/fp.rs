//! Dense polynomials over a prime field `F_p` with `p < 2^63`.

use rand::Rng;

use crate::polyarith::IntPolynomial;
use crate::primes::{inv_mod, mul_mod};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { p, coeffs }
    }

    pub fn from_int(f: &IntPolynomial, p: u64) -> Self {
        Self::new(p, f.reduce_mod(p))
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lc(&self) -> u64 {
        *self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: u64) -> u64 {
        crate::polyarith::eval_reduced(&self.coeffs, x % self.p, self.p)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lc(), self.p).expect("p prime");
        Self::new(
            self.p,
            self.coeffs
                .iter()
                .map(|&c| mul_mod(c, inv, self.p))
                .collect(),
        )
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(
            self.p,
            (0..n)
                .map(|i| (get(&self.coeffs, i) + get(&other.coeffs, i)) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(
            self.p,
            (0..n)
                .map(|i| (get(&self.coeffs, i) + self.p - get(&other.coeffs, i)) % self.p)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(self.p, Vec::new());
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p;
            }
        }
        Self::new(self.p, acc.into_iter().map(|c| c as u64).collect())
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let inv = inv_mod(divisor.lc(), self.p).expect("p prime");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::new(self.p, Vec::new()), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = mul_mod(r[k + dd], inv, self.p);
            q[k] = t;
            if t == 0 {
                continue;
            }
            for (i, &c) in divisor.coeffs.iter().enumerate() {
                let sub = mul_mod(t, c, self.p);
                r[k + i] = (r[k + i] + self.p - sub) % self.p;
            }
        }
        r.truncate(dd);
        (Self::new(self.p, q), Self::new(self.p, r))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut base = self.rem(modulus);
        let mut acc = Self::one(self.p).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// `gcd(x^p - x, self)`: the product of the distinct linear factors.
    pub fn linear_part(&self) -> Self {
        let x = Self::x(self.p);
        let xp = x.pow_mod(self.p, self);
        xp.sub(&x).gcd(self)
    }

    /// Distinct-degree factorization of a squarefree polynomial: pairs
    /// `(k, g_k)` where `g_k` is the product of the degree-`k` factors.
    pub fn distinct_degree(&self) -> Vec<(usize, Self)> {
        let mut out = Vec::new();
        let mut f = self.monic();
        let x = Self::x(self.p);
        let mut h = x.clone();
        let mut k = 0;
        while f.degree().unwrap_or(0) >= 2 * (k + 1) {
            k += 1;
            h = h.pow_mod(self.p, &f);
            let g = h.sub(&x).gcd(&f);
            if g.degree().unwrap_or(0) > 0 {
                f = f.div_rem(&g).0;
                h = h.rem(&f);
                out.push((k, g));
            }
        }
        if let Some(d) = f.degree() {
            if d > 0 {
                out.push((d, f));
            }
        }
        out
    }

    /// Roots of a product of distinct monic linear factors, by
    /// Cantor–Zassenhaus equal-degree splitting.
    pub fn split_linear<R: Rng>(&self, rng: &mut R) -> Vec<u64> {
        let mut out = Vec::new();
        let mut stack = vec![self.monic()];
        while let Some(g) = stack.pop() {
            match g.degree() {
                None | Some(0) => {}
                Some(1) => out.push((self.p - g.coeffs[0]) % self.p),
                Some(_) if self.p == 2 => {
                    out.extend((0..2).filter(|&a| g.eval(a) == 0));
                }
                Some(d) => loop {
                    let a = rng.gen_range(0..self.p);
                    let shifted = Self::new(self.p, vec![a, 1]);
                    let w = shifted
                        .pow_mod((self.p - 1) / 2, &g)
                        .sub(&Self::one(self.p));
                    let h = w.gcd(&g);
                    let dh = h.degree().unwrap_or(0);
                    if dh > 0 && dh < d {
                        let rest = g.div_rem(&h).0;
                        stack.push(h);
                        stack.push(rest);
                        break;
                    }
                },
            }
        }
        out.sort_unstable();
        out
    }
}
