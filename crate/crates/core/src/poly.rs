//! Dense polynomials over a prime field F_q, coefficients in ascending order.

use alloc::vec;
use alloc::vec::Vec;

pub(crate) fn inv_mod(a: u32, q: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(q));
    pow_mod(a, q - 2, q)
}

pub(crate) fn pow_mod(mut base: u32, mut exp: u32, q: u32) -> u32 {
    let q64 = q as u64;
    let mut acc: u64 = 1 % q64;
    let mut b = base as u64 % q64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % q64;
        }
        b = b * b % q64;
        exp >>= 1;
    }
    base = acc as u32;
    base
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn trim(p: &mut Vec<u32>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    if p.is_empty() {
        p.push(0);
    }
}

fn degree(p: &[u32]) -> Option<usize> {
    p.iter().rposition(|&c| c != 0)
}

/// Remainder of `a` modulo the nonzero polynomial `f`.
fn rem(a: &[u32], f: &[u32], q: u32) -> Vec<u32> {
    let df = degree(f).expect("division by zero polynomial");
    let lead_inv = inv_mod(f[df], q);
    let mut r = a.to_vec();
    let q64 = q as u64;
    while let Some(dr) = degree(&r) {
        if dr < df {
            break;
        }
        let factor = (r[dr] as u64 * lead_inv as u64 % q64) as u32;
        let shift = dr - df;
        for (i, &c) in f.iter().enumerate().take(df + 1) {
            let sub = (factor as u64 * c as u64 % q64) as u32;
            r[shift + i] = (r[shift + i] + q - sub) % q;
        }
    }
    trim(&mut r);
    r
}

fn mul(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
    let q64 = q as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % q64;
        }
    }
    let mut v: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    trim(&mut v);
    v
}

fn mul_mod(a: &[u32], b: &[u32], f: &[u32], q: u32) -> Vec<u32> {
    rem(&mul(a, b, q), f, q)
}

/// `base^exp mod f` by square-and-multiply.
pub(crate) fn pow_mod_poly(base: &[u32], mut exp: u128, f: &[u32], q: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = rem(base, f, q);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &b, f, q);
        }
        b = mul_mod(&b, &b, f, q);
        exp >>= 1;
    }
    acc
}

fn gcd(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while degree(&y).is_some() {
        let r = rem(&x, &y, q);
        x = y;
        y = r;
    }
    x
}

/// Ben-Or irreducibility test: `f` of degree `m` is irreducible iff
/// `gcd(f, x^{q^i} - x) = 1` for every `1 <= i <= m/2`.
pub(crate) fn is_irreducible(f: &[u32], q: u32) -> bool {
    let Some(m) = degree(f) else { return false };
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let x = [0u32, 1];
    let mut h = rem(&x, f, q);
    for _ in 1..=m / 2 {
        h = pow_mod_poly(&h, q as u128, f, q);
        let mut diff = h.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + q - 1) % q;
        trim(&mut diff);
        let g = gcd(f, &diff, q);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Irreducible `f` whose root generates the multiplicative group.
pub(crate) fn is_primitive(f: &[u32], q: u32) -> bool {
    if !is_irreducible(f, q) {
        return false;
    }
    let m = degree(f).unwrap() as u32;
    let order = (q as u128).pow(m) - 1;
    let x = [0u32, 1];
    let one = [1u32];
    if order == 1 {
        // F_2 with x + 1: the root 1 generates the trivial group.
        return rem(&x, f, q) == one;
    }
    prime_factors(order as u64).into_iter().all(|p| pow_mod_poly(&x, order / p as u128, f, q) != one)
}

/// Monic degree-`m` polynomials in increasing order of `sum c_j q^j`,
/// returning the first primitive one.
pub(crate) fn smallest_primitive(q: u32, m: u32) -> Vec<u32> {
    let q64 = q as u64;
    let start = q64.pow(m);
    for enc in start..2 * start {
        let mut coeffs = Vec::with_capacity(m as usize + 1);
        let mut e = enc;
        for _ in 0..=m {
            coeffs.push((e % q64) as u32);
            e /= q64;
        }
        if coeffs[0] == 0 {
            continue;
        }
        if is_primitive(&coeffs, q) {
            return coeffs;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}
