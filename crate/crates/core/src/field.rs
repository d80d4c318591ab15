//! Arithmetic in the tower F_q ⊂ F_{q^m}.
//!
//! Elements are stored by their integer encoding `sum c_j q^j`, where
//! `c_j` are the coordinates in the power basis `1, α, …, α^{m-1}` and
//! `α` is the root of the modulus. For `q = 2` the encoding is the usual
//! bit-packed polynomial. Fields of order at most 2^16 additionally carry
//! log/antilog tables, which is what the hot loops use.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::FqMatrix;
use crate::poly;

/// Largest field order for which log/antilog tables are built.
pub const TABLE_ORDER_LIMIT: u64 = 1 << 16;

/// Largest supported field order (encodings must fit in `u32`).
pub const MAX_ORDER: u64 = 1 << 32;

/// An element of F_{q^m}, by its power-basis integer encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fqm(u32);

impl Fqm {
    pub const ZERO: Fqm = Fqm(0);
    pub const ONE: Fqm = Fqm(1);

    #[inline]
    pub fn encoding(self) -> u64 {
        self.0 as u64
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub(crate) fn from_raw(v: u32) -> Fqm {
        Fqm(v)
    }
}

impl fmt::Display for Fqm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone)]
struct Tables {
    /// `exp[i] = g^i`, doubled so that `exp[log a + log b]` needs no reduction.
    exp: Vec<u32>,
    /// `log[a]` for `a != 0`; `log[0]` is unused.
    log: Vec<u32>,
}

/// The extension field F_{q^m} with a fixed modulus and F_q-basis Γ.
#[derive(Clone)]
pub struct ExtField {
    q: u32,
    m: u32,
    order: u64,
    modulus: Vec<u32>,
    primitive_modulus: bool,
    /// Powers `q^j`, used to pick digits out of encodings.
    place: Vec<u32>,
    gamma: Vec<Fqm>,
    /// Power-basis coordinates to Γ-coordinates; `None` for the power basis.
    to_gamma: Option<FqMatrix>,
    generator: Fqm,
    tables: Option<Tables>,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtField")
            .field("q", &self.q)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("power_basis", &self.to_gamma.is_none())
            .finish()
    }
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.m == other.m && self.modulus == other.modulus && self.gamma == other.gamma
    }
}

impl Eq for ExtField {}

impl ExtField {
    /// Builds F_{q^m}. Without an explicit modulus the smallest primitive
    /// polynomial of degree `m` (ordered by `sum c_j q^j`) is used.
    pub fn new(q: u32, m: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !poly::is_prime(q as u64) || q > u16::MAX as u32 {
            return Err(Error::NonPrimeCharacteristic(q));
        }
        if m == 0 {
            return Err(Error::InvalidParameters("extension degree must be at least 1".into()));
        }
        let order = (q as u128)
            .checked_pow(m)
            .filter(|&o| o <= MAX_ORDER as u128)
            .ok_or_else(|| Error::InvalidParameters(alloc::format!("field order {q}^{m} exceeds 2^32")))?
            as u64;
        let modulus = match modulus {
            Some(coeffs) => {
                let found = coeffs.iter().rposition(|&c| c != 0).unwrap_or(0);
                if coeffs.len() != m as usize + 1 || found != m as usize || coeffs[m as usize] != 1 {
                    return Err(Error::DegreeMismatch { expected: m as usize, found });
                }
                if coeffs.iter().any(|&c| c >= q) {
                    return Err(Error::InvalidParameters("modulus coefficient not reduced mod q".into()));
                }
                if !poly::is_irreducible(coeffs, q) {
                    return Err(Error::ReducibleModulus(coeffs.to_vec()));
                }
                coeffs.to_vec()
            }
            None => poly::smallest_primitive(q, m),
        };
        let primitive_modulus = poly::is_primitive(&modulus, q);
        let mut place = Vec::with_capacity(m as usize);
        let mut p = 1u64;
        for _ in 0..m {
            place.push(p as u32);
            p *= q as u64;
        }
        let gamma = (0..m as usize).map(|j| Fqm(place[j])).collect();
        let mut field = ExtField {
            q,
            m,
            order,
            modulus,
            primitive_modulus,
            place,
            gamma,
            to_gamma: None,
            generator: Fqm::ONE,
            tables: None,
        };
        field.generator = field.find_generator();
        if order <= TABLE_ORDER_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    /// Same field with a different ordered F_q-basis Γ used by [`ExtField::expand`].
    pub fn with_basis(&self, gamma: Vec<Fqm>) -> Result<ExtField> {
        if gamma.len() != self.m as usize {
            return Err(Error::DimensionMismatch { expected: self.m as usize, found: gamma.len() });
        }
        for g in &gamma {
            self.check(*g)?;
        }
        let m = self.m as usize;
        // Column j holds the power-basis digits of γ_j.
        let mut basis = FqMatrix::zeros(self.q, m, m);
        for (j, g) in gamma.iter().enumerate() {
            for (i, d) in self.digits(*g).into_iter().enumerate() {
                basis.set(i, j, d);
            }
        }
        let inv = basis.inverse().ok_or(Error::DependentBasis)?;
        let mut out = self.clone();
        out.gamma = gamma;
        out.to_gamma = Some(inv);
        Ok(out)
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    /// `q^m`.
    #[inline]
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Ascending coefficients `c_0, …, c_m` of the modulus.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn modulus_is_primitive(&self) -> bool {
        self.primitive_modulus
    }

    pub fn is_power_basis(&self) -> bool {
        self.to_gamma.is_none()
    }

    pub fn basis(&self) -> &[Fqm] {
        &self.gamma
    }

    /// The root α of the modulus.
    pub fn alpha(&self) -> Fqm {
        if self.m == 1 {
            Fqm((self.q - self.modulus[0]) % self.q)
        } else {
            Fqm(self.q)
        }
    }

    /// A generator of the multiplicative group (α when the modulus is primitive).
    pub fn generator(&self) -> Fqm {
        self.generator
    }

    pub fn element(&self, encoding: u64) -> Result<Fqm> {
        if encoding >= self.order {
            return Err(Error::InvalidParameters(alloc::format!(
                "element encoding {encoding} out of range for a field of order {}",
                self.order
            )));
        }
        Ok(Fqm(encoding as u32))
    }

    fn check(&self, x: Fqm) -> Result<()> {
        self.element(x.encoding()).map(|_| ())
    }

    /// Embeds `c ∈ F_q`.
    #[inline]
    pub fn from_prime(&self, c: u32) -> Fqm {
        Fqm(c % self.q)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fqm> {
        (0..self.order).map(|e| Fqm(e as u32))
    }

    /// Power-basis coordinates.
    pub fn digits(&self, x: Fqm) -> Vec<u32> {
        let mut out = vec![0; self.m as usize];
        self.digits_into(x, &mut out);
        out
    }

    #[inline]
    pub(crate) fn digits_into(&self, x: Fqm, out: &mut [u32]) {
        let mut e = x.0;
        if self.q == 2 {
            for d in out.iter_mut() {
                *d = e & 1;
                e >>= 1;
            }
        } else {
            for d in out.iter_mut() {
                *d = e % self.q;
                e /= self.q;
            }
        }
    }

    pub fn from_digits(&self, digits: &[u32]) -> Fqm {
        debug_assert_eq!(digits.len(), self.m as usize);
        let mut e = 0u64;
        for (j, &d) in digits.iter().enumerate() {
            e += (d % self.q) as u64 * self.place[j] as u64;
        }
        Fqm(e as u32)
    }

    /// Γ-coordinates of `x`: the column of `Mat_Γ` belonging to `x`.
    pub fn expand(&self, x: Fqm) -> Vec<u32> {
        let mut out = vec![0; self.m as usize];
        self.expand_into(x, &mut out);
        out
    }

    pub fn expand_into(&self, x: Fqm, out: &mut [u32]) {
        match &self.to_gamma {
            None => self.digits_into(x, out),
            Some(t) => {
                let d = self.digits(x);
                let v = t.mul_vec(&d);
                out.copy_from_slice(&v);
            }
        }
    }

    /// Inverse of [`ExtField::expand`]: `sum c_j γ_j`.
    pub fn lift(&self, coords: &[u32]) -> Fqm {
        debug_assert_eq!(coords.len(), self.m as usize);
        if self.to_gamma.is_none() {
            return self.from_digits(coords);
        }
        let mut acc = Fqm::ZERO;
        for (c, g) in coords.iter().zip(&self.gamma) {
            acc = self.add(acc, self.scale(*g, *c));
        }
        acc
    }

    #[inline]
    pub fn add(&self, a: Fqm, b: Fqm) -> Fqm {
        if self.q == 2 {
            return Fqm(a.0 ^ b.0);
        }
        let q = self.q;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut p = 1u32;
        for j in 0..self.m {
            let d = (x % q + y % q) % q;
            out += d * p;
            x /= q;
            y /= q;
            if j + 1 < self.m {
                p *= q;
            }
        }
        Fqm(out)
    }

    #[inline]
    pub fn neg(&self, a: Fqm) -> Fqm {
        if self.q == 2 {
            return a;
        }
        self.scale(a, self.q - 1)
    }

    #[inline]
    pub fn sub(&self, a: Fqm, b: Fqm) -> Fqm {
        if self.q == 2 {
            return Fqm(a.0 ^ b.0);
        }
        self.add(a, self.neg(b))
    }

    /// Multiplication by a prime-field scalar `c`.
    pub fn scale(&self, a: Fqm, c: u32) -> Fqm {
        let c = c % self.q;
        if c == 0 {
            return Fqm::ZERO;
        }
        if c == 1 {
            return a;
        }
        let q = self.q;
        let mut x = a.0;
        let mut out = 0u32;
        let mut p = 1u32;
        for j in 0..self.m {
            let d = (x % q) * c % q;
            out += d * p;
            x /= q;
            if j + 1 < self.m {
                p *= q;
            }
        }
        Fqm(out)
    }

    #[inline]
    pub fn mul(&self, a: Fqm, b: Fqm) -> Fqm {
        if a.0 == 0 || b.0 == 0 {
            return Fqm::ZERO;
        }
        match &self.tables {
            Some(t) => Fqm(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => self.mul_poly(a, b),
        }
    }

    /// Multiplicative inverse; zero maps to zero.
    #[inline]
    pub fn inv(&self, a: Fqm) -> Fqm {
        if a.0 == 0 {
            return Fqm::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let n = (self.order - 1) as u32;
                Fqm(t.exp[(n - t.log[a.0 as usize]) as usize])
            }
            None => self.pow(a, self.order - 2),
        }
    }

    /// `a / b`; division by zero gives zero.
    #[inline]
    pub fn div(&self, a: Fqm, b: Fqm) -> Fqm {
        if a.0 == 0 || b.0 == 0 {
            return Fqm::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let n = (self.order - 1) as u32;
                Fqm(t.exp[(t.log[a.0 as usize] + n - t.log[b.0 as usize]) as usize])
            }
            None => self.mul(a, self.inv(b)),
        }
    }

    pub fn pow(&self, a: Fqm, mut e: u64) -> Fqm {
        if e == 0 {
            return Fqm::ONE;
        }
        if a.0 == 0 {
            return Fqm::ZERO;
        }
        if let Some(t) = &self.tables {
            let n = self.order - 1;
            let l = (t.log[a.0 as usize] as u128 * (e % n) as u128 % n as u128) as usize;
            return Fqm(t.exp[l]);
        }
        let mut acc = Fqm::ONE;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// `x^{q^i}`; the identity when `i` is a multiple of `m`.
    pub fn frobenius(&self, x: Fqm, i: u32) -> Fqm {
        let i = i % self.m;
        if i == 0 || x.0 == 0 {
            return x;
        }
        if let Some(t) = &self.tables {
            let n = (self.order - 1) as u128;
            let qi = (self.q as u128).pow(i) % n;
            let l = t.log[x.0 as usize] as u128 * qi % n;
            return Fqm(t.exp[l as usize]);
        }
        let mut y = x;
        for _ in 0..i {
            y = self.pow(y, self.q as u64);
        }
        y
    }

    fn mul_poly(&self, a: Fqm, b: Fqm) -> Fqm {
        if self.q == 2 {
            let m = self.m;
            let (x, y) = (a.0 as u64, b.0 as u64);
            let mut prod = 0u64;
            for i in 0..m {
                if (y >> i) & 1 == 1 {
                    prod ^= x << i;
                }
            }
            let mut modbits = 0u64;
            for (i, &c) in self.modulus.iter().enumerate() {
                modbits |= (c as u64) << i;
            }
            let mut deg = 2 * m as i32 - 2;
            while deg >= m as i32 {
                if (prod >> deg) & 1 == 1 {
                    prod ^= modbits << (deg as u32 - m);
                }
                deg -= 1;
            }
            return Fqm(prod as u32);
        }
        let q = self.q as u64;
        let m = self.m as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % q;
            }
        }
        // Reduce with the monic modulus: x^m = -sum_{j<m} c_j x^j.
        for d in (m..2 * m - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (j, &mc) in self.modulus.iter().take(m).enumerate() {
                let sub = c * mc as u64 % q;
                prod[d - m + j] = (prod[d - m + j] + q - sub) % q;
            }
        }
        let digits: Vec<u32> = prod[..m].iter().map(|&c| c as u32).collect();
        self.from_digits(&digits)
    }

    fn element_order_is_full(&self, g: Fqm) -> bool {
        let n = self.order - 1;
        if n == 1 {
            return g == Fqm::ONE;
        }
        poly::prime_factors(n).into_iter().all(|p| self.pow_slow(g, n / p) != Fqm::ONE)
    }

    fn pow_slow(&self, a: Fqm, mut e: u64) -> Fqm {
        let mut acc = Fqm::ONE;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, b);
            }
            b = self.mul_poly(b, b);
            e >>= 1;
        }
        acc
    }

    fn find_generator(&self) -> Fqm {
        if self.primitive_modulus {
            return self.alpha();
        }
        (1..self.order)
            .map(|e| Fqm(e as u32))
            .find(|&g| self.element_order_is_full(g))
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&self) -> Tables {
        let n = (self.order - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; self.order as usize];
        let mut x = Fqm::ONE;
        for i in 0..n {
            exp[i] = x.0;
            log[x.0 as usize] = i as u32;
            x = self.mul_poly(x, self.generator);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        Tables { exp, log }
    }
}
