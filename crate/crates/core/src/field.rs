//! Finite fields `F_q`, `q = p^e`.
//!
//! Elements are stored as small integers. For a prime field the integer is
//! the residue itself; for an extension it is the base-`p` encoding
//! `c_0 + c_1 p + ... + c_{e-1} p^{e-1}` of the coefficient vector of the
//! element in the basis `1, t, ..., t^{e-1}`, where `t` is a root of the
//! field modulus. Multiplication in extensions goes through log/exp tables.

use std::fmt;

use thiserror::Error;

/// Largest field order accepted. Extension fields are table driven.
pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge(u64),
    #[error("modulus must have degree {expected}, got {got}")]
    ModulusDegree { expected: usize, got: usize },
    #[error("modulus is reducible over F_{0}")]
    Reducible(u32),
    #[error("division by zero")]
    DivisionByZero,
}

/// Description of a finite field: characteristic, degree and defining modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    /// Low-order coefficients `c_0..c_{e-1}` of the monic modulus
    /// `t^e + c_{e-1} t^{e-1} + ... + c_0`. Empty for prime fields.
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        Self::new(p, 1)
    }

    /// Field of order `p^e` with the default modulus: the irreducible monic
    /// polynomial whose coefficient vector `(c_{e-1}, ..., c_0)` is
    /// lexicographically least.
    pub fn new(p: u32, e: u32) -> Result<Self, FieldError> {
        check_order(p, e)?;
        let modulus = if e == 1 { Vec::new() } else { least_irreducible(p, e as usize) };
        Ok(FieldSpec { p, e, modulus })
    }

    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self, FieldError> {
        let e = modulus.len() as u32;
        check_order(p, e)?;
        let modulus: Vec<u32> = modulus.into_iter().map(|c| c % p).collect();
        if e > 1 && !is_irreducible(p, &modulus) {
            return Err(FieldError::Reducible(p));
        }
        Ok(FieldSpec { p, e, modulus: if e == 1 { Vec::new() } else { modulus } })
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }
}

fn check_order(p: u32, e: u32) -> Result<(), FieldError> {
    if !is_prime(p as u64) {
        return Err(FieldError::NotPrime(p as u64));
    }
    if e == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
    if q > MAX_ORDER {
        return Err(FieldError::TooLarge(q));
    }
    Ok(())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Dense polynomials over F_p, coefficient i of x^i, used only while building tables.

fn poly_rem(p: u32, mut a: Vec<u32>, b: &[u32]) -> Vec<u32> {
    let db = b.len() - 1;
    let inv_lead = inv_mod(b[db], p);
    while a.len() > db {
        let lead = *a.last().unwrap();
        if lead != 0 {
            let f = lead as u64 * inv_lead as u64 % p as u64;
            let shift = a.len() - 1 - db;
            for (i, &bc) in b.iter().enumerate() {
                let sub = f * bc as u64 % p as u64;
                a[shift + i] = ((a[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
        }
        a.pop();
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a as u64, p as u64 - 2, p as u64) as u32
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=e/2`.
fn is_irreducible(p: u32, low: &[u32]) -> bool {
    let e = low.len();
    let mut f = low.to_vec();
    f.push(1);
    for deg in 1..=e / 2 {
        let count = (p as u64).pow(deg as u32);
        for code in 0..count {
            let mut g = decode(code, p, deg);
            g.push(1);
            if poly_rem(p, f.clone(), &g).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn decode(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for c in out.iter_mut() {
        *c = (code % p as u64) as u32;
        code /= p as u64;
    }
    out
}

fn least_irreducible(p: u32, e: usize) -> Vec<u32> {
    // `code` read in base p has c_{e-1} as its most significant digit, so
    // increasing codes walk the coefficient vectors lexicographically.
    let count = (p as u64).pow(e as u32);
    (0..count)
        .map(|code| decode(code, p, e))
        .find(|low| is_irreducible(p, low))
        .expect("an irreducible polynomial exists in every degree")
}

/// An element of a finite field. Only meaningful together with its [`Field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(pub(crate) u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The integer encoding of the element.
    pub fn code(self) -> u32 {
        self.0
    }
}

/// Runtime arithmetic for a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Field {
    spec: FieldSpec,
    q: u32,
    /// exp[i] = g^i for a primitive element g, i in 0..q-1 (extensions only)
    exp: Vec<u32>,
    /// log[x] for x != 0 (extensions only)
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spec.e == 1 {
            write!(f, "F_{}", self.spec.p)
        } else {
            write!(f, "F_{}^{} (modulus {:?})", self.spec.p, self.spec.e, self.spec.modulus)
        }
    }
}

impl Field {
    pub fn new(spec: FieldSpec) -> Field {
        let q = spec.order() as u32;
        let mut field = Field { spec, q, exp: Vec::new(), log: Vec::new() };
        if field.spec.e > 1 {
            field.build_tables();
        }
        field
    }

    pub fn prime(p: u32) -> Result<Field, FieldError> {
        Ok(Field::new(FieldSpec::prime(p)?))
    }

    pub fn extension(p: u32, e: u32) -> Result<Field, FieldError> {
        Ok(Field::new(FieldSpec::new(p, e)?))
    }

    fn build_tables(&mut self) {
        let p = self.spec.p;
        let e = self.spec.e as usize;
        let mut modulus = self.spec.modulus.clone();
        modulus.push(1);
        let mul_slow = |a: u32, b: u32| -> u32 {
            let (va, vb) = (decode(a as u64, p, e), decode(b as u64, p, e));
            let mut prod = vec![0u32; 2 * e - 1];
            for (i, &x) in va.iter().enumerate() {
                for (j, &y) in vb.iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                }
            }
            encode(&poly_rem(p, prod, &modulus), p)
        };
        let n = self.q - 1;
        for g in 2..self.q {
            let mut exp = Vec::with_capacity(n as usize);
            let mut x = 1u32;
            loop {
                exp.push(x);
                x = mul_slow(x, g);
                if x == 1 {
                    break;
                }
            }
            if exp.len() as u32 == n {
                let mut log = vec![0u32; self.q as usize];
                for (i, &v) in exp.iter().enumerate() {
                    log[v as usize] = i as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic");
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.spec.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.spec.e == 1
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The class of `t` in `F_p[t]/(modulus)`; `None` for prime fields.
    pub fn generator(&self) -> Option<FieldElement> {
        (self.spec.e > 1).then_some(FieldElement(self.spec.p))
    }

    /// All field elements in increasing code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    /// Element from its integer code; panics when out of range.
    pub fn element(&self, code: u32) -> FieldElement {
        assert!(code < self.q, "code {code} out of range for a field of order {}", self.q);
        FieldElement(code)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.spec.p as i64) as u32)
    }

    /// Coefficients `c_0..c_{e-1}` of the element in the basis `1, t, ..., t^{e-1}`.
    pub fn coefficients(&self, a: FieldElement) -> Vec<u32> {
        decode(a.0 as u64, self.spec.p, self.spec.e as usize)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> FieldElement {
        let p = self.spec.p;
        let e = self.spec.e as usize;
        let mut v = vec![0u32; e];
        for (i, &c) in coeffs.iter().enumerate().take(e) {
            v[i] = c % p;
        }
        FieldElement(encode(&v, p))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.spec.p;
        if self.spec.e == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= p { s - p } else { s });
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            let d = (x % p + y % p) % p;
            out += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.spec.p;
        if self.spec.e == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            let d = x % p;
            out += ((p - d) % p) * place;
            place *= p;
            x /= p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        if self.spec.e == 1 {
            return FieldElement((a.0 as u64 * b.0 as u64 % self.spec.p as u64) as u32);
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[(if l >= n { l - n } else { l }) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        if self.spec.e == 1 {
            return Ok(FieldElement(inv_mod(a.0, self.spec.p)));
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(FieldElement(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        if self.spec.e == 1 {
            return FieldElement(pow_mod(a.0 as u64, e, self.spec.p as u64) as u32);
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64 * (e % n) % n;
        FieldElement(self.exp[l as usize])
    }

    /// `c ↦ c^p`.
    pub fn frobenius(&self, c: FieldElement) -> FieldElement {
        if self.spec.e == 1 {
            c
        } else {
            self.pow(c, self.spec.p as u64)
        }
    }

    /// The unique `d` with `d^p = c`, namely `c^(p^(e-1))`.
    pub fn pth_root(&self, c: FieldElement) -> FieldElement {
        if self.spec.e == 1 {
            c
        } else {
            self.pow(c, (self.spec.p as u64).pow(self.spec.e - 1))
        }
    }

    /// Human readable element, in terms of the generator `t` for extensions.
    pub fn format(&self, a: FieldElement) -> String {
        if self.spec.e == 1 {
            return a.0.to_string();
        }
        let coeffs = self.coefficients(a);
        let mut parts = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            parts.push(match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}*t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}*t^{i}"),
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

fn encode(v: &[u32], p: u32) -> u32 {
    v.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}
