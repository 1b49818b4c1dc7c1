//! Arithmetic in small finite fields GF(p^s).
//!
//! An element is stored as its code in `[0, q)`: the base-p digits
//! `c_0 .. c_{s-1}` (least significant first) are the coefficients of
//! `c_0 + c_1 x + ... + c_{s-1} x^{s-1}` modulo a fixed primitive polynomial.
//! All operations are table lookups; the tables are built once in
//! [`FieldSpec::new`].

use std::fmt;

use crate::error::{Error, Result};

/// Fixed moduli for the non-prime orders, coefficients listed from the
/// constant term up to (but excluding) the monic leading term.
const MODULUS_TABLE: &[(u32, u32, u32, &[u8])] = &[
    // (q, p, s, low coefficients)
    (4, 2, 2, &[1, 1]),        // x^2 + x + 1
    (8, 2, 3, &[1, 1, 0]),     // x^3 + x + 1
    (9, 3, 2, &[2, 2]),        // x^2 + 2x + 2
    (16, 2, 4, &[1, 1, 0, 0]), // x^4 + x + 1
    (25, 5, 2, &[2, 4]),       // x^2 + 4x + 2
    (27, 3, 3, &[1, 2, 0]),    // x^3 + 2x + 1
];

const MAX_Q: u32 = 27;

/// Element of a field, identified by its code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GfElement(pub u8);

impl GfElement {
    pub const ZERO: GfElement = GfElement(0);
    pub const ONE: GfElement = GfElement(1);

    pub fn code(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for GfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field GF(q), q = p^s, with its modulus and precomputed tables.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    s: u32,
    q: u32,
    /// Monic modulus, full coefficient list (length s + 1). Empty for s = 1.
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)?;
        if self.s > 1 {
            write!(f, " mod {}", self.modulus_string())?;
        }
        Ok(())
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub(crate) fn is_prime(n: u32) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Splits `q` into `(p, s)` when it is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut s = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        s += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p, s))
}

/// Digits of `code` in base `p`, least significant first, padded to `len`.
fn digits(mut code: u32, p: u32, len: usize) -> Vec<u8> {
    let mut out = vec![0u8; len];
    for d in out.iter_mut() {
        *d = (code % p) as u8;
        code /= p;
    }
    out
}

fn undigits(ds: &[u8], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d as u32)
}

/// Remainder of `a` modulo the monic polynomial `m`, coefficients mod `p`.
fn poly_rem(a: &[u8], m: &[u8], p: u32) -> Vec<u8> {
    let deg_m = m.len() - 1;
    let mut r: Vec<u32> = a.iter().map(|&c| c as u32).collect();
    for i in (deg_m..r.len()).rev() {
        let c = r[i] % p;
        if c == 0 {
            continue;
        }
        for (j, &mj) in m.iter().enumerate() {
            let idx = i - deg_m + j;
            r[idx] = (r[idx] + (p - c) * mj as u32) % p;
        }
    }
    r.truncate(deg_m);
    r.resize(deg_m, 0);
    r.into_iter().map(|c| (c % p) as u8).collect()
}

fn poly_mul(a: &[u8], b: &[u8], p: u32) -> Vec<u8> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u32 * y as u32) % p;
        }
    }
    out.into_iter().map(|c| c as u8).collect()
}

/// True when the monic `m` has no monic factor of degree `1..=deg/2`.
fn is_irreducible(m: &[u8], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut f = digits(low, p, d);
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds GF(q) from the fixed modulus table. Fails for unsupported orders
    /// or when a table modulus does not check out as irreducible and primitive.
    pub fn new(q: u32) -> Result<FieldSpec> {
        if q > MAX_Q {
            return Err(Error::UnsupportedField(q));
        }
        let (p, s) = prime_power(q).ok_or(Error::UnsupportedField(q))?;
        let modulus = if s == 1 {
            Vec::new()
        } else {
            let (_, _, _, low) = MODULUS_TABLE
                .iter()
                .find(|(qq, ..)| *qq == q)
                .ok_or(Error::UnsupportedField(q))?;
            let mut m = low.to_vec();
            m.push(1);
            m
        };
        Self::with_modulus(p, s, modulus)
    }

    fn with_modulus(p: u32, s: u32, modulus: Vec<u8>) -> Result<FieldSpec> {
        let q = p.pow(s);
        let qs = q as usize;
        if s > 1 && !is_irreducible(&modulus, p) {
            return Err(Error::BadModulus {
                q,
                what: "irreducible",
            });
        }
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            let da = digits(a, p, s as usize);
            for b in 0..q {
                let db = digits(b, p, s as usize);
                let sum: Vec<u8> = da
                    .iter()
                    .zip(&db)
                    .map(|(&x, &y)| ((x as u32 + y as u32) % p) as u8)
                    .collect();
                let prod = if s == 1 {
                    (a * b) % p
                } else {
                    undigits(&poly_rem(&poly_mul(&da, &db, p), &modulus, p), p)
                };
                add[a as usize * qs + b as usize] = undigits(&sum, p) as u8;
                mul[a as usize * qs + b as usize] = prod as u8;
            }
        }
        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            neg[a] = (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..qs)
                    .find(|&b| mul[a * qs + b] == 1)
                    .ok_or(Error::BadModulus {
                        q,
                        what: "irreducible",
                    })? as u8;
            }
        }
        let field = FieldSpec {
            p,
            s,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        };
        if s > 1 {
            // The class of x (code p) must generate the multiplicative group.
            let x = GfElement(p as u8);
            if field.order(x) != q - 1 {
                return Err(Error::BadModulus {
                    q,
                    what: "primitive",
                });
            }
        }
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Full coefficient list of the modulus, constant term first. Empty for prime fields.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// The modulus written as a polynomial in `x`, e.g. `x^2+x+1`; `-` for prime fields.
    pub fn modulus_string(&self) -> String {
        if self.s == 1 {
            return "-".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        terms.join("+")
    }

    pub fn elements(&self) -> impl Iterator<Item = GfElement> + '_ {
        (0..self.q).map(|c| GfElement(c as u8))
    }

    pub fn contains(&self, a: GfElement) -> bool {
        (a.0 as u32) < self.q
    }

    #[inline]
    pub fn add(&self, a: GfElement, b: GfElement) -> GfElement {
        GfElement(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: GfElement, b: GfElement) -> GfElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: GfElement, b: GfElement) -> GfElement {
        GfElement(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: GfElement) -> GfElement {
        GfElement(self.neg[a.0 as usize])
    }

    pub fn inv(&self, a: GfElement) -> Result<GfElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(GfElement(self.inv[a.0 as usize]))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: GfElement) -> u32 {
        assert!(!a.is_zero());
        let mut acc = a;
        let mut k = 1;
        while acc != GfElement::ONE {
            acc = self.mul(acc, a);
            k += 1;
        }
        k
    }

    /// Attaches this field to an element code for checked arithmetic.
    pub fn element(&self, code: u8) -> Result<BoundElement<'_>> {
        let e = GfElement(code);
        if !self.contains(e) {
            return Err(Error::Params(format!("code {code} not in GF({})", self.q)));
        }
        Ok(BoundElement {
            field: self,
            value: e,
        })
    }
}

/// An element together with the field it lives in. Arithmetic between
/// elements of different fields is rejected.
#[derive(Debug, Clone, Copy)]
pub struct BoundElement<'f> {
    field: &'f FieldSpec,
    value: GfElement,
}

impl<'f> BoundElement<'f> {
    pub fn value(&self) -> GfElement {
        self.value
    }

    fn same_field(&self, other: &BoundElement<'_>) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.q,
                right: other.field.q,
            });
        }
        Ok(())
    }

    pub fn checked_add(self, other: BoundElement<'_>) -> Result<BoundElement<'f>> {
        self.same_field(&other)?;
        Ok(BoundElement {
            field: self.field,
            value: self.field.add(self.value, other.value),
        })
    }

    pub fn checked_mul(self, other: BoundElement<'_>) -> Result<BoundElement<'f>> {
        self.same_field(&other)?;
        Ok(BoundElement {
            field: self.field,
            value: self.field.mul(self.value, other.value),
        })
    }

    pub fn checked_inv(self) -> Result<BoundElement<'f>> {
        Ok(BoundElement {
            field: self.field,
            value: self.field.inv(self.value)?,
        })
    }
}
