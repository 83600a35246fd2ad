//! Finite fields `F_q` for prime powers `q ≤ 64`, with a designated
//! primitive element and discrete-log tables.
//!
//! Elements are integer codes in `[0, q)`. Prime fields use the residue
//! itself; extension fields pack the coefficient vector of the residue
//! polynomial in base `p` (constant term first). Multiplication runs in the
//! log domain, addition through a precomputed table, so all arithmetic after
//! construction is table lookups.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;

/// Field element code; meaningful only together with its [`Field`].
pub type FieldElement = u8;

/// Element addition strategy. Characteristic-2 codes are plain XOR and prime
/// fields reduce by one conditional subtract, both of which the compiler
/// vectorizes; odd extension fields fall back to the table.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AddKind {
    Xor,
    ModPrime(u8),
    Table,
}

/// Largest supported field size.
pub const MAX_Q: u16 = 64;

/// An explicit finite field with arithmetic tables.
///
/// Immutable after construction; shareable across threads.
#[derive(Clone, Debug)]
pub struct Field {
    q: u16,
    p: u16,
    degree: u32,
    /// Coefficients of the monic defining polynomial, constant term first
    /// (length `degree + 1`); for prime fields just `[0, 1]` scaled — unused.
    modulus: Vec<u8>,
    epsilon: u8,
    /// `exp[i] = ε^i` for `0 ≤ i < q−1`.
    exp: Vec<u8>,
    /// `log[c]` = discrete log of the nonzero code `c`; `log[0]` is a sentinel.
    log: Vec<u16>,
    add: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

fn factor_prime_power(q: u16) -> Option<(u16, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u16;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut degree = 0;
            while rest % p == 0 {
                rest /= p;
                degree += 1;
            }
            return (rest == 1).then_some((p, degree));
        }
        p += 1;
    }
    Some((q, 1))
}

/// Polynomial arithmetic over F_p on little-endian coefficient vectors,
/// used only while building the tables.
mod poly {
    use alloc::vec;
    use alloc::vec::Vec;

    pub fn trim(v: &mut Vec<u16>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mul(a: &[u16], b: &[u16], p: u16) -> Vec<u16> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u16; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + ai * bj) % p;
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub fn rem(a: &[u16], m: &[u16], p: u16) -> Vec<u16> {
        let mut r: Vec<u16> = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        while r.len() > dm {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            for (i, &mi) in m.iter().enumerate() {
                let idx = i + shift;
                let sub = (lead * mi) % p;
                r[idx] = (r[idx] + p * p - sub) % p;
            }
            trim(&mut r);
            if r.len() > dm && *r.last().unwrap() == 0 {
                trim(&mut r);
            }
        }
        r
    }

    pub fn is_irreducible(m: &[u16], p: u16) -> bool {
        let dm = m.len() - 1;
        // Trial division by every monic polynomial of degree 1..=dm/2.
        for d in 1..=dm / 2 {
            let count = (p as u64).pow(d as u32);
            for v in 0..count {
                let mut div = Vec::with_capacity(d + 1);
                let mut rest = v;
                for _ in 0..d {
                    div.push((rest % p as u64) as u16);
                    rest /= p as u64;
                }
                div.push(1);
                if rem(m, &div, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl Field {
    /// Build `F_q`. Fails with `NotPrimePower` unless `q` is a prime power
    /// in `2..=64`.
    pub fn new(q: u16) -> Result<Field, Error> {
        let err = Error::NotPrimePower { q: q as u64 };
        if !(2..=MAX_Q).contains(&q) {
            return Err(err);
        }
        let (p, degree) = factor_prime_power(q).ok_or(err)?;

        // Defining polynomial: the first irreducible monic polynomial of the
        // right degree, in base-p order of the non-leading coefficients.
        // This pins x²+x+1 for q=4, x³+x+1 for q=8 and x²+1 for q=9.
        let modulus: Vec<u16> = if degree == 1 {
            vec![0, 1]
        } else {
            let mut found = None;
            let count = (p as u64).pow(degree);
            for v in 0..count {
                let mut m = Vec::with_capacity(degree as usize + 1);
                let mut rest = v;
                for _ in 0..degree {
                    m.push((rest % p as u64) as u16);
                    rest /= p as u64;
                }
                m.push(1);
                if poly::is_irreducible(&m, p) {
                    found = Some(m);
                    break;
                }
            }
            found.expect("an irreducible polynomial of each degree exists")
        };

        let code_of = |coeffs: &[u16]| -> u8 {
            let mut c = 0u32;
            for (i, &a) in coeffs.iter().enumerate() {
                c += a as u32 * (p as u32).pow(i as u32);
            }
            c as u8
        };
        let coeffs_of = |code: u8| -> Vec<u16> {
            let mut v = Vec::new();
            let mut rest = code as u16;
            while rest > 0 {
                v.push(rest % p);
                rest /= p;
            }
            v
        };

        let mul_codes = |a: u8, b: u8| -> u8 {
            if degree == 1 {
                ((a as u32 * b as u32) % q as u32) as u8
            } else {
                let prod = poly::mul(&coeffs_of(a), &coeffs_of(b), p);
                code_of(&poly::rem(&prod, &modulus, p))
            }
        };

        // Addition table: coefficient-wise addition mod p.
        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        for a in 0..q {
            for b in 0..q {
                let (mut x, mut y) = (a, b);
                let mut c = 0u16;
                let mut place = 1u16;
                for _ in 0..degree {
                    c += ((x % p + y % p) % p) * place;
                    x /= p;
                    y /= p;
                    place *= p;
                }
                add[a as usize * qs + b as usize] = c as u8;
            }
        }

        // Designated primitive element: the smallest code of full order.
        let order = |a: u8| -> u16 {
            let mut x = a;
            let mut k = 1u16;
            while x != 1 {
                x = mul_codes(x, a);
                k += 1;
            }
            k
        };
        let epsilon = (2..q as u8)
            .find(|&a| order(a) == q - 1)
            .or((q == 2).then_some(1))
            .expect("the multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u8; (q - 1) as usize];
        let mut log = vec![u16::MAX; qs];
        let mut x = 1u8;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            debug_assert_eq!(log[x as usize], u16::MAX, "epsilon powers repeat");
            log[x as usize] = i as u16;
            x = mul_codes(x, epsilon);
        }
        debug_assert_eq!(x, 1, "epsilon has order q-1");

        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            neg[a] = (0..q as usize)
                .find(|&b| add[a * qs + b] == 0)
                .expect("additive inverse exists") as u8;
            if a > 0 {
                let l = log[a] as usize;
                inv[a] = exp[(qs - 1 - l) % (qs - 1)];
            }
        }

        let modulus: Vec<u8> = modulus.iter().map(|&c| c as u8).collect();
        Ok(Field { q, p, degree, modulus, epsilon, exp, log, add, neg, inv })
    }

    #[inline]
    pub fn q(&self) -> u16 {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> u16 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// The designated primitive element ε.
    #[inline]
    pub fn epsilon(&self) -> FieldElement {
        self.epsilon
    }

    /// `ε^e` for any integer exponent.
    #[inline]
    pub fn epsilon_pow(&self, e: i64) -> FieldElement {
        let m = (self.q - 1) as i64;
        self.exp[e.rem_euclid(m) as usize]
    }

    /// Discrete log base ε of a nonzero element.
    #[inline]
    pub fn discrete_log(&self, a: FieldElement) -> Option<u16> {
        (a != 0).then(|| self.log[a as usize])
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a == 0 || b == 0 {
            return 0;
        }
        let l = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.exp[l % (self.q - 1) as usize]
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, Error> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv[a as usize])
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, Error> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with exponent reduction modulo `q − 1` for nonzero bases.
    pub fn pow(&self, a: FieldElement, e: i64) -> Result<FieldElement, Error> {
        if a == 0 {
            return match e {
                0 => Ok(1),
                _ if e > 0 => Ok(0),
                _ => Err(Error::DivisionByZero),
            };
        }
        let l = self.log[a as usize] as i64;
        Ok(self.epsilon_pow(l * e.rem_euclid((self.q - 1) as i64)))
    }

    /// Borrow of the raw addition table row for `a`; hot loops index it directly.
    #[inline]
    pub fn add_row(&self, a: FieldElement) -> &[u8] {
        let q = self.q as usize;
        &self.add[a as usize * q..(a as usize + 1) * q]
    }

    #[inline]
    pub fn add_table(&self) -> &[u8] {
        &self.add
    }

    /// How addition vectorizes for this field; hot loops hoist the choice.
    #[inline]
    pub fn add_kind(&self) -> AddKind {
        if self.p == 2 {
            AddKind::Xor
        } else if self.degree == 1 {
            AddKind::ModPrime(self.q as u8)
        } else {
            AddKind::Table
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        0..self.q as u8
    }
}
