//! Arithmetic in GF(2^m), 1 <= m <= 24, with Conway-polynomial moduli.
//!
//! An element stores its field degree next to its residue bits; bit `i` is the
//! coefficient of `g^i` where `g` is the class of `x` modulo the Conway
//! polynomial of degree `m`. Elements of different degrees are never mixed:
//! operators panic on a mismatch and the `checked_*` variants return
//! [`Error::DegreeMismatch`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign};

use num_bigint::BigUint;
use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field degree.
pub const MAX_DEGREE: u32 = 24;

/// Conway polynomials over GF(2) for degrees 0..=24 (index 0 unused).
/// Bit `i` is the coefficient of `x^i`.
pub const CONWAY: [u32; 25] = [
    0, 0x3, 0x7, 0xb, 0x13, 0x25, 0x5b, 0x83, 0x11d, 0x211, 0x46f, 0x805, 0x10eb, 0x201b,
    0x40a9, 0x8035, 0x1002d, 0x20009, 0x41403, 0x80027, 0x1006f3, 0x200065, 0x401f61,
    0x800021, 0x101e6a9,
];

/// Checks that `m` is a supported degree.
pub fn check_degree(m: u32) -> Result<()> {
    if (1..=MAX_DEGREE).contains(&m) {
        Ok(())
    } else {
        Err(Error::UnsupportedDegree(m))
    }
}

/// Least common multiple of two degrees, failing outside the tower.
pub fn lcm_degree(a: u32, b: u32) -> Result<u32> {
    let l = a.lcm(&b);
    if l > MAX_DEGREE {
        return Err(Error::FieldTowerExceeded(l));
    }
    Ok(l)
}

/// Order of the multiplicative group of GF(2^m).
pub fn group_order(m: u32) -> u64 {
    (1u64 << m) - 1
}

/// Distinct prime factors of `n`.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn clmul(a: u32, b: u32) -> u64 {
    let mut r = 0u64;
    let a = a as u64;
    let mut b = b;
    let mut i = 0;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a << i;
        }
        b >>= 1;
        i += 1;
    }
    r
}

fn reduce(mut x: u64, m: u32) -> u32 {
    let poly = CONWAY[m as usize] as u64;
    let mut i = 2 * m;
    while i > m {
        i -= 1;
        if (x >> i) & 1 == 1 {
            x ^= poly << (i - m);
        }
    }
    x as u32
}

/// An element of GF(2^m).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Gf {
    deg: u8,
    bits: u32,
}

impl Gf {
    /// Builds an element from its residue bits.
    pub fn new(m: u32, bits: u32) -> Result<Gf> {
        check_degree(m)?;
        if m < 32 && bits >> m != 0 {
            return Err(Error::InvalidInput(format!("bits {bits:#x} exceed degree {m}")));
        }
        Ok(Gf { deg: m as u8, bits })
    }

    /// Builds an element without validation; `bits < 2^m` must hold.
    pub(crate) fn raw(m: u32, bits: u32) -> Gf {
        debug_assert!(bits >> m == 0);
        Gf { deg: m as u8, bits }
    }

    pub fn zero(m: u32) -> Gf {
        Gf::raw(m, 0)
    }

    pub fn one(m: u32) -> Gf {
        Gf::raw(m, 1)
    }

    /// The Conway generator `g` of GF(2^m)* (for m = 1 this is 1).
    pub fn generator(m: u32) -> Gf {
        if m == 1 {
            Gf::one(1)
        } else {
            Gf::raw(m, 2)
        }
    }

    /// `g^k` for the Conway generator `g`.
    pub fn gen_pow(m: u32, k: u64) -> Gf {
        Gf::generator(m).pow(k % group_order(m))
    }

    pub fn degree(self) -> u32 {
        self.deg as u32
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn is_one(self) -> bool {
        self.bits == 1
    }

    pub fn checked_add(self, other: Gf) -> Result<Gf> {
        if self.deg != other.deg {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Gf::raw(self.degree(), self.bits ^ other.bits))
    }

    pub fn checked_mul(self, other: Gf) -> Result<Gf> {
        if self.deg != other.deg {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.mul_same(other))
    }

    fn mul_same(self, other: Gf) -> Gf {
        let m = self.degree();
        Gf::raw(m, reduce(clmul(self.bits, other.bits), m))
    }

    pub fn square(self) -> Gf {
        self.mul_same(self)
    }

    pub fn pow(self, mut e: u64) -> Gf {
        let mut base = self;
        let mut acc = Gf::one(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    pub fn pow_big(self, e: &BigUint) -> Gf {
        let mut acc = Gf::one(self.degree());
        for i in (0..e.bits()).rev() {
            acc = acc.square();
            if e.bit(i) {
                acc = acc.mul_same(self);
            }
        }
        acc
    }

    /// Multiplicative inverse.
    pub fn inv(self) -> Result<Gf> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.pow(group_order(self.degree()) - 1))
    }

    /// The unique square root, `x^(2^(m-1))`.
    pub fn sqrt(self) -> Gf {
        let mut y = self;
        for _ in 1..self.degree() {
            y = y.square();
        }
        y
    }

    /// Smallest `d >= 1` with `x^d = 1`.
    pub fn mult_order(self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut order = group_order(self.degree());
        for p in prime_factors(order) {
            while order.is_multiple_of(p) && self.pow(order / p).is_one() {
                order /= p;
            }
        }
        Ok(order)
    }

    /// Image under the compatible embedding GF(2^deg) -> GF(2^m).
    pub fn embed(self, m: u32) -> Result<Gf> {
        check_degree(m)?;
        let d = self.degree();
        if !m.is_multiple_of(d) {
            return Err(Error::NonDivisibleDegree { from: d, to: m });
        }
        if m == d {
            return Ok(self);
        }
        let root = subfield_generator(d, m);
        let mut acc = Gf::zero(m);
        for i in (0..d).rev() {
            acc = acc.mul_same(root);
            if (self.bits >> i) & 1 == 1 {
                acc.bits ^= 1;
            }
        }
        Ok(acc)
    }

    /// Whether the element lies in the subfield GF(2^d).
    pub fn in_subfield(self, d: u32) -> bool {
        if !self.degree().is_multiple_of(d) {
            return false;
        }
        let mut y = self;
        for _ in 0..d {
            y = y.square();
        }
        y == self
    }

    /// Smallest tower degree whose field contains the element.
    pub fn min_degree(self) -> u32 {
        let m = self.degree();
        (1..=m).find(|&d| m.is_multiple_of(d) && self.in_subfield(d)).unwrap_or(m)
    }

    /// Inverse of [`Gf::embed`]: the preimage in GF(2^d).
    pub fn restrict(self, d: u32) -> Result<Gf> {
        check_degree(d)?;
        let m = self.degree();
        if !m.is_multiple_of(d) {
            return Err(Error::NonDivisibleDegree { from: d, to: m });
        }
        if d == m {
            return Ok(self);
        }
        if !self.in_subfield(d) {
            return Err(Error::NotInSubfield(d));
        }
        // Solve sum c_i root^i = self over GF(2) by elimination on bit columns.
        let root = subfield_generator(d, m);
        let mut rows: Vec<(u32, u32)> = Vec::with_capacity(d as usize);
        let mut p = Gf::one(m);
        for i in 0..d {
            rows.push((p.bits, 1 << i));
            p = p.mul_same(root);
        }
        let mut target = (self.bits, 0u32);
        let mut pivots: Vec<(u32, u32, u32)> = Vec::new();
        for (v, tag) in rows {
            let (mut v, mut tag) = (v, tag);
            for &(bit, pv, pt) in &pivots {
                if v & bit != 0 {
                    v ^= pv;
                    tag ^= pt;
                }
            }
            if v != 0 {
                let bit = 1 << (31 - v.leading_zeros());
                for piv in pivots.iter_mut() {
                    if piv.1 & bit != 0 {
                        piv.1 ^= v;
                        piv.2 ^= tag;
                    }
                }
                pivots.push((bit, v, tag));
            }
        }
        for &(bit, pv, pt) in &pivots {
            if target.0 & bit != 0 {
                target.0 ^= pv;
                target.1 ^= pt;
            }
        }
        debug_assert_eq!(target.0, 0);
        Ok(Gf::raw(d, target.1))
    }

    /// Uniformly random element of GF(2^m).
    pub fn random<R: Rng + ?Sized>(m: u32, rng: &mut R) -> Gf {
        Gf::raw(m, rng.gen_range(0..(1u32 << m)))
    }

    /// Uniformly random nonzero element of GF(2^m).
    pub fn random_nonzero<R: Rng + ?Sized>(m: u32, rng: &mut R) -> Gf {
        Gf::raw(m, rng.gen_range(1..(1u32 << m)))
    }

    /// Iterator over all elements of GF(2^m), m <= 16.
    pub fn all(m: u32) -> impl Iterator<Item = Gf> {
        assert!(m <= 16, "enumeration limited to m <= 16");
        (0..(1u32 << m)).map(move |b| Gf::raw(m, b))
    }

    /// Key comparing elements by (smallest containing degree, bits there).
    pub fn canonical_key(self) -> (u32, u32) {
        let d = self.min_degree();
        let r = self.restrict(d).expect("element lies in its minimal subfield");
        (d, r.bits)
    }

    /// Polynomial string in the generator `g`, highest power first.
    pub fn to_poly_string(self) -> String {
        if self.bits == 0 {
            return "0".into();
        }
        let mut terms = Vec::new();
        for i in (0..self.degree()).rev() {
            if (self.bits >> i) & 1 == 1 {
                terms.push(match i {
                    0 => "1".to_string(),
                    1 => "g".to_string(),
                    _ => format!("g^{i}"),
                });
            }
        }
        terms.join("+")
    }

    /// Parses a polynomial string such as `"g^2+g+1"` in GF(2^m).
    pub fn parse(s: &str, m: u32) -> Result<Gf> {
        check_degree(m)?;
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty element".into()));
        }
        let mut acc = Gf::zero(m);
        for term in s.split('+') {
            let e: u64 = match term {
                "0" => continue,
                "1" => 0,
                "g" => 1,
                t if t.starts_with("g^") => t[2..]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in {t:?}")))?,
                t => return Err(Error::Parse(format!("bad term {t:?}"))),
            };
            let x = if e < m as u64 { Gf::raw(m, 1 << e) } else { Gf::generator(m).pow(e) };
            acc.bits ^= x.bits;
        }
        Ok(acc)
    }
}

/// Image of the degree-d Conway generator inside GF(2^m).
fn subfield_generator(d: u32, m: u32) -> Gf {
    if d == 1 {
        return Gf::one(m);
    }
    Gf::generator(m).pow(group_order(m) / group_order(d))
}

impl Add for Gf {
    type Output = Gf;
    fn add(self, rhs: Gf) -> Gf {
        self.checked_add(rhs).expect("field degree mismatch")
    }
}

impl AddAssign for Gf {
    fn add_assign(&mut self, rhs: Gf) {
        *self = *self + rhs;
    }
}

impl Mul for Gf {
    type Output = Gf;
    fn mul(self, rhs: Gf) -> Gf {
        self.checked_mul(rhs).expect("field degree mismatch")
    }
}

impl MulAssign for Gf {
    fn mul_assign(&mut self, rhs: Gf) {
        *self = *self * rhs;
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_poly_string())
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.to_poly_string(), self.deg)
    }
}
