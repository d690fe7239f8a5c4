//! Univariate polynomials over GF(2^m) and root finding.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{check_degree, Gf, MAX_DEGREE};

/// Polynomial with coefficients in one field GF(2^m), lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: u32,
    coeffs: Vec<Gf>,
}

impl Poly {
    /// Builds a polynomial; trailing zero coefficients are dropped.
    pub fn new(field: u32, coeffs: Vec<Gf>) -> Result<Poly> {
        check_degree(field)?;
        if let Some(c) = coeffs.iter().find(|c| c.degree() != field) {
            return Err(Error::DegreeMismatch(field, c.degree()));
        }
        let mut p = Poly { field, coeffs };
        p.trim();
        Ok(p)
    }

    pub fn zero(field: u32) -> Poly {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: u32) -> Poly {
        Poly { field, coeffs: vec![Gf::one(field)] }
    }

    /// The monomial `x`.
    pub fn x(field: u32) -> Poly {
        Poly { field, coeffs: vec![Gf::zero(field), Gf::one(field)] }
    }

    /// `x + c`.
    pub fn linear(c: Gf) -> Poly {
        Poly { field: c.degree(), coeffs: vec![c, Gf::one(c.degree())] }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> u32 {
        self.field
    }

    pub fn coeffs(&self) -> &[Gf] {
        &self.coeffs
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn leading(&self) -> Option<Gf> {
        self.coeffs.last().copied()
    }

    pub fn coeff(&self, i: usize) -> Gf {
        self.coeffs.get(i).copied().unwrap_or(Gf::zero(self.field))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.field, other.field, "field degree mismatch");
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        let mut p = Poly { field: self.field, coeffs };
        p.trim();
        p
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.field, other.field, "field degree mismatch");
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let mut coeffs = vec![Gf::zero(self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut p = Poly { field: self.field, coeffs };
        p.trim();
        p
    }

    pub fn scale(&self, c: Gf) -> Poly {
        let mut p = Poly { field: self.field, coeffs: self.coeffs.iter().map(|&a| a * c).collect() };
        p.trim();
        p
    }

    /// Quotient and remainder; fails on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::ZeroElement)?;
        let lead_inv = d.leading().unwrap().inv()?;
        let mut r = self.coeffs.clone();
        let mut q = vec![Gf::zero(self.field); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let top = r.len() - 1;
            let c = r[top] * lead_inv;
            if !c.is_zero() {
                let shift = top - dd;
                q[shift] = c;
                for (i, &b) in d.coeffs.iter().enumerate() {
                    r[shift + i] += c * b;
                }
            }
            r.pop();
        }
        let mut q = Poly { field: self.field, coeffs: q };
        let mut r = Poly { field: self.field, coeffs: r };
        q.trim();
        r.trim();
        Ok((q, r))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.div_rem(d)?.1)
    }

    /// Monic associate; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(c) => self.scale(c.inv().expect("leading coefficient is nonzero")),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { Gf::zero(self.field) })
            .collect();
        let mut p = Poly { field: self.field, coeffs };
        p.trim();
        p
    }

    pub fn eval(&self, x: Gf) -> Gf {
        self.coeffs.iter().rev().fold(Gf::zero(self.field), |acc, &c| acc * x + c)
    }

    /// Image of every coefficient in GF(2^m).
    pub fn embed(&self, m: u32) -> Result<Poly> {
        let coeffs = self.coeffs.iter().map(|c| c.embed(m)).collect::<Result<Vec<_>>>()?;
        Poly::new(m, coeffs)
    }

    /// For `self = h(x)^2`, returns `h`; requires only even exponents.
    fn square_root(&self) -> Poly {
        let coeffs = self.coeffs.iter().step_by(2).map(|c| c.sqrt()).collect();
        debug_assert!(self.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero()));
        let mut p = Poly { field: self.field, coeffs };
        p.trim();
        p
    }

    /// `self^2 mod modulus`.
    fn square_mod(&self, modulus: &Poly) -> Poly {
        self.mul(self).rem(modulus).expect("nonzero modulus")
    }

    /// Squarefree decomposition: pairs `(h, e)` with `self = prod h^e` (up to a unit),
    /// each `h` squarefree and monic.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        if df.is_zero() {
            for (p, e) in f.square_root().squarefree_decomposition() {
                out.push((p, 2 * e));
            }
            return out;
        }
        let mut c = f.gcd(&df);
        let mut w = f.div_rem(&c).unwrap().0;
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let z = w.div_rem(&y).unwrap().0;
            if !z.is_one() {
                out.push((z.monic(), i));
            }
            i += 1;
            w = y;
            c = c.div_rem(&w).unwrap().0;
        }
        if !c.is_one() {
            for (p, e) in c.square_root().squarefree_decomposition() {
                out.push((p, 2 * e));
            }
        }
        out
    }

    /// Smallest `k` such that a squarefree `self` splits over GF(2^(field*k)).
    fn splitting_degree(&self, limit: u32) -> Result<u32> {
        let x = Poly::x(self.field);
        let xm = x.rem(self)?;
        let mut y = xm.clone();
        for k in 1..=limit {
            for _ in 0..self.field {
                y = y.square_mod(self);
            }
            if y == xm {
                return Ok(k);
            }
        }
        Err(Error::FieldTowerExceeded(self.field * (limit + 1)))
    }

    /// Roots of a squarefree polynomial that splits into linear factors.
    fn split_linear(&self, out: &mut Vec<Gf>) {
        let deg = self.degree().expect("nonzero polynomial");
        if deg == 0 {
            return;
        }
        if deg == 1 {
            let f = self.monic();
            out.push(f.coeff(0));
            return;
        }
        let m = self.field;
        for j in 0..m as u64 {
            let delta = Gf::gen_pow(m, j);
            let base = Poly::new(m, vec![Gf::zero(m), delta]).unwrap().rem(self).unwrap();
            let mut term = base.clone();
            let mut trace = base;
            for _ in 1..m {
                term = term.square_mod(self);
                trace = trace.add(&term);
            }
            let g = self.gcd(&trace);
            let gd = g.degree().unwrap_or(0);
            if gd > 0 && gd < deg {
                let h = self.div_rem(&g).unwrap().0;
                g.split_linear(out);
                h.split_linear(out);
                return;
            }
        }
        unreachable!("trace splitting separates distinct roots");
    }
}

/// Roots of a monic polynomial with multiplicities, and the field degree they live in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub roots: Vec<(Gf, usize)>,
    pub field_degree: u32,
}

/// Splits a monic polynomial of degree at most 12 over the tower.
///
/// Roots are expressed in the smallest tower field containing all of them and
/// sorted by their bit encoding there.
pub fn split_char_poly(p: &Poly) -> Result<Splitting> {
    let deg = p.degree().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if !p.is_monic() {
        return Err(Error::InvalidInput("polynomial is not monic".into()));
    }
    if deg > 12 {
        return Err(Error::InvalidInput(format!("degree {deg} exceeds 12")));
    }
    let d = p.field();
    let parts = p.squarefree_decomposition();
    let mut m = d;
    for (h, _) in &parts {
        let k = h.splitting_degree(MAX_DEGREE / d)?;
        m = crate::field::lcm_degree(m, d * k)?;
    }
    let mut counts: BTreeMap<Gf, usize> = BTreeMap::new();
    for (h, e) in &parts {
        let mut rs = Vec::new();
        h.embed(m)?.split_linear(&mut rs);
        for r in rs {
            *counts.entry(r).or_default() += e;
        }
    }
    let target = counts.keys().fold(1, |acc, r| num_integer::lcm(acc, r.min_degree()));
    let mut roots: Vec<(Gf, usize)> =
        counts.into_iter().map(|(r, e)| (r.restrict(target).unwrap(), e)).collect();
    roots.sort();
    Ok(Splitting { roots, field_degree: target })
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})x^{i}"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
