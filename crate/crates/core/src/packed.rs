//! Matrices over GF(2^m) packed into a `u64`, and the transvection steps of
//! the conjugation action on either coset.

use crate::error::{Error, Result};
use crate::field::Gf;
use crate::group::GroupElement;
use crate::matrix::Matrix;

/// Multiplication table of GF(2^m) on bit patterns.
pub(crate) struct Table {
    m: u32,
    mul: Vec<u8>,
}

impl Table {
    pub(crate) fn new(m: u32) -> Table {
        let q = 1usize << m;
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                let x = Gf::new(m, a as u32).unwrap() * Gf::new(m, b as u32).unwrap();
                mul[a * q + b] = x.bits() as u8;
            }
        }
        Table { m, mul }
    }

    #[inline]
    pub(crate) fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[((a as usize) << self.m) | b as usize]
    }
}

/// Conjugation `X ↦ g X τ^ε(g)^{-1}` by transvections `I + λE_ij`, λ over a GF(2)-basis.
pub(crate) struct Packer {
    pub(crate) n: usize,
    pub(crate) m: u32,
    table: Table,
    gens: Vec<(usize, usize, u8)>,
}

impl Packer {
    pub(crate) fn new(n: usize, m: u32) -> Result<Packer> {
        if n * n * m as usize > 63 || m > 8 {
            return Err(Error::MemoryBudgetExceeded(format!("n = {n}, m = {m}")));
        }
        let basis: Vec<u8> = (0..m).map(|k| Gf::gen_pow(m, k as u64).bits() as u8).collect();
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    for &l in &basis {
                        gens.push((i, j, l));
                    }
                }
            }
        }
        Ok(Packer { n, m, table: Table::new(m), gens })
    }

    pub(crate) fn bits(&self) -> u32 {
        (self.n * self.n) as u32 * self.m
    }

    pub(crate) fn gen_count(&self) -> usize {
        self.gens.len()
    }

    pub(crate) fn encode(&self, x: &[u8]) -> u64 {
        x.iter().fold(0u64, |acc, &v| (acc << self.m) | v as u64)
    }

    pub(crate) fn decode(&self, mut key: u64, out: &mut [u8]) {
        for i in (0..self.n * self.n).rev() {
            out[i] = (key & ((1 << self.m) - 1)) as u8;
            key >>= self.m;
        }
    }

    pub(crate) fn pack(&self, x: &Matrix) -> Result<u64> {
        let x = x.embed(self.m)?;
        Ok(self.encode(&x.entries().iter().map(|v| v.bits() as u8).collect::<Vec<_>>()))
    }

    pub(crate) fn unpack(&self, key: u64) -> Matrix {
        let mut e = vec![0u8; self.n * self.n];
        self.decode(key, &mut e);
        let rows: Vec<Vec<Gf>> = e
            .chunks(self.n)
            .map(|r| r.iter().map(|&v| Gf::new(self.m, v as u32).unwrap()).collect())
            .collect();
        Matrix::from_rows(rows).unwrap()
    }

    pub(crate) fn element(&self, key: u64, eps: u8) -> GroupElement {
        GroupElement::new(self.unpack(key), eps).unwrap()
    }

    /// Applies generator `g` to `cur`.
    pub(crate) fn step(&self, cur: &[u8], g: usize, eps: u8, out: &mut [u8]) {
        let n = self.n;
        let (i, j, l) = self.gens[g];
        out.copy_from_slice(cur);
        // Left: row_i += λ row_j.
        for c in 0..n {
            out[i * n + c] ^= self.table.mul(l, out[j * n + c]);
        }
        // Right by τ^ε(g)^{-1}: for ε = 0, (I+λE_ij)^{-1} = I+λE_ij, so col_j += λ col_i;
        // for ε = 1, τ(g)^{-1} = I + λ E_{n-1-j, n-1-i}, so col_{n-1-i} += λ col_{n-1-j}.
        let (src, dst) = if eps == 1 { (n - 1 - j, n - 1 - i) } else { (i, j) };
        for r in 0..n {
            out[r * n + dst] ^= self.table.mul(l, out[r * n + src]);
        }
    }
}
