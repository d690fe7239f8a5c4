//! Dense matrices over GF(2^m).

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigUint;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{lcm_degree, Gf};
use crate::poly::Poly;

/// A dense `rows x cols` matrix whose entries all lie in GF(2^field).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: u32,
    data: Vec<Gf>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, field: u32) -> Matrix {
        Matrix { rows, cols, field, data: vec![Gf::zero(field); rows * cols] }
    }

    pub fn identity(n: usize, field: u32) -> Matrix {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m[(i, i)] = Gf::one(field);
        }
        m
    }

    /// The antidiagonal identity `J`.
    pub fn antidiagonal(n: usize, field: u32) -> Matrix {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m[(i, n - 1 - i)] = Gf::one(field);
        }
        m
    }

    pub fn diagonal(entries: &[Gf]) -> Matrix {
        let field = entries[0].degree();
        let mut m = Matrix::zeros(entries.len(), entries.len(), field);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    /// Builds a matrix from rows, checking shape and field degree.
    pub fn from_rows(rows: Vec<Vec<Gf>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if r == 0 || c == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        let field = rows[0][0].degree();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::InvalidInput("ragged rows".into()));
            }
            for x in row {
                if x.degree() != field {
                    return Err(Error::DegreeMismatch(field, x.degree()));
                }
                data.push(x);
            }
        }
        Ok(Matrix { rows: r, cols: c, field, data })
    }

    /// Builds a matrix over GF(2^field) from residue bits.
    pub fn from_bits(field: u32, rows: &[&[u32]]) -> Result<Matrix> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&b| Gf::new(field, b)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(rows)
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, field: u32, rng: &mut R) -> Matrix {
        let data = (0..rows * cols).map(|_| Gf::random(field, rng)).collect();
        Matrix { rows, cols, field, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> u32 {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Gf> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Gf> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Gf>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Gf>]) -> Result<Matrix> {
        Ok(Matrix::from_rows(cols.to_vec())?.transpose())
    }

    pub fn entries(&self) -> &[Gf] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.checked_mul(other).expect("matrix shape or field mismatch")
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::RankMismatch(self.cols, other.rows));
        }
        if self.field != other.field {
            return Err(Error::DegreeMismatch(self.field, other.field));
        }
        let mut out = Matrix::zeros(self.rows, other.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, field: self.field, data }
    }

    pub fn scale(&self, c: Gf) -> Matrix {
        let data = self.data.iter().map(|&a| a * c).collect();
        Matrix { rows: self.rows, cols: self.cols, field: self.field, data }
    }

    /// `self * v` for a column vector.
    pub fn apply(&self, v: &[Gf]) -> Vec<Gf> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Gf::zero(self.field), |acc, j| acc + self[(i, j)] * v[j])
            })
            .collect()
    }

    /// Image of every entry in GF(2^m).
    pub fn embed(&self, m: u32) -> Result<Matrix> {
        if m == self.field {
            return Ok(self.clone());
        }
        let data = self.data.iter().map(|x| x.embed(m)).collect::<Result<Vec<_>>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, field: m, data })
    }

    /// Smallest tower degree containing every entry.
    pub fn min_field(&self) -> u32 {
        self.data.iter().fold(1, |acc, x| num_integer::lcm(acc, x.min_degree()))
    }

    /// Rewrites the matrix over the smallest field containing its entries.
    pub fn shrink(&self) -> Matrix {
        let d = self.min_field();
        let data = self.data.iter().map(|x| x.restrict(d).unwrap()).collect();
        Matrix { rows: self.rows, cols: self.cols, field: d, data }
    }

    /// Embeds two matrices into a common field.
    pub fn common_field(a: &Matrix, b: &Matrix) -> Result<(Matrix, Matrix)> {
        let m = lcm_degree(a.field, b.field)?;
        Ok((a.embed(m)?, b.embed(m)?))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self[(i, j)];
                    if i == j { x.is_one() } else { x.is_zero() }
                })
            })
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self[(i, j)].is_zero()))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Upper triangular with ones on the diagonal.
    pub fn is_unitriangular(&self) -> bool {
        self.is_upper_triangular() && (0..self.rows).all(|i| self[(i, i)].is_one())
    }

    pub fn diag(&self) -> Vec<Gf> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else { continue };
            a.swap_rows(p, r);
            let inv = a[(r, c)].inv().unwrap();
            for j in 0..a.cols {
                a[(r, j)] *= inv;
            }
            for i in 0..a.rows {
                if i != r && !a[(i, c)].is_zero() {
                    let f = a[(i, c)];
                    for j in 0..a.cols {
                        let v = a[(r, j)];
                        a[(i, j)] += f * v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{v : self * v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Gf>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Gf::zero(self.field); self.cols];
                v[f] = Gf::one(self.field);
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = r[(row, f)];
                }
                v
            })
            .collect()
    }

    /// Solves `self * v = b`, returning one solution if any.
    pub fn solve(&self, b: &[Gf]) -> Option<Vec<Gf>> {
        let mut aug = Matrix::zeros(self.rows, self.cols + 1, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = b[i];
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut v = vec![Gf::zero(self.field); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = r[(row, self.cols)];
        }
        Some(v)
    }

    pub fn det(&self) -> Gf {
        assert!(self.is_square());
        let mut a = self.clone();
        let n = a.rows;
        let mut det = Gf::one(self.field);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
                return Gf::zero(self.field);
            };
            a.swap_rows(p, c);
            let pivot = a[(c, c)];
            det *= pivot;
            let inv = pivot.inv().unwrap();
            for i in c + 1..n {
                let f = a[(i, c)] * inv;
                if !f.is_zero() {
                    for j in c..n {
                        let v = a[(c, j)];
                        a[(i, j)] += f * v;
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::SingularMatrix);
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n, self.field);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = Gf::one(self.field);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Matrix::zeros(n, n, self.field);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)];
            }
        }
        Ok(inv)
    }

    pub fn pow(&self, e: &BigUint) -> Matrix {
        let mut acc = Matrix::identity(self.rows, self.field);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc);
            if e.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }

    /// Characteristic polynomial `det(x I - self)` by the division-free Berkowitz recursion.
    pub fn char_poly(&self) -> Poly {
        assert!(self.is_square());
        let n = self.rows;
        let f = self.field;
        // Coefficients stored highest degree first.
        let mut vect = vec![Gf::one(f), self[(0, 0)]];
        for r in 1..n {
            // Toeplitz column [1, a_rr, R C, R S C, ..., R S^(r-1) C]; signs vanish in char 2.
            let mut col = vec![Gf::one(f), self[(r, r)]];
            let mut v: Vec<Gf> = (0..r).map(|i| self[(i, r)]).collect();
            for _ in 0..r {
                let rc = (0..r).fold(Gf::zero(f), |acc, j| acc + self[(r, j)] * v[j]);
                col.push(rc);
                v = (0..r)
                    .map(|i| (0..r).fold(Gf::zero(f), |acc, j| acc + self[(i, j)] * v[j]))
                    .collect();
            }
            let mut next = vec![Gf::zero(f); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, &x) in vect.iter().enumerate() {
                    if i >= j {
                        *slot += col[i - j] * x;
                    }
                }
            }
            vect = next;
        }
        vect.reverse();
        Poly::new(f, vect).expect("consistent field")
    }

    /// Jordan type of a unipotent matrix as a partition (largest block first).
    pub fn unipotent_jordan_type(&self) -> Vec<usize> {
        let n = self.rows;
        let nil = self.add(&Matrix::identity(n, self.field));
        let mut ranks = vec![n];
        let mut p = Matrix::identity(n, self.field);
        while *ranks.last().unwrap() > 0 {
            p = p.mul(&nil);
            let r = p.rank();
            if r == *ranks.last().unwrap() {
                break;
            }
            ranks.push(r);
        }
        // Number of blocks of size >= k is rank(N^(k-1)) - rank(N^k).
        let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
        let mut parts = Vec::new();
        for k in (1..=at_least.len()).rev() {
            let bigger = at_least.get(k).copied().unwrap_or(0);
            for _ in 0..(at_least[k - 1] - bigger) {
                parts.push(k);
            }
        }
        parts
    }

    /// Sub-matrix on the given row and column index sets.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), cols.len(), self.field);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Gf;
    fn index(&self, (i, j): (usize, usize)) -> &Gf {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Gf {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix over GF(2^{}):", self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
