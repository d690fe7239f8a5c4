//! Elements of G = SL(n) ⋊ <τ> with τ(X) = J X^{-T} J, their Jordan
//! decomposition, and reduction of τ-coset elements to the form t·u·τ.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{lcm_degree, Gf};
use crate::matrix::Matrix;
use crate::poly::split_char_poly;

/// `J X^{-T} J`.
pub fn tau_twist(x: &Matrix) -> Result<Matrix> {
    let n = x.rows();
    let j = Matrix::antidiagonal(n, x.field());
    Ok(j.mul(&x.inverse()?.transpose()).mul(&j))
}

/// `dτ(Y) = J Y^T J` on the Lie algebra (characteristic 2 drops the sign).
pub fn tau_twist_lie(y: &Matrix) -> Matrix {
    let j = Matrix::antidiagonal(y.rows(), y.field());
    j.mul(&y.transpose()).mul(&j)
}

/// An element `(X, ε)` of SL(n) ⋊ <τ>.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    mat: Matrix,
    eps: u8,
}

impl GroupElement {
    /// Validates `det X = 1` and `ε ∈ {0, 1}`.
    pub fn new(mat: Matrix, eps: u8) -> Result<GroupElement> {
        if !mat.is_square() {
            return Err(Error::InvalidInput("matrix is not square".into()));
        }
        if eps > 1 {
            return Err(Error::InvalidInput(format!("eps = {eps}")));
        }
        if !mat.det().is_one() {
            return Err(Error::NotDeterminantOne);
        }
        Ok(GroupElement { mat, eps })
    }

    pub(crate) fn new_unchecked(mat: Matrix, eps: u8) -> GroupElement {
        debug_assert!(mat.det().is_one());
        GroupElement { mat, eps }
    }

    pub fn identity(n: usize, field: u32) -> GroupElement {
        GroupElement { mat: Matrix::identity(n, field), eps: 0 }
    }

    /// The outer involution τ = (Id, 1).
    pub fn tau(n: usize, field: u32) -> GroupElement {
        GroupElement { mat: Matrix::identity(n, field), eps: 1 }
    }

    pub fn n(&self) -> usize {
        self.mat.rows()
    }

    pub fn mat(&self) -> &Matrix {
        &self.mat
    }

    pub fn eps(&self) -> u8 {
        self.eps
    }

    pub fn field(&self) -> u32 {
        self.mat.field()
    }

    pub fn embed(&self, m: u32) -> Result<GroupElement> {
        Ok(GroupElement { mat: self.mat.embed(m)?, eps: self.eps })
    }

    /// Rewrites the element over the smallest field containing its entries.
    pub fn shrink(&self) -> GroupElement {
        GroupElement { mat: self.mat.shrink(), eps: self.eps }
    }

    /// `(X, ε)(Y, δ) = (X τ^ε(Y), ε + δ)`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.n() != other.n() {
            return Err(Error::RankMismatch(self.n(), other.n()));
        }
        let (a, b) = Matrix::common_field(&self.mat, &other.mat)?;
        let b = if self.eps == 1 { tau_twist(&b)? } else { b };
        Ok(GroupElement { mat: a.mul(&b), eps: (self.eps + other.eps) % 2 })
    }

    /// `(X, ε)^{-1} = (τ^ε(X^{-1}), ε)`.
    pub fn inverse(&self) -> GroupElement {
        let inv = self.mat.inverse().expect("determinant one");
        let mat = if self.eps == 1 { tau_twist(&inv).unwrap() } else { inv };
        GroupElement { mat, eps: self.eps }
    }

    pub fn pow(&self, e: &BigUint) -> GroupElement {
        let mut acc = GroupElement::identity(self.n(), self.field());
        for i in (0..e.bits()).rev() {
            acc = acc.compose(&acc).unwrap();
            if e.bit(i) {
                acc = acc.compose(self).unwrap();
            }
        }
        acc
    }

    pub fn pow_u64(&self, e: u64) -> GroupElement {
        self.pow(&BigUint::from(e))
    }

    /// `g · self · g^{-1}`.
    pub fn conjugate_by(&self, g: &GroupElement) -> Result<GroupElement> {
        g.compose(self)?.compose(&g.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.eps == 0 && self.mat.is_identity()
    }

    /// Order of the element: odd order of the semisimple part times the
    /// 2-power order of the unipotent part.
    pub fn order(&self) -> Result<BigUint> {
        let JordanPair { s, u } = self.jordan_decompose();
        let mut k = 0;
        let mut p = u;
        while !p.is_identity() {
            p = p.compose(&p)?;
            k += 1;
        }
        let split = split_char_poly(&s.mat().char_poly())?;
        let mut odd = 1u64;
        for (r, _) in &split.roots {
            odd = odd.lcm(&r.mult_order()?);
        }
        Ok(BigUint::from(odd) << k)
    }

    /// Multiplicative Jordan decomposition by splitting the order.
    pub fn jordan_decompose(&self) -> JordanPair {
        let n = self.n();
        let m = self.field();
        let e = two_exponent(n);
        let r = odd_bound(n, m);
        let two_e = BigUint::one() << e;
        // s = x^(2^e c) with 2^e c ≡ 1 mod r; u = x^(r d) with r d ≡ 1 mod 2^e.
        let c = mod_inverse(&(&two_e % &r), &r);
        let d = mod_inverse(&(&r % &two_e), &two_e);
        let s = self.pow(&(&two_e * c));
        let u = self.pow(&(&r * d));
        JordanPair { s, u }
    }

    /// Uniformly random element of SL(n, 2^m) with the given ε.
    pub fn random<R: Rng + ?Sized>(n: usize, m: u32, eps: u8, rng: &mut R) -> GroupElement {
        loop {
            let mut a = Matrix::random(n, n, m, rng);
            let d = a.det();
            if d.is_zero() {
                continue;
            }
            let dinv = d.inv().unwrap();
            for j in 0..n {
                a[(0, j)] *= dinv;
            }
            return GroupElement { mat: a, eps };
        }
    }

    /// JSON-friendly encoding.
    pub fn to_json(&self) -> ElementJson {
        ElementJson {
            n: self.n(),
            field_degree: self.field(),
            matrix: self
                .mat
                .to_rows()
                .iter()
                .map(|r| r.iter().map(|x| x.to_poly_string()).collect())
                .collect(),
            tau: self.eps,
        }
    }

    pub fn from_json(j: &ElementJson) -> Result<GroupElement> {
        let rows = j
            .matrix
            .iter()
            .map(|r| r.iter().map(|s| Gf::parse(s, j.field_degree)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mat = Matrix::from_rows(rows)?;
        if mat.rows() != j.n {
            return Err(Error::RankMismatch(mat.rows(), j.n));
        }
        GroupElement::new(mat, j.tau)
    }
}

/// JSON element schema `{"n", "field_degree", "matrix", "tau"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub n: usize,
    pub field_degree: u32,
    pub matrix: Vec<Vec<String>>,
    pub tau: u8,
}

/// Semisimple and unipotent parts of an element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanPair {
    pub s: GroupElement,
    pub u: GroupElement,
}

/// Smallest `e` with `2^e >= n`, plus one for the τ-component.
fn two_exponent(n: usize) -> u64 {
    let mut e = 0;
    while (1usize << e) < n {
        e += 1;
    }
    e + 1
}

fn lcm_upto(n: usize) -> u64 {
    (1..=n as u64).fold(1, |acc, k| acc.lcm(&k))
}

/// `2^(m lcm(1..n)) - 1`, a multiple of the order of every semisimple part.
fn odd_bound(n: usize, m: u32) -> BigUint {
    (BigUint::one() << (m as u64 * lcm_upto(n))) - BigUint::one()
}

/// A multiple of the order of every element of SL(n, 2^m) ⋊ <τ>.
pub fn exponent_bound(n: usize, m: u32) -> BigUint {
    odd_bound(n, m) << two_exponent(n)
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> BigUint {
    use num_bigint::BigInt;
    let (a, m) = (BigInt::from(a.clone()), BigInt::from(m.clone()));
    let g = a.extended_gcd(&m);
    debug_assert!(g.gcd.is_one());
    let x = ((g.x % &m) + &m) % &m;
    x.to_biguint().unwrap()
}

/// Result of reducing `x ∈ G°τ` to `t·u·τ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    /// Diagonal matrix in T^τ, eigenvalue pairs in canonical order.
    pub t: Matrix,
    /// Upper unitriangular, commuting with `t`.
    pub u: Matrix,
    /// `conjugator · x · conjugator^{-1} = (t·u, 1)`.
    pub conjugator: GroupElement,
}

impl NormalForm {
    /// The element `(t·u, 1)`.
    pub fn element(&self) -> GroupElement {
        GroupElement::new_unchecked(self.t.mul(&self.u), 1)
    }
}

/// Field degree in which the eigenvalues of `mat` and its entries all live.
fn eigen_field(mat: &Matrix) -> Result<u32> {
    let split = split_char_poly(&mat.char_poly()).map_err(|e| match e {
        Error::FieldTowerExceeded(d) => Error::FieldTowerExceeded(d),
        other => other,
    })?;
    lcm_degree(mat.field(), split.field_degree)
}

/// Eigenvalues with multiplicity, expressed in GF(2^field).
fn eigenvalues(mat: &Matrix) -> Result<Vec<(Gf, usize)>> {
    let split = split_char_poly(&mat.char_poly())?;
    split.roots.into_iter().map(|(r, e)| Ok((r.embed(mat.field())?, e))).collect()
}

/// Canonical order key of an eigenvalue.
pub fn eigen_key(a: Gf) -> (u32, u32) {
    a.canonical_key()
}

/// Of `a` and `a^{-1}`, the one with the smaller canonical key.
pub fn pair_rep(a: Gf) -> Gf {
    let b = a.inv().unwrap();
    if eigen_key(b) < eigen_key(a) { b } else { a }
}

/// Basis `q_1..q_k` of F^k with `B(q_a, q_b) = 0` whenever `a + b <= k`, for the
/// nondegenerate bilinear form `B(v, w) = v^T M w`.
fn isotropic_flag(m: &Matrix) -> Result<Vec<Vec<Gf>>> {
    let k = m.rows();
    let f = m.field();
    let unit = |i: usize| {
        let mut v = vec![Gf::zero(f); k];
        v[i] = Gf::one(f);
        v
    };
    if k == 0 {
        return Ok(Vec::new());
    }
    if k == 1 {
        return Ok(vec![unit(0)]);
    }
    let form = |v: &[Gf], w: &[Gf]| -> Gf {
        let mw = m.apply(w);
        v.iter().zip(&mw).fold(Gf::zero(f), |acc, (&a, &b)| acc + a * b)
    };
    let cosquare = m.inverse()?.transpose().mul(m);
    let mut q1 = None;
    let mut eig = eigenvalues(&cosquare)?;
    eig.sort_by_key(|&(mu, _)| mu.is_one());
    for (mu, _) in eig {
        let shifted = cosquare.add(&Matrix::identity(k, f).scale(mu));
        let space = shifted.kernel();
        if !mu.is_one() {
            q1 = Some(space[0].clone());
            break;
        }
        // On the 1-eigenspace B is symmetric, so v ↦ B(v, v) is the square of a linear form.
        let vals: Vec<Gf> = space.iter().map(|v| form(v, v)).collect();
        if let Some(i) = vals.iter().position(|x| x.is_zero()) {
            q1 = Some(space[i].clone());
            break;
        }
        if space.len() >= 2 {
            let (si, sj) = (vals[0].sqrt(), vals[1].sqrt());
            let v: Vec<Gf> = (0..k).map(|t| space[1][t] * si + space[0][t] * sj).collect();
            q1 = Some(v);
            break;
        }
    }
    let q1 = q1.ok_or_else(|| Error::ConsistencyFailure("no isotropic eigenvector".into()))?;
    // W = right-orthogonal of q1; it contains q1.
    let row = Matrix::from_rows(vec![m.transpose().apply(&q1)])?;
    let w_basis = row.kernel();
    let mut basis = vec![q1.clone()];
    for v in w_basis {
        let mut trial = basis.clone();
        trial.push(v.clone());
        if Matrix::from_rows(trial)?.rank() == basis.len() + 1 {
            basis.push(v);
        }
        if basis.len() == k - 1 {
            break;
        }
    }
    let ws = &basis[1..];
    let mut induced = Matrix::zeros(k - 2, k - 2, f);
    for i in 0..k - 2 {
        for j in 0..k - 2 {
            induced[(i, j)] = form(&ws[i], &ws[j]);
        }
    }
    let inner = if k > 2 { isotropic_flag(&induced)? } else { Vec::new() };
    let mut out = vec![q1.clone()];
    for r in inner {
        let mut v = vec![Gf::zero(f); k];
        for (coef, w) in r.iter().zip(ws) {
            for t in 0..k {
                v[t] += *coef * w[t];
            }
        }
        out.push(v);
    }
    let last = (0..k)
        .map(unit)
        .find(|e| !form(&q1, e).is_zero())
        .ok_or(Error::SingularMatrix)?;
    out.push(last);
    Ok(out)
}

/// Scales the first column of `p` so that `det p = 1`.
fn normalize_det(p: &mut Matrix) {
    let d = p.det();
    let dinv = d.inv().expect("invertible");
    for i in 0..p.rows() {
        p[(i, 0)] *= dinv;
    }
}

/// Upper unitriangular `v` such that `v s v^{-1}` is diagonal, for upper triangular
/// diagonalizable `s`.
fn diagonalizing_unitriangular(s: &Matrix) -> Result<Matrix> {
    let n = s.rows();
    let f = s.field();
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let lambda = s[(i, i)];
        let idx: Vec<usize> = (0..=i).collect();
        let a = s.submatrix(&idx, &idx).add(&Matrix::identity(i + 1, f).scale(lambda));
        // Eigenvector with e_i = 1 supported on the first i+1 coordinates.
        let mut e = vec![Gf::zero(f); n];
        e[i] = Gf::one(f);
        if i > 0 {
            let lhs = a.submatrix(&(0..=i).collect::<Vec<_>>(), &(0..i).collect::<Vec<_>>());
            let rhs: Vec<Gf> = (0..=i).map(|r| a[(r, i)]).collect();
            let sol = lhs.solve(&rhs).ok_or_else(|| {
                Error::ConsistencyFailure("semisimple part is not diagonalizable".into())
            })?;
            e[..i].copy_from_slice(&sol[..i]);
        }
        cols.push(e);
    }
    Matrix::from_cols(&cols)?.inverse()
}

/// Permutation matrix `P` with `P e_src = e_dst` for `dst = perm[src]`.
fn permutation_matrix(perm: &[usize], f: u32) -> Matrix {
    let n = perm.len();
    let mut p = Matrix::zeros(n, n, f);
    for (src, &dst) in perm.iter().enumerate() {
        p[(dst, src)] = Gf::one(f);
    }
    p
}

/// Canonical position order for a palindromic diagonal of T^τ.
///
/// Returns a flip-commuting permutation `perm` (source index → target index).
/// Pairs `{a, a^{-1}}` are sorted by the key of their representative, which
/// goes to the upper half; 1's go to the middle. Positions holding one value
/// keep their relative order, so unitriangular centralizing parts stay
/// unitriangular.
fn canonical_permutation(diag: &[Gf]) -> Vec<usize> {
    let n = diag.len();
    let mut reps: Vec<Gf> = diag.iter().filter(|a| !a.is_one()).map(|&a| pair_rep(a)).collect();
    reps.sort_by_key(|&a| eigen_key(a));
    reps.dedup();
    let mut perm = vec![0; n];
    let mut next = 0;
    for a in reps {
        for p in (0..n).filter(|&p| diag[p] == a) {
            perm[p] = next;
            perm[n - 1 - p] = n - 1 - next;
            next += 1;
        }
    }
    for (k, p) in (0..n).filter(|&p| diag[p].is_one()).enumerate() {
        perm[p] = next + k;
    }
    perm
}

/// Whether `(t·u, 1)` given by `mat` is already in canonical normal form.
fn is_normal_form(mat: &Matrix) -> Option<(Matrix, Matrix)> {
    if !mat.is_upper_triangular() {
        return None;
    }
    let n = mat.rows();
    let d = mat.diag();
    // In T^τ·U every diagonal satisfies d_i d_{n-1-i} = 1 after removing the u-part
    // palindrome; we require t = diag, u unitriangular, tu = ut.
    let t = Matrix::diagonal(&d);
    let tinv = t.inverse().ok()?;
    let u = tinv.mul(mat);
    if !u.is_unitriangular() || t.mul(&u) != u.mul(&t) {
        return None;
    }
    for i in 0..n {
        if !(d[i] * d[n - 1 - i]).is_one() {
            return None;
        }
    }
    if canonical_permutation(&d).iter().enumerate().any(|(i, &p)| i != p) {
        return None;
    }
    Some((t, u))
}

/// Conjugates `x ∈ G°τ` to `(t·u, 1)` with `t ∈ T^τ` in canonical order and
/// `u` upper unitriangular commuting with `t`.
pub fn normal_form_tu_tau(x: &GroupElement) -> Result<NormalForm> {
    if x.eps() != 1 {
        return Err(Error::InvalidInput("normal_form_tu_tau needs eps = 1".into()));
    }
    let n = x.n();
    if let Some((t, u)) = is_normal_form(x.mat()) {
        return Ok(NormalForm { t, u, conjugator: GroupElement::identity(n, x.field()) });
    }
    // Work over a field holding the eigenvalues of x².
    let sq = x.compose(x)?;
    let f = eigen_field(sq.mat())?;
    let x = x.embed(f)?;
    let jmat = Matrix::antidiagonal(n, f);
    // Step 1: with M = XJ, conjugation by c acts as M ↦ c M c^T, so rows of c
    // forming a reversed isotropic flag of B(v, w) = v^T M w make X upper triangular.
    let m = x.mat().mul(&jmat);
    let flag = isotropic_flag(&m)?;
    let pcols: Vec<Vec<Gf>> = flag.into_iter().rev().collect();
    let mut p = Matrix::from_cols(&pcols)?;
    normalize_det(&mut p);
    let c1 = GroupElement::new_unchecked(p.transpose(), 0);
    let x1 = x.conjugate_by(&c1)?;
    if !x1.mat().is_upper_triangular() {
        return Err(Error::ConsistencyFailure("flag reduction did not triangularize".into()));
    }
    // Step 2: diagonalize the semisimple part with an upper unitriangular matrix.
    let s1 = x1.jordan_decompose().s;
    let v = diagonalizing_unitriangular(s1.mat())?;
    let c2 = GroupElement::new_unchecked(v, 0);
    let x2 = x1.conjugate_by(&c2)?;
    let s2 = s2_of(&x2);
    // Step 3: diagonal z making the unipotent part unitriangular.
    let uu = s2.inverse()?.mul(x2.mat());
    let d = uu.diag();
    let mut z = vec![Gf::one(f); n];
    for i in 0..n / 2 {
        z[i] = d[i].inv()?;
    }
    if n % 2 == 1 {
        z[n / 2] = d[n / 2].sqrt().inv()?;
    }
    let c3 = GroupElement::new_unchecked(Matrix::diagonal(&z), 0);
    let x3 = x2.conjugate_by(&c3)?;
    // Step 4: flip-commuting permutation into canonical order.
    let s3 = s2_of(&x3);
    let perm = canonical_permutation(&s3.diag());
    let c4 = GroupElement::new_unchecked(permutation_matrix(&perm, f), 0);
    let x4 = x3.conjugate_by(&c4)?;
    let t = s2_of(&x4);
    let u = t.inverse()?.mul(x4.mat());
    if !u.is_unitriangular() || !t.is_diagonal() || t.mul(&u) != u.mul(&t) {
        return Err(Error::ConsistencyFailure("normal form invariants violated".into()));
    }
    let conj = c4.compose(&c3)?.compose(&c2)?.compose(&c1)?;
    Ok(NormalForm { t, u, conjugator: conj })
}

/// Diagonal semisimple matrix of an upper triangular τ-coset element.
fn s2_of(x: &GroupElement) -> Matrix {
    x.jordan_decompose().s.mat().clone()
}

/// Conjugates an `eps = 0` element to upper triangular form with diagonal
/// semisimple part; equal eigenvalues are made contiguous in canonical order.
pub fn triangular_form(x: &GroupElement) -> Result<(Matrix, GroupElement)> {
    if x.eps() != 0 {
        return Err(Error::InvalidInput("triangular_form needs eps = 0".into()));
    }
    let n = x.n();
    let f = eigen_field(x.mat())?;
    let x = x.embed(f)?;
    // Schur-type triangularization: c X c^{-1} upper triangular with c = B^{-1}.
    let b = triangularizing_basis(x.mat())?;
    let mut bm = b;
    normalize_det(&mut bm);
    let c1 = GroupElement::new_unchecked(bm.inverse()?, 0);
    let x1 = x.conjugate_by(&c1)?;
    let s1 = x1.jordan_decompose().s;
    let v = diagonalizing_unitriangular(s1.mat())?;
    let c2 = GroupElement::new_unchecked(v, 0);
    let x2 = x1.conjugate_by(&c2)?;
    let d = x2.jordan_decompose().s.mat().diag();
    // Stable sort positions by eigenvalue key; keeps the block unitriangular.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| eigen_key(d[i]));
    let mut perm = vec![0; n];
    for (target, &src) in order.iter().enumerate() {
        perm[src] = target;
    }
    let c3 = GroupElement::new_unchecked(permutation_matrix(&perm, f), 0);
    let x3 = x2.conjugate_by(&c3)?;
    let conj = c3.compose(&c2)?.compose(&c1)?;
    Ok((x3.mat().clone(), conj))
}

/// Columns `b_1..b_n` such that `B^{-1} X B` is upper triangular.
fn triangularizing_basis(x: &Matrix) -> Result<Matrix> {
    let n = x.rows();
    let f = x.field();
    if n == 1 {
        return Ok(Matrix::identity(1, f));
    }
    let (lambda, _) = eigenvalues(x)?[0];
    let v = x.add(&Matrix::identity(n, f).scale(lambda)).kernel().remove(0);
    let mut cols = vec![v];
    for i in 0..n {
        let mut e = vec![Gf::zero(f); n];
        e[i] = Gf::one(f);
        let mut trial = cols.clone();
        trial.push(e.clone());
        if Matrix::from_cols(&trial)?.rank() == cols.len() + 1 {
            cols.push(e);
        }
    }
    let b = Matrix::from_cols(&cols)?;
    let y = b.inverse()?.mul(x).mul(&b);
    let rest: Vec<usize> = (1..n).collect();
    let inner = triangularizing_basis(&y.submatrix(&rest, &rest))?;
    let mut lift = Matrix::identity(n, f);
    for i in 1..n {
        for j in 1..n {
            lift[(i, j)] = inner[(i - 1, j - 1)];
        }
    }
    Ok(b.mul(&lift))
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, eps={})", self.mat, self.eps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf2(rows: &[&[u32]]) -> Matrix {
        Matrix::from_bits(1, rows).unwrap()
    }

    fn u1() -> Matrix {
        gf2(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]])
    }

    #[test]
    fn tau_twist_examples() {
        assert!(tau_twist(&Matrix::identity(3, 2)).unwrap().is_identity());
        let (a, b, c) = (Gf::generator(4), Gf::generator(4).pow(3), Gf::generator(4).pow(7));
        let t = tau_twist(&Matrix::diagonal(&[a, b, c])).unwrap();
        assert_eq!(t.diag(), vec![c.inv().unwrap(), b.inv().unwrap(), a.inv().unwrap()]);
        assert_eq!(tau_twist(&u1()).unwrap(), gf2(&[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]));
        assert_eq!(
            tau_twist(&Matrix::zeros(2, 2, 1)),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn tau_twist_is_an_involutive_automorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..1000 {
            let n = rng.gen_range(2..=4);
            let x = GroupElement::random(n, 4, 0, &mut rng);
            let y = GroupElement::random(n, 4, 0, &mut rng);
            let tx = tau_twist(x.mat()).unwrap();
            assert_eq!(tau_twist(&tx).unwrap(), *x.mat());
            assert_eq!(
                tau_twist(&x.mat().mul(y.mat())).unwrap(),
                tx.mul(&tau_twist(y.mat()).unwrap())
            );
        }
    }

    #[test]
    fn compose_examples() {
        let tau = GroupElement::tau(3, 1);
        assert!(tau.compose(&tau).unwrap().is_identity());
        let x = GroupElement::new(u1(), 1).unwrap();
        let sq = x.compose(&x).unwrap();
        assert_eq!(sq.eps(), 0);
        assert_eq!(*sq.mat(), gf2(&[&[1, 1, 1], &[0, 1, 1], &[0, 0, 1]]));
        let a = GroupElement::random(3, 2, 0, &mut ChaCha8Rng::seed_from_u64(1));
        let b = GroupElement::random(3, 2, 0, &mut ChaCha8Rng::seed_from_u64(2));
        assert_eq!(*a.compose(&b).unwrap().mat(), a.mat().mul(b.mat()));
        assert_eq!(
            GroupElement::identity(2, 1).compose(&GroupElement::identity(3, 1)),
            Err(Error::RankMismatch(2, 3))
        );
    }

    #[test]
    fn group_laws_on_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..200 {
            let n = rng.gen_range(2..=4);
            let e: Vec<u8> = (0..3).map(|_| rng.gen_range(0..2)).collect();
            let a = GroupElement::random(n, 3, e[0], &mut rng);
            let b = GroupElement::random(n, 3, e[1], &mut rng);
            let c = GroupElement::random(n, 3, e[2], &mut rng);
            let lhs = a.compose(&b).unwrap().compose(&c).unwrap();
            let rhs = a.compose(&b.compose(&c).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            assert!(a.compose(&a.inverse()).unwrap().is_identity());
            assert_eq!(GroupElement::identity(n, 3).compose(&a).unwrap(), a);
        }
    }

    #[test]
    fn mixed_fields_compose_in_common_field() {
        let a = GroupElement::random(3, 2, 1, &mut ChaCha8Rng::seed_from_u64(3));
        let b = GroupElement::random(3, 3, 0, &mut ChaCha8Rng::seed_from_u64(4));
        let c = a.compose(&b).unwrap();
        assert_eq!(c.field(), 6);
    }

    #[test]
    fn order_of_u1_tau_is_eight() {
        let x = GroupElement::new(u1(), 1).unwrap();
        assert_eq!(x.order().unwrap(), BigUint::from(8u32));
        let jp = x.jordan_decompose();
        assert!(jp.s.is_identity());
        assert_eq!(jp.u, x);
    }

    #[test]
    fn odd_order_diagonal_is_semisimple() {
        let a = Gf::generator(2);
        let x = GroupElement::new(Matrix::diagonal(&[a, Gf::one(2), a.inv().unwrap()]), 0).unwrap();
        let jp = x.jordan_decompose();
        assert_eq!(jp.s, x);
        assert!(jp.u.is_identity());
    }

    /// The closed form s = diag(α√β, 1, (α√β)^{-1}), u = (diag(√β^{-1}, β, √β^{-1}), 1).
    #[test]
    fn jordan_decomposition_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..30 {
            let m = rng.gen_range(1..=8);
            let alpha = Gf::random_nonzero(m, &mut rng);
            let beta = Gf::random_nonzero(m, &mut rng);
            let ab = (alpha * beta).inv().unwrap();
            let x = GroupElement::new(Matrix::diagonal(&[alpha, beta, ab]), 1).unwrap();
            let jp = x.jordan_decompose();
            let rb = beta.sqrt();
            let s = alpha * rb;
            assert_eq!(jp.s.mat().diag(), vec![s, Gf::one(m), s.inv().unwrap()]);
            assert_eq!(jp.s.eps(), 0);
            let ri = rb.inv().unwrap();
            assert_eq!(*jp.u.mat(), Matrix::diagonal(&[ri, beta, ri]));
            assert_eq!(jp.u.eps(), 1);
        }
    }

    #[test]
    fn jordan_pair_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..100 {
            let n = rng.gen_range(2..=4);
            let eps = rng.gen_range(0..2);
            let x = GroupElement::random(n, 2, eps, &mut rng);
            let JordanPair { s, u } = x.jordan_decompose();
            assert_eq!(s.compose(&u).unwrap(), x);
            assert_eq!(u.compose(&s).unwrap(), x);
            assert_eq!(s.eps(), 0);
            assert_eq!(u.eps(), eps);
            assert!(s.order().unwrap().is_odd());
            assert_eq!(u.order().unwrap().count_ones(), 1);
            let again = s.jordan_decompose();
            assert_eq!(again.s, s);
            assert!(again.u.is_identity());
            let again = u.jordan_decompose();
            assert!(again.s.is_identity());
            assert_eq!(again.u, u);
            let g = GroupElement::random(n, 2, rng.gen_range(0..2), &mut rng);
            let cj = x.conjugate_by(&g).unwrap().jordan_decompose();
            assert_eq!(cj.s, s.conjugate_by(&g).unwrap());
            assert_eq!(cj.u, u.conjugate_by(&g).unwrap());
        }
    }

    #[test]
    fn unitriangular_tau_elements_have_two_power_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..50 {
            let n = rng.gen_range(2..=4);
            let mut v = Matrix::identity(n, 3);
            for i in 0..n {
                for j in i + 1..n {
                    v[(i, j)] = Gf::random(3, &mut rng);
                }
            }
            let x = GroupElement::new(v, 1).unwrap();
            assert_eq!(x.order().unwrap().count_ones(), 1);
        }
    }

    #[test]
    fn normal_form_of_tau_is_trivial() {
        let nf = normal_form_tu_tau(&GroupElement::tau(3, 1)).unwrap();
        assert!(nf.t.is_identity());
        assert!(nf.u.is_identity());
        assert!(nf.conjugator.is_identity());
    }

    #[test]
    fn normal_form_of_diagonal_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        for _ in 0..30 {
            let m = 4;
            let alpha = Gf::random_nonzero(m, &mut rng);
            let beta = Gf::random_nonzero(m, &mut rng);
            let ab = (alpha * beta).inv().unwrap();
            let x = GroupElement::new(Matrix::diagonal(&[alpha, beta, ab]), 1).unwrap();
            let nf = normal_form_tu_tau(&x).unwrap();
            let s = alpha * beta.sqrt();
            let mut want = [s, s.inv().unwrap()];
            want.sort_by_key(|&a| eigen_key(a));
            let got = nf.t.diag();
            let f = got[0].degree();
            let want: Vec<Gf> = want.iter().map(|w| w.embed(f).unwrap()).collect();
            assert_eq!(got[1], Gf::one(f));
            assert_eq!(got[0], want[0]);
            assert_eq!(got[2], want[1]);
            check_round_trip(&x, &nf);
        }
    }

    fn check_round_trip(x: &GroupElement, nf: &NormalForm) {
        let f = nf.t.field();
        let x = x.embed(lcm_degree(x.field(), f).unwrap()).unwrap();
        let conj = x.conjugate_by(&nf.conjugator).unwrap();
        assert_eq!(conj.mat(), &nf.t.mul(&nf.u).embed(conj.field()).unwrap());
        assert_eq!(conj.eps(), 1);
        assert!(nf.t.is_diagonal());
        assert!(nf.u.is_unitriangular());
        assert_eq!(nf.t.mul(&nf.u), nf.u.mul(&nf.t));
        let d = nf.t.diag();
        let n = d.len();
        for i in 0..n {
            assert!((d[i] * d[n - 1 - i]).is_one());
        }
        // t is the semisimple part of (t u, 1).
        assert_eq!(nf.element().jordan_decompose().s.mat(), &nf.t);
    }

    #[test]
    fn normal_form_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..100 {
            let x = GroupElement::random(3, 4, 1, &mut rng);
            let nf = normal_form_tu_tau(&x).unwrap();
            check_round_trip(&x, &nf);
        }
        for n in [2, 4] {
            for _ in 0..40 {
                let x = GroupElement::random(n, 2, 1, &mut rng);
                let nf = normal_form_tu_tau(&x).unwrap();
                check_round_trip(&x, &nf);
            }
        }
    }

    #[test]
    fn normal_form_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(38);
        for _ in 0..30 {
            let x = GroupElement::random(4, 2, 1, &mut rng);
            let nf = normal_form_tu_tau(&x).unwrap();
            let again = normal_form_tu_tau(&nf.element()).unwrap();
            assert!(again.conjugator.is_identity());
            assert_eq!(again.t, nf.t);
            assert_eq!(again.u, nf.u);
        }
    }

    #[test]
    fn triangular_form_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(39);
        for _ in 0..60 {
            let n = rng.gen_range(2..=4);
            let x = GroupElement::random(n, 2, 0, &mut rng);
            let (tri, c) = triangular_form(&x).unwrap();
            assert!(tri.is_upper_triangular());
            let x = x.embed(c.field()).unwrap();
            assert_eq!(x.conjugate_by(&c).unwrap().mat(), &tri);
        }
    }

    #[test]
    fn json_round_trip() {
        let x = GroupElement::random(3, 4, 1, &mut ChaCha8Rng::seed_from_u64(5));
        let j = x.to_json();
        assert_eq!(GroupElement::from_json(&j).unwrap(), x);
    }

    use rand::Rng;
}
