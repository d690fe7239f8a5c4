//! Jordan-class labels for SL(n) ⋊ <τ>, the classification of the τ-coset
//! into families for n <= 4, and class descriptions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Gf;
use crate::group::{pair_rep, tau_twist, GroupElement};
use crate::lattice::{saturate, IntMatrix, Subtorus};
use crate::matrix::Matrix;
use crate::torus::{eigen_blocks, levi_of_lattice, reduce, t_of_reduced, LeviDescriptor};

/// How an eigenvalue block of `a_s` sits relative to the flip.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PairingType {
    /// An eigenvalue `a != 1` of a τ-coset element, matched with `a^{-1}`.
    Paired,
    /// The eigenvalue 1 of a τ-coset element (the middle block).
    CentralOne,
    /// An eigenvalue of an `eps = 0` element.
    Plain,
}

/// Geometric class of a unipotent element `(X, 1)` of SL(m) ⋊ <τ>.
///
/// Classified by the Jordan type of `X τ(X)` and, when that is trivial,
/// by whether `v ↦ v^T X J v` vanishes identically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MiddleClass {
    pub m: usize,
    pub square_type: Vec<usize>,
    pub alternating: bool,
}

impl MiddleClass {
    fn new(m: usize, square_type: Vec<usize>, alternating: bool) -> MiddleClass {
        MiddleClass { m, square_type, alternating }
    }

    /// All classes of a given middle size, in increasing closure order.
    pub fn all(m: usize) -> Result<Vec<MiddleClass>> {
        let ones = vec![1; m];
        Ok(match m {
            1 => vec![MiddleClass::new(1, ones, false)],
            2 => vec![MiddleClass::new(2, ones.clone(), true), MiddleClass::new(2, ones, false)],
            3 => vec![MiddleClass::new(3, ones, false), MiddleClass::new(3, vec![3], false)],
            4 => vec![
                MiddleClass::new(4, ones.clone(), true),
                MiddleClass::new(4, ones, false),
                MiddleClass::new(4, vec![2, 2], false),
                MiddleClass::new(4, vec![3, 1], false),
            ],
            _ => return Err(Error::UnsupportedRank(m)),
        })
    }

    /// Position in the (linear) closure order of its size.
    pub fn rank(&self) -> usize {
        MiddleClass::all(self.m).unwrap().iter().position(|c| c == self).unwrap()
    }

    /// Whether this is the class of τ itself.
    pub fn is_tau(&self) -> bool {
        self.rank() == 0
    }

    /// Closure order inside the τ-coset of SL(m) (linear for m <= 4).
    pub fn le(&self, other: &MiddleClass) -> bool {
        self.m == other.m && self.rank() <= other.rank()
    }

    /// Dimension of the centralizer in SL(m).
    pub fn centralizer_dim(&self) -> usize {
        match (self.m, self.rank()) {
            (1, _) => 0,
            (2 | 3, 0) => 3,
            (2 | 3, _) => 1,
            (4, r) => [10, 6, 4, 2][r],
            _ => unreachable!(),
        }
    }

    pub fn name(&self) -> String {
        match (self.m, self.rank()) {
            (_, 0) => "tau".into(),
            (2 | 3, 1) => "u1 tau".into(),
            _ => {
                let t: String = self.square_type.iter().map(|p| p.to_string()).collect();
                let t = if self.square_type.iter().all(|&p| p == 1) { "1111".to_string() } else { t };
                format!("u({t}) tau")
            }
        }
    }

    /// Upper unitriangular `X` with `(X, 1)` in this class.
    pub fn representative(&self, field: u32) -> Matrix {
        let mut x = Matrix::identity(self.m, field);
        let one = Gf::one(field);
        let entries: &[(usize, usize)] = match (self.m, self.rank()) {
            (_, 0) => &[],
            (2 | 3, 1) => &[(0, 1)],
            (4, 1) => &[(1, 2)],
            (4, 2) => &[(2, 3)],
            (4, 3) => &[(1, 2), (2, 3)],
            _ => unreachable!(),
        };
        for &(i, j) in entries {
            x[(i, j)] = one;
        }
        x
    }

    /// Classifies a unipotent `(X, 1)` of SL(m) ⋊ <τ>.
    pub fn classify(x: &Matrix) -> Result<MiddleClass> {
        let m = x.rows();
        if m > 4 {
            return Err(Error::UnsupportedRank(m));
        }
        let sq = x.mul(&tau_twist(x)?);
        let square_type = sq.unipotent_jordan_type();
        let form = x.mul(&Matrix::antidiagonal(m, x.field()));
        let alternating = square_type.iter().all(|&p| p == 1)
            && m.is_multiple_of(2)
            && form == form.transpose()
            && form.diag().iter().all(|d| d.is_zero());
        let c = MiddleClass::new(m, square_type, alternating);
        if MiddleClass::all(m)?.contains(&c) {
            Ok(c)
        } else {
            Err(Error::ConsistencyFailure(format!("unexpected unipotent class {c:?}")))
        }
    }
}

/// Unipotent data of a label: one partition per eigenvalue block, and the
/// middle class for the eigenvalue 1 of a τ-coset element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnipotentId {
    pub partitions: Vec<Vec<usize>>,
    pub middle: Option<MiddleClass>,
}

/// Canonical Jordan-class label.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JordanClassLabel {
    pub n: usize,
    pub eps: u8,
    pub levi: LeviDescriptor,
    pub t_lattice: Subtorus,
    /// Block sizes and pairing types, aligned with `unip.partitions`
    /// (the central block, if any, comes last).
    pub eigen_pattern: Vec<(usize, PairingType)>,
    pub unip: UnipotentId,
}

fn partition_string(p: &[usize]) -> String {
    p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("")
}

impl JordanClassLabel {
    /// Label of the τ-coset family with the given pair-block partitions and middle class.
    pub fn twisted(n: usize, mut pairs: Vec<Vec<usize>>, middle: Option<MiddleClass>) -> JordanClassLabel {
        pairs.sort_by(|a, b| (b.iter().sum::<usize>(), b).cmp(&(a.iter().sum::<usize>(), a)));
        let mut rows: IntMatrix = Vec::new();
        let mut pos = 0;
        for p in &pairs {
            let h: usize = p.iter().sum();
            let mut v = vec![0; n];
            for i in pos..pos + h {
                v[i] = 1;
                v[n - 1 - i] = -1;
            }
            rows.push(v);
            pos += h;
        }
        let t_lattice = saturate(&rows, n);
        let levi = levi_of_lattice(&t_lattice, true);
        let mut eigen_pattern: Vec<(usize, PairingType)> =
            pairs.iter().map(|p| (p.iter().sum(), PairingType::Paired)).collect();
        if let Some(mc) = &middle {
            eigen_pattern.push((mc.m, PairingType::CentralOne));
        }
        JordanClassLabel { n, eps: 1, levi, t_lattice, eigen_pattern, unip: UnipotentId { partitions: pairs, middle } }
    }

    /// Label of an `eps = 0` class with the given Jordan types per eigenvalue block.
    pub fn untwisted(n: usize, mut blocks: Vec<Vec<usize>>) -> JordanClassLabel {
        blocks.sort_by(|a, b| (b.iter().sum::<usize>(), b).cmp(&(a.iter().sum::<usize>(), a)));
        let mut rows: IntMatrix = Vec::new();
        let mut pos = 0;
        for p in &blocks {
            let h: usize = p.iter().sum();
            rows.push((0..n).map(|i| i64::from(i >= pos && i < pos + h)).collect());
            pos += h;
        }
        let t_lattice = saturate(&rows, n);
        let levi = levi_of_lattice(&t_lattice, false);
        let eigen_pattern = blocks.iter().map(|p| (p.iter().sum(), PairingType::Plain)).collect();
        JordanClassLabel {
            n,
            eps: 0,
            levi,
            t_lattice,
            eigen_pattern,
            unip: UnipotentId { partitions: blocks, middle: None },
        }
    }

    pub fn pair_count(&self) -> usize {
        self.eigen_pattern.iter().filter(|(_, p)| *p == PairingType::Paired).count()
    }

    pub fn middle_size(&self) -> usize {
        self.unip.middle.as_ref().map_or(0, |m| m.m)
    }

    pub fn is_isolated(&self) -> bool {
        self.t_lattice.rank() == 0
    }

    /// Human-readable family name, e.g. `J(t tau)`, `J(u1 tau)`.
    pub fn name(&self) -> String {
        let mut parts = Vec::new();
        if self.eps == 1 {
            let pairs = &self.unip.partitions;
            if !pairs.is_empty() {
                if pairs.iter().all(|p| p == &vec![1]) {
                    parts.push("t".to_string());
                } else {
                    let inner: Vec<String> = pairs.iter().map(|p| partition_string(p)).collect();
                    parts.push(format!("t({})", inner.join(",")));
                }
            }
            if let Some(mc) = &self.unip.middle {
                parts.push(mc.name());
            }
        } else {
            let inner: Vec<String> = self.unip.partitions.iter().map(|p| partition_string(p)).collect();
            parts.push(format!("s[{}]", inner.join(",")));
        }
        format!("J({})", parts.join(" "))
    }

    /// Inequations cutting out the regular part of the torus parameter space.
    pub fn regular_slice(&self) -> Vec<String> {
        let r = self.t_lattice.rank();
        let mut out = Vec::new();
        for i in 1..=r {
            out.push(format!("z{i} != 1"));
        }
        for i in 1..=r {
            for j in i + 1..=r {
                out.push(format!("z{i} != z{j}"));
                if self.eps == 1 {
                    out.push(format!("z{i} != z{j}^-1"));
                }
            }
        }
        out
    }

    /// Dimension of the centralizer in SL(n) of a member, from the block data.
    pub fn centralizer_dim(&self) -> usize {
        let gl = |p: &Vec<usize>| -> usize {
            let conj = conjugate_partition(p);
            conj.iter().map(|c| c * c).sum()
        };
        let pairs: usize = self.unip.partitions.iter().map(gl).sum();
        if self.eps == 1 {
            pairs + self.unip.middle.as_ref().map_or(0, MiddleClass::centralizer_dim)
        } else {
            pairs - 1
        }
    }

    /// Representative `(t·u, ε)` over GF(2^field).
    pub fn representative(&self, field: u32) -> Result<GroupElement> {
        let n = self.n;
        let blocks = self.unip.partitions.len();
        let values = distinct_values(blocks, field, self.eps == 1)?;
        let mut t = vec![Gf::one(field); n];
        let mut u = Matrix::identity(n, field);
        let mut pos = 0;
        for (p, &a) in self.unip.partitions.iter().zip(&values) {
            let h: usize = p.iter().sum();
            place_jordan(&mut u, pos, p, field);
            for i in pos..pos + h {
                t[i] = a;
                if self.eps == 1 {
                    t[n - 1 - i] = a.inv()?;
                }
            }
            pos += h;
        }
        if self.eps == 0 && pos == n {
            // Scale the last block value so that det = 1.
            let det = t.iter().fold(Gf::one(field), |acc, &x| acc * x);
            let last = self.unip.partitions.last().map_or(0, |p| p.iter().sum::<usize>());
            if !det.is_one() {
                let fix = root_of(det.inv()?, last)?;
                for x in &mut t[n - last..] {
                    *x *= fix;
                }
            }
        }
        if let Some(mc) = &self.unip.middle {
            let x = mc.representative(field);
            for i in 0..mc.m {
                for j in 0..mc.m {
                    u[(pos + i, pos + j)] = x[(i, j)];
                }
            }
        }
        GroupElement::new(Matrix::diagonal(&t).mul(&u), self.eps)
    }

    /// Smallest field degree admitting a representative.
    pub fn min_field(&self) -> u32 {
        let k = self.unip.partitions.len();
        if self.eps == 1 {
            // (2^m - 2) / 2 pairs {a, a^-1} with a != 1 exist in GF(2^m).
            (1..).find(|&m| ((1u64 << m) - 2) / 2 >= k as u64).unwrap()
        } else {
            (1..).find(|&m| (1u64 << m) > k as u64).unwrap()
        }
    }
}

impl fmt::Debug for JordanClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (n={}, T={:?})", self.name(), self.n, self.t_lattice.basis)
    }
}

impl fmt::Display for JordanClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

pub fn conjugate_partition(p: &[usize]) -> Vec<usize> {
    let max = p.iter().copied().max().unwrap_or(0);
    (1..=max).map(|k| p.iter().filter(|&&x| x >= k).count()).collect()
}

/// Partitions of `k` in decreasing lexicographic order.
pub fn partitions(k: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=k.min(max)).rev() {
            cur.push(p);
            rec(k - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}

/// Dominance order on partitions of the same size.
pub fn dominated_by(a: &[usize], b: &[usize]) -> bool {
    let (mut sa, mut sb) = (0, 0);
    for i in 0..a.len().max(b.len()) {
        sa += a.get(i).copied().unwrap_or(0);
        sb += b.get(i).copied().unwrap_or(0);
        if sa > sb {
            return false;
        }
    }
    sa == sb
}

/// Unitriangular Jordan blocks of the given partition at offset `pos`.
fn place_jordan(u: &mut Matrix, pos: usize, p: &[usize], field: u32) {
    let mut start = pos;
    for &part in p {
        for i in start..start + part - 1 {
            u[(i, i + 1)] = Gf::one(field);
        }
        start += part;
    }
}

/// `count` eigenvalues from deterministic generator powers: distinct, different
/// from 1, and (for the τ-coset) not inverse to each other.
fn distinct_values(count: usize, field: u32, paired: bool) -> Result<Vec<Gf>> {
    let order = (1u64 << field) - 1;
    let mut out: Vec<Gf> = Vec::new();
    for k in 0..order {
        if out.len() == count {
            break;
        }
        let a = Gf::gen_pow(field, k);
        if paired && (a.is_one() || pair_rep(a) != a) {
            continue;
        }
        if out.iter().any(|&b| b == a || (paired && b == a.inv().unwrap())) {
            continue;
        }
        if !paired && a.is_one() && count > 1 {
            continue;
        }
        out.push(a);
    }
    if out.len() < count {
        return Err(Error::InvalidInput(format!("GF(2^{field}) has too few eigenvalues")));
    }
    Ok(out)
}

/// An `h`-th root of `x` in its field (exists since the multiplicative order is odd and h is small).
fn root_of(x: Gf, h: usize) -> Result<Gf> {
    let m = x.degree();
    Gf::all(m)
        .find(|y| y.pow(h as u64) == x)
        .ok_or_else(|| Error::InvalidInput(format!("no {h}-th root in GF(2^{m})")))
}

/// Canonical label of `a`.
pub fn class_of(a: &GroupElement) -> Result<JordanClassLabel> {
    let n = a.n();
    if a.eps() == 1 && n > 8 {
        return Err(Error::UnsupportedRank(n));
    }
    let r = reduce(a)?;
    let x = r.element.mat();
    let lattice = t_of_reduced(&r);
    let label = if a.eps() == 1 {
        let sq = x.mul(&tau_twist(x)?);
        let mut pairs = Vec::new();
        let mut mid = Vec::new();
        for block in eigen_blocks(&r.s) {
            let v = r.s[block[0]];
            if v.is_one() {
                mid = block;
            } else if pair_rep(v) == v {
                let sub = sq.submatrix(&block, &block).scale(v.square().inv()?);
                pairs.push(sub.unipotent_jordan_type());
            }
        }
        let middle = if mid.is_empty() {
            None
        } else {
            if mid.len() > 4 {
                return Err(Error::UnsupportedRank(n));
            }
            Some(MiddleClass::classify(&x.submatrix(&mid, &mid))?)
        };
        JordanClassLabel::twisted(n, pairs, middle)
    } else {
        let parts = eigen_blocks(&r.s)
            .iter()
            .map(|b| r.u.submatrix(b, b).unipotent_jordan_type())
            .collect();
        JordanClassLabel::untwisted(n, parts)
    };
    if label.t_lattice.rank() != lattice.rank()
        || label.levi.block_sizes() != levi_of_lattice(&lattice, a.eps() == 1).block_sizes()
    {
        return Err(Error::ConsistencyFailure(format!("label {label:?} disagrees with T(a) = {lattice:?}")));
    }
    Ok(label)
}

/// Whether two elements lie in the same Jordan class.
pub fn same_class(a: &GroupElement, h: &GroupElement) -> Result<bool> {
    if a.n() != h.n() {
        return Err(Error::InvalidInput("elements of different rank".into()));
    }
    Ok(class_of(a)? == class_of(h)?)
}

/// All Jordan-class families of G°τ for 2 <= n <= 4.
pub fn families(n: usize) -> Result<Vec<JordanClassLabel>> {
    if !(2..=4).contains(&n) {
        return Err(Error::UnsupportedRank(n));
    }
    let mut out = Vec::new();
    for k in 0..=n / 2 {
        let m = n - 2 * k;
        let middles: Vec<Option<MiddleClass>> =
            if m == 0 { vec![None] } else { MiddleClass::all(m)?.into_iter().map(Some).collect() };
        for sizes in partitions(k) {
            for pairs in pair_assignments(&sizes) {
                for mid in &middles {
                    let label = JordanClassLabel::twisted(n, pairs.clone(), mid.clone());
                    if !out.contains(&label) {
                        out.push(label);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// One partition per block size, in all combinations.
fn pair_assignments(sizes: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new()];
    for &h in sizes {
        let mut next = Vec::new();
        for prefix in &out {
            for p in partitions(h) {
                let mut v: Vec<Vec<usize>> = prefix.clone();
                v.push(p);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// A Jordan-class family with a representative and dimensions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassDescription {
    pub label: JordanClassLabel,
    pub name: String,
    pub representative: crate::group::ElementJson,
    /// Dimension of the G°-orbits in the class.
    pub orbit_dimension: usize,
    /// Dimension of the class (orbit dimension plus rank T(a)).
    pub dimension: usize,
    pub isolated: bool,
    pub regular_slice: Vec<String>,
}

/// Enumerates the families of G°τ with dimensions certified by centralizer point counts.
pub fn enumerate_classes(n: usize) -> Result<Vec<ClassDescription>> {
    families(n)?
        .into_iter()
        .map(|label| {
            let rep = label.representative(label.min_field())?;
            if class_of(&rep)? != label {
                return Err(Error::ConsistencyFailure(format!("representative of {label:?} misclassified")));
            }
            let est = crate::dimension::family_orbit_dim(&label)?;
            let orbit_dimension = est.dim;
            Ok(ClassDescription {
                name: label.name(),
                representative: rep.to_json(),
                orbit_dimension,
                dimension: orbit_dimension + label.t_lattice.rank(),
                isolated: label.is_isolated(),
                regular_slice: label.regular_slice(),
                label,
            })
        })
        .collect()
}

/// For isolated `a`: the torus part (trivial for SL(n)) and the orbit representative.
pub fn isolated_class_structure(a: &GroupElement) -> Result<(Subtorus, GroupElement)> {
    let data = crate::torus::t_of(a)?;
    if data.lattice.rank() != 0 {
        return Err(Error::NotIsolated);
    }
    Ok((Subtorus::trivial(a.n()), a.clone()))
}

/// For `g` isolated relative to the Levi `levi` (`g` in reduced form normalizing it):
/// the torus `(Z(L)° ∩ C(g))°`, so that `S = T(g)·(L·g)`.
pub fn levi_isolated_structure(levi: &LeviDescriptor, g: &GroupElement) -> Result<(Subtorus, GroupElement)> {
    let n = levi.n;
    let rows: IntMatrix =
        levi.blocks.iter().map(|b| (0..n).map(|i| i64::from(b.contains(&i))).collect()).collect();
    let z = saturate(&rows, n);
    let mut chars = Vec::new();
    let x = g.mat();
    for i in 0..n {
        for j in 0..n {
            if x[(i, j)].is_zero() {
                continue;
            }
            let mut v = vec![0; n];
            if g.eps() == 1 {
                v[i] += 1;
                v[n - 1 - j] += 1;
            } else if i != j {
                v[i] += 1;
                v[j] -= 1;
            }
            if v.iter().any(|&c| c != 0) {
                chars.push(v);
            }
        }
    }
    let t = z.intersect_kernel(&chars);
    // Relative isolation: T(g) computed inside L must be this torus.
    let inner = crate::torus::t_of(g)?.lattice;
    let l_inner = levi_of_lattice(&inner, g.eps() == 1);
    if !l_inner.refines(levi) && inner.rank() > t.rank() {
        return Err(Error::NotIsolated);
    }
    Ok((t, g.clone()))
}

/// Regularity constraint of `S = T·τ` for L = T, n = 3, in the coordinates
/// `diag(alpha, beta, (alpha beta)^{-1}) τ`.
pub fn torus_coset_slice_n3() -> Vec<String> {
    // s = diag(alpha sqrt(beta), 1, (alpha sqrt(beta))^{-1}) is regular iff alpha sqrt(beta) != 1.
    vec!["alpha != sqrt(beta)^-1".to_string()]
}

/// Whether `diag(alpha, beta, (alpha beta)^{-1}) τ` lies in the regular part of `T·τ`.
pub fn torus_coset_point_is_regular(alpha: Gf, beta: Gf) -> bool {
    !(alpha * beta.sqrt()).is_one()
}
