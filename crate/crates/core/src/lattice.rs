//! Integer lattices: Smith and Hermite normal forms, saturation, and
//! subtori of the diagonal torus of SL(n) as saturated cocharacter lattices.

use std::fmt;

use serde::{Deserialize, Serialize};

pub type IntMatrix = Vec<Vec<i64>>;

/// Smith normal form `P A Q = D` with `P`, `Q` unimodular.
#[derive(Clone, Debug)]
pub struct Smith {
    pub p: IntMatrix,
    pub d: IntMatrix,
    /// Inverse of `Q`.
    pub q_inv: IntMatrix,
    pub rank: usize,
}

fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Computes the Smith normal form with transformation matrices.
pub fn smith(a: &IntMatrix, cols: usize) -> Smith {
    let rows = a.len();
    let mut d: IntMatrix = a.clone();
    let mut p = identity(rows);
    let mut q_inv = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero absolute value in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if d[i][j] != 0 && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        p.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        q_inv.swap(t, pj);
        let mut clean = true;
        for i in t + 1..rows {
            let k = d[i][t] / d[t][t];
            if k != 0 {
                for j in 0..cols {
                    d[i][j] -= k * d[t][j];
                }
                for j in 0..rows {
                    p[i][j] -= k * p[t][j];
                }
            }
            clean &= d[i][t] == 0;
        }
        for j in t + 1..cols {
            let k = d[t][j] / d[t][t];
            if k != 0 {
                for row in d.iter_mut() {
                    row[j] -= k * row[t];
                }
                // Column op c_j -= k c_t has inverse row op r_t += k r_j on Q^{-1}.
                for c in 0..cols {
                    q_inv[t][c] += k * q_inv[j][c];
                }
            }
            clean &= d[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // Divisibility: if some entry is not a multiple of the pivot, fold its row in.
        let piv = d[t][t];
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d[i][j] % piv != 0));
        if let Some(i) = bad {
            for j in 0..cols {
                d[t][j] += d[i][j];
            }
            for j in 0..rows {
                p[t][j] += p[i][j];
            }
            continue;
        }
        if piv < 0 {
            for j in 0..cols {
                d[t][j] = -d[t][j];
            }
            for j in 0..rows {
                p[t][j] = -p[t][j];
            }
        }
        t += 1;
    }
    Smith { p, d, q_inv, rank: t }
}

/// Elementary divisors of a matrix (the nonzero diagonal of its Smith form).
pub fn elementary_divisors(a: &IntMatrix, cols: usize) -> Vec<i64> {
    let s = smith(a, cols);
    (0..s.rank).map(|i| s.d[i][i]).collect()
}

/// Row-style Hermite normal form of the row lattice, zero rows removed.
pub fn hermite(a: &IntMatrix, cols: usize) -> IntMatrix {
    let mut m: IntMatrix = a.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        // Euclid down the column until one nonzero entry remains at row r.
        loop {
            let nz: Vec<usize> = (r..m.len()).filter(|&i| m[i][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            m.swap(r, piv);
            let mut done = true;
            for i in r + 1..m.len() {
                let k = m[i][c] / m[r][c];
                if k != 0 {
                    for j in 0..cols {
                        m[i][j] -= k * m[r][j];
                    }
                }
                done &= m[i][c] == 0;
            }
            if done {
                break;
            }
        }
        if m[r][c] == 0 {
            continue;
        }
        if m[r][c] < 0 {
            for x in m[r].iter_mut() {
                *x = -*x;
            }
        }
        let piv = m[r][c];
        for i in 0..r {
            let k = m[i][c].div_euclid(piv);
            if k != 0 {
                for j in 0..cols {
                    m[i][j] -= k * m[r][j];
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Basis of the left integer kernel `{x : x A = 0}`.
pub fn left_kernel(a: &IntMatrix, cols: usize) -> IntMatrix {
    let s = smith(a, cols);
    s.p[s.rank..].to_vec()
}

/// Basis of the right integer kernel `{v : A v = 0}` (a saturated lattice).
pub fn right_kernel(a: &IntMatrix, cols: usize) -> IntMatrix {
    let t: IntMatrix = (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect();
    left_kernel(&t, a.len())
}

/// A saturated sublattice of `{v ∈ Z^n : Σ v_i = 0}`, the cocharacter lattice of
/// a subtorus of the diagonal torus of SL(n); basis rows in Hermite normal form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subtorus {
    pub n: usize,
    pub basis: IntMatrix,
}

impl Subtorus {
    pub fn trivial(n: usize) -> Subtorus {
        Subtorus { n, basis: Vec::new() }
    }

    /// The full cocharacter lattice of the diagonal torus of SL(n).
    pub fn full(n: usize) -> Subtorus {
        let rows = (0..n.saturating_sub(1))
            .map(|i| (0..n).map(|j| if j == i { 1 } else if j == i + 1 { -1 } else { 0 }).collect())
            .collect();
        saturate(&rows, n)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Whether `v` lies in the lattice.
    pub fn contains(&self, v: &[i64]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        hermite(&rows, self.n) == self.basis
    }

    /// Whether `self ⊆ other`.
    pub fn is_sublattice_of(&self, other: &Subtorus) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    /// Saturated intersection with the kernel of the given characters.
    pub fn intersect_kernel(&self, characters: &IntMatrix) -> Subtorus {
        if self.basis.is_empty() || characters.is_empty() {
            return self.clone();
        }
        // Pairings <b_i, χ_j>; x with x·(pairing) = 0 gives lattice points x·B.
        let pairing: IntMatrix = self
            .basis
            .iter()
            .map(|b| characters.iter().map(|c| b.iter().zip(c).map(|(x, y)| x * y).sum()).collect())
            .collect();
        let ker = left_kernel(&pairing, characters.len());
        let rows: IntMatrix = ker
            .iter()
            .map(|x| {
                (0..self.n).map(|j| x.iter().zip(&self.basis).map(|(a, b)| a * b[j]).sum()).collect()
            })
            .collect();
        saturate(&rows, self.n)
    }

    /// Coordinates grouped by equal columns of the basis (the blocks of C(torus)).
    pub fn coordinate_blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks: Vec<(Vec<i64>, Vec<usize>)> = Vec::new();
        for j in 0..self.n {
            let col: Vec<i64> = self.basis.iter().map(|r| r[j]).collect();
            match blocks.iter_mut().find(|(c, _)| *c == col) {
                Some((_, idx)) => idx.push(j),
                None => blocks.push((col, vec![j])),
            }
        }
        blocks.into_iter().map(|(_, idx)| idx).collect()
    }
}

impl fmt::Debug for Subtorus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subtorus(n={}, {:?})", self.n, self.basis)
    }
}

/// Saturation of the row space intersected with `{Σ v_i = 0}`, in Hermite normal form.
pub fn saturate(rows: &IntMatrix, n: usize) -> Subtorus {
    let rows: IntMatrix = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    if rows.is_empty() {
        return Subtorus::trivial(n);
    }
    // Restrict to the sum-zero hyperplane: combinations x with x·(row sums) = 0.
    let sums: IntMatrix = rows.iter().map(|r| vec![r.iter().sum::<i64>()]).collect();
    let combos = left_kernel(&sums, 1);
    let in_plane: IntMatrix = combos
        .iter()
        .map(|x| (0..n).map(|j| x.iter().zip(&rows).map(|(a, r)| a * r[j]).sum()).collect())
        .collect();
    if in_plane.iter().all(|r| r.iter().all(|&x| x == 0)) {
        return Subtorus::trivial(n);
    }
    let s = smith(&in_plane, n);
    let sat: IntMatrix = s.q_inv[..s.rank].to_vec();
    Subtorus { n, basis: hermite(&sat, n) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{One, Signed, Zero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Q = BigRational;

    fn q(x: i64) -> Q {
        Q::from_integer(x.into())
    }

    /// Rational rank by row reduction.
    fn rational_rank(rows: &[Vec<Q>]) -> usize {
        let mut m: Vec<Vec<Q>> = rows.to_vec();
        let cols = m.first().map_or(0, |r| r.len());
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(r, p);
            for i in 0..m.len() {
                if i != r && !m[i][c].is_zero() {
                    let f = &m[i][c] / &m[r][c];
                    for j in 0..cols {
                        let v = &f * &m[r][j];
                        m[i][j] -= v;
                    }
                }
            }
            r += 1;
        }
        r
    }

    fn to_q(rows: &IntMatrix) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    /// Determinant over Q.
    fn det_q(m: &[Vec<Q>]) -> Q {
        let n = m.len();
        let mut a = m.to_vec();
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[c..][i - c][c].is_zero()) else { return Q::zero() };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= a[c][c].clone();
            for i in c + 1..n {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let v = &f * &a[c][j];
                    a[i][j] -= v;
                }
            }
        }
        det
    }

    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 { a.abs() } else { gcd(b, a % b) }
    }

    /// gcd of all r×r minors (1 iff the rows span a saturated lattice).
    fn minor_gcd(rows: &IntMatrix, n: usize) -> i64 {
        let r = rows.len();
        let mut g = 0;
        let mut cols: Vec<usize> = (0..r).collect();
        loop {
            let sub: Vec<Vec<Q>> =
                rows.iter().map(|row| cols.iter().map(|&c| q(row[c])).collect()).collect();
            let d = det_q(&sub);
            let d: i64 = d.to_integer().try_into().unwrap();
            g = gcd(g, d);
            // Next combination.
            let mut i = r;
            loop {
                if i == 0 {
                    return g;
                }
                i -= 1;
                if cols[i] < n - r + i {
                    cols[i] += 1;
                    for k in i + 1..r {
                        cols[k] = cols[k - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Rational oracle: the saturation of V ∩ {Σ=0} is the unique lattice that lies in
    /// that space, has full rank in it, and whose maximal minors have gcd 1.
    fn check_saturation(input: &IntMatrix, n: usize, out: &Subtorus) {
        let mut space = to_q(input);
        space.push(vec![q(1); n]);
        let in_rank = rational_rank(&to_q(input));
        let with_ones = rational_rank(&space);
        // dim(V ∩ H) = dim V - 1 if the all-ones functional is independent on V.
        let expected = if in_rank == 0 {
            0
        } else {
            let mut vs = to_q(input);
            let sum_zero = vs.iter().all(|r| r.iter().fold(Q::zero(), |a, b| a + b).is_zero());
            vs.clear();
            if sum_zero { in_rank } else { in_rank - 1 }
        };
        let _ = with_ones;
        assert_eq!(out.rank(), expected, "rank for {input:?}");
        for b in &out.basis {
            assert_eq!(b.iter().sum::<i64>(), 0);
            let mut rows = to_q(input);
            let base = rational_rank(&rows);
            rows.push(b.iter().map(|&x| q(x)).collect());
            assert_eq!(rational_rank(&rows), base, "basis row outside the span");
        }
        if out.rank() > 0 {
            assert_eq!(minor_gcd(&out.basis, n), 1);
            assert!(elementary_divisors(&out.basis, n).iter().all(|&d| d == 1));
        }
    }

    #[test]
    fn saturate_examples() {
        assert_eq!(saturate(&vec![vec![2, 0, -2]], 3).basis, vec![vec![1, 0, -1]]);
        assert_eq!(saturate(&vec![], 3).rank(), 0);
        let full = saturate(&vec![vec![1, 1, -2], vec![1, -1, 0]], 3);
        assert_eq!(full, Subtorus::full(3));
        assert_eq!(full.rank(), 2);
    }

    #[test]
    fn saturate_matches_rational_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..1000 {
            let n = rng.gen_range(2..=5);
            let r = rng.gen_range(0..=4);
            let rows: IntMatrix =
                (0..r).map(|_| (0..n).map(|_| rng.gen_range(-6..=6)).collect()).collect();
            let s = saturate(&rows, n);
            check_saturation(&rows, n, &s);
            assert_eq!(saturate(&s.basis, n), s, "idempotence");
        }
    }

    #[test]
    fn smith_transforms_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..300 {
            let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=5));
            let a: IntMatrix = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
            let s = smith(&a, c);
            // P A = D Q^{-1}.
            let pa: IntMatrix = (0..r)
                .map(|i| (0..c).map(|j| (0..r).map(|k| s.p[i][k] * a[k][j]).sum()).collect())
                .collect();
            let dq: IntMatrix = (0..r)
                .map(|i| (0..c).map(|j| (0..c).map(|k| s.d[i][k] * s.q_inv[k][j]).sum()).collect())
                .collect();
            assert_eq!(pa, dq);
            for i in 0..r {
                for j in 0..c {
                    if i != j {
                        assert_eq!(s.d[i][j], 0);
                    }
                }
            }
            for i in 1..s.rank {
                assert_eq!(s.d[i][i] % s.d[i - 1][i - 1], 0);
            }
            assert_eq!(s.rank, rational_rank(&to_q(&a)));
        }
    }

    #[test]
    fn hermite_is_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..200 {
            let n = rng.gen_range(2..=5);
            let a: IntMatrix = (0..3).map(|_| (0..n).map(|_| rng.gen_range(-5..=5)).collect()).collect();
            let h = hermite(&a, n);
            // Unimodular mixing of the rows leaves the form unchanged.
            let mut b = a.clone();
            let k = rng.gen_range(-3..=3);
            for j in 0..n {
                b[0][j] += k * a[1][j];
            }
            b.swap(1, 2);
            assert_eq!(hermite(&b, n), h);
            for (i, row) in h.iter().enumerate() {
                let piv = row.iter().position(|&x| x != 0).unwrap();
                assert!(row[piv] > 0);
                for other in &h[..i] {
                    assert!(other[piv] >= 0 && other[piv] < row[piv]);
                }
            }
        }
    }

    #[test]
    fn kernel_intersection() {
        let full = Subtorus::full(3);
        let t = full.intersect_kernel(&vec![vec![1, 0, 1]]);
        assert_eq!(t.basis, vec![vec![1, 0, -1]]);
        let t2 = Subtorus::full(4).intersect_kernel(&vec![vec![1, 0, 0, 1], vec![0, 1, 1, 0]]);
        assert_eq!(t2.rank(), 2);
        assert!(t2.contains(&[1, 0, 0, -1]));
        assert!(t2.contains(&[0, 1, -1, 0]));
        assert!(!t2.contains(&[1, -1, 0, 0]));
    }

    #[test]
    fn blocks_of_a_subtorus() {
        let t = saturate(&vec![vec![1, 0, -1]], 3);
        assert_eq!(t.coordinate_blocks(), vec![vec![0], vec![1], vec![2]]);
        let t = saturate(&vec![vec![1, 1, -1, -1]], 4);
        assert_eq!(t.coordinate_blocks(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(Subtorus::trivial(3).coordinate_blocks(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn negative_one_rationals_are_exact() {
        assert!(q(-1).is_negative());
    }
}
