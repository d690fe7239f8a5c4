//! T(a), L(a) and isolation for elements of SL(n) ⋊ <τ>, computed on the
//! diagonal torus after conjugating `a_s` into diagonal position.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::Gf;
use crate::group::{normal_form_tu_tau, triangular_form, GroupElement};
use crate::lattice::{saturate, IntMatrix, Subtorus};
use crate::matrix::Matrix;

/// An element conjugated so that its semisimple part is diagonal.
#[derive(Clone, Debug)]
pub struct Reduced {
    /// `conjugator · a · conjugator^{-1}`.
    pub element: GroupElement,
    /// Diagonal of `a_s` (an `eps = 0` element).
    pub s: Vec<Gf>,
    /// Matrix part of `a_u`, upper unitriangular.
    pub u: Matrix,
    pub conjugator: GroupElement,
}

impl Reduced {
    pub fn n(&self) -> usize {
        self.s.len()
    }

    pub fn eps(&self) -> u8 {
        self.element.eps()
    }
}

/// Conjugates `a` to `t·u·τ^ε` with `t` diagonal, `u` unitriangular, `tu = ut`.
pub fn reduce(a: &GroupElement) -> Result<Reduced> {
    if a.eps() == 1 {
        let nf = normal_form_tu_tau(a)?;
        Ok(Reduced { element: nf.element(), s: nf.t.diag(), u: nf.u, conjugator: nf.conjugator })
    } else {
        let (mat, conjugator) = triangular_form(a)?;
        let s = mat.diag();
        let u = Matrix::diagonal(&s).inverse()?.mul(&mat);
        let element = GroupElement::new(mat, 0)?;
        Ok(Reduced { element, s, u, conjugator })
    }
}

/// Block structure of a Levi subgroup containing the diagonal torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LeviDescriptor {
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
    pub tau_compatible: bool,
}

impl LeviDescriptor {
    pub fn whole(n: usize, tau_compatible: bool) -> LeviDescriptor {
        LeviDescriptor { n, blocks: vec![(0..n).collect()], tau_compatible }
    }

    pub fn torus(n: usize, tau_compatible: bool) -> LeviDescriptor {
        LeviDescriptor { n, blocks: (0..n).map(|i| vec![i]).collect(), tau_compatible }
    }

    /// Sorted block sizes.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        v.sort_unstable();
        v
    }

    /// Dimension of the Levi subgroup of SL(n).
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.len() * b.len()).sum::<usize>() - 1
    }

    /// Whether every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &LeviDescriptor) -> bool {
        self.blocks.iter().all(|b| other.blocks.iter().any(|o| b.iter().all(|i| o.contains(i))))
    }

    /// Whether the blocks are contiguous intervals in order (a standard Levi).
    pub fn is_standard(&self) -> bool {
        let flat: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        flat == (0..self.n).collect::<Vec<_>>()
    }

    /// Block index of each coordinate.
    pub fn block_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (k, b) in self.blocks.iter().enumerate() {
            for &i in b {
                out[i] = k;
            }
        }
        out
    }
}

/// Coordinates grouped by equal diagonal entries, in order of first occurrence.
pub fn eigen_blocks(d: &[Gf]) -> Vec<Vec<usize>> {
    let mut blocks: Vec<(Gf, Vec<usize>)> = Vec::new();
    for (i, &x) in d.iter().enumerate() {
        match blocks.iter_mut().find(|(v, _)| *v == x) {
            Some((_, idx)) => idx.push(i),
            None => blocks.push((x, vec![i])),
        }
    }
    blocks.into_iter().map(|(_, idx)| idx).collect()
}

fn indicator(n: usize, block: &[usize]) -> Vec<i64> {
    (0..n).map(|i| i64::from(block.contains(&i))).collect()
}

fn unit_char(n: usize, i: usize, j: usize, sign: i64) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] += 1;
    v[j] += sign;
    v
}

/// Characters by which the diagonal torus acts on the nonzero entries of `x`
/// under `z ↦ z x τ^ε(z)^{-1}`; entries on the diagonal count only when `ε = 1`.
fn entry_characters(x: &Matrix, eps: u8) -> IntMatrix {
    let n = x.rows();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if x[(i, j)].is_zero() {
                continue;
            }
            let c = if eps == 1 { unit_char(n, i, n - 1 - j, 1) } else { unit_char(n, i, j, -1) };
            if c.iter().any(|&v| v != 0) {
                out.push(c);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// T(a) in the basis of `reduced`.
#[derive(Clone, Debug)]
pub struct TorusData {
    pub lattice: Subtorus,
    pub reduced: Reduced,
}

/// Z(C(a_s)°)° as the lattice of block-scalar cocharacters.
pub fn center_of_centralizer(s: &[Gf]) -> Subtorus {
    let n = s.len();
    let rows: IntMatrix = eigen_blocks(s).iter().map(|b| indicator(n, b)).collect();
    saturate(&rows, n)
}

/// T(a) from already reduced data.
pub fn t_of_reduced(r: &Reduced) -> Subtorus {
    let n = r.n();
    let z = center_of_centralizer(&r.s);
    // a_u = (u, ε): conditions from its entries; the identity part gives T^τ when ε = 1.
    let chars = entry_characters(&r.u, r.eps());
    z.intersect_kernel(&chars).intersect_kernel(&if r.eps() == 1 {
        (0..n).map(|i| unit_char(n, i, n - 1 - i, 1)).collect()
    } else {
        Vec::new()
    })
}

/// `(Z(C_G(a_s)°) ∩ C_G(a_u))°`, with the conjugator into diagonal position.
pub fn t_of(a: &GroupElement) -> Result<TorusData> {
    let reduced = reduce(a)?;
    let lattice = t_of_reduced(&reduced);
    Ok(TorusData { lattice, reduced })
}

/// `(Z(L(a))° ∩ C(a))°`, through the Levi subgroup and the whole element.
pub fn t_of_via_levi(a: &GroupElement) -> Result<Subtorus> {
    let data = t_of(a)?;
    let levi = levi_of_lattice(&data.lattice, a.eps() == 1);
    let n = levi.n;
    let rows: IntMatrix = levi.blocks.iter().map(|b| indicator(n, b)).collect();
    let z_l = saturate(&rows, n);
    Ok(z_l.intersect_kernel(&entry_characters(data.reduced.element.mat(), a.eps())))
}

/// Centralizer of a diagonal subtorus: coordinates with equal projections.
pub fn levi_of_lattice(t: &Subtorus, tau_compatible: bool) -> LeviDescriptor {
    LeviDescriptor { n: t.n, blocks: t.coordinate_blocks(), tau_compatible }
}

/// L(a) = C_{G°}(T(a)) in the reduced basis.
pub fn l_of(a: &GroupElement) -> Result<LeviDescriptor> {
    let data = t_of(a)?;
    Ok(levi_of_lattice(&data.lattice, a.eps() == 1))
}

/// Whether T(a) is trivial, i.e. `a` is isolated (Z(SL(n))° is trivial).
pub fn is_isolated(a: &GroupElement) -> Result<bool> {
    Ok(t_of(a)?.lattice.rank() == 0)
}

/// Point of a subtorus: `Π_k λ_k(g^{e_k})` for the basis cocharacters `λ_k`.
pub fn torus_point(t: &Subtorus, exps: &[u64], m: u32) -> Vec<Gf> {
    let order = (1u64 << m) - 1;
    (0..t.n)
        .map(|i| {
            let e = t.basis.iter().zip(exps).fold(0i128, |acc, (b, &x)| acc + b[i] as i128 * x as i128);
            Gf::gen_pow(m, e.rem_euclid(order as i128) as u64)
        })
        .collect()
}

/// Random point with exponents in `0..=2^m - 2`.
pub fn sample_torus_point<R: Rng + ?Sized>(t: &Subtorus, m: u32, rng: &mut R) -> Vec<Gf> {
    let exps: Vec<u64> = (0..t.rank()).map(|_| rng.gen_range(0..(1u64 << m) - 1)).collect();
    torus_point(t, &exps, m)
}

fn coincidence_pattern(d: &[Gf]) -> Vec<Vec<bool>> {
    d.iter().map(|&a| d.iter().map(|&b| a == b).collect()).collect()
}

/// Whether `z·a_s` has the same eigenvalue coincidences as `a_s`, i.e.
/// `C_G(z a_s)° = C_G(a_s)°`.
pub fn semisimple_regular_test(z: &[Gf], s: &[Gf]) -> Result<bool> {
    let m = crate::field::lcm_degree(z[0].degree(), s[0].degree())?;
    let zs: Vec<Gf> = z.iter().zip(s).map(|(&a, &b)| Ok(a.embed(m)? * b.embed(m)?)).collect::<Result<_>>()?;
    let s: Vec<Gf> = s.iter().map(|&b| b.embed(m)).collect::<Result<_>>()?;
    Ok(coincidence_pattern(&zs) == coincidence_pattern(&s))
}

/// Multiplies the diagonal torus point `z` into an element: `(z, 0)·a`.
pub fn translate(z: &[Gf], a: &GroupElement) -> Result<GroupElement> {
    let m = crate::field::lcm_degree(z[0].degree(), a.field())?;
    let zel = GroupElement::new(Matrix::diagonal(z).embed(m)?, 0)?;
    zel.compose(&a.embed(m)?)
}
