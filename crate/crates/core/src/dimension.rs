//! Orbit and centralizer dimensions from exact point counts over GF(2^m),
//! with the linearized centralizer as an upper bound.

use std::collections::{HashMap, HashSet};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::classes::JordanClassLabel;
use crate::error::{Error, Result};
use crate::field::Gf;
use crate::group::{tau_twist_lie, GroupElement};
use crate::matrix::Matrix;
use crate::packed::Packer;
use crate::torus::LeviDescriptor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Orbit sizes by breadth-first search.
    Pointcount,
    /// Centralizer orders counted row by row.
    CentralizerCount,
    Tangent,
}

/// A dimension with the counts it was read off from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub dim: usize,
    /// `(m, count over GF(2^m))`; orbit sizes or centralizer orders depending on `method`.
    pub counts: Vec<(u32, u128)>,
    pub method: Method,
}

/// `|SL(n, 2^m)|`.
pub fn sl_order(n: usize, m: u32) -> u128 {
    let q = 1u128 << m;
    let mut order = q.pow((n * (n - 1) / 2) as u32);
    for k in 2..=n as u32 {
        order *= q.pow(k) - 1;
    }
    order
}

/// Orbit size of `x` under `X ↦ g X τ^ε(g)^{-1}`, `g ∈ SL(n, 2^m)`.
pub fn orbit_size(x: &GroupElement, m: u32, max_states: usize) -> Result<u128> {
    let n = x.n();
    let n2 = n * n;
    let p = Packer::new(n, m)?;
    let bits = p.bits();
    let eps = x.eps();
    let k0 = p.pack(x.mat())?;
    let mut cur = vec![0u8; n2];
    let mut next = vec![0u8; n2];
    if bits <= 30 {
        let mut seen = vec![0u64; (1usize << bits).div_ceil(64)];
        seen[(k0 >> 6) as usize] |= 1 << (k0 & 63);
        let mut frontier = vec![k0];
        let mut count: usize = 1;
        while !frontier.is_empty() {
            let mut nf = Vec::new();
            for &k in &frontier {
                p.decode(k, &mut cur);
                for g in 0..p.gen_count() {
                    p.step(&cur, g, eps, &mut next);
                    let key = p.encode(&next);
                    let (w, b) = ((key >> 6) as usize, key & 63);
                    if seen[w] & (1 << b) == 0 {
                        seen[w] |= 1 << b;
                        nf.push(key);
                        count += 1;
                    }
                }
            }
            if count > max_states {
                return Err(Error::MemoryBudgetExceeded(format!("orbit larger than {max_states}")));
            }
            frontier = nf;
        }
        Ok(count as u128)
    } else {
        let mut seen: HashSet<u64> = HashSet::from([k0]);
        let mut frontier = vec![k0];
        while !frontier.is_empty() {
            let mut nf = Vec::new();
            for &k in &frontier {
                p.decode(k, &mut cur);
                for g in 0..p.gen_count() {
                    p.step(&cur, g, eps, &mut next);
                    let key = p.encode(&next);
                    if seen.insert(key) {
                        nf.push(key);
                    }
                }
            }
            if seen.len() > max_states {
                return Err(Error::MemoryBudgetExceeded(format!("orbit larger than {max_states}")));
            }
            frontier = nf;
        }
        Ok(seen.len() as u128)
    }
}

/// Integer read off from consecutive log-slopes; all slopes must round to it.
fn integral_slope(slopes: &[f64], what: &str) -> Result<usize> {
    let first = slopes.first().ok_or_else(|| Error::NonIntegralSlope(format!("{what}: no slope")))?;
    let d = first.round();
    if d < 0.0 || slopes.iter().any(|s| (s - d).abs() >= 0.5 || s.round() != d) {
        return Err(Error::NonIntegralSlope(format!("{what}: slopes {slopes:?}")));
    }
    Ok(d as usize)
}

/// Default BFS state budget.
pub const BFS_BUDGET: usize = 40_000_000;

/// Orbit dimension from BFS orbit sizes over consecutive degrees (n <= 3).
pub fn orbit_dim(x: &GroupElement, degrees: &[u32]) -> Result<DimensionEstimate> {
    if x.n() > 3 || degrees.iter().any(|&m| !(1..=3).contains(&m)) {
        return Err(Error::InvalidInput("orbit_dim needs n <= 3 and degrees in 1..=3".into()));
    }
    let reps: Vec<GroupElement> = degrees.iter().map(|_| x.clone()).collect();
    orbit_dim_per_field(&reps, degrees)
}

/// As `orbit_dim`, with one representative per field (for families with no
/// member over the smallest field).
pub fn orbit_dim_per_field(reps: &[GroupElement], degrees: &[u32]) -> Result<DimensionEstimate> {
    let mut counts = Vec::new();
    for (x, &m) in reps.iter().zip(degrees) {
        counts.push((m, orbit_size(x, m, BFS_BUDGET)?));
    }
    let slopes: Vec<f64> = counts
        .windows(2)
        .map(|w| ((w[1].1 as f64).log2() - (w[0].1 as f64).log2()) / (w[1].0 - w[0].0) as f64)
        .collect();
    let dim = integral_slope(&slopes, "orbit sizes")?;
    Ok(DimensionEstimate { dim, counts, method: Method::Pointcount })
}

/// Affine solution set `p + span(kernel)` of `A v = b`, or `None` if inconsistent.
fn affine_solutions(rows: &[Vec<Gf>], rhs: &[Gf], n: usize, f: u32) -> Option<(Vec<Gf>, Vec<Vec<Gf>>)> {
    if rows.is_empty() {
        let kernel = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Gf::one(f) } else { Gf::zero(f) }).collect())
            .collect();
        return Some((vec![Gf::zero(f); n], kernel));
    }
    let a = Matrix::from_rows(rows.to_vec()).ok()?;
    let p = a.solve(rhs)?;
    Some((p, a.kernel()))
}

/// Number of `c ∈ SL(n, 2^m)` centralizing `x`, or `BudgetExceeded`.
pub fn centralizer_count(x: &GroupElement, m: u32, budget: u64) -> Result<u128> {
    centralizer_count_in(x, m, None, budget)
}

/// As `centralizer_count`, restricted to the Levi subgroup `levi` when given.
pub fn centralizer_count_in(x: &GroupElement, m: u32, levi: Option<&LeviDescriptor>, budget: u64) -> Result<u128> {
    let x = x.embed(m)?;
    let block_of = levi.map(LeviDescriptor::block_of);
    let n = x.n();
    let f = m;
    let mut work: u64 = 0;
    if x.eps() == 1 {
        // c X τ(c)^{-1} = X ⇔ c M c^T = M with M = XJ.
        let mm = x.mat().mul(&Matrix::antidiagonal(n, f));
        let mt = mm.transpose();
        let mut count: u128 = 0;
        let mut rows: Vec<Vec<Gf>> = Vec::new();
        let ctx = RowContext { mm: &mm, mt: &mt, n, f, block_of: block_of.as_deref(), budget };
        count_rows(&ctx, &mut rows, &mut count, &mut work)?;
        Ok(count)
    } else {
        // Commutant of X as a linear space, filtered by det = 1.
        let xm = x.mat();
        let mut eqs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                // (cX + Xc)_{ij} = Σ_k c_ik X_kj + X_ik c_kj.
                let mut row = vec![Gf::zero(f); n * n];
                for k in 0..n {
                    row[i * n + k] += xm[(k, j)];
                    row[k * n + j] += xm[(i, k)];
                }
                eqs.push(row);
            }
        }
        if let Some(b) = &block_of {
            for i in 0..n {
                for j in 0..n {
                    if b[i] != b[j] {
                        let mut row = vec![Gf::zero(f); n * n];
                        row[i * n + j] = Gf::one(f);
                        eqs.push(row);
                    }
                }
            }
        }
        let kernel = Matrix::from_rows(eqs)?.kernel();
        let q = 1u128 << m;
        let total = q.checked_pow(kernel.len() as u32).unwrap_or(u128::MAX);
        if total > budget as u128 {
            return Err(Error::BudgetExceeded(format!("commutant has {total} points")));
        }
        let mut count = 0u128;
        for idx in 0..total {
            let mut v = vec![Gf::zero(f); n * n];
            let mut rest = idx;
            for b in &kernel {
                let c = Gf::new(f, (rest % q) as u32)?;
                rest /= q;
                for (t, &bv) in v.iter_mut().zip(b) {
                    *t += c * bv;
                }
            }
            let mut cm = Matrix::zeros(n, n, f);
            for i in 0..n {
                for j in 0..n {
                    cm[(i, j)] = v[i * n + j];
                }
            }
            if cm.det().is_one() {
                count += 1;
            }
        }
        Ok(count)
    }
}

struct RowContext<'a> {
    mm: &'a Matrix,
    mt: &'a Matrix,
    n: usize,
    f: u32,
    block_of: Option<&'a [usize]>,
    budget: u64,
}

fn count_rows(ctx: &RowContext, rows: &mut Vec<Vec<Gf>>, count: &mut u128, work: &mut u64) -> Result<()> {
    let RowContext { mm, mt, n, f, block_of, budget } = *ctx;
    let i = rows.len();
    if i == n {
        *count += 1;
        return Ok(());
    }
    let mut eqs = Vec::new();
    let mut rhs = Vec::new();
    for (j, w) in rows.iter().enumerate() {
        eqs.push(mm.apply(w));
        rhs.push(mm[(i, j)]);
        eqs.push(mt.apply(w));
        rhs.push(mm[(j, i)]);
    }
    if let Some(b) = block_of {
        for k in (0..n).filter(|&k| b[k] != b[i]) {
            let mut e = vec![Gf::zero(f); n];
            e[k] = Gf::one(f);
            eqs.push(e);
            rhs.push(Gf::zero(f));
        }
    }
    let Some((p, kernel)) = affine_solutions(&eqs, &rhs, n, f) else { return Ok(()) };
    let q = 1u64 << f;
    let total = q.checked_pow(kernel.len() as u32).ok_or_else(|| Error::BudgetExceeded("row space".into()))?;
    for idx in 0..total {
        *work += 1;
        if *work > budget {
            return Err(Error::BudgetExceeded(format!("more than {budget} nodes")));
        }
        let mut v = p.clone();
        let mut rest = idx;
        for b in &kernel {
            let c = Gf::new(f, (rest % q) as u32)?;
            rest /= q;
            for (t, &bv) in v.iter_mut().zip(b) {
                *t += c * bv;
            }
        }
        let mv = mm.apply(&v);
        let qv = v.iter().zip(&mv).fold(Gf::zero(f), |acc, (&a, &b)| acc + a * b);
        if qv != mm[(i, i)] {
            continue;
        }
        rows.push(v);
        count_rows(ctx, rows, count, work)?;
        rows.pop();
    }
    Ok(())
}

/// Centralizer order over GF(2^m): row counting, falling back to BFS and
/// orbit-stabilizer when the centralizer is too large to enumerate.
pub fn centralizer_order(x: &GroupElement, m: u32) -> Result<u128> {
    match centralizer_count(x, m, 20_000_000) {
        Ok(c) => Ok(c),
        Err(Error::BudgetExceeded(_)) => {
            let orbit = orbit_size(x, m, BFS_BUDGET)?;
            let total = sl_order(x.n(), m);
            if !total.is_multiple_of(orbit) {
                return Err(Error::ConsistencyFailure("orbit size does not divide |SL|".into()));
            }
            Ok(total / orbit)
        }
        Err(e) => Err(e),
    }
}

/// Orbit dimension from centralizer orders over several fields, one representative each.
pub fn orbit_dim_by_centralizer(reps: &[GroupElement], degrees: &[u32]) -> Result<DimensionEstimate> {
    let n = reps[0].n();
    let mut counts = Vec::new();
    for (x, &m) in reps.iter().zip(degrees) {
        counts.push((m, centralizer_order(x, m)?));
    }
    let slopes: Vec<f64> = counts
        .windows(2)
        .map(|w| ((w[1].1 as f64).log2() - (w[0].1 as f64).log2()) / (w[1].0 - w[0].0) as f64)
        .collect();
    let dim_c = integral_slope(&slopes, "centralizer orders")?;
    Ok(DimensionEstimate { dim: n * n - 1 - dim_c, counts, method: Method::CentralizerCount })
}

/// Dimension of `C_L(x)` from counts over consecutive fields, one representative each.
pub fn levi_centralizer_dim(levi: &LeviDescriptor, reps: &[GroupElement], degrees: &[u32]) -> Result<DimensionEstimate> {
    let mut counts = Vec::new();
    for (x, &m) in reps.iter().zip(degrees) {
        counts.push((m, centralizer_count_in(x, m, Some(levi), 20_000_000)?));
    }
    let slopes: Vec<f64> = counts
        .windows(2)
        .map(|w| ((w[1].1 as f64).log2() - (w[0].1 as f64).log2()) / (w[1].0 - w[0].0) as f64)
        .collect();
    let dim = integral_slope(&slopes, "Levi centralizer orders")?;
    Ok(DimensionEstimate { dim, counts, method: Method::CentralizerCount })
}

/// Dimension of `{Y ∈ sl_n : Y X = X dτ^ε(Y)}`, an upper bound for dim C(x).
pub fn tangent_dim_bound(x: &GroupElement) -> usize {
    let n = x.n();
    let f = x.field();
    let xm = x.mat();
    let mut cols = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let mut y = Matrix::zeros(n, n, f);
            y[(a, b)] = Gf::one(f);
            let ty = if x.eps() == 1 { tau_twist_lie(&y) } else { y.clone() };
            let img = y.mul(xm).add(&xm.mul(&ty));
            let mut col = img.entries().to_vec();
            col.push(if a == b { Gf::one(f) } else { Gf::zero(f) });
            cols.push(col);
        }
    }
    let a = Matrix::from_cols(&cols).unwrap();
    a.kernel().len()
}

static FAMILY_DIMS: Mutex<Option<HashMap<JordanClassLabel, DimensionEstimate>>> = Mutex::new(None);

/// Fields used to certify a family: two consecutive degrees >= 2 admitting a member.
pub fn certification_degrees(label: &JordanClassLabel) -> Vec<u32> {
    let lo = label.min_field().max(2);
    vec![lo, lo + 1]
}

/// Orbit dimension of the members of a τ-coset family, certified by
/// centralizer point counts over two fields.
pub fn family_orbit_dim(label: &JordanClassLabel) -> Result<DimensionEstimate> {
    if let Some(d) = FAMILY_DIMS.lock().unwrap().as_ref().and_then(|m| m.get(label)) {
        return Ok(d.clone());
    }
    let degrees = certification_degrees(label);
    let reps: Vec<GroupElement> = degrees.iter().map(|&m| label.representative(m)).collect::<Result<_>>()?;
    let est = orbit_dim_by_centralizer(&reps, &degrees)?;
    FAMILY_DIMS.lock().unwrap().get_or_insert_with(HashMap::new).insert(label.clone(), est.clone());
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{families, MiddleClass};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn u1_tau() -> GroupElement {
        GroupElement::new(MiddleClass::all(3).unwrap()[1].representative(1), 1).unwrap()
    }

    #[test]
    fn sl_orders() {
        assert_eq!(sl_order(3, 1), 168);
        assert_eq!(sl_order(3, 2), 60480);
        assert_eq!(sl_order(2, 2), 60);
    }

    #[test]
    fn identity_and_tau() {
        let id = GroupElement::identity(3, 1);
        assert_eq!(orbit_dim(&id, &[1, 2]).unwrap().dim, 0);
        let tau = GroupElement::tau(3, 1);
        let est = orbit_dim(&tau, &[1, 2, 3]).unwrap();
        assert_eq!(est.dim, 5);
        for &(m, size) in &est.counts {
            let q = 1u128 << m;
            assert_eq!(size * q * (q * q - 1), sl_order(3, m));
        }
    }

    #[test]
    fn u1_tau_has_dimension_seven() {
        let est = orbit_dim(&u1_tau(), &[1, 2, 3]).unwrap();
        assert_eq!(est.dim, 7);
    }

    #[test]
    fn orbit_times_centralizer_is_group_order() {
        for x in [GroupElement::tau(3, 1), u1_tau()] {
            for m in [1, 2] {
                let orbit = orbit_size(&x, m, BFS_BUDGET).unwrap();
                let cent = centralizer_count(&x, m, 10_000_000).unwrap();
                assert_eq!(orbit * cent, sl_order(3, m));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let x = GroupElement::random(2, 2, 0, &mut rng);
            let orbit = orbit_size(&x, 2, BFS_BUDGET).unwrap();
            let cent = centralizer_count(&x, 2, 10_000_000).unwrap();
            assert_eq!(orbit * cent, sl_order(2, 2));
        }
    }

    #[test]
    fn tau_centralizer_is_sl2() {
        assert_eq!(centralizer_count(&GroupElement::tau(3, 1), 1, 1 << 20).unwrap(), 6);
        assert_eq!(centralizer_count(&GroupElement::tau(3, 1), 2, 1 << 20).unwrap(), 60);
    }

    #[test]
    fn tangent_bounds() {
        assert_eq!(tangent_dim_bound(&GroupElement::identity(3, 1)), 8);
        assert!(tangent_dim_bound(&GroupElement::tau(3, 1)) >= 3);
        let a = Gf::gen_pow(4, 1);
        let x = GroupElement::new(Matrix::diagonal(&[a, Gf::one(4), a.inv().unwrap()]), 1).unwrap();
        assert!(tangent_dim_bound(&x) >= 1);
    }

    #[test]
    fn orbit_dim_is_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = u1_tau();
        let g = GroupElement::random(3, 1, 0, &mut rng);
        let y = x.conjugate_by(&g).unwrap();
        assert_eq!(orbit_dim(&x, &[1, 2]).unwrap().dim, orbit_dim(&y, &[1, 2]).unwrap().dim);
    }

    #[test]
    fn family_dims_match_block_formula() {
        for n in 2..=4 {
            for label in families(n).unwrap() {
                let est = family_orbit_dim(&label).unwrap();
                assert_eq!(est.dim, n * n - 1 - label.centralizer_dim(), "{label:?} {est:?}");
                let rep = label.representative(label.min_field().max(2)).unwrap();
                assert!(n * n - 1 - tangent_dim_bound(&rep) <= est.dim);
            }
        }
    }
}
