//! Induced orbits `G°·(g U_P)^reg`, regular and full closures of Jordan
//! classes, necessary conditions for inclusion, and the closure poset.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classes::{class_of, dominated_by, families, JordanClassLabel, PairingType};
use crate::dimension::{family_orbit_dim, levi_centralizer_dim};
use crate::error::{Error, Result};
use crate::field::{lcm_degree, Gf};
use crate::group::{ElementJson, GroupElement};
use crate::matrix::Matrix;
use crate::torus::{eigen_blocks, reduce, LeviDescriptor};

/// Sampling knobs for induction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InduceConfig {
    pub samples: usize,
    pub field: u32,
    pub seeds: Vec<u64>,
}

impl Default for InduceConfig {
    fn default() -> Self {
        InduceConfig { samples: 64, field: 8, seeds: vec![1, 2, 3] }
    }
}

/// A G°-orbit with its invariants.
#[derive(Clone, Debug)]
pub struct OrbitDescriptor {
    pub representative: GroupElement,
    pub dimension: usize,
    /// Eigenvalues of the semisimple part as canonical keys, sorted.
    pub ss_invariant: Vec<(u32, u32)>,
    pub label: JordanClassLabel,
    /// Seed of the run that produced `representative`.
    pub seed: u64,
}

impl OrbitDescriptor {
    pub fn unip_class(&self) -> &crate::classes::UnipotentId {
        &self.label.unip
    }
}

/// Canonical eigenvalue multiset of the semisimple part of `x`.
pub fn ss_invariant(x: &GroupElement) -> Result<Vec<(u32, u32)>> {
    let r = reduce(x)?;
    let mut keys: Vec<(u32, u32)> = r.s.iter().map(|a| a.canonical_key()).collect();
    keys.sort_unstable();
    Ok(keys)
}

/// Orbit descriptor of a single element.
pub fn describe(x: &GroupElement, seed: u64) -> Result<OrbitDescriptor> {
    let label = class_of(x)?;
    let dimension = label_orbit_dim(&label)?;
    Ok(OrbitDescriptor { representative: x.clone(), dimension, ss_invariant: ss_invariant(x)?, label, seed })
}

/// Orbit dimension of members of a class (τ-coset families are certified by counts).
pub fn label_orbit_dim(label: &JordanClassLabel) -> Result<usize> {
    if label.eps == 1 && label.n <= 4 {
        Ok(family_orbit_dim(label)?.dim)
    } else {
        Ok(label.n * label.n - 1 - label.centralizer_dim())
    }
}

/// Positions `(i, j)` of the unipotent radical of the standard parabolic with Levi `levi`.
fn radical_positions(levi: &LeviDescriptor) -> Vec<(usize, usize)> {
    let b = levi.block_of();
    let mut out = Vec::new();
    for i in 0..levi.n {
        for j in i + 1..levi.n {
            if b[i] < b[j] {
                out.push((i, j));
            }
        }
    }
    out
}

fn check_parabolic(levi: &LeviDescriptor, g: &GroupElement) -> Result<()> {
    if levi.n != g.n() {
        return Err(Error::RankMismatch(levi.n, g.n()));
    }
    if !levi.is_standard() {
        return Err(Error::InvalidInput("Levi is not standard".into()));
    }
    if g.eps() == 1 {
        let sizes: Vec<usize> = levi.blocks.iter().map(Vec::len).collect();
        let rev: Vec<usize> = sizes.iter().rev().copied().collect();
        if sizes != rev {
            return Err(Error::InvalidInput("Levi is not τ-stable".into()));
        }
    }
    let b = levi.block_of();
    for i in 0..g.n() {
        for j in 0..g.n() {
            if b[i] > b[j] && !g.mat()[(i, j)].is_zero() {
                return Err(Error::InvalidInput("g does not normalize the parabolic".into()));
            }
        }
    }
    Ok(())
}

/// Random element of `U_P` (optionally of `U_P ∩ C(s)` for a diagonal `s`).
fn sample_radical(
    levi: &LeviDescriptor,
    field: u32,
    s: Option<&[Gf]>,
    rng: &mut ChaCha8Rng,
) -> GroupElement {
    let mut v = Matrix::identity(levi.n, field);
    for (i, j) in radical_positions(levi) {
        if s.is_some_and(|s| s[i] != s[j]) {
            continue;
        }
        v[(i, j)] = Gf::random(field, rng);
    }
    GroupElement::new(v, 0).unwrap()
}

fn sample_induced(
    levi: &LeviDescriptor,
    g: &GroupElement,
    cfg: &InduceConfig,
    restrict: Option<&[Gf]>,
) -> Result<OrbitDescriptor> {
    check_parabolic(levi, g)?;
    let field = lcm_degree(g.field(), cfg.field)?;
    let g = g.embed(field)?;
    let restrict: Option<Vec<Gf>> =
        restrict.map(|s| s.iter().map(|a| a.embed(field)).collect::<Result<_>>()).transpose()?;
    let mut per_seed: Vec<OrbitDescriptor> = Vec::new();
    for &seed in &cfg.seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best: Option<OrbitDescriptor> = None;
        for _ in 0..cfg.samples {
            let v = sample_radical(levi, field, restrict.as_deref(), &mut rng);
            let x = g.compose(&v)?;
            let d = describe(&x, seed)?;
            match &best {
                Some(b) if b.dimension > d.dimension => {}
                Some(b) if b.dimension == d.dimension => {
                    if b.label != d.label || b.ss_invariant != d.ss_invariant {
                        return Err(Error::SamplingInconclusive(format!(
                            "two classes of maximal dimension: {:?} and {:?}",
                            b.label, d.label
                        )));
                    }
                }
                _ => best = Some(d),
            }
        }
        per_seed.push(best.ok_or_else(|| Error::SamplingInconclusive("no samples".into()))?);
    }
    let first = per_seed[0].clone();
    if per_seed.iter().any(|d| d.dimension != first.dimension || d.label != first.label) {
        return Err(Error::SamplingInconclusive("seeds disagree on the induced orbit".into()));
    }
    Ok(first)
}

/// `Ind_{D_L}^D(L·g)`: the orbit of maximal dimension in `G°·(g U_P)`.
pub fn induce(levi: &LeviDescriptor, g: &GroupElement, cfg: &InduceConfig) -> Result<OrbitDescriptor> {
    sample_induced(levi, g, cfg, None)
}

/// Factorization of the induced orbit through `G^{s°}`: returns `s = g_s` and the
/// induced orbit obtained by sampling only in `U_P ∩ C(s)`.
pub fn reduce_to_unipotent(
    levi: &LeviDescriptor,
    g: &GroupElement,
    cfg: &InduceConfig,
) -> Result<(GroupElement, OrbitDescriptor)> {
    let s = g.jordan_decompose().s;
    if !s.mat().is_diagonal() {
        return Err(Error::InvalidInput("semisimple part of g is not diagonal".into()));
    }
    let d = sample_induced(levi, g, cfg, Some(&s.mat().diag()))?;
    Ok((s, d))
}

/// Codimension of `L·g` in `D_L` and of the induced orbit in `D`, certified over
/// the given fields, with the equality flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodimReport {
    pub codim_l: usize,
    pub codim_d: usize,
    pub equal: bool,
}

/// `codim_L = dim C_L(g)` and `codim_D = dim C_G(Ind)`; representatives of `g`
/// over two fields are passed in `reps` for the Levi count.
pub fn codim_check(
    levi: &LeviDescriptor,
    reps: &[GroupElement],
    degrees: &[u32],
    cfg: &InduceConfig,
) -> Result<CodimReport> {
    let n = levi.n;
    let g = &reps[0];
    let codim_l = levi_centralizer_dim(levi, reps, degrees)?.dim;
    let ind = induce(levi, g, cfg)?;
    let codim_d = n * n - 1 - ind.dimension;
    Ok(CodimReport { codim_l, codim_d, equal: codim_l == codim_d })
}

/// Field degree dividing the sampling degree that admits a representative.
pub fn sampling_degree(label: &JordanClassLabel, cfg: &InduceConfig) -> u32 {
    let need = label.min_field();
    (1..=cfg.field).filter(|d| cfg.field.is_multiple_of(*d)).find(|&d| d >= need).unwrap_or(cfg.field)
}

/// Coincidence patterns of `r` torus parameters: `(class, sign)` per block with
/// class 0 meaning "equal to 1"; classes are numbered in order of first use.
fn coincidence_patterns(r: usize) -> Vec<Vec<(usize, bool)>> {
    let mut out = vec![(Vec::new(), 0usize)];
    for _ in 0..r {
        let mut next = Vec::new();
        for (prefix, used) in &out {
            let mut push = |entry: (usize, bool), used: usize| {
                let mut p: Vec<(usize, bool)> = prefix.clone();
                p.push(entry);
                next.push((p, used));
            };
            push((0, true), *used);
            for c in 1..=*used {
                push((c, true), *used);
                push((c, false), *used);
            }
            push((used + 1, true), used + 1);
        }
        out = next;
    }
    out.into_iter().map(|(p, _)| p).collect()
}

/// A pattern-realizing translate `z·g` of the reduced representative `g` of a family.
fn pattern_translate(
    label: &JordanClassLabel,
    g: &GroupElement,
    pattern: &[(usize, bool)],
    cfg: &InduceConfig,
) -> Result<GroupElement> {
    let n = label.n;
    let classes = pattern.iter().map(|p| p.0).max().unwrap_or(0);
    let field = (1..=cfg.field)
        .filter(|d| cfg.field.is_multiple_of(*d) && d % g.field() == 0)
        .find(|&d| ((1u64 << d) - 2) / 2 >= classes as u64)
        .map_or_else(|| lcm_degree(g.field(), 4), Ok)?;
    let g = g.embed(field)?;
    let values = distinct_pair_values(classes, field)?;
    let d = g.mat().diag();
    let mut z = vec![Gf::one(field); n];
    let mut pos = 0;
    for (k, p) in label.unip.partitions.iter().enumerate() {
        let h: usize = p.iter().sum();
        let (class, plus) = pattern[k];
        let target = if class == 0 {
            Gf::one(field)
        } else if plus {
            values[class - 1]
        } else {
            values[class - 1].inv()?
        };
        let zk = target * d[pos].inv()?;
        for i in pos..pos + h {
            z[i] = zk;
            z[n - 1 - i] = zk.inv()?;
        }
        pos += h;
    }
    GroupElement::new(Matrix::diagonal(&z), 0)?.compose(&g)
}

fn distinct_pair_values(count: usize, field: u32) -> Result<Vec<Gf>> {
    let mut out: Vec<Gf> = Vec::new();
    for k in 1..(1u64 << field) - 1 {
        if out.len() == count {
            break;
        }
        let a = Gf::gen_pow(field, k);
        if a.is_one() || crate::group::pair_rep(a) != a || out.iter().any(|&b| b == a || b == a.inv().unwrap()) {
            continue;
        }
        out.push(a);
    }
    if out.len() < count {
        return Err(Error::InvalidInput("not enough eigenvalues for the pattern".into()));
    }
    Ok(out)
}

/// One induced orbit per coincidence pattern of `T(g)`.
#[derive(Clone, Debug)]
pub struct PatternInduction {
    pub pattern: Vec<(usize, bool)>,
    pub orbit: OrbitDescriptor,
}

/// `∪_{z ∈ T(g)} Ind_{D_L}^D(L·zg)` as one induced orbit per coincidence pattern.
pub fn regular_closure_orbits(label: &JordanClassLabel, cfg: &InduceConfig) -> Result<Vec<PatternInduction>> {
    if label.eps != 1 {
        return Err(Error::InvalidInput("regular closures are computed for the τ-coset".into()));
    }
    let g = label.representative(sampling_degree(label, cfg))?;
    let mut out = Vec::new();
    for pattern in coincidence_patterns(label.pair_count()) {
        let zg = pattern_translate(label, &g, &pattern, cfg)?;
        let orbit = induce(&label.levi, &zg, cfg)?;
        out.push(PatternInduction { pattern, orbit });
    }
    Ok(out)
}

/// Jordan classes meeting the regular closure of `label`.
pub fn regular_closure(label: &JordanClassLabel, cfg: &InduceConfig) -> Result<Vec<JordanClassLabel>> {
    let set: BTreeSet<JordanClassLabel> =
        regular_closure_orbits(label, cfg)?.into_iter().map(|p| p.orbit.label).collect();
    Ok(set.into_iter().collect())
}

/// Whether `lower` is a degeneration of `upper` with the same semisimple pattern:
/// pair-block partitions dominated blockwise and a smaller middle class.
pub fn unipotent_degeneration(lower: &JordanClassLabel, upper: &JordanClassLabel) -> bool {
    if lower.n != upper.n || lower.eps != upper.eps || lower.eigen_pattern != upper.eigen_pattern {
        return false;
    }
    let parts_ok = lower
        .unip
        .partitions
        .iter()
        .zip(&upper.unip.partitions)
        .all(|(a, b)| dominated_by(a, b));
    let mid_ok = match (&lower.unip.middle, &upper.unip.middle) {
        (Some(a), Some(b)) => a.le(b),
        (None, None) => true,
        _ => false,
    };
    parts_ok && mid_ok
}

/// Regular closure plus the unipotent degenerations of its members.
pub fn full_closure(label: &JordanClassLabel, cfg: &InduceConfig) -> Result<Vec<JordanClassLabel>> {
    let reg = regular_closure(label, cfg)?;
    let all = families(label.n)?;
    let mut set: BTreeSet<JordanClassLabel> = reg.iter().cloned().collect();
    for r in &reg {
        for f in &all {
            if unipotent_degeneration(f, r) {
                set.insert(f.clone());
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// Block sizes of `C(s)°` for a τ-coset label: each pair block twice, the middle once.
fn centralizer_blocks(label: &JordanClassLabel) -> Vec<usize> {
    let mut out = Vec::new();
    for &(h, p) in &label.eigen_pattern {
        match p {
            PairingType::Paired => {
                out.push(h);
                out.push(h);
            }
            _ => out.push(h),
        }
    }
    out.sort_unstable();
    out
}

/// Whether the multiset `fine` can be grouped into parts summing to `coarse`.
fn groups_into(fine: &[usize], coarse: &[usize]) -> bool {
    fn rec(fine: &[usize], bins: &mut Vec<usize>) -> bool {
        let Some((&x, rest)) = fine.split_first() else { return bins.iter().all(|&b| b == 0) };
        for i in 0..bins.len() {
            if bins[i] >= x && (i == 0 || bins[i] != bins[i - 1]) {
                bins[i] -= x;
                let ok = rec(rest, bins);
                bins[i] += x;
                if ok {
                    return true;
                }
            }
        }
        false
    }
    let mut fine = fine.to_vec();
    fine.sort_unstable_by(|a, b| b.cmp(a));
    let mut bins = coarse.to_vec();
    bins.sort_unstable();
    fine.iter().sum::<usize>() == bins.iter().sum::<usize>() && rec(&fine, &mut bins)
}

/// The three necessary conditions for `J1 ⊆ closure(J2)^reg`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecessaryConditions {
    pub a_ok: bool,
    pub b_ok: bool,
    pub c_ok: bool,
}

/// Evaluates the conditions: (a) J1 is induced from some pattern of T(J2);
/// (b) the semisimple pattern of J1 is a degeneration of J2's torus coset;
/// (c) the centralizer blocks of J2 group into those of J1.
pub fn check_necessary(
    j1: &JordanClassLabel,
    j2: &JordanClassLabel,
    cfg: &InduceConfig,
) -> Result<NecessaryConditions> {
    let orbits = regular_closure_orbits(j2, cfg)?;
    let a_ok = orbits.iter().any(|p| &p.orbit.label == j1);
    let b_ok = j1.t_lattice.rank() <= j2.t_lattice.rank()
        && orbits.iter().any(|p| p.orbit.label.eigen_pattern == j1.eigen_pattern);
    let c_ok = groups_into(&centralizer_blocks(j2), &centralizer_blocks(j1));
    Ok(NecessaryConditions { a_ok, b_ok, c_ok })
}

/// A strict relation `lower ⊂ closure(upper)^reg` with a sampled witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetEdge {
    pub lower: JordanClassLabel,
    pub upper: JordanClassLabel,
    pub witness: ElementJson,
    pub seed: u64,
}

/// The closure poset of the families of G°τ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poset {
    pub n: usize,
    pub nodes: Vec<JordanClassLabel>,
    pub edges: Vec<PosetEdge>,
    /// Indices into `edges` forming the transitive reduction.
    pub hasse: Vec<usize>,
}

/// All strict relations among the families, by regular-closure membership.
pub fn poset(n: usize, cfg: &InduceConfig) -> Result<Poset> {
    let nodes = families(n)?;
    let mut edges = Vec::new();
    for upper in &nodes {
        for p in regular_closure_orbits(upper, cfg)? {
            let lower = p.orbit.label.clone();
            if &lower != upper && !edges.iter().any(|e: &PosetEdge| e.lower == lower && &e.upper == upper) {
                edges.push(PosetEdge {
                    lower,
                    upper: upper.clone(),
                    witness: p.orbit.representative.to_json(),
                    seed: p.orbit.seed,
                });
            }
        }
    }
    let hasse = transitive_reduction(&nodes, &edges);
    Ok(Poset { n, nodes, edges, hasse })
}

fn transitive_reduction(nodes: &[JordanClassLabel], edges: &[PosetEdge]) -> Vec<usize> {
    let idx = |l: &JordanClassLabel| nodes.iter().position(|x| x == l).unwrap();
    let k = nodes.len();
    let mut rel = vec![vec![false; k]; k];
    for e in edges {
        rel[idx(&e.lower)][idx(&e.upper)] = true;
    }
    (0..edges.len())
        .filter(|&i| {
            let (a, b) = (idx(&edges[i].lower), idx(&edges[i].upper));
            !(0..k).any(|c| c != a && c != b && rel[a][c] && rel[c][b])
        })
        .collect()
}

impl Poset {
    /// Whether the relation is antisymmetric and transitive.
    pub fn is_partial_order(&self) -> bool {
        let rel = |a: &JordanClassLabel, b: &JordanClassLabel| {
            self.edges.iter().any(|e| &e.lower == a && &e.upper == b)
        };
        for a in &self.nodes {
            for b in &self.nodes {
                if a != b && rel(a, b) && rel(b, a) {
                    return false;
                }
                for c in &self.nodes {
                    if rel(a, b) && rel(b, c) && a != c && !rel(a, c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Hasse diagram in DOT, edges directed lower → upper.
    pub fn to_dot(&self) -> String {
        let id = |l: &JordanClassLabel| self.nodes.iter().position(|x| x == l).unwrap();
        let mut s = format!("digraph poset_n{} {{\n  rankdir=BT;\n", self.n);
        for (i, l) in self.nodes.iter().enumerate() {
            s.push_str(&format!("  c{i} [label=\"{}\"];\n", l.name()));
        }
        for &e in &self.hasse {
            let edge = &self.edges[e];
            s.push_str(&format!("  c{} -> c{};\n", id(&edge.lower), id(&edge.upper)));
        }
        s.push_str("}\n");
        s
    }
}

/// Labels whose eigenvalue coincidences arise from the torus coset of `label`.
pub fn degenerate_patterns(label: &JordanClassLabel, cfg: &InduceConfig) -> Result<Vec<Vec<(usize, PairingType)>>> {
    let set: BTreeSet<Vec<(usize, PairingType)>> = regular_closure_orbits(label, cfg)?
        .into_iter()
        .map(|p| p.orbit.label.eigen_pattern)
        .collect();
    Ok(set.into_iter().collect())
}

/// Block structure of `C(s)°` for a diagonal `s`, as a Levi descriptor.
pub fn semisimple_blocks(s: &[Gf], tau_compatible: bool) -> LeviDescriptor {
    LeviDescriptor { n: s.len(), blocks: eigen_blocks(s), tau_compatible }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::MiddleClass;

    fn by_name(n: usize, name: &str) -> JordanClassLabel {
        families(n).unwrap().into_iter().find(|l| l.name() == name).unwrap()
    }

    fn cfg() -> InduceConfig {
        InduceConfig { samples: 24, field: 8, seeds: vec![1, 2] }
    }

    #[test]
    fn induction_from_g_itself() {
        let tau = GroupElement::tau(3, 1);
        let d = induce(&LeviDescriptor::whole(3, true), &tau, &cfg()).unwrap();
        assert_eq!(d.label.name(), "J(tau)");
        assert_eq!(d.dimension, 5);
    }

    #[test]
    fn tau_induces_u1_tau_from_the_torus() {
        let tau = GroupElement::tau(3, 1);
        let d = induce(&LeviDescriptor::torus(3, true), &tau, &cfg()).unwrap();
        assert_eq!(d.label.name(), "J(u1 tau)");
        assert_eq!(d.dimension, 7);
        assert_ne!(d.label, class_of(&tau).unwrap());
        let (s, w) = reduce_to_unipotent(&LeviDescriptor::torus(3, true), &tau, &cfg()).unwrap();
        assert!(s.is_identity());
        assert_eq!(w.label, d.label);
    }

    #[test]
    fn radical_cosets_keep_the_semisimple_part() {
        let label = by_name(3, "J(t tau)");
        let g = label.representative(2).unwrap().embed(8).unwrap();
        let want = ss_invariant(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let v = sample_radical(&LeviDescriptor::torus(3, true), 8, None, &mut rng);
            assert_eq!(ss_invariant(&g.compose(&v).unwrap()).unwrap(), want);
        }
    }

    #[test]
    fn induction_is_a_single_orbit() {
        let tau = GroupElement::tau(3, 1);
        let a = induce(&LeviDescriptor::torus(3, true), &tau, &InduceConfig { seeds: vec![7], ..cfg() }).unwrap();
        let b = induce(&LeviDescriptor::torus(3, true), &tau, &InduceConfig { seeds: vec![8], ..cfg() }).unwrap();
        assert_eq!((a.dimension, a.ss_invariant, a.label), (b.dimension, b.ss_invariant, b.label));
    }

    #[test]
    fn closures_for_n3() {
        let t = by_name(3, "J(t tau)");
        let u = by_name(3, "J(u1 tau)");
        let tau = by_name(3, "J(tau)");
        let reg = regular_closure(&t, &cfg()).unwrap();
        assert_eq!(reg.iter().collect::<BTreeSet<_>>(), [&t, &u].into_iter().collect());
        assert_eq!(regular_closure(&u, &cfg()).unwrap(), vec![u.clone()]);
        assert_eq!(regular_closure(&tau, &cfg()).unwrap(), vec![tau.clone()]);
        assert_eq!(full_closure(&t, &cfg()).unwrap().len(), 3);
        assert_eq!(full_closure(&tau, &cfg()).unwrap(), vec![tau.clone()]);
    }

    #[test]
    fn necessary_conditions_for_n3() {
        let t = by_name(3, "J(t tau)");
        let u = by_name(3, "J(u1 tau)");
        let tau = by_name(3, "J(tau)");
        let c = check_necessary(&u, &t, &cfg()).unwrap();
        assert!(c.a_ok && c.b_ok && c.c_ok);
        assert!(!check_necessary(&tau, &t, &cfg()).unwrap().a_ok);
        for j in [&t, &u, &tau] {
            let c = check_necessary(j, j, &cfg()).unwrap();
            assert!(c.a_ok && c.b_ok && c.c_ok);
        }
    }

    #[test]
    fn poset_for_n3_has_one_edge() {
        let p = poset(3, &cfg()).unwrap();
        assert_eq!(p.edges.len(), 1);
        assert_eq!(p.edges[0].lower.name(), "J(u1 tau)");
        assert_eq!(p.edges[0].upper.name(), "J(t tau)");
        assert!(p.is_partial_order());
        let w = GroupElement::from_json(&p.edges[0].witness).unwrap();
        assert_eq!(class_of(&w).unwrap(), p.edges[0].lower);
        let dot = p.to_dot();
        assert!(dot.starts_with("digraph") && dot.contains("->"));
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<Poset>(&json).unwrap(), p);
    }

    #[test]
    fn poset_for_n2() {
        let p = poset(2, &cfg()).unwrap();
        assert!(p.is_partial_order());
        let names: Vec<(String, String)> =
            p.edges.iter().map(|e| (e.lower.name(), e.upper.name())).collect();
        assert_eq!(names, vec![("J(u1 tau)".to_string(), "J(t)".to_string())]);
    }

    #[test]
    fn codimension_is_preserved_for_n3() {
        let tau3 = |m| GroupElement::tau(3, m);
        let r = codim_check(&LeviDescriptor::torus(3, true), &[tau3(2), tau3(3)], &[2, 3], &cfg()).unwrap();
        assert_eq!((r.codim_l, r.codim_d), (1, 1));
        let r = codim_check(&LeviDescriptor::whole(3, true), &[tau3(2), tau3(3)], &[2, 3], &cfg()).unwrap();
        assert_eq!((r.codim_l, r.codim_d), (3, 3));
    }

    #[test]
    fn pattern_enumeration() {
        assert_eq!(coincidence_patterns(0).len(), 1);
        assert_eq!(coincidence_patterns(1).len(), 2);
        assert_eq!(coincidence_patterns(2).len(), 6);
        assert!(groups_into(&[1, 1, 1], &[3]));
        assert!(groups_into(&[1, 1, 2], &[2, 2]));
        assert!(!groups_into(&[2, 2], &[3, 1]));
        assert!(MiddleClass::all(3).unwrap()[0].le(&MiddleClass::all(3).unwrap()[1]));
    }
}
