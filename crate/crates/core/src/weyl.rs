//! Weyl groups of type A and B as permutation groups: character tables by the
//! Murnaghan-Nakayama rule, b-invariants, truncated induction, and the fixed
//! points of the flip `w ↦ w0 w w0` on S_n.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::classes::partitions;
use crate::error::{Error, Result};

/// A permutation of `0..len`, `p[i]` the image of `i`.
pub type Perm = Vec<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupKind {
    Symmetric(usize),
    Hyperoctahedral(usize),
}

/// Irreducible representation of S_n (a partition, `(n)` trivial) or of B_k
/// (a bipartition `(α, β)`, `((k), ∅)` trivial, `(∅, (1^k))` sign).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IrrLabel {
    Symmetric(Vec<usize>),
    Hyperoctahedral(Vec<usize>, Vec<usize>),
}

fn is_partition(p: &[usize]) -> bool {
    p.iter().all(|&x| x > 0) && p.windows(2).all(|w| w[0] >= w[1])
}

fn part_string(p: &[usize]) -> String {
    p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl IrrLabel {
    pub fn kind(&self) -> GroupKind {
        match self {
            IrrLabel::Symmetric(l) => GroupKind::Symmetric(l.iter().sum()),
            IrrLabel::Hyperoctahedral(a, b) => GroupKind::Hyperoctahedral(a.iter().sum::<usize>() + b.iter().sum::<usize>()),
        }
    }

    pub fn is_valid(&self) -> bool {
        match self {
            IrrLabel::Symmetric(l) => is_partition(l),
            IrrLabel::Hyperoctahedral(a, b) => is_partition(a) && is_partition(b),
        }
    }

    pub fn trivial(kind: GroupKind) -> IrrLabel {
        let row = |k: usize| if k == 0 { vec![] } else { vec![k] };
        match kind {
            GroupKind::Symmetric(n) => IrrLabel::Symmetric(row(n)),
            GroupKind::Hyperoctahedral(k) => IrrLabel::Hyperoctahedral(row(k), vec![]),
        }
    }

    pub fn sign(kind: GroupKind) -> IrrLabel {
        match kind {
            GroupKind::Symmetric(n) => IrrLabel::Symmetric(vec![1; n]),
            GroupKind::Hyperoctahedral(k) => IrrLabel::Hyperoctahedral(vec![], vec![1; k]),
        }
    }
}

impl fmt::Display for IrrLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrLabel::Symmetric(l) => write!(f, "({})", part_string(l)),
            IrrLabel::Hyperoctahedral(a, b) => write!(f, "(({}),({}))", part_string(a), part_string(b)),
        }
    }
}

/// `n(λ) = Σ (i-1) λ_i`.
pub fn n_of(p: &[usize]) -> usize {
    p.iter().enumerate().map(|(i, x)| i * x).sum()
}

/// b-invariant: `n(λ)` for S_n and `2n(α) + 2n(β) + |β|` for B_k.
pub fn b_invariant(label: &IrrLabel) -> usize {
    match label {
        IrrLabel::Symmetric(l) => n_of(l),
        IrrLabel::Hyperoctahedral(a, b) => 2 * n_of(a) + 2 * n_of(b) + b.iter().sum::<usize>(),
    }
}

/// Conjugacy class of an element of S_n (cycle type) or B_k (positive and
/// negative cycle types), parts in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassKey {
    Cycle(Vec<usize>),
    Signed(Vec<usize>, Vec<usize>),
}

/// Partitions obtained by removing a rim hook of length `l`, with sign `(-1)^height`.
fn rim_hooks(p: &[usize], l: usize) -> Vec<(Vec<usize>, i64)> {
    let len = p.len();
    let beta: Vec<usize> = p.iter().enumerate().map(|(i, &x)| x + len - 1 - i).collect();
    let mut out = Vec::new();
    for (i, &b) in beta.iter().enumerate() {
        if b < l || beta.contains(&(b - l)) {
            continue;
        }
        let between = beta.iter().filter(|&&c| c > b - l && c < b).count();
        let mut nb = beta.clone();
        nb[i] = b - l;
        nb.sort_unstable_by(|x, y| y.cmp(x));
        let q: Vec<usize> = nb.iter().enumerate().map(|(j, &c)| c - (len - 1 - j)).filter(|&x| x > 0).collect();
        out.push((q, if between % 2 == 0 { 1 } else { -1 }));
    }
    out
}

fn sym_char(p: &[usize], cycles: &[usize]) -> i64 {
    match cycles.split_first() {
        None => i64::from(p.is_empty()),
        Some((&l, rest)) => rim_hooks(p, l).into_iter().map(|(q, s)| s * sym_char(&q, rest)).sum(),
    }
}

fn hyp_char(a: &[usize], b: &[usize], pos: &[usize], neg: &[usize]) -> i64 {
    let (l, sign, pos, neg) = match (pos.split_first(), neg.split_first()) {
        (Some((&l, rest)), _) => (l, 1, rest, neg),
        (None, Some((&l, rest))) => (l, -1, pos, rest),
        (None, None) => return i64::from(a.is_empty() && b.is_empty()),
    };
    let mut v = 0;
    for (q, s) in rim_hooks(a, l) {
        v += s * hyp_char(&q, b, pos, neg);
    }
    for (q, s) in rim_hooks(b, l) {
        v += sign * s * hyp_char(a, &q, pos, neg);
    }
    v
}

/// Character value of an irreducible at a conjugacy class.
pub fn char_value(label: &IrrLabel, class: &ClassKey) -> Result<i64> {
    match (label, class) {
        (IrrLabel::Symmetric(p), ClassKey::Cycle(c)) => Ok(sym_char(p, c)),
        (IrrLabel::Hyperoctahedral(a, b), ClassKey::Signed(pos, neg)) => Ok(hyp_char(a, b, pos, neg)),
        _ => Err(Error::InvalidInput(format!("{label} evaluated on {class:?}"))),
    }
}

/// All irreducible labels of a group kind.
pub fn irreducibles(kind: GroupKind) -> Vec<IrrLabel> {
    match kind {
        GroupKind::Symmetric(n) => partitions(n).into_iter().map(IrrLabel::Symmetric).collect(),
        GroupKind::Hyperoctahedral(k) => {
            let mut out = Vec::new();
            for i in (0..=k).rev() {
                for a in partitions(i) {
                    for b in partitions(k - i) {
                        out.push(IrrLabel::Hyperoctahedral(a.clone(), b));
                    }
                }
            }
            out
        }
    }
}

/// Cycle type of `g` restricted to the invariant set `points`.
fn cycle_type_on(g: &Perm, points: &[usize]) -> Vec<usize> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &p in points {
        if seen.contains(&p) {
            continue;
        }
        let mut len = 0;
        let mut x = p;
        while seen.insert(x) {
            len += 1;
            x = g[x];
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Signed cycle type of `g` on `points`, where `points[i]` and
/// `points[len-1-i]` form a pair swapped by the flip.
fn signed_type_on(g: &Perm, points: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let k = points.len() / 2;
    let local: HashMap<usize, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let pair = |j: usize| j.min(points.len() - 1 - j);
    let mut seen = vec![false; k];
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        loop {
            seen[pair(j)] = true;
            len += 1;
            j = local[&g[points[j]]];
            if pair(j) == start {
                break;
            }
        }
        if j == start {
            pos.push(len);
        } else {
            neg.push(len);
        }
    }
    pos.sort_unstable_by(|a, b| b.cmp(a));
    neg.sort_unstable_by(|a, b| b.cmp(a));
    (pos, neg)
}

fn all_perms(k: usize) -> Vec<Perm> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(k - 1) {
        for i in 0..k {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

/// Elements of B_k as permutations of `0..2k` commuting with `i ↦ 2k-1-i`.
fn signed_perms(k: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    for p in all_perms(k) {
        for signs in 0..1u32 << k {
            let mut g = vec![0; 2 * k];
            for i in 0..k {
                let (up, down) = (p[i], 2 * k - 1 - p[i]);
                let flip = signs >> i & 1 == 1;
                g[i] = if flip { down } else { up };
                g[2 * k - 1 - i] = if flip { up } else { down };
            }
            out.push(g);
        }
    }
    out
}

/// A direct factor of a reflection group acting on a subset of points.
///
/// `Symmetric(h)` permutes `points`; if `mirrored`, it acts simultaneously on
/// the flipped points `degree-1-p`. `Hyperoctahedral(k)` acts on `2k` points
/// closed under the flip, paired as `points[i] ↔ points[2k-1-i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub kind: GroupKind,
    pub points: Vec<usize>,
    pub mirrored: bool,
}

/// A product of type A and B factors with disjoint supports, as a
/// permutation group on `0..degree`.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub degree: usize,
    pub factors: Vec<Factor>,
    elements: Vec<Perm>,
    classes: Vec<(Vec<ClassKey>, Perm, usize)>,
}

impl WeylGroup {
    pub fn new(degree: usize, factors: Vec<Factor>) -> Result<WeylGroup> {
        let mut used = HashSet::new();
        for f in &factors {
            let ok = match f.kind {
                GroupKind::Symmetric(h) => f.points.len() == h,
                GroupKind::Hyperoctahedral(k) => f.points.len() == 2 * k && !f.mirrored,
            };
            let mut support = f.points.clone();
            if f.mirrored {
                support.extend(f.points.iter().map(|&p| degree - 1 - p));
            }
            if !ok || support.iter().any(|&p| p >= degree || !used.insert(p)) {
                return Err(Error::InvalidInput(format!("bad factor {f:?}")));
            }
        }
        let mut elements: Vec<Perm> = vec![(0..degree).collect()];
        for f in &factors {
            let local: Vec<Perm> = match f.kind {
                GroupKind::Symmetric(h) => all_perms(h),
                GroupKind::Hyperoctahedral(k) => signed_perms(k),
            };
            let mut next = Vec::with_capacity(elements.len() * local.len());
            for g in &elements {
                for l in &local {
                    let mut h = g.clone();
                    for (i, &p) in f.points.iter().enumerate() {
                        h[p] = f.points[l[i]];
                        if f.mirrored {
                            h[degree - 1 - p] = degree - 1 - f.points[l[i]];
                        }
                    }
                    next.push(h);
                }
            }
            elements = next;
        }
        let mut grouped: BTreeMap<Vec<ClassKey>, (Perm, usize)> = BTreeMap::new();
        let mut w = WeylGroup { degree, factors, elements: Vec::new(), classes: Vec::new() };
        for g in &elements {
            let e = grouped.entry(w.class_key(g)).or_insert_with(|| (g.clone(), 0));
            e.1 += 1;
        }
        w.classes = grouped.into_iter().map(|(k, (g, s))| (k, g, s)).collect();
        w.elements = elements;
        Ok(w)
    }

    /// The whole group S_n on `0..n` or B_k on `0..2k`.
    pub fn full(kind: GroupKind) -> Result<WeylGroup> {
        match kind {
            GroupKind::Symmetric(n) => {
                WeylGroup::new(n, vec![Factor { kind, points: (0..n).collect(), mirrored: false }])
            }
            GroupKind::Hyperoctahedral(k) => {
                WeylGroup::new(2 * k, vec![Factor { kind, points: (0..2 * k).collect(), mirrored: false }])
            }
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn kinds(&self) -> Vec<GroupKind> {
        self.factors.iter().map(|f| f.kind).collect()
    }

    /// Class of `g` in each factor.
    pub fn class_key(&self, g: &Perm) -> Vec<ClassKey> {
        self.factors
            .iter()
            .map(|f| match f.kind {
                GroupKind::Symmetric(_) => ClassKey::Cycle(cycle_type_on(g, &f.points)),
                GroupKind::Hyperoctahedral(_) => {
                    let (p, n) = signed_type_on(g, &f.points);
                    ClassKey::Signed(p, n)
                }
            })
            .collect()
    }

    /// Conjugacy classes with a representative and their size.
    pub fn classes(&self) -> &[(Vec<ClassKey>, Perm, usize)] {
        &self.classes
    }

    /// Irreducibles as one label per factor.
    pub fn irreducibles(&self) -> Vec<Vec<IrrLabel>> {
        let mut out = vec![Vec::new()];
        for f in &self.factors {
            let mut next = Vec::new();
            for prefix in &out {
                for l in irreducibles(f.kind) {
                    let mut p = prefix.clone();
                    p.push(l);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }

    pub fn character(&self, labels: &[IrrLabel], g: &Perm) -> Result<i64> {
        self.character_at(labels, &self.class_key(g))
    }

    fn character_at(&self, labels: &[IrrLabel], key: &[ClassKey]) -> Result<i64> {
        if labels.len() != self.factors.len() {
            return Err(Error::InvalidInput("one label per factor expected".into()));
        }
        let mut v = 1;
        for ((l, f), k) in labels.iter().zip(&self.factors).zip(key) {
            if l.kind() != f.kind || !l.is_valid() {
                return Err(Error::InvalidInput(format!("{l} is not an irreducible of {:?}", f.kind)));
            }
            v *= char_value(l, k)?;
        }
        Ok(v)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.elements.iter().any(|h| h == g)
    }
}

/// Sum of the b-invariants of the factor labels.
pub fn b_invariant_of(labels: &[IrrLabel]) -> usize {
    labels.iter().map(b_invariant).sum()
}

/// One row of a character table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WCharacter {
    pub label: IrrLabel,
    pub values: Vec<i64>,
    pub b_invariant: usize,
}

impl WCharacter {
    pub fn degree(&self) -> i64 {
        self.values[0]
    }
}

/// Character table: classes (identity first) with sizes, and rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharTable {
    pub kind: GroupKind,
    pub order: usize,
    pub classes: Vec<(ClassKey, usize)>,
    pub rows: Vec<WCharacter>,
}

/// Full character table of S_n (n ≤ 6) or B_k (k ≤ 3).
pub fn char_table(kind: GroupKind) -> Result<CharTable> {
    match kind {
        GroupKind::Symmetric(n) if n <= 6 => {}
        GroupKind::Hyperoctahedral(k) if k <= 3 => {}
        _ => return Err(Error::UnsupportedSize(format!("{kind:?}"))),
    }
    let w = WeylGroup::full(kind)?;
    let mut classes: Vec<(ClassKey, usize)> = w.classes().iter().map(|(k, _, s)| (k[0].clone(), *s)).collect();
    let id = w.class_key(&(0..w.degree).collect())[0].clone();
    classes.sort_by_key(|(k, _)| k != &id);
    let rows = irreducibles(kind)
        .into_iter()
        .map(|label| {
            let values = classes.iter().map(|(k, _)| char_value(&label, k)).collect::<Result<Vec<_>>>()?;
            Ok(WCharacter { b_invariant: b_invariant(&label), label, values })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CharTable { kind, order: w.order(), classes, rows })
}

impl CharTable {
    /// Class-weighted inner product of two rows.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> Ratio<i64> {
        let s: i64 = self.classes.iter().zip(a.iter().zip(b)).map(|((_, size), (x, y))| *size as i64 * x * y).sum();
        Ratio::new(s, self.order as i64)
    }
}

/// Multiplicities of the irreducibles of `ambient` in the character induced
/// from `labels` on `sub`.
pub fn induce_character(sub: &WeylGroup, ambient: &WeylGroup, labels: &[IrrLabel]) -> Result<Vec<(Vec<IrrLabel>, Ratio<i64>)>> {
    if sub.degree != ambient.degree {
        return Err(Error::InvalidInput("groups act on different point sets".into()));
    }
    let ambient_set: HashSet<&Perm> = ambient.elements.iter().collect();
    if !sub.elements.iter().all(|h| ambient_set.contains(h)) {
        return Err(Error::InvalidInput("not a subgroup".into()));
    }
    let mut chi: HashMap<&Perm, i64> = HashMap::new();
    for h in &sub.elements {
        chi.insert(h, sub.character(labels, h)?);
    }
    let inv = |x: &Perm| {
        let mut y = vec![0; x.len()];
        for (i, &j) in x.iter().enumerate() {
            y[j] = i;
        }
        y
    };
    let mut ind: Vec<Ratio<i64>> = Vec::new();
    for (_, g, _) in &ambient.classes {
        let mut s = 0;
        for x in &ambient.elements {
            let xi = inv(x);
            let c: Perm = (0..g.len()).map(|i| x[g[xi[i]]]).collect();
            s += chi.get(&c).copied().unwrap_or(0);
        }
        ind.push(Ratio::new(s, sub.order() as i64));
    }
    let mut out = Vec::new();
    for psi in ambient.irreducibles() {
        let mut m = Ratio::from_integer(0);
        for ((key, _, size), v) in ambient.classes.iter().zip(&ind) {
            m += *v * Ratio::from_integer(*size as i64 * ambient.character_at(&psi, key)?);
        }
        m /= Ratio::from_integer(ambient.order() as i64);
        if m != Ratio::from_integer(0) {
            out.push((psi, m));
        }
    }
    Ok(out)
}

/// Truncated induction: the unique constituent of the induced character whose
/// b-invariant equals that of `labels`.
pub fn j_induce(sub: &WeylGroup, ambient: &WeylGroup, labels: &[IrrLabel]) -> Result<Vec<IrrLabel>> {
    let b = b_invariant_of(labels);
    let constituents = induce_character(sub, ambient, labels)?;
    let hits: Vec<&(Vec<IrrLabel>, Ratio<i64>)> =
        constituents.iter().filter(|(psi, _)| b_invariant_of(psi) == b).collect();
    match hits.as_slice() {
        [(psi, m)] if *m == Ratio::from_integer(1) => Ok(psi.clone()),
        [] => Err(Error::ConsistencyFailure(format!("no constituent with b = {b}"))),
        _ => Err(Error::NonUniqueTruncation(format!("{} constituents with b = {b}", hits.len()))),
    }
}

/// `W^D` inside S_n as the centralizer of `w0`, with its identification with B_k.
#[derive(Clone, Debug)]
pub struct FixedWeylGroup {
    pub n: usize,
    pub k: usize,
    /// Elements of S_n commuting with `w0`.
    pub elements: Vec<Perm>,
    /// The same elements as permutations of `0..2k` (middle point dropped).
    pub signed: Vec<Perm>,
    /// Fusion of B_k classes into S_n classes.
    pub fusion: BTreeMap<ClassKey, ClassKey>,
}

/// Position in `0..2k` of a non-central index of `0..n`.
pub fn drop_center(n: usize, i: usize) -> usize {
    if n % 2 == 1 && i > n / 2 {
        i - 1
    } else {
        i
    }
}

pub fn fixed_weyl_group(n: usize) -> Result<FixedWeylGroup> {
    if n < 2 {
        return Err(Error::UnsupportedRank(n));
    }
    let k = n / 2;
    let w0: Perm = (0..n).rev().collect();
    let elements: Vec<Perm> = all_perms(n)
        .into_iter()
        .filter(|g| (0..n).all(|i| g[w0[i]] == w0[g[i]]))
        .collect();
    let signed: Vec<Perm> = elements
        .iter()
        .map(|g| (0..n).filter(|&i| !(n % 2 == 1 && i == k)).map(|i| drop_center(n, g[i])).collect())
        .collect();
    let bk = WeylGroup::full(GroupKind::Hyperoctahedral(k))?;
    let sn = WeylGroup::full(GroupKind::Symmetric(n))?;
    let mut fusion = BTreeMap::new();
    for (g, s) in elements.iter().zip(&signed) {
        fusion.insert(bk.class_key(s)[0].clone(), sn.class_key(g)[0].clone());
    }
    Ok(FixedWeylGroup { n, k, elements, signed, fusion })
}
