//! The map `E` from the τ-coset to irreducibles of `W^D ≅ B_k`, and the strata
//! as its fibers.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::classes::{class_of, families, JordanClassLabel, MiddleClass};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::induction::{full_closure, label_orbit_dim, regular_closure, InduceConfig};
use crate::weyl::{drop_center, j_induce, Factor, GroupKind, IrrLabel, WeylGroup};

/// Irreducible of `W^{D_u}` attached to a unipotent middle class.
pub fn middle_base_label(mc: &MiddleClass) -> Result<IrrLabel> {
    let b = |a: &[usize], c: &[usize]| IrrLabel::Hyperoctahedral(a.to_vec(), c.to_vec());
    let label = match (mc.m, mc.square_type.as_slice(), mc.alternating) {
        (1, _, _) => b(&[], &[]),
        (2, _, true) | (3, [1, 1, 1], _) => b(&[], &[1]),
        (2, _, false) | (3, [3], _) => b(&[1], &[]),
        (4, [1, 1, 1, 1], true) => b(&[], &[1, 1]),
        (4, [1, 1, 1, 1], false) => b(&[], &[2]),
        (4, [2, 2], _) => b(&[1], &[1]),
        (4, [3, 1], _) => b(&[2], &[]),
        _ => return Err(Error::UnsupportedRank(mc.m)),
    };
    Ok(label)
}

/// `W(C(a_s)°)^{D'}` inside `W^D` for the canonical layout of `label`, with the
/// base irreducible `E'(a)`: one symmetric factor per pair block and a
/// hyperoctahedral factor for the middle block.
pub fn centralizer_weyl(label: &JordanClassLabel) -> Result<(WeylGroup, Vec<IrrLabel>)> {
    let n = label.n;
    let degree = 2 * (n / 2);
    let mut factors = Vec::new();
    let mut labels = Vec::new();
    let mut pos = 0;
    for p in &label.unip.partitions {
        let h: usize = p.iter().sum();
        factors.push(Factor {
            kind: GroupKind::Symmetric(h),
            points: (pos..pos + h).map(|i| drop_center(n, i)).collect(),
            mirrored: true,
        });
        labels.push(IrrLabel::Symmetric(p.clone()));
        pos += h;
    }
    if let Some(mc) = &label.unip.middle {
        let k = mc.m / 2;
        if k > 0 {
            let points: Vec<usize> =
                (pos..n - pos).filter(|&i| !(n % 2 == 1 && i == n / 2)).map(|i| drop_center(n, i)).collect();
            factors.push(Factor { kind: GroupKind::Hyperoctahedral(k), points, mirrored: false });
            labels.push(middle_base_label(mc)?);
        }
    }
    Ok((WeylGroup::new(degree, factors)?, labels))
}

/// `E` on a family: truncated induction of the base irreducible to `W^D`.
pub fn e_of_label(label: &JordanClassLabel) -> Result<IrrLabel> {
    if label.n > 4 || label.n < 2 {
        return Err(Error::UnsupportedRank(label.n));
    }
    if label.eps != 1 {
        return Err(Error::InvalidInput("E is defined on the τ-coset".into()));
    }
    let (sub, labels) = centralizer_weyl(label)?;
    let ambient = WeylGroup::full(GroupKind::Hyperoctahedral(label.n / 2))?;
    let mut r = j_induce(&sub, &ambient, &labels)?;
    Ok(r.remove(0))
}

/// `E(a)` for an element of the τ-coset.
pub fn e_map(a: &GroupElement) -> Result<IrrLabel> {
    if a.n() > 4 || a.n() < 2 {
        return Err(Error::UnsupportedRank(a.n()));
    }
    e_of_label(&class_of(a)?)
}

/// A fiber of `E` with its closed/open witness: the stratum equals the union
/// of its members' full closures intersected with the orbits of dimension
/// `open_dimension`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumDescriptor {
    pub e_label: IrrLabel,
    pub members: Vec<JordanClassLabel>,
    pub orbit_dimension: usize,
    pub closed_witness: Vec<JordanClassLabel>,
    pub open_dimension: usize,
}

/// Groups the families of the τ-coset by `E`. With `verify`, checks that every
/// stratum is the union of its members' regular closures and equals its
/// closed/open witness; any disagreement is a `ConsistencyFailure`.
pub fn strata_partition(n: usize, cfg: &InduceConfig, verify: bool) -> Result<Vec<StratumDescriptor>> {
    if !(2..=4).contains(&n) {
        return Err(Error::UnsupportedRank(n));
    }
    let mut fibers: BTreeMap<IrrLabel, Vec<JordanClassLabel>> = BTreeMap::new();
    for l in families(n)? {
        fibers.entry(e_of_label(&l)?).or_default().push(l);
    }
    let mut out = Vec::new();
    for (e_label, members) in fibers {
        let dims: BTreeSet<usize> = members.iter().map(label_orbit_dim).collect::<Result<_>>()?;
        if dims.len() != 1 {
            return Err(Error::ConsistencyFailure(format!("stratum {e_label} mixes orbit dimensions {dims:?}")));
        }
        let d = *dims.iter().next().unwrap();
        let mut closed: BTreeSet<JordanClassLabel> = BTreeSet::new();
        if verify {
            let mine: BTreeSet<&JordanClassLabel> = members.iter().collect();
            let mut saturation = BTreeSet::new();
            for m in &members {
                saturation.extend(regular_closure(m, cfg)?);
                closed.extend(full_closure(m, cfg)?);
            }
            if saturation.iter().collect::<BTreeSet<_>>() != mine {
                return Err(Error::ConsistencyFailure(format!(
                    "E-fiber {e_label} differs from the regular-closure saturation {:?}",
                    saturation
                )));
            }
            let mut open_part = BTreeSet::new();
            for c in &closed {
                if label_orbit_dim(c)? == d {
                    open_part.insert(c);
                }
            }
            if open_part != mine {
                return Err(Error::ConsistencyFailure(format!("stratum {e_label} is not closed ∩ open")));
            }
        }
        out.push(StratumDescriptor {
            e_label,
            members,
            orbit_dimension: d,
            closed_witness: closed.into_iter().collect(),
            open_dimension: d,
        });
    }
    Ok(out)
}
