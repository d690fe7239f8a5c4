use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sltau_core::dimension::orbit_size;
use sltau_core::lattice::saturate;
use sltau_core::oracle::enumerate_group;
use sltau_core::weyl::{j_induce, Factor, GroupKind, WeylGroup};
use sltau_core::{class_of, GroupElement};

fn classify(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let xs: Vec<GroupElement> = (0..32).map(|_| GroupElement::random(3, 4, 1, &mut rng)).collect();
    c.bench_function("class_of n=3 over GF(16)", |b| {
        b.iter(|| {
            for x in &xs {
                black_box(class_of(black_box(x)).unwrap());
            }
        })
    });
}

fn orbits(c: &mut Criterion) {
    let tau = GroupElement::tau(3, 1);
    c.bench_function("BFS orbit of tau over GF(4)", |b| b.iter(|| orbit_size(black_box(&tau), 2, 1 << 24).unwrap()));
    let mut g = c.benchmark_group("enumeration");
    g.sample_size(10);
    g.bench_function("SL(3, 2) x <tau>", |b| b.iter(|| enumerate_group(3, 1).unwrap()));
    g.finish();
}

fn weyl(c: &mut Criterion) {
    let w = WeylGroup::full(GroupKind::Hyperoctahedral(2)).unwrap();
    let h = WeylGroup::new(4, vec![Factor { kind: GroupKind::Symmetric(2), points: vec![0, 1], mirrored: true }]).unwrap();
    let labels = h.irreducibles();
    c.bench_function("j-induction S2 -> B2", |b| {
        b.iter(|| {
            for l in &labels {
                black_box(j_induce(&h, &w, black_box(l)).unwrap());
            }
        })
    });
}

fn lattice(c: &mut Criterion) {
    let rows = vec![vec![2, -4, 6, 0, -4], vec![3, 0, -3, 6, -6], vec![0, 5, 5, -10, 0]];
    c.bench_function("saturate 3x5", |b| b.iter(|| saturate(black_box(&rows), 5)));
}

criterion_group!(benches, classify, orbits, weyl, lattice);
criterion_main!(benches);
